use proptest::prelude::*;
use weilheight::heights::canonicalize;
use weilheight::nfcore::{FieldElement, NumberField};
use weilheight::poly::Poly;
use weilheight::weilres::{
    restrict_affine, restrict_projective, Ambient, ExtensionData, PolynomialSystem,
};
use weilheight::Rat;

fn field(i: usize) -> NumberField {
    if i == 0 {
        NumberField::gaussian()
    } else {
        NumberField::eisenstein()
    }
}

fn elem(raw: &[(i64, i64)]) -> FieldElement {
    FieldElement::new(
        raw.iter()
            .map(|&(a, b)| Rat::new(a.into(), b.into()))
            .collect(),
    )
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `x^2 + y^2 = z^2` in `P^2`, away from `x = 0`.
fn conic(f: &NumberField) -> PolynomialSystem {
    let n = names(&["x", "y", "z"]);
    PolynomialSystem::new(
        f.clone(),
        n.clone(),
        vec![Poly::parse_equation(f, "x^2 + y^2 = z^2", &n).unwrap()],
        vec![Poly::parse(f, "x", &n).unwrap()],
        Ambient::Projective(vec![3]),
    )
    .unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn conic_points_round_trip(i in 0usize..2, t in prop::collection::vec((-12i64..=12, 1i64..=6), 2), s in prop::collection::vec((-5i64..=5, 1i64..=3), 2)) {
        let f = field(i);
        let ext = ExtensionData::over_rationals(&f);
        let sys = conic(&f);
        let c = restrict_projective(&sys, &ext).unwrap();
        prop_assert_eq!(c.cone.vars.len(), 2 * sys.vars.len());
        prop_assert_eq!(c.cone.equations.len(), 2 * sys.equations.len());
        prop_assert_eq!(c.cone.nonvanishing.len(), sys.nonvanishing.len());
        prop_assert!(c.cone.nonvanishing.iter().all(|g| g.len() == 2));
        let t = elem(&t);
        let t2 = f.mul(&t, &t);
        let x = [f.one().sub(&t2), f.mul(&f.from_int(2), &t), f.one().add(&t2)];
        prop_assume!(!x[0].is_zero());
        let s = elem(&s);
        prop_assume!(!s.is_zero());
        let x: Vec<FieldElement> = x.iter().map(|v| f.mul(&s, v)).collect();
        prop_assert!(sys.contains(&x));
        let (chart, y) = c.point_down(&x).unwrap();
        prop_assert!(c.charts[chart].contains(&ext.base, &y));
        let up = c.point_up(chart, &y).unwrap();
        prop_assert_eq!(canonicalize(&f, &up).unwrap(), canonicalize(&f, &x).unwrap());
        prop_assert_eq!(c.point_down(&up).unwrap(), (chart, y));
        let z = c.cone_down(&x);
        prop_assert!(c.cone.contains(&ext.base, &z));
        prop_assert_eq!(c.cone_up(&z), x);
    }

    #[test]
    fn open_condition_is_respected(i in 0usize..2, y in prop::collection::vec((-9i64..=9, 1i64..=4), 2)) {
        let f = field(i);
        let ext = ExtensionData::over_rationals(&f);
        let sys = conic(&f);
        let c = restrict_projective(&sys, &ext).unwrap();
        // (0 : y : +-y) lies on the conic but not in the open subset.
        let y = elem(&y);
        prop_assume!(!y.is_zero());
        let x = vec![f.zero(), y.clone(), y];
        prop_assert!(!sys.contains(&x));
        prop_assert!(c.point_down(&x).is_err());
        prop_assert!(!c.cone.contains(&ext.base, &c.cone_down(&x)));
    }

    #[test]
    fn circle_points_round_trip(i in 0usize..2, t in prop::collection::vec((-12i64..=12, 1i64..=6), 2)) {
        let f = field(i);
        let ext = ExtensionData::over_rationals(&f);
        let n = names(&["x", "y"]);
        let sys = PolynomialSystem::new(
            f.clone(),
            n.clone(),
            vec![Poly::parse_equation(&f, "x^2 + y^2 = 1", &n).unwrap()],
            vec![],
            Ambient::Affine,
        )
        .unwrap();
        let c = restrict_affine(&sys, &ext).unwrap();
        prop_assert_eq!(c.charts[0].vars.len(), 4);
        prop_assert_eq!(c.charts[0].equations.len(), 2);
        let t = elem(&t);
        let t2 = f.mul(&t, &t);
        let den = f.one().add(&t2);
        prop_assume!(!den.is_zero());
        let inv = f.inv(&den).unwrap();
        let x = vec![f.mul(&f.one().sub(&t2), &inv), f.mul(&f.from_int(2), &f.mul(&t, &inv))];
        let (chart, y) = c.point_down(&x).unwrap();
        prop_assert_eq!(c.point_up(chart, &y).unwrap(), x);
    }
}
