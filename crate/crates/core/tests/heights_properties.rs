use num_traits::One;
use proptest::prelude::*;
use weilheight::heights::{
    canonicalize, height, restriction_height, restriction_height_base_side, ArchNorm,
    MetrizedBundle,
};
use weilheight::nfcore::{FieldElement, NumberField};
use weilheight::weilres::{restrict_projective, ExtensionData, PolynomialSystem};
use weilheight::Rat;

fn field(i: usize) -> NumberField {
    match i {
        0 => NumberField::rationals(),
        1 => NumberField::gaussian(),
        _ => NumberField::eisenstein(),
    }
}

fn point(f: &NumberField, n: usize, raw: &[(i64, i64)]) -> Vec<FieldElement> {
    let d = f.degree();
    (0..=n)
        .map(|k| {
            FieldElement::new(
                (0..d)
                    .map(|j| Rat::new(raw[k * 2 + j].0.into(), raw[k * 2 + j].1.into()))
                    .collect(),
            )
        })
        .collect()
}

fn raw_point() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-25i64..=25, 1i64..=5), 8)
}

fn int_point() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-25i64..=25, Just(1i64)), 8)
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
    fn scaling_does_not_change_height(
        i in 0usize..3,
        n in 1usize..=3,
        raw in raw_point(),
        lambda in prop::collection::vec((-9i64..=9, 1i64..=4), 2),
        euclid in any::<bool>(),
    ) {
        let f = field(i);
        let x = point(&f, n, &raw);
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let l = FieldElement::new(lambda[..f.degree()].iter().map(|&(a, b)| Rat::new(a.into(), b.into())).collect());
        prop_assume!(!l.is_zero());
        let mut m = MetrizedBundle::o1(n);
        if euclid {
            m = m.with_norm(ArchNorm::Euclidean).unwrap();
        }
        let h = height(&f, &x, &m).unwrap();
        let scaled: Vec<FieldElement> = x.iter().map(|c| f.mul(&l, c)).collect();
        prop_assert_eq!(height(&f, &scaled, &m).unwrap(), h.clone());
        prop_assert!(h.value >= Rat::one(), "height below one: {:?}", h);
    }

    #[test]
    fn canonical_forms_are_idempotent(i in 0usize..3, n in 1usize..=3, raw in raw_point(), lambda in prop::collection::vec((-9i64..=9, 1i64..=4), 2)) {
        let f = field(i);
        let x = point(&f, n, &raw);
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let l = FieldElement::new(lambda[..f.degree()].iter().map(|&(a, b)| Rat::new(a.into(), b.into())).collect());
        prop_assume!(!l.is_zero());
        let c = canonicalize(&f, &x).unwrap();
        prop_assert_eq!(canonicalize(&f, &c).unwrap(), c.clone());
        let scaled: Vec<FieldElement> = x.iter().map(|v| f.mul(&l, v)).collect();
        prop_assert_eq!(canonicalize(&f, &scaled).unwrap(), c);
    }

    #[test]
    fn restriction_heights_match_both_routes(i in 1usize..3, n in 1usize..=2, raw in int_point()) {
        let f = field(i);
        let x = point(&f, n, &raw);
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let ext = ExtensionData::over_rationals(&f);
        let c = restrict_projective(&PolynomialSystem::projective_space(&f, n), &ext).unwrap();
        let m = MetrizedBundle::o1(n);
        let h = height(&f, &x, &m).unwrap();
        let (chart, y) = c.point_down(&x).unwrap();
        prop_assert_eq!(restriction_height(&c, chart, &y, &m).unwrap(), h.clone());
        prop_assert_eq!(restriction_height_base_side(&ext, &c.cone_down(&x), &m).unwrap(), h);
    }
}
