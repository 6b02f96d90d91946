use num_bigint::BigInt;
use proptest::prelude::*;
use weilheight::arith::rat_to_f64;
use weilheight::nfcore::{
    absolute_value, archimedean_places, factor_rational_prime, moebius_ideal,
    product_formula_defect, FieldElement, IdealZ, NumberField,
};
use weilheight::Rat;

fn field(i: usize) -> NumberField {
    match i {
        0 => NumberField::rationals(),
        1 => NumberField::gaussian(),
        _ => NumberField::eisenstein(),
    }
}

fn element(d: usize, coords: &[(i64, i64)]) -> FieldElement {
    FieldElement::new(
        coords[..d]
            .iter()
            .map(|&(n, q)| Rat::new(n.into(), q.into()))
            .collect(),
    )
}

fn integral(d: usize, coords: &[i64]) -> FieldElement {
    FieldElement::from_ints(&coords[..d])
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-30i64..=30, 1i64..=7), 2)
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
    fn field_axioms(i in 0usize..3, a in coords(), b in coords(), c in coords()) {
        let f = field(i);
        let d = f.degree();
        let (a, b, c) = (element(d, &a), element(d, &b), element(d, &c));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&a.add(&b), &c), f.mul(&a, &c).add(&f.mul(&b, &c)));
        if !a.is_zero() {
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv), f.one());
        }
    }

    #[test]
    fn norm_is_product_of_embeddings(i in 0usize..3, a in coords()) {
        let f = field(i);
        let x = element(f.degree(), &a);
        let exact = rat_to_f64(&f.norm(&x));
        let product: f64 = archimedean_places(&f).iter().map(|v| absolute_value(&f, &x, v).unwrap()).product();
        prop_assert!((exact.abs() - product).abs() <= 1e-9 * (1.0 + product));
        // A complex place stands for a conjugate pair of embeddings.
        let weight = if f.signature().1 > 0 { 2.0 } else { 1.0 };
        let sum: f64 = f.embeddings(&x).iter().map(|z| weight * z.re).sum();
        prop_assert!((rat_to_f64(&f.trace(&x)) - sum).abs() <= 1e-9 * (1.0 + sum.abs()));
    }

    #[test]
    fn product_formula(i in 0usize..3, a in coords()) {
        let f = field(i);
        let x = element(f.degree(), &a);
        prop_assume!(!x.is_zero());
        prop_assert!(product_formula_defect(&f, &x).unwrap().abs() < 1e-9);
    }

    #[test]
    fn ideal_norms_multiply(i in 1usize..3, a in prop::collection::vec(-40i64..=40, 2), b in prop::collection::vec(-40i64..=40, 2)) {
        let f = field(i);
        let (x, y) = (integral(2, &a), integral(2, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (ix, iy) = (IdealZ::principal(&f, &x).unwrap(), IdealZ::principal(&f, &y).unwrap());
        prop_assert_eq!(ix.mul(&f, &iy).norm(), ix.norm() * iy.norm());
        prop_assert_eq!(ix.norm(), f.norm(&x).to_integer().magnitude().clone().into());
        // Closed under multiplication by the ring.
        for g in ix.basis_elements() {
            for k in 0..2 {
                let mut e = vec![0i64; 2];
                e[k] = 1;
                prop_assert!(ix.contains(&f.mul(&g, &FieldElement::from_ints(&e))));
            }
        }
    }

    #[test]
    fn moebius_is_multiplicative(i in 1usize..3, a in prop::collection::vec(-7i64..=7, 2), b in prop::collection::vec(-7i64..=7, 2)) {
        let f = field(i);
        let (x, y) = (integral(2, &a), integral(2, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (ix, iy) = (IdealZ::principal(&f, &x).unwrap(), IdealZ::principal(&f, &y).unwrap());
        prop_assert!(ix.norm() * iy.norm() <= BigInt::from(10_000));
        prop_assume!(ix.add(&f, &iy).is_unit());
        let prod = ix.mul(&f, &iy);
        prop_assert_eq!(
            moebius_ideal(&f, &prod).unwrap(),
            moebius_ideal(&f, &ix).unwrap() * moebius_ideal(&f, &iy).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn primes_above_p_reconstruct_p(i in 0usize..3, k in 0usize..60) {
        let f = field(i);
        let p = weilheight::arith::primes_up_to(300)[k];
        let primes = factor_rational_prime(&f, p).unwrap();
        let efs: u32 = primes.iter().map(|q| q.e * q.f).sum();
        prop_assert_eq!(efs as usize, f.degree());
        let mut prod = IdealZ::unit(&f);
        for q in &primes {
            prod = prod.mul(&f, &q.ideal.pow(&f, q.e));
        }
        prop_assert_eq!(prod, IdealZ::from_int(&f, p as i64).unwrap());
    }
}
