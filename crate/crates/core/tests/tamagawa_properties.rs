use proptest::prelude::*;
use weilheight::arith::{primes_up_to, rat_frac};
use weilheight::nfcore::{dedekind_zeta, NumberField};
use weilheight::poly::{var_names, Poly};
use weilheight::tamagawa::{
    count_mod_prime_power, local_density, tamagawa_number, TamagawaConfig, TamagawaInput,
};
use weilheight::weilres::{Ambient, PolynomialSystem};
use weilheight::Rat;

fn field(i: usize) -> NumberField {
    match i {
        0 => NumberField::rationals(),
        1 => NumberField::gaussian(),
        _ => NumberField::eisenstein(),
    }
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn diagonal_conic(a: i64, b: i64, c: i64) -> PolynomialSystem {
    let q = NumberField::rationals();
    let names = var_names("x", 3);
    let eq =
        Poly::parse_equation(&q, &format!("{a}*x0^2 + {b}*x1^2 + {c}*x2^2 = 0"), &names).unwrap();
    PolynomialSystem::new(q, names, vec![eq], vec![], Ambient::Projective(vec![3])).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn zeta_is_at_least_one(i in 0usize..3, s in 1.05f64..=6.0) {
        let z = dedekind_zeta(&field(i), s, 2_000).unwrap();
        prop_assert!(z.value >= 1.0);
        prop_assert!(z.upper() >= z.value);
    }

    #[test]
    fn smooth_conics_have_density_one_plus_one_over_p(k in 1usize..25, a in 1i64..=9, b in 1i64..=9, c in 1i64..=9) {
        let p = primes_up_to(100)[k];
        prop_assume!((a * b * c) % p as i64 != 0);
        let r = local_density(&diagonal_conic(a, b, c), p, 4).unwrap();
        prop_assert_eq!(r.density, rat_frac(p as i64 + 1, p as i64));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn lifted_densities_are_stable(k in 0usize..3, a in 1i64..=3, b in 1i64..=3) {
        // p divides the last coefficient, so the reduction is singular.
        let p = [2u64, 3, 5][k];
        let sys = diagonal_conic(a, b, p as i64);
        if let Ok(r) = local_density(&sys, p, 4) {
            let next = count_mod_prime_power(&sys, p, r.depth + 1).unwrap();
            let d = Rat::new(next.into(), num_bigint::BigInt::from(p).pow(r.depth + 1));
            prop_assert_eq!(d, r.density);
        }
    }
}

#[test]
fn tau_is_stable_under_refinement() {
    for top in [NumberField::gaussian(), NumberField::eisenstein()] {
        let input = TamagawaInput::res_p1_quadric(&top).unwrap();
        let base = TamagawaConfig {
            prime_cutoff: 2_000,
            density_cutoff: 50,
            mc_samples: 50_000,
            weak_approximation: true,
            ..TamagawaConfig::default()
        };
        let fine = TamagawaConfig {
            prime_cutoff: 4_000,
            mc_samples: 200_000,
            ..base.clone()
        };
        let (a, b) = (
            tamagawa_number(&input, &base).unwrap(),
            tamagawa_number(&input, &fine).unwrap(),
        );
        assert!(
            (a.value - b.value).abs() <= a.error + b.error,
            "{}: {} +- {} vs {} +- {}",
            top.name(),
            a.value,
            a.error,
            b.value,
            b.error
        );
    }
}
