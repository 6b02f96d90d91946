use proptest::prelude::*;
use weilheight::arith::rat;
use weilheight::enumerate::{
    collect_points, count_series, enum_projective, enum_subvariety, moebius_inverted_count, Elem,
    EnumerationTask, IntRing,
};
use weilheight::heights::{canonicalize, height, MetrizedBundle};
use weilheight::nfcore::{FieldElement, NumberField};
use weilheight::poly::Poly;
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

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn partitions_do_not_change_counts(i in 0usize..3, n in 1usize..=2, top in 20i64..=120, k in 2usize..=5) {
        let f = field(i);
        let ladder: Vec<Rat> = (1..=6).map(|j| rat(top * j / 6).max(rat(1))).collect::<Vec<_>>();
        let mut ladder = ladder;
        ladder.dedup();
        let task = EnumerationTask::projective(&f, n, rat(top));
        let one = count_series(&task, &ladder).unwrap();
        let many = count_series(&task.clone().with_partitions(k), &ladder).unwrap();
        prop_assert_eq!(&one, &many);
        prop_assert!(one.is_monotone());
        let last = *one.counts.last().unwrap();
        prop_assert_eq!(moebius_inverted_count(&f, n, &rat(top)).unwrap(), last);
    }

    #[test]
    fn emitted_points_are_distinct_and_canonical(i in 0usize..3, n in 1usize..=2, b in 2i64..=12) {
        let f = field(i);
        let task = EnumerationTask::projective(&f, n, rat(b));
        let pts = collect_points(&task).unwrap();
        let m = MetrizedBundle::o1(n);
        for (p, h) in &pts {
            let x = p.coords();
            prop_assert_eq!(&canonicalize(&f, x).unwrap()[..], x);
            prop_assert_eq!(&height(&f, x, &m).unwrap(), h);
            prop_assert!(h.le_rat(&rat(b)));
        }
        // Pairwise proportionality is quadratic; keep it to small samples.
        for (a, (p, _)) in pts.iter().enumerate().take(150) {
            for (q, _) in pts[a + 1..].iter().take(150) {
                let (x, y) = (p.coords(), q.coords());
                let proportional = (0..x.len()).all(|r| {
                    (0..x.len()).all(|s| f.mul(&x[r], &y[s]) == f.mul(&x[s], &y[r]))
                });
                prop_assert!(!proportional, "{:?} and {:?}", x, y);
            }
        }
    }

    #[test]
    fn subvariety_counts_filter_the_ambient(i in 0usize..3, b in 3i64..=20) {
        let f = field(i);
        let ring = IntRing::new(&f).unwrap();
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let q = Poly::parse_equation(&f, "x^2 + y^2 = z^2", &names).unwrap();
        let mut task = EnumerationTask::projective(&f, 2, rat(b));
        let mut filtered: Vec<Vec<Elem>> = Vec::new();
        enum_projective(&task, &mut |x, _| {
            let fe: Vec<FieldElement> = x.iter().map(|z| ring.to_field(z)).collect();
            if q.eval(&f, &fe).is_zero() {
                filtered.push(x.to_vec());
            }
        })
        .unwrap();
        task.equations = vec![q];
        let mut on: Vec<Vec<Elem>> = Vec::new();
        enum_subvariety(&task, &mut |x, _| on.push(x.to_vec())).unwrap();
        prop_assert_eq!(on, filtered);
    }
}
