use proptest::prelude::*;
use weilheight::lab::{fit_points, ExperimentConfig, FitMode};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn ladder() -> Vec<f64> {
    (0..14).map(|i| 4.0 * 3f64.powi(i)).collect()
}

fn synthetic(a: f64, b: u32, c: f64, noise: &[f64]) -> Vec<f64> {
    ladder()
        .iter()
        .zip(noise.iter().chain(std::iter::repeat(&0.0)))
        .map(|(&x, e)| c * x.powf(a) * x.ln().powi(b as i32 - 1) * e.exp())
        .collect()
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn exact_series_are_recovered(a in 1.0f64..=4.0, b in 1u32..=4, c in 0.1f64..=10.0) {
        let r = fit_points(&ladder(), &synthetic(a, b, c, &[]), FitMode::Free).unwrap();
        prop_assert!((r.a - a).abs() <= 1e-6 * a, "a {} vs {}", r.a, a);
        prop_assert!((r.b - b as f64).abs() <= 1e-6 * b as f64, "b {} vs {}", r.b, b);
        prop_assert!((r.c - c).abs() <= 1e-6 * c, "c {} vs {}", r.c, c);
        let w = ladder().len();
        prop_assert!(r.window.0 < r.window.1 && r.window.1 <= w);
    }

    #[test]
    fn pinning_the_true_exponent_costs_little(
        a in 1.0f64..=4.0,
        b in 1u32..=4,
        c in 0.1f64..=10.0,
        noise in prop::collection::vec(-0.02f64..=0.02, 14),
    ) {
        let n = synthetic(a, b, c, &noise);
        let free = fit_points(&ladder(), &n, FitMode::Free).unwrap();
        let fixed = fit_points(&ladder(), &n, FitMode::FixA(a)).unwrap();
        prop_assert!(free.a.is_finite() && free.b.is_finite() && fixed.b.is_finite());
        // Per-rung residual growth stays inside the free fit's error bars on log N.
        let k = free.residuals.len() as f64;
        let excess = ((fixed.rss() - free.rss()).max(0.0) / k).sqrt();
        let log_se = free.a_se * free.window_bounds.1.ln() + free.b_se * free.window_bounds.1.ln().ln() + free.c_se / free.c;
        prop_assert!(excess <= log_se, "excess {} vs error bar {}", excess, log_se);
    }
}

fn toml_for(
    field: &str,
    blocks: usize,
    b0: &str,
    factor: u32,
    rungs: usize,
    method: &str,
    seed: u64,
) -> String {
    format!(
        r#"
experiment = "enumerate"
seed = {seed}
[field]
name = "{field}"
[variety]
blocks = [{blocks}]
[ladder]
b0 = "{b0}"
factor = "{factor}"
rungs = {rungs}
method = "{method}"
[fit]
mode = "fix_a"
a = "{}"
"#,
        blocks
    )
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn configs_round_trip(
        field in prop::sample::select(vec!["Q", "Q(i)", "Q(sqrt-3)"]),
        blocks in 2usize..=4,
        b0 in prop::sample::select(vec!["3", "4", "7/2", "15625/4096", "2.5"]),
        factor in 2u32..=5,
        rungs in 1usize..=12,
        method in prop::sample::select(vec!["enumerate", "sweep", "moebius"]),
        seed in any::<u64>(),
    ) {
        let text = toml_for(field, blocks, b0, factor, rungs, method, seed);
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        prop_assert_eq!(&again, &cfg);
        prop_assert_eq!(again.to_toml_string().unwrap(), cfg.to_toml_string().unwrap());
        let bad = format!("{text}\n[extra]\nkey = 1\n");
        prop_assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    }
}
