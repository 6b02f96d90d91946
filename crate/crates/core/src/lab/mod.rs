//! Experiment driver: configuration, asymptotic fits, reports and plots.
//!
//! Every experiment turns an [`ExperimentConfig`] into a list of named text
//! [`Artifact`]s. Outputs are deterministic given the configuration and its
//! seed; wall-clock timings appear only when asked for.

pub mod bt;
pub mod config;
pub mod fit;
pub mod plot;
pub mod presets;

pub use bt::{bt_experiment, split_lines, BtReport, ExponentLedger};
pub use config::{ExperimentConfig, ExperimentKind, Overrides};
pub use fit::{fit_asymptotic, fit_points, FitError, FitMode, FitReport, Prediction};

use crate::arith::{format_rat, parse_rat, primes_up_to, rat_floor, rat_to_f64};
use crate::enumerate::{
    content_sweep_histogram, count_series, count_series_timed, moebius_inverted_count,
    moebius_series, restriction_count_check, CountSeries, EnumError, EnumerationTask, VerifyPolicy,
};
use crate::heights::{ArchNorm, HeightError};
use crate::nfcore::{NfError, NumberField};
use crate::piclattice::{a_invariant, b_invariant, induce, GaloisLattice, PicError, PicardLattice};
use crate::tamagawa::{
    density_factorization_check, l_factor_induction_check, peyre_constant,
    tamagawa_restriction_check, TamagawaError, TamagawaInput,
};
use crate::weilres::{restrict_projective, ExtensionData, WeilError};
use config::{CountMethod, ModelKind};
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("fit failed")]
    Fit(#[from] FitError),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("non-split fiber: {0}")]
    NonSplitWitness(String),
    #[error("cannot write {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Field(#[from] NfError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Picard(#[from] PicError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error(transparent)]
    Tamagawa(#[from] TamagawaError),
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Math,
    Mismatch,
    Io,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Math => 3,
            ErrorClass::Mismatch => 4,
            ErrorClass::Io => 1,
        }
    }
}

impl LabError {
    pub fn class(&self) -> ErrorClass {
        match self {
            LabError::Config(_) => ErrorClass::Config,
            LabError::Io { .. } => ErrorClass::Io,
            LabError::Mismatch(_) | LabError::NonSplitWitness(_) => ErrorClass::Mismatch,
            LabError::Enumerate(EnumError::MismatchFound(_)) => ErrorClass::Mismatch,
            _ => ErrorClass::Math,
        }
    }
}

/// A named output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: &str, contents: String) -> Self {
        Artifact {
            name: name.to_string(),
            contents,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub experiment: ExperimentKind,
    pub artifacts: Vec<Artifact>,
    /// Short human-readable summary.
    pub summary: String,
    /// `Some(false)` when a check found a mismatch.
    pub passed: Option<bool>,
}

impl Outcome {
    pub fn artifact(&self, name: &str) -> Option<&str> {
        self.artifacts
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.contents.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock timings in the series CSV.
    pub timings: bool,
}

/// Writes every artifact to `dir/<prefix>_<name>` and returns the paths.
pub fn emit_outputs(outcome: &Outcome, dir: &Path, prefix: &str) -> Result<Vec<PathBuf>, LabError> {
    std::fs::create_dir_all(dir).map_err(|source| LabError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for a in &outcome.artifacts {
        let path = dir.join(format!("{prefix}_{}", a.name));
        std::fs::write(&path, &a.contents).map_err(|source| LabError::Io {
            path: path.clone(),
            source,
        })?;
        out.push(path);
    }
    Ok(out)
}

/// Runs the experiment named in the configuration.
pub fn run_experiment(cfg: &ExperimentConfig, opts: RunOptions) -> Result<Outcome, LabError> {
    match cfg.experiment {
        ExperimentKind::Schanuel => run_series(cfg, opts, true),
        ExperimentKind::Enumerate => run_series(cfg, opts, cfg.fit.is_some()),
        ExperimentKind::Restriction => run_restriction_check(cfg),
        ExperimentKind::Tamagawa => run_tamagawa_check(cfg),
        ExperimentKind::Peyre => run_peyre(cfg),
        ExperimentKind::Bt => run_bt(cfg),
    }
}

fn projective_dim(cfg: &ExperimentConfig) -> usize {
    cfg.variety.blocks[0] - 1
}

/// Counts along the configured ladder with the configured route.
pub fn count_configured(cfg: &ExperimentConfig, opts: RunOptions) -> Result<CountSeries, LabError> {
    let f = cfg.number_field()?;
    let ladder = cfg.ladder_values()?;
    let spec = cfg.ladder.as_ref().expect("ladder_values succeeded");
    let route_ok = cfg.is_projective_space() && matches!(cfg.arch_norm()?, ArchNorm::Max);
    match spec.method {
        CountMethod::Enumerate => {
            let sys = cfg.system(&f)?;
            let top = ladder.last().expect("nonempty").clone();
            let mut task =
                EnumerationTask::from_system(&sys, top)?.with_partitions(spec.partitions);
            task.bundle = cfg.bundle()?;
            Ok(if opts.timings {
                count_series_timed(&task, &ladder)?
            } else {
                count_series(&task, &ladder)?
            })
        }
        CountMethod::Sweep | CountMethod::Moebius if !route_ok => Err(LabError::Config(
            "the sweep and moebius routes count projective space with max norms only".into(),
        )),
        CountMethod::Sweep => {
            let start = Instant::now();
            let hmax = rat_floor(ladder.last().expect("nonempty"))
                .to_u64()
                .ok_or_else(|| LabError::Config("ladder too large".into()))?;
            let hist = content_sweep_histogram(&f, projective_dim(cfg), hmax)?;
            let mut counts = Vec::with_capacity(ladder.len());
            let mut acc = 0u128;
            let mut t = 0usize;
            for b in &ladder {
                let top = rat_floor(b).to_usize().unwrap_or(0);
                while t <= top {
                    acc += hist[t];
                    t += 1;
                }
                counts.push(acc);
            }
            let mut elapsed = vec![None; ladder.len()];
            if opts.timings {
                *elapsed.last_mut().expect("nonempty") = Some(start.elapsed().as_millis() as u64);
            }
            Ok(CountSeries {
                ladder,
                counts,
                elapsed_ms: elapsed,
            })
        }
        CountMethod::Moebius => {
            let n = projective_dim(cfg);
            if opts.timings {
                let start = Instant::now();
                let mut counts = Vec::new();
                let mut elapsed = Vec::new();
                for b in &ladder {
                    counts.push(moebius_inverted_count(&f, n, b)?);
                    elapsed.push(Some(start.elapsed().as_millis() as u64));
                }
                Ok(CountSeries {
                    ladder,
                    counts,
                    elapsed_ms: elapsed,
                })
            } else {
                let counts = moebius_series(&f, n, &ladder)?;
                Ok(CountSeries {
                    elapsed_ms: vec![None; ladder.len()],
                    ladder,
                    counts,
                })
            }
        }
    }
}

/// The lattice named in the configuration, or `P^n` for projective space.
fn configured_lattice(cfg: &ExperimentConfig) -> Option<(PicardLattice, Vec<i64>)> {
    let lat = match &cfg.variety.lattice {
        Some(name) => PicardLattice::preset(name)?,
        None if cfg.is_projective_space() => PicardLattice::projective_space(projective_dim(cfg)),
        None => return None,
    };
    let l = match &cfg.variety.line_bundle {
        Some(l) => l.clone(),
        None if lat.rank == 1 => vec![1],
        None => return None,
    };
    Some((lat, l))
}

fn series_plot(title: &str, series: &CountSeries, fit: Option<&FitReport>) -> String {
    let data: Vec<(f64, f64)> = series
        .ladder
        .iter()
        .zip(&series.counts)
        .map(|(b, &n)| (rat_to_f64(b), n as f64))
        .collect();
    let fitted: Option<Vec<(f64, f64)>> = fit.map(|r| {
        data.iter()
            .filter(|(b, _)| *b >= 3.0)
            .map(|&(b, _)| {
                let lb = b.ln();
                (b, r.c * b.powf(r.a) * lb.powf(r.b - 1.0))
            })
            .collect()
    });
    plot::loglog_svg(title, &data, fitted.as_deref())
}

/// Counting, optionally followed by a fit against the predicted exponents
/// and, for projective space, Peyre's constant.
pub fn run_series(
    cfg: &ExperimentConfig,
    opts: RunOptions,
    with_fit: bool,
) -> Result<Outcome, LabError> {
    let f = cfg.number_field()?;
    let series = count_configured(cfg, opts)?;
    let title = format!("N(B) on {} over {}", describe_variety(cfg), f.name());
    let mut artifacts = vec![Artifact::new("series.csv", series.to_csv())];
    let mut summary = format!(
        "{} rungs up to B = {}, N = {}\n",
        series.ladder.len(),
        format_rat(series.ladder.last().expect("nonempty")),
        series.counts.last().expect("nonempty")
    );
    let mut passed = None;
    if !with_fit {
        artifacts.push(Artifact::new(
            "plot.svg",
            series_plot(&title, &series, None),
        ));
        return Ok(Outcome {
            experiment: cfg.experiment,
            artifacts,
            summary,
            passed,
        });
    }
    let mut prediction = None;
    if let Some((lat, l)) = configured_lattice(cfg) {
        let a = rat_to_f64(&a_invariant(&lat, &l)?);
        let b = b_invariant(&lat, &l)? as f64;
        prediction = Some(Prediction { a, b, c: None });
    }
    let wants_constant = cfg.experiment == ExperimentKind::Schanuel;
    if wants_constant {
        if !(cfg.is_projective_space() && matches!(cfg.arch_norm()?, ArchNorm::Max)) {
            return Err(LabError::Config(
                "the Schanuel experiment needs projective space with max norms".into(),
            ));
        }
        let pc = peyre_constant(
            &TamagawaInput::projective_space(&f, projective_dim(cfg)),
            &cfg.tamagawa_config(),
        )?;
        artifacts.push(Artifact::new("peyre_ledger.csv", pc.ledger_csv()));
        if let Some(p) = prediction.as_mut() {
            p.c = Some(pc.c);
        }
    }
    let mode = cfg.fit_mode(prediction.as_ref().map(|p| p.a))?;
    let mut report = fit_asymptotic(&series, mode)?;
    report.prediction = prediction.clone();
    let _ = writeln!(
        summary,
        "a = {:.4} +- {:.4}, b = {:.4} +- {:.4}, c = {:.6}",
        report.a, report.a_se, report.b, report.b_se, report.c
    );
    if let Some(c) = prediction.as_ref().and_then(|p| p.c) {
        let rel = (report.c - c).abs() / c;
        let _ = writeln!(
            summary,
            "predicted c = {c:.6}, relative difference {rel:.4}"
        );
        if let Some(tol) = cfg.fit.as_ref().and_then(|f| f.c_tolerance) {
            passed = Some(rel <= tol);
            let _ = writeln!(
                summary,
                "tolerance {tol}: {}",
                if rel <= tol { "PASS" } else { "FAIL" }
            );
        }
    }
    artifacts.push(Artifact::new("fit.txt", report.to_text()));
    artifacts.push(Artifact::new(
        "plot.svg",
        series_plot(&title, &series, Some(&report)),
    ));
    Ok(Outcome {
        experiment: cfg.experiment,
        artifacts,
        summary,
        passed,
    })
}

fn describe_variety(cfg: &ExperimentConfig) -> String {
    let v = &cfg.variety;
    match v.model {
        ModelKind::ResP1Quadric => "Res P1 (quadric model)".into(),
        ModelKind::System if cfg.is_projective_space() => format!("P{}", projective_dim(cfg)),
        ModelKind::System => {
            let blocks: Vec<String> = v.blocks.iter().map(|b| format!("P{}", b - 1)).collect();
            if v.equations.is_empty() {
                blocks.join(" x ")
            } else {
                format!("{{{}}} in {}", v.equations.join(", "), blocks.join(" x "))
            }
        }
    }
}

fn compiled_restriction(
    cfg: &ExperimentConfig,
) -> Result<crate::weilres::CompiledRestriction, LabError> {
    let f = cfg.number_field()?;
    if cfg.variety.model != ModelKind::System {
        return Err(LabError::Config(
            "restriction runs on a system variety".into(),
        ));
    }
    let sys = cfg.system(&f)?;
    Ok(restrict_projective(
        &sys,
        &ExtensionData::over_rationals(&f),
    )?)
}

/// The compiled restriction of scalars of the variety to `Q`.
pub fn run_restrict(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    let c = compiled_restriction(cfg)?;
    let dump = c.dump();
    Ok(Outcome {
        experiment: cfg.experiment,
        summary: format!(
            "{} equations over Q on the cone, {} charts\n",
            c.cone.equations.len(),
            c.charts.len()
        ),
        artifacts: vec![Artifact::new("restriction.txt", dump)],
        passed: None,
    })
}

/// `N(X, B)` over the field against `N(Res X, B)` over `Q`.
pub fn run_restriction_check(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    if !matches!(cfg.arch_norm()?, ArchNorm::Max) {
        return Err(LabError::Config(
            "the restriction count check uses max norms".into(),
        ));
    }
    let c = compiled_restriction(cfg)?;
    let ladder = cfg.ladder_values()?;
    let full = parse_rat(&cfg.cutoffs.verify_full_up_to).expect("validated");
    let policy = VerifyPolicy {
        full_up_to: full,
        stride: cfg.cutoffs.verify_stride,
    };
    let r = restriction_count_check(&c, &ladder, &policy)?;
    let mut csv = String::from("B,field_side,base_side,equal\n");
    for i in 0..r.ladder.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            format_rat(&r.ladder[i]),
            r.f_counts[i],
            r.e_counts[i],
            r.f_counts[i] == r.e_counts[i]
        );
    }
    let mut report = String::new();
    let _ = writeln!(report, "field = {}", c.ext.top.name());
    let _ = writeln!(report, "variety = {}", describe_variety(cfg));
    let _ = writeln!(
        report,
        "verify_full_up_to = {}",
        format_rat(&policy.full_up_to)
    );
    let _ = writeln!(report, "verify_stride = {}", policy.stride);
    let _ = writeln!(report, "verified_points = {}", r.verified_points);
    let _ = writeln!(report, "matched_base_points = {}", r.matched_base_points);
    let _ = writeln!(report, "exact_equality = {}", r.passed());
    Ok(Outcome {
        experiment: cfg.experiment,
        summary: report.clone(),
        artifacts: vec![
            Artifact::new("counts.csv", csv),
            Artifact::new("report.txt", report),
        ],
        passed: Some(r.passed()),
    })
}

/// Tamagawa numbers of `P^1` over the field and of its restriction, with
/// the exact L-factor and density comparisons prime by prime.
pub fn run_tamagawa_check(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    let f = cfg.number_field()?;
    let tc = cfg.tamagawa_config();
    let r = tamagawa_restriction_check(&f, &tc)?;
    let mut artifacts = vec![Artifact::new("ledger.csv", r.ledger_csv())];
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "tau(P1/{}) = {:.6} +- {:.6}, tau(Res) = {:.6} +- {:.6}, relative difference {:.5}, combined error {:.5}",
        f.name(),
        r.top.value,
        r.top.error,
        r.base.value,
        r.base.error,
        r.relative_difference,
        r.combined_error
    );
    let mut ok = r.passed();
    if f.degree() == 2 {
        let (lf, lf_ok) = lfactor_table(&f, cfg.cutoffs.lfactor_cutoff)?;
        let (df, df_ok) = density_table(&f, cfg.cutoffs.density_cutoff)?;
        let _ = writeln!(
            summary,
            "L-factor induction up to {}: {}",
            cfg.cutoffs.lfactor_cutoff, lf_ok
        );
        let _ = writeln!(
            summary,
            "density factorization up to {}: {}",
            cfg.cutoffs.density_cutoff, df_ok
        );
        ok &= lf_ok && df_ok;
        artifacts.push(Artifact::new("lfactors.csv", lf));
        artifacts.push(Artifact::new("densities.csv", df));
    }
    let _ = writeln!(summary, "passed = {ok}");
    Ok(Outcome {
        experiment: cfg.experiment,
        artifacts,
        summary,
        passed: Some(ok),
    })
}

/// Exact comparison of `L_p(s, Ind Pic P^1)` with the product over primes
/// above `p`, for `s = 1, 2` and every `p <= cutoff`.
pub fn lfactor_table(f: &NumberField, cutoff: u64) -> Result<(String, bool), LabError> {
    let base = GaloisLattice::trivial(PicardLattice::projective_space(1));
    let ind = induce(
        &base,
        f.degree(),
        &(0..f.degree())
            .map(|i| (i + 1) % f.degree())
            .collect::<Vec<_>>(),
    )?;
    let mut csv = String::from("p,splitting,s,base_side,field_side,equal\n");
    let mut ok = true;
    for p in primes_up_to(cutoff) {
        let r = l_factor_induction_check(f, &ind, 1, p)?;
        let split: Vec<String> = r
            .splitting
            .iter()
            .map(|(e, g)| format!("e{e}f{g}"))
            .collect();
        for (s, a, b) in &r.values {
            let _ = writeln!(
                csv,
                "{p},{},{s},{},{},{}",
                split.join(" "),
                format_rat(a),
                format_rat(b),
                a == b
            );
        }
        ok &= r.passed();
    }
    Ok((csv, ok))
}

/// Exact point counts of the restricted quadric against the residue fields
/// above `p`, for every prime `p <= cutoff` not dividing the discriminant.
pub fn density_table(f: &NumberField, cutoff: u64) -> Result<(String, bool), LabError> {
    let disc = f.discriminant().clone();
    let mut csv = String::from("p,base_count,field_counts,base_density,field_density,equal\n");
    let mut ok = true;
    for p in primes_up_to(cutoff) {
        if (&disc % num_bigint::BigInt::from(p)) == 0.into() {
            continue;
        }
        let r = density_factorization_check(f, p)?;
        let tops: Vec<String> = r
            .top_counts
            .iter()
            .map(|(q, c)| format!("{c}@{q}"))
            .collect();
        let _ = writeln!(
            csv,
            "{p},{},{},{},{},{}",
            r.base_count,
            tops.join(" "),
            format_rat(&r.base_density),
            format_rat(&r.top_density),
            r.passed()
        );
        ok &= r.passed();
    }
    Ok((csv, ok))
}

/// Peyre's constant for projective space or the restricted quadric model.
pub fn run_peyre(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    let f = cfg.number_field()?;
    let input = match cfg.variety.model {
        ModelKind::ResP1Quadric => TamagawaInput::res_p1_quadric(&f)?,
        ModelKind::System if cfg.is_projective_space() => {
            TamagawaInput::projective_space(&f, projective_dim(cfg))
        }
        ModelKind::System => {
            return Err(LabError::Config(
                "Peyre constants are assembled for projective space and the restricted quadric"
                    .into(),
            ))
        }
    };
    let pc = peyre_constant(&input, &cfg.tamagawa_config())?;
    Ok(Outcome {
        experiment: cfg.experiment,
        summary: format!(
            "alpha = {}, beta = {}, tau = {:.6} +- {:.6}, c = {:.6} +- {:.6}\n",
            format_rat(&pc.alpha),
            pc.beta,
            pc.tau.value,
            pc.tau.error,
            pc.c,
            pc.c_error
        ),
        artifacts: vec![Artifact::new("peyre_ledger.csv", pc.ledger_csv())],
        passed: None,
    })
}

pub fn run_bt(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    let f = cfg.number_field()?;
    let spec = cfg.bt_spec();
    let bound = parse_rat(&spec.fiber_bound).expect("validated");
    let ladder = bt::linear_ladder(&bound, spec.fiber_rungs);
    let r = bt_experiment(&f, spec.samples, spec.coefficient_range, &ladder, cfg.seed)?;
    let series = CountSeries {
        ladder: r.counts.ladder.clone(),
        counts: r.counts.total.clone(),
        elapsed_ms: vec![None; r.counts.ladder.len()],
    };
    let plot = series_plot("points on y0^3+y1^3+y2^3+y3^3 = 0", &series, None);
    let split = r.fibers.iter().filter(|c| c.lines == 27).count();
    Ok(Outcome {
        experiment: cfg.experiment,
        summary: format!(
            "{split}/{} sampled fibers split; rho(X_F) = {}; fiber points up to B = {}: {} ({} off the lines)\n",
            r.fibers.len(),
            r.ledger.rho_x,
            format_rat(&bound),
            r.counts.total.last().copied().unwrap_or(0),
            r.counts.off_lines.last().copied().unwrap_or(0)
        ),
        artifacts: vec![
            Artifact::new("fibers.csv", r.fibers_csv()),
            Artifact::new("fiber_counts.csv", r.counts.to_csv()),
            Artifact::new("ledger.txt", r.ledger_text()),
            Artifact::new("plot.svg", plot),
        ],
        passed: Some(r.passed()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes() {
        assert_eq!(LabError::Config("x".into()).class().exit_code(), 2);
        assert_eq!(LabError::Precondition("x".into()).class().exit_code(), 3);
        assert_eq!(LabError::NonSplitWitness("x".into()).class().exit_code(), 4);
        assert_eq!(
            LabError::from(EnumError::MismatchFound("x".into())).class(),
            ErrorClass::Mismatch
        );
    }

    #[test]
    fn small_series_routes_agree() {
        let text = r#"
experiment = "enumerate"
[field]
name = "Q(i)"
[variety]
blocks = [2]
[ladder]
b0 = "3"
factor = "2"
rungs = 6
"#;
        let mut cfg = ExperimentConfig::from_toml_str(text).unwrap();
        let a = count_configured(&cfg, RunOptions::default()).unwrap();
        for m in [CountMethod::Sweep, CountMethod::Moebius] {
            cfg.ladder.as_mut().unwrap().method = m;
            assert_eq!(count_configured(&cfg, RunOptions::default()).unwrap(), a);
        }
        let t = count_configured(&cfg, RunOptions { timings: true }).unwrap();
        assert_eq!(t.counts, a.counts);
        assert!(t.elapsed_ms.iter().all(|x| x.is_some()));
    }
}
