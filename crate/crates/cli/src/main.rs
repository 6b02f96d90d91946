//! `weilheight`: run point-counting and Peyre-constant experiments from a
//! configuration file or a packaged preset.
//!
//! Exit codes: 0 success, 2 configuration error, 3 failed mathematical
//! precondition, 4 mismatch found by a check.

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use weilheight::arith::parse_rat;
use weilheight::enumerate::CountSeries;
use weilheight::lab::{
    self, emit_outputs, fit_asymptotic, presets, ExperimentConfig, FitMode, LabError, Outcome,
    Overrides, RunOptions,
};

#[derive(Parser, Debug)]
#[command(
    name = "weilheight",
    version,
    about = "Rational points of bounded height and Weil restriction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment named in the configuration.
    Run(Common),
    /// Count points along the ladder.
    Enumerate(Common),
    /// Count (or read a series) and fit `c B^a (log B)^(b-1)`.
    Fit(FitArgs),
    /// Print the restriction of scalars of the variety to Q.
    Restrict(Common),
    /// Assemble Peyre's constant.
    Peyre(Common),
    /// Compare point counts over the field with counts on the restriction.
    CheckRestriction(Common),
    /// Compare Tamagawa numbers of P^1 and its restriction.
    CheckTamagawa(Common),
    /// Split-fiber check and exponent ledger for the cubic family.
    BtExperiment(Common),
    /// List the packaged presets.
    Presets {
        /// Print the preset's configuration.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Configuration file (TOML).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Name of a packaged preset.
    #[arg(long)]
    preset: Option<String>,
    /// Top of the ladder.
    #[arg(long)]
    bmax: Option<String>,
    /// Geometric ladder as B0:factor:rungs.
    #[arg(long)]
    ladder: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    prime_cutoff: Option<u64>,
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Directory for output files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock timings in series output.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    common: Common,
    /// Fit an existing series CSV (`B,count,...`) instead of counting.
    #[arg(long)]
    series: Option<PathBuf>,
    /// Pin the exponent of B.
    #[arg(long)]
    fix_a: Option<String>,
}

fn load_config(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match (&c.config, &c.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_toml_str(&text)
                .with_context(|| format!("reading {}", path.display()))?
        }
        (None, Some(name)) => presets::load(name)?,
        (None, None) => {
            return Err(LabError::Config("give --config PATH or --preset NAME".into()).into())
        }
    };
    cfg.apply(&Overrides {
        bmax: c.bmax.clone(),
        ladder: c.ladder.clone(),
        seed: c.seed,
        prime_cutoff: c.prime_cutoff,
        mc_samples: c.mc_samples,
    })?;
    Ok(cfg)
}

fn finish(cfg: &ExperimentConfig, common: &Common, outcome: &Outcome) -> Result<ExitCode> {
    print!("{}", outcome.summary);
    let dir = common
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from));
    if let Some(dir) = dir {
        for p in emit_outputs(outcome, &dir, &cfg.prefix())? {
            println!("wrote {}", p.display());
        }
    }
    Ok(match outcome.passed {
        Some(false) => {
            eprintln!("check failed");
            ExitCode::from(4)
        }
        _ => ExitCode::SUCCESS,
    })
}

fn read_series(path: &Path) -> Result<CountSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
    let mut ladder = Vec::new();
    let mut counts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut cols = line.split(',');
        let (Some(b), Some(n)) = (cols.next(), cols.next()) else {
            continue;
        };
        let (Some(b), Ok(n)) = (parse_rat(b.trim()), n.trim().parse::<u128>()) else {
            if i == 0 {
                continue; // header
            }
            return Err(LabError::Config(format!(
                "{}:{}: expected B,count",
                path.display(),
                i + 1
            ))
            .into());
        };
        ladder.push(b);
        counts.push(n);
    }
    let n = ladder.len();
    Ok(CountSeries {
        ladder,
        counts,
        elapsed_ms: vec![None; n],
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = |c: &Common| RunOptions { timings: c.timings };
    match cli.command {
        Command::Presets { show } => {
            match show {
                Some(name) => {
                    let src = presets::source(&name)
                        .ok_or_else(|| LabError::Config(format!("unknown preset {name:?}")))?;
                    print!("{src}");
                }
                None => {
                    for n in presets::names() {
                        println!("{n}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_experiment(&cfg, opts(&c))?;
            finish(&cfg, &c, &out)
        }
        Command::Enumerate(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_series(&cfg, opts(&c), false)?;
            finish(&cfg, &c, &out)
        }
        Command::Fit(f) => {
            if let Some(path) = &f.series {
                let series = read_series(path)?;
                let mode = match &f.fix_a {
                    Some(a) => FitMode::FixA(
                        a.parse::<f64>()
                            .map_err(|_| LabError::Config(format!("--fix-a: bad number {a:?}")))?,
                    ),
                    None => FitMode::Free,
                };
                let r = fit_asymptotic(&series, mode).map_err(LabError::from)?;
                print!("{}", r.to_text());
                return Ok(ExitCode::SUCCESS);
            }
            let mut cfg = load_config(&f.common)?;
            if let Some(a) = &f.fix_a {
                let fit = cfg.fit.get_or_insert_with(Default::default);
                fit.mode = lab::config::FitModeSpec::FixA;
                fit.a = Some(a.clone());
                cfg.validate()?;
            }
            let out = lab::run_series(&cfg, opts(&f.common), true)?;
            finish(&cfg, &f.common, &out)
        }
        Command::Restrict(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_restrict(&cfg)?;
            if c.out.is_none() && cfg.output.dir.is_none() {
                print!("{}", out.artifacts[0].contents);
            }
            finish(&cfg, &c, &out)
        }
        Command::Peyre(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_peyre(&cfg)?;
            finish(&cfg, &c, &out)
        }
        Command::CheckRestriction(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_restriction_check(&cfg)?;
            finish(&cfg, &c, &out)
        }
        Command::CheckTamagawa(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_tamagawa_check(&cfg)?;
            finish(&cfg, &c, &out)
        }
        Command::BtExperiment(c) => {
            let cfg = load_config(&c)?;
            let out = lab::run_bt(&cfg)?;
            finish(&cfg, &c, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<LabError>()
                .map_or(1, |le| le.class().exit_code());
            ExitCode::from(code as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
