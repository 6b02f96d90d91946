//! Experiment configuration files.
//!
//! A configuration is a TOML document. Exact rationals are written as
//! strings (`"15625/4096"`, `"2.5"`), and unknown keys are rejected at every
//! level so that typos surface as errors instead of silently using defaults.

use super::fit::FitMode;
use super::LabError;
use crate::arith::{parse_rat, rat_floor, rat_to_f64, Rat};
use crate::heights::{ArchNorm, MetrizedBundle};
use crate::nfcore::NumberField;
use crate::piclattice::PicardLattice;
use crate::poly::{var_names, Poly};
use crate::tamagawa::TamagawaConfig;
use crate::weilres::{Ambient, PolynomialSystem};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Schanuel,
    Enumerate,
    Restriction,
    Tamagawa,
    Peyre,
    Bt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub field: FieldSpec,
    #[serde(default)]
    pub variety: VarietySpec,
    #[serde(default)]
    pub metric: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSpec>,
    #[serde(default)]
    pub cutoffs: CutoffSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bt: Option<BtSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_seed() -> u64 {
    1
}

/// A built-in field by name, or a monic minimal polynomial whose power
/// basis is the ring of integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_number: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots_of_unity: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// The system given by `blocks`, `equations` and `nonvanishing`.
    #[default]
    System,
    /// The quadric model of the restriction of `P^1` from the field to `Q`.
    ResP1Quadric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    #[serde(default)]
    pub model: ModelKind,
    /// Number of homogeneous coordinates in each projective factor.
    #[serde(default = "default_blocks")]
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub nonvanishing: Vec<String>,
    /// Picard lattice preset name (`P2`, `p1xp1`, `dp6`, `ci:n,m,r`, ...).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    /// Class of the line bundle in the lattice basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_bundle: Option<Vec<i64>>,
}

fn default_blocks() -> Vec<usize> {
    vec![2]
}

impl Default for VarietySpec {
    fn default() -> Self {
        VarietySpec {
            model: ModelKind::System,
            blocks: default_blocks(),
            vars: None,
            equations: Vec::new(),
            nonvanishing: Vec::new(),
            lattice: None,
            line_bundle: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    #[default]
    Max,
    Euclidean,
    Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    #[serde(default)]
    pub norm: NormKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// Stream every point.
    #[default]
    Enumerate,
    /// Content sweep histogram (projective space only).
    Sweep,
    /// Moebius inversion (projective space only).
    Moebius,
}

/// `B_k = floor(b0 * factor^k)` for `k < rungs`, or explicit `values`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderSpec {
    #[serde(default = "default_b0")]
    pub b0: String,
    #[serde(default = "default_factor")]
    pub factor: String,
    #[serde(default = "default_rungs")]
    pub rungs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default)]
    pub method: CountMethod,
    #[serde(default = "default_partitions")]
    pub partitions: usize,
}

fn default_b0() -> String {
    "4".into()
}
fn default_factor() -> String {
    "2".into()
}
fn default_rungs() -> usize {
    10
}
fn default_partitions() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FitModeSpec {
    #[default]
    Free,
    FixA,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    #[serde(default)]
    pub mode: FitModeSpec,
    /// Pinned exponent; defaults to the predicted `a(L)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// Largest accepted relative difference between the fitted and the
    /// predicted leading constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSpec {
    #[serde(default = "d_prime_cutoff")]
    pub prime_cutoff: u64,
    #[serde(default = "d_density_cutoff")]
    pub density_cutoff: u64,
    #[serde(default = "d_mc_samples")]
    pub mc_samples: u64,
    #[serde(default = "d_max_lift_depth")]
    pub max_lift_depth: u32,
    #[serde(default = "d_tolerance")]
    pub tolerance: f64,
    /// Primes up to this bound get the L-factor induction check.
    #[serde(default = "d_lfactor_cutoff")]
    pub lfactor_cutoff: u64,
    #[serde(default = "d_verify_full")]
    pub verify_full_up_to: String,
    #[serde(default = "d_verify_stride")]
    pub verify_stride: u64,
    #[serde(default = "d_weak")]
    pub weak_approximation: bool,
}

fn d_prime_cutoff() -> u64 {
    10_000
}
fn d_density_cutoff() -> u64 {
    200
}
fn d_mc_samples() -> u64 {
    400_000
}
fn d_max_lift_depth() -> u32 {
    4
}
fn d_tolerance() -> f64 {
    0.05
}
fn d_lfactor_cutoff() -> u64 {
    1000
}
fn d_verify_full() -> String {
    "100".into()
}
fn d_verify_stride() -> u64 {
    64
}
fn d_weak() -> bool {
    true
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec {
            prime_cutoff: d_prime_cutoff(),
            density_cutoff: d_density_cutoff(),
            mc_samples: d_mc_samples(),
            max_lift_depth: d_max_lift_depth(),
            tolerance: d_tolerance(),
            lfactor_cutoff: d_lfactor_cutoff(),
            verify_full_up_to: d_verify_full(),
            verify_stride: d_verify_stride(),
            weak_approximation: d_weak(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BtSpec {
    #[serde(default = "d_bt_samples")]
    pub samples: usize,
    /// Coordinates of sampled base points are `a + b*omega` with
    /// `|a|, |b| <= coefficient_range`.
    #[serde(default = "d_bt_range")]
    pub coefficient_range: i64,
    #[serde(default = "d_bt_bound")]
    pub fiber_bound: String,
    #[serde(default = "d_bt_rungs")]
    pub fiber_rungs: usize,
}

fn d_bt_samples() -> usize {
    20
}
fn d_bt_range() -> i64 {
    3
}
fn d_bt_bound() -> String {
    "16".into()
}
fn d_bt_rungs() -> usize {
    16
}

impl Default for BtSpec {
    fn default() -> Self {
        BtSpec {
            samples: d_bt_samples(),
            coefficient_range: d_bt_range(),
            fiber_bound: d_bt_bound(),
            fiber_rungs: d_bt_rungs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

/// Command-line overrides applied on top of a parsed configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    /// New top rung; a geometric ladder keeps its factor and rung count.
    pub bmax: Option<String>,
    /// `B0:factor:rungs`.
    pub ladder: Option<String>,
    pub seed: Option<u64>,
    pub prime_cutoff: Option<u64>,
    pub mc_samples: Option<u64>,
}

fn config_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

fn rat_field(what: &str, s: &str) -> Result<Rat, LabError> {
    parse_rat(s).ok_or_else(|| config_err(format!("{what}: cannot parse {s:?} as a rational")))
}

impl ExperimentConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self, LabError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String, LabError> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    /// Checks everything that can be checked without running anything.
    pub fn validate(&self) -> Result<(), LabError> {
        let f = self.number_field()?;
        if self.variety.model == ModelKind::System {
            self.system(&f)?;
        }
        self.bundle()?;
        if let Some(l) = &self.ladder {
            self.ladder_values()?;
            if l.partitions == 0 {
                return Err(config_err("ladder.partitions must be at least 1"));
            }
        }
        if let Some(a) = self.fit.as_ref().and_then(|f| f.a.as_ref()) {
            rat_field("fit.a", a)?;
        }
        if let Some(lat) = &self.variety.lattice {
            let p = PicardLattice::preset(lat)
                .ok_or_else(|| config_err(format!("unknown lattice preset {lat:?}")))?;
            if let Some(l) = &self.variety.line_bundle {
                if l.len() != p.rank {
                    return Err(config_err(format!(
                        "line_bundle has {} entries, lattice {lat} has rank {}",
                        l.len(),
                        p.rank
                    )));
                }
            }
        }
        rat_field("cutoffs.verify_full_up_to", &self.cutoffs.verify_full_up_to)?;
        if !(self.cutoffs.tolerance > 0.0) {
            return Err(config_err("cutoffs.tolerance must be positive"));
        }
        if let Some(bt) = &self.bt {
            rat_field("bt.fiber_bound", &bt.fiber_bound)?;
            if bt.coefficient_range < 1 || bt.fiber_rungs == 0 {
                return Err(config_err(
                    "bt.coefficient_range and bt.fiber_rungs must be positive",
                ));
            }
        }
        let needs_ladder = matches!(
            self.experiment,
            ExperimentKind::Schanuel | ExperimentKind::Enumerate | ExperimentKind::Restriction
        );
        if needs_ladder && self.ladder.is_none() {
            return Err(config_err("this experiment needs a [ladder] block"));
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), LabError> {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(p) = o.prime_cutoff {
            self.cutoffs.prime_cutoff = p;
        }
        if let Some(m) = o.mc_samples {
            self.cutoffs.mc_samples = m;
        }
        if let Some(spec) = &o.ladder {
            let parts: Vec<&str> = spec.split(':').collect();
            let [b0, factor, rungs] = parts[..] else {
                return Err(config_err(format!(
                    "--ladder expects B0:factor:rungs, got {spec:?}"
                )));
            };
            let rungs = rungs
                .parse::<usize>()
                .map_err(|_| config_err(format!("bad rung count {rungs:?}")))?;
            let l = self.ladder.get_or_insert_with(|| LadderSpec {
                b0: default_b0(),
                factor: default_factor(),
                rungs: default_rungs(),
                values: None,
                method: CountMethod::default(),
                partitions: 1,
            });
            l.b0 = b0.to_string();
            l.factor = factor.to_string();
            l.rungs = rungs;
            l.values = None;
        }
        if let Some(b) = &o.bmax {
            let bmax = rat_field("--bmax", b)?;
            if self.experiment == ExperimentKind::Bt && self.ladder.is_none() {
                self.bt.get_or_insert_with(BtSpec::default).fiber_bound = b.clone();
                return self.validate();
            }
            let l = self
                .ladder
                .as_mut()
                .ok_or_else(|| config_err("--bmax needs a ladder in the configuration"))?;
            match &mut l.values {
                Some(vals) => {
                    let mut kept = Vec::new();
                    for v in vals.iter() {
                        if rat_field("ladder.values", v)? < bmax {
                            kept.push(v.clone());
                        }
                    }
                    kept.push(b.clone());
                    *vals = kept;
                }
                None => {
                    let factor = rat_field("ladder.factor", &l.factor)?;
                    let mut b0 = bmax;
                    for _ in 1..l.rungs {
                        b0 /= &factor;
                    }
                    l.b0 = crate::arith::format_rat(&b0);
                }
            }
        }
        self.validate()
    }

    pub fn number_field(&self) -> Result<NumberField, LabError> {
        let fs = &self.field;
        match &fs.minpoly {
            None => NumberField::builtin(&fs.name).ok_or_else(|| {
                config_err(format!(
                    "unknown field {:?}; give a minpoly for other fields",
                    fs.name
                ))
            }),
            Some(mp) => NumberField::power_basis(
                &fs.name,
                mp,
                fs.class_number.unwrap_or(1),
                fs.roots_of_unity.unwrap_or(2),
            )
            .map_err(|e| config_err(format!("field: {e}"))),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let v = &self.variety;
        if let Some(names) = &v.vars {
            return names.clone();
        }
        if v.blocks.len() == 1 {
            return var_names("x", v.blocks[0]);
        }
        let prefixes = ["x", "y", "z", "u", "v", "w"];
        v.blocks
            .iter()
            .enumerate()
            .flat_map(|(b, &k)| {
                let p = prefixes
                    .get(b)
                    .map_or_else(|| format!("b{b}_"), |s| s.to_string());
                var_names(&p, k)
            })
            .collect()
    }

    /// The projective system of the variety block over `f`.
    pub fn system(&self, f: &NumberField) -> Result<PolynomialSystem, LabError> {
        let v = &self.variety;
        if v.blocks.is_empty() || v.blocks.iter().any(|&k| k < 2) {
            return Err(config_err("variety.blocks entries must be at least 2"));
        }
        let names = self.variables();
        if names.len() != v.blocks.iter().sum::<usize>() {
            return Err(config_err(format!(
                "variety.vars has {} names for {} coordinates",
                names.len(),
                v.blocks.iter().sum::<usize>()
            )));
        }
        let parse = |s: &String| {
            Poly::parse_equation(f, s, &names)
                .map_err(|e| config_err(format!("equation {s:?}: {e}")))
        };
        let eqs = v
            .equations
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        let nv = v
            .nonvanishing
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        PolynomialSystem::new(
            f.clone(),
            names,
            eqs,
            nv,
            Ambient::Projective(v.blocks.clone()),
        )
        .map_err(|e| config_err(format!("variety: {e}")))
    }

    /// `P^n` with no conditions.
    pub fn is_projective_space(&self) -> bool {
        let v = &self.variety;
        v.model == ModelKind::System
            && v.blocks.len() == 1
            && v.equations.is_empty()
            && v.nonvanishing.is_empty()
    }

    pub fn arch_norm(&self) -> Result<ArchNorm, LabError> {
        match self.metric.norm {
            NormKind::Max => Ok(ArchNorm::Max),
            NormKind::Euclidean => Ok(ArchNorm::Euclidean),
            NormKind::Matrix => {
                let m =
                    self.metric.matrix.as_ref().ok_or_else(|| {
                        config_err("metric.norm = \"matrix\" needs metric.matrix")
                    })?;
                let rows = m
                    .iter()
                    .map(|r| r.iter().map(|s| rat_field("metric.matrix", s)).collect())
                    .collect::<Result<Vec<Vec<Rat>>, _>>()?;
                Ok(ArchNorm::Matrix(rows))
            }
        }
    }

    /// `O(1, ..., 1)` on the ambient space with the configured norm.
    pub fn bundle(&self) -> Result<MetrizedBundle, LabError> {
        let parts: Vec<(usize, i64)> = self
            .variety
            .blocks
            .iter()
            .map(|&b| (b.saturating_sub(1), 1))
            .collect();
        MetrizedBundle::multidegree(&parts)
            .with_norm(self.arch_norm()?)
            .map_err(|e| config_err(format!("metric: {e}")))
    }

    /// The rungs of the ladder, as integers.
    pub fn ladder_values(&self) -> Result<Vec<Rat>, LabError> {
        let l = self
            .ladder
            .as_ref()
            .ok_or_else(|| config_err("no [ladder] block"))?;
        let raw: Vec<Rat> = match &l.values {
            Some(vals) => vals
                .iter()
                .map(|s| rat_field("ladder.values", s))
                .collect::<Result<_, _>>()?,
            None => {
                let b0 = rat_field("ladder.b0", &l.b0)?;
                let factor = rat_field("ladder.factor", &l.factor)?;
                if factor <= Rat::one() || !b0.is_positive() || l.rungs == 0 {
                    return Err(config_err("ladder needs b0 > 0, factor > 1 and rungs >= 1"));
                }
                let mut out = Vec::with_capacity(l.rungs);
                let mut b = b0;
                for _ in 0..l.rungs {
                    out.push(b.clone());
                    b *= &factor;
                }
                out
            }
        };
        let mut out: Vec<Rat> = Vec::new();
        for b in raw {
            let fl = Rat::from_integer(rat_floor(&b));
            if fl < Rat::one() {
                return Err(config_err(format!(
                    "ladder rung {} is below 1",
                    rat_to_f64(&b)
                )));
            }
            if let Some(last) = out.last() {
                if fl < *last {
                    return Err(config_err("ladder values must be increasing"));
                }
                if fl == *last {
                    continue;
                }
            }
            out.push(fl);
        }
        Ok(out)
    }

    /// The fit mode, with `a` defaulting to `predicted_a`.
    pub fn fit_mode(&self, predicted_a: Option<f64>) -> Result<FitMode, LabError> {
        let Some(fit) = &self.fit else {
            return Ok(FitMode::Free);
        };
        match fit.mode {
            FitModeSpec::Free => Ok(FitMode::Free),
            FitModeSpec::FixA => {
                let a = match &fit.a {
                    Some(s) => rat_to_f64(&rat_field("fit.a", s)?),
                    None => predicted_a
                        .ok_or_else(|| config_err("fix_a needs fit.a or a lattice to predict a"))?,
                };
                Ok(FitMode::FixA(a))
            }
        }
    }

    pub fn tamagawa_config(&self) -> TamagawaConfig {
        let c = &self.cutoffs;
        TamagawaConfig {
            prime_cutoff: c.prime_cutoff,
            density_cutoff: c.density_cutoff,
            mc_samples: c.mc_samples,
            seed: self.seed,
            max_lift_depth: c.max_lift_depth,
            tolerance: c.tolerance,
            weak_approximation: c.weak_approximation,
        }
    }

    pub fn bt_spec(&self) -> BtSpec {
        self.bt.clone().unwrap_or_default()
    }

    /// File name prefix for outputs.
    pub fn prefix(&self) -> String {
        self.output
            .prefix
            .clone()
            .unwrap_or_else(|| kind_name(self.experiment).to_string())
    }
}

pub fn kind_name(k: ExperimentKind) -> &'static str {
    match k {
        ExperimentKind::Schanuel => "schanuel",
        ExperimentKind::Enumerate => "enumerate",
        ExperimentKind::Restriction => "restriction",
        ExperimentKind::Tamagawa => "tamagawa",
        ExperimentKind::Peyre => "peyre",
        ExperimentKind::Bt => "bt",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    const SAMPLE: &str = r#"
experiment = "schanuel"
seed = 7

[field]
name = "Q"

[variety]
blocks = [3]
lattice = "P2"
line_bundle = [1]

[ladder]
b0 = "10"
factor = "2"
rungs = 8
method = "moebius"

[fit]
mode = "fix_a"
a = "3"
"#;

    #[test]
    fn parse_and_round_trip() {
        let c = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.ladder_values().unwrap().len(), 8);
        assert_eq!(c.ladder_values().unwrap()[7], rat(1280));
        assert_eq!(c.fit_mode(None).unwrap(), FitMode::FixA(3.0));
        let again = ExperimentConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SAMPLE.replace("rungs = 8", "rungs = 8\nrung = 9");
        assert!(matches!(
            ExperimentConfig::from_toml_str(&bad),
            Err(LabError::Config(_))
        ));
        let bad = SAMPLE.replace("seed = 7", "seed = 7\ncolour = \"red\"");
        assert!(matches!(
            ExperimentConfig::from_toml_str(&bad),
            Err(LabError::Config(_))
        ));
        let bad = SAMPLE.replace("name = \"Q\"", "name = \"Q(sqrt5)\"");
        assert!(matches!(
            ExperimentConfig::from_toml_str(&bad),
            Err(LabError::Config(_))
        ));
    }

    #[test]
    fn overrides() {
        let mut c = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        c.apply(&Overrides {
            bmax: Some("5120".into()),
            seed: Some(3),
            ..Default::default()
        })
        .unwrap();
        let l = c.ladder_values().unwrap();
        assert_eq!(l.last().unwrap(), &rat(5120));
        assert_eq!(l[0], rat(40));
        assert_eq!(c.seed, 3);
        c.apply(&Overrides {
            ladder: Some("3:10:4".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(
            c.ladder_values().unwrap(),
            vec![rat(3), rat(30), rat(300), rat(3000)]
        );
        assert!(c
            .apply(&Overrides {
                ladder: Some("3:10".into()),
                ..Default::default()
            })
            .is_err());
    }

    #[test]
    fn equations_parse() {
        let text = r#"
experiment = "enumerate"
[field]
name = "Q"
[variety]
blocks = [3]
equations = ["x0^2 + x1^2 = x2^2"]
[ladder]
values = ["5", "10", "20"]
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        let s = c.system(&c.number_field().unwrap()).unwrap();
        assert_eq!(s.equations.len(), 1);
        let bad = text.replace("x2^2\"", "x3^2\"");
        assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    }
}
