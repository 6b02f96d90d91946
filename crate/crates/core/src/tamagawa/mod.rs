//! Peyre's constant `alpha * beta * tau`.
//!
//! The Tamagawa number is assembled as
//!
//! ```text
//! tau = mu_K^{-n} * lim_{s->1} (s-1)^rho L(s, Pic) * prod_p lambda_p^{-1} tau_p * prod_inf tau_inf
//! ```
//!
//! with Lebesgue measure at real places, twice Lebesgue at complex places
//! and unit mass on `O_v`, so `mu_K = sqrt|d_K|`. The Euler product is
//! truncated at a prime cutoff and the tail is bounded from the decay of
//! the last factors. Every factor is kept in [`TauEstimate`] so that two
//! assemblies can be compared line by line.
//!
//! The assembly computes the volume of the whole adelic space; the caller
//! must assert weak approximation with [`TamagawaConfig::weak_approximation`].

pub mod arch;
pub mod lfactor;
pub mod local;

pub use arch::{
    archimedean_density_mc, projective_space_archimedean, ArchEstimate, ConeNorm, PlaceKind,
};
pub use lfactor::{
    frobenius_from_splitting, l_factor, l_factor_at, l_factor_induction_check,
    restrict_to_invariants, InductionReport,
};
pub use local::{
    count_mod_prime_power, count_residue_points, expected_dimension, local_density,
    local_density_at, LocalDensityReport, ResidueField,
};

use crate::arith::{pow_mod, primes_up_to, rat_to_f64, Rat};
use crate::linalg::det_rat;
use crate::nfcore::{factor_rational_prime, residue_at_one, splitting_type, NfError, NumberField};
use crate::piclattice::{
    alpha_invariant, h1_cyclic, induce, rational_picard, GaloisLattice, PicError, PicardLattice,
};
use crate::weilres::{res_p1_quadric, ExtensionData, PolynomialSystem, WeilError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TamagawaError {
    #[error("local density at p = {p} did not stabilize within {depths} lift depths")]
    NonStabilized { p: u64, depths: u32 },
    #[error("singular local factor: {0}")]
    SingularFactor(String),
    #[error("gradient vanishes on the chart cover: {0}")]
    GradientVanishes(String),
    #[error("Euler product tail {tail:.3e} exceeds the tolerance {tolerance:.3e}")]
    NonConvergent { tail: f64, tolerance: f64 },
    #[error("no local points at p = {0}")]
    NoLocalPoints(u64),
    #[error("the weak approximation flag is not set")]
    WeakApproximationUnset,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Field(#[from] NfError),
    #[error(transparent)]
    Picard(#[from] PicError),
    #[error(transparent)]
    Weil(#[from] WeilError),
}

/// Truncation and sampling parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TamagawaConfig {
    /// Euler products run over primes up to this bound.
    pub prime_cutoff: u64,
    /// Local densities of hypersurfaces are counted by brute force up to
    /// this bound and taken from closed forms above it.
    pub density_cutoff: u64,
    pub mc_samples: u64,
    pub seed: u64,
    pub max_lift_depth: u32,
    /// Relative tolerance on the Euler product tail.
    pub tolerance: f64,
    /// The caller asserts that `X(F)` is dense in `X(A_F)`.
    pub weak_approximation: bool,
}

impl Default for TamagawaConfig {
    fn default() -> Self {
        TamagawaConfig {
            prime_cutoff: 10_000,
            density_cutoff: 200,
            mc_samples: 400_000,
            seed: 1,
            max_lift_depth: 4,
            tolerance: 0.05,
            weak_approximation: false,
        }
    }
}

/// The variety whose Tamagawa number is assembled.
#[derive(Clone, Debug)]
pub enum Model {
    /// `P^n` over a number field, with max norms; densities and archimedean
    /// factors are closed forms.
    ProjectiveSpace { field: NumberField, n: usize },
    /// A smooth quadric hypersurface in `P^N` over `Q`; densities by
    /// brute force (with lifting at bad primes) up to the density cutoff and
    /// by the quadratic-character point count above it; the real factor by
    /// Monte Carlo.
    Quadric {
        system: PolynomialSystem,
        norm: ConeNorm,
    },
}

/// The Galois lattice `Pic X-bar`.
#[derive(Clone, Debug)]
pub enum PicardData {
    /// Trivial action.
    Split { lattice: PicardLattice },
    /// Induced from a split lattice over `top`, a cyclic extension of the
    /// field of the model.
    Induced {
        top: NumberField,
        lattice: PicardLattice,
    },
}

impl PicardData {
    fn galois(&self, base_degree: usize) -> Result<GaloisLattice, TamagawaError> {
        match self {
            PicardData::Split { lattice } => Ok(GaloisLattice::trivial(lattice.clone())),
            PicardData::Induced { top, lattice } => {
                let d = top.degree() / base_degree;
                let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
                Ok(induce(&GaloisLattice::trivial(lattice.clone()), d, &cycle)?)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TamagawaInput {
    pub label: String,
    pub model: Model,
    pub picard: PicardData,
}

impl TamagawaInput {
    /// `P^n` over `f` with its split rank-one Picard lattice.
    pub fn projective_space(f: &NumberField, n: usize) -> Self {
        TamagawaInput {
            label: format!("P^{n} over {}", f.name()),
            model: Model::ProjectiveSpace {
                field: f.clone(),
                n,
            },
            picard: PicardData::Split {
                lattice: PicardLattice::projective_space(n),
            },
        }
    }

    /// The quadric model of `Res P^1` for a quadratic field over `Q`, with
    /// the norm `max(|u0|, |u3|)` induced by the max norm upstairs.
    pub fn res_p1_quadric(top: &NumberField) -> Result<Self, TamagawaError> {
        let ext = ExtensionData::over_rationals(top);
        let model = res_p1_quadric(&ext)?;
        // Box for u1, u2 from the ellipse a x^2 + b x y + c y^2 <= 1.
        let coef = |m: Vec<u32>| -> f64 {
            model
                .norm_form
                .terms
                .get(&m)
                .map_or(0.0, |c| rat_to_f64(&c.coords[0]))
        };
        let (a, b, c) = (coef(vec![2, 0]), coef(vec![1, 1]), coef(vec![0, 2]));
        let disc = 4.0 * a * c - b * b;
        if a <= 0.0 || disc <= 0.0 {
            return Err(TamagawaError::Unsupported(
                "the norm form is not positive definite".into(),
            ));
        }
        let margin = 1.0 + 1e-9;
        let norm = ConeNorm {
            normed: vec![0, 3],
            half_widths: vec![
                1.0,
                (4.0 * c / disc).sqrt() * margin,
                (4.0 * a / disc).sqrt() * margin,
                1.0,
            ],
        };
        Ok(TamagawaInput {
            label: format!("Res P^1 quadric for {}", top.name()),
            model: Model::Quadric {
                system: model.system,
                norm,
            },
            picard: PicardData::Induced {
                top: top.clone(),
                lattice: PicardLattice::projective_space(1),
            },
        })
    }

    fn field(&self) -> &NumberField {
        match &self.model {
            Model::ProjectiveSpace { field, .. } => field,
            Model::Quadric { system, .. } => &system.field,
        }
    }

    fn dimension(&self) -> Result<usize, TamagawaError> {
        match &self.model {
            Model::ProjectiveSpace { n, .. } => Ok(*n),
            Model::Quadric { system, .. } => expected_dimension(system),
        }
    }
}

/// An assembled Tamagawa number with every factor.
#[derive(Clone, Debug, PartialEq)]
pub struct TauEstimate {
    pub label: String,
    pub value: f64,
    /// Combined absolute error (Euler tail and Monte Carlo).
    pub error: f64,
    pub mu_factor: f64,
    pub residue: f64,
    pub residue_expression: String,
    pub euler_product: f64,
    /// Bound on `|log|` of the omitted Euler factors.
    pub tail_log_bound: f64,
    pub archimedean: f64,
    pub archimedean_error: f64,
    /// Exact local data for primes up to the density cutoff.
    pub locals: Vec<LocalDensityReport>,
    /// `lambda_p^{-1} tau_p` for every rational prime up to the density
    /// cutoff (product over the primes above it).
    pub euler_factors: Vec<(u64, Rat)>,
    pub prime_cutoff: u64,
    pub density_cutoff: u64,
    pub mc_samples: Option<u64>,
    pub seed: u64,
}

impl TauEstimate {
    pub fn relative_error(&self) -> f64 {
        self.error / self.value
    }

    /// Factor ledger as CSV (`factor,value,detail`).
    pub fn ledger_csv(&self) -> String {
        let mut s = String::from("factor,value,detail\n");
        let _ = writeln!(s, "label,,{}", self.label);
        let _ = writeln!(s, "mu^-n,{},", self.mu_factor);
        let _ = writeln!(s, "residue,{},{}", self.residue, self.residue_expression);
        let _ = writeln!(
            s,
            "euler_product,{},primes <= {} (tail |log| <= {:e})",
            self.euler_product, self.prime_cutoff, self.tail_log_bound
        );
        let _ = writeln!(
            s,
            "archimedean,{},{}",
            self.archimedean,
            match self.mc_samples {
                Some(n) => format!(
                    "monte carlo n={n} seed={} se={}",
                    self.seed, self.archimedean_error
                ),
                None => "closed form".into(),
            }
        );
        for (p, f) in &self.euler_factors {
            let _ = writeln!(s, "p={p},{},{}", rat_to_f64(f), crate::arith::format_rat(f));
        }
        for l in &self.locals {
            let _ = writeln!(
                s,
                "local p={} q={},{},count={} depth={} density={} lambda={}",
                l.p,
                l.q,
                l.running_product.unwrap_or(f64::NAN),
                l.count,
                l.depth,
                crate::arith::format_rat(&l.density),
                l.lambda
                    .as_ref()
                    .map_or("-".into(), crate::arith::format_rat)
            );
        }
        let _ = writeln!(s, "tau,{},error={}", self.value, self.error);
        s
    }
}

fn geometric_sum(q: &BigInt, n: usize) -> BigInt {
    let mut s = BigInt::zero();
    let mut t = BigInt::one();
    for _ in 0..=n {
        s += &t;
        t *= q;
    }
    s
}

fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
    if r == 0 {
        return 0;
    }
    if pow_mod(r, ((p - 1) / 2) as u128, p) == 1 {
        1
    } else {
        -1
    }
}

/// Integer data of a quadric `x^T A x` over `Q`: the discriminant
/// `(-1)^{m/2} det(2A)` (scaled to an integer) and the primes where the
/// reduction may be bad.
struct QuadricData {
    vars: usize,
    disc: BigInt,
}

impl QuadricData {
    fn new(sys: &PolynomialSystem) -> Result<QuadricData, TamagawaError> {
        let [f] = sys.equations.as_slice() else {
            return Err(TamagawaError::Unsupported(
                "a quadric has one equation".into(),
            ));
        };
        if f.total_degree() != Some(2) || f.terms.keys().any(|m| m.iter().sum::<u32>() != 2) {
            return Err(TamagawaError::Unsupported(
                "the equation is not a quadratic form".into(),
            ));
        }
        let m = sys.vars.len();
        let den = f
            .terms
            .values()
            .fold(BigInt::one(), |a, c| a.lcm(c.coords[0].denom()));
        let mut a = vec![vec![Rat::zero(); m]; m];
        for (mono, c) in &f.terms {
            let v = &c.coords[0] * Rat::from_integer(den.clone());
            let idx: Vec<usize> = mono
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                a[i][i] += &v * Rat::from_integer(2.into());
            } else {
                a[i][j] += v.clone();
                a[j][i] += v;
            }
        }
        let det = det_rat(&a);
        if det.is_zero() {
            return Err(TamagawaError::Unsupported("the quadric is singular".into()));
        }
        let sign = if (m / 2) % 2 == 1 { -1 } else { 1 };
        Ok(QuadricData {
            vars: m,
            disc: det.to_integer() * sign,
        })
    }

    fn is_good(&self, p: u64) -> bool {
        p != 2 && !(&self.disc % BigInt::from(p)).is_zero()
    }

    /// Points over `F_p` of a smooth quadric.
    fn count(&self, p: u64) -> BigInt {
        let q = BigInt::from(p);
        let m = self.vars;
        let base = geometric_sum(&q, m - 2);
        if m % 2 == 1 {
            base
        } else {
            base + q.pow((m / 2 - 1) as u32) * legendre(&self.disc, p)
        }
    }
}

/// `mu_K^{-n}`, with `mu_K = sqrt|d_K|`.
fn mu_factor(f: &NumberField, n: usize) -> f64 {
    f.discriminant()
        .to_f64()
        .expect("small discriminant")
        .abs()
        .sqrt()
        .powi(-(n as i32))
}

/// Assembles `tau` for the input.
pub fn tamagawa_number(
    input: &TamagawaInput,
    config: &TamagawaConfig,
) -> Result<TauEstimate, TamagawaError> {
    if !config.weak_approximation {
        return Err(TamagawaError::WeakApproximationUnset);
    }
    if config.prime_cutoff < 3 {
        return Err(TamagawaError::Unsupported(
            "the prime cutoff must be at least 3".into(),
        ));
    }
    let field = input.field().clone();
    let n = input.dimension()?;
    let gal = input.picard.galois(field.degree())?;
    let (residue_field, rank) = match &input.picard {
        PicardData::Split { lattice } => (field.clone(), lattice.rank),
        PicardData::Induced { top, lattice } => (top.clone(), lattice.rank),
    };
    let res = residue_at_one(&residue_field)?;
    let residue = res.value.powi(rank as i32);
    let residue_expression = format!("({})^{rank} for {}", res.expression, residue_field.name());

    let quadric = match &input.model {
        Model::Quadric { system, .. } => Some(QuadricData::new(system)?),
        Model::ProjectiveSpace { .. } => None,
    };
    let primes = primes_up_to(config.prime_cutoff);
    let mut log_sum = 0.0f64;
    let mut tail_c = 0.0f64;
    let mut locals = Vec::new();
    let mut euler_factors = Vec::new();
    for &p in &primes {
        let mut factor = Rat::one();
        let exact = p <= config.density_cutoff;
        match &input.model {
            Model::ProjectiveSpace { field, n } => {
                for (_, fdeg) in splitting_type(field, p)? {
                    let q = BigInt::from(p).pow(fdeg);
                    let count = geometric_sum(&q, *n);
                    let density = Rat::new(count.clone(), q.pow(*n as u32));
                    let lambda = Rat::new(q.clone(), &q - 1u32).pow(rank as i32);
                    factor *= &density / &lambda;
                    if exact {
                        locals.push(LocalDensityReport {
                            p,
                            q: q.to_u64().unwrap_or(u64::MAX),
                            count: count.to_u128().unwrap_or(u128::MAX),
                            depth: 1,
                            density,
                            lambda: Some(lambda),
                            running_product: None,
                        });
                    }
                }
            }
            Model::Quadric { system, .. } => {
                let qd = quadric.as_ref().expect("quadric data");
                let frob = match &input.picard {
                    PicardData::Induced { top, .. } => {
                        frobenius_from_splitting(&gal, &splitting_type(top, p)?)?
                    }
                    PicardData::Split { .. } => gal.generator.clone(),
                };
                let lambda = l_factor_at(&frob, p, 1)?;
                let mut rep = if exact {
                    local_density(system, p, config.max_lift_depth)?
                } else if qd.is_good(p) {
                    let count = qd.count(p);
                    LocalDensityReport {
                        p,
                        q: p,
                        count: count.to_u128().unwrap_or(u128::MAX),
                        depth: 1,
                        density: Rat::new(count, BigInt::from(p).pow(n as u32)),
                        lambda: None,
                        running_product: None,
                    }
                } else {
                    return Err(TamagawaError::Unsupported(format!(
                        "bad prime {p} lies above the density cutoff"
                    )));
                };
                if rep.density.is_zero() {
                    return Err(TamagawaError::NoLocalPoints(p));
                }
                factor = &rep.density / &lambda;
                rep.lambda = Some(lambda);
                if exact {
                    locals.push(rep);
                }
            }
        }
        let lf = rat_to_f64(&factor).ln();
        log_sum += lf;
        if p > config.prime_cutoff / 2 {
            tail_c = tail_c.max(lf.abs() * (p as f64) * (p as f64));
        }
        if exact {
            euler_factors.push((p, factor));
            let running = log_sum.exp();
            for l in locals.iter_mut().filter(|l| l.p == p) {
                l.running_product = Some(running);
            }
        }
    }
    let tail_log_bound = tail_c / config.prime_cutoff as f64;
    let tail_rel = tail_log_bound.exp_m1();
    if tail_rel > config.tolerance {
        return Err(TamagawaError::NonConvergent {
            tail: tail_rel,
            tolerance: config.tolerance,
        });
    }
    let euler_product = log_sum.exp();

    let (archimedean, archimedean_error, mc_samples) = match &input.model {
        Model::ProjectiveSpace { field, n } => {
            let (r1, r2) = field.signature();
            let v = projective_space_archimedean(*n, PlaceKind::Real).powi(r1 as i32)
                * projective_space_archimedean(*n, PlaceKind::Complex).powi(r2 as i32);
            (v, 0.0, None)
        }
        Model::Quadric { system, norm } => {
            let est = archimedean_density_mc(system, norm, config.mc_samples, config.seed)?;
            (est.value, est.std_error, Some(config.mc_samples))
        }
    };
    let mu = mu_factor(&field, n);
    let value = mu * residue * euler_product * archimedean;
    if !(value.is_finite() && value > 0.0) {
        return Err(TamagawaError::Unsupported(format!(
            "assembled tau = {value}"
        )));
    }
    let rel = (tail_rel.powi(2) + (archimedean_error / archimedean).powi(2)).sqrt();
    Ok(TauEstimate {
        label: input.label.clone(),
        value,
        error: value * rel,
        mu_factor: mu,
        residue,
        residue_expression,
        euler_product,
        tail_log_bound,
        archimedean,
        archimedean_error,
        locals,
        euler_factors,
        prime_cutoff: config.prime_cutoff,
        density_cutoff: config.density_cutoff,
        mc_samples,
        seed: config.seed,
    })
}

/// `c = alpha * beta * tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeyreConstant {
    pub alpha: Rat,
    pub beta: u64,
    pub tau: TauEstimate,
    pub c: f64,
    pub c_error: f64,
}

impl PeyreConstant {
    pub fn ledger_csv(&self) -> String {
        let mut s = self.tau.ledger_csv();
        let _ = writeln!(
            s,
            "alpha,{},{}",
            rat_to_f64(&self.alpha),
            crate::arith::format_rat(&self.alpha)
        );
        let _ = writeln!(s, "beta,{},", self.beta);
        let _ = writeln!(s, "c,{},error={}", self.c, self.c_error);
        s
    }
}

pub fn peyre_constant(
    input: &TamagawaInput,
    config: &TamagawaConfig,
) -> Result<PeyreConstant, TamagawaError> {
    let gal = input.picard.galois(input.field().degree())?;
    let alpha = alpha_invariant(&rational_picard(&gal)?.lattice)?;
    let beta = h1_cyclic(&gal)?;
    let tau = tamagawa_number(input, config)?;
    let k = rat_to_f64(&alpha) * beta as f64;
    Ok(PeyreConstant {
        c: k * tau.value,
        c_error: k * tau.error,
        alpha,
        beta,
        tau,
    })
}

/// `tau(P^1 / F)` against `tau` of the quadric model of `Res P^1` over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct TamagawaRestrictionReport {
    pub top: TauEstimate,
    pub base: TauEstimate,
    pub relative_difference: f64,
    /// Relative error bar of the difference.
    pub combined_error: f64,
    /// Per-prime Euler factors `(p, over F, over Q)` up to the density cutoff.
    pub factor_comparison: Vec<(u64, Rat, Rat)>,
}

impl TamagawaRestrictionReport {
    /// Within 3% or within the combined error bars, whichever is looser.
    pub fn passed(&self) -> bool {
        self.relative_difference <= self.combined_error.max(0.03)
    }

    pub fn ledger_csv(&self) -> String {
        let mut s = String::from("factor,top,base\n");
        let t = &self.top;
        let b = &self.base;
        let _ = writeln!(s, "mu^-n,{},{}", t.mu_factor, b.mu_factor);
        let _ = writeln!(s, "residue,{},{}", t.residue, b.residue);
        let _ = writeln!(s, "euler_product,{},{}", t.euler_product, b.euler_product);
        let _ = writeln!(s, "archimedean,{},{}", t.archimedean, b.archimedean);
        let _ = writeln!(
            s,
            "mu^-n*archimedean,{},{}",
            t.mu_factor * t.archimedean,
            b.mu_factor * b.archimedean
        );
        for (p, x, y) in &self.factor_comparison {
            let _ = writeln!(
                s,
                "p={p},{},{}",
                crate::arith::format_rat(x),
                crate::arith::format_rat(y)
            );
        }
        let _ = writeln!(s, "tau,{},{}", t.value, b.value);
        let _ = writeln!(s, "error,{},{}", t.error, b.error);
        let _ = writeln!(s, "relative_difference,{},", self.relative_difference);
        s
    }
}

pub fn tamagawa_restriction_check(
    top: &NumberField,
    config: &TamagawaConfig,
) -> Result<TamagawaRestrictionReport, TamagawaError> {
    let upstairs = tamagawa_number(&TamagawaInput::projective_space(top, 1), config)?;
    let base = if top.is_rational() {
        tamagawa_number(&TamagawaInput::projective_space(top, 1), config)?
    } else {
        tamagawa_number(&TamagawaInput::res_p1_quadric(top)?, config)?
    };
    let factor_comparison = upstairs
        .euler_factors
        .iter()
        .zip(&base.euler_factors)
        .map(|((p, x), (_, y))| (*p, x.clone(), y.clone()))
        .collect();
    let relative_difference = (upstairs.value - base.value).abs() / base.value;
    let combined_error = (upstairs.relative_error().powi(2) + base.relative_error().powi(2)).sqrt();
    Ok(TamagawaRestrictionReport {
        top: upstairs,
        base,
        relative_difference,
        combined_error,
        factor_comparison,
    })
}

/// Exact point counts of the quadric model of `Res P^1` over `F_p` against
/// the product of `#P^1` over the residue fields of the primes above `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub p: u64,
    pub base_count: u128,
    pub top_counts: Vec<(u64, u128)>,
    pub base_density: Rat,
    pub top_density: Rat,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.base_count == self.top_counts.iter().map(|x| x.1).product::<u128>()
            && self.base_density == self.top_density
    }
}

pub fn density_factorization_check(
    top: &NumberField,
    p: u64,
) -> Result<FactorizationReport, TamagawaError> {
    let ext = ExtensionData::over_rationals(top);
    let quad = res_p1_quadric(&ext)?;
    let (base_count, _) = count_residue_points(&quad.system, &ResidueField::prime(p)?)?;
    let n = expected_dimension(&quad.system)? as u32;
    let p1 = PolynomialSystem::projective_space(top, 1);
    let mut top_counts = Vec::new();
    let mut top_density = Rat::one();
    for pr in factor_rational_prime(top, p)? {
        let rep = local_density_at(&p1, &pr)?;
        top_density *= rep.density;
        top_counts.push((rep.q, rep.count));
    }
    Ok(FactorizationReport {
        p,
        base_count,
        top_counts,
        base_density: Rat::new(BigInt::from(base_count), BigInt::from(p).pow(n)),
        top_density,
    })
}

/// The two circle-method ranges for a complete intersection of `r` forms of
/// degree `m` in `n + 1` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CiEligibility {
    /// `n + 1 - dim X* > m (m+1) (r-1) 2^{r-1}`.
    pub birch: bool,
    pub birch_slack: i64,
    /// `n >= (m+1) (r-1) 2^{r-1} + m`.
    pub smooth: bool,
    pub smooth_slack: i64,
}

pub fn ci_eligibility(m: u32, r: u32, n: u32, dim_xstar_bound: Option<u32>) -> CiEligibility {
    let dim = dim_xstar_bound.unwrap_or(m) as i64;
    let (m, r, n) = (m as i64, r as i64, n as i64);
    let pow = if r == 0 { 0 } else { 1i64 << (r - 1) };
    let birch_slack = n + 1 - dim - m * (m + 1) * (r - 1) * pow;
    let smooth_slack = n - ((m + 1) * (r - 1) * pow + m);
    CiEligibility {
        birch: birch_slack > 0,
        birch_slack,
        smooth: smooth_slack >= 0,
        smooth_slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;
    use crate::nfcore::dedekind_zeta;
    use crate::poly::{var_names, Poly};
    use crate::weilres::Ambient;
    use std::f64::consts::PI;

    fn config() -> TamagawaConfig {
        TamagawaConfig {
            prime_cutoff: 5_000,
            density_cutoff: 30,
            mc_samples: 200_000,
            weak_approximation: true,
            ..TamagawaConfig::default()
        }
    }

    #[test]
    fn flag_required() {
        let q = NumberField::rationals();
        let err = tamagawa_number(
            &TamagawaInput::projective_space(&q, 1),
            &TamagawaConfig::default(),
        );
        assert_eq!(err, Err(TamagawaError::WeakApproximationUnset));
    }

    #[test]
    fn projective_line_over_q() {
        let q = NumberField::rationals();
        let c = peyre_constant(&TamagawaInput::projective_space(&q, 1), &config()).unwrap();
        assert_eq!(c.alpha, rat_frac(1, 2));
        assert_eq!(c.beta, 1);
        // 2 / zeta(2) * 1/2 * 2 ... = 12 / pi^2
        let expect = 12.0 / (PI * PI);
        assert!((c.c - expect).abs() / expect < 1e-3, "{}", c.c);
        assert!((c.c - expect).abs() <= c.c_error.max(1e-12) * 2.0);
        let p2 = peyre_constant(&TamagawaInput::projective_space(&q, 2), &config()).unwrap();
        let z3 = 1.202_056_903_159_594_3;
        assert!((p2.c - 4.0 / z3).abs() / p2.c < 1e-3);
    }

    #[test]
    fn gaussian_line_matches_schanuel() {
        let g = NumberField::gaussian();
        let c = peyre_constant(&TamagawaInput::projective_space(&g, 1), &config()).unwrap();
        let zf2 = dedekind_zeta(&g, 2.0, 100_000).unwrap().value;
        let expect = PI * PI / (4.0 * zf2);
        assert!((c.c - expect).abs() / expect < 1e-3, "{} vs {expect}", c.c);
    }

    #[test]
    fn cutoff_stability() {
        let q = NumberField::rationals();
        let input = TamagawaInput::projective_space(&q, 1);
        let a = tamagawa_number(&input, &config()).unwrap();
        let b = tamagawa_number(
            &input,
            &TamagawaConfig {
                prime_cutoff: 10_000,
                ..config()
            },
        )
        .unwrap();
        assert!((a.value - b.value).abs() <= a.error + b.error);
        assert!(b.tail_log_bound < a.tail_log_bound);
    }

    #[test]
    fn quadric_closed_form_matches_brute_force() {
        let q = NumberField::rationals();
        let names = var_names("u", 4);
        for eq in ["u0*u3 = u1^2 + u2^2", "u0*u3 = u1^2 + u1*u2 + u2^2"] {
            let p = Poly::parse_equation(&q, eq, &names).unwrap();
            let sys = PolynomialSystem::new(
                q.clone(),
                names.clone(),
                vec![p],
                vec![],
                Ambient::Projective(vec![4]),
            )
            .unwrap();
            let qd = QuadricData::new(&sys).unwrap();
            for p in primes_up_to(40) {
                if qd.is_good(p) {
                    let (c, smooth) =
                        count_residue_points(&sys, &ResidueField::prime(p).unwrap()).unwrap();
                    assert!(smooth);
                    assert_eq!(BigInt::from(c), qd.count(p), "{eq} p={p}");
                }
            }
        }
    }

    #[test]
    fn restriction_equality_small() {
        let g = NumberField::gaussian();
        let r = tamagawa_restriction_check(&g, &config()).unwrap();
        for (p, x, y) in &r.factor_comparison {
            assert_eq!(x, y, "p = {p}");
        }
        let expect = PI * PI / (2.0 * dedekind_zeta(&g, 2.0, 100_000).unwrap().value);
        assert!((r.top.value - expect).abs() / expect < 1e-3);
        assert!(r.passed(), "{}", r.ledger_csv());
        let q = NumberField::rationals();
        let t = tamagawa_restriction_check(&q, &config()).unwrap();
        assert_eq!(t.top, t.base);
    }

    #[test]
    fn factorization_small_primes() {
        for f in [NumberField::gaussian(), NumberField::eisenstein()] {
            for p in [5u64, 7, 11, 13] {
                let r = density_factorization_check(&f, p).unwrap();
                assert!(r.passed(), "{} p={p}: {r:?}", f.name());
            }
        }
    }

    #[test]
    fn eligibility_examples() {
        let a = ci_eligibility(1, 2, 5, Some(1));
        assert!(a.birch);
        assert_eq!(a.birch_slack, 1);
        assert!(!ci_eligibility(1, 2, 3, None).birch);
        assert!(!ci_eligibility(1, 3, 9, None).birch);
    }
}
