//! The Batyrev-Tschinkel family `x0 y0^3 + x1 y1^3 + x2 y2^3 + x3 y3^3 = 0`
//! in `P^3 x P^3` over `Q(sqrt(-3))`.
//!
//! Over the image of the cube map `t -> (t_i^3)` every fiber of the
//! projection to the `x` factor is a diagonal cubic surface whose
//! coefficient ratios are cubes, hence has all 27 lines defined over the
//! field. This module checks that mechanism exactly, counts points on one
//! split fiber, and writes down the exponent bookkeeping. The growth rates
//! themselves are far out of reach at this scale.

use super::fit::{fit_points, FitMode, FitReport};
use super::LabError;
use crate::arith::{rat_to_f64, Rat};
use crate::enumerate::{collect_points, EnumerationTask};
use crate::nfcore::{FieldElement, NumberField};
use crate::piclattice::{induce, invariants_rank, GaloisLattice, PicardLattice};
use crate::poly::{var_names, Poly};
use crate::weilres::{Ambient, PolynomialSystem};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// All cube roots of `z` in `F`, for `F = Q` or an imaginary quadratic field
/// whose ring of integers has the power basis. Candidates come from the
/// complex cube roots, rounded after clearing denominators, and are kept
/// only if their cube is exactly `z`.
pub fn cube_roots(f: &NumberField, z: &FieldElement) -> Vec<FieldElement> {
    if z.is_zero() {
        return vec![f.zero()];
    }
    let d = z
        .coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let dr = Rat::from_integer(d.clone());
    // w = z d^3 is integral and has the integral cube root d * cbrt(z).
    let w = z.scale(&(&dr * &dr * &dr));
    let theta = f.place_roots()[0];
    let wc = f.embed_at(&w, theta);
    let r = wc.norm().cbrt();
    let arg = wc.arg() / 3.0;
    let mut out: Vec<FieldElement> = Vec::new();
    for k in 0..3 {
        let a = arg + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        let c = Complex64::from_polar(r, a);
        let coeffs: Option<Vec<Rat>> = if f.degree() == 1 {
            (c.im.abs() < 1e-6 * r.max(1.0))
                .then(|| vec![Rat::from_integer(BigInt::from(c.re.round() as i64))])
        } else if f.degree() == 2 && theta.im.abs() > 1e-12 {
            let y = (c.im / theta.im).round();
            let x = (c.re - y * theta.re).round();
            Some(vec![
                Rat::from_integer(BigInt::from(x as i64)),
                Rat::from_integer(BigInt::from(y as i64)),
            ])
        } else {
            None
        };
        let Some(coeffs) = coeffs else { continue };
        let cand = f.from_powers(&coeffs);
        if f.pow(&cand, 3) == w {
            let root = cand.scale(&dr.recip());
            if !out.contains(&root) {
                out.push(root);
            }
        }
    }
    out
}

/// A line of `P^3` through two points.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    /// Partition `{i, j} {k, l}` of the coordinates.
    pub pairs: [(usize, usize); 2],
    /// Indices of the cube roots of unity used on each pair.
    pub roots: [usize; 2],
    pub p: Vec<FieldElement>,
    pub q: Vec<FieldElement>,
}

impl Line {
    fn plucker(&self, f: &NumberField) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(6);
        for a in 0..4 {
            for b in a + 1..4 {
                out.push(
                    f.mul(&self.p[a], &self.q[b])
                        .sub(&f.mul(&self.p[b], &self.q[a])),
                );
            }
        }
        out
    }

    /// Whether `y` lies on the line: every 3x3 minor of `(p, q, y)` vanishes.
    pub fn contains(&self, f: &NumberField, y: &[FieldElement]) -> bool {
        let det3 = |c: [usize; 3]| -> FieldElement {
            let m = |r: &[FieldElement], i: usize| r[c[i]].clone();
            let rows = [&self.p[..], &self.q[..], y];
            let mut acc = f.zero();
            for (s, perm) in [
                (1i64, [0, 1, 2]),
                (1, [1, 2, 0]),
                (1, [2, 0, 1]),
                (-1, [0, 2, 1]),
                (-1, [2, 1, 0]),
                (-1, [1, 0, 2]),
            ] {
                let t = f.mul(
                    &f.mul(&m(rows[0], perm[0]), &m(rows[1], perm[1])),
                    &m(rows[2], perm[2]),
                );
                acc = if s > 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        };
        [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
            .into_iter()
            .all(|c| det3(c).is_zero())
    }
}

fn diagonal_cubic(f: &NumberField, a: &[FieldElement], v: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(v)
        .fold(f.zero(), |acc, (ai, vi)| acc.add(&f.mul(ai, &f.pow(vi, 3))))
}

const PARTITIONS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// The 27 lines of `sum a_i y_i^3 = 0`, each verified to lie on the surface,
/// and verified pairwise distinct. Fails with [`LabError::NonSplitWitness`]
/// naming the first coefficient ratio that is not a cube, or the first line
/// that does not check out.
pub fn split_lines(f: &NumberField, a: &[FieldElement]) -> Result<Vec<Line>, LabError> {
    if a.len() != 4 || a.iter().any(|x| x.is_zero()) {
        return Err(LabError::Precondition(
            "a diagonal cubic needs four nonzero coefficients".into(),
        ));
    }
    let zetas = cube_roots(f, &f.one());
    if zetas.len() != 3 {
        return Err(LabError::NonSplitWitness(format!(
            "{} has no primitive cube root of unity",
            f.name()
        )));
    }
    let ratio_root = |i: usize, j: usize| -> Result<FieldElement, LabError> {
        let r = f.div(&a[j], &a[i])?;
        cube_roots(f, &r).into_iter().next().ok_or_else(|| {
            LabError::NonSplitWitness(format!("a{j}/a{i} = {r} is not a cube in {}", f.name()))
        })
    };
    let mut lines = Vec::with_capacity(27);
    for pairs in PARTITIONS {
        let [(i, j), (k, l)] = pairs;
        let cij = ratio_root(i, j)?;
        let ckl = ratio_root(k, l)?;
        for (zi, z) in zetas.iter().enumerate() {
            for (wi, w) in zetas.iter().enumerate() {
                let mut p = vec![f.zero(); 4];
                p[j] = f.one();
                p[i] = f.mul(z, &cij).neg();
                let mut q = vec![f.zero(); 4];
                q[l] = f.one();
                q[k] = f.mul(w, &ckl).neg();
                let sum: Vec<FieldElement> = p.iter().zip(&q).map(|(x, y)| x.add(y)).collect();
                let diff: Vec<FieldElement> = p.iter().zip(&q).map(|(x, y)| x.sub(y)).collect();
                // A binary cubic with four zeros vanishes identically.
                for v in [&p, &q, &sum, &diff] {
                    if !diagonal_cubic(f, a, v).is_zero() {
                        return Err(LabError::NonSplitWitness(format!(
                            "line on pairs {pairs:?} with roots ({zi}, {wi}) leaves the surface at {v:?}"
                        )));
                    }
                }
                lines.push(Line {
                    pairs,
                    roots: [zi, wi],
                    p,
                    q,
                });
            }
        }
    }
    let pl: Vec<Vec<FieldElement>> = lines.iter().map(|l| l.plucker(f)).collect();
    for s in 0..pl.len() {
        for t in s + 1..pl.len() {
            let proportional = (0..6).all(|u| {
                (u + 1..6).all(|v| f.mul(&pl[s][u], &pl[t][v]) == f.mul(&pl[s][v], &pl[t][u]))
            });
            if proportional {
                return Err(LabError::NonSplitWitness(format!(
                    "lines {s} and {t} coincide"
                )));
            }
        }
    }
    Ok(lines)
}

/// `x_i = t_i^3`, refusing base points with a zero coordinate.
pub fn fiber_coefficients(
    f: &NumberField,
    t: &[FieldElement],
) -> Result<Vec<FieldElement>, LabError> {
    if t.len() != 4 {
        return Err(LabError::Precondition(
            "base points have four coordinates".into(),
        ));
    }
    if t.iter().any(|x| x.is_zero()) {
        return Err(LabError::Precondition(
            "base point has a zero coordinate; the fiber is not a smooth diagonal cubic".into(),
        ));
    }
    Ok(t.iter().map(|x| f.pow(x, 3)).collect())
}

/// One sampled fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberCheck {
    pub t: Vec<FieldElement>,
    pub x: Vec<FieldElement>,
    pub lines: usize,
}

/// Picard ranks and log-power exponents for the family and its restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentLedger {
    /// `rho(X_F)`.
    pub rho_x: usize,
    /// `rho(X'_{F'})` when `F'` contains `F`, and otherwise.
    pub rho_res_x: (usize, usize),
    /// `rho(Y'_{F'})` for the restricted degree-6 del Pezzo surface.
    pub rho_res_y: (usize, usize),
}

impl ExponentLedger {
    pub fn compute() -> Result<ExponentLedger, LabError> {
        let x = GaloisLattice::trivial(PicardLattice::bt());
        let y = GaloisLattice::trivial(PicardLattice::dp6());
        let xi = induce(&x, 2, &[1, 0])?;
        let yi = induce(&y, 2, &[1, 0])?;
        Ok(ExponentLedger {
            rho_x: invariants_rank(&x),
            // Over F' containing F the absolute Galois group of F' acts
            // trivially on the induced lattice; otherwise through the swap.
            rho_res_x: (xi.rank(), invariants_rank(&xi)),
            rho_res_y: (yi.rank(), invariants_rank(&yi)),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let (xs, xn) = self.rho_res_x;
        let (ys, yn) = self.rho_res_y;
        let _ = writeln!(s, "rho(X_F) = {}", self.rho_x);
        let _ = writeln!(
            s,
            "manin_prediction: b = rho(X_F) = {}, N ~ c B (log B)^{}",
            self.rho_x,
            self.rho_x - 1
        );
        let _ = writeln!(s, "fiber_floor: N >= c B (log B)^3 from split cubic fibers");
        let _ = writeln!(s, "rho(Y'_F') = {ys} if F in F', {yn} otherwise");
        let _ = writeln!(
            s,
            "restricted_fiber_floor: (log B)^{} if F in F', (log B)^{} otherwise",
            ys - 1,
            yn - 1
        );
        let _ = writeln!(s, "rho(X'_F') = {xs} if F in F', {xn} otherwise");
        let _ = writeln!(
            s,
            "restricted_total: manin (log B)^{} vs floor (log B)^{} if F in F'; manin (log B)^{} vs floor (log B)^{} otherwise",
            xs - 1,
            xs + 3,
            xn - 1,
            xn + 1
        );
        s
    }
}

/// Counts on the fiber over `(1:1:1:1)` along a ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberCounts {
    pub ladder: Vec<Rat>,
    pub total: Vec<u128>,
    pub off_lines: Vec<u128>,
}

impl FiberCounts {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("B,total,off_lines\n");
        for i in 0..self.ladder.len() {
            let _ = writeln!(
                s,
                "{},{},{}",
                crate::arith::format_rat(&self.ladder[i]),
                self.total[i],
                self.off_lines[i]
            );
        }
        s
    }
}

pub fn fermat_fiber_counts(f: &NumberField, ladder: &[Rat]) -> Result<FiberCounts, LabError> {
    let names = var_names("y", 4);
    let eq = Poly::parse(f, "y0^3 + y1^3 + y2^3 + y3^3", &names)
        .map_err(|e| LabError::Precondition(e.to_string()))?;
    let sys = PolynomialSystem::new(
        f.clone(),
        names,
        vec![eq],
        Vec::new(),
        Ambient::Projective(vec![4]),
    )?;
    let lines = split_lines(f, &vec![f.one(); 4])?;
    let top = ladder
        .last()
        .ok_or_else(|| LabError::Config("empty fiber ladder".into()))?;
    let pts = collect_points(&EnumerationTask::from_system(&sys, top.clone())?)?;
    let mut total = vec![0u128; ladder.len()];
    let mut off = vec![0u128; ladder.len()];
    for (pt, h) in &pts {
        let hv = h
            .as_rational()
            .ok_or_else(|| LabError::Precondition("non-rational height on the fiber".into()))?;
        let i = ladder.partition_point(|b| *b < hv);
        if i == ladder.len() {
            continue;
        }
        total[i] += 1;
        if !lines.iter().any(|l| l.contains(f, pt.coords())) {
            off[i] += 1;
        }
    }
    let cum = |v: Vec<u128>| -> Vec<u128> {
        let mut acc = 0;
        v.into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect()
    };
    Ok(FiberCounts {
        ladder: ladder.to_vec(),
        total: cum(total),
        off_lines: cum(off),
    })
}

/// Everything the experiment reports.
#[derive(Clone, Debug)]
pub struct BtReport {
    pub fibers: Vec<FiberCheck>,
    pub counts: FiberCounts,
    pub fit: Result<FitReport, String>,
    pub ledger: ExponentLedger,
}

impl BtReport {
    pub fn passed(&self) -> bool {
        self.fibers.iter().all(|c| c.lines == 27) && self.ledger.rho_x == 2
    }

    pub fn fibers_csv(&self) -> String {
        let mut s = String::from("sample,t0,t1,t2,t3,x0,x1,x2,x3,lines\n");
        for (i, c) in self.fibers.iter().enumerate() {
            let t: Vec<String> = c.t.iter().map(|z| z.to_string()).collect();
            let x: Vec<String> = c.x.iter().map(|z| z.to_string()).collect();
            let _ = writeln!(s, "{i},{},{},{}", t.join(","), x.join(","), c.lines);
        }
        s
    }

    pub fn ledger_text(&self) -> String {
        let mut s = self.ledger.to_text();
        let ok = self.fibers.iter().filter(|c| c.lines == 27).count();
        let _ = writeln!(s, "split_fibers = {ok}/{}", self.fibers.len());
        match &self.fit {
            Ok(r) => {
                let _ = writeln!(
                    s,
                    "fiber (1:1:1:1) fit of all points, free mode; the lines dominate at this height, \
                     so this is not the off-line growth rate:"
                );
                s.push_str(&r.to_text());
            }
            Err(e) => {
                let _ = writeln!(s, "fiber (1:1:1:1) fit unavailable: {e}");
            }
        }
        s
    }
}

/// Samples `samples` base points (the first is `(1,1,1,1)`), checks that
/// each fiber is split, and counts points on the first fiber.
pub fn bt_experiment(
    f: &NumberField,
    samples: usize,
    coefficient_range: i64,
    fiber_ladder: &[Rat],
    seed: u64,
) -> Result<BtReport, LabError> {
    if f.degree() != 2 || !f.roots_of_unity().is_multiple_of(3) {
        return Err(LabError::Precondition(format!(
            "the experiment runs over Q(sqrt(-3)), not {}",
            f.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fibers = Vec::with_capacity(samples);
    for s in 0..samples {
        let t: Vec<FieldElement> = if s == 0 {
            vec![f.one(); 4]
        } else {
            (0..4)
                .map(|_| loop {
                    let a = rng.gen_range(-coefficient_range..=coefficient_range);
                    let b = rng.gen_range(-coefficient_range..=coefficient_range);
                    if a != 0 || b != 0 {
                        break f.from_powers(&[
                            Rat::from_integer(a.into()),
                            Rat::from_integer(b.into()),
                        ]);
                    }
                })
                .collect()
        };
        let x = fiber_coefficients(f, &t)?;
        let lines = split_lines(f, &x)?.len();
        fibers.push(FiberCheck { t, x, lines });
    }
    let counts = fermat_fiber_counts(f, fiber_ladder)?;
    let b: Vec<f64> = counts.ladder.iter().map(rat_to_f64).collect();
    let n: Vec<f64> = counts.total.iter().map(|&c| c as f64).collect();
    let fit = fit_points(&b, &n, FitMode::Free).map_err(|e| e.to_string());
    Ok(BtReport {
        fibers,
        counts,
        fit,
        ledger: ExponentLedger::compute()?,
    })
}

/// `ceil(bound * k / rungs)` for `k = 1..=rungs`, deduplicated.
pub fn linear_ladder(bound: &Rat, rungs: usize) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    for k in 1..=rungs {
        let b = (bound * Rat::from_integer(BigInt::from(k))
            / Rat::from_integer(BigInt::from(rungs)))
        .ceil();
        if b >= Rat::one() && out.last() != Some(&b) {
            out.push(b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn cube_roots_exact() {
        let f = NumberField::eisenstein();
        assert_eq!(cube_roots(&f, &f.one()).len(), 3);
        let t = f.from_powers(&[rat(2), rat(-3)]);
        let c = f.pow(&t, 3).scale(&Rat::new(1.into(), 27.into()));
        let roots = cube_roots(&f, &c);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert_eq!(f.pow(r, 3), c);
        }
        assert!(cube_roots(&f, &f.from_int(2)).is_empty());
        let q = NumberField::rationals();
        assert_eq!(cube_roots(&q, &q.from_int(-8)), vec![q.from_int(-2)]);
    }

    #[test]
    fn fermat_and_witness() {
        let f = NumberField::eisenstein();
        let lines = split_lines(&f, &vec![f.one(); 4]).unwrap();
        assert_eq!(lines.len(), 27);
        // (1 : -1 : 0 : 0) lies on the surface and on three lines through it
        let pt = vec![f.one(), f.from_int(-1), f.zero(), f.zero()];
        assert!(lines.iter().filter(|l| l.contains(&f, &pt)).count() >= 1);
        let bad = vec![f.one(), f.one(), f.one(), f.from_int(2)];
        assert!(matches!(
            split_lines(&f, &bad),
            Err(LabError::NonSplitWitness(_))
        ));
        let z = vec![f.zero(), f.one(), f.one(), f.one()];
        assert!(matches!(
            fiber_coefficients(&f, &z),
            Err(LabError::Precondition(_))
        ));
        // over Q there is no cube root of unity
        let q = NumberField::rationals();
        assert!(matches!(
            split_lines(&q, &vec![q.one(); 4]),
            Err(LabError::NonSplitWitness(_))
        ));
    }

    #[test]
    fn ledger_ranks() {
        let l = ExponentLedger::compute().unwrap();
        assert_eq!(l.rho_x, 2);
        assert_eq!(l.rho_res_x, (4, 2));
        assert_eq!(l.rho_res_y, (8, 4));
    }

    #[test]
    fn small_experiment() {
        let f = NumberField::eisenstein();
        let ladder = linear_ladder(&rat(4), 4);
        assert_eq!(ladder, vec![rat(1), rat(2), rat(3), rat(4)]);
        let r = bt_experiment(&f, 5, 3, &ladder, 9).unwrap();
        assert!(r.passed());
        assert!(r.counts.total.windows(2).all(|w| w[0] <= w[1]));
        assert!(r
            .counts
            .off_lines
            .iter()
            .zip(&r.counts.total)
            .all(|(a, b)| a <= b));
        assert!(bt_experiment(&NumberField::gaussian(), 1, 1, &ladder, 1).is_err());
    }
}
