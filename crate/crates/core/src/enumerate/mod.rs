//! Points of bounded height on (multi)projective space and its
//! subvarieties over `Q` and imaginary quadratic fields of class number one.
//!
//! A point has a unique representative with coordinates in `O_F`, content
//! ideal `O_F`, and first nonzero coordinate (of each block) in the argument
//! sector of the roots of unity. The enumerators walk exactly those tuples
//! with machine integers. With max norms the height of such a tuple is the
//! product over blocks of `max_i |x_i|_inf` (the norm at a complex place),
//! an integer, so cutoffs and ties are decided exactly.
//!
//! Three counting routes exist and are compared in tests: the explicit
//! stream, a sweep over (content ideal, max size) states that counts the last
//! coordinate in aggregate, and Moebius inversion over ideals.

mod count;
mod restriction;
mod ring;

pub use count::{content_sweep_histogram, moebius_inverted_count, moebius_series};
pub use restriction::{restriction_count_check, RestrictionCountReport, VerifyPolicy};
pub use ring::{Elem, IdealLattice, IntPoly, IntRing};

use crate::arith::Rat;
use crate::heights::{height, ArchNorm, Height, HeightError, MetrizedBundle, ProjectivePoint};
use crate::linalg::inverse_rat;
use crate::nfcore::{FieldElement, NfError, NumberField};
use crate::poly::Poly;
use crate::weilres::{Ambient, PolynomialSystem, WeilError};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("mismatch found: {0}")]
    MismatchFound(String),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Field(#[from] NfError),
}

/// What to enumerate: points of the ambient space of `bundle` satisfying
/// `equations` and avoiding the zeros of `nonvanishing`, of height at most
/// `bound`.
#[derive(Clone, Debug)]
pub struct EnumerationTask {
    pub field: NumberField,
    pub bundle: MetrizedBundle,
    pub equations: Vec<Poly>,
    pub nonvanishing: Vec<Poly>,
    pub bound: Rat,
    /// Number of worker threads for counting; results never depend on it.
    pub partitions: usize,
}

impl EnumerationTask {
    /// `P^n` with `O(1)` and max norms.
    pub fn projective(field: &NumberField, n: usize, bound: Rat) -> Self {
        EnumerationTask {
            field: field.clone(),
            bundle: MetrizedBundle::o1(n),
            equations: Vec::new(),
            nonvanishing: Vec::new(),
            bound,
            partitions: 1,
        }
    }

    /// The points of a projective system, with `O(1, ..., 1)` and max norms.
    pub fn from_system(sys: &PolynomialSystem, bound: Rat) -> Result<Self, EnumError> {
        let Ambient::Projective(blocks) = &sys.ambient else {
            return Err(EnumError::InvalidTask(
                "affine systems have infinitely many points".into(),
            ));
        };
        let parts: Vec<(usize, i64)> = blocks.iter().map(|&b| (b - 1, 1)).collect();
        Ok(EnumerationTask {
            field: sys.field.clone(),
            bundle: MetrizedBundle::multidegree(&parts),
            equations: sys.equations.clone(),
            nonvanishing: sys.nonvanishing.clone(),
            bound,
            partitions: 1,
        })
    }

    pub fn with_bound(mut self, bound: Rat) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_partitions(mut self, k: usize) -> Self {
        self.partitions = k.max(1);
        self
    }
}

/// Exact counts `N(B)` along an increasing ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub ladder: Vec<Rat>,
    pub counts: Vec<u128>,
    /// Wall-clock milliseconds spent up to each rung, when measured.
    pub elapsed_ms: Vec<Option<u64>>,
}

impl CountSeries {
    pub fn is_monotone(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] <= w[1])
    }

    /// CSV with columns `B,count,elapsed_ms`; unmeasured timings print as `-`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("B,count,elapsed_ms\n");
        for (i, b) in self.ladder.iter().enumerate() {
            let t = self.elapsed_ms.get(i).copied().flatten();
            s.push_str(&format!(
                "{},{},{}\n",
                crate::arith::format_rat(b),
                self.counts[i],
                t.map_or("-".to_string(), |t| t.to_string())
            ));
        }
        s
    }
}

/// Height of an enumerated tuple: an integer for max norms, exact otherwise.
#[derive(Clone, Debug)]
enum HVal {
    Int(u128),
    Exact(Height),
}

impl HVal {
    fn to_height(&self) -> Height {
        match self {
            HVal::Int(h) => Height::rational(Rat::from_integer(BigInt::from(*h))),
            HVal::Exact(h) => h.clone(),
        }
    }

    fn le(&self, b: &Cutoff) -> bool {
        match (self, b) {
            (HVal::Int(h), Cutoff { floor, .. }) => *h <= *floor,
            (HVal::Exact(h), Cutoff { exact, .. }) => h.le_rat(exact),
        }
    }
}

#[derive(Clone, Debug)]
struct Cutoff {
    exact: Rat,
    floor: u128,
}

impl Cutoff {
    fn new(b: &Rat) -> Cutoff {
        let f = crate::arith::rat_floor(b);
        Cutoff {
            exact: b.clone(),
            floor: if f.is_negative() {
                0
            } else {
                f.to_u128().unwrap_or(u128::MAX)
            },
        }
    }
}

struct Block {
    dim: usize,
    degree: u32,
    /// Largest block size that can occur.
    size_bound: u64,
}

/// Precomputed data shared by all workers.
struct Plan {
    ring: IntRing,
    field: NumberField,
    bundle: MetrizedBundle,
    blocks: Vec<Block>,
    equations: Vec<IntPoly>,
    nonvanishing: Vec<IntPoly>,
    max_norms: bool,
    elements: Vec<Elem>,
    sector: Vec<Elem>,
    cutoff: Cutoff,
}

fn iroot(x: &BigInt, k: u32) -> u64 {
    if x.is_negative() {
        return 0;
    }
    x.nth_root(k).to_u64().unwrap_or(u64::MAX)
}

impl Plan {
    fn new(task: &EnumerationTask) -> Result<Plan, EnumError> {
        let ring = IntRing::new(&task.field)?;
        let bundle = &task.bundle;
        if bundle.factors.iter().any(|f| f.degree < 1) {
            return Err(EnumError::InvalidTask(
                "every factor needs positive degree".into(),
            ));
        }
        let nc = bundle.num_coords();
        let mut ranges = Vec::new();
        let mut start = 0;
        for b in bundle.block_sizes() {
            ranges.push(start..start + b);
            start += b;
        }
        for p in task.equations.iter().chain(&task.nonvanishing) {
            if p.nvars != nc {
                return Err(EnumError::InvalidTask(
                    "predicate variable count differs from the ambient".into(),
                ));
            }
            if !p.is_multihomogeneous(&ranges) {
                return Err(EnumError::InvalidTask(
                    "predicate is not multihomogeneous".into(),
                ));
            }
        }
        let max_norms = bundle.norms.iter().all(|n| *n == ArchNorm::Max);
        // Overscan: the max norm is at most c times the chosen norm.
        let mut overscan = Rat::one();
        if !max_norms {
            if bundle.factors.len() != 1 {
                return Err(EnumError::InvalidTask(
                    "non-max norms are enumerated on a single factor only".into(),
                ));
            }
            for n in &bundle.norms {
                if let ArchNorm::Matrix(m) = n {
                    let inv = inverse_rat(m).ok_or(HeightError::SingularMatrix)?;
                    let c = inv
                        .iter()
                        .map(|row| row.iter().map(|x| x.abs()).fold(Rat::zero(), |a, b| a + b))
                        .max()
                        .unwrap_or_else(Rat::one);
                    overscan = overscan.max(c);
                }
            }
            if ring.deg == 2 {
                overscan = &overscan * &overscan;
            }
        }
        let cutoff = Cutoff::new(&task.bound);
        let mut blocks = Vec::new();
        for f in &bundle.factors {
            let k = f.degree as u32;
            let scaled = crate::arith::rat_floor(
                &(num_traits::pow(overscan.clone(), k as usize) * &task.bound),
            );
            blocks.push(Block {
                dim: f.dim,
                degree: k,
                size_bound: iroot(&scaled, k),
            });
        }
        let smax = blocks.iter().map(|b| b.size_bound).max().unwrap_or(0);
        if smax > 50_000_000 {
            return Err(EnumError::InvalidTask(format!(
                "size bound {smax} is too large to enumerate"
            )));
        }
        let elements = ring.elements_up_to(smax);
        let sector = elements
            .iter()
            .copied()
            .filter(|z| ring.in_sector(z))
            .collect();
        let conv = |ps: &[Poly]| {
            ps.iter()
                .map(|p| IntPoly::new(&ring, p))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Plan {
            equations: conv(&task.equations)?,
            nonvanishing: conv(&task.nonvanishing)?,
            field: task.field.clone(),
            bundle: bundle.clone(),
            ring,
            blocks,
            max_norms,
            elements,
            sector,
            cutoff,
        })
    }

    fn prefix(&self, list: &[Elem], s: u64) -> usize {
        list.partition_point(|z| self.ring.size(z) <= s)
    }

    /// The (leading position, sector index) choices of block `b` in order.
    fn leads(&self, b: usize) -> Vec<(usize, usize)> {
        let n = self.prefix(&self.sector, self.blocks[b].size_bound);
        (0..=self.blocks[b].dim)
            .flat_map(|k| (0..n).map(move |i| (k, i)))
            .collect()
    }

    /// Canonical primitive tuples of one block with max size `<= s_max`,
    /// restricted to the given leading choices.
    fn block_points(
        &self,
        b: usize,
        s_max: u64,
        leads: &[(usize, usize)],
        visit: &mut dyn FnMut(&[Elem], u64),
    ) {
        let dim = self.blocks[b].dim;
        let all = &self.elements[..self.prefix(&self.elements, s_max)];
        let mut buf = vec![[0i64, 0i64]; dim + 1];
        for &(k, i) in leads {
            let lead = self.sector[i];
            let s = self.ring.size(&lead);
            if s > s_max {
                continue;
            }
            for z in buf.iter_mut() {
                *z = [0, 0];
            }
            buf[k] = lead;
            let lat = self.ring.content(&[lead]);
            self.fill(&mut buf, k + 1, lat, s, all, visit);
        }
    }

    fn fill(
        &self,
        buf: &mut [Elem],
        pos: usize,
        lat: IdealLattice,
        size: u64,
        all: &[Elem],
        visit: &mut dyn FnMut(&[Elem], u64),
    ) {
        if pos == buf.len() {
            if lat.is_unit() {
                visit(buf, size);
            }
            return;
        }
        for z in all {
            let mut l = lat;
            self.ring.ideal_add(&mut l, z);
            buf[pos] = *z;
            self.fill(buf, pos + 1, l, size.max(self.ring.size(z)), all, visit);
        }
    }

    fn accept(&self, x: &[Elem]) -> bool {
        self.equations.iter().all(|p| p.vanishes(&self.ring, x))
            && self.nonvanishing.iter().all(|p| !p.vanishes(&self.ring, x))
    }

    fn exact_height(&self, x: &[Elem]) -> Result<Height, EnumError> {
        let fe: Vec<FieldElement> = x.iter().map(|z| self.ring.to_field(z)).collect();
        Ok(height(&self.field, &fe, &self.bundle)?)
    }

    /// Runs the enumeration for the given leads of block 0, calling `visit`
    /// on every accepted point in deterministic order.
    fn run(
        &self,
        leads: &[(usize, usize)],
        visit: &mut dyn FnMut(&[Elem], &HVal),
    ) -> Result<(), EnumError> {
        // Blocks after the first are materialized once, sorted by size.
        let mut rest: Vec<Vec<(Vec<Elem>, u64)>> = Vec::new();
        for b in 1..self.blocks.len() {
            let mut pts = Vec::new();
            self.block_points(b, self.blocks[b].size_bound, &self.leads(b), &mut |x, s| {
                pts.push((x.to_vec(), s))
            });
            pts.sort_by_key(|p| p.1);
            rest.push(pts);
        }
        let mut err = None;
        let total: usize = self.blocks.iter().map(|b| b.dim + 1).sum();
        let mut tuple = vec![[0i64, 0i64]; total];
        let mut on_first = |x: &[Elem], s: u64| {
            if err.is_some() {
                return;
            }
            let w = pow_sat(s, self.blocks[0].degree);
            tuple[..x.len()].copy_from_slice(x);
            if let Err(e) = self.combine(&rest, 0, x.len(), w, &mut tuple, visit) {
                err = Some(e);
            }
        };
        self.block_points(0, self.blocks[0].size_bound, leads, &mut on_first);
        err.map_or(Ok(()), Err)
    }

    fn combine(
        &self,
        rest: &[Vec<(Vec<Elem>, u64)>],
        idx: usize,
        offset: usize,
        weight: u128,
        tuple: &mut [Elem],
        visit: &mut dyn FnMut(&[Elem], &HVal),
    ) -> Result<(), EnumError> {
        if self.max_norms && weight > self.cutoff.floor {
            return Ok(());
        }
        if idx == rest.len() {
            if !self.accept(tuple) {
                return Ok(());
            }
            let h = if self.max_norms {
                HVal::Int(weight)
            } else {
                HVal::Exact(self.exact_height(tuple)?)
            };
            if h.le(&self.cutoff) {
                visit(tuple, &h);
            }
            return Ok(());
        }
        let k = self.blocks[idx + 1].degree;
        for (x, s) in &rest[idx] {
            let w = weight.saturating_mul(pow_sat(*s, k));
            if w > self.cutoff.floor {
                break;
            }
            tuple[offset..offset + x.len()].copy_from_slice(x);
            self.combine(rest, idx + 1, offset + x.len(), w, tuple, visit)?;
        }
        Ok(())
    }

    /// Splits the leads of block 0 into `k` contiguous slices.
    fn partitions(&self, k: usize) -> Vec<Vec<(usize, usize)>> {
        let leads = self.leads(0);
        let k = k.max(1);
        let chunk = leads.len().div_ceil(k).max(1);
        leads.chunks(chunk).map(|c| c.to_vec()).collect()
    }
}

fn pow_sat(s: u64, k: u32) -> u128 {
    let mut r: u128 = 1;
    for _ in 0..k {
        r = r.saturating_mul(s as u128);
    }
    r
}

/// Streams the points of projective space (no predicate) with height at
/// most the bound, each exactly once, and returns their number.
pub fn enum_projective(
    task: &EnumerationTask,
    visit: &mut dyn FnMut(&[Elem], &Height),
) -> Result<u64, EnumError> {
    if !task.equations.is_empty() || !task.nonvanishing.is_empty() {
        return Err(EnumError::InvalidTask(
            "use enum_subvariety for tasks with a predicate".into(),
        ));
    }
    enum_subvariety(task, visit)
}

/// Streams the ambient points that satisfy every equation and no
/// non-vanishing condition.
pub fn enum_subvariety(
    task: &EnumerationTask,
    visit: &mut dyn FnMut(&[Elem], &Height),
) -> Result<u64, EnumError> {
    let plan = Plan::new(task)?;
    let mut n = 0u64;
    plan.run(&plan.leads(0), &mut |x, h| {
        n += 1;
        visit(x, &h.to_height());
    })?;
    Ok(n)
}

/// The points as exact projective points, in enumeration order.
pub fn collect_points(task: &EnumerationTask) -> Result<Vec<(ProjectivePoint, Height)>, EnumError> {
    let ring = IntRing::new(&task.field)?;
    let mut out = Vec::new();
    let mut err = None;
    enum_subvariety(task, &mut |x, h| {
        let fe: Vec<FieldElement> = x.iter().map(|z| ring.to_field(z)).collect();
        match ProjectivePoint::new(&task.field, &fe) {
            Ok(p) => out.push((p, h.clone())),
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// Number of points, computed with `task.partitions` workers over disjoint
/// slices of leading coordinates.
pub fn count_points(task: &EnumerationTask) -> Result<u64, EnumError> {
    let s = count_series(task, std::slice::from_ref(&task.bound))?;
    Ok(s.counts[0] as u64)
}

/// Counts along the ladder in one pass with cutoff at the last rung.
pub fn count_series(task: &EnumerationTask, ladder: &[Rat]) -> Result<CountSeries, EnumError> {
    check_ladder(ladder)?;
    let top = task
        .clone()
        .with_bound(ladder.last().expect("nonempty").clone());
    let plan = Plan::new(&top)?;
    let cuts: Vec<Cutoff> = ladder.iter().map(Cutoff::new).collect();
    let parts = plan.partitions(task.partitions);
    let bucket = |leads: &[(usize, usize)]| -> Result<Vec<u128>, EnumError> {
        let mut b = vec![0u128; cuts.len()];
        plan.run(leads, &mut |_, h| {
            let i = cuts.partition_point(|c| !h.le(c));
            b[i] += 1;
        })?;
        Ok(b)
    };
    let results: Vec<Result<Vec<u128>, EnumError>> = if parts.len() <= 1 {
        parts.iter().map(|p| bucket(p)).collect()
    } else {
        std::thread::scope(|sc| {
            let handles: Vec<_> = parts.iter().map(|p| sc.spawn(|| bucket(p))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let mut total = vec![0u128; cuts.len()];
    for r in results {
        for (t, x) in total.iter_mut().zip(r?) {
            *t += x;
        }
    }
    let mut acc = 0;
    let counts = total
        .into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    Ok(CountSeries {
        ladder: ladder.to_vec(),
        counts,
        elapsed_ms: vec![None; ladder.len()],
    })
}

/// Counts rung by rung, timing each rung separately.
pub fn count_series_timed(
    task: &EnumerationTask,
    ladder: &[Rat],
) -> Result<CountSeries, EnumError> {
    check_ladder(ladder)?;
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut elapsed = Vec::new();
    for b in ladder {
        counts.push(count_points(&task.clone().with_bound(b.clone()))? as u128);
        elapsed.push(Some(start.elapsed().as_millis() as u64));
    }
    Ok(CountSeries {
        ladder: ladder.to_vec(),
        counts,
        elapsed_ms: elapsed,
    })
}

pub(crate) fn check_ladder(ladder: &[Rat]) -> Result<(), EnumError> {
    if ladder.is_empty() {
        return Err(EnumError::InvalidTask("empty ladder".into()));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EnumError::InvalidTask("ladder must be increasing".into()));
    }
    Ok(())
}

/// A geometric ladder `B0 * factor^k`, `k = 0..rungs`, rounded down to
/// integers and deduplicated.
pub fn geometric_ladder(b0: f64, factor: f64, rungs: usize) -> Result<Vec<Rat>, EnumError> {
    if !(b0 >= 1.0 && factor > 1.0 && rungs >= 1) {
        return Err(EnumError::InvalidTask(
            "ladder needs B0 >= 1, factor > 1, rungs >= 1".into(),
        ));
    }
    let mut out: Vec<Rat> = Vec::new();
    for k in 0..rungs {
        let b = (b0 * factor.powi(k as i32) + 1e-9).floor();
        let r = Rat::from_integer(BigInt::from(b as u64));
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn count(f: &NumberField, n: usize, b: i64) -> u64 {
        count_points(&EnumerationTask::projective(f, n, rat(b))).unwrap()
    }

    #[test]
    fn small_counts() {
        let q = NumberField::rationals();
        assert_eq!(count(&q, 1, 1), 4);
        assert_eq!(count(&q, 1, 2), 8);
        let g = NumberField::gaussian();
        let pts = collect_points(&EnumerationTask::projective(&g, 1, rat(1))).unwrap();
        assert_eq!(pts.len(), 6);
        let shown: Vec<String> = pts.iter().map(|p| p.0.to_string()).collect();
        for s in [
            "([0,0]:[1,0])",
            "([1,0]:[0,0])",
            "([1,0]:[0,1])",
            "([1,0]:[0,-1])",
        ] {
            assert!(shown.iter().any(|x| x == s), "{shown:?}");
        }
    }

    #[test]
    fn series_and_partitions() {
        let q = NumberField::rationals();
        let t = EnumerationTask::projective(&q, 2, rat(10));
        let ladder: Vec<Rat> = (1..=10).map(rat).collect();
        let s = count_series(&t, &ladder).unwrap();
        assert!(s.is_monotone());
        for (i, b) in ladder.iter().enumerate() {
            assert_eq!(
                s.counts[i],
                count_points(&t.clone().with_bound(b.clone())).unwrap() as u128
            );
        }
        let p = count_series(&t.clone().with_partitions(3), &ladder).unwrap();
        assert_eq!(s, p);
        assert_eq!(s.to_csv().lines().next(), Some("B,count,elapsed_ms"));
    }

    #[test]
    fn quadric_subvariety() {
        let q = NumberField::rationals();
        let names = crate::poly::var_names("u", 4);
        let eq = Poly::parse_equation(&q, "u0*u3 = u1^2 + u2^2", &names).unwrap();
        let mut t = EnumerationTask::projective(&q, 3, rat(1));
        t.equations = vec![eq];
        let mut seen = Vec::new();
        let n = enum_subvariety(&t, &mut |x, _| seen.push(x.to_vec())).unwrap();
        // brute force over {-1,0,1}^4 up to sign
        let mut brute = 0;
        for code in 0..81 {
            let v: Vec<i64> = (0..4).map(|i| (code / 3i64.pow(i)) % 3 - 1).collect();
            let first = v.iter().find(|&&x| x != 0);
            if first != Some(&1) {
                continue;
            }
            if v[0] * v[3] == v[1] * v[1] + v[2] * v[2] {
                brute += 1;
            }
        }
        assert_eq!(n, brute);
        assert!(seen.contains(&vec![[1, 0], [1, 0], [0, 0], [1, 0]]));
        t.equations = vec![Poly::constant(q.one(), 4)];
        assert_eq!(count_points(&t).unwrap(), 0);
    }

    #[test]
    fn euclidean_overscan() {
        let q = NumberField::rationals();
        let mut t = EnumerationTask::projective(&q, 1, rat(5));
        t.bundle = t.bundle.clone().with_norm(ArchNorm::Euclidean).unwrap();
        // (x:y) coprime with x^2 + y^2 <= 25
        let mut brute = 0;
        for x in 0..=5i64 {
            for y in -5..=5i64 {
                if (x > 0 || (x == 0 && y > 0))
                    && num_integer::gcd(x, y) == 1
                    && x * x + y * y <= 25
                {
                    brute += 1;
                }
            }
        }
        assert_eq!(count_points(&t).unwrap(), brute);
    }

    #[test]
    fn product_of_lines() {
        let q = NumberField::rationals();
        let mut t = EnumerationTask::projective(&q, 1, rat(6));
        t.bundle = MetrizedBundle::multidegree(&[(1, 1), (1, 1)]);
        let single: Vec<u128> = count_series(
            &EnumerationTask::projective(&q, 1, rat(6)),
            &(1..=6).map(rat).collect::<Vec<_>>(),
        )
        .unwrap()
        .counts;
        let per_height: Vec<u128> = (0..6)
            .map(|i| single[i] - if i == 0 { 0 } else { single[i - 1] })
            .collect();
        let mut expect = 0;
        for a in 1..=6usize {
            for b in 1..=6usize {
                if a * b <= 6 {
                    expect += per_height[a - 1] * per_height[b - 1];
                }
            }
        }
        assert_eq!(count_points(&t).unwrap() as u128, expect);
    }
}
