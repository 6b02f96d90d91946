//! Counting points of `X` over `F` and of `Res X` over `E = Q`, and checking
//! that the counts agree at every height cutoff.
//!
//! The two sides share no enumeration code. The `F` side streams canonical
//! points with [`enum_subvariety`] and, below a verification cutoff, sends
//! each through `point_down` and [`restriction_height`]. The `E` side sweeps
//! integer vectors of the compiled cone system inside the ellipsoid cut out
//! by the norm form, and uses only the extension's multiplication table:
//! primitivity is the Hermite determinant of the products with the basis,
//! the height is the maximal norm form value, and points are taken once per
//! orbit of the unit group (the vectors of norm one) as the orbit's
//! lexicographic minimum.

use super::ring::{IdealLattice, IntRing};
use super::{check_ladder, enum_subvariety, Cutoff, EnumError, EnumerationTask};
use crate::arith::{isqrt, rat_floor, Rat};
use crate::heights::restriction_height;
use crate::nfcore::FieldElement;
use crate::poly::Poly;
use crate::weilres::{Ambient, CompiledRestriction};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use std::collections::HashSet;

/// Which `F`-points are pushed individually through `point_down` and
/// `restriction_height`: all of height at most `full_up_to`, and every
/// `stride`-th point above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyPolicy {
    pub full_up_to: Rat,
    pub stride: u64,
}

impl VerifyPolicy {
    pub fn all() -> Self {
        VerifyPolicy {
            full_up_to: Rat::from_integer(u64::MAX.into()),
            stride: 1,
        }
    }
}

/// Per-rung counts from both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionCountReport {
    pub ladder: Vec<Rat>,
    pub f_counts: Vec<u128>,
    pub e_counts: Vec<u128>,
    /// `F`-points individually pushed through `point_down` and
    /// `restriction_height`.
    pub verified_points: u64,
    /// `E`-points of height at most `full_up_to` matched against the images
    /// of the `F`-points.
    pub matched_base_points: u64,
}

impl RestrictionCountReport {
    pub fn passed(&self) -> bool {
        self.f_counts == self.e_counts
    }
}

/// Integer data of `F/Q` read from the extension table.
struct BaseSide {
    d: usize,
    table: Vec<Vec<Vec<i64>>>,
    /// `N(y) = a y0^2 + b y0 y1 + c y1^2` (`d = 2`) or `a y0` (`d = 1`).
    form: [i64; 3],
    units: Vec<Vec<i64>>,
}

impl BaseSide {
    fn new(c: &CompiledRestriction) -> Result<BaseSide, EnumError> {
        let ext = &c.ext;
        let d = ext.degree();
        if !ext.base.is_rational() || !ext.is_integral_basis() || d > 2 {
            return Err(EnumError::InvalidTask(
                "the base-side sweep needs E = Q, an integral basis, and degree at most 2".into(),
            ));
        }
        let int = |x: &FieldElement| -> Result<i64, EnumError> {
            x.coords[0]
                .is_integer()
                .then(|| x.coords[0].to_integer().to_i64())
                .flatten()
                .ok_or_else(|| EnumError::InvalidTask("non-integral table".into()))
        };
        let mut table = vec![vec![vec![0i64; d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    table[i][j][l] = int(&ext.table[i][j][l])?;
                }
            }
        }
        let n = |y: &[i64]| -> Result<i64, EnumError> {
            let v: Vec<FieldElement> = y.iter().map(|&a| FieldElement::from_ints(&[a])).collect();
            int(&ext.norm_coords(&v)?)
        };
        let form = if d == 1 {
            [n(&[1])?, 0, 0]
        } else {
            let a = n(&[1, 0])?;
            let c2 = n(&[0, 1])?;
            [a, n(&[1, 1])? - a - c2, c2]
        };
        if d == 2 && (form[0] <= 0 || 4 * form[0] * form[2] - form[1] * form[1] <= 0) {
            return Err(EnumError::InvalidTask(
                "the norm form is not positive definite".into(),
            ));
        }
        let mut side = BaseSide {
            d,
            table,
            form,
            units: Vec::new(),
        };
        side.units = side
            .vectors_up_to(1)
            .into_iter()
            .filter(|y| side.size(y) == 1)
            .collect();
        Ok(side)
    }

    fn size(&self, y: &[i64]) -> u64 {
        if self.d == 1 {
            (self.form[0] * y[0]).unsigned_abs()
        } else {
            let (a, b) = (y[0] as i128, y[1] as i128);
            (self.form[0] as i128 * a * a
                + self.form[1] as i128 * a * b
                + self.form[2] as i128 * b * b) as u64
        }
    }

    /// Integer vectors of size at most `x`, inside the bounding box of the
    /// norm-form ellipse.
    fn vectors_up_to(&self, x: u64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        if self.d == 1 {
            let r = (x / self.form[0].unsigned_abs()) as i64;
            for a in -r..=r {
                out.push(vec![a]);
            }
            return out;
        }
        let [a, b, c] = self.form;
        let disc = (4 * a * c - b * b) as u128;
        let r1 = isqrt(4 * c as u128 * x as u128 / disc) as i64 + 1;
        let r2 = isqrt(4 * a as u128 * x as u128 / disc) as i64 + 1;
        for y1 in -r2..=r2 {
            for y0 in -r1..=r1 {
                let v = vec![y0, y1];
                if self.size(&v) <= x {
                    out.push(v);
                }
            }
        }
        out
    }

    /// `u * x` coordinatewise on a flattened block.
    fn act(&self, u: &[i64], x: &[i64], out: &mut [i64]) {
        let d = self.d;
        for (xc, oc) in x.chunks(d).zip(out.chunks_mut(d)) {
            for (l, o) in oc.iter_mut().enumerate() {
                let mut s = 0i64;
                for (i, ui) in u.iter().enumerate() {
                    for (j, xj) in xc.iter().enumerate() {
                        s += ui * xj * self.table[i][j][l];
                    }
                }
                *o = s;
            }
        }
    }

    fn is_orbit_min(&self, x: &[i64], scratch: &mut [i64]) -> bool {
        for u in &self.units {
            self.act(u, x, scratch);
            if scratch[..] < x[..] {
                return false;
            }
        }
        true
    }

    fn orbit_min(&self, x: &[i64]) -> Vec<i64> {
        let mut best = x.to_vec();
        let mut s = vec![0; x.len()];
        for u in &self.units {
            self.act(u, x, &mut s);
            if s < best {
                best.clone_from(&s);
            }
        }
        best
    }

    /// Whether the products `x_k * alpha_j` span the full lattice.
    fn is_primitive(&self, x: &[i64]) -> bool {
        let d = self.d;
        if d == 1 {
            let g = x
                .iter()
                .fold(0i64, |g, &v| g.gcd(&(v * self.table[0][0][0])));
            return g == 1;
        }
        let mut lat = IdealLattice::zero();
        for xc in x.chunks(d) {
            for j in 0..d {
                let mut row = [0i64; 2];
                for (l, r) in row.iter_mut().enumerate() {
                    *r = (0..d).map(|k| xc[k] * self.table[k][j][l]).sum();
                }
                if row != [0, 0] {
                    lat.add_row(row[0], row[1]);
                }
            }
        }
        lat.is_unit()
    }
}

/// A polynomial over `Q` with denominators cleared, evaluated exactly.
struct QPoly {
    terms: Vec<(Vec<u32>, i128)>,
}

impl QPoly {
    fn new(p: &Poly) -> Result<QPoly, EnumError> {
        let den = p
            .terms
            .values()
            .fold(BigInt::one(), |a, c| a.lcm(c.coords[0].denom()));
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| {
                (&c.coords[0] * Rat::from_integer(den.clone()))
                    .to_integer()
                    .to_i128()
                    .map(|v| (m.clone(), v))
                    .ok_or_else(|| EnumError::InvalidTask("coefficient too large".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(QPoly { terms })
    }

    fn is_zero_at(&self, y: &[i64]) -> bool {
        let mut s: i128 = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= y[i] as i128;
                }
            }
            s += t;
        }
        s == 0
    }
}

/// Canonical primitive block vectors with block size at most `smax`, sorted
/// by size.
fn base_block_points(side: &BaseSide, coords: usize, smax: u64) -> Vec<(Vec<i64>, u64)> {
    let mut vecs = side.vectors_up_to(smax);
    vecs.sort_by_key(|v| side.size(v));
    let d = side.d;
    let len = coords * d;
    let mut out = Vec::new();
    let mut idx = vec![0usize; coords];
    let mut buf = vec![0i64; len];
    let mut scratch = vec![0i64; len];
    'outer: loop {
        for (k, &i) in idx.iter().enumerate() {
            buf[k * d..(k + 1) * d].copy_from_slice(&vecs[i]);
        }
        if buf.iter().any(|&v| v != 0)
            && side.is_orbit_min(&buf, &mut scratch)
            && side.is_primitive(&buf)
        {
            let s = idx.iter().map(|&i| side.size(&vecs[i])).max().unwrap_or(0);
            out.push((buf.clone(), s));
        }
        for k in (0..coords).rev() {
            idx[k] += 1;
            if idx[k] < vecs.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    out.sort_by_key(|p| p.1);
    out
}

/// Checks `N(O(1,..,1), X, B) = N(Res O(1,..,1), Res X, B)` along the ladder.
///
/// Verified `F`-points are mapped through `point_down` and their
/// restriction heights compared with their heights; every `E`-point of
/// height at most `policy.full_up_to` is matched with an `F`-point.
pub fn restriction_count_check(
    c: &CompiledRestriction,
    ladder: &[Rat],
    policy: &VerifyPolicy,
) -> Result<RestrictionCountReport, EnumError> {
    check_ladder(ladder)?;
    let Ambient::Projective(blocks) = c.source.ambient.clone() else {
        return Err(EnumError::InvalidTask(
            "restriction counts need a projective system".into(),
        ));
    };
    let side = BaseSide::new(c)?;
    let ring = IntRing::new(&c.ext.top)?;
    let cuts: Vec<Cutoff> = ladder.iter().map(Cutoff::new).collect();
    let top = cuts.last().expect("nonempty").floor;
    let verify = Cutoff::new(&policy.full_up_to);
    let stride = policy.stride.max(1);
    let mut seen = 0u64;

    // F side.
    let task = EnumerationTask::from_system(&c.source, ladder.last().expect("nonempty").clone())?;
    let bundle = task.bundle.clone();
    let mut f_bins = vec![0u128; cuts.len()];
    let mut images: HashSet<Vec<i64>> = HashSet::new();
    let mut verified = 0u64;
    let mut failure: Option<EnumError> = None;
    enum_subvariety(&task, &mut |x, h| {
        if failure.is_some() {
            return;
        }
        let hv = rat_floor(&h.value).to_u128().unwrap_or(u128::MAX);
        f_bins[cuts.partition_point(|c| hv > c.floor)] += 1;
        seen += 1;
        let full = hv <= verify.floor;
        if !full && !seen.is_multiple_of(stride) {
            return;
        }
        let fe: Vec<FieldElement> = x.iter().map(|z| ring.to_field(z)).collect();
        let check = || -> Result<Vec<i64>, EnumError> {
            let (chart, y) = c.point_down(&fe)?;
            let rh = restriction_height(c, chart, &y, &bundle)?;
            if rh != *h {
                return Err(EnumError::MismatchFound(format!(
                    "point {fe:?}: height {} but restriction height {}",
                    h.to_f64(),
                    rh.to_f64()
                )));
            }
            let cone: Vec<i64> = c
                .cone_down(&fe)
                .iter()
                .map(|v| {
                    v.coords[0]
                        .to_integer()
                        .to_i64()
                        .expect("small coordinates")
                })
                .collect();
            let mut canon = Vec::new();
            let mut start = 0;
            for &b in &blocks {
                canon.extend(side.orbit_min(&cone[start * side.d..(start + b) * side.d]));
                start += b;
            }
            Ok(canon)
        };
        match check() {
            Ok(v) => {
                verified += 1;
                if full {
                    images.insert(v);
                }
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }

    // E side.
    let eqs: Vec<QPoly> = c
        .cone
        .equations
        .iter()
        .map(QPoly::new)
        .collect::<Result<_, _>>()?;
    let nonvan: Vec<Vec<QPoly>> = c
        .cone
        .nonvanishing
        .iter()
        .map(|g| g.iter().map(QPoly::new).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let smax = top.min(u64::MAX as u128) as u64;
    let lists: Vec<Vec<(Vec<i64>, u64)>> = blocks
        .iter()
        .map(|&b| base_block_points(&side, b, smax))
        .collect();
    let mut e_bins = vec![0u128; cuts.len()];
    let mut matched = 0u64;
    let mut tuple: Vec<i64> = Vec::new();
    let mut extra: Option<Vec<i64>> = None;
    let mut visit = |t: &[i64], h: u128| {
        if !eqs.iter().all(|p| p.is_zero_at(t))
            || !nonvan.iter().all(|g| g.iter().any(|p| !p.is_zero_at(t)))
        {
            return;
        }
        e_bins[cuts.partition_point(|c| h > c.floor)] += 1;
        if h <= verify.floor {
            if images.contains(t) {
                matched += 1;
            } else if extra.is_none() {
                extra = Some(t.to_vec());
            }
        }
    };
    sweep(&lists, 0, 1, top, &mut tuple, &mut visit);
    if let Some(w) = extra {
        return Err(EnumError::MismatchFound(format!(
            "base-side point {w:?} has no point over the top field"
        )));
    }

    let cumulative = |bins: Vec<u128>| -> Vec<u128> {
        let mut acc = 0;
        bins.into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect()
    };
    let report = RestrictionCountReport {
        ladder: ladder.to_vec(),
        f_counts: cumulative(f_bins),
        e_counts: cumulative(e_bins),
        verified_points: verified,
        matched_base_points: matched,
    };
    if let Some(i) = (0..ladder.len()).find(|&i| report.f_counts[i] != report.e_counts[i]) {
        return Err(EnumError::MismatchFound(format!(
            "B = {}: {} points over the top field, {} over the base",
            crate::arith::format_rat(&ladder[i]),
            report.f_counts[i],
            report.e_counts[i]
        )));
    }
    Ok(report)
}

fn sweep(
    lists: &[Vec<(Vec<i64>, u64)>],
    idx: usize,
    weight: u128,
    top: u128,
    tuple: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64], u128),
) {
    if idx == lists.len() {
        visit(tuple, weight);
        return;
    }
    for (x, s) in &lists[idx] {
        let w = weight * *s as u128;
        if w > top {
            break;
        }
        let len = tuple.len();
        tuple.extend_from_slice(x);
        sweep(lists, idx + 1, w, top, tuple, visit);
        tuple.truncate(len);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::nfcore::NumberField;
    use crate::weilres::{restrict_projective, ExtensionData, PolynomialSystem};

    #[test]
    fn gaussian_line() {
        let f = NumberField::gaussian();
        let c = restrict_projective(
            &PolynomialSystem::projective_space(&f, 1),
            &ExtensionData::over_rationals(&f),
        )
        .unwrap();
        let r =
            restriction_count_check(&c, &[rat(1), rat(2), rat(5), rat(30)], &VerifyPolicy::all())
                .unwrap();
        assert_eq!(r.f_counts[0], 6);
        assert!(r.passed());
        assert_eq!(r.verified_points as u128, r.f_counts[3]);
        assert_eq!(r.matched_base_points as u128, r.e_counts[3]);
        let q = NumberField::rationals();
        let t = restrict_projective(
            &PolynomialSystem::projective_space(&q, 2),
            &ExtensionData::trivial(&q),
        )
        .unwrap();
        assert!(
            restriction_count_check(&t, &[rat(3), rat(7)], &VerifyPolicy::all())
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn eisenstein_conic() {
        let f = NumberField::eisenstein();
        let names = crate::poly::var_names("x", 3);
        let eq = Poly::parse_equation(&f, "x0^2 + x1^2 = x2^2", &names).unwrap();
        let sys = PolynomialSystem::new(
            f.clone(),
            names,
            vec![eq],
            vec![],
            Ambient::Projective(vec![3]),
        )
        .unwrap();
        let c = restrict_projective(&sys, &ExtensionData::over_rationals(&f)).unwrap();
        let r = restriction_count_check(
            &c,
            &[rat(4), rat(12)],
            &VerifyPolicy {
                full_up_to: rat(4),
                stride: 3,
            },
        )
        .unwrap();
        assert!(r.passed());
        assert!(r.f_counts[1] > 4);
    }
}
