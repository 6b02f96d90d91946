//! Local densities `#X(O/p^k) / N(p)^{k n}` by exhaustive counting.
//!
//! At depth one the count runs over the residue field and also evaluates
//! the Jacobian at every point; a reduction without singular points is
//! smooth and its density is final by Hensel's lemma. Otherwise the count is
//! repeated modulo `p^k` for growing `k`. Each solution `x` carries the least
//! valuation `e(x)` of a maximal minor of the Jacobian, and once
//! `k >= 2 e(x) + 1` for every solution the density no longer changes.

use super::TamagawaError;
use crate::arith::{inv_mod, Rat};
use crate::nfcore::{FieldElement, NumberField, PrimeIdeal};
use crate::poly::Poly;
use crate::weilres::{Ambient, PolynomialSystem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// The finite field `O_F / P` with elements encoded as integers in `[0, q)`
/// (base-`p` digits of the coordinates in `1, t, ..., t^{f-1}`).
#[derive(Clone, Debug)]
pub struct ResidueField {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    modulus: Vec<u64>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

const MAX_RESIDUE_FIELD: u64 = 4_000_000;

impl ResidueField {
    /// `F_p[t] / (modulus)` for a monic irreducible `modulus` (coefficients
    /// from the constant term up).
    pub fn new(p: u64, modulus: &[u64]) -> Result<ResidueField, TamagawaError> {
        let f = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= MAX_RESIDUE_FIELD)
            .ok_or_else(|| {
                TamagawaError::Unsupported(format!("residue field of size {p}^{f} is too large"))
            })?;
        let mut k = ResidueField {
            p,
            f,
            q,
            modulus: modulus.to_vec(),
            log: Vec::new(),
            exp: Vec::new(),
        };
        for g in 2..q.max(3) {
            let g = if q == 2 { 1 } else { g };
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x = 1u64;
            let mut ok = true;
            for i in 0..q - 1 {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x as u32);
                x = k.slow_mul(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                k.exp = exp;
                k.log = log;
                return Ok(k);
            }
        }
        Err(TamagawaError::Unsupported(
            "no primitive element found; modulus is reducible".into(),
        ))
    }

    pub fn prime(p: u64) -> Result<ResidueField, TamagawaError> {
        Self::new(p, &[0, 1])
    }

    /// The residue field of a prime ideal.
    pub fn of_prime(pr: &PrimeIdeal) -> Result<ResidueField, TamagawaError> {
        Self::new(pr.p, &pr.residue_poly)
    }

    fn digits(&self, mut x: u64) -> Vec<u64> {
        (0..self.f)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let f = self.f as usize;
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * f];
        for i in 0..f {
            for j in 0..f {
                prod[i + j] = (prod[i + j] + da[i] as u128 * db[j] as u128) % p;
            }
        }
        for i in (f..2 * f).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..f {
                prod[i - f + j] = (prod[i - f + j] + p * p - c * self.modulus[j] as u128 % p) % p;
            }
            prod[i] = 0;
        }
        self.undigits(&prod[..f].iter().map(|&x| x as u64).collect::<Vec<_>>())
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.f == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut r = 0;
        let mut scale = 1;
        for _ in 0..self.f {
            r += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q - 1);
        self.exp[e as usize] as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        let e = (self.q - 1 - self.log[a as usize] as u64) % (self.q - 1);
        self.exp[e as usize] as u64
    }

    pub fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("reduced")
    }

    fn from_rat(&self, r: &Rat) -> Result<u64, TamagawaError> {
        let d = self.from_int(r.denom());
        if d == 0 {
            return Err(TamagawaError::Unsupported(format!(
                "denominator divisible by {}",
                self.p
            )));
        }
        Ok((self.from_int(r.numer()) as u128 * inv_mod(d, self.p) as u128 % self.p as u128) as u64)
    }

    /// Reduction of an element of `F` given the power-basis coordinates.
    fn reduce_powers(&self, c: &[Rat]) -> Result<u64, TamagawaError> {
        // sum c_i t^i, with t^i reduced modulo the residue polynomial
        let mut acc = 0u64;
        let mut tpow = 1u64;
        let t = if self.f == 1 {
            // t is the root of the linear modulus t + m0
            (self.p - self.modulus[0] % self.p) % self.p
        } else {
            self.p
        };
        for ci in c {
            let v = self.from_rat(ci)?;
            acc = self.add(acc, self.mul_scalar(tpow, v));
            tpow = self.mul(tpow, t);
        }
        Ok(acc)
    }

    fn mul_scalar(&self, a: u64, s: u64) -> u64 {
        if self.f == 1 {
            return (a as u128 * s as u128 % self.p as u128) as u64;
        }
        self.mul(a, s)
    }
}

/// A polynomial reduced into a residue field.
struct FqPoly {
    terms: Vec<(Vec<u32>, u64)>,
}

impl FqPoly {
    /// Scale that clears denominators of `p` and, over `Q`, removes the
    /// common power of the residue characteristic.
    fn normalizer(k: &ResidueField, field: &NumberField, p: &Poly) -> Rat {
        let den = p
            .terms
            .values()
            .flat_map(|c| field.to_powers(c))
            .fold(BigInt::one(), |a, r| a.lcm(r.denom()));
        let mut scale = Rat::from_integer(den);
        if field.is_rational() {
            let pb = BigInt::from(k.p);
            let g = p.terms.values().fold(BigInt::zero(), |g, c| {
                g.gcd(&(&c.coords[0] * &scale).to_integer())
            });
            if !g.is_zero() {
                let mut g = g;
                while (&g % &pb).is_zero() {
                    g /= &pb;
                    scale /= Rat::from_integer(pb.clone());
                }
            }
        }
        scale
    }

    fn new(
        k: &ResidueField,
        field: &NumberField,
        p: &Poly,
        scale: &Rat,
    ) -> Result<FqPoly, TamagawaError> {
        let mut terms = Vec::new();
        for (m, c) in &p.terms {
            let v = k.reduce_powers(&field.to_powers(&c.scale(scale)))?;
            if v != 0 {
                terms.push((m.clone(), v));
            }
        }
        Ok(FqPoly { terms })
    }

    fn eval(&self, k: &ResidueField, x: &[u64]) -> u64 {
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = k.mul(t, x[i]);
                }
            }
            acc = k.add(acc, t);
        }
        acc
    }
}

/// Rank over the residue field of a small matrix.
fn rank_fq(k: &ResidueField, mut m: Vec<Vec<u64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let neg = |x: u64| -> u64 {
        // additive inverse: p-1 times x
        k.mul_scalar(x, k.p - 1)
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = k.inv(m[r][c]);
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = k.mul(m[i][c], inv);
                for j in 0..cols {
                    let t = k.mul(factor, m[r][j]);
                    m[i][j] = k.add(m[i][j], neg(t));
                }
            }
        }
        r += 1;
    }
    r
}

/// One local density with the data that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalDensityReport {
    pub p: u64,
    /// Residue field cardinality.
    pub q: u64,
    /// Number of points over `O/p^depth`.
    pub count: u128,
    pub depth: u32,
    pub density: Rat,
    /// `L_v(1, Pic)`, filled in by the assembly.
    pub lambda: Option<Rat>,
    /// Product of `lambda^{-1} * density` over this and all smaller primes.
    pub running_product: Option<f64>,
}

fn blocks_of(sys: &PolynomialSystem) -> Result<Vec<usize>, TamagawaError> {
    match &sys.ambient {
        Ambient::Projective(b) => Ok(b.clone()),
        Ambient::Affine => Err(TamagawaError::Unsupported(
            "local densities need a projective system".into(),
        )),
    }
}

/// Dimension of a complete intersection in the ambient of `sys`.
pub fn expected_dimension(sys: &PolynomialSystem) -> Result<usize, TamagawaError> {
    let b = blocks_of(sys)?;
    let amb: usize = b.iter().map(|x| x - 1).sum();
    amb.checked_sub(sys.equations.len()).ok_or_else(|| {
        TamagawaError::Unsupported("more equations than the ambient dimension".into())
    })
}

/// Calls `visit` on the canonical representatives (first nonzero coordinate
/// of each block equal to 1) of the points of the product of projective
/// spaces over the residue field.
fn for_each_point(k: &ResidueField, blocks: &[usize], visit: &mut dyn FnMut(&[u64])) {
    let total: usize = blocks.iter().sum();
    let mut x = vec![0u64; total];
    fn rec(
        k: &ResidueField,
        blocks: &[usize],
        bi: usize,
        off: usize,
        x: &mut [u64],
        visit: &mut dyn FnMut(&[u64]),
    ) {
        if bi == blocks.len() {
            visit(x);
            return;
        }
        let n = blocks[bi];
        for lead in 0..n {
            for j in 0..n {
                x[off + j] = 0;
            }
            x[off + lead] = 1;
            let free = n - lead - 1;
            let count = k.q.pow(free as u32);
            for code in 0..count {
                let mut c = code;
                for j in 0..free {
                    x[off + lead + 1 + j] = c % k.q;
                    c /= k.q;
                }
                rec(k, blocks, bi + 1, off + n, x, visit);
            }
        }
    }
    rec(k, blocks, 0, 0, &mut x, visit);
}

/// Point count over the residue field and whether the reduction is smooth
/// (the Jacobian has full rank at every point).
pub fn count_residue_points(
    sys: &PolynomialSystem,
    k: &ResidueField,
) -> Result<(u128, bool), TamagawaError> {
    let blocks = blocks_of(sys)?;
    let nv = sys.vars.len();
    let scales: Vec<Rat> = sys
        .equations
        .iter()
        .map(|p| FqPoly::normalizer(k, &sys.field, p))
        .collect();
    let eqs: Vec<FqPoly> = sys
        .equations
        .iter()
        .zip(&scales)
        .map(|(p, s)| FqPoly::new(k, &sys.field, p, s))
        .collect::<Result<_, _>>()?;
    let jac: Vec<Vec<FqPoly>> = sys
        .equations
        .iter()
        .zip(&scales)
        .map(|(p, s)| {
            (0..nv)
                .map(|j| FqPoly::new(k, &sys.field, &p.derivative(j), s))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let total: u64 = blocks
        .iter()
        .map(|&b| (k.q.pow(b as u32) - 1) / (k.q - 1))
        .product();
    if total > 200_000_000 {
        return Err(TamagawaError::Unsupported(format!(
            "{total} residue points is beyond desk scale"
        )));
    }
    let mut count = 0u128;
    let mut smooth = true;
    for_each_point(k, &blocks, &mut |x| {
        if eqs.iter().all(|p| p.eval(k, x) == 0) {
            count += 1;
            if smooth && !eqs.is_empty() {
                let m: Vec<Vec<u64>> = jac
                    .iter()
                    .map(|row| row.iter().map(|d| d.eval(k, x)).collect())
                    .collect();
                if rank_fq(k, m) < eqs.len() {
                    smooth = false;
                }
            }
        }
    });
    Ok((count, smooth))
}

/// Points modulo `p^depth` of a system over `Q`, counted on canonical
/// representatives (first unit coordinate of each block equal to 1).
pub fn count_mod_prime_power(
    sys: &PolynomialSystem,
    p: u64,
    depth: u32,
) -> Result<u128, TamagawaError> {
    Ok(count_with_defect(sys, p, depth)?.0)
}

/// Determinant modulo `m` by cofactor expansion (the matrices are tiny).
fn det_mod(a: &[Vec<u128>], m: u128) -> u128 {
    match a.len() {
        0 => 1 % m,
        1 => a[0][0] % m,
        n => {
            let mut acc = 0u128;
            for j in 0..n {
                let minor: Vec<Vec<u128>> = a[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let t = a[0][j] % m * det_mod(&minor, m) % m;
                acc = if j % 2 == 0 {
                    (acc + t) % m
                } else {
                    (acc + m - t) % m
                };
            }
            acc
        }
    }
}

fn valuation_mod(v: u128, p: u128, depth: u32) -> u32 {
    let mut v = v;
    let mut e = 0;
    while e < depth && v.is_multiple_of(p) {
        v /= p;
        e += 1;
    }
    e
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if n < r {
        return Vec::new();
    }
    let mut out = combinations(n - 1, r);
    for mut c in combinations(n - 1, r - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// The count modulo `p^depth` together with the largest Hensel defect
/// `e(x)` over the solutions (zero when there are none).
fn count_with_defect(
    sys: &PolynomialSystem,
    p: u64,
    depth: u32,
) -> Result<(u128, u32), TamagawaError> {
    if !sys.field.is_rational() {
        return Err(TamagawaError::Unsupported(
            "lifting beyond the residue field is implemented over Q".into(),
        ));
    }
    let blocks = blocks_of(sys)?;
    let m = p
        .checked_pow(depth)
        .filter(|&m| m < (1 << 20))
        .ok_or_else(|| TamagawaError::Unsupported("modulus too large".into()))? as u128;
    let reduce = |poly: &Poly| -> Result<Vec<(Vec<u32>, u128)>, TamagawaError> {
        let den = poly
            .terms
            .values()
            .fold(BigInt::one(), |a, c| a.lcm(c.coords[0].denom()));
        if (&den % BigInt::from(p)).is_zero() {
            return Err(TamagawaError::Unsupported(format!(
                "coefficient denominators divisible by {p}"
            )));
        }
        let mb = BigInt::from(m);
        Ok(poly
            .terms
            .iter()
            .map(|(mono, c)| {
                let v = (&c.coords[0] * Rat::from_integer(den.clone()))
                    .to_integer()
                    .mod_floor(&mb);
                (mono.clone(), v.to_u128().expect("reduced"))
            })
            .collect())
    };
    let eqs: Vec<Vec<(Vec<u32>, u128)>> =
        sys.equations.iter().map(reduce).collect::<Result<_, _>>()?;
    let total: usize = blocks.iter().sum();
    let jac: Vec<Vec<Vec<(Vec<u32>, u128)>>> = sys
        .equations
        .iter()
        .map(|poly| {
            (0..total)
                .map(|j| reduce(&poly.derivative(j)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let minors = combinations(total, eqs.len());
    let work: f64 = blocks
        .iter()
        .map(|&b| (m as f64).powi(b as i32 - 1) * 1.5)
        .product();
    if work > 3.0e8 {
        return Err(TamagawaError::Unsupported(format!(
            "{work:.0} lifts modulo {p}^{depth} is beyond desk scale"
        )));
    }
    let eval = |poly: &[(Vec<u32>, u128)], x: &[u128]| -> u128 {
        let mut acc = 0u128;
        for (mono, c) in poly {
            let mut t = *c;
            for (i, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    t = t * x[i] % m;
                }
            }
            acc = (acc + t) % m;
        }
        acc
    };
    // Per block: choose the lead position j; earlier coordinates are
    // multiples of p, x_j = 1, later coordinates are arbitrary.
    let mut slots: Vec<Vec<(u128, u128)>> = Vec::new();
    for &n in &blocks {
        for lead in 0..n {
            // (step, number of values) per coordinate of the block
            slots.push(
                (0..n)
                    .map(|j| {
                        if j < lead {
                            (p as u128, m / p as u128)
                        } else if j == lead {
                            (0, 1)
                        } else {
                            (1, m)
                        }
                    })
                    .collect(),
            );
        }
    }
    fn rec(
        blocks: &[usize],
        slots: &[Vec<(u128, u128)>],
        bi: usize,
        sbase: usize,
        x: &mut Vec<u128>,
        leaf: &mut dyn FnMut(&[u128]),
    ) {
        if bi == blocks.len() {
            leaf(x);
            return;
        }
        let n = blocks[bi];
        for lead in 0..n {
            coords(blocks, slots, bi, sbase, &slots[sbase + lead], 0, x, leaf);
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn coords(
        blocks: &[usize],
        slots: &[Vec<(u128, u128)>],
        bi: usize,
        sbase: usize,
        shape: &[(u128, u128)],
        j: usize,
        x: &mut Vec<u128>,
        leaf: &mut dyn FnMut(&[u128]),
    ) {
        if j == shape.len() {
            rec(blocks, slots, bi + 1, sbase + blocks[bi], x, leaf);
            return;
        }
        let (step, count) = shape[j];
        for v in 0..count {
            x.push(if step == 0 { 1 } else { v * step });
            coords(blocks, slots, bi, sbase, shape, j + 1, x, leaf);
            x.pop();
        }
    }
    let mut x = Vec::with_capacity(total);
    let mut count = 0u128;
    let mut defect = 0u32;
    rec(&blocks, &slots, 0, 0, &mut x, &mut |x| {
        if eqs.iter().all(|e| eval(e, x) == 0) {
            count += 1;
            let values: Vec<Vec<u128>> = jac
                .iter()
                .map(|row| row.iter().map(|d| eval(d, x)).collect())
                .collect();
            let e = minors
                .iter()
                .map(|cols| {
                    let sub: Vec<Vec<u128>> = values
                        .iter()
                        .map(|r| cols.iter().map(|&c| r[c]).collect())
                        .collect();
                    valuation_mod(det_mod(&sub, m), p as u128, depth)
                })
                .min()
                .unwrap_or(depth);
            defect = defect.max(e);
        }
    });
    Ok((count, defect))
}

/// Local density of a projective system over `Q` at `p`.
pub fn local_density(
    sys: &PolynomialSystem,
    p: u64,
    max_depth: u32,
) -> Result<LocalDensityReport, TamagawaError> {
    let n = expected_dimension(sys)? as u32;
    let k = ResidueField::prime(p)?;
    let (c1, smooth) = count_residue_points(sys, &k)?;
    let dens = |c: u128, depth: u32| Rat::new(BigInt::from(c), BigInt::from(p).pow(depth * n));
    if smooth {
        return Ok(LocalDensityReport {
            p,
            q: p,
            count: c1,
            depth: 1,
            density: dens(c1, 1),
            lambda: None,
            running_product: None,
        });
    }
    for depth in 2..=max_depth {
        let (c, defect) = count_with_defect(sys, p, depth)?;
        if 2 * defect < depth {
            return Ok(LocalDensityReport {
                p,
                q: p,
                count: c,
                depth,
                density: dens(c, depth),
                lambda: None,
                running_product: None,
            });
        }
    }
    Err(TamagawaError::NonStabilized {
        p,
        depths: max_depth,
    })
}

/// Local density of a system over a number field at a prime ideal whose
/// reduction is smooth.
pub fn local_density_at(
    sys: &PolynomialSystem,
    pr: &PrimeIdeal,
) -> Result<LocalDensityReport, TamagawaError> {
    let n = expected_dimension(sys)? as u32;
    let k = ResidueField::of_prime(pr)?;
    let (c, smooth) = count_residue_points(sys, &k)?;
    if !smooth {
        return Err(TamagawaError::NonStabilized { p: pr.p, depths: 1 });
    }
    Ok(LocalDensityReport {
        p: pr.p,
        q: k.q,
        count: c,
        depth: 1,
        density: Rat::new(BigInt::from(c), BigInt::from(k.q).pow(n)),
        lambda: None,
        running_product: None,
    })
}

/// Reduction of a field element into a residue field (exposed for tests and
/// point-count identities).
pub fn reduce_element(
    k: &ResidueField,
    f: &NumberField,
    x: &FieldElement,
) -> Result<u64, TamagawaError> {
    k.reduce_powers(&f.to_powers(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};
    use crate::nfcore::factor_rational_prime;
    use crate::poly::var_names;

    fn hyper(f: &NumberField, eq: &str, n: usize) -> PolynomialSystem {
        let names = var_names("x", n);
        let p = Poly::parse_equation(f, eq, &names).unwrap();
        PolynomialSystem::new(
            f.clone(),
            names,
            vec![p],
            vec![],
            Ambient::Projective(vec![n]),
        )
        .unwrap()
    }

    #[test]
    fn residue_fields() {
        let k = ResidueField::new(3, &[1, 0, 1]).unwrap(); // F_9 = F_3[t]/(t^2+1)
        assert_eq!(k.q, 9);
        for a in 1..9 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
        let g = NumberField::gaussian();
        for p in [3u64, 5, 7, 13] {
            for pr in factor_rational_prime(&g, p).unwrap() {
                let k = ResidueField::of_prime(&pr).unwrap();
                // i^2 = -1 in every residue field
                let i = reduce_element(&k, &g, &g.theta()).unwrap();
                let m1 = reduce_element(&k, &g, &g.from_int(-1)).unwrap();
                assert_eq!(k.mul(i, i), m1);
                // the prime itself reduces to zero
                assert_eq!(reduce_element(&k, &g, &pr.pi).unwrap(), 0);
            }
        }
    }

    #[test]
    fn densities() {
        let q = NumberField::rationals();
        let p1 = PolynomialSystem::projective_space(&q, 1);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(
                local_density(&p1, p, 4).unwrap().density,
                rat_frac(p as i64 + 1, p as i64)
            );
        }
        let conic = hyper(&q, "x0^2 + x1^2 = x2^2", 3);
        assert_eq!(local_density(&conic, 5, 4).unwrap().density, rat_frac(6, 5));
        let quad = hyper(&q, "x0*x3 = x1^2 + x2^2", 4);
        let d3 = local_density(&quad, 3, 4).unwrap();
        // inert prime: p^2 + 1 points
        assert_eq!(d3.count, 10);
        let d2 = local_density(&quad, 2, 5).unwrap();
        assert_eq!(d2.density, rat_frac(3, 2));
        assert!(d2.depth >= 2);
        // brute-force count over P^3(F_3)
        let mut brute = 0;
        for code in 0..81u32 {
            let v: Vec<i64> = (0..4).map(|i| ((code / 3u32.pow(i)) % 3) as i64).collect();
            if v.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            if (v[0] * v[3] - v[1] * v[1] - v[2] * v[2]).rem_euclid(3) == 0 {
                brute += 1;
            }
        }
        assert_eq!(d3.count, brute);
        // Densities 1 at depths 2 and 3, then 0: the form has no primitive
        // 2-adic zeros, and the Hensel defect keeps the count going.
        let anisotropic = hyper(&q, "2*x0^2 + x1^2 + 2*x2^2 = 0", 3);
        let d = local_density(&anisotropic, 2, 5).unwrap();
        assert_eq!((d.count, d.density), (0, rat(0)));
    }

    #[test]
    fn depth_counts_are_consistent() {
        let q = NumberField::rationals();
        let quad = hyper(&q, "x0*x3 = x1^2 + x2^2", 4);
        let k = ResidueField::prime(5).unwrap();
        assert_eq!(
            count_mod_prime_power(&quad, 5, 1).unwrap(),
            count_residue_points(&quad, &k).unwrap().0
        );
        // smooth reduction: count mod p^2 is p^n times the count mod p
        assert_eq!(count_mod_prime_power(&quad, 5, 2).unwrap(), 25 * 36);
    }
}
