//! Counting `P^n` points without listing them.
//!
//! The content sweep adds one coordinate at a time and keeps, for each
//! content ideal `I` of the coordinates so far, how many partial tuples have
//! max size exactly `m`. Adding a coordinate `z` of size `s` moves that
//! weight to `(I + (z), max(m, s))`, and the move only depends on `I`, the
//! ideal `I + (z)` and `s`, so all `z` with the same pair are handled at
//! once. At the end only the unit ideal survives.
//!
//! The Moebius route sums `mu(a) * #{nonzero tuples in a^{n+1}}` over ideals
//! grouped by norm; since `h = 1`, every `a = (alpha)` and the tuples are
//! `alpha * O^{n+1}` with sizes scaled by `N(a)`.

use super::ring::{IdealLattice, IntRing};
use super::{check_ladder, EnumError};
use crate::arith::{primes_up_to, rat_floor, Rat};
use crate::nfcore::{splitting_type, NumberField};
use num_traits::{Signed, ToPrimitive};
use std::collections::BTreeMap;

type States = BTreeMap<IdealLattice, Vec<u128>>;

fn step(
    ring: &IntRing,
    states: &States,
    elements: &[[i64; 2]],
    hmax: usize,
    only_unit: bool,
) -> States {
    let mut next: States = BTreeMap::new();
    for (lat, w) in states {
        // c[l2][s]: number of z with I + (z) = l2 and size s
        let mut c: BTreeMap<IdealLattice, Vec<u128>> = BTreeMap::new();
        for z in elements {
            let mut l2 = *lat;
            ring.ideal_add(&mut l2, z);
            if only_unit && !l2.is_unit() {
                continue;
            }
            c.entry(l2).or_insert_with(|| vec![0; hmax + 1])[ring.size(z) as usize] += 1;
        }
        for (l2, cs) in c {
            let out = next.entry(l2).or_insert_with(|| vec![0; hmax + 1]);
            // out[t] += w[t] * C(<= t) + W(< t) * c[t]
            let (mut wc, mut cc) = (0u128, 0u128);
            for t in 0..=hmax {
                cc += cs[t];
                out[t] += w[t] * cc + wc * cs[t];
                wc += w[t];
            }
        }
    }
    next
}

/// Number of points of `P^n(F)` with `O(1)`, max norms and height exactly
/// `t`, for `t = 0..=hmax` (entry 0 is always zero).
pub fn content_sweep_histogram(
    f: &NumberField,
    n: usize,
    hmax: u64,
) -> Result<Vec<u128>, EnumError> {
    let ring = IntRing::new(f)?;
    let h = hmax as usize;
    let elements = ring.elements_up_to(hmax);
    let mut states: States = BTreeMap::new();
    states.insert(IdealLattice::zero(), {
        let mut v = vec![0; h + 1];
        v[0] = 1;
        v
    });
    for i in 0..=n {
        states = step(&ring, &states, &elements, h, i == n);
    }
    let unit = states
        .remove(&IdealLattice { a: 1, b: 0, c: 1 })
        .unwrap_or_else(|| vec![0; h + 1]);
    let w = ring.w as u128;
    unit.into_iter()
        .map(|x| {
            if x % w == 0 {
                Ok(x / w)
            } else {
                Err(EnumError::MismatchFound(format!(
                    "{x} primitive tuples is not a multiple of w = {w}"
                )))
            }
        })
        .collect()
}

/// `sum_{N(a) = k} mu(a)` for `k = 0..=kmax`, from the splitting of primes.
fn moebius_norm_sums(f: &NumberField, kmax: usize) -> Result<Vec<i64>, EnumError> {
    let mut m = vec![0i64; kmax + 1];
    if kmax == 0 {
        return Ok(m);
    }
    let mut spf = vec![0u32; kmax + 1];
    let primes = primes_up_to(kmax as u64);
    for &p in primes.iter().rev() {
        let p = p as usize;
        let mut j = p;
        while j <= kmax {
            spf[j] = p as u32;
            j += p;
        }
    }
    // local[p][e] = coefficient of x^e in prod_{P | p} (1 - x^{f_P})
    let mut local: Vec<Vec<i64>> = vec![Vec::new(); kmax + 1];
    for &p in &primes {
        let mut poly = vec![1i64];
        for (_, fdeg) in splitting_type(f, p)? {
            let fdeg = fdeg as usize;
            let mut next = vec![0i64; poly.len() + fdeg];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + fdeg] -= c;
            }
            poly = next;
        }
        local[p as usize] = poly;
    }
    m[1] = 1;
    for k in 2..=kmax {
        let p = spf[k] as usize;
        let (mut r, mut e) = (k, 0);
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        m[k] = m[r] * local[p].get(e).copied().unwrap_or(0);
    }
    Ok(m)
}

/// Moebius-inverted counts of `P^n(F)` points with `O(1)` and max norms,
/// one per rung.
pub fn moebius_series(f: &NumberField, n: usize, ladder: &[Rat]) -> Result<Vec<u128>, EnumError> {
    check_ladder(ladder)?;
    let ring = IntRing::new(f)?;
    let floors: Vec<usize> = ladder
        .iter()
        .map(|b| {
            let fl = rat_floor(b);
            if fl.is_negative() {
                Ok(0)
            } else {
                fl.to_usize()
                    .ok_or_else(|| EnumError::InvalidTask("bound too large".into()))
            }
        })
        .collect::<Result<_, _>>()?;
    let bmax = *floors.iter().max().unwrap_or(&0);
    // g[t] = #{z in O : size(z) <= t}
    let g: Vec<u128> = if ring.deg == 1 {
        (0..=bmax).map(|t| 2 * t as u128 + 1).collect()
    } else {
        let mut hist = vec![0u128; bmax + 1];
        for z in ring.elements_up_to(bmax as u64) {
            hist[ring.size(&z) as usize] += 1;
        }
        let mut acc = 0;
        hist.into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect()
    };
    let mu = moebius_norm_sums(f, bmax)?;
    let w = ring.w as i128;
    floors
        .iter()
        .map(|&b| {
            let mut s: i128 = 0;
            for (k, &mk) in mu.iter().enumerate().take(b + 1).skip(1) {
                if mk != 0 {
                    let gk = g[b / k] as i128;
                    s += mk as i128 * (gk.pow(n as u32 + 1) - 1);
                }
            }
            if s < 0 || s % w != 0 {
                return Err(EnumError::MismatchFound(format!(
                    "Moebius sum {s} is not a nonnegative multiple of {w}"
                )));
            }
            Ok((s / w) as u128)
        })
        .collect()
}

pub fn moebius_inverted_count(f: &NumberField, n: usize, bound: &Rat) -> Result<u128, EnumError> {
    Ok(moebius_series(f, n, std::slice::from_ref(bound))?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::enumerate::{count_points, EnumerationTask};

    #[test]
    fn routes_agree_small() {
        for f in [
            NumberField::rationals(),
            NumberField::gaussian(),
            NumberField::eisenstein(),
        ] {
            for n in 1..=2 {
                let hist = content_sweep_histogram(&f, n, 30).unwrap();
                let ladder: Vec<Rat> = (1..=30).map(rat).collect();
                let mob = moebius_series(&f, n, &ladder).unwrap();
                let mut acc = 0;
                for b in 1..=30usize {
                    acc += hist[b];
                    assert_eq!(acc, mob[b - 1], "{} n={n} B={b}", f.name());
                    if b % 10 == 0 {
                        let direct =
                            count_points(&EnumerationTask::projective(&f, n, rat(b as i64)))
                                .unwrap();
                        assert_eq!(direct as u128, acc);
                    }
                }
            }
        }
        assert_eq!(
            moebius_inverted_count(&NumberField::rationals(), 1, &rat(0)).unwrap(),
            0
        );
    }

    #[test]
    fn totient_identity() {
        // N(P^1(Q), B) = 4 * sum_{m <= B} phi(m)
        let ladder: Vec<Rat> = (1..=200).map(rat).collect();
        let mob = moebius_series(&NumberField::rationals(), 1, &ladder).unwrap();
        let mut acc = 0u128;
        for m in 1..=200u64 {
            let phi = (1..=m).filter(|&k| num_integer::gcd(k, m) == 1).count() as u128;
            acc += phi;
            assert_eq!(mob[m as usize - 1], 4 * acc);
        }
    }
}
