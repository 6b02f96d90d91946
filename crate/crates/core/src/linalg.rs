//! Exact linear algebra over the rationals and the integers.
//!
//! Matrices are plain `Vec<Vec<_>>` in row-major order. Integer routines work
//! with row operations only, so the Hermite form of a generator matrix is a
//! basis of the lattice spanned by its rows.

use crate::arith::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type RatMatrix = Vec<Vec<Rat>>;
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_to_rat_matrix(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity_int(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn int_mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn int_mat_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form over the rationals. Returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rat(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn det_rat(m: &RatMatrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Solves `a x = b` for square invertible `a`; `None` if singular.
pub fn solve_rat(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.iter().map(|r| r[n].clone()).collect())
}

/// Solves `a x = b` for a possibly rectangular system; returns one solution
/// (free variables zero) or `None` when inconsistent.
pub fn solve_any_rat(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

pub fn inverse_rat(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel `{x : a x = 0}` over the rationals.
pub fn kernel_rat(a: &RatMatrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut m = a.clone();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Integer row echelon form. Row operations are unimodular; only the first
/// `pivot_cols` columns are used for pivoting, the remaining columns are
/// carried along (useful for tracking transforms). Returns the rank.
pub fn int_echelon(m: &mut IntMatrix, pivot_cols: usize) -> usize {
    let rows = m.len();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
            let Some(piv) = piv else { break };
            m.swap(r, piv);
            let mut clean = true;
            for i in r + 1..rows {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                        *x -= &q * y;
                    }
                    if !m[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if r < rows && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = m[r].clone();
            for i in 0..r {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&pivot_row[c]);
                    for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Hermite normal form (rows, upper triangular, positive pivots, reduced
/// entries above pivots); zero rows removed.
pub fn hnf(rows: &IntMatrix) -> IntMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut m = rows.clone();
    let r = int_echelon(&mut m, cols);
    m.truncate(r);
    m
}

/// Z-basis of the saturated integer kernel `{x in Z^n : a x = 0}` where `a`
/// has `n` columns.
pub fn int_kernel(a: &IntMatrix, n: usize) -> IntMatrix {
    let k = a.len();
    let at = transpose(a);
    let mut m: IntMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = if k == 0 { Vec::new() } else { at[i].clone() };
            for j in 0..n {
                row.push(if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                });
            }
            row
        })
        .collect();
    let r = int_echelon(&mut m, k);
    let mut ker: IntMatrix = m[r..].iter().map(|row| row[k..].to_vec()).collect();
    // A tidy basis: Hermite form of the kernel lattice.
    if !ker.is_empty() {
        ker = hnf(&ker);
    }
    ker
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero entries
/// only, each dividing the next).
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Find the smallest nonzero entry in the lower-right block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() {
                    match best {
                        Some((bi, bj)) if m[bi][bj].abs() <= m[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    let pr = m[t].clone();
                    for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                        *x -= &q * y;
                    }
                    if !m[i][t].is_zero() {
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    for row in m.iter_mut() {
                        let y = row[t].clone();
                        row[j] -= &q * y;
                    }
                    if !m[t][j].is_zero() {
                        changed = true;
                    }
                }
            }
            if !changed {
                // Divisibility condition for the rest of the block.
                let pivot = m[t][t].clone();
                let mut bad = None;
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&m[i][j] % &pivot).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        let ri = m[i].clone();
                        for (x, y) in m[t].iter_mut().zip(ri.iter()) {
                            *x += y;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn hermite_form_of_small_lattice() {
        let m = int_matrix(&[vec![2, 4], vec![3, 1], vec![5, 5]]);
        let h = hnf(&m);
        assert_eq!(h.len(), 2);
        // determinant of the lattice spanned by (2,4),(3,1) is 10
        let d = &h[0][0] * &h[1][1];
        assert_eq!(d, BigInt::from(10));
    }

    #[test]
    fn smith_of_known_matrix() {
        let m = int_matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d = smith_diagonal(&m);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        let a = int_matrix(&[vec![2, 4, 6]]);
        let k = int_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot_int(&a[0], v).is_zero());
        }
        // covolume of the kernel lattice in its span: primitive, so the
        // vector (-2, 1, 0) must be an integer combination.
        let target = vec![BigInt::from(-2), BigInt::from(1), BigInt::from(0)];
        let mut aug = k.clone();
        aug.push(target);
        assert_eq!(hnf(&aug), hnf(&k));
    }

    #[test]
    fn rational_solve_and_det() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        assert_eq!(det_rat(&a), rat(5));
        let x = solve_rat(&a, &[rat(3), rat(4)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        let inv = inverse_rat(&a).unwrap();
        assert_eq!(inv[0][0], Rat::new(3.into(), 5.into()));
    }
}
