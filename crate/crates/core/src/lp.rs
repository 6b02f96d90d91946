//! Exact two-phase simplex over the rationals with Bland's anti-cycling rule.
//!
//! Problems are in standard form: minimize `c.x` subject to `A x = b`,
//! `x >= 0`. Sizes in this crate are tiny (a handful of rows), so a dense
//! tableau is fine.

use crate::arith::Rat;
use crate::linalg::RatMatrix;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.width]
    }

    /// Runs the simplex method for the cost vector over the allowed columns.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.width {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut red = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        red -= &cost[b] * &self.rows[i][j];
                    }
                }
                if red.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if a.is_positive() {
                    let ratio = self.rhs(i) / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j);
        }
    }
}

/// Minimizes `c.x` subject to `a x = b`, `x >= 0`.
pub fn minimize(c: &[Rat], a: &RatMatrix, b: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // Phase one with one artificial variable per row.
    let width = n + m;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: Vec<Rat> = a[i]
            .iter()
            .map(|x| if neg { -x.clone() } else { x.clone() })
            .collect();
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };
    let mut cost1 = vec![Rat::zero(); width];
    for c1 in cost1.iter_mut().skip(n) {
        *c1 = Rat::one();
    }
    let all = vec![true; width];
    t.optimize(&cost1, &all);
    let infeas: Rat = (0..m)
        .filter(|&i| t.basis[i] >= n)
        .map(|i| t.rhs(i).clone())
        .sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    let mut cost2 = vec![Rat::zero(); width];
    cost2[..n].clone_from_slice(c);
    let mut allowed = vec![false; width];
    for a in allowed.iter_mut().take(n) {
        *a = true;
    }
    if !t.optimize(&cost2, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.rhs(i).clone();
        }
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { value, x }
}

/// Maximizes `c.x` subject to `a x = b`, `x >= 0`.
pub fn maximize(c: &[Rat], a: &RatMatrix, b: &[Rat]) -> LpOutcome {
    let neg: Vec<Rat> = c.iter().map(|x| -x.clone()).collect();
    match minimize(&neg, a, b) {
        LpOutcome::Optimal { value, x } => LpOutcome::Optimal { value: -value, x },
        other => other,
    }
}

/// Whether `a x = b` has a solution with `x >= 0`.
pub fn feasible(a: &RatMatrix, b: &[Rat]) -> bool {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    matches!(
        minimize(&vec![Rat::zero(); n], a, b),
        LpOutcome::Optimal { .. }
    )
}
