use super::{a_invariant, b_invariant, PicError, PicardLattice};
use crate::arith::Rat;
use crate::linalg::{int_kernel, smith_diagonal, solve_any_rat, IntMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

type Mat = Vec<Vec<i64>>;

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn to_big(m: &Mat) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// A Picard lattice with the action of a finite cyclic group, given by a
/// generator matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisLattice {
    pub base: PicardLattice,
    pub generator: Mat,
    pub order: u32,
}

impl GaloisLattice {
    pub fn new(base: PicardLattice, generator: Mat, order: u32) -> Result<Self, PicError> {
        let n = base.rank;
        if generator.len() != n || generator.iter().any(|r| r.len() != n) {
            return Err(PicError::IncompatibleAction(
                "generator matrix has the wrong size".into(),
            ));
        }
        if order == 0 {
            return Err(PicError::IncompatibleAction(
                "order must be positive".into(),
            ));
        }
        let mut p = identity(n);
        for _ in 0..order {
            p = mat_mul(&generator, &p);
        }
        if p != identity(n) {
            return Err(PicError::IncompatibleAction(
                "g^m is not the identity".into(),
            ));
        }
        for g in &base.eff_generators {
            if !base.eff_generators.contains(&mat_vec(&generator, g)) {
                return Err(PicError::IncompatibleAction(
                    "action does not preserve the effective generators".into(),
                ));
            }
        }
        if mat_vec(&generator, &base.canonical) != base.canonical {
            return Err(PicError::IncompatibleAction(
                "action does not fix the canonical class".into(),
            ));
        }
        Ok(GaloisLattice {
            base,
            generator,
            order,
        })
    }

    pub fn trivial(base: PicardLattice) -> Self {
        let n = base.rank;
        GaloisLattice {
            base,
            generator: identity(n),
            order: 1,
        }
    }

    /// The permutation module `Z^k` with `g e_i = e_{perm[i]}`; its cone is
    /// the positive orthant and its canonical class `-(1, ..., 1)`.
    pub fn permutation_module(perm: &[usize]) -> Result<Self, PicError> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &p in perm {
            if p >= k || seen[p] {
                return Err(PicError::IncompatibleAction("not a permutation".into()));
            }
            seen[p] = true;
        }
        let base = PicardLattice::new(
            (0..k)
                .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
                .collect(),
            vec![-1; k],
            Vec::new(),
        )?;
        let mut g = vec![vec![0i64; k]; k];
        for (i, &p) in perm.iter().enumerate() {
            g[p][i] = 1;
        }
        let order = permutation_order(perm);
        Self::new(base, g, order)
    }

    pub fn rank(&self) -> usize {
        self.base.rank
    }

    /// `g^k`.
    pub fn power(&self, k: u32) -> Mat {
        let mut p = identity(self.rank());
        for _ in 0..k % self.order {
            p = mat_mul(&self.generator, &p);
        }
        p
    }
}

fn permutation_order(perm: &[usize]) -> u32 {
    let mut seen = vec![false; perm.len()];
    let mut order: u64 = 1;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order as u32
}

/// Induced lattice for a degree-`d` extension. `coset_action` is the
/// permutation by which a generator of the larger group acts on the `d`
/// cosets; it must be a single `d`-cycle.
pub fn induce(
    gal: &GaloisLattice,
    d: usize,
    coset_action: &[usize],
) -> Result<GaloisLattice, PicError> {
    if d == 0 || coset_action.len() != d {
        return Err(PicError::IncompatibleAction(
            "coset action has the wrong size".into(),
        ));
    }
    let mut cycle = vec![0usize];
    let mut seen = vec![false; d];
    seen[0] = true;
    loop {
        let next = *coset_action
            .get(*cycle.last().expect("nonempty"))
            .ok_or_else(|| {
                PicError::IncompatibleAction("coset action is not a permutation".into())
            })?;
        if next >= d {
            return Err(PicError::IncompatibleAction(
                "coset action is not a permutation".into(),
            ));
        }
        if next == 0 {
            break;
        }
        if seen[next] {
            return Err(PicError::IncompatibleAction(
                "coset action is not a permutation".into(),
            ));
        }
        seen[next] = true;
        cycle.push(next);
    }
    if cycle.len() != d {
        return Err(PicError::IncompatibleAction(
            "coset action is not transitive".into(),
        ));
    }
    let rho = gal.rank();
    let n = d * rho;
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..d {
        let from = cycle[i];
        let (to, block) = if i + 1 < d {
            (cycle[i + 1], identity(rho))
        } else {
            (cycle[0], gal.generator.clone())
        };
        for r in 0..rho {
            for c in 0..rho {
                g[to * rho + r][from * rho + c] = block[r][c];
            }
        }
    }
    let mut gens = Vec::new();
    for b in 0..d {
        for e in &gal.base.eff_generators {
            let mut v = vec![0i64; n];
            v[b * rho..(b + 1) * rho].copy_from_slice(e);
            gens.push(v);
        }
    }
    let canonical: Vec<i64> = (0..d)
        .flat_map(|_| gal.base.canonical.iter().copied())
        .collect();
    let labels = if gal.base.labels.is_empty() {
        Vec::new()
    } else {
        (0..d)
            .flat_map(|b| gal.base.labels.iter().map(move |l| format!("{l}@{b}")))
            .collect()
    };
    let base = PicardLattice::new(gens, canonical, labels)?;
    GaloisLattice::new(base, g, gal.order * d as u32)
}

fn invariant_basis(gal: &GaloisLattice) -> IntMatrix {
    let n = gal.rank();
    let gm1: Mat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| gal.generator[i][j] - i64::from(i == j))
                .collect()
        })
        .collect();
    int_kernel(&to_big(&gm1), n)
}

/// Rank of the sublattice of invariants.
pub fn invariants_rank(gal: &GaloisLattice) -> usize {
    invariant_basis(gal).len()
}

/// Coordinates of the vectors `vs` in the lattice spanned by the rows of
/// `basis`; `None` if some vector is not an integral combination.
fn coords_in(basis: &IntMatrix, v: &[i64]) -> Option<Vec<i64>> {
    let k = basis.len();
    if k == 0 {
        return v.iter().all(|&x| x == 0).then(Vec::new);
    }
    let n = basis[0].len();
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|j| Rat::from_integer(basis[j][i].clone()))
                .collect()
        })
        .collect();
    let b: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(x.into())).collect();
    let y = solve_any_rat(&a, &b)?;
    // verify exactly
    for i in 0..n {
        let s: Rat = (0..k)
            .map(|j| &y[j] * Rat::from_integer(basis[j][i].clone()))
            .sum();
        if s != b[i] {
            return None;
        }
    }
    y.iter()
        .map(|c| {
            if c.is_integer() {
                c.to_integer().to_i64()
            } else {
                None
            }
        })
        .collect()
}

/// `#H^1(<g>, M) = #(ker N / im(g - 1))` for a matrix `g` of order `m`.
pub fn h1_of_action(g: &Mat, m: u32) -> Result<u64, PicError> {
    let n = g.len();
    let mut norm = vec![vec![0i64; n]; n];
    let mut p = identity(n);
    for _ in 0..m {
        for i in 0..n {
            for j in 0..n {
                norm[i][j] += p[i][j];
            }
        }
        p = mat_mul(g, &p);
    }
    if p != identity(n) {
        return Err(PicError::IncompatibleAction(
            "g^m is not the identity".into(),
        ));
    }
    let ker = int_kernel(&to_big(&norm), n);
    if ker.is_empty() {
        return Ok(1);
    }
    let mut rows: IntMatrix = Vec::new();
    for j in 0..n {
        let col: Vec<i64> = (0..n).map(|i| g[i][j] - i64::from(i == j)).collect();
        let y = coords_in(&ker, &col)
            .ok_or_else(|| PicError::IncompatibleAction("image of g-1 outside ker N".into()))?;
        rows.push(y.into_iter().map(BigInt::from).collect());
    }
    let diag = smith_diagonal(&rows);
    if diag.len() < ker.len() {
        return Err(PicError::IncompatibleAction("H^1 is infinite".into()));
    }
    let order: BigInt = diag.iter().map(|x| x.abs()).product();
    order
        .to_u64()
        .ok_or_else(|| PicError::IncompatibleAction("H^1 too large".into()))
}

/// `beta = #H^1(G, Pic)` for a cyclic action.
pub fn h1_cyclic(gal: &GaloisLattice) -> Result<u64, PicError> {
    h1_of_action(&gal.generator, gal.order)
}

/// The invariant sublattice with its effective cone (spanned by orbit sums)
/// and canonical class, in coordinates of a Z-basis of the invariants.
#[derive(Clone, Debug)]
pub struct RationalPicard {
    pub lattice: PicardLattice,
    pub basis: Vec<Vec<i64>>,
}

impl RationalPicard {
    /// Coordinates of an invariant class.
    pub fn coords(&self, v: &[i64]) -> Option<Vec<i64>> {
        coords_in(&to_big(&self.basis), v)
    }
}

pub fn rational_picard(gal: &GaloisLattice) -> Result<RationalPicard, PicError> {
    let kb = invariant_basis(gal);
    if kb.is_empty() {
        return Err(PicError::InvalidLattice("no invariant classes".into()));
    }
    let basis: Vec<Vec<i64>> = kb
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small")).collect())
        .collect();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for e in &gal.base.eff_generators {
        let mut s = vec![0i64; gal.rank()];
        for k in 0..gal.order {
            for (a, b) in s.iter_mut().zip(mat_vec(&gal.power(k), e)) {
                *a += b;
            }
        }
        let c = coords_in(&kb, &s)
            .ok_or_else(|| PicError::InvalidLattice("orbit sum not invariant".into()))?;
        if !gens.contains(&c) {
            gens.push(c);
        }
    }
    let canonical = coords_in(&kb, &gal.base.canonical)
        .ok_or_else(|| PicError::IncompatibleAction("canonical class is not invariant".into()))?;
    Ok(RationalPicard {
        lattice: PicardLattice::new(gens, canonical, Vec::new())?,
        basis,
    })
}

/// `a` and `b` of `L` over `F` against those of `Res L` on the induced lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub a_f: Rat,
    pub b_f: usize,
    pub a_e: Rat,
    pub b_e: usize,
    pub rank_f: usize,
    pub rank_e: usize,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.a_f == self.a_e && self.b_f == self.b_e && self.rank_f == self.rank_e
    }
}

pub fn res_preservation_check(
    gal: &GaloisLattice,
    d: usize,
    l: &[i64],
) -> Result<PreservationReport, PicError> {
    let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
    let induced = induce(gal, d, &cycle)?;
    let left = rational_picard(gal)?;
    let lf = left
        .coords(l)
        .ok_or_else(|| PicError::IncompatibleAction("L is not invariant".into()))?;
    let right = rational_picard(&induced)?;
    let res_l: Vec<i64> = (0..d).flat_map(|_| l.iter().copied()).collect();
    let le = right
        .coords(&res_l)
        .ok_or_else(|| PicError::IncompatibleAction("Res L is not invariant".into()))?;
    Ok(PreservationReport {
        a_f: a_invariant(&left.lattice, &lf)?,
        b_f: b_invariant(&left.lattice, &lf)?,
        a_e: a_invariant(&right.lattice, &le)?,
        b_e: b_invariant(&right.lattice, &le)?,
        rank_f: left.lattice.rank,
        rank_e: right.lattice.rank,
    })
}
