//! Local Artin factors `L_v(s, Pic) = det(1 - N(v)^{-s} Frob_v | Pic^{I_v})^{-1}`.
//!
//! For a lattice induced from a split lattice over a cyclic extension
//! `F/E` of degree `d`, the group acting is generated by `g` of order `d`.
//! A prime `p` of `E` with `r` primes above it, each of residue degree `f`,
//! has decomposition group `<g^r>`, inertia `<g^{r f}>`, and Frobenius the
//! class of `g^r`.

use super::TamagawaError;
use crate::arith::Rat;
use crate::linalg::{det_rat, int_kernel, solve_any_rat};
use crate::nfcore::{splitting_type, NumberField};
use crate::piclattice::GaloisLattice;
use num_bigint::BigInt;
use num_traits::{One, Zero};

type Mat = Vec<Vec<i64>>;

fn rat_mat(m: &Mat) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect()
}

/// `1 / det(1 - q^{-s} frob)` for an integer matrix of finite order.
pub fn l_factor_at(frob: &Mat, q: u64, s: u32) -> Result<Rat, TamagawaError> {
    let n = frob.len();
    if q < 2 {
        return Err(TamagawaError::SingularFactor(format!(
            "residue cardinality {q}"
        )));
    }
    let t = Rat::new(BigInt::one(), BigInt::from(q).pow(s));
    let m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j { Rat::one() } else { Rat::zero() };
                    id - &t * Rat::from_integer(frob[i][j].into())
                })
                .collect()
        })
        .collect();
    let d = det_rat(&m);
    if d.is_zero() {
        return Err(TamagawaError::SingularFactor(
            "det(1 - q^{-s} Frob) vanishes".into(),
        ));
    }
    Ok(d.recip())
}

/// `lambda_v = L_v(1, Pic)` for the lattice `gal` with the given Frobenius
/// (already restricted to inertia invariants when `p` ramifies).
pub fn l_factor(gal: &GaloisLattice, frob: &Mat, q: u64) -> Result<Rat, TamagawaError> {
    if frob.len() != gal.rank() {
        return Err(TamagawaError::SingularFactor(
            "Frobenius has the wrong size".into(),
        ));
    }
    l_factor_at(frob, q, 1)
}

/// The action of `frob` on the sublattice fixed by `inertia`.
pub fn restrict_to_invariants(frob: &Mat, inertia: &Mat) -> Result<Mat, TamagawaError> {
    let n = frob.len();
    let im1: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(inertia[i][j] - i64::from(i == j)))
                .collect()
        })
        .collect();
    let basis = int_kernel(&im1, n);
    let k = basis.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    // Columns of `a` are the basis vectors.
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|j| Rat::from_integer(basis[j][i].clone()))
                .collect()
        })
        .collect();
    let fr = rat_mat(frob);
    let mut out = vec![vec![0i64; k]; k];
    for (j, b) in basis.iter().enumerate() {
        let image: Vec<Rat> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|l| &fr[i][l] * Rat::from_integer(b[l].clone()))
                    .sum()
            })
            .collect();
        let c = solve_any_rat(&a, &image).ok_or_else(|| {
            TamagawaError::SingularFactor("Frobenius does not preserve the invariants".into())
        })?;
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_integer() {
                return Err(TamagawaError::SingularFactor(
                    "non-integral restricted Frobenius".into(),
                ));
            }
            out[i][j] = i64::try_from(ci.to_integer())
                .map_err(|_| TamagawaError::SingularFactor("entry too large".into()))?;
        }
    }
    Ok(out)
}

fn mat_pow(g: &Mat, k: u32) -> Mat {
    let n = g.len();
    let mut p: Mat = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..k {
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| g[i][l] * p[l][j]).sum())
                    .collect()
            })
            .collect();
    }
    p
}

/// Frobenius at a prime of the base with the given splitting type, for a
/// lattice whose group is `Gal(F/E)` of order `d` acting through `gal`.
/// The result acts on the inertia invariants.
pub fn frobenius_from_splitting(
    gal: &GaloisLattice,
    splitting: &[(u32, u32)],
) -> Result<Mat, TamagawaError> {
    let d: u32 = splitting.iter().map(|&(e, f)| e * f).sum();
    let r = splitting.len() as u32;
    let (e, f) = splitting[0];
    if splitting.iter().any(|&s| s != (e, f)) || gal.order != d {
        return Err(TamagawaError::Unsupported(
            "Frobenius from splitting data needs a Galois extension whose group order matches the action".into(),
        ));
    }
    let frob = mat_pow(&gal.generator, r);
    let inertia = mat_pow(&gal.generator, r * f);
    if e == 1 {
        Ok(frob)
    } else {
        restrict_to_invariants(&frob, &inertia)
    }
}

/// Exact comparison of `L_p(s, Ind Pic)` over `E` with the product of the
/// `L_w(s, Pic)` over the primes `w | p` of `F`, for a split lattice of rank
/// `rank` over `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct InductionReport {
    pub p: u64,
    pub splitting: Vec<(u32, u32)>,
    /// `(s, E-side factor, product of F-side factors)`.
    pub values: Vec<(u32, Rat, Rat)>,
}

impl InductionReport {
    pub fn passed(&self) -> bool {
        self.values.iter().all(|(_, a, b)| a == b)
    }
}

pub fn l_factor_induction_check(
    f: &NumberField,
    induced: &GaloisLattice,
    rank: usize,
    p: u64,
) -> Result<InductionReport, TamagawaError> {
    let splitting = splitting_type(f, p)?;
    let frob = frobenius_from_splitting(induced, &splitting)?;
    let mut values = Vec::new();
    for s in [1u32, 2] {
        let e_side = l_factor_at(&frob, p, s)?;
        let mut f_side = Rat::one();
        for &(_, fdeg) in &splitting {
            let ident: Mat = (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect();
            f_side *= l_factor_at(&ident, p.pow(fdeg), s)?;
        }
        values.push((s, e_side, f_side));
    }
    Ok(InductionReport {
        p,
        splitting,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_up_to, rat_frac};
    use crate::piclattice::{induce, PicardLattice};

    #[test]
    fn closed_forms() {
        let triv = GaloisLattice::trivial(PicardLattice::projective_space(1));
        for p in [2u64, 3, 5, 7] {
            assert_eq!(
                l_factor(&triv, &vec![vec![1]], p).unwrap(),
                rat_frac(p as i64, p as i64 - 1)
            );
        }
        let swap = vec![vec![0, 1], vec![1, 0]];
        // (1 - 1/9)^{-1}
        assert_eq!(l_factor_at(&swap, 3, 1).unwrap(), rat_frac(9, 8));
        assert_eq!(
            l_factor_at(&vec![vec![1, 0], vec![0, 1]], 5, 1).unwrap(),
            rat_frac(25, 16)
        );
        assert!(l_factor_at(&swap, 1, 1).is_err());
    }

    #[test]
    fn induction_quadratic() {
        let base = GaloisLattice::trivial(PicardLattice::projective_space(1));
        let ind = induce(&base, 2, &[1, 0]).unwrap();
        for f in [NumberField::gaussian(), NumberField::eisenstein()] {
            for p in primes_up_to(300) {
                let r = l_factor_induction_check(&f, &ind, 1, p).unwrap();
                assert!(r.passed(), "{} p={p}: {:?}", f.name(), r.values);
            }
        }
        // ramified prime: Frobenius acts trivially on the rank-one invariants
        let fr = frobenius_from_splitting(&ind, &[(2, 1)]).unwrap();
        assert_eq!(fr, vec![vec![1]]);
    }
}
