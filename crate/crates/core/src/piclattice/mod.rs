//! Picard lattices with effective cones, finite cyclic Galois actions, and
//! the invariants that enter Manin's conjecture: `a(L)`, `b(L)`, `alpha`,
//! `beta = #H^1`, induced lattices for restrictions of scalars, and ranks of
//! invariant sublattices.
//!
//! Vectors are integer coordinates in a fixed basis of `NS X`. Cones are
//! always finitely generated and are inputs, never computed from geometry.

mod cone;
mod galois;

pub use cone::{
    a_invariant, a_invariant_oracle, alpha_invariant, alpha_monte_carlo, b_invariant,
    b_invariant_oracle, facets, in_cone, interior_point, triangulate_dual,
};
pub use galois::{
    h1_cyclic, h1_of_action, induce, invariants_rank, rational_picard, res_preservation_check,
    GaloisLattice, PreservationReport, RationalPicard,
};

use crate::arith::Rat;
use crate::lp::feasible;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicError {
    #[error("L is not big: no r makes rL + K effective")]
    NotBig,
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("the adjoint class is not on the boundary of the effective cone")]
    NotOnBoundary,
    #[error("incompatible action: {0}")]
    IncompatibleAction(String),
    #[error("the group is not cyclic")]
    NonCyclic,
    #[error("the anticanonical class is not in the interior of the effective cone; the integral diverges")]
    DivergentIntegral,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
}

/// `NS X` with its effective cone and canonical class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardLattice {
    pub rank: usize,
    pub eff_generators: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub labels: Vec<String>,
}

pub(crate) fn to_rat(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

impl PicardLattice {
    pub fn new(
        eff_generators: Vec<Vec<i64>>,
        canonical: Vec<i64>,
        labels: Vec<String>,
    ) -> Result<Self, PicError> {
        let rank = canonical.len();
        if rank == 0 {
            return Err(PicError::InvalidLattice("rank zero".into()));
        }
        if eff_generators.is_empty() {
            return Err(PicError::InvalidLattice("no effective generators".into()));
        }
        if eff_generators.iter().any(|g| g.len() != rank) {
            return Err(PicError::InvalidLattice(
                "generator length differs from the rank".into(),
            ));
        }
        if eff_generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(PicError::InvalidLattice("zero generator".into()));
        }
        if !labels.is_empty() && labels.len() != rank {
            return Err(PicError::InvalidLattice("wrong number of labels".into()));
        }
        let lat = PicardLattice {
            rank,
            eff_generators,
            canonical,
            labels,
        };
        if !lat.is_pointed() {
            return Err(PicError::DegenerateCone(
                "the effective cone contains a line".into(),
            ));
        }
        Ok(lat)
    }

    /// No nontrivial nonnegative combination of generators vanishes.
    pub fn is_pointed(&self) -> bool {
        let k = self.eff_generators.len();
        let mut a: Vec<Vec<Rat>> = (0..self.rank)
            .map(|i| {
                self.eff_generators
                    .iter()
                    .map(|g| Rat::from_integer(g[i].into()))
                    .collect()
            })
            .collect();
        a.push(vec![Rat::one(); k]);
        let mut b = vec![Rat::zero(); self.rank];
        b.push(Rat::one());
        !feasible(&a, &b)
    }

    /// Generator matrix with generators as columns.
    pub(crate) fn gen_columns(&self) -> Vec<Vec<Rat>> {
        (0..self.rank)
            .map(|i| {
                self.eff_generators
                    .iter()
                    .map(|g| Rat::from_integer(g[i].into()))
                    .collect()
            })
            .collect()
    }

    pub fn anticanonical(&self) -> Vec<i64> {
        self.canonical.iter().map(|x| -x).collect()
    }

    pub fn projective_space(n: usize) -> Self {
        Self::new(vec![vec![1]], vec![-(n as i64 + 1)], vec!["H".into()]).expect("valid preset")
    }

    pub fn multiprojective(dims: &[usize]) -> Self {
        let r = dims.len();
        let gens = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        let canonical = dims.iter().map(|&n| -(n as i64 + 1)).collect();
        let labels = (0..r).map(|i| format!("H{}", i + 1)).collect();
        Self::new(gens, canonical, labels).expect("valid preset")
    }

    /// Split quadric surface `P^1 x P^1` with its two rulings.
    pub fn quadric_surface() -> Self {
        let mut l = Self::multiprojective(&[1, 1]);
        l.labels = vec!["L1".into(), "L2".into()];
        l
    }

    /// The split del Pezzo surface of degree 6 in the basis `(H, E1, E2, E3)`.
    pub fn dp6() -> Self {
        Self::new(
            vec![
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, -1, -1, 0],
                vec![1, -1, 0, -1],
                vec![1, 0, -1, -1],
            ],
            vec![-3, 1, 1, 1],
            vec!["H".into(), "E1".into(), "E2".into(), "E3".into()],
        )
        .expect("valid preset")
    }

    /// Smooth complete intersection of `m` hypersurfaces of degree `r` in `P^n`.
    pub fn complete_intersection(n: usize, m: usize, r: usize) -> Self {
        Self::new(
            vec![vec![1]],
            vec![(m * r) as i64 - (n as i64 + 1)],
            vec!["H".into()],
        )
        .expect("valid preset")
    }

    /// The bidegree `(1,3)` hypersurface in `P^3 x P^3`.
    pub fn bt() -> Self {
        Self::new(
            vec![vec![1, 0], vec![0, 1]],
            vec![-3, -1],
            vec!["H1".into(), "H2".into()],
        )
        .expect("valid preset")
    }

    pub fn preset(name: &str) -> Option<Self> {
        let parse_n = |s: &str| s.parse::<usize>().ok();
        match name {
            "dp6" => Some(Self::dp6()),
            "quadric" | "quadric-surface" => Some(Self::quadric_surface()),
            "bt" => Some(Self::bt()),
            "p1xp1" => Some(Self::multiprojective(&[1, 1])),
            _ => {
                if let Some(n) = name.strip_prefix('P').and_then(parse_n) {
                    Some(Self::projective_space(n))
                } else if let Some(rest) = name.strip_prefix("ci:") {
                    let v: Vec<usize> = rest.split(',').filter_map(parse_n).collect();
                    (v.len() == 3).then(|| Self::complete_intersection(v[0], v[1], v[2]))
                } else {
                    None
                }
            }
        }
    }
}
