//! Heights attached to metrized line bundles on (multi)projective space.
//!
//! Heights are relative: `H(x) = prod_v ||x||_v` over all places of the
//! ground field, without the `1/[F:Q]` exponent. Finite places always carry
//! the max norm, so their contribution is `1/N(c)` for the content ideal
//! `c` of the coordinates. Over `Q` and imaginary quadratic fields every
//! supported archimedean norm gives a rational number or the square root of
//! one, so heights are represented exactly as `value^(1/root)`.

mod canonical;
mod restriction;

pub use canonical::{canonicalize, canonicalize_blocks, in_canonical_sector, ProjectivePoint};
pub use restriction::{ambient_height_ratio, restriction_height, restriction_height_base_side};

use crate::arith::{rat_to_f64, Rat};
use crate::linalg::{det_rat, RatMatrix};
use crate::nfcore::{content_ideal_norm, FieldElement, NfError, NumberField};
use crate::poly::Poly;
use crate::weilres::WeilError;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("the map is not defined at this point")]
    IndeterminacyPoint,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("archimedean norm matrix is singular")]
    SingularMatrix,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Field(#[from] NfError),
    #[error(transparent)]
    Weil(#[from] WeilError),
}

/// Norm on `F_v^{n+1}` at an archimedean place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArchNorm {
    Max,
    Euclidean,
    /// Max norm after applying an invertible rational matrix.
    Matrix(RatMatrix),
}

/// One projective factor `P^dim` carrying `O(degree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub dim: usize,
    pub degree: i64,
}

/// `O(k_1, ..., k_r)` on `P^{n_1} x ... x P^{n_r}` with archimedean norms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetrizedBundle {
    pub factors: Vec<Factor>,
    /// One entry per archimedean place, or a single entry used at every place.
    pub norms: Vec<ArchNorm>,
}

impl MetrizedBundle {
    /// `O(1)` on `P^n` with max norms.
    pub fn o1(n: usize) -> Self {
        Self::multidegree(&[(n, 1)])
    }

    pub fn multidegree(parts: &[(usize, i64)]) -> Self {
        MetrizedBundle {
            factors: parts
                .iter()
                .map(|&(dim, degree)| Factor { dim, degree })
                .collect(),
            norms: vec![ArchNorm::Max],
        }
    }

    pub fn with_norm(mut self, norm: ArchNorm) -> Result<Self, HeightError> {
        if let ArchNorm::Matrix(m) = &norm {
            let n = m.len();
            if m.iter().any(|r| r.len() != n) || self.factors.iter().any(|f| f.dim + 1 != n) {
                return Err(HeightError::DimensionMismatch("norm matrix size".into()));
            }
            if det_rat(m).is_zero() {
                return Err(HeightError::SingularMatrix);
            }
        }
        self.norms = vec![norm];
        Ok(self)
    }

    pub fn num_coords(&self) -> usize {
        self.factors.iter().map(|f| f.dim + 1).sum()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim + 1).collect()
    }

    pub fn tensor(&self, o: &MetrizedBundle) -> Result<MetrizedBundle, HeightError> {
        if self.norms != o.norms
            || self.factors.len() != o.factors.len()
            || self
                .factors
                .iter()
                .zip(&o.factors)
                .any(|(a, b)| a.dim != b.dim)
        {
            return Err(HeightError::DimensionMismatch(
                "tensor needs a shared ambient and metric".into(),
            ));
        }
        Ok(MetrizedBundle {
            factors: self
                .factors
                .iter()
                .zip(&o.factors)
                .map(|(a, b)| Factor {
                    dim: a.dim,
                    degree: a.degree + b.degree,
                })
                .collect(),
            norms: self.norms.clone(),
        })
    }

    pub fn dual(&self) -> MetrizedBundle {
        MetrizedBundle {
            factors: self
                .factors
                .iter()
                .map(|a| Factor {
                    dim: a.dim,
                    degree: -a.degree,
                })
                .collect(),
            norms: self.norms.clone(),
        }
    }
}

/// The positive real number `value^(1/root)`.
#[derive(Clone, Debug)]
pub struct Height {
    pub value: Rat,
    pub root: u32,
}

impl Height {
    pub fn one() -> Height {
        Height {
            value: Rat::one(),
            root: 1,
        }
    }

    pub fn rational(value: Rat) -> Height {
        Height { value, root: 1 }
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    pub fn ln(&self) -> f64 {
        let n = rat_to_f64(&Rat::from_integer(self.value.numer().clone()));
        let d = rat_to_f64(&Rat::from_integer(self.value.denom().clone()));
        let (ln_n, ln_d) = if n.is_finite() && d.is_finite() {
            (n.ln(), d.ln())
        } else {
            (big_ln(self.value.numer()), big_ln(self.value.denom()))
        };
        (ln_n - ln_d) / self.root as f64
    }

    /// The value as a rational, when `root == 1` or the root is exact.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.root == 1 {
            return Some(self.value.clone());
        }
        let n = exact_root(self.value.numer(), self.root)?;
        let d = exact_root(self.value.denom(), self.root)?;
        Some(Rat::new(n, d))
    }

    fn raised(&self, k: u32) -> Rat {
        num_traits::pow(self.value.clone(), k as usize)
    }

    /// Whether `H <= b`, decided exactly.
    pub fn le_rat(&self, b: &Rat) -> bool {
        if b.is_negative() {
            return false;
        }
        self.value <= num_traits::pow(b.clone(), self.root as usize)
    }

    pub fn mul(&self, o: &Height) -> Height {
        let l = self.root.lcm(&o.root);
        Height {
            value: self.raised(l / self.root) * o.raised(l / o.root),
            root: l,
        }
    }

    pub fn powi(&self, k: i64) -> Height {
        let v = num_traits::pow(self.value.clone(), k.unsigned_abs() as usize);
        Height {
            value: if k < 0 { v.recip() } else { v },
            root: self.root,
        }
    }
}

fn big_ln(n: &num_bigint::BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return rat_to_f64(&Rat::from_integer(n.clone())).ln();
    }
    let shift = bits - 60;
    let top: num_bigint::BigInt = n >> shift;
    rat_to_f64(&Rat::from_integer(top)).ln() + shift as f64 * std::f64::consts::LN_2
}

fn exact_root(n: &num_bigint::BigInt, k: u32) -> Option<num_bigint::BigInt> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

impl PartialEq for Height {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Height {}
impl PartialOrd for Height {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Height {
    fn cmp(&self, o: &Self) -> Ordering {
        let l = self.root.lcm(&o.root);
        self.raised(l / self.root).cmp(&o.raised(l / o.root))
    }
}

impl std::fmt::Display for Height {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", crate::arith::format_rat(&r)),
            None => write!(
                f,
                "({})^(1/{})",
                crate::arith::format_rat(&self.value),
                self.root
            ),
        }
    }
}

fn archimedean_size(f: &NumberField, x: &FieldElement) -> Result<Rat, HeightError> {
    if f.is_rational() {
        Ok(x.coords[0].abs())
    } else if f.is_imaginary_quadratic() {
        Ok(f.norm(x))
    } else {
        Err(HeightError::Unsupported(
            "exact heights need Q or an imaginary quadratic field".into(),
        ))
    }
}

/// Height of one projective block with `O(1)`.
fn block_height(
    f: &NumberField,
    x: &[FieldElement],
    norm: &ArchNorm,
) -> Result<Height, HeightError> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(HeightError::AllZero);
    }
    let content = content_ideal_norm(f, x)?;
    let (arch, root) = match norm {
        ArchNorm::Max => {
            let mut m = Rat::zero();
            for c in x {
                m = m.max(archimedean_size(f, c)?);
            }
            (m, 1)
        }
        ArchNorm::Euclidean => {
            let mut s = Rat::zero();
            for c in x {
                let a = archimedean_size(f, c)?;
                s += if f.is_rational() { &a * &a } else { a };
            }
            // Over Q this is the squared Euclidean length.
            (s, if f.is_rational() { 2 } else { 1 })
        }
        ArchNorm::Matrix(mat) => {
            if mat.len() != x.len() {
                return Err(HeightError::DimensionMismatch("norm matrix size".into()));
            }
            let mut m = Rat::zero();
            for row in mat {
                let mut y = f.zero();
                for (a, c) in row.iter().zip(x) {
                    if !a.is_zero() {
                        y = y.add(&c.scale(a));
                    }
                }
                m = m.max(archimedean_size(f, &y)?);
            }
            (m, 1)
        }
    };
    let c = if root == 1 {
        content
    } else {
        num_traits::pow(content, root as usize)
    };
    Ok(Height {
        value: arch / c,
        root,
    })
}

fn place_norm(m: &MetrizedBundle, f: &NumberField) -> Result<ArchNorm, HeightError> {
    let places = f.signature().0 + f.signature().1;
    match m.norms.len() {
        1 => Ok(m.norms[0].clone()),
        n if n == places && places == 1 => Ok(m.norms[0].clone()),
        _ => Err(HeightError::DimensionMismatch(format!(
            "{} archimedean norms for {} places",
            m.norms.len(),
            places
        ))),
    }
}

/// `H_L(x)` for a point of the ambient (multi)projective space.
pub fn height(
    f: &NumberField,
    x: &[FieldElement],
    m: &MetrizedBundle,
) -> Result<Height, HeightError> {
    if x.len() != m.num_coords() {
        return Err(HeightError::DimensionMismatch(format!(
            "{} coordinates for a bundle on {} coordinates",
            x.len(),
            m.num_coords()
        )));
    }
    let norm = place_norm(m, f)?;
    let mut h = Height::one();
    let mut start = 0;
    for fac in &m.factors {
        let block = &x[start..start + fac.dim + 1];
        start += fac.dim + 1;
        if fac.degree == 0 {
            if block.iter().all(|c| c.is_zero()) {
                return Err(HeightError::AllZero);
            }
            continue;
        }
        h = h.mul(&block_height(f, block, &norm)?.powi(fac.degree));
    }
    Ok(h)
}

/// Height of the image of `y` under a homogeneous polynomial map.
pub fn pullback_height(
    f: &NumberField,
    map: &[Poly],
    y: &[FieldElement],
    m: &MetrizedBundle,
) -> Result<Height, HeightError> {
    let degs: Vec<Option<u32>> = map
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.total_degree())
        .collect();
    if degs.iter().any(|d| d.is_none() || *d != degs[0]) {
        return Err(HeightError::DimensionMismatch(
            "map components must be homogeneous of one degree".into(),
        ));
    }
    let image: Vec<FieldElement> = map.iter().map(|p| p.eval(f, y)).collect();
    if image.iter().all(|c| c.is_zero()) {
        return Err(HeightError::IndeterminacyPoint);
    }
    height(f, &image, m)
}

/// Tensor multiplicativity and dual inversion at one point.
#[derive(Clone, Debug)]
pub struct AlgebraReport {
    pub h1: Height,
    pub h2: Height,
    pub tensor: Height,
    pub dual1: Height,
    pub tensor_ok: bool,
    pub dual_ok: bool,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.tensor_ok && self.dual_ok
    }
}

pub fn height_algebra_check(
    f: &NumberField,
    x: &[FieldElement],
    m1: &MetrizedBundle,
    m2: &MetrizedBundle,
) -> Result<AlgebraReport, HeightError> {
    let h1 = height(f, x, m1)?;
    let h2 = height(f, x, m2)?;
    let tensor = height(f, x, &m1.tensor(m2)?)?;
    let dual1 = height(f, x, &m1.dual())?;
    Ok(AlgebraReport {
        tensor_ok: tensor == h1.mul(&h2),
        dual_ok: dual1.mul(&h1) == Height::one(),
        h1,
        h2,
        tensor,
        dual1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    fn q(v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&a| FieldElement::from_ints(&[a])).collect()
    }

    #[test]
    fn basic_heights() {
        let f = NumberField::rationals();
        let m = MetrizedBundle::o1(1);
        assert_eq!(height(&f, &q(&[1, 1]), &m).unwrap(), Height::one());
        assert_eq!(
            height(&f, &q(&[2, 3]), &m).unwrap(),
            Height::rational(rat(3))
        );
        assert_eq!(
            height(&f, &q(&[2, 4]), &m).unwrap(),
            Height::rational(rat(2))
        );
        assert_eq!(height(&f, &q(&[0, 0]), &m), Err(HeightError::AllZero));
        let x = vec![
            FieldElement::new(vec![rat_frac(1, 2)]),
            FieldElement::new(vec![rat_frac(1, 3)]),
        ];
        assert_eq!(height(&f, &x, &m).unwrap(), Height::rational(rat(3)));
        let g = NumberField::gaussian();
        let x = vec![
            FieldElement::from_ints(&[1, 1]),
            FieldElement::from_ints(&[1, 0]),
        ];
        assert_eq!(height(&g, &x, &m).unwrap(), Height::rational(rat(2)));
    }

    #[test]
    fn euclidean_and_matrix() {
        let f = NumberField::rationals();
        let m = MetrizedBundle::o1(1)
            .with_norm(ArchNorm::Euclidean)
            .unwrap();
        let h = height(&f, &q(&[3, 4]), &m).unwrap();
        assert_eq!(h.as_rational(), Some(rat(5)));
        let h = height(&f, &q(&[1, 1]), &m).unwrap();
        assert!((h.to_f64() - 2f64.sqrt()).abs() < 1e-12);
        let mat = vec![vec![rat(1), rat(1)], vec![rat(0), rat(1)]];
        let m = MetrizedBundle::o1(1)
            .with_norm(ArchNorm::Matrix(mat))
            .unwrap();
        assert_eq!(
            height(&f, &q(&[2, 3]), &m).unwrap(),
            Height::rational(rat(5))
        );
        let sing = vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]];
        assert_eq!(
            MetrizedBundle::o1(1).with_norm(ArchNorm::Matrix(sing)),
            Err(HeightError::SingularMatrix)
        );
    }

    #[test]
    fn pullbacks_and_algebra() {
        let f = NumberField::rationals();
        let names = crate::poly::var_names("x", 2);
        let ver: Vec<Poly> = ["x0^2", "x0*x1", "x1^2"]
            .iter()
            .map(|s| Poly::parse(&f, s, &names).unwrap())
            .collect();
        let h = pullback_height(&f, &ver, &q(&[2, 3]), &MetrizedBundle::o1(2)).unwrap();
        assert_eq!(h, Height::rational(rat(9)));
        let names4 = crate::poly::var_names("x", 4);
        let cube: Vec<Poly> = (0..4)
            .map(|i| Poly::parse(&f, &format!("x{i}^3"), &names4).unwrap())
            .collect();
        let h = pullback_height(&f, &cube, &q(&[1, 2, 1, 1]), &MetrizedBundle::o1(3)).unwrap();
        assert_eq!(h, Height::rational(rat(8)));
        let lin = vec![Poly::parse(&f, "x0 - x1", &names).unwrap(), Poly::zero(2)];
        assert_eq!(
            pullback_height(&f, &lin, &q(&[1, 1]), &MetrizedBundle::o1(1)),
            Err(HeightError::IndeterminacyPoint)
        );

        let m = MetrizedBundle::o1(1);
        let r = height_algebra_check(&f, &q(&[2, 3]), &m, &m).unwrap();
        assert!(r.passed());
        assert_eq!(r.tensor, Height::rational(rat(9)));
        assert_eq!(r.dual1, Height::rational(rat_frac(1, 3)));
        let b = MetrizedBundle::multidegree(&[(1, 1), (1, 2)]);
        let h = height(&f, &q(&[2, 3, 1, 2]), &b).unwrap();
        assert_eq!(h, Height::rational(rat(12)));
    }
}
