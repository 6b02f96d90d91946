use super::NfError;
use crate::arith::{rat, rat_to_f64, Rat};
use crate::linalg::{det_rat, inverse_rat, RatMatrix};
use crate::polyfp::Fp;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// An element of a number field, stored by its coordinates in the field's
/// integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<Rat>,
}

impl FieldElement {
    pub fn new(coords: Vec<Rat>) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        FieldElement {
            coords: coords.iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        FieldElement {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// Integer coordinates, if the element is integral and they fit.
    pub fn int_coords(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(crate::arith::format_rat).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug)]
pub(crate) struct FieldInner {
    pub name: String,
    pub minpoly: Vec<BigInt>,
    pub degree: usize,
    pub r1: usize,
    pub r2: usize,
    pub basis: RatMatrix,
    pub basis_inv: RatMatrix,
    pub mult: Vec<Vec<Vec<BigInt>>>,
    pub disc: BigInt,
    pub h: u64,
    pub w: u64,
    pub index: BigInt,
    pub roots: Vec<Complex64>,
    pub units: OnceLock<Vec<FieldElement>>,
}

/// A number field given by a monic integer minimal polynomial and an integral
/// basis. Cloning is cheap; all data is shared and immutable.
#[derive(Clone, Debug)]
pub struct NumberField(pub(crate) Arc<FieldInner>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.minpoly == other.0.minpoly && self.0.basis == other.0.basis)
    }
}

impl Eq for NumberField {}

fn poly_mul_mod(a: &[Rat], b: &[Rat], minpoly: &[BigInt]) -> Vec<Rat> {
    let d = minpoly.len() - 1;
    let mut prod = vec![Rat::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k].clone();
        if c.is_zero() {
            continue;
        }
        prod[k] = Rat::zero();
        for (i, m) in minpoly.iter().enumerate().take(d) {
            prod[k - d + i] -= &c * Rat::from_integer(m.clone());
        }
    }
    prod.truncate(d);
    prod.resize(d, Rat::zero());
    prod
}

/// Complex roots of a monic integer polynomial (Durand-Kerner followed by
/// Newton polishing).
fn complex_roots(minpoly: &[BigInt]) -> Vec<Complex64> {
    let d = minpoly.len() - 1;
    let c: Vec<f64> = minpoly.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    let eval = |z: Complex64| {
        let mut r = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            r = r * z + a;
        }
        r
    };
    let deval = |z: Complex64| {
        let mut r = Complex64::new(0.0, 0.0);
        for (k, &a) in c.iter().enumerate().skip(1).rev() {
            r = r * z + a * k as f64;
        }
        r
    };
    if d == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    let bound = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| seed.powu(k as u32) * (bound / 2.0))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..5 {
            let dv = deval(*zi);
            if dv.norm() > 0.0 {
                *zi -= eval(*zi) / dv;
            }
        }
    }
    z
}

fn possible_degrees(fp: &Fp, f: &[i64]) -> Option<Vec<bool>> {
    let g = fp.reduce_signed(f);
    if g.len() != f.len() {
        return None;
    }
    let dg = fp.deriv(&g);
    if dg.is_empty() || fp.gcd(&g, &dg).len() != 1 {
        return None;
    }
    let d = f.len() - 1;
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for (h, _) in fp.factor(&g) {
        let k = h.len() - 1;
        for s in (k..=d).rev() {
            if reach[s - k] {
                reach[s] = true;
            }
        }
    }
    Some(reach)
}

fn check_irreducible(minpoly: &[BigInt]) -> Result<(), NfError> {
    let d = minpoly.len() - 1;
    if d == 1 {
        return Ok(());
    }
    // Integer roots divide the constant term (monic polynomial).
    let c0 = minpoly[0].abs();
    let c0_small = c0.to_u64();
    let has_root = |r: &BigInt| {
        let mut acc = BigInt::zero();
        for a in minpoly.iter().rev() {
            acc = acc * r + a;
        }
        acc.is_zero()
    };
    if c0.is_zero() {
        return Err(NfError::ReduciblePolynomial("zero is a root".into()));
    }
    if let Some(n) = c0_small.filter(|&n| n < 10_000_000) {
        let mut k = 1u64;
        while k * k <= n {
            if n % k == 0 {
                for r in [k, n / k] {
                    for s in [BigInt::from(r), -BigInt::from(r)] {
                        if has_root(&s) {
                            return Err(NfError::ReduciblePolynomial(format!("{s} is a root")));
                        }
                    }
                }
            }
            k += 1;
        }
        if d <= 3 {
            return Ok(());
        }
    }
    let small: Option<Vec<i64>> = minpoly.iter().map(|x| x.to_i64()).collect();
    let Some(small) = small else {
        return Err(NfError::ReduciblePolynomial(
            "coefficients too large to certify irreducibility".into(),
        ));
    };
    let mut possible = vec![true; d + 1];
    let mut used = 0;
    for p in crate::arith::primes_up_to(2000) {
        if let Some(r) = possible_degrees(&Fp::new(p), &small) {
            for (a, b) in possible.iter_mut().zip(r) {
                *a = *a && b;
            }
            used += 1;
            if possible[1..d].iter().all(|x| !x) {
                return Ok(());
            }
            if used > 40 {
                break;
            }
        }
    }
    // Fall back to the roots: a rational factor of degree k is the product of
    // k linear factors whose symmetric functions are integers. Candidates
    // found numerically are confirmed by exact division.
    if d > 12 {
        return Err(NfError::ReduciblePolynomial(
            "irreducibility could not be certified by reduction modulo primes".into(),
        ));
    }
    let roots = complex_roots(minpoly);
    for mask in 1u32..(1 << d) - 1 {
        let k = mask.count_ones() as usize;
        if !possible[k] || mask & 1 == 0 {
            continue;
        }
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for (i, r) in roots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (j, c) in prod.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * r;
                }
                prod = next;
            }
        }
        if prod
            .iter()
            .all(|c| c.im.abs() < 1e-6 && (c.re - c.re.round()).abs() < 1e-6)
        {
            let cand: Vec<BigInt> = prod
                .iter()
                .map(|c| BigInt::from(c.re.round() as i64))
                .collect();
            if exact_divides(&cand, minpoly) {
                return Err(NfError::ReduciblePolynomial(format!(
                    "has a factor of degree {k}"
                )));
            }
        }
    }
    Ok(())
}

/// Whether the monic integer polynomial `g` divides `f` exactly.
fn exact_divides(g: &[BigInt], f: &[BigInt]) -> bool {
    let dg = g.len() - 1;
    let mut r: Vec<BigInt> = f.to_vec();
    if r.len() < g.len() {
        return false;
    }
    for i in (0..=r.len() - g.len()).rev() {
        let c = r[i + dg].clone();
        if c.is_zero() {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            r[i + j] -= &c * gj;
        }
    }
    r.iter().all(|x| x.is_zero())
}

impl NumberField {
    /// Builds a field from a monic integer minimal polynomial (coefficients
    /// low degree first), an integral basis given in powers of the root, and
    /// the caller-asserted class number and number of roots of unity.
    pub fn from_minpoly(
        name: &str,
        minpoly: &[BigInt],
        integral_basis: &[Vec<Rat>],
        class_number: u64,
        roots_of_unity: u64,
    ) -> Result<NumberField, NfError> {
        let d = minpoly
            .len()
            .checked_sub(1)
            .filter(|&d| d >= 1)
            .ok_or_else(|| {
                NfError::InconsistentBasis("minimal polynomial must have degree at least 1".into())
            })?;
        if !minpoly[d].is_one() {
            return Err(NfError::InconsistentBasis(
                "minimal polynomial must be monic".into(),
            ));
        }
        check_irreducible(minpoly)?;
        if integral_basis.len() != d || integral_basis.iter().any(|b| b.len() != d) {
            return Err(NfError::InconsistentBasis(format!(
                "expected {d} basis vectors of length {d}"
            )));
        }
        let basis: RatMatrix = integral_basis.to_vec();
        let det = det_rat(&basis);
        if det.is_zero() {
            return Err(NfError::InconsistentBasis(
                "basis is not linearly independent".into(),
            ));
        }
        // Rows of basis express b_j in powers; we need powers in terms of b_j:
        // theta^k = sum_j basis_inv[k][j] b_j.
        let basis_inv = inverse_rat(&basis).expect("nonzero determinant");
        let index_rat = det.abs().recip();
        if !index_rat.is_integer() {
            return Err(NfError::InconsistentBasis(
                "basis does not contain the power basis of the order generated by the root".into(),
            ));
        }
        let index = index_rat.to_integer();

        let to_basis = |powers: &[Rat]| -> Vec<Rat> {
            (0..d)
                .map(|j| {
                    let mut s = Rat::zero();
                    for (k, pk) in powers.iter().enumerate() {
                        if !pk.is_zero() {
                            s += pk * &basis_inv[k][j];
                        }
                    }
                    s
                })
                .collect()
        };

        let mut mult = vec![vec![vec![BigInt::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let prod = poly_mul_mod(&basis[i], &basis[j], minpoly);
                let coords = to_basis(&prod);
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_integer() {
                        return Err(NfError::InconsistentBasis(format!(
                            "product of basis elements {i} and {j} leaves the lattice"
                        )));
                    }
                    mult[i][j][k] = c.to_integer();
                }
            }
        }
        // Commutativity and associativity on all basis triples.
        for i in 0..d {
            for j in 0..d {
                if mult[i][j] != mult[j][i] {
                    return Err(NfError::InconsistentBasis(
                        "multiplication not commutative".into(),
                    ));
                }
                for k in 0..d {
                    for t in 0..d {
                        let mut lhs = BigInt::zero();
                        let mut rhs = BigInt::zero();
                        for s in 0..d {
                            lhs += &mult[i][j][s] * &mult[s][k][t];
                            rhs += &mult[j][k][s] * &mult[i][s][t];
                        }
                        if lhs != rhs {
                            return Err(NfError::InconsistentBasis(
                                "multiplication not associative".into(),
                            ));
                        }
                    }
                }
            }
        }
        let mut one_powers = vec![Rat::zero(); d];
        one_powers[0] = Rat::one();
        if !to_basis(&one_powers).iter().all(|c| c.is_integer()) {
            return Err(NfError::InconsistentBasis("1 is not in the lattice".into()));
        }
        // Trace form.
        let traces: Vec<BigInt> = (0..d)
            .map(|k| (0..d).map(|j| mult[k][j][j].clone()).sum())
            .collect();
        let trace_form: RatMatrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let t: BigInt = (0..d).map(|k| &mult[i][j][k] * &traces[k]).sum();
                        Rat::from_integer(t)
                    })
                    .collect()
            })
            .collect();
        let disc = det_rat(&trace_form).to_integer();

        let all_roots = complex_roots(minpoly);
        let scale = all_roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let mut real: Vec<f64> = Vec::new();
        let mut cplx: Vec<Complex64> = Vec::new();
        for z in &all_roots {
            if z.im.abs() < 1e-9 * scale {
                real.push(z.re);
            } else if z.im > 0.0 {
                cplx.push(*z);
            }
        }
        real.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cplx.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let (r1, r2) = (real.len(), cplx.len());
        if r1 + 2 * r2 != d {
            return Err(NfError::InconsistentBasis(
                "root isolation failed to produce a consistent signature".into(),
            ));
        }
        let sign_ok = if r2 % 2 == 0 {
            disc.is_positive()
        } else {
            disc.is_negative()
        };
        if !sign_ok {
            return Err(NfError::InconsistentBasis(
                "discriminant sign disagrees with signature".into(),
            ));
        }
        let mut roots: Vec<Complex64> = real.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        roots.extend(cplx);
        let field = NumberField(Arc::new(FieldInner {
            name: name.to_string(),
            minpoly: minpoly.to_vec(),
            degree: d,
            r1,
            r2,
            basis,
            basis_inv,
            mult,
            disc,
            h: class_number,
            w: roots_of_unity,
            index,
            roots,
            units: OnceLock::new(),
        }));
        if let Some(w) = field.count_roots_of_unity() {
            if w != roots_of_unity {
                return Err(NfError::InconsistentBasis(format!(
                    "asserted {roots_of_unity} roots of unity but found {w}"
                )));
            }
        }
        Ok(field)
    }

    pub fn rationals() -> NumberField {
        Self::from_minpoly("Q", &[BigInt::zero(), BigInt::one()], &[vec![rat(1)]], 1, 2)
            .expect("Q is a valid field")
    }

    pub fn gaussian() -> NumberField {
        Self::power_basis("Q(i)", &[1, 0, 1], 1, 4).expect("Q(i) is a valid field")
    }

    pub fn eisenstein() -> NumberField {
        Self::power_basis("Q(sqrt-3)", &[1, 1, 1], 1, 6).expect("Q(sqrt-3) is a valid field")
    }

    /// Field whose integral basis is the power basis of the given minimal
    /// polynomial.
    pub fn power_basis(
        name: &str,
        minpoly: &[i64],
        h: u64,
        w: u64,
    ) -> Result<NumberField, NfError> {
        let d = minpoly.len() - 1;
        let basis: Vec<Vec<Rat>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { rat(1) } else { rat(0) })
                    .collect()
            })
            .collect();
        let mp: Vec<BigInt> = minpoly.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_minpoly(name, &mp, &basis, h, w)
    }

    /// Looks up one of the built-in fields by name.
    pub fn builtin(name: &str) -> Option<NumberField> {
        match name {
            "Q" | "QQ" | "rationals" => Some(Self::rationals()),
            "Q(i)" | "gaussian" | "Q(sqrt-1)" => Some(Self::gaussian()),
            "Q(sqrt-3)" | "eisenstein" | "Q(zeta3)" => Some(Self::eisenstein()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }
    pub fn degree(&self) -> usize {
        self.0.degree
    }
    pub fn signature(&self) -> (usize, usize) {
        (self.0.r1, self.0.r2)
    }
    pub fn discriminant(&self) -> &BigInt {
        &self.0.disc
    }
    pub fn class_number(&self) -> u64 {
        self.0.h
    }
    pub fn roots_of_unity(&self) -> u64 {
        self.0.w
    }
    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }
    pub fn integral_basis(&self) -> &RatMatrix {
        &self.0.basis
    }
    pub fn mult_table(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.0.mult
    }
    /// Index of the order generated by the root inside the ring of integers
    /// spanned by the supplied basis.
    pub fn index(&self) -> &BigInt {
        &self.0.index
    }
    pub fn unit_rank(&self) -> usize {
        self.0.r1 + self.0.r2 - 1
    }
    pub fn is_rational(&self) -> bool {
        self.0.degree == 1
    }
    pub fn is_imaginary_quadratic(&self) -> bool {
        self.0.degree == 2 && self.0.r2 == 1
    }
    /// Roots of the minimal polynomial: real ones ascending, then one root of
    /// each complex-conjugate pair (positive imaginary part).
    pub fn place_roots(&self) -> &[Complex64] {
        &self.0.roots
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![Rat::zero(); self.degree()])
    }

    pub fn from_rat(&self, r: Rat) -> FieldElement {
        let mut p = vec![Rat::zero(); self.degree()];
        p[0] = r;
        self.from_powers(&p)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rat(rat(n))
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The root of the minimal polynomial.
    pub fn theta(&self) -> FieldElement {
        let mut p = vec![Rat::zero(); self.degree()];
        if self.degree() == 1 {
            p[0] = -Rat::from_integer(self.0.minpoly[0].clone());
        } else {
            p[1] = Rat::one();
        }
        self.from_powers(&p)
    }

    /// Element from coefficients in powers of the root.
    pub fn from_powers(&self, powers: &[Rat]) -> FieldElement {
        let d = self.degree();
        let coords = (0..d)
            .map(|j| {
                let mut s = Rat::zero();
                for (k, pk) in powers.iter().enumerate().take(d) {
                    if !pk.is_zero() {
                        s += pk * &self.0.basis_inv[k][j];
                    }
                }
                s
            })
            .collect();
        FieldElement::new(coords)
    }

    /// Coefficients of an element in powers of the root.
    pub fn to_powers(&self, x: &FieldElement) -> Vec<Rat> {
        let d = self.degree();
        (0..d)
            .map(|k| {
                let mut s = Rat::zero();
                for (j, c) in x.coords.iter().enumerate() {
                    if !c.is_zero() {
                        s += c * &self.0.basis[j][k];
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree();
        let mut out = vec![Rat::zero(); d];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, o) in out.iter_mut().enumerate() {
                    let m = &self.0.mult[i][j][k];
                    if !m.is_zero() {
                        *o += &ab * Rat::from_integer(m.clone());
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    /// Matrix of multiplication by `x`: row `i` holds the coordinates of
    /// `x * b_i`.
    pub fn mul_matrix(&self, x: &FieldElement) -> RatMatrix {
        let d = self.degree();
        (0..d)
            .map(|i| {
                let mut bi = vec![Rat::zero(); d];
                bi[i] = Rat::one();
                self.mul(x, &FieldElement::new(bi)).coords
            })
            .collect()
    }

    pub fn norm(&self, x: &FieldElement) -> Rat {
        det_rat(&self.mul_matrix(x))
    }

    pub fn trace(&self, x: &FieldElement) -> Rat {
        let m = self.mul_matrix(x);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, NfError> {
        if x.is_zero() {
            return Err(NfError::DivisionByZero);
        }
        // Solve x * y = 1 via the transpose of the multiplication matrix.
        let m = self.mul_matrix(x);
        let d = self.degree();
        let mt: RatMatrix = (0..d)
            .map(|k| (0..d).map(|i| m[i][k].clone()).collect())
            .collect();
        let one = self.one();
        crate::linalg::solve_rat(&mt, &one.coords)
            .map(FieldElement::new)
            .ok_or(NfError::DivisionByZero)
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, NfError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: u32) -> FieldElement {
        let mut r = self.one();
        let mut b = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Galois conjugate in a quadratic field (`Tr(x) - x`).
    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(
            self.degree(),
            2,
            "conjugation is only defined here for quadratic fields"
        );
        self.from_rat(self.trace(x)).sub(x)
    }

    /// Image of `x` under the embedding sending the root to `root`.
    pub fn embed_at(&self, x: &FieldElement, root: Complex64) -> Complex64 {
        let powers = self.to_powers(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in powers.iter().rev() {
            acc = acc * root + rat_to_f64(c);
        }
        acc
    }

    /// Images of `x` under the archimedean places (one per real place, then
    /// one per complex pair).
    pub fn embeddings(&self, x: &FieldElement) -> Vec<Complex64> {
        self.0.roots.iter().map(|&r| self.embed_at(x, r)).collect()
    }

    /// Counts roots of unity exactly for degree 1 and imaginary quadratic
    /// fields (norm-one integral elements); `None` otherwise.
    pub fn count_roots_of_unity(&self) -> Option<u64> {
        if self.is_rational() {
            return Some(2);
        }
        if !self.is_imaginary_quadratic() {
            return None;
        }
        Some(self.units().len() as u64)
    }

    /// All units of an imaginary quadratic field or of Q, in a fixed order.
    pub fn units(&self) -> Vec<FieldElement> {
        self.0.units.get_or_init(|| self.find_units()).clone()
    }

    fn find_units(&self) -> Vec<FieldElement> {
        if self.is_rational() {
            return vec![self.from_int(1), self.from_int(-1)];
        }
        assert!(self.is_imaginary_quadratic(), "finite unit group required");
        let mut out = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let x = FieldElement::from_ints(&[a, b]);
                if self.norm(&x).is_one() {
                    out.push(x);
                }
            }
        }
        out
    }

    /// For a quadratic field with minimal polynomial `t^2 + p t + q`, returns
    /// `(p, q)`.
    pub fn quadratic_pq(&self) -> Option<(BigInt, BigInt)> {
        if self.degree() != 2 {
            return None;
        }
        Some((self.0.minpoly[1].clone(), self.0.minpoly[0].clone()))
    }
}
