use super::{FieldElement, NfError, NumberField};
use crate::arith::{factor_u64, Rat};
use crate::linalg::{hnf, IntMatrix};
use crate::polyfp::Fp;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A nonzero integral ideal, stored as the Hermite normal form of a Z-basis
/// in integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealZ {
    pub hnf: IntMatrix,
}

impl IdealZ {
    /// The ideal generated by integral elements.
    pub fn from_generators(f: &NumberField, gens: &[FieldElement]) -> Result<IdealZ, NfError> {
        let d = f.degree();
        let mut rows: IntMatrix = Vec::new();
        for g in gens {
            if !g.is_integral() {
                return Err(NfError::NotIntegral);
            }
            for i in 0..d {
                let mut bi = vec![Rat::zero(); d];
                bi[i] = Rat::one();
                let prod = f.mul(g, &FieldElement::new(bi));
                rows.push(prod.coords.iter().map(|c| c.to_integer()).collect());
            }
        }
        let h = hnf(&rows);
        if h.len() < d {
            return Err(NfError::ZeroIdeal);
        }
        Ok(IdealZ { hnf: h })
    }

    pub fn principal(f: &NumberField, x: &FieldElement) -> Result<IdealZ, NfError> {
        Self::from_generators(f, std::slice::from_ref(x))
    }

    pub fn unit(f: &NumberField) -> IdealZ {
        Self::principal(f, &f.one()).expect("unit ideal")
    }

    pub fn from_int(f: &NumberField, n: i64) -> Result<IdealZ, NfError> {
        Self::principal(f, &f.from_int(n))
    }

    pub fn norm(&self) -> BigInt {
        self.hnf
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].clone())
            .product::<BigInt>()
            .abs()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Z-basis elements as field elements.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        self.hnf
            .iter()
            .map(|r| FieldElement::new(r.iter().map(|x| Rat::from_integer(x.clone())).collect()))
            .collect()
    }

    pub fn mul(&self, f: &NumberField, o: &IdealZ) -> IdealZ {
        let mut gens = Vec::new();
        for a in self.basis_elements() {
            for b in o.basis_elements() {
                gens.push(f.mul(&a, &b));
            }
        }
        Self::from_generators(f, &gens).expect("product of nonzero ideals is nonzero")
    }

    pub fn add(&self, f: &NumberField, o: &IdealZ) -> IdealZ {
        let mut gens = self.basis_elements();
        gens.extend(o.basis_elements());
        Self::from_generators(f, &gens).expect("sum of nonzero ideals is nonzero")
    }

    pub fn pow(&self, f: &NumberField, e: u32) -> IdealZ {
        let mut r = Self::unit(f);
        for _ in 0..e {
            r = r.mul(f, self);
        }
        r
    }

    /// Membership test for an integral element (triangular back-substitution).
    pub fn contains(&self, x: &FieldElement) -> bool {
        if !x.is_integral() {
            return false;
        }
        let mut v: Vec<BigInt> = x.coords.iter().map(|c| c.to_integer()).collect();
        for (i, row) in self.hnf.iter().enumerate() {
            let piv = &row[i];
            if !(&v[i] % piv).is_zero() {
                return false;
            }
            let q = &v[i] / piv;
            for (vj, rj) in v.iter_mut().zip(row) {
                *vj -= &q * rj;
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    pub fn is_subset_of(&self, o: &IdealZ) -> bool {
        self.basis_elements().iter().all(|x| o.contains(x))
    }

    /// Valuation of this ideal at a prime ideal.
    pub fn valuation(&self, f: &NumberField, p: &PrimeIdeal) -> u32 {
        let mut k = 0;
        let mut pk = p.ideal.clone();
        while self.is_subset_of(&pk) {
            k += 1;
            pk = pk.mul(f, &p.ideal);
        }
        k
    }
}

/// A prime ideal of the ring of integers together with its local data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Local generator: an element of valuation exactly one.
    pub pi: FieldElement,
    pub ideal: IdealZ,
    /// Monic irreducible factor of the minimal polynomial modulo p defining
    /// the residue field.
    pub residue_poly: Vec<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }
}

fn reduce_minpoly(f: &NumberField, p: u64) -> Vec<i64> {
    let pb = BigInt::from(p);
    f.minpoly()
        .iter()
        .map(|c| c.mod_floor(&pb).to_i64().expect("reduced coefficient fits"))
        .collect()
}

/// Splitting type `(e, f)` of each prime above `p`, from the factorization of
/// the minimal polynomial modulo `p`.
pub fn splitting_type(f: &NumberField, p: u64) -> Result<Vec<(u32, u32)>, NfError> {
    if (f.index() % BigInt::from(p)).is_zero() {
        return Err(NfError::IndexDivisor(p));
    }
    if f.degree() == 1 {
        return Ok(vec![(1, 1)]);
    }
    let fp = Fp::new(p);
    let g = fp.reduce_signed(&reduce_minpoly(f, p));
    Ok(fp
        .factor(&g)
        .into_iter()
        .map(|(h, k)| (k, (h.len() - 1) as u32))
        .collect())
}

/// Kummer-Dedekind factorization of the rational prime `p`.
pub fn factor_rational_prime(f: &NumberField, p: u64) -> Result<Vec<PrimeIdeal>, NfError> {
    if !crate::arith::is_prime(p) {
        return Err(NfError::NotPrime(p));
    }
    if (f.index() % BigInt::from(p)).is_zero() {
        return Err(NfError::IndexDivisor(p));
    }
    let d = f.degree();
    let pe = f.from_int(p as i64);
    if d == 1 {
        return Ok(vec![PrimeIdeal {
            p,
            e: 1,
            f: 1,
            pi: pe.clone(),
            ideal: IdealZ::principal(f, &pe)?,
            residue_poly: vec![0, 1],
        }]);
    }
    let fp = Fp::new(p);
    let g = fp.reduce_signed(&reduce_minpoly(f, p));
    let mut out = Vec::new();
    for (h, e) in fp.factor(&g) {
        // Lift h to an integer polynomial and evaluate at the root.
        let powers: Vec<Rat> = h
            .iter()
            .map(|&c| Rat::from_integer(BigInt::from(c)))
            .collect();
        let mut full = vec![Rat::zero(); d];
        for (i, c) in powers.iter().enumerate() {
            if i < d {
                full[i] = c.clone();
            }
        }
        let ht = if h.len() > d {
            // h has degree d: h(theta) = h(theta) - minpoly(theta).
            let mut r = vec![Rat::zero(); d];
            for i in 0..d {
                r[i] = &powers[i] - Rat::from_integer(f.minpoly()[i].clone());
            }
            f.from_powers(&r)
        } else {
            f.from_powers(&full)
        };
        let ideal = IdealZ::from_generators(f, &[pe.clone(), ht.clone()])?;
        let pi = if e == 1 { pe.clone() } else { ht };
        out.push(PrimeIdeal {
            p,
            e,
            f: (h.len() - 1) as u32,
            pi,
            ideal,
            residue_poly: h,
        });
    }
    Ok(out)
}

/// Norm of the content ideal generated by the given coordinates. Rational
/// inputs are handled by clearing denominators.
pub fn content_ideal_norm(f: &NumberField, coords: &[FieldElement]) -> Result<Rat, NfError> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(NfError::AllZero);
    }
    let mut den = BigInt::one();
    for c in coords {
        for x in &c.coords {
            den = den.lcm(x.denom());
        }
    }
    let scale = Rat::from_integer(den.clone());
    let scaled: Vec<FieldElement> = coords
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.scale(&scale))
        .collect();
    let ideal = IdealZ::from_generators(f, &scaled)?;
    let dn = num_traits::pow(den, f.degree());
    Ok(Rat::new(ideal.norm(), dn))
}

/// Factorization of a nonzero integral ideal into prime ideals.
pub fn factor_ideal(f: &NumberField, a: &IdealZ) -> Result<Vec<(PrimeIdeal, u32)>, NfError> {
    let n = a.norm();
    if n.is_zero() {
        return Err(NfError::ZeroIdeal);
    }
    let n = n.to_u64().ok_or(NfError::TooLarge)?;
    let mut out = Vec::new();
    for (p, k) in factor_u64(n) {
        let mut accounted = 0u32;
        for q in factor_rational_prime(f, p)? {
            let v = a.valuation(f, &q);
            if v > 0 {
                accounted += v * q.f;
                out.push((q, v));
            }
        }
        debug_assert_eq!(accounted, k, "norm exponents must be accounted for");
    }
    Ok(out)
}

pub fn moebius_ideal(f: &NumberField, a: &IdealZ) -> Result<i32, NfError> {
    let fac = factor_ideal(f, a)?;
    if fac.iter().any(|(_, v)| *v >= 2) {
        return Ok(0);
    }
    Ok(if fac.len() % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramified_inert_split_in_gaussian() {
        let gi = NumberField::gaussian();
        let five = factor_rational_prime(&gi, 5).unwrap();
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|q| q.e == 1 && q.f == 1));
        let three = factor_rational_prime(&gi, 3).unwrap();
        assert_eq!((three.len(), three[0].f), (1, 2));
        let two = factor_rational_prime(&gi, 2).unwrap();
        assert_eq!((two.len(), two[0].e), (1, 2));
        for p in [2u64, 3, 5, 13, 101] {
            let prod = factor_rational_prime(&gi, p)
                .unwrap()
                .iter()
                .fold(IdealZ::unit(&gi), |acc, q| {
                    acc.mul(&gi, &q.ideal.pow(&gi, q.e))
                });
            assert_eq!(prod, IdealZ::from_int(&gi, p as i64).unwrap());
        }
    }

    #[test]
    fn content_norms() {
        let q = NumberField::rationals();
        let c = |xs: &[i64]| {
            let v: Vec<FieldElement> = xs.iter().map(|&x| q.from_int(x)).collect();
            content_ideal_norm(&q, &v).unwrap()
        };
        assert_eq!(c(&[2, 3]), crate::arith::rat(1));
        assert_eq!(c(&[2, 4]), crate::arith::rat(2));
        let gi = NumberField::gaussian();
        let v = vec![FieldElement::from_ints(&[1, 1]), gi.from_int(2)];
        assert_eq!(content_ideal_norm(&gi, &v).unwrap(), crate::arith::rat(2));
        assert!(matches!(
            content_ideal_norm(&gi, &[gi.zero()]),
            Err(NfError::AllZero)
        ));
    }

    #[test]
    fn moebius_examples() {
        let gi = NumberField::gaussian();
        assert_eq!(moebius_ideal(&gi, &IdealZ::unit(&gi)).unwrap(), 1);
        let a = IdealZ::principal(&gi, &FieldElement::from_ints(&[1, 1]))
            .unwrap()
            .pow(&gi, 2);
        assert_eq!(moebius_ideal(&gi, &a).unwrap(), 0);
        assert_eq!(
            moebius_ideal(&gi, &IdealZ::from_int(&gi, 5).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            moebius_ideal(&gi, &IdealZ::from_int(&gi, 3).unwrap()).unwrap(),
            -1
        );
    }
}
