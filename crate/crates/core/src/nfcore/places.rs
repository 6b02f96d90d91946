use super::{factor_rational_prime, FieldElement, IdealZ, NfError, NumberField, PrimeIdeal};
use crate::arith::{factor_u64, valuation_bigint, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    /// Real embedding, indexed in ascending order of the real roots.
    Real(usize),
    /// Complex-conjugate pair of embeddings.
    Complex(usize),
    Finite(PrimeIdeal),
}

impl Place {
    pub fn is_archimedean(&self) -> bool {
        !matches!(self, Place::Finite(_))
    }
}

pub fn archimedean_places(f: &NumberField) -> Vec<Place> {
    let (r1, r2) = f.signature();
    (0..r1)
        .map(Place::Real)
        .chain((0..r2).map(Place::Complex))
        .collect()
}

/// Valuation `ord_p(x)` of a nonzero element at a prime ideal.
pub fn ord(f: &NumberField, x: &FieldElement, p: &PrimeIdeal) -> Result<i64, NfError> {
    if x.is_zero() {
        return Err(NfError::ZeroAtFinitePlace);
    }
    let mut den = BigInt::one();
    for c in &x.coords {
        den = den.lcm(c.denom());
    }
    let num = x.scale(&Rat::from_integer(den.clone()));
    let a = IdealZ::principal(f, &num)?;
    let v_num = a.valuation(f, p) as i64;
    let v_den = valuation_bigint(&den, p.p) as i64 * p.e as i64;
    Ok(v_num - v_den)
}

/// Exact value of `|x|_v` at a finite place: `N(p)^(-ord_p(x))`.
pub fn finite_absolute_value(
    f: &NumberField,
    x: &FieldElement,
    p: &PrimeIdeal,
) -> Result<Rat, NfError> {
    let v = ord(f, x, p)?;
    let q = Rat::from_integer(BigInt::from(p.norm()));
    Ok(if v >= 0 {
        num_traits::pow(q, v as usize).recip()
    } else {
        num_traits::pow(q, (-v) as usize)
    })
}

/// Exact archimedean absolute value when it is rational: over Q the usual
/// absolute value, over an imaginary quadratic field `|sigma(x)|^2 = N(x)`.
pub fn archimedean_absolute_value_exact(f: &NumberField, x: &FieldElement) -> Option<Rat> {
    if f.is_rational() {
        Some(x.coords[0].abs())
    } else if f.is_imaginary_quadratic() {
        Some(f.norm(x))
    } else {
        None
    }
}

/// Normalized absolute value `|x|_v`.
pub fn absolute_value(f: &NumberField, x: &FieldElement, v: &Place) -> Result<f64, NfError> {
    match v {
        Place::Real(i) => Ok(f.embed_at(x, f.place_roots()[*i]).norm()),
        Place::Complex(j) => {
            let (r1, _) = f.signature();
            Ok(f.embed_at(x, f.place_roots()[r1 + j]).norm_sqr())
        }
        Place::Finite(p) => Ok(crate::arith::rat_to_f64(&finite_absolute_value(f, x, p)?)),
    }
}

/// Finite places where `x` has nonzero valuation.
pub fn support(f: &NumberField, x: &FieldElement) -> Result<Vec<PrimeIdeal>, NfError> {
    if x.is_zero() {
        return Err(NfError::ZeroAtFinitePlace);
    }
    let n = f.norm(x);
    let mut primes: Vec<u64> = Vec::new();
    for part in [n.numer().abs(), n.denom().clone()] {
        let m = part.to_u64().ok_or(NfError::TooLarge)?;
        primes.extend(factor_u64(m).into_iter().map(|(p, _)| p));
    }
    // Denominators of coordinates can hide primes that cancel in the norm.
    for c in &x.coords {
        let m = c.denom().to_u64().ok_or(NfError::TooLarge)?;
        primes.extend(factor_u64(m).into_iter().map(|(p, _)| p));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = Vec::new();
    for p in primes {
        for q in factor_rational_prime(f, p)? {
            if ord(f, x, &q)? != 0 {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// Sum of `log |x|_v` over all places; zero by the product formula.
pub fn product_formula_defect(f: &NumberField, x: &FieldElement) -> Result<f64, NfError> {
    let mut s = 0.0;
    for v in archimedean_places(f) {
        s += absolute_value(f, x, &v)?.ln();
    }
    for q in support(f, x)? {
        let v = ord(f, x, &q)?;
        s -= (v as f64) * (q.norm() as f64).ln();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    #[test]
    fn absolute_values_of_two() {
        let q = NumberField::rationals();
        let two = q.from_int(2);
        assert_eq!(absolute_value(&q, &two, &Place::Real(0)).unwrap(), 2.0);
        let p2 = factor_rational_prime(&q, 2).unwrap().remove(0);
        let p3 = factor_rational_prime(&q, 3).unwrap().remove(0);
        assert_eq!(
            finite_absolute_value(&q, &two, &p2).unwrap(),
            rat_frac(1, 2)
        );
        assert_eq!(finite_absolute_value(&q, &two, &p3).unwrap(), rat(1));
    }

    #[test]
    fn gaussian_one_plus_i() {
        let gi = NumberField::gaussian();
        let x = FieldElement::from_ints(&[1, 1]);
        let v = absolute_value(&gi, &x, &Place::Complex(0)).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let p = factor_rational_prime(&gi, 2).unwrap().remove(0);
        assert_eq!(finite_absolute_value(&gi, &x, &p).unwrap(), rat_frac(1, 2));
        assert_eq!(archimedean_absolute_value_exact(&gi, &x), Some(rat(2)));
    }

    #[test]
    fn zero_rejected_at_finite_place() {
        let gi = NumberField::gaussian();
        let p = factor_rational_prime(&gi, 5).unwrap().remove(0);
        assert!(matches!(
            finite_absolute_value(&gi, &gi.zero(), &p),
            Err(NfError::ZeroAtFinitePlace)
        ));
        assert!(matches!(
            ord(&gi, &gi.zero(), &p),
            Err(NfError::ZeroAtFinitePlace)
        ));
    }
}
