use super::{splitting_type, NfError, NumberField};
use crate::arith::primes_up_to;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

/// Truncated Euler product for a Dedekind zeta value together with a bound
/// on the omitted tail.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaValue {
    pub value: f64,
    /// The true value lies in `[value, value * exp(log_tail_bound)]`.
    pub log_tail_bound: f64,
    pub prime_cutoff: u64,
}

impl ZetaValue {
    pub fn upper(&self) -> f64 {
        self.value * self.log_tail_bound.exp()
    }
    pub fn abs_error(&self) -> f64 {
        self.upper() - self.value
    }
}

/// `prod_{p <= P} prod_{q | p} (1 - N(q)^{-s})^{-1}`.
pub fn dedekind_zeta(f: &NumberField, s: f64, prime_cutoff: u64) -> Result<ZetaValue, NfError> {
    if s <= 1.0 || !s.is_finite() {
        return Err(NfError::DomainError(format!("zeta evaluated at s = {s}")));
    }
    if prime_cutoff < 2 {
        return Err(NfError::DomainError(
            "prime cutoff must be at least 2".into(),
        ));
    }
    let mut log = 0.0f64;
    for p in primes_up_to(prime_cutoff) {
        for (_, fdeg) in splitting_type(f, p)? {
            let q = (p as f64).powi(fdeg as i32);
            log -= (-q.powf(-s)).ln_1p();
        }
    }
    let big_p = prime_cutoff as f64;
    let d = f.degree() as f64;
    let tail = d * big_p.powf(1.0 - s) / ((s - 1.0) * (1.0 - big_p.powf(-s)));
    Ok(ZetaValue {
        value: log.exp(),
        log_tail_bound: tail,
        prime_cutoff,
    })
}

/// Residue of the Dedekind zeta function at `s = 1` by the class number
/// formula; available when the unit rank is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Residue {
    pub value: f64,
    pub expression: String,
}

pub fn residue_at_one(f: &NumberField) -> Result<Residue, NfError> {
    if f.unit_rank() != 0 {
        return Err(NfError::Unsupported(
            "residue needs the regulator; only fields with finite unit group are supported".into(),
        ));
    }
    let (r1, r2) = f.signature();
    let h = f.class_number() as f64;
    let w = f.roots_of_unity() as f64;
    let disc = f.discriminant().to_f64().unwrap().abs();
    let value = 2f64.powi(r1 as i32) * (2.0 * PI).powi(r2 as i32) * h / (w * disc.sqrt());
    let expression = format!(
        "2^{r1} (2 pi)^{r2} h / (w sqrt|d|) with h={}, w={}, |d|={}",
        f.class_number(),
        f.roots_of_unity(),
        f.discriminant().magnitude()
    );
    // For Q the formula above gives 2 / 2 = 1, the residue of the Riemann zeta.
    Ok(Residue { value, expression })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_zeta_two() {
        let z = dedekind_zeta(&NumberField::rationals(), 2.0, 100_000).unwrap();
        let exact = PI * PI / 6.0;
        assert!(z.value <= exact + 1e-12);
        assert!(z.upper() >= exact - 1e-12);
        assert!(z.abs_error() < 1e-4);
    }

    #[test]
    fn residues() {
        let r = residue_at_one(&NumberField::gaussian()).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-14);
        let r = residue_at_one(&NumberField::rationals()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        let r = residue_at_one(&NumberField::eisenstein()).unwrap();
        assert!((r.value - 2.0 * PI / (6.0 * 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(dedekind_zeta(&NumberField::gaussian(), 1.0, 100).is_err());
        assert!(dedekind_zeta(&NumberField::gaussian(), 3.0, 1).is_err());
    }
}
