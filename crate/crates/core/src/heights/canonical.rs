//! Canonical representatives of projective points over fields with class
//! number one and finitely many units.

use super::HeightError;
use crate::arith::Rat;
use crate::nfcore::{FieldElement, IdealZ, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A nonzero coordinate vector in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    /// Canonicalizes the given coordinates.
    pub fn new(f: &NumberField, coords: &[FieldElement]) -> Result<Self, HeightError> {
        Ok(ProjectivePoint {
            coords: canonicalize(f, coords)?,
        })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.coords
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Whether `z` lies in the fundamental sector for the unit group: positive
/// over `Q`; argument in `[0, 2*pi/w)` over an imaginary quadratic field.
pub fn in_canonical_sector(f: &NumberField, z: &FieldElement) -> bool {
    if z.is_zero() {
        return false;
    }
    if f.is_rational() {
        return z.coords[0].is_positive();
    }
    let (p, qq) = f.quadratic_pq().expect("quadratic field");
    let pw = f.to_powers(z);
    let p = Rat::from_integer(p);
    let two = Rat::from_integer(BigInt::from(2));
    // z = r + s*sqrt(D) with D = p^2 - 4q < 0 (up to the factor i).
    let r = &pw[0] - &p * &pw[1] / &two;
    let s = &pw[1] / &two;
    let dabs = (&p * &p - Rat::from_integer(qq) * Rat::from_integer(BigInt::from(4))).abs();
    match f.roots_of_unity() {
        2 => s.is_positive() || (s.is_zero() && r.is_positive()),
        4 => r.is_positive() && !s.is_negative(),
        6 => {
            let three = Rat::from_integer(BigInt::from(3));
            !s.is_negative() && r.is_positive() && &s * &s * dabs < three * &r * &r
        }
        _ => false,
    }
}

fn bilinear(f: &NumberField, x: &FieldElement, y: &FieldElement) -> Rat {
    (f.norm(&x.add(y)) - f.norm(x) - f.norm(y)) / Rat::from_integer(BigInt::from(2))
}

/// A generator of a principal ideal in an imaginary quadratic field: the
/// shortest vector of the ideal lattice for the norm form.
fn generator(f: &NumberField, ideal: &IdealZ) -> Result<FieldElement, HeightError> {
    let mut b = ideal.basis_elements();
    let (mut b1, mut b2) = (b.remove(0), b.remove(0));
    loop {
        if f.norm(&b2) < f.norm(&b1) {
            std::mem::swap(&mut b1, &mut b2);
        }
        let mu = bilinear(f, &b1, &b2) / f.norm(&b1);
        let k = mu.round();
        if k.is_zero() {
            break;
        }
        b2 = b2.sub(&b1.scale(&k));
        if f.norm(&b2) >= f.norm(&b1) {
            break;
        }
    }
    if Rat::from_integer(ideal.norm()) != f.norm(&b1) {
        return Err(HeightError::Unsupported(
            "content ideal is not principal".into(),
        ));
    }
    Ok(b1)
}

/// Canonical representative: integral coordinates generating the unit ideal,
/// first nonzero coordinate in the canonical unit sector.
pub fn canonicalize(f: &NumberField, x: &[FieldElement]) -> Result<Vec<FieldElement>, HeightError> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(HeightError::AllZero);
    }
    if !(f.is_rational() || f.is_imaginary_quadratic()) || f.class_number() != 1 {
        return Err(HeightError::Unsupported(
            "canonical forms need Q or an imaginary quadratic field with class number one".into(),
        ));
    }
    let mut den = BigInt::one();
    for c in x {
        for a in &c.coords {
            den = den.lcm(a.denom());
        }
    }
    let scale = Rat::from_integer(den);
    let ints: Vec<FieldElement> = x.iter().map(|c| c.scale(&scale)).collect();
    let mut out: Vec<FieldElement> = if f.is_rational() {
        let g = ints
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.coords[0].to_integer()));
        let g = Rat::from_integer(g);
        ints.iter()
            .map(|c| FieldElement::new(vec![&c.coords[0] / &g]))
            .collect()
    } else {
        let gens: Vec<FieldElement> = ints.iter().filter(|c| !c.is_zero()).cloned().collect();
        let ideal = IdealZ::from_generators(f, &gens)?;
        let g = generator(f, &ideal)?;
        let gi = f.inv(&g)?;
        ints.iter().map(|c| f.mul(c, &gi)).collect()
    };
    let lead = out.iter().find(|c| !c.is_zero()).expect("nonzero").clone();
    let unit = f
        .units()
        .into_iter()
        .find(|u| in_canonical_sector(f, &f.mul(u, &lead)))
        .expect("some unit moves the leading coordinate into the sector");
    for c in out.iter_mut() {
        *c = f.mul(&unit, c);
    }
    Ok(out)
}

/// Canonicalizes each block of a multiprojective point.
pub fn canonicalize_blocks(
    f: &NumberField,
    x: &[FieldElement],
    sizes: &[usize],
) -> Result<Vec<FieldElement>, HeightError> {
    if sizes.iter().sum::<usize>() != x.len() {
        return Err(HeightError::DimensionMismatch("block sizes".into()));
    }
    let mut out = Vec::with_capacity(x.len());
    let mut start = 0;
    for &s in sizes {
        out.extend(canonicalize(f, &x[start..start + s])?);
        start += s;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_partition_orbits() {
        for f in [
            NumberField::rationals(),
            NumberField::gaussian(),
            NumberField::eisenstein(),
        ] {
            let d = f.degree();
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    let z = if d == 1 {
                        FieldElement::from_ints(&[a])
                    } else {
                        FieldElement::from_ints(&[a, b])
                    };
                    if z.is_zero() {
                        continue;
                    }
                    let hits = f
                        .units()
                        .iter()
                        .filter(|u| in_canonical_sector(&f, &f.mul(u, &z)))
                        .count();
                    assert_eq!(hits, 1, "{} {}", f.name(), z);
                }
            }
        }
    }

    #[test]
    fn canonical_forms() {
        let g = NumberField::gaussian();
        let x = vec![
            FieldElement::from_ints(&[1, 1]),
            FieldElement::from_ints(&[2, 0]),
        ];
        let c = canonicalize(&g, &x).unwrap();
        // (1+i : 2) = (1 : 1-i), already unit content
        assert_eq!(
            c,
            vec![
                FieldElement::from_ints(&[1, 0]),
                FieldElement::from_ints(&[1, -1])
            ]
        );
        let y: Vec<FieldElement> = x
            .iter()
            .map(|c| g.mul(c, &FieldElement::from_ints(&[3, -7])))
            .collect();
        assert_eq!(canonicalize(&g, &y).unwrap(), c);
        let q = NumberField::rationals();
        let p = ProjectivePoint::new(
            &q,
            &[
                FieldElement::from_ints(&[-4]),
                FieldElement::from_ints(&[6]),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "([2]:[-3])");
    }
}
