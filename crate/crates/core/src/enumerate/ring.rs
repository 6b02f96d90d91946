//! Machine-integer arithmetic in the ring of integers of `Q` or of an
//! imaginary quadratic field, for the enumeration inner loops.
//!
//! Elements are `[a, b]` meaning `a + b*omega` in an integral basis
//! `{1, omega}` (for `Q`, `b` is always zero).

use super::EnumError;
use crate::arith::{isqrt, Rat};
use crate::nfcore::{FieldElement, NumberField};
use crate::poly::Poly;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Elem = [i64; 2];

#[derive(Clone, Debug)]
pub struct IntRing {
    pub deg: usize,
    /// `omega^2 = c0 + c1*omega`.
    c0: i64,
    c1: i64,
    /// Trace and norm of `omega`.
    tr: i64,
    nm: i64,
    /// Sector test: `R = ra*a + rb*b`, `S = sb*b` are positive multiples of
    /// the real and imaginary parts.
    ra: i64,
    rb: i64,
    sb: i64,
    disc_abs: i64,
    pub w: usize,
    pub units: Vec<Elem>,
}

fn small(r: &Rat) -> Result<i64, EnumError> {
    if !r.is_integer() {
        return Err(EnumError::UnsupportedField(
            "non-integral structure constants".into(),
        ));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| EnumError::UnsupportedField("structure constants too large".into()))
}

impl IntRing {
    pub fn new(f: &NumberField) -> Result<IntRing, EnumError> {
        if f.class_number() != 1 {
            return Err(EnumError::UnsupportedField(
                "class number is not one".into(),
            ));
        }
        if f.is_rational() {
            return Ok(IntRing {
                deg: 1,
                c0: 0,
                c1: 0,
                tr: 0,
                nm: 0,
                ra: 1,
                rb: 0,
                sb: 0,
                disc_abs: 1,
                w: 2,
                units: vec![[1, 0], [-1, 0]],
            });
        }
        if !f.is_imaginary_quadratic() {
            return Err(EnumError::UnsupportedField(format!(
                "{} has an infinite unit group",
                f.name()
            )));
        }
        if f.one().coords != vec![Rat::one(), Rat::zero()] {
            return Err(EnumError::UnsupportedField(
                "integral basis must start with 1".into(),
            ));
        }
        let omega = FieldElement::new(vec![Rat::zero(), Rat::one()]);
        let sq = f.mul(&omega, &omega);
        let (p, q) = f.quadratic_pq().expect("quadratic");
        let pw = f.to_powers(&omega);
        // omega = e + g*theta; 2r = 2a + b(2e - p g), 2s = b g.
        let p = Rat::from_integer(p);
        let two = Rat::from_integer(2.into());
        let rb = &two * &pw[0] - &p * &pw[1];
        let sb = pw[1].clone();
        let l = Rat::from_integer(rb.denom().lcm(sb.denom()));
        let d_theta = &p * &p - Rat::from_integer(q) * Rat::from_integer(4.into());
        let mut ring = IntRing {
            deg: 2,
            c0: small(&sq.coords[0])?,
            c1: small(&sq.coords[1])?,
            tr: small(&f.trace(&omega))?,
            nm: small(&f.norm(&omega))?,
            ra: small(&(&two * &l))?,
            rb: small(&(&rb * &l))?,
            sb: small(&(&sb * &l))?,
            disc_abs: small(&d_theta.abs())?,
            w: f.roots_of_unity() as usize,
            units: Vec::new(),
        };
        if ring.sb < 0 {
            ring.sb = -ring.sb;
        }
        let units: Vec<Elem> = ring
            .elements_up_to(1)
            .into_iter()
            .filter(|z| ring.size(z) == 1)
            .collect();
        if units.len() != ring.w {
            return Err(EnumError::UnsupportedField(
                "unit count disagrees with w".into(),
            ));
        }
        ring.units = units;
        Ok(ring)
    }

    /// The archimedean size: `|a|` over `Q`, the norm over a quadratic field.
    #[inline]
    pub fn size(&self, z: &Elem) -> u64 {
        if self.deg == 1 {
            z[0].unsigned_abs()
        } else {
            let (a, b) = (z[0] as i128, z[1] as i128);
            (a * a + a * b * self.tr as i128 + b * b * self.nm as i128) as u64
        }
    }

    #[inline]
    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        if self.deg == 1 {
            return [x[0] * y[0], 0];
        }
        let bd = x[1] * y[1];
        [
            x[0] * y[0] + bd * self.c0,
            x[0] * y[1] + x[1] * y[0] + bd * self.c1,
        ]
    }

    #[inline]
    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        [x[0] + y[0], x[1] + y[1]]
    }

    /// `z * omega`.
    #[inline]
    fn times_omega(&self, z: &Elem) -> Elem {
        [z[1] * self.c0, z[0] + z[1] * self.c1]
    }

    #[inline]
    pub fn in_sector(&self, z: &Elem) -> bool {
        if self.deg == 1 {
            return z[0] > 0;
        }
        let r = self.ra as i128 * z[0] as i128 + self.rb as i128 * z[1] as i128;
        let s = self.sb as i128 * z[1] as i128;
        match self.w {
            2 => s > 0 || (s == 0 && r > 0),
            4 => r > 0 && s >= 0,
            6 => s >= 0 && r > 0 && s * s * (self.disc_abs as i128) < 3 * r * r,
            _ => false,
        }
    }

    /// All elements (including zero) of size at most `bound`, sorted by size
    /// and then coordinates.
    pub fn elements_up_to(&self, bound: u64) -> Vec<Elem> {
        let mut out = Vec::new();
        if self.deg == 1 {
            let b = bound as i64;
            for a in -b..=b {
                out.push([a, 0]);
            }
        } else {
            // N(a + b omega) = ((2a + b tr)^2 + b^2 (4 nm - tr^2)) / 4
            let delta = (4 * self.nm - self.tr * self.tr) as u128;
            let four_b = 4 * bound as u128;
            let bmax = isqrt(four_b / delta) as i64;
            for b in -bmax..=bmax {
                let rest = four_b - (b as i128 * b as i128) as u128 * delta;
                let r = isqrt(rest) as i64;
                let lo = Integer::div_floor(&(-b * self.tr - r), &2) - 1;
                let hi = Integer::div_floor(&(-b * self.tr + r), &2) + 1;
                for a in lo..=hi {
                    let z = [a, b];
                    if self.size(&z) <= bound {
                        out.push(z);
                    }
                }
            }
        }
        out.sort_by_key(|z| (self.size(z), *z));
        out
    }

    pub fn to_field(&self, z: &Elem) -> FieldElement {
        if self.deg == 1 {
            FieldElement::from_ints(&[z[0]])
        } else {
            FieldElement::from_ints(z)
        }
    }

    pub fn from_field(&self, x: &FieldElement) -> Option<Elem> {
        let c = x.int_coords()?;
        Some(if self.deg == 1 {
            [c[0], 0]
        } else {
            [c[0], c[1]]
        })
    }

    /// Adds the generator `z` to an ideal lattice.
    #[inline]
    pub fn ideal_add(&self, lat: &mut IdealLattice, z: &Elem) {
        if z[0] == 0 && z[1] == 0 {
            return;
        }
        if self.deg == 1 {
            lat.a = lat.a.gcd(&z[0]);
            lat.c = 1;
            return;
        }
        lat.add_row(z[0], z[1]);
        let zw = self.times_omega(z);
        lat.add_row(zw[0], zw[1]);
    }

    pub fn content(&self, zs: &[Elem]) -> IdealLattice {
        let mut lat = IdealLattice::zero();
        for z in zs {
            self.ideal_add(&mut lat, z);
        }
        lat
    }

    /// Whether `(z) + I` is the unit ideal.
    #[inline]
    pub fn coprime(&self, lat: &IdealLattice, z: &Elem) -> bool {
        let mut l = *lat;
        self.ideal_add(&mut l, z);
        l.is_unit()
    }

    /// Canonical representative of the unit orbit of a nonzero tuple: the
    /// unit that moves the first nonzero coordinate into the sector.
    pub fn normalize(&self, zs: &mut [Elem]) {
        let Some(lead) = zs.iter().find(|z| z[0] != 0 || z[1] != 0).copied() else {
            return;
        };
        let u = *self
            .units
            .iter()
            .find(|u| self.in_sector(&self.mul(u, &lead)))
            .expect("sector meets every orbit");
        for z in zs.iter_mut() {
            *z = self.mul(&u, z);
        }
    }
}

/// A sublattice of `Z^2` (or of `Z` when `c == 1` over `Q`) in Hermite form
/// `Z(a, b) + Z(0, c)`. An empty lattice has `a == 0 && c == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealLattice {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl IdealLattice {
    pub fn zero() -> Self {
        IdealLattice { a: 0, b: 0, c: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.c == 0
    }

    pub fn norm(&self) -> u64 {
        (self.a as i128 * self.c as i128).unsigned_abs() as u64
    }

    pub fn is_unit(&self) -> bool {
        self.a == 1 && self.c == 1
    }

    pub(crate) fn add_row(&mut self, x: i64, y: i64) {
        let (x, y) = (x as i128, y as i128);
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (na, nb, nc);
        if x == 0 {
            na = a;
            nb = b;
            nc = c.gcd(&y);
        } else if a == 0 {
            let s = if x < 0 { -1 } else { 1 };
            na = x * s;
            nb = y * s;
            nc = c;
        } else {
            let (g, u, v) = ext_gcd(a, x);
            na = g;
            nb = u * b + v * y;
            let t = (x / g) * b - (a / g) * y;
            nc = c.gcd(&t);
        }
        self.a = na as i64;
        self.c = nc as i64;
        self.b = if nc > 0 {
            nb.rem_euclid(nc) as i64
        } else {
            nb as i64
        };
    }
}

/// A polynomial with coefficients in the ring of integers, evaluated on
/// machine integers. Rational coefficients are cleared first, which does not
/// change the zero set.
#[derive(Clone, Debug)]
pub struct IntPoly {
    terms: Vec<(Vec<u32>, Elem)>,
}

impl IntPoly {
    pub fn new(ring: &IntRing, p: &Poly) -> Result<IntPoly, EnumError> {
        let mut den = num_bigint::BigInt::one();
        for c in p.terms.values() {
            for x in &c.coords {
                den = den.lcm(x.denom());
            }
        }
        let scale = Rat::from_integer(den);
        let mut terms = Vec::new();
        for (m, c) in &p.terms {
            let e = ring
                .from_field(&c.scale(&scale))
                .ok_or_else(|| EnumError::InvalidTask("coefficient too large".into()))?;
            terms.push((m.clone(), e));
        }
        Ok(IntPoly { terms })
    }

    pub fn eval(&self, ring: &IntRing, x: &[Elem]) -> Elem {
        let mut acc: Elem = [0, 0];
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = ring.mul(&t, &x[i]);
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    pub fn vanishes(&self, ring: &IntRing, x: &[Elem]) -> bool {
        let v = self.eval(ring, x);
        v[0] == 0 && v[1] == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_ring() {
        let f = NumberField::gaussian();
        let r = IntRing::new(&f).unwrap();
        assert_eq!(r.units.len(), 4);
        assert_eq!(r.size(&[1, 1]), 2);
        assert_eq!(r.mul(&[0, 1], &[0, 1]), [-1, 0]);
        let els = r.elements_up_to(1);
        assert_eq!(els.len(), 5);
        let c = r.content(&[[1, 1], [2, 0]]);
        assert_eq!(c.norm(), 2);
        assert!(r.content(&[[2, 1], [1, 0]]).is_unit());
        assert!(!r.coprime(&r.content(&[[1, 1]]), &[2, 0]));
        // sector agrees with the exact test
        for z in r.elements_up_to(30) {
            let fe = r.to_field(&z);
            assert_eq!(
                r.in_sector(&z),
                crate::heights::in_canonical_sector(&f, &fe),
                "{z:?}"
            );
        }
        let e = NumberField::eisenstein();
        let r = IntRing::new(&e).unwrap();
        assert_eq!(r.units.len(), 6);
        for z in r.elements_up_to(30) {
            let fe = r.to_field(&z);
            assert_eq!(
                r.in_sector(&z),
                crate::heights::in_canonical_sector(&e, &fe),
                "{z:?}"
            );
            assert_eq!(
                r.size(&z) as i64,
                e.norm(&fe).to_integer().to_i64().unwrap()
            );
        }
    }

    #[test]
    fn content_matches_exact() {
        let f = NumberField::eisenstein();
        let r = IntRing::new(&f).unwrap();
        let els = r.elements_up_to(7);
        for x in &els {
            for y in &els {
                if x == &[0, 0] && y == &[0, 0] {
                    continue;
                }
                let exact =
                    crate::nfcore::content_ideal_norm(&f, &[r.to_field(x), r.to_field(y)]).unwrap();
                assert_eq!(Rat::from_integer(r.content(&[*x, *y]).norm().into()), exact);
            }
        }
    }
}
