use super::{Ambient, ExtensionData, PolynomialSystem, WeilError};
use crate::nfcore::FieldElement;
use crate::poly::{var_names, Poly};

/// `Res P^1` for a quadratic extension, embedded in `P^3` over `E` as the
/// quadric `u0*u3 = q(u1, u2)` with `q` the norm form of the extension.
#[derive(Clone, Debug)]
pub struct QuadricModel {
    pub ext: ExtensionData,
    pub system: PolynomialSystem,
    pub norm_form: Poly,
}

/// Builds the quadric model of `Res P^1`.
pub fn res_p1_quadric(ext: &ExtensionData) -> Result<QuadricModel, WeilError> {
    if ext.degree() != 2 {
        return Err(WeilError::NotQuadratic);
    }
    let e = &ext.base;
    let names = var_names("u", 4);
    let q4 = ext.norm_form_poly(4, 1);
    let lhs = Poly::var(e, 0, 4).mul(e, &Poly::var(e, 3, 4));
    let system = PolynomialSystem::new(
        e.clone(),
        names,
        vec![lhs.sub(&q4)],
        Vec::new(),
        Ambient::Projective(vec![4]),
    )?;
    Ok(QuadricModel {
        ext: ext.clone(),
        system,
        norm_form: ext.norm_form_poly(2, 0),
    })
}

impl QuadricModel {
    /// `(x0 : x1) -> (N x0 : c1 : c2 : N x1)` where `x0 * conj(x1) = c1 alpha_1 + c2 alpha_2`.
    pub fn to_quadric(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>, WeilError> {
        if x.len() != 2 || (x[0].is_zero() && x[1].is_zero()) {
            return Err(WeilError::NotOnVariety(
                "expected a nonzero point of P^1".into(),
            ));
        }
        let f = &self.ext.top;
        let w = f.mul(&x[0], &self.ext.conj(&x[1])?);
        let c = self.ext.decompose(&w);
        Ok(vec![
            self.ext.relative_norm(&x[0]),
            c[0].clone(),
            c[1].clone(),
            self.ext.relative_norm(&x[1]),
        ])
    }

    /// Inverse of [`Self::to_quadric`] on the quadric.
    pub fn from_quadric(&self, u: &[FieldElement]) -> Result<Vec<FieldElement>, WeilError> {
        if u.len() != 4 || u.iter().all(|c| c.is_zero()) || !self.system.contains(u) {
            return Err(WeilError::NotOnVariety("not a point of the quadric".into()));
        }
        let f = &self.ext.top;
        if u[3].is_zero() {
            return Ok(vec![f.one(), f.zero()]);
        }
        let w = self.ext.combine(&u[1..3]);
        Ok(vec![w, self.ext.embed_base(&u[3])])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfcore::NumberField;

    #[test]
    fn quadric_equations() {
        let names = var_names("u", 4);
        let g = res_p1_quadric(&ExtensionData::over_rationals(&NumberField::gaussian())).unwrap();
        assert_eq!(
            g.system.equations[0].to_text(&names),
            "-1*u2^2 + -1*u1^2 + 1*u0*u3"
        );
        let e = res_p1_quadric(&ExtensionData::over_rationals(&NumberField::eisenstein())).unwrap();
        assert_eq!(
            e.system.equations[0].to_text(&names),
            "-1*u2^2 + 1*u1*u2 + -1*u1^2 + 1*u0*u3"
        );
        let q = NumberField::rationals();
        assert!(matches!(
            res_p1_quadric(&ExtensionData::trivial(&q)),
            Err(WeilError::NotQuadratic)
        ));
    }

    #[test]
    fn point_maps_round_trip() {
        let f = NumberField::gaussian();
        let m = res_p1_quadric(&ExtensionData::over_rationals(&f)).unwrap();
        let u = m.to_quadric(&[f.one(), f.zero()]).unwrap();
        assert_eq!(
            u,
            vec![
                FieldElement::from_ints(&[1]),
                FieldElement::from_ints(&[0]),
                FieldElement::from_ints(&[0]),
                FieldElement::from_ints(&[0])
            ]
        );
        for (a, b) in [([1, 1], [2, -1]), ([0, 3], [1, 0]), ([5, 2], [0, 0])] {
            let x = vec![FieldElement::from_ints(&a), FieldElement::from_ints(&b)];
            let u = m.to_quadric(&x).unwrap();
            assert!(m.system.contains(&u));
            let back = m.from_quadric(&u).unwrap();
            // proportional: x0*back1 == x1*back0
            assert_eq!(f.mul(&x[0], &back[1]), f.mul(&x[1], &back[0]));
        }
    }
}
