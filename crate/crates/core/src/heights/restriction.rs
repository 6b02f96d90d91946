//! Heights on Weil restrictions.
//!
//! The norm metric on `Res L` is defined so that the height of an `E`-point
//! `y` is the height over `F` of its image `p(y)`. [`restriction_height`]
//! evaluates exactly that. [`restriction_height_base_side`] reaches the same
//! number without leaving `E`: the content ideal is the Z-span of the
//! products `x_i * alpha_j` computed with the extension's own table, and the
//! archimedean factor is the norm form.

use super::{height, ArchNorm, Height, HeightError, MetrizedBundle};
use crate::arith::Rat;
use crate::linalg::hnf;
use crate::nfcore::FieldElement;
use crate::weilres::{CompiledRestriction, ExtensionData, QuadricModel};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `H_{Res L}(y) = H_L(p(y))` for a point `y` of a chart.
pub fn restriction_height(
    c: &CompiledRestriction,
    chart: usize,
    y: &[FieldElement],
    m: &MetrizedBundle,
) -> Result<Height, HeightError> {
    let x = c.point_up(chart, y)?;
    height(&c.ext.top, &x, m)
}

/// Height of the point with cone coordinates `z` (`d` base coordinates per
/// coordinate over `F`), computed from base-field data only. Requires
/// `E = Q`, an integral `alpha`-basis, max norms, and `F` equal to `Q` or
/// imaginary quadratic.
pub fn restriction_height_base_side(
    ext: &ExtensionData,
    z: &[FieldElement],
    m: &MetrizedBundle,
) -> Result<Height, HeightError> {
    let d = ext.degree();
    if !ext.base.is_rational() || !ext.is_integral_basis() {
        return Err(HeightError::Unsupported(
            "base-side heights need E = Q and an integral basis".into(),
        ));
    }
    if !(ext.top.is_rational() || ext.top.is_imaginary_quadratic()) {
        return Err(HeightError::Unsupported(
            "base-side heights need F = Q or imaginary quadratic".into(),
        ));
    }
    if m.norms.iter().any(|n| *n != ArchNorm::Max) {
        return Err(HeightError::Unsupported(
            "base-side heights use max norms".into(),
        ));
    }
    if z.len() != d * m.num_coords() {
        return Err(HeightError::DimensionMismatch("cone coordinates".into()));
    }
    let mut h = Height::one();
    let mut start = 0;
    for fac in &m.factors {
        let block: Vec<&[FieldElement]> = (0..=fac.dim)
            .map(|i| &z[(start + i) * d..(start + i + 1) * d])
            .collect();
        start += fac.dim + 1;
        if block.iter().all(|c| c.iter().all(|x| x.is_zero())) {
            return Err(HeightError::AllZero);
        }
        let mut den = BigInt::one();
        for c in &block {
            for x in c.iter() {
                den = den.lcm(x.coords[0].denom());
            }
        }
        let mut rows = Vec::new();
        let mut arch = Rat::zero();
        for c in &block {
            arch = arch.max(ext.norm_coords(c)?.coords[0].abs());
            for j in 0..d {
                let row: Vec<BigInt> = (0..d)
                    .map(|l| {
                        let mut s = Rat::zero();
                        for (k, x) in c.iter().enumerate() {
                            s += &x.coords[0] * &ext.table[k][j][l].coords[0];
                        }
                        (s * Rat::from_integer(den.clone())).to_integer()
                    })
                    .collect();
                rows.push(row);
            }
        }
        let hm = hnf(&rows);
        let det: BigInt = (0..d).map(|i| hm[i][i].clone()).product::<BigInt>().abs();
        let content = Rat::new(det, num_traits::pow(den, d));
        if fac.degree != 0 {
            h = h.mul(&Height::rational(arch / content).powi(fac.degree));
        }
    }
    Ok(h)
}

/// `log(H_{P^3}(u) / H_{Res O(1)}(u))` for a point `u` of the quadric model,
/// where the restriction height is taken with the bundle `m` on `P^1` over `F`.
pub fn ambient_height_ratio(
    model: &QuadricModel,
    u: &[FieldElement],
    m: &MetrizedBundle,
) -> Result<f64, HeightError> {
    let ambient = height(&model.ext.base, u, &MetrizedBundle::o1(3))?;
    let x = model.from_quadric(u)?;
    let restricted = height(&model.ext.top, &x, m)?;
    Ok(ambient.ln() - restricted.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::nfcore::NumberField;
    use crate::weilres::{res_p1_quadric, restrict_projective, PolynomialSystem};

    #[test]
    fn restriction_heights_agree() {
        let f = NumberField::gaussian();
        let ext = ExtensionData::over_rationals(&f);
        let c = restrict_projective(&PolynomialSystem::projective_space(&f, 1), &ext).unwrap();
        let m = MetrizedBundle::o1(1);
        let q = |v: &[i64]| {
            v.iter()
                .map(|&a| FieldElement::from_ints(&[a]))
                .collect::<Vec<_>>()
        };
        // p(y) = (1 : i)
        assert_eq!(
            restriction_height(&c, 0, &q(&[0, 1]), &m).unwrap(),
            Height::one()
        );
        // p(y) = (1+i : 1) lives in chart 1
        assert_eq!(
            restriction_height(&c, 1, &q(&[1, 1]), &m).unwrap(),
            Height::rational(rat(2))
        );
        for x in [
            [[1, 1], [1, 0]],
            [[2, 0], [1, 1]],
            [[3, -1], [0, 5]],
            [[6, 2], [4, 0]],
        ] {
            let xs: Vec<FieldElement> = x.iter().map(|v| FieldElement::from_ints(v)).collect();
            let z = c.cone_down(&xs);
            assert_eq!(
                restriction_height_base_side(&ext, &z, &m).unwrap(),
                height(&f, &xs, &m).unwrap()
            );
        }
        let t = ExtensionData::trivial(&NumberField::rationals());
        let ct = restrict_projective(&PolynomialSystem::projective_space(&t.top, 1), &t).unwrap();
        assert_eq!(
            restriction_height(&ct, 0, &q(&[5]), &m).unwrap(),
            Height::rational(rat(5))
        );
    }

    #[test]
    fn quadric_ratio() {
        let f = NumberField::gaussian();
        let model = res_p1_quadric(&ExtensionData::over_rationals(&f)).unwrap();
        let m = MetrizedBundle::o1(1);
        let u = model.to_quadric(&[f.one(), f.zero()]).unwrap();
        assert_eq!(ambient_height_ratio(&model, &u, &m).unwrap(), 0.0);
        let u = model.to_quadric(&[f.one(), f.one()]).unwrap();
        assert!(ambient_height_ratio(&model, &u, &m).unwrap().abs() <= 2f64.ln());
    }
}
