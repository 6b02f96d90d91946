use super::WeilError;
use crate::arith::Rat;
use crate::linalg::{inverse_rat, RatMatrix};
use crate::nfcore::{FieldElement, NfError, NumberField};
use crate::poly::Poly;
use num_traits::{One, Zero};

/// A finite extension `F/E` with a chosen `E`-basis of `F`.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub base: NumberField,
    pub top: NumberField,
    /// The basis `alpha_1..alpha_d` of `F` over `E`, as elements of `F`.
    pub alpha: Vec<FieldElement>,
    /// Images in `F` of the integral basis of `E`.
    pub base_images: Vec<FieldElement>,
    /// `alpha_i * alpha_j = sum_k table[i][j][k] * alpha_k` with coefficients in `E`.
    pub table: Vec<Vec<Vec<FieldElement>>>,
    /// Row `i*e + l` holds the `F`-coordinates of `beta_l * alpha_i`; its
    /// inverse decomposes elements of `F`.
    decomp: RatMatrix,
    integral: bool,
}

fn inconsistent(msg: impl Into<String>) -> WeilError {
    WeilError::InconsistentExtensionTable(msg.into())
}

impl ExtensionData {
    /// Validates and builds extension data.
    pub fn new(
        base: NumberField,
        top: NumberField,
        alpha: Vec<FieldElement>,
        base_images: Vec<FieldElement>,
        table: Vec<Vec<Vec<FieldElement>>>,
    ) -> Result<Self, WeilError> {
        let d = alpha.len();
        let e = base.degree();
        let n = top.degree();
        if d == 0 || d * e != n {
            return Err(inconsistent(format!(
                "degrees do not multiply: [F:Q]={n}, [E:Q]={e}, basis size {d}"
            )));
        }
        if base_images.len() != e
            || alpha
                .iter()
                .chain(&base_images)
                .any(|x| x.coords.len() != n)
        {
            return Err(inconsistent("basis elements have the wrong length"));
        }
        if table.len() != d
            || table.iter().any(|r| {
                r.len() != d
                    || r.iter()
                        .any(|c| c.len() != d || c.iter().any(|x| x.coords.len() != e))
            })
        {
            return Err(inconsistent("multiplication table has the wrong shape"));
        }
        // Embedding of E must be a ring homomorphism.
        let embed = |y: &FieldElement| -> FieldElement {
            let mut acc = top.zero();
            for (c, b) in y.coords.iter().zip(&base_images) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c));
                }
            }
            acc
        };
        if embed(&base.one()) != top.one() {
            return Err(inconsistent("embedding of E does not send 1 to 1"));
        }
        for l in 0..e {
            for m in 0..e {
                let bl = unit(e, l);
                let bm = unit(e, m);
                if top.mul(&base_images[l], &base_images[m]) != embed(&base.mul(&bl, &bm)) {
                    return Err(inconsistent("embedding of E is not multiplicative"));
                }
            }
        }
        let mut rows = Vec::with_capacity(n);
        for a in &alpha {
            for b in &base_images {
                rows.push(top.mul(b, a).coords);
            }
        }
        let decomp = inverse_rat(&rows)
            .ok_or_else(|| inconsistent("basis is not linearly independent over E"))?;
        for i in 0..d {
            for j in 0..d {
                if table[i][j] != table[j][i] {
                    return Err(inconsistent("table is not commutative"));
                }
                let mut rhs = top.zero();
                for k in 0..d {
                    rhs = rhs.add(&top.mul(&embed(&table[i][j][k]), &alpha[k]));
                }
                if top.mul(&alpha[i], &alpha[j]) != rhs {
                    return Err(inconsistent(format!(
                        "table entry ({i},{j}) disagrees with F"
                    )));
                }
            }
        }
        let integral = rows.iter().flatten().all(|c| c.is_integer())
            && decomp.iter().flatten().all(|c| c.is_integer());
        let ext = ExtensionData {
            base,
            top,
            alpha,
            base_images,
            table,
            decomp,
            integral,
        };
        ext.check_associative()?;
        Ok(ext)
    }

    /// `F` over `Q` with the integral basis of `F`.
    pub fn over_rationals(top: &NumberField) -> Self {
        let q = NumberField::rationals();
        let n = top.degree();
        let alpha = (0..n).map(|i| unit(n, i)).collect();
        let mult = top.mult_table();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                FieldElement::new(vec![Rat::from_integer(mult[i][j][k].clone())])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(q, top.clone(), alpha, vec![top.one()], table)
            .expect("integral basis is a valid extension basis")
    }

    /// The trivial extension `F/F`.
    pub fn trivial(f: &NumberField) -> Self {
        let n = f.degree();
        let base_images = (0..n).map(|i| unit(n, i)).collect();
        Self::new(
            f.clone(),
            f.clone(),
            vec![f.one()],
            base_images,
            vec![vec![vec![f.one()]]],
        )
        .expect("trivial extension is valid")
    }

    fn check_associative(&self) -> Result<(), WeilError> {
        let d = self.degree();
        let e = &self.base;
        // (a_i a_j) a_k expressed in the basis, both ways.
        let prod = |x: &[FieldElement], j: usize| -> Vec<FieldElement> {
            let mut out = vec![e.zero(); d];
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = o.add(&e.mul(xi, &self.table[i][j][k]));
                }
            }
            out
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = prod(&self.table[i][j], k);
                    let right = prod(&self.table[j][k], i);
                    if left != right {
                        return Err(inconsistent("table is not associative"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[F:E]`.
    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    /// Whether the products `beta_l * alpha_i` form an integral basis of `F`.
    pub fn is_integral_basis(&self) -> bool {
        self.integral
    }

    pub fn embed_base(&self, y: &FieldElement) -> FieldElement {
        let mut acc = self.top.zero();
        for (c, b) in y.coords.iter().zip(&self.base_images) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// `sum_i alpha_i y_i`.
    pub fn combine(&self, ys: &[FieldElement]) -> FieldElement {
        let mut acc = self.top.zero();
        for (y, a) in ys.iter().zip(&self.alpha) {
            if !y.is_zero() {
                acc = acc.add(&self.top.mul(&self.embed_base(y), a));
            }
        }
        acc
    }

    /// Coordinates of `x` in the `alpha`-basis.
    pub fn decompose(&self, x: &FieldElement) -> Vec<FieldElement> {
        let n = self.top.degree();
        let e = self.base.degree();
        let mut c = vec![Rat::zero(); n];
        for (r, xr) in x.coords.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (s, cs) in c.iter_mut().enumerate() {
                if !self.decomp[r][s].is_zero() {
                    *cs += xr * &self.decomp[r][s];
                }
            }
        }
        c.chunks(e)
            .map(|ch| FieldElement::new(ch.to_vec()))
            .collect()
    }

    /// Product of two vectors of coordinate polynomials.
    pub fn mul_vec(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let d = self.degree();
        let e = &self.base;
        let nv = a.first().map_or(0, |p| p.nvars);
        let mut out = vec![Poly::zero(nv); d];
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b[j].is_zero() {
                    continue;
                }
                let ab = a[i].mul(e, &b[j]);
                for (k, o) in out.iter_mut().enumerate() {
                    let t = &self.table[i][j][k];
                    if !t.is_zero() {
                        *o = o.add(&ab.scale(e, t));
                    }
                }
            }
        }
        out
    }

    /// Matrix over `E` of multiplication by `sum_j alpha_j y_j`: entry
    /// `(i, k)` is the `alpha_k`-coordinate of `x * alpha_i`.
    fn mult_matrix(&self, y: &[FieldElement]) -> Vec<Vec<FieldElement>> {
        let d = self.degree();
        let e = &self.base;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| {
                        let mut s = e.zero();
                        for (j, yj) in y.iter().enumerate() {
                            if !yj.is_zero() {
                                s = s.add(&e.mul(yj, &self.table[j][i][k]));
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    /// Relative norm `N_{F/E}` of an element given by its `alpha`-coordinates.
    pub fn norm_coords(&self, y: &[FieldElement]) -> Result<FieldElement, NfError> {
        det_over(&self.base, self.mult_matrix(y))
    }

    pub fn relative_norm(&self, x: &FieldElement) -> FieldElement {
        self.norm_coords(&self.decompose(x))
            .expect("determinant over a field")
    }

    pub fn relative_trace(&self, x: &FieldElement) -> FieldElement {
        let m = self.mult_matrix(&self.decompose(x));
        let mut s = self.base.zero();
        for (i, row) in m.iter().enumerate() {
            s = s.add(&row[i]);
        }
        s
    }

    /// The nontrivial automorphism of a quadratic extension.
    pub fn conj(&self, x: &FieldElement) -> Result<FieldElement, WeilError> {
        if self.degree() != 2 {
            return Err(WeilError::NotQuadratic);
        }
        Ok(self.embed_base(&self.relative_trace(x)).sub(x))
    }

    /// The norm form as a polynomial over `E` in variables
    /// `offset..offset+d` of an `nv`-variable ring.
    pub fn norm_form_poly(&self, nv: usize, offset: usize) -> Poly {
        let d = self.degree();
        let e = &self.base;
        let m: Vec<Vec<Poly>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| {
                        let mut s = Poly::zero(nv);
                        for j in 0..d {
                            let t = &self.table[j][i][k];
                            if !t.is_zero() {
                                s = s.add(&Poly::var(e, offset + j, nv).scale(e, t));
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let mut total = Poly::zero(nv);
        for (perm, sign) in permutations(d) {
            let mut term = Poly::constant(e.from_int(sign), nv);
            for (i, &k) in perm.iter().enumerate() {
                term = term.mul(e, &m[i][k]);
            }
            total = total.add(&term);
        }
        total
    }
}

fn unit(n: usize, i: usize) -> FieldElement {
    let mut c = vec![Rat::zero(); n];
    c[i] = Rat::one();
    FieldElement::new(c)
}

fn det_over(e: &NumberField, mut m: Vec<Vec<FieldElement>>) -> Result<FieldElement, NfError> {
    let n = m.len();
    let mut det = e.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Ok(e.zero());
        };
        if p != c {
            m.swap(p, c);
            det = det.neg();
        }
        det = e.mul(&det, &m[c][c]);
        let inv = e.inv(&m[c][c])?;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = e.mul(&m[r][c], &inv);
            for k in c..n {
                let t = e.mul(&f, &m[c][k]);
                m[r][k] = m[r][k].sub(&t);
            }
        }
    }
    Ok(det)
}

fn permutations(d: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let d = used.len();
        if prefix.len() == d {
            let mut inv = 0;
            for i in 0..d {
                for j in i + 1..d {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..d {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn decompose_and_norm() {
        let f = NumberField::gaussian();
        let ext = ExtensionData::over_rationals(&f);
        assert!(ext.is_integral_basis());
        let x = FieldElement::from_ints(&[1, 2]);
        let ys = ext.decompose(&x);
        assert_eq!(
            ys,
            vec![FieldElement::from_ints(&[1]), FieldElement::from_ints(&[2])]
        );
        assert_eq!(ext.combine(&ys), x);
        assert_eq!(ext.relative_norm(&x).coords[0], rat(5));
        assert_eq!(ext.conj(&x).unwrap(), FieldElement::from_ints(&[1, -2]));
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(ext.norm_form_poly(2, 0).to_text(&names), "1*b^2 + 1*a^2");
        let e = ExtensionData::over_rationals(&NumberField::eisenstein());
        assert_eq!(
            e.norm_form_poly(2, 0).to_text(&names),
            "1*b^2 + -1*a*b + 1*a^2"
        );
    }

    #[test]
    fn bad_tables_rejected() {
        let f = NumberField::gaussian();
        let q = NumberField::rationals();
        let one = FieldElement::from_ints(&[1]);
        let zero = FieldElement::from_ints(&[0]);
        // claims i*i = +1
        let table = vec![
            vec![
                vec![one.clone(), zero.clone()],
                vec![zero.clone(), one.clone()],
            ],
            vec![
                vec![zero.clone(), one.clone()],
                vec![one.clone(), zero.clone()],
            ],
        ];
        let alpha = vec![f.one(), f.theta()];
        let r = ExtensionData::new(q.clone(), f.clone(), alpha, vec![f.one()], table);
        assert!(matches!(r, Err(WeilError::InconsistentExtensionTable(_))));
        // dependent basis
        let table = vec![vec![vec![one.clone(), zero.clone()]; 2]; 2];
        let r = ExtensionData::new(
            q,
            f.clone(),
            vec![f.one(), f.from_int(2)],
            vec![f.one()],
            table,
        );
        assert!(matches!(r, Err(WeilError::InconsistentExtensionTable(_))));
    }

    #[test]
    fn trivial_extension() {
        let f = NumberField::eisenstein();
        let ext = ExtensionData::trivial(&f);
        let x = FieldElement::from_ints(&[3, -1]);
        assert_eq!(ext.decompose(&x), vec![x.clone()]);
        assert_eq!(ext.relative_norm(&x), x);
    }
}
