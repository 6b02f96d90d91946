//! Restriction of scalars for polynomial systems.
//!
//! Given a finite extension `F/E` with basis `alpha_1..alpha_d`, every
//! variable `x_j` over `F` is replaced by `sum_i alpha_i x_{j,i}` with
//! `x_{j,i}` over `E`; expanding with the multiplication table and reading
//! off the `alpha`-coordinates turns each equation over `F` into `d`
//! equations over `E`. Projective inputs are compiled chart by chart. For
//! quadratic extensions the restriction of the projective line also has an
//! explicit model as a quadric surface in `P^3`.

mod extension;
mod quadric;

pub use extension::ExtensionData;
pub use quadric::{res_p1_quadric, QuadricModel};

use crate::nfcore::{FieldElement, NfError, NumberField};
use crate::poly::Poly;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("inconsistent extension table: {0}")]
    InconsistentExtensionTable(String),
    #[error("point is not on the variety: {0}")]
    NotOnVariety(String),
    #[error("extension is not quadratic")]
    NotQuadratic,
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error(transparent)]
    Field(#[from] NfError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Affine,
    /// Product of projective spaces; entries are the numbers of homogeneous
    /// coordinates in each factor (`n_b + 1`).
    Projective(Vec<usize>),
}

/// Equations and open-subset conditions over a number field.
#[derive(Clone, Debug)]
pub struct PolynomialSystem {
    pub field: NumberField,
    pub vars: Vec<String>,
    pub equations: Vec<Poly>,
    /// The open subset is where none of these vanish.
    pub nonvanishing: Vec<Poly>,
    pub ambient: Ambient,
}

impl PolynomialSystem {
    pub fn new(
        field: NumberField,
        vars: Vec<String>,
        equations: Vec<Poly>,
        nonvanishing: Vec<Poly>,
        ambient: Ambient,
    ) -> Result<Self, WeilError> {
        let nv = vars.len();
        for p in equations.iter().chain(&nonvanishing) {
            if p.nvars != nv || p.terms.keys().any(|m| m.len() != nv) {
                return Err(WeilError::InvalidSystem(
                    "exponent vector length mismatch".into(),
                ));
            }
        }
        let sys = PolynomialSystem {
            field,
            vars,
            equations,
            nonvanishing,
            ambient,
        };
        if let Ambient::Projective(b) = &sys.ambient {
            if b.iter().sum::<usize>() != nv || b.contains(&0) {
                return Err(WeilError::InvalidSystem(
                    "block sizes do not match variables".into(),
                ));
            }
            let blocks = sys.blocks();
            for p in sys.equations.iter().chain(&sys.nonvanishing) {
                if !p.is_multihomogeneous(&blocks) {
                    return Err(WeilError::InvalidSystem(
                        "projective polynomials must be homogeneous in each block".into(),
                    ));
                }
            }
        }
        Ok(sys)
    }

    /// Projective space `P^n` with no equations.
    pub fn projective_space(field: &NumberField, n: usize) -> Self {
        Self::new(
            field.clone(),
            crate::poly::var_names("x", n + 1),
            Vec::new(),
            Vec::new(),
            Ambient::Projective(vec![n + 1]),
        )
        .expect("valid projective space")
    }

    pub fn blocks(&self) -> Vec<Range<usize>> {
        match &self.ambient {
            Ambient::Affine => vec![0..self.vars.len()],
            Ambient::Projective(b) => {
                let mut start = 0;
                b.iter()
                    .map(|&k| {
                        let r = start..start + k;
                        start += k;
                        r
                    })
                    .collect()
            }
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self.ambient, Ambient::Projective(_))
    }

    /// Whether a tuple of `F`-values satisfies all equations and lies in the
    /// open subset.
    pub fn contains(&self, x: &[FieldElement]) -> bool {
        self.equations
            .iter()
            .all(|p| p.eval(&self.field, x).is_zero())
            && self
                .nonvanishing
                .iter()
                .all(|p| !p.eval(&self.field, x).is_zero())
    }
}

/// One affine chart of a compiled restriction.
#[derive(Clone, Debug)]
pub struct Chart {
    /// Source variables fixed to 1 in this chart (one per projective block).
    pub fixed: Vec<usize>,
    /// Source variables that remain free, in source order.
    pub free: Vec<usize>,
    /// Names of the variables over `E`: `d` per free source variable.
    pub vars: Vec<String>,
    pub equations: Vec<Poly>,
    /// Each group compiles one non-vanishing condition: the point is allowed
    /// when not all polynomials of the group vanish.
    pub nonvanishing: Vec<Vec<Poly>>,
}

impl Chart {
    pub fn num_variables(&self) -> usize {
        self.vars.len()
    }
    pub fn num_fixed(&self) -> usize {
        self.fixed.len()
    }

    pub fn contains(&self, e: &NumberField, y: &[FieldElement]) -> bool {
        self.equations.iter().all(|p| p.eval(e, y).is_zero())
            && self
                .nonvanishing
                .iter()
                .all(|g| g.iter().any(|p| !p.eval(e, y).is_zero()))
    }
}

/// A restricted system over `E` together with the point maps.
#[derive(Clone, Debug)]
pub struct CompiledRestriction {
    pub ext: ExtensionData,
    pub source: PolynomialSystem,
    pub charts: Vec<Chart>,
    /// The restriction of the affine cone over a projective system (or of the
    /// system itself when affine); used for sweeps over integral tuples.
    pub cone: Chart,
}

enum Slot {
    Fixed,
    Free(usize),
}

/// Expands a polynomial over `F` into its `d` coordinate polynomials over `E`.
fn expand(ext: &ExtensionData, p: &Poly, slots: &[Slot], nfree: usize) -> Vec<Poly> {
    let d = ext.degree();
    let e = &ext.base;
    let nv = d * nfree;
    let const_vec = |c: &FieldElement| -> Vec<Poly> {
        ext.decompose(c)
            .into_iter()
            .map(|x| Poly::constant(x, nv))
            .collect()
    };
    let var_vec = |j: usize| -> Vec<Poly> { (0..d).map(|i| Poly::var(e, j * d + i, nv)).collect() };
    let one = ext.top.one();
    let mut power_cache: BTreeMap<(usize, u32), Vec<Poly>> = BTreeMap::new();
    let mut total: Vec<Poly> = vec![Poly::zero(nv); d];
    for (m, c) in &p.terms {
        let mut acc = const_vec(c);
        for (j, &ex) in m.iter().enumerate() {
            if ex == 0 {
                continue;
            }
            let factor = match slots[j] {
                Slot::Fixed => continue,
                Slot::Free(k) => power_cache
                    .entry((k, ex))
                    .or_insert_with(|| {
                        let mut r = const_vec(&one);
                        let v = var_vec(k);
                        for _ in 0..ex {
                            r = ext.mul_vec(&r, &v);
                        }
                        r
                    })
                    .clone(),
            };
            acc = ext.mul_vec(&acc, &factor);
        }
        for (t, a) in total.iter_mut().zip(acc) {
            *t = t.add(&a);
        }
    }
    total
}

fn compile_chart(ext: &ExtensionData, sys: &PolynomialSystem, fixed: Vec<usize>) -> Chart {
    let d = ext.degree();
    let nv = sys.vars.len();
    let free: Vec<usize> = (0..nv).filter(|j| !fixed.contains(j)).collect();
    let slots: Vec<Slot> = (0..nv)
        .map(|j| match free.iter().position(|&k| k == j) {
            Some(k) => Slot::Free(k),
            None => Slot::Fixed,
        })
        .collect();
    let vars = free
        .iter()
        .flat_map(|&j| (0..d).map(move |i| (j, i)))
        .map(|(j, i)| format!("{}_{}", sys.vars[j], i))
        .collect();
    let mut equations = Vec::new();
    for p in &sys.equations {
        equations.extend(expand(ext, p, &slots, free.len()));
    }
    let nonvanishing = sys
        .nonvanishing
        .iter()
        .map(|p| expand(ext, p, &slots, free.len()))
        .collect();
    Chart {
        fixed,
        free,
        vars,
        equations,
        nonvanishing,
    }
}

fn check_source(ext: &ExtensionData, sys: &PolynomialSystem) -> Result<(), WeilError> {
    if sys.field != ext.top {
        return Err(WeilError::InvalidSystem(
            "system is not defined over the top field of the extension".into(),
        ));
    }
    Ok(())
}

/// Restriction of an affine system.
pub fn restrict_affine(
    sys: &PolynomialSystem,
    ext: &ExtensionData,
) -> Result<CompiledRestriction, WeilError> {
    check_source(ext, sys)?;
    let chart = compile_chart(ext, sys, Vec::new());
    Ok(CompiledRestriction {
        ext: ext.clone(),
        source: sys.clone(),
        charts: vec![chart.clone()],
        cone: chart,
    })
}

/// Restriction of a (multi)projective system, one compiled affine system per
/// standard chart.
pub fn restrict_projective(
    sys: &PolynomialSystem,
    ext: &ExtensionData,
) -> Result<CompiledRestriction, WeilError> {
    check_source(ext, sys)?;
    if !sys.is_projective() {
        return Err(WeilError::InvalidSystem(
            "expected a projective system".into(),
        ));
    }
    let blocks = sys.blocks();
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for b in &blocks {
        let mut next = Vec::new();
        for c in &choices {
            for k in b.clone() {
                let mut c2 = c.clone();
                c2.push(k);
                next.push(c2);
            }
        }
        choices = next;
    }
    let charts = choices
        .into_iter()
        .map(|fixed| compile_chart(ext, sys, fixed))
        .collect();
    let cone = compile_chart(ext, sys, Vec::new());
    Ok(CompiledRestriction {
        ext: ext.clone(),
        source: sys.clone(),
        charts,
        cone,
    })
}

impl CompiledRestriction {
    pub fn chart_index(&self, fixed: &[usize]) -> Option<usize> {
        self.charts.iter().position(|c| c.fixed == fixed)
    }

    /// The map `p`: an `E`-point of a chart to the corresponding `F`-point.
    pub fn point_up(
        &self,
        chart: usize,
        y: &[FieldElement],
    ) -> Result<Vec<FieldElement>, WeilError> {
        let c = self
            .charts
            .get(chart)
            .ok_or_else(|| WeilError::NotOnVariety(format!("no chart {chart}")))?;
        let d = self.ext.degree();
        if y.len() != c.vars.len() {
            return Err(WeilError::NotOnVariety(
                "wrong number of coordinates".into(),
            ));
        }
        if !c.contains(&self.ext.base, y) {
            return Err(WeilError::NotOnVariety(
                "compiled equations do not vanish".into(),
            ));
        }
        let nv = self.source.vars.len();
        let mut x = vec![self.ext.top.zero(); nv];
        for &k in &c.fixed {
            x[k] = self.ext.top.one();
        }
        for (pos, &j) in c.free.iter().enumerate() {
            x[j] = self.ext.combine(&y[pos * d..(pos + 1) * d]);
        }
        if !self.source.contains(&x) {
            return Err(WeilError::NotOnVariety(
                "image does not satisfy the source system".into(),
            ));
        }
        Ok(x)
    }

    /// The inverse map: an `F`-point to its chart and `E`-coordinates. For
    /// projective systems the chart is the one fixing the first nonzero
    /// coordinate of each block.
    pub fn point_down(&self, x: &[FieldElement]) -> Result<(usize, Vec<FieldElement>), WeilError> {
        let f = &self.ext.top;
        if x.len() != self.source.vars.len() {
            return Err(WeilError::NotOnVariety(
                "wrong number of coordinates".into(),
            ));
        }
        if !self.source.contains(x) {
            return Err(WeilError::NotOnVariety(
                "point does not satisfy the source system".into(),
            ));
        }
        let mut xs = x.to_vec();
        let mut fixed = Vec::new();
        if self.source.is_projective() {
            for b in self.source.blocks() {
                let k = b
                    .clone()
                    .find(|&k| !xs[k].is_zero())
                    .ok_or_else(|| WeilError::NotOnVariety("zero block".into()))?;
                let inv = f.inv(&xs[k])?;
                for j in b {
                    xs[j] = f.mul(&xs[j], &inv);
                }
                fixed.push(k);
            }
        }
        let chart = self
            .chart_index(&fixed)
            .ok_or_else(|| WeilError::NotOnVariety("no matching chart".into()))?;
        let c = &self.charts[chart];
        let mut y = Vec::with_capacity(c.vars.len());
        for &j in &c.free {
            y.extend(self.ext.decompose(&xs[j]));
        }
        Ok((chart, y))
    }

    /// Cone coordinates of an `F`-tuple (no normalization).
    pub fn cone_down(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().flat_map(|xi| self.ext.decompose(xi)).collect()
    }

    pub fn cone_up(&self, y: &[FieldElement]) -> Vec<FieldElement> {
        let d = self.ext.degree();
        y.chunks(d).map(|c| self.ext.combine(c)).collect()
    }

    /// Deterministic text dump: variables in source order times basis index,
    /// polynomials with sorted exponent vectors.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "restriction {} -> {} degree {}",
            self.ext.top.name(),
            self.ext.base.name(),
            self.ext.degree()
        );
        let _ = writeln!(out, "source variables: {}", self.source.vars.join(" "));
        let _ = writeln!(out, "source equations: {}", self.source.equations.len());
        let write_chart = |out: &mut String, title: &str, c: &Chart| {
            let fixed: Vec<&str> = c
                .fixed
                .iter()
                .map(|&k| self.source.vars[k].as_str())
                .collect();
            let _ = writeln!(out, "{title} fixed=[{}]", fixed.join(" "));
            let _ = writeln!(out, "  variables: {}", c.vars.join(" "));
            for p in &c.equations {
                let _ = writeln!(out, "  eq: {}", p.to_text(&c.vars));
            }
            for g in &c.nonvanishing {
                let parts: Vec<String> = g.iter().map(|p| p.to_text(&c.vars)).collect();
                let _ = writeln!(out, "  not all zero: {}", parts.join(" ; "));
            }
        };
        for (k, c) in self.charts.iter().enumerate() {
            write_chart(&mut out, &format!("chart {k}"), c);
        }
        write_chart(&mut out, "cone", &self.cone);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var_names;

    fn gaussian_ext() -> ExtensionData {
        ExtensionData::over_rationals(&NumberField::gaussian())
    }

    #[test]
    fn square_root_of_two_example() {
        let ext = gaussian_ext();
        let f = ext.top.clone();
        let names = var_names("x", 1);
        let sys = PolynomialSystem::new(
            f.clone(),
            names.clone(),
            vec![Poly::parse_equation(&f, "x0^2 = 2", &names).unwrap()],
            vec![],
            Ambient::Affine,
        )
        .unwrap();
        let c = restrict_affine(&sys, &ext).unwrap();
        let ch = &c.charts[0];
        assert_eq!(ch.vars, vec!["x0_0", "x0_1"]);
        // a^2 - b^2 - 2 and 2ab
        assert_eq!(
            ch.equations[0].to_text(&ch.vars),
            "-2 + -1*x0_1^2 + 1*x0_0^2"
        );
        assert_eq!(ch.equations[1].to_text(&ch.vars), "2*x0_0*x0_1");
    }

    #[test]
    fn circle_example_and_point_maps() {
        let ext = gaussian_ext();
        let f = ext.top.clone();
        let q = ext.base.clone();
        let names = vec!["x".to_string(), "y".to_string()];
        let sys = PolynomialSystem::new(
            f.clone(),
            names.clone(),
            vec![Poly::parse_equation(&f, "x^2 + y^2 = 1", &names).unwrap()],
            vec![],
            Ambient::Affine,
        )
        .unwrap();
        let c = restrict_affine(&sys, &ext).unwrap();
        let ch = &c.charts[0];
        assert_eq!(
            ch.equations[0].to_text(&ch.vars),
            "-1 + -1*y_1^2 + 1*y_0^2 + -1*x_1^2 + 1*x_0^2"
        );
        assert_eq!(ch.equations[1].to_text(&ch.vars), "2*y_0*y_1 + 2*x_0*x_1");
        let pt = |v: &[i64]| v.iter().map(|&a| q.from_int(a)).collect::<Vec<_>>();
        let good = c.point_up(0, &pt(&[1, 0, 0, 0])).unwrap();
        assert_eq!(good, vec![f.one(), f.zero()]);
        assert!(matches!(
            c.point_up(0, &pt(&[1, 0, 0, 1])),
            Err(WeilError::NotOnVariety(_))
        ));
        let (chart, y) = c.point_down(&good).unwrap();
        assert_eq!(chart, 0);
        assert_eq!(c.point_up(chart, &y).unwrap(), good);
    }

    #[test]
    fn projective_line_charts() {
        let ext = gaussian_ext();
        let sys = PolynomialSystem::projective_space(&ext.top, 1);
        let c = restrict_projective(&sys, &ext).unwrap();
        assert_eq!(c.charts.len(), 2);
        for ch in &c.charts {
            assert_eq!(ch.num_variables(), 2);
            assert!(ch.equations.is_empty());
        }
        let f = &ext.top;
        let x = vec![
            FieldElement::from_ints(&[2, 2]),
            FieldElement::from_ints(&[0, 2]),
        ];
        let (k, y) = c.point_down(&x).unwrap();
        assert_eq!(k, 0);
        let up = c.point_up(k, &y).unwrap();
        // (2+2i : 2i) ~ (1 : i/(1+i)) = (1 : (1+i)/2)
        assert_eq!(up[1], f.div(&x[1], &x[0]).unwrap());
        let p0 = PolynomialSystem::projective_space(f, 0);
        let c0 = restrict_projective(&p0, &ext).unwrap();
        assert_eq!(c0.charts.len(), 1);
        assert_eq!(c0.charts[0].num_variables(), 0);
    }
}
