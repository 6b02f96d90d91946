//! Archimedean factors.
//!
//! For a variety cut out in `P^N` by equations of total degree `r`, with
//! the anticanonical metric induced by a norm on the cone coordinates,
//! `tau_inf = (N + 1 - r)/2 * sigma` at a real place, where `sigma` is the
//! Leray volume `int delta(f) du` of `{f = 0, ||u|| <= 1}`. For `P^n` the
//! Leray volume is the Lebesgue volume of the unit ball, which gives the
//! closed forms below.
//!
//! The Monte Carlo estimate uses homogeneity: the Leray volume of the shell
//! `1/2 < ||u|| <= 1` is `(1 - 2^{-k}) sigma` with `k = N + 1 - r`, and on
//! the shell the gradient of a smooth cone is bounded away from zero. The
//! shell is covered by charts: chart `j` holds the points where `|df/du_j|`
//! is largest, and is integrated by sampling the other coordinates and
//! solving for `u_j` (the co-area formula gives the weight `1/|df/du_j|`).

use super::TamagawaError;
use crate::arith::rat_to_f64;
use crate::weilres::{Ambient, PolynomialSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Kind of archimedean place.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    Real,
    Complex,
}

/// `tau_inf` of `P^n` with the max norm: `(n+1) 2^n` at a real place and
/// `(n+1) (2 pi)^n` at a complex place (twice Lebesgue measure).
pub fn projective_space_archimedean(n: usize, place: PlaceKind) -> f64 {
    let k = (n + 1) as f64;
    match place {
        PlaceKind::Real => k * 2f64.powi(n as i32),
        PlaceKind::Complex => k * (2.0 * PI).powi(n as i32),
    }
}

/// The norm on cone coordinates: the maximum of `|u_i|` over `normed`. The
/// region `||u|| <= 1` on the cone must lie inside the box
/// `|u_i| <= half_widths[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeNorm {
    pub normed: Vec<usize>,
    pub half_widths: Vec<f64>,
}

impl ConeNorm {
    /// Max norm over all `n` coordinates.
    pub fn max_norm(n: usize) -> Self {
        ConeNorm {
            normed: (0..n).collect(),
            half_widths: vec![1.0; n],
        }
    }

    fn value(&self, u: &[f64]) -> f64 {
        self.normed.iter().map(|&i| u[i].abs()).fold(0.0, f64::max)
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct ArchEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

struct FPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl FPoly {
    fn eval(&self, u: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(u)
                    .fold(*c, |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .sum()
    }

    fn derivative(&self, j: usize) -> FPoly {
        FPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[j] > 0)
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2[j] -= 1;
                    (m2, c * m[j] as f64)
                })
                .collect(),
        }
    }

    /// Coefficients in `u_j` with the other coordinates fixed.
    fn univariate(&self, j: usize, u: &[f64]) -> Vec<f64> {
        let deg = self
            .terms
            .iter()
            .map(|(m, _)| m[j] as usize)
            .max()
            .unwrap_or(0);
        let mut c = vec![0.0; deg + 1];
        for (m, coef) in &self.terms {
            let mut v = *coef;
            for (i, (&e, &x)) in m.iter().zip(u).enumerate() {
                if i != j {
                    v *= x.powi(e as i32);
                }
            }
            c[m[j] as usize] += v;
        }
        c
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

/// Real roots of `sum c_i t^i` in `[-b, b]`.
fn roots_in(c: &[f64], b: f64) -> Vec<f64> {
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg] == 0.0 {
        deg -= 1;
    }
    let inside = |t: &f64| t.abs() <= b;
    match deg {
        0 => Vec::new(),
        1 => [-c[0] / c[1]].into_iter().filter(inside).collect(),
        2 => {
            let (a, bb, cc) = (c[2], c[1], c[0]);
            let disc = bb * bb - 4.0 * a * cc;
            if disc < 0.0 {
                return Vec::new();
            }
            let s = disc.sqrt();
            // numerically stable pair
            let sgn = if bb >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (bb + sgn * s);
            let mut r = Vec::new();
            if q != 0.0 {
                r.push(q / a);
                r.push(cc / q);
            } else {
                r.push(0.0);
                if disc > 0.0 {
                    r.push(-bb / a);
                }
            }
            r.into_iter().filter(inside).collect()
        }
        _ => {
            let steps = 256;
            let mut out = Vec::new();
            let mut t0 = -b;
            let mut v0 = horner(c, t0);
            for s in 1..=steps {
                let t1 = -b + 2.0 * b * s as f64 / steps as f64;
                let v1 = horner(c, t1);
                if v0 == 0.0 {
                    out.push(t0);
                } else if v0 * v1 < 0.0 {
                    let (mut lo, mut hi) = (t0, t1);
                    for _ in 0..80 {
                        let mid = 0.5 * (lo + hi);
                        if horner(c, lo) * horner(c, mid) <= 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    out.push(0.5 * (lo + hi));
                }
                t0 = t1;
                v0 = v1;
            }
            if v0 == 0.0 {
                out.push(t0);
            }
            out
        }
    }
}

/// Seeded co-area Monte Carlo estimate of the real-place `tau_inf` of a
/// projective hypersurface (or of projective space when there is no
/// equation) over `Q`.
pub fn archimedean_density_mc(
    sys: &PolynomialSystem,
    norm: &ConeNorm,
    samples: u64,
    seed: u64,
) -> Result<ArchEstimate, TamagawaError> {
    if !sys.field.is_rational() {
        return Err(TamagawaError::Unsupported(
            "Monte Carlo densities are implemented at real places of Q".into(),
        ));
    }
    let Ambient::Projective(blocks) = &sys.ambient else {
        return Err(TamagawaError::Unsupported(
            "archimedean densities need a projective system".into(),
        ));
    };
    if blocks.len() != 1 || sys.equations.len() > 1 {
        return Err(TamagawaError::Unsupported(
            "Monte Carlo densities cover hypersurfaces in a single projective space".into(),
        ));
    }
    let nv = sys.vars.len();
    if norm.half_widths.len() != nv
        || norm.normed.iter().any(|&i| i >= nv)
        || norm.normed.is_empty()
    {
        return Err(TamagawaError::Unsupported(
            "norm does not match the coordinates".into(),
        ));
    }
    if samples == 0 {
        return Err(TamagawaError::Unsupported(
            "at least one sample is needed".into(),
        ));
    }
    let deg = sys
        .equations
        .first()
        .and_then(|p| p.total_degree())
        .unwrap_or(0) as usize;
    let k = nv
        .checked_sub(deg)
        .filter(|&k| k > 0)
        .ok_or_else(|| TamagawaError::Unsupported("the anticanonical class is not ample".into()))?;
    let shell = 1.0 - 0.5f64.powi(k as i32);
    let box_vol: f64 = norm.half_widths.iter().map(|b| 2.0 * b).product();

    let (value, var) = if sys.equations.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0u64;
        for _ in 0..samples {
            let u: Vec<f64> = norm
                .half_widths
                .iter()
                .map(|&b| rng.gen_range(-b..b))
                .collect();
            let r = norm.value(&u);
            if r > 0.5 && r <= 1.0 {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        (
            box_vol * p,
            box_vol * box_vol * p * (1.0 - p) / samples as f64,
        )
    } else {
        let f = FPoly {
            terms: sys.equations[0]
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), rat_to_f64(&c.coords[0])))
                .collect(),
        };
        let grad: Vec<FPoly> = (0..nv).map(|j| f.derivative(j)).collect();
        let per_chart = (samples / nv as u64).max(1);
        let mut total = 0.0;
        let mut var = 0.0;
        for chart in 0..nv {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chart as u64);
            let vol = box_vol / (2.0 * norm.half_widths[chart]);
            let (mut s1, mut s2) = (0.0, 0.0);
            let mut u = vec![0.0; nv];
            for _ in 0..per_chart {
                for (j, x) in u.iter_mut().enumerate() {
                    *x = if j == chart {
                        0.0
                    } else {
                        rng.gen_range(-norm.half_widths[j]..norm.half_widths[j])
                    };
                }
                let coeffs = f.univariate(chart, &u);
                let mut w = 0.0;
                for t in roots_in(&coeffs, norm.half_widths[chart]) {
                    u[chart] = t;
                    let r = norm.value(&u);
                    if r <= 0.5 || r > 1.0 {
                        continue;
                    }
                    let g: Vec<f64> = grad.iter().map(|d| d.eval(&u).abs()).collect();
                    let best = (0..nv).fold(0, |b, j| if g[j] > g[b] { j } else { b });
                    if best != chart {
                        continue;
                    }
                    if g[chart] == 0.0 {
                        return Err(TamagawaError::GradientVanishes(format!("at {u:?}")));
                    }
                    w += vol / g[chart];
                }
                s1 += w;
                s2 += w * w;
            }
            let n = per_chart as f64;
            let mean = s1 / n;
            total += mean;
            var += (s2 / n - mean * mean).max(0.0) / n;
        }
        (total, var)
    };
    let scale = k as f64 / 2.0 / shell;
    Ok(ArchEstimate {
        value: value * scale,
        std_error: var.sqrt() * scale,
        samples,
        seed,
    })
}
