//! Least-squares fits of `log N = a log B + (b - 1) log log B + log c`.

use crate::arith::rat_to_f64;
use crate::enumerate::CountSeries;
use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} rungs with B >= 3, got {got}")]
    InsufficientRungs { needed: usize, got: usize },
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
    #[error("count at B = {0} is not positive")]
    NonPositiveCount(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FitMode {
    Free,
    /// `a` pinned, `(b, c)` fitted.
    FixA(f64),
}

/// Values predicted by the geometry, printed next to the fit.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub a: f64,
    pub b: f64,
    pub c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub mode: FitMode,
    pub a: f64,
    pub a_se: f64,
    pub b: f64,
    pub b_se: f64,
    pub c: f64,
    pub c_se: f64,
    /// Indices `[start, end)` of the ladder used.
    pub window: (usize, usize),
    pub window_bounds: (f64, f64),
    /// `(B, N, fitted N, log residual)` on the window.
    pub residuals: Vec<(f64, f64, f64, f64)>,
    pub prediction: Option<Prediction>,
}

impl FitReport {
    pub fn rss(&self) -> f64 {
        self.residuals.iter().map(|r| r.3 * r.3).sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            FitMode::Free => "free".to_string(),
            FitMode::FixA(a) => format!("fix_a({a})"),
        };
        let _ = writeln!(s, "mode = {mode}");
        let _ = writeln!(
            s,
            "window = rungs {}..{} (B = {} .. {})",
            self.window.0, self.window.1, self.window_bounds.0, self.window_bounds.1
        );
        let _ = writeln!(s, "a = {:.6} +- {:.6}", self.a, self.a_se);
        let _ = writeln!(s, "b = {:.6} +- {:.6}", self.b, self.b_se);
        let _ = writeln!(s, "c = {:.6} +- {:.6}", self.c, self.c_se);
        if let Some(p) = &self.prediction {
            let _ = writeln!(s, "predicted a = {}", p.a);
            let _ = writeln!(s, "predicted b = {}", p.b);
            if let Some(c) = p.c {
                let _ = writeln!(s, "predicted c = {c:.6}");
                let _ = writeln!(
                    s,
                    "relative difference in c = {:.6}",
                    (self.c - c).abs() / c
                );
            }
        }
        let _ = writeln!(s, "B,N,fitted,log_residual");
        for (b, n, f, r) in &self.residuals {
            let _ = writeln!(s, "{b},{n},{f:.6},{r:.3e}");
        }
        s
    }
}

/// Fits on the top half of the ladder. `bounds` must be increasing.
pub fn fit_points(bounds: &[f64], counts: &[f64], mode: FitMode) -> Result<FitReport, FitError> {
    let usable = bounds.iter().filter(|&&b| b >= 3.0).count();
    if bounds.len() != counts.len() || usable < 6 {
        return Err(FitError::InsufficientRungs {
            needed: 6,
            got: usable,
        });
    }
    let n = bounds.len();
    let start = n / 2;
    let idx: Vec<usize> = (start..n).filter(|&i| bounds[i] >= 3.0).collect();
    for &i in &idx {
        if counts[i] <= 0.0 {
            return Err(FitError::NonPositiveCount(bounds[i]));
        }
    }
    let k = idx.len();
    let (cols, pinned) = match mode {
        FitMode::Free => (3, None),
        FitMode::FixA(a) => (2, Some(a)),
    };
    let mut x = DMatrix::<f64>::zeros(k, cols);
    let mut y = DVector::<f64>::zeros(k);
    for (r, &i) in idx.iter().enumerate() {
        let lb = bounds[i].ln();
        let llb = lb.ln();
        let ln = counts[i].ln();
        match pinned {
            None => {
                x[(r, 0)] = lb;
                x[(r, 1)] = llb;
                x[(r, 2)] = 1.0;
                y[r] = ln;
            }
            Some(a) => {
                x[(r, 0)] = llb;
                x[(r, 1)] = 1.0;
                y[r] = ln - a * lb;
            }
        }
    }
    let xtx = x.transpose() * &x;
    let svd = xtx.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > smax * 1e-14) {
        return Err(FitError::DegenerateWindow(format!(
            "normal matrix condition {:.3e}",
            smax / smin
        )));
    }
    let inv = xtx
        .try_inverse()
        .ok_or_else(|| FitError::DegenerateWindow("normal matrix is singular".into()))?;
    let beta = &inv * x.transpose() * &y;
    let resid = &y - &x * &beta;
    let dof = k as f64 - cols as f64;
    let sigma2 = if dof > 0.0 {
        resid.norm_squared() / dof
    } else {
        f64::NAN
    };
    let se = |j: usize| (sigma2 * inv[(j, j)]).max(0.0).sqrt();
    let (a, a_se, bm1, b_se, logc, logc_se) = match pinned {
        None => (beta[0], se(0), beta[1], se(1), beta[2], se(2)),
        Some(a) => (a, 0.0, beta[0], se(0), beta[1], se(1)),
    };
    if !(a.is_finite() && bm1.is_finite()) {
        return Err(FitError::DegenerateWindow("non-finite estimate".into()));
    }
    let c = logc.exp();
    let residuals = idx
        .iter()
        .map(|&i| {
            let lb = bounds[i].ln();
            let model = a * lb + bm1 * lb.ln() + logc;
            (bounds[i], counts[i], model.exp(), counts[i].ln() - model)
        })
        .collect();
    Ok(FitReport {
        mode,
        a,
        a_se,
        b: bm1 + 1.0,
        b_se,
        c,
        c_se: c * logc_se,
        window: (start, n),
        window_bounds: (bounds[start], bounds[n - 1]),
        residuals,
        prediction: None,
    })
}

/// Fits a count series.
pub fn fit_asymptotic(series: &CountSeries, mode: FitMode) -> Result<FitReport, FitError> {
    let b: Vec<f64> = series.ladder.iter().map(rat_to_f64).collect();
    let n: Vec<f64> = series.counts.iter().map(|&c| c as f64).collect();
    fit_points(&b, &n, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(k: usize) -> Vec<f64> {
        (0..k).map(|i| 4.0 * 2f64.powi(i as i32)).collect()
    }

    #[test]
    fn synthetic_exact() {
        let b = ladder(12);
        let n: Vec<f64> = b.iter().map(|&x| 7.0 * x * x * x.ln()).collect();
        let r = fit_points(&b, &n, FitMode::Free).unwrap();
        assert!(
            (r.a - 2.0).abs() < 1e-6 && (r.b - 2.0).abs() < 1e-6 && (r.c - 7.0).abs() / 7.0 < 1e-6,
            "{r:?}"
        );
        let cube: Vec<f64> = b.iter().map(|&x| x.powi(3)).collect();
        let r = fit_points(&b, &cube, FitMode::FixA(3.0)).unwrap();
        assert!((r.b - 1.0).abs() < 1e-9 && (r.c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            fit_points(&[3.0, 4.0, 5.0], &[1.0, 2.0, 3.0], FitMode::Free),
            Err(FitError::InsufficientRungs { .. })
        ));
        let b = ladder(8);
        let mut n: Vec<f64> = b.clone();
        n[7] = 0.0;
        assert!(matches!(
            fit_points(&b, &n, FitMode::Free),
            Err(FitError::NonPositiveCount(_))
        ));
        // a constant ladder makes log B and the intercept collinear
        let flat = vec![10.0; 8];
        assert!(matches!(
            fit_points(&flat, &flat, FitMode::Free),
            Err(FitError::DegenerateWindow(_))
        ));
    }
}
