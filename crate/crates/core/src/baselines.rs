//! Autoregressive baseline with intercept, fitted by least squares.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArFit {
    pub p: usize,
    pub intercept: f64,
    /// Lag coefficients, lag 1 first.
    pub coeffs: Vec<f64>,
}

/// Regresses `x(k)` on `(1, x(k-1), …, x(k-p))` over every complete row.
///
/// When there are fewer rows than parameters the minimum-norm least-squares
/// solution is returned.
pub fn ar_fit(train: &[f64], p: usize) -> Result<ArFit> {
    if p == 0 {
        return Err(Error::InvalidArgument("AR order must be at least 1".into()));
    }
    if train.len() < p + 1 {
        return Err(Error::InsufficientData {
            needed: p + 1,
            got: train.len(),
        });
    }
    let rows = train.len() - p;
    let design = DMatrix::from_fn(
        rows,
        p + 1,
        |r, c| {
            if c == 0 {
                1.0
            } else {
                train[r + p - c]
            }
        },
    );
    let target = DVector::from_iterator(rows, train[p..].iter().copied());

    let svd = design.svd(true, true);
    let eps = svd.singular_values.max() * 1e-12 * (rows.max(p + 1) as f64);
    let solution = svd
        .solve(&target, eps)
        .map_err(|e| Error::InvalidArgument(format!("AR least squares failed: {e}")))?;

    Ok(ArFit {
        p,
        intercept: solution[0],
        coeffs: solution.iter().skip(1).copied().collect(),
    })
}

/// Recursive multi-step forecast: each output is fed back as the next lag.
pub fn ar_predict(fit: &ArFit, history: &[f64], steps: usize) -> Result<Vec<f64>> {
    if history.len() < fit.p {
        return Err(Error::InsufficientData {
            needed: fit.p,
            got: history.len(),
        });
    }
    let mut window: Vec<f64> = history[history.len() - fit.p..].to_vec();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = fit.intercept
            + fit
                .coeffs
                .iter()
                .zip(window.iter().rev())
                .map(|(c, x)| c * x)
                .sum::<f64>();
        out.push(next);
        window.remove(0);
        window.push(next);
    }
    Ok(out)
}
