//! Single-variable grey model on a fractionally accumulated series.
//!
//! The accumulated series `x^(α)` is fitted to the trapezoid discretization of
//! `dx/dt + a·x = b`, extrapolated with the closed-form response and mapped
//! back to the original scale by the matching fractional difference.
//! With [`AccumulationKind::Conformable`] this is CFGM, with
//! [`AccumulationKind::Wu`] it is FGM; `α = 1` gives GM(1,1) for both.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops;

/// Smallest training sample accepted by [`fit`].
pub const MIN_TRAIN: usize = 4;

/// Below this magnitude the development coefficient is treated as zero and
/// the response degenerates to its linear limit.
pub const LINEAR_LIMIT: f64 = 1e-12;

const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccumulationKind {
    Conformable,
    Wu,
}

impl AccumulationKind {
    pub fn accumulate(self, series: &[f64], alpha: f64) -> Result<Vec<f64>> {
        match self {
            AccumulationKind::Conformable => fracops::cfa(series, alpha),
            AccumulationKind::Wu => fracops::foa(series, alpha),
        }
    }

    pub fn restore(self, series: &[f64], alpha: f64) -> Result<Vec<f64>> {
        match self {
            AccumulationKind::Conformable => fracops::cfd(series, alpha),
            AccumulationKind::Wu => fracops::fod(series, alpha),
        }
    }

    /// Conventional name of the model built on this accumulation.
    pub fn model_name(self) -> &'static str {
        match self {
            AccumulationKind::Conformable => "CFGM",
            AccumulationKind::Wu => "FGM",
        }
    }
}

impl fmt::Display for AccumulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccumulationKind::Conformable => "conformable",
            AccumulationKind::Wu => "wu",
        })
    }
}

impl FromStr for AccumulationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conformable" | "cfgm" | "cfa" => Ok(AccumulationKind::Conformable),
            "wu" | "fgm" | "foa" => Ok(AccumulationKind::Wu),
            other => Err(Error::InvalidArgument(format!(
                "unknown accumulation kind '{other}' (expected conformable or wu)"
            ))),
        }
    }
}

/// Least-squares system of the discretized whitening equation.
///
/// Row `i` is `(-(x(i+1) + x(i)) / 2, 1)` with target `x(i+1) - x(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSystem {
    pub rows: Vec<[f64; 2]>,
    pub targets: Vec<f64>,
}

pub fn build_design(accumulated: &[f64]) -> Result<DesignSystem> {
    if accumulated.len() < MIN_TRAIN {
        return Err(Error::InsufficientData {
            needed: MIN_TRAIN,
            got: accumulated.len(),
        });
    }
    let (rows, targets) = accumulated
        .windows(2)
        .map(|w| ([-0.5 * (w[1] + w[0]), 1.0], w[1] - w[0]))
        .unzip();
    Ok(DesignSystem { rows, targets })
}

/// Ordinary least-squares estimate `(a, b)` of the design system.
///
/// Solved on centered data, which is the exact OLS minimizer for a
/// two-column design with an all-ones column and avoids forming `BᵀB`.
pub fn estimate_params(design: &DesignSystem) -> Result<(f64, f64)> {
    let m = design.rows.len();
    if m == 0 || m != design.targets.len() {
        return Err(Error::DegenerateDesign);
    }
    let mf = m as f64;
    let z_mean = design.rows.iter().map(|r| r[0]).sum::<f64>() / mf;
    let y_mean = design.targets.iter().sum::<f64>() / mf;
    let mut szz = 0.0;
    let mut szy = 0.0;
    let mut z2 = 0.0;
    for (row, &y) in design.rows.iter().zip(&design.targets) {
        let dz = row[0] - z_mean;
        szz += dz * dz;
        szy += dz * (y - y_mean);
        z2 += row[0] * row[0];
    }
    // det(BᵀB) = m·Szz, scale m·Σz²
    if !(szz.is_finite() && z2.is_finite()) || szz <= SINGULAR_TOL * z2 {
        return Err(Error::DegenerateDesign);
    }
    let a = szy / szz;
    let b = y_mean - a * z_mean;
    Ok((a, b))
}

/// Closed-form response `x̂(k) = (x1 - b/a)·e^{-a(k-1)} + b/a`.
pub fn response(a: f64, b: f64, x1: f64, k: usize) -> f64 {
    let t = k.saturating_sub(1) as f64;
    if a.abs() < LINEAR_LIMIT {
        return x1 + b * t;
    }
    // same expression rearranged so that small a does not cancel
    x1 * (-a * t).exp() - b * (-a * t).exp_m1() / a
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreyModelFit {
    pub kind: AccumulationKind,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub x1: f64,
    pub n_train: usize,
    pub fitted_accumulated: Vec<f64>,
    pub fitted_restored: Vec<f64>,
}

fn check_raw(raw: &[f64]) -> Result<()> {
    if raw.len() < MIN_TRAIN {
        return Err(Error::InsufficientData {
            needed: MIN_TRAIN,
            got: raw.len(),
        });
    }
    if let Some((i, &v)) = raw
        .iter()
        .enumerate()
        .find(|(_, v)| v.is_nan() || **v <= 0.0)
    {
        return Err(Error::NonPositiveValue {
            index: i + 1,
            value: v,
        });
    }
    Ok(())
}

fn check_order(kind: AccumulationKind, alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "order {alpha} is not finite"
        )));
    }
    if kind == AccumulationKind::Conformable && alpha < 0.0 {
        return Err(Error::NegativeOrder(alpha));
    }
    Ok(())
}

/// Fits the grey model of the given accumulation kind and order to `raw`.
pub fn fit(raw: &[f64], alpha: f64, kind: AccumulationKind) -> Result<GreyModelFit> {
    check_raw(raw)?;
    check_order(kind, alpha)?;
    let accumulated = kind.accumulate(raw, alpha)?;
    let design = build_design(&accumulated)?;
    let (a, b) = estimate_params(&design)?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite { alpha });
    }
    let x1 = raw[0];
    let fitted_accumulated: Vec<f64> = (1..=raw.len()).map(|k| response(a, b, x1, k)).collect();
    let fitted_restored = kind.restore(&fitted_accumulated, alpha)?;
    if fitted_restored.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { alpha });
    }
    Ok(GreyModelFit {
        kind,
        alpha,
        a,
        b,
        x1,
        n_train: raw.len(),
        fitted_accumulated,
        fitted_restored,
    })
}

impl GreyModelFit {
    /// Response values for `k = 1..=n_train + horizon`.
    pub fn accumulated_path(&self, horizon: usize) -> Vec<f64> {
        (1..=self.n_train + horizon)
            .map(|k| response(self.a, self.b, self.x1, k))
            .collect()
    }

    /// Restored values for `k = 1..=n_train + horizon`.
    pub fn restored_path(&self, horizon: usize) -> Vec<f64> {
        let path = self.accumulated_path(horizon);
        // the order was validated at fit time, restoration cannot fail here
        self.kind
            .restore(&path, self.alpha)
            .expect("restoration of a validated fit")
    }

    /// Out-of-sample forecasts for positions `n_train+1 ..= n_train+horizon`.
    pub fn predict(&self, horizon: usize) -> Vec<f64> {
        if horizon == 0 {
            return Vec::new();
        }
        self.restored_path(horizon).split_off(self.n_train)
    }

    /// Mean absolute percentage error of the in-sample restored values.
    pub fn fitted_mape(&self, raw: &[f64]) -> Result<f64> {
        if raw.len() != self.n_train {
            return Err(Error::LengthMismatch {
                left: self.n_train,
                right: raw.len(),
            });
        }
        let mut total = 0.0;
        for (i, (&fitted, &actual)) in self.fitted_restored.iter().zip(raw).enumerate() {
            if actual == 0.0 {
                return Err(Error::ZeroActual { index: i + 1 });
            }
            total += ((fitted - actual) / actual).abs();
        }
        Ok(100.0 * total / self.n_train as f64)
    }
}
