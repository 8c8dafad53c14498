//! Pointwise errors and MAE/MSE/MAPE summaries with population standard
//! deviations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub ae: f64,
    pub se: f64,
    /// Absolute percentage error, in percent.
    pub ape: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub mae: f64,
    pub mae_std: f64,
    pub mse: f64,
    pub mse_std: f64,
    pub mape: f64,
    pub mape_std: f64,
    pub n: usize,
}

pub fn pointwise_errors(predicted: &[f64], actual: &[f64]) -> Result<Vec<PointError>> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptySeries);
    }
    predicted
        .iter()
        .zip(actual)
        .enumerate()
        .map(|(i, (&p, &a))| {
            if a == 0.0 {
                return Err(Error::ZeroActual { index: i + 1 });
            }
            let e = p - a;
            Ok(PointError {
                ae: e.abs(),
                se: e * e,
                ape: (e / a).abs() * 100.0,
            })
        })
        .collect()
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn summarize(errors: &[PointError]) -> Result<ErrorSummary> {
    if errors.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (mae, mae_std) = mean_std(errors.iter().map(|e| e.ae));
    let (mse, mse_std) = mean_std(errors.iter().map(|e| e.se));
    let (mape, mape_std) = mean_std(errors.iter().map(|e| e.ape));
    Ok(ErrorSummary {
        mae,
        mae_std,
        mse,
        mse_std,
        mape,
        mape_std,
        n: errors.len(),
    })
}
