//! Brute-force search for the fractional order with the smallest in-sample
//! MAPE.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greymodel::{self, AccumulationKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub kind: AccumulationKind,
}

impl SearchSpec {
    pub fn new(lo: f64, hi: f64, step: f64, kind: AccumulationKind) -> Result<Self> {
        let spec = SearchSpec { lo, hi, step, kind };
        spec.validate()?;
        Ok(spec)
    }

    /// `[0, 2]` by 0.01 for conformable, `[-2, 2]` by 0.01 for Wu.
    pub fn default_for(kind: AccumulationKind) -> Self {
        let lo = match kind {
            AccumulationKind::Conformable => 0.0,
            AccumulationKind::Wu => -2.0,
        };
        SearchSpec {
            lo,
            hi: 2.0,
            step: 0.01,
            kind,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.step.is_finite()) {
            return Err(Error::InvalidArgument(
                "search bounds must be finite".into(),
            ));
        }
        if self.lo > self.hi {
            return Err(Error::InvalidArgument(format!(
                "search range is empty: lo {} > hi {}",
                self.lo, self.hi
            )));
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "search step must be positive, got {}",
                self.step
            )));
        }
        if self.kind == AccumulationKind::Conformable && self.lo < 0.0 {
            return Err(Error::NegativeOrder(self.lo));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid point `i`, computed as `lo + i·step` and snapped to 12 decimals
    /// so that e.g. point 59 of the default grid is exactly `0.59`.
    pub fn point(&self, i: usize) -> f64 {
        let raw = self.lo + i as f64 * self.step;
        let snapped = (raw * 1e12).round() / 1e12;
        if snapped == 0.0 {
            0.0
        } else {
            snapped
        }
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub alpha: f64,
    /// `None` when the fit failed at this order.
    pub mape: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub alpha_star: f64,
    pub mape_min: f64,
    pub trace: Vec<TraceEntry>,
}

impl SearchResult {
    pub fn failures(&self) -> usize {
        self.trace.iter().filter(|t| t.mape.is_none()).count()
    }
}

fn evaluate(raw: &[f64], alpha: f64, kind: AccumulationKind) -> TraceEntry {
    let outcome = greymodel::fit(raw, alpha, kind).and_then(|fit| fit.fitted_mape(raw));
    match outcome {
        Ok(m) if m.is_finite() => TraceEntry {
            alpha,
            mape: Some(m),
            failure: None,
        },
        Ok(_) => TraceEntry {
            alpha,
            mape: None,
            failure: Some(Error::NonFinite { alpha }.to_string()),
        },
        Err(e) => TraceEntry {
            alpha,
            mape: None,
            failure: Some(e.to_string()),
        },
    }
}

/// Evaluates every grid order and returns the one with the smallest fitted
/// MAPE. Only strict improvements replace the incumbent, so ties go to the
/// smallest order.
pub fn brute_force_alpha(raw: &[f64], spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    // input problems are not per-order failures
    if raw.len() < greymodel::MIN_TRAIN {
        return Err(Error::InsufficientData {
            needed: greymodel::MIN_TRAIN,
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

    let trace: Vec<TraceEntry> = spec.grid().map(|a| evaluate(raw, a, spec.kind)).collect();

    let mut best: Option<(f64, f64)> = None;
    for entry in &trace {
        if let Some(m) = entry.mape {
            if best.is_none_or(|(_, min)| m < min) {
                best = Some((entry.alpha, m));
            }
        }
    }
    let (alpha_star, mape_min) = best.ok_or(Error::NoFeasibleOrder {
        points: trace.len(),
    })?;
    Ok(SearchResult {
        alpha_star,
        mape_min,
        trace,
    })
}
