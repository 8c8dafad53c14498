//! Browser bindings for the demo page in `www/`.
//!
//! Every exported function takes the series as a `Float64Array` and returns a
//! JSON string; errors surface as thrown JS exceptions. The `*_json`
//! functions hold the logic and are plain Rust so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use cfgm::greymodel::{fit, AccumulationKind};
use cfgm::order_search::{brute_force_alpha, SearchSpec};

#[derive(Serialize)]
struct Curves {
    kind: AccumulationKind,
    alphas: Vec<f64>,
    curves: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct Forecast {
    kind: AccumulationKind,
    alpha: f64,
    searched: bool,
    a: f64,
    b: f64,
    fitted: Vec<f64>,
    forecast: Vec<f64>,
    fitted_mape: f64,
}

#[derive(Serialize)]
struct Trace {
    kind: AccumulationKind,
    alpha_star: f64,
    mape_min: f64,
    alphas: Vec<f64>,
    /// `null` where the fit failed.
    mapes: Vec<Option<f64>>,
}

fn parse_kind(kind: &str) -> Result<AccumulationKind, String> {
    kind.parse().map_err(|e: cfgm::Error| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Accumulated series for each order in `alphas`.
pub fn accumulate_curves_json(
    values: &[f64],
    kind: &str,
    alphas: &[f64],
) -> Result<String, String> {
    let kind = parse_kind(kind)?;
    let curves = alphas
        .iter()
        .map(|&a| {
            kind.accumulate(values, a)
                .map_err(|e| format!("α = {a}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    to_json(&Curves {
        kind,
        alphas: alphas.to_vec(),
        curves,
    })
}

/// Fits at `alpha`, or at the searched order when `alpha` is NaN, and
/// forecasts `horizon` steps.
pub fn fit_and_forecast_json(
    values: &[f64],
    kind: &str,
    alpha: f64,
    horizon: usize,
) -> Result<String, String> {
    let kind = parse_kind(kind)?;
    let searched = alpha.is_nan();
    let alpha = if searched {
        brute_force_alpha(values, &SearchSpec::default_for(kind))
            .map_err(|e| e.to_string())?
            .alpha_star
    } else {
        alpha
    };
    let model = fit(values, alpha, kind).map_err(|e| e.to_string())?;
    let fitted_mape = model.fitted_mape(values).map_err(|e| e.to_string())?;
    to_json(&Forecast {
        kind,
        alpha,
        searched,
        a: model.a,
        b: model.b,
        forecast: model.predict(horizon),
        fitted: model.fitted_restored,
        fitted_mape,
    })
}

/// Fitted MAPE over the default order grid of `kind`.
pub fn mape_trace_json(values: &[f64], kind: &str) -> Result<String, String> {
    let kind = parse_kind(kind)?;
    let result =
        brute_force_alpha(values, &SearchSpec::default_for(kind)).map_err(|e| e.to_string())?;
    to_json(&Trace {
        kind,
        alpha_star: result.alpha_star,
        mape_min: result.mape_min,
        alphas: result.trace.iter().map(|t| t.alpha).collect(),
        mapes: result.trace.iter().map(|t| t.mape).collect(),
    })
}

#[wasm_bindgen]
pub fn accumulate_curves(values: &[f64], kind: &str, alphas: &[f64]) -> Result<String, JsError> {
    accumulate_curves_json(values, kind, alphas).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fit_and_forecast(
    values: &[f64],
    kind: &str,
    alpha: f64,
    horizon: usize,
) -> Result<String, JsError> {
    fit_and_forecast_json(values, kind, alpha, horizon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mape_trace(values: &[f64], kind: &str) -> Result<String, JsError> {
    mape_trace_json(values, kind).map_err(|e| JsError::new(&e))
}
