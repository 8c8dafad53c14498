//! Rolling-origin multi-step evaluation, time-series cross-validation and the
//! distribution of selected orders.
//!
//! Both harnesses train a fresh model for every origin or subcase; grey models
//! re-run the order search on each training window. Per-point errors are
//! pooled across origins/subcases before summarizing unless
//! [`Aggregation::MeanOfSubcases`] is requested.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{self, ArFit};
use crate::error::{Error, Result};
use crate::greymodel::{self, AccumulationKind, GreyModelFit};
use crate::metrics::{self, ErrorSummary, PointError};
use crate::order_search::{self, SearchSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderChoice {
    Search(SearchSpec),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    Grey {
        kind: AccumulationKind,
        order: OrderChoice,
    },
    Ar {
        order: usize,
    },
}

impl ModelSpec {
    /// Grey model with the default order search for `kind`.
    pub fn grey(kind: AccumulationKind) -> Self {
        ModelSpec::Grey {
            kind,
            order: OrderChoice::Search(SearchSpec::default_for(kind)),
        }
    }

    pub fn cfgm() -> Self {
        Self::grey(AccumulationKind::Conformable)
    }

    pub fn fgm() -> Self {
        Self::grey(AccumulationKind::Wu)
    }

    pub fn ar(order: usize) -> Self {
        ModelSpec::Ar { order }
    }

    pub fn name(&self) -> String {
        match self {
            ModelSpec::Grey {
                kind,
                order: OrderChoice::Search(_),
            } => kind.model_name().to_string(),
            ModelSpec::Grey {
                kind,
                order: OrderChoice::Fixed(alpha),
            } => format!("{}[{alpha}]", kind.model_name()),
            ModelSpec::Ar { .. } => "AR".to_string(),
        }
    }

    fn train(&self, train: &[f64]) -> Result<Trained> {
        match *self {
            ModelSpec::Grey { kind, order } => {
                let alpha = match order {
                    OrderChoice::Search(spec) => {
                        order_search::brute_force_alpha(train, &spec)?.alpha_star
                    }
                    OrderChoice::Fixed(alpha) => alpha,
                };
                Ok(Trained::Grey(greymodel::fit(train, alpha, kind)?))
            }
            ModelSpec::Ar { order } => {
                // a window of w points supports at most w - 2 lags with an intercept
                let p = order.min(train.len().saturating_sub(2)).max(1);
                Ok(Trained::Ar {
                    fit: baselines::ar_fit(train, p)?,
                    history: train.to_vec(),
                })
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

enum Trained {
    Grey(GreyModelFit),
    Ar { fit: ArFit, history: Vec<f64> },
}

impl Trained {
    fn forecast(&self, steps: usize) -> Result<Vec<f64>> {
        match self {
            Trained::Grey(fit) => Ok(fit.predict(steps)),
            Trained::Ar { fit, history } => baselines::ar_predict(fit, history, steps),
        }
    }

    fn alpha_star(&self) -> Option<f64> {
        match self {
            Trained::Grey(fit) => Some(fit.alpha),
            Trained::Ar { .. } => None,
        }
    }

    fn effective_p(&self) -> Option<usize> {
        match self {
            Trained::Grey(_) => None,
            Trained::Ar { fit, .. } => Some(fit.p),
        }
    }

    fn fitted(&self) -> Option<&[f64]> {
        match self {
            Trained::Grey(fit) => Some(&fit.fitted_restored),
            Trained::Ar { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Summarize all per-point errors together.
    #[default]
    Pooled,
    /// Summarize each origin/subcase, then report the mean and population
    /// standard deviation of the per-unit metrics.
    MeanOfSubcases,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" => Ok(Aggregation::Pooled),
            "mean" | "mean-of-subcases" | "mean_of_subcases" => Ok(Aggregation::MeanOfSubcases),
            other => Err(Error::InvalidArgument(format!(
                "unknown aggregation '{other}' (expected pooled or mean)"
            ))),
        }
    }
}

fn aggregate(units: &[Vec<PointError>], how: Aggregation) -> Option<ErrorSummary> {
    let units: Vec<&Vec<PointError>> = units.iter().filter(|u| !u.is_empty()).collect();
    if units.is_empty() {
        return None;
    }
    match how {
        Aggregation::Pooled => {
            let all: Vec<PointError> = units.iter().flat_map(|u| u.iter().copied()).collect();
            metrics::summarize(&all).ok()
        }
        Aggregation::MeanOfSubcases => {
            let per_unit: Vec<PointError> = units
                .iter()
                .filter_map(|u| metrics::summarize(u).ok())
                .map(|s| PointError {
                    ae: s.mae,
                    se: s.mse,
                    ape: s.mape,
                })
                .collect();
            metrics::summarize(&per_unit).ok()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub model: String,
    /// `"1-step"`, `"2-step"`, … for rolling reports; `"fitting"` or
    /// `"prediction"` for cross-validation reports.
    pub phase: String,
    pub summary: ErrorSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub model: String,
    pub location: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RollingOptions {
    pub window: usize,
    pub max_step: usize,
    pub aggregation: Aggregation,
}

impl Default for RollingOptions {
    fn default() -> Self {
        RollingOptions {
            window: 5,
            max_step: 3,
            aggregation: Aggregation::Pooled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginRecord {
    pub model: String,
    /// 1-based index of the last training point.
    pub origin: usize,
    pub alpha_star: Option<f64>,
    pub effective_p: Option<usize>,
    pub predictions: Vec<f64>,
    pub actual: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingReport {
    pub n: usize,
    pub window: usize,
    pub max_step: usize,
    pub aggregation: Aggregation,
    pub models: Vec<ModelSpec>,
    pub summaries: Vec<SummaryRow>,
    pub origins: Vec<OriginRecord>,
    pub skipped: Vec<SkipRecord>,
}

impl RollingReport {
    pub fn summary(&self, model: &str, step: usize) -> Option<&ErrorSummary> {
        let phase = step_label(step);
        self.summaries
            .iter()
            .find(|r| r.model == model && r.phase == phase)
            .map(|r| &r.summary)
    }
}

fn step_label(step: usize) -> String {
    format!("{step}-step")
}

/// Rolling-origin 1..=max_step prediction test.
///
/// For every origin `t = window..N-1` each model is trained on the `window`
/// points ending at `t` and forecasts up to `min(max_step, N - t)` steps; the
/// `s`-step error is measured at `t + s`. The `s`-step pool therefore holds
/// `N - window - s + 1` points per model when no window fails.
pub fn rolling_multistep(
    raw: &[f64],
    models: &[ModelSpec],
    opts: &RollingOptions,
) -> Result<RollingReport> {
    let RollingOptions {
        window,
        max_step,
        aggregation,
    } = *opts;
    if window < greymodel::MIN_TRAIN {
        return Err(Error::InvalidArgument(format!(
            "window must be at least {}, got {window}",
            greymodel::MIN_TRAIN
        )));
    }
    if max_step == 0 {
        return Err(Error::InvalidArgument("max-step must be at least 1".into()));
    }
    let n = raw.len();
    if n < window + max_step {
        return Err(Error::InsufficientData {
            needed: window + max_step,
            got: n,
        });
    }

    let mut origins = Vec::new();
    let mut skipped = Vec::new();
    let mut summaries = Vec::new();

    for model in models {
        let name = model.name();
        // per step: one unit (origin) per error point
        let mut by_step: Vec<Vec<Vec<PointError>>> = vec![Vec::new(); max_step];
        for t in window..n {
            let train = &raw[t - window..t];
            let steps = max_step.min(n - t);
            let actual = &raw[t..t + steps];
            let outcome = model.train(train).and_then(|trained| {
                let preds = trained.forecast(steps)?;
                let errs = metrics::pointwise_errors(&preds, actual)?;
                Ok((trained, preds, errs))
            });
            match outcome {
                Ok((trained, predictions, errs)) => {
                    for (s, e) in errs.into_iter().enumerate() {
                        by_step[s].push(vec![e]);
                    }
                    origins.push(OriginRecord {
                        model: name.clone(),
                        origin: t,
                        alpha_star: trained.alpha_star(),
                        effective_p: trained.effective_p(),
                        predictions,
                        actual: actual.to_vec(),
                    });
                }
                Err(e) => skipped.push(SkipRecord {
                    model: name.clone(),
                    location: format!("origin {t}"),
                    reason: e.to_string(),
                }),
            }
        }
        for (s, units) in by_step.iter().enumerate() {
            if let Some(summary) = aggregate(units, aggregation) {
                summaries.push(SummaryRow {
                    model: name.clone(),
                    phase: step_label(s + 1),
                    summary,
                });
            }
        }
    }

    Ok(RollingReport {
        n,
        window,
        max_step,
        aggregation,
        models: models.to_vec(),
        summaries,
        origins,
        skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcaseSpec {
    /// 1-based index of the first training point.
    pub start: usize,
    pub train_len: usize,
    pub horizon: usize,
}

impl SubcaseSpec {
    /// 0-based slice range of the training points.
    pub fn train_range(&self) -> std::ops::Range<usize> {
        self.start - 1..self.start - 1 + self.train_len
    }

    /// 0-based slice range of the held-out points.
    pub fn test_range(&self) -> std::ops::Range<usize> {
        let end = self.start - 1 + self.train_len;
        end..end + self.horizon
    }
}

/// Every (start, training length) fold that leaves at least one point to
/// forecast, ordered by start then length.
pub fn tscv_subcases(n_total: usize, min_train: usize) -> Result<Vec<SubcaseSpec>> {
    if min_train == 0 || n_total < min_train + 1 {
        return Err(Error::InsufficientData {
            needed: min_train.max(1) + 1,
            got: n_total,
        });
    }
    let mut out = Vec::new();
    for start in 1..=n_total - min_train {
        for train_len in min_train..=n_total - start {
            out.push(SubcaseSpec {
                start,
                train_len,
                horizon: n_total - start - train_len + 1,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TscvOptions {
    pub min_train: usize,
    pub aggregation: Aggregation,
}

impl Default for TscvOptions {
    fn default() -> Self {
        TscvOptions {
            min_train: greymodel::MIN_TRAIN,
            aggregation: Aggregation::Pooled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcaseRecord {
    pub model: String,
    pub subcase: SubcaseSpec,
    pub alpha_star: Option<f64>,
    pub effective_p: Option<usize>,
    pub fitted: Option<Vec<f64>>,
    pub predictions: Vec<f64>,
    pub fitting: Option<ErrorSummary>,
    pub prediction: ErrorSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TscvReport {
    pub n_total: usize,
    pub aggregation: Aggregation,
    pub models: Vec<ModelSpec>,
    pub summaries: Vec<SummaryRow>,
    pub subcases: Vec<SubcaseRecord>,
    pub skipped: Vec<SkipRecord>,
}

pub const FITTING: &str = "fitting";
pub const PREDICTION: &str = "prediction";

impl TscvReport {
    pub fn summary(&self, model: &str, phase: &str) -> Option<&ErrorSummary> {
        self.summaries
            .iter()
            .find(|r| r.model == model && r.phase == phase)
            .map(|r| &r.summary)
    }

    pub fn alpha_stars(&self, model: &str) -> Vec<f64> {
        self.subcases
            .iter()
            .filter(|r| r.model == model)
            .filter_map(|r| r.alpha_star)
            .collect()
    }
}

/// Time-series cross-validation over every subcase of [`tscv_subcases`].
///
/// Each subcase is fitted on its training points and forecast to the end of
/// the series. In-sample and out-of-sample errors are summarized separately.
pub fn tscv_run(raw: &[f64], models: &[ModelSpec], opts: &TscvOptions) -> Result<TscvReport> {
    let subcases = tscv_subcases(raw.len(), opts.min_train)?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut summaries = Vec::new();

    for model in models {
        let name = model.name();
        let mut fit_units = Vec::new();
        let mut pred_units = Vec::new();
        for sc in &subcases {
            let train = &raw[sc.train_range()];
            let actual = &raw[sc.test_range()];
            let outcome = model.train(train).and_then(|trained| {
                let preds = trained.forecast(sc.horizon)?;
                let pred_errs = metrics::pointwise_errors(&preds, actual)?;
                let fit_errs = trained
                    .fitted()
                    .map(|fitted| metrics::pointwise_errors(fitted, train))
                    .transpose()?;
                Ok((trained, preds, pred_errs, fit_errs))
            });
            match outcome {
                Ok((trained, predictions, pred_errs, fit_errs)) => {
                    let fitting = fit_errs.as_deref().map(metrics::summarize).transpose()?;
                    let prediction = metrics::summarize(&pred_errs)?;
                    records.push(SubcaseRecord {
                        model: name.clone(),
                        subcase: *sc,
                        alpha_star: trained.alpha_star(),
                        effective_p: trained.effective_p(),
                        fitted: trained.fitted().map(<[f64]>::to_vec),
                        predictions,
                        fitting,
                        prediction,
                    });
                    if let Some(errs) = fit_errs {
                        fit_units.push(errs);
                    }
                    pred_units.push(pred_errs);
                }
                Err(e) => skipped.push(SkipRecord {
                    model: name.clone(),
                    location: format!("subcase start {} length {}", sc.start, sc.train_len),
                    reason: e.to_string(),
                }),
            }
        }
        for (phase, units) in [(FITTING, &fit_units), (PREDICTION, &pred_units)] {
            if let Some(summary) = aggregate(units, opts.aggregation) {
                summaries.push(SummaryRow {
                    model: name.clone(),
                    phase: phase.to_string(),
                    summary,
                });
            }
        }
    }

    Ok(TscvReport {
        n_total: raw.len(),
        aggregation: opts.aggregation,
        models: models.to_vec(),
        summaries,
        subcases: records,
        skipped,
    })
}

/// Share of selected orders falling in each of the bins `=0`, `(0,1)`, `=1`,
/// `>1` and, when any order is negative, `<0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaHistogram {
    pub total: usize,
    pub bins: Vec<AlphaBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaBin {
    pub label: String,
    pub count: usize,
    pub proportion: f64,
}

impl AlphaHistogram {
    pub fn from_alphas(alphas: &[f64], include_negative: bool) -> Self {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &a in alphas {
            let bin = if a < 0.0 {
                4
            } else if a == 0.0 {
                0
            } else if a < 1.0 {
                1
            } else if a == 1.0 {
                2
            } else {
                3
            };
            *counts.entry(bin).or_default() += 1;
        }
        let include_negative = include_negative || counts.contains_key(&4);
        let labels = ["=0", "(0,1)", "=1", ">1", "<0"];
        let total = alphas.len();
        let bins = labels
            .iter()
            .enumerate()
            .take(if include_negative { 5 } else { 4 })
            .map(|(i, label)| {
                let count = counts.get(&i).copied().unwrap_or(0);
                AlphaBin {
                    label: label.to_string(),
                    count,
                    proportion: if total == 0 {
                        0.0
                    } else {
                        count as f64 / total as f64
                    },
                }
            })
            .collect();
        AlphaHistogram { total, bins }
    }

    pub fn proportions(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.proportion).collect()
    }

    pub fn proportion(&self, label: &str) -> f64 {
        self.bins
            .iter()
            .find(|b| b.label == label)
            .map_or(0.0, |b| b.proportion)
    }

    /// Share of orders in `[0, 1)`.
    pub fn below_one(&self) -> f64 {
        self.proportion("=0") + self.proportion("(0,1)")
    }
}

/// Histogram of the orders selected for `model` across all reports.
pub fn alpha_distribution(reports: &[TscvReport], model: &str) -> Result<AlphaHistogram> {
    if reports.is_empty() {
        return Err(Error::InvalidArgument("no reports given".into()));
    }
    let alphas: Vec<f64> = reports.iter().flat_map(|r| r.alpha_stars(model)).collect();
    let wu = reports.iter().flat_map(|r| &r.models).any(|m| {
        m.name() == model
            && matches!(
                m,
                ModelSpec::Grey {
                    kind: AccumulationKind::Wu,
                    ..
                }
            )
    });
    Ok(AlphaHistogram::from_alphas(&alphas, wu))
}
