//! Small-sample forecasting with fractional-order grey models.
//!
//! The crate provides the conformable fractional accumulation/difference
//! operators and Wu's binomial ones ([`fracops`]), the grey model built on
//! either ([`greymodel`]), brute-force order selection ([`order_search`]), an
//! autoregressive baseline ([`baselines`]), error criteria ([`metrics`]),
//! rolling-origin and cross-validation harnesses ([`evaluation`]) and data
//! and report I/O ([`dataio`]).
//!
//! ```
//! use cfgm::greymodel::{fit, AccumulationKind};
//! use cfgm::order_search::{brute_force_alpha, SearchSpec};
//!
//! let raw = [55.7, 59.0, 62.7, 61.3, 61.4];
//! let spec = SearchSpec::default_for(AccumulationKind::Conformable);
//! let best = brute_force_alpha(&raw, &spec).unwrap();
//! assert_eq!(best.alpha_star, 0.59);
//!
//! let model = fit(&raw, best.alpha_star, AccumulationKind::Conformable).unwrap();
//! let forecast = model.predict(5);
//! assert!((forecast[0] - 58.39).abs() < 0.01);
//! ```

pub mod baselines;
pub mod dataio;
pub mod error;
pub mod evaluation;
pub mod fracops;
pub mod greymodel;
pub mod metrics;
pub mod order_search;

pub use error::{Error, Result};
