//! Fractional accumulation and difference operators on finite series.
//!
//! Two families are provided:
//!
//! * the conformable operators [`cfa`] / [`cfd`], which reduce to weighted
//!   prefix sums and backward differences:
//!   `cfa(f, α)(k) = ∇^⌈α⌉ (f(k) / k^(⌈α⌉-α))` and
//!   `cfd(f, α)(k) = k^(⌈α⌉-α) · Δ^⌈α⌉ f(k)`;
//! * Wu's binomial operators [`foa`] / [`fod`], which convolve the series with
//!   the coefficients from [`foa_coefficients`].
//!
//! Position `i` of a slice holds the observation at index `k = i + 1`.
//! Backward differences treat every index `k <= 0` as zero, which makes each
//! difference the exact inverse of the matching accumulation at every index.

use crate::error::{Error, Result};

/// `⌈α⌉` for a nonnegative order, with `⌈0⌉ = 0`.
pub fn ceil_order(alpha: f64) -> usize {
    alpha.ceil() as usize
}

fn check_conformable(series: &[f64], alpha: f64) -> Result<()> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::NegativeOrder(alpha));
    }
    Ok(())
}

/// In-place first-order accumulation (1-AGO).
pub fn cumsum_in_place(values: &mut [f64]) {
    let mut acc = 0.0;
    for v in values.iter_mut() {
        acc += *v;
        *v = acc;
    }
}

/// In-place first-order backward difference with `f(0) = 0`.
pub fn backward_diff_in_place(values: &mut [f64]) {
    let mut prev = 0.0;
    for v in values.iter_mut() {
        let cur = *v;
        *v = cur - prev;
        prev = cur;
    }
}

/// Conformable fractional accumulation `∇^α f`.
pub fn cfa(series: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_conformable(series, alpha)?;
    let n = ceil_order(alpha);
    let exponent = n as f64 - alpha;
    let mut out: Vec<f64> = series
        .iter()
        .enumerate()
        .map(|(i, &f)| f / ((i + 1) as f64).powf(exponent))
        .collect();
    for _ in 0..n {
        cumsum_in_place(&mut out);
    }
    Ok(out)
}

/// Conformable fractional difference `Δ^α f`, the inverse of [`cfa`].
pub fn cfd(series: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_conformable(series, alpha)?;
    let n = ceil_order(alpha);
    let exponent = n as f64 - alpha;
    let mut out = series.to_vec();
    for _ in 0..n {
        backward_diff_in_place(&mut out);
    }
    for (i, v) in out.iter_mut().enumerate() {
        *v *= ((i + 1) as f64).powf(exponent);
    }
    Ok(out)
}

/// Binomial coefficients `C(m + α - 1, m)` for `m = 0..count`, built by the
/// recurrence `c_0 = 1`, `c_m = c_{m-1} (m - 1 + α) / m`.
///
/// Passing `-α` yields the coefficients of the fractional difference.
pub fn foa_coefficients(alpha: f64, count: usize) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(count);
    let mut c = 1.0;
    for m in 0..count {
        if m > 0 {
            c *= (m as f64 - 1.0 + alpha) / m as f64;
        }
        coeffs.push(c);
    }
    coeffs
}

fn binomial_convolve(series: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    // integer orders are repeated sums/differences; done directly they are
    // exact rather than accurate to rounding
    if alpha.fract() == 0.0 && alpha.abs() <= series.len() as f64 {
        let mut out = series.to_vec();
        for _ in 0..alpha.abs() as usize {
            if alpha > 0.0 {
                cumsum_in_place(&mut out);
            } else {
                backward_diff_in_place(&mut out);
            }
        }
        return Ok(out);
    }
    let coeffs = foa_coefficients(alpha, series.len());
    Ok((0..series.len())
        .map(|k| {
            series[..=k]
                .iter()
                .enumerate()
                .map(|(j, &f)| coeffs[k - j] * f)
                .sum()
        })
        .collect())
}

/// Wu's fractional-order accumulation. Any real order is accepted.
pub fn foa(series: &[f64], alpha: f64) -> Result<Vec<f64>> {
    binomial_convolve(series, alpha)
}

/// Wu's fractional-order difference, the inverse of [`foa`].
pub fn fod(series: &[f64], alpha: f64) -> Result<Vec<f64>> {
    binomial_convolve(series, -alpha)
}
