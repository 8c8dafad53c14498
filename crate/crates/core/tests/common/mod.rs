//! Reference computations used as oracles by the integration tests. None of
//! these call into the crate's operator code.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const WORKED_EXAMPLE: [f64; 5] = [55.7, 59.0, 62.7, 61.3, 61.4];

/// Conformable accumulation by the order-reduction recursion: orders in
/// `(0, 1]` are a weighted prefix sum, higher orders sum the result one order
/// lower.
pub fn cfa_recursive(f: &[f64], alpha: f64) -> Vec<f64> {
    if alpha == 0.0 {
        return f.to_vec();
    }
    let lower = if alpha > 1.0 {
        cfa_recursive(f, alpha - 1.0)
    } else {
        f.iter()
            .enumerate()
            .map(|(j, v)| v * ((j + 1) as f64).powf(alpha - 1.0))
            .collect()
    };
    let mut acc = 0.0;
    lower
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// `k^(n-α) Δ^n x(k)` written out with explicit binomial weights and zero
/// padding, `n = ⌈α⌉`.
pub fn cfd_direct(x: &[f64], alpha: f64) -> Vec<f64> {
    let n = alpha.ceil() as usize;
    let weights: Vec<f64> = (0..=n)
        .map(|i| {
            let mut c = 1.0;
            for t in 0..i {
                c *= (n - t) as f64 / (t + 1) as f64;
            }
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    (0..x.len())
        .map(|k| {
            let diff: f64 = (0..=n)
                .filter(|&i| i <= k)
                .map(|i| weights[i] * x[k - i])
                .sum();
            diff * ((k + 1) as f64).powf(n as f64 - alpha)
        })
        .collect()
}

/// Generalized binomial `C(m + r - 1, m)` as an explicit product.
pub fn rising_binomial(r: f64, m: usize) -> f64 {
    (1..=m).map(|i| (i as f64 - 1.0 + r) / i as f64).product()
}

pub fn wu_direct(f: &[f64], r: f64) -> Vec<f64> {
    (0..f.len())
        .map(|k| (0..=k).map(|j| rising_binomial(r, k - j) * f[j]).sum())
        .collect()
}

/// Accumulated series from the trapezoid recursion
/// `(x(k) - x(k-1)) + a/2 (x(k) + x(k-1)) = b`.
pub fn trapezoid_series(a: f64, b: f64, x1: f64, n: usize) -> Vec<f64> {
    let mut x = vec![x1];
    while x.len() < n {
        let prev = *x.last().unwrap();
        x.push(((1.0 - a / 2.0) * prev + b) / (1.0 + a / 2.0));
    }
    x
}

/// `x1·e^{-a(k-1)} + (b/a)(1 - e^{-a(k-1)})`, evaluated naively.
pub fn exponential_response(a: f64, b: f64, x1: f64, k: usize) -> f64 {
    let t = (k - 1) as f64;
    if a == 0.0 {
        return x1 + b * t;
    }
    (x1 - b / a) * (-a * t).exp() + b / a
}

pub fn grid_point(i: usize, lo: f64) -> f64 {
    (((lo + i as f64 * 0.01) * 100.0).round()) / 100.0
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(f64::MIN_POSITIVE)
}

pub fn random_positive(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(1.0..100.0)).collect()
}

/// A model-recovery case: parameters and the restored raw series generated
/// from the trapezoid recursion.
#[derive(Debug, Clone)]
pub struct RecoveryCase {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub x1: f64,
    pub raw: Vec<f64>,
}

/// Draws `(a, b, α, N)` with `a ∈ [-0.3, 0.3]`, `b ∈ [1, 100]`, `α` on the
/// 0.01 grid of `[0, 2]` and `N ∈ [5, 12]`, rejecting draws whose restored
/// series is not strictly positive.
pub fn recovery_case(rng: &mut ChaCha8Rng) -> RecoveryCase {
    loop {
        let a = rng.gen_range(-0.3..=0.3);
        let b = rng.gen_range(1.0..=100.0);
        let alpha = grid_point(rng.gen_range(0..=200), 0.0);
        let n = rng.gen_range(5..=12);
        let x1 = rng.gen_range(0.5..=50.0);
        let acc = trapezoid_series(a, b, x1, n);
        let raw = cfd_direct(&acc, alpha);
        if raw.iter().all(|v| *v > 0.0 && v.is_finite()) && a.abs() > 1e-3 {
            return RecoveryCase {
                a,
                b,
                alpha,
                x1,
                raw,
            };
        }
    }
}

/// Largest violation of the error-propagation identity, relative to the
/// series scale: the restored-series error must equal the fractional
/// difference of the accumulated-series error.
pub fn propagation_residual(
    wu: bool,
    alpha: f64,
    raw: &[f64],
    fitted_accumulated: &[f64],
    fitted_restored: &[f64],
) -> f64 {
    let accumulated = if wu {
        wu_direct(raw, alpha)
    } else {
        cfa_recursive(raw, alpha)
    };
    let e_acc: Vec<f64> = fitted_accumulated
        .iter()
        .zip(&accumulated)
        .map(|(a, b)| a - b)
        .collect();
    let propagated = if wu {
        wu_direct(&e_acc, -alpha)
    } else {
        cfd_direct(&e_acc, alpha)
    };
    let scale = max_abs(raw).max(max_abs(fitted_restored));
    propagated
        .iter()
        .zip(fitted_restored.iter().zip(raw))
        .map(|(p, (y, x))| (p - (y - x)).abs() / scale)
        .fold(0.0, f64::max)
}
