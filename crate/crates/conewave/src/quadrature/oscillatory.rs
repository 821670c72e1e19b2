//! Semi-infinite oscillatory integrals: half-period panels with Euler averaging of
//! the partial sums, and the Bessel-product integral ∫₀^∞ J_μ J_ν τ^{−λ} dτ.

use std::f64::consts::PI;

use super::{fixed_legendre, gauss_legendre, jacobi_doubling, Estimate, QuadratureConfig};
use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j_scaled, bessel_j_unchecked, eval_inverse_powers, hankel_pq, hankel_pq_series};

/// Repeated pairwise averaging of partial sums, `levels` times. Returns the last
/// entry of the top row and the gap to its neighbour as an error estimate.
pub fn euler_average(partial: &[f64], levels: usize) -> Estimate {
    let mut row = partial.to_vec();
    for _ in 0..levels.min(partial.len().saturating_sub(2)) {
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    let n = row.len();
    match n {
        0 => Estimate::new(0.0, f64::INFINITY),
        1 => Estimate::new(row[0], f64::INFINITY),
        _ => Estimate::new(row[n - 1], (row[n - 1] - row[n - 2]).abs()),
    }
}

/// ∫_start^∞ f, where f oscillates with (asymptotic) half-period `half_period` and
/// a slowly varying amplitude. Panels of one half-period are integrated with fixed
/// Legendre rules and the partial sums are Euler-averaged.
pub fn oscillatory_tail<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    half_period: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let levels = cfg.tail_extrapolation_terms;
    let panels = 3 * levels + 8;
    let n = cfg.gauss_legendre_order.max(16);
    let mut sum = 0.0;
    let mut partial = Vec::with_capacity(panels);
    for j in 0..panels {
        let a = start + j as f64 * half_period;
        sum += fixed_legendre(&f, a, a + half_period, n);
        partial.push(sum);
    }
    let est = euler_average(&partial, levels);
    let previous = euler_average(&partial[..panels - 2], levels);
    let spread = (est.value - previous.value).abs();
    let error = est.error.max(spread);
    if !est.value.is_finite() || error > 1e-6 * est.value.abs().max(partial_scale(&partial)) {
        return Err(Error::Extrapolation { last: est.value, previous: previous.value });
    }
    Ok(Estimate::new(est.value, error))
}

fn partial_scale(partial: &[f64]) -> f64 {
    partial.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Numerical value of ∫₀^∞ J_μ(τ) J_ν(τ) τ^{−λ} dτ inside μ + ν + 1 > λ > 0.
///
/// [0, 4] uses a Jacobi weight τ^{μ+ν−λ} with the entire factor J_μJ_ν/τ^{μ+ν};
/// [4, Λ] uses adaptive Legendre panels. Beyond Λ the product splits, via the
/// Hankel expansions, into a non-oscillatory mean integrated term by term and a
/// remainder oscillating like cos(2τ − φ₀), which goes through `oscillatory_tail`.
/// Sign-change panelling alone would not work: J_1² never changes sign.
pub fn bessel_product_integral(mu: f64, nu2: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(mu >= 0.0 && nu2 >= 0.0) {
        return domain(format!("Bessel orders must be nonnegative, got ({mu}, {nu2})"));
    }
    if !(mu + nu2 + 1.0 > lambda && lambda > 0.0) {
        return domain(format!(
            "lambda = {lambda} outside the convergence strip mu + nu + 1 > lambda > 0 (mu = {mu}, nu = {nu2})"
        ));
    }
    let big = cfg.oscillatory_truncation;
    let head_end = 4.0;
    let e = mu + nu2 - lambda;
    let h = head_end / 2.0;
    let head = jacobi_doubling(
        &|x: f64| {
            let t = h * (1.0 + x);
            bessel_j_scaled(mu, t) * bessel_j_scaled(nu2, t)
        },
        0.0,
        e,
        cfg.gauss_jacobi_order,
        cfg,
    )?;
    let head = Estimate::new(head.value * h.powf(e + 1.0), head.error * h.powf(e + 1.0));

    let product = |t: f64| bessel_j_unchecked(mu, t) * bessel_j_unchecked(nu2, t) * t.powf(-lambda);
    let mut body = Estimate::new(0.0, 0.0);
    let step = PI / 2.0;
    let mut a = head_end;
    while a < big {
        let b = (a + step).min(big);
        body = body + gauss_legendre(&product, a, b, cfg)?;
        a = b;
    }

    let mean = mean_tail(mu, nu2, lambda, big);
    let phi0 = (mu + nu2 + 1.0) * PI / 2.0;
    let remainder = oscillatory_tail(
        |t: f64| {
            let (pm, qm) = hankel_pq(mu, t);
            let (pn, qn) = hankel_pq(nu2, t);
            let arg = 2.0 * t - phi0;
            ((pm * pn - qm * qn) * arg.cos() - (pm * qn + qm * pn) * arg.sin()) / (PI * t) * t.powf(-lambda)
        },
        big,
        step,
        cfg,
    )?;
    Ok(head + body + mean + remainder)
}

/// ∫_Λ^∞ of the non-oscillatory part (1/(πτ))[(P_μP_ν+Q_μQ_ν)cosΔ + (P_μQ_ν−Q_μP_ν)sinΔ]τ^{−λ}
/// with Δ = (ν−μ)π/2, integrated term by term in powers of 1/τ.
fn mean_tail(mu: f64, nu2: f64, lambda: f64, big: f64) -> Estimate {
    let (pm, qm) = hankel_pq_series(mu, big);
    let (pn, qn) = hankel_pq_series(nu2, big);
    let len = pm.len().min(pn.len());
    let delta = (nu2 - mu) * PI / 2.0;
    let (cd, sd) = (delta.cos(), delta.sin());
    let mut coeffs = vec![0.0; len];
    for (i, c) in coeffs.iter_mut().enumerate() {
        for j in 0..=i {
            let (a, b) = (j, i - j);
            *c += (pm[a] * pn[b] + qm[a] * qn[b]) * cd + (pm[a] * qn[b] - qm[a] * pn[b]) * sd;
        }
    }
    let integrated: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c / (lambda + j as f64))
        .collect();
    let value = big.powf(-lambda) / PI * eval_inverse_powers(&integrated, big);
    let last = integrated.last().copied().unwrap_or(0.0);
    let error = (big.powf(-lambda - len as f64) * last / PI).abs();
    Estimate::new(value, error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_average_sums_alternating_harmonic() {
        let mut s = 0.0;
        let partial: Vec<f64> = (1..=30)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let est = euler_average(&partial, 12);
        assert!((est.value - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn sine_integral_tail() {
        // ∫_0^∞ sin t / t = π/2
        let cfg = QuadratureConfig::default();
        let head = gauss_legendre(|t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, 10.0 * PI, &cfg).unwrap();
        let tail = oscillatory_tail(|t: f64| t.sin() / t, 10.0 * PI, PI, &cfg).unwrap();
        assert!((head.value + tail.value - PI / 2.0).abs() < 1e-11);
    }
}
