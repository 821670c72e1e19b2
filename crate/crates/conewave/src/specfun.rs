//! Scalar special functions: Gamma in log space with sign tracking, Gegenbauer and
//! Chebyshev polynomials, Bessel functions of real order, and the Gamma-ratio
//! constants used by the closed forms.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Highest polynomial degree accepted by the recurrences.
pub const MAX_DEGREE: usize = 60;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        -(PI * (2.0 - r)).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Γ(x) for real x that is not a pole. Poles return NaN.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x == x.floor() && x < 20.0 {
        // exact factorial
        return (2..x as u32).map(f64::from).product();
    }
    if x >= 20.0 {
        // x^{x−1/2} e^{−x} with an exact base keeps the error at a few ulp
        let half = x.powf((x - 0.5) / 2.0);
        return (2.0 * PI).sqrt() * half * (half * (-x).exp()) * stirling_tail(x).exp();
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so that Γ(171) does not overflow on the way
    let half = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * a
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("log_gamma needs a positive argument, got {x}"));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x <= 171.0 {
        return gamma(x).ln();
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x)
}

/// Σ B_{2n}/(2n(2n−1)x^{2n−1}) for n ≤ 8; below 1e−20 for x ≥ 20.
fn stirling_tail(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * C.iter().rev().fold(0.0, |acc, c| acc * inv2 + c)
}

/// (ln|Γ(x)|, sign Γ(x)); `None` at the poles.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return None;
    }
    if x > 0.0 {
        return Some((ln_gamma_pos(x), 1.0));
    }
    let s = sin_pi(x);
    Some((PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x), s.signum()))
}

/// 1/Γ(x), exactly zero at 0, −1, −2, …
pub fn rgamma(x: f64) -> f64 {
    match ln_gamma_signed(x) {
        None => 0.0,
        Some((l, s)) => s * (-l).exp(),
    }
}

/// Rising factorial (x)_k.
pub fn pochhammer(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64))
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)
}

/// Γ(a+k)/Γ(b+k), computed in log space.
pub fn gamma_ratio(a: f64, b: f64, k: u64) -> Result<f64> {
    let (ak, bk) = (a + k as f64, b + k as f64);
    if !(ak > 0.0 && bk > 0.0) {
        return domain(format!("gamma_ratio needs a+k>0 and b+k>0, got {ak}, {bk}"));
    }
    if a == b {
        return Ok(1.0);
    }
    Ok((ln_gamma_pos(ak) - ln_gamma_pos(bk)).exp())
}

/// |S^{m-1}| = 2π^{m/2}/Γ(m/2), the area of the unit sphere in R^m.
pub fn sphere_area(m: u32) -> Result<f64> {
    if m < 1 {
        return domain("sphere_area needs m >= 1");
    }
    let h = m as f64 / 2.0;
    Ok(2.0 * (h * PI.ln() - ln_gamma_pos(h)).exp())
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return domain(format!("degree {k} exceeds the supported maximum {MAX_DEGREE}"));
    }
    Ok(())
}

/// Gegenbauer polynomial C_k^α(t) by forward recurrence.
pub fn gegenbauer(alpha: f64, k: usize, t: f64) -> Result<f64> {
    if !(alpha > -0.5) {
        return domain(format!("Gegenbauer parameter must exceed -1/2, got {alpha}"));
    }
    if alpha == 0.0 {
        return domain("C_k^0 is degenerate; use chebyshev_t");
    }
    if !(-1.0..=1.0).contains(&t) {
        return domain(format!("argument {t} outside [-1, 1]"));
    }
    check_degree(k)?;
    Ok(gegenbauer_unchecked(alpha, k, t))
}

#[inline]
pub(crate) fn gegenbauer_unchecked(alpha: f64, k: usize, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha * t;
    for j in 2..=k {
        let jf = j as f64;
        let next = (2.0 * (jf + alpha - 1.0) * t * cur - (jf + 2.0 * alpha - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// C_k^α(1) = (2α)_k/k!.
pub fn gegenbauer_at_one(alpha: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (2.0 * alpha + j as f64) / (j as f64 + 1.0))
}

/// ∫ (C_k^α)² (1−t²)^{α−1/2} dt.
pub fn gegenbauer_norm_sq(alpha: f64, k: usize) -> f64 {
    let kf = k as f64;
    let ln = (1.0 - 2.0 * alpha) * 2f64.ln() + PI.ln() + ln_gamma_pos(kf + 2.0 * alpha)
        - 2.0 * ln_gamma_pos(alpha)
        - ln_gamma_pos(kf + 1.0);
    ln.exp() / (kf + alpha)
}

/// Chebyshev polynomial of the first kind.
pub fn chebyshev_t(k: usize, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return domain(format!("argument {t} outside [-1, 1]"));
    }
    Ok(chebyshev_unchecked(k, t))
}

#[inline]
pub(crate) fn chebyshev_unchecked(k: usize, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, t);
    for _ in 1..k {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The zonal profile of degree k for parameter α: Gegenbauer, or Chebyshev when α = 0.
pub(crate) fn zonal_poly(alpha: f64, k: usize, t: f64) -> f64 {
    if alpha == 0.0 {
        chebyshev_unchecked(k, t)
    } else {
        gegenbauer_unchecked(alpha, k, t)
    }
}

/// R_k^α: the constant in the Rodrigues formula for C_k^α (or T_k when α = 0).
pub fn rodrigues_r(alpha: f64, k: usize) -> Result<f64> {
    if !(alpha > -0.5) {
        return domain(format!("Rodrigues constant needs alpha > -1/2, got {alpha}"));
    }
    let kf = k as f64;
    let ln2k = kf * 2f64.ln();
    if alpha == 0.0 {
        return Ok((0.5 * PI.ln() - ln2k - ln_gamma_pos(kf + 0.5)).exp());
    }
    // Γ(k+2α)/Γ(2α) as a product avoids the pole of Γ(2α) for α ∈ (−1/2, 0)
    let ratio = pochhammer(2.0 * alpha, k);
    let rest = ln_gamma_pos(alpha + 0.5) - ln2k - ln_gamma_pos(kf + 1.0) - ln_gamma_pos(alpha + kf + 0.5);
    Ok(ratio * rest.exp())
}

/// H_γ = 2^{(γ+1)/2} π^{−γ/2} Γ((γ+1)/2)/Γ(−γ/2); exactly zero for γ ∈ {0, 2, 4, …}.
pub fn homogeneous_h(gamma: f64) -> Result<f64> {
    if !(gamma > -1.0) {
        return domain(format!("H_gamma needs gamma > -1, got {gamma}"));
    }
    let Some((lr, sr)) = ln_gamma_signed(-gamma / 2.0) else {
        return Ok(0.0);
    };
    let ln = (gamma + 1.0) / 2.0 * 2f64.ln() - gamma / 2.0 * PI.ln() + ln_gamma_pos((gamma + 1.0) / 2.0) - lr;
    Ok(sr * ln.exp())
}

/// Bessel function of the first kind J_ν(x), ν ≥ 0, x ≥ 0.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !(order >= 0.0) {
        return domain(format!("Bessel order must be nonnegative, got {order}"));
    }
    if !(x >= 0.0) {
        return domain(format!("Bessel argument must be nonnegative, got {x}"));
    }
    Ok(bessel_j_unchecked(order, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if use_series(nu, x) {
        return (nu * (x / 2.0).ln() - ln_gamma_pos(nu + 1.0)).exp() * series_sum(nu, x);
    }
    if x >= asymptotic_threshold(nu) {
        let (p, q) = hankel_pq(nu, x);
        let chi = x - (nu / 2.0 + 0.25) * PI;
        return (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin());
    }
    miller(nu, x)
}

/// J_ν(x)/x^ν, finite at x = 0.
pub fn bessel_j_scaled(nu: f64, x: f64) -> f64 {
    if use_series(nu, x) {
        return (-nu * 2f64.ln() - ln_gamma_pos(nu + 1.0)).exp() * series_sum(nu, x);
    }
    bessel_j_unchecked(nu, x) / x.powf(nu)
}

fn use_series(nu: f64, x: f64) -> bool {
    x <= 2.0 || x * x <= 2.0 * (nu + 1.0)
}

fn asymptotic_threshold(nu: f64) -> f64 {
    25f64.max(nu * nu / 2.0)
}

fn series_sum(nu: f64, x: f64) -> f64 {
    let y = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..500 {
        let mf = m as f64;
        term *= y / (mf * (nu + mf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence normalised with the Neumann sum
/// Σ_k (ν₀+2k)Γ(ν₀+k)/k! J_{ν₀+2k}(x) = (x/2)^{ν₀}.
fn miller(nu: f64, x: f64) -> f64 {
    let n = nu.floor() as usize;
    let nu0 = nu - n as f64;
    let top = nu.max(x);
    let mut start = (top + 30.0 + 5.0 * top.sqrt()).ceil() as usize;
    start += start % 2;

    // g_k = Γ(ν₀+k)/k!, carried downward: g_{k−1} = g_k·k/(ν₀+k−1)
    let top_k = (start / 2) as f64;
    let mut g = (ln_gamma_pos(nu0 + top_k) - ln_gamma_pos(top_k + 1.0)).exp();

    let mut f_next = 0.0; // f_{m+1}
    let mut f_cur = 1e-280; // f_m
    let mut sum = 0.0;
    let mut target = 0.0;
    let mut m = start;
    loop {
        if m % 2 == 0 {
            let k = m / 2;
            if k == 0 {
                sum += gamma(nu0 + 1.0) * f_cur;
            } else {
                let kf = k as f64;
                sum += (nu0 + 2.0 * kf) * g * f_cur;
                if k > 1 {
                    g *= kf / (nu0 + kf - 1.0);
                }
            }
        }
        if m == n {
            target = f_cur;
        }
        if m == 0 {
            break;
        }
        let f_prev = 2.0 * (nu0 + m as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        m -= 1;
        if f_cur.abs() > 1e200 {
            f_cur *= 1e-200;
            f_next *= 1e-200;
            sum *= 1e-200;
            target *= 1e-200;
        }
    }
    target * (x / 2.0).powf(nu0) / sum
}

/// Hankel asymptotic coefficients a_j(ν) = Π_{i≤j}(4ν²−(2i−1)²)/(j! 8^j), truncated
/// where the terms at argument `x` stop decreasing.
pub(crate) fn hankel_coefficients(nu: f64, x: f64) -> Vec<f64> {
    let mu = 4.0 * nu * nu;
    let mut out = vec![1.0];
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for j in 1..200 {
        let jf = j as f64;
        a *= (mu - (2.0 * jf - 1.0).powi(2)) / (8.0 * jf);
        if a == 0.0 {
            break;
        }
        let size = (a / x.powi(j)).abs();
        if size > last && jf > nu {
            break;
        }
        out.push(a);
        if size < 1e-18 {
            break;
        }
        last = size;
    }
    out
}

/// Coefficient lists (p_j, q_j) of P(ν,x) = Σ p_j x^{-j}, Q(ν,x) = Σ q_j x^{-j}.
pub(crate) fn hankel_pq_series(nu: f64, x: f64) -> (Vec<f64>, Vec<f64>) {
    let a = hankel_coefficients(nu, x);
    let mut p = vec![0.0; a.len()];
    let mut q = vec![0.0; a.len()];
    for (j, aj) in a.iter().enumerate() {
        let s = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 0 {
            p[j] = s * aj;
        } else {
            q[j] = s * aj;
        }
    }
    (p, q)
}

pub(crate) fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq_series(nu, x);
    (eval_inverse_powers(&p, x), eval_inverse_powers(&q, x))
}

pub(crate) fn eval_inverse_powers(c: &[f64], x: f64) -> f64 {
    let inv = 1.0 / x;
    c.iter().rev().fold(0.0, |acc, cj| acc * inv + cj)
}
