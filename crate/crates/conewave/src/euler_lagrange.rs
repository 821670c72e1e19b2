//! Both sides of the Euler–Lagrange identity for the zonal test directions g_k,
//! each computed by independent routes.
//!
//! Normalisations: `lhs_quadrature` is the exact left side written on the Penrose
//! cylinder; `rhs_quadrature` is the Penrose-side right side without the Plancherel
//! constants, and `rhs_exact` carries every constant (d ∈ {2, 3}).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{ab_coefficients, normalisation_constant, ExponentConfig};
use crate::cylinder::{self, Resolution};
use crate::error::{domain, Error, Result};
use crate::par;
use crate::penrose::{dg_closed, radial_fourier};
use crate::quadrature::{
    fixed_jacobi, gauss_legendre, jacobi_doubling, legendre_rule, Estimate, QuadratureConfig, MAX_NODES,
};
use crate::specfun::{
    bessel_j_scaled, gegenbauer_at_one, gegenbauer_unchecked, homogeneous_h, ln_beta,
    ln_gamma_pos, ln_gamma_signed, pochhammer, rgamma, rodrigues_r, sphere_area, zonal_poly, MAX_DEGREE,
};

/// A quadrature value with its error estimate and the size of the absolute
/// integrand, against which "zero" is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideEstimate {
    pub value: f64,
    pub error: f64,
    pub scale: f64,
}

impl SideEstimate {
    /// Sign certified beyond the error bar, or 0 when the value is within it.
    pub fn certified_sign(&self, floor: f64) -> i8 {
        let bar = self.error.max(floor * self.scale);
        if self.value > bar {
            1
        } else if self.value < -bar {
            -1
        } else {
            0
        }
    }

    pub fn is_zero_within(&self, rel: f64) -> bool {
        self.value.abs() <= rel * self.scale
    }
}

fn check_k(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return domain(format!("degree {k} exceeds {MAX_DEGREE}"));
    }
    Ok(())
}

/// (|S^{d−1}|/2)∫_{−π}^{π} cos(kT) ∫ C_k^ν(s)|cos T + s|^{γ_p}(1−s²)^{(d−2)/2} ds dT.
pub fn lhs_quadrature(exp: &ExponentConfig, k: usize, _cfg: &QuadratureConfig) -> Result<SideEstimate> {
    check_k(k)?;
    let area = sphere_area(exp.d)?;
    let nu = exp.nu;
    let run = |res: Resolution| {
        cylinder::integrate(
            exp.d,
            exp.gamma_p,
            k,
            res,
            |t| (k as f64 * t).cos(),
            |s| gegenbauer_unchecked(nu, k, s),
        )
    };
    let res = Resolution::new(exp.d, exp.gamma_p, k);
    let coarse = run(res);
    let fine = run(res.refined());
    let value = area * fine.total();
    if !value.is_finite() {
        return Err(Error::NonConvergence { estimate: value, error: f64::INFINITY });
    }
    Ok(SideEstimate {
        value,
        error: area * (fine.total() - coarse.total()).abs() + 4.0 * f64::EPSILON * area * fine.abs,
        scale: area * fine.abs,
    })
}

/// ∫₀^∞ J_μ J_ν τ^{−λ} dτ = (Γ(λ)/2^λ)Γ((μ+ν−λ+1)/2) / [Γ((λ+μ+ν+1)/2)Γ((λ+ν−μ+1)/2)Γ((λ+μ−ν+1)/2)].
pub fn watson_closed_form(mu: f64, nu2: f64, lambda: f64) -> Result<f64> {
    if !(mu + nu2 + 1.0 > lambda && lambda > 0.0) {
        return domain(format!(
            "lambda = {lambda} outside the convergence strip mu + nu + 1 > lambda > 0 (mu = {mu}, nu = {nu2})"
        ));
    }
    watson_continued(mu, nu2, lambda)
}

/// The same Gamma expression without the strip check; it continues the integral
/// analytically in λ. Fails only at poles of Γ((μ+ν−λ+1)/2).
fn watson_continued(mu: f64, nu2: f64, lambda: f64) -> Result<f64> {
    let Some((la, sa)) = ln_gamma_signed((mu + nu2 - lambda + 1.0) / 2.0) else {
        return domain("Watson expression has a pole here");
    };
    let r1 = rgamma((lambda + nu2 - mu + 1.0) / 2.0);
    let r2 = rgamma((lambda + mu - nu2 + 1.0) / 2.0);
    if r1 == 0.0 || r2 == 0.0 {
        return Ok(0.0);
    }
    let ln = ln_gamma_pos(lambda) - lambda * 2f64.ln() + la - ln_gamma_pos((lambda + mu + nu2 + 1.0) / 2.0);
    Ok(sa * ln.exp() * r1 * r2)
}

/// Closed-form left side (up to the calibration constant) and whether it
/// vanishes identically because H_γ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub value: f64,
    pub vanishing: bool,
}

/// (−1)^k H_γ (Γ(k+2ν)/k!) W(k, ν+k, 1+γ+ν).
pub fn lhs_closed(exp: &ExponentConfig, k: usize) -> Result<ClosedForm> {
    check_k(k)?;
    let g = exp.gamma_p;
    if let Some(ge) = exp.gamma_even() {
        if 2 * k as i64 > ge {
            return Ok(ClosedForm { value: 0.0, vanishing: true });
        }
        return domain(format!("closed form is 0·∞ at even gamma_p = {ge} with 2k <= gamma_p"));
    }
    let nu = exp.nu;
    let kf = k as f64;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let gk = (ln_gamma_pos(kf + 2.0 * nu) - ln_gamma_pos(kf + 1.0)).exp();
    let w = watson_continued(kf, nu + kf, 1.0 + g + nu)?;
    Ok(ClosedForm { value: sign * homogeneous_h(g)? * gk * w, vanishing: false })
}

/// lhs_quadrature/lhs_closed in the transform convention ĥ(τ) = ∫h(t)e^{−itτ}dt:
/// |S^{d−1}|(2π)^{(γ+1)/2} 2^ν √π Γ(ν+1/2)/Γ(2ν).
pub fn lhs_calibration_analytic(exp: &ExponentConfig) -> Result<f64> {
    let nu = exp.nu;
    let ln = (exp.gamma_p + 1.0) / 2.0 * (2.0 * PI).ln() + nu * 2f64.ln() + 0.5 * PI.ln() + ln_gamma_pos(nu + 0.5)
        - ln_gamma_pos(2.0 * nu);
    Ok(sphere_area(exp.d)? * ln.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub constant: f64,
    pub k0: usize,
    /// (k, lhs_quadrature/lhs_closed) at k₀, k₀+1, k₀+2.
    pub ratios: Vec<(usize, f64)>,
}

/// Measure c = lhs_quadrature/lhs_closed at k₀ and confirm it at k₀+1, k₀+2.
pub fn calibrate_lhs_constant(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<Calibration> {
    if exp.gamma_even().is_some() {
        return domain("closed form vanishes identically at even gamma_p; no calibration constant exists");
    }
    let k0 = (2..).find(|&k| !exp.on_boundary(k)).unwrap_or(2);
    let ratios = par::map_range(3, |j| -> Result<(usize, f64)> {
        let k = k0 + j;
        let q = lhs_quadrature(exp, k, cfg)?;
        let c = lhs_closed(exp, k)?;
        Ok((k, q.value / c.value))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let c = ratios[0].1;
    if !(c > 0.0) {
        return Err(Error::Consistency(format!("calibration constant {c} is not positive")));
    }
    for &(k, r) in &ratios[1..] {
        if ((r - c) / c).abs() > 1e-5 {
            return Err(Error::Consistency(format!(
                "calibration drifts with k: c({k0}) = {c}, c({k}) = {r}; transform convention mismatch"
            )));
        }
    }
    Ok(Calibration { constant: c, k0, ratios })
}

/// Closed form of ∫ h_k^α(t) e^{−itτ} dt:
/// 2^{α+k} Γ(α+k+1/2) √π R_k^α (−iτ)^k J_{α+k}(|τ|)/|τ|^{α+k}.
pub fn hk_fourier_transform(alpha: f64, k: usize, tau: f64) -> Result<Complex64> {
    let m = alpha + k as f64;
    let r = rodrigues_r(alpha, k)?;
    let pref = (m * 2f64.ln() + ln_gamma_pos(m + 0.5)).exp() * PI.sqrt() * r;
    let scaled = bessel_j_scaled(m, tau.abs());
    let ik = match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    Ok(ik * pref * tau.powi(k as i32) * scaled)
}

/// ∫ h_k^α(t) e^{−itτ} dt by Gauss–Jacobi quadrature, h_k^α = C_k^α(t)(1−t²)^{α−1/2}
/// (T_k at α = 0): the independent route for `hk_fourier_transform`.
pub fn hk_fourier_quadrature(alpha: f64, k: usize, tau: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !(alpha > -0.5) {
        return domain(format!("h_k^alpha needs alpha > -1/2, got {alpha}"));
    }
    let e = alpha - 0.5;
    let start = cfg.gauss_jacobi_order.max(k + tau.abs().ceil() as usize + 8);
    let re = jacobi_doubling(&|t: f64| zonal_poly(alpha, k, t) * (t * tau).cos(), e, e, start, cfg)?;
    let im = jacobi_doubling(&|t: f64| -zonal_poly(alpha, k, t) * (t * tau).sin(), e, e, start, cfg)?;
    Ok(Complex64::new(re.value, im.value))
}

fn kernel_constant(exp: &ExponentConfig) -> f64 {
    (2.0 * (exp.p - 1.0).powi(2)).powf(exp.nu)
}

/// (k+ν)|S^{d−1}| ∫ (2(p−1)²/(a_p s + b_p))^ν C_k^ν(s)(1−s²)^{(d−2)/2} ds.
pub fn rhs_quadrature(exp: &ExponentConfig, k: usize, cfg: &QuadratureConfig) -> Result<SideEstimate> {
    check_k(k)?;
    let (a, b) = ab_coefficients(exp.p);
    let nu = exp.nu;
    let beta = nu - 0.5;
    let c0 = kernel_constant(exp);
    let pref = (k as f64 + nu) * sphere_area(exp.d)?;
    let start = cfg.gauss_jacobi_order.max(k + 8);
    let f = |s: f64| c0 * (a * s + b).powf(-nu) * gegenbauer_unchecked(nu, k, s);
    let est = jacobi_doubling(&f, beta, beta, start, cfg)?;
    // |f| has kinks at the zeros of C_k, so no doubling: a fixed high order is plenty
    let scale = fixed_jacobi(&|s: f64| f(s).abs(), beta, beta, (4 * start).min(MAX_NODES));
    Ok(SideEstimate {
        value: pref * est.value,
        error: pref * est.error + 4.0 * f64::EPSILON * pref * scale,
        scale: pref * scale,
    })
}

/// The same quantity after k integrations by parts (Rodrigues formula): the
/// integrand (a_p t + b_p)^{−ν−k}(1−t²)^{k+ν−1/2} has one sign, so nothing cancels.
pub fn rhs_rodrigues(exp: &ExponentConfig, k: usize, cfg: &QuadratureConfig) -> Result<SideEstimate> {
    check_k(k)?;
    let (a, b) = ab_coefficients(exp.p);
    let nu = exp.nu;
    let kf = k as f64;
    if a == 0.0 && k > 0 {
        return Ok(SideEstimate { value: 0.0, error: 0.0, scale: 0.0 });
    }
    let e = kf + nu - 0.5;
    let est = jacobi_doubling(&|t: f64| (a * t + b).powf(-nu - kf), e, e, cfg.gauss_jacobi_order, cfg)?;
    let ln_const = ln_gamma_pos(nu + 0.5) - ln_gamma_pos(kf + nu + 0.5) - kf * 2f64.ln();
    let pref = (kf + nu)
        * sphere_area(exp.d)?
        * gegenbauer_at_one(nu, k)
        * ln_const.exp()
        * kernel_constant(exp)
        * pochhammer(nu, k)
        * (-a).powi(k as i32);
    Ok(SideEstimate {
        value: pref * est.value,
        error: (pref * est.error).abs() + 4.0 * f64::EPSILON * (pref * est.value).abs(),
        scale: (pref * est.value).abs(),
    })
}

/// Binomial-series certificate for the sign of the right side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCertificate {
    pub k: usize,
    /// Sign every term should carry: +1 for p < 2, (−1)^k for p > 2.
    pub expected_sign: i8,
    pub terms: Vec<f64>,
    pub all_signs_match: bool,
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// False when the tail is too large for the partial sum to be compared.
    pub conclusive: bool,
}

/// Terms (ν)_m/(m−k)! (−a_p/b_p)^m B((m−k+1)/2, k+ν+1/2) for m = k, k+2, …, each
/// multiplied by the positive constant (k+ν)|S^{d−1}|(2(p−1)²)^ν b_p^{−ν} R_k^ν.
pub fn rhs_series_signs(exp: &ExponentConfig, k: usize, terms: usize) -> Result<SeriesCertificate> {
    check_k(k)?;
    let (a, b) = ab_coefficients(exp.p);
    if a == 0.0 {
        return domain("series certificate needs p != 2");
    }
    let nu = exp.nu;
    let kf = k as f64;
    let ln_pref = ((kf + nu) * sphere_area(exp.d)? * kernel_constant(exp) * rodrigues_r(nu, k)?).ln()
        - nu * b.ln();
    let ln_ratio = (a / b).abs().ln();
    let step_sign = if a < 0.0 { 1.0 } else { -1.0 };
    let expected_sign: i8 = if a < 0.0 || k % 2 == 0 { 1 } else { -1 };
    let mut out = Vec::with_capacity(terms);
    for j in 0..terms {
        let m = k + 2 * j;
        let mf = m as f64;
        let ln = ln_pref + ln_gamma_pos(nu + mf) - ln_gamma_pos(nu) - ln_gamma_pos(mf - kf + 1.0)
            + mf * ln_ratio
            + ln_beta((mf - kf + 1.0) / 2.0, kf + nu + 0.5);
        let sign = if m % 2 == 0 { 1.0 } else { step_sign };
        out.push(sign * ln.exp());
    }
    let all_signs_match = out.iter().all(|t| t.signum() as i8 == expected_sign);
    let partial_sum: f64 = out.iter().sum();
    let tail_bound = match out.len() {
        n if n >= 2 => {
            let r = (out[n - 1] / out[n - 2]).abs();
            if r < 1.0 {
                out[n - 1].abs() * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        }
        _ => f64::INFINITY,
    };
    Ok(SeriesCertificate {
        k,
        expected_sign,
        all_signs_match,
        partial_sum,
        tail_bound,
        conclusive: tail_bound <= 1e-7 * partial_sum.abs(),
        terms: out,
    })
}

/// The right side with every constant:
/// C_d^{p−1}|S^{d−1}| ∫₀^∞ e^{−(p−1)ρ} ρ^{d−2} (D g_k)^(ρ) dρ, where (D g_k)^ = ρ ĝ_k.
pub fn rhs_exact(exp: &ExponentConfig, k: usize, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_k(k)?;
    let d = exp.d;
    if !(d == 2 || d == 3) {
        return domain("the full-constant right side is available for d in {2, 3}");
    }
    let dg = move |r: f64| dg_closed(d, k, r);
    let pm1 = exp.p - 1.0;
    let panel = 1.0;
    let rho_max = ((40.0 + 2.0 * k as f64) / exp.p).ceil();
    let panels = (rho_max / panel) as usize;
    let (n1, n2) = (16usize, 24usize);
    let mut points = Vec::new();
    for n in [n1, n2] {
        let r = legendre_rule(n);
        for j in 0..panels {
            let a = j as f64 * panel;
            for (x, w) in r.nodes.iter().zip(&r.weights) {
                points.push((n, a + panel / 2.0 * (1.0 + x), panel / 2.0 * w));
            }
        }
    }
    let values = par::map(&points, |&(_, rho, _)| radial_fourier(d, &dg, rho, cfg));
    let (mut s1, mut s2) = (0.0, 0.0);
    for (&(n, rho, w), v) in points.iter().zip(values) {
        let term = w * (-pm1 * rho).exp() * rho.powi(d as i32 - 2) * v?;
        if n == n1 {
            s1 += term;
        } else {
            s2 += term;
        }
    }
    let c_d = normalisation_constant(d)?;
    let pref = c_d.powf(exp.p - 1.0) * sphere_area(d)?;
    Ok(Estimate::new(pref * s2, pref * (s2 - s1).abs()))
}

/// rhs_exact/rhs_quadrature in closed form: C_d^{p−2}(2π)^d (p−1)^{1−d}.
pub fn rhs_exact_ratio_analytic(exp: &ExponentConfig) -> Result<f64> {
    let d = exp.d as f64;
    Ok(normalisation_constant(exp.d)?.powf(exp.p - 2.0) * (2.0 * PI).powf(d) * (exp.p - 1.0).powf(1.0 - d))
}

/// ‖e^{itD}g⋆‖_q^q on the Penrose cylinder, with a flag when γ_p is close enough
/// to −1 that the value is dominated by the blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub error: f64,
    pub near_blow_up: bool,
}

pub fn half_wave_norm_q(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    let s = lhs_quadrature(exp, 0, cfg)?;
    Ok(NormEstimate { value: s.value, error: s.error, near_blow_up: exp.gamma_p < -0.95 })
}

/// ‖ĝ⋆‖_{L^p(|ξ|^{p−1}dξ)} = [C_d^p |S^{d−1}| Γ(d−1) p^{1−d}]^{1/p}.
pub fn fstar_input_norm_p(exp: &ExponentConfig) -> Result<f64> {
    let d = exp.d as f64;
    let c = normalisation_constant(exp.d)?;
    let inner = c.powf(exp.p) * sphere_area(exp.d)? * ln_gamma_pos(d - 1.0).exp() * exp.p.powf(1.0 - d);
    Ok(inner.powf(1.0 / exp.p))
}

/// The same norm by radial quadrature of C_d^p ρ^{d−2} e^{−pρ}.
pub fn fstar_input_norm_p_quadrature(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<f64> {
    let c = normalisation_constant(exp.d)?;
    let m = exp.d as i32 - 2;
    let p = exp.p;
    let radial = gauss_legendre(|r: f64| r.powi(m) * (-p * r).exp(), 0.0, 120.0 / p, cfg)?;
    Ok((c.powf(p) * sphere_area(exp.d)? * radial.value).powf(1.0 / p))
}

/// ‖e^{itD}g⋆‖_q^q / ‖ĝ⋆‖_p^q.
pub fn lambda_multiplier(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(half_wave_norm_q(exp, cfg)?.value / fstar_input_norm_p(exp)?.powf(exp.q))
}

/// ‖e^{itD}g⋆‖_q^q / ‖ĝ⋆‖_p^p: the multiplier for which the identity holds at k = 0
/// with g⋆ unnormalised. Equal to `lambda_multiplier` only when ‖ĝ⋆‖_p = 1.
pub fn el_multiplier(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(half_wave_norm_q(exp, cfg)?.value / fstar_input_norm_p(exp)?.powf(exp.p))
}

/// Every route for one (d, p, k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElReport {
    pub exponents: ExponentConfig,
    pub k: usize,
    pub lhs_quad: SideEstimate,
    pub lhs_closed: Option<f64>,
    pub lhs_calibration: Option<f64>,
    pub rhs_quad: SideEstimate,
    pub rhs_rodrigues: Option<SideEstimate>,
    pub rhs_exact: Option<Estimate>,
    pub lambda_exact: Option<f64>,
    pub sign_lhs: i8,
    pub sign_rhs: i8,
    pub ratio_abs: f64,
}

/// Relative floor below which a side counts as zero against its absolute scale.
pub const ZERO_FLOOR: f64 = 1e-10;

pub fn el_report(exp: &ExponentConfig, k: usize, cfg: &QuadratureConfig, with_exact: bool) -> Result<ElReport> {
    let lhs_quad = lhs_quadrature(exp, k, cfg)?;
    let closed = lhs_closed(exp, k).ok();
    let lhs_calibration = match closed {
        Some(c) if !c.vanishing && c.value != 0.0 => Some(lhs_quad.value / c.value),
        _ => None,
    };
    let rhs_quad = rhs_quadrature(exp, k, cfg)?;
    let rhs_rod = if exp.is_critical() { None } else { Some(rhs_rodrigues(exp, k, cfg)?) };
    let (rhs_ex, lambda_exact) = if with_exact && (exp.d == 2 || exp.d == 3) {
        (Some(rhs_exact(exp, k, cfg)?), Some(el_multiplier(exp, cfg)?))
    } else {
        (None, None)
    };
    let rhs_best = rhs_rod.unwrap_or(rhs_quad);
    Ok(ElReport {
        exponents: exp.clone(),
        k,
        sign_lhs: lhs_quad.certified_sign(ZERO_FLOOR),
        sign_rhs: rhs_best.certified_sign(ZERO_FLOOR),
        ratio_abs: (rhs_best.value / lhs_quad.value).abs(),
        lhs_quad,
        lhs_closed: closed.map(|c| c.value),
        lhs_calibration,
        rhs_quad,
        rhs_rodrigues: rhs_rod,
        rhs_exact: rhs_ex,
        lambda_exact,
    })
}
