//! Per-(d, p) decision: is the exponential candidate a critical point?
//!
//! p = 2 is checked by vanishing of both sides; 1 < p < 2 by a sign mismatch at
//! the witness degree ⌊γ_p/2⌋ + 2; 2 < p by decay of |R/L| (and, for d ∈ {2, 3},
//! an explicit degree where the fully normalised identity fails by a factor 2).

use serde::{Deserialize, Serialize};

use crate::cone::{ab_coefficients, ExponentConfig};
use crate::error::{domain, Error, Result};
use crate::euler_lagrange::{
    el_multiplier, el_report, lhs_calibration_analytic, lhs_closed, lhs_quadrature, rhs_exact, rhs_quadrature, rhs_rodrigues,
    rhs_series_signs, ElReport, SideEstimate, ZERO_FLOOR,
};
use crate::par;
use crate::quadrature::{jacobi_doubling, QuadratureConfig};
use crate::specfun::{gegenbauer_norm_sq, ln_gamma_pos, ln_gamma_signed, rodrigues_r, MAX_DEGREE};

/// Slope allowance over log(2/3) in the decay fits.
pub const SLOPE_SLACK: f64 = 0.05;

/// Relative floor for "vanishes" at p = 2 and at the boundary γ_p ∈ {2k−4, 2k−2}.
pub const VANISH_TOL: f64 = 1e-8;

/// k = ⌊γ_p/2⌋ + 2, exact when γ_p is rational.
pub fn subcritical_witness(exp: &ExponentConfig) -> Result<usize> {
    if !(exp.p < 2.0) || exp.is_critical() {
        return domain("the sign witness exists for 1 < p < 2 only");
    }
    let half_floor = match exp.gamma_exact {
        Some(g) => (g / num_rational::Rational64::from_integer(2)).floor().to_integer(),
        None => (exp.gamma_p / 2.0).floor() as i64,
    };
    let k = (half_floor + 2) as usize;
    if k > MAX_DEGREE {
        return domain(format!("witness degree {k} exceeds {MAX_DEGREE}"));
    }
    Ok(k)
}

/// Γ(k−γ/2)Γ(k+2ν) / (Γ(γ/2+ν+k+1)Γ(k+1)): the k-dependence of |L(k)|.
pub fn lhs_gamma_display(exp: &ExponentConfig, k: usize) -> Result<f64> {
    let (g, nu, kf) = (exp.gamma_p, exp.nu, k as f64);
    let Some((la, sa)) = ln_gamma_signed(kf - g / 2.0) else {
        return domain("Gamma display has a pole at this k");
    };
    let ln = la + ln_gamma_pos(kf + 2.0 * nu) - ln_gamma_pos(g / 2.0 + nu + kf + 1.0) - ln_gamma_pos(kf + 1.0);
    Ok(sa * ln.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTrace {
    pub ks: Vec<usize>,
    pub lhs: Vec<SideEstimate>,
    pub rhs: Vec<SideEstimate>,
    /// |R(k)/L(k)|
    pub ratios: Vec<f64>,
    /// Least-squares slope of log|R/L| − (γ_p+2) log k over k = 2..20.
    pub slope: f64,
    /// First k with |R/L| below 1e−6 of its k = 2 value.
    pub decayed_at: usize,
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    num / den
}

/// |R/L|(k) for k = 2..k_max with R from the single-signed Rodrigues route.
/// Errors when L vanishes, the slope is too shallow, or the trace has not
/// fallen by 1e−6 by k_max: any of these would contradict the decay argument.
pub fn supercritical_ratio_trace(exp: &ExponentConfig, k_max: usize, cfg: &QuadratureConfig) -> Result<RatioTrace> {
    if !(exp.p > 2.0) || exp.is_critical() {
        return domain("the ratio trace is defined for 2 < p < 2d/(d-1)");
    }
    if !(20..=MAX_DEGREE).contains(&k_max) {
        return domain(format!("k_max must lie in 20..={MAX_DEGREE}"));
    }
    let mut ks = Vec::new();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut ratios: Vec<f64> = Vec::new();
    let mut decayed_at = None;
    let mut lo = 2;
    while lo <= k_max && decayed_at.is_none() {
        let hi = if lo == 2 { 20 } else { (lo + 9).min(k_max) };
        let chunk = par::map_range(hi - lo + 1, |j| -> Result<(SideEstimate, SideEstimate)> {
            let k = lo + j;
            Ok((lhs_quadrature(exp, k, cfg)?, rhs_rodrigues(exp, k, cfg)?))
        });
        for (j, pair) in chunk.into_iter().enumerate() {
            let (l, r) = pair?;
            let k = lo + j;
            if l.certified_sign(ZERO_FLOOR) == 0 {
                return Err(Error::Consistency(format!("L({k}) is not distinguishable from 0 at p = {}", exp.p_text)));
            }
            let ratio = (r.value / l.value).abs();
            if decayed_at.is_none() && !ratios.is_empty() && ratio < 1e-6 * ratios[0] {
                decayed_at = Some(k);
            }
            ks.push(k);
            lhs.push(l);
            rhs.push(r);
            ratios.push(ratio);
        }
        lo = hi + 1;
    }
    let g = exp.gamma_p;
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(&ratios)
        .filter(|(k, _)| **k <= 20)
        .map(|(&k, &r)| (k as f64, r.ln() - (g + 2.0) * (k as f64).ln()))
        .collect();
    let slope = fit_slope(&pts);
    if slope > (2.0f64 / 3.0).ln() + SLOPE_SLACK {
        return Err(Error::Consistency(format!("ratio slope {slope} is shallower than log(2/3) + {SLOPE_SLACK}")));
    }
    let Some(decayed_at) = decayed_at else {
        return Err(Error::Consistency(format!("|R/L| did not fall below 1e-6 of its k=2 value by k = {k_max}")));
    };
    Ok(RatioTrace { ks, lhs, rhs, ratios, slope, decayed_at })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WangReport {
    /// |b_p/a_p|, the distance of the kernel's branch point.
    pub radius: f64,
    /// max |a_p s + b_p|^{−ν} on the ellipse with foci ±1 and parameter 3/2.
    pub ellipse_max: f64,
    /// (k, a_k^ν) Gegenbauer coefficients of (a_p s + b_p)^{−ν}.
    pub coefficients: Vec<(usize, f64)>,
    /// Smallest C with |a_k| ≤ C·M·k^{1−ν}(2/3)^{k+1} on the range.
    pub constant: f64,
    /// Ratio of the same quotient at the last k to its maximum: ≤ 1 when C is stable.
    pub tail_quotient: f64,
    pub slope: f64,
}

/// Gegenbauer coefficients of K(s) = (a_p s + b_p)^{−ν} against the analytic bound.
/// The coefficient integrals use the Rodrigues form, where nothing cancels, so
/// coefficients far below machine epsilon relative to a_0 stay accurate.
pub fn wang_bound_check(exp: &ExponentConfig, ks: std::ops::RangeInclusive<usize>, cfg: &QuadratureConfig) -> Result<WangReport> {
    if !(exp.p > 2.0) || exp.is_critical() {
        return domain("the analytic bound is used for 2 < p < 2d/(d-1)");
    }
    let (a, b) = ab_coefficients(exp.p);
    let radius = (b / a).abs();
    if radius <= 1.25 * (1.0 - 1e-9) {
        return Err(Error::Consistency(format!("|b/a| = {radius} is not above 5/4")));
    }
    let nu = exp.nu;
    let rho = 1.5f64;
    let ellipse_max = (0..=720)
        .map(|j| {
            let th = j as f64 * std::f64::consts::PI / 360.0;
            let s = num_complex::Complex64::new((rho + 1.0 / rho) / 2.0 * th.cos(), (rho - 1.0 / rho) / 2.0 * th.sin());
            (s * a + b).norm().powf(-nu)
        })
        .fold(0.0, f64::max);
    let mut coefficients = Vec::new();
    for k in ks {
        let kf = k as f64;
        let e = kf + nu - 0.5;
        let est = jacobi_doubling(&|t: f64| (a * t + b).powf(-nu - kf), e, e, cfg.gauss_jacobi_order, cfg)?;
        let deriv = crate::specfun::pochhammer(nu, k) * (-a).powi(k as i32);
        let ck = rodrigues_r(nu, k)? * deriv * est.value / gegenbauer_norm_sq(nu, k);
        coefficients.push((k, ck));
    }
    let quotient = |k: usize, c: f64| c.abs() / (ellipse_max * (k as f64).powf(1.0 - nu) * (2.0f64 / 3.0).powi(k as i32 + 1));
    let quotients: Vec<f64> = coefficients.iter().map(|&(k, c)| quotient(k, c)).collect();
    let constant = quotients.iter().copied().fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = coefficients.iter().map(|&(k, c)| (k as f64, c.abs().ln())).collect();
    Ok(WangReport {
        radius,
        ellipse_max,
        tail_quotient: quotients.last().copied().unwrap_or(0.0) / constant,
        constant,
        slope: fit_slope(&pts),
        coefficients,
    })
}

/// The fully normalised refutation: M·|RHS_exact(k)| < ½|L(k)|, with M the
/// multiplier fixed by the k = 0 identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRefutation {
    pub k: usize,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs_exact: f64,
    pub rhs_exact_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    /// Both sides vanish for k = 1..8 within the stated relative tolerance.
    CriticalPoint { max_rel_lhs: f64, max_rel_rhs: f64 },
    FailsBySign { k: usize, lhs: f64, rhs: f64 },
    FailsByDecay {
        k: usize,
        ratio_trace: Vec<f64>,
        bound_constant: f64,
        slope: f64,
        refutation: Option<LambdaRefutation>,
    },
    Inconclusive { reason: String },
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::CriticalPoint { .. } => "CriticalPoint",
            Outcome::FailsBySign { .. } => "FailsBySign",
            Outcome::FailsByDecay { .. } => "FailsByDecay",
            Outcome::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn witness_k(&self) -> Option<usize> {
        match self {
            Outcome::FailsBySign { k, .. } | Outcome::FailsByDecay { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, Outcome::Inconclusive { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub exponents: ExponentConfig,
    pub outcome: Outcome,
    pub reports: Vec<ElReport>,
    pub lambda: Option<f64>,
}

fn inconclusive(exp: &ExponentConfig, reason: String, reports: Vec<ElReport>) -> Verdict {
    Verdict { exponents: exp.clone(), outcome: Outcome::Inconclusive { reason }, reports, lambda: None }
}

pub fn decide(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<Verdict> {
    if exp.is_critical() {
        decide_critical(exp, cfg)
    } else if exp.p < 2.0 {
        decide_subcritical(exp, cfg)
    } else {
        decide_supercritical(exp, cfg)
    }
}

fn decide_critical(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<Verdict> {
    let reports = par::map_range(8, |j| el_report(exp, j + 1, cfg, false)).into_iter().collect::<Result<Vec<_>>>()?;
    let rel = |s: &SideEstimate| s.value.abs() / s.scale.max(f64::MIN_POSITIVE);
    let max_rel_lhs = reports.iter().map(|r| rel(&r.lhs_quad)).fold(0.0, f64::max);
    let max_rel_rhs = reports.iter().map(|r| rel(&r.rhs_quad)).fold(0.0, f64::max);
    if max_rel_lhs > VANISH_TOL || max_rel_rhs > VANISH_TOL {
        return Ok(inconclusive(
            exp,
            format!("at p = 2 both sides should vanish; max relative sizes {max_rel_lhs:e}, {max_rel_rhs:e}"),
            reports,
        ));
    }
    Ok(Verdict { exponents: exp.clone(), outcome: Outcome::CriticalPoint { max_rel_lhs, max_rel_rhs }, reports, lambda: None })
}

fn decide_subcritical(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<Verdict> {
    let k = subcritical_witness(exp)?;
    let report = el_report(exp, k, cfg, false)?;
    let lhs = report.lhs_quad;
    let rod = report.rhs_rodrigues.unwrap_or(report.rhs_quad);
    let series = rhs_series_signs(exp, k, 60)?;
    let reports = vec![report.clone()];
    let rhs_positive = report.rhs_quad.certified_sign(ZERO_FLOOR) > 0 && rod.certified_sign(ZERO_FLOOR) > 0 && series.all_signs_match;
    if !rhs_positive {
        return Ok(inconclusive(exp, format!("R({k}) not certified positive by both routes"), reports));
    }
    let lhs_ok = if exp.near_boundary(k, 1e-12) {
        // float p within rounding of the boundary: both routes must put L at zero
        let closed_small = match lhs_closed(exp, k) {
            Ok(c) => (c.value * lhs_calibration_analytic(exp)?).abs() <= VANISH_TOL * lhs.scale,
            Err(_) => exp.gamma_even().is_some(),
        };
        lhs.is_zero_within(VANISH_TOL) && closed_small
    } else {
        let closed_negative = lhs_closed(exp, k).map(|c| c.value < 0.0).unwrap_or(false);
        lhs.certified_sign(ZERO_FLOOR) < 0 && closed_negative
    };
    if !lhs_ok {
        return Ok(inconclusive(exp, format!("L({k}) = {:e} not certified nonpositive by both routes", lhs.value), reports));
    }
    Ok(Verdict {
        exponents: exp.clone(),
        outcome: Outcome::FailsBySign { k, lhs: lhs.value, rhs: rod.value },
        reports,
        lambda: None,
    })
}

fn decide_supercritical(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<Verdict> {
    let trace = match supercritical_ratio_trace(exp, 40, cfg) {
        Ok(t) => t,
        Err(Error::Consistency(msg)) => return Ok(inconclusive(exp, msg, Vec::new())),
        Err(e) => return Err(e),
    };
    let wang = match wang_bound_check(exp, 4..=30, cfg) {
        Ok(w) => w,
        Err(Error::Consistency(msg)) => return Ok(inconclusive(exp, msg, Vec::new())),
        Err(e) => return Err(e),
    };
    let mut refutation = None;
    let mut lambda = None;
    let mut k = trace.decayed_at;
    if exp.d == 2 || exp.d == 3 {
        let m = el_multiplier(exp, cfg)?;
        lambda = Some(m);
        for (i, &kk) in trace.ks.iter().enumerate() {
            let l = trace.lhs[i].value;
            let ex = rhs_exact(exp, kk, cfg)?;
            if m * (ex.value.abs() + ex.error) < 0.5 * l.abs() {
                refutation = Some(LambdaRefutation { k: kk, lambda: m, lhs: l, rhs_exact: ex.value, rhs_exact_error: ex.error });
                k = kk;
                break;
            }
        }
        if refutation.is_none() {
            return Ok(inconclusive(exp, "no degree with lambda*|RHS| < |L|/2 up to the trace end".into(), Vec::new()));
        }
    }
    let report = el_report(exp, k, cfg, false)?;
    Ok(Verdict {
        exponents: exp.clone(),
        outcome: Outcome::FailsByDecay { k, ratio_trace: trace.ratios, bound_constant: wang.constant, slope: trace.slope, refutation },
        reports: vec![report],
        lambda,
    })
}

/// Signs of (L, R) at the given degrees. At p > 2 both follow (−1)^k, so no sign
/// witness exists there; used to confirm the branches are exclusive.
pub fn sign_pattern(exp: &ExponentConfig, ks: &[usize], cfg: &QuadratureConfig) -> Result<Vec<(usize, i8, i8)>> {
    ks.iter()
        .map(|&k| {
            let l = lhs_quadrature(exp, k, cfg)?;
            let r = if exp.is_critical() { rhs_quadrature(exp, k, cfg)? } else { rhs_rodrigues(exp, k, cfg)? };
            Ok((k, l.certified_sign(ZERO_FLOOR), r.certified_sign(ZERO_FLOOR)))
        })
        .collect()
}
