//! Conformal compactification of R^{1+d} into the cylinder [−π, π] × S^d, the
//! spherical half-wave calculus on zonal functions, and the numerical checks of
//! the intertwining law and of the diamond unfolding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ExponentConfig;
use crate::cylinder::{self, Resolution};
use crate::error::{domain, Error, Result};
use crate::par;
use crate::quadrature::{fixed_legendre, gauss_legendre, graded_breaks, jacobi_rule, jacobi_doubling, legendre_rule, oscillatory_tail, QuadratureConfig};
use crate::specfun::{bessel_j_unchecked, gegenbauer_at_one, gegenbauer_unchecked, ln_gamma_pos, sphere_area};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub omega: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenrosePoint {
    pub big_t: f64,
    pub big_r: f64,
    pub omega: Vec<f64>,
}

impl PenrosePoint {
    pub fn in_diamond(&self) -> bool {
        self.big_r >= 0.0 && self.big_r < PI - self.big_t.abs()
    }
}

/// T = arctan(t+r) + arctan(t−r), R = arctan(t+r) − arctan(t−r).
pub fn penrose_forward(pt: &SpacetimePoint) -> PenrosePoint {
    let (a, b) = ((pt.t + pt.r).atan(), (pt.t - pt.r).atan());
    PenrosePoint { big_t: a + b, big_r: a - b, omega: pt.omega.clone() }
}

/// t ± r = tan((T ± R)/2).
pub fn penrose_inverse(pp: &PenrosePoint) -> Result<SpacetimePoint> {
    if pp.big_r < 0.0 {
        return domain(format!("R = {} is negative", pp.big_r));
    }
    if !pp.in_diamond() {
        return domain(format!("(T, R) = ({}, {}) is on or outside the diamond boundary; its preimage is at infinity", pp.big_t, pp.big_r));
    }
    let plus = ((pp.big_t + pp.big_r) / 2.0).tan();
    let minus = ((pp.big_t - pp.big_r) / 2.0).tan();
    Ok(SpacetimePoint { t: (plus + minus) / 2.0, r: (plus - minus) / 2.0, omega: pp.omega.clone() })
}

/// Ω from both sides: 2/√((1+(t+r)²)(1+(t−r)²)) and cos T + cos R.
pub fn conformal_factor_pair(pt: &SpacetimePoint) -> (f64, f64) {
    let (u, v) = (pt.t + pt.r, pt.t - pt.r);
    let direct = 2.0 / ((1.0 + u * u).sqrt() * (1.0 + v * v).sqrt());
    let pp = penrose_forward(pt);
    (direct, pp.big_t.cos() + pp.big_r.cos())
}

pub fn conformal_factor(pt: &SpacetimePoint) -> Result<f64> {
    let (a, b) = conformal_factor_pair(pt);
    if (a - b).abs() > 1e-9 * a.abs().max(1e-300).max(1.0) {
        return Err(Error::Consistency(format!("conformal factor routes disagree: {a} vs {b}")));
    }
    Ok(a)
}

/// Worst forward/inverse round-trip error and worst disagreement of the two Ω
/// formulas over `n` random points with |t|, r ≤ 10, relative to max(1, |·|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub samples: usize,
    pub round_trip: f64,
    pub omega_dual: f64,
}

pub fn round_trip_check<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<RoundTripReport> {
    let mut rep = RoundTripReport { samples: n, round_trip: 0.0, omega_dual: 0.0 };
    for _ in 0..n {
        let omega: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let pt = SpacetimePoint { t: rng.gen_range(-10.0..10.0), r: rng.gen_range(0.0..10.0), omega };
        let back = penrose_inverse(&penrose_forward(&pt))?;
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
        rep.round_trip = rep.round_trip.max(rel(pt.t, back.t)).max(rel(pt.r, back.r));
        let (a, b) = conformal_factor_pair(&pt);
        rep.omega_dual = rep.omega_dual.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok(rep)
}

/// A smooth bump in (T, R) supported in a disc inside the diamond, optionally
/// multiplied by cos(mT).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamondTrial {
    pub centre: (f64, f64),
    pub radius: f64,
    pub time_harmonic: Option<u32>,
}

impl DiamondTrial {
    pub fn eval(&self, big_t: f64, big_r: f64) -> f64 {
        if self.radius <= 0.0 {
            return 0.0;
        }
        let (dt, dr) = (big_t - self.centre.0, big_r - self.centre.1);
        let q = (dt * dt + dr * dr) / (self.radius * self.radius);
        if q >= 1.0 {
            return 0.0;
        }
        let bump = (1.0 - 1.0 / (1.0 - q)).exp();
        match self.time_harmonic {
            Some(m) => bump * (m as f64 * big_t).cos(),
            None => bump,
        }
    }

    fn fits(&self) -> bool {
        let (t0, r0) = self.centre;
        r0 - self.radius > 0.0 && r0 + self.radius + t0.abs() + self.radius < PI
    }
}

/// |∫ φ∘𝒫 Ω^{d+1} dt dx − ∫_diamond φ dT dσ| for a radial φ; both sides are
/// reduced to 2-D integrals and the common |S^{d−1}| factor is kept.
pub fn pushforward_check(phi: &DiamondTrial, d: u32, cfg: &QuadratureConfig) -> Result<f64> {
    if !(d == 2 || d == 3) {
        return domain(format!("pushforward check implemented for d in {{2,3}}, got {d}"));
    }
    if phi.radius <= 0.0 {
        return Ok(0.0);
    }
    if !phi.fits() {
        return domain("trial bump must lie strictly inside the diamond");
    }
    let area = sphere_area(d)?;
    let m = d as i32 - 1;
    let (t0, r0, rho) = (phi.centre.0, phi.centre.1, phi.radius);
    // the outer level tolerates the inner level's noise
    let outer = QuadratureConfig { abs_tol: 100.0 * cfg.abs_tol, rel_tol: 100.0 * cfg.rel_tol, ..*cfg };
    let failed = std::sync::atomic::AtomicBool::new(false);
    let inner = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| match gauss_legendre(f, a, b, cfg) {
        Ok(e) => e.value,
        Err(_) => {
            failed.store(true, std::sync::atomic::Ordering::Relaxed);
            0.0
        }
    };

    // physical side on the preimage box of the bump's bounding square
    let plus = |x: f64| (x / 2.0).tan();
    let (p_lo, p_hi) = (plus(t0 + r0 - 2.0 * rho), plus(t0 + r0 + 2.0 * rho));
    let (m_lo, m_hi) = (plus(t0 - r0 - 2.0 * rho), plus(t0 - r0 + 2.0 * rho));
    let (t_lo, t_hi) = ((p_lo + m_lo) / 2.0, (p_hi + m_hi) / 2.0);
    let (x_lo, x_hi) = (((p_lo - m_hi) / 2.0).max(0.0), (p_hi - m_lo) / 2.0);
    let physical = gauss_legendre(
        |t| {
            inner(x_lo, x_hi, &|r: f64| {
                let pt = SpacetimePoint { t, r, omega: Vec::new() };
                let pp = penrose_forward(&pt);
                let (omega, _) = conformal_factor_pair(&pt);
                r.powi(m) * phi.eval(pp.big_t, pp.big_r) * omega.powi(d as i32 + 1)
            })
        },
        t_lo,
        t_hi,
        &outer,
    )?;
    let cylinder = gauss_legendre(
        |bt| inner(r0 - rho, r0 + rho, &|br: f64| phi.eval(bt, br) * br.sin().powi(m)),
        t0 - rho,
        t0 + rho,
        &outer,
    )?;
    if failed.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::NonConvergence { estimate: physical.value, error: f64::NAN });
    }
    Ok(area * (physical.value - cylinder.value).abs())
}

/// Σ c_ℓ C_ℓ^ν(X₀) on S^d, ν = (d−1)/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalFunction {
    pub d: u32,
    pub coeffs: Vec<Complex64>,
}

impl ZonalFunction {
    pub fn new(d: u32, coeffs: Vec<Complex64>) -> Self {
        Self { d, coeffs }
    }

    /// The single harmonic Y_ℓ = C_ℓ^ν.
    pub fn harmonic(d: u32, l: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); l + 1];
        coeffs[l] = Complex64::new(1.0, 0.0);
        Self { d, coeffs }
    }

    pub fn nu(&self) -> f64 {
        (self.d as f64 - 1.0) / 2.0
    }

    pub fn eval(&self, x0: f64) -> Complex64 {
        let nu = self.nu();
        self.coeffs.iter().enumerate().map(|(l, c)| c * gegenbauer_unchecked(nu, l, x0)).sum()
    }
}

/// D_{S^d}: c_ℓ ↦ (ℓ + (d−1)/2) c_ℓ.
pub fn dsd_apply(f: &ZonalFunction) -> ZonalFunction {
    let nu = f.nu();
    let coeffs = f.coeffs.iter().enumerate().map(|(l, c)| c * (l as f64 + nu)).collect();
    ZonalFunction { d: f.d, coeffs }
}

/// e^{iT D_{S^d}}: c_ℓ ↦ e^{iT(ℓ + (d−1)/2)} c_ℓ.
pub fn spherical_halfwave(f: &ZonalFunction, big_t: f64) -> ZonalFunction {
    let nu = f.nu();
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, c)| c * Complex64::from_polar(1.0, big_t * (l as f64 + nu)))
        .collect();
    ZonalFunction { d: f.d, coeffs }
}

/// g(r) = (1 + X₀)^{(d−1)/2} F(X₀), X₀ = (1−r²)/(1+r²).
pub fn penrose_transform_zonal(f: &ZonalFunction, r: f64) -> Complex64 {
    let q = 1.0 + r * r;
    f.eval((1.0 - r * r) / q) * (2.0 / q).powf(f.nu())
}

/// Closed form of D g_k: (k+ν)(2/(1+r²))^{(d+1)/2} C_k^ν((1−r²)/(1+r²)).
pub fn dg_closed(d: u32, k: usize, r: f64) -> f64 {
    let nu = (d as f64 - 1.0) / 2.0;
    let q = 1.0 + r * r;
    (k as f64 + nu) * (2.0 / q).powf(nu + 1.0) * gegenbauer_unchecked(nu, k, (1.0 - r * r) / q)
}

/// c_d 2^{(1−d)/2}|S^{d−1}| ∫ [C_ℓ(t)/C_ℓ(1)](1−t)^{(1−d)/2}(1−t²)^{(d−2)/2} dt,
/// c_d = Γ((d−1)/2)/(2π^{(d+1)/2}): the eigenvalue of D_{S^d}^{−1} on degree ℓ.
pub fn funk_hecke_eigenvalue(d: u32, l: usize, cfg: &QuadratureConfig) -> Result<f64> {
    if d < 2 {
        return domain("Funk–Hecke eigenvalue needs d >= 2");
    }
    let df = d as f64;
    let nu = (df - 1.0) / 2.0;
    let c_d = (ln_gamma_pos(nu) - (df + 1.0) / 2.0 * PI.ln()).exp() / 2.0;
    let norm = gegenbauer_at_one(nu, l);
    let est = jacobi_doubling(
        &|t: f64| gegenbauer_unchecked(nu, l, t) / norm,
        -0.5,
        (df - 2.0) / 2.0,
        cfg.gauss_jacobi_order.max(l / 2 + 2),
        cfg,
    )?;
    Ok(c_d * 2f64.powf((1.0 - df) / 2.0) * sphere_area(d)? * est.value)
}

/// Radial Fourier transform ∫_{R^d} f(|x|)e^{−ix·ξ}dx at |ξ| = ρ > 0 for d ∈ {2, 3}:
/// 2π∫f J₀(ρr) r dr, or (4π/ρ)∫f r sin(ρr) dr. The head runs to a whole number of
/// half-periods past r = 8; the oscillatory remainder is Euler-averaged.
pub fn radial_fourier(d: u32, f: &(dyn Fn(f64) -> f64 + Sync), rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(d == 2 || d == 3) {
        return domain(format!("radial transform implemented for d in {{2,3}}, got {d}"));
    }
    if !(rho > 0.0) {
        return domain("radial transform is evaluated at rho > 0");
    }
    let body = |r: f64| -> f64 {
        let kernel = match d {
            2 => 2.0 * PI * bessel_j_unchecked(0.0, rho * r) * r,
            _ => 4.0 * PI / rho * (rho * r).sin() * r,
        };
        f(r) * kernel
    };
    let half = PI / rho;
    let cut = (8.0 / half).ceil().max(1.0) * half;
    // the transform can be much smaller than the integrand it cancels from, so
    // judge the head against ∫|body|
    let panels = (cut / half).round() as usize;
    let magnitude: f64 = (0..panels)
        .map(|j| fixed_legendre(&|r: f64| body(r).abs(), j as f64 * half, (j + 1) as f64 * half, 12))
        .sum();
    let cfg = &QuadratureConfig { abs_tol: cfg.abs_tol.max(1e-14 * magnitude), ..*cfg };
    let head = gauss_legendre(body, 0.0, cut, cfg)?;
    let tail = oscillatory_tail(body, cut, half, cfg)?;
    Ok(head.value + tail.value)
}

/// Composite Legendre nodes on [0, top] in unit panels.
fn composite_nodes(top: f64, n: usize) -> Vec<(f64, f64)> {
    let rule = legendre_rule(n);
    let panels = top.ceil() as usize;
    let mut out = Vec::with_capacity(panels * n);
    for j in 0..panels {
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((j as f64 + 0.5 * (1.0 + x), 0.5 * w));
        }
    }
    out
}

/// Max over the r-grid of |D g_k (numerical) − D g_k (closed form)|, relative to
/// the sup of the closed form. Numerically: ĝ_k by the radial transform, multiplied
/// by |ξ| and transformed back (ĝ_k decays like e^{−ρ}, so [0, 60] suffices).
pub fn intertwining_check(d: u32, k: usize, r_grid: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    if !(d == 2 || d == 3) {
        return domain(format!("intertwining check implemented for d in {{2,3}}, got {d}"));
    }
    if k > 12 {
        return domain(format!("intertwining check supports k <= 12, got {k}"));
    }
    let gk = ZonalFunction::harmonic(d, k);
    let g = move |r: f64| penrose_transform_zonal(&gk, r).re;
    let nodes = composite_nodes(60.0, 20);
    let ghat = par::map(&nodes, |&(rho, _)| radial_fourier(d, &g, rho, cfg))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let numeric = |r: f64| -> f64 {
        let s: f64 = nodes
            .iter()
            .zip(&ghat)
            .map(|(&(rho, w), gh)| {
                let kernel = match d {
                    2 => 2.0 * PI * bessel_j_unchecked(0.0, r * rho) * rho,
                    _ if r == 0.0 => 4.0 * PI * rho * rho,
                    _ => 4.0 * PI / r * (r * rho).sin() * rho,
                };
                w * rho * gh * kernel
            })
            .sum();
        s / (2.0 * PI).powi(d as i32)
    };
    let sup = r_grid.iter().map(|&r| dg_closed(d, k, r).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    Ok(r_grid
        .iter()
        .map(|&r| (numeric(r) - dg_closed(d, k, r)).abs() / sup)
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnfoldReport {
    /// ∫ over the diamond R < π − |T| of V, in (T, R) coordinates.
    pub diamond: Complex64,
    /// ½ ∫_{−π}^{π} ∫_{S^d} V, on the cylinder in (T, s = cos R).
    pub half_cylinder: Complex64,
    pub scale: f64,
    pub residual: f64,
}

/// 2|S^{d−1}|∫₀^π cos(ℓT) ∫₀^{π−T} C_ℓ(cos R)(cos T + cos R)^γ sin^{d−1}R dR dT.
///
/// With L = π − T, cos T + cos R = 2 sin((L−R)/2) cos((R−T)/2), so the inner
/// integrand is (L−R)^γ times a smooth factor: one Jacobi rule per T. The outer
/// integral is graded toward T = π, where the diamond pinches.
fn diamond_direct(d: u32, gamma: f64, l: usize) -> Result<f64> {
    let nu = (d as f64 - 1.0) / 2.0;
    let inner_rule = jacobi_rule(48.max(l + 24), gamma, 0.0);
    let inner = |bt: f64| -> f64 {
        let len = PI - bt;
        let h = len / 2.0;
        let mut s = 0.0;
        for (x, w) in inner_rule.nodes.iter().zip(&inner_rule.weights) {
            let br = h * (1.0 + x);
            let u = h * (1.0 - x);
            let smooth = 2.0 * if u > 0.0 { (u / 2.0).sin() / u } else { 0.5 } * ((br - bt) / 2.0).cos();
            s += w * gegenbauer_unchecked(nu, l, br.cos()) * br.sin().powi(d as i32 - 1) * smooth.powf(gamma);
        }
        s * h.powf(gamma + 1.0)
    };
    let outer = legendre_rule(24);
    let mut breaks: Vec<f64> = (0..=8).map(|j| j as f64 * PI / 16.0).collect();
    breaks.extend(graded_breaks(PI / 2.0, 48).iter().rev().skip(1).map(|b| PI - b));
    let panels: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    let parts = par::map(&panels, |&(a, b)| {
        let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
        outer.nodes.iter().zip(&outer.weights).map(|(x, w)| {
            let bt = m + h * x;
            h * w * (l as f64 * bt).cos() * inner(bt)
        }).sum::<f64>()
    });
    Ok(2.0 * sphere_area(d)? * parts.iter().sum::<f64>())
}

/// Diamond vs half-cylinder integral of V(T, X) = e^{−iTν}(e^{iTD}G)(X)|Ω|^{γ_p},
/// Ω = cos T + X₀. With e^{−iTν}e^{iT(ℓ+ν)} = e^{iℓT} and evenness in T, each
/// harmonic contributes through cos(ℓT) only. The two sides use different
/// coordinates and different quadrature.
pub fn diamond_unfold_check(g: &ZonalFunction, exp: &ExponentConfig, _cfg: &QuadratureConfig) -> Result<UnfoldReport> {
    if g.d != exp.d {
        return domain("zonal function and exponents have different d");
    }
    if !(exp.gamma_p > -1.0) {
        return domain("gamma_p must exceed -1");
    }
    let area = sphere_area(exp.d)?;
    let nu = exp.nu;
    let mut diamond = Complex64::new(0.0, 0.0);
    let mut half = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (l, c) in g.coeffs.iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let sums = cylinder::integrate(
            exp.d,
            exp.gamma_p,
            l,
            Resolution::new(exp.d, exp.gamma_p, l),
            |t| (l as f64 * t).cos(),
            |s| gegenbauer_unchecked(nu, l, s),
        );
        diamond += c * diamond_direct(exp.d, exp.gamma_p, l)?;
        half += c * (area * sums.total());
        scale += c.norm() * area * sums.abs;
    }
    Ok(UnfoldReport { diamond, half_cylinder: half, scale, residual: (diamond - half).norm() / scale.max(f64::MIN_POSITIVE) })
}

/// ½∫∫|Ω|^{γ_p} dT dσ: the half-wave norm seen from the cylinder.
pub fn half_wave_on_cylinder(exp: &ExponentConfig, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(diamond_unfold_check(&ZonalFunction::harmonic(exp.d, 0), exp, cfg)?.half_cylinder.re)
}

/// The degree ≤ 1 tangent directions g⋆, i g⋆, x·∇g⋆, i D g⋆ pulled back to the
/// sphere, (1+X₀)^{−ν}·g, fitted by c₀ + c₁X₀ on a grid; returns the worst
/// fit residual over the four directions.
pub fn tangent_space_check(d: u32) -> Result<f64> {
    if d < 2 {
        return domain("tangent check needs d >= 2");
    }
    let nu = (d as f64 - 1.0) / 2.0;
    let gstar = |r: f64| (2.0 / (1.0 + r * r)).powf(nu);
    let directions: [Box<dyn Fn(f64) -> Complex64>; 4] = [
        Box::new(|r| Complex64::new(gstar(r), 0.0)),
        Box::new(|r| Complex64::new(0.0, gstar(r))),
        Box::new(|r| Complex64::new(-2.0 * nu * r * r / (1.0 + r * r) * gstar(r), 0.0)),
        Box::new(|r| Complex64::new(0.0, dg_closed(d, 0, r))),
    ];
    let grid: Vec<f64> = (0..41).map(|j| 0.25 * j as f64).collect();
    let mut worst: f64 = 0.0;
    for f in directions.iter() {
        let samples: Vec<(f64, Complex64)> = grid
            .iter()
            .map(|&r| {
                let x0 = (1.0 - r * r) / (1.0 + r * r);
                (x0, f(r) / (1.0 + x0).powf(nu))
            })
            .collect();
        // least squares for c₀ + c₁X₀
        let n = samples.len() as f64;
        let sx: f64 = samples.iter().map(|s| s.0).sum();
        let sxx: f64 = samples.iter().map(|s| s.0 * s.0).sum();
        let sy: Complex64 = samples.iter().map(|s| s.1).sum();
        let sxy: Complex64 = samples.iter().map(|s| s.1 * s.0).sum();
        let det = n * sxx - sx * sx;
        let c1 = (sxy * n - sy * sx) / det;
        let c0 = (sy - c1 * sx) / n;
        let scale = samples.iter().map(|s| s.1.norm()).fold(0.0, f64::max).max(1.0);
        for (x0, y) in &samples {
            worst = worst.max((y - c0 - c1 * x0).norm() / scale);
        }
    }
    Ok(worst)
}
