//! Deterministic quadrature: adaptive Gauss–Legendre, Gauss–Jacobi with order
//! doubling, interior algebraic singularities, and oscillatory semi-infinite tails.

mod oscillatory;
pub mod rules;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
pub use oscillatory::{bessel_product_integral, euler_average, oscillatory_tail};
pub use rules::{jacobi_rule, legendre_rule, Rule, MAX_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub gauss_legendre_order: usize,
    pub gauss_jacobi_order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panel_depth: usize,
    /// Upper limit Λ of the directly integrated part of oscillatory integrals.
    pub oscillatory_truncation: f64,
    /// Number of averaging levels applied to tail partial sums.
    pub tail_extrapolation_terms: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            gauss_legendre_order: 16,
            gauss_jacobi_order: 24,
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_panel_depth: 40,
            oscillatory_truncation: 400.0,
            tail_extrapolation_terms: 12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Domain(format!("quadrature config: {m}")));
        if self.gauss_legendre_order < 4 || self.gauss_jacobi_order < 4 {
            return bad("orders must be at least 4");
        }
        if self.gauss_legendre_order * 2 > rules::MAX_NODES || self.gauss_jacobi_order * 2 > rules::MAX_NODES {
            return bad("orders exceed the node-table limit");
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.oscillatory_truncation >= 50.0) {
            return bad("oscillatory truncation must be at least 50");
        }
        if self.tail_extrapolation_terms < 4 {
            return bad("at least 4 tail extrapolation terms are required");
        }
        Ok(())
    }

    fn tol(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A quadrature value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate::new(self.value + o.value, self.error + o.error)
    }
}

/// Fixed n-point Gauss–Legendre on [a, b].
pub fn fixed_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let r = legendre_rule(n);
    let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
    h * r.nodes.iter().zip(&r.weights).map(|(x, w)| w * f(m + h * x)).sum::<f64>()
}

/// n-point versus 2n-point Gauss–Legendre on a single panel.
pub fn panel_estimate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> Estimate {
    let coarse = fixed_legendre(f, a, b, n);
    let fine = fixed_legendre(f, a, b, 2 * n);
    Estimate::new(fine, (fine - coarse).abs())
}

/// Adaptive Gauss–Legendre with panel bisection and order-doubling error estimates.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::new(0.0, 0.0));
    }
    let n = cfg.gauss_legendre_order;
    let whole = panel_estimate(&f, a, b, n);
    let target = cfg.tol(whole.value);
    let span = (b - a).abs();
    let mut total = Estimate::new(0.0, 0.0);
    let mut failed = false;
    let mut stack = vec![(a, b, whole, 0usize)];
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let share = target * (hi - lo).abs() / span;
        if est.error <= share || !est.value.is_finite() {
            total = total + est;
            continue;
        }
        if depth >= cfg.max_panel_depth {
            failed = true;
            total = total + est;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, panel_estimate(&f, lo, mid, n), depth + 1));
        stack.push((mid, hi, panel_estimate(&f, mid, hi, n), depth + 1));
    }
    if failed || !total.value.is_finite() {
        return Err(Error::NonConvergence { estimate: total.value, error: total.error });
    }
    Ok(total)
}

/// Fixed n-point Gauss–Jacobi sum Σ w_i f(x_i) for the weight (1−x)^a (1+x)^b.
pub fn fixed_jacobi<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let r = jacobi_rule(n, a, b);
    r.nodes.iter().zip(&r.weights).map(|(x, w)| w * f(*x)).sum()
}

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0 && b > -1.0) {
        return domain(format!("Jacobi exponents must exceed -1, got ({a}, {b})"));
    }
    Ok(())
}

/// ∫_{−1}^{1} f(t)(1−t)^a(1+t)^b dt, doubling the order until two rules agree.
pub fn gauss_jacobi<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_exponents(a, b)?;
    jacobi_doubling(&f, a, b, cfg.gauss_jacobi_order, cfg)
}

pub(crate) fn jacobi_doubling<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    start: usize,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let mut n = start.max(2);
    let mut prev = fixed_jacobi(f, a, b, n);
    loop {
        let next_n = 2 * n;
        if next_n > rules::MAX_NODES {
            return Err(Error::NonConvergence { estimate: prev, error: f64::NAN });
        }
        let cur = fixed_jacobi(f, a, b, next_n);
        let err = (cur - prev).abs();
        if err <= cfg.tol(cur) {
            return Ok(Estimate::new(cur, err));
        }
        prev = cur;
        n = next_n;
    }
}

/// ∫_{−1}^{1} f(s)|s − s0|^γ ds: split at s0 and give each side the algebraic
/// endpoint weight. Outside (−1, 1) the kernel is smooth and Legendre is used.
pub fn singular_split<F: Fn(f64) -> f64>(f: F, gamma: f64, s0: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(gamma > -1.0) {
        return domain(format!("singularity exponent must exceed -1, got {gamma}"));
    }
    if !(s0 > -1.0 && s0 < 1.0) {
        return gauss_legendre(|s| f(s) * (s - s0).abs().powf(gamma), -1.0, 1.0, cfg);
    }
    let (hl, hr) = ((1.0 + s0) / 2.0, (1.0 - s0) / 2.0);
    let left = jacobi_doubling(&|x: f64| f(-1.0 + hl * (1.0 + x)), gamma, 0.0, cfg.gauss_jacobi_order, cfg)?;
    let right = jacobi_doubling(&|x: f64| f(s0 + hr * (1.0 + x)), 0.0, gamma, cfg.gauss_jacobi_order, cfg)?;
    let (cl, cr) = (hl.powf(gamma + 1.0), hr.powf(gamma + 1.0));
    Ok(Estimate::new(
        cl * left.value + cr * right.value,
        cl * left.error + cr * right.error,
    ))
}

/// ∫_0^len u^g (len−u)^e h(u, len−u) du with n-point rules per panel, where h may
/// carry a branch point at u = −gap. Returns (value, same integral of |h|).
///
/// When the branch point is close compared with `len`, the interval is graded
/// geometrically away from u = 0 so every panel sees it at a distance of at least
/// its own length. `h` receives both distances so neither end loses digits.
pub fn graded_edge_integral<H: Fn(f64, f64) -> f64>(
    len: f64,
    g: f64,
    e: f64,
    gap: Option<f64>,
    n: usize,
    h: H,
) -> (f64, f64) {
    if len <= 0.0 {
        return (0.0, 0.0);
    }
    let half = len / 2.0;
    let gap = match gap {
        Some(gp) if gp < len => gp.min(half),
        _ => {
            let r = jacobi_rule(n, e, g);
            let scale = half.powf(g + e + 1.0);
            let (mut s, mut sa) = (0.0, 0.0);
            for (x, w) in r.nodes.iter().zip(&r.weights) {
                let val = h(half * (1.0 + x), half * (1.0 - x));
                s += w * val;
                sa += w * val.abs();
            }
            return (scale * s, scale * sa);
        }
    };

    let (mut s, mut sa) = (0.0, 0.0);
    // first panel [0, gap] carries u^g
    {
        let r = jacobi_rule(n, 0.0, g);
        let hw = gap / 2.0;
        let scale = hw.powf(g + 1.0);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            let u = hw * (1.0 + x);
            let v = len - u;
            let val = v.powf(e) * h(u, v);
            s += scale * w * val;
            sa += scale * w * val.abs();
        }
    }
    // doubling panels until past the midpoint
    let gl = legendre_rule(n);
    let mut lo = gap;
    while lo < half {
        let hi = (2.0 * lo).min(half);
        let (hw, mid) = ((hi - lo) / 2.0, (hi + lo) / 2.0);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let u = mid + hw * x;
            let v = len - u;
            let val = u.powf(g) * v.powf(e) * h(u, v);
            s += hw * w * val;
            sa += hw * w * val.abs();
        }
        lo = hi;
    }
    // last panel [lo, len] carries (len−u)^e
    if lo < len {
        let r = jacobi_rule(n, e, 0.0);
        let hw = (len - lo) / 2.0;
        let scale = hw.powf(e + 1.0);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            let v = hw * (1.0 - x);
            let u = len - v;
            let val = u.powf(g) * h(u, v);
            s += scale * w * val;
            sa += scale * w * val.abs();
        }
    }
    (s, sa)
}

/// Breakpoints grading [0, width] geometrically toward 0 by factors of two, down
/// to a smallest panel of `width·2^{−levels}`.
pub fn graded_breaks(width: f64, levels: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..=levels).map(|j| width * 0.5f64.powi(j as i32)).collect();
    b.push(0.0);
    b.reverse();
    b
}
