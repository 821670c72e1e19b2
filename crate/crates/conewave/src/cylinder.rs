//! Double integrals over the cylinder [0, π] × [−1, 1] of the form
//! ∫₀^π w(T) ∫ h(s)|s + cos T|^γ (1 − s²)^β ds dT, β = (d−2)/2.
//!
//! The inner integral is split at s₀ = −cos T; each side carries the algebraic
//! weight of the kink and of the sphere pole, and for half-integer β the far pole
//! becomes a nearby branch point as s₀ approaches ±1, handled by geometric
//! grading. The outer integral is graded toward T = 0 and T = π, where the inner
//! integral behaves like A + B·T^{2(γ+β+1)}.

use std::f64::consts::PI;

use crate::par;
use crate::quadrature::{graded_breaks, graded_edge_integral, legendre_rule};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Resolution {
    pub inner: usize,
    pub outer: usize,
    pub levels: usize,
}

impl Resolution {
    /// The smallest outer panel contributes like its width to the power
    /// 2(γ+β+1)+1; grade until that is below double precision.
    pub fn new(d: u32, gamma: f64, k: usize) -> Self {
        let beta = (d as f64 - 2.0) / 2.0;
        let e = 2.0 * (gamma + beta + 1.0) + 1.0;
        let levels = ((54.0 / e).ceil() as usize + 2).min(56);
        Self { inner: 20.max(k / 2 + 12), outer: 20, levels }
    }

    pub fn refined(self) -> Self {
        Self { inner: self.inner + 8, outer: self.outer + 8, levels: self.levels + 4 }
    }
}

/// Contributions from below (s < −cos T) and above (s > −cos T) the kink, and the
/// integral of the absolute integrand.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CylinderSums {
    pub below: f64,
    pub above: f64,
    pub abs: f64,
}

impl CylinderSums {
    pub fn total(&self) -> f64 {
        self.below + self.above
    }
}

struct OuterNode {
    weight: f64,
    t: f64,
    /// 1 + s₀ = 1 − cos T
    dl: f64,
    /// 1 − s₀ = 1 + cos T
    dr: f64,
}

fn node_near_zero(weight: f64, t: f64) -> OuterNode {
    let s = (t / 2.0).sin();
    let c = (t / 2.0).cos();
    OuterNode { weight, t, dl: 2.0 * s * s, dr: 2.0 * c * c }
}

fn node_near_pi(weight: f64, tau: f64) -> OuterNode {
    let s = (tau / 2.0).sin();
    let c = (tau / 2.0).cos();
    OuterNode { weight, t: PI - tau, dl: 2.0 * c * c, dr: 2.0 * s * s }
}

fn outer_nodes(coarse: usize, res: Resolution) -> Vec<OuterNode> {
    let gl = legendre_rule(res.outer);
    let width = PI / coarse as f64;
    let mut nodes = Vec::new();
    let panel = |a: f64, b: f64, from_pi: bool, nodes: &mut Vec<OuterNode>| {
        let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let v = m + h * x;
            nodes.push(if from_pi { node_near_pi(h * w, v) } else { node_near_zero(h * w, v) });
        }
    };
    let breaks = graded_breaks(width, res.levels);
    for w in breaks.windows(2) {
        panel(w[0], w[1], false, &mut nodes);
        panel(w[0], w[1], true, &mut nodes);
    }
    for j in 1..coarse.saturating_sub(1) {
        let (a, b) = (j as f64 * width, (j + 1) as f64 * width);
        if b <= PI / 2.0 {
            panel(a, b, false, &mut nodes);
        } else if a >= PI / 2.0 {
            panel(PI - b, PI - a, true, &mut nodes);
        } else {
            panel(a, PI / 2.0, false, &mut nodes);
            panel(PI - b, PI / 2.0, true, &mut nodes);
        }
    }
    nodes
}

/// Evaluate the double integral. `profile` is the s-profile h, `time` the weight w;
/// `degree` sizes the coarse outer mesh to the oscillation of both.
pub(crate) fn integrate<H, W>(d: u32, gamma: f64, degree: usize, res: Resolution, time: W, profile: H) -> CylinderSums
where
    H: Fn(f64) -> f64 + Sync,
    W: Fn(f64) -> f64 + Sync,
{
    let beta = (d as f64 - 2.0) / 2.0;
    let half_integer = beta.fract() != 0.0;
    let coarse = 4.max(degree + 2);
    let nodes = outer_nodes(coarse, res);
    let parts = par::map(&nodes, |nd| {
        let gap_left = half_integer.then_some(nd.dr);
        let gap_right = half_integer.then_some(nd.dl);
        // below the kink: u = s₀ − s, 1 + s = v, 1 − s = dr + u
        let (below, below_abs) = graded_edge_integral(nd.dl, gamma, beta, gap_left, res.inner, |u, v| {
            profile(-1.0 + v) * (nd.dr + u).powf(beta)
        });
        // above the kink: u = s − s₀, 1 − s = v, 1 + s = dl + u
        let (above, above_abs) = graded_edge_integral(nd.dr, gamma, beta, gap_right, res.inner, |u, v| {
            profile(1.0 - v) * (nd.dl + u).powf(beta)
        });
        let w = nd.weight * time(nd.t);
        (w * below, w * above, nd.weight * time(nd.t).abs() * (below_abs + above_abs))
    });
    parts.into_iter().fold(CylinderSums::default(), |acc, (b, a, s)| CylinderSums {
        below: acc.below + b,
        above: acc.above + a,
        abs: acc.abs + s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_kernel_reduces_to_beta_integral() {
        // γ = 0, h = 1, w = 1: π·∫(1−s²)^β ds
        for (d, exact) in [(2u32, PI * 2.0), (3, PI * PI / 2.0), (4, PI * 4.0 / 3.0)] {
            let s = integrate(d, 0.0, 0, Resolution::new(d, 0.0, 0), |_| 1.0, |_| 1.0);
            assert!((s.total() - exact).abs() < 1e-13 * exact, "d={d}: {}", s.total());
        }
    }
}
