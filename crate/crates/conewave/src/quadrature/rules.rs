//! Gauss–Jacobi node/weight tables for the weight (1−x)^a (1+x)^b on [−1, 1].
//!
//! Nodes come from the symmetric Jacobi matrix (Golub–Welsch), polished by Newton
//! steps on the three-term recurrence; weights use the closed form in P_n'.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use once_cell::sync::{Lazy, OnceCell};

use crate::specfun::ln_gamma_pos;

/// Largest rule the cache will build.
pub const MAX_NODES: usize = 768;

#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type Key = (usize, u64, u64);
static CACHE: Lazy<Mutex<HashMap<Key, Arc<OnceCell<Arc<Rule>>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached Gauss–Jacobi rule. Construction happens once per key; concurrent callers
/// block on the same cell instead of seeing a half-built table.
pub fn jacobi_rule(n: usize, a: f64, b: f64) -> Arc<Rule> {
    assert!(n >= 1 && n <= MAX_NODES, "rule size {n} out of range");
    assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
    let cell = {
        let mut map = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        map.entry((n, a.to_bits(), b.to_bits())).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build(n, a, b))).clone()
}

pub fn legendre_rule(n: usize) -> Arc<Rule> {
    jacobi_rule(n, 0.0, 0.0)
}

/// (P_n(x), P_{n−1}(x)) for the Jacobi family.
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    if n == 0 {
        return (prev, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let s = 2.0 * jf + a + b;
        let c1 = 2.0 * jf * (jf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (jf + a - 1.0) * (jf + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// (1−x²)·P_n'(x) from the pair (P_n, P_{n−1}).
fn derivative_times(n: usize, a: f64, b: f64, x: f64, pn: f64, pn1: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    (nf * ((a - b) - s * x) * pn + 2.0 * (nf + a) * (nf + b) * pn1) / s
}

fn build(n: usize, a: f64, b: f64) -> Rule {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let jf = j as f64;
        let s = 2.0 * jf + a + b;
        m[(j, j)] = if j == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if j + 1 < n {
            let k = jf + 1.0;
            let sk = 2.0 * k + a + b;
            let off = if j == 0 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))).sqrt()
            } else {
                (4.0 * k * (k + a) * (k + b) * (k + a + b) / (sk * sk * (sk + 1.0) * (sk - 1.0))).sqrt()
            };
            m[(j, j + 1)] = off;
            m[(j + 1, j)] = off;
        }
    }
    let mut nodes: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let ln_c = (a + b + 1.0) * 2f64.ln() + ln_gamma_pos(n as f64 + a + 1.0) + ln_gamma_pos(n as f64 + b + 1.0)
        - ln_gamma_pos(n as f64 + a + b + 1.0)
        - ln_gamma_pos(n as f64 + 1.0);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pn, pn1) = jacobi_pair(n, a, b, *x);
            let dp = derivative_times(n, a, b, *x, pn, pn1) / (1.0 - *x * *x);
            let step = pn / dp;
            let nx = *x - step;
            if nx > -1.0 && nx < 1.0 {
                *x = nx;
            }
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (pn, pn1) = jacobi_pair(n, a, b, *x);
        let omx2 = (1.0 - *x) * (1.0 + *x);
        let dp = derivative_times(n, a, b, *x, pn, pn1) / omx2;
        weights.push((ln_c - omx2.ln() - 2.0 * dp.abs().ln()).exp());
    }
    Rule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_beta;

    #[test]
    fn weight_sums_match_beta() {
        for (n, a, b) in [(5, 0.0, 0.0), (17, -0.5, -0.5), (40, 0.5, -0.3), (64, 2.5, 0.7), (200, 39.5, 39.5)] {
            let r = jacobi_rule(n, a, b);
            let s: f64 = r.weights.iter().sum();
            let exact = ((a + b + 1.0) * 2f64.ln() + ln_beta(a + 1.0, b + 1.0)).exp();
            assert!((s / exact - 1.0).abs() < 1e-12, "({n},{a},{b}): {s} vs {exact}");
        }
    }

    #[test]
    fn chebyshev_nodes_are_cosines() {
        let n = 9;
        let r = jacobi_rule(n, -0.5, -0.5);
        for (i, x) in r.nodes.iter().enumerate() {
            let exact = -(((2 * i + 1) as f64) * std::f64::consts::PI / (2.0 * n as f64)).cos();
            assert!((x - exact).abs() < 1e-15);
            assert!((r.weights[i] - std::f64::consts::PI / n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn repeated_lookup_returns_same_table() {
        let a = jacobi_rule(12, 0.25, 0.5);
        let b = jacobi_rule(12, 0.25, 0.5);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
