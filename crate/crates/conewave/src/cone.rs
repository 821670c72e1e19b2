//! Exponent bookkeeping, exponential-candidate parameters (A, b, c) and the
//! symmetry group of the cone extension operator acting on them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, QuadratureConfig};
use crate::specfun::sphere_area;

/// An exponent p as supplied: an exact rational when the text allows it.
#[derive(Debug, Clone, PartialEq)]
pub struct PValue {
    pub text: String,
    pub value: f64,
    pub exact: Option<Rational64>,
}

impl PValue {
    pub fn from_f64(p: f64) -> Self {
        Self { text: format!("{p}"), value: p, exact: None }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        let r = Rational64::new(num, den);
        Self { text: format!("{r}"), value: ratio_f64(r), exact: Some(r) }
    }
}

fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl FromStr for PValue {
    type Err = Error;

    /// Accepts "n/m", plain decimals (read exactly, so "1.5" is 3/2) and
    /// scientific notation (kept as a float).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Exponent(format!("cannot parse exponent '{s}'"));
        let exact = if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Some(Rational64::new(n, d))
        } else if t.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-' || c == '+') {
            decimal_ratio(t)
        } else {
            None
        };
        let value = match exact {
            Some(r) => ratio_f64(r),
            None => t.parse::<f64>().map_err(|_| bad())?,
        };
        if !value.is_finite() {
            return Err(bad());
        }
        Ok(Self { text: t.to_string(), value, exact })
    }
}

fn decimal_ratio(t: &str) -> Option<Rational64> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 || int.len() > 15 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: i64 = digits.parse().ok()?;
    let r = Rational64::new(if neg { -n } else { n }, 10i64.pow(frac.len() as u32));
    Some(r)
}

/// (d, p, p′, q, γ_p, ν) with exact rational companions when p is rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub d: u32,
    pub p: f64,
    pub p_prime: f64,
    pub q: f64,
    pub gamma_p: f64,
    pub nu: f64,
    /// p exactly as supplied.
    pub p_text: String,
    #[serde(skip)]
    pub p_exact: Option<Rational64>,
    #[serde(skip)]
    pub gamma_exact: Option<Rational64>,
}

/// Upper end 2d/(d−1) of the admissible exponent range.
pub fn p_upper(d: u32) -> f64 {
    2.0 * d as f64 / (d as f64 - 1.0)
}

/// Build the exponent bookkeeping from a float p.
pub fn make_exponents(d: u32, p: f64) -> Result<ExponentConfig> {
    make_exponents_from(d, &PValue::from_f64(p))
}

pub fn make_exponents_from(d: u32, pv: &PValue) -> Result<ExponentConfig> {
    if d < 2 {
        return Err(Error::Exponent(format!("dimension must be at least 2, got {d}")));
    }
    let p = pv.value;
    let upper = p_upper(d);
    let in_range = match pv.exact {
        Some(r) => {
            let df = d as i64;
            r > Rational64::from_integer(1) && r < Rational64::new(2 * df, df - 1)
        }
        None => p > 1.0 && p < upper,
    };
    if !in_range {
        return Err(Error::Exponent(format!(
            "p = {} lies outside (1, {upper}); there gamma_p <= -1 and |cos T + cos R|^gamma_p is not integrable",
            pv.text
        )));
    }
    let df = d as f64;
    let p_prime = p / (p - 1.0);
    let (gamma_p, gamma_exact) = match pv.exact {
        Some(r) => {
            // γ = (d+1)(2m−n)/(2(n−m)) for p = n/m
            let (n, m) = (*r.numer(), *r.denom());
            let g = Rational64::new((d as i64 + 1) * (2 * m - n), 2 * (n - m));
            (ratio_f64(g), Some(g))
        }
        None => ((df + 1.0) * (p_prime / 2.0 - 1.0), None),
    };
    Ok(ExponentConfig {
        d,
        p,
        p_prime,
        q: (df + 1.0) / (df - 1.0) * p_prime,
        gamma_p,
        nu: (df - 1.0) / 2.0,
        p_text: pv.text.clone(),
        p_exact: pv.exact,
        gamma_exact,
    })
}

impl ExponentConfig {
    /// p = 2 exactly (rational input) or within 1e−12 for float input.
    pub fn is_critical(&self) -> bool {
        match self.p_exact {
            Some(r) => r == Rational64::from_integer(2),
            None => (self.p - 2.0).abs() < 1e-12,
        }
    }

    /// Some(γ) when γ_p is known exactly to be a nonnegative even integer.
    pub fn gamma_even(&self) -> Option<i64> {
        if let Some(g) = self.gamma_exact {
            if g.is_integer() && !g.is_negative() && (g.to_integer() % 2 == 0) {
                return Some(g.to_integer());
            }
            return None;
        }
        (self.gamma_p == 0.0).then_some(0)
    }

    /// Whether γ_p sits exactly on {2k−4, 2k−2}.
    pub fn on_boundary(&self, k: usize) -> bool {
        match self.gamma_exact {
            Some(g) => {
                let k = k as i64;
                g == Rational64::from_integer(2 * k - 4) || g == Rational64::from_integer(2 * k - 2)
            }
            None => {
                let k = k as f64;
                self.gamma_p == 2.0 * k - 4.0 || self.gamma_p == 2.0 * k - 2.0
            }
        }
    }

    /// On the boundary exactly, or (float input only) within `tol` of it.
    pub fn near_boundary(&self, k: usize, tol: f64) -> bool {
        if self.on_boundary(k) {
            return true;
        }
        let kf = k as f64;
        self.gamma_exact.is_none()
            && [2.0 * kf - 4.0, 2.0 * kf - 2.0].iter().any(|b| (self.gamma_p - b).abs() <= tol * b.abs().max(1.0))
    }

    pub fn gamma_text(&self) -> String {
        match self.gamma_exact {
            Some(g) => format!("{g}"),
            None => format!("{}", self.gamma_p),
        }
    }
}

impl fmt::Display for ExponentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} p={} q={} gamma_p={}", self.d, self.p_text, self.q, self.gamma_text())
    }
}

/// (a_p, b_p) = ((p−1)²−1, (p−1)²+1); a_p is formed as p(p−2) so it vanishes exactly at 2.
pub fn ab_coefficients(p: f64) -> (f64, f64) {
    (p * (p - 2.0), (p - 1.0) * (p - 1.0) + 1.0)
}

/// Normalisation C_d fixing the inverse transform of C_d|ξ|^{−1}e^{−|ξ|} at x = 0 to
/// 2^{(d−1)/2}, with ĝ(ξ) = ∫ g(x)e^{−ix·ξ}dx. The radial moment ∫ρ^{d−2}e^{−ρ}dρ is
/// integrated numerically.
pub fn normalisation_constant(d: u32) -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let m = d as i32 - 2;
    let moment = gauss_legendre(|r: f64| r.powi(m) * (-r).exp(), 0.0, 100.0 + 4.0 * d as f64, &cfg)?.value;
    let nu = (d as f64 - 1.0) / 2.0;
    Ok(2f64.powf(nu) * (2.0 * PI).powi(d as i32) / (sphere_area(d)? * moment))
}

/// Parameters of ĝ(ξ) = |ξ|^{−1} exp(A|ξ| + b·ξ + c).
#[derive(Debug, Clone, PartialEq)]
pub struct FFunctionParams {
    pub a: Complex64,
    pub b: Vec<Complex64>,
    pub c: Complex64,
}

impl FFunctionParams {
    pub fn canonical(d: u32) -> Result<Self> {
        Ok(Self {
            a: Complex64::new(-1.0, 0.0),
            b: vec![Complex64::zero(); d as usize],
            c: Complex64::new(normalisation_constant(d)?.ln(), 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// |Re b| < −Re A.
    pub fn is_admissible(&self) -> bool {
        let rb = self.b.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
        rb < -self.a.re
    }

    /// exp(A|ξ| + b·ξ + c) = |ξ|·ĝ(ξ).
    pub fn density(&self, xi: &[f64]) -> Complex64 {
        let r = norm(xi);
        let lin: Complex64 = self.b.iter().zip(xi).map(|(b, x)| b * x).sum();
        (self.a * r + lin + self.c).exp()
    }

    pub fn ghat(&self, xi: &[f64]) -> Complex64 {
        self.density(xi) / norm(xi)
    }
}

/// Elements of the symmetry group.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryElement {
    Dilation(f64),
    Boost(Vec<f64>),
    SectorialExpansion { theta: Vec<f64>, lambda: f64 },
    Translation { t0: f64, x0: Vec<f64> },
    Phase(f64),
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cdot(b: &[Complex64], v: &[f64]) -> Complex64 {
    b.iter().zip(v).map(|(z, x)| z * x).sum()
}

impl SymmetryElement {
    pub fn inverse(&self) -> Self {
        use SymmetryElement::*;
        match self {
            Dilation(l) => Dilation(1.0 / l),
            Boost(x) => Boost(x.iter().map(|v| -v).collect()),
            SectorialExpansion { theta, lambda } => SectorialExpansion { theta: theta.clone(), lambda: 1.0 / lambda },
            Translation { t0, x0 } => Translation { t0: -t0, x0: x0.iter().map(|v| -v).collect() },
            Phase(t) => Phase(-t),
        }
    }

    /// The point η at which the transformed density samples the original one,
    /// together with the constant prefactor; (S f)(ξ) = pref·phase(ξ)·f(η(ξ)).
    fn geometry(&self, xi: &[f64], p: f64) -> (Vec<f64>, Complex64) {
        use SymmetryElement::*;
        let d = xi.len() as f64;
        let r = norm(xi);
        match self {
            Dilation(l) => (xi.iter().map(|x| l * x).collect(), Complex64::from(l.powf((d - 1.0) / p))),
            Boost(x0) => {
                let s = norm(x0);
                if s == 0.0 {
                    return (xi.to_vec(), Complex64::from(1.0));
                }
                let e: Vec<f64> = x0.iter().map(|v| v / s).collect();
                let jp = (1.0 + s * s).sqrt();
                let par = dot(xi, &e);
                let eta = xi
                    .iter()
                    .zip(&e)
                    .zip(x0)
                    .map(|((x, ei), x0i)| x - par * ei + jp * par * ei - r * x0i)
                    .collect();
                (eta, Complex64::from(1.0))
            }
            SectorialExpansion { theta, lambda } => {
                let l2 = lambda * lambda;
                let par = dot(xi, theta);
                let eta = xi
                    .iter()
                    .zip(theta)
                    .map(|(x, t)| (1.0 - l2) / 2.0 * r * t + (1.0 + l2) / 2.0 * par * t + lambda * (x - par * t))
                    .collect();
                (eta, Complex64::from(lambda.powf((d - 1.0) / p)))
            }
            Translation { t0, x0 } => {
                let phase = Complex64::new(0.0, -(t0 * r + dot(x0, xi))).exp();
                (xi.to_vec(), phase)
            }
            Phase(t) => (xi.to_vec(), Complex64::new(0.0, *t).exp()),
        }
    }

    /// Jacobian of the point map against the cone measure dξ/|ξ|.
    pub fn measure_factor(&self, d: u32) -> f64 {
        match self {
            SymmetryElement::Dilation(l) | SymmetryElement::SectorialExpansion { lambda: l, .. } => {
                l.powi(d as i32 - 1)
            }
            _ => 1.0,
        }
    }

    /// Point map only (for measure checks).
    pub fn map_point(&self, xi: &[f64]) -> Vec<f64> {
        self.geometry(xi, 1.0).0
    }
}

/// Parameter transform induced by a symmetry on ĝ(ξ) = |ξ|^{−1}exp(A|ξ| + b·ξ + c).
pub fn apply_symmetry(s: &SymmetryElement, f: &FFunctionParams, p: f64) -> Result<FFunctionParams> {
    use SymmetryElement::*;
    let d = f.dim() as f64;
    let out = match s {
        Dilation(l) => FFunctionParams {
            a: f.a * l,
            b: f.b.iter().map(|z| z * l).collect(),
            c: f.c + (d - 1.0) / p * l.ln(),
        },
        Boost(x0) => {
            let s2 = dot(x0, x0);
            if s2 == 0.0 {
                return Ok(f.clone());
            }
            let jp = (1.0 + s2).sqrt();
            let bx = cdot(&f.b, x0);
            // b = b^⊥ + b^∥, b^∥ = (b·ξ₀)ξ₀/|ξ₀|²
            let b = f
                .b
                .iter()
                .zip(x0)
                .map(|(bi, xi)| {
                    let par = bx * xi / s2;
                    (bi - par) + par * jp - f.a * xi
                })
                .collect();
            FFunctionParams { a: f.a * jp - bx, b, c: f.c }
        }
        SectorialExpansion { theta, lambda } => {
            let l2 = lambda * lambda;
            let bt = cdot(&f.b, theta);
            let a = f.a * (1.0 + l2) / 2.0 + bt * (1.0 - l2) / 2.0;
            let along = f.a * (1.0 - l2) / 2.0 + bt * (1.0 + l2) / 2.0;
            let b = f
                .b
                .iter()
                .zip(theta)
                .map(|(bi, t)| along * t + (bi - bt * t) * lambda)
                .collect();
            FFunctionParams { a, b, c: f.c + (d - 1.0) / p * lambda.ln() }
        }
        Translation { t0, x0 } => FFunctionParams {
            a: f.a - Complex64::new(0.0, *t0),
            b: f.b.iter().zip(x0).map(|(b, x)| b - Complex64::new(0.0, *x)).collect(),
            c: f.c,
        },
        Phase(t) => FFunctionParams { a: f.a, b: f.b.clone(), c: f.c + Complex64::new(0.0, *t) },
    };
    if f.is_admissible() && !out.is_admissible() {
        return Err(Error::Consistency(format!("symmetry {s:?} left the admissible parameter set")));
    }
    Ok(out)
}

/// Apply a word of symmetries, first element first.
pub fn apply_word(word: &[SymmetryElement], f: &FFunctionParams, p: f64) -> Result<FFunctionParams> {
    word.iter().try_fold(f.clone(), |acc, s| apply_symmetry(s, &acc, p))
}

/// Pointwise action on a density function on the cone.
fn act(s: &SymmetryElement, p: f64, f: &dyn Fn(&[f64]) -> Complex64, xi: &[f64]) -> Complex64 {
    let (eta, pref) = s.geometry(xi, p);
    pref * f(&eta)
}

/// Relative discrepancy between ĝ for the transformed parameters and the pointwise
/// action of the word on ĝ, with the prefactor |η|/|ξ| relating ĝ to the density.
pub fn symmetry_pointwise_oracle(word: &[SymmetryElement], f: &FFunctionParams, p: f64, xi: &[f64]) -> Result<f64> {
    let transformed = apply_word(word, f, p)?.ghat(xi);
    // innermost function is the original density; outer layers act in sequence
    fn nested(word: &[SymmetryElement], f: &FFunctionParams, p: f64, xi: &[f64]) -> Complex64 {
        match word.split_last() {
            None => f.density(xi),
            Some((last, rest)) => act(last, p, &|eta: &[f64]| nested(rest, f, p, eta), xi),
        }
    }
    let pointwise = nested(word, f, p, xi) / norm(xi);
    Ok((transformed - pointwise).norm() / pointwise.norm().max(1.0))
}

/// Gaussian test functions centred away from the origin.
pub fn trial_function(id: usize, xi: &[f64]) -> f64 {
    let centre: [f64; 3] = match id % 3 {
        0 => [1.0, 0.2, 0.1],
        1 => [-0.4, 0.9, -0.3],
        _ => [0.3, -0.5, 0.6],
    };
    let width = 0.4;
    let r2: f64 = xi.iter().zip(centre).map(|(x, c)| (x - c) * (x - c)).sum();
    (-r2 / (width * width)).exp()
}

/// |∫φ(Sξ)J dξ/|ξ| − ∫φ(ξ)dξ/|ξ|| by nested polar quadrature, J the measure factor.
pub fn cone_measure_invariance_check(s: &SymmetryElement, d: u32, trial: usize) -> Result<f64> {
    if !(d == 2 || d == 3) {
        return Err(Error::Domain(format!("measure check implemented for d in {{2,3}}, got {d}")));
    }
    let jac = s.measure_factor(d);
    let moved = polar_integral(d, |xi| trial_function(trial, &s.map_point(xi)) * jac)?;
    let fixed = polar_integral(d, |xi| trial_function(trial, xi))?;
    Ok((moved - fixed).abs())
}

/// ∫_{R^d} φ(ξ) dξ/|ξ| in polar coordinates over |ξ| ≤ 8.
fn polar_integral<F: Fn(&[f64]) -> f64 + Sync>(d: u32, phi: F) -> Result<f64> {
    // inner levels resolve well below the outer tolerance so their noise stays invisible
    let level = |abs_tol: f64| QuadratureConfig { abs_tol, rel_tol: 10.0 * abs_tol, max_panel_depth: 30, ..Default::default() };
    let (inner, middle, outer) = (level(1e-12), level(1e-10), level(1e-8));
    let rmax = 8.0;
    let value = match d {
        2 => gauss_legendre(
            |r| {
                let ring = gauss_legendre(|t: f64| phi(&[r * t.cos(), r * t.sin()]), 0.0, 2.0 * PI, &middle);
                ring.map(|e| e.value).unwrap_or(f64::NAN)
            },
            0.0,
            rmax,
            &outer,
        )?,
        _ => gauss_legendre(
            |r| {
                let shell = gauss_legendre(
                    |th: f64| {
                        let (st, ct) = th.sin_cos();
                        let ring = gauss_legendre(
                            |ph: f64| phi(&[r * st * ph.cos(), r * st * ph.sin(), r * ct]),
                            0.0,
                            2.0 * PI,
                            &inner,
                        );
                        ring.map(|e| e.value * st).unwrap_or(f64::NAN)
                    },
                    0.0,
                    PI,
                    &middle,
                );
                shell.map(|e| e.value * r).unwrap_or(f64::NAN)
            },
            0.0,
            rmax,
            &outer,
        )?,
    };
    Ok(value.value)
}

/// A random group element with moderate parameters: dilations and expansions in
/// [1/2, 2], boosts and translations with |x₀| ≤ 1, unit expansion axes.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SymmetryElement {
    let vec = |rng: &mut R| (0..d).map(|_| rng.gen_range(-1.0..1.0) / (d as f64).sqrt()).collect::<Vec<f64>>();
    match rng.gen_range(0..5) {
        0 => SymmetryElement::Dilation(2f64.powf(rng.gen_range(-1.0..1.0))),
        1 => SymmetryElement::Boost(vec(rng)),
        2 => {
            let mut theta = vec(rng);
            if norm(&theta) < 1e-3 {
                theta[0] = 1.0;
            }
            let n = norm(&theta);
            theta.iter_mut().for_each(|t| *t /= n);
            SymmetryElement::SectorialExpansion { theta, lambda: 2f64.powf(rng.gen_range(-1.0..1.0)) }
        }
        3 => SymmetryElement::Translation { t0: rng.gen_range(-1.0..1.0), x0: vec(rng) },
        _ => SymmetryElement::Phase(rng.gen_range(-PI..PI)),
    }
}

/// Admissible parameters with −Re A ∈ [1/2, 2] and |Re b| ≤ −Re A/2.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R, d: usize) -> FFunctionParams {
    let a = Complex64::new(-rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
    let scale = -a.re / (2.0 * (d as f64).sqrt());
    let b = (0..d).map(|_| Complex64::new(scale * rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    FFunctionParams { a, b, c: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) }
}

/// Largest parameter difference, relative to the size of `a`'s parameters.
pub fn params_distance(a: &FFunctionParams, b: &FFunctionParams) -> f64 {
    let size = a.b.iter().map(|z| z.norm()).fold(a.a.norm().max(a.c.norm()).max(1.0), f64::max);
    let diff = a.b.iter().zip(&b.b).map(|(x, y)| (x - y).norm()).fold((a.a - b.a).norm().max((a.c - b.c).norm()), f64::max);
    diff / size
}

/// Worst residuals of the group law over `n` random elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupLawReport {
    pub samples: usize,
    /// Identity elements leave parameters fixed.
    pub identity: f64,
    /// s then s⁻¹ is the identity.
    pub inverse: f64,
    /// (s₁s₂)⁻¹ = s₂⁻¹s₁⁻¹, and the parameter action of a pair matches the pointwise action.
    pub composition: f64,
}

pub fn group_law_check<R: Rng + ?Sized>(rng: &mut R, d: usize, p: f64, n: usize) -> Result<GroupLawReport> {
    let zero = vec![0.0; d];
    let mut axis = zero.clone();
    axis[0] = 1.0;
    let identities = [
        SymmetryElement::Dilation(1.0),
        SymmetryElement::Boost(zero.clone()),
        SymmetryElement::SectorialExpansion { theta: axis, lambda: 1.0 },
        SymmetryElement::Translation { t0: 0.0, x0: zero },
        SymmetryElement::Phase(0.0),
    ];
    let mut rep = GroupLawReport { samples: n, identity: 0.0, inverse: 0.0, composition: 0.0 };
    for _ in 0..n {
        let f = random_params(rng, d);
        for e in &identities {
            rep.identity = rep.identity.max(params_distance(&f, &apply_symmetry(e, &f, p)?));
        }
        let s1 = random_element(rng, d);
        let s2 = random_element(rng, d);
        let back = apply_word(&[s1.clone(), s1.inverse()], &f, p)?;
        rep.inverse = rep.inverse.max(params_distance(&f, &back));
        let round = apply_word(&[s1.clone(), s2.clone(), s2.inverse(), s1.inverse()], &f, p)?;
        rep.composition = rep.composition.max(params_distance(&f, &round));
        let xi: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if norm(&xi) > 0.1 {
            rep.composition = rep.composition.max(symmetry_pointwise_oracle(&[s1, s2], &f, p, &xi)?);
        }
    }
    Ok(rep)
}

/// Apply `n` random words of length 1..=`max_len` to the canonical parameters;
/// fails on the first word whose image leaves the admissible set.
pub fn admissibility_closure_check<R: Rng + ?Sized>(rng: &mut R, d: u32, p: f64, n: usize, max_len: usize) -> Result<usize> {
    let f = FFunctionParams::canonical(d)?;
    for _ in 0..n {
        let len = rng.gen_range(1..=max_len);
        let word: Vec<SymmetryElement> = (0..len).map(|_| random_element(rng, d as usize)).collect();
        let g = apply_word(&word, &f, p)?;
        if !g.is_admissible() {
            return Err(Error::Consistency(format!("word {word:?} left the admissible set")));
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_text_is_exact() {
        let p: PValue = "1.5".parse().unwrap();
        assert_eq!(p.exact, Some(Rational64::new(3, 2)));
        let p: PValue = "3/2".parse().unwrap();
        assert_eq!(p.exact, Some(Rational64::new(3, 2)));
        let p: PValue = "1.5e0".parse().unwrap();
        assert_eq!(p.exact, None);
        assert!("abc".parse::<PValue>().is_err());
        assert!("1/0".parse::<PValue>().is_err());
    }

    #[test]
    fn exact_gamma_detects_even_integers() {
        let e = make_exponents_from(3, &"3/2".parse().unwrap()).unwrap();
        assert_eq!(e.gamma_even(), Some(2));
        assert!(e.on_boundary(2) && e.on_boundary(3));
        let e = make_exponents_from(2, &"3/2".parse().unwrap()).unwrap();
        assert_eq!(e.gamma_even(), None);
    }
}
