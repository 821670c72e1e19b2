//! Machine-readable output: CSV tables and the verdict JSON document.
//!
//! Floats in CSV are written with 17 significant digits in lowercase scientific
//! notation, which round-trips every double. JSON uses serde_json's shortest
//! round-trip form. Field order is fixed by the struct layouts below.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler_lagrange::{ElReport, ZERO_FLOOR};
use crate::quadrature::QuadratureConfig;
use crate::verdict::{Outcome, Verdict, SLOPE_SLACK, VANISH_TOL};

pub const SCHEMA_VERSION: &str = "conewave/1";

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Domain(format!("not a float: {s:?}")))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Comment lines, a header row and string cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        // writing into memory cannot fail
        w.write_record(&self.header).expect("in-memory csv");
        for r in &self.rows {
            w.write_record(r).expect("in-memory csv");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 cells"));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        let comments = text
            .lines()
            .filter_map(|l| l.strip_prefix('#'))
            .map(|c| c.strip_prefix(' ').unwrap_or(c).to_string())
            .collect();
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r.headers().map_err(bad)?.iter().map(str::to_string).collect::<Vec<_>>();
        if header.is_empty() {
            return Err(Error::Domain("no header row".into()));
        }
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()
            .map_err(bad)?;
        Ok(Self { comments, header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Every threshold that can change an answer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub gauss_legendre_order: usize,
    pub gauss_jacobi_order: usize,
    pub max_panel_depth: usize,
    pub oscillatory_truncation: f64,
    pub tail_extrapolation_terms: usize,
    pub zero_floor: f64,
    pub vanish_tol: f64,
    pub slope_slack: f64,
}

impl Tolerances {
    pub fn from_config(cfg: &QuadratureConfig) -> Self {
        Self {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            gauss_legendre_order: cfg.gauss_legendre_order,
            gauss_jacobi_order: cfg.gauss_jacobi_order,
            max_panel_depth: cfg.max_panel_depth,
            oscillatory_truncation: cfg.oscillatory_truncation,
            tail_extrapolation_terms: cfg.tail_extrapolation_terms,
            zero_floor: ZERO_FLOOR,
            vanish_tol: VANISH_TOL,
            slope_slack: SLOPE_SLACK,
        }
    }

    pub fn comment(&self) -> String {
        format!(
            "tolerances abs_tol={} rel_tol={} gl_order={} gj_order={} max_panel_depth={} truncation={} tail_terms={} zero_floor={} vanish_tol={} slope_slack={}",
            fmt_f64(self.abs_tol),
            fmt_f64(self.rel_tol),
            self.gauss_legendre_order,
            self.gauss_jacobi_order,
            self.max_panel_depth,
            fmt_f64(self.oscillatory_truncation),
            self.tail_extrapolation_terms,
            fmt_f64(self.zero_floor),
            fmt_f64(self.vanish_tol),
            fmt_f64(self.slope_slack),
        )
    }
}

/// Evaluator identifiers; bumped whenever a route changes its numbers.
pub fn evaluator_versions() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("crate", env!("CARGO_PKG_VERSION")),
        ("lhs_closed", "watson-gamma/1"),
        ("lhs_quadrature", "cylinder-graded/1"),
        ("rhs_exact", "radial-fourier/1"),
        ("rhs_quadrature", "gauss-jacobi/1"),
        ("rhs_rodrigues", "rodrigues-parts/1"),
        ("specfun", "miller-hankel/1"),
    ])
}

pub const EL_COLUMNS: [&str; 9] =
    ["k", "lhs_quad", "lhs_closed", "lhs_calibration", "rhs_quad", "rhs_rodrigues", "sign_lhs", "sign_rhs", "ratio_abs"];

fn run_comments(reports_d: u32, p_text: &str, gamma: f64, cfg: &QuadratureConfig) -> Vec<String> {
    vec![
        format!("schema {SCHEMA_VERSION}"),
        format!("d={reports_d} p={p_text} gamma_p={}", fmt_f64(gamma)),
        Tolerances::from_config(cfg).comment(),
    ]
}

/// One row per report; empty cells where a route does not apply.
pub fn el_table_csv(reports: &[ElReport], cfg: &QuadratureConfig) -> Result<CsvTable> {
    let first = reports.first().ok_or_else(|| Error::Domain("empty table".into()))?;
    let e = &first.exponents;
    let mut t = CsvTable::new(&EL_COLUMNS);
    t.comments = run_comments(e.d, &e.p_text, e.gamma_p, cfg);
    for r in reports {
        t.rows.push(vec![
            r.k.to_string(),
            fmt_f64(r.lhs_quad.value),
            fmt_opt(r.lhs_closed),
            fmt_opt(r.lhs_calibration),
            fmt_f64(r.rhs_quad.value),
            fmt_opt(r.rhs_rodrigues.map(|s| s.value)),
            r.sign_lhs.to_string(),
            r.sign_rhs.to_string(),
            fmt_f64(r.ratio_abs),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Serialize)]
struct ElRow {
    k: usize,
    lhs_quad: f64,
    lhs_closed: Option<f64>,
    lhs_calibration: Option<f64>,
    rhs_quad: f64,
    rhs_rodrigues: Option<f64>,
    rhs_exact: Option<f64>,
    lambda_exact: Option<f64>,
    sign_lhs: i8,
    sign_rhs: i8,
    ratio_abs: f64,
}

#[derive(Debug, Serialize)]
struct ElTableDoc<'a> {
    schema: &'static str,
    d: u32,
    p: &'a str,
    q: f64,
    gamma_p: f64,
    rows: Vec<ElRow>,
    tolerances: Tolerances,
    evaluator_versions: BTreeMap<&'static str, &'static str>,
}

pub fn el_table_json(reports: &[ElReport], cfg: &QuadratureConfig) -> Result<String> {
    let first = reports.first().ok_or_else(|| Error::Domain("empty table".into()))?;
    let e = &first.exponents;
    let doc = ElTableDoc {
        schema: SCHEMA_VERSION,
        d: e.d,
        p: &e.p_text,
        q: e.q,
        gamma_p: e.gamma_p,
        rows: reports
            .iter()
            .map(|r| ElRow {
                k: r.k,
                lhs_quad: r.lhs_quad.value,
                lhs_closed: r.lhs_closed,
                lhs_calibration: r.lhs_calibration,
                rhs_quad: r.rhs_quad.value,
                rhs_rodrigues: r.rhs_rodrigues.map(|s| s.value),
                rhs_exact: r.rhs_exact.map(|s| s.value),
                lambda_exact: r.lambda_exact,
                sign_lhs: r.sign_lhs,
                sign_rhs: r.sign_rhs,
                ratio_abs: r.ratio_abs,
            })
            .collect(),
        tolerances: Tolerances::from_config(cfg),
        evaluator_versions: evaluator_versions(),
    };
    to_json(&doc)
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
pub struct Evidence {
    pub L: Option<f64>,
    pub R: Option<f64>,
    pub lambda: Option<f64>,
    pub ratio_trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<crate::verdict::LambdaRefutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerdictDoc {
    pub schema: &'static str,
    pub d: u32,
    pub p: String,
    pub q: f64,
    pub gamma_p: f64,
    pub outcome: &'static str,
    pub witness_k: Option<usize>,
    pub evidence: Evidence,
    pub tolerances: Tolerances,
    pub evaluator_versions: BTreeMap<&'static str, &'static str>,
}

/// The (L, R) pair most representative of the outcome: the witness degree, or
/// for a critical point the largest-magnitude values seen.
fn headline(v: &Verdict) -> (Option<f64>, Option<f64>) {
    let at_k = |k: usize| {
        v.reports.iter().find(|r| r.k == k).map(|r| (r.lhs_quad.value, r.rhs_rodrigues.unwrap_or(r.rhs_quad).value))
    };
    let biggest = |xs: Vec<f64>| xs.into_iter().fold(None, |m: Option<f64>, x| match m {
        Some(y) if y.abs() >= x.abs() => Some(y),
        _ => Some(x),
    });
    match &v.outcome {
        Outcome::FailsBySign { lhs, rhs, .. } => (Some(*lhs), Some(*rhs)),
        Outcome::FailsByDecay { k, .. } => at_k(*k).map(|(l, r)| (Some(l), Some(r))).unwrap_or((None, None)),
        Outcome::CriticalPoint { .. } => (
            biggest(v.reports.iter().map(|r| r.lhs_quad.value).collect()),
            biggest(v.reports.iter().map(|r| r.rhs_quad.value).collect()),
        ),
        Outcome::Inconclusive { .. } => v
            .reports
            .first()
            .map(|r| (Some(r.lhs_quad.value), Some(r.rhs_rodrigues.unwrap_or(r.rhs_quad).value)))
            .unwrap_or((None, None)),
    }
}

pub fn verdict_doc(v: &Verdict, cfg: &QuadratureConfig) -> VerdictDoc {
    let e = &v.exponents;
    let (l, r) = headline(v);
    let mut evidence =
        Evidence { L: l, R: r, lambda: v.lambda, ratio_trace: Vec::new(), bound_constant: None, slope: None, refutation: None, reason: None };
    match &v.outcome {
        Outcome::FailsByDecay { ratio_trace, bound_constant, slope, refutation, .. } => {
            evidence.ratio_trace = ratio_trace.clone();
            evidence.bound_constant = Some(*bound_constant);
            evidence.slope = Some(*slope);
            evidence.refutation = refutation.clone();
        }
        Outcome::Inconclusive { reason } => evidence.reason = Some(reason.clone()),
        _ => {}
    }
    VerdictDoc {
        schema: SCHEMA_VERSION,
        d: e.d,
        p: e.p_text.clone(),
        q: e.q,
        gamma_p: e.gamma_p,
        outcome: v.outcome.name(),
        witness_k: v.outcome.witness_k(),
        evidence,
        tolerances: Tolerances::from_config(cfg),
        evaluator_versions: evaluator_versions(),
    }
}

pub fn verdict_json(v: &Verdict, cfg: &QuadratureConfig) -> Result<String> {
    to_json(&verdict_doc(v, cfg))
}

pub fn verdict_csv(v: &Verdict, cfg: &QuadratureConfig) -> CsvTable {
    let e = &v.exponents;
    let doc = verdict_doc(v, cfg);
    let mut t = CsvTable::new(&["d", "p", "q", "gamma_p", "outcome", "witness_k", "L", "R", "lambda"]);
    t.comments = run_comments(e.d, &e.p_text, e.gamma_p, cfg);
    if !doc.evidence.ratio_trace.is_empty() {
        let trace: Vec<String> = doc.evidence.ratio_trace.iter().map(|x| fmt_f64(*x)).collect();
        t.comments.push(format!("ratio_trace {}", trace.join(" ")));
    }
    if let Some(reason) = &doc.evidence.reason {
        t.comments.push(format!("reason {reason}"));
    }
    t.rows.push(vec![
        e.d.to_string(),
        e.p_text.clone(),
        fmt_f64(e.q),
        fmt_f64(e.gamma_p),
        doc.outcome.to_string(),
        doc.witness_k.map(|k| k.to_string()).unwrap_or_default(),
        fmt_opt(doc.evidence.L),
        fmt_opt(doc.evidence.R),
        fmt_opt(doc.evidence.lambda),
    ]);
    t
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Consistency(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, -0.0, 1.0, 0.1, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 1.0 / 3.0] {
            let s = fmt_f64(x);
            assert!(!s.contains('E'));
            assert_eq!(parse_f64(&s).unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_parse_inverts_render() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.comments = vec!["hello".into(), "x=1".into()];
        t.rows = vec![vec!["1".into(), String::new()], vec!["2".into(), "3.0e0".into()]];
        assert_eq!(CsvTable::parse(&t.render()).unwrap(), t);
    }
}
