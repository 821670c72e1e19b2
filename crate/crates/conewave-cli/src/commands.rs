use std::collections::BTreeMap;

use conewave::cone::{self, ExponentConfig, SymmetryElement};
use conewave::euler_lagrange::{el_report, watson_closed_form, ElReport};
use conewave::penrose::{self, DiamondTrial, ZonalFunction};
use conewave::quadrature::{bessel_product_integral, QuadratureConfig};
use conewave::report::{self, fmt_f64, CsvTable, Tolerances, SCHEMA_VERSION};
use conewave::{par, verdict, Error};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

/// Rendered report plus the exit code it implies.
pub struct Output {
    pub text: String,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

pub fn verdict(rc: &RunConfig) -> Result<Output, CliError> {
    let exp = rc.exponents()?;
    let v = verdict::decide(&exp, &rc.quadrature)?;
    let text = match rc.format {
        Format::Json => report::verdict_json(&v, &rc.quadrature)?,
        Format::Csv => report::verdict_csv(&v, &rc.quadrature).render(),
    };
    Ok(Output { text, code: if v.outcome.is_certified() { EXIT_OK } else { EXIT_INCONCLUSIVE } })
}

pub fn el_table(rc: &RunConfig) -> Result<Output, CliError> {
    let exp = rc.exponents()?;
    let (lo, hi) = rc.k_range()?;
    let ks: Vec<usize> = (lo..=hi).collect();
    let reports =
        par::map(&ks, |&k| el_report(&exp, k, &rc.quadrature, false)).into_iter().collect::<Result<Vec<ElReport>, Error>>()?;
    let text = match rc.format {
        Format::Csv => report::el_table_csv(&reports, &rc.quadrature)?.render(),
        Format::Json => report::el_table_json(&reports, &rc.quadrature)?,
    };
    Ok(Output { text, code: EXIT_OK })
}

pub fn watson(rc: &RunConfig) -> Result<Output, CliError> {
    let (mu, nu, lambda) = rc.watson_triple()?;
    if !(mu >= 0.0 && nu >= 0.0) {
        return Err(CliError::Usage(format!("Bessel orders must be nonnegative, got mu = {mu}, nu = {nu}")));
    }
    if !(mu + nu + 1.0 > lambda && lambda > 0.0) {
        return Err(CliError::Usage(format!(
            "(mu, nu, lambda) = ({mu}, {nu}, {lambda}) is outside the strip Re(mu+nu+1) > Re(lambda) > 0"
        )));
    }
    let closed = watson_closed_form(mu, nu, lambda)?;
    let quad = bessel_product_integral(mu, nu, lambda, &rc.quadrature)?;
    let rel = (quad.value - closed).abs() / closed.abs().max(f64::MIN_POSITIVE);
    let pass = rel <= WATSON_TOL;
    let tol = Tolerances::from_config(&rc.quadrature);
    let text = match rc.format {
        Format::Csv => {
            let mut t = CsvTable::new(&["mu", "nu", "lambda", "closed_form", "quadrature", "quadrature_error", "rel_discrepancy", "status"]);
            t.comments = vec![format!("schema {SCHEMA_VERSION}"), format!("watson tolerance={}", fmt_f64(WATSON_TOL)), tol.comment()];
            t.rows.push(vec![
                fmt_f64(mu),
                fmt_f64(nu),
                fmt_f64(lambda),
                fmt_f64(closed),
                fmt_f64(quad.value),
                fmt_f64(quad.error),
                fmt_f64(rel),
                status_word(pass).into(),
            ]);
            t.render()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                schema: &'static str,
                mu: f64,
                nu: f64,
                lambda: f64,
                closed_form: f64,
                quadrature: f64,
                quadrature_error: f64,
                rel_discrepancy: f64,
                tolerance: f64,
                status: &'static str,
                tolerances: Tolerances,
                evaluator_versions: BTreeMap<&'static str, &'static str>,
            }
            report::to_json(&Doc {
                schema: SCHEMA_VERSION,
                mu,
                nu,
                lambda,
                closed_form: closed,
                quadrature: quad.value,
                quadrature_error: quad.error,
                rel_discrepancy: rel,
                tolerance: WATSON_TOL,
                status: status_word(pass),
                tolerances: tol,
                evaluator_versions: report::evaluator_versions(),
            })?
        }
    };
    Ok(Output { text, code: if pass { EXIT_OK } else { EXIT_ERROR } })
}

const WATSON_TOL: f64 = 1e-4;

fn status_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// One line of a check report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub item: String,
    pub value: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn measured(item: impl Into<String>, value: Option<f64>, r: Result<f64, Error>, tolerance: f64) -> Self {
        let item = item.into();
        match r {
            Ok(res) => {
                let ok = res.is_finite() && res >= 0.0 && res <= tolerance;
                Check { item, value, residual: Some(res), tolerance, status: status_word(ok), note: None }
            }
            Err(e) => Check { item, value, residual: None, tolerance, status: "fail", note: Some(e.to_string()) },
        }
    }

    fn skipped(item: impl Into<String>, tolerance: f64, why: &str) -> Self {
        Check { item: item.into(), value: None, residual: None, tolerance, status: "skipped", note: Some(why.into()) }
    }
}

fn render_checks(command: &str, d: u32, p: Option<&ExponentConfig>, checks: &[Check], rc: &RunConfig) -> Result<Output, CliError> {
    let failed = checks.iter().any(|c| c.status == "fail");
    let tol = Tolerances::from_config(&rc.quadrature);
    let text = match rc.format {
        Format::Csv => {
            let mut t = CsvTable::new(&["item", "value", "residual", "tolerance", "status", "note"]);
            t.comments = vec![format!("schema {SCHEMA_VERSION}"), match p {
                Some(e) => format!("{command} d={d} p={} gamma_p={}", e.p_text, fmt_f64(e.gamma_p)),
                None => format!("{command} d={d}"),
            }, tol.comment()];
            for c in checks {
                t.rows.push(vec![
                    c.item.clone(),
                    c.value.map(fmt_f64).unwrap_or_default(),
                    c.residual.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(c.tolerance),
                    c.status.into(),
                    c.note.clone().unwrap_or_default(),
                ]);
            }
            t.render()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                schema: &'static str,
                command: &'a str,
                d: u32,
                p: Option<&'a str>,
                items: &'a [Check],
                tolerances: Tolerances,
                evaluator_versions: BTreeMap<&'static str, &'static str>,
            }
            report::to_json(&Doc {
                schema: SCHEMA_VERSION,
                command,
                d,
                p: p.map(|e| e.p_text.as_str()),
                items: checks,
                tolerances: tol,
                evaluator_versions: report::evaluator_versions(),
            })?
        }
    };
    Ok(Output { text, code: if failed { EXIT_ERROR } else { EXIT_OK } })
}

const FUNK_HECKE_TOL: f64 = 1e-8;

fn funk_hecke_checks(d: u32, l_max: usize, cfg: &QuadratureConfig) -> Vec<Check> {
    let nu = (d as f64 - 1.0) / 2.0;
    let ls: Vec<usize> = (0..=l_max).collect();
    par::map(&ls, |&l| {
        let exact = 1.0 / (l as f64 + nu);
        let q = penrose::funk_hecke_eigenvalue(d, l, cfg);
        let value = q.as_ref().ok().copied();
        Check::measured(format!("funk_hecke l={l}"), value, q.map(|v| (v - exact).abs() / exact), FUNK_HECKE_TOL)
    })
}

pub fn funk_hecke(rc: &RunConfig) -> Result<Output, CliError> {
    let d = rc.d()?;
    let l_max = rc.l_max()?;
    render_checks("funk-hecke", d, None, &funk_hecke_checks(d, l_max, &rc.quadrature), rc)
}

pub fn diamond_trials() -> [DiamondTrial; 3] {
    [
        DiamondTrial { centre: (0.0, 1.0), radius: 0.6, time_harmonic: None },
        DiamondTrial { centre: (0.4, 1.5), radius: 0.5, time_harmonic: Some(2) },
        DiamondTrial { centre: (-0.3, 0.9), radius: 0.7, time_harmonic: Some(1) },
    ]
}

pub fn penrose_check(rc: &RunConfig) -> Result<Output, CliError> {
    let d = rc.d()?;
    let seed = rc.seed()?;
    let cfg = &rc.quadrature;
    let mut checks = funk_hecke_checks(d, 8, cfg);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match penrose::round_trip_check(&mut rng, d as usize, 10_000) {
        Ok(r) => {
            checks.push(Check::measured("map round trip", None, Ok(r.round_trip), 1e-12));
            checks.push(Check::measured("conformal factor dual formulas", None, Ok(r.omega_dual), 1e-12));
        }
        Err(e) => checks.push(Check::measured("map round trip", None, Err(e), 1e-12)),
    }
    checks.push(Check::measured("tangent space degree <= 1", None, penrose::tangent_space_check(d), 1e-10));

    let transform_route = d == 2 || d == 3;
    let scope = "transform-route checks are implemented for d in {2,3}";
    for (i, trial) in diamond_trials().iter().enumerate() {
        let name = format!("pushforward trial {i}");
        checks.push(if transform_route {
            Check::measured(name, None, penrose::pushforward_check(trial, d, cfg), 1e-6)
        } else {
            Check::skipped(name, 1e-6, scope)
        });
    }
    let grid: Vec<f64> = (0..=12).map(|i| 0.25 * i as f64).collect();
    for k in 0..=4 {
        let name = format!("intertwining k={k}");
        checks.push(if transform_route {
            Check::measured(name, None, penrose::intertwining_check(d, k, &grid, cfg), 1e-8)
        } else {
            Check::skipped(name, 1e-8, scope)
        });
    }
    let g = ZonalFunction::new(d, vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.25)]);
    for p in ["3/2", "5/2"] {
        let name = format!("diamond unfold p={p}");
        checks.push(if transform_route {
            let r = p
                .parse()
                .and_then(|pv| cone::make_exponents_from(d, &pv))
                .and_then(|e| penrose::diamond_unfold_check(&g, &e, cfg));
            let value = r.as_ref().ok().map(|u| u.half_cylinder.re);
            Check::measured(name, value, r.map(|u| u.residual), 1e-6)
        } else {
            Check::skipped(name, 1e-6, scope)
        });
    }
    render_checks("penrose-check", d, None, &checks, rc)
}

pub fn symmetry_check(rc: &RunConfig) -> Result<Output, CliError> {
    let exp = rc.exponents_or(Some("2"))?;
    let (samples, words, seed) = (rc.samples()?, rc.words()?, rc.seed()?);
    let d = exp.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    match cone::group_law_check(&mut rng, d as usize, exp.p, samples) {
        Ok(g) => {
            checks.push(Check::measured("group law identity", None, Ok(g.identity), 1e-10));
            checks.push(Check::measured("group law inverse", None, Ok(g.inverse), 1e-10));
            checks.push(Check::measured("group law composition", None, Ok(g.composition), 1e-10));
        }
        Err(e) => checks.push(Check::measured("group law", None, Err(e), 1e-10)),
    }
    let closure = cone::admissibility_closure_check(&mut rng, d, exp.p, words, 6);
    let value = closure.as_ref().ok().map(|n| *n as f64);
    checks.push(Check::measured("admissibility closure", value, closure.map(|_| 0.0), 0.0));
    for i in 0..3 {
        let boost = SymmetryElement::Boost((0..d).map(|j| 0.3 * (i as f64 + 1.0) * if j % 2 == 0 { 1.0 } else { -0.5 }).collect());
        let dilation = SymmetryElement::Dilation(1.0 + 0.25 * i as f64);
        for (kind, s) in [("boost", boost), ("dilation", dilation)] {
            let name = format!("cone measure {kind} {i}");
            checks.push(if d == 2 || d == 3 {
                Check::measured(name, None, cone::cone_measure_invariance_check(&s, d, i), 1e-6)
            } else {
                Check::skipped(name, 1e-6, "measure checks are implemented for d in {2,3}")
            });
        }
    }
    render_checks("symmetry-check", d, Some(&exp), &checks, rc)
}
