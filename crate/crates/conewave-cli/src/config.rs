//! Run settings: flat key=value files overlaid by command-line flags, validated
//! in full before any computation.

use std::path::{Path, PathBuf};

use clap::Args;
use conewave::cone::{make_exponents_from, ExponentConfig, PValue};
use conewave::quadrature::QuadratureConfig;

use crate::CliError;

pub const CONFIG_ENV: &str = "CONEWAVE_CONFIG";

/// Every setting, as text; the same keys are accepted in config files
/// (with either '-' or '_').
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Spatial dimension d ≥ 2.
    #[arg(long, global = true)]
    pub d: Option<String>,
    /// Exponent p: rational "3/2", exact decimal "1.5", or float "1.5e0".
    #[arg(long, global = true)]
    pub p: Option<String>,
    #[arg(long = "k-min", global = true)]
    pub k_min: Option<String>,
    #[arg(long = "k-max", global = true)]
    pub k_max: Option<String>,
    #[arg(long = "tol-abs", global = true)]
    pub tol_abs: Option<String>,
    #[arg(long = "tol-rel", global = true)]
    pub tol_rel: Option<String>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Config file; defaults to $CONEWAVE_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<String>,
    #[arg(long = "gl-order", global = true)]
    pub gl_order: Option<String>,
    #[arg(long = "gj-order", global = true)]
    pub gj_order: Option<String>,
    #[arg(long = "max-depth", global = true)]
    pub max_depth: Option<String>,
    #[arg(long, global = true)]
    pub truncation: Option<String>,
    #[arg(long = "tail-terms", global = true)]
    pub tail_terms: Option<String>,
    /// Watson: first Bessel order.
    #[arg(long, global = true)]
    pub mu: Option<String>,
    /// Watson: second Bessel order.
    #[arg(long, global = true)]
    pub nu: Option<String>,
    /// Watson: power of 1/τ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Funk–Hecke: highest degree.
    #[arg(long = "l-max", global = true)]
    pub l_max: Option<String>,
    /// Symmetry check: random elements for the group law.
    #[arg(long, global = true)]
    pub samples: Option<String>,
    /// Symmetry check: random words for admissibility closure.
    #[arg(long, global = true)]
    pub words: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
}

macro_rules! keys {
    ($m:ident, $($f:ident),*) => {
        fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
            match key.replace('-', "_").as_str() {
                $(stringify!($f) => Some(&mut self.$f),)*
                _ => None,
            }
        }

        fn overlay(mut self, $m: Settings) -> Settings {
            $(if $m.$f.is_some() { self.$f = $m.$f; })*
            self
        }
    };
}

impl Settings {
    keys!(flags, d, p, k_min, k_max, tol_abs, tol_rel, format, out, gl_order, gj_order, max_depth, truncation, tail_terms, mu, nu, lambda, l_max, samples, words, seed);

    /// Flags over the config file named by --config or $CONEWAVE_CONFIG.
    pub fn resolve(flags: Settings) -> Result<Settings, CliError> {
        let path = flags.config.clone().or_else(|| std::env::var(CONFIG_ENV).ok().filter(|s| !s.is_empty()));
        let base = match path {
            Some(p) => Settings::from_file(Path::new(&p))?,
            None => Settings::default(),
        };
        Ok(base.overlay(flags))
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Settings::parse(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Settings, String> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
            let k = k.trim();
            if k == "config" {
                return Err(format!("line {}: config files cannot include others", n + 1));
            }
            *s.slot(k).ok_or_else(|| format!("line {}: unknown key '{k}'", n + 1))? = Some(v.trim().to_string());
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Validated settings for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    raw: Settings,
}

fn parse_as<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Usage(format!("invalid value '{v}' for {key}")))
}

impl RunConfig {
    pub fn new(s: Settings, default_format: Format) -> Result<Self, CliError> {
        let mut q = QuadratureConfig::default();
        if let Some(v) = &s.tol_abs {
            q.abs_tol = parse_as("tol-abs", v)?;
        }
        if let Some(v) = &s.tol_rel {
            q.rel_tol = parse_as("tol-rel", v)?;
        }
        if let Some(v) = &s.gl_order {
            q.gauss_legendre_order = parse_as("gl-order", v)?;
        }
        if let Some(v) = &s.gj_order {
            q.gauss_jacobi_order = parse_as("gj-order", v)?;
        }
        if let Some(v) = &s.max_depth {
            q.max_panel_depth = parse_as("max-depth", v)?;
        }
        if let Some(v) = &s.truncation {
            q.oscillatory_truncation = parse_as("truncation", v)?;
        }
        if let Some(v) = &s.tail_terms {
            q.tail_extrapolation_terms = parse_as("tail-terms", v)?;
        }
        q.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let format = match s.format.as_deref() {
            None => default_format,
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(CliError::Usage(format!("--format must be csv or json, got '{other}'"))),
        };
        Ok(Self { quadrature: q, format, out: s.out.clone().map(PathBuf::from), raw: s })
    }

    fn required<T: std::str::FromStr>(&self, key: &str, v: &Option<String>) -> Result<T, CliError> {
        let v = v.as_deref().ok_or_else(|| CliError::Usage(format!("--{key} is required")))?;
        parse_as(key, v)
    }

    fn optional<T: std::str::FromStr>(&self, key: &str, v: &Option<String>, default: T) -> Result<T, CliError> {
        v.as_deref().map(|v| parse_as(key, v)).unwrap_or(Ok(default))
    }

    pub fn d(&self) -> Result<u32, CliError> {
        let d: u32 = self.required("d", &self.raw.d)?;
        if d < 2 {
            return Err(CliError::Usage(format!("--d must be at least 2, got {d}")));
        }
        Ok(d)
    }

    pub fn exponents(&self) -> Result<ExponentConfig, CliError> {
        self.exponents_or(None)
    }

    pub fn exponents_or(&self, default_p: Option<&str>) -> Result<ExponentConfig, CliError> {
        let d = self.d()?;
        let text = self.raw.p.as_deref().or(default_p).ok_or_else(|| CliError::Usage("--p is required".into()))?;
        let p: PValue = text.parse().map_err(|e: conewave::Error| CliError::Usage(e.to_string()))?;
        make_exponents_from(d, &p).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn k_range(&self) -> Result<(usize, usize), CliError> {
        let lo = self.optional("k-min", &self.raw.k_min, 1)?;
        let hi = self.optional("k-max", &self.raw.k_max, 8)?;
        if lo > hi || hi > 60 {
            return Err(CliError::Usage(format!("need k-min <= k-max <= 60, got {lo}..{hi}")));
        }
        Ok((lo, hi))
    }

    pub fn watson_triple(&self) -> Result<(f64, f64, f64), CliError> {
        Ok((self.required("mu", &self.raw.mu)?, self.required("nu", &self.raw.nu)?, self.required("lambda", &self.raw.lambda)?))
    }

    pub fn l_max(&self) -> Result<usize, CliError> {
        let l = self.optional("l-max", &self.raw.l_max, 8)?;
        if l > 40 {
            return Err(CliError::Usage(format!("--l-max must be at most 40, got {l}")));
        }
        Ok(l)
    }

    pub fn samples(&self) -> Result<usize, CliError> {
        self.optional("samples", &self.raw.samples, 100)
    }

    pub fn words(&self) -> Result<usize, CliError> {
        self.optional("words", &self.raw.words, 10_000)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.optional("seed", &self.raw.seed, 0)
    }
}
