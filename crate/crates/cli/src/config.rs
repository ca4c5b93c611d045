//! JSON configuration. Precedence: command-line flags, then the config file
//! (`--config` or the `QSLICE_CONFIG` environment variable), then built-ins.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qslice::ImaginaryUnit;

use crate::error::CliError;
use crate::literal::parse_quaternion;

pub const CONFIG_ENV: &str = "QSLICE_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub quadrature: Quadrature,
    pub truncation: Truncation,
    pub tolerances: Tolerances,
    /// Largest polynomial degree accepted by literal Hermite evaluation.
    pub degree_cap: usize,
    /// Imaginary unit of the default slice, as a quaternion literal.
    pub default_slice: String,
    /// Seed for the random parameter grids of the verification suites.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quadrature {
    pub line_nodes: usize,
    pub slice_nodes: usize,
    pub sphere_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Truncation {
    pub series_terms: usize,
    pub star_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub orthogonality: f64,
    pub eigen_fd: f64,
    pub kernel_dual: f64,
    pub reproduce: f64,
    pub kernel_diagonal: f64,
    pub transform_basis: f64,
    pub transform_norm: f64,
    pub isometry: f64,
    pub norms: f64,
    pub decomposition: f64,
    pub star_identities: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            line_nodes: 80,
            slice_nodes: 40,
            sphere_order: 6,
        }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            series_terms: 200,
            star_terms: 40,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthogonality: 1e-9,
            eigen_fd: 1e-4,
            kernel_dual: 1e-8,
            reproduce: 1e-7,
            kernel_diagonal: 1e-8,
            transform_basis: 1e-8,
            transform_norm: 1e-8,
            isometry: 1e-9,
            norms: 1e-8,
            decomposition: 1e-7,
            star_identities: 1e-12,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Self {
            quadrature: Quadrature::default(),
            truncation: Truncation::default(),
            tolerances: Tolerances::default(),
            degree_cap: qslice::poly::DEGREE_CAP,
            default_slice: "i".into(),
            seed: 20_240_917,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The explicit path wins over the environment; neither means built-ins.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        match path {
            Some(p) => Self::load(&p),
            None => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let q = &self.quadrature;
        let t = &self.truncation;
        let counts = [
            ("quadrature.line_nodes", q.line_nodes),
            ("quadrature.slice_nodes", q.slice_nodes),
            ("truncation.series_terms", t.series_terms),
            ("truncation.star_terms", t.star_terms),
            ("degree_cap", self.degree_cap),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        if q.line_nodes > qslice::quad::MAX_LINE_NODES || q.slice_nodes > qslice::quad::MAX_LINE_NODES {
            return Err(CliError::Config(format!(
                "quadrature node counts are limited to {}",
                qslice::quad::MAX_LINE_NODES
            )));
        }
        if q.sphere_order > qslice::quad::MAX_SPHERE_ORDER {
            return Err(CliError::Config(format!(
                "quadrature.sphere_order is limited to {}",
                qslice::quad::MAX_SPHERE_ORDER
            )));
        }
        if self.degree_cap > qslice::poly::DEGREE_CAP {
            return Err(CliError::Config(format!(
                "degree_cap is limited to {}",
                qslice::poly::DEGREE_CAP
            )));
        }
        let tol = serde_json::to_value(&self.tolerances).expect("tolerances serialize");
        for (name, v) in tol.as_object().expect("tolerances are an object") {
            let v = v.as_f64().unwrap_or(f64::NAN);
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("tolerances.{name} must be positive")));
            }
        }
        self.slice_unit()?;
        Ok(())
    }

    pub fn slice_unit(&self) -> Result<ImaginaryUnit, CliError> {
        let q = parse_quaternion(&self.default_slice)
            .map_err(|e| CliError::Config(format!("default_slice: {e}")))?;
        if q.w != 0.0 {
            return Err(CliError::Config("default_slice must be purely imaginary".into()));
        }
        ImaginaryUnit::new(q.x, q.y, q.z)
            .ok_or_else(|| CliError::Config("default_slice must be nonzero".into()))
    }
}
