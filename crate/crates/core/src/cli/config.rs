//! `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Every key
//! has a default except `delta0`. [`RunConfig::to_text`] writes a file that
//! parses back to the same configuration.

use super::CliError;
use crate::exterior_field::MAX_COURANT;
use crate::kernel::KernelParams;
use crate::solid_motion::{derived_constants, Mode, PhysicalParams, SolverSettings};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

/// Which models a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSelection {
    One(Mode),
    /// Nonlinear and linear side by side.
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeSelection::One(m) => vec![m],
            ModeSelection::Both => vec![Mode::Nonlinear, Mode::Linear],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModeSelection::One(m) => m.name(),
            ModeSelection::Both => "both",
        }
    }
}

impl FromStr for ModeSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nonlinear" => Ok(ModeSelection::One(Mode::Nonlinear)),
            "linear" => Ok(ModeSelection::One(Mode::Linear)),
            "conservative" => Ok(ModeSelection::One(Mode::Conservative)),
            "both" => Ok(ModeSelection::Both),
            _ => Err(format!(
                "unknown mode '{s}' (expected nonlinear, linear, conservative or both)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    /// Initial displacement (m); required by every subcommand but `kernel`.
    pub delta0: Option<f64>,
    /// Initial velocity (m/s).
    pub delta1: f64,
    pub t_end: f64,
    pub mode: ModeSelection,
    pub solver: SolverSettings,
    /// Kernel quadrature; `r` and `v0` are ignored, the table is dimensionless.
    pub kernel: KernelParams,
    /// Kernel table spacing and length (dimensionless time).
    pub kernel_dt: f64,
    pub kernel_t_end: f64,
    /// Co-simulate with the exterior grid solver in `simulate`.
    pub oracle: bool,
    pub dr: f64,
    pub courant: f64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            physical: PhysicalParams::default(),
            delta0: None,
            delta1: 0.0,
            t_end: 40.0,
            mode: ModeSelection::One(Mode::Nonlinear),
            solver: SolverSettings {
                tol: 1e-8,
                ..SolverSettings::default()
            },
            kernel: KernelParams::default(),
            kernel_dt: 0.01,
            kernel_t_end: 200.0,
            oracle: false,
            dr: 0.25,
            courant: 0.5,
            out: PathBuf::from("."),
        }
    }
}

/// Every accepted key, in the order [`RunConfig::to_text`] writes them.
pub const KEYS: &[&str] = &[
    "rho",
    "rho_m",
    "h0",
    "R",
    "H",
    "g",
    "delta0",
    "delta1",
    "t_end",
    "mode",
    "tol",
    "dt_conv",
    "n_conv",
    "allow_inadmissible",
    "c_bromwich",
    "omega_max",
    "d_omega",
    "kernel_tol",
    "kernel_dt",
    "kernel_t_end",
    "oracle",
    "dr",
    "courant",
    "out",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot read '{value}' as a value for {key}"))
}

impl RunConfig {
    /// Sets one key. Errors are plain messages; callers add the location.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value;
        match key {
            "rho" => self.physical.rho = parse_value(key, v)?,
            "rho_m" => self.physical.rho_m = parse_value(key, v)?,
            "h0" => self.physical.h0 = parse_value(key, v)?,
            "R" => self.physical.r = parse_value(key, v)?,
            "H" => self.physical.height = parse_value(key, v)?,
            "g" => self.physical.g = parse_value(key, v)?,
            "delta0" => self.delta0 = Some(parse_value(key, v)?),
            "delta1" => self.delta1 = parse_value(key, v)?,
            "t_end" => self.t_end = parse_value(key, v)?,
            "mode" => self.mode = v.parse()?,
            "tol" => self.solver.tol = parse_value(key, v)?,
            "dt_conv" => self.solver.dt_conv = parse_value(key, v)?,
            "n_conv" => self.solver.n_conv = parse_value(key, v)?,
            "allow_inadmissible" => self.solver.allow_inadmissible = parse_value(key, v)?,
            "c_bromwich" => self.kernel.c_bromwich = parse_value(key, v)?,
            "omega_max" => self.kernel.omega_max = parse_value(key, v)?,
            "d_omega" => self.kernel.d_omega = parse_value(key, v)?,
            "kernel_tol" => self.kernel.tol = parse_value(key, v)?,
            "kernel_dt" => self.kernel_dt = parse_value(key, v)?,
            "kernel_t_end" => self.kernel_t_end = parse_value(key, v)?,
            "oracle" => self.oracle = parse_value(key, v)?,
            "dr" => self.dr = parse_value(key, v)?,
            "courant" => self.courant = parse_value(key, v)?,
            "out" => self.out = PathBuf::from(v),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Applies the pairs of a configuration file.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Parse {
                line: i + 1,
                message,
            };
            let (key, value) = split_pair(line).map_err(err)?;
            self.set(key, value).map_err(err)?;
        }
        Ok(())
    }

    /// Applies a command-line `key=value` override.
    pub fn apply_override(&mut self, arg: &str) -> Result<(), CliError> {
        let err = |message: String| CliError::Override {
            arg: arg.to_string(),
            message,
        };
        let (key, value) = split_pair(arg.trim()).map_err(err)?;
        self.set(key, value).map_err(err)
    }

    /// Checks every invariant that does not need the kernel table.
    pub fn validate(&self, require_delta0: bool) -> Result<(), CliError> {
        let invalid = |m: String| Err(CliError::Invalid(m));
        derived_constants(&self.physical).map_err(|e| CliError::Invalid(e.to_string()))?;
        match self.delta0 {
            None if require_delta0 => return Err(CliError::MissingDelta0),
            Some(d) if !d.is_finite() => return invalid(format!("delta0 must be finite, got {d}")),
            _ => {}
        }
        if !self.delta1.is_finite() {
            return invalid(format!("delta1 must be finite, got {}", self.delta1));
        }
        let positive = [
            (self.t_end, "t_end"),
            (self.solver.tol, "tol"),
            (self.solver.dt_conv, "dt_conv"),
            (self.kernel_dt, "kernel_dt"),
            (self.kernel_t_end, "kernel_t_end"),
            (self.dr, "dr"),
        ];
        for (v, name) in positive {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.solver.n_conv == 0 {
            return invalid("n_conv must be at least 1".into());
        }
        if !(self.courant > 0.0 && self.courant <= MAX_COURANT) {
            return invalid(format!(
                "courant must lie in (0, {MAX_COURANT}], got {}",
                self.courant
            ));
        }
        if self.kernel_t_end < self.kernel_dt {
            return invalid("kernel_t_end must be at least kernel_dt".into());
        }
        self.kernel
            .validate()
            .map_err(|e| CliError::Invalid(e.to_string()))
    }

    /// Initial displacement, or the "missing" error.
    pub fn delta0(&self) -> Result<f64, CliError> {
        self.delta0.ok_or(CliError::MissingDelta0)
    }

    /// Every key with its current value. `{:?}` prints the shortest decimal
    /// that reads back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.physical;
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("rho", format!("{:?}", p.rho));
        put("rho_m", format!("{:?}", p.rho_m));
        put("h0", format!("{:?}", p.h0));
        put("R", format!("{:?}", p.r));
        put("H", format!("{:?}", p.height));
        put("g", format!("{:?}", p.g));
        if let Some(d) = self.delta0 {
            put("delta0", format!("{d:?}"));
        }
        put("delta1", format!("{:?}", self.delta1));
        put("t_end", format!("{:?}", self.t_end));
        put("mode", self.mode.name().to_string());
        put("tol", format!("{:?}", self.solver.tol));
        put("dt_conv", format!("{:?}", self.solver.dt_conv));
        put("n_conv", self.solver.n_conv.to_string());
        put(
            "allow_inadmissible",
            self.solver.allow_inadmissible.to_string(),
        );
        put("c_bromwich", format!("{:?}", self.kernel.c_bromwich));
        put("omega_max", format!("{:?}", self.kernel.omega_max));
        put("d_omega", format!("{:?}", self.kernel.d_omega));
        put("kernel_tol", format!("{:?}", self.kernel.tol));
        put("kernel_dt", format!("{:?}", self.kernel_dt));
        put("kernel_t_end", format!("{:?}", self.kernel_t_end));
        put("oracle", self.oracle.to_string());
        put("dr", format!("{:?}", self.dr));
        put("courant", format!("{:?}", self.courant));
        put("out", self.out.display().to_string());
        s
    }
}

fn split_pair(line: &str) -> Result<(&str, &str), String> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| format!("expected key = value, got '{line}'"))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() {
        return Err(format!("expected key = value, got '{line}'"));
    }
    Ok((k, v))
}

/// Parses a complete configuration: defaults, then the file, then validation
/// with `delta0` required.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    cfg.apply_text(text)?;
    cfg.validate(true)?;
    Ok(cfg)
}
