//! Subcommands behind the `heave` binary. Each writes CSV files into the
//! output directory and a short report to the given writer.

mod config;
mod csv;

pub use config::{parse_config, ModeSelection, RunConfig, KEYS};
pub use csv::{fmt_num, write_energy, write_kernel, write_trace, TRACE_HEADER};

use crate::exterior_field::{cosimulate, Cosimulation, FieldError};
use crate::kernel::{invert_bromwich, KernelError, KernelTable};
use crate::solid_motion::{
    compatibility_check, derived_constants, simulate, ExteriorData, Mode, SimTrace, SolidError,
};
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("override '{arg}': {message}")]
    Override { arg: String, message: String },
    #[error("delta0 missing")]
    MissingDelta0,
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Solid(#[from] SolidError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Kernel table.
    Kernel,
    /// Convolution-based trajectories (co-simulated when `oracle = true`).
    Simulate,
    /// Convolution trajectory against the exterior grid solver.
    Validate,
    /// Compatibility conditions of the initial data.
    Compat,
    /// Energy budget of a co-simulation.
    Energy,
}

impl Command {
    pub fn needs_delta0(self) -> bool {
        self != Command::Kernel
    }
}

/// Builds the kernel table the configuration asks for.
pub fn kernel_table(cfg: &RunConfig) -> Result<KernelTable, CliError> {
    let n = (cfg.kernel_t_end / cfg.kernel_dt).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| k as f64 * cfg.kernel_dt).collect();
    Ok(invert_bromwich(&cfg.kernel, &grid)?)
}

fn emit(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let written = std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::File::create(&path))
        .and_then(|file| {
            let mut w = std::io::BufWriter::new(file);
            write(&mut w)?;
            w.flush()
        });
    written.map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn report(out: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Largest `|δ_a − δ_b|` over the rows of `a`, with `b` interpolated.
pub fn linf_gap(a: &SimTrace, b: &SimTrace) -> f64 {
    a.rows
        .iter()
        .map(|r| (r.delta - b.delta_at(r.t)).abs())
        .fold(0.0, f64::max)
}

/// Largest `|E_tot(t) − E_tot(0)|`; with `subtract_work`, the work of the
/// `b/h_e²` wall term is taken out first.
pub fn energy_drift(c: &Cosimulation, subtract_work: bool) -> f64 {
    let e0 = c.trace.rows[0].e_tot.unwrap_or(0.0);
    c.trace
        .rows
        .iter()
        .zip(&c.wall_work)
        .map(|(r, w)| {
            let w = if subtract_work { *w } else { 0.0 };
            (r.e_tot.unwrap_or(0.0) - w - e0).abs()
        })
        .fold(0.0, f64::max)
}

fn cosim(cfg: &RunConfig, mode: Mode) -> Result<Cosimulation, CliError> {
    if cfg.delta1 != 0.0 {
        return Err(CliError::Invalid(
            "the exterior grid solver starts from rest; set delta1 = 0".into(),
        ));
    }
    Ok(cosimulate(
        &cfg.physical,
        cfg.delta0()?,
        cfg.t_end,
        cfg.dr,
        cfg.courant,
        mode,
    )?)
}

/// Runs `cmd`, writing CSVs below `cfg.out` and a summary to `out`.
pub fn run(cmd: Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate(cmd.needs_delta0())?;
    let dc = derived_constants(&cfg.physical)?;
    let dir = cfg.out.as_path();
    match cmd {
        Command::Kernel => {
            let table = kernel_table(cfg)?;
            let path = emit(dir, "kernel.csv", |w| write_kernel(w, &table, dc.tau))?;
            report(
                out,
                format!(
                    "kernel: {} samples, t_tail = {}, integral = {}, l1 = {} -> {}",
                    table.values.len(),
                    fmt_num(table.t_tail),
                    fmt_num(table.integral()),
                    fmt_num(table.l1_norm),
                    path.display()
                ),
            )?;
        }
        Command::Simulate => {
            let delta0 = cfg.delta0()?;
            let mut traces = Vec::new();
            let table = if cfg.oracle {
                None
            } else {
                Some(kernel_table(cfg)?)
            };
            for mode in cfg.mode.modes() {
                let trace = match &table {
                    None => cosim(cfg, mode)?.trace,
                    Some(k) => simulate(
                        &cfg.physical,
                        k,
                        delta0,
                        cfg.delta1,
                        cfg.t_end,
                        mode,
                        &cfg.solver,
                    )?,
                };
                let name = format!("trace_{}.csv", mode.name());
                let path = emit(dir, &name, |w| write_trace(w, &trace))?;
                for warning in &trace.warnings {
                    report(out, format!("warning ({}): {warning}", mode.name()))?;
                }
                report(
                    out,
                    format!(
                        "{}: {} rows, final delta = {} -> {}",
                        mode.name(),
                        trace.rows.len(),
                        fmt_num(trace.rows.last().map_or(delta0, |r| r.delta)),
                        path.display()
                    ),
                )?;
                traces.push(trace);
            }
            if let [a, b] = traces.as_slice() {
                let scale = delta0.abs().max(f64::MIN_POSITIVE);
                report(
                    out,
                    format!(
                        "max |delta_nonlinear - delta_linear| / |delta0| = {}",
                        fmt_num(linf_gap(a, b) / scale)
                    ),
                )?;
            }
        }
        Command::Validate => {
            let delta0 = cfg.delta0()?;
            let table = kernel_table(cfg)?;
            let scale = 0.5 * dc.c_hydro * delta0 * delta0;
            for mode in cfg.mode.modes() {
                let conv = simulate(
                    &cfg.physical,
                    &table,
                    delta0,
                    0.0,
                    cfg.t_end,
                    mode,
                    &cfg.solver,
                )?;
                let oracle = cosim(cfg, mode)?;
                let m = mode.name();
                emit(dir, &format!("validate_{m}_convolution.csv"), |w| {
                    write_trace(w, &conv)
                })?;
                emit(dir, &format!("validate_{m}_oracle.csv"), |w| {
                    write_trace(w, &oracle.trace)
                })?;
                let rel = |x: f64| if scale > 0.0 { x / scale } else { x };
                report(
                    out,
                    format!(
                        "{m}: linf/|delta0| = {}, energy drift = {}, without wall-term work = {}",
                        fmt_num(
                            linf_gap(&oracle.trace, &conv) / delta0.abs().max(f64::MIN_POSITIVE)
                        ),
                        fmt_num(rel(energy_drift(&oracle, false))),
                        fmt_num(rel(energy_drift(&oracle, true))),
                    ),
                )?;
            }
        }
        Command::Compat => {
            let res = compatibility_check(
                &cfg.physical,
                &dc,
                cfg.delta0()?,
                cfg.delta1,
                &ExteriorData::default(),
            );
            let order0 = if res.order0 == 0.0 {
                "satisfied".to_string()
            } else {
                format!("violated, residual = {}", fmt_num(res.order0))
            };
            report(
                out,
                format!(
                    "order 0: {order0}, order 1: residual = {}",
                    fmt_num(res.order1)
                ),
            )?;
        }
        Command::Energy => {
            let delta0 = cfg.delta0()?;
            let scale = 0.5 * dc.c_hydro * delta0 * delta0;
            for mode in cfg.mode.modes() {
                let c = cosim(cfg, mode)?;
                let path = emit(dir, &format!("energy_{}.csv", mode.name()), |w| {
                    write_energy(w, &c, &dc, scale)
                })?;
                let rel = |x: f64| if scale > 0.0 { x / scale } else { x };
                report(
                    out,
                    format!(
                        "{}: energy drift = {}, without wall-term work = {} -> {}",
                        mode.name(),
                        fmt_num(rel(energy_drift(&c, false))),
                        fmt_num(rel(energy_drift(&c, true))),
                        path.display()
                    ),
                )?;
            }
        }
    }
    Ok(())
}
