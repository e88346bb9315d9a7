//! Impulse-response kernel of the exterior fluid.
//!
//! The kernel is the inverse Laplace transform of
//!
//! ```text
//! f(s) = i R H₀⁽¹⁾(isR/v₀) / (2 v₀ H₁⁽¹⁾(isR/v₀)) + R/(2v₀)
//! ```
//!
//! Everything is stored in dimensionless units: `f(s) = τ f₀(τs)` and
//! `F(t) = F₀(t/τ)` with `τ = R/v₀`, so one table serves every geometry.
//!
//! Two independent routes produce `F₀`: a Bromwich line integral
//! ([`invert_bromwich`]) used for the table, and a deformed contour wrapped
//! around the branch cut ([`branch_cut`]) used as a large-time oracle.

mod branch_cut;
mod bromwich;

pub use branch_cut::{branchcut_kernel, jump, BranchCutOracle, OracleValue};
pub use bromwich::{bromwich_physical, bromwich_values, invert_bromwich, BromwichValues};

use crate::special_functions::{hankel_ratio, SpecialFunctionError};
use num_complex::Complex64;
use thiserror::Error;

/// `lim s f₀(s)` as `s → ∞`, which is also `F₀(0)`.
pub const LAMBDA: f64 = 0.25;
/// Coefficient of `s⁻²` in the large-`s` expansion of `f₀`.
pub const BETA2: f64 = -3.0 / 16.0;
/// `F₀(t) ≈ TAIL_COEFF / t²` at large `t`.
pub const TAIL_COEFF: f64 = 0.5;
/// Bromwich values are computed up to this time (F₀ units); the tail law
/// takes over from `t_tail ≤ BROMWICH_T_MAX`.
pub const BROMWICH_T_MAX: f64 = 100.0;
/// Relative agreement with the tail law required at the handoff.
pub const TAIL_MATCH: f64 = 0.02;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid kernel parameters: {0}")]
    InvalidParams(String),
    #[error("time grid must be uniform, start at 0 and have at least two points")]
    BadGrid,
    #[error("Bromwich truncation bound {bound:e} exceeds tolerance {tol:e}")]
    Convergence { bound: f64, tol: f64 },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

pub type Result<T> = std::result::Result<T, KernelError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub r: f64,
    pub v0: f64,
    /// Abscissa of the Bromwich line in F₀ units.
    pub c_bromwich: f64,
    pub omega_max: f64,
    pub d_omega: f64,
    pub tol: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            r: 1.0,
            v0: 1.0,
            c_bromwich: 0.1,
            omega_max: 4000.0,
            d_omega: (std::f64::consts::PI / (8.0 * BROMWICH_T_MAX)).min(0.01),
            tol: 1e-6,
        }
    }
}

impl KernelParams {
    pub fn with_geometry(r: f64, v0: f64) -> Self {
        KernelParams {
            r,
            v0,
            ..Default::default()
        }
    }

    /// Time scale `R/v₀` in seconds.
    pub fn tau(&self) -> f64 {
        self.r / self.v0
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.r, "R"),
            (self.v0, "v0"),
            (self.c_bromwich, "c_bromwich"),
            (self.omega_max, "omega_max"),
            (self.d_omega, "d_omega"),
            (self.tol, "tol"),
        ];
        for (v, name) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(KernelError::InvalidParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// `f₀(s) = i H₀⁽¹⁾(is) / (2 H₁⁽¹⁾(is)) + 1/2`, analytic off the negative real axis.
pub fn f0(s: Complex64) -> Result<Complex64> {
    let ratio = hankel_ratio(s)?;
    Ok(Complex64::new(0.0, 0.5) * ratio + 0.5)
}

/// Laplace transform of the physical kernel, `f(s) = τ f₀(τs)`.
pub fn f_of_s(s: Complex64, params: &KernelParams) -> Result<Complex64> {
    let tau = params.tau();
    Ok(tau * f0(s * tau)?)
}

/// Tabulated `F₀` on a uniform grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub dt: f64,
    pub values: Vec<f64>,
    /// Samples at or beyond this time come from the tail law.
    pub t_tail: f64,
    pub tail_coeff: f64,
    pub l1_norm: f64,
    /// Bromwich truncation bound achieved for the computed part.
    pub truncation_bound: f64,
}

impl KernelTable {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    pub fn is_tail(&self, k: usize) -> bool {
        self.time(k) >= self.t_tail
    }

    /// `F₀(t)` by linear interpolation, tail law past the end.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let x = t / self.dt;
        let k = x.floor() as usize;
        if k + 1 >= self.values.len() {
            return self.tail_coeff / (t * t);
        }
        let w = x - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }

    /// `∫₀^∞ F₀` by trapezoid up to `t_tail` plus the analytic tail.
    pub fn integral(&self) -> f64 {
        self.trapezoid(|v| v) + self.tail_coeff / self.t_tail
    }

    fn trapezoid(&self, map: impl Fn(f64) -> f64) -> f64 {
        let n = ((self.t_tail / self.dt).round() as usize).min(self.values.len() - 1);
        let inner: f64 = self.values[1..n].iter().map(|&v| map(v)).sum();
        self.dt * (inner + 0.5 * (map(self.values[0]) + map(self.values[n])))
    }

    /// `sup_k |F₀(t_k)| (1 + t_k)²`.
    pub fn decay_constant(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| v.abs() * (1.0 + self.time(k)).powi(2))
            .fold(0.0, f64::max)
    }
}

/// `‖F₀‖_{L¹}`: trapezoid of `|F₀|` on `[0, t_tail]` plus `tail_coeff / t_tail`.
pub fn kernel_l1_norm(table: &KernelTable) -> f64 {
    table.trapezoid(f64::abs) + table.tail_coeff / table.t_tail
}

/// Default table: `dt = 0.01` up to `t = 200` (F₀ units).
pub fn default_table(params: &KernelParams) -> Result<KernelTable> {
    let grid: Vec<f64> = (0..=20_000).map(|k| k as f64 * 0.01).collect();
    invert_bromwich(params, &grid)
}
