//! Heave of a floating vertical cylinder released from rest.
//!
//! The solid is coupled to the fluid under it (explicit flat-bottom
//! coefficients) and to the exterior through the boundary trace
//!
//! ```text
//! ζ_e(t,R) = ∫₀ᵗ F(s) δ̇(t−s) ds − (R/2v₀) δ̇(t)
//! ```
//!
//! which turns the coupled problem into a scalar integro-differential
//! equation for the displacement `δ` of the centre of mass.

mod convolution;
mod history;
mod simulate;

pub use convolution::Convolution;
pub use history::HistoryBuffer;
pub use simulate::{rhs, simulate, SimTrace, TraceRow};

use crate::kernel::{KernelError, KernelTable};
use std::f64::consts::PI;
use thiserror::Error;

/// Slack on the a-priori bounds, absorbing rounding and interpolation noise.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolidError {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("{what} = {value} is not positive at t = {t}")]
    Positivity {
        what: &'static str,
        t: f64,
        value: f64,
    },
    #[error(
        "initial displacement {delta0} is outside the admissible range \
         (margins: fluid height {margin_hw}, exterior {margin_he})"
    )]
    Inadmissible {
        delta0: f64,
        margin_hw: f64,
        margin_he: f64,
    },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("bound violated at t = {t}: {what} = {value} exceeds {bound}")]
    BoundViolation {
        t: f64,
        what: &'static str,
        value: f64,
        bound: f64,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Result<T> = std::result::Result<T, SolidError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Fluid density (kg/m³).
    pub rho: f64,
    /// Solid density (kg/m³).
    pub rho_m: f64,
    /// Depth at rest (m).
    pub h0: f64,
    /// Cylinder radius (m).
    pub r: f64,
    /// Cylinder height (m).
    pub height: f64,
    pub g: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            rho: 1000.0,
            rho_m: 500.0,
            h0: 15.0,
            r: 10.0,
            height: 10.0,
            g: 9.81,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Mass `ρ_m πR²H`.
    pub m: f64,
    /// Hydrostatic stiffness `ρgπR²`.
    pub c_hydro: f64,
    /// Wave speed `√(g h₀)`.
    pub v0: f64,
    /// Radiation damping `c_hydro R/(2v₀)`.
    pub nu: f64,
    /// `πρR⁴/8`.
    pub b: f64,
    /// Fluid height under the solid at equilibrium.
    pub h_w_eq: f64,
    /// Height of the centre of mass above the still water level at equilibrium.
    pub z_g_eq: f64,
    /// Time scale `R/v₀`.
    pub tau: f64,
    /// `ρ_m H/ρ`, the draft at equilibrium.
    pub draft: f64,
}

pub fn derived_constants(p: &PhysicalParams) -> Result<DerivedConstants> {
    let fields = [
        (p.rho, "rho"),
        (p.rho_m, "rho_m"),
        (p.h0, "h0"),
        (p.r, "R"),
        (p.height, "H"),
        (p.g, "g"),
    ];
    for (v, name) in fields {
        if !(v.is_finite() && v > 0.0) {
            return Err(SolidError::InvalidParams(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if p.rho_m >= p.rho {
        return Err(SolidError::InvalidParams(format!(
            "rho_m = {} must be below rho = {} for the solid to float",
            p.rho_m, p.rho
        )));
    }
    let draft = p.rho_m * p.height / p.rho;
    let h_w_eq = p.h0 - draft;
    if h_w_eq <= 0.0 {
        return Err(SolidError::InvalidParams(format!(
            "fluid height under the solid at equilibrium is {h_w_eq} m; the solid touches the bottom"
        )));
    }
    let area = PI * p.r * p.r;
    let c_hydro = p.rho * p.g * area;
    let v0 = (p.g * p.h0).sqrt();
    Ok(DerivedConstants {
        m: p.rho_m * area * p.height,
        c_hydro,
        v0,
        nu: c_hydro * p.r / (2.0 * v0),
        b: PI * p.rho * p.r.powi(4) / 8.0,
        h_w_eq,
        z_g_eq: (0.5 - p.rho_m / p.rho) * p.height,
        tau: p.r / v0,
        draft,
    })
}

impl DerivedConstants {
    pub fn h_w(&self, delta: f64) -> f64 {
        self.h_w_eq + delta
    }

    /// Added mass `b/h_w`.
    pub fn added_mass(&self, delta: f64) -> f64 {
        self.b / self.h_w(delta)
    }

    /// `b/(2h_w²)`.
    pub fn beta(&self, delta: f64) -> f64 {
        let hw = self.h_w(delta);
        self.b / (2.0 * hw * hw)
    }

    /// `b/h_e²`, evaluated with the exterior depth at the cylinder wall.
    pub fn b_exterior(&self, h_e: f64) -> f64 {
        self.b / (h_e * h_e)
    }

    /// Total inertia `m + m_a` of the given model; the linear one freezes
    /// the added mass at equilibrium.
    pub fn inertia(&self, mode: Mode, delta: f64) -> f64 {
        match mode {
            Mode::Linear => self.m + self.added_mass(0.0),
            Mode::Nonlinear | Mode::Conservative => self.m + self.added_mass(delta),
        }
    }

    /// Coefficient of `δ̇²` in the equation of motion.
    pub fn quadratic(&self, mode: Mode, delta: f64, h_e: f64) -> f64 {
        match mode {
            Mode::Nonlinear => self.b_exterior(h_e) + self.beta(delta),
            Mode::Conservative => self.beta(delta),
            Mode::Linear => 0.0,
        }
    }

    /// Largest `|δ|` reachable from `(δ₀, δ₁)`: with `E₀` the initial value of
    /// the mechanical energy, this is `√(2E₀/c)`. Equals `|δ₀|` when `δ₁ = 0`.
    pub fn amplitude(&self, mode: Mode, delta0: f64, delta1: f64) -> f64 {
        (2.0 * mechanical_energy(self, mode, delta0, delta1) / self.c_hydro).sqrt()
    }

    /// Largest `|δ̇|`: `√(2E₀/m)`, which is `√(ρg/(ρ_mH))|δ₀|` when `δ₁ = 0`.
    pub fn speed_bound(&self, mode: Mode, delta0: f64, delta1: f64) -> f64 {
        (2.0 * mechanical_energy(self, mode, delta0, delta1) / self.m).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `h_w_eq − |δ₀|`.
    pub margin_hw: f64,
    /// `√(ρ_mH/(ρg)) h₀ / (‖F‖_{L¹} + R/2v₀) − |δ₀|`.
    pub margin_he: f64,
}

/// Size condition on `δ₀` under which the motion exists, stays bounded and
/// keeps both fluid heights positive.
pub fn admissibility(
    p: &PhysicalParams,
    dc: &DerivedConstants,
    kernel: &KernelTable,
    delta0: f64,
) -> Admissibility {
    let bound_hw = dc.h_w_eq;
    let l1_physical = dc.tau * kernel.l1_norm;
    let bound_he =
        (p.rho_m * p.height / (p.rho * p.g)).sqrt() * p.h0 / (l1_physical + dc.tau / 2.0);
    let margin_hw = bound_hw - delta0.abs();
    let margin_he = bound_he - delta0.abs();
    Admissibility {
        admissible: margin_hw > 0.0 && margin_he > 0.0,
        margin_hw,
        margin_he,
    }
}

/// Exterior state at `(t, r) = (0, R)` entering the compatibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExteriorData {
    pub zeta: f64,
    pub dr_zeta: f64,
    pub q: f64,
    /// `∂_r(q²/h)`.
    pub dr_q2_over_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatResiduals {
    pub order0: f64,
    pub order1: f64,
}

/// Residuals of the order-0 and order-1 compatibility conditions at the
/// cylinder wall. Order 0: `q_e + (R/2)δ₁`. Order 1: the exterior momentum
/// balance `∂_t q_e` minus `−(R/2)δ̈(0)` from the equation of motion.
pub fn compatibility_check(
    p: &PhysicalParams,
    dc: &DerivedConstants,
    delta0: f64,
    delta1: f64,
    ext: &ExteriorData,
) -> CompatResiduals {
    let r = p.r;
    let order0 = ext.q + 0.5 * r * delta1;
    let h_e = p.h0 + ext.zeta;
    let exterior_side = -ext.dr_q2_over_h - ext.q * ext.q / (r * h_e) - p.g * h_e * ext.dr_zeta;
    let force = -dc.c_hydro * delta0
        + dc.c_hydro * ext.zeta
        + (dc.b_exterior(h_e) + dc.beta(delta0)) * delta1 * delta1;
    let accel = force / (dc.m + dc.added_mass(delta0));
    CompatResiduals {
        order0,
        order1: exterior_side - (-0.5 * r * accel),
    }
}

/// Discharge under the solid, `−rδ̇/2` for `0 ≤ r ≤ R`.
pub fn interior_discharge(r: f64, delta_dot: f64) -> f64 {
    -0.5 * r * delta_dot
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub e_sol: f64,
    pub e_int: f64,
    pub e_ext: Option<f64>,
    pub e_tot: Option<f64>,
}

/// Solid and interior-fluid energies, plus the total when the exterior
/// energy is known. The interior energy vanishes at equilibrium.
///
/// The interior kinetic term `½m_a δ̇²` uses the inertia of `mode`.
pub fn energy_breakdown(
    p: &PhysicalParams,
    dc: &DerivedConstants,
    mode: Mode,
    delta: f64,
    delta_dot: f64,
    e_ext: Option<f64>,
) -> EnergyBreakdown {
    let e_sol = 0.5 * dc.m * delta_dot * delta_dot + dc.m * p.g * (delta + dc.z_g_eq);
    let e_int = 0.5 * dc.c_hydro * ((delta - dc.draft).powi(2) - dc.draft * dc.draft)
        + 0.5 * (dc.inertia(mode, delta) - dc.m) * delta_dot * delta_dot;
    EnergyBreakdown {
        e_sol,
        e_int,
        e_ext,
        e_tot: e_ext.map(|e| e_sol + e_int + e),
    }
}

/// `½(m + m_a)δ̇² + ½cδ²`: the solid and interior energy measured from
/// equilibrium. For the linear and conservative models, adding the exterior
/// energy gives a constant; the `b/h_e²` wall term of the nonlinear model
/// feeds it at rate `(b/h_e²)δ̇³`.
pub fn mechanical_energy(dc: &DerivedConstants, mode: Mode, delta: f64, delta_dot: f64) -> f64 {
    0.5 * dc.inertia(mode, delta) * delta_dot * delta_dot + 0.5 * dc.c_hydro * delta * delta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Interior nonlinearity plus the `b/h_e²` wall term.
    Nonlinear,
    /// Constant added mass, no quadratic terms (Cummins equation).
    Linear,
    /// Interior nonlinearity only: the `b/h_e²` term dropped. The model whose
    /// total energy with the linear exterior is exactly conserved.
    Conservative,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Nonlinear => "nonlinear",
            Mode::Linear => "linear",
            Mode::Conservative => "conservative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Local error tolerance of the embedded pair.
    pub tol: f64,
    /// Convolution grid spacing (s); also caps the step size.
    pub dt_conv: f64,
    /// Number of convolution grid intervals before the tail law takes over.
    pub n_conv: usize,
    /// Run outside the admissible range, demoting bound violations to warnings.
    pub allow_inadmissible: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-6,
            dt_conv: 0.1,
            n_conv: 100,
            allow_inadmissible: false,
        }
    }
}
