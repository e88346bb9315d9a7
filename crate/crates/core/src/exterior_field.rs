//! Linear radial shallow-water solver for the fluid outside the cylinder.
//!
//! Solves `∂_tζ + (1/r)∂_r(rq) = 0`, `∂_tq + v₀²∂_rζ = 0` on `[R, L]` with the
//! wall flux `q(R) = −(R/2)δ̇` and a reflective far end. `ζ` lives on the nodes
//! `r_j = R + j·dr` (half cells at both ends), `q` on the faces between them.
//! With these control volumes the discrete energy changes only through the
//! wall, at rate `−c ζ₀ δ̇`, which is exactly the work done on the solid when
//! the wall elevation is read at node 0.
//!
//! Coupled to the solid it gives an independent realization of the
//! convolution model: no kernel is involved.

use crate::solid_motion::{
    derived_constants, energy_breakdown, DerivedConstants, Mode, PhysicalParams, SimTrace,
    SolidError, TraceRow,
};
use std::f64::consts::PI;
use thiserror::Error;

pub const MAX_COURANT: f64 = 0.9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("Courant number {0} exceeds {MAX_COURANT}")]
    Cfl(f64),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Solid(#[from] SolidError),
}

pub type Result<T> = std::result::Result<T, FieldError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_cells: usize,
    pub dr: f64,
}

impl RadialGrid {
    /// Uniform grid on `[r_min, r_max]` with spacing at most `dr`.
    pub fn new(r_min: f64, r_max: f64, dr: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && dr > 0.0 && dr.is_finite()) {
            return Err(FieldError::Grid(format!(
                "need 0 < r_min < r_max and dr > 0, got [{r_min}, {r_max}], dr = {dr}"
            )));
        }
        let n_cells = ((r_max - r_min) / dr).ceil() as usize;
        Ok(RadialGrid {
            r_min,
            r_max,
            n_cells,
            dr: (r_max - r_min) / n_cells as f64,
        })
    }

    /// Grid long enough that nothing leaving the wall comes back within
    /// `t_sim`: the front plus room for the dispersive precursor of the
    /// discrete scheme, which dies off within a few dozen cells.
    pub fn outrunning(r: f64, v0: f64, t_sim: f64, dr: f64) -> Result<Self> {
        Self::new(r, r + v0 * t_sim + 200.0 * dr, dr)
    }

    pub fn node(&self, j: usize) -> f64 {
        self.r_min + j as f64 * self.dr
    }

    pub fn face(&self, j: usize) -> f64 {
        self.r_min + (j as f64 + 0.5) * self.dr
    }

    /// `∫ r dr` over the control volume of node `j`.
    fn weight(&self, j: usize) -> f64 {
        let dr = self.dr;
        if j == 0 {
            (self.r_min + 0.25 * dr) * 0.5 * dr
        } else if j == self.n_cells {
            (self.r_max - 0.25 * dr) * 0.5 * dr
        } else {
            self.node(j) * dr
        }
    }
}

/// `ζ` on nodes at time `t`, `q` on faces half a step ahead.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorField {
    pub grid: RadialGrid,
    pub zeta: Vec<f64>,
    pub q: Vec<f64>,
    pub t: f64,
    weights: Vec<f64>,
}

impl ExteriorField {
    pub fn at_rest(grid: RadialGrid) -> Self {
        ExteriorField {
            grid,
            zeta: vec![0.0; grid.n_cells + 1],
            q: vec![0.0; grid.n_cells],
            t: 0.0,
            weights: (0..=grid.n_cells).map(|j| grid.weight(j)).collect(),
        }
    }

    /// Elevation at the wall.
    pub fn wall_elevation(&self) -> f64 {
        self.zeta[0]
    }

    /// One leapfrog step: `ζ` with the current fluxes (wall flux from
    /// `boundary_delta_dot`), then `q` from the new `ζ`.
    pub fn step(&mut self, boundary_delta_dot: f64, dt: f64, v0: f64) -> Result<()> {
        let g = self.grid;
        let courant = v0 * dt / g.dr;
        if courant.is_nan() || courant > MAX_COURANT {
            return Err(FieldError::Cfl(courant));
        }
        let wall_flux = g.r_min * (-0.5 * g.r_min * boundary_delta_dot);
        let n = g.n_cells;
        let mut inflow = wall_flux;
        for j in 0..=n {
            let outflow = if j < n { g.face(j) * self.q[j] } else { 0.0 };
            self.zeta[j] += dt * (inflow - outflow) / self.weights[j];
            inflow = outflow;
        }
        let k = dt * v0 * v0 / g.dr;
        for j in 0..n {
            self.q[j] -= k * (self.zeta[j + 1] - self.zeta[j]);
        }
        self.t += dt;
        Ok(())
    }

    /// Largest `|ζ|` at nodes with `r > r_front`.
    pub fn max_beyond(&self, r_front: f64) -> f64 {
        self.zeta
            .iter()
            .enumerate()
            .filter(|(j, _)| self.grid.node(*j) > r_front)
            .map(|(_, z)| z.abs())
            .fold(0.0, f64::max)
    }
}

fn energy_with(field: &ExteriorField, p: &PhysicalParams, q_other: &[f64]) -> f64 {
    let g = field.grid;
    let potential: f64 = field
        .zeta
        .iter()
        .zip(&field.weights)
        .map(|(z, w)| w * z * z)
        .sum();
    let kinetic: f64 = field
        .q
        .iter()
        .zip(q_other)
        .enumerate()
        .map(|(j, (a, b))| g.face(j) * g.dr * a * b)
        .sum();
    2.0 * PI * (0.5 * p.rho * p.g * potential + 0.5 * p.rho / p.h0 * kinetic)
}

/// `2π[½ρg ∫ζ² r dr + ½(ρ/h₀) ∫q² r dr]` on the grid.
pub fn exterior_energy(field: &ExteriorField, p: &PhysicalParams) -> f64 {
    energy_with(field, p, &field.q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cosimulation {
    /// Solid trace with exterior and total energies filled in.
    pub trace: SimTrace,
    pub field: ExteriorField,
    pub dt: f64,
    /// Work done on the solid by the `b/h_e²` wall term up to each row; zero
    /// outside the nonlinear model. `e_tot − wall_work` is the conserved
    /// quantity in every model.
    pub wall_work: Vec<f64>,
}

/// Advances solid and exterior fluid in lockstep with time step
/// `courant·dr/v₀`. Per step: read `ζ₀`, update the solid velocity (the
/// quadratic term semi-implicitly), move the solid, then step the fluid with
/// the new wall flux.
pub fn cosimulate(
    p: &PhysicalParams,
    delta0: f64,
    t_end: f64,
    dr: f64,
    courant: f64,
    mode: Mode,
) -> Result<Cosimulation> {
    let dc = derived_constants(p)?;
    if !(courant > 0.0 && courant <= MAX_COURANT) {
        return Err(FieldError::Cfl(courant));
    }
    let grid = RadialGrid::outrunning(p.r, dc.v0, t_end, dr)?;
    let mut field = ExteriorField::at_rest(grid);
    let n_steps = (t_end * dc.v0 / (courant * grid.dr)).ceil().max(1.0) as usize;
    let dt = t_end / n_steps as f64;

    let accel0 = -dc.c_hydro * delta0 / dc.inertia(mode, delta0);

    let mut delta = delta0;
    let mut v_half = -0.5 * dt * accel0;
    let mut rows = Vec::with_capacity(n_steps + 1);
    let mut q_prev = field.q.clone();
    let mut wall_work = Vec::with_capacity(n_steps + 1);
    let mut work = 0.0;

    for n in 0..=n_steps {
        let t = n as f64 * dt;
        let zeta = field.wall_elevation();
        let h_e = p.h0 + zeta;
        let h_w = check_depths(&dc, t, delta, h_e)?;
        let m_eff = dc.inertia(mode, delta);
        let force = -dc.c_hydro * delta + dc.c_hydro * zeta;
        let v_next =
            (m_eff * v_half + dt * force) / (m_eff - dt * dc.quadratic(mode, delta, h_e) * v_half);
        let v_mid = 0.5 * (v_half + v_next);

        let e_ext = energy_with(&field, p, &q_prev);
        let e = energy_breakdown(p, &dc, mode, delta, v_mid, Some(e_ext));
        wall_work.push(work);
        rows.push(TraceRow {
            t,
            delta,
            delta_dot: v_mid,
            delta_ddot: (v_next - v_half) / dt,
            zeta_e_r: zeta,
            h_w,
            e_sol: e.e_sol,
            e_int: e.e_int,
            e_ext: e.e_ext,
            e_tot: e.e_tot,
        });
        if n == n_steps {
            break;
        }
        if mode == Mode::Nonlinear {
            work += dt * dc.b_exterior(h_e) * v_half * v_next * v_mid;
        }
        delta += dt * v_next;
        v_half = v_next;
        q_prev.copy_from_slice(&field.q);
        field.step(v_next, dt, dc.v0)?;
    }

    Ok(Cosimulation {
        trace: SimTrace {
            mode,
            rows,
            warnings: Vec::new(),
            accepted_steps: n_steps,
            rejected_steps: 0,
        },
        field,
        dt,
        wall_work,
    })
}

fn check_depths(dc: &DerivedConstants, t: f64, delta: f64, h_e: f64) -> Result<f64> {
    let h_w = dc.h_w(delta);
    if h_w <= 0.0 {
        return Err(SolidError::Positivity {
            what: "interior depth h_w",
            t,
            value: h_w,
        }
        .into());
    }
    if h_e <= 0.0 {
        return Err(SolidError::Positivity {
            what: "exterior depth h_e",
            t,
            value: h_e,
        }
        .into());
    }
    Ok(h_w)
}
