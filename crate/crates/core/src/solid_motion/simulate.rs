//! Adaptive Bogacki–Shampine integration of the equation of motion.

use super::{
    admissibility, derived_constants, energy_breakdown, Convolution, DerivedConstants,
    HistoryBuffer, Mode, PhysicalParams, Result, SolidError, SolverSettings, BOUND_SLACK,
};
use crate::kernel::KernelTable;

const H_INIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub delta: f64,
    pub delta_dot: f64,
    pub delta_ddot: f64,
    pub zeta_e_r: f64,
    pub h_w: f64,
    pub e_sol: f64,
    pub e_int: f64,
    pub e_ext: Option<f64>,
    pub e_tot: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub mode: Mode,
    pub rows: Vec<TraceRow>,
    /// Bound violations tolerated because the run was forced outside the
    /// admissible range.
    pub warnings: Vec<String>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

fn hermite(a: &TraceRow, b: &TraceRow, t: f64, slope: impl Fn(&TraceRow) -> (f64, f64)) -> f64 {
    let h = b.t - a.t;
    let s = (t - a.t) / h;
    let (ya, da) = slope(a);
    let (yb, db) = slope(b);
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * ya
        + (s3 - 2.0 * s2 + s) * h * da
        + (-2.0 * s3 + 3.0 * s2) * yb
        + (s3 - s2) * h * db
}

impl SimTrace {
    fn bracket(&self, t: f64) -> (&TraceRow, &TraceRow) {
        let n = self.rows.len();
        let k = self.rows.partition_point(|r| r.t <= t).clamp(1, n - 1);
        (&self.rows[k - 1], &self.rows[k])
    }

    /// Displacement at any `t` in the traced interval, by cubic Hermite
    /// interpolation of the accepted steps.
    pub fn delta_at(&self, t: f64) -> f64 {
        if self.rows.len() == 1 {
            return self.rows[0].delta;
        }
        let (a, b) = self.bracket(t);
        hermite(a, b, t, |r| (r.delta, r.delta_dot))
    }

    pub fn delta_dot_at(&self, t: f64) -> f64 {
        if self.rows.len() == 1 {
            return self.rows[0].delta_dot;
        }
        let (a, b) = self.bracket(t);
        hermite(a, b, t, |r| (r.delta_dot, r.delta_ddot))
    }

    pub fn t_end(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.t)
    }
}

fn positive_hw(dc: &DerivedConstants, t: f64, delta: f64) -> Result<f64> {
    let h_w = dc.h_w(delta);
    if h_w > 0.0 {
        Ok(h_w)
    } else {
        Err(SolidError::Positivity {
            what: "interior depth h_w",
            t,
            value: h_w,
        })
    }
}

/// Acceleration and wall elevation for any model:
///
/// `(m + m_a) δ̈ = −cδ + cζ_e + Q δ̇²`
///
/// with `m_a`, `Q` from [`DerivedConstants::inertia`] and
/// [`DerivedConstants::quadratic`]. Only the nonlinear model needs `h_e`, so
/// only it enforces `h_e > 0`.
#[allow(clippy::too_many_arguments)]
pub fn rhs(
    mode: Mode,
    t: f64,
    delta: f64,
    delta_dot: f64,
    hist: &HistoryBuffer,
    conv: &Convolution,
    dc: &DerivedConstants,
) -> Result<(f64, f64)> {
    positive_hw(dc, t, delta)?;
    let (zeta, h_e) = match mode {
        Mode::Nonlinear => conv.boundary_trace(hist, t, delta_dot)?,
        Mode::Linear | Mode::Conservative => {
            let zeta = conv.memory(hist, t, delta_dot) - 0.5 * dc.tau * delta_dot;
            (zeta, f64::NAN)
        }
    };
    let force = -dc.c_hydro * delta
        + dc.c_hydro * zeta
        + dc.quadratic(mode, delta, h_e) * delta_dot * delta_dot;
    Ok((force / dc.inertia(mode, delta), zeta))
}

/// Integrates from rest-or-moving initial data `(δ₀, δ₁)` over `[0, t_end]`.
///
/// Refuses inadmissible `δ₀` unless `settings.allow_inadmissible` is set, in
/// which case bound violations are collected as warnings instead of errors.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    p: &PhysicalParams,
    kernel: &KernelTable,
    delta0: f64,
    delta1: f64,
    t_end: f64,
    mode: Mode,
    settings: &SolverSettings,
) -> Result<SimTrace> {
    let dc = derived_constants(p)?;
    let adm = admissibility(p, &dc, kernel, delta0);
    if !adm.admissible && !settings.allow_inadmissible {
        return Err(SolidError::Inadmissible {
            delta0,
            margin_hw: adm.margin_hw,
            margin_he: adm.margin_he,
        });
    }
    let conv = Convolution::new(kernel, &dc, p.h0, settings.dt_conv, settings.n_conv);
    let rhs = |t: f64, d: f64, v: f64, hist: &HistoryBuffer| rhs(mode, t, d, v, hist, &conv, &dc);

    let (a0, zeta0) = rhs(
        0.0,
        delta0,
        delta1,
        &HistoryBuffer::new(0.0, delta0, delta1, 0.0),
    )?;
    let mut hist = HistoryBuffer::new(0.0, delta0, delta1, a0);

    let amplitude = dc.amplitude(mode, delta0, delta1);
    let speed = dc.speed_bound(mode, delta0, delta1);
    let mut warnings = Vec::new();
    let mut check = |t: f64, what: &'static str, value: f64, bound: f64| -> Result<()> {
        if value <= bound {
            return Ok(());
        }
        if settings.allow_inadmissible {
            warnings.push(format!("t = {t}: {what} = {value} exceeds {bound}"));
            Ok(())
        } else {
            Err(SolidError::BoundViolation {
                t,
                what,
                value,
                bound,
            })
        }
    };

    let row = |t: f64, d: f64, v: f64, a: f64, zeta: f64| {
        let e = energy_breakdown(p, &dc, mode, d, v, None);
        TraceRow {
            t,
            delta: d,
            delta_dot: v,
            delta_ddot: a,
            zeta_e_r: zeta,
            h_w: dc.h_w(d),
            e_sol: e.e_sol,
            e_int: e.e_int,
            e_ext: None,
            e_tot: None,
        }
    };

    let mut rows = vec![row(0.0, delta0, delta1, a0, zeta0)];
    let tol = settings.tol;
    let mut t = 0.0;
    let mut y = [delta0, delta1];
    let mut k1 = [delta1, a0];
    let mut h = H_INIT.min(settings.dt_conv).min(t_end);
    let mut accepted = 0;
    let mut rejected = 0;

    while t < t_end {
        let last = h >= t_end - t;
        if last {
            h = t_end - t;
        }
        h = h.min(settings.dt_conv);
        if h <= 1e-12 * t.max(1.0) {
            return Err(SolidError::StepUnderflow { t, h });
        }
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
        let k2 = [y2[1], rhs(t + 0.5 * h, y2[0], y2[1], &hist)?.0];
        let y3 = [y[0] + 0.75 * h * k2[0], y[1] + 0.75 * h * k2[1]];
        let k3 = [y3[1], rhs(t + 0.75 * h, y3[0], y3[1], &hist)?.0];
        let mut y_new = [0.0; 2];
        for i in 0..2 {
            y_new[i] = y[i] + h * (2.0 / 9.0 * k1[i] + 1.0 / 3.0 * k2[i] + 4.0 / 9.0 * k3[i]);
        }
        let t_new = if last && h == t_end - t { t_end } else { t + h };
        let (a_new, zeta_new) = rhs(t_new, y_new[0], y_new[1], &hist)?;
        let k4 = [y_new[1], a_new];
        let mut err: f64 = 0.0;
        for i in 0..2 {
            let e = h
                * (-5.0 / 72.0 * k1[i] + 1.0 / 12.0 * k2[i] + 1.0 / 9.0 * k3[i]
                    - 1.0 / 8.0 * k4[i]);
            err = err.max(e.abs() / (tol * (1.0 + y_new[i].abs())));
        }

        if err <= 1.0 {
            t = t_new;
            y = y_new;
            k1 = k4;
            hist.push(t, y[0], y[1], a_new);
            accepted += 1;
            check(t, "|delta|", y[0].abs(), amplitude + BOUND_SLACK)?;
            check(t, "|delta_dot|", y[1].abs(), speed + BOUND_SLACK)?;
            let h_w = dc.h_w(y[0]);
            if h_w < dc.h_w_eq - amplitude - BOUND_SLACK {
                check(t, "h_w deficit", dc.h_w_eq - h_w, amplitude + BOUND_SLACK)?;
            }
            rows.push(row(t, y[0], y[1], a_new, zeta_new));
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-1.0 / 3.0)).clamp(0.2, 5.0)
        };
        h *= factor;
    }

    Ok(SimTrace {
        mode,
        rows,
        warnings,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}
