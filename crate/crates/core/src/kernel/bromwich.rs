//! Bromwich inversion on the line `Re s = c`.
//!
//! `λ/s + β/(s+a)²` is subtracted from the transform and its inverse
//! `λ + β t e^{-at}` added back, leaving an `O(ω⁻³)` integrand. The
//! trapezoid sum over `ω ∈ [0, Ω]` is evaluated for all grid times at once:
//! with `dω·dt = 2π/N` it is a length-`N` DFT of the folded samples.

use super::{f0, f_of_s, KernelError, KernelParams, KernelTable, Result};
use super::{BETA2, BROMWICH_T_MAX, LAMBDA, TAIL_COEFF, TAIL_MATCH};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Raw Bromwich values on a grid, without the tail law.
#[derive(Debug, Clone, PartialEq)]
pub struct BromwichValues {
    pub values: Vec<f64>,
    /// Estimate of the error from truncating the ω integral at `Ω`.
    pub truncation_bound: f64,
    /// Spacing actually used (≤ the requested `d_omega`).
    pub d_omega: f64,
    pub samples: usize,
}

struct Subtraction {
    lambda: f64,
    beta: f64,
    rate: f64,
}

impl Subtraction {
    fn transform(&self, s: Complex64) -> Complex64 {
        let p = s + self.rate;
        self.lambda / s + self.beta / (p * p)
    }

    fn inverse(&self, t: f64) -> f64 {
        self.lambda + self.beta * t * (-self.rate * t).exp()
    }
}

struct Line {
    c: f64,
    omega_max: f64,
    d_omega: f64,
    tol: f64,
}

fn grid_step(t_grid: &[f64]) -> Result<f64> {
    if t_grid.len() < 2 || t_grid[0] != 0.0 {
        return Err(KernelError::BadGrid);
    }
    let dt = t_grid[1];
    if dt.is_nan() || dt <= 0.0 {
        return Err(KernelError::BadGrid);
    }
    let uniform = t_grid
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - k as f64 * dt).abs() <= 1e-9 * dt.max(t));
    if uniform {
        Ok(dt)
    } else {
        Err(KernelError::BadGrid)
    }
}

fn invert<F>(g: F, sub: &Subtraction, line: &Line, dt: f64, n_t: usize) -> Result<BromwichValues>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let period_points = (2.0 * PI / (line.d_omega * dt)).ceil() as usize;
    let n = period_points.max(n_t).next_power_of_two();
    let dw = 2.0 * PI / (n as f64 * dt);
    let m = (line.omega_max / dw).ceil() as usize;

    let reduced = |omega: f64| -> Result<Complex64> {
        let s = Complex64::new(line.c, omega);
        Ok(g(s)? - sub.transform(s))
    };

    let mut folded = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..=m {
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        folded[k % n] += w * reduced(k as f64 * dw)?;
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut folded);

    let g_end = reduced(m as f64 * dw)?.norm();
    let omega_end = m as f64 * dw;
    let mut bound: f64 = 0.0;
    let values = (0..n_t)
        .map(|j| {
            let t = j as f64 * dt;
            let amp = (line.c * t).exp();
            let reach = if t > 0.0 {
                (0.5 * omega_end).min(1.0 / t)
            } else {
                0.5 * omega_end
            };
            bound = bound.max(amp * g_end * reach / PI);
            sub.inverse(t) + amp / PI * dw * folded[j].re
        })
        .collect();

    if bound > line.tol {
        return Err(KernelError::Convergence {
            bound,
            tol: line.tol,
        });
    }
    Ok(BromwichValues {
        values,
        truncation_bound: bound,
        d_omega: dw,
        samples: m + 1,
    })
}

/// `F₀` on `t_grid` (uniform, starting at 0, F₀ units) straight from the
/// Bromwich integral, with no tail handoff.
pub fn bromwich_values(params: &KernelParams, t_grid: &[f64]) -> Result<BromwichValues> {
    params.validate()?;
    let dt = grid_step(t_grid)?;
    let sub = Subtraction {
        lambda: LAMBDA,
        beta: BETA2,
        rate: 1.0,
    };
    let line = Line {
        c: params.c_bromwich,
        omega_max: params.omega_max,
        d_omega: params.d_omega,
        tol: params.tol,
    };
    invert(f0, &sub, &line, dt, t_grid.len())
}

/// Physical kernel `F(t)` on a grid in seconds, inverted from `f(s)` itself
/// (not by rescaling `F₀`). The line and frequency settings in `params` are
/// read in F₀ units and scaled by `τ = R/v₀`.
pub fn bromwich_physical(params: &KernelParams, t_grid: &[f64]) -> Result<BromwichValues> {
    params.validate()?;
    let dt = grid_step(t_grid)?;
    let tau = params.tau();
    let sub = Subtraction {
        lambda: LAMBDA,
        beta: BETA2 / tau,
        rate: 1.0 / tau,
    };
    let line = Line {
        c: params.c_bromwich / tau,
        omega_max: params.omega_max / tau,
        d_omega: params.d_omega / tau,
        tol: params.tol,
    };
    invert(|s| f_of_s(s, params), &sub, &line, dt, t_grid.len())
}

/// Tabulates `F₀` on `t_grid`.
///
/// Bromwich values are used up to `t_tail`, the earliest time after which
/// every computed value (up to `BROMWICH_T_MAX`) is within `TAIL_MATCH` of
/// `TAIL_COEFF/t²`; from there on the tail law is stored.
pub fn invert_bromwich(params: &KernelParams, t_grid: &[f64]) -> Result<KernelTable> {
    let dt = grid_step(t_grid)?;
    let n_b = t_grid
        .iter()
        .take_while(|&&t| t <= BROMWICH_T_MAX * (1.0 + 1e-12))
        .count();
    let raw = bromwich_values(params, &t_grid[..n_b])?;

    let matches = |j: usize| {
        let t = j as f64 * dt;
        t > 0.0 && (raw.values[j] * t * t / TAIL_COEFF - 1.0).abs() <= TAIL_MATCH
    };
    let mut first = n_b;
    while first > 0 && matches(first - 1) {
        first -= 1;
    }
    let tail_index = first.min(n_b - 1);
    let t_tail = tail_index as f64 * dt;

    let values = (0..t_grid.len())
        .map(|j| {
            if j < tail_index || (j == tail_index && j + 1 == t_grid.len()) {
                raw.values[j]
            } else {
                let t = j as f64 * dt;
                TAIL_COEFF / (t * t)
            }
        })
        .collect();

    let mut table = KernelTable {
        dt,
        values,
        t_tail,
        tail_coeff: TAIL_COEFF,
        l1_norm: 0.0,
        truncation_bound: raw.truncation_bound,
    };
    table.l1_norm = super::kernel_l1_norm(&table);
    Ok(table)
}
