//! Memory term `∫₀ᵗ F(s) δ̇(t−s) ds` on a fixed grid in `s`.

use super::{DerivedConstants, HistoryBuffer, Result, SolidError};
use crate::kernel::KernelTable;

/// Trapezoid rule on `s_k = k·dt` anchored at the evaluation time. The
/// first `n` intervals use the tabulated kernel; beyond `n·dt` the kernel is
/// replaced by its `τ²·tail_coeff/s²` law instead of being dropped.
#[derive(Debug, Clone, Copy)]
pub struct Convolution<'a> {
    kernel: &'a KernelTable,
    tau: f64,
    h0: f64,
    dt: f64,
    n: usize,
}

impl<'a> Convolution<'a> {
    pub fn new(kernel: &'a KernelTable, dc: &DerivedConstants, h0: f64, dt: f64, n: usize) -> Self {
        assert!(dt > 0.0 && n > 0);
        Convolution {
            kernel,
            tau: dc.tau,
            h0,
            dt,
            n,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Physical kernel `F(s) = F₀(s/τ)` inside the window, tail law outside.
    fn weight(&self, s: f64, in_window: bool) -> f64 {
        if in_window {
            self.kernel.eval(s / self.tau)
        } else {
            self.kernel.tail_coeff * self.tau * self.tau / (s * s)
        }
    }

    /// `∫₀ᵗ F(s) δ̇(t−s) ds`, using `delta_dot_now` for `δ̇(t)` and the history
    /// for earlier times.
    pub fn memory(&self, hist: &HistoryBuffer, t: f64, delta_dot_now: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let k_full = (t / self.dt).floor() as usize;
        let node = |k: usize| -> (f64, f64) {
            let s = k as f64 * self.dt;
            let v = if k == 0 {
                delta_dot_now
            } else {
                hist.delta_dot(t - s)
            };
            (s, v)
        };
        let mut acc = 0.0;
        let mut prev = {
            let (s, v) = node(0);
            self.weight(s, true) * v
        };
        for k in 1..=k_full {
            let (s, v) = node(k);
            let f = self.weight(s, k <= self.n) * v;
            acc += 0.5 * self.dt * (prev + f);
            prev = f;
        }
        // partial interval [k_full·dt, t]
        let s_last = k_full as f64 * self.dt;
        let width = t - s_last;
        if width > 0.0 {
            let f = self.weight(t, k_full < self.n) * hist.delta_dot(0.0);
            acc += 0.5 * width * (prev + f);
        }
        acc
    }

    /// Free-surface elevation and depth at the cylinder wall:
    /// `ζ_e = memory − (τ/2) δ̇(t)`, `h_e = h₀ + ζ_e`.
    pub fn boundary_trace(
        &self,
        hist: &HistoryBuffer,
        t: f64,
        delta_dot_now: f64,
    ) -> Result<(f64, f64)> {
        let zeta = self.memory(hist, t, delta_dot_now) - 0.5 * self.tau * delta_dot_now;
        let h_e = self.h0 + zeta;
        if h_e <= 0.0 {
            return Err(SolidError::Positivity {
                what: "exterior depth h_e",
                t,
                value: h_e,
            });
        }
        Ok((zeta, h_e))
    }
}
