//! Large-time oracle for `F₀` from the contour pushed left of the origin.
//!
//! The Bromwich line is moved to `Re s = -ε` and wraps the cut on `(-ε, 0]`:
//!
//! ```text
//! F₀(t) = (1/2π) ∫ g₀(-ε+iω) e^{(-ε+iω)t} dω + (1/2πi) ∫_{-ε}^0 J(x) e^{xt} dx
//! ```
//!
//! with `g₀ = f₀ − λ/s` and `J(x) = f₀(x−i0) − f₀(x+i0)`. The `λ/s` pole is
//! crossed on the way, and its residue cancels the `λ` added back, so no
//! constant term remains. `H₁⁽¹⁾(is)` has no zeros with `Re s > -ε`, so no other
//! singularities are crossed; agreement with the Bromwich table checks this.

use super::{f0, Result, LAMBDA};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    /// Set when `t` is below the oracle's validity threshold.
    pub below_t_min: bool,
}

/// Precomputed line and cut samples; evaluation at a time is a weighted sum.
#[derive(Debug, Clone)]
pub struct BranchCutOracle {
    eps: f64,
    t_min: f64,
    line_u: Vec<f64>,
    line_w: Vec<Complex64>,
    cut_x: Vec<f64>,
    cut_w: Vec<f64>,
}

/// Jump of `f₀` across the cut at `x < 0`: `f₀(x−i0) − f₀(x+i0)`.
/// Purely imaginary, `≈ −πix` as `x → 0⁻`.
pub fn jump(x: f64) -> Result<Complex64> {
    let below = f0(Complex64::new(x, -0.0))?;
    let above = f0(Complex64::new(x, 0.0))?;
    Ok(below - above)
}

fn simpson_weights(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| {
        if k == 0 || k == n {
            1.0 / 3.0
        } else if k % 2 == 1 {
            4.0 / 3.0
        } else {
            2.0 / 3.0
        }
    })
}

impl BranchCutOracle {
    pub const EPS: f64 = 0.1;
    pub const T_MIN: f64 = 10.0;

    pub fn new() -> Result<Self> {
        Self::with_resolution(Self::EPS, Self::T_MIN, 400.0, 200_000, 4_000)
    }

    /// `line_intervals` Simpson intervals on `u ∈ [0, u_max]`, `cut_intervals`
    /// on `x ∈ [-ε, 0]`. Both counts must be even.
    pub fn with_resolution(
        eps: f64,
        t_min: f64,
        u_max: f64,
        line_intervals: usize,
        cut_intervals: usize,
    ) -> Result<Self> {
        assert!(line_intervals.is_multiple_of(2) && cut_intervals.is_multiple_of(2));
        let du = u_max / line_intervals as f64;
        let mut line_u = Vec::with_capacity(line_intervals + 1);
        let mut line_w = Vec::with_capacity(line_intervals + 1);
        for (k, w) in simpson_weights(line_intervals).enumerate() {
            let u = k as f64 * du;
            // u = 0 sits on the cut; the line approaches it from below.
            let s = Complex64::new(-eps, -u - 0.0);
            let g = f0(s)? - LAMBDA / s;
            line_u.push(u);
            line_w.push(w * du * g);
        }

        let dx = eps / cut_intervals as f64;
        let mut cut_x = Vec::with_capacity(cut_intervals);
        let mut cut_w = Vec::with_capacity(cut_intervals);
        for (k, w) in simpson_weights(cut_intervals)
            .enumerate()
            .take(cut_intervals)
        {
            // the endpoint x = 0 has zero jump
            let x = -eps + k as f64 * dx;
            cut_x.push(x);
            cut_w.push(w * dx * jump(x)?.im);
        }

        Ok(BranchCutOracle {
            eps,
            t_min,
            line_u,
            line_w,
            cut_x,
            cut_w,
        })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    /// Contribution of the shifted line, `O(e^{-εt})`.
    pub fn line_part(&self, t: f64) -> f64 {
        let sum: f64 = self
            .line_u
            .iter()
            .zip(&self.line_w)
            .map(|(&u, w)| {
                let (sin, cos) = (u * t).sin_cos();
                // Re[w e^{-iut}]
                w.re * cos + w.im * sin
            })
            .sum();
        (-self.eps * t).exp() / PI * sum
    }

    /// Contribution of the cut, which carries the `1/(2t²)` tail.
    pub fn cut_part(&self, t: f64) -> f64 {
        let sum: f64 = self
            .cut_x
            .iter()
            .zip(&self.cut_w)
            .map(|(&x, &w)| w * (x * t).exp())
            .sum();
        sum / (2.0 * PI)
    }

    pub fn eval(&self, t: f64) -> OracleValue {
        OracleValue {
            value: self.line_part(t) + self.cut_part(t),
            below_t_min: t < self.t_min,
        }
    }
}

static DEFAULT_ORACLE: OnceLock<BranchCutOracle> = OnceLock::new();

/// `F₀(t)` from the default oracle, built on first use.
pub fn branchcut_kernel(t: f64) -> OracleValue {
    DEFAULT_ORACLE
        .get_or_init(|| BranchCutOracle::new().expect("oracle nodes avoid the branch point"))
        .eval(t)
}
