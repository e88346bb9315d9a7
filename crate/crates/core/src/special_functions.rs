//! Bessel and Hankel functions of orders 0 and 1 for complex arguments.
//!
//! Three evaluation routes cover the plane:
//!
//! * the ascending power series for `J_n` and `Y_n` when `|z| < SWITCHOVER_RADIUS`
//!   and the argument is close to the real axis,
//! * the integral `K_n(w) = ∫₀^∞ exp(-w cosh t) cosh(nt) dt` (with `w = ∓iz`)
//!   for the exponentially small Hankel function when `|z| < SWITCHOVER_RADIUS`
//!   and `|Im z| > 2`, where `J + iY` would cancel catastrophically,
//! * the large-argument expansion with the `a_k(n)` coefficients when
//!   `|z| ≥ SWITCHOVER_RADIUS`, evaluated in the closed right half-plane and
//!   carried to the left half-plane with the analytic continuation formulas.
//!
//! All functions use the principal branch (cut along the negative real axis).
//! On the cut itself the sign of the zero imaginary part selects the side:
//! `-x + 0i` is the upper lip (`arg z = π`), `-x - 0i` the lower lip.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use thiserror::Error;

/// Euler–Mascheroni constant to 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `|z|` at which evaluation switches from the small-argument routes to the
/// asymptotic expansion.
pub const SWITCHOVER_RADIUS: f64 = 14.0;

const SERIES_REL_EPS: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 60;
const ASYMPTOTIC_MAX_TERMS: usize = 30;
const INTEGRAL_IM_THRESHOLD: f64 = 2.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SpecialFunctionError {
    #[error("non-finite argument {0}")]
    NonFinite(Complex64),
    #[error("z = 0 is a logarithmic branch point")]
    BranchPoint,
}

pub type Result<T> = std::result::Result<T, SpecialFunctionError>;

/// Order of the Bessel function. Only orders 0 and 1 are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Zero,
    One,
}

impl Order {
    pub fn index(self) -> usize {
        match self {
            Order::Zero => 0,
            Order::One => 1,
        }
    }
}

/// Hankel function kind: `H⁽¹⁾ = J + iY`, `H⁽²⁾ = J − iY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    First,
    Second,
}

/// Which route produced a [`CylinderValues`], with the truncation used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Series { terms: usize },
    Integral { nodes: usize },
    Asymptotic { terms: usize },
}

/// Forces the small- or large-argument routes regardless of `|z|`.
/// Used to test the overlap between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Small,
    Large,
}

/// `J`, `Y`, `H⁽¹⁾`, `H⁽²⁾` of orders 0 and 1 at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderValues {
    pub j: [Complex64; 2],
    pub y: [Complex64; 2],
    pub h1: [Complex64; 2],
    pub h2: [Complex64; 2],
    pub method: EvalMethod,
}

impl CylinderValues {
    pub fn hankel(&self, kind: Kind, n: Order) -> Complex64 {
        match kind {
            Kind::First => self.h1[n.index()],
            Kind::Second => self.h2[n.index()],
        }
    }
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SpecialFunctionError::NonFinite(z))
    }
}

/// Evaluates every order-0/1 cylinder function at `z`, picking the route from `|z|`.
pub fn cylinder(z: Complex64) -> Result<CylinderValues> {
    let regime = if z.norm() < SWITCHOVER_RADIUS {
        Regime::Small
    } else {
        Regime::Large
    };
    cylinder_in(regime, z)
}

/// Like [`cylinder`] but with the route chosen by the caller.
pub fn cylinder_in(regime: Regime, z: Complex64) -> Result<CylinderValues> {
    check_finite(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(SpecialFunctionError::BranchPoint);
    }
    let mut v = match regime {
        Regime::Small => small_argument(z),
        Regime::Large => large_argument(z),
    };
    if z.im == 0.0 && z.re > 0.0 {
        // J and Y are real on the positive axis; keep them exactly real.
        for n in 0..2 {
            let h = v.h1[n];
            v.j[n] = Complex64::new(h.re, 0.0);
            v.y[n] = Complex64::new(h.im, 0.0);
            v.h2[n] = h.conj();
        }
    }
    Ok(v)
}

/// Bessel function of the first kind. Entire, so `z = 0` is allowed.
pub fn bessel_j(n: Order, z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if z.norm() < SWITCHOVER_RADIUS {
        let (j, _) = series_j(z);
        return Ok(j[n.index()]);
    }
    Ok(cylinder_in(Regime::Large, z)?.j[n.index()])
}

/// Bessel function of the second kind on the principal branch.
pub fn bessel_y(n: Order, z: Complex64) -> Result<Complex64> {
    Ok(cylinder(z)?.y[n.index()])
}

/// Hankel function `H_n^{(kind)}(z)` on the principal branch.
pub fn hankel(kind: Kind, n: Order, z: Complex64) -> Result<Complex64> {
    Ok(cylinder(z)?.hankel(kind, n))
}

/// `H_n^{(kind)}(z·e^{mπi})` from the principal values at `z`:
///
/// ```text
/// H⁽¹⁾(z e^{mπi}) = (-1)^{mn-1} ((m-1) H⁽¹⁾(z) + m H⁽²⁾(z))
/// H⁽²⁾(z e^{mπi}) = (-1)^{mn}   (m H⁽¹⁾(z) + (m+1) H⁽²⁾(z))
/// ```
pub fn hankel_continued(kind: Kind, n: Order, z: Complex64, m: i32) -> Result<Complex64> {
    let v = cylinder(z)?;
    Ok(continue_values(&v, kind, n, m))
}

fn continue_values(v: &CylinderValues, kind: Kind, n: Order, m: i32) -> Complex64 {
    let k = n.index();
    let mf = m as f64;
    let sign_mn = if (m * k as i32).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    match kind {
        Kind::First => -sign_mn * ((mf - 1.0) * v.h1[k] + mf * v.h2[k]),
        Kind::Second => sign_mn * (mf * v.h1[k] + (mf + 1.0) * v.h2[k]),
    }
}

/// `H₀⁽¹⁾(is) / H₁⁽¹⁾(is)`.
///
/// The branch is the one under which `s ↦ H(is)` is analytic in the plane cut
/// along the negative real `s` axis (`arg(is) ∈ (-π/2, 3π/2]`). It agrees with
/// the principal branch for `Re s ≥ 0` and for `Im s < 0`. On the cut the sign
/// of `s.im` picks the side: `-x + 0i` is the upper lip, `-x - 0i` the lower.
///
/// For `|s| ≥ SWITCHOVER_RADIUS` the ratio of the asymptotic series is used so
/// that neither factor is formed on its own.
pub fn hankel_ratio(s: Complex64) -> Result<Complex64> {
    check_finite(s)?;
    if s == Complex64::new(0.0, 0.0) {
        return Err(SpecialFunctionError::BranchPoint);
    }
    // is, with an imaginary-axis `s` mapped onto the upper lip of the z cut.
    let z = Complex64::new(-s.im, s.re + 0.0);
    let upper_sheet = s.re < 0.0 && s.im.is_sign_positive();

    if z.norm() >= SWITCHOVER_RADIUS {
        // Rotation m so that z = w e^{mπi} with Re w ≥ 0.
        let m = if upper_sheet {
            1
        } else if z.re >= 0.0 {
            0
        } else if z.im.is_sign_positive() {
            1
        } else {
            -1
        };
        let ratio = match m {
            0 => {
                let (s1, _) = asymptotic_sums(z, 1.0);
                I * s1[0] / s1[1]
            }
            1 => {
                let w = -z;
                let (s2, _) = asymptotic_sums(w, -1.0);
                I * s2[0] / s2[1]
            }
            _ => {
                // H⁽¹⁾_n(z) = (-1)^n (2H⁽¹⁾_n(w) + H⁽²⁾_n(w)); scale out P e^{-iω_n}.
                let w = -z;
                let (s1, _) = asymptotic_sums(w, 1.0);
                let (s2, _) = asymptotic_sums(w, -1.0);
                let e = (2.0 * I * w).exp();
                let t0 = 2.0 * e * (-I) * s1[0] + s2[0];
                let t1 = 2.0 * e * I * s1[1] + s2[1];
                I * t0 / t1
            }
        };
        return Ok(ratio);
    }

    let v = small_argument(z);
    if upper_sheet {
        let h0 = continue_values(&v, Kind::First, Order::Zero, 2);
        let h1 = continue_values(&v, Kind::First, Order::One, 2);
        Ok(h0 / h1)
    } else {
        Ok(v.h1[0] / v.h1[1])
    }
}

// ---------------------------------------------------------------------------
// Small-argument routes

fn small_argument(z: Complex64) -> CylinderValues {
    if z.im.abs() <= INTEGRAL_IM_THRESHOLD {
        let (j, y, terms) = series_jy(z);
        CylinderValues {
            j,
            y,
            h1: [j[0] + I * y[0], j[1] + I * y[1]],
            h2: [j[0] - I * y[0], j[1] - I * y[1]],
            method: EvalMethod::Series { terms },
        }
    } else {
        let (j, _) = series_j(z);
        if z.im > 0.0 {
            let (h1, nodes) = hankel1_from_k(z);
            let y = [-I * (h1[0] - j[0]), -I * (h1[1] - j[1])];
            CylinderValues {
                j,
                y,
                h1,
                h2: [2.0 * j[0] - h1[0], 2.0 * j[1] - h1[1]],
                method: EvalMethod::Integral { nodes },
            }
        } else {
            // H⁽²⁾(z) = conj(H⁽¹⁾(conj z))
            let (h1c, nodes) = hankel1_from_k(z.conj());
            let h2 = [h1c[0].conj(), h1c[1].conj()];
            let y = [-I * (j[0] - h2[0]), -I * (j[1] - h2[1])];
            CylinderValues {
                j,
                y,
                h1: [2.0 * j[0] - h2[0], 2.0 * j[1] - h2[1]],
                h2,
                method: EvalMethod::Integral { nodes },
            }
        }
    }
}

/// Power series for `J_0`, `J_1`.
fn series_j(z: Complex64) -> ([Complex64; 2], usize) {
    let half = z * 0.5;
    let mq = -(half * half);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    let mut used = 0;
    for (n, slot) in out.iter_mut().enumerate() {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let mut k = 0;
        while k < SERIES_MAX_TERMS {
            k += 1;
            term = term * mq / ((k * (n + k)) as f64);
            sum += term;
            if term.norm() <= SERIES_REL_EPS * sum.norm() {
                break;
            }
        }
        used = used.max(k);
        *slot = if n == 0 { sum } else { half * sum };
    }
    (out, used)
}

/// Power series for `J_n` and `Y_n`, n = 0, 1.
fn series_jy(z: Complex64) -> ([Complex64; 2], [Complex64; 2], usize) {
    let half = z * 0.5;
    let mq = -(half * half);
    let log_half = half.ln();
    let mut j = [Complex64::new(0.0, 0.0); 2];
    let mut y = [Complex64::new(0.0, 0.0); 2];
    let mut used = 0;
    for n in 0..2usize {
        // term_k = (-z²/4)^k / (k! (n+k)!)
        let mut term = Complex64::new(1.0, 0.0);
        let mut psi_k1 = -EULER_GAMMA; // ψ(k+1)
        let mut psi_nk1 = if n == 0 {
            -EULER_GAMMA
        } else {
            1.0 - EULER_GAMMA
        }; // ψ(n+k+1)
        let mut jsum = term;
        let mut psum = term * (psi_k1 + psi_nk1);
        let mut k = 0usize;
        while k < SERIES_MAX_TERMS {
            k += 1;
            term = term * mq / ((k * (n + k)) as f64);
            psi_k1 += 1.0 / k as f64;
            psi_nk1 += 1.0 / (n + k) as f64;
            let pterm = term * (psi_k1 + psi_nk1);
            jsum += term;
            psum += pterm;
            if term.norm() <= SERIES_REL_EPS * jsum.norm()
                && pterm.norm() <= SERIES_REL_EPS * psum.norm()
            {
                break;
            }
        }
        used = used.max(k);
        let pow = if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            half
        };
        j[n] = pow * jsum;
        let finite_part = if n == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            // -(z/2)^{-1}/π · 0!/0!
            -1.0 / (PI * half)
        };
        y[n] = finite_part + (2.0 / PI) * log_half * j[n] - pow * psum / PI;
    }
    (j, y, used)
}

/// `H⁽¹⁾_n(z) = 2 K_n(-iz) / (π i^{n+1})` for `Im z > 0`, with `K_n` from the
/// trapezoid rule on `∫₀^∞ exp(-w cosh t) cosh(nt) dt`.
fn hankel1_from_k(z: Complex64) -> ([Complex64; 2], usize) {
    let w = Complex64::new(z.im, -z.re);
    // Decay strip half-width of the integrand in the complex t plane.
    let strip = FRAC_PI_2 - w.arg().abs();
    let h = (strip / 8.0).min(0.1);
    let cutoff = 1.0 + 40.0 / w.re;
    let mut k0 = 0.5 * (-w).exp();
    let mut k1 = k0;
    let mut nodes = 1;
    loop {
        let t = nodes as f64 * h;
        let ch = t.cosh();
        let e = (-w * ch).exp();
        k0 += e;
        k1 += e * ch;
        nodes += 1;
        if ch > cutoff {
            break;
        }
    }
    k0 *= h;
    k1 *= h;
    ([-2.0 * I * k0 / PI, -2.0 * k1 / PI], nodes)
}

// ---------------------------------------------------------------------------
// Large-argument route

/// `Σ_k σ^k i^k a_k(n) / z^k` for n = 0, 1, truncated at the smallest term.
/// `sigma = +1` gives the `H⁽¹⁾` sum, `-1` the `H⁽²⁾` sum.
fn asymptotic_sums(z: Complex64, sigma: f64) -> ([Complex64; 2], usize) {
    let inv = 1.0 / z;
    let step = Complex64::new(0.0, sigma) * inv;
    let mut out = [Complex64::new(0.0, 0.0); 2];
    let mut used = 0;
    for (n, slot) in out.iter_mut().enumerate() {
        let four_n2 = 4.0 * (n * n) as f64;
        let mut a = 1.0;
        let mut pow = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(1.0, 0.0);
        let mut prev = f64::INFINITY;
        let mut k = 0;
        while k < ASYMPTOTIC_MAX_TERMS {
            k += 1;
            let odd = (2 * k - 1) as f64;
            a *= (four_n2 - odd * odd) / (8.0 * k as f64);
            pow *= step;
            let term = a * pow;
            let mag = term.norm();
            if mag > prev || a == 0.0 {
                break;
            }
            sum += term;
            prev = mag;
            if mag <= SERIES_REL_EPS * sum.norm() {
                break;
            }
        }
        used = used.max(k);
        *slot = sum;
    }
    (out, used)
}

/// `H⁽¹⁾`, `H⁽²⁾` from the expansion, valid for `Re z ≥ 0`.
fn asymptotic_right(z: Complex64) -> ([Complex64; 2], [Complex64; 2], usize) {
    let (s1, u1) = asymptotic_sums(z, 1.0);
    let (s2, u2) = asymptotic_sums(z, -1.0);
    let pre = (2.0 / (PI * z)).sqrt();
    let mut h1 = [Complex64::new(0.0, 0.0); 2];
    let mut h2 = [Complex64::new(0.0, 0.0); 2];
    for n in 0..2 {
        let omega = z - FRAC_PI_4 - n as f64 * FRAC_PI_2;
        h1[n] = pre * (I * omega).exp() * s1[n];
        h2[n] = pre * (-I * omega).exp() * s2[n];
    }
    (h1, h2, u1.max(u2))
}

fn large_argument(z: Complex64) -> CylinderValues {
    let (h1, h2, terms) = if z.re >= 0.0 {
        asymptotic_right(z)
    } else {
        let w = -z;
        let (g1, g2, terms) = asymptotic_right(w);
        let base = CylinderValues {
            j: [Complex64::new(0.0, 0.0); 2],
            y: [Complex64::new(0.0, 0.0); 2],
            h1: g1,
            h2: g2,
            method: EvalMethod::Asymptotic { terms },
        };
        let m = if z.im.is_sign_positive() { 1 } else { -1 };
        let mut h1 = [Complex64::new(0.0, 0.0); 2];
        let mut h2 = [Complex64::new(0.0, 0.0); 2];
        for (k, n) in [Order::Zero, Order::One].into_iter().enumerate() {
            h1[k] = continue_values(&base, Kind::First, n, m);
            h2[k] = continue_values(&base, Kind::Second, n, m);
        }
        (h1, h2, terms)
    };
    let j = [(h1[0] + h2[0]) * 0.5, (h1[1] + h2[1]) * 0.5];
    let y = [(h1[0] - h2[0]) / (2.0 * I), (h1[1] - h2[1]) / (2.0 * I)];
    CylinderValues {
        j,
        y,
        h1,
        h2,
        method: EvalMethod::Asymptotic { terms },
    }
}
