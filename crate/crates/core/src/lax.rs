//! Lax pair of the traveling mKdV wave and the closed-form fundamental solution Φ.
//!
//! `Φ_x = U Φ`, `Φ_t = V Φ`, compatible iff `U_t - V_x + [U, V] = 0`.
//!
//! The complex powers in the printed entries of Φ are taken on the principal
//! branch factor by factor. Since `tanh ξ - 1 < 0`,
//! `(tanh ξ + 1)^{iλ/2k1} (tanh ξ - 1)^{-iλ/2k1} = exp(iλξ/k1 + πλ/(2k1))`
//! and the reversed pattern is its reciprocal. With this branch the canonical
//! constants below make `Φ` a scalar multiple of a unitary matrix, so that
//! `Φ⁻¹ X Φ` stays in su(2).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::soliton::{self, SolitonJet, SolitonParams};
use crate::su2::{commutator, sigma1, sigma2, sigma3, CMat2};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default step for the Φ residual checks.
pub const LAX_FD_STEP: f64 = 1e-6;

/// `U = (i/2) [[λ, -u], [-u, -λ]]`.
pub fn lax_u(u: f64, lambda: f64) -> CMat2 {
    (0.5 * I) * CMat2::real(lambda, -u, -u, -lambda)
}

/// `V = -(i/2) [[u²/2 - (α + αλ + λ²), (α+λ)u - i u_x], [(α+λ)u + i u_x, -(u²/2 - (α + αλ + λ²))]]`.
pub fn lax_v(u: f64, u_x: f64, lambda: f64, alpha: f64) -> CMat2 {
    let d = 0.5 * u * u - (alpha + alpha * lambda + lambda * lambda);
    let o = (alpha + lambda) * u;
    (-0.5 * I)
        * CMat2::new(
            d.into(),
            Complex64::new(o, -u_x),
            Complex64::new(o, u_x),
            (-d).into(),
        )
}

/// `U_t - V_x + [U, V]` for an arbitrary jet.
pub fn zero_curvature_residual_of(j: &SolitonJet, lambda: f64, alpha: f64) -> CMat2 {
    let u = lax_u(j.u, lambda);
    let v = lax_v(j.u, j.u_x, lambda, alpha);
    // U_t = -(i/2) u_t σ1
    let u_t = (-0.5 * I * j.u_t) * sigma1();
    // V_x = -(i/2) (u u_x σ3 + (α+λ) u_x σ1 + u_xx σ2)
    let v_x = (-0.5 * I)
        * (sigma3().scale(j.u * j.u_x)
            + sigma1().scale((alpha + lambda) * j.u_x)
            + sigma2().scale(j.u_xx));
    u_t - v_x + commutator(&u, &v)
}

/// Zero-curvature residual of the one-soliton with closed-form derivatives.
pub fn zero_curvature_residual(x: f64, t: f64, p: &SolitonParams) -> CMat2 {
    zero_curvature_residual_of(&soliton::jet(x, t, p), p.lambda(), p.alpha())
}

/// Integration constants of Φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiConstants {
    a1: Complex64,
    a2: Complex64,
    b1: Complex64,
    b2: Complex64,
}

impl PhiConstants {
    pub fn new(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> Result<Self> {
        let c = Self { a1, a2, b1, b2 };
        if c.wronskian().norm() == 0.0 {
            return Err(Error::DegenerateConstants);
        }
        Ok(c)
    }

    /// `A1 = A2 = 1`, `B1 = e^{πλ/k1} / k1`, `B2 = -B1`.
    pub fn canonical(p: &SolitonParams) -> Self {
        let b1 = (std::f64::consts::PI * p.lambda() / p.k1()).exp() / p.k1();
        Self {
            a1: 1.0.into(),
            a2: 1.0.into(),
            b1: b1.into(),
            b2: (-b1).into(),
        }
    }

    /// `A1 B2 - A2 B1`.
    pub fn wronskian(&self) -> Complex64 {
        self.a1 * self.b2 - self.a2 * self.b1
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { a1: self.a1 * s, a2: self.a2 * s, b1: self.b1 * s, b2: self.b2 * s }
    }

    /// Exchange the two columns' constants `(A1, B1) ↔ (A2, B2)`.
    pub fn swapped(&self) -> Self {
        Self { a1: self.a2, a2: self.a1, b1: self.b2, b2: self.b1 }
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }
    pub fn a2(&self) -> Complex64 {
        self.a2
    }
    pub fn b1(&self) -> Complex64 {
        self.b1
    }
    pub fn b2(&self) -> Complex64 {
        self.b2
    }
}

/// Closed-form fundamental solution of the Lax system for the one-soliton.
///
/// Constants are taken as given; the caller may pass degenerate values
/// (e.g. `A1 = B1 = 0`) to isolate a single column.
pub fn phi_with(x: f64, t: f64, p: &SolitonParams, c: &RawConstants) -> CMat2 {
    let k1 = p.k1();
    let lambda = p.lambda();
    let z = soliton::xi(x, t, p);
    let tau = z.tanh();
    let s = soliton::sech(z);
    let pow_plus = Complex64::from_polar(
        (std::f64::consts::PI * lambda / (2.0 * k1)).exp(),
        lambda * z / k1,
    );
    let pow_minus = pow_plus.inv();
    let w = (k1 * k1 + 4.0 * lambda * lambda) * t / 8.0;
    let ep = Complex64::from_polar(1.0, w);
    let em = ep.conj();
    let (a1, a2) = (c.a1 * ep, c.a2 * ep);
    let (b1, b2) = (c.b1 * em, c.b2 * em);
    // (2λ + i k1 tanh ξ) and (k1 tanh ξ + 2iλ)
    let f_a = Complex64::new(2.0 * lambda, k1 * tau);
    let f_b = Complex64::new(k1 * tau, 2.0 * lambda);
    let top = |a: Complex64, b: Complex64| {
        -I / k1 * a * f_a * pow_plus + I * k1 * b * pow_minus * s
    };
    let bottom = |a: Complex64, b: Complex64| I * a * pow_plus * s + b * f_b * pow_minus;
    CMat2::new(top(a1, b1), top(a2, b2), bottom(a1, b1), bottom(a2, b2))
}

/// Unchecked constants; see [`phi_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawConstants {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

impl From<&PhiConstants> for RawConstants {
    fn from(c: &PhiConstants) -> Self {
        Self { a1: c.a1, a2: c.a2, b1: c.b1, b2: c.b2 }
    }
}

pub fn phi(x: f64, t: f64, p: &SolitonParams, c: &PhiConstants) -> CMat2 {
    phi_with(x, t, p, &c.into())
}

/// `det Φ = ((k1² + 4λ²)/k1) (A1 B2 - A2 B1)`.
pub fn phi_det_closed(p: &SolitonParams, c: &PhiConstants) -> Complex64 {
    let k1 = p.k1();
    c.wronskian() * ((k1 * k1 + 4.0 * p.lambda() * p.lambda()) / k1)
}

/// `U`, `V` and `Φ` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxPoint {
    pub u: CMat2,
    pub v: CMat2,
    pub phi: CMat2,
}

pub fn lax_point(x: f64, t: f64, p: &SolitonParams, c: &PhiConstants) -> LaxPoint {
    let j = soliton::jet(x, t, p);
    LaxPoint {
        u: lax_u(j.u, p.lambda()),
        v: lax_v(j.u, j.u_x, p.lambda(), p.alpha()),
        phi: phi(x, t, p, c),
    }
}

/// `(Φ_x - UΦ, Φ_t - VΦ)` with `Φ_x`, `Φ_t` from Richardson-extrapolated central differences.
pub fn lax_residuals(
    x: f64,
    t: f64,
    p: &SolitonParams,
    c: &PhiConstants,
    h: f64,
) -> Result<(CMat2, CMat2)> {
    if !(h >= 1e-12) {
        return Err(Error::StepUnderflow(h));
    }
    let f = |x: f64, t: f64| phi(x, t, p, c);
    let phi_x = fd::richardson(|s| fd::d1(|e| f(x + e, t), s, 2), h, 2);
    let phi_t = fd::richardson(|s| fd::d1(|e| f(x, t + e), s, 2), h, 2);
    let pt = lax_point(x, t, p, c);
    Ok((phi_x - pt.u * pt.phi, phi_t - pt.v * pt.phi))
}

/// Modulus of the residual of
/// `(Φ21)_xx - (u_x/u)(Φ21)_x + [(u(λ² + u²) - 2iλu_x) / 4u] Φ21 = 0`
/// for the closed-form Φ21, with x-derivatives by finite differences.
pub fn second_order_check(x: f64, t: f64, p: &SolitonParams, c: &PhiConstants) -> Result<f64> {
    second_order_check_with(x, t, p, &c.into())
}

pub fn second_order_check_with(
    x: f64,
    t: f64,
    p: &SolitonParams,
    c: &RawConstants,
) -> Result<f64> {
    let j = soliton::jet(x, t, p);
    if j.u.abs() < 1e-8 * p.k1().abs() {
        return Err(Error::VanishingWave(j.u.abs()));
    }
    let f = |e: f64| phi_with(x + e, t, p, c).m[1][0];
    let h = 1e-3;
    let d1 = fd::richardson(|s| fd::d1(f, s, 4), h, 4);
    let d2 = fd::richardson(|s| fd::d2(f, s, 4), h, 4);
    let lambda = p.lambda();
    let coeff = Complex64::new(
        j.u * (lambda * lambda + j.u * j.u),
        -2.0 * lambda * j.u_x,
    ) / (4.0 * j.u);
    Ok((d2 - d1 * (j.u_x / j.u) + coeff * f(0.0)).norm())
}
