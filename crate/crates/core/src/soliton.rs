//! The one-soliton traveling wave of the mKdV equation `u_t = u_xxx + (3/2) u² u_x`.
//!
//! `u = k1 sech ξ` with `ξ = k1 (k1² t + 4x) / 8`. The wave travels with
//! `u_t = α u_x`, `α = k1² / 4`, and satisfies `u_xx = α u - u³/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameter tuple shared by every surface family.
///
/// `alpha` is derived from `k1` and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SolitonParams {
    k1: f64,
    lambda: f64,
    mu: f64,
    nu: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    k1: f64,
    lambda: f64,
    mu: f64,
    nu: f64,
}

impl TryFrom<RawParams> for SolitonParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        SolitonParams::new(r.k1, r.lambda, r.mu, r.nu)
    }
}

impl From<SolitonParams> for RawParams {
    fn from(p: SolitonParams) -> Self {
        RawParams { k1: p.k1, lambda: p.lambda, mu: p.mu, nu: p.nu }
    }
}

impl SolitonParams {
    pub fn new(k1: f64, lambda: f64, mu: f64, nu: f64) -> Result<Self> {
        if k1 == 0.0 || !k1.is_finite() {
            return Err(Error::InvalidK1);
        }
        for (name, value) in [("lambda", lambda), ("mu", mu), ("nu", nu)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        Ok(Self { k1, lambda, mu, nu })
    }

    /// Pure spectral deformation (`ν = 0`).
    pub fn spectral(k1: f64, lambda: f64, mu: f64) -> Result<Self> {
        Self::new(k1, lambda, mu, 0.0)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `α = k1² / 4`.
    pub fn alpha(&self) -> f64 {
        0.25 * self.k1 * self.k1
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    pub fn with_nu(self, nu: f64) -> Self {
        Self { nu, ..self }
    }

    /// `∂ξ/∂x`.
    pub fn xi_x(&self) -> f64 {
        0.5 * self.k1
    }

    /// `∂ξ/∂t`.
    pub fn xi_t(&self) -> f64 {
        self.k1.powi(3) / 8.0
    }
}

/// Phase variable `ξ = k1 (k1² t + 4x) / 8`.
pub fn xi(x: f64, t: f64, p: &SolitonParams) -> f64 {
    p.k1 * (p.k1 * p.k1 * t + 4.0 * x) / 8.0
}

pub fn sech(z: f64) -> f64 {
    // 2 / (e^z + e^-z) without overflow for large |z|
    let a = z.abs();
    if a > 700.0 {
        return 0.0;
    }
    let e = (-a).exp();
    2.0 * e / (1.0 + e * e)
}

/// `1 / (e^{2ξ} + 1)`, evaluated without overflow.
pub fn logistic_neg(xi: f64) -> f64 {
    0.5 * (1.0 - xi.tanh())
}

/// `u = k1 sech ξ`.
pub fn u(x: f64, t: f64, p: &SolitonParams) -> f64 {
    p.k1 * sech(xi(x, t, p))
}

/// Value of the wave and the partial derivatives used by the Lax pair and
/// the deformation matrices.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolitonJet {
    pub u: f64,
    pub u_x: f64,
    pub u_xx: f64,
    pub u_xxx: f64,
    pub u_t: f64,
    pub u_xt: f64,
    pub u_xxt: f64,
}

impl SolitonJet {
    /// Jet of the constant field `u ≡ c`.
    pub fn constant(c: f64) -> Self {
        Self { u: c, ..Default::default() }
    }

    /// Same derivatives, value shifted by `c` (i.e. the jet of `u + c`).
    pub fn shifted(self, c: f64) -> Self {
        Self { u: self.u + c, ..self }
    }
}

/// Closed-form jet of the one-soliton at `(x, t)` via the chain rule in ξ.
pub fn jet(x: f64, t: f64, p: &SolitonParams) -> SolitonJet {
    let z = xi(x, t, p);
    let s = sech(z);
    let tau = z.tanh();
    let k1 = p.k1;
    let s2 = s * s;
    // d^n/dξ^n of k1 sech ξ
    let d0 = k1 * s;
    let d1 = -k1 * s * tau;
    let d2 = k1 * (s - 2.0 * s * s2);
    let d3 = k1 * s * tau * (6.0 * s2 - 1.0);
    let cx = p.xi_x();
    let ct = p.xi_t();
    SolitonJet {
        u: d0,
        u_x: cx * d1,
        u_xx: cx * cx * d2,
        u_xxx: cx * cx * cx * d3,
        u_t: ct * d1,
        u_xt: cx * ct * d2,
        u_xxt: cx * cx * ct * d3,
    }
}

/// `u_t - u_xxx - (3/2) u² u_x` for an arbitrary jet.
pub fn mkdv_residual_of(j: &SolitonJet) -> f64 {
    j.u_t - j.u_xxx - 1.5 * j.u * j.u * j.u_x
}

/// `u_xx - α u + u³/2` for an arbitrary jet.
pub fn traveling_residual_of(j: &SolitonJet, alpha: f64) -> f64 {
    j.u_xx - alpha * j.u + 0.5 * j.u.powi(3)
}

/// `u_x² - α u² + u⁴/4` for an arbitrary jet.
pub fn willmore_condition_residual_of(j: &SolitonJet, alpha: f64) -> f64 {
    j.u_x * j.u_x - alpha * j.u * j.u + 0.25 * j.u.powi(4)
}

pub fn mkdv_residual(x: f64, t: f64, p: &SolitonParams) -> f64 {
    mkdv_residual_of(&jet(x, t, p))
}

pub fn traveling_residual(x: f64, t: f64, p: &SolitonParams) -> f64 {
    traveling_residual_of(&jet(x, t, p), p.alpha())
}

pub fn willmore_condition_residual(x: f64, t: f64, p: &SolitonParams) -> f64 {
    willmore_condition_residual_of(&jet(x, t, p), p.alpha())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn params(k1: f64) -> SolitonParams {
        SolitonParams::spectral(k1, 1.0, -8.0).unwrap()
    }

    #[test]
    fn construction_rejects_zero_k1() {
        assert_eq!(SolitonParams::new(0.0, 1.0, 1.0, 0.0), Err(Error::InvalidK1));
        assert!(SolitonParams::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
        assert!(SolitonParams::new(1.0, f64::INFINITY, 1.0, 0.0).is_err());
        assert_eq!(params(3.0).alpha(), 2.25);
    }

    #[test]
    fn phase_variable() {
        assert_eq!(xi(0.0, 0.0, &params(2.0)), 0.0);
        let p = params(2.0);
        for &(x, t) in &[(0.3, -1.2), (2.0, 5.0)] {
            assert!((xi(x, t, &p) - (x + t)).abs() < 1e-15);
        }
        let p = params(3.0);
        let (x, t) = (0.7, -0.4);
        assert!((xi(x, t, &p) - (12.0 * x + 27.0 * t) / 8.0).abs() < 1e-14);
    }

    #[test]
    fn soliton_values() {
        let p = params(2.0);
        assert_eq!(u(0.0, 0.0, &p), 2.0);
        assert_eq!(jet(0.0, 0.0, &p).u_x, 0.0);
        // |ξ| = 30 at fixed t
        let x = 30.0 / p.xi_x();
        assert!(u(x, 0.0, &p).abs() < 1e-12);
        assert!(u(-x, 0.0, &p).abs() < 1e-12);
        assert_eq!(sech(1e4), 0.0);
    }

    #[test]
    fn residuals_vanish_on_soliton() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        assert!(mkdv_residual(0.0, 0.0, &params(2.0)).abs() < 1e-12);
        assert!(traveling_residual(0.0, 0.0, &params(2.0)).abs() < 1e-12);
        assert_eq!(willmore_condition_residual(0.0, 0.0, &params(2.0)), 0.0);
        for k1 in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let p = params(k1);
            for _ in 0..100 {
                let x = rng.gen_range(-3.0..3.0);
                let t = rng.gen_range(-3.0..3.0);
                assert!(mkdv_residual(x, t, &p).abs() < 1e-10);
                assert!(traveling_residual(x, t, &p).abs() < 1e-10);
                assert!(willmore_condition_residual(x, t, &p).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_field_residuals() {
        let z = SolitonJet::constant(0.0);
        assert_eq!(mkdv_residual_of(&z), 0.0);
        assert_eq!(traveling_residual_of(&z, 1.0), 0.0);
        assert_eq!(willmore_condition_residual_of(&z, 1.0), 0.0);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let h = 1e-5;
        for k1 in [0.5, 1.3, 2.0, 3.5] {
            let p = params(k1);
            for _ in 0..50 {
                let x = rng.gen_range(-2.0..2.0);
                let t = rng.gen_range(-0.5..0.5);
                if xi(x, t, &p).abs() >= 5.0 {
                    continue;
                }
                let j = jet(x, t, &p);
                let fx = |f: &dyn Fn(f64, f64) -> f64| (f(x + h, t) - f(x - h, t)) / (2.0 * h);
                let ft = |f: &dyn Fn(f64, f64) -> f64| (f(x, t + h) - f(x, t - h)) / (2.0 * h);
                let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / scale;
                let scale = k1.abs().powi(4).max(1.0);
                assert!(rel(fx(&|x, t| jet(x, t, &p).u), j.u_x, scale) < 1e-8);
                assert!(rel(fx(&|x, t| jet(x, t, &p).u_x), j.u_xx, scale) < 1e-8);
                assert!(rel(fx(&|x, t| jet(x, t, &p).u_xx), j.u_xxx, scale) < 1e-8);
                assert!(rel(ft(&|x, t| jet(x, t, &p).u), j.u_t, scale * k1 * k1) < 1e-8);
                assert!(rel(ft(&|x, t| jet(x, t, &p).u_x), j.u_xt, scale * k1 * k1) < 1e-8);
                assert!(rel(ft(&|x, t| jet(x, t, &p).u_xx), j.u_xxt, scale * k1 * k1) < 1e-8);
            }
        }
    }

    #[test]
    fn parity_in_xi() {
        let p = params(1.7);
        for &x in &[0.1, 0.9, 2.5] {
            let a = jet(x, 0.0, &p);
            let b = jet(-x, 0.0, &p);
            assert!((a.u - b.u).abs() < 1e-15);
            assert!((a.u_x + b.u_x).abs() < 1e-15);
        }
    }

    #[test]
    fn traveling_ansatz() {
        let p = params(2.6);
        let j = jet(0.4, -0.3, &p);
        assert!((j.u_t - p.alpha() * j.u_x).abs() < 1e-13);
    }

    #[test]
    fn serde_roundtrip_validates() {
        let p = SolitonParams::new(2.0, 1.0, -4.0, 1.0).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: SolitonParams = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
        assert!(serde_json::from_str::<SolitonParams>(
            r#"{"k1":0.0,"lambda":1.0,"mu":1.0,"nu":0.0}"#
        )
        .is_err());
    }
}
