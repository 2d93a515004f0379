//! Explicit position vectors of the spectral (three-parameter) and spectral-gauge
//! (four-parameter) surface families, their closed-form geometry and the figure presets.
//!
//! [`Convention::Connection`] is the default. It is the parametrization whose tangent
//! vectors equal `Φ⁻¹AΦ`, `Φ⁻¹BΦ` under the canonical Φ. Compared with the printed
//! formulas, it mirrors `y2`, and in the four-parameter family it uses
//! `R4 = 4μk1/D`, `R7 = 4λk1ν/D` with `D = k1² + 4λ²`.
//! [`Convention::PaperLiteral`] keeps the printed expressions verbatim.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::deformation::{
    self, curvatures_spectral_gauge_closed, forms_spectral_gauge_closed, CurvaturePair,
    DeformationKind, Forms,
};
use crate::error::{Error, Result};
use crate::fd;
use crate::grid::Grid;
use crate::lax::{self, PhiConstants};
use crate::soliton::{self, SolitonParams};
use crate::su2::{su2_to_vec, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Convention {
    #[default]
    Connection,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Spectral deformation, parameters `(k1, λ, μ)`.
    Spectral3,
    /// Spectral plus gauge deformation, parameters `(k1, λ, μ, ν)`.
    SpectralGauge4,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Spectral3 => "spectral3",
            Family::SpectralGauge4 => "spectralgauge4",
        }
    }

    pub fn deformation(self) -> DeformationKind {
        match self {
            Family::Spectral3 => DeformationKind::Spectral,
            Family::SpectralGauge4 => DeformationKind::SpectralGauge,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spectral3" => Ok(Family::Spectral3),
            "spectralgauge4" => Ok(Family::SpectralGauge4),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// `G = t(λ² + ¼k1²(1 + λ)) + xλ`.
pub fn phase_g(x: f64, t: f64, p: &SolitonParams) -> f64 {
    let (k1, l) = (p.k1(), p.lambda());
    t * (l * l + 0.25 * k1 * k1 * (1.0 + l)) + x * l
}

/// `Ẽ = t(8λ + k1²) + 4x`.
pub fn e_tilde(x: f64, t: f64, p: &SolitonParams) -> f64 {
    t * (8.0 * p.lambda() + p.k1() * p.k1()) + 4.0 * x
}

fn d_of(p: &SolitonParams) -> f64 {
    p.k1() * p.k1() + 4.0 * p.lambda() * p.lambda()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeParamAux {
    pub r1: f64,
    pub g: f64,
    pub e: f64,
    pub xi: f64,
}

impl ThreeParamAux {
    pub fn new(x: f64, t: f64, p: &SolitonParams) -> Self {
        let d = d_of(p);
        Self {
            r1: -p.mu() * p.k1() / (2.0 * d),
            g: phase_g(x, t, p),
            e: e_tilde(x, t, p) * d,
            xi: soliton::xi(x, t, p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourParamAux {
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub r5: f64,
    pub r6: f64,
    pub r7: f64,
    pub g: f64,
    pub e_tilde: f64,
    pub xi: f64,
}

impl FourParamAux {
    pub fn new(x: f64, t: f64, p: &SolitonParams, conv: Convention) -> Self {
        let (k1, l, mu, nu) = (p.k1(), p.lambda(), p.mu(), p.nu());
        let d = d_of(p);
        let (r4, r7) = match conv {
            Convention::Connection => (4.0 * mu * k1 / d, 4.0 * l * k1 * nu / d),
            Convention::PaperLiteral => (4.0 * mu * k1 * k1 / d, 4.0 * l * k1 * k1 * nu / d),
        };
        Self {
            r2: 2.0 * k1 * k1 * nu / d,
            r3: mu / 8.0,
            r4,
            r5: nu * (k1 * k1 - 4.0 * l * l) / d,
            r6: nu * (4.0 * l * l + 3.0 * k1 * k1) / (2.0 * d),
            r7,
            g: phase_g(x, t, p),
            e_tilde: e_tilde(x, t, p),
            xi: soliton::xi(x, t, p),
        }
    }
}

fn y2_sign(conv: Convention) -> f64 {
    match conv {
        Convention::Connection => 1.0,
        Convention::PaperLiteral => -1.0,
    }
}

/// `y1 = -R1 (E(e^{2ξ}+1) + 32k1) / (4k1(e^{2ξ}+1))`, `y2 = ∓4R1 cos G sech ξ`,
/// `y3 = 4R1 sin G sech ξ`; `-` in `y2` for the paper-literal convention.
pub fn three_param_position(x: f64, t: f64, p: &SolitonParams, conv: Convention) -> Vec3 {
    let a = ThreeParamAux::new(x, t, p);
    let s = soliton::sech(a.xi);
    // 1/(e^{2ξ} + 1) in overflow-free form
    let l = soliton::logistic_neg(a.xi);
    let y1 = -a.r1 * a.e / (4.0 * p.k1()) - 8.0 * a.r1 * l;
    let r = 4.0 * a.r1 * s;
    Vec3::new(y1, y2_sign(conv) * r * a.g.cos(), r * a.g.sin())
}

/// Four-parameter position vector.
pub fn four_param_position(x: f64, t: f64, p: &SolitonParams, conv: Convention) -> Vec3 {
    let a = FourParamAux::new(x, t, p, conv);
    let s = soliton::sech(a.xi);
    let th = a.xi.tanh();
    let l = soliton::logistic_neg(a.xi);
    // (e^{4ξ}+1)/(e^{2ξ}+1)² = 1 - sech²ξ/2
    let q = a.r5 * (1.0 - 0.5 * s * s);
    let y1 = a.r2 * th * s + a.r3 * a.e_tilde + a.r4 * l;
    let radial = 0.5 * a.r4 * s + q - a.r6 * s * s;
    let (sg, cg) = a.g.sin_cos();
    let y2 = radial * cg + a.r7 * th * sg;
    let y3 = -radial * sg + a.r7 * th * cg;
    Vec3::new(y1, -y2_sign(conv) * y2, y3)
}

pub fn position(family: Family, x: f64, t: f64, p: &SolitonParams, conv: Convention) -> Vec3 {
    match family {
        Family::Spectral3 => three_param_position(x, t, p, conv),
        Family::SpectralGauge4 => four_param_position(x, t, p, conv),
    }
}

/// Limit of `(y2, y3)` as `ξ → sign(ξ)·∞` along the current phase `G`.
pub fn asymptotic_profile(
    family: Family,
    x: f64,
    t: f64,
    p: &SolitonParams,
    conv: Convention,
) -> (f64, f64) {
    match family {
        Family::Spectral3 => (0.0, 0.0),
        Family::SpectralGauge4 => {
            let a = FourParamAux::new(x, t, p, conv);
            let sigma = if a.xi >= 0.0 { 1.0 } else { -1.0 };
            let (sg, cg) = a.g.sin_cos();
            // printed: y2 → R5 cos G ± R7 sin G, y3 → -R5 sin G ± R7 cos G
            let y2 = a.r5 * cg + sigma * a.r7 * sg;
            let y3 = -a.r5 * sg + sigma * a.r7 * cg;
            (-y2_sign(conv) * y2, y3)
        }
    }
}

/// Closed-form fundamental forms of the three-parameter surface in ξ.
pub fn three_param_forms_closed(x: f64, t: f64, p: &SolitonParams) -> Forms {
    let (k1, l, mu) = (p.k1(), p.lambda(), p.mu());
    let s = soliton::sech(soliton::xi(x, t, p));
    let m = 0.25 * mu * mu;
    let c1 = 0.25 * k1 * k1 + 2.0 * l;
    let c2 = 0.25 * k1 * k1 + l;
    let w = 0.5 * mu * k1 * s;
    Forms {
        g11: m,
        g12: m * c1,
        g22: m * (c1 * c1 + k1 * k1 * s * s),
        h11: w,
        h12: w * c2,
        h22: w * c2 * c2 + 0.125 * mu * k1.powi(3) * s * (2.0 * s * s - 1.0),
    }
}

/// `K = (k1²/μ²)(2 sech²ξ - 1)`, `H = (6k1² sech²ξ + 4λ² - k1²) / (4μk1 sech ξ)`.
pub fn three_param_curvatures_closed(x: f64, t: f64, p: &SolitonParams) -> Result<CurvaturePair> {
    let (k1, l, mu) = (p.k1(), p.lambda(), p.mu());
    let s = soliton::sech(soliton::xi(x, t, p));
    if mu == 0.0 {
        return Err(Error::VanishingDenominator("mu"));
    }
    if s == 0.0 {
        return Err(Error::VanishingDenominator("sech xi"));
    }
    Ok(CurvaturePair {
        k: k1 * k1 / (mu * mu) * (2.0 * s * s - 1.0),
        h: (6.0 * k1 * k1 * s * s + 4.0 * l * l - k1 * k1) / (4.0 * mu * k1 * s),
    })
}

pub fn four_param_forms_closed(x: f64, t: f64, p: &SolitonParams) -> Forms {
    forms_spectral_gauge_closed(soliton::u(x, t, p), p)
}

pub fn four_param_curvatures_closed(x: f64, t: f64, p: &SolitonParams) -> Result<CurvaturePair> {
    curvatures_spectral_gauge_closed(soliton::u(x, t, p), p)
}

pub fn curvatures_closed(family: Family, x: f64, t: f64, p: &SolitonParams) -> Result<CurvaturePair> {
    match family {
        Family::Spectral3 => three_param_curvatures_closed(x, t, p),
        Family::SpectralGauge4 => four_param_curvatures_closed(x, t, p),
    }
}

pub fn forms_closed(family: Family, x: f64, t: f64, p: &SolitonParams) -> Forms {
    match family {
        Family::Spectral3 => three_param_forms_closed(x, t, p),
        Family::SpectralGauge4 => four_param_forms_closed(x, t, p),
    }
}

/// `(y_x - Φ⁻¹AΦ, y_t - Φ⁻¹BΦ)` as vectors, with `y_x`, `y_t` by Richardson central differences.
pub fn position_consistency_residual(
    family: Family,
    x: f64,
    t: f64,
    p: &SolitonParams,
    conv: Convention,
) -> Result<(Vec3, Vec3)> {
    position_consistency_residual_with(|x, t| position(family, x, t, p, conv), family, x, t, p)
}

/// As [`position_consistency_residual`] for an arbitrary position map.
pub fn position_consistency_residual_with(
    y: impl Fn(f64, f64) -> Vec3,
    family: Family,
    x: f64,
    t: f64,
    p: &SolitonParams,
) -> Result<(Vec3, Vec3)> {
    let c = PhiConstants::canonical(p);
    let phi = lax::phi(x, t, p, &c);
    let phi_inv = phi.inverse().ok_or(Error::SingularPhi { x, t })?;
    let fr = deformation::frame(x, t, p, family.deformation())?;
    let tx = su2_to_vec(&(phi_inv * fr.a * phi))?;
    let tt = su2_to_vec(&(phi_inv * fr.b * phi))?;
    let h = 1e-4;
    let y_x = fd::richardson(|s| fd::d1(|e| y(x + e, t), s, 4), h, 4);
    let y_t = fd::richardson(|s| fd::d1(|e| y(x, t + e), s, 4), h, 4);
    Ok((y_x - tx, y_t - tt))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeingartenResiduals {
    /// `8μ²H²(μ²K + k1²) - 9μ⁴K² - 12μ²cK - 4c²`, `c = k1² + 2λ²`.
    pub cubic: f64,
    /// Largest monomial magnitude of the corrected cubic.
    pub cubic_scale: f64,
    /// Printed cubic with final term `c²`.
    pub paper_cubic: f64,
    pub paper_cubic_scale: f64,
    /// `8μ²H² - 9μ²K - 36λ²` when `k1 = 2λ`.
    pub quadratic: Option<f64>,
    pub quadratic_scale: Option<f64>,
}

impl WeingartenResiduals {
    pub fn cubic_rel(&self) -> f64 {
        rel_to(self.cubic, self.cubic_scale)
    }

    pub fn paper_cubic_rel(&self) -> f64 {
        rel_to(self.paper_cubic, self.paper_cubic_scale)
    }

    pub fn quadratic_rel(&self) -> Option<f64> {
        Some(rel_to(self.quadratic?, self.quadratic_scale?))
    }
}

fn rel_to(v: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        v.abs()
    } else {
        v.abs() / scale
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

pub fn weingarten_residuals(k: f64, h: f64, p: &SolitonParams) -> WeingartenResiduals {
    let (k1, l, mu) = (p.k1(), p.lambda(), p.mu());
    let mu2 = mu * mu;
    let c = k1 * k1 + 2.0 * l * l;
    let h2 = h * h;
    let shared = [
        8.0 * mu2 * mu2 * h2 * k,
        8.0 * mu2 * h2 * k1 * k1,
        -9.0 * mu2 * mu2 * k * k,
        -12.0 * mu2 * c * k,
    ];
    let s: f64 = shared.iter().sum();
    let corrected_last = -4.0 * c * c;
    let paper_last = -c * c;
    let quadratic_on = (k1 - 2.0 * l).abs() <= 1e-12 * k1.abs();
    let quad = [8.0 * mu2 * h2, -9.0 * mu2 * k, -36.0 * l * l];
    WeingartenResiduals {
        cubic: s + corrected_last,
        cubic_scale: max_abs(&shared).max(corrected_last.abs()),
        paper_cubic: s + paper_last,
        paper_cubic_scale: max_abs(&shared).max(paper_last.abs()),
        quadratic: quadratic_on.then(|| quad.iter().sum()),
        quadratic_scale: quadratic_on.then(|| max_abs(&quad)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PresetId {
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6,
    Ex7,
    Ex8,
}

impl PresetId {
    pub const ALL: [PresetId; 7] = [
        PresetId::Ex2,
        PresetId::Ex3,
        PresetId::Ex4,
        PresetId::Ex5,
        PresetId::Ex6,
        PresetId::Ex7,
        PresetId::Ex8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::Ex2 => "ex2",
            PresetId::Ex3 => "ex3",
            PresetId::Ex4 => "ex4",
            PresetId::Ex5 => "ex5",
            PresetId::Ex6 => "ex6",
            PresetId::Ex7 => "ex7",
            PresetId::Ex8 => "ex8",
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// A figure configuration: family, parameters in their printed rational form and window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub id: PresetId,
    pub family: Family,
    pub params: SolitonParams,
    /// `(k1, λ, μ, ν)` as printed.
    pub labels: [&'static str; 4],
    /// Half-width of the square window `[-w, w]²`.
    pub half_width: f64,
}

impl Preset {
    pub fn window(&self) -> ((f64, f64), (f64, f64)) {
        let w = self.half_width;
        ((-w, w), (-w, w))
    }

    pub fn grid(&self, nx: usize, nt: usize) -> Result<Grid> {
        let (x, t) = self.window();
        Grid::new(x, t, nx, nt)
    }
}

pub fn preset(id: PresetId) -> Preset {
    use Family::*;
    let (family, k1, l, mu, nu, labels, w) = match id {
        PresetId::Ex2 => (Spectral3, 2.0, 1.0, -8.0, 0.0, ["2", "1", "-8", "-"], 3.0),
        PresetId::Ex3 => (Spectral3, 2.0, 0.0, -4.0, 0.0, ["2", "0", "-4", "-"], 6.0),
        PresetId::Ex4 => (
            Spectral3,
            3.0,
            1.0 / 10.0,
            -452.0 / 75.0,
            0.0,
            ["3", "1/10", "-452/75", "-"],
            6.0,
        ),
        PresetId::Ex5 => (
            Spectral3,
            1.0,
            -1.0 / 10.0,
            -52.0 / 25.0,
            0.0,
            ["1", "-1/10", "-52/25", "-"],
            20.0,
        ),
        PresetId::Ex6 => (SpectralGauge4, 2.0, 0.0, -4.0, 1.0, ["2", "0", "-4", "1"], 4.0),
        PresetId::Ex7 => (SpectralGauge4, 2.0, 1.0, 1.0 / 10.0, 1.0, ["2", "1", "1/10", "1"], 6.0),
        PresetId::Ex8 => (
            SpectralGauge4,
            1.0,
            -1.0 / 10.0,
            -52.0 / 25.0,
            -1.0,
            ["1", "-1/10", "-52/25", "-1"],
            20.0,
        ),
    };
    Preset {
        id,
        family,
        params: SolitonParams::new(k1, l, mu, nu).expect("preset parameters are valid"),
        labels,
        half_width: w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn preset_values() {
        assert_eq!(PresetId::ALL.len(), 7);
        let ex4 = preset(PresetId::Ex4);
        let r1 = ThreeParamAux::new(0.0, 0.0, &ex4.params).r1;
        assert!((r1 - 1.0).abs() < 1e-14);
        let ex5 = preset(PresetId::Ex5);
        assert_eq!(ex5.window(), ((-20.0, 20.0), (-20.0, 20.0)));
        let ex8 = preset(PresetId::Ex8);
        assert_eq!(ex8.params.k1(), ex5.params.k1());
        assert_eq!(ex8.params.lambda(), ex5.params.lambda());
        assert_eq!(ex8.params.mu(), ex5.params.mu());
        assert_eq!(ex8.params.nu(), -1.0);
        assert_eq!(preset(PresetId::Ex7).labels[2], "1/10");
        assert_eq!("EX6".parse::<PresetId>().unwrap(), PresetId::Ex6);
        assert!(matches!("ex9".parse::<PresetId>(), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn three_param_example_two() {
        // k1 = 2, λ = 1, μ = -8: R1 = 1, G = x + 3t, ξ = x + t, E/(4k1)·R1 = 4(x + 3t)
        let p = preset(PresetId::Ex2).params;
        for &(x, t) in &[(0.3, -0.2), (1.1, 0.4), (-2.0, 1.7)] {
            let a = ThreeParamAux::new(x, t, &p);
            assert!((a.r1 - 1.0).abs() < 1e-15);
            assert!((a.g - (x + 3.0 * t)).abs() < 1e-14);
            assert!((a.xi - (x + t)).abs() < 1e-14);
            let y = three_param_position(x, t, &p, Convention::PaperLiteral);
            let z = x + t;
            let y1 = -4.0 * (x + 3.0 * t) - 8.0 / ((2.0 * z).exp() + 1.0);
            assert!((y.y1 - y1).abs() < 1e-12);
            let s = 1.0 / z.cosh();
            assert!((y.y2 + 4.0 * (x + 3.0 * t).cos() * s).abs() < 1e-14);
            assert!((y.y3 - 4.0 * (x + 3.0 * t).sin() * s).abs() < 1e-14);
            // the printed reduced form (−4cos, −4sin) is the π-rotation of the connection surface
            let c = three_param_position(x, t, &p, Convention::Connection);
            assert!((c.y2 - 4.0 * (x + 3.0 * t).cos() * s).abs() < 1e-14);
            assert_eq!(c.y3, y.y3);
        }
    }

    #[test]
    fn three_param_origin_and_tails() {
        let p = SolitonParams::spectral(1.3, 0.7, 2.1).unwrap();
        let r1 = ThreeParamAux::new(0.0, 0.0, &p).r1;
        let y = three_param_position(0.0, 0.0, &p, Convention::PaperLiteral);
        assert!((y.y2 + 4.0 * r1).abs() < 1e-15 && y.y3 == 0.0);
        for z in [-30.0, 30.0] {
            // ξ = k1 x / 2 at t = 0
            let x = 2.0 * z / p.k1();
            for conv in [Convention::Connection, Convention::PaperLiteral] {
                let y = three_param_position(x, 0.0, &p, conv);
                assert!(y.y2.hypot(y.y3) < 1e-12);
                assert!(y.is_finite());
            }
        }
        assert!(three_param_position(1e4, 0.0, &p, Convention::Connection).is_finite());
    }

    #[test]
    fn four_param_examples() {
        // ex6: R7 = 0, G = t, ½R4 = -4, R5 = 1, R6 = 3/2
        let p = preset(PresetId::Ex6).params;
        let a = FourParamAux::new(0.4, -0.3, &p, Convention::Connection);
        assert_eq!(a.r7, 0.0);
        assert!((a.g + 0.3).abs() < 1e-15);
        assert!((0.5 * a.r4 + 4.0).abs() < 1e-15);
        assert!((a.r5 - 1.0).abs() < 1e-15 && (a.r6 - 1.5).abs() < 1e-15);
        let (x, t): (f64, f64) = (0.4, -0.3);
        let z = x + t;
        let (s, e) = (1.0 / z.cosh(), (2.0 * z).exp());
        let radial = -4.0 * s + (e * e + 1.0) / ((e + 1.0) * (e + 1.0)) - 1.5 * s * s;
        let y = four_param_position(x, t, &p, Convention::Connection);
        // printed y2 = radial cos G, y3 = -radial sin G; connection mirrors y2
        assert!((y.y2 + radial * t.cos()).abs() < 1e-14);
        assert!((y.y3 + radial * t.sin()).abs() < 1e-14);
        assert!((y.y1 - (2.0 * s * z.tanh() - 2.0 * z - 8.0 / (e + 1.0))).abs() < 1e-13);
        // ex7: ½R4 = 1/20, R6 = 1, R7 = 1, R5 = 0
        let q = preset(PresetId::Ex7).params;
        let b = FourParamAux::new(0.0, 0.0, &q, Convention::Connection);
        assert!((0.5 * b.r4 - 0.05).abs() < 1e-15);
        assert!((b.r6 - 1.0).abs() < 1e-15 && (b.r7 - 1.0).abs() < 1e-15 && b.r5 == 0.0);
        // the printed general R4, R7 disagree with both examples
        let lit = FourParamAux::new(0.0, 0.0, &q, Convention::PaperLiteral);
        assert!((lit.r7 - 2.0).abs() < 1e-15);
        // ex8: ½R4 = -4, R5 = 12/13·(-1)·…, R7 = 5/13 in magnitude
        let r = preset(PresetId::Ex8).params;
        let c = FourParamAux::new(0.0, 0.0, &r, Convention::Connection);
        assert!((0.5 * c.r4 + 4.0).abs() < 1e-14);
        assert!((c.r5 + 12.0 / 13.0).abs() < 1e-14);
        assert!((c.r6 + 19.0 / 13.0).abs() < 1e-14);
        assert!((c.r7.abs() - 5.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn four_param_reduces_to_three_param() {
        let p = SolitonParams::new(1.3, 0.7, 2.1, 0.0).unwrap();
        let a = FourParamAux::new(0.2, 0.1, &p, Convention::Connection);
        assert_eq!((a.r2, a.r5, a.r6, a.r7), (0.0, 0.0, 0.0, 0.0));
        for &(x, t) in &[(0.2, 0.1), (-1.4, 0.9), (2.5, -3.0)] {
            let y4 = four_param_position(x, t, &p, Convention::Connection);
            let y3 = three_param_position(x, t, &p, Convention::Connection);
            assert!((y4 - y3).max_abs() < 1e-12 * (1.0 + y3.max_abs()));
            let f4 = four_param_forms_closed(x, t, &p);
            let f3 = three_param_forms_closed(x, t, &p);
            assert!(f4.max_abs_diff(&f3) < 1e-12);
        }
    }

    #[test]
    fn four_param_asymptotics() {
        for id in [PresetId::Ex6, PresetId::Ex7, PresetId::Ex8] {
            let p = preset(id).params;
            for conv in [Convention::Connection, Convention::PaperLiteral] {
                for z in [-30.0, 30.0] {
                    let x = 2.0 * z / p.k1();
                    let y = four_param_position(x, 0.0, &p, conv);
                    let (a2, a3) = asymptotic_profile(Family::SpectralGauge4, x, 0.0, &p, conv);
                    assert!((y.y2 - a2).abs() < 1e-10 && (y.y3 - a3).abs() < 1e-10);
                }
            }
        }
        // ex6 reduced form: y2 → cos t, y3 → -sin t
        let p = preset(PresetId::Ex6).params;
        let t = 0.7;
        let (a2, a3) = asymptotic_profile(Family::SpectralGauge4, 40.0, t, &p, Convention::PaperLiteral);
        assert!((a2 - t.cos()).abs() < 1e-15 && (a3 + t.sin()).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_agree_with_deformation() {
        for id in PresetId::ALL {
            let pr = preset(id);
            let p = pr.params;
            for &(x, t) in &[(0.1, 0.2), (-0.8, 0.5), (1.3, -1.1)] {
                let u = soliton::u(x, t, &p);
                let f = forms_closed(pr.family, x, t, &p);
                let g = forms_spectral_gauge_closed(u, &p);
                assert!(f.max_abs_diff(&g) < 1e-12 * (1.0 + g.g22.abs()));
                let c = curvatures_closed(pr.family, x, t, &p).unwrap();
                let d = curvatures_spectral_gauge_closed(u, &p).unwrap();
                assert!(rel(c.k, d.k) < 1e-12 && rel(c.h, d.h) < 1e-12);
            }
        }
    }

    #[test]
    fn three_param_curvature_cases() {
        let p = SolitonParams::spectral(2.0, 1.0, -8.0).unwrap();
        assert!((three_param_curvatures_closed(0.0, 0.0, &p).unwrap().k - 1.0 / 16.0).abs() < 1e-16);
        let far = three_param_curvatures_closed(40.0, 0.0, &p).unwrap();
        assert!((far.k + 4.0 / 64.0).abs() < 1e-15);
        // λ = k1/2: H = 3k1 sech ξ / (2μ)
        let c = three_param_curvatures_closed(0.7, 0.1, &p).unwrap();
        let s = soliton::sech(soliton::xi(0.7, 0.1, &p));
        assert!(rel(c.h, 3.0 * 2.0 * s / (2.0 * -8.0)) < 1e-14);
    }

    #[test]
    fn weingarten_cases() {
        let p = SolitonParams::spectral(2.0, 1.0, 1.0).unwrap();
        let c = three_param_curvatures_closed(0.0, 0.0, &p).unwrap();
        assert_eq!((c.k, c.h), (4.0, 3.0));
        let w = weingarten_residuals(c.k, c.h, &p);
        assert!((w.paper_cubic - 108.0).abs() < 1e-9);
        assert!(w.cubic.abs() < 1e-9);
        assert!(w.quadratic.unwrap().abs() < 1e-9);
        let q = SolitonParams::spectral(2.0, 0.3, 1.0).unwrap();
        assert!(weingarten_residuals(1.0, 1.0, &q).quadratic.is_none());
    }

    #[test]
    fn consistency_three_and_four() {
        for id in PresetId::ALL {
            let pr = preset(id);
            for &(x, t) in &[(0.3, -0.7), (-1.5, 1.2), (1.9, 1.9)] {
                let (rx, rt) =
                    position_consistency_residual(pr.family, x, t, &pr.params, Convention::Connection)
                        .unwrap();
                assert!(rx.max_abs() < 1e-6 && rt.max_abs() < 1e-6, "{id} {rx:?} {rt:?}");
            }
        }
        let pr = preset(PresetId::Ex2);
        let (rx, _) =
            position_consistency_residual(pr.family, 0.3, -0.7, &pr.params, Convention::PaperLiteral)
                .unwrap();
        assert!(rx.max_abs() > 1e-2);
        // translation invariance
        let shift = Vec3::new(3.0, -1.0, 2.5);
        let f = |x, t| three_param_position(x, t, &pr.params, Convention::Connection) + shift;
        let (sx, st) =
            position_consistency_residual_with(f, Family::Spectral3, 0.3, -0.7, &pr.params).unwrap();
        let (bx, bt) =
            position_consistency_residual(Family::Spectral3, 0.3, -0.7, &pr.params, Convention::Connection)
                .unwrap();
        assert!((sx - bx).max_abs() < 1e-9 && (st - bt).max_abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn corrected_cubic_holds(
            k1 in 0.2f64..4.0, l in -2.0f64..2.0, mu in 0.3f64..9.0, neg in any::<bool>(),
            z in -6.0f64..6.0,
        ) {
            let mu = if neg { -mu } else { mu };
            let p = SolitonParams::spectral(k1, l, mu).unwrap();
            let x = 2.0 * z / k1;
            let c = three_param_curvatures_closed(x, 0.0, &p).unwrap();
            let w = weingarten_residuals(c.k, c.h, &p);
            prop_assert!(w.cubic_rel() < 1e-9, "{}", w.cubic_rel());
        }
    }
}
