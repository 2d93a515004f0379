//! Deformation matrices `(A, B)` of the Lax pair and the surface geometry they induce.
//!
//! For `A`, `B` satisfying `A_t - B_x + [A, V] + [U, B] = 0` the fundamental forms are
//! `g = (<A,A>, <A,B>, <B,B>)` and
//! `h = (<A_x + [A,U], C>, <A_t + [A,V], C>, <B_t + [B,V], C>)` with `C = [A,B] / ‖[A,B]‖`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lax::{lax_u, lax_v};
use crate::soliton::{self, SolitonJet, SolitonParams};
use crate::su2::{commutator, su2_inner, su2_norm, CMat2};

/// Relative threshold of the singular-point policy on `‖[A,B]‖`.
pub const SINGULAR_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryGenerator {
    /// Translation symmetry `φ = u_x`.
    Ux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeformationKind {
    /// `A = μ U_λ`, `B = μ V_λ`.
    Spectral,
    /// Spectral plus the gauge generated by the constant matrix `ν iσ2`.
    SpectralGauge,
    /// `A = μ δ_φ U`, `B = μ δ_φ V`.
    Symmetry(SymmetryGenerator),
}

/// Sign of the unit normal used in the second fundamental form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Orientation {
    /// `C = [A,B] / ‖[A,B]‖`.
    #[default]
    Commutator,
    /// `C = [B,A] / ‖[A,B]‖`.
    Reversed,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Commutator => 1.0,
            Orientation::Reversed => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Forms {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePair {
    pub k: f64,
    pub h: f64,
}

impl Forms {
    pub fn det_g(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn det_h(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    pub fn trace_h(&self) -> f64 {
        self.h11 + self.h22
    }

    /// The same surface with the opposite normal.
    pub fn flipped(&self) -> Self {
        Self { h11: -self.h11, h12: -self.h12, h22: -self.h22, ..*self }
    }

    pub fn curvatures(&self) -> Result<CurvaturePair> {
        curvatures_from_forms(self)
    }

    pub fn max_abs_diff(&self, o: &Forms) -> f64 {
        [
            self.g11 - o.g11,
            self.g12 - o.g12,
            self.g22 - o.g22,
            self.h11 - o.h11,
            self.h12 - o.h12,
            self.h22 - o.h22,
        ]
        .iter()
        .fold(0.0, |m: f64, v| m.max(v.abs()))
    }
}

/// `K = det h / det g`, `H = (g22 h11 - 2 g12 h12 + g11 h22) / (2 det g)`.
pub fn curvatures_from_forms(f: &Forms) -> Result<CurvaturePair> {
    let dg = f.det_g();
    if !(dg > 0.0) || !(f.g11 > 0.0) {
        return Err(Error::SingularMetric { det: dg });
    }
    Ok(CurvaturePair {
        k: f.det_h() / dg,
        h: (f.g22 * f.h11 - 2.0 * f.g12 * f.h12 + f.g11 * f.h22) / (2.0 * dg),
    })
}

/// `A = (iμ/2) σ3`, `B = -(i/2)(-(αμ + 2μλ) σ3 + μu σ1)`.
pub fn ab_spectral(u: f64, p: &SolitonParams) -> Result<(CMat2, CMat2)> {
    if p.mu() == 0.0 {
        return Err(Error::DegenerateFrame("spectral deformation needs mu != 0"));
    }
    let (mu, alpha, lambda) = (p.mu(), p.alpha(), p.lambda());
    let a = CMat2::su2(0.0, 0.0, 0.5 * mu);
    let b = CMat2::su2(-0.5 * mu * u, 0.0, 0.5 * mu * (alpha + 2.0 * lambda));
    Ok((a, b))
}

fn gauge_b_coeffs(u: f64, p: &SolitonParams) -> (f64, f64) {
    let (mu, nu, alpha, lambda) = (p.mu(), p.nu(), p.alpha(), p.lambda());
    let d = 0.5 * mu * (alpha + 2.0 * lambda) - nu * (alpha + lambda) * u;
    let o = -0.5 * mu * u + nu * (0.5 * u * u - alpha - alpha * lambda - lambda * lambda);
    (d, o)
}

/// `A = i[(μ/2 - νu) σ3 - νλ σ1]`, `B = i[d σ3 + o σ1]` with
/// `d = μ(α + 2λ)/2 - ν(α + λ)u`, `o = -μu/2 + ν(u²/2 - α - αλ - λ²)`.
///
/// These equal `μ U_λ + ν [iσ2, U]` and `μ V_λ + ν [iσ2, V]`.
pub fn ab_spectral_gauge(u: f64, p: &SolitonParams) -> Result<(CMat2, CMat2)> {
    if p.mu() == 0.0 && p.nu() == 0.0 {
        return Err(Error::DegenerateFrame("spectral-gauge deformation needs (mu, nu) != (0, 0)"));
    }
    let (mu, nu, lambda) = (p.mu(), p.nu(), p.lambda());
    let a = CMat2::su2(-nu * lambda, 0.0, 0.5 * mu - nu * u);
    let (d, o) = gauge_b_coeffs(u, p);
    Ok((a, CMat2::su2(o, 0.0, d)))
}

/// `A = -(iμ/2) u_x σ1`, `B = -(iμ/2)(u u_x σ3 + (α+λ) u_x σ1 + u_xx σ2)`,
/// i.e. the variations of `U`, `V` along `u → u + ε u_x`, scaled by μ.
pub fn ab_symmetry(u: f64, u_x: f64, u_xx: f64, p: &SolitonParams) -> (CMat2, CMat2) {
    let m = -0.5 * p.mu();
    let a = CMat2::su2(m * u_x, 0.0, 0.0);
    let b = CMat2::su2(m * (p.alpha() + p.lambda()) * u_x, m * u_xx, m * u * u_x);
    (a, b)
}

/// `A`, `B`, their first derivatives and the Lax pair at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationFrame {
    pub a: CMat2,
    pub b: CMat2,
    pub a_x: CMat2,
    pub a_t: CMat2,
    pub b_x: CMat2,
    pub b_t: CMat2,
    pub u: CMat2,
    pub v: CMat2,
}

/// Frame for an arbitrary jet, derivatives by the chain rule.
pub fn frame_of(j: &SolitonJet, p: &SolitonParams, kind: DeformationKind) -> Result<DeformationFrame> {
    let (alpha, lambda, mu, nu) = (p.alpha(), p.lambda(), p.mu(), p.nu());
    let (a, b, a_x, a_t, b_x, b_t) = match kind {
        DeformationKind::Spectral => {
            let (a, b) = ab_spectral(j.u, p)?;
            let z = CMat2::zero();
            let b_x = CMat2::su2(-0.5 * mu * j.u_x, 0.0, 0.0);
            let b_t = CMat2::su2(-0.5 * mu * j.u_t, 0.0, 0.0);
            (a, b, z, z, b_x, b_t)
        }
        DeformationKind::SpectralGauge => {
            let (a, b) = ab_spectral_gauge(j.u, p)?;
            let a_x = CMat2::su2(0.0, 0.0, -nu * j.u_x);
            let a_t = CMat2::su2(0.0, 0.0, -nu * j.u_t);
            // dd/du and do/du
            let dd = -nu * (alpha + lambda);
            let dof = -0.5 * mu + nu * j.u;
            let b_x = CMat2::su2(dof * j.u_x, 0.0, dd * j.u_x);
            let b_t = CMat2::su2(dof * j.u_t, 0.0, dd * j.u_t);
            (a, b, a_x, a_t, b_x, b_t)
        }
        DeformationKind::Symmetry(SymmetryGenerator::Ux) => {
            let (a, b) = ab_symmetry(j.u, j.u_x, j.u_xx, p);
            let m = -0.5 * mu;
            let al = alpha + lambda;
            let a_x = CMat2::su2(m * j.u_xx, 0.0, 0.0);
            let a_t = CMat2::su2(m * j.u_xt, 0.0, 0.0);
            let b_x = CMat2::su2(
                m * al * j.u_xx,
                m * j.u_xxx,
                m * (j.u_x * j.u_x + j.u * j.u_xx),
            );
            let b_t = CMat2::su2(
                m * al * j.u_xt,
                m * j.u_xxt,
                m * (j.u_t * j.u_x + j.u * j.u_xt),
            );
            (a, b, a_x, a_t, b_x, b_t)
        }
    };
    Ok(DeformationFrame {
        a,
        b,
        a_x,
        a_t,
        b_x,
        b_t,
        u: lax_u(j.u, lambda),
        v: lax_v(j.u, j.u_x, lambda, alpha),
    })
}

pub fn frame(x: f64, t: f64, p: &SolitonParams, kind: DeformationKind) -> Result<DeformationFrame> {
    frame_of(&soliton::jet(x, t, p), p, kind)
}

impl DeformationFrame {
    /// `A_t - B_x + [A, V] + [U, B]`.
    pub fn compatibility(&self) -> CMat2 {
        self.a_t - self.b_x + commutator(&self.a, &self.v) + commutator(&self.u, &self.b)
    }

    pub fn is_singular(&self) -> bool {
        let c = su2_norm(&commutator(&self.a, &self.b));
        c <= SINGULAR_REL * su2_norm(&self.a) * su2_norm(&self.b)
    }

    pub fn forms(&self, orientation: Orientation) -> Option<Forms> {
        if self.is_singular() {
            return None;
        }
        let cm = commutator(&self.a, &self.b);
        let c = cm.scale(orientation.sign() / su2_norm(&cm));
        let a = &self.a;
        let b = &self.b;
        Some(Forms {
            g11: su2_inner(a, a),
            g12: su2_inner(a, b),
            g22: su2_inner(b, b),
            h11: su2_inner(&(self.a_x + commutator(a, &self.u)), &c),
            h12: su2_inner(&(self.a_t + commutator(a, &self.v)), &c),
            h22: su2_inner(&(self.b_t + commutator(b, &self.v)), &c),
        })
    }
}

pub fn ab_compatibility_residual(
    x: f64,
    t: f64,
    p: &SolitonParams,
    kind: DeformationKind,
) -> Result<CMat2> {
    Ok(frame(x, t, p, kind)?.compatibility())
}

pub fn forms_from_ab(x: f64, t: f64, p: &SolitonParams, kind: DeformationKind) -> Result<Forms> {
    forms_from_ab_oriented(x, t, p, kind, Orientation::Commutator)
}

pub fn forms_from_ab_oriented(
    x: f64,
    t: f64,
    p: &SolitonParams,
    kind: DeformationKind,
    orientation: Orientation,
) -> Result<Forms> {
    frame(x, t, p, kind)?
        .forms(orientation)
        .ok_or(Error::SingularPoint { x, t, reason: "[A, B] vanishes" })
}

pub fn curvatures_from_ab(
    x: f64,
    t: f64,
    p: &SolitonParams,
    kind: DeformationKind,
) -> Result<CurvaturePair> {
    forms_from_ab(x, t, p, kind)?.curvatures()
}

/// Fundamental forms of the spectral family as functions of `u`.
pub fn forms_spectral_closed(u: f64, p: &SolitonParams) -> Forms {
    let (mu, alpha, lambda) = (p.mu(), p.alpha(), p.lambda());
    let m = 0.25 * mu * mu;
    let c = alpha + 2.0 * lambda;
    let al = alpha + lambda;
    let hu = 0.5 * mu * u;
    Forms {
        g11: m,
        g12: m * c,
        g22: m * (c * c + u * u),
        h11: hu,
        h12: hu * al,
        h22: hu * al * al + 0.25 * mu * u * (u * u - 2.0 * alpha),
    }
}

/// Fundamental forms of the spectral-gauge family as functions of `u`.
pub fn forms_spectral_gauge_closed(u: f64, p: &SolitonParams) -> Forms {
    let (mu, nu, a, l) = (p.mu(), p.nu(), p.alpha(), p.lambda());
    let u2 = u * u;
    let q = 0.25 * u2 * u2 + a * (a - 1.0 + l) * u2 + ((1.0 + l) * a + l * l).powi(2);
    let r = a * a + (2.0 * l - 1.0) * a + l * l;
    Forms {
        g11: 0.25 * mu * mu + nu * (nu * (u2 + l * l) - mu * u),
        g12: 0.25 * (a + 2.0 * l) * mu * mu
            + 0.25
                * nu
                * (nu * (2.0 * (l + 2.0 * a) * u2 + 4.0 * (l * l * l + a * l + l * l * a))
                    - 4.0 * mu * (a + l) * u),
        g22: (u2 + (2.0 * l + a).powi(2)) * 0.25 * mu * mu
            + nu * (nu * q - 0.5 * mu * u2 * u - mu * r * u),
        h11: 0.5 * mu * u - nu * (u2 + l * l),
        h12: 0.5 * mu * (a + l) * u - nu * (l * (l * l + a * l + a) + 0.5 * (l + 2.0 * a) * u2),
        h22: 0.25 * mu * (u2 * u + 2.0 * r * u) - nu * q,
    }
}

/// `K = (2/μ²)(u² - 2α)`, `H = (3u² + 2(λ² - α)) / (2μu)`.
pub fn curvatures_spectral_closed(u: f64, p: &SolitonParams) -> Result<CurvaturePair> {
    let (mu, alpha, lambda) = (p.mu(), p.alpha(), p.lambda());
    if mu == 0.0 {
        return Err(Error::VanishingDenominator("mu"));
    }
    if u == 0.0 {
        return Err(Error::VanishingDenominator("u"));
    }
    Ok(CurvaturePair {
        k: 2.0 / (mu * mu) * (u * u - 2.0 * alpha),
        h: (3.0 * u * u + 2.0 * (lambda * lambda - alpha)) / (2.0 * mu * u),
    })
}

/// `D = ν(2νu(u² - 2α) - 3μu² - 2μ(λ² - α)) + μ²u`.
///
/// `D` vanishes exactly where `[A, B] = 0` for the spectral and spectral-gauge
/// families. The closed-form second fundamental forms use the fixed normal `iσ2`,
/// while `C = [A,B]/‖[A,B]‖` equals `sign(D) iσ2`; the two conventions differ by `sign(D)`.
pub fn spectral_gauge_denominator(u: f64, p: &SolitonParams) -> f64 {
    let (mu, nu, alpha, lambda) = (p.mu(), p.nu(), p.alpha(), p.lambda());
    let w = u * u - 2.0 * alpha;
    nu * (2.0 * nu * u * w - 3.0 * mu * u * u - 2.0 * mu * (lambda * lambda - alpha)) + mu * mu * u
}

/// `K = 2u(u² - 2α) / D`, `H = (μ(3u² + 2(λ² - α)) - 4uν(u² - 2α)) / (2D)` with
/// `D = ν(2νu(u² - 2α) - 3μu² - 2μ(λ² - α)) + μ²u`.
pub fn curvatures_spectral_gauge_closed(u: f64, p: &SolitonParams) -> Result<CurvaturePair> {
    let (mu, nu, alpha, lambda) = (p.mu(), p.nu(), p.alpha(), p.lambda());
    let w = u * u - 2.0 * alpha;
    let l2a = lambda * lambda - alpha;
    let den = spectral_gauge_denominator(u, p);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::VanishingDenominator("spectral-gauge curvature"));
    }
    Ok(CurvaturePair {
        k: 2.0 * u * w / den,
        h: (mu * (3.0 * u * u + 2.0 * l2a) - 4.0 * u * nu * w) / (2.0 * den),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereReport {
    pub points: Vec<(f64, f64)>,
    pub k_values: Vec<f64>,
    pub h_values: Vec<f64>,
    /// Grid points skipped by the singular-point policy (e.g. the crest, where `u_x = 0`).
    pub singular: Vec<(f64, f64)>,
    pub k_mean: f64,
    /// `max |K - K̄| / |K̄|`.
    pub k_spread: f64,
    /// `max |H² - K| / |K̄|`.
    pub umbilic_defect: f64,
    pub radius_estimate: f64,
    /// `|αμ / (2λ)|`.
    pub expected_radius: f64,
}

impl SphereReport {
    pub fn radius_rel_error(&self) -> f64 {
        (self.radius_estimate - self.expected_radius).abs() / self.expected_radius
    }
}

/// Curvatures of the `φ = u_x` symmetry surface over a grid.
pub fn symmetry_sphere_check(p: &SolitonParams, grid: &Grid) -> Result<SphereReport> {
    if p.lambda() == 0.0 {
        return Err(Error::DegenerateFrame("sphere check needs lambda != 0"));
    }
    grid.validate()?;
    let kind = DeformationKind::Symmetry(SymmetryGenerator::Ux);
    let mut points = Vec::new();
    let mut ks = Vec::new();
    let mut hs = Vec::new();
    let mut singular = Vec::new();
    for (x, t) in grid.points() {
        match frame(x, t, p, kind)?.forms(Orientation::Commutator) {
            None => singular.push((x, t)),
            Some(f) => {
                let c = f.curvatures()?;
                points.push((x, t));
                ks.push(c.k);
                hs.push(c.h);
            }
        }
    }
    if ks.is_empty() {
        return Err(Error::SingularPoint {
            x: grid.x_min,
            t: grid.t_min,
            reason: "every grid point is singular",
        });
    }
    let k_mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let k_spread = ks.iter().map(|k| (k - k_mean).abs()).fold(0.0, f64::max) / k_mean.abs();
    let umbilic_defect = ks
        .iter()
        .zip(&hs)
        .map(|(k, h)| (h * h - k).abs())
        .fold(0.0, f64::max)
        / k_mean.abs();
    Ok(SphereReport {
        points,
        k_values: ks,
        h_values: hs,
        singular,
        k_mean,
        k_spread,
        umbilic_defect,
        radius_estimate: 1.0 / k_mean.sqrt(),
        expected_radius: (p.alpha() * p.mu() / (2.0 * p.lambda())).abs(),
    })
}
