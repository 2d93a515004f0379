//! Finite-difference differential geometry of immersed surfaces: fundamental forms,
//! the operators `∇² = (1/√g) ∂_i(√g g^{ij} ∂_j)` and `∇·∇̄ = (1/√g) ∂_i(√g K h^{ij} ∂_j)`,
//! and the Willmore-like and shape-equation residuals built from them.
//!
//! The divergence-form operators difference the flux at offset points instead of
//! expanding derivatives of the metric.

use serde::{Deserialize, Serialize};

use crate::deformation::{CurvaturePair, Forms};
use crate::error::{Error, Result};
use crate::fd;
use crate::immersion::{self, Family};
use crate::lagrangian::PolyLagrangian;
use crate::soliton::SolitonParams;
use crate::su2::Vec3;

/// Relative threshold of the near-parabolic filter: `|det h| < NEAR_PARABOLIC·(tr h)²`.
pub const NEAR_PARABOLIC: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stencil {
    h_x: f64,
    h_t: f64,
    order: u8,
    richardson: bool,
}

impl Stencil {
    pub fn new(h_x: f64, h_t: f64, order: u8, richardson: bool) -> Result<Self> {
        for h in [h_x, h_t] {
            if !(1e-8..=1e-2).contains(&h) {
                return Err(Error::StepOutOfRange(h));
            }
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidGrid(format!("stencil order must be 2 or 4 (got {order})")));
        }
        Ok(Self { h_x, h_t, order, richardson })
    }

    /// Steps for first and second derivatives of a position: `h = 8e-3`, order 4, one
    /// Richardson level. Smaller steps lose more to rounding than they gain in truncation.
    pub fn forms_default() -> Self {
        Self { h_x: 8e-3, h_t: 8e-3, order: 4, richardson: true }
    }

    /// Steps for the nested divergence-form operators: `h = 1e-3`, order 4, one Richardson level.
    pub fn nested_default() -> Self {
        Self { h_x: 1e-3, h_t: 1e-3, order: 4, richardson: true }
    }

    pub fn uniform(h: f64, order: u8, richardson: bool) -> Result<Self> {
        Self::new(h, h, order, richardson)
    }

    pub fn h_x(&self) -> f64 {
        self.h_x
    }
    pub fn h_t(&self) -> f64 {
        self.h_t
    }
    pub fn order(&self) -> u8 {
        self.order
    }
    pub fn richardson(&self) -> bool {
        self.richardson
    }

    fn halved(&self) -> Self {
        Self { h_x: 0.5 * self.h_x, h_t: 0.5 * self.h_t, ..*self }
    }

    /// Applies one Richardson level to `estimate` when enabled.
    fn extrapolate(&self, estimate: impl Fn(&Stencil) -> Result<f64>) -> Result<f64> {
        let coarse = estimate(self)?;
        if !self.richardson {
            return Ok(coarse);
        }
        let fine = estimate(&self.halved())?;
        let w = 2f64.powi(self.order as i32);
        Ok((w * fine - coarse) / (w - 1.0))
    }
}

/// Which cross product defines the unit normal of a parametrized surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum FdOrientation {
    /// `n = y_x × y_t / |y_x × y_t|`.
    #[default]
    XCrossT,
    /// `n = y_t × y_x / |y_x × y_t|`.
    TCrossX,
}

/// `g_ij = <∂_i y, ∂_j y>`, `h_ij = <∂_i ∂_j y, n>` by central differences.
pub fn fd_forms(
    y: impl Fn(f64, f64) -> Vec3,
    x: f64,
    t: f64,
    s: &Stencil,
    orientation: FdOrientation,
) -> Result<Forms> {
    let (hx, ht, o) = (s.h_x, s.h_t, s.order);
    let d1x = |s: f64| fd::d1(|e| y(x + e, t), s, o);
    let d1t = |s: f64| fd::d1(|e| y(x, t + e), s, o);
    let d2x = |s: f64| fd::d2(|e| y(x + e, t), s, o);
    let d2t = |s: f64| fd::d2(|e| y(x, t + e), s, o);
    let dxt = |a: f64, b: f64| fd::d_mixed(|p, q| y(x + p, t + q), a, b, o);
    let (y_x, y_t, y_xx, y_tt, y_xt) = if s.richardson {
        let ord = o as i32;
        (
            fd::richardson(d1x, hx, ord),
            fd::richardson(d1t, ht, ord),
            fd::richardson(d2x, hx, ord),
            fd::richardson(d2t, ht, ord),
            fd::richardson(|r| dxt(r, r * ht / hx), hx, ord),
        )
    } else {
        (d1x(hx), d1t(ht), d2x(hx), d2t(ht), dxt(hx, ht))
    };
    let c = y_x.cross(&y_t);
    let nc = c.norm();
    if !(nc >= 1e-12) {
        return Err(Error::DegenerateParametrization(nc));
    }
    let n = match orientation {
        FdOrientation::XCrossT => c.scale(1.0 / nc),
        FdOrientation::TCrossX => c.scale(-1.0 / nc),
    };
    Ok(Forms {
        g11: y_x.dot(&y_x),
        g12: y_x.dot(&y_t),
        g22: y_t.dot(&y_t),
        h11: y_xx.dot(&n),
        h12: y_xt.dot(&n),
        h22: y_tt.dot(&n),
    })
}

/// Metric, second fundamental form and curvatures of a surface as functions of `(x, t)`.
pub trait SurfaceFields {
    fn forms(&self, x: f64, t: f64) -> Result<Forms>;

    fn curvatures(&self, x: f64, t: f64) -> Result<CurvaturePair> {
        self.forms(x, t)?.curvatures()
    }
}

/// Closed-form geometry of the spectral and spectral-gauge surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSurface {
    pub family: Family,
    pub params: SolitonParams,
}

impl ClosedFormSurface {
    pub fn new(family: Family, params: SolitonParams) -> Self {
        Self { family, params }
    }
}

impl SurfaceFields for ClosedFormSurface {
    fn forms(&self, x: f64, t: f64) -> Result<Forms> {
        Ok(immersion::forms_closed(self.family, x, t, &self.params))
    }

    fn curvatures(&self, x: f64, t: f64) -> Result<CurvaturePair> {
        immersion::curvatures_closed(self.family, x, t, &self.params)
    }
}

/// Geometry of an arbitrary position map, by [`fd_forms`].
pub struct FdSurface<F> {
    pub position: F,
    pub stencil: Stencil,
    pub orientation: FdOrientation,
}

impl<F: Fn(f64, f64) -> Vec3> SurfaceFields for FdSurface<F> {
    fn forms(&self, x: f64, t: f64) -> Result<Forms> {
        fd_forms(&self.position, x, t, &self.stencil, self.orientation)
    }
}

/// Any closure returning forms.
pub struct FnSurface<F>(pub F);

impl<F: Fn(f64, f64) -> Result<Forms>> SurfaceFields for FnSurface<F> {
    fn forms(&self, x: f64, t: f64) -> Result<Forms> {
        (self.0)(x, t)
    }
}

pub fn near_parabolic(f: &Forms) -> bool {
    let tr = f.trace_h();
    f.det_h().abs() < NEAR_PARABOLIC * tr * tr
}

/// `√det g` and the symmetric contravariant tensor of a divergence-form operator.
type Coefficients = (f64, [f64; 3]);

fn metric_coefficients(f: &Forms) -> Result<Coefficients> {
    let dg = f.det_g();
    if !(dg > 0.0) {
        return Err(Error::SingularMetric { det: dg });
    }
    // g^{ij} = adj(g) / det g
    Ok((dg.sqrt(), [f.g22 / dg, -f.g12 / dg, f.g11 / dg]))
}

fn bar_coefficients(f: &Forms, k: f64) -> Result<Coefficients> {
    let dg = f.det_g();
    if !(dg > 0.0) {
        return Err(Error::SingularMetric { det: dg });
    }
    let dh = f.det_h();
    if dh == 0.0 || !dh.is_finite() {
        return Err(Error::SingularSecondForm { det: dh });
    }
    // K h^{ij}, with h^{ij} the inverse of the second fundamental form
    Ok((dg.sqrt(), [k * f.h22 / dh, -k * f.h12 / dh, k * f.h11 / dh]))
}

/// `(1/√g) ∂_i (√g T^{ij} ∂_j f)` with nested central differences.
fn divergence_form(
    f: &dyn Fn(f64, f64) -> Result<f64>,
    coeffs: &dyn Fn(f64, f64) -> Result<Coefficients>,
    x: f64,
    t: f64,
    s: &Stencil,
) -> Result<f64> {
    let grad = |x: f64, t: f64| -> Result<(f64, f64)> {
        let fx = first(&|e| f(x + e, t), s.h_x, s.order)?;
        let ft = first(&|e| f(x, t + e), s.h_t, s.order)?;
        Ok((fx, ft))
    };
    let flux = |x: f64, t: f64, comp: usize| -> Result<f64> {
        let (sg, m) = coeffs(x, t)?;
        let (fx, ft) = grad(x, t)?;
        Ok(match comp {
            0 => sg * (m[0] * fx + m[1] * ft),
            _ => sg * (m[1] * fx + m[2] * ft),
        })
    };
    let div = first(&|e| flux(x + e, t, 0), s.h_x, s.order)?
        + first(&|e| flux(x, t + e, 1), s.h_t, s.order)?;
    let (sg, _) = coeffs(x, t)?;
    Ok(div / sg)
}

fn first(f: &dyn Fn(f64) -> Result<f64>, h: f64, order: u8) -> Result<f64> {
    Ok(match order {
        4 => (8.0 * (f(h)? - f(-h)?) - (f(2.0 * h)? - f(-2.0 * h)?)) / (12.0 * h),
        _ => (f(h)? - f(-h)?) / (2.0 * h),
    })
}

/// Laplace-Beltrami operator of the scalar field `f` on the metric of `surface`.
pub fn laplace_beltrami<S: SurfaceFields + ?Sized>(
    f: &dyn Fn(f64, f64) -> Result<f64>,
    surface: &S,
    x: f64,
    t: f64,
    s: &Stencil,
) -> Result<f64> {
    let coeffs = |x: f64, t: f64| metric_coefficients(&surface.forms(x, t)?);
    s.extrapolate(|st| divergence_form(f, &coeffs, x, t, st))
}

/// `∇·∇̄ f` with `K h^{ij}` from `surface`.
pub fn nabla_dot_bar<S: SurfaceFields + ?Sized>(
    f: &dyn Fn(f64, f64) -> Result<f64>,
    surface: &S,
    x: f64,
    t: f64,
    s: &Stencil,
) -> Result<f64> {
    let coeffs = |x: f64, t: f64| {
        let fm = surface.forms(x, t)?;
        let k = surface.curvatures(x, t)?.k;
        bar_coefficients(&fm, k)
    };
    s.extrapolate(|st| divergence_form(f, &coeffs, x, t, st))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WillmoreTerms {
    pub laplacian_h: f64,
    pub a_h3: f64,
    pub b_hk: f64,
}

impl WillmoreTerms {
    pub fn residual(&self) -> f64 {
        self.laplacian_h + self.a_h3 + self.b_hk
    }

    /// `|residual| / max(|aH³|, |bHK|, 1e-30)`.
    pub fn normalized(&self) -> f64 {
        self.residual().abs() / self.a_h3.abs().max(self.b_hk.abs()).max(1e-30)
    }
}

/// `∇²H + aH³ + bHK`.
pub fn willmore_like_residual<S: SurfaceFields + ?Sized>(
    surface: &S,
    a: f64,
    b: f64,
    x: f64,
    t: f64,
    s: &Stencil,
) -> Result<WillmoreTerms> {
    let hf = |x: f64, t: f64| Ok(surface.curvatures(x, t)?.h);
    let lap = laplace_beltrami(&hf, surface, x, t, s)?;
    let c = surface.curvatures(x, t)?;
    Ok(WillmoreTerms { laplacian_h: lap, a_h3: a * c.h.powi(3), b_hk: b * c.h * c.k })
}

/// Terms of `(∇² + 4H² - 2K) ℰ_H + 2(∇·∇̄ + 2KH) ℰ_K - 4Hℰ + 2p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeTerms {
    pub laplacian_eh: f64,
    pub curvature_eh: f64,
    pub bar_ek: f64,
    pub curvature_ek: f64,
    pub minus_4he: f64,
    pub two_p: f64,
}

impl ShapeTerms {
    pub fn terms(&self) -> [f64; 6] {
        [
            self.laplacian_eh,
            self.curvature_eh,
            self.bar_ek,
            self.curvature_ek,
            self.minus_4he,
            self.two_p,
        ]
    }

    pub fn residual(&self) -> f64 {
        self.terms().iter().sum()
    }

    pub fn scale(&self) -> f64 {
        self.terms().iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// `|residual|` divided by the largest term magnitude (floored at 1e-30).
    pub fn normalized(&self) -> f64 {
        self.residual().abs() / self.scale().max(1e-30)
    }
}

pub fn shape_equation_residual<S: SurfaceFields + ?Sized>(
    surface: &S,
    lag: &PolyLagrangian,
    x: f64,
    t: f64,
    s: &Stencil,
) -> Result<ShapeTerms> {
    let e_h = |x: f64, t: f64| {
        let c = surface.curvatures(x, t)?;
        Ok(lag.d_h(c.h, c.k))
    };
    let e_k = |x: f64, t: f64| {
        let c = surface.curvatures(x, t)?;
        Ok(lag.d_k(c.h, c.k))
    };
    let c = surface.curvatures(x, t)?;
    let (h, k) = (c.h, c.k);
    let eh = lag.d_h(h, k);
    let ek = lag.d_k(h, k);
    let laplacian_eh = if lag.monomials().any(|((n, _), a)| n > 1 && a != 0.0) {
        laplace_beltrami(&e_h, surface, x, t, s)?
    } else {
        // ℰ_H is constant across the surface
        0.0
    };
    let bar_ek = if lag.monomials().any(|((n, l), a)| (n > 0 || l > 1) && l > 0 && a != 0.0) {
        2.0 * nabla_dot_bar(&e_k, surface, x, t, s)?
    } else {
        0.0
    };
    Ok(ShapeTerms {
        laplacian_eh,
        curvature_eh: (4.0 * h * h - 2.0 * k) * eh,
        bar_ek,
        curvature_ek: 4.0 * k * h * ek,
        minus_4he: -4.0 * h * lag.eval(h, k),
        two_p: 2.0 * lag.pressure(),
    })
}
