//! Grid-wide verification checks and the machine-readable report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::deformation::{self, Orientation};
use crate::diffgeo::{self, ClosedFormSurface, Stencil, SurfaceFields};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::immersion::{self, Convention, Family};
use crate::lagrangian::{self, PolyLagrangian};
use crate::lax::{self, PhiConstants};
use crate::mesh::{ParamsJson, REPORT_VERSION};
use crate::soliton::{self, SolitonParams};

/// Willmore-like coefficients `(a, b)` of the `λ = ±k1/2` spectral surfaces.
pub const WILLMORE_AB: (f64, f64) = (4.0 / 9.0, 1.0);

/// Smallest `det g / (g11 g22)` at which the forms check also compares curvatures.
pub const METRIC_CONDITION: f64 = 1e-6;

/// Half-width of the `|ξ|` band used by the operator-based checks.
pub const OPERATOR_XI_BAND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum Check {
    ZeroCurvature,
    Lax,
    Compatibility,
    Forms,
    Weingarten,
    WeingartenPaperLiteral,
    Willmore,
    Shape,
    Sphere,
    Consistency,
}

impl From<Check> for &'static str {
    fn from(c: Check) -> Self {
        c.name()
    }
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::ZeroCurvature,
        Check::Lax,
        Check::Compatibility,
        Check::Forms,
        Check::Weingarten,
        Check::WeingartenPaperLiteral,
        Check::Willmore,
        Check::Shape,
        Check::Sphere,
        Check::Consistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ZeroCurvature => "zerocurv",
            Check::Lax => "lax",
            Check::Compatibility => "compat",
            Check::Forms => "forms",
            Check::Weingarten => "weingarten",
            Check::WeingartenPaperLiteral => "weingarten-paper-literal",
            Check::Willmore => "willmore",
            Check::Shape => "shape",
            Check::Sphere => "sphere",
            Check::Consistency => "consistency",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::ZeroCurvature => 1e-10,
            Check::Lax => 1e-6,
            Check::Compatibility => 1e-9,
            Check::Forms => 1e-8,
            Check::Weingarten | Check::WeingartenPaperLiteral => 1e-9,
            Check::Willmore => 1e-4,
            Check::Shape => 1e-3,
            Check::Sphere => 1e-6,
            Check::Consistency => 1e-6,
        }
    }

    /// What the residual measures, for reports.
    pub fn description(self) -> &'static str {
        match self {
            Check::ZeroCurvature => "max |U_t - V_x + [U,V]|",
            Check::Lax => "max |Phi_x - U Phi|, |Phi_t - V Phi| over max(1, |Phi|)",
            Check::Compatibility => "max |A_t - B_x + [A,V] + [U,B]|",
            Check::Forms => "relative gap between commutator-normal forms and closed forms",
            Check::Weingarten => "corrected cubic (and quadratic at k1 = 2 lambda) over largest monomial",
            Check::WeingartenPaperLiteral => "cubic as printed over largest monomial",
            Check::Willmore => "|lap H + (4/9) H^3 + H K| over largest cubic term, |xi| < 2",
            Check::Shape => "shape-equation residual over largest term, degree 3..6 families, |xi| < 2",
            Check::Sphere => "symmetry surface: K spread, H^2 - K, radius error",
            Check::Consistency => "max |y_x - Phi^-1 A Phi|, |y_t - Phi^-1 B Phi|",
        }
    }

    /// Checks run by `all`: every applicable check except the printed-cubic regression.
    pub fn default_set() -> Vec<Check> {
        Check::ALL.into_iter().filter(|c| *c != Check::WeingartenPaperLiteral).collect()
    }

    /// `Err(reason)` if the check does not apply to this configuration.
    pub fn applicability(self, family: Family, p: &SolitonParams) -> std::result::Result<(), String> {
        let spectral = family == Family::Spectral3;
        match self {
            Check::Weingarten | Check::WeingartenPaperLiteral if !spectral => {
                Err("the Weingarten relation is stated for the three-parameter family".into())
            }
            Check::Willmore | Check::Shape if !spectral => {
                Err("needs the three-parameter family".into())
            }
            Check::Willmore | Check::Shape if !half_k1(p) => {
                Err(format!("needs lambda = +-k1/2 (k1 = {}, lambda = {})", p.k1(), p.lambda()))
            }
            Check::Sphere if p.lambda() == 0.0 || p.mu() == 0.0 => {
                Err("the symmetry surface needs lambda != 0 and mu != 0".into())
            }
            _ => Ok(()),
        }
    }
}

fn half_k1(p: &SolitonParams) -> bool {
    (2.0 * p.lambda().abs() - p.k1().abs()).abs() <= 1e-12 * p.k1().abs()
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or(Error::UnknownCheck(s))
    }
}

/// Parses a comma-separated list; `all` expands later against the configuration.
pub fn parse_checks(list: &str) -> Result<Option<Vec<Check>>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("all") {
            return Ok(None);
        }
        let c: Check = item.parse()?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(Error::UnknownCheck(list.to_string()));
    }
    Ok(Some(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub family: Family,
    pub params: SolitonParams,
    pub grid: Grid,
    pub convention: Convention,
    pub tolerances: BTreeMap<Check, f64>,
    /// Overrides the finite-difference step of the lax, willmore and shape checks.
    pub fd_step: Option<f64>,
}

impl VerifyConfig {
    pub fn new(family: Family, params: SolitonParams, grid: Grid) -> Self {
        Self {
            family,
            params,
            grid,
            convention: Convention::Connection,
            tolerances: BTreeMap::new(),
            fd_step: None,
        }
    }

    pub fn tolerance(&self, c: Check) -> f64 {
        self.tolerances.get(&c).copied().unwrap_or_else(|| c.default_tolerance())
    }

    fn nested_stencil(&self) -> Result<Stencil> {
        match self.fd_step {
            Some(h) => Stencil::uniform(h, 4, true),
            None => Ok(Stencil::nested_default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: Check,
    pub description: &'static str,
    pub grid: Grid,
    pub max_residual: f64,
    pub median_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub evaluated: usize,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCheck {
    pub name: Check,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub family: &'static str,
    params: ParamsJson,
    pub convention: Convention,
    pub checks: Vec<CheckResult>,
    pub skipped: Vec<SkippedCheck>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{:<4} {:<26} max {:.3e}  median {:.3e}  tol {:.1e}  ({} points, {} excluded)\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name.name(),
                c.max_residual,
                c.median_residual,
                c.tolerance,
                c.evaluated,
                c.excluded
            ));
        }
        for k in &self.skipped {
            s.push_str(&format!("SKIP {:<26} {}\n", k.name.name(), k.reason));
        }
        s
    }
}

/// Runs `checks`, or every applicable default check when `None`.
///
/// An explicitly requested check that does not apply is an error.
pub fn verify(checks: Option<&[Check]>, cfg: &VerifyConfig) -> Result<VerificationReport> {
    cfg.grid.validate()?;
    let mut run = Vec::new();
    let mut skipped = Vec::new();
    match checks {
        Some(list) => {
            for &c in list {
                if let Err(reason) = c.applicability(cfg.family, &cfg.params) {
                    return Err(Error::IncompatibleCheck {
                        check: format!("{c} ({reason})"),
                        family: cfg.family.name().to_string(),
                    });
                }
                run.push(c);
            }
        }
        None => {
            for c in Check::default_set() {
                match c.applicability(cfg.family, &cfg.params) {
                    Ok(()) => run.push(c),
                    Err(reason) => skipped.push(SkippedCheck { name: c, reason }),
                }
            }
        }
    }
    let results = run.iter().map(|&c| run_check(c, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        report_version: REPORT_VERSION,
        family: cfg.family.name(),
        params: ParamsJson::from(&cfg.params),
        convention: cfg.convention,
        all_pass: results.iter().all(|r| r.pass),
        checks: results,
        skipped,
    })
}

/// Per-point residual, or `None` for an excluded point.
type PointFn<'a> = Box<dyn Fn(f64, f64) -> Result<Option<f64>> + 'a>;

pub fn run_check(check: Check, cfg: &VerifyConfig) -> Result<CheckResult> {
    if let Err(reason) = check.applicability(cfg.family, &cfg.params) {
        return Err(Error::IncompatibleCheck {
            check: format!("{check} ({reason})"),
            family: cfg.family.name().to_string(),
        });
    }
    let p = cfg.params;
    let family = cfg.family;
    let tol = cfg.tolerance(check);
    if check == Check::Sphere {
        return sphere_result(cfg, tol);
    }
    let in_band = move |x: f64, t: f64| soliton::xi(x, t, &p).abs() < OPERATOR_XI_BAND;
    let f: PointFn = match check {
        Check::ZeroCurvature => {
            Box::new(move |x, t| Ok(Some(lax::zero_curvature_residual(x, t, &p).max_abs())))
        }
        Check::Lax => {
            let c = PhiConstants::canonical(&p);
            let h = cfg.fd_step.unwrap_or(lax::LAX_FD_STEP);
            Box::new(move |x, t| {
                let (rx, rt) = lax::lax_residuals(x, t, &p, &c, h)?;
                let scale = lax::phi(x, t, &p, &c).max_abs().max(1.0);
                Ok(Some(rx.max_abs().max(rt.max_abs()) / scale))
            })
        }
        Check::Compatibility => Box::new(move |x, t| {
            Ok(Some(deformation::ab_compatibility_residual(x, t, &p, family.deformation())?.max_abs()))
        }),
        Check::Forms => Box::new(move |x, t| forms_gap(family, x, t, &p)),
        Check::Weingarten | Check::WeingartenPaperLiteral => {
            let literal = check == Check::WeingartenPaperLiteral;
            Box::new(move |x, t| {
                let c = match immersion::curvatures_closed(family, x, t, &p) {
                    Ok(c) if c.k.is_finite() && c.h.is_finite() => c,
                    _ => return Ok(None),
                };
                let w = immersion::weingarten_residuals(c.k, c.h, &p);
                Ok(Some(if literal {
                    w.paper_cubic_rel()
                } else {
                    w.cubic_rel().max(w.quadratic_rel().unwrap_or(0.0))
                }))
            })
        }
        Check::Willmore => {
            let s = cfg.nested_stencil()?;
            let surface = ClosedFormSurface::new(family, p);
            Box::new(move |x, t| {
                if !in_band(x, t) {
                    return Ok(None);
                }
                let (a, b) = WILLMORE_AB;
                Ok(Some(diffgeo::willmore_like_residual(&surface, a, b, x, t, &s)?.normalized()))
            })
        }
        Check::Shape => {
            let s = cfg.nested_stencil()?;
            let surface = ClosedFormSurface::new(family, p);
            let lags = reference_lagrangians(&p)?;
            Box::new(move |x, t| {
                if !in_band(x, t) || diffgeo::near_parabolic(&surface.forms(x, t)?) {
                    return Ok(None);
                }
                let mut worst: f64 = 0.0;
                for l in &lags {
                    match diffgeo::shape_equation_residual(&surface, l, x, t, &s) {
                        Ok(r) => worst = worst.max(r.normalized()),
                        Err(Error::SingularSecondForm { .. }) => return Ok(None),
                        Err(e) => return Err(e),
                    }
                }
                Ok(Some(worst))
            })
        }
        Check::Consistency => {
            let conv = cfg.convention;
            Box::new(move |x, t| {
                let (a, b) = immersion::position_consistency_residual(family, x, t, &p, conv)?;
                Ok(Some(a.max_abs().max(b.max_abs())))
            })
        }
        Check::Sphere => unreachable!(),
    };
    let mut vals = Vec::with_capacity(cfg.grid.len());
    let mut excluded = 0;
    for (x, t) in cfg.grid.points() {
        match f(x, t) {
            Ok(Some(v)) => vals.push(v),
            Ok(None) | Err(Error::SingularPoint { .. }) | Err(Error::SingularSecondForm { .. }) => {
                excluded += 1
            }
            Err(e) => return Err(e),
        }
    }
    Ok(finish(check, cfg.grid, tol, vals, excluded))
}

fn finish(check: Check, grid: Grid, tol: f64, vals: Vec<f64>, excluded: usize) -> CheckResult {
    let s = lagrangian::summarize(vals, excluded);
    // a NaN residual or an empty evaluation never passes
    let pass = s.evaluated > 0 && s.max_normalized <= tol;
    CheckResult {
        name: check,
        description: check.description(),
        grid,
        max_residual: s.max_normalized,
        median_residual: s.median_normalized,
        tolerance: tol,
        pass,
        evaluated: s.evaluated,
        excluded: s.excluded,
    }
}

fn sphere_result(cfg: &VerifyConfig, tol: f64) -> Result<CheckResult> {
    let r = deformation::symmetry_sphere_check(&cfg.params, &cfg.grid)?;
    let worst = r.k_spread.max(r.umbilic_defect).max(r.radius_rel_error());
    let s = lagrangian::summarize(vec![worst], r.singular.len());
    let pass = s.max_normalized <= tol;
    Ok(CheckResult {
        name: Check::Sphere,
        description: Check::Sphere.description(),
        grid: cfg.grid,
        max_residual: s.max_normalized,
        median_residual: s.median_normalized,
        tolerance: tol,
        pass,
        evaluated: r.points.len(),
        excluded: r.singular.len(),
    })
}

/// Gap between the commutator-normal forms and the closed forms, with the closed-form
/// second fundamental form taken along the same normal (`sign D`).
pub fn forms_gap(family: Family, x: f64, t: f64, p: &SolitonParams) -> Result<Option<f64>> {
    let fr = deformation::frame(x, t, p, family.deformation())?;
    let Some(f) = fr.forms(Orientation::Commutator) else {
        return Ok(None);
    };
    let u = soliton::u(x, t, p);
    let sign = deformation::spectral_gauge_denominator(u, p).signum();
    let closed = immersion::forms_closed(family, x, t, p);
    let closed = if sign < 0.0 { closed.flipped() } else { closed };
    let scale = [closed.g11, closed.g12, closed.g22, closed.h11, closed.h12, closed.h22]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut gap = f.max_abs_diff(&closed) / scale.max(f64::MIN_POSITIVE);
    // Curvatures from nearly parallel tangents lose about 1/sin²θ digits; compare entries only there.
    let well_conditioned = closed.det_g() >= METRIC_CONDITION * closed.g11 * closed.g22;
    if let (true, Ok(c), Ok(cc)) =
        (well_conditioned, f.curvatures(), immersion::curvatures_closed(family, x, t, p))
    {
        let hc = sign * cc.h;
        let k_scale = cc.k.abs().max(hc * hc).max(f64::MIN_POSITIVE);
        let h_scale = hc.abs().max(cc.k.abs().sqrt()).max(f64::MIN_POSITIVE);
        gap = gap.max((c.k - cc.k).abs() / k_scale).max((c.h - hc).abs() / h_scale);
    }
    Ok(Some(gap))
}

/// Degree 3..6 solutions of the shape equation on the configuration's surface, `p = 1`,
/// every free coefficient ½.
pub fn reference_lagrangians(p: &SolitonParams) -> Result<Vec<PolyLagrangian>> {
    (3..=6)
        .map(|n| {
            let free = lagrangian::free_indices(n)?.iter().map(|&i| (i, 0.5)).collect();
            lagrangian::example1_family(n, &free, 1.0, p.lambda(), p.mu())
        })
        .collect()
}
