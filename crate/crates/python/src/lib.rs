//! Python bindings: soliton parameters, the Lax solution, immersions, meshes and verification.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mkdv_surface::deformation::{self, DeformationKind, SymmetryGenerator};
use mkdv_surface::lagrangian;
use mkdv_surface::lax::{self, PhiConstants};
use mkdv_surface::verify::{parse_checks, Check};
use mkdv_surface::{immersion, mesh, soliton, Convention, Error, Family, Grid, PresetId, VerifyConfig};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(name: &str) -> PyResult<Family> {
    name.parse::<Family>().map_err(err)
}

fn convention(paper_literal: bool) -> Convention {
    if paper_literal {
        Convention::PaperLiteral
    } else {
        Convention::Connection
    }
}

fn deformation_kind(name: &str) -> PyResult<DeformationKind> {
    match name {
        "spectral" => Ok(DeformationKind::Spectral),
        "spectral-gauge" => Ok(DeformationKind::SpectralGauge),
        "symmetry-ux" => Ok(DeformationKind::Symmetry(SymmetryGenerator::Ux)),
        _ => Err(PyValueError::new_err(format!(
            "unknown deformation '{name}' (spectral, spectral-gauge, symmetry-ux)"
        ))),
    }
}

fn json_to_py<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (s,))
}

/// One-soliton parameters `(k1, λ, μ, ν)`; `α = k1²/4`.
#[pyclass(frozen, from_py_object, name = "SolitonParams")]
#[derive(Clone, Copy)]
struct PySolitonParams(soliton::SolitonParams);

#[pymethods]
impl PySolitonParams {
    #[new]
    #[pyo3(signature = (k1, lam, mu, nu = 0.0))]
    fn new(k1: f64, lam: f64, mu: f64, nu: f64) -> PyResult<Self> {
        soliton::SolitonParams::new(k1, lam, mu, nu).map(Self).map_err(err)
    }

    #[getter]
    fn k1(&self) -> f64 {
        self.0.k1()
    }
    #[getter]
    fn lam(&self) -> f64 {
        self.0.lambda()
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu()
    }
    #[getter]
    fn nu(&self) -> f64 {
        self.0.nu()
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn __repr__(&self) -> String {
        format!(
            "SolitonParams(k1={}, lam={}, mu={}, nu={})",
            self.0.k1(),
            self.0.lambda(),
            self.0.mu(),
            self.0.nu()
        )
    }
}

/// Sampled surface with positions and closed-form curvatures, row-major in t then x.
#[pyclass(frozen, name = "SurfaceMesh")]
struct PySurfaceMesh(mesh::SurfaceMesh);

#[pymethods]
impl PySurfaceMesh {
    #[getter]
    fn nx(&self) -> usize {
        self.0.grid.nx
    }
    #[getter]
    fn nt(&self) -> usize {
        self.0.grid.nt
    }
    #[getter]
    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.0.vertices.iter().map(|v| (v.y1, v.y2, v.y3)).collect()
    }
    #[getter(K)]
    fn k(&self) -> Vec<f64> {
        self.0.k.clone()
    }
    #[getter(H)]
    fn h(&self) -> Vec<f64> {
        self.0.h.clone()
    }
    #[getter]
    fn xi(&self) -> Vec<f64> {
        self.0.xi.clone()
    }
    #[getter]
    fn singular(&self) -> Vec<bool> {
        self.0.singular.clone()
    }
    fn faces(&self) -> Vec<[usize; 4]> {
        self.0.faces()
    }
    fn to_obj(&self) -> PyResult<String> {
        self.0.to_obj().map_err(err)
    }
    fn to_csv(&self) -> PyResult<String> {
        self.0.to_csv().map_err(err)
    }
    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }
    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyfunction]
fn u(x: f64, t: f64, params: &PySolitonParams) -> f64 {
    soliton::u(x, t, &params.0)
}

#[pyfunction]
fn xi(x: f64, t: f64, params: &PySolitonParams) -> f64 {
    soliton::xi(x, t, &params.0)
}

/// Closed-form `Φ` with the canonical constants, as nested lists of complex numbers.
#[pyfunction]
fn phi(x: f64, t: f64, params: &PySolitonParams) -> [[Complex64; 2]; 2] {
    let m = lax::phi(x, t, &params.0, &PhiConstants::canonical(&params.0));
    m.m
}

#[pyfunction]
fn phi_det_closed(params: &PySolitonParams) -> Complex64 {
    lax::phi_det_closed(&params.0, &PhiConstants::canonical(&params.0))
}

/// `max |U_t - V_x + [U,V]|` at a point.
#[pyfunction]
fn zero_curvature_residual(x: f64, t: f64, params: &PySolitonParams) -> f64 {
    lax::zero_curvature_residual(x, t, &params.0).max_abs()
}

/// `max(|Φ_x - UΦ|, |Φ_t - VΦ|)` at a point.
#[pyfunction]
#[pyo3(signature = (x, t, params, h = lax::LAX_FD_STEP))]
fn lax_residual(x: f64, t: f64, params: &PySolitonParams, h: f64) -> PyResult<f64> {
    let c = PhiConstants::canonical(&params.0);
    let (a, b) = lax::lax_residuals(x, t, &params.0, &c, h).map_err(err)?;
    Ok(a.max_abs().max(b.max_abs()))
}

/// `max |A_t - B_x + [A,V] + [U,B]|` for `spectral`, `spectral-gauge` or `symmetry-ux`.
#[pyfunction]
fn compatibility_residual(x: f64, t: f64, params: &PySolitonParams, kind: &str) -> PyResult<f64> {
    let r = deformation::ab_compatibility_residual(x, t, &params.0, deformation_kind(kind)?).map_err(err)?;
    Ok(r.max_abs())
}

/// `(K, H)` from the commutator normal of the deformation matrices.
#[pyfunction]
fn curvatures_from_ab(x: f64, t: f64, params: &PySolitonParams, kind: &str) -> PyResult<(f64, f64)> {
    let c = deformation::curvatures_from_ab(x, t, &params.0, deformation_kind(kind)?).map_err(err)?;
    Ok((c.k, c.h))
}

#[pyfunction]
#[pyo3(signature = (family_name, x, t, params, paper_literal = false))]
fn position(family_name: &str, x: f64, t: f64, params: &PySolitonParams, paper_literal: bool) -> PyResult<(f64, f64, f64)> {
    let y = immersion::position(family(family_name)?, x, t, &params.0, convention(paper_literal));
    Ok((y.y1, y.y2, y.y3))
}

/// Closed-form `(K, H)` of the `spectral3` or `spectralgauge4` surface.
#[pyfunction]
fn curvatures(family_name: &str, x: f64, t: f64, params: &PySolitonParams) -> PyResult<(f64, f64)> {
    let c = immersion::curvatures_closed(family(family_name)?, x, t, &params.0).map_err(err)?;
    Ok((c.k, c.h))
}

/// Normalized residuals of the corrected cubic, the printed cubic and (at k1 = 2λ) the quadratic.
#[pyfunction]
fn weingarten_residuals<'py>(py: Python<'py>, k: f64, h: f64, params: &PySolitonParams) -> PyResult<Bound<'py, PyDict>> {
    let w = immersion::weingarten_residuals(k, h, &params.0);
    let d = PyDict::new(py);
    d.set_item("cubic", w.cubic_rel())?;
    d.set_item("paper_cubic", w.paper_cubic_rel())?;
    d.set_item("paper_cubic_raw", w.paper_cubic)?;
    d.set_item("quadratic", w.quadratic_rel())?;
    Ok(d)
}

/// `(family, params, (x_min, x_max, t_min, t_max))` of a figure preset.
#[pyfunction]
fn preset(id: &str) -> PyResult<(String, PySolitonParams, (f64, f64, f64, f64))> {
    let p = immersion::preset(id.parse::<PresetId>().map_err(err)?);
    let ((x0, x1), (t0, t1)) = p.window();
    Ok((p.family.name().to_string(), PySolitonParams(p.params), (x0, x1, t0, t1)))
}

#[pyfunction]
fn preset_ids() -> Vec<&'static str> {
    PresetId::ALL.iter().map(|p| p.name()).collect()
}

#[pyfunction]
#[pyo3(signature = (family_name, params, window, nx = 101, nt = 101, paper_literal = false))]
fn generate(
    family_name: &str,
    params: &PySolitonParams,
    window: (f64, f64, f64, f64),
    nx: usize,
    nt: usize,
    paper_literal: bool,
) -> PyResult<PySurfaceMesh> {
    let grid = Grid::new((window.0, window.1), (window.2, window.3), nx, nt).map_err(err)?;
    mesh::generate(family(family_name)?, &params.0, &grid, convention(paper_literal))
        .map(PySurfaceMesh)
        .map_err(err)
}

/// Runs verification checks and returns the report as a dict.
///
/// `checks` is a comma-separated list or `"all"`; `tolerances` maps check names to values.
#[pyfunction]
#[pyo3(signature = (family_name, params, window, nx = 41, nt = 41, checks = "all", tolerances = None, fd_step = None, paper_literal = false))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    family_name: &str,
    params: &PySolitonParams,
    window: (f64, f64, f64, f64),
    nx: usize,
    nt: usize,
    checks: &str,
    tolerances: Option<BTreeMap<String, f64>>,
    fd_step: Option<f64>,
    paper_literal: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let grid = Grid::new((window.0, window.1), (window.2, window.3), nx, nt).map_err(err)?;
    let mut cfg = VerifyConfig::new(family(family_name)?, params.0, grid);
    cfg.convention = convention(paper_literal);
    cfg.fd_step = fd_step;
    for (name, tol) in tolerances.unwrap_or_default() {
        cfg.tolerances.insert(name.parse::<Check>().map_err(err)?, tol);
    }
    let list = parse_checks(checks).map_err(err)?;
    let report = mkdv_surface::verify(list.as_deref(), &cfg).map_err(err)?;
    json_to_py(py, &report.to_json())
}

/// Shape-equation residual of the degree-`n` polynomial family on the `λ = sign·k1/2` surface.
#[pyfunction]
#[pyo3(signature = (n, free, pressure, k1, lambda_sign, mu, grid_n = 41))]
fn shape_family_residual<'py>(
    py: Python<'py>,
    n: usize,
    free: BTreeMap<usize, f64>,
    pressure: f64,
    k1: f64,
    lambda_sign: f64,
    mu: f64,
    grid_n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = lagrangian::shape_grid(k1, grid_n).map_err(err)?;
    let stencil = mkdv_surface::diffgeo::Stencil::nested_default();
    let r = lagrangian::verify_family(n, &free, pressure, k1, lambda_sign, mu, &grid, &stencil).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("max", r.max_normalized)?;
    d.set_item("median", r.median_normalized)?;
    d.set_item("evaluated", r.evaluated)?;
    d.set_item("excluded", r.excluded)?;
    Ok(d)
}

/// Curvature statistics of the `u_x` symmetry surface on `[-a, a]²`.
#[pyfunction]
#[pyo3(signature = (params, half_width = 2.0, n = 41))]
fn sphere_check<'py>(py: Python<'py>, params: &PySolitonParams, half_width: f64, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let grid = Grid::square(half_width, n).map_err(err)?;
    let r = deformation::symmetry_sphere_check(&params.0, &grid).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("k_mean", r.k_mean)?;
    d.set_item("k_spread", r.k_spread)?;
    d.set_item("umbilic_defect", r.umbilic_defect)?;
    d.set_item("radius", r.radius_estimate)?;
    d.set_item("expected_radius", r.expected_radius)?;
    Ok(d)
}

#[pymodule]
fn mkdv_surface_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolitonParams>()?;
    m.add_class::<PySurfaceMesh>()?;
    m.add_function(wrap_pyfunction!(u, m)?)?;
    m.add_function(wrap_pyfunction!(xi, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(phi_det_closed, m)?)?;
    m.add_function(wrap_pyfunction!(zero_curvature_residual, m)?)?;
    m.add_function(wrap_pyfunction!(lax_residual, m)?)?;
    m.add_function(wrap_pyfunction!(compatibility_residual, m)?)?;
    m.add_function(wrap_pyfunction!(curvatures_from_ab, m)?)?;
    m.add_function(wrap_pyfunction!(position, m)?)?;
    m.add_function(wrap_pyfunction!(curvatures, m)?)?;
    m.add_function(wrap_pyfunction!(weingarten_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(preset_ids, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(shape_family_residual, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_check, m)?)?;
    Ok(())
}
