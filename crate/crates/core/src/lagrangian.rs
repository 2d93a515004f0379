//! Polynomial curvature Lagrangians `ℰ(H, K) = Σ_n H^n Σ_l a_{nl} K^l` and the
//! coefficient families that make the `λ = ±k1/2` spectral surfaces solve the shape equation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diffgeo::{self, ClosedFormSurface, Stencil};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::immersion::Family;
use crate::soliton::SolitonParams;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyLagrangian {
    degree: usize,
    coeffs: BTreeMap<(usize, usize), f64>,
    pressure: f64,
}

impl PolyLagrangian {
    pub fn new(degree: usize, pressure: f64) -> Self {
        Self { degree, coeffs: BTreeMap::new(), pressure }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    /// Sets the coefficient of `H^n K^l`.
    pub fn set(&mut self, n: usize, l: usize, a: f64) -> Result<()> {
        if n + 2 * l > self.degree {
            return Err(Error::InvalidLagrangian(format!(
                "monomial H^{n} K^{l} exceeds degree {}",
                self.degree
            )));
        }
        if !a.is_finite() {
            return Err(Error::InvalidLagrangian(format!("coefficient of H^{n} K^{l} is {a}")));
        }
        self.coeffs.insert((n, l), a);
        Ok(())
    }

    pub fn with(mut self, n: usize, l: usize, a: f64) -> Result<Self> {
        self.set(n, l, a)?;
        Ok(self)
    }

    pub fn get(&self, n: usize, l: usize) -> f64 {
        self.coeffs.get(&(n, l)).copied().unwrap_or(0.0)
    }

    pub fn monomials(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    /// `ℰ` and `p` multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * s)).collect(),
            pressure: self.pressure * s,
        }
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.degree + 1]; self.degree / 2 + 1];
        for (&(n, l), &a) in &self.coeffs {
            rows[l][n] = a;
        }
        rows
    }

    pub fn eval(&self, h: f64, k: f64) -> f64 {
        horner(&self.rows().iter().map(|r| horner(r, h)).collect::<Vec<_>>(), k)
    }

    pub fn d_h(&self, h: f64, k: f64) -> f64 {
        let per_l: Vec<f64> = self.rows().iter().map(|r| horner(&derivative(r), h)).collect();
        horner(&per_l, k)
    }

    pub fn d_k(&self, h: f64, k: f64) -> f64 {
        let per_l: Vec<f64> = self.rows().iter().map(|r| horner(r, h)).collect();
        horner(&derivative(&per_l), k)
    }
}

fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * z + a)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a).collect()
}

/// `(n, l)` of the flat coefficients `a_1, a_2, …` in the printed monomial order.
pub fn monomial_map(n: usize) -> Result<&'static [(usize, usize)]> {
    const N3: [(usize, usize); 6] = [(3, 0), (2, 0), (1, 0), (0, 0), (0, 1), (1, 1)];
    const N4: [(usize, usize); 9] =
        [(4, 0), (3, 0), (2, 0), (1, 0), (0, 0), (0, 1), (1, 1), (0, 2), (2, 1)];
    const N5: [(usize, usize); 12] = [
        (5, 0),
        (4, 0),
        (3, 0),
        (2, 0),
        (1, 0),
        (0, 0),
        (0, 1),
        (1, 1),
        (0, 2),
        (2, 1),
        (1, 2),
        (3, 1),
    ];
    const N6: [(usize, usize); 16] = [
        (6, 0),
        (5, 0),
        (4, 0),
        (3, 0),
        (2, 0),
        (1, 0),
        (0, 0),
        (0, 1),
        (1, 1),
        (0, 2),
        (2, 1),
        (1, 2),
        (3, 1),
        (0, 3),
        (2, 2),
        (4, 1),
    ];
    match n {
        3 => Ok(&N3),
        4 => Ok(&N4),
        5 => Ok(&N5),
        6 => Ok(&N6),
        _ => Err(Error::InvalidLagrangian(format!("degree must be 3..=6 (got {n})"))),
    }
}

/// 1-based flat indices left free by each family.
pub fn free_indices(n: usize) -> Result<&'static [usize]> {
    match n {
        3 => Ok(&[5]),
        4 => Ok(&[1, 6, 8]),
        5 => Ok(&[1, 2, 7, 9, 11]),
        6 => Ok(&[1, 2, 3, 8, 10, 12, 14, 16]),
        _ => Err(Error::InvalidLagrangian(format!("degree must be 3..=6 (got {n})"))),
    }
}

/// 1-based flat indices fixed by each family's relations.
pub fn constrained_indices(n: usize) -> Result<Vec<usize>> {
    let free = free_indices(n)?;
    Ok((1..=monomial_map(n)?.len()).filter(|i| !free.contains(i)).collect())
}

/// Flat coefficients `a_1, a_2, …` of a Lagrangian of degree 3..=6.
pub fn flat_coefficients(l: &PolyLagrangian) -> Result<Vec<f64>> {
    Ok(monomial_map(l.degree)?.iter().map(|&(n, k)| l.get(n, k)).collect())
}

/// Builds a Lagrangian from flat coefficients in the printed order.
pub fn from_flat(degree: usize, a: &[f64], pressure: f64) -> Result<PolyLagrangian> {
    let map = monomial_map(degree)?;
    if a.len() != map.len() {
        return Err(Error::InvalidLagrangian(format!(
            "degree {degree} needs {} coefficients (got {})",
            map.len(),
            a.len()
        )));
    }
    let mut l = PolyLagrangian::new(degree, pressure);
    for (&(n, k), &v) in map.iter().zip(a) {
        l.set(n, k, v)?;
    }
    Ok(l)
}

/// The Lagrangian family of degree `n` whose shape equation is solved by the spectral
/// surfaces with `α = λ²`. `free` maps 1-based flat indices to values; missing entries are 0.
pub fn example1_family(
    n: usize,
    free: &BTreeMap<usize, f64>,
    p: f64,
    lambda: f64,
    mu: f64,
) -> Result<PolyLagrangian> {
    if lambda == 0.0 || mu == 0.0 {
        return Err(Error::InvalidLagrangian("the family needs lambda != 0 and mu != 0".into()));
    }
    let allowed = free_indices(n)?;
    if let Some(bad) = free.keys().find(|i| !allowed.contains(i)) {
        return Err(Error::InvalidLagrangian(format!(
            "a_{bad} is not a free coefficient for degree {n}"
        )));
    }
    let f = |i: usize| free.get(&i).copied().unwrap_or(0.0);
    let l2 = lambda * lambda;
    let (l4, l6) = (l2 * l2, l2 * l2 * l2);
    let m2 = mu * mu;
    let (m4, m6) = (m2 * m2, m2 * m2 * m2);
    let mut a = vec![0.0; monomial_map(n)?.len() + 1];
    for &i in allowed {
        a[i] = f(i);
    }
    match n {
        3 => {
            a[1] = -p * m4 / (72.0 * l4);
            a[6] = p * m4 / (32.0 * l4);
        }
        4 => {
            let (a1, a8) = (a[1], a[8]);
            a[2] = -p * m4 / (72.0 * l4);
            a[3] = -8.0 * l2 / (15.0 * m2) * (27.0 * a1 - 8.0 * a8);
            a[4] = 0.0;
            a[5] = l4 / (5.0 * m4) * (81.0 * a1 + 16.0 * a8);
            a[7] = p * m4 / (32.0 * l4);
            a[9] = -(189.0 * a1 + 64.0 * a8) / 120.0;
        }
        5 => {
            let (a1, a2, a9, a11) = (a[1], a[2], a[9], a[11]);
            a[3] = -(l6 * (4212.0 * a1 + 256.0 * a11) + 7.0 * p * m6) / (504.0 * m2 * l4);
            a[4] = -8.0 * l2 / (15.0 * m2) * (27.0 * a2 - 8.0 * a9);
            a[5] = 6.0 * l4 / (7.0 * m4) * (135.0 * a1 - 88.0 * a11);
            a[6] = l4 / (5.0 * m4) * (81.0 * a2 + 16.0 * a9);
            a[8] = (l6 * (-324.0 * a1 + 512.0 * a11) + p * m6) / (32.0 * m2 * l4);
            a[10] = -(189.0 * a2 + 64.0 * a9) / 120.0;
            a[12] = -(1053.0 * a1 + 512.0 * a11) / 756.0;
        }
        6 => {
            let (a1, a2, a3, a10, a12, a14, a16) = (a[1], a[2], a[3], a[10], a[12], a[14], a[16]);
            a[4] = -(l6 * (4212.0 * a2 + 256.0 * a12) + 7.0 * p * m6) / (504.0 * m2 * l4);
            a[5] = -l4 / (900.0 * m4) * (-359397.0 * a1 + 191488.0 * a14 - 203472.0 * a16)
                - 8.0 * l2 / (15.0 * m2) * (27.0 * a3 - 8.0 * a10);
            a[6] = 6.0 * l4 / (7.0 * m4) * (135.0 * a2 - 88.0 * a12);
            a[7] = l6 / (25.0 * m6) * (29889.0 * a1 - 9856.0 * a14 + 11664.0 * a16)
                + l4 / (5.0 * m4) * (81.0 * a3 + 16.0 * a10);
            a[9] = (l6 * (-324.0 * a2 + 512.0 * a12) + p * m6) / (32.0 * m2 * l4);
            a[11] = -l2 / (1800.0 * m2) * (59778.0 * a1 - 13312.0 * a14 + 23328.0 * a16)
                - (189.0 * a3 + 64.0 * a10) / 120.0;
            a[13] = -(1053.0 * a2 + 512.0 * a12) / 756.0;
            a[15] = -(5103.0 * a1 + 2048.0 * a14 + 3888.0 * a16) / 2880.0;
        }
        _ => unreachable!("degree validated by free_indices"),
    }
    from_flat(n, &a[1..], p)
}

/// Perturbation used by the sensitivity control: `×1.1`, or `+0.1` for a zero coefficient.
pub fn perturbed(l: &PolyLagrangian, index: usize) -> Result<PolyLagrangian> {
    let mut a = flat_coefficients(l)?;
    let slot = a
        .get_mut(index.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidLagrangian(format!("no coefficient a_{index}")))?;
    *slot = if *slot == 0.0 { 0.1 } else { *slot * 1.1 };
    from_flat(l.degree, &a, l.pressure)
}

/// `x ∈ ±0.999/|ξ_x|`, `t ∈ ±0.999/|ξ_t|`: an `n` × `n` grid inside `|ξ| < 2`.
pub fn shape_grid(k1: f64, n: usize) -> Result<Grid> {
    let xi_x = 0.5 * k1.abs();
    let xi_t = k1.abs().powi(3) / 8.0;
    let (wx, wt) = (0.999 / xi_x, 0.999 / xi_t);
    Grid::new((-wx, wx), (-wt, wt), n, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub max_normalized: f64,
    pub median_normalized: f64,
    pub evaluated: usize,
    /// Points dropped by the near-parabolic filter.
    pub excluded: usize,
}

/// Normalized shape-equation residual of `lag` over the spectral surface `(k1, λ, μ)`.
pub fn verify_lagrangian(
    lag: &PolyLagrangian,
    p: &SolitonParams,
    grid: &Grid,
    stencil: &Stencil,
) -> Result<FamilyReport> {
    let surface = ClosedFormSurface::new(Family::Spectral3, *p);
    let mut vals = Vec::with_capacity(grid.len());
    let mut excluded = 0;
    for (x, t) in grid.points() {
        if diffgeo::near_parabolic(&diffgeo::SurfaceFields::forms(&surface, x, t)?) {
            excluded += 1;
            continue;
        }
        match diffgeo::shape_equation_residual(&surface, lag, x, t, stencil) {
            Ok(r) => vals.push(r.normalized()),
            Err(Error::SingularSecondForm { .. }) => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(summarize(vals, excluded))
}

pub(crate) fn summarize(mut vals: Vec<f64>, excluded: usize) -> FamilyReport {
    vals.sort_by(f64::total_cmp);
    let median = if vals.is_empty() { 0.0 } else { vals[vals.len() / 2] };
    FamilyReport {
        max_normalized: vals.last().copied().unwrap_or(0.0),
        median_normalized: median,
        evaluated: vals.len(),
        excluded,
    }
}

/// Builds the degree-`n` family on the surface `(k1, λ = sign·k1/2, μ)` and verifies it.
pub fn verify_family(
    n: usize,
    free: &BTreeMap<usize, f64>,
    pressure: f64,
    k1: f64,
    lambda_sign: f64,
    mu: f64,
    grid: &Grid,
    stencil: &Stencil,
) -> Result<FamilyReport> {
    let lambda = 0.5 * k1 * lambda_sign.signum();
    let p = SolitonParams::spectral(k1, lambda, mu)?;
    let lag = example1_family(n, free, pressure, lambda, mu)?;
    verify_lagrangian(&lag, &p, grid, stencil)
}
