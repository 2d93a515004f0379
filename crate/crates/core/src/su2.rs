//! Complex 2×2 matrices, the Pauli basis and the su(2) ↔ R³ correspondence.
//!
//! A vector `v ∈ R³` is identified with the traceless anti-Hermitian matrix
//! `i (v1 σ1 + v2 σ2 + v3 σ3)`. Under this map the inner product
//! `<X, Y> = -½ Re tr(XY)` is the Euclidean dot product and
//! `[X, Y]` corresponds to `-2 (v × w)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for su(2) membership (trace and anti-Hermiticity defect).
pub const SU2_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A complex 2×2 matrix, stored row-major.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct CMat2 {
    pub m: [[Complex64; 2]; 2],
}

impl fmt::Debug for CMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl CMat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    /// Matrix with real entries.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// `i (a σ1 + b σ2 + c σ3)`: the su(2) element with real coordinates (a, b, c).
    pub fn su2(a: f64, b: f64, c: f64) -> Self {
        // i(aσ1 + bσ2 + cσ3) = [[ic, ia + b], [ia - b, -ic]]
        Self::new(
            Complex64::new(0.0, c),
            Complex64::new(b, a),
            Complex64::new(-b, a),
            Complex64::new(0.0, -c),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        ))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::new(f(self.m[0][0]), f(self.m[0][1]), f(self.m[1][0]), f(self.m[1][1]))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }

    /// Combined trace and anti-Hermiticity defect; zero for exact su(2) elements.
    pub fn su2_defect(&self) -> f64 {
        let trace = self.trace().norm();
        let herm = (*self + self.dagger()).max_abs();
        trace.max(herm)
    }

    pub fn is_su2(&self, tol: f64) -> bool {
        self.su2_defect() <= tol
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, o: CMat2) -> CMat2 {
        CMat2::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl AddAssign for CMat2 {
    fn add_assign(&mut self, o: CMat2) {
        *self = *self + o;
    }
}

impl Sub for CMat2 {
    type Output = CMat2;
    fn sub(self, o: CMat2) -> CMat2 {
        self + (-o)
    }
}

impl Neg for CMat2 {
    type Output = CMat2;
    fn neg(self) -> CMat2 {
        self.map(|z| -z)
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, o: CMat2) -> CMat2 {
        let a = &self.m;
        let b = &o.m;
        CMat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<CMat2> for f64 {
    type Output = CMat2;
    fn mul(self, o: CMat2) -> CMat2 {
        o.scale(self)
    }
}

impl Mul<CMat2> for Complex64 {
    type Output = CMat2;
    fn mul(self, o: CMat2) -> CMat2 {
        o.scale_c(self)
    }
}

/// Pauli matrix `σ_k`, `k ∈ {1, 2, 3}`.
pub fn pauli(k: usize) -> Result<CMat2> {
    match k {
        1 => Ok(CMat2::new(ZERO, ONE, ONE, ZERO)),
        2 => Ok(CMat2::new(ZERO, -I, I, ZERO)),
        3 => Ok(CMat2::new(ONE, ZERO, ZERO, -ONE)),
        _ => Err(Error::PauliIndex(k)),
    }
}

pub(crate) fn sigma1() -> CMat2 {
    CMat2::new(ZERO, ONE, ONE, ZERO)
}

pub(crate) fn sigma2() -> CMat2 {
    CMat2::new(ZERO, -I, I, ZERO)
}

pub(crate) fn sigma3() -> CMat2 {
    CMat2::new(ONE, ZERO, ZERO, -ONE)
}

/// `XY - YX`.
pub fn commutator(x: &CMat2, y: &CMat2) -> CMat2 {
    *x * *y - *y * *x
}

/// `<X, Y> = -½ Re tr(XY)`.
pub fn su2_inner(x: &CMat2, y: &CMat2) -> f64 {
    -0.5 * (*x * *y).trace().re
}

/// Like [`su2_inner`], but rejects inputs whose `tr(XY)` has an imaginary part
/// above `1e-12`, which cannot happen for genuine su(2) arguments.
pub fn su2_inner_checked(x: &CMat2, y: &CMat2) -> Result<f64> {
    let tr = (*x * *y).trace();
    if tr.im.abs() >= 1e-12 {
        return Err(Error::NotSu2 { defect: tr.im.abs() });
    }
    Ok(-0.5 * tr.re)
}

/// `||X|| = sqrt(|<X, X>|)`.
pub fn su2_norm(x: &CMat2) -> f64 {
    su2_inner(x, x).abs().sqrt()
}

/// A point or tangent vector in R³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl Vec3 {
    pub const fn new(y1: f64, y2: f64, y3: f64) -> Self {
        Self { y1, y2, y3 }
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.y1 * o.y1 + self.y2 * o.y2 + self.y3 * o.y3
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(
            self.y2 * o.y3 - self.y3 * o.y2,
            self.y3 * o.y1 - self.y1 * o.y3,
            self.y1 * o.y2 - self.y2 * o.y1,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3::new(self.y1 * s, self.y2 * s, self.y3 * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.y1.abs().max(self.y2.abs()).max(self.y3.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.y1.is_finite() && self.y2.is_finite() && self.y3.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.y1, self.y2, self.y3]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y1 + o.y1, self.y2 + o.y2, self.y3 + o.y3)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y1 - o.y1, self.y2 - o.y2, self.y3 - o.y3)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v.scale(self)
    }
}

/// `v ↦ i Σ v_k σ_k`.
pub fn vec_to_su2(v: &Vec3) -> CMat2 {
    CMat2::su2(v.y1, v.y2, v.y3)
}

/// Inverse of [`vec_to_su2`]; fails when `f` is not su(2)-valued within [`SU2_TOL`].
pub fn su2_to_vec(f: &CMat2) -> Result<Vec3> {
    let defect = f.su2_defect();
    if defect > SU2_TOL {
        return Err(Error::NotSu2 { defect });
    }
    Ok(su2_coords(f))
}

/// Coordinates `tr(F σ_k) / 2i` without the membership check.
pub(crate) fn su2_coords(f: &CMat2) -> Vec3 {
    let m = &f.m;
    // F = [[ic, ia + b], [ia - b, -ic]]
    let c = 0.5 * (m[0][0].im - m[1][1].im);
    let a = 0.5 * (m[0][1].im + m[1][0].im);
    let b = 0.5 * (m[0][1].re - m[1][0].re);
    Vec3::new(a, b, c)
}
