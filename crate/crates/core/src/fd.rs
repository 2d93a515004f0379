//! Central differences over any value that forms a real vector space.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::su2::{CMat2, Vec3};

pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn scaled(self, s: f64) -> Self;
}

impl Linear for f64 {
    fn scaled(self, s: f64) -> Self {
        self * s
    }
}

impl Linear for Complex64 {
    fn scaled(self, s: f64) -> Self {
        self * s
    }
}

impl Linear for CMat2 {
    fn scaled(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Linear for Vec3 {
    fn scaled(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// First derivative at 0 of `f(s)`; order 2 or 4 central stencil.
pub fn d1<T: Linear>(f: impl Fn(f64) -> T, h: f64, order: u8) -> T {
    match order {
        4 => {
            // (-f(2h) + 8f(h) - 8f(-h) + f(-2h)) / 12h
            let a = f(h) - f(-h);
            let b = f(2.0 * h) - f(-2.0 * h);
            (a.scaled(8.0) - b).scaled(1.0 / (12.0 * h))
        }
        _ => (f(h) - f(-h)).scaled(0.5 / h),
    }
}

/// Second derivative at 0 of `f(s)`; order 2 or 4 central stencil.
pub fn d2<T: Linear>(f: impl Fn(f64) -> T, h: f64, order: u8) -> T {
    let c = f(0.0);
    match order {
        4 => {
            // (-f(2h) + 16f(h) - 30f(0) + 16f(-h) - f(-2h)) / 12h²
            let near = f(h) + f(-h);
            let far = f(2.0 * h) + f(-2.0 * h);
            (near.scaled(16.0) - far - c.scaled(30.0)).scaled(1.0 / (12.0 * h * h))
        }
        _ => (f(h) + f(-h) - c.scaled(2.0)).scaled(1.0 / (h * h)),
    }
}

/// One Richardson level for an estimate with leading error `O(h^order)`.
pub fn richardson<T: Linear>(estimate: impl Fn(f64) -> T, h: f64, order: i32) -> T {
    let coarse = estimate(h);
    let fine = estimate(0.5 * h);
    let w = 2f64.powi(order);
    (fine.scaled(w) - coarse).scaled(1.0 / (w - 1.0))
}

/// Mixed second derivative `∂²f/∂a∂b` at the origin from the four diagonal points.
pub fn d_mixed<T: Linear>(f: impl Fn(f64, f64) -> T, ha: f64, hb: f64, order: u8) -> T {
    match order {
        4 => {
            // apply the order-4 first-derivative stencil in each direction
            let inner = |a: f64| d1(|b| f(a, b), hb, 4);
            d1(inner, ha, 4)
        }
        _ => {
            let v = f(ha, hb) - f(ha, -hb) - f(-ha, hb) + f(-ha, -hb);
            v.scaled(1.0 / (4.0 * ha * hb))
        }
    }
}
