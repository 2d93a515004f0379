use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular `(x, t)` sampling grid, `nx` × `nt` nodes including the edges.
///
/// Points are ordered row-major in t then x: index `it * nx + ix`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub nx: usize,
    pub nt: usize,
}

impl Grid {
    pub fn new(x: (f64, f64), t: (f64, f64), nx: usize, nt: usize) -> Result<Self> {
        let g = Self { x_min: x.0, x_max: x.1, t_min: t.0, t_max: t.1, nx, nt };
        g.validate()?;
        Ok(g)
    }

    /// `[-a, a]²` with `n` nodes per side.
    pub fn square(a: f64, n: usize) -> Result<Self> {
        Self::new((-a, a), (-a, a), n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.nt < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes per axis (got {}x{})",
                self.nx, self.nt
            )));
        }
        let bounds = [self.x_min, self.x_max, self.t_min, self.t_max];
        if bounds.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if !(self.x_min < self.x_max && self.t_min < self.t_max) {
            return Err(Error::InvalidGrid("bounds must satisfy min < max".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, ix: usize) -> f64 {
        lerp(self.x_min, self.x_max, ix, self.nx)
    }

    pub fn t(&self, it: usize) -> f64 {
        lerp(self.t_min, self.t_max, it, self.nt)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.nt).flat_map(move |it| (0..self.nx).map(move |ix| (self.x(ix), self.t(it))))
    }
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_edges() {
        let g = Grid::new((-1.0, 1.0), (0.0, 3.0), 3, 2).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], (-1.0, 0.0));
        assert_eq!(pts[2], (1.0, 0.0));
        assert_eq!(pts[3], (-1.0, 3.0));
        assert_eq!(pts[4], (0.0, 3.0));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::square(1.0, 1).is_err());
        assert!(Grid::new((1.0, 1.0), (0.0, 1.0), 2, 2).is_err());
        assert!(Grid::new((0.0, f64::NAN), (0.0, 1.0), 2, 2).is_err());
    }
}
