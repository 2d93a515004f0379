//! Sampled surfaces and their OBJ, CSV and JSON exports.
//!
//! Vertices are stored row-major in t then x (index `it * nx + ix`), matching [`Grid::points`].

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::immersion::{self, Convention, Family, Preset};
use crate::soliton::{self, SolitonParams};
use crate::su2::Vec3;

pub const REPORT_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "x,t,y1,y2,y3,K,H,singular";

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub family: Family,
    pub params: SolitonParams,
    pub convention: Convention,
    pub grid: Grid,
    pub vertices: Vec<Vec3>,
    /// Closed-form curvatures; NaN at singular vertices.
    pub k: Vec<f64>,
    pub h: Vec<f64>,
    pub xi: Vec<f64>,
    /// Set where the closed-form curvatures have a pole or any value is non-finite.
    pub singular: Vec<bool>,
}

/// Samples the immersion and its closed-form curvatures on `grid`.
pub fn generate(
    family: Family,
    params: &SolitonParams,
    grid: &Grid,
    convention: Convention,
) -> Result<SurfaceMesh> {
    grid.validate()?;
    let n = grid.len();
    let mut m = SurfaceMesh {
        family,
        params: *params,
        convention,
        grid: *grid,
        vertices: Vec::with_capacity(n),
        k: Vec::with_capacity(n),
        h: Vec::with_capacity(n),
        xi: Vec::with_capacity(n),
        singular: Vec::with_capacity(n),
    };
    for (x, t) in grid.points() {
        let y = immersion::position(family, x, t, params, convention);
        let (k, h, bad) = match immersion::curvatures_closed(family, x, t, params) {
            Ok(c) if c.k.is_finite() && c.h.is_finite() => (c.k, c.h, false),
            _ => (f64::NAN, f64::NAN, true),
        };
        m.vertices.push(y);
        m.k.push(k);
        m.h.push(h);
        m.xi.push(soliton::xi(x, t, params));
        m.singular.push(bad || !y.is_finite());
    }
    Ok(m)
}

pub fn generate_preset(preset: &Preset, nx: usize, nt: usize, convention: Convention) -> Result<SurfaceMesh> {
    generate(preset.family, &preset.params, &preset.grid(nx, nt)?, convention)
}

impl SurfaceMesh {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn singular_count(&self) -> usize {
        self.singular.iter().filter(|s| **s).count()
    }

    /// 1-based quads `(a, b, d, c)` for each grid cell whose corners all have finite positions.
    pub fn faces(&self) -> Vec<[usize; 4]> {
        let (nx, nt) = (self.grid.nx, self.grid.nt);
        let mut out = Vec::with_capacity((nx - 1) * (nt - 1));
        for it in 0..nt - 1 {
            for ix in 0..nx - 1 {
                let a = it * nx + ix;
                let quad = [a, a + 1, a + nx + 1, a + nx];
                if quad.iter().all(|&i| self.vertices[i].is_finite()) {
                    out.push(quad.map(|i| i + 1));
                }
            }
        }
        out
    }

    pub fn to_obj(&self) -> Result<String> {
        if self.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let mut s = String::new();
        writeln!(
            s,
            "# {} k1={} lambda={} mu={} nu={} grid {}x{}",
            self.family,
            self.params.k1(),
            self.params.lambda(),
            self.params.mu(),
            self.params.nu(),
            self.grid.nx,
            self.grid.nt
        )
        .unwrap();
        for v in &self.vertices {
            // non-finite vertices are kept as placeholders so indices stay aligned
            let v = if v.is_finite() { *v } else { Vec3::new(0.0, 0.0, 0.0) };
            writeln!(s, "v {:.15e} {:.15e} {:.15e}", v.y1, v.y2, v.y3).unwrap();
        }
        for [a, b, c, d] in self.faces() {
            writeln!(s, "f {a} {b} {c} {d}").unwrap();
        }
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        if self.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for ((i, (x, t)), v) in self.grid.points().enumerate().zip(&self.vertices) {
            writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                x,
                t,
                v.y1,
                v.y2,
                v.y3,
                self.k[i],
                self.h[i],
                u8::from(self.singular[i])
            )
            .unwrap();
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        if self.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let finite = |v: f64| v.is_finite().then_some(v);
        let doc = MeshJson {
            report_version: REPORT_VERSION,
            kind: "mesh",
            family: self.family.name(),
            params: ParamsJson::from(&self.params),
            convention: self.convention,
            grid: self.grid,
            vertices: self.vertices.iter().map(|v| v.to_array().map(finite)).collect(),
            k: self.k.iter().copied().map(finite).collect(),
            h: self.h.iter().copied().map(finite).collect(),
            xi: self.xi.clone(),
            singular: self.singular.clone(),
            faces: self.faces(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn export(&self, format: ExportFormat) -> Result<String> {
        match format {
            ExportFormat::Obj => self.to_obj(),
            ExportFormat::Csv => self.to_csv(),
            ExportFormat::Json => self.to_json(),
        }
    }

    pub fn write_to(&self, format: ExportFormat, w: &mut impl Write) -> Result<()> {
        w.write_all(self.export(format)?.as_bytes())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Obj,
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(Self::Obj),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Parse(format!("unknown export format '{s}' (obj, csv, json)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct ParamsJson {
    k1: f64,
    lambda: f64,
    mu: f64,
    nu: f64,
    alpha: f64,
}

impl From<&SolitonParams> for ParamsJson {
    fn from(p: &SolitonParams) -> Self {
        Self { k1: p.k1(), lambda: p.lambda(), mu: p.mu(), nu: p.nu(), alpha: p.alpha() }
    }
}

#[derive(Serialize)]
struct MeshJson {
    report_version: u32,
    kind: &'static str,
    family: &'static str,
    params: ParamsJson,
    convention: Convention,
    grid: Grid,
    vertices: Vec<[Option<f64>; 3]>,
    k: Vec<Option<f64>>,
    h: Vec<Option<f64>>,
    xi: Vec<f64>,
    singular: Vec<bool>,
    faces: Vec<[usize; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub x: f64,
    pub t: f64,
    pub y: Vec3,
    pub k: f64,
    pub h: f64,
    pub singular: bool,
}

pub fn read_csv(r: impl BufRead) -> Result<Vec<CsvRow>> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))??;
    if header.trim() != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header '{header}'")));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::Parse(format!("line {}: expected 8 fields", n + 2)));
        }
        let num = |i: usize| {
            f[i].trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))
        };
        rows.push(CsvRow {
            x: num(0)?,
            t: num(1)?,
            y: Vec3::new(num(2)?, num(3)?, num(4)?),
            k: num(5)?,
            h: num(6)?,
            singular: match f[7].trim() {
                "0" => false,
                "1" => true,
                other => return Err(Error::Parse(format!("line {}: bad flag '{other}'", n + 2))),
            },
        });
    }
    Ok(rows)
}
