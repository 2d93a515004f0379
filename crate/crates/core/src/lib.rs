//! Surfaces generated from the one-soliton solution of the modified KdV equation through
//! its Lax pair, with the geometry and verification tools used to check them.

pub mod deformation;
pub mod diffgeo;
pub mod error;
pub(crate) mod fd;
pub mod grid;
pub mod immersion;
pub mod lagrangian;
pub mod lax;
pub mod mesh;
pub mod soliton;
pub mod su2;
pub mod verify;

pub use error::{Error, Result};
pub use grid::Grid;
pub use immersion::{preset, Convention, Family, PresetId};
pub use mesh::{generate, ExportFormat, SurfaceMesh};
pub use soliton::SolitonParams;
pub use su2::{CMat2, Vec3};
pub use verify::{verify, Check, VerificationReport, VerifyConfig};
