//! Exact computations with finite-dimensional quadratic quiver algebras.

pub mod algebra;
pub mod error;
pub mod invariants;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod modules;
pub mod presentation;
pub mod presets;
pub mod report;
pub mod scalar;
pub mod series;
pub mod sparse;
pub mod verify;

pub use algebra::{AlgebraElement, GradedAlgebra};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use presentation::{Quiver, QuadraticPresentation, Relation, Weight};
pub use scalar::{Field, Scalar};
pub use series::{Poly, PolyMatrix, SeriesMatrix};
