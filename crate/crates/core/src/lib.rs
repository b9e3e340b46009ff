//! Exact computations for complex structures on solvable Lie algebras,
//! their Lie algebra cohomology, invariant pseudo-Kähler forms, and
//! lattices in the corresponding solvable Lie groups.

pub mod catalog;
pub mod cohomology;
pub mod complex_structure;
pub mod coordinate;
pub mod io;
pub mod lattice;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod pseudo_kahler;
pub mod scalar;

pub use lie::{AdjointType, AlgebraForm, LieAlgebra, LieError};
pub use linalg::{Matrix, Subspace};
pub use poly::Poly;
pub use scalar::{Field, GaussianRational, Rational};

/// Default exact scalar type, the Gaussian rationals `Q(i)`.
pub type Scalar = GaussianRational;

/// Lie algebra with rational structure constants.
pub type LieAlgebraQ = LieAlgebra<Rational>;

/// Lie algebra over the default scalar type.
pub type LieAlgebraC = LieAlgebra<Scalar>;

/// Square matrix over the default scalar type.
pub type MatrixC = Matrix<Scalar>;
