//! Spectral graph theory of tree and forest counts under Barycentric
//! refinement: Kirchhoff determinants, tree/forest indices, density of
//! states, logarithmic potentials and spectral zeta functions.


pub mod barycentric;
pub mod complex;
pub mod dos;
pub mod error;
pub mod hodge;
pub mod indices;
pub mod operator;
pub mod oracle;
pub mod spectra;

pub use complex::{family, Family, SimplicialGraph};
pub use error::{Error, Result};
pub use operator::{FVector, OperatorKind, SymOperator};
