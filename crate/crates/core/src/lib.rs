//! Exact fourth-order Chern-Moser normal forms and the Chern-Moser-Weyl
//! tensor of real hypersurfaces in `ℂⁿ⁺¹`, with obstruction tests for
//! holomorphic embeddings into generalized spheres.

pub mod error;
pub mod hermitian;
pub mod hypersurfaces;
pub mod cmw;
pub mod linalg;
pub mod normalform;
pub mod polycore;

pub use error::{Error, Result};
pub use hermitian::{FischerSplit, HermitianMatrix, NullVector, Signature};
pub use polycore::{CRational, HoloPoly, RealPoly, Term, Truncation};
