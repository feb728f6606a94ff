//! Principal eigenvalues of `-(e^{αm}φ')' = λ m e^{αm} φ` on `(0,1)` with
//! Robin, Neumann or Dirichlet ends, and the optimal placement of the
//! favourable region `{m = κ}` under a mass constraint.
//!
//! The finite element solver lives in [`eigensolve`], the closed forms for
//! interval weights in [`transcend`], rearrangements in [`rearrange`] and the
//! design searches in [`optimize`]. [`cli`] backs the `drift-design` binary.

pub mod cli;
pub mod eigensolve;
pub mod error;
pub mod optimize;
pub mod output;
pub mod random;
pub mod rearrange;
pub mod transcend;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
