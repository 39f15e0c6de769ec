//! Small dense linear algebra and stochastic utilities.
//!
//! Everything here is sized for the estimation problem at hand: symmetric
//! matrices of dimension at most a few tens, one-dimensional integrals of
//! radial kernel profiles, and a seedable random source whose streams are
//! reproducible bit for bit. No external linear-algebra backend is used;
//! a cyclic Jacobi eigensolver is accurate and fast at these sizes.

mod quad;
mod random;
mod sym_matrix;

pub use quad::quad_1d;
pub use random::RandomSource;
pub use sym_matrix::{min_eigenvalue, pseudo_inverse, Eigen, SymMatrix};

pub(crate) use sym_matrix::{solve_psd_first_column, PsdSolveWorkspace, DEFAULT_PINV_CUTOFF};
