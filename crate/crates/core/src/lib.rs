//! Exact computations on the level-1 lattice construction of the affine
//! algebra A1(1): truncated bivariate q-series, the Fock space `V_P` with its
//! vertex operators, the principal subspaces `W(Λ0)`, `W(Λ1)` and the
//! polynomial model `C[y_{-1}, y_{-2}, ...]` of their defining relations.
//!
//! Everything is computed over arbitrary-precision rationals. Gradings by
//! charge (half-integers) and weight (quarter-integers) are stored on an
//! integer grid as `charge2 = 2 * charge` and `weight4 = 4 * weight`.

pub mod error;
pub mod fock;
pub mod ideal;
pub mod identities;
pub mod linalg;
pub mod partitions;
pub mod principal;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use fock::{BasisState, FockVector, LatticePoint};
pub use ideal::{YMonomial, YPolynomial};
pub use linalg::{Matrix, RowEchelon};
pub use principal::{Check, ComponentProvider, GradedComponentBasis, Label, MemoProvider};
pub use rational::Rational;
pub use series::{Bidegree, BivariateSeries};

/// Version tag baked into cache keys and reports.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
