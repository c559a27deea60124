// Negated float comparisons are how NaN gets rejected; long literals are
// published coefficient tables.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod fracops;
pub mod laplace;
pub mod numgrid;
pub mod poweralg;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
pub use fracops::DerivativeSpec;
pub use poweralg::{PowerSum, PowerTerm, ValueAtZero};
