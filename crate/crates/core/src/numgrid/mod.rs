//! Uniform-grid numerics: product-trapezoidal Riemann–Liouville integral,
//! Grünwald–Letnikov derivative, composed n-th level chains and
//! convergence studies against the symbolic results.

mod convergence;
mod derivative;
mod grid;
mod weights;

pub use convergence::{
    convergence_csv, convergence_study, ConvergenceRow, GridOperator, BOUNDARY_LAYER, EXACT_ERROR,
};
pub use derivative::{differentiate, gl_derivative, gl_weights, nth_level_derivative_numeric};
pub use grid::{sample, GridFunction};
pub use weights::{rl_integral_numeric, semigroup_residual_numeric, QuadratureWeights};
