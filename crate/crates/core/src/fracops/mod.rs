//! Operator layer: n-th level derivative specs and their symbolic action on
//! power sums, kernels, degeneracy reduction, projectors and Abel solving.

mod abel;
mod derivative;
mod projector;
mod spec;

pub use abel::abel_solve;
pub(crate) use derivative::order;
pub use derivative::{
    apply_derivative, caputo_rl_relation_check, fundamental_theorem_residual, kernel_basis,
    KernelBasis,
};
pub use projector::{projector_closed_form, projector_direct, KernelComponent, ProjectorResult};
pub use spec::{classify, named_spec, DerivativeSpec, NamedKind, Reduction, SpecClass, PARAM_TOL};
