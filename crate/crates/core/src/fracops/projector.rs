use serde::Serialize;

use super::derivative::{apply_derivative, kernel_basis, order};
use super::spec::{classify, DerivativeSpec};
use crate::error::{Error, Result};
use crate::poweralg::{
    rl_integral, value_at_zero, weak_derivative, PowerSum, PowerTerm, EXPONENT_MERGE_TOL,
};
use crate::specialfn::gamma;

/// Coefficient of one kernel monomial in a projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelComponent {
    pub coeff: f64,
    pub exp: f64,
}

/// `P f = (Id - I^α D) f` expressed in the kernel basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorResult {
    /// One entry per kernel basis exponent, in basis order.
    pub components: Vec<KernelComponent>,
    /// Largest coefficient of `P f` outside the kernel span (round-off only).
    pub off_kernel: f64,
}

impl ProjectorResult {
    pub fn to_power_sum(&self) -> PowerSum {
        PowerSum::canonical(
            self.components
                .iter()
                .map(|c| PowerTerm {
                    coeff: c.coeff,
                    exp: c.exp,
                })
                .collect(),
        )
    }

    /// Largest coefficient difference between two projections.
    pub fn max_abs_difference(&self, other: &ProjectorResult) -> f64 {
        self.to_power_sum()
            .max_abs_difference(&other.to_power_sum())
    }
}

/// Projector computed as `f - I^α D f` and split over the kernel basis.
pub fn projector_direct(spec: &DerivativeSpec, f: &PowerSum) -> Result<ProjectorResult> {
    let derivative = apply_derivative(spec, f)?;
    let restored = rl_integral(spec.alpha(), &derivative)?;
    let projected = f - &restored;
    let kernel = kernel_basis(spec);
    let components: Vec<KernelComponent> = kernel
        .exponents
        .iter()
        .map(|&exp| KernelComponent {
            coeff: projected.coeff_of(exp),
            exp,
        })
        .collect();
    let off_kernel = projected
        .terms()
        .iter()
        .filter(|t| {
            !kernel
                .exponents
                .iter()
                .any(|&e| (t.exp - e).abs() < EXPONENT_MERGE_TOL)
        })
        .fold(0.0f64, |m, t| m.max(t.coeff.abs()));
    Ok(ProjectorResult {
        components,
        off_kernel,
    })
}

fn boundary_value(f: &PowerSum, what: &str) -> Result<f64> {
    value_at_zero(f)
        .finite()
        .ok_or_else(|| Error::domain(format!("{what} is unbounded at 0")))
}

/// Closed-form projector for specs whose reduced level is at most two.
///
/// Level 2: `p₁ x^{α+γ₁-1} + p₂ x^{α+γ₁+γ₂-2}` with
/// `p₁ = (I^{γ₂} d/dx I^{2-α-γ₁-γ₂} f)(0) / Γ(α+γ₁)` and
/// `p₂ = (I^{2-α-γ₁-γ₂} f)(0) / Γ(α+γ₁+γ₂-1)`.
/// Level 1 (Hilfer type `γ₁`): `(I^{1-α-γ₁} f)(0) / Γ(α+γ₁) · x^{α+γ₁-1}`.
pub fn projector_closed_form(spec: &DerivativeSpec, f: &PowerSum) -> Result<ProjectorResult> {
    let class = classify(spec);
    let reduced = &class.reduced;
    let alpha = reduced.alpha();
    let kernel = kernel_basis(spec);
    let coeffs = match *reduced.gamma() {
        [g1] => {
            let inner = rl_integral(order(1.0 - alpha - g1)?, f)?;
            vec![boundary_value(&inner, "I^{1-alpha-gamma_1} f")? / gamma(alpha + g1)?]
        }
        [g1, g2] => {
            let inner = rl_integral(order(2.0 - alpha - g1 - g2)?, f)?;
            let a2 = boundary_value(&inner, "I^{2-alpha-gamma_1-gamma_2} f")?;
            let middle = rl_integral(g2, &weak_derivative(&inner)?)?;
            let a1 = boundary_value(&middle, "I^{gamma_2} d/dx I^{2-alpha-gamma_1-gamma_2} f")?;
            vec![a1 / gamma(alpha + g1)?, a2 / gamma(alpha + g1 + g2 - 1.0)?]
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "closed-form projector is only available up to level 2; {spec} is truly level {}",
                class.truly_level
            )))
        }
    };
    Ok(ProjectorResult {
        components: coeffs
            .into_iter()
            .zip(&kernel.exponents)
            .map(|(coeff, &exp)| KernelComponent { coeff, exp })
            .collect(),
        off_kernel: 0.0,
    })
}
