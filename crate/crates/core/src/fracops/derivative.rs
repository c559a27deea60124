use serde::Serialize;

use super::spec::{classify, named_spec, snap_order, DerivativeSpec, NamedKind, PARAM_TOL};
use crate::error::{Error, Result};
use crate::poweralg::{
    is_absolutely_continuous, rl_integral, value_at_zero, weak_derivative, PowerSum, ValueAtZero,
    EXPONENT_MERGE_TOL,
};
use crate::specialfn::recip_gamma;

/// Monomials `x^{σₖ}`, `σₖ = α + sₖ - k`, spanning the kernel of a
/// derivative (computed on its reduced form).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelBasis {
    pub exponents: Vec<f64>,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    /// The basis as unit-coefficient power sums.
    pub fn basis(&self) -> Vec<PowerSum> {
        self.exponents
            .iter()
            .map(|&e| PowerSum::monomial(1.0, e).expect("kernel exponent in (-1, 0]"))
            .collect()
    }

    /// `Σ cₖ x^{σₖ}`.
    pub fn combination(&self, coeffs: &[f64]) -> PowerSum {
        let basis = self.basis();
        PowerSum::linear_combination(coeffs.iter().copied().zip(basis.iter()))
    }
}

/// Applies `(∏ₖ I^{γₖ} d/dx) I^{n-α-sₙ}` right to left.
///
/// Each `d/dx` requires its argument to be absolutely continuous; the first
/// failure is reported with the index of the offending factor.
pub fn apply_derivative(spec: &DerivativeSpec, f: &PowerSum) -> Result<PowerSum> {
    let n = spec.level();
    let mut g = rl_integral(spec.inner_order(), f)?;
    for k in (1..=n).rev() {
        g = weak_derivative(&g).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!(
                "{msg}; argument of d/dx in factor {k} of {n} is not in AC([0,1])"
            )),
            other => other,
        })?;
        g = rl_integral(spec.gamma()[k - 1], &g)?;
    }
    Ok(g)
}

pub fn kernel_basis(spec: &DerivativeSpec) -> KernelBasis {
    let reduced = classify(spec).reduced;
    let alpha = reduced.alpha();
    let exponents = reduced
        .partial_sums()
        .iter()
        .enumerate()
        .map(|(idx, s)| {
            let sigma = alpha + s - (idx + 1) as f64;
            if sigma.abs() < EXPONENT_MERGE_TOL {
                0.0
            } else {
                sigma
            }
        })
        .collect();
    KernelBasis { exponents }
}

/// `D(I^α φ) - φ` for `φ` whose integral `I^α φ` is absolutely continuous
/// and vanishes at zero.
pub fn fundamental_theorem_residual(spec: &DerivativeSpec, phi: &PowerSum) -> Result<PowerSum> {
    let integrated = rl_integral(spec.alpha(), phi)?;
    if value_at_zero(&integrated) != ValueAtZero::Zero || !is_absolutely_continuous(&integrated) {
        return Err(Error::domain(format!(
            "phi not in X_FT test bed: I^alpha phi = {integrated} must be AC and vanish at 0"
        )));
    }
    let recovered = apply_derivative(spec, &integrated)?;
    Ok(&recovered - phi)
}

/// `D_C f - D_RL f + f(0) x^{-α} / Γ(1 - α)` for absolutely continuous `f`.
pub fn caputo_rl_relation_check(alpha: f64, f: &PowerSum) -> Result<PowerSum> {
    if !is_absolutely_continuous(f) {
        return Err(Error::domain(format!(
            "Caputo-RL relation needs f in AC([0,1]), got {f}"
        )));
    }
    let f0 = value_at_zero(f)
        .finite()
        .ok_or_else(|| Error::domain("f(0) is not finite"))?;
    let caputo = apply_derivative(&named_spec(NamedKind::Caputo, alpha)?, f)?;
    let rl = apply_derivative(&named_spec(NamedKind::RiemannLiouville, alpha)?, f)?;
    let weight = f0 * recip_gamma(1.0 - alpha)?;
    let boundary = if weight == 0.0 {
        PowerSum::zero()
    } else {
        PowerSum::monomial(weight, -alpha)?
    };
    Ok(PowerSum::linear_combination([
        (1.0, &caputo),
        (-1.0, &rl),
        (1.0, &boundary),
    ]))
}

/// Integral order helper for chains such as `I^{1-α-γ₁}`.
pub(crate) fn order(value: f64) -> Result<f64> {
    if value < -PARAM_TOL {
        return Err(Error::domain(format!("negative integral order {value}")));
    }
    Ok(snap_order(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poweralg::parse;

    const SQRT_PI_2: f64 = 0.886_226_925_452_758;

    fn ps(s: &str) -> PowerSum {
        parse(s).unwrap()
    }

    fn rl(alpha: f64) -> DerivativeSpec {
        named_spec(NamedKind::RiemannLiouville, alpha).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert!(apply_derivative(&rl(0.5), &ps("x^-0.5")).unwrap().is_zero());
        let caputo = named_spec(NamedKind::Caputo, 0.5).unwrap();
        assert!(apply_derivative(&caputo, &ps("7")).unwrap().is_zero());
        let d = apply_derivative(&rl(0.5), &ps("x^0.5")).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.terms()[0].exp, 0.0);
        assert!((d.terms()[0].coeff - SQRT_PI_2).abs() < 1e-15);
        let hilfer = named_spec(NamedKind::Hilfer(0.25), 0.5).unwrap();
        assert!(apply_derivative(&hilfer, &ps("x^-0.25")).unwrap().is_zero());
    }

    #[test]
    fn apply_reports_failing_factor() {
        // Caputo needs f itself to be AC.
        let caputo = named_spec(NamedKind::Caputo, 0.5).unwrap();
        match apply_derivative(&caputo, &ps("x^-0.5")) {
            Err(Error::Domain(msg)) => assert!(msg.contains("factor 1 of 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let two = DerivativeSpec::new(0.5, vec![0.5, 0.5]).unwrap();
        // I^{0.5} x^-0.9 = c x^-0.4, whose derivative leaves L1.
        match apply_derivative(&two, &ps("x^-0.9")) {
            Err(Error::Domain(msg)) => assert!(msg.contains("factor 2 of 2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&rl(0.5)).exponents, vec![-0.5]);
        let two = DerivativeSpec::new(0.5, vec![0.5, 0.5]).unwrap();
        assert_eq!(kernel_basis(&two).exponents, vec![0.0, -0.5]);
        let degenerate = DerivativeSpec::new(0.5, vec![0.25, 1.0]).unwrap();
        assert_eq!(kernel_basis(&degenerate).exponents, vec![-0.25]);
        let caputo = named_spec(NamedKind::Caputo, 0.3).unwrap();
        assert_eq!(kernel_basis(&caputo).exponents, vec![0.0]);
    }

    #[test]
    fn fundamental_theorem_examples() {
        let two = DerivativeSpec::new(0.5, vec![0.5, 0.5]).unwrap();
        assert!(fundamental_theorem_residual(&two, &PowerSum::zero())
            .unwrap()
            .is_zero());
        assert!(fundamental_theorem_residual(&two, &ps("x^0.25"))
            .unwrap()
            .is_zero());
        let three = DerivativeSpec::new(0.75, vec![0.1, 0.2, 0.3]).unwrap();
        assert!(fundamental_theorem_residual(&three, &ps("1 + x"))
            .unwrap()
            .is_zero());
        // exponent -0.5 is not above -alpha = -0.5
        assert!(matches!(
            fundamental_theorem_residual(&rl(0.5), &ps("x^-0.5")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn caputo_rl_relation_examples() {
        assert!(caputo_rl_relation_check(0.5, &ps("1")).unwrap().is_zero());
        assert!(caputo_rl_relation_check(0.5, &ps("x")).unwrap().is_zero());
        assert!(caputo_rl_relation_check(0.25, &ps("2 + x^0.75"))
            .unwrap()
            .is_zero());
        assert!(caputo_rl_relation_check(1.0, &ps("2 + x^2"))
            .unwrap()
            .is_zero());
        assert!(caputo_rl_relation_check(0.5, &ps("x^-0.5")).is_err());
    }

    #[test]
    fn rl_derivative_of_constant() {
        // D_RL 1 = x^{-α}/Γ(1-α)
        let d = apply_derivative(&rl(0.5), &ps("1")).unwrap();
        assert_eq!(d.terms()[0].exp, -0.5);
        assert!((d.terms()[0].coeff - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }
}
