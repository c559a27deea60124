//! Laplace transforms of power sums on the semi-axis and checks of the
//! operational formulas for the Riemann–Liouville, Caputo, Hilfer and
//! second-level derivatives.
//!
//! Power sums extend verbatim from `[0, 1]` to `(0, ∞)` and have abscissa of
//! convergence 0, so every identity is checked exactly at real `s > 0`.

mod quadrature;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracops::{apply_derivative, classify, named_spec, order, DerivativeSpec, NamedKind};
use crate::poweralg::{rl_integral, value_at_zero, weak_derivative, PowerSum};
use crate::specialfn::log_gamma;

pub use quadrature::truncated_transform;

/// Truncation point of the numeric cross-check is `TRUNCATION_FACTOR / s`.
pub const TRUNCATION_FACTOR: f64 = 40.0;

/// A real transform variable `s > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LaplacePoint {
    s: f64,
}

impl LaplacePoint {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain(format!(
                "Laplace variable must be finite and > 0, got {s}"
            )));
        }
        Ok(LaplacePoint { s })
    }

    pub fn value(self) -> f64 {
        self.s
    }
}

/// `s ∈ {1, 2, 5, 10}`.
pub fn default_s_grid() -> Vec<LaplacePoint> {
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&s| LaplacePoint { s })
        .collect()
}

/// Boundary data `a₁ = (I^{γ₂} d/dx I^{2-α-γ₁-γ₂} f)(0)` and
/// `a₂ = (I^{2-α-γ₁-γ₂} f)(0)` of the second-level operational formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryTerms {
    pub a1: f64,
    pub a2: f64,
}

fn monomial_transform(coeff: f64, exp: f64, s: f64) -> f64 {
    let lg = log_gamma(exp + 1.0).expect("power-sum exponents exceed -1");
    coeff * (lg - (exp + 1.0) * s.ln()).exp()
}

/// `Σ cₖ Γ(μₖ+1) / s^{μₖ+1}`.
pub fn laplace_power_sum(f: &PowerSum, s: LaplacePoint) -> f64 {
    f.terms()
        .iter()
        .map(|t| monomial_transform(t.coeff, t.exp, s.s))
        .sum()
}

/// Transform of `|f|` term by term; the scale for relative errors.
fn laplace_magnitude(f: &PowerSum, s: LaplacePoint) -> f64 {
    f.terms()
        .iter()
        .map(|t| monomial_transform(t.coeff.abs(), t.exp, s.s))
        .sum()
}

fn relative_error(left: f64, right: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        (left - right).abs() / scale
    }
}

fn boundary_value(f: &PowerSum, what: &str) -> Result<f64> {
    value_at_zero(f)
        .finite()
        .ok_or_else(|| Error::domain(format!("{what} is unbounded at 0")))
}

/// Max relative error of `L{I^α f}(s) = s^{-α} L{f}(s)` over `grid`.
pub fn rl_integral_transform_check(alpha: f64, f: &PowerSum, grid: &[LaplacePoint]) -> Result<f64> {
    let integral = rl_integral(alpha, f)?;
    Ok(grid
        .iter()
        .map(|&s| {
            let left = laplace_power_sum(&integral, s);
            let damp = s.s.powf(-alpha);
            let right = damp * laplace_power_sum(f, s);
            let scale = laplace_magnitude(&integral, s).max(damp * laplace_magnitude(f, s));
            relative_error(left, right, scale)
        })
        .fold(0.0, f64::max))
}

/// `(γ₁, γ₂)` of a level ≤ 2 spec; a level-one spec of type `γ₁` is read as
/// `(γ₁, 0)`, for which `a₂` vanishes and `a₁ = (I^{1-α-γ₁} f)(0)`.
fn second_level_types(spec: &DerivativeSpec) -> Result<(f64, f64)> {
    match *spec.gamma() {
        [g1] => Ok((g1, 0.0)),
        [g1, g2] => Ok((g1, g2)),
        _ => Err(Error::Unsupported(format!(
            "operational formula is only available up to level 2, got {spec}"
        ))),
    }
}

/// Initial-value data entering the transform of a level ≤ 2 derivative.
pub fn boundary_terms(spec: &DerivativeSpec, f: &PowerSum) -> Result<BoundaryTerms> {
    let (g1, g2) = second_level_types(spec)?;
    let inner = rl_integral(order(2.0 - spec.alpha() - g1 - g2)?, f)?;
    let a2 = boundary_value(&inner, "I^{2-alpha-gamma_1-gamma_2} f")?;
    let middle = rl_integral(g2, &weak_derivative(&inner)?)?;
    let a1 = boundary_value(&middle, "I^{gamma_2} d/dx I^{2-alpha-gamma_1-gamma_2} f")?;
    Ok(BoundaryTerms { a1, a2 })
}

/// `s^α F(s) - a₁ s^{-γ₁} - a₂ s^{1-γ₁-γ₂}` and the magnitude of its parts.
fn second_level_right_side(
    spec: &DerivativeSpec,
    f: &PowerSum,
    bt: BoundaryTerms,
    s: LaplacePoint,
) -> Result<(f64, f64)> {
    let (g1, g2) = second_level_types(spec)?;
    let lift = s.s.powf(spec.alpha());
    let t1 = bt.a1 * s.s.powf(-g1);
    let t2 = bt.a2 * s.s.powf(1.0 - g1 - g2);
    let value = lift * laplace_power_sum(f, s) - t1 - t2;
    let scale = lift * laplace_magnitude(f, s) + t1.abs() + t2.abs();
    Ok((value, scale))
}

/// Max relative error of
/// `L{D f}(s) = s^α F(s) - a₁ s^{-γ₁} - a₂ s^{1-γ₁-γ₂}` over `grid`,
/// the left side taken from the symbolic derivative.
pub fn operational_formula_check(
    spec: &DerivativeSpec,
    f: &PowerSum,
    grid: &[LaplacePoint],
) -> Result<f64> {
    let bt = boundary_terms(spec, f)?;
    let derivative = apply_derivative(spec, f)?;
    let mut worst = 0.0f64;
    for &s in grid {
        let left = laplace_power_sum(&derivative, s);
        let (right, scale) = second_level_right_side(spec, f, bt, s)?;
        let scale = scale.max(laplace_magnitude(&derivative, s));
        worst = worst.max(relative_error(left, right, scale));
    }
    Ok(worst)
}

/// Checks the textbook transform of a named derivative, using its own
/// boundary datum rather than the second-level `a₁, a₂`:
///
/// * Riemann–Liouville: `s^α F(s) - (I^{1-α} f)(0)`;
/// * Caputo: `s^α F(s) - f(0) s^{α-1}`;
/// * Hilfer of type `γ`: `s^α F(s) - (I^{1-α-γ} f)(0) s^{-γ}`;
/// * second level: [`operational_formula_check`].
pub fn named_formula_check(
    kind: NamedKind,
    alpha: f64,
    f: &PowerSum,
    grid: &[LaplacePoint],
) -> Result<f64> {
    let spec = named_spec(kind, alpha)?;
    let (datum, power) = match kind {
        NamedKind::RiemannLiouville => (
            boundary_value(&rl_integral(order(1.0 - alpha)?, f)?, "I^{1-alpha} f")?,
            0.0,
        ),
        NamedKind::Caputo => (boundary_value(f, "f")?, alpha - 1.0),
        NamedKind::Hilfer(g) => (
            boundary_value(
                &rl_integral(order(1.0 - alpha - g)?, f)?,
                "I^{1-alpha-gamma_1} f",
            )?,
            -g,
        ),
        NamedKind::SecondLevel(..) => return operational_formula_check(&spec, f, grid),
    };
    let derivative = apply_derivative(&spec, f)?;
    Ok(grid
        .iter()
        .map(|&s| {
            let lift = s.s.powf(alpha);
            let tail = datum * s.s.powf(power);
            let left = laplace_power_sum(&derivative, s);
            let right = lift * laplace_power_sum(f, s) - tail;
            let scale =
                laplace_magnitude(&derivative, s).max(lift * laplace_magnitude(f, s) + tail.abs());
            relative_error(left, right, scale)
        })
        .fold(0.0, f64::max))
}

/// For a degenerate second-level spec (`γ₂ = 1` or `α + γ₁ + γ₂ <= 1`),
/// compares the right side of the second-level formula with the Hilfer
/// formula of the reduced spec; one of `a₁, a₂` must drop out.
pub fn degenerate_consistency_check(
    spec: &DerivativeSpec,
    f: &PowerSum,
    grid: &[LaplacePoint],
) -> Result<f64> {
    let class = classify(spec);
    if spec.level() != 2 || class.truly_level != 1 {
        return Err(Error::Spec(format!(
            "{spec} is not a degenerate second-level derivative"
        )));
    }
    let full = boundary_terms(spec, f)?;
    let reduced = boundary_terms(&class.reduced, f)?;
    let mut worst = 0.0f64;
    for &s in grid {
        let (a, scale_a) = second_level_right_side(spec, f, full, s)?;
        let (b, scale_b) = second_level_right_side(&class.reduced, f, reduced, s)?;
        worst = worst.max(relative_error(a, b, scale_a.max(scale_b)));
    }
    Ok(worst)
}

/// Relative difference between [`truncated_transform`] at `T = 40/s` and
/// the exact transform.
pub fn numeric_transform_check(f: &PowerSum, s: LaplacePoint) -> Result<f64> {
    let numeric = truncated_transform(f, s, TRUNCATION_FACTOR / s.s)?;
    Ok(relative_error(
        numeric,
        laplace_power_sum(f, s),
        laplace_magnitude(f, s),
    ))
}
