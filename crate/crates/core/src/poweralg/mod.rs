//! Exact algebra of power sums `Σ c_k x^{μ_k}` with `μ_k > -1`.
//!
//! Every operator in the crate maps power sums to power sums through
//! Gamma-ratio coefficient maps, so this module is the exact test bed for
//! the whole operator hierarchy. Values live on `[0, 1]`; the same formulas
//! are used unchanged on the half-line by [`crate::laplace`].

mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::gamma_ratio;

pub use parse::parse;

/// Exponents closer than this are treated as equal.
pub const EXPONENT_MERGE_TOL: f64 = 1e-12;
/// Relative coefficient threshold below which terms are dropped.
pub const COEFF_PRUNE_REL: f64 = 1e-14;

/// One monomial `coeff * x^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exp: f64,
}

impl PowerTerm {
    /// Validated monomial; the exponent must keep it integrable on `(0, 1)`.
    pub fn new(coeff: f64, exp: f64) -> Result<Self> {
        if !coeff.is_finite() || !exp.is_finite() {
            return Err(Error::domain(format!("non-finite term {coeff} * x^{exp}")));
        }
        if exp <= -1.0 {
            return Err(Error::domain(format!("x^{exp} is not in L1(0,1)")));
        }
        Ok(PowerTerm { coeff, exp })
    }
}

/// Behaviour of a power sum at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueAtZero {
    Zero,
    Finite(f64),
    Infinite,
}

impl ValueAtZero {
    /// The value as a number, or `None` when the sum is unbounded at 0.
    pub fn finite(self) -> Option<f64> {
        match self {
            ValueAtZero::Zero => Some(0.0),
            ValueAtZero::Finite(c) => Some(c),
            ValueAtZero::Infinite => None,
        }
    }
}

/// Canonical power sum: exponents strictly ascending, no near-duplicate
/// exponents, no negligible coefficients. The empty sum is zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::canonical(vec![PowerTerm { coeff: c, exp: 0.0 }])
    }

    pub fn monomial(coeff: f64, exp: f64) -> Result<Self> {
        Ok(Self::canonical(vec![PowerTerm::new(coeff, exp)?]))
    }

    /// Builds a canonical sum from `(coeff, exp)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let terms = pairs
            .into_iter()
            .map(|(c, e)| PowerTerm::new(c, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::canonical(terms))
    }

    /// Canonicalizes terms that are already known to be valid.
    pub(crate) fn canonical(mut terms: Vec<PowerTerm>) -> Self {
        for t in &mut terms {
            if t.exp.abs() < EXPONENT_MERGE_TOL {
                t.exp = 0.0;
            }
        }
        terms.sort_by(|a, b| a.exp.total_cmp(&b.exp));
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if (t.exp - last.exp).abs() < EXPONENT_MERGE_TOL => {
                    last.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        let scale = merged.iter().fold(1.0f64, |m, t| m.max(t.coeff.abs()));
        merged.retain(|t| t.coeff.abs() >= COEFF_PRUNE_REL * scale);
        debug_assert!(merged.iter().all(|t| t.exp > -1.0));
        PowerSum { terms: merged }
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.exp)
    }

    /// Largest coefficient magnitude (0 for the zero sum).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    /// Coefficient attached to `exp` (within the merge tolerance), or 0.
    pub fn coeff_of(&self, exp: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| (t.exp - exp).abs() < EXPONENT_MERGE_TOL)
            .map_or(0.0, |t| t.coeff)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::canonical(
            self.terms
                .iter()
                .map(|t| PowerTerm {
                    coeff: t.coeff * factor,
                    exp: t.exp,
                })
                .collect(),
        )
    }

    /// `Σ w_i f_i`.
    pub fn linear_combination<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a PowerSum)>,
    {
        let mut terms = Vec::new();
        for (w, f) in parts {
            terms.extend(f.terms.iter().map(|t| PowerTerm {
                coeff: w * t.coeff,
                exp: t.exp,
            }));
        }
        Self::canonical(terms)
    }

    /// Largest coefficient of `self - other`, computed without pruning.
    pub fn max_abs_difference(&self, other: &PowerSum) -> f64 {
        let mut terms: Vec<PowerTerm> = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| PowerTerm {
            coeff: -t.coeff,
            exp: t.exp,
        }));
        terms.sort_by(|a, b| a.exp.total_cmp(&b.exp));
        let mut worst = 0.0f64;
        let mut i = 0;
        while i < terms.len() {
            let head = terms[i].exp;
            let mut acc = 0.0;
            while i < terms.len() && (terms[i].exp - head).abs() < EXPONENT_MERGE_TOL {
                acc += terms[i].coeff;
                i += 1;
            }
            worst = worst.max(acc.abs());
        }
        worst
    }

    /// [`max_abs_difference`](Self::max_abs_difference) divided by the larger
    /// coefficient norm of the two sums (0 when both are zero).
    pub fn relative_difference(&self, other: &PowerSum) -> f64 {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        if scale == 0.0 {
            0.0
        } else {
            self.max_abs_difference(other) / scale
        }
    }

    /// Exact textual form that always re-parses to the identical sum.
    pub fn to_exact_string(&self) -> String {
        parse::format_sum(self, parse::Precision::Exact)
    }
}

impl fmt::Display for PowerSum {
    /// Coefficients and exponents rounded to 12 significant digits; the
    /// alternate flag (`{:#}`) prints the exact round-trip form instead.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let precision = if f.alternate() {
            parse::Precision::Exact
        } else {
            parse::Precision::Significant12
        };
        f.write_str(&parse::format_sum(self, precision))
    }
}

impl std::str::FromStr for PowerSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Add for &PowerSum {
    type Output = PowerSum;

    fn add(self, rhs: &PowerSum) -> PowerSum {
        PowerSum::linear_combination([(1.0, self), (1.0, rhs)])
    }
}

impl Sub for &PowerSum {
    type Output = PowerSum;

    fn sub(self, rhs: &PowerSum) -> PowerSum {
        PowerSum::linear_combination([(1.0, self), (-1.0, rhs)])
    }
}

impl Neg for &PowerSum {
    type Output = PowerSum;

    fn neg(self) -> PowerSum {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &PowerSum {
    type Output = PowerSum;

    fn mul(self, rhs: f64) -> PowerSum {
        self.scale(rhs)
    }
}

impl Add for PowerSum {
    type Output = PowerSum;

    fn add(self, rhs: PowerSum) -> PowerSum {
        &self + &rhs
    }
}

impl Sub for PowerSum {
    type Output = PowerSum;

    fn sub(self, rhs: PowerSum) -> PowerSum {
        &self - &rhs
    }
}

impl Neg for PowerSum {
    type Output = PowerSum;

    fn neg(self) -> PowerSum {
        -&self
    }
}

impl Mul<f64> for PowerSum {
    type Output = PowerSum;

    fn mul(self, rhs: f64) -> PowerSum {
        self.scale(rhs)
    }
}

/// `v` rounded to 12 significant digits, in the notation used by `Display`.
pub fn format_significant(v: f64) -> String {
    parse::format_number(v, parse::Precision::Significant12)
}

/// Riemann–Liouville integral of order `alpha >= 0`, term by term:
/// `c x^μ ↦ c Γ(μ+1)/Γ(μ+α+1) x^{μ+α}`. Order zero is the identity.
pub fn rl_integral(alpha: f64, f: &PowerSum) -> Result<PowerSum> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::domain(format!(
            "integral order must be finite and >= 0, got {alpha}"
        )));
    }
    if alpha == 0.0 {
        return Ok(f.clone());
    }
    let terms = f
        .terms
        .iter()
        .map(|t| {
            // Order one is the plain antiderivative; keep it free of Γ round-off.
            let coeff = if alpha == 1.0 {
                t.coeff / (t.exp + 1.0)
            } else {
                t.coeff * gamma_ratio(t.exp + 1.0, t.exp + alpha + 1.0)?
            };
            Ok(PowerTerm {
                coeff,
                exp: t.exp + alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSum::canonical(terms))
}

/// Derivative inside `AC([0, 1])`: `c x^μ ↦ c μ x^{μ-1}`, constants vanish.
/// Terms with `-1 < μ < 0` have no integrable derivative and are rejected.
pub fn weak_derivative(f: &PowerSum) -> Result<PowerSum> {
    let mut terms = Vec::with_capacity(f.terms.len());
    for t in &f.terms {
        if t.exp == 0.0 {
            continue;
        }
        if t.exp < 0.0 {
            return Err(Error::domain(format!(
                "derivative leaves L1(0,1): term {} * x^{} is not absolutely continuous",
                format_significant(t.coeff),
                format_significant(t.exp)
            )));
        }
        terms.push(PowerTerm {
            coeff: t.coeff * t.exp,
            exp: t.exp - 1.0,
        });
    }
    Ok(PowerSum::canonical(terms))
}

/// Point evaluation for `x > 0`; use [`value_at_zero`] at the origin.
pub fn evaluate(f: &PowerSum, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "evaluate needs finite x > 0, got {x}"
        )));
    }
    let ln_x = x.ln();
    Ok(f.terms
        .iter()
        .map(|t| {
            if t.exp == 0.0 {
                t.coeff
            } else {
                t.coeff * (t.exp * ln_x).exp()
            }
        })
        .sum())
}

/// Classifies the limit of `f(x)` as `x → 0+`.
pub fn value_at_zero(f: &PowerSum) -> ValueAtZero {
    match f.terms.first() {
        None => ValueAtZero::Zero,
        Some(t) if t.exp < 0.0 => ValueAtZero::Infinite,
        Some(t) if t.exp == 0.0 => ValueAtZero::Finite(t.coeff),
        Some(_) => ValueAtZero::Zero,
    }
}

/// True when `f = f(0) + I¹ φ` for an integrable `φ`, i.e. every
/// non-constant exponent is positive.
pub fn is_absolutely_continuous(f: &PowerSum) -> bool {
    f.terms.iter().all(|t| t.exp >= 0.0)
}
