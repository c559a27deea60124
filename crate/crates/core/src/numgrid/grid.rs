use serde::Serialize;

use crate::error::{Error, Result};
use crate::poweralg::{evaluate, PowerSum};

/// Samples on the uniform grid `x_j = j T / N`, `j = 0..=N`.
///
/// When `singular_exponent` is set the function behaves like `c x^σ` at the
/// origin and `values[0]` holds `c` instead of a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    t_end: f64,
    values: Vec<f64>,
    singular_exponent: Option<f64>,
}

impl GridFunction {
    pub fn new(t_end: f64, values: Vec<f64>) -> Result<Self> {
        Self::with_singularity(t_end, values, None)
    }

    pub fn with_singularity(
        t_end: f64,
        values: Vec<f64>,
        singular_exponent: Option<f64>,
    ) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::domain(format!(
                "grid end point must be > 0, got {t_end}"
            )));
        }
        if values.len() < 3 {
            return Err(Error::domain(format!(
                "grid needs N >= 2 intervals, got {}",
                values.len().saturating_sub(1)
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite grid value {bad}")));
        }
        if let Some(s) = singular_exponent {
            if !(s > -1.0 && s < 0.0) {
                return Err(Error::domain(format!(
                    "singular exponent must lie in (-1, 0), got {s}"
                )));
            }
        }
        Ok(GridFunction {
            t_end,
            values,
            singular_exponent,
        })
    }

    pub(crate) fn from_values_unchecked(t_end: f64, values: Vec<f64>) -> Self {
        GridFunction {
            t_end,
            values,
            singular_exponent: None,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of intervals `N`.
    pub fn node_count(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.node_count() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn singular_exponent(&self) -> Option<f64> {
        self.singular_exponent
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    pub(crate) fn require_regular(&self, op: &str) -> Result<()> {
        match self.singular_exponent {
            Some(s) => Err(Error::Unsupported(format!(
                "{op} does not accept grid functions with an x^{s} singularity at 0"
            ))),
            None => Ok(()),
        }
    }
}

/// Samples `f` at the `N + 1` nodes of `[0, T]`.
pub fn sample(f: &PowerSum, t_end: f64, n: usize) -> Result<GridFunction> {
    if n < 2 {
        return Err(Error::domain(format!(
            "grid needs N >= 2 intervals, got {n}"
        )));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain(format!(
            "grid end point must be > 0, got {t_end}"
        )));
    }
    let h = t_end / n as f64;
    let mut values = Vec::with_capacity(n + 1);
    let (head, singular) = match f.terms().first() {
        Some(t) if t.exp < 0.0 => (t.coeff, Some(t.exp)),
        Some(t) if t.exp == 0.0 => (t.coeff, None),
        _ => (0.0, None),
    };
    values.push(head);
    for j in 1..=n {
        values.push(evaluate(f, j as f64 * h)?);
    }
    GridFunction::with_singularity(t_end, values, singular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poweralg::parse;

    #[test]
    fn sample_examples() {
        let g = sample(&parse("x").unwrap(), 1.0, 2).unwrap();
        assert_eq!(g.values(), &[0.0, 0.5, 1.0]);
        assert_eq!(g.singular_exponent(), None);

        let g = sample(&parse("1").unwrap(), 1.0, 4).unwrap();
        assert!(g.values().iter().all(|&v| v == 1.0));

        let g = sample(&parse("x^-0.5").unwrap(), 1.0, 2).unwrap();
        assert_eq!(g.singular_exponent(), Some(-0.5));
        assert_eq!(g.values()[0], 1.0);
        assert!((g.values()[1] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.values()[2], 1.0);
    }

    #[test]
    fn rejects_bad_grids() {
        let f = parse("x").unwrap();
        assert!(sample(&f, 1.0, 1).is_err());
        assert!(sample(&f, 0.0, 4).is_err());
        assert!(GridFunction::new(1.0, vec![0.0, f64::NAN, 1.0]).is_err());
        assert!(GridFunction::with_singularity(1.0, vec![0.0; 3], Some(-1.0)).is_err());
    }
}
