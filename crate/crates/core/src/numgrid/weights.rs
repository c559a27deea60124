use serde::Serialize;

use super::grid::GridFunction;
use crate::error::{Error, Result};
use crate::specialfn::gamma;

/// Below this distance the weight differences are evaluated directly; above
/// it a binomial series avoids cancellation between the `m^{α+1}` terms.
const SERIES_FROM: usize = 8;
const SERIES_MAX_TERMS: usize = 80;

/// Product-trapezoidal weights for `I^α` on a uniform grid.
///
/// With `p = α + 1` and `c = h^α / Γ(α + 2)`:
///
/// ```text
/// w[j][0] = c ((j-1)^p - (j-1-α) j^α)
/// w[j][k] = c ((j-k+1)^p - 2 (j-k)^p + (j-k-1)^p),   0 < k < j
/// w[j][j] = c
/// ```
///
/// The rule integrates the kernel `(x - t)^{α-1} / Γ(α)` exactly against the
/// piecewise-linear interpolant of the samples, so every weight is
/// non-negative and constants and linear functions are integrated exactly.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureWeights {
    alpha: f64,
    n: usize,
    scale: f64,
    /// `a_j = (j-1)^p - (j-1-α) j^α` for `j = 0..=N` (`a_0` unused).
    first: Vec<f64>,
    /// `b_m` second differences of `m^p` for `m = 0..=N` (`b_0` unused).
    band: Vec<f64>,
}

/// `C(p, i)` recurrences for the series below start from `C(p, 2)`.
fn binom2(p: f64) -> f64 {
    p * (p - 1.0) / 2.0
}

/// `(m+1)^p - 2 m^p + (m-1)^p`.
fn second_difference(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    if m < SERIES_FROM {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // 2 Σ_{i even >= 2} C(p, i) m^{p-i}
    let inv2 = 1.0 / (mf * mf);
    let mut c = binom2(p);
    let mut pow = mf.powf(p - 2.0);
    let mut sum = 0.0;
    let mut i = 2.0;
    for _ in 0..SERIES_MAX_TERMS {
        let term = c * pow;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        c *= (p - i) * (p - i - 1.0) / ((i + 1.0) * (i + 2.0));
        pow *= inv2;
        i += 2.0;
    }
    2.0 * sum
}

/// `(j-1)^p - (j-1-α) j^α` with `α = p - 1`.
fn first_column(p: f64, j: usize) -> f64 {
    let jf = j as f64;
    let alpha = p - 1.0;
    if j < SERIES_FROM {
        return (jf - 1.0).powf(p) - (jf - 1.0 - alpha) * jf.powf(alpha);
    }
    // Σ_{i >= 2} C(p, i) (-1)^i j^{p-i}
    let inv = 1.0 / jf;
    let mut c = binom2(p);
    let mut pow = jf.powf(p - 2.0);
    let mut sum = 0.0;
    let mut i = 2.0;
    for _ in 0..SERIES_MAX_TERMS {
        let term = c * pow;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        c *= -(p - i) / (i + 1.0);
        pow *= inv;
        i += 1.0;
    }
    sum
}

impl QuadratureWeights {
    pub fn new(alpha: f64, n: usize, t_end: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "numeric integral order must be > 0, got {alpha}"
            )));
        }
        if n < 1 || !(t_end > 0.0) {
            return Err(Error::domain("weights need N >= 1 and T > 0"));
        }
        let p = alpha + 1.0;
        let h = t_end / n as f64;
        let scale = h.powf(alpha) / gamma(alpha + 2.0)?;
        let first = (0..=n)
            .map(|j| if j == 0 { 0.0 } else { first_column(p, j) })
            .collect();
        let band = (0..=n)
            .map(|m| if m == 0 { 0.0 } else { second_difference(p, m) })
            .collect();
        Ok(QuadratureWeights {
            alpha,
            n,
            scale,
            first,
            band,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// `w[j][k]` for `0 <= k <= j <= N`.
    pub fn weight(&self, j: usize, k: usize) -> f64 {
        assert!(
            k <= j && j <= self.n,
            "weight index ({j}, {k}) outside the table"
        );
        if j == 0 {
            0.0
        } else if k == j {
            self.scale
        } else if k == 0 {
            self.scale * self.first[j]
        } else {
            self.scale * self.band[j - k]
        }
    }

    /// Row `j` of the table, `k = 0..=j`.
    pub fn row(&self, j: usize) -> Vec<f64> {
        (0..=j).map(|k| self.weight(j, k)).collect()
    }

    /// Applies the rule to node values `f_0..f_N`.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(
            values.len(),
            self.n + 1,
            "grid size does not match the weights"
        );
        let mut out = vec![0.0; self.n + 1];
        for (j, slot) in out.iter_mut().enumerate().skip(1) {
            let mut acc = self.first[j] * values[0] + values[j];
            for (k, v) in values.iter().enumerate().take(j).skip(1) {
                acc += self.band[j - k] * v;
            }
            *slot = self.scale * acc;
        }
        out
    }
}

/// Product-trapezoidal approximation of `I^α g` at every node.
pub fn rl_integral_numeric(alpha: f64, g: &GridFunction) -> Result<GridFunction> {
    g.require_regular("rl_integral_numeric")?;
    let weights = QuadratureWeights::new(alpha, g.node_count(), g.t_end())?;
    Ok(GridFunction::from_values_unchecked(
        g.t_end(),
        weights.apply(g.values()),
    ))
}

/// Largest node difference between `I^α I^β g` and `I^{α+β} g`.
pub fn semigroup_residual_numeric(alpha: f64, beta: f64, g: &GridFunction) -> Result<f64> {
    let nested = rl_integral_numeric(alpha, &rl_integral_numeric(beta, g)?)?;
    let direct = rl_integral_numeric(alpha + beta, g)?;
    Ok(nested
        .values()
        .iter()
        .zip(direct.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numgrid::sample;
    use crate::poweralg::{evaluate, parse, rl_integral};

    #[test]
    fn series_matches_direct_differences() {
        for alpha in [0.1, 0.25, 0.5, 0.9, 1.0, 1.5] {
            let p = alpha + 1.0;
            for m in SERIES_FROM..SERIES_FROM + 12 {
                let mf = m as f64;
                let direct = (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
                let series = second_difference(p, m);
                assert!(
                    ((direct - series) / series).abs() < 1e-12,
                    "alpha {alpha} m {m}"
                );
                let direct = (mf - 1.0).powf(p) - (mf - 1.0 - alpha) * mf.powf(alpha);
                let series = first_column(p, m);
                assert!(
                    ((direct - series) / series).abs() < 1e-11,
                    "alpha {alpha} j {m}"
                );
            }
        }
    }

    #[test]
    fn weights_are_nonnegative_and_rows_sum_to_moment() {
        for alpha in [0.1, 0.3, 0.5, 0.75, 1.0] {
            let n = 512;
            let w = QuadratureWeights::new(alpha, n, 1.0).unwrap();
            for j in 1..=n {
                let row = w.row(j);
                assert!(row.iter().all(|&v| v >= 0.0), "alpha {alpha} row {j}");
                let sum: f64 = row.iter().sum();
                let x = j as f64 / n as f64;
                let want = x.powf(alpha) / gamma(alpha + 1.0).unwrap();
                assert!(((sum - want) / want).abs() < 1e-12, "alpha {alpha} row {j}");
            }
        }
    }

    #[test]
    fn integral_examples() {
        let one = sample(&parse("1").unwrap(), 1.0, 16).unwrap();
        let i1 = rl_integral_numeric(1.0, &one).unwrap();
        for (j, v) in i1.values().iter().enumerate() {
            assert!((v - j as f64 / 16.0).abs() < 1e-14);
        }

        let f = parse("x").unwrap();
        let grid = sample(&f, 1.0, 1024).unwrap();
        let approx = rl_integral_numeric(0.5, &grid).unwrap();
        let exact = rl_integral(0.5, &f).unwrap();
        let err = (1..=1024)
            .map(|j| (approx.values()[j] - evaluate(&exact, grid.node(j)).unwrap()).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-5, "err {err}");

        let zero = GridFunction::new(1.0, vec![0.0; 9]).unwrap();
        assert!(rl_integral_numeric(0.5, &zero)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn integral_errors() {
        let grid = sample(&parse("x").unwrap(), 1.0, 8).unwrap();
        assert!(matches!(
            rl_integral_numeric(0.0, &grid),
            Err(Error::Domain(_))
        ));
        let singular = sample(&parse("x^-0.5").unwrap(), 1.0, 8).unwrap();
        assert!(matches!(
            rl_integral_numeric(0.5, &singular),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn semigroup_residual_examples() {
        let one = sample(&parse("1").unwrap(), 1.0, 512).unwrap();
        assert!(semigroup_residual_numeric(0.5, 0.5, &one).unwrap() < 1e-3);
        let zero = GridFunction::new(1.0, vec![0.0; 17]).unwrap();
        assert_eq!(semigroup_residual_numeric(0.5, 0.5, &zero).unwrap(), 0.0);
    }
}
