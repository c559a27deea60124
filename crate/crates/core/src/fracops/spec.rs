use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Slack allowed when testing the parameter inequalities, so that values
/// such as `α + (1 - α)` that round to `1 + ε` stay admissible.
pub const PARAM_TOL: f64 = 1e-12;

/// Order `α ∈ (0, 1]` and type `γ = (γ₁, …, γₙ)` of an n-th level derivative
/// `(∏ₖ I^{γₖ} d/dx) I^{n-α-sₙ}`, with `sₖ = γ₁ + … + γₖ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeSpec {
    alpha: f64,
    gamma: Vec<f64>,
}

/// Named first- and second-level families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedKind {
    RiemannLiouville,
    Caputo,
    Hilfer(f64),
    SecondLevel(f64, f64),
}

impl DerivativeSpec {
    /// Validates `0 < α <= 1`, `n >= 1`, `γₖ >= 0` and `α + sₖ <= k`.
    pub fn new(alpha: f64, gamma: Vec<f64>) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 + PARAM_TOL {
            return Err(Error::Spec(format!(
                "order must satisfy 0 < alpha <= 1, got {alpha}"
            )));
        }
        if gamma.is_empty() {
            return Err(Error::Spec(
                "type vector gamma must have n >= 1 entries".into(),
            ));
        }
        let mut partial = 0.0;
        for (idx, &g) in gamma.iter().enumerate() {
            let k = idx + 1;
            if !g.is_finite() || g < 0.0 {
                return Err(Error::Spec(format!(
                    "violates 0 <= gamma_{k} (gamma_{k} = {g})"
                )));
            }
            partial += g;
            if alpha + partial > k as f64 + PARAM_TOL {
                return Err(Error::Spec(format!(
                    "violates alpha + s_{k} <= {k} (alpha + s_{k} = {})",
                    alpha + partial
                )));
            }
        }
        Ok(DerivativeSpec {
            alpha: alpha.min(1.0),
            gamma,
        })
    }

    /// Internal constructor for specs derived from an already valid one.
    pub(crate) fn from_parts(alpha: f64, gamma: Vec<f64>) -> Self {
        debug_assert!(!gamma.is_empty());
        DerivativeSpec { alpha, gamma }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Number of `I^{γₖ} d/dx` factors.
    pub fn level(&self) -> usize {
        self.gamma.len()
    }

    /// `(s₁, …, sₙ)`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.gamma
            .iter()
            .scan(0.0, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect()
    }

    /// `sₙ`.
    pub fn total_type(&self) -> f64 {
        self.gamma.iter().sum()
    }

    /// Order `n - α - sₙ` of the innermost integral, snapped to zero when it
    /// is within rounding of it.
    pub fn inner_order(&self) -> f64 {
        snap_order(self.level() as f64 - self.alpha - self.total_type())
    }
}

/// Clamps round-off around zero for an integral order known to be `>= 0`.
pub(crate) fn snap_order(order: f64) -> f64 {
    if order.abs() < PARAM_TOL {
        0.0
    } else {
        order.max(0.0)
    }
}

impl fmt::Display for DerivativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^{{{}, (", self.alpha)?;
        for (i, g) in self.gamma.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")}")
    }
}

/// Specs for the Riemann–Liouville, Caputo, Hilfer and second-level families.
pub fn named_spec(kind: NamedKind, alpha: f64) -> Result<DerivativeSpec> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::Spec(format!(
            "order must satisfy 0 < alpha <= 1, got {alpha}"
        )));
    }
    let gamma = match kind {
        NamedKind::RiemannLiouville => vec![0.0],
        NamedKind::Caputo => vec![1.0 - alpha],
        NamedKind::Hilfer(g1) => {
            if g1 < 0.0 {
                return Err(Error::Spec(format!(
                    "violates 0 <= gamma_1 (gamma_1 = {g1})"
                )));
            }
            if g1 > 1.0 - alpha + PARAM_TOL {
                return Err(Error::Spec(format!(
                    "violates gamma_1 <= 1 - alpha (gamma_1 = {g1}, 1 - alpha = {})",
                    1.0 - alpha
                )));
            }
            vec![g1]
        }
        NamedKind::SecondLevel(g1, g2) => {
            if g1 < 0.0 || g2 < 0.0 {
                return Err(Error::Spec(format!(
                    "violates 0 <= gamma_1, 0 <= gamma_2 (gamma = ({g1}, {g2}))"
                )));
            }
            if alpha + g1 > 1.0 + PARAM_TOL {
                return Err(Error::Spec(format!(
                    "violates alpha + gamma_1 <= 1 (alpha + gamma_1 = {})",
                    alpha + g1
                )));
            }
            if alpha + g1 + g2 > 2.0 + PARAM_TOL {
                return Err(Error::Spec(format!(
                    "violates alpha + gamma_1 + gamma_2 <= 2 (sum = {})",
                    alpha + g1 + g2
                )));
            }
            vec![g1, g2]
        }
    };
    DerivativeSpec::new(alpha, gamma)
}

/// One rewrite step that lowers the level of a degenerate spec.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Reduction {
    /// `γ_k >= 1` (k >= 2): `I^{γ_{k-1}} d/dx I^{γ_k} d/dx` collapses to
    /// `I^{γ_{k-1}+γ_k-1} d/dx`.
    Merge { position: usize, gamma: f64 },
    /// `α + sₙ <= n - 1`: the last factor is absorbed by the inner integral.
    TrailingDrop { level: usize, alpha_plus_sum: f64 },
}

/// Effective level of a spec and its equivalent lower-level form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecClass {
    pub truly_level: usize,
    pub reduced: DerivativeSpec,
    pub reductions: Vec<Reduction>,
}

impl SpecClass {
    pub fn is_degenerate(&self) -> bool {
        !self.reductions.is_empty()
    }
}

/// Rewrites a spec until `n - 1 < α + sₙ` and `γₖ < 1` for `k >= 2`.
/// Boundary values (`γₖ = 1`, `α + sₙ = n - 1`) count as degenerate.
pub fn classify(spec: &DerivativeSpec) -> SpecClass {
    let alpha = spec.alpha;
    let mut gamma = spec.gamma.clone();
    let mut reductions = Vec::new();
    while gamma.len() >= 2 {
        let n = gamma.len();
        let sum: f64 = alpha + gamma.iter().sum::<f64>();
        if let Some(idx) = (1..n).find(|&i| gamma[i] >= 1.0 - PARAM_TOL) {
            let g = gamma[idx];
            let excess = if (g - 1.0).abs() < PARAM_TOL {
                0.0
            } else {
                g - 1.0
            };
            gamma[idx - 1] += excess;
            gamma.remove(idx);
            reductions.push(Reduction::Merge {
                position: idx + 1,
                gamma: g,
            });
        } else if sum <= (n - 1) as f64 + PARAM_TOL {
            gamma.pop();
            reductions.push(Reduction::TrailingDrop {
                level: n,
                alpha_plus_sum: sum,
            });
        } else {
            break;
        }
    }
    SpecClass {
        truly_level: gamma.len(),
        reduced: DerivativeSpec::from_parts(alpha, gamma),
        reductions,
    }
}
