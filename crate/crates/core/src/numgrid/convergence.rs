use serde::Serialize;

use super::derivative::{gl_derivative, nth_level_derivative_numeric};
use super::grid::{sample, GridFunction};
use super::weights::rl_integral_numeric;
use crate::error::{Error, Result};
use crate::fracops::{apply_derivative, named_spec, DerivativeSpec, NamedKind};
use crate::poweralg::{evaluate, format_significant, rl_integral, PowerSum};

/// Errors at or below this level are reported as exact.
pub const EXACT_ERROR: f64 = 1e-12;

/// Fraction of `[0, T]` near the origin excluded from derivative error norms.
pub const BOUNDARY_LAYER: f64 = 0.1;

/// Grid operator under study, paired with its symbolic oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum GridOperator {
    RlIntegral { alpha: f64 },
    GlDerivative { alpha: f64 },
    NthLevel(DerivativeSpec),
}

impl GridOperator {
    fn apply(&self, g: &GridFunction) -> Result<GridFunction> {
        match self {
            GridOperator::RlIntegral { alpha } => rl_integral_numeric(*alpha, g),
            GridOperator::GlDerivative { alpha } => gl_derivative(*alpha, g),
            GridOperator::NthLevel(spec) => nth_level_derivative_numeric(spec, g),
        }
    }

    fn oracle(&self, f: &PowerSum) -> Result<PowerSum> {
        match self {
            GridOperator::RlIntegral { alpha } => rl_integral(*alpha, f),
            GridOperator::GlDerivative { alpha } => {
                apply_derivative(&named_spec(NamedKind::RiemannLiouville, *alpha)?, f)
            }
            GridOperator::NthLevel(spec) => apply_derivative(spec, f),
        }
    }

    /// Smallest node abscissa included in the error norm.
    fn window_start(&self, t_end: f64) -> f64 {
        match self {
            GridOperator::RlIntegral { .. } => 0.0,
            _ => BOUNDARY_LAYER * t_end,
        }
    }
}

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub max_error: f64,
    /// `ln(e_prev / e) / ln(N / N_prev)`; `None` on the first row or when
    /// either error is at machine level.
    pub observed_order: Option<f64>,
    pub exact: bool,
}

/// Max-node error of `op` applied to samples of `f` on `[0, 1]`, measured
/// against the symbolic result, for each grid size in `ns`.
pub fn convergence_study(
    op: &GridOperator,
    f: &PowerSum,
    ns: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if ns.is_empty() {
        return Err(Error::domain(
            "convergence study needs at least one grid size",
        ));
    }
    let t_end = 1.0;
    let exact = op.oracle(f)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = sample(f, t_end, n)?;
        let approx = op.apply(&grid)?;
        let start = op.window_start(t_end);
        let mut max_error = 0.0f64;
        for j in 1..=n {
            let x = approx.node(j);
            if x < start - 1e-15 {
                continue;
            }
            let err = (approx.values()[j] - evaluate(&exact, x)?).abs();
            max_error = max_error.max(err);
        }
        let exact_row = max_error <= EXACT_ERROR;
        let observed_order = rows.last().and_then(|prev| {
            if exact_row || prev.exact {
                None
            } else {
                Some((prev.max_error / max_error).ln() / (n as f64 / prev.n as f64).ln())
            }
        });
        rows.push(ConvergenceRow {
            n,
            max_error,
            observed_order,
            exact: exact_row,
        });
    }
    Ok(rows)
}

/// Renders rows as `N,max_error,observed_order`; the order column is empty
/// on the first row and `exact` when the error is at machine level.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("N,max_error,observed_order\n");
    for row in rows {
        let order = match (row.exact, row.observed_order) {
            (true, _) => "exact".to_string(),
            (false, Some(p)) => format_significant(p),
            (false, None) => String::new(),
        };
        out.push_str(&format!("{},{:.11e},{}\n", row.n, row.max_error, order));
    }
    out
}
