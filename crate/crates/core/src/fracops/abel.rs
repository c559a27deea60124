use super::derivative::order;
use crate::error::{Error, Result};
use crate::poweralg::{
    is_absolutely_continuous, rl_integral, value_at_zero, weak_derivative, PowerSum, ValueAtZero,
};

/// Solves `I^α φ = f` in `L1(0, 1)` via `φ = d/dx I^{1-α} f`.
///
/// A solution exists iff `I^{1-α} f` is absolutely continuous and vanishes
/// at zero, which on power sums means every exponent of `f` exceeds `α - 1`.
pub fn abel_solve(alpha: f64, f: &PowerSum) -> Result<PowerSum> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "Abel equation order must lie in (0, 1), got {alpha}"
        )));
    }
    let smoothed = rl_integral(order(1.0 - alpha)?, f)?;
    if value_at_zero(&smoothed) != ValueAtZero::Zero || !is_absolutely_continuous(&smoothed) {
        let exponent = f.min_exponent().expect("a non-zero sum fails the test");
        return Err(Error::NotSolvable {
            exponent,
            bound: alpha - 1.0,
        });
    }
    weak_derivative(&smoothed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poweralg::parse;
    use crate::specialfn::gamma;

    #[test]
    fn solves_power_law_right_hand_sides() {
        let phi = abel_solve(0.5, &parse("x^0.5").unwrap()).unwrap();
        assert_eq!(phi.len(), 1);
        assert_eq!(phi.terms()[0].exp, 0.0);
        assert!((phi.terms()[0].coeff - 0.886_226_925_452_758).abs() < 1e-15);

        let phi = abel_solve(0.5, &parse("1").unwrap()).unwrap();
        assert_eq!(phi.terms()[0].exp, -0.5);
        let want = 1.0 / gamma(0.5).unwrap();
        assert!((phi.terms()[0].coeff - want).abs() < 1e-15);
    }

    #[test]
    fn reports_offending_exponent() {
        match abel_solve(0.5, &parse("x + x^-0.6").unwrap()) {
            Err(Error::NotSolvable { exponent, bound }) => {
                assert_eq!(exponent, -0.6);
                assert_eq!(bound, -0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
        // μ = α - 1 exactly makes I^{1-α} f a non-zero constant at 0
        assert!(matches!(
            abel_solve(0.5, &parse("x^-0.5").unwrap()),
            Err(Error::NotSolvable { .. })
        ));
        assert!(abel_solve(0.5, &PowerSum::zero()).unwrap().is_zero());
        assert!(abel_solve(1.0, &parse("x").unwrap()).is_err());
    }
}
