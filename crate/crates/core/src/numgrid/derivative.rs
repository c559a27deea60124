use super::grid::GridFunction;
use super::weights::rl_integral_numeric;
use crate::error::{Error, Result};
use crate::fracops::DerivativeSpec;

/// Grünwald–Letnikov weights `(-1)^k C(α, k)`, `k = 0..=n`.
pub fn gl_weights(alpha: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n + 1);
    let mut current = 1.0;
    w.push(current);
    for k in 1..=n {
        current *= 1.0 - (alpha + 1.0) / k as f64;
        w.push(current);
    }
    w
}

/// Grünwald–Letnikov approximation `h^{-α} Σₖ (-1)^k C(α,k) g(x_j - k h)`.
pub fn gl_derivative(alpha: f64, g: &GridFunction) -> Result<GridFunction> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "Grünwald–Letnikov order must lie in (0, 1), got {alpha}"
        )));
    }
    g.require_regular("gl_derivative")?;
    let n = g.node_count();
    let weights = gl_weights(alpha, n);
    let inv = g.step().powf(-alpha);
    let v = g.values();
    let out = (0..=n)
        .map(|j| inv * (0..=j).map(|k| weights[k] * v[j - k]).sum::<f64>())
        .collect();
    Ok(GridFunction::from_values_unchecked(g.t_end(), out))
}

/// First derivative: central differences inside, three-point one-sided
/// differences at both ends.
pub fn differentiate(g: &GridFunction) -> Result<GridFunction> {
    g.require_regular("differentiate")?;
    let v = g.values();
    let n = g.node_count();
    let inv2h = 0.5 / g.step();
    let mut out = Vec::with_capacity(n + 1);
    out.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2h);
    for j in 1..n {
        out.push((v[j + 1] - v[j - 1]) * inv2h);
    }
    out.push((3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) * inv2h);
    Ok(GridFunction::from_values_unchecked(g.t_end(), out))
}

fn integrate_or_keep(order: f64, g: GridFunction) -> Result<GridFunction> {
    if order == 0.0 {
        Ok(g)
    } else {
        rl_integral_numeric(order, &g)
    }
}

/// Grid version of `(∏ₖ I^{γₖ} d/dx) I^{n-α-sₙ} g`, composed right to left.
///
/// Accuracy is only meaningful away from the origin (`x >= 0.1 T`), where
/// the kernel-type boundary layers of the intermediate functions have decayed.
pub fn nth_level_derivative_numeric(
    spec: &DerivativeSpec,
    g: &GridFunction,
) -> Result<GridFunction> {
    g.require_regular("nth_level_derivative_numeric")?;
    let mut current = integrate_or_keep(spec.inner_order(), g.clone())?;
    for &gamma in spec.gamma().iter().rev() {
        current = differentiate(&current)?;
        current = integrate_or_keep(gamma, current)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{apply_derivative, named_spec, NamedKind};
    use crate::numgrid::sample;
    use crate::poweralg::{evaluate, parse, PowerSum};

    fn interior_error(approx: &GridFunction, exact: &PowerSum) -> f64 {
        let t = approx.t_end();
        (0..=approx.node_count())
            .filter(|&j| approx.node(j) >= 0.1 * t)
            .map(|j| (approx.values()[j] - evaluate(exact, approx.node(j)).unwrap()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn gl_weights_recurrence() {
        let w = gl_weights(0.5, 3);
        assert_eq!(w[0], 1.0);
        assert_eq!(w[1], -0.5);
        assert_eq!(w[2], -0.125);
        assert_eq!(w[3], -0.0625);
    }

    #[test]
    fn gl_examples() {
        let zero = GridFunction::new(1.0, vec![0.0; 33]).unwrap();
        assert!(gl_derivative(0.5, &zero)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let singular = sample(&parse("x^-0.5").unwrap(), 1.0, 8).unwrap();
        assert!(matches!(
            gl_derivative(0.5, &singular),
            Err(Error::Unsupported(_))
        ));

        let f = parse("x^2").unwrap();
        let exact =
            apply_derivative(&named_spec(NamedKind::RiemannLiouville, 0.5).unwrap(), &f).unwrap();
        let coarse = interior_error(
            &gl_derivative(0.5, &sample(&f, 1.0, 128).unwrap()).unwrap(),
            &exact,
        );
        let fine = interior_error(
            &gl_derivative(0.5, &sample(&f, 1.0, 256).unwrap()).unwrap(),
            &exact,
        );
        let order = (coarse / fine).log2();
        assert!((order - 1.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn differentiate_is_exact_on_quadratics() {
        let g = sample(&parse("3*x^2 - x + 2").unwrap(), 1.0, 10).unwrap();
        let d = differentiate(&g).unwrap();
        for j in 0..=10 {
            let x = g.node(j);
            assert!((d.values()[j] - (6.0 * x - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_examples() {
        let caputo = named_spec(NamedKind::Caputo, 0.5).unwrap();
        let f = parse("x").unwrap();
        let exact = apply_derivative(&caputo, &f).unwrap();
        let e64 = interior_error(
            &nth_level_derivative_numeric(&caputo, &sample(&f, 1.0, 64).unwrap()).unwrap(),
            &exact,
        );
        let e256 = interior_error(
            &nth_level_derivative_numeric(&caputo, &sample(&f, 1.0, 256).unwrap()).unwrap(),
            &exact,
        );
        // d/dx and the product trapezoid are exact on polynomials of degree <= 2
        assert!(e64 < 1e-12 && e256 < 1e-12, "{e64} {e256}");

        let f = parse("x^3").unwrap();
        let exact = apply_derivative(&caputo, &f).unwrap();
        let e64 = interior_error(
            &nth_level_derivative_numeric(&caputo, &sample(&f, 1.0, 64).unwrap()).unwrap(),
            &exact,
        );
        let e256 = interior_error(
            &nth_level_derivative_numeric(&caputo, &sample(&f, 1.0, 256).unwrap()).unwrap(),
            &exact,
        );
        assert!(e256 < e64 / 4.0, "{e64} {e256}");

        let rl = named_spec(NamedKind::RiemannLiouville, 0.5).unwrap();
        let zero = GridFunction::new(1.0, vec![0.0; 17]).unwrap();
        assert!(nth_level_derivative_numeric(&rl, &zero)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn second_level_chain_converges() {
        let spec = DerivativeSpec::new(0.5, vec![0.25, 0.25]).unwrap();
        let f = parse("x^2").unwrap();
        let exact = apply_derivative(&spec, &f).unwrap();
        let window = |approx: &GridFunction| {
            (0..=approx.node_count())
                .filter(|&j| approx.node(j) >= 0.2)
                .map(|j| (approx.values()[j] - evaluate(&exact, approx.node(j)).unwrap()).abs())
                .fold(0.0, f64::max)
        };
        let coarse =
            window(&nth_level_derivative_numeric(&spec, &sample(&f, 1.0, 128).unwrap()).unwrap());
        let fine =
            window(&nth_level_derivative_numeric(&spec, &sample(&f, 1.0, 256).unwrap()).unwrap());
        let order = (coarse / fine).log2();
        assert!(order >= 1.0, "order {order} ({coarse} -> {fine})");
    }
}
