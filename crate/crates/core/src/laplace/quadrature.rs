//! Truncated transform `∫₀^T f(x) e^{-sx} dx` for the numeric cross-check.

use super::LaplacePoint;
use crate::error::{Error, Result};
use crate::poweralg::PowerSum;

// Kronrod abscissae on [-1, 1] in decreasing order; odd indices and the
// centre are the embedded 7-point Gauss nodes.
const XK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

const MAX_INTERVALS: usize = 4000;
const SERIES_MAX_TERMS: usize = 80;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(centre);
    let mut kronrod = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XK[i];
        let pair = g(centre - dx) + g(centre + dx);
        kronrod += WK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive G7-K15: the panel with the largest error estimate is
/// bisected until the total estimate drops below `rel_tol` times the value.
fn adaptive<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut panels = vec![gauss_kronrod(&g, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= rel_tol * value.abs()
            || error < f64::MIN_POSITIVE
            || panels.len() >= MAX_INTERVALS
        {
            return value;
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gauss_kronrod(&g, p.a, mid));
        panels.push(gauss_kronrod(&g, mid, p.b));
    }
}

/// `∫₀^c x^μ e^{-sx} dx = c^{μ+1} Σₖ (-sc)^k / (k! (μ+k+1))`, for `sc <= 1`.
fn first_cell(mu: f64, s: f64, c: f64) -> f64 {
    let z = -s * c;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 0..SERIES_MAX_TERMS {
        let term = power / (mu + k as f64 + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        power *= z / (k as f64 + 1.0);
    }
    c.powf(mu + 1.0) * sum
}

/// `∫₀^T f(x) e^{-sx} dx`: the cell `[0, min(T, 1/s)]` is integrated term by
/// term from the exponential series, so the `x^μ` singularities never reach
/// the quadrature; the rest uses adaptive Gauss–Kronrod.
pub fn truncated_transform(f: &PowerSum, s: LaplacePoint, t_end: f64) -> Result<f64> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain(format!(
            "truncation point must be finite and > 0, got {t_end}"
        )));
    }
    let s = s.value();
    let c = t_end.min(1.0 / s);
    let head: f64 = f
        .terms()
        .iter()
        .map(|t| t.coeff * first_cell(t.exp, s, c))
        .sum();
    if c >= t_end {
        return Ok(head);
    }
    let terms = f.terms();
    let integrand = |x: f64| {
        let ln_x = x.ln();
        let fx: f64 = terms.iter().map(|t| t.coeff * (t.exp * ln_x).exp()).sum();
        fx * (-s * x).exp()
    };
    Ok(head + adaptive(integrand, c, t_end, 1e-13))
}
