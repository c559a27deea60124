//! Gamma function on the positive half-line.
//!
//! Every closed-form coefficient in the operator algebra is a ratio of Gamma
//! values, so `log_gamma` is evaluated piecewise to keep relative accuracy
//! uniform, including near the roots of ln Γ at 1 and 2:
//!
//! * `x < 0.5`: recurrence `ln Γ(x) = ln Γ(1 + x) - ln x`;
//! * `0.5 <= x <= 2.5`: Taylor series of `ln Γ(1 + z)` about `z = 0` in the
//!   form of Abramowitz & Stegun 6.1.33, with `ζ(n) - 1` tabulated once by
//!   direct summation plus an Euler–Maclaurin tail;
//! * `x > 2.5`: Stirling series (Bernoulli numbers through `B_16`) after an
//!   upward shift to `x >= 10`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Number of `ζ(n) - 1` coefficients, n = 2..=SERIES_TERMS+1.
const SERIES_TERMS: usize = 48;

/// Stirling coefficients `B_2k / (2k (2k - 1))`, k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `B_2j / (2j)!`, j = 1..=6, for the Euler–Maclaurin tail of ζ.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    (1.0 / 6.0) / 2.0,
    (-1.0 / 30.0) / 24.0,
    (1.0 / 42.0) / 720.0,
    (-1.0 / 30.0) / 40_320.0,
    (5.0 / 66.0) / 3_628_800.0,
    (-691.0 / 2730.0) / 479_001_600.0,
];

fn zeta_minus_one_table() -> &'static [f64; SERIES_TERMS] {
    static TABLE: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; SERIES_TERMS];
        for (idx, slot) in table.iter_mut().enumerate() {
            *slot = zeta_minus_one(idx as i32 + 2);
        }
        table
    })
}

/// `ζ(n) - 1` for integer `n >= 2`.
fn zeta_minus_one(n: i32) -> f64 {
    const CUT: i32 = 20;
    let a = f64::from(CUT);
    let nf = f64::from(n);
    // Tail first so the small terms are accumulated before the large ones.
    let mut tail = a.powi(1 - n) / (nf - 1.0) + 0.5 * a.powi(-n);
    let mut rising = nf;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let j = j as i32 + 1;
        if j > 1 {
            rising *= (nf + f64::from(2 * j - 3)) * (nf + f64::from(2 * j - 2));
        }
        tail += coeff * rising * a.powi(-n - 2 * j + 1);
    }
    let mut sum = tail;
    for k in (2..CUT).rev() {
        sum += f64::from(k).powi(-n);
    }
    sum
}

/// `ln Γ(1 + z)` for `|z| <= 0.5`.
fn ln_gamma_1p(z: f64) -> f64 {
    let table = zeta_minus_one_table();
    let mut series = 0.0;
    // Horner-like accumulation from the highest order down.
    for (idx, zm1) in table.iter().enumerate().rev() {
        let n = idx + 2;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        series = series * z + sign * zm1 / n as f64;
    }
    series *= z * z;
    -z.ln_1p() + z * (1.0 - EULER_GAMMA) + series
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    for c in STIRLING.iter().rev() {
        corr = corr * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr * inv
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_1p(x) - x.ln()
    } else if x <= 1.5 {
        ln_gamma_1p(x - 1.0)
    } else if x <= 2.5 {
        let z = x - 2.0;
        z.ln_1p() + ln_gamma_1p(z)
    } else if x < 10.0 {
        let shift = (10.0 - x).ceil();
        let mut prod = 1.0;
        let mut k = 0.0;
        while k < shift {
            prod *= x + k;
            k += 1.0;
        }
        ln_gamma_stirling(x + shift) - prod.ln()
    } else {
        ln_gamma_stirling(x)
    }
}

/// Natural logarithm of Γ(x) for finite `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!(
            "log_gamma requires a finite positive argument, got {x}"
        )));
    }
    Ok(ln_gamma_unchecked(x))
}

/// Γ(a) / Γ(b) via `exp(ln Γ(a) - ln Γ(b))`.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a == b && a.is_finite() && a > 0.0 {
        return Ok(1.0);
    }
    Ok((log_gamma(a)? - log_gamma(b)?).exp())
}

/// Γ(x) for `0 < x <= 171`.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(log_gamma(x)?.exp())
}

/// 1 / Γ(x), defined as zero at the poles `x = 0, -1, -2, ...` and
/// restricted to `x > -1` otherwise.
///
/// Needed for kernel coefficients like `1/Γ(α + γ₁ + γ₂ - 1)` whose
/// argument can reach zero at admissible boundary parameters.
pub fn recip_gamma(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > 0.0 {
        return Ok((-log_gamma(x)?).exp());
    }
    if x > -1.0 {
        // Γ(x) = Γ(x + 1) / x
        return Ok(x * (-log_gamma(x + 1.0)?).exp());
    }
    Err(Error::domain(format!("recip_gamma argument {x} <= -1")))
}
