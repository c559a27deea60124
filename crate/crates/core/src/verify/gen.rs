//! Seeded generators for specs and test functions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fracops::{classify, kernel_basis, DerivativeSpec};
use crate::poweralg::{rl_integral, PowerSum};

pub type CaseRng = ChaCha8Rng;

fn coeff(rng: &mut CaseRng) -> f64 {
    let magnitude = rng.random_range(0.1..2.0);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// Order `α ∈ [0.05, 1]` and types `γₖ ∈ [0, 1.2)`, rejection-sampled until
/// `α + sₖ <= k` holds for every `k`. One type in ten is exactly zero.
pub fn spec(rng: &mut CaseRng, level: usize) -> DerivativeSpec {
    loop {
        let alpha = rng.random_range(0.05..=1.0);
        let gamma = (0..level)
            .map(|_| {
                if rng.random_bool(0.1) {
                    0.0
                } else {
                    rng.random_range(0.0..1.2)
                }
            })
            .collect();
        if let Ok(spec) = DerivativeSpec::new(alpha, gamma) {
            return spec;
        }
    }
}

/// A spec of level 2 to 4 sitting on a reduction boundary: either some
/// `γₖ = 1` (k >= 2) or `α + sₙ = n - 1`.
pub fn degenerate_spec(rng: &mut CaseRng) -> DerivativeSpec {
    loop {
        let level = rng.random_range(2..=4);
        let base = spec(rng, level);
        let alpha = base.alpha();
        let mut gamma = base.gamma().to_vec();
        if rng.random_bool(0.5) {
            let k = rng.random_range(1..level);
            gamma[k] = 1.0;
        } else {
            let head: f64 = gamma[..level - 1].iter().sum();
            gamma[level - 1] = (level - 1) as f64 - alpha - head;
        }
        if let Ok(spec) = DerivativeSpec::new(alpha, gamma) {
            if classify(&spec).is_degenerate() {
                return spec;
            }
        }
    }
}

/// Second-level spec with `γ₂ = 1` or `α + γ₁ + γ₂ <= 1`.
pub fn degenerate_second_level(rng: &mut CaseRng) -> DerivativeSpec {
    loop {
        let alpha = rng.random_range(0.05..0.95);
        let g1 = rng.random_range(0.0..1.0 - alpha);
        let g2 = if rng.random_bool(0.5) {
            1.0
        } else {
            rng.random_range(0.0..=1.0 - alpha - g1)
        };
        if let Ok(spec) = DerivativeSpec::new(alpha, vec![g1, g2]) {
            return spec;
        }
    }
}

/// Up to `max_terms` terms with exponents drawn from `[lo, hi)`.
pub fn power_sum(rng: &mut CaseRng, lo: f64, hi: f64, max_terms: usize) -> PowerSum {
    loop {
        let count = rng.random_range(1..=max_terms);
        let pairs: Vec<(f64, f64)> = (0..count)
            .map(|_| (coeff(rng), rng.random_range(lo..hi)))
            .collect();
        let f = PowerSum::from_pairs(pairs).expect("exponents above -1");
        if !f.is_zero() {
            return f;
        }
    }
}

/// Like [`power_sum`], but each exponent is an integer in `0..=4` with
/// probability one half.
pub fn mixed_power_sum(rng: &mut CaseRng, lo: f64, hi: f64, max_terms: usize) -> PowerSum {
    loop {
        let count = rng.random_range(1..=max_terms);
        let pairs: Vec<(f64, f64)> = (0..count)
            .map(|_| {
                let exp = if rng.random_bool(0.5) {
                    f64::from(rng.random_range(0..=4u8))
                } else {
                    rng.random_range(lo..hi)
                };
                (coeff(rng), exp)
            })
            .collect();
        let f = PowerSum::from_pairs(pairs).expect("exponents above -1");
        if !f.is_zero() {
            return f;
        }
    }
}

/// `φ` with up to six terms and exponents in `(-α, 3)`, so that `I^α φ`
/// vanishes at 0 and is absolutely continuous.
pub fn phi(rng: &mut CaseRng, alpha: f64) -> PowerSum {
    power_sum(rng, -alpha + 0.02, 3.0, 6)
}

/// `I^α φ` plus a random kernel combination, sometimes plus one extra
/// monomial, redrawn until `accept` holds.
pub fn admissible<F>(rng: &mut CaseRng, spec: &DerivativeSpec, accept: F) -> PowerSum
where
    F: Fn(&PowerSum) -> bool,
{
    let kernel = kernel_basis(spec);
    loop {
        let base = rl_integral(spec.alpha(), &phi(rng, spec.alpha())).expect("order >= 0");
        let coeffs: Vec<f64> = kernel
            .exponents
            .iter()
            .map(|_| {
                if rng.random_bool(0.8) {
                    coeff(rng)
                } else {
                    0.0
                }
            })
            .collect();
        let f = &base + &kernel.combination(&coeffs);
        if rng.random_bool(0.5) {
            let extra = PowerSum::monomial(coeff(rng), rng.random_range(-0.95..3.0))
                .expect("exponent above -1");
            let g = &f + &extra;
            if !g.is_zero() && accept(&g) {
                return g;
            }
        }
        if !f.is_zero() && accept(&f) {
            return f;
        }
    }
}
