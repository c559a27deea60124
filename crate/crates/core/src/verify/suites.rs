use rand::Rng;

use super::gen::{self, CaseRng};
use super::Recorder;
use crate::error::{Error, Result};
use crate::fracops::{
    abel_solve, apply_derivative, classify, fundamental_theorem_residual, kernel_basis, named_spec,
    projector_closed_form, projector_direct, DerivativeSpec, NamedKind,
};
use crate::laplace::{
    boundary_terms, degenerate_consistency_check, named_formula_check, numeric_transform_check,
    operational_formula_check, rl_integral_transform_check, LaplacePoint,
};
use crate::numgrid::{
    convergence_study, rl_integral_numeric, sample, semigroup_residual_numeric, GridOperator,
    QuadratureWeights,
};
use crate::poweralg::{evaluate, parse, rl_integral, value_at_zero, weak_derivative, PowerSum};
use crate::specialfn::{gamma as gamma_fn, gamma_ratio};

const LADDER: [usize; 5] = [64, 128, 256, 512, 1024];

fn coeff_scale(f: &PowerSum) -> f64 {
    f.max_abs_coeff().max(f64::MIN_POSITIVE)
}

pub(super) fn gamma(rng: &mut CaseRng, rec: &mut Recorder) {
    for _ in 0..1000 {
        let x = rng.random_range(0.01..100.0);
        let r = gamma_ratio(x + 1.0, x).map(|v| (v / x - 1.0).abs());
        rec.check_result(r, 1e-12, || format!("recurrence at x = {x}"));
    }
    for _ in 0..1000 {
        let a = rng.random_range(0.01..100.0);
        let b = rng.random_range(0.01..100.0);
        let r = gamma_ratio(a, b).and_then(|ab| Ok((ab * gamma_ratio(b, a)? - 1.0).abs()));
        rec.check_result(r, 1e-12, || format!("symmetry at ({a}, {b})"));
        let positive = gamma_ratio(a, b).is_ok_and(|v| v > 0.0);
        rec.expect(positive, || format!("positivity at ({a}, {b})"));
    }
}

pub(super) fn algebra(rng: &mut CaseRng, rec: &mut Recorder) {
    for _ in 0..200 {
        let f = gen::power_sum(rng, -0.99, 5.0, 8);
        let text = f.to_exact_string();
        let same = parse(&text).is_ok_and(|g| g == f);
        rec.expect(same, || format!("exact round trip of {text}"));
    }
    for _ in 0..100 {
        let alpha = rng.random_range(0.0..2.0);
        let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let f = gen::power_sum(rng, -0.95, 4.0, 6);
        let g = gen::power_sum(rng, -0.95, 4.0, 6);
        let combined = PowerSum::linear_combination([(a, &f), (b, &g)]);
        let r = (|| {
            let lhs = rl_integral(alpha, &combined)?;
            let rhs = PowerSum::linear_combination([
                (a, &rl_integral(alpha, &f)?),
                (b, &rl_integral(alpha, &g)?),
            ]);
            Ok(lhs.max_abs_difference(&rhs)
                / (a.abs() * coeff_scale(&rl_integral(alpha, &f)?)
                    + b.abs() * coeff_scale(&rl_integral(alpha, &g)?)))
        })();
        rec.check_result(r, 1e-12, || {
            format!("I^{alpha} linearity on {f:#} and {g:#}")
        });

        let f = gen::mixed_power_sum(rng, 0.0, 4.0, 6);
        let g = gen::mixed_power_sum(rng, 0.0, 4.0, 6);
        let combined = PowerSum::linear_combination([(a, &f), (b, &g)]);
        let r = (|| {
            let df = weak_derivative(&f)?;
            let dg = weak_derivative(&g)?;
            let lhs = weak_derivative(&combined)?;
            let rhs = PowerSum::linear_combination([(a, &df), (b, &dg)]);
            let scale = a.abs() * df.max_abs_coeff() + b.abs() * dg.max_abs_coeff();
            Ok(if scale == 0.0 {
                lhs.max_abs_coeff()
            } else {
                lhs.max_abs_difference(&rhs) / scale
            })
        })();
        rec.check_result(r, 1e-12, || format!("d/dx linearity on {f:#} and {g:#}"));
    }
}

pub(super) fn fundamental_theorem(rng: &mut CaseRng, rec: &mut Recorder) {
    for i in 0..500 {
        let spec = gen::spec(rng, 1 + i % 4);
        let phi = gen::phi(rng, spec.alpha());
        let r = fundamental_theorem_residual(&spec, &phi)
            .map(|res| res.max_abs_coeff() / coeff_scale(&phi));
        rec.check_result(r, 1e-10, || {
            format!("D{spec} I^alpha phi = phi for phi = {phi:#}")
        });
    }
}

/// Number of distinct exponents among `x^{α+sₖ-k}` (inside L1) that the
/// unreduced chain annihilates.
fn annihilated_candidates(spec: &DerivativeSpec) -> usize {
    let mut found: Vec<f64> = Vec::new();
    let sums = spec.partial_sums();
    for (k, s) in sums.iter().enumerate() {
        let exp = spec.alpha() + s - (k + 1) as f64;
        if exp <= -1.0 + 1e-9 || found.iter().any(|&e| (e - exp).abs() < 1e-9) {
            continue;
        }
        let Ok(b) = PowerSum::monomial(1.0, exp) else {
            continue;
        };
        if apply_derivative(spec, &b).is_ok_and(|d| d.max_abs_coeff() < 1e-12) {
            found.push(exp);
        }
    }
    found.len()
}

pub(super) fn kernel(rng: &mut CaseRng, rec: &mut Recorder) {
    for i in 0..200 {
        let forced = i % 4 == 3;
        let spec = if forced {
            gen::degenerate_spec(rng)
        } else {
            gen::spec(rng, 1 + i % 4)
        };
        let class = classify(&spec);
        let kernel = kernel_basis(&spec);
        for b in kernel.basis() {
            let r = apply_derivative(&spec, &b).map(|d| d.max_abs_coeff());
            rec.check_result(r, 1e-12, || format!("D{spec} annihilates {b:#}"));
        }
        rec.expect(kernel.dimension() == class.truly_level, || {
            format!(
                "{spec}: kernel dimension {} vs truly level {}",
                kernel.dimension(),
                class.truly_level
            )
        });
        let count = annihilated_candidates(&spec);
        rec.expect(count == kernel.dimension(), || {
            format!(
                "{spec}: {count} annihilated candidate monomials vs dimension {}",
                kernel.dimension()
            )
        });
        rec.expect(
            kernel.exponents.iter().all(|&e| e > -1.0 && e <= 0.0),
            || {
                format!(
                    "{spec}: kernel exponents {:?} outside (-1, 0]",
                    kernel.exponents
                )
            },
        );
        if forced {
            rec.expect(class.truly_level < spec.level(), || {
                format!(
                    "{spec}: boundary spec not reduced (truly level {})",
                    class.truly_level
                )
            });
        }
    }
    for _ in 0..100 {
        let spec = gen::degenerate_spec(rng);
        let reduced = classify(&spec).reduced;
        let f = gen::admissible(rng, &spec, |f| apply_derivative(&spec, f).is_ok());
        let r = (|| {
            let a = apply_derivative(&spec, &f)?;
            let b = apply_derivative(&reduced, &f)?;
            Ok(a.max_abs_difference(&b) / coeff_scale(&f))
        })();
        rec.check_result(r, 1e-10, || format!("D{spec} = D{reduced} on {f:#}"));
    }
    for i in 0..100 {
        let spec = gen::spec(rng, 1 + i % 4);
        let alpha = spec.alpha();
        let lo = (1.0 - alpha).max(0.0) + 0.01;
        let f = gen::power_sum(rng, lo, 4.0, 6);
        let r = (|| {
            let rl = named_spec(NamedKind::RiemannLiouville, alpha)?;
            let a = apply_derivative(&spec, &f)?;
            let b = apply_derivative(&rl, &f)?;
            Ok(a.max_abs_difference(&b) / coeff_scale(&b).max(coeff_scale(&f)))
        })();
        rec.check_result(r, 1e-10, || format!("D{spec} = D_RL on {f:#}"));
    }
}

fn projector_checks(spec: &DerivativeSpec, f: &PowerSum) -> Result<[f64; 4]> {
    let scale = coeff_scale(f);
    let direct = projector_direct(spec, f)?;
    let closed = projector_closed_form(spec, f)?;
    let p = direct.to_power_sum();
    let again = projector_direct(spec, &p)?.to_power_sum();
    let restored = rl_integral(spec.alpha(), &apply_derivative(spec, f)?)?;
    let second_ft = restored.max_abs_difference(&(f - &closed.to_power_sum()));
    Ok([
        closed.max_abs_difference(&direct) / scale,
        direct.off_kernel / scale,
        again.max_abs_difference(&p) / scale,
        second_ft / scale,
    ])
}

fn projector_admissible(rng: &mut CaseRng, spec: &DerivativeSpec) -> PowerSum {
    gen::admissible(rng, spec, |f| {
        projector_direct(spec, f).is_ok() && projector_closed_form(spec, f).is_ok()
    })
}

/// Single kernel coefficient from the closed form and the direct route.
fn single_coefficients(spec: &DerivativeSpec, f: &PowerSum) -> Result<(f64, f64)> {
    let closed = projector_closed_form(spec, f)?;
    let direct = projector_direct(spec, f)?;
    match (closed.components.as_slice(), direct.components.as_slice()) {
        ([c], [d]) => Ok((c.coeff, d.coeff)),
        _ => Err(Error::Spec(format!(
            "{spec} does not have a one-dimensional kernel"
        ))),
    }
}

pub(super) fn projector(rng: &mut CaseRng, rec: &mut Recorder) {
    const LABELS: [&str; 4] = [
        "closed form vs direct",
        "off-kernel residue",
        "idempotence",
        "2nd fundamental theorem",
    ];
    for i in 0..200 {
        let spec = gen::spec(rng, 1 + i % 2);
        let f = projector_admissible(rng, &spec);
        match projector_checks(&spec, &f) {
            Ok(residuals) => {
                for (label, r) in LABELS.iter().zip(residuals) {
                    rec.check(r, 1e-10, || format!("{label} for D{spec} on {f:#}"));
                }
            }
            Err(e) => rec.check(f64::INFINITY, 1e-10, || {
                format!("projector of D{spec} on {f:#}: {e}")
            }),
        }
    }
    for _ in 0..20 {
        let alpha = rng.random_range(0.05..=1.0);
        let f = gen::mixed_power_sum(rng, 0.0, 3.0, 5);
        let f0 = value_at_zero(&f).finite().unwrap_or(f64::NAN);
        let r =
            named_spec(NamedKind::Caputo, alpha).and_then(|spec| single_coefficients(&spec, &f));
        match r {
            Ok((closed, direct)) => {
                rec.check((closed - f0).abs(), 0.0, || {
                    format!("Caputo projector of {f:#} is f(0) exactly (alpha {alpha})")
                });
                rec.check((direct - f0).abs() / coeff_scale(&f), 1e-12, || {
                    format!("Caputo direct projector of {f:#} (alpha {alpha})")
                });
            }
            Err(e) => rec.check(f64::INFINITY, 0.0, || {
                format!("Caputo projector of {f:#}: {e}")
            }),
        }
    }
    for i in 0..40 {
        let alpha = rng.random_range(0.05..0.95);
        let (kind, lower) = if i < 20 {
            (NamedKind::RiemannLiouville, 0.0)
        } else {
            let g = rng.random_range(0.0..1.0 - alpha);
            (NamedKind::Hilfer(g), g)
        };
        let r = (|| {
            let spec = named_spec(kind, alpha)?;
            let f = projector_admissible(rng, &spec);
            // p = (I^{1-α-γ} f)(0) / Γ(α+γ)
            let inner = rl_integral(1.0 - alpha - lower, &f)?;
            let want =
                value_at_zero(&inner).finite().unwrap_or(f64::NAN) / gamma_fn(alpha + lower)?;
            let (closed, direct) = single_coefficients(&spec, &f)?;
            let scale = coeff_scale(&f);
            Ok(((closed - want).abs() / scale).max((direct - want).abs() / scale))
        })();
        rec.check_result(r, 1e-10, || {
            format!("{kind:?} projector coefficient, alpha {alpha}")
        });
    }
}

pub(super) fn abel(rng: &mut CaseRng, rec: &mut Recorder) {
    for _ in 0..300 {
        let alpha = rng.random_range(0.05..0.95);
        let bound = alpha - 1.0;
        let solvable_draw = rng.random_bool(0.5);
        let mut f = gen::power_sum(rng, bound + 0.01, 3.0, 5);
        if !solvable_draw {
            let exp = if rng.random_bool(0.3) {
                bound
            } else {
                rng.random_range(-0.99..bound - 0.01)
            };
            let extra =
                PowerSum::monomial(rng.random_range(0.1..2.0), exp).expect("exponent above -1");
            f = &f + &extra;
        }
        let scan_unsolvable = f.terms().iter().any(|t| t.exp <= bound);
        match abel_solve(alpha, &f) {
            Ok(phi) => {
                rec.expect(!scan_unsolvable, || {
                    format!("abel_solve({alpha}) accepted {f:#}")
                });
                let r =
                    rl_integral(alpha, &phi).map(|g| g.max_abs_difference(&f) / coeff_scale(&f));
                rec.check_result(r, 1e-12, || {
                    format!("I^{alpha} abel_solve({alpha}, {f:#}) = f")
                });
            }
            Err(Error::NotSolvable { exponent, .. }) => {
                rec.expect(scan_unsolvable && exponent <= bound, || {
                    format!("abel_solve({alpha}) rejected {f:#} at exponent {exponent}")
                });
            }
            Err(e) => rec.check(f64::INFINITY, 0.0, || {
                format!("abel_solve({alpha}, {f:#}): {e}")
            }),
        }
    }
}

fn random_grid(rng: &mut CaseRng) -> Vec<LaplacePoint> {
    (0..3)
        .map(|_| LaplacePoint::new(rng.random_range(0.2..20.0)).expect("s > 0"))
        .collect()
}

pub(super) fn laplace(rng: &mut CaseRng, rec: &mut Recorder) {
    for i in 0..200 {
        let spec = gen::spec(rng, 1 + i % 2);
        let grid = random_grid(rng);
        let f = gen::admissible(rng, &spec, |f| {
            operational_formula_check(&spec, f, &grid).is_ok()
        });
        let r = operational_formula_check(&spec, &f, &grid);
        rec.check_result(r, 1e-10, || format!("transform of D{spec} {f:#}"));
    }
    for i in 0..60 {
        let alpha = rng.random_range(0.05..0.95);
        let kind = match i / 20 {
            0 => NamedKind::RiemannLiouville,
            1 => NamedKind::Caputo,
            _ => NamedKind::Hilfer(rng.random_range(0.0..1.0 - alpha)),
        };
        let grid = random_grid(rng);
        let r = named_spec(kind, alpha).and_then(|spec| {
            let f = gen::admissible(rng, &spec, |f| {
                named_formula_check(kind, alpha, f, &grid).is_ok()
            });
            named_formula_check(kind, alpha, &f, &grid)
        });
        rec.check_result(r, 1e-10, || format!("{kind:?} transform, alpha {alpha}"));
    }
    for _ in 0..20 {
        let spec = gen::degenerate_second_level(rng);
        let grid = random_grid(rng);
        let reduced = classify(&spec).reduced;
        let f = gen::admissible(rng, &spec, |f| {
            boundary_terms(&spec, f).is_ok() && boundary_terms(&reduced, f).is_ok()
        });
        let r = degenerate_consistency_check(&spec, &f, &grid);
        rec.check_result(r, 1e-10, || {
            format!("degenerate D{spec} vs Hilfer form on {f:#}")
        });
        if let Ok(bt) = boundary_terms(&spec, &f) {
            let merged = spec.gamma()[1] == 1.0;
            let vanished = if merged { bt.a1 } else { bt.a2 };
            rec.check(vanished.abs(), 0.0, || {
                format!("D{spec}: expected vanishing boundary term, got {bt:?}")
            });
        }
    }
    for _ in 0..50 {
        let alpha = rng.random_range(0.0..2.0);
        let f = gen::power_sum(rng, -0.95, 4.0, 6);
        let grid = random_grid(rng);
        let r = rl_integral_transform_check(alpha, &f, &grid);
        rec.check_result(r, 1e-12, || format!("transform of I^{alpha} {f:#}"));
    }
    for _ in 0..20 {
        let f = gen::mixed_power_sum(rng, 0.0, 4.0, 5);
        for s in [5.0, 10.0] {
            let r = LaplacePoint::new(s).and_then(|s| numeric_transform_check(&f, s));
            rec.check_result(r, 1e-6, || {
                format!("truncated transform of {f:#} at s = {s}")
            });
        }
    }
}

pub(super) fn axioms(rng: &mut CaseRng, rec: &mut Recorder) {
    // semigroup
    for _ in 0..100 {
        let (a, b) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let f = gen::power_sum(rng, -0.95, 4.0, 8);
        let r = (|| {
            Ok(rl_integral(a, &rl_integral(b, &f)?)?.relative_difference(&rl_integral(a + b, &f)?))
        })();
        rec.check_result(r, 1e-12, || format!("I^{a} I^{b} = I^{} on {f:#}", a + b));
    }
    for (a, b) in [(0.5, 0.5), (0.3, 0.6), (0.25, 1.0)] {
        for text in ["1", "x", "x^2"] {
            let f = parse(text).expect("literal");
            let residuals: Result<Vec<f64>> = [64usize, 128, 256, 512]
                .iter()
                .map(|&n| semigroup_residual_numeric(a, b, &sample(&f, 1.0, n)?))
                .collect();
            match residuals {
                Ok(r) => {
                    for w in r.windows(2) {
                        let shrinks = w[1] < w[0] || w[1] < 1e-14;
                        rec.expect(shrinks, || {
                            format!(
                                "numeric semigroup residual ({a}, {b}) on {text}: {:e} -> {:e}",
                                w[0], w[1]
                            )
                        });
                    }
                }
                Err(e) => rec.check(f64::INFINITY, 0.0, || {
                    format!("numeric semigroup ({a}, {b}) on {text}: {e}")
                }),
            }
        }
    }
    // order one is the antiderivative vanishing at 0
    for _ in 0..100 {
        let f = gen::power_sum(rng, -0.95, 4.0, 6);
        let r = (|| {
            let by_rule = PowerSum::from_pairs(
                f.terms()
                    .iter()
                    .map(|t| (t.coeff / (t.exp + 1.0), t.exp + 1.0)),
            )?;
            Ok(rl_integral(1.0, &f)?.max_abs_difference(&by_rule))
        })();
        rec.check_result(r, 0.0, || format!("I^1 of {f:#} is the antiderivative"));
    }
    for _ in 0..20 {
        let f = gen::mixed_power_sum(rng, 1.0, 4.0, 4);
        let r = (|| {
            let exact = rl_integral(1.0, &f)?;
            let grid = rl_integral_numeric(1.0, &sample(&f, 1.0, 512)?)?;
            let mut worst = 0.0f64;
            for j in 1..=512 {
                worst = worst.max((grid.values()[j] - evaluate(&exact, grid.node(j))?).abs());
            }
            Ok(worst)
        })();
        rec.check_result(r, 1e-4, || format!("I^1 of {f:#} against the grid rule"));
    }
    // non-negativity
    for alpha in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.5] {
        let r = QuadratureWeights::new(alpha, 256, 1.0).map(|w| {
            (1..=256)
                .flat_map(|j| w.row(j))
                .fold(0.0f64, |m, v| m.max(-v))
        });
        rec.check_result(r, 0.0, || {
            format!("product-trapezoid weights for alpha {alpha} are >= 0")
        });
    }
    for _ in 0..100 {
        let alpha = rng.random_range(0.0..2.0);
        let f = gen::mixed_power_sum(rng, 0.0, 4.0, 6);
        let f = PowerSum::from_pairs(f.terms().iter().map(|t| (t.coeff.abs(), t.exp)))
            .expect("valid terms");
        let r =
            rl_integral(alpha, &f).map(|g| g.terms().iter().fold(0.0f64, |m, t| m.max(-t.coeff)));
        rec.check_result(r, 0.0, || format!("I^{alpha} of non-negative {f:#}"));
        if alpha > 0.0 {
            let r = sample(&f, 1.0, 128)
                .and_then(|g| rl_integral_numeric(alpha, &g))
                .map(|g| g.values().iter().fold(0.0f64, |m, v| m.max(-v)));
            rec.check_result(r, 0.0, || format!("grid I^{alpha} of non-negative {f:#}"));
        }
    }
    // strong continuity in the order
    for _ in 0..100 {
        let alpha0 = rng.random_range(0.0..2.0);
        let delta = if alpha0 > 1e-6 && rng.random_bool(0.5) {
            -1e-6
        } else {
            1e-6
        };
        let f = gen::power_sum(rng, -0.9, 4.0, 6);
        let r = (|| {
            let a = rl_integral(alpha0, &f)?;
            let b = rl_integral(alpha0 + delta, &f)?;
            if a.len() != b.len() {
                return Err(Error::Unsupported(format!(
                    "term counts differ: {} vs {}",
                    a.len(),
                    b.len()
                )));
            }
            Ok(a.terms()
                .iter()
                .zip(b.terms())
                .fold(0.0f64, |m, (s, t)| m.max((s.coeff - t.coeff).abs())))
        })();
        rec.check_result(r, 1e-4, || {
            format!("I^alpha continuity at alpha {alpha0} on {f:#}")
        });
    }
}

pub(super) fn numerics(rec: &mut Recorder) {
    for text in ["x^2", "x^3"] {
        let f = parse(text).expect("literal");
        for alpha in [0.25, 0.5, 0.75] {
            match convergence_study(&GridOperator::RlIntegral { alpha }, &f, &LADDER) {
                Ok(rows) => {
                    for row in &rows[1..] {
                        let p = row.observed_order.unwrap_or(f64::NAN);
                        rec.check_at_least(p, 1.8, || {
                            format!(
                                "product trapezoid order, alpha {alpha}, {text}, N = {}",
                                row.n
                            )
                        });
                    }
                }
                Err(e) => rec.check(f64::INFINITY, 0.0, || {
                    format!("I^{alpha} study on {text}: {e}")
                }),
            }
        }
    }
    for text in ["x", "x^2"] {
        let f = parse(text).expect("literal");
        for alpha in [0.25, 0.5, 0.75] {
            match convergence_study(&GridOperator::GlDerivative { alpha }, &f, &LADDER) {
                Ok(rows) => {
                    for row in &rows[1..] {
                        let p = row.observed_order.unwrap_or(f64::NAN);
                        rec.check_at_least(p, 0.8, || {
                            format!(
                                "Grünwald–Letnikov order, alpha {alpha}, {text}, N = {}",
                                row.n
                            )
                        });
                    }
                }
                Err(e) => rec.check(f64::INFINITY, 0.0, || format!("GL study on {text}: {e}")),
            }
        }
    }
    let r = (|| {
        let f = parse("x")?;
        let rows = convergence_study(&GridOperator::RlIntegral { alpha: 0.5 }, &f, &[1024])?;
        Ok(rows[0].max_error)
    })();
    rec.check_result(r, 1e-5, || "I^0.5 x on N = 1024".to_string());
    for text in ["1", "x"] {
        for alpha in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
            let r = (|| {
                let f = parse(text)?;
                Ok(convergence_study(&GridOperator::RlIntegral { alpha }, &f, &[64])?[0].max_error)
            })();
            rec.check_result(r, 1e-12, || format!("grid I^{alpha} exact on {text}"));
        }
    }
}
