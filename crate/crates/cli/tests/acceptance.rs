//! Acceptance criteria 1 to 8, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines come out in order and unfiltered.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fracalc_core::fracops::{
    abel_solve, apply_derivative, classify, kernel_basis, named_spec, projector_closed_form,
    projector_direct, DerivativeSpec, NamedKind,
};
use fracalc_core::laplace::{
    default_s_grid, numeric_transform_check, operational_formula_check, LaplacePoint,
};
use fracalc_core::numgrid::{convergence_study, GridOperator};
use fracalc_core::poweralg::{parse, rl_integral};
use fracalc_core::verify::{run_suite, Suite, DEFAULT_SEED};
use fracalc_core::{Error, PowerSum};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn sum(expr: &str) -> PowerSum {
    parse(expr).expect("valid expression")
}

fn spec(alpha: f64, gamma: &[f64]) -> DerivativeSpec {
    DerivativeSpec::new(alpha, gamma.to_vec()).expect("valid spec")
}

/// Runs `suite` at the default seed and requires a clean report with at
/// least `min_cases` cases inside `limit`, then runs `spot`.
fn suite_criterion<F>(suite: Suite, min_cases: usize, limit: Duration, spot: F) -> Outcome
where
    F: FnOnce() -> Result<(), String>,
{
    let start = Instant::now();
    let report = run_suite(suite, DEFAULT_SEED);
    spot()?;
    let elapsed = start.elapsed();
    ensure(report.passed(), || report.to_string())?;
    ensure(report.cases >= min_cases, || {
        format!("{} cases, at least {min_cases} required", report.cases)
    })?;
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })?;
    Ok(format!(
        "{} cases in {:.3} s",
        report.cases,
        elapsed.as_secs_f64()
    ))
}

fn fundamental_theorem() -> Outcome {
    suite_criterion(
        Suite::FundamentalTheorem,
        500,
        Duration::from_secs(10),
        || {
            let phi = sum("x^-0.3 + 2*x^1.5 - 0.5");
            for s in [
                spec(0.5, &[0.5]),
                spec(0.4, &[0.3, 0.6]),
                spec(0.7, &[0.2, 0.5, 0.9, 0.1]),
            ] {
                let back = apply_derivative(&s, &rl_integral(s.alpha(), &phi).unwrap()).unwrap();
                let r = back.relative_difference(&phi);
                ensure(r < 1e-10, || format!("D I phi != phi for {s}: {r:e}"))?;
            }
            Ok(())
        },
    )
}

fn kernel() -> Outcome {
    suite_criterion(Suite::Kernel, 200, Duration::from_secs(5), || {
        for (s, dim) in [
            (spec(0.5, &[0.5, 0.5]), 2),
            (spec(0.5, &[0.3, 1.0]), 1),
            (spec(0.5, &[0.2, 0.3]), 1),
            (spec(0.5, &[0.5, 0.6, 0.6]), 3),
        ] {
            let basis = kernel_basis(&s);
            ensure(basis.dimension() == dim, || {
                format!("{s}: dimension {}", basis.dimension())
            })?;
            ensure(classify(&s).truly_level == dim, || {
                format!("{s}: truly level mismatch")
            })?;
            for b in basis.basis() {
                let d = apply_derivative(&s, &b).unwrap();
                ensure(d.max_abs_coeff() < 1e-12, || {
                    format!("{s} does not annihilate {b}")
                })?;
            }
        }
        Ok(())
    })
}

fn projector() -> Outcome {
    suite_criterion(Suite::Projector, 200, Duration::from_secs(5), || {
        let f = sum("3 + 2*x - x^1.5");
        let caputo = named_spec(NamedKind::Caputo, 0.5).unwrap();
        let p = projector_closed_form(&caputo, &f).unwrap().to_power_sum();
        ensure(p == PowerSum::constant(3.0), || {
            format!("Caputo projector gave {p}")
        })?;
        let s = spec(0.4, &[0.3, 0.6]);
        let g = sum("x^-0.7 + 4 + x^2.5");
        let closed = projector_closed_form(&s, &g).unwrap();
        let direct = projector_direct(&s, &g).unwrap();
        let d = closed.max_abs_difference(&direct);
        ensure(d < 1e-10, || format!("closed form vs direct: {d:e}"))?;
        let twice = projector_direct(&s, &direct.to_power_sum()).unwrap();
        let d = twice.max_abs_difference(&direct);
        ensure(d < 1e-10, || format!("projector not idempotent: {d:e}"))
    })
}

fn abel() -> Outcome {
    suite_criterion(Suite::Abel, 300, Duration::from_secs(2), || {
        let f = sum("x^-0.4 + x - 2");
        let phi = abel_solve(0.5, &f).unwrap();
        let r = rl_integral(0.5, &phi).unwrap().relative_difference(&f);
        ensure(r <= 1e-12, || format!("round trip residual {r:e}"))?;
        for bad in ["x^-0.5", "x^-0.7 + x"] {
            match abel_solve(0.5, &sum(bad)) {
                Err(Error::NotSolvable { .. }) => {}
                other => return Err(format!("{bad}: expected not solvable, got {other:?}")),
            }
        }
        Ok(())
    })
}

fn laplace() -> Outcome {
    suite_criterion(Suite::Laplace, 280, Duration::from_secs(5), || {
        let s = spec(0.4, &[0.3, 0.6]);
        let f = sum("x^-0.7 + 2*x^-0.3 - x^0.3 + 4 + x^2.5");
        let e = operational_formula_check(&s, &f, &default_s_grid()).unwrap();
        ensure(e < 1e-10, || format!("operational formula error {e:e}"))?;
        for v in [5.0, 10.0] {
            let e =
                numeric_transform_check(&sum("x^-0.5 + x^1.5 - 2"), LaplacePoint::new(v).unwrap())
                    .unwrap();
            ensure(e < 1e-6, || format!("numeric transform at s = {v}: {e:e}"))?;
        }
        Ok(())
    })
}

fn axioms() -> Outcome {
    suite_criterion(Suite::Axioms, 100, Duration::from_secs(5), || {
        let f = sum("x^-0.3 + 2*x^1.5 - 1");
        let composed = rl_integral(0.3, &rl_integral(0.4, &f).unwrap()).unwrap();
        let r = composed.relative_difference(&rl_integral(0.7, &f).unwrap());
        ensure(r <= 1e-12, || format!("semigroup residual {r:e}"))?;
        let i1 = rl_integral(1.0, &sum("2*x + 3")).unwrap();
        ensure(i1 == sum("x^2 + 3*x"), || {
            format!("I^1 of 2x + 3 gave {i1}")
        })
    })
}

fn numerics() -> Outcome {
    suite_criterion(Suite::Numerics, 1, Duration::from_secs(60), || {
        let rows = convergence_study(&GridOperator::RlIntegral { alpha: 0.5 }, &sum("x"), &[1024])
            .unwrap();
        let e = rows[0].max_error;
        ensure(e < 1e-5, || {
            format!("I^0.5 x at N = 1024: max node error {e:e}")
        })?;
        let rows = convergence_study(
            &GridOperator::RlIntegral { alpha: 0.25 },
            &sum("x^3"),
            &[128, 256, 512],
        )
        .unwrap();
        let p = rows[2].observed_order.unwrap_or(0.0);
        ensure(p >= 1.8, || format!("product trapezoid order {p}"))
    })
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fracalc"))
        .args(["verify", "--suite", "all", "--seed", "42"])
        .output()
        .map_err(|e| format!("could not start binary: {e}"))?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || {
        format!(
            "exit {:?}\n{}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        )
    })?;
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("exit 0 in {:.3} s", elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("fundamental theorem", fundamental_theorem),
        ("kernel", kernel),
        ("projector", projector),
        ("abel", abel),
        ("laplace", laplace),
        ("axioms", axioms),
        ("numerics", numerics),
        ("end-to-end verify", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
