use proptest::prelude::*;
use rand::SeedableRng;

use fracalc_core::fracops::{
    apply_derivative, classify, fundamental_theorem_residual, kernel_basis, named_spec,
    projector_closed_form, projector_direct, DerivativeSpec, NamedKind,
};
use fracalc_core::laplace::{default_s_grid, operational_formula_check};
use fracalc_core::numgrid::{rl_integral_numeric, sample};
use fracalc_core::poweralg::{parse, rl_integral};
use fracalc_core::specialfn::gamma;
use fracalc_core::verify::gen::{self, CaseRng};
use fracalc_core::PowerSum;

fn power_sum(lo: f64, hi: f64) -> impl Strategy<Value = PowerSum> {
    prop::collection::vec((-2.0..2.0f64, lo..hi), 1..6)
        .prop_map(|pairs| PowerSum::from_pairs(pairs).expect("exponents above -1"))
}

fn spec(max_level: usize) -> impl Strategy<Value = DerivativeSpec> {
    (
        0.05..=1.0f64,
        prop::collection::vec(0.0..1.2f64, 1..=max_level),
    )
        .prop_filter_map("type condition", |(alpha, gamma)| {
            DerivativeSpec::new(alpha, gamma).ok()
        })
}

fn scale(f: &PowerSum) -> f64 {
    f.max_abs_coeff().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gamma_recurrence(x in 0.05..25.0f64) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
    }

    #[test]
    fn gamma_reflection(x in 0.01..0.99f64) {
        let product = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        let expected = std::f64::consts::PI / (std::f64::consts::PI * x).sin();
        prop_assert!((product / expected - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn exact_text_round_trips(f in power_sum(-0.99, 5.0)) {
        prop_assert_eq!(parse(&f.to_exact_string()).unwrap(), f);
    }

    #[test]
    fn integral_is_linear(
        alpha in 0.0..2.0f64,
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        f in power_sum(-0.95, 3.0),
        g in power_sum(-0.95, 3.0),
    ) {
        let combined = &f.scale(a) + &g.scale(b);
        let lhs = rl_integral(alpha, &combined).unwrap();
        let rhs = &rl_integral(alpha, &f).unwrap().scale(a) + &rl_integral(alpha, &g).unwrap().scale(b);
        let tol = 1e-12 * (scale(&rl_integral(alpha, &f).unwrap()) * a.abs()
            + scale(&rl_integral(alpha, &g).unwrap()) * b.abs()).max(1.0);
        prop_assert!(lhs.max_abs_difference(&rhs) <= tol);
    }

    #[test]
    fn integrals_compose(a in 0.0..1.5f64, b in 0.0..1.5f64, f in power_sum(-0.95, 3.0)) {
        let composed = rl_integral(a, &rl_integral(b, &f).unwrap()).unwrap();
        let direct = rl_integral(a + b, &f).unwrap();
        prop_assert!(composed.relative_difference(&direct) <= 1e-12);
    }

    #[test]
    fn integral_preserves_non_negativity(
        alpha in 0.05..1.5f64,
        pairs in prop::collection::vec((0.0..2.0f64, 0.0..3.0f64), 1..6),
    ) {
        let f = PowerSum::from_pairs(pairs).unwrap();
        let g = rl_integral(alpha, &f).unwrap();
        prop_assert!(g.terms().iter().all(|t| t.coeff >= 0.0));
        let grid = rl_integral_numeric(alpha, &sample(&f, 1.0, 64).unwrap()).unwrap();
        prop_assert!(grid.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn integral_is_continuous_in_the_order(alpha in 0.05..1.5f64, f in power_sum(-0.95, 3.0)) {
        let a = rl_integral(alpha, &f).unwrap();
        let b = rl_integral(alpha + 1e-6, &f).unwrap();
        for (ta, tb) in a.terms().iter().zip(b.terms()) {
            prop_assert!((ta.coeff - tb.coeff).abs() <= 1e-4);
        }
    }

    #[test]
    fn kernel_is_annihilated(spec in spec(4)) {
        let basis = kernel_basis(&spec);
        prop_assert_eq!(basis.dimension(), classify(&spec).truly_level);
        for b in basis.basis() {
            prop_assert!(apply_derivative(&spec, &b).unwrap().max_abs_coeff() < 1e-12);
        }
    }

    #[test]
    fn derivative_inverts_the_integral(spec in spec(4), seed in any::<u64>()) {
        let phi = gen::phi(&mut CaseRng::seed_from_u64(seed), spec.alpha());
        let residual = fundamental_theorem_residual(&spec, &phi).unwrap();
        prop_assert!(residual.max_abs_coeff() <= 1e-10 * scale(&phi).max(1.0));
    }

    #[test]
    fn projector_forms_agree(spec in spec(2), seed in any::<u64>()) {
        let mut rng = CaseRng::seed_from_u64(seed);
        let f = gen::admissible(&mut rng, &spec, |f| {
            projector_direct(&spec, f).is_ok() && projector_closed_form(&spec, f).is_ok()
        });
        let tol = 1e-10 * scale(&f);
        let direct = projector_direct(&spec, &f).unwrap();
        let closed = projector_closed_form(&spec, &f).unwrap();
        prop_assert!(closed.max_abs_difference(&direct) <= tol);

        let p = direct.to_power_sum();
        let again = projector_direct(&spec, &p).unwrap().to_power_sum();
        prop_assert!(again.max_abs_difference(&p) <= tol);

        let restored = rl_integral(spec.alpha(), &apply_derivative(&spec, &f).unwrap()).unwrap();
        prop_assert!(restored.max_abs_difference(&(&f - &closed.to_power_sum())) <= tol);
    }

    #[test]
    fn degenerate_specs_match_their_reduction(seed in any::<u64>()) {
        let mut rng = CaseRng::seed_from_u64(seed);
        let spec = gen::degenerate_spec(&mut rng);
        let reduced = classify(&spec).reduced;
        let f = gen::admissible(&mut rng, &spec, |f| apply_derivative(&spec, f).is_ok());
        let a = apply_derivative(&spec, &f).unwrap();
        let b = apply_derivative(&reduced, &f).unwrap();
        prop_assert!(a.max_abs_difference(&b) <= 1e-10 * scale(&a).max(scale(&f)));
    }

    #[test]
    fn smooth_inputs_see_the_basic_derivative(spec in spec(4), seed in any::<u64>()) {
        let alpha = spec.alpha();
        let lo = (1.0 - alpha).max(0.0) + 0.01;
        let f = gen::power_sum(&mut CaseRng::seed_from_u64(seed), lo, 4.0, 6);
        let rl = named_spec(NamedKind::RiemannLiouville, alpha).unwrap();
        let a = apply_derivative(&spec, &f).unwrap();
        let b = apply_derivative(&rl, &f).unwrap();
        prop_assert!(a.max_abs_difference(&b) <= 1e-10 * scale(&b).max(scale(&f)));
    }

    #[test]
    fn operational_formula_holds(spec in spec(2), seed in any::<u64>()) {
        let grid = default_s_grid();
        let f = gen::admissible(&mut CaseRng::seed_from_u64(seed), &spec, |f| {
            operational_formula_check(&spec, f, &grid).is_ok()
        });
        prop_assert!(operational_formula_check(&spec, &f, &grid).unwrap() < 1e-10);
    }
}
