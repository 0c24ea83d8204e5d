use lipop::criteria::{q_criterion, DiskSampler};
use lipop::fnkernel::{AnalyticScalar, SelfMap, C64};
use lipop::normedspace::{NormKind, NormedSpace, OperatorMatrix, Vector};
use lipop::verify::random_instance;
use lipop::vspaces::{lambda_norm, VectorFunction};
use lipop::wcop::{dilate, truncate, WeightedCompositionOp};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coarse() -> DiskSampler {
    DiskSampler::new(12, 64, 8).unwrap()
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn point(r_max: f64) -> impl Strategy<Value = C64> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn poly(max_len: usize) -> impl Strategy<Value = AnalyticScalar> {
    prop::collection::vec(complex(), 1..=max_len).prop_map(AnalyticScalar::poly)
}

/// Polynomial self-maps with coefficient sum below one.
fn self_map() -> impl Strategy<Value = SelfMap> {
    (prop::collection::vec(complex(), 2..=5), 0.05..0.95f64).prop_map(|(cs, target)| {
        let total: f64 = cs.iter().map(|c| c.norm()).sum::<f64>().max(1e-9);
        let cs = cs.into_iter().map(|c| c * (target / total)).collect();
        SelfMap::new(AnalyticScalar::poly(cs)).unwrap()
    })
}

fn space() -> impl Strategy<Value = NormedSpace> {
    (1usize..=3, prop_oneof![Just(NormKind::L1), Just(NormKind::L2), Just(NormKind::Linf)])
        .prop_map(|(d, n)| NormedSpace::new(d, n).unwrap())
}

fn vector_function() -> impl Strategy<Value = VectorFunction> {
    space().prop_flat_map(|s| {
        prop::collection::vec(poly(6), s.dim).prop_map(move |cs| VectorFunction::new(s, cs).unwrap())
    })
}

fn instance() -> impl Strategy<Value = (WeightedCompositionOp, VectorFunction)> {
    any::<u64>().prop_map(|seed| random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 6))
}

fn norm_diff(s: &NormedSpace, a: &[C64], b: &[C64]) -> f64 {
    s.norm_of(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_matches_finite_difference((w, f) in instance(), z in point(0.95)) {
        let h = 1e-6;
        let exact = w.apply_deriv(&f, z).unwrap().entries;
        let p = w.apply(&f, z + h).unwrap().entries;
        let m = w.apply(&f, z - h).unwrap().entries;
        let fd: Vec<C64> = p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let ys = w.target.space;
        prop_assert!(norm_diff(&ys, &exact, &fd) <= 1e-6 * ys.norm_of(&exact).max(1.0));
    }

    #[test]
    fn decomposition_is_pointwise_exact((w, f) in instance(), z in point(0.999)) {
        let (a, b) = w.decomposition_terms(&f, z).unwrap();
        let sum: Vec<C64> = a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect();
        let exact = w.apply_deriv(&f, z).unwrap().entries;
        let ys = w.target.space;
        prop_assert!(norm_diff(&ys, &sum, &exact) <= 1e-10 * ys.norm_of(&exact).max(1.0));
    }

    #[test]
    fn truncation_is_idempotent(f in vector_function(), n in 0usize..8, z in point(1.0)) {
        let once = truncate(&f, n);
        let twice = truncate(&once, n);
        prop_assert!(norm_diff(&f.space, &once.value(z), &twice.value(z)) <= 1e-13);
        let all = truncate(&f, 5);
        prop_assert!(norm_diff(&f.space, &all.value(z), &f.value(z)) <= 1e-12);
    }

    #[test]
    fn dilations_form_a_semigroup(f in vector_function(), r in 0.01..0.99f64, s in 0.01..0.99f64, z in point(1.0)) {
        let two = dilate(&dilate(&f, s).unwrap(), r).unwrap();
        let one = dilate(&f, r * s).unwrap();
        prop_assert!(norm_diff(&f.space, &two.value(z), &one.value(z)) <= 1e-12);
    }

    #[test]
    fn norm_is_homogeneous(f in vector_function(), c in complex(), alpha in 0.1..0.9f64) {
        let s = coarse();
        let base = lambda_norm(&f, alpha, &s).unwrap().value;
        let scaled = lambda_norm(&f.scaled(c), alpha, &s).unwrap().value;
        prop_assert!((scaled - c.norm() * base).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn norm_obeys_triangle_inequality(
        (f, g) in space().prop_flat_map(|s| (
            prop::collection::vec(poly(6), s.dim).prop_map(move |c| VectorFunction::new(s, c).unwrap()),
            prop::collection::vec(poly(6), s.dim).prop_map(move |c| VectorFunction::new(s, c).unwrap()),
        )),
        alpha in 0.1..0.9f64,
    ) {
        let s = coarse();
        let sum = lambda_norm(&f.add(&g).unwrap(), alpha, &s).unwrap().value;
        let parts = lambda_norm(&f, alpha, &s).unwrap().value + lambda_norm(&g, alpha, &s).unwrap().value;
        prop_assert!(sum <= parts + 1e-9);
    }

    #[test]
    fn q_scales_with_the_symbol((w, _) in instance(), c in complex()) {
        prop_assume!(c.norm() > 1e-3);
        let s = coarse();
        let scaled = WeightedCompositionOp { psi: w.psi.scaled(c), ..w.clone() };
        let q0 = q_criterion(&w, &s).unwrap().value;
        let q1 = q_criterion(&scaled, &s).unwrap().value;
        prop_assert!((q1 - c.norm() * q0).abs() <= 1e-9 * (c.norm() * q0).max(1e-12));
    }

    #[test]
    fn schwarz_pick(phi in self_map(), z in point(0.999)) {
        let lhs = (1.0 - z.norm_sqr()) * phi.derivative_at(z).norm();
        prop_assert!(lhs <= (1.0 - phi.value(z).norm_sqr()) * (1.0 + 1e-9));
    }

    #[test]
    fn blaschke_is_extremal_for_schwarz_pick(a in point(0.95), z in point(0.99)) {
        let phi = SelfMap::new(AnalyticScalar::blaschke(a).unwrap()).unwrap();
        let lhs = (1.0 - z.norm_sqr()) * phi.derivative_at(z).norm();
        let rhs = 1.0 - phi.value(z).norm_sqr();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn test_function_norm_at_most_three(a in point(0.999), alpha in 0.05..0.95f64) {
        prop_assume!(a.norm() > 1e-3);
        let f = VectorFunction::scalar(AnalyticScalar::test_fn(a, alpha).unwrap());
        let v = lambda_norm(&f, alpha, &DiskSampler::default()).unwrap().value;
        prop_assert!(v <= 3.0 + 1e-6, "norm {}", v);
    }

    #[test]
    fn operator_norm_dominates_images(
        (a, x) in (space(), space()).prop_filter("supported pair", |(x, y)| {
            lipop::normedspace::check_pair(*x, *y).is_ok()
        }).prop_flat_map(|(x, y)| (
            prop::collection::vec(complex(), x.dim * y.dim)
                .prop_map(move |e| OperatorMatrix::new(x, y, e).unwrap()),
            prop::collection::vec(complex(), x.dim).prop_map(move |e| Vector::new(x, e).unwrap()),
        ))
    ) {
        let n = a.op_norm().unwrap();
        let image = a.codomain.norm_of(&a.apply(&x.entries));
        prop_assert!(image <= n * x.norm() * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn function_specs_round_trip(f in poly(6)) {
        let text = serde_json::to_string(&f).unwrap();
        let back: AnalyticScalar = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}
