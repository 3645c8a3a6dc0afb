use hpball::carleson::{berezin_sup, BerezinGrid};
use hpball::estimators::{essnorm_bounds_hinf_hq, essnorm_exact_hinf_h2, Compactness, compactness_verdict};
use hpball::hardy::{growth_bound_check, h2_norm, hp_norm, test_kernel_norm_check};
use hpball::pullback::{build_pullback, integrate_pullback, DEFAULT_EPS};
use hpball::search::{staged_sup, SearchBudget};
use hpball::symbols::{families, seeded_polynomial};
use hpball::{BallPoint, BallSelfMap, HardyExpansion, QuadratureScheme, Symbol, SymbolPair, TestKernel};
use num_complex::Complex64;
use proptest::prelude::*;

fn disk_pair(weight: [f64; 2], a: f64) -> SymbolPair {
    families::blaschke(Symbol::disk_poly(&weight), a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_on_the_circle(seed in 0u64..10_000, degree in 0u32..6) {
        let poly = seeded_polynomial(1, degree, seed);
        let exact = h2_norm(&HardyExpansion::from_polynomial(&poly));
        let numeric = hp_norm(1, |z| poly.eval(z.coords()), 2.0, &QuadratureScheme::circle(256), &[1.0]).unwrap();
        prop_assert!((exact - numeric.value).abs() <= 1e-10 * exact.max(1.0));
    }

    #[test]
    fn change_of_variables_holds(w0 in -1.0f64..1.0, w1 in -1.0f64..1.0, a in -0.9f64..0.9, q in 1.0f64..4.0, c in 1.5f64..4.0) {
        let pair = disk_pair([w0, w1], a);
        let mu = build_pullback(&pair, q, &QuadratureScheme::circle(1024)).unwrap();
        let i = integrate_pullback(&mu, |w: &BallPoint| 1.0 / (c - w.coords()[0].re)).unwrap();
        prop_assert!(i.rel_diff.unwrap() <= 1e-10);
    }

    #[test]
    fn hinf_bracket_contains_the_exact_value(w0 in -1.0f64..1.0, w1 in -1.0f64..1.0, a in -0.9f64..0.9, q in 1.1f64..5.0) {
        let pair = disk_pair([w0, w1], a);
        let scheme = QuadratureScheme::circle(2048);
        let r = essnorm_bounds_hinf_hq(&pair, q, &scheme, &DEFAULT_EPS).unwrap();
        prop_assert!(r.ordering_ok());
        let (lo, hi) = (r.lower.unwrap().value, r.upper.unwrap().value);
        prop_assert!((hi - 4.0 * lo).abs() <= 1e-12 * hi.max(1.0));
        let exact = essnorm_exact_hinf_h2(&pair, &scheme, &DEFAULT_EPS).unwrap();
        let two = essnorm_bounds_hinf_hq(&pair, 2.0, &scheme, &DEFAULT_EPS).unwrap();
        let x = exact.exact.unwrap();
        prop_assert!(two.lower.unwrap().value <= x + 1e-12 && x <= two.upper.unwrap().value + 1e-12);
        // a Blaschke factor is inner: E is the whole circle, so the value is ||psi||_2
        let norm = (w0 * w0 + w1 * w1).sqrt();
        prop_assert!((x - norm).abs() <= 1e-6 * norm.max(1.0));
    }

    #[test]
    fn radially_scaled_maps_are_compact(a in -0.9f64..0.9, r in 0.1f64..0.95) {
        let pair = disk_pair([1.0, 0.0], a);
        let scaled = SymbolPair::new(pair.psi.clone(), pair.phi.radial_scale(r).unwrap()).unwrap();
        let report = essnorm_exact_hinf_h2(&scaled, &QuadratureScheme::circle(1024), &DEFAULT_EPS).unwrap();
        prop_assert_eq!(report.exact.unwrap(), 0.0);
        let v = compactness_verdict(&report.setting, &[&report]).unwrap();
        prop_assert_eq!(v.verdict, Compactness::Compact);
    }

    #[test]
    fn test_kernels_are_normalized_and_obey_the_growth_bound(re in -0.9f64..0.9, im in -0.4f64..0.4, p in 1.0f64..4.0) {
        prop_assume!(re * re + im * im < 0.81);
        let center = BallPoint::disk(Complex64::new(re, im));
        let kernel = TestKernel::new(center.clone(), p).unwrap();
        let scheme = QuadratureScheme::circle(4096);
        let norm = test_kernel_norm_check(&kernel, &scheme).unwrap();
        prop_assert!((norm.value - 1.0).abs() <= 1e-8);
        let points = [BallPoint::origin(1), center.scaled(0.5), center];
        let g = growth_bound_check(1, |z| kernel.eval(z.coords()), p, &points, &scheme).unwrap();
        prop_assert!(g.worst_ratio <= 1.0 + 1e-8);
    }

    #[test]
    fn berezin_at_the_origin_is_the_total_mass(w0 in -1.0f64..1.0, w1 in -1.0f64..1.0, a in -0.9f64..0.9, p in 1.0f64..3.0) {
        let pair = disk_pair([w0, w1], a);
        let grid = BerezinGrid { shells: vec![0.0, 0.5], directions: 8, seed: 0 };
        let b = berezin_sup(&pair, p, p, &grid, &QuadratureScheme::circle(1024)).unwrap();
        prop_assert!(b.max_rel_diff <= 1e-10);
        let at0 = b.at_origin.unwrap();
        prop_assert!((at0 - b.total_mass).abs() <= 1e-12 * b.total_mass.max(1.0));
    }

    #[test]
    fn staged_search_is_cumulative(center in 0.0f64..std::f64::consts::TAU) {
        let xi = Complex64::from_polar(1.0, center);
        let budget = SearchBudget { directions: 32, stages: 4, ..SearchBudget::default() };
        let t = staged_sup(1, |z| Some(1.0 / (xi - z.coords()[0]).norm()), &budget);
        prop_assert!(t.stages.windows(2).all(|w| w[1].cumulative >= w[0].cumulative));
        prop_assert!(t.growth.diverging);
    }
}

#[test]
fn identity_map_in_c2_keeps_full_mass() {
    let pair = families::identity(2);
    let report = essnorm_exact_hinf_h2(&pair, &QuadratureScheme::monte_carlo(20_000, 3), &DEFAULT_EPS).unwrap();
    assert!((report.exact.unwrap() - 1.0).abs() < 0.02);
    let map = BallSelfMap::identity(2);
    assert_eq!(map.dim(), 2);
}

#[test]
fn high_inner_powers_live_in_the_tail() {
    let g = Symbol::coordinate(1, 0);
    for pair in [families::blaschke(Symbol::constant(1, 1.0), 0.5), families::affine_half(Symbol::constant(1, 1.0))] {
        let t = hpball::estimators::truncated_image_trace(&pair, 4, &g, &[40], 256, &QuadratureScheme::circle(4096)).unwrap();
        let fraction = t.tail[0] / (t.head[0].powi(2) + t.tail[0].powi(2)).sqrt();
        assert!(fraction >= 0.99, "{fraction}");
    }
}
