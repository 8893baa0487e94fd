use std::f64::consts::PI;

use proptest::prelude::*;
use shiftframe::generator::{fourier_eval, reduce};
use shiftframe::pointset::make_jittered;
use shiftframe::reconstruct::synthesize;
use shiftframe::{CoeffSeq, Generator, GeneratorSpec, PointSet};

fn deltas() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-1.5..-0.05f64, 0.05..1.5f64], 0..4)
}

fn points() -> impl Strategy<Value = PointSet> {
    (0.3..2.0f64, 0.0..0.45f64, any::<u64>()).prop_map(|(a, j, s)| make_jittered(a, j * a, s, 40).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_bounds_are_ordered(p in points(), r in 2.0..15.0f64) {
        let d = p.beurling(r).unwrap();
        prop_assert!(d.lower <= d.upper);
    }

    #[test]
    fn density_is_translation_invariant(p in points(), s in -5.0..5.0f64) {
        let a = p.beurling(8.0).unwrap();
        let b = p.translated(s).beurling(8.0).unwrap();
        prop_assert!((a.lower - b.lower).abs() < 1e-12 && (a.upper - b.upper).abs() < 1e-12);
    }

    #[test]
    fn density_scales_inversely(p in points(), beta in 0.5..3.0f64) {
        let a = p.beurling(8.0).unwrap();
        let b = p.scaled(beta).beurling(8.0 * beta).unwrap();
        prop_assert!((a.lower / beta - b.lower).abs() < 1e-9 * a.lower.max(1.0));
        prop_assert!((a.upper / beta - b.upper).abs() < 1e-9 * a.upper.max(1.0));
    }

    #[test]
    fn jitter_keeps_separation(alpha in 0.3..2.0f64, frac in 0.0..0.49f64, seed in any::<u64>()) {
        let j = frac * alpha;
        let p = make_jittered(alpha, j, seed, 30).unwrap();
        prop_assert!(p.separation().unwrap() >= alpha - 2.0 * j - 1e-12);
    }

    #[test]
    fn reduction_order_does_not_matter(d in prop::collection::vec(0.1..1.0f64, 3..4), x in -4.0..4.0f64) {
        let spec = GeneratorSpec::gaussian_type(d, PI);
        let a = reduce(&reduce(&spec, 1).unwrap(), 2).unwrap();
        let b = reduce(&reduce(&spec, 3).unwrap(), 1).unwrap();
        // both drop the first and third factor
        let ga = Generator::new(&a).unwrap().eval(x, 1e-12).unwrap();
        let gb = Generator::new(&b).unwrap().eval(x, 1e-12).unwrap();
        prop_assert!((ga - gb).abs() < 1e-11);
    }

    #[test]
    fn synthesis_is_linear(
        c in prop::collection::vec(-1.0..1.0f64, 1..12),
        d in prop::collection::vec(-1.0..1.0f64, 1..12),
        s in -3.0..3.0f64,
        x in -6.0..6.0f64,
    ) {
        let g = Generator::new(&GeneratorSpec::gaussian_type(vec![0.3], PI)).unwrap();
        let (c, d) = (CoeffSeq::new(-5, c), CoeffSeq::new(-3, d));
        let mix = c.add(&CoeffSeq::new(d.offset, d.values.iter().map(|v| s * v).collect()));
        let lhs = synthesize(&g, &mix, x, 1e-13).unwrap();
        let rhs = synthesize(&g, &c, x, 1e-13).unwrap() + s * synthesize(&g, &d, x, 1e-13).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn transform_is_dominated_by_gaussian(d in deltas(), c in 0.2..5.0f64, xi in -4.0..4.0f64) {
        let v = fourier_eval(&GeneratorSpec::gaussian_type(d, c), xi).unwrap();
        prop_assert!(v.norm() <= (-c * xi * xi).exp() * (1.0 + 1e-15));
    }

    #[test]
    fn window_is_positive(d in deltas(), c in 0.5..5.0f64, x in -3.0..3.0f64) {
        let g = Generator::new(&GeneratorSpec::gaussian_type(d, c)).unwrap();
        prop_assert!(g.eval(x, 1e-13).unwrap() > 0.0);
    }
}
