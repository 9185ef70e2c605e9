mod common;

use common::*;
use proptest::prelude::*;
use sperner_core::bounds::{
    claimed_lower_log2, claimed_lower_log2_166, erf_lower_bound_log2, find_threshold,
    layer_lower_bound, sum_lower_bound, threshold_margin,
};
use sperner_core::constructions::seven56_layers;
use sperner_core::expected_hits;

#[test]
fn builtin_layers_meet_the_expectation_bound() {
    for (name, f) in builtins() {
        for (i, layer) in f
            .canonical_decomposition()
            .unwrap()
            .layers
            .iter()
            .enumerate()
        {
            for t in 1..=19 {
                let q = t as f64 * 0.05;
                assert!(
                    expected_hits(layer, q).unwrap() >= 1.0 - 1e-12,
                    "{name} layer {i} q {q}"
                );
            }
        }
    }
}

#[test]
fn seven56_layers_exceed_layer_bounds() {
    let layers = seven56_layers();
    for i in 2..=3u32 {
        let b = layer_lower_bound(i, 7).unwrap();
        assert!(b < layers[i as usize].len() as f64, "layer {i}");
        assert!(b < layers[6 - i as usize].len() as f64, "layer {}", 6 - i);
    }
    assert!(layer_lower_bound(1, 7).is_err());
}

#[test]
fn erf_bound_dominates_the_stated_exponent() {
    for k in 7..=2000 {
        let e = erf_lower_bound_log2(k).unwrap();
        assert!(e >= claimed_lower_log2_166(k), "k = {k}");
        assert!(e <= sum_lower_bound(k).unwrap().log2() + 1e-9, "k = {k}");
    }
    assert!(claimed_lower_log2(497) < erf_lower_bound_log2(497).unwrap());
}

#[test]
fn threshold_is_stable_in_the_search_range() {
    for k_max in [600, 1000, 3000] {
        assert_eq!(find_threshold(k_max).unwrap().threshold, Some(497));
    }
    for k in 497..=3000 {
        assert!(threshold_margin(k).unwrap() > 0.0, "k = {k}");
    }
}

proptest! {
    #[test]
    fn saturated_antichains_expect_at_least_one_hit(seed in any::<u64>(), m in 0u32..=6, q in 0.01f64..0.99) {
        let mut r = rng(seed);
        let a = random_saturated_antichain(&mut r, m, seed % 2 == 0);
        prop_assert!(expected_hits(&a, q).unwrap() >= 1.0 - 1e-12);
    }
}
