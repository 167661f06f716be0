mod common;

use std::collections::BTreeMap;

use common::{arb_hypergraph, naive_isomorphisms, permutation};
use hyperiso::oracle::{
    automorphism_count, automorphism_trivial, brute_iso, occupancy_mc, occupancy_pj_exact, occupancy_ratio,
    total_variation, OracleError,
};
use hyperiso::Hypergraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn brute_iso_finds_least_witness(h in arb_hypergraph(2..=3, 6), seed in any::<u64>()) {
        let ph = h.relabel(&permutation(h.n(), seed)).unwrap();
        let expected = naive_isomorphisms(&h, &ph).into_iter().min();
        let got = brute_iso(&h, &ph).unwrap();
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(h.relabel(&got.unwrap()).unwrap(), ph);
    }

    #[test]
    fn brute_iso_agrees_on_random_pairs(
        (a, b) in (2usize..=3).prop_flat_map(|k| (k..=6usize).prop_flat_map(move |n| {
            let total = hyperiso::randmodels::binomial_u64(n as u64, k as u64).unwrap() as usize;
            let mask = proptest::collection::vec(any::<bool>(), total);
            (mask.clone(), mask).prop_map(move |(x, y)| (common::from_mask(k, n, &x), common::from_mask(k, n, &y)))
        }))
    ) {
        let naive = naive_isomorphisms(&a, &b);
        let got = brute_iso(&a, &b).unwrap();
        prop_assert_eq!(got.is_some(), !naive.is_empty());
        prop_assert_eq!(got, naive.into_iter().min());
        prop_assert_eq!(brute_iso(&b, &a).unwrap().is_some(), brute_iso(&a, &b).unwrap().is_some());
    }

    #[test]
    fn automorphisms_match_naive(h in arb_hypergraph(2..=4, 6)) {
        let naive = naive_isomorphisms(&h, &h).len() as u64;
        prop_assert_eq!(automorphism_count(&h).unwrap(), naive);
        prop_assert_eq!(automorphism_trivial(&h).unwrap(), naive == 1);
    }

    #[test]
    fn ratio_identity(mu in 1usize..=40, r in 2usize..=5, s_frac in 0.0f64..1.0) {
        let s = 1 + (s_frac * (2 * mu).min(r * mu) as f64) as usize;
        let s = s.min(r * mu);
        let dist = occupancy_pj_exact(mu, r, s).unwrap();
        for j in s.div_ceil(2)..s.min(mu + 1) {
            let pj = dist.get(j);
            prop_assert!(!pj.is_zero());
            prop_assert_eq!(dist.get(j + 1) / pj, occupancy_ratio(mu, r, s, j));
        }
    }

    #[test]
    fn pair_capped_mass_at_most_one(mu in 1usize..=30, r in 2usize..=5, s_frac in 0.0f64..1.0) {
        let s = 1 + (s_frac * (r * mu - 1) as f64) as usize;
        let total = occupancy_pj_exact(mu, r, s).unwrap().total();
        prop_assert!(total <= BigRational::one());
        if r == 2 {
            prop_assert!(total.is_one());
        }
    }
}

#[test]
fn size_guard_applies_to_both_sides() {
    let small = Hypergraph::new(2, 3, &[[0, 1]]).unwrap();
    let big = Hypergraph::new(2, 40, &[[0, 1]]).unwrap();
    assert!(matches!(brute_iso(&small, &big), Err(OracleError::SizeGuard { n: 40, .. })));
    assert!(matches!(automorphism_count(&big), Err(OracleError::SizeGuard { .. })));
}

/// All `C(r mu, s)` subsets of points, grouped by occupied blocks, dropping
/// any subset that puts three points in one block.
fn enumerate_occupancy(mu: usize, r: usize, s: usize) -> BTreeMap<usize, BigRational> {
    let points = r * mu;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut total = 0u64;
    for mask in 0u64..1 << points {
        if mask.count_ones() as usize != s {
            continue;
        }
        total += 1;
        let mut load = vec![0; mu];
        for p in 0..points {
            if mask >> p & 1 == 1 {
                load[p / r] += 1;
            }
        }
        if load.iter().all(|&l| l <= 2) {
            *counts.entry(load.iter().filter(|&&l| l > 0).count()).or_default() += 1;
        }
    }
    counts.into_iter().map(|(j, c)| (j, BigRational::new(BigInt::from(c), BigInt::from(total)))).collect()
}

#[test]
fn exact_law_matches_enumeration() {
    for (mu, r, s) in [(5, 2, 3), (4, 3, 4), (3, 4, 5), (6, 2, 6), (4, 3, 2)] {
        let exact = occupancy_pj_exact(mu, r, s).unwrap();
        let mut nonzero = exact.probs.clone();
        nonzero.retain(|_, p| !p.is_zero());
        assert_eq!(nonzero, enumerate_occupancy(mu, r, s), "mu={mu} r={r} s={s}");
    }
}

#[test]
fn monte_carlo_within_three_sigma() {
    let trials = 100_000u64;
    let est = occupancy_mc(5, 2, 3, trials, 11).unwrap();
    let exact = occupancy_pj_exact(5, 2, 3).unwrap().to_f64();
    for (j, p) in exact {
        let freq = est.capped_frequencies().get(&j).copied().unwrap_or(0.0);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 3.0 * sigma, "j={j}: {freq} vs {p}");
    }
    assert_eq!(est.heavy, 0);
}

#[test]
fn monte_carlo_total_variation() {
    let est = occupancy_mc(50, 2, 20, 100_000, 5).unwrap();
    let exact = occupancy_pj_exact(50, 2, 20).unwrap().to_f64();
    let tv = total_variation(&est.capped_frequencies(), &exact);
    assert!(tv < 0.02, "tv = {tv}");
}

#[test]
fn heavy_blocks_are_counted() {
    let est = occupancy_mc(3, 3, 6, 20_000, 2).unwrap();
    let total: f64 = occupancy_pj_exact(3, 3, 6).unwrap().to_f64().values().sum();
    let kept = 1.0 - est.heavy_fraction();
    let sigma = (total * (1.0 - total) / 20_000.0).sqrt();
    assert!((kept - total).abs() < 4.0 * sigma, "{kept} vs {total}");
}
