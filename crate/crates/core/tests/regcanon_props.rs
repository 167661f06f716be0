mod common;

use common::permutation;
use hyperiso::canon::certificate;
use hyperiso::hypercore::HyperEdges;
use hyperiso::randmodels::{gen_configuration, gen_regular_simple, GeneratorParams};
use hyperiso::regcanon::{distance_profiles, regular_canonical_labeling, RegularParams};
use hyperiso::rng::derive_seed;

#[test]
fn configuration_profiles_obey_layer_bounds() {
    for (n, r, k) in [(30, 3, 3), (60, 2, 3), (40, 3, 4), (24, 4, 3)] {
        let params = RegularParams::new(n, r, k);
        for t in 0..100 {
            let (_, m) = gen_configuration(&GeneratorParams::regular(n, r, k, derive_seed(n as u64, t))).unwrap();
            for p in distance_profiles(&m, 8) {
                assert!(p.sizes[0] <= r * (k - 1));
                assert!(p.sizes.iter().sum::<usize>() < n);
                for l in 1..=8 {
                    assert!(p.sizes[l - 1] as u128 <= params.layer_bound(l));
                }
                for w in p.sizes.windows(2) {
                    assert!(w[1] <= params.rho * w[0], "n={n} r={r} k={k} {:?}", p.sizes);
                }
            }
        }
    }
}

#[test]
fn profile_multiset_and_status_are_invariant() {
    for t in 0..30 {
        let d = gen_regular_simple(&GeneratorParams::regular(200, 3, 3, derive_seed(6, t)), 1000).unwrap();
        let h = d.hypergraph;
        let perm = permutation(h.n(), t);
        let ph = h.relabel(&perm).unwrap();
        let depth = RegularParams::new(200, 3, 3).depth().unwrap();
        let (a, b) = (distance_profiles(&h, depth), distance_profiles(&ph, depth));
        for (v, p) in a.iter().enumerate() {
            assert_eq!(p.sizes, b[perm[v]].sizes);
        }
        let params = RegularParams::new(200, 3, 3);
        let (x, y) = (regular_canonical_labeling(&h, &params).unwrap(), regular_canonical_labeling(&ph, &params).unwrap());
        assert_eq!(x.status(), y.status());
        assert_eq!(x.ambiguity(), y.ambiguity());
    }
}

#[test]
fn success_means_distinct_profiles() {
    // 2-regular 3-uniform draws at n = 12: rho = 2, depth 3.
    let params = RegularParams::new(12, 2, 3);
    for t in 0..2000 {
        let Ok(d) = gen_regular_simple(&GeneratorParams::regular(12, 2, 3, derive_seed(12, t)), 1000) else {
            continue;
        };
        let out = regular_canonical_labeling(&d.hypergraph, &params).unwrap();
        let mut profiles: Vec<Vec<usize>> =
            distance_profiles(&d.hypergraph, params.depth().unwrap()).into_iter().map(|p| p.sizes).collect();
        profiles.sort();
        profiles.dedup();
        assert_eq!(out.is_success(), profiles.len() == 12);
        if let Some(lab) = out.labeling() {
            let ph = d.hypergraph.relabel(&permutation(12, t)).unwrap();
            let other = regular_canonical_labeling(&ph, &params).unwrap();
            assert_eq!(certificate(&d.hypergraph, &out).unwrap(), certificate(&ph, &other).unwrap());
            let mut sorted = lab.to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..12).collect::<Vec<_>>());
        }
    }
}

#[test]
fn degrees_checked_with_multiplicity() {
    let (_, m) = gen_configuration(&GeneratorParams::regular(30, 3, 3, 1)).unwrap();
    assert!(m.degrees().iter().all(|&d| d == 3));
    let out = regular_canonical_labeling(&m, &RegularParams::new(30, 3, 3));
    assert!(out.is_ok());
    assert!(regular_canonical_labeling(&m, &RegularParams::new(30, 2, 3)).is_err());
}
