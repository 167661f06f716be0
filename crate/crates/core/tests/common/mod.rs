#![allow(dead_code)]

use hyperiso::randmodels::{binomial_u64, colex_unrank};
use hyperiso::rng::SeededRng;
use hyperiso::Hypergraph;
use proptest::prelude::*;

pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    SeededRng::new(seed).shuffle(&mut p);
    p
}

/// Edge sets chosen by a mask over the colex enumeration of k-subsets.
pub fn from_mask(k: usize, n: usize, mask: &[bool]) -> Hypergraph {
    let edges: Vec<Vec<usize>> =
        mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| colex_unrank(i as u64, k)).collect();
    Hypergraph::new(k, n, &edges).unwrap()
}

pub fn arb_hypergraph(ks: std::ops::RangeInclusive<usize>, nmax: usize) -> impl Strategy<Value = Hypergraph> {
    arb_hypergraph_with(ks, nmax, 0.5)
}

/// Each k-subset present with probability `density`.
pub fn arb_hypergraph_with(
    ks: std::ops::RangeInclusive<usize>,
    nmax: usize,
    density: f64,
) -> impl Strategy<Value = Hypergraph> {
    ks.prop_flat_map(move |k| (Just(k), k..=nmax.max(k)))
        .prop_flat_map(move |(k, n)| {
            let total = binomial_u64(n as u64, k as u64).unwrap() as usize;
            (Just(k), Just(n), proptest::collection::vec(proptest::bool::weighted(density), total))
        })
        .prop_map(|(k, n, mask)| from_mask(k, n, &mask))
}

/// Every permutation of `0..n`, by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Isomorphisms `h1 -> h2` found by trying every permutation.
pub fn naive_isomorphisms(h1: &Hypergraph, h2: &Hypergraph) -> Vec<Vec<usize>> {
    if h1.k() != h2.k() || h1.n() != h2.n() || h1.edge_count() != h2.edge_count() {
        return Vec::new();
    }
    all_permutations(h1.n()).into_iter().filter(|p| h1.relabel(p).unwrap() == *h2).collect()
}
