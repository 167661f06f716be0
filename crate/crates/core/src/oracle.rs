//! Ground truth for small instances: exhaustive isomorphism search, the
//! link-collision scan, and the exact occupancy distribution with its
//! Monte-Carlo counterpart.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_labeling, relabeled_certificate, stable_refinement, LabelingOutcome};
use crate::hypercore::{Adjacency, HyperEdges, Hypergraph, HypergraphError};
use crate::rng::{derive_seed, SeededRng};

/// Largest vertex count the exhaustive search accepts.
pub const MAX_ORACLE_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle size guard: n = {n} exceeds {limit}")]
    SizeGuard { n: usize, limit: usize },
    #[error("occupancy parameters out of range: mu = {mu}, r = {r}, s = {s} (need mu, r >= 1 and 1 <= s <= r*mu)")]
    OccupancyRange { mu: usize, r: usize, s: usize },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn guard(n: usize) -> Result<(), OracleError> {
    if n > MAX_ORACLE_ORDER {
        return Err(OracleError::SizeGuard { n, limit: MAX_ORACLE_ORDER });
    }
    Ok(())
}

/// Backtracking over vertex maps `0, 1, 2, ...` in order with ascending
/// candidate images, so witnesses come out in lexicographic order.
/// Candidates are restricted to vertices with the same joint colour
/// refinement class and the same full distance profile.
struct Matcher<'a> {
    h1: &'a Hypergraph,
    h2: &'a Hypergraph,
    candidates: Vec<Vec<usize>>,
    /// Edges of `h1` whose largest vertex is `v`.
    closing: Vec<Vec<usize>>,
    h2_incidence: Vec<Vec<usize>>,
    h2_hits: Vec<usize>,
    h2_full: usize,
    h1_full: usize,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Matcher<'a> {
    /// `None` when the invariants already rule out any isomorphism.
    fn new(h1: &'a Hypergraph, h2: &'a Hypergraph) -> Option<Self> {
        if h1.k() != h2.k() || h1.n() != h2.n() || h1.edge_count() != h2.edge_count() {
            return None;
        }
        let n = h1.n();
        let keys1_2 = joint_invariants(h1, h2);
        let (keys1, keys2) = keys1_2.split_at(n);
        let mut s1 = keys1.to_vec();
        let mut s2 = keys2.to_vec();
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 != s2 {
            return None;
        }
        let candidates = (0..n).map(|v| (0..n).filter(|&w| keys2[w] == keys1[v]).collect()).collect();
        let mut closing = vec![Vec::new(); n];
        for (i, e) in h1.edges().enumerate() {
            closing[*e.last().unwrap()].push(i);
        }
        Some(Self {
            h1,
            h2,
            candidates,
            closing,
            h2_incidence: h2.incidence(),
            h2_hits: vec![0; h2.edge_count()],
            h2_full: 0,
            h1_full: 0,
            map: vec![usize::MAX; n],
            used: vec![false; n],
        })
    }

    /// Calls `visit` on each isomorphism until it returns `false`.
    /// Returns `false` if stopped early.
    fn search(&mut self, v: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if v == self.h1.n() {
            return visit(&self.map);
        }
        let k = self.h1.k();
        for ci in 0..self.candidates[v].len() {
            let w = self.candidates[v][ci];
            if self.used[w] {
                continue;
            }
            self.map[v] = w;
            let consistent = self.closing[v].iter().all(|&i| {
                let mut image: Vec<usize> = self.h1.edge(i).iter().map(|&u| self.map[u]).collect();
                image.sort_unstable();
                self.h2.contains_edge(&image)
            });
            if !consistent {
                continue;
            }
            self.used[w] = true;
            for &i in &self.h2_incidence[w] {
                self.h2_hits[i] += 1;
                if self.h2_hits[i] == k {
                    self.h2_full += 1;
                }
            }
            self.h1_full += self.closing[v].len();
            let go_on = self.h1_full != self.h2_full || self.search(v + 1, visit);
            self.h1_full -= self.closing[v].len();
            for &i in &self.h2_incidence[w] {
                if self.h2_hits[i] == k {
                    self.h2_full -= 1;
                }
                self.h2_hits[i] -= 1;
            }
            self.used[w] = false;
            if !go_on {
                self.map[v] = usize::MAX;
                return false;
            }
        }
        self.map[v] = usize::MAX;
        true
    }
}

/// Per-vertex invariants of `h1` then `h2`, comparable across the two:
/// refinement colour of the disjoint union, then the full distance profile.
fn joint_invariants(h1: &Hypergraph, h2: &Hypergraph) -> Vec<(usize, Vec<usize>)> {
    let n = h1.n();
    let shifted: Vec<Vec<usize>> = h2.edges().map(|e| e.iter().map(|&v| v + n).collect()).collect();
    let mut union: Vec<Vec<usize>> = h1.edges().map(<[usize]>::to_vec).collect();
    union.extend(shifted);
    let joint = Hypergraph::new(h1.k(), 2 * n, &union).expect("disjoint union is simple");
    let refinement = stable_refinement(&joint, &joint.degrees());
    let mut out = Vec::with_capacity(2 * n);
    for (offset, h) in [(0, h1), (n, h2)] {
        let adj = Adjacency::of(h);
        for v in 0..n {
            let sizes = adj.bfs_layers(v, n).sizes();
            out.push((refinement.colors[offset + v], sizes));
        }
    }
    out
}

/// Some isomorphism `h1 -> h2` (the lexicographically least), or `None`.
pub fn brute_iso(h1: &Hypergraph, h2: &Hypergraph) -> Result<Option<Vec<usize>>, OracleError> {
    guard(h1.n().max(h2.n()))?;
    let Some(mut m) = Matcher::new(h1, h2) else {
        return Ok(None);
    };
    let mut found = None;
    m.search(0, &mut |map| {
        found = Some(map.to_vec());
        false
    });
    Ok(found)
}

/// True iff the identity is the only automorphism of `h`.
pub fn automorphism_trivial(h: &Hypergraph) -> Result<bool, OracleError> {
    guard(h.n())?;
    let mut m = Matcher::new(h, h).expect("a hypergraph matches itself");
    let mut nontrivial = false;
    m.search(0, &mut |map| {
        nontrivial = map.iter().enumerate().any(|(i, &w)| i != w);
        !nontrivial
    });
    Ok(!nontrivial)
}

/// Number of automorphisms, by exhaustive enumeration.
pub fn automorphism_count(h: &Hypergraph) -> Result<u64, OracleError> {
    guard(h.n())?;
    let mut m = Matcher::new(h, h).expect("a hypergraph matches itself");
    let mut count = 0;
    m.search(0, &mut |_| {
        count += 1;
        true
    });
    Ok(count)
}

/// All pairs `i < j` whose links are isomorphic. Empty exactly when no two
/// vertices have isomorphic links.
pub fn link_collision_pairs(h: &Hypergraph) -> Result<Vec<(usize, usize)>, OracleError> {
    let links = h.links()?;
    let outcomes: Vec<LabelingOutcome> = links.par_iter().map(canonical_labeling).collect();
    let certs: Vec<Option<Vec<u8>>> = links
        .iter()
        .zip(&outcomes)
        .map(|(l, o)| o.labeling().map(|lab| relabeled_certificate(l, lab).unwrap().into_bytes()))
        .collect();
    let degrees: Vec<Vec<usize>> = links.iter().map(Hypergraph::sorted_degree_sequence).collect();
    let mut pairs = Vec::new();
    for i in 0..links.len() {
        for j in i + 1..links.len() {
            let collide = match (&certs[i], &certs[j]) {
                (Some(a), Some(b)) => a == b,
                (Some(_), None) | (None, Some(_)) => false,
                (None, None) => {
                    let (a, b) = (outcomes[i].ambiguity().unwrap(), outcomes[j].ambiguity().unwrap());
                    links[i].edge_count() == links[j].edge_count()
                        && degrees[i] == degrees[j]
                        && a.fingerprint == b.fingerprint
                        && brute_iso(&links[i], &links[j])?.is_some()
                }
            };
            if collide {
                pairs.push((i, j));
            }
        }
    }
    Ok(pairs)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Exact `P_j = P(X_S = j and no block meets S more than twice)` for a
/// uniform `s`-subset `S` of `r * mu` points split into `mu` blocks of `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyDist {
    pub mu: usize,
    pub r: usize,
    pub s: usize,
    /// `j -> P_j` for `ceil(s/2) <= j <= min(s, mu)`.
    pub probs: BTreeMap<usize, BigRational>,
}

impl OccupancyDist {
    pub fn get(&self, j: usize) -> BigRational {
        self.probs.get(&j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn max(&self) -> (usize, BigRational) {
        let (j, p) = self.probs.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).expect("non-empty support");
        (*j, p.clone())
    }

    pub fn to_f64(&self) -> BTreeMap<usize, f64> {
        self.probs.iter().map(|(&j, p)| (j, p.to_f64().unwrap_or(f64::NAN))).collect()
    }

    /// `P_j / sum_i P_i`, the law of `X_S` given no block is hit three times.
    pub fn conditional_f64(&self) -> BTreeMap<usize, f64> {
        let total = self.total();
        self.probs.iter().map(|(&j, p)| (j, (p / &total).to_f64().unwrap_or(f64::NAN))).collect()
    }
}

fn check_occupancy(mu: usize, r: usize, s: usize) -> Result<(), OracleError> {
    if mu == 0 || r == 0 || s == 0 || s > r * mu {
        return Err(OracleError::OccupancyRange { mu, r, s });
    }
    Ok(())
}

/// `P_j = C(mu, j) C(j, s-j) r^(2j-s) C(r, 2)^(s-j) / C(r mu, s)`.
pub fn occupancy_pj_exact(mu: usize, r: usize, s: usize) -> Result<OccupancyDist, OracleError> {
    check_occupancy(mu, r, s)?;
    let denominator = binomial(r * mu, s);
    let pairs = binomial(r, 2);
    let mut probs = BTreeMap::new();
    for j in s.div_ceil(2)..=s.min(mu) {
        let numerator = binomial(mu, j)
            * binomial(j, s - j)
            * BigUint::from(r).pow((2 * j - s) as u32)
            * pairs.pow((s - j) as u32);
        probs.insert(j, BigRational::new(numerator.into(), denominator.clone().into()));
    }
    Ok(OccupancyDist { mu, r, s, probs })
}

/// Closed form of `P_{j+1} / P_j` for `s/2 <= j < s`, `r >= 2`:
/// `(mu - j)(s - j) / ((2j + 2 - s)(2j + 1 - s)) * 2r / (r - 1)`.
pub fn occupancy_ratio(mu: usize, r: usize, s: usize, j: usize) -> BigRational {
    assert!(r >= 2 && 2 * j >= s && j < s, "ratio defined for r >= 2, s/2 <= j < s");
    let num = BigUint::from(mu.saturating_sub(j)) * BigUint::from(s - j) * BigUint::from(2 * r);
    let den = BigUint::from(2 * j + 2 - s) * BigUint::from(2 * j + 1 - s) * BigUint::from(r - 1);
    BigRational::new(num.into(), den.into())
}

/// One draw: `(X_S, largest number of sampled points in a single block)`.
pub fn draw_occupancy(mu: usize, r: usize, s: usize, rng: &mut SeededRng) -> (usize, usize) {
    // Floyd's subset sampling.
    let total = r * mu;
    let mut chosen = std::collections::HashSet::with_capacity(s);
    let mut blocks = Vec::with_capacity(s);
    for j in total - s..total {
        let t = rng.below_usize(j + 1);
        let pick = if chosen.insert(t) { t } else { chosen.insert(j); j };
        blocks.push(pick / r);
    }
    blocks.sort_unstable();
    let mut distinct = 0;
    let mut max_load = 0;
    let mut i = 0;
    while i < blocks.len() {
        let j = blocks[i..].iter().position(|&b| b != blocks[i]).map_or(blocks.len(), |d| i + d);
        distinct += 1;
        max_load = max_load.max(j - i);
        i = j;
    }
    (distinct, max_load)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyEstimate {
    pub trials: u64,
    /// `j -> #{X_S = j}`.
    pub counts: BTreeMap<usize, u64>,
    /// `j -> #{X_S = j, no block hit three or more times}`.
    pub capped_counts: BTreeMap<usize, u64>,
    /// Draws in which some block was hit three or more times.
    pub heavy: u64,
}

impl OccupancyEstimate {
    pub fn frequencies(&self) -> BTreeMap<usize, f64> {
        self.counts.iter().map(|(&j, &c)| (j, c as f64 / self.trials as f64)).collect()
    }

    /// Estimates of the exact `P_j`.
    pub fn capped_frequencies(&self) -> BTreeMap<usize, f64> {
        self.capped_counts.iter().map(|(&j, &c)| (j, c as f64 / self.trials as f64)).collect()
    }

    pub fn conditional(&self) -> BTreeMap<usize, f64> {
        let kept = (self.trials - self.heavy) as f64;
        self.capped_counts.iter().map(|(&j, &c)| (j, c as f64 / kept)).collect()
    }

    pub fn heavy_fraction(&self) -> f64 {
        self.heavy as f64 / self.trials as f64
    }
}

/// Monte-Carlo law of `X_S`; draw `t` uses seed `derive_seed(seed, t)`.
pub fn occupancy_mc(mu: usize, r: usize, s: usize, trials: u64, seed: u64) -> Result<OccupancyEstimate, OracleError> {
    check_occupancy(mu, r, s)?;
    let draws: Vec<(usize, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| draw_occupancy(mu, r, s, &mut SeededRng::new(derive_seed(seed, t))))
        .collect();
    let mut est = OccupancyEstimate { trials, counts: BTreeMap::new(), capped_counts: BTreeMap::new(), heavy: 0 };
    for (x, load) in draws {
        *est.counts.entry(x).or_default() += 1;
        if load <= 2 {
            *est.capped_counts.entry(x).or_default() += 1;
        } else {
            est.heavy += 1;
        }
    }
    Ok(est)
}

/// Half the L1 distance between two distributions on the integers.
pub fn total_variation(a: &BTreeMap<usize, f64>, b: &BTreeMap<usize, f64>) -> f64 {
    let keys: std::collections::BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    0.5 * keys
        .into_iter()
        .map(|j| (a.get(&j).copied().unwrap_or(0.0) - b.get(&j).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}
