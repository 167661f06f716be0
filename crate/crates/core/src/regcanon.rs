//! Distance-profile labeling for r-regular instances.
//!
//! Each vertex is described by the sizes `d_1(v), ..., d_L(v)` of its
//! breadth-first layers with `L = ceil(0.6 * log_rho n)` and
//! `rho = (r - 1)(k - 1)`. When all profiles differ, their lexicographic ranks
//! form a canonical labeling.

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{push_varint, Ambiguity, AmbiguityReason, LabelingOutcome};
use crate::hypercore::{Adjacency, HyperEdges};
use crate::randmodels::Configuration;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegCanonError {
    #[error("branching factor rho = {0} is below 2; profile depth is undefined")]
    RhoTooSmall(usize),
    #[error("profile depth needs n >= 2 (got n = {0})")]
    OrderTooSmall(usize),
    #[error("vertex {vertex} has degree {degree}, expected {r}")]
    NotRegular { vertex: usize, degree: usize, r: usize },
    #[error("input is {found_k}-uniform on {found_n} vertices, parameters say k = {k}, n = {n}")]
    ShapeMismatch { k: usize, n: usize, found_k: usize, found_n: usize },
}

/// `(r - 1)(k - 1)`; zero when `r <= 1`.
pub fn rho(r: usize, k: usize) -> usize {
    r.saturating_sub(1) * k.saturating_sub(1)
}

/// `ceil(0.6 * ln n / ln rho)`, computed exactly as the least `L` with
/// `rho^(5L) >= n^3`.
pub fn lstar(n: usize, rho: usize) -> Result<usize, RegCanonError> {
    if rho < 2 {
        return Err(RegCanonError::RhoTooSmall(rho));
    }
    if n < 2 {
        return Err(RegCanonError::OrderTooSmall(n));
    }
    let target = (n as u128).saturating_pow(3);
    let step = (rho as u128).saturating_pow(5);
    let mut power: u128 = 1;
    let mut depth = 0;
    while power < target {
        power = power.saturating_mul(step);
        depth += 1;
    }
    Ok(depth)
}

/// `ceil(100 * log_rho ln n)`; `None` when undefined or not positive.
pub fn l0(n: usize, rho: usize) -> Option<usize> {
    if rho < 2 || n < 2 {
        return None;
    }
    let inner = (n as f64).ln().ln();
    let value = (100.0 * inner / (rho as f64).ln()).ceil();
    (value >= 1.0).then_some(value as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularParams {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub rho: usize,
    /// Profile depth; `None` when `rho < 2`.
    pub lstar: Option<usize>,
    /// Diagnostic only, never used to truncate a search.
    pub l0: Option<usize>,
}

impl RegularParams {
    pub fn new(n: usize, r: usize, k: usize) -> Self {
        let rho = rho(r, k);
        Self { n, r, k, rho, lstar: lstar(n, rho).ok(), l0: l0(n, rho) }
    }

    pub fn depth(&self) -> Result<usize, RegCanonError> {
        lstar(self.n, self.rho)
    }

    /// Upper bound `(k - 1) r rho^(l - 1)` on `d_l(v)`, saturating.
    pub fn layer_bound(&self, l: usize) -> u128 {
        if l == 0 {
            return 1;
        }
        ((self.k - 1) as u128 * self.r as u128).saturating_mul((self.rho as u128).saturating_pow(l as u32 - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceProfile {
    pub vertex: usize,
    /// `d_1..d_L`, zero past the eccentricity.
    pub sizes: Vec<usize>,
}

pub fn distance_profiles<H: HyperEdges + ?Sized>(h: &H, lmax: usize) -> Vec<DistanceProfile> {
    let adj = Adjacency::of(h);
    profiles_from_adjacency(&adj, lmax)
}

fn profiles_from_adjacency(adj: &Adjacency, lmax: usize) -> Vec<DistanceProfile> {
    (0..adj.order())
        .into_par_iter()
        .map_init(
            || vec![usize::MAX; adj.order()],
            |scratch, v| {
                let layers = adj.layers_with_scratch(v, lmax, scratch);
                let mut sizes: Vec<usize> = layers.layers.iter().skip(1).map(Vec::len).collect();
                sizes.resize(lmax, 0);
                DistanceProfile { vertex: v, sizes }
            },
        )
        .collect()
}

/// Labels an r-regular (multi)hypergraph by the ranks of its distance
/// profiles at depth `lstar`.
pub fn regular_canonical_labeling<H: HyperEdges + ?Sized>(
    h: &H,
    params: &RegularParams,
) -> Result<LabelingOutcome, RegCanonError> {
    if h.uniformity() != params.k || h.order() != params.n {
        return Err(RegCanonError::ShapeMismatch {
            k: params.k,
            n: params.n,
            found_k: h.uniformity(),
            found_n: h.order(),
        });
    }
    if let Some((vertex, &degree)) = h.degrees().iter().enumerate().find(|(_, &d)| d != params.r) {
        return Err(RegCanonError::NotRegular { vertex, degree, r: params.r });
    }
    let depth = params.depth()?;
    let profiles = distance_profiles(h, depth);
    Ok(outcome_from_profiles(&profiles, depth))
}

fn outcome_from_profiles(profiles: &[DistanceProfile], depth: usize) -> LabelingOutcome {
    let n = profiles.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| profiles[a].sizes.cmp(&profiles[b].sizes));
    let mut labeling = vec![0; n];
    let mut classes = 0;
    let mut tied_classes = 0;
    let mut fingerprint = Vec::new();
    push_varint(&mut fingerprint, n as u64);
    push_varint(&mut fingerprint, depth as u64);
    let mut i = 0;
    while i < n {
        let sizes = &profiles[order[i]].sizes;
        let mut j = i;
        while j < n && profiles[order[j]].sizes == *sizes {
            labeling[order[j]] = classes;
            j += 1;
        }
        if j - i > 1 {
            tied_classes += 1;
        }
        push_varint(&mut fingerprint, (j - i) as u64);
        for &d in sizes {
            push_varint(&mut fingerprint, d as u64);
        }
        classes += 1;
        i = j;
    }
    if classes == n {
        LabelingOutcome::Success(labeling)
    } else {
        LabelingOutcome::Ambiguous(Ambiguity {
            reason: AmbiguityReason::TiedDistanceProfiles,
            classes,
            tied_classes,
            fingerprint,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispensableCount {
    /// Edges exposed, at most the budget.
    pub exposed: usize,
    /// Exposed edges that met two or more already-discovered vertices.
    pub dispensable: usize,
}

/// Breadth-first edge exposure from `root`. Layers are scanned in ascending
/// vertex order; each vertex exposes its unexposed incident edges in storage
/// order, every copy of a repeated edge separately. An exposed edge is
/// dispensable when at least two of its positions hold vertices discovered
/// before the exposure. Counting stops after `budget` exposures.
pub fn count_dispensable<H: HyperEdges + ?Sized>(h: &H, root: usize, budget: usize) -> DispensableCount {
    let n = h.order();
    let tuples: Vec<(&[usize], usize)> = h.tuples().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (t, _)) in tuples.iter().enumerate() {
        for (pos, &v) in t.iter().enumerate() {
            if pos == 0 || t[pos - 1] != v {
                incident[v].push(i);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut exposed_tuple = vec![false; tuples.len()];
    let mut count = DispensableCount { exposed: 0, dispensable: 0 };
    seen[root] = true;
    let mut layer = vec![root];
    while !layer.is_empty() && count.exposed < budget {
        let mut next = Vec::new();
        for &u in &layer {
            for &i in &incident[u] {
                if exposed_tuple[i] {
                    continue;
                }
                exposed_tuple[i] = true;
                let (t, mult) = tuples[i];
                for _ in 0..mult {
                    if count.exposed == budget {
                        return count;
                    }
                    count.exposed += 1;
                    if t.iter().filter(|&&w| seen[w]).count() >= 2 {
                        count.dispensable += 1;
                    }
                    for &w in t {
                        if !seen[w] {
                            seen[w] = true;
                            next.push(w);
                        }
                    }
                }
            }
        }
        next.sort_unstable();
        layer = next;
    }
    count
}

/// [`count_dispensable`] on the configuration itself: layer vertices in
/// ascending order, the points of each vertex in ascending order, and each
/// block exposed when one of its points is first touched. Positions are
/// counted per point, so two points of one seen vertex count twice.
pub fn count_dispensable_configuration(c: &Configuration, root: usize, budget: usize) -> DispensableCount {
    let (n, r) = (c.n(), c.r());
    let blocks: Vec<&[usize]> = c.blocks().collect();
    let mut block_of = vec![0; n * r];
    for (b, points) in blocks.iter().enumerate() {
        for &p in *points {
            block_of[p] = b;
        }
    }
    let mut seen = vec![false; n];
    let mut exposed_block = vec![false; blocks.len()];
    let mut count = DispensableCount { exposed: 0, dispensable: 0 };
    seen[root] = true;
    let mut layer = vec![root];
    while !layer.is_empty() && count.exposed < budget {
        let mut next = Vec::new();
        for &u in &layer {
            for &b in &block_of[u * r..(u + 1) * r] {
                if exposed_block[b] {
                    continue;
                }
                if count.exposed == budget {
                    return count;
                }
                exposed_block[b] = true;
                count.exposed += 1;
                if blocks[b].iter().filter(|&&q| seen[c.owner(q)]).count() >= 2 {
                    count.dispensable += 1;
                }
                for &q in blocks[b] {
                    let w = c.owner(q);
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
        }
        next.sort_unstable();
        layer = next;
    }
    count
}
