//! Uniform hypergraph representations and the structural primitives shared by
//! every other module: links, breadth-first layers and sub-hypergraph density.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge size k = {0} is below 2")]
    UniformityTooSmall(usize),
    #[error("edge size k = {k} exceeds vertex count n = {n}")]
    UniformityExceedsOrder { k: usize, n: usize },
    #[error("edge {edge} has {found} vertices, expected {expected}")]
    WrongArity { edge: usize, expected: usize, found: usize },
    #[error("edge {edge} uses vertex {vertex}, outside 0..{n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge} repeats vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("tuple {0:?} has multiplicity 0")]
    ZeroMultiplicity(Vec<usize>),
    #[error("links are only formed for k >= 3 (got k = {0})")]
    LinkOfGraph(usize),
    #[error("vertex {vertex} outside 0..{n}")]
    NoSuchVertex { vertex: usize, n: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("multihypergraph is not simple: {0}")]
    NotSimple(&'static str),
}

/// Read access to the edges of a (multi)hypergraph, as used by traversals.
pub trait HyperEdges {
    fn uniformity(&self) -> usize;
    fn order(&self) -> usize;
    /// Edge tuples (sorted, possibly with repeats) with their multiplicities.
    fn tuples(&self) -> impl Iterator<Item = (&[usize], usize)>;

    /// Degree of every vertex, counting multiplicity and repeats in a tuple.
    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.order()];
        for (tuple, mult) in self.tuples() {
            for &v in tuple {
                deg[v] += mult;
            }
        }
        deg
    }
}

/// A simple k-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored flat, each strictly increasing, in lexicographic order
/// with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<usize>,
}

impl Hypergraph {
    /// Validates and normalizes raw edges. Tuples may be given in any vertex
    /// order; repeated edges are rejected rather than merged.
    pub fn new<E: AsRef<[usize]>>(k: usize, n: usize, raw_edges: &[E]) -> Result<Self, HypergraphError> {
        check_shape(k, n)?;
        let mut tuples = Vec::with_capacity(raw_edges.len());
        for (idx, raw) in raw_edges.iter().enumerate() {
            let raw = raw.as_ref();
            if raw.len() != k {
                return Err(HypergraphError::WrongArity { edge: idx, expected: k, found: raw.len() });
            }
            let mut t = raw.to_vec();
            t.sort_unstable();
            if let Some(&v) = t.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { edge: idx, vertex: v, n });
            }
            if let Some(w) = t.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex { edge: idx, vertex: w[0] });
            }
            tuples.push(t);
        }
        tuples.sort_unstable();
        if let Some(w) = tuples.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0].clone()));
        }
        Ok(Self { k, n, edges: tuples.concat() })
    }

    /// Builds from tuples already known to be valid and strictly increasing.
    pub(crate) fn from_sorted_tuples(k: usize, n: usize, mut tuples: Vec<Vec<usize>>) -> Self {
        tuples.sort_unstable();
        debug_assert!(tuples.windows(2).all(|w| w[0] != w[1]));
        Self { k, n, edges: tuples.concat() }
    }

    pub fn empty(k: usize, n: usize) -> Result<Self, HypergraphError> {
        check_shape(k, n)?;
        Ok(Self { k, n, edges: Vec::new() })
    }

    /// All `C(n, k)` edges.
    pub fn complete(k: usize, n: usize) -> Result<Self, HypergraphError> {
        check_shape(k, n)?;
        let mut edges = Vec::new();
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            edges.extend_from_slice(&comb);
            let mut i = k;
            while i > 0 && comb[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for j in i..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
        Ok(Self { k, n, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k
    }

    pub fn edge(&self, idx: usize) -> &[usize] {
        &self.edges[idx * self.k..(idx + 1) * self.k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    pub fn contains_edge(&self, tuple: &[usize]) -> bool {
        let m = self.edge_count();
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Indices of the edges containing each vertex, ascending.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges().filter(|e| e.contains(&v)).count()
    }

    pub fn sorted_degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable();
        d
    }

    /// The image `π(H)`: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, HypergraphError> {
        if !is_permutation(perm, self.n) {
            return Err(HypergraphError::NotAPermutation(self.n));
        }
        let tuples = self
            .edges()
            .map(|e| {
                let mut t: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        Ok(Self::from_sorted_tuples(self.k, self.n, tuples))
    }

    /// The (k-1)-uniform hypergraph on the other `n - 1` vertices whose edges
    /// are `e \ {v}` for the edges `e` through `v`. Vertices above `v` shift
    /// down by one.
    pub fn link(&self, v: usize) -> Result<Self, HypergraphError> {
        if self.k < 3 {
            return Err(HypergraphError::LinkOfGraph(self.k));
        }
        if v >= self.n {
            return Err(HypergraphError::NoSuchVertex { vertex: v, n: self.n });
        }
        let through: Vec<usize> = self
            .edges()
            .enumerate()
            .filter(|(_, e)| e.contains(&v))
            .map(|(i, _)| i)
            .collect();
        Ok(self.link_from_incidence(v, &through))
    }

    /// Links of every vertex, sharing one incidence pass.
    pub fn links(&self) -> Result<Vec<Self>, HypergraphError> {
        if self.k < 3 {
            return Err(HypergraphError::LinkOfGraph(self.k));
        }
        let inc = self.incidence();
        Ok((0..self.n).map(|v| self.link_from_incidence(v, &inc[v])).collect())
    }

    fn link_from_incidence(&self, v: usize, through: &[usize]) -> Self {
        let mut flat = Vec::with_capacity(through.len() * (self.k - 1));
        for &i in through {
            flat.extend(
                self.edge(i)
                    .iter()
                    .filter(|&&u| u != v)
                    .map(|&u| if u > v { u - 1 } else { u }),
            );
        }
        // Deleting the same vertex from lexicographically sorted tuples keeps them sorted.
        Self { k: self.k - 1, n: self.n - 1, edges: flat }
    }

    /// Number of edges contained in the vertex set `set`.
    pub fn edges_within(&self, set: &[usize]) -> usize {
        let mut mask = vec![false; self.n];
        for &v in set {
            if v < self.n {
                mask[v] = true;
            }
        }
        self.edges().filter(|e| e.iter().all(|&v| mask[v])).count()
    }

    /// Searches connected edge subsets of at most `tmax` edges for one whose
    /// vertex union `S` has `|S| <= t(k-1) - 1`, i.e. `e(S) > |S|/(k-1)`.
    ///
    /// Subsets are tried in order of increasing size, so the returned witness
    /// uses the fewest edges possible. A violating set exists with
    /// `e(S) <= tmax` exactly when this returns `Some`.
    pub fn find_dense_witness(&self, tmax: usize) -> Option<DenseWitness> {
        DenseSearch::new(self).run(tmax)
    }

    pub fn to_multi(&self) -> MultiHypergraph {
        MultiHypergraph {
            k: self.k,
            n: self.n,
            tuples: self.edges.clone(),
            multiplicity: vec![1; self.edge_count()],
        }
    }
}

impl HyperEdges for Hypergraph {
    fn uniformity(&self) -> usize {
        self.k
    }
    fn order(&self) -> usize {
        self.n
    }
    fn tuples(&self) -> impl Iterator<Item = (&[usize], usize)> {
        self.edges().map(|e| (e, 1))
    }
}

fn check_shape(k: usize, n: usize) -> Result<(), HypergraphError> {
    if k < 2 {
        return Err(HypergraphError::UniformityTooSmall(k));
    }
    if k > n {
        return Err(HypergraphError::UniformityExceedsOrder { k, n });
    }
    Ok(())
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

/// A k-uniform multihypergraph, the projection of a configuration. Tuples are
/// non-decreasing (a vertex may repeat) and carry a positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiHypergraph {
    k: usize,
    n: usize,
    tuples: Vec<usize>,
    multiplicity: Vec<usize>,
}

impl MultiHypergraph {
    /// Aggregates raw tuples; identical tuples add up their multiplicities.
    pub fn from_tuples<E: AsRef<[usize]>>(
        k: usize,
        n: usize,
        raw: impl IntoIterator<Item = (E, usize)>,
    ) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::UniformityTooSmall(k));
        }
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (idx, (tuple, mult)) in raw.into_iter().enumerate() {
            let tuple = tuple.as_ref();
            if tuple.len() != k {
                return Err(HypergraphError::WrongArity { edge: idx, expected: k, found: tuple.len() });
            }
            let mut t = tuple.to_vec();
            t.sort_unstable();
            if let Some(&v) = t.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { edge: idx, vertex: v, n });
            }
            if mult == 0 {
                return Err(HypergraphError::ZeroMultiplicity(t));
            }
            *counts.entry(t).or_default() += mult;
        }
        let mut tuples = Vec::with_capacity(counts.len() * k);
        let mut multiplicity = Vec::with_capacity(counts.len());
        for (t, c) in counts {
            tuples.extend(t);
            multiplicity.push(c);
        }
        Ok(Self { k, n, tuples, multiplicity })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct tuples.
    pub fn distinct_tuples(&self) -> usize {
        self.multiplicity.len()
    }

    /// Number of edges counted with multiplicity.
    pub fn total_edges(&self) -> usize {
        self.multiplicity.iter().sum()
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity.iter().all(|&m| m == 1)
            && self.tuples.chunks_exact(self.k).all(|t| t.windows(2).all(|w| w[0] < w[1]))
    }

    pub fn to_simple(&self) -> Result<Hypergraph, HypergraphError> {
        if self.multiplicity.iter().any(|&m| m > 1) {
            return Err(HypergraphError::NotSimple("repeated edge"));
        }
        if !self.tuples.chunks_exact(self.k).all(|t| t.windows(2).all(|w| w[0] < w[1])) {
            return Err(HypergraphError::NotSimple("vertex repeated within an edge"));
        }
        check_shape(self.k, self.n)?;
        Ok(Hypergraph { k: self.k, n: self.n, edges: self.tuples.clone() })
    }
}

impl HyperEdges for MultiHypergraph {
    fn uniformity(&self) -> usize {
        self.k
    }
    fn order(&self) -> usize {
        self.n
    }
    fn tuples(&self) -> impl Iterator<Item = (&[usize], usize)> {
        self.tuples.chunks_exact(self.k).zip(self.multiplicity.iter().copied())
    }
}

/// Co-occurrence adjacency: `u ~ w` iff they share some edge, `u != w`.
/// Multiplicities and repeats inside a tuple do not matter.
#[derive(Debug, Clone)]
pub struct Adjacency {
    neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn of<H: HyperEdges + ?Sized>(h: &H) -> Self {
        let mut neighbors = vec![Vec::new(); h.order()];
        for (tuple, _) in h.tuples() {
            for &u in tuple {
                neighbors[u].extend(tuple.iter().copied().filter(|&w| w != u));
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Self { neighbors }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn order(&self) -> usize {
        self.neighbors.len()
    }

    /// Layers `S_0 = {root}, S_1, ...` up to `lmax` or the eccentricity of the
    /// root, whichever comes first. Each layer is sorted ascending.
    pub fn bfs_layers(&self, root: usize, lmax: usize) -> LayerDecomposition {
        let mut dist = vec![usize::MAX; self.order()];
        self.layers_with_scratch(root, lmax, &mut dist)
    }

    pub(crate) fn layers_with_scratch(&self, root: usize, lmax: usize, dist: &mut [usize]) -> LayerDecomposition {
        let mut layers = vec![vec![root]];
        dist[root] = 0;
        while layers.len() <= lmax {
            let depth = layers.len();
            let mut next = Vec::new();
            for &u in layers.last().unwrap() {
                for &w in &self.neighbors[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = depth;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            layers.push(next);
        }
        for layer in &layers {
            for &v in layer {
                dist[v] = usize::MAX;
            }
        }
        LayerDecomposition { root, layers }
    }
}

/// Breadth-first layers around a root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub root: usize,
    pub layers: Vec<Vec<usize>>,
}

impl LayerDecomposition {
    /// `|S_0|, |S_1|, ..., |S_L|`.
    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }
}

pub fn bfs_layers<H: HyperEdges + ?Sized>(h: &H, root: usize, lmax: usize) -> LayerDecomposition {
    Adjacency::of(h).bfs_layers(root, lmax)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseWitness {
    /// Indices of the connected edge subset, ascending.
    pub edges: Vec<usize>,
    /// Union of those edges, ascending.
    pub vertices: Vec<usize>,
}

/// ESU-style enumeration of connected edge subsets (connected in the line
/// graph), each visited exactly once.
struct DenseSearch<'a> {
    h: &'a Hypergraph,
    line_adj: Vec<Vec<usize>>,
    cover: Vec<usize>,
    union_size: usize,
}

impl<'a> DenseSearch<'a> {
    fn new(h: &'a Hypergraph) -> Self {
        let inc = h.incidence();
        let line_adj = (0..h.edge_count())
            .map(|i| {
                let mut adj: Vec<usize> = h.edge(i).iter().flat_map(|&v| inc[v].iter().copied()).filter(|&j| j != i).collect();
                adj.sort_unstable();
                adj.dedup();
                adj
            })
            .collect();
        Self { h, line_adj, cover: vec![0; h.n()], union_size: 0 }
    }

    fn run(&mut self, tmax: usize) -> Option<DenseWitness> {
        for t in 2..=tmax.min(self.h.edge_count()) {
            for root in 0..self.h.edge_count() {
                let mut sub = vec![root];
                self.add(root);
                let ext: Vec<usize> = self.line_adj[root].iter().copied().filter(|&u| u > root).collect();
                let found = self.extend(&mut sub, ext, root, t);
                self.remove(root);
                if found {
                    sub.sort_unstable();
                    let mut vertices: Vec<usize> = sub.iter().flat_map(|&i| self.h.edge(i).iter().copied()).collect();
                    vertices.sort_unstable();
                    vertices.dedup();
                    return Some(DenseWitness { edges: sub, vertices });
                }
            }
        }
        None
    }

    fn add(&mut self, e: usize) {
        for &v in self.h.edge(e) {
            if self.cover[v] == 0 {
                self.union_size += 1;
            }
            self.cover[v] += 1;
        }
    }

    fn remove(&mut self, e: usize) {
        for &v in self.h.edge(e) {
            self.cover[v] -= 1;
            if self.cover[v] == 0 {
                self.union_size -= 1;
            }
        }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.line_adj[a].binary_search(&b).is_ok()
    }

    /// On success `sub` is left holding the witness.
    fn extend(&mut self, sub: &mut Vec<usize>, mut ext: Vec<usize>, root: usize, target: usize) -> bool {
        if sub.len() == target {
            return self.union_size < target * (self.h.k() - 1);
        }
        while let Some(w) = ext.pop() {
            let mut next_ext = ext.clone();
            for &u in &self.line_adj[w] {
                if u > root && !sub.contains(&u) && !next_ext.contains(&u) && !sub.iter().any(|&x| self.adjacent(x, u)) {
                    next_ext.push(u);
                }
            }
            sub.push(w);
            self.add(w);
            let found = self.extend(sub, next_ext, root, target);
            if found {
                self.remove(w);
                return true;
            }
            self.remove(w);
            sub.pop();
        }
        false
    }
}
