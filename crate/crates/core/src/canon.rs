//! Canonical labeling for the binomial regime.
//!
//! Graphs (k = 2) are labeled by iterated colour refinement. For k >= 3 each
//! vertex is labeled by the certificate of its link, computed recursively
//! down to graphs. No tie is ever broken arbitrarily: any tie yields
//! [`LabelingOutcome::Ambiguous`].

use rayon::prelude::*;
use thiserror::Error;

use crate::hypercore::{HyperEdges, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("colour refinement base case needs k = 2, got k = {0}")]
    NotAGraph(usize),
    #[error("no certificate for an ambiguous labeling")]
    AmbiguousOutcome,
    #[error("labeling is not a bijection onto 0..{0}")]
    InvalidLabeling(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Success,
    Ambiguous,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Success => "success",
            Self::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmbiguityReason {
    /// Colour refinement stabilised with a repeated colour.
    TiedColors,
    /// Every link was labeled but two link certificates coincide.
    TiedLinkCertificates,
    /// Some link could not be labeled.
    RecursiveFailure,
    /// Two vertices share a distance profile.
    TiedDistanceProfiles,
}

impl AmbiguityReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TiedColors => "tied-colors",
            Self::TiedLinkCertificates => "tied-link-certificates",
            Self::RecursiveFailure => "recursive-failure",
            Self::TiedDistanceProfiles => "tied-distance-profiles",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub reason: AmbiguityReason,
    /// Number of distinct vertex invariants.
    pub classes: usize,
    /// Number of invariant classes holding two or more vertices.
    pub tied_classes: usize,
    /// Isomorphism-invariant encoding of the vertex invariants; differing
    /// fingerprints prove two inputs non-isomorphic.
    pub fingerprint: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelingOutcome {
    /// `labeling[v]` is the canonical label of vertex `v`.
    Success(Vec<usize>),
    Ambiguous(Ambiguity),
}

impl LabelingOutcome {
    pub fn status(&self) -> Status {
        match self {
            Self::Success(_) => Status::Success,
            Self::Ambiguous(_) => Status::Ambiguous,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Self::Success(_))
    }

    pub fn labeling(&self) -> Option<&[usize]> {
        match self {
            Self::Success(l) => Some(l),
            Self::Ambiguous(_) => None,
        }
    }

    pub fn ambiguity(&self) -> Option<&Ambiguity> {
        match self {
            Self::Success(_) => None,
            Self::Ambiguous(a) => Some(a),
        }
    }
}

/// Canonical byte form of a labeled hypergraph: LEB128 varints for `k`, `n`
/// and the edge count, then every relabeled edge (ascending within, edges in
/// lexicographic order) as `k` varints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

pub(crate) fn push_varint(out: &mut Vec<u8>, mut value: u64) {
    loop {
        let byte = (value & 0x7f) as u8;
        value >>= 7;
        if value == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

pub fn certificate(h: &Hypergraph, outcome: &LabelingOutcome) -> Result<Certificate, CanonError> {
    let labeling = outcome.labeling().ok_or(CanonError::AmbiguousOutcome)?;
    relabeled_certificate(h, labeling)
}

/// Certificate of `h` under an arbitrary bijection `labeling`.
pub(crate) fn relabeled_certificate(h: &Hypergraph, labeling: &[usize]) -> Result<Certificate, CanonError> {
    if !crate::hypercore::is_permutation(labeling, h.n()) {
        return Err(CanonError::InvalidLabeling(h.n()));
    }
    let k = h.k();
    let mut relabeled: Vec<usize> = Vec::with_capacity(h.edge_count() * k);
    for e in h.edges() {
        let start = relabeled.len();
        relabeled.extend(e.iter().map(|&v| labeling[v]));
        relabeled[start..].sort_unstable();
    }
    let mut edges: Vec<&[usize]> = relabeled.chunks_exact(k).collect();
    edges.sort_unstable();
    let mut bytes = Vec::with_capacity(8 + relabeled.len() * 2);
    push_varint(&mut bytes, k as u64);
    push_varint(&mut bytes, h.n() as u64);
    push_varint(&mut bytes, edges.len() as u64);
    for e in edges {
        for &v in e {
            push_varint(&mut bytes, v as u64);
        }
    }
    Ok(Certificate(bytes))
}

/// Result of iterated colour refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// Colour of every vertex; colours are `0..classes`.
    pub colors: Vec<usize>,
    pub classes: usize,
    /// Refinement rounds that ran after the initial colouring.
    pub rounds: usize,
}

impl Refinement {
    /// Number of vertices of each colour.
    pub fn histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.classes];
        for &c in &self.colors {
            hist[c] += 1;
        }
        hist
    }
}

/// Replaces each key by its rank among the distinct keys.
fn rank_keys<K: Ord>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    let mut classes = 0;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[order[i - 1]] != keys[v] {
            classes += 1;
        }
        ranks[v] = classes;
    }
    (ranks, if keys.is_empty() { 0 } else { classes + 1 })
}

/// Colour refinement on the incidence structure of `h`: a vertex's new colour
/// is its old colour together with the sorted multiset, over incident edges,
/// of the sorted colours of the other vertices in that edge. Colours are
/// re-encoded each round as ranks of the sorted distinct descriptions, which
/// keeps them isomorphism-invariant. Runs until the number of classes stops
/// growing.
pub fn stable_refinement<H: HyperEdges + ?Sized>(h: &H, initial: &[usize]) -> Refinement {
    let n = h.order();
    let k = h.uniformity();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let tuples: Vec<(&[usize], usize)> = h.tuples().collect();
    for (i, (t, _)) in tuples.iter().enumerate() {
        for (pos, &v) in t.iter().enumerate() {
            if pos == 0 || t[pos - 1] != v {
                incident[v].push((i, pos));
            }
        }
    }
    let (mut colors, mut classes) = rank_keys(initial);
    let mut rounds = 0;
    while classes < n {
        let descriptions: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut flat: Vec<usize> = Vec::with_capacity(incident[v].len() * (k - 1));
                for &(i, pos) in &incident[v] {
                    let (t, mult) = tuples[i];
                    for _ in 0..mult {
                        let start = flat.len();
                        flat.extend(t[..pos].iter().map(|&u| colors[u]));
                        flat.extend(t[pos + 1..].iter().map(|&u| colors[u]));
                        flat[start..].sort_unstable();
                    }
                }
                let mut desc = Vec::with_capacity(1 + flat.len());
                desc.push(colors[v]);
                if k == 2 {
                    flat.sort_unstable();
                    desc.extend(flat);
                } else {
                    let mut per_edge: Vec<&[usize]> = flat.chunks_exact(k - 1).collect();
                    per_edge.sort_unstable();
                    for e in per_edge {
                        desc.extend_from_slice(e);
                    }
                }
                desc
            })
            .collect();
        let (next, next_classes) = rank_keys(&descriptions);
        rounds += 1;
        if next_classes == classes {
            break;
        }
        colors = next;
        classes = next_classes;
    }
    Refinement { colors, classes, rounds }
}

fn degree_refinement(g: &Hypergraph) -> Refinement {
    stable_refinement(g, &g.degrees())
}

/// Canonical labeling of a graph by colour refinement started from degrees.
pub fn refine_graph_labels(g: &Hypergraph) -> Result<LabelingOutcome, CanonError> {
    if g.k() != 2 {
        return Err(CanonError::NotAGraph(g.k()));
    }
    Ok(outcome_from_refinement(&degree_refinement(g)))
}

fn outcome_from_refinement(r: &Refinement) -> LabelingOutcome {
    if r.classes == r.colors.len() {
        return LabelingOutcome::Success(r.colors.clone());
    }
    let hist = r.histogram();
    let mut fingerprint = Vec::with_capacity(hist.len() + 4);
    push_varint(&mut fingerprint, r.colors.len() as u64);
    push_varint(&mut fingerprint, r.classes as u64);
    for &c in &hist {
        push_varint(&mut fingerprint, c as u64);
    }
    LabelingOutcome::Ambiguous(Ambiguity {
        reason: AmbiguityReason::TiedColors,
        classes: r.classes,
        tied_classes: hist.iter().filter(|&&c| c > 1).count(),
        fingerprint,
    })
}

const PARALLEL_WORK: usize = 4096;

/// Canonical labeling of a k-uniform hypergraph, recursing through links.
pub fn canonical_labeling(h: &Hypergraph) -> LabelingOutcome {
    if h.k() == 2 {
        return outcome_from_refinement(&degree_refinement(h));
    }
    let links = h.links().expect("k >= 3");
    // Vertex invariant: status tag, then the link certificate or fingerprint.
    let invariant = |link: &Hypergraph| match canonical_labeling(link) {
        LabelingOutcome::Success(lab) => {
            let cert = relabeled_certificate(link, &lab).expect("labeling is a bijection");
            (true, tagged(1, cert.as_bytes()))
        }
        LabelingOutcome::Ambiguous(a) => (false, tagged(0, &a.fingerprint)),
    };
    // Small inputs are cheaper than the thread handoff.
    let invariants: Vec<(bool, Vec<u8>)> = if h.edge_count() * h.k() < PARALLEL_WORK {
        links.iter().map(invariant).collect()
    } else {
        links.par_iter().map(invariant).collect()
    };
    let all_linked = invariants.iter().all(|(ok, _)| *ok);
    let keys: Vec<&[u8]> = invariants.iter().map(|(_, b)| b.as_slice()).collect();
    let (ranks, classes) = rank_keys(&keys);
    if all_linked && classes == h.n() {
        return LabelingOutcome::Success(ranks);
    }

    let mut sorted = keys.clone();
    sorted.sort_unstable();
    let mut fingerprint = Vec::new();
    push_varint(&mut fingerprint, h.k() as u64);
    push_varint(&mut fingerprint, h.n() as u64);
    push_varint(&mut fingerprint, h.edge_count() as u64);
    push_varint(&mut fingerprint, classes as u64);
    let mut tied_classes = 0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().position(|k| *k != sorted[i]).map_or(sorted.len(), |d| i + d);
        if j - i > 1 {
            tied_classes += 1;
        }
        push_varint(&mut fingerprint, (j - i) as u64);
        push_varint(&mut fingerprint, sorted[i].len() as u64);
        fingerprint.extend_from_slice(sorted[i]);
        i = j;
    }
    let reason = if all_linked { AmbiguityReason::TiedLinkCertificates } else { AmbiguityReason::RecursiveFailure };
    LabelingOutcome::Ambiguous(Ambiguity { reason, classes, tied_classes, fingerprint })
}

fn tagged(tag: u8, body: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(body.len() + 1);
    out.push(tag);
    out.extend_from_slice(body);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic,
    NonIsomorphic,
    Inconclusive,
}

impl IsoVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Isomorphic => "isomorphic",
            Self::NonIsomorphic => "non-isomorphic",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// The check that settled an isomorphism question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Screen {
    Uniformity,
    Order,
    EdgeCount,
    DegreeSequence,
    Certificates,
    OneSidedLabeling,
    BothAmbiguous,
}

impl Screen {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Uniformity => "uniformity",
            Self::Order => "vertex-count",
            Self::EdgeCount => "edge-count",
            Self::DegreeSequence => "degree-sequence",
            Self::Certificates => "certificates",
            Self::OneSidedLabeling => "one-sided-labeling",
            Self::BothAmbiguous => "both-ambiguous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub verdict: IsoVerdict,
    pub decided_by: Screen,
    pub outcomes: Option<(LabelingOutcome, LabelingOutcome)>,
}

/// Isomorphism verdict from cheap screens and canonical labelings. Never
/// guesses: when neither input can be labeled the verdict is `Inconclusive`.
pub fn iso_test(h1: &Hypergraph, h2: &Hypergraph) -> IsoReport {
    let screened = |screen| IsoReport { verdict: IsoVerdict::NonIsomorphic, decided_by: screen, outcomes: None };
    if h1.k() != h2.k() {
        return screened(Screen::Uniformity);
    }
    if h1.n() != h2.n() {
        return screened(Screen::Order);
    }
    if h1.edge_count() != h2.edge_count() {
        return screened(Screen::EdgeCount);
    }
    if h1.sorted_degree_sequence() != h2.sorted_degree_sequence() {
        return screened(Screen::DegreeSequence);
    }
    let (o1, o2) = rayon::join(|| canonical_labeling(h1), || canonical_labeling(h2));
    let (verdict, decided_by) = match (&o1, &o2) {
        (LabelingOutcome::Success(l1), LabelingOutcome::Success(l2)) => {
            let same = relabeled_certificate(h1, l1) == relabeled_certificate(h2, l2);
            let verdict = if same { IsoVerdict::Isomorphic } else { IsoVerdict::NonIsomorphic };
            (verdict, Screen::Certificates)
        }
        (LabelingOutcome::Success(_), _) | (_, LabelingOutcome::Success(_)) => {
            (IsoVerdict::NonIsomorphic, Screen::OneSidedLabeling)
        }
        _ => (IsoVerdict::Inconclusive, Screen::BothAmbiguous),
    };
    IsoReport { verdict, decided_by, outcomes: Some((o1, o2)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[[usize; 2]]) -> Hypergraph {
        Hypergraph::new(2, n, edges).unwrap()
    }

    fn spider() -> Hypergraph {
        graph(7, &[[0, 1], [0, 2], [2, 3], [0, 4], [4, 5], [5, 6]])
    }

    #[test]
    fn path_is_ambiguous() {
        let out = refine_graph_labels(&graph(3, &[[0, 1], [1, 2]])).unwrap();
        let a = out.ambiguity().unwrap();
        assert_eq!(a.reason, AmbiguityReason::TiedColors);
        assert_eq!((a.classes, a.tied_classes), (2, 1));
    }

    #[test]
    fn spider_is_discriminated_quickly() {
        let g = spider();
        let r = degree_refinement(&g);
        assert_eq!(r.classes, 7);
        assert!(r.rounds <= 3, "rounds = {}", r.rounds);
        let out = refine_graph_labels(&g).unwrap();
        let mut labels = out.labeling().unwrap().to_vec();
        labels.sort_unstable();
        assert_eq!(labels, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn empty_graph_is_ambiguous() {
        let out = refine_graph_labels(&Hypergraph::empty(2, 4).unwrap()).unwrap();
        assert_eq!(out.status(), Status::Ambiguous);
        assert_eq!(refine_graph_labels(&Hypergraph::complete(3, 4).unwrap()), Err(CanonError::NotAGraph(3)));
    }

    #[test]
    fn complete_three_uniform_on_four_ties() {
        let out = canonical_labeling(&Hypergraph::complete(3, 4).unwrap());
        let a = out.ambiguity().unwrap();
        // Every link is a triangle, itself ambiguous.
        assert_eq!(a.reason, AmbiguityReason::RecursiveFailure);
        assert_eq!((a.classes, a.tied_classes), (1, 1));
    }

    #[test]
    fn single_edge_certificate() {
        let h = Hypergraph::new(3, 3, &[[0, 1, 2]]).unwrap();
        for perm in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            let cert = certificate(&h, &LabelingOutcome::Success(perm.to_vec())).unwrap();
            assert_eq!(cert.as_bytes(), &[3, 3, 1, 0, 1, 2]);
        }
        let amb = canonical_labeling(&h);
        assert_eq!(certificate(&h, &amb), Err(CanonError::AmbiguousOutcome));
        assert_eq!(
            certificate(&h, &LabelingOutcome::Success(vec![0, 0, 1])),
            Err(CanonError::InvalidLabeling(3))
        );
    }

    #[test]
    fn varints_are_leb128() {
        let mut out = Vec::new();
        push_varint(&mut out, 300);
        push_varint(&mut out, 0);
        push_varint(&mut out, 127);
        assert_eq!(out, vec![0xac, 0x02, 0x00, 0x7f]);
    }

    #[test]
    fn edge_count_screen() {
        let h = Hypergraph::new(3, 5, &[[0, 1, 2], [1, 2, 3]]).unwrap();
        let bigger = Hypergraph::new(3, 5, &[[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
        let rep = iso_test(&h, &bigger);
        assert_eq!((rep.verdict, rep.decided_by), (IsoVerdict::NonIsomorphic, Screen::EdgeCount));
        let k4 = Hypergraph::complete(3, 4).unwrap();
        assert_eq!(iso_test(&k4, &k4).verdict, IsoVerdict::Inconclusive);
        let g = Hypergraph::complete(2, 4).unwrap();
        assert_eq!(iso_test(&k4, &g).decided_by, Screen::Uniformity);
    }

    #[test]
    fn graph_base_case_certificates_match_under_relabeling() {
        let g = spider();
        let perm = [3, 6, 0, 5, 1, 4, 2];
        let pg = g.relabel(&perm).unwrap();
        let (a, b) = (canonical_labeling(&g), canonical_labeling(&pg));
        assert_eq!(certificate(&g, &a).unwrap(), certificate(&pg, &b).unwrap());
        assert_eq!(iso_test(&g, &pg).verdict, IsoVerdict::Isomorphic);
    }
}
