//! Seeded generators for the binomial model `H(n, p; k)` and the
//! configuration model of r-regular k-uniform hypergraphs.

use std::collections::HashSet;

use thiserror::Error;

use crate::hypercore::{Hypergraph, HypergraphError, MultiHypergraph};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("r * n = {r} * {n} is not divisible by k = {k}")]
    Divisibility { n: usize, r: usize, k: usize },
    #[error("degree r must be at least 1")]
    ZeroDegree,
    #[error("C({n}, {k}) candidate edges do not fit in 64 bits")]
    TooManyCandidates { n: usize, k: usize },
    #[error("no simple hypergraph after {0} configuration draws")]
    TriesExhausted(usize),
    #[error("parameters name the {0} model")]
    WrongModel(&'static str),
    #[error(transparent)]
    Shape(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    /// Each k-set is an edge independently with this probability.
    Binomial { p: f64 },
    /// Every vertex lies in exactly `r` edges.
    Regular { r: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub n: usize,
    pub k: usize,
    pub density: Density,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn binomial(n: usize, k: usize, p: f64, seed: u64) -> Self {
        Self { n, k, density: Density::Binomial { p }, seed }
    }

    pub fn regular(n: usize, r: usize, k: usize, seed: u64) -> Self {
        Self { n, k, density: Density::Regular { r }, seed }
    }

    /// Vertex degree of the regular model.
    pub fn degree(&self) -> Option<usize> {
        match self.density {
            Density::Regular { r } => Some(r),
            Density::Binomial { .. } => None,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.k < 2 {
            return Err(HypergraphError::UniformityTooSmall(self.k).into());
        }
        match self.density {
            Density::Binomial { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(GeneratorError::InvalidProbability(p));
                }
                if self.k > self.n {
                    return Err(HypergraphError::UniformityExceedsOrder { k: self.k, n: self.n }.into());
                }
            }
            Density::Regular { r } => {
                if r == 0 {
                    return Err(GeneratorError::ZeroDegree);
                }
                if !(r * self.n).is_multiple_of(self.k) {
                    return Err(GeneratorError::Divisibility { n: self.n, r, k: self.k });
                }
            }
        }
        Ok(())
    }
}

/// Binomial coefficient, `None` on overflow of `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// The k-subset of rank `rank` in co-lexicographic order, ascending:
/// `rank = sum_i C(c_i, i)` for `c_1 < c_2 < ... < c_k`.
pub fn colex_unrank(mut rank: u64, k: usize) -> Vec<usize> {
    let fits = |c: u64, i: u64, rank: u64| binomial_u64(c, i).is_some_and(|b| b <= rank);
    let mut out = vec![0; k];
    let mut upper = u64::MAX;
    for i in (1..=k as u64).rev() {
        // Largest c < upper with C(c, i) <= rank; C(i - 1, i) = 0 always fits.
        let mut lo = i - 1;
        let mut hi = lo + 1;
        while hi < upper && fits(hi, i, rank) {
            lo = hi;
            hi = hi.saturating_mul(2).min(upper);
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if fits(mid, i, rank) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out[i as usize - 1] = lo as usize;
        rank -= binomial_u64(lo, i).unwrap();
        upper = lo;
    }
    out
}

pub fn colex_rank(subset: &[usize]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial_u64(c as u64, i as u64 + 1).unwrap())
        .sum()
}

/// Draws `H(n, p; k)`: walks the co-lexicographic ranking of all k-sets,
/// jumping ahead by geometric gaps `floor(ln U / ln(1 - p))`.
pub fn gen_binomial(params: &GeneratorParams) -> Result<Hypergraph, GeneratorError> {
    params.validate()?;
    let Density::Binomial { p } = params.density else {
        return Err(GeneratorError::WrongModel("regular"));
    };
    let (n, k) = (params.n, params.k);
    let total = binomial_u64(n as u64, k as u64).ok_or(GeneratorError::TooManyCandidates { n, k })?;
    if p == 0.0 {
        return Ok(Hypergraph::empty(k, n)?);
    }
    if p == 1.0 {
        return Ok(Hypergraph::complete(k, n)?);
    }
    let mut rng = SeededRng::new(params.seed);
    let log_q = (-p).ln_1p();
    let mut tuples = Vec::new();
    let mut pos: u64 = 0;
    loop {
        let gap = (rng.open_unit_f64().ln() / log_q).floor();
        if gap >= (total - pos) as f64 {
            break;
        }
        pos += gap as u64;
        if pos >= total {
            break;
        }
        tuples.push(colex_unrank(pos, k));
        pos += 1;
        if pos >= total {
            break;
        }
    }
    Ok(Hypergraph::from_sorted_tuples(k, n, tuples))
}

/// A partition of the `rn` points into `m = rn/k` blocks of size `k`. Point
/// `p` belongs to vertex `p / r`, so vertex `i` owns points `ir..ir+r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    n: usize,
    r: usize,
    k: usize,
    /// Blocks flattened; each block ascending, blocks ordered by first point.
    blocks: Vec<usize>,
}

impl Configuration {
    /// Builds from an arbitrary ordering of blocks, validating the partition.
    pub fn from_blocks(n: usize, r: usize, k: usize, blocks: &[Vec<usize>]) -> Result<Self, GeneratorError> {
        GeneratorParams::regular(n, r, k, 0).validate()?;
        let points = r * n;
        let mut seen = vec![false; points];
        let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != k {
                return Err(HypergraphError::WrongArity { edge: i, expected: k, found: b.len() }.into());
            }
            for &p in b {
                if p >= points {
                    return Err(HypergraphError::VertexOutOfRange { edge: i, vertex: p, n: points }.into());
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(HypergraphError::RepeatedVertex { edge: i, vertex: p }.into());
                }
            }
            let mut b = b.clone();
            b.sort_unstable();
            sorted.push(b);
        }
        if sorted.len() * k != points {
            return Err(HypergraphError::WrongArity { edge: sorted.len(), expected: points, found: sorted.len() * k }.into());
        }
        sorted.sort_unstable();
        Ok(Self { n, r, k, blocks: sorted.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len() / self.k
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks.chunks_exact(self.k)
    }

    pub fn owner(&self, point: usize) -> usize {
        point / self.r
    }

    pub fn point_owners(&self) -> Vec<usize> {
        (0..self.r * self.n).map(|p| self.owner(p)).collect()
    }

    /// The multihypergraph with one edge `{f(w) : w in F_i}` per block.
    pub fn project(&self) -> MultiHypergraph {
        MultiHypergraph::from_tuples(
            self.k,
            self.n,
            self.blocks().map(|b| (b.iter().map(|&p| self.owner(p)).collect::<Vec<_>>(), 1)),
        )
        .expect("configuration blocks project to valid tuples")
    }
}

/// A uniformly random configuration (Fisher-Yates shuffle of the points,
/// then consecutive chunks of `k`) together with its projection.
pub fn gen_configuration(params: &GeneratorParams) -> Result<(Configuration, MultiHypergraph), GeneratorError> {
    let mut rng = SeededRng::new(params.seed);
    draw_configuration(params, &mut rng)
}

fn draw_configuration(
    params: &GeneratorParams,
    rng: &mut SeededRng,
) -> Result<(Configuration, MultiHypergraph), GeneratorError> {
    params.validate()?;
    let Density::Regular { r } = params.density else {
        return Err(GeneratorError::WrongModel("binomial"));
    };
    let (n, k) = (params.n, params.k);
    let mut points: Vec<usize> = (0..r * n).collect();
    rng.shuffle(&mut points);
    let mut blocks: Vec<Vec<usize>> = points
        .chunks_exact(k)
        .map(|c| {
            let mut b = c.to_vec();
            b.sort_unstable();
            b
        })
        .collect();
    blocks.sort_unstable();
    let config = Configuration { n, r, k, blocks: blocks.concat() };
    let projected = config.project();
    Ok((config, projected))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularDraw {
    pub hypergraph: Hypergraph,
    pub configuration: Configuration,
    /// Configurations drawn, including the accepted one.
    pub tries: usize,
}

/// Rejection sampling: redraws configurations from one seeded stream until
/// the projection has no repeated vertex in an edge and no repeated edge.
pub fn gen_regular_simple(params: &GeneratorParams, max_tries: usize) -> Result<RegularDraw, GeneratorError> {
    params.validate()?;
    if params.k > params.n {
        return Err(GeneratorError::TriesExhausted(0));
    }
    let mut rng = SeededRng::new(params.seed);
    for tries in 1..=max_tries {
        let (configuration, projected) = draw_configuration(params, &mut rng)?;
        if projected.is_simple() {
            let hypergraph = projected.to_simple()?;
            return Ok(RegularDraw { hypergraph, configuration, tries });
        }
    }
    Err(GeneratorError::TriesExhausted(max_tries))
}

/// True iff a configuration projects to a simple hypergraph.
pub fn projects_simple(config: &Configuration) -> bool {
    let mut seen = HashSet::new();
    config.blocks().all(|b| {
        let mut owners: Vec<usize> = b.iter().map(|&p| config.owner(p)).collect();
        owners.sort_unstable();
        owners.windows(2).all(|w| w[0] < w[1]) && seen.insert(owners)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeFlag {
    Inside,
    Boundary,
    Outside,
}

/// Margins of `p` and `1 - p` against the scale `n^{-(k-2)} ln n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub scale: f64,
    pub p_ratio: f64,
    pub complement_ratio: f64,
}

const BOUNDARY_TOLERANCE: f64 = 1e-9;

impl ThresholdReport {
    fn classify(ratio: f64) -> RegimeFlag {
        if (ratio - 1.0).abs() <= BOUNDARY_TOLERANCE {
            RegimeFlag::Boundary
        } else if ratio > 1.0 {
            RegimeFlag::Inside
        } else {
            RegimeFlag::Outside
        }
    }

    pub fn p_flag(&self) -> RegimeFlag {
        Self::classify(self.p_ratio)
    }

    pub fn complement_flag(&self) -> RegimeFlag {
        Self::classify(self.complement_ratio)
    }

    /// The worse of the two flags.
    pub fn flag(&self) -> RegimeFlag {
        Self::classify(self.p_ratio.min(self.complement_ratio))
    }
}

pub fn validate_threshold(n: usize, k: usize, p: f64) -> ThresholdReport {
    let nf = n as f64;
    let scale = nf.powi(-(k as i32 - 2)) * nf.ln();
    ThresholdReport { scale, p_ratio: p / scale, complement_ratio: (1.0 - p) / scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::HyperEdges;

    #[test]
    fn binomial_extremes() {
        let empty = gen_binomial(&GeneratorParams::binomial(10, 3, 0.0, 1)).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = gen_binomial(&GeneratorParams::binomial(10, 3, 1.0, 1)).unwrap();
        assert_eq!(full.edge_count(), 120);
        assert_eq!(
            gen_binomial(&GeneratorParams::binomial(10, 3, 1.5, 1)).unwrap_err(),
            GeneratorError::InvalidProbability(1.5)
        );
    }

    #[test]
    fn binomial_is_deterministic() {
        let p = GeneratorParams::binomial(30, 3, 0.2, 99);
        assert_eq!(gen_binomial(&p).unwrap(), gen_binomial(&p).unwrap());
        assert_ne!(gen_binomial(&p).unwrap(), gen_binomial(&p.with_seed(100)).unwrap());
    }

    #[test]
    fn colex_rank_round_trip() {
        let mut expected_rank = 0u64;
        // Co-lex order of 3-subsets of 0..7 by brute force: sort by reversed tuple.
        let mut all = Vec::new();
        for a in 0..7 {
            for b in a + 1..7 {
                for c in b + 1..7 {
                    all.push(vec![a, b, c]);
                }
            }
        }
        all.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
        for s in &all {
            assert_eq!(colex_unrank(expected_rank, 3), *s);
            assert_eq!(colex_rank(s), expected_rank);
            expected_rank += 1;
        }
        assert_eq!(colex_unrank(binomial_u64(10_000, 3).unwrap() - 1, 3), vec![9997, 9998, 9999]);
    }

    #[test]
    fn configuration_examples() {
        let (c, h) = gen_configuration(&GeneratorParams::regular(3, 2, 3, 5)).unwrap();
        assert_eq!(c.block_count(), 2);
        assert_eq!(h.degrees(), vec![2, 2, 2]);
        let (c, _) = gen_configuration(&GeneratorParams::regular(4, 3, 3, 5)).unwrap();
        assert_eq!(c.block_count(), 4);
        assert_eq!(
            gen_configuration(&GeneratorParams::regular(4, 2, 3, 5)).unwrap_err(),
            GeneratorError::Divisibility { n: 4, r: 2, k: 3 }
        );
    }

    #[test]
    fn three_vertex_two_regular_is_never_simple() {
        let err = gen_regular_simple(&GeneratorParams::regular(3, 2, 3, 11), 1000).unwrap_err();
        assert_eq!(err, GeneratorError::TriesExhausted(1000));
    }

    #[test]
    fn regular_simple_output() {
        let draw = gen_regular_simple(&GeneratorParams::regular(30, 3, 3, 4), 1000).unwrap();
        assert!(draw.degrees_ok(3));
        assert!(projects_simple(&draw.configuration));
        assert_eq!(draw.configuration.project().to_simple().unwrap(), draw.hypergraph);
    }

    impl RegularDraw {
        fn degrees_ok(&self, r: usize) -> bool {
            self.hypergraph.degrees().iter().all(|&d| d == r)
        }
    }

    #[test]
    fn configuration_from_blocks_validates() {
        let c = Configuration::from_blocks(3, 2, 3, &[vec![5, 0, 3], vec![1, 2, 4]]).unwrap();
        assert_eq!(c.blocks().collect::<Vec<_>>(), vec![&[0, 3, 5][..], &[1, 2, 4][..]]);
        assert!(Configuration::from_blocks(3, 2, 3, &[vec![0, 0, 3], vec![1, 2, 4]]).is_err());
        assert!(Configuration::from_blocks(3, 2, 3, &[vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn threshold_margins() {
        let rep = validate_threshold(60, 3, 0.3);
        assert!((rep.p_ratio - 0.3 / (60f64.ln() / 60.0)).abs() < 1e-12);
        assert!((rep.p_ratio - 4.3963).abs() < 1e-3);
        assert_eq!(rep.flag(), RegimeFlag::Inside);

        let n = 60usize;
        let p = (n as f64).ln() / n as f64;
        assert_eq!(validate_threshold(n, 3, p).p_flag(), RegimeFlag::Boundary);

        assert_eq!(validate_threshold(60, 3, 0.001).flag(), RegimeFlag::Outside);
    }
}
