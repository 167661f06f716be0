//! Seeded trial campaigns with CSV output.
//!
//! Trial `t` of a campaign with base seed `b` draws its instance from seed
//! `derive_seed(b, t)`, so every row can be reproduced on its own. Wall times
//! are measured but kept out of the main CSV.
//!
//! CSV columns after `trial,seed`:
//!
//! | kind           | columns                                   | success when          |
//! |----------------|-------------------------------------------|-----------------------|
//! | labeling-rate  | edges,status,reason,classes,tied_classes  | status = success      |
//! | regular-rate   | tries,status,classes,tied_classes         | status = success      |
//! | ek-rate        | edges,collisions                          | collisions = 0        |
//! | density-scan   | edges,witness_edges,witness_vertices      | no witness            |
//! | dispensable    | exposed,dispensable                       | dispensable <= 20     |
//! | occupancy      | x,max_load                                | max_load <= 2         |

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_labeling, LabelingOutcome};
use crate::hypercore::Hypergraph;
use crate::oracle::{self, link_collision_pairs, occupancy_pj_exact, MAX_ORACLE_ORDER};
use crate::randmodels::{gen_binomial, gen_configuration, gen_regular_simple, GeneratorError, GeneratorParams};
use crate::regcanon::{count_dispensable_configuration, regular_canonical_labeling, RegularParams};
use crate::rng::{derive_seed, SeededRng};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "HYPERISO_WORKERS";
pub const CSV_VERSION: &str = "v1";
/// Cap on dispensable edges among the first `floor(n^(2/5))` exposures.
pub const DISPENSABLE_CAP: u64 = 20;

const MAX_CANON_WORK: u128 = 50_000_000;
const MAX_TMAX: usize = 6;
const MAX_DENSITY_ORDER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentKind {
    LabelingRate,
    RegularRate,
    EkRate,
    DensityScan,
    Dispensable,
    Occupancy,
}

impl ExperimentKind {
    pub const ALL: [Self; 6] =
        [Self::LabelingRate, Self::RegularRate, Self::EkRate, Self::DensityScan, Self::Dispensable, Self::Occupancy];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LabelingRate => "labeling-rate",
            Self::RegularRate => "regular-rate",
            Self::EkRate => "ek-rate",
            Self::DensityScan => "density-scan",
            Self::Dispensable => "dispensable",
            Self::Occupancy => "occupancy",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Self::LabelingRate => &["trial", "seed", "edges", "status", "reason", "classes", "tied_classes"],
            Self::RegularRate => &["trial", "seed", "tries", "status", "classes", "tied_classes"],
            Self::EkRate => &["trial", "seed", "edges", "collisions"],
            Self::DensityScan => &["trial", "seed", "edges", "witness_edges", "witness_vertices"],
            Self::Dispensable => &["trial", "seed", "exposed", "dispensable"],
            Self::Occupancy => &["trial", "seed", "x", "max_load"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| ExperimentError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("unknown experiment kind `{0}`")]
    UnknownKind(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{kind}: missing parameter `{key}`")]
    Missing { kind: ExperimentKind, key: &'static str },
    #[error("{kind}: parameter `{key}` does not apply")]
    Unused { kind: ExperimentKind, key: &'static str },
    #[error("{kind}: guard `{guard}` refused the configuration: {detail}")]
    Guard { kind: ExperimentKind, guard: &'static str, detail: String },
    #[error("trial {trial}: {source}")]
    Generator { trial: u64, source: GeneratorError },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Everything needed to rerun a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<f64>,
    /// Vertex degree, or block size for `occupancy`.
    pub r: Option<usize>,
    pub mu: Option<usize>,
    pub s: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    /// Largest witness size for `density-scan`.
    pub tmax: usize,
    /// Exposure budget for `dispensable`; defaults to `floor(n^(2/5))`.
    pub budget: Option<usize>,
    /// Rejection attempts per simple regular draw.
    pub max_tries: usize,
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, trials: u64, seed: u64) -> Self {
        Self {
            kind,
            n: None,
            k: None,
            p: None,
            r: None,
            mu: None,
            s: None,
            trials,
            seed,
            tmax: 4,
            budget: None,
            max_tries: 1000,
            output: None,
        }
    }

    /// `key=value` lines in a fixed order; unset options are omitted.
    pub fn encode(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind={}", self.kind);
        let opt = |out: &mut String, key: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(out, "{key}={v}");
            }
        };
        opt(&mut out, "n", self.n.map(|v| v.to_string()));
        opt(&mut out, "k", self.k.map(|v| v.to_string()));
        opt(&mut out, "p", self.p.map(|v| v.to_string()));
        opt(&mut out, "r", self.r.map(|v| v.to_string()));
        opt(&mut out, "mu", self.mu.map(|v| v.to_string()));
        opt(&mut out, "s", self.s.map(|v| v.to_string()));
        let _ = writeln!(out, "trials={}", self.trials);
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "tmax={}", self.tmax);
        opt(&mut out, "budget", self.budget.map(|v| v.to_string()));
        let _ = writeln!(out, "max_tries={}", self.max_tries);
        opt(&mut out, "output", self.output.clone());
        out
    }

    /// Parses `key=value` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut values: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ExperimentError::Config { line: i + 1, message: format!("expected key=value, got `{line}`") })?;
            let key = key.trim().to_string();
            if values.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(ExperimentError::Config { line: i + 1, message: format!("repeated key `{key}`") });
            }
        }
        let (_, kind) =
            values.remove("kind").ok_or(ExperimentError::Config { line: 0, message: "missing `kind`".into() })?;
        let mut cfg = Self::new(kind.parse()?, 0, 0);
        let mut trials_set = false;
        for (key, (line, value)) in values {
            let bad = |what: &str| ExperimentError::Config { line, message: format!("invalid {what} `{value}`") };
            let int = || value.parse::<usize>().map_err(|_| bad(&key));
            let long = || value.parse::<u64>().map_err(|_| bad(&key));
            match key.as_str() {
                "n" => cfg.n = Some(int()?),
                "k" => cfg.k = Some(int()?),
                "p" => cfg.p = Some(value.parse::<f64>().map_err(|_| bad("p"))?),
                "r" => cfg.r = Some(int()?),
                "mu" => cfg.mu = Some(int()?),
                "s" => cfg.s = Some(int()?),
                "trials" => {
                    cfg.trials = long()?;
                    trials_set = true;
                }
                "seed" => cfg.seed = long()?,
                "tmax" => cfg.tmax = int()?,
                "budget" => cfg.budget = Some(int()?),
                "max_tries" => cfg.max_tries = int()?,
                "output" => cfg.output = Some(value.clone()),
                _ => return Err(ExperimentError::Config { line, message: format!("unknown key `{key}`") }),
            }
        }
        if !trials_set {
            return Err(ExperimentError::Config { line: 0, message: "missing `trials`".into() });
        }
        Ok(cfg)
    }

    fn need<T: Copy>(&self, key: &'static str, v: Option<T>) -> Result<T, ExperimentError> {
        v.ok_or(ExperimentError::Missing { kind: self.kind, key })
    }

    fn guard(&self, guard: &'static str, detail: impl Into<String>) -> ExperimentError {
        ExperimentError::Guard { kind: self.kind, guard, detail: detail.into() }
    }

    fn reject_unused(&self, keys: &[(&'static str, bool)]) -> Result<(), ExperimentError> {
        match keys.iter().find(|(_, set)| *set) {
            Some((key, _)) => Err(ExperimentError::Unused { kind: self.kind, key }),
            None => Ok(()),
        }
    }

    /// Instance parameters for trial seed `seed`.
    fn generator(&self, seed: u64) -> Result<GeneratorParams, ExperimentError> {
        let n = self.need("n", self.n)?;
        let k = self.need("k", self.k)?;
        let params = match (self.p, self.r) {
            (Some(p), None) => GeneratorParams::binomial(n, k, p, seed),
            (None, Some(r)) => GeneratorParams::regular(n, r, k, seed),
            (None, None) => return Err(self.guard("model", "set exactly one of p (binomial) or r (regular)")),
            (Some(_), Some(_)) => return Err(self.guard("model", "p and r are mutually exclusive")),
        };
        params.validate().map_err(|e| self.guard("model", e.to_string()))?;
        Ok(params)
    }

    pub fn dispensable_budget(&self) -> Option<usize> {
        self.budget.or_else(|| self.n.map(floor_two_fifths))
    }

    /// Checks parameters and the per-experiment size guards.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(self.guard("trials", "need at least one trial"));
        }
        use ExperimentKind::*;
        match self.kind {
            Occupancy => {
                self.reject_unused(&[("n", self.n.is_some()), ("k", self.k.is_some()), ("p", self.p.is_some())])?;
                let (mu, r, s) = (self.need("mu", self.mu)?, self.need("r", self.r)?, self.need("s", self.s)?);
                if mu == 0 || r == 0 || s == 0 || s > r * mu {
                    return Err(self.guard("occupancy-range", format!("need 1 <= s <= r*mu, got mu={mu} r={r} s={s}")));
                }
                return Ok(());
            }
            _ => self.reject_unused(&[("mu", self.mu.is_some()), ("s", self.s.is_some())])?,
        }
        let params = self.generator(0)?;
        let (n, k) = (params.n, params.k);
        match self.kind {
            LabelingRate | EkRate => {
                if self.r.is_some() {
                    return Err(ExperimentError::Unused { kind: self.kind, key: "r" });
                }
                if self.kind == EkRate && k < 3 {
                    return Err(self.guard("uniformity", "links need k >= 3"));
                }
                if self.kind == EkRate && n - 1 > MAX_ORACLE_ORDER {
                    return Err(self.guard("oracle-size", format!("links have {} vertices, limit {MAX_ORACLE_ORDER}", n - 1)));
                }
                let work = (n as u128).pow(k.min(8) as u32);
                if self.kind == LabelingRate && work > MAX_CANON_WORK {
                    return Err(self.guard("canon-work", format!("n^k = {work} exceeds {MAX_CANON_WORK}")));
                }
            }
            RegularRate | Dispensable => {
                if self.p.is_some() {
                    return Err(ExperimentError::Unused { kind: self.kind, key: "p" });
                }
                let r = params.degree().unwrap_or(0);
                let rp = RegularParams::new(n, r, k);
                if self.kind == RegularRate {
                    rp.depth().map_err(|e| self.guard("profile-depth", e.to_string()))?;
                    if self.max_tries == 0 {
                        return Err(self.guard("regular-tries", "max_tries must be positive"));
                    }
                }
            }
            DensityScan => {
                if self.tmax < 2 || self.tmax > MAX_TMAX {
                    return Err(self.guard("dense-search", format!("tmax must be in 2..={MAX_TMAX}, got {}", self.tmax)));
                }
                if n > MAX_DENSITY_ORDER {
                    return Err(self.guard("dense-search", format!("n = {n} exceeds {MAX_DENSITY_ORDER}")));
                }
                if self.r.is_some() && self.max_tries == 0 {
                    return Err(self.guard("regular-tries", "max_tries must be positive"));
                }
            }
            Occupancy => unreachable!(),
        }
        Ok(())
    }
}

/// Largest `b` with `b^5 <= n^2`.
fn floor_two_fifths(n: usize) -> usize {
    let target = (n as u128).pow(2);
    (1..).find(|&b: &u128| b.pow(5) > target).unwrap() as usize - 1
}

/// Per-experiment measurements of one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    Labeling { edges: usize, outcome: OutcomeSummary },
    Regular { tries: usize, outcome: OutcomeSummary },
    Ek { edges: usize, collisions: usize },
    Density { edges: usize, witness: Option<(usize, usize)> },
    Dispensable { exposed: usize, dispensable: usize },
    Occupancy { x: usize, max_load: usize },
}

/// The parts of a [`LabelingOutcome`] that go into a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSummary {
    pub success: bool,
    pub reason: Option<&'static str>,
    pub classes: usize,
    pub tied_classes: usize,
}

impl OutcomeSummary {
    fn of(outcome: &LabelingOutcome, n: usize) -> Self {
        match outcome {
            LabelingOutcome::Success(_) => Self { success: true, reason: None, classes: n, tied_classes: 0 },
            LabelingOutcome::Ambiguous(a) => {
                Self { success: false, reason: Some(a.reason.as_str()), classes: a.classes, tied_classes: a.tied_classes }
            }
        }
    }

    fn status(&self) -> &'static str {
        if self.success {
            "success"
        } else {
            "ambiguous"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub outcome: TrialOutcome,
    /// Monotonic-clock duration; not part of the CSV.
    pub wall_nanos: u64,
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Int(u64),
    Text(&'static str),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl TrialRow {
    /// Cells in [`ExperimentKind::columns`] order.
    pub fn cells(&self) -> Vec<Cell> {
        use Cell::*;
        let mut cells = vec![Int(self.trial), Int(self.seed)];
        let u = |v: usize| Int(v as u64);
        match &self.outcome {
            TrialOutcome::Labeling { edges, outcome } => cells.extend([
                u(*edges),
                Text(outcome.status()),
                Text(outcome.reason.unwrap_or("-")),
                u(outcome.classes),
                u(outcome.tied_classes),
            ]),
            TrialOutcome::Regular { tries, outcome } => {
                cells.extend([u(*tries), Text(outcome.status()), u(outcome.classes), u(outcome.tied_classes)])
            }
            TrialOutcome::Ek { edges, collisions } => cells.extend([u(*edges), u(*collisions)]),
            TrialOutcome::Density { edges, witness } => {
                cells.push(u(*edges));
                match witness {
                    Some((t, v)) => cells.extend([u(*t), u(*v)]),
                    None => cells.extend([Text("none"), Text("none")]),
                }
            }
            TrialOutcome::Dispensable { exposed, dispensable } => cells.extend([u(*exposed), u(*dispensable)]),
            TrialOutcome::Occupancy { x, max_load } => cells.extend([u(*x), u(*max_load)]),
        }
        cells
    }

    pub fn success(&self) -> bool {
        match &self.outcome {
            TrialOutcome::Labeling { outcome, .. } | TrialOutcome::Regular { outcome, .. } => outcome.success,
            TrialOutcome::Ek { collisions, .. } => *collisions == 0,
            TrialOutcome::Density { witness, .. } => witness.is_none(),
            TrialOutcome::Dispensable { dispensable, .. } => *dispensable as u64 <= DISPENSABLE_CAP,
            TrialOutcome::Occupancy { max_load, .. } => *max_load <= 2,
        }
    }
}

/// Runs trial `trial` of `config`, which must already be validated.
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialRow, ExperimentError> {
    let seed = derive_seed(config.seed, trial);
    let start = Instant::now();
    let generated = |e| ExperimentError::Generator { trial, source: e };
    let outcome = match config.kind {
        ExperimentKind::LabelingRate => {
            let h = gen_binomial(&config.generator(seed)?).map_err(generated)?;
            TrialOutcome::Labeling { edges: h.edge_count(), outcome: OutcomeSummary::of(&canonical_labeling(&h), h.n()) }
        }
        ExperimentKind::RegularRate => {
            let params = config.generator(seed)?;
            let draw = gen_regular_simple(&params, config.max_tries).map_err(generated)?;
            let rp = RegularParams::new(params.n, params.degree().unwrap(), params.k);
            let outcome = regular_canonical_labeling(&draw.hypergraph, &rp)
                .map_err(|e| config.guard("profile-depth", e.to_string()))?;
            TrialOutcome::Regular { tries: draw.tries, outcome: OutcomeSummary::of(&outcome, params.n) }
        }
        ExperimentKind::EkRate => {
            let h = gen_binomial(&config.generator(seed)?).map_err(generated)?;
            let pairs = link_collision_pairs(&h).map_err(|e| config.guard("oracle-size", e.to_string()))?;
            TrialOutcome::Ek { edges: h.edge_count(), collisions: pairs.len() }
        }
        ExperimentKind::DensityScan => {
            let params = config.generator(seed)?;
            let h: Hypergraph = if config.r.is_some() {
                gen_regular_simple(&params, config.max_tries).map_err(generated)?.hypergraph
            } else {
                gen_binomial(&params).map_err(generated)?
            };
            let witness = h.find_dense_witness(config.tmax).map(|w| (w.edges.len(), w.vertices.len()));
            TrialOutcome::Density { edges: h.edge_count(), witness }
        }
        ExperimentKind::Dispensable => {
            let (configuration, _) = gen_configuration(&config.generator(seed)?).map_err(generated)?;
            let budget = config.dispensable_budget().unwrap_or(0);
            let c = count_dispensable_configuration(&configuration, 0, budget);
            TrialOutcome::Dispensable { exposed: c.exposed, dispensable: c.dispensable }
        }
        ExperimentKind::Occupancy => {
            let (mu, r, s) = (config.mu.unwrap(), config.r.unwrap(), config.s.unwrap());
            let (x, max_load) = oracle::draw_occupancy(mu, r, s, &mut SeededRng::new(seed));
            TrialOutcome::Occupancy { x, max_load }
        }
    };
    Ok(TrialRow { trial, seed, outcome, wall_nanos: start.elapsed().as_nanos() as u64 })
}

/// Worker count from [`WORKERS_ENV`], or the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub column: &'static str,
    pub mean: f64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub kind: ExperimentKind,
    pub trials: u64,
    pub successes: u64,
    /// Mean and max of every integer column other than `trial` and `seed`.
    pub columns: Vec<ColumnStats>,
    /// 50th, 90th and 100th percentile wall times in nanoseconds.
    pub wall_nanos: [u64; 3],
    /// Exact `P_j` (reduced fraction, decimal) beside the Monte-Carlo
    /// frequency, for `occupancy`.
    pub occupancy: Vec<(usize, String, f64, f64)>,
}

impl Summary {
    pub fn success_fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn from_rows(config: &ExperimentConfig, rows: &[TrialRow]) -> Self {
        let names = config.kind.columns();
        let mut columns: Vec<ColumnStats> = Vec::new();
        for (c, &name) in names.iter().enumerate().skip(2) {
            let values: Vec<u64> = rows
                .iter()
                .filter_map(|row| match row.cells()[c] {
                    Cell::Int(v) => Some(v),
                    Cell::Text(_) => None,
                })
                .collect();
            if values.is_empty() {
                continue;
            }
            let mean = values.iter().map(|&v| v as f64).sum::<f64>() / values.len() as f64;
            columns.push(ColumnStats { column: name, mean, max: values.iter().copied().max().unwrap() });
        }
        let mut walls: Vec<u64> = rows.iter().map(|r| r.wall_nanos).collect();
        walls.sort_unstable();
        let pct = |q: f64| -> u64 {
            if walls.is_empty() {
                return 0;
            }
            let idx = ((q * walls.len() as f64).ceil() as usize).clamp(1, walls.len()) - 1;
            walls[idx]
        };
        let mut occupancy = Vec::new();
        if let (ExperimentKind::Occupancy, Some(mu), Some(r), Some(s)) = (config.kind, config.mu, config.r, config.s) {
            if let Ok(exact) = occupancy_pj_exact(mu, r, s) {
                let trials = rows.len().max(1) as f64;
                for (j, p) in &exact.probs {
                    let capped = rows
                        .iter()
                        .filter(|row| matches!(row.outcome, TrialOutcome::Occupancy { x, max_load } if x == *j && max_load <= 2))
                        .count();
                    let decimal = num_traits::ToPrimitive::to_f64(p).unwrap_or(f64::NAN);
                    occupancy.push((*j, p.to_string(), decimal, capped as f64 / trials));
                }
            }
        }
        Self {
            kind: config.kind,
            trials: rows.len() as u64,
            successes: rows.iter().filter(|r| r.success()).count() as u64,
            columns,
            wall_nanos: [pct(0.5), pct(0.9), pct(1.0)],
            occupancy,
        }
    }

    /// `key=value` report; the wall-time lines vary between runs.
    pub fn render(&self) -> String {
        let mut out = format!("# hyperiso-exp {CSV_VERSION} {} summary\n", self.kind);
        let _ = writeln!(out, "trials={}", self.trials);
        let _ = writeln!(out, "successes={}", self.successes);
        let _ = writeln!(out, "success_fraction={}", self.success_fraction());
        for c in &self.columns {
            let _ = writeln!(out, "mean.{}={}", c.column, c.mean);
            let _ = writeln!(out, "max.{}={}", c.column, c.max);
        }
        for (j, frac, dec, mc) in &self.occupancy {
            let _ = writeln!(out, "exact.P_{j}={frac} {dec}");
            let _ = writeln!(out, "mc.P_{j}={mc}");
        }
        let [p50, p90, p100] = self.wall_nanos;
        let _ = writeln!(out, "wall_ns.p50={p50}\nwall_ns.p90={p90}\nwall_ns.max={p100}");
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<TrialRow>,
    pub summary: Summary,
}

impl ExperimentReport {
    /// Versioned CSV of the rows, without wall times.
    pub fn csv(&self) -> String {
        let kind = self.summary.kind;
        let mut out = format!("# hyperiso-exp {CSV_VERSION} {kind}\n{}\n", kind.columns().join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.cells().iter().map(Cell::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Wall times, kept apart from [`Self::csv`].
    pub fn timing_csv(&self) -> String {
        let mut out = format!("# hyperiso-exp {CSV_VERSION} {} timing\ntrial,wall_ns\n", self.summary.kind);
        for row in &self.rows {
            let _ = writeln!(out, "{},{}", row.trial, row.wall_nanos);
        }
        out
    }
}

/// Runs every trial on a pool of [`worker_count`] threads. Rows come back in
/// trial order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    run_experiment_with_workers(config, worker_count())
}

pub fn run_experiment_with_workers(config: &ExperimentConfig, workers: usize) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    let rows: Vec<TrialRow> =
        pool.install(|| (0..config.trials).into_par_iter().map(|t| run_trial(config, t)).collect::<Result<_, _>>())?;
    let summary = Summary::from_rows(config, &rows);
    Ok(ExperimentReport { rows, summary })
}
