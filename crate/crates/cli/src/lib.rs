//! The `hyperiso` command line.
//!
//! Exit codes: 0 success or isomorphic, 1 non-isomorphic, 2 ambiguous or
//! inconclusive, 64 usage error, 65 malformed input or refused parameters,
//! 74 I/O failure.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperiso::canon::{canonical_labeling, certificate, iso_test, IsoVerdict, LabelingOutcome};
use hyperiso::format::{parse, parse_simple, write_configuration, write_hypergraph, write_multi};
use hyperiso::oracle::{
    automorphism_trivial, brute_iso, link_collision_pairs, occupancy_mc, occupancy_pj_exact, MAX_ORACLE_ORDER,
};
use hyperiso::randmodels::{gen_binomial, gen_configuration, gen_regular_simple, GeneratorParams};
use hyperiso::regcanon::{distance_profiles, regular_canonical_labeling, RegularParams};
use hyperiso::workbench::{run_experiment, ExperimentConfig, ExperimentKind};
use hyperiso::Hypergraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "hyperiso", version, about = "Canonical labeling and isomorphism for random uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random hypergraph.
    Gen(GenArgs),
    /// Canonically label a hypergraph and print its certificate.
    Canon { file: PathBuf },
    /// Decide whether two hypergraphs are isomorphic.
    Iso { file1: PathBuf, file2: PathBuf },
    /// Distance profiles of an r-regular hypergraph.
    Regprofile(RegprofileArgs),
    /// Exhaustive ground-truth checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a seeded experiment campaign and write CSV.
    Exp(ExpArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Binomial,
    Config,
    RegularSimple,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Edge probability (binomial model).
    #[arg(long, conflicts_with = "r")]
    p: Option<f64>,
    /// Vertex degree (configuration models).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the block partition of the configuration to this file.
    #[arg(long)]
    emit_config: Option<PathBuf>,
    /// Rejection attempts for `regular-simple`.
    #[arg(long, default_value_t = 1000)]
    max_tries: usize,
}

#[derive(Debug, Args)]
struct RegprofileArgs {
    file: PathBuf,
    #[arg(long)]
    r: usize,
    /// Print profiles of the first N vertices only.
    #[arg(long)]
    show: Option<usize>,
    /// One CSV row per vertex instead of the text report.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Exhaustive isomorphism search.
    Iso { file1: PathBuf, file2: PathBuf },
    /// Whether the identity is the only automorphism.
    Aut { file: PathBuf },
    /// Pairs of vertices with isomorphic links.
    Ek { file: PathBuf },
    /// Exact occupancy probabilities, optionally beside Monte-Carlo estimates.
    Pj {
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Monte-Carlo trials.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct ExpArgs {
    /// Experiment kind; optional when `--config` names one.
    kind: Option<String>,
    /// key=value config file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tmax: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    max_tries: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-trial wall times here.
    #[arg(long)]
    timing: Option<PathBuf>,
    /// Write the effective config here.
    #[arg(long)]
    save_config: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Io(m) => m,
        }
    }
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_simple(path: &Path) -> Result<Hypergraph, Failure> {
    parse_simple(&read(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

/// Runs the command line on `args` (program name first) with the process's
/// standard streams.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Like [`cli_main`], writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut text = String::new();
    let result = dispatch(cli.command, &mut text, err);
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return EXIT_IO;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, out: &mut String, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Gen(a) => gen(a, out),
        Command::Canon { file } => canon(&file, out),
        Command::Iso { file1, file2 } => iso(&file1, &file2, out),
        Command::Regprofile(a) => regprofile(a, out),
        Command::Oracle(c) => oracle(c, out),
        Command::Exp(a) => exp(a, out, err),
    }
}

fn gen(a: GenArgs, out: &mut String) -> Result<i32, Failure> {
    let params = match (a.model, a.p, a.r) {
        (Model::Binomial, Some(p), None) => GeneratorParams::binomial(a.n, a.k, p, a.seed),
        (Model::Binomial, _, _) => return Err(Failure::Usage("--model binomial needs --p".into())),
        (_, None, Some(r)) => GeneratorParams::regular(a.n, r, a.k, a.seed),
        _ => return Err(Failure::Usage("configuration models need --r".into())),
    };
    let (text, config) = match a.model {
        Model::Binomial => {
            if a.emit_config.is_some() {
                return Err(Failure::Usage("--emit-config applies to configuration models only".into()));
            }
            (write_hypergraph(&gen_binomial(&params).map_err(data)?), None)
        }
        Model::Config => {
            let (c, m) = gen_configuration(&params).map_err(data)?;
            (write_multi(&m), Some(c))
        }
        Model::RegularSimple => {
            let draw = gen_regular_simple(&params, a.max_tries).map_err(data)?;
            (write_hypergraph(&draw.hypergraph), Some(draw.configuration))
        }
    };
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => out.push_str(&text),
    }
    if let (Some(path), Some(c)) = (&a.emit_config, config) {
        write_file(path, &write_configuration(&c))?;
    }
    Ok(EXIT_OK)
}

fn ids(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn describe(out: &mut String, h: &Hypergraph, outcome: &LabelingOutcome) {
    match outcome {
        LabelingOutcome::Success(lab) => {
            let cert = certificate(h, outcome).expect("labeling is a bijection");
            let _ = writeln!(out, "status: success\nlabeling: {}\ncertificate: {}", ids(lab), cert.to_hex());
        }
        LabelingOutcome::Ambiguous(a) => {
            let _ = writeln!(
                out,
                "status: ambiguous\nreason: {}\nclasses: {}\ntied-classes: {}\nfingerprint: {}",
                a.reason.as_str(),
                a.classes,
                a.tied_classes,
                hex::encode(&a.fingerprint)
            );
        }
    }
}

fn canon(file: &Path, out: &mut String) -> Result<i32, Failure> {
    let h = load_simple(file)?;
    let outcome = canonical_labeling(&h);
    describe(out, &h, &outcome);
    Ok(if outcome.is_success() { EXIT_OK } else { EXIT_UNDECIDED })
}

/// Verdict of [`iso_test`], then for two ambiguous inputs the labeling
/// fingerprints and, within the size guard, the exhaustive search.
fn iso(f1: &Path, f2: &Path, out: &mut String) -> Result<i32, Failure> {
    let (h1, h2) = (load_simple(f1)?, load_simple(f2)?);
    let report = iso_test(&h1, &h2);
    let (verdict, decided_by) = match (&report.verdict, &report.outcomes) {
        (IsoVerdict::Inconclusive, Some((a, b))) => {
            let (fa, fb) = (&a.ambiguity().unwrap().fingerprint, &b.ambiguity().unwrap().fingerprint);
            if fa != fb {
                (IsoVerdict::NonIsomorphic, "fingerprints")
            } else if h1.n() <= MAX_ORACLE_ORDER {
                let found = brute_iso(&h1, &h2).map_err(data)?.is_some();
                (if found { IsoVerdict::Isomorphic } else { IsoVerdict::NonIsomorphic }, "oracle")
            } else {
                (IsoVerdict::Inconclusive, report.decided_by.as_str())
            }
        }
        (v, _) => (*v, report.decided_by.as_str()),
    };
    let _ = writeln!(out, "verdict: {}\ndecided-by: {decided_by}", verdict.as_str());
    Ok(match verdict {
        IsoVerdict::Isomorphic => EXIT_OK,
        IsoVerdict::NonIsomorphic => EXIT_NEGATIVE,
        IsoVerdict::Inconclusive => EXIT_UNDECIDED,
    })
}

fn regprofile(a: RegprofileArgs, out: &mut String) -> Result<i32, Failure> {
    let h = parse(&read(&a.file)?).map_err(|e| Failure::Data(format!("{}: {e}", a.file.display())))?.into_multi();
    let params = RegularParams::new(hyperiso::HyperEdges::order(&h), a.r, hyperiso::HyperEdges::uniformity(&h));
    let outcome = regular_canonical_labeling(&h, &params).map_err(data)?;
    let depth = params.depth().map_err(data)?;
    let profiles = distance_profiles(&h, depth);
    let shown = a.show.unwrap_or(profiles.len()).min(profiles.len());
    if a.csv {
        let header: Vec<String> = (1..=depth).map(|l| format!("d{l}")).collect();
        let _ = writeln!(out, "vertex,{}", header.join(","));
        for p in &profiles[..shown] {
            let cells: Vec<String> = p.sizes.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{},{}", p.vertex, cells.join(","));
        }
    } else {
        let l0 = params.l0.map_or("undefined".to_string(), |v| v.to_string());
        let _ = writeln!(out, "rho: {}\nlstar: {depth}\nl0: {l0}", params.rho);
        match &outcome {
            LabelingOutcome::Success(_) => {
                let _ = writeln!(out, "status: success\ntied-classes: 0");
            }
            LabelingOutcome::Ambiguous(amb) => {
                let _ = writeln!(out, "status: ambiguous\ntied-classes: {}", amb.tied_classes);
            }
        }
        let _ = writeln!(out, "profiles:");
        for p in &profiles[..shown] {
            let _ = writeln!(out, "{}: {}", p.vertex, ids(&p.sizes));
        }
        if shown < profiles.len() {
            let _ = writeln!(out, "... {} more", profiles.len() - shown);
        }
    }
    Ok(if outcome.is_success() { EXIT_OK } else { EXIT_UNDECIDED })
}

fn oracle(c: OracleCommand, out: &mut String) -> Result<i32, Failure> {
    match c {
        OracleCommand::Iso { file1, file2 } => {
            let (h1, h2) = (load_simple(&file1)?, load_simple(&file2)?);
            match brute_iso(&h1, &h2).map_err(data)? {
                Some(w) => {
                    let _ = writeln!(out, "isomorphic: yes\nwitness: {}", ids(&w));
                    Ok(EXIT_OK)
                }
                None => {
                    let _ = writeln!(out, "isomorphic: no");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        OracleCommand::Aut { file } => {
            let trivial = automorphism_trivial(&load_simple(&file)?).map_err(data)?;
            let _ = writeln!(out, "trivial: {}", if trivial { "yes" } else { "no" });
            Ok(EXIT_OK)
        }
        OracleCommand::Ek { file } => {
            let pairs = link_collision_pairs(&load_simple(&file)?).map_err(data)?;
            let _ = writeln!(out, "collisions: {}", pairs.len());
            for (i, j) in &pairs {
                let _ = writeln!(out, "{i} {j}");
            }
            let _ = writeln!(out, "ek: {}", if pairs.is_empty() { "holds" } else { "fails" });
            Ok(EXIT_OK)
        }
        OracleCommand::Pj { mu, r, s, mc, seed } => {
            let exact = occupancy_pj_exact(mu, r, s).map_err(data)?;
            let estimate = mc.map(|t| occupancy_mc(mu, r, s, t.max(1), seed)).transpose().map_err(data)?;
            let freq = estimate.as_ref().map(|e| e.capped_frequencies());
            let _ = writeln!(out, "j,fraction,decimal{}", if freq.is_some() { ",mc" } else { "" });
            let decimals = exact.to_f64();
            for (j, p) in &exact.probs {
                let _ = write!(out, "{j},{p},{}", decimals[j]);
                if let Some(f) = &freq {
                    let _ = write!(out, ",{}", f.get(j).copied().unwrap_or(0.0));
                }
                out.push('\n');
            }
            if let Some(e) = &estimate {
                let _ = writeln!(out, "# heavy_fraction={}", e.heavy_fraction());
            }
            Ok(EXIT_OK)
        }
    }
}

fn exp(a: ExpArgs, out: &mut String, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut cfg = match (&a.config, &a.kind) {
        (Some(path), kind) => {
            let mut cfg = ExperimentConfig::parse(&read(path)?).map_err(data)?;
            if let Some(kind) = kind {
                cfg.kind = kind.parse::<ExperimentKind>().map_err(|e| Failure::Usage(e.to_string()))?;
            }
            cfg
        }
        (None, Some(kind)) => {
            let kind = kind.parse::<ExperimentKind>().map_err(|e| Failure::Usage(e.to_string()))?;
            ExperimentConfig::new(kind, 0, 0)
        }
        (None, None) => return Err(Failure::Usage("exp needs a KIND or --config".into())),
    };
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = a.$field { cfg.$field = Some(v); })* };
    }
    set!(n, k, p, r, mu, s, budget);
    if let Some(v) = a.trials {
        cfg.trials = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.tmax {
        cfg.tmax = v;
    }
    if let Some(v) = a.max_tries {
        cfg.max_tries = v;
    }
    if let Some(path) = &a.out {
        cfg.output = Some(path.display().to_string());
    }
    if let Some(path) = &a.save_config {
        write_file(path, &cfg.encode())?;
    }
    let report = run_experiment(&cfg).map_err(data)?;
    let csv = report.csv();
    match &cfg.output {
        Some(path) => write_file(Path::new(path), &csv)?,
        None => out.push_str(&csv),
    }
    if let Some(path) = &a.timing {
        write_file(path, &report.timing_csv())?;
    }
    let _ = err.write_all(report.summary.render().as_bytes());
    Ok(EXIT_OK)
}
