//! Command-line driver. [`RunConfig`] is both the parsed command line and
//! the record embedded in every output document.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{construct_gadget_witness, construct_wall_witness, ConstructError, WeightedMultigraph};
use crate::io::{
    self, IoError, ProbeDocument, ReportDocument, Witness, WitnessDocument, FORMAT_VERSION,
};
use crate::lset::{gap_witness, lower_density_prefix, parse_set_spec, IntSet, LsetError};
use crate::verify::{probe_erdos_posa, verify_gadget, verify_wall, VerifyError, VerifyMode, VerifyOptions};

#[derive(Debug, Clone, PartialEq, Eq, Parser, Serialize, Deserialize)]
#[command(name = "lcycle", version, about = "Construct and verify L-cycle Erdős–Pósa counterexamples")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for verification (default: all cores).
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build the theta-subdivided grid in which all L-cycles pairwise meet.
    ConstructGadget(GadgetArgs),
    /// Build the weighted wall with crossing chords.
    ConstructWall(WallArgs),
    /// Check a witness file and write a report.
    Verify(VerifyArgs),
    /// Exact L-cycle packing number and minimum hitting set of a small graph.
    Probe(ProbeArgs),
    /// Convert a witness to DOT or an edge list.
    Export(ExportArgs),
    /// Prefix densities and gap witnesses of a set.
    Density(DensityArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct GadgetArgs {
    /// Set spec, e.g. `powers:10` or `explicit:10,100`.
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 1)]
    pub t: u128,
    #[arg(long, default_value_t = 1)]
    pub s: u128,
    #[arg(long, default_value_t = 200)]
    pub x_bound: u128,
    /// Largest `a` tried when computing `g(x)`.
    #[arg(long, default_value_t = 50)]
    pub a_max: u128,
    /// Witness JSON path (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct WallArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Largest value any search may reach.
    #[arg(long, default_value_t = 1_000_000_000_000_000_000_000_000_000_000)]
    pub search_bound: u128,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Exhaustive,
    Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextOrJson {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Witness JSON.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 5_000_000)]
    pub cycle_cap: u64,
    #[arg(long, default_value_t = 20_000_000_000)]
    pub subset_cap: u64,
    #[arg(long, default_value_t = 2_000_000)]
    pub case_cap: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub path_cap: u64,
    /// Also check common intersection at these t.
    #[arg(long = "also-t")]
    pub also_t: Vec<u128>,
    /// Report JSON path.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    pub format: TextOrJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ProbeArgs {
    /// Edge list (`u v w` per line, 1-based) or witness JSON.
    pub input: PathBuf,
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub cycle_cap: u64,
    #[arg(long, default_value_t = 100_000_000)]
    pub node_cap: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    pub format: TextOrJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Dot,
    Edges,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ExportArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
    pub format: ExportFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub set: String,
    /// Largest prefix length.
    #[arg(long)]
    pub n: u128,
    /// Table rows, at n/rows, 2n/rows, ..., n.
    #[arg(long, default_value_t = 10)]
    pub rows: u128,
    /// Report the first gap of every length 1..=gaps.
    #[arg(long, default_value_t = 0)]
    pub gaps: u128,
    #[arg(long, default_value_t = 1_000_000_000)]
    pub search_bound: u128,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Lset(#[from] LsetError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    VerificationFailed = 1,
    Usage = 2,
    BoundExhausted = 3,
}

impl CliError {
    pub fn exit(&self) -> Exit {
        let exhausted = match self {
            CliError::Lset(e) => e.is_bound_exhausted(),
            CliError::Construct(e) => e.is_bound_exhausted(),
            CliError::Verify(VerifyError::CycleCapExceeded { .. }) => true,
            CliError::Verify(e) => e.is_bound_exhausted(),
            CliError::Usage(_) | CliError::Io(_) => false,
        };
        if exhausted {
            Exit::BoundExhausted
        } else {
            Exit::Usage
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_set(spec: &str) -> Result<IntSet, CliError> {
    parse_set_spec(spec).map_err(|e| usage(format!("--set: {e}")))
}

impl RunConfig {
    /// Rejects bad parameters before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.jobs == Some(0) {
            return Err(usage("--jobs must be >= 1"));
        }
        match &self.command {
            Command::ConstructGadget(a) => {
                parse_set(&a.set)?;
                if a.t == 0 {
                    return Err(usage("--t must be >= 1"));
                }
                if a.x_bound < 2 {
                    return Err(usage("--x-bound must be >= 2"));
                }
            }
            Command::ConstructWall(a) => {
                parse_set(&a.set)?;
                if a.ell == 0 {
                    return Err(usage("--ell must be >= 1"));
                }
            }
            Command::Verify(_) | Command::Export(_) => {}
            Command::Probe(a) => {
                parse_set(&a.set)?;
                if a.t == 0 {
                    return Err(usage("--t must be >= 1"));
                }
            }
            Command::Density(a) => {
                parse_set(&a.set)?;
                if a.n == 0 || a.rows == 0 {
                    return Err(usage("--n and --rows must be >= 1"));
                }
            }
        }
        Ok(())
    }
}

/// Validates and runs `config`, writing human-readable output to `out`.
/// Returns the exit status for a completed run.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| usage(format!("thread pool: {e}")))?;
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(config, &mut buf));
    out.write_all(&buf).map_err(|e| {
        CliError::Io(IoError::Write {
            path: "stdout".into(),
            reason: e.to_string(),
        })
    })?;
    result
}

fn dispatch(config: &RunConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    match &config.command {
        Command::ConstructGadget(a) => {
            let set = parse_set(&a.set)?;
            let w = construct_gadget_witness(&set, a.t, a.s, a.x_bound, a.a_max)?;
            let doc = WitnessDocument {
                format_version: FORMAT_VERSION,
                config: config.clone(),
                witness: Witness::Gadget(w),
            };
            emit(out, a.output.as_deref(), &io::to_json(&doc))?;
            Ok(Exit::Pass)
        }
        Command::ConstructWall(a) => {
            let set = parse_set(&a.set)?;
            let w = construct_wall_witness(&set, a.ell, a.search_bound)?;
            let doc = WitnessDocument {
                format_version: FORMAT_VERSION,
                config: config.clone(),
                witness: Witness::Wall(w),
            };
            emit(out, a.output.as_deref(), &io::to_json(&doc))?;
            Ok(Exit::Pass)
        }
        Command::Verify(a) => {
            let doc: WitnessDocument = io::read_document(&a.input)?;
            let opts = VerifyOptions {
                mode: match a.mode {
                    ModeArg::Exhaustive => VerifyMode::Exhaustive,
                    ModeArg::Certificate => VerifyMode::Certificate,
                },
                cycle_cap: a.cycle_cap,
                subset_cap: a.subset_cap,
                case_cap: a.case_cap,
                path_cap: a.path_cap,
                extra_t: a.also_t.clone(),
            };
            let report = match &doc.witness {
                Witness::Gadget(w) => verify_gadget(w, &opts)?,
                Witness::Wall(w) => verify_wall(w, &opts)?,
            };
            let passed = report.passed();
            let rdoc = ReportDocument {
                format_version: FORMAT_VERSION,
                config: config.clone(),
                report,
            };
            let json = io::to_json(&rdoc);
            if let Some(path) = &a.output {
                io::write_text(path, &json)?;
            }
            match a.format {
                TextOrJson::Text => write_out(out, &rdoc.report.to_text())?,
                TextOrJson::Json => write_out(out, &json)?,
            }
            Ok(if passed { Exit::Pass } else { Exit::VerificationFailed })
        }
        Command::Probe(a) => {
            let set = parse_set(&a.set)?;
            let g = load_graph(&a.input)?;
            let result = probe_erdos_posa(&g, &set, a.k, a.t, a.cycle_cap, a.node_cap)?;
            let doc = ProbeDocument {
                format_version: FORMAT_VERSION,
                config: config.clone(),
                result,
            };
            let json = io::to_json(&doc);
            if let Some(path) = &a.output {
                io::write_text(path, &json)?;
            }
            match a.format {
                TextOrJson::Text => write_out(out, &probe_text(&doc))?,
                TextOrJson::Json => write_out(out, &json)?,
            }
            Ok(Exit::Pass)
        }
        Command::Export(a) => {
            let doc: WitnessDocument = io::read_document(&a.input)?;
            let name = match &doc.witness {
                Witness::Gadget(_) => "gadget",
                Witness::Wall(_) => "wall",
            };
            let cfg = config_line(config);
            let text = match a.format {
                ExportFormat::Dot => format!("// config: {cfg}\n{}", io::to_dot(doc.witness.graph(), name)),
                ExportFormat::Edges => format!("# config: {cfg}\n{}", io::to_edge_list(doc.witness.graph())),
            };
            emit(out, a.output.as_deref(), &text)?;
            Ok(Exit::Pass)
        }
        Command::Density(a) => {
            let set = parse_set(&a.set)?;
            let text = format!("# config: {}\n{}", config_line(config), density_text(&set, a)?);
            write_out(out, &text)?;
            Ok(Exit::Pass)
        }
    }
}

/// `config` as one line of JSON, for comment headers in text outputs.
pub fn config_line(config: &RunConfig) -> String {
    serde_json::to_string(config).expect("configs always serialize")
}

/// Edge list, or the graph inside a witness document.
pub fn load_graph(path: &Path) -> Result<WeightedMultigraph, CliError> {
    let text = io::read_text(path)?;
    let origin = path.display().to_string();
    if text.trim_start().starts_with('{') {
        let doc: WitnessDocument = io::parse_document(&text, &origin)?;
        Ok(doc.witness.graph().clone())
    } else {
        Ok(io::parse_edge_list(&text, &origin)?)
    }
}

fn density_text(set: &IntSet, a: &DensityArgs) -> Result<String, CliError> {
    let mut s = String::new();
    let _ = writeln!(s, "# prefix density of {}", set.spec());
    let _ = writeln!(s, "n\tcount\tratio");
    let step = (a.n / a.rows).max(1);
    let mut n = step;
    loop {
        let n_row = n.min(a.n);
        let d = lower_density_prefix(set, n_row)?;
        let ratio = *d.ratio.numer() as f64 / *d.ratio.denom() as f64;
        let _ = writeln!(s, "{}\t{}\t{ratio:.6}", d.n, d.count);
        if n_row == a.n {
            break;
        }
        n += step;
    }
    if a.gaps > 0 {
        let _ = writeln!(s, "# first gap of each length below {}", a.search_bound);
        let _ = writeln!(s, "length\tstart");
        for len in 1..=a.gaps {
            match gap_witness(set, len, a.search_bound)? {
                Some(y) => {
                    let _ = writeln!(s, "{len}\t{y}");
                }
                None => {
                    let _ = writeln!(s, "{len}\tnone");
                }
            }
        }
    }
    Ok(s)
}

fn probe_text(doc: &ProbeDocument) -> String {
    let r = &doc.result;
    let mut s = String::new();
    let _ = writeln!(s, "L-cycles: {}", r.l_cycles.len());
    let _ = writeln!(
        s,
        "packing (k = {}, load <= {}): {}{}",
        r.k,
        r.t,
        r.packing.size,
        if r.packing.complete { "" } else { " (lower bound; search capped)" }
    );
    for &i in &r.packing.cycles {
        let vs: Vec<String> = r.l_cycles[i].vertices.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(s, "  cycle {} weight {}", vs.join("-"), r.l_cycles[i].weight);
    }
    let vs: Vec<String> = r.hitting.vertices.iter().map(|v| (v + 1).to_string()).collect();
    let _ = writeln!(
        s,
        "minimum hitting set: {} {{{}}}{}",
        r.hitting.vertices.len(),
        vs.join(", "),
        if r.hitting.complete { "" } else { " (upper bound; search capped)" }
    );
    s
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => Ok(io::write_text(p, text)?),
        None => write_out(out, text),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| {
        CliError::Io(IoError::Write {
            path: "stdout".into(),
            reason: e.to_string(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        RunConfig::command().debug_assert();
    }

    #[test]
    fn config_serializes_flat() {
        let cfg = RunConfig::try_parse_from(["lcycle", "density", "--set", "primes", "--n", "100"]).unwrap();
        let v = serde_json::to_value(&cfg).unwrap();
        assert_eq!(v["command"]["density"]["set"], "primes");
        let back: RunConfig = serde_json::from_value(v).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn validation_catches_bad_sets() {
        let cfg = RunConfig::try_parse_from(["lcycle", "construct-wall", "--set", "cubes"]).unwrap();
        let err = run(&cfg, &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit(), Exit::Usage);
    }

    #[test]
    fn density_table() {
        let cfg = RunConfig::try_parse_from([
            "lcycle", "density", "--set", "primes", "--n", "100", "--rows", "2", "--gaps", "3",
        ])
        .unwrap();
        let mut out = Vec::new();
        assert_eq!(run(&cfg, &mut out).unwrap(), Exit::Pass);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("50\t15\t0.300000"), "{text}");
        assert!(text.contains("100\t25\t0.250000"), "{text}");
        // first run of 3 composites: 8, 9, 10
        assert!(text.contains("3\t8"), "{text}");
    }
}
