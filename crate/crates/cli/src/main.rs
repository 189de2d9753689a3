//! `psk`: compute ω(D) and ρ(D) for PD codes, run table censuses, and check
//! certificates.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psk_core::census::{
    ingest, run_census, write_summary, CensusError, CensusOptions, CensusStore, CensusSummary,
};
use psk_core::coloring::omega_within;
use psk_core::{
    invariants_within, parse_pd, verify, Certificate, Diagram, DiagramError, DualGraph,
    InvariantResult, Reject, SearchError, SearchLimits,
};
use serde_json::{json, Map, Value};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;
const EXIT_NO_ROWS: u8 = 5;
const EXIT_REJECTED: u8 = 6;
const EXIT_HASH_MISMATCH: u8 = 7;

#[derive(Parser)]
#[command(
    name = "psk",
    version,
    about = "Wirtinger and plain sphere numbers of link diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute ω(D) and/or ρ(D) for one diagram.
    Compute(ComputeArgs),
    /// Compute both invariants for every row of a knot table.
    Census(CensusArgs),
    /// Replay a certificate against a diagram.
    Verify(VerifyArgs),
    /// Print the dual multigraph as an edge list (`face face edge strand`).
    Dual(DiagramInput),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DiagramInput {
    /// PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".
    #[arg(long)]
    pd: Option<String>,
    /// File containing a PD code.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Invariant {
    Omega,
    Rho,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: DiagramInput,
    #[arg(long, value_enum, default_value = "both")]
    invariant: Invariant,
    /// Write the certificate for the selected invariant (ρ when `both`).
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Also write the ω certificate when computing both.
    #[arg(long)]
    omega_certificate: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Give up after this many milliseconds.
    #[arg(long, env = "PSK_TIMEOUT_MS", value_parser = clap::value_parser!(u64).range(1..))]
    timeout_ms: Option<u64>,
}

#[derive(Args)]
struct CensusArgs {
    /// CSV with columns name, pd_notation and optionally bridge_number.
    #[arg(long)]
    input: PathBuf,
    /// Records CSV. Appended to; rows already present are skipped.
    #[arg(long)]
    output: PathBuf,
    /// Summary JSON (default: next to the records file).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long, env = "PSK_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Per-diagram time budget in milliseconds.
    #[arg(long, env = "PSK_TIMEOUT_MS", value_parser = clap::value_parser!(u64).range(1..))]
    timeout_ms: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: DiagramInput,
    #[arg(long)]
    certificate: PathBuf,
}

/// A failed command: exit status plus a one-line diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let code = if e.is_unsupported() {
            EXIT_UNSUPPORTED
        } else {
            EXIT_PARSE
        };
        Failure::new(code, e)
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        Failure::new(EXIT_TIMEOUT, e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => compute(args),
        Command::Census(args) => census(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Dual(input) => dual(input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("psk: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(input: &DiagramInput) -> Result<(Diagram, DualGraph), Failure> {
    let text = match (&input.pd, &input.file) {
        (Some(pd), _) => pd.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let d = parse_pd(&text)?;
    let g = DualGraph::new(&d)?;
    Ok((d, g))
}

fn limits(timeout_ms: Option<u64>) -> SearchLimits {
    timeout_ms.map_or_else(SearchLimits::unbounded, |ms| {
        SearchLimits::timeout(Duration::from_millis(ms))
    })
}

fn write_certificate(path: &Path, cert: &Certificate) -> Result<(), Failure> {
    std::fs::write(path, cert.serialize())
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn compute(args: ComputeArgs) -> Result<(), Failure> {
    let (d, g) = load(&args.input)?;
    let limits = limits(args.timeout_ms);

    let (omega, rho): (Option<InvariantResult>, Option<InvariantResult>) = match args.invariant {
        Invariant::Omega => (Some(omega_within(&d, &g, &limits)?), None),
        Invariant::Rho => (None, Some(invariants_within(&d, &g, &limits)?.rho)),
        Invariant::Both => {
            let inv = invariants_within(&d, &g, &limits)?;
            (Some(inv.omega), Some(inv.rho))
        }
    };

    if let Some(path) = &args.certificate {
        let selected = rho
            .as_ref()
            .or(omega.as_ref())
            .expect("one invariant computed");
        write_certificate(path, &selected.certificate)?;
    }
    if let Some(path) = &args.omega_certificate {
        match &omega {
            Some(w) => write_certificate(path, &w.certificate)?,
            None => {
                return Err(Failure::new(
                    EXIT_FAILURE,
                    "--omega-certificate needs omega",
                ))
            }
        }
    }

    let mut fields: Vec<(&str, Value)> = vec![
        ("n", json!(d.crossing_count())),
        ("strands", json!(d.strand_count())),
    ];
    if let Some(w) = &omega {
        fields.push(("omega", json!(w.value)));
        fields.push(("omega_seeds", json!(w.seeds)));
    }
    if let Some(r) = &rho {
        fields.push(("rho", json!(r.value)));
        fields.push(("rho_seeds", json!(r.seeds)));
    }

    let plain = |v: &Value| match v {
        Value::Array(items) => items
            .iter()
            .map(Value::to_string)
            .collect::<Vec<_>>()
            .join(","),
        other => other.to_string(),
    };
    match args.format {
        Format::Json => {
            let obj: Map<String, Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            println!("{}", Value::Object(obj));
        }
        Format::Plain => {
            let line: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("{k}={}", plain(v)))
                .collect();
            println!("{}", line.join(" "));
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            println!("{}", header.join(","));
            let row: Vec<String> = fields
                .iter()
                .map(|(_, v)| match v {
                    Value::Array(_) => format!("\"{}\"", plain(v)),
                    _ => plain(v),
                })
                .collect();
            println!("{}", row.join(","));
        }
    }
    Ok(())
}

fn census_failure(e: CensusError) -> Failure {
    match e {
        CensusError::FileUnreadable { .. }
        | CensusError::MissingColumns { .. }
        | CensusError::Csv { .. } => Failure::new(EXIT_PARSE, e),
        CensusError::Write { .. } => Failure::new(EXIT_FAILURE, e),
    }
}

fn census(args: CensusArgs) -> Result<(), Failure> {
    let ingested = ingest(&args.input).map_err(census_failure)?;
    for s in &ingested.skipped {
        eprintln!("psk: skipped line {} ({}): {}", s.line, s.name, s.reason);
    }

    let mut store = CensusStore::open(&args.output).map_err(census_failure)?;
    let pending = store.pending(&ingested.rows);
    let resumed = ingested.rows.len() - pending.len();
    let opts = CensusOptions {
        max_crossings: args.max_crossings,
        jobs: args.jobs as usize,
        timeout_per_diagram: args.timeout_ms.map(Duration::from_millis),
    };
    let out = run_census(&pending, &opts);
    store.append(&out.records).map_err(census_failure)?;
    for name in &out.timed_out {
        eprintln!("psk: {name}: timed out");
    }
    for (name, why) in &out.failed {
        eprintln!("psk: {name}: {why}");
    }

    let summary = CensusSummary::from_records(store.records(), out.timed_out.len());
    let summary_path = args
        .summary
        .unwrap_or_else(|| args.output.with_extension("summary.json"));
    write_summary(&summary_path, &summary).map_err(census_failure)?;

    println!(
        "rows={} computed={} resumed={} filtered={} failed={} skipped={} timeouts={} gaps={} violations={}",
        ingested.rows.len(),
        out.records.len(),
        resumed,
        out.filtered,
        out.failed.len(),
        ingested.skipped.len(),
        out.timed_out.len(),
        summary.gap_count,
        summary.violation_count,
    );

    let processable = resumed + out.records.len() + out.timed_out.len();
    if processable == 0 {
        return Err(Failure::new(EXIT_NO_ROWS, "no processable rows"));
    }
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> Result<(), Failure> {
    let (d, g) = load(&args.input).map_err(|f| Failure::new(EXIT_PARSE, f.message))?;
    let text = std::fs::read_to_string(&args.certificate)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", args.certificate.display())))?;
    let cert = Certificate::deserialize(&text).map_err(|e| Failure::new(EXIT_PARSE, e))?;
    match verify(&d, &g, &cert) {
        Ok(bound) => {
            println!(
                "accepted: {} <= {bound}",
                match cert.mode {
                    psk_core::Mode::Wirtinger => "omega",
                    psk_core::Mode::PlainSphere => "rho",
                }
            );
            Ok(())
        }
        Err(r) => {
            println!("rejected: {}: {r}", r.code());
            let code = match r {
                Reject::HashMismatch { .. } => EXIT_HASH_MISMATCH,
                _ => EXIT_REJECTED,
            };
            Err(Failure::new(
                code,
                format!("certificate rejected ({})", r.code()),
            ))
        }
    }
}

fn dual(input: DiagramInput) -> Result<(), Failure> {
    let (_, g) = load(&input)?;
    print!("{}", g.to_edge_list());
    Ok(())
}
