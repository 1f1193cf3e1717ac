//! The `cubeiso` command line.
//!
//! Exit status: 0 when every check passed, 1 when a check found a violation
//! (or a certificate was rejected), 2 on usage, parse or capability errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::antipodal::{extremal_family, extremal_profile, theorem_rhs};
use crate::binary_order::{initial_segment, FTable};
use crate::certificate::{trace_induction, verify_certificate, Certificate};
use crate::cube::{set_dimension_cap, Family};
use crate::error::Error;
use crate::sampling::DEFAULT_SEED;
use crate::verify::{self, Mode, Statement, VerificationReport, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "cubeiso", version, about = "Edge-isoperimetry checks for antipodal families in the discrete cube")]
struct Cli {
    /// Largest dimension accepted anywhere (at most 31).
    #[arg(long, global = true, env = "CUBEISO_MAX_DIM")]
    max_dim: Option<u32>,
    /// Worker threads for verification; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a theorem, lemma or identity family and write a report.
    Verify(VerifyArgs),
    /// Smallest edge boundary per size next to the predicted value.
    Profile {
        #[arg(long)]
        n: u32,
        /// Compare against all families instead of antipodal ones.
        #[arg(long)]
        unrestricted: bool,
    },
    /// Boundary of the extremal antipodal family for every even size.
    Extremal {
        #[arg(long)]
        n: u32,
        /// Print the extremal family of this size instead.
        #[arg(long, value_name = "M")]
        export: Option<u64>,
    },
    /// Trace the induction on a family and check the certificate.
    Trace(TraceArgs),
    /// CSV of F(k) for k = 0..=max-k.
    Ftable {
        #[arg(long, default_value_t = 1024)]
        max_k: u64,
    },
    /// Encode or decode the family text form.
    Serialize(SerializeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// thm1, thm2, lemma3, lemma4, lemma5, lemma6, identities or all.
    #[arg(long)]
    statement: String,
    /// Dimension; for lemma4 the largest dimension swept (default 12).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Samples in sampled mode; instance cap in exhaustive mode.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// lemma3 checks all 0 <= x, y <= range.
    #[arg(long, default_value_t = 4096)]
    range: u64,
    /// Allow exhaustive runs one dimension past the default limit.
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    /// File holding one family in text form.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Check this certificate file instead of tracing.
    #[arg(long, value_name = "CERT")]
    check_only: Option<PathBuf>,
    /// Where to write the certificate; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SerializeArgs {
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated vertex codes.
    #[arg(long)]
    codes: Option<String>,
    /// The initial segment of this size.
    #[arg(long, value_name = "K")]
    segment: Option<u64>,
    /// The extremal antipodal family of this size.
    #[arg(long, value_name = "M")]
    extremal: Option<u64>,
    /// Print the codes of a serialized family.
    #[arg(long, value_name = "TEXT")]
    decode: Option<String>,
}

/// A failure with its exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if matches!(e, Error::Invariant(_)) { 1 } else { 2 };
        Failure(status, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

type Outcome = Result<u8, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return status;
        }
    };
    match dispatch(cli, out, err) {
        Ok(status) => status,
        Err(Failure(status, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            status
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if let Some(cap) = cli.max_dim {
        set_dimension_cap(cap)?;
    }
    match cli.command {
        Command::Verify(args) => cmd_verify(args, cli.threads, out),
        Command::Profile { n, unrestricted } => emit(out, None, &cmd_profile(n, unrestricted)?),
        Command::Extremal { n, export: Some(m) } => emit(out, None, &format!("{}\n", extremal_family(n, m)?)),
        Command::Extremal { n, export: None } => {
            let mut csv = String::from("m,boundary_rhs\n");
            for (m, rhs) in extremal_profile(n)? {
                csv.push_str(&format!("{m},{rhs}\n"));
            }
            emit(out, None, &csv)
        }
        Command::Trace(args) => cmd_trace(args, out, err),
        Command::Ftable { max_k } => {
            if max_k > 1 << 31 {
                return Err(usage(format!("--max-k is limited to 2^31, got {max_k}")));
            }
            emit(out, None, &FTable::new(max_k)?.to_csv(max_k))
        }
        Command::Serialize(args) => emit(out, None, &cmd_serialize(args)?),
    }
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("writing {}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes()).map_err(|e| usage(format!("writing output: {e}")))?,
    }
    Ok(0)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

fn cmd_verify(args: VerifyArgs, threads: Option<usize>, out: &mut dyn Write) -> Outcome {
    let statements = match args.statement.as_str() {
        "all" => Statement::ALL.to_vec(),
        id => vec![id.parse::<Statement>()?],
    };
    let cfg = VerifyConfig {
        mode: match args.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sampled => Mode::Sampled,
        },
        budget: args.budget,
        seed: args.seed,
        threads,
        force: args.force,
    };
    let need_n = || args.n.ok_or_else(|| usage(format!("--n is required for {}", args.statement)));
    let lemma4_max = args.n.unwrap_or(12);
    let mut table_size = 2 * args.range;
    if statements.contains(&Statement::HartLarge) {
        table_size = table_size.max(1 << lemma4_max.min(31));
    }
    if let Some(n) = args.n {
        table_size = table_size.max(1 << n.min(31));
    }
    if table_size > 1 << 31 {
        return Err(usage("requested F table is too large"));
    }
    let table = FTable::new(table_size)?;

    let mut reports = Vec::new();
    for statement in statements {
        let report = match statement {
            Statement::Theorem1 => verify::check_theorem1(need_n()?, &cfg)?,
            Statement::Theorem2 => verify::check_theorem2(need_n()?, &cfg, &table)?,
            Statement::Hart => verify::check_hart(args.range, &cfg, &table)?,
            Statement::HartLarge => verify::check_hart_large(lemma4_max, &cfg, &table)?,
            Statement::Balance => verify::check_balance(need_n()?, &cfg)?,
            Statement::Cross => verify::check_cross(need_n()?, &cfg)?,
            Statement::Identities => verify::check_identities(need_n()?, &cfg, &table)?,
        };
        reports.push(report);
    }
    let text = match args.format {
        Format::Csv => VerificationReport::to_csv(&reports),
        Format::Text => reports.iter().map(ToString::to_string).collect(),
    };
    emit(out, args.out.as_deref(), &text)?;
    Ok(if reports.iter().all(VerificationReport::passed) { 0 } else { 1 })
}

/// Antipodal: `m,theorem_rhs,oracle_min,tight` for even `m`. Unrestricted:
/// `m,segment_boundary,oracle_min,tight` for every `m`, comparing the
/// initial segment with the true minimum. The oracle columns are blank when
/// exhaustive search is out of reach.
fn cmd_profile(n: u32, unrestricted: bool) -> Result<String, Failure> {
    let antipodal = !unrestricted;
    let oracle = match verify::min_boundary_by_size(n, antipodal) {
        Ok(mins) => Some(mins),
        Err(Error::Capability(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut csv = String::from(if antipodal {
        "m,theorem_rhs,oracle_min,tight\n"
    } else {
        "m,segment_boundary,oracle_min,tight\n"
    });
    let step = if antipodal { 2 } else { 1 };
    let top = if antipodal && n == 0 { 0 } else { 1u64 << n };
    for m in (0..=top).step_by(step) {
        let predicted = if antipodal { theorem_rhs(n, m)? } else { initial_segment(n, m)?.edge_boundary() };
        match oracle.as_ref().and_then(|mins| mins[m as usize]) {
            Some(min) => csv.push_str(&format!("{m},{predicted},{min},{}\n", min == predicted)),
            None => csv.push_str(&format!("{m},{predicted},,\n")),
        }
    }
    Ok(csv)
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    Ok(read(path)?.trim_end_matches('\n').parse::<Family>()?)
}

fn cmd_trace(args: TraceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (cert, family) = match (&args.check_only, &args.family) {
        (Some(cert_path), family) => {
            let cert: Certificate = read(cert_path)?.parse()?;
            let family = match family {
                Some(p) => read_family(p)?,
                None => cert.subject.clone(),
            };
            (cert, family)
        }
        (None, Some(p)) => {
            let family = read_family(p)?;
            let cert = trace_induction(&family)?;
            emit(out, args.out.as_deref(), &cert.to_string())?;
            (cert, family)
        }
        (None, None) => return Err(usage("trace needs --family or --check-only")),
    };
    let status = match verify_certificate(&cert, &family) {
        Ok(()) => {
            let root = cert.root();
            let _ = writeln!(err, "certificate verified: f={} bound={} nodes={}", root.f, root.bound, cert.nodes.len());
            0
        }
        Err(mismatch) => {
            let _ = writeln!(err, "certificate rejected: {mismatch}");
            1
        }
    };
    Ok(status)
}

fn cmd_serialize(args: SerializeArgs) -> Result<String, Failure> {
    let sources = [args.codes.is_some(), args.segment.is_some(), args.extremal.is_some(), args.decode.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(usage("give exactly one of --codes, --segment, --extremal, --decode"));
    }
    if let Some(text) = args.decode {
        let family: Family = text.trim_end_matches('\n').parse()?;
        let codes: Vec<String> = family.iter().map(|v| v.to_string()).collect();
        return Ok(format!("{}\n", codes.join(",")));
    }
    let n = args.n.ok_or_else(|| usage("--n is required unless decoding"))?;
    let family = if let Some(codes) = args.codes {
        let codes = codes
            .split(',')
            .filter(|c| !c.is_empty())
            .map(|c| c.trim().parse::<u32>().map_err(|_| usage(format!("bad vertex code {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Family::from_codes(n, codes)?
    } else if let Some(k) = args.segment {
        initial_segment(n, k)?
    } else if let Some(m) = args.extremal {
        extremal_family(n, m)?
    } else {
        unreachable!("exactly one source checked above")
    };
    Ok(format!("{family}\n"))
}
