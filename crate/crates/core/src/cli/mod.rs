//! Command-line driver: argument parsing, worker pool, JSON reports with an
//! embedded run manifest, and digest checking.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::pixton::{
    pixton_fixed_r, pixton_monomial_coeff, pixton_r_polynomial, AVector, PixtonError,
};
use crate::stablegraphs::GraphError;
use crate::trr::{
    assemble_full_trr, d_value, g7_patch, principal_part, scan_zeros_filtered, verify_lemmas, MonomialSpec,
    ScaleGuard, ScanReport, TrrError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "trr", version, about = "Topological recursion relations from Pixton's relations")]
pub struct Cli {
    /// worker threads
    #[arg(long, global = true, env = "TRR_JOBS")]
    jobs: Option<usize>,
    /// write the JSON report here (atomically)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// print a human-readable rendering instead of JSON
    #[arg(long, global = true)]
    pretty: bool,
    /// lift the brute-force genus limit
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scan for vanishing D coefficients
    Scan(ScanArgs),
    /// Evaluate the D coefficient
    D(TargetArgs),
    /// Principal part of the TRR for psi_1^k prod psi_j^{l_j}
    Principal(TargetArgs),
    /// Full TRR (principal and boundary) through the brute-force pipeline
    Assemble(TargetArgs),
    /// Pixton's class at fixed r, its constant term, or a monomial coefficient
    Pixton(PixtonArgs),
    /// Compare brute-force Omega with the closed-form graph contributions
    #[command(alias = "verify-lemmas")]
    Omega(OmegaArgs),
    /// The genus-7 exceptional case
    G7,
    /// Re-verify the digest embedded in a report file
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    g_min: u32,
    #[arg(long)]
    g_max: u32,
    /// restrict to one number of points
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct TargetArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    k: u32,
    /// comma-separated exponents l_2, ..., l_n
    #[arg(long, value_delimiter = ',')]
    l: Vec<u32>,
}

#[derive(Args, Debug)]
struct PixtonArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: usize,
    /// comma-separated a_1, ..., a_n summing to zero
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "b_exponents")]
    a: Option<Vec<i64>>,
    /// comma-separated exponents b_2, ..., b_n of the a-monomial
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    b_exponents: Option<Vec<u32>>,
    #[arg(long)]
    degree: u32,
    /// fixed modulus; omit to take the constant term in r
    #[arg(long, requires = "a")]
    r: Option<u64>,
}

#[derive(Args, Debug)]
struct OmegaArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: usize,
    /// comma-separated exponents b_2, ..., b_n
    #[arg(long, value_delimiter = ',')]
    b: Vec<u32>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    file: PathBuf,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

fn pixton_code(e: &PixtonError) -> i32 {
    match e {
        PixtonError::FitUnstable { .. } | PixtonError::GridUnstable => EXIT_GUARD,
        _ => EXIT_USAGE,
    }
}

impl From<TrrError> for Failure {
    fn from(e: TrrError) -> Self {
        let code = match &e {
            TrrError::ScaleGuard { .. } => EXIT_GUARD,
            TrrError::Mismatch(_) | TrrError::KappaGenerated => EXIT_MISMATCH,
            TrrError::Pixton(p) => pixton_code(p),
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<PixtonError> for Failure {
    fn from(e: PixtonError) -> Self {
        Failure { code: pixton_code(&e), message: e.to_string() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Result of a command before it is wrapped with the manifest.
struct Outcome {
    command: &'static str,
    parameters: Value,
    conventions: Value,
    result: Value,
    /// plain text for stdout when neither --pretty nor --out is given
    plain: Option<String>,
    /// exit code when the report itself records a failed verification
    code: i32,
}

impl Outcome {
    fn new(command: &'static str, parameters: Value, result: Value) -> Self {
        Outcome { command, parameters, conventions: json!({}), result, plain: None, code: EXIT_OK }
    }
}

/// SHA-256 of the compact serialization of `result`.
pub fn digest(result: &Value) -> String {
    hex::encode(Sha256::digest(result.to_string().as_bytes()))
}

/// Writes through a temporary file in the same directory and renames it.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Failure::usage("output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| Failure::usage(format!("cannot write {}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn guard(cli: &Cli) -> ScaleGuard {
    if cli.allow_large {
        ScaleGuard::unlimited()
    } else {
        ScaleGuard::default()
    }
}

fn sorted(l: &[u32]) -> Vec<u32> {
    let mut s = l.to_vec();
    s.sort_unstable();
    s
}

fn target_params(t: &TargetArgs) -> Value {
    json!({"g": t.g, "k": t.k, "l_input": t.l, "l_sorted": sorted(&t.l)})
}

fn cmd_scan(a: &ScanArgs) -> Result<Outcome, Failure> {
    if a.g_min == 0 || a.g_max < a.g_min {
        return Err(Failure::usage("need 1 <= g-min <= g-max"));
    }
    let report = scan_zeros_filtered(a.g_min, a.g_max, a.n);
    let mut o = Outcome::new("scan", json!({"g_min": a.g_min, "g_max": a.g_max, "n": a.n}), report.to_json_value());
    o.conventions = ScanReport::conventions();
    Ok(o)
}

fn cmd_d(t: &TargetArgs) -> Result<Outcome, Failure> {
    let l = sorted(&t.l);
    let d = d_value(t.g, t.k, &l)?;
    let mut o = Outcome::new("d", target_params(t), json!(d.to_string()));
    o.plain = Some(d.to_string());
    Ok(o)
}

fn cmd_principal(t: &TargetArgs) -> Result<Outcome, Failure> {
    let record = principal_part(t.g, t.k, &sorted(&t.l))?;
    Ok(Outcome::new("principal", target_params(t), record.to_json_value()))
}

fn cmd_assemble(t: &TargetArgs, guard: &ScaleGuard) -> Result<Outcome, Failure> {
    let record = assemble_full_trr(t.g, t.k, &sorted(&t.l), guard)?;
    Ok(Outcome::new("assemble", target_params(t), record.to_json_value()))
}

fn cmd_pixton(p: &PixtonArgs, guard: &ScaleGuard) -> Result<Outcome, Failure> {
    guard.check(p.g)?;
    let mut params = json!({"g": p.g, "n": p.n, "degree": p.degree});
    let result = match (&p.a, &p.b_exponents) {
        (Some(a), None) => {
            let a = AVector::new(a.clone())?;
            params["a"] = json!(a.values());
            match p.r {
                Some(r) => {
                    params["r"] = json!(r);
                    pixton_fixed_r(p.g, p.n, &a, r, p.degree)?.to_json_value()
                }
                None => {
                    let class = pixton_r_polynomial(p.g, p.n, &a, p.degree)?;
                    params["r_nodes"] = json!(class.nodes);
                    class.constant_term().to_json_value()
                }
            }
        }
        (None, Some(b)) => {
            params["b_exponents"] = json!(b);
            pixton_monomial_coeff(p.g, p.n, b, p.degree)?.to_json_value()
        }
        _ => return Err(Failure::usage("give exactly one of --a and --b-exponents")),
    };
    Ok(Outcome::new("pixton", params, result))
}

fn cmd_omega(a: &OmegaArgs, guard: &ScaleGuard) -> Result<Outcome, Failure> {
    let spec = MonomialSpec::new(a.g, a.n, a.b.clone())?;
    let report = verify_lemmas(&spec, guard)?;
    let mut o = Outcome::new("omega", json!({"g": a.g, "n": a.n, "b": a.b}), report.to_json_value());
    if !report.all_pass() {
        o.code = EXIT_MISMATCH;
    }
    Ok(o)
}

fn cmd_g7() -> Result<Outcome, Failure> {
    let report = g7_patch()?;
    let mut o = Outcome::new("g7", json!({}), report.to_json_value());
    if !report.all_pass() {
        o.code = EXIT_MISMATCH;
    }
    Ok(o)
}

/// Recomputes the digest of a report file's result and compares it with the
/// one recorded in its manifest.
pub fn check_file(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("not JSON: {e}")))?;
    let recorded = doc["manifest"]["result_digest"]
        .as_str()
        .ok_or_else(|| Failure::usage("no manifest.result_digest"))?
        .to_string();
    let computed = digest(&doc["result"]);
    let ok = recorded == computed;
    let report = json!({"file": path.display().to_string(), "recorded": recorded, "computed": computed, "match": ok});
    if ok {
        Ok(report)
    } else {
        Err(Failure { code: EXIT_MISMATCH, message: report.to_string() })
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let guard = guard(cli);
    match &cli.command {
        Command::Scan(a) => cmd_scan(a),
        Command::D(t) => cmd_d(t),
        Command::Principal(t) => cmd_principal(t),
        Command::Assemble(t) => cmd_assemble(t, &guard),
        Command::Pixton(p) => cmd_pixton(p, &guard),
        Command::Omega(a) => cmd_omega(a, &guard),
        Command::G7 => cmd_g7(),
        Command::Check(_) => unreachable!("handled before dispatch"),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    if let Command::Check(c) = &cli.command {
        return match check_file(&c.file) {
            Ok(v) => {
                println!("{v}");
                EXIT_OK
            }
            Err(f) => {
                eprintln!("error: {}", f.message);
                f.code
            }
        };
    }
    let workers = cli.jobs.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let outcome = match pool.install(|| dispatch(&cli)) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    let manifest = json!({
        "command": outcome.command,
        "parameters": outcome.parameters,
        "conventions": outcome.conventions,
        "workers": workers,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_ms": start.elapsed().as_millis() as u64,
        "result_digest": digest(&outcome.result),
    });
    let doc = json!({"manifest": manifest, "result": outcome.result});
    let text = serde_json::to_string_pretty(&doc).expect("JSON serializes") + "\n";
    if let Some(path) = &cli.out {
        if let Err(f) = write_atomic(path, &text) {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    }
    if cli.pretty {
        print!("{}", render::render(outcome.command, &doc["result"]));
    } else if cli.out.is_none() {
        match &outcome.plain {
            Some(p) => println!("{p}"),
            None => print!("{text}"),
        }
    }
    outcome.code
}

/// Parses `args` and runs; usage errors map to exit code 1.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
