//! `fenc` command line: build, classify, verify and noise-fit.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::encodings::{build_dk, build_jw, build_vc, Encoding, EncodingDump, QubitRole};
use crate::error::Error;
use crate::error_analysis::{
    enumerate_errors, random_xy_correction, to_json, write_csv, write_summary_csv, Category, ErrorReport,
};
use crate::lattice::{Boundary, Corner, Lattice, LatticeSpec};
use crate::noise_channel::{
    channel_checks, cutoff_convergence, fit_dephasing, log_grid, parse_beta, ChannelSpec, Interaction,
    DEFAULT_CUTOFF,
};
use crate::pauli::Letter;
use crate::verify::{all_passed, run_checks, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fenc", version, about = "Local fermion-to-qubit encodings and their error structure")]
pub struct Cli {
    /// JSON file with a "command" key and flag values; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct an encoding and write its JSON dump.
    Build(BuildArgs),
    /// Enumerate and classify low-weight Pauli errors.
    Classify(ClassifyArgs),
    /// Run the invariant checks, on a fresh construction or a dump file.
    Verify(VerifyArgs),
    /// Fit the fermion-boson channel to the dephasing form.
    NoiseFit(NoiseArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EncArg {
    Jw,
    Vc,
    Dk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CornerArg {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct EncodingArgs {
    #[arg(long, value_enum)]
    pub enc: Option<EncArg>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Mode count for JW without a lattice.
    #[arg(long)]
    pub modes: Option<usize>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = 0)]
    pub parity_offset: u8,
    /// Corner to shave (DK); repeatable.
    #[arg(long, value_enum)]
    pub shave: Vec<CornerArg>,
    /// VC: exchange the primary and auxiliary qubit of the first site.
    #[arg(long)]
    pub swap_first_pair: bool,
    /// DK: append the global parity stabilizer.
    #[arg(long)]
    pub parity_stabilizer: bool,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,
    #[arg(long, default_value_t = 1)]
    pub weight: usize,
    /// Permit weights above 2.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Seed for the X/Y correction coin; adds a correction section.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,
    /// Check this dump instead of a fresh construction.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Fail instead of skipping when the oracle cap is exceeded.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub no_oracle: bool,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, default_value_t = 1)]
    pub modes: usize,
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: usize,
    /// Inverse temperature, or `inf` for the vacuum bath.
    #[arg(long, default_value = "1", value_parser = parse_beta)]
    pub beta: f64,
    /// Explicit coupling grid; overrides the log grid.
    #[arg(long, value_delimiter = ',')]
    pub gammas: Vec<f64>,
    #[arg(long, default_value_t = 0.005)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 6)]
    pub points: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Splices flags from a `--config` file in after the subcommand, so that
/// flags given on the command line come later and take precedence.
pub fn expand_config(args: Vec<String>) -> CliResult<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| usage("--config needs a path"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("bad config {path}: {e}")))?;
    let Value::Object(mut map) = value else { return Err(usage("config must be a JSON object")) };

    const COMMANDS: [&str; 4] = ["build", "classify", "verify", "noise-fit"];
    let sub_pos = rest.iter().position(|a| COMMANDS.contains(&a.as_str()));
    let command = map.remove("command");
    let insert_at = match (sub_pos, command) {
        (Some(p), _) => p + 1,
        (None, Some(Value::String(c))) => {
            rest.insert(1.min(rest.len()), c);
            2.min(rest.len())
        }
        (None, _) => return Err(usage("no subcommand given on the command line or in the config")),
    };
    let mut flags = Vec::new();
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        // The command line wins over the config.
        let eq = format!("{flag}=");
        if rest.iter().any(|a| *a == flag || a.starts_with(&eq)) {
            continue;
        }
        let scalar = |v: &Value| -> CliResult<String> {
            match v {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(usage(format!("unsupported value for {key}"))),
            }
        };
        match &v {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                for item in items {
                    flags.push(flag.clone());
                    flags.push(scalar(item)?);
                }
            }
            other => {
                flags.push(flag);
                flags.push(scalar(other)?);
            }
        }
    }
    rest.splice(insert_at..insert_at, flags);
    Ok(rest)
}

fn corner(c: CornerArg) -> Corner {
    match c {
        CornerArg::TopLeft => Corner::TopLeft,
        CornerArg::TopRight => Corner::TopRight,
        CornerArg::BottomLeft => Corner::BottomLeft,
        CornerArg::BottomRight => Corner::BottomRight,
    }
}

/// Checks that the flags fit together and constructs the encoding.
pub fn build_encoding(a: &EncodingArgs) -> CliResult<Encoding> {
    let enc = a.enc.ok_or_else(|| usage("--enc is required"))?;
    let periodic = a.boundary == BoundaryArg::Periodic;
    if periodic && enc != EncArg::Dk {
        return Err(usage("periodic boundaries are only supported for DK"));
    }
    if !a.shave.is_empty() && enc != EncArg::Dk {
        return Err(usage("--shave applies to DK only"));
    }
    if a.parity_stabilizer && enc != EncArg::Dk {
        return Err(usage("--parity-stabilizer applies to DK only"));
    }
    if a.swap_first_pair && enc != EncArg::Vc {
        return Err(usage("--swap-first-pair applies to VC only"));
    }
    if enc == EncArg::Jw {
        let m = match (a.modes, a.rows, a.cols) {
            (Some(m), _, _) => m,
            (None, Some(r), Some(c)) => r * c,
            _ => return Err(usage("JW needs --modes or --rows and --cols")),
        };
        if m == 0 {
            return Err(usage("JW needs at least one mode"));
        }
        return Ok(build_jw(m));
    }
    let (Some(rows), Some(cols)) = (a.rows, a.cols) else {
        return Err(usage("--rows and --cols are required"));
    };
    let mut lattice = Lattice::new(LatticeSpec {
        rows,
        cols,
        boundary: if periodic { Boundary::Periodic } else { Boundary::Open },
        face_parity_offset: a.parity_offset,
        shaved_corners: vec![],
    })?;
    for &c in &a.shave {
        lattice = lattice.shave_corner(corner(c))?;
    }
    Ok(match enc {
        EncArg::Vc => build_vc(&lattice, a.swap_first_pair)?,
        _ => build_dk(&lattice, a.parity_stabilizer)?,
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| usage(e.to_string())),
    }
}

fn run_build(a: &BuildArgs) -> CliResult<()> {
    let enc = build_encoding(&a.encoding)?;
    let text = serde_json::to_string_pretty(&enc.to_dump()).map_err(|e| usage(e.to_string()))? + "\n";
    emit(a.out.as_deref(), text.as_bytes())?;
    eprintln!(
        "{} qubits, {} stabilizer generators, {} logical generators",
        enc.n_qubits(),
        enc.stabilizer_generators().len(),
        enc.logical_generators().len()
    );
    Ok(())
}

/// Detected single X/Y errors on mode-carrying qubits, each followed by the
/// X or Y fix chosen by a seeded coin.
fn corrections(enc: &Encoding, reports: &[ErrorReport], seed: u64) -> CliResult<Vec<(ErrorReport, u8, ErrorReport)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for r in reports {
        let s = r.error.support();
        let eligible = r.category == Category::Detectable
            && s.len() == 1
            && matches!(r.error.letter(s[0]), Letter::X | Letter::Y)
            && matches!(
                enc.qubit_layout()[s[0]],
                QubitRole::Primary { .. } | QubitRole::Vertex { .. } | QubitRole::Mode { .. }
            );
        if !eligible {
            continue;
        }
        let coin: u8 = rng.gen_range(0..2);
        out.push((r.clone(), coin, random_xy_correction(enc, r, coin)?));
    }
    Ok(out)
}

fn run_classify(a: &ClassifyArgs) -> CliResult<()> {
    if a.weight == 0 {
        return Err(usage("--weight must be at least 1"));
    }
    if a.weight > 2 && !a.allow_large {
        return Err(usage("weights above 2 need --allow-large"));
    }
    let enc = build_encoding(&a.encoding)?;
    let e = enumerate_errors(&enc, a.weight)?;
    let fixes = match a.seed {
        Some(s) => Some(corrections(&enc, &e.reports, s)?),
        None => None,
    };
    let bytes = match a.format {
        Format::Json => {
            let mut doc: Value = serde_json::from_str(&to_json(&enc, &e)?).map_err(|e| usage(e.to_string()))?;
            if let (Some(fixes), Value::Object(map)) = (&fixes, &mut doc) {
                let rows: Vec<Value> = fixes
                    .iter()
                    .map(|(d, coin, r)| {
                        json!({
                            "error": d.error.to_string(),
                            "fix": if *coin == 0 { "X" } else { "Y" },
                            "residual": r.error.to_string(),
                            "category": r.category,
                            "fermionic_image": r.fermionic_image.as_ref().map(|m| m.to_string()),
                        })
                    })
                    .collect();
                map.insert("corrections".into(), Value::Array(rows));
            }
            serde_json::to_string_pretty(&doc).map_err(|e| usage(e.to_string()))? + "\n"
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&e.reports, &mut buf)?;
            buf.extend_from_slice(b"\n# summary\n");
            write_summary_csv(&e.summary, &mut buf)?;
            if let Some(fixes) = &fixes {
                buf.extend_from_slice(b"\n# corrections\n");
                let residuals: Vec<ErrorReport> = fixes.iter().map(|(_, _, r)| r.clone()).collect();
                write_csv(&residuals, &mut buf)?;
            }
            String::from_utf8(buf).map_err(|e| usage(e.to_string()))?
        }
    };
    emit(a.out.as_deref(), bytes.as_bytes())?;
    eprintln!("{} errors classified on {} qubits", e.reports.len(), enc.n_qubits());
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> CliResult<()> {
    let (enc, reference) = match &a.dump {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            let dump: EncodingDump = serde_json::from_str(&text).map_err(|e| usage(format!("bad dump: {e}")))?;
            (Encoding::from_dump(&dump)?, Some(Encoding::rebuild(&dump)?))
        }
        None => (build_encoding(&a.encoding)?, None),
    };
    let opts = VerifyOptions { strict: a.strict, oracle: !a.no_oracle, seed: a.seed };
    let results = run_checks(&enc, reference.as_ref(), opts)?;
    let text = match a.format {
        ReportFormat::Text => results.iter().map(|r| format!("{r}\n")).collect::<String>(),
        ReportFormat::Json => serde_json::to_string_pretty(&results).map_err(|e| usage(e.to_string()))? + "\n",
    };
    emit(a.out.as_deref(), text.as_bytes())?;
    if all_passed(&results) {
        Ok(())
    } else {
        let failed: Vec<&str> = results.iter().filter(|r| r.outcome == crate::verify::Outcome::Fail).map(|r| r.name).collect();
        Err(CliError::Verification(format!("failed: {}", failed.join(", "))))
    }
}

fn run_noise(a: &NoiseArgs) -> CliResult<()> {
    let gammas = if a.gammas.is_empty() { log_grid(a.gamma_min, a.gamma_max, a.points) } else { a.gammas.clone() };
    let spec = ChannelSpec::new(a.modes, a.cutoff, a.beta, 0.0)?;
    let fit = fit_dephasing(&spec, &gammas)?;
    let g_max = gammas.iter().cloned().fold(0.0, f64::max);
    let checks = channel_checks(&Interaction::new(&spec)?, g_max);
    let convergence = cutoff_convergence(&spec, a.cutoff, a.cutoff + 1, g_max).ok();
    let doc = json!({
        "M": a.modes,
        "beta": if a.beta.is_infinite() { json!("inf") } else { json!(a.beta) },
        "boson_cutoff": a.cutoff,
        "gammas": fit.gammas,
        "gamma_fit": fit.gamma_fit,
        "gamma_correlator": fit.gamma_correlator,
        "slope": fit.residual_exponent,
        "residuals": fit.residuals,
        "correlators": fit.correlators,
        "correlator_offdiag": fit.correlator_offdiag,
        "channel_checks": checks,
        "cptp": checks.cptp(),
        "cutoff_convergence": convergence,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| usage(e.to_string()))? + "\n";
    emit(a.out.as_deref(), text.as_bytes())?;
    if checks.cptp() {
        Ok(())
    } else {
        Err(CliError::Verification("channel is not CPTP within tolerance".into()))
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Build(a) => run_build(a),
        Command::Classify(a) => run_classify(a),
        Command::Verify(a) => run_verify(a),
        Command::NoiseFit(a) => run_noise(a),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code. Messages go to stderr.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let args = match expand_config(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}", message(&e));
            return e.code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", message(&e));
            e.code()
        }
    }
}

fn message(e: &CliError) -> &str {
    match e {
        CliError::Usage(m) | CliError::Verification(m) => m,
    }
}
