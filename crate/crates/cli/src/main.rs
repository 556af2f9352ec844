//! `nilcert`: check, build and transform membership certificates.
//!
//! Exit status is the only success channel: 0 for success or a valid
//! certificate, 1 for an invalid certificate or incompatible inputs, 2 for
//! usage, parse and I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilcert::commutativity::{self, CommutativityError, LogStyle};
use nilcert::expr::{parse_poly, parse_problem, print_poly_with, ProblemFile};
use nilcert::ring::{Poly, Symbol, SymbolOrder};
use nilcert::transforms::{Permutation, TransformError, Transformer, DEFAULT_MAX_NODES};
use nilcert::witness::{
    check_certificate, deserialize, serialize, Certificate, Family, Setting, Verdict, WitnessDag,
};
use thiserror::Error;

const MAX_NODES_VAR: &str = "NILCERT_MAX_NODES";
const STACK_SIZE: usize = 512 * 1024 * 1024;

#[derive(Parser, Debug)]
#[command(name = "nilcert", version, about = "Membership certificates for Nil U and √U in free rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a certificate file.
    Check { path: PathBuf },
    /// Build the certificate and proof log for the x^n = x commutativity theorem.
    Demo {
        name: DemoName,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Where to write the markdown proof log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// From witnesses of x over U ∪ {a} and y over U ∪ {b}, build x·y (nil)
    /// or x·m·y (sqrt).
    Product {
        #[arg(long, value_enum)]
        setting: SettingArg,
        /// Problem file declaring the symbols, U, `a` and `b`.
        problem: PathBuf,
        p: PathBuf,
        q: PathBuf,
        /// Middle element for sqrt products; defaults to a fresh schematic symbol.
        #[arg(long)]
        m: Option<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Permute the factors of a witnessed product in a reduced ideal.
    Permute {
        witness: PathBuf,
        /// The factors x1;x2;…, whose product must be the witness's claim.
        #[arg(long)]
        factors: String,
        /// The permutation as 1-based images, e.g. "2,1".
        #[arg(long)]
        sigma: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Combine two witnesses of the same claim over U ∪ {a} and U ∪ {b}.
    Intersect {
        #[arg(long, value_enum)]
        setting: SettingArg,
        p: PathBuf,
        q: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoName {
    X2,
    X3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SettingArg {
    Nil,
    Sqrt,
}

impl From<SettingArg> for Setting {
    fn from(s: SettingArg) -> Setting {
        match s {
            SettingArg::Nil => Setting::Nil,
            SettingArg::Sqrt => Setting::Sqrt,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected(_) => 1,
            _ => 2,
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> CliError {
        match e {
            TransformError::InvalidPermutation(m) => CliError::Usage(m),
            other => CliError::Rejected(other.to_string()),
        }
    }
}

impl From<CommutativityError> for CliError {
    fn from(e: CommutativityError) -> CliError {
        match e {
            CommutativityError::Transform(t) => t.into(),
            other => CliError::Rejected(other.to_string()),
        }
    }
}

type Outcome = Result<(), CliError>;

fn transformer() -> Result<Transformer, CliError> {
    match std::env::var(MAX_NODES_VAR) {
        Err(_) => Ok(Transformer::new(DEFAULT_MAX_NODES)),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Transformer::new(n)),
            _ => Err(CliError::Usage(format!("{MAX_NODES_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load(path: &Path) -> Result<Certificate, CliError> {
    deserialize(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Valid => "valid".into(),
        Verdict::Invalid { node: Some(id), reason } => format!("node {id}: {}", reason.code()),
        Verdict::Invalid { node: None, reason } => format!("certificate: {}", reason.code()),
    }
}

/// Loads a certificate that must pass the checker before it is transformed.
fn load_valid(path: &Path) -> Result<WitnessDag, CliError> {
    let cert = load(path)?;
    let verdict = check_certificate(&cert);
    if !verdict.is_valid() {
        return Err(CliError::Rejected(format!("{}: invalid input: {}", path.display(), describe(&verdict))));
    }
    WitnessDag::from_certificate(&cert).map_err(|e| CliError::Rejected(format!("{}: {e}", path.display())))
}

/// Writes `dag` and re-checks what landed on disk.
fn emit(dag: &WitnessDag, out: &Path) -> Outcome {
    let cert = dag.to_certificate();
    write(out, &serialize(&cert))?;
    let back = load(out)?;
    let verdict = check_certificate(&back);
    if !verdict.is_valid() {
        return Err(CliError::Rejected(format!("{}: produced an invalid certificate: {}", out.display(), describe(&verdict))));
    }
    let order = SymbolOrder::new(&cert.symbols);
    println!(
        "{}: {} nodes, claim {}",
        out.display(),
        cert.nodes.len(),
        print_poly_with(&cert.claim, &order)
    );
    Ok(())
}

fn cmd_check(path: &Path) -> Outcome {
    let cert = load(path)?;
    match check_certificate(&cert) {
        Verdict::Valid => {
            println!("{}: valid", path.display());
            Ok(())
        }
        v => Err(CliError::Rejected(format!("{}: invalid: {}", path.display(), describe(&v)))),
    }
}

fn cmd_demo(name: DemoName, out: Option<PathBuf>, log: Option<PathBuf>) -> Outcome {
    let (n, stem) = match name {
        DemoName::X2 => (2, "x2"),
        DemoName::X3 => (3, "x3"),
    };
    let (cert, proof) = commutativity::xn_demo_with(&transformer()?, n)?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{stem}.cert.json")));
    let log = log.unwrap_or_else(|| PathBuf::from(format!("{stem}.log.md")));
    let dag = WitnessDag::from_certificate(&cert).map_err(|e| CliError::Rejected(e.to_string()))?;
    emit(&dag, &out)?;
    write(&log, proof.render(LogStyle::Markdown).as_bytes())?;
    println!("{}: proof log, {} steps", log.display(), proof.steps.len());
    Ok(())
}

fn load_problem(path: &Path) -> Result<ProblemFile, CliError> {
    let src = String::from_utf8(read(path)?)
        .map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))?;
    parse_problem(&src).map_err(|e| CliError::Parse(format!("{}:{e}", path.display())))
}

fn check_setting(expected: Setting, dags: &[(&Path, &WitnessDag)]) -> Outcome {
    for (path, d) in dags {
        if d.setting() != expected {
            return Err(CliError::Rejected(format!(
                "{}: a {} witness cannot be used with --setting {expected}",
                path.display(),
                d.setting()
            )));
        }
    }
    Ok(())
}

fn expect_generators(path: &Path, d: &WitnessDag, problem: &ProblemFile, last: &Poly) -> Outcome {
    let mut elements = problem.generators.clone();
    elements.push(last.clone());
    let families: Vec<Family> = problem.families.iter().map(|(l, r)| Family::new(l.clone(), r.clone())).collect();
    let g = d.generators();
    if g.elements != elements || g.families != families {
        return Err(CliError::Rejected(format!(
            "{}: generators do not match the problem's U followed by its distinguished generator",
            path.display()
        )));
    }
    Ok(())
}

fn cmd_product(setting: SettingArg, problem: &Path, p: &Path, q: &Path, m: Option<String>, out: &Path) -> Outcome {
    let setting = Setting::from(setting);
    let prob = load_problem(problem)?;
    let (a, b) = match (&prob.a, &prob.b) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(CliError::Parse(format!("{}: the problem must declare `a` and `b`", problem.display()))),
    };
    let m = match (setting, m) {
        (Setting::Nil, Some(_)) => return Err(CliError::Usage("--m only applies to --setting sqrt".into())),
        (Setting::Nil, None) => None,
        (Setting::Sqrt, Some(src)) => {
            Some(parse_poly(&src, &prob.symbols).map_err(|e| CliError::Parse(format!("--m: {e}")))?)
        }
        (Setting::Sqrt, None) => Some(Poly::var(Symbol::fresh("z"))),
    };
    let pd = load_valid(p)?;
    let qd = load_valid(q)?;
    if prob.setting != setting {
        return Err(CliError::Rejected(format!(
            "{}: a {} problem cannot be used with --setting {setting}",
            problem.display(),
            prob.setting
        )));
    }
    check_setting(setting, &[(p, &pd), (q, &qd)])?;
    expect_generators(p, &pd, &prob, &a)?;
    expect_generators(q, &qd, &prob, &b)?;
    let t = transformer()?;
    let result = match m {
        None => t.nil_product(&pd, &qd)?,
        Some(m) => t.sqrt_product(&pd, &qd, &m)?,
    };
    emit(&result, out)
}

fn cmd_permute(witness: &Path, factors: &str, sigma: &str, out: &Path) -> Outcome {
    let sigma = Permutation::parse(sigma).map_err(|e| CliError::Usage(format!("--sigma: {e}")))?;
    let w = load_valid(witness)?;
    let fs = factors
        .split(';')
        .map(|f| parse_poly(f, w.symbols()).map_err(|e| CliError::Parse(format!("--factors `{}`: {e}", f.trim()))))
        .collect::<Result<Vec<Poly>, CliError>>()?;
    if fs.len() != sigma.len() {
        return Err(CliError::Usage(format!(
            "--sigma permutes {} positions but --factors lists {}",
            sigma.len(),
            fs.len()
        )));
    }
    let result = transformer()?.permute(&w, &fs, &sigma)?;
    emit(&result, out)
}

fn cmd_intersect(setting: SettingArg, p: &Path, q: &Path, out: &Path) -> Outcome {
    let setting = Setting::from(setting);
    let pd = load_valid(p)?;
    let qd = load_valid(q)?;
    check_setting(setting, &[(p, &pd), (q, &qd)])?;
    let t = transformer()?;
    let result = match setting {
        Setting::Nil => t.nil_intersect(&pd, &qd)?,
        Setting::Sqrt => t.sqrt_intersect(&pd, &qd)?,
    };
    emit(&result, out)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { path } => cmd_check(&path),
        Command::Demo { name, out, log } => cmd_demo(name, out, log),
        Command::Product { setting, problem, p, q, m, out } => cmd_product(setting, &problem, &p, &q, m, &out),
        Command::Permute { witness, factors, sigma, out } => cmd_permute(&witness, &factors, &sigma, &out),
        Command::Intersect { setting, p, q, out } => cmd_intersect(setting, &p, &q, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // transforms recurse over witness depth
    let worker = std::thread::Builder::new().stack_size(STACK_SIZE).spawn(move || run(cli));
    let outcome = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(CliError::Rejected("internal error".into()))),
        Err(e) => Err(CliError::Usage(format!("cannot start worker thread: {e}"))),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nilcert: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
