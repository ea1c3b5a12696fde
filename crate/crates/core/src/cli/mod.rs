//! Command-line front end. Every subcommand reads JSON, writes one JSON
//! document, and maps library errors to fixed exit codes.

mod selftest;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariants::{
    check_theorem52, pair_invariant_check, table_to_json, DiskCache, Engine,
};
use crate::quiver::{all_decompositions, DimVector, Quiver, QuiverMorphism};
use crate::rational;
use crate::stability::{SlopeFunction, WeakStability};
use crate::wallcoeff::{lie_normalize, word_sum_add, Coefficients, WordSum, DEFAULT_MAX_WORD_LEN};

pub use selftest::{selftest, SelftestReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CYCLIC: i32 = 3;
pub const EXIT_ASSERTION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "quiverwc", version, about = "Enumerative invariants of quiver moduli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Quiver JSON file.
    #[arg(long, global = true)]
    pub quiver: Option<PathBuf>,
    /// Dimension vector, tuple, or list of tuples as inline JSON.
    #[arg(long, global = true)]
    pub dimvec: Option<String>,
    #[arg(long, global = true)]
    pub slope: Option<String>,
    #[arg(long, global = true)]
    pub slope2: Option<String>,
    /// Morphism JSON file, including the target quiver under "target".
    #[arg(long, global = true)]
    pub morphism: Option<PathBuf>,
    /// Framing multiplicities, `{"v":1,...}`.
    #[arg(long, global = true)]
    pub framing: Option<String>,
    /// Cache directory; falls back to the QUIVERWC_CACHE variable.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest `|d|` to accept (selftest: largest `|d|` exercised).
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// χ_Q(d,e), its symmetrization, and the sign ε(d,e).
    Euler,
    /// S and U coefficients for tuples, or Lie-word coefficients for one class.
    Ucoeff,
    /// The invariant class at one dimension vector.
    Invariant,
    /// Wall-crossing from `--slope` to `--slope2` against direct computation.
    WallcrossCheck,
    /// Pushforward identity along a quiver morphism.
    MorphismCheck,
    /// Framed pair-invariant identity and injectivity.
    PairCheck,
    /// Property suite on built-in quivers.
    Selftest,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Mismatch(_) => EXIT_INPUT,
        Error::Cyclic => EXIT_CYCLIC,
        Error::Assertion(_) => EXIT_ASSERTION,
    }
}

pub fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Input(_) => "input",
        Error::Mismatch(_) => "mismatch",
        Error::Cyclic => "cyclic",
        Error::Assertion(_) => "assertion",
    };
    json!({"error": {"kind": kind, "message": e.to_string()}})
}

/// Runs a parsed command: the exit code and the JSON document to emit.
pub fn run(cli: &Cli) -> (i32, Value) {
    let out = crate::par::with_jobs(cli.jobs, || dispatch(cli));
    match out {
        Ok((ok, v)) => (if ok { EXIT_OK } else { EXIT_ASSERTION }, v),
        Err(e) => (exit_code(&e), error_json(&e)),
    }
}

/// Parses `args` (including the program name), runs, and renders the output.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let (code, v) = run(&cli);
            (code, render(&v))
        }
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (EXIT_OK, e.to_string());
            }
            let err = Error::input(e.to_string().trim().to_string());
            (EXIT_INPUT, render(&error_json(&err)))
        }
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<(bool, Value)> {
    if cli.command == Command::Selftest {
        let report = selftest(cli.max_size.unwrap_or(4));
        return Ok((report.passed(), report.to_json()));
    }
    let q = load_quiver(cli)?;
    match cli.command {
        Command::Euler => euler(cli, &q).map(|v| (true, v)),
        Command::Ucoeff => ucoeff(cli, &q).map(|v| (true, v)),
        Command::Invariant => invariant(cli, &q).map(|v| (true, v)),
        Command::WallcrossCheck => wallcross_check(cli, &q),
        Command::MorphismCheck => morphism_check(cli, &q),
        Command::PairCheck => pair_check(cli, &q),
        Command::Selftest => unreachable!(),
    }
}

fn read_file(p: &PathBuf) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))
}

fn load_quiver(cli: &Cli) -> Result<Quiver> {
    let path = cli.quiver.as_ref().ok_or_else(|| Error::input("--quiver is required"))?;
    Quiver::from_json(&read_file(path)?)
}

fn parse_json(flag: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("--{flag}: {e}")))
}

fn dimvec_value(q: &Quiver, v: &Value) -> Result<DimVector> {
    q.dimvec_from_json(&v.to_string())
}

fn require<'a>(opt: &'a Option<String>, flag: &str) -> Result<&'a str> {
    opt.as_deref().ok_or_else(|| Error::input(format!("--{flag} is required")))
}

fn one_dimvec(cli: &Cli, q: &Quiver) -> Result<DimVector> {
    let d = q.dimvec_from_json(require(&cli.dimvec, "dimvec")?)?;
    if !d.is_class() {
        return Err(Error::input("dimension vector must be nonnegative and nonzero"));
    }
    if let Some(k) = cli.max_size {
        if d.norm() as usize > k {
            return Err(Error::input(format!("|d| = {} exceeds --max-size {k}", d.norm())));
        }
    }
    Ok(d)
}

fn slope(cli: &Cli, q: &Quiver, second: bool) -> Result<SlopeFunction> {
    let (opt, flag) = if second { (&cli.slope2, "slope2") } else { (&cli.slope, "slope") };
    SlopeFunction::from_json(q, require(opt, flag)?)
}

fn engine(cli: &Cli, q: &Quiver) -> Result<Engine> {
    let disk = match &cli.cache {
        Some(dir) => Some(DiskCache::new(dir)?),
        None => DiskCache::from_env()?,
    };
    let len = cli.max_size.unwrap_or(DEFAULT_MAX_WORD_LEN).max(DEFAULT_MAX_WORD_LEN);
    Ok(Engine::new(q)?.disk_cache(disk).max_word_len(len))
}

fn euler(cli: &Cli, q: &Quiver) -> Result<Value> {
    let v = parse_json("dimvec", require(&cli.dimvec, "dimvec")?)?;
    let (d, e) = match &v {
        Value::Array(xs) if xs.len() == 2 => (dimvec_value(q, &xs[0])?, dimvec_value(q, &xs[1])?),
        Value::Object(_) => {
            let d = dimvec_value(q, &v)?;
            (d.clone(), d)
        }
        _ => return Err(Error::input("--dimvec must be a class or a pair of classes")),
    };
    Ok(json!({
        "chi_Q": q.euler_form(&d, &e).to_string(),
        "chi": q.sym_euler_form(&d, &e).to_string(),
        "epsilon": q.sign_epsilon(&d, &e).to_string(),
    }))
}

fn ucoeff(cli: &Cli, q: &Quiver) -> Result<Value> {
    let tau = slope(cli, q, false)?;
    let tau2 = if cli.slope2.is_some() { slope(cli, q, true)? } else { tau.clone() };
    let coeffs = Coefficients::new(&tau, &tau2);
    let v = parse_json("dimvec", require(&cli.dimvec, "dimvec")?)?;
    let class_list = |xs: &[Value]| xs.iter().map(|x| dimvec_value(q, x)).collect::<Result<Vec<_>>>();
    let tuples: Vec<Vec<DimVector>> = match &v {
        Value::Object(_) => vec![vec![dimvec_value(q, &v)?]],
        Value::Array(xs) if xs.iter().all(Value::is_object) => vec![class_list(xs)?],
        Value::Array(xs) => xs
            .iter()
            .map(|t| match t {
                Value::Array(ys) => class_list(ys),
                _ => Err(Error::input("--dimvec: expected a list of tuples")),
            })
            .collect::<Result<_>>()?,
        _ => return Err(Error::input("--dimvec: expected a class, tuple, or list of tuples")),
    };
    let tuple_json = |t: &[DimVector]| Value::Array(t.iter().map(|d| q.dimvec_to_value(d)).collect());
    let mut rows = Vec::new();
    for t in &tuples {
        if t.iter().any(|d| !d.is_class()) {
            return Err(Error::input("tuple entries must be nonnegative and nonzero"));
        }
        rows.push(json!({
            "tuple": tuple_json(t),
            "S": coeffs.s(t).to_string(),
            "U": rational::fmt(&coeffs.u(t)),
        }));
    }
    let mut out = json!({
        "stability": tau.token(),
        "stability2": tau2.token(),
        "tuples": rows,
    });
    if let Value::Object(_) = v {
        let d = &tuples[0][0];
        let budget = cli.max_size.unwrap_or(DEFAULT_MAX_WORD_LEN);
        if d.norm() as usize > budget {
            return Err(Error::input(format!("|d| = {} exceeds the word budget {budget}", d.norm())));
        }
        let mut words: WordSum<DimVector> = WordSum::new();
        for t in all_decompositions(d, None) {
            let u = coeffs.u(&t);
            word_sum_add(&mut words, t, u);
        }
        let lie: Vec<Value> = lie_normalize(&words)?
            .iter()
            .map(|w| json!({"bracket": tuple_json(&w.letters), "coeff": rational::fmt(&w.coeff)}))
            .collect();
        out["utilde"] = Value::Array(lie);
    }
    Ok(out)
}

fn invariant(cli: &Cli, q: &Quiver) -> Result<Value> {
    let d = one_dimvec(cli, q)?;
    let tau = slope(cli, q, false)?;
    let e = engine(cli, q)?;
    let inv = e.invariant(&tau, &d)?;
    let mut out = e.va().pl_to_json(&inv);
    out["stability"] = json!(tau.token());
    Ok(out)
}

fn wallcross_check(cli: &Cli, q: &Quiver) -> Result<(bool, Value)> {
    let d = one_dimvec(cli, q)?;
    let (tau, tau2) = (slope(cli, q, false)?, slope(cli, q, true)?);
    let e = engine(cli, q)?;
    let table = e.table(&tau, &d)?;
    let via = e.wallcross_transform(&table, &tau, &tau2, &d)?;
    let direct = e.invariant(&tau2, &d)?;
    let holds = e.va().pl_equal(&via, &direct)?;
    Ok((
        holds,
        json!({
            "holds": holds,
            "table": table_to_json(&e, &table),
            "transformed": e.va().pl_to_json(&via),
            "direct": e.va().pl_to_json(&direct),
        }),
    ))
}

fn morphism_check(cli: &Cli, q: &Quiver) -> Result<(bool, Value)> {
    let path = cli.morphism.as_ref().ok_or_else(|| Error::input("--morphism is required"))?;
    let v = parse_json("morphism", &read_file(path)?)?;
    let target = Quiver::from_value(v.get("target").ok_or_else(|| Error::input("morphism needs \"target\""))?)?;
    let mut body = v.clone();
    body.as_object_mut().unwrap().remove("target");
    let lambda = QuiverMorphism::from_value(q, &target, &body)?;
    let d = one_dimvec(cli, q)?;
    let tau: Arc<dyn WeakStability> = Arc::new(slope(cli, &target, false)?);
    let src = engine(cli, q)?;
    let tgt = engine(cli, &target)?;
    let r = check_theorem52(&src, &tgt, &lambda, tau, &d)?;
    Ok((
        r.holds,
        json!({
            "holds": r.holds,
            "pushed_dimvec": target.dimvec_to_value(&lambda.pushforward(&d)),
            "lhs": tgt.va().pl_to_json(&r.lhs),
            "rhs": tgt.va().pl_to_json(&r.rhs),
        }),
    ))
}

fn pair_check(cli: &Cli, q: &Quiver) -> Result<(bool, Value)> {
    let d = one_dimvec(cli, q)?;
    let mu = slope(cli, q, false)?;
    let framing = q.dimvec_from_json(require(&cli.framing, "framing")?)?;
    let e = engine(cli, q)?;
    let r = pair_invariant_check(&e, &mu, &d, &framing.0)?;
    let va = &Engine::new(&r.framed.quiver)?;
    Ok((
        r.holds && r.injective,
        json!({
            "holds": r.holds,
            "injective": r.injective,
            "framed_slope": r.framed.to_value(),
            "lhs": va.va().pl_to_json(&r.lhs),
            "rhs": va.va().pl_to_json(&r.rhs),
        }),
    ))
}
