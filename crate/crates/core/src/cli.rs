//! Command-line front end: reads arrangement and function files, runs one
//! operation and prints a JSON document.
//!
//! Exit codes: 0 success, 2 invalid input, 3 violated mathematical
//! precondition, 4 window-stability failure, 1 internal error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arrangement::{diagonal_basis, enumerate_bases, AlcovePoint, Arrangement};
use crate::eisenstein::{
    constant_term, kernel_eval, normalized_sum, one_d_eisenstein, ConstantTerm, SumPoint,
};
use crate::error::Error;
use crate::oracle::lattice_sum;
use crate::ratlinalg::Rational;
use crate::residues::{
    decompose_to_basis_fractions, duality_matrix, jk_residue_with, RationalFunction, WindowPolicy,
};
use crate::series::Polynomial;

#[derive(Parser, Debug)]
#[command(name = "jkres", version, about = "Exact residues over hyperplane arrangements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Clone)]
pub struct ArrangementArg {
    /// Arrangement JSON: {"rank": r, "forms": [[ints], ...]}.
    #[arg(long)]
    pub arrangement: PathBuf,
}

#[derive(clap::Args, Debug, Clone)]
pub struct FunctionArgs {
    #[command(flatten)]
    pub arr: ArrangementArg,
    /// Function JSON: {"numerator": [...], "denominator": [{"form", "multiplicity"}]}.
    #[arg(long)]
    pub function: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All bases of the arrangement.
    Bases(ArrangementArg),
    /// No-broken-circuit diagonal basis and its duality matrix.
    DiagonalBasis(ArrangementArg),
    /// Jeffrey-Kirwan residue over the diagonal basis.
    JkResidue {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long, default_value_t = 1)]
        window_scale: u32,
    },
    /// Decomposition into fractions with basis denominators.
    Decompose {
        #[command(flatten)]
        input: FunctionArgs,
    },
    /// Constant-term polynomial on the alcove of t.
    Ct {
        #[command(flatten)]
        input: FunctionArgs,
        /// Point "a/b,c/d,...".
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1)]
        window_scale: u32,
    },
    /// Normalized lattice sum as a multiple of a power of 2 i pi.
    Zsum {
        #[command(flatten)]
        input: FunctionArgs,
        /// Evaluation point, or with --limit-zero the alcove to approach 0 from.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        limit_zero: bool,
        #[arg(long, default_value_t = 1)]
        window_scale: u32,
    },
    /// Brute-force truncated lattice sum.
    Oracle {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Real parts of z, comma separated (default 0).
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Imaginary parts of z, comma separated (default 0).
        #[arg(long, allow_hyphen_values = true)]
        z_imag: Option<String>,
        #[arg(long, default_value_t = 1000)]
        radius: u64,
    },
    /// One-dimensional closed form E_k(t, z).
    E1d {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Real part of z; when given, the closed form is also evaluated.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        z_imag: f64,
    },
    /// Numeric kernel-formula evaluation of E^t(f)(y).
    KernelEval {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Real parts of y, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Imaginary parts of y, comma separated (default 0).
        #[arg(long, allow_hyphen_values = true)]
        y_imag: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input, with a pointer to the offending field when known.
    Validation(String),
    Math(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Math(e) if e.is_precondition() => 3,
            CliError::Math(Error::StabilityFailure) => 4,
            CliError::Math(
                Error::InvalidInput(_) | Error::InvalidArrangement(_) | Error::RankMismatch { .. },
            ) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Math(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ---- input formats ----

#[derive(Deserialize)]
#[serde(untagged)]
enum IntJson {
    Int(i64),
    Str(String),
}

impl IntJson {
    fn to_bigint(&self) -> std::result::Result<BigInt, String> {
        match self {
            IntJson::Int(n) => Ok(BigInt::from(*n)),
            IntJson::Str(s) => s.trim().parse().map_err(|_| format!("not an integer: {s:?}")),
        }
    }
}

/// A rational as an integer, a string "a/b", or {"num", "den"}.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Int(i64),
    Str(String),
    Pair { num: IntJson, den: IntJson },
}

impl RationalJson {
    fn to_rational(&self) -> std::result::Result<Rational, String> {
        match self {
            RationalJson::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalJson::Str(s) => parse_rational(s),
            RationalJson::Pair { num, den } => {
                let d = den.to_bigint()?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rational::new(num.to_bigint()?, d))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: RationalJson,
    exponents: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    form: usize,
    multiplicity: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionJson {
    #[serde(default)]
    numerator: Option<Vec<TermJson>>,
    denominator: Vec<FactorJson>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    let s = path.to_string();
    if s == "." {
        "/".into()
    } else {
        format!("/{}", s.replace(['.', '['], "/").replace(']', ""))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Validation(format!("{what} at {}: {}", pointer(e.path()), e.inner()))
    })
}

pub fn load_arrangement(path: &Path) -> CliResult<Arrangement> {
    parse_json(&read(path)?, "arrangement")
}

/// Parses a function document against an arrangement.
pub fn parse_function(text: &str, arr: &Arrangement) -> CliResult<RationalFunction> {
    let j: FunctionJson = parse_json(text, "function")?;
    let mut den = Vec::with_capacity(j.denominator.len());
    for (k, d) in j.denominator.iter().enumerate() {
        if d.form >= arr.len() {
            return Err(CliError::Validation(format!(
                "function at /denominator/{k}/form: index {} out of range for {} forms",
                d.form,
                arr.len()
            )));
        }
        if d.multiplicity == 0 {
            return Err(CliError::Validation(format!(
                "function at /denominator/{k}/multiplicity: must be positive"
            )));
        }
        den.push((d.form, d.multiplicity));
    }
    let numerator = match &j.numerator {
        None => Polynomial::one(),
        Some(terms) => {
            let mut p = Polynomial::zero();
            for (k, t) in terms.iter().enumerate() {
                if t.exponents.len() > arr.rank() {
                    return Err(CliError::Validation(format!(
                        "function at /numerator/{k}/exponents: {} exponents for rank {}",
                        t.exponents.len(),
                        arr.rank()
                    )));
                }
                let c = t.coeff.to_rational().map_err(|m| {
                    CliError::Validation(format!("function at /numerator/{k}/coeff: {m}"))
                })?;
                p.add_term(t.exponents.clone(), c);
            }
            p
        }
    };
    Ok(RationalFunction::new(numerator, den))
}

fn load_function(args: &FunctionArgs) -> CliResult<(Arrangement, RationalFunction)> {
    let arr = load_arrangement(&args.arr.arrangement)?;
    let f = parse_function(&read(&args.function)?, &arr)?;
    Ok((arr, f))
}

/// Parses `"3"`, `"-1/2"` or `"0.25"` exactly.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: {s:?}");
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(a, b));
    }
    if let Some((int_part, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

fn parse_point(s: &str, flag: &str, rank: usize) -> CliResult<Vec<Rational>> {
    let v = s
        .split(',')
        .map(parse_rational)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|m| CliError::Validation(format!("--{flag}: {m}")))?;
    if v.len() != rank {
        return Err(CliError::Validation(format!(
            "--{flag}: expected {rank} coordinates, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn parse_floats(s: Option<&str>, flag: &str, rank: usize) -> CliResult<Vec<f64>> {
    let Some(s) = s else {
        return Ok(vec![0.0; rank]);
    };
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::Validation(format!("--{flag}: {e}")))?;
    if v.len() != rank {
        return Err(CliError::Validation(format!(
            "--{flag}: expected {rank} coordinates, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn parse_complex(re: Option<&str>, im: Option<&str>, flag: &str, rank: usize) -> CliResult<Vec<Complex64>> {
    let re = parse_floats(re, flag, rank)?;
    let im = parse_floats(im, &format!("{flag}-imag"), rank)?;
    Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
}

fn check_scale(s: u32) -> CliResult<u32> {
    if s == 0 {
        return Err(CliError::Validation("--window-scale must be at least 1".into()));
    }
    Ok(s)
}

// ---- output formats ----

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn rational_json(q: &Rational) -> Value {
    json!({"num": int_json(q.numer()), "den": int_json(q.denom())})
}

fn point_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

fn complex_json(c: Complex64) -> Value {
    json!({"re": c.re, "im": c.im})
}

pub fn polynomial_json(p: &Polynomial, vars: usize) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let e: Vec<u32> = (0..vars.max(m.len())).map(|j| m.get(j).copied().unwrap_or(0)).collect();
            json!({"coeff": rational_json(c), "exponents": e})
        })
        .collect();
    json!({"variables": vars, "terms": terms})
}

fn ct_provenance(ct: &ConstantTerm) -> Value {
    json!({
        "window_scale": ct.window_scale,
        "stability_check": ct.stability.as_str(),
        "alcove_witness": point_json(ct.witness.coords()),
    })
}

// ---- dispatch ----

pub fn run(cli: &Cli) -> CliResult<Value> {
    match &cli.command {
        Command::Bases(a) => {
            let arr = load_arrangement(&a.arrangement)?;
            let bases = enumerate_bases(&arr);
            Ok(json!({"command": "bases", "count": bases.len(), "bases": bases}))
        }
        Command::DiagonalBasis(a) => {
            let arr = load_arrangement(&a.arrangement)?;
            let db = diagonal_basis(&arr)?;
            let m = duality_matrix(&arr, &db)?;
            let members: Vec<&Vec<usize>> = db.members.iter().map(|o| &o.indices).collect();
            let matrix: Vec<Vec<Value>> = m.iter().map(|row| row.iter().map(rational_json).collect()).collect();
            Ok(json!({"command": "diagonal-basis", "members": members, "duality_matrix": matrix}))
        }
        Command::JkResidue { input, window_scale } => {
            let s = check_scale(*window_scale)?;
            let (arr, f) = load_function(input)?;
            let db = diagonal_basis(&arr)?;
            let res = jk_residue_with(&f, &arr, &db, &WindowPolicy::Scaled(s))?;
            let terms: Vec<Value> = res
                .terms
                .iter()
                .map(|(b, c)| json!({"basis": b, "coefficient": rational_json(c)}))
                .collect();
            let members: Vec<&Vec<usize>> = db.members.iter().map(|o| &o.indices).collect();
            Ok(json!({
                "command": "jk-residue",
                "terms": terms,
                "provenance": {"window_scale": s, "diagonal_basis": members},
            }))
        }
        Command::Decompose { input } => {
            let (arr, f) = load_function(input)?;
            let parts = decompose_to_basis_fractions(&f, &arr)?;
            let terms: Vec<Value> = parts
                .iter()
                .map(|p| {
                    let den: Vec<Value> = p
                        .denominator
                        .iter()
                        .map(|(i, m)| json!({"form": i, "multiplicity": m}))
                        .collect();
                    json!({"coefficient": rational_json(&p.coefficient), "denominator": den})
                })
                .collect();
            Ok(json!({"command": "decompose", "terms": terms}))
        }
        Command::Ct { input, t, window_scale } => {
            let s = check_scale(*window_scale)?;
            let (arr, f) = load_function(input)?;
            let point = AlcovePoint::new(parse_point(t, "t", arr.rank())?, &arr)?;
            let ct = constant_term(&f, &arr, &point, s)?;
            Ok(json!({
                "command": "ct",
                "polynomial": polynomial_json(&ct.polynomial, arr.rank()),
                "degree": ct.degree(),
                "value_at_t": rational_json(&ct.evaluate(point.coords())),
                "provenance": ct_provenance(&ct),
            }))
        }
        Command::Zsum { input, t, limit_zero, window_scale } => {
            let s = check_scale(*window_scale)?;
            let (arr, f) = load_function(input)?;
            let t = t.as_deref().map(|t| parse_point(t, "t", arr.rank())).transpose()?;
            let point = match (t, limit_zero) {
                (t, true) => SumPoint::LimitZero(t),
                (Some(t), false) => SumPoint::At(t),
                (None, false) => {
                    return Err(CliError::Validation("zsum needs --t or --limit-zero".into()))
                }
            };
            let sum = normalized_sum(&f, &arr, &point, s)?;
            let real = sum
                .value
                .real_two_pi_multiple()
                .map(|q| json!({"two_pi_coefficient": rational_json(&q), "two_pi_exponent": sum.value.two_i_pi_exponent}));
            Ok(json!({
                "command": "zsum",
                "value": {
                    "coefficient": rational_json(&sum.value.coefficient),
                    "two_i_pi_exponent": sum.value.two_i_pi_exponent,
                },
                "real_view": real,
                "limit_zero": sum.limit_zero,
                "constant_term": polynomial_json(&sum.constant_term.polynomial, arr.rank()),
                "provenance": ct_provenance(&sum.constant_term),
            }))
        }
        Command::Oracle { input, t, z, z_imag, radius } => {
            let (arr, f) = load_function(input)?;
            let t = parse_point(t, "t", arr.rank())?;
            let z = parse_complex(z.as_deref(), z_imag.as_deref(), "z", arr.rank())?;
            let at_origin = z.iter().all(|c| c.re == 0.0 && c.im == 0.0);
            let convergent = f.convergence_margin(&arr).0 > 0;
            let sum = lattice_sum(&f, &arr, &t, &z, *radius, convergent || !at_origin)?;
            let tail = if sum.tail_bound.is_finite() { json!(sum.tail_bound) } else { Value::Null };
            Ok(json!({
                "command": "oracle",
                "numeric": true,
                "value": complex_json(sum.value),
                "radius": sum.radius,
                "tail_bound": tail,
                "terms": sum.terms,
            }))
        }
        Command::E1d { k, t, z, z_imag } => {
            let tv = parse_point(t, "t", 1)?.remove(0);
            let e = one_d_eisenstein(*k, &tv)?;
            let mut out = json!({
                "command": "e1d",
                "k": k,
                "t": rational_json(&tv),
                "floor": int_json(&e.floor),
                "variable_names": ["t", "u"],
                "u": "1/(1-exp(-z))",
                "polynomial": polynomial_json(&e.polynomial, 2),
            });
            if let Some(z) = z {
                let v = e.evaluate(tv.to_f64().unwrap_or(f64::NAN), Complex64::new(*z, *z_imag));
                out["numeric"] = json!(true);
                out["value"] = complex_json(v);
            }
            Ok(out)
        }
        Command::KernelEval { input, t, y, y_imag } => {
            let (arr, f) = load_function(input)?;
            let point = AlcovePoint::new(parse_point(t, "t", arr.rank())?, &arr)?;
            let y = parse_complex(Some(y), y_imag.as_deref(), "y", arr.rank())?;
            let v = kernel_eval(&f, &arr, &point, &y)?;
            Ok(json!({"command": "kernel-eval", "numeric": true, "value": complex_json(v)}))
        }
    }
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("json values serialize") + "\n";
            match &cli.output {
                Some(p) => {
                    if let Err(e) = fs::write(p, text) {
                        eprintln!("cannot write {}: {e}", p.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
