//! Command-line front end. Every command prints one JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::connection::reference::{quartic_matrix, quintic_structure, series_goldens, QUARTIC_ZEROS};
use crate::connection::{
    coefficient_table, connection_matrix_closed, coverage, im_k_residuals, Branch, ClosedConfig, ConnectionError,
    ConnectionMatrix, Family,
};
use crate::equation::{EquationError, HypergeometricEquation, Point};
use crate::frobenius::{frobenius_basis, FrobeniusError, Normalization, Preset};
use crate::numerics::{CMatrix, ExactRational, NumericsError, PrecComplex, DEFAULT_DIGITS};
use crate::oracle::{default_normalizations, numeric_connection, OracleConfig, OracleError};

pub const SCHEMA: &str = "hyperconnect/1";
pub const DIGITS_ENV: &str = "HYPERCONNECT_DIGITS";

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const UNSUPPORTED: i32 = 3;
    pub const CHECK: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Unsupported(_) => exit::UNSUPPORTED,
            CliError::Failed(_) => exit::FAILURE,
        }
    }
}

impl From<EquationError> for CliError {
    fn from(e: EquationError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ConnectionError> for CliError {
    fn from(e: ConnectionError) -> Self {
        match e {
            ConnectionError::OracleOnly(_) | ConnectionError::Unsupported(_) | ConnectionError::Precondition(_) => {
                CliError::Unsupported(e.to_string())
            }
            e => CliError::Failed(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Config(_) | OracleError::UnknownTarget(_) => CliError::Parse(e.to_string()),
            e => CliError::Failed(e.to_string()),
        }
    }
}

impl From<FrobeniusError> for CliError {
    fn from(e: FrobeniusError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "hyperconnect", version, about = "Connection matrices of generalized hypergeometric equations")]
pub struct Cli {
    /// Working precision in decimal digits (default: $HYPERCONNECT_DIGITS, else 60).
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exponents, β_n, c and resonance classes.
    Analyze { equation: String },
    /// Frobenius series coefficients at 0 or 1.
    Frobenius {
        equation: String,
        #[arg(long, default_value_t = 0)]
        point: u32,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long)]
        preset: Option<String>,
    },
    /// The connection matrix M₁₀ with Φ₀(z) = Φ₁(1 − z) M₁₀.
    Connect {
        equation: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Oracle series order.
        #[arg(long, default_value_t = 400)]
        order: usize,
        /// Target for accelerated sums (default 10^(−D/2)).
        #[arg(long)]
        tol: Option<f64>,
        /// Largest closed/oracle delta accepted by "both".
        #[arg(long, default_value_t = 1e-8)]
        agree: f64,
    },
    /// Rebuild a worked example end to end and compare with the printed values.
    Reproduce {
        #[arg(value_enum)]
        which: PresetArg,
        #[arg(long, default_value_t = 400)]
        order: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// |Im k_m − π h_m| for the quintic.
    CheckIdentity {
        #[arg(value_enum)]
        which: PresetArg,
        /// Range "a..b" (inclusive) or a single index.
        #[arg(long, default_value = "0..2")]
        m: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        limit: f64,
    },
    /// A single expansion coefficient and the formula it comes from.
    Coeff {
        equation: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        index: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Zero)]
        branch: BranchArg,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Quartic,
    Quintic,
}

impl PresetArg {
    fn preset(self) -> Preset {
        match self {
            PresetArg::Quartic => Preset::Quartic,
            PresetArg::Quintic => Preset::Quintic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "A")]
    A,
    G,
    Lqw,
    H,
    K,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Zero,
    C,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, passed: value < limit }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation: Option<Value>,
    pub digits: u32,
    pub result: Value,
    pub checks: Vec<Check>,
    pub timings_ms: BTreeMap<String, u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunReport {
    fn new(command: Vec<String>, digits: u32) -> Self {
        RunReport {
            schema: SCHEMA,
            command,
            equation: None,
            digits,
            result: Value::Null,
            checks: Vec::new(),
            timings_ms: BTreeMap::new(),
            error: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let v = f();
        self.timings_ms.insert(name.to_string(), t.elapsed().as_millis());
        v
    }
}

/// What the binary prints and returns.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    pub report: Option<RunReport>,
}

pub fn complex_json(z: &PrecComplex, digits: u32) -> Value {
    let (re, im) = z.to_decimal(digits);
    json!({ "re": re, "im": im })
}

pub fn matrix_json(m: &CMatrix, digits: u32) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|z| complex_json(z, digits)).collect())).collect())
}

fn rationals_json(v: &[ExactRational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn parse_complex_json(v: &Value, digits: u32) -> Result<PrecComplex, CliError> {
    let part = |k: &str| v.get(k).and_then(Value::as_str).ok_or_else(|| CliError::Parse(format!("missing \"{k}\" in {v}")));
    PrecComplex::parse(part("re")?, part("im")?, digits).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn parse_matrix_json(v: &Value, digits: u32) -> Result<CMatrix, CliError> {
    let rows = v.as_array().ok_or_else(|| CliError::Parse("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| CliError::Parse("row must be an array".into()))?
                .iter()
                .map(|z| parse_complex_json(z, digits))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    CMatrix::from_rows(rows).map_err(|e| CliError::Parse(e.to_string()))
}

fn connection_json(m: &ConnectionMatrix, digits: u32) -> Value {
    json!({
        "method": m.method.to_string(),
        "matrix": matrix_json(&m.entries, digits),
        "error_estimate": m.error_estimate,
    })
}

/// `quartic`, `quintic`, inline JSON, or a path to a JSON file.
pub fn load_equation(arg: &str) -> Result<HypergeometricEquation, CliError> {
    if let Some(p) = Preset::parse(arg) {
        if !std::path::Path::new(arg).exists() {
            return Ok(p.equation());
        }
    }
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?
    };
    Ok(HypergeometricEquation::from_json(&text)?)
}

/// --digits, else $HYPERCONNECT_DIGITS, else the library default.
pub fn resolve_digits(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(DIGITS_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Parse(format!("{DIGITS_ENV}={s:?} is not a digit count"))),
        Err(_) => Ok(DEFAULT_DIGITS),
    }
}

fn default_tol(tol: Option<f64>, digits: u32) -> f64 {
    tol.unwrap_or_else(|| 10f64.powf(-(digits as f64) / 2.0))
}

fn equation_json(eq: &HypergeometricEquation) -> Value {
    json!({ "alpha": rationals_json(eq.alpha()), "gamma": rationals_json(eq.gamma()) })
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Parse(format!("bad index range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(a.parse().map_err(|_| bad())?..=b.trim_start_matches('=').parse().map_err(|_| bad())?),
        None => {
            let m = s.parse().map_err(|_| bad())?;
            Ok(m..=m)
        }
    }
}

fn analyze(eq: &HypergeometricEquation) -> Value {
    let classes: Vec<Vec<usize>> = eq.resonance_classes().iter().map(|c| c.iter().map(|i| i + 1).collect()).collect();
    let beta = eq.beta_n();
    let one = ExactRational::one();
    let b: Vec<ExactRational> = eq.gamma()[..eq.order() - 1].iter().map(|g| &one - g).collect();
    let cover = match coverage(eq) {
        Ok(c) => format!("{c:?}"),
        Err(_) => "oracle-only".to_string(),
    };
    json!({
        "order": eq.order(),
        "beta": beta.to_string(),
        "exponents": {
            "0": rationals_json(&eq.local_exponents(Point::Zero)),
            "1": rationals_json(&eq.local_exponents(Point::One)),
            "infinity": rationals_json(eq.alpha()),
        },
        "buehring": { "a": rationals_json(eq.alpha()), "b": rationals_json(&b), "c": beta.to_string() },
        "resonance_classes": classes,
        "resonant": eq.is_resonant(),
        "maximal_unipotent": eq.is_mum(),
        "closed_form_coverage": cover,
    })
}

fn frobenius(eq: &HypergeometricEquation, point: u32, order: usize, preset: Option<&str>, d: u32) -> Result<Value, CliError> {
    let pt = Point::from_index(point).ok_or_else(|| CliError::Parse(format!("point must be 0 or 1, got {point}")))?;
    let norm = match preset {
        Some(name) => {
            let p = Preset::parse(name).ok_or_else(|| CliError::Parse(format!("unknown preset {name:?}")))?;
            if p.equation() != *eq {
                return Err(CliError::Parse(format!("preset {name} does not belong to this equation")));
            }
            Normalization::Preset(p)
        }
        None => Normalization::Identity,
    };
    let basis = frobenius_basis(eq, pt, order, norm)?;
    let columns: Vec<Value> = basis
        .columns
        .iter()
        .zip(&basis.leading)
        .map(|(c, lead)| {
            json!({
                "exponent": c.exponent.to_string(),
                "leading": lead.to_string(),
                "coeffs": c.coeffs.iter().map(|row| rationals_json(row)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "point": point,
        "order": order,
        "columns": columns,
        "r": basis.r.iter().map(|row| rationals_json(row)).collect::<Vec<_>>(),
        "c": matrix_json(&basis.c_matrix(d), d),
    }))
}

fn connect(
    rep: &mut RunReport,
    eq: &HypergeometricEquation,
    method: MethodArg,
    order: usize,
    tol: f64,
    agree: f64,
    d: u32,
) -> Result<(), CliError> {
    let (n0, n1) = default_normalizations(eq);
    let mut out = serde_json::Map::new();
    let mut unsupported = None;
    let closed = if method != MethodArg::Oracle {
        let r = rep.timed("closed", || connection_matrix_closed(eq, n0.clone(), n1.clone(), &ClosedConfig { digits: d, tol }));
        match r {
            Ok(m) => {
                out.insert("closed".into(), connection_json(&m, d));
                Some(m)
            }
            Err(e) if method == MethodArg::Both && CliError::from(e.clone()).code() == exit::UNSUPPORTED => {
                out.insert("closed".into(), json!({ "error": e.to_string() }));
                unsupported = Some(e);
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let oracle = if method != MethodArg::Closed {
        let cfg = OracleConfig { order, digits: d, ..OracleConfig::default() };
        let m = rep.timed("oracle", || numeric_connection(eq, n0, n1, &cfg))?;
        out.insert("oracle".into(), connection_json(&m, d));
        Some(m)
    } else {
        None
    };
    if let (Some(c), Some(o)) = (&closed, &oracle) {
        let delta = c.entries.sub(&o.entries);
        out.insert("delta".into(), matrix_json(&delta, 6));
        rep.checks.push(Check::below("closed vs oracle", delta.max_abs(), agree));
    }
    rep.result = Value::Object(out);
    match unsupported {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn reproduce(rep: &mut RunReport, which: PresetArg, order: usize, tol: f64, d: u32) -> Result<(), CliError> {
    let preset = which.preset();
    let eq = preset.equation();
    let norm = || Normalization::Preset(preset.clone());
    let closed = rep.timed("closed", || connection_matrix_closed(&eq, norm(), norm(), &ClosedConfig { digits: d, tol }))?;
    let cfg = OracleConfig { order, digits: d, ..OracleConfig::default() };
    let oracle = rep.timed("oracle", || numeric_connection(&eq, norm(), norm(), &cfg))?;
    let delta = closed.entries.max_abs_diff(&oracle.entries);
    let mut goldens = Vec::new();
    for (pt, j, i, want) in series_goldens(&preset) {
        let basis = frobenius_basis(&eq, pt, (i + 2).max(2 * eq.order()), norm())?;
        let got = basis.s_coefficient(j, i).cloned();
        let ok = got.as_ref() == Some(&want);
        goldens.push(json!({
            "point": pt.to_string(), "column": j + 1, "index": i,
            "expected": want.to_string(), "got": got.map(|g| g.to_string()),
        }));
        rep.checks.push(Check {
            name: format!("S{pt},1{} coefficient {i} = {want}", j + 1),
            value: if ok { 0.0 } else { 1.0 },
            limit: 0.5,
            passed: ok,
        });
    }
    let mut result = json!({
        "closed": connection_json(&closed, d),
        "oracle": connection_json(&oracle, d),
        "goldens": goldens,
    });
    match which {
        PresetArg::Quartic => {
            let printed = quartic_matrix(d);
            result["printed"] = matrix_json(&printed, d);
            rep.checks.push(Check::below("closed vs printed", closed.entries.max_abs_diff(&printed), 1e-30));
            rep.checks.push(Check::below("closed vs oracle", delta, 1e-30));
            for (i, j) in QUARTIC_ZEROS {
                let v = closed.entries[(i, j)].abs_f64();
                rep.checks.push(Check::below(format!("closed M[{}][{}] = 0", i + 1, j + 1), v, 1e-30));
            }
        }
        PresetArg::Quintic => {
            rep.checks.push(Check::below("closed vs oracle", delta, 1e-8));
            for ((i, j), want) in quintic_structure(d) {
                let v = oracle.entries[(i, j)].dist(&want);
                rep.checks.push(Check::below(format!("oracle M[{}][{}] structural", i + 1, j + 1), v, 1e-30));
            }
        }
    }
    rep.result = result;
    Ok(())
}

fn check_identity(
    rep: &mut RunReport,
    which: PresetArg,
    ms: std::ops::RangeInclusive<usize>,
    tol: f64,
    limit: f64,
    d: u32,
) -> Result<(), CliError> {
    if which != PresetArg::Quintic {
        return Err(CliError::Unsupported("the Im k_m identity concerns the quintic (n = 4)".into()));
    }
    let eq = which.preset().equation();
    let mut rows = Vec::new();
    for m in ms {
        let r = rep.timed(&format!("m={m}"), || im_k_residuals(&eq, m, tol, d))?;
        rows.push(json!({
            "m": m,
            "h": complex_json(&r.h, d),
            "k": complex_json(&r.k, d),
            "im_k_minus_pi_h": r.minus_pi_h,
            "im_k_minus_pi_abs_h": r.minus_pi_abs_h,
            "im_k_plus_pi_h": r.plus_pi_h,
        }));
        rep.checks.push(Check::below(format!("|Im k_{m} − π h_{m}|"), r.minus_pi_h, limit));
    }
    rep.result = Value::Array(rows);
    Ok(())
}

fn coeff(
    eq: &HypergeometricEquation,
    family: FamilyArg,
    index: usize,
    branch: BranchArg,
    tol: f64,
    d: u32,
) -> Result<Value, CliError> {
    let families = match family {
        FamilyArg::A => vec![Family::A],
        FamilyArg::G => vec![Family::G(match branch {
            BranchArg::Zero => Branch::Zero,
            BranchArg::C => Branch::C,
        })],
        FamilyArg::Lqw => {
            let mut f = vec![Family::Q, Family::W];
            if eq.beta_n().to_i64().is_some_and(|c| (index as i64) < c) {
                f.insert(0, Family::L);
            }
            f
        }
        FamilyArg::H => vec![Family::H],
        FamilyArg::K => vec![Family::K],
    };
    let mut out = Vec::new();
    for f in families {
        let t = coefficient_table(eq, f, index..index + 1, tol, d)?;
        out.push(json!({
            "family": f.to_string(),
            "index": index,
            "value": complex_json(&t.values[0], d),
            "tail_estimate": t.tail_estimates[0],
            "formula": f.formula(),
        }));
    }
    Ok(Value::Array(out))
}

fn dispatch(rep: &mut RunReport, cmd: Command, d: u32) -> Result<(), CliError> {
    match cmd {
        Command::Analyze { equation } => {
            let eq = load_equation(&equation)?;
            rep.equation = Some(equation_json(&eq));
            rep.result = analyze(&eq);
        }
        Command::Frobenius { equation, point, order, preset } => {
            let eq = load_equation(&equation)?;
            rep.equation = Some(equation_json(&eq));
            rep.result = rep.timed("frobenius", || frobenius(&eq, point, order, preset.as_deref(), d))?;
        }
        Command::Connect { equation, method, order, tol, agree } => {
            let eq = load_equation(&equation)?;
            rep.equation = Some(equation_json(&eq));
            connect(rep, &eq, method, order, default_tol(tol, d), agree, d)?;
        }
        Command::Reproduce { which, order, tol } => {
            rep.equation = Some(equation_json(&which.preset().equation()));
            reproduce(rep, which, order, default_tol(tol, d), d)?;
        }
        Command::CheckIdentity { which, m, tol, limit } => {
            rep.equation = Some(equation_json(&which.preset().equation()));
            check_identity(rep, which, parse_range(&m)?, default_tol(tol, d), limit, d)?;
        }
        Command::Coeff { equation, family, index, branch, tol } => {
            let eq = load_equation(&equation)?;
            rep.equation = Some(equation_json(&eq));
            rep.result = coeff(&eq, family, index, branch, default_tol(tol, d), d)?;
        }
    }
    Ok(())
}

/// Runs one command line (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == exit::OK { (text, String::new()) } else { (String::new(), text) };
            return Outcome { stdout, stderr, code, report: None };
        }
    };
    let digits = match resolve_digits(cli.digits) {
        Ok(d) => d,
        Err(e) => return Outcome { stdout: String::new(), stderr: format!("{e}\n"), code: e.code(), report: None },
    };
    let mut rep = RunReport::new(args.iter().skip(1).cloned().collect(), digits);
    let (code, stderr) = match dispatch(&mut rep, cli.command, digits) {
        Ok(()) if rep.passed() => (exit::OK, String::new()),
        Ok(()) => {
            let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            (exit::CHECK, format!("failed checks: {}\n", failed.join("; ")))
        }
        Err(e) => {
            rep.error = Some(e.to_string());
            (e.code(), format!("error: {e}\n"))
        }
    };
    let stdout = serde_json::to_string_pretty(&rep).expect("serializable") + "\n";
    Outcome { stdout, stderr, code, report: Some(rep) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(a: &[&str]) -> Outcome {
        run(std::iter::once("hyperconnect").chain(a.iter().copied()))
    }

    #[test]
    fn analyze_quintic() {
        let o = run_args(&["analyze", "quintic"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"]["beta"], "1");
        assert_eq!(v["result"]["resonance_classes"], json!([[1, 2, 3, 4]]));
    }

    #[test]
    fn inline_json_equation() {
        let o = run_args(&["analyze", r#"{"alpha": ["1/3", "1/2", "5/7"], "gamma": ["1/4", "2/5", "0"]}"#]);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["result"]["closed_form_coverage"], "NonresonantOrder3");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["frobnicate"]).code, exit::PARSE);
        assert_eq!(run_args(&["analyze", "/nonexistent.json"]).code, exit::PARSE);
        assert_eq!(run_args(&["analyze", r#"{"alpha": ["1/2"], "gamma": []}"#]).code, exit::PARSE);
        let five = r#"{"alpha": ["1/7","2/7","3/7","4/7","5/7"], "gamma": ["0","0","0","0","0"]}"#;
        let o = run_args(&["--digits", "30", "connect", five, "--method", "closed"]);
        assert_eq!(o.code, exit::UNSUPPORTED);
        assert!(o.stderr.contains("oracle"), "{}", o.stderr);
    }

    #[test]
    fn connect_both_agrees() {
        let o = run_args(&["--digits", "40", "connect", "quartic", "--order", "300", "--agree", "1e-25"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let rep = o.report.unwrap();
        assert!(rep.checks[0].passed);
    }

    #[test]
    fn matrix_round_trip() {
        let o = run_args(&["--digits", "40", "connect", "quartic", "--method", "closed"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        let m = &v["result"]["closed"]["matrix"];
        let again = matrix_json(&parse_matrix_json(m, 40).unwrap(), 40);
        assert_eq!(serde_json::to_string(m).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn coeff_reports_formula() {
        let o = run_args(&["--digits", "40", "coeff", "quintic", "--family", "lqw", "--index", "0"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        let fams: Vec<&str> = v["result"].as_array().unwrap().iter().map(|x| x["family"].as_str().unwrap()).collect();
        assert_eq!(fams, ["l", "q", "w"]);
        assert!(v["result"][1]["formula"].as_str().unwrap().contains("logarithm"));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..2").unwrap(), 0..=2);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("a..b").is_err());
    }

    proptest::proptest! {
        #[test]
        fn complex_json_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6, d in 20u32..70) {
            let z = PrecComplex::from_f64(re, d);
            let z = &z + &PrecComplex::from_f64(im, d).mul_i();
            let v = complex_json(&z, d);
            let again = complex_json(&parse_complex_json(&v, d).unwrap(), d);
            proptest::prop_assert_eq!(v, again);
        }
    }
}
