//! Command-line interface: subcommands, text and JSON formats, sweeps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::{json, Value};

use crate::correspondence::{
    classify_knot_pairs, star_equivalent, CorrespondenceError, KnotPairReport, MatrixClassQuery, Route, StarVerdict,
    Verdict, Witness,
};
use crate::cs::{family_polynomial, family_spec, is_cs_matrix, is_cs_polynomial, verify_family_theorem, CsError, CsReport};
use crate::linalg::IntMatrix;
use crate::poly::IntPoly;
use crate::ring::{ClassOptions, Closedness, SearchLimits};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const NOT_CS: i32 = 2;
    pub const NOT_EQUIVALENT: i32 = 3;
    pub const UNKNOWN: i32 = 4;
    pub const PARSE: i32 = 64;
    pub const SHAPE: i32 = 65;
}

/// Environment variable capping per-row compute time, in milliseconds.
pub const BUDGET_ENV: &str = "CSKNOT_BUDGET_MS";

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_poly<S: Serializer>(p: &IntPoly, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

pub fn ser_matrix<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

fn poly_json(p: &IntPoly) -> Value {
    Value::from(p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::from((0..m.rows()).map(|i| m.row(i).iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn convention() -> Value {
    json!({ "coeff_order": "ascending", "hnf": "row-upper" })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Parse(String),
    Shape(String),
}

impl InputError {
    fn code(&self) -> i32 {
        match self {
            InputError::Parse(_) => exit::PARSE,
            InputError::Shape(_) => exit::SHAPE,
        }
    }

    fn message(&self) -> &str {
        match self {
            InputError::Parse(m) | InputError::Shape(m) => m,
        }
    }
}

/// Contents of `arg` when it names a file, otherwise `arg` itself.
fn read_input(arg: &str) -> Result<String, InputError> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| InputError::Parse(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

pub fn parse_poly(text: &str) -> Result<IntPoly, InputError> {
    IntPoly::parse_text(text).map_err(|e| InputError::Parse(e.to_string()))
}

/// One row per line, entries separated by whitespace or commas. Lines
/// starting with `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, InputError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|e| InputError::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(InputError::Parse("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(InputError::Parse("rows have different lengths".into()));
    }
    let m = IntMatrix::from_rows(rows).map_err(|e| InputError::Parse(e.to_string()))?;
    if !m.is_square() {
        return Err(InputError::Shape(format!("matrix is {}x{}, expected square", m.rows(), m.cols())));
    }
    Ok(m)
}

pub fn matrix_to_text(m: &IntMatrix) -> String {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "csknot", version, about = "Cappell-Shaneson matrices, ideal classes and *-equivalence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Pollard-rho attempts when factoring discriminants.
    #[arg(long, global = true, default_value_t = 64)]
    pub factor_budget: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Cappell-Shaneson conditions for a polynomial.
    VerifyPoly {
        /// File or inline text with ascending coefficients.
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Check the Cappell-Shaneson conditions for a matrix file.
    VerifyMatrix { path: PathBuf },
    /// Verify the family theorem in dimension n at parameter l.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        l: BigInt,
    },
    /// Ideal classes of Z[θ] and one Cappell-Shaneson matrix per class.
    Classify {
        /// File or inline text with ascending coefficients.
        #[arg(required_unless_present = "a", allow_hyphen_values = true)]
        input: Option<String>,
        /// Family dimension, used with --a.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Classify the family polynomial at this a.
        #[arg(long, allow_negative_numbers = true)]
        a: Option<BigInt>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Class counts over a range of a for the family of dimension n.
    Sweep {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        a_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        a_max: i64,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Decide whether two matrices are *-equivalent.
    StarEq {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long = "box", default_value_t = 3)]
        coeff_box: u32,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct Bounds {
    /// Norm bound for the ideal scan (default: the Minkowski bound).
    #[arg(long)]
    pub norm_bound: Option<u64>,
    /// Largest norm bound scanned; larger bounds are lowered to it.
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_CAP)]
    pub norm_cap: u64,
    /// Box radius of the witness search.
    #[arg(long, default_value_t = 2)]
    pub radius: u32,
    /// Time budget in milliseconds; overrides the environment.
    #[arg(long)]
    pub budget_ms: Option<u64>,
}

pub const DEFAULT_CLASSIFY_CAP: u64 = 5_000;
pub const DEFAULT_BUDGET_MS: u64 = 60_000;

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub norm_bound: Option<u64>,
    pub norm_cap: u64,
    pub radius: u32,
    pub factor_budget: usize,
    pub budget: Option<Duration>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            norm_bound: None,
            norm_cap: DEFAULT_CLASSIFY_CAP,
            radius: 2,
            factor_budget: 64,
            budget: Some(env_budget().unwrap_or(Duration::from_millis(DEFAULT_BUDGET_MS))),
        }
    }
}

fn env_budget() -> Option<Duration> {
    std::env::var(BUDGET_ENV).ok()?.trim().parse::<u64>().ok().map(Duration::from_millis)
}

impl ClassifyOptions {
    fn from_bounds(b: &Bounds, factor_budget: usize) -> ClassifyOptions {
        ClassifyOptions {
            norm_bound: b.norm_bound,
            norm_cap: b.norm_cap,
            radius: b.radius,
            factor_budget,
            budget: Some(
                b.budget_ms.map(Duration::from_millis).or_else(env_budget).unwrap_or(Duration::from_millis(DEFAULT_BUDGET_MS)),
            ),
        }
    }

    fn class_options(&self) -> ClassOptions {
        ClassOptions {
            norm_bound: self.norm_bound,
            cap: self.norm_cap,
            limits: SearchLimits { radius: self.radius, ..SearchLimits::default() },
            factor_budget: self.factor_budget,
            deadline: self.budget.map(|d| Instant::now() + d),
        }
    }
}

/// Summary of a classification run.
#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub polynomial: IntPoly,
    pub pairs: KnotPairReport,
}

impl ClassifyReport {
    pub fn complete(&self) -> bool {
        self.pairs.classes.complete
    }

    /// The class count when complete, otherwise a certified lower bound.
    pub fn count(&self) -> usize {
        if self.complete() {
            self.pairs.classes.count()
        } else {
            self.pairs.classes.certified_distinct
        }
    }

    /// Some representative is not invertible, or the order is not maximal.
    pub fn not_a_group(&self) -> bool {
        self.pairs.classes.closure == Closedness::No || self.pairs.classes.invertible.iter().any(|b| !b)
    }

    pub fn status(&self) -> &'static str {
        if self.complete() {
            "complete"
        } else {
            "incomplete, lower bound"
        }
    }

    pub fn structure(&self) -> Option<String> {
        if self.complete() {
            self.pairs.classes.group().map(|g| g.describe())
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        let c = &self.pairs.classes;
        let group = if self.complete() { c.group() } else { None };
        json!({
            "convention": convention(),
            "polynomial": poly_json(&self.polynomial),
            "integrally_closed": format!("{:?}", c.closure),
            "minkowski_bound": format!("{:.6}", c.minkowski.numer().to_f64().unwrap_or(f64::NAN) / c.minkowski.denom().to_f64().unwrap_or(f64::NAN)),
            "norm_bound": c.bound,
            "ideals_scanned": c.ideals_scanned,
            "status": self.status(),
            "complete": self.complete(),
            "class_count": self.count(),
            "representatives_found": c.count(),
            "not_a_group": self.not_a_group(),
            "structure": group.as_ref().map(|g| g.describe()),
            "element_orders": group.as_ref().map(|g| g.element_orders.clone()),
            "unresolved_pairs": c.unresolved.len(),
            "timed_out": c.timed_out,
            "classes": serde_json::to_value(&self.pairs.pairs).expect("serializable"),
            "table": c.table,
        })
    }

    pub fn to_text(&self) -> String {
        let c = &self.pairs.classes;
        let mut s = String::new();
        s += &format!("polynomial: {}\n", self.polynomial.to_text());
        s += &format!("integrally closed: {:?}\n", c.closure);
        s += &format!("norm bound: {} ({} ideals scanned)\n", c.bound, c.ideals_scanned);
        if self.complete() {
            s += &format!("classes: {} (complete)\n", self.count());
        } else {
            s += &format!("classes: >= {} (incomplete, lower bound)\n", self.count());
        }
        if self.not_a_group() {
            s += "not a group: non-invertible ideals present\n";
        }
        if let Some(st) = self.structure() {
            s += &format!("structure: {st}\n");
        }
        for (k, p) in self.pairs.pairs.iter().enumerate() {
            s += &format!("class {k}: norm {} invertible {} CS {}\n", p.norm, p.invertible, p.cs.is_cs);
            s += &matrix_to_text(&p.matrix);
            s += "\n";
        }
        s
    }
}

pub fn cmd_classify(f: &IntPoly, opts: &ClassifyOptions) -> Result<ClassifyReport, CorrespondenceError> {
    let pairs = classify_knot_pairs(f, &opts.class_options())?;
    Ok(ClassifyReport { polynomial: f.clone(), pairs })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "ser_bigint")]
    pub a: BigInt,
    pub integrally_closed: Option<Closedness>,
    pub class_count_or_lower_bound: Option<usize>,
    pub complete: bool,
    pub not_a_group: bool,
    pub norm_bound: Option<u64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.a,
            self.integrally_closed.map_or(String::new(), |c| format!("{c:?}")),
            self.class_count_or_lower_bound.map_or(String::new(), |c| c.to_string()),
            self.complete,
            if self.not_a_group { "not-a-group" } else { "" },
            self.norm_bound.map_or(String::new(), |b| b.to_string()),
            self.error.as_deref().unwrap_or("").replace(',', ";"),
        )
    }
}

pub const SWEEP_CSV_HEADER: &str = "a,integrally_closed,class_count_or_lower_bound,complete,group,norm_bound,error";

/// One row per `a` in `[a_min, a_max]`; rows are independent and failures
/// are recorded in the row.
pub fn cmd_sweep(n: usize, a_min: i64, a_max: i64, opts: &ClassifyOptions) -> Vec<SweepRow> {
    (a_min..=a_max)
        .into_par_iter()
        .map(|a| {
            let a = BigInt::from(a);
            let row = |err: String| SweepRow {
                a: a.clone(),
                integrally_closed: None,
                class_count_or_lower_bound: None,
                complete: false,
                not_a_group: false,
                norm_bound: None,
                error: Some(err),
            };
            let f = match family_polynomial(n, &a) {
                Ok(f) => f,
                Err(e) => return row(e.to_string()),
            };
            match cmd_classify(&f, opts) {
                Ok(r) => SweepRow {
                    a: a.clone(),
                    integrally_closed: Some(r.pairs.classes.closure),
                    class_count_or_lower_bound: Some(r.count()),
                    complete: r.complete(),
                    not_a_group: r.not_a_group(),
                    norm_bound: Some(r.pairs.classes.bound),
                    error: None,
                },
                Err(e) => row(e.to_string()),
            }
        })
        .collect()
}

fn cs_report_text(r: &CsReport) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut s = format!("charpoly: {}\n", r.charpoly.to_text());
    s += &format!("det: {} (SL: {})\n", r.det, yn(r.is_sl));
    for c in &r.cs_conditions {
        s += &format!("k={}: det(I - ∧^k A) = {} ({})\n", c.k, c.value, if c.pass { "±1" } else { "fail" });
    }
    s += &format!("CS: {}\n", yn(r.is_cs));
    s += &format!("positive: {}\n", r.is_positive.map_or("undefined", yn));
    s
}

fn star_json(v: &StarVerdict) -> Value {
    let witness = match &v.witness {
        None => Value::Null,
        Some(Witness::Conjugator { x, inverted }) => json!({ "conjugator": matrix_json(x), "inverted": inverted }),
        Some(Witness::FieldElement { num, den, inverted }) => json!({
            "field_element": { "num": num.iter().map(ToString::to_string).collect::<Vec<_>>(), "den": den.to_string() },
            "inverted": inverted,
        }),
    };
    json!({
        "convention": convention(),
        "verdict": v.verdict,
        "route": v.route,
        "certificate": v.certificate,
        "witness": witness,
    })
}

struct Output {
    text: String,
    code: i32,
}

fn render(format: Format, json: Value, text: String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("serializable") + "\n",
        _ => text,
    }
}

fn usage(msg: impl Into<String>) -> Output {
    Output { text: msg.into() + "\n", code: exit::PARSE }
}

fn execute(cli: &Cli) -> Output {
    match &cli.command {
        Command::VerifyPoly { input } => {
            let f = match read_input(input).and_then(|t| parse_poly(&t)) {
                Ok(f) => f,
                Err(e) => return Output { text: e.message().to_string() + "\n", code: e.code() },
            };
            match is_cs_polynomial(&f) {
                Ok(r) => {
                    let code = if r.is_cs { exit::SUCCESS } else { exit::NOT_CS };
                    let json = json!({ "convention": convention(), "report": r });
                    Output { text: render(cli.format, json, cs_report_text(&r)), code }
                }
                Err(e @ (CsError::NonMonic | CsError::DegreeTooSmall(_) | CsError::ZeroConstantTerm)) => {
                    let json = json!({ "convention": convention(), "is_cs": false, "reason": e.to_string() });
                    Output { text: render(cli.format, json, format!("CS: no ({e})\n")), code: exit::NOT_CS }
                }
                Err(e) => Output { text: format!("error: {e}\n"), code: exit::FAILURE },
            }
        }
        Command::VerifyMatrix { path } => {
            let m = match fs::read_to_string(path)
                .map_err(|e| InputError::Parse(format!("{}: {e}", path.display())))
                .and_then(|t| parse_matrix(&t))
            {
                Ok(m) => m,
                Err(e) => return Output { text: e.message().to_string() + "\n", code: e.code() },
            };
            match is_cs_matrix(&m) {
                Ok(r) => {
                    let annihilates = r.charpoly.eval_matrix(&m).is_zero();
                    let code = if r.is_cs { exit::SUCCESS } else { exit::NOT_CS };
                    let json = json!({ "convention": convention(), "report": r, "charpoly_annihilates": annihilates });
                    let text = cs_report_text(&r) + &format!("f(A) = O: {}\n", if annihilates { "yes" } else { "no" });
                    Output { text: render(cli.format, json, text), code }
                }
                Err(e) => Output { text: format!("error: {e}\n"), code: exit::SHAPE },
            }
        }
        Command::Family { n, l } => match verify_family_theorem(*n, l) {
            Ok(r) => {
                let code = if r.all_pass() { exit::SUCCESS } else { exit::FAILURE };
                let mut text = format!("family n={} l={} a={}\npolynomial: {}\n", r.n, r.l, r.a, r.polynomial.to_text());
                text += &format!("first matrix:\n{}\nsecond matrix:\n{}\n", matrix_to_text(&r.m1), matrix_to_text(&r.m2));
                for c in &r.checks {
                    text += &format!("[{}] {}: {}\n", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
                }
                for w in &r.warnings {
                    text += &format!("warning: {w}\n");
                }
                let json = json!({ "convention": convention(), "all_pass": r.all_pass(), "report": r });
                Output { text: render(cli.format, json, text), code }
            }
            Err(e) => usage(format!("error: {e}")),
        },
        Command::Classify { input, n, a, bounds } => {
            let f = match (input, a) {
                (Some(inp), _) => match read_input(inp).and_then(|t| parse_poly(&t)) {
                    Ok(f) => f,
                    Err(e) => return Output { text: e.message().to_string() + "\n", code: e.code() },
                },
                (None, Some(a)) => match family_polynomial(*n, a) {
                    Ok(f) => f,
                    Err(e) => return usage(format!("error: {e}")),
                },
                (None, None) => return usage("a polynomial or --a is required"),
            };
            let opts = ClassifyOptions::from_bounds(bounds, cli.factor_budget);
            match cmd_classify(&f, &opts) {
                Ok(r) => Output { text: render(cli.format, r.to_json(), r.to_text()), code: exit::SUCCESS },
                Err(CorrespondenceError::NotCsPolynomial) => {
                    Output { text: "polynomial does not satisfy the Cappell-Shaneson conditions\n".into(), code: exit::NOT_CS }
                }
                Err(e) => Output { text: format!("error: {e}\n"), code: exit::FAILURE },
            }
        }
        Command::Sweep { n, a_min, a_max, bounds } => {
            if a_min > a_max {
                return usage("empty range: a-min > a-max");
            }
            if let Err(e) = family_spec(*n) {
                return usage(format!("error: {e}"));
            }
            let opts = ClassifyOptions::from_bounds(bounds, cli.factor_budget);
            let rows = cmd_sweep(*n, *a_min, *a_max, &opts);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "n": n, "rows": rows })).expect("serializable") + "\n",
                _ => std::iter::once(SWEEP_CSV_HEADER.to_string())
                    .chain(rows.iter().map(SweepRow::csv_line))
                    .collect::<Vec<_>>()
                    .join("\n")
                    + "\n",
            };
            Output { text, code: exit::SUCCESS }
        }
        Command::StarEq { a, b, radius, coeff_box } => {
            let load = |p: &PathBuf| {
                fs::read_to_string(p)
                    .map_err(|e| InputError::Parse(format!("{}: {e}", p.display())))
                    .and_then(|t| parse_matrix(&t))
            };
            let (ma, mb) = match (load(a), load(b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return Output { text: e.message().to_string() + "\n", code: e.code() },
            };
            if ma.rows() != mb.rows() {
                return Output { text: format!("sizes differ: {} and {}\n", ma.rows(), mb.rows()), code: exit::SHAPE };
            }
            match star_equivalent(&MatrixClassQuery::new(ma, mb, *radius, *coeff_box)) {
                Ok(v) => {
                    let code = match v.verdict {
                        Verdict::Equivalent => exit::SUCCESS,
                        Verdict::NotEquivalent => exit::NOT_EQUIVALENT,
                        Verdict::Unknown => exit::UNKNOWN,
                    };
                    let mut text = format!("{:?} via {:?}\n", v.verdict, v.route);
                    if let Some(c) = v.certificate {
                        text += &format!("certificate: {c:?}\n");
                    }
                    match &v.witness {
                        Some(Witness::Conjugator { x, inverted }) => {
                            text += &format!("conjugator (inverted: {inverted}):\n{}\n", matrix_to_text(x))
                        }
                        Some(Witness::FieldElement { num, den, inverted }) => {
                            let num: Vec<String> = num.iter().map(ToString::to_string).collect();
                            text += &format!("field element (inverted: {inverted}): ({}) / {den}\n", num.join(" "))
                        }
                        None => {}
                    }
                    if v.route == Route::CharpolyMismatch {
                        text += "characteristic polynomials are neither equal nor reciprocal\n";
                    }
                    Output { text: render(cli.format, star_json(&v), text), code }
                }
                Err(CorrespondenceError::NonInvertibleB) => {
                    Output { text: "second matrix is not in GL(n, Z)\n".into(), code: exit::SHAPE }
                }
                Err(e) => Output { text: format!("error: {e}\n"), code: exit::FAILURE },
            }
        }
    }
}

/// Runs the command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sweep { .. }) {
        eprintln!("csv output is only available for sweep");
        return exit::PARSE;
    }
    let out = execute(&cli);
    let written = match &cli.out {
        Some(p) => fs::write(p, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write output: {e}");
        return exit::FAILURE;
    }
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_text_round_trip() {
        let m = IntMatrix::from_i64(&[&[2, 3, 0, 0], &[2, 4, 1, 0], &[0, 1, 1, 1], &[1, 2, 0, 1]]);
        assert_eq!(parse_matrix(&matrix_to_text(&m)).unwrap(), m);
        assert!(matches!(parse_matrix("1 2 3\n4 5 6"), Err(InputError::Shape(_))));
        assert!(matches!(parse_matrix("1 2\n3"), Err(InputError::Parse(_))));
        assert!(matches!(parse_matrix("1 x\n3 4"), Err(InputError::Parse(_))));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let f = IntPoly::from_i64(&[1, -9, 14, -8, 1]);
        let r = is_cs_polynomial(&f).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["charpoly"], json!(["1", "-9", "14", "-8", "1"]));
        assert_eq!(v["det"], json!("1"));
    }

    #[test]
    fn cli_parses_subcommands() {
        let c = Cli::try_parse_from(["csknot", "family", "--n", "4", "--l", "-7"]).unwrap();
        assert!(matches!(c.command, Command::Family { n: 4, .. }));
        let c = Cli::try_parse_from(["csknot", "--format", "csv", "sweep", "--a-min", "-10", "--a-max", "0"]).unwrap();
        assert_eq!(c.format, Format::Csv);
        let c = Cli::try_parse_from(["csknot", "star-eq", "a.txt", "b.txt", "--box", "5"]).unwrap();
        assert!(matches!(c.command, Command::StarEq { coeff_box: 5, .. }));
    }
}
