//! Command-line front end: `table`, `det` and `verify`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::admissible::{build_table, TypeSpec};
use crate::arith::{Poly, Var};
use crate::error::{Error, Result};
use crate::hankel::det_seq;
use crate::predictors::ClaimId;
use crate::verifier::{self, Budget, GridSpec, Instance};

/// Table row bound used unless `HANKEL_MAX_ROWS` says otherwise.
pub const DEFAULT_MAX_ROWS: usize = 140;

pub fn max_rows() -> usize {
    std::env::var("HANKEL_MAX_ROWS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ROWS)
}

/// A textual type sequence: `const:c=..`, `bc:b=..,c=..`, `list:..` or `xy`.
///
/// Parameters are integers or `sym`. A `list` repeats its last entry forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecString {
    Fixed(TypeSpec),
    List(Vec<i64>),
}

impl SpecString {
    /// The type sequence, with lists extended to cover `rows` rows.
    pub fn to_spec(&self, rows: usize) -> TypeSpec {
        match self {
            SpecString::Fixed(s) => s.clone(),
            SpecString::List(v) => {
                let last = *v.last().expect("lists are non-empty");
                let mut s = v.clone();
                s.resize(s.len().max(rows + 1), last);
                TypeSpec::from_ints(&s)
            }
        }
    }
}

fn param(value: &str, var: Var) -> Result<Poly> {
    if value == "sym" {
        return Ok(Poly::var(var));
    }
    value
        .parse::<i64>()
        .map(Poly::constant)
        .map_err(|_| Error::Parse(format!("`{value}` is neither an integer nor `sym`")))
}

fn named_params<'a>(body: &'a str, names: &[&str]) -> Result<Vec<&'a str>> {
    let mut out = vec![None; names.len()];
    for part in body.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected `name=value`, got `{part}`")))?;
        let slot = names
            .iter()
            .position(|n| *n == key.trim())
            .ok_or_else(|| Error::Parse(format!("unknown parameter `{key}`")))?;
        out[slot] = Some(value.trim());
    }
    out.into_iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| Error::Parse(format!("missing parameter `{n}`"))))
        .collect()
}

impl FromStr for SpecString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "xy" {
            return Ok(SpecString::Fixed(TypeSpec::XY));
        }
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown type `{s}`")))?;
        match kind {
            "const" => {
                let p = named_params(body, &["c"])?;
                Ok(SpecString::Fixed(TypeSpec::Constant(param(p[0], Var::C)?)))
            }
            "bc" => {
                let p = named_params(body, &["b", "c"])?;
                Ok(SpecString::Fixed(TypeSpec::bc(
                    param(p[0], Var::B)?,
                    param(p[1], Var::C)?,
                )))
            }
            "list" => {
                let values = body
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad list entry `{v}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if values.is_empty() {
                    return Err(Error::Parse("empty list".into()));
                }
                Ok(SpecString::List(values))
            }
            _ => Err(Error::Parse(format!("unknown type kind `{kind}`"))),
        }
    }
}

/// Inclusive range `a..b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span<T> {
    pub start: T,
    pub end: T,
}

impl<T: FromStr + PartialOrd + Copy> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected `a..b` or a single value, got `{s}`");
        let (a, b) = s.split_once("..").unwrap_or((s, s));
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        if start > end {
            return Err(format!("empty range `{s}`"));
        }
        Ok(Span { start, end })
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DetFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "hankel",
    version,
    about = "Exact Hankel determinants of admissible matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print rows 0..=ROWS of the admissible matrix, tab separated.
    Table {
        #[arg(long = "type", value_parser = parse_spec)]
        spec: SpecString,
        #[arg(long)]
        rows: usize,
    },
    /// Print D_{m,k,n} for n in the given range.
    Det {
        #[arg(long = "type", value_parser = parse_spec)]
        spec: SpecString,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: Span<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: DetFormat,
    },
    /// Compare computed determinants with a claim's closed form.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    claim: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<Span<i64>>,
    #[arg(long)]
    k: Option<Span<usize>>,
    #[arg(long)]
    n: Option<Span<usize>>,
    /// Replace the grid's type sequences (repeatable).
    #[arg(long = "type", value_parser = parse_spec)]
    types: Vec<SpecString>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random general-type sequences, where the claim uses them.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    budget_cells: Option<usize>,
    #[arg(long)]
    budget_secs: Option<f64>,
    /// Negate every prediction (harness self-test).
    #[arg(long, hide = true)]
    flip_sign: bool,
}

fn parse_spec(s: &str) -> std::result::Result<SpecString, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn render_table(spec: &SpecString, rows: usize) -> Result<String> {
    if rows > max_rows() {
        return Err(Error::TooLarge(rows));
    }
    let table = build_table(&spec.to_spec(rows + 1), rows)?;
    let mut out = String::new();
    for n in 0..=rows {
        let row: Vec<String> = table.row(n).iter().map(Poly::to_string).collect();
        writeln!(out, "{}", row.join("\t")).unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct DetJson {
    spec: String,
    m: i64,
    k: usize,
    values: Vec<DetJsonValue>,
}

#[derive(Serialize)]
struct DetJsonValue {
    n: usize,
    value: String,
}

fn render_det(
    spec: &SpecString,
    m: i64,
    k: usize,
    n: Span<usize>,
    format: DetFormat,
) -> Result<String> {
    let rows = (m + 2 * (n.end as i64 - 1)).max(k as i64) as usize;
    if rows > max_rows() {
        return Err(Error::TooLarge(rows));
    }
    let spec = spec.to_spec(rows + 1);
    let table = build_table(&spec, rows)?;
    let values = &det_seq(&table, m, k, n.end)?.values[n.start..=n.end];
    let strings: Vec<String> = values.iter().map(Poly::to_string).collect();
    Ok(match format {
        DetFormat::Text => format!("{}\n", strings.join(", ")),
        DetFormat::Csv => {
            let mut out = String::from("n,value\n");
            for (i, v) in strings.iter().enumerate() {
                writeln!(out, "{},{v}", n.start + i).unwrap();
            }
            out
        }
        DetFormat::Json => {
            let doc = DetJson {
                spec: spec.to_string(),
                m,
                k,
                values: strings
                    .into_iter()
                    .enumerate()
                    .map(|(i, value)| DetJsonValue {
                        n: n.start + i,
                        value,
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    })
}

fn build_grids(args: &VerifyArgs) -> Result<Vec<GridSpec>> {
    let ids: Vec<ClaimId> = match &args.claim {
        Some(c) => vec![c.parse()?],
        None => ClaimId::ALL.to_vec(),
    };
    let cap = max_rows();
    ids.into_iter()
        .map(|id| {
            let mut g = GridSpec::default_for(id, args.seed);
            if let Some(m) = args.m {
                g.m = m.start..=m.end;
            }
            if let Some(k) = args.k {
                g.k = k.start..=k.end;
            }
            if let Some(n) = args.n {
                g.n = n.start..=n.end;
            }
            if !args.types.is_empty() {
                let rows = cap + 1;
                g.instances = args
                    .types
                    .iter()
                    .map(|t| Instance::new(t.to_spec(rows)))
                    .collect();
                g.random = None;
            }
            if let (Some(count), Some(r)) = (args.seeds, g.random.as_mut()) {
                r.1 = count;
            }
            g.flip_sign = args.flip_sign;
            if g.max_rows_needed() > cap {
                return Err(Error::TooLarge(g.max_rows_needed()));
            }
            Ok(g)
        })
        .collect()
}

fn run_verify(args: &VerifyArgs) -> Result<(String, i32)> {
    let grids = build_grids(args)?;
    let budget = Budget {
        max_cells: args.budget_cells,
        max_time: args.budget_secs.map(Duration::from_secs_f64),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| Error::Parse(e.to_string()))?;
    let reports = pool.install(|| verifier::run_grids(&grids, budget));
    let code = verifier::exit_code(&reports);
    let out = match args.format {
        ReportFormat::Text => verifier::render_text(&reports),
        ReportFormat::Json => verifier::render_json(&reports, args.seed) + "\n",
    };
    Ok((out, code))
}

fn describe(e: &Error) -> String {
    match e {
        Error::TooLarge(rows) => format!(
            "needs {rows} table rows, above the bound {}; raise HANKEL_MAX_ROWS to allow it",
            max_rows()
        ),
        other => other.to_string(),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Table { spec, rows } => render_table(spec, *rows).map(|s| (s, 0)),
        Command::Det {
            spec,
            m,
            k,
            n,
            format,
        } => render_det(spec, *m, *k, *n, *format).map(|s| (s, 0)),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            code
        }
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            2
        }
    }
}
