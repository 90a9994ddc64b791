use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncf_kit::count::{self, bounds_report};
use ncf_kit::field::is_prime;
use ncf_kit::oracle::{self, DEFAULT_DESCRIPTOR_BUDGET, DEFAULT_FUNCTION_BUDGET};
use ncf_kit::param::{check_parametrization, literal_divergence, ParamReport, Reading, Relation};
use ncf_kit::{detect, Detection, NcfDescriptor, NcfError, PolyR, PrimeField, TruthTable};
use serde_json::{json, Value};

const SCHEMA: &str = "ncf-kit/1";

/// Nested canalyzing functions over prime fields: counting, construction,
/// detection and brute-force verification.
#[derive(Parser)]
#[command(name = "ncf-kit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact NCF, RNCF and INCF counts for one arity.
    Count {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        out: Output,
    },
    /// NCF(n) for n = 1..=max-n.
    Table {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Sweep every descriptor and count the distinct functions.
    Enumerate {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Maximum number of descriptors to sweep.
        #[arg(long, default_value_t = DEFAULT_DESCRIPTOR_BUDGET)]
        budget: u64,
        /// Stream the distinct tables: a `p n` header, then one value vector per line.
        #[arg(long)]
        emit: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run the detector on every function F_p^n -> F_p.
    Census {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Maximum number of functions to scan.
        #[arg(long, default_value_t = DEFAULT_FUNCTION_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether a truth table is nested canalyzing.
    ///
    /// Prints `not-ncf`, or `ncf` followed by one descriptor. Descriptors are not
    /// unique; the one reported is the first found when trying variables in
    /// ascending index and interval sets in the order P0..P(p-2), S1..S(p-1).
    Detect {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Convert a truth table to its reduced polynomial.
    Interpolate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Sample a descriptor and print its truth table.
    RandomNcf {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Check the upper bounds on RNCF exactly and report the log-ratio trend.
    Bounds {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
        max_n: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Check a polynomial's coefficients against a descriptor.
    ///
    /// The descriptor is given as `sigma=2,1 sets=P0,S2 b=0,1,2`. Without
    /// --input the descriptor's own polynomial is checked.
    CheckParam {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        /// Optional arity; must match the descriptor when given.
        #[arg(long)]
        n: Option<usize>,
        /// Descriptor words.
        #[arg(required = true, num_args = 1..)]
        descriptor: Vec<String>,
        /// Polynomial (or truth table) to check; text or JSON.
        #[arg(long)]
        input: Option<String>,
        /// Also apply the verbatim textbook reading and report where it diverges.
        #[arg(long)]
        literal: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Emit versioned JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Input {
    /// Input file in text or JSON form; `-` or absent reads standard input.
    #[arg(long)]
    input: Option<String>,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not a prime"))
    }
}

enum CliError {
    Ncf(NcfError),
    Io(String, io::Error),
}

impl From<NcfError> for CliError {
    fn from(e: NcfError) -> Self {
        CliError::Ncf(e)
    }
}

fn read_input(path: Option<&str>) -> Result<String, CliError> {
    let mut buf = String::new();
    match path {
        None | Some("-") => io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io("<stdin>".into(), e))?,
        Some(p) => {
            buf = std::fs::read_to_string(p).map_err(|e| CliError::Io(p.into(), e))?;
            buf.len()
        }
    };
    Ok(buf)
}

fn with_schema(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    v.to_string() + "\n"
}

fn table_field(p: u64) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

fn run(cli: Cli) -> Result<String, CliError> {
    let mut out = String::new();
    match cli.command {
        Command::Count { p, n, out: o } => {
            let n = n as usize;
            let rncf = count::rncf(p, n)?;
            let ncf = count::ncf_count(p, n)?;
            let incf = count::incf(p, n)?;
            if o.json {
                out = with_schema(json!({
                    "p": p, "n": n,
                    "ncf": ncf.to_string(), "rncf": rncf.to_string(), "incf": incf.to_string(),
                }));
            } else {
                writeln!(out, "p     {p}").unwrap();
                writeln!(out, "n     {n}").unwrap();
                writeln!(out, "ncf   {ncf}").unwrap();
                writeln!(out, "rncf  {rncf}").unwrap();
                writeln!(out, "incf  {incf}").unwrap();
            }
        }
        Command::Table { p, max_n, out: o } => {
            let rows: Vec<(usize, String)> = (1..=max_n as usize)
                .map(|n| Ok((n, count::ncf_count(p, n)?.to_string())))
                .collect::<Result<_, NcfError>>()?;
            if o.json {
                let rows: Vec<Value> = rows.iter().map(|(n, c)| json!({"n": n, "ncf": c})).collect();
                out = with_schema(json!({"p": p, "rows": rows}));
            } else {
                let n_width = max_n.to_string().len().max(1);
                let c_width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max("NCF(n)".len());
                writeln!(out, "# p = {p}").unwrap();
                writeln!(out, "{:>n_width$}  {:>c_width$}", "n", "NCF(n)").unwrap();
                for (n, c) in &rows {
                    writeln!(out, "{n:>n_width$}  {c:>c_width$}").unwrap();
                }
            }
        }
        Command::Enumerate {
            p,
            n,
            budget,
            emit,
            out: o,
        } => {
            let n = n as usize;
            let r = oracle::enumerate_ncfs(p, n, budget, emit)?;
            if let Some(tables) = &r.tables {
                writeln!(out, "{p} {n}").unwrap();
                for t in tables {
                    out.push_str(&t.values_line());
                    out.push('\n');
                }
            } else if o.json {
                out = with_schema(r.summary_json());
            } else {
                writeln!(
                    out,
                    "p={p} n={n} descriptors={} distinct={}",
                    r.descriptor_count, r.distinct_function_count
                )
                .unwrap();
            }
        }
        Command::Census { p, n, budget, out: o } => {
            let n = n as usize;
            let found = oracle::census(p, n, budget)?;
            let total = oracle::function_space_size(p, n);
            if o.json {
                out = with_schema(json!({
                    "p": p, "n": n, "functions": total.to_string(), "ncf": found.to_string(),
                }));
            } else {
                writeln!(out, "p={p} n={n} functions={total} ncf={found}").unwrap();
            }
        }
        Command::Detect { input, out: o } => {
            let table = TruthTable::parse_any(&read_input(input.input.as_deref())?)?;
            let det = detect(&table);
            if o.json {
                out = with_schema(match &det {
                    Detection::Ncf(d) => json!({"ncf": true, "descriptor": d.to_json(), "text": d.to_string()}),
                    Detection::NotNcf => json!({"ncf": false}),
                });
            } else {
                match det {
                    Detection::Ncf(d) => writeln!(out, "ncf {d}").unwrap(),
                    Detection::NotNcf => writeln!(out, "not-ncf").unwrap(),
                }
            }
        }
        Command::Interpolate { input, out: o } => {
            let table = TruthTable::parse_any(&read_input(input.input.as_deref())?)?;
            let poly = PolyR::interpolate(&table);
            out = if o.json {
                with_schema(poly.to_json())
            } else {
                poly.to_text()
            };
        }
        Command::RandomNcf { p, n, seed, out: o } => {
            let field = table_field(p)?;
            let d = oracle::random_ncf(field, n as usize, seed)?;
            let table = d.build_table()?;
            if o.json {
                let mut v = table.to_json();
                v["descriptor"] = d.to_json();
                v["text"] = Value::String(d.to_string());
                out = with_schema(v);
            } else {
                out = table.to_text();
            }
        }
        Command::Bounds { p, max_n, out: o } => {
            let report = bounds_report(p, max_n as usize)?;
            if o.json {
                let mut v = serde_json::to_value(&report).expect("report serializes");
                v["all_bounds_hold"] = Value::Bool(report.all_bounds_hold());
                out = with_schema(v);
            } else {
                writeln!(out, "# p = {p}").unwrap();
                writeln!(
                    out,
                    "n  single-term  rncf(n,n)<=2^2n(p-1)^(n+2)  rncf<=2^(n(n-1))(p-1)^2n log_p(NCF)-p^n"
                )
                .unwrap();
                let mark = |b: bool| if b { "ok" } else { "FAIL" };
                for r in &report.rows {
                    writeln!(
                        out,
                        "{:<2} {:<12} {:<28} {:<24} {:.6}",
                        r.n,
                        mark(r.single_term_bound_holds),
                        mark(r.rncf_nn_bound_holds),
                        mark(r.rncf_bound_holds),
                        r.log_ratio
                    )
                    .unwrap();
                }
                writeln!(out, "all bounds hold: {}", report.all_bounds_hold()).unwrap();
                writeln!(out, "log-ratio strictly decreasing: {}", report.log_ratio_decreasing).unwrap();
            }
        }
        Command::CheckParam {
            p,
            n,
            descriptor,
            input,
            literal,
            out: o,
        } => {
            let field = table_field(p)?;
            let d = NcfDescriptor::parse(field, &descriptor.join(" "))?;
            if let Some(n) = n {
                if n != d.arity() {
                    return Err(NcfError::ArityMismatch {
                        expected: n,
                        found: d.arity(),
                    }
                    .into());
                }
            }
            let poly = match input {
                Some(path) => parse_poly_or_table(&read_input(Some(&path))?)?,
                None => d.build_polynomial()?,
            };
            let report = check_parametrization(&poly, &d, Reading::Corrected)?;
            let lit = if literal {
                Some((
                    check_parametrization(&poly, &d, Reading::Literal)?,
                    literal_divergence(&poly, &d)?,
                ))
            } else {
                None
            };
            if o.json {
                let mut v =
                    json!({"descriptor": d.to_string(), "all_pass": report.all_pass(), "report": report.to_json()});
                if let Some((lr, div)) = &lit {
                    v["literal"] = lr.to_json();
                    v["literal_all_pass"] = Value::Bool(lr.all_pass());
                    v["diverging"] = serde_json::to_value(div).expect("relations serialize");
                }
                out = with_schema(v);
            } else {
                writeln!(out, "descriptor: {d}").unwrap();
                render_report(&mut out, &report);
                if let Some((lr, div)) = &lit {
                    render_report(&mut out, lr);
                    let names: Vec<String> = div.iter().map(relation_name).collect();
                    writeln!(
                        out,
                        "diverging: {}",
                        if names.is_empty() {
                            "none".into()
                        } else {
                            names.join(", ")
                        }
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn relation_name(r: &Relation) -> String {
    serde_json::to_value(r)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn render_report(out: &mut String, report: &ParamReport) {
    let reading = match report.reading {
        Reading::Corrected => "corrected",
        Reading::Literal => "literal",
    };
    writeln!(out, "reading: {reading}").unwrap();
    for r in Relation::ALL {
        writeln!(
            out,
            "  {:<18} {}",
            relation_name(&r),
            if report.passes(r) { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    for v in &report.violations {
        let exps: Vec<String> = v.exponents.iter().map(|e| e.to_string()).collect();
        let expected = v.expected.map_or("undefined".to_string(), |e| e.to_string());
        writeln!(
            out,
            "  violation {} at ({}): expected {expected}, found {}",
            relation_name(&v.relation),
            exps.join(","),
            v.found
        )
        .unwrap();
    }
    writeln!(out, "  result: {}", if report.all_pass() { "all-pass" } else { "fail" }).unwrap();
}

/// Accepts a polynomial (text with `:` terms, or JSON with `terms`) or a truth table.
fn parse_poly_or_table(src: &str) -> Result<PolyR, NcfError> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') {
        if trimmed.contains("\"terms\"") {
            PolyR::from_json(src)
        } else {
            Ok(PolyR::interpolate(&TruthTable::from_json(src)?))
        }
    } else if src.lines().skip(1).any(|l| l.contains(':')) {
        PolyR::parse_text(src)
    } else {
        Ok(PolyR::interpolate(&TruthTable::parse_text(src)?))
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("NCF_KIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Ncf(e @ NcfError::BudgetExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Ncf(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(path, e)) => {
            eprintln!("error: cannot read {path}: {e}");
            ExitCode::from(1)
        }
    }
}
