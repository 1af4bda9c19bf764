//! Command-line front end.

mod syntax;

pub use syntax::{parse_expr, print_expr};

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{DiffPermPoly, ProductTag};
use crate::error::Error;
use crate::identity::{
    check_identity, check_identity_delta, eval, run_all, run_suite, CaseResult, EvalContext, Expr,
    ScalarLit, SuiteId, SuiteReport,
};
use crate::reduction::{reduce, ReductionResult, Rule};
use crate::span::{verify_dimension, DimReport, Variant};
use crate::witt::{
    structure_table, verify_tables, Kind, StructureTable, TableVerification, WittElement,
    VERIFY_BOUND,
};

/// Exit status for a failed verification.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for bad usage or unreadable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "permdiff",
    version,
    about = "Exact computations in free differential perm algebras"
)]
pub struct Cli {
    /// Suppress the summary on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a built-in identity suite or an identity read from a file.
    Check {
        /// Suite letter or name, or `all`.
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        suite: Option<String>,
        /// File holding one expression.
        #[arg(long)]
        expr: Option<PathBuf>,
        /// Product behind `assoc` and `bracket`.
        #[arg(long)]
        product: Option<String>,
        /// Evaluate derivations as δ-derivations.
        #[arg(long)]
        delta: bool,
    },
    /// Compare generated-subalgebra dimensions with their closed forms.
    Dim {
        #[arg(long)]
        variant: String,
        /// A degree `n` or an inclusive range `a..b`.
        #[arg(long = "n")]
        n: String,
    },
    /// Emit or verify perm-Witt structure constants.
    Table {
        #[arg(long = "n", default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "lie")]
        kind: String,
        #[arg(long, default_value_t = VERIFY_BOUND)]
        bound: u32,
        /// Check the reference rules instead of listing brackets.
        #[arg(long)]
        verify: bool,
    },
    /// Run the identity-reduction procedure on a polynomial.
    Reduce {
        input: String,
        /// Read `input` as a file name.
        #[arg(long)]
        file: bool,
    },
    /// Print the normal form of an expression.
    Expand {
        input: String,
        #[arg(long)]
        file: bool,
        /// Number of derivations.
        #[arg(long, default_value_t = 1)]
        arity: usize,
        /// Product behind `assoc` and `bracket`.
        #[arg(long)]
        product: Option<String>,
    },
}

/// Everything a run produced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

struct Report {
    ok: bool,
    stdout: String,
    summary: String,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Output {
                code,
                stdout,
                stderr,
            };
        }
    };
    dispatch(&cli)
}

pub fn dispatch(cli: &Cli) -> Output {
    match execute(cli) {
        Ok(r) => Output {
            code: if r.ok { 0 } else { EXIT_FAILURE },
            stdout: r.stdout,
            stderr: if cli.quiet { String::new() } else { r.summary },
        },
        Err(f) => Output {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn read_input(input: &str, file: bool) -> Result<String, Failure> {
    if file {
        fs::read_to_string(input).map_err(|e| usage(format!("{input}: {e}")))
    } else {
        Ok(input.to_string())
    }
}

fn parse_product(p: &Option<String>) -> Result<Option<ProductTag>, Failure> {
    p.as_deref()
        .map(ProductTag::from_str)
        .transpose()
        .map_err(Failure::from)
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Check {
            suite,
            expr,
            product,
            delta,
        } => match (suite, expr) {
            (Some(id), _) => check_suites(id, cli.format),
            (None, Some(path)) => {
                let text = read_input(&path.to_string_lossy(), true)?;
                check_file(
                    &path.to_string_lossy(),
                    &text,
                    parse_product(product)?,
                    *delta,
                    cli.format,
                )
            }
            (None, None) => Err(usage("check needs --suite or --expr")),
        },
        Command::Dim { variant, n } => dims(variant, n, cli.format),
        Command::Table {
            n,
            kind,
            bound,
            verify,
        } => {
            let kind = Kind::from_str(kind)?;
            if *verify {
                verify_report(verify_tables()?, cli.format)
            } else {
                table_report(structure_table(*n, kind, *bound)?, cli.format)
            }
        }
        Command::Reduce { input, file } => {
            let e = parse_expr(&read_input(input, *file)?)?;
            let f = eval(
                &e,
                &crate::identity::generator_substitution(max_var(&e), 1),
                &EvalContext::single(),
            )?;
            reduce_report(&reduce(&f)?, cli.format)
        }
        Command::Expand {
            input,
            file,
            arity,
            product,
        } => {
            let e = parse_expr(&read_input(input, *file)?)?;
            let ctx = EvalContext {
                arity: *arity,
                product: parse_product(product)?,
                delta_value: None,
            };
            let f = eval(
                &e,
                &crate::identity::generator_substitution(max_var(&e), *arity),
                &ctx,
            )?;
            expand_report(&e, &f, cli.format)
        }
    }
}

fn max_var(e: &Expr) -> u32 {
    e.variables().last().copied().unwrap_or(0)
}

fn case_line(out: &mut String, c: &CaseResult) {
    let status = if c.passed() { "ok" } else { "MISMATCH" };
    let _ = write!(
        out,
        "{:<28} expected={:<5} got={:<5} {status}",
        c.name, c.expected, c.got
    );
    if let Some(w) = &c.witness {
        let _ = write!(out, "  witness: {} {}", w.coeff, w.monomial);
    }
    out.push('\n');
}

fn suites_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "suite {}", r.suite);
        r.cases.iter().for_each(|c| case_line(&mut out, c));
    }
    out
}

fn check_suites(id: &str, format: Format) -> Result<Report, Failure> {
    let reports = if id == "all" {
        run_all()?
    } else {
        vec![run_suite(SuiteId::from_str(id)?)?]
    };
    let cases: usize = reports.iter().map(|r| r.cases.len()).sum();
    let failed: Vec<&str> = reports
        .iter()
        .flat_map(|r| {
            r.cases
                .iter()
                .filter(|c| !c.passed())
                .map(|c| c.name.as_str())
        })
        .collect();
    let ok = failed.is_empty();
    let summary = if ok {
        format!(
            "{} suite(s), {cases} case(s): all verdicts as expected\n",
            reports.len()
        )
    } else {
        format!(
            "{} of {cases} case(s) disagree: {}\n",
            failed.len(),
            failed.join(", ")
        )
    };
    let stdout = match format {
        Format::Json => json(&reports),
        Format::Text => suites_text(&reports),
    };
    Ok(Report {
        ok,
        stdout,
        summary,
    })
}

fn has_delta(e: &Expr) -> bool {
    match e {
        Expr::Scale(ScalarLit::Delta, _) => true,
        Expr::Var(_) => false,
        Expr::Mul(a, b) | Expr::Op(_, a, b) | Expr::Bracket(a, b) => has_delta(a) || has_delta(b),
        Expr::Der(_, a) | Expr::Star(a) | Expr::Scale(_, a) => has_delta(a),
        Expr::Sum(items) => items.iter().any(has_delta),
        Expr::Assoc(a, b, c) => has_delta(a) || has_delta(b) || has_delta(c),
    }
}

fn check_file(
    name: &str,
    text: &str,
    product: Option<ProductTag>,
    delta: bool,
    format: Format,
) -> Result<Report, Failure> {
    let e = parse_expr(text)?;
    let k = max_var(&e);
    let ctx = EvalContext {
        product,
        ..EvalContext::single()
    };
    let verdict = if delta || has_delta(&e) {
        check_identity_delta(&e, k, &ctx)?
    } else {
        check_identity(&e, k, &ctx)?
    };
    let report = SuiteReport {
        suite: "expr".into(),
        cases: vec![CaseResult {
            name: name.to_string(),
            expected: true,
            got: verdict.is_identity,
            witness: verdict.witness,
        }],
    };
    let ok = report.passed();
    let summary = if ok {
        format!("{name}: identity holds\n")
    } else {
        format!("{name}: not an identity\n")
    };
    let stdout = match format {
        Format::Json => json(&report),
        Format::Text => suites_text(std::slice::from_ref(&report)),
    };
    Ok(Report {
        ok,
        stdout,
        summary,
    })
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("invalid degree range `{s}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn dims(variant: &str, range: &str, format: Format) -> Result<Report, Failure> {
    let variant = Variant::from_str(variant)?;
    let (a, b) = parse_range(range)?;
    let reports: Vec<DimReport> = (a..=b)
        .map(|n| verify_dimension(n, variant))
        .collect::<crate::Result<_>>()?;
    let ok = reports.iter().all(|r| r.ok);
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.ok)
        .map(|r| r.n.to_string())
        .collect();
    let summary = if ok {
        format!("{variant}: dimensions match for n = {a}..{b}\n")
    } else {
        format!("{variant}: mismatch at n = {}\n", bad.join(", "))
    };
    let stdout = match format {
        Format::Json => json(&reports),
        Format::Text => reports
            .iter()
            .map(|r| {
                format!(
                    "n={} variant={} formula={} rank_closure={} rank_S={} ok={}\n",
                    r.n, r.variant, r.formula, r.rank_closure, r.rank_s, r.ok
                )
            })
            .collect(),
    };
    Ok(Report {
        ok,
        stdout,
        summary,
    })
}

fn element_text(w: &WittElement) -> String {
    if w.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = w
        .terms()
        .map(|(b, c)| {
            let e: Vec<String> = b.e.iter().map(u32::to_string).collect();
            format!("({c}) E[{}; {},{}]", e.join(","), b.alpha, b.i)
        })
        .collect();
    parts.join(" + ")
}

fn table_report(t: StructureTable, format: Format) -> Result<Report, Failure> {
    let summary = format!(
        "W_perm({}) {} bracket: {} entries, {} block rule(s) detected\n",
        t.n,
        t.kind,
        t.entries.len(),
        t.rules.len()
    );
    let stdout = match format {
        Format::Json => json(&t),
        Format::Text => {
            let mut out = String::new();
            for r in &t.rules {
                let _ = writeln!(
                    out,
                    "block ({},{}) x ({},{}): {}",
                    r.left.alpha, r.left.i, r.right.alpha, r.right.i, r.formula
                );
            }
            for e in &t.entries {
                let l = WittElement::basis(e.left.clone());
                let r = WittElement::basis(e.right.clone());
                let _ = writeln!(
                    out,
                    "[{}, {}] = {}",
                    element_text(&l),
                    element_text(&r),
                    element_text(&e.result)
                );
            }
            out
        }
    };
    Ok(Report {
        ok: true,
        stdout,
        summary,
    })
}

fn verify_report(v: TableVerification, format: Format) -> Result<Report, Failure> {
    let mut summary = format!("{} of {} table instances agree\n", v.passed, v.total);
    for r in v.rules.iter().filter(|r| r.passed != r.total) {
        let _ = writeln!(
            summary,
            "  {}: {}/{} agree; {}",
            r.name, r.passed, r.total, r.formula
        );
    }
    for s in v.skew_audit.iter().filter(|s| !s.consistent) {
        let _ = writeln!(
            summary,
            "  {} and {} are not skew-consistent ({} instances)",
            s.rule, s.partner, s.violations
        );
    }
    let stdout = match format {
        Format::Json => json(&v),
        Format::Text => {
            let mut out = String::new();
            for r in &v.rules {
                let _ = writeln!(
                    out,
                    "{:<16} {:>3}/{:<3} {}",
                    r.name, r.passed, r.total, r.formula
                );
            }
            for s in &v.skew_audit {
                let _ = writeln!(
                    out,
                    "skew {} / {}: {}",
                    s.rule,
                    s.partner,
                    if s.consistent {
                        "consistent"
                    } else {
                        "inconsistent"
                    }
                );
            }
            for e in v.entries.iter().filter(|e| !e.ok) {
                let _ = writeln!(
                    out,
                    "mismatch {} {:?}: computed {} expected {}",
                    e.rule,
                    e.params,
                    element_text(&e.computed),
                    element_text(&e.expected)
                );
            }
            out
        }
    };
    Ok(Report {
        ok: v.all_ok,
        stdout,
        summary,
    })
}

fn rule_text(rule: &Rule) -> String {
    match rule {
        Rule::Input => "input".into(),
        Rule::RightMultiply { var } => format!("right-multiply by x{var}"),
        Rule::H0 { k, y, z } => format!("h0: x{k} -> x{y}, x{z}"),
        Rule::HStep { y, z, u, t } => format!("step in x{t} (y=x{y}, z=x{z}, u=x{u})"),
        Rule::FinalStep { y, z, u, t } => format!("final step in x{t} (y=x{y}, z=x{z}, u=x{u})"),
        Rule::DeriveUnderived { vars } => {
            let v: Vec<String> = vars.iter().map(|v| format!("x{v}")).collect();
            format!("derive {}", v.join(", "))
        }
    }
}

#[derive(Serialize)]
struct NumberedStep<'a> {
    step: usize,
    #[serde(flatten)]
    inner: &'a crate::reduction::TraceStep,
}

#[derive(Serialize)]
struct ReduceView<'a> {
    outcome: crate::reduction::Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    consequence: Option<&'a crate::reduction::Certificate>,
    passes: &'a [crate::reduction::PassRecord],
    trace: Vec<NumberedStep<'a>>,
}

fn reduce_report(r: &ReductionResult, format: Format) -> Result<Report, Failure> {
    let summary = match &r.consequence {
        Some(c) => format!("consequence: {} ({} steps)\n", c.poly, r.trace.len()),
        None => "input lies in the right annihilator\n".to_string(),
    };
    let stdout = match format {
        Format::Json => json(&ReduceView {
            outcome: r.outcome,
            consequence: r.consequence.as_ref(),
            passes: &r.passes,
            trace: r
                .trace
                .iter()
                .enumerate()
                .map(|(step, inner)| NumberedStep { step, inner })
                .collect(),
        }),
        Format::Text => {
            let mut out = String::new();
            for (i, s) in r.trace.iter().enumerate() {
                let _ = writeln!(out, "{i:>3}. {}: {}", rule_text(&s.rule), s.poly);
            }
            let _ = writeln!(out, "outcome: {:?}", r.outcome);
            out
        }
    };
    Ok(Report {
        ok: true,
        stdout,
        summary,
    })
}

#[derive(Serialize)]
struct ExpandView<'a> {
    expr: String,
    poly: &'a DiffPermPoly,
    terms: usize,
}

fn expand_report(e: &Expr, f: &DiffPermPoly, format: Format) -> Result<Report, Failure> {
    let n = f.terms().count();
    let stdout = match format {
        Format::Json => json(&ExpandView {
            expr: print_expr(e),
            poly: f,
            terms: n,
        }),
        Format::Text => format!("{f}\n"),
    };
    Ok(Report {
        ok: true,
        stdout,
        summary: format!("{n} term(s)\n"),
    })
}

/// Caps the global thread pool at `PERMDIFF_THREADS` when set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("PERMDIFF_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("PERMDIFF_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::suite_cases;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_expr("x1 * d(x2)").unwrap(),
            Expr::mul(Expr::var(1), Expr::der(Expr::var(2)))
        );
        assert_eq!(
            parse_expr("loz(x1, loz(x2, x3))").unwrap(),
            Expr::op(
                ProductTag::Loz,
                Expr::var(1),
                Expr::op(ProductTag::Loz, Expr::var(2), Expr::var(3))
            )
        );
        assert_eq!(
            parse_expr("x1'' ").unwrap(),
            Expr::der(Expr::der(Expr::var(1)))
        );
        assert_eq!(
            parse_expr("x1 - 3/2 * x2").unwrap(),
            Expr::sub(
                Expr::var(1),
                Expr::scale(crate::scalar::ratio(3, 2), Expr::var(2))
            )
        );
    }

    #[test]
    fn parse_errors() {
        match parse_expr("x1 *") {
            Err(Error::Syntax {
                line: 1, column: 5, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match parse_expr("x1 +\n  foo(x1, x2)") {
            Err(Error::UnknownOperation {
                name,
                line: 2,
                column: 3,
            }) => assert_eq!(name, "foo"),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("(x1").is_err());
        assert!(parse_expr("x1 * 2").is_err());
        assert!(parse_expr("1/0 * x1").is_err());
    }

    #[test]
    fn print_round_trips_suite_expressions() {
        for id in SuiteId::ALL {
            for case in suite_cases(id) {
                let text = print_expr(&case.expr);
                assert_eq!(
                    parse_expr(&text).unwrap(),
                    case.expr,
                    "{}: {text}",
                    case.name
                );
            }
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").ok(), Some((2, 5)));
        assert_eq!(parse_range("4").ok(), Some((4, 4)));
        assert!(parse_range("5..2").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run(["permdiff", "check", "--suite", "a", "--quiet"]).code,
            0
        );
        assert_eq!(
            run(["permdiff", "check", "--suite", "zzz"]).code,
            EXIT_USAGE
        );
        assert_eq!(run(["permdiff", "nonsense"]).code, EXIT_USAGE);
        assert_eq!(run(["permdiff", "expand", "x1 *"]).code, EXIT_USAGE);
        let out = run([
            "permdiff",
            "expand",
            "x1 * x2 * x3 - x2 * x1 * x3",
            "--format",
            "text",
        ]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "0\n"));
    }
}
