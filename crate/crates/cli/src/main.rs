use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use zeta_core::diagram::to_dot;
use zeta_core::eval::{
    best_scalar, denote_with_budget, equal_exact, equal_up_to_scalar, format_complex, EvalError,
    Proportional, DEFAULT_WIRE_BUDGET,
};
use zeta_core::semantics::{eval_as_map, judgement, JudgementDiagram, SemanticsError};
use zeta_core::syntax::{parse, print, Basis, Term};
use zeta_core::theory::{commutes_with_sharing, run_suite, Status};
use zeta_core::types::{infer_with, Context, InferOptions, Type, TypeError};

#[derive(Parser)]
#[command(name = "zeta", version, about = "Typecheck, translate and evaluate ζ-calculus terms")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Judgement {
    /// Term file (`-` reads stdin).
    file: PathBuf,

    /// Typing context, e.g. "x:Z:1, f:X:1->1*1".
    #[arg(long, default_value = "")]
    ctx: String,

    /// Type given to binders whose type cannot be inferred.
    #[arg(long, value_name = "TYPE")]
    default_type: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Infer the type and summarize the structural rules used.
    Check {
        #[command(flatten)]
        j: Judgement,
    },
    /// Translate a judgement to a diagram.
    Diagram {
        #[command(flatten)]
        j: Judgement,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Json)]
        format: DiagramFormat,
        /// Read a function-typed state as a map from its argument.
        #[arg(long)]
        as_map: bool,
    },
    /// Evaluate the diagram of a judgement to a matrix.
    Eval {
        #[command(flatten)]
        j: Judgement,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Json)]
        format: MatrixFormat,
        #[arg(long)]
        as_map: bool,
    },
    /// Decide whether two terms denote the same map up to a scalar.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "")]
        ctx: String,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
        /// Compare on the nose, without scalar freedom.
        #[arg(long)]
        exact: bool,
    },
    /// Check every rule schema over the standard instance pool.
    Rules {
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
        /// List every verdict, not just the failing ones.
        #[arg(long)]
        verbose: bool,
    },
    /// Check whether a judgement commutes with sharing.
    ShareCheck {
        #[command(flatten)]
        j: Judgement,
        #[arg(long, value_parser = basis, default_value = "Z")]
        basis: Basis,
        /// Copy counts to try, `A..B` inclusive or a single number.
        #[arg(long, value_parser = copies, default_value = "2..3")]
        copies: (usize, usize),
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Json,
    Text,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        Ok(_) => Err("tolerance must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn basis(s: &str) -> Result<Basis, String> {
    Basis::from_letter(s).ok_or_else(|| format!("unknown basis `{s}` (expected Z or X)"))
}

fn copies(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if a == 0 || a > b {
        return Err(format!("empty or zero copy range `{s}`"));
    }
    Ok((a, b))
}

/// A failed run: the exit code and what to report.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "parse",
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "type-mismatch",
            message: message.into(),
        }
    }
}

impl From<TypeError> for Failure {
    fn from(e: TypeError) -> Failure {
        if matches!(e, TypeError::BadContext(_)) {
            return Failure::parse(e.to_string());
        }
        Failure {
            code: 1,
            kind: "type",
            message: e.to_string(),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let (code, kind) = match e {
            EvalError::WireBudget { .. } => (3, "wire-budget"),
            _ => (1, "eval"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Failure {
        match e {
            SemanticsError::Type(e) => e.into(),
            SemanticsError::Eval(e) => e.into(),
            SemanticsError::NotFunction(_) => Failure {
                code: 1,
                kind: "type",
                message: e.to_string(),
            },
            SemanticsError::Diagram(e) => Failure {
                code: 1,
                kind: "diagram",
                message: e.to_string(),
            },
        }
    }
}

/// What a successful (or verdict-bearing) command prints, and its exit code.
struct Report {
    code: u8,
    text: String,
    json: Value,
}

fn wire_budget() -> Result<usize, Failure> {
    match std::env::var("ZETA_WIRE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::parse(format!("ZETA_WIRE_BUDGET: not a wire count: `{v}`"))),
        Err(_) => Ok(DEFAULT_WIRE_BUDGET),
    }
}

fn read_term(path: &Path) -> Result<Term, Failure> {
    let src = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    parse(&src).map_err(|e| Failure::parse(format!("{}:{e}", path.display())))
}

fn options(default_type: Option<&str>) -> Result<InferOptions, Failure> {
    let default_type = default_type
        .map(|s| zeta_core::syntax::parse_type(s).map_err(|e| Failure::parse(format!("--default-type: {e}"))))
        .transpose()?;
    Ok(InferOptions {
        default_type,
        expected: None,
    })
}

fn load(j: &Judgement) -> Result<(Context, Term, InferOptions), Failure> {
    let term = read_term(&j.file)?;
    let ctx = Context::parse(&j.ctx)?;
    Ok((ctx, term, options(j.default_type.as_deref())?))
}

fn judged(j: &Judgement, as_map: bool) -> Result<JudgementDiagram, Failure> {
    let (ctx, term, opts) = load(j)?;
    let jd = judgement(&ctx, &term, &opts)?;
    Ok(if as_map { eval_as_map(&jd)? } else { jd })
}

fn cmd_check(j: &Judgement) -> Result<Report, Failure> {
    let (ctx, term, opts) = load(j)?;
    let typing = infer_with(&ctx, &term, &opts)?;
    let summary = typing.derivation.summary();

    let c_nodes: Vec<String> = summary
        .contractions
        .iter()
        .flat_map(|(x, cs)| cs.iter().map(move |(n, b)| format!("{x}: arity {n}, basis {b}")))
        .collect();
    let w_nodes: Vec<String> = summary.weakenings.iter().map(|(x, n)| format!("{x}: {n}")).collect();
    let mut text = String::new();
    writeln!(text, "{}", typing.ty).unwrap();
    writeln!(text, "C-nodes: {{{}}}", c_nodes.join(", ")).unwrap();
    writeln!(text, "W-nodes: {{{}}}", w_nodes.join(", ")).unwrap();
    writeln!(text, "X-nodes: {}", summary.exchanges).unwrap();

    let contractions: serde_json::Map<String, Value> = summary
        .contractions
        .iter()
        .map(|(x, cs)| {
            let list = cs.iter().map(|(n, b)| json!({"arity": n, "basis": b.letter()})).collect();
            (x.clone(), Value::Array(list))
        })
        .collect();
    Ok(Report {
        code: 0,
        text,
        json: json!({
            "context": ctx.to_string(),
            "term": print(&term),
            "type": typing.ty.to_string(),
            "derivation_nodes": typing.derivation.count_nodes(),
            "contractions": contractions,
            "weakenings": summary.weakenings,
            "exchanges": summary.exchanges,
        }),
    })
}

fn cmd_diagram(j: &Judgement, format: DiagramFormat, as_map: bool, json_out: bool) -> Result<Report, Failure> {
    let jd = judged(j, as_map)?;
    let doc = serde_json::to_value(&jd).expect("judgement diagrams serialize");
    let text = match format {
        DiagramFormat::Dot if !json_out => to_dot(&jd.diagram),
        _ => serde_json::to_string_pretty(&doc).unwrap() + "\n",
    };
    Ok(Report {
        code: 0,
        text,
        json: doc,
    })
}

fn cmd_eval(j: &Judgement, format: MatrixFormat, as_map: bool) -> Result<Report, Failure> {
    let jd = judged(j, as_map)?;
    let m = denote_with_budget(&jd.diagram, wire_budget()?)?;
    let matrix_json = m.to_json();
    let mut text = match format {
        MatrixFormat::Json => matrix_json.clone(),
        MatrixFormat::Text => m.to_text(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(Report {
        code: 0,
        text,
        json: serde_json::from_str(&matrix_json).expect("matrix JSON is valid"),
    })
}

/// Types both sides in `ctx`, the right one against the left one's type
/// where possible; unresolved binders default to `1`.
fn type_pair(ctx: &Context, l: &Term, r: &Term) -> Result<(JudgementDiagram, JudgementDiagram), Failure> {
    let base = InferOptions {
        default_type: Some(Type::Numeral(1)),
        expected: None,
    };
    let lj = judgement(ctx, l, &base)?;
    let against = InferOptions {
        expected: Some(lj.ty.clone()),
        ..base.clone()
    };
    let rj = match judgement(ctx, r, &against) {
        Ok(rj) => rj,
        Err(SemanticsError::Type(TypeError::Mismatch { .. })) => judgement(ctx, r, &base)?,
        Err(e) => return Err(e.into()),
    };
    if lj.ty.unit_normal() != rj.ty.unit_normal() {
        return Err(Failure::mismatch(format!(
            "the terms have different types: {} and {}",
            lj.ty, rj.ty
        )));
    }
    Ok((lj, rj))
}

fn cmd_equiv(left: &Path, right: &Path, ctx: &str, tol: f64, exact: bool) -> Result<Report, Failure> {
    let (l, r) = (read_term(left)?, read_term(right)?);
    let ctx = Context::parse(ctx)?;
    let (lj, rj) = type_pair(&ctx, &l, &r)?;
    let budget = wire_budget()?;
    let a = denote_with_budget(&lj.diagram, budget)?;
    let b = denote_with_budget(&rj.diagram, budget)?;
    let (c, deviation) = best_scalar(&a, &b)?;

    let scalar = if exact {
        equal_exact(&a, &b, tol)?.then_some(Complex64::new(1.0, 0.0))
    } else {
        match equal_up_to_scalar(&a, &b, tol)? {
            Some(Proportional::Factor(c)) => Some(c),
            Some(Proportional::BothZero) => Some(Complex64::new(0.0, 0.0)),
            None => None,
        }
    };
    let deviation = if exact { a.max_diff(&b) } else { deviation };
    Ok(match scalar {
        Some(s) => Report {
            code: 0,
            text: format!("EQUIVALENT (scalar {})\n", format_complex(s)),
            json: json!({"verdict": "equivalent", "type": lj.ty.to_string(), "scalar": [s.re, s.im], "deviation": deviation}),
        },
        None => Report {
            code: 1,
            text: format!("DISTINCT (max deviation {deviation:.6e})\n"),
            json: json!({"verdict": "distinct", "type": lj.ty.to_string(), "best_scalar": [c.re, c.im], "deviation": deviation}),
        },
    })
}

fn cmd_rules(tol: f64, verbose: bool) -> Report {
    let verdicts = run_suite(tol);
    let mut per_rule: Vec<(String, [usize; 4])> = Vec::new();
    for v in &verdicts {
        let slot = match v.status {
            Status::Sound => 0,
            Status::Unsound => 1,
            Status::SideConditionUnmet => 2,
            Status::TypeError => 3,
        };
        match per_rule.iter_mut().find(|(r, _)| *r == v.rule) {
            Some((_, counts)) => counts[slot] += 1,
            None => {
                let mut counts = [0; 4];
                counts[slot] = 1;
                per_rule.push((v.rule.clone(), counts));
            }
        }
    }
    let bad = |s: Status| matches!(s, Status::Unsound | Status::TypeError);
    let failing = verdicts.iter().filter(|v| bad(v.status)).count();

    let mut text = String::new();
    for (rule, [sound, unsound, skipped, type_errors]) in &per_rule {
        writeln!(
            text,
            "{rule:<13} sound {sound:>3}  unsound {unsound:>3}  side-condition-unmet {skipped:>3}  type-error {type_errors:>3}"
        )
        .unwrap();
    }
    for v in verdicts.iter().filter(|v| verbose || bad(v.status)) {
        writeln!(text, "{v}").unwrap();
    }
    if failing == 0 {
        writeln!(text, "all {} instances sound or skipped", verdicts.len()).unwrap();
    } else {
        writeln!(text, "{failing} of {} instances failed", verdicts.len()).unwrap();
    }
    Report {
        code: u8::from(failing > 0),
        text,
        json: json!({
            "tolerance": tol,
            "instances": verdicts.len(),
            "failing": failing,
            "verdicts": verdicts,
        }),
    }
}

fn cmd_share_check(j: &Judgement, basis: Basis, (from, to): (usize, usize), tol: f64) -> Result<Report, Failure> {
    let (ctx, term, _) = load(j)?;
    let budget = wire_budget()?;
    let mut results = Vec::new();
    for n in from..=to {
        results.push((n, commutes_with_sharing(&ctx, &term, basis, n, tol, budget)?));
    }
    let answers: Vec<&str> = results.iter().map(|&(_, ok)| if ok { "yes" } else { "no" }).collect();
    Ok(Report {
        code: u8::from(results.iter().any(|&(_, ok)| !ok)),
        text: format!("commutes: {}\n", answers.join(", ")),
        json: json!({
            "basis": basis.letter(),
            "results": results.iter().map(|&(n, ok)| json!({"copies": n, "commutes": ok})).collect::<Vec<_>>(),
        }),
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Check { j } => cmd_check(j),
        Command::Diagram { j, format, as_map } => cmd_diagram(j, *format, *as_map, cli.json),
        Command::Eval { j, format, as_map } => cmd_eval(j, *format, *as_map),
        Command::Equiv {
            left,
            right,
            ctx,
            tol,
            exact,
        } => cmd_equiv(left, right, ctx, *tol, *exact),
        Command::Rules { tol, verbose } => Ok(cmd_rules(*tol, *verbose)),
        Command::ShareCheck {
            j,
            basis,
            copies,
            tol,
        } => cmd_share_check(j, *basis, *copies, *tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).unwrap());
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if cli.json {
                let doc = json!({"error": {"kind": f.kind, "message": f.message, "exit_code": f.code}});
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            }
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_ranges() {
        assert_eq!(copies("2..3"), Ok((2, 3)));
        assert_eq!(copies("2..=4"), Ok((2, 4)));
        assert_eq!(copies("5"), Ok((5, 5)));
        assert!(copies("3..2").is_err());
        assert!(copies("0..2").is_err());
    }

    #[test]
    fn tolerances_must_be_positive() {
        assert!(positive("1e-9").is_ok());
        assert!(positive("0").is_err());
        assert!(positive("-1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
