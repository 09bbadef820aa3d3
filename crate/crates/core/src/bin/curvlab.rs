use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use curvlab::catalog::{self, MetricSpec, Specialization, SpecializationError};
use curvlab::classify::{self, Workspace};
use curvlab::report::{self, CheckError};

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Curvature tensors and curvature-restricted structures of chart metrics")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct Select {
    /// Built-in metric: prm, gprm, gppw or ppw.
    #[arg(long, conflicts_with = "metric_file", required_unless_present = "metric_file")]
    metric: Option<String>,
    /// Metric document.
    #[arg(long)]
    metric_file: Option<PathBuf>,
    /// Constant substitution `k=v`.
    #[arg(long = "set", value_name = "K=V")]
    set: Vec<String>,
    /// Function binding `f=expr`.
    #[arg(long = "bind", value_name = "F=EXPR")]
    bind: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nonzero components of a tensor, one per symmetry orbit.
    Components {
        #[command(flatten)]
        select: Select,
        #[arg(long)]
        tensor: String,
    },
    /// Run the classification battery.
    Classify {
        #[command(flatten)]
        select: Select,
        /// Comma separated property names; all by default.
        #[arg(long, value_delimiter = ',')]
        properties: Vec<String>,
    },
    /// Check an identity such as "P.P + 1/3*Q(S,P) == 0".
    Check {
        #[command(flatten)]
        select: Select,
        identity: String,
    },
    /// Compare two metrics over the similarity and dissimilarity lists.
    Compare {
        /// Built-in name or metric document path.
        left: String,
        right: String,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl ToString) -> Failure {
    Failure::Compute(e.to_string())
}

fn load(name: Option<&str>, file: Option<&PathBuf>) -> Result<MetricSpec, Failure> {
    match (name, file) {
        (Some(n), _) => catalog::builtin(n).map_err(usage),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            catalog::load(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
        (None, None) => Err(usage("--metric or --metric-file is required")),
    }
}

fn select(s: &Select) -> Result<MetricSpec, Failure> {
    let spec = load(s.metric.as_deref(), s.metric_file.as_ref())?;
    let mut sp = Specialization::new().declaring_unknown();
    for rule in s.set.iter().chain(&s.bind) {
        let (t, v) = rule.split_once('=').ok_or_else(|| usage(format!("expected NAME=VALUE, got `{rule}`")))?;
        sp = sp.rule(t.trim(), v.trim());
    }
    if sp.rules.is_empty() {
        Ok(spec)
    } else {
        spec.specialize(&sp).map_err(|e| match e {
            SpecializationError::Singular | SpecializationError::Assumption(_) => compute(e),
            _ => usage(e),
        })
    }
}

fn by_name(s: &str) -> Result<MetricSpec, Failure> {
    if catalog::BUILTIN_NAMES.contains(&s) {
        load(Some(s), None)
    } else {
        load(None, Some(&PathBuf::from(s)))
    }
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(format: Format, text: Vec<String>, doc: Value) {
    let mut out = std::io::stdout().lock();
    let _ = match format {
        Format::Text => text.iter().try_for_each(|l| writeln!(out, "{l}")),
        Format::Machine => writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")),
    };
}

fn header(spec: &MetricSpec) -> Vec<String> {
    let mut out = vec![format!("metric: {}", spec.name)];
    let a = &spec.assumptions;
    for s in a.substitutions() {
        out.push(format!("assume: {} = {}", curvlab::expr::Expr::sym(s.target), s.value));
    }
    for e in a.nonzero() {
        out.push(format!("assume: {e} != 0"));
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let format = cli.format;
    match cli.cmd {
        Cmd::Components { select: s, tensor } => {
            let spec = select(&s)?;
            let m = spec.metric().map_err(compute)?;
            let l = report::components(&m, &tensor).map_err(|e| match e {
                report::ReportError::UnknownTensor(_) => usage(e),
                _ => compute(e),
            })?;
            let doc = report::document(&spec, vec![("components", l.to_json())]);
            emit(format, l.lines(), doc);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { select: s, properties } => {
            let spec = select(&s)?;
            let m = spec.metric().map_err(compute)?;
            let only: Vec<&str> = properties.iter().map(String::as_str).collect();
            let r = classify::classify(&m, &spec.name, (!only.is_empty()).then_some(&only[..])).map_err(|e| match e {
                classify::ClassifyError::UnknownProperty(_) => usage(e),
                _ => compute(e),
            })?;
            let mut text = header(&spec);
            for v in &r.verdicts {
                text.push(v.summary());
                text.extend(v.notes.iter().map(|n| format!("    note: {n}")));
            }
            for c in &r.cross_references {
                let mark = if c.consistent { "consistent" } else { "INCONSISTENT" };
                text.push(format!("implication {} => {}: {mark}", c.premise, c.conclusion));
            }
            let doc = report::document(&spec, report::classification_json(&r));
            emit(format, text, doc);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { select: s, identity } => {
            let spec = select(&s)?;
            let id = report::parse_identity(&identity).map_err(usage)?;
            let m = spec.metric().map_err(compute)?;
            let ws = Workspace::new(&m);
            let out = report::check_identity(&ws, &id).map_err(|e| match e {
                CheckError::UnknownName(_) | CheckError::Type(_) | CheckError::Scalar(..) => usage(e),
                _ => compute(e),
            })?;
            let mut text = header(&spec);
            let residual = out.residual.as_ref().map(|(i, e)| {
                let idx: Vec<String> = i.iter().map(usize::to_string).collect();
                (format!("[{}]", idx.join(",")), e.to_string())
            });
            match &residual {
                None => text.push(format!("{identity}: holds")),
                Some((i, e)) => text.push(format!("{identity}: fails, residual {i} = {e}")),
            }
            let check = serde_json::json!({
                "identity": identity,
                "holds": out.holds,
                "residual": residual.map(|(i, e)| serde_json::json!({ "index": i, "value": e })),
            });
            emit(format, text, report::document(&spec, vec![("check", check)]));
            Ok(if out.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Compare { left, right } => {
            let (ls, rs) = (by_name(&left)?, by_name(&right)?);
            let (lm, rm) = (ls.metric().map_err(compute)?, rs.metric().map_err(compute)?);
            let c = classify::compare(&lm, &ls.name, &rm, &rs.name).map_err(compute)?;
            let doc = serde_json::json!({
                "version": report::VERSION,
                "metric": [report::metric_json(&ls), report::metric_json(&rs)],
                "assumptions": [report::assumptions_json(&ls.assumptions), report::assumptions_json(&rs.assumptions)],
                "comparison": report::comparison_json(&c),
            });
            emit(format, report::comparison_lines(&c), doc);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
