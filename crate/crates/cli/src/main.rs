use std::path::PathBuf;
use std::process::ExitCode;

use argtab::defeat_af::Semantics;
use argtab::lang::parse_formula;
use argtab::pipeline::{parse_budget, run_source, Mode, RunConfig};
use argtab::tableau::Budget;
use clap::{Parser, ValueEnum};

/// Argumentation tableau reasoner.
#[derive(Parser, Debug)]
#[command(name = "argtab", version)]
struct Cli {
    /// Knowledge base file.
    file: PathBuf,
    #[arg(long, default_value = "defeasible")]
    mode: Mode,
    #[arg(long, default_value = "grounded")]
    semantics: Semantics,
    /// Extra query; repeatable.
    #[arg(long = "query", value_name = "FORMULA")]
    queries: Vec<String>,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Overrides such as `gamma_rounds=4,depth_cap=8`. Applied after
    /// ARGTAB_BUDGET.
    #[arg(long, value_name = "K=V,...")]
    budget: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Text,
    Json,
    Dot,
    Apx,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("argtab: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, u8), String> {
    let source = std::fs::read_to_string(&cli.file).map_err(|e| format!("{}: {e}", cli.file.display()))?;
    let mut budget = Budget::default();
    if let Ok(env) = std::env::var("ARGTAB_BUDGET") {
        budget = parse_budget(&budget, &env).map_err(|e| format!("ARGTAB_BUDGET: {e}"))?;
    }
    if let Some(spec) = &cli.budget {
        budget = parse_budget(&budget, spec).map_err(|e| e.to_string())?;
    }
    let queries = cli
        .queries
        .iter()
        .map(|q| parse_formula(q).map_err(|e| format!("query `{q}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = RunConfig { mode: cli.mode, semantics: cli.semantics, budget, queries };
    let report = run_source(&source, &cfg).map_err(|e| format!("{}: {e}", cli.file.display()))?;
    let out = match cli.emit {
        Emit::Text => report.to_text(),
        Emit::Json => format!("{:#}\n", report.to_json()),
        Emit::Dot => report.tableau_dot.clone(),
        Emit::Apx => report.graph.to_apx(),
    };
    Ok((out, report.exit_code() as u8))
}
