//! End-to-end runs: classic proof, root-mode defeasible derivation, or cases.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arguments::{argument_json, render_argument_text, Argument};
use crate::cases::{case_report, CasesError};
use crate::defeasible::derive;
use crate::defeat_af::{build_af, enumerate_extensions, status_of, undercut, AttackGraph, DefeatError, Extension, Semantics, Status};
use crate::lang::{parse_knowledge_base, Formula, KnowledgeBase, LangError, Preferences};
use crate::tableau::{prove, render_dot, Budget, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classic,
    Defeasible,
    Cases,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classic" => Ok(Mode::Classic),
            "defeasible" => Ok(Mode::Defeasible),
            "cases" => Ok(Mode::Cases),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Defeat(#[from] DefeatError),
    #[error(transparent)]
    Cases(#[from] CasesError),
    #[error("budget: {0}")]
    Budget(String),
}

/// Applies `key=value,...` overrides to `base`.
pub fn parse_budget(base: &Budget, spec: &str) -> Result<Budget, RunError> {
    let mut b = base.clone();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| RunError::Budget(format!("expected key=value, got `{item}`")))?;
        let n: usize = v.trim().parse().map_err(|_| RunError::Budget(format!("`{v}` is not a number")))?;
        if n == 0 {
            return Err(RunError::Budget(format!("`{k}` must be positive")));
        }
        let slot = match k.trim() {
            "gamma_rounds" => &mut b.gamma_rounds,
            "fresh_constants" => &mut b.fresh_constants,
            "max_entries" => &mut b.max_entries,
            "depth_cap" => &mut b.depth_cap,
            "combination_cap" => &mut b.combination_cap,
            other => return Err(RunError::Budget(format!("unknown key `{other}`"))),
        };
        *slot = n;
    }
    Ok(b)
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub semantics: Semantics,
    pub budget: Budget,
    /// Added to the queries declared in the knowledge base.
    pub queries: Vec<Formula>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { mode: Mode::Defeasible, semantics: Semantics::Grounded, budget: Budget::default(), queries: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct QueryOutcome {
    pub query: Formula,
    pub arguments: Vec<Argument>,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub literals: Vec<Formula>,
    pub statuses: Vec<(Formula, Status)>,
    pub arguments: usize,
    pub attacks: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub mode: Mode,
    pub semantics: Semantics,
    pub queries: Vec<QueryOutcome>,
    /// Test-free arguments for ⊥ (local closures in cases mode).
    pub inconsistencies: Vec<Argument>,
    pub graph: AttackGraph,
    pub extensions: Vec<Extension>,
    pub cases: Vec<CaseOutcome>,
    pub limits: Limits,
    pub tableau_dot: String,
    pub preferences: Preferences,
}

fn all_queries(kb: &KnowledgeBase, extra: &[Formula]) -> Vec<Formula> {
    let mut qs = kb.queries.clone();
    for q in extra {
        if !qs.contains(q) {
            qs.push(q.clone());
        }
    }
    qs
}

/// Overall status across cases: justified only if justified in every case.
fn combine(statuses: &[Status]) -> Status {
    if statuses.is_empty() {
        Status::Unsupported
    } else if statuses.iter().all(|s| *s == Status::Justified) {
        Status::Justified
    } else if statuses.iter().any(|s| matches!(s, Status::Justified | Status::Defensible)) {
        Status::Defensible
    } else if statuses.iter().all(|s| *s == Status::Unsupported) {
        Status::Unsupported
    } else {
        Status::Overruled
    }
}

pub fn run_source(source: &str, cfg: &RunConfig) -> Result<Report, RunError> {
    run(&parse_knowledge_base(source)?, cfg)
}

pub fn run(kb: &KnowledgeBase, cfg: &RunConfig) -> Result<Report, RunError> {
    let queries = all_queries(kb, &cfg.queries);
    match cfg.mode {
        Mode::Classic => {
            let mut limits = Limits::default();
            let mut outcomes = Vec::new();
            let mut inconsistencies: Vec<Argument> = Vec::new();
            let mut dot = String::new();
            for q in &queries {
                let p = prove(kb, q, cfg.budget.clone());
                limits.merge(p.tableau.limits);
                for a in p.inconsistencies {
                    if !inconsistencies.contains(&a) {
                        inconsistencies.push(a);
                    }
                }
                if dot.is_empty() {
                    dot = render_dot(&p.tableau);
                }
                let status = if p.arguments.is_empty() { Status::Unsupported } else { Status::Justified };
                outcomes.push(QueryOutcome { query: q.clone(), arguments: p.arguments, status });
            }
            Ok(Report {
                mode: cfg.mode,
                semantics: cfg.semantics,
                queries: outcomes,
                inconsistencies,
                graph: AttackGraph::default(),
                extensions: Vec::new(),
                cases: Vec::new(),
                limits,
                tableau_dot: dot,
                preferences: kb.preferences.clone(),
            })
        }
        Mode::Defeasible => {
            let mut k = kb.clone();
            k.queries = queries.clone();
            let st = derive(&k, cfg.budget.clone());
            let pool = &st.pool;
            let all = pool
                .queries
                .iter()
                .flat_map(|(_, a)| a.iter().cloned())
                .chain(pool.rule_arguments.iter().cloned())
                .chain(pool.defeaters.iter().cloned())
                .chain(pool.inconsistencies.iter().cloned());
            let graph = build_af(all, &kb.preferences);
            let extensions = enumerate_extensions(&graph, cfg.semantics)?;
            let outcomes = pool
                .queries
                .iter()
                .map(|(q, args)| {
                    let idx: Vec<usize> = args.iter().filter_map(|a| graph.index_of(a)).collect();
                    let status = status_of(&graph, &extensions, cfg.semantics, &idx);
                    QueryOutcome { query: q.clone(), arguments: args.clone(), status }
                })
                .collect();
            Ok(Report {
                mode: cfg.mode,
                semantics: cfg.semantics,
                queries: outcomes,
                inconsistencies: pool.inconsistencies.clone(),
                graph,
                extensions,
                cases: Vec::new(),
                limits: st.limits(),
                tableau_dot: render_dot(&st.tableau),
                preferences: kb.preferences.clone(),
            })
        }
        Mode::Cases => {
            let rep = case_report(kb, &queries, cfg.semantics, cfg.budget.clone())?;
            let outcomes = queries
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    let mut args: Vec<Argument> = Vec::new();
                    for r in &rep.results {
                        for a in &r.queries[i].1 {
                            if !args.contains(a) {
                                args.push(a.clone());
                            }
                        }
                    }
                    let statuses: Vec<Status> = rep.results.iter().map(|r| r.queries[i].2).collect();
                    QueryOutcome { query: q.clone(), arguments: args, status: combine(&statuses) }
                })
                .collect();
            let cases = rep
                .results
                .iter()
                .map(|r| CaseOutcome {
                    literals: r.case.literals.clone(),
                    statuses: r.queries.iter().map(|(q, _, s)| (q.clone(), *s)).collect(),
                    arguments: r.graph.len(),
                    attacks: r.graph.attacks.len(),
                })
                .collect();
            let extensions = enumerate_extensions(&rep.merged, cfg.semantics).unwrap_or_default();
            Ok(Report {
                mode: cfg.mode,
                semantics: cfg.semantics,
                queries: outcomes,
                inconsistencies: rep.derivation.local_closures.iter().map(|l| l.argument()).collect(),
                graph: rep.merged,
                extensions,
                cases,
                limits: rep.derivation.limits,
                tableau_dot: render_dot(&rep.derivation.state.tableau),
                preferences: kb.preferences.clone(),
            })
        }
    }
}

fn indent(s: &str, n: usize) -> String {
    let pad = " ".repeat(n);
    s.lines().map(|l| format!("{pad}{l}")).collect::<Vec<_>>().join("\n")
}

fn limit_names(l: &Limits) -> Vec<&'static str> {
    let mut out = Vec::new();
    for (on, name) in [
        (l.entry_cap, "max_entries"),
        (l.fresh_cap, "fresh_constants"),
        (l.gamma_rounds, "gamma_rounds"),
        (l.combination_cap, "combination_cap"),
        (l.depth_cap, "depth_cap"),
    ] {
        if on {
            out.push(name);
        }
    }
    out
}

impl Report {
    /// Undercutters of the listed inconsistencies.
    pub fn undercutters(&self) -> Vec<Argument> {
        let mut out: Vec<Argument> = Vec::new();
        for a in &self.inconsistencies {
            for u in undercut(a, &self.preferences).unwrap_or_default() {
                if !out.contains(&u) {
                    out.push(u);
                }
            }
        }
        out
    }

    pub fn complete(&self) -> bool {
        !self.limits.incomplete()
    }

    /// 0 when every query is justified, 3 when a budget cut the search short,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.complete() {
            3
        } else if self.queries.iter().all(|q| q.status == Status::Justified) {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mode = serde_json::to_value(self.mode).unwrap();
        let sem = serde_json::to_value(self.semantics).unwrap();
        let _ = writeln!(out, "mode: {}, semantics: {}", mode.as_str().unwrap(), sem.as_str().unwrap());
        for q in &self.queries {
            let _ = writeln!(out, "\nquery {}: {}", q.query, q.status);
            for a in &q.arguments {
                let _ = writeln!(out, "{}", indent(&render_argument_text(a), 2));
            }
        }
        if !self.inconsistencies.is_empty() {
            let title = if self.mode == Mode::Cases { "local closures" } else { "inconsistencies" };
            let _ = writeln!(out, "\n{title}:");
            for a in &self.inconsistencies {
                let _ = writeln!(out, "  {a}");
            }
        }
        let und = self.undercutters();
        if !und.is_empty() {
            let _ = writeln!(out, "\nundercutters:");
            for a in &und {
                let _ = writeln!(out, "  {a}");
            }
        }
        if self.mode != Mode::Classic {
            let title = if self.mode == Mode::Cases { "merged attack graph" } else { "attack graph" };
            let _ = writeln!(out, "\n{title}: {} arguments, {} attacks", self.graph.len(), self.graph.attacks.len());
            for (i, a) in self.graph.arguments.iter().enumerate() {
                let _ = writeln!(out, "  a{i}: {a}");
            }
            for (a, b) in &self.graph.attacks {
                let _ = writeln!(out, "  a{a} -> a{b}");
            }
            for e in &self.extensions {
                let m: Vec<String> = e.members.iter().map(|i| format!("a{i}")).collect();
                let _ = writeln!(out, "  extension: {{{}}}", m.join(", "));
            }
        }
        if self.mode == Mode::Cases {
            let _ = writeln!(out, "\ncases: {}", self.cases.len());
            for (i, c) in self.cases.iter().enumerate() {
                let lits: Vec<String> = c.literals.iter().map(|l| l.to_string()).collect();
                let _ = writeln!(out, "  case {} [{}]", i + 1, lits.join(", "));
                for (q, s) in &c.statuses {
                    let _ = writeln!(out, "    {q}: {s}");
                }
            }
        }
        let lim = limit_names(&self.limits);
        if lim.is_empty() {
            let _ = writeln!(out, "\ncomplete: yes");
        } else {
            let _ = writeln!(out, "\ncomplete: {} (limits: {})", if self.complete() { "yes" } else { "no" }, lim.join(", "));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let args = |v: &[Argument]| v.iter().map(argument_json).collect::<Vec<_>>();
        let und = self.undercutters();
        json!({
            "schema": 1,
            "mode": self.mode,
            "semantics": self.semantics,
            "queries": self.queries.iter().map(|q| json!({
                "query": q.query.to_string(),
                "status": q.status,
                "arguments": args(&q.arguments),
            })).collect::<Vec<_>>(),
            "inconsistencies": args(&self.inconsistencies),
            "undercutters": args(&und),
            "attack_graph": {
                "arguments": args(&self.graph.arguments),
                "attacks": self.graph.attacks.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            },
            "extensions": self.extensions.iter().map(|e| e.members.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "cases": self.cases.iter().map(|c| json!({
                "literals": c.literals.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "statuses": c.statuses.iter().map(|(q, s)| json!({ "query": q.to_string(), "status": s })).collect::<Vec<_>>(),
                "arguments": c.arguments,
                "attacks": c.attacks,
            })).collect::<Vec<_>>(),
            "complete": self.complete(),
            "limits": self.limits,
        })
    }
}
