//! Reasoning by cases: mutually exclusive splits, antecedent tests posted at
//! leaves with retraction on failure, and local closures propagated to the
//! root.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::arguments::{Argument, Conclusion, Support, SupportElement, TestId};
use crate::defeasible::{DerivationState, FiringRecord};
use crate::defeat_af::{build_af, enumerate_extensions, status_of, AttackGraph, DefeatError, Extension, Semantics, Status};
use crate::lang::{Formula, KnowledgeBase, RuleKey};
use crate::tableau::{exclusive_split, minimal_family, preorder, product, Budget, Entry, Expansion, Limits, NodeId, Tableau};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CasesError {
    #[error("rule `{0}` has a universal claim in its antecedent; not supported in cases mode")]
    UniversalAntecedent(String),
    #[error("{0} is not a disjunction, implication or negated conjunction")]
    NotExclusive(String),
    #[error(transparent)]
    Defeat(#[from] DefeatError),
}

/// The three mutually exclusive children of `(S, φ ∨ ψ)`, `(S, φ → ψ)` or
/// `(S, ¬(φ ∧ ψ))`.
pub fn exclusive_expand(e: &Entry) -> Result<[Entry; 3], CasesError> {
    let fs = exclusive_split(&e.formula).map_err(|f| CasesError::NotExclusive(f.to_string()))?;
    Ok(fs.map(|f| Entry::new(e.support.clone(), f)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Succeeded,
    Retracted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSearchFrame {
    pub leaf: NodeId,
    pub rule: RuleKey,
    pub posted_test: TestId,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalClosure {
    pub support: Support,
}

impl LocalClosure {
    pub fn argument(&self) -> Argument {
        Argument::new(self.support.clone(), Conclusion::Falsum)
    }
}

/// An open case: the node where a Σ-consistent branch of the exclusive
/// tableau ended before any rule fired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub node: NodeId,
    /// Literals on the branch derived from Σ alone, excluding Σ itself.
    pub literals: Vec<Formula>,
}

#[derive(Clone, Debug)]
pub struct CaseDerivation {
    pub state: DerivationState,
    pub cases: Vec<Case>,
    pub frames: Vec<CaseSearchFrame>,
    pub local_closures: Vec<LocalClosure>,
    /// Budget flags, including those raised inside retracted frames.
    pub limits: Limits,
}

fn premise_only(s: &Support) -> bool {
    s.iter().all(|e| matches!(e, SupportElement::Premise(_)))
}

fn sigma_open(t: &Tableau, leaf: NodeId) -> bool {
    !t.node(leaf).closures.iter().any(premise_only)
}

fn defining_literals(t: &Tableau, kb: &KnowledgeBase, node: NodeId) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for e in t.branch_entries(node) {
        let e = t.entry(e);
        if e.formula.is_literal() && premise_only(&e.support) && !kb.sigma.contains(&e.formula) && !out.contains(&e.formula) {
            out.push(e.formula.clone());
        }
    }
    out
}

/// Leaf-mode derivation over the exclusive tableau of Σ.
pub fn case_derive(kb: &KnowledgeBase, budget: Budget) -> Result<CaseDerivation, CasesError> {
    if let Some(r) = kb.rules.iter().find(|r| r.antecedent.has_universal_claim()) {
        return Err(CasesError::UniversalAntecedent(r.id.to_string()));
    }
    let mut base = kb.clone();
    base.queries.clear();
    let mut st = DerivationState::new(&base, Expansion::Exclusive, budget);
    st.tableau.saturate();
    let cases: Vec<Case> = st
        .tableau
        .leaves()
        .into_iter()
        .filter(|&l| sigma_open(&st.tableau, l))
        .map(|l| Case { node: l, literals: defining_literals(&st.tableau, kb, l) })
        .collect();
    let mut frames = Vec::new();
    let mut limits = st.tableau.limits;
    let mut tried: HashSet<(NodeId, RuleKey, usize)> = HashSet::new();
    'search: loop {
        st.refresh_instances();
        let instances: Vec<_> = st.instances.iter().cloned().collect();
        for case in &cases {
            for leaf in st.tableau.leaves_below(case.node) {
                if !sigma_open(&st.tableau, leaf) {
                    continue;
                }
                let version = st.tableau.branch_entries(leaf).len();
                let mut fired = false;
                for r in &instances {
                    if !tried.insert((leaf, r.key.clone(), version)) {
                        continue;
                    }
                    let snap = st.tableau.snapshot(leaf);
                    let (test, _) = st.tableau.add_test(leaf, &r.antecedent);
                    st.tableau.saturate_below(leaf);
                    let cs = st.tableau.closure_supports_below(leaf);
                    limits.merge(st.tableau.limits);
                    st.tableau.restore(snap);
                    let hits: Vec<Support> =
                        cs.with_tests(1).filter(|s| s.tests().next() == Some(test)).cloned().collect();
                    let outcome = if hits.is_empty() { Outcome::Retracted } else { Outcome::Succeeded };
                    frames.push(CaseSearchFrame { leaf, rule: r.key.clone(), posted_test: test, outcome });
                    for s in hits {
                        fired |= st.fire_rule(&s, test, r, leaf);
                    }
                }
                if fired {
                    st.tableau.saturate_below(leaf);
                    continue 'search;
                }
            }
        }
        break;
    }
    limits.merge(st.tableau.limits);
    let local_closures = propagate_local_closures(&mut st.tableau);
    limits.merge(st.tableau.limits);
    Ok(CaseDerivation { state: st, cases, frames, local_closures, limits })
}

/// Carries test-free ⊥ records from the leaves to the root. Records
/// are stored on every node; the root's records are returned.
pub fn propagate_local_closures(t: &mut Tableau) -> Vec<LocalClosure> {
    let cap = t.budget.combination_cap;
    for n in preorder(t, Tableau::ROOT).into_iter().rev() {
        let nd = t.node(n).clone();
        let records = match nd.children.len() {
            0 => minimal_family(nd.closures.iter().filter(|s| s.test_count() == 0).cloned()),
            1 => t.node(nd.children[0]).records.clone(),
            _ => {
                let split = nd.step.as_ref().expect("branching node has a step").entry();
                let s = &t.entry(split).support.clone();
                let containing: Vec<Vec<Support>> = nd
                    .children
                    .iter()
                    .map(|&c| t.node(c).records.iter().filter(|r| s.is_subset(r)).cloned().collect())
                    .collect();
                let refs: Vec<&Vec<Support>> = containing.iter().collect();
                let (mut out, truncated) = product(&refs, cap);
                if truncated {
                    t.limits.combination_cap = true;
                }
                for &c in &nd.children {
                    out.extend(t.node(c).records.iter().filter(|r| !s.is_subset(r)).cloned());
                }
                minimal_family(out)
            }
        };
        t.set_records(n, records);
    }
    t.node(Tableau::ROOT).records.iter().map(|s| LocalClosure { support: s.clone() }).collect()
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub case: Case,
    /// Per query: its arguments in this case and their status.
    pub queries: Vec<(Formula, Vec<Argument>, Status)>,
    pub graph: AttackGraph,
    pub extensions: Vec<Extension>,
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub derivation: CaseDerivation,
    pub results: Vec<CaseResult>,
    /// Queries justified in every case.
    pub common: Vec<Formula>,
    /// All per-case arguments and local-closure undercutters together.
    pub merged: AttackGraph,
}

fn in_scope(t: &Tableau, case: NodeId, node: NodeId) -> bool {
    t.path(case).contains(&node) || t.path(node).contains(&case)
}

/// Arguments for `q` within the subtree of `case`: the test is posted at the
/// case node and retracted afterwards.
fn case_arguments(t: &mut Tableau, case: NodeId, q: &Formula) -> Vec<Argument> {
    let snap = t.snapshot(case);
    let (test, _) = t.add_test(case, q);
    t.saturate_below(case);
    let cs = t.closure_supports_below(case);
    t.restore(snap);
    cs.with_tests(1)
        .filter(|s| s.tests().next() == Some(test))
        .map(|s| Argument::for_formula(Support::new(s.iter().filter(|e| !e.is_test()).cloned()), q.clone()))
        .collect()
}

/// The argument pool of one case: its query arguments, the rules fired on
/// its branch, the ⊥ records that reached the case node, and the local
/// closures built only from what the branch holds.
pub fn case_pool(d: &mut CaseDerivation, case: &Case, queries: &[Formula]) -> (Vec<(Formula, Vec<Argument>)>, Vec<Argument>) {
    let t = &mut d.state.tableau;
    let qs: Vec<(Formula, Vec<Argument>)> = queries.iter().map(|q| (q.clone(), case_arguments(t, case.node, q))).collect();
    let scoped: Vec<&FiringRecord> = d.state.fired.iter().filter(|f| in_scope(t, case.node, f.node)).collect();
    let elements: BTreeSet<SupportElement> = scoped.iter().map(|f| f.element()).collect();
    let mut pool: Vec<Argument> = qs.iter().flat_map(|(_, a)| a.iter().cloned()).collect();
    pool.extend(scoped.iter().map(|f| f.argument()));
    for r in &t.node(case.node).records {
        pool.push(Argument::new(r.clone(), Conclusion::Falsum));
    }
    for lc in &d.local_closures {
        let present = lc.support.iter().all(|e| match e {
            SupportElement::Rule(_) => elements.contains(e),
            _ => true,
        });
        if present {
            pool.push(lc.argument());
        }
    }
    (qs, pool)
}

pub fn case_report(kb: &KnowledgeBase, queries: &[Formula], semantics: Semantics, budget: Budget) -> Result<CaseReport, CasesError> {
    let mut d = case_derive(kb, budget)?;
    let mut results = Vec::new();
    let mut merged_pool = Vec::new();
    for case in d.cases.clone() {
        let (qs, pool) = case_pool(&mut d, &case, queries);
        merged_pool.extend(pool.iter().cloned());
        let graph = build_af(pool, &kb.preferences);
        let extensions = enumerate_extensions(&graph, semantics)?;
        let queries = qs
            .into_iter()
            .map(|(q, args)| {
                let idx: Vec<usize> = args.iter().filter_map(|a| graph.index_of(a)).collect();
                let status = status_of(&graph, &extensions, semantics, &idx);
                (q, args, status)
            })
            .collect();
        results.push(CaseResult { case, queries, graph, extensions });
    }
    merged_pool.extend(d.local_closures.iter().map(|l| l.argument()));
    let merged = build_af(merged_pool, &kb.preferences);
    let common = queries
        .iter()
        .enumerate()
        .filter(|(i, _)| !results.is_empty() && results.iter().all(|r| r.queries[*i].2 == Status::Justified))
        .map(|(_, q)| q.clone())
        .collect();
    Ok(CaseReport { derivation: d, results, common, merged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arguments::render_support;
    use crate::lang::{parse_formula, parse_knowledge_base};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn kb(s: &str) -> KnowledgeBase {
        parse_knowledge_base(s).unwrap()
    }

    #[test]
    fn exclusive_children() {
        let e = Entry::premise(f("h | r"));
        let kids: Vec<String> = exclusive_expand(&e).unwrap().iter().map(|k| k.formula.to_string()).collect();
        assert_eq!(kids, ["h & ~r", "h & r", "~h & r"]);
        let e = Entry::new(Support::single(SupportElement::Premise(f("a"))), f("~(p & q)"));
        let kids: Vec<String> = exclusive_expand(&e).unwrap().iter().map(|k| k.formula.to_string()).collect();
        assert_eq!(kids, ["~p & q", "~p & ~q", "p & ~q"]);
        let e = Entry::new(Support::single(SupportElement::Premise(f("a"))), f("p -> q"));
        let kids: Vec<String> = exclusive_expand(&e).unwrap().iter().map(|k| k.formula.to_string()).collect();
        assert_eq!(kids, ["~p & ~q", "~p & q", "p & q"]);
        assert!(exclusive_expand(&Entry::premise(f("p & q"))).is_err());
    }

    #[test]
    fn disjunction_fires_per_case() {
        let d = case_derive(&kb("sigma: p | q. rule a: p ~> r. rule b: q ~> r."), Budget::default()).unwrap();
        assert_eq!(d.cases.len(), 3);
        let fired: BTreeSet<String> = d.state.fired.iter().map(|x| x.rule.to_string()).collect();
        assert_eq!(fired, BTreeSet::from(["p ~> r".to_string(), "q ~> r".to_string()]));
        assert!(d.frames.iter().any(|fr| fr.outcome == Outcome::Retracted));
    }

    #[test]
    fn retraction_leaves_no_trace() {
        let d = case_derive(&kb("sigma: p | q. rule a: s ~> r."), Budget::default()).unwrap();
        assert!(d.state.fired.is_empty());
        let mut fresh = DerivationState::new(&kb("sigma: p | q."), Expansion::Exclusive, Budget::default());
        fresh.tableau.saturate();
        propagate_local_closures(&mut fresh.tableau);
        assert_eq!(d.state.tableau, fresh.tableau);
    }

    #[test]
    fn local_closure_of_r_case() {
        let d = case_derive(&kb("sigma: ~(p & q). sigma: r | s. sigma: t. rule a: r ~> p. rule b: t ~> q."), Budget::default()).unwrap();
        let got: Vec<String> = d.local_closures.iter().map(|l| render_support(&l.support)).collect();
        assert_eq!(got, ["{~(p & q), ({t}, t ~> q), ({r | s}, r ~> p)}"]);
    }

    #[test]
    fn bullet_three_passes_open_sibling() {
        let mut t = Tableau::new(Expansion::Standard, Budget::default());
        t.add_premise(f("a | b"));
        t.add_premise(f("c"));
        t.saturate();
        let left = t.leaves()[0];
        t.add_entry(left, Entry::premise(f("~c")));
        t.saturate();
        let lc = propagate_local_closures(&mut t);
        let got: Vec<String> = lc.iter().map(|l| render_support(&l.support)).collect();
        assert_eq!(got, ["{c, ~c}"]);
        assert!(!t.is_closed());
    }

    #[test]
    fn closed_tableau_keeps_leaf_unions() {
        let mut t = Tableau::new(Expansion::Standard, Budget::default());
        t.add_premise(f("a | b"));
        t.add_premise(f("~a"));
        t.add_premise(f("~b"));
        t.saturate();
        let lc = propagate_local_closures(&mut t);
        let got: Vec<String> = lc.iter().map(|l| render_support(&l.support)).collect();
        assert_eq!(got, ["{~a, ~b, a | b}"]);
        assert_eq!(t.closure_supports().supports, vec![lc[0].support.clone()]);
    }

    #[test]
    fn universal_antecedent_rejected() {
        let k = kb("sigma: p(a). rule r: (forall X. p(X)) ~> q.");
        assert!(matches!(case_derive(&k, Budget::default()), Err(CasesError::UniversalAntecedent(_))));
    }

    #[test]
    fn party() {
        let k = kb("sigma: h | r. rule a: h ~> g. rule b: r ~> g. rule c: h & r ~> ~g.");
        let rep = case_report(&k, &[f("g")], Semantics::Grounded, Budget::default()).unwrap();
        let st: Vec<(Vec<String>, Status)> = rep
            .results
            .iter()
            .map(|r| (r.case.literals.iter().map(|l| l.to_string()).collect(), r.queries[0].2))
            .collect();
        assert_eq!(
            st,
            [
                (vec!["h".into(), "~r".into()], Status::Justified),
                (vec!["h".into(), "r".into()], Status::Defensible),
                (vec!["~h".into(), "r".into()], Status::Justified),
            ]
        );
        assert!(rep.common.is_empty());
    }

    #[test]
    fn harry_and_draco() {
        let k = kb("sigma: fight(h). sigma: fight(d). sigma: sd(h) | sd(d). sigma: ~(sd(h) & sd(d)).
                    rule f: fight(X) ~> pun(X). rule s: sd(X) ~> not(f).");
        let qs = [f("pun(h)"), f("pun(d)")];
        let rep = case_report(&k, &qs, Semantics::Grounded, Budget::default()).unwrap();
        assert_eq!(rep.results.len(), 2);
        for r in &rep.results {
            let justified = r.queries.iter().filter(|q| q.2 == Status::Justified).count();
            assert_eq!(justified, 1);
        }
        assert!(rep.common.is_empty());
    }

    #[test]
    fn single_case_matches_root_mode() {
        let k = kb("sigma: p. rule a: p ~> r.");
        let d = case_derive(&k, Budget::default()).unwrap();
        assert_eq!(d.cases.len(), 1);
        let fired: Vec<String> = d.state.fired.iter().map(|x| x.argument().to_string()).collect();
        assert_eq!(fired, ["({({p}, p ~> r)}, r)"]);
    }
}
