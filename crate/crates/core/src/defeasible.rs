//! Defeasible-rule firing on top of the tableau: antecedents are posted as
//! tests, and a closure support carrying exactly one antecedent test lets the
//! rule's consequent enter the tableau with a rule-application support.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::arguments::{minimize, Argument, Conclusion, Support, SupportElement, TestId};
use crate::lang::{ground_instances, Formula, GroundHead, GroundRule, KnowledgeBase, RuleKey};
use crate::oracle::TruthTable;
use crate::tableau::{Budget, ClosureSupports, Entry, Expansion, Limits, NodeId, Tableau};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiringRecord {
    pub rule: GroundRule,
    pub antecedent_support: Support,
    /// `({(S, φ ⇝ ψ)}, ψ)`; `None` for undercutting defeaters, whose
    /// consequent is not a formula.
    pub produced: Option<Entry>,
    /// Node the consequent was attached to.
    pub node: NodeId,
}

impl FiringRecord {
    pub fn element(&self) -> SupportElement {
        SupportElement::rule(self.antecedent_support.clone(), self.rule.clone())
    }

    /// `({(S, φ ⇝ ψ)}, ψ)` or `({(S, φ ⇝ not(r))}, not(r))`.
    pub fn argument(&self) -> Argument {
        let conclusion = match &self.rule.consequent {
            GroundHead::Formula(f) => Conclusion::Formula(f.clone()),
            GroundHead::Undercut(k) => Conclusion::NotRule(k.clone()),
        };
        Argument::new(Support::single(self.element()), conclusion)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestMode {
    Root,
    Leaves(Vec<NodeId>),
}

/// Arguments collected from a derivation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pool {
    /// Per query, in declaration order.
    pub queries: Vec<(Formula, Vec<Argument>)>,
    pub inconsistencies: Vec<Argument>,
    /// `({(S, φ ⇝ ψ)}, ψ)` for every firing with a formula consequent.
    pub rule_arguments: Vec<Argument>,
    /// Arguments concluding `not(r)` from undercutting defeaters.
    pub defeaters: Vec<Argument>,
}

#[derive(Clone, Debug)]
pub struct DerivationState {
    pub kb: KnowledgeBase,
    pub tableau: Tableau,
    /// Goal formula to test id, shared between queries and antecedents.
    pub tests: BTreeMap<Formula, TestId>,
    pub query_tests: Vec<(Formula, TestId)>,
    pub instances: BTreeSet<GroundRule>,
    pub fired: Vec<FiringRecord>,
    fired_keys: HashSet<(RuleKey, Support, NodeId)>,
    pub pool: Pool,
    pub rounds: usize,
}

impl DerivationState {
    pub fn new(kb: &KnowledgeBase, expansion: Expansion, budget: Budget) -> DerivationState {
        let mut tableau = Tableau::new(expansion, budget);
        for s in &kb.sigma {
            tableau.add_premise(s.clone());
        }
        let mut st = DerivationState {
            kb: kb.clone(),
            tableau,
            tests: BTreeMap::new(),
            query_tests: Vec::new(),
            instances: BTreeSet::new(),
            fired: Vec::new(),
            fired_keys: HashSet::new(),
            pool: Pool::default(),
            rounds: 0,
        };
        for q in &kb.queries {
            let id = st.root_test(q);
            st.query_tests.push((q.clone(), id));
        }
        st
    }

    pub fn limits(&self) -> Limits {
        self.tableau.limits
    }

    fn root_test(&mut self, goal: &Formula) -> TestId {
        if let Some(&id) = self.tests.get(goal) {
            return id;
        }
        let (id, _) = self.tableau.add_test(Tableau::ROOT, goal);
        self.tests.insert(goal.clone(), id);
        id
    }

    /// Ground instances over the terms currently in the tableau. Returns
    /// whether new instances appeared.
    pub fn refresh_instances(&mut self) -> bool {
        let terms = self.tableau.terms();
        let before = self.instances.len();
        for r in &self.kb.rules {
            self.instances.extend(ground_instances(r, &terms));
        }
        self.instances.len() > before
    }

    /// Posts `({¬φ?}, ¬φ)` for the antecedent of every known instance: once
    /// at the root in root mode, or at each listed node in leaf mode.
    /// Returns the tests that were newly posted.
    pub fn post_antecedent_tests(&mut self, mode: TestMode) -> Vec<(NodeId, TestId)> {
        self.refresh_instances();
        let antecedents: BTreeSet<Formula> = self.instances.iter().map(|r| r.antecedent.clone()).collect();
        let mut out = Vec::new();
        match mode {
            TestMode::Root => {
                for a in antecedents {
                    if !self.tests.contains_key(&a) {
                        out.push((Tableau::ROOT, self.root_test(&a)));
                    }
                }
            }
            TestMode::Leaves(nodes) => {
                for n in nodes {
                    for a in &antecedents {
                        out.push((n, self.tableau.add_test(n, a).0));
                    }
                }
            }
        }
        out
    }

    pub fn rules_with_antecedent(&self, antecedent: &Formula) -> Vec<GroundRule> {
        self.instances.iter().filter(|r| &r.antecedent == antecedent).cloned().collect()
    }

    /// Fires one rule instance. `support` must carry `test` and no other
    /// test. The consequent is attached at `node` (the root in root mode).
    /// Firing the same instance on the same support twice along a branch is a
    /// no-op. Returns whether anything new happened.
    pub fn fire_rule(&mut self, support: &Support, test: TestId, rule: &GroundRule, node: NodeId) -> bool {
        let tests: Vec<TestId> = support.tests().collect();
        if tests != [test] {
            return false;
        }
        let rest = Support::new(support.iter().filter(|e| !e.is_test()).cloned());
        let arg = Argument::for_formula(rest.clone(), rule.antecedent.clone());
        let ante = minimize(&arg, &TruthTable::default()).map(|a| a.support).unwrap_or(rest);
        // A rule instance never feeds its own antecedent.
        if Argument::for_formula(ante.clone(), rule.antecedent.clone()).views().uses_rule(&rule.key) {
            return false;
        }
        if 1 + ante.depth() > self.tableau.budget.depth_cap {
            self.tableau.limits.depth_cap = true;
            return false;
        }
        let mut key = (rule.key.clone(), ante.clone(), node);
        for n in self.tableau.path(node) {
            key.2 = n;
            if self.fired_keys.contains(&key) {
                return false;
            }
        }
        key.2 = node;
        self.fired_keys.insert(key);
        let element = SupportElement::rule(ante.clone(), rule.clone());
        let produced = rule
            .consequent_formula()
            .map(|c| Entry::new(Support::single(element.clone()), c.clone()));
        self.fired.push(FiringRecord { rule: rule.clone(), antecedent_support: ante, produced: produced.clone(), node });
        if let Some(e) = produced {
            self.tableau.add_entry(node, e);
        }
        true
    }

    /// Fires every instance enabled by a single-test root closure support.
    fn fire_round(&mut self, cs: &ClosureSupports) -> bool {
        let by_test: BTreeMap<TestId, Formula> = self.tests.iter().map(|(f, id)| (*id, f.clone())).collect();
        let mut todo = Vec::new();
        for s in cs.with_tests(1) {
            let t = s.tests().next().expect("one test");
            if let Some(goal) = by_test.get(&t) {
                for r in self.rules_with_antecedent(goal) {
                    todo.push((s.clone(), t, r));
                }
            }
        }
        let mut any = false;
        for (s, t, r) in todo {
            any |= self.fire_rule(&s, t, &r, Tableau::ROOT);
        }
        any
    }

    /// Collects query arguments, inconsistencies and rule arguments from the
    /// current root closure supports.
    pub fn collect_pool(&mut self, cs: &ClosureSupports) {
        let mut pool = Pool::default();
        for (q, id) in &self.query_tests {
            let args = cs
                .with_tests(1)
                .filter(|s| s.tests().next() == Some(*id))
                .map(|s| Argument::for_formula(Support::new(s.iter().filter(|e| !e.is_test()).cloned()), q.clone()))
                .collect();
            pool.queries.push((q.clone(), args));
        }
        pool.inconsistencies = cs.with_tests(0).map(|s| Argument::new(s.clone(), Conclusion::Falsum)).collect();
        let mut seen = HashSet::new();
        for f in &self.fired {
            let a = f.argument();
            if !seen.insert(a.clone()) {
                continue;
            }
            if a.conclusion.is_undercut() {
                pool.defeaters.push(a);
            } else {
                pool.rule_arguments.push(a);
            }
        }
        self.pool = pool;
    }
}

/// Root-mode derivation to fixpoint: post tests, saturate, fire, repeat
/// until a round neither posts a test nor fires a rule.
pub fn derive(kb: &KnowledgeBase, budget: Budget) -> DerivationState {
    let mut st = DerivationState::new(kb, Expansion::Standard, budget);
    loop {
        st.rounds += 1;
        let posted = !st.post_antecedent_tests(TestMode::Root).is_empty();
        st.tableau.saturate();
        let cs = st.tableau.closure_supports();
        let fired = st.fire_round(&cs);
        if !posted && !fired {
            st.collect_pool(&cs);
            return st;
        }
    }
}
