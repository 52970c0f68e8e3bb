use super::{init_root, Budget, Entry, Expansion, Tableau};
use crate::arguments::{Argument, Conclusion, Support, SupportElement};
use crate::lang::{Formula, KnowledgeBase};
use crate::oracle::{Entailment, OracleError};

#[derive(Clone, Debug)]
pub struct ProveResult {
    /// `(S \ ¬φ?, φ)` for every closure support whose only test is the goal's.
    pub arguments: Vec<Argument>,
    /// `(S, ⊥)` for every test-free closure support.
    pub inconsistencies: Vec<Argument>,
    pub complete: bool,
    pub tableau: Tableau,
}

/// Refutation proof of `goal` from Σ (rules are ignored).
pub fn prove(kb: &KnowledgeBase, goal: &Formula, budget: Budget) -> ProveResult {
    let (mut t, ids) = init_root(kb, std::slice::from_ref(goal), Expansion::Standard, budget);
    let test = ids[0];
    t.saturate();
    let cs = t.closure_supports();
    let mut arguments = Vec::new();
    let mut inconsistencies = Vec::new();
    for s in &cs.supports {
        match s.tests().collect::<Vec<_>>().as_slice() {
            [] => inconsistencies.push(Argument::new(s.clone(), Conclusion::Falsum)),
            [x] if *x == test => {
                let rest = Support::new(s.iter().filter(|e| !e.is_test()).cloned());
                arguments.push(Argument::for_formula(rest, goal.clone()));
            }
            _ => {}
        }
    }
    ProveResult { arguments, inconsistencies, complete: !t.limits.incomplete(), tableau: t }
}

/// Entailment by tableau refutation; usable for first-order input.
#[derive(Clone, Debug, Default)]
pub struct TableauOracle {
    pub budget: Budget,
}

impl Entailment for TableauOracle {
    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<bool, OracleError> {
        let mut t = Tableau::new(Expansion::Standard, self.budget.clone());
        for p in premises {
            t.add_entry(Tableau::ROOT, Entry::new(Support::single(SupportElement::Premise(p.clone())), p.clone()));
        }
        t.add_test(Tableau::ROOT, goal);
        t.saturate();
        if t.is_closed() {
            Ok(true)
        } else if t.limits.incomplete() {
            Err(OracleError::Undecided)
        } else {
            Ok(false)
        }
    }
}
