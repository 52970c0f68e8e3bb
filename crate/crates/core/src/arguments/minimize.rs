use super::{Argument, Conclusion, Support, SupportElement};
use crate::lang::Formula;
use crate::oracle::{Entailment, OracleError};

/// What the support has to entail for the argument to stand. Rule-undercutter
/// conclusions have no such formula; their supports are left as they are.
fn target(a: &Argument) -> Option<Formula> {
    match &a.conclusion {
        Conclusion::Formula(f) => Some(f.clone()),
        Conclusion::Falsum => Some(Formula::False),
        Conclusion::NotPremise(s) => Some(Formula::not(s.clone())),
        Conclusion::NotRule(_) => None,
    }
}

fn minimize_element(e: &SupportElement, oracle: &dyn Entailment) -> Result<SupportElement, OracleError> {
    match e {
        SupportElement::Rule(app) => {
            let inner = Argument::for_formula(app.support.clone(), app.rule.antecedent.clone());
            let inner = minimize(&inner, oracle)?;
            Ok(SupportElement::rule(inner.support, app.rule.clone()))
        }
        other => Ok(other.clone()),
    }
}

/// Makes nested rule supports minimal, then drops top-level elements one at a
/// time in canonical order while the rest still entails the conclusion. By
/// monotonicity of entailment the single pass leaves a ⊆-minimal support.
pub fn minimize(a: &Argument, oracle: &dyn Entailment) -> Result<Argument, OracleError> {
    let elems = a
        .support
        .iter()
        .map(|e| minimize_element(e, oracle))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(goal) = target(a) else {
        return Ok(Argument::new(Support::new(elems), a.conclusion.clone()));
    };
    let mut kept = elems;
    let mut i = 0;
    while i < kept.len() {
        let trial: Vec<SupportElement> =
            kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e.clone()).collect();
        let props = Support::new(trial.iter().cloned()).propositions();
        if oracle.entails(&props, &goal)? {
            kept = trial;
        } else {
            i += 1;
        }
    }
    Ok(Argument::new(Support::new(kept), a.conclusion.clone()))
}
