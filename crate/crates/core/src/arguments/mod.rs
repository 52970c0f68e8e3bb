//! Arguments as (support, conclusion) pairs whose supports nest deductive and
//! defeasible steps, plus the derived views over them.

mod minimize;
mod render;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::lang::{Formula, GroundRule, RuleKey};

pub use minimize::minimize;
pub use render::{argument_json, render_argument_text, render_support};

/// Globally unique tag of a test posted during one run.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TestId(pub u32);

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SupportElement {
    Premise(Formula),
    /// The refutation test `¬φ?`; `formula` is the negated goal `¬φ` that the
    /// test places on the tableau.
    Test { id: TestId, formula: Formula },
    Rule(Arc<RuleApplication>),
}

/// `(S, φ ⇝ ψ)`: the support of an argument for the antecedent, paired with the
/// rule instance it enables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RuleApplication {
    pub support: Support,
    pub rule: GroundRule,
}

impl SupportElement {
    pub fn premise(f: Formula) -> SupportElement {
        SupportElement::Premise(f)
    }

    pub fn rule(support: Support, rule: GroundRule) -> SupportElement {
        SupportElement::Rule(Arc::new(RuleApplication { support, rule }))
    }

    pub fn is_test(&self) -> bool {
        matches!(self, SupportElement::Test { .. })
    }

    pub fn test_id(&self) -> Option<TestId> {
        match self {
            SupportElement::Test { id, .. } => Some(*id),
            _ => None,
        }
    }

    /// The proposition this element contributes to Ŝ, if it lies in the
    /// object language (undercutting-defeater applications do not).
    pub fn proposition(&self) -> Option<&Formula> {
        match self {
            SupportElement::Premise(f) | SupportElement::Test { formula: f, .. } => Some(f),
            SupportElement::Rule(app) => app.rule.consequent_formula(),
        }
    }

    /// Nesting depth of rule applications; premises and tests have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            SupportElement::Rule(app) => 1 + app.support.depth(),
            _ => 0,
        }
    }
}

/// A canonical (sorted, duplicate-free) set of supporting elements.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Support(Vec<SupportElement>);

impl Support {
    pub fn new(elements: impl IntoIterator<Item = SupportElement>) -> Support {
        let mut v: Vec<_> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        Support(v)
    }

    pub fn empty() -> Support {
        Support(Vec::new())
    }

    pub fn single(e: SupportElement) -> Support {
        Support(vec![e])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SupportElement> {
        self.0.iter()
    }

    pub fn contains(&self, e: &SupportElement) -> bool {
        self.0.binary_search(e).is_ok()
    }

    pub fn union(&self, other: &Support) -> Support {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Support(out)
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut j = 0;
        for e in &self.0 {
            loop {
                if j == other.0.len() {
                    return false;
                }
                match other.0[j].cmp(e) {
                    std::cmp::Ordering::Less => j += 1,
                    std::cmp::Ordering::Equal => {
                        j += 1;
                        break;
                    }
                    std::cmp::Ordering::Greater => return false,
                }
            }
        }
        true
    }

    pub fn without(&self, e: &SupportElement) -> Support {
        Support(self.0.iter().filter(|x| *x != e).cloned().collect())
    }

    pub fn tests(&self) -> impl Iterator<Item = TestId> + '_ {
        self.0.iter().filter_map(SupportElement::test_id)
    }

    pub fn test_count(&self) -> usize {
        self.tests().count()
    }

    pub fn has_rules(&self) -> bool {
        self.0.iter().any(|e| matches!(e, SupportElement::Rule(_)))
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(SupportElement::depth).max().unwrap_or(0)
    }

    /// Ŝ: the propositions contributed by the top-level elements.
    pub fn propositions(&self) -> Vec<Formula> {
        let set: BTreeSet<&Formula> = self.0.iter().filter_map(SupportElement::proposition).collect();
        set.into_iter().cloned().collect()
    }
}

impl FromIterator<SupportElement> for Support {
    fn from_iter<I: IntoIterator<Item = SupportElement>>(iter: I) -> Self {
        Support::new(iter)
    }
}

impl<'a> IntoIterator for &'a Support {
    type Item = &'a SupportElement;
    type IntoIter = std::slice::Iter<'a, SupportElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Conclusion {
    Formula(Formula),
    Falsum,
    /// `not(φ ⇝ ψ)` for a rule instance.
    NotRule(RuleKey),
    /// `not(σ)` for a premise.
    NotPremise(Formula),
}

impl Conclusion {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            Conclusion::Formula(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_undercut(&self) -> bool {
        matches!(self, Conclusion::NotRule(_) | Conclusion::NotPremise(_))
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Formula(x) => write!(f, "{x}"),
            Conclusion::Falsum => f.write_str("false"),
            Conclusion::NotRule(k) => write!(f, "not({k})"),
            Conclusion::NotPremise(x) => write!(f, "not([{x}])"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Argument {
    pub support: Support,
    pub conclusion: Conclusion,
}

impl Argument {
    pub fn new(support: Support, conclusion: Conclusion) -> Argument {
        Argument { support, conclusion }
    }

    pub fn for_formula(support: Support, f: Formula) -> Argument {
        Argument::new(support, Conclusion::Formula(f))
    }

    pub fn views(&self) -> ArgumentViews {
        views(self)
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", render_support(&self.support), self.conclusion)
    }
}

/// The derived views of an argument: Ā, Ã, the last rules, Â and Ŝ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArgumentViews {
    pub premises: BTreeSet<Formula>,
    pub rules: BTreeSet<GroundRule>,
    pub last_rules: BTreeSet<GroundRule>,
    pub conclusion: Conclusion,
    pub supporting_props: BTreeSet<Formula>,
}

impl ArgumentViews {
    pub fn uses_rule(&self, key: &RuleKey) -> bool {
        self.rules.iter().any(|r| &r.key == key)
    }
}

pub fn views(a: &Argument) -> ArgumentViews {
    let mut v = ArgumentViews {
        premises: BTreeSet::new(),
        rules: BTreeSet::new(),
        last_rules: BTreeSet::new(),
        conclusion: a.conclusion.clone(),
        supporting_props: BTreeSet::new(),
    };
    for e in &a.support {
        match e {
            SupportElement::Premise(f) => {
                v.premises.insert(f.clone());
                v.supporting_props.insert(f.clone());
            }
            SupportElement::Test { formula, .. } => {
                v.supporting_props.insert(formula.clone());
            }
            SupportElement::Rule(app) => {
                collect_nested(&app.support, &mut v.premises, &mut v.rules);
                v.rules.insert(app.rule.clone());
                v.last_rules.insert(app.rule.clone());
                if let Some(c) = app.rule.consequent_formula() {
                    v.supporting_props.insert(c.clone());
                }
            }
        }
    }
    v
}

fn collect_nested(s: &Support, premises: &mut BTreeSet<Formula>, rules: &mut BTreeSet<GroundRule>) {
    for e in s {
        match e {
            SupportElement::Premise(f) => {
                premises.insert(f.clone());
            }
            SupportElement::Test { .. } => {}
            SupportElement::Rule(app) => {
                rules.insert(app.rule.clone());
                collect_nested(&app.support, premises, rules);
            }
        }
    }
}

/// Structural equality with supports compared as sets.
pub fn equal_modulo_support_order(a: &Argument, b: &Argument) -> bool {
    a.conclusion == b.conclusion && a.support == b.support
}
