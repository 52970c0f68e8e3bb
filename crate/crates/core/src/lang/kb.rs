use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::syntax::{Formula, Symbol, Term};
use super::LangError;

/// Right-hand side of a defeasible rule as written.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleHead {
    Formula(Formula),
    /// `not(target)`: an undercutting defeater. `target_vars` are the free
    /// variables of the target rule; they are bound by the defeater's own
    /// substitution when grounding.
    Undercut { target: Symbol, target_vars: Vec<Symbol> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DefeasibleRule {
    pub id: Symbol,
    pub antecedent: Formula,
    pub consequent: RuleHead,
    /// Sorted, deduplicated.
    pub free_vars: Vec<Symbol>,
}

impl DefeasibleRule {
    pub fn new(id: &str, antecedent: Formula, consequent: RuleHead) -> DefeasibleRule {
        let mut vars = antecedent.free_vars();
        match &consequent {
            RuleHead::Formula(f) => vars.extend(f.free_vars()),
            RuleHead::Undercut { target_vars, .. } => vars.extend(target_vars.iter().cloned()),
        }
        DefeasibleRule {
            id: Arc::from(id),
            antecedent,
            consequent,
            free_vars: vars.into_iter().collect(),
        }
    }

    pub fn is_propositional(&self) -> bool {
        self.free_vars.is_empty()
            && self.antecedent.is_propositional()
            && match &self.consequent {
                RuleHead::Formula(f) => f.is_propositional(),
                RuleHead::Undercut { .. } => true,
            }
    }
}

/// Identity of a ground rule instance: schema id plus the substitution used.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RuleKey {
    pub id: Symbol,
    pub subst: Vec<(Symbol, Term)>,
}

impl fmt::Display for RuleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)?;
        if !self.subst.is_empty() {
            f.write_str("[")?;
            for (i, (v, t)) in self.subst.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}:={t}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GroundHead {
    Formula(Formula),
    Undercut(RuleKey),
}

/// A ground instance of a defeasible rule. Ordering and equality are driven by
/// the key first, so instances of the same schema sort together.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroundRule {
    pub key: RuleKey,
    pub antecedent: Formula,
    pub consequent: GroundHead,
}

impl GroundRule {
    pub fn consequent_formula(&self) -> Option<&Formula> {
        match &self.consequent {
            GroundHead::Formula(f) => Some(f),
            GroundHead::Undercut(_) => None,
        }
    }
}

impl fmt::Display for GroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~> ", self.antecedent)?;
        match &self.consequent {
            GroundHead::Formula(c) => write!(f, "{c}"),
            GroundHead::Undercut(k) => write!(f, "not({k})"),
        }
    }
}

/// One mapping of the rule's free variables into `terms` per instance.
/// Rules without free variables yield exactly themselves.
pub fn ground_instances(rule: &DefeasibleRule, terms: &BTreeSet<Term>) -> Vec<GroundRule> {
    let terms: Vec<&Term> = terms.iter().filter(|t| t.is_ground()).collect();
    let n = rule.free_vars.len();
    if n > 0 && terms.is_empty() {
        return Vec::new();
    }
    let total = terms.len().pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let subst: Vec<(Symbol, Term)> = rule
            .free_vars
            .iter()
            .zip(&idx)
            .map(|(v, &i)| (v.clone(), terms[i].clone()))
            .collect();
        out.push(instantiate(rule, subst));
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < terms.len() {
                break;
            }
            *slot = 0;
        }
    }
    out
}

pub(crate) fn instantiate(rule: &DefeasibleRule, subst: Vec<(Symbol, Term)>) -> GroundRule {
    let apply = |f: &Formula| {
        subst
            .iter()
            .fold(f.clone(), |acc, (v, t)| acc.substitute(v, t))
    };
    let consequent = match &rule.consequent {
        RuleHead::Formula(f) => GroundHead::Formula(apply(f)),
        RuleHead::Undercut { target, target_vars } => GroundHead::Undercut(RuleKey {
            id: target.clone(),
            subst: subst
                .iter()
                .filter(|(v, _)| target_vars.contains(v))
                .cloned()
                .collect(),
        }),
    };
    GroundRule {
        key: RuleKey { id: rule.id.clone(), subst: subst.clone() },
        antecedent: apply(&rule.antecedent),
        consequent,
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PrefItem {
    Rule(Symbol),
    Formula(Formula),
}

impl fmt::Display for PrefItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefItem::Rule(id) => f.write_str(id),
            PrefItem::Formula(x) => write!(f, "[{x}]"),
        }
    }
}

/// Strict partial order `<` over Σ and over rule ids; `a < b` reads "a is
/// weaker than b". Stored transitively closed.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Preferences {
    declared: Vec<(PrefItem, PrefItem)>,
    closure: BTreeSet<(PrefItem, PrefItem)>,
}

impl Preferences {
    pub fn new(pairs: Vec<(PrefItem, PrefItem)>) -> Result<Preferences, LangError> {
        for (a, b) in &pairs {
            if matches!(a, PrefItem::Rule(_)) != matches!(b, PrefItem::Rule(_)) {
                return Err(LangError::MixedPreference(format!("{a} < {b}")));
            }
        }
        let mut succ: BTreeMap<&PrefItem, BTreeSet<&PrefItem>> = BTreeMap::new();
        for (a, b) in &pairs {
            succ.entry(a).or_default().insert(b);
        }
        let mut closure = BTreeSet::new();
        for start in succ.keys() {
            let mut stack: Vec<&PrefItem> = succ[start].iter().copied().collect();
            let mut seen = BTreeSet::new();
            while let Some(x) = stack.pop() {
                if !seen.insert(x) {
                    continue;
                }
                if let Some(next) = succ.get(x) {
                    stack.extend(next.iter().copied());
                }
            }
            if seen.contains(start) {
                return Err(LangError::PreferenceCycle(start.to_string()));
            }
            closure.extend(seen.into_iter().map(|x| ((*start).clone(), x.clone())));
        }
        Ok(Preferences { declared: pairs, closure })
    }

    pub fn declared(&self) -> &[(PrefItem, PrefItem)] {
        &self.declared
    }

    pub fn is_empty(&self) -> bool {
        self.declared.is_empty()
    }

    pub fn less(&self, a: &PrefItem, b: &PrefItem) -> bool {
        self.closure.contains(&(a.clone(), b.clone()))
    }

    pub fn rule_less(&self, a: &Symbol, b: &Symbol) -> bool {
        self.less(&PrefItem::Rule(a.clone()), &PrefItem::Rule(b.clone()))
    }

    pub fn formula_less(&self, a: &Formula, b: &Formula) -> bool {
        self.less(&PrefItem::Formula(a.clone()), &PrefItem::Formula(b.clone()))
    }

    /// `min_<`: the items with no strictly smaller item in the same set.
    pub fn minimal<T: Clone>(&self, items: &[T], less: impl Fn(&T, &T) -> bool) -> Vec<T> {
        items
            .iter()
            .filter(|x| !items.iter().any(|y| less(y, x)))
            .cloned()
            .collect()
    }
}

#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    /// Closed formulas, declaration order, no duplicates.
    pub sigma: Vec<Formula>,
    pub rules: Vec<DefeasibleRule>,
    pub preferences: Preferences,
    pub queries: Vec<Formula>,
}

impl KnowledgeBase {
    /// Validates and assembles a knowledge base.
    pub fn new(
        sigma: Vec<Formula>,
        rules: Vec<DefeasibleRule>,
        prefs: Vec<(PrefItem, PrefItem)>,
        queries: Vec<Formula>,
    ) -> Result<KnowledgeBase, LangError> {
        let mut dedup = Vec::new();
        for f in sigma {
            if let Some(v) = f.free_vars().into_iter().next() {
                return Err(LangError::FreeVariable { var: v.to_string(), context: f.to_string() });
            }
            if !dedup.contains(&f) {
                dedup.push(f);
            }
        }
        for q in &queries {
            if let Some(v) = q.free_vars().into_iter().next() {
                return Err(LangError::FreeVariable { var: v.to_string(), context: q.to_string() });
            }
        }
        let mut ids = BTreeSet::new();
        for r in &rules {
            if !ids.insert(r.id.clone()) {
                return Err(LangError::DuplicateRule(r.id.to_string()));
            }
        }
        let schemas: BTreeMap<Symbol, Vec<Symbol>> =
            rules.iter().map(|r| (r.id.clone(), r.free_vars.clone())).collect();
        let mut rules = rules;
        for r in &mut rules {
            if let RuleHead::Undercut { target, target_vars } = &mut r.consequent {
                let Some(vars) = schemas.get(target) else {
                    return Err(LangError::UnknownRule(target.to_string()));
                };
                let own = r.antecedent.free_vars();
                if let Some(v) = vars.iter().find(|v| !own.contains(*v)) {
                    return Err(LangError::FreeVariable {
                        var: v.to_string(),
                        context: format!("not({target}) in rule {}", r.id),
                    });
                }
                *target_vars = vars.clone();
            }
        }
        for (a, b) in &prefs {
            for item in [a, b] {
                match item {
                    PrefItem::Rule(id) if !ids.contains(id) => {
                        return Err(LangError::UnknownRule(id.to_string()))
                    }
                    PrefItem::Formula(f) if !dedup.contains(f) => {
                        return Err(LangError::PreferenceOutsideSigma(f.to_string()))
                    }
                    _ => {}
                }
            }
        }
        let kb = KnowledgeBase {
            sigma: dedup,
            rules,
            preferences: Preferences::new(prefs)?,
            queries,
        };
        kb.check_arities()?;
        Ok(kb)
    }

    pub fn rule(&self, id: &str) -> Option<&DefeasibleRule> {
        self.rules.iter().find(|r| &*r.id == id)
    }

    pub fn is_propositional(&self) -> bool {
        self.sigma.iter().all(Formula::is_propositional)
            && self.queries.iter().all(Formula::is_propositional)
            && self.rules.iter().all(DefeasibleRule::is_propositional)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.sigma
            .iter()
            .chain(&self.queries)
            .chain(self.rules.iter().flat_map(|r| {
                std::iter::once(&r.antecedent).chain(match &r.consequent {
                    RuleHead::Formula(f) => Some(f),
                    RuleHead::Undercut { .. } => None,
                })
            }))
    }

    /// Ground instance for a key, if the schema exists.
    pub fn instance(&self, key: &RuleKey) -> Option<GroundRule> {
        self.rule(&key.id).map(|r| instantiate(r, key.subst.clone()))
    }

    fn check_arities(&self) -> Result<(), LangError> {
        let mut preds: BTreeMap<Symbol, usize> = BTreeMap::new();
        let mut funcs: BTreeMap<Symbol, usize> = BTreeMap::new();
        fn term_arity(t: &Term, funcs: &mut BTreeMap<Symbol, usize>) -> Result<(), LangError> {
            if let Term::Func(name, args) = t {
                let n = *funcs.entry(name.clone()).or_insert(args.len());
                if n != args.len() {
                    return Err(LangError::Arity { symbol: name.to_string(), expected: n, found: args.len() });
                }
                for a in args.iter() {
                    term_arity(a, funcs)?;
                }
            }
            Ok(())
        }
        let mut result = Ok(());
        for f in self.formulas() {
            f.visit_atoms(&mut |p, args| {
                if result.is_err() {
                    return;
                }
                let n = *preds.entry(p.clone()).or_insert(args.len());
                if n != args.len() {
                    result = Err(LangError::Arity { symbol: p.to_string(), expected: n, found: args.len() });
                    return;
                }
                for a in args {
                    if let Err(e) = term_arity(a, &mut funcs) {
                        result = Err(e);
                        return;
                    }
                }
            });
        }
        result
    }
}
