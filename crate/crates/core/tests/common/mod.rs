//! Shared test helpers: a standalone truth-table evaluator and seeded random
//! generators for formulas, knowledge bases and attack graphs.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use argtab::arguments::{Support, SupportElement};
use argtab::lang::{parse_knowledge_base, Formula, KnowledgeBase};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn collect_atoms(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(..) => {
            out.insert(f.to_string());
        }
        Formula::Not(a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        Formula::ForAll(..) | Formula::Exists(..) => panic!("quantified formula in propositional oracle"),
    }
}

fn eval(f: &Formula, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(..) => v[&f.to_string()],
        Formula::Not(a) => !eval(a, v),
        Formula::And(a, b) => eval(a, v) && eval(b, v),
        Formula::Or(a, b) => eval(a, v) || eval(b, v),
        Formula::Implies(a, b) => !eval(a, v) || eval(b, v),
        Formula::Iff(a, b) => eval(a, v) == eval(b, v),
        Formula::ForAll(..) | Formula::Exists(..) => unreachable!(),
    }
}

/// Brute-force satisfiability over every assignment of the atoms involved.
pub fn sat(fs: &[Formula]) -> bool {
    let mut atoms = BTreeSet::new();
    for f in fs {
        collect_atoms(f, &mut atoms);
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    assert!(atoms.len() <= 16, "too many atoms for the oracle");
    (0u32..1 << atoms.len()).any(|bits| {
        let v = atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits & (1 << i) != 0)).collect();
        fs.iter().all(|f| eval(f, &v))
    })
}

pub fn entails(premises: &[Formula], goal: &Formula) -> bool {
    let mut fs = premises.to_vec();
    fs.push(Formula::not(goal.clone()));
    !sat(&fs)
}

pub fn equivalent(a: &Formula, b: &Formula) -> bool {
    entails(&[a.clone()], b) && entails(&[b.clone()], a)
}

/// Ŝ: premises and tests as themselves, rule applications as their
/// consequents.
pub fn hat(s: &Support) -> Vec<Formula> {
    s.iter()
        .filter_map(|e| match e {
            SupportElement::Premise(f) => Some(f.clone()),
            SupportElement::Test { formula, .. } => Some(formula.clone()),
            SupportElement::Rule(app) => app.rule.consequent_formula().cloned(),
        })
        .collect()
}

pub fn hat_elements(es: &[SupportElement]) -> Vec<Formula> {
    hat(&Support::new(es.iter().cloned()))
}

pub struct Gen {
    pub rng: StdRng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: StdRng::seed_from_u64(seed) }
    }

    pub fn atom(&mut self, atoms: usize) -> String {
        let i = self.rng.gen_range(0..atoms);
        ["a", "b", "c", "d", "e", "f", "g", "h"][i].to_string()
    }

    pub fn literal(&mut self, atoms: usize) -> String {
        let a = self.atom(atoms);
        if self.rng.gen_bool(0.3) {
            format!("~{a}")
        } else {
            a
        }
    }

    /// Formula source text of at most `depth` nested connectives.
    pub fn formula(&mut self, atoms: usize, depth: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.literal(atoms);
        }
        let a = self.formula(atoms, depth - 1);
        let b = self.formula(atoms, depth - 1);
        match self.rng.gen_range(0..6) {
            0 => format!("({a} & {b})"),
            1 | 2 => format!("({a} | {b})"),
            3 => format!("({a} -> {b})"),
            4 => format!("~({a} & {b})"),
            _ => format!("~{a}"),
        }
    }

    /// A propositional knowledge base with up to the given numbers of
    /// premises and rules; rule consequents are literals.
    pub fn kb(&mut self, atoms: usize, formulas: usize, rules: usize, depth: usize) -> KnowledgeBase {
        let mut src = String::new();
        for _ in 0..self.rng.gen_range(1..=formulas) {
            let f = self.formula(atoms, depth);
            src.push_str(&format!("sigma: {f}.\n"));
        }
        for i in 0..self.rng.gen_range(0..=rules) {
            let ante = self.formula(atoms, 1);
            let cons = self.literal(atoms);
            src.push_str(&format!("rule r{i}: {ante} ~> {cons}.\n"));
        }
        parse_knowledge_base(&src).unwrap_or_else(|e| panic!("{e}\n{src}"))
    }

    /// Random attack edges over `n` nodes, self-attacks included.
    pub fn graph(&mut self, n: usize) -> Vec<(usize, usize)> {
        let p = self.rng.gen_range(0.05..0.35);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.rng.gen_bool(p) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Query pool over the first `atoms` atoms: every literal plus a few
/// compound formulas.
pub fn query_pool(atoms: usize) -> Vec<Formula> {
    let names = &["a", "b", "c", "d", "e", "f", "g", "h"][..atoms];
    let mut out = Vec::new();
    for a in names {
        out.push(Formula::prop(a));
        out.push(Formula::not(Formula::prop(a)));
    }
    for w in names.windows(2) {
        out.push(Formula::or(Formula::prop(w[0]), Formula::prop(w[1])));
        out.push(Formula::and(Formula::prop(w[0]), Formula::prop(w[1])));
    }
    out
}

/// All subsets of `items` (as index masks) in increasing size.
pub fn subsets_by_size(n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..1u32 << n).collect();
    v.sort_by_key(|m| (m.count_ones(), *m));
    v
}

pub fn pick<T: Clone>(items: &[T], mask: u32) -> Vec<T> {
    items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x.clone()).collect()
}

/// ⊆-minimal subsets of `items` satisfying `pred`, which must be monotone.
pub fn minimal_subsets<T: Clone>(items: &[T], pred: impl Fn(&[T]) -> bool) -> Vec<Vec<T>> {
    let mut found: Vec<u32> = Vec::new();
    for m in subsets_by_size(items.len()) {
        if found.iter().any(|f| f & m == *f) {
            continue;
        }
        if pred(&pick(items, m)) {
            found.push(m);
        }
    }
    found.into_iter().map(|m| pick(items, m)).collect()
}
