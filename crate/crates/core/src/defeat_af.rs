//! Undercutting arguments, the attack relation and Dung semantics.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;
use thiserror::Error;

use crate::arguments::{Argument, Conclusion, SupportElement};
use crate::lang::{Formula, GroundRule, Preferences};

pub const ENUMERATION_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DefeatError {
    #[error("only test-free arguments for false can be undercut: {0}")]
    NotUndercuttable(String),
    #[error("{0} arguments exceed the enumeration cap of {1}")]
    TooLarge(usize, usize),
}

/// Removes the weakest last rules, or the weakest premises
/// when no rule is involved.
pub fn undercut(a: &Argument, prefs: &Preferences) -> Result<Vec<Argument>, DefeatError> {
    if a.conclusion != Conclusion::Falsum || a.support.test_count() > 0 {
        return Err(DefeatError::NotUndercuttable(a.to_string()));
    }
    let mut out = Vec::new();
    let last: Vec<(&SupportElement, &GroundRule)> = a
        .support
        .iter()
        .filter_map(|e| match e {
            SupportElement::Rule(app) => Some((e, &app.rule)),
            _ => None,
        })
        .collect();
    if !last.is_empty() {
        let rules: Vec<&GroundRule> = last.iter().map(|(_, r)| *r).collect();
        let weakest = prefs.minimal(&rules, |x, y| prefs.rule_less(&x.key.id, &y.key.id));
        for (e, r) in &last {
            if weakest.contains(r) {
                out.push(Argument::new(a.support.without(e), Conclusion::NotRule(r.key.clone())));
            }
        }
    } else {
        let premises: Vec<&Formula> = a.support.iter().filter_map(|e| e.proposition()).collect();
        for s in prefs.minimal(&premises, |x, y| prefs.formula_less(x, y)) {
            let e = SupportElement::Premise(s.clone());
            out.push(Argument::new(a.support.without(&e), Conclusion::NotPremise(s.clone())));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttackGraph {
    pub arguments: Vec<Argument>,
    /// `(attacker, target)` indices.
    pub attacks: BTreeSet<(usize, usize)>,
}

impl AttackGraph {
    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn index_of(&self, a: &Argument) -> Option<usize> {
        self.arguments.iter().position(|x| x == a)
    }

    /// A plain graph over `n` anonymous nodes; arguments are left empty.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> AttackGraph {
        let arguments = (0..n)
            .map(|i| Argument::for_formula(Default::default(), Formula::prop(&format!("a{i}"))))
            .collect();
        AttackGraph { arguments, attacks: edges.into_iter().collect() }
    }

    pub fn attackers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.attacks.iter().filter(move |(_, t)| *t == i).map(|(a, _)| *a)
    }

    /// `arg(aN).` / `att(aI,aJ).` lines.
    pub fn to_apx(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            let _ = writeln!(out, "arg(a{i}).");
        }
        for (a, b) in &self.attacks {
            let _ = writeln!(out, "att(a{a},a{b}).");
        }
        out
    }
}

fn attacks(attacker: &Argument, target: &Argument) -> bool {
    match &attacker.conclusion {
        Conclusion::NotRule(k) => target.views().uses_rule(k),
        Conclusion::NotPremise(s) => target.views().premises.contains(s),
        _ => false,
    }
}

/// Undercuts every test-free argument for ⊥ and puts the result next to the
/// remaining arguments. Arguments for ⊥ themselves stay out of the graph.
pub fn build_af(pool: impl IntoIterator<Item = Argument>, prefs: &Preferences) -> AttackGraph {
    let mut args: Vec<Argument> = Vec::new();
    let push = |a: Argument, args: &mut Vec<Argument>| {
        if !args.contains(&a) {
            args.push(a);
        }
    };
    for a in pool {
        if a.conclusion == Conclusion::Falsum {
            if let Ok(us) = undercut(&a, prefs) {
                for u in us {
                    push(u, &mut args);
                }
            }
        } else {
            push(a, &mut args);
        }
    }
    let mut g = AttackGraph { arguments: args, attacks: BTreeSet::new() };
    for (i, a) in g.arguments.iter().enumerate() {
        if !a.conclusion.is_undercut() {
            continue;
        }
        for (j, b) in g.arguments.iter().enumerate() {
            if attacks(a, b) {
                g.attacks.insert((i, j));
            }
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Grounded,
    Stable,
    Preferred,
}

impl std::str::FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grounded" => Ok(Semantics::Grounded),
            "stable" => Ok(Semantics::Stable),
            "preferred" => Ok(Semantics::Preferred),
            _ => Err(format!("unknown semantics `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub semantics: Semantics,
    pub members: BTreeSet<usize>,
}

/// Least fixpoint of the characteristic function.
pub fn grounded(g: &AttackGraph) -> Extension {
    let mut ext: BTreeSet<usize> = BTreeSet::new();
    loop {
        let next: BTreeSet<usize> = (0..g.len())
            .filter(|&i| g.attackers(i).all(|b| g.attackers(b).any(|c| ext.contains(&c))))
            .collect();
        if next == ext {
            return Extension { semantics: Semantics::Grounded, members: ext };
        }
        ext = next;
    }
}

struct Masks {
    attacks: Vec<u32>,
    attackers: Vec<u32>,
}

fn masks(g: &AttackGraph) -> Masks {
    let mut m = Masks { attacks: vec![0; g.len()], attackers: vec![0; g.len()] };
    for &(a, b) in &g.attacks {
        m.attacks[a] |= 1 << b;
        m.attackers[b] |= 1 << a;
    }
    m
}

fn members(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Brute force over all subsets; at most [`ENUMERATION_CAP`] arguments.
pub fn enumerate_extensions(g: &AttackGraph, semantics: Semantics) -> Result<Vec<Extension>, DefeatError> {
    if semantics == Semantics::Grounded {
        return Ok(vec![grounded(g)]);
    }
    let n = g.len();
    if n > ENUMERATION_CAP {
        return Err(DefeatError::TooLarge(n, ENUMERATION_CAP));
    }
    let m = masks(g);
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut found = Vec::new();
    for s in 0..=full {
        let mut hit = 0u32;
        for i in 0..n {
            if s & (1 << i) != 0 {
                hit |= m.attacks[i];
            }
        }
        if hit & s != 0 {
            continue;
        }
        let ok = match semantics {
            Semantics::Stable => (s | hit) == full,
            _ => (0..n).all(|i| s & (1 << i) == 0 || m.attackers[i] & !hit == 0),
        };
        if ok {
            found.push(s);
        }
    }
    if semantics == Semantics::Preferred {
        found.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
        let mut keep: Vec<u32> = Vec::new();
        for s in found {
            if !keep.iter().any(|k| k & s == s) {
                keep.push(s);
            }
        }
        keep.sort();
        found = keep;
    }
    Ok(found.into_iter().map(|s| Extension { semantics, members: members(s) }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Justified,
    Defensible,
    Overruled,
    /// No argument for the conclusion exists.
    Unsupported,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Justified => "justified",
            Status::Defensible => "defensible",
            Status::Overruled => "overruled",
            Status::Unsupported => "unsupported",
        })
    }
}

/// Status of a conclusion given the indices of its arguments. Under grounded
/// semantics an argument outside the extension that is not attacked by it
/// counts as defensible.
pub fn status_of(g: &AttackGraph, exts: &[Extension], semantics: Semantics, args: &[usize]) -> Status {
    if args.is_empty() {
        return Status::Unsupported;
    }
    if semantics == Semantics::Grounded {
        let e = &exts[0].members;
        if args.iter().any(|a| e.contains(a)) {
            return Status::Justified;
        }
        let all_out = args.iter().all(|&a| g.attackers(a).any(|b| e.contains(&b)));
        return if all_out { Status::Overruled } else { Status::Defensible };
    }
    if !exts.is_empty() && args.iter().any(|a| exts.iter().all(|e| e.members.contains(a))) {
        Status::Justified
    } else if args.iter().any(|a| exts.iter().any(|e| e.members.contains(a))) {
        Status::Defensible
    } else {
        Status::Overruled
    }
}

/// Status of every listed query formula.
pub fn justified_conclusions(
    g: &AttackGraph,
    semantics: Semantics,
    queries: &[Formula],
) -> Result<Vec<(Formula, Status)>, DefeatError> {
    let exts = enumerate_extensions(g, semantics)?;
    Ok(queries
        .iter()
        .map(|q| {
            let idx: Vec<usize> = (0..g.len())
                .filter(|&i| g.arguments[i].conclusion.formula() == Some(q))
                .collect();
            (q.clone(), status_of(g, &exts, semantics, &idx))
        })
        .collect())
}
