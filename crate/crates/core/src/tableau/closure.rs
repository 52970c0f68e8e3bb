use std::collections::HashMap;

use super::{Entry, NodeId, Tableau, TableauError};
use crate::arguments::Support;
use crate::lang::Formula;

/// `(S, φ), (S', ¬φ) ⟹ (S ∪ S', ⊥)`. A lone `false` or `¬true` closes by
/// itself; pass the same entry twice for that case.
pub fn close_pair(e1: &Entry, e2: &Entry) -> Result<Entry, TableauError> {
    let alone = |e: &Entry| match &e.formula {
        Formula::False => true,
        Formula::Not(inner) => **inner == Formula::True,
        _ => false,
    };
    if e1 == e2 && alone(e1) {
        return Ok(Entry::new(e1.support.clone(), Formula::False));
    }
    let complementary = matches!(&e2.formula, Formula::Not(x) if **x == e1.formula)
        || matches!(&e1.formula, Formula::Not(x) if **x == e2.formula);
    if !complementary {
        return Err(TableauError::NotComplementary(e1.formula.to_string(), e2.formula.to_string()));
    }
    Ok(Entry::new(e1.support.union(&e2.support), Formula::False))
}

/// Inserts `s` into a family kept ⊆-minimal. Returns whether it was kept.
pub(crate) fn minimal_insert(fam: &mut Vec<Support>, s: Support) -> bool {
    if fam.iter().any(|x| x.is_subset(&s)) {
        return false;
    }
    fam.retain(|x| !s.is_subset(x));
    fam.push(s);
    true
}

pub fn minimal_family(items: impl IntoIterator<Item = Support>) -> Vec<Support> {
    let mut fam = Vec::new();
    for s in items {
        minimal_insert(&mut fam, s);
    }
    fam.sort();
    fam
}

/// Result of closure-support extraction over a (sub)tableau.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSupports {
    /// ⊆-minimal supports with at most one test, canonical order.
    pub supports: Vec<Support>,
    /// Every leaf carries at least one ⊥.
    pub closed: bool,
}

impl ClosureSupports {
    pub fn with_tests(&self, n: usize) -> impl Iterator<Item = &Support> {
        self.supports.iter().filter(move |s| s.test_count() == n)
    }
}

/// Pre-order listing of the subtree at `node`.
pub(crate) fn preorder(t: &Tableau, node: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![node];
    while let Some(n) = stack.pop() {
        out.push(n);
        stack.extend(t.node(n).children.iter().rev());
    }
    out
}

/// Combines one support per child family, keeping the result ⊆-minimal and
/// free of supports with two or more tests. Returns `None` if the cap is hit.
pub(crate) fn product(families: &[&Vec<Support>], cap: usize) -> (Vec<Support>, bool) {
    let mut acc = vec![Support::empty()];
    let mut truncated = false;
    for fam in families {
        let mut next = Vec::new();
        'outer: for a in &acc {
            for b in fam.iter() {
                let u = a.union(b);
                if u.test_count() > 1 {
                    continue;
                }
                minimal_insert(&mut next, u);
                if next.len() > cap {
                    truncated = true;
                    break 'outer;
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    (acc, truncated)
}

impl Tableau {
    pub fn closure_supports(&mut self) -> ClosureSupports {
        self.closure_supports_below(Tableau::ROOT)
    }

    /// Closure supports of the subtree at `node`: unions of one ⊥ per leaf. Built
    /// bottom-up so that only ⊆-minimal combinations are carried; a support
    /// that is a superset of another one can never become minimal later.
    pub fn closure_supports_below(&mut self, node: NodeId) -> ClosureSupports {
        let cap = self.budget.combination_cap;
        let mut memo: HashMap<NodeId, Vec<Support>> = HashMap::new();
        let mut closed = true;
        for n in preorder(self, node).into_iter().rev() {
            let nd = self.node(n);
            let fam = if nd.children.is_empty() {
                if nd.closures.is_empty() {
                    closed = false;
                }
                minimal_family(nd.closures.iter().filter(|s| s.test_count() <= 1).cloned())
            } else {
                let fams: Vec<&Vec<Support>> = nd.children.iter().map(|c| &memo[c]).collect();
                let (fam, truncated) = product(&fams, cap);
                if truncated {
                    self.limits.combination_cap = true;
                }
                fam
            };
            memo.insert(n, fam);
        }
        let mut supports = memo.remove(&node).unwrap_or_default();
        if !closed {
            supports.clear();
        }
        supports.sort();
        ClosureSupports { supports, closed }
    }
}
