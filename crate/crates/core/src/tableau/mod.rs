//! The argumentation tableau: a tree whose nodes hold supported propositions.
//! Nodes store only the entries added at them; a branch is the union along
//! the path from the root, so an entry added to a node is inherited by its
//! whole subtree.

mod closure;
mod dump;
mod prove;
mod rules;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::arguments::{Support, SupportElement, TestId};
use crate::lang::{sym, Formula, KnowledgeBase, Symbol, Term};

pub use closure::{close_pair, minimal_family, ClosureSupports};
pub(crate) use closure::{preorder, product};
pub use dump::{render_dot, render_text};
pub use prove::{prove, ProveResult, TableauOracle};
pub use rules::{classify, exclusive_split, Expansion, Rewrite};

pub type EntryId = usize;
pub type NodeId = usize;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Budget {
    pub gamma_rounds: usize,
    pub fresh_constants: usize,
    pub max_entries: usize,
    pub depth_cap: usize,
    pub combination_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            gamma_rounds: 3,
            fresh_constants: 8,
            max_entries: 100_000,
            depth_cap: 16,
            combination_cap: 10_000,
        }
    }
}

/// Which limits were reached. Hitting the rule depth cap is recorded but is
/// not counted as incompleteness: it only cuts self-feeding rule chains.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug, Serialize)]
pub struct Limits {
    pub entry_cap: bool,
    pub fresh_cap: bool,
    pub gamma_rounds: bool,
    pub combination_cap: bool,
    pub depth_cap: bool,
}

impl Limits {
    pub fn incomplete(&self) -> bool {
        self.entry_cap || self.fresh_cap || self.gamma_rounds || self.combination_cap
    }

    pub fn merge(&mut self, o: Limits) {
        self.entry_cap |= o.entry_cap;
        self.fresh_cap |= o.fresh_cap;
        self.gamma_rounds |= o.gamma_rounds;
        self.combination_cap |= o.combination_cap;
        self.depth_cap |= o.depth_cap;
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("entry {0} is a literal and cannot be rewritten")]
    NotRewritable(String),
    #[error("entry is not on the branch of node {0}")]
    NotOnBranch(NodeId),
    #[error("node {0} is not a leaf")]
    NotLeaf(NodeId),
    #[error("`{0}` and `{1}` are not complementary")]
    NotComplementary(String, String),
    #[error("no fresh constant left within budget")]
    FreshExhausted,
}

/// `(S, φ)`; a `false` formula is the closure marker ⊥.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Entry {
    pub support: Support,
    pub formula: Formula,
}

impl Entry {
    pub fn new(support: Support, formula: Formula) -> Entry {
        Entry { support, formula }
    }

    pub fn premise(f: Formula) -> Entry {
        Entry::new(Support::single(SupportElement::Premise(f.clone())), f)
    }
}

/// The rewrite applied at a node to produce its children.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Step {
    Alpha(EntryId),
    Beta(EntryId),
    Delta(EntryId, Term),
    Gamma(EntryId, Vec<Term>),
}

impl Step {
    pub fn entry(&self) -> EntryId {
        match self {
            Step::Alpha(e) | Step::Beta(e) | Step::Delta(e, _) | Step::Gamma(e, _) => *e,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Node {
    pub parent: Option<NodeId>,
    pub entries: Vec<EntryId>,
    pub step: Option<Step>,
    pub children: Vec<NodeId>,
    /// ⊥ supports found on a leaf from complementary pairs and falsum entries.
    pub closures: Vec<Support>,
    /// Test-free ⊥ records propagated towards the root (local closures).
    pub records: Vec<Support>,
}

/// Per-branch bookkeeping while walking down the tree.
#[derive(Clone, Default)]
struct Branch {
    entries: Vec<EntryId>,
    present: HashSet<EntryId>,
    done: HashSet<EntryId>,
    gamma: HashMap<EntryId, (usize, BTreeSet<Term>)>,
    terms: BTreeSet<Term>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tableau {
    entries: Vec<Entry>,
    index: HashMap<Entry, EntryId>,
    nodes: Vec<Node>,
    constants: BTreeSet<Symbol>,
    fresh: usize,
    next_test: u32,
    pub expansion: Expansion,
    pub budget: Budget,
    pub limits: Limits,
}

/// Everything needed to undo changes made below one node.
#[derive(Clone, Debug)]
pub struct Snapshot {
    saved: Vec<(NodeId, Node)>,
    nodes_len: usize,
    entries_len: usize,
    constants: BTreeSet<Symbol>,
    fresh: usize,
    next_test: u32,
    limits: Limits,
}

impl Tableau {
    pub fn new(expansion: Expansion, budget: Budget) -> Tableau {
        Tableau {
            entries: Vec::new(),
            index: HashMap::new(),
            nodes: vec![Node::default()],
            constants: BTreeSet::new(),
            fresh: 0,
            next_test: 0,
            expansion,
            budget,
            limits: Limits::default(),
        }
    }

    pub const ROOT: NodeId = 0;

    pub fn entry(&self, id: EntryId) -> &Entry {
        &self.entries[id]
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.leaves_below(Self::ROOT)
    }

    /// Leaves of the subtree at `node`, left to right.
    pub fn leaves_below(&self, node: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            if self.nodes[n].children.is_empty() {
                out.push(n);
            } else {
                stack.extend(self.nodes[n].children.iter().rev());
            }
        }
        out
    }

    /// Root-to-node path, root first.
    pub fn path(&self, node: NodeId) -> Vec<NodeId> {
        let mut p = vec![node];
        let mut cur = node;
        while let Some(parent) = self.nodes[cur].parent {
            p.push(parent);
            cur = parent;
        }
        p.reverse();
        p
    }

    /// All entries on the branch ending at `node`, in insertion order.
    pub fn branch_entries(&self, node: NodeId) -> Vec<EntryId> {
        self.path(node).into_iter().flat_map(|n| self.nodes[n].entries.iter().copied()).collect()
    }

    /// Ground terms of every entry anywhere in the tableau.
    pub fn terms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for e in &self.entries {
            out.extend(e.formula.ground_terms());
        }
        out
    }

    fn intern(&mut self, e: Entry) -> EntryId {
        if let Some(&id) = self.index.get(&e) {
            return id;
        }
        self.constants.extend(e.formula.constants());
        let id = self.entries.len();
        self.index.insert(e.clone(), id);
        self.entries.push(e);
        id
    }

    /// Adds an entry to `node` (and so to its subtree). Returns `None` when
    /// the entry is already on the branch.
    pub fn add_entry(&mut self, node: NodeId, e: Entry) -> Option<EntryId> {
        let id = self.intern(e);
        if self.branch_entries(node).contains(&id) {
            return None;
        }
        self.nodes[node].entries.push(id);
        Some(id)
    }

    pub fn add_premise(&mut self, f: Formula) -> Option<EntryId> {
        self.add_entry(Self::ROOT, Entry::premise(f))
    }

    pub fn fresh_test_id(&mut self) -> TestId {
        let id = TestId(self.next_test);
        self.next_test += 1;
        id
    }

    /// Posts the test `({¬φ?}, ¬φ)` at `node` under a new id.
    pub fn add_test(&mut self, node: NodeId, goal: &Formula) -> (TestId, EntryId) {
        let id = self.fresh_test_id();
        let neg = Formula::not(goal.clone());
        let e = Entry::new(Support::single(SupportElement::Test { id, formula: neg.clone() }), neg);
        let eid = self.intern(e);
        self.nodes[node].entries.push(eid);
        (id, eid)
    }

    pub fn snapshot(&self, node: NodeId) -> Snapshot {
        Snapshot {
            saved: closure::preorder(self, node).into_iter().map(|n| (n, self.nodes[n].clone())).collect(),
            nodes_len: self.nodes.len(),
            entries_len: self.entries.len(),
            constants: self.constants.clone(),
            fresh: self.fresh,
            next_test: self.next_test,
            limits: self.limits,
        }
    }

    /// Undoes everything since `snap`, assuming changes were confined to the
    /// subtree of the snapshot node.
    pub fn restore(&mut self, snap: Snapshot) {
        self.nodes.truncate(snap.nodes_len);
        for (n, saved) in snap.saved {
            self.nodes[n] = saved;
        }
        for e in self.entries.drain(snap.entries_len..) {
            self.index.remove(&e);
        }
        self.constants = snap.constants;
        self.fresh = snap.fresh;
        self.next_test = snap.next_test;
        self.limits = snap.limits;
    }

    fn enter(&self, br: &mut Branch, node: NodeId) {
        for &e in &self.nodes[node].entries {
            if br.present.insert(e) {
                br.entries.push(e);
                br.terms.extend(self.entries[e].formula.ground_terms());
            }
        }
    }

    fn mark(br: &mut Branch, step: &Step) {
        match step {
            Step::Alpha(e) | Step::Beta(e) | Step::Delta(e, _) => {
                br.done.insert(*e);
            }
            Step::Gamma(e, ts) => {
                let g = br.gamma.entry(*e).or_default();
                g.0 += 1;
                g.1.extend(ts.iter().cloned());
            }
        }
    }

    /// Branch state just above `node` (ancestors' entries and steps).
    fn branch_above(&self, node: NodeId) -> Branch {
        let mut br = Branch::default();
        let path = self.path(node);
        for &n in &path[..path.len() - 1] {
            self.enter(&mut br, n);
            if let Some(s) = &self.nodes[n].step {
                Self::mark(&mut br, s);
            }
        }
        br
    }

    fn fresh_constant(&mut self) -> Option<Term> {
        if self.fresh >= self.budget.fresh_constants {
            self.limits.fresh_cap = true;
            return None;
        }
        loop {
            self.fresh += 1;
            let name = format!("c{}", self.fresh);
            if !self.constants.contains(name.as_str()) {
                let s = sym(&name);
                self.constants.insert(s.clone());
                return Some(Term::Const(s));
            }
        }
    }

    /// The next rewrite for a leaf: α/δ first, then β, then γ; ties broken by
    /// branch insertion order.
    fn next_step(&mut self, br: &Branch) -> Option<(Step, Vec<Vec<Formula>>)> {
        let mut beta = None;
        let mut gamma = Vec::new();
        for &e in &br.entries {
            if br.done.contains(&e) {
                continue;
            }
            match classify(&self.entries[e].formula, self.expansion) {
                Rewrite::Alpha(fs) => return Some((Step::Alpha(e), vec![fs])),
                Rewrite::Delta { var, body, negate } => match self.fresh_constant() {
                    Some(c) => {
                        let f = Rewrite::instance(&var, &body, negate, &c);
                        return Some((Step::Delta(e, c), vec![vec![f]]));
                    }
                    None => continue,
                },
                Rewrite::Beta(children) => {
                    if beta.is_none() {
                        beta = Some((Step::Beta(e), children));
                    }
                }
                Rewrite::Gamma { .. } => gamma.push(e),
                Rewrite::Literal => {}
            }
        }
        if beta.is_some() {
            return beta;
        }
        for e in gamma {
            let Rewrite::Gamma { var, body, negate } = classify(&self.entries[e].formula, self.expansion) else {
                unreachable!()
            };
            let (rounds, used) = br.gamma.get(&e).cloned().unwrap_or_default();
            let mut fresh: Vec<Term> = br.terms.iter().filter(|t| !used.contains(*t)).cloned().collect();
            if br.terms.is_empty() && rounds == 0 {
                match self.fresh_constant() {
                    Some(c) => fresh.push(c),
                    None => continue,
                }
            }
            if fresh.is_empty() {
                continue;
            }
            if rounds >= self.budget.gamma_rounds {
                self.limits.gamma_rounds = true;
                continue;
            }
            let products = fresh.iter().map(|t| Rewrite::instance(&var, &body, negate, t)).collect();
            return Some((Step::Gamma(e, fresh), vec![products]));
        }
        None
    }

    /// Creates the children of leaf `node` for `step`, skipping products that
    /// are already on the branch.
    fn grow(&mut self, node: NodeId, br: &Branch, step: Step, products: Vec<Vec<Formula>>) -> Vec<NodeId> {
        let support = self.entries[step.entry()].support.clone();
        let mut kids = Vec::with_capacity(products.len());
        for fs in products {
            let id = self.nodes.len();
            let mut child = Node { parent: Some(node), ..Node::default() };
            for f in fs {
                let eid = self.intern(Entry::new(support.clone(), f));
                if !br.present.contains(&eid) && !child.entries.contains(&eid) {
                    child.entries.push(eid);
                }
            }
            self.nodes.push(child);
            kids.push(id);
        }
        self.nodes[node].step = Some(step);
        self.nodes[node].children = kids.clone();
        kids
    }

    fn close_leaf(&mut self, node: NodeId, br: &Branch) {
        let mut by_formula: HashMap<&Formula, Vec<EntryId>> = HashMap::new();
        for &e in &br.entries {
            by_formula.entry(&self.entries[e].formula).or_default().push(e);
        }
        let mut found: Vec<Support> = Vec::new();
        for &e in &br.entries {
            let en = &self.entries[e];
            match &en.formula {
                Formula::False => found.push(en.support.clone()),
                Formula::Not(inner) if **inner == Formula::True => found.push(en.support.clone()),
                Formula::Not(inner) => {
                    if let Some(pos) = by_formula.get(&**inner) {
                        for &p in pos {
                            found.push(self.entries[p].support.union(&en.support));
                        }
                    }
                }
                _ => {}
            }
        }
        found.sort();
        found.dedup();
        self.nodes[node].closures = found;
    }

    /// Expands every leaf below `node` until no rule applies or the budget
    /// runs out. Leaf closures are recomputed for the whole subtree.
    pub fn saturate_below(&mut self, node: NodeId) {
        let mut stack = vec![(node, self.branch_above(node))];
        while let Some((n, mut br)) = stack.pop() {
            self.enter(&mut br, n);
            if let Some(step) = self.nodes[n].step.clone() {
                Self::mark(&mut br, &step);
                for &c in self.nodes[n].children.iter().rev() {
                    stack.push((c, br.clone()));
                }
                continue;
            }
            if self.entries.len() >= self.budget.max_entries {
                self.limits.entry_cap = true;
                self.close_leaf(n, &br);
                continue;
            }
            match self.next_step(&br) {
                None => self.close_leaf(n, &br),
                Some((step, products)) => {
                    Self::mark(&mut br, &step);
                    let kids = self.grow(n, &br, step, products);
                    for &c in kids.iter().rev() {
                        stack.push((c, br.clone()));
                    }
                }
            }
        }
    }

    pub fn saturate(&mut self) {
        self.saturate_below(Self::ROOT)
    }

    /// Applies the rewrite for `entry` at leaf `node` once and returns the new
    /// children.
    pub fn expand_once(&mut self, node: NodeId, entry: EntryId) -> Result<Vec<NodeId>, TableauError> {
        if !self.nodes[node].children.is_empty() {
            return Err(TableauError::NotLeaf(node));
        }
        let mut br = self.branch_above(node);
        self.enter(&mut br, node);
        if !br.present.contains(&entry) {
            return Err(TableauError::NotOnBranch(node));
        }
        let (step, products) = match classify(&self.entries[entry].formula, self.expansion) {
            Rewrite::Literal => {
                return Err(TableauError::NotRewritable(self.entries[entry].formula.to_string()))
            }
            Rewrite::Alpha(fs) => (Step::Alpha(entry), vec![fs]),
            Rewrite::Beta(cs) => (Step::Beta(entry), cs),
            Rewrite::Delta { var, body, negate } => {
                let c = self.fresh_constant().ok_or(TableauError::FreshExhausted)?;
                let f = Rewrite::instance(&var, &body, negate, &c);
                (Step::Delta(entry, c), vec![vec![f]])
            }
            Rewrite::Gamma { var, body, negate } => {
                let mut ts: Vec<Term> = br.terms.iter().cloned().collect();
                if ts.is_empty() {
                    ts.push(self.fresh_constant().ok_or(TableauError::FreshExhausted)?);
                }
                let fs = ts.iter().map(|t| Rewrite::instance(&var, &body, negate, t)).collect();
                (Step::Gamma(entry, ts), vec![fs])
            }
        };
        Self::mark(&mut br, &step);
        Ok(self.grow(node, &br, step, products))
    }

    /// Recomputes leaf closures without expanding anything.
    pub fn refresh_closures(&mut self) {
        for leaf in self.leaves() {
            let mut br = self.branch_above(leaf);
            self.enter(&mut br, leaf);
            self.close_leaf(leaf, &br);
        }
    }

    pub fn is_closed(&self) -> bool {
        self.is_closed_below(Self::ROOT)
    }

    pub fn is_closed_below(&self, node: NodeId) -> bool {
        self.leaves_below(node).iter().all(|&l| !self.nodes[l].closures.is_empty())
    }

    pub(crate) fn set_records(&mut self, node: NodeId, records: Vec<Support>) {
        self.nodes[node].records = records;
    }
}

/// Root node `{({σ}, σ) | σ ∈ Σ}` plus one test per formula in `tests`.
pub fn init_root(kb: &KnowledgeBase, tests: &[Formula], expansion: Expansion, budget: Budget) -> (Tableau, Vec<TestId>) {
    let mut t = Tableau::new(expansion, budget);
    for s in &kb.sigma {
        t.add_premise(s.clone());
    }
    let ids = tests.iter().map(|g| t.add_test(Tableau::ROOT, g).0).collect();
    (t, ids)
}
