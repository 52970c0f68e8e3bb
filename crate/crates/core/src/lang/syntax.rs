use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-ish symbol. Cloning is a reference-count bump.
pub type Symbol = Arc<str>;

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
    Func(Symbol, Arc<[Term]>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(sym(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(sym(name))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if &**v == var => by.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Func(f, args) => Term::Func(
                f.clone(),
                args.iter().map(|a| a.substitute(var, by)).collect(),
            ),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Every ground subterm, the term itself included.
    fn collect_ground(&self, out: &mut BTreeSet<Term>) {
        if let Term::Func(_, args) = self {
            args.iter().for_each(|a| a.collect_ground(out));
        }
        if self.is_ground() {
            out.insert(self.clone());
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_constants(out)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A formula of the object language. `False` doubles as the closure marker ⊥
/// inside tableau entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Symbol, Arc<[Term]>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    ForAll(Symbol, Arc<Formula>),
    Exists(Symbol, Arc<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(sym(pred), args.into())
    }

    /// Zero-arity atom.
    pub fn prop(name: &str) -> Formula {
        Formula::Atom(sym(name), Arc::from([]))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Arc::new(a), Arc::new(b))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::ForAll(sym(var), Arc::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(sym(var), Arc::new(body))
    }

    /// `¬self`, stripping one negation instead of stacking two.
    pub fn complement(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Atoms, negated atoms and the constants `true`/`false` (possibly negated).
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => true,
            Formula::Not(inner) => matches!(**inner, Formula::True | Formula::False | Formula::Atom(..)),
            _ => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::True | Formula::False => true,
            Formula::Atom(_, args) => args.is_empty(),
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::ForAll(..) | Formula::Exists(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => {
                let mut vars = BTreeSet::new();
                args.iter().for_each(|a| a.collect_vars(&mut vars));
                out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces free occurrences of `var` by the ground term `by`.
    pub fn substitute(&self, var: &str, by: &Term) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.substitute(var, by)).collect())
            }
            Formula::Not(a) => Formula::not(a.substitute(var, by)),
            Formula::And(a, b) => Formula::and(a.substitute(var, by), b.substitute(var, by)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, by), b.substitute(var, by)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(var, by), b.substitute(var, by))
            }
            Formula::Iff(a, b) => Formula::iff(a.substitute(var, by), b.substitute(var, by)),
            Formula::ForAll(v, _) | Formula::Exists(v, _) if &**v == var => self.clone(),
            Formula::ForAll(v, body) => Formula::ForAll(v.clone(), Arc::new(body.substitute(var, by))),
            Formula::Exists(v, body) => Formula::Exists(v.clone(), Arc::new(body.substitute(var, by))),
        }
    }

    pub fn ground_terms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_ground(&mut out));
        out
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_constants(&mut out));
        out
    }

    /// Zero-arity atoms occurring in the formula.
    pub fn prop_atoms(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |p, args| {
            if args.is_empty() {
                out.insert(p.clone());
            }
        });
        out
    }

    pub(crate) fn visit_atoms(&self, f: &mut impl FnMut(&Symbol, &[Term])) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p, args) => f(p, args),
            Formula::Not(a) => a.visit_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::ForAll(_, body) | Formula::Exists(_, body) => body.visit_atoms(f),
        }
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        self.visit_atoms(&mut |_, args| args.iter().for_each(&mut *f));
    }

    /// Truth value under an assignment of the zero-arity atoms. `None` when the
    /// formula is not propositional.
    pub fn eval(&self, val: &impl Fn(&str) -> bool) -> Option<bool> {
        Some(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p, args) if args.is_empty() => val(p),
            Formula::Atom(..) => return None,
            Formula::Not(a) => !a.eval(val)?,
            Formula::And(a, b) => a.eval(val)? & b.eval(val)?,
            Formula::Or(a, b) => a.eval(val)? | b.eval(val)?,
            Formula::Implies(a, b) => !a.eval(val)? | b.eval(val)?,
            Formula::Iff(a, b) => a.eval(val)? == b.eval(val)?,
            Formula::ForAll(..) | Formula::Exists(..) => return None,
        })
    }

    /// Does a universally quantified claim occur in a position where it has to
    /// hold (∀ under even negation depth, ∃ under odd depth)?
    pub fn has_universal_claim(&self) -> bool {
        self.universal_claim(true)
    }

    fn universal_claim(&self, positive: bool) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => false,
            Formula::Not(a) => a.universal_claim(!positive),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.universal_claim(positive) || b.universal_claim(positive)
            }
            Formula::Implies(a, b) => a.universal_claim(!positive) || b.universal_claim(positive),
            Formula::Iff(a, b) => {
                a.universal_claim(true)
                    || a.universal_claim(false)
                    || b.universal_claim(true)
                    || b.universal_claim(false)
            }
            Formula::ForAll(_, body) => positive || body.universal_claim(positive),
            Formula::Exists(_, body) => !positive || body.universal_claim(positive),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::lang::render_formula(self))
    }
}
