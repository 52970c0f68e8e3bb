use crate::lang::{Formula, Symbol, Term};

/// Which rule set splits disjunctive formulas.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Expansion {
    #[default]
    Standard,
    /// ∨, → and ¬∧ split into three mutually exclusive cases.
    Exclusive,
}

/// How a formula is rewritten.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rewrite {
    /// One child carrying all products.
    Alpha(Vec<Formula>),
    /// One child per product list.
    Beta(Vec<Vec<Formula>>),
    /// Instantiate with a new constant; `negate` wraps the instance in ¬.
    Delta { var: Symbol, body: Formula, negate: bool },
    /// Instantiate with terms of the current node; re-applicable.
    Gamma { var: Symbol, body: Formula, negate: bool },
    Literal,
}

impl Rewrite {
    pub fn instance(var: &Symbol, body: &Formula, negate: bool, t: &Term) -> Formula {
        let f = body.substitute(var, t);
        if negate {
            Formula::not(f)
        } else {
            f
        }
    }
}

pub fn classify(f: &Formula, expansion: Expansion) -> Rewrite {
    use Formula::*;
    let not = |x: &Formula| Formula::not(x.clone());
    if expansion == Expansion::Exclusive {
        if let Ok(children) = exclusive_split(f) {
            return Rewrite::Beta(children.into_iter().map(|c| vec![c]).collect());
        }
    }
    match f {
        And(a, b) => Rewrite::Alpha(vec![(**a).clone(), (**b).clone()]),
        Iff(a, b) => Rewrite::Alpha(vec![
            Formula::implies((**a).clone(), (**b).clone()),
            Formula::implies((**b).clone(), (**a).clone()),
        ]),
        Or(a, b) => Rewrite::Beta(vec![vec![(**a).clone()], vec![(**b).clone()]]),
        Implies(a, b) => Rewrite::Beta(vec![vec![not(a)], vec![(**b).clone()]]),
        Exists(v, body) => Rewrite::Delta { var: v.clone(), body: (**body).clone(), negate: false },
        ForAll(v, body) => Rewrite::Gamma { var: v.clone(), body: (**body).clone(), negate: false },
        Not(inner) => match &**inner {
            Not(a) => Rewrite::Alpha(vec![(**a).clone()]),
            Or(a, b) => Rewrite::Alpha(vec![not(a), not(b)]),
            Implies(a, b) => Rewrite::Alpha(vec![(**a).clone(), not(b)]),
            And(a, b) => Rewrite::Beta(vec![vec![not(a)], vec![not(b)]]),
            Iff(a, b) => Rewrite::Beta(vec![
                vec![Formula::not(Formula::implies((**a).clone(), (**b).clone()))],
                vec![Formula::not(Formula::implies((**b).clone(), (**a).clone()))],
            ]),
            ForAll(v, body) => Rewrite::Delta { var: v.clone(), body: (**body).clone(), negate: true },
            Exists(v, body) => Rewrite::Gamma { var: v.clone(), body: (**body).clone(), negate: true },
            True | False | Atom(..) => Rewrite::Literal,
        },
        True | False | Atom(..) => Rewrite::Literal,
    }
}

/// The three mutually exclusive cases for ∨, → and ¬∧.
pub fn exclusive_split(f: &Formula) -> Result<[Formula; 3], Formula> {
    let and = Formula::and;
    let not = Formula::not;
    match f {
        Formula::Or(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            Ok([and(a.clone(), not(b.clone())), and(a.clone(), b.clone()), and(not(a), b)])
        }
        Formula::Implies(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            Ok([and(not(a.clone()), not(b.clone())), and(not(a.clone()), b.clone()), and(a, b)])
        }
        Formula::Not(inner) => match &**inner {
            Formula::And(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                Ok([and(not(a.clone()), b.clone()), and(not(a.clone()), not(b.clone())), and(a, not(b))])
            }
            _ => Err(f.clone()),
        },
        _ => Err(f.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn strs(xs: &[Formula]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn exclusive_cases() {
        assert_eq!(strs(&exclusive_split(&f("h | r")).unwrap()), ["h & ~r", "h & r", "~h & r"]);
        assert_eq!(strs(&exclusive_split(&f("~(p & q)")).unwrap()), ["~p & q", "~p & ~q", "p & ~q"]);
        assert_eq!(strs(&exclusive_split(&f("p -> q")).unwrap()), ["~p & ~q", "~p & q", "p & q"]);
        assert!(exclusive_split(&f("p & q")).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&f("~~p"), Expansion::Standard), Rewrite::Alpha(vec![f("p")]));
        assert_eq!(
            classify(&f("p | q"), Expansion::Standard),
            Rewrite::Beta(vec![vec![f("p")], vec![f("q")]])
        );
        assert_eq!(classify(&f("~p"), Expansion::Standard), Rewrite::Literal);
        assert!(matches!(classify(&f("exists X. p(X)"), Expansion::Standard), Rewrite::Delta { .. }));
        assert!(matches!(classify(&f("~exists X. p(X)"), Expansion::Standard), Rewrite::Gamma { negate: true, .. }));
        match classify(&f("p | q"), Expansion::Exclusive) {
            Rewrite::Beta(c) => assert_eq!(c.len(), 3),
            other => panic!("{other:?}"),
        }
    }
}
