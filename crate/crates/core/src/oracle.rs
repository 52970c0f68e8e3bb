//! Entailment checkers. The truth-table checker treats every ground atom as a
//! propositional variable; quantified input is rejected.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lang::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("formula is not quantifier-free and ground: {0}")]
    NotPropositional(String),
    #[error("{0} atoms exceed the truth-table limit of {1}")]
    TooManyAtoms(usize, usize),
    #[error("entailment undecided within budget")]
    Undecided,
}

pub trait Entailment {
    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<bool, OracleError>;

    fn inconsistent(&self, premises: &[Formula]) -> Result<bool, OracleError> {
        self.entails(premises, &Formula::False)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TruthTable {
    pub max_atoms: usize,
}

impl Default for TruthTable {
    fn default() -> Self {
        TruthTable { max_atoms: 20 }
    }
}

enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, bits: u64) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => bits >> i & 1 == 1,
            Expr::Not(a) => !a.eval(bits),
            Expr::And(a, b) => a.eval(bits) && b.eval(bits),
            Expr::Or(a, b) => a.eval(bits) || b.eval(bits),
            Expr::Implies(a, b) => !a.eval(bits) || b.eval(bits),
            Expr::Iff(a, b) => a.eval(bits) == b.eval(bits),
        }
    }
}

fn compile(f: &Formula, atoms: &mut BTreeMap<Formula, usize>) -> Result<Expr, OracleError> {
    let bin = |a: &Formula, b: &Formula, atoms: &mut BTreeMap<Formula, usize>| {
        Ok::<_, OracleError>((Box::new(compile(a, atoms)?), Box::new(compile(b, atoms)?)))
    };
    Ok(match f {
        Formula::True => Expr::Const(true),
        Formula::False => Expr::Const(false),
        Formula::Atom(_, args) => {
            if !args.iter().all(|t| t.is_ground()) {
                return Err(OracleError::NotPropositional(f.to_string()));
            }
            let n = atoms.len();
            Expr::Var(*atoms.entry(f.clone()).or_insert(n))
        }
        Formula::Not(a) => Expr::Not(Box::new(compile(a, atoms)?)),
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, atoms)?;
            Expr::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, atoms)?;
            Expr::Or(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = bin(a, b, atoms)?;
            Expr::Implies(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = bin(a, b, atoms)?;
            Expr::Iff(a, b)
        }
        Formula::ForAll(..) | Formula::Exists(..) => {
            return Err(OracleError::NotPropositional(f.to_string()))
        }
    })
}

impl TruthTable {
    /// Is there an assignment making every formula true?
    pub fn satisfiable(&self, formulas: &[Formula]) -> Result<bool, OracleError> {
        let mut atoms = BTreeMap::new();
        let exprs = formulas.iter().map(|f| compile(f, &mut atoms)).collect::<Result<Vec<_>, _>>()?;
        if atoms.len() > self.max_atoms {
            return Err(OracleError::TooManyAtoms(atoms.len(), self.max_atoms));
        }
        let total = 1u64 << atoms.len();
        Ok((0..total).any(|bits| exprs.iter().all(|e| e.eval(bits))))
    }
}

impl Entailment for TruthTable {
    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<bool, OracleError> {
        let mut all = premises.to_vec();
        all.push(Formula::not(goal.clone()));
        Ok(!self.satisfiable(&all)?)
    }
}
