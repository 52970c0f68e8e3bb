//! The object language: terms, formulas, defeasible rules and knowledge bases,
//! together with the concrete syntax (parser and printer).

mod kb;
mod parser;
mod printer;
mod syntax;

pub use kb::{
    ground_instances, DefeasibleRule, GroundHead, GroundRule, KnowledgeBase, PrefItem, Preferences,
    RuleHead, RuleKey,
};
pub use parser::{parse_formula, parse_knowledge_base};
pub use printer::render_formula;
pub use syntax::{sym, Formula, Symbol, Term};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("arity mismatch for `{symbol}`: used with {found} arguments, expected {expected}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("preference cycle through {0}")]
    PreferenceCycle(String),
    #[error("preference relates a formula to a rule: {0}")]
    MixedPreference(String),
    #[error("preference mentions [{0}], which is not in sigma")]
    PreferenceOutsideSigma(String),
    #[error("undeclared rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{0}` declared twice")]
    DuplicateRule(String),
    #[error("free variable `{var}` outside rule context in {context}")]
    FreeVariable { var: String, context: String },
}
