//! Recursive-descent parser for the knowledge-base syntax.
//!
//! ```text
//! kb        := (stmt ".")*
//! stmt      := "sigma:" formula | "rule" ID ":" formula "~>" rhs
//!            | "pref" prefatom "<" prefatom | "query" formula
//! rhs       := formula | "not" "(" ID ")"
//! prefatom  := ID | "[" formula "]"
//! formula   := iff ; iff := imp ("<->" imp)* ; imp := or ("->" or)*
//! or        := and ("|" and)* ; and := unary ("&" unary)*
//! unary     := "~" unary | "forall" VAR "." unary | "exists" VAR "." unary | atom
//! atom      := "true" | "false" | PRED ("(" term ("," term)* ")")? | "(" formula ")"
//! term      := VAR | CONST | FUNC "(" term ("," term)* ")"
//! ```
//!
//! `->` associates to the right, the other binary connectives to the left.

use std::sync::Arc;

use super::kb::{DefeasibleRule, KnowledgeBase, PrefItem, RuleHead};
use super::syntax::{sym, Formula, Term};
use super::LangError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Colon,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Leads,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Less,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Leads => "`~>`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Less => "`<`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, LangError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = if c.is_ascii_uppercase() { Tok::Upper(word) } else { Tok::Lower(word) };
            (tok, j - i)
        } else {
            match (c, next) {
                (':', _) => (Tok::Colon, 1),
                ('.', _) => (Tok::Dot, 1),
                (',', _) => (Tok::Comma, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                ('&', _) => (Tok::Amp, 1),
                ('|', _) => (Tok::Bar, 1),
                ('~', Some('>')) => (Tok::Leads, 2),
                ('~', _) => (Tok::Tilde, 1),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::DArrow, 3),
                ('<', _) => (Tok::Less, 1),
                (other, _) => {
                    return Err(LangError::Syntax {
                        line,
                        col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push(Spanned { tok, line, col });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

const RESERVED: &[&str] = &["true", "false", "forall", "exists", "not"];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, LangError> {
        let s = &self.toks[self.pos];
        Err(LangError::Syntax { line: s.line, col: s.col, message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LangError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn lower_ident(&mut self, what: &str) -> Result<String, LangError> {
        match self.peek().clone() {
            Tok::Lower(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected {what}, found {}", other.describe())),
        }
    }

    fn kb(&mut self) -> Result<KnowledgeBase, LangError> {
        let (mut sigma, mut rules, mut prefs, mut queries) = (vec![], vec![], vec![], vec![]);
        while *self.peek() != Tok::Eof {
            let Tok::Lower(kw) = self.peek().clone() else {
                return self.error(format!(
                    "expected `sigma:`, `rule`, `pref` or `query`, found {}",
                    self.peek().describe()
                ));
            };
            match kw.as_str() {
                "sigma" => {
                    self.bump();
                    self.expect(Tok::Colon)?;
                    let f = self.closed_formula()?;
                    sigma.push(f);
                }
                "rule" => {
                    self.bump();
                    let id = self.lower_ident("rule id")?;
                    self.expect(Tok::Colon)?;
                    let antecedent = self.formula()?;
                    self.expect(Tok::Leads)?;
                    let head = if matches!(self.peek(), Tok::Lower(s) if s == "not")
                        && *self.peek2() == Tok::LParen
                    {
                        self.bump();
                        self.bump();
                        let target = self.lower_ident("rule id")?;
                        self.expect(Tok::RParen)?;
                        RuleHead::Undercut { target: sym(&target), target_vars: vec![] }
                    } else {
                        RuleHead::Formula(self.formula()?)
                    };
                    rules.push(DefeasibleRule::new(&id, antecedent, head));
                }
                "pref" => {
                    self.bump();
                    let a = self.pref_atom()?;
                    self.expect(Tok::Less)?;
                    let b = self.pref_atom()?;
                    prefs.push((a, b));
                }
                "query" => {
                    self.bump();
                    queries.push(self.closed_formula()?);
                }
                _ => {
                    return self.error(format!(
                        "expected `sigma:`, `rule`, `pref` or `query`, found `{kw}`"
                    ))
                }
            }
            self.expect(Tok::Dot)?;
        }
        KnowledgeBase::new(sigma, rules, prefs, queries)
    }

    fn closed_formula(&mut self) -> Result<Formula, LangError> {
        let at = self.pos;
        let f = self.formula()?;
        if let Some(v) = f.free_vars().into_iter().next() {
            let s = &self.toks[at];
            return Err(LangError::Syntax {
                line: s.line,
                col: s.col,
                message: format!("free variable `{v}` outside rule context"),
            });
        }
        Ok(f)
    }

    fn pref_atom(&mut self) -> Result<PrefItem, LangError> {
        if *self.peek() == Tok::LBracket {
            self.bump();
            let f = self.closed_formula()?;
            self.expect(Tok::RBracket)?;
            Ok(PrefItem::Formula(f))
        } else {
            Ok(PrefItem::Rule(sym(&self.lower_ident("rule id or [formula]")?)))
        }
    }

    fn formula(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, LangError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LangError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LangError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Lower(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let var = match self.bump() {
                    Tok::Upper(v) => v,
                    other => {
                        self.pos -= 1;
                        return self.error(format!("expected variable, found {}", other.describe()));
                    }
                };
                self.expect(Tok::Dot)?;
                let body = Arc::new(self.unary()?);
                Ok(if kw == "forall" {
                    Formula::ForAll(sym(&var), body)
                } else {
                    Formula::Exists(sym(&var), body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, LangError> {
        match self.peek().clone() {
            Tok::Lower(w) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Lower(w) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Lower(_) => {
                let pred = self.lower_ident("predicate")?;
                let args = if *self.peek() == Tok::LParen { self.term_list()? } else { vec![] };
                Ok(Formula::atom(&pred, args))
            }
            other => self.error(format!("expected formula, found {}", other.describe())),
        }
    }

    fn term_list(&mut self) -> Result<Vec<Term>, LangError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, LangError> {
        match self.peek().clone() {
            Tok::Upper(v) => {
                self.bump();
                Ok(Term::Var(sym(&v)))
            }
            Tok::Lower(_) => {
                let name = self.lower_ident("term")?;
                if *self.peek() == Tok::LParen {
                    Ok(Term::Func(sym(&name), self.term_list()?.into()))
                } else {
                    Ok(Term::Const(sym(&name)))
                }
            }
            other => self.error(format!("expected term, found {}", other.describe())),
        }
    }
}

pub fn parse_knowledge_base(text: &str) -> Result<KnowledgeBase, LangError> {
    Parser { toks: lex(text)?, pos: 0 }.kb()
}

/// Parses a single formula (free variables allowed).
pub fn parse_formula(text: &str) -> Result<Formula, LangError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after formula", p.peek().describe()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::render_formula;

    #[test]
    fn sample_inputs() {
        let kb = parse_knowledge_base("sigma: p | q. sigma: ~q. rule r1: p ~> r.").unwrap();
        assert_eq!(kb.sigma, vec![parse_formula("p | q").unwrap(), parse_formula("~q").unwrap()]);
        assert_eq!(kb.rules.len(), 1);
        assert_eq!(kb.rules[0].id.as_ref(), "r1");
        assert_eq!(kb.rules[0].antecedent, Formula::prop("p"));
        assert_eq!(kb.rules[0].consequent, RuleHead::Formula(Formula::prop("r")));
    }

    #[test]
    fn empty_input() {
        let kb = parse_knowledge_base("").unwrap();
        assert!(kb.sigma.is_empty() && kb.rules.is_empty() && kb.queries.is_empty());
        let kb = parse_knowledge_base("# only a comment\n\n").unwrap();
        assert!(kb.sigma.is_empty());
    }

    #[test]
    fn preference_cycle() {
        let err = parse_knowledge_base(
            "rule r1: a ~> b. rule r2: c ~> d. pref r1 < r2. pref r2 < r1.",
        )
        .unwrap_err();
        assert!(matches!(err, LangError::PreferenceCycle(_)), "{err}");
        // undeclared ids are reported before the cycle check
        let err = parse_knowledge_base("pref r1 < r2. pref r2 < r1.").unwrap_err();
        assert!(matches!(err, LangError::UnknownRule(_)), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_knowledge_base("sigma: p.\nsigma: p &.").unwrap_err();
        match err {
            LangError::Syntax { line, col, .. } => assert_eq!((line, col), (2, 11)),
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(parse_knowledge_base("sigma: p"), Err(LangError::Syntax { .. })));
        assert!(matches!(parse_knowledge_base("sigma: p $ q."), Err(LangError::Syntax { .. })));
    }

    #[test]
    fn arity_and_scope_errors() {
        let err = parse_knowledge_base("sigma: p(a). sigma: p(a,b).").unwrap_err();
        assert!(matches!(err, LangError::Arity { .. }), "{err}");
        let err = parse_knowledge_base("sigma: p(X).").unwrap_err();
        assert!(matches!(err, LangError::Syntax { .. }), "{err}");
        let err = parse_knowledge_base("rule r: a ~> not(nope).").unwrap_err();
        assert!(matches!(err, LangError::UnknownRule(_)), "{err}");
        let err = parse_knowledge_base("rule r1: p(X) ~> q(X). rule r2: s ~> not(r1).").unwrap_err();
        assert!(matches!(err, LangError::FreeVariable { .. }), "{err}");
        let err = parse_knowledge_base("sigma: a. rule r: a ~> b. pref r < [a].").unwrap_err();
        assert!(matches!(err, LangError::MixedPreference(_)), "{err}");
    }

    #[test]
    fn rules_and_preferences() {
        let kb = parse_knowledge_base(
            "sigma: fight(h). sigma: a. sigma: b.
             rule pun: fight(X) ~> pun(X).
             rule sd: sd(X) ~> not(pun).
             pref [a] < [b].
             query pun(h).",
        )
        .unwrap();
        assert_eq!(kb.rules[1].free_vars.len(), 1);
        assert!(matches!(&kb.rules[1].consequent, RuleHead::Undercut { target_vars, .. } if target_vars.len() == 1));
        assert!(kb.preferences.formula_less(&Formula::prop("a"), &Formula::prop("b")));
        assert_eq!(kb.queries.len(), 1);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("a | b & c -> d <-> e").unwrap();
        assert_eq!(render_formula(&f), "a | b & c -> d <-> e");
        let f = parse_formula("a -> b -> c").unwrap();
        assert!(matches!(&f, Formula::Implies(_, r) if matches!(**r, Formula::Implies(..))));
        let f = parse_formula("a & b & c").unwrap();
        assert!(matches!(&f, Formula::And(l, _) if matches!(**l, Formula::And(..))));
        let f = parse_formula("~forall X. p(X) & q").unwrap();
        assert!(matches!(f, Formula::And(..)));
        assert_eq!(parse_formula("true ~> x").is_err(), true);
    }
}
