use serde_json::{json, Value};

use super::{Argument, Conclusion, Support, SupportElement};

fn element_text(e: &SupportElement) -> String {
    match e {
        SupportElement::Premise(f) => f.to_string(),
        SupportElement::Test { formula, .. } => format!("{formula}?"),
        SupportElement::Rule(app) => format!("({}, {})", render_support(&app.support), app.rule),
    }
}

/// Set notation on one line, e.g. `{({p | q, ~q}, p ~> r), ~r?}`.
pub fn render_support(s: &Support) -> String {
    let parts: Vec<String> = s.iter().map(element_text).collect();
    format!("{{{}}}", parts.join(", "))
}

fn leaf_text(e: &SupportElement) -> String {
    match e {
        SupportElement::Rule(_) => unreachable!(),
        other => element_text(other),
    }
}

fn write_block(s: &Support, indent: usize, out: &mut Vec<String>) {
    for e in s {
        match e {
            SupportElement::Rule(app) => {
                write_block(&app.support, indent + 2, out);
                out.push(format!("{}|- {}", " ".repeat(indent), app.rule));
            }
            other => out.push(format!("{}{}", " ".repeat(indent), leaf_text(other))),
        }
    }
}

/// Indented tree: the lines above a `|- rule` line support its antecedent, and
/// the final `|-` line carries the conclusion. Arguments without rule
/// applications fit on one line.
pub fn render_argument_text(a: &Argument) -> String {
    if !a.support.has_rules() {
        let parts: Vec<String> = a.support.iter().map(leaf_text).collect();
        if parts.is_empty() {
            return format!("|- {}", a.conclusion);
        }
        return format!("{} |- {}", parts.join(", "), a.conclusion);
    }
    let mut lines = Vec::new();
    write_block(&a.support, 2, &mut lines);
    lines.push(format!("|- {}", a.conclusion));
    lines.join("\n")
}

fn element_json(e: &SupportElement) -> Value {
    match e {
        SupportElement::Premise(f) => json!({ "premise": f.to_string() }),
        SupportElement::Test { id, formula } => json!({ "test": formula.to_string(), "id": id.0 }),
        SupportElement::Rule(app) => json!({
            "rule": app.rule.key.to_string(),
            "instance": app.rule.to_string(),
            "antecedent_support": support_json(&app.support),
        }),
    }
}

pub(crate) fn support_json(s: &Support) -> Value {
    Value::Array(s.iter().map(element_json).collect())
}

pub fn argument_json(a: &Argument) -> Value {
    let kind = match a.conclusion {
        Conclusion::Formula(_) => "formula",
        Conclusion::Falsum => "falsum",
        Conclusion::NotRule(_) => "not_rule",
        Conclusion::NotPremise(_) => "not_premise",
    };
    json!({
        "conclusion": a.conclusion.to_string(),
        "kind": kind,
        "support": support_json(&a.support),
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{f, rule};
    use super::*;
    use crate::arguments::TestId;

    fn prem(s: &str) -> SupportElement {
        SupportElement::Premise(f(s))
    }

    fn chain() -> Argument {
        let inner = SupportElement::rule(Support::new([prem("p | q"), prem("~q")]), rule("p", "r"));
        let outer = SupportElement::rule(Support::single(inner), rule("r", "s"));
        Argument::for_formula(Support::single(outer), f("s"))
    }

    #[test]
    fn text_tree() {
        let want = "      ~q\n      p | q\n    |- p ~> r\n  |- r ~> s\n|- s";
        assert_eq!(render_argument_text(&chain()), want);
    }

    #[test]
    fn premise_only_single_line() {
        let a = Argument::for_formula(Support::single(prem("p")), f("p"));
        assert_eq!(render_argument_text(&a), "p |- p");
        let t = Argument::new(
            Support::new([prem("p"), SupportElement::Test { id: TestId(0), formula: f("~p") }]),
            Conclusion::Falsum,
        );
        assert_eq!(render_argument_text(&t), "p, ~p? |- false");
    }

    #[test]
    fn nesting_indents_monotonically() {
        let text = render_argument_text(&chain());
        let indents: Vec<usize> =
            text.lines().filter(|l| l.trim_start().starts_with("|-")).map(|l| l.len() - l.trim_start().len()).collect();
        assert!(indents.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn one_line_support() {
        let a = chain();
        assert_eq!(render_support(&a.support), "{({({~q, p | q}, p ~> r)}, r ~> s)}");
        assert_eq!(a.to_string(), "({({({~q, p | q}, p ~> r)}, r ~> s)}, s)");
    }

    #[test]
    fn json_shape() {
        let v = argument_json(&chain());
        assert_eq!(v["conclusion"], "s");
        assert_eq!(v["kind"], "formula");
        let outer = &v["support"][0];
        assert_eq!(outer["instance"], "r ~> s");
        assert_eq!(outer["antecedent_support"][0]["antecedent_support"][1]["premise"], "p | q");
    }
}
