use super::syntax::Formula;

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

/// Renders a formula in the concrete ASCII syntax accepted by the parser,
/// with the minimal parenthesisation that reparses to the same tree.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, 0, &mut out);
    out
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_formula(f: &Formula, min_prec: u8, out: &mut String) {
    let prec = precedence(f);
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&a.to_string());
                }
                out.push(')');
            }
        }
        Formula::Not(a) => {
            out.push('~');
            write_formula(a, UNARY, out);
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            out.push_str(if matches!(f, Formula::ForAll(..)) { "forall " } else { "exists " });
            out.push_str(v);
            out.push_str(". ");
            write_formula(body, UNARY, out);
        }
        Formula::Iff(a, b) => binary(a, " <-> ", b, IFF, IMP, out),
        Formula::Implies(a, b) => binary(a, " -> ", b, OR, IMP, out),
        Formula::Or(a, b) => binary(a, " | ", b, OR, AND, out),
        Formula::And(a, b) => binary(a, " & ", b, AND, UNARY, out),
    }
    if parens {
        out.push(')');
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut String) {
    write_formula(a, left, out);
    out.push_str(op);
    write_formula(b, right, out);
}
