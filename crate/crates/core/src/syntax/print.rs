use std::fmt;

use crate::syntax::ast::{Atom, Literal, Program, Rule, Term};

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) | Term::Var(s) => f.write_str(s),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                join(f, args, ",")?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            join(f, &self.args, ",")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Not(a) => write!(f, "not {a}"),
            Literal::Cmp(l, op, r) => write!(f, "{l} {} {r}", op.symbol()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = |f: &mut fmt::Formatter<'_>, body: &[Literal]| -> fmt::Result {
            if !body.is_empty() {
                f.write_str(" :- ")?;
                join(f, body, ", ")?;
            }
            Ok(())
        };
        match self {
            Rule::Normal { head, body: b } => {
                write!(f, "{head}")?;
                body(f, b)?;
                f.write_str(".")
            }
            Rule::Choice {
                lower,
                upper,
                heads,
                body: b,
            } => {
                write!(f, "{lower} {{ ")?;
                join(f, heads, "; ")?;
                write!(f, " }} {upper}")?;
                body(f, b)?;
                f.write_str(".")
            }
            Rule::Constraint { body: b } => {
                f.write_str(":- ")?;
                join(f, b, ", ")?;
                f.write_str(".")
            }
            Rule::Weak {
                body: b,
                weight,
                level,
                terms,
            } => {
                f.write_str(":~ ")?;
                join(f, b, ", ")?;
                write!(f, ".[{weight}@{level}")?;
                for t in terms {
                    write!(f, ", {t}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join(f, &self.rules, "\n")
    }
}

/// Canonical text of a program: one rule per line, no trailing newline.
pub fn pretty_print(program: &Program) -> String {
    program.to_string()
}
