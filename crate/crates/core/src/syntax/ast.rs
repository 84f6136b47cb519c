//! Abstract syntax for the supported ASP fragment: normal rules, choice rules,
//! hard constraints and weak constraints over function-free-ish terms.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Interned-by-sharing identifier used for predicates, constants and variables.
pub type Name = Arc<str>;

/// A term. The derived ordering is the total term order used by comparison
/// literals: integers (numerically) before symbols before compound terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(i64),
    Sym(Name),
    Func(Name, Vec<Term>),
    Var(Name),
}

impl Term {
    pub fn int(value: i64) -> Self {
        Term::Int(value)
    }

    pub fn sym(name: &str) -> Self {
        Term::Sym(Arc::from(name))
    }

    pub fn var(name: &str) -> Self {
        Term::Var(Arc::from(name))
    }

    pub fn func(name: &str, args: Vec<Term>) -> Self {
        Term::Func(Arc::from(name), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Int(_) | Term::Sym(_) => true,
            Term::Var(_) => false,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// Nesting depth: constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Func(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }
}

/// `p(t1, ..., tn)`; zero-arity atoms have no argument list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Name,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: Arc::from(predicate),
            args,
        }
    }

    pub fn prop(predicate: &str) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn signature(&self) -> (Name, usize) {
        (self.predicate.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }
}

/// Built-in comparison operators. The same six operators label ordering
/// examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [
        CmpOp::Lt,
        CmpOp::Gt,
        CmpOp::Le,
        CmpOp::Ge,
        CmpOp::Eq,
        CmpOp::Ne,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CmpOp> {
        CmpOp::ALL.into_iter().find(|op| op.symbol() == s)
    }

    /// Whether `lhs op rhs` holds given `lhs.cmp(rhs)`.
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
        }
    }

    pub fn eval(self, lhs: &Term, rhs: &Term) -> bool {
        self.holds(lhs.cmp(rhs))
    }

    /// The operator with its operands swapped (`a < b` iff `b > a`).
    pub fn flip(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Ge => CmpOp::Le,
            other => other,
        }
    }

    /// The complementary operator, used to inject label noise.
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Pos(Atom),
    Not(Atom),
    Cmp(Term, CmpOp, Term),
}

impl Literal {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Literal::Pos(a) | Literal::Not(a) => Some(a),
            Literal::Cmp(..) => None,
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Literal::Pos(a) | Literal::Not(a) => a.collect_vars(out),
            Literal::Cmp(l, _, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Normal {
        head: Atom,
        body: Vec<Literal>,
    },
    Choice {
        lower: u32,
        upper: u32,
        heads: Vec<Atom>,
        body: Vec<Literal>,
    },
    Constraint {
        body: Vec<Literal>,
    },
    Weak {
        body: Vec<Literal>,
        weight: Term,
        level: Term,
        terms: Vec<Term>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Normal,
    Choice,
    Constraint,
    Weak,
}

impl Rule {
    pub fn fact(head: Atom) -> Self {
        Rule::Normal {
            head,
            body: Vec::new(),
        }
    }

    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Normal { .. } => RuleKind::Normal,
            Rule::Choice { .. } => RuleKind::Choice,
            Rule::Constraint { .. } => RuleKind::Constraint,
            Rule::Weak { .. } => RuleKind::Weak,
        }
    }

    pub fn body(&self) -> &[Literal] {
        match self {
            Rule::Normal { body, .. }
            | Rule::Choice { body, .. }
            | Rule::Constraint { body }
            | Rule::Weak { body, .. } => body,
        }
    }

    pub fn body_mut(&mut self) -> &mut Vec<Literal> {
        match self {
            Rule::Normal { body, .. }
            | Rule::Choice { body, .. }
            | Rule::Constraint { body }
            | Rule::Weak { body, .. } => body,
        }
    }

    pub fn head_atoms(&self) -> &[Atom] {
        match self {
            Rule::Normal { head, .. } => std::slice::from_ref(head),
            Rule::Choice { heads, .. } => heads,
            _ => &[],
        }
    }

    pub fn is_fact(&self) -> bool {
        matches!(self, Rule::Normal { body, head } if body.is_empty() && head.is_ground())
    }

    pub fn is_ground(&self) -> bool {
        let mut vars = Vec::new();
        self.collect_vars(&mut vars);
        vars.is_empty()
    }

    /// Every variable of the rule, in first-occurrence order (head first).
    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        for h in self.head_atoms() {
            h.collect_vars(out);
        }
        for l in self.body() {
            l.collect_vars(out);
        }
        if let Rule::Weak {
            weight,
            level,
            terms,
            ..
        } = self
        {
            weight.collect_vars(out);
            level.collect_vars(out);
            terms.iter().for_each(|t| t.collect_vars(out));
        }
    }

    /// Variables that violate safety: those not occurring in a positive body atom.
    pub fn unsafe_vars(&self) -> Vec<Name> {
        let mut bound = Vec::new();
        for l in self.body() {
            if let Literal::Pos(a) = l {
                a.collect_vars(&mut bound);
            }
        }
        let mut all = Vec::new();
        self.collect_vars(&mut all);
        all.into_iter().filter(|v| !bound.contains(v)).collect()
    }

    pub fn is_safe(&self) -> bool {
        self.unsafe_vars().is_empty()
    }

    /// Predicate signatures occurring in positive body atoms.
    pub fn positive_body_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body().iter().filter_map(|l| match l {
            Literal::Pos(a) => Some(a),
            _ => None,
        })
    }

    pub fn negative_body_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body().iter().filter_map(|l| match l {
            Literal::Not(a) => Some(a),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn extend(&mut self, other: &Program) {
        self.rules.extend(other.rules.iter().cloned());
    }

    /// Concatenation of several programs, in order.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a Program>) -> Program {
        let mut out = Program::default();
        for p in parts {
            out.extend(p);
        }
        out
    }

    pub fn has_weak_constraints(&self) -> bool {
        self.rules.iter().any(|r| matches!(r, Rule::Weak { .. }))
    }

    /// Predicate signatures that occur in some rule head.
    pub fn head_signatures(&self) -> BTreeSet<(Name, usize)> {
        self.rules
            .iter()
            .flat_map(|r| r.head_atoms().iter().map(Atom::signature))
            .collect()
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<T: IntoIterator<Item = Rule>>(iter: T) -> Self {
        Program {
            rules: iter.into_iter().collect(),
        }
    }
}
