//! Hypothesis spaces generated from a mode bias.
//!
//! Rules are enumerated head-first with typed variables, deduplicated on a
//! canonical form (variables renamed `V0, V1, …` by first occurrence, body
//! literals ordered positive atoms, negated atoms, comparisons, each group in
//! the permutation giving the smallest text) and listed by kind, then length,
//! then canonical text.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::syntax::{Atom, CmpOp, Literal, Name, Rule, RuleKind, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArgMode {
    /// A variable of the given type.
    Var(Name),
    /// Any constant declared for the given type.
    Const(Name),
    /// A fixed term.
    Term(Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomMode {
    pub predicate: Name,
    pub args: Vec<ArgMode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeadKind {
    Normal,
    Choice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadMode {
    pub atom: AtomMode,
    pub kind: HeadKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Pos,
    Neg,
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyModeKind {
    Atom {
        atom: AtomMode,
        polarity: Polarity,
    },
    Cmp {
        left: ArgMode,
        op: CmpOp,
        right: ArgMode,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyMode {
    /// Maximum number of literals from this declaration in one body.
    pub recall: Option<usize>,
    pub kind: BodyModeKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Int(i64),
    /// A body variable of the given type.
    Var(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakBias {
    pub levels: Vec<i64>,
    pub weights: Vec<WeightMode>,
}

/// How the length of a rule is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LengthMeasure {
    /// Head atoms plus body literals, plus one for a weak constraint.
    #[default]
    Literals,
    /// Every rule has length one.
    Rules,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeBias {
    pub heads: Vec<HeadMode>,
    pub body: Vec<BodyMode>,
    pub constants: BTreeMap<Name, Vec<Term>>,
    pub max_vars: usize,
    pub max_body: usize,
    pub choice_bounds: Vec<(u32, u32)>,
    pub constraints: bool,
    pub weak: Option<WeakBias>,
    pub length: LengthMeasure,
    pub max_rules: usize,
    /// Require every body literal to be linked to the head (or, for
    /// headless rules, to every other literal) through shared variables.
    pub connected: bool,
    /// Body-size limits for single rule kinds, tighter than `max_body`.
    pub kind_max_body: BTreeMap<RuleKind, usize>,
}

impl Default for ModeBias {
    fn default() -> Self {
        ModeBias {
            heads: Vec::new(),
            body: Vec::new(),
            constants: BTreeMap::new(),
            max_vars: 3,
            max_body: 3,
            choice_bounds: vec![(0, 1)],
            constraints: false,
            weak: None,
            length: LengthMeasure::Literals,
            max_rules: 50_000,
            connected: false,
            kind_max_body: BTreeMap::new(),
        }
    }
}

impl ModeBias {
    pub fn is_empty(&self) -> bool {
        self.heads.is_empty() && !self.constraints && self.weak.is_none()
    }
}

/// A rule of the hypothesis space with its identifier and length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceRule {
    pub id: usize,
    pub rule: Rule,
    pub length: u64,
}

pub fn rule_length(rule: &Rule) -> u64 {
    rule_length_with(rule, LengthMeasure::Literals)
}

pub fn rule_length_with(rule: &Rule, measure: LengthMeasure) -> u64 {
    match measure {
        LengthMeasure::Rules => 1,
        LengthMeasure::Literals => {
            let extra = u64::from(matches!(rule, Rule::Weak { .. }));
            (rule.head_atoms().len() + rule.body().len()) as u64 + extra
        }
    }
}

fn kind_rank(kind: RuleKind) -> u8 {
    match kind {
        RuleKind::Normal => 0,
        RuleKind::Choice => 1,
        RuleKind::Constraint => 2,
        RuleKind::Weak => 3,
    }
}

/// Orders rules by kind (normal, choice, constraint, weak), length, text and
/// assigns contiguous ids.
pub fn number_rules(rules: Vec<Rule>, measure: LengthMeasure) -> Vec<SpaceRule> {
    let mut keyed: Vec<(u8, u64, String, Rule)> = rules
        .into_iter()
        .map(|r| {
            (
                kind_rank(r.kind()),
                rule_length_with(&r, measure),
                r.to_string(),
                r,
            )
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    keyed
        .into_iter()
        .enumerate()
        .map(|(id, (_, length, _, rule))| SpaceRule { id, rule, length })
        .collect()
}

fn rename_term(t: &Term, map: &HashMap<Name, Name>) -> Term {
    match t {
        Term::Var(v) => Term::Var(map[v].clone()),
        Term::Func(f, args) => Term::Func(
            f.clone(),
            args.iter().map(|a| rename_term(a, map)).collect(),
        ),
        other => other.clone(),
    }
}

fn rename_atom(a: &Atom, map: &HashMap<Name, Name>) -> Atom {
    Atom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(|t| rename_term(t, map)).collect(),
    }
}

fn rename_literal(l: &Literal, map: &HashMap<Name, Name>) -> Literal {
    match l {
        Literal::Pos(a) => Literal::Pos(rename_atom(a, map)),
        Literal::Not(a) => Literal::Not(rename_atom(a, map)),
        Literal::Cmp(x, op, y) => Literal::Cmp(rename_term(x, map), *op, rename_term(y, map)),
    }
}

/// Renames variables to `V0, V1, …` in order of first occurrence (head,
/// body, weight, level, terms). A weak term tuple listing exactly the
/// distinct body variables is rewritten in first-occurrence order.
fn rename_in_order(rule: &Rule) -> Rule {
    let mut order: Vec<Name> = Vec::new();
    rule.collect_vars(&mut order);
    let mut map = HashMap::new();
    for v in order {
        let next = map.len();
        map.entry(v)
            .or_insert_with(|| Name::from(format!("V{next}")));
    }
    let body = |b: &[Literal]| {
        b.iter()
            .map(|l| rename_literal(l, &map))
            .collect::<Vec<_>>()
    };
    match rule {
        Rule::Normal { head, body: b } => Rule::Normal {
            head: rename_atom(head, &map),
            body: body(b),
        },
        Rule::Choice {
            lower,
            upper,
            heads,
            body: b,
        } => Rule::Choice {
            lower: *lower,
            upper: *upper,
            heads: heads.iter().map(|a| rename_atom(a, &map)).collect(),
            body: body(b),
        },
        Rule::Constraint { body: b } => Rule::Constraint { body: body(b) },
        Rule::Weak {
            body: b,
            weight,
            level,
            terms,
        } => {
            let new_body = body(b);
            let mut body_vars = Vec::new();
            for l in &new_body {
                l.collect_vars(&mut body_vars);
            }
            let mut distinct: Vec<Name> = Vec::new();
            for v in body_vars {
                if !distinct.contains(&v) {
                    distinct.push(v);
                }
            }
            let new_terms: Vec<Term> = terms.iter().map(|t| rename_term(t, &map)).collect();
            let is_var_perm = new_terms.len() == distinct.len()
                && new_terms
                    .iter()
                    .all(|t| matches!(t, Term::Var(v) if distinct.contains(v)))
                && new_terms.iter().collect::<HashSet<_>>().len() == new_terms.len();
            let terms = if is_var_perm {
                distinct.into_iter().map(Term::Var).collect()
            } else {
                new_terms
            };
            Rule::Weak {
                body: new_body,
                weight: rename_term(weight, &map),
                level: rename_term(level, &map),
                terms,
            }
        }
    }
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first.clone());
            out.push(p);
        }
    }
    out
}

const MAX_CANONICAL_VARIANTS: usize = 5040;

/// Canonical representative of a rule up to variable renaming, body literal
/// order and operand order of comparisons.
pub fn canonical_rule(rule: &Rule) -> Rule {
    let body = rule.body();
    let pos: Vec<Literal> = body
        .iter()
        .filter(|l| matches!(l, Literal::Pos(_)))
        .cloned()
        .collect();
    let neg: Vec<Literal> = body
        .iter()
        .filter(|l| matches!(l, Literal::Not(_)))
        .cloned()
        .collect();
    let cmp: Vec<Literal> = body
        .iter()
        .filter(|l| matches!(l, Literal::Cmp(..)))
        .cloned()
        .collect();
    let fact = |n: usize| (1..=n).product::<usize>();
    let variants = (fact(pos.len()) * fact(neg.len()) * fact(cmp.len())) << cmp.len();
    let with_body = |b: Vec<Literal>| {
        let mut r = rule.clone();
        *r.body_mut() = b;
        r
    };
    if variants > MAX_CANONICAL_VARIANTS {
        let mut sorted = body.to_vec();
        sorted.sort_by_key(|l| (literal_class(l), l.to_string()));
        return rename_in_order(&with_body(sorted));
    }
    let cmp_orients: Vec<Vec<Literal>> = {
        let mut all = vec![Vec::new()];
        for l in &cmp {
            let Literal::Cmp(x, op, y) = l else {
                unreachable!()
            };
            let flipped = Literal::Cmp(y.clone(), op.flip(), x.clone());
            let mut next = Vec::new();
            for prefix in &all {
                for alt in [l.clone(), flipped.clone()] {
                    let mut p: Vec<Literal> = prefix.clone();
                    p.push(alt);
                    next.push(p);
                }
            }
            all = next;
        }
        all
    };
    let mut best: Option<(String, Rule)> = None;
    for p in permutations(&pos) {
        for n in permutations(&neg) {
            for orient in &cmp_orients {
                for c in permutations(orient) {
                    let b: Vec<Literal> = p.iter().chain(&n).chain(&c).cloned().collect();
                    let r = rename_in_order(&with_body(b));
                    let text = r.to_string();
                    if best.as_ref().is_none_or(|(t, _)| text < *t) {
                        best = Some((text, r));
                    }
                }
            }
        }
    }
    best.map(|(_, r)| r)
        .unwrap_or_else(|| rename_in_order(rule))
}

/// Whether the literals of a rule form one component under shared
/// variables, starting from the head (or the first body literal).
pub fn is_connected(rule: &Rule) -> bool {
    let vars_of = |l: &Literal| {
        let mut v = Vec::new();
        l.collect_vars(&mut v);
        v
    };
    let body: Vec<Vec<Name>> = rule.body().iter().map(vars_of).collect();
    let mut reached: HashSet<Name> = HashSet::new();
    for a in rule.head_atoms() {
        let mut v = Vec::new();
        a.collect_vars(&mut v);
        reached.extend(v);
    }
    let mut done = vec![false; body.len()];
    if reached.is_empty() {
        match body.first() {
            Some(first) => {
                reached.extend(first.iter().cloned());
                done[0] = true;
            }
            None => return true,
        }
    }
    loop {
        let mut progress = false;
        for (i, vs) in body.iter().enumerate() {
            if !done[i] && vs.iter().any(|v| reached.contains(v)) {
                done[i] = true;
                reached.extend(vs.iter().cloned());
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    done.iter().zip(&body).all(|(d, vs)| *d || vs.is_empty())
}

fn literal_class(l: &Literal) -> u8 {
    match l {
        Literal::Pos(_) => 0,
        Literal::Not(_) => 1,
        Literal::Cmp(..) => 2,
    }
}

#[derive(Clone, Debug)]
enum Slot {
    Var(Name),
    Fixed(Term),
}

#[derive(Clone, Debug)]
enum Shape {
    Atom {
        positive: bool,
        predicate: Name,
        args: Vec<Slot>,
    },
    Cmp {
        left: Slot,
        op: CmpOp,
        right: Slot,
    },
}

#[derive(Clone, Debug)]
struct Template {
    mode: usize,
    shape: Shape,
}

impl Template {
    fn var_types(&self) -> Vec<Name> {
        let slots: Vec<&Slot> = match &self.shape {
            Shape::Atom { args, .. } => args.iter().collect(),
            Shape::Cmp { left, right, .. } => vec![left, right],
        };
        slots
            .into_iter()
            .filter_map(|s| match s {
                Slot::Var(t) => Some(t.clone()),
                Slot::Fixed(_) => None,
            })
            .collect()
    }

    fn instantiate(&self, vars: &[usize]) -> Literal {
        let mut it = vars.iter();
        let mut fill = |s: &Slot| match s {
            Slot::Var(_) => Term::Var(Name::from(format!("V{}", it.next().expect("slot count")))),
            Slot::Fixed(t) => t.clone(),
        };
        match &self.shape {
            Shape::Atom {
                positive,
                predicate,
                args,
            } => {
                let atom = Atom {
                    predicate: predicate.clone(),
                    args: args.iter().map(&mut fill).collect(),
                };
                if *positive {
                    Literal::Pos(atom)
                } else {
                    Literal::Not(atom)
                }
            }
            Shape::Cmp { left, op, right } => {
                let l = fill(left);
                let r = fill(right);
                Literal::Cmp(l, *op, r)
            }
        }
    }
}

struct Enumerator<'a> {
    bias: &'a ModeBias,
    templates: Vec<Template>,
    seen: HashSet<String>,
    out: Vec<Rule>,
}

fn expand_slots(args: &[ArgMode], constants: &BTreeMap<Name, Vec<Term>>) -> Result<Vec<Vec<Slot>>> {
    let mut all: Vec<Vec<Slot>> = vec![Vec::new()];
    for a in args {
        let options: Vec<Slot> = match a {
            ArgMode::Var(t) => vec![Slot::Var(t.clone())],
            ArgMode::Term(t) => vec![Slot::Fixed(t.clone())],
            ArgMode::Const(t) => {
                let cs = constants
                    .get(t)
                    .filter(|cs| !cs.is_empty())
                    .ok_or_else(|| Error::Bias(format!("no constants declared for type `{t}`")))?;
                cs.iter().map(|c| Slot::Fixed(c.clone())).collect()
            }
        };
        all = all
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect();
    }
    Ok(all)
}

impl<'a> Enumerator<'a> {
    fn new(bias: &'a ModeBias) -> Result<Self> {
        let mut templates = Vec::new();
        for (mode, bm) in bias.body.iter().enumerate() {
            match &bm.kind {
                BodyModeKind::Atom { atom, polarity } => {
                    let signs: &[bool] = match polarity {
                        Polarity::Pos => &[true],
                        Polarity::Neg => &[false],
                        Polarity::Any => &[true, false],
                    };
                    for args in expand_slots(&atom.args, &bias.constants)? {
                        for &positive in signs {
                            templates.push(Template {
                                mode,
                                shape: Shape::Atom {
                                    positive,
                                    predicate: atom.predicate.clone(),
                                    args: args.clone(),
                                },
                            });
                        }
                    }
                }
                BodyModeKind::Cmp { left, op, right } => {
                    for pair in expand_slots(&[left.clone(), right.clone()], &bias.constants)? {
                        if pair.iter().all(|s| matches!(s, Slot::Fixed(_))) {
                            continue;
                        }
                        templates.push(Template {
                            mode,
                            shape: Shape::Cmp {
                                left: pair[0].clone(),
                                op: *op,
                                right: pair[1].clone(),
                            },
                        });
                    }
                }
            }
        }
        Ok(Enumerator {
            bias,
            templates,
            seen: HashSet::new(),
            out: Vec::new(),
        })
    }

    fn push(&mut self, rule: Rule) -> Result<()> {
        let limit = self
            .bias
            .kind_max_body
            .get(&rule.kind())
            .copied()
            .unwrap_or(usize::MAX);
        if rule.body().len() > limit
            || !rule.is_safe()
            || (self.bias.connected && !is_connected(&rule))
        {
            return Ok(());
        }
        let canon = canonical_rule(&rule);
        if self.seen.insert(canon.to_string()) {
            if self.out.len() >= self.bias.max_rules {
                return Err(Error::LimitExceeded {
                    what: "hypothesis space rules",
                    limit: self.bias.max_rules,
                });
            }
            self.out.push(canon);
        }
        Ok(())
    }

    /// All bodies (as literal lists over variables `V0…`) extending the
    /// given variable typing, passed to `emit` together with the final
    /// variable types.
    fn bodies(
        &self,
        head_vars: Vec<Name>,
        min_len: usize,
        emit: &mut dyn FnMut(&[Literal], &[Name]) -> Result<()>,
    ) -> Result<()> {
        let mut recall = vec![0usize; self.bias.body.len()];
        let mut body = Vec::new();
        let mut vars = head_vars;
        self.extend(0, &mut body, &mut vars, &mut recall, min_len, emit)
    }

    fn extend(
        &self,
        start: usize,
        body: &mut Vec<Literal>,
        vars: &mut Vec<Name>,
        recall: &mut Vec<usize>,
        min_len: usize,
        emit: &mut dyn FnMut(&[Literal], &[Name]) -> Result<()>,
    ) -> Result<()> {
        if body.len() >= min_len {
            emit(body, vars)?;
        }
        if body.len() >= self.bias.max_body {
            return Ok(());
        }
        for t in start..self.templates.len() {
            let tpl = &self.templates[t];
            if self.bias.body[tpl.mode]
                .recall
                .is_some_and(|r| recall[tpl.mode] >= r)
            {
                continue;
            }
            let types = tpl.var_types();
            let mut choice = Vec::with_capacity(types.len());
            self.assign(
                tpl,
                &types,
                &mut choice,
                t,
                body,
                vars,
                recall,
                min_len,
                emit,
            )?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        tpl: &Template,
        types: &[Name],
        choice: &mut Vec<usize>,
        t: usize,
        body: &mut Vec<Literal>,
        vars: &mut Vec<Name>,
        recall: &mut Vec<usize>,
        min_len: usize,
        emit: &mut dyn FnMut(&[Literal], &[Name]) -> Result<()>,
    ) -> Result<()> {
        if choice.len() == types.len() {
            let lit = tpl.instantiate(choice);
            if let Literal::Cmp(l, _, r) = &lit {
                if l == r {
                    return Ok(());
                }
            }
            if body.contains(&lit) {
                return Ok(());
            }
            body.push(lit);
            recall[tpl.mode] += 1;
            self.extend(t, body, vars, recall, min_len, emit)?;
            recall[tpl.mode] -= 1;
            body.pop();
            return Ok(());
        }
        let ty = &types[choice.len()];
        for v in 0..vars.len() {
            if &vars[v] == ty {
                choice.push(v);
                self.assign(tpl, types, choice, t, body, vars, recall, min_len, emit)?;
                choice.pop();
            }
        }
        if vars.len() < self.bias.max_vars {
            vars.push(ty.clone());
            choice.push(vars.len() - 1);
            self.assign(tpl, types, choice, t, body, vars, recall, min_len, emit)?;
            choice.pop();
            vars.pop();
        }
        Ok(())
    }

    /// Head atoms for a head mode: each variable slot is a fresh variable or
    /// an earlier head variable of the same type.
    fn heads(&self, mode: &AtomMode) -> Result<Vec<(Atom, Vec<Name>)>> {
        let mut out = Vec::new();
        for slots in expand_slots(&mode.args, &self.bias.constants)? {
            let mut partial: Vec<(Vec<Term>, Vec<Name>)> = vec![(Vec::new(), Vec::new())];
            for s in &slots {
                let mut next = Vec::new();
                for (args, vars) in partial {
                    match s {
                        Slot::Fixed(t) => {
                            let mut a = args.clone();
                            a.push(t.clone());
                            next.push((a, vars));
                        }
                        Slot::Var(ty) => {
                            for (i, vt) in vars.iter().enumerate() {
                                if vt == ty {
                                    let mut a = args.clone();
                                    a.push(Term::Var(Name::from(format!("V{i}"))));
                                    next.push((a, vars.clone()));
                                }
                            }
                            if vars.len() < self.bias.max_vars {
                                let mut a = args.clone();
                                a.push(Term::Var(Name::from(format!("V{}", vars.len()))));
                                let mut v = vars.clone();
                                v.push(ty.clone());
                                next.push((a, v));
                            }
                        }
                    }
                }
                partial = next;
            }
            for (args, vars) in partial {
                out.push((
                    Atom {
                        predicate: mode.predicate.clone(),
                        args,
                    },
                    vars,
                ));
            }
        }
        Ok(out)
    }

    fn run(mut self) -> Result<Vec<Rule>> {
        let bias = self.bias;
        let mut staged: Vec<Rule> = Vec::new();
        for hm in &bias.heads {
            for (head, vars) in self.heads(&hm.atom)? {
                let mut emit = |body: &[Literal], _: &[Name]| -> Result<()> {
                    match hm.kind {
                        HeadKind::Normal => staged.push(Rule::Normal {
                            head: head.clone(),
                            body: body.to_vec(),
                        }),
                        HeadKind::Choice => {
                            for &(lower, upper) in &bias.choice_bounds {
                                if upper <= 1 {
                                    staged.push(Rule::Choice {
                                        lower,
                                        upper,
                                        heads: vec![head.clone()],
                                        body: body.to_vec(),
                                    });
                                }
                            }
                        }
                    }
                    Ok(())
                };
                self.bodies(vars, 0, &mut emit)?;
            }
        }
        if bias.constraints {
            self.bodies(Vec::new(), 1, &mut |body, _| {
                staged.push(Rule::Constraint {
                    body: body.to_vec(),
                });
                Ok(())
            })?;
        }
        if let Some(weak) = &bias.weak {
            self.bodies(Vec::new(), 1, &mut |body, types| {
                for w in &weak.weights {
                    let weights: Vec<Term> = match w {
                        WeightMode::Int(i) => vec![Term::Int(*i)],
                        WeightMode::Var(ty) => (0..types.len())
                            .filter(|&i| &types[i] == ty)
                            .map(|i| Term::Var(Name::from(format!("V{i}"))))
                            .collect(),
                    };
                    let mut terms: Vec<Name> = Vec::new();
                    for l in body {
                        l.collect_vars(&mut terms);
                    }
                    let mut distinct: Vec<Term> = Vec::new();
                    for v in terms {
                        let t = Term::Var(v);
                        if !distinct.contains(&t) {
                            distinct.push(t);
                        }
                    }
                    for weight in weights {
                        for &level in &weak.levels {
                            staged.push(Rule::Weak {
                                body: body.to_vec(),
                                weight: weight.clone(),
                                level: Term::Int(level),
                                terms: distinct.clone(),
                            });
                        }
                    }
                }
                Ok(())
            })?;
        }
        for r in staged {
            self.push(r)?;
        }
        Ok(self.out)
    }
}

/// All rules admitted by the bias, with ids in canonical order.
pub fn enumerate_space(bias: &ModeBias) -> Result<Vec<SpaceRule>> {
    if bias.is_empty() {
        return Err(Error::Bias("the bias enables no rule kind".into()));
    }
    for &(l, u) in &bias.choice_bounds {
        if l > u {
            return Err(Error::Bias(format!("choice bounds {l}..{u} are empty")));
        }
    }
    let rules = Enumerator::new(bias)?.run()?;
    Ok(number_rules(rules, bias.length))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_rule;

    fn canon(text: &str) -> String {
        canonical_rule(&parse_rule(text).unwrap()).to_string()
    }

    #[test]
    fn lengths() {
        assert_eq!(rule_length(&parse_rule("p.").unwrap()), 1);
        assert_eq!(
            rule_length(&parse_rule("fly(X) :- bird(X), not ab(X).").unwrap()),
            3
        );
        assert_eq!(
            rule_length(&parse_rule(":~ leg_mode(L, car).[1@2, L]").unwrap()),
            2
        );
        assert_eq!(
            rule_length_with(
                &parse_rule(":~ leg_mode(L, car).[1@2, L]").unwrap(),
                LengthMeasure::Rules
            ),
            1
        );
    }

    #[test]
    fn canonical_form_ignores_renaming_and_order() {
        assert_eq!(
            canon("reach(B) :- reach(A), in(A,B)."),
            canon("reach(Y) :- in(X,Y), reach(X).")
        );
        assert_eq!(
            canon(":- in(A,B), in(A,C), B != C."),
            canon(":- in(X,Z), in(X,Y), Z != Y.")
        );
        assert_eq!(
            canon(":- in(A,B), in(A,C), B != C."),
            canon(":- in(X,Z), in(X,Y), Y != Z.")
        );
        assert_eq!(
            canon(":~ p(X), X > 3.[1@1, X]"),
            canon(":~ p(Y), 3 < Y.[1@1, Y]")
        );
        assert_ne!(canon("p(X) :- q(X)."), canon("p(X) :- r(X)."));
        assert_eq!(
            canon(":~ leg_mode(L, walk), leg_crime_rating(L, C), C > 3.[1@3, L, C]"),
            canon(":~ leg_crime_rating(A, B), B > 3, leg_mode(A, walk).[1@3, B, A]")
        );
    }

    #[test]
    fn smallest_space() {
        let bias = ModeBias {
            heads: vec![HeadMode {
                atom: AtomMode {
                    predicate: "p".into(),
                    args: vec![],
                },
                kind: HeadKind::Normal,
            }],
            ..ModeBias::default()
        };
        let space = enumerate_space(&bias).unwrap();
        assert_eq!(space.len(), 1);
        assert_eq!(space[0].rule.to_string(), "p.");
        assert_eq!(space[0].length, 1);
    }

    #[test]
    fn empty_bias_is_rejected() {
        assert!(enumerate_space(&ModeBias::default()).is_err());
    }
}
