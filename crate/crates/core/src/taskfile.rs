//! Task files: background rules, bias directives, explicit space rules and
//! weighted examples in one text.
//!
//! ```text
//! % background
//! bird(X) :- penguin(X).
//! % bias
//! #modeh(fly(var(t))).
//! #modeb(1, bird(var(t))).
//! #modeb(1, penguin(var(t)), neg).
//! #maxv(1).
//! 2 ~ fly(X) :- bird(X).           % explicit space rule of length 2
//! % examples
//! #pos(p1@inf, {fly(a)}, {}, {bird(a).}).
//! #neg(n1@3, {fly(b)}, {}, {penguin(b).}).
//! #brave_ordering(o1@1, p1, p2, <).
//! ```
//!
//! An omitted penalty means `inf`. Ordering examples name two earlier CDPI
//! examples.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{
    canonical_rule, enumerate_space, ArgMode, AtomMode, BodyMode, BodyModeKind, HeadKind, HeadMode,
    LengthMeasure, ModeBias, Polarity, SpaceRule, WeakBias, WeightMode,
};
use crate::syntax::lexer::Tok;
use crate::syntax::{Atom, CmpOp, Parser, Program, Rule, RuleKind, Term};
use crate::task::{Cdpi, LearningTask, PartialInterpretation, Penalty, WeightedCdoe, WeightedCdpi};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    Pos,
    Neg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdpiDecl {
    pub kind: ExampleKind,
    pub id: String,
    pub penalty: Penalty,
    pub cdpi: Cdpi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingDecl {
    pub brave: bool,
    pub id: String,
    pub penalty: Penalty,
    pub first: String,
    pub second: String,
    pub op: CmpOp,
}

/// Parsed task file, before the hypothesis space is enumerated.
#[derive(Clone, Debug, PartialEq)]
#[derive(Default)]
pub struct TaskFile {
    pub background: Program,
    pub bias: ModeBias,
    /// Explicit space rules with their stated lengths.
    pub explicit: Vec<(u64, Rule)>,
    pub examples: Vec<CdpiDecl>,
    pub orderings: Vec<OrderingDecl>,
}


impl TaskFile {
    pub fn parse(text: &str) -> Result<TaskFile> {
        let mut p = Parser::new(text)?;
        let mut tf = TaskFile::default();
        while !p.at_eof() {
            match p.peek().clone() {
                Tok::Directive(name) => {
                    p.bump();
                    directive(&mut p, &name, &mut tf)?;
                }
                Tok::Int(n) if *p.peek_at(1) == Tok::Tilde => {
                    p.bump();
                    p.bump();
                    if n < 1 {
                        return p.error("space rule length must be at least 1");
                    }
                    let mut rules = p.parse_rule()?;
                    if rules.len() != 1 {
                        return p.error("ranges are not allowed in space rules");
                    }
                    tf.explicit.push((n as u64, rules.pop().unwrap()));
                }
                _ => tf.background.rules.extend(p.parse_rule()?),
            }
        }
        Ok(tf)
    }

    /// Enumerates the bias, appends explicit rules and resolves orderings.
    pub fn into_task(self) -> Result<LearningTask> {
        let mut rules: Vec<SpaceRule> = if self.bias.is_empty() {
            Vec::new()
        } else {
            enumerate_space(&self.bias)?
        };
        let mut seen: HashSet<String> = rules
            .iter()
            .map(|r| canonical_rule(&r.rule).to_string())
            .collect();
        for (length, rule) in self.explicit {
            if seen.insert(canonical_rule(&rule).to_string()) {
                rules.push(SpaceRule {
                    id: rules.len(),
                    rule,
                    length,
                });
            }
        }
        let mut task = LearningTask {
            background: self.background,
            space: rules,
            ..LearningTask::default()
        };
        let mut by_id: HashMap<String, Cdpi> = HashMap::new();
        for e in self.examples {
            by_id.insert(e.id.clone(), e.cdpi.clone());
            let w = WeightedCdpi {
                id: e.id,
                penalty: e.penalty,
                cdpi: e.cdpi,
            };
            match e.kind {
                ExampleKind::Pos => task.positives.push(w),
                ExampleKind::Neg => task.negatives.push(w),
            }
        }
        for o in self.orderings {
            let lookup = |id: &str| {
                by_id.get(id).cloned().ok_or_else(|| {
                    Error::Task(format!(
                        "ordering {} refers to unknown example `{id}`",
                        o.id
                    ))
                })
            };
            let w = WeightedCdoe {
                id: o.id.clone(),
                penalty: o.penalty,
                first: lookup(&o.first)?,
                second: lookup(&o.second)?,
                op: o.op,
                first_ref: Some(o.first.clone()),
                second_ref: Some(o.second.clone()),
            };
            if o.brave {
                task.brave.push(w);
            } else {
                task.cautious.push(w);
            }
        }
        task.validate()?;
        Ok(task)
    }

    /// Canonical text: background, bias, explicit rules, examples, orderings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.background.rules {
            let _ = writeln!(out, "{r}");
        }
        out.push_str(&bias_text(&self.bias));
        for (len, r) in &self.explicit {
            let _ = writeln!(out, "{len} ~ {r}");
        }
        for e in &self.examples {
            let kind = match e.kind {
                ExampleKind::Pos => "pos",
                ExampleKind::Neg => "neg",
            };
            let _ = writeln!(
                out,
                "#{kind}({}@{}, {}).",
                e.id,
                e.penalty,
                cdpi_text(&e.cdpi)
            );
        }
        for o in &self.orderings {
            let kind = if o.brave {
                "brave_ordering"
            } else {
                "cautious_ordering"
            };
            let _ = writeln!(
                out,
                "#{kind}({}@{}, {}, {}, {}).",
                o.id,
                o.penalty,
                o.first,
                o.second,
                o.op.symbol()
            );
        }
        out
    }
}

pub fn parse_task(text: &str) -> Result<LearningTask> {
    TaskFile::parse(text)?.into_task()
}

fn atoms_text(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn cdpi_text(c: &Cdpi) -> String {
    let ctx = c
        .context
        .rules
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "{{{}}}, {{{}}}, {{{ctx}}}",
        atoms_text(&c.pi.inc),
        atoms_text(&c.pi.exc)
    )
}

fn arg_text(a: &ArgMode) -> String {
    match a {
        ArgMode::Var(t) => format!("var({t})"),
        ArgMode::Const(t) => format!("const({t})"),
        ArgMode::Term(t) => t.to_string(),
    }
}

fn atom_mode_text(m: &AtomMode) -> String {
    if m.args.is_empty() {
        m.predicate.to_string()
    } else {
        format!(
            "{}({})",
            m.predicate,
            m.args.iter().map(arg_text).collect::<Vec<_>>().join(",")
        )
    }
}

/// Directives reproducing the bias.
pub fn bias_text(bias: &ModeBias) -> String {
    let mut out = String::new();
    for (ty, cs) in &bias.constants {
        for c in cs {
            let _ = writeln!(out, "#constant({ty}, {c}).");
        }
    }
    for h in &bias.heads {
        let kind = if h.kind == HeadKind::Choice {
            ", choice"
        } else {
            ""
        };
        let _ = writeln!(out, "#modeh({}{kind}).", atom_mode_text(&h.atom));
    }
    for b in &bias.body {
        let recall = b.recall.map(|r| format!("{r}, ")).unwrap_or_default();
        let body = match &b.kind {
            BodyModeKind::Atom { atom, polarity } => {
                let pol = match polarity {
                    Polarity::Pos => "",
                    Polarity::Neg => ", neg",
                    Polarity::Any => ", any",
                };
                format!("{}{pol}", atom_mode_text(atom))
            }
            BodyModeKind::Cmp { left, op, right } => {
                format!("{} {} {}", arg_text(left), op.symbol(), arg_text(right))
            }
        };
        let _ = writeln!(out, "#modeb({recall}{body}).");
    }
    if bias.is_empty() {
        return out;
    }
    let _ = writeln!(out, "#maxv({}).", bias.max_vars);
    let _ = writeln!(out, "#maxb({}).", bias.max_body);
    for (kind, n) in &bias.kind_max_body {
        let _ = writeln!(out, "#maxb({}, {n}).", kind_keyword(*kind));
    }
    if bias.heads.iter().any(|h| h.kind == HeadKind::Choice) {
        let bounds: Vec<String> = bias
            .choice_bounds
            .iter()
            .map(|(l, u)| format!("{l}..{u}"))
            .collect();
        let _ = writeln!(out, "#choice(bounds={}).", bounds.join(";"));
    }
    if bias.constraints {
        out.push_str("#constraint.\n");
    }
    if bias.connected {
        out.push_str("#connected.\n");
    }
    if let Some(w) = &bias.weak {
        let levels: Vec<String> = w.levels.iter().map(|l| l.to_string()).collect();
        let weights: Vec<String> = w
            .weights
            .iter()
            .map(|w| match w {
                WeightMode::Int(i) => i.to_string(),
                WeightMode::Var(t) => format!("var({t})"),
            })
            .collect();
        let _ = writeln!(
            out,
            "#weak(levels={}, weights={}).",
            levels.join(";"),
            weights.join(";")
        );
    }
    if bias.length == LengthMeasure::Rules {
        out.push_str("#length(rules).\n");
    }
    out
}

fn name(s: &str) -> Arc<str> {
    Arc::from(s)
}

fn directive(p: &mut Parser, d: &str, tf: &mut TaskFile) -> Result<()> {
    match d {
        "pos" | "neg" => {
            p.expect(&Tok::LParen)?;
            let (id, penalty) = id_and_penalty(p)?;
            p.expect(&Tok::Comma)?;
            let inc = atom_set(p)?;
            p.expect(&Tok::Comma)?;
            let exc = atom_set(p)?;
            let context = if p.eat(&Tok::Comma) {
                p.expect(&Tok::LBrace)?;
                let ctx = p.parse_rules_until(&Tok::RBrace)?;
                p.expect(&Tok::RBrace)?;
                ctx
            } else {
                Program::default()
            };
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            let pi = PartialInterpretation::new(inc, exc)?;
            let kind = if d == "pos" {
                ExampleKind::Pos
            } else {
                ExampleKind::Neg
            };
            tf.examples.push(CdpiDecl {
                kind,
                id,
                penalty,
                cdpi: Cdpi::new(pi, context)?,
            });
        }
        "brave_ordering" | "cautious_ordering" => {
            p.expect(&Tok::LParen)?;
            let (id, penalty) = id_and_penalty(p)?;
            p.expect(&Tok::Comma)?;
            let first = example_id(p)?;
            p.expect(&Tok::Comma)?;
            let second = example_id(p)?;
            let op = if p.eat(&Tok::Comma) {
                match p.bump() {
                    Tok::Cmp(op) => op,
                    other => {
                        return p.error(format!(
                            "expected comparison operator, found {}",
                            other.describe()
                        ))
                    }
                }
            } else {
                CmpOp::Lt
            };
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            tf.orderings.push(OrderingDecl {
                brave: d == "brave_ordering",
                id,
                penalty,
                first,
                second,
                op,
            });
        }
        "modeh" => {
            p.expect(&Tok::LParen)?;
            let atom = atom_mode(p)?;
            let mut kind = HeadKind::Normal;
            if p.eat(&Tok::Comma) {
                kind = match p.expect_ident()?.as_str() {
                    "normal" => HeadKind::Normal,
                    "choice" => HeadKind::Choice,
                    other => return p.error(format!("unknown head kind `{other}`")),
                };
            }
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            tf.bias.heads.push(HeadMode { atom, kind });
        }
        "modeb" => {
            p.expect(&Tok::LParen)?;
            let recall = if matches!(p.peek(), Tok::Int(_)) && *p.peek_at(1) == Tok::Comma {
                let r = p.expect_int()?;
                p.bump();
                if r < 1 {
                    return p.error("recall must be at least 1");
                }
                Some(r as usize)
            } else {
                None
            };
            let kind = body_mode(p)?;
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            tf.bias.body.push(BodyMode { recall, kind });
        }
        "constant" => {
            p.expect(&Tok::LParen)?;
            let ty = p.expect_ident()?;
            p.expect(&Tok::Comma)?;
            let values: Vec<Term> =
                if matches!(p.peek(), Tok::Int(_)) && *p.peek_at(1) == Tok::DotDot {
                    let lo = p.expect_int()?;
                    p.bump();
                    let hi = p.expect_int()?;
                    if lo > hi {
                        return p.error(format!("empty range {lo}..{hi}"));
                    }
                    (lo..=hi).map(Term::Int).collect()
                } else {
                    vec![p.parse_term()?]
                };
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            let entry = tf.bias.constants.entry(name(&ty)).or_default();
            for v in values {
                if !v.is_ground() {
                    return p.error("constants must be ground");
                }
                if !entry.contains(&v) {
                    entry.push(v);
                }
            }
        }
        "maxv" | "maxb" => {
            p.expect(&Tok::LParen)?;
            let mut kind = None;
            if d == "maxb" && matches!(p.peek(), Tok::Ident(_)) {
                let word = p.expect_ident()?;
                kind = Some(match word.as_str() {
                    "normal" => RuleKind::Normal,
                    "choice" => RuleKind::Choice,
                    "constraint" => RuleKind::Constraint,
                    "weak" => RuleKind::Weak,
                    other => return p.error(format!("unknown rule kind `{other}`")),
                });
                p.expect(&Tok::Comma)?;
            }
            let n = p.expect_int()?;
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            if n < 0 {
                return p.error("limits must be non-negative");
            }
            if let Some(k) = kind {
                tf.bias.kind_max_body.insert(k, n as usize);
            } else if d == "maxv" {
                tf.bias.max_vars = n as usize;
            } else {
                tf.bias.max_body = n as usize;
            }
        }
        "constraint" => {
            p.expect(&Tok::Dot)?;
            tf.bias.constraints = true;
        }
        "connected" => {
            p.expect(&Tok::Dot)?;
            tf.bias.connected = true;
        }
        "choice" => {
            p.expect(&Tok::LParen)?;
            keyword(p, "bounds")?;
            let mut bounds = Vec::new();
            loop {
                let (l, u) = int_range(p)?;
                if l < 0 || l > u || u > 1 {
                    return p.error(format!("unsupported choice bounds {l}..{u}"));
                }
                bounds.push((l as u32, u as u32));
                if !p.eat(&Tok::Semi) {
                    break;
                }
            }
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            tf.bias.choice_bounds = bounds;
        }
        "weak" => {
            p.expect(&Tok::LParen)?;
            keyword(p, "levels")?;
            let mut levels = Vec::new();
            loop {
                let (l, u) = int_range(p)?;
                levels.extend(l..=u);
                if !p.eat(&Tok::Semi) {
                    break;
                }
            }
            p.expect(&Tok::Comma)?;
            keyword(p, "weights")?;
            let mut weights = Vec::new();
            loop {
                match p.peek().clone() {
                    Tok::Int(i) => {
                        p.bump();
                        weights.push(WeightMode::Int(i));
                    }
                    Tok::Ident(s) if s == "var" => {
                        p.bump();
                        p.expect(&Tok::LParen)?;
                        let ty = p.expect_ident()?;
                        p.expect(&Tok::RParen)?;
                        weights.push(WeightMode::Var(name(&ty)));
                    }
                    other => {
                        return p.error(format!("expected weight, found {}", other.describe()))
                    }
                }
                if !p.eat(&Tok::Semi) {
                    break;
                }
            }
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
            levels.sort_unstable();
            levels.dedup();
            tf.bias.weak = Some(WeakBias { levels, weights });
        }
        "length" => {
            p.expect(&Tok::LParen)?;
            tf.bias.length = match p.expect_ident()?.as_str() {
                "literals" => LengthMeasure::Literals,
                "rules" => LengthMeasure::Rules,
                other => return p.error(format!("unknown length measure `{other}`")),
            };
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Dot)?;
        }
        other => return p.error(format!("unknown directive `#{other}`")),
    }
    Ok(())
}

fn keyword(p: &mut Parser, kw: &str) -> Result<()> {
    let got = p.expect_ident()?;
    if got != kw {
        return p.error(format!("expected `{kw}=`, found `{got}`"));
    }
    p.expect(&Tok::Cmp(CmpOp::Eq))
}

fn int_range(p: &mut Parser) -> Result<(i64, i64)> {
    let lo = p.expect_int()?;
    if p.eat(&Tok::DotDot) {
        Ok((lo, p.expect_int()?))
    } else {
        Ok((lo, lo))
    }
}

fn example_id(p: &mut Parser) -> Result<String> {
    match p.bump() {
        Tok::Ident(s) => Ok(s),
        Tok::Int(i) => Ok(i.to_string()),
        other => p.error(format!(
            "expected example identifier, found {}",
            other.describe()
        )),
    }
}

fn id_and_penalty(p: &mut Parser) -> Result<(String, Penalty)> {
    let id = example_id(p)?;
    let penalty = if p.eat(&Tok::At) {
        match p.bump() {
            Tok::Int(i) if i >= 1 => Penalty::Finite(i as u64),
            Tok::Ident(s) if s == "inf" => Penalty::Infinite,
            other => {
                return p.error(format!(
                    "expected positive penalty or `inf`, found {}",
                    other.describe()
                ))
            }
        }
    } else {
        Penalty::Infinite
    };
    Ok((id, penalty))
}

fn atom_set(p: &mut Parser) -> Result<Vec<Atom>> {
    p.expect(&Tok::LBrace)?;
    let mut atoms = Vec::new();
    if !p.eat(&Tok::RBrace) {
        loop {
            atoms.push(p.parse_atom()?);
            if !p.eat(&Tok::Comma) && !p.eat(&Tok::Semi) {
                break;
            }
        }
        p.expect(&Tok::RBrace)?;
    }
    Ok(atoms)
}

fn arg_mode(p: &mut Parser) -> Result<ArgMode> {
    if let Tok::Ident(s) = p.peek().clone() {
        if (s == "var" || s == "const") && *p.peek_at(1) == Tok::LParen {
            p.bump();
            p.bump();
            let ty = p.expect_ident()?;
            p.expect(&Tok::RParen)?;
            return Ok(if s == "var" {
                ArgMode::Var(name(&ty))
            } else {
                ArgMode::Const(name(&ty))
            });
        }
    }
    let t = p.parse_term()?;
    if !t.is_ground() {
        return p.error("fixed mode arguments must be ground");
    }
    Ok(ArgMode::Term(t))
}

fn atom_mode(p: &mut Parser) -> Result<AtomMode> {
    let predicate = p.expect_ident()?;
    let mut args = Vec::new();
    if p.eat(&Tok::LParen) {
        loop {
            args.push(arg_mode(p)?);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.expect(&Tok::RParen)?;
    }
    Ok(AtomMode {
        predicate: name(&predicate),
        args,
    })
}

fn body_mode(p: &mut Parser) -> Result<BodyModeKind> {
    let starts_arg = match p.peek() {
        Tok::Int(_) | Tok::Var(_) => true,
        Tok::Ident(s) => (s == "var" || s == "const") && *p.peek_at(1) == Tok::LParen,
        _ => false,
    };
    if starts_arg {
        let left = arg_mode(p)?;
        let op = match p.bump() {
            Tok::Cmp(op) => op,
            other => {
                return p.error(format!(
                    "expected comparison operator, found {}",
                    other.describe()
                ))
            }
        };
        let right = arg_mode(p)?;
        return Ok(BodyModeKind::Cmp { left, op, right });
    }
    let negated = matches!(p.peek(), Tok::Ident(s) if s == "not");
    if negated {
        p.bump();
    }
    let atom = atom_mode(p)?;
    let mut polarity = if negated {
        Polarity::Neg
    } else {
        Polarity::Pos
    };
    if !negated && *p.peek() == Tok::Comma && matches!(p.peek_at(1), Tok::Ident(_)) {
        p.bump();
        polarity = match p.expect_ident()?.as_str() {
            "pos" => Polarity::Pos,
            "neg" => Polarity::Neg,
            "any" => Polarity::Any,
            other => return p.error(format!("unknown polarity `{other}`")),
        };
    }
    Ok(BodyModeKind::Atom { atom, polarity })
}

/// Builds a task file holding explicit space rules (lengths taken from the
/// given measure) and the examples of `task`.
pub fn task_to_file(task: &LearningTask) -> TaskFile {
    let mut tf = TaskFile {
        background: task.background.clone(),
        ..TaskFile::default()
    };
    tf.explicit = task
        .space
        .iter()
        .map(|r| (r.length, r.rule.clone()))
        .collect();
    for (kind, list) in [
        (ExampleKind::Pos, &task.positives),
        (ExampleKind::Neg, &task.negatives),
    ] {
        for e in list {
            tf.examples.push(CdpiDecl {
                kind: kind.clone(),
                id: e.id.clone(),
                penalty: e.penalty,
                cdpi: e.cdpi.clone(),
            });
        }
    }
    let known: BTreeMap<&str, ()> = tf.examples.iter().map(|e| (e.id.as_str(), ())).collect();
    let mut hidden = 0usize;
    let mut extra: Vec<CdpiDecl> = Vec::new();
    for (brave, list) in [(true, &task.brave), (false, &task.cautious)] {
        for o in list {
            let mut resolve = |r: &Option<String>, c: &Cdpi| -> String {
                match r {
                    Some(id) if known.contains_key(id.as_str()) => id.clone(),
                    _ => {
                        hidden += 1;
                        let id = format!("{}_cdpi{hidden}", o.id);
                        extra.push(CdpiDecl {
                            kind: ExampleKind::Pos,
                            id: id.clone(),
                            penalty: Penalty::Infinite,
                            cdpi: c.clone(),
                        });
                        id
                    }
                }
            };
            let first = resolve(&o.first_ref, &o.first);
            let second = resolve(&o.second_ref, &o.second);
            tf.orderings.push(OrderingDecl {
                brave,
                id: o.id.clone(),
                penalty: o.penalty,
                first,
                second,
                op: o.op,
            });
        }
    }
    tf.examples.extend(extra);
    tf
}

fn kind_keyword(kind: RuleKind) -> &'static str {
    match kind {
        RuleKind::Normal => "normal",
        RuleKind::Choice => "choice",
        RuleKind::Constraint => "constraint",
        RuleKind::Weak => "weak",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        bird(X) :- penguin(X).
        #constant(t, a).
        #modeh(fly(var(t))).
        #modeb(1, bird(var(t))).
        #modeb(1, penguin(var(t)), neg).
        #maxv(1).
        #pos(p1@inf, {fly(a)}, {}, {bird(a).}).
        #neg(n1@3, {fly(b)}, {}, {penguin(b).}).
        #pos(p2, {}, {}).
        #brave_ordering(o1@1, p1, p2, <).
    ";

    #[test]
    fn parses_sample_task() {
        let task = parse_task(SAMPLE).unwrap();
        assert_eq!(task.background.len(), 1);
        assert_eq!(task.positives.len(), 2);
        assert_eq!(task.negatives[0].penalty, Penalty::Finite(3));
        assert_eq!(task.positives[1].penalty, Penalty::Infinite);
        assert_eq!(task.brave[0].op, CmpOp::Lt);
        let texts: Vec<String> = task.space.iter().map(|r| r.rule.to_string()).collect();
        assert!(
            texts.contains(&"fly(V0) :- bird(V0), not penguin(V0).".to_string()),
            "{texts:?}"
        );
        assert!(texts.contains(&"fly(V0) :- bird(V0).".to_string()));
    }

    #[test]
    fn text_round_trip() {
        let tf = TaskFile::parse(SAMPLE).unwrap();
        let again = TaskFile::parse(&tf.to_text()).unwrap();
        assert_eq!(tf, again);
    }

    #[test]
    fn explicit_space_rules_and_errors() {
        let task = parse_task("1 ~ a.\n2 ~ b :- not a.\n#pos(e@2, {a}, {}).").unwrap();
        assert_eq!(task.space.len(), 2);
        assert_eq!(task.space[1].length, 2);
        assert!(parse_task("#pos(e@0, {a}, {}).").is_err());
        assert!(parse_task("#pos(e, {a}, {}). #pos(e, {b}, {}).").is_err());
        assert!(parse_task("#brave_ordering(o, x, y, <).").is_err());
        assert!(parse_task("#bogus.").is_err());
    }
}
