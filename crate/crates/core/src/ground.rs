//! Bottom-up instantiation of safe programs.
//!
//! Grounding runs in two phases. A semi-naive fixpoint over the positive
//! dependencies computes every atom that could possibly be derived (negation
//! ignored, so this over-approximates every answer set). The second phase then
//! instantiates each rule against that atom set: positive body atoms are
//! joined against it, comparison literals are evaluated away, and negated
//! atoms that can never be derived are dropped as trivially true.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::syntax::{Atom, CmpOp, Literal, Name, Program, Rule, Term};

pub type AtomId = u32;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroundBody {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundRule {
    Normal {
        head: AtomId,
        body: GroundBody,
    },
    Choice {
        lower: u32,
        upper: u32,
        heads: Vec<AtomId>,
        body: GroundBody,
    },
    Constraint {
        body: GroundBody,
    },
    Weak {
        body: GroundBody,
        weight: i64,
        level: i64,
        terms: Vec<Term>,
    },
}

impl GroundRule {
    pub fn body(&self) -> &GroundBody {
        match self {
            GroundRule::Normal { body, .. }
            | GroundRule::Choice { body, .. }
            | GroundRule::Constraint { body }
            | GroundRule::Weak { body, .. } => body,
        }
    }
}

/// Grounding caps. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug)]
pub struct GroundingLimits {
    pub max_rules: usize,
    pub max_atoms: usize,
}

impl Default for GroundingLimits {
    fn default() -> Self {
        GroundingLimits {
            max_rules: 1_000_000,
            max_atoms: 100_000,
        }
    }
}

/// A variable-free program with a dense atom table.
#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
    pub rules: Vec<GroundRule>,
    /// For each ground rule, the index of the source rule it instantiates.
    pub origins: Vec<usize>,
}

impl GroundProgram {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id as usize]
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn id_of(&self, atom: &Atom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    fn intern(&mut self, atom: Atom, limits: &GroundingLimits) -> Result<AtomId> {
        if let Some(&id) = self.index.get(&atom) {
            return Ok(id);
        }
        if self.atoms.len() >= limits.max_atoms {
            return Err(Error::LimitExceeded {
                what: "ground atom",
                limit: limits.max_atoms,
            });
        }
        let id = self.atoms.len() as AtomId;
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        Ok(id)
    }

    pub fn has_weak_constraints(&self) -> bool {
        self.rules
            .iter()
            .any(|r| matches!(r, GroundRule::Weak { .. }))
    }

    fn body_text(&self, body: &GroundBody) -> String {
        let mut parts: Vec<String> = body.pos.iter().map(|&a| self.atom(a).to_string()).collect();
        parts.extend(body.neg.iter().map(|&a| format!("not {}", self.atom(a))));
        parts.join(", ")
    }

    pub fn rule_text(&self, rule: &GroundRule) -> String {
        let body = rule.body();
        let tail = if body.pos.is_empty() && body.neg.is_empty() {
            String::new()
        } else {
            format!(" :- {}", self.body_text(body))
        };
        match rule {
            GroundRule::Normal { head, .. } => format!("{}{tail}.", self.atom(*head)),
            GroundRule::Choice {
                lower,
                upper,
                heads,
                ..
            } => {
                let hs: Vec<String> = heads.iter().map(|&h| self.atom(h).to_string()).collect();
                format!("{lower} {{ {} }} {upper}{tail}.", hs.join("; "))
            }
            GroundRule::Constraint { .. } => format!(":- {}.", self.body_text(body)),
            GroundRule::Weak {
                weight,
                level,
                terms,
                ..
            } => {
                let mut s = format!(":~ {}.[{weight}@{level}", self.body_text(body));
                for t in terms {
                    let _ = write!(s, ", {t}");
                }
                s.push(']');
                s
            }
        }
    }

    /// Debug dump: one ground rule per line.
    pub fn dump(&self) -> String {
        self.rules
            .iter()
            .map(|r| self.rule_text(r))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

type Subst = Vec<(Name, Term)>;

fn lookup<'a>(subst: &'a Subst, var: &Name) -> Option<&'a Term> {
    subst.iter().find(|(v, _)| v == var).map(|(_, t)| t)
}

pub(crate) fn apply(term: &Term, subst: &Subst) -> Term {
    match term {
        Term::Var(v) => lookup(subst, v).cloned().unwrap_or_else(|| term.clone()),
        Term::Func(f, args) => {
            Term::Func(f.clone(), args.iter().map(|a| apply(a, subst)).collect())
        }
        _ => term.clone(),
    }
}

fn apply_atom(atom: &Atom, subst: &Subst) -> Atom {
    Atom {
        predicate: atom.predicate.clone(),
        args: atom.args.iter().map(|a| apply(a, subst)).collect(),
    }
}

/// Extends `subst` so that `pattern` equals the ground `value`; undoes on failure.
fn unify(pattern: &Term, value: &Term, subst: &mut Subst) -> bool {
    match pattern {
        Term::Var(v) => match lookup(subst, v) {
            Some(bound) => bound == value,
            None => {
                subst.push((v.clone(), value.clone()));
                true
            }
        },
        Term::Func(f, args) => match value {
            Term::Func(g, vals) if f == g && args.len() == vals.len() => {
                let mark = subst.len();
                for (a, v) in args.iter().zip(vals) {
                    if !unify(a, v, subst) {
                        subst.truncate(mark);
                        return false;
                    }
                }
                true
            }
            _ => false,
        },
        _ => pattern == value,
    }
}

fn unify_atom(pattern: &Atom, value: &Atom, subst: &mut Subst) -> bool {
    let mark = subst.len();
    for (p, v) in pattern.args.iter().zip(&value.args) {
        if !unify(p, v, subst) {
            subst.truncate(mark);
            return false;
        }
    }
    true
}

fn comparisons_hold(body: &[Literal], subst: &Subst) -> bool {
    body.iter().all(|l| match l {
        Literal::Cmp(a, op, b) => op.eval(&apply(a, subst), &apply(b, subst)),
        _ => true,
    })
}

/// Derivable atoms, grouped per predicate signature in insertion order.
#[derive(Default)]
struct AtomStore {
    by_sig: HashMap<(Name, usize), Vec<Atom>>,
    seen: std::collections::HashSet<Atom>,
}

impl AtomStore {
    fn slice(&self, atom: &Atom, range: &HashMap<(Name, usize), (usize, usize)>) -> &[Atom] {
        let sig = atom.signature();
        match (self.by_sig.get(&sig), range.get(&sig)) {
            (Some(v), Some(&(lo, hi))) => &v[lo..hi],
            _ => &[],
        }
    }
}

/// Which slice of the store each positive body atom is matched against.
#[derive(Clone, Copy)]
enum Window {
    Old,
    Delta,
    Full,
}

struct Bounds {
    old: HashMap<(Name, usize), (usize, usize)>,
    delta: HashMap<(Name, usize), (usize, usize)>,
    full: HashMap<(Name, usize), (usize, usize)>,
}

fn join<F: FnMut(&Subst) -> Result<()>>(
    store: &AtomStore,
    bounds: &Bounds,
    positives: &[&Atom],
    windows: &[Window],
    subst: &mut Subst,
    emit: &mut F,
) -> Result<()> {
    let Some((first, rest)) = positives.split_first() else {
        return emit(subst);
    };
    let range = match windows[0] {
        Window::Old => &bounds.old,
        Window::Delta => &bounds.delta,
        Window::Full => &bounds.full,
    };
    for candidate in store.slice(first, range) {
        let mark = subst.len();
        if unify_atom(first, candidate, subst) {
            join(store, bounds, rest, &windows[1..], subst, emit)?;
            subst.truncate(mark);
        }
    }
    Ok(())
}

fn full_bounds(store: &AtomStore) -> HashMap<(Name, usize), (usize, usize)> {
    store
        .by_sig
        .iter()
        .map(|(k, v)| (k.clone(), (0, v.len())))
        .collect()
}

/// Semi-naive fixpoint of the positive part of the program.
fn possible_atoms(program: &Program, limits: &GroundingLimits) -> Result<AtomStore> {
    let mut store = AtomStore::default();
    let mut old: HashMap<(Name, usize), (usize, usize)> = HashMap::new();
    let mut first_round = true;
    loop {
        let full = full_bounds(&store);
        let delta: HashMap<_, _> = full
            .iter()
            .map(|(k, &(_, hi))| {
                let lo = old.get(k).map_or(0, |&(_, h)| h);
                (k.clone(), (lo, hi))
            })
            .collect();
        let bounds = Bounds {
            old: old.clone(),
            delta,
            full: full.clone(),
        };
        let mut fresh: Vec<Atom> = Vec::new();
        for rule in &program.rules {
            let heads = rule.head_atoms();
            if heads.is_empty() {
                continue;
            }
            let positives: Vec<&Atom> = rule.positive_body_atoms().collect();
            let mut emit = |subst: &Subst| -> Result<()> {
                if comparisons_hold(rule.body(), subst) {
                    for h in heads {
                        fresh.push(apply_atom(h, subst));
                    }
                }
                Ok(())
            };
            if positives.is_empty() {
                if first_round {
                    emit(&Vec::new())?;
                }
                continue;
            }
            for i in 0..positives.len() {
                let windows: Vec<Window> = (0..positives.len())
                    .map(|j| match j.cmp(&i) {
                        std::cmp::Ordering::Less => Window::Old,
                        std::cmp::Ordering::Equal => Window::Delta,
                        std::cmp::Ordering::Greater => Window::Full,
                    })
                    .collect();
                join(
                    &store,
                    &bounds,
                    &positives,
                    &windows,
                    &mut Vec::new(),
                    &mut emit,
                )?;
            }
        }
        first_round = false;
        old = full;
        let mut added = false;
        for atom in fresh {
            if store.seen.contains(&atom) {
                continue;
            }
            if store.seen.len() >= limits.max_atoms {
                return Err(Error::LimitExceeded {
                    what: "ground atom",
                    limit: limits.max_atoms,
                });
            }
            store.seen.insert(atom.clone());
            store.by_sig.entry(atom.signature()).or_default().push(atom);
            added = true;
        }
        if !added {
            return Ok(store);
        }
    }
}

/// Grounds a safe program with the default caps.
pub fn ground(program: &Program) -> Result<GroundProgram> {
    ground_with(program, &GroundingLimits::default())
}

pub fn ground_with(program: &Program, limits: &GroundingLimits) -> Result<GroundProgram> {
    let store = possible_atoms(program, limits)?;
    let full = full_bounds(&store);
    let bounds = Bounds {
        old: HashMap::new(),
        delta: HashMap::new(),
        full,
    };
    let mut gp = GroundProgram::default();

    for (origin, rule) in program.rules.iter().enumerate() {
        let positives: Vec<&Atom> = rule.positive_body_atoms().collect();
        let windows = vec![Window::Full; positives.len()];
        let mut instances: Vec<Subst> = Vec::new();
        join(
            &store,
            &bounds,
            &positives,
            &windows,
            &mut Vec::new(),
            &mut |s: &Subst| {
                if comparisons_hold(rule.body(), s) {
                    instances.push(s.clone());
                }
                Ok(())
            },
        )?;
        for subst in instances {
            if gp.rules.len() >= limits.max_rules {
                return Err(Error::LimitExceeded {
                    what: "ground rule",
                    limit: limits.max_rules,
                });
            }
            let heads: Vec<AtomId> = rule
                .head_atoms()
                .iter()
                .map(|h| gp.intern(apply_atom(h, &subst), limits))
                .collect::<Result<_>>()?;
            let mut body = GroundBody::default();
            for lit in rule.body() {
                match lit {
                    Literal::Pos(a) => body.pos.push(gp.intern(apply_atom(a, &subst), limits)?),
                    Literal::Not(a) => {
                        let g = apply_atom(a, &subst);
                        if store.seen.contains(&g) {
                            body.neg.push(gp.intern(g, limits)?);
                        }
                    }
                    Literal::Cmp(..) => {}
                }
            }
            let ground_rule = match rule {
                Rule::Normal { .. } => GroundRule::Normal {
                    head: heads[0],
                    body,
                },
                Rule::Choice { lower, upper, .. } => GroundRule::Choice {
                    lower: *lower,
                    upper: *upper,
                    heads,
                    body,
                },
                Rule::Constraint { .. } => GroundRule::Constraint { body },
                Rule::Weak {
                    weight,
                    level,
                    terms,
                    ..
                } => {
                    let w = apply(weight, &subst);
                    let l = apply(level, &subst);
                    let weight = w.as_int().ok_or(Error::NonIntegerWeak {
                        what: "weight",
                        term: w.to_string(),
                    })?;
                    let level = l.as_int().ok_or(Error::NonIntegerWeak {
                        what: "level",
                        term: l.to_string(),
                    })?;
                    GroundRule::Weak {
                        body,
                        weight,
                        level,
                        terms: terms.iter().map(|t| apply(t, &subst)).collect(),
                    }
                }
            };
            gp.rules.push(ground_rule);
            gp.origins.push(origin);
        }
    }
    Ok(gp)
}

fn collect_terms(term: &Term, ground: &mut BTreeSet<Term>, functors: &mut BTreeSet<(Name, usize)>) {
    match term {
        Term::Var(_) => {}
        Term::Func(f, args) => {
            functors.insert((f.clone(), args.len()));
            if term.is_ground() {
                ground.insert(term.clone());
            }
            args.iter().for_each(|a| collect_terms(a, ground, functors));
        }
        _ => {
            ground.insert(term.clone());
        }
    }
}

/// The ground terms constructible from the program: every ground term that
/// occurs in it, plus each occurring functor applied to the occurring
/// constants (one level deep).
pub fn herbrand_universe(program: &Program, limits: &GroundingLimits) -> Result<BTreeSet<Term>> {
    let mut ground = BTreeSet::new();
    let mut functors = BTreeSet::new();
    let mut visit = |t: &Term| collect_terms(t, &mut ground, &mut functors);
    for rule in &program.rules {
        for h in rule.head_atoms() {
            h.args.iter().for_each(&mut visit);
        }
        for l in rule.body() {
            match l {
                Literal::Pos(a) | Literal::Not(a) => a.args.iter().for_each(&mut visit),
                Literal::Cmp(a, _, b) => {
                    visit(a);
                    visit(b);
                }
            }
        }
        if let Rule::Weak {
            weight,
            level,
            terms,
            ..
        } = rule
        {
            visit(weight);
            visit(level);
            terms.iter().for_each(&mut visit);
        }
    }
    let constants: Vec<Term> = ground
        .iter()
        .filter(|t| !matches!(t, Term::Func(..)))
        .cloned()
        .collect();
    for (f, arity) in &functors {
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..*arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    constants.iter().map(move |c| {
                        let mut t = t.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect();
            if tuples.len() > limits.max_atoms {
                return Err(Error::LimitExceeded {
                    what: "Herbrand universe",
                    limit: limits.max_atoms,
                });
            }
        }
        for args in tuples {
            ground.insert(Term::Func(f.clone(), args));
        }
        if ground.len() > limits.max_atoms {
            return Err(Error::LimitExceeded {
                what: "Herbrand universe",
                limit: limits.max_atoms,
            });
        }
    }
    Ok(ground)
}

/// Every ground atom formable from the program's predicate signatures over its
/// Herbrand universe.
pub fn herbrand_base(program: &Program) -> Result<BTreeSet<Atom>> {
    herbrand_base_with(program, &GroundingLimits::default())
}

pub fn herbrand_base_with(program: &Program, limits: &GroundingLimits) -> Result<BTreeSet<Atom>> {
    let universe: Vec<Term> = herbrand_universe(program, limits)?.into_iter().collect();
    let mut sigs: BTreeSet<(Name, usize)> = BTreeSet::new();
    for rule in &program.rules {
        sigs.extend(rule.head_atoms().iter().map(Atom::signature));
        sigs.extend(
            rule.body()
                .iter()
                .filter_map(Literal::atom)
                .map(Atom::signature),
        );
    }
    let mut base = BTreeSet::new();
    for (pred, arity) in sigs {
        let count = universe
            .len()
            .checked_pow(arity as u32)
            .unwrap_or(usize::MAX);
        if count.saturating_add(base.len()) > limits.max_atoms {
            return Err(Error::LimitExceeded {
                what: "Herbrand base",
                limit: limits.max_atoms,
            });
        }
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    universe.iter().map(move |c| {
                        let mut t = t.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect();
        }
        base.extend(tuples.into_iter().map(|args| Atom {
            predicate: pred.clone(),
            args,
        }));
    }
    Ok(base)
}

/// Evaluates a ground comparison; exposed for the naive instantiation used in
/// tests.
pub fn eval_cmp(lhs: &Term, op: CmpOp, rhs: &Term) -> bool {
    op.eval(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn herbrand_base_of_hamilton_graph() {
        let p = parse_program("node(1..4). edge(1,2). edge(2,3). edge(3,4). edge(4,1).").unwrap();
        let hb = herbrand_base(&p).unwrap();
        let node = hb.iter().filter(|a| &*a.predicate == "node").count();
        let edge = hb.iter().filter(|a| &*a.predicate == "edge").count();
        assert_eq!((node, edge), (4, 16));
        assert_eq!(hb.len(), 20);
    }

    #[test]
    fn herbrand_base_small_cases() {
        assert!(herbrand_base(&Program::default()).unwrap().is_empty());
        let p = parse_program("p(a). q(X) :- p(X).").unwrap();
        let hb: Vec<String> = herbrand_base(&p)
            .unwrap()
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(hb, vec!["p(a)", "q(a)"]);
    }

    #[test]
    fn choice_rule_instances_follow_edges() {
        let p = parse_program(
            "node(1..4). edge(1,2). edge(2,3). edge(3,4). edge(4,1).\n0 {in(V0,V1)} 1 :- edge(V0,V1).",
        )
        .unwrap();
        let gp = ground(&p).unwrap();
        let choices: Vec<String> = gp
            .rules
            .iter()
            .filter(|r| matches!(r, GroundRule::Choice { .. }))
            .map(|r| gp.rule_text(r))
            .collect();
        assert_eq!(
            choices,
            vec![
                "0 { in(1,2) } 1 :- edge(1,2).",
                "0 { in(2,3) } 1 :- edge(2,3).",
                "0 { in(3,4) } 1 :- edge(3,4).",
                "0 { in(4,1) } 1 :- edge(4,1).",
            ]
        );
    }

    #[test]
    fn ground_input_is_preserved() {
        let p = parse_program("a :- not b. b :- not a. :- a, b. c.").unwrap();
        let gp = ground(&p).unwrap();
        assert_eq!(gp.dump(), "a :- not b.\nb :- not a.\n:- a, b.\nc.");
    }

    #[test]
    fn comparisons_are_evaluated_away() {
        let p = parse_program("n(1..3). lt(X,Y) :- n(X), n(Y), X < Y.").unwrap();
        let gp = ground(&p).unwrap();
        let lts = gp
            .rules
            .iter()
            .filter(|r| matches!(r, GroundRule::Normal { body, .. } if !body.pos.is_empty()))
            .count();
        assert_eq!(lts, 3);
    }

    #[test]
    fn recursive_rules_reach_fixpoint() {
        let p =
            parse_program("e(1,2). e(2,3). e(3,4). t(X,Y) :- e(X,Y). t(X,Z) :- t(X,Y), e(Y,Z).")
                .unwrap();
        let gp = ground(&p).unwrap();
        let t = gp.atoms().iter().filter(|a| &*a.predicate == "t").count();
        assert_eq!(t, 6);
    }

    #[test]
    fn underivable_negations_are_dropped() {
        let p = parse_program("p(1). q(X) :- p(X), not r(X).").unwrap();
        let gp = ground(&p).unwrap();
        assert_eq!(gp.dump(), "p(1).\nq(1) :- p(1).");
    }

    #[test]
    fn non_integer_weights_are_errors() {
        let p = parse_program("c(a). :~ c(X).[X@1]").unwrap();
        assert!(matches!(
            ground(&p),
            Err(Error::NonIntegerWeak { what: "weight", .. })
        ));
    }

    #[test]
    fn caps_are_hard_errors() {
        let p = parse_program("n(1..50). p(X,Y) :- n(X), n(Y).").unwrap();
        let limits = GroundingLimits {
            max_rules: 1_000_000,
            max_atoms: 100,
        };
        assert!(matches!(
            ground_with(&p, &limits),
            Err(Error::LimitExceeded { .. })
        ));
        let limits = GroundingLimits {
            max_rules: 100,
            max_atoms: 100_000,
        };
        assert!(matches!(
            ground_with(&p, &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn grounding_is_deterministic() {
        let text = "node(1..4). edge(1,2). edge(2,3). edge(3,4). edge(4,1). edge(2,4).\n\
                    reach(V0) :- in(1,V0). reach(V1) :- in(V0,V1), reach(V0).\n\
                    0 {in(V0,V1)} 1 :- edge(V0,V1). :- node(V0), not reach(V0).\n\
                    :- in(V0,V1), in(V0,V2), V1 != V2.";
        let p = parse_program(text).unwrap();
        let a = ground(&p).unwrap();
        let b = ground(&p).unwrap();
        assert_eq!(a.atoms(), b.atoms());
        assert_eq!(a.rules, b.rules);
    }
}
