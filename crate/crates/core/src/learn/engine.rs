//! Cached evaluation of hypotheses against clustered examples.
//!
//! Every distinct context is grounded once together with the background and
//! the whole hypothesis space. A hypothesis is then evaluated by compiling a
//! solver from the ground rules of the background, the context and the
//! selected space rules only. Ground atoms that only the unselected rules
//! could derive have no support and are falsified by propagation.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use crate::coverage::assumptions;
use crate::error::{Error, Result};
use crate::ground::{ground, AtomId, GroundProgram, GroundRule};
use crate::solve::{Flow, Interpretation, Solver};
use crate::syntax::{CmpOp, Name, Program, Rule, RuleKind, Term};
use crate::task::{Cdpi, LearningTask, Penalty};

/// Cap on the accepting answer sets enumerated for one side of an ordering.
pub(crate) const MAX_ANSWER_SETS: usize = 100_000;
/// Cap on the entries of one verdict table.
const MAX_TABLE: usize = 200_000;

pub(crate) struct Context {
    pub gp: GroundProgram,
    /// Ground rules from the background and the context itself.
    pub fixed: Vec<usize>,
    /// Ground instances of each space rule.
    pub instances: Vec<Vec<usize>>,
    /// Interned identity of each ground weak rule, indexed like `gp.rules`.
    weak_key: Vec<u32>,
}

impl Context {
    pub fn present(&self, rule: usize) -> bool {
        !self.instances[rule].is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum ClusterKind {
    Pos,
    Neg,
    Brave(CmpOp),
    Cautious(CmpOp),
}

impl ClusterKind {
    pub fn is_ordering(self) -> bool {
        matches!(self, ClusterKind::Brave(_) | ClusterKind::Cautious(_))
    }
}

/// Outcome of a brave acceptance check, with an accepting answer set when
/// there is one and the constraint rules that answer set violates.
pub(crate) struct Acceptance {
    pub witness: Option<Interpretation>,
    pub violated: Vec<usize>,
}

/// Fixed-width set of constraint indices.
type Bits = Vec<u64>;

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// What is known about one side under a fixed set of non-constraint rules.
/// Constraints only remove answer sets, so a known answer set settles every
/// constraint set it violates nothing of, and a constraint set without
/// answer sets settles all of its supersets.
#[derive(Default)]
struct Pool {
    witnesses: Vec<(Bits, Rc<Acceptance>)>,
    unsat: Vec<Bits>,
}

pub(crate) struct Side {
    pub ctx: usize,
    pub assume: Option<Vec<(AtomId, bool)>>,
    accept_cache: RefCell<HashMap<Vec<usize>, Rc<Acceptance>>>,
    pools: RefCell<HashMap<Vec<usize>, Pool>>,
    table_cache: RefCell<HashMap<Vec<usize>, Rc<AnswerTable>>>,
}

/// Identical examples merged into one unit with the sum of their penalties.
pub(crate) struct Cluster {
    pub kind: ClusterKind,
    pub ids: Vec<String>,
    pub penalty: Penalty,
    pub sides: Vec<Side>,
    /// Space rules with a ground instance in some context of the cluster.
    pub relevant: Vec<usize>,
    /// Verdicts keyed by the hypothesis restricted to `relevant`.
    pub table: RefCell<HashMap<Vec<usize>, bool>>,
    /// The cluster of opposite sign over the same CDPI. Every hypothesis
    /// covers exactly one of the two.
    pub twin: Option<usize>,
}

impl Cluster {
    pub fn max_relevant(&self) -> Option<usize> {
        self.relevant.last().copied()
    }

    fn project(&self, p: &[usize]) -> Vec<usize> {
        p.iter()
            .copied()
            .filter(|r| self.relevant.binary_search(r).is_ok())
            .collect()
    }

    pub fn representative(&self) -> &str {
        self.ids.iter().min().map(String::as_str).unwrap_or("")
    }
}

/// A weak constraint instance satisfied by an accepting answer set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Entry {
    pub answer: u32,
    /// Identity of the instance within this table; equal keys count once.
    pub key: u32,
    pub level: u32,
    pub weight: i64,
}

/// The accepting answer sets of one CDPI under a fixed set of non-weak rules,
/// with the weak instances each of them satisfies, grouped by space rule.
pub(crate) struct AnswerTable {
    pub answers: usize,
    pub num_keys: usize,
    pub base: Vec<Entry>,
    pub by_rule: HashMap<usize, Vec<Entry>>,
}

impl AnswerTable {
    pub fn entries(&self, rule: usize) -> &[Entry] {
        self.by_rule.get(&rule).map_or(&[], Vec::as_slice)
    }
}

/// Cost vectors of every answer set of a table under a growing set of weak
/// rules. Instances are reference counted so removal undoes addition.
#[derive(Clone)]
pub(crate) struct CostState {
    counts: Vec<u32>,
    costs: Vec<i64>,
    levels: usize,
    answers: usize,
}

impl CostState {
    pub fn new(table: &AnswerTable, levels: usize) -> Self {
        let mut s = CostState {
            counts: vec![0; table.num_keys],
            costs: vec![0; table.answers * levels],
            levels,
            answers: table.answers,
        };
        for e in &table.base {
            s.apply(e, true);
        }
        s
    }

    fn apply(&mut self, e: &Entry, add: bool) {
        let c = &mut self.counts[e.key as usize];
        let slot = e.answer as usize * self.levels + e.level as usize;
        if add {
            *c += 1;
            if *c == 1 {
                self.costs[slot] += e.weight;
            }
        } else {
            *c -= 1;
            if *c == 0 {
                self.costs[slot] -= e.weight;
            }
        }
    }

    pub fn add(&mut self, table: &AnswerTable, rule: usize) {
        for e in table.entries(rule) {
            self.apply(e, true);
        }
    }

    pub fn remove(&mut self, table: &AnswerTable, rule: usize) {
        for e in table.entries(rule) {
            self.apply(e, false);
        }
    }

    pub fn answers(&self) -> usize {
        self.answers
    }

    /// Cost of one answer set, highest level first.
    pub fn cost(&self, answer: usize) -> &[i64] {
        &self.costs[answer * self.levels..(answer + 1) * self.levels]
    }
}

/// Whether an ordering over two sets of cost vectors holds.
pub(crate) fn ordering_holds(kind: ClusterKind, first: &CostState, second: &CostState) -> bool {
    let (n1, n2) = (first.answers, second.answers);
    let mut pairs = (0..n1).flat_map(|a| (0..n2).map(move |b| (a, b)));
    match kind {
        ClusterKind::Brave(op) => pairs.any(|(a, b)| op.holds(first.cost(a).cmp(second.cost(b)))),
        ClusterKind::Cautious(op) => {
            pairs.all(|(a, b)| op.holds(first.cost(a).cmp(second.cost(b))))
        }
        _ => unreachable!("not an ordering"),
    }
}

pub(crate) struct Engine {
    pub kinds: Vec<RuleKind>,
    pub lengths: Vec<u64>,
    /// Rules that can appear in an optimal hypothesis.
    pub usable: Vec<bool>,
    pub contexts: Vec<Context>,
    pub clusters: Vec<Cluster>,
    /// Weak constraint levels, highest first.
    pub levels: Vec<i64>,
    /// Predicates defined by the background or some context.
    pub base_defined: HashSet<Name>,
    /// Predicates used by the background, the contexts or the examples.
    pub base_used: HashSet<Name>,
    pub heads: Vec<Vec<Name>>,
    pub pos_body: Vec<Vec<Name>>,
    pub neg_body: Vec<Vec<Name>>,
    /// Position of each usable constraint among the usable constraints.
    cons_index: Vec<Option<usize>>,
    cons_words: usize,
}

fn is_tautology(rule: &Rule) -> bool {
    match rule {
        Rule::Normal { head, .. } => rule.positive_body_atoms().any(|a| a == head),
        Rule::Choice { heads, .. } => heads
            .iter()
            .all(|h| rule.positive_body_atoms().any(|a| a == h)),
        _ => false,
    }
}

fn predicates<'a>(atoms: impl Iterator<Item = &'a crate::syntax::Atom>) -> Vec<Name> {
    let set: BTreeSet<Name> = atoms.map(|a| a.predicate.clone()).collect();
    set.into_iter().collect()
}

impl Engine {
    pub fn new<'t>(task: &'t LearningTask) -> Result<Self> {
        task.validate()?;
        let n = task.space.len();
        let space: Vec<&Rule> = task.space.iter().map(|r| &r.rule).collect();
        let b_len = task.background.len();

        let mut ctx_index: HashMap<&Program, usize> = HashMap::new();
        let mut ctx_programs: Vec<&Program> = Vec::new();
        let mut ctx_of = |c: &'t Cdpi| -> usize {
            *ctx_index.entry(&c.context).or_insert_with(|| {
                ctx_programs.push(&c.context);
                ctx_programs.len() - 1
            })
        };

        #[derive(Hash, PartialEq, Eq)]
        enum Sig<'a> {
            Cdpi(bool, &'a Cdpi),
            Ordering(bool, &'a Cdpi, &'a Cdpi, CmpOp),
        }
        let mut sig_index: HashMap<Sig<'t>, usize> = HashMap::new();
        let mut protos: Vec<(ClusterKind, Vec<String>, Penalty, Vec<(usize, &'t Cdpi)>)> =
            Vec::new();
        let mut add =
            |sig: Sig<'t>, kind, id: &str, pen: Penalty, sides: Vec<(usize, &'t Cdpi)>| {
                match sig_index.get(&sig) {
                    Some(&i) => {
                        protos[i].1.push(id.to_string());
                        protos[i].2 = protos[i].2 + pen;
                    }
                    None => {
                        sig_index.insert(sig, protos.len());
                        protos.push((kind, vec![id.to_string()], pen, sides));
                    }
                }
            };
        for e in &task.positives {
            add(
                Sig::Cdpi(true, &e.cdpi),
                ClusterKind::Pos,
                &e.id,
                e.penalty,
                vec![(ctx_of(&e.cdpi), &e.cdpi)],
            );
        }
        for e in &task.negatives {
            add(
                Sig::Cdpi(false, &e.cdpi),
                ClusterKind::Neg,
                &e.id,
                e.penalty,
                vec![(ctx_of(&e.cdpi), &e.cdpi)],
            );
        }
        for (brave, list) in [(true, &task.brave), (false, &task.cautious)] {
            for o in list {
                let kind = if brave {
                    ClusterKind::Brave(o.op)
                } else {
                    ClusterKind::Cautious(o.op)
                };
                let sides = vec![(ctx_of(&o.first), &o.first), (ctx_of(&o.second), &o.second)];
                add(
                    Sig::Ordering(brave, &o.first, &o.second, o.op),
                    kind,
                    &o.id,
                    o.penalty,
                    sides,
                );
            }
        }

        let mut contexts = Vec::with_capacity(ctx_programs.len());
        let mut weak_levels: BTreeSet<i64> = BTreeSet::new();
        for ctx in &ctx_programs {
            let mut program = task.background.clone();
            program.rules.extend(space.iter().map(|r| (*r).clone()));
            program.extend(ctx);
            let gp = ground(&program)?;
            let mut fixed = Vec::new();
            let mut instances = vec![Vec::new(); n];
            for (i, &origin) in gp.origins.iter().enumerate() {
                if origin >= b_len && origin < b_len + n {
                    instances[origin - b_len].push(i);
                } else {
                    fixed.push(i);
                }
            }
            let mut key_index: HashMap<(Vec<AtomId>, Vec<AtomId>, i64, i64, Vec<Term>), u32> =
                HashMap::new();
            let mut weak_key = vec![u32::MAX; gp.rules.len()];
            for (i, r) in gp.rules.iter().enumerate() {
                if let GroundRule::Weak {
                    body,
                    weight,
                    level,
                    terms,
                } = r
                {
                    weak_levels.insert(*level);
                    let mut pos = body.pos.clone();
                    let mut neg = body.neg.clone();
                    pos.sort_unstable();
                    pos.dedup();
                    neg.sort_unstable();
                    neg.dedup();
                    let next = key_index.len() as u32;
                    weak_key[i] = *key_index
                        .entry((pos, neg, *weight, *level, terms.clone()))
                        .or_insert(next);
                }
            }
            contexts.push(Context {
                gp,
                fixed,
                instances,
                weak_key,
            });
        }

        let mut usable = vec![true; n];
        for (r, rule) in space.iter().enumerate() {
            let mut present = contexts.iter().filter(|c| c.present(r)).peekable();
            if present.peek().is_none() || is_tautology(rule) {
                usable[r] = false;
            } else if rule.kind() == RuleKind::Weak {
                let all_zero = contexts.iter().all(|c| {
                    c.instances[r]
                        .iter()
                        .all(|&g| matches!(c.gp.rules[g], GroundRule::Weak { weight: 0, .. }))
                });
                usable[r] = !all_zero;
            }
        }

        let twins: Vec<Option<usize>> = protos
            .iter()
            .map(|(kind, _, _, sides)| match kind {
                ClusterKind::Pos => sig_index.get(&Sig::Cdpi(false, sides[0].1)).copied(),
                ClusterKind::Neg => sig_index.get(&Sig::Cdpi(true, sides[0].1)).copied(),
                _ => None,
            })
            .collect();
        let clusters = protos
            .into_iter()
            .zip(twins)
            .map(|((kind, ids, penalty, sides), twin)| {
                let mut relevant: Vec<usize> = (0..n)
                    .filter(|&r| usable[r] && sides.iter().any(|(c, _)| contexts[*c].present(r)))
                    .collect();
                relevant.dedup();
                let sides = sides
                    .into_iter()
                    .map(|(ctx, cdpi)| Side {
                        ctx,
                        assume: assumptions(&contexts[ctx].gp, &cdpi.pi),
                        accept_cache: RefCell::default(),
                        pools: RefCell::default(),
                        table_cache: RefCell::default(),
                    })
                    .collect();
                Cluster {
                    kind,
                    ids,
                    penalty,
                    sides,
                    relevant,
                    table: RefCell::default(),
                    twin,
                }
            })
            .collect();

        let mut base_defined = HashSet::new();
        let mut base_used = HashSet::new();
        for p in std::iter::once(&task.background).chain(ctx_programs.iter().copied()) {
            for r in &p.rules {
                base_defined.extend(r.head_atoms().iter().map(|a| a.predicate.clone()));
                base_used.extend(
                    r.body()
                        .iter()
                        .filter_map(|l| l.atom())
                        .map(|a| a.predicate.clone()),
                );
            }
        }
        let pis = task
            .positives
            .iter()
            .chain(&task.negatives)
            .map(|e| &e.cdpi.pi)
            .chain(
                task.brave
                    .iter()
                    .chain(&task.cautious)
                    .flat_map(|o| [&o.first.pi, &o.second.pi]),
            );
        for pi in pis {
            base_used.extend(pi.inc.iter().chain(&pi.exc).map(|a| a.predicate.clone()));
        }

        let mut cons_index = vec![None; n];
        let mut num_cons = 0;
        for r in 0..n {
            if usable[r] && space[r].kind() == RuleKind::Constraint {
                cons_index[r] = Some(num_cons);
                num_cons += 1;
            }
        }

        Ok(Engine {
            cons_index,
            cons_words: num_cons.div_ceil(64),
            kinds: space.iter().map(|r| r.kind()).collect(),
            lengths: task.space.iter().map(|r| r.length).collect(),
            usable,
            contexts,
            clusters,
            levels: weak_levels.into_iter().rev().collect(),
            base_defined,
            base_used,
            heads: space
                .iter()
                .map(|r| predicates(r.head_atoms().iter()))
                .collect(),
            pos_body: space
                .iter()
                .map(|r| predicates(r.positive_body_atoms()))
                .collect(),
            neg_body: space
                .iter()
                .map(|r| predicates(r.negative_body_atoms()))
                .collect(),
        })
    }

    pub fn num_rules(&self) -> usize {
        self.kinds.len()
    }

    pub fn length(&self, p: &[usize]) -> u64 {
        p.iter().map(|&r| self.lengths[r]).sum()
    }

    fn level_index(&self, level: i64) -> u32 {
        self.levels
            .iter()
            .position(|&l| l == level)
            .expect("known level") as u32
    }

    /// The non-weak rules of `p` with an instance in the context.
    fn solver_key(&self, ctx: &Context, p: &[usize]) -> Vec<usize> {
        p.iter()
            .copied()
            .filter(|&r| self.kinds[r] != RuleKind::Weak && ctx.present(r))
            .collect()
    }

    fn solver(&self, ctx: &Context, key: &[usize]) -> Solver {
        let selected = ctx
            .fixed
            .iter()
            .copied()
            .chain(key.iter().flat_map(|&r| ctx.instances[r].iter().copied()));
        Solver::from_rules(&ctx.gp, selected)
    }

    fn constraint_bits(&self, rules: impl Iterator<Item = usize>) -> Bits {
        let mut bits = vec![0u64; self.cons_words];
        for r in rules {
            if let Some(i) = self.cons_index[r] {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        bits
    }

    /// Brave acceptance of one side of a cluster under the non-weak part of `p`.
    pub fn acceptance(&self, cluster: usize, side: usize, p: &[usize]) -> Rc<Acceptance> {
        let s = &self.clusters[cluster].sides[side];
        let ctx = &self.contexts[s.ctx];
        let key = self.solver_key(ctx, p);
        if let Some(hit) = s.accept_cache.borrow().get(&key) {
            return hit.clone();
        }
        let (cons, rest): (Vec<usize>, Vec<usize>) = key
            .iter()
            .partition(|&&r| self.kinds[r] == RuleKind::Constraint);
        let chosen = self.constraint_bits(cons.iter().copied());
        let known = s.pools.borrow().get(&rest).and_then(|pool| {
            if let Some((_, w)) = pool.witnesses.iter().find(|(v, _)| disjoint(v, &chosen)) {
                return Some(w.clone());
            }
            pool.unsat.iter().any(|u| subset(u, &chosen)).then(|| {
                Rc::new(Acceptance {
                    witness: None,
                    violated: Vec::new(),
                })
            })
        });
        let result = match known {
            Some(r) => r,
            None => {
                let mut witness = None;
                if let Some(assume) = &s.assume {
                    self.solver(ctx, &key).enumerate(assume, |m| {
                        witness = Some(m);
                        Flow::Stop
                    });
                }
                let violated = match &witness {
                    Some(m) => self.violated_constraints(ctx, m),
                    None => Vec::new(),
                };
                let found = witness.is_some();
                let result = Rc::new(Acceptance { witness, violated });
                let mut pools = s.pools.borrow_mut();
                if pools.len() >= MAX_TABLE {
                    pools.clear();
                }
                let pool = pools.entry(rest).or_default();
                if found {
                    pool.witnesses.push((
                        self.constraint_bits(result.violated.iter().copied()),
                        result.clone(),
                    ));
                } else {
                    pool.unsat.retain(|u| !subset(&chosen, u));
                    pool.unsat.push(chosen);
                }
                result
            }
        };
        let mut cache = s.accept_cache.borrow_mut();
        if cache.len() >= MAX_TABLE {
            cache.clear();
        }
        cache.insert(key, result.clone());
        result
    }

    /// Known answer sets of one side that survive the constraints of `p`,
    /// at most `limit` of them, taken from the most recent `scan` found.
    pub fn live_witnesses(
        &self,
        cluster: usize,
        side: usize,
        p: &[usize],
        scan: usize,
        limit: usize,
    ) -> Vec<Rc<Acceptance>> {
        let s = &self.clusters[cluster].sides[side];
        let ctx = &self.contexts[s.ctx];
        let key = self.solver_key(ctx, p);
        let (cons, rest): (Vec<usize>, Vec<usize>) = key
            .iter()
            .partition(|&&r| self.kinds[r] == RuleKind::Constraint);
        let chosen = self.constraint_bits(cons.iter().copied());
        let pools = s.pools.borrow();
        let Some(pool) = pools.get(&rest) else {
            return Vec::new();
        };
        pool.witnesses
            .iter()
            .rev()
            .take(scan)
            .filter(|(v, _)| disjoint(v, &chosen))
            .take(limit)
            .map(|(_, w)| w.clone())
            .collect()
    }

    /// Usable space constraints with an instance whose body holds in `m`.
    fn violated_constraints(&self, ctx: &Context, m: &Interpretation) -> Vec<usize> {
        (0..self.num_rules())
            .filter(|&r| self.usable[r] && self.kinds[r] == RuleKind::Constraint)
            .filter(|&r| {
                ctx.instances[r].iter().any(|&g| {
                    let b = ctx.gp.rules[g].body();
                    b.pos.iter().all(|&a| m.contains(a)) && b.neg.iter().all(|&a| !m.contains(a))
                })
            })
            .collect()
    }

    /// Accepting answer sets of one side of an ordering cluster under the
    /// non-weak part of `p`.
    pub fn answer_table(
        &self,
        cluster: usize,
        side: usize,
        p: &[usize],
    ) -> Result<Rc<AnswerTable>> {
        let s = &self.clusters[cluster].sides[side];
        let ctx = &self.contexts[s.ctx];
        let key = self.solver_key(ctx, p);
        if let Some(hit) = s.table_cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let mut answers = Vec::new();
        let mut overflow = false;
        if let Some(assume) = &s.assume {
            self.solver(ctx, &key).enumerate(assume, |m| {
                if answers.len() >= MAX_ANSWER_SETS {
                    overflow = true;
                    return Flow::Stop;
                }
                answers.push(m);
                Flow::Continue
            });
        }
        if overflow {
            return Err(Error::LimitExceeded {
                what: "accepting answer set",
                limit: MAX_ANSWER_SETS,
            });
        }
        let mut keys: HashMap<(u32, u32), u32> = HashMap::new();
        let mut entry = |answer: u32, g: usize, rule: &GroundRule| -> Option<Entry> {
            let GroundRule::Weak { weight, level, .. } = rule else {
                return None;
            };
            if *weight == 0 {
                return None;
            }
            let next = keys.len() as u32;
            let key = *keys.entry((answer, ctx.weak_key[g])).or_insert(next);
            Some(Entry {
                answer,
                key,
                level: self.level_index(*level),
                weight: *weight,
            })
        };
        let holds = |m: &Interpretation, g: usize| {
            let b = ctx.gp.rules[g].body();
            b.pos.iter().all(|&a| m.contains(a)) && b.neg.iter().all(|&a| !m.contains(a))
        };
        let mut base = Vec::new();
        let mut by_rule: HashMap<usize, Vec<Entry>> = HashMap::new();
        for (a, m) in answers.iter().enumerate() {
            for &g in &ctx.fixed {
                if holds(m, g) {
                    base.extend(entry(a as u32, g, &ctx.gp.rules[g]));
                }
            }
            for r in 0..self.num_rules() {
                if self.kinds[r] != RuleKind::Weak || !self.usable[r] {
                    continue;
                }
                for &g in &ctx.instances[r] {
                    if holds(m, g) {
                        if let Some(e) = entry(a as u32, g, &ctx.gp.rules[g]) {
                            by_rule.entry(r).or_default().push(e);
                        }
                    }
                }
            }
        }
        let table = Rc::new(AnswerTable {
            answers: answers.len(),
            num_keys: keys.len(),
            base,
            by_rule,
        });
        let mut cache = s.table_cache.borrow_mut();
        if cache.len() >= MAX_TABLE {
            cache.clear();
        }
        cache.insert(key, table.clone());
        Ok(table)
    }

    /// Cost states of both sides of an ordering cluster under hypothesis `p`.
    pub fn ordering_states(
        &self,
        cluster: usize,
        p: &[usize],
    ) -> Result<[(Rc<AnswerTable>, CostState); 2]> {
        let mk = |side| -> Result<(Rc<AnswerTable>, CostState)> {
            let t = self.answer_table(cluster, side, p)?;
            let mut s = CostState::new(&t, self.levels.len());
            for &r in p.iter().filter(|&&r| self.kinds[r] == RuleKind::Weak) {
                s.add(&t, r);
            }
            Ok((t, s))
        };
        Ok([mk(0)?, mk(1)?])
    }

    /// Whether hypothesis `p` (sorted rule ids) covers the cluster.
    pub fn covers(&self, cluster: usize, p: &[usize]) -> Result<bool> {
        let c = &self.clusters[cluster];
        let key = c.project(p);
        if let Some(&v) = c.table.borrow().get(&key) {
            return Ok(v);
        }
        let verdict = match c.kind {
            ClusterKind::Pos => self.acceptance(cluster, 0, p).witness.is_some(),
            ClusterKind::Neg => self.acceptance(cluster, 0, p).witness.is_none(),
            kind => {
                let [(_, s1), (_, s2)] = self.ordering_states(cluster, p)?;
                ordering_holds(kind, &s1, &s2)
            }
        };
        let mut table = c.table.borrow_mut();
        if table.len() < MAX_TABLE {
            table.insert(key, verdict);
        }
        Ok(verdict)
    }

    /// Clusters not covered by `p`, in cluster order.
    pub fn uncovered(&self, p: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for c in 0..self.clusters.len() {
            if !self.covers(c, p)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Length plus the penalties of the uncovered clusters.
    pub fn score(&self, p: &[usize]) -> Result<Penalty> {
        let pen: Penalty = self
            .uncovered(p)?
            .into_iter()
            .map(|c| self.clusters[c].penalty)
            .sum();
        Ok(pen + self.length(p))
    }
}
