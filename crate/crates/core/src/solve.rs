//! Stable-model search over ground programs.
//!
//! The search is a DPLL-style backtracking over atoms (lowest unassigned id
//! first, `true` before `false`), interleaving four kinds of propagation until
//! fixpoint: forward/backward rule propagation, choice-rule cardinality
//! propagation, support (completion) propagation, and unfounded-set pruning.
//! A total assignment that survives propagation is a stable model.
//! Weak-constraint optimisation is branch-and-bound on lexicographic cost
//! vectors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::ground::{AtomId, GroundBody, GroundProgram, GroundRule};
use crate::syntax::Term;

/// A set of ground atoms, stored as sorted ids of a [`GroundProgram`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(Vec<AtomId>);

impl Interpretation {
    pub fn new(mut atoms: Vec<AtomId>) -> Self {
        atoms.sort_unstable();
        atoms.dedup();
        Interpretation(atoms)
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.0.binary_search(&atom).is_ok()
    }

    pub fn atoms(&self) -> &[AtomId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Atom texts in lexicographic order.
    pub fn names(&self, gp: &GroundProgram) -> Vec<String> {
        let mut names: Vec<String> = self.0.iter().map(|&a| gp.atom(a).to_string()).collect();
        names.sort();
        names
    }
}

impl FromIterator<AtomId> for Interpretation {
    fn from_iter<T: IntoIterator<Item = AtomId>>(iter: T) -> Self {
        Interpretation::new(iter.into_iter().collect())
    }
}

/// Total weight of violated weak constraints per priority level. Levels that
/// are absent have total zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CostVector(BTreeMap<i64, i64>);

impl CostVector {
    pub fn new() -> Self {
        CostVector::default()
    }

    pub fn add(&mut self, level: i64, weight: i64) {
        let e = self.0.entry(level).or_insert(0);
        *e += weight;
        if *e == 0 {
            self.0.remove(&level);
        }
    }

    pub fn get(&self, level: i64) -> i64 {
        self.0.get(&level).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Non-zero `(level, weight)` pairs, highest level first.
    pub fn levels(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().rev().map(|(&l, &w)| (l, w))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut c = CostVector::new();
        for (l, w) in pairs {
            c.add(l, w);
        }
        c
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels().map(|(l, w)| format!("@{l}:{w}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Outcome of comparing two cost vectors; `Lt` means the first is preferred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingVerdict {
    Lt,
    Eq,
    Gt,
}

impl OrderingVerdict {
    pub fn as_ordering(self) -> Ordering {
        match self {
            OrderingVerdict::Lt => Ordering::Less,
            OrderingVerdict::Eq => Ordering::Equal,
            OrderingVerdict::Gt => Ordering::Greater,
        }
    }
}

/// Lexicographic comparison, highest priority level first.
pub fn compare(a: &CostVector, b: &CostVector) -> OrderingVerdict {
    let levels: BTreeSet<i64> = a.0.keys().chain(b.0.keys()).copied().collect();
    for level in levels.into_iter().rev() {
        match a.get(level).cmp(&b.get(level)) {
            Ordering::Less => return OrderingVerdict::Lt,
            Ordering::Greater => return OrderingVerdict::Gt,
            Ordering::Equal => {}
        }
    }
    OrderingVerdict::Eq
}

fn body_holds(body: &GroundBody, interp: &Interpretation) -> bool {
    body.pos.iter().all(|&a| interp.contains(a)) && body.neg.iter().all(|&a| !interp.contains(a))
}

type WeakKey<'a> = (Vec<AtomId>, Vec<AtomId>, i64, i64, &'a [Term]);

fn weak_key<'a>(body: &GroundBody, weight: i64, level: i64, terms: &'a [Term]) -> WeakKey<'a> {
    let mut pos = body.pos.clone();
    let mut neg = body.neg.clone();
    pos.sort_unstable();
    pos.dedup();
    neg.sort_unstable();
    neg.dedup();
    (pos, neg, weight, level, terms)
}

/// Cost of an interpretation: per level, the sum over distinct ground weak
/// constraint instances (identified by body, weight, level and terms) whose
/// body holds.
pub fn cost(gp: &GroundProgram, interp: &Interpretation) -> CostVector {
    cost_filtered(gp, interp, |_| true)
}

pub fn cost_filtered(
    gp: &GroundProgram,
    interp: &Interpretation,
    enabled: impl Fn(usize) -> bool,
) -> CostVector {
    let mut seen = HashSet::new();
    let mut out = CostVector::new();
    for (i, rule) in gp.rules.iter().enumerate() {
        if let GroundRule::Weak {
            body,
            weight,
            level,
            terms,
        } = rule
        {
            if enabled(i)
                && body_holds(body, interp)
                && seen.insert(weak_key(body, *weight, *level, terms))
            {
                out.add(*level, *weight);
            }
        }
    }
    out
}

/// Checks stability directly: the interpretation satisfies every rule and is
/// the least model of its reduct.
pub fn is_answer_set(gp: &GroundProgram, interp: &Interpretation) -> bool {
    is_answer_set_filtered(gp, interp, |_| true)
}

pub fn is_answer_set_filtered(
    gp: &GroundProgram,
    interp: &Interpretation,
    enabled: impl Fn(usize) -> bool,
) -> bool {
    if interp.atoms().iter().any(|&a| a as usize >= gp.num_atoms()) {
        return false;
    }
    // model check
    for (i, rule) in gp.rules.iter().enumerate() {
        if !enabled(i) || !body_holds(rule.body(), interp) {
            continue;
        }
        let ok = match rule {
            GroundRule::Normal { head, .. } => interp.contains(*head),
            GroundRule::Choice {
                lower,
                upper,
                heads,
                ..
            } => {
                let n = heads.iter().filter(|&&h| interp.contains(h)).count() as u32;
                *lower <= n && n <= *upper
            }
            GroundRule::Constraint { .. } => false,
            GroundRule::Weak { .. } => true,
        };
        if !ok {
            return false;
        }
    }
    // least model of the reduct
    let mut reduct: Vec<(AtomId, &[AtomId])> = Vec::new();
    for (i, rule) in gp.rules.iter().enumerate() {
        if !enabled(i) {
            continue;
        }
        let body = rule.body();
        if body.neg.iter().any(|&a| interp.contains(a)) {
            continue;
        }
        match rule {
            GroundRule::Normal { head, .. } => reduct.push((*head, &body.pos)),
            GroundRule::Choice { heads, .. } => {
                for &h in heads.iter().filter(|&&h| interp.contains(h)) {
                    reduct.push((h, &body.pos));
                }
            }
            _ => {}
        }
    }
    let mut model: HashSet<AtomId> = HashSet::new();
    loop {
        let before = model.len();
        for (head, pos) in &reduct {
            if !model.contains(head) && pos.iter().all(|a| model.contains(a)) {
                model.insert(*head);
            }
        }
        if model.len() == before {
            break;
        }
    }
    model.len() == interp.len() && interp.atoms().iter().all(|a| model.contains(a))
}

const UNKNOWN: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

struct Body {
    pos: Vec<u32>,
    neg: Vec<u32>,
}

struct Choice {
    lower: u32,
    upper: u32,
    heads: Vec<u32>,
    body: u32,
}

struct Weak {
    body: u32,
    level: i64,
    weight: i64,
    key: u32,
}

/// Signals that the current partial assignment cannot be extended.
struct Conflict;

/// Search controller returned by enumeration callbacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// Compiled view of (a subset of the rules of) a ground program.
pub struct Solver {
    n: usize,
    bodies: Vec<Body>,
    normals: Vec<(u32, u32)>,
    choices: Vec<Choice>,
    constraints: Vec<u32>,
    weaks: Vec<Weak>,
    num_keys: usize,
    /// per atom: bodies of rules that may support it
    supports: Vec<Vec<u32>>,
    /// per body: atoms it may support
    body_heads: Vec<Vec<u32>>,
    /// per atom: bodies containing it positively
    pos_occ: Vec<Vec<u32>>,
    nonneg_weights: bool,
}

impl Solver {
    pub fn new(gp: &GroundProgram) -> Self {
        Solver::with_filter(gp, |_| true)
    }

    /// Compiles only the ground rules whose index satisfies `enabled`.
    pub fn with_filter(gp: &GroundProgram, enabled: impl Fn(usize) -> bool) -> Self {
        Solver::from_rules(gp, (0..gp.rules.len()).filter(|&i| enabled(i)))
    }

    /// Compiles the listed ground rules (indices into `gp.rules`).
    pub fn from_rules(gp: &GroundProgram, selected: impl IntoIterator<Item = usize>) -> Self {
        let n = gp.num_atoms();
        let mut body_ids: HashMap<(Vec<u32>, Vec<u32>), u32> = HashMap::new();
        let mut bodies: Vec<Body> = Vec::new();
        let mut intern = |b: &GroundBody| -> u32 {
            let mut pos = b.pos.clone();
            let mut neg = b.neg.clone();
            pos.sort_unstable();
            pos.dedup();
            neg.sort_unstable();
            neg.dedup();
            *body_ids
                .entry((pos.clone(), neg.clone()))
                .or_insert_with(|| {
                    bodies.push(Body { pos, neg });
                    (bodies.len() - 1) as u32
                })
        };
        let mut normals = Vec::new();
        let mut choices = Vec::new();
        let mut constraints = Vec::new();
        let mut weaks = Vec::new();
        let mut keys: HashMap<(u32, i64, i64, Vec<Term>), u32> = HashMap::new();
        for i in selected {
            match &gp.rules[i] {
                GroundRule::Normal { head, body } => normals.push((*head, intern(body))),
                GroundRule::Choice {
                    lower,
                    upper,
                    heads,
                    body,
                } => {
                    let mut heads = heads.clone();
                    heads.sort_unstable();
                    heads.dedup();
                    choices.push(Choice {
                        lower: *lower,
                        upper: *upper,
                        heads,
                        body: intern(body),
                    })
                }
                GroundRule::Constraint { body } => constraints.push(intern(body)),
                GroundRule::Weak {
                    body,
                    weight,
                    level,
                    terms,
                } => {
                    let b = intern(body);
                    let next = keys.len() as u32;
                    let key = *keys
                        .entry((b, *weight, *level, terms.clone()))
                        .or_insert(next);
                    weaks.push(Weak {
                        body: b,
                        level: *level,
                        weight: *weight,
                        key,
                    });
                }
            }
        }
        let mut supports = vec![Vec::new(); n];
        let mut body_heads = vec![Vec::new(); bodies.len()];
        for &(h, b) in &normals {
            supports[h as usize].push(b);
            body_heads[b as usize].push(h);
        }
        for c in &choices {
            for &h in &c.heads {
                supports[h as usize].push(c.body);
                body_heads[c.body as usize].push(h);
            }
        }
        for s in supports.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        for s in body_heads.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        let mut pos_occ = vec![Vec::new(); n];
        for (b, body) in bodies.iter().enumerate() {
            for &a in &body.pos {
                pos_occ[a as usize].push(b as u32);
            }
        }
        let nonneg_weights = weaks.iter().all(|w| w.weight >= 0);
        Solver {
            n,
            bodies,
            normals,
            choices,
            constraints,
            weaks,
            num_keys: keys.len(),
            supports,
            body_heads,
            pos_occ,
            nonneg_weights,
        }
    }

    fn body_value(&self, b: u32, v: &[i8]) -> i8 {
        let body = &self.bodies[b as usize];
        let mut all = true;
        for &a in &body.pos {
            match v[a as usize] {
                FALSE => return FALSE,
                UNKNOWN => all = false,
                _ => {}
            }
        }
        for &a in &body.neg {
            match v[a as usize] {
                TRUE => return FALSE,
                UNKNOWN => all = false,
                _ => {}
            }
        }
        if all {
            TRUE
        } else {
            UNKNOWN
        }
    }

    fn set(v: &mut [i8], atom: u32, value: i8, changed: &mut bool) -> Result<(), Conflict> {
        let cur = v[atom as usize];
        if cur == UNKNOWN {
            v[atom as usize] = value;
            *changed = true;
            Ok(())
        } else if cur == value {
            Ok(())
        } else {
            Err(Conflict)
        }
    }

    /// If the body has exactly one undecided literal and every other literal
    /// holds, falsifies that literal. A fully true body is a conflict.
    fn falsify_body(&self, b: u32, v: &mut [i8], changed: &mut bool) -> Result<(), Conflict> {
        let body = &self.bodies[b as usize];
        let mut open: Option<(u32, i8)> = None;
        for &a in &body.pos {
            match v[a as usize] {
                FALSE => return Ok(()),
                UNKNOWN => {
                    if open.is_some() {
                        return Ok(());
                    }
                    open = Some((a, FALSE));
                }
                _ => {}
            }
        }
        for &a in &body.neg {
            match v[a as usize] {
                TRUE => return Ok(()),
                UNKNOWN => {
                    if open.is_some() {
                        return Ok(());
                    }
                    open = Some((a, TRUE));
                }
                _ => {}
            }
        }
        match open {
            None => Err(Conflict),
            Some((a, val)) => Self::set(v, a, val, changed),
        }
    }

    fn make_body_true(&self, b: u32, v: &mut [i8], changed: &mut bool) -> Result<(), Conflict> {
        let body = &self.bodies[b as usize];
        for &a in &body.pos {
            Self::set(v, a, TRUE, changed)?;
        }
        for &a in &body.neg {
            Self::set(v, a, FALSE, changed)?;
        }
        Ok(())
    }

    fn propagate(&self, v: &mut [i8], bval: &mut Vec<i8>) -> Result<(), Conflict> {
        loop {
            let mut changed = false;
            bval.clear();
            bval.extend((0..self.bodies.len() as u32).map(|b| self.body_value(b, v)));

            for &(h, b) in &self.normals {
                match bval[b as usize] {
                    TRUE => Self::set(v, h, TRUE, &mut changed)?,
                    UNKNOWN if v[h as usize] == FALSE => self.falsify_body(b, v, &mut changed)?,
                    _ => {}
                }
            }
            for &b in &self.constraints {
                match bval[b as usize] {
                    TRUE => return Err(Conflict),
                    UNKNOWN => self.falsify_body(b, v, &mut changed)?,
                    _ => {}
                }
            }
            for c in &self.choices {
                let bv = bval[c.body as usize];
                if bv == FALSE {
                    continue;
                }
                let (mut t, mut u) = (0u32, 0u32);
                for &h in &c.heads {
                    match v[h as usize] {
                        TRUE => t += 1,
                        UNKNOWN => u += 1,
                        _ => {}
                    }
                }
                let violated = t > c.upper || t + u < c.lower;
                if bv == TRUE {
                    if violated {
                        return Err(Conflict);
                    }
                    if u > 0 && t == c.upper {
                        for &h in &c.heads {
                            if v[h as usize] == UNKNOWN {
                                Self::set(v, h, FALSE, &mut changed)?;
                            }
                        }
                    } else if u > 0 && t + u == c.lower {
                        for &h in &c.heads {
                            if v[h as usize] == UNKNOWN {
                                Self::set(v, h, TRUE, &mut changed)?;
                            }
                        }
                    }
                } else if violated {
                    self.falsify_body(c.body, v, &mut changed)?;
                }
            }
            for a in 0..self.n {
                if v[a] == FALSE {
                    continue;
                }
                let mut alive = self.supports[a]
                    .iter()
                    .filter(|&&b| bval[b as usize] != FALSE);
                match (alive.next(), alive.next()) {
                    (None, _) => Self::set(v, a as u32, FALSE, &mut changed)?,
                    (Some(&b), None) if v[a] == TRUE && bval[b as usize] == UNKNOWN => {
                        self.make_body_true(b, v, &mut changed)?
                    }
                    _ => {}
                }
            }
            if changed {
                continue;
            }
            self.propagate_unfounded(v, &mut changed)?;
            if !changed {
                return Ok(());
            }
        }
    }

    /// Falsifies every atom that cannot be derived from non-false bodies
    /// through a well-founded chain of supports.
    fn propagate_unfounded(&self, v: &mut [i8], changed: &mut bool) -> Result<(), Conflict> {
        let mut missing: Vec<u32> = Vec::with_capacity(self.bodies.len());
        let mut dead = vec![false; self.bodies.len()];
        let mut queue: Vec<u32> = Vec::new();
        for (b, body) in self.bodies.iter().enumerate() {
            dead[b] = body.pos.iter().any(|&a| v[a as usize] == FALSE)
                || body.neg.iter().any(|&a| v[a as usize] == TRUE);
            missing.push(body.pos.len() as u32);
            if !dead[b] && body.pos.is_empty() {
                queue.push(b as u32);
            }
        }
        let mut founded = vec![false; self.n];
        while let Some(b) = queue.pop() {
            for &h in &self.body_heads[b as usize] {
                if founded[h as usize] || v[h as usize] == FALSE {
                    continue;
                }
                founded[h as usize] = true;
                for &ob in &self.pos_occ[h as usize] {
                    missing[ob as usize] -= 1;
                    if missing[ob as usize] == 0 && !dead[ob as usize] {
                        queue.push(ob);
                    }
                }
            }
        }
        for a in 0..self.n {
            if !founded[a] && v[a] != FALSE {
                Self::set(v, a as u32, FALSE, changed)?;
            }
        }
        Ok(())
    }

    fn lower_bound(&self, v: &[i8], bval: &[i8]) -> CostVector {
        let mut seen = vec![false; self.num_keys];
        let mut out = CostVector::new();
        for w in &self.weaks {
            let value = if bval.is_empty() {
                self.body_value(w.body, v)
            } else {
                bval[w.body as usize]
            };
            if value == TRUE && !seen[w.key as usize] {
                seen[w.key as usize] = true;
                out.add(w.level, w.weight);
            }
        }
        out
    }

    fn interpretation(v: &[i8]) -> Interpretation {
        Interpretation(
            (0..v.len() as u32)
                .filter(|&a| v[a as usize] == TRUE)
                .collect(),
        )
    }

    /// Enumerates answer sets consistent with the assumptions, in the
    /// deterministic search order, until the callback returns [`Flow::Stop`].
    pub fn enumerate(
        &self,
        assumptions: &[(AtomId, bool)],
        mut on_model: impl FnMut(Interpretation) -> Flow,
    ) {
        let mut v = vec![UNKNOWN; self.n];
        for &(a, val) in assumptions {
            let want = if val { TRUE } else { FALSE };
            if v[a as usize] != UNKNOWN && v[a as usize] != want {
                return;
            }
            v[a as usize] = want;
        }
        let mut bval = Vec::new();
        self.search(
            v,
            &mut bval,
            &mut |v: &[i8], _: &[i8]| on_model(Self::interpretation(v)),
            &mut |_, _| false,
        );
    }

    /// Core DFS. `prune` is consulted after each successful propagation.
    fn search(
        &self,
        mut v: Vec<i8>,
        bval: &mut Vec<i8>,
        on_model: &mut dyn FnMut(&[i8], &[i8]) -> Flow,
        prune: &mut dyn FnMut(&[i8], &[i8]) -> bool,
    ) -> Flow {
        if self.propagate(&mut v, bval).is_err() {
            return Flow::Continue;
        }
        if prune(&v, bval) {
            return Flow::Continue;
        }
        match v.iter().position(|&x| x == UNKNOWN) {
            None => on_model(&v, bval),
            Some(a) => {
                let mut left = v.clone();
                left[a] = TRUE;
                if self.search(left, bval, on_model, prune) == Flow::Stop {
                    return Flow::Stop;
                }
                v[a] = FALSE;
                self.search(v, bval, on_model, prune)
            }
        }
    }

    pub fn answer_sets(&self, limit: Option<usize>) -> Vec<Interpretation> {
        let mut out = Vec::new();
        self.enumerate(&[], |m| {
            out.push(m);
            if limit.is_some_and(|l| out.len() >= l) {
                Flow::Stop
            } else {
                Flow::Continue
            }
        });
        out
    }

    pub fn is_satisfiable(&self, assumptions: &[(AtomId, bool)]) -> bool {
        let mut found = false;
        self.enumerate(assumptions, |_| {
            found = true;
            Flow::Stop
        });
        found
    }

    /// Answer sets with lexicographically minimal cost, plus that cost.
    pub fn optimal_answer_sets(
        &self,
        assumptions: &[(AtomId, bool)],
    ) -> (Vec<Interpretation>, Option<CostVector>) {
        let mut v = vec![UNKNOWN; self.n];
        for &(a, val) in assumptions {
            let want = if val { TRUE } else { FALSE };
            if v[a as usize] != UNKNOWN && v[a as usize] != want {
                return (Vec::new(), None);
            }
            v[a as usize] = want;
        }
        let best: std::cell::RefCell<Option<CostVector>> = std::cell::RefCell::new(None);
        let mut found: Vec<Interpretation> = Vec::new();
        let mut bval = Vec::new();
        let can_bound = self.nonneg_weights;
        self.search(
            v,
            &mut bval,
            &mut |v: &[i8], bv: &[i8]| {
                let c = self.lower_bound(v, bv);
                let mut best = best.borrow_mut();
                match best.as_ref().map(|b| compare(&c, b)) {
                    None | Some(OrderingVerdict::Lt) => {
                        *best = Some(c);
                        found.clear();
                        found.push(Self::interpretation(v));
                    }
                    Some(OrderingVerdict::Eq) => found.push(Self::interpretation(v)),
                    Some(OrderingVerdict::Gt) => {}
                }
                Flow::Continue
            },
            &mut |v: &[i8], bv: &[i8]| {
                if !can_bound {
                    return false;
                }
                match best.borrow().as_ref() {
                    Some(b) => compare(&self.lower_bound(v, bv), b) == OrderingVerdict::Gt,
                    None => false,
                }
            },
        );
        let best = best.into_inner();
        (found, best)
    }
}

/// All answer sets (or the first `limit`), in deterministic search order.
pub fn answer_sets(gp: &GroundProgram, limit: Option<usize>) -> Vec<Interpretation> {
    Solver::new(gp).answer_sets(limit)
}

/// The answer sets whose cost vector is minimal.
pub fn optimal_answer_sets(gp: &GroundProgram) -> Vec<Interpretation> {
    Solver::new(gp).optimal_answer_sets(&[]).0
}

/// One line per model: atoms in lexicographic order, then the cost vector as
/// `@level:weight` pairs for every level used by the program, highest first.
pub fn format_model(gp: &GroundProgram, model: &Interpretation) -> String {
    let mut line = model.names(gp).join(" ");
    let levels: BTreeSet<i64> = gp
        .rules
        .iter()
        .filter_map(|r| match r {
            GroundRule::Weak { level, .. } => Some(*level),
            _ => None,
        })
        .collect();
    if !levels.is_empty() {
        let c = cost(gp, model);
        for l in levels.into_iter().rev() {
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(&format!("@{l}:{}", c.get(l)));
        }
    }
    line
}
