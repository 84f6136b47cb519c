//! Branch and bound over rule subsets.
//!
//! Subsets are visited depth first, children adding a rule with a larger id
//! than any rule already present. The visiting order is then the
//! lexicographic order of sorted id vectors, so the first hypothesis reaching
//! a score is the lexicographically smallest one with that score.
//!
//! A node's lower bound counts its length plus the penalty of every
//! relevant cluster that no extension can cover any more. That happens when
//! no remaining rule has an instance in the cluster's contexts, when only
//! constraints and weak constraints remain (positive examples are then lost
//! for good, and negative ones need a constraint violated by a known
//! accepting answer set), and when the weak constraints left cannot move a
//! deterministic ordering example to the required side.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use super::engine::{ordering_holds, AnswerTable, ClusterKind, CostState, Engine};
use crate::error::Result;
use crate::syntax::{CmpOp, RuleKind};
use crate::task::Penalty;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Limits {
    pub deadline: Option<Instant>,
    pub max_nodes: Option<u64>,
}

/// Static facts about the space shared by every proposal round.
pub(crate) struct Layout {
    /// Usable rules, ascending.
    pub order: Vec<usize>,
    /// `n_after[i]`: some usable normal or choice rule has id `>= i`.
    n_after: Vec<bool>,
    /// `nonweak_after[i]`: some usable non-weak rule has id `>= i`.
    nonweak_after: Vec<bool>,
    /// Usable weak rules, ascending.
    weak: Vec<usize>,
    pred_heads: Vec<Vec<u32>>,
    pred_pos: Vec<Vec<u32>>,
    pred_neg: Vec<Vec<u32>>,
    base_defined: Vec<bool>,
    base_used: Vec<bool>,
    /// Largest usable rule id defining each predicate.
    last_definer: Vec<Option<usize>>,
    /// Largest usable rule id mentioning each predicate anywhere.
    last_mention: Vec<Option<usize>>,
    /// Per cluster, per position in its relevant rules: the shortest
    /// relevant rule from that position on.
    min_len_from: Vec<Vec<u64>>,
}

impl Layout {
    pub fn new(engine: &Engine) -> Self {
        let n = engine.num_rules();
        let order: Vec<usize> = (0..n).filter(|&r| engine.usable[r]).collect();
        let mut n_after = vec![false; n + 1];
        let mut nonweak_after = vec![false; n + 1];
        for r in (0..n).rev() {
            let usable = engine.usable[r];
            n_after[r] = n_after[r + 1]
                || (usable && matches!(engine.kinds[r], RuleKind::Normal | RuleKind::Choice));
            nonweak_after[r] =
                nonweak_after[r + 1] || (usable && engine.kinds[r] != RuleKind::Weak);
        }
        let weak = order
            .iter()
            .copied()
            .filter(|&r| engine.kinds[r] == RuleKind::Weak)
            .collect();

        let names = engine.base_defined.iter().chain(&engine.base_used);
        let mut all: Vec<&str> = names
            .map(|s| &**s)
            .chain(
                engine
                    .heads
                    .iter()
                    .chain(&engine.pos_body)
                    .chain(&engine.neg_body)
                    .flatten()
                    .map(|s| &**s),
            )
            .collect();
        all.sort_unstable();
        all.dedup();
        let ids: HashMap<&str, u32> = all
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();
        let map = |v: &Vec<crate::syntax::Name>| v.iter().map(|s| ids[&**s]).collect::<Vec<u32>>();
        let pred_heads: Vec<Vec<u32>> = engine.heads.iter().map(map).collect();
        let pred_pos: Vec<Vec<u32>> = engine.pos_body.iter().map(map).collect();
        let pred_neg: Vec<Vec<u32>> = engine.neg_body.iter().map(map).collect();
        let np = ids.len();
        let mut base_defined = vec![false; np];
        let mut base_used = vec![false; np];
        for s in &engine.base_defined {
            base_defined[ids[&**s] as usize] = true;
        }
        for s in &engine.base_used {
            base_used[ids[&**s] as usize] = true;
        }
        let mut last_definer = vec![None; np];
        let mut last_mention = vec![None; np];
        for &r in &order {
            for &h in &pred_heads[r] {
                last_definer[h as usize] = Some(r);
            }
            for &q in pred_heads[r].iter().chain(&pred_pos[r]).chain(&pred_neg[r]) {
                last_mention[q as usize] = Some(r);
            }
        }
        let min_len_from = engine
            .clusters
            .iter()
            .map(|cl| {
                let mut v = vec![u64::MAX; cl.relevant.len() + 1];
                for i in (0..cl.relevant.len()).rev() {
                    v[i] = v[i + 1].min(engine.lengths[cl.relevant[i]]);
                }
                v
            })
            .collect();
        Layout {
            min_len_from,
            order,
            n_after,
            nonweak_after,
            weak,
            pred_heads,
            pred_pos,
            pred_neg,
            base_defined,
            base_used,
            last_definer,
            last_mention,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reduction {
    /// Not reducible.
    None,
    /// Dominated by a proper subset, but an extension may not be.
    Skip,
    /// Every extension is dominated too.
    Prune,
}

/// Result of one proposal round.
pub(crate) struct Proposal {
    pub hypothesis: Vec<usize>,
    pub score: Penalty,
    /// The search finished, so `hypothesis` is the lexicographically first
    /// optimum over the relevant clusters.
    pub complete: bool,
    pub nodes: u64,
}

struct Eval {
    score: Penalty,
    /// Penalty no hypothesis in the subtree can avoid.
    perm: Penalty,
    /// Lower bound on the score of every hypothesis in the subtree.
    lb: Penalty,
    /// Some relevant negative cluster is uncovered.
    neg_open: bool,
    /// Once only constraints can follow: the saveable penalty of each open
    /// negative with the constraints each known answer set still allows.
    needs: Vec<Need>,
}

type Need = (Penalty, Vec<Vec<usize>>);

/// Incremental state for subtrees that may only add weak constraints.
struct WeakFrame {
    /// Penalty of uncovered non-ordering clusters, fixed in the subtree.
    fixed: Penalty,
    orderings: Vec<WeakCluster>,
    /// Per weak rule id: cannot change any relevant ordering.
    useless: HashMap<usize, bool>,
    /// Per weak rule id: smaller ids with the same effect and no larger length.
    dominators: HashMap<usize, Vec<usize>>,
}

struct WeakCluster {
    kind: ClusterKind,
    penalty: Penalty,
    max_relevant: Option<usize>,
    tables: [Rc<AnswerTable>; 2],
    states: [CostState; 2],
    /// Suffix sums over `Layout::weak` of the smallest and largest change
    /// each rule can make to the first cost minus the second, per level.
    /// Only present when both sides have exactly one answer set.
    bounds: Option<(Vec<Vec<i64>>, Vec<Vec<i64>>)>,
}

/// `u - m` for `m <= u` with `m` finite.
fn excess(u: Penalty, m: Penalty) -> Penalty {
    match (u, m) {
        (Penalty::Finite(a), Penalty::Finite(b)) => Penalty::Finite(a - b),
        _ => Penalty::Infinite,
    }
}

/// Known answer sets consulted per negative cluster when bounding.
const WITNESS_LIMIT: usize = 8;
const WITNESS_SCAN: usize = 64;

pub(crate) struct Proposer<'a> {
    engine: &'a Engine,
    layout: &'a Layout,
    relevant: Vec<usize>,
    in_relevant: Vec<bool>,
    has_ordering: bool,
    best: Vec<usize>,
    best_score: Penalty,
    floor: Penalty,
    limits: Limits,
    nodes: u64,
    aborted: bool,
    finished: bool,
}

fn can_be_negative(lo: &[i64]) -> bool {
    for &l in lo {
        if l < 0 {
            return true;
        }
        if l > 0 {
            return false;
        }
    }
    false
}

fn can_be_positive(hi: &[i64]) -> bool {
    for &h in hi {
        if h > 0 {
            return true;
        }
        if h < 0 {
            return false;
        }
    }
    false
}

/// Whether a difference vector ranging over `[lo, hi]` per level (highest
/// first) may compare to zero as `op` requires. May answer yes wrongly, never
/// no wrongly.
fn achievable(op: CmpOp, lo: &[i64], hi: &[i64]) -> bool {
    let neg = can_be_negative(lo);
    let pos = can_be_positive(hi);
    let zero = lo.iter().zip(hi).all(|(&l, &h)| l <= 0 && 0 <= h);
    match op {
        CmpOp::Lt => neg,
        CmpOp::Gt => pos,
        CmpOp::Le => neg || zero,
        CmpOp::Ge => pos || zero,
        CmpOp::Eq => zero,
        CmpOp::Ne => neg || pos,
    }
}

impl<'a> Proposer<'a> {
    pub fn new(
        engine: &'a Engine,
        layout: &'a Layout,
        relevant: Vec<usize>,
        seed: Option<(Vec<usize>, Penalty)>,
        floor: Penalty,
        limits: Limits,
    ) -> Self {
        let has_ordering = relevant
            .iter()
            .any(|&c| engine.clusters[c].kind.is_ordering());
        let mut in_relevant = vec![false; engine.clusters.len()];
        for &c in &relevant {
            in_relevant[c] = true;
        }
        let (best, best_score) = seed.unwrap_or((Vec::new(), Penalty::Infinite));
        Proposer {
            engine,
            layout,
            relevant,
            in_relevant,
            has_ordering,
            best,
            best_score,
            floor,
            limits,
            nodes: 0,
            aborted: false,
            finished: false,
        }
    }

    /// Runs the search and returns the best hypothesis found.
    pub fn run(mut self) -> Result<Proposal> {
        let mut p = Vec::new();
        let ev = self.evaluate(&p, 0)?;
        self.offer(&p, ev.score);
        if !self.finished && !self.prunable(ev.lb, &p) {
            self.expand(&mut p, 0, ev.perm, ev.neg_open, &ev.needs)?;
        }
        Ok(Proposal {
            hypothesis: self.best,
            score: self.best_score,
            complete: !self.aborted,
            nodes: self.nodes,
        })
    }

    fn stopped(&self) -> bool {
        self.aborted || self.finished
    }

    fn tick(&mut self) {
        self.nodes += 1;
        if self.limits.max_nodes.is_some_and(|m| self.nodes > m) {
            self.aborted = true;
        }
        if self.nodes.is_multiple_of(256) && self.limits.deadline.is_some_and(|d| Instant::now() >= d) {
            self.aborted = true;
        }
    }

    fn offer(&mut self, p: &[usize], score: Penalty) {
        if score < self.best_score || (score == self.best_score && p < self.best.as_slice()) {
            self.best = p.to_vec();
            self.best_score = score;
        }
        if score <= self.floor && self.best.as_slice() == p {
            self.finished = true;
        }
    }

    fn prunable(&self, lb: Penalty, p: &[usize]) -> bool {
        lb > self.best_score || (lb == self.best_score && p >= self.best.as_slice())
    }

    fn next_id(p: &[usize]) -> usize {
        p.last().map_or(0, |&m| m + 1)
    }

    fn evaluate(&self, p: &[usize], len: u64) -> Result<Eval> {
        let e = self.engine;
        let next = Self::next_id(p);
        let more_n = self.layout.n_after[next];
        let mut pen = Penalty::ZERO;
        let mut perm = Penalty::ZERO;
        // Clusters that need at least one more rule to be covered.
        let mut open_pen = Penalty::ZERO;
        let mut open_len = u64::MAX;
        // Uncovered negatives once only constraints can follow, with the
        // constraints each of their known answer sets leaves available.
        let mut needs: Vec<Need> = Vec::new();
        let mut neg_open = false;
        for &c in &self.relevant {
            if e.covers(c, p)? {
                continue;
            }
            let cl = &e.clusters[c];
            pen = pen + cl.penalty;
            // Of a relevant twin pair one side is always paid, so only the
            // excess over the cheaper side can still be saved.
            let (always, saveable) = match cl.twin.filter(|t| self.in_relevant[*t]) {
                Some(t) => {
                    let m = cl.penalty.min(e.clusters[t].penalty);
                    (m, excess(cl.penalty, m))
                }
                None => (Penalty::ZERO, cl.penalty),
            };
            if cl.kind == ClusterKind::Neg {
                neg_open = true;
            }
            let from = cl.relevant.partition_point(|&r| r < next);
            if from == cl.relevant.len() {
                perm = perm + cl.penalty;
                continue;
            }
            if !more_n {
                match cl.kind {
                    ClusterKind::Pos => {
                        perm = perm + cl.penalty;
                        continue;
                    }
                    ClusterKind::Neg => {
                        let mut sets = Vec::new();
                        let mut stuck = false;
                        let mut witnesses = e.live_witnesses(c, 0, p, WITNESS_SCAN, WITNESS_LIMIT);
                        if witnesses.is_empty() {
                            witnesses.push(e.acceptance(c, 0, p));
                        }
                        for w in witnesses {
                            let rest: Vec<usize> =
                                w.violated.iter().copied().filter(|&r| r >= next).collect();
                            if rest.is_empty() {
                                stuck = true;
                                break;
                            }
                            sets.push(rest);
                        }
                        if stuck {
                            perm = perm + cl.penalty;
                            continue;
                        }
                        if saveable > Penalty::ZERO {
                            needs.push((saveable, sets));
                        }
                    }
                    _ => {}
                }
            }
            perm = perm + always;
            if saveable > Penalty::ZERO {
                open_pen = open_pen + saveable;
                open_len = open_len.min(self.layout.min_len_from[c][from]);
            }
        }
        let one_more = if open_pen == Penalty::ZERO {
            Penalty::ZERO
        } else {
            open_pen.min(Penalty::Finite(open_len))
        };
        let extra = one_more.max(self.packing_bound(&needs));
        Ok(Eval {
            score: pen + len,
            perm,
            lb: perm + extra + len,
            neg_open,
            needs,
        })
    }

    /// Lower bound on the cost of handling the negatives in `needs`: each
    /// either pays its penalty or gets a constraint from every one of its
    /// sets. Sets chosen pairwise disjoint need distinct constraints.
    fn packing_bound(&self, needs: &[Need]) -> Penalty {
        if needs.is_empty() {
            return Penalty::ZERO;
        }
        let mut all: Vec<(usize, &Vec<usize>)> = needs
            .iter()
            .enumerate()
            .flat_map(|(i, (_, sets))| sets.iter().map(move |s| (i, s)))
            .collect();
        all.sort_by_key(|(i, s)| (s.len(), *i));
        let mut used: Vec<usize> = Vec::new();
        let mut cost = vec![0u64; needs.len()];
        for (i, s) in all {
            if s.iter().any(|r| used.binary_search(r).is_ok()) {
                continue;
            }
            for &r in s {
                let at = used.partition_point(|&u| u < r);
                used.insert(at, r);
            }
            cost[i] += s.iter().map(|&r| self.engine.lengths[r]).min().unwrap_or(0);
        }
        needs
            .iter()
            .zip(cost)
            .map(|((pen, _), c)| (*pen).min(Penalty::Finite(c)))
            .sum()
    }

    /// Whether `p` is dominated by one of its proper subsets, and whether
    /// that holds for every extension too.
    fn reduction(&self, p: &[usize]) -> Reduction {
        let l = self.layout;
        let next = Self::next_id(p);
        let mut defined = l.base_defined.clone();
        for &r in p {
            for &h in &l.pred_heads[r] {
                defined[h as usize] = true;
            }
        }
        let mut verdict = Reduction::None;
        for &r in p {
            for &q in &l.pred_pos[r] {
                if !defined[q as usize] {
                    if l.last_definer[q as usize].is_none_or(|d| d < next) {
                        return Reduction::Prune;
                    }
                    verdict = Reduction::Skip;
                }
            }
        }
        let mut used = l.base_used.clone();
        let mark = |used: &mut Vec<bool>, r: usize| {
            for &q in l.pred_pos[r].iter().chain(&l.pred_neg[r]) {
                used[q as usize] = true;
            }
        };
        let defines =
            |r: usize| matches!(self.engine.kinds[r], RuleKind::Normal | RuleKind::Choice);
        for &r in p {
            if !defines(r) {
                mark(&mut used, r);
            }
        }
        let mut done = vec![false; p.len()];
        loop {
            let mut changed = false;
            for (i, &r) in p.iter().enumerate() {
                if !done[i] && defines(r) && l.pred_heads[r].iter().any(|&h| used[h as usize]) {
                    done[i] = true;
                    mark(&mut used, r);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let idle: Vec<usize> = p
            .iter()
            .enumerate()
            .filter(|&(i, &r)| defines(r) && !done[i])
            .map(|(_, &r)| r)
            .collect();
        if idle.is_empty() {
            return verdict;
        }
        let in_idle = |q: u32| idle.iter().any(|&r| l.pred_heads[r].contains(&q));
        let stratified = idle
            .iter()
            .all(|&r| l.pred_neg[r].iter().all(|&q| !in_idle(q)));
        if !stratified {
            return verdict;
        }
        let untouched = idle
            .iter()
            .flat_map(|&r| l.pred_heads[r].iter())
            .all(|&q| l.last_mention[q as usize].is_none_or(|m| m < next));
        if untouched {
            Reduction::Prune
        } else {
            Reduction::Skip
        }
    }

    /// Bound for the child of a constraint-phase node that adds rule `j`,
    /// from the parent's answer sets alone. An answer set that does not
    /// violate `j` survives in the child.
    fn child_bound(&self, needs: &[Need], j: usize) -> Penalty {
        let mut fixed = Penalty::ZERO;
        let mut left = Vec::new();
        for (pen, sets) in needs {
            if sets.iter().any(|s| s.binary_search(&j).is_ok()) {
                continue;
            }
            let rest: Vec<Vec<usize>> = sets
                .iter()
                .map(|s| s[s.partition_point(|&r| r <= j)..].to_vec())
                .collect();
            if rest.iter().any(Vec::is_empty) {
                fixed = fixed + *pen;
            } else {
                left.push((*pen, rest));
            }
        }
        fixed + self.packing_bound(&left)
    }

    fn expand(
        &mut self,
        p: &mut Vec<usize>,
        len: u64,
        perm: Penalty,
        neg_open: bool,
        needs: &[Need],
    ) -> Result<()> {
        let next = Self::next_id(p);
        let layout = self.layout;
        if !layout.nonweak_after[next] {
            if self.has_ordering {
                self.expand_weak_root(p, len)?;
            }
            return Ok(());
        }
        let start = layout.order.partition_point(|&r| r < next);
        for &j in &layout.order[start..] {
            if self.stopped() {
                return Ok(());
            }
            let kind = self.engine.kinds[j];
            if kind == RuleKind::Weak && !self.has_ordering {
                continue;
            }
            if kind == RuleKind::Constraint
                && !layout.n_after[next]
                && !neg_open
                && !self.has_ordering
            {
                continue;
            }
            let l = len + self.engine.lengths[j];
            p.push(j);
            if self.prunable(perm + l, p)
                || (!needs.is_empty() && self.prunable(perm + l + self.child_bound(needs, j), p))
            {
                p.pop();
                continue;
            }
            self.tick();
            match self.reduction(p) {
                Reduction::Prune => {}
                Reduction::Skip => self.expand(p, l, perm, true, &[])?,
                Reduction::None => {
                    let ev = self.evaluate(p, l)?;
                    self.offer(p, ev.score);
                    if !self.stopped() && !self.prunable(ev.lb, p) {
                        self.expand(p, l, ev.perm, ev.neg_open, &ev.needs)?;
                    }
                }
            }
            p.pop();
        }
        Ok(())
    }

    /// Expands a node whose extensions only add weak constraints.
    fn expand_weak_root(&mut self, p: &mut Vec<usize>, len: u64) -> Result<()> {
        let e = self.engine;
        let mut fixed = Penalty::ZERO;
        let mut orderings = Vec::new();
        for &c in &self.relevant {
            let cl = &e.clusters[c];
            if !cl.kind.is_ordering() {
                if !e.covers(c, p)? {
                    fixed = fixed + cl.penalty;
                }
                continue;
            }
            let [(t1, s1), (t2, s2)] = e.ordering_states(c, p)?;
            let bounds = (t1.answers == 1 && t2.answers == 1).then(|| self.suffix_bounds(&t1, &t2));
            orderings.push(WeakCluster {
                kind: cl.kind,
                penalty: cl.penalty,
                max_relevant: cl.max_relevant(),
                tables: [t1, t2],
                states: [s1, s2],
                bounds,
            });
        }
        let (useless, dominators) = self.weak_equivalences(&orderings);
        let mut frame = WeakFrame {
            fixed,
            orderings,
            useless,
            dominators,
        };
        let perm = self.weak_eval(&frame, Self::next_id(p), len).1;
        self.expand_weak(p, len, perm, &mut frame)
    }

    fn suffix_bounds(
        &self,
        first: &AnswerTable,
        second: &AnswerTable,
    ) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let levels = self.engine.levels.len();
        let w = &self.layout.weak;
        let mut lo = vec![vec![0i64; levels]; w.len() + 1];
        let mut hi = vec![vec![0i64; levels]; w.len() + 1];
        for k in (0..w.len()).rev() {
            let mut dlo = vec![0i64; levels];
            let mut dhi = vec![0i64; levels];
            for e in first.entries(w[k]) {
                let slot = e.level as usize;
                if e.weight > 0 {
                    dhi[slot] += e.weight;
                } else {
                    dlo[slot] += e.weight;
                }
            }
            for e in second.entries(w[k]) {
                let slot = e.level as usize;
                if e.weight > 0 {
                    dlo[slot] -= e.weight;
                } else {
                    dhi[slot] -= e.weight;
                }
            }
            for s in 0..levels {
                lo[k][s] = lo[k + 1][s] + dlo[s];
                hi[k][s] = hi[k + 1][s] + dhi[s];
            }
        }
        (lo, hi)
    }

    /// Weak rules that change nothing on the relevant orderings, and weak
    /// rules whose effect equals that of a smaller rule of no larger length.
    #[allow(clippy::type_complexity)]
    fn weak_equivalences(
        &self,
        orderings: &[WeakCluster],
    ) -> (HashMap<usize, bool>, HashMap<usize, Vec<usize>>) {
        let weak = &self.layout.weak;
        let mut sharing: Vec<[HashMap<u32, u32>; 2]> = Vec::with_capacity(orderings.len());
        for oc in orderings {
            let mut maps = [HashMap::new(), HashMap::new()];
            for s in 0..2 {
                let t = &oc.tables[s];
                for e in &t.base {
                    *maps[s].entry(e.key).or_insert(0) += 1;
                }
                for &r in weak {
                    let mut keys: Vec<u32> = t.entries(r).iter().map(|e| e.key).collect();
                    keys.sort_unstable();
                    keys.dedup();
                    for k in keys {
                        *maps[s].entry(k).or_insert(0) += 1;
                    }
                }
            }
            sharing.push(maps);
        }
        let mut useless = HashMap::new();
        let mut groups: HashMap<(bool, Vec<(usize, usize, u32, u32, u32, i64)>), Vec<usize>> =
            HashMap::new();
        let mut dominators = HashMap::new();
        for &r in weak {
            let mut isolated = true;
            let mut exact = Vec::new();
            let mut sums: HashMap<(usize, usize, u32, u32), i64> = HashMap::new();
            for (ci, oc) in orderings.iter().enumerate() {
                for s in 0..2 {
                    let base_keys: std::collections::HashSet<u32> =
                        oc.tables[s].base.iter().map(|e| e.key).collect();
                    for e in oc.tables[s].entries(r) {
                        if base_keys.contains(&e.key) {
                            continue;
                        }
                        if sharing[ci][s][&e.key] > 1 {
                            isolated = false;
                        }
                        exact.push((ci, s, e.key, e.answer, e.level, e.weight));
                        *sums.entry((ci, s, e.answer, e.level)).or_insert(0) += e.weight;
                    }
                }
            }
            let signature: Vec<(usize, usize, u32, u32, u32, i64)> = if isolated {
                let mut v: Vec<_> = sums
                    .into_iter()
                    .filter(|&(_, w)| w != 0)
                    .map(|((c, s, a, l), w)| (c, s, 0, a, l, w))
                    .collect();
                v.sort_unstable();
                v
            } else {
                exact.sort_unstable();
                exact.dedup();
                exact
            };
            useless.insert(r, isolated && signature.is_empty());
            let group = groups.entry((isolated, signature)).or_default();
            let len = self.engine.lengths[r];
            let doms: Vec<usize> = group
                .iter()
                .copied()
                .filter(|&d| self.engine.lengths[d] <= len)
                .collect();
            dominators.insert(r, doms);
            group.push(r);
        }
        (useless, dominators)
    }

    /// Score and permanent penalty of the current weak frame.
    fn weak_eval(&self, frame: &WeakFrame, next: usize, len: u64) -> (Penalty, Penalty) {
        let mut pen = frame.fixed;
        let mut perm = frame.fixed;
        let rank = self.layout.weak.partition_point(|&r| r < next);
        for oc in &frame.orderings {
            if ordering_holds(oc.kind, &oc.states[0], &oc.states[1]) {
                continue;
            }
            pen = pen + oc.penalty;
            let stuck = if oc.max_relevant.is_none_or(|m| m < next) {
                true
            } else if oc.states[0].answers() == 0 || oc.states[1].answers() == 0 {
                matches!(oc.kind, ClusterKind::Brave(_))
            } else if let (Some((lo, hi)), ClusterKind::Brave(op) | ClusterKind::Cautious(op)) =
                (&oc.bounds, oc.kind)
            {
                let c1 = oc.states[0].cost(0);
                let c2 = oc.states[1].cost(0);
                let d: Vec<i64> = c1.iter().zip(c2).map(|(a, b)| a - b).collect();
                let l: Vec<i64> = d.iter().zip(&lo[rank]).map(|(a, b)| a + b).collect();
                let h: Vec<i64> = d.iter().zip(&hi[rank]).map(|(a, b)| a + b).collect();
                !achievable(op, &l, &h)
            } else {
                false
            };
            if stuck {
                perm = perm + oc.penalty;
            }
        }
        (pen + len, perm)
    }

    fn expand_weak(
        &mut self,
        p: &mut Vec<usize>,
        len: u64,
        perm: Penalty,
        frame: &mut WeakFrame,
    ) -> Result<()> {
        let next = Self::next_id(p);
        let layout = self.layout;
        let start = layout.weak.partition_point(|&r| r < next);
        for &j in &layout.weak[start..] {
            if self.stopped() {
                return Ok(());
            }
            if frame.useless[&j]
                || frame.dominators[&j]
                    .iter()
                    .any(|d| p.binary_search(d).is_err())
            {
                continue;
            }
            let l = len + self.engine.lengths[j];
            p.push(j);
            if self.prunable(perm + l, p) {
                p.pop();
                continue;
            }
            self.tick();
            for oc in frame.orderings.iter_mut() {
                for s in 0..2 {
                    oc.states[s].add(&oc.tables[s], j);
                }
            }
            let (score, child_perm) = self.weak_eval(frame, j + 1, l);
            self.offer(p, score);
            if !self.stopped() && !self.prunable(child_perm + l, p) {
                self.expand_weak(p, l, child_perm, frame)?;
            }
            for oc in frame.orderings.iter_mut() {
                for s in 0..2 {
                    oc.states[s].remove(&oc.tables[s], j);
                }
            }
            p.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_feasibility() {
        assert!(achievable(CmpOp::Lt, &[0, -1], &[0, 0]));
        assert!(!achievable(CmpOp::Lt, &[1, -5], &[2, 0]));
        assert!(!achievable(CmpOp::Lt, &[0, 0], &[3, 3]));
        assert!(achievable(CmpOp::Eq, &[-1, 0], &[1, 0]));
        assert!(!achievable(CmpOp::Eq, &[1, 0], &[1, 0]));
        assert!(achievable(CmpOp::Ne, &[0, 0], &[0, 1]));
        assert!(!achievable(CmpOp::Ne, &[0, 0], &[0, 0]));
        assert!(achievable(CmpOp::Ge, &[0, 0], &[0, 0]));
    }
}
