//! Random propositional programs and a brute-force reference semantics that
//! works on its own rule representation, independent of the grounder and
//! solver.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

#[derive(Clone, Debug)]
pub struct Body {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum RefRule {
    Normal {
        head: usize,
        body: Body,
    },
    Choice {
        lower: usize,
        upper: usize,
        heads: Vec<usize>,
        body: Body,
    },
    Constraint {
        body: Body,
    },
    Weak {
        body: Body,
        weight: i64,
        level: i64,
        tag: usize,
    },
}

#[derive(Clone, Debug)]
pub struct RefProgram {
    pub atoms: usize,
    pub rules: Vec<RefRule>,
}

fn atom(i: usize) -> String {
    format!("a{i}")
}

fn body_text(b: &Body) -> Vec<String> {
    b.pos
        .iter()
        .map(|&a| atom(a))
        .chain(b.neg.iter().map(|&a| format!("not {}", atom(a))))
        .collect()
}

fn with_body(head: String, b: &Body) -> String {
    let lits = body_text(b);
    if lits.is_empty() {
        format!("{head}.")
    } else {
        format!("{head} :- {}.", lits.join(", "))
    }
}

impl RefProgram {
    pub fn text(&self) -> String {
        let mut out = Vec::new();
        for r in &self.rules {
            out.push(match r {
                RefRule::Normal { head, body } => with_body(atom(*head), body),
                RefRule::Choice {
                    lower,
                    upper,
                    heads,
                    body,
                } => {
                    let hs: Vec<String> = heads.iter().map(|&h| atom(h)).collect();
                    with_body(format!("{lower} {{ {} }} {upper}", hs.join("; ")), body)
                }
                RefRule::Constraint { body } => format!(":- {}.", body_text(body).join(", ")),
                RefRule::Weak {
                    body,
                    weight,
                    level,
                    tag,
                } => {
                    format!(
                        ":~ {}.[{weight}@{level}, {tag}]",
                        body_text(body).join(", ")
                    )
                }
            });
        }
        out.join("\n")
    }

    fn holds(m: u32, b: &Body) -> bool {
        b.pos.iter().all(|&a| m >> a & 1 == 1) && b.neg.iter().all(|&a| m >> a & 1 == 0)
    }

    /// Whether the atom set `m` (bit `i` for `a{i}`) is a stable model.
    pub fn is_stable(&self, m: u32) -> bool {
        for r in &self.rules {
            let ok = match r {
                RefRule::Normal { head, body } => !Self::holds(m, body) || m >> head & 1 == 1,
                RefRule::Choice {
                    lower,
                    upper,
                    heads,
                    body,
                } => {
                    let n = heads.iter().filter(|&&h| m >> h & 1 == 1).count();
                    !Self::holds(m, body) || (*lower..=*upper).contains(&n)
                }
                RefRule::Constraint { body } => !Self::holds(m, body),
                RefRule::Weak { .. } => true,
            };
            if !ok {
                return false;
            }
        }
        // Least model of the reduct relative to m.
        let mut reduct: Vec<(usize, &Vec<usize>)> = Vec::new();
        for r in &self.rules {
            match r {
                RefRule::Normal { head, body } if body.neg.iter().all(|&a| m >> a & 1 == 0) => {
                    reduct.push((*head, &body.pos))
                }
                RefRule::Choice { heads, body, .. }
                    if body.neg.iter().all(|&a| m >> a & 1 == 0) =>
                {
                    for &h in heads.iter().filter(|&&h| m >> h & 1 == 1) {
                        reduct.push((h, &body.pos));
                    }
                }
                _ => {}
            }
        }
        let mut least = 0u32;
        loop {
            let before = least;
            for (h, pos) in &reduct {
                if pos.iter().all(|&a| least >> a & 1 == 1) {
                    least |= 1 << h;
                }
            }
            if least == before {
                break;
            }
        }
        least == m
    }

    pub fn stable_models(&self) -> Vec<u32> {
        (0u32..1 << self.atoms)
            .filter(|&m| self.is_stable(m))
            .collect()
    }

    /// Per-level totals of the weak rules whose body holds in `m`, zero
    /// levels omitted.
    pub fn cost(&self, m: u32) -> BTreeMap<i64, i64> {
        let mut c = BTreeMap::new();
        for r in &self.rules {
            if let RefRule::Weak {
                body,
                weight,
                level,
                ..
            } = r
            {
                if Self::holds(m, body) {
                    *c.entry(*level).or_insert(0) += weight;
                }
            }
        }
        c.retain(|_, w| *w != 0);
        c
    }

    /// Stable models of minimal cost, comparing totals from the highest
    /// level down.
    pub fn optimal_models(&self) -> Vec<u32> {
        let models = self.stable_models();
        let key = |m: u32| {
            let c = self.cost(m);
            let levels: BTreeSet<i64> = self
                .rules
                .iter()
                .filter_map(|r| {
                    if let RefRule::Weak { level, .. } = r {
                        Some(*level)
                    } else {
                        None
                    }
                })
                .collect();
            levels
                .into_iter()
                .rev()
                .map(|l| c.get(&l).copied().unwrap_or(0))
                .collect::<Vec<i64>>()
        };
        let Some(best) = models.iter().map(|&m| key(m)).min() else {
            return Vec::new();
        };
        models.into_iter().filter(|&m| key(m) == best).collect()
    }

    pub fn names(m: u32) -> Vec<String> {
        let mut v: Vec<String> = (0..32).filter(|i| m >> i & 1 == 1).map(atom).collect();
        v.sort();
        v
    }
}

fn random_body(rng: &mut impl Rng, atoms: usize, min: usize) -> Body {
    let n = rng.gen_range(min..=3);
    let mut used = BTreeSet::new();
    let mut body = Body {
        pos: Vec::new(),
        neg: Vec::new(),
    };
    for _ in 0..n {
        let a = rng.gen_range(0..atoms);
        if !used.insert(a) {
            continue;
        }
        if rng.gen_bool(0.4) {
            body.neg.push(a);
        } else {
            body.pos.push(a);
        }
    }
    body
}

/// A random program over `a0 .. a{atoms-1}` with up to `max_rules` rules.
/// Weak rules appear only when `weak_levels > 0`.
pub fn random_program(
    rng: &mut impl Rng,
    max_atoms: usize,
    max_rules: usize,
    weak_levels: i64,
) -> RefProgram {
    let atoms = rng.gen_range(1..=max_atoms);
    let n = rng.gen_range(1..=max_rules);
    let mut rules = Vec::new();
    for tag in 0..n {
        let roll = rng.gen_range(0..10);
        let rule = if weak_levels > 0 && roll >= 7 {
            RefRule::Weak {
                body: random_body(rng, atoms, 1),
                weight: rng.gen_range(-1..=3),
                level: rng.gen_range(1..=weak_levels),
                tag,
            }
        } else if roll < 3 {
            RefRule::Normal {
                head: rng.gen_range(0..atoms),
                body: random_body(rng, atoms, 0),
            }
        } else if roll < 6 || (weak_levels == 0 && roll < 9) {
            let mut heads: Vec<usize> = (0..rng.gen_range(1..=3))
                .map(|_| rng.gen_range(0..atoms))
                .collect();
            heads.sort_unstable();
            heads.dedup();
            let lower = if rng.gen_bool(0.6) {
                0
            } else {
                rng.gen_range(0..=heads.len())
            };
            let upper = rng.gen_range(lower..=heads.len());
            RefRule::Choice {
                lower,
                upper,
                heads,
                body: random_body(rng, atoms, 0),
            }
        } else {
            RefRule::Constraint {
                body: random_body(rng, atoms, 2),
            }
        };
        rules.push(rule);
    }
    RefProgram { atoms, rules }
}
