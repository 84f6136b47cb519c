//! Small directed graphs and a brute-force Hamiltonicity check.

use std::collections::BTreeSet;

use las_core::syntax::{Atom, Program, Rule, Term};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A directed graph on the nodes `1..=nodes`. Self-loops are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: u32,
    pub edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(nodes: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let edges = edges.into_iter().collect::<BTreeSet<_>>();
        debug_assert!(edges
            .iter()
            .all(|&(a, b)| (1..=nodes).contains(&a) && (1..=nodes).contains(&b)));
        Graph { nodes, edges }
    }

    /// The graph whose edge set is given by the bits of `mask`, bit
    /// `(a - 1) * nodes + (b - 1)` standing for the edge `(a, b)`.
    pub fn from_mask(nodes: u32, mask: u64) -> Self {
        let edges = (0..nodes * nodes)
            .filter(|bit| mask >> bit & 1 == 1)
            .map(|bit| (bit / nodes + 1, bit % nodes + 1));
        Graph::new(nodes, edges)
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&(a, b))
    }

    /// `node(1). … node(n).` followed by one `edge(a,b).` per edge.
    pub fn facts(&self) -> Program {
        let int = |v: u32| Term::int(i64::from(v));
        let nodes = (1..=self.nodes).map(|v| Rule::fact(Atom::new("node", vec![int(v)])));
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| Rule::fact(Atom::new("edge", vec![int(a), int(b)])));
        nodes.chain(edges).collect()
    }
}

/// True when some cyclic ordering of all nodes follows edges of the graph.
/// A single node needs a self-loop. The empty graph has no cycle.
pub fn is_hamiltonian(g: &Graph) -> bool {
    if g.nodes == 0 {
        return false;
    }
    // Fixing node 1 first loses no generality for a cycle.
    let mut rest: Vec<u32> = (2..=g.nodes).collect();
    permutations(&mut rest, 0, &mut |perm| {
        let mut prev = 1;
        for &v in perm {
            if !g.has_edge(prev, v) {
                return false;
            }
            prev = v;
        }
        g.has_edge(prev, 1)
    })
}

fn permutations(items: &mut Vec<u32>, k: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permutations(items, k + 1, visit) {
            items.swap(k, i);
            return true;
        }
        items.swap(k, i);
    }
    false
}

/// A Hamiltonian graph: a random cycle through all nodes plus every other
/// ordered pair as an edge with probability `p`.
pub fn random_hamiltonian(rng: &mut impl Rng, nodes: u32, p: f64) -> Graph {
    let mut order: Vec<u32> = (1..=nodes).collect();
    order.shuffle(rng);
    let mut edges: BTreeSet<(u32, u32)> = (0..order.len())
        .map(|i| (order[i], order[(i + 1) % order.len()]))
        .collect();
    for a in 1..=nodes {
        for b in 1..=nodes {
            if !edges.contains(&(a, b)) && rng.gen_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    Graph { nodes, edges }
}

/// A non-Hamiltonian graph, rejection-sampled from graphs with each ordered
/// pair an edge with probability `p`.
pub fn random_non_hamiltonian(rng: &mut impl Rng, nodes: u32, p: f64) -> Graph {
    loop {
        let edges = (1..=nodes)
            .flat_map(|a| (1..=nodes).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(p))
            .collect::<Vec<_>>();
        let g = Graph::new(nodes, edges);
        if !is_hamiltonian(&g) {
            return g;
        }
    }
}
