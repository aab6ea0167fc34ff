//! Exact and heuristic graph coloring.
//!
//! The exact solver is a DSATUR-ordered branch and bound with deterministic
//! tie-breaking (highest saturation, then highest degree, then lowest index)
//! and symmetry breaking: at each vertex only one brand-new color is tried.
//! Budget exhaustion is a distinct error state, never an approximate answer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DistanceGraph;

pub const BRUTE_FORCE_CAP: usize = 12;
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: Vec<usize>,
    pub color_count: usize,
}

impl Coloring {
    pub fn new(assignment: Vec<usize>) -> Self {
        let color_count = assignment.iter().copied().max().map_or(0, |m| m + 1);
        Coloring {
            assignment,
            color_count,
        }
    }

    /// The load-bearing check: no edge joins two vertices of the same color.
    pub fn is_valid(&self, g: &DistanceGraph) -> bool {
        if self.assignment.len() != g.vertex_count() {
            return false;
        }
        g.edges()
            .iter()
            .all(|&(u, v)| self.assignment[u] != self.assignment[v])
    }

    pub fn distinct_colors(&self) -> usize {
        let mut cs: Vec<usize> = self.assignment.clone();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// Pairwise-adjacent vertex set of size chi: optimality proven by clique.
    Clique { vertices: Vec<usize> },
    /// Optimality proven by exhausting the search tree.
    Search,
}

#[derive(Clone, Debug)]
pub struct ChromaticResult {
    pub chi: usize,
    pub witness: Coloring,
    pub certificate: Certificate,
    pub nodes_explored: u64,
}

// wire format: {"chi": c, "coloring": [...], "certificate": {...}, "nodes_explored": n}
#[derive(Serialize, Deserialize)]
struct ChromaticResultWire {
    chi: usize,
    coloring: Vec<usize>,
    certificate: Certificate,
    nodes_explored: u64,
}

impl Serialize for ChromaticResult {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ChromaticResultWire {
            chi: self.chi,
            coloring: self.witness.assignment.clone(),
            certificate: self.certificate.clone(),
            nodes_explored: self.nodes_explored,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ChromaticResult {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = ChromaticResultWire::deserialize(de)?;
        Ok(ChromaticResult {
            chi: wire.chi,
            witness: Coloring::new(wire.coloring),
            certificate: wire.certificate,
            nodes_explored: wire.nodes_explored,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BipartitionResult {
    Bipartition { sides: [Vec<usize>; 2] },
    OddCycle { cycle: Vec<usize> },
}

/// Greedy coloring along `order`: each vertex gets the least color absent
/// among its already-colored neighbors. Uses at most max_degree + 1 colors.
pub fn greedy_coloring(g: &DistanceGraph, order: &[usize]) -> Coloring {
    let n = g.vertex_count();
    assert_eq!(order.len(), n, "order must be a permutation");
    let mut assignment = vec![usize::MAX; n];
    for &v in order {
        let mut used = vec![false; g.degree(v) + 1];
        for u in g.neighbors(v) {
            let c = assignment[u];
            if c < used.len() {
                used[c] = true;
            }
        }
        assignment[v] = used.iter().position(|&b| !b).unwrap();
    }
    Coloring::new(assignment)
}

/// Smallest-last (degeneracy) ordering; greedy on it uses at most
/// degeneracy + 1 colors. Ties broken by lowest index.
pub fn degeneracy_order(g: &DistanceGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = vec![0usize; n];
    for slot in (0..n).rev() {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        removed[v] = true;
        order[slot] = v;
        for u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    order
}

/// Degeneracy of the graph (max over the smallest-last removal of the degree
/// at removal time).
pub fn degeneracy(g: &DistanceGraph) -> usize {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut worst = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        worst = worst.max(deg[v]);
        removed[v] = true;
        for u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    worst
}

/// Deterministic greedy clique: every vertex is tried as a seed in index
/// order, extended by the lowest-index common neighbor; the first largest
/// clique found wins.
pub fn greedy_clique(g: &DistanceGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let words = g.words_per_row();
    let mut best: Vec<usize> = Vec::new();
    for seed in 0..n {
        let mut clique = vec![seed];
        let mut cand: Vec<u64> = g.row(seed).to_vec();
        loop {
            let next = (0..n).find(|&v| cand[v / 64] >> (v % 64) & 1 == 1);
            match next {
                Some(v) => {
                    clique.push(v);
                    let row = g.row(v);
                    for w in 0..words {
                        cand[w] &= row[w];
                    }
                }
                None => break,
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

pub fn is_clique(g: &DistanceGraph, vertices: &[usize]) -> bool {
    for (a, &u) in vertices.iter().enumerate() {
        for &v in &vertices[a + 1..] {
            if !g.adjacent(u, v) {
                return false;
            }
        }
    }
    true
}

struct DsaturState<'g> {
    g: &'g DistanceGraph,
    degrees: Vec<usize>,
    colors: Vec<usize>,
    colored: usize,
    best: usize,
    best_assignment: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl DsaturState<'_> {
    fn saturation(&self, v: usize) -> usize {
        let mut seen: Vec<usize> = self
            .g
            .neighbors(v)
            .into_iter()
            .map(|u| self.colors[u])
            .filter(|&c| c != usize::MAX)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    fn pick_vertex(&self) -> usize {
        let n = self.g.vertex_count();
        (0..n)
            .filter(|&v| self.colors[v] == usize::MAX)
            .max_by_key(|&v| (self.saturation(v), self.degrees[v], std::cmp::Reverse(v)))
            .unwrap()
    }

    fn search(&mut self, used_colors: usize) {
        if self.exhausted || self.best == self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let n = self.g.vertex_count();
        if self.colored == n {
            if used_colors < self.best {
                self.best = used_colors;
                self.best_assignment = self.colors.clone();
            }
            return;
        }
        let v = self.pick_vertex();
        let mut neighbor_used = vec![false; used_colors + 1];
        for u in self.g.neighbors(v) {
            let c = self.colors[u];
            if c < neighbor_used.len() {
                neighbor_used[c] = true;
            }
        }
        // existing colors first, then exactly one new color
        let limit = (used_colors + 1).min(self.best.saturating_sub(1));
        for c in 0..limit {
            if c < used_colors && neighbor_used[c] {
                continue;
            }
            self.colors[v] = c;
            self.colored += 1;
            self.search(used_colors.max(c + 1));
            self.colored -= 1;
            self.colors[v] = usize::MAX;
            if self.exhausted || self.best == self.lower {
                return;
            }
        }
    }
}

/// Exact chromatic number via DSATUR branch and bound. Initial lower bound
/// from a greedy clique, initial upper bound from greedy coloring on a
/// degeneracy order. Deterministic for fixed input. Budget exhaustion is an
/// error, never a wrong value.
pub fn chromatic_exact(g: &DistanceGraph, budget: u64) -> Result<ChromaticResult> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(ChromaticResult {
            chi: 0,
            witness: Coloring::new(vec![]),
            certificate: Certificate::Search,
            nodes_explored: 0,
        });
    }
    let clique = greedy_clique(g);
    let lower = clique.len().max(1);
    let greedy = greedy_coloring(g, &degeneracy_order(g));
    let mut state = DsaturState {
        g,
        degrees: (0..n).map(|v| g.degree(v)).collect(),
        colors: vec![usize::MAX; n],
        colored: 0,
        best: greedy.color_count,
        best_assignment: greedy.assignment.clone(),
        lower,
        nodes: 0,
        budget,
        exhausted: false,
    };
    if state.best > state.lower {
        state.search(0);
    }
    if state.exhausted {
        return Err(Error::BudgetExhausted {
            nodes: state.nodes,
            best: state.best,
        });
    }
    let chi = state.best;
    let certificate = if clique.len() == chi {
        Certificate::Clique {
            vertices: clique,
        }
    } else {
        Certificate::Search
    };
    let witness = Coloring::new(state.best_assignment);
    debug_assert!(witness.is_valid(g));
    debug_assert_eq!(witness.distinct_colors(), chi);
    Ok(ChromaticResult {
        chi,
        witness,
        certificate,
        nodes_explored: state.nodes,
    })
}

/// Testing oracle: smallest c admitting a valid assignment, by exhaustive
/// backtracking. Symmetry pruning on the first vertex only (fixed to color 0).
pub fn chromatic_bruteforce(g: &DistanceGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteCap(n, BRUTE_FORCE_CAP));
    }
    if n == 0 {
        return Ok(0);
    }
    fn fill(g: &DistanceGraph, colors: &mut Vec<usize>, v: usize, c_max: usize) -> bool {
        if v == g.vertex_count() {
            return true;
        }
        let choices = if v == 0 { 1 } else { c_max };
        for c in 0..choices {
            if (0..v).all(|u| !g.adjacent(u, v) || colors[u] != c) {
                colors[v] = c;
                if fill(g, colors, v + 1, c_max) {
                    return true;
                }
            }
        }
        false
    }
    for c in 1..=n {
        let mut colors = vec![usize::MAX; n];
        if fill(g, &mut colors, 0, c) {
            return Ok(c);
        }
    }
    unreachable!("n colors always suffice")
}

/// BFS 2-coloring per connected component, or an odd-cycle certificate.
pub fn bipartition(g: &DistanceGraph) -> BipartitionResult {
    let n = g.vertex_count();
    let mut side = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if side[root] != usize::MAX {
            continue;
        }
        side[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if side[v] == usize::MAX {
                    side[v] = 1 - side[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return BipartitionResult::OddCycle {
                        cycle: odd_cycle(&parent, &depth, u, v),
                    };
                }
            }
        }
    }
    let sides = [
        (0..n).filter(|&v| side[v] == 0).collect(),
        (0..n).filter(|&v| side[v] == 1).collect(),
    ];
    BipartitionResult::Bipartition { sides }
}

fn odd_cycle(parent: &[usize], depth: &[usize], mut u: usize, mut v: usize) -> Vec<usize> {
    let mut left = vec![u];
    let mut right = vec![v];
    while depth[u] > depth[v] {
        u = parent[u];
        left.push(u);
    }
    while depth[v] > depth[u] {
        v = parent[v];
        right.push(v);
    }
    while u != v {
        u = parent[u];
        v = parent[v];
        left.push(u);
        right.push(v);
    }
    // left ends at the common ancestor; right's copy of it is dropped
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Checks an odd-cycle certificate against adjacency.
pub fn is_odd_cycle(g: &DistanceGraph, cycle: &[usize]) -> bool {
    if cycle.len() < 3 || cycle.len() % 2 == 0 {
        return false;
    }
    cycle
        .windows(2)
        .all(|w| g.adjacent(w[0], w[1]))
        && g.adjacent(*cycle.last().unwrap(), cycle[0])
}
