//! Maximum k-distance-set search, exact maximum clique, and the bound ledger
//! collecting instance-level lower/upper evidence.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classify::DistanceClassMatrix;
use crate::error::{Error, Result};
use crate::graph::{build_graph, DistanceGraph, ForbiddenSpec};
use crate::solver::{
    bipartition, chromatic_exact, is_clique, BipartitionResult, Coloring,
};
use crate::constructions::product_coloring;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KDistanceSetResult {
    pub k: usize,
    pub subset: Vec<usize>,
    pub class_count: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CliqueResult {
    pub vertices: Vec<usize>,
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// Distinct classes realized among the chosen vertices.
pub fn classes_within(m: &DistanceClassMatrix, subset: &[usize]) -> BTreeSet<u32> {
    let mut used = BTreeSet::new();
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            used.insert(m.class_of(i, j));
        }
    }
    used
}

struct KDistState<'m> {
    m: &'m DistanceClassMatrix,
    k: usize,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl KDistState<'_> {
    fn new_classes(&self, chosen: &[usize], used: &BTreeSet<u32>, cand: usize) -> BTreeSet<u32> {
        chosen
            .iter()
            .map(|&i| self.m.class_of(i, cand))
            .filter(|c| !used.contains(c))
            .collect()
    }

    fn search(&mut self, chosen: &mut Vec<usize>, used: &BTreeSet<u32>, candidates: &[usize]) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        if chosen.len() + candidates.len() <= self.best.len() {
            return;
        }
        if candidates.is_empty() {
            return;
        }
        // branch on the candidate introducing the fewest new classes; ties by index
        let (pos, _) = candidates
            .iter()
            .enumerate()
            .min_by_key(|(_, &c)| (self.new_classes(chosen, used, c).len(), c))
            .map(|(p, c)| (p, *c))
            .unwrap();
        let v = candidates[pos];
        let rest: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &c)| c)
            .collect();

        let novel = self.new_classes(chosen, used, v);
        if used.len() + novel.len() <= self.k {
            let mut used_inc = used.clone();
            used_inc.extend(novel);
            chosen.push(v);
            self.search(chosen, &used_inc, &rest);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
        self.search(chosen, used, &rest);
    }
}

/// Exact maximum subset realizing at most k distinct distance classes, by
/// branch and bound over subsets. `optimal` is false only on budget
/// exhaustion, with the best subset found so far returned.
pub fn max_k_distance_set(
    m: &DistanceClassMatrix,
    k: usize,
    budget: u64,
) -> Result<KDistanceSetResult> {
    if k < 1 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    let mut state = KDistState {
        m,
        k,
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    let all: Vec<usize> = (0..m.size).collect();
    state.search(&mut Vec::new(), &BTreeSet::new(), &all);
    let class_count = classes_within(m, &state.best).len();
    debug_assert!(class_count <= k);
    Ok(KDistanceSetResult {
        k,
        subset: state.best,
        class_count,
        optimal: !state.exhausted,
        nodes_explored: state.nodes,
    })
}

struct CliqueState<'g> {
    g: &'g DistanceGraph,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueState<'_> {
    fn expand(&mut self, cand: &mut Vec<u64>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let n = self.g.vertex_count();
        let words = self.g.words_per_row();
        loop {
            let count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
            if self.current.len() + count <= self.best.len() {
                return;
            }
            let v = match (0..n).find(|&v| cand[v / 64] >> (v % 64) & 1 == 1) {
                Some(v) => v,
                None => {
                    if self.current.len() > self.best.len() {
                        self.best = self.current.clone();
                    }
                    return;
                }
            };
            self.current.push(v);
            let mut next: Vec<u64> = cand.clone();
            let row = self.g.row(v);
            for w in 0..words {
                next[w] &= row[w];
            }
            self.expand(&mut next);
            self.current.pop();
            if self.exhausted {
                return;
            }
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Exact maximum clique via branch and bound; the first maximum found under
/// the fixed index order is returned, so output is deterministic.
pub fn max_clique(g: &DistanceGraph, budget: u64) -> CliqueResult {
    let n = g.vertex_count();
    let words = g.words_per_row();
    let mut state = CliqueState {
        g,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    if n > 0 {
        state.best = vec![0]; // any vertex is a 1-clique
        let mut cand = vec![u64::MAX; words];
        for v in n..words * 64 {
            cand[v / 64] &= !(1 << (v % 64));
        }
        state.expand(&mut cand);
    }
    debug_assert!(is_clique(g, &state.best));
    CliqueResult {
        vertices: state.best,
        optimal: !state.exhausted,
        nodes_explored: state.nodes,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundSide {
    pub value: usize,
    pub certificate: serde_json::Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundLedger {
    pub space: String,
    pub k: usize,
    pub lower: Option<BoundSide>,
    pub upper: Option<BoundSide>,
    pub strategy: String,
    pub notes: Vec<String>,
}

fn k_subsets(classes: &[u32], k: usize) -> Vec<BTreeSet<u32>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > classes.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| classes[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < classes.len() - (k - i) {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn count_k_subsets(t: usize, k: usize) -> u128 {
    if k > t {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (t - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Assembles instance-level evidence: the lower bound is the max exact
/// chromatic number over the tried forbidden k-subsets (clique size when the
/// solver runs out of budget); the upper bound is a product-coloring count.
/// Certificates are re-verified before emission.
pub fn bound_report(
    space: &str,
    m: &DistanceClassMatrix,
    k: usize,
    explicit: Option<BTreeSet<u32>>,
    seed: u64,
    budget: u64,
) -> Result<BoundLedger> {
    let realized = m.realized_classes();
    let mut notes = Vec::new();

    let (subsets, strategy) = match &explicit {
        Some(set) => (vec![set.clone()], "explicit".to_string()),
        None => {
            let total = count_k_subsets(realized.len(), k);
            if total <= 500 {
                (
                    k_subsets(&realized, k),
                    format!("exhaustive ({total} k-subsets)"),
                )
            } else {
                let freq = m.class_frequencies();
                let mut by_freq: Vec<u32> = realized.clone();
                by_freq.sort_by_key(|c| (std::cmp::Reverse(freq[c]), *c));
                let mut subs: Vec<BTreeSet<u32>> =
                    vec![by_freq.iter().take(k).copied().collect()];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..100 {
                    let mut pool = realized.clone();
                    pool.shuffle(&mut rng);
                    subs.push(pool.into_iter().take(k).collect());
                }
                subs.sort();
                subs.dedup();
                (subs, format!("k-most-frequent + 100 random k-subsets (seed {seed})"))
            }
        }
    };

    let mut lower: Option<BoundSide> = None;
    let mut best_subset: Option<BTreeSet<u32>> = None;
    for subset in &subsets {
        let g = build_graph(m, &ForbiddenSpec::Classes(subset.clone()))?;
        let side = match chromatic_exact(&g, budget) {
            Ok(res) => {
                if !res.witness.is_valid(&g) {
                    return Err(Error::Precondition("witness failed re-validation".into()));
                }
                let clique = match &res.certificate {
                    crate::solver::Certificate::Clique { vertices } => {
                        if !is_clique(&g, vertices) {
                            return Err(Error::Precondition(
                                "clique certificate failed re-validation".into(),
                            ));
                        }
                        Some(vertices.clone())
                    }
                    crate::solver::Certificate::Search => None,
                };
                BoundSide {
                    value: res.chi,
                    certificate: json!({
                        "type": "chromatic",
                        "classes": subset.iter().collect::<Vec<_>>(),
                        "chi": res.chi,
                        "clique": clique,
                    }),
                }
            }
            Err(Error::BudgetExhausted { .. }) => {
                let cl = max_clique(&g, budget);
                if !is_clique(&g, &cl.vertices) {
                    return Err(Error::Precondition("clique failed re-validation".into()));
                }
                notes.push(format!(
                    "exact solve exhausted budget on classes {subset:?}; clique bound used"
                ));
                BoundSide {
                    value: cl.vertices.len(),
                    certificate: json!({
                        "type": "clique",
                        "classes": subset.iter().collect::<Vec<_>>(),
                        "vertices": cl.vertices,
                        "exact": cl.optimal,
                    }),
                }
            }
            Err(e) => return Err(e),
        };
        if lower.as_ref().map_or(true, |l| side.value > l.value) {
            lower = Some(side);
            best_subset = Some(subset.clone());
        }
    }

    // Upper side: color each class graph separately and take the product.
    let upper_classes: Vec<u32> = match &explicit {
        Some(set) => set.iter().copied().collect(),
        None => {
            // product of the k largest per-class chromatic numbers bounds every
            // k-subset via the product construction
            let mut chis: Vec<(usize, u32)> = Vec::new();
            for &c in &realized {
                let g = build_graph(m, &ForbiddenSpec::Classes([c].into()))?;
                match chromatic_exact(&g, budget) {
                    Ok(res) => chis.push((res.chi, c)),
                    Err(Error::BudgetExhausted { .. }) => {
                        notes.push(format!("class {c} chromatic number budgeted out; no upper bound"));
                        chis.clear();
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            chis.sort_by_key(|&(chi, c)| (std::cmp::Reverse(chi), c));
            chis.into_iter().take(k).map(|(_, c)| c).collect()
        }
    };

    let mut upper: Option<BoundSide> = None;
    if !upper_classes.is_empty() && upper_classes.len() <= k {
        let mut factors: Vec<(u32, Coloring)> = Vec::new();
        let mut ok = true;
        for &c in &upper_classes {
            let g = build_graph(m, &ForbiddenSpec::Classes([c].into()))?;
            let coloring = match bipartition(&g) {
                BipartitionResult::Bipartition { sides } => {
                    let mut assignment = vec![0usize; g.vertex_count()];
                    for &v in &sides[1] {
                        assignment[v] = 1;
                    }
                    Coloring {
                        assignment,
                        color_count: 2,
                    }
                }
                BipartitionResult::OddCycle { .. } => match chromatic_exact(&g, budget) {
                    Ok(res) => res.witness,
                    Err(Error::BudgetExhausted { .. }) => {
                        notes.push(format!("class {c} coloring budgeted out"));
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                },
            };
            if !coloring.is_valid(&g) {
                return Err(Error::Precondition("factor coloring invalid".into()));
            }
            factors.push((c, coloring));
        }
        if ok && !factors.is_empty() {
            let mut product = factors[0].1.clone();
            for (_, f) in &factors[1..] {
                product = product_coloring(&product, f)?;
            }
            let union_spec: BTreeSet<u32> = upper_classes.iter().copied().collect();
            let union_graph = build_graph(m, &ForbiddenSpec::Classes(union_spec))?;
            if !product.is_valid(&union_graph) {
                return Err(Error::Precondition("product coloring invalid on union".into()));
            }
            upper = Some(BoundSide {
                value: product.color_count,
                certificate: json!({
                    "type": "product_coloring",
                    "classes": upper_classes,
                    "factor_colors": factors.iter().map(|(_, f)| f.color_count).collect::<Vec<_>>(),
                    "coloring": product.assignment,
                }),
            });
        }
    }

    if let (Some(l), Some(u)) = (&lower, &upper) {
        if explicit.is_some() && l.value > u.value {
            return Err(Error::Precondition(format!(
                "ledger inconsistency: lower {} > upper {}",
                l.value, u.value
            )));
        }
    }
    if let Some(s) = &best_subset {
        notes.push(format!("lower bound achieved by classes {s:?}"));
    }

    Ok(BoundLedger {
        space: space.to_string(),
        k,
        lower,
        upper,
        strategy,
        notes,
    })
}
