//! Reproduction suite: runs each finite-instance claim with certificates.
//! Backs the `verify-paper` CLI subcommand.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::classify::classify;
use crate::constructions::{
    enumerate_odd_parity_solutions, product_coloring, verify_line_scheme, Color,
    LineColoringScheme,
};
use crate::error::Error;
use crate::extremal::{bound_report, classes_within, max_k_distance_set};
use crate::fixtures::{fixture, Fixture};
use crate::graph::{build_graph, forbid_squared_ints, DistanceGraph, ForbiddenSpec};
use crate::points::{generate_grid, Point, PointSet};
use crate::rational::Rational;
use crate::solver::{
    bipartition, chromatic_bruteforce, chromatic_exact, greedy_coloring, BipartitionResult,
    Certificate, Coloring,
};

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub name: String,
    pub passed: bool,
    pub budget_exhausted: bool,
    pub details: serde_json::Value,
}

pub const CLAIM_NAMES: [&str; 10] = [
    "prop3_lower",
    "prop3_upper",
    "prop5a",
    "prop5b_bipartite",
    "prop5b_parity",
    "prop5b_triangle",
    "prop5c",
    "prop4_fixtures",
    "oracle",
    "product",
];

pub fn run_claims(only: Option<&[&str]>, budget: u64, seed: u64) -> Vec<ClaimResult> {
    CLAIM_NAMES
        .iter()
        .filter(|&&n| only.map_or(true, |o| o.contains(&n)))
        .map(|&name| run_claim(name, budget, seed))
        .collect()
}

fn run_claim(name: &str, budget: u64, seed: u64) -> ClaimResult {
    let outcome = match name {
        "prop3_lower" => prop3_lower(budget),
        "prop3_upper" => prop3_upper(budget, seed),
        "prop5a" => prop5a(seed),
        "prop5b_bipartite" => prop5b_bipartite(),
        "prop5b_parity" => prop5b_parity(),
        "prop5b_triangle" => prop5b_triangle(budget),
        "prop5c" => prop5c(budget, seed),
        "prop4_fixtures" => prop4_fixtures(budget),
        "oracle" => oracle(budget, seed),
        "product" => product(budget, seed),
        _ => Err(Error::Precondition(format!("unknown claim {name}"))),
    };
    match outcome {
        Ok((passed, details)) => ClaimResult {
            name: name.to_string(),
            passed,
            budget_exhausted: false,
            details,
        },
        Err(Error::BudgetExhausted { nodes, best }) => ClaimResult {
            name: name.to_string(),
            passed: false,
            budget_exhausted: true,
            details: json!({"budget_exhausted": true, "nodes": nodes, "best_known": best}),
        },
        Err(e) => ClaimResult {
            name: name.to_string(),
            passed: false,
            budget_exhausted: false,
            details: json!({"error": e.to_string()}),
        },
    }
}

type Outcome = crate::error::Result<(bool, serde_json::Value)>;

/// chi({0..k}, distances 1..k) = k+1 for k = 1..6.
fn prop3_lower(budget: u64) -> Outcome {
    let mut values = Vec::new();
    let mut ok = true;
    for k in 1..=6u64 {
        let ps = generate_grid(1, k, 1)?;
        let squares: Vec<i64> = (1..=k as i64).map(|d| d * d).collect();
        let g = build_graph(&classify(&ps)?, &forbid_squared_ints(&squares))?;
        let res = chromatic_exact(&g, budget)?;
        ok &= res.chi == (k + 1) as usize;
        values.push(json!({"k": k, "chi": res.chi, "expected": k + 1}));
    }
    Ok((ok, json!({"cases": values})))
}

/// On {0..40} with random k <= 4 distances: chi <= 2k and greedy in
/// increasing order uses <= k+1 colors.
fn prop3_upper(budget: u64, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for trial in 0..50 {
        let k: usize = rng.gen_range(1..=4);
        let mut ds: Vec<i64> = (1..=40).collect();
        ds.shuffle(&mut rng);
        let ds: Vec<i64> = ds.into_iter().take(k).map(|d| d * d).collect();
        let ps = generate_grid(1, 40, 1)?;
        let g = build_graph(&classify(&ps)?, &forbid_squared_ints(&ds))?;
        let res = chromatic_exact(&g, budget)?;
        let order: Vec<usize> = (0..g.vertex_count()).collect();
        let greedy = greedy_coloring(&g, &order);
        if res.chi > 2 * k || greedy.color_count > k + 1 || !greedy.is_valid(&g) {
            violations.push(json!({
                "trial": trial, "k": k, "chi": res.chi, "greedy": greedy.color_count
            }));
        }
    }
    Ok((violations.is_empty(), json!({"trials": 50, "violations": violations})))
}

fn random_scheme_pair(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    loop {
        let make = |rng: &mut ChaCha8Rng| {
            let den: i64 = rng.gen_range(1..=4);
            let num: i64 = rng.gen_range(1..=12 * den);
            Rational::new(num.into(), den.into())
        };
        let a = make(rng);
        let b = make(rng);
        if a == b {
            continue;
        }
        return if &a < &b { (a, b) } else { (b, a) };
    }
}

/// The interval 3-coloring has no same-color pair at distance s1 or s2, over
/// random pairs; a corrupted scheme is caught.
fn prop5a(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = Rational::from_int(100);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let (s1, s2) = random_scheme_pair(&mut rng);
        let scheme = LineColoringScheme::new(s1.clone(), s2.clone())?;
        let report = verify_line_scheme(&scheme, 1000, &range, rng.gen());
        if !report.violations.is_empty() {
            bad.push(json!({"s1": s1, "s2": s2, "violations": report.violations.len()}));
        }
    }
    let mut mutated = LineColoringScheme::new(Rational::from_int(2), Rational::from_int(3))?;
    mutated.override_pair(1, [Color::Red, Color::Blue]);
    let mutation_report = verify_line_scheme(&mutated, 0, &Rational::from_int(30), 0);
    let mutation_caught = !mutation_report.violations.is_empty();
    Ok((
        bad.is_empty() && mutation_caught,
        json!({"pairs": 100, "failing_pairs": bad, "mutation_caught": mutation_caught}),
    ))
}

/// Squared distances 2, 10, 50 on [0..10]^2 give bipartite graphs with a
/// valid 2-coloring, never an odd cycle.
fn prop5b_bipartite() -> Outcome {
    let ps = generate_grid(2, 10, 1)?;
    let m = classify(&ps)?;
    let mut cases = Vec::new();
    let mut ok = true;
    for sq in [2i64, 10, 50] {
        let g = build_graph(&m, &forbid_squared_ints(&[sq]))?;
        let edges = g.edge_count();
        let result = bipartition(&g);
        let valid = match &result {
            BipartitionResult::Bipartition { sides } => {
                let mut assignment = vec![0usize; g.vertex_count()];
                for &v in &sides[1] {
                    assignment[v] = 1;
                }
                Coloring::new(assignment).is_valid(&g)
            }
            BipartitionResult::OddCycle { .. } => false,
        };
        ok &= valid && edges > 0;
        cases.push(json!({"squared": sq, "edges": edges, "bipartite": valid}));
    }
    Ok((ok, json!({"cases": cases})))
}

/// Every primitive solution of q(a^2+b^2) = 2pc^2, p,q odd, has a, b, c odd.
fn prop5b_parity() -> Outcome {
    let mut total = 0usize;
    let mut exceptions = Vec::new();
    for p in [1i64, 3, 5, 7, 9] {
        for q in [1i64, 3, 5, 7, 9] {
            for (a, b, c) in enumerate_odd_parity_solutions(p, q, 50)? {
                total += 1;
                let verdict = crate::constructions::check_odd_parity_solution(a, b, c, p, q)?;
                if !verdict.all_odd() {
                    exceptions.push(json!({"p": p, "q": q, "a": a, "b": b, "c": c}));
                }
            }
        }
    }
    Ok((
        exceptions.is_empty() && total > 0,
        json!({"solutions": total, "exceptions": exceptions}),
    ))
}

pub fn is_triangle_translate(points: &[&Point; 3]) -> bool {
    let t1 = Point::from_ints(&[1, 1, 0]);
    let t2 = Point::from_ints(&[1, 0, 1]);
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().any(|&[o, a, b]| {
        let d1: Vec<Rational> = points[a]
            .coords
            .iter()
            .zip(&points[o].coords)
            .map(|(x, y)| x - y)
            .collect();
        let d2: Vec<Rational> = points[b]
            .coords
            .iter()
            .zip(&points[o].coords)
            .map(|(x, y)| x - y)
            .collect();
        d1 == t1.coords && d2 == t2.coords
    })
}

/// chi([0..2]^3, sqrt 2) >= 3 with a clique certificate containing a
/// translate of the equilateral triangle (0,0,0),(1,1,0),(1,0,1).
fn prop5b_triangle(budget: u64) -> Outcome {
    let ps = generate_grid(3, 2, 1)?;
    let g = build_graph(&classify(&ps)?, &forbid_squared_ints(&[2]))?;
    let res = chromatic_exact(&g, budget)?;
    let clique = match &res.certificate {
        Certificate::Clique { vertices } => vertices.clone(),
        Certificate::Search => Vec::new(),
    };
    let mut found = false;
    for i in 0..clique.len() {
        for j in (i + 1)..clique.len() {
            for l in (j + 1)..clique.len() {
                let tri = [
                    &ps.points[clique[i]],
                    &ps.points[clique[j]],
                    &ps.points[clique[l]],
                ];
                if is_triangle_translate(&tri) {
                    found = true;
                }
            }
        }
    }
    Ok((
        res.chi >= 3 && clique.len() >= 3 && found,
        json!({"chi": res.chi, "clique": clique, "triangle_translate_found": found}),
    ))
}

/// Bound ledger on [0..5]^2 with forbidden squared {1, 2}: lower 4 by exact
/// solve, upper 4 by product of two bipartitions.
fn prop5c(budget: u64, seed: u64) -> Outcome {
    let ps = generate_grid(2, 5, 1)?;
    let m = classify(&ps)?;
    let explicit: BTreeSet<u32> = [1u32, 2].into();
    let ledger = bound_report("grid [0..5]^2", &m, 2, Some(explicit), seed, budget)?;
    let lower = ledger.lower.as_ref().map(|b| b.value);
    let upper = ledger.upper.as_ref().map(|b| b.value);
    Ok((
        lower == Some(4) && upper == Some(4),
        serde_json::to_value(&ledger)?,
    ))
}

/// Maximum k-distance sets of the named configurations.
fn prop4_fixtures(budget: u64) -> Outcome {
    let cases: [(&str, usize, usize); 6] = [
        ("line(5)", 2, 3),
        ("square", 2, 4),
        ("hypercube(3)", 3, 8),
        ("johnson(3,2)", 2, 6),
        ("icosahedron_matrix", 3, 12),
        ("regular_polygon_matrix(5)", 2, 5),
    ];
    let mut results = Vec::new();
    let mut ok = true;
    for (name, k, expected) in cases {
        let m = match fixture(name)? {
            Fixture::Points(ps) => classify(&ps)?,
            Fixture::Matrix(m) => m,
        };
        let r = max_k_distance_set(&m, k, budget)?;
        if !r.optimal {
            return Err(Error::BudgetExhausted {
                nodes: r.nodes_explored,
                best: r.subset.len(),
            });
        }
        ok &= r.subset.len() == expected && classes_within(&m, &r.subset).len() <= k;
        results.push(json!({"fixture": name, "k": k, "size": r.subset.len(), "expected": expected}));
    }
    Ok((ok, json!({"cases": results})))
}

pub fn random_point_set(rng: &mut ChaCha8Rng, max_points: usize) -> PointSet {
    loop {
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=max_points);
        let mut points = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut attempts = 0;
        while points.len() < n && attempts < 200 {
            attempts += 1;
            let coords: Vec<Rational> = (0..dim)
                .map(|_| {
                    let den: i64 = rng.gen_range(1..=3);
                    let num: i64 = rng.gen_range(-5 * den..=5 * den);
                    &Rational::from_int(num) / &Rational::from_int(den)
                })
                .collect();
            let p = Point::new(coords);
            if seen.insert(p.clone()) {
                points.push(p);
            }
        }
        if points.len() >= 2 {
            return PointSet::new(dim, points).expect("distinct by construction");
        }
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> DistanceGraph {
    if rng.gen_bool(0.5) {
        // random distance graph
        let ps = random_point_set(rng, max_n);
        let m = classify(&ps).unwrap();
        let classes = m.realized_classes();
        if classes.is_empty() {
            return DistanceGraph::empty(ps.len());
        }
        let count = rng.gen_range(1..=classes.len());
        let mut pool = classes;
        pool.shuffle(rng);
        let spec = ForbiddenSpec::Classes(pool.into_iter().take(count).collect());
        build_graph(&m, &spec).unwrap()
    } else {
        // Erdos-Renyi
        let n = rng.gen_range(2..=max_n);
        let p: f64 = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
        let mut g = DistanceGraph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }
}

/// Brute-force k-distance-set oracle: maximize over all 2^N subsets.
pub fn brute_force_k_distance(m: &crate::classify::DistanceClassMatrix, k: usize) -> usize {
    let n = m.size;
    let mut best = 0;
    for mask in 0u64..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if subset.len() > best && classes_within(m, &subset).len() <= k {
            best = subset.len();
        }
    }
    best
}

/// chromatic_exact agrees with the brute-force oracle on 200 random graphs;
/// max_k_distance_set agrees with subset enumeration on 100 random point sets.
fn oracle(budget: u64, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for trial in 0..200 {
        let g = random_graph(&mut rng, 9);
        let exact = chromatic_exact(&g, budget)?;
        let brute = chromatic_bruteforce(&g)?;
        if exact.chi != brute {
            mismatches.push(json!({"kind": "chromatic", "trial": trial,
                                   "exact": exact.chi, "brute": brute}));
        }
    }
    for trial in 0..100 {
        let ps = random_point_set(&mut rng, 10);
        let m = classify(&ps)?;
        let k = rng.gen_range(1..=3);
        let r = max_k_distance_set(&m, k, budget)?;
        if !r.optimal {
            return Err(Error::BudgetExhausted {
                nodes: r.nodes_explored,
                best: r.subset.len(),
            });
        }
        let brute = brute_force_k_distance(&m, k);
        if r.subset.len() != brute {
            mismatches.push(json!({"kind": "kdist", "trial": trial,
                                   "search": r.subset.len(), "brute": brute}));
        }
    }
    Ok((
        mismatches.is_empty(),
        json!({"chromatic_trials": 200, "kdist_trials": 100, "mismatches": mismatches}),
    ))
}

/// Product of valid colorings is valid on the union graph with exactly
/// m * r colors.
fn product(budget: u64, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut trials = 0;
    while trials < 50 {
        let ps = random_point_set(&mut rng, 9);
        let m = classify(&ps)?;
        let classes = m.realized_classes();
        if classes.len() < 2 {
            continue;
        }
        trials += 1;
        let mut pool = classes;
        pool.shuffle(&mut rng);
        let split = rng.gen_range(1..pool.len());
        let s1: BTreeSet<u32> = pool[..split].iter().copied().collect();
        let s2: BTreeSet<u32> = pool[split..].iter().copied().collect();
        let g1 = build_graph(&m, &ForbiddenSpec::Classes(s1.clone()))?;
        let g2 = build_graph(&m, &ForbiddenSpec::Classes(s2.clone()))?;
        let c1 = chromatic_exact(&g1, budget)?.witness;
        let c2 = chromatic_exact(&g2, budget)?.witness;
        let prod = product_coloring(&c1, &c2)?;
        let union: BTreeSet<u32> = s1.union(&s2).copied().collect();
        let gu = build_graph(&m, &ForbiddenSpec::Classes(union))?;
        if !prod.is_valid(&gu) || prod.color_count != c1.color_count * c2.color_count {
            violations.push(json!({"trial": trials, "colors": prod.color_count}));
        }
    }
    Ok((violations.is_empty(), json!({"trials": trials, "violations": violations})))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_translate_detection() {
        let a = Point::from_ints(&[2, 3, 1]);
        let b = Point::from_ints(&[3, 4, 1]);
        let c = Point::from_ints(&[3, 3, 2]);
        assert!(is_triangle_translate(&[&a, &b, &c]));
        assert!(is_triangle_translate(&[&c, &a, &b]));
        let d = Point::from_ints(&[2, 4, 2]);
        assert!(!is_triangle_translate(&[&a, &b, &d]));
    }

    #[test]
    fn all_claims_pass_with_default_budget() {
        let results = run_claims(None, 20_000_000, 0);
        assert_eq!(results.len(), 10);
        for r in &results {
            assert!(r.passed, "claim {} failed: {}", r.name, r.details);
        }
    }

    #[test]
    fn zero_budget_reports_exhaustion() {
        let results = run_claims(Some(&["oracle"]), 0, 0);
        assert_eq!(results.len(), 1);
        assert!(results[0].budget_exhausted);
        assert!(!results[0].passed);
    }
}
