//! Acceptance suite: one test per reproduction criterion, each printing a
//! PASS line with its elapsed time (visible with `--nocapture`).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use babai::classify::classify;
use babai::constructions::{
    check_odd_parity_solution, enumerate_odd_parity_solutions, product_coloring,
    verify_line_scheme, Color, LineColoringScheme,
};
use babai::extremal::{bound_report, classes_within, max_k_distance_set};
use babai::fixtures::{fixture, Fixture};
use babai::graph::{build_graph, forbid_squared_ints, ForbiddenSpec};
use babai::points::{generate_grid, squared_distance};
use babai::rational::Rational;
use babai::solver::{
    bipartition, chromatic_bruteforce, chromatic_exact, greedy_coloring, BipartitionResult,
    Certificate, Coloring,
};
use babai::verify::{is_triangle_translate, random_graph, random_point_set};

const BUDGET: u64 = 50_000_000;

fn timed<F: FnOnce()>(name: &str, limit: Duration, f: F) {
    let start = Instant::now();
    f();
    let elapsed = start.elapsed();
    println!("PASS {name} ({elapsed:.2?}, limit {limit:.0?})");
    assert!(
        elapsed <= limit,
        "{name} exceeded its time limit: {elapsed:?} > {limit:?}"
    );
}

#[test]
fn criterion_01_prop3_lower_bound() {
    timed("criterion 1: chi({0..k}, 1..k) = k+1 for k=1..6", Duration::from_secs(1), || {
        for k in 1..=6u64 {
            let ps = generate_grid(1, k, 1).unwrap();
            let squares: Vec<i64> = (1..=k as i64).map(|d| d * d).collect();
            let g = build_graph(&classify(&ps).unwrap(), &forbid_squared_ints(&squares)).unwrap();
            let res = chromatic_exact(&g, BUDGET).unwrap();
            assert_eq!(res.chi, (k + 1) as usize, "k = {k}");
            assert!(res.witness.is_valid(&g));
        }
    });
}

#[test]
fn criterion_02_prop3_upper_bound_shadow() {
    timed("criterion 2: line windows, chi <= 2k and greedy <= k+1", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..50 {
            let k: usize = rng.gen_range(1..=4);
            let mut ds: Vec<i64> = (1..=40).collect();
            ds.shuffle(&mut rng);
            let squares: Vec<i64> = ds.into_iter().take(k).map(|d| d * d).collect();
            let ps = generate_grid(1, 40, 1).unwrap();
            let g = build_graph(&classify(&ps).unwrap(), &forbid_squared_ints(&squares)).unwrap();
            let res = chromatic_exact(&g, BUDGET).unwrap();
            assert!(res.chi <= 2 * k, "trial {trial}: chi {} > 2k = {}", res.chi, 2 * k);
            let order: Vec<usize> = (0..g.vertex_count()).collect();
            let greedy = greedy_coloring(&g, &order);
            assert!(greedy.is_valid(&g));
            assert!(
                greedy.color_count <= k + 1,
                "trial {trial}: greedy used {} > k+1 = {}",
                greedy.color_count,
                k + 1
            );
        }
    });
}

#[test]
fn criterion_03_prop5a_line_scheme() {
    timed("criterion 3: interval 3-coloring verifies, mutation caught", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let range = Rational::from_int(100);
        for trial in 0..100 {
            let make = |rng: &mut ChaCha8Rng| {
                let den: i64 = rng.gen_range(1..=4);
                let num: i64 = rng.gen_range(1..=12 * den);
                Rational::new(num.into(), den.into())
            };
            let (s1, s2) = loop {
                let a = make(&mut rng);
                let b = make(&mut rng);
                if a != b {
                    break if &a < &b { (a, b) } else { (b, a) };
                }
            };
            let scheme = LineColoringScheme::new(s1.clone(), s2.clone()).unwrap();
            let report = verify_line_scheme(&scheme, 1000, &range, rng.gen());
            assert!(
                report.violations.is_empty(),
                "trial {trial} s1={s1} s2={s2}: {:?}",
                report.violations
            );
        }
        let mut corrupted =
            LineColoringScheme::new(Rational::from_int(2), Rational::from_int(3)).unwrap();
        corrupted.override_pair(1, [Color::Red, Color::Blue]);
        let report = verify_line_scheme(&corrupted, 0, &Rational::from_int(30), 0);
        assert!(!report.violations.is_empty(), "mutation not caught by boundary sweep");
    });
}

#[test]
fn criterion_04_prop5b_bipartiteness() {
    timed("criterion 4: squared 2, 10, 50 on [0..10]^2 are bipartite", Duration::from_secs(5), || {
        let ps = generate_grid(2, 10, 1).unwrap();
        let m = classify(&ps).unwrap();
        for sq in [2i64, 10, 50] {
            let g = build_graph(&m, &forbid_squared_ints(&[sq])).unwrap();
            assert!(g.edge_count() > 0, "squared {sq} must be realized");
            match bipartition(&g) {
                BipartitionResult::Bipartition { sides } => {
                    let mut assignment = vec![0usize; g.vertex_count()];
                    for &v in &sides[1] {
                        assignment[v] = 1;
                    }
                    assert!(Coloring::new(assignment).is_valid(&g), "squared {sq}");
                }
                BipartitionResult::OddCycle { cycle } => {
                    panic!("squared {sq}: unexpected odd cycle {cycle:?}")
                }
            }
        }
    });
}

#[test]
fn criterion_05_prop5b_parity_lemma() {
    timed("criterion 5: all primitive solutions of q(a^2+b^2)=2pc^2 are odd", Duration::from_secs(10), || {
        let mut total = 0;
        for p in [1i64, 3, 5, 7, 9] {
            for q in [1i64, 3, 5, 7, 9] {
                for (a, b, c) in enumerate_odd_parity_solutions(p, q, 50).unwrap() {
                    total += 1;
                    let verdict = check_odd_parity_solution(a, b, c, p, q).unwrap();
                    assert!(verdict.all_odd(), "p={p} q={q}: ({a},{b},{c})");
                }
            }
        }
        assert!(total > 0, "enumeration found no solutions at all");
    });
}

#[test]
fn criterion_06_prop5b_triangle() {
    timed("criterion 6: sqrt(2)-graph on [0..2]^3 has the equilateral triangle", Duration::from_secs(10), || {
        let ps = generate_grid(3, 2, 1).unwrap();
        let g = build_graph(&classify(&ps).unwrap(), &forbid_squared_ints(&[2])).unwrap();
        let res = chromatic_exact(&g, BUDGET).unwrap();
        assert!(res.chi >= 3, "chi = {}", res.chi);
        let clique = match &res.certificate {
            Certificate::Clique { vertices } => vertices.clone(),
            Certificate::Search => panic!("expected a clique certificate"),
        };
        assert!(clique.len() >= 3);
        let mut found = false;
        for i in 0..clique.len() {
            for j in (i + 1)..clique.len() {
                for l in (j + 1)..clique.len() {
                    if is_triangle_translate(&[
                        &ps.points[clique[i]],
                        &ps.points[clique[j]],
                        &ps.points[clique[l]],
                    ]) {
                        found = true;
                    }
                }
            }
        }
        assert!(found, "no translate of the triangle inside clique {clique:?}");
    });
}

#[test]
fn criterion_07_prop5c_bound_ledger() {
    timed("criterion 7: B_2 evidence on [0..5]^2 concludes 4", Duration::from_secs(60), || {
        let ps = generate_grid(2, 5, 1).unwrap();
        let m = classify(&ps).unwrap();
        let explicit: BTreeSet<u32> = [1u32, 2].into();
        let ledger = bound_report("grid [0..5]^2", &m, 2, Some(explicit), 0, BUDGET).unwrap();
        let lower = ledger.lower.expect("lower bound present");
        let upper = ledger.upper.expect("upper bound present");
        assert_eq!(lower.value, 4);
        assert_eq!(upper.value, 4);
        // lower certificate: a 4-clique that is a unit square
        let clique: Vec<usize> = lower.certificate["clique"]
            .as_array()
            .expect("clique in certificate")
            .iter()
            .map(|v| v.as_u64().unwrap() as usize)
            .collect();
        assert_eq!(clique.len(), 4);
        let mut dists: Vec<Rational> = Vec::new();
        for (a, &u) in clique.iter().enumerate() {
            for &v in &clique[a + 1..] {
                dists.push(squared_distance(&ps.points[u], &ps.points[v]).unwrap());
            }
        }
        dists.sort();
        let expected: Vec<Rational> = [1, 1, 1, 1, 2, 2].iter().map(|&d| Rational::from_int(d)).collect();
        assert_eq!(dists, expected, "clique certificate is not a unit square");
        // upper certificate: product of two 2-colorings
        assert_eq!(upper.certificate["type"], "product_coloring");
        assert_eq!(upper.certificate["factor_colors"].as_array().unwrap().len(), 2);
    });
}

#[test]
fn criterion_08_prop4_fixtures() {
    timed("criterion 8: maximum k-distance sets of the named fixtures", Duration::from_secs(10), || {
        let cases: [(&str, usize, usize); 6] = [
            ("line(5)", 2, 3),
            ("square", 2, 4),
            ("hypercube(3)", 3, 8),
            ("johnson(3,2)", 2, 6),
            ("icosahedron_matrix", 3, 12),
            ("regular_polygon_matrix(5)", 2, 5),
        ];
        for (name, k, expected) in cases {
            let m = match fixture(name).unwrap() {
                Fixture::Points(ps) => classify(&ps).unwrap(),
                Fixture::Matrix(m) => m,
            };
            let r = max_k_distance_set(&m, k, BUDGET).unwrap();
            assert!(r.optimal, "{name}: search not completed");
            assert_eq!(r.subset.len(), expected, "{name}");
            assert!(classes_within(&m, &r.subset).len() <= k, "{name}");
        }
    });
}

/// Independent oracle: maximize |S| over all 2^N subsets with <= k classes.
fn brute_kdist(m: &babai::classify::DistanceClassMatrix, k: usize) -> usize {
    let n = m.size;
    assert!(n <= 16);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if subset.len() > best && classes_within(m, &subset).len() <= k {
            best = subset.len();
        }
    }
    best
}

#[test]
fn criterion_09_oracle_equivalence() {
    timed("criterion 9: solver agrees with brute-force oracles", Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..200 {
            let g = random_graph(&mut rng, 9);
            let exact = chromatic_exact(&g, BUDGET).unwrap();
            let brute = chromatic_bruteforce(&g).unwrap();
            assert_eq!(exact.chi, brute, "chromatic mismatch on trial {trial}");
            assert!(exact.witness.is_valid(&g));
        }
        for trial in 0..100 {
            let ps = random_point_set(&mut rng, 10);
            let m = classify(&ps).unwrap();
            let k = rng.gen_range(1..=3);
            let r = max_k_distance_set(&m, k, BUDGET).unwrap();
            assert!(r.optimal);
            assert_eq!(r.subset.len(), brute_kdist(&m, k), "kdist mismatch on trial {trial}");
        }
    });
}

#[test]
fn criterion_10_product_coloring() {
    timed("criterion 10: product colorings valid with exactly m*r colors", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut trials = 0;
        while trials < 50 {
            let ps = random_point_set(&mut rng, 9);
            let m = classify(&ps).unwrap();
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
            let g1 = build_graph(&m, &ForbiddenSpec::Classes(s1.clone())).unwrap();
            let g2 = build_graph(&m, &ForbiddenSpec::Classes(s2.clone())).unwrap();
            let c1 = chromatic_exact(&g1, BUDGET).unwrap().witness;
            let c2 = chromatic_exact(&g2, BUDGET).unwrap().witness;
            let prod = product_coloring(&c1, &c2).unwrap();
            assert_eq!(prod.color_count, c1.color_count * c2.color_count);
            let union: BTreeSet<u32> = s1.union(&s2).copied().collect();
            let gu = build_graph(&m, &ForbiddenSpec::Classes(union)).unwrap();
            assert!(prod.is_valid(&gu), "trial {trials}");
        }
    });
}
