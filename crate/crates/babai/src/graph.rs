//! Distance graphs: adjacency induced by a set of forbidden distance classes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::classify::{DistanceClassMatrix, SELF_CLASS};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Simple undirected graph with dense bitset adjacency rows.
#[derive(Clone, Debug)]
pub struct DistanceGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    pub forbidden_classes: BTreeSet<u32>,
    /// Requested squared distances that produced edges.
    pub realized: Vec<Rational>,
    /// Requested squared distances not occurring between any pair (edgeless by
    /// the paper's "actually realized" provision, not an error).
    pub unrealized: Vec<Rational>,
}

impl DistanceGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        DistanceGraph {
            n,
            words,
            rows: vec![0; n * words],
            forbidden_classes: BTreeSet::new(),
            realized: Vec::new(),
            unrealized: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|u| self.degree(u)).sum();
        total / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adjacent(u, v)).collect()
    }

    /// Induced subgraph on `vertices` (order preserved).
    pub fn induced(&self, vertices: &[usize]) -> DistanceGraph {
        let mut g = DistanceGraph::empty(vertices.len());
        g.forbidden_classes = self.forbidden_classes.clone();
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.adjacent(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// DIMACS format: `p edge N M` header, one `e u v` line per edge, 1-based.
    pub fn to_dimacs(&self) -> String {
        let edges = self.edges();
        let mut s = String::new();
        writeln!(s, "p edge {} {}", self.n, edges.len()).unwrap();
        for (u, v) in edges {
            writeln!(s, "e {} {}", u + 1, v + 1).unwrap();
        }
        s
    }

    pub fn from_dimacs(input: &str) -> Result<DistanceGraph> {
        let mut graph: Option<DistanceGraph> = None;
        let mut declared_edges = 0usize;
        let mut seen_edges = 0usize;
        for (lineno, line) in input.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut parts = line.split_ascii_whitespace();
            let tag = parts.next().unwrap();
            let parse_err =
                |m: &str| Error::Parse(format!("dimacs line {}: {}", lineno + 1, m));
            match tag {
                "p" => {
                    if graph.is_some() {
                        return Err(parse_err("duplicate p line"));
                    }
                    if parts.next() != Some("edge") {
                        return Err(parse_err("expected `p edge`"));
                    }
                    let n: usize = parts
                        .next()
                        .ok_or_else(|| parse_err("missing vertex count"))?
                        .parse()
                        .map_err(|_| parse_err("bad vertex count"))?;
                    declared_edges = parts
                        .next()
                        .ok_or_else(|| parse_err("missing edge count"))?
                        .parse()
                        .map_err(|_| parse_err("bad edge count"))?;
                    graph = Some(DistanceGraph::empty(n));
                }
                "e" => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| parse_err("edge before p line"))?;
                    let u: usize = parts
                        .next()
                        .ok_or_else(|| parse_err("missing endpoint"))?
                        .parse()
                        .map_err(|_| parse_err("bad endpoint"))?;
                    let v: usize = parts
                        .next()
                        .ok_or_else(|| parse_err("missing endpoint"))?
                        .parse()
                        .map_err(|_| parse_err("bad endpoint"))?;
                    if u == 0 || v == 0 || u > g.n || v > g.n {
                        return Err(parse_err("endpoint out of range"));
                    }
                    if u == v {
                        return Err(parse_err("self-loop"));
                    }
                    g.add_edge(u - 1, v - 1);
                    seen_edges += 1;
                }
                _ => return Err(parse_err("unknown line tag")),
            }
        }
        let g = graph.ok_or_else(|| Error::Parse("dimacs: no p line".into()))?;
        if seen_edges != declared_edges {
            return Err(Error::Parse(format!(
                "dimacs: header declares {declared_edges} edges, found {seen_edges}"
            )));
        }
        Ok(g)
    }
}

/// Specifies which pairs become edges: by class ID or by squared distance.
#[derive(Clone, Debug)]
pub enum ForbiddenSpec {
    Classes(BTreeSet<u32>),
    SquaredDistances(Vec<Rational>),
}

/// Builds the graph whose edges are exactly the pairs in the forbidden classes.
/// Squared distances not realized in the matrix yield no edges and are recorded
/// in `unrealized`.
pub fn build_graph(m: &DistanceClassMatrix, spec: &ForbiddenSpec) -> Result<DistanceGraph> {
    let mut forbidden = BTreeSet::new();
    let mut realized = Vec::new();
    let mut unrealized = Vec::new();
    match spec {
        ForbiddenSpec::Classes(ids) => {
            let known = m.realized_classes();
            for &id in ids {
                if id == SELF_CLASS || !known.contains(&id) {
                    return Err(Error::UnknownClass(id));
                }
                forbidden.insert(id);
                if let Some(t) = &m.class_table {
                    realized.push(t[&id].clone());
                }
            }
        }
        ForbiddenSpec::SquaredDistances(sqs) => {
            if m.class_table.is_none() {
                return Err(Error::Precondition(
                    "matrix has no class table; select classes by ID".into(),
                ));
            }
            for sq in sqs {
                match m.class_for_squared(sq) {
                    Some(id) => {
                        forbidden.insert(id);
                        realized.push(sq.clone());
                    }
                    None => unrealized.push(sq.clone()),
                }
            }
        }
    }
    let mut g = DistanceGraph::empty(m.size);
    for i in 0..m.size {
        for j in (i + 1)..m.size {
            if forbidden.contains(&m.class_of(i, j)) {
                g.add_edge(i, j);
            }
        }
    }
    g.forbidden_classes = forbidden;
    g.realized = realized;
    g.unrealized = unrealized;
    Ok(g)
}

pub fn forbid_squared_ints(values: &[i64]) -> ForbiddenSpec {
    ForbiddenSpec::SquaredDistances(values.iter().map(|&v| Rational::from_int(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::points::generate_grid;

    #[test]
    fn line_k3_triangle() {
        let ps = generate_grid(1, 2, 1).unwrap();
        let m = classify(&ps).unwrap();
        let g = build_graph(&m, &forbid_squared_ints(&[1, 4])).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn grid_checkerboard() {
        let ps = generate_grid(2, 2, 1).unwrap();
        let m = classify(&ps).unwrap();
        let g = build_graph(&m, &forbid_squared_ints(&[1])).unwrap();
        // 3x3 rook-step lattice: 12 edges
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn empty_forbidden_is_edgeless() {
        let ps = generate_grid(2, 2, 1).unwrap();
        let m = classify(&ps).unwrap();
        let g = build_graph(&m, &ForbiddenSpec::Classes(BTreeSet::new())).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn unrealized_distance_is_edgeless_not_error() {
        let ps = generate_grid(2, 3, 1).unwrap();
        let m = classify(&ps).unwrap();
        let g = build_graph(&m, &forbid_squared_ints(&[7])).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.unrealized, vec![Rational::from_int(7)]);
    }

    #[test]
    fn unknown_class_id_errors() {
        let ps = generate_grid(1, 1, 1).unwrap();
        let m = classify(&ps).unwrap();
        let spec = ForbiddenSpec::Classes([42u32].into_iter().collect());
        assert!(matches!(build_graph(&m, &spec), Err(Error::UnknownClass(42))));
    }

    #[test]
    fn interior_degree_is_2k() {
        let ps = generate_grid(1, 10, 1).unwrap();
        let m = classify(&ps).unwrap();
        let g = build_graph(&m, &forbid_squared_ints(&[1, 4])).unwrap();
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.degree(5), 4);
    }

    #[test]
    fn dimacs_round_trip() {
        let ps = generate_grid(2, 2, 1).unwrap();
        let m = classify(&ps).unwrap();
        let g = build_graph(&m, &forbid_squared_ints(&[1, 2])).unwrap();
        let text = g.to_dimacs();
        let back = DistanceGraph::from_dimacs(&text).unwrap();
        assert_eq!(back.vertex_count(), g.vertex_count());
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn dimacs_rejects_garbage() {
        assert!(DistanceGraph::from_dimacs("").is_err());
        assert!(DistanceGraph::from_dimacs("p edge 3 1\ne 1 4").is_err());
        assert!(DistanceGraph::from_dimacs("p edge 3 2\ne 1 2").is_err());
        assert!(DistanceGraph::from_dimacs("e 1 2\np edge 3 1").is_err());
        assert!(DistanceGraph::from_dimacs("p edge 2 1\ne 1 1").is_err());
    }
}
