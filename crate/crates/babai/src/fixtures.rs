//! Named point configurations used as lower-bound witnesses.
//!
//! Configurations with irrational coordinates (regular polygons, the
//! icosahedron) ship as distance-class matrices derived from their
//! combinatorial structure; the icosahedron matrix is cross-checked against
//! numeric vertex coordinates at build time.

use crate::classify::{DistanceClassMatrix, SELF_CLASS};
use crate::error::{Error, Result};
use crate::points::{generate_grid, Point, PointSet};

#[derive(Clone, Debug)]
pub enum Fixture {
    Points(PointSet),
    Matrix(DistanceClassMatrix),
}

impl Fixture {
    pub fn size(&self) -> usize {
        match self {
            Fixture::Points(ps) => ps.len(),
            Fixture::Matrix(m) => m.size,
        }
    }
}

/// Builds a fixture by name. Accepted names: `line(k)`, `square`,
/// `hypercube(k)`, `johnson(n,k)`, `triangle_Z3`,
/// `regular_polygon_matrix(m)`, `icosahedron_matrix`.
pub fn fixture(name: &str) -> Result<Fixture> {
    let name = name.trim();
    let unknown = || Error::UnknownFixture(name.to_string());
    if let Some(args) = parse_call(name, "line") {
        let [k] = one_arg(&args).ok_or_else(unknown)?;
        return Ok(Fixture::Points(generate_grid(1, k, 1)?));
    }
    if name == "square" {
        return Ok(Fixture::Points(generate_grid(2, 1, 1)?));
    }
    if let Some(args) = parse_call(name, "hypercube") {
        let [k] = one_arg(&args).ok_or_else(unknown)?;
        if k == 0 {
            return Err(unknown());
        }
        return Ok(Fixture::Points(generate_grid(k as usize, 1, 1)?));
    }
    if let Some(args) = parse_call(name, "johnson") {
        if args.len() != 2 {
            return Err(unknown());
        }
        return Ok(Fixture::Points(johnson(args[0] as usize, args[1] as usize)?));
    }
    if name == "triangle_Z3" {
        let pts = vec![
            Point::from_ints(&[0, 0, 0]),
            Point::from_ints(&[1, 1, 0]),
            Point::from_ints(&[1, 0, 1]),
        ];
        return Ok(Fixture::Points(PointSet::new(3, pts)?));
    }
    if let Some(args) = parse_call(name, "regular_polygon_matrix") {
        let [m] = one_arg(&args).ok_or_else(unknown)?;
        return Ok(Fixture::Matrix(regular_polygon_matrix(m as usize)?));
    }
    if name == "icosahedron_matrix" {
        return Ok(Fixture::Matrix(icosahedron_matrix()));
    }
    Err(unknown())
}

fn parse_call(name: &str, head: &str) -> Option<Vec<u64>> {
    let rest = name.strip_prefix(head)?;
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    inner
        .split(',')
        .map(|s| s.trim().parse().ok())
        .collect()
}

fn one_arg(args: &[u64]) -> Option<[u64; 1]> {
    match args {
        [a] => Some([*a]),
        _ => None,
    }
}

/// Indicator vectors of all k-element subsets of an (n+1)-element set:
/// C(n+1, k) points in dimension n+1 realizing at most k distinct distances.
pub fn johnson(n: usize, k: usize) -> Result<PointSet> {
    let universe = n + 1;
    if k == 0 || k > universe {
        return Err(Error::Precondition(format!(
            "johnson({n},{k}): need 1 <= k <= n+1"
        )));
    }
    let mut points = Vec::new();
    for mask in 0u64..(1 << universe) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let coords: Vec<i64> = (0..universe).map(|i| (mask >> i & 1) as i64).collect();
        points.push(Point::from_ints(&coords));
    }
    PointSet::new(universe, points)
}

/// 2k+1-gon as a class matrix: the class of a vertex pair is the circular
/// index distance min(|i-j|, m-|i-j|), which orders chord lengths ascending.
pub fn regular_polygon_matrix(m: usize) -> Result<DistanceClassMatrix> {
    if m < 3 {
        return Err(Error::Precondition("polygon needs >= 3 vertices".into()));
    }
    let classes: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        SELF_CLASS
                    } else {
                        let d = i.abs_diff(j);
                        d.min(m - d) as u32
                    }
                })
                .collect()
        })
        .collect();
    DistanceClassMatrix::from_classes(classes)
}

/// Icosahedron vertex coordinates: cyclic permutations of (0, ±1, ±phi).
fn icosahedron_vertices() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut v = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-phi, phi] {
            v.push([0.0, s1, s2]);
            v.push([s1, s2, 0.0]);
            v.push([s2, 0.0, s1]);
        }
    }
    v
}

/// 12 points, 3 classes (edge, non-adjacent, antipodal), classified from the
/// numeric squared distances with tolerance 1e-9. The three numeric values are
/// well separated (4, 2+2*phi^2... spaced by more than 2), so the tolerance is
/// not delicate.
pub fn icosahedron_matrix() -> DistanceClassMatrix {
    let verts = icosahedron_vertices();
    let n = verts.len();
    let sq = |a: &[f64; 3], b: &[f64; 3]| -> f64 {
        (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
    };
    let mut values: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = sq(&verts[i], &verts[j]);
            if !values.iter().any(|v| (v - d).abs() < 1e-9) {
                values.push(d);
            }
        }
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(values.len(), 3, "icosahedron must realize exactly 3 distances");
    let classes: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        SELF_CLASS
                    } else {
                        let d = sq(&verts[i], &verts[j]);
                        let c = values
                            .iter()
                            .position(|v| (v - d).abs() < 1e-9)
                            .expect("distance matches a class");
                        (c + 1) as u32
                    }
                })
                .collect()
        })
        .collect();
    DistanceClassMatrix::from_classes(classes).expect("icosahedron matrix is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::points::squared_distance;
    use crate::rational::Rational;

    #[test]
    fn triangle_z3_equilateral() {
        let Fixture::Points(ps) = fixture("triangle_Z3").unwrap() else {
            panic!()
        };
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = squared_distance(&ps.points[i], &ps.points[j]).unwrap();
                assert_eq!(d, Rational::from_int(2));
            }
        }
    }

    #[test]
    fn hypercube_shape() {
        for k in 1..=4usize {
            let Fixture::Points(ps) = fixture(&format!("hypercube({k})")).unwrap() else {
                panic!()
            };
            assert_eq!(ps.len(), 1 << k);
            assert_eq!(classify(&ps).unwrap().class_count(), k);
        }
    }

    #[test]
    fn johnson_shape() {
        let Fixture::Points(ps) = fixture("johnson(3,2)").unwrap() else {
            panic!()
        };
        assert_eq!(ps.len(), 6);
        let m = classify(&ps).unwrap();
        assert_eq!(m.class_count(), 2);
        let table = m.class_table.unwrap();
        assert_eq!(table[&1], Rational::from_int(2));
        assert_eq!(table[&2], Rational::from_int(4));
    }

    #[test]
    fn polygon_shape() {
        for k in 1..=4usize {
            let m = regular_polygon_matrix(2 * k + 1).unwrap();
            assert_eq!(m.size, 2 * k + 1);
            assert_eq!(m.class_count(), k);
        }
        let pentagon = regular_polygon_matrix(5).unwrap();
        assert_eq!(pentagon.class_count(), 2);
    }

    #[test]
    fn icosahedron_shape() {
        let m = icosahedron_matrix();
        assert_eq!(m.size, 12);
        assert_eq!(m.class_count(), 3);
        // each vertex: 5 edges, 5 second-class, 1 antipode
        for i in 0..12 {
            let mut counts = [0usize; 3];
            for j in 0..12 {
                if i != j {
                    counts[(m.class_of(i, j) - 1) as usize] += 1;
                }
            }
            assert_eq!(counts, [5, 5, 1]);
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(fixture("dodecahedron").is_err());
        assert!(fixture("line(x)").is_err());
        assert!(fixture("johnson(3)").is_err());
    }
}
