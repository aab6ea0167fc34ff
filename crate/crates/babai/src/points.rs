//! Points with rational coordinates and finite point sets.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default cap on point-set size; override with env var `BABAI_MAX_POINTS`.
pub const DEFAULT_MAX_POINTS: usize = 20_000;

pub fn max_points() -> usize {
    std::env::var("BABAI_MAX_POINTS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_POINTS)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    pub coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point {
            coords: coords.iter().map(|&c| Rational::from_int(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn translate(&self, t: &Point) -> Result<Point> {
        if self.dim() != t.dim() {
            return Err(Error::DimensionMismatch(self.dim(), t.dim()));
        }
        Ok(Point::new(
            self.coords
                .iter()
                .zip(&t.coords)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

/// Sum over i of (p_i - q_i)^2; exact, non-negative, zero iff p = q.
pub fn squared_distance(p: &Point, q: &Point) -> Result<Rational> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    let mut acc = Rational::zero();
    for (a, b) in p.coords.iter().zip(&q.coords) {
        let d = a - b;
        acc = acc + d.square();
    }
    Ok(acc)
}

/// An immutable finite set of points of one dimension; transforms return new sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSet {
    pub dimension: usize,
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Point>) -> Result<Self> {
        let ps = PointSet {
            dimension,
            points,
            labels: None,
        };
        ps.validate()?;
        Ok(ps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.len() > max_points() {
            return Err(Error::SizeCap(self.points.len(), max_points()));
        }
        let mut seen = HashSet::new();
        for (i, p) in self.points.iter().enumerate() {
            if p.dim() != self.dimension {
                return Err(Error::DimensionMismatch(p.dim(), self.dimension));
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.points.len() {
                return Err(Error::Parse("label count != point count".into()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Every coordinate multiplied by `lambda` > 0; squared distances scale by lambda^2.
    pub fn scale(&self, lambda: &Rational) -> Result<PointSet> {
        if !lambda.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        Ok(PointSet {
            dimension: self.dimension,
            points: self
                .points
                .iter()
                .map(|p| Point::new(p.coords.iter().map(|c| c * lambda).collect()))
                .collect(),
            labels: self.labels.clone(),
        })
    }

    pub fn translate(&self, t: &Point) -> Result<PointSet> {
        let points = self
            .points
            .iter()
            .map(|p| p.translate(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSet {
            dimension: self.dimension,
            points,
            labels: self.labels.clone(),
        })
    }

    /// Keeps only the points at the given indices (order preserved).
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|ls| indices.iter().map(|&i| ls[i].clone()).collect());
        let ps = PointSet {
            dimension: self.dimension,
            points,
            labels,
        };
        ps.validate()?;
        Ok(ps)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pointset serializes")
    }

    pub fn from_json(s: &str) -> Result<PointSet> {
        let ps: PointSet = serde_json::from_str(s)?;
        ps.validate()?;
        Ok(ps)
    }
}

/// Finite window of (1/d)Z^n: all points (i_1/d, ..., i_n/d) with 0 <= i_j <= side.
pub fn generate_grid(dimension: usize, side: u64, denominator: u64) -> Result<PointSet> {
    if dimension < 1 {
        return Err(Error::Precondition("dimension must be >= 1".into()));
    }
    if denominator < 1 {
        return Err(Error::Precondition("denominator must be >= 1".into()));
    }
    let per_axis = side + 1;
    let mut count: u128 = 1;
    for _ in 0..dimension {
        count = count.saturating_mul(per_axis as u128);
        if count > max_points() as u128 {
            return Err(Error::SizeCap(usize::MAX, max_points()));
        }
    }
    let den = Rational::from_int(denominator as i64);
    let mut points = Vec::with_capacity(count as usize);
    let mut idx = vec![0u64; dimension];
    loop {
        points.push(Point::new(
            idx.iter()
                .map(|&i| &Rational::from_int(i as i64) / &den)
                .collect(),
        ));
        // odometer increment, last coordinate fastest
        let mut j = dimension;
        loop {
            if j == 0 {
                return PointSet::new(dimension, points);
            }
            j -= 1;
            if idx[j] < side {
                idx[j] += 1;
                break;
            }
            idx[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squared_distance_examples() {
        let d = squared_distance(&Point::from_ints(&[0, 0]), &Point::from_ints(&[1, 1])).unwrap();
        assert_eq!(d, Rational::from_int(2));
        let d = squared_distance(
            &Point::from_ints(&[0, 0, 0]),
            &Point::from_ints(&[1, 1, 0]),
        )
        .unwrap();
        assert_eq!(d, Rational::from_int(2));
        let p = Point::new(vec![Rational::ratio(1, 2), Rational::zero()]);
        let q = Point::new(vec![Rational::zero(), Rational::ratio(1, 2)]);
        assert_eq!(squared_distance(&p, &q).unwrap(), Rational::ratio(1, 2));
    }

    #[test]
    fn squared_distance_dimension_mismatch() {
        let e = squared_distance(&Point::from_ints(&[0]), &Point::from_ints(&[0, 0]));
        assert!(e.is_err());
    }

    #[test]
    fn grid_shapes() {
        let g = generate_grid(1, 3, 1).unwrap();
        assert_eq!(g.len(), 4);
        let g = generate_grid(2, 1, 1).unwrap();
        assert_eq!(g.len(), 4);
        let g = generate_grid(2, 2, 2).unwrap();
        assert_eq!(g.len(), 9);
        assert!(g
            .points
            .iter()
            .any(|p| p.coords == vec![Rational::ratio(1, 2), Rational::ratio(1, 2)]));
    }

    #[test]
    fn scale_examples() {
        let ps = PointSet::new(
            1,
            vec![Point::from_ints(&[0]), Point::from_ints(&[1])],
        )
        .unwrap();
        let scaled = ps.scale(&Rational::from_int(3)).unwrap();
        assert_eq!(scaled.points[1], Point::from_ints(&[3]));
        assert!(ps.scale(&Rational::from_int(-1)).is_err());
        assert!(ps.scale(&Rational::zero()).is_err());

        let tri = PointSet::new(
            2,
            vec![
                Point::from_ints(&[0, 0]),
                Point::from_ints(&[1, 0]),
                Point::from_ints(&[0, 1]),
            ],
        )
        .unwrap();
        let half = tri.scale(&Rational::ratio(1, 2)).unwrap();
        let d01 = squared_distance(&half.points[0], &half.points[1]).unwrap();
        let d12 = squared_distance(&half.points[1], &half.points[2]).unwrap();
        assert_eq!(d01, Rational::ratio(1, 4));
        assert_eq!(d12, Rational::ratio(1, 2));
    }

    #[test]
    fn duplicate_rejected() {
        let e = PointSet::new(
            1,
            vec![Point::from_ints(&[2]), Point::from_ints(&[2])],
        );
        assert!(matches!(e, Err(Error::DuplicatePoint(1))));
    }

    #[test]
    fn json_round_trip() {
        let ps = generate_grid(2, 1, 2).unwrap();
        let back = PointSet::from_json(&ps.to_json()).unwrap();
        assert_eq!(back.points, ps.points);
    }

    #[test]
    fn json_rejects_bad_rational() {
        let s = r#"{"dimension": 1, "points": [["2/4"]]}"#;
        assert!(PointSet::from_json(s).is_err());
        let s = r#"{"dimension": 1, "points": [["1/0"]]}"#;
        assert!(PointSet::from_json(s).is_err());
    }
}
