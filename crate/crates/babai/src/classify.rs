//! Classification of point pairs by exact squared distance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{squared_distance, PointSet};
use crate::rational::Rational;

/// Diagonal sentinel: a point is not at any distance class from itself.
pub const SELF_CLASS: u32 = 0;

/// Symmetric matrix of distance-class IDs. IDs are 1-based and assigned in
/// increasing order of squared distance; the diagonal holds [`SELF_CLASS`].
/// `class_table` maps each ID to its squared distance and is absent for
/// externally supplied matrices (fixtures with irrational coordinates).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceClassMatrix {
    pub size: usize,
    pub classes: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_table: Option<BTreeMap<u32, Rational>>,
}

impl DistanceClassMatrix {
    /// Builds a matrix directly from class IDs; used by combinatorial fixtures.
    pub fn from_classes(classes: Vec<Vec<u32>>) -> Result<Self> {
        let m = DistanceClassMatrix {
            size: classes.len(),
            classes,
            class_table: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.classes.len() != self.size {
            return Err(Error::Parse("matrix row count != size".into()));
        }
        for (i, row) in self.classes.iter().enumerate() {
            if row.len() != self.size {
                return Err(Error::Parse(format!("row {i} has wrong length")));
            }
            if row[i] != SELF_CLASS {
                return Err(Error::Parse(format!("diagonal entry {i} is not the sentinel")));
            }
            for j in 0..self.size {
                if i != j && row[j] == SELF_CLASS {
                    return Err(Error::Parse(format!(
                        "off-diagonal sentinel at ({i},{j})"
                    )));
                }
                if self.classes[j][i] != row[j] {
                    return Err(Error::Parse(format!("asymmetry at ({i},{j})")));
                }
            }
        }
        if let Some(table) = &self.class_table {
            for row in &self.classes {
                for &c in row {
                    if c != SELF_CLASS && !table.contains_key(&c) {
                        return Err(Error::UnknownClass(c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn class_of(&self, i: usize, j: usize) -> u32 {
        self.classes[i][j]
    }

    /// Distinct class IDs realized off the diagonal, ascending.
    pub fn realized_classes(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self
            .classes
            .iter()
            .flatten()
            .copied()
            .filter(|&c| c != SELF_CLASS)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn class_count(&self) -> usize {
        self.realized_classes().len()
    }

    /// Number of unordered pairs in each class.
    pub fn class_frequencies(&self) -> BTreeMap<u32, usize> {
        let mut freq = BTreeMap::new();
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                *freq.entry(self.classes[i][j]).or_insert(0) += 1;
            }
        }
        freq
    }

    /// Resolves a squared distance to its class ID, if realized.
    pub fn class_for_squared(&self, sq: &Rational) -> Option<u32> {
        self.class_table
            .as_ref()
            .and_then(|t| t.iter().find(|(_, v)| *v == sq).map(|(k, _)| *k))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: DistanceClassMatrix = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }
}

/// Partitions the N(N-1)/2 point pairs by exact squared distance, with class
/// IDs numbered 1..t in increasing order of squared distance.
pub fn classify(ps: &PointSet) -> Result<DistanceClassMatrix> {
    let n = ps.len();
    if n == 0 {
        return Err(Error::Precondition("point set is empty".into()));
    }
    let mut distances: Vec<Rational> = Vec::new();
    let mut pair_dist: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            if i == j {
                row.push(Rational::zero());
            } else if j < i {
                row.push(pair_dist[j][i].clone());
            } else {
                let d = squared_distance(&ps.points[i], &ps.points[j])?;
                distances.push(d.clone());
                row.push(d);
            }
        }
        pair_dist.push(row);
    }
    distances.sort();
    distances.dedup();
    let table: BTreeMap<u32, Rational> = distances
        .iter()
        .enumerate()
        .map(|(k, d)| ((k + 1) as u32, d.clone()))
        .collect();
    let id_of = |d: &Rational| -> u32 {
        (distances.binary_search(d).expect("distance present") + 1) as u32
    };
    let classes: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { SELF_CLASS } else { id_of(&pair_dist[i][j]) })
                .collect()
        })
        .collect();
    Ok(DistanceClassMatrix {
        size: n,
        classes,
        class_table: Some(table),
    })
}
