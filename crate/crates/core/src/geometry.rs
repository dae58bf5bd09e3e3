//! Exact Euclidean computations on finite point sets.
//!
//! Coordinates are [`Scalar`]s sharing a single radicand. Each column may carry
//! a positive rational weight `w`: a stored entry `x` stands for the literal
//! coordinate `x·√w`, so inner products pick up a factor `w` per column and
//! stay inside the same quadratic field.

use std::collections::HashMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::Perm;
use crate::scalar::{parse_rational, Rational, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("point set needs at least one point and one coordinate")]
    Empty,
    #[error("row {row} has {found} coordinates, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("column weight {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("expected {expected} column weights, found {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("coordinate at ({row}, {col}) uses sqrt({found}) but the point set radicand is {expected}")]
    Radicand { row: usize, col: usize, expected: u64, found: u64 },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("instance file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type ScalarMatrix = Vec<Vec<Scalar>>;

/// `k` exact points in `R^n` with per-column weights.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    name: String,
    radicand: u64,
    column_weights: Vec<Rational>,
    points: Vec<Vec<Scalar>>,
    declared_dimension: Option<usize>,
}

/// Barycenter and, when every point is equidistant from it, the squared radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Circumsphere {
    pub center: Vec<Scalar>,
    pub radius_sq: Option<Scalar>,
    pub equidistant: bool,
}

impl PointSet {
    pub fn new(points: Vec<Vec<Scalar>>) -> Result<Self, GeometryError> {
        let n = points.first().map(Vec::len).unwrap_or(0);
        Self::with_weights(points, vec![Rational::from_integer(1.into()); n])
    }

    pub fn with_weights(points: Vec<Vec<Scalar>>, column_weights: Vec<Rational>) -> Result<Self, GeometryError> {
        let n = points.first().map(Vec::len).unwrap_or(0);
        if points.is_empty() || n == 0 {
            return Err(GeometryError::Empty);
        }
        if column_weights.len() != n {
            return Err(GeometryError::WeightCount { expected: n, found: column_weights.len() });
        }
        if let Some(c) = column_weights.iter().position(|w| !w.is_positive()) {
            return Err(GeometryError::NonPositiveWeight(c));
        }
        let mut radicand = 0u64;
        for (row, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(GeometryError::Ragged { row, expected: n, found: p.len() });
            }
            for (col, x) in p.iter().enumerate() {
                let d = x.radicand();
                if d == 0 {
                    continue;
                }
                if radicand == 0 {
                    radicand = d;
                } else if d != radicand {
                    return Err(GeometryError::Radicand { row, col, expected: radicand, found: d });
                }
            }
        }
        Ok(PointSet { name: String::new(), radicand, column_weights, points, declared_dimension: None })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_declared_dimension(mut self, n: usize) -> Self {
        self.declared_dimension = Some(n);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn column_weights(&self) -> &[Rational] {
        &self.column_weights
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Scalar] {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.column_weights.len()
    }

    pub fn declared_dimension(&self) -> Option<usize> {
        self.declared_dimension
    }

    /// Weighted inner product `Σ w_c·x_c·y_c`.
    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        x.iter()
            .zip(y)
            .zip(&self.column_weights)
            .map(|((a, b), w)| a * b * Scalar::from_rational(w.clone()))
            .sum()
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> Scalar {
        let diff: Vec<Scalar> = self.points[i].iter().zip(&self.points[j]).map(|(a, b)| a - b).collect();
        self.inner(&diff, &diff)
    }

    pub fn barycenter(&self) -> Vec<Scalar> {
        let k = Scalar::from_int(self.points.len() as i64);
        let inv = k.checked_inv().expect("non-empty point set");
        (0..self.ambient_dimension())
            .map(|c| self.points.iter().map(|p| p[c].clone()).sum::<Scalar>() * &inv)
            .collect()
    }

    /// Position vectors relative to the barycenter.
    pub fn centered(&self) -> Vec<Vec<Scalar>> {
        let c = self.barycenter();
        self.points.iter().map(|p| p.iter().zip(&c).map(|(x, y)| x - y).collect()).collect()
    }

    /// Index of the point equal to `x`, if any.
    pub fn index_of(&self, x: &[Scalar]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == x)
    }
}

/// Exact squared distance matrix; symmetric with zero diagonal.
pub fn squared_distances(ps: &PointSet) -> ScalarMatrix {
    let k = ps.len();
    let mut m = vec![vec![Scalar::zero(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let d = ps.squared_distance(i, j);
            m[j][i] = d.clone();
            m[i][j] = d;
        }
    }
    m
}

pub fn circumsphere_check(ps: &PointSet) -> Circumsphere {
    let center = ps.barycenter();
    let radii: Vec<Scalar> = ps
        .points()
        .iter()
        .map(|p| {
            let v: Vec<Scalar> = p.iter().zip(&center).map(|(x, c)| x - c).collect();
            ps.inner(&v, &v)
        })
        .collect();
    let equidistant = radii.iter().all(|r| r == &radii[0]);
    Circumsphere { center, radius_sq: equidistant.then(|| radii[0].clone()), equidistant }
}

/// Rank of a matrix over the quadratic field, by exact Gaussian elimination.
pub fn matrix_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = m.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].checked_inv().expect("pivot is non-zero");
        let pivot_row: Vec<Scalar> = m[rank].iter().map(|x| x * &inv).collect();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let v = &m[r][c] - &(&f * &pivot_row[c]);
                    m[r][c] = v;
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Dimension of the affine hull. Column weights rescale columns by non-zero
/// factors and so do not affect the rank.
pub fn affine_rank(ps: &PointSet) -> usize {
    let first = ps.point(0);
    let diffs: Vec<Vec<Scalar>> =
        ps.points()[1..].iter().map(|p| p.iter().zip(first).map(|(x, y)| x - y).collect()).collect();
    matrix_rank(&diffs)
}

/// The involution `i ↦ j` with `x_j = 2·barycenter − x_i`, if every point has a mirror image.
pub fn central_symmetry(ps: &PointSet) -> Option<Perm> {
    let c = ps.barycenter();
    let lookup: HashMap<&[Scalar], usize> = ps.points().iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let two = Scalar::from_int(2);
    let images: Option<Vec<usize>> = ps
        .points()
        .iter()
        .map(|p| {
            let mirror: Vec<Scalar> = p.iter().zip(&c).map(|(x, ci)| &(&two * ci) - x).collect();
            lookup.get(mirror.as_slice()).copied()
        })
        .collect();
    Perm::from_images(images?).ok()
}

/// On-disk form of a [`PointSet`]; every number is in scalar text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default)]
    pub name: String,
    pub radicand: u64,
    pub column_weights: Vec<String>,
    pub points: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_dimension: Option<usize>,
}

impl InstanceFile {
    pub fn from_point_set(ps: &PointSet) -> Self {
        InstanceFile {
            name: ps.name.clone(),
            radicand: ps.radicand,
            column_weights: ps.column_weights.iter().map(ToString::to_string).collect(),
            points: ps.points.clone(),
            declared_dimension: ps.declared_dimension,
        }
    }

    pub fn into_point_set(self) -> Result<PointSet, GeometryError> {
        let weights = self.column_weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>, _>>()?;
        let mut ps = PointSet::with_weights(self.points, weights)?.named(self.name);
        if ps.radicand != 0 && self.radicand != ps.radicand {
            return Err(GeometryError::Radicand { row: 0, col: 0, expected: self.radicand, found: ps.radicand });
        }
        ps.radicand = self.radicand;
        ps.declared_dimension = self.declared_dimension;
        Ok(ps)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance file serializes");
        s.push('\n');
        s
    }
}

pub fn read_instance(text: &str) -> Result<PointSet, GeometryError> {
    serde_json::from_str::<InstanceFile>(text)?.into_point_set()
}

pub fn write_instance(ps: &PointSet) -> String {
    InstanceFile::from_point_set(ps).to_json()
}
