//! Labeled distance matrices: the combinatorial form every homogeneity check consumes.
//!
//! Label 0 is the diagonal. Labels `1..=L` index the distinct off-diagonal
//! values in increasing order, so label 1 is always the minimal distance.

use std::cmp::Ordering;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{matrix_rank, ScalarMatrix};
use crate::permgroup::Perm;
use crate::scalar::{Scalar, ScalarError};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const SEPARATION_FACTOR: f64 = 100.0;

#[derive(Debug, Error)]
pub enum DistmatError {
    #[error("matrix is empty")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, found: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is not zero")]
    NonZeroDiagonal(usize),
    #[error("entry ({0}, {1}) is negative")]
    Negative(usize, usize),
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("ambiguous clustering: separation certificate {certificate:.3e} is below {SEPARATION_FACTOR}")]
    AmbiguousClustering { certificate: f64 },
    #[error("{0} distance classes exceed the label range")]
    TooManyClasses(usize),
    #[error("label {label} at ({row}, {col}) has no class value")]
    UnknownLabel { row: usize, col: usize, label: u16 },
    #[error("class values are not strictly increasing at label {0}")]
    UnorderedClasses(usize),
    #[error("label {0} is never used")]
    UnusedLabel(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad number {0:?}")]
    BadFloat(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Squared distance of one class, exact when the source was exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassValue {
    Exact(Scalar),
    Approx { value: f64, uncertainty: f64 },
}

impl ClassValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ClassValue::Exact(s) => s.to_f64(),
            ClassValue::Approx { value, .. } => *value,
        }
    }

    pub fn as_exact(&self) -> Option<&Scalar> {
        match self {
            ClassValue::Exact(s) => Some(s),
            ClassValue::Approx { .. } => None,
        }
    }

    fn strictly_below(&self, other: &ClassValue) -> bool {
        match (self, other) {
            (ClassValue::Exact(a), ClassValue::Exact(b)) => a.cmp_exact(b).map(|o| o == Ordering::Less).unwrap_or(false),
            _ => self.to_f64() < other.to_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledDistanceMatrix {
    k: usize,
    labels: Vec<u16>,
    /// Index 0 holds the zero class.
    class_values: Vec<ClassValue>,
    /// Unordered pairs per label; index 0 is always 0.
    class_counts: Vec<usize>,
    dimension_hint: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<f64>,
}

/// Shells around one point, in ascending label order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpherePartition {
    pub center: usize,
    pub shells: Vec<(u16, Vec<usize>)>,
}

impl SpherePartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.shells.iter().map(|(_, s)| s.len()).collect()
    }
}

impl LabeledDistanceMatrix {
    /// Builds from an explicit label matrix. `class_values[l - 1]` is the value of label `l`.
    pub fn from_labels(rows: Vec<Vec<u16>>, class_values: Vec<ClassValue>) -> Result<Self, DistmatError> {
        let k = rows.len();
        if k == 0 {
            return Err(DistmatError::Empty);
        }
        let nclasses = class_values.len();
        let mut labels = Vec::with_capacity(k * k);
        let mut class_counts = vec![0usize; nclasses + 1];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(DistmatError::NotSquare { row: i, expected: k, found: row.len() });
            }
            for (j, &l) in row.iter().enumerate() {
                if i == j {
                    if l != 0 {
                        return Err(DistmatError::NonZeroDiagonal(i));
                    }
                } else {
                    if l == 0 {
                        return Err(DistmatError::Coincident(i, j));
                    }
                    if rows[j][i] != l {
                        return Err(DistmatError::NotSymmetric(i, j));
                    }
                    if l as usize > nclasses {
                        return Err(DistmatError::UnknownLabel { row: i, col: j, label: l });
                    }
                    if i < j {
                        class_counts[l as usize] += 1;
                    }
                }
                labels.push(l);
            }
        }
        for l in 1..=nclasses {
            if class_counts[l] == 0 {
                return Err(DistmatError::UnusedLabel(l));
            }
            if l > 1 && !class_values[l - 2].strictly_below(&class_values[l - 1]) {
                return Err(DistmatError::UnorderedClasses(l));
            }
        }
        let mut values = Vec::with_capacity(nclasses + 1);
        values.push(ClassValue::Exact(Scalar::zero()));
        values.extend(class_values);
        Ok(LabeledDistanceMatrix { k, labels, class_values: values, class_counts, dimension_hint: None, certificate: None })
    }

    pub fn with_dimension_hint(mut self, n: Option<usize>) -> Self {
        self.dimension_hint = n;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self, i: usize, j: usize) -> u16 {
        self.labels[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.labels[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> Vec<Vec<u16>> {
        (0..self.k).map(|i| self.row(i).to_vec()).collect()
    }

    /// Number of nonzero labels.
    pub fn num_classes(&self) -> usize {
        self.class_values.len() - 1
    }

    pub fn class_value(&self, label: u16) -> &ClassValue {
        &self.class_values[label as usize]
    }

    /// Values of labels `1..=L`.
    pub fn class_values(&self) -> &[ClassValue] {
        &self.class_values[1..]
    }

    /// Pair counts of labels `1..=L`.
    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts[1..]
    }

    pub fn dimension_hint(&self) -> Option<usize> {
        self.dimension_hint
    }

    pub fn certificate(&self) -> Option<f64> {
        self.certificate
    }

    pub fn is_exact(&self) -> bool {
        self.class_values.iter().all(|v| v.as_exact().is_some())
    }

    /// Label vector from each point of `tuple` to `x`.
    pub fn profile_to(&self, tuple: &[usize], x: usize) -> Vec<u16> {
        tuple.iter().map(|&t| self.label(t, x)).collect()
    }

    /// Ordered pairwise labels of a tuple; equal profiles mean the tuples are isometric.
    pub fn tuple_profile(&self, tuple: &[usize]) -> Vec<u16> {
        let mut p = Vec::with_capacity(tuple.len() * tuple.len());
        for &a in tuple {
            for &b in tuple {
                p.push(self.label(a, b));
            }
        }
        p
    }

    pub fn is_automorphism(&self, p: &Perm) -> bool {
        p.degree() == self.k
            && (0..self.k).all(|i| (i + 1..self.k).all(|j| self.label(p.apply(i), p.apply(j)) == self.label(i, j)))
    }

    /// The matrix relabeled so that point `i` becomes point `p(i)`.
    pub fn permuted(&self, p: &Perm) -> Self {
        let mut labels = vec![0u16; self.k * self.k];
        for i in 0..self.k {
            for j in 0..self.k {
                labels[p.apply(i) * self.k + p.apply(j)] = self.label(i, j);
            }
        }
        LabeledDistanceMatrix { labels, ..self.clone() }
    }

    /// Same structure with approximate values, as label_float would produce.
    pub fn to_float_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.k).map(|i| self.row(i).iter().map(|&l| self.class_value(l).to_f64()).collect()).collect()
    }
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize, DistmatError> {
    let k = m.len();
    if k == 0 {
        return Err(DistmatError::Empty);
    }
    for (row, r) in m.iter().enumerate() {
        if r.len() != k {
            return Err(DistmatError::NotSquare { row, expected: k, found: r.len() });
        }
    }
    Ok(k)
}

/// Labels by exact equality, ordered by exact sign comparison.
pub fn label_exact(m: &ScalarMatrix) -> Result<LabeledDistanceMatrix, DistmatError> {
    let k = check_square(m)?;
    let mut values: Vec<Scalar> = Vec::new();
    for i in 0..k {
        if !m[i][i].is_zero() {
            return Err(DistmatError::NonZeroDiagonal(i));
        }
        for j in i + 1..k {
            if m[i][j] != m[j][i] {
                return Err(DistmatError::NotSymmetric(i, j));
            }
            match m[i][j].signum() {
                0 => return Err(DistmatError::Coincident(i, j)),
                s if s < 0 => return Err(DistmatError::Negative(i, j)),
                _ => {}
            }
            if !values.contains(&m[i][j]) {
                values.push(m[i][j].clone());
            }
        }
    }
    let mut err = None;
    values.sort_by(|a, b| {
        a.cmp_exact(b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    if values.len() > u16::MAX as usize {
        return Err(DistmatError::TooManyClasses(values.len()));
    }
    let rows = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { 0 } else { values.iter().position(|v| v == &m[i][j]).unwrap() as u16 + 1 })
                .collect()
        })
        .collect();
    LabeledDistanceMatrix::from_labels(rows, values.into_iter().map(ClassValue::Exact).collect())
}

/// Single-linkage clustering of off-diagonal values, normalized so the largest is 1.
///
/// Fails unless the smallest gap between clusters is at least
/// [`SEPARATION_FACTOR`] times the widest cluster.
pub fn label_float(m: &[Vec<f64>], tol: f64) -> Result<LabeledDistanceMatrix, DistmatError> {
    let k = check_square(m)?;
    let scale = m.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
    for i in 0..k {
        if scale > 0.0 && m[i][i].abs() / scale > tol {
            return Err(DistmatError::NonZeroDiagonal(i));
        }
        for j in i + 1..k {
            if !m[i][j].is_finite() || !m[j][i].is_finite() {
                return Err(DistmatError::BadFloat(format!("{}", m[i][j])));
            }
            if (m[i][j] - m[j][i]).abs() / scale > tol {
                return Err(DistmatError::NotSymmetric(i, j));
            }
            if m[i][j] < 0.0 {
                return Err(DistmatError::Negative(i, j));
            }
            if m[i][j] / scale <= tol {
                return Err(DistmatError::Coincident(i, j));
            }
        }
    }
    if k == 1 {
        let mut ldm = LabeledDistanceMatrix::from_labels(vec![vec![0]], vec![])?;
        ldm.certificate = Some(f64::INFINITY);
        return Ok(ldm);
    }

    let mut entries: Vec<(f64, usize, usize)> = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            entries.push(((m[i][j] + m[j][i]) / (2.0 * scale), i, j));
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));

    // cluster boundaries: start index of each cluster in `entries`
    let mut starts = vec![0usize];
    for w in 1..entries.len() {
        if entries[w].0 - entries[w - 1].0 > tol {
            starts.push(w);
        }
    }
    if starts.len() > u16::MAX as usize {
        return Err(DistmatError::TooManyClasses(starts.len()));
    }
    let ends: Vec<usize> = starts[1..].iter().copied().chain([entries.len()]).collect();
    let spread = starts.iter().zip(&ends).map(|(&s, &e)| entries[e - 1].0 - entries[s].0).fold(0.0, f64::max);
    let gap = starts[1..].iter().map(|&s| entries[s].0 - entries[s - 1].0).fold(f64::INFINITY, f64::min);
    let certificate = if spread == 0.0 { f64::INFINITY } else { gap / spread };
    if certificate < SEPARATION_FACTOR {
        return Err(DistmatError::AmbiguousClustering { certificate });
    }

    let mut rows = vec![vec![0u16; k]; k];
    let mut values = Vec::with_capacity(starts.len());
    for (c, (&s, &e)) in starts.iter().zip(&ends).enumerate() {
        let members = &entries[s..e];
        let mean = members.iter().map(|x| x.0).sum::<f64>() / members.len() as f64;
        let half_width = (members[members.len() - 1].0 - members[0].0) / 2.0;
        values.push(ClassValue::Approx { value: mean * scale, uncertainty: (half_width + tol) * scale });
        for &(_, i, j) in members {
            rows[i][j] = c as u16 + 1;
            rows[j][i] = c as u16 + 1;
        }
    }
    let mut ldm = LabeledDistanceMatrix::from_labels(rows, values)?;
    ldm.certificate = Some(certificate);
    Ok(ldm)
}

pub fn sphere_partition(ldm: &LabeledDistanceMatrix, v: usize) -> SpherePartition {
    let mut shells: Vec<(u16, Vec<usize>)> = (1..=ldm.num_classes() as u16).map(|l| (l, Vec::new())).collect();
    for (x, &l) in ldm.row(v).iter().enumerate() {
        if x != v {
            shells[l as usize - 1].1.push(x);
        }
    }
    shells.retain(|(_, s)| !s.is_empty());
    SpherePartition { center: v, shells }
}

/// Rank of the Gram matrix `G_ij = (D_0i + D_0j − D_ij)/2` built from squared
/// class values; this is the affine dimension of any Euclidean realization.
/// Exact when every class value is exact.
pub fn gram_rank(ldm: &LabeledDistanceMatrix) -> usize {
    let k = ldm.k();
    if k == 1 {
        return 0;
    }
    if ldm.is_exact() {
        let d = |i: usize, j: usize| ldm.class_value(ldm.label(i, j)).as_exact().unwrap().clone();
        let half = Scalar::from_rational(crate::scalar::rational(1, 2));
        let g: Vec<Vec<Scalar>> = (1..k)
            .map(|i| (1..k).map(|j| &(&(&d(0, i) + &d(0, j)) - &d(i, j)) * &half).collect())
            .collect();
        return matrix_rank(&g);
    }
    let d = |i: usize, j: usize| ldm.class_value(ldm.label(i, j)).to_f64();
    let mut g: Vec<Vec<f64>> = (1..k).map(|i| (1..k).map(|j| (d(0, i) + d(0, j) - d(i, j)) / 2.0).collect()).collect();
    float_rank(&mut g, 1e-7)
}

fn float_rank(m: &mut [Vec<f64>], rel_tol: f64) -> usize {
    let scale = m.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
    if scale == 0.0 {
        return 0;
    }
    let n = m.len();
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else { break };
        if m[p][col].abs() <= rel_tol * scale {
            continue;
        }
        m.swap(rank, p);
        for r in rank + 1..n {
            let f = m[r][col] / m[rank][col];
            for c in col..ncols {
                m[r][c] -= f * m[rank][c];
            }
        }
        rank += 1;
    }
    rank
}

/// JSON distance-matrix file. Entries are squared distances in scalar text form.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<Scalar>>),
    Full {
        #[serde(default)]
        #[allow(dead_code)]
        name: Option<String>,
        #[serde(default)]
        dimension_hint: Option<usize>,
        squared_distances: Vec<Vec<Scalar>>,
    },
}

pub fn read_matrix_json(text: &str) -> Result<LabeledDistanceMatrix, DistmatError> {
    let (m, hint) = match serde_json::from_str::<MatrixFile>(text)? {
        MatrixFile::Bare(m) => (m, None),
        MatrixFile::Full { dimension_hint, squared_distances, .. } => (squared_distances, dimension_hint),
    };
    Ok(label_exact(&m)?.with_dimension_hint(hint))
}

/// CSV of floats without a header row; entries are squared distances.
pub fn read_matrix_csv<R: Read>(reader: R) -> Result<Vec<Vec<f64>>, DistmatError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| DistmatError::BadFloat(f.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{squared_distances, PointSet};

    fn cube3() -> PointSet {
        let mut rows = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    rows.push(vec![Scalar::from_int(x), Scalar::from_int(y), Scalar::from_int(z)]);
                }
            }
        }
        PointSet::new(rows).unwrap()
    }

    fn square() -> LabeledDistanceMatrix {
        let m: Vec<Vec<Scalar>> = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        label_exact(&m).unwrap()
    }

    #[test]
    fn exact_square() {
        let ldm = square();
        assert_eq!(ldm.num_classes(), 2);
        assert_eq!(ldm.class_counts(), &[4, 2]);
        assert_eq!(ldm.label(0, 2), 2);
        assert_eq!(sphere_partition(&ldm, 0).sizes(), vec![2, 1]);
        assert_eq!(gram_rank(&ldm), 2);
    }

    #[test]
    fn cube_exact_and_float_agree() {
        let ps = cube3();
        let exact = label_exact(&squared_distances(&ps)).unwrap();
        assert_eq!(exact.num_classes(), 3);
        let float = label_float(&exact.to_float_matrix(), DEFAULT_TOL).unwrap();
        assert_eq!(float.rows(), exact.rows());
        assert_eq!(gram_rank(&exact), 3);
        assert_eq!(gram_rank(&float), 3);
    }

    #[test]
    fn near_duplicate_values_cluster() {
        let m = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0 + 1e-12], vec![2.0, 1.0 + 1e-12, 0.0]];
        let ldm = label_float(&m, 1e-9).unwrap();
        assert_eq!(ldm.num_classes(), 2);
        assert_eq!(ldm.label(0, 1), ldm.label(1, 2));
        assert!(ldm.certificate().unwrap() >= SEPARATION_FACTOR);
    }

    #[test]
    fn ambiguous_clustering_is_reported() {
        // a, b, c link into one cluster of width 8e-10; d sits only ~9e-9 above it
        let a = 1.0;
        let b = 1.0 + 4e-10;
        let c = 1.0 + 8e-10;
        let d = 1.0 + 1e-8;
        let m = vec![
            vec![0.0, a, b, 2.0],
            vec![a, 0.0, c, d],
            vec![b, c, 0.0, 2.0],
            vec![2.0, d, 2.0, 0.0],
        ];
        assert!(matches!(label_float(&m, 1e-9), Err(DistmatError::AmbiguousClustering { .. })));
    }

    #[test]
    fn validation_errors() {
        let z = Scalar::zero;
        let one = Scalar::one;
        assert!(matches!(label_exact(&vec![vec![z(), one()], vec![Scalar::from_int(2), z()]]), Err(DistmatError::NotSymmetric(0, 1))));
        assert!(matches!(label_exact(&vec![vec![one()]]), Err(DistmatError::NonZeroDiagonal(0))));
        assert!(matches!(label_exact(&vec![vec![z(), z()], vec![z(), z()]]), Err(DistmatError::Coincident(0, 1))));
        assert!(matches!(
            LabeledDistanceMatrix::from_labels(vec![vec![0, 2], vec![2, 0]], vec![ClassValue::Exact(one())]),
            Err(DistmatError::UnknownLabel { .. })
        ));
    }

    #[test]
    fn permutation_and_automorphism() {
        let ldm = square();
        let rot = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert!(ldm.is_automorphism(&rot));
        let swap = Perm::transposition(4, 0, 1);
        assert!(!ldm.is_automorphism(&swap));
        assert_eq!(ldm.permuted(&rot), ldm);
        let moved = ldm.permuted(&swap);
        assert_eq!(moved.label(1, 3), ldm.label(0, 3));
    }

    #[test]
    fn matrix_files() {
        let ldm = read_matrix_json(r#"{"name": "seg", "dimension_hint": 1, "squared_distances": [["0", "1/4"], ["1/4", "0"]]}"#).unwrap();
        assert_eq!(ldm.dimension_hint(), Some(1));
        assert_eq!(ldm.num_classes(), 1);
        let bare = read_matrix_json(r#"[["0", "3"], ["3", "0"]]"#).unwrap();
        assert_eq!(bare.dimension_hint(), None);
        let rows = read_matrix_csv("0, 1, 1\n1, 0, 1\n1, 1, 0\n".as_bytes()).unwrap();
        assert_eq!(label_float(&rows, DEFAULT_TOL).unwrap().num_classes(), 1);
        assert!(read_matrix_csv("0, x\n".as_bytes()).is_err());
    }
}
