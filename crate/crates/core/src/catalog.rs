//! Generators for the polytopes and abstract metrics analyzed by the tool.
//!
//! Most families produce an exact [`PointSet`]. Prisms, antiprisms and
//! polygons need cosines of `2π/n`, so they produce a [`LabeledDistanceMatrix`]
//! whose labels come from the combinatorics of index differences.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::distmat::{label_float, ClassValue, LabeledDistanceMatrix, DEFAULT_TOL};
use crate::geometry::{squared_distances, PointSet};
use crate::scalar::{parse_rational, rational, Rational, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: unknown parameter {param:?}")]
    UnknownParam { family: String, param: String },
    #[error("{family}: bad value {value:?} for {param}")]
    BadValue { family: String, param: String, value: String },
    #[error("{family}: {constraint}")]
    Constraint { family: String, constraint: String },
}

/// Lateral edge of a prism or antiprism: an explicit squared length, or equal to the base edge.
#[derive(Clone, Debug, PartialEq)]
pub enum Lateral {
    Squared(Rational),
    Edge,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Simplex { n: usize },
    Cube { n: usize },
    Orthoplex { n: usize },
    Demihypercube { n: usize },
    TruncatedSimplex { n: usize },
    DoubledSimplex { n: usize },
    Tetrahedron,
    Cube3,
    Octahedron,
    Icosahedron,
    Dodecahedron,
    Cuboctahedron,
    Icosidodecahedron,
    Goss6,
    Goss7,
    Rhombus { alpha: Rational },
    Rectangle { a: Rational, b: Rational },
    Simplex3Edge { a: Rational, b: Rational, c: Rational },
    Cell24,
    Cell600,
    Cell120,
    Prism { n: usize, lateral: Lateral },
    Antiprism { n: usize, lateral: Lateral },
    NGon { n: usize },
    Octsev { alpha: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedDegree {
    Finite(usize),
    Infinite,
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedOrder {
    Exact(#[serde(serialize_with = "crate::catalog::biguint_str")] BigUint),
    AtLeast(#[serde(serialize_with = "crate::catalog::biguint_str")] BigUint),
}

pub(crate) fn biguint_str<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Golden values for tests and the `table` command.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExpectedFacts {
    pub vertex_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<ExpectedDegree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<ExpectedOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shells: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_classes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_sq: Option<Scalar>,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Points(PointSet),
    Matrix(LabeledDistanceMatrix),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub family: Family,
    pub name: String,
    pub instance: Instance,
    pub declared_dimension: Option<usize>,
    pub expected: ExpectedFacts,
    /// The minimal distance class is the edge length of the solid by construction.
    pub edge_is_minimal: bool,
    /// Exact coordinates for an abstract metric, when they exist in a single quadratic field.
    pub realization: Option<PointSet>,
}

impl CatalogEntry {
    pub fn point_set(&self) -> Option<&PointSet> {
        match &self.instance {
            Instance::Points(ps) => Some(ps),
            Instance::Matrix(_) => self.realization.as_ref(),
        }
    }

    pub fn k(&self) -> usize {
        match &self.instance {
            Instance::Points(ps) => ps.len(),
            Instance::Matrix(m) => m.k(),
        }
    }
}

/// One row of `catalog list`.
pub struct FamilyInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub vertices: &'static str,
    pub expensive: bool,
}

pub const FAMILIES: &[FamilyInfo] = &[
    FamilyInfo { name: "simplex", params: "n>=1 (default 3)", vertices: "n+1", expensive: false },
    FamilyInfo { name: "cube", params: "n>=1 (default 3)", vertices: "2^n", expensive: false },
    FamilyInfo { name: "orthoplex", params: "n>=1 (default 3)", vertices: "2n", expensive: false },
    FamilyInfo { name: "demihypercube", params: "n>=2 (default 4)", vertices: "2^(n-1)", expensive: false },
    FamilyInfo { name: "truncated_simplex", params: "n>=1 (default 4)", vertices: "n(n+1)/2", expensive: false },
    FamilyInfo { name: "doubled_simplex", params: "n>=2 (default 3)", vertices: "2(n+1)", expensive: false },
    FamilyInfo { name: "tetrahedron", params: "-", vertices: "4", expensive: false },
    FamilyInfo { name: "cube3", params: "-", vertices: "8", expensive: false },
    FamilyInfo { name: "octahedron", params: "-", vertices: "6", expensive: false },
    FamilyInfo { name: "icosahedron", params: "-", vertices: "12", expensive: false },
    FamilyInfo { name: "dodecahedron", params: "-", vertices: "20", expensive: false },
    FamilyInfo { name: "cuboctahedron", params: "-", vertices: "12", expensive: false },
    FamilyInfo { name: "icosidodecahedron", params: "-", vertices: "30", expensive: false },
    FamilyInfo { name: "goss6", params: "-", vertices: "27", expensive: false },
    FamilyInfo { name: "goss7", params: "-", vertices: "56", expensive: false },
    FamilyInfo { name: "rhombus", params: "alpha>0 (default 1/2)", vertices: "4", expensive: false },
    FamilyInfo { name: "rectangle", params: "a>0, b>0 (default 1, 2)", vertices: "4", expensive: false },
    FamilyInfo {
        name: "simplex_3edge",
        params: "0<a<b<c, c^2<a^2+b^2 (default 3, 4, 24/5)",
        vertices: "4",
        expensive: false,
    },
    FamilyInfo { name: "24cell", params: "-", vertices: "24", expensive: false },
    FamilyInfo { name: "600cell", params: "-", vertices: "120", expensive: true },
    FamilyInfo { name: "120cell", params: "-", vertices: "600", expensive: true },
    FamilyInfo { name: "prism", params: "n>=3, lateral2=<rational>|edge (default 4, 9)", vertices: "2n", expensive: false },
    FamilyInfo {
        name: "antiprism",
        params: "n>=3, lateral2=<rational>|edge (default 4, 9)",
        vertices: "2n",
        expensive: false,
    },
    FamilyInfo { name: "n_gon", params: "n>=3 (default 5)", vertices: "n", expensive: false },
    FamilyInfo { name: "octsev", params: "0<alpha<1 (default 1/3)", vertices: "6", expensive: false },
];

impl Family {
    pub fn family_name(&self) -> &'static str {
        match self {
            Family::Simplex { .. } => "simplex",
            Family::Cube { .. } => "cube",
            Family::Orthoplex { .. } => "orthoplex",
            Family::Demihypercube { .. } => "demihypercube",
            Family::TruncatedSimplex { .. } => "truncated_simplex",
            Family::DoubledSimplex { .. } => "doubled_simplex",
            Family::Tetrahedron => "tetrahedron",
            Family::Cube3 => "cube3",
            Family::Octahedron => "octahedron",
            Family::Icosahedron => "icosahedron",
            Family::Dodecahedron => "dodecahedron",
            Family::Cuboctahedron => "cuboctahedron",
            Family::Icosidodecahedron => "icosidodecahedron",
            Family::Goss6 => "goss6",
            Family::Goss7 => "goss7",
            Family::Rhombus { .. } => "rhombus",
            Family::Rectangle { .. } => "rectangle",
            Family::Simplex3Edge { .. } => "simplex_3edge",
            Family::Cell24 => "24cell",
            Family::Cell600 => "600cell",
            Family::Cell120 => "120cell",
            Family::Prism { .. } => "prism",
            Family::Antiprism { .. } => "antiprism",
            Family::NGon { .. } => "n_gon",
            Family::Octsev { .. } => "octsev",
        }
    }

    pub fn is_expensive(&self) -> bool {
        matches!(self, Family::Cell600 | Family::Cell120)
    }

    pub fn generate(&self) -> Result<CatalogEntry, ParamError> {
        generate(self)
    }
}

impl fmt::Display for Lateral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lateral::Squared(r) => write!(f, "{r}"),
            Lateral::Edge => f.write_str("edge"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.family_name();
        match self {
            Family::Simplex { n }
            | Family::Cube { n }
            | Family::Orthoplex { n }
            | Family::Demihypercube { n }
            | Family::TruncatedSimplex { n }
            | Family::DoubledSimplex { n }
            | Family::NGon { n } => write!(f, "{name}:n={n}"),
            Family::Rhombus { alpha } | Family::Octsev { alpha } => write!(f, "{name}:alpha={alpha}"),
            Family::Rectangle { a, b } => write!(f, "{name}:a={a},b={b}"),
            Family::Simplex3Edge { a, b, c } => write!(f, "{name}:a={a},b={b},c={c}"),
            Family::Prism { n, lateral } | Family::Antiprism { n, lateral } => {
                write!(f, "{name}:n={n},lateral2={lateral}")
            }
            _ => f.write_str(name),
        }
    }
}

struct Params<'a> {
    family: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn bad(&self, param: &str, value: &str) -> ParamError {
        ParamError::BadValue { family: self.family.into(), param: param.into(), value: value.into() }
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        let i = self.pairs.iter().position(|(k, _)| *k == key)?;
        Some(self.pairs.remove(i).1)
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize, ParamError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| self.bad(key, v)),
        }
    }

    fn rational(&mut self, key: &str, default: Rational) -> Result<Rational, ParamError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => parse_rational(v).map_err(|_| self.bad(key, v)),
        }
    }

    fn lateral(&mut self) -> Result<Lateral, ParamError> {
        match self.take("lateral2") {
            None => Ok(Lateral::Squared(rational(9, 1))),
            Some("edge") => Ok(Lateral::Edge),
            Some(v) => parse_rational(v).map(Lateral::Squared).map_err(|_| self.bad("lateral2", v)),
        }
    }

    fn finish(self) -> Result<(), ParamError> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) => Err(ParamError::UnknownParam { family: self.family.into(), param: (*k).into() }),
        }
    }
}

impl FromStr for Family {
    type Err = ParamError;

    /// `name` or `name:key=value,key=value`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut pairs = Vec::new();
        for kv in rest.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| ParamError::BadValue {
                family: name.into(),
                param: kv.into(),
                value: String::new(),
            })?;
            pairs.push((k.trim(), v.trim()));
        }
        let mut p = Params { family: name, pairs };
        let fam = match name {
            "simplex" => Family::Simplex { n: p.usize("n", 3)? },
            "cube" => Family::Cube { n: p.usize("n", 3)? },
            "orthoplex" => Family::Orthoplex { n: p.usize("n", 3)? },
            "demihypercube" => Family::Demihypercube { n: p.usize("n", 4)? },
            "truncated_simplex" => Family::TruncatedSimplex { n: p.usize("n", 4)? },
            "doubled_simplex" => Family::DoubledSimplex { n: p.usize("n", 3)? },
            "tetrahedron" => Family::Tetrahedron,
            "cube3" => Family::Cube3,
            "octahedron" => Family::Octahedron,
            "icosahedron" => Family::Icosahedron,
            "dodecahedron" => Family::Dodecahedron,
            "cuboctahedron" => Family::Cuboctahedron,
            "icosidodecahedron" => Family::Icosidodecahedron,
            "goss6" => Family::Goss6,
            "goss7" => Family::Goss7,
            "rhombus" => Family::Rhombus { alpha: p.rational("alpha", rational(1, 2))? },
            "rectangle" => Family::Rectangle { a: p.rational("a", rational(1, 1))?, b: p.rational("b", rational(2, 1))? },
            "simplex_3edge" => Family::Simplex3Edge {
                a: p.rational("a", rational(3, 1))?,
                b: p.rational("b", rational(4, 1))?,
                c: p.rational("c", rational(24, 5))?,
            },
            "24cell" => Family::Cell24,
            "600cell" => Family::Cell600,
            "120cell" => Family::Cell120,
            "prism" => Family::Prism { n: p.usize("n", 4)?, lateral: p.lateral()? },
            "antiprism" => Family::Antiprism { n: p.usize("n", 4)?, lateral: p.lateral()? },
            "n_gon" => Family::NGon { n: p.usize("n", 5)? },
            "octsev" => Family::Octsev { alpha: p.rational("alpha", rational(1, 3))? },
            other => return Err(ParamError::UnknownFamily(other.into())),
        };
        p.finish()?;
        Ok(fam)
    }
}

fn constraint(f: &Family, msg: impl Into<String>) -> ParamError {
    ParamError::Constraint { family: f.family_name().into(), constraint: msg.into() }
}

fn need_n(f: &Family, n: usize, min: usize) -> Result<(), ParamError> {
    if n < min {
        Err(constraint(f, format!("n must be at least {min}")))
    } else {
        Ok(())
    }
}

fn int_row(r: &[i64]) -> Vec<Scalar> {
    r.iter().map(|&x| Scalar::from_int(x)).collect()
}

fn int_points(rows: Vec<Vec<i64>>) -> PointSet {
    PointSet::new(rows.iter().map(|r| int_row(r)).collect()).expect("catalog rows are rectangular")
}

fn weighted_points(rows: Vec<Vec<i64>>, weights: Vec<Rational>) -> PointSet {
    PointSet::with_weights(rows.iter().map(|r| int_row(r)).collect(), weights).expect("catalog rows are rectangular")
}

/// All `2^n` sign vectors, first coordinate varying slowest.
fn sign_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..1usize << n).map(|mask| (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 }).collect()).collect()
}

/// All distinct orderings of a multiset, in lexicographic order.
fn distinct_permutations<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut cur: Vec<T> = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[i] < cur[j]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn is_even_permutation(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Even permutations of the positions of `base`, each with all sign choices on non-zero entries.
fn even_perms_with_signs(base: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = base.len();
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for perm in distinct_permutations(&(0..n).collect::<Vec<_>>()) {
        if !is_even_permutation(&perm) {
            continue;
        }
        let permuted: Vec<Scalar> = perm.iter().map(|&i| base[i].clone()).collect();
        for signs in sign_vectors(n) {
            let v: Vec<Scalar> =
                permuted.iter().zip(&signs).map(|(x, &s)| if s < 0 { -x.clone() } else { x.clone() }).collect();
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Distinct orderings of `base` combined with all sign choices.
fn all_perms_with_signs(base: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = base.len();
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for perm in distinct_permutations(&(0..n).collect::<Vec<_>>()) {
        let permuted: Vec<Scalar> = perm.iter().map(|&i| base[i].clone()).collect();
        for signs in sign_vectors(n) {
            let v: Vec<Scalar> =
                permuted.iter().zip(&signs).map(|(x, &s)| if s < 0 { -x.clone() } else { x.clone() }).collect();
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn exact_order(n: impl Into<BigUint>) -> Option<ExpectedOrder> {
    Some(ExpectedOrder::Exact(n.into()))
}

fn hyperoctahedral(n: usize) -> BigUint {
    (BigUint::one() << n) * factorial(n)
}

fn phi() -> Scalar {
    Scalar::golden_ratio()
}

fn icosahedron_points() -> Vec<Vec<Scalar>> {
    let (z, one, p) = (Scalar::zero(), Scalar::one(), phi());
    let mut out = Vec::new();
    for s1 in [1, -1] {
        for s2 in [1, -1] {
            let a = &one * &Scalar::from_int(s1);
            let b = &p * &Scalar::from_int(s2);
            out.push(vec![z.clone(), a.clone(), b.clone()]);
            out.push(vec![a.clone(), b.clone(), z.clone()]);
            out.push(vec![b.clone(), z.clone(), a.clone()]);
        }
    }
    out
}

fn dodecahedron_points() -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = sign_vectors(3).iter().map(|r| int_row(r)).collect();
    let p = phi();
    let ip = &p - &Scalar::one();
    for s1 in [1, -1] {
        for s2 in [1, -1] {
            let a = &ip * &Scalar::from_int(s1);
            let b = &p * &Scalar::from_int(s2);
            let z = Scalar::zero();
            out.push(vec![z.clone(), a.clone(), b.clone()]);
            out.push(vec![a.clone(), b.clone(), z.clone()]);
            out.push(vec![b.clone(), z.clone(), a.clone()]);
        }
    }
    out
}

fn icosidodecahedron_points() -> Vec<Vec<Scalar>> {
    let ico = PointSet::new(icosahedron_points()).unwrap();
    let d = squared_distances(&ico);
    let edge = Scalar::from_int(4);
    let half = Scalar::from_rational(rational(1, 2));
    let mut out = Vec::new();
    for i in 0..ico.len() {
        for j in i + 1..ico.len() {
            if d[i][j] == edge {
                out.push(ico.point(i).iter().zip(ico.point(j)).map(|(x, y)| &(x + y) * &half).collect());
            }
        }
    }
    out
}

/// Goss_6 rows scaled so columns 1-5 carry `a = √2/4` and column 6 carries `b = √6/12`.
fn goss6_rows() -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0, 0, 0, 0, 0, 4], vec![1, 1, 1, 1, 1, 1]];
    for (p, q) in pairs(5) {
        let mut r = vec![1; 5];
        r[p] = -1;
        r[q] = -1;
        r.push(1);
        rows.push(r);
    }
    for plus in (0..5).rev() {
        let mut r = vec![-1; 5];
        r[plus] = 1;
        r.push(1);
        rows.push(r);
    }
    for sign in [2, -2] {
        for i in 0..5 {
            let mut r = vec![0; 6];
            r[i] = sign;
            r[5] = -2;
            rows.push(r);
        }
    }
    rows
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn goss_weights(cols: usize) -> Vec<Rational> {
    let mut w = vec![rational(1, 8); 5];
    w.push(rational(1, 24));
    if cols == 7 {
        w.push(rational(1, 12));
    }
    w
}

/// Goss_7 rows in the published order; column 7 carries `c = √3/6`.
fn goss7_rows() -> Vec<Vec<i64>> {
    let with = |mut r: Vec<i64>, last: i64| {
        r.push(last);
        r
    };
    let mut rows = vec![vec![0, 0, 0, 0, 0, 0, 3], vec![0, 0, 0, 0, 0, 4, 1], vec![1, 1, 1, 1, 1, 1, 1]];
    for (p, q) in pairs(5) {
        let mut r = vec![1; 5];
        r[p] = -1;
        r[q] = -1;
        rows.push(with(with(r, 1), 1));
    }
    for minus in (0..5).rev() {
        let mut r = vec![-1; 5];
        r[minus] = 1;
        rows.push(with(with(r, 1), 1));
    }
    for (x, y, z) in [(2, -2, 1), (-2, -2, 1), (-2, 2, -1), (2, 2, -1)] {
        for i in 0..5 {
            let mut r = vec![0; 5];
            r[i] = x;
            rows.push(with(with(r, y), z));
        }
    }
    for (p, q) in pairs(5) {
        let mut r = vec![-1; 5];
        r[p] = 1;
        r[q] = 1;
        rows.push(with(with(r, -1), -1));
    }
    for plus in (0..5).rev() {
        let mut r = vec![1; 5];
        r[plus] = -1;
        rows.push(with(with(r, -1), -1));
    }
    rows.push(vec![-1, -1, -1, -1, -1, -1, -1]);
    rows.push(vec![0, 0, 0, 0, 0, -4, -1]);
    rows.push(vec![0, 0, 0, 0, 0, 0, -3]);
    rows
}

fn cell600_points() -> Vec<Vec<Scalar>> {
    let half = Scalar::from_rational(rational(1, 2));
    let mut out = all_perms_with_signs(&int_row(&[1, 0, 0, 0]));
    out.extend(sign_vectors(4).iter().map(|s| s.iter().map(|&x| &half * &Scalar::from_int(x)).collect::<Vec<_>>()));
    let p = phi();
    let base = [&p * &half, half.clone(), &(&p - &Scalar::one()) * &half, Scalar::zero()];
    out.extend(even_perms_with_signs(&base));
    out
}

fn cell120_points() -> Vec<Vec<Scalar>> {
    let p = phi();
    let one = Scalar::one();
    let ip = &p - &one;
    let ip2 = &one - &ip;
    let p2 = &p + &one;
    let s5 = Scalar::sqrt(5);
    let two = Scalar::from_int(2);
    let z = Scalar::zero();
    let mut out = all_perms_with_signs(&[z.clone(), z.clone(), two.clone(), two.clone()]);
    for base in [
        [one.clone(), one.clone(), one.clone(), s5.clone()],
        [ip2.clone(), p.clone(), p.clone(), p.clone()],
        [ip.clone(), ip.clone(), ip.clone(), p2.clone()],
    ] {
        out.extend(all_perms_with_signs(&base));
    }
    for base in [[z.clone(), ip2, one.clone(), p2], [z, ip.clone(), p.clone(), s5], [ip, one, p, two]] {
        out.extend(even_perms_with_signs(&base));
    }
    out
}

fn points_entry(family: &Family, ps: PointSet, dim: usize, expected: ExpectedFacts, edge_is_minimal: bool) -> CatalogEntry {
    let name = family.to_string();
    CatalogEntry {
        family: family.clone(),
        name: name.clone(),
        instance: Instance::Points(ps.named(name).with_declared_dimension(dim)),
        declared_dimension: Some(dim),
        expected,
        edge_is_minimal,
        realization: None,
    }
}

fn facts(k: usize) -> ExpectedFacts {
    ExpectedFacts { vertex_count: k, ..Default::default() }
}

fn degree_infinite(k: usize) -> ExpectedFacts {
    ExpectedFacts { degree: Some(ExpectedDegree::Infinite), ..facts(k) }
}

/// Squared chord of the regular `n`-gon with circumradius 1 between vertices `j` steps apart.
fn chord2(n: usize, j: f64) -> f64 {
    2.0 - 2.0 * (PI * j / n as f64).cos()
}

fn approx(v: f64) -> ClassValue {
    ClassValue::Approx { value: v, uncertainty: 8.0 * f64::EPSILON * v.abs().max(1.0) }
}

fn ngon_matrix(n: usize) -> LabeledDistanceMatrix {
    let rows = (0..n).map(|i| (0..n).map(|j| ((i + n - j) % n).min((j + n - i) % n) as u16).collect()).collect();
    let values = (1..=n / 2).map(|j| approx(chord2(n, 2.0 * j as f64))).collect();
    LabeledDistanceMatrix::from_labels(rows, values).expect("polygon labels are consistent").with_dimension_hint(Some(2))
}

/// Points `0..n` form one base, `n..2n` the other. With `twist`, the second base is rotated by `π/n`.
fn prism_like(family: &Family, n: usize, lateral: &Lateral, twist: bool) -> Result<LabeledDistanceMatrix, ParamError> {
    let half_steps = if twist { 1.0 } else { 0.0 };
    let min_cross = chord2(n, half_steps);
    let lateral2 = match lateral {
        Lateral::Edge => chord2(n, 2.0),
        Lateral::Squared(r) => {
            if !r.is_positive() {
                return Err(constraint(family, "lateral2 must be positive"));
            }
            num_traits::ToPrimitive::to_f64(r).unwrap()
        }
    };
    if lateral2 <= min_cross {
        return Err(constraint(family, "lateral edge too short for the bases"));
    }
    let h2 = lateral2 - min_cross;
    // index distance in half-steps of π/n around the axis
    let half_step_diff = |i: usize, j: usize| -> usize {
        let (a, b) = (2 * (i % n) + if twist && i >= n { 1 } else { 0 }, 2 * (j % n) + if twist && j >= n { 1 } else { 0 });
        let d = (a + 2 * n - b) % (2 * n);
        d.min(2 * n - d)
    };
    let exact_regime = matches!(lateral, Lateral::Squared(r) if *r > rational(4, 1));
    let base_classes = n / 2;
    let k = 2 * n;
    if exact_regime {
        // every cross distance exceeds the base diameter, so classes order by index difference
        let mut cross_steps: Vec<usize> = Vec::new();
        for j in n..k {
            let s = half_step_diff(0, j);
            if !cross_steps.contains(&s) {
                cross_steps.push(s);
            }
        }
        cross_steps.sort();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            0
                        } else if (i < n) == (j < n) {
                            (half_step_diff(i, j) / 2) as u16
                        } else {
                            let s = half_step_diff(i, j);
                            (base_classes + 1 + cross_steps.iter().position(|&c| c == s).unwrap()) as u16
                        }
                    })
                    .collect()
            })
            .collect();
        let mut values: Vec<ClassValue> = (1..=base_classes).map(|j| approx(chord2(n, 2.0 * j as f64))).collect();
        values.extend(cross_steps.iter().map(|&s| approx(h2 + chord2(n, s as f64))));
        return Ok(LabeledDistanceMatrix::from_labels(rows, values).expect("prism labels are consistent"));
    }
    let m: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        let c = chord2(n, half_step_diff(i, j) as f64);
                        if (i < n) == (j < n) {
                            c
                        } else {
                            h2 + c
                        }
                    }
                })
                .collect()
        })
        .collect();
    label_float(&m, DEFAULT_TOL).map_err(|e| constraint(family, format!("class values not separable: {e}")))
}

fn octsev_matrix(alpha: &Rational) -> LabeledDistanceMatrix {
    // A, B, C, D, E, F with antipodal pairs (A,B), (C,D), (E,F)
    let (a, b, c, d, e, f) = (0usize, 1usize, 2usize, 3usize, 4usize, 5usize);
    let short = [(a, c), (a, e), (b, d), (b, f), (c, e), (d, f)];
    let diam = [(a, b), (c, d), (e, f)];
    let mut rows = vec![vec![2u16; 6]; 6];
    for i in 0..6 {
        rows[i][i] = 0;
    }
    for &(x, y) in &short {
        rows[x][y] = 1;
        rows[y][x] = 1;
    }
    for &(x, y) in &diam {
        rows[x][y] = 3;
        rows[y][x] = 3;
    }
    let two = rational(2, 1);
    let values = vec![
        ClassValue::Exact(Scalar::from_rational(&two - &two * alpha)),
        ClassValue::Exact(Scalar::from_rational(&two + &two * alpha)),
        ClassValue::Exact(Scalar::from_int(4)),
    ];
    LabeledDistanceMatrix::from_labels(rows, values).expect("octsev labels are consistent").with_dimension_hint(Some(3))
}

/// Rational `β > 0` with `β(2+β)/(1+2β²) = α`, when one exists.
pub fn octsev_beta(alpha: &Rational) -> Option<Rational> {
    // β²(1 − 2α) + 2β − α = 0
    let one = Rational::one();
    let two = rational(2, 1);
    let qa = &one - &two * alpha;
    if qa.is_zero() {
        return Some(alpha / &two);
    }
    let disc = Scalar::from_rational(&one + alpha * &qa);
    let root = disc.rational_sqrt()?;
    [(-&one + &root) / &qa, (-&one - &root) / &qa].into_iter().find(|b| b.is_positive())
}

fn octsev_realization(alpha: &Rational) -> Option<PointSet> {
    let beta = octsev_beta(alpha)?;
    let one = Rational::one();
    let w = &one / (&one + rational(2, 1) * &beta * &beta);
    let b = Scalar::from_rational(beta);
    let o = Scalar::one();
    let rows = vec![
        vec![o.clone(), b.clone(), b.clone()],
        vec![b.clone(), o.clone(), b.clone()],
        vec![b.clone(), b.clone(), o.clone()],
    ];
    // A, -A, C, -C, E, -E
    let pts = rows.into_iter().flat_map(|r| [r.clone(), r.into_iter().map(|x| -x).collect()]).collect();
    PointSet::with_weights(pts, vec![w; 3]).ok()
}

pub fn generate(family: &Family) -> Result<CatalogEntry, ParamError> {
    use Family::*;
    let f = family;
    let entry = match f {
        Simplex { n } => {
            need_n(f, *n, 1)?;
            let rows = (0..=*n).map(|i| (0..=*n).map(|j| (i == j) as i64).collect()).collect();
            let exp = ExpectedFacts { group_order: exact_order(factorial(n + 1)), ..degree_infinite(n + 1) };
            points_entry(f, int_points(rows), *n, exp, false)
        }
        Cube { n } => {
            need_n(f, *n, 1)?;
            let degree = if *n >= 4 { ExpectedDegree::Finite(3) } else { ExpectedDegree::Infinite };
            let exp = ExpectedFacts {
                degree: Some(degree),
                group_order: exact_order(hyperoctahedral(*n)),
                ..facts(1 << n)
            };
            points_entry(f, int_points(sign_vectors(*n)), *n, exp, false)
        }
        Orthoplex { n } => {
            need_n(f, *n, 1)?;
            let mut rows = Vec::new();
            for i in 0..*n {
                for s in [1, -1] {
                    let mut r = vec![0; *n];
                    r[i] = s;
                    rows.push(r);
                }
            }
            let exp = ExpectedFacts { group_order: exact_order(hyperoctahedral(*n)), ..degree_infinite(2 * n) };
            points_entry(f, int_points(rows), *n, exp, false)
        }
        Demihypercube { n } => {
            need_n(f, *n, 2)?;
            let rows: Vec<Vec<i64>> =
                sign_vectors(*n).into_iter().filter(|r| r.iter().filter(|&&x| x < 0).count() % 2 == 0).collect();
            let degree = if *n >= 4 { ExpectedDegree::Finite(3) } else { ExpectedDegree::Infinite };
            let exp = ExpectedFacts { degree: Some(degree), ..facts(1 << (n - 1)) };
            points_entry(f, int_points(rows), *n, exp, false)
        }
        TruncatedSimplex { n } => {
            need_n(f, *n, 1)?;
            let rows: Vec<Vec<i64>> = pairs(n + 1)
                .into_iter()
                .map(|(i, j)| (0..=*n).map(|c| (c == i || c == j) as i64).collect())
                .collect();
            let k = rows.len();
            let (degree, order) = match n {
                1 => (ExpectedDegree::Infinite, BigUint::one()),
                2 => (ExpectedDegree::Infinite, BigUint::from(6u32)),
                3 => (ExpectedDegree::Infinite, BigUint::from(48u32)),
                _ => (ExpectedDegree::Finite(2), factorial(n + 1)),
            };
            let classes = match n {
                1 => 0,
                2 => 1,
                _ => 2,
            };
            let exp = ExpectedFacts {
                degree: Some(degree),
                group_order: exact_order(order),
                distance_classes: Some(classes),
                ..facts(k)
            };
            points_entry(f, int_points(rows), *n, exp, false)
        }
        DoubledSimplex { n } => {
            need_n(f, *n, 2)?;
            let m = *n as i64;
            let mut rows = Vec::new();
            for i in 0..=*n {
                let v: Vec<i64> = (0..=*n).map(|j| if j == i { m } else { -1 }).collect();
                rows.push(v.iter().map(|x| -x).collect());
                rows.push(v);
            }
            points_entry(f, int_points(rows), *n, degree_infinite(2 * (n + 1)), false)
        }
        Tetrahedron => {
            let rows = vec![vec![1, 1, 1], vec![1, -1, -1], vec![-1, 1, -1], vec![-1, -1, 1]];
            let exp = ExpectedFacts {
                group_order: exact_order(24u32),
                shells: Some(vec![3]),
                distance_classes: Some(1),
                ..degree_infinite(4)
            };
            points_entry(f, int_points(rows), 3, exp, true)
        }
        Cube3 => {
            let exp = ExpectedFacts {
                group_order: exact_order(48u32),
                shells: Some(vec![3, 3, 1]),
                distance_classes: Some(3),
                ..degree_infinite(8)
            };
            points_entry(f, int_points(sign_vectors(3)), 3, exp, true)
        }
        Octahedron => {
            let rows = vec![vec![1, 0, 0], vec![-1, 0, 0], vec![0, 1, 0], vec![0, -1, 0], vec![0, 0, 1], vec![0, 0, -1]];
            let exp = ExpectedFacts {
                group_order: exact_order(48u32),
                shells: Some(vec![4, 1]),
                distance_classes: Some(2),
                ..degree_infinite(6)
            };
            points_entry(f, int_points(rows), 3, exp, true)
        }
        Icosahedron => {
            let exp = ExpectedFacts {
                group_order: exact_order(120u32),
                shells: Some(vec![5, 5, 1]),
                distance_classes: Some(3),
                ..degree_infinite(12)
            };
            points_entry(f, PointSet::new(icosahedron_points()).unwrap(), 3, exp, true)
        }
        Dodecahedron => {
            let exp = ExpectedFacts {
                degree: Some(ExpectedDegree::Finite(2)),
                group_order: exact_order(120u32),
                shells: Some(vec![3, 6, 6, 3, 1]),
                distance_classes: Some(5),
                radius_sq: Some(Scalar::from_int(3)),
                ..facts(20)
            };
            points_entry(f, PointSet::new(dodecahedron_points()).unwrap(), 3, exp, true)
        }
        Cuboctahedron => {
            let rows = all_perms_with_signs(&int_row(&[1, 1, 0]));
            let exp = ExpectedFacts {
                group_order: exact_order(48u32),
                shells: Some(vec![4, 2, 4, 1]),
                distance_classes: Some(4),
                ..degree_infinite(12)
            };
            points_entry(f, PointSet::new(rows).unwrap(), 3, exp, true)
        }
        Icosidodecahedron => {
            let exp = ExpectedFacts {
                degree: Some(ExpectedDegree::Finite(1)),
                group_order: exact_order(120u32),
                ..facts(30)
            };
            points_entry(f, PointSet::new(icosidodecahedron_points()).unwrap(), 3, exp, true)
        }
        Goss6 => {
            let exp = ExpectedFacts {
                degree: Some(ExpectedDegree::AtLeast(2)),
                group_order: Some(ExpectedOrder::AtLeast(BigUint::from(27u32 * 1920))),
                shells: Some(vec![16, 10]),
                distance_classes: Some(2),
                radius_sq: Some(Scalar::from_rational(rational(2, 3))),
                ..facts(27)
            };
            points_entry(f, weighted_points(goss6_rows(), goss_weights(6)), 6, exp, false)
        }
        Goss7 => {
            let exp = ExpectedFacts {
                degree: Some(ExpectedDegree::AtLeast(3)),
                shells: Some(vec![27, 27, 1]),
                distance_classes: Some(3),
                radius_sq: Some(Scalar::from_rational(rational(3, 4))),
                ..facts(56)
            };
            points_entry(f, weighted_points(goss7_rows(), goss_weights(7)), 7, exp, false)
        }
        Rhombus { alpha } => {
            if !alpha.is_positive() {
                return Err(constraint(f, "alpha must be positive"));
            }
            let al = Scalar::from_rational(alpha.clone());
            let (z, one) = (Scalar::zero(), Scalar::one());
            let pts = vec![vec![-one.clone(), z.clone()], vec![one, z.clone()], vec![z.clone(), al.clone()], vec![z, -al]];
            let mut exp = facts(4);
            if !alpha.is_one() {
                exp.degree = Some(ExpectedDegree::Finite(0));
            }
            points_entry(f, PointSet::new(pts).unwrap(), 2, exp, false)
        }
        Rectangle { a, b } => {
            if !a.is_positive() || !b.is_positive() {
                return Err(constraint(f, "side lengths must be positive"));
            }
            let (sa, sb, z) = (Scalar::from_rational(a.clone()), Scalar::from_rational(b.clone()), Scalar::zero());
            let pts = vec![vec![z.clone(), z.clone()], vec![sa.clone(), z.clone()], vec![z, sb.clone()], vec![sa, sb]];
            points_entry(f, PointSet::new(pts).unwrap(), 2, degree_infinite(4), false)
        }
        Simplex3Edge { a, b, c } => {
            let zero = Rational::zero();
            if !(zero < *a && a < b && b < c) {
                return Err(constraint(f, "need 0 < a < b < c"));
            }
            let (a2, b2, c2) = (a * a, b * b, c * c);
            if c2 >= &a2 + &b2 {
                return Err(constraint(f, "need c^2 < a^2 + b^2"));
            }
            let eighth = rational(1, 8);
            let weights = vec![
                (&b2 + &c2 - &a2) * &eighth,
                (&a2 + &c2 - &b2) * &eighth,
                (&a2 + &b2 - &c2) * &eighth,
            ];
            let rows = vec![vec![1, 1, 1], vec![1, -1, -1], vec![-1, 1, -1], vec![-1, -1, 1]];
            points_entry(f, weighted_points(rows, weights), 3, degree_infinite(4), false)
        }
        Cell24 => {
            let rows: Vec<Vec<Scalar>> = all_perms_with_signs(&int_row(&[1, 1, 0, 0]));
            points_entry(f, PointSet::new(rows).unwrap(), 4, facts(24), false)
        }
        Cell600 => points_entry(f, PointSet::new(cell600_points()).unwrap(), 4, facts(120), false),
        Cell120 => points_entry(f, PointSet::new(cell120_points()).unwrap(), 4, facts(600), false),
        Prism { n, lateral } | Antiprism { n, lateral } => {
            need_n(f, *n, 3)?;
            let twist = matches!(f, Antiprism { .. });
            let ldm = prism_like(f, *n, lateral, twist)?.with_dimension_hint(Some(3));
            let mut exp = facts(2 * n);
            if matches!(lateral, Lateral::Squared(r) if *r > rational(4, 1)) {
                exp.degree = Some(ExpectedDegree::AtLeast(3));
            }
            matrix_entry(f, ldm, 3, exp, matches!(lateral, Lateral::Edge), None)
        }
        NGon { n } => {
            need_n(f, *n, 3)?;
            let exp = ExpectedFacts { group_order: exact_order(BigUint::from(2 * n)), ..degree_infinite(*n) };
            matrix_entry(f, ngon_matrix(*n), 2, exp, false, None)
        }
        Octsev { alpha } => {
            if !(alpha.is_positive() && *alpha < Rational::one()) {
                return Err(constraint(f, "need 0 < alpha < 1"));
            }
            let exp = ExpectedFacts { distance_classes: Some(3), ..degree_infinite(6) };
            let realization = octsev_realization(alpha).map(|ps| ps.named(f.to_string()).with_declared_dimension(3));
            matrix_entry(f, octsev_matrix(alpha), 3, exp, false, realization)
        }
    };
    Ok(entry)
}

fn matrix_entry(
    family: &Family,
    ldm: LabeledDistanceMatrix,
    dim: usize,
    expected: ExpectedFacts,
    edge_is_minimal: bool,
    realization: Option<PointSet>,
) -> CatalogEntry {
    CatalogEntry {
        family: family.clone(),
        name: family.to_string(),
        instance: Instance::Matrix(ldm),
        declared_dimension: Some(dim),
        expected,
        edge_is_minimal,
        realization,
    }
}

/// Every non-expensive family at its default parameters plus the parameter
/// points used by the acceptance table.
pub fn standard_instances() -> Vec<Family> {
    let mut out: Vec<Family> = Vec::new();
    let parse = |s: &str| s.parse::<Family>().expect("standard instance names parse");
    for s in [
        "tetrahedron",
        "cube3",
        "octahedron",
        "icosahedron",
        "dodecahedron",
        "cuboctahedron",
        "icosidodecahedron",
        "cube:n=4",
        "cube:n=5",
        "demihypercube:n=4",
        "demihypercube:n=5",
        "truncated_simplex:n=3",
        "truncated_simplex:n=4",
        "truncated_simplex:n=5",
        "orthoplex:n=3",
        "orthoplex:n=4",
        "doubled_simplex:n=2",
        "doubled_simplex:n=3",
        "simplex:n=3",
        "n_gon:n=5",
        "n_gon:n=7",
        "octsev:alpha=1/3",
        "octsev:alpha=1/2",
        "simplex_3edge",
        "rhombus",
        "rectangle",
        "prism:n=4,lateral2=9",
        "antiprism:n=4,lateral2=9",
        "prism:n=3,lateral2=edge",
        "prism:n=5,lateral2=edge",
        "prism:n=6,lateral2=edge",
        "antiprism:n=4,lateral2=edge",
        "antiprism:n=5,lateral2=edge",
        "antiprism:n=6,lateral2=edge",
        "goss6",
        "goss7",
        "24cell",
    ] {
        out.push(parse(s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distmat::{label_exact, sphere_partition};
    use crate::geometry::{affine_rank, central_symmetry, circumsphere_check};

    fn points(s: &str) -> PointSet {
        match s.parse::<Family>().unwrap().generate().unwrap().instance {
            Instance::Points(ps) => ps,
            Instance::Matrix(_) => panic!("{s} is abstract"),
        }
    }

    #[test]
    fn vertex_counts() {
        for (s, k) in [
            ("simplex:n=4", 5),
            ("cube:n=4", 16),
            ("orthoplex:n=5", 10),
            ("demihypercube:n=5", 16),
            ("truncated_simplex:n=3", 6),
            ("truncated_simplex:n=4", 10),
            ("doubled_simplex:n=3", 8),
            ("goss6", 27),
            ("goss7", 56),
            ("dodecahedron", 20),
            ("icosahedron", 12),
            ("cuboctahedron", 12),
            ("icosidodecahedron", 30),
            ("24cell", 24),
            ("600cell", 120),
            ("120cell", 600),
        ] {
            let e = s.parse::<Family>().unwrap().generate().unwrap();
            assert_eq!(e.k(), k, "{s}");
            assert_eq!(e.expected.vertex_count, k, "{s}");
        }
    }

    #[test]
    fn goss6_distances_from_first_vertex() {
        let ps = points("goss6");
        for i in 1..27 {
            let want = if i < 17 { Scalar::one() } else { Scalar::from_int(2) };
            assert_eq!(ps.squared_distance(0, i), want, "A{}", i + 1);
        }
        let c = circumsphere_check(&ps);
        assert_eq!(c.radius_sq, Some(Scalar::from_rational(rational(2, 3))));
        assert_eq!(affine_rank(&ps), 6);
    }

    #[test]
    fn goss7_layout() {
        let ps = points("goss7");
        for i in 1..56 {
            let want = match i {
                1..=27 => 1,
                28..=54 => 2,
                _ => 3,
            };
            assert_eq!(ps.squared_distance(0, i), Scalar::from_int(want), "B{}", i + 1);
        }
        let pairing = central_symmetry(&ps).unwrap();
        for i in 0..56 {
            let j = pairing.apply(i);
            let neg: Vec<Scalar> = ps.point(i).iter().map(|x| -x.clone()).collect();
            assert_eq!(ps.point(j), neg.as_slice());
        }
        for (i, j) in [(0, 55), (1, 54), (2, 53)] {
            assert_eq!(pairing.apply(i), j);
        }
        assert_eq!(circumsphere_check(&ps).radius_sq, Some(Scalar::from_rational(rational(3, 4))));
    }

    #[test]
    fn truncated_simplex_values() {
        let ps = points("truncated_simplex:n=4");
        let ldm = label_exact(&squared_distances(&ps)).unwrap();
        let vals: Vec<Scalar> = ldm.class_values().iter().map(|v| v.as_exact().unwrap().clone()).collect();
        assert_eq!(vals, vec![Scalar::from_int(2), Scalar::from_int(4)]);
        assert_eq!(affine_rank(&ps), 4);
    }

    #[test]
    fn dodecahedron_shells() {
        let ldm = label_exact(&squared_distances(&points("dodecahedron"))).unwrap();
        assert_eq!(ldm.num_classes(), 5);
        for v in 0..20 {
            assert_eq!(sphere_partition(&ldm, v).sizes(), vec![3, 6, 6, 3, 1]);
        }
    }

    #[test]
    fn doubled_simplex_small_cases() {
        let hex = label_exact(&squared_distances(&points("doubled_simplex:n=2"))).unwrap();
        assert_eq!(sphere_partition(&hex, 0).sizes(), vec![2, 2, 1]);
        let cube = label_exact(&squared_distances(&points("doubled_simplex:n=3"))).unwrap();
        assert_eq!(sphere_partition(&cube, 0).sizes(), vec![3, 3, 1]);
    }

    #[test]
    fn simplex_3edge_opposite_edges() {
        let ps = points("simplex_3edge");
        let d = squared_distances(&ps);
        assert_eq!(d[0][1], d[2][3]);
        assert_eq!(d[0][2], d[1][3]);
        assert_eq!(d[0][3], d[1][2]);
        let mut vals = vec![d[0][1].clone(), d[0][2].clone(), d[0][3].clone()];
        vals.sort_by(|a, b| a.cmp_exact(b).unwrap());
        let want: Vec<Scalar> = [rational(9, 1), rational(16, 1), rational(576, 25)].into_iter().map(Scalar::from_rational).collect();
        assert_eq!(vals, want);
    }

    #[test]
    fn octsev_pattern_and_realization() {
        let e = "octsev:alpha=1/2".parse::<Family>().unwrap().generate().unwrap();
        let Instance::Matrix(ldm) = &e.instance else { panic!() };
        assert_eq!(ldm.class_counts(), &[6, 6, 3]);
        let real = e.realization.as_ref().unwrap();
        assert_eq!(label_exact(&squared_distances(real)).unwrap().rows(), ldm.rows());
        assert_eq!(octsev_beta(&rational(1, 2)), Some(rational(1, 4)));
        assert_eq!(octsev_beta(&rational(1, 3)), None);
        let third = "octsev".parse::<Family>().unwrap().generate().unwrap();
        assert!(third.realization.is_none());
    }

    #[test]
    fn unit_edge_prisms_match_solids() {
        let cube = label_exact(&squared_distances(&points("cube3"))).unwrap();
        let e = "prism:n=4,lateral2=edge".parse::<Family>().unwrap().generate().unwrap();
        let Instance::Matrix(p4) = &e.instance else { panic!() };
        assert_eq!(p4.num_classes(), 3);
        assert_eq!(sphere_partition(p4, 0).sizes(), sphere_partition(&cube, 0).sizes());
        let e = "antiprism:n=3,lateral2=edge".parse::<Family>().unwrap().generate().unwrap();
        let Instance::Matrix(a3) = &e.instance else { panic!() };
        assert_eq!(sphere_partition(a3, 0).sizes(), vec![4, 1]);
    }

    #[test]
    fn prism_default_regime_orders_classes() {
        let e = "prism:n=5".parse::<Family>().unwrap().generate().unwrap();
        let Instance::Matrix(m) = &e.instance else { panic!() };
        // two base chords, then the lateral edge and two cross diagonals
        assert_eq!(m.num_classes(), 5);
        assert_eq!(m.label(0, 5), 3);
        let e = "antiprism:n=4".parse::<Family>().unwrap().generate().unwrap();
        let Instance::Matrix(m) = &e.instance else { panic!() };
        assert_eq!(m.num_classes(), 4);
        assert_eq!(sphere_partition(m, 0).sizes(), vec![2, 1, 2, 2]);
    }

    #[test]
    fn parsing() {
        assert_eq!("cube:n=5".parse::<Family>().unwrap(), Family::Cube { n: 5 });
        assert_eq!("prism".parse::<Family>().unwrap(), Family::Prism { n: 4, lateral: Lateral::Squared(rational(9, 1)) });
        let f: Family = "simplex_3edge:a=3,b=4,c=24/5".parse().unwrap();
        assert_eq!(f.to_string(), "simplex_3edge:a=3,b=4,c=24/5");
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        assert!(matches!("nope".parse::<Family>(), Err(ParamError::UnknownFamily(_))));
        assert!(matches!("cube:m=3".parse::<Family>(), Err(ParamError::UnknownParam { .. })));
        assert!(matches!("cube:n=x".parse::<Family>(), Err(ParamError::BadValue { .. })));
        assert!(matches!("prism:n=2".parse::<Family>().unwrap().generate(), Err(ParamError::Constraint { .. })));
        assert!(matches!("simplex_3edge:a=3,b=4,c=5".parse::<Family>().unwrap().generate(), Err(ParamError::Constraint { .. })));
        assert!(matches!("octsev:alpha=1".parse::<Family>().unwrap().generate(), Err(ParamError::Constraint { .. })));
    }

    #[test]
    fn declared_dimensions_match_rank() {
        for f in standard_instances() {
            let e = f.generate().unwrap();
            if let Some(ps) = e.point_set() {
                assert_eq!(Some(affine_rank(ps)), e.declared_dimension, "{}", e.name);
            }
        }
    }
}
