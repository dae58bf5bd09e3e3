#![allow(dead_code)]

use homdeg::autgroup::automorphism_group;
use homdeg::catalog::{CatalogEntry, Family, Instance};
use homdeg::distmat::{label_exact, LabeledDistanceMatrix};
use homdeg::geometry::{squared_distances, PointSet};
use homdeg::homogeneity::resolve_dimension;
use homdeg::permgroup::PermGroup;
use homdeg::scalar::Scalar;

pub struct Case {
    pub entry: CatalogEntry,
    pub ldm: LabeledDistanceMatrix,
    pub g: PermGroup,
    pub ps: Option<PointSet>,
    pub n: usize,
}

pub fn case(s: &str) -> Case {
    case_of(&s.parse::<Family>().unwrap_or_else(|e| panic!("{s}: {e}")))
}

pub fn case_of(f: &Family) -> Case {
    let entry = f.generate().unwrap_or_else(|e| panic!("{f}: {e}"));
    let ldm = match &entry.instance {
        Instance::Points(ps) => label_exact(&squared_distances(ps)).unwrap(),
        Instance::Matrix(m) => m.clone(),
    };
    let g = automorphism_group(&ldm);
    let ps = entry.point_set().cloned();
    let n = resolve_dimension(&ldm, ps.as_ref(), entry.declared_dimension);
    Case { entry, ldm, g, ps, n }
}

/// Index of the point with these integer coordinates.
pub fn point(ps: &PointSet, coords: &[i64]) -> usize {
    let x: Vec<Scalar> = coords.iter().map(|&c| Scalar::from_int(c)).collect();
    ps.index_of(&x).unwrap_or_else(|| panic!("no point {coords:?}"))
}

/// Catalog instances with at most 12 points, over a spread of parameters.
pub fn small_instances() -> Vec<Family> {
    let mut v: Vec<Family> = homdeg::catalog::standard_instances()
        .into_iter()
        .filter(|f| f.generate().is_ok_and(|e| e.k() <= 12))
        .collect();
    for s in [
        "simplex:n=1",
        "simplex:n=2",
        "simplex:n=5",
        "cube:n=1",
        "cube:n=2",
        "orthoplex:n=5",
        "orthoplex:n=6",
        "demihypercube:n=3",
        "truncated_simplex:n=2",
        "doubled_simplex:n=4",
        "doubled_simplex:n=5",
        "n_gon:n=3",
        "n_gon:n=4",
        "n_gon:n=6",
        "n_gon:n=8",
        "n_gon:n=12",
        "rhombus:alpha=1",
        "rhombus:alpha=2",
        "rectangle:a=1,b=1",
        "rectangle:a=2,b=3",
        "simplex_3edge:a=4,b=5,c=6",
        "simplex_3edge:a=3,b=4,c=9/2",
        "octsev:alpha=1/5",
        "octsev:alpha=3/4",
        "prism:n=3,lateral2=9",
        "prism:n=5,lateral2=9",
        "prism:n=6,lateral2=5",
        "antiprism:n=3,lateral2=9",
        "antiprism:n=5,lateral2=9",
        "antiprism:n=3,lateral2=edge",
    ] {
        v.push(s.parse().unwrap());
    }
    v
}
