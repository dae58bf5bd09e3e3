//! Exhaustive reference implementations for small spaces, used to check the
//! search-based paths in tests. Caps are hard errors.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::distmat::LabeledDistanceMatrix;
use crate::permgroup::Perm;

pub const MAX_K: usize = 12;
pub const MAX_M: usize = 4;
pub const MAX_MAPS: usize = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle cap exceeded: {0}")]
    CapExceeded(String),
}

/// Every label-preserving bijection, by depth-first assignment.
pub fn brute_automorphisms(ldm: &LabeledDistanceMatrix) -> Result<Vec<Perm>, OracleError> {
    let k = ldm.k();
    if k > MAX_K {
        return Err(OracleError::CapExceeded(format!("k = {k} > {MAX_K}")));
    }
    let profiles: Vec<Vec<u16>> = (0..k)
        .map(|i| {
            let mut r = ldm.row(i).to_vec();
            r.sort_unstable();
            r
        })
        .collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(k);
    let mut used = vec![false; k];
    assign(ldm, &profiles, &mut images, &mut used, &mut out)?;
    Ok(out)
}

fn assign(
    ldm: &LabeledDistanceMatrix,
    profiles: &[Vec<u16>],
    images: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Perm>,
) -> Result<(), OracleError> {
    let k = ldm.k();
    let x = images.len();
    if x == k {
        if out.len() >= MAX_MAPS {
            return Err(OracleError::CapExceeded(format!("more than {MAX_MAPS} automorphisms")));
        }
        out.push(Perm::from_images(images.clone()).expect("assignment is a bijection"));
        return Ok(());
    }
    for y in 0..k {
        if used[y] || profiles[x] != profiles[y] {
            continue;
        }
        if (0..x).any(|u| ldm.label(u, x) != ldm.label(images[u], y)) {
            continue;
        }
        used[y] = true;
        images.push(y);
        assign(ldm, profiles, images, used, out)?;
        images.pop();
        used[y] = false;
    }
    Ok(())
}

/// m-point homogeneity straight from the definition: every m-tuple, repeats
/// allowed, grouped by ordered pairwise labels; each group must be one orbit.
pub fn brute_m_homog(ldm: &LabeledDistanceMatrix, m: usize) -> Result<bool, OracleError> {
    if m > MAX_M {
        return Err(OracleError::CapExceeded(format!("m = {m} > {MAX_M}")));
    }
    let auts = brute_automorphisms(ldm)?;
    let k = ldm.k();
    let mut classes: HashMap<Vec<u16>, Vec<Vec<usize>>> = HashMap::new();
    let mut tuple = vec![0; m];
    loop {
        classes.entry(ldm.tuple_profile(&tuple)).or_default().push(tuple.clone());
        // odometer over k^m tuples
        let mut i = 0;
        while i < m && tuple[i] == k - 1 {
            tuple[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        tuple[i] += 1;
    }
    for class in classes.values() {
        let orbit: HashSet<Vec<usize>> = auts.iter().map(|g| g.apply_tuple(&class[0])).collect();
        if class.iter().any(|t| !orbit.contains(t)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Family, Instance};
    use crate::distmat::label_exact;
    use crate::geometry::squared_distances;

    fn ldm(s: &str) -> LabeledDistanceMatrix {
        match s.parse::<Family>().unwrap().generate().unwrap().instance {
            Instance::Points(ps) => label_exact(&squared_distances(&ps)).unwrap(),
            Instance::Matrix(m) => m,
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(brute_automorphisms(&ldm("octahedron")).unwrap().len(), 48);
        assert_eq!(brute_automorphisms(&ldm("n_gon:n=5")).unwrap().len(), 10);
        assert_eq!(brute_automorphisms(&ldm("cuboctahedron")).unwrap().len(), 48);
    }

    #[test]
    fn homogeneity_examples() {
        assert!(brute_m_homog(&ldm("octahedron"), 3).unwrap());
        assert!(brute_m_homog(&ldm("cuboctahedron"), 2).unwrap());
        assert!(!brute_m_homog(&ldm("rhombus:alpha=1/2"), 1).unwrap());
    }

    #[test]
    fn caps_are_errors() {
        assert!(matches!(brute_automorphisms(&ldm("cube:n=4")), Err(OracleError::CapExceeded(_))));
        assert!(matches!(brute_m_homog(&ldm("tetrahedron"), 5), Err(OracleError::CapExceeded(_))));
        assert!(matches!(brute_m_homog(&ldm("dodecahedron"), 1), Err(OracleError::CapExceeded(_))));
    }

    #[test]
    fn repeated_points_change_nothing() {
        use crate::homogeneity::is_m_point_homogeneous;
        let m = ldm("rectangle");
        let g = crate::autgroup::automorphism_group(&m);
        for k in 1..=4 {
            assert_eq!(brute_m_homog(&m, k).unwrap(), is_m_point_homogeneous(&m, &g, k).unwrap().holds);
        }
    }
}
