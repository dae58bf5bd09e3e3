//! m-point homogeneity verdicts and the point homogeneity degree.
//!
//! A space is m-point homogeneous when any two ordered m-tuples with equal
//! pairwise labels are related by an isometry. Repeated entries force
//! repeated entries, so only injective tuples matter. Tuples are grown one
//! point at a time: for an orbit representative `T` of injective j-tuples,
//! the points outside `T` split into extension classes by their label vector
//! to `T`, and level j passes when the pointwise stabilizer of `T` is
//! transitive on every class. m-point homogeneity is levels `0..m` passing.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::distmat::{sphere_partition, LabeledDistanceMatrix};
use crate::geometry::{affine_rank, central_symmetry, matrix_rank, PointSet};
use crate::permgroup::{Perm, PermError, PermGroup};
use crate::scalar::{rational, Scalar};

#[derive(Debug, Error)]
pub enum HomogeneityError {
    #[error("m must be at least 1")]
    BadM,
    #[error("dimension unknown: supply a dimension hint")]
    NeedsDimension,
    #[error("the space is not homogeneous")]
    NotHomogeneous,
    #[error("the reflection test needs affine rank 3, found {0}")]
    RankNot3(usize),
    #[error("tuple {0:?} spans the space but has a non-singleton extension class; the dimension is inconsistent")]
    SpanningTupleNotRigid(Vec<usize>),
    #[error("fast path and full search disagree: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Two isometric ordered tuples that no isometry relates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub m: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Finite(usize),
    Infinite,
    /// Every tested m held but the search stopped at a user cap.
    AtLeast(usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(q) => write!(f, "{q}"),
            Degree::Infinite => f.write_str("infinite"),
            Degree::AtLeast(q) => write!(f, ">={q}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(q) => s.serialize_u64(*q as u64),
            Degree::Infinite => s.serialize_str("infinite"),
            Degree::AtLeast(q) => s.serialize_str(&format!(">={q}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    #[serde(rename = "failed_at_m")]
    FailedAtM,
    ReachedAffineRank,
    ReachedK,
    DistinctDistanceShortcut,
    MaxM,
}

#[derive(Clone, Debug)]
pub struct DegreeOptions {
    pub max_m: Option<usize>,
    pub accelerator: bool,
    pub antipodal_pruning: bool,
    /// Run the full search alongside every shortcut and compare.
    pub cross_check: bool,
    /// Re-test m = n+1 after an affine-rank termination on small instances.
    pub spot_check: bool,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions { max_m: None, accelerator: true, antipodal_pruning: false, cross_check: false, spot_check: true }
    }
}

pub const SPOT_CHECK_MAX_K: usize = 30;

#[derive(Clone, Debug, Serialize)]
pub struct LevelTime {
    pub m: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: Degree,
    pub n: usize,
    pub cap: usize,
    pub verdicts: Vec<Verdict>,
    pub termination: Termination,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spot_check: Option<Verdict>,
    pub accelerator_used: bool,
    pub wall_times: Vec<LevelTime>,
}

/// Central symmetry seen combinatorially: a fixed-point-free involution `sigma`
/// commuting with the group, with `label(x, sigma(y)) = label_map[label(x, y)]`.
#[derive(Clone, Debug)]
pub struct Antipodal {
    pub sigma: Perm,
    pub label_map: Vec<u16>,
}

/// Pairs each point with its unique partner at the largest label, if that
/// pairing behaves like a central symmetry.
pub fn antipodal_structure(ldm: &LabeledDistanceMatrix, g: &PermGroup) -> Option<Antipodal> {
    let k = ldm.k();
    let top = ldm.num_classes() as u16;
    if k < 2 || top == 0 {
        return None;
    }
    let mut images = vec![0; k];
    for (x, img) in images.iter_mut().enumerate() {
        let partners: Vec<usize> = (0..k).filter(|&y| ldm.label(x, y) == top).collect();
        if partners.len() != 1 {
            return None;
        }
        *img = partners[0];
    }
    let sigma = Perm::from_images(images).ok()?;
    let mut label_map: Vec<Option<u16>> = vec![None; top as usize + 1];
    for x in 0..k {
        for y in 0..k {
            let l = ldm.label(x, y) as usize;
            let img = ldm.label(x, sigma.apply(y));
            match label_map[l] {
                None => label_map[l] = Some(img),
                Some(prev) if prev != img => return None,
                _ => {}
            }
        }
    }
    let label_map: Vec<u16> = label_map.into_iter().collect::<Option<_>>()?;
    let involutive = (0..label_map.len()).all(|l| label_map[label_map[l] as usize] as usize == l);
    let central = g.generators().iter().all(|h| h.then(&sigma) == sigma.then(h));
    (involutive && central && ldm.is_automorphism(&sigma)).then_some(Antipodal { sigma, label_map })
}

/// Gram matrix of the point vectors relative to the barycenter, from exact
/// squared distances: `B = -1/2 · J D J`.
fn centered_gram(ldm: &LabeledDistanceMatrix) -> Option<Vec<Vec<Scalar>>> {
    if !ldm.is_exact() {
        return None;
    }
    let k = ldm.k();
    let d = |i: usize, j: usize| ldm.class_value(ldm.label(i, j)).as_exact().unwrap().clone();
    let inv_k = Scalar::from_rational(rational(1, k as i64));
    let row_mean: Vec<Scalar> = (0..k).map(|i| (0..k).map(|j| d(i, j)).sum::<Scalar>() * &inv_k).collect();
    let total_mean = row_mean.iter().cloned().sum::<Scalar>() * &inv_k;
    let minus_half = Scalar::from_rational(rational(-1, 2));
    Some(
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| &(&(&(&d(i, j) - &row_mean[i]) - &row_mean[j]) + &total_mean) * &minus_half)
                    .collect()
            })
            .collect(),
    )
}

struct Rep {
    tuple: Vec<usize>,
    stab: PermGroup,
}

struct RepOutcome {
    witness: Option<Witness>,
    children: Vec<Rep>,
}

struct Engine<'a> {
    ldm: &'a LabeledDistanceMatrix,
    /// Points that tuples and extensions may use; all points when `None`.
    universe: Option<Vec<bool>>,
    antipodal: Option<Antipodal>,
    /// Spanning-tuple check: (dimension, centered Gram matrix).
    rigidity: Option<(usize, Vec<Vec<Scalar>>)>,
}

impl<'a> Engine<'a> {
    fn new(ldm: &'a LabeledDistanceMatrix) -> Self {
        Engine { ldm, universe: None, antipodal: None, rigidity: None }
    }

    fn in_universe(&self, x: usize) -> bool {
        self.universe.as_ref().is_none_or(|u| u[x])
    }

    fn examine(&self, rep: &Rep, want_children: bool) -> Result<RepOutcome, HomogeneityError> {
        let t = &rep.tuple;
        let k = self.ldm.k();
        let ids = rep.stab.orbit_ids();
        let mut classes: BTreeMap<Vec<u16>, Vec<usize>> = BTreeMap::new();
        for x in (0..k).filter(|&x| self.in_universe(x) && !t.contains(&x)) {
            classes.entry(self.ldm.profile_to(t, x)).or_default().push(x);
        }
        let all_singletons = classes.values().all(|c| c.len() == 1);

        if let Some((n, gram)) = &self.rigidity {
            if t.len() >= *n && !all_singletons {
                let sub: Vec<Vec<Scalar>> = t.iter().map(|&a| t.iter().map(|&b| gram[a][b].clone()).collect()).collect();
                if matrix_rank(&sub) == *n {
                    return Err(HomogeneityError::SpanningTupleNotRigid(t.clone()));
                }
            }
        }

        let mut witness: Option<Witness> = None;
        for (key, class) in &classes {
            if let Some(a) = &self.antipodal {
                let mirrored: Vec<u16> = key.iter().map(|&l| a.label_map[l as usize]).collect();
                if mirrored < *key && classes.contains_key(&mirrored) {
                    continue;
                }
            }
            let x = class[0];
            if let Some(&y) = class.iter().find(|&&y| ids[y] != ids[x]) {
                let mut first = t.clone();
                first.push(x);
                let mut second = t.clone();
                second.push(y);
                let w = Witness { first, second };
                if witness.as_ref().is_none_or(|cur| w < *cur) {
                    witness = Some(w);
                }
            }
        }
        let mut children = Vec::new();
        if witness.is_none() && want_children && !all_singletons {
            let mut seen_orbits: Vec<usize> = Vec::new();
            for x in (0..k).filter(|&x| self.in_universe(x) && !t.contains(&x)) {
                if seen_orbits.contains(&ids[x]) {
                    continue;
                }
                seen_orbits.push(ids[x]);
                if let Some(a) = &self.antipodal {
                    let mx = a.sigma.apply(x);
                    if t.contains(&mx) || (ids[mx] != ids[x] && seen_orbits.contains(&ids[mx])) {
                        continue;
                    }
                }
                let mut tuple = t.clone();
                tuple.push(x);
                children.push(Rep { tuple, stab: rep.stab.tuple_stabilizer(&[x])? });
            }
        }
        Ok(RepOutcome { witness, children })
    }

    /// Verdicts for m = 1, 2, ... up to `max_m`, stopping after the first failure.
    fn scan(&self, g: &PermGroup, max_m: usize) -> Result<(Vec<Verdict>, Vec<LevelTime>), HomogeneityError> {
        let mut verdicts = Vec::new();
        let mut times = Vec::new();
        let mut reps = vec![Rep { tuple: Vec::new(), stab: g.clone() }];
        for m in 1..=max_m {
            let start = Instant::now();
            let want_children = m < max_m;
            let outcomes: Vec<Result<RepOutcome, HomogeneityError>> =
                reps.par_iter().map(|r| self.examine(r, want_children)).collect();
            let mut witness: Option<Witness> = None;
            let mut next = Vec::new();
            for o in outcomes {
                let o = o?;
                if let Some(w) = o.witness {
                    if witness.as_ref().is_none_or(|cur| w < *cur) {
                        witness = Some(w);
                    }
                }
                next.extend(o.children);
            }
            times.push(LevelTime { m, seconds: start.elapsed().as_secs_f64() });
            let holds = witness.is_none();
            verdicts.push(Verdict { m, holds, witness });
            if !holds {
                break;
            }
            reps = next;
        }
        Ok((verdicts, times))
    }
}

/// Decides m-point homogeneity of the space with full isometry group `g`.
pub fn is_m_point_homogeneous(ldm: &LabeledDistanceMatrix, g: &PermGroup, m: usize) -> Result<Verdict, HomogeneityError> {
    if m < 1 {
        return Err(HomogeneityError::BadM);
    }
    let (verdicts, _) = Engine::new(ldm).scan(g, m)?;
    let last = verdicts.last().expect("at least one level runs");
    Ok(Verdict { m, holds: last.holds, witness: last.witness.clone() })
}

/// As [`is_m_point_homogeneous`], dropping one of each antipodal pair of
/// extension classes and child orbits.
pub fn is_m_point_homogeneous_antipodal(
    ldm: &LabeledDistanceMatrix,
    g: &PermGroup,
    m: usize,
) -> Result<Option<Verdict>, HomogeneityError> {
    if m < 1 {
        return Err(HomogeneityError::BadM);
    }
    let Some(a) = antipodal_structure(ldm, g) else { return Ok(None) };
    let engine = Engine { antipodal: Some(a), ..Engine::new(ldm) };
    let (verdicts, _) = engine.scan(g, m)?;
    let last = verdicts.last().unwrap();
    Ok(Some(Verdict { m, holds: last.holds, witness: last.witness.clone() }))
}

/// Fires when a row has pairwise distinct labels, which on a homogeneous
/// space makes every tuple determined by any one of its points.
pub fn distinct_distance_shortcut(ldm: &LabeledDistanceMatrix, g: &PermGroup) -> Option<Degree> {
    if !g.is_transitive() {
        return None;
    }
    let k = ldm.k();
    let row = ldm.row(0);
    let mut seen = vec![false; ldm.num_classes() + 1];
    for (j, &l) in row.iter().enumerate() {
        if j == 0 {
            continue;
        }
        if seen[l as usize] {
            return None;
        }
        seen[l as usize] = true;
    }
    debug_assert!(k >= 1);
    Some(Degree::Infinite)
}

/// Whether the stabilizer of one point is transitive on each of its spheres.
pub fn two_point_sphere_criterion(ldm: &LabeledDistanceMatrix, g: &PermGroup) -> Result<bool, HomogeneityError> {
    two_point_sphere_criterion_at(ldm, g, 0)
}

pub fn two_point_sphere_criterion_at(ldm: &LabeledDistanceMatrix, g: &PermGroup, v: usize) -> Result<bool, HomogeneityError> {
    if !g.is_transitive() {
        return Err(HomogeneityError::NotHomogeneous);
    }
    let h = g.tuple_stabilizer(&[v])?;
    let ids = h.orbit_ids();
    Ok(sphere_partition(ldm, v).shells.iter().all(|(_, s)| s.iter().all(|&x| ids[x] == ids[s[0]])))
}

/// Three distance classes, the largest an antipodal matching, centrally
/// symmetric: then (m−1)-point transitivity of a vertex stabilizer on the
/// nearest sphere gives m-point homogeneity. `None` when the hypotheses fail.
pub fn three_distance_accelerator(
    ldm: &LabeledDistanceMatrix,
    g: &PermGroup,
    m: usize,
    ps: Option<&PointSet>,
) -> Option<bool> {
    if m < 2 || ldm.num_classes() != 3 || !g.is_transitive() {
        return None;
    }
    let a = antipodal_structure(ldm, g)?;
    match ps {
        Some(ps) => {
            if central_symmetry(ps)? != a.sigma {
                return None;
            }
        }
        None => {
            if a.label_map != [3, 2, 1, 0] {
                return None;
            }
        }
    }
    let v = 0;
    let h = g.tuple_stabilizer(&[v]).ok()?;
    let universe: Vec<bool> = ldm.row(v).iter().map(|&l| l == 1).collect();
    let engine = Engine { universe: Some(universe), ..Engine::new(ldm) };
    let (verdicts, _) = engine.scan(&h, m - 1).ok()?;
    Some(verdicts.last().is_none_or(|v| v.holds))
}

/// Dimension used to cap the degree search.
pub fn resolve_dimension(ldm: &LabeledDistanceMatrix, ps: Option<&PointSet>, hint: Option<usize>) -> usize {
    if let Some(ps) = ps {
        return affine_rank(ps);
    }
    hint.or(ldm.dimension_hint()).unwrap_or_else(|| crate::distmat::gram_rank(ldm))
}

/// The point homogeneity degree. `n` is the affine dimension of the space.
pub fn homogeneity_degree(
    ldm: &LabeledDistanceMatrix,
    g: &PermGroup,
    n: Option<usize>,
    ps: Option<&PointSet>,
    opts: &DegreeOptions,
) -> Result<DegreeReport, HomogeneityError> {
    let n = n.ok_or(HomogeneityError::NeedsDimension)?;
    let k = ldm.k();
    let cap = n.min(k.saturating_sub(1));
    let mut engine = Engine::new(ldm);
    if opts.antipodal_pruning {
        engine.antipodal = antipodal_structure(ldm, g);
    }

    let t0 = Instant::now();
    let transitive = g.is_transitive();
    let first = if transitive {
        Verdict { m: 1, holds: true, witness: None }
    } else {
        let orbit = g.orbit(0);
        let y = (0..k).find(|x| !orbit.contains(x)).expect("intransitive group misses a point");
        Verdict { m: 1, holds: false, witness: Some(Witness { first: vec![0], second: vec![y] }) }
    };
    let first_time = LevelTime { m: 1, seconds: t0.elapsed().as_secs_f64() };
    let mut report = DegreeReport {
        degree: Degree::Finite(0),
        n,
        cap,
        verdicts: vec![first],
        termination: Termination::FailedAtM,
        spot_check: None,
        accelerator_used: false,
        wall_times: vec![first_time],
    };
    if !transitive {
        return Ok(report);
    }

    if distinct_distance_shortcut(ldm, g).is_some() {
        report.degree = Degree::Infinite;
        report.termination = Termination::DistinctDistanceShortcut;
        if opts.cross_check {
            let full = full_search(&engine, g, n, cap, opts)?;
            if full.degree != Degree::Infinite {
                return Err(HomogeneityError::CrossCheck(format!("shortcut says infinite, search says {}", full.degree)));
            }
        }
        return Ok(report);
    }

    let top = opts.max_m.map_or(cap, |mm| mm.min(cap));
    if opts.accelerator && top == cap && cap >= 2 {
        let start = Instant::now();
        if three_distance_accelerator(ldm, g, cap, ps) == Some(true) {
            report.accelerator_used = true;
            report.degree = Degree::Infinite;
            report.termination = if cap == n { Termination::ReachedAffineRank } else { Termination::ReachedK };
            report.verdicts = (1..=cap).map(|m| Verdict { m, holds: true, witness: None }).collect();
            report.wall_times.push(LevelTime { m: cap, seconds: start.elapsed().as_secs_f64() });
            if opts.cross_check {
                let full = full_search(&engine, g, n, cap, opts)?;
                if full.degree != Degree::Infinite {
                    return Err(HomogeneityError::CrossCheck(format!("accelerator says infinite, search says {}", full.degree)));
                }
            }
            spot_check(&mut report, ldm, g, k, opts)?;
            return Ok(report);
        }
    }

    let full = full_search(&engine, g, n, top, opts)?;
    report.verdicts = full.verdicts;
    report.wall_times = full.wall_times;
    report.degree = full.degree;
    report.termination = full.termination;
    if top < cap && report.termination != Termination::FailedAtM {
        report.degree = Degree::AtLeast(top);
        report.termination = Termination::MaxM;
    }
    if opts.cross_check && opts.antipodal_pruning && engine.antipodal.is_some() {
        let plain = full_search(&Engine::new(ldm), g, n, top, opts)?;
        if plain.degree != full.degree {
            return Err(HomogeneityError::CrossCheck(format!(
                "antipodal pruning gives {}, plain search gives {}",
                full.degree, plain.degree
            )));
        }
    }
    spot_check(&mut report, ldm, g, k, opts)?;
    Ok(report)
}

struct FullSearch {
    degree: Degree,
    termination: Termination,
    verdicts: Vec<Verdict>,
    wall_times: Vec<LevelTime>,
}

fn full_search(engine: &Engine, g: &PermGroup, n: usize, top: usize, _opts: &DegreeOptions) -> Result<FullSearch, HomogeneityError> {
    let (verdicts, wall_times) = engine.scan(g, top.max(1))?;
    let failed = verdicts.iter().find(|v| !v.holds).map(|v| v.m);
    let (degree, termination) = match failed {
        Some(m) => (Degree::Finite(m - 1), Termination::FailedAtM),
        None if top == n => (Degree::Infinite, Termination::ReachedAffineRank),
        None => (Degree::Infinite, Termination::ReachedK),
    };
    Ok(FullSearch { degree, termination, verdicts, wall_times })
}

fn spot_check(
    report: &mut DegreeReport,
    ldm: &LabeledDistanceMatrix,
    g: &PermGroup,
    k: usize,
    opts: &DegreeOptions,
) -> Result<(), HomogeneityError> {
    if !(opts.spot_check && report.termination == Termination::ReachedAffineRank && k <= SPOT_CHECK_MAX_K) {
        return Ok(());
    }
    let n = report.n;
    if n + 1 > k {
        return Ok(());
    }
    let mut engine = Engine::new(ldm);
    engine.rigidity = centered_gram(ldm).map(|gram| (n, gram));
    let (verdicts, _) = engine.scan(g, n + 1)?;
    let last = verdicts.last().unwrap();
    report.spot_check = Some(Verdict { m: n + 1, holds: last.holds, witness: last.witness.clone() });
    Ok(())
}

/// Both tuples have the same pairwise labels and lie in different orbits.
pub fn verify_witness(ldm: &LabeledDistanceMatrix, g: &PermGroup, w: &Witness) -> Result<bool, HomogeneityError> {
    if w.first.len() != w.second.len() || ldm.tuple_profile(&w.first) != ldm.tuple_profile(&w.second) {
        return Ok(false);
    }
    Ok(!g.orbit_of_tuple(&w.first)?.contains(&w.second))
}

/// Certificate that a 3-dimensional space is not 3-point homogeneous: the
/// reflection in the plane through the center, `a` and `b` either fails to
/// map the point set to itself or fails to swap `c` and `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionWitness {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

pub fn reflection_falsifier_3d(
    ps: &PointSet,
    ldm: &LabeledDistanceMatrix,
    g: &PermGroup,
) -> Result<Option<ReflectionWitness>, HomogeneityError> {
    let rank = affine_rank(ps);
    if rank != 3 {
        return Err(HomogeneityError::RankNot3(rank));
    }
    if !g.is_transitive() {
        return Err(HomogeneityError::NotHomogeneous);
    }
    let u = ps.centered();
    let k = ps.len();
    let index: std::collections::HashMap<&[Scalar], usize> = u.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let two = Scalar::from_int(2);
    for a in 0..k {
        for b in a + 1..k {
            // O off the line AB iff the two position vectors are independent
            let gaa = ps.inner(&u[a], &u[a]);
            let gab = ps.inner(&u[a], &u[b]);
            let gbb = ps.inner(&u[b], &u[b]);
            let det = &(&gaa * &gbb) - &(&gab * &gab);
            if det.is_zero() {
                continue;
            }
            let inv_det = det.checked_inv().expect("non-zero determinant");
            let reflect = |x: &[Scalar]| -> Vec<Scalar> {
                let pa = ps.inner(&u[a], x);
                let pb = ps.inner(&u[b], x);
                let ca = &(&(&gbb * &pa) - &(&gab * &pb)) * &inv_det;
                let cb = &(&(&gaa * &pb) - &(&gab * &pa)) * &inv_det;
                x.iter()
                    .zip(u[a].iter().zip(&u[b]))
                    .map(|(xi, (ai, bi))| &(&two * &(&(&ca * ai) + &(&cb * bi))) - xi)
                    .collect()
            };
            let image: Option<Vec<usize>> = u.iter().map(|p| index.get(reflect(p).as_slice()).copied()).collect();
            for c in 0..k {
                for d in c + 1..k {
                    if ldm.label(a, c) != ldm.label(a, d) || ldm.label(b, c) != ldm.label(b, d) {
                        continue;
                    }
                    let swaps = image.as_ref().is_some_and(|img| img[c] == d);
                    if !swaps {
                        return Ok(Some(ReflectionWitness { a, b, c, d }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::automorphism_group;
    use crate::catalog::{Family, Instance};
    use crate::distmat::label_exact;
    use crate::geometry::squared_distances;

    struct Case {
        ldm: LabeledDistanceMatrix,
        g: PermGroup,
        ps: Option<PointSet>,
        n: usize,
    }

    fn case(s: &str) -> Case {
        let e = s.parse::<Family>().unwrap().generate().unwrap();
        let ldm = match &e.instance {
            Instance::Points(ps) => label_exact(&squared_distances(ps)).unwrap(),
            Instance::Matrix(m) => m.clone(),
        };
        let g = automorphism_group(&ldm);
        let ps = e.point_set().cloned();
        let n = resolve_dimension(&ldm, ps.as_ref(), e.declared_dimension);
        Case { ldm, g, ps, n }
    }

    fn degree(s: &str) -> DegreeReport {
        let c = case(s);
        let opts = DegreeOptions { cross_check: true, ..Default::default() };
        homogeneity_degree(&c.ldm, &c.g, Some(c.n), c.ps.as_ref(), &opts).unwrap()
    }

    #[test]
    fn small_degrees() {
        assert_eq!(degree("dodecahedron").degree, Degree::Finite(2));
        assert_eq!(degree("rhombus").degree, Degree::Finite(0));
        assert_eq!(degree("icosahedron").degree, Degree::Infinite);
        assert_eq!(degree("cube:n=4").degree, Degree::Finite(3));
        let r = degree("rectangle");
        assert_eq!((r.degree, r.termination), (Degree::Infinite, Termination::DistinctDistanceShortcut));
    }

    #[test]
    fn dodecahedron_witness_is_valid() {
        let c = case("dodecahedron");
        let v = is_m_point_homogeneous(&c.ldm, &c.g, 3).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.first.len(), 3);
        assert!(verify_witness(&c.ldm, &c.g, &w).unwrap());
        assert!(is_m_point_homogeneous(&c.ldm, &c.g, 2).unwrap().holds);
    }

    #[test]
    fn sphere_criterion_matches_level_two() {
        for s in ["goss6", "icosidodecahedron", "n_gon:n=4", "cuboctahedron"] {
            let c = case(s);
            let crit = two_point_sphere_criterion(&c.ldm, &c.g).unwrap();
            assert_eq!(crit, is_m_point_homogeneous(&c.ldm, &c.g, 2).unwrap().holds, "{s}");
            for v in 0..c.ldm.k() {
                assert_eq!(two_point_sphere_criterion_at(&c.ldm, &c.g, v).unwrap(), crit);
            }
        }
        let c = case("rhombus");
        assert!(matches!(two_point_sphere_criterion(&c.ldm, &c.g), Err(HomogeneityError::NotHomogeneous)));
    }

    #[test]
    fn accelerator_cases() {
        let c = case("icosahedron");
        assert_eq!(three_distance_accelerator(&c.ldm, &c.g, 6, c.ps.as_ref()), Some(true));
        let c = case("cube3");
        assert_eq!(three_distance_accelerator(&c.ldm, &c.g, 4, c.ps.as_ref()), Some(true));
        assert_eq!(three_distance_accelerator(&c.ldm, &c.g, 4, None), Some(true));
        let c = case("dodecahedron");
        assert_eq!(three_distance_accelerator(&c.ldm, &c.g, 3, c.ps.as_ref()), None);
    }

    #[test]
    fn reflection_cases() {
        let c = case("dodecahedron");
        let w = reflection_falsifier_3d(c.ps.as_ref().unwrap(), &c.ldm, &c.g).unwrap();
        assert!(w.is_some());
        for s in ["cube3", "icosahedron"] {
            let c = case(s);
            assert_eq!(reflection_falsifier_3d(c.ps.as_ref().unwrap(), &c.ldm, &c.g).unwrap(), None, "{s}");
        }
        let c = case("cube:n=4");
        assert!(matches!(
            reflection_falsifier_3d(c.ps.as_ref().unwrap(), &c.ldm, &c.g),
            Err(HomogeneityError::RankNot3(4))
        ));
    }

    #[test]
    fn antipodal_pruning_agrees() {
        for s in ["cube:n=4", "orthoplex:n=4", "icosahedron", "cuboctahedron", "octsev:alpha=1/3"] {
            let c = case(s);
            for m in 1..=4 {
                let plain = is_m_point_homogeneous(&c.ldm, &c.g, m).unwrap().holds;
                let pruned = is_m_point_homogeneous_antipodal(&c.ldm, &c.g, m).unwrap().unwrap().holds;
                assert_eq!(plain, pruned, "{s} m={m}");
            }
        }
        let c = case("tetrahedron");
        assert!(antipodal_structure(&c.ldm, &c.g).is_none());
    }

    #[test]
    fn spot_check_after_rank_termination() {
        let r = degree("icosahedron");
        assert_eq!(r.termination, Termination::ReachedAffineRank);
        assert!(r.spot_check.as_ref().unwrap().holds);
        let r = degree("cuboctahedron");
        assert!(r.spot_check.unwrap().holds);
    }

    #[test]
    fn bad_inputs() {
        let c = case("cube3");
        assert!(matches!(is_m_point_homogeneous(&c.ldm, &c.g, 0), Err(HomogeneityError::BadM)));
        assert!(matches!(
            homogeneity_degree(&c.ldm, &c.g, None, None, &DegreeOptions::default()),
            Err(HomogeneityError::NeedsDimension)
        ));
    }

    #[test]
    fn max_m_caps_the_search() {
        let c = case("icosahedron");
        let opts = DegreeOptions { max_m: Some(2), ..Default::default() };
        let r = homogeneity_degree(&c.ldm, &c.g, Some(3), None, &opts).unwrap();
        assert_eq!((r.degree, r.termination), (Degree::AtLeast(2), Termination::MaxM));
    }
}
