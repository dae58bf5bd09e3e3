//! Permutation groups on `{0, …, k-1}` backed by a base and strong generating
//! set built with the deterministic Schreier–Sims algorithm.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image array is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("permutation degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("tuple entry {0} is out of range or repeated")]
    BadTuple(usize),
}

/// A bijection of `{0, …, k-1}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = PermError;
    fn try_from(images: Vec<usize>) -> Result<Self, PermError> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm { images: (0..k).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || seen[x] {
                return Err(PermError::NotBijection(k));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..k).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x >= k || y >= k {
                    return Err(PermError::NotBijection(k));
                }
                images[x] = y;
            }
        }
        Perm::from_images(images)
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(a, b);
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self` followed by `other`: `x ↦ other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|&(i, &x)| i != x).map(|(i, _)| i)
    }

    pub fn apply_tuple(&self, t: &[usize]) -> Vec<usize> {
        t.iter().map(|&x| self.images[x]).collect()
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut order = 1usize;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }
}

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Perm>,
    /// `transversal[x]` maps the base point to `x`; `None` outside the orbit.
    transversal: Vec<Option<Perm>>,
    inverse: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn build(k: usize, base_point: usize, gens: Vec<Perm>) -> Self {
        let mut transversal: Vec<Option<Perm>> = vec![None; k];
        transversal[base_point] = Some(Perm::identity(k));
        let mut orbit = vec![base_point];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in &gens {
                let y = g.apply(x);
                if transversal[y].is_none() {
                    let u = transversal[x].as_ref().expect("orbit point has a coset rep").then(g);
                    transversal[y] = Some(u);
                    orbit.push(y);
                }
            }
            i += 1;
        }
        let inverse = transversal.iter().map(|u| u.as_ref().map(Perm::inverse)).collect();
        Level { base_point, gens, transversal, inverse, orbit }
    }
}

/// Permutation group with a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn trivial(k: usize) -> Self {
        PermGroup { degree: k, generators: Vec::new(), levels: Vec::new(), order: BigUint::one() }
    }

    /// Runs Schreier–Sims on `gens`. The base is extended with the smallest
    /// point moved by each new strong generator, so the chain is a pure
    /// function of the input.
    pub fn from_generators(k: usize, gens: &[Perm]) -> Result<Self, PermError> {
        Self::with_base_prefix(k, gens, &[])
    }

    /// Like [`from_generators`](Self::from_generators) but the base starts
    /// with `prefix`; the levels after the prefix then describe the pointwise
    /// stabilizer of the prefix.
    pub fn with_base_prefix(k: usize, gens: &[Perm], prefix: &[usize]) -> Result<Self, PermError> {
        for g in gens {
            if g.degree() != k {
                return Err(PermError::DegreeMismatch { expected: k, found: g.degree() });
            }
        }
        check_tuple(k, prefix)?;
        let mut generators: Vec<Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !generators.contains(g) {
                generators.push(g.clone());
            }
        }
        let levels = schreier_sims(k, &generators, prefix);
        let order = levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(PermGroup { degree: k, generators, levels, order })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Transversal sizes, one per base point.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    /// Sifts `g` through the chain; returns the residue and the level reached.
    fn strip(&self, g: &Perm) -> (Perm, usize) {
        strip(&self.levels, g.clone(), 0)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, level) = self.strip(g);
        level == self.levels.len() && residue.is_identity()
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut orbit = vec![x];
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbit index of every point; orbits numbered by their smallest element.
    pub fn orbit_ids(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            uf.union_perm(g);
        }
        (0..self.degree).map(|x| uf.find(x)).collect()
    }

    /// All orbits, each sorted, ordered by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let ids = self.orbit_ids();
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (x, id) in ids.into_iter().enumerate() {
            groups.entry(id).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|o| o[0]);
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Orbit of a tuple under the coordinatewise action.
    pub fn orbit_of_tuple(&self, t: &[usize]) -> Result<HashSet<Vec<usize>>, PermError> {
        check_tuple(self.degree, t)?;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(t.to_vec());
        queue.push_back(t.to_vec());
        while let Some(u) = queue.pop_front() {
            for g in &self.generators {
                let v = g.apply_tuple(&u);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        Ok(seen)
    }

    /// Pointwise stabilizer of every entry of `t`.
    pub fn tuple_stabilizer(&self, t: &[usize]) -> Result<PermGroup, PermError> {
        check_tuple(self.degree, t)?;
        if t.is_empty() {
            return Ok(self.clone());
        }
        let sgs = self.strong_generators();
        let full = PermGroup::with_base_prefix(self.degree, &sgs, t)?;
        let levels: Vec<Level> =
            full.levels[t.len()..].iter().filter(|l| l.orbit.len() > 1).cloned().collect();
        let mut generators: Vec<Perm> = Vec::new();
        for l in &levels {
            for g in &l.gens {
                if !generators.contains(g) {
                    generators.push(g.clone());
                }
            }
        }
        let order = levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(PermGroup { degree: self.degree, generators, levels, order })
    }
}

fn check_tuple(k: usize, t: &[usize]) -> Result<(), PermError> {
    let mut seen = HashSet::new();
    for &x in t {
        if x >= k || !seen.insert(x) {
            return Err(PermError::BadTuple(x));
        }
    }
    Ok(())
}

fn strip(levels: &[Level], mut g: Perm, from: usize) -> (Perm, usize) {
    for (i, level) in levels.iter().enumerate().skip(from) {
        let x = g.apply(level.base_point);
        match &level.inverse[x] {
            Some(inv) => g = g.then(inv),
            None => return (g, i),
        }
    }
    (g, levels.len())
}

fn gens_fixing(strong: &[Perm], base: &[usize]) -> Vec<Perm> {
    strong.iter().filter(|s| base.iter().all(|&b| s.apply(b) == b)).cloned().collect()
}

fn schreier_sims(k: usize, gens: &[Perm], prefix: &[usize]) -> Vec<Level> {
    let mut base: Vec<usize> = prefix.to_vec();
    let mut strong: Vec<Perm> = gens.to_vec();
    for s in &strong {
        if base.iter().all(|&b| s.apply(b) == b) {
            base.push(s.first_moved().expect("identity filtered out"));
        }
    }
    let mut levels: Vec<Level> =
        (0..base.len()).map(|l| Level::build(k, base[l], gens_fixing(&strong, &base[..l]))).collect();

    let mut i = levels.len();
    while i > 0 {
        let l = i - 1;
        match failing_schreier_generator(&levels, l) {
            None => i -= 1,
            Some((residue, j)) => {
                if j == levels.len() {
                    let b = residue.first_moved().expect("non-trivial residue");
                    base.push(b);
                    levels.push(Level::build(k, b, Vec::new()));
                }
                strong.push(residue);
                for t in l + 1..=j {
                    levels[t] = Level::build(k, base[t], gens_fixing(&strong, &base[..t]));
                }
                i = j + 1;
            }
        }
    }
    levels
}

/// First Schreier generator at level `l` that does not sift through the
/// levels below it.
fn failing_schreier_generator(levels: &[Level], l: usize) -> Option<(Perm, usize)> {
    let level = &levels[l];
    for &b in &level.orbit {
        let ub = level.transversal[b].as_ref().expect("orbit point");
        for s in &level.gens {
            let c = s.apply(b);
            let h = ub.then(s).then(level.inverse[c].as_ref().expect("orbit closed"));
            if h.is_identity() {
                continue;
            }
            let (residue, j) = strip(levels, h, l + 1);
            if j < levels.len() || !residue.is_identity() {
                return Some((residue, j));
            }
        }
    }
    None
}

/// Disjoint-set forest over point indices; roots are always the smallest element.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(k: usize) -> Self {
        UnionFind { parent: (0..k).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn union_perm(&mut self, g: &Perm) {
        for (x, &y) in g.images().iter().enumerate() {
            self.union(x, y);
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s4() -> PermGroup {
        let gens = [Perm::transposition(4, 0, 1), Perm::transposition(4, 1, 2), Perm::transposition(4, 2, 3)];
        PermGroup::from_generators(4, &gens).unwrap()
    }

    /// Brute-force closure of a generating set; only for tiny groups.
    fn closure(k: usize, gens: &[Perm]) -> HashSet<Perm> {
        let mut seen: HashSet<Perm> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(Perm::identity(k));
        queue.push_back(Perm::identity(k));
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = p.then(g);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    #[test]
    fn symmetric_group_order() {
        assert_eq!(s4().order(), &BigUint::from(24u32));
        assert_eq!(s4().base(), vec![0, 1, 2]);
    }

    #[test]
    fn cube_hyperoctahedral_order() {
        // vertices of the 3-cube indexed by bit patterns; coordinate swaps and one sign flip
        let k = 8;
        let swap01 = Perm::from_images((0..8).map(|v: usize| (v & 4) | ((v & 1) << 1) | ((v & 2) >> 1)).collect()).unwrap();
        let cycle = Perm::from_images((0..8).map(|v: usize| ((v << 1) & 6) | (v >> 2)).collect()).unwrap();
        let flip = Perm::from_images((0..8).map(|v: usize| v ^ 1).collect()).unwrap();
        let g = PermGroup::from_generators(k, &[swap01, cycle, flip]).unwrap();
        assert_eq!(g.order(), &BigUint::from(48u32));
    }

    #[test]
    fn membership() {
        let a4 = PermGroup::from_generators(
            4,
            &[Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap(), Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap()],
        )
        .unwrap();
        assert_eq!(a4.order(), &BigUint::from(12u32));
        assert!(!a4.contains(&Perm::transposition(4, 0, 1)));
        assert!(a4.contains(&Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()));
        assert!(s4().contains(&Perm::transposition(4, 0, 3)));
    }

    #[test]
    fn identity_group_tuples() {
        let g = PermGroup::trivial(5);
        let orbit = g.orbit_of_tuple(&[3, 1]).unwrap();
        assert_eq!(orbit.len(), 1);
        assert!(!g.is_transitive());
        assert!(PermGroup::trivial(1).is_transitive());
    }

    #[test]
    fn stabilizers() {
        let g = s4();
        assert_eq!(g.tuple_stabilizer(&[]).unwrap().order(), g.order());
        let st = g.tuple_stabilizer(&[2]).unwrap();
        assert_eq!(st.order(), &BigUint::from(6u32));
        assert!(st.generators().iter().all(|p| p.apply(2) == 2));
        let st2 = g.tuple_stabilizer(&[3, 0]).unwrap();
        assert_eq!(st2.order(), &BigUint::from(2u32));
        assert!(g.tuple_stabilizer(&[1, 1]).is_err());
    }

    #[test]
    fn orbits_partition() {
        let g = PermGroup::from_generators(6, &[Perm::from_cycles(6, &[&[0, 2], &[3, 5, 4]]).unwrap()]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 2], vec![1], vec![3, 4, 5]]);
        assert!(!g.is_transitive());
    }

    #[test]
    fn deterministic_chain() {
        let gens = [Perm::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap(), Perm::from_cycles(7, &[&[1, 6], &[2, 5], &[3, 4]]).unwrap()];
        let a = PermGroup::from_generators(7, &gens).unwrap();
        let b = PermGroup::from_generators(7, &gens).unwrap();
        assert_eq!(a.base(), b.base());
        assert_eq!(a.strong_generators(), b.strong_generators());
        assert_eq!(a.order(), &BigUint::from(14u32));
    }

    #[test]
    fn perm_validation() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3]).is_err());
        let p: Perm = serde_json::from_str("[1,2,0]").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,2,0]");
        assert!(serde_json::from_str::<Perm>("[1,1,0]").is_err());
    }

    fn arb_perm(k: usize) -> impl Strategy<Value = Perm> {
        Just((0..k).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn order_matches_closure(gens in prop::collection::vec(arb_perm(6), 1..4)) {
            let g = PermGroup::from_generators(6, &gens).unwrap();
            let elements = closure(6, &gens);
            prop_assert_eq!(g.order(), &BigUint::from(elements.len()));
            for e in elements.iter().take(50) {
                prop_assert!(g.contains(e));
            }
            for a in 0..6 {
                for b in a + 1..6 {
                    let t = Perm::transposition(6, a, b);
                    prop_assert_eq!(g.contains(&t), elements.contains(&t));
                }
            }
        }

        #[test]
        fn orbit_stabilizer(gens in prop::collection::vec(arb_perm(7), 1..3), a in 0usize..7, b in 0usize..7) {
            prop_assume!(a != b);
            let g = PermGroup::from_generators(7, &gens).unwrap();
            for t in [vec![a], vec![a, b]] {
                let orbit = g.orbit_of_tuple(&t).unwrap();
                let stab = g.tuple_stabilizer(&t).unwrap();
                prop_assert_eq!(BigUint::from(orbit.len()) * stab.order(), g.order().clone());
            }
        }

        #[test]
        fn products_of_generators_are_members(gens in prop::collection::vec(arb_perm(8), 1..4),
                                              picks in prop::collection::vec(0usize..16, 1..=3)) {
            let g = PermGroup::from_generators(8, &gens).unwrap();
            let mut p = Perm::identity(8);
            for i in picks {
                p = p.then(&gens[i % gens.len()]);
            }
            prop_assert!(g.contains(&p));
        }
    }
}
