//! Automorphism groups of labeled distance matrices.
//!
//! An isometry of a finite metric space is a bijection preserving every
//! distance label, so the isometry group is the automorphism group of an
//! edge-colored complete graph. It is found by individualization and
//! equitable refinement. The first leaf reached is the anchor; every other
//! leaf that turns out to be an automorphism image of it yields a generator.

use crate::distmat::LabeledDistanceMatrix;
use crate::permgroup::{Perm, PermGroup, UnionFind};

/// Ordered partition of the points; cells split in place so flattened
/// positions of untouched cells never move.
#[derive(Clone, Debug)]
struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    fn unit(k: usize) -> Self {
        Partition { cells: vec![(0..k).collect()] }
    }

    fn is_discrete(&self, k: usize) -> bool {
        self.cells.len() == k
    }

    fn cell_of(&self, k: usize) -> Vec<usize> {
        let mut c = vec![0; k];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                c[v] = i;
            }
        }
        c
    }

    /// First smallest non-singleton cell.
    fn target(&self) -> Option<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].len() > 1).min_by_key(|&i| self.cells[i].len())
    }

    fn individualize(&self, cell: usize, v: usize) -> Partition {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..cell]);
        cells.push(vec![v]);
        cells.push(self.cells[cell].iter().copied().filter(|&x| x != v).collect());
        cells.extend_from_slice(&self.cells[cell + 1..]);
        Partition { cells }
    }

    fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    fn flatten(&self) -> Vec<usize> {
        self.cells.iter().flatten().copied().collect()
    }
}

/// Splits cells by the count of each label into each cell until every cell is equitable.
fn refine(ldm: &LabeledDistanceMatrix, mut p: Partition) -> Partition {
    let k = ldm.k();
    let width = ldm.num_classes() + 1;
    loop {
        let cell_of = p.cell_of(k);
        let ncells = p.cells.len();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(ncells);
        for cell in &p.cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig = vec![0u32; ncells * width];
                    for (u, &l) in ldm.row(v).iter().enumerate() {
                        sig[cell_of[u] * width + l as usize] += 1;
                    }
                    (sig, v)
                })
                .collect();
            // stable sort keeps the incoming order within each new cell
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == ncells {
            return p;
        }
        p = Partition { cells: next };
    }
}

/// Label counts from each cell to each cell; an isomorphism invariant of an equitable partition.
fn quotient(ldm: &LabeledDistanceMatrix, p: &Partition) -> Vec<u32> {
    let k = ldm.k();
    let width = ldm.num_classes() + 1;
    let cell_of = p.cell_of(k);
    let n = p.cells.len();
    let mut q = vec![0u32; n * n * width];
    for (i, cell) in p.cells.iter().enumerate() {
        let v = cell[0];
        for (u, &l) in ldm.row(v).iter().enumerate() {
            q[(i * n + cell_of[u]) * width + l as usize] += 1;
        }
    }
    q
}

struct Search<'a> {
    ldm: &'a LabeledDistanceMatrix,
    /// Cell sizes and quotient invariant at each level of the first path.
    first_sizes: Vec<Vec<usize>>,
    first_quotients: Vec<Vec<u32>>,
    first_leaf: Vec<usize>,
    generators: Vec<Perm>,
}

impl<'a> Search<'a> {
    fn leaf_map(&self, leaf: &[usize]) -> Option<Perm> {
        let k = self.ldm.k();
        let mut images = vec![0; k];
        for (a, b) in self.first_leaf.iter().zip(leaf) {
            images[*a] = *b;
        }
        let g = Perm::from_images(images).ok()?;
        self.ldm.is_automorphism(&g).then_some(g)
    }

    fn matches_first(&self, p: &Partition, level: usize) -> bool {
        self.first_sizes.get(level) == Some(&p.sizes()) && self.first_quotients[level] == quotient(self.ldm, p)
    }

    /// Any automorphism mapping the first leaf to a leaf below `p`.
    fn find(&self, p: &Partition, level: usize) -> Option<Perm> {
        if !self.matches_first(p, level) {
            return None;
        }
        let k = self.ldm.k();
        if p.is_discrete(k) {
            return self.leaf_map(&p.flatten());
        }
        let t = p.target()?;
        for &v in &p.cells[t] {
            let child = refine(self.ldm, p.individualize(t, v));
            if let Some(g) = self.find(&child, level + 1) {
                return Some(g);
            }
        }
        None
    }

    /// Walks the first path; `path` holds the partitions along it.
    fn first_path(&mut self, path: &[Partition]) {
        let k = self.ldm.k();
        for level in (0..path.len()).rev() {
            let p = &path[level];
            if p.is_discrete(k) {
                continue;
            }
            let t = p.target().expect("non-discrete partition has a target");
            let v0 = p.cells[t][0];
            let mut tried = vec![v0];
            for &v in &p.cells[t][1..] {
                let mut uf = UnionFind::new(k);
                for g in &self.generators {
                    uf.union_perm(g);
                }
                if tried.iter().any(|&w| uf.same(w, v)) {
                    continue;
                }
                tried.push(v);
                let child = refine(self.ldm, p.individualize(t, v));
                if let Some(g) = self.find(&child, level + 1) {
                    self.generators.push(g);
                }
            }
        }
    }
}

/// Generators of the full automorphism group.
pub fn automorphisms(ldm: &LabeledDistanceMatrix) -> Vec<Perm> {
    let k = ldm.k();
    let mut path = vec![refine(ldm, Partition::unit(k))];
    while !path.last().unwrap().is_discrete(k) {
        let p = path.last().unwrap();
        let t = p.target().unwrap();
        let next = refine(ldm, p.individualize(t, p.cells[t][0]));
        path.push(next);
    }
    let mut search = Search {
        ldm,
        first_sizes: path.iter().map(Partition::sizes).collect(),
        first_quotients: path.iter().map(|p| quotient(ldm, p)).collect(),
        first_leaf: path.last().unwrap().flatten(),
        generators: Vec::new(),
    };
    search.first_path(&path);
    search.generators
}

pub fn automorphism_group(ldm: &LabeledDistanceMatrix) -> PermGroup {
    PermGroup::from_generators(ldm.k(), &automorphisms(ldm)).expect("automorphisms have the matrix degree")
}

pub fn is_transitive(g: &PermGroup) -> bool {
    g.is_transitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Family, Instance};
    use crate::distmat::label_exact;
    use crate::geometry::squared_distances;
    use num_bigint::BigUint;

    fn ldm(s: &str) -> LabeledDistanceMatrix {
        match s.parse::<Family>().unwrap().generate().unwrap().instance {
            Instance::Points(ps) => label_exact(&squared_distances(&ps)).unwrap(),
            Instance::Matrix(m) => m,
        }
    }

    fn order(s: &str) -> BigUint {
        automorphism_group(&ldm(s)).order().clone()
    }

    #[test]
    fn orders() {
        for (s, n) in [
            ("truncated_simplex:n=3", 48u64),
            ("truncated_simplex:n=4", 120),
            ("icosidodecahedron", 120),
            ("dodecahedron", 120),
            ("cube3", 48),
            ("n_gon:n=7", 14),
            ("tetrahedron", 24),
            ("rhombus", 4),
            ("simplex_3edge", 4),
        ] {
            assert_eq!(order(s), BigUint::from(n), "{s}");
        }
    }

    #[test]
    fn generators_preserve_labels() {
        let m = ldm("icosahedron");
        for g in automorphisms(&m) {
            assert!(m.is_automorphism(&g));
        }
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(&automorphism_group(&ldm("dodecahedron"))));
        assert!(!is_transitive(&automorphism_group(&ldm("rhombus"))));
        let one = LabeledDistanceMatrix::from_labels(vec![vec![0]], vec![]).unwrap();
        assert!(is_transitive(&automorphism_group(&one)));
    }

    #[test]
    fn refinement_is_equitable() {
        let m = ldm("cuboctahedron");
        let p = refine(&m, Partition::unit(12).individualize(0, 0));
        let cell_of = p.cell_of(12);
        for cell in &p.cells {
            let sig = |v: usize| {
                let mut s = vec![0; p.cells.len() * (m.num_classes() + 1)];
                for u in 0..12 {
                    s[cell_of[u] * (m.num_classes() + 1) + m.label(v, u) as usize] += 1;
                }
                s
            };
            assert!(cell.iter().all(|&v| sig(v) == sig(cell[0])));
        }
    }
}
