//! Mod 2 chain complexes: ranks of boundary maps, Betti numbers, components.

use std::collections::HashMap;

use rayon::prelude::*;

/// A sparse GF(2) matrix stored by columns, each a sorted list of row indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Z2Matrix {
    pub rows: usize,
    pub cols: Vec<Vec<u32>>,
}

impl Z2Matrix {
    pub fn new(rows: usize, cols: Vec<Vec<u32>>) -> Self {
        let cols = cols.into_iter().map(normalize).collect();
        Self { rows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Product `self * other` over GF(2).
    pub fn mul(&self, other: &Z2Matrix) -> Z2Matrix {
        let cols = other
            .cols
            .iter()
            .map(|c| {
                let mut acc: Vec<u32> = Vec::new();
                for &j in c {
                    acc = xor(&acc, &self.cols[j as usize]);
                }
                acc
            })
            .collect();
        Z2Matrix { rows: self.rows, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for &i in c {
                cols[i as usize].push(j as u32);
            }
        }
        Z2Matrix { rows: self.cols.len(), cols }
    }

    /// Rank over GF(2). Graph-like matrices (at most two entries in every
    /// column, or in every row) go through union-find; the rest through
    /// column reduction by lowest entries.
    pub fn rank(&self) -> usize {
        if self.cols.iter().all(|c| c.len() <= 2) {
            return graph_rank(self.rows, &self.cols);
        }
        let t = self.transpose();
        if t.cols.iter().all(|c| c.len() <= 2) {
            return graph_rank(t.rows, &t.cols);
        }
        reduce_rank(&self.cols)
    }
}

/// Sorts and cancels repeated entries in pairs.
fn normalize(mut c: Vec<u32>) -> Vec<u32> {
    c.sort_unstable();
    let mut out: Vec<u32> = Vec::with_capacity(c.len());
    for x in c {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn xor(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n], sets: n }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns true if the two elements were in different sets.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        self.sets -= 1;
        true
    }

    pub fn sets(&self) -> usize {
        self.sets
    }
}

/// Rank of an incidence-like matrix whose columns have at most two entries:
/// single entries are edges to an extra ground node.
fn graph_rank(rows: usize, cols: &[Vec<u32>]) -> usize {
    let ground = rows as u32;
    let mut uf = UnionFind::new(rows + 1);
    let mut rank = 0;
    for c in cols {
        let merged = match c.len() {
            0 => false,
            1 => uf.union(c[0], ground),
            _ => uf.union(c[0], c[1]),
        };
        rank += usize::from(merged);
    }
    rank
}

fn reduce_rank(cols: &[Vec<u32>]) -> usize {
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(cols.len());
    for c in cols {
        let mut col = c.clone();
        while let Some(&low) = col.last() {
            match pivot_of.get(&low) {
                Some(&p) => col = xor(&col, &reduced[p]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_of.insert(low, reduced.len());
        }
        reduced.push(col);
    }
    pivot_of.len()
}

/// Cell counts per dimension and boundary maps `d_k: C_k -> C_(k-1)` for
/// `k = 1..=top`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainComplex {
    pub counts: Vec<usize>,
    pub boundaries: Vec<Z2Matrix>,
}

impl ChainComplex {
    pub fn new(counts: Vec<usize>, boundaries: Vec<Z2Matrix>) -> Self {
        debug_assert_eq!(boundaries.len() + 1, counts.len().max(1));
        Self { counts, boundaries }
    }

    pub fn top(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// `d_k`, with `d_0` and `d_(top+1)` empty.
    pub fn boundary(&self, k: usize) -> Option<&Z2Matrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    /// Whether every composite `d_(k-1) d_k` vanishes.
    pub fn is_complex(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }

    pub fn euler(&self) -> i64 {
        self.counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

/// Betti numbers `b_k = #k-cells - rank d_k - rank d_(k+1)`; ranks of the
/// distinct maps are computed in parallel.
pub fn betti(c: &ChainComplex) -> Vec<usize> {
    let ranks: Vec<usize> = c.boundaries.par_iter().map(|m| m.rank()).collect();
    (0..c.counts.len())
        .map(|k| {
            let down = if k == 0 { 0 } else { ranks[k - 1] };
            let up = ranks.get(k).copied().unwrap_or(0);
            c.counts[k] - down - up
        })
        .collect()
}

/// Number of connected components: union-find over the 1-skeleton.
pub fn components(c: &ChainComplex) -> usize {
    let n = c.counts.first().copied().unwrap_or(0);
    let mut uf = UnionFind::new(n);
    if let Some(d1) = c.boundary(1) {
        for col in &d1.cols {
            if col.len() == 2 {
                uf.union(col[0], col[1]);
            }
        }
    }
    uf.sets()
}

pub fn euler(c: &ChainComplex) -> i64 {
    c.euler()
}

/// Alternating sum of Betti numbers.
pub fn euler_from_betti(b: &[usize]) -> i64 {
    b.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle() -> ChainComplex {
        let d1 = Z2Matrix::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        ChainComplex::new(vec![3, 3], vec![d1])
    }

    #[test]
    fn segment_boundary() {
        let d1 = Z2Matrix::new(2, vec![vec![0, 1]]);
        assert_eq!(d1.cols[0].len(), 2);
        assert_eq!(betti(&ChainComplex::new(vec![2, 1], vec![d1])), vec![1, 0]);
    }

    #[test]
    fn triangle_boundary_circle() {
        let c = circle();
        assert_eq!(c.boundaries[0].rank(), 2);
        assert_eq!(betti(&c), vec![1, 1]);
        assert_eq!(components(&c), 1);
        assert_eq!(euler(&c), 0);
    }

    #[test]
    fn solid_triangle_is_contractible() {
        let d1 = Z2Matrix::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let d2 = Z2Matrix::new(3, vec![vec![0, 1, 2]]);
        let c = ChainComplex::new(vec![3, 3, 1], vec![d1, d2]);
        assert!(c.is_complex());
        assert_eq!(betti(&c), vec![1, 0, 0]);
    }

    #[test]
    fn projective_plane_mod_two() {
        // minimal 6-vertex triangulation of RP^2
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [1, 3, 5], [2, 4, 5],
        ];
        let mut edges: Vec<[u32; 2]> = Vec::new();
        for t in &tris {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let e = [a.min(b), a.max(b)];
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        let id = |a: u32, b: u32| edges.iter().position(|e| *e == [a.min(b), a.max(b)]).unwrap() as u32;
        let d1 = Z2Matrix::new(6, edges.iter().map(|e| vec![e[0], e[1]]).collect());
        let d2 = Z2Matrix::new(
            edges.len(),
            tris.iter().map(|t| vec![id(t[0], t[1]), id(t[0], t[2]), id(t[1], t[2])]).collect(),
        );
        let c = ChainComplex::new(vec![6, edges.len(), 10], vec![d1, d2]);
        assert!(c.is_complex());
        assert_eq!(betti(&c), vec![1, 1, 1]);
    }

    fn dense_rank(rows: usize, cols: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<bool>> = cols
            .iter()
            .map(|c| {
                let mut v = vec![false; rows];
                for &i in c {
                    v[i as usize] ^= true;
                }
                v
            })
            .collect();
        let mut rank = 0;
        for r in 0..rows {
            if let Some(p) = (rank..m.len()).find(|&j| m[j][r]) {
                m.swap(rank, p);
                for j in 0..m.len() {
                    if j != rank && m[j][r] {
                        let pivot = m[rank].clone();
                        for (x, y) in m[j].iter_mut().zip(pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(cols in prop::collection::vec(prop::collection::vec(0u32..12, 0..6), 0..16)) {
            let m = Z2Matrix::new(12, cols);
            prop_assert_eq!(m.rank(), dense_rank(12, &m.cols));
            prop_assert_eq!(reduce_rank(&m.cols), dense_rank(12, &m.cols));
        }
    }
}
