//! Integer lattice points and simplices: parity, evenness, primitivity, volume.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest coordinate magnitude accepted anywhere in the crate.
pub const MAX_COORD: i64 = 1 << 20;

/// A point of Z^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinatewise residue mod 2.
    pub fn parity(&self) -> Vec<u8> {
        self.coords.iter().map(|c| c.rem_euclid(2) as u8).collect()
    }

    /// Parity packed into a bit mask, bit i = coords[i] mod 2.
    pub fn parity_mask(&self) -> u32 {
        parity_mask(&self.coords)
    }

    pub fn coord_sum(&self) -> i64 {
        self.coords.iter().sum()
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        Self { coords }
    }
}

/// Parity of a coordinate slice as a bit mask.
pub fn parity_mask(coords: &[i64]) -> u32 {
    coords
        .iter()
        .enumerate()
        .fold(0, |acc, (i, c)| acc | ((c.rem_euclid(2) as u32) << i))
}

/// Componentwise parity of a point.
pub fn parity(p: &LatticePoint) -> Vec<u8> {
    p.parity()
}

/// A simplex given by sorted indices into a vertex table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeSimplex {
    pub vertex_ids: Vec<u32>,
}

impl LatticeSimplex {
    /// Sorts the ids; fails on repeated ids.
    pub fn new(mut ids: Vec<u32>) -> Result<Self> {
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Degenerate(format!("repeated vertex in {ids:?}")));
        }
        if ids.is_empty() {
            return Err(Error::Degenerate("empty simplex".into()));
        }
        Ok(Self { vertex_ids: ids })
    }

    pub fn dim(&self) -> usize {
        self.vertex_ids.len() - 1
    }

    /// All non-empty faces, as sorted id lists, in subset order.
    pub fn faces(&self) -> Vec<LatticeSimplex> {
        let k = self.vertex_ids.len();
        (1u32..(1 << k))
            .map(|mask| LatticeSimplex {
                vertex_ids: (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.vertex_ids[i])
                    .collect(),
            })
            .collect()
    }

    /// Codimension-one faces (the simplex minus one vertex each).
    pub fn facets(&self) -> Vec<Vec<u32>> {
        (0..self.vertex_ids.len())
            .map(|skip| {
                self.vertex_ids
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect()
    }
}

/// Append-only, coordinate-deduplicated vertex table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexTable {
    dim: usize,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, u32>,
}

impl VertexTable {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Builds a table from points in the given order, rejecting duplicates.
    pub fn from_points(dim: usize, points: Vec<LatticePoint>) -> Result<Self> {
        let mut t = Self::new(dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::BadParameters(format!(
                    "point {:?} has dimension {} not {dim}",
                    p.coords,
                    p.dim()
                )));
            }
            if p.coords.iter().any(|c| c.abs() > MAX_COORD) {
                return Err(Error::BadParameters(format!(
                    "coordinate out of range in {:?}",
                    p.coords
                )));
            }
            if t.index.contains_key(&p) {
                return Err(Error::BadParameters(format!("duplicate vertex {:?}", p.coords)));
            }
            t.insert(p);
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Returns the id of `p`, inserting it if new.
    pub fn insert(&mut self, p: LatticePoint) -> u32 {
        debug_assert_eq!(p.dim(), self.dim);
        if let Some(&id) = self.index.get(&p) {
            return id;
        }
        let id = self.points.len() as u32;
        self.index.insert(p.clone(), id);
        self.points.push(p);
        id
    }

    pub fn id_of(&self, p: &LatticePoint) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn id_of_coords(&self, c: &[i64]) -> Option<u32> {
        self.index.get(&LatticePoint::new(c.to_vec())).copied()
    }

    pub fn point(&self, id: u32) -> &LatticePoint {
        &self.points[id as usize]
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Exact determinant of a small square integer matrix (fraction-free Bareiss).
pub fn det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Edge vectors v_i - v_0 of a simplex given by coordinates.
pub fn edge_vectors(points: &[&[i64]]) -> Vec<Vec<i64>> {
    let base = points[0];
    points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of the maximal minors of the edge matrix; 0 when affinely dependent.
pub fn lattice_index(points: &[&[i64]]) -> i128 {
    let edges = edge_vectors(points);
    let k = edges.len();
    if k == 0 {
        return 1;
    }
    let n = points[0].len();
    if k > n {
        return 0;
    }
    column_subsets(n, k).into_iter().fold(0, |g, cols| {
        let minor: Vec<Vec<i64>> = edges
            .iter()
            .map(|e| cols.iter().map(|&c| e[c]).collect())
            .collect();
        gcd(g, det(&minor))
    })
}

fn coords_of<'a>(s: &LatticeSimplex, table: &'a VertexTable) -> Vec<&'a [i64]> {
    s.vertex_ids
        .iter()
        .map(|&v| table.point(v).coords.as_slice())
        .collect()
}

/// True iff the edge vectors form a basis of the lattice points of their span.
pub fn is_primitive(s: &LatticeSimplex, table: &VertexTable) -> Result<bool> {
    is_primitive_coords(&coords_of(s, table))
}

pub fn is_primitive_coords(points: &[&[i64]]) -> Result<bool> {
    match lattice_index(points) {
        0 => Err(Error::Degenerate(format!("affinely dependent vertices {points:?}"))),
        g => Ok(g == 1),
    }
}

/// True iff the vertex sum lies in 2Z^n.
pub fn is_even_simplex(s: &LatticeSimplex, table: &VertexTable) -> bool {
    is_even_coords(&coords_of(s, table))
}

pub fn is_even_coords(points: &[&[i64]]) -> bool {
    let n = points[0].len();
    (0..n).all(|i| points.iter().map(|p| p[i]).sum::<i64>().rem_euclid(2) == 0)
}

/// Every non-empty face (including `s`) whose vertex sum is even.
pub fn even_faces(s: &LatticeSimplex, table: &VertexTable) -> Vec<LatticeSimplex> {
    s.faces()
        .into_iter()
        .filter(|f| is_even_simplex(f, table))
        .collect()
}

/// Number of non-empty even faces, computed from parity masks only.
pub fn even_face_count(parities: &[u32]) -> usize {
    let k = parities.len();
    (1u32..(1 << k))
        .filter(|mask| {
            (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .fold(0u32, |acc, i| acc ^ parities[i])
                == 0
        })
        .count()
}

/// |det| of the edge matrix of a full-dimensional simplex.
pub fn normalized_volume(s: &LatticeSimplex, table: &VertexTable) -> u64 {
    normalized_volume_coords(&coords_of(s, table))
}

pub fn normalized_volume_coords(points: &[&[i64]]) -> u64 {
    let edges = edge_vectors(points);
    det(&edges).unsigned_abs() as u64
}

/// Signed determinant of the edge matrix (orientation of a full simplex).
pub fn orientation(points: &[&[i64]]) -> i128 {
    det(&edge_vectors(points))
}

/// All lattice points of the dilated simplex {x >= 0, sum x <= m} in Z^n, lex order.
pub fn simplex_lattice_points(n: usize, m: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, m, &mut cur, &mut out);
    out
}

/// Whether a point lies in the dilated simplex of degree m.
pub fn in_dilated_simplex(c: &[i64], m: i64) -> bool {
    c.iter().all(|&x| x >= 0) && c.iter().sum::<i64>() <= m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(points: &[&[i64]]) -> (VertexTable, LatticeSimplex) {
        let dim = points[0].len();
        let t = VertexTable::from_points(
            dim,
            points.iter().map(|p| LatticePoint::new(p.to_vec())).collect(),
        )
        .unwrap();
        let s = LatticeSimplex::new((0..points.len() as u32).collect()).unwrap();
        (t, s)
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&LatticePoint::new(vec![3, 2, 5])), vec![1, 0, 1]);
        assert_eq!(parity(&LatticePoint::new(vec![0, 0, 0, 0])), vec![0, 0, 0, 0]);
        assert_eq!(parity(&LatticePoint::new(vec![1, 0, 0, 1])), vec![1, 0, 0, 1]);
        assert_eq!(parity(&LatticePoint::new(vec![-3, -2])), vec![1, 0]);
    }

    #[test]
    fn primitivity() {
        let (t, s) = table(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_primitive(&s, &t).unwrap());
        let (t, s) = table(&[&[0, 0], &[2, 0]]);
        assert!(!is_primitive(&s, &t).unwrap());
        let (t, s) = table(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert!(matches!(is_primitive(&s, &t), Err(Error::Degenerate(_))));
        let (t, s) = table(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_primitive(&s, &t).unwrap());
    }

    #[test]
    fn evenness() {
        let (t, s) = table(&[&[2, 4]]);
        assert!(is_even_simplex(&s, &t));
        assert_eq!(even_faces(&s, &t).len(), 1);
        let (t, s) = table(&[&[1, 0], &[1, 2]]);
        assert!(is_even_simplex(&s, &t));
        let (t, s) = table(&[&[1, 0], &[0, 1]]);
        assert!(!is_even_simplex(&s, &t));
        assert!(even_faces(&s, &t).is_empty());
        let (t, s) = table(&[&[0, 0]]);
        assert_eq!(even_faces(&s, &t), vec![s.clone()]);
    }

    #[test]
    fn volumes() {
        let (t, s) = table(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(normalized_volume(&s, &t), 1);
        let (t, s) = table(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert_eq!(normalized_volume(&s, &t), 9);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]];
        let cof = 2 * (4 * -2 - 1 * 2) - (-1) * (0 * -2 - 1 * 5) + 3 * (0 * 2 - 4 * 5);
        assert_eq!(det(&m), cof as i128);
        let z = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det(&z), -1);
    }

    #[test]
    fn lattice_point_count() {
        // C(m+n, n)
        assert_eq!(simplex_lattice_points(3, 4).len(), 35);
        assert_eq!(simplex_lattice_points(4, 4).len(), 70);
    }

    #[test]
    fn even_face_count_matches_enumeration() {
        let (t, s) = table(&[&[0, 0], &[1, 0], &[0, 1]]);
        let masks: Vec<u32> = s.vertex_ids.iter().map(|&v| t.point(v).parity_mask()).collect();
        assert_eq!(even_face_count(&masks), even_faces(&s, &t).len());
    }
}
