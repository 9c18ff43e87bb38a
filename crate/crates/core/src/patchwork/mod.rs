//! Symmetric copies of a signed triangulation in all orthants, glued along
//! the outer boundary by the antipodal map, and the hypersurface cut out of
//! that complex by the sign changes.

mod gamma;
mod linking;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::parity_mask;
use crate::signs::{extend_sign_raw, Datum, PLUS};
use crate::triangulation::Triangulation;

pub use gamma::{build_gamma, faces_consistent, gamma_cells, GammaCells, GammaComplex, GammaSimplex, GammaVertex};
pub use linking::{linking_matrix, linking_number, z2_intersection, Chain, LinkingMatrix, LinkingPair};

/// Sign pattern of the vertices of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    Plus,
    Minus,
    Mixed,
}

/// A cell of the quotient: a face of the base triangulation and the
/// canonical mask of the orthant holding the copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientCell {
    pub face: u32,
    pub mask: u32,
}

/// All faces of all maximal simplices, by dimension, each sorted by vertex ids.
pub fn base_faces(t: &Triangulation) -> Vec<Vec<Vec<u32>>> {
    let n = t.ambient_dim;
    (0..=n)
        .into_par_iter()
        .map(|k| {
            let mut faces: Vec<Vec<u32>> = t
                .maximal_simplices
                .par_iter()
                .flat_map_iter(|s| subsets(&s.vertex_ids, k + 1))
                .collect();
            faces.par_sort_unstable();
            faces.dedup();
            faces
        })
        .collect()
}

fn subsets(v: &[u32], size: usize) -> Vec<Vec<u32>> {
    let n = v.len();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == size)
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).map(|i| v[i]).collect())
        .collect()
}

/// Free coordinates of a face (those not zero on every vertex) and whether
/// it lies on the outer facet.
fn face_support(points: &[&[i64]], degree: i64) -> (u32, bool) {
    let n = points[0].len();
    let zero = (0..n).filter(|&i| points.iter().all(|p| p[i] == 0)).fold(0u32, |a, i| a | 1 << i);
    let full = (1u32 << n) - 1;
    let outer = points.iter().all(|p| p.iter().sum::<i64>() == degree);
    (full & !zero, outer)
}

/// Canonical masks of the distinct copies of a face, increasing.
pub fn copy_masks(points: &[&[i64]], degree: i64) -> Vec<u32> {
    let (free, outer) = face_support(points, degree);
    let mut out = Vec::new();
    let mut sub = 0u32;
    loop {
        if !outer || sub < (!sub & free) {
            out.push(sub);
        }
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    out
}

fn kind_of(signs: impl Iterator<Item = u8>) -> CellKind {
    let (mut plus, mut minus) = (false, false);
    for s in signs {
        if s == PLUS {
            plus = true;
        } else {
            minus = true;
        }
    }
    match (plus, minus) {
        (true, false) => CellKind::Plus,
        (false, true) => CellKind::Minus,
        _ => CellKind::Mixed,
    }
}

/// Cell numbers of the quotient by dimension, split by sign pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCensus {
    pub plus: Vec<u64>,
    pub minus: Vec<u64>,
    pub mixed: Vec<u64>,
}

impl CellCensus {
    pub fn total(&self, k: usize) -> u64 {
        self.plus[k] + self.minus[k] + self.mixed[k]
    }

    pub fn dim(&self) -> usize {
        self.plus.len() - 1
    }

    /// Alternating sum of all cells: the Euler characteristic of RP^n.
    pub fn euler_quotient(&self) -> i64 {
        (0..=self.dim()).map(|k| sign(k) * self.total(k) as i64).sum()
    }

    /// `c_n - c_(n-1) + ...` over cells whose vertices are all `+`.
    pub fn chi_plus(&self) -> i64 {
        let n = self.dim();
        (0..=n).map(|k| sign(n - k) * self.plus[k] as i64).sum()
    }

    pub fn chi_minus(&self) -> i64 {
        let n = self.dim();
        (0..=n).map(|k| sign(n - k) * self.minus[k] as i64).sum()
    }

    /// Euler characteristic of the hypersurface: its cells are the mixed
    /// cells, one dimension down.
    pub fn euler_gamma(&self) -> i64 {
        (1..=self.dim()).map(|k| -sign(k) * self.mixed[k] as i64).sum()
    }

    /// `c_0 - c_1 + c_2 - ...` over monochromatic cells. For odd `n` this is
    /// the Euler characteristic of the hypersurface.
    pub fn euler_by_emptiness(&self) -> i64 {
        (0..=self.dim()).map(|k| sign(k) * (self.plus[k] + self.minus[k]) as i64).sum()
    }
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Per-vertex data needed to sign copies, detached from the datum.
struct SignTable<'a> {
    coords: Vec<&'a [i64]>,
    parity: Vec<u32>,
    signs: &'a [u8],
    degree: i64,
}

impl<'a> SignTable<'a> {
    fn new(d: &'a Datum) -> Self {
        let t = &d.triangulation;
        let coords: Vec<&[i64]> = t.vertices.points().iter().map(|p| p.coords.as_slice()).collect();
        let parity = coords.iter().map(|c| parity_mask(c)).collect();
        Self { coords, parity, signs: &d.signs.signs, degree: t.degree }
    }

    fn points(&self, face: &[u32]) -> Vec<&'a [i64]> {
        face.iter().map(|&v| self.coords[v as usize]).collect()
    }

    fn kind(&self, face: &[u32], mask: u32) -> CellKind {
        kind_of(face.iter().map(|&v| extend_sign_raw(self.signs[v as usize], self.parity[v as usize], mask)))
    }
}

/// Counts quotient cells by sign pattern without storing them.
pub fn cell_census(d: &Datum) -> CellCensus {
    let faces = base_faces(&d.triangulation);
    cell_census_of_faces(d, &faces)
}

fn cell_census_of_faces(d: &Datum, faces: &[Vec<Vec<u32>>]) -> CellCensus {
    let table = SignTable::new(d);
    let n = faces.len() - 1;
    let mut census = CellCensus { plus: vec![0; n + 1], minus: vec![0; n + 1], mixed: vec![0; n + 1] };
    for (k, fs) in faces.iter().enumerate() {
        let counts = fs
            .par_iter()
            .map(|f| {
                let mut c = [0u64; 3];
                for b in copy_masks(&table.points(f), table.degree) {
                    c[table.kind(f, b) as usize] += 1;
                }
                c
            })
            .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
        census.plus[k] = counts[0];
        census.minus[k] = counts[1];
        census.mixed[k] = counts[2];
    }
    census
}

/// Per-dimension all-plus counts and their alternating sum with the top
/// dimension counted positively.
pub fn count_all_plus(e: &ExtendedComplex) -> (Vec<u64>, i64) {
    let c = e.census();
    let chi = c.chi_plus();
    (c.plus, chi)
}

/// Alternating sum over monochromatic cells; requires `n = 3`.
pub fn euler_of_gamma_by_emptiness(e: &ExtendedComplex) -> crate::Result<i64> {
    if e.dim != 3 {
        return Err(crate::Error::Unsupported(format!("counting by emptiness needs n = 3, got {}", e.dim)));
    }
    Ok(e.census().euler_by_emptiness())
}

/// The quotient complex with its cells stored and indexed.
#[derive(Clone, Debug)]
pub struct ExtendedComplex {
    pub dim: usize,
    pub degree: i64,
    pub datum: Datum,
    /// Faces of the base triangulation by dimension.
    pub faces: Vec<Vec<Vec<u32>>>,
    /// Quotient cells by dimension, ordered by (face, mask).
    pub cells: Vec<Vec<QuotientCell>>,
    pub kinds: Vec<Vec<CellKind>>,
    face_index: Vec<HashMap<Vec<u32>, u32>>,
    cell_index: Vec<HashMap<QuotientCell, u32>>,
}

/// Builds all copies of all faces with the quotient identifications.
pub fn extend(d: &Datum) -> ExtendedComplex {
    let faces = base_faces(&d.triangulation);
    let table = SignTable::new(d);
    let mut cells = Vec::new();
    let mut kinds = Vec::new();
    for fs in &faces {
        let per_face: Vec<Vec<(QuotientCell, CellKind)>> = fs
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                copy_masks(&table.points(f), table.degree)
                    .into_iter()
                    .map(|b| (QuotientCell { face: i as u32, mask: b }, table.kind(f, b)))
                    .collect()
            })
            .collect();
        let (c, k): (Vec<_>, Vec<_>) = per_face.into_iter().flatten().unzip();
        cells.push(c);
        kinds.push(k);
    }
    let face_index = faces
        .par_iter()
        .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect())
        .collect();
    let cell_index = cells
        .par_iter()
        .map(|cs: &Vec<QuotientCell>| cs.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect())
        .collect();
    ExtendedComplex {
        dim: d.triangulation.ambient_dim,
        degree: d.triangulation.degree,
        datum: d.clone(),
        faces,
        cells,
        kinds,
        face_index,
        cell_index,
    }
}

impl ExtendedComplex {
    pub fn census(&self) -> CellCensus {
        let n = self.dim;
        let mut c = CellCensus { plus: vec![0; n + 1], minus: vec![0; n + 1], mixed: vec![0; n + 1] };
        for (k, ks) in self.kinds.iter().enumerate() {
            for kind in ks {
                match kind {
                    CellKind::Plus => c.plus[k] += 1,
                    CellKind::Minus => c.minus[k] += 1,
                    CellKind::Mixed => c.mixed[k] += 1,
                }
            }
        }
        c
    }

    pub fn face_id(&self, face: &[u32]) -> Option<u32> {
        self.face_index.get(face.len().checked_sub(1)?)?.get(face).copied()
    }

    pub fn face_points(&self, face: &[u32]) -> Vec<&[i64]> {
        let t = &self.datum.triangulation;
        face.iter().map(|&v| t.vertices.point(v).coords.as_slice()).collect()
    }

    pub fn canonical(&self, face: &[u32], mask: u32) -> u32 {
        crate::signs::canonical_mask(&self.face_points(face), self.degree, mask)
    }

    /// Id of the quotient cell holding the copy of `face` in orthant `mask`.
    pub fn cell_of(&self, face: &[u32], mask: u32) -> Option<u32> {
        let k = face.len().checked_sub(1)?;
        let f = self.face_id(face)?;
        let c = QuotientCell { face: f, mask: self.canonical(face, mask) };
        self.cell_index[k].get(&c).copied()
    }

    pub fn cell_vertices(&self, k: usize, id: u32) -> &[u32] {
        &self.faces[k][self.cells[k][id as usize].face as usize]
    }

    /// Sign of the copy of base vertex `v` in orthant `mask`.
    pub fn vertex_sign(&self, v: u32, mask: u32) -> u8 {
        let p = self.datum.triangulation.vertices.point(v);
        extend_sign_raw(self.datum.signs.signs[v as usize], p.parity_mask(), mask)
    }

    /// Number of raw copies before any identification: `2^n` per maximal simplex.
    pub fn raw_maximal_copies(&self) -> usize {
        self.datum.triangulation.maximal_simplices.len() << self.dim
    }

    /// The mod 2 boundary of every cell of dimension `k >= 1`, over cells of
    /// dimension `k - 1`.
    pub fn boundary(&self, k: usize) -> crate::homology::Z2Matrix {
        let cols = self.cells[k]
            .par_iter()
            .map(|c| {
                let f = &self.faces[k][c.face as usize];
                (0..f.len())
                    .map(|i| {
                        let sub: Vec<u32> = f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                        self.cell_of(&sub, c.mask).expect("faces of cells are cells")
                    })
                    .collect()
            })
            .collect();
        crate::homology::Z2Matrix::new(self.cells[k - 1].len(), cols)
    }

    /// The quotient as a chain complex.
    pub fn chain_complex(&self) -> crate::homology::ChainComplex {
        let counts = self.cells.iter().map(|c| c.len()).collect();
        let boundaries = (1..=self.dim).map(|k| self.boundary(k)).collect();
        crate::homology::ChainComplex::new(counts, boundaries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti;
    use crate::lattice::{LatticePoint, LatticeSimplex, VertexTable};
    use crate::signs::{SignDistribution, MINUS};
    use crate::triangulation::{build_iv3, build_iv4, Construction, Iv3Params, Iv4Flavor};

    fn single_simplex(points: Vec<Vec<i64>>, degree: i64, signs: Vec<u8>) -> Datum {
        let n = points[0].len();
        let table = VertexTable::from_points(n, points.into_iter().map(LatticePoint::new).collect()).unwrap();
        let ids: Vec<u32> = (0..table.len() as u32).collect();
        let t = Triangulation::new(n, degree, table, vec![LatticeSimplex::new(ids).unwrap()], Construction::Custom {});
        Datum::new(t, SignDistribution { signs }).unwrap()
    }

    #[test]
    fn one_triangle_quotient_is_projective_plane() {
        let d = single_simplex(vec![vec![0, 0], vec![1, 0], vec![0, 1]], 1, vec![PLUS, PLUS, MINUS]);
        let e = extend(&d);
        assert_eq!(e.census().euler_quotient(), 1);
        // the two far corners are glued to their antipodes
        assert_eq!(e.cells.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![3, 6, 4]);
        let cc = e.chain_complex();
        assert!(cc.is_complex());
        assert_eq!(betti(&cc), vec![1, 1, 1]);
    }

    #[test]
    fn iv3_raw_and_quotient_counts() {
        let t = build_iv3(&Iv3Params::standard(3)).unwrap();
        let e = extend(&Datum::standard(t).unwrap());
        assert_eq!(e.raw_maximal_copies(), 216);
        assert_eq!(e.census().euler_quotient(), 0);
        let cc = e.chain_complex();
        assert!(cc.is_complex());
        assert_eq!(betti(&cc), vec![1, 1, 1, 1]);
    }

    #[test]
    fn boundary_corner_has_one_copy() {
        let t = build_iv4(4, Iv4Flavor::Odd).unwrap();
        let e = extend(&Datum::standard(t).unwrap());
        let v = e.datum.triangulation.vertices.id_of_coords(&[0, 0, 0, 4]).unwrap();
        assert_eq!(copy_masks(&e.face_points(&[v]), 4), vec![0]);
        assert_eq!(e.cell_of(&[v], 0b1000), e.cell_of(&[v], 0));
        assert_eq!(e.census().euler_quotient(), 1);
    }

    #[test]
    fn chi_plus_of_iv4() {
        for (m, flavor, expected) in [(4, Iv4Flavor::Odd, -20), (4, Iv4Flavor::Even, -20), (6, Iv4Flavor::Even, -120)] {
            let d = Datum::standard(build_iv4(m, flavor).unwrap()).unwrap();
            assert_eq!(cell_census(&d).chi_plus(), expected, "m={m} {flavor:?}");
        }
    }

    #[test]
    fn all_minus_has_no_plus_cell_in_the_positive_orthant() {
        // copies in other orthants still change sign with parity
        let t = build_iv4(4, Iv4Flavor::Odd).unwrap();
        let n = t.vertices.len();
        let d = Datum::new(t, SignDistribution::constant(n, MINUS)).unwrap();
        let e = extend(&d);
        for (k, cells) in e.cells.iter().enumerate() {
            for (i, c) in cells.iter().enumerate() {
                if c.mask == 0 {
                    assert_ne!(e.kinds[k][i], CellKind::Plus);
                }
            }
        }
        let (counts, _) = count_all_plus(&e);
        assert!(counts.iter().any(|&c| c > 0));
    }

    #[test]
    fn emptiness_count_matches_mixed_count() {
        for m in [3, 4] {
            let d = Datum::standard(build_iv3(&Iv3Params::standard(m)).unwrap()).unwrap();
            let c = cell_census(&d);
            assert_eq!(c.euler_by_emptiness(), c.euler_gamma());
            assert_eq!(c.euler_gamma(), -m * m * m / 3 + 4 * m / 3);
        }
    }
}
