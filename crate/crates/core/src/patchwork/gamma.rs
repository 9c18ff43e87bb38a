//! The hypersurface: one piece per sign-changing cell, spanned by the
//! midpoints of its sign-changing edges.
//!
//! A piece in a cell with `p` vertices of one sign and `q` of the other is a
//! product of simplices. Two complexes are built from the pieces: the pieces
//! themselves as cells (cheap, used for homology of large data), and a
//! simplicial complex obtained by pulling every piece from its smallest
//! midpoint (used for export and audits).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CellKind, ExtendedComplex};
use crate::homology::{ChainComplex, Z2Matrix};
use crate::signs::PLUS;

const NONE: u32 = u32::MAX;

/// Midpoint of a sign-changing edge of the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaVertex {
    /// Quotient vertex ids of the edge's endpoints, increasing.
    pub ends: [u32; 2],
    /// Quotient edge id.
    pub edge: u32,
    /// Twice the coordinates, in the canonical copy of the edge.
    pub coords2: Vec<i64>,
    pub mask: u32,
}

/// A simplex of the triangulated hypersurface and the quotient cell whose
/// relative interior contains it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaSimplex {
    pub vertices: Vec<u32>,
    pub carrier_dim: u32,
    pub carrier: u32,
}

/// The hypersurface as a simplicial complex.
#[derive(Clone, Debug, Default)]
pub struct GammaComplex {
    pub dim: usize,
    pub vertices: Vec<GammaVertex>,
    /// Simplices by dimension; dimension 0 lists the vertices in order.
    pub simplices: Vec<Vec<GammaSimplex>>,
    pub boundaries: Vec<Z2Matrix>,
}

impl GammaComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::new(self.counts(), self.boundaries.clone())
    }

    /// Every codimension-one simplex lies in exactly two top simplices.
    pub fn is_closed(&self) -> bool {
        top_faces_twice(self.boundaries.last(), self.simplices.get(self.dim.wrapping_sub(1)).map_or(0, |s| s.len()))
    }

    pub fn euler(&self) -> i64 {
        self.chain_complex().euler()
    }
}

fn top_faces_twice(top: Option<&Z2Matrix>, faces: usize) -> bool {
    let Some(top) = top else { return true };
    let mut count = vec![0u32; faces];
    for c in &top.cols {
        for &i in c {
            count[i as usize] += 1;
        }
    }
    count.iter().all(|&c| c == 2)
}

/// Triangulation of the product of simplices with vertex labels `ids[i][j]`
/// obtained by pulling from the smallest label, recursively.
pub fn pulling_triangulation(ids: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let rows = ids.len();
    let cols = ids.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    if rows == 1 || cols == 1 {
        let mut s: Vec<u32> = ids.iter().flatten().copied().collect();
        s.sort_unstable();
        return vec![s];
    }
    let (mut i0, mut j0) = (0, 0);
    for (i, r) in ids.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if x < ids[i0][j0] {
                (i0, j0) = (i, j);
            }
        }
    }
    let apex = ids[i0][j0];
    let without_row: Vec<Vec<u32>> = ids.iter().enumerate().filter(|&(i, _)| i != i0).map(|(_, r)| r.clone()).collect();
    let without_col: Vec<Vec<u32>> = ids
        .iter()
        .map(|r| r.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, &x)| x).collect())
        .collect();
    let mut out = Vec::new();
    for mut s in pulling_triangulation(&without_row).into_iter().chain(pulling_triangulation(&without_col)) {
        s.push(apex);
        s.sort_unstable();
        out.push(s);
    }
    out
}

/// Maps each sign-changing quotient edge to its hypersurface vertex.
fn gamma_vertices(e: &ExtendedComplex) -> (Vec<GammaVertex>, Vec<u32>) {
    let mut verts: Vec<GammaVertex> = e.cells[1]
        .par_iter()
        .enumerate()
        .filter(|&(i, _)| e.kinds[1][i] == CellKind::Mixed)
        .map(|(i, c)| {
            let f = &e.faces[1][c.face as usize];
            let a = e.cell_of(&f[..1], c.mask).expect("vertex cell");
            let b = e.cell_of(&f[1..], c.mask).expect("vertex cell");
            let pts = e.face_points(f);
            let coords2 = (0..e.dim)
                .map(|k| {
                    let s = pts[0][k] + pts[1][k];
                    if c.mask >> k & 1 == 1 {
                        -s
                    } else {
                        s
                    }
                })
                .collect();
            GammaVertex { ends: [a.min(b), a.max(b)], edge: i as u32, coords2, mask: c.mask }
        })
        .collect();
    verts.par_sort_unstable_by_key(|v| (v.ends, v.edge));
    let mut of_edge = vec![NONE; e.cells[1].len()];
    for (i, v) in verts.iter().enumerate() {
        of_edge[v.edge as usize] = i as u32;
    }
    (verts, of_edge)
}

struct Ctx<'a> {
    e: &'a ExtendedComplex,
    of_edge: Vec<u32>,
    /// Base vertex ids of the endpoints of each hypersurface vertex.
    ends: Vec<[u32; 2]>,
}

impl Ctx<'_> {
    fn carrier(&self, verts: &[u32], mask: u32) -> (u32, u32) {
        let mut base: Vec<u32> = verts.iter().flat_map(|&v| self.ends[v as usize]).collect();
        base.sort_unstable();
        base.dedup();
        let k = base.len() - 1;
        (k as u32, self.e.cell_of(&base, mask).expect("carrier is a cell"))
    }

    /// Labels of the midpoints of a sign-changing cell, plus vertices by rows.
    fn labels(&self, face: &[u32], mask: u32) -> Vec<Vec<u32>> {
        let (plus, minus): (Vec<u32>, Vec<u32>) = face.iter().partition(|&&v| self.e.vertex_sign(v, mask) == PLUS);
        plus.iter()
            .map(|&a| {
                minus
                    .iter()
                    .map(|&b| {
                        let edge = self.e.cell_of(&[a.min(b), a.max(b)], mask).expect("edge cell");
                        self.of_edge[edge as usize]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Triangulates every piece by pulling and assembles the simplicial complex.
pub fn build_gamma(e: &ExtendedComplex) -> GammaComplex {
    let n = e.dim;
    let (vertices, of_edge) = gamma_vertices(e);
    let mut ends = vec![[0u32; 2]; vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        let f = &e.faces[1][e.cells[1][v.edge as usize].face as usize];
        ends[i] = [f[0], f[1]];
    }
    let ctx = Ctx { e, of_edge, ends };

    // every face of every top simplex, with its carrier
    let mut by_dim: Vec<Vec<GammaSimplex>> = vec![Vec::new(); n];
    let found: Vec<Vec<GammaSimplex>> = e.cells[n]
        .par_iter()
        .enumerate()
        .filter(|&(i, _)| e.kinds[n][i] == CellKind::Mixed)
        .map(|(_, c)| {
            let face = &e.faces[n][c.face as usize];
            let mut out = Vec::new();
            for top in pulling_triangulation(&ctx.labels(face, c.mask)) {
                let len = top.len();
                for s in 1u32..1 << len {
                    let verts: Vec<u32> = (0..len).filter(|&i| s >> i & 1 == 1).map(|i| top[i]).collect();
                    let (carrier_dim, carrier) = ctx.carrier(&verts, c.mask);
                    out.push(GammaSimplex { vertices: verts, carrier_dim, carrier });
                }
            }
            out
        })
        .collect();
    for s in found.into_iter().flatten() {
        by_dim[s.vertices.len() - 1].push(s);
    }
    by_dim.par_iter_mut().for_each(|v| {
        v.par_sort_unstable();
        v.dedup();
    });
    // vertices keep the midpoint order
    by_dim[0].sort_unstable_by_key(|s| s.vertices[0]);

    let index: Vec<HashMap<(&[u32], u32, u32), u32>> = by_dim
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, s)| ((s.vertices.as_slice(), s.carrier_dim, s.carrier), i as u32))
                .collect()
        })
        .collect();
    let boundaries: Vec<Z2Matrix> = (1..n)
        .map(|j| {
            let cols = by_dim[j]
                .par_iter()
                .map(|s| {
                    let mask = e.cells[s.carrier_dim as usize][s.carrier as usize].mask;
                    (0..s.vertices.len())
                        .map(|i| {
                            let sub: Vec<u32> =
                                s.vertices.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                            let (cd, c) = ctx.carrier(&sub, mask);
                            index[j - 1][&(sub.as_slice(), cd, c)]
                        })
                        .collect()
                })
                .collect();
            Z2Matrix::new(by_dim[j - 1].len(), cols)
        })
        .collect();
    drop(index);
    GammaComplex { dim: n - 1, vertices, simplices: by_dim, boundaries }
}

/// Checks that on every sign-changing codimension-one cell, the pulling
/// triangulation of its own piece appears in the complex.
pub fn faces_consistent(e: &ExtendedComplex, g: &GammaComplex) -> bool {
    let n = e.dim;
    if n < 2 {
        return true;
    }
    let (_, of_edge) = gamma_vertices(e);
    let ends = g
        .vertices
        .iter()
        .map(|v| {
            let f = &e.faces[1][e.cells[1][v.edge as usize].face as usize];
            [f[0], f[1]]
        })
        .collect();
    let ctx = Ctx { e, of_edge, ends };
    let top: std::collections::HashSet<&GammaSimplex> = g.simplices[n - 2].iter().collect();
    e.cells[n - 1].par_iter().enumerate().filter(|&(i, _)| e.kinds[n - 1][i] == CellKind::Mixed).all(|(i, c)| {
        let face = &e.faces[n - 1][c.face as usize];
        pulling_triangulation(&ctx.labels(face, c.mask)).into_iter().all(|s| {
            top.contains(&GammaSimplex { vertices: s, carrier_dim: (n - 1) as u32, carrier: i as u32 })
        })
    })
}

/// The hypersurface with its pieces as cells: a piece of dimension `j` sits
/// in a sign-changing cell of dimension `j + 1`, and its boundary consists
/// of the pieces in the sign-changing facets of that cell.
#[derive(Clone, Debug, Default)]
pub struct GammaCells {
    pub chain: ChainComplex,
    /// Quotient cell (of dimension `j + 1`) of every `j`-piece.
    pub carriers: Vec<Vec<u32>>,
    /// Every codimension-one piece lies in exactly two top pieces.
    pub closed: bool,
}

pub fn gamma_cells(e: &ExtendedComplex) -> GammaCells {
    let n = e.dim;
    let mut carriers: Vec<Vec<u32>> = Vec::new();
    let mut ids: Vec<Vec<u32>> = Vec::new();
    for k in 1..=n {
        let mut id = vec![NONE; e.cells[k].len()];
        let mut list = Vec::new();
        for (i, &kind) in e.kinds[k].iter().enumerate() {
            if kind == CellKind::Mixed {
                id[i] = list.len() as u32;
                list.push(i as u32);
            }
        }
        carriers.push(list);
        ids.push(id);
    }
    let mut raw_top: Option<Z2Matrix> = None;
    let mut boundaries = Vec::new();
    for j in 1..n {
        let k = j + 1;
        let cols: Vec<Vec<u32>> = carriers[j]
            .par_iter()
            .map(|&c| {
                let cell = e.cells[k][c as usize];
                let f = &e.faces[k][cell.face as usize];
                (0..f.len())
                    .filter_map(|i| {
                        let sub: Vec<u32> = f.iter().enumerate().filter(|&(x, _)| x != i).map(|(_, &v)| v).collect();
                        let sc = e.cell_of(&sub, cell.mask).expect("facet cell");
                        let g = ids[j - 1][sc as usize];
                        (g != NONE).then_some(g)
                    })
                    .collect()
            })
            .collect();
        if j == n - 1 {
            raw_top = Some(Z2Matrix { rows: carriers[j - 1].len(), cols: cols.clone() });
        }
        boundaries.push(Z2Matrix::new(carriers[j - 1].len(), cols));
    }
    let closed = top_faces_twice(raw_top.as_ref(), carriers.get(n.wrapping_sub(2)).map_or(0, |c| c.len()));
    let counts = carriers.iter().map(|c| c.len()).collect();
    GammaCells { chain: ChainComplex::new(counts, boundaries), carriers, closed }
}
