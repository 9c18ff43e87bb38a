//! Itenberg-Viro triangulations of the dilated tetrahedron and of the dilated
//! 4-simplex.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::layered::{strip_triangulate, unit_segments, BaseOverride, DiagonalRule, LayeredTetra, Pt, Tet, Tri};
use super::tower::Tower;
use super::{Construction, Triangulation};
use crate::error::{Error, Result};

/// Parameters of a three-dimensional IV triangulation.
///
/// Vertices of the simplex are numbered 0 (origin) and `i` (the point `m e_i`).
/// Slices are parallel to the face opposite `apex`; they are coned alternately
/// to the edges from `apex` to `e1` and to `e2`, with `e1` used on the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Iv3Params {
    pub degree: i64,
    pub apex: usize,
    pub e1: usize,
    pub e2: usize,
    #[serde(default)]
    pub diagonal: DiagonalRule,
}

impl Iv3Params {
    /// Apex `(0,0,m)`, base `{x_3 = 0}`, first edge towards `(0,m,0)`.
    pub fn standard(degree: i64) -> Self {
        Self { degree, apex: 3, e1: 2, e2: 1, diagonal: DiagonalRule::Default }
    }
}

fn corner(n: usize, m: i64, i: usize) -> Pt {
    let mut p = vec![0; n];
    if i > 0 {
        p[i - 1] = m;
    }
    p
}

pub(crate) fn iv3_layered(p: &Iv3Params) -> Result<LayeredTetra> {
    let Iv3Params { degree: m, apex, e1, e2, diagonal } = *p;
    if m < 1 {
        return Err(Error::BadParameters(format!("degree {m} must be at least 1")));
    }
    if apex > 3 || e1 > 3 || e2 > 3 || e1 == e2 || e1 == apex || e2 == apex {
        return Err(Error::BadParameters(format!(
            "apex {apex} and edge ends {e1}, {e2} must be distinct vertices 0..=3"
        )));
    }
    let others: Vec<usize> = (0..4).filter(|&i| i != apex).collect();
    let idx = |v: usize| others.iter().position(|&o| o == v).unwrap();
    Ok(LayeredTetra {
        apex: corner(3, m, apex),
        corners: [corner(3, m, others[0]), corner(3, m, others[1]), corner(3, m, others[2])],
        side: m,
        cone_corner: LayeredTetra::alternating(m, idx(e1), idx(e2)),
        rule: diagonal,
    })
}

pub(crate) fn build_iv3_tower(p: &Iv3Params) -> Result<(Triangulation, Tower)> {
    let out = iv3_layered(p)?.build(None)?;
    let simplices: Vec<Vec<Pt>> = out.tets.into_iter().map(|t| t.to_vec()).collect();
    let t = Triangulation::from_coordinate_simplices(3, p.degree, &simplices, Construction::Iv3(p.clone()))?;
    Ok((t, out.tower))
}

/// The IV triangulation of the tetrahedron of degree `p.degree`.
pub fn build_iv3(p: &Iv3Params) -> Result<Triangulation> {
    Ok(build_iv3_tower(p)?.0)
}

/// The six simplices of the staircase triangulation of a product of two
/// triangles. `labels[i][j]` is the vertex labelled `ij`.
pub fn product_triangles_triangulation<T: Clone>(labels: &[[T; 3]; 3]) -> Vec<[T; 5]> {
    STAIRCASE
        .iter()
        .map(|s| s.map(|(i, j)| labels[i][j].clone()))
        .collect()
}

const STAIRCASE: [[(usize, usize); 5]; 6] = [
    [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2)],
    [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)],
    [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)],
    [(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)],
    [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)],
    [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Iv4Flavor {
    Odd,
    Even,
}

impl Iv4Flavor {
    /// Whether the level `R_k` (at `x_4 = m - k`) is coned rather than sliced.
    pub fn coned(self, k: i64) -> bool {
        match self {
            Iv4Flavor::Odd => k % 2 == 1,
            Iv4Flavor::Even => k % 2 == 0,
        }
    }

    /// Label of the triangle at `x_1+x_2+x_3 = l` of a sliced level.
    pub fn slice_label(self, l: i64) -> usize {
        let zero = match self {
            Iv4Flavor::Odd => l % 2 == 1,
            Iv4Flavor::Even => l % 2 == 0,
        };
        if zero {
            0
        } else {
            2
        }
    }
}

/// A triangle at `x_1+x_2+x_3 = side` inside one level, with its triangulation.
struct LabelledTriangle {
    side: i64,
    corners: [Pt; 3],
    triangles: Vec<Tri>,
}

impl LabelledTriangle {
    /// Pieces of the face spanned by the given corners, or `None` if the face
    /// collapses (a point triangle asked for more than one corner).
    fn face_pieces(&self, js: &[usize]) -> Option<Vec<Vec<Pt>>> {
        match js.len() {
            1 => Some(vec![vec![self.corners[js[0]].clone()]]),
            _ if self.side == 0 => None,
            2 => Some(
                unit_segments(&self.corners[js[0]], &self.corners[js[1]])
                    .into_iter()
                    .map(|s| s.to_vec())
                    .collect(),
            ),
            _ => Some(self.triangles.iter().map(|t| t.to_vec()).collect()),
        }
    }
}

fn level_point(x: [i64; 3], x4: i64) -> Pt {
    vec![x[0], x[1], x[2], x4]
}

/// Rows of the triangle `x_1+x_2+x_3 = l` at height `x4`, starting at corner `e`.
fn triangle_rows(l: i64, x4: i64, e: usize) -> Vec<Vec<Pt>> {
    let others: Vec<usize> = (0..3).filter(|&i| i != e).collect();
    (0..=l)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let mut a = [0i64; 3];
                    a[e] = l - j;
                    a[others[0]] = j - i;
                    a[others[1]] = i;
                    level_point(a, x4)
                })
                .collect()
        })
        .collect()
}

fn tri_corners(l: i64, x4: i64) -> [Pt; 3] {
    [
        level_point([l, 0, 0], x4),
        level_point([0, l, 0], x4),
        level_point([0, 0, l], x4),
    ]
}

/// Replacement triangulation of a coned level, in 4D coordinates.
pub(crate) struct ConedLevel {
    pub tets: Vec<Tet>,
    pub tower: Tower,
}

/// The standard IV triangulation of the coned level `R_c`.
pub(crate) fn iv_coned_level(
    m: i64,
    c: i64,
    flavor: Iv4Flavor,
    base: Option<&BaseOverride>,
) -> Result<ConedLevel> {
    let x4 = m - c;
    let o = level_point([0, 0, 0], x4);
    let [c1, c2, c3] = tri_corners(c, x4);
    let tetra = match flavor {
        // apex on the x3 axis, base {x3 = 0}; edges towards the x2 then x1 corner
        Iv4Flavor::Odd => LayeredTetra {
            apex: c3,
            corners: [o, c1, c2],
            side: c,
            cone_corner: LayeredTetra::alternating(c, 2, 1),
            rule: DiagonalRule::Default,
        },
        // apex at the origin of the level, base the top triangle
        Iv4Flavor::Even => LayeredTetra {
            apex: o,
            corners: [c1, c2, c3],
            side: c,
            cone_corner: LayeredTetra::alternating(c, 0, 2),
            rule: DiagonalRule::Default,
        },
    };
    let out = tetra.build(base)?;
    Ok(ConedLevel { tets: out.tets, tower: out.tower })
}

/// Triangles of the top face `x_1+x_2+x_3 = c` of a triangulated level.
fn top_triangles(tets: &[Tet], c: i64) -> Vec<Tri> {
    let mut set: BTreeSet<Vec<Pt>> = BTreeSet::new();
    for t in tets {
        let top: Vec<Pt> = t.iter().filter(|p| p[0] + p[1] + p[2] == c).cloned().collect();
        if top.len() == 3 {
            let mut top = top;
            top.sort();
            set.insert(top);
        }
    }
    set.into_iter().map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]).collect()
}

/// Assembles an IV triangulation of the dilated 4-simplex. `coned` may supply
/// a replacement for the triangulation of any coned level.
pub(crate) fn assemble_iv4(
    m: i64,
    flavor: Iv4Flavor,
    coned: &dyn Fn(i64) -> Result<Option<ConedLevel>>,
) -> Result<(Vec<Tet5>, Tower)> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::BadParameters(format!("degree {m} must be even and at least 2")));
    }
    let mut tower = Tower::new();
    let mut level_tets: Vec<Option<Vec<Tet>>> = vec![None; (m + 1) as usize];
    let mut slices: Vec<Vec<LabelledTriangle>> = (0..=m).map(|_| Vec::new()).collect();
    for k in 0..=m {
        let x4 = m - k;
        for p in crate::lattice::simplex_lattice_points(3, k) {
            let q = level_point([p[0], p[1], p[2]], x4);
            tower.set_int(&[0], &q, x4 * x4);
            let s = p[0] + p[1] + p[2];
            let sliced = !flavor.coned(k);
            tower.set_int(&[1], &q, if sliced { s * s } else { 0 });
            let label = if sliced { flavor.slice_label(s) } else { 1 };
            tower.set_int(&[2], &q, (label as i64 + 1) * (2 * p[0] + p[1]));
        }
        if flavor.coned(k) {
            if k == 0 {
                continue;
            }
            let lvl = match coned(k)? {
                Some(l) => l,
                None => iv_coned_level(m, k, flavor, None)?,
            };
            tower.absorb(&[3], &lvl.tower, |p| p.to_vec());
            slices[k as usize] = vec![LabelledTriangle {
                side: k,
                corners: tri_corners(k, x4),
                triangles: top_triangles(&lvl.tets, k),
            }];
            level_tets[k as usize] = Some(lvl.tets);
        } else {
            for l in 0..=k {
                let e = if flavor.slice_label(l) == 0 { 2 } else { 0 };
                let rows = triangle_rows(l, x4, e);
                let triangles = strip_triangulate(&rows, DiagonalRule::Default, &mut tower, &[3, 2], &[3, 3])?;
                slices[k as usize].push(LabelledTriangle { side: l, corners: tri_corners(l, x4), triangles });
            }
        }
    }
    let mut out: Vec<Tet5> = Vec::new();
    for k in 1..=m {
        let (c, o) = if flavor.coned(k) { (k, k - 1) } else { (k - 1, k) };
        let apex = level_point([0, 0, 0], m - o);
        if let Some(tets) = &level_tets[c as usize] {
            for t in tets {
                out.push([t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone(), apex.clone()]);
            }
        }
        let top: &LabelledTriangle = if c == 0 {
            &LabelledTriangle { side: 0, corners: tri_corners(0, m), triangles: Vec::new() }
        } else {
            &slices[c as usize][0]
        };
        for l in 0..o {
            let lo = &slices[o as usize][l as usize];
            let hi = &slices[o as usize][(l + 1) as usize];
            let mut by_label: [Option<&LabelledTriangle>; 3] = [None, None, None];
            by_label[flavor.slice_label(l)] = Some(lo);
            by_label[flavor.slice_label(l + 1)] = Some(hi);
            by_label[1] = Some(top);
            let tris: Vec<&LabelledTriangle> = by_label.iter().map(|t| t.unwrap()).collect();
            'simplex: for s in STAIRCASE.iter() {
                let mut pieces: Vec<Vec<Vec<Pt>>> = Vec::with_capacity(3);
                for (i, t) in tris.iter().enumerate() {
                    let js: Vec<usize> = s.iter().filter(|(a, _)| *a == i).map(|(_, j)| *j).collect();
                    match t.face_pieces(&js) {
                        Some(p) => pieces.push(p),
                        None => continue 'simplex,
                    }
                }
                for a in &pieces[0] {
                    for b in &pieces[1] {
                        for cc in &pieces[2] {
                            let v: Vec<Pt> = a.iter().chain(b).chain(cc).cloned().collect();
                            out.push([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone()]);
                        }
                    }
                }
            }
        }
    }
    Ok((out, tower))
}

pub type Tet5 = [Pt; 5];

pub(crate) fn build_iv4_tower(m: i64, flavor: Iv4Flavor) -> Result<(Triangulation, Tower)> {
    let (simplices, tower) = assemble_iv4(m, flavor, &|_| Ok(None))?;
    let construction = match flavor {
        Iv4Flavor::Odd => Construction::Iv4Odd { degree: m },
        Iv4Flavor::Even => Construction::Iv4Even { degree: m },
    };
    let simplices: Vec<Vec<Pt>> = simplices.into_iter().map(|s| s.to_vec()).collect();
    Ok((Triangulation::from_coordinate_simplices(4, m, &simplices, construction)?, tower))
}

/// The odd or even IV triangulation of the 4-simplex of even degree `m`.
pub fn build_iv4(m: i64, flavor: Iv4Flavor) -> Result<Triangulation> {
    Ok(build_iv4_tower(m, flavor)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{certify_convexity, construct_lift, validate};

    #[test]
    fn iv3_small_degrees_valid_and_convex() {
        for m in 1..=6 {
            let t = build_iv3(&Iv3Params::standard(m)).unwrap();
            assert_eq!(t.maximal_simplices.len() as i64, m * m * m);
            let rep = validate(&t);
            assert!(rep.is_valid(), "m={m}: {rep:?}");
            let cert = construct_lift(&t).unwrap();
            assert!(certify_convexity(&t, &cert).0);
        }
    }

    #[test]
    fn iv3_other_parameters() {
        for (apex, e1, e2) in [(0, 1, 2), (1, 3, 0), (2, 0, 3)] {
            for diagonal in [DiagonalRule::Default, DiagonalRule::Flipped] {
                let p = Iv3Params { degree: 5, apex, e1, e2, diagonal };
                let t = build_iv3(&p).unwrap();
                assert!(validate(&t).is_valid());
                assert!(construct_lift(&t).is_ok());
            }
        }
    }

    #[test]
    fn iv3_rejects_bad_edges() {
        let p = Iv3Params { degree: 3, apex: 3, e1: 3, e2: 1, diagonal: DiagonalRule::Default };
        assert!(matches!(build_iv3(&p), Err(Error::BadParameters(_))));
    }

    #[test]
    fn staircase_shared_tetrahedra() {
        let labels = [[0u8, 1, 2], [10, 11, 12], [20, 21, 22]];
        let simplices = product_triangles_triangulation(&labels);
        assert_eq!(simplices.len(), 6);
        let mut count = std::collections::HashMap::new();
        for s in &simplices {
            for skip in 0..5 {
                let mut f: Vec<u8> = s.to_vec();
                f.remove(skip);
                f.sort();
                *count.entry(f).or_insert(0) += 1;
            }
        }
        let mut shared: Vec<Vec<u8>> = count.into_iter().filter(|(_, c)| *c == 2).map(|(f, _)| f).collect();
        shared.sort();
        let mut expected = vec![
            vec![0, 1, 12, 22],
            vec![0, 1, 11, 22],
            vec![0, 11, 12, 22],
            vec![0, 11, 21, 22],
            vec![0, 10, 11, 22],
            vec![0, 10, 21, 22],
        ];
        expected.sort();
        assert_eq!(shared, expected);
    }

    #[test]
    fn iv4_small_valid_and_convex() {
        for flavor in [Iv4Flavor::Odd, Iv4Flavor::Even] {
            for m in [2, 4] {
                let t = build_iv4(m, flavor).unwrap();
                let rep = validate(&t);
                assert!(rep.is_valid(), "{flavor:?} m={m}: {rep:?}");
                assert_eq!(t.maximal_simplices.len() as i64, m.pow(4));
                let cert = construct_lift(&t).unwrap();
                assert!(certify_convexity(&t, &cert).0);
            }
        }
    }

    #[test]
    fn iv4_rejects_odd_degree() {
        assert!(matches!(build_iv4(5, Iv4Flavor::Odd), Err(Error::BadParameters(_))));
    }
}
