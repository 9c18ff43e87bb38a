//! Small-deviation triangulations of the tetrahedron of odd degree `2k+1`
//! and their propagation into the odd IV triangulation of the 4-simplex.

use std::collections::BTreeSet;

use num::integer::gcd;

use super::complete::{complete_primitive, CompletionInput};
use super::iv::{assemble_iv4, ConedLevel, Iv4Flavor};
use super::layered::{strip_triangulate, unit_segments, DiagonalRule, LayeredTetra, Pt, Tet, Tri};
use super::regular::solve_heights;
use super::tower::Tower;
use super::{Construction, Triangulation};
use crate::error::{Error, Result};

fn is_even2(p: &[i64]) -> bool {
    p[0] % 2 == 0 && p[1] % 2 == 0
}

fn check_params(k: i64, a: [i64; 3], b: [i64; 3]) -> Result<()> {
    if k < 4 {
        return Err(Error::BadParameters(format!("k = {k} must be at least 4")));
    }
    let bad = |msg: &str| Err(Error::BadParameters(format!("{msg}: a = {a:?}, b = {b:?}")));
    if a[1] != 0 || a[2] != 0 || a[0] <= 0 || a[0] >= 2 * k - 2 {
        return bad("a must lie inside the segment from the origin to (2k-2,0,0)");
    }
    if b[0] != 0 || b[2] != 0 || b[1] <= 0 || b[1] >= 2 * k - 2 {
        return bad("b must lie inside the segment from the origin to (0,2k-2,0)");
    }
    if a[0] % 2 == 0 || b[1] % 2 == 0 {
        return bad("a and b must be non-even points");
    }
    if gcd(a[0], b[1]) != 1 {
        return bad("[a,b] must have lattice length 1");
    }
    Ok(())
}

/// Lattice points at `x_3 = 1` removed from the vertex set: those strictly
/// inside the cone over the small base triangle or inside its two side faces.
pub fn sd3_omitted_points(k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for x1 in 0..k {
        for x2 in 0..k - x1 {
            if x1 + x2 >= 1 {
                out.push(vec![x1, x2, 1]);
            }
        }
    }
    out
}

/// Mandated segments of the base triangle `{x_3 = 0}`.
pub fn sd3_base_segments(k: i64, a: [i64; 3], b: [i64; 3]) -> Vec<[[i64; 2]; 2]> {
    let mut segs: Vec<[[i64; 2]; 2]> = (2 * k - 2..=2 * k).map(|r| [[r, 0], [0, r]]).collect();
    segs.push([[2 * k - 1, 0], [0, 2 * k - 2]]);
    segs.push([[0, 2 * k], [2 * k - 1, 0]]);
    segs.push([[0, 2 * k], [2 * k + 1, 0]]);
    segs.push([[a[0], a[1]], [b[0], b[1]]]);
    segs
}

fn p3(x: i64, y: i64, z: i64) -> Pt {
    vec![x, y, z]
}

fn cone(apex: &Pt, tris: &[Tri]) -> Vec<Tet> {
    tris.iter().map(|t| [apex.clone(), t[0].clone(), t[1].clone(), t[2].clone()]).collect()
}

fn join(s: &[i64], t: &[i64], u: &[i64], v: &[i64]) -> Vec<Tet> {
    let mut out = Vec::new();
    for x in unit_segments(s, t) {
        for y in unit_segments(u, v) {
            out.push([x[0].clone(), x[1].clone(), y[0].clone(), y[1].clone()]);
        }
    }
    out
}

/// Pieces of the SD triangulation, kept apart for the lift.
pub(crate) struct Sd3Parts {
    pub tets: Vec<Tet>,
    pub tower: Tower,
}

pub(crate) fn sd3_parts(k: i64, a: [i64; 3], b: [i64; 3]) -> Result<Sd3Parts> {
    check_params(k, a, b)?;
    let m = 2 * k + 1;
    let mut tets: Vec<Tet> = Vec::new();

    // upper part: IV triangulation of the tetrahedron above x3 = 2
    let upper = LayeredTetra {
        apex: p3(0, 0, m),
        corners: [p3(0, 0, 2), p3(2 * k - 1, 0, 2), p3(0, 2 * k - 1, 2)],
        side: 2 * k - 1,
        cone_corner: LayeredTetra::alternating(2 * k - 1, 2, 1),
        rule: DiagonalRule::Default,
    }
    .build(None)?;
    let top_slice = upper.slices[(2 * k - 1) as usize].clone();
    tets.extend(upper.tets);

    // base triangle
    let base = complete_primitive(&CompletionInput {
        polygon: vec![[0, 0], [m, 0], [0, m]],
        mandated: sd3_base_segments(k, a, b),
    })?;
    let base_tris: Vec<Tri> = base
        .triangles
        .iter()
        .map(|t| [p3(t[0][0], t[0][1], 0), p3(t[1][0], t[1][1], 0), p3(t[2][0], t[2][1], 0)])
        .collect();
    let (inner, strip): (Vec<Tri>, Vec<Tri>) = base_tris
        .into_iter()
        .partition(|t| t.iter().all(|p| p[0] + p[1] <= 2 * k));

    // the cone over the small base triangle, split along edges to special even points
    let apex_a = p3(0, 0, 2);
    for t in &inner {
        let even = t.iter().position(|p| is_even2(p));
        let special = even.filter(|&i| {
            let e = &t[i];
            (e[0] == 0 && e[1] == 0) || e[0] + e[1] == 2 * k
        });
        match special {
            Some(i) => {
                let e = &t[i];
                let q = p3(e[0] / 2, e[1] / 2, 1);
                let (v, w) = (&t[(i + 1) % 3], &t[(i + 2) % 3]);
                tets.push([q.clone(), e.clone(), v.clone(), w.clone()]);
                tets.push([q, apex_a.clone(), v.clone(), w.clone()]);
            }
            None => tets.push([apex_a.clone(), t[0].clone(), t[1].clone(), t[2].clone()]),
        }
    }

    // the face of that cone on the plane x1 + x2 + k x3 = 2k
    let mut face: Vec<Tri> = Vec::new();
    for s in unit_segments(&p3(2 * k, 0, 0), &p3(0, 2 * k, 0)) {
        let (e, o) = if is_even2(&s[0]) { (&s[0], &s[1]) } else { (&s[1], &s[0]) };
        let q = p3(e[0] / 2, e[1] / 2, 1);
        face.push([q.clone(), e.clone(), o.clone()]);
        face.push([q, apex_a.clone(), o.clone()]);
    }

    // the quadrangle C1 at x3 = 1, sliced parallel to its long side
    let rows: Vec<Vec<Pt>> = (0..=k)
        .map(|j| {
            if j == 0 {
                vec![p3(k, 0, 1)]
            } else {
                (0..=k + j).map(|i| p3(k + j - i, i, 1)).collect()
            }
        })
        .collect();
    let quad = strip_triangulate(&rows, DiagonalRule::Default, &mut Tower::new(), &[0], &[1])?;

    let pp = p3(0, k + 1, 1);
    let q1 = p3(2 * k, 0, 1);
    let q2 = p3(0, 2 * k, 1);
    let b1 = p3(2 * k, 0, 0);
    let b2 = p3(0, 2 * k, 0);
    let b1p = p3(2 * k + 1, 0, 0);
    tets.extend(cone(&pp, &face));
    tets.extend(cone(&apex_a, &quad));
    tets.extend(cone(&q1, &top_slice));
    tets.extend(join(&apex_a, &p3(0, 2 * k - 1, 2), &q1, &q2));
    tets.extend(cone(&q2, &strip));
    tets.extend(cone(&b1, &quad));
    tets.extend(join(&b1, &b1p, &q1, &q2));
    tets.extend(join(&b1, &b2, &pp, &q2));

    // The coarse pieces above do not form a regular subdivision on their own,
    // so the heights come from a single exactly checked solve.
    let simplices: Vec<Vec<Pt>> = tets.iter().map(|t| t.to_vec()).collect();
    let mut tower = Tower::new();
    for (p, h) in solve_heights(&simplices)? {
        tower.set_int(&[0], &p, h);
    }
    Ok(Sd3Parts { tets, tower })
}

pub(crate) fn build_sd3_tower(k: i64, a: [i64; 3], b: [i64; 3]) -> Result<(Triangulation, Tower)> {
    let parts = sd3_parts(k, a, b)?;
    let simplices: Vec<Vec<Pt>> = parts.tets.into_iter().map(|t| t.to_vec()).collect();
    let t = Triangulation::from_coordinate_simplices(3, 2 * k + 1, &simplices, Construction::Sd3 { k, a, b })?;
    Ok((t, parts.tower))
}

/// The `(a,b)`-SD triangulation of the tetrahedron of degree `2k+1`.
pub fn build_sd3(k: i64, a: [i64; 3], b: [i64; 3]) -> Result<Triangulation> {
    Ok(build_sd3_tower(k, a, b)?.0)
}

/// Levels `c = 2k+1` of the 4-simplex of degree `m` that carry an SD datum.
pub fn sd4_levels(m: i64) -> Vec<i64> {
    (4..).map(|k| 2 * k + 1).take_while(|&c| c <= m - 1).collect()
}

pub(crate) fn sd4_omitted_points(m: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for c in sd4_levels(m) {
        for p in sd3_omitted_points((c - 1) / 2) {
            out.push(vec![p[0], p[1], p[2], m - c]);
        }
    }
    out
}

pub(crate) fn build_sd4_tower(m: i64) -> Result<(Triangulation, Tower)> {
    if m % 2 != 0 || m < 10 {
        return Err(Error::BadParameters(format!("degree {m} must be even and at least 10")));
    }
    let levels: BTreeSet<i64> = sd4_levels(m).into_iter().collect();
    let coned = |c: i64| -> Result<Option<ConedLevel>> {
        if !levels.contains(&c) {
            return Ok(None);
        }
        let k = (c - 1) / 2;
        let parts = sd3_parts(k, [2 * k - 3, 0, 0], [0, 2 * k - 5, 0])?;
        let lift = |p: &[i64]| vec![p[0], p[1], p[2], m - c];
        let tets = parts
            .tets
            .iter()
            .map(|t| [lift(&t[0]), lift(&t[1]), lift(&t[2]), lift(&t[3])])
            .collect();
        let mut tower = Tower::new();
        tower.absorb(&[], &parts.tower, lift);
        Ok(Some(ConedLevel { tets, tower }))
    };
    let (simplices, tower) = assemble_iv4(m, Iv4Flavor::Odd, &coned)?;
    let simplices: Vec<Vec<Pt>> = simplices.into_iter().map(|s| s.to_vec()).collect();
    let t = Triangulation::from_coordinate_simplices(4, m, &simplices, Construction::Sd4 { degree: m })?;
    Ok((t, tower))
}

/// The SD triangulation of the 4-simplex of even degree `m >= 10`.
pub fn build_sd4(m: i64) -> Result<Triangulation> {
    Ok(build_sd4_tower(m)?.0)
}
