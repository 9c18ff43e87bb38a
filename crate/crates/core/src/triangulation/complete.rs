//! Canonical primitive completion of a lattice polygon around mandated segments.
//!
//! The result is the regular triangulation of all lattice points of the
//! polygon for a lexicographic tower of heights: creases along every mandated
//! chord, cone functions pulling interior endpoints of the other mandated
//! segments, then a strictly convex quadratic with a bilinear tie-break.

use std::collections::BTreeSet;

use num::integer::gcd;

use super::tower::{Tower, Q};
use crate::error::{Error, Result};

pub type P2 = [i64; 2];

/// A convex lattice polygon (vertices in cyclic order) and segments that must
/// appear as unions of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionInput {
    pub polygon: Vec<P2>,
    pub mandated: Vec<[P2; 2]>,
}

/// Triangles of the completion and the tower realising it.
#[derive(Clone, Debug)]
pub struct Completion {
    pub triangles: Vec<[P2; 3]>,
    pub tower: Tower,
}

fn cross(o: P2, a: P2, b: P2) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Primitive affine function vanishing on the line through `a` and `b`.
fn line_function(a: P2, b: P2) -> [i64; 3] {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let g = gcd(dx, dy);
    let (nx, ny) = (-dy / g, dx / g);
    [nx, ny, -(nx * a[0] + ny * a[1])]
}

fn eval(l: &[i64; 3], p: P2) -> i64 {
    l[0] * p[0] + l[1] * p[1] + l[2]
}

/// Inward-facing edge functions of a convex polygon.
fn edge_functions(poly: &[P2]) -> Result<Vec<[i64; 3]>> {
    let n = poly.len();
    if n < 3 {
        return Err(Error::BadRegion("polygon needs at least three vertices".into()));
    }
    let orient = (0..n).map(|i| cross(poly[i], poly[(i + 1) % n], poly[(i + 2) % n])).collect::<Vec<_>>();
    let sign = orient.iter().find(|&&o| o != 0).copied().unwrap_or(0).signum();
    if sign == 0 || orient.iter().any(|&o| o * sign < 0) {
        return Err(Error::BadRegion("polygon is not convex".into()));
    }
    Ok((0..n)
        .map(|i| {
            let mut l = line_function(poly[i], poly[(i + 1) % n]);
            if sign < 0 {
                l = [-l[0], -l[1], -l[2]];
            }
            l
        })
        .collect())
}

/// All lattice points of a convex polygon, sorted.
pub fn polygon_lattice_points(poly: &[P2]) -> Result<Vec<P2>> {
    let edges = edge_functions(poly)?;
    let (x0, x1) = (poly.iter().map(|p| p[0]).min().unwrap(), poly.iter().map(|p| p[0]).max().unwrap());
    let (y0, y1) = (poly.iter().map(|p| p[1]).min().unwrap(), poly.iter().map(|p| p[1]).max().unwrap());
    let mut pts = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            if edges.iter().all(|l| eval(l, [x, y]) >= 0) {
                pts.push([x, y]);
            }
        }
    }
    Ok(pts)
}

fn on_boundary(edges: &[[i64; 3]], p: P2) -> bool {
    edges.iter().any(|l| eval(l, p) == 0)
}

fn segments_cross(a: [P2; 2], b: [P2; 2]) -> bool {
    let d1 = cross(a[0], a[1], b[0]);
    let d2 = cross(a[0], a[1], b[1]);
    let d3 = cross(b[0], b[1], a[0]);
    let d4 = cross(b[0], b[1], a[1]);
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Unit edges making up a lattice segment.
fn unit_edges(s: [P2; 2]) -> Vec<(P2, P2)> {
    let (dx, dy) = (s[1][0] - s[0][0], s[1][1] - s[0][1]);
    let g = gcd(dx, dy);
    (0..g)
        .map(|t| {
            let p = [s[0][0] + dx / g * t, s[0][1] + dy / g * t];
            let q = [s[0][0] + dx / g * (t + 1), s[0][1] + dy / g * (t + 1)];
            if p < q {
                (p, q)
            } else {
                (q, p)
            }
        })
        .collect()
}

/// Heights of the canonical completion.
fn completion_tower(input: &CompletionInput, points: &[P2], edges: &[[i64; 3]]) -> Tower {
    let mut tower = Tower::new();
    let mut chords = Vec::new();
    let mut pulled: BTreeSet<P2> = BTreeSet::new();
    for s in &input.mandated {
        let full = on_boundary(edges, s[0]) && on_boundary(edges, s[1]);
        if full {
            chords.push(line_function(s[0], s[1]));
        } else {
            for &p in s {
                if !on_boundary(edges, p) {
                    pulled.insert(p);
                }
            }
        }
    }
    for &p in points {
        let crease: i64 = chords.iter().map(|l| eval(l, p).abs()).sum();
        tower.set_int(&[0], &p, crease);
        tower.set_int(&[2], &p, p[0] * p[0] + 4 * p[1] * p[1]);
        tower.set_int(&[3], &p, p[0] * p[1]);
    }
    for (i, &c) in pulled.iter().enumerate() {
        // The cell of `c` cut out by the polygon and the chords, as half-planes
        // positive at `c`.
        let mut sides: Vec<[i64; 3]> = edges.to_vec();
        for l in &chords {
            let v = eval(l, c);
            if v != 0 {
                sides.push(if v > 0 { *l } else { [-l[0], -l[1], -l[2]] });
            }
        }
        for &p in points {
            if sides.iter().any(|l| eval(l, p) < 0) {
                continue;
            }
            // gauge of the cell centred at c, shifted so c sits at -1
            let h = sides
                .iter()
                .map(|l| Q::new(-eval(l, p), eval(l, c)))
                .max()
                .unwrap();
            tower.set(&[1, i as u32], &p, h);
        }
    }
    tower
}

/// Completes `input` into a primitive regular triangulation of the polygon.
pub fn complete_primitive(input: &CompletionInput) -> Result<Completion> {
    let edges = edge_functions(&input.polygon)?;
    let points = polygon_lattice_points(&input.polygon)?;
    for (i, a) in input.mandated.iter().enumerate() {
        if a[0] == a[1] {
            return Err(Error::BadConstraints(format!("segment {a:?} is a point")));
        }
        for &p in a {
            if edges.iter().any(|l| eval(l, p) < 0) {
                return Err(Error::BadConstraints(format!("endpoint {p:?} outside the region")));
            }
        }
        for b in &input.mandated[i + 1..] {
            if segments_cross(*a, *b) {
                return Err(Error::BadConstraints(format!("segments {a:?} and {b:?} cross")));
            }
        }
    }
    let tower = completion_tower(input, &points, &edges);
    let vecs: Vec<Vec<i64>> = points.iter().map(|p| p.to_vec()).collect();
    let levels = tower.integer_levels(&vecs);
    let n = points.len();
    // lexicographic "x lies strictly above the lifted plane of (a,b,c)"
    let above = |a: usize, b: usize, c: usize, x: usize| -> bool {
        let area = cross(points[a], points[b], points[c]);
        let wa = cross(points[x], points[b], points[c]);
        let wb = cross(points[a], points[x], points[c]);
        let wc = cross(points[a], points[b], points[x]);
        for lv in &levels {
            let v = (area * lv[x] - wa * lv[a] - wb * lv[b] - wc * lv[c]) as i128 * area.signum() as i128;
            if v != 0 {
                return v > 0;
            }
        }
        false
    };
    let mut triangles = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if cross(points[a], points[b], points[c]).abs() != 1 {
                    continue;
                }
                if (0..n).all(|x| x == a || x == b || x == c || above(a, b, c, x)) {
                    triangles.push([points[a], points[b], points[c]]);
                }
            }
        }
    }
    let doubled_area: i64 = {
        let p = &input.polygon;
        (0..p.len()).map(|i| cross([0, 0], p[i], p[(i + 1) % p.len()])).sum::<i64>().abs()
    };
    if triangles.len() as i64 != doubled_area {
        return Err(Error::BadConstraints(format!(
            "canonical heights leave {} of {} unit triangles",
            triangles.len(),
            doubled_area
        )));
    }
    let present: BTreeSet<(P2, P2)> = triangles
        .iter()
        .flat_map(|t| {
            [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]
                .into_iter()
                .map(|(p, q)| if p < q { (p, q) } else { (q, p) })
        })
        .collect();
    for s in &input.mandated {
        if unit_edges(*s).iter().any(|e| !present.contains(e)) {
            return Err(Error::BadConstraints(format!("segment {s:?} is not realised")));
        }
    }
    Ok(Completion { triangles, tower })
}

/// An affine lattice chart `y -> origin + y0 u + y1 v` of a lattice plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub origin: Vec<i64>,
    pub u: Vec<i64>,
    pub v: Vec<i64>,
}

impl Chart {
    /// The chart sending the standard triangle of side `k` onto `conv(a, b, c)`.
    pub fn of_triangle(a: &[i64], b: &[i64], c: &[i64], k: i64) -> Self {
        let step = |p: &[i64]| p.iter().zip(a).map(|(x, y)| (x - y) / k).collect();
        Self { origin: a.to_vec(), u: step(b), v: step(c) }
    }

    pub fn to_ambient(&self, y: &[i64]) -> Vec<i64> {
        self.origin
            .iter()
            .zip(&self.u)
            .zip(&self.v)
            .map(|((o, u), v)| o + u * y[0] + v * y[1])
            .collect()
    }

    /// Inverse of [`Chart::to_ambient`] for points of the plane.
    pub fn to_chart(&self, p: &[i64]) -> Option<P2> {
        let d: Vec<i64> = p.iter().zip(&self.origin).map(|(x, o)| x - o).collect();
        let n = d.len();
        for i in 0..n {
            for j in i + 1..n {
                let det = self.u[i] * self.v[j] - self.u[j] * self.v[i];
                if det != 0 {
                    let y0 = d[i] * self.v[j] - d[j] * self.v[i];
                    let y1 = self.u[i] * d[j] - self.u[j] * d[i];
                    if y0 % det != 0 || y1 % det != 0 {
                        return None;
                    }
                    let y = [y0 / det, y1 / det];
                    return (self.to_ambient(&y) == p).then_some(y);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let input = CompletionInput { polygon: vec![[0, 0], [1, 0], [1, 1], [0, 1]], mandated: vec![] };
        let a = complete_primitive(&input).unwrap();
        let b = complete_primitive(&input).unwrap();
        assert_eq!(a.triangles.len(), 2);
        assert_eq!(a.triangles, b.triangles);
    }

    #[test]
    fn triangle_of_side_two() {
        let input = CompletionInput { polygon: vec![[0, 0], [2, 0], [0, 2]], mandated: vec![] };
        assert_eq!(complete_primitive(&input).unwrap().triangles.len(), 4);
    }

    #[test]
    fn mandated_chord_and_pull() {
        // chords from (7,0) and (1,0) to the far corner, then a pulled point
        let k = 8;
        let input = CompletionInput {
            polygon: vec![[0, 0], [k, 0], [0, k]],
            mandated: vec![[[k - 1, 0], [0, k]], [[1, 0], [0, k]], [[k - 1, 0], [2, 3]], [[1, 0], [2, 3]]],
        };
        let c = complete_primitive(&input).unwrap();
        assert_eq!(c.triangles.len() as i64, k * k);
    }

    #[test]
    fn crossing_segments_rejected() {
        let input = CompletionInput {
            polygon: vec![[0, 0], [4, 0], [0, 4]],
            mandated: vec![[[0, 0], [2, 2]], [[2, 0], [0, 2]]],
        };
        assert!(matches!(complete_primitive(&input), Err(Error::BadConstraints(_))));
    }

    #[test]
    fn chart_round_trip() {
        let ch = Chart::of_triangle(&[8, 0, 0, 0], &[0, 8, 0, 0], &[0, 0, 8, 0], 8);
        let p = ch.to_ambient(&[2, 3]);
        assert_eq!(p, vec![3, 2, 3, 0]);
        assert_eq!(ch.to_chart(&p), Some([2, 3]));
    }
}
