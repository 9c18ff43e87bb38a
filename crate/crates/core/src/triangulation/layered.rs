//! Strip triangulations of triangles and the sliced-and-coned triangulation of
//! a dilated unimodular tetrahedron.

use serde::{Deserialize, Serialize};

use super::tower::{Tower, Q};
use crate::error::{Error, Result};
use crate::lattice::parity_mask;

pub type Pt = Vec<i64>;
pub type Tri = [Pt; 3];
pub type Tet = [Pt; 4];

/// Which diagonal opens the first quadrangle of a strip triangulation.
///
/// Later quadrangles always use the diagonal whose endpoint parities match the
/// first one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalRule {
    /// The diagonal whose lexicographically smaller endpoint has even coordinate sum.
    #[default]
    Default,
    /// The other diagonal.
    Flipped,
}

fn parity_pair(a: &[i64], b: &[i64]) -> (u32, u32) {
    let (x, y) = (parity_mask(a), parity_mask(b));
    (x.min(y), x.max(y))
}

/// Triangulates a region cut into rows of collinear lattice points.
///
/// `rows[0]` is a single apex, row 1 is arbitrary and each later row has one
/// more point than the previous one, the extra point sitting at the end. The
/// first strip is fanned from the apex; each later strip is a trapezoid cut
/// by one diagonal and both halves are fanned. Heights realising the result
/// are written to `row_key` (square of the row index) and `pos_key`.
pub fn strip_triangulate(
    rows: &[Vec<Pt>],
    rule: DiagonalRule,
    tower: &mut Tower,
    row_key: &[u32],
    pos_key: &[u32],
) -> Result<Vec<Tri>> {
    if rows.is_empty() || rows[0].len() != 1 {
        return Err(Error::BadParameters("strip rows must start at a single apex".into()));
    }
    for j in 1..rows.len().saturating_sub(1) {
        if rows[j + 1].len() != rows[j].len() + 1 {
            return Err(Error::BadParameters(format!(
                "row {} has {} points, expected {}",
                j + 1,
                rows[j + 1].len(),
                rows[j].len() + 1
            )));
        }
    }
    let mut tris = Vec::new();
    tower.set_int(row_key, &rows[0][0], 0);
    tower.set_int(pos_key, &rows[0][0], 0);
    if rows.len() == 1 {
        return Ok(tris);
    }
    for w in rows[1].windows(2) {
        tris.push([rows[0][0].clone(), w[0].clone(), w[1].clone()]);
    }
    let mut pair: Option<(u32, u32)> = None;
    let mut t = 0i64;
    let set_row = |tower: &mut Tower, j: usize, t: i64| {
        for (i, p) in rows[j].iter().enumerate() {
            let i = i as i64;
            tower.set_int(row_key, p, (j * j) as i64);
            tower.set(pos_key, p, Q::from_integer(i * i + t * i));
        }
    };
    set_row(tower, 1, t);
    for j in 1..rows.len() - 1 {
        let short = &rows[j];
        let long = &rows[j + 1];
        let l = short.len() - 1;
        let a = (&short[0], &long[l + 1]);
        let b = (&short[l], &long[0]);
        let use_a = match pair {
            None => {
                let even_low = |d: (&Pt, &Pt)| {
                    let low = if d.0 < d.1 { d.0 } else { d.1 };
                    low.iter().sum::<i64>().rem_euclid(2) == 0
                };
                let default_a = even_low(a) || !even_low(b);
                let choice = match rule {
                    DiagonalRule::Default => default_a,
                    DiagonalRule::Flipped => !default_a,
                };
                pair = Some(if choice {
                    parity_pair(a.0, a.1)
                } else {
                    parity_pair(b.0, b.1)
                });
                choice
            }
            Some(pp) => {
                let pa = parity_pair(a.0, a.1) == pp;
                let pb = parity_pair(b.0, b.1) == pp;
                match (pa, pb) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => {
                        return Err(Error::Inconsistent(format!(
                            "no unique diagonal with parity pair {pp:?} in strip {j}"
                        )))
                    }
                }
            }
        };
        if use_a {
            for w in long.windows(2) {
                tris.push([short[0].clone(), w[0].clone(), w[1].clone()]);
            }
            for w in short.windows(2) {
                tris.push([long[l + 1].clone(), w[0].clone(), w[1].clone()]);
            }
            // every edge slope of the long row below every slope of the short row
            t -= 2 * l as i64 + 1;
        } else {
            for w in long.windows(2) {
                tris.push([short[l].clone(), w[0].clone(), w[1].clone()]);
            }
            for w in short.windows(2) {
                tris.push([long[0].clone(), w[0].clone(), w[1].clone()]);
            }
            t += 2 * l as i64 - 1;
        }
        set_row(tower, j + 1, t);
    }
    Ok(tris)
}

/// Unit segments between consecutive lattice points of a primitive-direction segment.
pub fn unit_segments(a: &[i64], b: &[i64]) -> Vec<[Pt; 2]> {
    let d: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let g = d.iter().fold(0i64, |g, &x| num::integer::gcd(g, x));
    if g == 0 {
        return Vec::new();
    }
    let step: Vec<i64> = d.iter().map(|x| x / g).collect();
    (0..g)
        .map(|t| {
            let p: Pt = a.iter().zip(&step).map(|(x, s)| x + s * t).collect();
            let q: Pt = a.iter().zip(&step).map(|(x, s)| x + s * (t + 1)).collect();
            [p, q]
        })
        .collect()
}

/// Base-slice replacement: a prescribed triangulation with its own tower.
#[derive(Clone, Debug)]
pub struct BaseOverride {
    pub triangles: Vec<Tri>,
    pub tower: Tower,
}

/// A dilated unimodular tetrahedron `conv(apex, corners)` of side `side`,
/// sliced parallel to the base into triangles of side `l = 1..=side`.
#[derive(Clone, Debug)]
pub struct LayeredTetra {
    pub apex: Pt,
    pub corners: [Pt; 3],
    pub side: i64,
    /// Corner index whose edge through the apex receives the cone of slice `l`
    /// (entry 0 unused).
    pub cone_corner: Vec<usize>,
    pub rule: DiagonalRule,
}

/// Output of [`LayeredTetra::build`].
#[derive(Clone, Debug)]
pub struct LayeredOutput {
    pub tets: Vec<Tet>,
    /// Triangulation of each slice, indexed by side length.
    pub slices: Vec<Vec<Tri>>,
    pub tower: Tower,
}

impl LayeredTetra {
    /// The alternating cone-corner sequence ending with `base_corner` at the base.
    pub fn alternating(side: i64, base_corner: usize, other: usize) -> Vec<usize> {
        (0..=side)
            .map(|l| if (side - l) % 2 == 0 { base_corner } else { other })
            .collect()
    }

    fn unit(&self, i: usize) -> Result<Pt> {
        self.corners[i]
            .iter()
            .zip(&self.apex)
            .map(|(c, a)| {
                let d = c - a;
                if d % self.side != 0 {
                    Err(Error::BadParameters("corner not a lattice dilate".into()))
                } else {
                    Ok(d / self.side)
                }
            })
            .collect()
    }

    fn point(&self, units: &[Pt; 3], a: [i64; 3]) -> Pt {
        let mut p = self.apex.clone();
        for (u, &ai) in units.iter().zip(&a) {
            for (x, y) in p.iter_mut().zip(u) {
                *x += y * ai;
            }
        }
        p
    }

    /// Rows of slice `l` starting at its cone corner.
    fn rows(&self, units: &[Pt; 3], l: i64) -> Vec<Vec<Pt>> {
        let e = self.cone_corner[l as usize];
        let others: Vec<usize> = (0..3).filter(|&i| i != e).collect();
        (0..=l)
            .map(|j| {
                (0..=j)
                    .map(|i| {
                        let mut a = [0i64; 3];
                        a[e] = l - j;
                        a[others[0]] = j - i;
                        a[others[1]] = i;
                        self.point(units, a)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn build(&self, base: Option<&BaseOverride>) -> Result<LayeredOutput> {
        let s = self.side;
        if s < 1 || self.cone_corner.len() != (s + 1) as usize {
            return Err(Error::BadParameters("bad layered tetrahedron".into()));
        }
        if self.cone_corner.iter().any(|&c| c > 2) {
            return Err(Error::BadParameters("cone corner out of range".into()));
        }
        for l in 2..=s as usize {
            if self.cone_corner[l] == self.cone_corner[l - 1] {
                return Err(Error::BadParameters(
                    "consecutive slices must be coned from different edges".into(),
                ));
            }
        }
        let units = [self.unit(0)?, self.unit(1)?, self.unit(2)?];
        let alpha = self.cone_corner[s as usize];
        let beta = if s >= 2 { self.cone_corner[s as usize - 1] } else { (alpha + 1) % 3 };
        if (1..=s as usize).any(|l| self.cone_corner[l] != alpha && self.cone_corner[l] != beta) {
            return Err(Error::BadParameters("cone corners must alternate between two edges".into()));
        }
        let gamma = 3 - alpha - beta;
        let mut tower = Tower::new();
        let mut slices: Vec<Vec<Tri>> = vec![Vec::new(); (s + 1) as usize];
        let mut rows_of: Vec<Vec<Vec<Pt>>> = Vec::with_capacity((s + 1) as usize);
        for l in 0..=s {
            let rows = self.rows(&units, l);
            let e = self.cone_corner[l as usize];
            for row in &rows {
                for p in row {
                    tower.set_int(&[0], p, l * l);
                }
            }
            // Second level: which edge each slice is coned to.
            for (j, row) in rows.iter().enumerate() {
                for (i, p) in row.iter().enumerate() {
                    let (j, i) = (j as i64, i as i64);
                    let mut a = [0i64; 3];
                    let others: Vec<usize> = (0..3).filter(|&x| x != e).collect();
                    a[e] = l - j;
                    a[others[0]] = j - i;
                    a[others[1]] = i;
                    let g = if l >= 1 && e == beta { 2 * a[beta] + a[gamma] } else { 0 };
                    tower.set_int(&[1], p, g);
                }
            }
            if l >= 1 {
                match base {
                    Some(b) if l == s => {
                        slices[l as usize] = b.triangles.clone();
                        tower.absorb(&[2], &b.tower, |p| p.to_vec());
                    }
                    _ => {
                        slices[l as usize] =
                            strip_triangulate(&rows, self.rule, &mut tower, &[2], &[3])?;
                    }
                }
            }
            rows_of.push(rows);
        }
        let mut tets = Vec::new();
        for l in 1..=s {
            let lu = l as usize;
            let e_l = self.cone_corner[lu];
            // cone over T_l from the cone corner of T_{l-1}
            let mut a = [0i64; 3];
            a[e_l] = l - 1;
            let p = self.point(&units, a);
            for t in &slices[lu] {
                tets.push([t[0].clone(), t[1].clone(), t[2].clone(), p.clone()]);
            }
            if l >= 2 {
                let e_prev = self.cone_corner[lu - 1];
                let mut a = [0i64; 3];
                a[e_prev] = l;
                let q = self.point(&units, a);
                for t in &slices[lu - 1] {
                    tets.push([t[0].clone(), t[1].clone(), t[2].clone(), q.clone()]);
                }
                // join of the far edges S_l and S_{l-1}
                let s_l = &rows_of[lu][lu];
                let s_prev = &rows_of[lu - 1][lu - 1];
                for x in s_l.windows(2) {
                    for y in s_prev.windows(2) {
                        tets.push([x[0].clone(), x[1].clone(), y[0].clone(), y[1].clone()]);
                    }
                }
            }
        }
        Ok(LayeredOutput { tets, slices, tower })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::normalized_volume_coords;

    fn vol(t: &Tet) -> u64 {
        let refs: Vec<&[i64]> = t.iter().map(|p| p.as_slice()).collect();
        normalized_volume_coords(&refs)
    }

    #[test]
    fn strips_cover_triangle() {
        let tet = LayeredTetra {
            apex: vec![0, 0, 3],
            corners: [vec![0, 0, 0], vec![3, 0, 0], vec![0, 3, 0]],
            side: 3,
            cone_corner: LayeredTetra::alternating(3, 2, 1),
            rule: DiagonalRule::Default,
        };
        let out = tet.build(None).unwrap();
        for l in 1..=3 {
            assert_eq!(out.slices[l].len(), l * l);
        }
        assert_eq!(out.tets.len(), 27);
        assert!(out.tets.iter().all(|t| vol(t) == 1));
    }

    #[test]
    fn unit_segment_split() {
        let s = unit_segments(&[0, 0, 0], &[3, 0, 3]);
        assert_eq!(s.len(), 3);
        assert_eq!(s[2][1], vec![3, 0, 3]);
    }
}
