//! Mod 2 intersection and linking of explicit PL chains in one affine chart.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A mod 2 chain of geometric simplices. Coordinates are integers in a
/// common scale; midpoints of lattice edges fit after doubling everything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub dim: usize,
    pub simplices: Vec<Vec<Vec<i64>>>,
}

impl Chain {
    pub fn new(dim: usize, simplices: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        let ambient = simplices.first().and_then(|s| s.first()).map_or(0, |p| p.len());
        for s in &simplices {
            if s.len() != dim + 1 || s.iter().any(|p| p.len() != ambient) {
                return Err(Error::BadParameters(format!("simplex {s:?} is not a {dim}-simplex")));
            }
        }
        Ok(Self { dim, simplices })
    }

    pub fn ambient(&self) -> usize {
        self.simplices.first().and_then(|s| s.first()).map_or(0, |p| p.len())
    }

    /// Mod 2 boundary, as a multiset reduced mod 2 of vertex-sorted facets.
    pub fn boundary(&self) -> BTreeMap<Vec<Vec<i64>>, u8> {
        let mut out: BTreeMap<Vec<Vec<i64>>, u8> = BTreeMap::new();
        if self.dim == 0 {
            return out;
        }
        for s in &self.simplices {
            for i in 0..s.len() {
                let mut f: Vec<Vec<i64>> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
                f.sort();
                *out.entry(f).or_default() ^= 1;
            }
        }
        out.retain(|_, v| *v == 1);
        out
    }

    fn as_set(&self) -> BTreeMap<Vec<Vec<i64>>, u8> {
        let mut out: BTreeMap<Vec<Vec<i64>>, u8> = BTreeMap::new();
        for s in &self.simplices {
            let mut f = s.clone();
            f.sort();
            *out.entry(f).or_default() ^= 1;
        }
        out.retain(|_, v| *v == 1);
        out
    }
}

type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Row-reduces `[a | b]`; returns pivot columns, or `None` if inconsistent.
fn reduce(a: &mut [Vec<Q>], b: &mut [Q]) -> Option<Vec<usize>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] = &a[i][j] - d;
                }
                let d = &f * &b[r];
                b[i] = &b[i] - d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(pivots)
}

/// Whether `{z >= 0 : a z = b}` is nonempty, by elimination of the
/// equalities and Fourier-Motzkin on the free variables.
fn feasible(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> bool {
    let Some(pivots) = reduce(&mut a, &mut b) else { return false };
    let cols = a.first().map_or(0, |r| r.len());
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // each inequality: coefficients on free variables, constant; means coeffs.t + c >= 0
    let mut ineq: Vec<(Vec<Q>, Q)> = Vec::new();
    for r in 0..pivots.len() {
        ineq.push((free.iter().map(|&f| -a[r][f].clone()).collect(), b[r].clone()));
    }
    for i in 0..free.len() {
        let mut e = vec![Q::zero(); free.len()];
        e[i] = Q::one();
        ineq.push((e, Q::zero()));
    }
    for v in 0..free.len() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in ineq {
            if row.0[v].is_positive() {
                pos.push(row);
            } else if row.0[v].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for (pa, pc) in &pos {
            for (na, nc) in &neg {
                let (s, t) = (-na[v].clone(), pa[v].clone());
                let coeffs = pa.iter().zip(na).map(|(x, y)| x * &s + y * &t).collect();
                rest.push((coeffs, pc * &s + nc * &t));
            }
        }
        ineq = rest;
    }
    ineq.iter().all(|(_, c)| !c.is_negative())
}

fn meet_system(s: &[Vec<i64>], t: &[Vec<i64>]) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = s[0].len();
    let cols = s.len() + t.len();
    let mut a = vec![vec![Q::zero(); cols]; n + 2];
    let mut b = vec![Q::zero(); n + 2];
    for (j, p) in s.iter().enumerate() {
        for i in 0..n {
            a[i][j] = q(p[i]);
        }
        a[n][j] = Q::one();
    }
    for (j, p) in t.iter().enumerate() {
        for i in 0..n {
            a[i][s.len() + j] = -q(p[i]);
        }
        a[n + 1][s.len() + j] = Q::one();
    }
    b[n] = Q::one();
    b[n + 1] = Q::one();
    (a, b)
}

/// Whether two closed simplices share a point.
pub fn simplices_meet(s: &[Vec<i64>], t: &[Vec<i64>]) -> bool {
    let (a, b) = meet_system(s, t);
    feasible(a, b)
}

/// Intersection parity of one simplex of each of two complementary chains.
fn crossing(s: &[Vec<i64>], t: &[Vec<i64>]) -> Result<bool> {
    let (a, b) = meet_system(s, t);
    let (mut ra, mut rb) = (a.clone(), b.clone());
    match reduce(&mut ra, &mut rb) {
        Some(p) if p.len() == s.len() + t.len() => {
            if rb.iter().any(|x| x.is_negative()) {
                Ok(false)
            } else if rb.iter().any(|x| x.is_zero()) {
                Err(Error::NotTransverse(format!("{s:?} and {t:?} meet on a boundary")))
            } else {
                Ok(true)
            }
        }
        _ => {
            if feasible(a, b) {
                Err(Error::NotTransverse(format!("{s:?} and {t:?} meet in a degenerate way")))
            } else {
                Ok(false)
            }
        }
    }
}

/// Parity of the number of intersection points of chains of complementary
/// dimensions. Intersections on simplex boundaries or along positive
/// dimensional sets are rejected rather than perturbed.
pub fn z2_intersection(x: &Chain, y: &Chain) -> Result<u8> {
    if x.simplices.is_empty() || y.simplices.is_empty() {
        return Ok(0);
    }
    if x.ambient() != y.ambient() || x.dim + y.dim != x.ambient() {
        return Err(Error::BadParameters(format!(
            "dimensions {} and {} are not complementary in R^{}",
            x.dim,
            y.dim,
            x.ambient()
        )));
    }
    let mut parity = 0u8;
    for s in &x.simplices {
        for t in &y.simplices {
            parity ^= u8::from(crossing(s, t)?);
        }
    }
    Ok(parity)
}

/// Linking number of the cycle `c` bounding `d` with a disjoint cycle `a`.
pub fn linking_number(c: &Chain, d: &Chain, a: &Chain) -> Result<u8> {
    if d.dim != c.dim + 1 || d.boundary() != c.as_set() {
        return Err(Error::NotABoundingDisk("the boundary of the disk is not the cycle".into()));
    }
    for s in &c.simplices {
        for t in &a.simplices {
            if simplices_meet(s, t) {
                return Err(Error::NotTransverse("cycle and axis are not disjoint".into()));
            }
        }
    }
    z2_intersection(d, a)
}

/// A cycle, a chain it bounds, and its axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingPair {
    pub cycle: Chain,
    pub disk: Chain,
    pub axis: Chain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    /// `entries[i][j]` links cycle `i` with axis `j`.
    pub entries: Vec<Vec<u8>>,
    /// Lower triangular with ones on the diagonal.
    pub unitriangular: bool,
}

pub fn linking_matrix(pairs: &[LinkingPair]) -> Result<LinkingMatrix> {
    let mut entries = vec![vec![0u8; pairs.len()]; pairs.len()];
    for (i, p) in pairs.iter().enumerate() {
        for (j, other) in pairs.iter().enumerate() {
            entries[i][j] = linking_number(&p.cycle, &p.disk, &other.axis)?;
        }
    }
    let unitriangular =
        (0..pairs.len()).all(|i| entries[i][i] == 1 && (i + 1..pairs.len()).all(|j| entries[i][j] == 0));
    Ok(LinkingMatrix { entries, unitriangular })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: &[i64]) -> Vec<i64> {
        p.to_vec()
    }

    /// A square loop in the plane z = z0 around the box [x0,x1] x [y0,y1],
    /// with the fan disk from an interior point.
    fn square(x0: i64, x1: i64, y0: i64, y1: i64, z: i64) -> (Chain, Chain) {
        let c = [v(&[x0, y0, z]), v(&[x1, y0, z]), v(&[x1, y1, z]), v(&[x0, y1, z])];
        let mid = v(&[(x0 + x1) / 2, (y0 + y1) / 2, z]);
        let edges: Vec<Vec<Vec<i64>>> = (0..4).map(|i| vec![c[i].clone(), c[(i + 1) % 4].clone()]).collect();
        let tris = edges.iter().map(|e| vec![mid.clone(), e[0].clone(), e[1].clone()]).collect();
        (Chain::new(1, edges).unwrap(), Chain::new(2, tris).unwrap())
    }

    /// A square loop in the plane x = x0.
    fn vertical(x: i64, y0: i64, y1: i64, z0: i64, z1: i64) -> Chain {
        let c = [v(&[x, y0, z0]), v(&[x, y1, z0]), v(&[x, y1, z1]), v(&[x, y0, z1])];
        Chain::new(1, (0..4).map(|i| vec![c[i].clone(), c[(i + 1) % 4].clone()]).collect()).unwrap()
    }

    #[test]
    fn disjoint_chains_do_not_meet() {
        let (_, d) = square(0, 4, 0, 4, 0);
        let far = Chain::new(1, vec![vec![v(&[10, 10, -1]), v(&[10, 10, 1])]]).unwrap();
        assert_eq!(z2_intersection(&d, &far).unwrap(), 0);
    }

    #[test]
    fn segment_through_a_triangle() {
        let tri = Chain::new(2, vec![vec![v(&[0, 0, 0]), v(&[6, 0, 0]), v(&[0, 6, 0])]]).unwrap();
        let seg = Chain::new(1, vec![vec![v(&[1, 1, -1]), v(&[1, 1, 1])]]).unwrap();
        assert_eq!(z2_intersection(&tri, &seg).unwrap(), 1);
        let edge = Chain::new(1, vec![vec![v(&[0, 1, -1]), v(&[0, 1, 1])]]).unwrap();
        assert!(matches!(z2_intersection(&tri, &edge), Err(Error::NotTransverse(_))));
        let flat = Chain::new(1, vec![vec![v(&[1, 1, 0]), v(&[2, 1, 0])]]).unwrap();
        assert!(matches!(z2_intersection(&tri, &flat), Err(Error::NotTransverse(_))));
    }

    #[test]
    fn hopf_link_and_unlink() {
        let (c, d) = square(0, 4, 0, 4, 0);
        // pierces the disk once, at a point off the fan's spokes
        let hopf = vertical(1, -3, 2, -3, 3);
        assert_eq!(linking_number(&c, &d, &hopf).unwrap(), 1);
        let apart = vertical(9, -3, 2, -3, 3);
        assert_eq!(linking_number(&c, &d, &apart).unwrap(), 0);
        let (c2, _) = square(0, 4, 0, 4, 5);
        assert!(matches!(linking_number(&c2, &d, &hopf), Err(Error::NotABoundingDisk(_))));
    }

    #[test]
    fn linking_matrix_flag() {
        let (c, d) = square(0, 4, 0, 4, 0);
        let axis = vertical(1, -3, 2, -3, 3);
        let one = LinkingPair { cycle: c.clone(), disk: d.clone(), axis: axis.clone() };
        let m = linking_matrix(std::slice::from_ref(&one)).unwrap();
        assert_eq!(m.entries, vec![vec![1]]);
        assert!(m.unitriangular);

        let (c2, d2) = square(20, 24, 0, 4, 0);
        let two = LinkingPair { cycle: c2, disk: d2, axis: vertical(21, -3, 2, -3, 3) };
        let m = linking_matrix(&[one, two]).unwrap();
        assert_eq!(m.entries, vec![vec![1, 0], vec![0, 1]]);
        assert!(m.unitriangular);
    }

    #[test]
    fn fourier_motzkin_agrees_on_simple_cases() {
        let s = [v(&[0, 0]), v(&[4, 0]), v(&[0, 4])];
        assert!(simplices_meet(&s, &[v(&[1, 1])]));
        assert!(simplices_meet(&s, &[v(&[2, 2])]));
        assert!(!simplices_meet(&s, &[v(&[3, 3])]));
        assert!(simplices_meet(&[v(&[0, 0]), v(&[4, 4])], &[v(&[0, 4]), v(&[4, 0])]));
        assert!(!simplices_meet(&[v(&[0, 0]), v(&[1, 0])], &[v(&[0, 1]), v(&[1, 1])]));
    }
}
