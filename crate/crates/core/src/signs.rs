//! Sign distributions, their symmetric extension to all orthants, and the
//! GF(2) solvers that go with them. Signs are elements of Z2 with `+ = 0`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{even_faces, parity_mask, LatticeSimplex, VertexTable};
use crate::triangulation::{AdTriple, Construction, Iv4Flavor, Triangulation};

pub const PLUS: u8 = 0;
pub const MINUS: u8 = 1;

/// One sign per vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignDistribution {
    pub signs: Vec<u8>,
}

impl SignDistribution {
    pub fn constant(len: usize, sign: u8) -> Self {
        Self { signs: vec![sign & 1; len] }
    }
}

/// A triangulation with a sign on each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Datum {
    pub triangulation: Triangulation,
    pub signs: SignDistribution,
}

impl Datum {
    pub fn new(triangulation: Triangulation, signs: SignDistribution) -> Result<Self> {
        if signs.signs.len() != triangulation.vertices.len() {
            return Err(Error::BadParameters(format!(
                "{} signs for {} vertices",
                signs.signs.len(),
                triangulation.vertices.len()
            )));
        }
        if signs.signs.iter().any(|&s| s > 1) {
            return Err(Error::BadParameters("signs must be 0 or 1".into()));
        }
        Ok(Self { triangulation, signs })
    }

    /// The construction's own sign distribution.
    pub fn standard(triangulation: Triangulation) -> Result<Self> {
        let signs = standard_signs(&triangulation)?;
        Self::new(triangulation, signs)
    }

    pub fn dim(&self) -> usize {
        self.triangulation.ambient_dim
    }
}

/// A coordinate orthant; bit `i` of `mask` set iff coordinate `i` is reflected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orthant {
    pub dim: usize,
    pub mask: u32,
}

impl Orthant {
    pub fn new(dim: usize, mask: u32) -> Self {
        debug_assert!(dim >= 32 || mask >> dim == 0);
        Self { dim, mask }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mask = bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (((b & 1) as u32) << i));
        Self { dim: bits.len(), mask }
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.dim).map(|i| ((self.mask >> i) & 1) as u8).collect()
    }

    pub fn all(dim: usize) -> impl Iterator<Item = Orthant> {
        (0..1u32 << dim).map(move |mask| Orthant { dim, mask })
    }
}

impl fmt::Display for Orthant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

fn dot(a: u32, b: u32) -> u8 {
    ((a & b).count_ones() & 1) as u8
}

/// Sign of the copy of a vertex of parity `parity` in orthant `mask`.
pub fn extend_sign_raw(sign: u8, parity: u32, mask: u32) -> u8 {
    (sign ^ dot(parity, mask)) & 1
}

pub fn extend_sign(d: &Datum, v: u32, b: Orthant) -> u8 {
    let p = d.triangulation.vertices.point(v).parity_mask();
    extend_sign_raw(d.signs.signs[v as usize], p, b.mask)
}

/// Canonical mask of the copy of a face with the given vertex coordinates:
/// reflections in coordinates where the face sits on a coordinate hyperplane
/// are dropped, and a face on the outer facet is identified with its antipode.
pub fn canonical_mask(points: &[&[i64]], degree: i64, mask: u32) -> u32 {
    let n = points[0].len();
    let full = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
    let zero = (0..n).filter(|&i| points.iter().all(|p| p[i] == 0)).fold(0u32, |a, i| a | (1 << i));
    let free = full & !zero;
    let b = mask & free;
    if points.iter().all(|p| p.iter().sum::<i64>() == degree) {
        b.min(!b & free)
    } else {
        b
    }
}

/// Signs decided by parity alone: `plus[parity mask]` says whether that class is `+`.
pub fn parity_rule_signs(t: &Triangulation, plus: &[bool]) -> SignDistribution {
    let signs = t
        .vertices
        .points()
        .iter()
        .map(|p| if plus[p.parity_mask() as usize] { PLUS } else { MINUS })
        .collect();
    SignDistribution { signs }
}

fn plus_table(n: usize, parities: &[&[u8]]) -> Vec<bool> {
    let mut table = vec![false; 1 << n];
    for p in parities {
        table[Orthant::from_bits(p).mask as usize] = true;
    }
    table
}

/// Sign of each of the 8 parity classes of Z^3, indexed by parity mask.
pub type Iv3SignMap = [u8; 8];

/// The restriction of the odd 4D rule to a slice: `+` on parities (1,0,0) and (0,0,1).
pub fn default_iv3_sign_map() -> Iv3SignMap {
    let mut map = [MINUS; 8];
    map[0b001] = PLUS;
    map[0b100] = PLUS;
    map
}

pub fn iv3_signs(t: &Triangulation, map: &Iv3SignMap) -> SignDistribution {
    let plus: Vec<bool> = map.iter().map(|&s| s == PLUS).collect();
    parity_rule_signs(t, &plus)
}

pub fn iv4_signs(t: &Triangulation, flavor: Iv4Flavor) -> SignDistribution {
    let table = match flavor {
        Iv4Flavor::Odd => plus_table(4, &[&[1, 0, 0, 1], &[0, 0, 1, 1]]),
        Iv4Flavor::Even => plus_table(4, &[&[0, 1, 1, 0], &[1, 1, 0, 0], &[0, 1, 0, 0]]),
    };
    parity_rule_signs(t, &table)
}

/// Thresholds of the base-level rule of the SD signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdThresholds {
    /// Even points with `x1 + x2` at most this get `+`.
    pub t1: i64,
    /// Points of parity (1,0,0) with `x1 + x2` equal to this get `+`.
    pub t2: i64,
}

impl SdThresholds {
    pub fn for_k(k: i64) -> Self {
        Self { t1: 2 * k - 2, t2: 2 * k + 1 }
    }
}

/// Closed triangle `(0,0), (a1,0), (0,b2)` in the base plane.
fn in_base_triangle(x1: i64, x2: i64, a1: i64, b2: i64) -> bool {
    x1 >= 0 && x2 >= 0 && b2 * x1 + a1 * x2 <= a1 * b2
}

/// Sign of a point of the SD tetrahedron of degree `2k+1`.
pub fn sd_point_sign(p: &[i64], k: i64, a: [i64; 3], b: [i64; 3], th: SdThresholds) -> u8 {
    let (x1, x2, x3) = (p[0], p[1], p[2]);
    let par = parity_mask(&p[..3]);
    let plus = match x3 {
        _ if x3 >= 2 => par == 0b100 || par == 0b001,
        1 => {
            let in_quad = x1 + x2 >= k + 1 || (x1 == k && x2 == 0);
            !in_quad || (x1 % 2 == 0 && x2 % 2 == 0)
        }
        _ => {
            if in_base_triangle(x1, x2, a[0], b[1]) {
                par == 0b010
            } else {
                (x1 + x2 <= th.t1 && par == 0) || (x1 + x2 == th.t2 && par == 0b001)
            }
        }
    };
    if plus {
        PLUS
    } else {
        MINUS
    }
}

pub fn sd_signs(t: &Triangulation, th: SdThresholds) -> Result<SignDistribution> {
    let Construction::Sd3 { k, a, b } = t.construction else {
        return Err(Error::BadParameters("SD signs need an SD3 triangulation".into()));
    };
    let signs = t.vertices.points().iter().map(|p| sd_point_sign(&p.coords, k, a, b, th)).collect();
    Ok(SignDistribution { signs })
}

pub fn sd4_signs(t: &Triangulation) -> Result<SignDistribution> {
    let Construction::Sd4 { degree: m } = t.construction else {
        return Err(Error::BadParameters("SD4 signs need an SD4 triangulation".into()));
    };
    let levels: BTreeSet<i64> = crate::triangulation::sd4_levels(m).into_iter().collect();
    let mut signs = iv4_signs(t, Iv4Flavor::Odd);
    for (i, p) in t.vertices.points().iter().enumerate() {
        let c = m - p.coords[3];
        if levels.contains(&c) {
            let k = (c - 1) / 2;
            let (a, b) = ([2 * k - 3, 0, 0], [0, 2 * k - 5, 0]);
            signs.signs[i] = sd_point_sign(&p.coords, k, a, b, SdThresholds::for_k(k));
        }
    }
    Ok(signs)
}

/// Closed triangle membership for points of the plane `x1+x2+x3 = k`,
/// tested in the `(x1, x2)` projection.
fn in_triangle(p: &[i64], a: &[i64], b: &[i64], c: &[i64]) -> bool {
    let o = |u: &[i64], v: &[i64], w: &[i64]| (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0]);
    let (d1, d2, d3) = (o(a, b, p), o(b, c, p), o(c, a, p));
    let neg = d1 < 0 || d2 < 0 || d3 < 0;
    let pos = d1 > 0 || d2 > 0 || d3 > 0;
    !(neg && pos)
}

/// Sign of a point of a modified top triangle. Points of parity (1,1,0,0)
/// never lie on the edge `x1 = 0`, so only the triangle `abc` matters for them.
pub fn ad_point_sign(p: &[i64], t: &AdTriple) -> u8 {
    let par = parity_mask(p);
    let inside = in_triangle(p, &t.a, &t.b, &t.c);
    let plus = match par {
        0b0110 => p[0] == 0,
        0b0011 => !inside,
        0 => inside,
        _ => false,
    };
    if plus {
        PLUS
    } else {
        MINUS
    }
}

pub fn ad4_signs(t: &Triangulation) -> Result<SignDistribution> {
    let Construction::Ad4 { degree: m, triples } = &t.construction else {
        return Err(Error::BadParameters("AD signs need an AD4 triangulation".into()));
    };
    let sides = crate::triangulation::ad_sides(*m);
    let mut signs = iv4_signs(t, Iv4Flavor::Even);
    for (i, p) in t.vertices.points().iter().enumerate() {
        let c = &p.coords;
        let k = m - c[3];
        if c[0] + c[1] + c[2] != k {
            continue;
        }
        if let Some(j) = sides.iter().position(|&s| s == k) {
            signs.signs[i] = ad_point_sign(c, &triples[j]);
        }
    }
    Ok(signs)
}

/// The sign distribution a construction comes with.
pub fn standard_signs(t: &Triangulation) -> Result<SignDistribution> {
    match &t.construction {
        Construction::Iv3(_) => Ok(iv3_signs(t, &default_iv3_sign_map())),
        Construction::Iv4Odd { .. } => Ok(iv4_signs(t, Iv4Flavor::Odd)),
        Construction::Iv4Even { .. } => Ok(iv4_signs(t, Iv4Flavor::Even)),
        Construction::Sd3 { k, .. } => sd_signs(t, SdThresholds::for_k(*k)),
        Construction::Sd4 { .. } => sd4_signs(t),
        Construction::Ad4 { .. } => ad4_signs(t),
        Construction::Custom {} => Err(Error::Unsupported("custom triangulations have no standard signs".into())),
    }
}

/// Whether the signs on a region with exactly four parity classes, each
/// carrying a single sign, add up to `-`.
pub fn is_harnack_on(d: &Datum, region: &[u32]) -> Result<bool> {
    let mut class: std::collections::BTreeMap<u32, u8> = Default::default();
    for &v in region {
        let p = d.triangulation.vertices.point(v).parity_mask();
        let s = d.signs.signs[v as usize];
        if let Some(&old) = class.get(&p) {
            if old != s {
                return Err(Error::BadRegion(format!("parity class {p:b} carries both signs")));
            }
        }
        class.insert(p, s);
    }
    if class.len() != 4 {
        return Err(Error::BadRegion(format!("region has {} parity classes, expected 4", class.len())));
    }
    Ok(class.values().fold(0, |a, &s| a ^ s) == MINUS)
}

/// Vertex ids of the slice of an IV tetrahedron at distance `k` from its apex.
pub fn iv3_slice(t: &Triangulation, k: i64) -> Result<Vec<u32>> {
    let Construction::Iv3(p) = &t.construction else {
        return Err(Error::BadParameters("IV3 slices need an IV3 triangulation".into()));
    };
    let m = t.degree;
    let ids = t
        .vertices
        .points()
        .iter()
        .enumerate()
        .filter(|(_, q)| {
            let c = &q.coords;
            let weight = if p.apex == 0 { m - c.iter().sum::<i64>() } else { c[p.apex - 1] };
            weight == m - k
        })
        .map(|(i, _)| i as u32)
        .collect();
    Ok(ids)
}

/// Solution set of a GF(2) linear system `row . x = rhs` in `n` unknowns:
/// a particular solution and a basis of the kernel, or `None` if inconsistent.
pub(crate) fn solve_gf2(rows: &[(u32, u8)], n: usize) -> Option<(u32, Vec<u32>)> {
    let mut rows: Vec<(u32, u8)> = rows.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i].0 >> col & 1 == 1) else { continue };
        rows.swap(r, pr);
        for i in 0..rows.len() {
            if i != r && rows[i].0 >> col & 1 == 1 {
                rows[i].0 ^= rows[r].0;
                rows[i].1 ^= rows[r].1;
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if rows[r..].iter().any(|&(_, b)| b == 1) {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut particular = 0u32;
    for &(row, col) in &pivots {
        if rows[row].1 == 1 {
            particular |= 1 << col;
        }
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = 1u32 << free;
        for &(row, col) in &pivots {
            if rows[row].0 >> free & 1 == 1 {
                v |= 1 << col;
            }
        }
        basis.push(v);
    }
    Some((particular, basis))
}

fn span(particular: u32, basis: &[u32]) -> Vec<u32> {
    (0..1u32 << basis.len())
        .map(|c| {
            basis.iter().enumerate().fold(particular, |acc, (i, &b)| if c >> i & 1 == 1 { acc ^ b } else { acc })
        })
        .collect()
}

/// All orthants where the extended signs of the given vertices equal `target`
/// or its complement. For the vertices of a primitive `k`-simplex there are
/// exactly `2^(n-k)` of them.
pub fn solve_orthants(parities: &[Vec<u8>], signs: &[u8], target: &[u8]) -> Result<Vec<Orthant>> {
    let k1 = parities.len();
    if k1 == 0 || signs.len() != k1 || target.len() != k1 {
        return Err(Error::NoUniqueCollection("parities, signs and target must have equal nonzero length".into()));
    }
    let n = parities[0].len();
    let p: Vec<u32> = parities.iter().map(|q| Orthant::from_bits(q).mask).collect();
    let rows: Vec<(u32, u8)> = (1..k1)
        .map(|i| (p[i] ^ p[0], (target[i] ^ signs[i] ^ target[0] ^ signs[0]) & 1))
        .collect();
    let Some((part, basis)) = solve_gf2(&rows, n) else {
        return Err(Error::NoUniqueCollection(format!("no orthant realises the target on parities {parities:?}")));
    };
    if basis.len() != n + 1 - k1 {
        return Err(Error::NoUniqueCollection(format!(
            "parities {parities:?} are affinely dependent over Z2"
        )));
    }
    let mut out: Vec<Orthant> = span(part, &basis).into_iter().map(|m| Orthant::new(n, m)).collect();
    out.sort();
    Ok(out)
}

/// A reflection flipping the extended sign of every vertex of `s`.
pub fn inverting_reflection(s: &LatticeSimplex, table: &VertexTable) -> Result<Orthant> {
    if !even_faces(s, table).is_empty() {
        return Err(Error::HasEvenFace(format!("{:?}", s.vertex_ids)));
    }
    let n = table.dim();
    let rows: Vec<(u32, u8)> = s.vertex_ids.iter().map(|&v| (table.point(v).parity_mask(), 1)).collect();
    let (part, _) = solve_gf2(&rows, n)
        .ok_or_else(|| Error::Inconsistent(format!("no inverting reflection for {:?}", s.vertex_ids)))?;
    Ok(Orthant::new(n, part))
}

/// Distinct symmetric copies of `s` (after the quotient identifications)
/// whose vertices all carry one sign.
pub fn empty_copies(s: &LatticeSimplex, d: &Datum) -> Vec<Orthant> {
    let t = &d.triangulation;
    let n = t.ambient_dim;
    let pts: Vec<&[i64]> = s.vertex_ids.iter().map(|&v| t.vertices.point(v).coords.as_slice()).collect();
    let masks: BTreeSet<u32> = (0..1u32 << n).map(|b| canonical_mask(&pts, t.degree, b)).collect();
    masks
        .into_iter()
        .filter(|&b| {
            let mut signs = s.vertex_ids.iter().map(|&v| extend_sign(d, v, Orthant::new(n, b)));
            let first = signs.next().unwrap_or(PLUS);
            signs.all(|x| x == first)
        })
        .map(|b| Orthant::new(n, b))
        .collect()
}

/// Number of facets of the dilated simplex containing the relative interior
/// of a face with these vertices.
pub fn sedentarity(points: &[&[i64]], degree: i64) -> usize {
    let n = points[0].len();
    let zeros = (0..n).filter(|&i| points.iter().all(|p| p[i] == 0)).count();
    let outer = points.iter().all(|p| p.iter().sum::<i64>() == degree);
    zeros + usize::from(outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;
    use crate::triangulation::{build_ad4, build_iv3, build_iv4, build_sd3, default_ad_triples, Iv3Params};
    use proptest::prelude::*;

    fn single_vertex_datum(coords: Vec<i64>, sign: u8) -> Datum {
        let n = coords.len();
        let mut pts = vec![coords];
        // pad to a full simplex so the triangulation is well formed
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 9;
            pts.push(e);
        }
        let ids: Vec<u32> = (0..=n as u32).collect();
        let table = VertexTable::from_points(n, pts.into_iter().map(LatticePoint::new).collect()).unwrap();
        let s = LatticeSimplex::new(ids).unwrap();
        let t = Triangulation::new(n, 9, table, vec![s], Construction::Custom {});
        let mut signs = vec![PLUS; n + 1];
        signs[0] = sign;
        Datum::new(t, SignDistribution { signs }).unwrap()
    }

    #[test]
    fn extension_flips_on_odd_distance() {
        let d = single_vertex_datum(vec![1, 2], PLUS);
        assert_eq!(extend_sign(&d, 0, Orthant::from_bits(&[1, 0])), MINUS);
        let d = single_vertex_datum(vec![0, 2], PLUS);
        for b in Orthant::all(2) {
            assert_eq!(extend_sign(&d, 0, b), PLUS);
        }
    }

    proptest! {
        #[test]
        fn dot_product_matches_iterated_reflections(c in prop::collection::vec(-20i64..20, 1..5), s in 0u8..2, mask in 0u32..16) {
            let n = c.len();
            let mask = mask & ((1 << n) - 1);
            let parity = parity_mask(&c);
            let mut sign = s;
            let mut point = c.clone();
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    // reflecting in x_i = 0 moves the point by 2|x_i|; the sign flips iff x_i is odd
                    if point[i].rem_euclid(2) == 1 {
                        sign ^= 1;
                    }
                    point[i] = -point[i];
                }
            }
            prop_assert_eq!(extend_sign_raw(s, parity, mask), sign);
        }
    }

    #[test]
    fn iv4_parity_rules() {
        let t = build_iv4(2, Iv4Flavor::Odd).unwrap();
        let s = iv4_signs(&t, Iv4Flavor::Odd);
        let id = t.vertices.id_of_coords(&[1, 0, 0, 1]).unwrap();
        assert_eq!(s.signs[id as usize], PLUS);
        let id = t.vertices.id_of_coords(&[0, 0, 0, 0]).unwrap();
        assert_eq!(s.signs[id as usize], MINUS);
        let t = build_iv4(2, Iv4Flavor::Even).unwrap();
        let s = iv4_signs(&t, Iv4Flavor::Even);
        let id = t.vertices.id_of_coords(&[0, 1, 0, 0]).unwrap();
        assert_eq!(s.signs[id as usize], PLUS);
    }

    #[test]
    fn iv3_signs_follow_parity() {
        let t = build_iv3(&Iv3Params::standard(4)).unwrap();
        let s = iv3_signs(&t, &default_iv3_sign_map());
        for (i, p) in t.vertices.points().iter().enumerate() {
            for (j, q) in t.vertices.points().iter().enumerate() {
                if p.parity_mask() == q.parity_mask() {
                    assert_eq!(s.signs[i], s.signs[j]);
                }
            }
        }
        assert!(iv3_signs(&t, &[PLUS; 8]).signs.iter().all(|&x| x == PLUS));
    }

    #[test]
    fn sd_sign_cases() {
        let (k, a, b) = (4, [5, 0, 0], [0, 3, 0]);
        let th = SdThresholds::for_k(k);
        assert_eq!(sd_point_sign(&[0, 0, 3], k, a, b, th), PLUS);
        assert_eq!(sd_point_sign(&[1, 0, 2], k, a, b, th), PLUS);
        assert_eq!(sd_point_sign(&[2, 4, 1], k, a, b, th), PLUS);
        assert_eq!(sd_point_sign(&[3, 4, 1], k, a, b, th), MINUS);
        assert_eq!(sd_point_sign(&[2, 1, 0], k, a, b, th), PLUS);
        assert_eq!(sd_point_sign(&[0, 1, 0], k, a, b, th), PLUS);
        assert_eq!(sd_point_sign(&[0, 0, 0], k, a, b, th), MINUS);
        let t = build_sd3(k, a, b).unwrap();
        assert_eq!(sd_signs(&t, th).unwrap().signs.len(), t.vertices.len());
    }

    #[test]
    fn ad_inside_even_point_is_plus() {
        let t = build_ad4(8, &default_ad_triples(8)).unwrap();
        let d = Datum::standard(t).unwrap();
        let id = d.triangulation.vertices.id_of_coords(&[2, 2, 4, 0]).unwrap();
        assert!(in_triangle(&[2, 2, 4], &[7, 0, 1], &[1, 0, 7], &[2, 3, 3]));
        assert_eq!(d.signs.signs[id as usize], PLUS);
        // (1,1,6) has parity (1,1,0,0) and lies outside the triangle abc
        let id = d.triangulation.vertices.id_of_coords(&[1, 1, 6, 0]).unwrap();
        assert_eq!(d.signs.signs[id as usize], PLUS);
    }

    #[test]
    fn harnack_predicate() {
        let t = build_iv3(&Iv3Params::standard(4)).unwrap();
        let region = iv3_slice(&t, 3).unwrap();
        let plus = Datum::new(t.clone(), SignDistribution::constant(t.vertices.len(), PLUS)).unwrap();
        assert!(!is_harnack_on(&plus, &region).unwrap());
        // one class of the slice set to '-' makes the sum '-'
        let apex_weight: Vec<u32> = region.clone();
        let cls = t.vertices.point(apex_weight[0]).parity_mask();
        let mut signs = vec![PLUS; t.vertices.len()];
        for (i, p) in t.vertices.points().iter().enumerate() {
            if p.parity_mask() == cls {
                signs[i] = MINUS;
            }
        }
        let one = Datum::new(t.clone(), SignDistribution { signs }).unwrap();
        assert!(is_harnack_on(&one, &region).unwrap());
        let small = iv3_slice(&t, 1).unwrap();
        assert!(matches!(is_harnack_on(&one, &small[..1]), Err(Error::BadRegion(_))));
    }

    #[test]
    fn orthant_solver_small_example() {
        let sol = solve_orthants(&[vec![1, 0], vec![0, 1]], &[PLUS, PLUS], &[PLUS, PLUS]).unwrap();
        let shown: Vec<String> = sol.iter().map(|o| o.to_string()).collect();
        assert_eq!(shown, ["00", "11"]);
        assert!(matches!(
            solve_orthants(&[vec![1, 0], vec![1, 0]], &[PLUS, PLUS], &[PLUS, MINUS]),
            Err(Error::NoUniqueCollection(_))
        ));
    }

    #[test]
    fn orthant_solver_unique_on_iv4_simplices() {
        let t = build_iv4(4, Iv4Flavor::Odd).unwrap();
        let d = Datum::standard(t).unwrap();
        let tt = &d.triangulation;
        for s in tt.maximal_simplices.iter().take(40) {
            let par: Vec<Vec<u8>> = s.vertex_ids.iter().map(|&v| tt.vertices.point(v).parity()).collect();
            let signs: Vec<u8> = s.vertex_ids.iter().map(|&v| d.signs.signs[v as usize]).collect();
            let sol = solve_orthants(&par, &signs, &[PLUS, MINUS, MINUS, MINUS, MINUS]).unwrap();
            assert_eq!(sol.len(), 1);
        }
    }

    #[test]
    fn inverting_reflections() {
        let table = VertexTable::from_points(2, vec![LatticePoint::new(vec![1, 0]), LatticePoint::new(vec![0, 1])]).unwrap();
        let s = LatticeSimplex::new(vec![0, 1]).unwrap();
        assert_eq!(inverting_reflection(&s, &table).unwrap().bits(), vec![1, 1]);
        let table = VertexTable::from_points(4, vec![LatticePoint::new(vec![1, 0, 0, 1])]).unwrap();
        let s = LatticeSimplex::new(vec![0]).unwrap();
        let b = inverting_reflection(&s, &table).unwrap();
        assert_eq!(dot(0b1001, b.mask), 1);
        let table = VertexTable::from_points(2, vec![LatticePoint::new(vec![2, 0])]).unwrap();
        assert!(matches!(inverting_reflection(&s, &table), Err(Error::HasEvenFace(_))));
    }

    #[test]
    fn inverting_reflection_flips_every_sign() {
        let d = Datum::standard(build_iv4(6, Iv4Flavor::Even).unwrap()).unwrap();
        let t = &d.triangulation;
        let mut checked = 0;
        for s in &t.maximal_simplices {
            for f in s.faces() {
                if !even_faces(&f, &t.vertices).is_empty() {
                    continue;
                }
                let b = inverting_reflection(&f, &t.vertices).unwrap();
                for &v in &f.vertex_ids {
                    let o = Orthant::new(4, 0);
                    assert_ne!(extend_sign(&d, v, o), extend_sign(&d, v, b));
                }
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn empty_copy_counts() {
        let d = Datum::standard(build_iv4(4, Iv4Flavor::Odd).unwrap()).unwrap();
        let t = &d.triangulation;
        let s = &t.maximal_simplices[0];
        assert_eq!(empty_copies(s, &d).len(), 1);
        let v = t.vertices.id_of_coords(&[1, 1, 1, 0]).unwrap();
        assert_eq!(empty_copies(&LatticeSimplex::new(vec![v]).unwrap(), &d).len(), 8);
        let d6 = Datum::standard(build_iv4(6, Iv4Flavor::Odd).unwrap()).unwrap();
        let t6 = &d6.triangulation;
        let interior = |v: u32| {
            let p = &t6.vertices.point(v).coords;
            p.iter().all(|&c| c > 0) && p.iter().sum::<i64>() < 6
        };
        let edge = t6
            .maximal_simplices
            .iter()
            .flat_map(|s| s.faces())
            .find(|f| f.vertex_ids.len() == 2 && f.vertex_ids.iter().all(|&v| interior(v)));
        assert_eq!(empty_copies(&edge.unwrap(), &d6).len(), 8);
    }
}
