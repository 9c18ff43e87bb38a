//! Even IV triangulations of the 4-simplex with the top triangles of the
//! larger even coned levels retriangulated around a chosen triple of points.

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use super::complete::{complete_primitive, Chart, CompletionInput, P2};
use super::iv::{assemble_iv4, iv_coned_level, ConedLevel, Iv4Flavor};
use super::layered::{BaseOverride, Pt, Tri};
use super::tower::Tower;
use super::{Construction, Triangulation};
use crate::error::{Error, Result};

/// The points `a`, `b`, `c` used on one modified triangle, in 4D coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdTriple {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
}

/// Sides `k` of the modified triangles for degree `m`: even, from 8 to `m`.
pub fn ad_sides(m: i64) -> Vec<i64> {
    (8..=m).step_by(2).collect()
}

pub fn default_ad_triple(m: i64, k: i64) -> AdTriple {
    AdTriple { a: vec![k - 1, 0, 1, m - k], b: vec![1, 0, k - 1, m - k], c: vec![2, k - 5, 3, m - k] }
}

/// The default list, one triple per modified triangle.
pub fn default_ad_triples(m: i64) -> Vec<AdTriple> {
    ad_sides(m).into_iter().map(|k| default_ad_triple(m, k)).collect()
}

fn is_even(p: &[i64]) -> bool {
    p.iter().all(|x| x % 2 == 0)
}

fn primitive_segment(p: &[i64], q: &[i64]) -> bool {
    p.iter().zip(q).fold(0i64, |g, (x, y)| gcd(g, x - y)) == 1
}

fn check_triple(m: i64, k: i64, t: &AdTriple) -> Result<()> {
    let bad = |msg: &str| Err(Error::BadParameters(format!("side {k}: {msg} ({t:?})")));
    let x4 = m - k;
    for p in [&t.a, &t.b, &t.c] {
        if p.len() != 4 || p[3] != x4 || p[..3].iter().any(|&x| x < 0) || p[..3].iter().sum::<i64>() != k {
            return bad("points must lie on the triangle of that side");
        }
        if is_even(p) {
            return bad("points must not be even");
        }
    }
    for p in [&t.a, &t.b] {
        if p[1] != 0 || p[0] < 1 || p[2] < 1 {
            return bad("a and b must lie on the segment from (1,0,k-1) to (k-1,0,1)");
        }
    }
    if t.c[..3].iter().any(|&x| x == 0) {
        return bad("c must lie in the interior of the triangle");
    }
    if t.a == t.b {
        return bad("a and b must be distinct");
    }
    if !primitive_segment(&t.a, &t.c) || !primitive_segment(&t.b, &t.c) {
        return bad("[a,c] and [b,c] must be primitive");
    }
    Ok(())
}

/// The modified triangulation of the top triangle of side `k`, with its tower.
fn modified_top(m: i64, k: i64, t: &AdTriple) -> Result<BaseOverride> {
    let x4 = m - k;
    let chart = Chart::of_triangle(&[0, 0, k, x4], &[k, 0, 0, x4], &[0, k, 0, x4], k);
    let to2 = |p: &[i64]| -> Result<P2> {
        chart
            .to_chart(p)
            .ok_or_else(|| Error::BadParameters(format!("{p:?} is off the triangle of side {k}")))
    };
    let apex = to2(&[0, k, 0, x4])?;
    let mandated = vec![
        [to2(&[k - 1, 0, 1, x4])?, apex],
        [to2(&[1, 0, k - 1, x4])?, apex],
        [to2(&t.a)?, to2(&t.c)?],
        [to2(&t.b)?, to2(&t.c)?],
    ];
    let done = complete_primitive(&CompletionInput { polygon: vec![[0, 0], [k, 0], [0, k]], mandated })
        .map_err(|e| match e {
            Error::BadConstraints(s) => Error::BadParameters(s),
            e => e,
        })?;
    let triangles: Vec<Tri> = done
        .triangles
        .iter()
        .map(|t| [chart.to_ambient(&t[0]), chart.to_ambient(&t[1]), chart.to_ambient(&t[2])])
        .collect();
    let mut tower = Tower::new();
    tower.absorb(&[], &done.tower, |p| chart.to_ambient(p));
    Ok(BaseOverride { triangles, tower })
}

pub(crate) fn build_ad4_tower(m: i64, triples: &[AdTriple]) -> Result<(Triangulation, Tower)> {
    if m % 2 != 0 || m < 8 {
        return Err(Error::BadParameters(format!("degree {m} must be even and at least 8")));
    }
    let sides = ad_sides(m);
    if triples.len() != sides.len() {
        return Err(Error::BadParameters(format!(
            "degree {m} needs {} triples, got {}",
            sides.len(),
            triples.len()
        )));
    }
    let mut overrides = Vec::new();
    for (&k, t) in sides.iter().zip(triples) {
        check_triple(m, k, t)?;
        overrides.push((k, modified_top(m, k, t)?));
    }
    let coned = |c: i64| -> Result<Option<ConedLevel>> {
        match overrides.iter().find(|(k, _)| *k == c) {
            Some((_, base)) => Ok(Some(iv_coned_level(m, c, Iv4Flavor::Even, Some(base))?)),
            None => Ok(None),
        }
    };
    let (simplices, tower) = assemble_iv4(m, Iv4Flavor::Even, &coned)?;
    let simplices: Vec<Vec<Pt>> = simplices.into_iter().map(|s| s.to_vec()).collect();
    let construction = Construction::Ad4 { degree: m, triples: triples.to_vec() };
    Ok((Triangulation::from_coordinate_simplices(4, m, &simplices, construction)?, tower))
}

/// The AD triangulation of the 4-simplex of even degree `m >= 8`.
pub fn build_ad4(m: i64, triples: &[AdTriple]) -> Result<Triangulation> {
    Ok(build_ad4_tower(m, triples)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{build_iv4, construct_lift, validate};

    #[test]
    fn ad4_degree_eight() {
        let t = build_ad4(8, &default_ad_triples(8)).unwrap();
        let rep = validate(&t);
        assert!(rep.is_valid(), "{:?} {:?}", rep.violations, rep.non_primitive);
        construct_lift(&t).unwrap();
        let c = t.vertices.id_of_coords(&[2, 3, 3, 0]).unwrap();
        let a = t.vertices.id_of_coords(&[7, 0, 1, 0]).unwrap();
        let b = t.vertices.id_of_coords(&[1, 0, 7, 0]).unwrap();
        let has_edge = |u: u32, v: u32| {
            t.maximal_simplices.iter().any(|s| s.vertex_ids.contains(&u) && s.vertex_ids.contains(&v))
        };
        assert!(has_edge(a, c) && has_edge(b, c));
        assert_ne!(t.maximal_simplices, build_iv4(8, Iv4Flavor::Even).unwrap().maximal_simplices);
    }

    #[test]
    fn ad4_rejects_bad_triples() {
        let mut l = default_ad_triples(8);
        l[0].c = vec![2, 2, 4, 0];
        assert!(matches!(build_ad4(8, &l), Err(Error::BadParameters(_))));
        assert!(matches!(build_ad4(8, &[]), Err(Error::BadParameters(_))));
        assert!(matches!(build_ad4(7, &[]), Err(Error::BadParameters(_))));
    }
}
