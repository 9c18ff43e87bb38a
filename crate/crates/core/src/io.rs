//! Canonical JSON documents, OFF meshes and Viro polynomial text.

use std::collections::BTreeMap;
use std::fmt::Write;

use num::{BigInt, BigRational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeSimplex, VertexTable};
use crate::patchwork::GammaComplex;
use crate::signs::{Datum, SignDistribution, PLUS};
use crate::triangulation::{rational_from_str, rational_to_string, Construction, LiftCertificate, Triangulation};

pub const FORMAT_VERSION: u64 = 1;

/// JSON text with sorted keys and no whitespace.
pub fn canonical(v: &Value) -> String {
    // serde_json maps are ordered by key unless `preserve_order` is enabled
    serde_json::to_string(v).expect("values serialize")
}

pub fn datum_value(d: &Datum, lift: Option<&LiftCertificate>) -> Value {
    let t = &d.triangulation;
    let mut doc = json!({
        "format_version": FORMAT_VERSION,
        "ambient_dim": t.ambient_dim,
        "degree": t.degree,
        "construction": serde_json::to_value(&t.construction).expect("construction serializes"),
        "vertices": t.vertices.points().iter().map(|p| p.coords.clone()).collect::<Vec<_>>(),
        "maximal_simplices": t.maximal_simplices.iter().map(|s| s.vertex_ids.clone()).collect::<Vec<_>>(),
        "signs": d.signs.signs,
    });
    if let Some(l) = lift {
        doc["lift"] = l.heights.iter().map(rational_to_string).collect::<Vec<_>>().into();
    }
    doc
}

pub fn datum_to_json(d: &Datum, lift: Option<&LiftCertificate>) -> String {
    canonical(&datum_value(d, lift))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key}")))
}

fn int_array(v: &Value, what: &str) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Parse(format!("{what} must hold integers"))))
        .collect()
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

/// Parses a datum document; the lift is returned when present.
pub fn datum_from_json(text: &str) -> Result<(Datum, Option<LiftCertificate>)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let version = field(&v, "format_version")?.as_u64();
    if version != Some(FORMAT_VERSION) {
        return Err(Error::Parse(format!("unsupported format_version {version:?}")));
    }
    let n = field(&v, "ambient_dim")?.as_u64().ok_or_else(|| Error::Parse("ambient_dim".into()))? as usize;
    let m = field(&v, "degree")?.as_i64().ok_or_else(|| Error::Parse("degree".into()))?;
    let construction: Construction =
        serde_json::from_value(field(&v, "construction")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let points = array(field(&v, "vertices")?, "vertices")?
        .iter()
        .map(|p| int_array(p, "vertex").map(LatticePoint::new))
        .collect::<Result<Vec<_>>>()?;
    let count = points.len();
    let vertices = VertexTable::from_points(n, points)?;
    let simplices = array(field(&v, "maximal_simplices")?, "maximal_simplices")?
        .iter()
        .map(|s| {
            let ids = int_array(s, "simplex")?;
            if ids.len() != n + 1 || ids.iter().any(|&i| i < 0 || i as usize >= count) {
                return Err(Error::Parse(format!("simplex {ids:?} does not fit {count} vertices")));
            }
            LatticeSimplex::new(ids.into_iter().map(|i| i as u32).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let signs = int_array(field(&v, "signs")?, "signs")?;
    if signs.len() != count || signs.iter().any(|&s| s != 0 && s != 1) {
        return Err(Error::Parse("signs must be one 0 or 1 per vertex".into()));
    }
    let lift = match v.get("lift") {
        None | Some(Value::Null) => None,
        Some(l) => {
            let heights = array(l, "lift")?
                .iter()
                .map(|h| h.as_str().ok_or_else(|| Error::Parse("lift heights are strings".into())).and_then(rational_from_str))
                .collect::<Result<Vec<BigRational>>>()?;
            if heights.len() != count {
                return Err(Error::Parse("one lift height per vertex".into()));
            }
            Some(LiftCertificate { heights })
        }
    };
    let t = Triangulation::new(n, m, vertices, simplices, construction);
    let d = Datum::new(t, SignDistribution { signs: signs.into_iter().map(|s| s as u8).collect() })?;
    Ok((d, lift))
}

fn half(x2: i64) -> String {
    format!("{x2}/2")
}

/// The hypersurface with vertex coordinates as halves in their orthant.
pub fn gamma_value(g: &GammaComplex, degree: i64) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| {
            json!({
                "coords": v.coords2.iter().map(|&c| half(c)).collect::<Vec<_>>(),
                "mask": v.mask,
                "edge": v.edge,
                "ends": v.ends,
            })
        })
        .collect();
    let cells: Vec<Vec<Vec<u32>>> =
        g.simplices.iter().map(|ss| ss.iter().map(|s| s.vertices.clone()).collect()).collect();
    let carriers: Vec<Vec<[u32; 2]>> =
        g.simplices.iter().map(|ss| ss.iter().map(|s| [s.carrier_dim, s.carrier]).collect()).collect();
    json!({
        "format_version": FORMAT_VERSION,
        "dim": g.dim,
        "degree": degree,
        "vertices": vertices,
        "cells": cells,
        "quotient": {
            "carriers": carriers,
            "outer_facet": "points with coordinate sum equal to the degree are identified with their negatives",
        },
    })
}

/// Position of a hypersurface vertex in its orthant, as doubled coordinates.
fn placed(coords2: &[i64], mask: u32) -> Vec<i64> {
    coords2.iter().enumerate().map(|(i, &c)| if mask >> i & 1 == 1 { -c } else { c }).collect()
}

fn decimal_half(x2: i64) -> String {
    if x2 % 2 == 0 {
        format!("{}", x2 / 2)
    } else {
        format!("{}.5", if x2 < 0 && x2 > -2 { "-0".to_string() } else { (x2 / 2).to_string() })
    }
}

/// ASCII OFF of a hypersurface of dimension at most two. Curves are written
/// as two-vertex faces; coordinates are padded to three.
pub fn gamma_to_off(g: &GammaComplex) -> Result<String> {
    if g.dim > 2 {
        return Err(Error::Unsupported(format!("OFF export needs a curve or surface, got dimension {}", g.dim)));
    }
    let faces = g.simplices.last().map(|s| s.as_slice()).unwrap_or(&[]);
    let mut out = String::new();
    writeln!(out, "OFF").unwrap();
    writeln!(out, "{} {} 0", g.vertices.len(), faces.len()).unwrap();
    for v in &g.vertices {
        let mut c: Vec<String> = placed(&v.coords2, v.mask).into_iter().map(decimal_half).collect();
        c.resize(3, "0".into());
        writeln!(out, "{}", c.join(" ")).unwrap();
    }
    for f in faces {
        let ids: Vec<String> = f.vertices.iter().map(u32::to_string).collect();
        writeln!(out, "{} {}", ids.len(), ids.join(" ")).unwrap();
    }
    Ok(out)
}

/// Parses OFF text back into vertex and face counts and returns
/// `V − E + F` with edges taken from the face boundaries.
pub fn off_euler(text: &str) -> Result<i64> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some("OFF") {
        return Err(Error::Parse("missing OFF header".into()));
    }
    let counts: Vec<usize> = lines
        .next()
        .ok_or_else(|| Error::Parse("missing counts".into()))?
        .split_whitespace()
        .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad count {x}"))))
        .collect::<Result<_>>()?;
    let (nv, nf) = (counts[0], counts[1]);
    for _ in 0..nv {
        lines.next().ok_or_else(|| Error::Parse("missing vertex line".into()))?;
    }
    let mut edges = std::collections::BTreeSet::new();
    let mut two_gons = 0;
    for _ in 0..nf {
        let ids: Vec<usize> = lines
            .next()
            .ok_or_else(|| Error::Parse("missing face line".into()))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad index {x}"))))
            .collect::<Result<_>>()?;
        let f = &ids[1..];
        if f.len() != ids[0] || f.iter().any(|&i| i >= nv) {
            return Err(Error::Parse(format!("bad face {ids:?}")));
        }
        if f.len() == 2 {
            two_gons += 1;
            continue;
        }
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    if two_gons > 0 {
        return Ok(nv as i64 - two_gons);
    }
    Ok(nv as i64 - edges.len() as i64 + nf as i64)
}

/// The datum restricted to the coordinate hyperplane `x_axis = 0`, with
/// that coordinate dropped.
pub fn coordinate_slice(d: &Datum, axis: usize) -> Result<Datum> {
    let t = &d.triangulation;
    let n = t.ambient_dim;
    if axis >= n || n < 2 {
        return Err(Error::BadParameters(format!("no coordinate {} in dimension {n}", axis + 1)));
    }
    let mut simplices: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut signs: BTreeMap<Vec<i64>, u8> = BTreeMap::new();
    for s in &t.maximal_simplices {
        let on: Vec<u32> = s.vertex_ids.iter().copied().filter(|&v| t.vertices.point(v).coords[axis] == 0).collect();
        if on.len() != n {
            continue;
        }
        let pts: Vec<Vec<i64>> = on
            .iter()
            .map(|&v| {
                let mut c = t.vertices.point(v).coords.clone();
                c.remove(axis);
                signs.insert(c.clone(), d.signs.signs[v as usize]);
                c
            })
            .collect();
        simplices.push(pts);
    }
    let slice = Triangulation::from_coordinate_simplices(n - 1, t.degree, &simplices, Construction::Custom {})?;
    let s = slice.vertices.points().iter().map(|p| signs[&p.coords]).collect();
    Datum::new(slice, SignDistribution { signs: s })
}

/// One monomial per vertex, `±x0^a0*x1^a1*...*t^(p/q)`, in lexicographic
/// order of the exponent vectors `(a1, ..., an)`.
pub fn viro_polynomial(d: &Datum, lift: &LiftCertificate) -> Result<String> {
    let t = &d.triangulation;
    if lift.heights.len() != t.vertices.len() {
        return Err(Error::BadParameters("one height per vertex needed".into()));
    }
    let mut terms: Vec<(Vec<i64>, String)> = t
        .vertices
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let sign = if d.signs.signs[i] == PLUS { '+' } else { '-' };
            let mut s = format!("{sign}x0^{}", t.degree - p.coord_sum());
            for (j, c) in p.coords.iter().enumerate() {
                write!(s, "*x{}^{c}", j + 1).unwrap();
            }
            write!(s, "*t^({})", rational_to_string(&lift.heights[i])).unwrap();
            (p.coords.clone(), s)
        })
        .collect();
    terms.sort();
    Ok(terms.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" "))
}

/// Integer heights, for callers that have no lift to hand.
pub fn zero_lift(d: &Datum) -> LiftCertificate {
    LiftCertificate { heights: vec![BigRational::from_integer(BigInt::from(0)); d.triangulation.vertices.len()] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patchwork::{build_gamma, extend};
    use crate::triangulation::{build_iv3, construct_lift, Iv3Params};

    fn iv3(m: i64) -> Datum {
        Datum::standard(build_iv3(&Iv3Params::standard(m)).unwrap()).unwrap()
    }

    #[test]
    fn datum_round_trip_is_byte_stable() {
        let d = iv3(3);
        let lift = construct_lift(&d.triangulation).unwrap();
        let text = datum_to_json(&d, Some(&lift));
        let (back, l2) = datum_from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(l2.as_ref(), Some(&lift));
        assert_eq!(datum_to_json(&back, l2.as_ref()), text);
        assert!(!text.contains(' '));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let text = datum_to_json(&iv3(2), None);
        assert!(datum_from_json(&text.replace("\"format_version\":1", "\"format_version\":2")).is_err());
        assert!(datum_from_json(&text.replace("\"signs\":[", "\"signs\":[7,")).is_err());
        assert!(datum_from_json("{").is_err());
    }

    #[test]
    fn off_of_cubic_surface() {
        let g = build_gamma(&extend(&iv3(3)));
        let off = gamma_to_off(&g).unwrap();
        assert_eq!(off_euler(&off).unwrap(), -5);
    }

    #[test]
    fn single_triangle_polynomial() {
        let t = Triangulation::from_coordinate_simplices(
            2,
            1,
            &[vec![vec![0, 0], vec![1, 0], vec![0, 1]]],
            Construction::Custom {},
        )
        .unwrap();
        let d = Datum::new(t, SignDistribution { signs: vec![0, 1, 0] }).unwrap();
        let p = viro_polynomial(&d, &zero_lift(&d)).unwrap();
        assert_eq!(p, "+x0^1*x1^0*x2^0*t^(0/1) -x0^0*x1^0*x2^1*t^(0/1) +x0^0*x1^1*x2^0*t^(0/1)");
    }

    #[test]
    fn slice_of_a_surface_is_a_curve() {
        let d = iv3(4);
        let s = coordinate_slice(&d, 2).unwrap();
        assert_eq!(s.triangulation.ambient_dim, 2);
        assert_eq!(s.triangulation.maximal_simplices.len(), 16);
    }
}
