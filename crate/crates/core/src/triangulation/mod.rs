//! Triangulations of dilated simplices: representation, validation, the
//! builders for every construction family, and convexity certificates.

mod ad;
mod complete;
mod iv;
pub mod layered;
mod regular;
mod sd;
pub mod tower;

use std::collections::{BTreeSet, HashMap};

use num::{BigInt, BigRational, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    det, in_dilated_simplex, normalized_volume_coords, simplex_lattice_points, LatticePoint,
    LatticeSimplex, VertexTable,
};

pub use ad::{ad_sides, build_ad4, default_ad_triple, default_ad_triples, AdTriple};
pub use complete::{complete_primitive, CompletionInput};
pub use iv::{build_iv3, build_iv4, product_triangles_triangulation, Iv3Params, Iv4Flavor};
pub use layered::DiagonalRule;
pub use sd::{build_sd3, build_sd4, sd3_omitted_points, sd4_levels};
use tower::{base_bound, combine, lex_sign, power_of_two_above, Tower};

/// Which builder produced a triangulation, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "params")]
pub enum Construction {
    #[serde(rename = "IV3")]
    Iv3(Iv3Params),
    #[serde(rename = "IV4_ODD")]
    Iv4Odd { degree: i64 },
    #[serde(rename = "IV4_EVEN")]
    Iv4Even { degree: i64 },
    #[serde(rename = "SD3")]
    Sd3 { k: i64, a: [i64; 3], b: [i64; 3] },
    #[serde(rename = "SD4")]
    Sd4 { degree: i64 },
    #[serde(rename = "AD4")]
    Ad4 { degree: i64, triples: Vec<AdTriple> },
    #[serde(rename = "CUSTOM")]
    Custom {},
}

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::Iv3(_) => "IV3",
            Construction::Iv4Odd { .. } => "IV4_ODD",
            Construction::Iv4Even { .. } => "IV4_EVEN",
            Construction::Sd3 { .. } => "SD3",
            Construction::Sd4 { .. } => "SD4",
            Construction::Ad4 { .. } => "AD4",
            Construction::Custom {} => "CUSTOM",
        }
    }

    /// Runs the builder, returning the triangulation and its height tower.
    pub(crate) fn build_with_tower(&self) -> Result<(Triangulation, Tower)> {
        match self {
            Construction::Iv3(p) => iv::build_iv3_tower(p),
            Construction::Iv4Odd { degree } => iv::build_iv4_tower(*degree, Iv4Flavor::Odd),
            Construction::Iv4Even { degree } => iv::build_iv4_tower(*degree, Iv4Flavor::Even),
            Construction::Sd3 { k, a, b } => sd::build_sd3_tower(*k, *a, *b),
            Construction::Sd4 { degree } => sd::build_sd4_tower(*degree),
            Construction::Ad4 { degree, triples } => ad::build_ad4_tower(*degree, triples),
            Construction::Custom {} => Err(Error::Unsupported(
                "custom triangulations carry no construction recipe".into(),
            )),
        }
    }

    /// Lattice points of the simplex deliberately left out of the vertex set.
    pub fn omitted_points(&self) -> Vec<Vec<i64>> {
        match self {
            Construction::Sd3 { k, .. } => sd3_omitted_points(*k)
                .into_iter()
                .collect(),
            Construction::Sd4 { degree } => sd::sd4_omitted_points(*degree),
            _ => Vec::new(),
        }
    }
}

/// A triangulation of the dilated simplex of degree `degree` in dimension `ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub ambient_dim: usize,
    pub degree: i64,
    pub vertices: VertexTable,
    pub maximal_simplices: Vec<LatticeSimplex>,
    pub construction: Construction,
}

impl Triangulation {
    /// Builds a triangulation from simplices given by coordinates. The vertex
    /// table is sorted lexicographically and the simplex list is sorted, so
    /// the result does not depend on the order simplices were produced in.
    pub fn from_coordinate_simplices(
        ambient_dim: usize,
        degree: i64,
        simplices: &[Vec<Vec<i64>>],
        construction: Construction,
    ) -> Result<Self> {
        let mut pts: BTreeSet<&Vec<i64>> = BTreeSet::new();
        for s in simplices {
            for p in s {
                if p.len() != ambient_dim {
                    return Err(Error::BadParameters(format!("point {p:?} has wrong dimension")));
                }
                pts.insert(p);
            }
        }
        let points: Vec<LatticePoint> = pts.into_iter().map(|p| LatticePoint::new(p.clone())).collect();
        let vertices = VertexTable::from_points(ambient_dim, points)?;
        let mut maximal = simplices
            .iter()
            .map(|s| {
                LatticeSimplex::new(s.iter().map(|p| vertices.id_of_coords(p).unwrap()).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        maximal.sort();
        maximal.dedup();
        Ok(Self { ambient_dim, degree, vertices, maximal_simplices: maximal, construction })
    }

    /// Builds from explicit ids, without reordering.
    pub fn new(
        ambient_dim: usize,
        degree: i64,
        vertices: VertexTable,
        maximal_simplices: Vec<LatticeSimplex>,
        construction: Construction,
    ) -> Self {
        Self { ambient_dim, degree, vertices, maximal_simplices, construction }
    }

    pub fn coords(&self, s: &LatticeSimplex) -> Vec<&[i64]> {
        s.vertex_ids.iter().map(|&i| self.vertices.point(i).coords.as_slice()).collect()
    }

    /// Maps each codimension-one face to the simplices containing it, as
    /// `(simplex index, opposite vertex id)`.
    pub fn facet_map(&self) -> HashMap<Vec<u32>, Vec<(usize, u32)>> {
        let mut map: HashMap<Vec<u32>, Vec<(usize, u32)>> = HashMap::new();
        for (si, s) in self.maximal_simplices.iter().enumerate() {
            for (k, &opp) in s.vertex_ids.iter().enumerate() {
                let mut f = s.vertex_ids.clone();
                f.remove(k);
                map.entry(f).or_default().push((si, opp));
            }
        }
        map
    }

    /// Whether all given points lie on one facet of the dilated simplex.
    pub fn on_boundary(&self, ids: &[u32]) -> bool {
        let n = self.ambient_dim;
        (0..n).any(|i| ids.iter().all(|&v| self.vertices.point(v).coords[i] == 0))
            || ids.iter().all(|&v| self.vertices.point(v).coord_sum() == self.degree)
    }
}

/// One violated triangulation invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    VertexOutside { vertex: u32 },
    WrongSimplexSize { simplex: usize },
    DegenerateSimplex { simplex: usize },
    Volume { expected: u64, found: u64 },
    /// Interior facet not shared by exactly two simplices.
    FacetMultiplicity { facet: Vec<u32>, count: usize },
    /// Two simplices on the same side of their common facet.
    FacetSameSide { facet: Vec<u32> },
    /// A lattice point of the simplex that is neither a vertex nor a declared omission.
    MissingVertex { point: Vec<i64> },
    /// A vertex the construction declared omitted.
    UnexpectedVertex { point: Vec<i64> },
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Indices of maximal simplices of normalized volume above one.
    pub non_primitive: Vec<usize>,
}

impl ValidationReport {
    /// A genuine triangulation, not necessarily primitive.
    pub fn is_triangulation(&self) -> bool {
        self.violations.is_empty()
    }

    /// A primitive triangulation: the empty report.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.non_primitive.is_empty()
    }
}

fn homogeneous(points: &[&[i64]]) -> Vec<Vec<i64>> {
    points
        .iter()
        .map(|p| std::iter::once(1).chain(p.iter().copied()).collect())
        .collect()
}

/// Checks every triangulation invariant and reports per-simplex primitivity.
pub fn validate(t: &Triangulation) -> ValidationReport {
    let n = t.ambient_dim;
    let m = t.degree;
    let mut rep = ValidationReport::default();
    for (i, p) in t.vertices.points().iter().enumerate() {
        if !in_dilated_simplex(&p.coords, m) {
            rep.violations.push(Violation::VertexOutside { vertex: i as u32 });
        }
    }
    let mut total: u64 = 0;
    let mut sound = true;
    for (si, s) in t.maximal_simplices.iter().enumerate() {
        if s.vertex_ids.len() != n + 1 {
            rep.violations.push(Violation::WrongSimplexSize { simplex: si });
            sound = false;
            continue;
        }
        let v = normalized_volume_coords(&t.coords(s));
        if v == 0 {
            rep.violations.push(Violation::DegenerateSimplex { simplex: si });
            sound = false;
        } else if v > 1 {
            rep.non_primitive.push(si);
        }
        total += v;
    }
    let expected = (m as u64).pow(n as u32);
    if total != expected {
        rep.violations.push(Violation::Volume { expected, found: total });
    }
    if sound {
        let fm = t.facet_map();
        let mut facet_issues: Vec<Violation> = fm
            .par_iter()
            .filter_map(|(f, users)| {
                let boundary = t.on_boundary(f);
                match (boundary, users.len()) {
                    (true, 1) => None,
                    (false, 2) => {
                        let fc: Vec<&[i64]> =
                            f.iter().map(|&i| t.vertices.point(i).coords.as_slice()).collect();
                        let side = |v: u32| {
                            let mut pts = fc.clone();
                            pts.push(&t.vertices.point(v).coords);
                            det(&homogeneous(&pts)).signum()
                        };
                        let (a, b) = (side(users[0].1), side(users[1].1));
                        if a * b < 0 {
                            None
                        } else {
                            Some(Violation::FacetSameSide { facet: f.clone() })
                        }
                    }
                    (_, c) => Some(Violation::FacetMultiplicity { facet: f.clone(), count: c }),
                }
            })
            .collect();
        facet_issues.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        rep.violations.extend(facet_issues);
    }
    let omitted: BTreeSet<Vec<i64>> = t.construction.omitted_points().into_iter().collect();
    for p in simplex_lattice_points(n, m) {
        let present = t.vertices.id_of_coords(&p).is_some();
        let skip = omitted.contains(&p);
        if !present && !skip {
            rep.violations.push(Violation::MissingVertex { point: p });
        } else if present && skip {
            rep.violations.push(Violation::UnexpectedVertex { point: p });
        }
    }
    rep
}

/// Heights on the vertices whose lower convex hull should induce a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCertificate {
    /// Height of each vertex, indexed by vertex id.
    pub heights: Vec<BigRational>,
}

/// A facet across which the lift fails to bend strictly upward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityViolation {
    pub facet: Vec<u32>,
    pub simplices: (usize, usize),
}

/// Coefficients for "vertex `q` lies strictly above the affine extension of
/// the lift over simplex `s`": `sum_i c_i h(v_i) + c_q h(q) > 0`.
fn bend_coefficients(t: &Triangulation, s: &LatticeSimplex, q: u32) -> (Vec<(u32, i128)>, i128) {
    let pts = t.coords(s);
    let base = det(&homogeneous(&pts));
    let qc = t.vertices.point(q).coords.as_slice();
    let mut coeffs = Vec::with_capacity(pts.len());
    for (i, &v) in s.vertex_ids.iter().enumerate() {
        let mut rep = pts.clone();
        rep[i] = qc;
        // q = sum lambda_i v_i with lambda_i = det_i / base
        coeffs.push((v, -det(&homogeneous(&rep)) * base.signum()));
    }
    (coeffs, base.abs())
}

fn interior_pairs(t: &Triangulation) -> Vec<(Vec<u32>, usize, usize, u32)> {
    let mut pairs: Vec<_> = t
        .facet_map()
        .into_iter()
        .filter(|(_, u)| u.len() == 2)
        .map(|(f, u)| (f, u[0].0, u[1].0, u[1].1))
        .collect();
    pairs.sort();
    pairs
}

/// Checks that the lift bends strictly upward across every interior facet.
pub fn certify_convexity(
    t: &Triangulation,
    cert: &LiftCertificate,
) -> (bool, Vec<ConvexityViolation>) {
    if cert.heights.len() != t.vertices.len() {
        return (false, Vec::new());
    }
    let violations: Vec<ConvexityViolation> = interior_pairs(t)
        .into_par_iter()
        .filter_map(|(f, s1, s2, q)| {
            let (coeffs, cq) = bend_coefficients(t, &t.maximal_simplices[s1], q);
            let mut val = &cert.heights[q as usize] * BigRational::from_integer(BigInt::from(cq));
            for (v, c) in coeffs {
                val += &cert.heights[v as usize] * BigRational::from_integer(BigInt::from(c));
            }
            if val.is_positive() {
                None
            } else {
                Some(ConvexityViolation { facet: f, simplices: (s1, s2) })
            }
        })
        .collect();
    (violations.is_empty(), violations)
}

/// Rebuilds the construction's layered height tower and combines its levels
/// with a base large enough that every interior facet bends upward.
pub fn construct_lift(t: &Triangulation) -> Result<LiftCertificate> {
    let (rebuilt, tower) = t.construction.build_with_tower()?;
    if rebuilt.vertices != t.vertices || rebuilt.maximal_simplices != t.maximal_simplices {
        return Err(Error::Inconsistent(
            "triangulation differs from what its construction produces".into(),
        ));
    }
    lift_from_tower(t, &tower)
}

/// Combines a tower into integer heights, or reports the first facet where
/// the tower is lexicographically wrong.
pub(crate) fn lift_from_tower(t: &Triangulation, tower: &Tower) -> Result<LiftCertificate> {
    let points: Vec<Vec<i64>> = t.vertices.points().iter().map(|p| p.coords.clone()).collect();
    let levels = tower.integer_levels(&points);
    let bounds: Vec<Result<BigInt>> = interior_pairs(t)
        .into_par_iter()
        .map(|(f, s1, _, q)| {
            let (coeffs, cq) = bend_coefficients(t, &t.maximal_simplices[s1], q);
            let c: Vec<i128> = levels
                .iter()
                .map(|lv| {
                    let mut x = lv[q as usize] as i128 * cq;
                    for &(v, cv) in &coeffs {
                        x += lv[v as usize] as i128 * cv;
                    }
                    x
                })
                .collect();
            if lex_sign(&c) <= 0 {
                return Err(Error::Inconsistent(format!(
                    "height tower does not induce the facet {f:?} (level values {c:?})"
                )));
            }
            Ok(base_bound(&c))
        })
        .collect();
    let mut worst = BigInt::from(2);
    for b in bounds {
        let b = b?;
        if b > worst {
            worst = b;
        }
    }
    let base = power_of_two_above(&worst);
    let heights = combine(&levels, &base)
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let cert = LiftCertificate { heights };
    let (ok, bad) = certify_convexity(t, &cert);
    if !ok {
        return Err(Error::Inconsistent(format!("{} facets fail after combining", bad.len())));
    }
    Ok(cert)
}

/// Parses or formats rational heights as `p/q` strings.
pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        format!("{}/1", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?;
    let b: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?;
    if b.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s}")));
    }
    Ok(BigRational::new(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn custom(n: usize, m: i64, simplices: Vec<Vec<Vec<i64>>>) -> Triangulation {
        Triangulation::from_coordinate_simplices(n, m, &simplices, Construction::Custom {}).unwrap()
    }

    #[test]
    fn single_triangle_is_valid() {
        let t = custom(2, 1, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]]);
        assert!(validate(&t).is_valid());
    }

    #[test]
    fn doubled_triangle_has_volume_violation() {
        let t = Triangulation::new(
            2,
            1,
            VertexTable::from_points(
                2,
                vec![vec![0, 0].into(), vec![1, 0].into(), vec![0, 1].into()],
            )
            .unwrap(),
            vec![
                LatticeSimplex::new(vec![0, 1, 2]).unwrap(),
                LatticeSimplex::new(vec![0, 1, 2]).unwrap(),
            ],
            Construction::Custom {},
        );
        let rep = validate(&t);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Volume { expected: 1, found: 2 })));
    }

    #[test]
    fn flat_lift_is_not_convex() {
        let t = custom(
            2,
            2,
            vec![
                vec![vec![0, 0], vec![1, 0], vec![0, 1]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1]],
                vec![vec![1, 0], vec![2, 0], vec![1, 1]],
                vec![vec![0, 1], vec![1, 1], vec![0, 2]],
            ],
        );
        assert!(validate(&t).is_valid());
        let flat = LiftCertificate { heights: vec![BigRational::zero(); t.vertices.len()] };
        assert!(!certify_convexity(&t, &flat).0);
        // x^2 + y^2 induces exactly this triangulation
        let heights = t
            .vertices
            .points()
            .iter()
            .map(|p| BigRational::from_integer(BigInt::from(p.coords[0].pow(2) + p.coords[1].pow(2) + p.coords[0] * p.coords[1])))
            .collect();
        assert!(certify_convexity(&t, &LiftCertificate { heights }).0);
    }

    #[test]
    fn unit_simplex_has_no_interior_facets() {
        let t = custom(3, 1, vec![vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]]);
        let cert = LiftCertificate { heights: vec![BigRational::zero(); 4] };
        assert!(certify_convexity(&t, &cert).0);
    }

    #[test]
    fn custom_has_no_lift() {
        let t = custom(2, 1, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]]);
        assert!(matches!(construct_lift(&t), Err(Error::Unsupported(_))));
    }

    #[test]
    fn construction_json_shape() {
        let c = Construction::Iv4Odd { degree: 4 };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"tag":"IV4_ODD","params":{"degree":4}}"#);
        let back: Construction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rational_strings() {
        let q = rational_from_str("-6/4").unwrap();
        assert_eq!(rational_to_string(&q), "-3/2");
        assert!(rational_from_str("1/0").is_err());
    }
}
