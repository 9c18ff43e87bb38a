//! Heights for pieces whose regularity has no layered description.
//!
//! The bend conditions across interior facets are linear in the heights, so a
//! floating-point LP finds a candidate which is then rounded to integers and
//! rechecked exactly. Nothing here is trusted without that check.

use std::collections::{BTreeMap, HashMap};

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use super::layered::Pt;
use crate::error::{Error, Result};
use crate::lattice::det;

type Bend = (Vec<(usize, i128)>, usize, i128);

fn homog(pts: &[&Pt]) -> Vec<Vec<i64>> {
    pts.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect()
}

/// For each interior facet: coefficients of the simplex vertices and of the
/// opposite vertex in "the opposite vertex lies above the affine extension".
fn bends(simplices: &[Vec<usize>], points: &[Pt]) -> Vec<Bend> {
    let mut facets: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (si, s) in simplices.iter().enumerate() {
        for j in 0..s.len() {
            let mut f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect();
            f.sort_unstable();
            facets.entry(f).or_default().push((si, s[j]));
        }
    }
    let mut out = Vec::new();
    for (_, u) in facets {
        if u.len() != 2 {
            continue;
        }
        let (s1, _) = u[0];
        let (_, q) = u[1];
        let s = &simplices[s1];
        let pts: Vec<&Pt> = s.iter().map(|&v| &points[v]).collect();
        let base = det(&homog(&pts));
        let coeffs = s
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut rep = pts.clone();
                rep[i] = &points[q];
                (v, -det(&homog(&rep)) * base.signum())
            })
            .collect();
        out.push((coeffs, q, base.abs()));
    }
    out
}

fn bend_value(b: &Bend, h: &[i64]) -> i128 {
    let (coeffs, q, cq) = b;
    coeffs.iter().map(|&(v, c)| c * h[v] as i128).sum::<i128>() + cq * h[*q] as i128
}

/// Integer heights on the vertices of `simplices` inducing exactly them.
pub(crate) fn solve_heights(simplices: &[Vec<Pt>]) -> Result<BTreeMap<Pt, i64>> {
    let mut index: BTreeMap<Pt, usize> = BTreeMap::new();
    for s in simplices {
        for p in s {
            let n = index.len();
            index.entry(p.clone()).or_insert(n);
        }
    }
    let mut points = vec![Vec::new(); index.len()];
    for (p, &i) in &index {
        points[i] = p.clone();
    }
    let ids: Vec<Vec<usize>> = simplices.iter().map(|s| s.iter().map(|p| index[p]).collect()).collect();
    let bends = bends(&ids, &points);

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..points.len()).map(|_| lp.add_var(1.0, (0.0, f64::INFINITY))).collect();
    for b in &bends {
        let mut terms: Vec<_> = b.0.iter().map(|&(v, c)| (vars[v], c as f64)).collect();
        terms.push((vars[b.1], b.2 as f64));
        lp.add_constraint(terms.as_slice(), ComparisonOp::Ge, 1.0);
    }
    let sol = lp
        .solve()
        .map_err(|e| Error::Inconsistent(format!("no regular lift found: {e}")))?
        .into_solution()
        .map_err(|_| Error::Inconsistent("lift search interrupted".into()))?;
    let raw: Vec<f64> = vars.iter().map(|&v| sol.var_value(v)).collect();

    for scale in [1.0, 64.0, 4096.0, 262144.0] {
        let h: Vec<i64> = raw.iter().map(|x| (x * scale).round() as i64).collect();
        if bends.iter().all(|b| bend_value(b, &h) > 0) {
            return Ok(index.into_iter().map(|(p, i)| (p, h[i])).collect());
        }
    }
    Err(Error::Inconsistent("rounded lift heights fail the exact check".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_split_along_one_diagonal() {
        let s = vec![
            vec![vec![0, 0], vec![1, 0], vec![1, 1]],
            vec![vec![0, 0], vec![0, 1], vec![1, 1]],
        ];
        let h = solve_heights(&s).unwrap();
        // the diagonal (0,0)-(1,1) must be a valley
        assert!(h[&vec![1, 0]] + h[&vec![0, 1]] > h[&vec![0, 0]] + h[&vec![1, 1]]);
    }
}
