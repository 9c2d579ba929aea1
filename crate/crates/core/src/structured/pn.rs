use std::collections::BTreeSet;

use serde::Serialize;

use crate::enumeration::{ClassifiedVertex, Completeness, PolytopeResult, VertexKind};
use crate::error::{Error, Result};
use crate::geometry::{edges, extreme_points};
use crate::graph::DiffusionGraph;
use crate::ops::{AveragingOp, OperationSequence};
use crate::population::PopulationVector;
use crate::rational::Rational;

/// `S_A`: `rho0` averaged over each maximal run of `A ⊆ {1, …, n−1}`
/// (a run `i..=j` merges components `i..=j+1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetPoint {
    pub subset: Vec<usize>,
    pub point: PopulationVector,
}

impl SubsetPoint {
    /// Maximal runs of the subset as `(first, last)` transposition indices.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        runs(&self.subset)
    }

    /// One pair operator per singleton run, one block per longer run.
    pub fn sequence(&self) -> OperationSequence {
        OperationSequence(
            self.runs()
                .into_iter()
                .map(|(a, b)| {
                    if a == b {
                        AveragingOp::pair(a, a + 1)
                    } else {
                        AveragingOp::block(a..=b + 1)
                    }
                })
                .collect(),
        )
    }

    /// No two consecutive elements: reachable by commuting pair operators.
    pub fn is_sparse(&self) -> bool {
        self.subset.windows(2).all(|w| w[1] > w[0] + 1)
    }
}

pub(crate) fn runs(subset: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &a in subset {
        match out.last_mut() {
            Some((_, last)) if *last + 1 == a => *last = a,
            _ => out.push((a, a)),
        }
    }
    out
}

fn normalize_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if let Some(&bad) = set.iter().find(|&&a| a == 0 || a >= n) {
        return Err(Error::Precondition(format!("subset element {bad} outside 1..{n}")));
    }
    Ok(set.into_iter().collect())
}

pub(crate) fn require_sorted(rho0: &PopulationVector) -> Result<()> {
    if !rho0.is_non_decreasing() {
        return Err(Error::Precondition(
            "ordered path construction needs non-decreasing ρ₀".into(),
        ));
    }
    Ok(())
}

pub fn pn_subset_point(subset: &[usize], rho0: &PopulationVector) -> Result<SubsetPoint> {
    require_sorted(rho0)?;
    let subset = normalize_subset(subset, rho0.dim())?;
    let mut comps = rho0.components().to_vec();
    for (a, b) in runs(&subset) {
        let mean: Rational = comps[a - 1..=b].iter().sum::<Rational>() / Rational::from_integer((b - a + 2).into());
        for c in &mut comps[a - 1..=b] {
            *c = mean.clone();
        }
    }
    Ok(SubsetPoint {
        subset,
        point: PopulationVector::new(comps)?,
    })
}

/// All `2^{n−1}` subset points in binary-counting order of `A`.
pub fn pn_subset_points(rho0: &PopulationVector) -> Result<Vec<SubsetPoint>> {
    require_sorted(rho0)?;
    let m = rho0.dim() - 1;
    (0u64..1 << m)
        .map(|mask| {
            let subset: Vec<usize> = (1..=m).filter(|a| mask >> (a - 1) & 1 == 1).collect();
            pn_subset_point(&subset, rho0)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PnPolytope {
    pub result: PolytopeResult,
    /// Subset labels of `result.vertices`, index for index. Collisions from
    /// repeated components keep the smallest subset.
    pub subsets: Vec<Vec<usize>>,
    /// `2^{n−1}`.
    pub generic_count: usize,
}

impl PnPolytope {
    /// Edges of the vertex set, as index pairs into `result.vertices`.
    pub fn edges(&self) -> Result<Vec<(usize, usize)>> {
        edges(&self.result.points())
    }
}

/// The ordered path polytope: certified subset points, labeled nonlocal
/// when reachable by commuting pairs and asymptotic otherwise.
pub fn pn_polytope(rho0: &PopulationVector) -> Result<PnPolytope> {
    let n = rho0.dim();
    let graph = DiffusionGraph::path(n)?;
    let mut points = pn_subset_points(rho0)?;
    points.sort_by(|a, b| {
        a.point
            .cmp(&b.point)
            .then(a.subset.len().cmp(&b.subset.len()))
            .then(a.subset.cmp(&b.subset))
    });
    points.dedup_by(|a, b| a.point == b.point);
    let pts: Vec<PopulationVector> = points.iter().map(|s| s.point.clone()).collect();
    let certs = extreme_points(&pts)?;
    let mut vertices = Vec::new();
    let mut subsets = Vec::new();
    for (sp, cert) in points.iter().zip(&certs) {
        debug_assert_eq!(sp.point, cert.point);
        if !cert.is_extreme {
            continue;
        }
        vertices.push(ClassifiedVertex {
            point: sp.point.clone(),
            sequence: sp.sequence(),
            kind: Some(if sp.is_sparse() {
                VertexKind::Nonlocal
            } else {
                VertexKind::Asymptotic
            }),
        });
        subsets.push(sp.subset.clone());
    }
    let mut notes = Vec::new();
    let generic_count = 1usize << (n - 1);
    if vertices.len() != generic_count {
        notes.push(format!(
            "repeated components: {} distinct vertices instead of {generic_count}",
            vertices.len()
        ));
    }
    Ok(PnPolytope {
        result: PolytopeResult {
            graph,
            rho0: rho0.clone(),
            vertices,
            completeness: Completeness::Proven,
            depth_reached: n - 1,
            notes,
        },
        subsets,
        generic_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pv(s: &str) -> PopulationVector {
        PopulationVector::parse(s).unwrap()
    }

    #[test]
    fn seven_component_example() {
        let rho = pv("1/28,2/28,3/28,4/28,5/28,6/28,7/28");
        let s = pn_subset_point(&[1, 2, 3, 6], &rho).unwrap();
        let x = rat(10, 4 * 28);
        let z = rat(13, 2 * 28);
        let c = s.point.components();
        assert!(c[..4].iter().all(|v| *v == x));
        assert_eq!(c[4], rat(5, 28));
        assert_eq!(c[5], z);
        assert_eq!(c[6], z);
        assert_eq!(s.runs(), vec![(1, 3), (6, 6)]);
        assert_eq!(s.sequence().to_string(), "B1234 B67");
    }

    #[test]
    fn extremes_of_the_lattice() {
        let rho = pv("1/10,2/10,3/10,4/10");
        assert_eq!(pn_subset_point(&[], &rho).unwrap().point, rho);
        assert_eq!(
            pn_subset_point(&[1, 2, 3], &rho).unwrap().point,
            PopulationVector::uniform(4)
        );
    }

    #[test]
    fn p3_first_case() {
        let p = pn_polytope(&pv("0,2/7,5/7")).unwrap();
        let mut pts = p.result.points();
        pts.sort();
        let mut expected = vec![
            pv("0,2/7,5/7"),
            pv("1/7,1/7,5/7"),
            pv("0,1/2,1/2"),
            PopulationVector::uniform(3),
        ];
        expected.sort();
        assert_eq!(pts, expected);
    }

    #[test]
    fn cube_for_four_levels() {
        let p = pn_polytope(&pv("1/10,2/10,3/10,4/10")).unwrap();
        assert_eq!(p.result.vertices.len(), 8);
        let edges = p.edges().unwrap();
        assert_eq!(edges.len(), 12);
        for (i, j) in edges {
            let a: BTreeSet<_> = p.subsets[i].iter().collect();
            let b: BTreeSet<_> = p.subsets[j].iter().collect();
            assert_eq!(a.symmetric_difference(&b).count(), 1);
        }
    }

    #[test]
    fn ties_collapse() {
        let p = pn_polytope(&pv("1/6,1/6,2/6,2/6")).unwrap();
        assert!(p.result.vertices.len() < 8);
        assert!(!p.result.notes.is_empty());
    }

    #[test]
    fn rejects_unsorted() {
        assert!(pn_polytope(&pv("1/2,1/4,1/4")).is_err());
    }
}
