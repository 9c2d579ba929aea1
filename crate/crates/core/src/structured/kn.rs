use std::collections::HashSet;

use serde::Serialize;

use super::perm::{class_representatives, Permutation, ReducedWord};
use crate::enumeration::{polytope, PolytopeConfig, ReachedState};
use crate::error::{Error, Result};
use crate::geometry::is_in_hull;
use crate::graph::DiffusionGraph;
use crate::ops::{AveragingOp, OperationSequence};
use crate::population::PopulationVector;
use crate::rational::Rational;

/// Largest `n` for which the class representatives are listed explicitly.
pub const MAX_STRUCTURED_N: usize = 7;

/// Vertices in increasing order of population (ties broken by label).
fn rank_order(rho: &PopulationVector) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=rho.dim()).collect();
    order.sort_by(|&a, &b| rho.get(a).cmp(rho.get(b)).then(a.cmp(&b)));
    order
}

/// Realizes a reduced word on `K_n`: letter `σ_i` averages the vertices
/// currently holding the `i`-th and `(i+1)`-th smallest populations of the
/// virtual order, which then swap places.
pub fn realize(rho0: &PopulationVector, word: &ReducedWord) -> Result<(PopulationVector, OperationSequence)> {
    let mut order = rank_order(rho0);
    let mut rho = rho0.clone();
    let mut ops = Vec::with_capacity(word.len());
    for &a in &word.letters {
        if a == 0 || a >= order.len() {
            return Err(Error::Precondition(format!("letter {a} out of range")));
        }
        let (u, v) = (order[a - 1], order[a]);
        let op = AveragingOp::pair(u.min(v), u.max(v));
        rho = op.act(&rho)?;
        ops.push(op);
        order.swap(a - 1, a);
    }
    Ok((rho, OperationSequence(ops)))
}

fn require_generic(rho0: &PopulationVector) -> Result<()> {
    if !rho0.has_distinct_components() {
        return Err(Error::Precondition(
            "complete-graph construction needs distinct components".into(),
        ));
    }
    if rho0.dim() > MAX_STRUCTURED_N {
        return Err(Error::Precondition(format!(
            "complete-graph construction is limited to n ≤ {MAX_STRUCTURED_N}"
        )));
    }
    Ok(())
}

/// One candidate per commutation class over `S_n`, realized on `rho0`.
pub fn kn_candidates(rho0: &PopulationVector) -> Result<Vec<ReachedState>> {
    require_generic(rho0)?;
    class_representatives(rho0.dim())
        .iter()
        .map(|w| realize(rho0, w).map(|(point, sequence)| ReachedState { point, sequence }))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct KnVertices {
    /// Sorted by point.
    pub vertices: Vec<ReachedState>,
    /// Number of distinct candidate points (one per class when generic).
    pub candidates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Certified vertices of the complete-graph polytope. Repeated components
/// fall back to generic enumeration.
pub fn kn_extreme_points(rho0: &PopulationVector) -> Result<KnVertices> {
    let reference = KnReference::new(rho0)?;
    let flags = crate::par::map(&reference.states, |s| reference.is_vertex(&s.point));
    let mut vertices = Vec::new();
    for (s, f) in reference.states.iter().zip(flags) {
        if f? {
            vertices.push(s.clone());
        }
    }
    vertices.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(KnVertices {
        vertices,
        candidates: reference.states.len(),
        warning: reference.warning.clone(),
    })
}

/// Decides membership in the vertex set of the complete-graph polytope.
#[derive(Clone, Debug)]
pub struct KnReference {
    states: Vec<ReachedState>,
    points: Vec<PopulationVector>,
    lookup: HashSet<PopulationVector>,
    /// Candidates are exactly the vertices (no LP needed).
    certified: bool,
    warning: Option<String>,
}

impl KnReference {
    pub fn new(rho0: &PopulationVector) -> Result<Self> {
        let (states, certified, warning) = if require_generic(rho0).is_ok() {
            let mut seen = HashSet::new();
            let states: Vec<ReachedState> = kn_candidates(rho0)?
                .into_iter()
                .filter(|s| seen.insert(s.point.clone()))
                .collect();
            (states, false, None)
        } else {
            let kn = DiffusionGraph::complete(rho0.dim())?;
            let config = PolytopeConfig {
                classify: false,
                use_blocks: false,
                ..PolytopeConfig::for_graph(&kn)
            };
            let result = polytope(&kn, rho0, &config)?;
            let states = result
                .vertices
                .into_iter()
                .map(|v| ReachedState {
                    point: v.point,
                    sequence: v.sequence,
                })
                .collect();
            let warning = if rho0.has_distinct_components() {
                "complete-graph reference enumerated directly (n too large for class listing)"
            } else {
                "repeated components: complete-graph vertices enumerated directly, class bijection not assumed"
            };
            (states, true, Some(warning.to_string()))
        };
        let points: Vec<PopulationVector> = states.iter().map(|s| s.point.clone()).collect();
        let lookup = points.iter().cloned().collect();
        Ok(Self {
            states,
            points,
            lookup,
            certified,
            warning,
        })
    }

    pub fn note(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub fn is_vertex(&self, p: &PopulationVector) -> Result<bool> {
        if !self.lookup.contains(p) {
            return Ok(false);
        }
        if self.certified {
            return Ok(true);
        }
        let others: Vec<PopulationVector> = self.points.iter().filter(|q| *q != p).cloned().collect();
        Ok(!is_in_hull(p, &others)?.inside)
    }
}

/// The population rank pattern, listing vertices from smallest to largest
/// population, at which no averaging lowers `w·ρ`: the reverse of the
/// vertices listed by increasing weight.
pub fn stopping_permutation(weights: &[Rational]) -> Result<Permutation> {
    let distinct: HashSet<&Rational> = weights.iter().collect();
    if distinct.len() != weights.len() {
        return Err(Error::Precondition(
            "stopping permutation needs distinct weights".into(),
        ));
    }
    let mut by_weight: Vec<usize> = (1..=weights.len()).collect();
    by_weight.sort_by(|&a, &b| weights[a - 1].cmp(&weights[b - 1]));
    by_weight.reverse();
    Permutation::new(by_weight)
}
