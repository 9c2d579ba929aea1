//! Linear objectives over diffusion polytopes: energies, the rearrangement
//! (Gardner) bound and the fraction of it a graph recovers.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::enumeration::{polytope, ClassifiedVertex, Completeness, PolytopeConfig, PolytopeResult, VertexKind};
use crate::error::{Error, Result};
use crate::geometry::minimize;
use crate::graph::DiffusionGraph;
use crate::ops::{apply, OperationSequence};
use crate::population::PopulationVector;
use crate::rational::{serde_rational, serde_rational_vec, to_decimal_string, Rational};
use crate::structured::{kn_candidates, kn_extreme_points, pn_polytope};

/// Positive, pairwise distinct weights `w₁ … w_n` of `f = Σ wᵢρᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Objective {
    #[serde(with = "serde_rational_vec")]
    weights: Vec<Rational>,
}

impl Objective {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Precondition("objective needs at least one weight".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::Precondition("objective weights must be positive".into()));
        }
        let distinct: HashSet<&Rational> = weights.iter().collect();
        if distinct.len() != weights.len() {
            return Err(Error::Precondition("objective weights must be distinct".into()));
        }
        Ok(Self { weights })
    }

    pub fn parse(input: &str) -> Result<Self> {
        Self::new(crate::rational::parse_rational_list(input)?)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    fn check(&self, rho: &PopulationVector) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        Ok(())
    }
}

pub fn energy(w: &Objective, rho: &PopulationVector) -> Result<Rational> {
    w.check(rho)?;
    Ok(w.weights.iter().zip(rho.components()).map(|(a, b)| a * b).sum())
}

/// Minimum over all rearrangements of `rho0`: largest populations on the
/// smallest weights.
pub fn gardner_limit(w: &Objective, rho0: &PopulationVector) -> Result<Rational> {
    w.check(rho0)?;
    let mut pops = rho0.components().to_vec();
    pops.sort_by(|a, b| b.cmp(a));
    let mut weights = w.weights.clone();
    weights.sort();
    Ok(pops.iter().zip(&weights).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Generic hull search on the graph.
    Enumerate,
    /// Closed-form vertex sets (complete graphs, ordered paths).
    Structured,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(Method::Enumerate),
            "structured" => Ok(Method::Structured),
            _ => Err(Error::Parse {
                what: "method",
                input: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumerate => "enumerate",
            Method::Structured => "structured",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyReport {
    pub method: Method,
    #[serde(with = "serde_rational")]
    pub initial_energy: Rational,
    #[serde(with = "serde_rational")]
    pub optimal_energy: Rational,
    #[serde(with = "serde_rational")]
    pub gardner_energy: Rational,
    /// Every minimizing vertex, sorted by point.
    pub optimal_vertices: Vec<ClassifiedVertex>,
    /// `(E₀ − E_opt) / (E₀ − E_gardner)`, zero when the bound is `E₀`.
    #[serde(with = "serde_rational")]
    pub recovered_fraction: Rational,
    /// Display only.
    pub recovered_percent: String,
    pub completeness: Completeness,
    /// The vertex search did not close, so the extracted energy is only a
    /// lower bound.
    pub lower_bound_only: bool,
}

impl EnergyReport {
    pub fn optimal_vertex(&self) -> &ClassifiedVertex {
        &self.optimal_vertices[0]
    }
}

/// Minimizes `w` over the vertices of an existing result.
pub fn report_for(result: &PolytopeResult, w: &Objective, method: Method) -> Result<EnergyReport> {
    let points = result.points();
    let min = minimize(w.weights(), &points)?;
    let initial = energy(w, &result.rho0)?;
    let gardner = gardner_limit(w, &result.rho0)?;
    let gap = &initial - &gardner;
    let fraction = if gap.is_zero() {
        Rational::zero()
    } else {
        (&initial - &min.value) / gap
    };
    let percent = to_decimal_string(&(&fraction * Rational::from_integer(100.into())), 2);
    let optimal_vertices = min.argmin.iter().filter_map(|p| result.find(p).cloned()).collect();
    Ok(EnergyReport {
        method,
        initial_energy: initial,
        optimal_energy: min.value,
        gardner_energy: gardner,
        optimal_vertices,
        recovered_fraction: fraction,
        recovered_percent: percent,
        completeness: result.completeness,
        lower_bound_only: result.completeness == Completeness::DepthBounded,
    })
}

/// Vertex set of `rho0` on `graph` by the requested method.
pub fn vertex_set(graph: &DiffusionGraph, rho0: &PopulationVector, method: Method) -> Result<PolytopeResult> {
    match method {
        Method::Enumerate => polytope(graph, rho0, &PolytopeConfig::for_graph(graph)),
        Method::Structured if graph.is_standard_path() => Ok(pn_polytope(rho0)?.result),
        Method::Structured if graph.is_complete() => {
            let kn = kn_extreme_points(rho0)?;
            let mut notes = Vec::new();
            notes.extend(kn.warning);
            Ok(PolytopeResult {
                graph: graph.clone(),
                rho0: rho0.clone(),
                vertices: kn
                    .vertices
                    .into_iter()
                    .map(|s| ClassifiedVertex {
                        point: s.point,
                        sequence: s.sequence,
                        kind: Some(VertexKind::Nonlocal),
                    })
                    .collect(),
                completeness: Completeness::Proven,
                depth_reached: graph.n() * (graph.n() - 1) / 2,
                notes,
            })
        }
        Method::Structured => Err(Error::Precondition(
            "structured method applies to complete graphs and ordered paths only".into(),
        )),
    }
}

pub fn optimize_over(
    graph: &DiffusionGraph,
    rho0: &PopulationVector,
    w: &Objective,
    method: Method,
) -> Result<EnergyReport> {
    if w.dim() != graph.n() {
        return Err(Error::Dimension {
            expected: graph.n(),
            got: w.dim(),
        });
    }
    if method == Method::Structured && graph.is_complete() && rho0.has_distinct_components() {
        // The hull of the class candidates is the polytope; only the
        // minimizing face needs certifying, which `minimize` does.
        let mut vertices: Vec<ClassifiedVertex> = kn_candidates(rho0)?
            .into_iter()
            .map(|s| ClassifiedVertex {
                point: s.point,
                sequence: s.sequence,
                kind: Some(VertexKind::Nonlocal),
            })
            .collect();
        vertices.sort_by(|a, b| a.point.cmp(&b.point));
        vertices.dedup_by(|a, b| a.point == b.point);
        let candidates = PolytopeResult {
            graph: graph.clone(),
            rho0: rho0.clone(),
            vertices,
            completeness: Completeness::Proven,
            depth_reached: graph.n() * (graph.n() - 1) / 2,
            notes: Vec::new(),
        };
        return report_for(&candidates, w, method);
    }
    report_for(&vertex_set(graph, rho0, method)?, w, method)
}

/// `true` iff the energy never increases along the prefixes of `sequence`.
pub fn monotone_extremal_check(
    graph: &DiffusionGraph,
    sequence: &OperationSequence,
    w: &Objective,
    rho0: &PopulationVector,
) -> Result<bool> {
    let mut state = rho0.clone();
    let mut current = energy(w, &state)?;
    for op in sequence.ops() {
        state = apply(graph, op, &state)?;
        let next = energy(w, &state)?;
        if next > current {
            return Ok(false);
        }
        current = next;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn w123() -> Objective {
        Objective::new(vec![int(1), int(2), int(3)]).unwrap()
    }

    #[test]
    fn energies() {
        assert_eq!(energy(&w123(), &PopulationVector::uniform(3)).unwrap(), int(2));
        assert_eq!(
            energy(&w123(), &PopulationVector::parse("0,2/7,5/7").unwrap()).unwrap(),
            rat(19, 7)
        );
    }

    #[test]
    fn gardner_reverses() {
        let rho = PopulationVector::parse("0,2/7,5/7").unwrap();
        let rev = PopulationVector::parse("5/7,2/7,0").unwrap();
        assert_eq!(gardner_limit(&w123(), &rho).unwrap(), energy(&w123(), &rev).unwrap());
        let u = PopulationVector::uniform(3);
        assert_eq!(gardner_limit(&w123(), &u).unwrap(), energy(&w123(), &u).unwrap());
    }

    #[test]
    fn objective_validation() {
        assert!(Objective::new(vec![int(1), int(1)]).is_err());
        assert!(Objective::new(vec![int(0), int(1)]).is_err());
        assert!(Objective::parse("1,2,3").is_ok());
    }

    #[test]
    fn k3_optimum_and_monotone_sequence() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let rho = PopulationVector::parse("0,2/7,5/7").unwrap();
        let r = optimize_over(&k3, &rho, &w123(), Method::Enumerate).unwrap();
        assert_eq!(r.optimal_energy, rat(13, 7));
        let best = r.optimal_vertex();
        assert!(monotone_extremal_check(&k3, &best.sequence, &w123(), &rho).unwrap());
        let s = structured_matches(&k3, &rho);
        assert_eq!(s.optimal_energy, r.optimal_energy);
    }

    fn structured_matches(g: &DiffusionGraph, rho: &PopulationVector) -> EnergyReport {
        optimize_over(g, rho, &w123(), Method::Structured).unwrap()
    }

    #[test]
    fn stopping_state_recovers_nothing() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let rho = PopulationVector::parse("1/2,1/3,1/6").unwrap();
        let r = optimize_over(&k3, &rho, &w123(), Method::Enumerate).unwrap();
        assert!(r.recovered_fraction.is_zero());
    }

    #[test]
    fn raising_op_fails_monotone_check() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let rho = PopulationVector::parse("1/2,1/3,1/6").unwrap();
        let seq = OperationSequence(vec![crate::ops::AveragingOp::pair(1, 3)]);
        assert!(!monotone_extremal_check(&k3, &seq, &w123(), &rho).unwrap());
    }
}
