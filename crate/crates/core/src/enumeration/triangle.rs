use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DiffusionGraph;
use crate::ops::{AveragingOp, OperationSequence};
use crate::population::PopulationVector;
use crate::rational::{int, serde_rational, Rational};

/// True when `op = B_ik` sits in a triangle `{i, j, k}` whose third vertex
/// holds a population strictly between those at `i` and `k`. Such a branch
/// never produces a vertex of the diffusion polytope. Block operators are
/// never pruned.
pub fn triangle_prune(graph: &DiffusionGraph, rho: &PopulationVector, op: &AveragingOp) -> bool {
    let AveragingOp::Pair(i, k) = *op else {
        return false;
    };
    let (lo, hi) = {
        let (a, b) = (rho.get(i), rho.get(k));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    (1..=graph.n()).any(|j| {
        j != i
            && j != k
            && graph.has_edge(i, j)
            && graph.has_edge(j, k)
            && graph.has_edge(i, k)
            && lo < rho.get(j)
            && rho.get(j) < hi
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleBranch {
    /// `a + c ≤ 2b`: combine with the image of B23 followed by B13.
    ViaB23,
    /// `a + c > 2b`: combine with the image of B12 followed by B13.
    ViaB12,
}

/// `B13·(a, b, c) = λ·ρ̄ + (1 − λ)·via`, verified exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleDecomposition {
    pub branch: TriangleBranch,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    pub start: PopulationVector,
    pub target: PopulationVector,
    pub uniform: PopulationVector,
    pub via: PopulationVector,
    pub via_sequence: OperationSequence,
}

/// The two closed-form weights `(λ₁, λ₂)`:
/// `λ₁ = 3(c − b)/(b + c − 2a)` and `λ₂ = 3(b − a)/(2c − a − b)`.
pub fn triangle_lambdas(a: &Rational, b: &Rational, c: &Rational) -> (Rational, Rational) {
    let three = int(3);
    let two = int(2);
    let l1 = &three * (c - b) / (b + c - &two * a);
    let l2 = &three * (b - a) / (&two * c - a - b);
    (l1, l2)
}

/// Writes the image of averaging the lowest and highest of three populations
/// as a convex combination of full averaging and a two-step averaging path.
pub fn triangle_decomposition(a: &Rational, b: &Rational, c: &Rational) -> Result<TriangleDecomposition> {
    if !(a < b && b < c) {
        return Err(Error::Precondition("triangle decomposition needs a < b < c".into()));
    }
    if a.is_negative() || !(a + b + c).is_one() {
        return Err(Error::Precondition(
            "triangle decomposition needs a + b + c = 1, a ≥ 0".into(),
        ));
    }
    let start = PopulationVector::new(vec![a.clone(), b.clone(), c.clone()])?;
    let (l1, l2) = triangle_lambdas(a, b, c);
    let (branch, lambda, first) = if a + c <= int(2) * b {
        (TriangleBranch::ViaB23, l1, AveragingOp::pair(2, 3))
    } else {
        (TriangleBranch::ViaB12, l2, AveragingOp::pair(1, 2))
    };
    let b13 = AveragingOp::pair(1, 3);
    let via_sequence = OperationSequence(vec![first.clone(), b13.clone()]);
    let via = b13.act(&first.act(&start)?)?;
    let target = b13.act(&start)?;
    let uniform = PopulationVector::uniform(3);
    let rebuilt =
        PopulationVector::convex_combination(&[(&uniform, lambda.clone()), (&via, Rational::one() - &lambda)])?;
    if rebuilt != target || lambda.is_negative() || lambda > Rational::one() {
        return Err(Error::Internal(format!("triangle identity failed for ({a}, {b}, {c})")));
    }
    Ok(TriangleDecomposition {
        branch,
        lambda,
        start,
        target,
        uniform,
        via,
        via_sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn prunes_b13_in_k3() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let rho = PopulationVector::parse("0,2/7,5/7").unwrap();
        assert!(triangle_prune(&k3, &rho, &AveragingOp::pair(1, 3)));
        assert!(!triangle_prune(&k3, &rho, &AveragingOp::pair(1, 2)));
        assert!(!triangle_prune(&k3, &rho, &AveragingOp::block([1, 2, 3])));
    }

    #[test]
    fn never_prunes_without_triangle() {
        let p3 = DiffusionGraph::new(3, [(1, 3), (2, 3)]).unwrap();
        let rho = PopulationVector::parse("0,2/7,5/7").unwrap();
        for (i, j) in p3.edges() {
            assert!(!triangle_prune(&p3, &rho, &AveragingOp::pair(i, j)));
        }
    }

    #[test]
    fn ties_are_not_pruned() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let rho = PopulationVector::parse("1/4,1/4,1/2").unwrap();
        assert!(!triangle_prune(&k3, &rho, &AveragingOp::pair(1, 3)));
    }

    #[test]
    fn lambda_two_example() {
        let d = triangle_decomposition(&rat(0, 1), &rat(2, 7), &rat(5, 7)).unwrap();
        assert_eq!(d.branch, TriangleBranch::ViaB12);
        assert_eq!(d.lambda, rat(3, 4));
        assert_eq!(d.via, PopulationVector::parse("3/7,1/7,3/7").unwrap());
    }

    #[test]
    fn midway_boundary_has_both_weights_one() {
        let (a, b, c) = (rat(1, 6), rat(1, 3), rat(1, 2));
        let (l1, l2) = triangle_lambdas(&a, &b, &c);
        assert_eq!(l1, rat(1, 1));
        assert_eq!(l2, rat(1, 1));
        let d = triangle_decomposition(&a, &b, &c).unwrap();
        assert_eq!(d.branch, TriangleBranch::ViaB23);
        assert_eq!(d.target, PopulationVector::uniform(3));
    }

    #[test]
    fn rejects_bad_triples() {
        assert!(triangle_decomposition(&rat(1, 3), &rat(1, 3), &rat(1, 3)).is_err());
        assert!(triangle_decomposition(&rat(0, 1), &rat(1, 4), &rat(1, 2)).is_err());
    }
}
