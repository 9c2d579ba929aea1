//! Averaging operators and their action on population vectors.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::DiffusionGraph;
use crate::population::PopulationVector;
use crate::rational::Rational;

/// `Pair(i, j)` replaces ρᵢ and ρⱼ by their mean. `Block(S)` replaces every
/// component in `S` by the mean over `S`; on a connected `S` it is the limit of
/// repeated pair averaging inside `S`.
///
/// Vertices are 1-based; `Pair` is stored with `i < j` and `Block` sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AveragingOp {
    Pair(usize, usize),
    Block(Vec<usize>),
}

impl AveragingOp {
    pub fn pair(i: usize, j: usize) -> Self {
        AveragingOp::Pair(i.min(j), i.max(j))
    }

    pub fn block(vertices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = vertices.into_iter().collect();
        AveragingOp::Block(set.into_iter().collect())
    }

    /// Vertices touched by the operator, sorted.
    pub fn support(&self) -> Vec<usize> {
        match self {
            AveragingOp::Pair(i, j) => vec![*i, *j],
            AveragingOp::Block(s) => s.clone(),
        }
    }

    pub fn is_block(&self) -> bool {
        matches!(self, AveragingOp::Block(_))
    }

    pub fn validate(&self, graph: &DiffusionGraph) -> Result<()> {
        match self {
            AveragingOp::Pair(i, j) => {
                if i == j || !graph.has_edge(*i, *j) {
                    return Err(Error::InvalidOperation(format!("{self}: ({i}, {j}) is not an edge")));
                }
            }
            AveragingOp::Block(s) => {
                if s.len() < 2 {
                    return Err(Error::InvalidOperation(format!(
                        "{self}: block needs two or more vertices"
                    )));
                }
                if s.iter().any(|&v| v == 0 || v > graph.n()) {
                    return Err(Error::InvalidOperation(format!("{self}: vertex out of range")));
                }
                if !graph.is_connected_subset(s) {
                    return Err(Error::InvalidOperation(format!(
                        "{self}: induced subgraph is disconnected"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies the operator without consulting a graph. Only the vertex range is checked.
    pub fn act(&self, rho: &PopulationVector) -> Result<PopulationVector> {
        let support = self.support();
        if let Some(&bad) = support.iter().find(|&&v| v == 0 || v > rho.dim()) {
            return Err(Error::InvalidOperation(format!(
                "{self}: vertex {bad} outside 1..={}",
                rho.dim()
            )));
        }
        let mut components = rho.components().to_vec();
        let mut total = Rational::zero();
        for &v in &support {
            total += &components[v - 1];
        }
        let mean = total / Rational::from_integer((support.len() as i64).into());
        for &v in &support {
            components[v - 1] = mean.clone();
        }
        Ok(PopulationVector::from_unchecked(components))
    }
}

impl fmt::Display for AveragingOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support = self.support();
        f.write_str("B")?;
        if support.iter().all(|&v| v < 10) {
            for v in support {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let labels: Vec<String> = support.iter().map(|v| v.to_string()).collect();
            write!(f, "{{{}}}", labels.join(","))
        }
    }
}

impl Serialize for AveragingOp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AveragingOp::Pair(i, j) => {
                let mut seq = serializer.serialize_seq(Some(3))?;
                seq.serialize_element("pair")?;
                seq.serialize_element(i)?;
                seq.serialize_element(j)?;
                seq.end()
            }
            AveragingOp::Block(s) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element("block")?;
                seq.serialize_element(s)?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for AveragingOp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct OpVisitor;

        impl<'de> Visitor<'de> for OpVisitor {
            type Value = AveragingOp;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"["pair", i, j] or ["block", [..]]"#)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<AveragingOp, A::Error> {
                let tag: String = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                match tag.as_str() {
                    "pair" => {
                        let i: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                        let j: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                        Ok(AveragingOp::pair(i, j))
                    }
                    "block" => {
                        let s: Vec<usize> = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                        Ok(AveragingOp::block(s))
                    }
                    other => Err(de::Error::unknown_variant(other, &["pair", "block"])),
                }
            }
        }

        deserializer.deserialize_seq(OpVisitor)
    }
}

/// Operators applied left to right: `[B12, B13]` means B12 first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OperationSequence(pub Vec<AveragingOp>);

impl OperationSequence {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[AveragingOp] {
        &self.0
    }

    pub fn block_count(&self) -> usize {
        self.0.iter().filter(|op| op.is_block()).count()
    }

    pub fn contains_block(&self) -> bool {
        self.0.iter().any(AveragingOp::is_block)
    }

    pub fn then(&self, op: AveragingOp) -> Self {
        let mut ops = self.0.clone();
        ops.push(op);
        Self(ops)
    }

    /// Deterministic preference order for provenance: fewer block operators,
    /// then shorter, then lexicographically smaller.
    pub fn preference_key(&self) -> (usize, usize, &[AveragingOp]) {
        (self.block_count(), self.len(), &self.0)
    }

    pub fn validate(&self, graph: &DiffusionGraph) -> Result<()> {
        self.0.iter().try_for_each(|op| op.validate(graph))
    }
}

impl fmt::Display for OperationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (idx, op) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Applies `op` to `rho` after checking it is permitted on `graph`.
pub fn apply(graph: &DiffusionGraph, op: &AveragingOp, rho: &PopulationVector) -> Result<PopulationVector> {
    if rho.dim() != graph.n() {
        return Err(Error::Dimension {
            expected: graph.n(),
            got: rho.dim(),
        });
    }
    op.validate(graph)?;
    op.act(rho)
}

pub fn apply_sequence(
    graph: &DiffusionGraph,
    seq: &OperationSequence,
    rho: &PopulationVector,
) -> Result<PopulationVector> {
    seq.ops()
        .iter()
        .try_fold(rho.clone(), |state, op| apply(graph, op, &state))
}

/// `max ρ − min ρ`.
pub fn spread(rho: &PopulationVector) -> Rational {
    spread_over(rho, &(1..=rho.dim()).collect::<Vec<_>>())
}

/// Spread restricted to the 1-based `vertices`.
pub fn spread_over(rho: &PopulationVector, vertices: &[usize]) -> Rational {
    let values = vertices.iter().map(|&v| rho.get(v));
    let max = values.clone().max().cloned().unwrap_or_default();
    let min = values.min().cloned().unwrap_or_default();
    max - min
}

/// One pass of pair averages along a spanning tree of the induced subgraph on
/// `block`, in breadth-first order from its smallest vertex. Repeating the pass
/// drives every component in `block` to the block mean.
pub fn block_sweep(graph: &DiffusionGraph, block: &[usize]) -> Result<OperationSequence> {
    let op = AveragingOp::block(block.iter().copied());
    op.validate(graph)?;
    let members = op.support();
    let mut seen = BTreeSet::from([members[0]]);
    let mut queue = std::collections::VecDeque::from([members[0]]);
    let mut ops = Vec::new();
    while let Some(v) = queue.pop_front() {
        let mut next: Vec<usize> = graph
            .neighbors(v)
            .filter(|w| members.binary_search(w).is_ok() && !seen.contains(w))
            .collect();
        next.sort_unstable();
        for w in next {
            seen.insert(w);
            ops.push(AveragingOp::pair(v, w));
            queue.push_back(w);
        }
    }
    Ok(OperationSequence(ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn rho0() -> PopulationVector {
        PopulationVector::parse("0,2/7,5/7").unwrap()
    }

    #[test]
    fn pair_and_block_examples() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let b12 = AveragingOp::pair(1, 2);
        assert_eq!(
            apply(&k3, &b12, &rho0()).unwrap(),
            PopulationVector::parse("1/7,1/7,5/7").unwrap()
        );
        let uniform = PopulationVector::uniform(3);
        assert_eq!(apply(&k3, &b12, &uniform).unwrap(), uniform);
        let block = AveragingOp::block([1, 2, 3]);
        assert_eq!(apply(&k3, &block, &rho0()).unwrap(), uniform);
    }

    #[test]
    fn sequence_examples() {
        let k3 = DiffusionGraph::complete(3).unwrap();
        let seq = OperationSequence(vec![AveragingOp::pair(1, 2), AveragingOp::pair(1, 3)]);
        assert_eq!(
            apply_sequence(&k3, &seq, &rho0()).unwrap(),
            PopulationVector::parse("3/7,1/7,3/7").unwrap()
        );
        assert_eq!(
            apply_sequence(&k3, &OperationSequence::empty(), &rho0()).unwrap(),
            rho0()
        );
        let reverse = OperationSequence(vec![
            AveragingOp::pair(2, 3),
            AveragingOp::pair(1, 3),
            AveragingOp::pair(1, 2),
        ]);
        // (0, 1/2, 1/2) -> (1/4, 1/2, 1/4) -> (3/8, 3/8, 1/4)
        assert_eq!(
            apply_sequence(&k3, &reverse, &rho0()).unwrap(),
            PopulationVector::parse("3/8,3/8,1/4").unwrap()
        );
    }

    #[test]
    fn rejects_invalid_ops() {
        let p3 = DiffusionGraph::path(3).unwrap();
        assert!(apply(&p3, &AveragingOp::pair(1, 3), &rho0()).is_err());
        let p4 = DiffusionGraph::path(4).unwrap();
        let rho = PopulationVector::uniform(4);
        assert!(apply(&p4, &AveragingOp::block([1, 2, 4]), &rho).is_err());
        assert!(apply(&p4, &AveragingOp::block([2]), &rho).is_err());
        assert!(apply(&p4, &AveragingOp::pair(1, 2), &rho0()).is_err());
    }

    #[test]
    fn spread_examples() {
        assert_eq!(spread(&rho0()), rat(5, 7));
        assert_eq!(spread(&PopulationVector::uniform(5)), rat(0, 1));
    }

    #[test]
    fn op_json_and_display() {
        let seq = OperationSequence(vec![AveragingOp::pair(2, 1), AveragingOp::block([3, 1, 2])]);
        let json = serde_json::to_string(&seq).unwrap();
        assert_eq!(json, r#"[["pair",1,2],["block",[1,2,3]]]"#);
        let back: OperationSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, seq);
        assert_eq!(seq.to_string(), "B12 B123");
        assert_eq!(AveragingOp::pair(3, 12).to_string(), "B{3,12}");
        assert_eq!(OperationSequence::empty().to_string(), "I");
    }

    #[test]
    fn sweep_is_spanning_tree() {
        let c4 = DiffusionGraph::cycle(4).unwrap();
        let sweep = block_sweep(&c4, &[1, 2, 4]).unwrap();
        assert_eq!(sweep.ops(), &[AveragingOp::pair(1, 2), AveragingOp::pair(1, 4)]);
        let p5 = DiffusionGraph::path(5).unwrap();
        assert_eq!(block_sweep(&p5, &[2, 3, 4]).unwrap().len(), 2);
        assert!(block_sweep(&p5, &[1, 3]).is_err());
    }
}
