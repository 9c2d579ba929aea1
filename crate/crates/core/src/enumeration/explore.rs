use std::collections::HashMap;

use serde::Serialize;

use super::triangle::triangle_prune;
use crate::error::{Error, Result};
use crate::graph::DiffusionGraph;
use crate::ops::{AveragingOp, OperationSequence};
use crate::population::PopulationVector;

#[derive(Clone, Debug)]
pub struct ExploreConfig {
    pub max_depth: usize,
    /// Also apply block operators over connected subsets of three or more vertices.
    pub use_blocks: bool,
    pub triangle_prune: bool,
    /// Stop once this many states are stored (the result is then marked truncated).
    pub max_states: Option<usize>,
}

impl ExploreConfig {
    pub fn pairs_only(max_depth: usize) -> Self {
        Self {
            max_depth,
            use_blocks: false,
            triangle_prune: false,
            max_states: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachedState {
    pub point: PopulationVector,
    pub sequence: OperationSequence,
}

/// Deduplicated attainable states, each with the first (shortest, then
/// lexicographically least) sequence found.
#[derive(Clone, Debug)]
pub struct ReachableSet {
    pub rho0: PopulationVector,
    states: Vec<ReachedState>,
    index: HashMap<PopulationVector, usize>,
    pub depth_reached: usize,
    /// Set when the last explored level still produced new states, or the
    /// state cap was hit.
    pub truncated: bool,
}

impl ReachableSet {
    pub fn states(&self) -> &[ReachedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, point: &PopulationVector) -> Option<&ReachedState> {
        self.index.get(point).map(|&i| &self.states[i])
    }

    pub fn contains(&self, point: &PopulationVector) -> bool {
        self.index.contains_key(point)
    }

    pub fn points(&self) -> Vec<PopulationVector> {
        self.states.iter().map(|s| s.point.clone()).collect()
    }
}

/// Pair operators in edge order, then (optionally) blocks over connected
/// subsets of size ≥ 3 ordered by size and lexicographically.
pub fn candidate_ops(graph: &DiffusionGraph, use_blocks: bool) -> Vec<AveragingOp> {
    let mut ops: Vec<AveragingOp> = graph.edges().map(|(i, j)| AveragingOp::pair(i, j)).collect();
    if use_blocks {
        ops.extend(graph.connected_subsets(3).into_iter().map(AveragingOp::Block));
    }
    ops
}

/// Breadth-first search over operator sequences from `rho0`, deduplicating
/// exact states. Operators that leave a state unchanged are skipped.
pub fn explore(graph: &DiffusionGraph, rho0: &PopulationVector, config: &ExploreConfig) -> Result<ReachableSet> {
    if rho0.dim() != graph.n() {
        return Err(Error::Dimension {
            expected: graph.n(),
            got: rho0.dim(),
        });
    }
    let ops = candidate_ops(graph, config.use_blocks);
    let mut set = ReachableSet {
        rho0: rho0.clone(),
        states: vec![ReachedState {
            point: rho0.clone(),
            sequence: OperationSequence::empty(),
        }],
        index: HashMap::from([(rho0.clone(), 0)]),
        depth_reached: 0,
        truncated: false,
    };
    let mut frontier = vec![0usize];
    'levels: for depth in 1..=config.max_depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (point, sequence) = {
                let s = &set.states[idx];
                (s.point.clone(), s.sequence.clone())
            };
            for op in &ops {
                if config.triangle_prune && triangle_prune(graph, &point, op) {
                    continue;
                }
                let child = op.act(&point)?;
                if child == point || set.index.contains_key(&child) {
                    continue;
                }
                if config.max_states.is_some_and(|cap| set.states.len() >= cap) {
                    set.truncated = true;
                    set.depth_reached = depth;
                    break 'levels;
                }
                set.index.insert(child.clone(), set.states.len());
                set.states.push(ReachedState {
                    point: child,
                    sequence: sequence.then(op.clone()),
                });
                next.push(set.states.len() - 1);
            }
        }
        if next.is_empty() {
            break;
        }
        set.depth_reached = depth;
        frontier = next;
        if depth == config.max_depth {
            set.truncated = true;
        }
    }
    Ok(set)
}
