use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::explore::{candidate_ops, explore, ExploreConfig};
use super::triangle::triangle_prune;
use crate::error::{Error, Result};
use crate::geometry::{is_in_hull, Witness};
use crate::graph::DiffusionGraph;
use crate::ops::{AveragingOp, OperationSequence};
use crate::population::PopulationVector;
use crate::rational::Rational;
use crate::structured::KnReference;

/// `C(n, 2) + n`.
pub fn default_depth(n: usize) -> usize {
    n * (n - 1) / 2 + n
}

#[derive(Clone, Debug)]
pub struct PolytopeConfig {
    /// Longest generating sequence that is expanded further.
    pub max_depth: usize,
    pub use_blocks: bool,
    pub triangle_prune: bool,
    /// Label vertices as nonlocal / local-finite / asymptotic.
    pub classify: bool,
    /// Depth of the pair-only search deciding whether a block-generated
    /// vertex is attainable in finitely many steps. `None` means `C(n, 2)`.
    pub local_depth: Option<usize>,
    /// State cap for that pair-only search.
    pub local_states: usize,
}

impl PolytopeConfig {
    pub fn for_graph(graph: &DiffusionGraph) -> Self {
        Self {
            max_depth: default_depth(graph.n()),
            use_blocks: !graph.is_complete(),
            triangle_prune: true,
            classify: true,
            local_depth: None,
            local_states: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// Also a vertex of the complete-graph polytope for the same start.
    Nonlocal,
    /// Reached by a finite pair sequence, not a complete-graph vertex.
    LocalFinite,
    /// Only expressible with a block operator.
    Asymptotic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedVertex {
    pub point: PopulationVector,
    pub sequence: OperationSequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<VertexKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// The hull of the vertices is closed under every operator and
    /// contains the start, so it is the whole polytope.
    Proven,
    /// Some operator image escaped the hull beyond `max_depth`.
    DepthBounded,
}

impl std::fmt::Display for Completeness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Completeness::Proven => "proven",
            Completeness::DepthBounded => "depth-bounded",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeResult {
    pub graph: DiffusionGraph,
    pub rho0: PopulationVector,
    /// Sorted by point.
    pub vertices: Vec<ClassifiedVertex>,
    pub completeness: Completeness,
    pub depth_reached: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl PolytopeResult {
    pub fn points(&self) -> Vec<PopulationVector> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    pub fn count(&self, kind: VertexKind) -> usize {
        self.vertices.iter().filter(|v| v.kind == Some(kind)).count()
    }

    pub fn find(&self, point: &PopulationVector) -> Option<&ClassifiedVertex> {
        self.vertices
            .binary_search_by(|v| v.point.cmp(point))
            .ok()
            .map(|i| &self.vertices[i])
    }
}

/// Outcome of checking that `conv(points)` is mapped into itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullClosure {
    /// `(index into points, operator, image)` for every image outside the hull.
    pub escapes: Vec<(usize, AveragingOp, PopulationVector)>,
}

impl HullClosure {
    pub fn is_closed(&self) -> bool {
        self.escapes.is_empty()
    }
}

/// Applies every operator to every point and reports the images that leave
/// `conv(points)`. Each operator is linear, so an empty report means the hull
/// is invariant.
pub fn hull_closure(graph: &DiffusionGraph, points: &[PopulationVector], use_blocks: bool) -> Result<HullClosure> {
    let ops = candidate_ops(graph, use_blocks);
    let jobs: Vec<(usize, &AveragingOp)> = (0..points.len())
        .flat_map(|i| ops.iter().map(move |op| (i, op)))
        .collect();
    let results = crate::par::map(
        &jobs,
        |&(i, op)| -> Result<Option<(usize, AveragingOp, PopulationVector)>> {
            let image = op.act(&points[i])?;
            if image == points[i] || points.contains(&image) {
                return Ok(None);
            }
            let inside = is_in_hull(&image, points)?.inside;
            Ok((!inside).then(|| (i, op.clone(), image)))
        },
    );
    let mut escapes = Vec::new();
    for r in results {
        if let Some(e) = r? {
            escapes.push(e);
        }
    }
    Ok(HullClosure { escapes })
}

type Separator = (Vec<Rational>, Rational);

struct Search<'a> {
    graph: &'a DiffusionGraph,
    config: &'a PolytopeConfig,
    ops: Vec<AveragingOp>,
    /// Current vertices with their sequences.
    vertices: Vec<(PopulationVector, OperationSequence)>,
    /// Functional separating each vertex from the others, when known.
    separators: HashMap<PopulationVector, Separator>,
    /// Every point ever generated; each lies in the current hull or is a vertex.
    seen: HashSet<PopulationVector>,
    depth_reached: usize,
}

fn dot(u: &[Rational], p: &PopulationVector) -> Rational {
    u.iter().zip(p.components()).map(|(a, b)| a * b).sum()
}

fn separator_of(w: Option<Witness>) -> Option<Separator> {
    match w {
        Some(Witness::Separating { functional, threshold }) => Some((functional, threshold)),
        _ => None,
    }
}

impl Search<'_> {
    fn points(&self) -> Vec<PopulationVector> {
        self.vertices.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Adds candidate points outside the current hull, then drops anything
    /// that stopped being a vertex. Returns the candidates that survived.
    fn absorb(&mut self, candidates: Vec<(PopulationVector, OperationSequence)>) -> Result<Vec<usize>> {
        let current = self.points();
        let tests = crate::par::map(&candidates, |(p, _)| is_in_hull(p, &current));
        let mut fresh = Vec::new();
        for (c, t) in candidates.into_iter().zip(tests) {
            let t = t?;
            if !t.inside {
                if let Some(sep) = separator_of(t.witness) {
                    self.separators.insert(c.0.clone(), sep);
                }
                fresh.push(c);
            }
        }
        if fresh.is_empty() {
            return Ok(Vec::new());
        }
        let fresh_points: HashSet<PopulationVector> = fresh.iter().map(|(p, _)| p.clone()).collect();
        let mut all = std::mem::take(&mut self.vertices);
        all.extend(fresh);
        let pts: Vec<PopulationVector> = all.iter().map(|(p, _)| p.clone()).collect();
        // A cached functional still certifies a vertex if no new point beats it.
        let stale: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                let Some((u, t)) = self.separators.get(&pts[i]) else {
                    return true;
                };
                fresh_points.iter().any(|q| *q != pts[i] && dot(u, q) > *t)
            })
            .collect();
        let rechecked = crate::par::map(&stale, |&i| {
            let others: Vec<PopulationVector> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            is_in_hull(&pts[i], &others)
        });
        let mut dropped = HashSet::new();
        for (&i, r) in stale.iter().zip(rechecked) {
            let r = r?;
            if r.inside {
                dropped.insert(i);
                self.separators.remove(&pts[i]);
            } else if let Some(sep) = separator_of(r.witness) {
                self.separators.insert(pts[i].clone(), sep);
            }
        }
        let mut survivors = Vec::new();
        for (i, (p, s)) in all.into_iter().enumerate() {
            if !dropped.contains(&i) {
                if fresh_points.contains(&p) {
                    survivors.push(self.vertices.len());
                }
                self.vertices.push((p, s));
            }
        }
        Ok(survivors)
    }

    /// Operator images of current vertices that leave the hull. Images seen
    /// before are skipped: the hull only grows.
    fn escapes(&self) -> Result<Vec<(usize, AveragingOp, PopulationVector)>> {
        let mut jobs = Vec::new();
        let mut queued = HashSet::new();
        for (i, (p, _)) in self.vertices.iter().enumerate() {
            for op in &self.ops {
                let image = op.act(p)?;
                if image != *p && !self.seen.contains(&image) && queued.insert((i, image.clone())) {
                    jobs.push((i, op.clone(), image));
                }
            }
        }
        let points = self.points();
        let outside = crate::par::map(&jobs, |(_, _, image)| is_in_hull(image, &points).map(|m| !m.inside));
        let mut out = Vec::new();
        for (job, o) in jobs.into_iter().zip(outside) {
            if o? {
                out.push(job);
            }
        }
        Ok(out)
    }

    fn expand(&mut self, frontier: &[usize], prune: bool) -> Vec<(PopulationVector, OperationSequence)> {
        let mut best: HashMap<PopulationVector, OperationSequence> = HashMap::new();
        let mut order = Vec::new();
        for &idx in frontier {
            let (point, seq) = &self.vertices[idx];
            if seq.len() >= self.config.max_depth {
                continue;
            }
            for op in &self.ops {
                if prune && triangle_prune(self.graph, point, op) {
                    continue;
                }
                let Ok(child) = op.act(point) else { continue };
                if child == *point || self.seen.contains(&child) {
                    continue;
                }
                let candidate = seq.then(op.clone());
                match best.get_mut(&child) {
                    Some(existing) => {
                        if candidate.preference_key() < existing.preference_key() {
                            *existing = candidate;
                        }
                    }
                    None => {
                        order.push(child.clone());
                        best.insert(child, candidate);
                    }
                }
            }
        }
        order
            .into_iter()
            .map(|p| {
                let s = best.remove(&p).expect("recorded");
                self.depth_reached = self.depth_reached.max(s.len());
                self.seen.insert(p.clone());
                (p, s)
            })
            .collect()
    }
}

/// Vertices of the diffusion polytope of `rho0` on `graph`.
///
/// The search keeps only current hull vertices and expands newly found ones
/// level by level. When nothing new appears, every vertex is pushed through
/// every operator; images outside the hull are fed back in. The result is
/// proven complete once the hull is invariant.
pub fn polytope(graph: &DiffusionGraph, rho0: &PopulationVector, config: &PolytopeConfig) -> Result<PolytopeResult> {
    if rho0.dim() != graph.n() {
        return Err(Error::Dimension {
            expected: graph.n(),
            got: rho0.dim(),
        });
    }
    let mut search = Search {
        graph,
        config,
        ops: candidate_ops(graph, config.use_blocks),
        vertices: vec![(rho0.clone(), OperationSequence::empty())],
        separators: HashMap::new(),
        seen: HashSet::from([rho0.clone()]),
        depth_reached: 0,
    };
    let mut frontier = vec![0usize];
    let completeness = loop {
        while !frontier.is_empty() {
            let candidates = search.expand(&frontier, config.triangle_prune);
            frontier = search.absorb(candidates)?;
        }
        let escapes = search.escapes()?;
        if escapes.is_empty() {
            break Completeness::Proven;
        }
        let mut escaped = Vec::new();
        let mut stuck = false;
        for (i, op, image) in escapes {
            let seq = &search.vertices[i].1;
            if seq.len() >= config.max_depth {
                stuck = true;
                continue;
            }
            search.seen.insert(image.clone());
            escaped.push((image, seq.then(op)));
        }
        escaped.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.preference_key().cmp(&b.1.preference_key())));
        escaped.dedup_by(|a, b| a.0 == b.0);
        escaped.sort_by(|a, b| a.1.preference_key().cmp(&b.1.preference_key()).then(a.0.cmp(&b.0)));
        for (_, s) in &escaped {
            search.depth_reached = search.depth_reached.max(s.len());
        }
        frontier = search.absorb(escaped)?;
        if frontier.is_empty() {
            if stuck {
                break Completeness::DepthBounded;
            }
            return Err(Error::Internal("hull closure made no progress".into()));
        }
    };

    let mut notes = Vec::new();
    let mut vertices: Vec<ClassifiedVertex> = search
        .vertices
        .into_iter()
        .map(|(point, sequence)| ClassifiedVertex {
            point,
            sequence,
            kind: None,
        })
        .collect();
    if config.classify {
        classify(graph, rho0, config, &mut vertices, &mut notes)?;
    }
    vertices.sort_by(|a, b| a.point.cmp(&b.point));
    if completeness == Completeness::DepthBounded {
        notes.push(format!(
            "operator images still leave the hull at depth {}; vertex list may be incomplete",
            config.max_depth
        ));
    }
    Ok(PolytopeResult {
        graph: graph.clone(),
        rho0: rho0.clone(),
        vertices,
        completeness,
        depth_reached: search.depth_reached,
        notes,
    })
}

fn classify(
    graph: &DiffusionGraph,
    rho0: &PopulationVector,
    config: &PolytopeConfig,
    vertices: &mut [ClassifiedVertex],
    notes: &mut Vec<String>,
) -> Result<()> {
    let reference = KnReference::new(rho0)?;
    if let Some(note) = reference.note() {
        notes.push(note.to_string());
    }
    let nonlocal = crate::par::map(vertices, |v| reference.is_vertex(&v.point));
    let needs_search = vertices.iter().any(|v| v.sequence.contains_block());
    let reachable = if needs_search {
        let n = graph.n();
        let cfg = ExploreConfig {
            max_states: Some(config.local_states),
            ..ExploreConfig::pairs_only(config.local_depth.unwrap_or(n * (n - 1) / 2))
        };
        Some(explore(graph, rho0, &cfg)?)
    } else {
        None
    };
    for (v, nl) in vertices.iter_mut().zip(nonlocal) {
        if v.sequence.contains_block() {
            if let Some(state) = reachable.as_ref().and_then(|r| r.get(&v.point)) {
                v.sequence = state.sequence.clone();
            }
        }
        v.kind = Some(if nl? {
            VertexKind::Nonlocal
        } else if v.sequence.contains_block() {
            VertexKind::Asymptotic
        } else {
            VertexKind::LocalFinite
        });
    }
    if reachable.as_ref().is_some_and(|r| r.truncated) {
        notes.push("pair-only attainability search was truncated; asymptotic labels are bounded".into());
    }
    Ok(())
}
