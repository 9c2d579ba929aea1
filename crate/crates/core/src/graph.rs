//! Simple connected graphs with 1-indexed vertices.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple connected graph on vertices `1..=n`. Edges are stored as `(i, j)`
/// with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct DiffusionGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for DiffusionGraph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        DiffusionGraph::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<DiffusionGraph> for GraphJson {
    fn from(graph: DiffusionGraph) -> Self {
        GraphJson {
            n: graph.n,
            edges: graph.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl DiffusionGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) outside vertex range 1..={n}"
                )));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        let graph = Self { n, edges: set };
        if !graph.is_connected_subset(&(1..=n).collect::<Vec<_>>()) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(graph)
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph("complete graph needs n >= 2".into()));
        }
        Self::new(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
    }

    /// Path `1 - 2 - … - n`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph("path graph needs n >= 2".into()));
        }
        Self::new(n, (1..n).map(|i| (i, i + 1)))
    }

    /// Cycle `1 - 2 - … - n - 1`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph("cycle graph needs n >= 3".into()));
        }
        Self::new(n, (1..n).map(|i| (i, i + 1)).chain([(1, n)]))
    }

    /// Five-level parahelium graph: vertices ranked by energy, edges are the
    /// dipole-allowed transitions 1s-2p, 1s-3p, 2s-3p and 3s-2p.
    pub fn helium_p5() -> Self {
        Self::new(5, [(1, 3), (1, 5), (3, 4), (2, 5)]).expect("helium graph is a path")
    }

    /// Lexicographic product `P_m[P_n]`: vertex `(a, b)` is labelled
    /// `(a - 1) * n + b`, and `(a, b) ~ (a', b')` iff `a ~ a'` in `P_m`, or
    /// `a = a'` and `b ~ b'` in `P_n`.
    pub fn grid_composition(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 || m * n < 2 {
            return Err(Error::InvalidGraph(
                "grid composition needs at least two vertices".into(),
            ));
        }
        let label = |a: usize, b: usize| (a - 1) * n + b;
        let mut edges = Vec::new();
        for a in 1..=m {
            for b in 1..n {
                edges.push((label(a, b), label(a, b + 1)));
            }
        }
        for a in 1..m {
            for b in 1..=n {
                for b2 in 1..=n {
                    edges.push((label(a, b), label(a + 1, b2)));
                }
            }
        }
        Self::new(m * n, edges)
    }

    /// Parses `complete:N`, `path:N`, `cycle:N`, `helium`, `grid:MxN`
    /// (also `grid:M,N`), or `edges:N:1-2,2-3,…`.
    pub fn from_builder_spec(spec: &str) -> Result<Self> {
        let parse_err = || Error::Parse {
            what: "graph builder",
            input: spec.to_string(),
        };
        let (name, params) = spec.trim().split_once(':').unwrap_or((spec.trim(), ""));
        let number = |text: &str| text.trim().parse::<usize>().map_err(|_| parse_err());
        match name {
            "complete" | "K" => Self::complete(number(params)?),
            "path" | "P" => Self::path(number(params)?),
            "cycle" | "C" => Self::cycle(number(params)?),
            "helium" | "helium_p5" => Ok(Self::helium_p5()),
            "grid" => {
                let (m, n) = params.split_once(['x', ',']).ok_or_else(parse_err)?;
                Self::grid_composition(number(m)?, number(n)?)
            }
            "edges" => {
                let (n, list) = params.split_once(':').ok_or_else(parse_err)?;
                let edges = list
                    .split(',')
                    .filter(|e| !e.trim().is_empty())
                    .map(|e| {
                        let (a, b) = e.split_once('-').ok_or_else(parse_err)?;
                        Ok((number(a)?, number(b)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(number(n)?, edges)
            }
            _ => Err(parse_err()),
        }
    }

    /// Builder spec, or a path to a graph JSON file when the argument names
    /// an existing file.
    pub fn from_spec_or_file(spec: &str) -> Result<Self> {
        if Path::new(spec).is_file() {
            let text =
                std::fs::read_to_string(spec).map_err(|e| Error::InvalidGraph(format!("cannot read {spec}: {e}")))?;
            return serde_json::from_str(&text).map_err(|e| Error::InvalidGraph(format!("{spec}: {e}")));
        }
        Self::from_builder_spec(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    /// True for the path `1 - 2 - … - n` with exactly those edges.
    pub fn is_standard_path(&self) -> bool {
        self.edges.len() + 1 == self.n && (1..self.n).all(|i| self.has_edge(i, i + 1))
    }

    /// Whether the induced subgraph on `vertices` is connected.
    pub fn is_connected_subset(&self, vertices: &[usize]) -> bool {
        let Some(&start) = vertices.first() else {
            return false;
        };
        let members: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if members.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == members.len()
    }

    /// All connected vertex subsets with at least `min_size` members, sorted by
    /// size and then lexicographically.
    pub fn connected_subsets(&self, min_size: usize) -> Vec<Vec<usize>> {
        assert!(self.n < 26, "subset enumeration limited to small graphs");
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << self.n) {
            if (mask.count_ones() as usize) < min_size {
                continue;
            }
            let subset: Vec<usize> = (0..self.n)
                .filter(|bit| mask & (1 << bit) != 0)
                .map(|bit| bit + 1)
                .collect();
            if self.is_connected_subset(&subset) {
                out.push(subset);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Copy of the graph with edge `(a, b)` removed; fails if the result is
    /// disconnected or the edge is absent.
    pub fn without_edge(&self, a: usize, b: usize) -> Result<Self> {
        if !self.has_edge(a, b) {
            return Err(Error::InvalidGraph(format!("no edge ({a}, {b})")));
        }
        let key = (a.min(b), a.max(b));
        Self::new(self.n, self.edges.iter().copied().filter(|&e| e != key))
    }

    pub fn is_subgraph_of(&self, other: &DiffusionGraph) -> bool {
        self.n == other.n && self.edges.is_subset(&other.edges)
    }
}

impl fmt::Display for DiffusionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}; ", self.n)?;
        for (idx, (a, b)) in self.edges.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        f.write_str(")")
    }
}
