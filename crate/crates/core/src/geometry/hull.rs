use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::simplex::{LinearProgram, LpOutcome};
use crate::error::{Error, Result};
use crate::population::PopulationVector;
use crate::rational::{serde_rational, serde_rational_vec, Rational};

/// Exactly deduplicated finite point set of common dimension, kept in
/// insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<PopulationVector>,
}

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = PopulationVector>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out: Vec<PopulationVector> = Vec::new();
        for p in points {
            if let Some(first) = out.first() {
                if first.dim() != p.dim() {
                    return Err(Error::Dimension {
                        expected: first.dim(),
                        got: p.dim(),
                    });
                }
            }
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(Self { points: out })
    }

    pub fn points(&self) -> &[PopulationVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Either convex coefficients reconstructing the query point, or a linear
/// functional `u` with `u·s ≤ threshold < u·p` for every member `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Combination {
        terms: Vec<WeightedPoint>,
    },
    Separating {
        #[serde(with = "serde_rational_vec")]
        functional: Vec<Rational>,
        #[serde(with = "serde_rational")]
        threshold: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedPoint {
    pub point: PopulationVector,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullMembership {
    pub inside: bool,
    /// `None` only when the point set is empty.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalityCertificate {
    pub point: PopulationVector,
    pub is_extreme: bool,
    pub witness: Witness,
}

impl Witness {
    /// Checks the witness against `p` and `others` by direct substitution.
    pub fn verify(&self, p: &PopulationVector, others: &[PopulationVector]) -> bool {
        match self {
            Witness::Combination { terms } => {
                let weights_ok = terms.iter().all(|t| !t.weight.is_negative())
                    && terms.iter().map(|t| &t.weight).sum::<Rational>().is_one();
                let members_ok = terms.iter().all(|t| others.contains(&t.point));
                let pairs: Vec<_> = terms.iter().map(|t| (&t.point, t.weight.clone())).collect();
                weights_ok && members_ok && PopulationVector::convex_combination(&pairs).as_ref() == Ok(p)
            }
            Witness::Separating { functional, threshold } => {
                let value = |q: &PopulationVector| -> Rational {
                    functional.iter().zip(q.components()).map(|(a, b)| a * b).sum()
                };
                value(p) > *threshold && others.iter().all(|s| value(s) <= *threshold)
            }
        }
    }
}

impl ExtremalityCertificate {
    pub fn verify(&self, all_points: &[PopulationVector]) -> bool {
        let others: Vec<PopulationVector> = all_points.iter().filter(|q| **q != self.point).cloned().collect();
        let kind_ok = matches!(
            (&self.witness, self.is_extreme),
            (Witness::Separating { .. }, true) | (Witness::Combination { .. }, false)
        );
        kind_ok && self.witness.verify(&self.point, &others)
    }
}

/// Rows: every coordinate but the last (implied by normalization), then
/// `Σλ = 1`.
fn hull_program(p: &PopulationVector, members: &[PopulationVector], cost: Vec<Rational>) -> LinearProgram {
    let dim = p.dim();
    let mut rows: Vec<Vec<Rational>> = (0..dim.saturating_sub(1))
        .map(|i| members.iter().map(|s| s.components()[i].clone()).collect())
        .collect();
    rows.push(vec![Rational::one(); members.len()]);
    let mut rhs = p.components()[..dim.saturating_sub(1)].to_vec();
    rhs.push(Rational::one());
    LinearProgram { rows, rhs, cost }
}

/// Exact decision of `p ∈ conv(members)`.
pub fn is_in_hull(p: &PopulationVector, members: &[PopulationVector]) -> Result<HullMembership> {
    if let Some(bad) = members.iter().find(|s| s.dim() != p.dim()) {
        return Err(Error::Dimension {
            expected: p.dim(),
            got: bad.dim(),
        });
    }
    if members.is_empty() {
        return Ok(HullMembership {
            inside: false,
            witness: None,
        });
    }
    if members.contains(p) {
        return Ok(HullMembership {
            inside: true,
            witness: Some(Witness::Combination {
                terms: vec![WeightedPoint {
                    point: p.clone(),
                    weight: Rational::one(),
                }],
            }),
        });
    }
    if members.len() <= DIRECT_LIMIT {
        return solve_direct(p, members);
    }
    // Column generation: solve on a working subset, then either accept the
    // combination or check the separating functional against every member.
    let mut active: Vec<usize> = (0..DIRECT_LIMIT).collect();
    let mut in_active = vec![false; members.len()];
    for &i in &active {
        in_active[i] = true;
    }
    loop {
        let subset: Vec<PopulationVector> = active.iter().map(|&i| members[i].clone()).collect();
        let membership = solve_direct(p, &subset)?;
        let Some(Witness::Separating { functional, threshold }) = &membership.witness else {
            return Ok(membership);
        };
        let value =
            |q: &PopulationVector| -> Rational { functional.iter().zip(q.components()).map(|(a, b)| a * b).sum() };
        let mut violators: Vec<(Rational, usize)> = (0..members.len())
            .filter(|&i| !in_active[i])
            .filter_map(|i| {
                let v = value(&members[i]);
                (v > *threshold).then_some((v, i))
            })
            .collect();
        if violators.is_empty() {
            return Ok(membership);
        }
        violators.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, i) in violators.into_iter().take(COLUMN_BATCH) {
            in_active[i] = true;
            active.push(i);
        }
    }
}

const DIRECT_LIMIT: usize = 64;
const COLUMN_BATCH: usize = 16;

fn solve_direct(p: &PopulationVector, members: &[PopulationVector]) -> Result<HullMembership> {
    let program = hull_program(p, members, vec![Rational::zero(); members.len()]);
    match program.solve() {
        LpOutcome::Optimal { x, .. } => {
            let terms = x
                .into_iter()
                .zip(members)
                .filter(|(w, _)| !w.is_zero())
                .map(|(weight, point)| WeightedPoint {
                    point: point.clone(),
                    weight,
                })
                .collect();
            Ok(HullMembership {
                inside: true,
                witness: Some(Witness::Combination { terms }),
            })
        }
        LpOutcome::Infeasible { mut farkas } => {
            // y = (u, t): u·s + t ≤ 0 for members, u·p + t > 0.
            let t = farkas.pop().expect("sum row");
            farkas.push(Rational::zero());
            Ok(HullMembership {
                inside: false,
                witness: Some(Witness::Separating {
                    functional: farkas,
                    threshold: -t,
                }),
            })
        }
        LpOutcome::Unbounded => Err(Error::Internal("feasibility program reported unbounded".into())),
    }
}

fn certify(idx: usize, points: &[PopulationVector]) -> Result<ExtremalityCertificate> {
    let p = &points[idx];
    let others: Vec<PopulationVector> = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != idx)
        .map(|(_, q)| q.clone())
        .collect();
    let membership = is_in_hull(p, &others)?;
    let witness = match membership.witness {
        Some(w) => w,
        None => Witness::Separating {
            functional: vec![Rational::zero(); p.dim()],
            threshold: -Rational::one(),
        },
    };
    Ok(ExtremalityCertificate {
        point: p.clone(),
        is_extreme: !membership.inside,
        witness,
    })
}

/// Certifies every distinct input point as a vertex of `conv(points)` or not.
/// Output is in lexicographic order of the points.
pub fn extreme_points(points: &[PopulationVector]) -> Result<Vec<ExtremalityCertificate>> {
    let mut distinct = PointSet::new(points.iter().cloned())?.points.clone();
    distinct.sort();
    let indices: Vec<usize> = (0..distinct.len()).collect();
    crate::par::map(&indices, |&idx| certify(idx, &distinct))
        .into_iter()
        .collect()
}

/// Vertices of `conv(points)` in lexicographic order.
pub fn vertices(points: &[PopulationVector]) -> Result<Vec<PopulationVector>> {
    Ok(extreme_points(points)?
        .into_iter()
        .filter(|c| c.is_extreme)
        .map(|c| c.point)
        .collect())
}

/// Whether `[u, v]` is an edge of `conv(vertex_set)`: the midpoint admits no
/// convex representation that puts weight on any vertex other than `u`, `v`.
pub fn is_edge(u: &PopulationVector, v: &PopulationVector, vertex_set: &[PopulationVector]) -> Result<bool> {
    if u == v {
        return Err(Error::Precondition("edge endpoints coincide".into()));
    }
    let two = Rational::from_integer(2.into());
    let midpoint = PopulationVector::from_unchecked(
        u.components()
            .iter()
            .zip(v.components())
            .map(|(a, b)| (a + b) / &two)
            .collect(),
    );
    let cost = vertex_set
        .iter()
        .map(|q| {
            if q == u || q == v {
                Rational::zero()
            } else {
                -Rational::one()
            }
        })
        .collect();
    match hull_program(&midpoint, vertex_set, cost).solve() {
        LpOutcome::Optimal { value, .. } => Ok(value.is_zero()),
        _ => Err(Error::Precondition("edge endpoints are not in the vertex set".into())),
    }
}

/// All edges of `conv(vertex_set)` as index pairs `i < j`; the input must be
/// exactly the vertex set.
///
/// A pair whose sum equals the sum of two other vertices has its midpoint on
/// another chord, so it is rejected without solving a program.
pub fn edges(vertex_set: &[PopulationVector]) -> Result<Vec<(usize, usize)>> {
    let n = vertex_set.len();
    let sum = |i: usize, j: usize| -> Vec<Rational> {
        vertex_set[i]
            .components()
            .iter()
            .zip(vertex_set[j].components())
            .map(|(a, b)| a + b)
            .collect()
    };
    let mut by_sum: std::collections::HashMap<Vec<Rational>, usize> = std::collections::HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            *by_sum.entry(sum(i, j)).or_default() += 1;
        }
    }
    let open: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| by_sum[&sum(i, j)] == 1)
        .collect();
    let flags = crate::par::map(&open, |&(i, j)| is_edge(&vertex_set[i], &vertex_set[j], vertex_set));
    let mut out = Vec::new();
    for (pair, f) in open.into_iter().zip(flags) {
        if f? {
            out.push(pair);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimum {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// Tied vertices in lexicographic order.
    pub argmin: Vec<PopulationVector>,
}

/// Minimum of `w·p` over `conv(points)`. The minimum is attained at a vertex;
/// every tied vertex is returned.
pub fn minimize(weights: &[Rational], points: &[PopulationVector]) -> Result<Minimum> {
    let first = points
        .first()
        .ok_or_else(|| Error::Precondition("cannot minimize over an empty set".into()))?;
    if weights.len() != first.dim() {
        return Err(Error::Dimension {
            expected: first.dim(),
            got: weights.len(),
        });
    }
    let value_of = |p: &PopulationVector| -> Rational { weights.iter().zip(p.components()).map(|(a, b)| a * b).sum() };
    let values: Vec<Rational> = points.iter().map(value_of).collect();
    let best = values.iter().min().cloned().expect("non-empty");
    let tied: Vec<PopulationVector> = points
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v == best)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(Minimum {
        value: best,
        argmin: vertices(&tied)?,
    })
}
