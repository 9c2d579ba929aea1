use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::pn::{pn_subset_point, require_sorted, SubsetPoint};
use crate::error::{Error, Result};
use crate::geometry::is_in_hull;
use crate::ops::AveragingOp;
use crate::population::PopulationVector;
use crate::rational::{int, serde_rational, serde_rational_vec, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionCase {
    /// `i ∈ A`: the operator fixes `S_A`.
    Identity,
    /// `k = l = 1`: the image is `S_{A∪{i}}`.
    Extreme,
    /// `k = 1 < l`: two points, `S₁` and `S₂`.
    LeftSingle,
    /// `k > 1 = l`: two points, `S₁` and `S₃`.
    RightSingle,
    /// `k, l > 1`: four points.
    General,
}

/// Closed-form quantities of the four-point case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionInternals {
    #[serde(with = "serde_rational_vec")]
    pub r: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub p: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub y: Rational,
    /// `X, X₁, Y₁, X₂, Y₂, Z`.
    #[serde(with = "serde_rational_vec")]
    pub levels: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub c: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub d: Vec<Rational>,
    /// `−D_j / C_j` for `j = 1, 2, 3`.
    #[serde(with = "serde_rational_vec")]
    pub window: Vec<Rational>,
}

impl DecompositionInternals {
    /// `C₁ > 0`, `C₂, C₃ < 0`, and both right ends exceed the left end.
    pub fn window_holds(&self) -> bool {
        self.c[0].is_positive()
            && self.c[1].is_negative()
            && self.c[2].is_negative()
            && self.window[1] > self.window[0]
            && self.window[2] > self.window[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionWitness {
    pub subset: Vec<usize>,
    pub i: usize,
    pub case: DecompositionCase,
    /// Length of the run of equal components ending at position `i`.
    pub k: usize,
    /// Length of the run starting at position `i + 1`.
    pub l: usize,
    /// `S_A B_{i,i+1}`.
    pub target: PopulationVector,
    /// `S₁ … S₄`; coincide in the degenerate cases.
    pub points: Vec<SubsetPoint>,
    #[serde(with = "serde_rational_vec")]
    pub lambdas: Vec<Rational>,
    /// `false` when a vanishing denominator forced an exact LP solve instead.
    pub closed_form: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internals: Option<DecompositionInternals>,
}

impl DecompositionWitness {
    /// Non-negative weights summing to one that rebuild the target exactly.
    pub fn verify(&self) -> bool {
        let weights_ok = self.lambdas.len() == self.points.len()
            && self.lambdas.iter().all(|l| !l.is_negative() && *l <= Rational::one())
            && self.lambdas.iter().sum::<Rational>().is_one();
        let terms: Vec<_> = self
            .points
            .iter()
            .zip(&self.lambdas)
            .map(|(s, l)| (&s.point, l.clone()))
            .collect();
        weights_ok && PopulationVector::convex_combination(&terms).as_ref() == Ok(&self.target)
    }
}

fn mean(values: &[Rational]) -> Rational {
    values.iter().sum::<Rational>() / int(values.len() as i64)
}

fn without(subset: &[usize], drop: &[usize]) -> Vec<usize> {
    subset.iter().copied().filter(|a| !drop.contains(a)).collect()
}

/// Writes `S_A B_{i,i+1}` as a convex combination of subset points.
pub fn subset_decomposition(subset: &[usize], i: usize, rho0: &PopulationVector) -> Result<DecompositionWitness> {
    require_sorted(rho0)?;
    let n = rho0.dim();
    if i == 0 || i >= n {
        return Err(Error::Precondition(format!("position {i} outside 1..{n}")));
    }
    let base = pn_subset_point(subset, rho0)?;
    let a = base.subset.clone();
    let target = AveragingOp::pair(i, i + 1).act(&base.point)?;
    let one = Rational::one();
    let zero = Rational::zero();
    if a.contains(&i) {
        return Ok(DecompositionWitness {
            subset: a,
            i,
            case: DecompositionCase::Identity,
            k: 0,
            l: 0,
            target,
            points: vec![base.clone(), base.clone(), base.clone(), base],
            lambdas: vec![one, zero.clone(), zero.clone(), zero],
            closed_form: true,
            internals: None,
        });
    }
    let k = 1 + (1..i).rev().take_while(|b| a.contains(b)).count();
    let l = 1 + (i + 1..n).take_while(|b| a.contains(b)).count();
    let mut u = a.clone();
    u.push(i);
    let s1 = pn_subset_point(&u, rho0)?;
    let s2 = pn_subset_point(&without(&u, &[i + 1]), rho0)?;
    let s3 = pn_subset_point(&without(&u, &[i - 1]), rho0)?;
    let s4 = pn_subset_point(&without(&u, &[i - 1, i + 1]), rho0)?;
    let points = vec![s1, s2, s3, s4];

    let c = rho0.components();
    let r2 = c[i - 1].clone();
    let r3 = c[i].clone();
    let r1 = (k > 1).then(|| mean(&c[i - k..i - 1]));
    let r4 = (l > 1).then(|| mean(&c[i + 1..i + l]));
    let (kk, ll) = (int(k as i64), int(l as i64));
    let (kp1, lp1) = (int(k as i64 + 1), int(l as i64 + 1));

    let (case, closed) = match (r1.as_ref(), r4.as_ref()) {
        (None, None) => (
            DecompositionCase::Extreme,
            Some((vec![one.clone(), zero.clone(), zero.clone(), zero.clone()], None)),
        ),
        (None, Some(r4)) => {
            let (p2, p3) = (&r3 - &r2, r4 - &r3);
            let den = &ll * (&p3 * int(2) + &p2);
            let lam = (!den.is_zero()).then(|| &lp1 * &p3 / den);
            (
                DecompositionCase::LeftSingle,
                lam.map(|l1| (vec![l1.clone(), &one - l1, zero.clone(), zero.clone()], None)),
            )
        }
        (Some(r1), None) => {
            let (p1, p2) = (&r2 - r1, &r3 - &r2);
            let den = &kk * (&p1 * int(2) + &p2);
            let lam = (!den.is_zero()).then(|| &kp1 * &p1 / den);
            (
                DecompositionCase::RightSingle,
                lam.map(|l1| (vec![l1.clone(), zero.clone(), &one - l1, zero.clone()], None)),
            )
        }
        (Some(r1), Some(r4)) => (DecompositionCase::General, general(k, l, [r1, &r2, &r3, r4])),
    };
    let (lambdas, internals, closed_form) = match closed {
        Some((lambdas, internals)) => (lambdas, internals, true),
        None => (solve_exactly(&target, &points)?, None, false),
    };
    let witness = DecompositionWitness {
        subset: a,
        i,
        case,
        k,
        l,
        target,
        points,
        lambdas,
        closed_form,
        internals,
    };
    if !witness.verify() {
        return Err(Error::Internal(format!(
            "decomposition of S_A B_{{{i},{}}} failed for A = {:?}",
            i + 1,
            witness.subset
        )));
    }
    Ok(witness)
}

type Closed = Option<(Vec<Rational>, Option<DecompositionInternals>)>;

fn general(k: usize, l: usize, r: [&Rational; 4]) -> Closed {
    let [r1, r2, r3, r4] = r;
    let (kk, ll) = (int(k as i64), int(l as i64));
    let (km1, kp1) = (int(k as i64 - 1), int(k as i64 + 1));
    let (lm1, lp1) = (int(l as i64 - 1), int(l as i64 + 1));
    let two = int(2);
    let p1 = r2 - r1;
    let p2 = r3 - r2;
    let p3 = r4 - r3;
    let left = &km1 * &p1 + &kk * &p2 + &kp1 * &p3;
    let right = &lp1 * &p1 + &ll * &p2 + &lm1 * &p3;
    let q3 = &p2 + &two * &p3;
    let q1 = &p2 + &two * &p1;
    if left.is_zero() || right.is_zero() || q1.is_zero() || q3.is_zero() {
        return None;
    }
    let c1 = &q3 * &q1 * (&kk + &ll) / (&two * &left) / &right;
    let c2 = -(&q3 * &kp1) / (&two * &left);
    let c3 = -(&q1 * &lp1) / (&two * &right);
    let kl = &kk * &ll;
    let shared = &km1 * &ll * &p1 + &kl * &p2 + &kk * &lm1 * &p3;
    let w1 = (&km1 * &ll * &p1 * &p2 + &kl * &p2 * &p2 + &kk * &lm1 * &p2 * &p3 - &two * (&ll + &kk) * &p1 * &p3)
        / (&q3 * &q1 * &kl);
    let w2 = &shared / (&q3 * &kl);
    let w3 = &shared / (&q1 * &kl);
    let lambda4 = if w1.is_positive() { w1.clone() } else { Rational::zero() };
    let lambdas = vec![
        &c1 * (&lambda4 - &w1),
        &c2 * (&lambda4 - &w2),
        &c3 * (&lambda4 - &w3),
        lambda4,
    ];
    let d = vec![-&c1 * &w1, -&c2 * &w2, -&c3 * &w3];
    let x = (&km1 * r1 + r2) / &kk;
    let y = (r3 + &lm1 * r4) / &ll;
    let levels = vec![
        (&km1 * r1 + r2 + r3 + &lm1 * r4) / (&kk + &ll),
        (&km1 * r1 + r2 + r3) / &kp1,
        r4.clone(),
        r1.clone(),
        (r2 + r3 + &lm1 * r4) / &lp1,
        (r2 + r3) / &two,
    ];
    Some((
        lambdas,
        Some(DecompositionInternals {
            r: vec![r1.clone(), r2.clone(), r3.clone(), r4.clone()],
            p: vec![p1, p2, p3],
            x,
            y,
            levels,
            c: vec![c1, c2, c3],
            d,
            window: vec![w1, w2, w3],
        }),
    ))
}

fn solve_exactly(target: &PopulationVector, points: &[SubsetPoint]) -> Result<Vec<Rational>> {
    let members: Vec<PopulationVector> = points.iter().map(|s| s.point.clone()).collect();
    let membership = is_in_hull(target, &members)?;
    let Some(crate::geometry::Witness::Combination { terms }) = membership.witness else {
        return Err(Error::Internal(
            "decomposition target outside the four-point hull".into(),
        ));
    };
    let mut lambdas = vec![Rational::zero(); points.len()];
    for t in terms {
        let idx = members.iter().position(|m| *m == t.point).expect("member");
        lambdas[idx] += t.weight;
    }
    Ok(lambdas)
}
