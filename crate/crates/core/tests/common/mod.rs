//! Test-side oracles. These never call the library's operator code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use diffpoly::rational::{int, rat};
use diffpoly::{PopulationVector, Rational};
use rand::rngs::StdRng;
use rand::Rng;

/// Literal vector, e.g. `v(&[(0, 1), (2, 7), (5, 7)])`.
pub fn v(parts: &[(i64, i64)]) -> Vec<Rational> {
    parts.iter().map(|&(a, b)| rat(a, b)).collect()
}

pub fn pv(values: Vec<Rational>) -> PopulationVector {
    PopulationVector::new(values).expect("normalized literal")
}

/// Sets every 1-based position in `set` to the mean over `set`.
pub fn average(rho: &[Rational], set: &[usize]) -> Vec<Rational> {
    let total: Rational = set.iter().map(|&i| rho[i - 1].clone()).sum();
    let mean = total / int(set.len() as i64);
    let mut out = rho.to_vec();
    for &i in set {
        out[i - 1] = mean.clone();
    }
    out
}

/// Applies averaging sets left to right.
pub fn run(rho: &[Rational], ops: &[&[usize]]) -> Vec<Rational> {
    ops.iter().fold(rho.to_vec(), |r, s| average(&r, s))
}

/// `S_A`: average each maximal run `i..=j` of `A` over positions `i..=j+1`.
pub fn subset_point(rho: &[Rational], subset: &[usize]) -> Vec<Rational> {
    let mut out = rho.to_vec();
    let mut k = 0;
    while k < subset.len() {
        let start = subset[k];
        let mut end = start;
        while k + 1 < subset.len() && subset[k + 1] == end + 1 {
            k += 1;
            end = subset[k];
        }
        let positions: Vec<usize> = (start..=end + 1).collect();
        out = average(&out, &positions);
        k += 1;
    }
    out
}

/// Strictly increasing, normalized, from distinct integers in `1..=1000`.
pub fn generic_increasing(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    let mut values = BTreeSet::new();
    while values.len() < n {
        values.insert(rng.gen_range(1..=1000i64));
    }
    let total: i64 = values.iter().sum();
    values.into_iter().map(|x| rat(x, total)).collect()
}

/// Arbitrary normalized vector with entries from `0..=max` (not all zero).
pub fn random_vector(rng: &mut StdRng, n: usize, max: i64) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return raw.into_iter().map(|x| rat(x, total)).collect();
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ λ_k p_k` computed component-wise.
pub fn combine(terms: &[(Rational, Vec<Rational>)]) -> Vec<Rational> {
    let n = terms[0].1.len();
    (0..n).map(|c| terms.iter().map(|(l, p)| l * &p[c]).sum()).collect()
}

pub fn sorted_set(points: impl IntoIterator<Item = Vec<Rational>>) -> BTreeSet<Vec<Rational>> {
    points.into_iter().collect()
}

pub fn components(points: &[PopulationVector]) -> BTreeSet<Vec<Rational>> {
    points.iter().map(|p| p.components().to_vec()).collect()
}

/// Subsets of `{1..n-1}` with no two consecutive elements, counted by bitmask.
pub fn sparse_subsets(n: usize, k: u32) -> usize {
    (0u64..1 << (n - 1))
        .filter(|m| m.count_ones() == k && m & (m >> 1) == 0)
        .count()
}

/// Table of C4 extreme points: `(column, ops)`; columns are
/// inherited-from-K4, shared-with-P4, cycle-only.
pub fn c4_table() -> Vec<(usize, Vec<&'static [usize]>)> {
    vec![
        (0, vec![]),
        (0, vec![&[1, 2]]),
        (0, vec![&[2, 3]]),
        (0, vec![&[3, 4]]),
        (0, vec![&[1, 2], &[3, 4]]),
        (0, vec![&[1, 2], &[3, 4], &[1, 4]]),
        (1, vec![&[1, 2, 3]]),
        (1, vec![&[2, 3, 4]]),
        (2, vec![&[1, 2, 3], &[1, 4]]),
        (2, vec![&[2, 3, 4], &[1, 4]]),
        (2, vec![&[1, 2, 3], &[1, 2, 4]]),
        (2, vec![&[2, 3, 4], &[1, 3, 4]]),
        (2, vec![&[1, 2], &[3, 4], &[1, 3, 4]]),
        (2, vec![&[1, 2], &[3, 4], &[1, 2, 4]]),
        (2, vec![&[2, 3, 4], &[1, 4], &[1, 2]]),
        (2, vec![&[1, 2, 3], &[1, 4], &[2, 3, 4]]),
        (2, vec![&[2, 3, 4], &[1, 4], &[1, 2, 3]]),
        (2, vec![&[1, 2, 3], &[2, 3], &[1, 4], &[3, 4]]),
    ]
}
