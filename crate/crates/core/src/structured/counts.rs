use std::fmt::Write;

use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// `F_m` with `F_1 = F_2 = 1`.
pub fn fibonacci(m: u64) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..m {
        (a, b) = (b, a + b);
    }
    a
}

/// `A_k(n) = C(n−k, k)`: `k`-subsets of `{1, …, n−1}` with no two
/// consecutive elements, i.e. sets of `k` mutually commuting local pairs.
pub fn count_commuting_subsets(n: u64, k: u64) -> Result<u128> {
    if n < 2 {
        return Err(Error::Precondition("counting needs n ≥ 2".into()));
    }
    if k > n / 2 {
        return Err(Error::Precondition(format!("k = {k} exceeds ⌊n/2⌋ = {}", n / 2)));
    }
    Ok(binomial(n - k, k))
}

/// `Σ_k A_k(n)`, which equals `F_{n+1}`.
pub fn fibonacci_nonlocal_count(n: u64) -> Result<u128> {
    (0..=n / 2).map(|k| count_commuting_subsets(n, k)).sum()
}

/// `(n−1)(n−2)/2 − (n−2)`.
pub fn a2_closed_form(n: u64) -> u128 {
    let n = n as u128;
    (n - 1) * (n - 2) / 2 - (n - 2)
}

/// `T_m = m(m+1)/2`.
pub fn triangular(m: u64) -> u128 {
    let m = m as u128;
    m * (m + 1) / 2
}

/// `n, A_0, …, A_⌊N/2⌋, total, F_{n+1}` for `n = 2..=max_n`.
pub fn counts_table_csv(max_n: u64) -> Result<String> {
    let width = max_n / 2;
    let mut out = String::from("n");
    for k in 0..=width {
        write!(out, ",A{k}").expect("string write");
    }
    out.push_str(",total,fibonacci\n");
    for n in 2..=max_n {
        write!(out, "{n}").expect("string write");
        for k in 0..=width {
            let v = if k <= n / 2 { count_commuting_subsets(n, k)? } else { 0 };
            write!(out, ",{v}").expect("string write");
        }
        writeln!(out, ",{},{}", fibonacci_nonlocal_count(n)?, fibonacci(n + 1)).expect("string write");
    }
    Ok(out)
}
