use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn longest(n: usize) -> Self {
        Self((1..=n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inversions(&self) -> usize {
        let p = &self.0;
        (0..p.len())
            .map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count())
            .sum()
    }

    /// Right multiplication by the adjacent transposition `σ_letter`
    /// (swaps positions `letter` and `letter + 1`).
    pub fn times_letter(&self, letter: usize) -> Self {
        let mut p = self.0.clone();
        p.swap(letter - 1, letter);
        Self(p)
    }

    /// Every permutation of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Self(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..current.len())
                .rev()
                .find(|&j| current[j] > current[i - 1])
                .expect("pivot");
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A minimal-length word `σ_{a₁}⋯σ_{a_k}` in adjacent transpositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedWord {
    /// Transposition indices in `1..n`.
    pub letters: Vec<usize>,
    pub target: Permutation,
}

impl ReducedWord {
    /// Validates the word against `n` and checks it is reduced.
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        let mut p = Permutation::identity(n);
        for &a in &letters {
            if a == 0 || a >= n {
                return Err(Error::Precondition(format!("letter {a} out of range for n = {n}")));
            }
            p = p.times_letter(a);
        }
        if p.inversions() != letters.len() {
            return Err(Error::Precondition(format!("word {letters:?} is not reduced")));
        }
        Ok(Self { letters, target: p })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(|a| format!("s{a}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationClass {
    /// Lexicographically least member.
    pub representative: ReducedWord,
    /// Members in lexicographic order.
    pub members: Vec<ReducedWord>,
}

/// All reduced words of `perm`, in lexicographic order.
pub fn reduced_words(perm: &Permutation) -> Vec<ReducedWord> {
    let mut memo: HashMap<Permutation, Vec<Vec<usize>>> = HashMap::new();
    let mut words = words_for(perm, &mut memo);
    words.sort();
    words
        .into_iter()
        .map(|letters| ReducedWord {
            letters,
            target: perm.clone(),
        })
        .collect()
}

fn words_for(perm: &Permutation, memo: &mut HashMap<Permutation, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(w) = memo.get(perm) {
        return w.clone();
    }
    let p = perm.images();
    let mut out = Vec::new();
    if perm.inversions() == 0 {
        out.push(Vec::new());
    }
    for a in 1..p.len() {
        if p[a - 1] > p[a] {
            for mut w in words_for(&perm.times_letter(a), memo) {
                w.push(a);
                out.push(w);
            }
        }
    }
    memo.insert(perm.clone(), out.clone());
    out
}

/// Partitions the reduced words of `perm` under `σ_iσ_j = σ_jσ_i`, `|i − j| > 1`.
pub fn commutation_classes(perm: &Permutation) -> Vec<CommutationClass> {
    let words = reduced_words(perm);
    let index: HashMap<&[usize], usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.letters.as_slice(), i))
        .collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, w) in words.iter().enumerate() {
        for j in 1..w.letters.len() {
            let (a, b) = (w.letters[j - 1], w.letters[j]);
            if a.abs_diff(b) > 1 {
                let mut swapped = w.letters.clone();
                swapped.swap(j - 1, j);
                let other = index[swapped.as_slice()];
                let (ri, ro) = (find(&mut parent, i), find(&mut parent, other));
                parent[ri.max(ro)] = ri.min(ro);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<ReducedWord>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(w.clone());
    }
    let mut classes: Vec<CommutationClass> = groups
        .into_values()
        .map(|members| CommutationClass {
            representative: members[0].clone(),
            members,
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    classes
}

/// The lexicographically least word of every commutation class over all of
/// `S_n`, in depth-first (lexicographic) order.
///
/// A word is least in its class iff every letter, moved left past the run
/// of letters it commutes with, meets no larger letter. That property is
/// prefix-closed, so the search extends valid words one letter at a time.
pub fn class_representatives(n: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    extend(n, &mut word, Permutation::identity(n), &mut out);
    out
}

fn extend(n: usize, word: &mut Vec<usize>, perm: Permutation, out: &mut Vec<ReducedWord>) {
    out.push(ReducedWord {
        letters: word.clone(),
        target: perm.clone(),
    });
    for a in 1..n {
        let p = perm.images();
        if p[a - 1] > p[a] {
            continue;
        }
        let blocked = word.iter().rev().take_while(|&&b| b.abs_diff(a) > 1).any(|&b| b > a);
        if blocked {
            continue;
        }
        word.push(a);
        extend(n, word, perm.times_letter(a), out);
        word.pop();
    }
}
