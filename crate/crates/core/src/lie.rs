//! Lyndon words and their standard bracketings: a compact spanning set for
//! the graded components of the Lie algebra generated by the traceless
//! matrices, plus the left-normed words used for cross-checks.

use crate::error::{Error, Result};
use crate::matrix::{commutator, GenericMatrix};
use std::fmt;

/// A bracketing tree over 1-based generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieWord {
    Leaf(u16),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    pub fn degree(&self) -> usize {
        match self {
            LieWord::Leaf(_) => 1,
            LieWord::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn flatten(&self) -> Vec<u16> {
        let mut out = Vec::with_capacity(self.degree());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u16>) {
        match self {
            LieWord::Leaf(i) => out.push(*i),
            LieWord::Bracket(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Left-normed bracketing [[..[i1,i2],..],in] of an index sequence.
    pub fn left_normed(indices: &[u16]) -> Result<LieWord> {
        if indices.len() < 2 {
            return Err(Error::TooFewIndices(indices.len()));
        }
        let mut acc = LieWord::Leaf(indices[0]);
        for &i in &indices[1..] {
            acc = LieWord::Bracket(Box::new(acc), Box::new(LieWord::Leaf(i)));
        }
        Ok(acc)
    }

    /// Evaluate the bracketing over concrete generator matrices.
    pub fn eval(&self, gens: &[GenericMatrix]) -> Result<GenericMatrix> {
        match self {
            LieWord::Leaf(i) => {
                let i = *i as usize;
                if i == 0 || i > gens.len() {
                    Err(Error::IndexOutOfRange(i, gens.len()))
                } else {
                    Ok(gens[i - 1].clone())
                }
            }
            LieWord::Bracket(a, b) => commutator(&a.eval(gens)?, &b.eval(gens)?),
        }
    }
}

impl fmt::Display for LieWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieWord::Leaf(i) => write!(f, "z{i}"),
            LieWord::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// All Lyndon words of length n over {1..m}, lexicographically increasing
/// (Duval's generation).
pub fn lyndon_words(m: u16, n: usize) -> Vec<Vec<u16>> {
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut w: Vec<u16> = vec![1];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        // extend periodically up to length n
        let cur = w.len();
        while w.len() < n {
            w.push(w[w.len() - cur]);
        }
        // increment the last non-maximal letter
        while let Some(&last) = w.last() {
            if last == m {
                w.pop();
            } else {
                break;
            }
        }
        if w.is_empty() {
            return out;
        }
        *w.last_mut().unwrap() += 1;
    }
}

pub fn is_lyndon(w: &[u16]) -> bool {
    if w.is_empty() {
        return false;
    }
    for i in 1..w.len() {
        if w[i..] <= *w {
            return false;
        }
    }
    true
}

/// Standard bracketing of a Lyndon word: split at the longest proper Lyndon
/// suffix; both halves are Lyndon.
pub fn standard_bracketing(w: &[u16]) -> LieWord {
    debug_assert!(is_lyndon(w), "standard bracketing needs a Lyndon word");
    if w.len() == 1 {
        return LieWord::Leaf(w[0]);
    }
    let mut split = 1;
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            split = i;
            break;
        }
    }
    LieWord::Bracket(
        Box::new(standard_bracketing(&w[..split])),
        Box::new(standard_bracketing(&w[split..])),
    )
}

/// The standard bracketings of all Lyndon words of length n over m letters.
/// Count equals the necklace number (1/n) sum_{d|n} mu(d) m^{n/d}.
pub fn lyndon_brackets(m: u16, n: usize) -> Vec<LieWord> {
    lyndon_words(m, n)
        .iter()
        .map(|w| standard_bracketing(w))
        .collect()
}

/// All m^n index words of length n (for left-normed spanning comparisons).
pub fn all_words(m: u16, n: usize) -> Vec<Vec<u16>> {
    let mut out: Vec<Vec<u16>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for w in &out {
            for i in 1..=m {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of Lyndon words of length n over m letters.
pub fn necklace_count(m: u16, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let n = n as u64;
    let mut total = 0i64;
    for d in 1..=n {
        if n % d == 0 {
            total += mobius(d) * (m as i64).pow((n / d) as u32);
        }
    }
    (total / n as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{left_normed, traceless_generators, Form};
    use crate::scalar::CoeffMode;

    #[test]
    fn lyndon_generation_small() {
        assert_eq!(lyndon_words(2, 1), vec![vec![1], vec![2]]);
        assert_eq!(lyndon_words(2, 2), vec![vec![1, 2]]);
        assert_eq!(
            lyndon_words(2, 3),
            vec![vec![1, 1, 2], vec![1, 2, 2]]
        );
        assert_eq!(lyndon_words(2, 6).len(), 9);
    }

    #[test]
    fn counts_match_necklace_formula() {
        for m in 1..=3u16 {
            for n in 1..=8usize {
                let words = lyndon_words(m, n);
                assert!(words.iter().all(|w| is_lyndon(w)));
                assert_eq!(words.len() as u64, necklace_count(m, n), "m={m} n={n}");
            }
        }
        // frozen values: m=2 -> 2,1,2,3,6,9,18,30 ; m=3 -> 3,3,8,18,48,116
        let m2: Vec<u64> = (1..=8).map(|n| necklace_count(2, n)).collect();
        assert_eq!(m2, vec![2, 1, 2, 3, 6, 9, 18, 30]);
        let m3: Vec<u64> = (1..=6).map(|n| necklace_count(3, n)).collect();
        assert_eq!(m3, vec![3, 3, 8, 18, 48, 116]);
    }

    #[test]
    fn words_sorted_and_distinct() {
        let ws = lyndon_words(3, 5);
        for pair in ws.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn bracketing_splits_at_lyndon_suffix() {
        // [1,1,2] brackets as [1,[1,2]]
        let b = standard_bracketing(&[1, 1, 2]);
        assert_eq!(b.to_string(), "[z1,[z1,z2]]");
        assert_eq!(b.flatten(), vec![1, 1, 2]);
        let b = standard_bracketing(&[1, 2, 2]);
        assert_eq!(b.to_string(), "[[z1,z2],z2]");
    }

    #[test]
    fn left_normed_matches_matrix_side() {
        let gens = traceless_generators(2, Form::Direct, CoeffMode::Exact).unwrap();
        let w = LieWord::left_normed(&[1, 2, 1]).unwrap();
        let via_tree = w.eval(&gens).unwrap();
        let via_matrix = left_normed(&[1, 2, 1], &gens).unwrap();
        assert_eq!(via_tree, via_matrix);
    }

    #[test]
    fn all_words_enumeration() {
        assert_eq!(all_words(2, 0), vec![Vec::<u16>::new()]);
        assert_eq!(all_words(2, 3).len(), 8);
        assert_eq!(all_words(3, 2).len(), 9);
    }

    #[test]
    fn eval_rejects_bad_index() {
        let gens = traceless_generators(2, Form::Direct, CoeffMode::Exact).unwrap();
        let w = LieWord::left_normed(&[1, 3]).unwrap();
        assert!(w.eval(&gens).is_err());
    }
}
