use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, Rat};

/// Linear combination of words in the free associative algebra.
pub type WordSum<L> = BTreeMap<Vec<L>, Rat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeWord<L> {
    pub letters: Vec<L>,
    pub coeff: Rat,
}

/// The left-nested bracket `[[…[x₁, x₂], …], xₙ]` times `coeff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieWord<L> {
    pub letters: Vec<L>,
    pub coeff: Rat,
}

pub fn word_sum_add<L: Ord + Clone>(sum: &mut WordSum<L>, word: Vec<L>, c: Rat) {
    if c.is_zero() {
        return;
    }
    match sum.entry(word) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

/// The Dynkin bracketing `θ(x₁…xₙ) = [[…[x₁, x₂], …], xₙ]`.
pub fn dynkin_map<L: Clone>(w: &FreeWord<L>) -> LieWord<L> {
    LieWord { letters: w.letters.clone(), coeff: w.coeff.clone() }
}

/// Expands a left-nested bracket into words: `E(u·x) = E(u)·x − x·E(u)`.
pub fn expand_lie<L: Ord + Clone>(w: &LieWord<L>) -> WordSum<L> {
    let mut terms: Vec<(Vec<L>, i64)> = vec![(vec![w.letters[0].clone()], 1)];
    for x in &w.letters[1..] {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (word, s) in terms {
            let mut right = word.clone();
            right.push(x.clone());
            next.push((right, s));
            let mut left = Vec::with_capacity(word.len() + 1);
            left.push(x.clone());
            left.extend(word);
            next.push((left, -s));
        }
        terms = next;
    }
    let mut out = WordSum::new();
    for (word, s) in terms {
        word_sum_add(&mut out, word, &w.coeff * rational::int(s));
    }
    out
}

fn theta<L: Ord + Clone>(p: &WordSum<L>) -> WordSum<L> {
    let mut out = WordSum::new();
    for (word, c) in p {
        let lw = LieWord { letters: word.clone(), coeff: c.clone() };
        for (w, x) in expand_lie(&lw) {
            word_sum_add(&mut out, w, x);
        }
    }
    out
}

/// Dynkin–Specht–Wever test `θ(p) = n·p` for `p` homogeneous of length `n`.
pub fn is_lie_element<L: Ord + Clone>(p: &WordSum<L>) -> Result<bool> {
    let n = match p.keys().next() {
        Some(w) => w.len(),
        None => return Ok(true),
    };
    if n == 0 || p.keys().any(|w| w.len() != n) {
        return Err(Error::input("word sum is not homogeneous in length"));
    }
    let scaled: WordSum<L> =
        p.iter().map(|(w, c)| (w.clone(), c * rational::int(n as i64))).collect();
    Ok(theta(p) == scaled)
}

/// Rewrites a Lie element as `Σ (1/n)·θ(w)` per length component. Fails if
/// some component is not a Lie element.
pub fn lie_normalize<L: Ord + Clone>(p: &WordSum<L>) -> Result<Vec<LieWord<L>>> {
    let mut by_len: BTreeMap<usize, WordSum<L>> = BTreeMap::new();
    for (w, c) in p {
        if w.is_empty() {
            return Err(Error::input("empty word"));
        }
        by_len.entry(w.len()).or_default().insert(w.clone(), c.clone());
    }
    let mut out = Vec::new();
    for (n, part) in by_len {
        if !is_lie_element(&part)? {
            return Err(Error::assertion(format!(
                "length-{n} component of the word sum is not a Lie element"
            )));
        }
        for (w, c) in part {
            out.push(LieWord { letters: w, coeff: c / rational::int(n as i64) });
        }
    }
    Ok(out)
}
