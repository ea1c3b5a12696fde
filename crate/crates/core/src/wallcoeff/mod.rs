//! Wall-crossing coefficients `S`, `U` and the free Lie algebra toolkit used
//! to turn `U`-weighted word sums into brackets.

mod free;

pub use free::{
    dynkin_map, expand_lie, is_lie_element, lie_normalize, word_sum_add, FreeWord, LieWord,
    WordSum,
};

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::Zero;

use crate::quiver::{sum_all, DimVector};
use crate::rational::{self, Rat};
use crate::stability::{StabValue, WeakStability};

/// Default cap on word length; the `U` sum has `4^(n-1)` index choices.
pub const DEFAULT_MAX_WORD_LEN: usize = 8;

/// `S(α₁, …, αₙ; τ, τ̃)`.
pub fn s_coeff(alphas: &[DimVector], tau: &dyn WeakStability, tau2: &dyn WeakStability) -> i64 {
    let t: Vec<StabValue> = alphas.iter().map(|a| tau.eval(a)).collect();
    let sums = partial_sums(alphas);
    s_with(&t, &sums, &|d: &DimVector| tau2.eval(d))
}

fn partial_sums(alphas: &[DimVector]) -> Vec<DimVector> {
    let n = alphas.first().map_or(0, |a| a.len());
    let mut out = vec![DimVector::zeros(n)];
    for a in alphas {
        let next = out.last().unwrap() + a;
        out.push(next);
    }
    out
}

fn s_with(t: &[StabValue], sums: &[DimVector], tau2: &dyn Fn(&DimVector) -> StabValue) -> i64 {
    let n = t.len();
    let total = &sums[n];
    let mut r = 0;
    for i in 0..n.saturating_sub(1) {
        let left = tau2(&sums[i + 1]);
        let right = tau2(&(total - &sums[i + 1]));
        if t[i] <= t[i + 1] {
            if left > right {
                r += 1;
            } else {
                return 0;
            }
        } else if left > right {
            return 0;
        }
    }
    if r % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `U(α₁, …, αₙ; τ, τ̃)`, evaluated without memoization.
pub fn u_coeff(alphas: &[DimVector], tau: &dyn WeakStability, tau2: &dyn WeakStability) -> Rat {
    Coefficients::new(tau, tau2).u(alphas)
}

/// Memoizing evaluator of `S` and `U` for a fixed pair `(τ, τ̃)`.
pub struct Coefficients<'a> {
    tau: &'a dyn WeakStability,
    tau2: &'a dyn WeakStability,
    memo: RwLock<HashMap<Vec<DimVector>, Rat>>,
    values: RwLock<HashMap<DimVector, (StabValue, StabValue)>>,
}

impl<'a> Coefficients<'a> {
    pub fn new(tau: &'a dyn WeakStability, tau2: &'a dyn WeakStability) -> Self {
        Coefficients {
            tau,
            tau2,
            memo: RwLock::new(HashMap::new()),
            values: RwLock::new(HashMap::new()),
        }
    }

    pub fn tokens(&self) -> (String, String) {
        (self.tau.token(), self.tau2.token())
    }

    fn value(&self, d: &DimVector) -> (StabValue, StabValue) {
        if let Some(v) = self.values.read().unwrap().get(d) {
            return v.clone();
        }
        let v = (self.tau.eval(d), self.tau2.eval(d));
        self.values.write().unwrap().insert(d.clone(), v.clone());
        v
    }

    fn t1(&self, d: &DimVector) -> StabValue {
        self.value(d).0
    }

    fn t2(&self, d: &DimVector) -> StabValue {
        self.value(d).1
    }

    pub fn s(&self, alphas: &[DimVector]) -> i64 {
        let t: Vec<StabValue> = alphas.iter().map(|a| self.t1(a)).collect();
        s_with(&t, &partial_sums(alphas), &|d: &DimVector| self.t2(d))
    }

    pub fn u(&self, alphas: &[DimVector]) -> Rat {
        if let Some(v) = self.memo.read().unwrap().get(alphas) {
            return v.clone();
        }
        let v = self.u_uncached(alphas);
        self.memo.write().unwrap().insert(alphas.to_vec(), v.clone());
        v
    }

    fn u_uncached(&self, alphas: &[DimVector]) -> Rat {
        let n = alphas.len();
        if n == 0 {
            return Rat::zero();
        }
        let dim = alphas[0].len();
        let total = sum_all(dim, alphas);
        let target = self.t2(&total);
        let t: Vec<StabValue> = alphas.iter().map(|a| self.t1(a)).collect();
        let mut acc = Rat::zero();
        // Blocks of the first composition: consecutive α with equal τ whose sum
        // has the same τ value.
        let mut betas: Vec<DimVector> = Vec::new();
        let mut weight = Rat::from_integer(1.into());
        self.a_level(alphas, &t, 0, &mut betas, &mut weight, &target, &mut acc);
        acc
    }

    #[allow(clippy::too_many_arguments)]
    fn a_level(
        &self,
        alphas: &[DimVector],
        t: &[StabValue],
        start: usize,
        betas: &mut Vec<DimVector>,
        weight: &mut Rat,
        target: &StabValue,
        acc: &mut Rat,
    ) {
        let n = alphas.len();
        if start == n {
            *acc += &*weight * self.b_sum(betas, target);
            return;
        }
        let mut beta = DimVector::zeros(alphas[0].len());
        for end in start + 1..=n {
            if t[end - 1] != t[start] {
                break;
            }
            beta = &beta + &alphas[end - 1];
            if self.t1(&beta) != t[start] {
                continue;
            }
            let w = rational::factorial((end - start) as u64);
            betas.push(beta.clone());
            let saved = weight.clone();
            *weight /= w;
            self.a_level(alphas, t, end, betas, weight, target, acc);
            *weight = saved;
            betas.pop();
        }
    }

    /// `Σ_b (-1)^{l-1}/l · Π S(block)` over compositions of the β sequence
    /// whose blocks all have `τ̃` equal to the total.
    fn b_sum(&self, betas: &[DimVector], target: &StabValue) -> Rat {
        let m = betas.len();
        // ways[pos][l]: signed S-products for splitting betas[pos..] into l blocks.
        let mut ways: Vec<Vec<Rat>> = vec![vec![Rat::zero(); m + 1]; m + 1];
        ways[m][0] = Rat::from_integer(1.into());
        for pos in (0..m).rev() {
            let mut gamma = DimVector::zeros(betas[0].len());
            for end in pos + 1..=m {
                gamma = &gamma + &betas[end - 1];
                if self.t2(&gamma) != *target {
                    continue;
                }
                let s = self.s(&betas[pos..end]);
                if s == 0 {
                    continue;
                }
                for l in 1..=m {
                    if ways[end][l - 1].is_zero() {
                        continue;
                    }
                    let add = &ways[end][l - 1] * rational::int(s);
                    ways[pos][l] += add;
                }
            }
        }
        let mut acc = Rat::zero();
        for (l, w) in ways[0].iter().enumerate().skip(1) {
            if !w.is_zero() {
                acc += w * rational::sign(l as i64 - 1) / rational::int(l as i64);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{decompositions, examples::*, sub_vectors};
    use crate::stability::{SlopeFunction, TrivialStability};

    fn dv(x: &[i64]) -> DimVector {
        DimVector(x.to_vec())
    }

    /// Direct transcription of the double-composition sum with no pruning.
    fn u_brute(alphas: &[DimVector], tau: &dyn WeakStability, tau2: &dyn WeakStability) -> Rat {
        let n = alphas.len();
        let total = sum_all(alphas[0].len(), alphas);
        let mut acc = Rat::zero();
        for amask in 0..(1u32 << (n - 1)) {
            let mut cuts = vec![0];
            for i in 1..n {
                if amask & (1 << (i - 1)) != 0 {
                    cuts.push(i);
                }
            }
            cuts.push(n);
            let m = cuts.len() - 1;
            let betas: Vec<DimVector> =
                (0..m).map(|i| sum_all(total.len(), &alphas[cuts[i]..cuts[i + 1]])).collect();
            let ok_a = (0..m).all(|i| {
                (cuts[i]..cuts[i + 1]).all(|j| tau.eval(&betas[i]) == tau.eval(&alphas[j]))
            });
            if !ok_a {
                continue;
            }
            let mut fw = Rat::from_integer(1.into());
            for i in 0..m {
                fw /= rational::factorial((cuts[i + 1] - cuts[i]) as u64);
            }
            for bmask in 0..(1u32 << (m - 1)) {
                let mut bc = vec![0];
                for i in 1..m {
                    if bmask & (1 << (i - 1)) != 0 {
                        bc.push(i);
                    }
                }
                bc.push(m);
                let l = bc.len() - 1;
                let ok_b = (0..l).all(|i| {
                    tau2.eval(&sum_all(total.len(), &betas[bc[i]..bc[i + 1]])) == tau2.eval(&total)
                });
                if !ok_b {
                    continue;
                }
                let mut prod = rational::sign(l as i64 - 1) / rational::int(l as i64);
                for i in 0..l {
                    prod *= rational::int(s_coeff(&betas[bc[i]..bc[i + 1]], tau, tau2));
                }
                acc += prod * &fw;
            }
        }
        acc
    }

    #[test]
    fn s_examples() {
        let q = a2();
        let (v, w) = (q.unit(0), q.unit(1));
        let inc = SlopeFunction::from_ints(&[0, 1]);
        let dec = SlopeFunction::from_ints(&[1, 0]);
        assert_eq!(s_coeff(std::slice::from_ref(&v), &inc, &dec), 1);
        // τ(v) <= τ(w) and τ̃(v) > τ̃(w): condition (a).
        assert_eq!(s_coeff(&[v.clone(), w.clone()], &inc, &dec), -1);
        // Same ordering on both sides: neither (a) nor (b).
        assert_eq!(s_coeff(&[v, w], &inc, &inc), 0);
    }

    #[test]
    fn u_matches_brute_force() {
        let slopes = [
            SlopeFunction::from_ints(&[0, 1, 2]),
            SlopeFunction::from_ints(&[2, 0, 1]),
            SlopeFunction::from_ints(&[1, 1, 0]),
            SlopeFunction::from_ints(&[0, 0, 0]),
        ];
        let d = dv(&[1, 1, 1]);
        for a in &slopes {
            for b in &slopes {
                for n in 1..=3 {
                    for t in decompositions(&d, n, None) {
                        assert_eq!(u_coeff(&t, a, b), u_brute(&t, a, b), "{t:?}");
                    }
                }
            }
        }
        let d = dv(&[2, 1, 0]);
        for n in 1..=3 {
            for t in decompositions(&d, n, None) {
                assert_eq!(
                    u_coeff(&t, &slopes[0], &slopes[1]),
                    u_brute(&t, &slopes[0], &slopes[1])
                );
                assert_eq!(
                    u_coeff(&t, &slopes[2], &TrivialStability),
                    u_brute(&t, &slopes[2], &TrivialStability)
                );
            }
        }
    }

    #[test]
    fn u_identity_on_diagonal() {
        let s = SlopeFunction::from_ints(&[3, 1]);
        for d in sub_vectors(&dv(&[2, 2])).into_iter().filter(|d| !d.is_zero()) {
            for n in 1..=4 {
                for t in decompositions(&d, n, None) {
                    let expect = if n == 1 { rational::one() } else { rational::zero() };
                    assert_eq!(u_coeff(&t, &s, &s), expect);
                }
            }
        }
    }
}
