use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::charclass::{Mono, Poly, Ring};
use crate::quiver::DimVector;
use crate::rational::Rat;

/// Element of `H_{2w}` of a product of moduli components, stored as the
/// functional on weight-`w` monomials it defines. Negative `w` is allowed and
/// always carries the zero functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClass {
    pub factors: Vec<DimVector>,
    pub weight: i64,
    pub coeffs: BTreeMap<Mono, Rat>,
}

impl HomologyClass {
    pub fn zero(factors: Vec<DimVector>, weight: i64) -> Self {
        HomologyClass { factors, weight, coeffs: BTreeMap::new() }
    }

    /// Degree-0 class pairing to 1 with the constant monomial.
    pub fn unit(d: &DimVector) -> Self {
        let ring = Ring::single(d);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(ring.one(), Rat::one());
        HomologyClass { factors: vec![d.clone()], weight: 0, coeffs }
    }

    pub fn vacuum(n: usize) -> Self {
        Self::unit(&DimVector::zeros(n))
    }

    pub fn dim(&self) -> &DimVector {
        debug_assert_eq!(self.factors.len(), 1);
        &self.factors[0]
    }

    /// Homological degree.
    pub fn degree(&self) -> i64 {
        2 * self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.coeffs.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.w as i64, self.weight);
        match self.coeffs.entry(m) {
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

    /// `self + k·other`; both must live in the same component and degree.
    pub fn add_scaled(&mut self, other: &HomologyClass, k: &Rat) {
        assert_eq!(self.factors, other.factors, "component mismatch");
        if other.is_zero() || k.is_zero() {
            return;
        }
        assert_eq!(self.weight, other.weight, "degree mismatch");
        for (m, c) in &other.coeffs {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero(self.factors.clone(), self.weight);
        out.add_scaled(self, k);
        out
    }

    pub fn sub(&self, other: &HomologyClass) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    /// Pairing with a cohomology class; only the weight-`w` part matters.
    pub fn pair(&self, p: &Poly) -> Rat {
        let mut acc = Rat::zero();
        if p.len() <= self.coeffs.len() {
            for (m, c) in &p.terms {
                if let Some(x) = self.coeffs.get(m) {
                    acc += c * x;
                }
            }
        } else {
            for (m, x) in &self.coeffs {
                if let Some(c) = p.terms.get(m) {
                    acc += c * x;
                }
            }
        }
        acc
    }

    /// `u ⊠ v` on the product of the two components.
    pub fn kunneth(&self, other: &HomologyClass) -> HomologyClass {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let mut out = HomologyClass::zero(factors, self.weight + other.weight);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let mut e = a.e.clone();
                e.extend_from_slice(&b.e);
                out.coeffs.insert(Mono { w: a.w + b.w, e }, x * y);
            }
        }
        out
    }

    /// `u ∩ γ_k` where `γ_k` is the weight-`k` part of `gamma`.
    pub fn cap(&self, gamma: &Poly, k: u32) -> HomologyClass {
        let mut out = HomologyClass::zero(self.factors.clone(), self.weight - k as i64);
        if out.weight < 0 {
            return out;
        }
        for (t, c) in gamma.terms.iter().filter(|(t, _)| t.w == k) {
            for (m, x) in &self.coeffs {
                if let Some(r) = m.div(t) {
                    out.add_term(r, c * x);
                }
            }
        }
        out
    }

    /// Coefficient vector over an ordered monomial basis.
    pub fn to_vector(&self, basis: &[Mono]) -> Vec<Rat> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }
}
