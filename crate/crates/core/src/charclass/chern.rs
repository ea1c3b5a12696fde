use num_traits::One;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};
use crate::rational::{self, Rat};

use super::ring::{Poly, Ring};

/// One tensor factor `V_{vertex}` (or its dual) pulled back from moduli factor `factor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Taut {
    pub factor: usize,
    pub vertex: usize,
    pub dual: bool,
}

/// Ordered tensor product of tautological bundles; the empty atom is `O`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub Vec<Taut>);

/// Formal integer combination of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KExpr {
    pub terms: Vec<(i64, Atom)>,
}

impl Atom {
    pub fn rank(&self, dims: &[DimVector]) -> i64 {
        self.0.iter().map(|t| dims[t.factor].0[t.vertex]).product()
    }
}

impl KExpr {
    pub fn push(&mut self, k: i64, atom: Atom) {
        if k != 0 {
            self.terms.push((k, atom));
        }
    }

    pub fn rank(&self, dims: &[DimVector]) -> i64 {
        self.terms.iter().map(|(k, a)| k * a.rank(dims)).sum()
    }

    pub fn dual(&self) -> KExpr {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (*k, Atom(a.0.iter().map(|t| Taut { dual: !t.dual, ..*t }).collect())))
            .collect();
        KExpr { terms }
    }

    /// Relabels moduli factors by `perm[old] = new`.
    pub fn permute_factors(&self, perm: &[usize]) -> KExpr {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| {
                (*k, Atom(a.0.iter().map(|t| Taut { factor: perm[t.factor], ..*t }).collect()))
            })
            .collect();
        KExpr { terms }
    }

    pub fn add(&self, other: &KExpr) -> KExpr {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn neg(&self) -> KExpr {
        KExpr { terms: self.terms.iter().map(|(k, a)| (-k, a.clone())).collect() }
    }
}

/// Power sums `p_0..=p_n` of the Chern roots of `V_v` on `factor`, by Newton's
/// identities from the elementary classes `c_i`.
pub fn power_sums(ring: &Ring, factor: usize, vertex: usize, n: usize) -> Vec<Poly> {
    let r = ring.rank(factor, vertex);
    let mut p = vec![Poly::constant(ring, rational::int(r))];
    for k in 1..=n {
        let mut acc = ring.chern(factor, vertex, k as u32).scale(&rational::int((k as i64) * sign(k - 1)));
        for i in 1..k {
            let ci = ring.chern(factor, vertex, i as u32);
            if ci.is_zero() {
                continue;
            }
            acc.add_scaled(&ci.mul(&p[k - i]), &rational::int(sign(i - 1)));
        }
        p.push(acc);
    }
    p
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Power sums of an atom via `p_k(A⊗B) = Σ_a C(k,a) p_a(A) p_{k−a}(B)` and
/// `p_k(V*) = (−1)^k p_k(V)`.
pub fn atom_power_sums(ring: &Ring, atom: &Atom, n: usize) -> Vec<Poly> {
    let mut acc: Vec<Poly> = (0..=n)
        .map(|k| if k == 0 { Poly::constant(ring, Rat::one()) } else { Poly::zero() })
        .collect();
    for t in &atom.0 {
        let mut b = power_sums(ring, t.factor, t.vertex, n);
        if t.dual {
            for (k, pk) in b.iter_mut().enumerate() {
                if k % 2 == 1 {
                    *pk = pk.neg();
                }
            }
        }
        let mut next = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut s = Poly::zero();
            for a in 0..=k {
                if acc[a].is_zero() || b[k - a].is_zero() {
                    continue;
                }
                s.add_scaled(&acc[a].mul(&b[k - a]), &rational::binom(k as i64, a as i64));
            }
            next.push(s);
        }
        acc = next;
    }
    acc
}

pub fn kexpr_power_sums(ring: &Ring, x: &KExpr, n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n + 1];
    for (k, atom) in &x.terms {
        let ps = atom_power_sums(ring, atom, n);
        for (o, p) in out.iter_mut().zip(&ps) {
            o.add_scaled(p, &rational::int(*k));
        }
    }
    out
}

/// `c_0..=c_n` from power sums: `k c_k = Σ_{i=1}^k (−1)^{i−1} c_{k−i} p_i`.
pub fn chern_from_power_sums(ring: &Ring, p: &[Poly], n: usize) -> Vec<Poly> {
    let mut c = vec![Poly::constant(ring, Rat::one())];
    for k in 1..=n {
        let mut acc = Poly::zero();
        for i in 1..=k {
            if p[i].is_zero() || c[k - i].is_zero() {
                continue;
            }
            acc.add_scaled(&c[k - i].mul(&p[i]), &rational::int(sign(i - 1)));
        }
        c.push(acc.scale(&rational::ratio(1, k as i64)));
    }
    c
}

/// Chern classes `c_0..=c_n` of an honest bundle.
pub fn total_chern(ring: &Ring, atom: &Atom, n: i64) -> Result<Vec<Poly>> {
    if n < 0 {
        return Err(Error::input("negative truncation degree"));
    }
    let n = n as usize;
    Ok(chern_from_power_sums(ring, &atom_power_sums(ring, atom, n), n))
}

/// Chern classes `c_0..=c_n` of a virtual class; `c(a − b) = c(a)/c(b)`.
pub fn chern_virtual(ring: &Ring, x: &KExpr, n: usize) -> Vec<Poly> {
    chern_from_power_sums(ring, &kexpr_power_sums(ring, x, n), n)
}

/// Top Chern class of an honest combination (all coefficients positive).
pub fn top_chern(ring: &Ring, x: &KExpr) -> Result<Poly> {
    if x.terms.iter().any(|(k, _)| *k < 0) {
        return Err(Error::input("top Chern class of a virtual class"));
    }
    let r = x.rank(&ring.dims) as usize;
    Ok(chern_virtual(ring, x, r).pop().unwrap())
}

/// `Θ` on `M_d × M_e` (factors 0 and 1): the dual of `Ext` plus the swap
/// pullback of `Ext`. Rank is the symmetrized Euler form.
pub fn theta_kexpr(q: &Quiver) -> KExpr {
    let mut x = KExpr::default();
    let tv = |f: usize, v: usize, dual: bool| Taut { factor: f, vertex: v, dual };
    for v in 0..q.num_vertices() {
        x.push(2, Atom(vec![tv(0, v, false), tv(1, v, true)]));
    }
    for a in q.edges() {
        x.push(-1, Atom(vec![tv(0, a.tail, false), tv(1, a.head, true)]));
        x.push(-1, Atom(vec![tv(0, a.head, false), tv(1, a.tail, true)]));
    }
    x
}

/// `Ext` on `M_d × M_e`: `Σ_v V*_{v,d}⊠V_{v,e} − Σ_a V*_{t(a),d}⊠V_{h(a),e}`.
pub fn ext_kexpr(q: &Quiver) -> KExpr {
    let mut x = KExpr::default();
    let tv = |f: usize, v: usize, dual: bool| Taut { factor: f, vertex: v, dual };
    for v in 0..q.num_vertices() {
        x.push(1, Atom(vec![tv(0, v, true), tv(1, v, false)]));
    }
    for a in q.edges() {
        x.push(-1, Atom(vec![tv(0, a.tail, true), tv(1, a.head, false)]));
    }
    x
}
