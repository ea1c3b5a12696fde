use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::quiver::{DimVector, Quiver};
use crate::rational::{self, Rat};

/// Generator `c_index(V_vertex)` on moduli factor `factor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub factor: usize,
    pub vertex: usize,
    pub index: u32,
}

/// Cohomology of `M_{d₁} × ⋯ × M_{d_k}`: polynomial ring in the `c[v,i]` of
/// each factor, `1 <= i <= d(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub dims: Vec<DimVector>,
    pub gens: Vec<Gen>,
    offsets: Vec<usize>,
    lookup: HashMap<(usize, usize, u32), usize>,
}

impl Ring {
    pub fn new(dims: Vec<DimVector>) -> Self {
        let mut gens = Vec::new();
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        for (f, d) in dims.iter().enumerate() {
            offsets.push(gens.len());
            for (v, &r) in d.0.iter().enumerate() {
                for i in 1..=r.max(0) as u32 {
                    gens.push(Gen { factor: f, vertex: v, index: i });
                }
            }
        }
        offsets.push(gens.len());
        let lookup = gens
            .iter()
            .enumerate()
            .map(|(k, g)| ((g.factor, g.vertex, g.index), k))
            .collect();
        Ring { dims, gens, offsets, lookup }
    }

    pub fn single(d: &DimVector) -> Self {
        Self::new(vec![d.clone()])
    }

    pub fn pair(d: &DimVector, e: &DimVector) -> Self {
        Self::new(vec![d.clone(), e.clone()])
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    /// Range of generator positions belonging to `factor`.
    pub fn factor_range(&self, factor: usize) -> std::ops::Range<usize> {
        self.offsets[factor]..self.offsets[factor + 1]
    }

    pub fn gen_index(&self, factor: usize, vertex: usize, index: u32) -> Option<usize> {
        self.lookup.get(&(factor, vertex, index)).copied()
    }

    pub fn rank(&self, factor: usize, vertex: usize) -> i64 {
        self.dims[factor].0[vertex]
    }

    pub fn one(&self) -> Mono {
        Mono { w: 0, e: vec![0; self.ngens()] }
    }

    pub fn gen_mono(&self, k: usize) -> Mono {
        let mut m = self.one();
        m.e[k] = 1;
        m.w = self.gens[k].index;
        m
    }

    /// `c_i(V_v)` on `factor`: `1` for `i = 0`, zero beyond the rank.
    pub fn chern(&self, factor: usize, vertex: usize, i: u32) -> Poly {
        if i == 0 {
            return Poly::constant(self, Rat::one());
        }
        match self.gen_index(factor, vertex, i) {
            Some(k) => Poly::from_mono(self.gen_mono(k), Rat::one()),
            None => Poly::zero(),
        }
    }

    /// Weight of the restriction of `m` to `factor`.
    pub fn factor_weight(&self, m: &Mono, factor: usize) -> u32 {
        self.factor_range(factor).map(|k| m.e[k] as u32 * self.gens[k].index).sum()
    }

    /// All monomials of weight `w`, ascending.
    pub fn basis(&self, w: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut e = vec![0u16; self.ngens()];
        self.basis_rec(0, w, &mut e, &mut out);
        for m in &mut out {
            m.w = w;
        }
        out.sort();
        out
    }

    fn basis_rec(&self, k: usize, rest: u32, e: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if k == self.ngens() {
            if rest == 0 {
                out.push(Mono { w: 0, e: e.clone() });
            }
            return;
        }
        let wt = self.gens[k].index;
        let mut p = 0u32;
        while p * wt <= rest {
            e[k] = p as u16;
            self.basis_rec(k + 1, rest - p * wt, e, out);
            p += 1;
        }
        e[k] = 0;
    }

    /// Concatenation of monomials from the factor rings of a product ring.
    pub fn concat(&self, parts: &[&Mono]) -> Mono {
        let mut e = Vec::with_capacity(self.ngens());
        let mut w = 0;
        for p in parts {
            e.extend_from_slice(&p.e);
            w += p.w;
        }
        debug_assert_eq!(e.len(), self.ngens());
        Mono { w, e }
    }

    /// Splits a product-ring monomial into its factor monomials.
    pub fn split(&self, m: &Mono) -> Vec<Mono> {
        (0..self.num_factors())
            .map(|f| {
                let r = self.factor_range(f);
                let e = m.e[r.clone()].to_vec();
                let w = r.map(|k| m.e[k] as u32 * self.gens[k].index).sum();
                Mono { w, e }
            })
            .collect()
    }

    /// Canonical string such as `c[v,2]^3*c[w,1]`; factors of a product ring
    /// are tagged `c1[..]`, `c2[..]`.
    pub fn mono_string(&self, q: &Quiver, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (k, &p) in m.e.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let g = self.gens[k];
            let tag = if self.num_factors() == 1 { String::new() } else { (g.factor + 1).to_string() };
            let mut s = format!("c{tag}[{},{}]", q.vertex_id(g.vertex), g.index);
            if p > 1 {
                s.push_str(&format!("^{p}"));
            }
            parts.push(s);
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector with cached weight; ordered by weight, then exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub w: u32,
    pub e: Vec<u16>,
}

impl Mono {
    pub fn mul(&self, other: &Mono) -> Mono {
        Mono { w: self.w + other.w, e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect() }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        if other.w > self.w {
            return None;
        }
        let mut e = Vec::with_capacity(self.e.len());
        for (a, b) in self.e.iter().zip(&other.e) {
            if b > a {
                return None;
            }
            e.push(a - b);
        }
        Some(Mono { w: self.w - other.w, e })
    }

    pub fn is_one(&self) -> bool {
        self.w == 0
    }
}

/// Sparse polynomial; the ring is implied by context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Rat) -> Self {
        Self::from_mono(ring.one(), c)
    }

    pub fn from_mono(m: Mono, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, k: &Rat) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: HashMap<Mono, Rat> = HashMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                *acc.entry(a.mul(b)).or_insert_with(Rat::zero) += x * y;
            }
        }
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, ring: &Ring, k: u32) -> Poly {
        let mut out = Poly::constant(ring, Rat::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Part of weight exactly `w`.
    pub fn homogeneous(&self, w: u32) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| m.w == w).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn to_string(&self, ring: &Ring, q: &Quiver) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({})*{}", rational::fmt(c), ring.mono_string(q, m)))
            .collect();
        parts.join(" + ")
    }
}

/// Algebra map `source -> target` fixed by generator images.
#[derive(Clone, Debug)]
pub struct RingMap {
    pub source: Arc<Ring>,
    pub target: Arc<Ring>,
    pub images: Vec<Poly>,
}

impl RingMap {
    pub fn apply_mono(&self, m: &Mono) -> Poly {
        let mut out = Poly::constant(&self.target, Rat::one());
        for (k, &p) in m.e.iter().enumerate() {
            for _ in 0..p {
                out = out.mul(&self.images[k]);
            }
        }
        out
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            out.add_scaled(&self.apply_mono(m), c);
        }
        out
    }
}

/// Algebra map into `target[z]`, truncated at `z^zmax`. `images[k][j]` is the
/// `z^j` coefficient of the image of generator `k`.
#[derive(Clone, Debug)]
pub struct ZRingMap {
    pub source: Arc<Ring>,
    pub target: Arc<Ring>,
    pub images: Vec<Vec<Poly>>,
}

pub type ZSeries = Vec<Poly>;

pub fn zseries_mul(a: &ZSeries, b: &ZSeries, zmax: usize) -> ZSeries {
    let mut out = vec![Poly::zero(); zmax + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j > zmax || y.is_zero() {
                continue;
            }
            let prod = x.mul(y);
            out[i + j].add_assign(&prod);
        }
    }
    out
}

impl ZRingMap {
    pub fn apply_mono(&self, m: &Mono, zmax: usize) -> ZSeries {
        let mut out = vec![Poly::zero(); zmax + 1];
        out[0] = Poly::constant(&self.target, Rat::one());
        for (k, &p) in m.e.iter().enumerate() {
            for _ in 0..p {
                out = zseries_mul(&out, &self.images[k], zmax);
            }
        }
        out
    }

    pub fn apply(&self, p: &Poly, zmax: usize) -> ZSeries {
        let mut out = vec![Poly::zero(); zmax + 1];
        for (m, c) in &p.terms {
            for (j, s) in self.apply_mono(m, zmax).into_iter().enumerate() {
                out[j].add_scaled(&s, c);
            }
        }
        out
    }
}

/// Convenience: integer constant polynomial.
pub fn int_poly(ring: &Ring, k: i64) -> Poly {
    Poly::constant(ring, rational::int(k))
}
