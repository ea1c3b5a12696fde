//! Homology of quiver moduli as the graded dual of the Chern rings, the vertex
//! algebra operations on it, and the Lie bracket on the projective-linear
//! quotient.

mod class;

pub use class::HomologyClass;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::charclass::{
    chern_virtual, phi_pullback, psi1, psi_coaction, psi_phi, theta_kexpr, KExpr, Mono, Poly,
    Ring, RingMap, ZRingMap, ZSeries,
};
use crate::error::{Error, Result};
use crate::linalg::Rref;
use crate::memo::Memo;
use crate::quiver::{DimVector, Quiver};
use crate::rational::{self, Rat};

/// Tag identifying the canonical coordinate convention.
pub const CANONICAL_BASIS: &str = "weight0-rref-gradedlex-v1";

/// A homology class regarded modulo the image of `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlClass {
    pub rep: HomologyClass,
}

impl PlClass {
    pub fn new(rep: HomologyClass) -> Self {
        PlClass { rep }
    }

    pub fn zero(d: &DimVector, weight: i64) -> Self {
        PlClass { rep: HomologyClass::zero(vec![d.clone()], weight) }
    }

    pub fn dim(&self) -> &DimVector {
        self.rep.dim()
    }

    pub fn weight(&self) -> i64 {
        self.rep.weight
    }
}

/// Weight-`w` data for one component: the monomial basis, the span of
/// `D(H_{2w−2})` in it, and the weight-0 cohomology basis.
#[derive(Debug)]
pub struct GradedPiece {
    pub monos: Vec<Mono>,
    pub d_image: Rref,
    pub weight0: Vec<Poly>,
}

/// Images of a monomial basis under the restricted pullback, as series in z.
type SeriesImages = Arc<Vec<(Mono, ZSeries)>>;

/// The vertex algebra of a fixed quiver, with caches for everything that only
/// depends on dimension vectors and degrees.
#[derive(Debug)]
pub struct VertexAlgebra {
    quiver: Quiver,
    theta: KExpr,
    rings: Memo<Vec<DimVector>, Arc<Ring>>,
    theta_chern: Memo<(DimVector, DimVector), Arc<Vec<Poly>>>,
    psi_phi_maps: Memo<(DimVector, DimVector), Arc<ZRingMap>>,
    psi_phi_images: Memo<(DimVector, DimVector, i64), SeriesImages>,
    phi_maps: Memo<(DimVector, DimVector), Arc<RingMap>>,
    psi_maps: Memo<DimVector, Arc<ZRingMap>>,
    pieces: Memo<(DimVector, i64), Arc<GradedPiece>>,
}

impl VertexAlgebra {
    pub fn new(quiver: &Quiver) -> Self {
        VertexAlgebra {
            quiver: quiver.clone(),
            theta: theta_kexpr(quiver),
            rings: Memo::default(),
            theta_chern: Memo::default(),
            psi_phi_maps: Memo::default(),
            psi_phi_images: Memo::default(),
            phi_maps: Memo::default(),
            psi_maps: Memo::default(),
            pieces: Memo::default(),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn ring(&self, factors: &[DimVector]) -> Arc<Ring> {
        self.rings.get_or_insert_with(&factors.to_vec(), || Arc::new(Ring::new(factors.to_vec())))
    }

    pub fn vacuum(&self) -> HomologyClass {
        HomologyClass::vacuum(self.quiver.num_vertices())
    }

    pub fn unit_class(&self, d: &DimVector) -> HomologyClass {
        HomologyClass::unit(d)
    }

    /// `c_0..=c_n` of `Θ` on `M_d × M_e`.
    pub fn theta_chern(&self, d: &DimVector, e: &DimVector, n: usize) -> Arc<Vec<Poly>> {
        let key = (d.clone(), e.clone());
        if let Some(c) = self.theta_chern.get(&key) {
            if c.len() > n {
                return c;
            }
        }
        let ring = self.ring(&[d.clone(), e.clone()]);
        let c = Arc::new(chern_virtual(&ring, &self.theta, n));
        self.theta_chern.put(key, c.clone());
        c
    }

    fn phi(&self, d: &DimVector, e: &DimVector) -> Arc<RingMap> {
        self.phi_maps.get_or_insert_with(&(d.clone(), e.clone()), || Arc::new(phi_pullback(d, e)))
    }

    fn psi(&self, d: &DimVector) -> Arc<ZRingMap> {
        self.psi_maps.get_or_insert_with(d, || Arc::new(psi_coaction(d)))
    }

    /// `(Ψ*⊗id)Φ*(γ)` for every weight-`w` monomial `γ` of `M_{d+e}`.
    fn psi_phi_images(&self, d: &DimVector, e: &DimVector, w: i64) -> SeriesImages {
        self.psi_phi_images.get_or_insert_with(&(d.clone(), e.clone(), w), || {
            let map = self
                .psi_phi_maps
                .get_or_insert_with(&(d.clone(), e.clone()), || Arc::new(psi_phi(d, e)));
            let ring = self.ring(&[d + e]);
            let out = ring
                .basis(w as u32)
                .into_iter()
                .map(|g| {
                    let s = map.apply_mono(&g, w as usize);
                    (g, s)
                })
                .collect();
            Arc::new(out)
        })
    }

    pub fn kunneth(&self, u: &HomologyClass, v: &HomologyClass) -> HomologyClass {
        u.kunneth(v)
    }

    /// `H_*(Φ)`: `(Φ_* w)(γ) = w(Φ*γ)`.
    pub fn phi_pushforward(&self, w: &HomologyClass) -> HomologyClass {
        assert_eq!(w.factors.len(), 2);
        let (d, e) = (&w.factors[0], &w.factors[1]);
        let sum = d + e;
        let mut out = HomologyClass::zero(vec![sum.clone()], w.weight);
        if w.is_zero() {
            return out;
        }
        let phi = self.phi(d, e);
        for g in self.ring(&[sum]).basis(w.weight as u32) {
            let val = w.pair(&phi.apply_mono(&g));
            out.add_term(g, val);
        }
        out
    }

    /// `D^{(j)} u`, the `z^j` part of `e^{zD} u`.
    pub fn divided_d(&self, u: &HomologyClass, j: u32) -> HomologyClass {
        let d = u.dim().clone();
        let mut out = HomologyClass::zero(vec![d.clone()], u.weight + j as i64);
        if u.is_zero() {
            return out;
        }
        let psi = self.psi(&d);
        for g in self.ring(&[d]).basis(out.weight as u32) {
            let s = psi.apply_mono(&g, j as usize);
            let val = u.pair(&s[j as usize]);
            out.add_term(g, val);
        }
        out
    }

    /// The `z^p` coefficient of `Y(u, z) v`.
    pub fn y_coefficient(&self, u: &HomologyClass, v: &HomologyClass, p: i64) -> HomologyClass {
        let q = &self.quiver;
        let (alpha, beta) = (u.dim(), v.dim());
        let chi = q.sym_euler_form(alpha, beta);
        let total = alpha + beta;
        let w_out = u.weight + v.weight + p - chi;
        let mut out = HomologyClass::zero(vec![total], w_out);
        if w_out < 0 || u.is_zero() || v.is_zero() {
            return out;
        }
        let mut sign = rational::int(q.sign_epsilon(alpha, beta));
        if (u.degree() * q.sym_euler_form(beta, beta)) % 2 != 0 {
            sign = -sign;
        }
        let wuv = (u.weight + v.weight) as usize;
        let uv = u.kunneth(v);
        let chern = self.theta_chern(alpha, beta, wuv);
        let images = self.psi_phi_images(alpha, beta, w_out);
        for i in 0.max(chi - p)..=wuv as i64 {
            let j = (p - chi + i) as usize;
            let x = uv.cap(&chern[i as usize], i as u32);
            if x.is_zero() {
                continue;
            }
            for (g, s) in images.iter() {
                if j < s.len() {
                    let val = x.pair(&s[j]);
                    if !val.is_zero() {
                        out.add_term(g.clone(), val * &sign);
                    }
                }
            }
        }
        out
    }

    /// Nonzero coefficients of `Y(u, z) v` for `lo <= p <= hi`.
    pub fn field_y(
        &self,
        u: &HomologyClass,
        v: &HomologyClass,
        lo: i64,
        hi: i64,
    ) -> BTreeMap<i64, HomologyClass> {
        (lo..=hi)
            .map(|p| (p, self.y_coefficient(u, v, p)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// `[u, v] = u₀(v) mod D`.
    pub fn lie_bracket(&self, u: &HomologyClass, v: &HomologyClass) -> PlClass {
        PlClass::new(self.y_coefficient(u, v, -1))
    }

    /// Bracket of two pl classes (well defined on the quotient).
    pub fn bracket(&self, u: &PlClass, v: &PlClass) -> PlClass {
        self.lie_bracket(&u.rep, &v.rep)
    }

    /// Monomial basis, `D`-image and weight-0 basis of `H_{2w}(M_d)`.
    pub fn piece(&self, d: &DimVector, w: i64) -> Arc<GradedPiece> {
        self.pieces.get_or_insert_with(&(d.clone(), w), || {
            let ring = self.ring(std::slice::from_ref(d));
            let monos = if w < 0 { Vec::new() } else { ring.basis(w as u32) };
            // Rows indexed by weight-(w−1) monomials m: γ ↦ coeff_m(ψ₁ γ).
            let lower = if w < 1 { Vec::new() } else { ring.basis(w as u32 - 1) };
            let index: BTreeMap<&Mono, usize> = lower.iter().enumerate().map(|(k, m)| (m, k)).collect();
            let mut rows = vec![vec![Rat::zero(); monos.len()]; lower.len()];
            for (col, g) in monos.iter().enumerate() {
                let img = psi1(&ring, &Poly::from_mono(g.clone(), Rat::one()));
                for (m, c) in &img.terms {
                    rows[index[m]][col] = c.clone();
                }
            }
            let d_image = Rref::new(monos.len(), rows);
            let weight0 = d_image
                .nullspace()
                .rows
                .iter()
                .map(|vec| {
                    let mut p = Poly::zero();
                    for (m, c) in monos.iter().zip(vec) {
                        p.add_term(m.clone(), c.clone());
                    }
                    p
                })
                .collect();
            Arc::new(GradedPiece { monos, d_image, weight0 })
        })
    }

    pub fn weight0_basis(&self, d: &DimVector, w: i64) -> Vec<Poly> {
        self.piece(d, w).weight0.clone()
    }

    /// Pairings of a representative with the weight-0 basis.
    pub fn pl_canonical(&self, u: &PlClass) -> Vec<Rat> {
        self.piece(u.dim(), u.weight()).weight0.iter().map(|b| u.rep.pair(b)).collect()
    }

    /// Decides `u − v ∈ D(H)` by row reduction.
    pub fn pl_equal(&self, u: &PlClass, v: &PlClass) -> Result<bool> {
        if u.dim() != v.dim() {
            return Err(Error::mismatch(format!("components {:?} and {:?}", u.dim().0, v.dim().0)));
        }
        if u.weight() != v.weight() {
            if u.rep.is_zero() || v.rep.is_zero() {
                let nz = if u.rep.is_zero() { v } else { u };
                return Ok(self.pl_is_zero(nz));
            }
            return Err(Error::mismatch(format!("degrees {} and {}", u.rep.degree(), v.rep.degree())));
        }
        Ok(self.pl_is_zero(&PlClass::new(u.rep.sub(&v.rep))))
    }

    pub fn pl_is_zero(&self, u: &PlClass) -> bool {
        if u.rep.is_zero() {
            return true;
        }
        let piece = self.piece(u.dim(), u.weight());
        piece.d_image.contains(&u.rep.to_vector(&piece.monos))
    }

    /// `Ȟ`-degree `n − 2 + χ(d,d)`.
    pub fn check_degree(&self, u: &PlClass) -> i64 {
        u.rep.degree() - 2 + self.quiver.sym_euler_form(u.dim(), u.dim())
    }

    /// `Ĥ`-degree `n + χ(d,d)`.
    pub fn hat_degree(&self, u: &HomologyClass) -> i64 {
        u.degree() + self.quiver.sym_euler_form(u.dim(), u.dim())
    }

    pub fn pl_to_json(&self, u: &PlClass) -> Value {
        let canonical: Vec<Value> = self
            .pl_canonical(u)
            .iter()
            .enumerate()
            .map(|(k, x)| json!({"basis_index": k, "value": rational::fmt(x)}))
            .collect();
        json!({
            "dimvec": self.quiver.dimvec_to_value(u.dim()),
            "degree": u.rep.degree(),
            "canonical": canonical,
            "basis": CANONICAL_BASIS,
        })
    }

    /// Rebuilds a class from its canonical coordinates: the representative is
    /// the functional dual to the weight-0 basis on a complement of `D(H)`.
    pub fn pl_from_json(&self, value: &Value) -> Result<PlClass> {
        let d = self.quiver.dimvec_from_json(&value["dimvec"].to_string())?;
        let degree = value["degree"].as_i64().ok_or_else(|| Error::input("missing degree"))?;
        if value["basis"].as_str() != Some(CANONICAL_BASIS) {
            return Err(Error::input("unknown canonical basis tag"));
        }
        if degree % 2 != 0 {
            return Err(Error::input("odd homological degree"));
        }
        let w = degree / 2;
        let piece = self.piece(&d, w);
        let mut target = vec![Rat::zero(); piece.weight0.len()];
        for item in value["canonical"].as_array().ok_or_else(|| Error::input("missing canonical"))? {
            let k = item["basis_index"].as_u64().ok_or_else(|| Error::input("bad basis_index"))? as usize;
            let x = item["value"]
                .as_str()
                .and_then(rational::parse)
                .ok_or_else(|| Error::input("bad canonical value"))?;
            if k >= target.len() {
                return Err(Error::input("basis_index out of range"));
            }
            target[k] = x;
        }
        self.pl_from_canonical(&d, w, &target)
    }

    /// Some representative with the given weight-0 pairings.
    pub fn pl_from_canonical(&self, d: &DimVector, w: i64, target: &[Rat]) -> Result<PlClass> {
        let piece = self.piece(d, w);
        // The weight-0 basis is in reduced form: its pivot monomials pair to a
        // unit matrix, so the functional supported on them realizes `target`.
        let basis = Rref::new(
            piece.monos.len(),
            piece.weight0.iter().map(|p| piece.monos.iter().map(|m| p.coeff(m)).collect()).collect(),
        );
        let mut out = HomologyClass::zero(vec![d.clone()], w);
        for (k, &col) in basis.pivots.iter().enumerate() {
            out.add_term(piece.monos[col].clone(), target[k].clone());
        }
        let check = PlClass::new(out);
        if self.pl_canonical(&check) != target {
            return Err(Error::assertion("canonical coordinates do not round-trip"));
        }
        Ok(check)
    }
}
