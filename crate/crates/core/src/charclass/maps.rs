use std::sync::Arc;

use num_traits::One;

use crate::error::Result;
use crate::quiver::{DimVector, QuiverMorphism};
use crate::rational::{self, Rat};

use super::chern::{top_chern, Atom, KExpr, Taut};
use super::ring::{Poly, Ring, RingMap, ZRingMap};

/// `Φ*: H^*(M_{d+e}) → H^*(M_d) ⊗ H^*(M_e)`, Whitney on every `c_i(V_v)`.
pub fn phi_pullback(d: &DimVector, e: &DimVector) -> RingMap {
    let source = Arc::new(Ring::single(&(d + e)));
    let target = Arc::new(Ring::pair(d, e));
    let images = source
        .gens
        .iter()
        .map(|g| whitney(&target, &[0, 1], g.vertex, g.index))
        .collect();
    RingMap { source, target, images }
}

/// `c_i` of `⊕_f V_{vertex}` on the listed factors.
fn whitney(ring: &Ring, factors: &[usize], vertex: usize, i: u32) -> Poly {
    whitney_terms(ring, &factors.iter().map(|&f| (f, vertex)).collect::<Vec<_>>(), i)
}

fn whitney_terms(ring: &Ring, summands: &[(usize, usize)], i: u32) -> Poly {
    let mut c = vec![Poly::constant(ring, Rat::one())];
    for &(f, v) in summands {
        let r = ring.rank(f, v).max(0) as u32;
        let mut next = vec![Poly::zero(); c.len() + r as usize];
        for (a, ca) in c.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for b in 0..=r {
                next[a + b as usize].add_assign(&ca.mul(&ring.chern(f, v, b)));
            }
        }
        c = next;
    }
    c.get(i as usize).cloned().unwrap_or_else(Poly::zero)
}

/// `Ψ*` acting on one factor of `ring` (identity on the others):
/// `c_i ↦ Σ_j C(r−i+j, j) z^j c_{i−j}`.
pub fn psi_on_factor(ring: &Arc<Ring>, factor: usize) -> ZRingMap {
    let images = ring
        .gens
        .iter()
        .map(|g| {
            let mono = Poly::from_mono(ring.gen_mono(ring.gen_index(g.factor, g.vertex, g.index).unwrap()), Rat::one());
            if g.factor != factor {
                return vec![mono];
            }
            let r = ring.rank(g.factor, g.vertex);
            let i = g.index as i64;
            (0..=i)
                .map(|j| {
                    ring.chern(g.factor, g.vertex, (i - j) as u32)
                        .scale(&rational::binom(r - i + j, j))
                })
                .collect()
        })
        .collect();
    ZRingMap { source: ring.clone(), target: ring.clone(), images }
}

pub fn psi_coaction(d: &DimVector) -> ZRingMap {
    psi_on_factor(&Arc::new(Ring::single(d)), 0)
}

/// `(Ψ* ⊗ id) ∘ Φ*` as one map `H^*(M_{d+e}) → (H^*(M_d) ⊗ H^*(M_e))[z]`.
pub fn psi_phi(d: &DimVector, e: &DimVector) -> ZRingMap {
    let phi = phi_pullback(d, e);
    let psi = psi_on_factor(&phi.target, 0);
    let zmax = d.0.iter().map(|&x| x.max(0) as usize).max().unwrap_or(0);
    let images = phi.images.iter().map(|p| psi.apply(p, zmax)).collect();
    ZRingMap { source: phi.source.clone(), target: phi.target.clone(), images }
}

/// The `z¹` part of `Ψ*`, a derivation: `c_i ↦ (r−i+1) c_{i−1}`.
pub fn psi1(ring: &Ring, p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in &p.terms {
        for (k, &e) in m.e.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let g = ring.gens[k];
            let r = ring.rank(g.factor, g.vertex);
            let coeff = c * rational::int(e as i64 * (r - g.index as i64 + 1));
            let mut rest = m.clone();
            rest.e[k] -= 1;
            rest.w -= g.index;
            let lower = ring.chern(g.factor, g.vertex, g.index - 1);
            out.add_scaled(&Poly::from_mono(rest, Rat::one()).mul(&lower), &coeff);
        }
    }
    out
}

/// `σ*: H^*(M'_{λ_*d}) → H^*(M_d)`, sending `c_i(V'_{v'})` to `c_i(⊕_{λ(v)=v'} V_v)`.
pub fn sigma_pullback(lambda: &QuiverMorphism, d: &DimVector) -> RingMap {
    let source = Arc::new(Ring::single(&lambda.pushforward(d)));
    let target = Arc::new(Ring::single(d));
    let images = source
        .gens
        .iter()
        .map(|g| {
            let summands: Vec<(usize, usize)> = (0..d.len())
                .filter(|&v| lambda.vertex_map[v] == g.vertex)
                .map(|v| (0, v))
                .collect();
            whitney_terms(&target, &summands, g.index)
        })
        .collect();
    RingMap { source, target, images }
}

/// `G = ⊕_{v≠w, λ(v)=λ(w)} V_v*⊗V_w ⊕ ⊕_{deleted e} V_{t(e)}*⊗V_{h(e)}`.
pub fn g_kexpr(lambda: &QuiverMorphism) -> KExpr {
    let t = |v: usize, dual: bool| Taut { factor: 0, vertex: v, dual };
    let mut x = KExpr::default();
    for (v, w) in lambda.collapsed_pairs() {
        x.push(1, Atom(vec![t(v, true), t(w, false)]));
    }
    for k in lambda.deleted_edges() {
        let e = &lambda.source.edges()[k];
        x.push(1, Atom(vec![t(e.tail, true), t(e.head, false)]));
    }
    x
}

pub fn g_top_class(lambda: &QuiverMorphism, d: &DimVector) -> Result<Poly> {
    top_chern(&Ring::single(d), &g_kexpr(lambda))
}

/// Series identity `z ↦ z₁ + z₂` helper: the `z₁^a z₂^b` part of `Ψ(Ψ(γ))`.
pub fn psi_twice(d: &DimVector, p: &Poly, zmax: usize) -> Vec<Vec<Poly>> {
    let psi = psi_coaction(d);
    let first = psi.apply(p, zmax);
    first
        .iter()
        .map(|coef| psi.apply(coef, zmax))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::chern::chern_virtual;
    use crate::quiver::examples::*;

    fn dv(x: &[i64]) -> DimVector {
        DimVector(x.to_vec())
    }

    #[test]
    fn phi_examples() {
        let (d, e) = (dv(&[1, 2]), dv(&[2, 1]));
        let phi = phi_pullback(&d, &e);
        let s = &phi.source;
        let t = &phi.target;
        let c1 = s.chern(0, 0, 1);
        let mut expect = t.chern(0, 0, 1);
        expect.add_assign(&t.chern(1, 0, 1));
        assert_eq!(phi.apply(&c1), expect);
        let one = Poly::constant(s, Rat::one());
        assert_eq!(phi.apply(&one), Poly::constant(t, Rat::one()));
        let top = s.chern(0, 1, 3);
        assert_eq!(phi.apply(&top), t.chern(0, 1, 2).mul(&t.chern(1, 1, 1)));
    }

    #[test]
    fn phi_coassociative() {
        let (a, b, c) = (dv(&[1, 1]), dv(&[1, 0]), dv(&[0, 2]));
        let total = &(&a + &b) + &c;
        let big = Ring::single(&total);
        let triple = Arc::new(Ring::new(vec![a.clone(), b.clone(), c.clone()]));
        // (Φ*⊗id)∘Φ* and (id⊗Φ*)∘Φ*, both landing in the triple ring.
        let left = |p: &Poly| {
            let outer = phi_pullback(&(&a + &b), &c).apply(p);
            let inner = phi_pullback(&a, &b);
            lift(&outer, &inner, 0, &triple)
        };
        let right = |p: &Poly| {
            let outer = phi_pullback(&a, &(&b + &c)).apply(p);
            let inner = phi_pullback(&b, &c);
            lift(&outer, &inner, 1, &triple)
        };
        for w in 0..=4 {
            for m in big.basis(w) {
                let p = Poly::from_mono(m, Rat::one());
                assert_eq!(left(&p), right(&p));
            }
        }
    }

    /// Applies `inner` to factor `at` of a two-factor polynomial, producing a
    /// three-factor one.
    fn lift(p: &Poly, inner: &RingMap, at: usize, triple: &Ring) -> Poly {
        let pair = Ring::new(if at == 0 {
            vec![inner.source.dims[0].clone(), triple.dims[2].clone()]
        } else {
            vec![triple.dims[0].clone(), inner.source.dims[0].clone()]
        });
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let parts = pair.split(m);
            let img = inner.apply_mono(&parts[at]);
            let other = &parts[1 - at];
            for (im, ic) in &img.terms {
                let mono = if at == 0 { triple.concat(&[im, other]) } else { triple.concat(&[other, im]) };
                out.add_term(mono, c * ic);
            }
        }
        out
    }

    #[test]
    fn psi_examples() {
        let d = dv(&[1, 3]);
        let psi = psi_coaction(&d);
        let r = &psi.source;
        let s = psi.apply(&r.chern(0, 0, 1), 2);
        assert_eq!(s[0], r.chern(0, 0, 1));
        assert_eq!(s[1], Poly::constant(r, Rat::one()));
        let s = psi.apply(&r.chern(0, 1, 1), 2);
        assert_eq!(s[1], Poly::constant(r, rational::int(3)));
        let s = psi.apply(&Poly::constant(r, Rat::one()), 3);
        assert!(s[1..].iter().all(Poly::is_zero));
    }

    #[test]
    fn psi_is_comodule_map() {
        let d = dv(&[2, 2]);
        let ring = Ring::single(&d);
        let psi = psi_coaction(&d);
        let zmax = 4;
        for w in 0..=4 {
            for m in ring.basis(w) {
                let p = Poly::from_mono(m, Rat::one());
                let once = psi.apply(&p, 2 * zmax);
                assert_eq!(once[0], p);
                let twice = psi_twice(&d, &p, zmax);
                for a in 0..=zmax {
                    for b in 0..=zmax {
                        let expect = once[a + b].scale(&rational::binom((a + b) as i64, a as i64));
                        assert_eq!(twice[a][b], expect, "{a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn psi1_is_z1_part() {
        let d = dv(&[2, 3]);
        let ring = Ring::single(&d);
        let psi = psi_coaction(&d);
        for w in 0..=5 {
            for m in ring.basis(w) {
                let p = Poly::from_mono(m, Rat::one());
                assert_eq!(psi1(&ring, &p), psi.apply(&p, 1)[1]);
            }
        }
    }

    #[test]
    fn theta_is_additive_under_phi() {
        // (Φ×id)*Θ_{a+b,c} = Θ_{a,c} ⊕ Θ_{b,c} on M_a×M_b×M_c.
        let q = kronecker(2);
        let theta = crate::charclass::chern::theta_kexpr(&q);
        let (a, b, c) = (dv(&[1, 0]), dv(&[1, 1]), dv(&[0, 1]));
        let triple = Ring::new(vec![a.clone(), b.clone(), c.clone()]);
        let n = 4;
        let pair = Ring::pair(&(&a + &b), &c);
        let lhs_pair = chern_virtual(&pair, &theta, n);
        let inner = phi_pullback(&a, &b);
        let mut rhs_k = theta.permute_factors(&[0, 2]);
        rhs_k = rhs_k.add(&theta.permute_factors(&[1, 2]));
        let rhs = chern_virtual(&triple, &rhs_k, n);
        for k in 0..=n {
            assert_eq!(lift(&lhs_pair[k], &inner, 0, &triple), rhs[k]);
        }
    }

    #[test]
    fn g_top_examples() {
        let q = a2();
        let id = QuiverMorphism::identity(&q);
        assert_eq!(g_top_class(&id, &dv(&[1, 1])).unwrap(), Poly::constant(&Ring::single(&dv(&[1, 1])), Rat::one()));
        let del = QuiverMorphism::edge_deletion(&q, &["e1"]).unwrap();
        let ring = Ring::single(&dv(&[1, 1]));
        let g = g_top_class(&del, &dv(&[1, 1])).unwrap();
        assert_eq!(g, ring.chern(0, 1, 1).sub(&ring.chern(0, 0, 1)));
        assert!(psi1(&ring, &g).is_zero());
        // Binarization of K₂ at (2,1): G includes both collapsed orderings.
        let (_, lam, dt) = crate::quiver::binarize_quiver(&kronecker(2), &dv(&[2, 1])).unwrap();
        let g = g_top_class(&lam, &dt).unwrap();
        let ring = Ring::single(&dt);
        assert_eq!(g.terms.keys().next().unwrap().w as i64, lam.xi(&dt, &dt));
        assert!(psi1(&ring, &g).is_zero());
    }

    #[test]
    fn sigma_identity_and_collapse() {
        let q = a2();
        let d = dv(&[1, 1]);
        let id = QuiverMorphism::identity(&q);
        let s = sigma_pullback(&id, &d);
        for (k, img) in s.images.iter().enumerate() {
            assert_eq!(*img, Poly::from_mono(s.target.gen_mono(k), Rat::one()));
        }
    }
}
