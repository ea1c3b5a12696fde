//! Samplers and helpers shared by the integration targets.
#![allow(dead_code)]

use quiverwc::quiver::{sub_vectors, DimVector, Quiver};
use quiverwc::rational::{self, Rat};
use quiverwc::vertexalg::{HomologyClass, VertexAlgebra};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn classes_up_to(q: &Quiver, k: i64) -> Vec<DimVector> {
    sub_vectors(&DimVector(vec![k; q.num_vertices()]))
        .into_iter()
        .filter(|d| !d.is_zero() && d.norm() <= k)
        .collect()
}

pub fn random_dim(q: &Quiver, rng: &mut ChaCha8Rng, max: i64) -> DimVector {
    loop {
        let d = DimVector((0..q.num_vertices()).map(|_| rng.gen_range(0..=max)).collect());
        if !d.is_zero() && d.norm() <= max {
            return d;
        }
    }
}

/// Nonzero class at `d` with random weight in `0..=wmax` and small coefficients.
pub fn random_class(va: &VertexAlgebra, rng: &mut ChaCha8Rng, d: &DimVector, wmax: i64) -> HomologyClass {
    let w = rng.gen_range(0..=wmax);
    let basis = va.ring(std::slice::from_ref(d)).basis(w as u32);
    loop {
        let mut u = HomologyClass::zero(vec![d.clone()], w);
        for m in &basis {
            u.add_term(m.clone(), rational::int(rng.gen_range(-2..=2)));
        }
        if !u.is_zero() {
            return u;
        }
    }
}

/// A representative of a random nonzero element of the quotient at `d`, with
/// a random D-image added so that representatives are not canonical.
pub fn random_pl(va: &VertexAlgebra, rng: &mut ChaCha8Rng, d: &DimVector, wmax: i64) -> Option<HomologyClass> {
    let weights: Vec<i64> = (0..=wmax).filter(|&w| !va.weight0_basis(d, w).is_empty()).collect();
    if weights.is_empty() {
        return None;
    }
    let w = weights[rng.gen_range(0..weights.len())];
    let k = va.weight0_basis(d, w).len();
    let mut coords: Vec<Rat> = (0..k).map(|_| rational::int(rng.gen_range(-2..=2))).collect();
    if coords.iter().all(|c| *c == rational::zero()) {
        coords[0] = rational::one();
    }
    let mut u = va.pl_from_canonical(d, w, &coords).unwrap().rep;
    if w > 0 {
        let noise = va.divided_d(&random_class(va, rng, d, 0), w as u32);
        if !noise.is_zero() && noise.weight == w {
            u.add_scaled(&noise, &rational::one());
        }
    }
    Some(u)
}

pub fn add_into(acc: &mut Option<HomologyClass>, x: &HomologyClass, c: &Rat) {
    match acc {
        Some(a) if !a.is_zero() => {
            if !x.is_zero() {
                a.add_scaled(x, c)
            }
        }
        _ => *acc = Some(x.scale(c)),
    }
}

/// `a − b`, tolerating zero classes of a different weight.
pub fn difference(a: &HomologyClass, b: &HomologyClass) -> HomologyClass {
    let mut acc = Some(a.clone());
    add_into(&mut acc, b, &rational::int(-1));
    acc.unwrap()
}

/// Lowest power of `z` that can occur in `Y(u, z)v`, negated.
pub fn pole_order(va: &VertexAlgebra, u: &HomologyClass, v: &HomologyClass) -> i64 {
    let chi = va.quiver().sym_euler_form(u.dim(), v.dim());
    (u.weight + v.weight - chi).max(0)
}

/// Coefficient of `z^a w^b` in `(z − w)^N Y(u, z) Y(v, w) x`, or with the
/// fields applied in the opposite order when `reversed`.
pub fn locality_coefficient(
    va: &VertexAlgebra,
    (u, v, x): (&HomologyClass, &HomologyClass, &HomologyClass),
    n: i64,
    (a, b): (i64, i64),
    reversed: bool,
) -> HomologyClass {
    let mut acc = None;
    for k in 0..=n {
        let c = rational::binom(n, k) * rational::sign(k);
        let term = if reversed {
            va.y_coefficient(v, &va.y_coefficient(u, x, a - n + k), b - k)
        } else {
            va.y_coefficient(u, &va.y_coefficient(v, x, b - k), a - n + k)
        };
        add_into(&mut acc, &term, &c);
    }
    acc.unwrap()
}

/// Checks weak commutativity on an 8×8 window of coefficients. Returns
/// `(holds, nonzero coefficients seen, fields fail to commute outright)`.
pub fn weak_commutativity(va: &VertexAlgebra, u: &HomologyClass, v: &HomologyClass, x: &HomologyClass) -> (bool, usize, bool) {
    let n = pole_order(va, u, v);
    let (lo_a, lo_b) = (-pole_order(va, u, x) - 4, -pole_order(va, v, x) - 4);
    let (mut nonzero, mut noncommuting) = (0, false);
    for a in lo_a..lo_a + 8 {
        for b in lo_b..lo_b + 8 {
            let l = locality_coefficient(va, (u, v, x), n, (a, b), false);
            let r = locality_coefficient(va, (u, v, x), n, (a, b), true);
            if l.coeffs != r.coeffs {
                return (false, nonzero, noncommuting);
            }
            nonzero += usize::from(!l.is_zero());
            if n > 0 {
                let l = locality_coefficient(va, (u, v, x), 0, (a, b), false);
                let r = locality_coefficient(va, (u, v, x), 0, (a, b), true);
                noncommuting |= l.coeffs != r.coeffs;
            }
        }
    }
    (true, nonzero, noncommuting)
}

/// `[u,v] = −[v,u]` and `[[u,v],x] = [u,[v,x]] − [v,[u,x]]` modulo D.
/// Returns `(antisymmetry, jacobi, [[u,v],x] nonzero)`.
pub fn lie_axioms(va: &VertexAlgebra, u: &HomologyClass, v: &HomologyClass, x: &HomologyClass) -> (bool, bool, bool) {
    use quiverwc::vertexalg::PlClass;
    let br = |a: &HomologyClass, b: &HomologyClass| va.lie_bracket(a, b).rep;
    let uv = br(u, v);
    let anti = va
        .pl_equal(&PlClass::new(uv.clone()), &PlClass::new(br(v, u).scale(&rational::int(-1))))
        .unwrap();
    let lhs = PlClass::new(br(&uv, x));
    let rhs = difference(&br(u, &br(v, x)), &br(v, &br(u, x)));
    let jacobi = va.pl_equal(&lhs, &PlClass::new(rhs)).unwrap();
    (anti, jacobi, !va.pl_is_zero(&lhs))
}
