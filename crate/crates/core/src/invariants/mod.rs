//! Enumerative invariant classes, their wall-crossing, pushforward along quiver
//! morphisms, and the framed pair-invariant identity.

mod cache;

pub use cache::{DiskCache, CACHE_ENV};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::charclass::{g_kexpr, g_top_class, sigma_pullback, Ring};
use crate::error::{Error, Result};
use crate::linalg::Rref;
use crate::memo::Memo;
use crate::par;
use crate::quiver::{all_decompositions, decompositions, sub_vectors, DimVector, Quiver, QuiverMorphism};
use crate::rational::{self, Rat};
use crate::stability::{
    framed_slope, is_increasing, reference_increasing_slope, FramedSlope, SlopeFunction,
    WeakStability,
};
use crate::vertexalg::{HomologyClass, PlClass, VertexAlgebra};
use crate::wallcoeff::{lie_normalize, word_sum_add, Coefficients, LieWord, WordSum, DEFAULT_MAX_WORD_LEN};

/// Computed invariants for one stability condition.
#[derive(Clone, Debug)]
pub struct InvariantTable {
    pub token: String,
    pub entries: BTreeMap<DimVector, PlClass>,
}

/// Homological weight of the invariant at `d`: half of `2 − 2χ_Q(d,d)`.
pub fn invariant_weight(q: &Quiver, d: &DimVector) -> i64 {
    1 - q.euler_form(d, d)
}

/// The invariant for an increasing slope: the unit class at unit vectors and
/// zero elsewhere.
pub fn invariant_increasing(q: &Quiver, mu: &SlopeFunction, d: &DimVector) -> Result<PlClass> {
    if !is_increasing(q, mu) {
        return Err(Error::input("slope is not increasing"));
    }
    check_class(q, d)?;
    Ok(match d.as_unit() {
        Some(_) => PlClass::new(HomologyClass::unit(d)),
        None => PlClass::zero(d, invariant_weight(q, d)),
    })
}

fn check_class(q: &Quiver, d: &DimVector) -> Result<()> {
    if d.len() != q.num_vertices() {
        return Err(Error::input("dimension vector has the wrong length"));
    }
    if !d.is_class() {
        return Err(Error::input("dimension vector must be nonnegative and nonzero"));
    }
    Ok(())
}

/// Invariant computations on one acyclic quiver, with shared caches.
#[derive(Debug)]
pub struct Engine {
    va: VertexAlgebra,
    reference: SlopeFunction,
    parallel: bool,
    max_word_len: usize,
    disk: Option<DiskCache>,
    unit_words: Memo<Vec<usize>, Arc<HomologyClass>>,
}

impl Engine {
    pub fn new(q: &Quiver) -> Result<Self> {
        let reference = reference_increasing_slope(q)?;
        Self::with_reference(q, reference)
    }

    /// Uses `reference` as the increasing slope the algorithm starts from.
    pub fn with_reference(q: &Quiver, reference: SlopeFunction) -> Result<Self> {
        q.require_acyclic()?;
        if !is_increasing(q, &reference) {
            return Err(Error::input("reference slope is not increasing"));
        }
        Ok(Engine {
            va: VertexAlgebra::new(q),
            reference,
            parallel: true,
            max_word_len: DEFAULT_MAX_WORD_LEN,
            disk: None,
            unit_words: Memo::default(),
        })
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn max_word_len(mut self, n: usize) -> Self {
        self.max_word_len = n;
        self
    }

    pub fn disk_cache(mut self, cache: Option<DiskCache>) -> Self {
        self.disk = cache;
        self
    }

    pub fn quiver(&self) -> &Quiver {
        self.va.quiver()
    }

    pub fn va(&self) -> &VertexAlgebra {
        &self.va
    }

    pub fn reference(&self) -> &SlopeFunction {
        &self.reference
    }

    fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        if self.parallel {
            par::map(items, f)
        } else {
            par::map_seq(items, f)
        }
    }

    /// `[[…[1_{v₁}, 1_{v₂}], …], 1_{vₙ}]` as a representative, memoized by prefix.
    fn unit_bracket(&self, letters: &[usize]) -> Arc<HomologyClass> {
        if let Some(c) = self.unit_words.get(&letters.to_vec()) {
            return c;
        }
        let n = self.quiver().num_vertices();
        let c = if letters.len() == 1 {
            Arc::new(HomologyClass::unit(&DimVector::unit(n, letters[0])))
        } else {
            let (head, last) = letters.split_at(letters.len() - 1);
            let left = self.unit_bracket(head);
            let right = HomologyClass::unit(&DimVector::unit(n, last[0]));
            Arc::new(self.va.lie_bracket(&left, &right).rep)
        };
        self.unit_words.get_or_insert_with(&letters.to_vec(), || c)
    }

    fn cache_key(&self, tau: &dyn WeakStability, d: &DimVector) -> String {
        let dv: Vec<String> = d.0.iter().map(|x| x.to_string()).collect();
        DiskCache::key(&[
            "invariant-v1",
            &self.quiver().digest(),
            &self.reference_token(),
            &tau.token(),
            &dv.join(","),
        ])
    }

    fn reference_token(&self) -> String {
        use crate::stability::WeakStability as _;
        self.reference.token()
    }

    /// `[M_d^ss(τ)]_inv`, built from the unit classes of the reference slope.
    pub fn invariant(&self, tau: &dyn WeakStability, d: &DimVector) -> Result<PlClass> {
        let q = self.quiver();
        check_class(q, d)?;
        let w = invariant_weight(q, d);
        if w < 0 {
            return Ok(PlClass::zero(d, w));
        }
        let key = self.disk.as_ref().map(|_| self.cache_key(tau, d));
        if let (Some(disk), Some(key)) = (&self.disk, &key) {
            if let Some(v) = disk.load(key) {
                if let Ok(c) = self.va.pl_from_json(&v) {
                    return Ok(c);
                }
            }
        }
        let n = d.norm() as usize;
        if n > self.max_word_len {
            return Err(Error::input(format!(
                "|d| = {n} exceeds the word length cap {}",
                self.max_word_len
            )));
        }
        let unit = |e: &DimVector| e.as_unit().is_some();
        let tuples = decompositions(d, n, Some(&unit));
        let coeffs = Coefficients::new(&self.reference, tau);
        let us = self.map(&tuples, |t| coeffs.u(t));
        let mut words: WordSum<usize> = WordSum::new();
        for (t, u) in tuples.iter().zip(us) {
            let letters = t.iter().map(|e| e.as_unit().unwrap()).collect();
            word_sum_add(&mut words, letters, u);
        }
        let lie = lie_normalize(&words)?;
        let parts = self.map(&lie, |lw| (lw.coeff.clone(), self.unit_bracket(&lw.letters)));
        let mut out = HomologyClass::zero(vec![d.clone()], w);
        for (c, x) in parts {
            if !x.is_zero() {
                out.add_scaled(&x, &c);
            }
        }
        let out = PlClass::new(out);
        if let (Some(disk), Some(key)) = (&self.disk, &key) {
            disk.store(key, &self.va.pl_to_json(&out))?;
        }
        Ok(out)
    }

    /// Invariants at every nonzero `e <= d`.
    pub fn table(&self, tau: &dyn WeakStability, d: &DimVector) -> Result<InvariantTable> {
        let subs: Vec<DimVector> = sub_vectors(d).into_iter().filter(|e| !e.is_zero()).collect();
        let vals = par::map_seq(&subs, |e| self.invariant(tau, e));
        let mut entries = BTreeMap::new();
        for (e, v) in subs.into_iter().zip(vals) {
            entries.insert(e, v?);
        }
        Ok(InvariantTable { token: tau.token(), entries })
    }

    /// Evaluates `Σ Ũ(d₁,…,dₙ; τ, τ̃)·[[…[I(d₁), I(d₂)], …], I(dₙ)]` from a table at `τ`.
    pub fn wallcross_transform(
        &self,
        table: &InvariantTable,
        tau: &dyn WeakStability,
        tau_tilde: &dyn WeakStability,
        d: &DimVector,
    ) -> Result<PlClass> {
        let q = self.quiver();
        check_class(q, d)?;
        if table.token != tau.token() {
            return Err(Error::mismatch("table was computed for a different stability condition"));
        }
        for e in sub_vectors(d).iter().filter(|e| !e.is_zero()) {
            if !table.entries.contains_key(e) {
                return Err(Error::input(format!("table is missing the class {:?}", e.0)));
            }
        }
        let w = invariant_weight(q, d);
        if w < 0 {
            return Ok(PlClass::zero(d, w));
        }
        let live = |e: &DimVector| table.entries.get(e).is_some_and(|c| !self.va.pl_is_zero(c));
        let tuples = all_decompositions(d, Some(&live));
        let coeffs = Coefficients::new(tau, tau_tilde);
        let us = self.map(&tuples, |t| coeffs.u(t));
        let mut words: WordSum<DimVector> = WordSum::new();
        for (t, u) in tuples.into_iter().zip(us) {
            word_sum_add(&mut words, t, u);
        }
        let lie = lie_normalize(&words)?;
        let memo: Memo<Vec<DimVector>, Arc<HomologyClass>> = Memo::default();
        let parts = self.map(&lie, |lw: &LieWord<DimVector>| {
            (lw.coeff.clone(), self.class_bracket(&lw.letters, table, &memo))
        });
        let mut out = HomologyClass::zero(vec![d.clone()], w);
        for (c, x) in parts {
            if !x.is_zero() {
                out.add_scaled(&x, &c);
            }
        }
        Ok(PlClass::new(out))
    }

    fn class_bracket(
        &self,
        letters: &[DimVector],
        table: &InvariantTable,
        memo: &Memo<Vec<DimVector>, Arc<HomologyClass>>,
    ) -> Arc<HomologyClass> {
        if let Some(c) = memo.get(&letters.to_vec()) {
            return c;
        }
        let c = if letters.len() == 1 {
            Arc::new(table.entries[&letters[0]].rep.clone())
        } else {
            let (head, last) = letters.split_at(letters.len() - 1);
            let left = self.class_bracket(head, table, memo);
            Arc::new(self.va.lie_bracket(&left, &table.entries[&last[0]].rep).rep)
        };
        memo.get_or_insert_with(&letters.to_vec(), || c)
    }
}

/// `Ω^pl(u) = σ_*(u ∩ c_top(G))` for a quiver morphism.
pub fn omega_pl(lambda: &QuiverMorphism, u: &PlClass) -> Result<PlClass> {
    let d = u.dim();
    let target_d = lambda.pushforward(d);
    if target_d.is_zero() {
        return Err(Error::input("dimension vector maps to zero"));
    }
    let g = g_top_class(lambda, d)?;
    let rank = g_kexpr(lambda).rank(std::slice::from_ref(d));
    let x = u.rep.cap(&g, rank as u32);
    let mut out = HomologyClass::zero(vec![target_d.clone()], x.weight);
    if x.is_zero() {
        return Ok(PlClass::new(out));
    }
    let sigma = sigma_pullback(lambda, d);
    for m in Ring::single(&target_d).basis(x.weight as u32) {
        let val = x.pair(&sigma.apply_mono(&m));
        out.add_term(m, val);
    }
    Ok(PlClass::new(out))
}

fn factorial_product(d: &DimVector) -> Rat {
    d.0.iter().map(|&x| rational::factorial(x.max(0) as u64)).product()
}

/// Both sides of the morphism identity `Π d(v)!·Ω^pl(I_d(τ'∘λ_*)) = Π d'(v')!·I_{d'}(τ')`.
#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub lhs: PlClass,
    pub rhs: PlClass,
    pub holds: bool,
}

pub fn check_theorem52(
    source: &Engine,
    target: &Engine,
    lambda: &QuiverMorphism,
    tau_prime: Arc<dyn WeakStability>,
    d: &DimVector,
) -> Result<MorphismReport> {
    if source.quiver() != &lambda.source || target.quiver() != &lambda.target {
        return Err(Error::mismatch("engines do not match the morphism's quivers"));
    }
    let tau = crate::stability::Pullback { target: tau_prime.clone(), lambda: lambda.clone() };
    let d_prime = lambda.pushforward(d);
    let inv = source.invariant(&tau, d)?;
    let lhs = omega_pl(lambda, &inv)?.rep.scale(&factorial_product(d));
    let rhs = target.invariant(tau_prime.as_ref(), &d_prime)?.rep.scale(&factorial_product(&d_prime));
    let (lhs, rhs) = (PlClass::new(lhs), PlClass::new(rhs));
    let holds = target.va().pl_equal(&lhs, &rhs)?;
    Ok(MorphismReport { lhs, rhs, holds })
}

/// Framed invariant versus the bracket sum, plus injectivity of `[−, 1_∞]`.
#[derive(Clone, Debug)]
pub struct PairReport {
    pub framed: FramedSlope,
    pub lhs: PlClass,
    pub rhs: PlClass,
    pub holds: bool,
    pub injective: bool,
}

pub fn pair_invariant_check(
    engine: &Engine,
    mu: &SlopeFunction,
    d: &DimVector,
    framing: &[i64],
) -> Result<PairReport> {
    let q = engine.quiver();
    check_class(q, d)?;
    if framing.len() != q.num_vertices() || framing.iter().any(|&n| n <= 0) {
        return Err(Error::input("framing must be positive at every vertex"));
    }
    let fs = framed_slope(q, mu, d, 1, framing)?;
    let framed = Engine::new(&fs.quiver)?
        .parallel(engine.parallel)
        .max_word_len(engine.max_word_len.max(d.norm() as usize + 1));
    let lhs = framed.invariant(&fs.slope, &fs.class(d, 1))?;
    let inf_unit = HomologyClass::unit(&fs.class(&q.zero_vector(), 1));
    let mud = mu.eval_rat(d)?;
    let same_slope = |e: &DimVector| mu.eval_rat(e).map(|s| s == mud).unwrap_or(false);
    let mut rhs = HomologyClass::zero(vec![fs.class(d, 1)], lhs.weight());
    let mut pushed: BTreeMap<DimVector, HomologyClass> = BTreeMap::new();
    for e in sub_vectors(d).into_iter().filter(|e| !e.is_zero() && same_slope(e)) {
        let inv = engine.invariant(mu, &e)?;
        pushed.insert(e, omega_pl(&fs.inclusion, &inv)?.rep);
    }
    for n in 1..=d.norm() as usize {
        let sign = rational::sign(n as i64) / rational::factorial(n as u64);
        for t in decompositions(d, n, Some(&same_slope)) {
            let mut acc = inf_unit.clone();
            for e in &t {
                acc = framed.va().lie_bracket(&acc, &pushed[e]).rep;
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                rhs.add_scaled(&acc, &sign);
            }
        }
    }
    let rhs = PlClass::new(rhs);
    let holds = framed.va().pl_equal(&lhs, &rhs)?;
    let injective = bracket_with_framing_injective(engine, &framed, &fs, d, &inf_unit)?;
    Ok(PairReport { framed: fs, lhs, rhs, holds, injective })
}

/// Rank test: `x ↦ [i_*(x), 1_∞]` on the whole of `Ȟ₀(M_d^pl)`.
fn bracket_with_framing_injective(
    engine: &Engine,
    framed: &Engine,
    fs: &FramedSlope,
    d: &DimVector,
    inf_unit: &HomologyClass,
) -> Result<bool> {
    let w = invariant_weight(engine.quiver(), d);
    if w < 0 {
        return Ok(true);
    }
    let k = engine.va().piece(d, w).weight0.len();
    let images: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut coords = vec![Rat::zero(); k];
            coords[i] = Rat::from_integer(1.into());
            let x = engine.va().pl_from_canonical(d, w, &coords)?;
            let pushed = omega_pl(&fs.inclusion, &x)?;
            let br = framed.va().lie_bracket(&pushed.rep, inf_unit);
            Ok(framed.va().pl_canonical(&br))
        })
        .collect::<Result<_>>()?;
    let ncols = images.first().map_or(0, Vec::len);
    Ok(Rref::new(ncols, images).rank() == k)
}

pub fn table_to_json(engine: &Engine, table: &InvariantTable) -> Value {
    let entries: Vec<Value> = table.entries.values().map(|c| engine.va().pl_to_json(c)).collect();
    json!({"stability": table.token, "entries": entries})
}
