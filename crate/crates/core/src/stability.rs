//! Weak stability conditions and slope functions.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{frame_quiver, sub_vectors, DimVector, Quiver, QuiverMorphism};
use crate::rational::{self, Rat};

/// A value in a totally ordered set. Slopes use `Finite(μ, 0)`; the framed
/// conditions use the second slot for the lexicographic tie-break and the
/// infinite ends for the framing class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StabValue {
    NegInf,
    Finite(Rat, i8),
    PosInf,
}

impl StabValue {
    pub fn slope(r: Rat) -> Self {
        StabValue::Finite(r, 0)
    }
}

/// Evaluation on nonzero nonnegative dimension vectors. `token` identifies
/// the condition for memoization and must change whenever `eval` does.
pub trait WeakStability: Send + Sync + Debug {
    fn eval(&self, d: &DimVector) -> StabValue;
    fn token(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlopeFunction {
    pub mu: Vec<Rat>,
}

impl SlopeFunction {
    pub fn new(mu: Vec<Rat>) -> Self {
        SlopeFunction { mu }
    }

    pub fn from_ints(mu: &[i64]) -> Self {
        SlopeFunction { mu: mu.iter().map(|&x| rational::int(x)).collect() }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        SlopeFunction { mu: vec![c; n] }
    }

    /// `μ(d) = Σ μ_v d(v) / Σ d(v)`.
    pub fn eval_rat(&self, d: &DimVector) -> Result<Rat> {
        let n = d.norm();
        if n <= 0 || !d.is_nonneg() {
            return Err(Error::input("slope of a zero or negative vector"));
        }
        let num: Rat = self
            .mu
            .iter()
            .zip(&d.0)
            .map(|(m, &x)| m * rational::int(x))
            .fold(Rat::zero(), |a, b| a + b);
        Ok(num / rational::int(n))
    }

    /// Parses `{"v":"3/2","w":"0"}`; absent vertices get slope zero.
    pub fn from_json(q: &Quiver, text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::input(format!("slope json: {e}")))?;
        Self::from_value(q, &value)
    }

    pub fn from_value(q: &Quiver, value: &serde_json::Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::input("slope must be an object"))?;
        let mut mu = vec![Rat::zero(); q.num_vertices()];
        for (k, v) in obj {
            let i = q
                .vertex_index(k)
                .ok_or_else(|| Error::input(format!("unknown vertex {k}")))?;
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
                _ => return Err(Error::input("slope values must be \"p/q\" strings")),
            };
            mu[i] = rational::parse(&text)
                .ok_or_else(|| Error::input(format!("bad rational {text}")))?;
        }
        Ok(SlopeFunction { mu })
    }

    pub fn to_value(&self, q: &Quiver) -> serde_json::Value {
        let map: BTreeMap<&str, String> = q
            .vertices()
            .iter()
            .zip(&self.mu)
            .map(|(v, m)| (v.as_str(), rational::fmt(m)))
            .collect();
        serde_json::to_value(map).expect("slope serializes")
    }
}

impl WeakStability for SlopeFunction {
    fn eval(&self, d: &DimVector) -> StabValue {
        StabValue::slope(self.eval_rat(d).expect("slope of a zero vector"))
    }

    fn token(&self) -> String {
        let parts: Vec<String> = self.mu.iter().map(rational::fmt).collect();
        format!("slope[{}]", parts.join(","))
    }
}

/// The one-point stability condition: every class has the same value.
#[derive(Clone, Debug, Default)]
pub struct TrivialStability;

impl WeakStability for TrivialStability {
    fn eval(&self, _d: &DimVector) -> StabValue {
        StabValue::slope(Rat::zero())
    }

    fn token(&self) -> String {
        "trivial".into()
    }
}

/// The lexicographic conditions `τ_±` on classes `(α, n)` of a framed quiver,
/// where `inf` is the index of the framing vertex and `base` acts on `α`.
#[derive(Clone, Debug)]
pub struct FramedLex {
    pub base: Arc<dyn WeakStability>,
    pub inf: usize,
    pub sign: i8,
}

impl WeakStability for FramedLex {
    fn eval(&self, d: &DimVector) -> StabValue {
        let n = d.0[self.inf];
        let mut alpha = d.clone();
        alpha.0.remove(self.inf);
        if alpha.is_zero() {
            return if self.sign > 0 { StabValue::PosInf } else { StabValue::NegInf };
        }
        let base = match self.base.eval(&alpha) {
            StabValue::Finite(r, _) => r,
            other => panic!("framed base must be finite, got {other:?}"),
        };
        StabValue::Finite(base, if n > 0 { self.sign } else { 0 })
    }

    fn token(&self) -> String {
        format!("framedlex[{},{},{}]", self.base.token(), self.inf, self.sign)
    }
}

/// `τ' ∘ λ_*` on the source quiver of `lambda`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub target: Arc<dyn WeakStability>,
    pub lambda: QuiverMorphism,
}

impl WeakStability for Pullback {
    fn eval(&self, d: &DimVector) -> StabValue {
        self.target.eval(&self.lambda.pushforward(d))
    }

    fn token(&self) -> String {
        let map: Vec<String> = self.lambda.vertex_map.iter().map(|v| v.to_string()).collect();
        format!("pullback[{},{}]", self.target.token(), map.join(","))
    }
}

/// Strict increase across every edge.
pub fn is_increasing(q: &Quiver, s: &SlopeFunction) -> bool {
    q.edges().iter().all(|e| s.mu[e.tail] < s.mu[e.head])
}

/// `μ_v` = position of `v` in the topological order of `q`.
pub fn reference_increasing_slope(q: &Quiver) -> Result<SlopeFunction> {
    let order = q.topological_order().ok_or(Error::Cyclic)?;
    let mut mu = vec![Rat::zero(); q.num_vertices()];
    for (pos, &v) in order.iter().enumerate() {
        mu[v] = rational::int(pos as i64);
    }
    Ok(SlopeFunction { mu })
}

/// No split `d = e + f` into nonzero parts has `μ(e) = μ(f)`.
pub fn is_generic_pair(s: &SlopeFunction, d: &DimVector) -> bool {
    sub_vectors(d).iter().filter(|e| !e.is_zero() && *e != d).all(|e| {
        let f = d - e;
        s.eval_rat(e).unwrap() != s.eval_rat(&f).unwrap()
    })
}

/// Checks `τ(a) <= τ(b) ⇒ τ̃(a) <= τ̃(b)` on all pairs from `classes`.
pub fn dominates_on(
    tau: &dyn WeakStability,
    tau_tilde: &dyn WeakStability,
    classes: &[DimVector],
) -> bool {
    let vals: Vec<(StabValue, StabValue)> =
        classes.iter().map(|c| (tau.eval(c), tau_tilde.eval(c))).collect();
    vals.iter()
        .all(|(a, ta)| vals.iter().all(|(b, tb)| a > b || ta <= tb))
}

/// `α ≤ α + γ ≤ γ` or the reverse, for nonzero `α`, `γ`.
pub fn weak_seesaw_holds(tau: &dyn WeakStability, alpha: &DimVector, gamma: &DimVector) -> bool {
    let beta = alpha + gamma;
    let (a, b, c) = (tau.eval(alpha), tau.eval(&beta), tau.eval(gamma));
    (a <= b && b <= c) || (a >= b && b >= c)
}

/// A slope on the framed quiver with the chosen `ε` recorded.
#[derive(Clone, Debug)]
pub struct FramedSlope {
    pub quiver: Quiver,
    pub inclusion: QuiverMorphism,
    pub slope: SlopeFunction,
    pub eps: Rat,
    pub sign: i8,
    pub d: DimVector,
}

impl FramedSlope {
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({
            "slope": self.slope.to_value(&self.quiver),
            "epsilon": rational::fmt(&self.eps),
            "sign": if self.sign > 0 { "+" } else { "-" },
        })
    }

    /// The framed class `(e, n)`.
    pub fn class(&self, e: &DimVector, n: i64) -> DimVector {
        let mut out = self.inclusion.pushforward(e);
        out.0[self.inf()] = n;
        out
    }

    pub fn inf(&self) -> usize {
        self.quiver.vertex_index(crate::quiver::FRAMING_VERTEX).unwrap()
    }
}

/// Slope on the framed quiver with `μ̃_∞ = μ(d) ± ε`, `ε` chosen so that the
/// four framed-slope properties hold over all splits of `d`.
pub fn framed_slope(
    q: &Quiver,
    s: &SlopeFunction,
    d: &DimVector,
    sign: i8,
    framing: &[i64],
) -> Result<FramedSlope> {
    if !d.is_class() {
        return Err(Error::input("framed slope needs a nonzero class"));
    }
    let (fq, incl) = frame_quiver(q, framing)?;
    let mu_d = s.eval_rat(d)?;
    let sgn = if sign > 0 { Rat::one() } else { -Rat::one() };
    let build = |eps: &Rat| {
        let mut mu = vec![Rat::zero(); fq.num_vertices()];
        for (v, &w) in incl.vertex_map.iter().enumerate() {
            mu[w] = s.mu[v].clone();
        }
        let inf = fq.vertex_index(crate::quiver::FRAMING_VERTEX).unwrap();
        mu[inf] = &mu_d + &sgn * eps;
        FramedSlope {
            quiver: fq.clone(),
            inclusion: incl.clone(),
            slope: SlopeFunction { mu },
            eps: eps.clone(),
            sign,
            d: d.clone(),
        }
    };
    let base = build(&Rat::zero());
    let mut gaps: Vec<Rat> = Vec::new();
    for (lhs, rhs) in framed_comparisons(&base, s, d) {
        let g = (lhs - rhs).abs();
        if g.is_positive() {
            gaps.push(g);
        }
    }
    let mut eps = gaps.into_iter().min().unwrap_or_else(Rat::one) / rational::int(2);
    for _ in 0..128 {
        let cand = build(&eps);
        if framed_properties_hold(&cand, s) {
            return Ok(cand);
        }
        eps /= rational::int(2);
    }
    Err(Error::assertion("no admissible epsilon for framed slope"))
}

/// The pairs compared in properties (b), (c) for the given sign.
fn framed_comparisons(fs: &FramedSlope, s: &SlopeFunction, d: &DimVector) -> Vec<(Rat, Rat)> {
    let ev = |e: &DimVector, n: i64| fs.slope.eval_rat(&fs.class(e, n)).unwrap();
    let mut out = Vec::new();
    for e in sub_vectors(d) {
        if e.is_zero() || e == *d {
            continue;
        }
        let f = d - &e;
        let (me, mf) = (s.eval_rat(&e).unwrap(), s.eval_rat(&f).unwrap());
        if me < mf {
            out.push((ev(&e, 0), ev(&f, 1)));
            out.push((ev(&e, 1), ev(&f, 0)));
        } else if me == mf {
            if fs.sign > 0 {
                out.push((ev(&e, 0), ev(&f, 1)));
            } else {
                out.push((ev(&e, 1), ev(&f, 0)));
            }
        }
    }
    out
}

/// Properties (a)-(d) of the framed slope, checked exhaustively over `d`.
pub fn framed_properties_hold(fs: &FramedSlope, s: &SlopeFunction) -> bool {
    let d = &fs.d;
    let ev = |e: &DimVector, n: i64| fs.slope.eval_rat(&fs.class(e, n)).unwrap();
    let mu_d = s.eval_rat(d).unwrap();
    for e in sub_vectors(d) {
        if e.is_zero() {
            continue;
        }
        if ev(&e, 0) != s.eval_rat(&e).unwrap() {
            return false;
        }
    }
    if framed_comparisons(fs, s, d).iter().any(|(l, r)| l >= r) {
        return false;
    }
    let inf = ev(&DimVector::zeros(d.len()), 1);
    if fs.sign > 0 {
        inf > mu_d
    } else {
        inf < mu_d
    }
}
