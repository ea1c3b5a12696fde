use std::time::Instant;

use serde_json::{json, Value};

use crate::error::Result;
use crate::invariants::{invariant_increasing, Engine};
use crate::quiver::examples::{a2, kronecker, tree4};
use crate::quiver::{decompositions, sub_vectors, DimVector, Quiver};
use crate::rational;
use crate::stability::{SlopeFunction, WeakStability};
use crate::wallcoeff::u_coeff;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub max_size: usize,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Timings are left out so the document is reproducible.
    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        json!({"max_size": self.max_size, "passed": self.passed(), "checks": checks})
    }
}

fn classes_up_to(q: &Quiver, k: usize) -> Vec<DimVector> {
    let big = DimVector(vec![k as i64; q.num_vertices()]);
    sub_vectors(&big)
        .into_iter()
        .filter(|d| !d.is_zero() && d.norm() as usize <= k)
        .collect()
}

fn base_case(k: usize) -> Result<(bool, String)> {
    let mut n = 0;
    for q in [a2(), kronecker(2), kronecker(3), tree4()] {
        let e = Engine::new(&q)?;
        let mu = e.reference().clone();
        for d in classes_up_to(&q, k) {
            let got = e.invariant(&mu, &d)?;
            if !e.va().pl_equal(&got, &invariant_increasing(&q, &mu, &d)?)? {
                return Ok((false, format!("mismatch at {:?}", d.0)));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} classes")))
}

fn kronecker_points() -> Result<(bool, String)> {
    for m in 1..=3usize {
        let q = kronecker(m);
        let e = Engine::new(&q)?;
        let d = DimVector(vec![1, 1]);
        let down = e.invariant(&SlopeFunction::from_ints(&[1, 0]), &d)?;
        let canon = e.va().pl_canonical(&down);
        if canon != vec![rational::one()] {
            return Ok((false, format!("K_{m}: canonical {canon:?}")));
        }
        let up = e.invariant(&SlopeFunction::from_ints(&[0, 1]), &d)?;
        if !e.va().pl_is_zero(&up) {
            return Ok((false, format!("K_{m}: increasing side nonzero")));
        }
    }
    Ok((true, "m = 1, 2, 3".into()))
}

fn identity_coefficients(k: usize) -> Result<(bool, String)> {
    let q = kronecker(3);
    let mu = SlopeFunction::from_ints(&[2, -1]);
    let mut n = 0;
    for d in classes_up_to(&q, k) {
        for len in 1..=d.norm() as usize {
            for t in decompositions(&d, len, None) {
                let want = if len == 1 { rational::one() } else { rational::zero() };
                if u_coeff(&t, &mu, &mu) != want {
                    return Ok((false, format!("U(τ,τ) at {t:?}")));
                }
                n += 1;
            }
        }
    }
    Ok((true, format!("{n} tuples")))
}

fn wallcrossing(k: usize) -> Result<(bool, String)> {
    let q = kronecker(3);
    let e = Engine::new(&q)?;
    let pairs = [([0, 1], [1, 0]), ([1, 0], [0, 1]), ([3, 1], [-2, 5])];
    let mut n = 0;
    for (a, b) in pairs {
        let (a, b) = (SlopeFunction::from_ints(&a), SlopeFunction::from_ints(&b));
        for d in classes_up_to(&q, k) {
            let table = e.table(&a, &d)?;
            let via = e.wallcross_transform(&table, &a, &b, &d)?;
            if !e.va().pl_equal(&via, &e.invariant(&b, &d)?)? {
                return Ok((false, format!("{} -> {} at {:?}", a.token(), b.token(), d.0)));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} transforms")))
}

fn reference_independence(k: usize) -> Result<(bool, String)> {
    let q = kronecker(3);
    let first = Engine::new(&q)?;
    let second = Engine::with_reference(&q, SlopeFunction::from_ints(&[-4, 7]))?;
    let tau = SlopeFunction::from_ints(&[1, 0]);
    for d in classes_up_to(&q, k) {
        let (x, y) = (first.invariant(&tau, &d)?, second.invariant(&tau, &d)?);
        if !first.va().pl_equal(&x, &y)? {
            return Ok((false, format!("differs at {:?}", d.0)));
        }
    }
    Ok((true, "K_3".into()))
}

/// Runs the property suite on classes with `|d| <= max_size`.
pub fn selftest(max_size: usize) -> SelftestReport {
    let k = max_size.max(1);
    type CheckFn = Box<dyn Fn() -> Result<(bool, String)>>;
    let suite: Vec<(&'static str, CheckFn)> = vec![
        ("increasing_base_case", Box::new(move || base_case(k))),
        ("kronecker_points", Box::new(kronecker_points)),
        ("identity_coefficients", Box::new(move || identity_coefficients(k))),
        ("wallcrossing", Box::new(move || wallcrossing(k))),
        ("reference_independence", Box::new(move || reference_independence(k))),
    ];
    let checks = suite
        .into_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let (passed, detail) = match f() {
                Ok(r) => r,
                Err(e) => (false, e.to_string()),
            };
            log_timing(name, t);
            Check { name, passed, detail }
        })
        .collect();
    SelftestReport { max_size: k, checks }
}

fn log_timing(name: &str, t: Instant) {
    if std::env::var_os("QUIVERWC_VERBOSE").is_some() {
        eprintln!("{name}: {:.2?}", t.elapsed());
    }
}
