//! Acceptance criteria 1 to 10. Runs without the libtest harness so that each
//! criterion prints exactly one line; the process fails if any criterion does.
//! All comparisons are exact over the rationals; the only tolerances are the
//! wall-clock limits below.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use num_traits::Zero;
use quiverwc::charclass::Ring;
use quiverwc::invariants::{check_theorem52, pair_invariant_check, Engine};
use quiverwc::quiver::examples::{a2, kronecker, tree4};
use quiverwc::quiver::{all_decompositions, binarize_quiver, sum_all, DimVector, Quiver, QuiverMorphism};
use quiverwc::rational::{self, Rat};
use quiverwc::stability::{dominates_on, SlopeFunction, StabValue, TrivialStability, WeakStability};
use quiverwc::vertexalg::{HomologyClass, PlClass, VertexAlgebra};
use quiverwc::wallcoeff::{u_coeff, Coefficients};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

const SEED: u64 = 20_240_611;

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: quiverwc::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_slope(q: &Quiver, rng: &mut ChaCha8Rng) -> SlopeFunction {
    SlopeFunction::new(
        (0..q.num_vertices())
            .map(|_| rational::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
            .collect(),
    )
}

/// Unit class at unit vectors and zero otherwise, for every increasing slope tried.
fn c1_increasing_base_case() -> Outcome {
    let mut count = 0;
    for q in [a2(), kronecker(2), kronecker(3), tree4()] {
        let e = lib(Engine::new(&q))?;
        let mut second = e.reference().clone();
        for m in &mut second.mu {
            *m = &*m * rational::int(3) - rational::int(2);
        }
        for mu in [e.reference().clone(), second] {
            for d in classes_up_to(&q, 4) {
                let got = lib(e.invariant(&mu, &d))?;
                let expect = match d.as_unit() {
                    Some(_) => PlClass::new(HomologyClass::unit(&d)),
                    None => PlClass::zero(&d, got.weight()),
                };
                ensure(lib(e.va().pl_equal(&got, &expect))?, || format!("{:?} at {:?}", mu.mu, d.0))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} classes on A2, K2, K3, tree"))
}

/// The projective-space class on the decreasing side, zero on the increasing side.
fn c2_kronecker() -> Outcome {
    for m in 1..=3u32 {
        let q = kronecker(m as usize);
        let e = lib(Engine::new(&q))?;
        let d = DimVector(vec![1, 1]);
        let ring = Ring::single(&d);
        let h = ring.chern(0, 1, 1).sub(&ring.chern(0, 0, 1));
        let hpow = h.pow(&ring, m - 1);
        // Integration over P^{m-1}: the hyperplane power pairs to 1 and
        // spans the weight-zero cohomology in this degree.
        ensure(e.va().weight0_basis(&d, m as i64 - 1) == vec![hpow.clone()], || format!("K_{m}: basis"))?;
        let down = lib(e.invariant(&SlopeFunction::from_ints(&[1, 0]), &d))?;
        ensure(down.rep.pair(&hpow) == rational::one(), || format!("K_{m}: pairing"))?;
        ensure(e.va().pl_canonical(&down) == vec![rational::one()], || format!("K_{m}: canonical"))?;
        let up = lib(e.invariant(&SlopeFunction::from_ints(&[0, 1]), &d))?;
        ensure(e.va().pl_is_zero(&up), || format!("K_{m}: increasing side nonzero"))?;
    }
    Ok("m = 1, 2, 3".into())
}

fn connected_support(q: &Quiver, d: &DimVector) -> bool {
    let supp: Vec<usize> = (0..d.len()).filter(|&v| d.0[v] > 0).collect();
    let inner = q.edges().iter().filter(|x| d.0[x.tail] > 0 && d.0[x.head] > 0).count();
    !supp.is_empty() && inner + 1 == supp.len()
}

/// Unit brackets between binary classes with connected support in a tree.
fn c3_bracket_fixtures() -> Outcome {
    let q = tree4();
    let va = VertexAlgebra::new(&q);
    let binary: Vec<DimVector> = (1u32..16)
        .map(|m| DimVector((0..4).map(|v| i64::from(m >> v & 1)).collect()))
        .filter(|d| connected_support(&q, d))
        .collect();
    let mut cases = [0usize; 4];
    for e in &binary {
        for f in &binary {
            let br = va.lie_bracket(&HomologyClass::unit(e), &HomologyClass::unit(f));
            let sum = e + f;
            if !sum.is_binary() {
                // Overlapping supports: zero modulo the non-binary ideal, since
                // the bracket lies entirely in the component of e + f.
                ensure(br.dim() == &sum, || format!("{:?} {:?}", e.0, f.0))?;
                cases[0] += 1;
                continue;
            }
            let (ef, fe) = (q.euler_form(e, f), q.euler_form(f, e));
            let (case, expect) = match (ef, fe) {
                (0, 0) => (1, 0),
                (0, -1) => (2, 1),
                (-1, 0) => (3, -1),
                _ => return Err(format!("unexpected Euler values at {:?} {:?}", e.0, f.0)),
            };
            let target = PlClass::new(HomologyClass::unit(&sum).scale(&rational::int(expect)));
            ensure(lib(va.pl_equal(&br, &target))?, || format!("case {} at {:?} {:?}", case + 1, e.0, f.0))?;
            cases[case] += 1;
        }
    }
    ensure(cases.iter().all(|&c| c > 0), || format!("case counts {cases:?}"))?;
    Ok(format!("case counts {cases:?}"))
}

/// `⌊μ/2⌋`: dominates `μ`.
#[derive(Debug)]
struct Halved(SlopeFunction);

impl WeakStability for Halved {
    fn eval(&self, d: &DimVector) -> StabValue {
        StabValue::slope((self.0.eval_rat(d).unwrap() / rational::int(2)).floor())
    }

    fn token(&self) -> String {
        format!("halved[{}]", self.0.token())
    }
}

fn composed(t: &[DimVector], a: &Coefficients, b: &Coefficients) -> Rat {
    let n = t.len();
    let mut acc = Rat::zero();
    for mask in 0..(1u32 << (n - 1)) {
        let mut cuts = vec![0];
        cuts.extend((1..n).filter(|i| mask & (1 << (i - 1)) != 0));
        cuts.push(n);
        let mut prod = rational::one();
        let mut betas = Vec::new();
        for w in cuts.windows(2) {
            prod *= a.u(&t[w[0]..w[1]]);
            betas.push(sum_all(t[0].len(), &t[w[0]..w[1]]));
        }
        if !prod.is_zero() {
            acc += prod * b.u(&betas);
        }
    }
    acc
}

fn c4_coefficient_identities() -> Outcome {
    let q = kronecker(3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    // Identity on the diagonal, exhaustively for n <= 4.
    let mut diag = 0;
    let diag_slopes = [SlopeFunction::from_ints(&[0, 1]), SlopeFunction::from_ints(&[2, -1])];
    for s in &diag_slopes {
        for d in classes_up_to(&q, 4) {
            for t in all_decompositions(&d, None).into_iter().filter(|t| t.len() <= 4) {
                let want = if t.len() == 1 { rational::one() } else { rational::zero() };
                ensure(u_coeff(&t, s, s) == want, || format!("diagonal at {t:?}"))?;
                ensure(u_coeff(&t, &TrivialStability, &TrivialStability) == want, || format!("trivial at {t:?}"))?;
                diag += 1;
            }
        }
    }
    // Composition through a third condition.
    let mut comp = 0;
    for _ in 0..4 {
        let (s1, s2, s3) = (random_slope(&q, &mut rng), random_slope(&q, &mut rng), random_slope(&q, &mut rng));
        let (c12, c23, c13) = (Coefficients::new(&s1, &s2), Coefficients::new(&s2, &s3), Coefficients::new(&s1, &s3));
        for d in classes_up_to(&q, 5) {
            for t in all_decompositions(&d, None) {
                ensure(composed(&t, &c12, &c23) == c13.u(&t), || format!("composition at {t:?}"))?;
                comp += 1;
            }
        }
    }
    // Vanishing when the second condition dominates the first.
    let mut vanish = 0;
    for _ in 0..4 {
        let s = random_slope(&q, &mut rng);
        let coarse = Halved(s.clone());
        for d in classes_up_to(&q, 5) {
            let classes: Vec<DimVector> = all_decompositions(&d, None).into_iter().flatten().collect();
            ensure(dominates_on(&s, &coarse, &classes), || "domination".into())?;
            for t in all_decompositions(&d, None) {
                let v0 = coarse.eval(&t[0]);
                if t.iter().all(|a| coarse.eval(a) == v0) {
                    continue;
                }
                ensure(u_coeff(&t, &s, &coarse).is_zero(), || format!("vanishing at {t:?}"))?;
                ensure(u_coeff(&t, &coarse, &s).is_zero(), || format!("reverse vanishing at {t:?}"))?;
                vanish += 1;
            }
        }
    }
    Ok(format!("{diag} diagonal, {comp} composition, {vanish} vanishing tuples"))
}

fn c5_wallcrossing() -> Outcome {
    let q = kronecker(3);
    let e = lib(Engine::new(&q))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut nonzero = 0;
    for _ in 0..5 {
        let (a, b) = (random_slope(&q, &mut rng), random_slope(&q, &mut rng));
        for d in classes_up_to(&q, 5) {
            let table = lib(e.table(&a, &d))?;
            let via = lib(e.wallcross_transform(&table, &a, &b, &d))?;
            let direct = lib(e.invariant(&b, &d))?;
            ensure(lib(e.va().pl_equal(&via, &direct))?, || format!("{} -> {} at {:?}", a.token(), b.token(), d.0))?;
            nonzero += usize::from(!e.va().pl_is_zero(&direct));
        }
    }
    Ok(format!("5 slope pairs, {nonzero} nonzero targets"))
}

fn c6_morphisms() -> Outcome {
    let mut runs: Vec<(Quiver, QuiverMorphism, DimVector, &str)> = Vec::new();
    for (q, name) in [(a2(), "A2 deletion"), (kronecker(2), "K2 deletion")] {
        let lam = lib(QuiverMorphism::edge_deletion(&q, &["e1"]))?;
        runs.push((q, lam, DimVector(vec![1, 1]), name));
    }
    let k2 = kronecker(2);
    let (bq, lam, ones) = lib(binarize_quiver(&k2, &DimVector(vec![2, 1])))?;
    runs.push((bq, lam, ones, "K2 binarization (2,1)"));
    for (src_q, lam, d, name) in &runs {
        let src = lib(Engine::new(src_q))?;
        let tgt = lib(Engine::new(&lam.target))?;
        for mu in [[1, 0], [0, 1]] {
            let tau: Arc<dyn WeakStability> = Arc::new(SlopeFunction::from_ints(&mu));
            let r = lib(check_theorem52(&src, &tgt, lam, tau, d))?;
            ensure(r.holds, || format!("{name} with slope {mu:?}"))?;
        }
    }
    Ok("A2, K2 deletion at (1,1); K2 binarization at (2,1)".into())
}

fn c7_pairs() -> Outcome {
    let mut nonzero = 0;
    for q in [a2(), kronecker(2)] {
        let e = lib(Engine::new(&q))?;
        for d in [DimVector(vec![1, 1]), DimVector(vec![2, 1])] {
            for mu in [[1, 0], [0, 1]] {
                let r = lib(pair_invariant_check(&e, &SlopeFunction::from_ints(&mu), &d, &[1, 1]))?;
                ensure(r.holds, || format!("{:?} {mu:?}: identity", d.0))?;
                ensure(r.injective, || format!("{:?} {mu:?}: injectivity", d.0))?;
                let fq = VertexAlgebra::new(&r.framed.quiver);
                nonzero += usize::from(!fq.pl_is_zero(&r.lhs));
            }
        }
    }
    Ok(format!("A2, K2 at (1,1), (2,1); {nonzero} nonzero framed classes"))
}

fn c8_vertex_algebra() -> Outcome {
    let q = kronecker(2);
    let va = VertexAlgebra::new(&q);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let vac = va.vacuum();
    for _ in 0..20 {
        let d = random_dim(&q, &mut rng, 3);
        let v = random_class(&va, &mut rng, &d, 3);
        let y = va.field_y(&vac, &v, -6, 6);
        ensure(y.len() == 1 && y.get(&0) == Some(&v), || "vacuum field".into())?;
        for p in -4..=4i64 {
            let got = va.y_coefficient(&v, &vac, p);
            let ok = if p < 0 { got.is_zero() } else { got == va.divided_d(&v, p as u32) };
            ensure(ok, || format!("creation at p={p}"))?;
        }
    }
    let (mut nonzero, mut noncommuting) = (0, false);
    for _ in 0..5 {
        let (du, dv, dx) = (random_dim(&q, &mut rng, 1), random_dim(&q, &mut rng, 1), random_dim(&q, &mut rng, 2));
        let u = random_class(&va, &mut rng, &du, 2);
        let v = random_class(&va, &mut rng, &dv, 2);
        let x = random_class(&va, &mut rng, &dx, 2);
        let (holds, nz, nc) = weak_commutativity(&va, &u, &v, &x);
        ensure(holds, || "weak commutativity".into())?;
        nonzero += nz;
        noncommuting |= nc;
    }
    ensure(nonzero > 0 && noncommuting, || "locality window is vacuous".into())?;
    let (mut samples, mut nontrivial) = (0, 0);
    while samples < 10 {
        let (d1, d2, d3) = (random_dim(&q, &mut rng, 2), random_dim(&q, &mut rng, 1), random_dim(&q, &mut rng, 1));
        if (&(&d1 + &d2) + &d3).norm() > 3 {
            continue;
        }
        let (Some(u), Some(v), Some(x)) =
            (random_pl(&va, &mut rng, &d1, 2), random_pl(&va, &mut rng, &d2, 2), random_pl(&va, &mut rng, &d3, 2))
        else {
            continue;
        };
        let (anti, jacobi, nz) = lie_axioms(&va, &u, &v, &x);
        ensure(anti, || "antisymmetry".into())?;
        ensure(jacobi, || "Jacobi".into())?;
        samples += 1;
        nontrivial += usize::from(nz);
    }
    ensure(nontrivial > 0, || "all Jacobi samples vanish".into())?;
    Ok(format!("20 vacuum, 5 locality, 10 Lie samples ({nontrivial} nonzero)"))
}

fn c9_dual_procedures() -> Outcome {
    let mut comparisons = 0usize;
    for q in [kronecker(2), kronecker(3)] {
        let va = VertexAlgebra::new(&q);
        for d in classes_up_to(&q, 3) {
            for w in 0..=4 {
                let piece = va.piece(&d, w);
                ensure(piece.d_image.rank() + piece.weight0.len() == piece.monos.len(), || "rank-nullity".into())?;
                let mono = |i: usize| {
                    let mut c = HomologyClass::zero(vec![d.clone()], w);
                    c.add_term(piece.monos[i].clone(), rational::one());
                    c
                };
                let prev: Vec<HomologyClass> = if w > 0 {
                    va.ring(std::slice::from_ref(&d))
                        .basis(w as u32 - 1)
                        .into_iter()
                        .map(|m| {
                            let mut c = HomologyClass::zero(vec![d.clone()], w - 1);
                            c.add_term(m, rational::one());
                            va.divided_d(&c, 1)
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                let n = piece.monos.len();
                for i in 0..n {
                    let x = PlClass::new(mono(i));
                    for j in 0..n {
                        let y = mono(j);
                        let mut candidates = vec![y.clone(), y.scale(&rational::int(2))];
                        for z in &prev {
                            candidates.push(difference(&y, &z.scale(&rational::int(-1))));
                        }
                        for y in candidates {
                            let y = PlClass::new(y);
                            let same = lib(va.pl_equal(&x, &y))?;
                            let canon = va.pl_canonical(&x) == va.pl_canonical(&y);
                            ensure(same == canon, || format!("{:?} weight {w}: monomials {i}, {j}", d.0))?;
                            comparisons += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{comparisons} comparisons"))
}

fn c10_reference_independence() -> Outcome {
    let q = kronecker(3);
    let first = lib(Engine::new(&q))?;
    let second = lib(Engine::with_reference(&q, SlopeFunction::new(vec![rational::ratio(-7, 2), rational::int(5)])))?;
    let mut count = 0;
    for tau in [SlopeFunction::from_ints(&[1, 0]), SlopeFunction::from_ints(&[4, -3]), SlopeFunction::from_ints(&[0, 0])] {
        for d in classes_up_to(&q, 4) {
            let (x, y) = (lib(first.invariant(&tau, &d))?, lib(second.invariant(&tau, &d))?);
            ensure(lib(first.va().pl_equal(&x, &y))?, || format!("{} at {:?}", tau.token(), d.0))?;
            count += 1;
        }
    }
    Ok(format!("{count} invariants under two references"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "increasing-slope base case", secs(10), c1_increasing_base_case),
        (2, "Kronecker wall-crossing", secs(5), c2_kronecker),
        (3, "binary bracket fixtures", secs(5), c3_bracket_fixtures),
        (4, "coefficient identities", secs(60), c4_coefficient_identities),
        (5, "wall-crossing transform", secs(300), c5_wallcrossing),
        (6, "morphism pushforward", secs(60), c6_morphisms),
        (7, "pair invariants", secs(300), c7_pairs),
        (8, "vertex algebra axioms", secs(300), c8_vertex_algebra),
        (9, "dual quotient procedures", secs(60), c9_dual_procedures),
        (10, "reference-slope independence", secs(60), c10_reference_independence),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let t = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = t.elapsed();
        let out = match out {
            Ok(_) if took > limit => Err(format!("exceeded {limit:?}")),
            other => other,
        };
        let (tag, detail) = match &out {
            Ok(s) => ("PASS", s.as_str()),
            Err(s) => ("FAIL", s.as_str()),
        };
        println!("criterion {n:>2} {tag}  {name}: {detail} [{took:.2?} of {limit:?}]");
        failed += usize::from(out.is_err());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
