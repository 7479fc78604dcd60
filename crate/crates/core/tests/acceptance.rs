//! Acceptance suite: one exact check per criterion, one line of output each.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use common::{b, fixture_set, gf, rng, standard_corpus, Total, MC};
use multicx::cn::{all_words, contracting_h, delta0, extend_scalars, phi_quotient, restrict_scalars, s_element, truncate_left, truncate_upper, CnElement};
use multicx::fixtures;
use multicx::hom::hom_dim;
use multicx::model::{cone_infinity_projection, cone_projection, is_fibration, path_object, path_object_dim, solve_lift, Lift, LiftingProblem, Style};
use multicx::random::{random_morphism, random_multicomplex, random_quotient, Shape};
use multicx::represent::{disk, morphism_from_witness, window_for, zw_object};
use multicx::spectral::{is_er_quasi_iso, page_dims, page_homology_dim, w_map, witness_cycles, Method};
use multicx::{Bidegree, BigradedModule, Bound, Exec, Matrix, Morphism, Multicomplex, PrimeField};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const METHODS: [Method; 2] = [Method::Direct, Method::Witness];
const EX: Exec = Exec::Parallel;

fn corner_page() -> Outcome {
    let mut checks = 0;
    for p in [2, 7] {
        let f = gf(p);
        for (x, y) in [(0, 0), (1, 2), (-3, 1), (2, -2), (5, 5)] {
            let c = fixtures::corner(&f, Bound::Finite(2), x, y);
            for m in METHODS {
                let dims: Vec<_> = page_dims(&c, 1, m, EX).map_err(|e| e.to_string())?.into_iter().collect();
                ensure(dims == vec![(b(x, y), 1)], || format!("GF({p}) at ({x},{y}) {m}: {dims:?}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} page computations"))
}

fn staircase_pages() -> Outcome {
    let mut checks = 0;
    for p in [2, 7] {
        let f = gf(p);
        for s in 1..=4usize {
            let st = fixtures::staircase(&f, Bound::Finite(2), s, 0, 0);
            for i in 1..=s + 2 {
                let dims: Vec<_> = page_dims(&st, i, Method::Witness, EX).map_err(|e| e.to_string())?.into_iter().collect();
                let want = if i <= s { vec![(b(-(s as i64), 1 - s as i64), 1), (b(0, 0), 1)] } else { vec![] };
                ensure(dims == want, || format!("s = {s}, i = {i}: {dims:?}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} pages, s = 1..4"))
}

fn oracle_equivalence(corpus: &[Arc<MC>]) -> Outcome {
    let mut entries = 0;
    for (k, a) in corpus.iter().enumerate() {
        let oracle = Total::new(a);
        ensure(a.is_valid() && oracle.squares_to_zero(), || format!("object {k} is not valid"))?;
        for r in 0..=4usize {
            let d = page_dims(a, r, Method::Direct, EX).map_err(|e| e.to_string())?;
            let w = page_dims(a, r, Method::Witness, EX).map_err(|e| e.to_string())?;
            ensure(d == w, || format!("object {k}, r = {r}: direct {d:?} vs witness {w:?}"))?;
            let next = page_dims(a, r + 1, Method::Witness, EX).map_err(|e| e.to_string())?;
            for at in a.support() {
                let h = page_homology_dim(a, r, at, Method::Witness).map_err(|e| e.to_string())?;
                let e = next.get(&at).copied().unwrap_or(0);
                ensure(h == e, || format!("object {k}, r = {r} at {at}: E_(r+1) = {e}, H = {h}"))?;
                let o = oracle.page_dim(r, at);
                let got = d.get(&at).copied().unwrap_or(0);
                ensure(o == got, || format!("object {k}, r = {r} at {at}: total complex {o}, pages {got}"))?;
                entries += 1;
            }
        }
    }
    Ok(format!("{} objects, {entries} entries", corpus.len()))
}

fn kernel_identity(corpus: &[Arc<MC>]) -> Outcome {
    let mut checks = 0;
    for (k, a) in corpus.iter().enumerate() {
        for r in 1..=4usize {
            let ri = r as i64;
            for at in a.support() {
                let w = w_map(a, r, at);
                let z = witness_cycles(a, r, Bidegree::new(at.p + ri - 1, at.q + ri - 2));
                ensure(w.kernel_dim() == z.dim(), || format!("object {k}, r = {r} at {at}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} kernels"))
}

fn cone_triviality() -> Outcome {
    let mut checks = 0;
    for p in [2, 7] {
        let f = gf(p);
        for n in [Bound::Finite(2), Bound::Finite(3), Bound::Infinite] {
            for (k, a) in fixture_set(&f, n, 40 + p).iter().enumerate() {
                for r in 0..=3usize {
                    let phi = cone_projection(a, r).map_err(|e| e.to_string())?;
                    let e = page_dims(phi.source(), r + 1, Method::Witness, EX).map_err(|e| e.to_string())?;
                    ensure(e.is_empty(), || format!("C_{r} ⊗ fixture {k} ({n}): {e:?}"))?;
                    checks += 1;
                    if n == Bound::Infinite && r >= 1 {
                        let pi = cone_infinity_projection(a, r).map_err(|e| e.to_string())?;
                        let e = page_dims(pi.source(), r + 1, Method::Witness, EX).map_err(|e| e.to_string())?;
                        ensure(e.is_empty(), || format!("C_{r}^∞ ⊗ fixture {k}: {e:?}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checks} tensor products"))
}

fn path_objects() -> Outcome {
    let mut checks = 0;
    for p in [2, 7] {
        let f = gf(p);
        for n in [Bound::Finite(2), Bound::Finite(3), Bound::Infinite] {
            for (k, a) in fixture_set(&f, n, 50 + p).iter().enumerate() {
                for r in 0..=3usize {
                    let po = path_object(a, r).map_err(|e| e.to_string())?;
                    let mut bs: Vec<Bidegree> = po.object.support().collect();
                    bs.extend(a.support());
                    for at in bs {
                        let (got, want) = (po.object.dim(at), path_object_dim(a, r, at));
                        ensure(got == want, || format!("fixture {k}, r = {r} at {at}: {got} vs {want}"))?;
                    }
                    let w = is_er_quasi_iso(&po.iota, r, EX).map_err(|e| e.to_string())?;
                    ensure(w.ok, || format!("ι not an E_r-quasi-iso: fixture {k}, r = {r}, {:?}", w.failure))?;
                    let fib = is_fibration(&po.pi, r, Style::Page, EX).map_err(|e| e.to_string())?;
                    ensure(fib.ok, || format!("π not an r-fibration: fixture {k}, r = {r}, {:?}", fib.failure))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} path objects"))
}

fn zero_to(a: &Arc<MC>) -> Morphism<PrimeField> {
    Morphism::zero(Arc::new(Multicomplex::zero(a.field(), a.bound())), a.clone()).unwrap()
}

fn lifting() -> Outcome {
    let mut lifts = 0;
    for p in [2, 7] {
        let f = gf(p);
        for n in [Bound::Finite(2), Bound::Finite(3), Bound::Infinite] {
            let pi = fixtures::corner_projection(&f, n, 1, 1);
            let k = pi.target().clone();
            let square = LiftingProblem::new(zero_to(&k), pi.clone(), zero_to(pi.source()), Morphism::identity(k.clone()))
                .map_err(|e| e.to_string())?;
            match solve_lift(&square).map_err(|e| e.to_string())? {
                Lift::None(c) => ensure(c.verify(), || "certificate does not verify".into())?,
                Lift::Found(_) => return Err(format!("GF({p}), {n}: unexpected lift")),
            }
            for s in 0..=3usize {
                let at = b(1, 1);
                let zw = zw_object(&f, n, s, at, window_for(at, s)).map_err(|e| e.to_string())?;
                let space = witness_cycles(&k, s, at);
                for v in space.basis() {
                    let bottom = morphism_from_witness(&zw, &k, &space.tuple(v)).map_err(|e| e.to_string())?;
                    let sq = LiftingProblem::new(zero_to(&zw.object), pi.clone(), zero_to(pi.source()), bottom)
                        .map_err(|e| e.to_string())?;
                    let l = solve_lift(&sq).map_err(|e| e.to_string())?;
                    ensure(l.found().is_some(), || format!("GF({p}), {n}, s = {s}: no lift"))?;
                    lifts += 1;
                }
            }
        }
    }
    Ok(format!("6 certificates, {lifts} lifts"))
}

fn cn_identities() -> Outcome {
    let inf = Bound::Infinite;
    let mut words = 0;
    for p in [2, 7] {
        let f = gf(p);
        for w in all_words(8) {
            let x = CnElement::word(&f, inf, w.clone());
            ensure(delta0(&delta0(&x)).is_zero(), || format!("δ₀² on {w:?}"))?;
            let y = delta0(&contracting_h(&x)).add(&contracting_h(&delta0(&x)));
            let want = if w.is_empty() || w == [1] { CnElement::zero(&f, inf) } else { x.clone() };
            ensure(y == want, || format!("δ₀h + hδ₀ on {w:?}"))?;
            words += 1;
        }
    }
    let f = gf(7);
    let mut cases = 0;
    for n in [3usize, 4] {
        let ideal = |x: &CnElement<PrimeField>| phi_quotient(x, Bound::Finite(n)).unwrap().is_zero();
        let d1 = CnElement::letter(&f, inf, 1);
        for k in n..n + 3 {
            let dk = CnElement::letter(&f, inf, k);
            let sk = s_element(&f, inf, k);
            for c in all_words(3).into_iter().filter(|c| c.iter().all(|&i| i < n)) {
                let c = CnElement::word(&f, inf, c);
                let (dkc, skc) = (dk.mul(&c), sk.mul(&c));
                let dk1c = CnElement::letter(&f, inf, k + 1).mul(&c);
                let expected = [
                    (dkc.clone(), CnElement::zero(&f, inf)),
                    (skc.clone(), dkc.clone()),
                    (d1.mul(&dkc), dk1c.clone()),
                    (d1.mul(&skc), d1.mul(&dkc).sub(&s_element(&f, inf, k + 1).mul(&c))),
                ];
                for (x, hx) in expected {
                    ensure(ideal(&x), || format!("n = {n}, k = {k}: generator not in I_n"))?;
                    let got = contracting_h(&x);
                    ensure(got == hx, || format!("n = {n}, k = {k}: h formula"))?;
                    ensure(ideal(&got), || format!("n = {n}, k = {k}: h leaves I_n"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{words} words, {cases} ideal cases"))
}

fn scalar_change() -> Outcome {
    let f = gf(2);
    let mut objects = 0;
    for n in [Bound::Finite(3), Bound::Finite(4), Bound::Infinite] {
        for s in 0..=3usize {
            let at = b(0, 0);
            let pmin = window_for(at, s);
            let big = zw_object(&f, n, s, at, pmin).map_err(|e| e.to_string())?;
            let (ext, _) = extend_scalars(&big.object, Bound::Finite(2)).map_err(|e| e.to_string())?;
            let two = zw_object(&f, Bound::Finite(2), s, at, pmin).map_err(|e| e.to_string())?;
            ensure(ext.is_valid() && ext.module() == two.object.module(), || format!("n = {n}, s = {s}"))?;
            objects += 1;
        }
    }
    let mut r = rng(90);
    let mut pairs = 0;
    for (l, n) in [(Bound::Infinite, 2usize), (Bound::Infinite, 3), (Bound::Finite(4), 2), (Bound::Finite(3), 2)] {
        for _ in 0..6 {
            let mut sm = Shape::new(l);
            sm.width = 4;
            let m = Arc::new(random_multicomplex(&f, &sm, &mut r));
            let target = Arc::new(random_multicomplex(&f, &Shape::new(Bound::Finite(n)), &mut r));
            let (pm, _) = extend_scalars(&m, Bound::Finite(n)).map_err(|e| e.to_string())?;
            let it = Arc::new(restrict_scalars(&target, l).map_err(|e| e.to_string())?);
            let (x, y) = (hom_dim(&pm, &target).map_err(|e| e.to_string())?, hom_dim(&m, &it).map_err(|e| e.to_string())?);
            ensure(x == y, || format!("{l} -> {n}: 2^{x} vs 2^{y} morphisms"))?;
            pairs += 1;
        }
    }
    Ok(format!("{objects} witness objects, {pairs} adjunction pairs"))
}

fn truncations() -> Outcome {
    let f = gf(2);
    let d = disk(&f, Bound::Infinite, b(1, 0), -4).map_err(|e| e.to_string())?;
    let (t, _) = truncate_left(&d.object).map_err(|e| e.to_string())?;
    ensure(t.is_zero(), || "t of the disk at (1,0) is not zero".into())?;
    for q in [-1, 0, 2] {
        let c = Arc::new(fixtures::corner(&f, Bound::Finite(2), 1, q));
        let (t, _) = truncate_left(&c).map_err(|e| e.to_string())?;
        ensure(t.is_valid() && t.module() == &BigradedModule::from_dims([(b(0, q - 1), 1)]), || format!("t of corner at (1,{q})"))?;
    }
    for p in [-2, 0, 3] {
        let c = Arc::new(fixtures::corner(&f, Bound::Finite(2), p, 0));
        let (t, _) = truncate_upper(&c).map_err(|e| e.to_string())?;
        ensure(t.is_valid() && t.module() == &BigradedModule::from_dims([(b(p, 0), 1)]), || format!("t' of corner at ({p},0)"))?;
    }
    let mut a = Multicomplex::new(&f, Bound::Finite(2), BigradedModule::from_dims([(b(0, -1), 1), (b(0, 0), 1)]));
    a.set_d(0, b(0, -1), Matrix::from_i64(&f, &[&[1]])).map_err(|e| e.to_string())?;
    let (t, _) = truncate_upper(&Arc::new(a)).map_err(|e| e.to_string())?;
    ensure(t.is_zero(), || "t' of the unit interval is not zero".into())?;
    let mut r = rng(100);
    let mut pairs = 0;
    for n in [Bound::Finite(2), Bound::Finite(3), Bound::Infinite] {
        for _ in 0..7 {
            let mut sm = Shape::new(n);
            sm.origin = Bidegree::new(-2, -2);
            let m = Arc::new(random_multicomplex(&f, &sm, &mut r));
            let left = Arc::new(random_multicomplex(&f, &Shape::new(n), &mut r));
            let (t, _) = truncate_left(&m).map_err(|e| e.to_string())?;
            ensure(t.is_valid(), || "t output invalid".into())?;
            let (x, y) = (hom_dim(&t, &left).map_err(|e| e.to_string())?, hom_dim(&m, &left).map_err(|e| e.to_string())?);
            ensure(x == y, || format!("t adjunction: {x} vs {y}"))?;
            let mut su = Shape::new(n);
            su.origin = Bidegree::new(-4, 0);
            let up = Arc::new(random_multicomplex(&f, &su, &mut r));
            let (t, _) = truncate_upper(&m).map_err(|e| e.to_string())?;
            ensure(t.is_valid(), || "t' output invalid".into())?;
            let (x, y) = (hom_dim(&t, &up).map_err(|e| e.to_string())?, hom_dim(&m, &up).map_err(|e| e.to_string())?);
            ensure(x == y, || format!("t' adjunction: {x} vs {y}"))?;
            pairs += 2;
        }
    }
    Ok(format!("hand examples, {pairs} adjunction pairs"))
}

fn monotonicity(corpus: &[Arc<MC>]) -> Outcome {
    let mut r = rng(110);
    let (mut weq_hits, mut fib_hits, mut morphisms) = (0, 0, 0);
    for (k, a) in corpus.iter().enumerate() {
        let fs = [
            random_quotient(a, 2, &mut r).map_err(|e| e.to_string())?,
            random_morphism(a, a, &mut r).map_err(|e| e.to_string())?,
            cone_projection(a, k % 3).map_err(|e| e.to_string())?,
        ];
        for f in &fs {
            morphisms += 1;
            let weq: Vec<bool> = (0..=4)
                .map(|s| is_er_quasi_iso(f, s, EX).map(|c| c.ok))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let fib: Vec<bool> = (0..=4)
                .map(|s| is_fibration(f, s, Style::Page, EX).map(|c| c.ok))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for s in 0..=3 {
                ensure(!weq[s] || weq[s + 1], || format!("object {k}: weq at {s} but not {}", s + 1))?;
                ensure(!fib[s + 1] || fib[s], || format!("object {k}: fib at {} but not {s}", s + 1))?;
                weq_hits += usize::from(weq[s]);
                fib_hits += usize::from(fib[s + 1]);
            }
        }
    }
    Ok(format!("{morphisms} morphisms, {weq_hits} weq and {fib_hits} fib premises exercised"))
}

fn main() -> ExitCode {
    let corpus = standard_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("corner E_1 is a point", Box::new(corner_page)),
        ("staircase pages", Box::new(staircase_pages)),
        ("oracle equivalence on 200 objects", Box::new(|| oracle_equivalence(&corpus))),
        ("kernel of w_r", Box::new(|| kernel_identity(&corpus))),
        ("cone triviality", Box::new(cone_triviality)),
        ("path objects", Box::new(path_objects)),
        ("lifting", Box::new(lifting)),
        ("C_n identities", Box::new(cn_identities)),
        ("scalar change", Box::new(scalar_change)),
        ("truncations", Box::new(truncations)),
        ("monotonicity", Box::new(|| monotonicity(&corpus))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
