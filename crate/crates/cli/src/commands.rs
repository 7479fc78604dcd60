//! Command implementations, generic over the coefficient field.

use std::collections::BTreeMap;
use std::sync::Arc;

use multicx::cn::{all_words, contracting_h, delta0, extend_scalars, restrict_scalars, s_element, truncate_left, truncate_upper, word_bidegree, CnElement};
use multicx::constructions::{direct_sum, pushout as pushout_of, tensor_product};
use multicx::model::{self, is_fibration, is_trivial_fibration, solve_lift, Lift, LiftingProblem, Style};
use multicx::multicomplex::Violation;
use multicx::represent::{bw_object, disk, iota, window_for, zw_infinity, zw_object};
use multicx::spectral::{compute_page, induced_page_map, is_er_quasi_iso, page_dims, Method};
use multicx::{Bidegree, Bound, Exec, Field, Matrix};
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::format::{Document, RawDocument};
use crate::report::{dims_json, display_order, grid, line, yes_no, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BuildKind {
    Disk,
    Zw,
    Bw,
    Zwinf,
    Cone,
    Coneinf,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TruncMode {
    Left,
    Upper,
}

fn pq(at: Bidegree) -> Value {
    json!([at.p, at.q])
}

/// Summary table for documents that commands emit.
pub fn document_table<F: Field>(doc: &Document<F>) -> String {
    let mut out = String::new();
    for (name, c) in &doc.complexes {
        line(&mut out, format!("complex {name} (field {}, n = {}, total dim {})", doc.field.spec(), c.bound(), c.module().total_dim()));
        if let Some(h) = c.horizon() {
            line(&mut out, format!("cut off below p = {h}"));
        }
        let dims: BTreeMap<Bidegree, usize> = c.module().iter().collect();
        out.push_str(&grid(&dims, None));
    }
    for (name, s, t, _) in &doc.morphisms {
        line(&mut out, format!("morphism {name}: {s} -> {t}"));
    }
    out
}

fn emit_document<F: Field>(doc: &Document<F>) -> Outcome {
    Outcome::document(doc.to_text(), document_table(doc))
}

pub fn validate<F: Field>(raw: &RawDocument, field: &F) -> Result<Outcome> {
    let doc = raw.build(field, false)?;
    let mut ok = true;
    let mut table = String::new();
    let mut complexes = Vec::new();
    for (name, c) in &doc.complexes {
        let vs = c.validate();
        ok &= vs.is_empty();
        let items: Vec<Value> = vs
            .iter()
            .map(|v| match v {
                Violation::Relation(r) => json!({"l": r.l, "at": pq(r.at)}),
                Violation::OutOfBound { i } => json!({"out_of_bound": i}),
            })
            .collect();
        line(&mut table, format!("complex {name}: {}", if vs.is_empty() { "ok" } else { "INVALID" }));
        for v in &vs {
            line(&mut table, format!("  {v}"));
        }
        complexes.push(json!({"name": name, "ok": vs.is_empty(), "violations": items}));
    }
    let mut morphisms = Vec::new();
    for (name, _, _, m) in &doc.morphisms {
        let fails = m.validate();
        ok &= fails.is_empty();
        line(&mut table, format!("morphism {name}: {}", if fails.is_empty() { "ok" } else { "INVALID" }));
        for (i, at) in &fails {
            line(&mut table, format!("  d_{i} f != f d_{i} at {at}"));
        }
        let items: Vec<Value> = fails.iter().map(|(i, at)| json!({"i": i, "at": pq(*at)})).collect();
        morphisms.push(json!({"name": name, "ok": fails.is_empty(), "failures": items}));
    }
    let j = json!({"command": "validate", "ok": ok, "complexes": complexes, "morphisms": morphisms});
    Ok(Outcome::new(ok, j, table))
}

pub fn page<F: Field>(doc: &Document<F>, object: Option<&str>, r: usize, method: Method, at: Option<Bidegree>, exec: Exec) -> Result<Outcome> {
    let (name, a) = doc.pick_complex(object)?;
    if let Some(at) = at {
        let d = compute_page(&a, r, at, method)?.dim();
        let j = json!({"command": "page", "object": name, "r": r, "method": method.to_string(), "at": pq(at), "dim": d});
        return Ok(Outcome::new(true, j, format!("E_{r}{at} = {d}\n")));
    }
    let dims = page_dims(&a, r, method, exec)?;
    let exact_from = a.horizon().map(|h| h + 2 * r as i64 + 1);
    let mut j = json!({"command": "page", "object": name, "r": r, "method": method.to_string(), "entries": dims_json(&dims)});
    let mut table = String::new();
    line(&mut table, format!("E_{r} of {name} ({method})"));
    if let Some(p) = exact_from {
        j["exact_for_p_at_least"] = json!(p);
        line(&mut table, format!("exact for p >= {p}"));
    }
    table.push_str(&grid(&dims, Some(a.module())));
    Ok(Outcome::new(true, j, table))
}

pub fn pagemap<F: Field>(doc: &Document<F>, morphism: Option<&str>, r: usize, method: Method, at: Option<Bidegree>) -> Result<Outcome> {
    let (name, f) = doc.pick_morphism(morphism)?;
    let points: Vec<Bidegree> = match at {
        Some(at) => vec![at],
        None => {
            let mut v: Vec<Bidegree> = f.source().support().chain(f.target().support()).collect();
            v.sort();
            v.dedup();
            v.retain(|x| f.source().is_exact_at(*x, r) && f.target().is_exact_at(*x, r));
            v
        }
    };
    let mut rows = BTreeMap::new();
    for x in points {
        let m = induced_page_map(&f, r, x, method)?;
        rows.insert(x, m.matrix);
    }
    let fd = &doc.field;
    let mut entries = Vec::new();
    let mut table = String::new();
    line(&mut table, format!("E_{r}({name}) ({method})"));
    line(&mut table, format!("{:>5}{:>5}{:>8}{:>8}{:>6}", "p", "q", "source", "target", "rank"));
    for (x, m) in display_order(&rows) {
        if m.nrows() + m.ncols() == 0 {
            continue;
        }
        let mut e = json!({"p": x.p, "q": x.q, "source": m.ncols(), "target": m.nrows(), "rank": m.rank()});
        line(&mut table, format!("{:>5}{:>5}{:>8}{:>8}{:>6}", x.p, x.q, m.ncols(), m.nrows(), m.rank()));
        if at.is_some() {
            let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(|v| fd.format(v)).collect()).collect();
            for r in &rows {
                line(&mut table, format!("  [{}]", r.join(" ")));
            }
            e["matrix"] = json!(rows);
        }
        entries.push(e);
    }
    let j = json!({"command": "pagemap", "morphism": name, "r": r, "method": method.to_string(), "entries": entries});
    Ok(Outcome::new(true, j, table))
}

fn check_outcome(command: &str, name: &str, r: usize, what: &str, extra: Value, check: multicx::spectral::Check) -> Outcome {
    let mut j = json!({"command": command, "morphism": name, "r": r, "ok": check.ok, "failure": check.failure.map(pq)});
    if let (Value::Object(m), Value::Object(e)) = (&mut j, extra) {
        m.extend(e);
    }
    let mut table = format!("{name} {what}: {}", yes_no(check.ok));
    if let Some(at) = check.failure {
        table.push_str(&format!(" (fails at {at})"));
    }
    table.push('\n');
    Outcome::new(check.ok, j, table)
}

pub fn weq<F: Field>(doc: &Document<F>, morphism: Option<&str>, r: usize, exec: Exec) -> Result<Outcome> {
    let (name, f) = doc.pick_morphism(morphism)?;
    let c = is_er_quasi_iso(&f, r, exec)?;
    Ok(check_outcome("weq", &name, r, &format!("is an E_{r}-quasi-isomorphism"), json!({}), c))
}

pub fn fib<F: Field>(doc: &Document<F>, morphism: Option<&str>, r: usize, style: Style, trivial: bool, exec: Exec) -> Result<Outcome> {
    let (name, f) = doc.pick_morphism(morphism)?;
    let c = if trivial {
        is_trivial_fibration(&f, r, style, exec)?
    } else {
        is_fibration(&f, r, style, exec)?
    };
    let what = format!("is a {}{r}-fibration ({style} style)", if trivial { "trivial " } else { "" });
    Ok(check_outcome("fib", &name, r, &what, json!({"style": style.to_string(), "trivial": trivial}), c))
}

fn matrix_json<F: Field>(f: &F, m: &Matrix<F>) -> Value {
    json!(m.rows().iter().map(|r| r.iter().map(|v| f.format(v)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn lift<F: Field>(doc: &Document<F>, i: &str, p: &str, top: &str, bottom: &str) -> Result<Outcome> {
    let get = |n: &str| doc.pick_morphism(Some(n)).map(|m| m.1);
    let problem = LiftingProblem::new(get(i)?, get(p)?, get(top)?, get(bottom)?)?;
    let f = &doc.field;
    let mut table = String::new();
    let out = match solve_lift(&problem)? {
        Lift::Found(l) => {
            line(&mut table, "lift found");
            let mut blocks = Vec::new();
            for at in l.source().support() {
                let m = l.block(at);
                if m.nrows() > 0 && !m.is_zero() {
                    line(&mut table, format!("  at {at}: {}", matrix_json(f, &m)));
                }
                if m.nrows() > 0 {
                    blocks.push(json!({"at": pq(at), "matrix": matrix_json(f, &m)}));
                }
            }
            Outcome::new(true, json!({"command": "lift", "found": true, "blocks": blocks}), table)
        }
        Lift::None(c) => {
            let y: Vec<String> = c.y.iter().map(|v| f.format(v)).collect();
            line(&mut table, "no lift");
            line(&mut table, format!("certificate: y with y M = 0 and y b != 0 over {} equations in {} unknowns", c.matrix.nrows(), c.matrix.ncols()));
            line(&mut table, format!("verified: {}", yes_no(c.verify())));
            let j = json!({
                "command": "lift",
                "found": false,
                "certificate": {"equations": c.matrix.nrows(), "unknowns": c.matrix.ncols(), "y": y, "verified": c.verify()},
            });
            Outcome::new(false, j, table)
        }
    };
    Ok(out)
}

pub struct BuildArgs {
    pub kind: BuildKind,
    pub n: Bound,
    pub r: usize,
    pub at: Bidegree,
    pub window: Option<i64>,
    pub s_max: usize,
}

pub fn build<F: Field>(field: &F, args: &BuildArgs, input: Option<&Document<F>>) -> Result<Outcome> {
    let BuildArgs { kind, n, r, at, window, s_max } = *args;
    let need = |stage: usize| {
        window.ok_or_else(|| {
            CliError::Usage(format!(
                "--window PMIN is required for {} builds (for page {stage} queries at {at} use --window {})",
                format!("{kind:?}").to_lowercase(),
                window_for(at, stage)
            ))
        })
    };
    let doc = match kind {
        BuildKind::Disk => Document::with_complex(field, "disk", disk(field, n, at, need(0)?)?.object),
        BuildKind::Zw => Document::with_complex(field, "zw", zw_object(field, n, r, at, need(r)?)?.object),
        BuildKind::Bw => {
            let w = need(r)?;
            let z = zw_object(field, n, r, at, w)?;
            let bw = bw_object(field, n, r, at, w)?;
            let i = iota(&z, &bw)?;
            let mut d = Document::new(field, n);
            d.push_complex("zw", z.object.clone());
            d.push_complex("bw", bw.object.clone());
            d.push_morphism("iota", "zw", "bw", i);
            d
        }
        BuildKind::Zwinf => {
            let (z, proj) = zw_infinity(field, n, at, need(0)?, s_max)?;
            let mut d = Document::new(field, n);
            d.push_complex("zwinf", z.object.clone());
            d.push_complex("point", proj.target().clone());
            d.push_morphism("proj", "zwinf", "point", proj);
            d
        }
        BuildKind::Cone => {
            if !n.allows(1) && r > 0 {
                return Err(CliError::Usage("the cone C_r with r >= 1 needs n >= 2".into()));
            }
            Document::with_complex(field, "cone", Arc::new(model::cone(field, n, r)))
        }
        BuildKind::Coneinf => Document::with_complex(field, "cone", Arc::new(model::cone_infinity(field, r)?)),
        BuildKind::Path => match input {
            None => Document::with_complex(field, "lambda", Arc::new(model::lambda(field, n, r))),
            Some(src) => {
                let (name, a) = src.pick_complex(None)?;
                let po = model::path_object(&a, r)?;
                let mut d = Document::new(field, a.bound());
                d.push_complex(&name, a.clone());
                d.push_complex("path", po.object.clone());
                d.push_complex("sum", po.sum.object.clone());
                d.push_morphism("iota", &name, "path", po.iota.clone());
                d.push_morphism("pi", "path", "sum", po.pi.clone());
                d
            }
        },
    };
    Ok(emit_document(&doc))
}

pub fn tensor<F: Field>(left: &Document<F>, ln: Option<&str>, right: &Document<F>, rn: Option<&str>) -> Result<Outcome> {
    let (_, a) = left.pick_complex(ln)?;
    let (_, c) = right.pick_complex(rn)?;
    let t = tensor_product(&a, &c)?;
    Ok(emit_document(&Document::with_complex(&left.field, "tensor", Arc::new(t))))
}

pub fn dsum<F: Field>(left: &Document<F>, ln: Option<&str>, right: &Document<F>, rn: Option<&str>) -> Result<Outcome> {
    let (_, a) = left.pick_complex(ln)?;
    let (_, c) = right.pick_complex(rn)?;
    let s = direct_sum(&a, &c)?;
    Ok(emit_document(&Document::with_complex(&left.field, "sum", s.object)))
}

pub fn pushout<F: Field>(doc: &Document<F>, f: &str, g: &str) -> Result<Outcome> {
    let find = |n: &str| {
        doc.morphisms
            .iter()
            .find(|m| m.0 == n)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("no morphism named `{n}`")))
    };
    let (fname, _, fb, fm) = find(f)?;
    let (gname, _, gc, gm) = find(g)?;
    let po = pushout_of(&fm, &gm)?;
    let mut d = Document::new(&doc.field, doc.bound);
    d.push_complex(&fb, fm.target().clone());
    if gc != fb {
        d.push_complex(&gc, gm.target().clone());
    }
    d.push_complex("pushout", po.object.clone());
    d.push_morphism(&format!("{fname}_leg"), &fb, "pushout", po.left.clone());
    d.push_morphism(&format!("{gname}_leg"), &gc, "pushout", po.right.clone());
    Ok(emit_document(&d))
}

pub fn extend<F: Field>(doc: &Document<F>, object: Option<&str>, to: Bound) -> Result<Outcome> {
    let (_, a) = doc.pick_complex(object)?;
    let (e, _) = extend_scalars(&a, to)?;
    Ok(emit_document(&Document::with_complex(&doc.field, "extended", e)))
}

pub fn restrict<F: Field>(doc: &Document<F>, object: Option<&str>, to: Bound) -> Result<Outcome> {
    let (_, a) = doc.pick_complex(object)?;
    let e = restrict_scalars(&a, to)?;
    Ok(emit_document(&Document::with_complex(&doc.field, "restricted", Arc::new(e))))
}

pub fn truncate<F: Field>(doc: &Document<F>, object: Option<&str>, mode: TruncMode) -> Result<Outcome> {
    let (_, a) = doc.pick_complex(object)?;
    let (t, _) = match mode {
        TruncMode::Left => truncate_left(&a)?,
        TruncMode::Upper => truncate_upper(&a)?,
    };
    Ok(emit_document(&Document::with_complex(&doc.field, "truncated", t)))
}

/// Dimensions of `𝒞_n` by bidegree up to `max_weight`, optionally with the
/// dg identities checked on every word.
pub fn cn<F: Field>(field: &F, n: Bound, max_weight: usize, check_dg: bool) -> Result<Outcome> {
    let words = all_words(max_weight);
    let mut by_bidegree: BTreeMap<Bidegree, Vec<Vec<usize>>> = BTreeMap::new();
    for w in &words {
        by_bidegree.entry(word_bidegree(w)).or_default().push(w.clone());
    }
    let mut dims = BTreeMap::new();
    for (at, ws) in &by_bidegree {
        let index: BTreeMap<&Vec<usize>, usize> = ws.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let rows: Vec<Vec<F::Elem>> = ws
            .iter()
            .map(|w| {
                let x = CnElement::word(field, n, w.clone());
                let mut v = vec![field.zero(); ws.len()];
                for (t, c) in x.terms() {
                    v[index[t]] = c.clone();
                }
                v
            })
            .collect();
        let d = Matrix::from_rows(field, ws.len(), rows).rank();
        if d > 0 {
            dims.insert(*at, d);
        }
    }
    let mut j = json!({"command": "cn", "n": n.to_string(), "max_weight": max_weight, "dims": dims_json(&dims)});
    let mut table = String::new();
    line(&mut table, format!("C_{n} up to weight {max_weight}: basis dimensions by bidegree"));
    table.push_str(&grid(&dims, None));
    let mut ok = true;
    if check_dg {
        let mut failures = Vec::new();
        let mut ideal_cases = 0usize;
        for w in &words {
            let x = CnElement::word(field, n, w.clone());
            if !delta0(&delta0(&x)).is_zero() {
                failures.push(format!("delta0^2 != 0 on {w:?}"));
            }
            if n == Bound::Infinite {
                let y = delta0(&contracting_h(&x)).add(&contracting_h(&delta0(&x)));
                let want = if w.is_empty() || w == &[1] { CnElement::zero(field, n) } else { x.clone() };
                if y != want {
                    failures.push(format!("delta0 h + h delta0 != id on {w:?}"));
                }
            }
        }
        if let Bound::Finite(k) = n {
            // h sends the generators u g v of the ideal back into the ideal.
            let inf = Bound::Infinite;
            let in_ideal = |x: &CnElement<F>| CnElement::from_terms(field, n, x.terms().clone()).is_zero();
            for kk in k..=max_weight.max(k) {
                for c in all_words(max_weight.saturating_sub(kk)) {
                    let c = CnElement::word(field, inf, c);
                    let d1 = CnElement::letter(field, inf, 1);
                    let gens = [
                        CnElement::letter(field, inf, kk).mul(&c),
                        s_element(field, inf, kk).mul(&c),
                        d1.mul(&CnElement::letter(field, inf, kk)).mul(&c),
                        d1.mul(&s_element(field, inf, kk)).mul(&c),
                    ];
                    for g in gens {
                        ideal_cases += 1;
                        if !in_ideal(&g) || !in_ideal(&contracting_h(&g)) {
                            failures.push(format!("h leaves I_{k} on a generator of weight {}", kk));
                        }
                    }
                }
            }
        }
        ok = failures.is_empty();
        j["check"] = json!({"ok": ok, "words": words.len(), "ideal_cases": ideal_cases, "failures": failures});
        line(&mut table, format!("dg identities on {} words, {} ideal cases: {}", words.len(), ideal_cases, if ok { "ok" } else { "FAILED" }));
        for f in &failures {
            line(&mut table, format!("  {f}"));
        }
    }
    Ok(Outcome::new(ok, j, table))
}
