//! Rendering of command results. Every command produces the same data in
//! both modes: a JSON value and a plain-text table.

use std::collections::BTreeMap;
use std::fmt::Write;

use multicx::{Bidegree, BigradedModule};
use serde_json::{json, Value};

/// What a command prints, and whether the property it tested held.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub ok: bool,
    pub json: String,
    pub table: String,
}

impl Outcome {
    pub fn new(ok: bool, json: Value, table: String) -> Self {
        Outcome {
            ok,
            json: format!("{}\n", serde_json::to_string(&json).expect("json values serialize")),
            table,
        }
    }

    pub fn document(text: String, table: String) -> Self {
        Outcome {
            ok: true,
            json: text,
            table,
        }
    }
}

/// Entries in display order: `q` descending, then `p` ascending.
pub fn display_order<T: Clone>(m: &BTreeMap<Bidegree, T>) -> Vec<(Bidegree, T)> {
    let mut v: Vec<(Bidegree, T)> = m.iter().map(|(b, t)| (*b, t.clone())).collect();
    v.sort_by_key(|(b, _)| (-b.q, b.p));
    v
}

pub fn dims_json(m: &BTreeMap<Bidegree, usize>) -> Value {
    Value::Array(
        display_order(m)
            .into_iter()
            .map(|(b, d)| json!({"p": b.p, "q": b.q, "dim": d}))
            .collect(),
    )
}

/// An ASCII grid of dimensions over the bounding box of `frame` (or of the
/// entries themselves), rows `q` descending, columns `p` ascending, zero
/// shown as `.`.
pub fn grid(m: &BTreeMap<Bidegree, usize>, frame: Option<&BigradedModule>) -> String {
    let mut pts: Vec<Bidegree> = m.iter().filter(|(_, d)| **d > 0).map(|(b, _)| *b).collect();
    if let Some(f) = frame {
        pts.extend(f.support());
    }
    if m.values().all(|d| *d == 0) {
        return "zero\n".into();
    }
    let pmin = pts.iter().map(|b| b.p).min().expect("nonempty");
    let pmax = pts.iter().map(|b| b.p).max().expect("nonempty");
    let qmin = pts.iter().map(|b| b.q).min().expect("nonempty");
    let qmax = pts.iter().map(|b| b.q).max().expect("nonempty");
    let cell = |s: &str| format!("{s:>4}");
    let mut out = String::new();
    out.push_str(&format!("{:>5}", "q\\p"));
    for p in pmin..=pmax {
        out.push_str(&cell(&p.to_string()));
    }
    out.push('\n');
    for q in (qmin..=qmax).rev() {
        out.push_str(&format!("{q:>5}"));
        for p in pmin..=pmax {
            let d = m.get(&Bidegree::new(p, q)).copied().unwrap_or(0);
            out.push_str(&cell(&if d == 0 { ".".to_string() } else { d.to_string() }));
        }
        out.push('\n');
    }
    out
}

/// Reads a [`grid`] back into a map of nonzero dimensions.
pub fn parse_grid(text: &str) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    let mut lines = text.lines().skip_while(|l| !l.trim_start().starts_with("q\\p"));
    let Some(head) = lines.next() else { return out };
    let ps: Vec<i64> = head.split_whitespace().skip(1).map(|t| t.parse().expect("column label")).collect();
    for line in lines {
        let mut it = line.split_whitespace();
        let Some(Ok(q)) = it.next().map(str::parse::<i64>) else { break };
        for (p, t) in ps.iter().zip(it) {
            if t != "." {
                out.insert(Bidegree::new(*p, q), t.parse().expect("cell"));
            }
        }
    }
    out
}

pub fn yes_no(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "no"
    }
}

pub fn line(out: &mut String, s: impl AsRef<str>) {
    let _ = writeln!(out, "{}", s.as_ref());
}
