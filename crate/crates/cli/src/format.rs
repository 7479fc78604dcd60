//! The document format: JSON Lines, one record per line.
//!
//! ```text
//! {"kind":"header","format":"multicx","version":1,"field":"gf2","n":2}
//! {"kind":"complex","name":"corner","support":[[-1,-1,1],[-1,0,1],[0,0,1]]}
//! {"kind":"entry","complex":"corner","i":0,"from":[-1,-1],"row":0,"col":0,"value":"1"}
//! {"kind":"morphism","name":"pi","source":"corner","target":"k"}
//! {"kind":"mentry","morphism":"pi","at":[0,0],"row":0,"col":0,"value":"1"}
//! ```
//!
//! `n` is a positive integer or `"inf"`. Values are strings in the field's
//! canonical form (`"3"`, `"-1/2"`); bare integers are accepted on input.
//! An entry of `d_i` at `from` sits in the block from `from` to
//! `from + (-i, 1-i)`. A complex may carry `"horizon": m`, meaning it is a
//! quotient cut off below `p = m`. Blank lines and lines starting with `#`
//! are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use multicx::{Bidegree, BigradedModule, Bound, Field, FieldSpec, Matrix, Morphism, Multicomplex};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const FORMAT: &str = "multicx";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NField {
    Int(usize),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Text(String),
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Record {
    Header {
        format: String,
        version: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field: Option<String>,
        n: NField,
    },
    Complex {
        name: String,
        support: Vec<(i64, i64, usize)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<i64>,
    },
    Entry {
        complex: String,
        i: usize,
        from: (i64, i64),
        row: usize,
        col: usize,
        value: Value,
    },
    Morphism {
        name: String,
        source: String,
        target: String,
    },
    Mentry {
        morphism: String,
        at: (i64, i64),
        row: usize,
        col: usize,
        value: Value,
    },
}

/// A parsed but not yet typed document.
#[derive(Clone, Debug)]
pub struct RawDocument {
    pub source_name: String,
    pub field: Option<FieldSpec>,
    pub bound: Bound,
    pub records: Vec<(usize, Record)>,
}

fn bd((p, q): (i64, i64)) -> Bidegree {
    Bidegree::new(p, q)
}

impl RawDocument {
    pub fn parse(source_name: &str, text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| CliError::Parse {
            source_name: source_name.to_string(),
            line,
            msg,
        };
        let mut records = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let rec: Record = serde_json::from_str(t).map_err(|e| err(k + 1, e.to_string()))?;
            records.push((k + 1, rec));
        }
        let Some((hl, Record::Header { format, version, field, n })) = records.first().cloned() else {
            return Err(err(records.first().map_or(1, |r| r.0), "the first record must be the header".into()));
        };
        if format != FORMAT || version != VERSION {
            return Err(err(hl, format!("unsupported format {format} v{version}")));
        }
        if let Some((l, _)) = records.iter().skip(1).find(|(_, r)| matches!(r, Record::Header { .. })) {
            return Err(err(*l, "second header".into()));
        }
        let field = field
            .map(|f| f.parse::<FieldSpec>().map_err(|e| err(hl, e.to_string())))
            .transpose()?;
        let bound = match n {
            NField::Int(0) => return Err(err(hl, "n must be at least 1".into())),
            NField::Int(v) => Bound::Finite(v),
            NField::Text(s) if s == "inf" => Bound::Infinite,
            NField::Text(s) => return Err(err(hl, format!("n must be a positive integer or \"inf\", got {s:?}"))),
        };
        records.remove(0);
        Ok(RawDocument {
            source_name: source_name.to_string(),
            field,
            bound,
            records,
        })
    }

    /// Builds typed objects; with `validate`, relation and commutation
    /// failures become [`CliError::Validation`].
    pub fn build<F: Field>(&self, field: &F, validate: bool) -> Result<Document<F>> {
        let err = |line: usize, msg: String| CliError::Parse {
            source_name: self.source_name.clone(),
            line,
            msg,
        };
        let mut doc = Document::new(field, self.bound);
        let mut entries: BTreeMap<(String, usize, Bidegree), (usize, Matrix<F>)> = BTreeMap::new();
        let mut seen: BTreeSet<(String, usize, Bidegree, usize, usize)> = BTreeSet::new();
        let mut modules: BTreeMap<String, (BigradedModule, Option<i64>)> = BTreeMap::new();
        let mut order = Vec::new();
        let mut morphisms: Vec<(usize, String, String, String)> = Vec::new();
        let mut mentries: BTreeMap<String, BTreeMap<Bidegree, Matrix<F>>> = BTreeMap::new();
        for (line, rec) in &self.records {
            let line = *line;
            match rec {
                Record::Header { .. } => unreachable!("header checked in parse"),
                Record::Complex { name, support, horizon } => {
                    if modules.contains_key(name) {
                        return Err(err(line, format!("duplicate complex `{name}`")));
                    }
                    let mut m = BigradedModule::new();
                    for &(p, q, d) in support {
                        if m.dim(Bidegree::new(p, q)) != 0 {
                            return Err(err(line, format!("bidegree ({p},{q}) listed twice")));
                        }
                        m.set(Bidegree::new(p, q), d);
                    }
                    modules.insert(name.clone(), (m, *horizon));
                    order.push(name.clone());
                }
                Record::Entry { complex, i, from, row, col, value } => {
                    let (m, _) = modules
                        .get(complex)
                        .ok_or_else(|| err(line, format!("entry for undeclared complex `{complex}`")))?;
                    if !self.bound.allows(*i) {
                        return Err(err(line, format!("d_{i} does not exist for n = {}", self.bound)));
                    }
                    let from = bd(*from);
                    let to = from.d(*i);
                    let (cols, rows) = (m.dim(from), m.dim(to));
                    if cols == 0 || rows == 0 {
                        return Err(err(line, format!("d_{i} from {from} to {to} leaves the declared support")));
                    }
                    if *row >= rows || *col >= cols {
                        return Err(err(line, format!("entry ({row},{col}) outside the {rows}x{cols} block")));
                    }
                    if !seen.insert((complex.clone(), *i, from, *row, *col)) {
                        return Err(err(line, "duplicate entry".into()));
                    }
                    let v = field.parse(&value.text()).map_err(|e| err(line, e.to_string()))?;
                    let slot = entries
                        .entry((complex.clone(), *i, from))
                        .or_insert_with(|| (line, Matrix::zeros(field, rows, cols)));
                    slot.1.set(*row, *col, v);
                }
                Record::Morphism { name, source, target } => {
                    if morphisms.iter().any(|m| &m.1 == name) {
                        return Err(err(line, format!("duplicate morphism `{name}`")));
                    }
                    for c in [source, target] {
                        if !modules.contains_key(c) {
                            return Err(err(line, format!("morphism `{name}` refers to undeclared complex `{c}`")));
                        }
                    }
                    morphisms.push((line, name.clone(), source.clone(), target.clone()));
                    mentries.insert(name.clone(), BTreeMap::new());
                }
                Record::Mentry { morphism, at, row, col, value } => {
                    let (_, _, s, t) = morphisms
                        .iter()
                        .find(|m| &m.1 == morphism)
                        .ok_or_else(|| err(line, format!("entry for undeclared morphism `{morphism}`")))?;
                    let at = bd(*at);
                    let (cols, rows) = (modules[s].0.dim(at), modules[t].0.dim(at));
                    if *row >= rows || *col >= cols {
                        return Err(err(line, format!("entry ({row},{col}) outside the {rows}x{cols} block at {at}")));
                    }
                    let v = field.parse(&value.text()).map_err(|e| err(line, e.to_string()))?;
                    let block = mentries
                        .get_mut(morphism)
                        .expect("declared")
                        .entry(at)
                        .or_insert_with(|| Matrix::zeros(field, rows, cols));
                    if !field.is_zero(block.get(*row, *col)) {
                        return Err(err(line, "duplicate entry".into()));
                    }
                    block.set(*row, *col, v);
                }
            }
        }
        let mut built: BTreeMap<String, Multicomplex<F>> = order
            .iter()
            .map(|n| {
                let (m, h) = &modules[n];
                let mut c = Multicomplex::new(field, self.bound, m.clone());
                c.set_horizon(*h);
                (n.clone(), c)
            })
            .collect();
        for ((name, i, from), (line, m)) in entries {
            built
                .get_mut(&name)
                .expect("declared")
                .set_d(i, from, m)
                .map_err(|e| err(line, e.to_string()))?;
        }
        for name in &order {
            let c = built.remove(name).expect("built");
            if validate {
                if let Some(v) = c.validate().first() {
                    return Err(CliError::Validation(format!("{}: complex `{name}`: {v}", self.source_name)));
                }
            }
            doc.push_complex(name, Arc::new(c));
        }
        for (line, name, s, t) in morphisms {
            let blocks = mentries.remove(&name).expect("declared");
            let m = Morphism::from_blocks(doc.complex(&s)?.clone(), doc.complex(&t)?.clone(), blocks)
                .map_err(|e| err(line, e.to_string()))?;
            if validate {
                if let Some((i, at)) = m.validate().first() {
                    return Err(CliError::Validation(format!(
                        "{}: morphism `{name}`: d_{i} f != f d_{i} at {at}",
                        self.source_name
                    )));
                }
            }
            doc.push_morphism(&name, &s, &t, m);
        }
        Ok(doc)
    }
}

/// Named complexes and morphisms over one field and one bound.
#[derive(Clone, Debug)]
pub struct Document<F: Field> {
    pub field: F,
    pub bound: Bound,
    pub complexes: Vec<(String, Arc<Multicomplex<F>>)>,
    /// `(name, source name, target name, morphism)`.
    pub morphisms: Vec<(String, String, String, Morphism<F>)>,
}

impl<F: Field> Document<F> {
    pub fn new(field: &F, bound: Bound) -> Self {
        Document {
            field: field.clone(),
            bound,
            complexes: Vec::new(),
            morphisms: Vec::new(),
        }
    }

    pub fn with_complex(field: &F, name: &str, c: Arc<Multicomplex<F>>) -> Self {
        let mut d = Document::new(field, c.bound());
        d.push_complex(name, c);
        d
    }

    pub fn push_complex(&mut self, name: &str, c: Arc<Multicomplex<F>>) {
        self.complexes.push((name.to_string(), c));
    }

    pub fn push_morphism(&mut self, name: &str, source: &str, target: &str, m: Morphism<F>) {
        self.morphisms.push((name.to_string(), source.to_string(), target.to_string(), m));
    }

    pub fn complex(&self, name: &str) -> Result<&Arc<Multicomplex<F>>> {
        self.complexes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| CliError::Usage(format!("no complex named `{name}`")))
    }

    /// The named complex, or the first one.
    pub fn pick_complex(&self, name: Option<&str>) -> Result<(String, Arc<Multicomplex<F>>)> {
        match name {
            Some(n) => Ok((n.to_string(), self.complex(n)?.clone())),
            None => self
                .complexes
                .first()
                .cloned()
                .ok_or_else(|| CliError::Usage("document has no complex".into())),
        }
    }

    /// The named morphism, or the first one.
    pub fn pick_morphism(&self, name: Option<&str>) -> Result<(String, Morphism<F>)> {
        let found = match name {
            Some(n) => self.morphisms.iter().find(|m| m.0 == n),
            None => self.morphisms.first(),
        };
        found
            .map(|m| (m.0.clone(), m.3.clone()))
            .ok_or_else(|| CliError::Usage(format!("no morphism named `{}`", name.unwrap_or("<first>"))))
    }

    fn records(&self) -> Vec<Record> {
        let f = &self.field;
        let n = match self.bound {
            Bound::Finite(k) => NField::Int(k),
            Bound::Infinite => NField::Text("inf".into()),
        };
        let mut out = vec![Record::Header {
            format: FORMAT.into(),
            version: VERSION,
            field: Some(f.spec().to_string()),
            n,
        }];
        for (name, c) in &self.complexes {
            out.push(Record::Complex {
                name: name.clone(),
                support: c.module().iter().map(|(b, d)| (b.p, b.q, d)).collect(),
                horizon: c.horizon(),
            });
            for i in 0..c.num_maps() {
                for from in c.support() {
                    let m = c.d_block(i, from);
                    for row in 0..m.nrows() {
                        for col in 0..m.ncols() {
                            let v = m.get(row, col);
                            if !f.is_zero(v) {
                                out.push(Record::Entry {
                                    complex: name.clone(),
                                    i,
                                    from: (from.p, from.q),
                                    row,
                                    col,
                                    value: Value::Text(f.format(v)),
                                });
                            }
                        }
                    }
                }
            }
        }
        for (name, s, t, m) in &self.morphisms {
            out.push(Record::Morphism {
                name: name.clone(),
                source: s.clone(),
                target: t.clone(),
            });
            for at in m.source().support() {
                let b = m.block(at);
                for row in 0..b.nrows() {
                    for col in 0..b.ncols() {
                        let v = b.get(row, col);
                        if !f.is_zero(v) {
                            out.push(Record::Mentry {
                                morphism: name.clone(),
                                at: (at.p, at.q),
                                row,
                                col,
                                value: Value::Text(f.format(v)),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Canonical text: header, complexes in order with entries sorted by
    /// `(i, from, row, col)`, then morphisms.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in self.records() {
            s.push_str(&serde_json::to_string(&r).expect("records serialize"));
            s.push('\n');
        }
        s
    }
}
