//! Tensor products, direct sums, quotients by subcomplexes and pushouts.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bigraded::{Bidegree, BigradedModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vector, Matrix, Subspace};
use crate::multicomplex::{Bound, Morphism, Multicomplex};

/// Position of the pair block `A^a ⊗ B^b` inside `(A ⊗ B)^{a+b}`.
#[derive(Clone, Debug, Default)]
pub struct TensorLayout {
    offsets: BTreeMap<(Bidegree, Bidegree), usize>,
    dims: BTreeMap<Bidegree, usize>,
}

impl TensorLayout {
    pub fn new(a: &BigradedModule, b: &BigradedModule) -> Self {
        let mut out = TensorLayout::default();
        for (x, dx) in a.iter() {
            for (y, dy) in b.iter() {
                let slot = out.dims.entry(x + y).or_insert(0);
                out.offsets.insert((x, y), *slot);
                *slot += dx * dy;
            }
        }
        out
    }

    pub fn module(&self) -> BigradedModule {
        BigradedModule::from_dims(self.dims.iter().map(|(b, d)| (*b, *d)))
    }

    /// Offset of `A^a ⊗ B^b`; basis index of `e_i ⊗ e_j` is
    /// `offset + i * dim B^b + j`.
    pub fn offset(&self, a: Bidegree, b: Bidegree) -> Option<usize> {
        self.offsets.get(&(a, b)).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Bidegree, Bidegree, usize)> + '_ {
        self.offsets.iter().map(|((a, b), o)| (*a, *b, *o))
    }
}

/// `A ⊗ B` with `d_i(a ⊗ b) = d_i a ⊗ b + (-1)^{i a_1 + (1-i) a_2} a ⊗ d_i b`.
///
/// The declared bound is the larger of the two: a nonzero `d_i` of either
/// factor survives in the product.
pub fn tensor<F: Field>(a: &Multicomplex<F>, b: &Multicomplex<F>) -> Result<(Multicomplex<F>, TensorLayout)> {
    a.same_field(b)?;
    let f = a.field();
    let layout = TensorLayout::new(a.module(), b.module());
    let module = layout.module();
    let bound = a.bound().max(b.bound());
    let mut out = Multicomplex::new(f, bound, module.clone());
    let maps = a.num_maps().max(b.num_maps());
    for i in 0..maps {
        let mut blocks: BTreeMap<Bidegree, Matrix<F>> = BTreeMap::new();
        for (x, y, off) in layout.pairs() {
            let (dx, dy) = (a.dim(x), b.dim(y));
            let c = x + y;
            let tc = c.d(i);
            let block = blocks
                .entry(c)
                .or_insert_with(|| Matrix::zeros(f, module.dim(tc), module.dim(c)));
            // d_i a ⊗ b
            if let Some(m) = a.d_ref(i).and_then(|d| d.block_ref(x)) {
                if let Some(to) = layout.offset(x.d(i), y) {
                    for s in 0..dx {
                        for t in 0..dy {
                            for u in 0..m.nrows() {
                                let v = m.get(u, s);
                                if !f.is_zero(v) {
                                    block.set(to + u * dy + t, off + s * dy + t, v.clone());
                                }
                            }
                        }
                    }
                }
            }
            // sign * a ⊗ d_i b
            if let Some(m) = b.d_ref(i).and_then(|d| d.block_ref(y)) {
                if let Some(to) = layout.offset(x, y.d(i)) {
                    let sign = f.sign(i as i64 * x.p + (1 - i as i64) * x.q);
                    let ty = m.nrows();
                    for s in 0..dx {
                        for t in 0..dy {
                            for u in 0..ty {
                                let v = m.get(u, t);
                                if !f.is_zero(v) {
                                    let (row, col) = (to + s * ty + u, off + s * dy + t);
                                    let cur = block.get(row, col).clone();
                                    block.set(row, col, f.add(&cur, &f.mul(&sign, v)));
                                }
                            }
                        }
                    }
                }
            }
        }
        for (c, m) in blocks {
            out.set_d(i, c, m)?;
        }
    }
    out.set_horizon(tensor_horizon(a, b));
    Ok((out, layout))
}

/// A cut factor `A` (exact from `h` on) contributes missing terms only at
/// `p < h + max p(B)`.
fn tensor_horizon<F: Field>(a: &Multicomplex<F>, b: &Multicomplex<F>) -> Option<i64> {
    let top = |m: &Multicomplex<F>| m.module().bounds().map(|x| x.1);
    let one = |x: &Multicomplex<F>, y: &Multicomplex<F>| x.horizon().zip(top(y)).map(|(h, t)| h + t);
    match (one(a, b), one(b, a)) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

/// Just the tensor product object.
pub fn tensor_product<F: Field>(a: &Multicomplex<F>, b: &Multicomplex<F>) -> Result<Multicomplex<F>> {
    tensor(a, b).map(|(m, _)| m)
}

/// `f ⊗ g : A ⊗ B → A' ⊗ B'` between given products.
pub fn tensor_morphisms<F: Field>(
    f: &Morphism<F>,
    g: &Morphism<F>,
    source: Arc<Multicomplex<F>>,
    target: Arc<Multicomplex<F>>,
) -> Result<Morphism<F>> {
    let k = f.field();
    let ls = TensorLayout::new(f.source().module(), g.source().module());
    let lt = TensorLayout::new(f.target().module(), g.target().module());
    let mut blocks: BTreeMap<Bidegree, Matrix<F>> = BTreeMap::new();
    for (x, y, off) in ls.pairs() {
        let Some(to) = lt.offset(x, y) else { continue };
        let c = x + y;
        let fm = f.block(x);
        let gm = g.block(y);
        let block = blocks
            .entry(c)
            .or_insert_with(|| Matrix::zeros(k, target.dim(c), source.dim(c)));
        let (sx, sy, tx, ty) = (fm.ncols(), gm.ncols(), fm.nrows(), gm.nrows());
        for s in 0..sx {
            for t in 0..sy {
                for u in 0..tx {
                    let a = fm.get(u, s);
                    if k.is_zero(a) {
                        continue;
                    }
                    for v in 0..ty {
                        let bv = gm.get(v, t);
                        if !k.is_zero(bv) {
                            block.set(to + u * ty + v, off + s * sy + t, k.mul(a, bv));
                        }
                    }
                }
            }
        }
    }
    Morphism::from_blocks(source, target, blocks)
}

/// The swap `a ⊗ b ↦ (-1)^{a_1 b_1 + a_2 b_2} b ⊗ a` from `A ⊗ B` to `B ⊗ A`.
pub fn symmetry<F: Field>(
    a: &Multicomplex<F>,
    b: &Multicomplex<F>,
    ab: Arc<Multicomplex<F>>,
    ba: Arc<Multicomplex<F>>,
) -> Result<Morphism<F>> {
    let f = a.field();
    let l_ab = TensorLayout::new(a.module(), b.module());
    let l_ba = TensorLayout::new(b.module(), a.module());
    let mut blocks: BTreeMap<Bidegree, Matrix<F>> = BTreeMap::new();
    for (x, y, off) in l_ab.pairs() {
        let to = l_ba.offset(y, x).expect("swapped pair exists");
        let c = x + y;
        let sign = f.sign(x.p * y.p + x.q * y.q);
        let (dx, dy) = (a.dim(x), b.dim(y));
        let block = blocks
            .entry(c)
            .or_insert_with(|| Matrix::zeros(f, ba.dim(c), ab.dim(c)));
        for s in 0..dx {
            for t in 0..dy {
                block.set(to + t * dx + s, off + s * dy + t, sign.clone());
            }
        }
    }
    Morphism::from_blocks(ab, ba, blocks)
}

/// `A_1 ⊕ … ⊕ A_k` with its inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub object: Arc<Multicomplex<F>>,
    pub inclusions: Vec<Morphism<F>>,
    pub projections: Vec<Morphism<F>>,
}

pub fn direct_sum<F: Field>(a: &Arc<Multicomplex<F>>, b: &Arc<Multicomplex<F>>) -> Result<DirectSum<F>> {
    direct_sum_all(&[a.clone(), b.clone()])
}

pub fn direct_sum_all<F: Field>(parts: &[Arc<Multicomplex<F>>]) -> Result<DirectSum<F>> {
    let refs: Vec<&Multicomplex<F>> = parts.iter().map(|p| p.as_ref()).collect();
    let object = Arc::new(direct_sum_object(&refs)?);
    let f = object.field().clone();
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        let mut inc = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for c in part.support() {
            let before: usize = parts[..k].iter().map(|p| p.dim(c)).sum();
            let mut m = Matrix::zeros(&f, object.dim(c), part.dim(c));
            m.place(before, 0, &Matrix::identity(&f, part.dim(c)));
            proj.insert(c, m.transpose());
            inc.insert(c, m);
        }
        inclusions.push(Morphism::from_blocks(part.clone(), object.clone(), inc)?);
        projections.push(Morphism::from_blocks(object.clone(), part.clone(), proj)?);
    }
    Ok(DirectSum {
        object,
        inclusions,
        projections,
    })
}

/// Block-diagonal sum of several multicomplexes (summands stacked in order).
pub fn direct_sum_object<F: Field>(parts: &[&Multicomplex<F>]) -> Result<Multicomplex<F>> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
    for p in parts {
        first.same_category(p)?;
    }
    let f = first.field();
    let module = BigradedModule::from_dims(parts.iter().flat_map(|p| p.module().iter().collect::<Vec<_>>()));
    let mut out = Multicomplex::new(f, first.bound(), module.clone());
    let maps = parts.iter().map(|p| p.num_maps()).max().unwrap_or(0);
    for i in 0..maps {
        for c in module.support() {
            let tc = c.d(i);
            let mut block = Matrix::zeros(f, module.dim(tc), module.dim(c));
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                if let Some(m) = p.d_ref(i).and_then(|d| d.block_ref(c)) {
                    block.place(r0, c0, m);
                }
                r0 += p.dim(tc);
                c0 += p.dim(c);
            }
            out.set_d(i, c, block)?;
        }
    }
    out.set_horizon(parts.iter().filter_map(|p| p.horizon()).max());
    Ok(out)
}

/// A family of subspaces, one per bidegree of an ambient multicomplex.
#[derive(Clone, Debug)]
pub struct Subcomplex<F: Field> {
    field: F,
    parts: BTreeMap<Bidegree, Subspace<F>>,
}

impl<F: Field> Subcomplex<F> {
    pub fn zero(field: &F) -> Self {
        Subcomplex {
            field: field.clone(),
            parts: BTreeMap::new(),
        }
    }

    pub fn at(&self, ambient: &Multicomplex<F>, b: Bidegree) -> Subspace<F> {
        self.parts
            .get(&b)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(&self.field, ambient.dim(b)))
    }

    pub fn get(&self, b: Bidegree) -> Option<&Subspace<F>> {
        self.parts.get(&b)
    }

    pub fn add_vectors(&mut self, ambient: &Multicomplex<F>, b: Bidegree, vs: Vec<Vec<F::Elem>>) -> bool {
        let vs: Vec<_> = vs.into_iter().filter(|v| !vector::is_zero(&self.field, v)).collect();
        if vs.is_empty() {
            return false;
        }
        let cur = self.at(ambient, b);
        let grown = cur.sum(&Subspace::span(&self.field, ambient.dim(b), vs));
        let changed = grown.dim() > cur.dim();
        if changed {
            self.parts.insert(b, grown);
        }
        changed
    }

    pub fn set(&mut self, b: Bidegree, s: Subspace<F>) {
        self.parts.insert(b, s);
    }

    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.parts.iter().filter(|(_, s)| s.dim() > 0).map(|(b, s)| (*b, s.dim())).collect()
    }

    /// Closure under every structure map of `ambient`.
    pub fn saturate(&mut self, ambient: &Multicomplex<F>) {
        let mut dirty: Vec<Bidegree> = self.parts.keys().copied().collect();
        while let Some(b) = dirty.pop() {
            let basis = self.at(ambient, b).basis().to_vec();
            for i in 0..ambient.num_maps() {
                let imgs: Vec<_> = basis.iter().map(|v| ambient.apply_d(i, b, v)).collect();
                if self.add_vectors(ambient, b.d(i), imgs) {
                    dirty.push(b.d(i));
                }
            }
        }
    }

    pub fn is_closed(&self, ambient: &Multicomplex<F>) -> bool {
        self.parts.iter().all(|(b, s)| {
            (0..ambient.num_maps()).all(|i| {
                let t = self.at(ambient, b.d(i));
                s.basis().iter().all(|v| t.contains(&ambient.apply_d(i, *b, v)))
            })
        })
    }
}

/// `A / S` for a subcomplex `S`, with the projection. Representatives are
/// standard vectors at the non-pivot coordinates of each `S^b`.
pub fn quotient<F: Field>(a: &Arc<Multicomplex<F>>, sub: &Subcomplex<F>) -> Result<(Arc<Multicomplex<F>>, Morphism<F>)> {
    if !sub.is_closed(a) {
        return Err(Error::InvalidArgument("quotient by a non-closed subspace family".into()));
    }
    let f = a.field();
    let mut free: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
    for b in a.support() {
        free.insert(b, sub.at(a, b).free_columns());
    }
    let module = BigradedModule::from_dims(free.iter().map(|(b, c)| (*b, c.len())));
    // Projection: reduce modulo S, read off free coordinates.
    let project = |b: Bidegree, v: &[F::Elem]| -> Vec<F::Elem> {
        let r = sub.at(a, b).reduce(v);
        free.get(&b).map_or(Vec::new(), |cols| cols.iter().map(|&c| r[c].clone()).collect())
    };
    let mut out = Multicomplex::new(f, a.bound(), module.clone());
    for i in 0..a.num_maps() {
        for b in module.support() {
            let cols: Vec<Vec<F::Elem>> = free[&b]
                .iter()
                .map(|&c| project(b.d(i), &a.apply_d(i, b, &vector::unit(f, a.dim(b), c))))
                .collect();
            out.set_d(i, b, Matrix::from_columns(f, module.dim(b.d(i)), &cols))?;
        }
    }
    out.set_horizon(a.horizon());
    let out = Arc::new(out);
    let mut blocks = BTreeMap::new();
    for b in a.support() {
        let cols: Vec<Vec<F::Elem>> = (0..a.dim(b))
            .map(|c| project(b, &vector::unit(f, a.dim(b), c)))
            .collect();
        blocks.insert(b, Matrix::from_columns(f, module.dim(b), &cols));
    }
    let proj = Morphism::from_blocks(a.clone(), out.clone(), blocks)?;
    Ok((out, proj))
}

/// A subcomplex as a multicomplex in its own right, with the inclusion.
pub fn subobject<F: Field>(a: &Arc<Multicomplex<F>>, sub: &Subcomplex<F>) -> Result<(Arc<Multicomplex<F>>, Morphism<F>)> {
    if !sub.is_closed(a) {
        return Err(Error::InvalidArgument("subobject of a non-closed subspace family".into()));
    }
    let f = a.field();
    let module = BigradedModule::from_dims(sub.dims());
    let mut out = Multicomplex::new(f, a.bound(), module.clone());
    for i in 0..a.num_maps() {
        for b in module.support() {
            let t = b.d(i);
            let target = sub.at(a, t);
            let cols: Vec<Vec<F::Elem>> = sub
                .at(a, b)
                .basis()
                .iter()
                .map(|v| target.coordinates(&a.apply_d(i, b, v)).expect("subcomplex is closed"))
                .collect();
            out.set_d(i, b, Matrix::from_columns(f, module.dim(t), &cols))?;
        }
    }
    out.set_horizon(a.horizon());
    let out = Arc::new(out);
    let blocks: Vec<(Bidegree, Matrix<F>)> = module
        .support()
        .map(|b| (b, Matrix::from_columns(f, a.dim(b), sub.at(a, b).basis())))
        .collect();
    let inc = Morphism::from_blocks(out.clone(), a.clone(), blocks)?;
    Ok((out, inc))
}

/// Pushout of `B ← A → C`.
#[derive(Clone, Debug)]
pub struct Pushout<F: Field> {
    pub object: Arc<Multicomplex<F>>,
    pub left: Morphism<F>,
    pub right: Morphism<F>,
    /// `B ⊕ C → P`.
    projection: Morphism<F>,
}

/// `(B ⊕ C) / {(f a, -g a)}`. Quotient representatives favour `B`
/// coordinates: pivots are taken in `C` first.
pub fn pushout<F: Field>(f: &Morphism<F>, g: &Morphism<F>) -> Result<Pushout<F>> {
    if f.source().module() != g.source().module() {
        return Err(Error::ShapeMismatch("pushout legs need a common source".into()));
    }
    let (b, c) = (f.target(), g.target());
    b.same_category(c)?;
    let k = f.field();
    let sum = direct_sum(b, c)?;
    let obj = &sum.object;
    let mut sub = Subcomplex::zero(k);
    for at in f.source().support() {
        let (db, dc) = (b.dim(at), c.dim(at));
        if db + dc == 0 {
            continue;
        }
        let vs: Vec<Vec<F::Elem>> = (0..f.source().dim(at))
            .map(|s| {
                let e = vector::unit(k, f.source().dim(at), s);
                let mut v = f.apply(at, &e);
                v.extend(g.apply(at, &e).iter().map(|x| k.neg(x)));
                v
            })
            .collect();
        let order: Vec<usize> = (db..db + dc).chain(0..db).collect();
        let vs: Vec<_> = vs.into_iter().filter(|v| !vector::is_zero(k, v)).collect();
        sub.set(at, Subspace::span_with_order(k, db + dc, vs, &order));
    }
    // The span is already closed because f and g commute with every d_i.
    let (object, projection) = quotient(obj, &sub)?;
    let left = projection.after(&sum.inclusions[0])?;
    let right = projection.after(&sum.inclusions[1])?;
    Ok(Pushout {
        object,
        left,
        right,
        projection,
    })
}

impl<F: Field> Pushout<F> {
    /// The map `P → T` induced by a cocone `u: B → T`, `v: C → T` with
    /// `u f = v g`.
    pub fn induced(&self, f: &Morphism<F>, g: &Morphism<F>, u: &Morphism<F>, v: &Morphism<F>) -> Result<Morphism<F>> {
        if !u.after(f)?.equals(&v.after(g)?) {
            return Err(Error::InvalidMorphism("cocone does not commute".into()));
        }
        let k = f.field();
        let target = u.target().clone();
        let mut blocks = BTreeMap::new();
        for at in self.object.support() {
            // Any preimage in B ⊕ C of a basis vector of P will do.
            let proj = self.projection.block(at);
            let uv = u.block(at).hstack(&v.block(at));
            let mut cols = Vec::new();
            for j in 0..self.object.dim(at) {
                let e = vector::unit(k, self.object.dim(at), j);
                let pre = crate::linalg::solve(&proj, &e)
                    .solution()
                    .ok_or_else(|| Error::InvalidMorphism("pushout projection not onto".into()))?;
                cols.push(uv.mul_vec(&pre));
            }
            blocks.insert(at, Matrix::from_columns(k, target.dim(at), &cols));
        }
        let m = Morphism::from_blocks(self.object.clone(), target, blocks)?;
        Morphism::checked(m.source().clone(), m.target().clone(), m.map().clone())
    }
}

/// Zero multicomplex in the same category as `a`.
pub fn zero_like<F: Field>(a: &Multicomplex<F>) -> Arc<Multicomplex<F>> {
    Arc::new(Multicomplex::zero(a.field(), a.bound()))
}

/// The unit `𝕜^{0,0}` with bound `bound`.
pub fn unit<F: Field>(field: &F, bound: Bound) -> Arc<Multicomplex<F>> {
    Arc::new(Multicomplex::point(field, bound, Bidegree::default()))
}
