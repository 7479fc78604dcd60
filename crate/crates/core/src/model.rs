//! Model-structure content: fibration classifiers, lifting problems, the
//! cones `C_r` and `C_r^∞`, path objects, `r`-homotopies and the generating
//! (trivial) cofibrations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use crate::bigraded::{Bidegree, BigradedModule, GradedMap};
use crate::constructions::{direct_sum, tensor, DirectSum};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::fixtures;
use crate::hom::{Certificate, MorphismSystem, Solved};
use crate::linalg::{self, Matrix, Solve};
use crate::multicomplex::{Bound, Morphism, Multicomplex};
use crate::represent::{bw_object, iota, window_for, zw_object};
use crate::spectral::{is_er_quasi_iso, is_surjective, page_surjective, zw_surjective, Check};

/// Which of the two model structures a fibration test refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Style {
    /// `f` and `ZW_r(f)` surjective.
    Witness,
    /// `E_i(f)` surjective for `0 <= i <= r`.
    #[default]
    Page,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Witness => "witness",
            Style::Page => "page",
        })
    }
}

impl FromStr for Style {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "witness" | "z" => Ok(Style::Witness),
            "page" | "e" => Ok(Style::Page),
            _ => Err(Error::InvalidArgument(format!("unknown fibration style `{s}`"))),
        }
    }
}

pub fn is_fibration<F: Field>(f: &Morphism<F>, r: usize, style: Style, exec: Exec) -> Result<Check> {
    match style {
        Style::Witness => {
            let c = is_surjective(f);
            if !c.ok {
                return Ok(c);
            }
            Ok(zw_surjective(f, r, exec))
        }
        Style::Page => {
            for i in 0..=r {
                let c = page_surjective(f, i, exec)?;
                if !c.ok {
                    return Ok(c);
                }
            }
            Ok(Check::pass())
        }
    }
}

/// A fibration that is also an `E_r`-quasi-isomorphism.
pub fn is_trivial_fibration<F: Field>(f: &Morphism<F>, r: usize, style: Style, exec: Exec) -> Result<Check> {
    let c = is_fibration(f, r, style, exec)?;
    if !c.ok {
        return Ok(c);
    }
    is_er_quasi_iso(f, r, exec)
}

/// A commutative square `p ∘ top = bottom ∘ i`, asking for `ℓ: B → X` with
/// `ℓ ∘ i = top` and `p ∘ ℓ = bottom`.
#[derive(Clone, Debug)]
pub struct LiftingProblem<F: Field> {
    pub i: Morphism<F>,
    pub p: Morphism<F>,
    pub top: Morphism<F>,
    pub bottom: Morphism<F>,
}

impl<F: Field> LiftingProblem<F> {
    pub fn new(i: Morphism<F>, p: Morphism<F>, top: Morphism<F>, bottom: Morphism<F>) -> Result<Self> {
        let shapes = [
            (top.source(), i.source()),
            (top.target(), p.source()),
            (bottom.source(), i.target()),
            (bottom.target(), p.target()),
        ];
        if shapes.iter().any(|(x, y)| x.module() != y.module()) {
            return Err(Error::ShapeMismatch("lifting square does not fit together".into()));
        }
        if !p.after(&top)?.equals(&bottom.after(&i)?) {
            return Err(Error::InvalidArgument("lifting square does not commute".into()));
        }
        Ok(LiftingProblem { i, p, top, bottom })
    }
}

#[derive(Clone, Debug)]
pub enum Lift<F: Field> {
    Found(Morphism<F>),
    /// Re-checked rank certificate for the stacked system.
    None(Certificate<F>),
}

impl<F: Field> Lift<F> {
    pub fn found(&self) -> Option<&Morphism<F>> {
        match self {
            Lift::Found(m) => Some(m),
            Lift::None(_) => None,
        }
    }
}

pub fn solve_lift<F: Field>(problem: &LiftingProblem<F>) -> Result<Lift<F>> {
    let LiftingProblem { i, p, top, bottom } = problem;
    let mut sys = MorphismSystem::new(i.target().clone(), p.source().clone())?;
    sys.post_compose_equals(p, bottom)?;
    sys.pre_compose_equals(i, top)?;
    match sys.solve()? {
        Solved::Found(l) => {
            let ok = l.is_valid() && p.after(&l)?.equals(bottom) && l.after(i)?.equals(top);
            if !ok {
                return Err(Error::InvalidMorphism("lift failed verification".into()));
            }
            Ok(Lift::Found(l))
        }
        Solved::Infeasible(c) => {
            if !c.verify() {
                return Err(Error::InvalidArgument("infeasibility certificate failed verification".into()));
            }
            Ok(Lift::None(c))
        }
    }
}

/// `C_r`: the staircase bicomplex with `r` steps ending at `(0,0)`.
pub fn cone<F: Field>(field: &F, bound: Bound, r: usize) -> Multicomplex<F> {
    fixtures::cone(field, bound, r)
}

/// `C_r^∞`; needs `r >= 1`.
pub fn cone_infinity<F: Field>(field: &F, r: usize) -> Result<Multicomplex<F>> {
    if r == 0 {
        return Err(Error::InvalidArgument("C_r^∞ needs r >= 1".into()));
    }
    Ok(fixtures::cone_infinity(field, r))
}

/// `C ⊗ A → A` induced by projecting a cell complex `C` onto its (one
/// dimensional) `(0,0)` part.
fn cell_projection<F: Field>(c: &Multicomplex<F>, a: &Arc<Multicomplex<F>>) -> Result<Morphism<F>> {
    let origin = Bidegree::new(0, 0);
    if c.dim(origin) != 1 {
        return Err(Error::ShapeMismatch("cone must have a single cell at (0,0)".into()));
    }
    let f = a.field();
    let (prod, layout) = tensor(c, a)?;
    let prod = Arc::new(prod);
    let mut blocks = Vec::new();
    for (b, d) in a.module().iter() {
        let off = layout.offset(origin, b).expect("cell at origin pairs with every bidegree");
        let mut m = Matrix::zeros(f, d, prod.dim(b));
        for j in 0..d {
            m.set(j, off + j, f.one());
        }
        blocks.push((b, m));
    }
    Morphism::from_blocks(prod, a.clone(), blocks)
}

/// `φ_r : C_r ⊗ A → A`.
pub fn cone_projection<F: Field>(a: &Arc<Multicomplex<F>>, r: usize) -> Result<Morphism<F>> {
    cell_projection(&cone(a.field(), a.bound(), r), a)
}

/// `C_r^∞ ⊗ A → A`; `A` must be an ∞-multicomplex.
pub fn cone_infinity_projection<F: Field>(a: &Arc<Multicomplex<F>>, r: usize) -> Result<Morphism<F>> {
    cell_projection(&cone_infinity(a.field(), r)?, a)
}

/// The `r`-path `Λ_r`. At `(0,0)` the basis is `β_-` then `β_{0,0}`.
pub fn lambda<F: Field>(field: &F, bound: Bound, r: usize) -> Multicomplex<F> {
    let b = Bidegree::new;
    let origin = b(0, 0);
    let one = field.one();
    let neg = field.neg(&one);
    let single = |x: &F::Elem| Matrix::from_rows(field, 1, vec![vec![x.clone()]]);
    let pair = Matrix::from_rows(field, 2, vec![vec![neg.clone(), one.clone()]]);
    let mut dims = vec![(origin, 2)];
    if r == 0 {
        dims.push((b(0, 1), 1));
        let mut m = Multicomplex::new(field, bound, BigradedModule::from_dims(dims));
        m.set_d(0, origin, pair).expect("d_0 fits");
        return m;
    }
    let ri = r as i64;
    for i in 1..ri {
        dims.push((b(-i, -i), 1));
    }
    for i in 0..ri {
        dims.push((b(-i - 1, -i), 1));
    }
    let mut m = Multicomplex::new(field, bound, BigradedModule::from_dims(dims));
    m.set_d(1, origin, pair).expect("d_1 fits");
    for i in 1..ri {
        m.set_d(0, b(-i, -i), single(&one)).expect("d_0 fits");
        m.set_d(1, b(-i, -i), single(&one)).expect("d_1 fits");
    }
    m
}

/// `P_r(A) = Λ_r ⊗ A` with `ι_A: A → P_r(A)` and `π_A: P_r(A) → A ⊕ A`.
#[derive(Clone, Debug)]
pub struct PathObject<F: Field> {
    pub object: Arc<Multicomplex<F>>,
    pub iota: Morphism<F>,
    pub pi: Morphism<F>,
    pub sum: DirectSum<F>,
}

impl<F: Field> PathObject<F> {
    /// `A → A ⊕ A`, `a ↦ (a, a)`.
    pub fn diagonal(&self) -> Result<Morphism<F>> {
        let inc = &self.sum.inclusions;
        inc[0].add(&inc[1])
    }
}

pub fn path_object<F: Field>(a: &Arc<Multicomplex<F>>, r: usize) -> Result<PathObject<F>> {
    let f = a.field();
    let origin = Bidegree::new(0, 0);
    let lam = lambda(f, a.bound(), r);
    let (prod, layout) = tensor(&lam, a)?;
    let object = Arc::new(prod);
    let sum = direct_sum(a, a)?;
    let mut up = Vec::new();
    let mut down = Vec::new();
    for (b, d) in a.module().iter() {
        let off = layout.offset(origin, b).expect("Λ_r has cells at the origin");
        let mut i = Matrix::zeros(f, object.dim(b), d);
        let mut p = Matrix::zeros(f, 2 * d, object.dim(b));
        for j in 0..d {
            // β_- ⊗ a_j and β_{0,0} ⊗ a_j
            i.set(off + j, j, f.one());
            i.set(off + d + j, j, f.one());
            p.set(j, off + j, f.one());
            p.set(d + j, off + d + j, f.one());
        }
        up.push((b, i));
        down.push((b, p));
    }
    let iota = Morphism::from_blocks(a.clone(), object.clone(), up)?;
    let pi = Morphism::from_blocks(object.clone(), sum.object.clone(), down)?;
    Ok(PathObject { object, iota, pi, sum })
}

/// Expected `dim P_r(A)^{p,q}`.
pub fn path_object_dim<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> usize {
    let (p, q) = (at.p, at.q);
    let d = |x: i64, y: i64| a.dim(Bidegree::new(x, y));
    if r == 0 {
        return 2 * d(p, q) + d(p, q - 1);
    }
    let ri = r as i64;
    d(p, q) + (0..ri).map(|i| d(p + i, q + i) + d(p + i + 1, q + i)).sum::<usize>()
}

/// `h_m` of bidegree `(r-m, r-m-1)`, `m = 0, 1, …`.
#[derive(Clone, Debug)]
pub struct Homotopy<F: Field> {
    pub r: usize,
    pub maps: Vec<GradedMap<F>>,
}

impl<F: Field> Homotopy<F> {
    pub fn shift(r: usize, m: usize) -> Bidegree {
        let k = r as i64 - m as i64;
        Bidegree::new(k, k - 1)
    }

    pub fn zero(a: &Multicomplex<F>, b: &Multicomplex<F>, r: usize) -> Self {
        Homotopy {
            r,
            maps: vec![GradedMap::zero(a.field(), Self::shift(r, 0), a.module(), b.module())],
        }
    }

    fn get(&self, m: usize) -> Option<&GradedMap<F>> {
        self.maps.get(m)
    }
}

/// First failing `(m, bidegree)` of an `r`-homotopy check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomotopyCheck {
    pub ok: bool,
    pub failure: Option<(usize, Bidegree)>,
}

/// `∑_{i+j=m} (-1)^{i+r} d_i h_j + (-1)^i h_i d_j` as blocks at each source bidegree.
fn homotopy_term<F: Field>(
    a: &Multicomplex<F>,
    b: &Multicomplex<F>,
    h: &Homotopy<F>,
    m: usize,
    at: Bidegree,
) -> Matrix<F> {
    let f = a.field();
    let k = h.r as i64 - m as i64;
    let to = Bidegree::new(at.p + k, at.q + k);
    let mut acc = Matrix::zeros(f, b.dim(to), a.dim(at));
    for i in 0..=m {
        let j = m - i;
        if let Some(hj) = h.get(j) {
            let x = b.d_block(i, at + hj.shift()).mul(&hj.block(at));
            acc = acc.add(&x.scale(&f.sign((i + h.r) as i64)));
        }
        if let Some(hi) = h.get(i) {
            let x = hi.block(at.d(j)).mul(&a.d_block(j, at));
            acc = acc.add(&x.scale(&f.sign(i as i64)));
        }
    }
    acc
}

/// Checks that `h` is an `r`-homotopy from `f` to `g`, for every `m` up to
/// the point past which all composites vanish.
pub fn verify_r_homotopy<F: Field>(f: &Morphism<F>, g: &Morphism<F>, h: &Homotopy<F>) -> Result<HomotopyCheck> {
    let (a, b) = (f.source(), f.target());
    if g.source().module() != a.module() || g.target().module() != b.module() {
        return Err(Error::ShapeMismatch("homotopy between non-parallel morphisms".into()));
    }
    for (m, hm) in h.maps.iter().enumerate() {
        if hm.shift() != Homotopy::<F>::shift(h.r, m) || hm.source() != a.module() || hm.target() != b.module() {
            return Err(Error::ShapeMismatch(format!("h_{m} has the wrong bidegree or shape")));
        }
    }
    let diff = g.sub(f)?;
    let top = h.maps.len() + a.num_maps().max(b.num_maps()) + h.r;
    for m in 0..=top {
        for at in a.support() {
            let lhs = homotopy_term(a, b, h, m, at);
            let ok = if m == h.r { lhs == diff.block(at) } else { lhs.is_zero() };
            if !ok {
                return Ok(HomotopyCheck {
                    ok: false,
                    failure: Some((m, at)),
                });
            }
        }
    }
    Ok(HomotopyCheck { ok: true, failure: None })
}

/// Searches for an `r`-homotopy from `f` to `g` with `h_m = 0` for
/// `m > max_m` by solving the linear system in the unknown blocks.
pub fn find_homotopy<F: Field>(f: &Morphism<F>, g: &Morphism<F>, r: usize, max_m: usize) -> Result<Option<Homotopy<F>>> {
    let (a, b) = (f.source().clone(), f.target().clone());
    let k = a.field().clone();
    let diff = g.sub(f)?;
    // Unknown blocks: (m, source bidegree) -> variable offset.
    let mut offsets: BTreeMap<(usize, Bidegree), usize> = BTreeMap::new();
    let mut nvars = 0;
    for m in 0..=max_m {
        let s = Homotopy::<F>::shift(r, m);
        for (x, d) in a.module().iter() {
            let t = b.dim(x + s);
            if t > 0 {
                offsets.insert((m, x), nvars);
                nvars += d * t;
            }
        }
    }
    let var = |m: usize, x: Bidegree, row: usize, col: usize| {
        offsets.get(&(m, x)).map(|o| o + row * a.dim(x) + col)
    };
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut rhs = Vec::new();
    let maps = a.num_maps().max(b.num_maps());
    for m in 0..=max_m + maps + r {
        let kk = r as i64 - m as i64;
        for at in a.support() {
            let to = Bidegree::new(at.p + kk, at.q + kk);
            let want = if m == r { diff.block(at) } else { Matrix::zeros(&k, b.dim(to), a.dim(at)) };
            for row in 0..b.dim(to) {
                for col in 0..a.dim(at) {
                    let mut eq = linalg::vector::zeros(&k, nvars);
                    let mut add = |v: Option<usize>, c: F::Elem| {
                        if let Some(v) = v {
                            eq[v] = k.add(&eq[v], &c);
                        }
                    };
                    for i in 0..=m {
                        let j = m - i;
                        // (-1)^{i+r} d_i h_j
                        let mid = at + Homotopy::<F>::shift(r, j);
                        if j <= max_m {
                            let di = b.d_block(i, mid);
                            let s = k.sign((i + r) as i64);
                            for t in 0..b.dim(mid) {
                                let c = k.mul(&s, di.get(row, t));
                                if !k.is_zero(&c) {
                                    add(var(j, at, t, col), c);
                                }
                            }
                        }
                        // (-1)^i h_i d_j
                        if i <= max_m {
                            let src = at.d(j);
                            let dj = a.d_block(j, at);
                            let s = k.sign(i as i64);
                            for t in 0..a.dim(src) {
                                let c = k.mul(&s, dj.get(t, col));
                                if !k.is_zero(&c) {
                                    add(var(i, src, row, t), c);
                                }
                            }
                        }
                    }
                    let target = want.get(row, col).clone();
                    if eq.iter().any(|c| !k.is_zero(c)) || !k.is_zero(&target) {
                        rows.push(eq);
                        rhs.push(target);
                    }
                }
            }
        }
    }
    let mat = Matrix::from_rows(&k, nvars, rows);
    let x = match linalg::solve(&mat, &rhs) {
        Solve::Solution(x) => x,
        Solve::Infeasible(_) => return Ok(None),
    };
    let mut maps_out = Vec::new();
    for m in 0..=max_m {
        let s = Homotopy::<F>::shift(r, m);
        let mut gm = GradedMap::zero(&k, s, a.module(), b.module());
        for (x0, d) in a.module().iter() {
            if let Some(&o) = offsets.get(&(m, x0)) {
                let t = b.dim(x0 + s);
                let data = (0..t).map(|row| x[o + row * d..o + (row + 1) * d].to_vec()).collect();
                gm.set_block(x0, Matrix::from_rows(&k, d, data))?;
            }
        }
        maps_out.push(gm);
    }
    Ok(Some(Homotopy { r, maps: maps_out }))
}

/// Which pair of generating sets to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `I_r = {ι_{r+1}}`, `J_r = {0 → ZW_r}`.
    Z,
    /// `I'_r = J_1 ∪ … ∪ J_{r-1} ∪ I_r`, `J'_r = J_0 ∪ … ∪ J_r`.
    E,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" | "Z" | "witness" => Ok(Variant::Z),
            "e" | "E" | "page" => Ok(Variant::E),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}`"))),
        }
    }
}

/// Bidegree range for generating sets; infinite-kind objects are cut at `pmin`.
#[derive(Clone, Debug)]
pub struct Window {
    pub p: RangeInclusive<i64>,
    pub q: RangeInclusive<i64>,
    pub pmin: i64,
}

#[derive(Clone, Debug)]
pub struct NamedMorphism<F: Field> {
    pub name: String,
    pub at: Bidegree,
    pub morphism: Morphism<F>,
}

#[derive(Clone, Debug)]
pub struct GeneratingSets<F: Field> {
    pub cofibrations: Vec<NamedMorphism<F>>,
    pub trivial: Vec<NamedMorphism<F>>,
}

fn need_window(window: &Window, at: Bidegree, r: usize) -> Result<()> {
    let needed = window_for(at, r);
    if window.pmin > needed {
        return Err(Error::WindowTooSmall {
            at,
            r,
            needed_pmin: needed,
            horizon: window.pmin,
        });
    }
    Ok(())
}

fn j_entry<F: Field>(field: &F, bound: Bound, k: usize, at: Bidegree, window: &Window) -> Result<NamedMorphism<F>> {
    need_window(window, at, k)?;
    let zw = zw_object(field, bound, k, at, window.pmin)?;
    let zero = Arc::new(Multicomplex::zero(field, bound));
    Ok(NamedMorphism {
        name: format!("J{k}{at}"),
        at,
        morphism: Morphism::zero(zero, zw.object)?,
    })
}

fn i_entry<F: Field>(field: &F, bound: Bound, r: usize, at: Bidegree, window: &Window) -> Result<NamedMorphism<F>> {
    need_window(window, at, r + 1)?;
    let zw = zw_object(field, bound, r + 1, at, window.pmin)?;
    let bw = bw_object(field, bound, r + 1, at, window.pmin)?;
    Ok(NamedMorphism {
        name: format!("I{r}{at}"),
        at,
        morphism: iota(&zw, &bw)?,
    })
}

pub fn generating_sets<F: Field>(
    field: &F,
    bound: Bound,
    r: usize,
    variant: Variant,
    window: &Window,
) -> Result<GeneratingSets<F>> {
    let mut cofibrations = Vec::new();
    let mut trivial = Vec::new();
    for p in window.p.clone() {
        for q in window.q.clone() {
            let at = Bidegree::new(p, q);
            match variant {
                Variant::Z => {
                    cofibrations.push(i_entry(field, bound, r, at, window)?);
                    trivial.push(j_entry(field, bound, r, at, window)?);
                }
                Variant::E => {
                    for k in 1..r {
                        cofibrations.push(j_entry(field, bound, k, at, window)?);
                    }
                    cofibrations.push(i_entry(field, bound, r, at, window)?);
                    for k in 0..=r {
                        trivial.push(j_entry(field, bound, k, at, window)?);
                    }
                }
            }
        }
    }
    Ok(GeneratingSets { cofibrations, trivial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::spectral::{page_dims, Method};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn lambda_is_valid_and_path_commutes() {
        let f = gf(7);
        for r in 0..4 {
            for n in [Bound::Finite(2), Bound::Finite(3), Bound::Infinite] {
                assert!(lambda(&f, n, r).is_valid());
                let a = Arc::new(fixtures::corner(&f, n, 1, 1));
                let po = path_object(&a, r).unwrap();
                assert!(po.object.is_valid());
                assert!(po.iota.is_valid() && po.pi.is_valid());
                assert!(po.pi.after(&po.iota).unwrap().equals(&po.diagonal().unwrap()));
            }
        }
    }

    #[test]
    fn cone_infinity_contracts() {
        let f = gf(7);
        for r in 1..4 {
            let c = Arc::new(cone_infinity(&f, r).unwrap());
            let id = Morphism::identity(c.clone());
            let zero = Morphism::zero(c.clone(), c.clone()).unwrap();
            let mut h0 = GradedMap::zero(&f, Homotopy::<PrimeField>::shift(r, 0), c.module(), c.module());
            let low = Bidegree::new(-(r as i64), 1 - r as i64);
            h0.set_block(low, Matrix::from_i64(&f, &[&[1]])).unwrap();
            let h = Homotopy { r, maps: vec![h0] };
            assert!(verify_r_homotopy(&zero, &id, &h).unwrap().ok);
            assert!(!verify_r_homotopy(&zero, &zero, &h).unwrap().ok);
        }
    }

    #[test]
    fn cone_kills_next_page() {
        let f = gf(2);
        for r in 0..3 {
            let a = Arc::new(fixtures::corner(&f, Bound::Finite(2), 0, 0));
            let phi = cone_projection(&a, r).unwrap();
            assert!(phi.is_valid());
            let dims = page_dims(phi.source(), r + 1, Method::Witness, Exec::Sequential).unwrap();
            assert!(dims.is_empty(), "r = {r}: {dims:?}");
        }
    }
}
