//! Multicomplexes, strict morphisms and their validation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bigraded::{Bidegree, BigradedModule, GradedMap};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vector, Matrix};

/// The index bound `n`: `d_i = 0` for `i >= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Finite(usize),
    Infinite,
}

impl Bound {
    pub fn allows(self, i: usize) -> bool {
        match self {
            Bound::Finite(n) => i < n,
            Bound::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Bound::Finite(n) => Some(n),
            Bound::Infinite => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Bound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Bound::Infinite);
        }
        match t.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Bound::Finite(n)),
            _ => Err(Error::InvalidArgument(format!("bad bound `{s}`"))),
        }
    }
}

/// A finite-support multicomplex over `F`.
///
/// `horizon = Some(m)` marks an object that was cut off below filtration
/// `p = m` (the quotient by everything at `p < m`); page data near the cut
/// are then not those of the untruncated object, see
/// [`Multicomplex::check_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct Multicomplex<F: Field> {
    field: F,
    bound: Bound,
    module: BigradedModule,
    maps: Vec<GradedMap<F>>,
    horizon: Option<i64>,
}

/// One failed instance of `∑_{i+j=l} (-1)^i d_i d_j = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationViolation<F: Field> {
    pub l: usize,
    pub at: Bidegree,
    pub defect: Matrix<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation<F: Field> {
    Relation(RelationViolation<F>),
    /// A nonzero `d_i` with `i >= n`.
    OutOfBound { i: usize },
}

impl<F: Field> fmt::Display for Violation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Relation(v) => write!(f, "relation l={} fails at {}", v.l, v.at),
            Violation::OutOfBound { i } => write!(f, "d_{i} is nonzero beyond the bound"),
        }
    }
}

impl<F: Field> Multicomplex<F> {
    /// All structure maps zero.
    pub fn new(field: &F, bound: Bound, module: BigradedModule) -> Self {
        Multicomplex {
            field: field.clone(),
            bound,
            module,
            maps: Vec::new(),
            horizon: None,
        }
    }

    pub fn zero(field: &F, bound: Bound) -> Self {
        Self::new(field, bound, BigradedModule::new())
    }

    /// One-dimensional `𝕜` at `at` with zero structure maps.
    pub fn point(field: &F, bound: Bound, at: Bidegree) -> Self {
        Self::new(field, bound, BigradedModule::from_dims([(at, 1)]))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn bound(&self) -> Bound {
        self.bound
    }
    pub fn module(&self) -> &BigradedModule {
        &self.module
    }
    pub fn dim(&self, at: Bidegree) -> usize {
        self.module.dim(at)
    }
    pub fn support(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.module.support()
    }
    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }
    pub fn horizon(&self) -> Option<i64> {
        self.horizon
    }
    pub fn set_horizon(&mut self, h: Option<i64>) {
        self.horizon = h;
    }

    /// Number of stored structure maps; `d_i = 0` for `i >= num_maps()`.
    pub fn num_maps(&self) -> usize {
        self.maps.len()
    }

    pub fn d(&self, i: usize) -> GradedMap<F> {
        match self.maps.get(i) {
            Some(m) => m.clone(),
            None => GradedMap::zero(&self.field, Bidegree::of_d(i), &self.module, &self.module),
        }
    }

    pub fn d_ref(&self, i: usize) -> Option<&GradedMap<F>> {
        self.maps.get(i).filter(|m| !m.is_zero())
    }

    /// Matrix of `d_i` from `at` to `at.d(i)`.
    pub fn d_block(&self, i: usize, at: Bidegree) -> Matrix<F> {
        match self.maps.get(i).and_then(|m| m.block_ref(at)) {
            Some(b) => b.clone(),
            None => Matrix::zeros(&self.field, self.dim(at.d(i)), self.dim(at)),
        }
    }

    pub fn apply_d(&self, i: usize, at: Bidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        match self.maps.get(i).and_then(|m| m.block_ref(at)) {
            Some(b) => b.mul_vec(v),
            None => vector::zeros(&self.field, self.dim(at.d(i))),
        }
    }

    pub fn set_d(&mut self, i: usize, at: Bidegree, block: Matrix<F>) -> Result<()> {
        if !self.bound.allows(i) && !block.is_zero() {
            return Err(Error::BoundMismatch(format!(
                "d_{i} set on a {}-multicomplex",
                self.bound
            )));
        }
        while self.maps.len() <= i {
            let k = self.maps.len();
            self.maps
                .push(GradedMap::zero(&self.field, Bidegree::of_d(k), &self.module, &self.module));
        }
        self.maps[i].set_block(at, block)?;
        self.trim();
        Ok(())
    }

    /// Replaces `d_i` wholesale; the map must have the right shift and modules.
    pub fn set_map(&mut self, i: usize, map: GradedMap<F>) -> Result<()> {
        if map.shift() != Bidegree::of_d(i) {
            return Err(Error::ShapeMismatch(format!("d_{i} has shift {}", map.shift())));
        }
        let map = map.with_modules(&self.module, &self.module)?;
        if !self.bound.allows(i) && !map.is_zero() {
            return Err(Error::BoundMismatch(format!("d_{i} set on a {}-multicomplex", self.bound)));
        }
        while self.maps.len() <= i {
            let k = self.maps.len();
            self.maps
                .push(GradedMap::zero(&self.field, Bidegree::of_d(k), &self.module, &self.module));
        }
        self.maps[i] = map;
        self.trim();
        Ok(())
    }

    fn trim(&mut self) {
        while self.maps.last().is_some_and(|m| m.is_zero()) {
            self.maps.pop();
        }
    }

    /// The same data under another declared bound. Fails if a nonzero map
    /// would fall outside it.
    pub fn with_bound(&self, bound: Bound) -> Result<Self> {
        if let Bound::Finite(n) = bound {
            if self.maps.len() > n {
                return Err(Error::BoundMismatch(format!(
                    "d_{} is nonzero, cannot declare n = {n}",
                    self.maps.len() - 1
                )));
            }
        }
        let mut out = self.clone();
        out.bound = bound;
        Ok(out)
    }

    /// `∑_{i+j=l} (-1)^i d_i d_j` as a block at `at`.
    pub fn relation_block(&self, l: usize, at: Bidegree) -> Matrix<F> {
        let f = &self.field;
        let target = Bidegree::new(at.p - l as i64, at.q + 2 - l as i64);
        let mut acc = Matrix::zeros(f, self.dim(target), self.dim(at));
        if acc.nrows() == 0 || acc.ncols() == 0 {
            return acc;
        }
        for j in 0..=l {
            let i = l - j;
            let (Some(dj), Some(di)) = (self.maps.get(j), self.maps.get(i)) else {
                continue;
            };
            let (Some(bj), Some(bi)) = (dj.block_ref(at), di.block_ref(at.d(j))) else {
                continue;
            };
            let prod = bi.mul(bj);
            acc = acc.add(&prod.scale(&f.sign(i as i64)));
        }
        acc
    }

    /// Largest `l` for which a relation could be nonzero on this support.
    pub fn relation_reach(&self) -> usize {
        let m = self.maps.len();
        if m == 0 {
            return 0;
        }
        (2 * (m - 1)).min(self.module.p_diameter() as usize)
    }

    /// Exhaustive check of the defining relations and the index bound.
    pub fn validate(&self) -> Vec<Violation<F>> {
        let mut out = Vec::new();
        if let Bound::Finite(n) = self.bound {
            for i in n..self.maps.len() {
                if !self.maps[i].is_zero() {
                    out.push(Violation::OutOfBound { i });
                }
            }
        }
        for l in 0..=self.relation_reach() {
            for at in self.module.support() {
                let defect = self.relation_block(l, at);
                if !defect.is_zero() {
                    out.push(Violation::Relation(RelationViolation { l, at, defect }));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidMulticomplex(v.to_string())),
        }
    }

    /// Page `r` data at `at` (including the outgoing differential) only see
    /// filtrations down to `at.p - 2r - 1`; reject queries that reach past
    /// the cut.
    pub fn check_exact(&self, at: Bidegree, r: usize) -> Result<()> {
        match self.horizon {
            Some(m) if at.p < m + 2 * r as i64 + 1 => Err(Error::WindowTooSmall {
                at,
                r,
                needed_pmin: at.p - 2 * r as i64 - 1,
                horizon: m,
            }),
            _ => Ok(()),
        }
    }

    pub fn is_exact_at(&self, at: Bidegree, r: usize) -> bool {
        self.check_exact(at, r).is_ok()
    }

    /// The quotient by the subcomplex of everything at `p < pmin`.
    pub fn truncate_below(&self, pmin: i64) -> Self {
        let module =
            BigradedModule::from_dims(self.module.iter().filter(|(b, _)| b.p >= pmin));
        let cut = module != self.module;
        let mut out = Multicomplex::new(&self.field, self.bound, module);
        for (i, m) in self.maps.iter().enumerate() {
            for (b, block) in m.blocks() {
                if b.p >= pmin && b.d(i).p >= pmin {
                    out.set_d(i, b, block.clone()).expect("restricted block fits");
                }
            }
        }
        out.horizon = match (self.horizon, cut) {
            (Some(h), true) => Some(h.max(pmin)),
            (Some(h), false) => Some(h),
            (None, true) => Some(pmin),
            (None, false) => None,
        };
        out
    }

    pub fn same_field(&self, other: &Self) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::FieldMismatch {
                left: self.field.spec(),
                right: other.field.spec(),
            });
        }
        Ok(())
    }

    pub fn same_category(&self, other: &Self) -> Result<()> {
        self.same_field(other)?;
        if self.bound != other.bound {
            return Err(Error::BoundMismatch(format!("{} vs {}", self.bound, other.bound)));
        }
        Ok(())
    }
}

/// A strict morphism: a bidegree (0,0) map with `d_i f = f d_i` for all `i`.
#[derive(Clone, Debug)]
pub struct Morphism<F: Field> {
    source: Arc<Multicomplex<F>>,
    target: Arc<Multicomplex<F>>,
    map: GradedMap<F>,
}

impl<F: Field> Morphism<F> {
    /// Wraps a map without checking the commutation identities; see
    /// [`Morphism::validate`].
    pub fn new(
        source: Arc<Multicomplex<F>>,
        target: Arc<Multicomplex<F>>,
        map: GradedMap<F>,
    ) -> Result<Self> {
        source.same_category(&target)?;
        if map.shift() != Bidegree::default() {
            return Err(Error::ShapeMismatch(format!("morphism with shift {}", map.shift())));
        }
        let map = map.with_modules(source.module(), target.module())?;
        Ok(Morphism { source, target, map })
    }

    /// Like [`Morphism::new`] but fails unless the map commutes with every `d_i`.
    pub fn checked(
        source: Arc<Multicomplex<F>>,
        target: Arc<Multicomplex<F>>,
        map: GradedMap<F>,
    ) -> Result<Self> {
        let m = Self::new(source, target, map)?;
        match m.validate().first() {
            None => Ok(m),
            Some((i, at)) => Err(Error::InvalidMorphism(format!("d_{i} f != f d_{i} at {at}"))),
        }
    }

    pub fn from_blocks<I>(source: Arc<Multicomplex<F>>, target: Arc<Multicomplex<F>>, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Bidegree, Matrix<F>)>,
    {
        let mut map = GradedMap::zero(source.field(), Bidegree::default(), source.module(), target.module());
        for (b, m) in blocks {
            map.set_block(b, m)?;
        }
        Self::new(source, target, map)
    }

    pub fn identity(a: Arc<Multicomplex<F>>) -> Self {
        let map = GradedMap::identity(a.field(), a.module());
        Morphism {
            source: a.clone(),
            target: a,
            map,
        }
    }

    pub fn zero(source: Arc<Multicomplex<F>>, target: Arc<Multicomplex<F>>) -> Result<Self> {
        let map = GradedMap::zero(source.field(), Bidegree::default(), source.module(), target.module());
        Self::new(source, target, map)
    }

    pub fn source(&self) -> &Arc<Multicomplex<F>> {
        &self.source
    }
    pub fn target(&self) -> &Arc<Multicomplex<F>> {
        &self.target
    }
    pub fn map(&self) -> &GradedMap<F> {
        &self.map
    }
    pub fn field(&self) -> &F {
        self.source.field()
    }
    pub fn block(&self, at: Bidegree) -> Matrix<F> {
        self.map.block(at)
    }
    pub fn apply(&self, at: Bidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        self.map.apply(at, v)
    }

    /// Every `(i, at)` where `d_i f != f d_i`.
    pub fn validate(&self) -> Vec<(usize, Bidegree)> {
        let maps = self.source.num_maps().max(self.target.num_maps());
        let mut out = Vec::new();
        for i in 0..maps {
            for at in self.source.support() {
                let lhs = self.target.d_block(i, at).mul(&self.map.block(at));
                let rhs = self.map.block(at.d(i)).mul(&self.source.d_block(i, at));
                if lhs != rhs {
                    out.push((i, at));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Morphism<F>) -> Result<Morphism<F>> {
        if first.target.module() != self.source.module() {
            return Err(Error::ShapeMismatch("composable morphisms expected".into()));
        }
        Morphism::new(first.source.clone(), self.target.clone(), self.map.compose(&first.map))
    }

    pub fn add(&self, other: &Morphism<F>) -> Result<Morphism<F>> {
        Morphism::new(self.source.clone(), self.target.clone(), self.map.add(&other.map))
    }

    pub fn sub(&self, other: &Morphism<F>) -> Result<Morphism<F>> {
        Morphism::new(self.source.clone(), self.target.clone(), self.map.sub(&other.map))
    }

    /// Same blocks between new (equal-shaped) endpoints.
    pub fn retarget(&self, source: Arc<Multicomplex<F>>, target: Arc<Multicomplex<F>>) -> Result<Morphism<F>> {
        Morphism::new(source, target, self.map.clone())
    }

    pub fn is_bijective(&self) -> bool {
        self.source.module() == self.target.module()
            && self
                .source
                .module()
                .iter()
                .all(|(b, d)| self.map.block(b).rank() == d)
    }

    pub fn equals(&self, other: &Morphism<F>) -> bool {
        let mut bs: Vec<Bidegree> = self.source.support().collect();
        bs.extend(other.source.support());
        bs.into_iter().all(|b| self.map.block(b) == other.map.block(b))
    }
}
