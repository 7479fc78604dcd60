mod common;

use std::sync::Arc;

use common::{b, gf, gfp, rng, MC};
use multicx::bigraded::{image_of, kernel_of, solve, subquotient};
use multicx::constructions::{direct_sum, pushout, symmetry, tensor_product, unit, zero_like};
use multicx::field::is_canonical_rational;
use multicx::fixtures;
use multicx::linalg::{check_certificate, Solve};
use multicx::model::{lambda, path_object_dim};
use multicx::multicomplex::Violation;
use multicx::random::{random_morphism, random_multicomplex, Shape};
use multicx::represent::disk;
use multicx::spectral::{page_dims, Method};
use multicx::{Bidegree, BigradedModule, Bound, Error, Exec, Field, GradedMap, Matrix, Morphism, Multicomplex, PrimeField, Rationals};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

fn square_map<F: Field>(f: &F, m: Matrix<F>) -> GradedMap<F> {
    let module = BigradedModule::from_dims([(b(0, 0), m.ncols())]);
    let mut g = GradedMap::zero(f, b(0, 0), &module, &module);
    g.set_block(b(0, 0), m).unwrap();
    g
}

fn random_matrix(p: u64, rows: usize, cols: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut r = rng(seed);
    (0..rows).map(|_| (0..cols).map(|_| r.gen_range(0..p)).collect()).collect()
}

#[test]
fn kernel_examples() {
    let f = gf(7);
    let id = square_map(&f, Matrix::identity(&f, 3));
    assert_eq!(kernel_of(&id, b(0, 0)).dim(), 0);
    let z = square_map(&f, Matrix::zeros(&f, 2, 2));
    assert_eq!(kernel_of(&z, b(0, 0)).dim(), 2);
    assert_eq!(kernel_of(&z, b(5, 5)).dim(), 0);
    for seed in 0..30 {
        let rows = random_matrix(7, 3, 3, seed);
        let m = square_map(&f, Matrix::from_rows(&f, 3, rows.clone()));
        let rank = gfp::rank(&rows, 3, 7);
        assert_eq!(kernel_of(&m, b(0, 0)).dim() + rank, 3);
        assert_eq!(image_of(&m, b(0, 0)).dim(), rank);
    }
}

#[test]
fn image_examples() {
    let q = Rationals;
    let id = square_map(&q, Matrix::identity(&q, 2));
    assert!(image_of(&id, b(0, 0)).is_full());
    let z = square_map(&q, Matrix::zeros(&q, 2, 2));
    assert!(image_of(&z, b(0, 0)).is_zero());
    let m = square_map(&q, Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]));
    let im = image_of(&m, b(0, 0));
    assert_eq!(im.dim(), 1);
    assert!(im.contains(&[q.from_i64(1), q.from_i64(2)]));
}

#[test]
fn subquotient_examples() {
    let f = gf(2);
    let sq = subquotient(&f, 2, vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0]]).unwrap();
    assert_eq!(sq.dim(), 1);
    assert_eq!(sq.representatives(), &[vec![0, 1]]);
    assert_eq!(sq.project(&[1, 1]), Some(vec![1]));
    let same = subquotient(&f, 2, vec![vec![1, 1]], vec![vec![1, 1]]).unwrap();
    assert_eq!(same.dim(), 0);
    let err = subquotient(&f, 2, vec![vec![1, 0]], vec![vec![0, 1]]).unwrap_err();
    assert!(matches!(err, Error::ContainmentViolation));
    for seed in 0..40 {
        let z = random_matrix(2, 4, 5, seed);
        let mut r = rng(seed + 500);
        let bdry: Vec<Vec<u64>> = (0..3)
            .map(|_| {
                let c: Vec<u64> = (0..4).map(|_| r.gen_range(0..2)).collect();
                (0..5).map(|j| (0..4).map(|i| c[i] * z[i][j]).sum::<u64>() % 2).collect()
            })
            .collect();
        let sq = subquotient(&f, 5, z.clone(), bdry.clone()).unwrap();
        assert_eq!(sq.dim(), gfp::rank(&z, 5, 2) - gfp::rank(&bdry, 5, 2));
    }
}

#[test]
fn solve_examples() {
    let q = Rationals;
    let id = square_map(&q, Matrix::identity(&q, 3));
    let t: Vec<BigRational> = [3, -1, 4].iter().map(|&v| q.from_i64(v)).collect();
    assert_eq!(solve(&id, b(0, 0), &t).solution(), Some(t.clone()));
    let z = square_map(&q, Matrix::zeros(&q, 3, 3));
    match solve(&z, b(0, 0), &t) {
        Solve::Infeasible(y) => assert!(check_certificate(&z.block(b(0, 0)), &t, &y)),
        Solve::Solution(_) => panic!("zero map hit a nonzero target"),
    }
    let mut r = rng(7);
    for _ in 0..20 {
        let m = Matrix::from_rows(&q, 4, (0..3).map(|_| (0..4).map(|_| q.sample(&mut r)).collect()).collect());
        let x: Vec<BigRational> = (0..4).map(|_| q.sample(&mut r)).collect();
        let t = m.mul_vec(&x);
        let g = GradedMap::zero(&q, b(0, 0), &BigradedModule::from_dims([(b(0, 0), 4)]), &BigradedModule::from_dims([(b(0, 0), 3)]));
        let mut g = g;
        g.set_block(b(0, 0), m.clone()).unwrap();
        let y = solve(&g, b(0, 0), &t).solution().expect("consistent");
        let residual = m.mul_vec(&y);
        assert_eq!(residual, t);
    }
}

#[test]
fn corner_and_zero_validate() {
    for n in [Bound::Finite(2), Bound::Finite(3), Bound::Infinite] {
        assert!(fixtures::corner(&gf(3), n, 2, -1).is_valid());
        assert!(Multicomplex::zero(&gf(3), n).is_valid());
        let pi = fixtures::corner_projection(&gf(3), n, 0, 0);
        assert!(pi.is_valid());
        let c = pi.source().clone();
        assert!(Morphism::identity(c.clone()).is_valid());
        assert!(Morphism::zero(c.clone(), c).unwrap().is_valid());
    }
}

#[test]
fn flipped_square_violates_relation_one() {
    let f = gf(7);
    let mut sq = fixtures::staircase(&f, Bound::Finite(2), 0, 0, 0);
    assert!(sq.is_valid());
    sq.set_d(1, b(0, 1), Matrix::from_i64(&f, &[&[-1]])).unwrap();
    let v = sq.validate();
    assert_eq!(v.len(), 1);
    match &v[0] {
        Violation::Relation(r) => {
            assert_eq!((r.l, r.at), (1, b(0, 0)));
            assert!(!r.defect.is_zero());
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn morphism_shape_is_checked() {
    let f = gf(2);
    let c = Arc::new(fixtures::corner(&f, Bound::Finite(2), 0, 0));
    let k = Arc::new(fixtures::point(&f, Bound::Finite(2), 0, 0));
    let err = Morphism::from_blocks(c.clone(), k.clone(), [(b(0, 0), Matrix::identity(&f, 2))]).unwrap_err();
    assert!(matches!(err, Error::ShapeMismatch(_)));
    let wrong = Arc::new(fixtures::point(&f, Bound::Finite(3), 0, 0));
    assert!(Morphism::zero(c, wrong).is_err());
    let other = Arc::new(fixtures::point(&gf(3), Bound::Finite(2), 0, 0));
    assert!(matches!(Morphism::zero(k, other), Err(Error::FieldMismatch { .. })));
}

#[test]
fn tensor_examples() {
    let f = gf(7);
    let a = fixtures::staircase(&f, Bound::Finite(3), 2, 1, 0);
    let t = tensor_product(&a, &unit(&f, Bound::Finite(3))).unwrap();
    assert_eq!(t.module(), a.module());
    for i in 0..3 {
        for at in a.support() {
            assert_eq!(t.d_block(i, at), a.d_block(i, at));
        }
    }
    for r in 0..=3 {
        let l = lambda(&f, Bound::Finite(3), r);
        let la = tensor_product(&l, &a).unwrap();
        assert!(la.is_valid());
        for at in la.support().chain(a.support()) {
            assert_eq!(la.dim(at), path_object_dim(&a, r, at), "r = {r} at {at}");
        }
    }
    let d = disk(&f, Bound::Finite(3), b(0, 0), -5).unwrap();
    let c = fixtures::corner(&f, Bound::Finite(3), 0, 0);
    assert!(tensor_product(&d.object, &c).unwrap().is_valid());
    assert!(matches!(tensor_product(&a, &fixtures::corner(&gf(2), Bound::Finite(3), 0, 0)), Err(Error::FieldMismatch { .. })));
}

#[test]
fn direct_sum_examples() {
    let f = gf(2);
    let a = Arc::new(fixtures::corner(&f, Bound::Finite(2), 0, 0));
    let s = direct_sum(&a, &zero_like(&a)).unwrap();
    assert!(s.projections[0].is_bijective() && s.projections[0].is_valid());
    let bb = Arc::new(fixtures::staircase(&f, Bound::Finite(2), 1, 0, 0));
    let s = direct_sum(&a, &bb).unwrap();
    for at in s.object.support() {
        assert_eq!(s.object.dim(at), a.dim(at) + bb.dim(at));
    }
    for (i, p) in s.inclusions.iter().zip(&s.projections) {
        assert!(i.is_valid() && p.is_valid());
        assert!(p.after(i).unwrap().equals(&Morphism::identity(i.source().clone())));
    }
}

#[test]
fn pushout_along_identity_is_other_leg() {
    let f = gf(3);
    let a = Arc::new(fixtures::corner(&f, Bound::Infinite, 0, 0));
    let c = Arc::new(fixtures::staircase(&f, Bound::Infinite, 1, 0, 0));
    let mut r = rng(3);
    let g = random_morphism(&a, &c, &mut r).unwrap();
    let po = pushout(&Morphism::identity(a.clone()), &g).unwrap();
    assert_eq!(po.object.module(), c.module());
    assert!(po.right.is_bijective());
}

fn arb_pair() -> impl Strategy<Value = (u64, usize, u64)> {
    (prop::sample::select(vec![2u64, 3, 7]), 0usize..4, any::<u64>())
}

fn small(p: u64, n: usize, r: &mut impl Rng) -> Arc<MC> {
    let bound = common::CORPUS_BOUNDS[n];
    let mut shape = Shape::new(bound);
    shape.width = 3;
    shape.height = 3;
    shape.max_dim = 2;
    Arc::new(random_multicomplex(&gf(p), &shape, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(p in prop::sample::select(vec![2u64, 3, 7]), rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let f = gf(p);
        let m = random_matrix(p, rows, cols, seed);
        let g = GradedMap::zero(&f, b(-1, 0), &BigradedModule::from_dims([(b(0, 0), cols)]), &BigradedModule::from_dims([(b(-1, 0), rows)]));
        let mut g = g;
        g.set_block(b(0, 0), Matrix::from_rows(&f, cols, m.clone())).unwrap();
        let (k, i) = (kernel_of(&g, b(0, 0)), image_of(&g, b(0, 0)));
        prop_assert_eq!(k.dim() + i.dim(), cols);
        prop_assert_eq!(i.dim(), gfp::rank(&m, cols, p));
    }

    #[test]
    fn solve_is_exact(p in prop::sample::select(vec![2u64, 5, 7]), seed in any::<u64>()) {
        let f = gf(p);
        let rows = random_matrix(p, 3, 2, seed);
        let t: Vec<u64> = random_matrix(p, 1, 3, seed ^ 1).remove(0);
        let m = Matrix::from_rows(&f, 2, rows.clone());
        let mut g = GradedMap::zero(&f, b(0, 0), &BigradedModule::from_dims([(b(0, 0), 2)]), &BigradedModule::from_dims([(b(0, 0), 3)]));
        g.set_block(b(0, 0), m.clone()).unwrap();
        let cols: Vec<Vec<u64>> = (0..2).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let mut with_t = cols.clone();
        with_t.push(t.clone());
        match solve(&g, b(0, 0), &t) {
            Solve::Solution(x) => prop_assert_eq!(m.mul_vec(&x), t),
            Solve::Infeasible(y) => {
                prop_assert!(check_certificate(&m, &t, &y));
                prop_assert!(gfp::rank(&with_t, 3, p) > gfp::rank(&cols, 3, p));
            }
        }
    }

    #[test]
    fn subquotient_is_basis_invariant(seed in any::<u64>()) {
        let f = gf(3);
        let z = random_matrix(3, 3, 4, seed);
        let b0: Vec<u64> = (0..4).map(|j| (z[0][j] + 2 * z[1][j]) % 3).collect();
        let a = subquotient(&f, 4, z.clone(), vec![b0.clone()]).unwrap();
        let mixed: Vec<Vec<u64>> = vec![
            (0..4).map(|j| (z[0][j] + z[2][j]) % 3).collect(),
            z[1].clone(),
            (0..4).map(|j| (2 * z[2][j]) % 3).collect(),
        ];
        let scaled: Vec<u64> = b0.iter().map(|v| 2 * v % 3).collect();
        let c = subquotient(&f, 4, mixed, vec![scaled]).unwrap();
        prop_assert_eq!(a.dim(), c.dim());
    }

    #[test]
    fn scalars_are_canonical(a in -50i64..50, c in 1i64..50, x in any::<u64>(), y in any::<u64>()) {
        let q = Rationals;
        let v = q.mul(&q.from_i64(a), &q.inv(&q.from_i64(-c)).unwrap());
        prop_assert!(is_canonical_rational(&v));
        let s = q.add(&v, &q.parse("3/-6").unwrap());
        prop_assert!(is_canonical_rational(&s));
        for p in [2u64, 3, 7, 1_000_003] {
            let f = PrimeField::new(p).unwrap();
            for e in [f.add(&(x % p), &(y % p)), f.sub(&(x % p), &(y % p)), f.mul(&(x % p), &(y % p)), f.neg(&(x % p)), f.from_i64(a)] {
                prop_assert!(e < p);
            }
        }
    }

    #[test]
    fn tensor_is_valid_and_symmetric((p, n, seed) in arb_pair(), m in 0usize..4) {
        let mut r = rng(seed);
        let a = small(p, n, &mut r);
        let c = small(p, m, &mut r);
        let ac = Arc::new(tensor_product(&a, &c).unwrap());
        let ca = Arc::new(tensor_product(&c, &a).unwrap());
        prop_assert!(ac.is_valid());
        prop_assert_eq!(ac.bound(), a.bound().max(c.bound()));
        let s = symmetry(&a, &c, ac.clone(), ca.clone()).unwrap();
        let t = symmetry(&c, &a, ca, ac.clone()).unwrap();
        prop_assert!(s.is_valid() && t.is_valid());
        prop_assert!(t.after(&s).unwrap().equals(&Morphism::identity(ac)));
    }

    #[test]
    fn pages_of_direct_sums_add((p, n, seed) in arb_pair(), rr in 0usize..4) {
        let mut r = rng(seed);
        let a = small(p, n, &mut r);
        let c = small(p, n, &mut r);
        let s = direct_sum(&a, &c).unwrap();
        prop_assert!(s.object.is_valid());
        let (x, y, z) = (
            page_dims(&a, rr, Method::Witness, Exec::Sequential).unwrap(),
            page_dims(&c, rr, Method::Witness, Exec::Sequential).unwrap(),
            page_dims(&s.object, rr, Method::Witness, Exec::Sequential).unwrap(),
        );
        for at in s.object.support() {
            let get = |m: &std::collections::BTreeMap<Bidegree, usize>| m.get(&at).copied().unwrap_or(0);
            prop_assert_eq!(get(&z), get(&x) + get(&y));
        }
    }

    #[test]
    fn pushouts_commute_and_are_universal((p, n, seed) in arb_pair()) {
        let mut r = rng(seed);
        let a = small(p, n, &mut r);
        let bb = small(p, n, &mut r);
        let c = small(p, n, &mut r);
        let f = random_morphism(&a, &bb, &mut r).unwrap();
        let g = random_morphism(&a, &c, &mut r).unwrap();
        let po = pushout(&f, &g).unwrap();
        prop_assert!(po.object.is_valid() && po.left.is_valid() && po.right.is_valid());
        prop_assert!(po.left.after(&f).unwrap().equals(&po.right.after(&g).unwrap()));
        let t = small(p, n, &mut r);
        let h = random_morphism(&po.object, &t, &mut r).unwrap();
        let (u, v) = (h.after(&po.left).unwrap(), h.after(&po.right).unwrap());
        let k = po.induced(&f, &g, &u, &v).unwrap();
        prop_assert!(k.equals(&h));
    }
}
