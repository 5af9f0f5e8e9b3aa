//! Library results checked against independently computed references.

mod common;

use chiralkit::affine::{affine_tower, AffineIsometry};
use chiralkit::classify::{finite_classification, parity_invariant_check, SemidirectElement};
use chiralkit::galilean::{galilean_tower, plane_reflection, Event, GalileanIsometry, KleinElement, KleinGroup};
use chiralkit::linalg::{self, Matrix};
use chiralkit::objects::{affine_point_symmetries, galilean_point_symmetries, DEFAULT_MAX_POINTS};
use chiralkit::orthogonal::OrthogonalGroup;
use chiralkit::poincare::{Axis, Convention, Generator, PoincareElement};
use chiralkit::{Classification, ClassifiedGroup, OrthogonalMap, QuadraticSpace};
use common::*;
use proptest::prelude::*;
use rand::Rng;

const SIGNATURES: [(usize, usize); 8] = [(2, 0), (3, 0), (1, 1), (2, 1), (1, 2), (1, 3), (3, 1), (2, 2)];

#[test]
fn parity_pair_agrees_with_block_determinants() {
    let mut r = rng(11);
    for (p, q) in SIGNATURES {
        let space = QuadraticSpace::new(p, q).unwrap();
        for _ in 0..200 {
            let m = random_orthogonal(&space, &mut r, 6);
            let expect = block_oracle_direct(&space, m.matrix());
            assert_eq!(m.classify().unwrap() == Classification::Direct, expect, "({p},{q}) {:?}", m.matrix());
        }
    }
}

#[test]
fn minkowski_labels_match_proper_orthochronous() {
    let mut r = rng(12);
    for c in [Convention::TimeFirst, Convention::TimeLast] {
        for _ in 0..300 {
            let len = r.gen_range(0..=8);
            let mut g = PoincareElement::identity(c, 1e-9);
            for _ in 0..len {
                let axis = [Axis::X, Axis::Y, Axis::Z][r.gen_range(0..3)];
                let gen = match r.gen_range(0..5) {
                    0 => Generator::Parity,
                    1 => Generator::TimeReversal,
                    2 => Generator::boost(axis, r.gen_range(-0.5..0.5)),
                    3 => Generator::rotation(axis, r.gen_range(-3.0..3.0)),
                    _ => Generator::Translation((0..4).map(|_| r.gen_range(-2.0..2.0)).collect()),
                };
                g = g.compose(&PoincareElement::generator(&gen, c, 1e-9).unwrap()).unwrap();
            }
            let direct = g.classify().unwrap() == Classification::Direct;
            assert_eq!(direct, g.is_proper_orthochronous());
            let other = g.to_convention(c.other());
            assert_eq!(other.classify().unwrap(), g.classify().unwrap());
        }
    }
}

#[test]
fn boost_rapidities_add() {
    let c = Convention::TimeFirst;
    for (a, b) in [(0.3, 0.4), (-1.2, 0.5), (2.0, -2.0)] {
        let ga = PoincareElement::generator(&Generator::boost(Axis::Y, a), c, 1e-9).unwrap();
        let gb = PoincareElement::generator(&Generator::boost(Axis::Y, b), c, 1e-9).unwrap();
        let sum = PoincareElement::generator(&Generator::boost(Axis::Y, a + b), c, 1e-9).unwrap();
        // Reference: cosh(a+b) = cosh a cosh b + sinh a sinh b.
        let reference = a.cosh() * b.cosh() + a.sinh() * b.sinh();
        let prod = ga.compose(&gb).unwrap();
        assert!((prod.time_time_entry() - reference).abs() < 1e-12);
        assert!(prod.affine().approx_eq(sum.affine(), &1e-12));
    }
}

#[test]
fn finite_closure_reproduces_known_square_subgroups() {
    // Z/4: squares {0, 2}. Z/2 × Z/2: squares {0}. Z/5: everything.
    let z4 = finite_classification(&[0u8, 1, 2, 3], |a, b| (a + b) % 4, |a, b| a == b).unwrap();
    assert_eq!(
        z4,
        vec![Classification::Direct, Classification::Indirect, Classification::Direct, Classification::Indirect]
    );
    let z5 = finite_classification(&[0u8, 1, 2, 3, 4], |a, b| (a + b) % 5, |a, b| a == b).unwrap();
    assert!(z5.iter().all(|c| *c == Classification::Direct));
    let klein = finite_classification(&KleinElement::ALL, KleinElement::compose, |a, b| a == b).unwrap();
    assert_eq!(
        klein,
        vec![Classification::Direct, Classification::Indirect, Classification::Indirect, Classification::Indirect]
    );
}

#[test]
fn determinant_parity_audit_on_o3() {
    let space = QuadraticSpace::new(3, 0).unwrap();
    let group = OrthogonalGroup::new(space.clone());
    let mut r = rng(13);
    let samples: Vec<_> =
        (0..100).map(|_| (random_orthogonal(&space, &mut r, 6), random_orthogonal(&space, &mut r, 6))).collect();
    let report =
        parity_invariant_check(&group, &samples, |g: &OrthogonalMap<f64>| vec![u8::from(g.determinant() < 0.0)]);
    assert!(report.is_clean(), "{report:?}");
    assert_eq!(report.pairs_checked, 100);

    let klein_pairs: Vec<_> =
        KleinElement::ALL.iter().flat_map(|a| KleinElement::ALL.iter().map(move |b| (*a, *b))).collect();
    let report = parity_invariant_check(&KleinGroup, &klein_pairs, |k: &KleinElement| {
        vec![u8::from(k.time_sign < 0), u8::from(k.space_sign < 0)]
    });
    assert!(report.is_clean());
}

#[test]
fn affine_tower_matches_closed_form() {
    let space = QuadraticSpace::new(2, 1).unwrap();
    let tower = affine_tower(space.clone());
    let mut r = rng(14);
    for _ in 0..200 {
        let a = random_orthogonal(&space, &mut r, 6);
        let t: Vec<f64> = (0..3).map(|_| r.gen_range(-3.0..3.0)).collect();
        let closed = AffineIsometry::new(a.clone(), t.clone()).unwrap();
        let elem = SemidirectElement { n: t, h: a };
        assert_eq!(tower.classify(&elem).unwrap(), closed.classify().unwrap());
        let b = random_orthogonal(&space, &mut r, 6);
        let other = SemidirectElement { n: vec![1.0, -1.0, 0.5], h: b.clone() };
        let p = tower.compose(&elem, &other);
        let cp = closed.compose(&AffineIsometry::new(b, other.n.clone()).unwrap()).unwrap();
        assert!(linalg::approx_eq_vec(&p.n, cp.translation(), &1e-9));
    }
}

#[test]
fn galilean_tower_matches_closed_form() {
    let tower = galilean_tower(1e-9);
    let mut r = rng(15);
    for _ in 0..300 {
        let g = random_galilean(&mut r);
        let h = random_galilean(&mut r);
        assert_eq!(tower.classify(&g.to_tower()).unwrap(), g.classify());
        let prod = GalileanIsometry::from_tower(&tower.compose(&g.to_tower(), &h.to_tower()));
        assert!(prod.approx_eq(&g.compose(&h), &1e-10));
    }
}

#[test]
fn square_point_set_has_dihedral_symmetry() {
    let space = QuadraticSpace::new(2, 0).unwrap();
    let pts: Vec<(Vec<f64>, u8)> =
        [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]].iter().map(|p| (p.to_vec(), 0)).collect();
    let sym = affine_point_symmetries(&space, &pts, DEFAULT_MAX_POINTS, 1e-9).unwrap();
    // Reference: the eight signed permutation matrices.
    let mut reference = Vec::new();
    for swap in [false, true] {
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                let m = if swap {
                    Matrix::from_rows(vec![vec![0.0, sx], vec![sy, 0.0]]).unwrap()
                } else {
                    Matrix::from_diagonal(&[sx, sy])
                };
                reference.push(m);
            }
        }
    }
    assert_eq!(sym.len(), 8);
    for m in &reference {
        assert!(sym.iter().any(|g| g.linear().matrix().approx_eq(m, &1e-12)));
    }
    let indirect = sym.iter().filter(|g| g.classify().unwrap() == Classification::Indirect).count();
    assert_eq!(indirect, 4);
}

#[test]
fn time_pair_symmetries_include_time_reversal() {
    let events = [(Event::new(1.0, [0.0; 3]), "a"), (Event::new(-1.0, [0.0; 3]), "a")];
    let sym = galilean_point_symmetries(&events, DEFAULT_MAX_POINTS, 1e-9).unwrap();
    assert!(sym.iter().any(|g| g.approx_eq(&GalileanIsometry::time_reversal(), &1e-12)));
    for g in &sym {
        for h in &sym {
            let gh = g.compose(h);
            assert!(sym.iter().any(|k| k.approx_eq(&gh, &1e-9)), "not closed");
        }
    }
}

#[test]
fn plane_reflection_is_parity_times_half_turn() {
    let n = [1.0, 1.0, 1.0];
    let half_turn = chiralkit::galilean::axis_angle(&n, std::f64::consts::PI);
    let p = GalileanIsometry::<f64>::parity();
    let r = GalileanIsometry::spatial(1, half_turn);
    assert!(p.compose(&r).omega.approx_eq(&plane_reflection(&n), &1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_rotations_have_exact_conjugation(seed in 0u64..1000) {
        let mut r = rng(seed);
        let omega = random_rational_rotation(&mut r);
        let g = GalileanIsometry::spatial(1, omega.clone());
        let v = [random_rat(&mut r), random_rat(&mut r), random_rat(&mut r)];
        let expect = omega.mul_vec(&v);
        let conj = GalileanIsometry::boost(v).conjugated_by(&g);
        prop_assert_eq!(conj.v.to_vec(), expect);
        prop_assert_eq!(conj.omega, chiralkit::Matrix::identity(3));
    }

    #[test]
    fn squares_are_direct_in_every_signature(seed in 0u64..1000, sig in 0usize..SIGNATURES.len()) {
        let (p, q) = SIGNATURES[sig];
        let space = QuadraticSpace::new(p, q).unwrap();
        let mut r = rng(seed);
        let g = random_orthogonal(&space, &mut r, 6);
        prop_assert_eq!(g.compose(&g).unwrap().classify().unwrap(), Classification::Direct);
    }
}
