use proptest::prelude::*;
use sabinin_core::poly::vec_is_zero;
use sabinin_core::series::*;
use sabinin_core::structure::{add_vec, scale_vec, StructureConstants, Vector};
use sabinin_core::word::Word;
use sabinin_core::Field;

fn q() -> Field {
    Field::Rational
}

fn m2() -> StructureConstants {
    StructureConstants::matrices(q(), 2)
}

fn ints(f: Field, cs: &[i64]) -> Vector {
    cs.iter().map(|&c| f.int(c)).collect()
}

/// `a(b(x))` by expanding `Σ aₘ b(x)^{m+1}` with series products written out.
fn substitution_oracle(alg: &StructureConstants, a: &BSeries, b: &BSeries) -> BSeries {
    let d = a.depth();
    let unit = alg.unit().unwrap().clone();
    // index e holds the coefficient of x^e, e = 0..=d+1
    let mut bx = vec![alg.zero(); d + 2];
    bx[1] = unit.clone();
    for (m, c) in b.coeffs.iter().enumerate() {
        bx[m + 2] = c.clone();
    }
    let times = |u: &[Vector], v: &[Vector]| -> Vec<Vector> {
        let mut out = vec![alg.zero(); d + 2];
        for (i, x) in u.iter().enumerate() {
            for (j, y) in v.iter().enumerate() {
                if i + j <= d + 1 {
                    out[i + j] = add_vec(&out[i + j], &alg.mul(x, y));
                }
            }
        }
        out
    };
    let mut total = vec![alg.zero(); d + 2];
    let mut power = bx.clone();
    for m in 0..=d {
        let am = if m == 0 { unit.clone() } else { a.coeffs[m - 1].clone() };
        let scaled: Vec<Vector> = power.iter().map(|c| alg.mul(&am, c)).collect();
        for (t, s) in total.iter_mut().zip(&scaled) {
            *t = add_vec(t, s);
        }
        power = times(&power, &bx);
    }
    BSeries { coeffs: total[2..].to_vec() }
}

fn series_in(alg: &StructureConstants, depth: usize, cs: &[i64]) -> BSeries {
    let k = alg.dim();
    BSeries { coeffs: (0..depth).map(|e| ints(alg.field(), &cs[e * k..(e + 1) * k])).collect() }
}

#[test]
fn identity_series_is_neutral() {
    let alg = m2();
    let id = BSeries::identity(&alg, 4);
    let b = series_in(&alg, 4, &(1..=16).map(|i| i % 5 - 2).collect::<Vec<_>>());
    assert_eq!(b_compose(&alg, &id, &b).unwrap(), b);
    assert_eq!(b_compose(&alg, &b, &id).unwrap(), b);
}

#[test]
fn two_quadratic_series() {
    let alg = m2();
    let (a1, b1) = (alg.basis(1), alg.basis(2));
    let a = BSeries::monomial(&alg, 3, 1, a1.clone());
    let b = BSeries::monomial(&alg, 3, 1, b1.clone());
    let c = b_compose(&alg, &a, &b).unwrap();
    assert_eq!(c.coeffs[0], add_vec(&a1, &b1));
    assert_eq!(c.coeffs[1], scale_vec(&q().int(2), &alg.mul(&a1, &b1)));
    assert_eq!(c.coeffs[2], alg.mul(&a1, &alg.mul(&b1, &b1)));
    // E12·E21 = E11, E12·E21·E21 = 0
    assert_eq!(c.coeffs[1], ints(q(), &[2, 0, 0, 0]));
    assert!(c.coeffs[2].iter().all(|x| x.is_zero()));
}

#[test]
fn mismatches_are_rejected() {
    let alg = m2();
    assert!(b_compose(&alg, &BSeries::identity(&alg, 2), &BSeries::identity(&alg, 3)).is_err());
    let short = BSeries { coeffs: vec![ints(q(), &[1, 0])] };
    assert!(b_compose(&alg, &short, &BSeries::identity(&alg, 1)).is_err());
    let c1 = CSeries::one(2);
    assert!(c_mul(&alg, &c1, &CSeries::one(3)).is_err());
}

#[test]
fn formula_agrees_with_substitution_to_depth_four() {
    let alg = m2();
    for seed in 0..6i64 {
        for depth in 1..=4 {
            let a = series_in(&alg, depth, &(0..16).map(|i| (i * 7 + seed * 3) % 5 - 2).collect::<Vec<_>>());
            let b = series_in(&alg, depth, &(0..16).map(|i| (i * 3 + seed * 5 + 1) % 7 - 3).collect::<Vec<_>>());
            let direct = b_compose(&alg, &a, &b).unwrap();
            assert_eq!(direct, substitution_oracle(&alg, &a, &b), "depth {depth}");
            assert_eq!(b_compose_by_formula(&alg, &a, &b).unwrap(), direct, "depth {depth}");
        }
    }
}

#[test]
fn scalar_composition_loop_is_a_group() {
    let alg = StructureConstants::scalars(q());
    let l = b_loop(&alg, 4).unwrap();
    assert!(vec_is_zero(&l.associator()));
    assert!(l.verify_n_sequence(2).passed());
}

#[test]
fn matrix_composition_loop_is_not_associative() {
    let alg = m2();
    let l = b_loop(&alg, 5).unwrap();
    assert_eq!(l.dim(), 20);
    assert!(!vec_is_zero(&l.associator()));
    let cert = l.verify_n_sequence(2);
    assert!(cert.passed(), "{:?}", cert.entries.iter().filter(|e| !e.passed()).map(|e| &e.name).collect::<Vec<_>>());
}

#[test]
fn nottingham_type_loop_is_associative() {
    let f7 = Field::prime(7).unwrap();
    let l = b_loop(&StructureConstants::scalars(f7), 6).unwrap();
    assert!(vec_is_zero(&l.associator()));
    assert!(!vec_is_zero(&l.commutator()));
}

#[test]
fn loop_product_is_composition() {
    let alg = m2();
    let l = b_loop(&alg, 3).unwrap();
    let a = series_in(&alg, 3, &(0..12).map(|i| i % 3 - 1).collect::<Vec<_>>());
    let b = series_in(&alg, 3, &(0..12).map(|i| 2 - i % 4).collect::<Vec<_>>());
    let p = l.mul_points(&flatten(&a), &flatten(&b));
    assert_eq!(unflatten(&alg, &p), b_compose(&alg, &a, &b).unwrap());
    let d = l.eval(l.left_division_map(), &[&flatten(&a), &p]);
    assert_eq!(d, flatten(&b));
}

/// `x + a x^{i+1}` composed with `x + b x^{j+1}` picks up `(i+1)·ab` in
/// degree `i+j+1`, so the leading commutator term is `(i+1)ab − (j+1)ba`.
fn commutator_oracle(alg: &StructureConstants, i: usize, j: usize, a: &Vector, b: &Vector) -> Vector {
    let f = alg.field();
    let ab = scale_vec(&f.int(i as i64 + 1), &alg.mul(a, b));
    let ba = scale_vec(&f.int(j as i64 + 1), &alg.mul(b, a));
    ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
}

#[test]
fn graded_commutator_examples() {
    let alg = m2();
    let (e12, e21) = (alg.basis(1), alg.basis(2));
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
        let c = b_graded_commutator(&alg, i, j, &e12, &e21).unwrap();
        assert!(c.lower_vanish);
        assert_eq!(c.leading, commutator_oracle(&alg, i, j, &e12, &e21), "{i} {j}");
        // the predicted value misses one copy of ab − ba
        let ab_ba: Vector = alg.mul(&e12, &e21).iter().zip(alg.mul(&e21, &e12)).map(|(x, y)| x - &y).collect();
        assert_eq!(c.difference(), ab_ba, "{i} {j}");
        assert!(!c.holds());
    }
    let scalars = StructureConstants::scalars(q());
    let one = vec![q().one()];
    for (i, j) in [(1, 1), (1, 2), (3, 1)] {
        let c = b_graded_commutator(&scalars, i, j, &one, &one).unwrap();
        assert!(c.holds(), "{i} {j}");
        assert_eq!(c.predicted, vec![q().int(i as i64 - j as i64)]);
    }
    let c = b_graded_commutator(&alg, 1, 1, &e12, &e12).unwrap();
    assert!(c.holds() && c.leading.iter().all(|x| x.is_zero()));
}

#[test]
fn graded_associator_examples() {
    let alg = m2();
    let (e11, e12, e21) = (alg.basis(0), alg.basis(1), alg.basis(2));
    let a = b_graded_associator(&alg, (1, 1, 1), &e11, &e12, &e21).unwrap();
    assert!(a.holds(), "{:?}", a.difference());
    assert_eq!(a.predicted, ints(q(), &[1, 0, 0, 0]));
    let scalars = StructureConstants::scalars(q());
    let one = vec![q().one()];
    let a = b_graded_associator(&scalars, (1, 1, 1), &one, &one, &one).unwrap();
    assert!(a.holds());
    assert!(a.leading[0].is_zero());
}

fn x() -> Word {
    Word::gen(0)
}

#[test]
fn non_associative_series_products() {
    let scalars = StructureConstants::scalars(q());
    let one = vec![q().one()];
    let b = CSeries::one(3).with_term(x(), vec![q().int(3)]).with_term(Word::mul(&x(), &x()), vec![q().int(-1)]);
    assert_eq!(c_mul(&scalars, &CSeries::one(3), &b).unwrap(), b);
    let p = CSeries::one(3).with_term(x(), one.clone());
    let sq = c_mul(&scalars, &p, &p).unwrap();
    assert_eq!(sq.coeffs.len(), 2);
    assert_eq!(sq.coeffs[&x()], vec![q().int(2)]);
    let xx = Word::mul(&x(), &x());
    let left = CSeries::one(3).with_term(xx.clone(), one.clone());
    let r = c_mul(&scalars, &left, &p).unwrap();
    let want = CSeries::one(3).with_term(x(), one.clone()).with_term(xx.clone(), one.clone()).with_term(Word::mul(&xx, &x()), one.clone());
    assert_eq!(r, want);
}

#[test]
fn non_associative_series_loop_is_not_associative() {
    let scalars = StructureConstants::scalars(q());
    let s = |c: i64| CSeries::one(3).with_term(x(), vec![q().int(c)]);
    let (a, b, c) = (s(1), s(2), s(-1));
    let ab_c = c_mul(&scalars, &c_mul(&scalars, &a, &b).unwrap(), &c).unwrap();
    let a_bc = c_mul(&scalars, &a, &c_mul(&scalars, &b, &c).unwrap()).unwrap();
    assert_ne!(ab_c, a_bc);
    let depth2 = |c: i64| CSeries::one(2).with_term(x(), vec![q().int(c)]);
    let lhs = c_mul(&scalars, &c_mul(&scalars, &depth2(1), &depth2(2)).unwrap(), &depth2(-1)).unwrap();
    let rhs = c_mul(&scalars, &depth2(1), &c_mul(&scalars, &depth2(2), &depth2(-1)).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn commutative_coefficients_compose_associatively(cs in prop::collection::vec(-4i64..=4, 15)) {
        let alg = StructureConstants::scalars(q());
        let (a, b, c) = (series_in(&alg, 5, &cs[..5]), series_in(&alg, 5, &cs[5..10]), series_in(&alg, 5, &cs[10..]));
        let ab_c = b_compose(&alg, &b_compose(&alg, &a, &b).unwrap(), &c).unwrap();
        let a_bc = b_compose(&alg, &a, &b_compose(&alg, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn composition_matches_oracle(cs in prop::collection::vec(-3i64..=3, 32)) {
        let alg = m2();
        let (a, b) = (series_in(&alg, 4, &cs[..16]), series_in(&alg, 4, &cs[16..]));
        let direct = b_compose(&alg, &a, &b).unwrap();
        prop_assert_eq!(&direct, &substitution_oracle(&alg, &a, &b));
        prop_assert_eq!(b_compose_by_formula(&alg, &a, &b).unwrap(), direct);
    }

    #[test]
    fn divisions_round_trip(cs in prop::collection::vec(-3i64..=3, 24)) {
        let alg = m2();
        let l = b_loop(&alg, 3).unwrap();
        let (x, y) = (ints(q(), &cs[..12]), ints(q(), &cs[12..]));
        let d = l.eval(l.left_division_map(), &[&x, &y]);
        prop_assert_eq!(l.mul_points(&x, &d), y.clone());
        let r = l.eval(l.right_division_map(), &[&x, &y]);
        prop_assert_eq!(l.mul_points(&r, &y), x);
    }

    #[test]
    fn reduction_mod_p_commutes_with_composition(cs in prop::collection::vec(-9i64..=9, 32)) {
        let f5 = Field::prime(5).unwrap();
        let (over_q, over_p) = (m2(), StructureConstants::matrices(f5, 2));
        let a = series_in(&over_q, 4, &cs[..16]);
        let b = series_in(&over_q, 4, &cs[16..]);
        let c = b_compose(&over_q, &a, &b).unwrap();
        let reduce = |s: &BSeries| -> BSeries {
            BSeries { coeffs: s.coeffs.iter().map(|v| v.iter().map(|x| f5.parse(&x.literal()).unwrap()).collect()).collect() }
        };
        prop_assert_eq!(b_compose(&over_p, &reduce(&a), &reduce(&b)).unwrap(), reduce(&c));
    }
}
