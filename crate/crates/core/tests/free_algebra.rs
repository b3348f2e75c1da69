use std::collections::BTreeMap;

use proptest::prelude::*;
use sabinin_core::bch::exp_series;
use sabinin_core::fixtures::remark_structure;
use sabinin_core::free::parse_element;
use sabinin_core::linalg::{relations, span, SparseVec};
use sabinin_core::{Error, Field, FreeElement, Scalar, StructureConstants, Tensor, Word};

fn q() -> Field {
    Field::Rational
}

fn el(d: u32, s: &str) -> FreeElement {
    parse_element(q(), d, s).unwrap()
}

fn g(d: u32, i: u32) -> FreeElement {
    FreeElement::gen(q(), d, i)
}

#[test]
fn products_and_truncation() {
    let (x, y) = (g(2, 0), g(2, 1));
    assert_eq!(&x * &y, el(2, "(x1 x2)"));
    assert_eq!(&(&x + &y) * &x, el(2, "(x1 x1) + (x2 x1)"));
    assert!((&(&x * &x) * &x).is_zero());
    let one = FreeElement::one(q(), 2);
    assert_eq!(&one * &x, x);
    assert_eq!(&x * &one, x);
}

#[test]
fn mismatches_are_errors() {
    let a = g(2, 0);
    let b = g(3, 0);
    assert!(matches!(a.checked_mul(&b), Err(Error::TruncationMismatch(..))));
    let c = FreeElement::gen(Field::prime(7).unwrap(), 2, 0);
    assert!(matches!(a.checked_add(&c), Err(Error::FieldMismatch(..))));
    let s = q().int(1);
    assert!(s.checked_add(&Field::prime(7).unwrap().int(1)).is_err());
}

#[test]
fn coproduct_examples() {
    let d = 3;
    let x = g(d, 0);
    let shown = |t: &Tensor| t.to_string();
    let mut expect = Tensor::zero(q(), d);
    for (u, v) in [(Word::gen(0), Word::Unit), (Word::Unit, Word::gen(0))] {
        expect = expect.checked_add(&Tensor::product(&FreeElement::word(q(), d, u), &FreeElement::word(q(), d, v))).unwrap();
    }
    assert_eq!(shown(&x.coproduct()), shown(&expect));
    let xy = &x * &g(d, 1);
    let c = xy.coproduct();
    let xy_w = Word::parse("(x1 x2)").unwrap();
    for (u, v) in [(xy_w.clone(), Word::Unit), (Word::gen(0), Word::gen(1)), (Word::gen(1), Word::gen(0)), (Word::Unit, xy_w)] {
        assert_eq!(c.coeff(&u, &v), q().one(), "{u} ⊗ {v}");
    }
    assert_eq!(c.terms().len(), 4);
    let one = FreeElement::one(q(), d).coproduct();
    assert_eq!(one.terms().len(), 1);
    assert_eq!(one.coeff(&Word::Unit, &Word::Unit), q().one());
}

#[test]
fn primitive_and_grouplike_examples() {
    let d = 4;
    assert!((&g(d, 0) - &g(d, 1)).is_primitive());
    assert!(!(&g(d, 0) * &g(d, 1)).is_primitive());
    for t in 1..=6 {
        let e = exp_series(&g(t, 0), t).unwrap();
        assert!(e.is_grouplike(), "trunc {t}");
        let mixed = exp_series(&(&g(t, 0) + &g(t, 1)), t).unwrap();
        assert!(mixed.is_grouplike(), "trunc {t}");
    }
}

/// Primitive elements of degree `n` on `gens` generators, by solving for
/// the kernel of the reduced coproduct.
fn primitive_basis(gens: u32, n: u32, d: u32) -> Vec<FreeElement> {
    let words = Word::all_of_degree(gens, n);
    let images: Vec<SparseVec<(Word, Word)>> =
        words.iter().map(|w| FreeElement::word(q(), d, w.clone()).reduced_coproduct().terms().clone()).collect();
    relations(q(), &images)
        .into_iter()
        .map(|r| FreeElement::from_terms(q(), d, r.into_iter().map(|(i, c)| (words[i].clone(), c))).unwrap())
        .collect()
}

/// All products of `k` factors from `pool`, over every bracketing.
fn products(pool: &[FreeElement], k: usize) -> Vec<FreeElement> {
    if k == 1 {
        return pool.to_vec();
    }
    let mut out = Vec::new();
    for i in 1..k {
        for a in products(pool, i) {
            for b in products(pool, k - i) {
                out.push(&a * &b);
            }
        }
    }
    out
}

fn coradical_oracle(e: &FreeElement, gens: u32) -> u32 {
    let d = e.trunc();
    let mut pool = Vec::new();
    for n in 1..=d {
        pool.extend(primitive_basis(gens, n, d));
    }
    let mut e0 = e.clone();
    e0.add_term(Word::Unit, &-e.counit());
    if e0.is_zero() {
        return 0;
    }
    let mut spanning: Vec<FreeElement> = Vec::new();
    for i in 1..=d as usize {
        spanning.extend(products(&pool, i).into_iter().filter(|p| !p.is_zero()));
        if span(q(), spanning.iter().map(|p| p.as_sparse())).contains(&e0.as_sparse()) {
            return i as u32;
        }
    }
    unreachable!()
}

#[test]
fn coradical_degree_examples() {
    let d = 3;
    assert_eq!(g(d, 0).coradical_degree().unwrap(), 1);
    let xy = &g(d, 0) * &g(d, 1);
    assert_eq!(xy.coradical_degree().unwrap(), 2);
    assert_eq!(FreeElement::one(q(), d).coradical_degree().unwrap(), 0);
    let samples = ["(x1 x2)", "(x1 x2) - (x2 x1)", "((x1 x2) x1)", "((x1 x2) x1) - (x1 (x2 x1))", "(x1 (x1 x1))", "(x1 x1) + x2"];
    for s in samples {
        let e = el(d, s);
        assert_eq!(e.coradical_degree().unwrap(), coradical_oracle(&e, 2), "{s}");
    }
}

#[test]
fn evaluation_examples() {
    let m2 = StructureConstants::matrices(q(), 2);
    let (e12, e21) = (m2.basis(1), m2.basis(2));
    let comm = el(2, "(x1 x2) - (x2 x1)");
    let v = m2.evaluate(&comm, &[e12, e21]).unwrap();
    let ints: Vec<i64> = vec![1, 0, 0, -1];
    assert_eq!(v, ints.iter().map(|&c| q().int(c)).collect::<Vec<_>>());
    let assoc = el(3, "((x1 x2) x3) - (x1 (x2 x3))");
    let asg = vec![m2.basis(0), m2.basis(1), m2.basis(3)];
    assert!(m2.evaluate(&assoc, &asg).unwrap().iter().all(Scalar::is_zero));
    let r = remark_structure(q());
    let (a, b) = (r.basis(0), r.basis(1));
    let e = el(3, "((x2 x1) x2) - (x2 (x1 x2))");
    assert_eq!(r.evaluate(&e, &[a, b.clone()]).unwrap(), b.iter().map(|c| -c).collect::<Vec<_>>());
    assert!(matches!(m2.evaluate(&el(2, "(x1 x3)"), &[m2.basis(0)]), Err(Error::UnassignedGenerator(_))));
}

#[test]
fn associator_of_distinct_generators_is_nonzero() {
    for d in 3..=5 {
        let (x, y, z) = (g(d, 0), g(d, 1), g(d, 2));
        assert!(!(&(&(&x * &y) * &z) - &(&x * &(&y * &z))).is_zero());
    }
}

#[test]
fn text_form_round_trips() {
    let e = el(4, "3/2*((x1 x2) x3) - (x2 x1) + 2 + x4");
    assert_eq!(parse_element(q(), 4, &e.to_string()).unwrap(), e);
    assert_eq!(Word::parse("((x1 x2) (x3 x1))").unwrap().degree(), 4);
}

#[test]
fn canonical_word_order() {
    let mut ws: Vec<Word> = ["(x2 x1)", "x2", "(x1 x2)", "((x1 x1) x1)", "x1", "(x1 (x1 x1))"].iter().map(|s| Word::parse(s).unwrap()).collect();
    ws.sort();
    let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
    assert_eq!(shown, ["x1", "x2", "(x1 x2)", "(x2 x1)", "(x1 (x1 x1))", "((x1 x1) x1)"]);
}

// Random elements on three generators with small integer coefficients.
fn element(d: u32) -> impl Strategy<Value = FreeElement> {
    let words: Vec<Word> = (1..=d).flat_map(|n| Word::all_of_degree(3, n)).collect();
    let n = words.len();
    prop::collection::vec((0..n, -3i64..=3), 0..6).prop_map(move |ts| {
        FreeElement::from_terms(q(), d, ts.into_iter().map(|(i, c)| (words[i].clone(), q().int(c)))).unwrap()
    })
}

type Triple = BTreeMap<(Word, Word, Word), Scalar>;

fn split_left(t: &Tensor) -> Triple {
    let mut out = Triple::new();
    for ((u, v), c) in t.terms() {
        for ((a, b), e) in FreeElement::word(t.field(), t.trunc(), u.clone()).coproduct().terms() {
            let k = (a.clone(), b.clone(), v.clone());
            let s = out.entry(k).or_insert_with(|| q().zero());
            *s += &(c * e);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn split_right(t: &Tensor) -> Triple {
    let mut out = Triple::new();
    for ((u, v), c) in t.terms() {
        for ((a, b), e) in FreeElement::word(t.field(), t.trunc(), v.clone()).coproduct().terms() {
            let k = (u.clone(), a.clone(), b.clone());
            let s = out.entry(k).or_insert_with(|| q().zero());
            *s += &(c * e);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn coproduct_is_coassociative_and_cocommutative(e in element(4)) {
        let c = e.coproduct();
        prop_assert_eq!(split_left(&c), split_right(&c));
        for ((u, v), x) in c.terms() {
            prop_assert_eq!(&c.coeff(v, u), x);
        }
    }

    #[test]
    fn counit_laws(e in element(4)) {
        let c = e.coproduct();
        let mut left = FreeElement::zero(q(), 4);
        let mut right = FreeElement::zero(q(), 4);
        for ((u, v), x) in c.terms() {
            if u.is_unit() { left.add_term(v.clone(), x); }
            if v.is_unit() { right.add_term(u.clone(), x); }
        }
        prop_assert_eq!(&left, &e);
        prop_assert_eq!(&right, &e);
    }

    #[test]
    fn product_is_bilinear_and_unital(a in element(4), b in element(4), c in element(4)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&c * &(&a + &b), &(&c * &a) + &(&c * &b));
        let one = FreeElement::one(q(), 4);
        prop_assert_eq!(&(&one * &a), &a);
        prop_assert_eq!(&(&a * &one), &a);
    }

    #[test]
    fn evaluation_is_multiplicative(a in element(3), b in element(3), seed in 0u64..1000) {
        let m2 = StructureConstants::matrices(q(), 2);
        let asg: Vec<Vec<Scalar>> = (0..3).map(|k| (0..4).map(|j| q().int(((seed >> (k * 4 + j)) % 5) as i64 - 2)).collect()).collect();
        let ab = m2.evaluate(&(&a * &b), &asg).unwrap();
        // products above the truncation vanish in the free algebra only
        let direct = m2.mul(&m2.evaluate(&a, &asg).unwrap(), &m2.evaluate(&b, &asg).unwrap());
        let high = FreeElement::from_terms(q(), 6, a.terms().iter().map(|(w, c)| (w.clone(), c.clone()))).unwrap();
        let highb = FreeElement::from_terms(q(), 6, b.terms().iter().map(|(w, c)| (w.clone(), c.clone()))).unwrap();
        let full = m2.evaluate(&(&high * &highb), &asg).unwrap();
        prop_assert_eq!(&full, &direct);
        let trunc_part = (&high * &highb).with_trunc(3);
        prop_assert_eq!(m2.evaluate(&trunc_part, &asg).unwrap(), ab);
    }
}
