use std::collections::BTreeMap;

use proptest::prelude::*;
use sabinin_core::fixtures::{free_nilpotent, remark_algebra};
use sabinin_core::free::parse_element;
use sabinin_core::sabinin::{ms_bracket, multioperator, shu_p};
use sabinin_core::table::{lower_filtration, ux_table, FiltrationOutcome};
use sabinin_core::{Error, Field, FreeElement, Scalar, StructureConstants, Word};

fn q() -> Field {
    Field::Rational
}

fn gens(d: u32, n: u32) -> Vec<FreeElement> {
    (0..n).map(|i| FreeElement::gen(q(), d, i)).collect()
}

fn left_normed(seq: &[FreeElement], d: u32) -> FreeElement {
    seq.iter().fold(FreeElement::one(q(), d), |acc, e| &acc * e)
}

/// Solves the defining identity with Sweedler components taken from the
/// coproduct of the words `a`, `b` themselves.
struct SweedlerOracle {
    z: FreeElement,
    memo: BTreeMap<(Word, Word), FreeElement>,
}

impl SweedlerOracle {
    fn new(z: FreeElement) -> Self {
        SweedlerOracle { z, memo: BTreeMap::new() }
    }

    fn p(&mut self, a: &Word, b: &Word) -> FreeElement {
        let d = self.z.trunc();
        if a.is_unit() || b.is_unit() {
            return FreeElement::zero(q(), d);
        }
        if let Some(v) = self.memo.get(&(a.clone(), b.clone())) {
            return v.clone();
        }
        let (ea, eb) = (FreeElement::word(q(), d, a.clone()), FreeElement::word(q(), d, b.clone()));
        let mut out = &(&(&ea * &eb) * &self.z) - &(&ea * &(&eb * &self.z));
        let ca = ea.coproduct();
        let cb = eb.coproduct();
        for ((a1, a2), x) in ca.terms() {
            for ((b1, b2), y) in cb.terms() {
                if a1.is_unit() && b1.is_unit() {
                    continue;
                }
                let inner = self.p(a2, b2);
                let coef = &FreeElement::word(q(), d, a1.clone()) * &FreeElement::word(q(), d, b1.clone());
                out = &out - &(&coef * &inner).scale(&(x * y));
            }
        }
        self.memo.insert((a.clone(), b.clone()), out.clone());
        out
    }
}

fn word_of(seq: &[u32]) -> Word {
    Word::left_normed(seq)
}

#[test]
fn lowest_shu_p_is_the_associator() {
    let d = 3;
    let g = gens(d, 3);
    let p = shu_p(&g[..1], &g[1..2], &g[2]).unwrap();
    assert_eq!(p, parse_element(q(), d, "((x1 x2) x3) - (x1 (x2 x3))").unwrap());
    let m2 = StructureConstants::matrices(q(), 2);
    let v = m2.evaluate(&p, &[m2.basis(1), m2.basis(2), m2.basis(3)]).unwrap();
    assert!(v.iter().all(Scalar::is_zero));
}

#[test]
fn shu_p_matches_sweedler_oracle() {
    let d = 5;
    let g = gens(d, 5);
    let shapes: &[(&[u32], &[u32], u32)] = &[
        (&[0, 1], &[2], 3),
        (&[0], &[1, 2], 3),
        (&[0, 1], &[2, 3], 4),
        (&[0, 1, 2], &[3], 4),
        (&[0], &[1, 2, 3], 4),
        (&[0, 0], &[1], 0),
        (&[1, 0], &[0, 1], 1),
    ];
    for (u, v, z) in shapes {
        let useq: Vec<FreeElement> = u.iter().map(|&i| g[i as usize].clone()).collect();
        let vseq: Vec<FreeElement> = v.iter().map(|&i| g[i as usize].clone()).collect();
        let mut oracle = SweedlerOracle::new(g[*z as usize].clone());
        let expect = oracle.p(&word_of(u), &word_of(v));
        let got = shu_p(&useq, &vseq, &g[*z as usize]).unwrap();
        assert_eq!(got, expect, "{u:?} {v:?} {z}");
        assert!(got.is_primitive());
    }
}

/// `(uv)z − u(vz)` against `Σ u₍₁₎v₍₁₎·p(u₍₂₎; v₍₂₎; z)` over all splits.
fn round_trip_holds(useq: &[FreeElement], vseq: &[FreeElement], z: &FreeElement) -> bool {
    let d = z.trunc();
    let lhs = {
        let (u, v) = (left_normed(useq, d), left_normed(vseq, d));
        &(&(&u * &v) * z) - &(&u * &(&v * z))
    };
    let mut rhs = FreeElement::zero(q(), d);
    let pick = |seq: &[FreeElement], mask: u64, keep: bool| -> Vec<FreeElement> {
        seq.iter().enumerate().filter(|(i, _)| (mask >> i & 1 == 1) == keep).map(|(_, e)| e.clone()).collect()
    };
    for s in 0..1u64 << useq.len() {
        for t in 0..1u64 << vseq.len() {
            let coef = &left_normed(&pick(useq, s, true), d) * &left_normed(&pick(vseq, t, true), d);
            let p = shu_p(&pick(useq, s, false), &pick(vseq, t, false), z).unwrap();
            rhs = &rhs + &(&coef * &p);
        }
    }
    lhs == rhs
}

#[test]
fn defining_identity_round_trip_to_degree_four() {
    let d = 4;
    let g = gens(d, 2);
    for total in 2..=3usize {
        for a in 1..total {
            let b = total - a;
            for code in 0..1usize << (total + 1) {
                let pick = |i: usize| g[(code >> i) & 1].clone();
                let useq: Vec<_> = (0..a).map(pick).collect();
                let vseq: Vec<_> = (a..total).map(pick).collect();
                assert!(round_trip_holds(&useq, &vseq, &pick(total)), "a={a} b={b} code={code}");
            }
        }
    }
}

#[test]
fn shu_p_rejects_bad_input() {
    let g = gens(3, 3);
    let xy = &g[0] * &g[1];
    assert!(matches!(shu_p(&[xy], &g[1..2], &g[2]), Err(Error::NotPrimitive(_))));
    let small = gens(2, 3);
    assert!(matches!(shu_p(&small[..1], &small[1..2], &small[2]), Err(Error::TruncationTooSmall { .. })));
}

#[test]
fn ms_bracket_examples() {
    let d = 3;
    let g = gens(d, 3);
    assert_eq!(ms_bracket(&[], &g[1], &g[2]).unwrap(), parse_element(q(), d, "-(x2 x3) + (x3 x2)").unwrap());
    let expect = parse_element(q(), d, "-((x1 x2) x3) + (x1 (x2 x3)) + ((x1 x3) x2) - (x1 (x3 x2))").unwrap();
    assert_eq!(ms_bracket(&g[..1], &g[1], &g[2]).unwrap(), expect);
    assert!(ms_bracket(&[], &g[1], &g[1]).unwrap().is_zero());
}

#[test]
fn multioperator_examples() {
    let d = 3;
    let g = gens(d, 3);
    let half = q().ratio(1, 2).unwrap();
    let a = shu_p(&g[..1], &g[1..2], &g[2]).unwrap();
    let b = shu_p(&g[..1], &g[2..3], &g[1]).unwrap();
    assert_eq!(multioperator(&g[..1], &g[1..3]).unwrap(), (&a + &b).scale(&half));
    let swapped = [g[2].clone(), g[1].clone()];
    assert_eq!(multioperator(&g[..1], &g[1..3]).unwrap(), multioperator(&g[..1], &swapped).unwrap());
    let yy = [g[1].clone(), g[1].clone()];
    let m2 = StructureConstants::matrices(q(), 2);
    let v = m2.evaluate(&multioperator(&g[..1], &yy).unwrap(), &[m2.basis(1), m2.basis(2)]).unwrap();
    assert!(v.iter().all(Scalar::is_zero));
    let f2 = Field::prime(2).unwrap();
    let h: Vec<FreeElement> = (0..3).map(|i| FreeElement::gen(f2, 3, i)).collect();
    assert!(matches!(multioperator(&h[..1], &h[1..3]), Err(Error::Characteristic { .. })));
}

#[test]
fn ux_table_examples() {
    // k[t]/(t²) is commutative and associative
    let dual = StructureConstants::from_fn(q(), 2, Some(vec![q().one(), q().zero()]), |i, j| {
        let mut v = vec![q().zero(); 2];
        if i + j < 2 {
            v[i + j] = q().one();
        }
        v
    })
    .unwrap();
    let t = ux_table(&dual, 4).unwrap();
    assert!(t.ms_entries().values().chain(t.phi_entries().values()).all(|v| v.iter().all(Scalar::is_zero)));
    let r = remark_algebra(q());
    assert_eq!(r.ms(&[], 0, 1).unwrap(), vec![q().zero(), q().int(-1)]);
    let m2 = ux_table(&StructureConstants::matrices(q(), 2), 3).unwrap();
    assert_eq!(m2.ms(&[], 1, 2).unwrap(), vec![q().int(-1), q().zero(), q().zero(), q().int(1)]);
    assert!(matches!(m2.ms(&[0, 0], 1, 2), Err(Error::AboveWeightBound { .. })));
}

#[test]
fn associative_tables_are_lie() {
    let a = StructureConstants::matrices(q(), 2);
    let t = ux_table(&a, 4).unwrap();
    for ((prefix, _, _), v) in t.ms_entries() {
        if !prefix.is_empty() {
            assert!(v.iter().all(Scalar::is_zero));
        }
    }
    assert!(t.phi_entries().values().all(|v| v.iter().all(Scalar::is_zero)));
    let br = |x: usize, y: usize| t.ms(&[], x, y).unwrap();
    let lin = |v: &[Scalar], y: usize| -> Vec<Scalar> {
        let mut out = vec![q().zero(); 4];
        for (i, c) in v.iter().enumerate() {
            for (o, w) in out.iter_mut().zip(t.ms_eval::<Scalar>(&[], &a.basis(i), &a.basis(y)).unwrap()) {
                *o += &(c * &w);
            }
        }
        out
    };
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                let mut s = lin(&br(x, y), z);
                for (o, w) in s.iter_mut().zip(lin(&br(y, z), x)) {
                    *o += &w;
                }
                for (o, w) in s.iter_mut().zip(lin(&br(z, x), y)) {
                    *o += &w;
                }
                assert!(s.iter().all(Scalar::is_zero), "{x} {y} {z}");
            }
        }
    }
}

#[test]
fn filtration_examples() {
    let zero = StructureConstants::from_fn(q(), 2, None, |_, _| vec![q().zero(); 2]).unwrap();
    assert_eq!(lower_filtration(&ux_table(&zero, 3).unwrap()).class(), Some(1));
    let t = free_nilpotent(q(), 2, 2).unwrap().table;
    let f = lower_filtration(&t);
    assert_eq!(f.dims(), vec![3, 1, 0]);
    assert_eq!(f.levels[1], vec![vec![q().zero(), q().zero(), q().one()]]);
    assert_eq!(f.class(), Some(2));
    let r = lower_filtration(&remark_algebra(q()));
    assert!(matches!(r.outcome, FiltrationOutcome::NotNilpotent { dim: 1, .. }));
    assert_eq!(r.levels.last().unwrap(), &vec![vec![q().zero(), q().one()]]);
}

fn primitive(d: u32) -> impl Strategy<Value = FreeElement> {
    prop::collection::vec(-3i64..=3, 3).prop_map(move |cs| {
        let mut e = FreeElement::zero(q(), d);
        for (i, c) in cs.iter().enumerate() {
            e.add_term(Word::gen(i as u32), &q().int(*c));
        }
        let br = ms_bracket(&[], &FreeElement::gen(q(), d, 0), &FreeElement::gen(q(), d, 1)).unwrap();
        &e + &br.scale(&q().int(cs[0] - cs[2]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn ms_bracket_is_antisymmetric(x in primitive(4), y in primitive(4), z in primitive(4)) {
        let a = ms_bracket(std::slice::from_ref(&x), &y, &z).unwrap();
        let b = ms_bracket(&[x], &z, &y).unwrap();
        prop_assert!((&a + &b).is_zero());
        prop_assert!(a.is_primitive());
        prop_assert!((&ms_bracket(&[], &y, &z).unwrap() + &ms_bracket(&[], &z, &y).unwrap()).is_zero());
    }

    #[test]
    fn multioperator_is_symmetric_in_each_group(x1 in primitive(4), x2 in primitive(4), y1 in primitive(4), y2 in primitive(4)) {
        let a = multioperator(&[x1.clone(), x2.clone()], &[y1.clone(), y2.clone()]).unwrap();
        let b = multioperator(&[x2, x1], &[y2, y1]).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.is_primitive());
    }

    #[test]
    fn shu_p_outputs_are_primitive(u in primitive(4), v in primitive(4), z in primitive(4)) {
        let p = shu_p(std::slice::from_ref(&u), &[v.clone(), u.clone()], &z).unwrap();
        prop_assert!(p.is_primitive());
        prop_assert!(round_trip_holds(&[u], &[v], &z));
    }
}
