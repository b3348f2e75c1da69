use proptest::prelude::*;
use sabinin_core::fixtures::lie_splittings;
use sabinin_core::lie::{
    free_envelope, lie_class, right_normed_rewrite, split_ops, standard_envelope, LieTree,
};
use sabinin_core::Field;

const Q: Field = Field::Rational;

fn trees(gens: u32, degree: usize) -> Vec<LieTree> {
    if degree == 1 {
        return (0..gens).map(LieTree::Gen).collect();
    }
    let mut out = Vec::new();
    for d in 1..degree {
        for a in trees(gens, d) {
            for b in trees(gens, degree - d) {
                out.push(LieTree::br(a.clone(), b));
            }
        }
    }
    out
}

#[test]
fn rewriting_matches_tensor_evaluation() {
    for degree in 1..=5 {
        for t in trees(3, degree) {
            assert_eq!(right_normed_rewrite(Q, &t).eval(Q), t.eval(Q), "{t}");
        }
    }
}

#[test]
fn rewriting_distinct_generators_to_degree_seven() {
    // one generator per leaf: every bracket shape with all-distinct letters
    fn shapes(degree: usize, out: &mut Vec<LieTree>) {
        if degree == 1 {
            out.push(LieTree::Gen(0));
            return;
        }
        for d in 1..degree {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            shapes(d, &mut l);
            shapes(degree - d, &mut r);
            for a in &l {
                for b in &r {
                    out.push(LieTree::br(a.clone(), b.clone()));
                }
            }
        }
    }
    fn relabel(t: &LieTree, next: &mut u32) -> LieTree {
        match t {
            LieTree::Gen(_) => {
                *next += 1;
                LieTree::Gen(*next - 1)
            }
            LieTree::Br(a, b) => {
                let a = relabel(a, next);
                LieTree::br(a, relabel(b, next))
            }
        }
    }
    for degree in 6..=7 {
        let mut raw = Vec::new();
        shapes(degree, &mut raw);
        for t in raw.iter().step_by(7) {
            let t = relabel(t, &mut 0);
            assert_eq!(right_normed_rewrite(Q, &t).eval(Q), t.eval(Q), "{t}");
        }
    }
}

#[test]
fn jacobi_rewrites_to_zero() {
    let lhs = LieTree::parse("[[x1,x2],x3]").unwrap();
    let r1 = LieTree::parse("[x1,[x2,x3]]").unwrap();
    let r2 = LieTree::parse("[x2,[x1,x3]]").unwrap();
    let diff = right_normed_rewrite(Q, &lhs)
        .sub(&right_normed_rewrite(Q, &r1))
        .add(&right_normed_rewrite(Q, &r2));
    assert!(diff.is_zero(), "{diff}");
}

#[test]
fn split_families_satisfy_axioms() {
    for (name, sp) in lie_splittings(Q) {
        let ops = split_ops(&sp, 5);
        for n in 1..=4 {
            for m in 1..=5 - n {
                let bad = ops.check_eq_three(n, m).unwrap();
                assert!(bad.is_empty(), "{name} n={n} m={m}: {bad:?}");
            }
        }
    }
}

#[test]
fn upper_split_family() {
    let (_, sp) = lie_splittings(Q).remove(0);
    let ops = split_ops(&sp, 3);
    // s = (f, h): [f,h] = 2f, [h,[f,h]] = -4f; [f,[f,h]] = 0
    assert_eq!(ops.get(&[0, 1]).unwrap(), vec![Q.int(2), Q.zero()]);
    assert_eq!(ops.get(&[1, 0, 1]).unwrap(), vec![Q.int(-4), Q.zero()]);
    assert_eq!(ops.class(), None);
}

#[test]
fn free_envelope_round_trip() {
    let expected = [2, 3];
    for ((name, sp), want) in lie_splittings(Q).into_iter().skip(2).zip(expected) {
        let ops = split_ops(&sp, 4);
        let class = ops.class().expect("nilpotent family");
        assert_eq!(class, want, "{name}");
        let env = free_envelope(&ops, class).unwrap();
        assert_eq!(split_ops(&env, 4), ops, "{name}");
        assert_eq!(lie_class(env.lie()), Some(class), "{name}");
        let std = standard_envelope(&env).unwrap();
        assert!(std.lie().dim() <= env.lie().dim());
        assert_eq!(split_ops(&std, 4), ops, "{name}");
        assert_eq!(lie_class(std.lie()), Some(class), "{name}");
        // kernel elements bracket back into the kernel
        for a in env.h() {
            for b in env.h() {
                assert!(env.project(&env.lie().mul(a, b)).iter().all(|c| c.is_zero()));
            }
        }
    }
}

#[test]
fn ideal_h_collapses() {
    // h = span of the degree-3 part is an ideal of the free class-3 algebra
    let (_, sp) = lie_splittings(Q).remove(3);
    let l = sp.lie().clone();
    let b = |i: usize| l.basis(i);
    let split = sabinin_core::lie::SplitLie::new(l.clone(), vec![b(3), b(4)], vec![b(0), b(1), b(2)]).unwrap();
    let std = standard_envelope(&split).unwrap();
    assert_eq!(std.lie().dim(), 3);
    assert!(std.h().is_empty());
}

fn arb_tree() -> impl Strategy<Value = LieTree> {
    let leaf = (0u32..3).prop_map(LieTree::Gen);
    leaf.prop_recursive(4, 6, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| LieTree::br(a, b)))
}

proptest! {
    #[test]
    fn antisymmetric_pairs_cancel(a in arb_tree(), b in arb_tree()) {
        let s = right_normed_rewrite(Q, &LieTree::br(a.clone(), b.clone()));
        let t = right_normed_rewrite(Q, &LieTree::br(b, a));
        let mut sum = s.eval(Q);
        for (k, c) in t.eval(Q) {
            let e = sum.entry(k).or_insert_with(|| Q.zero());
            *e += &c;
        }
        prop_assert!(sum.values().all(|c| c.is_zero()));
    }

    #[test]
    fn rewrite_is_idempotent(a in arb_tree()) {
        let r = right_normed_rewrite(Q, &a);
        for seq in r.0.keys() {
            let again = right_normed_rewrite(Q, &LieTree::right_normed(seq));
            prop_assert_eq!(again.0.len(), 1);
        }
    }
}

#[test]
fn torus_split_is_perfect() {
    let (_, sp) = lie_splittings(Q).remove(1);
    let t = split_ops(&sp, 5).ms_table().unwrap();
    let f = sabinin_core::table::lower_filtration(&t);
    assert!(matches!(f.outcome, sabinin_core::table::FiltrationOutcome::NotNilpotent { from: 1, dim: 2 }), "{:?}", f.outcome);
    assert_eq!(f.dims(), vec![2, 2]);
}
