use std::collections::BTreeSet;

use sabinin_core::fixtures::free_nilpotent;
use sabinin_core::loops::*;
use sabinin_core::Field;

fn f2() -> Field {
    Field::prime(2).unwrap()
}

/// Permutation group generated by `gens`, as a Cayley table.
fn perm_group(gens: &[Vec<usize>]) -> CayleyLoop {
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let mut elems = vec![id.clone()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h: Vec<usize> = (0..n).map(|k| elems[i][g[k]]).collect();
            if !elems.contains(&h) {
                elems.push(h);
            }
        }
        i += 1;
    }
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { (0..n).map(|k| a[b[k]]).collect() };
    let m = elems.len();
    CayleyLoop::from_fn(m, |a, b| elems.iter().position(|e| *e == compose(&elems[a], &elems[b])).unwrap()).unwrap()
}

/// Lower central series by direct commutator subgroups `[γₖ, G]`.
fn lower_central_series(g: &CayleyLoop) -> Vec<BTreeSet<usize>> {
    let n = g.order();
    let mut series = vec![(0..n).collect::<BTreeSet<usize>>()];
    loop {
        let last = series.last().unwrap();
        let comms: Vec<usize> = last.iter().flat_map(|&a| (0..n).map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
        let next = g.subloop_closure(comms);
        if &next == last {
            return series;
        }
        series.push(next);
    }
}

fn dihedral(k: usize) -> CayleyLoop {
    let rot: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    let refl: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
    perm_group(&[rot, refl])
}

fn quaternion() -> CayleyLoop {
    // left regular action of i and j on (±1, ±i, ±j, ±k) = 0..8
    let i = vec![2, 3, 1, 0, 7, 6, 4, 5];
    let j = vec![4, 5, 6, 7, 1, 0, 3, 2];
    perm_group(&[i, j])
}

fn center(l: &CayleyLoop) -> BTreeSet<usize> {
    let n = l.order();
    let e = l.identity();
    (0..n)
        .filter(|&z| {
            (0..n).all(|x| l.mul(z, x) == l.mul(x, z))
                && (0..n).all(|x| {
                    (0..n).all(|y| l.associator(z, x, y) == e && l.associator(x, z, y) == e && l.associator(x, y, z) == e)
                })
        })
        .collect()
}

#[test]
fn central_extension_satisfies_loop_axioms() {
    let l = central_extension_loop();
    let n = l.order();
    let e = l.identity();
    for a in 0..n {
        assert_eq!(l.mul(e, a), a);
        assert_eq!(l.mul(a, e), a);
        for b in 0..n {
            let xs: Vec<usize> = (0..n).filter(|&x| l.mul(a, x) == b).collect();
            let ys: Vec<usize> = (0..n).filter(|&y| l.mul(y, a) == b).collect();
            assert_eq!(xs, vec![l.ldiv(a, b)]);
            assert_eq!(ys, vec![l.rdiv(b, a)]);
        }
    }
    assert!(!l.is_associative());
    assert!(!l.is_commutative());
    assert_eq!(center(&l), BTreeSet::from([0, 4]));
}

#[test]
fn validation_reports_failures() {
    let bad = [vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 0]];
    let err = CayleyLoop::from_fn(3, |i, j| bad[i][j]).unwrap_err();
    assert!(err.to_string().contains("repeats"));
    let no_id: Vec<Vec<usize>> = (0..3).map(|i| (0..3).map(|j| (6 - i - j) % 3).collect()).collect();
    let err = CayleyLoop::from_fn(3, |i, j| no_id[i][j]).unwrap_err();
    assert!(err.to_string().contains("identity"));
    assert!(CayleyLoop::from_fn(4, |i, j| (i + j) % 4).is_ok());
}

#[test]
fn trivial_loop_has_zero_augmentation_ideal() {
    let l = CayleyLoop::cyclic(1);
    let la = LoopAlgebra::new(&l, Field::Rational);
    let chain = augmentation_powers(&la, 4);
    assert_eq!(chain.dims(), vec![0]);
    let d = dimension_subloops(&l, Field::Rational);
    assert!(d.terms.iter().all(|t| t.len() == 1));
}

#[test]
fn cyclic_two_over_rationals() {
    let la = LoopAlgebra::new(&CayleyLoop::cyclic(2), Field::Rational);
    let chain = augmentation_powers(&la, 5);
    // (g−1)² = 2 − 2g spans the same line as g − 1
    let sq = la.algebra().mul(&la.minus_one(1), &la.minus_one(1));
    assert_eq!(sq, vec![Field::Rational.int(2), Field::Rational.int(-2)]);
    assert!(chain.contains(2, &sq, Field::Rational));
    assert!(!chain.reaches_zero);
    assert!(chain.dims().iter().all(|&d| d == 1));
}

#[test]
fn central_extension_chain_over_f2() {
    let l = central_extension_loop();
    let la = LoopAlgebra::new(&l, f2());
    let chain = augmentation_powers(&la, 20);
    let dims = chain.dims();
    assert!(chain.reaches_zero, "{dims:?}");
    assert!(dims.windows(2).all(|w| w[1] < w[0]), "{dims:?}");
    let d = dimension_subloops(&l, f2());
    assert!(d.verified());
    assert!(d.strictly_descending_to_trivial(), "{:?}", d.terms);
    assert_eq!(d.terms[0].len(), 8);
    assert!(d.terms[1].len() > 1 && d.terms[1].len() < 8);
    let assoc: BTreeSet<usize> =
        (0..8).flat_map(|x| (0..8).flat_map(move |y| (0..8).map(move |z| (x, y, z)))).map(|(x, y, z)| l.associator(x, y, z)).collect();
    assert!(assoc.is_subset(&d.terms[1]));
}

#[test]
fn klein_four_dimension_subloops_over_f2() {
    let v = CayleyLoop::cyclic(2).product(&CayleyLoop::cyclic(2));
    let d = dimension_subloops(&v, f2());
    assert!(d.verified());
    // squares are trivial and the group is abelian, so D₂ is computed as 1
    assert_eq!(d.terms[1].len(), 1);
}

#[test]
fn filtration_matches_lower_central_series_on_groups() {
    let groups = [
        ("Z4", CayleyLoop::cyclic(4)),
        ("D4", dihedral(4)),
        ("Q8", quaternion()),
        ("D8", dihedral(8)),
        ("S3", dihedral(3)),
    ];
    for (name, g) in groups {
        assert!(g.is_associative(), "{name}");
        let lcs = lower_central_series(&g);
        let f = comm_assoc_filtration(&g, 12);
        let nilpotent = lcs.last().unwrap().len() == 1;
        assert_eq!(f.class.is_some(), nilpotent, "{name}");
        for (k, term) in lcs.iter().enumerate() {
            assert_eq!(&f.terms[k], term, "{name} term {}", k + 1);
        }
        if nilpotent {
            assert_eq!(f.class, Some(lcs.len() - 1), "{name}");
        }
    }
}

#[test]
fn abelian_group_has_class_one() {
    let v = CayleyLoop::cyclic(3).product(&CayleyLoop::cyclic(2));
    assert_eq!(comm_assoc_filtration(&v, 6).class, Some(1));
}

#[test]
fn central_extension_is_centrally_class_two() {
    let l = central_extension_loop();
    let z = center(&l);
    let (series, class) = sabinin_core::loops::lower_central_series(&l);
    assert_eq!(class, Some(2));
    assert_eq!(series[1], z);
    // associators carry weight three, so the center repeats once
    let f = comm_assoc_filtration(&l, 8);
    assert_eq!(f.class, Some(3));
    let all: BTreeSet<usize> = (0..8).collect();
    let one = BTreeSet::from([l.identity()]);
    assert_eq!(f.distinct_terms(), vec![&all, &z, &one]);
    assert!(f.terms.iter().all(|t| l.is_normal(t)));
}

#[test]
fn filtration_sits_inside_dimension_subloops() {
    let fixtures = [central_extension_loop(), dihedral(4), quaternion(), CayleyLoop::cyclic(4)];
    for l in &fixtures {
        let f = comm_assoc_filtration(l, 10);
        for field in [Field::Rational, f2()] {
            let d = dimension_subloops(l, field);
            for (k, g) in f.terms.iter().enumerate() {
                let dk = d.terms.get(k).or(d.terms.last()).unwrap();
                assert!(g.is_subset(dk), "term {} over {field}", k + 1);
            }
        }
    }
}

#[test]
fn lattice_images_of_class_two_loop_are_distinct() {
    let t = free_nilpotent(Field::Rational, 2, 2).unwrap().table;
    let r = loop_ado_check(&t, &lattice_points(Field::Rational, 3, 2), 6).unwrap();
    assert_eq!(r.sample, 125);
    assert_eq!(r.distinct_images, 125);
    assert!(r.identity_to_one);
    assert!(r.injective(), "{:?}", r.division_failures);
    assert!(r.product_mismatches.is_empty(), "{:?}", r.product_mismatches);
    assert!(r.warnings.is_empty());
}

#[test]
fn third_coordinate_shows_in_weight_two() {
    let q = Field::Rational;
    let t = free_nilpotent(q, 2, 2).unwrap().table;
    let emb = LatticeEmbedding::new(&t).unwrap();
    let a = emb.image(&[q.int(1), q.int(-1), q.int(0)]).unwrap();
    let b = emb.image(&[q.int(1), q.int(-1), q.int(2)]).unwrap();
    assert_eq!(emb.weight_component(&a, 1), emb.weight_component(&b, 1));
    assert_ne!(emb.weight_component(&a, 2), emb.weight_component(&b, 2));
}

#[test]
fn class_three_lattice_sample() {
    use rand::{Rng, SeedableRng};
    let q = Field::Rational;
    let t = free_nilpotent(q, 2, 3).unwrap().table;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut points: Vec<Vec<_>> = (0..60).map(|_| (0..t.dim()).map(|_| q.int(rng.gen_range(-1..=1))).collect()).collect();
    points.push(vec![q.zero(); t.dim()]);
    points.sort();
    points.dedup();
    let r = loop_ado_check(&t, &points, 3).unwrap();
    assert_eq!(r.sample, points.len());
    assert_eq!(r.distinct_images, r.sample);
    assert!(r.injective());
    // exponential coordinates need not be multiplicative beyond class two
    assert!(r.pairs_checked > 0);
}
