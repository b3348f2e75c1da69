//! Built-in example structures.

use alloc::vec::Vec;

use crate::combinat::{compositions, multisets, tuples};
use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::lie::{free_nilpotent_lie, lie_from_matrices, SplitLie};
use crate::linalg::{relations, Echelon, SparseVec};
use crate::sabinin::{ms_bracket, multioperator, BracketExpr};
use crate::scalar::{Field, Scalar};
use crate::structure::StructureConstants;
use crate::table::SabininTable;
use crate::word::Word;

/// Every composition of brackets and multioperators of the given weight
/// over arguments `0..nargs`, skipping forms that vanish by symmetry.
pub fn bracket_compositions(nargs: usize, weight: usize) -> Vec<BracketExpr> {
    let mut by_weight: Vec<Vec<BracketExpr>> = alloc::vec![Vec::new()];
    for w in 1..=weight {
        let mut level = Vec::new();
        if w == 1 {
            level.extend((0..nargs).map(BracketExpr::Arg));
        }
        for arity in 2..=w {
            for comp in compositions(w, arity) {
                let sizes: Vec<usize> = comp.iter().map(|&c| by_weight[c].len()).collect();
                for pick in tuples_of(&sizes) {
                    let e: Vec<&BracketExpr> = pick.iter().zip(&comp).map(|(&i, &c)| &by_weight[c][i]).collect();
                    if e[arity - 2] < e[arity - 1] {
                        level.push(BracketExpr::ms(
                            e[..arity - 2].iter().map(|x| (*x).clone()).collect(),
                            e[arity - 2].clone(),
                            e[arity - 1].clone(),
                        ));
                    }
                    for m in 1..=arity - 2 {
                        let (xs, ys) = e.split_at(m);
                        if xs.windows(2).all(|p| p[0] <= p[1]) && ys.windows(2).all(|p| p[0] <= p[1]) {
                            level.push(BracketExpr::Phi {
                                xs: xs.iter().map(|x| (*x).clone()).collect(),
                                ys: ys.iter().map(|x| (*x).clone()).collect(),
                            });
                        }
                    }
                }
            }
        }
        level.sort();
        level.dedup();
        by_weight.push(level);
    }
    by_weight.swap_remove(weight)
}

fn tuples_of(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::new();
        for t in &out {
            for i in 0..s {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Dimension of the primitive elements of degree `w` in `gens` generators.
pub fn primitive_dimension(field: Field, gens: u32, w: u32) -> usize {
    let words = Word::all_of_degree(gens, w);
    let images: Vec<SparseVec<(Word, Word)>> = words
        .iter()
        .map(|u| FreeElement::word(field, w, u.clone()).reduced_coproduct().terms().clone())
        .collect();
    relations(field, &images).len()
}

/// A free nilpotent Sabinin algebra with its basis of primitive elements.
#[derive(Clone, Debug)]
pub struct FreeNilpotent {
    pub table: SabininTable,
    /// Basis elements in the free algebra, ordered by degree.
    pub basis: Vec<FreeElement>,
    pub degrees: Vec<u32>,
}

/// The free nilpotent Sabinin algebra of class `class` on `gens`
/// generators: primitives of degree `≤ class`, with a basis of bracket
/// compositions chosen greedily in canonical order.
pub fn free_nilpotent(field: Field, gens: u32, class: u32) -> Result<FreeNilpotent> {
    if class < 2 {
        return Err(Error::InvalidInput("class must be at least 2".into()));
    }
    field.require_divisible_up_to(class as u64)?;
    let g: Vec<FreeElement> = (0..gens).map(|i| FreeElement::gen(field, class, i)).collect();
    let mut basis = Vec::new();
    let mut degrees = Vec::new();
    let mut per_degree: Vec<Echelon<Word>> = Vec::new();
    for w in 1..=class {
        let mut ech = Echelon::new(field);
        let mut chosen = Vec::new();
        for e in bracket_compositions(gens as usize, w as usize) {
            let v = e.to_free(&g)?;
            if ech.push(&v.as_sparse()) {
                chosen.push(v);
            }
        }
        let dim = primitive_dimension(field, gens, w);
        if chosen.len() != dim {
            return Err(Error::Inconsistent(alloc::format!(
                "brackets span {} of {dim} primitive dimensions in degree {w}",
                chosen.len()
            )));
        }
        // re-insert in order so solve() indices refer to the chosen elements
        let mut ordered = Echelon::new(field);
        for v in &chosen {
            ordered.push(&v.as_sparse());
            degrees.push(w);
        }
        basis.extend(chosen);
        per_degree.push(ordered);
    }
    let k = basis.len();
    let offset: Vec<usize> = (1..=class).map(|w| degrees.iter().filter(|&&d| d < w).count()).collect();
    let coords = |e: &FreeElement| -> Result<Vec<Scalar>> {
        let mut v = alloc::vec![field.zero(); k];
        for w in 1..=class {
            let part = e.homogeneous(w);
            if part.is_zero() {
                continue;
            }
            let sol = per_degree[w as usize - 1]
                .solve(&part.as_sparse())
                .ok_or_else(|| Error::Inconsistent("value outside the primitive span".into()))?;
            for (i, c) in sol {
                v[offset[w as usize - 1] + i] = c;
            }
        }
        Ok(v)
    };
    let cw = class as usize;
    let mut table = SabininTable::new(field, k, cw)?;
    for n in 0..=cw - 2 {
        for prefix in tuples(k, n) {
            let pd: u32 = prefix.iter().map(|&i| degrees[i]).sum();
            for y in 0..k {
                for z in y + 1..k {
                    if pd + degrees[y] + degrees[z] > class {
                        continue;
                    }
                    let xs: Vec<FreeElement> = prefix.iter().map(|&i| basis[i].clone()).collect();
                    let v = ms_bracket(&xs, &basis[y], &basis[z])?;
                    table.set_ms(&prefix, y, z, coords(&v)?)?;
                }
            }
        }
    }
    for m in 1..cw {
        for n in 2..=cw - m {
            for xs in multisets(k, m) {
                let xd: u32 = xs.iter().map(|&i| degrees[i]).sum();
                for ys in multisets(k, n) {
                    if xd + ys.iter().map(|&i| degrees[i]).sum::<u32>() > class {
                        continue;
                    }
                    let a: Vec<FreeElement> = xs.iter().map(|&i| basis[i].clone()).collect();
                    let b: Vec<FreeElement> = ys.iter().map(|&i| basis[i].clone()).collect();
                    table.set_phi(&xs, &ys, coords(&multioperator(&a, &b)?)?)?;
                }
            }
        }
    }
    table.set_claimed_class(Some(cw));
    Ok(FreeNilpotent { table, basis, degrees })
}

/// Traceless 2×2 matrices with basis `E₁₂, E₂₁, diag(1,−1)`.
pub fn sl2(field: Field) -> StructureConstants {
    let (o, z) = (field.one(), field.zero());
    let e = alloc::vec![z.clone(), o.clone(), z.clone(), z.clone()];
    let f = alloc::vec![z.clone(), z.clone(), o.clone(), z.clone()];
    let h = alloc::vec![o, z.clone(), z, field.int(-1)];
    lie_from_matrices(field, 2, &[e, f, h]).expect("sl2 is a Lie algebra")
}

/// Splittings of Lie algebras used as envelope fixtures, by name.
pub fn lie_splittings(field: Field) -> Vec<(&'static str, SplitLie)> {
    let l = sl2(field);
    let b = |l: &StructureConstants, idx: &[usize]| idx.iter().map(|&i| l.basis(i)).collect::<Vec<_>>();
    let upper = SplitLie::new(l.clone(), b(&l, &[0]), b(&l, &[1, 2])).expect("valid split");
    let torus = SplitLie::new(l.clone(), b(&l, &[2]), b(&l, &[0, 1])).expect("valid split");
    let (free3, _) = free_nilpotent_lie(field, 2, 3).expect("free nilpotent Lie algebra");
    let nil = SplitLie::new(free3.clone(), b(&free3, &[0]), b(&free3, &[1, 2, 3, 4])).expect("valid split");
    let trivial = SplitLie::new(free3.clone(), Vec::new(), b(&free3, &[0, 1, 2, 3, 4])).expect("valid split");
    alloc::vec![("sl2-upper", upper), ("sl2-torus", torus), ("free-lie-2-3", nil), ("free-lie-2-3-flat", trivial)]
}

/// The two-dimensional algebra `aa = 0, ab = b, ba = 0, bb = b` (basis `a, b`).
pub fn remark_structure(field: Field) -> StructureConstants {
    let (o, z) = (field.one(), field.zero());
    let b = alloc::vec![z.clone(), o];
    let zero = alloc::vec![z.clone(), z];
    StructureConstants::new(field, alloc::vec![alloc::vec![zero.clone(), b.clone()], alloc::vec![zero, b]], None)
        .expect("valid table")
}

/// Its Sabinin algebra, operations up to weight 4.
pub fn remark_algebra(field: Field) -> SabininTable {
    crate::table::ux_table(&remark_structure(field), 4).expect("small weights are defined")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_two_on_two_generators() {
        let f = free_nilpotent(Field::Rational, 2, 2).unwrap();
        assert_eq!(f.degrees, alloc::vec![1, 1, 2]);
        let q = Field::Rational;
        assert_eq!(f.table.ms(&[], 0, 1).unwrap(), alloc::vec![q.zero(), q.zero(), q.one()]);
    }
}
