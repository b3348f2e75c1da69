//! Loops of power series: the composition loop of series `x + a₁x² + …`
//! over an associative algebra, and the multiplicative loop of series in
//! one non-associative variable.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::formal_loop::PolyLoop;
use crate::poly::{Poly, PolyVec};
use crate::scalar::Scalar;
use crate::structure::{add_vec, is_zero_vec, sub_vec, StructureConstants, Vector};
use crate::table::Coefficient;
use crate::word::Word;

/// Product in `A` of coefficient vectors over any coefficient ring.
pub fn alg_mul<C: Coefficient>(alg: &StructureConstants, a: &[C], b: &[C]) -> Vec<C> {
    let mut out: Vec<C> = alloc::vec![C::zero_from(alg.field()); alg.dim()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let xy = x.mul(y);
            for (m, c) in alg.table()[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[m].add_assign(&xy.scale(c));
                }
            }
        }
    }
    out
}

fn unit_of(alg: &StructureConstants) -> Result<Vector> {
    alg.unit().cloned().ok_or_else(|| Error::InvalidInput("coefficient algebra has no unit".to_string()))
}

/// `x + a₁x² + … + a_d x^{d+1}` with coefficients in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSeries {
    pub coeffs: Vec<Vector>,
}

impl BSeries {
    pub fn identity(alg: &StructureConstants, depth: usize) -> Self {
        BSeries { coeffs: alloc::vec![alg.zero(); depth] }
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// `x + c·x^{i+1}`.
    pub fn monomial(alg: &StructureConstants, depth: usize, i: usize, c: Vector) -> Self {
        let mut s = Self::identity(alg, depth);
        s.coeffs[i - 1] = c;
        s
    }
}

/// Coefficients of `b^{m+1}` by exponent `1..=d+1` (index 0 is `x¹`), over
/// a generic coefficient ring.
fn series_powers<C: Coefficient>(alg: &StructureConstants, full: &[Vec<C>], d: usize) -> Vec<Vec<Vec<C>>> {
    let mut powers = alloc::vec![full.to_vec()];
    for _ in 1..=d {
        let prev = powers.last().unwrap();
        let mut next: Vec<Vec<C>> = alloc::vec![alloc::vec![C::zero_from(alg.field()); alg.dim()]; d + 1];
        for (e1, u) in prev.iter().enumerate() {
            for (e2, v) in full.iter().enumerate() {
                // exponents e1+1 and e2+1 give e1+e2+2, index e1+e2+1
                let idx = e1 + e2 + 1;
                if idx > d {
                    break;
                }
                let p = alg_mul(alg, u, v);
                for (o, c) in next[idx].iter_mut().zip(&p) {
                    o.add_assign(c);
                }
            }
        }
        powers.push(next);
    }
    powers
}

/// `a(b(x))` with coefficients of `a` on the left, over a generic ring.
/// `a[m]`/`b[m]` hold the coefficient of `x^{m+1}` for `m = 0..=d`.
fn compose_generic<C: Coefficient>(alg: &StructureConstants, a: &[Vec<C>], b: &[Vec<C>], d: usize) -> Vec<Vec<C>> {
    let powers = series_powers(alg, b, d);
    let mut out: Vec<Vec<C>> = alloc::vec![alloc::vec![C::zero_from(alg.field()); alg.dim()]; d + 1];
    for m in 0..=d {
        for (e, coef) in powers[m].iter().enumerate() {
            let p = alg_mul(alg, &a[m], coef);
            for (o, c) in out[e].iter_mut().zip(&p) {
                o.add_assign(c);
            }
        }
    }
    out
}

fn check_depth(a: &BSeries, b: &BSeries) -> Result<()> {
    if a.depth() != b.depth() {
        return Err(Error::TruncationMismatch(a.depth(), b.depth()));
    }
    Ok(())
}

fn full_scalar(alg: &StructureConstants, s: &BSeries) -> Result<Vec<Vector>> {
    let mut full = alloc::vec![unit_of(alg)?];
    full.extend(s.coeffs.iter().cloned());
    Ok(full)
}

/// Composition `a ∘ b` (substitute `b` for `x` in `a`).
pub fn b_compose(alg: &StructureConstants, a: &BSeries, b: &BSeries) -> Result<BSeries> {
    check_depth(a, b)?;
    if !alg.is_associative() {
        return Err(Error::InvalidInput("composition needs an associative coefficient algebra".to_string()));
    }
    for v in a.coeffs.iter().chain(&b.coeffs) {
        if v.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: v.len() });
        }
    }
    let d = a.depth();
    let out = compose_generic(alg, &full_scalar(alg, a)?, &full_scalar(alg, b)?, d);
    Ok(BSeries { coeffs: out[1..].to_vec() })
}

/// The displayed coefficient sum `Σ a_m b_{i₁}…b_{i_k}` over
/// `m + Σi = n`, `k ≤ m+1`, positive `i`, each term weighted by the
/// number `C(m+1, k)` of ways to place the factors `b₀ = 1`.
pub fn b_compose_by_formula(alg: &StructureConstants, a: &BSeries, b: &BSeries) -> Result<BSeries> {
    check_depth(a, b)?;
    let d = a.depth();
    let unit = unit_of(alg)?;
    let coef = |s: &BSeries, m: usize| -> Vector { if m == 0 { unit.clone() } else { s.coeffs[m - 1].clone() } };
    let mut out = Vec::new();
    for n in 1..=d {
        let mut total = alg.zero();
        for m in 0..=n {
            let rest = n - m;
            // ordered positive compositions of `rest`
            let comps: Vec<Vec<usize>> = if rest == 0 {
                alloc::vec![Vec::new()]
            } else {
                (1..=rest).flat_map(|k| crate::combinat::compositions(rest, k)).collect()
            };
            for comp in comps {
                let k = comp.len();
                if k > m + 1 {
                    continue;
                }
                let mult = binomial((m + 1) as u64, k as u64);
                let mut p = coef(a, m);
                for &i in &comp {
                    p = alg.mul(&p, &coef(b, i));
                }
                let mult = alg.field().int(mult as i64);
                total = add_vec(&total, &p.iter().map(|c| c * &mult).collect::<Vec<_>>());
            }
        }
        out.push(total);
    }
    Ok(BSeries { coeffs: out })
}

/// Coordinates of the composition loop: copy `e` of `A` (coefficient of
/// `x^{e+1}`) occupies indices `(e-1)·k .. e·k` and has weight `e`.
pub fn b_weights(alg: &StructureConstants, depth: usize) -> Vec<u32> {
    (1..=depth).flat_map(|e| core::iter::repeat_n(e as u32, alg.dim())).collect()
}

/// The composition loop as a polynomial loop.
pub fn b_loop(alg: &StructureConstants, depth: usize) -> Result<PolyLoop> {
    if !alg.is_associative() {
        return Err(Error::InvalidInput("composition needs an associative coefficient algebra".to_string()));
    }
    let field = alg.field();
    let k = alg.dim();
    let unit = unit_of(alg)?;
    let full = |slot: u8| -> Vec<PolyVec> {
        let mut v: Vec<PolyVec> = alloc::vec![unit.iter().map(|c| Poly::constant(field, c.clone())).collect()];
        for e in 0..depth {
            v.push((0..k).map(|c| Poly::var(field, slot, (e * k + c) as u16)).collect());
        }
        v
    };
    let out = compose_generic(alg, &full(0), &full(1), depth);
    let f: PolyVec = out[1..].iter().flatten().cloned().collect();
    PolyLoop::from_product(field, depth as u32, b_weights(alg, depth), f)
}

pub fn flatten(s: &BSeries) -> Vector {
    s.coeffs.iter().flatten().cloned().collect()
}

pub fn unflatten(alg: &StructureConstants, v: &[Scalar]) -> BSeries {
    BSeries { coeffs: v.chunks(alg.dim()).map(|c| c.to_vec()).collect() }
}

/// Leading graded component of a loop operation against its predicted value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCheck {
    pub degree: usize,
    /// Components below `degree` vanish.
    pub lower_vanish: bool,
    pub leading: Vector,
    pub predicted: Vector,
}

impl GradedCheck {
    pub fn holds(&self) -> bool {
        self.lower_vanish && self.leading == self.predicted
    }

    pub fn difference(&self) -> Vector {
        sub_vec(&self.leading, &self.predicted)
    }
}

fn graded(alg: &StructureConstants, value: &[Scalar], degree: usize, predicted: Vector) -> GradedCheck {
    let s = unflatten(alg, value);
    let lower_vanish = s.coeffs[..degree - 1].iter().all(|c| is_zero_vec(c));
    GradedCheck { degree, lower_vanish, leading: s.coeffs[degree - 1].clone(), predicted }
}

/// Loop commutator of `x + a x^{i+1}` and `x + b x^{j+1}` against
/// `i·ab − j·ba`.
pub fn b_graded_commutator(alg: &StructureConstants, i: usize, j: usize, a: &Vector, b: &Vector) -> Result<GradedCheck> {
    let depth = i + j;
    let l = b_loop(alg, depth)?;
    let x = flatten(&BSeries::monomial(alg, depth, i, a.clone()));
    let y = flatten(&BSeries::monomial(alg, depth, j, b.clone()));
    let v = l.eval(&l.commutator(), &[&x, &y]);
    let f = alg.field();
    let predicted = sub_vec(
        &alg.mul(a, b).iter().map(|c| c * &f.int(i as i64)).collect::<Vec<_>>(),
        &alg.mul(b, a).iter().map(|c| c * &f.int(j as i64)).collect::<Vec<_>>(),
    );
    Ok(graded(alg, &v, depth, predicted))
}

/// Loop associator of `x + a x^{i+1}`, `x + b x^{j+1}`, `x + c x^{k+1}`
/// against `(i(i+1)/2)·a(bc − cb)`.
pub fn b_graded_associator(
    alg: &StructureConstants,
    (i, j, k): (usize, usize, usize),
    a: &Vector,
    b: &Vector,
    c: &Vector,
) -> Result<GradedCheck> {
    let depth = i + j + k;
    let l = b_loop(alg, depth)?;
    let x = flatten(&BSeries::monomial(alg, depth, i, a.clone()));
    let y = flatten(&BSeries::monomial(alg, depth, j, b.clone()));
    let z = flatten(&BSeries::monomial(alg, depth, k, c.clone()));
    let v = l.eval(&l.associator(), &[&x, &y, &z]);
    let f = alg.field();
    let bc = sub_vec(&alg.mul(b, c), &alg.mul(c, b));
    let coef = f.int((i * (i + 1) / 2) as i64);
    let predicted = alg.mul(a, &bc).iter().map(|x| x * &coef).collect();
    Ok(graded(alg, &v, depth, predicted))
}

/// `1 + Σ a_τ τ` over non-associative monomials `τ` in one variable of
/// degree `≤ depth`; the constant term is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSeries {
    pub depth: u32,
    pub coeffs: BTreeMap<Word, Vector>,
}

impl CSeries {
    pub fn one(depth: u32) -> Self {
        CSeries { depth, coeffs: BTreeMap::new() }
    }

    pub fn with_term(mut self, w: Word, c: Vector) -> Self {
        if !is_zero_vec(&c) {
            self.coeffs.insert(w, c);
        }
        self
    }
}

/// Product of non-associative series with `x` central over `A`.
pub fn c_mul(alg: &StructureConstants, a: &CSeries, b: &CSeries) -> Result<CSeries> {
    if a.depth != b.depth {
        return Err(Error::TruncationMismatch(a.depth as usize, b.depth as usize));
    }
    let unit = unit_of(alg)?;
    let with_unit = |s: &CSeries| -> Vec<(Word, Vector)> {
        let mut v = alloc::vec![(Word::Unit, unit.clone())];
        v.extend(s.coeffs.iter().map(|(w, c)| (w.clone(), c.clone())));
        v
    };
    let mut out: BTreeMap<Word, Vector> = BTreeMap::new();
    for (u, x) in with_unit(a) {
        for (v, y) in with_unit(b) {
            if u.degree() + v.degree() > a.depth {
                continue;
            }
            let w = Word::mul(&u, &v);
            if w.is_unit() {
                continue;
            }
            let p = alg.mul(&x, &y);
            let e = out.entry(w).or_insert_with(|| alg.zero());
            *e = add_vec(e, &p);
        }
    }
    out.retain(|_, c| !is_zero_vec(c));
    Ok(CSeries { depth: a.depth, coeffs: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn compose_low_degree() {
        let q = Field::Rational;
        let alg = StructureConstants::matrices(q, 2);
        let a1 = alg.basis(1);
        let b1 = alg.basis(2);
        let a = BSeries::monomial(&alg, 3, 1, a1.clone());
        let b = BSeries::monomial(&alg, 3, 1, b1.clone());
        let c = b_compose(&alg, &a, &b).unwrap();
        assert_eq!(c.coeffs[0], add_vec(&a1, &b1));
        assert_eq!(c.coeffs[1], alg.mul(&a1, &b1).iter().map(|x| x * &q.int(2)).collect::<Vec<_>>());
        assert_eq!(c.coeffs[2], alg.mul(&a1, &alg.mul(&b1, &b1)));
        assert_eq!(b_compose_by_formula(&alg, &a, &b).unwrap(), c);
    }

    #[test]
    fn c_product() {
        let q = Field::Rational;
        let alg = StructureConstants::scalars(q);
        let x = Word::gen(0);
        let one_plus_x = CSeries::one(2).with_term(x.clone(), alloc::vec![q.one()]);
        let sq = c_mul(&alg, &one_plus_x, &one_plus_x).unwrap();
        assert_eq!(sq.coeffs.len(), 2);
        assert_eq!(sq.coeffs[&x], alloc::vec![q.int(2)]);
        assert_eq!(sq.coeffs[&Word::mul(&x, &x)], alloc::vec![q.one()]);
    }
}
