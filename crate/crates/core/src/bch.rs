//! Geodesic exponential and logarithm in the free algebra, the right
//! alternative product and its BCH series, and integration of nilpotent
//! Sabinin tables to polynomial loops.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::formal_loop::PolyLoop;
use crate::free::FreeElement;
use crate::linalg::{dense_to_sparse, Echelon, SparseVec};
use crate::poly::{arg_vec, vec_add, vec_sub, Monomial, Poly, PolyVec};
use crate::sabinin::BracketExpr;
use crate::scalar::{Field, Scalar};
use crate::table::{lower_filtration, FiltrationOutcome, SabininTable};

/// `Σ_{n≤d} xⁿ/n!` with left-normed powers.
pub fn exp_series(x: &FreeElement, d: u32) -> Result<FreeElement> {
    let field = x.field();
    field.require_divisible_up_to(d as u64)?;
    if !x.counit().is_zero() {
        return Err(Error::InvalidInput("exponential of an element with nonzero constant term".to_string()));
    }
    let x = x.with_trunc(d);
    let mut out = FreeElement::zero(field, d);
    let mut pw = FreeElement::one(field, d);
    for n in 0..=d {
        if n > 0 {
            pw = &pw * &x;
        }
        if pw.is_zero() {
            break;
        }
        out.axpy(&field.inv_factorial(n as u64)?, &pw);
    }
    Ok(out)
}

/// The primitive `z` with `exp_series(z) = g`, found degree by degree.
pub fn log_series(g: &FreeElement, d: u32) -> Result<FreeElement> {
    let field = g.field();
    field.require_divisible_up_to(d as u64)?;
    let g = g.with_trunc(d);
    if !g.is_grouplike() {
        return Err(Error::NotGrouplike(g.to_string()));
    }
    let mut z = FreeElement::zero(field, d);
    for k in 1..=d {
        let r = &g - &exp_series(&z, d)?;
        z = &z + &r.homogeneous(k);
    }
    Ok(z)
}

/// `a \ x` in the loop `1 + augmentation`: the solution `w` of `a·w = x`.
pub fn left_divide(a: &FreeElement, x: &FreeElement) -> Result<FreeElement> {
    if !a.counit().is_one() {
        return Err(Error::InvalidInput("left division by an element with constant term other than 1".to_string()));
    }
    let trunc = x.trunc();
    let rest = &a.with_trunc(trunc) - &FreeElement::one(a.field(), trunc);
    let mut w = x.clone();
    for _ in 0..trunc {
        w = x - &(&rest * &w);
    }
    Ok(w)
}

/// `exp_a x = a + x + x(a\x)/2! + (x(a\x))(a\x)/3! + …`.
pub fn exp_at(a: &FreeElement, x: &FreeElement, d: u32) -> Result<FreeElement> {
    let field = a.field();
    field.require_divisible_up_to(d as u64)?;
    let (a, x) = (a.with_trunc(d), x.with_trunc(d));
    let u = left_divide(&a, &x)?;
    let mut out = a.clone();
    let mut term = x.clone();
    for n in 1..=d {
        if term.is_zero() {
            break;
        }
        out.axpy(&field.inv_factorial(n as u64)?, &term);
        term = &term * &u;
    }
    Ok(out)
}

/// `a × b = exp_a(a · log b)` on group-like elements.
pub fn right_alt_product(a: &FreeElement, b: &FreeElement, d: u32) -> Result<FreeElement> {
    let a = a.with_trunc(d);
    if !a.is_grouplike() {
        return Err(Error::NotGrouplike(a.to_string()));
    }
    let lb = log_series(b, d)?;
    exp_at(&a, &(&a * &lb), d)
}

/// A bracket-term combination `Σ c·e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketCombination(pub Vec<(BracketExpr, Scalar)>);

impl fmt::Display for BracketCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        crate::scalar::write_signed_terms(f, self.0.iter().map(|(e, c)| (c.clone(), e)))
    }
}

/// Writes `target` as a combination of `exprs` evaluated in the free
/// algebra; earlier expressions are preferred when they are dependent.
pub fn express_in_brackets(
    exprs: &[BracketExpr],
    args: &[FreeElement],
    target: &FreeElement,
) -> Result<Option<BracketCombination>> {
    let mut ech: Echelon<crate::word::Word> = Echelon::new(target.field());
    for e in exprs {
        ech.insert(&e.to_free(args)?.as_sparse());
    }
    Ok(ech.solve(&target.as_sparse()).map(|combo| {
        BracketCombination(combo.into_iter().map(|(i, c)| (exprs[i].clone(), c)).collect())
    }))
}

/// The right alternative BCH series `log(exp x × exp y)` up to degree
/// `d`, by homogeneous components, each also as a bracket combination.
#[derive(Clone, Debug)]
pub struct RbchSeries {
    field: Field,
    trunc: u32,
    components: Vec<FreeElement>,
    brackets: Vec<BracketCombination>,
}

impl RbchSeries {
    pub fn new(field: Field, d: u32) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput("degree must be at least 1".to_string()));
        }
        let x = FreeElement::gen(field, d, 0);
        let y = FreeElement::gen(field, d, 1);
        let prod = right_alt_product(&exp_series(&x, d)?, &exp_series(&y, d)?, d)?;
        let total = log_series(&prod, d)?;
        let mut components = Vec::new();
        let mut brackets = Vec::new();
        for w in 1..=d {
            let comp = total.homogeneous(w);
            let combo = if w == 1 {
                BracketCombination(alloc::vec![(BracketExpr::Arg(0), field.one()), (BracketExpr::Arg(1), field.one())])
            } else {
                let args = [FreeElement::gen(field, w, 0), FreeElement::gen(field, w, 1)];
                let exprs = BracketExpr::ms_compositions(2, w as usize);
                express_in_brackets(&exprs, &args, &comp.with_trunc(w))?.ok_or_else(|| {
                    Error::Inconsistent(alloc::format!("weight {w} component is not a combination of brackets"))
                })?
            };
            components.push(comp);
            brackets.push(combo);
        }
        Ok(RbchSeries { field, trunc: d, components, brackets })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Homogeneous component of weight `w` (1-based).
    pub fn component(&self, w: u32) -> &FreeElement {
        &self.components[w as usize - 1]
    }

    pub fn brackets(&self, w: u32) -> &BracketCombination {
        &self.brackets[w as usize - 1]
    }

    pub fn total(&self) -> FreeElement {
        let mut out = FreeElement::zero(self.field, self.trunc);
        for c in &self.components {
            out = &out + &c.with_trunc(self.trunc);
        }
        out
    }
}

/// `Φ̂(x,y) = y + Σ_{m≥1, n≥2, m+n≤d} Φ(x,…,x; y,…,y)` through the table.
pub fn phi_hat(t: &SabininTable, d: usize) -> Result<PolyVec> {
    let field = t.field();
    let k = t.dim();
    let x = arg_vec(field, k, 0);
    let y = arg_vec(field, k, 1);
    let mut out = y.clone();
    let top = d.min(t.weight_bound());
    for m in 1..top {
        for n in 2..=top - m {
            let xs: Vec<&[Poly]> = (0..m).map(|_| x.as_slice()).collect();
            let ys: Vec<&[Poly]> = (0..n).map(|_| y.as_slice()).collect();
            let v = t.phi_eval(&xs, &ys)?;
            out = vec_add(&out, &v);
        }
    }
    Ok(out)
}

/// Coordinate weights of a table basis; fails unless every filtration
/// step is spanned by the basis vectors of at least that weight.
pub fn adapted_weights(t: &SabininTable) -> Result<(usize, Vec<u32>)> {
    let filt = lower_filtration(t);
    let class = match filt.outcome {
        FiltrationOutcome::Nilpotent { class } => class,
        FiltrationOutcome::NotNilpotent { from, dim } => return Err(Error::NotNilpotent(alloc::format!("filtration stabilizes at dimension {dim} from step {from}"))),
        FiltrationOutcome::Inconclusive { levels } => return Err(Error::NotNilpotent(alloc::format!("no decision after {levels} steps"))),
    };
    let k = t.dim();
    let field = t.field();
    let mut weights = alloc::vec![0u32; k];
    for (n, level) in filt.levels.iter().enumerate() {
        let span = crate::linalg::span(field, level.iter().map(|v| dense_to_sparse(v)));
        for (i, w) in weights.iter_mut().enumerate() {
            let mut e = SparseVec::new();
            e.insert(i, field.one());
            if span.contains(&e) {
                *w = n as u32 + 1;
            }
        }
    }
    for (n, level) in filt.levels.iter().enumerate() {
        let count = weights.iter().filter(|&&w| w as usize > n).count();
        if count != level.len() {
            return Err(Error::InvalidInput(alloc::format!(
                "basis is not adapted to the lower filtration at step {}",
                n + 1
            )));
        }
    }
    Ok((class.max(1), weights))
}

/// Integrates a nilpotent table: `F(x,y) = C(x, Φ̂(x,y))` with the BCH
/// series specialized through the table.
pub fn integrate(t: &SabininTable) -> Result<PolyLoop> {
    let (class, weights) = adapted_weights(t)?;
    integrate_with(t, &RbchSeries::new(t.field(), class as u32)?, class, weights)
}

/// [`integrate`] with a precomputed series of degree at least the class.
pub fn integrate_with(t: &SabininTable, series: &RbchSeries, class: usize, weights: Vec<u32>) -> Result<PolyLoop> {
    let field = t.field();
    field.require_divisible_up_to(class as u64)?;
    if (series.trunc() as usize) < class {
        return Err(Error::TruncationTooSmall { needed: class, have: series.trunc() as usize });
    }
    let k = t.dim();
    let x = arg_vec(field, k, 0);
    let args = [x.clone(), phi_hat(t, class)?];
    let mut f: PolyVec = (0..k).map(|_| Poly::zero(field)).collect();
    for w in 1..=class as u32 {
        for (e, c) in &series.brackets(w).0 {
            let v = t.eval_expr(e, &args)?;
            for (o, p) in f.iter_mut().zip(&v) {
                *o = o.add(&p.scale(c));
            }
        }
    }
    let f: PolyVec = f.iter().map(|p| p.truncate(&weights, class as u32)).collect();
    PolyLoop::from_product(field, class as u32, weights, f)
}

/// Two-variable maps in the free algebra: `F(x,y)` and the left division
/// `D(x,y)` of the integrated free Sabinin algebra, truncated at `d`.
struct FreeLoop {
    f: FreeElement,
    div: FreeElement,
}

impl FreeLoop {
    /// The loop `C(x, Φ̂(x,y))` on primitives of the free algebra.
    fn new(field: Field, d: u32) -> Result<Self> {
        let series = RbchSeries::new(field, d)?.total();
        let x = FreeElement::gen(field, d, 0);
        let y = FreeElement::gen(field, d, 1);
        let mut ph = y.clone();
        for m in 1..d as usize {
            for n in 2..=d as usize - m {
                let xs: Vec<FreeElement> = (0..m).map(|_| x.clone()).collect();
                let ys: Vec<FreeElement> = (0..n).map(|_| y.clone()).collect();
                ph = &ph + &crate::sabinin::multioperator(&xs, &ys)?;
            }
        }
        let f = series.substitute(&[x.clone(), ph])?;
        let h = &(&f - &x) - &y;
        let base = &y - &x;
        let mut div = base.clone();
        for _ in 0..d {
            div = &base - &h.substitute(&[x.clone(), div.clone()])?;
        }
        Ok(FreeLoop { f, div })
    }

    fn mul(&self, a: &FreeElement, b: &FreeElement) -> Result<FreeElement> {
        self.f.substitute(&[a.clone(), b.clone()])
    }

    fn ldiv(&self, a: &FreeElement, b: &FreeElement) -> Result<FreeElement> {
        self.div.substitute(&[a.clone(), b.clone()])
    }
}

/// Degree-3 parts of the commutator and associator of the integrated
/// free Sabinin algebra, as bracket combinations in their arguments.
#[derive(Clone, Debug)]
pub struct LowDegreeRelations {
    pub commutator: BracketCombination,
    pub associator: BracketCombination,
}

fn weight_three_exprs(nargs: usize) -> Vec<BracketExpr> {
    let mut exprs = BracketExpr::ms_compositions(nargs, 3);
    for a in 0..nargs {
        for b in 0..nargs {
            for c in b..nargs {
                exprs.push(BracketExpr::Phi {
                    xs: alloc::vec![BracketExpr::Arg(a)],
                    ys: alloc::vec![BracketExpr::Arg(b), BracketExpr::Arg(c)],
                });
            }
        }
    }
    exprs
}

impl LowDegreeRelations {
    pub fn compute(field: Field) -> Result<Self> {
        let d = 3;
        let fl = FreeLoop::new(field, d)?;
        let g: Vec<FreeElement> = (0..3).map(|i| FreeElement::gen(field, d, i)).collect();
        let comm = fl.ldiv(&fl.mul(&g[1], &g[0])?, &fl.mul(&g[0], &g[1])?)?;
        let assoc = fl.ldiv(&fl.mul(&g[0], &fl.mul(&g[1], &g[2])?)?, &fl.mul(&fl.mul(&g[0], &g[1])?, &g[2])?)?;
        let fail = |what: &str| Error::Inconsistent(alloc::format!("degree-3 {what} is not a bracket combination"));
        let commutator =
            express_in_brackets(&weight_three_exprs(2), &g[..2], &comm.homogeneous(3))?.ok_or_else(|| fail("commutator"))?;
        let associator =
            express_in_brackets(&weight_three_exprs(3), &g, &assoc.homogeneous(3))?.ok_or_else(|| fail("associator"))?;
        Ok(LowDegreeRelations { commutator, associator })
    }
}

fn eval_combo(t: &SabininTable, combo: &BracketCombination, args: &[PolyVec]) -> Result<PolyVec> {
    let mut out: PolyVec = (0..t.dim()).map(|_| Poly::zero(t.field())).collect();
    for (e, c) in &combo.0 {
        let v = t.eval_expr(e, args)?;
        out = vec_add(&out, &v.iter().map(|p| p.scale(c)).collect::<Vec<_>>());
    }
    Ok(out)
}

/// Unknown weight-3 table entries: brackets `⟨a;b,c⟩` with `b<c` and
/// multioperator values `Φ(a;b,c)` with `b≤c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Entry3 {
    Ms(usize, usize, usize),
    Phi(usize, usize, usize),
}

/// Reads the brackets of weight ≤ 3 off a polynomial loop.
///
/// `⟨x,y⟩` is minus the bilinear part of the commutator. The weight-3
/// entries solve the linear system given by the degree-3 parts of the
/// commutator and associator against the universal relations.
pub fn recover_low_brackets(l: &PolyLoop, rel: &LowDegreeRelations) -> Result<SabininTable> {
    let field = l.field();
    field.require_divisible_up_to(3)?;
    let k = l.dim();
    let comm = l.commutator();
    let assoc = l.associator();
    let mut t2 = SabininTable::new(field, k, 3)?;
    for a in 0..k {
        for b in a + 1..k {
            let ma = Monomial::var(crate::poly::Var { slot: 0, coord: a as u16 })
                .mul(&Monomial::var(crate::poly::Var { slot: 1, coord: b as u16 }));
            let v: Vec<Scalar> = comm.iter().map(|p| -p.terms().get(&ma).cloned().unwrap_or_else(|| field.zero())).collect();
            t2.set_ms(&[], a, b, v)?;
        }
    }
    // bilinear parts must be antisymmetric for a bracket to exist
    for (c, p) in comm.iter().enumerate() {
        for (m, coef) in p.degree_part(2).terms() {
            let swapped = Monomial(m.0.iter().map(|(v, e)| (crate::poly::Var { slot: 1 - v.slot, coord: v.coord }, *e)).collect());
            let mut sw = swapped.0.clone();
            sw.sort();
            let other = p.terms().get(&Monomial(sw)).cloned().unwrap_or_else(|| field.zero());
            if !(coef + &other).is_zero() {
                return Err(Error::Inconsistent(alloc::format!("commutator bilinear part is not antisymmetric in coordinate {}", c + 1)));
            }
        }
    }
    let args3: Vec<PolyVec> = (0..3).map(|s| arg_vec(field, k, s)).collect();
    let known_c = eval_combo(&t2, &rel.commutator, &args3[..2])?;
    let known_a = eval_combo(&t2, &rel.associator, &args3)?;
    let target_c = vec_sub(&comm.iter().map(|p| p.degree_part(3)).collect::<Vec<_>>(), &known_c);
    let target_a = vec_sub(&assoc.iter().map(|p| p.degree_part(3)).collect::<Vec<_>>(), &known_a);

    let mut unknowns = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in b..k {
                if b < c {
                    unknowns.push(Entry3::Ms(a, b, c));
                }
                unknowns.push(Entry3::Phi(a, b, c));
            }
        }
    }
    // contribution of each unknown: a one-dimensional marker in coordinate 0
    let mut ech: Echelon<(u8, Monomial)> = Echelon::new(field);
    for u in &unknowns {
        let mut tu = SabininTable::new(field, k, 3)?;
        let mut marker = alloc::vec![field.zero(); k];
        marker[0] = field.one();
        match *u {
            Entry3::Ms(a, b, c) => tu.set_ms(&[a], b, c, marker)?,
            Entry3::Phi(a, b, c) => tu.set_phi(&[a], &[b, c], marker)?,
        }
        let cc = eval_combo(&tu, &rel.commutator, &args3[..2])?;
        let ca = eval_combo(&tu, &rel.associator, &args3)?;
        ech.insert(&keyed(&cc[0], &ca[0]));
    }
    let mut ms3: BTreeMap<(usize, usize, usize), Vec<Scalar>> = BTreeMap::new();
    let mut phi3: BTreeMap<(usize, usize, usize), Vec<Scalar>> = BTreeMap::new();
    for c in 0..k {
        let rhs = keyed(&target_c[c], &target_a[c]);
        let sol = ech.solve(&rhs).ok_or_else(|| {
            Error::Inconsistent(alloc::format!("degree-3 parts in coordinate {} do not come from a table", c + 1))
        })?;
        for (i, val) in sol {
            let slot = match unknowns[i] {
                Entry3::Ms(a, b, cc) => ms3.entry((a, b, cc)),
                Entry3::Phi(a, b, cc) => phi3.entry((a, b, cc)),
            };
            slot.or_insert_with(|| alloc::vec![field.zero(); k])[c] = val;
        }
    }
    let mut t = t2;
    for ((a, b, c), v) in ms3 {
        t.set_ms(&[a], b, c, v)?;
    }
    for ((a, b, c), v) in phi3 {
        t.set_phi(&[a], &[b, c], v)?;
    }
    Ok(t)
}

fn keyed(c: &Poly, a: &Poly) -> SparseVec<(u8, Monomial)> {
    let mut out = SparseVec::new();
    for (m, x) in c.terms() {
        out.insert((0, m.clone()), x.clone());
    }
    for (m, x) in a.terms() {
        out.insert((1, m.clone()), x.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::parse_element;

    #[test]
    fn exp_display() {
        let q = Field::Rational;
        let x = FreeElement::gen(q, 4, 0);
        let e = exp_series(&x, 4).unwrap();
        assert_eq!(e.to_string(), "1 + x1 + 1/2*(x1 x1) + 1/6*((x1 x1) x1) + 1/24*(((x1 x1) x1) x1)");
        assert!(e.is_grouplike());
        assert_eq!(log_series(&e, 4).unwrap(), x);
    }

    #[test]
    fn product_degree_two() {
        let q = Field::Rational;
        let x = FreeElement::gen(q, 2, 0);
        let y = FreeElement::gen(q, 2, 1);
        let p = right_alt_product(&exp_series(&x, 2).unwrap(), &exp_series(&y, 2).unwrap(), 2).unwrap();
        let want = parse_element(q, 2, "1 + x1 + x2 + 1/2*(x1 x1) + (x1 x2) + 1/2*(x2 x2)").unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn rbch_low_weights() {
        let q = Field::Rational;
        let s = RbchSeries::new(q, 3).unwrap();
        assert_eq!(s.component(2).to_string(), "1/2*(x1 x2) - 1/2*(x2 x1)");
        assert_eq!(s.brackets(2).to_string(), "-1/2*<x,y>");
        assert!(s.component(3).is_primitive());
    }

    #[test]
    fn integrate_class_two() {
        let q = Field::Rational;
        let f = crate::fixtures::free_nilpotent(q, 2, 2).unwrap();
        let l = integrate(&f.table).unwrap();
        assert_eq!(l.weights(), &[1, 1, 2]);
        assert_eq!(l.product_map()[2].to_string(), "-1/2*x1*y2 + 1/2*x2*y1 + x3 + y3");
        let rel = LowDegreeRelations::compute(q).unwrap();
        let back = recover_low_brackets(&l, &rel).unwrap();
        assert_eq!(back.ms_entries(), f.table.ms_entries());
        assert!(back.phi_entries().is_empty());
    }

    #[test]
    fn integrate_class_three_round_trip() {
        let q = Field::Rational;
        let f = crate::fixtures::free_nilpotent(q, 2, 3).unwrap();
        let l = integrate(&f.table).unwrap();
        assert!(l.verify_n_sequence(1).passed());
        assert_eq!(l.nilpotency_class(4), 3);
        let rel = LowDegreeRelations::compute(q).unwrap();
        let back = recover_low_brackets(&l, &rel).unwrap();
        assert_eq!(back.ms_entries(), f.table.ms_entries());
        assert_eq!(back.phi_entries(), f.table.phi_entries());
    }

    #[test]
    fn rbch_flat_to_weight_five() {
        let s = RbchSeries::new(Field::Rational, 5).unwrap();
        assert!(s.component(5).is_primitive());
        assert!(!s.brackets(4).0.is_empty());
    }
}
