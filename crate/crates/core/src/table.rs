//! Finite-basis Sabinin algebras as operation tables, the functor sending
//! an algebra to its Sabinin algebra, and the lower filtration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::combinat::{compositions, multisets, permutations, tuples};
use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::linalg::{dense_to_sparse, Echelon};
use crate::sabinin::{ms_bracket, multioperator, BracketExpr};
use crate::scalar::{Field, Scalar};
use crate::structure::{is_zero_vec, StructureConstants, Vector};

/// Coefficient rings over which table operations can be evaluated
/// multilinearly: plain scalars, or polynomials in coordinate variables.
pub trait Coefficient: Clone {
    fn zero_from(field: Field) -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn add_assign(&mut self, o: &Self);
    fn scale(&self, c: &Scalar) -> Self;
}

impl Coefficient for Scalar {
    fn zero_from(field: Field) -> Self {
        field.zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn scale(&self, c: &Scalar) -> Self {
        c * self
    }
}

/// A Sabinin algebra on a finite basis, given by its brackets and
/// multioperator up to a weight bound. Only nonzero entries are stored;
/// brackets are stored with `y < z`, multioperator entries under sorted
/// index multisets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SabininTable {
    field: Field,
    dim: usize,
    weight_bound: usize,
    ms: BTreeMap<(Vec<usize>, usize, usize), Vector>,
    phi: BTreeMap<(Vec<usize>, Vec<usize>), Vector>,
    class: Option<usize>,
}

impl SabininTable {
    /// The abelian table (all operations zero).
    pub fn new(field: Field, dim: usize, weight_bound: usize) -> Result<Self> {
        if weight_bound < 2 {
            return Err(Error::InvalidInput("weight bound must be at least 2".to_string()));
        }
        Ok(SabininTable { field, dim, weight_bound, ms: BTreeMap::new(), phi: BTreeMap::new(), class: None })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight_bound(&self) -> usize {
        self.weight_bound
    }

    pub fn claimed_class(&self) -> Option<usize> {
        self.class
    }

    pub fn is_flat(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn ms_entries(&self) -> &BTreeMap<(Vec<usize>, usize, usize), Vector> {
        &self.ms
    }

    pub fn phi_entries(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>), Vector> {
        &self.phi
    }

    fn check_vec(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        if let Some(c) = v.iter().find(|c| c.field() != self.field) {
            return Err(Error::FieldMismatch(self.field, c.field()));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            return Err(Error::InvalidInput(alloc::format!("basis index {i} out of range")));
        }
        Ok(())
    }

    fn check_weight(&self, w: usize) -> Result<()> {
        if w > self.weight_bound {
            return Err(Error::AboveWeightBound { weight: w, bound: self.weight_bound });
        }
        Ok(())
    }

    /// Sets `⟨prefix; e_y, e_z⟩` (and hence its antisymmetric partner).
    pub fn set_ms(&mut self, prefix: &[usize], y: usize, z: usize, v: Vector) -> Result<()> {
        self.check_weight(prefix.len() + 2)?;
        self.check_vec(&v)?;
        for &i in prefix.iter().chain([&y, &z]) {
            self.check_index(i)?;
        }
        if y == z {
            if !is_zero_vec(&v) {
                return Err(Error::Inconsistent("bracket ⟨…;y,y⟩ must vanish".to_string()));
            }
            return Ok(());
        }
        let (a, b, v) = if y < z { (y, z, v) } else { (z, y, v.iter().map(|c| -c).collect()) };
        let key = (prefix.to_vec(), a, b);
        if is_zero_vec(&v) {
            self.ms.remove(&key);
        } else {
            self.ms.insert(key, v);
        }
        Ok(())
    }

    /// Sets `Φ(xs; ys)` for the multisets underlying `xs` and `ys`.
    pub fn set_phi(&mut self, xs: &[usize], ys: &[usize], v: Vector) -> Result<()> {
        if xs.is_empty() || ys.len() < 2 {
            return Err(Error::InvalidInput("multioperator needs m ≥ 1 and n ≥ 2".to_string()));
        }
        self.check_weight(xs.len() + ys.len())?;
        self.check_vec(&v)?;
        for &i in xs.iter().chain(ys) {
            self.check_index(i)?;
        }
        let (mut a, mut b) = (xs.to_vec(), ys.to_vec());
        a.sort();
        b.sort();
        if is_zero_vec(&v) {
            self.phi.remove(&(a, b));
        } else {
            self.phi.insert((a, b), v);
        }
        Ok(())
    }

    pub fn set_claimed_class(&mut self, class: Option<usize>) {
        self.class = class;
    }

    /// `⟨e_prefix; e_y, e_z⟩`.
    pub fn ms(&self, prefix: &[usize], y: usize, z: usize) -> Result<Vector> {
        self.check_weight(prefix.len() + 2)?;
        if y == z {
            return Ok(alloc::vec![self.field.zero(); self.dim]);
        }
        let (a, b, neg) = if y < z { (y, z, false) } else { (z, y, true) };
        Ok(match self.ms.get(&(prefix.to_vec(), a, b)) {
            None => alloc::vec![self.field.zero(); self.dim],
            Some(v) if neg => v.iter().map(|c| -c).collect(),
            Some(v) => v.clone(),
        })
    }

    pub fn phi(&self, xs: &[usize], ys: &[usize]) -> Result<Vector> {
        self.check_weight(xs.len() + ys.len())?;
        let (mut a, mut b) = (xs.to_vec(), ys.to_vec());
        a.sort();
        b.sort();
        Ok(self.phi.get(&(a, b)).cloned().unwrap_or_else(|| alloc::vec![self.field.zero(); self.dim]))
    }

    /// `⟨xs; y, z⟩` extended multilinearly to coefficient vectors.
    pub fn ms_eval<C: Coefficient>(&self, xs: &[&[C]], y: &[C], z: &[C]) -> Result<Vec<C>> {
        self.check_weight(xs.len() + 2)?;
        let mut out: Vec<C> = alloc::vec![C::zero_from(self.field); self.dim];
        for ((prefix, a, b), v) in &self.ms {
            if prefix.len() != xs.len() {
                continue;
            }
            let mut coef = y[*a].mul(&z[*b]);
            let anti = y[*b].mul(&z[*a]);
            coef.add_assign(&anti.scale(&-self.field.one()));
            for (r, &i) in prefix.iter().enumerate() {
                if coef.is_zero() {
                    break;
                }
                coef = coef.mul(&xs[r][i]);
            }
            if coef.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(v) {
                if !c.is_zero() {
                    o.add_assign(&coef.scale(c));
                }
            }
        }
        Ok(out)
    }

    /// `Φ(xs; ys)` extended multilinearly to coefficient vectors.
    pub fn phi_eval<C: Coefficient>(&self, xs: &[&[C]], ys: &[&[C]]) -> Result<Vec<C>> {
        if xs.is_empty() || ys.len() < 2 {
            return Err(Error::InvalidInput("multioperator needs m ≥ 1 and n ≥ 2".to_string()));
        }
        self.check_weight(xs.len() + ys.len())?;
        let mut out: Vec<C> = alloc::vec![C::zero_from(self.field); self.dim];
        for ((a, b), v) in &self.phi {
            if a.len() != xs.len() || b.len() != ys.len() {
                continue;
            }
            let ca = symmetric_product(self.field, xs, a);
            if ca.is_zero() {
                continue;
            }
            let coef = ca.mul(&symmetric_product(self.field, ys, b));
            if coef.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(v) {
                if !c.is_zero() {
                    o.add_assign(&coef.scale(c));
                }
            }
        }
        Ok(out)
    }

    /// Evaluates a bracket composition with argument `i` set to `args[i]`.
    pub fn eval_expr<C: Coefficient>(&self, e: &BracketExpr, args: &[Vec<C>]) -> Result<Vec<C>> {
        match e {
            BracketExpr::Arg(i) => args.get(*i).cloned().ok_or(Error::UnassignedGenerator(*i as u32)),
            BracketExpr::Ms { prefix, y, z } => {
                let p: Vec<Vec<C>> = prefix.iter().map(|e| self.eval_expr(e, args)).collect::<Result<_>>()?;
                let pr: Vec<&[C]> = p.iter().map(|v| v.as_slice()).collect();
                self.ms_eval(&pr, &self.eval_expr(y, args)?, &self.eval_expr(z, args)?)
            }
            BracketExpr::Phi { xs, ys } => {
                let a: Vec<Vec<C>> = xs.iter().map(|e| self.eval_expr(e, args)).collect::<Result<_>>()?;
                let b: Vec<Vec<C>> = ys.iter().map(|e| self.eval_expr(e, args)).collect::<Result<_>>()?;
                let ar: Vec<&[C]> = a.iter().map(|v| v.as_slice()).collect();
                let br: Vec<&[C]> = b.iter().map(|v| v.as_slice()).collect();
                self.phi_eval(&ar, &br)
            }
        }
    }

    /// Checks that every stored operation of weight above the claimed class vanishes.
    pub fn check_claimed_class(&self) -> Result<()> {
        let Some(c) = self.class else { return Ok(()) };
        for k in self.ms.keys() {
            if k.0.len() + 2 > c {
                return Err(Error::Inconsistent(alloc::format!("nonzero bracket of weight {} above class {c}", k.0.len() + 2)));
            }
        }
        for k in self.phi.keys() {
            if k.0.len() + k.1.len() > c {
                return Err(Error::Inconsistent(alloc::format!(
                    "nonzero multioperator of weight {} above class {c}",
                    k.0.len() + k.1.len()
                )));
            }
        }
        Ok(())
    }

    /// The same brackets with the multioperator dropped.
    pub fn flattened(&self) -> SabininTable {
        let mut t = self.clone();
        t.phi.clear();
        t
    }

    /// Table restricted to weights `≤ w`.
    pub fn restricted(&self, w: usize) -> SabininTable {
        let mut t = self.clone();
        t.weight_bound = w.min(self.weight_bound);
        t.ms.retain(|k, _| k.0.len() + 2 <= w);
        t.phi.retain(|k, _| k.0.len() + k.1.len() <= w);
        t
    }
}

/// `Σ over distinct orderings π of the multiset Π_r args[r][π_r]`.
fn symmetric_product<C: Coefficient>(field: Field, args: &[&[C]], multiset: &[usize]) -> C {
    let mut seen = BTreeSet::new();
    let mut total = C::zero_from(field);
    for perm in permutations(multiset.len()) {
        let arr: Vec<usize> = perm.iter().map(|&i| multiset[i]).collect();
        if !seen.insert(arr.clone()) {
            continue;
        }
        let mut c = args[0][arr[0]].clone();
        for r in 1..arr.len() {
            if c.is_zero() {
                break;
            }
            c = c.mul(&args[r][arr[r]]);
        }
        total.add_assign(&c);
    }
    total
}

/// The Sabinin algebra of an algebra `A`, computed by evaluating the
/// universal brackets and multioperators on basis tuples.
pub fn ux_table(a: &StructureConstants, weight_bound: usize) -> Result<SabininTable> {
    let field = a.field();
    let k = a.dim();
    let mut t = SabininTable::new(field, k, weight_bound)?;
    if weight_bound >= 3 {
        field.require_divisible_up_to(((weight_bound - 1) as u64).max(2))?;
    }
    let basis: Vec<Vector> = (0..k).map(|i| a.basis(i)).collect();
    for n in 0..=weight_bound - 2 {
        let arity = n + 2;
        let g: Vec<FreeElement> = (0..arity as u32).map(|i| FreeElement::gen(field, arity as u32, i)).collect();
        let universal = ms_bracket(&g[..n], &g[n], &g[n + 1])?;
        for prefix in tuples(k, n) {
            for y in 0..k {
                for z in y + 1..k {
                    let mut asg: Vec<Vector> = prefix.iter().map(|&i| basis[i].clone()).collect();
                    asg.push(basis[y].clone());
                    asg.push(basis[z].clone());
                    let v = a.evaluate(&universal, &asg)?;
                    t.set_ms(&prefix, y, z, v)?;
                }
            }
        }
    }
    for m in 1..weight_bound {
        for n in 2..=weight_bound - m {
            let arity = m + n;
            let g: Vec<FreeElement> = (0..arity as u32).map(|i| FreeElement::gen(field, arity as u32, i)).collect();
            let universal = multioperator(&g[..m], &g[m..])?;
            for xs in multisets(k, m) {
                for ys in multisets(k, n) {
                    let asg: Vec<Vector> = xs.iter().chain(&ys).map(|&i| basis[i].clone()).collect();
                    let v = a.evaluate(&universal, &asg)?;
                    t.set_phi(&xs, &ys, v)?;
                }
            }
        }
    }
    Ok(t)
}

/// Result of computing the lower filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationOutcome {
    /// `𝔰_class ≠ 0 = 𝔰_{class+1}` (operations above the weight bound
    /// are taken to be zero).
    Nilpotent { class: usize },
    /// The chain is constant and nonzero from `from` on.
    NotNilpotent { from: usize, dim: usize },
    /// Neither outcome could be established within `levels` steps.
    Inconclusive { levels: usize },
}

#[derive(Clone, Debug)]
pub struct Filtration {
    /// `levels[n-1]` is a basis of `𝔰_n` (in reduced echelon form).
    pub levels: Vec<Vec<Vector>>,
    pub outcome: FiltrationOutcome,
}

impl Filtration {
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn class(&self) -> Option<usize> {
        match self.outcome {
            FiltrationOutcome::Nilpotent { class } => Some(class),
            _ => None,
        }
    }

    /// `max { n : v ∈ 𝔰_n }` for a nonzero `v`.
    pub fn level_of(&self, v: &[Scalar]) -> usize {
        let sv = dense_to_sparse(v);
        let mut lvl = 0;
        for (n, basis) in self.levels.iter().enumerate() {
            let field = v.first().map(|c| c.field()).unwrap_or(Field::Rational);
            let e = crate::linalg::span(field, basis.iter().map(|b| dense_to_sparse(b)));
            if e.contains(&sv) {
                lvl = n + 1;
            } else {
                break;
            }
        }
        lvl
    }
}

const MAX_LEVELS: usize = 64;

/// The chain `𝔰 = 𝔰₁ ⊇ 𝔰₂ ⊇ …` where `𝔰_n` is spanned by all brackets and
/// multioperators whose arguments lie in `𝔰_{i_r}` with `Σ i_r ≥ n`.
pub fn lower_filtration(t: &SabininTable) -> Filtration {
    let field = t.field();
    let k = t.dim();
    let full: Vec<Vector> = (0..k)
        .map(|i| {
            let mut v = alloc::vec![field.zero(); k];
            v[i] = field.one();
            v
        })
        .collect();
    let mut levels = alloc::vec![full];
    if k == 0 {
        return Filtration { levels, outcome: FiltrationOutcome::Nilpotent { class: 0 } };
    }
    let w = t.weight_bound();
    loop {
        let n = levels.len() + 1;
        let next = next_level(t, &levels, n);
        let zero = next.is_empty();
        levels.push(next);
        if zero {
            return Filtration { outcome: FiltrationOutcome::Nilpotent { class: n - 1 }, levels };
        }
        // constant from m through w(m-1)+1 forces constancy forever;
        // m = 1 means every level is the whole space
        let mut m = n;
        while m > 1 && levels[m - 2].len() == levels[n - 1].len() {
            m -= 1;
        }
        if n > w * (m - 1) {
            let dim = levels[n - 1].len();
            return Filtration { levels, outcome: FiltrationOutcome::NotNilpotent { from: m, dim } };
        }
        if levels.len() >= MAX_LEVELS {
            return Filtration { levels, outcome: FiltrationOutcome::Inconclusive { levels: MAX_LEVELS } };
        }
    }
}

fn next_level(t: &SabininTable, levels: &[Vec<Vector>], n: usize) -> Vec<Vector> {
    let field = t.field();
    let mut ech = Echelon::new(field);
    let w = t.weight_bound();
    let level_basis = |i: usize| -> &Vec<Vector> { &levels[i.min(levels.len()) - 1] };
    for arity in 2..=w {
        let total = n.max(arity);
        for comp in compositions(total, arity) {
            if comp.iter().any(|&c| c > levels.len()) {
                continue;
            }
            let choices: Vec<&Vec<Vector>> = comp.iter().map(|&c| level_basis(c)).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut idx = alloc::vec![0usize; arity];
            'outer: loop {
                let args: Vec<&[Scalar]> = (0..arity).map(|r| choices[r][idx[r]].as_slice()).collect();
                if let Ok(v) = t.ms_eval(&args[..arity - 2], args[arity - 2], args[arity - 1]) {
                    ech.push(&dense_to_sparse(&v));
                }
                for m in 1..arity - 1 {
                    if let Ok(v) = t.phi_eval(&args[..m], &args[m..]) {
                        ech.push(&dense_to_sparse(&v));
                    }
                }
                for r in (0..arity).rev() {
                    idx[r] += 1;
                    if idx[r] < choices[r].len() {
                        continue 'outer;
                    }
                    idx[r] = 0;
                }
                break;
            }
        }
    }
    reduced_basis(field, &ech, t.dim())
}

/// Fully reduced echelon basis as dense vectors, in pivot order.
pub fn reduced_basis(field: Field, ech: &Echelon<usize>, dim: usize) -> Vec<Vector> {
    let mut rows: Vec<crate::linalg::SparseVec<usize>> = ech.basis().cloned().collect();
    rows.sort_by_key(|r| *r.keys().next().unwrap());
    // back-substitute so each pivot column is a unit column
    for i in (0..rows.len()).rev() {
        let p = *rows[i].keys().next().unwrap();
        for j in 0..i {
            if let Some(c) = rows[j].get(&p).cloned() {
                let ri = rows[i].clone();
                crate::linalg::axpy(&mut rows[j], &-c, &ri);
            }
        }
    }
    rows.iter().map(|r| crate::linalg::sparse_to_dense(field, r, dim)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_storage() {
        let q = Field::Rational;
        let mut t = SabininTable::new(q, 3, 3).unwrap();
        t.set_ms(&[], 1, 0, alloc::vec![q.zero(), q.zero(), q.int(-1)]).unwrap();
        assert_eq!(t.ms(&[], 0, 1).unwrap()[2], q.int(1));
        assert_eq!(t.ms(&[], 1, 0).unwrap()[2], q.int(-1));
        assert!(matches!(t.ms(&[0, 0], 1, 2), Err(Error::AboveWeightBound { .. })));
        assert!(t.set_ms(&[], 1, 1, alloc::vec![q.one(), q.zero(), q.zero()]).is_err());
    }

    #[test]
    fn free_class_two_filtration() {
        let q = Field::Rational;
        let mut t = SabininTable::new(q, 3, 3).unwrap();
        t.set_ms(&[], 0, 1, alloc::vec![q.zero(), q.zero(), q.one()]).unwrap();
        let f = lower_filtration(&t);
        assert_eq!(f.dims(), alloc::vec![3, 1, 0]);
        assert_eq!(f.outcome, FiltrationOutcome::Nilpotent { class: 2 });
        assert_eq!(f.level_of(&[q.zero(), q.zero(), q.int(5)]), 2);
    }

    #[test]
    fn abelian_is_class_one() {
        let t = SabininTable::new(Field::Rational, 2, 4).unwrap();
        assert_eq!(lower_filtration(&t).outcome, FiltrationOutcome::Nilpotent { class: 1 });
    }
}
