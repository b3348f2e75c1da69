//! Lie envelopes of flat Sabinin algebras: free Lie computations inside
//! the tensor algebra, right-normed rewriting, operations induced by a
//! splitting `𝔩 = 𝔥 ⊕ 𝔰`, the axiom check, and free and standard envelopes.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::combinat::tuples;
use crate::error::{Error, Result};
use crate::linalg::{add_term, axpy, dense_to_sparse, kernel_dense, sparse_to_dense, span, Echelon, SparseVec};
use crate::scalar::{Field, Scalar};
use crate::structure::{add_vec, is_zero_vec, scale_vec, sub_vec, StructureConstants, Vector};
use crate::table::{lower_filtration, SabininTable};

/// Noncommutative polynomials: generator sequences with coefficients.
pub type TensorPoly = BTreeMap<Vec<u32>, Scalar>;

pub fn t_gen(field: Field, g: u32) -> TensorPoly {
    let mut t = TensorPoly::new();
    t.insert(alloc::vec![g], field.one());
    t
}

/// Product, dropping words longer than `trunc` when given.
pub fn t_mul(a: &TensorPoly, b: &TensorPoly, trunc: Option<usize>) -> TensorPoly {
    let mut out = TensorPoly::new();
    for (u, x) in a {
        for (v, y) in b {
            if trunc.is_some_and(|t| u.len() + v.len() > t) {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            add_term(&mut out, w, &(x * y));
        }
    }
    out
}

/// `ab − ba`.
pub fn t_bracket(a: &TensorPoly, b: &TensorPoly, trunc: Option<usize>) -> TensorPoly {
    let mut out = t_mul(a, b, trunc);
    let ba = t_mul(b, a, trunc);
    if let Some(c) = ba.values().next() {
        axpy(&mut out, &-c.field().one(), &ba);
    }
    out
}

/// A formal Lie bracket expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieTree {
    Gen(u32),
    Br(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn br(a: LieTree, b: LieTree) -> LieTree {
        LieTree::Br(Box::new(a), Box::new(b))
    }

    /// `[g₁,[g₂,[…,gₙ]]]`.
    pub fn right_normed(gens: &[u32]) -> LieTree {
        let (last, rest) = gens.split_last().expect("nonempty");
        rest.iter().rev().fold(LieTree::Gen(*last), |acc, &g| LieTree::br(LieTree::Gen(g), acc))
    }

    pub fn degree(&self) -> usize {
        match self {
            LieTree::Gen(_) => 1,
            LieTree::Br(a, b) => a.degree() + b.degree(),
        }
    }

    /// Commutator evaluation in the tensor algebra.
    pub fn eval(&self, field: Field) -> TensorPoly {
        match self {
            LieTree::Gen(g) => t_gen(field, *g),
            LieTree::Br(a, b) => t_bracket(&a.eval(field), &b.eval(field), None),
        }
    }

    /// Parses `x1`, `[x1,x2]`, `[[x1,x2],x3]`, ….
    pub fn parse(s: &str) -> Result<LieTree> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (t, rest) = parse_tree(&s)?;
        if !rest.is_empty() {
            return Err(Error::Parse(alloc::format!("trailing input '{rest}'")));
        }
        Ok(t)
    }
}

fn parse_tree(s: &str) -> Result<(LieTree, &str)> {
    if let Some(rest) = s.strip_prefix('[') {
        let (a, rest) = parse_tree(rest)?;
        let rest = rest.strip_prefix(',').ok_or_else(|| Error::Parse("expected ','".to_string()))?;
        let (b, rest) = parse_tree(rest)?;
        let rest = rest.strip_prefix(']').ok_or_else(|| Error::Parse("expected ']'".to_string()))?;
        return Ok((LieTree::br(a, b), rest));
    }
    let rest = s.strip_prefix('x').ok_or_else(|| Error::Parse(alloc::format!("expected generator at '{s}'")))?;
    let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let n: u32 = rest[..end].parse().map_err(|_| Error::Parse("bad generator index".to_string()))?;
    if n == 0 {
        return Err(Error::Parse("generators are numbered from 1".to_string()));
    }
    Ok((LieTree::Gen(n - 1), &rest[end..]))
}

impl fmt::Display for LieTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieTree::Gen(g) => write!(f, "x{}", g + 1),
            LieTree::Br(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// A combination of right-normed brackets `[g₁,…,gₙ]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RightNormed(pub BTreeMap<Vec<u32>, Scalar>);

impl RightNormed {
    pub fn eval(&self, field: Field) -> TensorPoly {
        let mut out = TensorPoly::new();
        for (seq, c) in &self.0 {
            axpy(&mut out, c, &LieTree::right_normed(seq).eval(field));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &RightNormed) -> RightNormed {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            add_term(&mut m, k.clone(), c);
        }
        RightNormed(m)
    }

    pub fn sub(&self, o: &RightNormed) -> RightNormed {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            add_term(&mut m, k.clone(), &-c);
        }
        RightNormed(m)
    }
}

impl fmt::Display for RightNormed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct Seq<'a>(&'a [u32]);
        impl fmt::Display for Seq<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.len() == 1 {
                    return write!(f, "x{}", self.0[0] + 1);
                }
                write!(f, "[")?;
                for (i, g) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "x{}", g + 1)?;
                }
                write!(f, "]")
            }
        }
        if self.0.is_empty() {
            return write!(f, "0");
        }
        crate::scalar::write_signed_terms(f, self.0.iter().map(|(s, c)| (c.clone(), Seq(s))))
    }
}

/// Permutations `α` of `0..n` increasing up to the position of `n−1` and
/// decreasing after it, with sign `(−1)^{h(α)}`, `h = n − s` for the
/// 1-based position `s` of the maximum.
pub fn rewrite_pair(n: usize) -> Vec<(Vec<usize>, bool)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for mask in 0u64..(1 << (n - 1)) {
        let before: Vec<usize> = (0..n - 1).filter(|i| mask >> i & 1 == 1).collect();
        let mut after: Vec<usize> = (0..n - 1).filter(|i| mask >> i & 1 == 0).collect();
        after.reverse();
        let h = after.len();
        let mut alpha = before;
        alpha.push(n - 1);
        alpha.extend(after);
        out.push((alpha, h % 2 == 1));
    }
    out.sort();
    out
}

/// Expands a bracket tree into right-normed brackets, bracketing right-normed
/// pieces `[[x₁…xₙ],[y₁…yₘ]] = Σ ±[x_α₁,…,x_αₙ,y₁,…,yₘ]`.
pub fn right_normed_rewrite(field: Field, t: &LieTree) -> RightNormed {
    match t {
        LieTree::Gen(g) => {
            let mut m = BTreeMap::new();
            m.insert(alloc::vec![*g], field.one());
            RightNormed(m)
        }
        LieTree::Br(a, b) => {
            let (ra, rb) = (right_normed_rewrite(field, a), right_normed_rewrite(field, b));
            let mut out = BTreeMap::new();
            for (xs, c) in &ra.0 {
                let table = rewrite_pair(xs.len());
                for (ys, d) in &rb.0 {
                    let cd = c * d;
                    for (alpha, neg) in &table {
                        let mut seq: Vec<u32> = alpha.iter().map(|&i| xs[i]).collect();
                        seq.extend_from_slice(ys);
                        add_term(&mut out, seq, &if *neg { -&cd } else { cd.clone() });
                    }
                }
            }
            RightNormed(out)
        }
    }
}

/// Verifies antisymmetry and the Jacobi identity on basis vectors.
pub fn check_lie(l: &StructureConstants) -> Result<()> {
    let k = l.dim();
    for i in 0..k {
        for j in 0..k {
            let a = l.mul(&l.basis(i), &l.basis(j));
            let b = l.mul(&l.basis(j), &l.basis(i));
            if !is_zero_vec(&add_vec(&a, &b)) {
                return Err(Error::InvalidInput(alloc::format!("bracket not antisymmetric on e{},e{}", i + 1, j + 1)));
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for m in j + 1..k {
                let (x, y, z) = (l.basis(i), l.basis(j), l.basis(m));
                let s = add_vec(
                    &add_vec(&l.mul(&x, &l.mul(&y, &z)), &l.mul(&y, &l.mul(&z, &x))),
                    &l.mul(&z, &l.mul(&x, &y)),
                );
                if !is_zero_vec(&s) {
                    return Err(Error::InvalidInput(alloc::format!("Jacobi fails on e{},e{},e{}", i + 1, j + 1, m + 1)));
                }
            }
        }
    }
    Ok(())
}

/// The Lie algebra spanned by matrices (row-major `n×n`) under the commutator.
pub fn lie_from_matrices(field: Field, n: usize, mats: &[Vector]) -> Result<StructureConstants> {
    let m = StructureConstants::matrices(field, n);
    let ech = span(field, mats.iter().map(|v| dense_to_sparse(v)));
    if ech.rank() != mats.len() {
        return Err(Error::InvalidInput("matrices are linearly dependent".to_string()));
    }
    let mut ordered = Echelon::new(field);
    for v in mats {
        ordered.push(&dense_to_sparse(v));
    }
    let k = mats.len();
    let mut table = Vec::new();
    for a in mats {
        let mut row = Vec::new();
        for b in mats {
            let c = sub_vec(&m.mul(a, b), &m.mul(b, a));
            let sol = ordered
                .solve(&dense_to_sparse(&c))
                .ok_or_else(|| Error::InvalidInput("matrices do not span a Lie algebra".to_string()))?;
            row.push(sparse_to_dense(field, &sol, k));
        }
        table.push(row);
    }
    let l = StructureConstants::new(field, table, None)?;
    check_lie(&l)?;
    Ok(l)
}

/// The nilpotency class via the lower central series (`None` when the
/// series stabilizes at a nonzero term).
pub fn lie_class(l: &StructureConstants) -> Option<usize> {
    let field = l.field();
    let k = l.dim();
    let mut current: Vec<Vector> = (0..k).map(|i| l.basis(i)).collect();
    let mut class = 0;
    loop {
        if current.is_empty() {
            return Some(class);
        }
        class += 1;
        let mut ech = Echelon::new(field);
        for i in 0..k {
            for v in &current {
                ech.push(&dense_to_sparse(&l.mul(&l.basis(i), v)));
            }
        }
        let next = crate::table::reduced_basis(field, &ech, k);
        if next.len() == current.len() {
            return None;
        }
        current = next;
    }
}

/// A Lie algebra with a splitting `𝔩 = 𝔥 ⊕ 𝔰`, `𝔥` a subalgebra.
#[derive(Clone, Debug)]
pub struct SplitLie {
    lie: StructureConstants,
    h: Vec<Vector>,
    s: Vec<Vector>,
    /// Coordinates of each standard basis vector in the basis `h ++ s`.
    coords: Vec<Vector>,
}

impl SplitLie {
    pub fn new(lie: StructureConstants, h: Vec<Vector>, s: Vec<Vector>) -> Result<Self> {
        check_lie(&lie)?;
        let field = lie.field();
        let k = lie.dim();
        let all: Vec<&Vector> = h.iter().chain(&s).collect();
        if all.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: all.len() });
        }
        let mut ech = Echelon::new(field);
        for v in &all {
            if v.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: v.len() });
            }
            if !ech.push(&dense_to_sparse(v)) {
                return Err(Error::InvalidInput("𝔥 and 𝔰 do not form a direct sum".to_string()));
            }
        }
        let coords = (0..k).map(|i| sparse_to_dense(field, &ech.solve(&dense_to_sparse(&lie.basis(i))).unwrap(), k)).collect();
        let out = SplitLie { lie, h, s, coords };
        for a in &out.h {
            for b in &out.h {
                let c = out.lie.mul(a, b);
                if !is_zero_vec(&out.project(&c)) {
                    return Err(Error::Inconsistent("𝔥 is not a subalgebra".to_string()));
                }
            }
        }
        Ok(out)
    }

    pub fn lie(&self) -> &StructureConstants {
        &self.lie
    }

    pub fn h(&self) -> &[Vector] {
        &self.h
    }

    pub fn s(&self) -> &[Vector] {
        &self.s
    }

    pub fn field(&self) -> Field {
        self.lie.field()
    }

    /// `π(v)` in coordinates of the `𝔰` basis.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        let hd = self.h.len();
        let mut out = alloc::vec![self.field().zero(); self.s.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&self.coords[i][hd..]) {
                *o += &(c * x);
            }
        }
        out
    }

    /// `𝔥`-coordinates of `v`.
    fn h_coords(&self, v: &[Scalar]) -> Vector {
        let hd = self.h.len();
        let mut out = alloc::vec![self.field().zero(); hd];
        for (i, c) in v.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(&self.coords[i][..hd]) {
                *o += &(c * x);
            }
        }
        out
    }
}

/// Multilinear operations `(x₁,…,xₙ)`, `2 ≤ n ≤ W`, on a `k`-dimensional
/// space, with the convention `(x) = x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpFamily {
    field: Field,
    dim: usize,
    weight_bound: usize,
    ops: BTreeMap<Vec<usize>, Vector>,
}

impl OpFamily {
    pub fn new(field: Field, dim: usize, weight_bound: usize) -> Self {
        OpFamily { field, dim, weight_bound, ops: BTreeMap::new() }
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

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Vector> {
        &self.ops
    }

    pub fn set(&mut self, seq: Vec<usize>, v: Vector) -> Result<()> {
        if seq.len() < 2 || seq.len() > self.weight_bound {
            return Err(Error::AboveWeightBound { weight: seq.len(), bound: self.weight_bound });
        }
        if v.len() != self.dim || seq.iter().any(|&i| i >= self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        if is_zero_vec(&v) {
            self.ops.remove(&seq);
        } else {
            self.ops.insert(seq, v);
        }
        Ok(())
    }

    fn basis(&self, i: usize) -> Vector {
        let mut v = alloc::vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    /// `(e_{seq₁},…,e_{seqₙ})`.
    pub fn get(&self, seq: &[usize]) -> Result<Vector> {
        if seq.len() == 1 {
            return Ok(self.basis(seq[0]));
        }
        if seq.len() > self.weight_bound {
            return Err(Error::AboveWeightBound { weight: seq.len(), bound: self.weight_bound });
        }
        Ok(self.ops.get(seq).cloned().unwrap_or_else(|| alloc::vec![self.field.zero(); self.dim]))
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn eval(&self, args: &[&[Scalar]]) -> Result<Vector> {
        if args.len() == 1 {
            return Ok(args[0].to_vec());
        }
        if args.len() > self.weight_bound {
            return Err(Error::AboveWeightBound { weight: args.len(), bound: self.weight_bound });
        }
        let mut out = alloc::vec![self.field.zero(); self.dim];
        for (seq, v) in &self.ops {
            if seq.len() != args.len() {
                continue;
            }
            let mut c = self.field.one();
            for (a, &i) in args.iter().zip(seq) {
                c = &c * &a[i];
                if c.is_zero() {
                    break;
                }
            }
            if !c.is_zero() {
                out = add_vec(&out, &scale_vec(&c, v));
            }
        }
        Ok(out)
    }

    /// The flat Sabinin algebra defined by the shuffle recursion
    /// `(xs,y,z) + ⟨xs;y,z⟩ + Σ_t Σ_shuffles (x_α₁..x_α_t, ⟨x_rest;y,z⟩) = 0`.
    pub fn ms_table(&self) -> Result<SabininTable> {
        let w = self.weight_bound.max(2);
        let mut t = SabininTable::new(self.field, self.dim, w)?;
        let mut memo: BTreeMap<(Vec<usize>, usize, usize), Vector> = BTreeMap::new();
        for n in 0..=w - 2 {
            for prefix in tuples(self.dim, n) {
                for y in 0..self.dim {
                    for z in y + 1..self.dim {
                        let v = self.ms_value(&prefix, y, z, &mut memo)?;
                        t.set_ms(&prefix, y, z, v)?;
                    }
                }
            }
        }
        Ok(t)
    }

    fn ms_value(
        &self,
        xs: &[usize],
        y: usize,
        z: usize,
        memo: &mut BTreeMap<(Vec<usize>, usize, usize), Vector>,
    ) -> Result<Vector> {
        let key = (xs.to_vec(), y, z);
        if let Some(v) = memo.get(&key) {
            return Ok(v.clone());
        }
        let n = xs.len();
        let mut full = xs.to_vec();
        full.push(y);
        full.push(z);
        let mut acc = self.get(&full)?;
        for mask in 1u64..(1 << n) {
            // mask selects the t leading arguments, in order
            let lead: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| xs[i]).collect();
            let rest: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| xs[i]).collect();
            let inner = self.ms_value(&rest, y, z, memo)?;
            let mut args: Vec<Vector> = lead.iter().map(|&i| self.basis(i)).collect();
            args.push(inner);
            let refs: Vec<&[Scalar]> = args.iter().map(|v| v.as_slice()).collect();
            acc = add_vec(&acc, &self.eval(&refs)?);
        }
        let v: Vector = acc.iter().map(|c| -c).collect();
        memo.insert(key, v.clone());
        Ok(v)
    }

    /// Nilpotency class of the associated flat Sabinin algebra.
    pub fn class(&self) -> Option<usize> {
        self.ms_table().ok().and_then(|t| lower_filtration(&t).class())
    }

    /// Index tuples `(xs, ys)` violating the axiom
    /// `−((X),(Y)) + ((X),Y) − ((Y),X) = Σ_α ±(x_α, Y)`.
    pub fn check_eq_three(&self, n: usize, m: usize) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidInput("n and m must be positive".to_string()));
        }
        if n + m > self.weight_bound {
            return Err(Error::AboveWeightBound { weight: n + m, bound: self.weight_bound });
        }
        let table = rewrite_pair(n);
        let mut bad = Vec::new();
        for xs in tuples(self.dim, n) {
            let bx = self.get(&xs)?;
            for ys in tuples(self.dim, m) {
                let by = self.get(&ys)?;
                let mut lhs = self.eval(&[&bx, &by])?.iter().map(|c| -c).collect::<Vec<_>>();
                let mut a: Vec<Vector> = alloc::vec![bx.clone()];
                a.extend(ys.iter().map(|&i| self.basis(i)));
                lhs = add_vec(&lhs, &self.eval(&a.iter().map(|v| v.as_slice()).collect::<Vec<_>>())?);
                let mut b: Vec<Vector> = alloc::vec![by.clone()];
                b.extend(xs.iter().map(|&i| self.basis(i)));
                lhs = sub_vec(&lhs, &self.eval(&b.iter().map(|v| v.as_slice()).collect::<Vec<_>>())?);
                let mut rhs = alloc::vec![self.field.zero(); self.dim];
                for (alpha, neg) in &table {
                    let mut seq: Vec<usize> = alpha.iter().map(|&i| xs[i]).collect();
                    seq.extend_from_slice(&ys);
                    let v = self.get(&seq)?;
                    rhs = if *neg { sub_vec(&rhs, &v) } else { add_vec(&rhs, &v) };
                }
                if lhs != rhs {
                    bad.push((xs.clone(), ys));
                }
            }
        }
        Ok(bad)
    }
}

/// `(x₁,…,xₙ) = π[x₁,[…,[x_{n−1},xₙ]]]` on the `𝔰` basis, `n ≤ W`.
pub fn split_ops(sp: &SplitLie, w: usize) -> OpFamily {
    let k = sp.s.len();
    let field = sp.field();
    let mut ops = OpFamily::new(field, k, w);
    let mut brackets: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
    for i in 0..k {
        brackets.insert(alloc::vec![i], sp.s[i].clone());
    }
    for n in 2..=w {
        for seq in tuples(k, n) {
            let inner = brackets[&seq[1..]].clone();
            let v = sp.lie.mul(&sp.s[seq[0]], &inner);
            ops.set(seq.clone(), sp.project(&v)).expect("in range");
            brackets.insert(seq, v);
        }
    }
    ops
}

/// The free nilpotent Lie algebra of class `n` on `k` generators, realized
/// in the tensor algebra; returns the algebra and the right-normed word of
/// each basis element (generators first).
pub fn free_nilpotent_lie(field: Field, k: usize, n: usize) -> Result<(StructureConstants, Vec<Vec<u32>>)> {
    let mut words = Vec::new();
    let mut polys: Vec<TensorPoly> = Vec::new();
    let mut ech = Echelon::new(field);
    for len in 1..=n {
        for seq in tuples(k, len) {
            let w: Vec<u32> = seq.iter().map(|&i| i as u32).collect();
            let p = LieTree::right_normed(&w).eval(field);
            if ech.push(&p) {
                words.push(w);
                polys.push(p);
            }
        }
    }
    let dim = words.len();
    // re-insert so solve() indices refer to the chosen elements
    let mut ech = Echelon::new(field);
    for p in &polys {
        ech.push(p);
    }
    let mut table = Vec::with_capacity(dim);
    for a in &polys {
        let mut row = Vec::with_capacity(dim);
        for b in &polys {
            let c = t_bracket(a, b, Some(n));
            let sol = ech.solve(&c).ok_or_else(|| Error::Inconsistent("bracket outside the Lie span".to_string()))?;
            row.push(sparse_to_dense(field, &sol, dim));
        }
        table.push(row);
    }
    Ok((StructureConstants::new(field, table, None)?, words))
}

/// The free Lie envelope truncated at class `n`: the free nilpotent Lie
/// algebra on the basis of `𝔰` with `π[a_{i₁},…,a_{i_r}] = (a_{i₁},…,a_{i_r})`
/// and `𝔥 = ker π`.
pub fn free_envelope(ops: &OpFamily, class: usize) -> Result<SplitLie> {
    let field = ops.field();
    let k = ops.dim();
    if let Some((seq, _)) = ops.entries().iter().find(|(s, _)| s.len() > class) {
        return Err(Error::Inconsistent(alloc::format!("operation of arity {} is nonzero above class {class}", seq.len())));
    }
    if class > ops.weight_bound() {
        return Err(Error::AboveWeightBound { weight: class, bound: ops.weight_bound() });
    }
    let (lie, words) = free_nilpotent_lie(field, k, class)?;
    let dim = lie.dim();
    let pi: Vec<Vector> = words.iter().map(|w| ops.get(&w.iter().map(|&i| i as usize).collect::<Vec<_>>())).collect::<Result<_>>()?;
    // π must respect every relation among right-normed brackets
    let mut ech = Echelon::new(field);
    for w in &words {
        ech.push(&LieTree::right_normed(w).eval(field));
    }
    for len in 2..=class {
        for seq in tuples(k, len) {
            let w: Vec<u32> = seq.iter().map(|&i| i as u32).collect();
            let combo = ech.solve(&LieTree::right_normed(&w).eval(field)).unwrap();
            let mut via = alloc::vec![field.zero(); k];
            for (i, c) in combo {
                via = add_vec(&via, &scale_vec(&c, &pi[i]));
            }
            if via != ops.get(&seq)? {
                return Err(Error::Inconsistent(alloc::format!("projection is not well defined on {seq:?}")));
            }
        }
    }
    let columns: Vec<Vector> = pi.clone();
    let h = kernel_dense(field, &columns);
    let s: Vec<Vector> = (0..k).map(|i| lie.basis(i)).collect();
    debug_assert_eq!(h.len() + s.len(), dim);
    SplitLie::new(lie, h, s)
}

/// The largest ideal of `𝔩` contained in `𝔥`, by the fixpoint
/// `𝔪_{i+1} = {v ∈ 𝔪_i : [𝔩, v] ⊆ 𝔪_i}`.
pub fn largest_ideal_in_h(sp: &SplitLie) -> Vec<Vector> {
    let field = sp.field();
    let l = &sp.lie;
    let k = l.dim();
    let mut m: Vec<Vector> = sp.h.clone();
    for _ in 0..=sp.h.len() {
        if m.is_empty() {
            break;
        }
        let ech = span(field, m.iter().map(|v| dense_to_sparse(v)));
        // columns: for each basis vector of 𝔪, its brackets with all e_j modulo 𝔪
        let columns: Vec<Vector> = m
            .iter()
            .map(|v| {
                let mut col = Vec::new();
                for j in 0..k {
                    let (rem, _) = ech.reduce(&dense_to_sparse(&l.mul(&l.basis(j), v)));
                    col.extend(sparse_to_dense(field, &rem, k));
                }
                col
            })
            .collect();
        let kernel = kernel_dense(field, &columns);
        if kernel.len() == m.len() {
            return m;
        }
        m = kernel
            .iter()
            .map(|c| c.iter().zip(&m).fold(alloc::vec![field.zero(); k], |acc, (x, v)| add_vec(&acc, &scale_vec(x, v))))
            .collect();
    }
    m
}

/// `𝔩/𝔪 = 𝔥/𝔪 ⊕ 𝔰` for the largest ideal `𝔪 ⊆ 𝔥`.
pub fn standard_envelope(sp: &SplitLie) -> Result<SplitLie> {
    let field = sp.field();
    let l = &sp.lie;
    let k = l.dim();
    let m = largest_ideal_in_h(sp);
    if m.is_empty() {
        return Ok(sp.clone());
    }
    // complement of 𝔪 inside 𝔥, in 𝔥-coordinates
    let mut ech = Echelon::new(field);
    for v in &m {
        ech.push(&dense_to_sparse(&sp.h_coords(v)));
    }
    let mut h_rep = Vec::new();
    for (i, hv) in sp.h.iter().enumerate() {
        let mut e = SparseVec::new();
        e.insert(i, field.one());
        if ech.push(&e) {
            h_rep.push(hv.clone());
        }
    }
    // quotient basis: h_rep ++ s; coordinates modulo 𝔪
    let reps: Vec<Vector> = h_rep.iter().chain(&sp.s).cloned().collect();
    let q = reps.len();
    let mut full = Echelon::new(field);
    for v in reps.iter().chain(&m) {
        full.push(&dense_to_sparse(v));
    }
    let quotient_coords = |v: &Vector| -> Vector {
        let sol = full.solve(&dense_to_sparse(v)).expect("spans 𝔩");
        let mut out = alloc::vec![field.zero(); q];
        for (i, c) in sol {
            if i < q {
                out[i] = c;
            }
        }
        out
    };
    let table: Vec<Vec<Vector>> = reps.iter().map(|a| reps.iter().map(|b| quotient_coords(&l.mul(a, b))).collect()).collect();
    let ql = StructureConstants::new(field, table, None)?;
    let hq = h_rep.len();
    let basis = |i: usize| -> Vector {
        let mut v = alloc::vec![field.zero(); q];
        v[i] = field.one();
        v
    };
    let out = SplitLie::new(ql, (0..hq).map(basis).collect(), (hq..q).map(basis).collect())?;
    if !largest_ideal_in_h(&out).is_empty() {
        return Err(Error::Inconsistent("quotient still has an ideal inside 𝔥".to_string()));
    }
    let _ = k;
    Ok(out)
}
