//! The multiplication Hopf algebra of the truncated free algebra: formal
//! products of left and right multiplications by words, their action,
//! coproduct and antipode, the projection onto operators fixing 1, and the
//! primitive operators.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::combinat::compositions;
use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::linalg::{add_term, axpy, relations, same_subspace, span, subspace_of, Echelon, SparseVec};
use crate::scalar::{write_signed_terms, Field, Scalar};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `L_w` or `R_w` for a nonunit word `w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub side: Side,
    pub word: Word,
}

impl Sym {
    pub fn left(word: Word) -> Self {
        Sym { side: Side::Left, word }
    }

    pub fn right(word: Word) -> Self {
        Sym { side: Side::Right, word }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == Side::Left { 'L' } else { 'R' };
        write!(f, "{s}[{}]", self.word)
    }
}

type Mono = Vec<Sym>;

fn mono_degree(m: &[Sym]) -> u32 {
    m.iter().map(|s| s.word.degree()).sum()
}

/// A combination of operator words; monomials of degree above the
/// truncation act as zero on the truncated algebra and are dropped.
#[derive(Clone, PartialEq, Eq)]
pub struct MltElement {
    field: Field,
    trunc: u32,
    terms: BTreeMap<Mono, Scalar>,
}

impl MltElement {
    pub fn zero(field: Field, trunc: u32) -> Self {
        MltElement { field, trunc, terms: BTreeMap::new() }
    }

    pub fn one(field: Field, trunc: u32) -> Self {
        Self::monomial(field, trunc, Vec::new())
    }

    pub fn monomial(field: Field, trunc: u32, syms: Vec<Sym>) -> Self {
        let mut e = Self::zero(field, trunc);
        e.add_term(syms, &field.one());
        e
    }

    pub fn sym(field: Field, trunc: u32, s: Sym) -> Self {
        Self::monomial(field, trunc, alloc::vec![s])
    }

    /// `L_e` (or `R_e`) extended linearly, with `L_1 = 1`.
    pub fn mult_by(side: Side, e: &FreeElement) -> Self {
        let mut out = Self::zero(e.field(), e.trunc());
        for (w, c) in e.terms() {
            let m = if w.is_unit() { Vec::new() } else { alloc::vec![Sym { side, word: w.clone() }] };
            out.add_term(m, c);
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Sym>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn counit(&self) -> Scalar {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Mono, c: &Scalar) {
        if mono_degree(&m) <= self.trunc {
            add_term(&mut self.terms, m, c);
        }
    }

    pub fn axpy(&mut self, c: &Scalar, o: &MltElement) {
        for (m, x) in &o.terms {
            self.add_term(m.clone(), &(c * x));
        }
    }

    pub fn add(&self, o: &MltElement) -> MltElement {
        let mut out = self.clone();
        out.axpy(&self.field.one(), o);
        out
    }

    pub fn sub(&self, o: &MltElement) -> MltElement {
        let mut out = self.clone();
        out.axpy(&-self.field.one(), o);
        out
    }

    pub fn scale(&self, c: &Scalar) -> MltElement {
        let mut out = Self::zero(self.field, self.trunc);
        out.axpy(c, self);
        out
    }

    /// Composition: `(fg)(z) = f(g(z))`.
    pub fn mul(&self, o: &MltElement) -> MltElement {
        let mut out = Self::zero(self.field, self.trunc.min(o.trunc));
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if mono_degree(a) + mono_degree(b) > out.trunc {
                    continue;
                }
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, &(x * y));
            }
        }
        out
    }

    /// Applies the operator; the rightmost symbol acts first.
    pub fn act(&self, z: &FreeElement) -> Result<FreeElement> {
        if z.trunc() != self.trunc {
            return Err(Error::TruncationMismatch(self.trunc as usize, z.trunc() as usize));
        }
        let mut out = FreeElement::zero(self.field, self.trunc);
        for (m, c) in &self.terms {
            let mut v = z.clone();
            for s in m.iter().rev() {
                let w = FreeElement::word(self.field, self.trunc, s.word.clone());
                v = match s.side {
                    Side::Left => w.checked_mul(&v)?,
                    Side::Right => v.checked_mul(&w)?,
                };
                if v.is_zero() {
                    break;
                }
            }
            out.axpy(c, &v);
        }
        Ok(out)
    }

    /// `Δ`, multiplicative with `Δ(L_w) = Σ L_{w₍₁₎} ⊗ L_{w₍₂₎}`.
    pub fn coproduct(&self) -> MltTensor {
        let mut out = MltTensor::new();
        for (m, c) in &self.terms {
            let mut acc: MltTensor = BTreeMap::new();
            acc.insert((Vec::new(), Vec::new()), self.field.one());
            for s in m {
                let sc = sym_coproduct(self.field, self.trunc, s);
                let mut next = MltTensor::new();
                for ((a, b), x) in &acc {
                    for ((u, v), y) in &sc {
                        let (mut a2, mut b2) = (a.clone(), b.clone());
                        a2.extend(u.iter().cloned());
                        b2.extend(v.iter().cloned());
                        add_term(&mut next, (a2, b2), &(x * y));
                    }
                }
                acc = next;
            }
            axpy(&mut out, c, &acc);
        }
        out
    }

    /// `Δ(f) − f⊗1 − 1⊗f + ε(f)1⊗1`.
    pub fn reduced_coproduct(&self) -> MltTensor {
        let mut t = self.coproduct();
        for (m, c) in &self.terms {
            add_term(&mut t, (m.clone(), Vec::new()), &-c);
            add_term(&mut t, (Vec::new(), m.clone()), &-c);
        }
        let e = self.counit();
        if !e.is_zero() {
            add_term(&mut t, (Vec::new(), Vec::new()), &e);
        }
        t
    }

    pub fn is_primitive(&self) -> bool {
        self.counit().is_zero() && self.reduced_coproduct().is_empty()
    }

    /// Extensional comparison on every word of degree `≤ trunc` in `gens`
    /// generators, including 1.
    pub fn agrees_with(&self, o: &MltElement, gens: u32) -> Result<bool> {
        for d in 0..=self.trunc {
            let words = if d == 0 { alloc::vec![Word::Unit] } else { Word::all_of_degree(gens, d) };
            for w in words {
                let z = FreeElement::word(self.field, self.trunc, w);
                if self.act(&z)? != o.act(&z)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn sym_coproduct(field: Field, trunc: u32, s: &Sym) -> MltTensor {
    let mut out = MltTensor::new();
    for ((u, v), c) in FreeElement::word(field, trunc, s.word.clone()).coproduct().terms() {
        let wrap = |w: &Word| if w.is_unit() { Vec::new() } else { alloc::vec![Sym { side: s.side, word: w.clone() }] };
        add_term(&mut out, (wrap(u), wrap(v)), c);
    }
    out
}

/// Sums of `f₍₁₎ ⊗ f₍₂₎`.
pub type MltTensor = BTreeMap<(Vec<Sym>, Vec<Sym>), Scalar>;

impl fmt::Display for MltElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct M<'a>(&'a [Sym]);
        impl fmt::Display for M<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_empty() {
                    return write!(f, "1");
                }
                for (i, s) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write_signed_terms(f, self.terms.iter().map(|(m, c)| (c.clone(), M(m))))
    }
}

impl fmt::Debug for MltElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses a product of symbols such as `R[x1] L[(x1 x2)]`, or `1`.
pub fn parse_operator(field: Field, trunc: u32, s: &str) -> Result<MltElement> {
    let s = s.trim();
    if s == "1" {
        return Ok(MltElement::one(field, trunc));
    }
    let mut syms = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let side = match rest.as_bytes()[0] {
            b'L' => Side::Left,
            b'R' => Side::Right,
            _ => return Err(Error::Parse(alloc::format!("expected L[..] or R[..] at '{rest}'"))),
        };
        let body = rest[1..].strip_prefix('[').ok_or_else(|| Error::Parse("expected '['".to_string()))?;
        let mut depth = 0i32;
        let close = body
            .char_indices()
            .find(|&(_, c)| {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                c == ']' && depth == 0
            })
            .map(|(i, _)| i)
            .ok_or_else(|| Error::Parse("unclosed '['".to_string()))?;
        let word = Word::parse(&body[..close])?;
        if !word.is_unit() {
            syms.push(Sym { side, word });
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(MltElement::monomial(field, trunc, syms))
}

/// The antipode, computed as the convolution inverse of the identity on
/// symbols and extended as an antihomomorphism.
#[derive(Clone, Debug)]
pub struct Antipode {
    field: Field,
    trunc: u32,
    memo: BTreeMap<Sym, MltElement>,
}

impl Antipode {
    pub fn new(field: Field, trunc: u32) -> Self {
        Antipode { field, trunc, memo: BTreeMap::new() }
    }

    /// `S(s) = −s − Σ' S(s₍₁₎) s₍₂₎` over the proper splittings.
    pub fn of_sym(&mut self, s: &Sym) -> MltElement {
        if let Some(v) = self.memo.get(s) {
            return v.clone();
        }
        let mut out = MltElement::sym(self.field, self.trunc, s.clone()).scale(&-self.field.one());
        for ((a, b), c) in sym_coproduct(self.field, self.trunc, s) {
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let sa = self.of_sym(&a[0]);
            let prod = sa.mul(&MltElement::monomial(self.field, self.trunc, b));
            out.axpy(&-c, &prod);
        }
        self.memo.insert(s.clone(), out.clone());
        out
    }

    pub fn apply(&mut self, f: &MltElement) -> MltElement {
        let mut out = MltElement::zero(self.field, self.trunc);
        for (m, c) in &f.terms {
            let mut acc = MltElement::one(self.field, self.trunc);
            for s in m {
                acc = self.of_sym(s).mul(&acc);
            }
            out.axpy(c, &acc);
        }
        out
    }
}

/// `π⁺(f) = Σ S(M_{f₍₁₎(1)}) f₍₂₎` with `M = L` or `R`.
pub fn pi_plus(side: Side, f: &MltElement, anti: &mut Antipode) -> Result<MltElement> {
    let (field, trunc) = (f.field, f.trunc);
    let one = FreeElement::one(field, trunc);
    let mut out = MltElement::zero(field, trunc);
    let mut grouped: BTreeMap<Mono, MltElement> = BTreeMap::new();
    for ((a, b), c) in f.coproduct() {
        let entry = grouped.entry(a).or_insert_with(|| MltElement::zero(field, trunc));
        entry.add_term(b, &c);
    }
    for (a, rest) in grouped {
        let value = MltElement::monomial(field, trunc, a).act(&one)?;
        let s = anti.apply(&MltElement::mult_by(side, &value));
        out = out.add(&s.mul(&rest));
    }
    Ok(out)
}

pub fn pi_plus_left(f: &MltElement, anti: &mut Antipode) -> Result<MltElement> {
    pi_plus(Side::Left, f, anti)
}

pub fn pi_plus_right(f: &MltElement, anti: &mut Antipode) -> Result<MltElement> {
    pi_plus(Side::Right, f, anti)
}

/// Membership in the operators fixed by the left projection.
pub fn in_mlt_plus(f: &MltElement, anti: &mut Antipode) -> Result<bool> {
    Ok(pi_plus_left(f, anti)? == *f)
}

/// `f = Σ L_{f₍₁₎(1)} π⁺(f₍₂₎)`: the pairs `(f₍₁₎(1), π⁺(f₍₂₎))`.
pub fn decompose_left(f: &MltElement, anti: &mut Antipode) -> Result<Vec<(FreeElement, MltElement)>> {
    let (field, trunc) = (f.field, f.trunc);
    let one = FreeElement::one(field, trunc);
    let mut grouped: BTreeMap<Mono, MltElement> = BTreeMap::new();
    for ((a, b), c) in f.coproduct() {
        let entry = grouped.entry(b).or_insert_with(|| MltElement::zero(field, trunc));
        entry.add_term(a, &c);
    }
    let mut out = Vec::new();
    for (b, left) in grouped {
        let value = left.act(&one)?;
        if value.is_zero() {
            continue;
        }
        let plus = pi_plus_left(&MltElement::monomial(field, trunc, b), anti)?;
        if !plus.is_zero() {
            out.push((value, plus));
        }
    }
    Ok(out)
}

pub fn reassemble_left(field: Field, trunc: u32, parts: &[(FreeElement, MltElement)]) -> MltElement {
    let mut out = MltElement::zero(field, trunc);
    for (v, p) in parts {
        out = out.add(&MltElement::mult_by(Side::Left, v).mul(p));
    }
    out
}

/// Operator monomials of degree `n` over words in `gens` generators.
pub fn monomials_of_degree(gens: u32, n: u32) -> Vec<Vec<Sym>> {
    let syms: Vec<Vec<Sym>> = (0..=n)
        .map(|d| {
            if d == 0 {
                return Vec::new();
            }
            let words = Word::all_of_degree(gens, d);
            let mut v: Vec<Sym> = words.iter().cloned().map(Sym::left).collect();
            v.extend(words.into_iter().map(Sym::right));
            v
        })
        .collect();
    let mut out = Vec::new();
    for parts in 1..=n as usize {
        for comp in compositions(n as usize, parts) {
            let mut acc: Vec<Vec<Sym>> = alloc::vec![Vec::new()];
            for &d in &comp {
                let mut next = Vec::new();
                for m in &acc {
                    for s in &syms[d] {
                        let mut m2 = m.clone();
                        m2.push(s.clone());
                        next.push(m2);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
    }
    out
}

/// A basis of the primitive operators of degree `n`.
pub fn primitive_operators(field: Field, gens: u32, n: u32, trunc: u32) -> Vec<MltElement> {
    let monos = monomials_of_degree(gens, n);
    let images: Vec<SparseVec<(Vec<Sym>, Vec<Sym>)>> =
        monos.iter().map(|m| MltElement::monomial(field, trunc, m.clone()).reduced_coproduct()).collect();
    relations(field, &images)
        .into_iter()
        .map(|combo| {
            let mut e = MltElement::zero(field, trunc);
            for (i, c) in combo {
                e.add_term(monos[i].clone(), &c);
            }
            e
        })
        .collect()
}

/// A basis of the primitive elements of degree `n` of the free algebra.
pub fn primitive_elements(field: Field, gens: u32, n: u32, trunc: u32) -> Vec<FreeElement> {
    let words = Word::all_of_degree(gens, n);
    let images: Vec<SparseVec<(Word, Word)>> =
        words.iter().map(|w| FreeElement::word(field, trunc, w.clone()).reduced_coproduct().terms().clone()).collect();
    relations(field, &images)
        .into_iter()
        .map(|combo| FreeElement::from_sparse(field, trunc, combo.into_iter().map(|(i, c)| (words[i].clone(), c)).collect()))
        .collect()
}

fn op_key(m: &MltElement) -> SparseVec<Vec<Sym>> {
    m.terms.clone()
}

/// Dimensions in one degree of `PMlt = L_Prim ⊕ PMlt⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCount {
    pub degree: u32,
    pub primitive_operators: usize,
    pub left_primitives: usize,
    pub plus_part: usize,
    /// Rank of the union of both parts.
    pub joint_rank: usize,
    /// Every projected primitive is again primitive.
    pub projections_primitive: bool,
}

impl SplitCount {
    pub fn holds(&self) -> bool {
        self.projections_primitive
            && self.left_primitives + self.plus_part == self.primitive_operators
            && self.joint_rank == self.primitive_operators
    }
}

pub fn primitive_split(field: Field, gens: u32, n: u32, anti: &mut Antipode) -> Result<SplitCount> {
    let trunc = anti.trunc;
    let prim = primitive_operators(field, gens, n, trunc);
    let lefts: Vec<MltElement> =
        primitive_elements(field, gens, n, trunc).iter().map(|p| MltElement::mult_by(Side::Left, p)).collect();
    let mut plus = Vec::new();
    for p in &prim {
        plus.push(pi_plus_left(p, anti)?);
    }
    let plus_rank = span(field, plus.iter().map(op_key)).rank();
    let joint = span(field, lefts.iter().chain(&plus).map(op_key)).rank();
    let all_prim = span(field, prim.iter().map(op_key));
    let lp = span(field, lefts.iter().map(op_key));
    let pp = span(field, plus.iter().map(op_key));
    Ok(SplitCount {
        degree: n,
        primitive_operators: prim.len(),
        left_primitives: lefts.len(),
        plus_part: plus_rank,
        joint_rank: joint,
        projections_primitive: plus.iter().all(|p| p.is_primitive())
            && subspace_of(&lp, &all_prim)
            && subspace_of(&pp, &all_prim),
    })
}

/// Outcome of the spanning check for one filtration level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub level: u32,
    pub trunc: u32,
    /// `(degree, rank from ≥ m operators, rank from operators of total
    /// degree ≥ m, primitive dimension)`.
    pub per_degree: Vec<(u32, usize, usize, usize)>,
    /// Products of at least `m` operators span the level.
    pub spans_by_count: bool,
    /// Products of total operator degree at least `m` span the level.
    pub spans_by_degree: bool,
}

/// Applies homogeneous primitive operators from `PMlt⁺` to generators and
/// compares the span with the primitives of degrees `m+1..=trunc`, once
/// counting operators and once counting their total degree.
pub fn sab_generation_check(field: Field, gens: u32, m: u32, trunc: u32) -> Result<GenerationReport> {
    if m + 1 > trunc {
        return Err(Error::InvalidInput(alloc::format!("truncation {trunc} too small for level {}", m + 1)));
    }
    let mut anti = Antipode::new(field, trunc);
    let mut plus: Vec<MltElement> = Vec::new();
    for n in 1..trunc {
        let basis: Vec<MltElement> = primitive_operators(field, gens, n, trunc)
            .iter()
            .map(|p| pi_plus_left(p, &mut anti))
            .collect::<Result<_>>()?;
        let mut ech = Echelon::new(field);
        for b in basis {
            if ech.push(&op_key(&b)) {
                plus.push(b);
            }
        }
    }
    // homogeneous results tagged with the number of operators applied
    let mut level: Vec<FreeElement> = (0..gens).map(|g| FreeElement::gen(field, trunc, g)).collect();
    let mut tagged: Vec<(u32, FreeElement)> = level.iter().map(|v| (0, v.clone())).collect();
    for j in 1..trunc {
        let mut ech = Echelon::new(field);
        let mut next = Vec::new();
        for f in &plus {
            for v in &level {
                let w = f.act(v)?;
                if ech.push(&w.as_sparse()) {
                    next.push(w);
                }
            }
        }
        tagged.extend(next.iter().map(|v| (j, v.clone())));
        level = next;
        if level.is_empty() {
            break;
        }
    }
    let degree = |v: &FreeElement| v.max_degree().unwrap_or(0);
    let by_count = span(field, tagged.iter().filter(|(j, _)| *j >= m).map(|(_, v)| v.as_sparse()));
    let by_degree = span(field, tagged.iter().filter(|(_, v)| degree(v) > m).map(|(_, v)| v.as_sparse()));
    let mut expected = Echelon::new(field);
    let mut per_degree = Vec::new();
    for n in m + 1..=trunc {
        let prims = primitive_elements(field, gens, n, trunc);
        for p in &prims {
            expected.push(&p.as_sparse());
        }
        let rank = |pred: &dyn Fn(&(u32, FreeElement)) -> bool| {
            span(field, tagged.iter().filter(|t| degree(&t.1) == n && pred(t)).map(|(_, v)| v.as_sparse())).rank()
        };
        per_degree.push((n, rank(&|t| t.0 >= m), rank(&|_| true), prims.len()));
    }
    Ok(GenerationReport {
        level: m + 1,
        trunc,
        per_degree,
        spans_by_count: same_subspace(&by_count, &expected),
        spans_by_degree: same_subspace(&by_degree, &expected),
    })
}
