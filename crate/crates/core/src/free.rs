//! The degree-truncated free unital non-associative algebra and its Hopf
//! structure (primitive generators, multiplicative coproduct).

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{add_term, SparseVec};
use crate::scalar::{write_signed_terms, Field, Scalar};
use crate::word::Word;

/// A finite combination of words, working modulo words of degree > `trunc`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeElement {
    field: Field,
    trunc: u32,
    terms: BTreeMap<Word, Scalar>,
}

impl FreeElement {
    pub fn zero(field: Field, trunc: u32) -> Self {
        FreeElement { field, trunc, terms: BTreeMap::new() }
    }

    pub fn one(field: Field, trunc: u32) -> Self {
        Self::word(field, trunc, Word::Unit)
    }

    pub fn gen(field: Field, trunc: u32, g: u32) -> Self {
        Self::word(field, trunc, Word::Gen(g))
    }

    pub fn word(field: Field, trunc: u32, w: Word) -> Self {
        Self::term(field, trunc, w, field.one())
    }

    pub fn term(field: Field, trunc: u32, w: Word, c: Scalar) -> Self {
        let mut e = Self::zero(field, trunc);
        e.add_term(w, &c);
        e
    }

    pub fn scalar(field: Field, trunc: u32, c: Scalar) -> Self {
        Self::term(field, trunc, Word::Unit, c)
    }

    /// Builds an element from raw terms, dropping zeros and words above the truncation.
    pub fn from_terms(field: Field, trunc: u32, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self> {
        let mut e = Self::zero(field, trunc);
        for (w, c) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            e.add_term(w, &c);
        }
        Ok(e)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient of the unit word.
    pub fn counit(&self) -> Scalar {
        self.coeff(&Word::Unit)
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if w.degree() <= self.trunc {
            add_term(&mut self.terms, w, c);
        }
    }

    /// Same element viewed at another truncation (explicit, never implicit).
    pub fn with_trunc(&self, trunc: u32) -> Self {
        FreeElement {
            field: self.field,
            trunc,
            terms: self.terms.iter().filter(|(w, _)| w.degree() <= trunc).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// The part of exact degree `n`.
    pub fn homogeneous(&self, n: u32) -> Self {
        FreeElement {
            field: self.field,
            trunc: self.trunc,
            terms: self.terms.iter().filter(|(w, _)| w.degree() == n).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Word::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Word::degree)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut e = Self::zero(self.field, self.trunc);
        if !c.is_zero() {
            e.terms = self.terms.iter().map(|(w, x)| (w.clone(), c * x)).collect();
        }
        e
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        if self.trunc != o.trunc {
            return Err(Error::TruncationMismatch(self.trunc as usize, o.trunc as usize));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut e = self.clone();
        for (w, c) in &o.terms {
            add_term(&mut e.terms, w.clone(), c);
        }
        Ok(e)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&-o)
    }

    /// Product of words by pairing, truncated.
    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut e = Self::zero(self.field, self.trunc);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                if u.degree() + v.degree() <= self.trunc {
                    add_term(&mut e.terms, Word::mul(u, v), &(a * b));
                }
            }
        }
        Ok(e)
    }

    /// In-place `self += c·o`.
    pub fn axpy(&mut self, c: &Scalar, o: &Self) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &o.terms {
            add_term(&mut self.terms, w.clone(), &(c * x));
        }
    }

    /// Left-normed power `((ee)e)…`, `e⁰ = 1`.
    pub fn left_power(&self, n: u32) -> Self {
        let mut acc = Self::one(self.field, self.trunc);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Left-normed product of a sequence (the empty product is 1).
    pub fn left_normed(field: Field, trunc: u32, factors: &[&FreeElement]) -> Self {
        factors.iter().fold(Self::one(field, trunc), |acc, f| &acc * *f)
    }

    pub fn coproduct(&self) -> Tensor {
        let mut t = Tensor::zero(self.field, self.trunc);
        for (w, c) in &self.terms {
            let n = w.degree();
            let full = (1u64 << n) - 1;
            for mask in 0..=full {
                add_term(&mut t.terms, (w.restrict(mask), w.restrict(full & !mask)), c);
            }
        }
        t
    }

    /// `Δ(e) - e⊗1 - 1⊗e`, computed without materializing the trivial splits.
    pub fn reduced_coproduct(&self) -> Tensor {
        let mut t = Tensor::zero(self.field, self.trunc);
        for (w, c) in &self.terms {
            let n = w.degree();
            if n == 0 {
                add_term(&mut t.terms, (Word::Unit, Word::Unit), &-c);
                continue;
            }
            let full = (1u64 << n) - 1;
            for mask in 1..full {
                add_term(&mut t.terms, (w.restrict(mask), w.restrict(full & !mask)), c);
            }
        }
        t
    }

    pub fn is_primitive(&self) -> bool {
        self.reduced_coproduct().is_zero()
    }

    /// `Δ(e) = e⊗e` up to total degree `trunc`, and counit 1.
    pub fn is_grouplike(&self) -> bool {
        if !self.counit().is_one() {
            return false;
        }
        let mut diff = self.coproduct().terms;
        for (u, a) in &self.terms {
            for (v, b) in &self.terms {
                if u.degree() + v.degree() <= self.trunc {
                    add_term(&mut diff, (u.clone(), v.clone()), &-(a * b));
                }
            }
        }
        diff.is_empty()
    }

    /// Least `i` such that `e - ε(e)` is a sum of products of at most `i`
    /// primitives; decided by the vanishing of the `(i+1)`-fold reduced
    /// coproduct.
    pub fn coradical_degree(&self) -> Result<u32> {
        let mut e = self.clone();
        e.terms.remove(&Word::Unit);
        if e.is_zero() {
            return Ok(0);
        }
        let top = e.max_degree().unwrap();
        for i in 1..=top {
            if iterated_reduced_coproduct(&e, i + 1).is_empty() {
                return Ok(i);
            }
        }
        // a word of degree n cannot split into more than n nonempty blocks
        Err(Error::Inconsistent("coradical degree exceeds degree".to_string()))
    }

    /// Algebra map sending generator `g` to `images[g]`, computed into the
    /// truncation of the images.
    pub fn substitute(&self, images: &[FreeElement]) -> Result<FreeElement> {
        let first = images.first().ok_or(Error::UnassignedGenerator(0))?;
        let (field, trunc) = (first.field, first.trunc);
        for im in images {
            first.compatible(im)?;
        }
        if field != self.field {
            return Err(Error::FieldMismatch(self.field, field));
        }
        let mut memo = BTreeMap::new();
        let mut out = FreeElement::zero(field, trunc);
        for (w, c) in &self.terms {
            let im = substitute_word(w, images, &mut memo)?;
            out.axpy(c, &im);
        }
        Ok(out)
    }

    /// Coordinates in a fixed list of words (for linear algebra).
    pub fn as_sparse(&self) -> SparseVec<Word> {
        self.terms.clone()
    }

    pub fn from_sparse(field: Field, trunc: u32, v: SparseVec<Word>) -> Self {
        let mut e = Self::zero(field, trunc);
        for (w, c) in v {
            e.add_term(w, &c);
        }
        e
    }

    /// Largest generator index occurring, plus one.
    pub fn generator_count(&self) -> u32 {
        self.terms.keys().filter_map(Word::max_generator).max().map_or(0, |g| g + 1)
    }
}

fn substitute_word(w: &Word, images: &[FreeElement], memo: &mut BTreeMap<Word, FreeElement>) -> Result<FreeElement> {
    if let Some(e) = memo.get(w) {
        return Ok(e.clone());
    }
    let out = match w {
        Word::Unit => FreeElement::one(images[0].field, images[0].trunc),
        Word::Gen(g) => images.get(*g as usize).cloned().ok_or(Error::UnassignedGenerator(*g))?,
        Word::Pair(p, _) => {
            let l = substitute_word(&p.0, images, memo)?;
            let r = substitute_word(&p.1, images, memo)?;
            &l * &r
        }
    };
    memo.insert(w.clone(), out.clone());
    Ok(out)
}

/// The `k`-fold reduced coproduct: a sum over ordered partitions of the
/// leaves into `k` nonempty blocks.
pub fn iterated_reduced_coproduct(e: &FreeElement, k: u32) -> SparseVec<Vec<Word>> {
    let mut out = SparseVec::new();
    for (w, c) in e.terms() {
        let n = w.degree();
        if n < k {
            continue;
        }
        let full = (1u64 << n) - 1;
        let mut blocks = Vec::with_capacity(k as usize);
        ordered_partitions(full, k, &mut blocks, &mut |bs: &[u64]| {
            let key: Vec<Word> = bs.iter().map(|&m| w.restrict(m)).collect();
            add_term(&mut out, key, c);
        });
    }
    out
}

fn ordered_partitions(rest: u64, k: u32, blocks: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if k == 1 {
        if rest != 0 {
            blocks.push(rest);
            f(blocks);
            blocks.pop();
        }
        return;
    }
    if (rest.count_ones()) < k {
        return;
    }
    let mut sub = rest;
    while sub > 0 {
        if sub != rest {
            blocks.push(sub);
            ordered_partitions(rest & !sub, k - 1, blocks, f);
            blocks.pop();
        }
        sub = (sub - 1) & rest;
    }
}

impl<'a> Add<&'a FreeElement> for &'a FreeElement {
    type Output = FreeElement;
    fn add(self, o: &FreeElement) -> FreeElement {
        self.checked_add(o).expect("free element mismatch")
    }
}

impl<'a> Sub<&'a FreeElement> for &'a FreeElement {
    type Output = FreeElement;
    fn sub(self, o: &FreeElement) -> FreeElement {
        self.checked_sub(o).expect("free element mismatch")
    }
}

impl<'a> Mul<&'a FreeElement> for &'a FreeElement {
    type Output = FreeElement;
    fn mul(self, o: &FreeElement) -> FreeElement {
        self.checked_mul(o).expect("free element mismatch")
    }
}

impl Neg for &FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        self.scale(&-self.field.one())
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(f, self.terms.iter().map(|(w, c)| (c.clone(), w)))
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} | d={}] {}", self.field, self.trunc, self)
    }
}

/// Elements of the tensor square, keyed by word pairs (the unit word is 1).
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    field: Field,
    trunc: u32,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl Tensor {
    pub fn zero(field: Field, trunc: u32) -> Self {
        Tensor { field, trunc, terms: BTreeMap::new() }
    }

    /// `a ⊗ b`, dropping pairs above the truncation.
    pub fn product(a: &FreeElement, b: &FreeElement) -> Self {
        let mut t = Self::zero(a.field, a.trunc);
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                if u.degree() + v.degree() <= a.trunc {
                    add_term(&mut t.terms, (u.clone(), v.clone()), &(x * y));
                }
            }
        }
        t
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.terms
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, u: &Word, v: &Word) -> Scalar {
        self.terms.get(&(u.clone(), v.clone())).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn checked_add(&self, o: &Tensor) -> Result<Tensor> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        if self.trunc != o.trunc {
            return Err(Error::TruncationMismatch(self.trunc as usize, o.trunc as usize));
        }
        let mut t = self.clone();
        for (k, c) in &o.terms {
            add_term(&mut t.terms, k.clone(), c);
        }
        Ok(t)
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac⊗bd`, truncated by total degree.
    pub fn checked_mul(&self, o: &Tensor) -> Result<Tensor> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        let mut t = Self::zero(self.field, self.trunc);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &o.terms {
                if a.degree() + b.degree() + c.degree() + d.degree() <= self.trunc {
                    add_term(&mut t.terms, (Word::mul(a, c), Word::mul(b, d)), &(x * y));
                }
            }
        }
        Ok(t)
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut t = Self::zero(self.field, self.trunc);
        for (k, x) in &self.terms {
            add_term(&mut t.terms, k.clone(), &(c * x));
        }
        t
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct Pair<'a>(&'a Word, &'a Word);
        impl fmt::Display for Pair<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}⊗{}", self.0, self.1)
            }
        }
        write_signed_terms(f, self.terms.iter().map(|((a, b), c)| (c.clone(), Pair(a, b))))
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the canonical text form `c1*w1 + c2*w2 - w3`.
pub fn parse_element(field: Field, trunc: u32, s: &str) -> Result<FreeElement> {
    let mut e = FreeElement::zero(field, trunc);
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(e);
    }
    // split on top-level + and - (outside parentheses)
    let mut depth = 0i32;
    let mut start = 0;
    let mut pieces = Vec::new();
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                let prev = s[..i].trim_end();
                if !prev.ends_with('*') && !prev.ends_with('/') {
                    pieces.push(&s[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    pieces.push(&s[start..]);
    for piece in pieces {
        let p = piece.trim();
        let (neg, body) = match p.as_bytes().first() {
            Some(b'-') => (true, p[1..].trim()),
            Some(b'+') => (false, p[1..].trim()),
            _ => (false, p),
        };
        let (coef, word) = match body.rfind('*') {
            Some(i) => (field.parse(&body[..i])?, Word::parse(&body[i + 1..])?),
            None if body.starts_with('(') || body.starts_with('x') => (field.one(), Word::parse(body)?),
            None => (field.parse(body)?, Word::Unit),
        };
        let coef = if neg { -coef } else { coef };
        e.add_term(word, &coef);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use alloc::string::ToString;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn product_and_truncation() {
        let x = FreeElement::gen(q(), 2, 0);
        let y = FreeElement::gen(q(), 2, 1);
        assert_eq!((&x * &y).to_string(), "(x1 x2)");
        assert_eq!((&(&x + &y) * &x).to_string(), "(x1 x1) + (x2 x1)");
        assert!((&(&x * &x) * &x).is_zero());
        assert!(x.checked_mul(&FreeElement::gen(q(), 3, 0)).is_err());
    }

    #[test]
    fn coproduct_of_product() {
        let x = FreeElement::gen(q(), 3, 0);
        let y = FreeElement::gen(q(), 3, 1);
        let xy = &x * &y;
        let d = xy.coproduct();
        assert_eq!(d.terms().len(), 4);
        let w = Word::parse("(x1 x2)").unwrap();
        assert!(d.coeff(&w, &Word::Unit).is_one());
        assert!(d.coeff(&Word::gen(0), &Word::gen(1)).is_one());
        assert!(d.coeff(&Word::gen(1), &Word::gen(0)).is_one());
        assert!(!xy.is_primitive());
        assert!((&x - &y).is_primitive());
        assert!((&xy - &(&y * &x)).is_primitive());
        assert_eq!(FreeElement::one(q(), 3).coproduct().terms().len(), 1);
    }

    #[test]
    fn coradical_degrees() {
        let x = FreeElement::gen(q(), 4, 0);
        let y = FreeElement::gen(q(), 4, 1);
        assert_eq!(x.coradical_degree().unwrap(), 1);
        assert_eq!((&x * &y).coradical_degree().unwrap(), 2);
        assert_eq!(FreeElement::one(q(), 4).coradical_degree().unwrap(), 0);
        assert_eq!((&(&x * &y) * &x).coradical_degree().unwrap(), 3);
    }

    #[test]
    fn text_round_trip() {
        let e = parse_element(q(), 3, "1/2*(x1 x2) - (x2 x1) + 3 - x1").unwrap();
        assert_eq!(e.to_string(), "3 - x1 + 1/2*(x1 x2) - (x2 x1)");
        assert_eq!(parse_element(q(), 3, &e.to_string()).unwrap(), e);
    }
}
