//! Sparse polynomials in coordinate variables tagged by argument slot, and
//! polynomial maps between coordinate spaces.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::add_term;
use crate::scalar::{write_signed_terms, Field, Scalar};
use crate::table::Coefficient;

/// Coordinate `coord` of argument `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub slot: u8,
    pub coord: u16,
}

/// Sorted `(variable, exponent)` pairs; the empty monomial is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub Vec<(Var, u32)>);

const SLOT_NAMES: [&str; 8] = ["x", "y", "z", "u", "v", "w", "s", "t"];

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(alloc::vec![(v, 1)])
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            let (a, b) = (self.0[i], o.0[j]);
            match a.0.cmp(&b.0) {
                core::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1
                }
                core::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1
                }
                core::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// Sum of coordinate weights with multiplicity.
    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|(v, e)| weights[v.coord as usize] * e).sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Bitmask of the argument slots occurring.
    pub fn slots(&self) -> u32 {
        self.0.iter().fold(0, |m, (v, _)| m | 1 << v.slot)
    }

    /// Minimum coordinate weight among the variables of `slot`.
    pub fn min_weight_in_slot(&self, slot: u8, weights: &[u32]) -> Option<u32> {
        self.0.iter().filter(|(v, _)| v.slot == slot).map(|(v, _)| weights[v.coord as usize]).min()
    }

    pub fn parse(s: &str) -> Result<Monomial> {
        let s = s.trim();
        let mut m = Monomial::one();
        if s == "1" || s.is_empty() {
            return Ok(m);
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| Error::Parse(alloc::format!("bad exponent in `{factor}`")))?),
                None => (factor, 1),
            };
            let split = base.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(alloc::format!("bad variable `{base}`")))?;
            let (name, idx) = base.split_at(split);
            let slot = SLOT_NAMES.iter().position(|n| *n == name).ok_or_else(|| Error::Parse(alloc::format!("bad slot `{name}`")))?;
            let idx: u16 = idx.parse().map_err(|_| Error::Parse(alloc::format!("bad index in `{base}`")))?;
            if idx == 0 {
                return Err(Error::Parse("coordinates are numbered from 1".to_string()));
            }
            let v = Var { slot: slot as u8, coord: idx - 1 };
            m = m.mul(&Monomial(alloc::vec![(v, exp)]));
        }
        Ok(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            let name = SLOT_NAMES.get(v.slot as usize).copied().unwrap_or("a");
            write!(f, "{}{}", name, v.coord + 1)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Self {
        Poly { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, c: Scalar) -> Self {
        let mut p = Self::zero(field);
        add_term(&mut p.terms, Monomial::one(), &c);
        p
    }

    pub fn var(field: Field, slot: u8, coord: u16) -> Self {
        let mut p = Self::zero(field);
        p.terms.insert(Monomial::var(Var { slot, coord }), field.one());
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        add_term(&mut self.terms, m, c);
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            add_term(&mut p.terms, m.clone(), c);
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            add_term(&mut p.terms, m.clone(), &-c);
        }
        p
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut p = Poly::zero(self.field);
        if !c.is_zero() {
            p.terms = self.terms.iter().map(|(m, x)| (m.clone(), c * x)).collect();
        }
        p
    }

    /// Product, dropping monomials whose weight exceeds `bound`.
    pub fn mul_trunc(&self, o: &Poly, weights: &[u32], bound: u32) -> Poly {
        let mut p = Poly::zero(self.field);
        for (a, x) in &self.terms {
            let wa = a.weight(weights);
            if wa > bound {
                continue;
            }
            for (b, y) in &o.terms {
                if wa + b.weight(weights) <= bound {
                    add_term(&mut p.terms, a.mul(b), &(x * y));
                }
            }
        }
        p
    }

    pub fn mul_full(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                add_term(&mut p.terms, a.mul(b), &(x * y));
            }
        }
        p
    }

    /// The part of polynomial degree `n` (number of variable factors).
    pub fn degree_part(&self, n: u32) -> Poly {
        Poly {
            field: self.field,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == n).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn truncate(&self, weights: &[u32], bound: u32) -> Poly {
        Poly {
            field: self.field,
            terms: self.terms.iter().filter(|(m, _)| m.weight(weights) <= bound).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Substitutes `images(var)` for every variable, truncating by weight
    /// (weights refer to the variables of the images).
    pub fn substitute(&self, images: &dyn Fn(Var) -> Poly, weights: &[u32], bound: u32) -> Poly {
        let mut out = Poly::zero(self.field);
        let mut powers: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(self.field, c.clone());
            for &(v, e) in &m.0 {
                if acc.is_zero() {
                    break;
                }
                let pw = power(&mut powers, images, v, e, weights, bound);
                acc = acc.mul_trunc(&pw, weights, bound);
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn evaluate(&self, point: &dyn Fn(Var) -> Scalar) -> Scalar {
        let mut total = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = point(v);
                for _ in 0..e {
                    t = &t * &x;
                }
            }
            total += &t;
        }
        total
    }

    pub fn parse(field: Field, s: &str) -> Result<Poly> {
        let mut p = Poly::zero(field);
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(p);
        }
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut neg = false;
        let b = s.as_bytes();
        for i in 0..=b.len() {
            let at_sep = i == b.len() || ((b[i] == b'+' || b[i] == b'-') && i > 0 && b[i - 1] != b'^' && b[i - 1] != b'/');
            if at_sep {
                let piece = s[start..i].trim();
                if !piece.is_empty() {
                    pieces.push((neg, piece));
                }
                if i < b.len() {
                    neg = b[i] == b'-';
                    start = i + 1;
                }
            } else if i == 0 && (b[0] == b'-' || b[0] == b'+') {
                neg = b[0] == b'-';
                start = 1;
            }
        }
        for (neg, piece) in pieces {
            // leading numeric factor, if any
            let (coef, mono) = match piece.split_once('*') {
                Some((head, rest)) if head.trim().chars().next().is_some_and(|c| c.is_ascii_digit()) => (field.parse(head)?, Monomial::parse(rest)?),
                _ if piece.chars().next().is_some_and(|c| c.is_ascii_digit()) => (field.parse(piece)?, Monomial::one()),
                _ => (field.one(), Monomial::parse(piece)?),
            };
            let coef = if neg { -coef } else { coef };
            p.add_term(mono, &coef);
        }
        Ok(p)
    }
}

fn power(cache: &mut BTreeMap<(Var, u32), Poly>, images: &dyn Fn(Var) -> Poly, v: Var, e: u32, weights: &[u32], bound: u32) -> Poly {
    if let Some(p) = cache.get(&(v, e)) {
        return p.clone();
    }
    let p = if e == 1 {
        images(v)
    } else {
        let lower = power(cache, images, v, e - 1, weights, bound);
        lower.mul_trunc(&images(v), weights, bound)
    };
    cache.insert((v, e), p.clone());
    p
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(f, self.terms.iter().map(|(m, c)| (c.clone(), m)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Coefficient for Poly {
    fn zero_from(field: Field) -> Self {
        Poly::zero(field)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_full(o)
    }
    fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            add_term(&mut self.terms, m.clone(), c);
        }
    }
    fn scale(&self, c: &Scalar) -> Self {
        Poly::scale(self, c)
    }
}

/// A vector of polynomials, one per coordinate.
pub type PolyVec = Vec<Poly>;

/// The identity vector `(a₁, …, a_k)` of argument `slot`.
pub fn arg_vec(field: Field, dim: usize, slot: u8) -> PolyVec {
    (0..dim).map(|c| Poly::var(field, slot, c as u16)).collect()
}

pub fn vec_add(a: &[Poly], b: &[Poly]) -> PolyVec {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[Poly], b: &[Poly]) -> PolyVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_is_zero(a: &[Poly]) -> bool {
    a.iter().all(Poly::is_zero)
}

/// Substitutes argument vectors for the slots of a polynomial vector.
pub fn compose(map: &[Poly], args: &[&[Poly]], weights: &[u32], bound: u32) -> Result<PolyVec> {
    let images = |v: Var| -> Poly { args[v.slot as usize][v.coord as usize].clone() };
    for p in map {
        for m in p.terms.keys() {
            for (v, _) in &m.0 {
                if v.slot as usize >= args.len() {
                    return Err(Error::InvalidInput(alloc::format!("slot {} has no argument", v.slot)));
                }
            }
        }
    }
    Ok(map.iter().map(|p| p.substitute(&images, weights, bound)).collect())
}

pub fn format_vec(v: &[Poly]) -> String {
    let mut s = String::new();
    for (i, p) in v.iter().enumerate() {
        s.push_str(&alloc::format!("[{}] {}\n", i + 1, p));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use alloc::string::ToString;

    #[test]
    fn monomial_text() {
        let m = Monomial::parse("x1^2*y3").unwrap();
        assert_eq!(m.to_string(), "x1^2*y3");
        assert_eq!(m.weight(&[1, 1, 2]), 4);
        assert_eq!(m.slots(), 0b11);
    }

    #[test]
    fn poly_parse_and_substitute() {
        let q = Field::Rational;
        let p = Poly::parse(q, "x3 + y3 - 1/2*x1*y2 + 1/2*x2*y1").unwrap();
        assert_eq!(p.terms().len(), 4);
        let w = [1, 1, 2];
        // substitute y := x
        let s = p.substitute(&|v: Var| Poly::var(q, 0, v.coord), &w, 2);
        assert_eq!(s.to_string(), "2*x3");
    }
}
