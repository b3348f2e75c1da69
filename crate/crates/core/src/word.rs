//! Non-associative monomials: binary trees over a generator alphabet.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A fully parenthesized monomial. `Unit` is the empty word standing for 1.
#[derive(Clone)]
pub enum Word {
    Unit,
    Gen(u32),
    Pair(Arc<(Word, Word)>, u32),
}

impl Word {
    pub fn gen(i: u32) -> Word {
        Word::Gen(i)
    }

    /// `left · right`, collapsing units.
    pub fn mul(left: &Word, right: &Word) -> Word {
        match (left, right) {
            (Word::Unit, w) | (w, Word::Unit) => w.clone(),
            _ => {
                let d = left.degree() + right.degree();
                Word::Pair(Arc::new((left.clone(), right.clone())), d)
            }
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Word::Unit => 0,
            Word::Gen(_) => 1,
            Word::Pair(_, d) => *d,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Word::Unit)
    }

    pub fn children(&self) -> Option<(&Word, &Word)> {
        match self {
            Word::Pair(p, _) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    /// Left-normed product `((g₁g₂)g₃)…`.
    pub fn left_normed(gens: &[u32]) -> Word {
        gens.iter().fold(Word::Unit, |acc, &g| Word::mul(&acc, &Word::Gen(g)))
    }

    /// Left-normed power of a single word, `((ww)w)…`.
    pub fn left_power(w: &Word, n: u32) -> Word {
        (0..n).fold(Word::Unit, |acc, _| Word::mul(&acc, w))
    }

    /// Generators at the leaves, left to right.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Word::Unit => {}
            Word::Gen(g) => out.push(*g),
            Word::Pair(p, _) => {
                p.0.collect_leaves(out);
                p.1.collect_leaves(out);
            }
        }
    }

    pub fn max_generator(&self) -> Option<u32> {
        self.leaves().into_iter().max()
    }

    /// The tree restricted to the leaves whose positions are set in `mask`
    /// (bit i is the i-th leaf from the left); emptied subtrees collapse.
    pub fn restrict(&self, mask: u64) -> Word {
        let mut pos = 0;
        self.restrict_from(mask, &mut pos)
    }

    fn restrict_from(&self, mask: u64, pos: &mut u32) -> Word {
        match self {
            Word::Unit => Word::Unit,
            Word::Gen(_) => {
                let keep = mask >> *pos & 1 == 1;
                *pos += 1;
                if keep {
                    self.clone()
                } else {
                    Word::Unit
                }
            }
            Word::Pair(p, _) => {
                let l = p.0.restrict_from(mask, pos);
                let r = p.1.restrict_from(mask, pos);
                Word::mul(&l, &r)
            }
        }
    }

    /// Replaces every leaf generator `g` by `map(g)`.
    pub fn relabel(&self, map: &impl Fn(u32) -> u32) -> Word {
        match self {
            Word::Unit => Word::Unit,
            Word::Gen(g) => Word::Gen(map(*g)),
            Word::Pair(p, _) => Word::mul(&p.0.relabel(map), &p.1.relabel(map)),
        }
    }

    /// All words of exactly `degree` leaves over generators `0..gens`.
    pub fn all_of_degree(gens: u32, degree: u32) -> Vec<Word> {
        let mut table: Vec<Vec<Word>> = alloc::vec![alloc::vec![Word::Unit]];
        for d in 1..=degree {
            let mut level = Vec::new();
            if d == 1 {
                level.extend((0..gens).map(Word::Gen));
            } else {
                for dl in 1..d {
                    for l in &table[dl as usize] {
                        for r in &table[(d - dl) as usize] {
                            level.push(Word::mul(l, r));
                        }
                    }
                }
            }
            level.sort();
            table.push(level);
        }
        table.swap_remove(degree as usize)
    }

    /// Words in which each of the generators `gens` occurs exactly once.
    pub fn multilinear(gens: &[u32]) -> Vec<Word> {
        let n = gens.len();
        if n == 0 {
            return alloc::vec![Word::Unit];
        }
        let full: u64 = (1u64 << n) - 1;
        let mut memo: alloc::collections::BTreeMap<u64, Vec<Word>> = Default::default();
        fn go(
            mask: u64,
            gens: &[u32],
            memo: &mut alloc::collections::BTreeMap<u64, Vec<Word>>,
        ) -> Vec<Word> {
            if let Some(v) = memo.get(&mask) {
                return v.clone();
            }
            let mut out = Vec::new();
            if mask.count_ones() == 1 {
                out.push(Word::Gen(gens[mask.trailing_zeros() as usize]));
            } else {
                // proper nonempty submasks as left factor
                let mut sub = (mask - 1) & mask;
                while sub > 0 {
                    let ls = go(sub, gens, memo);
                    let rs = go(mask & !sub, gens, memo);
                    for l in &ls {
                        for r in &rs {
                            out.push(Word::mul(l, r));
                        }
                    }
                    sub = (sub - 1) & mask;
                }
            }
            memo.insert(mask, out.clone());
            out
        }
        let mut out = go(full, gens, &mut memo);
        out.sort();
        out
    }

    pub fn parse(s: &str) -> Result<Word> {
        let toks = tokenize(s)?;
        let mut pos = 0;
        let w = parse_tokens(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse(alloc::format!("trailing input in word `{s}`")));
        }
        Ok(w)
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Gen(u32),
    One,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b' ' | b'\t' | b',' => i += 1,
            b'(' => {
                out.push(Tok::Open);
                i += 1
            }
            b')' => {
                out.push(Tok::Close);
                i += 1
            }
            b'1' => {
                out.push(Tok::One);
                i += 1
            }
            b'x' => {
                let start = i + 1;
                let mut j = start;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let n: u32 = s[start..j]
                    .parse()
                    .map_err(|_| Error::Parse(alloc::format!("bad generator in `{s}`")))?;
                if n == 0 {
                    return Err(Error::Parse(String::from("generators are numbered from x1")));
                }
                out.push(Tok::Gen(n - 1));
                i = j;
            }
            c => return Err(Error::Parse(alloc::format!("unexpected `{}` in word", c as char))),
        }
    }
    Ok(out)
}

fn parse_tokens(t: &[Tok], pos: &mut usize) -> Result<Word> {
    let err = || Error::Parse(String::from("malformed word"));
    match t.get(*pos).ok_or_else(err)? {
        Tok::Gen(g) => {
            *pos += 1;
            Ok(Word::Gen(*g))
        }
        Tok::One => {
            *pos += 1;
            Ok(Word::Unit)
        }
        Tok::Open => {
            *pos += 1;
            let l = parse_tokens(t, pos)?;
            let r = parse_tokens(t, pos)?;
            if t.get(*pos) != Some(&Tok::Close) {
                return Err(err());
            }
            *pos += 1;
            if l.is_unit() || r.is_unit() {
                return Err(err());
            }
            Ok(Word::mul(&l, &r))
        }
        Tok::Close => Err(err()),
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Word {}

impl core::hash::Hash for Word {
    fn hash<H: core::hash::Hasher>(&self, h: &mut H) {
        match self {
            Word::Unit => h.write_u8(0),
            Word::Gen(g) => {
                h.write_u8(1);
                h.write_u32(*g);
            }
            Word::Pair(p, _) => {
                h.write_u8(2);
                p.0.hash(h);
                p.1.hash(h);
            }
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then generator index, then left and right factors.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Word::Unit, Word::Unit) => Ordering::Equal,
            (Word::Gen(a), Word::Gen(b)) => a.cmp(b),
            (Word::Pair(a, _), Word::Pair(b, _)) => {
                if Arc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
            }
            // equal degrees force equal shapes
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Unit => write!(f, "1"),
            Word::Gen(g) => write!(f, "x{}", g + 1),
            Word::Pair(p, _) => write!(f, "({} {})", p.0, p.1),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use alloc::string::ToString;

    #[test]
    fn order_and_degree() {
        let x = Word::gen(0);
        let y = Word::gen(1);
        let xy = Word::mul(&x, &y);
        let yx = Word::mul(&y, &x);
        assert_eq!(xy.degree(), 2);
        assert!(x < y && y < xy && xy < yx);
        assert!(Word::mul(&x, &xy) < Word::mul(&xy, &x));
        assert_eq!(Word::mul(&Word::Unit, &x), x);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["x1", "(x1 x2)", "((x1 x2) (x3 x1))", "1"] {
            assert_eq!(Word::parse(s).unwrap().to_string(), s);
        }
        assert!(Word::parse("(x1)").is_err());
        assert!(Word::parse("x0").is_err());
    }

    #[test]
    fn counts_are_catalan() {
        assert_eq!(Word::all_of_degree(1, 4).len(), 5);
        assert_eq!(Word::all_of_degree(2, 3).len(), 2 * 8);
        assert_eq!(Word::multilinear(&[0, 1, 2]).len(), 2 * 6);
    }

    #[test]
    fn restriction_collapses_units() {
        let w = Word::parse("((x1 x2) x3)").unwrap();
        assert_eq!(w.restrict(0b101).to_string(), "(x1 x3)");
        assert_eq!(w.restrict(0b010).to_string(), "x2");
        assert_eq!(w.restrict(0), Word::Unit);
    }
}
