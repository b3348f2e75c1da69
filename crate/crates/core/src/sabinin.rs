//! Primitive associator components, the Sabinin brackets and
//! the multioperator, computed in the truncated free algebra.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::combinat::{factorial, permutations};
use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::scalar::Field;

fn check_inputs(all: &[&FreeElement]) -> Result<(Field, u32)> {
    let first = all.first().ok_or_else(|| Error::InvalidInput("no arguments".to_string()))?;
    let (field, trunc) = (first.field(), first.trunc());
    for e in all {
        if e.field() != field {
            return Err(Error::FieldMismatch(field, e.field()));
        }
        if e.trunc() != trunc {
            return Err(Error::TruncationMismatch(trunc as usize, e.trunc() as usize));
        }
        if !e.is_primitive() {
            return Err(Error::NotPrimitive(e.to_string()));
        }
    }
    Ok((field, trunc))
}

/// Left-normed products of every subsequence, indexed by bitmask.
fn subsequence_products(seq: &[FreeElement], field: Field, trunc: u32) -> Vec<FreeElement> {
    let n = seq.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let mut acc = FreeElement::one(field, trunc);
        for (i, e) in seq.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = &acc * e;
            }
        }
        out.push(acc);
    }
    out
}

/// All values `p(u|S; v|T; z)` for nonempty subsequence masks `S`, `T`.
///
/// The recursion is `p(u;v;z) = (uv)z - u(vz) - Σ' u₍₁₎v₍₁₎·p(u₍₂₎;v₍₂₎;z)`
/// with the split `(u₍₂₎, v₍₂₎) = (u, v)` excluded and `p` vanishing on an
/// empty first or second sequence.
pub fn shu_p_family(useq: &[FreeElement], vseq: &[FreeElement], z: &FreeElement) -> Result<BTreeMap<(u64, u64), FreeElement>> {
    let mut all: Vec<&FreeElement> = useq.iter().chain(vseq.iter()).collect();
    all.push(z);
    let (field, trunc) = check_inputs(&all)?;
    let needed = (useq.len() + vseq.len() + 1) as u32;
    if needed > trunc {
        return Err(Error::TruncationTooSmall { needed: needed as usize, have: trunc as usize });
    }
    if useq.len() > 20 || vseq.len() > 20 {
        return Err(Error::Unsupported("sequences longer than 20".to_string()));
    }
    let up = subsequence_products(useq, field, trunc);
    let vp = subsequence_products(vseq, field, trunc);
    let (nu, nv) = (useq.len(), vseq.len());
    let mut masks: Vec<(u64, u64)> = Vec::new();
    for a in 1u64..(1 << nu) {
        for b in 1u64..(1 << nv) {
            masks.push((a, b));
        }
    }
    masks.sort_by_key(|&(a, b)| (a.count_ones() + b.count_ones(), a, b));
    let mut memo: BTreeMap<(u64, u64), FreeElement> = BTreeMap::new();
    for (a, b) in masks {
        let u = &up[a as usize];
        let v = &vp[b as usize];
        let mut p = &(&(u * v) * z) - &(u * &(v * z));
        // S ⊆ a, T ⊆ b with complements nonempty and (S, T) ≠ (∅, ∅)
        let mut s = a;
        loop {
            if s != a {
                let mut t = b;
                loop {
                    if t != b && (s | t) != 0 {
                        let coef = &up[s as usize] * &vp[t as usize];
                        let inner = &memo[&(a & !s, b & !t)];
                        p = &p - &(&coef * inner);
                    }
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & b;
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & a;
        }
        memo.insert((a, b), p);
    }
    Ok(memo)
}

/// `p(useq; vseq; z)`; zero when either sequence is empty.
pub fn shu_p(useq: &[FreeElement], vseq: &[FreeElement], z: &FreeElement) -> Result<FreeElement> {
    if useq.is_empty() || vseq.is_empty() {
        let (field, trunc) = check_inputs(&[z])?;
        return Ok(FreeElement::zero(field, trunc));
    }
    let full_u = (1u64 << useq.len()) - 1;
    let full_v = (1u64 << vseq.len()) - 1;
    let mut fam = shu_p_family(useq, vseq, z)?;
    Ok(fam.remove(&(full_u, full_v)).unwrap())
}

/// `⟨y,z⟩ = -yz + zy` and `⟨x₁,…,xₙ;y,z⟩ = -p(xs;y;z) + p(xs;z;y)`.
pub fn ms_bracket(xs: &[FreeElement], y: &FreeElement, z: &FreeElement) -> Result<FreeElement> {
    if xs.is_empty() {
        let (_, trunc) = check_inputs(&[y, z])?;
        if trunc < 2 {
            return Err(Error::TruncationTooSmall { needed: 2, have: trunc as usize });
        }
        return Ok(&(z * y) - &(y * z));
    }
    let a = shu_p(xs, core::slice::from_ref(y), z)?;
    let b = shu_p(xs, core::slice::from_ref(z), y)?;
    Ok(&b - &a)
}

/// `Φ(xs; ys) = (1/m!n!) Σ_{σ,τ} p(x_σ; y_τ(1..n-1); y_τ(n))`.
pub fn multioperator(xs: &[FreeElement], ys: &[FreeElement]) -> Result<FreeElement> {
    let (m, n) = (xs.len(), ys.len());
    if m < 1 || n < 2 {
        return Err(Error::InvalidInput("multioperator needs m ≥ 1 and n ≥ 2".to_string()));
    }
    let all: Vec<&FreeElement> = xs.iter().chain(ys.iter()).collect();
    let (field, trunc) = check_inputs(&all)?;
    field.require_divisible_up_to(m.max(n) as u64)?;
    if (m + n) as u32 > trunc {
        return Err(Error::TruncationTooSmall { needed: m + n, have: trunc as usize });
    }
    let mut acc = FreeElement::zero(field, trunc);
    let xperms = permutations(m);
    for tau in permutations(n) {
        let head: Vec<FreeElement> = tau[..n - 1].iter().map(|&i| ys[i].clone()).collect();
        let last = &ys[tau[n - 1]];
        for sigma in &xperms {
            let xseq: Vec<FreeElement> = sigma.iter().map(|&i| xs[i].clone()).collect();
            let p = shu_p(&xseq, &head, last)?;
            acc = &acc + &p;
        }
    }
    let norm = field.int((factorial(m) * factorial(n)) as i64).inverse().ok_or(Error::DivisionByZero)?;
    Ok(acc.scale(&norm))
}

/// A composition of Sabinin brackets and multioperators over
/// numbered arguments.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BracketExpr {
    Arg(usize),
    Ms { prefix: Vec<BracketExpr>, y: Box<BracketExpr>, z: Box<BracketExpr> },
    Phi { xs: Vec<BracketExpr>, ys: Vec<BracketExpr> },
}

impl BracketExpr {
    pub fn ms(prefix: Vec<BracketExpr>, y: BracketExpr, z: BracketExpr) -> Self {
        BracketExpr::Ms { prefix, y: Box::new(y), z: Box::new(z) }
    }

    /// Number of argument leaves.
    pub fn weight(&self) -> usize {
        match self {
            BracketExpr::Arg(_) => 1,
            BracketExpr::Ms { prefix, y, z } => prefix.iter().map(Self::weight).sum::<usize>() + y.weight() + z.weight(),
            BracketExpr::Phi { xs, ys } => xs.iter().chain(ys).map(Self::weight).sum(),
        }
    }

    /// Multiset of argument indices occurring.
    pub fn args(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_args(&mut out);
        out.sort();
        out
    }

    fn collect_args(&self, out: &mut Vec<usize>) {
        match self {
            BracketExpr::Arg(i) => out.push(*i),
            BracketExpr::Ms { prefix, y, z } => {
                prefix.iter().for_each(|e| e.collect_args(out));
                y.collect_args(out);
                z.collect_args(out);
            }
            BracketExpr::Phi { xs, ys } => xs.iter().chain(ys).for_each(|e| e.collect_args(out)),
        }
    }

    /// Value in the free algebra with argument `i` replaced by `args[i]`.
    pub fn to_free(&self, args: &[FreeElement]) -> Result<FreeElement> {
        match self {
            BracketExpr::Arg(i) => args.get(*i).cloned().ok_or(Error::UnassignedGenerator(*i as u32)),
            BracketExpr::Ms { prefix, y, z } => {
                let p: Result<Vec<_>> = prefix.iter().map(|e| e.to_free(args)).collect();
                ms_bracket(&p?, &y.to_free(args)?, &z.to_free(args)?)
            }
            BracketExpr::Phi { xs, ys } => {
                let a: Result<Vec<_>> = xs.iter().map(|e| e.to_free(args)).collect();
                let b: Result<Vec<_>> = ys.iter().map(|e| e.to_free(args)).collect();
                multioperator(&a?, &b?)
            }
        }
    }

    /// All compositions of brackets `⟨…;y,z⟩` of the given weight over
    /// arguments `0..nargs`, in canonical order, skipping syntactic zeros
    /// `⟨…;u,u⟩` and keeping only `y < z` in the last two slots.
    pub fn ms_compositions(nargs: usize, weight: usize) -> Vec<BracketExpr> {
        let mut by_weight: Vec<Vec<BracketExpr>> = alloc::vec![Vec::new()];
        for w in 1..=weight {
            let mut level = Vec::new();
            if w == 1 {
                level.extend((0..nargs).map(BracketExpr::Arg));
            }
            for arity in 2..=w {
                for comp in crate::combinat::compositions(w, arity) {
                    let choices: Vec<&Vec<BracketExpr>> = comp.iter().map(|&c| &by_weight[c]).collect();
                    let mut idx = alloc::vec![0usize; arity];
                    'outer: loop {
                        let pick: Vec<&BracketExpr> = (0..arity).map(|r| &choices[r][idx[r]]).collect();
                        let (y, z) = (pick[arity - 2], pick[arity - 1]);
                        if y < z {
                            level.push(BracketExpr::ms(
                                pick[..arity - 2].iter().map(|e| (*e).clone()).collect(),
                                y.clone(),
                                z.clone(),
                            ));
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
            level.sort();
            by_weight.push(level);
        }
        by_weight.swap_remove(weight)
    }
}

const ARG_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, xs: &[BracketExpr]) -> fmt::Result {
            for (i, e) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            Ok(())
        }
        match self {
            BracketExpr::Arg(i) => match ARG_NAMES.get(*i) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "a{}", i + 1),
            },
            BracketExpr::Ms { prefix, y, z } => {
                write!(f, "<")?;
                if !prefix.is_empty() {
                    list(f, prefix)?;
                    write!(f, ";")?;
                }
                write!(f, "{y},{z}>")
            }
            BracketExpr::Phi { xs, ys } => {
                write!(f, "Phi(")?;
                list(f, xs)?;
                write!(f, "|")?;
                list(f, ys)?;
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::parse_element;

    fn gens(d: u32, n: u32) -> Vec<FreeElement> {
        (0..n).map(|g| FreeElement::gen(Field::Rational, d, g)).collect()
    }

    #[test]
    fn lowest_p_is_associator() {
        let g = gens(3, 3);
        let p = shu_p(&g[..1], &g[1..2], &g[2]).unwrap();
        let want = parse_element(Field::Rational, 3, "((x1 x2) x3) - (x1 (x2 x3))").unwrap();
        assert_eq!(p, want);
        assert!(p.is_primitive());
    }

    #[test]
    fn brackets_and_guards() {
        let g = gens(3, 3);
        let b = ms_bracket(&[], &g[1], &g[2]).unwrap();
        assert_eq!(b.to_string(), "-(x2 x3) + (x3 x2)");
        assert!(ms_bracket(&[], &g[1], &g[1]).unwrap().is_zero());
        let xy = &g[0] * &g[1];
        assert!(matches!(shu_p(&[xy], &g[1..2], &g[2]), Err(Error::NotPrimitive(_))));
        assert!(matches!(shu_p(&g[..2], &g[1..2], &g[2]), Err(Error::TruncationTooSmall { .. })));
        let f3 = Field::Prime(2);
        let h: Vec<_> = (0..3).map(|i| FreeElement::gen(f3, 3, i)).collect();
        assert!(matches!(multioperator(&h[..1], &h[1..]), Err(Error::Characteristic { .. })));
    }

    #[test]
    fn composition_counts() {
        assert_eq!(BracketExpr::ms_compositions(2, 2).len(), 1);
        let w3 = BracketExpr::ms_compositions(2, 3);
        assert!(w3.iter().all(|e| e.weight() == 3));
        assert_eq!(w3[0].to_string().chars().next(), Some('<'));
    }
}
