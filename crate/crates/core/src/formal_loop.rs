//! Formal loop products `F(x,y) = x + y + H(x,y)` on weighted coordinate
//! spaces: divisions, commutators, associators and their deviations, and
//! the weight audit showing that the weight filtration is an N-sequence.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{arg_vec, compose, vec_add, vec_sub, Monomial, Poly, PolyVec};
use crate::scalar::{Field, Scalar};

/// A loop on `k`-dimensional coordinate space given by polynomial maps.
#[derive(Clone, Debug)]
pub struct PolyLoop {
    field: Field,
    dim: usize,
    deg: u32,
    weights: Vec<u32>,
    f: PolyVec,
    left_div: PolyVec,
    right_div: PolyVec,
}

/// Checks one `H` monomial feeding output coordinate `coord`.
fn check_h_term(m: &Monomial, coord: usize, weights: &[u32]) -> Result<()> {
    if m.slots() != 0b11 || m.0.iter().any(|(v, _)| v.slot > 1) {
        return Err(Error::SingleArgumentTerm(alloc::format!("{m} in coordinate {}", coord + 1)));
    }
    let w = m.weight(weights);
    if w > weights[coord] {
        return Err(Error::WeightViolation(alloc::format!(
            "{m} (weight {w}) in coordinate {} of weight {}",
            coord + 1,
            weights[coord]
        )));
    }
    Ok(())
}

impl PolyLoop {
    /// Validates `H` and computes both divisions.
    ///
    /// A monomial of `H` may feed coordinate `c` only if its weight is at
    /// most the weight of `c`, so that `F(V_i, V_j) ⊆ V_{i+j}` for the
    /// filtration `V_n = span{e_c : weight(c) ≥ n}`.
    pub fn new(field: Field, deg: u32, weights: Vec<u32>, h: Vec<Poly>) -> Result<Self> {
        let dim = weights.len();
        if h.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: h.len() });
        }
        if let Some(&w) = weights.iter().find(|&&w| w == 0 || w > deg) {
            return Err(Error::InvalidInput(alloc::format!("coordinate weight {w} outside 1..={deg}")));
        }
        for (c, p) in h.iter().enumerate() {
            if p.field() != field {
                return Err(Error::FieldMismatch(field, p.field()));
            }
            for m in p.terms().keys() {
                if m.0.iter().any(|(v, _)| v.coord as usize >= dim) {
                    return Err(Error::InvalidInput(alloc::format!("{m} refers to a missing coordinate")));
                }
                check_h_term(m, c, &weights)?;
            }
        }
        let x = arg_vec(field, dim, 0);
        let y = arg_vec(field, dim, 1);
        let f = vec_add(&vec_add(&x, &y), &h);
        let mut l = PolyLoop { field, dim, deg, weights, f, left_div: Vec::new(), right_div: Vec::new() };
        l.left_div = l.compute_left_division(&h)?;
        l.right_div = l.compute_right_division(&h)?;
        Ok(l)
    }

    /// Builds from the full product map `F` (which must be `x + y + H`).
    pub fn from_product(field: Field, deg: u32, weights: Vec<u32>, f: Vec<Poly>) -> Result<Self> {
        let dim = weights.len();
        if f.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: f.len() });
        }
        let x = arg_vec(field, dim, 0);
        let y = arg_vec(field, dim, 1);
        let h = vec_sub(&vec_sub(&f, &x), &y);
        Self::new(field, deg, weights, h)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn product_map(&self) -> &PolyVec {
        &self.f
    }

    pub fn left_division_map(&self) -> &PolyVec {
        &self.left_div
    }

    pub fn right_division_map(&self) -> &PolyVec {
        &self.right_div
    }

    fn compose(&self, map: &[Poly], args: &[&[Poly]]) -> PolyVec {
        compose(map, args, &self.weights, self.deg).expect("slots are in range")
    }

    /// `D(x,y) = -x + y - H(x, D(x,y))`, iterated exactly `deg` times.
    fn compute_left_division(&self, h: &[Poly]) -> Result<PolyVec> {
        let x = arg_vec(self.field, self.dim, 0);
        let y = arg_vec(self.field, self.dim, 1);
        let base = vec_sub(&y, &x);
        let mut d = base.clone();
        for _ in 0..self.deg {
            d = vec_sub(&base, &self.compose(h, &[&x, &d]));
        }
        Ok(d)
    }

    /// `D'(x,y) = x - y - H(D'(x,y), y)`, iterated exactly `deg` times.
    fn compute_right_division(&self, h: &[Poly]) -> Result<PolyVec> {
        let x = arg_vec(self.field, self.dim, 0);
        let y = arg_vec(self.field, self.dim, 1);
        let base = vec_sub(&x, &y);
        let mut d = base.clone();
        for _ in 0..self.deg {
            d = vec_sub(&base, &self.compose(h, &[&d, &y]));
        }
        Ok(d)
    }

    /// `F(a, b)` for argument vectors.
    pub fn mul(&self, a: &[Poly], b: &[Poly]) -> PolyVec {
        self.compose(&self.f, &[a, b])
    }

    /// `a \ b`, i.e. `D(a, b)`.
    pub fn ldiv(&self, a: &[Poly], b: &[Poly]) -> PolyVec {
        self.compose(&self.left_div, &[a, b])
    }

    /// `a / b`, i.e. `D'(a, b)`.
    pub fn rdiv(&self, a: &[Poly], b: &[Poly]) -> PolyVec {
        self.compose(&self.right_div, &[a, b])
    }

    pub fn arg(&self, slot: u8) -> PolyVec {
        arg_vec(self.field, self.dim, slot)
    }

    /// `D(F(y,x), F(x,y))`.
    pub fn commutator(&self) -> PolyVec {
        let (x, y) = (self.arg(0), self.arg(1));
        self.ldiv(&self.mul(&y, &x), &self.mul(&x, &y))
    }

    /// `D(F(x,F(y,z)), F(F(x,y),z))`.
    pub fn associator(&self) -> PolyVec {
        let (x, y, z) = (self.arg(0), self.arg(1), self.arg(2));
        let a = self.mul(&x, &self.mul(&y, &z));
        let b = self.mul(&self.mul(&x, &y), &z);
        self.ldiv(&a, &b)
    }

    /// The deviation of an `m`-ary operation `phi` in slot `j` (0-based):
    /// `D(s, r)` with `r = φ(…, F(x_j, x_{j+1}), …)` and
    /// `s = F(φ(…, x_j, …), φ(…, x_{j+1}, …))`; the result is `(m+1)`-ary.
    pub fn deviation(&self, phi: &[Poly], arity: usize, j: usize) -> Result<PolyVec> {
        if j >= arity {
            return Err(Error::InvalidInput(alloc::format!("slot {j} invalid for arity {arity}")));
        }
        if arity + 1 > 8 {
            return Err(Error::Unsupported("more than 8 arguments".to_string()));
        }
        let args: Vec<PolyVec> = (0..=arity).map(|s| self.arg(s as u8)).collect();
        let fj = self.mul(&args[j], &args[j + 1]);
        let mut r_args: Vec<&[Poly]> = Vec::new();
        let mut s1: Vec<&[Poly]> = Vec::new();
        let mut s2: Vec<&[Poly]> = Vec::new();
        for s in 0..arity {
            match s.cmp(&j) {
                core::cmp::Ordering::Less => {
                    r_args.push(&args[s]);
                    s1.push(&args[s]);
                    s2.push(&args[s]);
                }
                core::cmp::Ordering::Equal => {
                    r_args.push(&fj);
                    s1.push(&args[j]);
                    s2.push(&args[j + 1]);
                }
                core::cmp::Ordering::Greater => {
                    r_args.push(&args[s + 1]);
                    s1.push(&args[s + 1]);
                    s2.push(&args[s + 1]);
                }
            }
        }
        let r = self.compose(phi, &r_args);
        let s = self.mul(&self.compose(phi, &s1), &self.compose(phi, &s2));
        Ok(self.ldiv(&s, &r))
    }

    /// Iterated deviations of the associator along `slots`.
    pub fn associator_deviation(&self, slots: &[usize]) -> Result<PolyVec> {
        let mut op = self.associator();
        for (arity, &j) in (3..).zip(slots) {
            op = self.deviation(&op, arity, j)?;
        }
        Ok(op)
    }

    /// Monomials of `op` violating the N-sequence conditions: a missing
    /// argument, or weight above the output coordinate's weight.
    pub fn audit(&self, op: &[Poly], arity: usize) -> Vec<String> {
        let full: u32 = (1 << arity) - 1;
        let mut bad = Vec::new();
        for (c, p) in op.iter().enumerate() {
            for m in p.terms().keys() {
                if m.slots() != full {
                    bad.push(alloc::format!("{m} in coordinate {} misses an argument", c + 1));
                } else if m.weight(&self.weights) > self.weights[c] {
                    bad.push(alloc::format!("{m} in coordinate {} exceeds its weight", c + 1));
                }
            }
        }
        bad
    }

    /// Runs every check of the N-sequence certificate, deviations up to
    /// `depth` iterations.
    pub fn verify_n_sequence(&self, depth: usize) -> Certificate {
        let mut cert = Certificate::default();
        let (x, y) = (self.arg(0), self.arg(1));
        let zero: PolyVec = (0..self.dim).map(|_| Poly::zero(self.field)).collect();
        cert.push("unit F(x,0) = x", 1, diff_witness(&self.mul(&x, &zero), &x));
        cert.push("unit F(0,y) = y", 1, diff_witness(&self.mul(&zero, &y), &y));
        cert.push("left division F(x, D(x,y)) = y", 2, diff_witness(&self.mul(&x, &self.ldiv(&x, &y)), &y));
        cert.push("right division F(D'(x,y), y) = x", 2, diff_witness(&self.mul(&self.rdiv(&x, &y), &y), &x));
        let comm = self.commutator();
        cert.push("commutator", 2, self.audit(&comm, 2));
        let assoc = self.associator();
        cert.push("associator", 3, self.audit(&assoc, 3));
        let mut frontier: Vec<(String, PolyVec, usize)> =
            alloc::vec![("commutator".to_string(), comm, 2), ("associator".to_string(), assoc, 3)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (name, op, arity) in &frontier {
                if *arity >= 8 {
                    continue;
                }
                for j in 0..*arity {
                    let dev = self.deviation(op, *arity, j).expect("slot in range");
                    let dname = alloc::format!("{name} deviation[{}]", j + 1);
                    cert.push(&dname, arity + 1, self.audit(&dev, arity + 1));
                    // ops whose arity exceeds every weight vanish; no need to go on
                    if (*arity as u32 + 1) <= self.max_weight() {
                        next.push((dname, dev, arity + 1));
                    }
                }
            }
            frontier = next;
        }
        cert
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Derived operations (commutator, associator, deviations in every
    /// slot, and commutators/associators with a derived operation in the
    /// first slot) up to arity `max_arity`; returns the largest arity of
    /// a nonvanishing one (1 if all vanish).
    pub fn nilpotency_class(&self, max_arity: usize) -> usize {
        let mut best = 1;
        let mut frontier: Vec<(PolyVec, usize)> = alloc::vec![(self.commutator(), 2), (self.associator(), 3)];
        let mut seen_arity = 0;
        while let Some((op, arity)) = frontier.pop() {
            if arity > max_arity || crate::poly::vec_is_zero(&op) {
                continue;
            }
            best = best.max(arity);
            seen_arity = seen_arity.max(arity);
            if arity < max_arity && arity < 8 {
                for j in 0..arity {
                    frontier.push((self.deviation(&op, arity, j).expect("slot in range"), arity + 1));
                }
                let extra = self.arg(arity as u8);
                let c = self.ldiv(&self.mul(&extra, &op), &self.mul(&op, &extra));
                frontier.push((c, arity + 1));
            }
            if arity + 2 <= max_arity && arity + 2 <= 8 {
                let (u, v) = (self.arg(arity as u8), self.arg(arity as u8 + 1));
                let a = self.ldiv(&self.mul(&op, &self.mul(&u, &v)), &self.mul(&self.mul(&op, &u), &v));
                frontier.push((a, arity + 2));
            }
        }
        best
    }

    /// Evaluates a map at concrete argument vectors.
    pub fn eval(&self, map: &[Poly], args: &[&[Scalar]]) -> Vec<Scalar> {
        map.iter().map(|p| p.evaluate(&|v| args[v.slot as usize][v.coord as usize].clone())).collect()
    }

    pub fn mul_points(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.eval(&self.f, &[a, b])
    }
}

fn diff_witness(a: &[Poly], b: &[Poly]) -> Vec<String> {
    let d = vec_sub(a, b);
    d.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(c, p)| alloc::format!("coordinate {}: {p}", c + 1)).collect()
}

/// One verified identity with its arity and any counterexample monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub name: String,
    pub arity: usize,
    pub counterexamples: Vec<String>,
}

impl CertificateEntry {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub entries: Vec<CertificateEntry>,
}

impl Certificate {
    fn push(&mut self, name: &str, arity: usize, counterexamples: Vec<String>) {
        self.entries.push(CertificateEntry { name: name.to_string(), arity, counterexamples });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(CertificateEntry::passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bch2() -> PolyLoop {
        let q = Field::Rational;
        let h = alloc::vec![Poly::zero(q), Poly::zero(q), Poly::parse(q, "-1/2*x1*y2 + 1/2*x2*y1").unwrap()];
        PolyLoop::new(q, 2, alloc::vec![1, 1, 2], h).unwrap()
    }

    #[test]
    fn abelian_loop() {
        let q = Field::Rational;
        let l = PolyLoop::new(q, 2, alloc::vec![1, 1], alloc::vec![Poly::zero(q), Poly::zero(q)]).unwrap();
        assert_eq!(crate::poly::format_vec(l.left_division_map()), "[1] -x1 + y1\n[2] -x2 + y2\n");
        assert!(crate::poly::vec_is_zero(&l.associator()));
        assert!(l.verify_n_sequence(2).passed());
        assert_eq!(l.nilpotency_class(4), 1);
    }

    #[test]
    fn class_two_divisions() {
        let l = bch2();
        assert_eq!(l.left_division_map()[2].to_string(), "1/2*x1*y2 - 1/2*x2*y1 - x3 + y3");
        assert_eq!(l.right_division_map()[2].to_string(), "1/2*x1*y2 - 1/2*x2*y1 + x3 - y3");
        assert_eq!(l.commutator()[2].to_string(), "-x1*y2 + x2*y1");
        assert!(crate::poly::vec_is_zero(&l.associator()));
        assert!(crate::poly::vec_is_zero(&l.associator_deviation(&[0]).unwrap()));
        let cert = l.verify_n_sequence(2);
        assert!(cert.passed(), "{cert:?}");
        assert_eq!(l.nilpotency_class(3), 2);
    }

    #[test]
    fn validation() {
        let q = Field::Rational;
        let ok = PolyLoop::new(q, 2, alloc::vec![1, 1, 2], alloc::vec![Poly::zero(q), Poly::zero(q), Poly::parse(q, "x1*y2").unwrap()]);
        assert!(ok.is_ok());
        let one_arg = PolyLoop::new(q, 2, alloc::vec![1, 1, 2], alloc::vec![Poly::zero(q), Poly::parse(q, "x1").unwrap(), Poly::zero(q)]);
        assert!(matches!(one_arg, Err(Error::SingleArgumentTerm(_))));
        let heavy = PolyLoop::new(q, 3, alloc::vec![1, 1, 2], alloc::vec![Poly::parse(q, "x2*y3").unwrap(), Poly::zero(q), Poly::zero(q)]);
        assert!(matches!(heavy, Err(Error::WeightViolation(_))));
    }
}
