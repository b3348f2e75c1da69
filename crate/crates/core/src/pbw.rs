//! The universal envelope of a nilpotent Sabinin algebra on ordered
//! monomials `((a₁a₂)…)a_d`, products by straightening, the filtration
//! weight `N`, and the finite quotient `U/Ū^{n+1}` with its embedding.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::bch::{adapted_weights, express_in_brackets, BracketCombination};
use crate::error::{Error, Result};
use crate::fixtures::bracket_compositions;
use crate::free::FreeElement;
use crate::linalg::{axpy, dense_to_sparse, same_subspace, span};
use crate::sabinin::shu_p;
use crate::scalar::{Field, Scalar};
use crate::structure::{StructureConstants, Vector};
use crate::table::SabininTable;

/// Combinations of ordered monomials (basis index sequences).
pub type PbwVec = BTreeMap<Vec<usize>, Scalar>;

/// Displays a combination as `e1*e2 - e3`.
pub struct ShowPbw<'a>(pub &'a PbwVec);

impl fmt::Display for ShowPbw<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct M<'a>(&'a [usize]);
        impl fmt::Display for M<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_empty() {
                    return write!(f, "1");
                }
                for (i, a) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "e{}", a + 1)?;
                }
                Ok(())
            }
        }
        if self.0.is_empty() {
            return write!(f, "0");
        }
        // shorter monomials last, matching the usual reading e1*e2 - e3
        let mut terms: Vec<(&Vec<usize>, &Scalar)> = self.0.iter().collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
        crate::scalar::write_signed_terms(f, terms.into_iter().map(|(m, c)| (c.clone(), M(m))))
    }
}

/// The universal `p(x₁…x_m; y₁…y_k; z)` as a bracket composition.
pub fn p_expression(field: Field, m: usize, k: usize) -> Result<BracketCombination> {
    let w = m + k + 1;
    let gens: Vec<FreeElement> = (0..w as u32).map(|g| FreeElement::gen(field, w as u32, g)).collect();
    let target = shu_p(&gens[..m], &gens[m..m + k], &gens[m + k])?;
    let all: Vec<usize> = (0..w).collect();
    let exprs: Vec<_> = bracket_compositions(w, w).into_iter().filter(|e| e.args() == all).collect();
    express_in_brackets(&exprs, &gens, &target)?
        .ok_or_else(|| Error::Inconsistent(alloc::format!("p of arity ({m},{k}) is not a bracket combination")))
}

fn subseq(v: &[usize], mask: u64) -> Vec<usize> {
    v.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect()
}

/// `U(𝔰)` modulo monomials of weight `N > cap`.
#[derive(Clone, Debug)]
pub struct PbwEnvelope {
    table: SabininTable,
    class: usize,
    cap: u32,
    weights: Vec<u32>,
    /// Position of each basis index in the monomial order.
    rank: Vec<usize>,
    p_exprs: BTreeMap<(usize, usize), BracketCombination>,
    append_memo: BTreeMap<(Vec<usize>, usize), PbwVec>,
    mul_memo: BTreeMap<(Vec<usize>, Vec<usize>), PbwVec>,
}

impl PbwEnvelope {
    /// Envelope with the input basis order inside each weight level.
    pub fn new(table: SabininTable, cap: u32) -> Result<Self> {
        Self::build(table, cap, false)
    }

    /// Same, with the order inside each weight level reversed.
    pub fn reversed(table: SabininTable, cap: u32) -> Result<Self> {
        Self::build(table, cap, true)
    }

    fn build(table: SabininTable, cap: u32, reverse: bool) -> Result<Self> {
        let (class, weights) = adapted_weights(&table)?;
        let k = table.dim();
        let mut order: Vec<usize> = (0..k).collect();
        if reverse {
            order.sort_by_key(|&i| (weights[i], core::cmp::Reverse(i)));
        } else {
            order.sort_by_key(|&i| (weights[i], i));
        }
        let mut rank = alloc::vec![0; k];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let field = table.field();
        let top = class.min(cap as usize).min(table.weight_bound());
        let mut p_exprs = BTreeMap::new();
        for w in 3..=top {
            for m in 1..w - 1 {
                p_exprs.insert((m, w - 1 - m), p_expression(field, m, w - 1 - m)?);
            }
        }
        Ok(PbwEnvelope {
            table,
            class,
            cap,
            weights,
            rank,
            p_exprs,
            append_memo: BTreeMap::new(),
            mul_memo: BTreeMap::new(),
        })
    }

    pub fn field(&self) -> Field {
        self.table.field()
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn table(&self) -> &SabininTable {
        &self.table
    }

    /// `N` of each basis vector.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn monomial_weight(&self, m: &[usize]) -> u32 {
        m.iter().map(|&i| self.weights[i]).sum()
    }

    /// `min N` over the support; `None` stands for `N(0) = ∞`.
    pub fn n_weight(&self, v: &PbwVec) -> Option<u32> {
        v.keys().map(|m| self.monomial_weight(m)).min()
    }

    pub fn is_ordered(&self, m: &[usize]) -> bool {
        m.windows(2).all(|p| self.rank[p[0]] <= self.rank[p[1]])
    }

    /// Ordered monomials of weight `≤ cap`, shortest first.
    pub fn basis(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by_key(|&i| self.rank[i]);
        let mut out = alloc::vec![Vec::new()];
        let mut frontier: Vec<Vec<usize>> = alloc::vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.last().map_or(0, |&l| self.rank[l]);
                for &i in &order[start..] {
                    let mut m2 = m.clone();
                    m2.push(i);
                    if self.monomial_weight(&m2) <= self.cap {
                        next.push(m2);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn single(&self, m: Vec<usize>) -> PbwVec {
        let mut v = PbwVec::new();
        if self.monomial_weight(&m) <= self.cap {
            v.insert(m, self.field().one());
        }
        v
    }

    fn basis_vec(&self, i: usize) -> Vector {
        let mut v = alloc::vec![self.field().zero(); self.dim()];
        v[i] = self.field().one();
        v
    }

    /// `u · e_b` for an ordered monomial `u`, straightened with
    /// `(w z) y = (w y) z + Σ w₍₁₎⟨w₍₂₎; y, z⟩`.
    pub fn append(&mut self, u: &[usize], b: usize) -> Result<PbwVec> {
        if self.monomial_weight(u) + self.weights[b] > self.cap {
            return Ok(PbwVec::new());
        }
        match u.last() {
            None => return Ok(self.single(alloc::vec![b])),
            Some(&l) if self.rank[l] <= self.rank[b] => {
                let mut m = u.to_vec();
                m.push(b);
                return Ok(self.single(m));
            }
            _ => {}
        }
        let key = (u.to_vec(), b);
        if let Some(v) = self.append_memo.get(&key) {
            return Ok(v.clone());
        }
        let (w, z, y) = (&u[..u.len() - 1], u[u.len() - 1], b);
        let mut out = PbwVec::new();
        for (q, c) in self.append(w, y)? {
            let r = self.append(&q, z)?;
            axpy(&mut out, &c, &r);
        }
        let n = w.len();
        for mask in 0u64..(1 << n) {
            let rest = subseq(w, !mask & ((1u64 << n) - 1));
            if rest.len() + 2 > self.table.weight_bound() {
                continue;
            }
            let head = subseq(w, mask);
            let br = self.table.ms(&rest, y, z)?;
            let v = self.times_vector(&head, &br)?;
            axpy(&mut out, &self.field().one(), &v);
        }
        self.append_memo.insert(key, out.clone());
        Ok(out)
    }

    /// `u · v` for `v ∈ 𝔰` in coordinates.
    pub fn times_vector(&mut self, u: &[usize], v: &[Scalar]) -> Result<PbwVec> {
        let mut out = PbwVec::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let r = self.append(u, i)?;
                axpy(&mut out, c, &r);
            }
        }
        Ok(out)
    }

    fn p_value(&self, xs: &[usize], ys: &[usize], z: usize) -> Result<Vector> {
        let zero = alloc::vec![self.field().zero(); self.dim()];
        let Some(expr) = self.p_exprs.get(&(xs.len(), ys.len())) else {
            // weight above the class or the cap
            return Ok(zero);
        };
        let args: Vec<Vector> = xs.iter().chain(ys).chain(core::iter::once(&z)).map(|&i| self.basis_vec(i)).collect();
        let mut out = zero;
        for (e, c) in &expr.0 {
            let v = self.table.eval_expr(e, &args)?;
            for (o, x) in out.iter_mut().zip(&v) {
                *o += &(c * x);
            }
        }
        Ok(out)
    }

    /// Product of ordered monomials, using
    /// `u(v y) = (uv)y − Σ u₍₁₎v₍₁₎ · p(u₍₂₎; v₍₂₎; y)`.
    pub fn mul(&mut self, u: &[usize], v: &[usize]) -> Result<PbwVec> {
        if self.monomial_weight(u) + self.monomial_weight(v) > self.cap {
            return Ok(PbwVec::new());
        }
        match v.len() {
            0 => return Ok(self.single(u.to_vec())),
            1 => return self.append(u, v[0]),
            _ => {}
        }
        let key = (u.to_vec(), v.to_vec());
        if let Some(r) = self.mul_memo.get(&key) {
            return Ok(r.clone());
        }
        let (vp, y) = (&v[..v.len() - 1], v[v.len() - 1]);
        let mut out = PbwVec::new();
        for (q, c) in self.mul(u, vp)? {
            let r = self.append(&q, y)?;
            axpy(&mut out, &c, &r);
        }
        let (nu, nv) = (u.len(), vp.len());
        for s in 0u64..(1 << nu) {
            let su = !s & ((1u64 << nu) - 1);
            if su == 0 {
                continue;
            }
            for t in 0u64..(1 << nv) {
                let tv = !t & ((1u64 << nv) - 1);
                if tv == 0 {
                    continue;
                }
                let p = self.p_value(&subseq(u, su), &subseq(vp, tv), y)?;
                if p.iter().all(Scalar::is_zero) {
                    continue;
                }
                for (q, c) in self.mul(&subseq(u, s), &subseq(vp, t))? {
                    let r = self.times_vector(&q, &p)?;
                    axpy(&mut out, &-c, &r);
                }
            }
        }
        self.mul_memo.insert(key, out.clone());
        Ok(out)
    }

    pub fn mul_vec(&mut self, a: &PbwVec, b: &PbwVec) -> Result<PbwVec> {
        let mut out = PbwVec::new();
        for (u, x) in a {
            for (v, y) in b {
                let r = self.mul(u, v)?;
                axpy(&mut out, &(x * y), &r);
            }
        }
        Ok(out)
    }

    /// The left-normed product of an arbitrary index sequence.
    pub fn straighten(&mut self, seq: &[usize]) -> Result<PbwVec> {
        let mut acc = self.single(Vec::new());
        for &i in seq {
            let mut next = PbwVec::new();
            for (q, c) in &acc {
                let r = self.append(q, i)?;
                axpy(&mut next, c, &r);
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `U/Ū^{cap+1}` on the ordered monomials of weight `≤ cap`, with the
    /// unit as basis vector 0.
    pub fn quotient(&mut self) -> Result<(Vec<Vec<usize>>, StructureConstants)> {
        let basis = self.basis();
        let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let field = self.field();
        let n = basis.len();
        let mut table = Vec::with_capacity(n);
        for a in &basis {
            let mut row = Vec::with_capacity(n);
            for b in &basis {
                let mut v = alloc::vec![field.zero(); n];
                for (m, c) in self.mul(a, b)? {
                    v[index[&m]] = c;
                }
                row.push(v);
            }
            table.push(row);
        }
        let mut unit = alloc::vec![field.zero(); n];
        unit[0] = field.one();
        Ok((basis, StructureConstants::new(field, table, Some(unit))?))
    }

    /// Compares the span of all products of `level` augmentation monomials
    /// (every bracketing) with the span of monomials of weight `≥ level`.
    pub fn augmentation_power_agrees(&mut self, level: u32) -> Result<bool> {
        let aug: Vec<Vec<usize>> = self.basis().into_iter().filter(|m| !m.is_empty()).collect();
        // products[j] = all products of j+1 augmentation monomials, as vectors
        let mut products: Vec<Vec<PbwVec>> = alloc::vec![aug.iter().map(|m| self.single(m.clone())).collect()];
        for j in 1..level as usize {
            let mut level_j = Vec::new();
            for left in 0..j {
                let right = j - 1 - left;
                let (ls, rs) = (products[left].clone(), products[right].clone());
                for a in &ls {
                    for b in &rs {
                        let r = self.mul_vec(a, b)?;
                        if !r.is_empty() {
                            level_j.push(r);
                        }
                    }
                }
            }
            let ech = span(self.field(), level_j.iter().cloned());
            products.push(ech.basis().cloned().collect());
        }
        let from_products = span(self.field(), products[level as usize - 1].iter().cloned());
        let high = span(
            self.field(),
            aug.iter().filter(|m| self.monomial_weight(m) >= level).map(|m| self.single(m.clone())),
        );
        Ok(same_subspace(&from_products, &high))
    }

    /// Mismatches between the table and the brackets `⟨y,z⟩ = zy − yz`,
    /// `⟨x;y,z⟩ = −(x,y,z) + (x,z,y)` and `Φ(x;y,z) = ½((x,y,z) + (x,z,y))`
    /// computed in the envelope.
    pub fn bracket_mismatches(&mut self) -> Result<Vec<alloc::string::String>> {
        let k = self.dim();
        let field = self.field();
        let vec_of = |v: &[Scalar]| -> PbwVec {
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (alloc::vec![i], c.clone())).collect()
        };
        let mut bad = Vec::new();
        for y in 0..k {
            for z in y + 1..k {
                if self.weights[y] + self.weights[z] > self.cap {
                    continue;
                }
                let mut got = self.mul(&[z], &[y])?;
                let yz = self.mul(&[y], &[z])?;
                axpy(&mut got, &-field.one(), &yz);
                if got != vec_of(&self.table.ms(&[], y, z)?) {
                    bad.push(alloc::format!("<e{},e{}>", y + 1, z + 1));
                }
            }
        }
        if self.table.weight_bound() < 3 {
            return Ok(bad);
        }
        let half = field.ratio(1, 2)?;
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    if self.weights[x] + self.weights[y] + self.weights[z] > self.cap {
                        continue;
                    }
                    let a = self.associator(x, y, z)?;
                    let b = self.associator(x, z, y)?;
                    if y < z {
                        let mut ms = b.clone();
                        axpy(&mut ms, &-field.one(), &a);
                        if ms != vec_of(&self.table.ms(&[x], y, z)?) {
                            bad.push(alloc::format!("<e{};e{},e{}>", x + 1, y + 1, z + 1));
                        }
                    }
                    if y <= z {
                        let mut phi = PbwVec::new();
                        axpy(&mut phi, &half, &a);
                        axpy(&mut phi, &half, &b);
                        if phi != vec_of(&self.table.phi(&[x], &[y, z])?) {
                            bad.push(alloc::format!("Phi(e{};e{},e{})", x + 1, y + 1, z + 1));
                        }
                    }
                }
            }
        }
        Ok(bad)
    }

    fn associator(&mut self, x: usize, y: usize, z: usize) -> Result<PbwVec> {
        let xy = self.mul(&[x], &[y])?;
        let mut out = PbwVec::new();
        for (q, c) in xy {
            let r = self.append(&q, z)?;
            axpy(&mut out, &c, &r);
        }
        let yz = self.mul(&[y], &[z])?;
        for (q, c) in yz {
            let r = self.mul(&[x], &q)?;
            axpy(&mut out, &-c, &r);
        }
        Ok(out)
    }
}

/// Result of embedding a nilpotent algebra into `U/Ū^{n+1}`.
#[derive(Clone, Debug)]
pub struct AdoCertificate {
    pub class: usize,
    pub quotient_dim: usize,
    pub basis: Vec<Vec<usize>>,
    /// Coordinates of each basis vector of the algebra in the quotient.
    pub embedding: Vec<Vector>,
    pub rank: usize,
    /// Products of `n+1` augmentation elements span the weight `> n` part.
    pub spans_agree: bool,
    /// Bracket mismatches between the table and the quotient.
    pub bracket_mismatches: Vec<alloc::string::String>,
    pub quotient: StructureConstants,
}

impl AdoCertificate {
    pub fn injective(&self) -> bool {
        self.rank == self.embedding.len()
    }

    pub fn passed(&self) -> bool {
        self.injective() && self.spans_agree && self.bracket_mismatches.is_empty()
    }
}

/// Builds `U(𝔰)/Ū^{n+1}` for the class `n` of `table` and certifies that
/// `𝔰` embeds. The spanning check runs in the envelope one level higher.
pub fn ado_certificate(table: &SabininTable) -> Result<AdoCertificate> {
    let mut env = PbwEnvelope::new(table.clone(), 0)?;
    let class = env.class();
    env = PbwEnvelope::new(table.clone(), class as u32)?;
    let (basis, quotient) = env.quotient()?;
    let field = table.field();
    let index: BTreeMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let embedding: Vec<Vector> = (0..table.dim())
        .map(|i| {
            let mut v = alloc::vec![field.zero(); basis.len()];
            if let Some(&j) = index.get(&alloc::vec![i]) {
                v[j] = field.one();
            }
            v
        })
        .collect();
    let rank = span(field, embedding.iter().map(|v| dense_to_sparse(v))).rank();
    let mismatches = env.bracket_mismatches()?;
    let mut wide = PbwEnvelope::new(table.clone(), class as u32 + 1)?;
    let spans_agree = wide.augmentation_power_agrees(class as u32 + 1)?;
    Ok(AdoCertificate {
        class,
        quotient_dim: basis.len(),
        basis,
        embedding,
        rank,
        spans_agree,
        bracket_mismatches: mismatches,
        quotient,
    })
}
