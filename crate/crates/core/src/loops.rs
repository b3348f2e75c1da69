//! Finite loops given by Cayley tables, their loop algebras, powers of the
//! augmentation ideal, dimension subloops, an operational
//! commutator-associator filtration, and the lattice check that a
//! torsion-free nilpotent polynomial loop embeds into `U/Ū^{n+1}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bch::{adapted_weights, integrate};
use crate::error::{Error, Result};
use crate::formal_loop::PolyLoop;
use crate::linalg::{dense_to_sparse, span, Echelon};
use crate::pbw::{ado_certificate, AdoCertificate};
use crate::scalar::{Field, Scalar};
use crate::structure::{add_vec, is_zero_vec, scale_vec, sub_vec, StructureConstants, Vector};
use crate::table::SabininTable;

pub type Subloop = BTreeSet<usize>;

/// A validated Cayley table with both division tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyLoop {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    left_div: Vec<Vec<usize>>,
    right_div: Vec<Vec<usize>>,
}

impl CayleyLoop {
    /// Checks the Latin-square property and finds the identity.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotALoop("empty table".into()));
        }
        if names.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: names.len() });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotALoop(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::NotALoop(format!("row {i} contains index {bad} out of range")));
            }
        }
        let mut left_div = alloc::vec![alloc::vec![usize::MAX; n]; n];
        let mut right_div = alloc::vec![alloc::vec![usize::MAX; n]; n];
        for a in 0..n {
            for x in 0..n {
                let b = table[a][x];
                if left_div[a][b] != usize::MAX {
                    return Err(Error::NotALoop(format!("row {a} repeats entry {b}")));
                }
                left_div[a][b] = x;
                let c = table[x][a];
                if right_div[c][a] != usize::MAX {
                    return Err(Error::NotALoop(format!("column {a} repeats entry {c}")));
                }
                right_div[c][a] = x;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
            .ok_or_else(|| Error::NotALoop("no two-sided identity".into()))?;
        Ok(CayleyLoop { names, table, identity, left_div, right_div })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let names = (0..n).map(|i| format!("g{i}")).collect();
        Self::new(names, (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, |i, j| (i + j) % n).expect("cyclic group")
    }

    /// Direct product; element `(a, b)` has index `a + |self|·b`.
    pub fn product(&self, o: &CayleyLoop) -> Self {
        let n = self.order();
        let names = (0..n * o.order())
            .map(|k| format!("({},{})", self.names[k % n], o.names[k / n]))
            .collect();
        let table = (0..n * o.order())
            .map(|x| (0..n * o.order()).map(|y| self.mul(x % n, y % n) + n * o.mul(x / n, y / n)).collect())
            .collect();
        Self::new(names, table).expect("product of loops")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// `a\b`: the `x` with `ax = b`.
    pub fn ldiv(&self, a: usize, b: usize) -> usize {
        self.left_div[a][b]
    }

    /// `a/b`: the `x` with `xb = a`.
    pub fn rdiv(&self, a: usize, b: usize) -> usize {
        self.right_div[a][b]
    }

    /// `(yx)\(xy)`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.ldiv(self.mul(y, x), self.mul(x, y))
    }

    /// `(x(yz))\((xy)z)`.
    pub fn associator(&self, x: usize, y: usize, z: usize) -> usize {
        self.ldiv(self.mul(x, self.mul(y, z)), self.mul(self.mul(x, y), z))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.associator(x, y, z) == self.identity)))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Smallest subloop containing `gens`.
    pub fn subloop_closure(&self, gens: impl IntoIterator<Item = usize>) -> Subloop {
        self.closure(gens, false)
    }

    /// Smallest normal subloop containing `gens`.
    pub fn normal_closure(&self, gens: impl IntoIterator<Item = usize>) -> Subloop {
        self.closure(gens, true)
    }

    fn closure(&self, gens: impl IntoIterator<Item = usize>, normal: bool) -> Subloop {
        let n = self.order();
        let mut set: Subloop = gens.into_iter().collect();
        set.insert(self.identity);
        loop {
            let mut fresh = Vec::new();
            for &a in &set {
                for &b in &set {
                    fresh.extend([self.mul(a, b), self.ldiv(a, b), self.rdiv(a, b)]);
                }
                if normal {
                    for x in 0..n {
                        fresh.push(self.ldiv(x, self.mul(a, x)));
                        for y in 0..n {
                            fresh.push(self.ldiv(self.mul(y, x), self.mul(y, self.mul(x, a))));
                            fresh.push(self.rdiv(self.mul(self.mul(a, x), y), self.mul(x, y)));
                        }
                    }
                }
            }
            let before = set.len();
            set.extend(fresh);
            if set.len() == before {
                return set;
            }
        }
    }

    pub fn is_subloop(&self, s: &Subloop) -> bool {
        s.contains(&self.identity)
            && s.iter().all(|&a| {
                s.iter().all(|&b| s.contains(&self.mul(a, b)) && s.contains(&self.ldiv(a, b)) && s.contains(&self.rdiv(a, b)))
            })
    }

    /// Subloop invariant under `T_x`, `L_{x,y}` and `R_{x,y}`.
    pub fn is_normal(&self, s: &Subloop) -> bool {
        self.is_subloop(s) && self.normal_closure(s.iter().copied()) == *s
    }

    pub fn describe(&self, s: &Subloop) -> Vec<String> {
        s.iter().map(|&i| self.names[i].clone()).collect()
    }
}

/// The loop of pairs `(a, c)`, `a ∈ (ℤ/2)²`, `c ∈ ℤ/2`, with
/// `(a,c)(b,d) = (a+b, c+d+a₁a₂b₁)`. Index `a₁ + 2a₂ + 4c`.
pub fn central_extension_loop() -> CayleyLoop {
    let split = |i: usize| (i & 1, (i >> 1) & 1, (i >> 2) & 1);
    let names = (0..8)
        .map(|i| {
            let (a1, a2, c) = split(i);
            format!("{a1}{a2}{c}")
        })
        .collect();
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (a1, a2, c) = split(x);
                    let (b1, b2, d) = split(y);
                    ((a1 + b1) % 2) + 2 * ((a2 + b2) % 2) + 4 * ((c + d + a1 * a2 * b1) % 2)
                })
                .collect()
        })
        .collect();
    CayleyLoop::new(names, table).expect("central extension is a loop")
}

/// The loop algebra `𝒌[L]` with the loop elements as basis.
#[derive(Clone, Debug)]
pub struct LoopAlgebra {
    algebra: StructureConstants,
    identity: usize,
}

impl LoopAlgebra {
    pub fn new(l: &CayleyLoop, field: Field) -> Self {
        let n = l.order();
        let unit = Some(unit_vector(field, n, l.identity()));
        let algebra = StructureConstants::from_fn(field, n, unit, |i, j| unit_vector(field, n, l.mul(i, j)))
            .expect("permutation structure constants");
        LoopAlgebra { algebra, identity: l.identity() }
    }

    pub fn algebra(&self) -> &StructureConstants {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn augmentation(&self, v: &[Scalar]) -> Scalar {
        let mut s = self.field().zero();
        for c in v {
            s += c;
        }
        s
    }

    /// `g − 1` for an element index `g`.
    pub fn minus_one(&self, g: usize) -> Vector {
        let n = self.algebra.dim();
        sub_vec(&unit_vector(self.field(), n, g), &unit_vector(self.field(), n, self.identity))
    }
}

fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = alloc::vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// `Ī ⊇ Ī² ⊇ …`, each power spanned by all products `Īⁱ·Ī^{k−i}`.
#[derive(Clone, Debug)]
pub struct AugmentationChain {
    /// `powers[k]` is a basis of `Ī^{k+1}`.
    pub powers: Vec<Vec<Vector>>,
    /// The chain reached zero.
    pub reaches_zero: bool,
}

impl AugmentationChain {
    pub fn dims(&self) -> Vec<usize> {
        self.powers.iter().map(Vec::len).collect()
    }

    /// Whether `v ∈ Īᵏ` (`k ≥ 1`); powers beyond the computed chain repeat
    /// the last term or are zero.
    pub fn contains(&self, k: usize, v: &[Scalar], field: Field) -> bool {
        let level = k.max(1) - 1;
        match self.powers.get(level).or(if self.reaches_zero { None } else { self.powers.last() }) {
            Some(basis) => span(field, basis.iter().map(|b| dense_to_sparse(b))).contains(&dense_to_sparse(v)),
            None => is_zero_vec(v),
        }
    }
}

/// Powers of the augmentation ideal until zero or until the dimensions
/// stop changing for `repeat` consecutive steps; at most `max_len` terms.
pub fn augmentation_powers(la: &LoopAlgebra, max_len: usize) -> AugmentationChain {
    let field = la.field();
    let n = la.algebra.dim();
    let first: Vec<Vector> = (0..n).filter(|&g| g != la.identity).map(|g| la.minus_one(g)).collect();
    let mut powers = alloc::vec![echelon_basis(field, n, first)];
    let repeat = 2;
    while powers.len() < max_len && !powers.last().unwrap().is_empty() {
        let k = powers.len() + 1;
        let mut spanning = Vec::new();
        for i in 1..k {
            for a in &powers[i - 1] {
                for b in &powers[k - i - 1] {
                    spanning.push(la.algebra.mul(a, b));
                }
            }
        }
        powers.push(echelon_basis(field, n, spanning));
        let m = powers.len();
        if m > repeat && (m - repeat - 1..m).all(|j| powers[j].len() == powers[m - 1].len()) {
            break;
        }
    }
    let reaches_zero = powers.last().is_none_or(Vec::is_empty);
    AugmentationChain { powers, reaches_zero }
}

fn echelon_basis(field: Field, n: usize, vs: Vec<Vector>) -> Vec<Vector> {
    let mut e: Echelon<usize> = Echelon::new(field);
    let mut out = Vec::new();
    for v in vs {
        if e.push(&dense_to_sparse(&v)) {
            out.push(v);
        }
    }
    debug_assert!(out.iter().all(|v| v.len() == n));
    out
}

/// `Dₖ = {g : g − 1 ∈ Īᵏ}` with subloop and normality verification.
#[derive(Clone, Debug)]
pub struct DimensionSubloops {
    pub field: Field,
    /// `terms[k]` is `D_{k+1}`.
    pub terms: Vec<Subloop>,
    pub subloop_ok: Vec<bool>,
    pub normal_ok: Vec<bool>,
    pub chain: AugmentationChain,
}

impl DimensionSubloops {
    pub fn verified(&self) -> bool {
        self.subloop_ok.iter().all(|&b| b) && self.normal_ok.iter().all(|&b| b)
    }

    /// The distinct terms strictly descend and the last is trivial.
    pub fn strictly_descending_to_trivial(&self) -> bool {
        let distinct: Vec<&Subloop> = self.terms.iter().fold(Vec::new(), |mut acc: Vec<&Subloop>, t| {
            if acc.last() != Some(&t) {
                acc.push(t);
            }
            acc
        });
        distinct.windows(2).all(|w| w[1].is_subset(w[0]) && w[1].len() < w[0].len())
            && distinct.last().is_some_and(|t| t.len() == 1)
    }
}

pub fn dimension_subloops(l: &CayleyLoop, field: Field) -> DimensionSubloops {
    let la = LoopAlgebra::new(l, field);
    let chain = augmentation_powers(&la, l.order() + 2);
    let levels = chain.powers.len() + usize::from(chain.reaches_zero);
    let mut terms = Vec::new();
    for k in 1..=levels.max(1) {
        let t: Subloop = (0..l.order()).filter(|&g| chain.contains(k, &la.minus_one(g), field)).collect();
        terms.push(t);
    }
    let subloop_ok = terms.iter().map(|t| l.is_subloop(t)).collect();
    let normal_ok = terms.iter().map(|t| l.is_normal(t)).collect();
    DimensionSubloops { field, terms, subloop_ok, normal_ok, chain }
}

/// The fastest descending chain `γ₁ = L`, `γₖ` normally generated by
/// commutators, associators and associator deviations whose argument
/// levels sum to at least `k`. This is an operational definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommAssocFiltration {
    pub terms: Vec<Subloop>,
    /// Length of the chain before the trivial term, if it was reached.
    pub class: Option<usize>,
}

pub fn comm_assoc_filtration(l: &CayleyLoop, max_len: usize) -> CommAssocFiltration {
    let n = l.order();
    let e = l.identity();
    let all: Subloop = (0..n).collect();
    let mut terms = alloc::vec![all];
    let mut level = alloc::vec![1usize; n];
    level[e] = usize::MAX / 8;
    let deviations = n <= 32;
    while terms.last().unwrap().len() > 1 && terms.len() < max_len {
        let k = terms.len() + 1;
        let lv = |a: usize| level[a];
        let mut gens = BTreeSet::new();
        for x in 0..n {
            for y in 0..n {
                if lv(x) + lv(y) >= k {
                    gens.insert(l.commutator(x, y));
                }
                for z in 0..n {
                    let s = lv(x) + lv(y) + lv(z);
                    if s >= k {
                        gens.insert(l.associator(x, y, z));
                    }
                    if deviations {
                        for w in 0..n {
                            if s + lv(w) >= k {
                                for slot in 0..3 {
                                    gens.insert(associator_deviation(l, slot, [x, y, z, w]));
                                }
                            }
                        }
                    }
                }
            }
        }
        let next = l.normal_closure(gens);
        for &g in &next {
            if g != e {
                level[g] = k;
            }
        }
        terms.push(next);
    }
    let class = (terms.last().unwrap().len() == 1).then(|| terms.len() - 1);
    CommAssocFiltration { terms, class }
}

impl CommAssocFiltration {
    /// The chain with repeated terms removed.
    pub fn distinct_terms(&self) -> Vec<&Subloop> {
        let mut out: Vec<&Subloop> = Vec::new();
        for t in &self.terms {
            if out.last() != Some(&t) {
                out.push(t);
            }
        }
        out
    }
}

/// Lower central series: the next term is normally generated by
/// commutators and associators with at least one argument in the current
/// term. Returns the series and the class if it reaches the trivial loop.
pub fn lower_central_series(l: &CayleyLoop) -> (Vec<Subloop>, Option<usize>) {
    let n = l.order();
    let mut terms: Vec<Subloop> = alloc::vec![(0..n).collect()];
    loop {
        let last = terms.last().unwrap();
        if last.len() == 1 {
            let class = terms.len() - 1;
            return (terms, Some(class));
        }
        let mut gens = BTreeSet::new();
        for &a in last {
            for x in 0..n {
                gens.insert(l.commutator(a, x));
                for y in 0..n {
                    gens.extend([l.associator(a, x, y), l.associator(x, a, y), l.associator(x, y, a)]);
                }
            }
        }
        let next = l.normal_closure(gens);
        if &next == last {
            return (terms, None);
        }
        terms.push(next);
    }
}

/// The associator deviation in `slot`: the slot is split into `a[0]a[1]`,
/// the other two slots take `a[2]`, `a[3]`.
fn associator_deviation(l: &CayleyLoop, slot: usize, a: [usize; 4]) -> usize {
    let assoc = |u: usize| {
        let mut args = [a[2], a[3]];
        let mut full = [0usize; 3];
        let mut it = args.iter_mut();
        for (i, f) in full.iter_mut().enumerate() {
            *f = if i == slot { u } else { *it.next().unwrap() };
        }
        l.associator(full[0], full[1], full[2])
    };
    l.ldiv(l.mul(assoc(a[0]), assoc(a[1])), assoc(l.mul(a[0], a[1])))
}

/// Polynomial-loop elements mapped to `exp(v)` in `U/Ū^{n+1}`.
#[derive(Clone, Debug)]
pub struct LatticeEmbedding {
    pub certificate: AdoCertificate,
    pub poly_loop: PolyLoop,
    /// Weight of each quotient basis monomial.
    pub basis_weights: Vec<u32>,
}

impl LatticeEmbedding {
    pub fn new(table: &SabininTable) -> Result<Self> {
        let certificate = ado_certificate(table)?;
        let poly_loop = integrate(table)?;
        let (_, weights) = adapted_weights(table)?;
        let basis_weights = certificate.basis.iter().map(|m| m.iter().map(|&i| weights[i]).sum()).collect();
        Ok(LatticeEmbedding { certificate, poly_loop, basis_weights })
    }

    fn quotient(&self) -> &StructureConstants {
        &self.certificate.quotient
    }

    fn one(&self) -> Vector {
        self.quotient().unit().cloned().expect("quotient has a unit")
    }

    /// `Σ_{k≤n} vᵏ/k!` with left-normed powers.
    pub fn image(&self, v: &[Scalar]) -> Result<Vector> {
        let q = self.quotient();
        let field = q.field();
        let mut x = q.zero();
        for (c, e) in v.iter().zip(&self.certificate.embedding) {
            x = add_vec(&x, &scale_vec(c, e));
        }
        let mut out = self.one();
        let mut pw = self.one();
        for k in 1..=self.certificate.class as u64 {
            pw = q.mul(&pw, &x);
            out = add_vec(&out, &scale_vec(&field.inv_factorial(k)?, &pw));
        }
        Ok(out)
    }

    /// `a\b` in the quotient for `a` with augmentation 1.
    pub fn ldiv(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let q = self.quotient();
        let a1 = sub_vec(a, &self.one());
        let mut u = b.to_vec();
        for _ in 0..=self.certificate.class {
            u = sub_vec(b, &q.mul(&a1, &u));
        }
        u
    }

    /// The part of `v` on monomials of weight `w`.
    pub fn weight_component(&self, v: &[Scalar], w: u32) -> Vec<(usize, Scalar)> {
        v.iter()
            .enumerate()
            .filter(|(i, c)| self.basis_weights[*i] == w && !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }
}

/// Outcome of the lattice embedding check.
#[derive(Clone, Debug)]
pub struct LoopAdoReport {
    pub class: usize,
    pub quotient_dim: usize,
    pub sample: usize,
    pub distinct_images: usize,
    pub identity_to_one: bool,
    pub pairs_checked: usize,
    /// Pairs `g₁ ≠ g₂` with `1 − g₁\g₂ = 0`, or `g₁ = g₂` with it nonzero.
    pub division_failures: Vec<String>,
    /// Pairs where `exp(F(v,w)) ≠ exp(v)·exp(w)`. Informational: the
    /// exponential coordinates fail this on the class-three fixture.
    pub product_mismatches: Vec<String>,
    pub warnings: Vec<String>,
}

impl LoopAdoReport {
    pub fn injective(&self) -> bool {
        self.distinct_images == self.sample && self.identity_to_one && self.division_failures.is_empty()
    }
}

/// Integer points of `[−r, r]^dim` in lexicographic order.
pub fn lattice_points(field: Field, dim: usize, r: i64) -> Vec<Vector> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vector| (-r..=r).map(move |c| {
                let mut q = p.clone();
                q.push(field.int(c));
                q
            }))
            .collect();
    }
    out
}

/// Maps the sample into `U/Ū^{n+1}` and checks distinctness, the division
/// argument and the product on `partners` pairs per element.
pub fn loop_ado_check(table: &SabininTable, points: &[Vector], partners: usize) -> Result<LoopAdoReport> {
    let emb = LatticeEmbedding::new(table)?;
    if let Some(p) = points.iter().find(|p| p.len() != table.dim()) {
        return Err(Error::DimensionMismatch { expected: table.dim(), found: p.len() });
    }
    let mut warnings = Vec::new();
    if points.len() < 2 {
        warnings.push("sample too small to be meaningful".to_string());
    }
    let images: Vec<Vector> = points.iter().map(|p| emb.image(p)).collect::<Result<_>>()?;
    let distinct: BTreeSet<&Vector> = images.iter().collect();
    let origin = points.iter().position(|p| p.iter().all(Scalar::is_zero));
    let identity_to_one = origin.is_some_and(|i| images[i] == emb.one());
    let n = points.len();
    let mut pairs = BTreeMap::new();
    for i in 0..n {
        for j in 0..partners.min(n) {
            let k = (i * 7 + j * 13 + j * j) % n;
            pairs.insert((i, k), ());
        }
    }
    let mut division_failures = Vec::new();
    let mut product_mismatches = Vec::new();
    for &(i, k) in pairs.keys() {
        let u = emb.ldiv(&images[i], &images[k]);
        let trivial = is_zero_vec(&sub_vec(&emb.one(), &u));
        if trivial != (i == k) {
            division_failures.push(format!("{} \\ {}", show_point(&points[i]), show_point(&points[k])));
        }
        let prod = emb.poly_loop.mul_points(&points[i], &points[k]);
        if emb.image(&prod)? != emb.quotient().mul(&images[i], &images[k]) {
            product_mismatches.push(format!("{} * {}", show_point(&points[i]), show_point(&points[k])));
        }
    }
    Ok(LoopAdoReport {
        class: emb.certificate.class,
        quotient_dim: emb.certificate.quotient_dim,
        sample: n,
        distinct_images: distinct.len(),
        identity_to_one,
        pairs_checked: pairs.len(),
        division_failures,
        product_mismatches,
        warnings,
    })
}

fn show_point(p: &[Scalar]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_repeated_row_entry() {
        let t = alloc::vec![alloc::vec![0, 1], alloc::vec![1, 1]];
        assert!(matches!(CayleyLoop::new(alloc::vec!["a".into(), "b".into()], t), Err(Error::NotALoop(_))));
    }

    #[test]
    fn cyclic_two_over_rationals_stabilizes() {
        let la = LoopAlgebra::new(&CayleyLoop::cyclic(2), Field::Rational);
        let chain = augmentation_powers(&la, 6);
        assert_eq!(chain.dims()[..2], [1, 1]);
        assert!(!chain.reaches_zero);
    }
}
