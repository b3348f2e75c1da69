//! Sparse exact linear algebra: echelon bases, membership, solving and kernels.
//!
//! Vectors are maps from an ordered key type to nonzero scalars, so the same
//! machinery serves coordinate vectors (`usize` keys), free-algebra elements
//! (word keys) and operator polynomials.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Bound;

use crate::scalar::{Field, Scalar};

pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// `acc += c * v`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, c: &Scalar, v: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_term(acc, k.clone(), &(c * x));
    }
}

pub fn add_term<K: Ord>(acc: &mut SparseVec<K>, k: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(k) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scale<K: Ord + Clone>(v: &SparseVec<K>, c: &Scalar) -> SparseVec<K> {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (k.clone(), c * x)).collect()
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(field: Field, v: &SparseVec<usize>, dim: usize) -> Vec<Scalar> {
    let mut out = alloc::vec![field.zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

#[derive(Clone, Debug)]
struct Row<K> {
    pivot: K,
    vec: SparseVec<K>,
    /// Coefficients over the inserted vectors that produce `vec`.
    combo: SparseVec<usize>,
}

/// An incrementally built echelon basis of a subspace.
///
/// Every inserted vector gets an index; independent ones become rows. The
/// basis remembers how each row was combined from inserted vectors, which
/// makes `solve` and relation extraction possible.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    field: Field,
    rows: Vec<Row<K>>,
    pivots: BTreeMap<K, usize>,
    inserted: usize,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Debug, Clone)]
pub enum Insert {
    /// The vector was independent and is now basis row `row`.
    Independent { index: usize },
    /// The vector depends on earlier ones: `relation` is a nonzero
    /// combination over inserted indices that vanishes.
    Dependent { index: usize, relation: SparseVec<usize> },
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: Vec::new(), pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v`; returns the remainder and the combination of inserted
    /// vectors that was subtracted.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => rem.range::<K, _>(..),
                    Some(c) => rem.range::<K, _>((Bound::Excluded(c), Bound::Unbounded)),
                };
                let mut found = None;
                for (k, c) in range {
                    if let Some(&r) = self.pivots.get(k) {
                        found = Some((k.clone(), c.clone(), r));
                        break;
                    }
                }
                found
            };
            let Some((k, c, r)) = next else { break };
            let row = &self.rows[r];
            axpy(&mut rem, &(-&c), &row.vec);
            axpy(&mut combo, &c, &row.combo);
            cursor = Some(k);
        }
        (rem, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    pub fn insert(&mut self, v: &SparseVec<K>) -> Insert {
        let index = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce(v);
        if rem.is_empty() {
            let mut relation = scale(&combo, &(-self.field.one()));
            add_term(&mut relation, index, &self.field.one());
            return Insert::Dependent { index, relation };
        }
        let (pivot, lead) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
        let inv = lead.inverse().unwrap();
        let vec = scale(&rem, &inv);
        // rem = v - combo·inserted, so vec = inv·(e_index - combo)
        let mut c = scale(&combo, &(-&inv));
        add_term(&mut c, index, &inv);
        self.pivots.insert(pivot.clone(), self.rows.len());
        self.rows.push(Row { pivot, vec, combo: c });
        Insert::Independent { index }
    }

    /// Inserts and reports whether the vector enlarged the span.
    pub fn push(&mut self, v: &SparseVec<K>) -> bool {
        matches!(self.insert(v), Insert::Independent { .. })
    }

    /// Coefficients over inserted vectors reproducing `v`, if `v` is in the span.
    pub fn solve(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }

    /// The (normalized) basis rows.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.iter().map(|r| &r.vec)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.iter().map(|r| &r.pivot)
    }
}

/// Basis of the linear relations among `vectors` (kernel of the column map).
pub fn relations<K: Ord + Clone>(field: Field, vectors: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut ech = Echelon::new(field);
    let mut out = Vec::new();
    for v in vectors {
        if let Insert::Dependent { relation, .. } = ech.insert(v) {
            out.push(relation);
        }
    }
    out
}

/// Echelon basis spanned by `vectors`.
pub fn span<K: Ord + Clone>(field: Field, vectors: impl IntoIterator<Item = SparseVec<K>>) -> Echelon<K> {
    let mut ech = Echelon::new(field);
    for v in vectors {
        ech.insert(&v);
    }
    ech
}

/// `a ⊆ b` for echelon-represented subspaces.
pub fn subspace_of<K: Ord + Clone>(a: &Echelon<K>, b: &Echelon<K>) -> bool {
    a.basis().all(|v| b.contains(v))
}

pub fn same_subspace<K: Ord + Clone>(a: &Echelon<K>, b: &Echelon<K>) -> bool {
    a.rank() == b.rank() && subspace_of(a, b)
}

/// Dense matrix helper: kernel of the map `x ↦ Σ xᵢ columns[i]`.
pub fn kernel_dense(field: Field, columns: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let sparse: Vec<_> = columns.iter().map(|c| dense_to_sparse(c)).collect();
    relations(field, &sparse)
        .into_iter()
        .map(|r| sparse_to_dense(field, &r, columns.len()))
        .collect()
}

pub fn rank_dense(field: Field, vectors: &[Vec<Scalar>]) -> usize {
    span(field, vectors.iter().map(|v| dense_to_sparse(v))).rank()
}
