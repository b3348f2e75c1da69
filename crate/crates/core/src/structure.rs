//! Finite-dimensional algebras given by structure constants, and the
//! evaluation of free-algebra elements in them.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::scalar::{Field, Scalar};
use crate::word::Word;

pub type Vector = Vec<Scalar>;

/// `eᵢeⱼ = Σₘ table[i][j][m] eₘ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    field: Field,
    dim: usize,
    table: Vec<Vec<Vector>>,
    unit: Option<Vector>,
}

impl StructureConstants {
    pub fn new(field: Field, table: Vec<Vec<Vector>>, unit: Option<Vector>) -> Result<Self> {
        let dim = table.len();
        for row in &table {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for v in row {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
                }
                if let Some(c) = v.iter().find(|c| c.field() != field) {
                    return Err(Error::FieldMismatch(field, c.field()));
                }
            }
        }
        let a = StructureConstants { field, dim, table, unit };
        if let Some(u) = &a.unit {
            if u.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: u.len() });
            }
            for i in 0..dim {
                let e = a.basis(i);
                if a.mul(u, &e) != e || a.mul(&e, u) != e {
                    return Err(Error::InvalidInput("declared unit is not a two-sided unit".to_string()));
                }
            }
        }
        Ok(a)
    }

    /// Builds from a closure giving the product of basis vectors.
    pub fn from_fn(field: Field, dim: usize, unit: Option<Vector>, f: impl Fn(usize, usize) -> Vector) -> Result<Self> {
        let table = (0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect();
        Self::new(field, table, unit)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn table(&self) -> &Vec<Vec<Vector>> {
        &self.table
    }

    pub fn zero(&self) -> Vector {
        alloc::vec![self.field.zero(); self.dim]
    }

    pub fn basis(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (m, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[m] += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim).all(|k| {
                    let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
                    self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Image of `e` under the algebra map sending generator `g` to
    /// `assignment[g]` (and 1 to the unit, which must then be declared).
    pub fn evaluate(&self, e: &FreeElement, assignment: &[Vector]) -> Result<Vector> {
        if e.field() != self.field {
            return Err(Error::FieldMismatch(e.field(), self.field));
        }
        for v in assignment {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
            }
        }
        let mut memo = BTreeMap::new();
        let mut out = self.zero();
        for (w, c) in e.terms() {
            let v = self.eval_word(w, assignment, &mut memo)?;
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += &(c * x);
            }
        }
        Ok(out)
    }

    fn eval_word(&self, w: &Word, asg: &[Vector], memo: &mut BTreeMap<Word, Vector>) -> Result<Vector> {
        if let Some(v) = memo.get(w) {
            return Ok(v.clone());
        }
        let v = match w {
            Word::Unit => self
                .unit
                .clone()
                .ok_or_else(|| Error::InvalidInput("algebra has no unit but the element has a constant term".to_string()))?,
            Word::Gen(g) => asg.get(*g as usize).cloned().ok_or(Error::UnassignedGenerator(*g))?,
            Word::Pair(p, _) => {
                let l = self.eval_word(&p.0, asg, memo)?;
                let r = self.eval_word(&p.1, asg, memo)?;
                self.mul(&l, &r)
            }
        };
        memo.insert(w.clone(), v.clone());
        Ok(v)
    }

    /// Full matrix algebra `M_n`, basis `E_{ij}` in row-major order.
    pub fn matrices(field: Field, n: usize) -> Self {
        let idx = |i: usize, j: usize| i * n + j;
        let mut id = alloc::vec![field.zero(); n * n];
        for i in 0..n {
            id[idx(i, i)] = field.one();
        }
        Self::from_fn(field, n * n, Some(id), |a, b| {
            let (i, j) = (a / n, a % n);
            let (k, l) = (b / n, b % n);
            let mut v = alloc::vec![field.zero(); n * n];
            if j == k {
                v[idx(i, l)] = field.one();
            }
            v
        })
        .expect("matrix algebra is well formed")
    }

    /// The base field as a one-dimensional algebra.
    pub fn scalars(field: Field) -> Self {
        Self::from_fn(field, 1, Some(alloc::vec![field.one()]), |_, _| alloc::vec![field.one()]).unwrap()
    }
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use alloc::string::ToString;
    use crate::free::parse_element;

    #[test]
    fn matrix_commutator() {
        let q = Field::Rational;
        let m = StructureConstants::matrices(q, 2);
        let e = parse_element(q, 2, "(x1 x2) - (x2 x1)").unwrap();
        let v = m.evaluate(&e, &[m.basis(1), m.basis(2)]).unwrap();
        assert_eq!(v, alloc::vec![q.int(1), q.int(0), q.int(0), q.int(-1)]);
        assert!(m.is_associative());
        assert!(!m.is_commutative());
        assert!(matches!(m.evaluate(&e, &[m.basis(0)]), Err(Error::UnassignedGenerator(1))));
    }
}
