//! The ring GF(2^m)[X]/⟨N(X)⟩ with N irreducible over GF(2), ideal matrices
//! and column-wise ring products of matrices.

use std::sync::Arc;

use crate::clmul::Wide;
use crate::error::{dim, param, Result};
use crate::galois::{Field, FieldElement};
use crate::gf2x::{self, BitPoly};
use crate::linalg::Matrix;

/// GF(2^m)[X]/⟨N(X)⟩ of degree n.
#[derive(Clone, Debug)]
pub struct Ring {
    field: Arc<Field>,
    n: usize,
    modulus: BitPoly,
    /// Exponents below n of the nonzero terms of N.
    tail: Vec<usize>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.modulus == other.modulus
    }
}

impl Eq for Ring {}

impl Ring {
    /// Ring with the lexicographically smallest irreducible N of degree n.
    pub fn new(field: Arc<Field>, n: usize) -> Result<Self> {
        if n == 0 {
            return param("ring degree must be positive");
        }
        Self::with_modulus(field, gf2x::find_irreducible(n))
    }

    pub fn with_modulus(field: Arc<Field>, modulus: BitPoly) -> Result<Self> {
        let Some(n) = modulus.degree().filter(|&d| d > 0) else {
            return param("ring modulus must have positive degree");
        };
        if !modulus.is_irreducible() {
            return param(format!("ring modulus of degree {n} is not irreducible"));
        }
        let tail = modulus.exponents().into_iter().filter(|&e| e < n).collect();
        Ok(Self { field, n, modulus, tail })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &BitPoly {
        &self.modulus
    }

    /// The unit (1, 0, …, 0).
    pub fn one(&self) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.n];
        v[0] = FieldElement::ONE;
        v
    }

    fn check(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.n {
            return dim(format!("ring element of length {} in a ring of degree {}", v.len(), self.n));
        }
        Ok(())
    }

    /// Reduces a coefficient vector of length up to 2n − 1 modulo N.
    fn reduce_poly(&self, mut c: Vec<FieldElement>) -> Vec<FieldElement> {
        let n = self.n;
        for i in (n..c.len()).rev() {
            let top = c[i];
            if !top.is_zero() {
                for &e in &self.tail {
                    c[i - n + e] += top;
                }
            }
        }
        c.truncate(n);
        c.resize(n, FieldElement::ZERO);
        c
    }

    /// u(X)·v(X) mod N(X).
    pub fn mul(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check(u)?;
        self.check(v)?;
        let n = self.n;
        let mut acc = vec![Wide::default(); 2 * n - 1];
        for (i, &a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (w, &b) in acc[i..i + n].iter_mut().zip(v) {
                *w ^= self.field.mul_wide(a, b);
            }
        }
        let prod = acc.into_iter().map(|w| self.field.reduce(w)).collect();
        Ok(self.reduce_poly(prod))
    }

    /// X·v(X) mod N(X).
    fn shift(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut c = Vec::with_capacity(self.n + 1);
        c.push(FieldElement::ZERO);
        c.extend_from_slice(v);
        self.reduce_poly(c)
    }

    /// n×n matrix with row i equal to X^i·v mod N.
    pub fn ideal_matrix(&self, v: &[FieldElement]) -> Result<Matrix> {
        self.check(v)?;
        let mut rows = Vec::with_capacity(self.n);
        let mut cur = v.to_vec();
        for _ in 0..self.n {
            let next = self.shift(&cur);
            rows.push(std::mem::replace(&mut cur, next));
        }
        Matrix::from_rows(&rows)
    }

    /// Matrix whose column j is z·(column j of M).
    pub fn vec_mat_mul(&self, z: &[FieldElement], m: &Matrix) -> Result<Matrix> {
        self.check(z)?;
        if m.rows() != self.n {
            return dim(format!("matrix has {} rows, ring degree is {}", m.rows(), self.n));
        }
        let cols: Vec<Vec<FieldElement>> = (0..m.cols()).map(|j| self.mul(z, &m.col(j))).collect::<Result<_>>()?;
        Ok(Matrix::from_fn(self.n, m.cols(), |i, j| cols[j][i]))
    }
}

/// a×b matrix whose column j is the j-th length-a chunk of v.
pub fn fold(v: &[FieldElement], a: usize) -> Result<Matrix> {
    if a == 0 || v.len() % a != 0 {
        return dim(format!("length {} is not a multiple of {a}", v.len()));
    }
    let b = v.len() / a;
    Ok(Matrix::from_fn(a, b, |i, j| v[j * a + i]))
}

/// Concatenation of the columns of M; inverse of [`fold`].
pub fn unfold(m: &Matrix) -> Vec<FieldElement> {
    (0..m.cols()).flat_map(|j| m.col(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u128) -> FieldElement {
        FieldElement::from_bits(v)
    }

    #[test]
    fn small_ring_example() {
        let f = Arc::new(Field::new(3).unwrap());
        let r = Ring::new(f, 2).unwrap();
        assert_eq!(r.modulus(), &BitPoly::from_exponents(&[2, 1, 0]));
        assert_eq!(r.mul(&[fe(1), fe(0)], &[fe(0), fe(1)]).unwrap(), vec![fe(0), fe(1)]);
        // X·X = X + 1
        assert_eq!(r.mul(&[fe(0), fe(1)], &[fe(0), fe(1)]).unwrap(), vec![fe(1), fe(1)]);
    }

    #[test]
    fn ideal_matrix_of_unit_and_zero() {
        let f = Arc::new(Field::new(5).unwrap());
        let r = Ring::new(f, 7).unwrap();
        assert_eq!(r.ideal_matrix(&r.one()).unwrap(), Matrix::identity(7));
        assert_eq!(r.ideal_matrix(&[FieldElement::ZERO; 7]).unwrap(), Matrix::zeros(7, 7));
        assert!(r.mul(&[fe(1)], &r.one()).is_err());
    }

    #[test]
    fn fold_example() {
        let v = [fe(1), fe(2), fe(3), fe(4)];
        let m = fold(&v, 2).unwrap();
        assert_eq!(m.col(0), vec![fe(1), fe(2)]);
        assert_eq!(m.col(1), vec![fe(3), fe(4)]);
        assert_eq!(unfold(&m), v.to_vec());
        assert_eq!(fold(&v, 1).unwrap().rows(), 1);
        assert!(fold(&v, 3).is_err());
    }

    #[test]
    fn rejects_reducible_modulus() {
        let f = Arc::new(Field::new(3).unwrap());
        assert!(Ring::with_modulus(f, BitPoly::from_exponents(&[2, 0])).is_err());
    }
}
