//! Vectors and matrices over GF(2) and GF(2^m): rank weight, supports,
//! Kronecker and Moore matrices, Gaussian elimination and the exhaustive
//! minimum-rank-distance oracle.

use rayon::prelude::*;

use crate::clmul::Wide;
use crate::error::{dim, param, Error, Result};
use crate::galois::{Basis, Field, FieldElement, TrackedBasis};

/// Dense matrix over GF(2), row-major with 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.stride + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.stride {
                self.data.swap(a * self.stride + w, b * self.stride + w);
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return dim(format!("{}x{} · {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..out.stride {
                        out.data[i * out.stride + w] ^= other.data[k * other.stride + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row-reduces in place to reduced echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| if j < n { self.get(i, j) } else { j - n == i });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug.get(i, n + j)))
    }
}

/// Dense matrix over GF(2^m), row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return dim(format!("{} entries for a {rows}x{cols} matrix", data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return dim("ragged rows");
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// 1×n matrix holding `v`.
    pub fn row_vector(v: &[FieldElement]) -> Self {
        Self { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return dim(format!("{}x{} + {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return dim(format!("{}x{} · {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let mut acc = vec![Wide::default(); other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|w| *w = Wide::default());
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (j, w) in acc.iter_mut().enumerate() {
                    *w ^= field.mul_wide(a, other.get(k, j));
                }
            }
            for (j, w) in acc.iter().enumerate() {
                out.set(i, j, field.reduce(*w));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, field: &Field, a: FieldElement) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| field.mul(a, x)).collect() }
    }

    /// Product with a GF(2) matrix on the right.
    pub fn mul_bits(&self, b: &BitMatrix) -> Result<Self> {
        if self.cols != b.rows() {
            return dim(format!("{}x{} · {}x{} (bits)", self.rows, self.cols, b.rows(), b.cols()));
        }
        let mut out = Self::zeros(self.rows, b.cols());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..b.cols() {
                    if b.get(k, j) {
                        out.data[i * b.cols() + j] += a;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Row vector times matrix.
pub fn vec_mat_mul(field: &Field, v: &[FieldElement], m: &Matrix) -> Result<Vec<FieldElement>> {
    Ok(Matrix::row_vector(v).mul(field, m)?.data)
}

/// Row vector times GF(2) matrix.
pub fn vec_mul_bits(v: &[FieldElement], b: &BitMatrix) -> Result<Vec<FieldElement>> {
    Ok(Matrix::row_vector(v).mul_bits(b)?.data)
}

/// GF(2)-rank of the entries of `v` viewed as bit vectors, i.e. wt_R(v).
pub fn rank_weight(v: &[FieldElement]) -> usize {
    // Basis kept sorted by decreasing value so each reduction step clears a leading bit.
    let mut basis: Vec<u128> = Vec::new();
    for x in v {
        let mut r = x.bits();
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            let pos = basis.partition_point(|&b| b > r);
            basis.insert(pos, r);
            if basis.len() == 128 {
                break;
            }
        }
    }
    basis.len()
}

/// Reduced echelon basis of Supp(v), ordered by increasing leading bit.
pub fn support_basis(v: &[FieldElement]) -> Vec<FieldElement> {
    let mut tb = TrackedBasis::new();
    for x in v {
        let _ = tb.insert(x.bits(), 0);
    }
    tb.reduced().into_iter().map(FieldElement::from_bits).collect()
}

/// m×n bit matrix whose column j is the coordinate vector of v_j in `basis`.
pub fn coordinate_matrix(field: &Field, v: &[FieldElement], basis: &[FieldElement]) -> Result<BitMatrix> {
    let b = Basis::new(field, basis.to_vec())?;
    let m = field.degree();
    let mut out = BitMatrix::zeros(m, v.len());
    for (j, &x) in v.iter().enumerate() {
        let c = b.coords(x);
        for i in 0..m {
            if (c >> i) & 1 == 1 {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

/// Block matrix [a_ij · B].
pub fn kronecker(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (rb, cb) = (b.rows, b.cols);
    Matrix::from_fn(a.rows * rb, a.cols * cb, |i, j| field.mul(a.get(i / rb, j / cb), b.get(i % rb, j % cb)))
}

/// k×n Moore matrix with row i equal to g^[i].
pub fn moore_matrix(field: &Field, g: &[FieldElement], k: usize) -> Result<Matrix> {
    if k == 0 || k > field.degree() {
        return param(format!("Moore matrix rows {k} outside 1..={}", field.degree()));
    }
    let mut rows = Vec::with_capacity(k);
    let mut cur = g.to_vec();
    for _ in 0..k {
        let next = cur.iter().map(|&x| field.square(x)).collect();
        rows.push(std::mem::replace(&mut cur, next));
    }
    Matrix::from_rows(&rows)
}

/// Reduces `[a | b]` to reduced echelon form; returns pivot columns of the `a` part.
fn eliminate(field: &Field, a: &mut Matrix, b: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
            for j in 0..b.cols {
                b.data.swap(p * b.cols + j, r * b.cols + j);
            }
        }
        let inv = field.inv_nonzero(a.get(r, c));
        for j in 0..a.cols {
            a.set(r, j, field.mul(inv, a.get(r, j)));
        }
        for j in 0..b.cols {
            b.set(r, j, field.mul(inv, b.get(r, j)));
        }
        for i in 0..a.rows {
            let f = a.get(i, c);
            if i == r || f.is_zero() {
                continue;
            }
            for j in 0..a.cols {
                let v = a.get(i, j) + field.mul(f, a.get(r, j));
                a.set(i, j, v);
            }
            for j in 0..b.cols {
                let v = b.get(i, j) + field.mul(f, b.get(r, j));
                b.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some X with A·X = B; free variables are set to zero.
pub fn solve_linear(field: &Field, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows != b.rows {
        return dim(format!("A has {} rows, B has {}", a.rows, b.rows));
    }
    let (mut ra, mut rb) = (a.clone(), b.clone());
    let pivots = eliminate(field, &mut ra, &mut rb);
    for i in pivots.len()..ra.rows {
        if (0..rb.cols).any(|j| !rb.get(i, j).is_zero()) {
            return Err(Error::NoSolution);
        }
    }
    let mut x = Matrix::zeros(a.cols, b.cols);
    for (r, &c) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(c, j, rb.get(r, j));
        }
    }
    Ok(x)
}

/// Rank over GF(2^m).
pub fn rank(field: &Field, a: &Matrix) -> usize {
    let mut ra = a.clone();
    let mut empty = Matrix::zeros(a.rows, 0);
    eliminate(field, &mut ra, &mut empty).len()
}

/// Lexicographically first column set on which a full-row-rank `g` is invertible.
pub fn information_set(field: &Field, g: &Matrix) -> Result<Vec<usize>> {
    let k = g.rows;
    // Reduced columns with their pivot row; each has zeros at earlier pivots.
    let mut basis: Vec<(usize, Vec<FieldElement>)> = Vec::with_capacity(k);
    let mut chosen = Vec::with_capacity(k);
    for j in 0..g.cols {
        if chosen.len() == k {
            break;
        }
        let mut v = g.col(j);
        for (p, w) in &basis {
            let f = v[*p];
            if !f.is_zero() {
                for (vi, &wi) in v.iter_mut().zip(w) {
                    *vi += field.mul(f, wi);
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = field.inv_nonzero(v[p]);
            let v: Vec<FieldElement> = v.iter().map(|&x| field.mul(inv, x)).collect();
            // Keep earlier basis vectors clear of the new pivot.
            for (_, w) in basis.iter_mut() {
                let f = w[p];
                if !f.is_zero() {
                    for (wi, &vi) in w.iter_mut().zip(&v) {
                        *wi += field.mul(f, vi);
                    }
                }
            }
            basis.push((p, v));
            chosen.push(j);
        }
    }
    if chosen.len() < k {
        return Err(Error::RankDeficient(format!("generator has rank {} < {k}", chosen.len())));
    }
    Ok(chosen)
}

/// Largest enumeration exponent m·k accepted by the brute-force oracle.
pub const BRUTE_FORCE_MAX_BITS: usize = 24;

/// Minimum rank weight over all nonzero codewords u·G, by exhaustive enumeration.
pub fn min_rank_distance_bruteforce(field: &Field, g: &Matrix) -> Result<usize> {
    let m = field.degree();
    let bits = m * g.rows;
    if bits > BRUTE_FORCE_MAX_BITS {
        return Err(Error::TooLarge(format!("q^(m·k) = 2^{bits} > 2^{BRUTE_FORCE_MAX_BITS}")));
    }
    if bits == 0 {
        return param("empty generator");
    }
    // GF(2)-basis of the code: x^l · row_i.
    let gens: Vec<Vec<FieldElement>> = (0..g.rows)
        .flat_map(|i| {
            (0..m).map(move |l| {
                let s = FieldElement::from_bits(1u128 << l);
                g.row(i).iter().map(|&x| field.mul(s, x)).collect()
            })
        })
        .collect();
    let split = bits.min(6);
    let low = bits - split;
    let best = (0u64..1 << split)
        .into_par_iter()
        .map(|prefix| {
            let mut cur = vec![FieldElement::ZERO; g.cols];
            for b in 0..split {
                if (prefix >> b) & 1 == 1 {
                    for (c, &x) in cur.iter_mut().zip(&gens[low + b]) {
                        *c += x;
                    }
                }
            }
            let mut best = usize::MAX;
            if prefix != 0 {
                best = rank_weight(&cur);
            }
            for idx in 1u64..1 << low {
                let b = idx.trailing_zeros() as usize;
                for (c, &x) in cur.iter_mut().zip(&gens[b]) {
                    *c += x;
                }
                best = best.min(rank_weight(&cur));
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(best)
}
