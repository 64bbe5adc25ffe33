//! Deterministic seed expansion (SHAKE-256) and samplers for rank-constrained
//! objects: exact-weight vectors, blockwise errors and non-homogeneous triples.

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Shake256, Shake256Reader};

use crate::error::{param, Error, Result};
use crate::galois::{Field, FieldElement, TrackedBasis};
use crate::linalg::Matrix;

pub const SEED_LEN: usize = 40;

/// A 40-byte seed.
pub type Seed = [u8; SEED_LEN];

/// Maximum number of redraws for any rejection step.
pub const RETRY_CAP: usize = 256;

/// Domain-separation byte appended to the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Domain {
    KeygenSecret = 1,
    KeygenPublic = 2,
    Encryption = 3,
    Kem = 4,
}

/// Deterministic byte stream SHAKE-256(seed ‖ domain). Clone to branch.
#[derive(Clone)]
pub struct Expander {
    reader: Shake256Reader,
}

impl std::fmt::Debug for Expander {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Expander { .. }")
    }
}

impl Expander {
    pub fn new(seed: &Seed, domain: Domain) -> Self {
        Self::with_tag(seed, domain as u8)
    }

    /// Expander with an arbitrary domain byte.
    pub fn with_tag(seed: &Seed, tag: u8) -> Self {
        let mut h = Shake256::default();
        h.update(seed);
        h.update(&[tag]);
        Self { reader: h.finalize_xof() }
    }

    /// The next `nbytes` bytes of the stream.
    pub fn expand(&mut self, nbytes: usize) -> Vec<u8> {
        let mut out = vec![0u8; nbytes];
        self.fill(&mut out);
        out
    }

    pub fn fill(&mut self, buf: &mut [u8]) {
        self.reader.read(buf);
    }

    /// Little-endian integer from ⌈bits/8⌉ bytes, masked to `bits` bits.
    fn bits(&mut self, bits: usize) -> u128 {
        debug_assert!(bits <= 128);
        let mut buf = [0u8; 16];
        self.fill(&mut buf[..bits.div_ceil(8)]);
        let v = u128::from_le_bytes(buf);
        if bits == 128 {
            v
        } else {
            v & ((1u128 << bits) - 1)
        }
    }

    /// Uniform field element from ⌈m/8⌉ bytes with the pad bits cleared.
    pub fn element(&mut self, field: &Field) -> FieldElement {
        FieldElement::from_bits(self.bits(field.degree()))
    }

    pub fn vector(&mut self, field: &Field, n: usize) -> Vec<FieldElement> {
        (0..n).map(|_| self.element(field)).collect()
    }

    /// w GF(2)-independent field elements (whole set redrawn on dependence).
    pub fn independent(&mut self, field: &Field, w: usize) -> Result<Vec<FieldElement>> {
        if w > field.degree() {
            return param(format!("cannot draw {w} independent elements in GF(2^{})", field.degree()));
        }
        for _ in 0..RETRY_CAP {
            let v = self.vector(field, w);
            let mut tb = TrackedBasis::new();
            if v.iter().all(|x| tb.insert(x.bits(), 0).is_ok()) {
                return Ok(v);
            }
        }
        Err(Error::RetryCap("independent support basis"))
    }

    /// n columns of w bits spanning GF(2)^w (whole matrix redrawn on deficiency).
    fn full_rank_columns(&mut self, w: usize, n: usize) -> Result<Vec<u128>> {
        for _ in 0..RETRY_CAP {
            let cols: Vec<u128> = (0..n).map(|_| self.bits(w)).collect();
            let mut tb = TrackedBasis::new();
            let rank = cols.iter().filter(|&&c| tb.insert(c, 0).is_ok()).count();
            if rank == w {
                return Ok(cols);
            }
        }
        Err(Error::RetryCap("full-rank coefficient matrix"))
    }
}

fn combine(basis: &[FieldElement], col: u128) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    let mut bits = col;
    while bits != 0 {
        acc += basis[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    acc
}

/// Entries basis·C with C a full-rank w×n bit matrix drawn column by column.
fn span_vector(e: &mut Expander, basis: &[FieldElement], n: usize) -> Result<Vec<FieldElement>> {
    if basis.is_empty() {
        return Ok(vec![FieldElement::ZERO; n]);
    }
    let cols = e.full_rank_columns(basis.len(), n)?;
    Ok(cols.into_iter().map(|c| combine(basis, c)).collect())
}

/// Length-n vector of rank weight exactly w.
pub fn sample_weight_vector(e: &mut Expander, field: &Field, n: usize, w: usize) -> Result<Vec<FieldElement>> {
    if w > n.min(field.degree()) {
        return param(format!("weight {w} exceeds min(n, m) = {}", n.min(field.degree())));
    }
    let basis = e.independent(field, w)?;
    span_vector(e, &basis, n)
}

/// EG generator of length n and rank weight exactly t.
pub fn sample_generator(e: &mut Expander, field: &Field, n: usize, t: usize) -> Result<Vec<FieldElement>> {
    sample_weight_vector(e, field, n, t)
}

/// How the supports of different blocks relate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SupportMode {
    /// Pairwise-disjoint supports carved from one global support.
    #[default]
    Blockwise,
    /// Each block drawn independently with its own exact weight.
    Independent,
}

/// Concatenated blocks with exact weights; in blockwise mode one global
/// support of dimension Σw_i is split into consecutive sub-bases.
pub fn sample_blockwise(
    e: &mut Expander,
    field: &Field,
    lengths: &[usize],
    weights: &[usize],
    mode: SupportMode,
) -> Result<Vec<FieldElement>> {
    if lengths.len() != weights.len() {
        return param("lengths and weights differ in count");
    }
    let m = field.degree();
    if let Some((n, w)) = lengths.iter().zip(weights).find(|(&n, &w)| w > n.min(m)) {
        return param(format!("block weight {w} exceeds min({n}, {m})"));
    }
    let mut out = Vec::with_capacity(lengths.iter().sum());
    match mode {
        SupportMode::Blockwise => {
            let total: usize = weights.iter().sum();
            if total > m {
                return param(format!("total weight {total} exceeds m = {m}"));
            }
            let basis = e.independent(field, total)?;
            let mut start = 0;
            for (&n, &w) in lengths.iter().zip(weights) {
                out.extend(span_vector(e, &basis[start..start + w], n)?);
                start += w;
            }
        }
        SupportMode::Independent => {
            for (&n, &w) in lengths.iter().zip(weights) {
                out.extend(sample_weight_vector(e, field, n, w)?);
            }
        }
    }
    Ok(out)
}

/// Non-homogeneous triple (M1, M2, M3) of shapes a×b, a×c, a×d: M2 has rank
/// weight w2 and (M1, M3) jointly have rank weight w1 with support inside
/// Supp(M2). The support of (M1, M3) is spanned by the first w1 vectors of the
/// basis of Supp(M2). Entries are filled column by column.
pub fn sample_nh(
    e: &mut Expander,
    field: &Field,
    a: usize,
    (b, c, d): (usize, usize, usize),
    w1: usize,
    w2: usize,
) -> Result<(Matrix, Matrix, Matrix)> {
    if w1 > w2 || w2 > field.degree() {
        return param(format!("need w1 ≤ w2 ≤ m; got {w1}, {w2}, m = {}", field.degree()));
    }
    if w2 > a * c || w1 > a * (b + d) {
        return param("weights exceed the number of entries");
    }
    let v2 = e.independent(field, w2)?;
    let mid = span_vector(e, &v2, a * c)?;
    let outer = span_vector(e, &v2[..w1], a * (b + d))?;
    let col_major = |v: &[FieldElement], cols: usize| Matrix::from_fn(a, cols, |i, j| v[j * a + i]);
    Ok((col_major(&outer[..a * b], b), col_major(&mid, c), col_major(&outer[a * b..], d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_weight;

    #[test]
    fn expander_is_deterministic_and_separated() {
        let seed = [7u8; SEED_LEN];
        let a = Expander::new(&seed, Domain::KeygenSecret).expand(64);
        let b = Expander::new(&seed, Domain::KeygenSecret).expand(64);
        let c = Expander::new(&seed, Domain::KeygenPublic).expand(64);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(Expander::new(&seed, Domain::Kem).expand(0).is_empty());
    }

    #[test]
    fn expansion_is_a_prefix_stream() {
        let seed = [1u8; SEED_LEN];
        let mut e = Expander::new(&seed, Domain::Encryption);
        let mut joined = e.expand(10);
        joined.extend(e.expand(30));
        assert_eq!(joined, Expander::new(&seed, Domain::Encryption).expand(40));
    }

    #[test]
    fn shake256_reference_vector() {
        // SHAKE-256 of the empty string, first 16 bytes.
        let mut h = Shake256::default();
        h.update(b"");
        let mut out = [0u8; 16];
        h.finalize_xof().read(&mut out);
        assert_eq!(out, [0x46, 0xb9, 0xdd, 0x2b, 0x0b, 0xa8, 0x8d, 0x13, 0x23, 0x3b, 0x3f, 0xeb, 0x74, 0x3e, 0xeb, 0x24]);
    }

    #[test]
    fn weight_zero_and_full() {
        let f = Field::new(5).unwrap();
        let mut e = Expander::new(&[0; SEED_LEN], Domain::KeygenSecret);
        assert_eq!(sample_weight_vector(&mut e, &f, 4, 0).unwrap(), vec![FieldElement::ZERO; 4]);
        assert_eq!(rank_weight(&sample_weight_vector(&mut e, &f, 5, 5).unwrap()), 5);
        assert!(sample_weight_vector(&mut e, &f, 3, 4).is_err());
    }
}
