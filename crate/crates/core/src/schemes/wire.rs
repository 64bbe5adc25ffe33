//! Bit-level packing of field elements, weight-t vectors and the 8-byte file
//! header.

use crate::error::{Error, Result};
use crate::galois::{Field, FieldElement};
use crate::linalg::{rank_weight, support_basis};

use super::params::{SchemeKind, SchemeParams};

pub const MAGIC: &[u8; 6] = b"RQCEGK";
pub const HEADER_LEN: usize = 8;

fn format_err<T>(offset: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Format { offset, msg: msg.into() })
}

/// Little-endian bit stream writer.
#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    nbits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `bits` bits of `v`, least significant first.
    pub fn write(&mut self, v: u128, bits: usize) {
        for i in 0..bits {
            if self.nbits % 8 == 0 {
                self.bytes.push(0);
            }
            if (v >> i) & 1 == 1 {
                *self.bytes.last_mut().expect("byte pushed above") |= 1 << (self.nbits % 8);
            }
            self.nbits += 1;
        }
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write(b.into(), 8);
        }
    }

    pub fn element(&mut self, field: &Field, a: FieldElement) {
        self.write(a.bits(), field.degree());
    }

    pub fn elements(&mut self, field: &Field, v: &[FieldElement]) {
        for &a in v {
            self.element(field, a);
        }
    }

    /// Weight-t vector as its reduced echelon support followed by the t×n
    /// coefficient bit matrix, row by row.
    pub fn weight_vector(&mut self, field: &Field, v: &[FieldElement], t: usize) -> Result<()> {
        let support = support_basis(v);
        if support.len() != t {
            return Err(Error::Param(format!("vector has rank weight {}, expected {t}", support.len())));
        }
        self.elements(field, &support);
        let leads: Vec<u32> = support.iter().map(|b| 127 - b.bits().leading_zeros()).collect();
        for &lead in &leads {
            for x in v {
                self.write((x.bits() >> lead) & 1, 1);
            }
        }
        Ok(())
    }

    /// Byte-aligned bytes with zero pad bits.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

/// Little-endian bit stream reader over a payload starting at byte `base`
/// of the enclosing file (used for error offsets).
#[derive(Debug)]
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8], base: usize) -> Self {
        Self { data, pos: 0, base }
    }

    fn offset(&self) -> usize {
        self.base + self.pos / 8
    }

    pub fn read(&mut self, bits: usize) -> Result<u128> {
        if self.pos + bits > self.data.len() * 8 {
            return format_err(self.base + self.data.len(), "unexpected end of data");
        }
        let mut v = 0u128;
        for i in 0..bits {
            let p = self.pos + i;
            if (self.data[p / 8] >> (p % 8)) & 1 == 1 {
                v |= 1 << i;
            }
        }
        self.pos += bits;
        Ok(v)
    }

    pub fn skip_bytes(&mut self, n: usize) {
        self.pos += 8 * n;
    }

    pub fn element(&mut self, field: &Field) -> Result<FieldElement> {
        self.read(field.degree()).map(FieldElement::from_bits)
    }

    pub fn elements(&mut self, field: &Field, n: usize) -> Result<Vec<FieldElement>> {
        (0..n).map(|_| self.element(field)).collect()
    }

    /// Inverse of [`BitWriter::weight_vector`]; rejects non-canonical
    /// supports and coefficient matrices of rank below t.
    pub fn weight_vector(&mut self, field: &Field, t: usize, n: usize) -> Result<Vec<FieldElement>> {
        let at = self.offset();
        let support = self.elements(field, t)?;
        let mut leads = Vec::with_capacity(t);
        for (i, b) in support.iter().enumerate() {
            if b.is_zero() {
                return format_err(at, "zero support element");
            }
            let lead = 127 - b.bits().leading_zeros();
            if leads.last().is_some_and(|&l| l >= lead) {
                return format_err(at, "support not in increasing leading-bit order");
            }
            if support.iter().enumerate().any(|(j, c)| j != i && (c.bits() >> lead) & 1 == 1) {
                return format_err(at, "support not in reduced echelon form");
            }
            leads.push(lead);
        }
        let mut v = vec![FieldElement::ZERO; n];
        for &b in &support {
            for x in v.iter_mut() {
                if self.read(1)? == 1 {
                    *x += b;
                }
            }
        }
        if rank_weight(&v) != t {
            return format_err(at, format!("coefficient matrix has rank below {t}"));
        }
        Ok(v)
    }

    /// Requires that exactly the remaining pad bits (all zero) are left.
    pub fn finish(self) -> Result<()> {
        let total = self.data.len() * 8;
        if total - self.pos >= 8 {
            return format_err(self.offset(), "trailing data");
        }
        if self.pos < total && self.data[self.pos / 8] >> (self.pos % 8) != 0 {
            return format_err(self.offset(), "nonzero pad bits");
        }
        Ok(())
    }
}

/// The 8-byte header for a parameter set.
pub fn header(params: &SchemeParams) -> [u8; HEADER_LEN] {
    let mut h = [0u8; HEADER_LEN];
    h[..6].copy_from_slice(MAGIC);
    h[6] = params.kind as u8;
    h[7] = params.row;
    h
}

/// Scheme and row ids from a header.
pub fn parse_header(bytes: &[u8]) -> Result<(SchemeKind, u8)> {
    if bytes.len() < HEADER_LEN {
        return format_err(bytes.len(), "missing header");
    }
    if &bytes[..6] != MAGIC {
        return format_err(0, "bad magic");
    }
    let Some(kind) = SchemeKind::from_id(bytes[6]) else {
        return format_err(6, format!("unknown scheme id {}", bytes[6]));
    };
    Ok((kind, bytes[7]))
}

/// Checks the header against `params` and returns the payload.
pub fn strip_header<'a>(params: &SchemeParams, bytes: &'a [u8]) -> Result<&'a [u8]> {
    let (kind, row) = parse_header(bytes)?;
    if kind != params.kind {
        return format_err(6, format!("{} artifact used with {} parameters", kind.name(), params.kind.name()));
    }
    if row != params.row {
        return format_err(7, format!("artifact for parameter row {row}, expected {}", params.row));
    }
    Ok(&bytes[HEADER_LEN..])
}

/// Fails unless `payload` has exactly `len` bytes.
pub fn expect_len(payload: &[u8], len: usize) -> Result<()> {
    if payload.len() != len {
        return format_err(HEADER_LEN + payload.len().min(len), format!("payload is {} bytes, expected {len}", payload.len()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_order_is_little_endian() {
        let mut w = BitWriter::new();
        w.write(0b101, 3);
        w.write(0b11, 2);
        w.write(1, 4);
        // 101 | 11 << 3 | 0001 << 5, nine bits over two bytes.
        assert_eq!(w.finish(), vec![0b0011_1101, 0]);
    }

    #[test]
    fn pad_bits_must_be_zero() {
        let f = Field::new(5).unwrap();
        let bytes = [0b0001_0011u8];
        let mut r = BitReader::new(&bytes, 0);
        assert_eq!(r.element(&f).unwrap(), FieldElement::from_bits(0b10011));
        assert!(r.finish().is_ok());
        let bytes = [0b0011_0011u8];
        let mut r = BitReader::new(&bytes, 0);
        r.element(&f).unwrap();
        assert!(matches!(r.finish(), Err(Error::Format { .. })));
    }

    #[test]
    fn weight_vector_round_trip() {
        let f = Field::new(7).unwrap();
        let v: Vec<FieldElement> = [3u128, 5, 6, 0, 3].map(FieldElement::from_bits).to_vec();
        let mut w = BitWriter::new();
        w.weight_vector(&f, &v, 2).unwrap();
        let bytes = w.finish();
        assert_eq!(bytes.len(), (2 * 7 + 2 * 5usize).div_ceil(8));
        let mut r = BitReader::new(&bytes, 0);
        assert_eq!(r.weight_vector(&f, 2, 5).unwrap(), v);
        r.finish().unwrap();
    }
}
