//! Arithmetic in GF(2^m) for m ≤ 128, Frobenius maps, normal and dual bases.
//!
//! Elements are bit-packed into a `u128`: bit `i` is the coefficient of `x^i`
//! in the polynomial representation modulo the field's irreducible modulus.

use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};
use std::sync::OnceLock;

use crate::clmul::{clmul128, clmul64, Wide};
use crate::error::{param, Error, Result};
use crate::gf2x::{self, BitPoly};

pub const MAX_DEGREE: usize = 128;

/// An element of GF(2^m). The owning [`Field`] supplies multiplication.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u128);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Wraps raw bits without a range check; see [`Field::element`] for the checked form.
    pub const fn from_bits(bits: u128) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl Sub for FieldElement {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl SubAssign for FieldElement {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// The field GF(2^m) = GF(2)[x]/(modulus).
pub struct Field {
    m: usize,
    /// modulus − x^m
    tail: u128,
    mask: u128,
    trace_mask: u128,
    /// `frob[s*m + j]` = (x^j)^(2^s)
    frob: Vec<u128>,
    normal: OnceLock<NormalBasis>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {}", self.m, self.modulus())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.tail == other.tail
    }
}

impl Eq for Field {}

impl Field {
    /// GF(2^m) with the lexicographically smallest irreducible modulus.
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return param(format!("extension degree {m} outside 1..=128"));
        }
        Self::build(m, &gf2x::find_irreducible(m))
    }

    /// GF(2^m) with an explicit modulus, checked for irreducibility.
    pub fn with_modulus(modulus: &BitPoly) -> Result<Self> {
        let m = modulus.degree().unwrap_or(0);
        if !(1..=MAX_DEGREE).contains(&m) {
            return param(format!("modulus degree {m} outside 1..=128"));
        }
        if !modulus.bit(0) || !modulus.is_irreducible() {
            return param(format!("modulus {modulus} is not irreducible with constant term 1"));
        }
        Self::build(m, modulus)
    }

    fn build(m: usize, modulus: &BitPoly) -> Result<Self> {
        let mut tail_poly = modulus.clone();
        tail_poly.flip(m);
        let tail = tail_poly.to_u128().expect("tail below degree 128");
        let mask = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
        let mut field = Self { m, tail, mask, trace_mask: 0, frob: vec![0; m * m], normal: OnceLock::new() };
        for j in 0..m {
            field.frob[j] = 1u128 << j;
        }
        for s in 1..m {
            for j in 0..m {
                let prev = FieldElement(field.frob[(s - 1) * m + j]);
                field.frob[s * m + j] = field.square(prev).0;
            }
        }
        let mut trace_mask = 0u128;
        for j in 0..m {
            let t = (0..m).fold(0u128, |acc, s| acc ^ field.frob[s * m + j]);
            debug_assert!(t <= 1, "trace must lie in GF(2)");
            trace_mask |= (t & 1) << j;
        }
        field.trace_mask = trace_mask;
        Ok(field)
    }

    /// Extension degree m.
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> BitPoly {
        let mut p = BitPoly::from_u128(self.tail);
        p.flip(self.m);
        p
    }

    /// Bytes per serialized element, ⌈m/8⌉.
    pub fn byte_len(&self) -> usize {
        self.m.div_ceil(8)
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 & !self.mask == 0
    }

    /// Checked construction from raw bits.
    pub fn element(&self, bits: u128) -> Result<FieldElement> {
        if bits & !self.mask != 0 {
            return param(format!("bits {bits:#x} exceed degree {}", self.m));
        }
        Ok(FieldElement(bits))
    }

    /// The class of `x` (equal to 1 when m = 1).
    pub fn generator(&self) -> FieldElement {
        self.reduce(Wide { lo: 2, hi: 0 })
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.m <= 64 {
            let mut p = clmul64(a.0 as u64, b.0 as u64);
            loop {
                let h = p >> self.m;
                if h == 0 {
                    return FieldElement(p);
                }
                p = (p & self.mask) ^ clmul64(h as u64, self.tail as u64);
            }
        } else {
            self.reduce(clmul128(a.0, b.0))
        }
    }

    /// Unreduced product; sums of these may be reduced once with [`Field::reduce`].
    #[inline]
    pub fn mul_wide(&self, a: FieldElement, b: FieldElement) -> Wide {
        clmul128(a.0, b.0)
    }

    #[inline]
    pub fn reduce(&self, w: Wide) -> FieldElement {
        let m = self.m;
        let (mut lo, mut hi) = (w.lo, w.hi);
        loop {
            let h = if m == 128 { hi } else { (lo >> m) | (hi << (128 - m)) };
            if h == 0 && (m == 128 || hi == 0) {
                return FieldElement(lo & self.mask);
            }
            let p = clmul128(h, self.tail);
            lo = (lo & self.mask) ^ p.lo;
            hi = p.hi;
        }
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let (mut base, mut acc) = (a, FieldElement::ONE);
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(2^m − 2).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        let mut t = a;
        let mut acc = FieldElement::ONE;
        for _ in 1..self.m {
            t = self.square(t);
            acc = self.mul(acc, t);
        }
        acc
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^(2^i), the i-th Frobenius power a^[i].
    #[inline]
    pub fn frobenius(&self, a: FieldElement, i: usize) -> FieldElement {
        let s = i % self.m;
        if s == 0 || a.is_zero() {
            return a;
        }
        let row = &self.frob[s * self.m..(s + 1) * self.m];
        let mut bits = a.0;
        let mut acc = 0u128;
        while bits != 0 {
            acc ^= row[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        FieldElement(acc)
    }

    /// Absolute trace Tr(a) = Σ a^[i] ∈ GF(2).
    pub fn trace(&self, a: FieldElement) -> bool {
        (a.0 & self.trace_mask).count_ones() % 2 == 1
    }

    /// Little-endian byte encoding, ⌈m/8⌉ bytes, pad bits zero.
    pub fn to_bytes(&self, a: FieldElement) -> Vec<u8> {
        a.0.to_le_bytes()[..self.byte_len()].to_vec()
    }

    pub fn from_bytes(&self, bytes: &[u8]) -> Result<FieldElement> {
        if bytes.len() != self.byte_len() {
            return Err(Error::Format {
                offset: 0,
                msg: format!("expected {} bytes, got {}", self.byte_len(), bytes.len()),
            });
        }
        let mut buf = [0u8; 16];
        buf[..bytes.len()].copy_from_slice(bytes);
        let bits = u128::from_le_bytes(buf);
        if bits & !self.mask != 0 {
            return Err(Error::Format { offset: bytes.len() - 1, msg: "nonzero pad bits".into() });
        }
        Ok(FieldElement(bits))
    }

    /// The cached normal basis of this field.
    pub fn normal_basis(&self) -> &NormalBasis {
        self.normal.get_or_init(|| NormalBasis::find(self))
    }
}

/// Incremental GF(2) echelon basis over 128-bit vectors that records, for each
/// stored vector, which inserted inputs it combines.
#[derive(Clone)]
pub(crate) struct TrackedBasis {
    /// `slots[b]` holds a vector with leading bit `b` and its combination mask.
    slots: Vec<Option<(u128, u128)>>,
    len: usize,
}

impl TrackedBasis {
    pub fn new() -> Self {
        Self { slots: vec![None; 128], len: 0 }
    }

    /// Reduces `v`; returns the residual and the combination consumed.
    pub fn reduce(&self, mut v: u128) -> (u128, u128) {
        let mut combo = 0u128;
        while v != 0 {
            let lead = 127 - v.leading_zeros() as usize;
            match self.slots[lead] {
                Some((bv, bc)) => {
                    v ^= bv;
                    combo ^= bc;
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Inserts `v` tagged with `tag`. Returns `Err(combo)` if `v` is dependent,
    /// with `combo` the tag combination equal to `v`.
    pub fn insert(&mut self, v: u128, tag: u128) -> std::result::Result<(), u128> {
        let mut v = v;
        let mut combo = tag;
        while v != 0 {
            let lead = 127 - v.leading_zeros() as usize;
            match self.slots[lead] {
                Some((bv, bc)) => {
                    v ^= bv;
                    combo ^= bc;
                }
                None => {
                    self.slots[lead] = Some((v, combo));
                    self.len += 1;
                    return Ok(());
                }
            }
        }
        Err(combo ^ tag)
    }

    /// Fully reduced basis vectors ordered by increasing leading bit.
    pub fn reduced(&self) -> Vec<u128> {
        let mut out: Vec<(usize, u128)> = Vec::with_capacity(self.len);
        for lead in 0..128 {
            if let Some((v, _)) = self.slots[lead] {
                let mut v = v;
                for (plead, pv) in &out {
                    if (v >> plead) & 1 == 1 {
                        v ^= pv;
                    }
                }
                out.push((lead, v));
            }
        }
        out.into_iter().map(|(_, v)| v).collect()
    }
}

/// A GF(2)-basis of GF(2^m) with precomputed coordinate maps.
#[derive(Clone, Debug)]
pub struct Basis {
    elems: Vec<FieldElement>,
    /// `mono[j]` = coordinates of x^j
    mono: Vec<u128>,
}

impl Basis {
    /// Requires exactly m independent elements.
    pub fn new(field: &Field, elems: Vec<FieldElement>) -> Result<Self> {
        let m = field.degree();
        if elems.len() != m {
            return param(format!("basis needs {m} elements, got {}", elems.len()));
        }
        let mut tb = TrackedBasis::new();
        for (i, e) in elems.iter().enumerate() {
            if tb.insert(e.0, 1u128 << i).is_err() {
                return Err(Error::RankDeficient("basis elements are dependent".into()));
            }
        }
        let mono = (0..m)
            .map(|j| {
                let (res, combo) = tb.reduce(1u128 << j);
                debug_assert_eq!(res, 0);
                combo
            })
            .collect();
        Ok(Self { elems, mono })
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elems
    }

    /// Coordinate bit vector c with a = Σ c_i·elems_i.
    #[inline]
    pub fn coords(&self, a: FieldElement) -> u128 {
        let mut bits = a.0;
        let mut c = 0u128;
        while bits != 0 {
            c ^= self.mono[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        c
    }

    /// Σ c_i·elems_i.
    pub fn combine(&self, c: u128) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut bits = c;
        while bits != 0 {
            acc += self.elems[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        acc
    }
}

/// Coordinates of `a` in `basis` as a bit vector (bit i ↔ basis[i]).
pub fn coordinates(field: &Field, a: FieldElement, basis: &[FieldElement]) -> Result<Vec<bool>> {
    let b = Basis::new(field, basis.to_vec())?;
    let c = b.coords(a);
    Ok((0..field.degree()).map(|i| (c >> i) & 1 == 1).collect())
}

/// A normal element α with its conjugates α^[i] and the trace-dual basis.
#[derive(Clone, Debug)]
pub struct NormalBasis {
    pub alpha: FieldElement,
    pub conjugates: Vec<FieldElement>,
    pub dual: Vec<FieldElement>,
    basis: Basis,
}

impl NormalBasis {
    /// Smallest element (by integer value) whose conjugates are independent.
    ///
    /// `a` is normal iff L_φ(a) ≠ 0 for every irreducible factor φ of x^m − 1,
    /// where L_φ = ((x^m − 1)/φ)(σ). Aligned blocks of candidates lying in a
    /// single kernel are skipped, so the scan stays short even when every
    /// small element has trace zero.
    pub fn find(field: &Field) -> Self {
        let m = field.degree();
        let odd = m >> m.trailing_zeros();
        let full = BitPoly::from_exponents(&[m, 0]);
        let maps: Vec<Vec<u128>> = gf2x::factor_squarefree(&BitPoly::from_exponents(&[odd, 0]))
            .iter()
            .map(|phi| {
                let (cofactor, rem) = full.div_rem(phi);
                debug_assert!(rem.is_zero());
                let exps = cofactor.exponents();
                (0..m)
                    .map(|l| exps.iter().fold(0u128, |acc, &k| acc ^ field.frob[(k % m) * m + l]))
                    .collect()
            })
            .collect();
        let apply = |map: &[u128], a: u128| {
            let mut bits = a;
            let mut acc = 0u128;
            while bits != 0 {
                acc ^= map[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            acc
        };
        // Number of low unit vectors each map annihilates.
        let low_zero: Vec<usize> = maps.iter().map(|map| map.iter().take_while(|&&v| v == 0).count()).collect();
        let mut cand = 1u128;
        let alpha = loop {
            // Largest aligned block starting at `cand` that stays inside one kernel.
            let align = if cand == 0 { m } else { (cand.trailing_zeros() as usize).min(m) };
            let skip = maps
                .iter()
                .zip(&low_zero)
                .filter(|(map, _)| apply(map, cand) == 0)
                .map(|(_, &z)| z.min(align))
                .max();
            match skip {
                None => break FieldElement(cand),
                Some(j) => {
                    cand = cand.checked_add(1u128 << j).expect("normal element exists");
                    if cand & !field.mask != 0 {
                        unreachable!("normal elements always exist");
                    }
                }
            }
        };
        let conj: Vec<FieldElement> = (0..m).map(|i| field.frobenius(alpha, i)).collect();
        let basis = Basis::new(field, conj.clone()).expect("conjugates of a normal element are independent");
        Self::from_parts(field, alpha, conj, basis)
    }

    fn from_parts(field: &Field, alpha: FieldElement, conj: Vec<FieldElement>, basis: Basis) -> Self {
        let m = field.degree();
        // Trace form T_ij = Tr(α_i α_j); the dual basis is T^{-1} applied to the conjugates.
        let cols: Vec<FieldElement> = (0..m)
            .map(|j| {
                let mut col = 0u128;
                for i in 0..m {
                    if field.trace(field.mul(conj[i], conj[j])) {
                        col |= 1 << i;
                    }
                }
                FieldElement(col)
            })
            .collect();
        let tb = {
            let mut tb = TrackedBasis::new();
            for (j, c) in cols.iter().enumerate() {
                tb.insert(c.0, 1u128 << j).expect("trace form of a basis is nondegenerate");
            }
            tb
        };
        let dual: Vec<FieldElement> = (0..m)
            .map(|i| {
                let (_, combo) = tb.reduce(1u128 << i);
                basis.combine(combo)
            })
            .collect();
        debug_assert!((0..m).all(|i| dual[i] == field.frobenius(dual[0], i)));
        Self { alpha, conjugates: conj, dual, basis }
    }

    /// Coordinates in the conjugate basis.
    #[inline]
    pub fn coords(&self, a: FieldElement) -> u128 {
        self.basis.coords(a)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }
}
