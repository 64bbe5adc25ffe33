//! Dense polynomials over GF(2) and the irreducible-modulus search.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Polynomial over GF(2); bit `i` of the packed words is the coefficient of `x^i`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitPoly {
    words: Vec<u64>,
}

impl BitPoly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    pub fn monomial(d: usize) -> Self {
        let mut p = Self { words: vec![0; d / 64 + 1] };
        p.words[d / 64] = 1 << (d % 64);
        p
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.trim();
        p
    }

    pub fn from_u128(v: u128) -> Self {
        Self::from_words(vec![v as u64, (v >> 64) as u64])
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 128 coefficient bits; `None` if the degree exceeds 127.
    pub fn to_u128(&self) -> Option<u128> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0] as u128),
            2 => Some(self.words[0] as u128 | (self.words[1] as u128) << 64),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    /// Exponents of the nonzero terms in increasing order.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut words = self.words.clone();
        xor_shifted(&mut words, &other.words, 0);
        Self::from_words(words)
    }

    pub fn square(&self) -> Self {
        let mut words = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            words.push(spread32(w as u32));
            words.push(spread32((w >> 32) as u32));
        }
        Self::from_words(words)
    }

    /// Remainder of division by `m`.
    ///
    /// # Panics
    /// Panics if `m` is zero.
    pub fn rem(&self, m: &Self) -> Self {
        let dm = m.degree().expect("division by the zero polynomial");
        let mut words = self.words.clone();
        let mut top = words.len() * 64;
        while top > dm {
            top -= 1;
            if (words[top / 64] >> (top % 64)) & 1 == 1 {
                xor_shifted(&mut words, &m.words, top - dm);
            }
        }
        Self::from_words(words)
    }

    /// Quotient and remainder of division by `m`.
    ///
    /// # Panics
    /// Panics if `m` is zero.
    pub fn div_rem(&self, m: &Self) -> (Self, Self) {
        let dm = m.degree().expect("division by the zero polynomial");
        let mut words = self.words.clone();
        let mut quot = Vec::new();
        let mut top = words.len() * 64;
        while top > dm {
            top -= 1;
            if (words[top / 64] >> (top % 64)) & 1 == 1 {
                xor_shifted(&mut words, &m.words, top - dm);
                xor_shifted(&mut quot, &[1], top - dm);
            }
        }
        (Self::from_words(quot), Self::from_words(words))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        let x = Self::monomial(1);
        let mut u = x.clone();
        for _ in 0..d / 2 {
            u = u.square().rem(self);
            if !self.gcd(&u.add(&x)).degree().is_some_and(|g| g == 0) {
                return false;
            }
        }
        true
    }
}

/// Irreducible factors of a squarefree polynomial of degree below 128
/// (Berlekamp's algorithm), sorted by their coefficient words.
pub fn factor_squarefree(f: &BitPoly) -> Vec<BitPoly> {
    let n = f.degree().expect("cannot factor zero");
    assert!(n < 128, "degree {n} too large");
    if n <= 1 {
        return vec![f.clone()];
    }
    // Kernel of g -> g^2 - g on GF(2)[x]/f: dependencies among x^{2i} + x^i.
    let mut tb = crate::galois::TrackedBasis::new();
    let mut kernel = Vec::new();
    for i in 0..n {
        let q = BitPoly::monomial(2 * i).rem(f).to_u128().unwrap() ^ (1u128 << i);
        if let Err(combo) = tb.insert(q, 1u128 << i) {
            kernel.push(combo ^ (1u128 << i));
        }
    }
    let count = kernel.len();
    let mut factors = vec![f.clone()];
    for g in kernel.iter().map(|&g| BitPoly::from_u128(g)) {
        if factors.len() == count {
            break;
        }
        let mut next = Vec::with_capacity(factors.len() + 1);
        for h in factors {
            let d = h.gcd(&g);
            match d.degree() {
                Some(dd) if dd > 0 && dd < h.degree().unwrap() => {
                    next.push(h.div_rem(&d).0);
                    next.push(d);
                }
                _ => next.push(h),
            }
        }
        factors = next;
    }
    factors.sort_by_key(|p| p.to_u128());
    factors
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps = self.exponents();
        if exps.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = exps
            .iter()
            .rev()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn spread32(v: u32) -> u64 {
    let mut x = v as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// `dst ^= src · x^shift`, growing `dst` as needed.
fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    if src.is_empty() {
        return;
    }
    let (ws, bs) = (shift / 64, shift % 64);
    let need = ws + src.len() + usize::from(bs != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bs == 0 {
        for (i, &w) in src.iter().enumerate() {
            dst[ws + i] ^= w;
        }
    } else {
        for (i, &w) in src.iter().enumerate() {
            dst[ws + i] ^= w << bs;
            dst[ws + i + 1] ^= w >> (64 - bs);
        }
    }
}

/// Lexicographically smallest irreducible polynomial of degree `d` with constant
/// term 1, comparing coefficient vectors as integers (bit `i` ↔ `x^i`).
///
/// Results are memoized per degree.
pub fn find_irreducible(d: usize) -> BitPoly {
    assert!(d >= 1, "degree must be positive");
    static CACHE: OnceLock<Mutex<HashMap<usize, BitPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    let mut tail: u128 = 1;
    let found = loop {
        let mut words = BitPoly::from_u128(tail).words;
        xor_shifted(&mut words, &[1], d);
        let cand = BitPoly::from_words(words);
        // An even number of terms means x + 1 divides the candidate.
        let terms = tail.count_ones() + 1;
        if (d == 1 || terms % 2 == 1) && cand.is_irreducible() {
            break cand;
        }
        tail += 2;
    };
    cache.lock().unwrap().insert(d, found.clone());
    found
}
