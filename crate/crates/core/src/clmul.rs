//! Carry-less multiplication kernels.
//!
//! The portable kernel is always available. On x86_64 the `pclmulqdq`
//! instruction is used when the CPU reports it at runtime; this is the only
//! hardware-dispatch hook in the crate.

/// 64×64 → 128-bit carry-less product.
#[inline]
pub fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected above.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_soft(a, b)
}

/// Portable 4-bit windowed carry-less product.
pub fn clmul64_soft(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    for i in 1..16 {
        let mut v = 0;
        for bit in 0..4 {
            if (i >> bit) & 1 == 1 {
                v ^= a << bit;
            }
        }
        table[i] = v;
    }
    let mut r = 0u128;
    for k in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * k)) & 0xF) as usize];
    }
    r
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_set_epi64x, _mm_storeu_si128};
    let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
    let mut out = 0u128;
    _mm_storeu_si128((&mut out as *mut u128).cast(), r);
    out
}

/// 256-bit carry-less product accumulator.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct Wide {
    pub lo: u128,
    pub hi: u128,
}

impl std::ops::BitXorAssign for Wide {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Self) {
        self.lo ^= rhs.lo;
        self.hi ^= rhs.hi;
    }
}

/// 128×128 → 256-bit carry-less product (Karatsuba over 64-bit halves).
#[inline]
pub fn clmul128(a: u128, b: u128) -> Wide {
    let (a0, a1) = (a as u64, (a >> 64) as u64);
    let (b0, b1) = (b as u64, (b >> 64) as u64);
    let lo = clmul64(a0, b0);
    if a1 == 0 && b1 == 0 {
        return Wide { lo, hi: 0 };
    }
    let hi = clmul64(a1, b1);
    let mid = clmul64(a0 ^ a1, b0 ^ b1) ^ lo ^ hi;
    Wide { lo: lo ^ (mid << 64), hi: hi ^ (mid >> 64) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: u64, b: u64) -> u128 {
        (0..64).filter(|i| (b >> i) & 1 == 1).fold(0, |r, i| r ^ ((a as u128) << i))
    }

    #[test]
    fn kernels_agree() {
        let mut x = 0x9E37_79B9_7F4A_7C15u64;
        for _ in 0..2000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let y = x.rotate_left(29) ^ 0xDEAD_BEEF;
            assert_eq!(clmul64_soft(x, y), naive(x, y));
            assert_eq!(clmul64(x, y), naive(x, y));
        }
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let a = 0x0123_4567_89AB_CDEF_FEDC_BA98_7654_3210u128;
        let b = 0x0F1E_2D3C_4B5A_6978_8796_A5B4_C3D2_E1F0u128;
        let w = clmul128(a, b);
        let (a0, a1, b0, b1) = (a as u64, (a >> 64) as u64, b as u64, (b >> 64) as u64);
        let ll = naive(a0, b0);
        let lh = naive(a0, b1) ^ naive(a1, b0);
        let hh = naive(a1, b1);
        assert_eq!(w.lo, ll ^ (lh << 64));
        assert_eq!(w.hi, hh ^ (lh >> 64));
    }
}
