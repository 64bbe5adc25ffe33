//! Parameter sets and the size formulas for public keys and ciphertexts.

use crate::codes::Regime;
use crate::error::{param, Result};

/// Scheme family; the discriminant is the wire-format scheme id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum SchemeKind {
    /// Ring-structured, blockwise errors.
    Bwe = 1,
    /// Ring-structured, multiple syndromes, non-homogeneous errors.
    MultiNh = 2,
    /// Unstructured matrices, non-homogeneous errors.
    MultiUr = 3,
}

impl SchemeKind {
    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Self::Bwe),
            2 => Some(Self::MultiNh),
            3 => Some(Self::MultiUr),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bwe => "BWE",
            Self::MultiNh => "Multi-NH",
            Self::MultiUr => "Multi-UR",
        }
    }
}

/// One parameter set. `we` is used by BWE only and `z` by Multi-UR only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub kind: SchemeKind,
    /// Registry id 1..=9, or 0 for a custom set.
    pub row: u8,
    pub m: usize,
    pub n1: usize,
    pub k1: usize,
    pub n2: usize,
    pub k2: usize,
    pub t1: usize,
    pub t2: usize,
    pub z: usize,
    pub wx: usize,
    pub wy: usize,
    pub w1: usize,
    pub w2: usize,
    pub we: usize,
    /// Published error-weight budget.
    pub r: usize,
    /// Claimed security level in bits.
    pub security: u32,
    /// Published (pk, ct) sizes in bytes, when the set comes from the registry.
    pub published_sizes: Option<(usize, usize)>,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    kind: SchemeKind,
    row: u8,
    [n1, k1, n2, k2, m, t1, t2, z]: [usize; 8],
    [wx, wy, w1, w2, we, r]: [usize; 6],
    security: u32,
    pk: usize,
    ct: usize,
) -> SchemeParams {
    SchemeParams { kind, row, m, n1, k1, n2, k2, t1, t2, z, wx, wy, w1, w2, we, r, security, published_sizes: Some((pk, ct)) }
}

/// The nine published parameter sets, ids 1..=9.
pub fn registry() -> Vec<SchemeParams> {
    use SchemeKind::*;
    vec![
        row(Bwe, 1, [10, 3, 59, 5, 53, 3, 53, 0], [3, 3, 3, 3, 3, 21], 128, 3949, 7818),
        row(Bwe, 2, [10, 3, 83, 7, 79, 3, 79, 0], [4, 4, 4, 4, 4, 36], 192, 8237, 16394),
        row(Bwe, 3, [10, 3, 113, 3, 113, 3, 113, 0], [5, 5, 5, 5, 5, 55], 256, 16002, 31924),
        row(MultiNh, 4, [6, 3, 86, 3, 85, 3, 85, 0], [4, 4, 3, 4, 0, 28], 128, 3679, 10966),
        row(MultiNh, 5, [6, 3, 99, 3, 97, 3, 97, 0], [5, 5, 4, 5, 0, 45], 192, 4816, 14406),
        row(MultiNh, 6, [11, 4, 116, 4, 116, 4, 116, 0], [5, 5, 5, 6, 0, 56], 256, 6792, 37004),
        row(MultiUr, 7, [6, 3, 86, 3, 85, 3, 85, 3], [3, 3, 3, 4, 0, 22], 128, 2138, 8224),
        row(MultiUr, 8, [6, 3, 92, 3, 91, 3, 91, 3], [4, 4, 4, 9, 0, 41], 192, 2426, 9419),
        row(MultiUr, 9, [6, 4, 117, 4, 116, 4, 116, 3], [5, 5, 5, 6, 0, 56], 256, 3831, 15269),
    ]
}

/// Registry entry by id.
pub fn by_id(id: u8) -> Result<SchemeParams> {
    registry().into_iter().find(|p| p.row == id).map_or_else(|| param(format!("no parameter set with id {id}")), Ok)
}

impl SchemeParams {
    /// Code length n = n₁n₂.
    pub fn n(&self) -> usize {
        self.n1 * self.n2
    }

    /// Code dimension k = k₁k₂.
    pub fn k(&self) -> usize {
        self.k1 * self.k2
    }

    pub fn label(&self) -> String {
        match self.row {
            0 => format!("{}-custom", self.kind.name()),
            r => format!("{}-{}", self.kind.name(), r),
        }
    }

    pub fn regime(&self) -> Regime {
        if self.k1 == self.t1 && self.t2 == self.m {
            Regime::Case1
        } else if self.t1 * self.t2 <= self.m {
            Regime::Case2
        } else {
            Regime::Unchecked
        }
    }

    /// Decoding radius of the EGK code for this regime.
    pub fn radius(&self) -> Option<usize> {
        match self.regime() {
            Regime::Case1 => Some((self.t2 - self.k2) / 2),
            Regime::Case2 => Some(((self.t1 - self.k1 + 1) * (self.t2 - self.k2 + 1) - 1) / 2),
            Regime::Unchecked => None,
        }
    }

    /// Worst-case rank weight of the decoder's error term.
    pub fn error_bound(&self) -> usize {
        match self.kind {
            SchemeKind::Bwe => self.wx * self.w2 + self.wy * self.w1 + self.we,
            SchemeKind::MultiNh | SchemeKind::MultiUr => (self.wx + self.wy) * self.w1 + self.w2,
        }
    }

    /// Public key size in bytes (payload, without the file header).
    pub fn pk_bytes(&self) -> usize {
        let m = self.m;
        let gens = self.t1 * self.n1 + self.t2 * self.n2;
        match self.kind {
            SchemeKind::Bwe => (m * self.n()).div_ceil(8) + 40,
            SchemeKind::MultiNh => (m * (self.t1 + self.t2 + 2 * self.n2) + gens).div_ceil(8),
            SchemeKind::MultiUr => (m * (self.t1 + self.t2 + self.z * self.z + self.n1 * self.z) + gens).div_ceil(8),
        }
    }

    /// Ciphertext size in bytes (payload, without the file header).
    pub fn ct_bytes(&self) -> usize {
        let m = self.m;
        match self.kind {
            SchemeKind::Bwe | SchemeKind::MultiNh => 2 * (m * self.n()).div_ceil(8),
            SchemeKind::MultiUr => (m * (self.z * self.n2 + self.n())).div_ceil(8),
        }
    }

    /// Structural checks: dimensions, weights, the decoding regime and the
    /// correctness bound.
    pub fn validate(&self) -> Result<()> {
        let p = self;
        if !(1..=crate::galois::MAX_DEGREE).contains(&p.m) {
            return param(format!("m = {} outside 1..=128", p.m));
        }
        if p.k1 == 0 || p.k1 > p.t1 || p.t1 > p.n1.min(p.m) {
            return param("need 1 ≤ k₁ ≤ t₁ ≤ min(n₁, m)");
        }
        if p.k2 == 0 || p.k2 > p.t2 || p.t2 > p.n2.min(p.m) {
            return param("need 1 ≤ k₂ ≤ t₂ ≤ min(n₂, m)");
        }
        if p.t2 != p.m {
            return param("the decoder needs t₂ = m");
        }
        if p.kind == SchemeKind::MultiUr && p.z == 0 {
            return param("Multi-UR needs z ≥ 1");
        }
        if p.kind != SchemeKind::Bwe && p.w1 > p.w2 {
            return param("non-homogeneous errors need ω₁ ≤ ω₂");
        }
        let Some(radius) = p.radius() else {
            return param("parameters fall outside both decoding regimes");
        };
        let bound = p.error_bound();
        if bound > radius {
            return param(format!("error weight bound {bound} exceeds decoding radius {radius}"));
        }
        Ok(())
    }
}
