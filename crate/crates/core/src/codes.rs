//! Gabidulin, extended Gabidulin (EG) and EGK product codes, with the
//! transform-domain EG decoder and the block-wise EGK decoder.

use std::sync::Arc;

use crate::error::{dim, param, DecodeFailure, Error, FailureReason, Result};
use crate::galois::{Field, FieldElement, TrackedBasis};
use crate::linalg::{information_set, kronecker, moore_matrix, rank_weight, solve_linear, vec_mat_mul, BitMatrix, Matrix};
use crate::qpoly::{self, QPoly};

/// Result of a decoding attempt: the message or a tagged failure.
pub type DecodeOutcome = Result<Vec<FieldElement>>;

/// Column reduction of a generator vector: g·P = (g_{s_0}, …, g_{s_{t−1}}, 0, …, 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub g_prime: Vec<FieldElement>,
    pub p: BitMatrix,
    /// Source positions s_0 < … < s_{t−1} of the independent entries.
    pub positions: Vec<usize>,
}

/// Greedy left-to-right choice of independent positions; every dependent
/// position is cleared by adding the selected entries it depends on.
pub fn canonicalize_generator(field: &Field, g: &[FieldElement], t: usize) -> Result<Canonical> {
    let n = g.len();
    let w = rank_weight(g);
    if w != t {
        return param(format!("generator has rank weight {w}, expected {t}"));
    }
    let _ = field;
    let mut tb = TrackedBasis::new();
    let mut positions = Vec::with_capacity(t);
    let mut dependent = Vec::with_capacity(n - t);
    for (j, x) in g.iter().enumerate() {
        match tb.insert(x.bits(), 1u128 << positions.len()) {
            Ok(()) => positions.push(j),
            Err(combo) => dependent.push((j, combo)),
        }
    }
    let mut p = BitMatrix::zeros(n, n);
    for (c, &s) in positions.iter().enumerate() {
        p.set(s, c, true);
    }
    for (l, &(j, combo)) in dependent.iter().enumerate() {
        let col = t + l;
        p.set(j, col, true);
        let mut bits = combo;
        while bits != 0 {
            p.set(positions[bits.trailing_zeros() as usize], col, true);
            bits &= bits - 1;
        }
    }
    let mut g_prime: Vec<FieldElement> = positions.iter().map(|&s| g[s]).collect();
    g_prime.resize(n, FieldElement::ZERO);
    Ok(Canonical { g_prime, p, positions })
}

/// Precomputed data for the transform decoder (t = m only).
#[derive(Clone, Debug)]
struct TransformDecoder {
    /// Inverse of the bit matrix A with g′ = (α^[0], …, α^[m−1])·A.
    a_inv: BitMatrix,
    /// x^[m] − x.
    modulus: QPoly,
}

/// EG_k(g): evaluations of linearized polynomials of q-degree < k at g.
#[derive(Clone, Debug)]
pub struct EgCode {
    field: Arc<Field>,
    g: Vec<FieldElement>,
    k: usize,
    t: usize,
    canonical: Canonical,
    decoder: Option<TransformDecoder>,
}

impl EgCode {
    /// Requires 1 ≤ k ≤ t = wt_R(g).
    pub fn new(field: Arc<Field>, g: Vec<FieldElement>, k: usize) -> Result<Self> {
        let t = rank_weight(&g);
        Self::with_rank(field, g, k, t)
    }

    /// As [`EgCode::new`], checking that wt_R(g) equals the declared `t`.
    pub fn with_rank(field: Arc<Field>, g: Vec<FieldElement>, k: usize, t: usize) -> Result<Self> {
        let m = field.degree();
        if g.iter().any(|&x| !field.contains(x)) {
            return param("generator entry outside the field");
        }
        if k == 0 || k > t || t > g.len().min(m) {
            return param(format!("need 1 ≤ k ≤ t ≤ min(n, m); got k={k}, t={t}, n={}, m={m}", g.len()));
        }
        let canonical = canonicalize_generator(&field, &g, t)?;
        let decoder = (t == m).then(|| {
            let nb = field.normal_basis();
            let a = BitMatrix::from_fn(m, m, |i, j| (nb.coords(canonical.g_prime[j]) >> i) & 1 == 1);
            TransformDecoder {
                a_inv: a.inverse().expect("independent entries give an invertible basis change"),
                modulus: QPoly::monomial(FieldElement::ONE, m).add(&QPoly::one()),
            }
        });
        Ok(Self { field, g, k, t, canonical, decoder })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn generator(&self) -> &[FieldElement] {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn canonical(&self) -> &Canonical {
        &self.canonical
    }

    /// The k×n Moore matrix of g.
    pub fn generator_matrix(&self) -> Matrix {
        moore_matrix(&self.field, &self.g, self.k).expect("k ≤ m by construction")
    }

    /// (f(g_1), …, f(g_n)) with f = Σ msg_i x^[i].
    pub fn encode(&self, msg: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if msg.len() != self.k {
            return dim(format!("message length {} ≠ k = {}", msg.len(), self.k));
        }
        let f = QPoly::from_coeffs(msg.to_vec());
        Ok(self.g.iter().map(|&x| qpoly::qp_eval(&self.field, &f, x)).collect())
    }

    /// Guaranteed radius of the transform decoder, ⌊(t − k)/2⌋.
    pub fn decoding_radius(&self) -> usize {
        (self.t - self.k) / 2
    }

    /// The looser bound min(t − k, ⌊(n − k)/2⌋), for reference only.
    pub fn nominal_radius(&self) -> usize {
        (self.t - self.k).min((self.n() - self.k) / 2)
    }

    /// Transform-domain decoding; requires t = m.
    pub fn decode(&self, y: &[FieldElement]) -> DecodeOutcome {
        let Some(dec) = &self.decoder else {
            return param(format!("transform decoder needs t = m; here t = {} < m = {}", self.t, self.field.degree()));
        };
        if y.len() != self.n() {
            return dim(format!("received word length {} ≠ n = {}", y.len(), self.n()));
        }
        let field = &*self.field;
        let nb = field.normal_basis();
        let fail = |reason| Err(Error::Decode(DecodeFailure::new(reason)));
        // Positions carrying codeword components, then basis change to α-conjugates.
        let y1: Vec<FieldElement> = self.canonical.positions.iter().map(|&s| y[s]).collect();
        let y2 = crate::linalg::vec_mul_bits(&y1, &dec.a_inv)?;
        let y_hat = qpoly::inverse_q_transform(field, &QPoly::from_coeffs(y2.clone()), nb);
        if y_hat.is_zero() {
            return Ok(vec![FieldElement::ZERO; self.k]);
        }
        let d_stop = (self.t + self.k) / 2;
        let (r, u, _) = qpoly::leea(field, &dec.modulus, &y_hat, d_stop)?;
        let (f_hat, rem) = match qpoly::ldiv(field, &r, &u) {
            Ok(x) => x,
            Err(Error::DivisionByZero) => return fail(FailureReason::RankError),
            Err(e) => return Err(e),
        };
        if !rem.is_zero() {
            return fail(FailureReason::RemainderNonzero);
        }
        if f_hat.degree().is_some_and(|d| d >= self.k) {
            return fail(FailureReason::RadiusExceeded);
        }
        let c = qpoly::q_transform(field, &f_hat, nb);
        let e: Vec<FieldElement> = y2.iter().enumerate().map(|(j, &v)| v + c.coeff(j)).collect();
        if rank_weight(&e) > self.decoding_radius() {
            return fail(FailureReason::RadiusExceeded);
        }
        Ok((0..self.k).map(|i| f_hat.coeff(i)).collect())
    }
}

/// Parameter regime of an EGK code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// k₁ = t₁ and t₂ = m.
    Case1,
    /// t₁·t₂ ≤ m.
    Case2,
    Unchecked,
}

/// Kronecker product C₁ ⊗ C₂ of two EG codes.
#[derive(Clone, Debug)]
pub struct EgkCode {
    c1: EgCode,
    c2: EgCode,
    regime: Regime,
    g: Matrix,
}

impl EgkCode {
    pub fn new(c1: EgCode, c2: EgCode) -> Result<Self> {
        if c1.field != c2.field {
            return param("component codes over different fields");
        }
        let m = c1.field.degree();
        let regime = if c1.k == c1.t && c2.t == m {
            Regime::Case1
        } else if c1.t * c2.t <= m {
            Regime::Case2
        } else {
            Regime::Unchecked
        };
        let g = kronecker(&c1.field, &c1.generator_matrix(), &c2.generator_matrix());
        Ok(Self { c1, c2, regime, g })
    }

    pub fn c1(&self) -> &EgCode {
        &self.c1
    }

    pub fn c2(&self) -> &EgCode {
        &self.c2
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.c1.field
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn n(&self) -> usize {
        self.c1.n() * self.c2.n()
    }

    pub fn k(&self) -> usize {
        self.c1.k * self.c2.k
    }

    /// G₁ ⊗ G₂.
    pub fn generator_matrix(&self) -> &Matrix {
        &self.g
    }

    /// msg·G; message index i·k₂ + l holds coefficient l of block x_i.
    pub fn encode(&self, msg: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if msg.len() != self.k() {
            return dim(format!("message length {} ≠ k = {}", msg.len(), self.k()));
        }
        vec_mat_mul(&self.c1.field, msg, &self.g)
    }

    pub fn decoding_radius(&self) -> Result<usize> {
        let (c1, c2) = (&self.c1, &self.c2);
        match self.regime {
            Regime::Case1 => Ok((c2.t - c2.k) / 2),
            Regime::Case2 => Ok(((c1.t - c1.k + 1) * (c2.t - c2.k + 1) - 1) / 2),
            Regime::Unchecked => param("decoding radius unknown outside the Case-1 and Case-2 regimes"),
        }
    }

    /// Decodes the blocks on an information set of G₁ against C₂, then solves
    /// the k₁×k₁ system [G₁[i, j_s]]·X = M for the message blocks.
    pub fn decode(&self, y: &[FieldElement]) -> DecodeOutcome {
        if y.len() != self.n() {
            return dim(format!("received word length {} ≠ n = {}", y.len(), self.n()));
        }
        let field = &*self.c1.field;
        let (n2, k1, k2) = (self.c2.n(), self.c1.k, self.c2.k);
        let g1 = self.c1.generator_matrix();
        let info = information_set(field, &g1)?;
        let mut rhs = Vec::with_capacity(k1);
        for &j in &info {
            match self.c2.decode(&y[j * n2..(j + 1) * n2]) {
                Ok(m) => rhs.push(m),
                Err(Error::Decode(f)) => return Err(Error::Decode(DecodeFailure { block: Some(j), ..f })),
                Err(e) => return Err(e),
            }
        }
        let a = Matrix::from_fn(k1, k1, |s, i| g1.get(i, info[s]));
        let x = solve_linear(field, &a, &Matrix::from_rows(&rhs)?)?;
        let mut out = Vec::with_capacity(k1 * k2);
        for i in 0..k1 {
            out.extend_from_slice(x.row(i));
        }
        Ok(out)
    }
}
