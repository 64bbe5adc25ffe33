//! Attack-cost estimates for the rank-metric problems underlying the
//! RQC.EGK schemes: RSD, blockwise RSD, non-homogeneous RSD, RSL and
//! non-homogeneous RSL, plus a scheme-level minimum over all of them.
//!
//! Every cost is a log₂ value with big-O constants taken as 1. Internal
//! parameters are chosen by bounded exhaustive search; each report carries
//! the chosen values so that an independent evaluator can replay them.

pub mod brd;
#[cfg(feature = "oracle")]
pub mod exact;
pub mod logmath;
pub mod nh;
pub mod report;
pub mod rsd;
pub mod rsl;
pub mod security;

pub use logmath::log2_binomial;
pub use report::{AttackReport, ReportLine};
pub use security::{scheme_security, SchemeSecurity};

use thiserror::Error;

/// Practical linear-algebra exponent.
pub const DEFAULT_OMEGA: f64 = 2.81;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid problem instance: {0}")]
    Instance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Instance(msg.into()))
}

/// A hard problem with its integer parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    /// RSD(q, m, n, k, t).
    Rsd { m: usize, n: usize, k: usize, t: usize },
    /// BRD(q, m, n, k, r, η, ρ) with n = Σηᵢ and r = Σρᵢ.
    Brd { m: usize, k: usize, eta: Vec<usize>, rho: Vec<usize> },
    /// NHRSD with an ω₂-block of length n₁ and two ω₁-blocks of length n each.
    Nhrsd { m: usize, n: usize, n1: usize, w1: usize, w2: usize },
    /// NHRD under the BP method: blocks (n₁, n₂, n₃), weights (r₁, r₂).
    NhrdBp { m: usize, k: usize, blocks: [usize; 3], r1: usize, r2: usize },
    /// RSL(m, n, k, r, N).
    Rsl { m: usize, n: usize, k: usize, r: usize, samples: usize },
    /// NHRSL with code length n, dimension z, N samples and weights (ω₁, ω₂).
    Nhrsl { m: usize, n: usize, z: usize, samples: usize, w1: usize, w2: usize },
}

/// A problem over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub q: u64,
    pub problem: Problem,
}

impl ProblemInstance {
    pub fn binary(problem: Problem) -> Self {
        Self { q: 2, problem }
    }

    pub fn log2_q(&self) -> f64 {
        (self.q as f64).log2()
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return invalid("q must be at least 2");
        }
        match &self.problem {
            Problem::Rsd { m, n, k, t } => {
                if *m == 0 || k >= n || t > n {
                    return invalid(format!("RSD needs m ≥ 1, k < n, t ≤ n (m={m}, n={n}, k={k}, t={t})"));
                }
            }
            Problem::Brd { m, k, eta, rho } => {
                let n: usize = eta.iter().sum();
                if *m == 0 || eta.is_empty() || eta.len() != rho.len() || *k >= n {
                    return invalid("BRD needs m ≥ 1, matching non-empty η and ρ, and k < n");
                }
                if eta.iter().zip(rho).any(|(n, r)| r > n) {
                    return invalid("BRD needs ρᵢ ≤ ηᵢ");
                }
            }
            Problem::Nhrsd { m, n, n1, w1, w2 } => {
                if *m == 0 || *n == 0 || *n1 == 0 || w1 > w2 || w2 > m {
                    return invalid("NHRSD needs m, n, n₁ ≥ 1 and ω₁ ≤ ω₂ ≤ m");
                }
            }
            Problem::NhrdBp { m, k, blocks, r1, r2 } => {
                let n: usize = blocks.iter().sum();
                if *m == 0 || *k >= n || r2 > &blocks[1] || *r1 > blocks[0] + blocks[2] {
                    return invalid("NHRD needs k < n, r₂ ≤ n₂ and r₁ ≤ n₁ + n₃");
                }
            }
            Problem::Rsl { m, n, k, r, samples } => {
                // The support spans all N samples, so r may exceed n.
                if *m == 0 || k >= n || *r == 0 || *samples == 0 {
                    return invalid("RSL needs m ≥ 1, k < n, r ≥ 1 and N ≥ 1");
                }
            }
            Problem::Nhrsl { m, n, z, w1, w2, .. } => {
                if *m == 0 || 2 * z > *n || w1 > w2 || w2 >= m {
                    return invalid("NHRSL needs 2z ≤ n and ω₁ ≤ ω₂ < m");
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match &self.problem {
            Problem::Rsd { m, n, k, t } => format!("RSD(m={m},n={n},k={k},t={t})"),
            Problem::Brd { m, k, eta, rho } => format!("BRD(m={m},k={k},eta={eta:?},rho={rho:?})"),
            Problem::Nhrsd { m, n, n1, w1, w2 } => format!("NHRSD(m={m},n={n},n1={n1},w1={w1},w2={w2})"),
            Problem::NhrdBp { m, k, blocks, r1, r2 } => format!("NHRD(m={m},k={k},blocks={blocks:?},r1={r1},r2={r2})"),
            Problem::Rsl { m, n, k, r, samples } => format!("RSL(m={m},n={n},k={k},r={r},N={samples})"),
            Problem::Nhrsl { m, n, z, samples, w1, w2 } => {
                format!("NHRSL(m={m},n={n},z={z},N={samples},w1={w1},w2={w2})")
            }
        }
    }
}

/// Every report applicable to the instance's problem family.
pub fn estimate(inst: &ProblemInstance, omega: f64) -> Result<Vec<AttackReport>> {
    inst.validate()?;
    Ok(match inst.problem {
        Problem::Rsd { .. } => rsd::estimate_rsd(inst, omega)?,
        Problem::Brd { .. } => brd::estimate_brd(inst, omega)?,
        Problem::Nhrsd { .. } => nh::estimate_nhrsd(inst, omega)?,
        Problem::NhrdBp { .. } => nh::estimate_nhrd_bp(inst, omega)?,
        Problem::Rsl { .. } => rsl::estimate_rsl(inst, omega)?,
        Problem::Nhrsl { .. } => rsl::estimate_nhrsl(inst)?,
    })
}
