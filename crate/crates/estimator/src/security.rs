//! Scheme-level security: the problem instances behind each scheme's
//! security reduction and the minimum cost over every applicable attack.

use egk_core::schemes::{SchemeKind, SchemeParams};

use crate::{estimate, AttackReport, Problem, ProblemInstance};

/// Largest gap to the claimed level treated as agreement.
pub const CLAIM_TOLERANCE_BITS: f64 = 16.0;

/// Minimum over all reports, with every report kept.
#[derive(Clone, Debug)]
pub struct SchemeSecurity {
    pub bits: f64,
    /// Instance label and attack that attain the minimum.
    pub weakest: Option<(String, &'static str)>,
    pub reports: Vec<(String, AttackReport)>,
    pub claimed: u32,
}

impl SchemeSecurity {
    /// The gap to the claimed level when it exceeds the tolerance.
    pub fn discrepancy(&self) -> Option<f64> {
        let gap = self.bits - f64::from(self.claimed);
        (self.claimed > 0 && gap.abs() > CLAIM_TOLERANCE_BITS).then_some(gap)
    }
}

/// The instances named by the scheme's reduction.
pub fn instances(p: &SchemeParams) -> Vec<ProblemInstance> {
    let m = p.m;
    let problems = match p.kind {
        SchemeKind::Bwe => {
            let n = p.n();
            vec![
                Problem::Brd { m, k: n, eta: vec![n, n], rho: vec![p.wx, p.wy] },
                Problem::Brd { m, k: n, eta: vec![n, n, n], rho: vec![p.w1, p.we, p.w2] },
            ]
        }
        SchemeKind::MultiNh => vec![
            Problem::Rsd { m, n: 2 * p.n2, k: p.n2, t: p.wx + p.wy },
            Problem::Nhrsl { m, n: 3 * p.n2, z: p.n2, samples: p.n1, w1: p.w1, w2: p.w2 },
        ],
        SchemeKind::MultiUr => vec![
            Problem::Rsl { m, n: 2 * p.z, k: p.z, r: p.wx + p.wy, samples: p.n1 },
            Problem::Nhrsl { m, n: 2 * p.z + p.n1, z: p.z, samples: p.n2, w1: p.w1, w2: p.w2 },
        ],
    };
    problems.into_iter().map(ProblemInstance::binary).collect()
}

/// Runs every estimator on every instance and takes the minimum.
pub fn scheme_security(p: &SchemeParams, omega: f64) -> SchemeSecurity {
    let mut reports = Vec::new();
    for inst in instances(p) {
        let label = inst.label();
        match estimate(&inst, omega) {
            Ok(rs) => reports.extend(rs.into_iter().map(|r| (label.clone(), r))),
            Err(e) => reports.push((label, AttackReport::inapplicable("instance", e.to_string()))),
        }
    }
    let weakest = reports
        .iter()
        .filter(|(_, r)| r.applicable)
        .min_by(|(_, a), (_, b)| a.bits.total_cmp(&b.bits))
        .map(|(l, r)| (l.clone(), r.attack, r.bits));
    SchemeSecurity {
        bits: weakest.as_ref().map_or(f64::INFINITY, |w| w.2),
        weakest: weakest.map(|(l, a, _)| (l, a)),
        reports,
        claimed: p.security,
    }
}
