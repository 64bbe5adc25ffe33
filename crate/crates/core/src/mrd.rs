//! Brute-force minimum-distance experiment on small GK and EGK codes,
//! checking the exact distance in the Case-1 regime and the product bounds
//! in the Case-2 regime.

use std::sync::Arc;

use rayon::prelude::*;

use crate::codes::{EgCode, EgkCode, Regime};
use crate::error::{param, Result};
use crate::galois::{Field, FieldElement, TrackedBasis};
use crate::linalg::{min_rank_distance_bruteforce, BRUTE_FORCE_MAX_BITS};
use crate::sampling::{sample_generator, Expander, Seed, SEED_LEN};

/// Largest field degree for which the subfield of a structured instance is
/// found by enumeration.
const STRUCTURED_MAX_DEGREE: usize = 16;

/// Shape of the sampled instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdConfig {
    pub m: usize,
    pub n1: usize,
    pub k1: usize,
    pub t1: usize,
    pub n2: usize,
    pub k2: usize,
    pub t2: usize,
    pub trials: usize,
    pub seed: Seed,
    /// In the Case-2 regime, draw every other instance with generators built
    /// from a subfield of degree t₁, for which the lower bound is attainable.
    pub structured: bool,
}

impl MrdConfig {
    pub fn regime(&self) -> Regime {
        if self.k1 == self.t1 && self.t2 == self.m {
            Regime::Case1
        } else if self.t1 * self.t2 <= self.m {
            Regime::Case2
        } else {
            Regime::Unchecked
        }
    }

    /// Proven bounds [lower, upper] on d for the regime.
    pub fn bounds(&self) -> Option<(usize, usize)> {
        let d1 = self.t1 - self.k1 + 1;
        let d2 = self.t2 - self.k2 + 1;
        match self.regime() {
            Regime::Case1 => Some((d2, d2)),
            Regime::Case2 => Some((d2, d1 * d2)),
            Regime::Unchecked => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bits = self.m * self.k1 * self.k2;
        if bits > BRUTE_FORCE_MAX_BITS {
            return Err(crate::Error::TooLarge(format!("q^(m·k) = 2^{bits} > 2^{BRUTE_FORCE_MAX_BITS}")));
        }
        if self.structured && self.regime() == Regime::Case2 && !self.structured_feasible() {
            return param("structured instances need t₁ | m, t₂ divisible by t₁ and m ≤ 16");
        }
        Ok(())
    }

    fn structured_feasible(&self) -> bool {
        self.m <= STRUCTURED_MAX_DEGREE && self.m % self.t1 == 0 && self.t2 % self.t1 == 0
    }
}

/// One brute-forced instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub d: usize,
    pub structured: bool,
}

/// Aggregate over all trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdSummary {
    pub regime: Regime,
    pub bounds: Option<(usize, usize)>,
    pub instances: Vec<Instance>,
}

impl MrdSummary {
    pub fn min_d(&self) -> Option<usize> {
        self.instances.iter().map(|i| i.d).min()
    }

    pub fn max_d(&self) -> Option<usize> {
        self.instances.iter().map(|i| i.d).max()
    }

    /// Instances whose distance falls outside the proven bounds.
    pub fn violations(&self) -> usize {
        match self.bounds {
            Some((lo, hi)) => self.instances.iter().filter(|i| i.d < lo || i.d > hi).count(),
            None => 0,
        }
    }

    pub fn attains_lower(&self) -> bool {
        self.bounds.is_some_and(|(lo, _)| self.instances.iter().any(|i| i.d == lo))
    }

    pub fn attains_upper(&self) -> bool {
        self.bounds.is_some_and(|(_, hi)| self.instances.iter().any(|i| i.d == hi))
    }
}

/// Per-trial seed derived from the configuration seed.
fn trial_seed(seed: &Seed, trial: usize) -> Seed {
    let mut s = *seed;
    for (b, x) in s[SEED_LEN - 8..].iter_mut().zip((trial as u64).to_le_bytes()) {
        *b ^= x;
    }
    s
}

/// Elements of the degree-s subfield {a : a^(2^s) = a}, by enumeration.
fn subfield(field: &Field, s: usize) -> Vec<FieldElement> {
    (0u128..1 << field.degree())
        .map(FieldElement::from_bits)
        .filter(|&a| field.frobenius(a, s) == a)
        .collect()
}

/// n entries spanning exactly the GF(2)-span of `basis`, each a random
/// combination; redrawn until the span is full.
fn spread(e: &mut Expander, basis: &[FieldElement], n: usize) -> Result<Vec<FieldElement>> {
    let w = basis.len();
    for _ in 0..crate::sampling::RETRY_CAP {
        let bytes = e.expand(n * 16);
        let v: Vec<FieldElement> = (0..n)
            .map(|j| {
                let c = u128::from_le_bytes(bytes[16 * j..16 * j + 16].try_into().expect("16 bytes"));
                let c = if w == 128 { c } else { c & ((1u128 << w) - 1) };
                basis.iter().enumerate().filter(|(i, _)| (c >> i) & 1 == 1).fold(FieldElement::ZERO, |a, (_, &b)| a + b)
            })
            .collect();
        if crate::linalg::rank_weight(&v) == w {
            return Ok(v);
        }
    }
    Err(crate::Error::RetryCap("structured generator"))
}

/// Generators with Supp(g₁) = K the degree-t₁ subfield and Supp(g₂) a
/// K-subspace, so that Supp(g₁)·Supp(g₂) = Supp(g₂).
fn structured_generators(
    e: &mut Expander,
    field: &Field,
    cfg: &MrdConfig,
) -> Result<(Vec<FieldElement>, Vec<FieldElement>)> {
    let k_elems = subfield(field, cfg.t1);
    let mut tb = TrackedBasis::new();
    let k_basis: Vec<FieldElement> = k_elems.iter().copied().filter(|a| tb.insert(a.bits(), 0).is_ok()).collect();
    debug_assert_eq!(k_basis.len(), cfg.t1);
    // Pick t₂/t₁ elements b_i with K·b_i independent over GF(2).
    let mut span = TrackedBasis::new();
    let mut g2_basis = Vec::with_capacity(cfg.t2);
    let mut tries = 0;
    while g2_basis.len() < cfg.t2 {
        tries += 1;
        if tries > crate::sampling::RETRY_CAP {
            return Err(crate::Error::RetryCap("subfield-closed support"));
        }
        let b = e.element(field);
        let block: Vec<FieldElement> = k_basis.iter().map(|&c| field.mul(c, b)).collect();
        let mut trial = span.clone();
        if block.iter().all(|x| trial.insert(x.bits(), 0).is_ok()) {
            span = trial;
            g2_basis.extend(block);
        }
    }
    Ok((spread(e, &k_basis, cfg.n1)?, spread(e, &g2_basis, cfg.n2)?))
}

fn instance(cfg: &MrdConfig, field: &Arc<Field>, trial: usize) -> Result<Instance> {
    let mut e = Expander::with_tag(&trial_seed(&cfg.seed, trial), 0x4D);
    let structured = cfg.structured && cfg.regime() == Regime::Case2 && trial % 2 == 1;
    let (g1, g2) = if structured {
        structured_generators(&mut e, field, cfg)?
    } else {
        (sample_generator(&mut e, field, cfg.n1, cfg.t1)?, sample_generator(&mut e, field, cfg.n2, cfg.t2)?)
    };
    let c1 = EgCode::with_rank(field.clone(), g1, cfg.k1, cfg.t1)?;
    let c2 = EgCode::with_rank(field.clone(), g2, cfg.k2, cfg.t2)?;
    let code = EgkCode::new(c1, c2)?;
    let d = min_rank_distance_bruteforce(field, code.generator_matrix())?;
    Ok(Instance { d, structured })
}

/// Samples `trials` instances and brute-forces their minimum rank distance.
pub fn run_experiment(cfg: &MrdConfig) -> Result<MrdSummary> {
    cfg.validate()?;
    let field = Arc::new(Field::new(cfg.m)?);
    let instances = (0..cfg.trials).into_par_iter().map(|t| instance(cfg, &field, t)).collect::<Result<Vec<_>>>()?;
    Ok(MrdSummary { regime: cfg.regime(), bounds: cfg.bounds(), instances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, (n1, k1, t1): (usize, usize, usize), (n2, k2, t2): (usize, usize, usize), trials: usize) -> MrdConfig {
        MrdConfig { m, n1, k1, t1, n2, k2, t2, trials, seed: [3; SEED_LEN], structured: true }
    }

    #[test]
    fn gk_example_has_distance_three() {
        let s = run_experiment(&cfg(3, (2, 2, 2), (3, 1, 3), 5)).unwrap();
        assert_eq!(s.regime, Regime::Case1);
        assert!(s.instances.iter().all(|i| i.d == 3));
    }

    #[test]
    fn case2_bounds_and_structure() {
        let s = run_experiment(&cfg(4, (2, 1, 2), (2, 1, 2), 20)).unwrap();
        assert_eq!(s.bounds, Some((2, 4)));
        assert_eq!(s.violations(), 0);
        assert!(s.instances.iter().filter(|i| i.structured).all(|i| i.d == 2));
    }

    #[test]
    fn zero_trials_and_size_guard() {
        let s = run_experiment(&cfg(3, (2, 2, 2), (3, 1, 3), 0)).unwrap();
        assert_eq!((s.min_d(), s.violations()), (None, 0));
        assert!(run_experiment(&cfg(13, (2, 2, 2), (13, 1, 13), 1)).is_err());
    }

    #[test]
    fn subfield_of_gf16() {
        let f = Field::new(4).unwrap();
        assert_eq!(subfield(&f, 2).len(), 4);
        assert_eq!(subfield(&f, 1), vec![FieldElement::ZERO, FieldElement::ONE]);
    }
}
