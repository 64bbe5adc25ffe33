//! Text form of `estimate` output: one header line per scheme, one
//! [`ReportLine`] per attack, a minimum line and, when the minimum is more
//! than the tolerance away from the claim, a discrepancy line.

use std::fmt;

use egk_core::schemes::SchemeParams;
use egk_estimator::report::{escape, unescape};
use egk_estimator::security::CLAIM_TOLERANCE_BITS;
use egk_estimator::{scheme_security, ReportLine};

/// Estimate for one parameter set.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeEstimate {
    pub scheme: String,
    pub claimed: u32,
    pub omega: f64,
    pub reports: Vec<ReportLine>,
    pub min_bits: f64,
    /// (instance, attack) attaining the minimum.
    pub weakest: Option<(String, String)>,
    /// Estimated minus claimed bits, present beyond the tolerance.
    pub discrepancy: Option<f64>,
}

impl SchemeEstimate {
    pub fn compute(p: &SchemeParams, omega: f64) -> Self {
        let s = scheme_security(p, omega);
        Self {
            scheme: p.label(),
            claimed: p.security,
            omega,
            reports: s.reports.iter().map(|(l, r)| ReportLine::new(l, r)).collect(),
            min_bits: s.bits,
            weakest: s.weakest.as_ref().map(|(l, a)| (l.clone(), a.to_string())),
            discrepancy: s.discrepancy(),
        }
    }

    /// Number of distinct attack families with at least one applicable
    /// report; the family is the first two dash-separated tokens of the
    /// attack tag, e.g. `brd-prr` or `rsd-comb`.
    pub fn families(&self) -> usize {
        let mut f: Vec<String> = self
            .reports
            .iter()
            .filter(|r| r.applicable)
            .map(|r| r.attack.splitn(3, '-').take(2).collect::<Vec<_>>().join("-"))
            .collect();
        f.sort_unstable();
        f.dedup();
        f.len()
    }
}

/// Whole `estimate` output.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EstimateOutput {
    pub schemes: Vec<SchemeEstimate>,
}

impl fmt::Display for EstimateOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.schemes {
            writeln!(f, "scheme={};claimed={};omega={:?}", escape(&s.scheme), s.claimed, s.omega)?;
            for r in &s.reports {
                writeln!(f, "{r}")?;
            }
            let (inst, attack) = s.weakest.clone().unwrap_or_default();
            writeln!(f, "min={:?};instance={};attack={}", s.min_bits, escape(&inst), attack)?;
            if let Some(d) = s.discrepancy {
                writeln!(
                    f,
                    "discrepancy={d:?};claimed={};estimated={:?};tolerance={:?}",
                    s.claimed, s.min_bits, CLAIM_TOLERANCE_BITS
                )?;
            }
        }
        Ok(())
    }
}

fn fields(line: &str) -> Option<Vec<(&str, &str)>> {
    line.split(';').map(|f| f.split_once('=')).collect()
}

fn get<'a>(fs: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    fs.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
}

impl EstimateOutput {
    /// Parses the text produced by `Display`.
    pub fn parse(text: &str) -> Option<Self> {
        let mut out = Self::default();
        for line in text.lines().filter(|l| !l.is_empty()) {
            let fs = fields(line)?;
            match fs.first()?.0 {
                "scheme" => out.schemes.push(SchemeEstimate {
                    scheme: unescape(get(&fs, "scheme")?),
                    claimed: get(&fs, "claimed")?.parse().ok()?,
                    omega: get(&fs, "omega")?.parse().ok()?,
                    reports: Vec::new(),
                    min_bits: f64::INFINITY,
                    weakest: None,
                    discrepancy: None,
                }),
                "instance" => out.schemes.last_mut()?.reports.push(ReportLine::parse(line)?),
                "min" => {
                    let s = out.schemes.last_mut()?;
                    s.min_bits = get(&fs, "min")?.parse().ok()?;
                    let (inst, attack) = (unescape(get(&fs, "instance")?), get(&fs, "attack")?.to_string());
                    s.weakest = (!attack.is_empty()).then_some((inst, attack));
                }
                "discrepancy" => out.schemes.last_mut()?.discrepancy = Some(get(&fs, "discrepancy")?.parse().ok()?),
                _ => return None,
            }
        }
        Some(out)
    }
}
