//! Attack reports and their key=value text form.

use std::fmt;

/// Cost of one attack on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct AttackReport {
    pub attack: &'static str,
    /// log₂ cost after flooring at 0; +∞ when inapplicable.
    pub bits: f64,
    /// The formula's value before flooring.
    pub raw: f64,
    /// Internal parameters chosen by the optimizer or the printed definitions.
    pub params: Vec<(&'static str, i64)>,
    pub applicable: bool,
    pub flags: Vec<String>,
}

impl AttackReport {
    pub fn new(attack: &'static str, raw: f64, params: Vec<(&'static str, i64)>) -> Self {
        let mut r = Self { attack, bits: raw, raw, params, applicable: true, flags: Vec::new() };
        if raw.is_nan() {
            r.applicable = false;
            r.bits = f64::INFINITY;
            r.flags.push("formula undefined".into());
        } else if raw < 0.0 {
            r.bits = 0.0;
            r.flags.push("negative exponent floored at 0".into());
        }
        r
    }

    pub fn inapplicable(attack: &'static str, reason: impl Into<String>) -> Self {
        Self {
            attack,
            bits: f64::INFINITY,
            raw: f64::INFINITY,
            params: Vec::new(),
            applicable: false,
            flags: vec![reason.into()],
        }
    }

    pub fn flag(mut self, f: impl Into<String>) -> Self {
        self.flags.push(f.into());
        self
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

/// A report tagged with the problem instance it was computed for, in the
/// line format `instance=..;attack=..;bits=..;raw=..;applicable=..;params=k:v,..;flags=..`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportLine {
    pub instance: String,
    pub attack: String,
    pub bits: f64,
    pub raw: f64,
    pub applicable: bool,
    pub params: Vec<(String, i64)>,
    pub flags: Vec<String>,
}

impl ReportLine {
    pub fn new(instance: &str, r: &AttackReport) -> Self {
        Self {
            instance: instance.to_string(),
            attack: r.attack.to_string(),
            bits: r.bits,
            raw: r.raw,
            applicable: r.applicable,
            params: r.params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            flags: r.flags.clone(),
        }
    }

    /// Parses the text produced by `Display`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut out =
            Self { instance: String::new(), attack: String::new(), bits: 0.0, raw: 0.0, applicable: false, params: vec![], flags: vec![] };
        let mut seen = 0u8;
        for field in s.split(';') {
            let (k, v) = field.split_once('=')?;
            match k {
                "instance" => out.instance = unescape(v),
                "attack" => out.attack = v.to_string(),
                "bits" => out.bits = v.parse().ok()?,
                "raw" => out.raw = v.parse().ok()?,
                "applicable" => out.applicable = v == "1",
                "params" => {
                    for kv in v.split(',').filter(|x| !x.is_empty()) {
                        let (pk, pv) = kv.split_once(':')?;
                        out.params.push((pk.to_string(), pv.parse().ok()?));
                    }
                }
                "flags" => out.flags = v.split('|').filter(|x| !x.is_empty()).map(unescape).collect(),
                _ => return None,
            }
            seen += 1;
        }
        (seen == 7).then_some(out)
    }
}

/// Percent-escapes the separators of the line format.
pub fn escape(s: &str) -> String {
    s.replace('%', "%25").replace(';', "%3B").replace('|', "%7C").replace('=', "%3D")
}

/// Inverse of [`escape`].
pub fn unescape(s: &str) -> String {
    s.replace("%3D", "=").replace("%7C", "|").replace("%3B", ";").replace("%25", "%")
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let flags: Vec<String> = self.flags.iter().map(|x| escape(x)).collect();
        write!(
            f,
            "instance={};attack={};bits={:?};raw={:?};applicable={};params={};flags={}",
            escape(&self.instance),
            self.attack,
            self.bits,
            self.raw,
            u8::from(self.applicable),
            params.join(","),
            flags.join("|")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_and_undefined_values() {
        let r = AttackReport::new("x", -3.5, vec![("p", 2)]);
        assert_eq!((r.bits, r.raw, r.applicable), (0.0, -3.5, true));
        assert_eq!(r.param("p"), Some(2));
        let r = AttackReport::new("x", f64::NAN, vec![]);
        assert!(!r.applicable && r.bits.is_infinite());
    }

    #[test]
    fn line_round_trip() {
        let r = AttackReport::new("brd-bp-mm", 131.25000000000003, vec![("p1", 4), ("a2", 0)]).flag("odd; a=b | c %");
        let line = ReportLine::new("BRD(m=53,eta=[590, 590])", &r);
        let text = line.to_string();
        assert_eq!(ReportLine::parse(&text), Some(line));
        let inf = ReportLine::new("RSD", &AttackReport::inapplicable("rsd-alg-mm-over", "condition fails"));
        assert_eq!(ReportLine::parse(&inf.to_string()), Some(inf));
        assert_eq!(ReportLine::parse("attack=x"), None);
    }
}
