//! Check reports with a two-tier severity model.
//!
//! A failed identity that the construction is supposed to guarantee is
//! fatal; a claimed closed form that the audit contradicts is a
//! recorded deviation. Runs exit nonzero only on the first kind.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Deviation,
    Fail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub check_id: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Report {
    pub fn pass(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Report { check_id: id.into(), status: Status::Pass, detail: detail.into(), witness: None }
    }

    pub fn deviation(
        id: impl Into<String>,
        detail: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Report {
            check_id: id.into(),
            status: Status::Deviation,
            detail: detail.into(),
            witness: Some(witness.into()),
        }
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Report { check_id: id.into(), status: Status::Fail, detail: detail.into(), witness: None }
    }
}

pub fn any_fatal(reports: &[Report]) -> bool {
    reports.iter().any(|r| r.status == Status::Fail)
}

pub fn counts(reports: &[Report]) -> (usize, usize, usize) {
    let mut pass = 0;
    let mut dev = 0;
    let mut fail = 0;
    for r in reports {
        match r.status {
            Status::Pass => pass += 1,
            Status::Deviation => dev += 1,
            Status::Fail => fail += 1,
        }
    }
    (pass, dev, fail)
}

pub fn to_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
}

/// Match a check id against a pattern where `*` spans any substring.
pub fn glob_match(pattern: &str, id: &str) -> bool {
    fn rec(p: &[u8], s: &[u8]) -> bool {
        match p.first() {
            None => s.is_empty(),
            Some(b'*') => (0..=s.len()).any(|k| rec(&p[1..], &s[k..])),
            Some(&c) => s.first() == Some(&c) && rec(&p[1..], &s[1..]),
        }
    }
    rec(pattern.as_bytes(), id.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn globbing() {
        assert!(glob_match("kms.*", "kms.partition.q"));
        assert!(glob_match("*", "anything"));
        assert!(glob_match("dr.triple.*.f6", "dr.triple.m-5.f6"));
        assert!(!glob_match("kms.*", "dr.triple.q.f6"));
        assert!(!glob_match("kms", "kms.partition"));
        assert!(glob_match("a*b*c", "axxbyyc"));
        assert!(!glob_match("a*b*c", "axxbyy"));
    }

    #[test]
    fn json_round_trip_and_severity() {
        let reports = vec![
            Report::pass("a.b", "fine"),
            Report::deviation("c.d", "formula off", "6 vs 12"),
        ];
        let text = to_json(&reports);
        let back: Vec<Report> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].status, Status::Deviation);
        assert_eq!(back[1].witness.as_deref(), Some("6 vs 12"));
        assert!(!any_fatal(&reports));
        assert_eq!(counts(&reports), (1, 1, 0));
        assert!(any_fatal(&[Report::fail("x", "boom")]));
    }
}
