//! Serializable analysis reports produced by the verdict engines.

use crate::conditions::Witness;
use serde::{Deserialize, Serialize};

/// Outcome of a full analysis run. Field order is the serialization order
/// and is part of the output format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub topologically_free_on_j: bool,
    pub strongly_topologically_free_on_j: bool,
    pub aperiodic: bool,
    pub weakly_aperiodic: bool,
    pub j_acyclic: bool,
    pub uniqueness: bool,
    pub quasi_nilpotent: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gauge_trivial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub simple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gauge_ideal_count: Option<u64>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    /// Stable line-per-flag rendering for terminal output.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let mut line = |label: &str, value: String| {
            out.push_str(label);
            out.push_str(": ");
            out.push_str(&value);
            out.push('\n');
        };
        line("topologically free on J", yes_no(self.topologically_free_on_j));
        line(
            "strongly topologically free on J",
            yes_no(self.strongly_topologically_free_on_j),
        );
        line("aperiodic", yes_no(self.aperiodic));
        line("weakly aperiodic", yes_no(self.weakly_aperiodic));
        line("J-acyclic", yes_no(self.j_acyclic));
        line("uniqueness", yes_no(self.uniqueness));
        line("quasi-nilpotent", yes_no(self.quasi_nilpotent));
        if let Some(g) = self.gauge_trivial {
            line("gauge-trivial", yes_no(g));
        }
        if let Some(s) = self.simple {
            line("simple", yes_no(s));
        }
        if let Some(n) = self.gauge_ideal_count {
            line("gauge-invariant ideal pairs", n.to_string());
        }
        if self.witnesses.is_empty() {
            out.push_str("witnesses: none\n");
        } else {
            out.push_str("witnesses:\n");
            for w in &self.witnesses {
                out.push_str("  - ");
                out.push_str(&describe_witness(w));
                out.push('\n');
            }
        }
        if self.notes.is_empty() {
            out.push_str("notes: none\n");
        } else {
            out.push_str("notes:\n");
            for n in &self.notes {
                out.push_str("  - ");
                out.push_str(n);
                out.push('\n');
            }
        }
        out
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn fmt_set(points: &[u32]) -> String {
    let inner: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn fmt_walk(points: &[u32]) -> String {
    let inner: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    inner.join(" -> ")
}

/// One-line human description of a witness.
pub fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::EntranceFreeCycle { open, cycle } => format!(
            "entrance-free cycle {} based inside open {}",
            fmt_walk(cycle),
            fmt_set(open)
        ),
        Witness::BoundedNonReturning { open, max_length } => format!(
            "non-returning paths into open {} have length at most {}",
            fmt_set(open),
            max_length
        ),
        Witness::PeriodicOpen { open, point_periods } => {
            let periods: Vec<String> =
                point_periods.iter().map(|p| p.to_string()).collect();
            format!(
                "every point of open {} is periodic (periods {})",
                fmt_set(open),
                periods.join(", ")
            )
        }
        Witness::MissingPath { open, length } => format!(
            "no admissible path of length {} ends in open {}",
            length,
            fmt_set(open)
        ),
        Witness::CyclicIdeal { ideal, period } => format!(
            "ideal {} meets an entrance-free cycle of length {}",
            fmt_set(ideal),
            period
        ),
        Witness::GaugeIdealPair { ideal, relative_ideal } => format!(
            "nontrivial gauge-invariant pair ({}, {})",
            fmt_set(ideal),
            fmt_set(relative_ideal)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> AnalysisReport {
        AnalysisReport {
            topologically_free_on_j: true,
            strongly_topologically_free_on_j: true,
            aperiodic: false,
            weakly_aperiodic: false,
            j_acyclic: true,
            uniqueness: true,
            quasi_nilpotent: false,
            gauge_trivial: Some(true),
            simple: Some(true),
            gauge_ideal_count: Some(2),
            witnesses: vec![Witness::CyclicIdeal { ideal: vec![0], period: 1 }],
            notes: vec!["example note".to_string()],
        }
    }

    #[test]
    fn json_field_order_is_stable() {
        let json = serde_json::to_string(&sample()).unwrap();
        assert_eq!(
            json,
            concat!(
                "{\"topologically_free_on_j\":true,",
                "\"strongly_topologically_free_on_j\":true,",
                "\"aperiodic\":false,",
                "\"weakly_aperiodic\":false,",
                "\"j_acyclic\":true,",
                "\"uniqueness\":true,",
                "\"quasi_nilpotent\":false,",
                "\"gauge_trivial\":true,",
                "\"simple\":true,",
                "\"gauge_ideal_count\":2,",
                "\"witnesses\":[{\"kind\":\"cyclic_ideal\",\"ideal\":[0],\"period\":1}],",
                "\"notes\":[\"example note\"]}"
            )
        );
    }

    #[test]
    fn optional_fields_are_omitted_when_absent() {
        let mut r = sample();
        r.gauge_trivial = None;
        r.simple = None;
        r.gauge_ideal_count = None;
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("gauge_trivial"));
        assert!(!json.contains("\"simple\""));
        assert!(!json.contains("gauge_ideal_count"));
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: AnalysisReport =
            serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn human_rendering_is_stable() {
        let text = sample().render_human();
        assert_eq!(
            text,
            "topologically free on J: yes\n\
             strongly topologically free on J: yes\n\
             aperiodic: no\n\
             weakly aperiodic: no\n\
             J-acyclic: yes\n\
             uniqueness: yes\n\
             quasi-nilpotent: no\n\
             gauge-trivial: yes\n\
             simple: yes\n\
             gauge-invariant ideal pairs: 2\n\
             witnesses:\n\
             \x20 - ideal {0} meets an entrance-free cycle of length 1\n\
             notes:\n\
             \x20 - example note\n"
        );
    }

    #[test]
    fn witness_descriptions() {
        assert_eq!(
            describe_witness(&Witness::EntranceFreeCycle {
                open: vec![0],
                cycle: vec![0, 2, 1]
            }),
            "entrance-free cycle 0 -> 2 -> 1 based inside open {0}"
        );
        assert_eq!(
            describe_witness(&Witness::BoundedNonReturning {
                open: vec![0],
                max_length: 2
            }),
            "non-returning paths into open {0} have length at most 2"
        );
        assert_eq!(
            describe_witness(&Witness::MissingPath { open: vec![1], length: 2 }),
            "no admissible path of length 2 ends in open {1}"
        );
    }
}
