use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use super::CorpusManifest;
use crate::grammar::parse_transcript;
use crate::lexicon::Lexicon;
use crate::style::NvStyle;

/// Expected length of an NV utterance after segmentation, in seconds.
pub const NV_DURATION_RANGE: (f64, f64) = (2.0, 6.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub severity: Severity,
    pub id: String,
    pub rule: &'static str,
    pub detail: String,
}

/// Checks every record; at most one violation per (record, rule).
///
/// Rules: `duration` (warning, NV records outside 2–6 s), `transcript`
/// (error, does not parse), `style` (error, style column disagrees with the
/// first tag), `emotion-range` (error, arousal/valence outside `[0, 1]`),
/// `emotion-pair` (error, only one of arousal/valence present),
/// `duplicate-id` (error) and `multi-style` (info, several tag styles).
pub fn validate(m: &CorpusManifest, lexicon: &Lexicon) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for r in &m.records {
        let mut push = |severity, rule, detail: String| {
            out.push(Violation {
                severity,
                id: r.id.clone(),
                rule,
                detail,
            })
        };
        if !seen.insert(r.id.as_str()) {
            push(Severity::Error, "duplicate-id", "id appears more than once".into());
        }
        if r.style.is_some() {
            let (lo, hi) = NV_DURATION_RANGE;
            if !(lo..=hi).contains(&r.duration_s) {
                push(
                    Severity::Warning,
                    "duration",
                    format!("{} s outside [{lo}, {hi}] s", r.duration_s),
                );
            }
        }
        match parse_transcript(&r.transcript, lexicon) {
            Err(e) => push(Severity::Error, "transcript", e.to_string()),
            Ok(t) => {
                let first = t.tags.first().map(|tag| tag.style);
                if first != r.style {
                    push(
                        Severity::Error,
                        "style",
                        format!("style column {} but first tag is {}", show(r.style), show(first)),
                    );
                }
                let styles: BTreeSet<NvStyle> = t.tags.iter().map(|tag| tag.style).collect();
                if styles.len() > 1 {
                    let names: Vec<&str> = styles.iter().map(|s| s.canonical_name()).collect();
                    push(Severity::Info, "multi-style", names.join(","));
                }
            }
        }
        match (r.arousal, r.valence) {
            (Some(a), Some(v)) => {
                let in_range = |x: f64| (0.0..=1.0).contains(&x);
                if !in_range(a) || !in_range(v) {
                    push(
                        Severity::Error,
                        "emotion-range",
                        format!("arousal {a}, valence {v} not both in [0, 1]"),
                    );
                }
            }
            (None, None) => {}
            _ => push(
                Severity::Error,
                "emotion-pair",
                "arousal and valence must be present together".into(),
            ),
        }
    }
    out
}

fn show(style: Option<NvStyle>) -> &'static str {
    style.map_or("-", NvStyle::canonical_name)
}

/// `severity<TAB>id<TAB>rule<TAB>detail` lines.
pub fn write_violation_report(violations: &[Violation]) -> String {
    let mut out = String::new();
    for v in violations {
        writeln!(out, "{}\t{}\t{}\t{}", v.severity, v.id, v.rule, v.detail).unwrap();
    }
    out
}
