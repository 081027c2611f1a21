//! Corpus manifests: one record per utterance binding audio, fine-grained
//! transcript, speaker and optional arousal/valence labels.
//!
//! On disk a manifest is tab-separated UTF-8 with a header line:
//!
//! ```text
//! id  audio_path  speaker_id  style  arousal  valence  duration_s  transcript
//! ```
//!
//! Missing optional fields are written as `-`. The transcript is the last
//! column so it may contain spaces. Arousal and valence live in `[0, 1]`.

mod build;
mod labels;
pub mod synth;
mod validate;

pub use build::{build_manifest, BuildIssue, BuildOutcome};
pub use labels::{attach_emotion_labels, parse_labels, LabelRange, LabelReport};
pub use validate::{validate, write_violation_report, Severity, Violation};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::style::NvStyle;

pub const MANIFEST_HEADER: &str =
    "id\taudio_path\tspeaker_id\tstyle\tarousal\tvalence\tduration_s\ttranscript";

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("manifest line {line}: {reason}")]
    MalformedManifest { line: usize, reason: String },
    #[error("labels line {line}: {reason}")]
    MalformedLabelFile { line: usize, reason: String },
}

impl CorpusError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UtteranceRecord {
    pub id: String,
    pub audio_path: String,
    pub transcript: String,
    pub speaker_id: String,
    /// Style of the first NV tag; `None` for verbal-only utterances.
    pub style: Option<NvStyle>,
    pub arousal: Option<f64>,
    pub valence: Option<f64>,
    pub duration_s: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusManifest {
    pub records: Vec<UtteranceRecord>,
    pub stats: BTreeMap<NvStyle, usize>,
}

impl CorpusManifest {
    /// Sorts records by id and computes style counts.
    pub fn new(mut records: Vec<UtteranceRecord>) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut m = CorpusManifest {
            records,
            stats: BTreeMap::new(),
        };
        m.stats = compute_stats(&m);
        m
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(MANIFEST_HEADER);
        out.push('\n');
        for r in &self.records {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.id,
                r.audio_path,
                r.speaker_id,
                r.style.map_or("-", NvStyle::canonical_name),
                opt_f64(r.arousal),
                opt_f64(r.valence),
                r.duration_s,
                r.transcript
            )
            .unwrap();
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, CorpusError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == MANIFEST_HEADER => {}
            _ => {
                return Err(CorpusError::MalformedManifest {
                    line: 1,
                    reason: "missing or unexpected header".into(),
                })
            }
        }
        let mut records = Vec::new();
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| CorpusError::MalformedManifest {
                line: idx + 1,
                reason,
            };
            let cols: Vec<&str> = line.splitn(8, '\t').collect();
            if cols.len() != 8 {
                return Err(bad(format!("expected 8 columns, found {}", cols.len())));
            }
            let style = match cols[3] {
                "-" => None,
                s => Some(NvStyle::from_name(s).ok_or_else(|| bad(format!("unknown style `{s}`")))?),
            };
            let num = |s: &str, what: &str| -> Result<Option<f64>, CorpusError> {
                match s {
                    "-" => Ok(None),
                    s => s
                        .parse::<f64>()
                        .map(Some)
                        .map_err(|_| bad(format!("invalid {what} `{s}`"))),
                }
            };
            records.push(UtteranceRecord {
                id: cols[0].to_string(),
                audio_path: cols[1].to_string(),
                speaker_id: cols[2].to_string(),
                style,
                arousal: num(cols[4], "arousal")?,
                valence: num(cols[5], "valence")?,
                duration_s: num(cols[6], "duration")?
                    .ok_or_else(|| bad("duration is required".into()))?,
                transcript: cols[7].to_string(),
            });
        }
        Ok(CorpusManifest::new(records))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
        CorpusManifest::from_tsv(&text)
    }
}

fn opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Per-style record counts; every style is present, possibly with 0.
pub fn compute_stats(m: &CorpusManifest) -> BTreeMap<NvStyle, usize> {
    let mut stats: BTreeMap<NvStyle, usize> = NvStyle::ALL.into_iter().map(|s| (s, 0)).collect();
    for style in m.records.iter().filter_map(|r| r.style) {
        *stats.get_mut(&style).unwrap() += 1;
    }
    stats
}

/// `style<TAB>count` lines followed by `total<TAB>n`.
pub fn write_stats(stats: &BTreeMap<NvStyle, usize>) -> String {
    let mut out = String::new();
    for (style, n) in stats {
        writeln!(out, "{style}\t{n}").unwrap();
    }
    writeln!(out, "total\t{}", stats.values().sum::<usize>()).unwrap();
    out
}
