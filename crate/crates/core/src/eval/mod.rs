//! Listening-test statistics: MOS with normal-approximation confidence
//! intervals, four-way emotion recognition accuracy, confusion matrices and
//! preference-rank histograms.

mod ingest;
mod metrics;

pub use ingest::{parse_preferences, parse_ratings, PREFERENCE_HEADER, RATING_HEADER};
pub use metrics::{
    accuracy, confusion, macro_accuracy, mos, preference, write_accuracy_report, write_mos_report,
    write_preference_report, ConfusionMatrix, Group, GroupBy, MosField, MosSummary,
    PreferenceHistogram,
};

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("no records for {0}")]
    EmptyGroup(String),
    #[error("preference records for {emotion} rank different variant sets")]
    InconsistentVariants { emotion: Emotion },
}

/// System under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    VerbalOnly,
    CoarseNV,
    FineNV,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::VerbalOnly, Condition::CoarseNV, Condition::FineNV];

    pub fn name(self) -> &'static str {
        match self {
            Condition::VerbalOnly => "VerbalOnly",
            Condition::CoarseNV => "CoarseNV",
            Condition::FineNV => "FineNV",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = String;

    /// Case-insensitive; also accepts `verbal`, `coarse` and `fine`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "verbalonly" | "verbal" => Ok(Condition::VerbalOnly),
            "coarsenv" | "coarse" => Ok(Condition::CoarseNV),
            "finenv" | "fine" => Ok(Condition::FineNV),
            _ => Err(format!("unknown condition `{s}`")),
        }
    }
}

/// The four answer classes of the recognition task, in matrix order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emotion {
    Happy,
    Sad,
    Anger,
    Fear,
}

impl Emotion {
    pub const ALL: [Emotion; 4] = [Emotion::Happy, Emotion::Sad, Emotion::Anger, Emotion::Fear];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Emotion::Happy => "happy",
            Emotion::Sad => "sad",
            Emotion::Anger => "anger",
            Emotion::Fear => "fear",
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Emotion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "happy" => Ok(Emotion::Happy),
            "sad" => Ok(Emotion::Sad),
            "anger" | "angry" => Ok(Emotion::Anger),
            "fear" => Ok(Emotion::Fear),
            _ => Err(format!("unknown emotion `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatingRecord {
    pub rater_id: String,
    pub sample_id: String,
    pub condition: Condition,
    pub true_emotion: Emotion,
    pub chosen_emotion: Emotion,
    /// 1..=5
    pub nmos: u8,
    /// 1..=5
    pub emos: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceRecord {
    pub rater_id: String,
    /// Happy or Sad.
    pub emotion: Emotion,
    /// Variant identifiers from most to least preferred; a permutation.
    pub ranking: [String; 4],
}
