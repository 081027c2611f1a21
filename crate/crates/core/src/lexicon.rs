//! Unit lexicon: which base lexemes each style admits, whether they are
//! discrete or continuous, and their nominal durations.
//!
//! The on-disk form is line-oriented UTF-8, tab separated:
//!
//! ```text
//! style<TAB>base-lexeme<TAB>kind<TAB>duration_s
//! ```
//!
//! `#` starts a comment line. The duration column may be omitted for bases
//! that have a built-in default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use crate::style::NvStyle;

/// Built-in lexicon, loaded by [`Lexicon::default`].
pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.tsv");

/// Discrete units carry frequency (repetition), continuous units carry
/// duration (elongation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitKind {
    Discrete,
    Continuous,
}

impl UnitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Discrete => "discrete",
            UnitKind::Continuous => "continuous",
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UnitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "discrete" => Ok(UnitKind::Discrete),
            "continuous" => Ok(UnitKind::Continuous),
            other => Err(format!("unknown unit kind `{other}`")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("lexicon line {line}: duplicate entry for ({style}, {base})")]
    Duplicate {
        line: usize,
        style: NvStyle,
        base: String,
    },
    #[error("reading lexicon {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconEntry {
    pub style: NvStyle,
    /// Lowercase canonical base, words separated by single spaces.
    pub base: String,
    pub kind: UnitKind,
    /// Per-unit duration for discrete units, base duration for continuous ones.
    pub duration: Duration,
}

impl LexiconEntry {
    pub fn word_count(&self) -> usize {
        self.base.split(' ').count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    by_style: BTreeMap<NvStyle, Vec<LexiconEntry>>,
}

/// A unit decomposed against the lexicon: the entry it matched plus the
/// number of extra trailing characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMatch<'a> {
    pub entry: &'a LexiconEntry,
    pub elongation: usize,
    /// How many whitespace-separated words the match consumed.
    pub words: usize,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::parse(DEFAULT_LEXICON).expect("built-in lexicon is well formed")
    }
}

fn builtin_duration(base: &str) -> Option<Duration> {
    let ms = match base {
        "wuu" => 1000,
        "yo" | "hey" => 500,
        "ah" | "wo ho" => 800,
        "ha" => 250,
        "whep" => 300,
        "sneeze" => 500,
        _ => return None,
    };
    Some(Duration::from_millis(ms))
}

impl Lexicon {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Lexicon::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut by_style: BTreeMap<NvStyle, Vec<LexiconEntry>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |reason: String| LexiconError::Malformed { line, reason };
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(malformed(format!(
                    "expected 3 or 4 tab-separated columns, found {}",
                    cols.len()
                )));
            }
            let style = NvStyle::from_name(cols[0])
                .ok_or_else(|| malformed(format!("unknown style `{}`", cols[0])))?;
            let base = normalize_base(cols[1]).map_err(&malformed)?;
            let kind: UnitKind = cols[2].parse().map_err(&malformed)?;
            let duration = match cols.get(3) {
                Some(d) => parse_seconds(d)
                    .filter(|d| !d.is_zero())
                    .ok_or_else(|| malformed(format!("invalid duration `{d}`")))?,
                None => builtin_duration(&base)
                    .ok_or_else(|| malformed(format!("no duration given for `{base}`")))?,
            };
            let entries = by_style.entry(style).or_default();
            if entries.iter().any(|e| e.base == base) {
                return Err(LexiconError::Duplicate { line, style, base });
            }
            entries.push(LexiconEntry {
                style,
                base,
                kind,
                duration,
            });
        }
        // Longest (most words) first, so matching is greedy.
        for entries in by_style.values_mut() {
            entries.sort_by(|a, b| {
                b.word_count()
                    .cmp(&a.word_count())
                    .then_with(|| b.base.len().cmp(&a.base.len()))
            });
        }
        Ok(Lexicon { by_style })
    }

    pub fn entries(&self, style: NvStyle) -> &[LexiconEntry] {
        self.by_style.get(&style).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.by_style.values().flatten()
    }

    pub fn get(&self, style: NvStyle, base: &str) -> Option<&LexiconEntry> {
        self.entries(style).iter().find(|e| e.base == base)
    }

    pub fn max_words(&self) -> usize {
        self.iter().map(LexiconEntry::word_count).max().unwrap_or(1)
    }

    /// Greedy longest match of the lexicon against the head of `words`.
    ///
    /// `words` must already be lowercase. Elongation is only allowed on the
    /// last word of a multi-word base.
    pub fn match_unit<'a>(&'a self, style: NvStyle, words: &[&str]) -> Option<UnitMatch<'a>> {
        for entry in self.entries(style) {
            let base_words: Vec<&str> = entry.base.split(' ').collect();
            if base_words.len() > words.len() {
                continue;
            }
            let (init, last) = base_words.split_at(base_words.len() - 1);
            if init.iter().zip(words).any(|(b, w)| b != w) {
                continue;
            }
            if let Some(elongation) = elongation_of(words[init.len()], last[0]) {
                return Some(UnitMatch {
                    entry,
                    elongation,
                    words: base_words.len(),
                });
            }
        }
        None
    }
}

/// Number of extra copies of `base`'s final character in `word`, or `None`
/// if `word` is not `base` followed only by that character.
pub fn elongation_of(word: &str, base: &str) -> Option<usize> {
    let rest = word.strip_prefix(base)?;
    let last = base.chars().last()?;
    rest.chars().all(|c| c == last).then(|| rest.chars().count())
}

fn normalize_base(raw: &str) -> Result<String, String> {
    let words: Vec<&str> = raw.split_whitespace().collect();
    if words.is_empty() {
        return Err("empty base lexeme".into());
    }
    let base = words.join(" ").to_lowercase();
    if base.chars().any(|c| matches!(c, '<' | '>' | '(' | ')' | '\t')) {
        return Err(format!("base lexeme `{base}` contains a reserved character"));
    }
    Ok(base)
}

/// Parses a non-negative decimal number of seconds exactly (no float rounding).
pub fn parse_seconds(text: &str) -> Option<Duration> {
    let text = text.trim();
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int) || !all_digits(frac) || frac.len() > 9 {
        return None;
    }
    let secs: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let nanos: u32 = if frac.is_empty() {
        0
    } else {
        format!("{frac:0<9}").parse().ok()?
    };
    Some(Duration::new(secs, nanos))
}

/// Formats seconds with trailing zeros trimmed, keeping at least one decimal
/// (`1.0`, `0.25`, `1.6`).
pub fn format_seconds(d: Duration) -> String {
    let mut s = format!("{}.{:09}", d.as_secs(), d.subsec_nanos());
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    s
}
