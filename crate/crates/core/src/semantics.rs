//! NV processor: turns parsed tags into structural NV tokens.
//!
//! A tag is analysed on three axes. Its style is carried through unchanged.
//! Runs of identical discrete units (`ha ha ha`) collapse into one token
//! whose `count` is the run length. Each continuous unit becomes its own
//! token whose duration grows by [`ELONGATION_STEP`] per extra final
//! character.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::grammar::{AnnotatedTranscript, Element, NvTag, UnitLexeme};
use crate::lexicon::{format_seconds, parse_seconds, Lexicon, UnitKind};
use crate::style::NvStyle;

/// Duration added per repeated final character of a continuous unit.
pub const ELONGATION_STEP: Duration = Duration::from_millis(200);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("`{base}` is not a {style} unit")]
pub struct UnknownUnit {
    pub style: NvStyle,
    pub base: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NvToken {
    pub style: NvStyle,
    pub base: String,
    pub kind: UnitKind,
    /// Run length for discrete tokens; always 1 for continuous ones.
    pub count: usize,
    /// Per unit for discrete tokens, total for continuous ones.
    pub duration: Duration,
}

impl NvToken {
    pub fn duration_s(&self) -> f64 {
        self.duration.as_secs_f64()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamElement {
    Verbal(String),
    Nv(NvToken),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub elements: Vec<StreamElement>,
}

impl TokenStream {
    pub fn nv_tokens(&self) -> impl Iterator<Item = &NvToken> {
        self.elements.iter().filter_map(|e| match e {
            StreamElement::Nv(t) => Some(t),
            StreamElement::Verbal(_) => None,
        })
    }
}

pub fn classify_unit(
    lexicon: &Lexicon,
    style: NvStyle,
    unit: &UnitLexeme,
) -> Result<UnitKind, UnknownUnit> {
    lexicon
        .get(style, &unit.base)
        .map(|e| e.kind)
        .ok_or_else(|| UnknownUnit {
            style,
            base: unit.base.clone(),
        })
}

/// Continuous: base duration plus one step per elongation character.
/// Discrete: the nominal per-unit duration, whatever the elongation.
pub fn unit_duration(
    lexicon: &Lexicon,
    style: NvStyle,
    unit: &UnitLexeme,
) -> Result<Duration, UnknownUnit> {
    let entry = lexicon.get(style, &unit.base).ok_or_else(|| UnknownUnit {
        style,
        base: unit.base.clone(),
    })?;
    Ok(match entry.kind {
        UnitKind::Continuous => entry.duration + ELONGATION_STEP * unit.elongation as u32,
        UnitKind::Discrete => entry.duration,
    })
}

/// Occurrences of each discrete base in the tag; continuous units are skipped.
pub fn count_discrete(lexicon: &Lexicon, tag: &NvTag) -> Result<BTreeMap<String, usize>, UnknownUnit> {
    let mut counts = BTreeMap::new();
    for unit in &tag.units {
        if classify_unit(lexicon, tag.style, unit)? == UnitKind::Discrete {
            *counts.entry(unit.base.clone()).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

pub fn encode_tag(lexicon: &Lexicon, tag: &NvTag) -> Result<Vec<NvToken>, UnknownUnit> {
    let mut tokens: Vec<NvToken> = Vec::new();
    for unit in &tag.units {
        let kind = classify_unit(lexicon, tag.style, unit)?;
        if kind == UnitKind::Discrete {
            if let Some(prev) = tokens.last_mut() {
                if prev.kind == UnitKind::Discrete && prev.base == unit.base {
                    prev.count += 1;
                    continue;
                }
            }
        }
        tokens.push(NvToken {
            style: tag.style,
            base: unit.base.clone(),
            kind,
            count: 1,
            duration: unit_duration(lexicon, tag.style, unit)?,
        });
    }
    Ok(tokens)
}

pub fn encode_tokens(lexicon: &Lexicon, t: &AnnotatedTranscript) -> Result<TokenStream, UnknownUnit> {
    let mut elements = Vec::new();
    for e in t.elements() {
        match e {
            Element::Tag(tag) => elements.extend(encode_tag(lexicon, tag)?.into_iter().map(StreamElement::Nv)),
            Element::Verbal(v) => elements.push(StreamElement::Verbal(v.text.clone())),
        }
    }
    Ok(TokenStream { elements })
}

impl fmt::Display for TokenStream {
    /// One element per line: `V<TAB>text` or
    /// `N<TAB>style<TAB>base<TAB>kind<TAB>count<TAB>duration_s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.elements {
            match e {
                StreamElement::Verbal(text) => writeln!(f, "V\t{text}")?,
                StreamElement::Nv(t) => writeln!(
                    f,
                    "N\t{}\t{}\t{}\t{}\t{}",
                    t.style,
                    t.base,
                    t.kind,
                    t.count,
                    format_seconds(t.duration)
                )?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("token stream line {line}: {reason}")]
pub struct StreamParseError {
    pub line: usize,
    pub reason: String,
}

impl FromStr for TokenStream {
    type Err = StreamParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut elements = Vec::new();
        for (idx, line) in s.lines().enumerate() {
            let err = |reason: String| StreamParseError {
                line: idx + 1,
                reason,
            };
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            match cols.as_slice() {
                ["V", text] => elements.push(StreamElement::Verbal(text.to_string())),
                ["N", style, base, kind, count, dur] => {
                    let style = NvStyle::from_name(style).ok_or_else(|| err(format!("unknown style `{style}`")))?;
                    let kind: UnitKind = kind.parse().map_err(err)?;
                    let count: usize = count
                        .parse()
                        .ok()
                        .filter(|&c| c > 0 && (kind == UnitKind::Discrete || c == 1))
                        .ok_or_else(|| err(format!("invalid count `{count}`")))?;
                    let duration = parse_seconds(dur)
                        .filter(|d| !d.is_zero())
                        .ok_or_else(|| err(format!("invalid duration `{dur}`")))?;
                    elements.push(StreamElement::Nv(NvToken {
                        style,
                        base: base.to_string(),
                        kind,
                        count,
                        duration,
                    }));
                }
                _ => return Err(err("expected `V<TAB>text` or a 6-column `N` line".into())),
            }
        }
        Ok(TokenStream { elements })
    }
}
