use super::lexer::{lex, TokenKind};
use super::{GrammarError, Span};
use crate::lexicon::Lexicon;
use crate::style::NvStyle;

/// One unit inside a tag, decomposed into its lexicon base and elongation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitLexeme {
    /// Canonical (lowercase) written form, e.g. `wuuuuu`.
    pub surface: String,
    /// Lexicon base, e.g. `wuu`.
    pub base: String,
    /// Extra copies of the base's final character.
    pub elongation: usize,
}

impl UnitLexeme {
    pub fn new(base: impl Into<String>, elongation: usize) -> Self {
        let base = base.into();
        let mut surface = base.clone();
        if let Some(last) = base.chars().last() {
            surface.extend(std::iter::repeat_n(last, elongation));
        }
        UnitLexeme {
            surface,
            base,
            elongation,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NvTag {
    pub style: NvStyle,
    pub units: Vec<UnitLexeme>,
    /// From `<` to `>` inclusive.
    pub span: Span,
}

impl NvTag {
    pub fn to_canonical(&self) -> String {
        let units: Vec<&str> = self.units.iter().map(|u| u.surface.as_str()).collect();
        format!("<({}) {}>", self.style.canonical_name(), units.join(" "))
    }
}

/// A run of verbal text, whitespace collapsed and trimmed. `span` covers the
/// trimmed text in the source.
#[derive(Clone, Debug)]
pub struct VerbalSegment {
    pub text: String,
    pub span: Span,
}

/// A parsed transcript.
///
/// Equality compares content only (tag styles, units and verbal text in
/// order); `source` and spans are ignored so that a transcript equals the
/// parse of its own canonical serialization.
#[derive(Clone, Debug)]
pub struct AnnotatedTranscript {
    pub source: String,
    pub tags: Vec<NvTag>,
    pub verbal_segments: Vec<VerbalSegment>,
}

#[derive(Clone, Copy, Debug)]
pub enum Element<'a> {
    Tag(&'a NvTag),
    Verbal(&'a VerbalSegment),
}

impl Element<'_> {
    fn span(&self) -> Span {
        match self {
            Element::Tag(t) => t.span,
            Element::Verbal(v) => v.span,
        }
    }
}

impl AnnotatedTranscript {
    /// Tags and verbal segments merged in source order.
    pub fn elements(&self) -> Vec<Element<'_>> {
        let mut out: Vec<Element<'_>> = self
            .tags
            .iter()
            .map(Element::Tag)
            .chain(self.verbal_segments.iter().map(Element::Verbal))
            .collect();
        out.sort_by_key(|e| e.span().start);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty() && self.verbal_segments.is_empty()
    }
}

impl PartialEq for AnnotatedTranscript {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.elements(), other.elements());
        a.len() == b.len()
            && a.iter().zip(&b).all(|pair| match pair {
                (Element::Tag(x), Element::Tag(y)) => x.style == y.style && x.units == y.units,
                (Element::Verbal(x), Element::Verbal(y)) => x.text == y.text,
                _ => false,
            })
    }
}

impl Eq for AnnotatedTranscript {}

pub(crate) fn normalize_verbal(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn parse_transcript(text: &str, lexicon: &Lexicon) -> Result<AnnotatedTranscript, GrammarError> {
    let tokens = lex(text)?;
    let mut tags = Vec::new();
    let mut verbal_segments = Vec::new();
    let mut iter = tokens.into_iter();

    while let Some(tok) = iter.next() {
        match tok.kind {
            TokenKind::VerbalText(raw) => {
                let normalized = normalize_verbal(&raw);
                if normalized.is_empty() {
                    continue;
                }
                let lead = raw.len() - raw.trim_start().len();
                let trail = raw.len() - raw.trim_end().len();
                verbal_segments.push(VerbalSegment {
                    text: normalized,
                    span: Span::new(tok.span.start + lead, tok.span.end - trail),
                });
            }
            TokenKind::TagOpen => {
                let tag_start = tok.span.start;
                let mut style_name = None;
                let mut words: Vec<(String, usize)> = Vec::new();
                let mut tag_end = tag_start;
                for inner in iter.by_ref() {
                    match inner.kind {
                        TokenKind::StyleName(name) => style_name = Some((name, inner.span.start)),
                        TokenKind::UnitWord(word) => {
                            let offset = inner.span.end - word.len();
                            words.push((word, offset));
                        }
                        TokenKind::TagClose => {
                            tag_end = inner.span.end;
                            break;
                        }
                        other => unreachable!("lexer emitted {other:?} inside a tag"),
                    }
                }
                let (name, name_offset) = style_name.expect("lexer always emits a style name");
                let style = NvStyle::from_name(&name).ok_or(GrammarError::UnknownStyle {
                    name,
                    offset: name_offset,
                })?;
                if words.is_empty() {
                    return Err(GrammarError::EmptyTag { offset: tag_start });
                }
                let units = decompose_units(style, &words, lexicon)?;
                tags.push(NvTag {
                    style,
                    units,
                    span: Span::new(tag_start, tag_end),
                });
            }
            other => unreachable!("lexer emitted {other:?} outside a tag"),
        }
    }

    Ok(AnnotatedTranscript {
        source: text.to_string(),
        tags,
        verbal_segments,
    })
}

fn decompose_units(
    style: NvStyle,
    words: &[(String, usize)],
    lexicon: &Lexicon,
) -> Result<Vec<UnitLexeme>, GrammarError> {
    let lower: Vec<String> = words.iter().map(|(w, _)| w.to_lowercase()).collect();
    let refs: Vec<&str> = lower.iter().map(String::as_str).collect();
    let mut units = Vec::new();
    let mut i = 0;
    while i < refs.len() {
        let m = lexicon
            .match_unit(style, &refs[i..])
            .ok_or_else(|| GrammarError::UnknownUnit {
                style,
                word: words[i].0.clone(),
                offset: words[i].1,
            })?;
        units.push(UnitLexeme::new(m.entry.base.clone(), m.elongation));
        i += m.words;
    }
    Ok(units)
}

/// Canonical text: tags and verbal segments joined by single spaces.
pub fn serialize(t: &AnnotatedTranscript) -> String {
    t.elements()
        .into_iter()
        .map(|e| match e {
            Element::Tag(tag) => tag.to_canonical(),
            Element::Verbal(v) => v.text.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Assembles a transcript from parts, producing canonical source text and
/// spans. Units are not checked against a lexicon; verbal text must not
/// contain `<`.
#[derive(Default, Debug, Clone)]
pub struct TranscriptBuilder {
    parts: Vec<Part>,
}

#[derive(Debug, Clone)]
enum Part {
    Tag(NvStyle, Vec<UnitLexeme>),
    Verbal(String),
}

impl TranscriptBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tag(mut self, style: NvStyle, units: Vec<UnitLexeme>) -> Self {
        self.parts.push(Part::Tag(style, units));
        self
    }

    pub fn verbal(mut self, text: &str) -> Self {
        debug_assert!(!text.contains('<'));
        let text = normalize_verbal(text);
        if !text.is_empty() {
            self.parts.push(Part::Verbal(text));
        }
        self
    }

    pub fn build(self) -> AnnotatedTranscript {
        let mut source = String::new();
        let mut tags = Vec::new();
        let mut verbal_segments = Vec::new();
        for part in self.parts {
            if !source.is_empty() {
                source.push(' ');
            }
            let start = source.len();
            match part {
                Part::Tag(style, units) => {
                    let mut tag = NvTag {
                        style,
                        units,
                        span: Span::new(0, 0),
                    };
                    source.push_str(&tag.to_canonical());
                    tag.span = Span::new(start, source.len());
                    tags.push(tag);
                }
                Part::Verbal(text) => {
                    source.push_str(&text);
                    verbal_segments.push(VerbalSegment {
                        text,
                        span: Span::new(start, source.len()),
                    });
                }
            }
        }
        AnnotatedTranscript {
            source,
            tags,
            verbal_segments,
        }
    }
}
