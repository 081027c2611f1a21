use super::ast::{normalize_verbal, parse_transcript, AnnotatedTranscript, Element};
use super::GrammarError;
use crate::lexicon::Lexicon;
use crate::style::NvStyle;

/// Replaces each tag by its style-only form `<style>`, dropping all unit
/// detail. Verbal text is kept (whitespace-normalized).
pub fn to_coarse(t: &AnnotatedTranscript) -> String {
    t.elements()
        .into_iter()
        .map(|e| match e {
            Element::Tag(tag) => coarse_tag(tag.style),
            Element::Verbal(v) => v.text.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn coarse_tag(style: NvStyle) -> String {
    format!("<{}>", style.canonical_name())
}

/// Coarsens text that may mix fine-grained tags with tags that are already
/// coarse (`<crying>`). Applying it to its own output is a no-op.
pub fn coarsen_text(text: &str, lexicon: &Lexicon) -> Result<String, GrammarError> {
    let mut parts = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let Some(open) = text[pos..].find('<').map(|i| pos + i) else {
            parts.push(normalize_verbal(&text[pos..]));
            break;
        };
        parts.push(normalize_verbal(&text[pos..open]));
        let close = match text[open + 1..].find(['<', '>']) {
            Some(i) if text.as_bytes()[open + 1 + i] == b'>' => open + 1 + i,
            _ => return Err(GrammarError::UnterminatedTag { offset: open }),
        };
        let inner = text[open + 1..close].trim();
        let style = if inner.starts_with('(') {
            let tag = parse_transcript(&text[open..=close], lexicon).map_err(|e| shift(e, open))?;
            tag.tags[0].style
        } else {
            NvStyle::from_name(inner).ok_or_else(|| GrammarError::UnknownStyle {
                name: inner.to_string(),
                offset: open + 1,
            })?
        };
        parts.push(coarse_tag(style));
        pos = close + 1;
    }
    parts.retain(|p| !p.is_empty());
    Ok(parts.join(" "))
}

fn shift(err: GrammarError, by: usize) -> GrammarError {
    match err {
        GrammarError::UnterminatedTag { offset } => GrammarError::UnterminatedTag { offset: offset + by },
        GrammarError::MalformedStyle { offset } => GrammarError::MalformedStyle { offset: offset + by },
        GrammarError::UnknownStyle { name, offset } => GrammarError::UnknownStyle {
            name,
            offset: offset + by,
        },
        GrammarError::EmptyTag { offset } => GrammarError::EmptyTag { offset: offset + by },
        GrammarError::UnknownUnit {
            style,
            word,
            offset,
        } => GrammarError::UnknownUnit {
            style,
            word,
            offset: offset + by,
        },
    }
}
