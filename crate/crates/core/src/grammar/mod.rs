//! The fine-grained NV tag language.
//!
//! A transcript is verbal text interleaved with tags of the form
//!
//! ```text
//! <(style) unit unit ...>
//! ```
//!
//! where `style` is one of the six [`NvStyle`](crate::NvStyle) names and each
//! unit is a lexicon base, optionally elongated by repeating its final
//! character. Parsing is case-insensitive; [`serialize`] produces the
//! canonical form (lowercase units, canonical style names, single spaces).

mod ast;
mod coarse;
mod lexer;

pub use ast::{
    parse_transcript, serialize, AnnotatedTranscript, Element, NvTag, TranscriptBuilder,
    UnitLexeme, VerbalSegment,
};
pub use coarse::{coarsen_text, to_coarse};
pub use lexer::{lex, Token, TokenKind};

use std::ops::Range;

use crate::style::NvStyle;

/// Byte offsets `[start, end)` into a source string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn range(self) -> Range<usize> {
        self.start..self.end
    }

    pub fn len(self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(self) -> bool {
        self.start == self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("unterminated tag starting at byte {offset}")]
    UnterminatedTag { offset: usize },
    #[error("tag at byte {offset} is missing its `(style)`")]
    MalformedStyle { offset: usize },
    #[error("unknown style `{name}` at byte {offset}")]
    UnknownStyle { name: String, offset: usize },
    #[error("tag at byte {offset} has no units")]
    EmptyTag { offset: usize },
    #[error("`{word}` at byte {offset} is not a {style} unit")]
    UnknownUnit {
        style: NvStyle,
        word: String,
        offset: usize,
    },
}

impl GrammarError {
    pub fn offset(&self) -> usize {
        match *self {
            GrammarError::UnterminatedTag { offset }
            | GrammarError::MalformedStyle { offset }
            | GrammarError::UnknownStyle { offset, .. }
            | GrammarError::EmptyTag { offset }
            | GrammarError::UnknownUnit { offset, .. } => offset,
        }
    }
}
