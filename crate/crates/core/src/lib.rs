//! Toolkit for fine-grained non-verbal (NV) vocalization annotation.
//!
//! - [`grammar`]: the `<(style) unit ...>` tag language (lex, parse, serialize, coarsen)
//! - [`semantics`]: NV token encoding (discrete counts, continuous durations)
//! - [`audio`]: WAV I/O and RMS/dBFS silence segmentation
//! - [`corpus`]: manifest building, statistics, validation and emotion labels
//! - [`oracle`]: deterministic tone-burst renderer and recovery for round-trip checks
//! - [`eval`]: MOS, recognition accuracy, confusion matrices and preference ranks

pub mod audio;
pub mod corpus;
pub mod eval;
pub mod grammar;
pub mod lexicon;
pub mod oracle;
pub mod semantics;
mod style;

pub use grammar::{parse_transcript, serialize, to_coarse, AnnotatedTranscript, GrammarError};
pub use lexicon::{Lexicon, UnitKind};
pub use semantics::{encode_tokens, NvToken, TokenStream};
pub use style::{NvStyle, UnknownStyleName};
