use super::{GrammarError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    TagOpen,
    /// Style name between the parentheses, whitespace trimmed, case preserved.
    StyleName(String),
    UnitWord(String),
    TagClose,
    VerbalText(String),
}

/// A lexical token. Spans of consecutive tokens tile the input: whitespace
/// inside a tag belongs to the token that follows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

pub fn lex(text: &str) -> Result<Vec<Token>, GrammarError> {
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        if !rest.starts_with('<') {
            let end = rest.find('<').map_or(text.len(), |i| pos + i);
            tokens.push(Token {
                kind: TokenKind::VerbalText(text[pos..end].to_string()),
                span: Span::new(pos, end),
            });
            pos = end;
            continue;
        }
        pos = lex_tag(text, pos, &mut tokens)?;
    }
    Ok(tokens)
}

/// Lexes one `<( style ) word ... >` starting at `start`; returns the offset
/// just past the closing `>`.
fn lex_tag(text: &str, start: usize, tokens: &mut Vec<Token>) -> Result<usize, GrammarError> {
    let body_start = start + 1;
    let close = match text[body_start..].find(['<', '>']) {
        Some(i) if text.as_bytes()[body_start + i] == b'>' => body_start + i,
        _ => return Err(GrammarError::UnterminatedTag { offset: start }),
    };
    tokens.push(Token {
        kind: TokenKind::TagOpen,
        span: Span::new(start, body_start),
    });

    let body = &text[body_start..close];
    let lead = body.len() - body.trim_start().len();
    if !body[lead..].starts_with('(') {
        return Err(GrammarError::MalformedStyle { offset: start });
    }
    let paren_open = body_start + lead;
    let paren_close = match text[paren_open..close].find(')') {
        Some(i) => paren_open + i,
        None => return Err(GrammarError::MalformedStyle { offset: start }),
    };
    tokens.push(Token {
        kind: TokenKind::StyleName(text[paren_open + 1..paren_close].trim().to_string()),
        span: Span::new(body_start, paren_close + 1),
    });

    let mut pos = paren_close + 1;
    loop {
        let rest = &text[pos..close];
        let ws = rest.len() - rest.trim_start().len();
        if ws == rest.len() {
            break;
        }
        let word_start = pos + ws;
        let word_end = text[word_start..close]
            .find(char::is_whitespace)
            .map_or(close, |i| word_start + i);
        tokens.push(Token {
            kind: TokenKind::UnitWord(text[word_start..word_end].to_string()),
            span: Span::new(pos, word_end),
        });
        pos = word_end;
    }
    tokens.push(Token {
        kind: TokenKind::TagClose,
        span: Span::new(pos, close + 1),
    });
    Ok(close + 1)
}
