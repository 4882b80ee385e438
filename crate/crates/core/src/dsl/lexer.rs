use super::DslError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset of the first character.
    pub position: usize,
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Length of the decimal literal starting at `bytes[0]`:
/// `digits ('.' digits?)? ([eE] [+-]? digits)?`.
fn number_len(bytes: &[u8]) -> usize {
    let digits = |from: usize| bytes[from..].iter().take_while(|b| b.is_ascii_digit()).count();
    let mut len = digits(0);
    if bytes.get(len) == Some(&b'.') {
        len += 1 + digits(len + 1);
    }
    if matches!(bytes.get(len), Some(b'e' | b'E')) {
        let mut k = len + 1;
        if matches!(bytes.get(k), Some(b'+' | b'-')) {
            k += 1;
        }
        let exp_digits = digits(k);
        if exp_digits > 0 {
            len = k + exp_digits;
        }
    }
    len
}

/// Splits `src` into tokens, skipping ASCII whitespace.
pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let single = match b {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b',' => Some(TokenKind::Comma),
            _ => None,
        };
        let (kind, len) = if let Some(kind) = single {
            (kind, 1)
        } else if b.is_ascii_digit() {
            (TokenKind::Number, number_len(&bytes[pos..]))
        } else if is_ident_start(b) {
            let len = bytes[pos..].iter().take_while(|&&c| is_ident_continue(c)).count();
            (TokenKind::Ident, len)
        } else {
            let found = src[pos..].chars().next().unwrap_or('\u{FFFD}');
            return Err(DslError::Lex { position: pos, found });
        };
        let lexeme = &src[pos..pos + len];
        if kind == TokenKind::Number && !lexeme.parse::<f64>().is_ok_and(f64::is_finite) {
            return Err(DslError::Parse {
                position: pos,
                expected: "a finite number".into(),
                found: lexeme.to_string(),
            });
        }
        tokens.push(Token {
            kind,
            lexeme: lexeme.to_string(),
            position: pos,
        });
        pos += len;
    }
    Ok(tokens)
}
