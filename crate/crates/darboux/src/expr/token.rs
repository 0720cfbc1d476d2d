//! Lexer for the expression grammar.

use crate::error::{KernelError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Paren,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub position: usize,
}

/// Split `text` into tokens.  Identifiers are lower-case ASCII runs, numbers
/// are decimal literals with optional fraction and exponent, operators are
/// `+ - * / ^`.  Anything else is a lexical error carrying its position.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                if i >= bytes.len() || !(bytes[i] as char).is_ascii_digit() {
                    return Err(KernelError::Lexical {
                        position: i.min(bytes.len()),
                        message: "expected digit after decimal point".into(),
                    });
                }
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
            }
            // Exponent part: only when followed by digits (with optional sign).
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Token {
                kind: TokenKind::Number,
                text: text[start..i].to_string(),
                position: start,
            });
        } else if c.is_ascii_lowercase() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_lowercase() {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Identifier,
                text: text[start..i].to_string(),
                position: start,
            });
        } else if matches!(c, '+' | '-' | '*' | '/' | '^') {
            i += 1;
            out.push(Token {
                kind: TokenKind::Operator,
                text: c.to_string(),
                position: start,
            });
        } else if c == '(' || c == ')' {
            i += 1;
            out.push(Token {
                kind: TokenKind::Paren,
                text: c.to_string(),
                position: start,
            });
        } else if c == ',' {
            i += 1;
            out.push(Token {
                kind: TokenKind::Comma,
                text: c.to_string(),
                position: start,
            });
        } else {
            return Err(KernelError::Lexical {
                position: start,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_symbol() {
        let toks = tokenize("s").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::Identifier);
        assert_eq!(toks[0].text, "s");
        assert_eq!(toks[0].position, 0);
    }

    #[test]
    fn function_call_stream() {
        let toks = tokenize("sin(s/sqrt(2))").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| (t.kind, t.text.as_str())).collect();
        assert_eq!(
            kinds,
            vec![
                (TokenKind::Identifier, "sin"),
                (TokenKind::Paren, "("),
                (TokenKind::Identifier, "s"),
                (TokenKind::Operator, "/"),
                (TokenKind::Identifier, "sqrt"),
                (TokenKind::Paren, "("),
                (TokenKind::Number, "2"),
                (TokenKind::Paren, ")"),
                (TokenKind::Paren, ")"),
            ]
        );
    }

    #[test]
    fn concatenation_reproduces_input_modulo_whitespace() {
        let src = "1.5 * (s + 2) ^ 3 - cos(s)";
        let toks = tokenize(src).unwrap();
        let glued: String = toks.iter().map(|t| t.text.as_str()).collect();
        let stripped: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        assert_eq!(glued, stripped);
        for w in toks.windows(2) {
            assert!(w[0].position < w[1].position);
        }
    }

    #[test]
    fn malformed_literal_two_dots() {
        let err = tokenize("2..3").unwrap_err();
        match err {
            KernelError::Lexical { position, .. } => assert_eq!(position, 2),
            other => panic!("expected lexical error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_characters() {
        assert!(matches!(
            tokenize("s + @").unwrap_err(),
            KernelError::Lexical { position: 4, .. }
        ));
        assert!(matches!(
            tokenize("Sin(s)").unwrap_err(),
            KernelError::Lexical { position: 0, .. }
        ));
    }

    #[test]
    fn scientific_notation_and_bare_e() {
        let toks = tokenize("2e-3").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].text, "2e-3");
        // '2e' alone is a number followed by the identifier e
        let toks = tokenize("2e").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[0].text, "2");
        assert_eq!(toks[1].text, "e");
    }
}
