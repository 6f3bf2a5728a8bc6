//! Tokenizer for construction-script source lines.
//!
//! Numbers never use scientific notation: `e` is always an identifier, so
//! `-1.4e+b` lexes as `- 1.4 e + b`. Greek letters and `∞` are standalone
//! one-character identifiers and never merge with adjacent Latin letters,
//! which is what lets `2nπ` mean `2·n·π`.

use crate::diag::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Ident,
    /// `+ - * / ^ =`
    Op(char),
    /// `( ) [ ] { } , : |`
    Punct(char),
    /// `#view <view>` line marker; the view name is the lexeme.
    Directive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub line: u32,
    pub col: u32,
    /// Byte range in the source line.
    pub span: (usize, usize),
    /// Whitespace immediately before this token.
    pub space_before: bool,
}

impl Token {
    pub fn is_op(&self, c: char) -> bool {
        self.kind == TokenKind::Op(c)
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokenKind::Punct(c)
    }

    /// Single-character Greek-letter or `∞` identifier.
    pub fn is_symbol_ident(&self) -> bool {
        self.kind == TokenKind::Ident && {
            let mut chars = self.lexeme.chars();
            matches!((chars.next(), chars.next()), (Some(c), None) if is_symbol_char(c))
        }
    }
}

fn is_symbol_char(c: char) -> bool {
    c == '∞' || ('\u{0370}'..='\u{03ff}').contains(&c)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && !is_symbol_char(c)
}

fn is_ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && !is_symbol_char(c)) || c.is_ascii_digit()
}

/// Tokenizes one source line. `line_no` is 1-based.
pub fn tokenize(source: &str, line_no: u32) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut chars: Vec<(usize, char)> = source.char_indices().collect();
    chars.push((source.len(), '\0')); // sentinel
    let mut i = 0usize;
    let mut space_before = false;
    let col_of = |byte: usize| -> u32 { source[..byte].chars().count() as u32 + 1 };

    // `#view <name>` is a directive; any other `#` starts a comment.
    let trimmed = source.trim_start();
    if let Some(rest) = trimmed.strip_prefix("#view") {
        let name = rest.trim();
        let start = source.len() - trimmed.len();
        return Ok(vec![Token {
            kind: TokenKind::Directive,
            lexeme: name.to_string(),
            line: line_no,
            col: col_of(start),
            span: (start, source.len()),
            space_before: false,
        }]);
    }

    while i < chars.len() - 1 {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            space_before = true;
            i += 1;
            continue;
        }
        if c == '#' {
            break; // comment to end of line
        }
        let col = col_of(start);
        let push = |kind: TokenKind, end_i: usize, toks: &mut Vec<Token>| {
            let end = chars[end_i].0;
            toks.push(Token {
                kind,
                lexeme: source[start..end].to_string(),
                line: line_no,
                col,
                span: (start, end),
                space_before,
            });
        };

        if c.is_ascii_digit() || (c == '.' && chars[i + 1].1.is_ascii_digit()) {
            let mut j = i;
            while chars[j].1.is_ascii_digit() {
                j += 1;
            }
            if chars[j].1 == '.' && chars[j + 1].1.is_ascii_digit() {
                j += 1;
                while chars[j].1.is_ascii_digit() {
                    j += 1;
                }
            } else if c == '.' {
                // leading-dot form: .digits
                j = i + 1;
                while chars[j].1.is_ascii_digit() {
                    j += 1;
                }
            }
            push(TokenKind::Number, j, &mut tokens);
            i = j;
        } else if is_symbol_char(c) {
            push(TokenKind::Ident, i + 1, &mut tokens);
            i += 1;
        } else if is_ident_start(c) {
            let mut j = i + 1;
            let mut seen_subscript = false;
            loop {
                let ch = chars[j].1;
                if is_ident_continue(ch) {
                    j += 1;
                } else if ch == '_' && !seen_subscript && is_ident_continue(chars[j + 1].1) {
                    seen_subscript = true;
                    j += 2;
                } else {
                    break;
                }
            }
            push(TokenKind::Ident, j, &mut tokens);
            i = j;
        } else if matches!(c, '+' | '-' | '*' | '/' | '^' | '=') {
            push(TokenKind::Op(c), i + 1, &mut tokens);
            i += 1;
        } else if matches!(c, '(' | ')' | '[' | ']' | '{' | '}' | ',' | ':' | '|') {
            push(TokenKind::Punct(c), i + 1, &mut tokens);
            i += 1;
        } else {
            return Err(Diagnostic::new(line_no, col, format!("illegal character `{c}`")));
        }
        space_before = false;
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<String> {
        tokenize(src, 1)
            .unwrap()
            .into_iter()
            .map(|t| match t.kind {
                TokenKind::Number => format!("num {}", t.lexeme),
                TokenKind::Ident => format!("id {}", t.lexeme),
                TokenKind::Op(c) => c.to_string(),
                TokenKind::Punct(c) => c.to_string(),
                TokenKind::Directive => format!("view {}", t.lexeme),
            })
            .collect()
    }

    #[test]
    fn slider_line() {
        assert_eq!(
            kinds("m=Seletor(-5, 5, 1)"),
            ["id m", "=", "id Seletor", "(", "-", "num 5", ",", "num 5", ",", "num 1", ")"]
        );
    }

    #[test]
    fn e_is_never_an_exponent_marker() {
        assert_eq!(kinds("-1.4e+b"), ["-", "num 1.4", "id e", "+", "id b"]);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(tokenize("", 1).unwrap().is_empty());
    }

    #[test]
    fn greek_letters_are_standalone() {
        assert_eq!(kinds("2nπ"), ["num 2", "id n", "id π"]);
        assert_eq!(kinds("2π"), ["num 2", "id π"]);
    }

    #[test]
    fn subscripted_and_digit_identifiers() {
        assert_eq!(kinds("z_3 u1 EixoOx"), ["id z_3", "id u1", "id EixoOx"]);
    }

    #[test]
    fn leading_dot_number() {
        assert_eq!(kinds(".1+2.25"), ["num .1", "+", "num 2.25"]);
    }

    #[test]
    fn comment_stops_scan_and_directive_is_recognized() {
        assert_eq!(kinds("a=1 # trailing"), ["id a", "=", "num 1"]);
        assert_eq!(kinds("#view 2d2"), ["view 2d2"]);
        assert!(kinds("# plain comment").is_empty());
    }

    #[test]
    fn illegal_character_reports_position() {
        let err = tokenize("a@b", 3).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.col, 2);
    }

    #[test]
    fn spans_reconstruct_the_source() {
        let src = "f(x) = m x  # note";
        let toks = tokenize(src, 1).unwrap();
        for t in &toks {
            assert_eq!(&src[t.span.0..t.span.1], t.lexeme);
        }
    }
}
