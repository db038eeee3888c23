use super::ast::Span;
use super::error::{ScriptError, ScriptErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    Dot,
    Comma,
    Colon,
    ColonEq,
    LParen,
    RParen,
    LBrace,
    RBrace,
    FatArrow,
    Arrow,
    BackArrow,
    Iff,
    And,
    Or,
    Tilde,
    Eq,
    Underscore,
    /// `-`, `+` or `*` at the start of a tactic.
    Bullet(char),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<Token>, ScriptError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |start: usize, msg: String| {
        Err(ScriptError::new(
            ScriptErrorKind::Syntax(msg),
            Span::new(start, start + 1),
            text,
        ))
    };
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if text[i..].starts_with("(*") {
            let mut depth = 0usize;
            while i < bytes.len() {
                if text[i..].starts_with("(*") {
                    depth += 1;
                    i += 2;
                } else if text[i..].starts_with("*)") {
                    depth -= 1;
                    i += 2;
                    if depth == 0 {
                        break;
                    }
                } else {
                    i += text[i..].chars().next().unwrap().len_utf8();
                }
            }
            if depth != 0 {
                return err(start, "unterminated comment".into());
            }
            continue;
        }
        if text[i..].starts_with("//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if is_ident_start(c) {
            while i < bytes.len() && is_ident_char(bytes[i] as char) {
                i += 1;
            }
            let word = &text[start..i];
            let tok = if word == "_" {
                Tok::Underscore
            } else {
                Tok::Ident(word.to_string())
            };
            out.push(Token {
                tok,
                span: Span::new(start, i),
            });
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: u32 = match text[start..i].parse() {
                Ok(n) => n,
                Err(_) => return err(start, "number too large".into()),
            };
            out.push(Token {
                tok: Tok::Num(n),
                span: Span::new(start, i),
            });
            continue;
        }
        let two = text.get(i..i + 2).unwrap_or("");
        let three = text.get(i..i + 3).unwrap_or("");
        let (tok, len) = if three == "<->" {
            (Tok::Iff, 3)
        } else {
            match two {
                ":=" => (Tok::ColonEq, 2),
                "=>" => (Tok::FatArrow, 2),
                "->" => (Tok::Arrow, 2),
                "<-" => (Tok::BackArrow, 2),
                "/\\" => (Tok::And, 2),
                "\\/" => (Tok::Or, 2),
                _ => match c {
                    '.' => (Tok::Dot, 1),
                    ',' => (Tok::Comma, 1),
                    ':' => (Tok::Colon, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    '~' => (Tok::Tilde, 1),
                    '=' => (Tok::Eq, 1),
                    '-' | '+' | '*' => (Tok::Bullet(c), 1),
                    _ => return err(start, format!("unexpected character `{}`", c)),
                },
            }
        };
        i += len;
        out.push(Token {
            tok,
            span: Span::new(start, i),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn connectives_and_comments() {
        assert_eq!(
            toks("A /\\ B \\/ ~C -> D <-> E (* note (* nested *) *) // tail\n= x"),
            vec![
                Tok::Ident("A".into()),
                Tok::And,
                Tok::Ident("B".into()),
                Tok::Or,
                Tok::Tilde,
                Tok::Ident("C".into()),
                Tok::Arrow,
                Tok::Ident("D".into()),
                Tok::Iff,
                Tok::Ident("E".into()),
                Tok::Eq,
                Tok::Ident("x".into()),
            ]
        );
    }

    #[test]
    fn spans_are_byte_offsets() {
        let ts = lex("let  x.").unwrap();
        assert_eq!(ts[1].span, Span::new(5, 6));
        assert_eq!(ts[2].span, Span::new(6, 7));
    }

    #[test]
    fn unterminated_comment_is_an_error() {
        assert!(lex("(* open").is_err());
    }
}
