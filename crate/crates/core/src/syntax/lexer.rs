use crate::error::{Error, Result};
use crate::syntax::ast::CmpOp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lower-case identifier (predicate, constant, functor, or `not`).
    Ident(String),
    /// Capitalised identifier.
    Var(String),
    Int(i64),
    /// `#name`
    Directive(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    DotDot,
    If,
    WeakIf,
    At,
    Tilde,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Directive(d) => format!("`#{d}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::If => "`:-`".into(),
            Tok::WeakIf => "`:~`".into(),
            Tok::At => "`@`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Cmp(op) => format!("`{}`", op.symbol()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let err = |line, column, message: String| Error::Syntax {
        line,
        column,
        message,
    };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '@' => Some(Tok::At),
            '~' => Some(Tok::Tilde),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            advance(1, &mut i, &mut col);
            continue;
        }
        let two: Option<(Tok, usize)> = match (c, next) {
            ('.', Some('.')) => Some((Tok::DotDot, 2)),
            ('.', _) => Some((Tok::Dot, 1)),
            (':', Some('-')) => Some((Tok::If, 2)),
            (':', Some('~')) => Some((Tok::WeakIf, 2)),
            ('<', Some('=')) => Some((Tok::Cmp(CmpOp::Le), 2)),
            ('>', Some('=')) => Some((Tok::Cmp(CmpOp::Ge), 2)),
            ('!', Some('=')) => Some((Tok::Cmp(CmpOp::Ne), 2)),
            ('<', _) => Some((Tok::Cmp(CmpOp::Lt), 1)),
            ('>', _) => Some((Tok::Cmp(CmpOp::Gt), 1)),
            ('=', _) => Some((Tok::Cmp(CmpOp::Eq), 1)),
            _ => None,
        };
        if let Some((tok, n)) = two {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            advance(n, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && next.is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            advance(1, &mut i, &mut col);
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i, &mut col);
            }
            let s: String = chars[start..i].iter().collect();
            let value = s
                .parse::<i64>()
                .map_err(|_| err(tl, tc, format!("integer `{s}` out of range")))?;
            out.push(Token {
                tok: Tok::Int(value),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c == '#' || c.is_ascii_alphabetic() || c == '_' {
            let start = if c == '#' { i + 1 } else { i };
            advance(1, &mut i, &mut col);
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(1, &mut i, &mut col);
            }
            let s: String = chars[start..i].iter().collect();
            let tok = if c == '#' {
                if s.is_empty() {
                    return Err(err(tl, tc, "expected directive name after `#`".into()));
                }
                Tok::Directive(s)
            } else if c.is_ascii_uppercase() {
                Tok::Var(s)
            } else if c == '_' {
                return Err(err(tl, tc, "anonymous variables are not supported".into()));
            } else {
                Tok::Ident(s)
            };
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
