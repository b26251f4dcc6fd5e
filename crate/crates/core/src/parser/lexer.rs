use crate::syntax::{Modality, Pos, Span};

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokKind {
    Ident(String),
    Num(u64),
    Label(u64),
    /// `->`
    Arrow,
    /// `-o`, `-o_0`, `-o_1`
    Lolli(Option<Modality>),
    /// `!`, `!_0`, `!_1`
    Bang(Option<Modality>),
    /// Punctuation and reserved words.
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokKind,
    pub span: Span,
    /// First token on its line; drives the layout rule.
    pub first: bool,
}

pub const KEYWORDS: &[&str] = &[
    "let", "in", "if", "then", "else", "case", "of", "box", "apply", "force", "lift", "dynlift", "circ",
];

const PUNCT: &[&str] = &["||", "(", ")", ",", "=", ":", "*", ";", "{", "}", "[", "]", "\\", "_"];

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() && c != 'ℓ' || c == '_' || c == '\''
}

pub fn describe(k: &TokKind) -> String {
    match k {
        TokKind::Ident(s) => format!("identifier `{s}`"),
        TokKind::Num(n) => format!("numeral `{n}`"),
        TokKind::Label(n) => format!("label `ℓ{n}`"),
        TokKind::Arrow => "`->`".into(),
        TokKind::Lolli(None) => "`-o`".into(),
        TokKind::Lolli(Some(m)) => format!("`-o_{m}`"),
        TokKind::Bang(None) => "`!`".into(),
        TokKind::Bang(Some(m)) => format!("`!_{m}`"),
        TokKind::Sym(s) => format!("`{s}`"),
        TokKind::Eof => "end of input".into(),
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }
}

/// Splits source text into tokens. Columns count characters, 1-based.
pub fn lex(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } };
    let mut out: Vec<Token> = Vec::new();
    let mut last_line = 0;
    let mut end = Pos { line: 1, col: 1 };
    while let Some(c) = cur.peek() {
        let start = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '-' && cur.peek2() == Some('-') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let kind = if c == '-' {
            cur.bump();
            match cur.peek() {
                Some('>') => {
                    cur.bump();
                    TokKind::Arrow
                }
                Some('o') => {
                    cur.bump();
                    TokKind::Lolli(modality_suffix(&mut cur))
                }
                _ => return Err(lex_error(start, cur.pos, "`->` or `-o`", "`-`")),
            }
        } else if c == '!' {
            cur.bump();
            TokKind::Bang(modality_suffix(&mut cur))
        } else if c == 'ℓ' {
            cur.bump();
            let digits = take_while(&mut cur, |c| c.is_ascii_digit());
            let n = digits.parse().map_err(|_| lex_error(start, cur.pos, "label index", "`ℓ`"))?;
            TokKind::Label(n)
        } else if c.is_ascii_digit() {
            let digits = take_while(&mut cur, |c| c.is_ascii_digit());
            let n = digits.parse().map_err(|_| lex_error(start, cur.pos, "numeral below 2^64", &digits))?;
            TokKind::Num(n)
        } else if c.is_alphabetic() || c == '_' {
            let word = take_while(&mut cur, is_ident_char);
            if word == "_" {
                TokKind::Sym("_")
            } else if let Some(k) = KEYWORDS.iter().find(|k| **k == word) {
                TokKind::Sym(k)
            } else {
                TokKind::Ident(word)
            }
        } else if c == '|' {
            cur.bump();
            if cur.peek() != Some('|') {
                return Err(lex_error(start, cur.pos, "`||`", "`|`"));
            }
            cur.bump();
            TokKind::Sym("||")
        } else if let Some(p) = PUNCT.iter().find(|p| p.len() == 1 && p.starts_with(c)) {
            cur.bump();
            TokKind::Sym(p)
        } else {
            cur.bump();
            return Err(lex_error(start, cur.pos, "a token", &format!("`{c}`")));
        };
        let first = start.line != last_line;
        last_line = start.line;
        end = cur.pos;
        out.push(Token { kind, span: Span::new(start, cur.pos), first });
    }
    out.push(Token { kind: TokKind::Eof, span: Span::new(end, end), first: false });
    Ok(out)
}

fn modality_suffix(cur: &mut Cursor<'_>) -> Option<Modality> {
    if cur.peek() != Some('_') {
        return None;
    }
    let m = match cur.peek2() {
        Some('0') => Modality::Zero,
        Some('1') => Modality::One,
        _ => return None,
    };
    cur.bump();
    cur.bump();
    Some(m)
}

fn take_while(cur: &mut Cursor<'_>, f: impl Fn(char) -> bool) -> String {
    let mut s = String::new();
    while let Some(c) = cur.peek() {
        if !f(c) {
            break;
        }
        s.push(c);
        cur.bump();
    }
    s
}

fn lex_error(start: Pos, end: Pos, expected: &str, found: &str) -> SyntaxError {
    SyntaxError { span: Span::new(start, end), expected: vec![expected.to_string()], found: found.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokKind> {
        lex(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn arrows_and_bangs() {
        assert_eq!(
            kinds("!_1(Qubit -o_0 Qubit) -> !"),
            vec![
                TokKind::Bang(Some(Modality::One)),
                TokKind::Sym("("),
                TokKind::Ident("Qubit".into()),
                TokKind::Lolli(Some(Modality::Zero)),
                TokKind::Ident("Qubit".into()),
                TokKind::Sym(")"),
                TokKind::Arrow,
                TokKind::Bang(None),
                TokKind::Eof,
            ]
        );
    }

    #[test]
    fn identifiers_comments_labels() {
        assert_eq!(
            kinds("a1' -- note\nℓ12 _ _p0 let"),
            vec![
                TokKind::Ident("a1'".into()),
                TokKind::Label(12),
                TokKind::Sym("_"),
                TokKind::Ident("_p0".into()),
                TokKind::Sym("let"),
                TokKind::Eof,
            ]
        );
    }

    #[test]
    fn positions_and_line_starts() {
        let toks = lex("f x =\n  y").unwrap();
        assert!(toks[0].first && !toks[1].first);
        assert_eq!(toks[3].span.start, Pos { line: 2, col: 3 });
        assert!(toks[3].first);
    }

    #[test]
    fn bad_characters() {
        assert!(lex("a # b").is_err());
        assert!(lex("a | b").is_err());
        assert!(lex("a - b").is_err());
    }
}
