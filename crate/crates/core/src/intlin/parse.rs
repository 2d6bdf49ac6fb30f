//! Matrix text formats.
//!
//! Two spellings are accepted:
//!
//! * rows separated by `;`, entries by `,`, optionally wrapped in one pair of
//!   brackets: `2,-1;0,3` or `[2,-1; 0,3]`;
//! * a JSON array of rows: `[[2,-1],[0,3]]`.
//!
//! Whitespace (including newlines) is ignored everywhere.

use std::str::FromStr;

use num_bigint::BigInt;

use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Comma,
    Semi,
    Open,
    Close,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(s: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 0;
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        column += 1;
        let (l, col) = (line, column);
        let tok = match c {
            '\n' => {
                line += 1;
                column = 0;
                continue;
            }
            c if c.is_whitespace() => continue,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '[' => Tok::Open,
            ']' => Tok::Close,
            '-' | '+' | '0'..='9' => {
                let mut text = String::new();
                text.push(c);
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                let v = text
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(l, col, format!("invalid integer `{text}`")))?;
                Tok::Int(v)
            }
            other => return Err(Error::parse(l, col, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::parse(l, c, msg)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn row(&mut self) -> Result<Vec<BigInt>> {
        let mut row = vec![self.int()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            row.push(self.int()?);
        }
        Ok(row)
    }

    fn text_form(&mut self) -> Result<Vec<Vec<BigInt>>> {
        let bracketed = self.peek() == Some(&Tok::Open);
        if bracketed {
            self.pos += 1;
        }
        let mut rows = vec![self.row()?];
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            rows.push(self.row()?);
        }
        if bracketed {
            self.expect(Tok::Close, "`]`")?;
        }
        Ok(rows)
    }

    fn json_form(&mut self) -> Result<Vec<Vec<BigInt>>> {
        self.expect(Tok::Open, "`[`")?;
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::Open, "`[`")?;
            rows.push(self.row()?);
            self.expect(Tok::Close, "`]`")?;
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::Close, "`]`")?;
        Ok(rows)
    }
}

fn check_rows(rows: &[Vec<BigInt>], toks: &[Spanned]) -> Result<()> {
    let width = rows[0].len();
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        let (l, c) = toks.first().map_or((1, 1), |t| (t.line, t.column));
        return Err(Error::parse(
            l,
            c,
            format!(
                "row {} has {} entries, expected {}",
                bad + 1,
                rows[bad].len(),
                width
            ),
        ));
    }
    Ok(())
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        let last_line = s.lines().count().max(1);
        let last_col = s.lines().last().map_or(0, |l| l.chars().count()) + 1;
        let mut p = Parser {
            toks,
            pos: 0,
            end: (last_line, last_col),
        };
        if p.toks.is_empty() {
            return Err(Error::parse(1, 1, "empty matrix"));
        }
        let json = matches!(
            (p.toks.first(), p.toks.get(1)),
            (Some(a), Some(b)) if a.tok == Tok::Open && b.tok == Tok::Open
        );
        let rows = if json { p.json_form()? } else { p.text_form()? };
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        check_rows(&rows, &p.toks)?;
        IntMatrix::from_big_rows(rows)
    }
}
