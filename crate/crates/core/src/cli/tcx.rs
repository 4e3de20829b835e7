//! The `.tcx` problem format.
//!
//! ```text
//! # boundary of a square
//! m = 4
//! faces = {1 2} {2 3} {3 4} {1 4}
//! B = [1 0 -2 0 ;
//!      0 2 0 -1]
//! form u3 = x2 + x3 - x4
//! ```
//!
//! Statements are line-oriented; only the `B` matrix may continue over
//! several lines. `#` starts a comment. Each key may appear once, and each
//! form name once.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;
use crate::simplicial::{SimplicialComplex, SubgroupData};
use crate::stanley_reisner::{parse_polynomial, LinearForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub max_degree: u32,
    pub rational: bool,
    /// 1-based row of `B` split off by `gysin`.
    pub split: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_degree: 12,
            rational: false,
            split: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub complex: SimplicialComplex,
    pub b: Option<SubgroupData>,
    pub forms: Vec<(String, LinearForm)>,
    pub options: Options,
}

impl ProblemSpec {
    pub fn form(&self, name: &str) -> Option<&LinearForm> {
        self.forms.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// The `.tcx` text of this problem; options are not part of the file.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "m = {}", self.complex.vertex_count());
        let faces: Vec<String> = self
            .complex
            .maximal_faces()
            .iter()
            .map(|f| f.to_string())
            .collect();
        if faces.is_empty() {
            let _ = writeln!(out, "faces =");
        } else {
            let _ = writeln!(out, "faces = {}", faces.join(" "));
        }
        if let Some(b) = &self.b {
            let _ = writeln!(out, "B = {}", b.matrix());
        }
        for (name, f) in &self.forms {
            let _ = writeln!(out, "form {name} = {f}");
        }
        out
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

fn err_at(p: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: p.line,
        column: p.col,
        message: message.into(),
    }
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn here(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_comment(&mut self) {
        if self.peek() == Some('#') {
            while !matches!(self.peek(), None | Some('\n')) {
                self.bump();
            }
        }
    }

    /// Spaces, tabs and comments, but not newlines.
    fn skip_inline(&mut self) {
        loop {
            match self.peek() {
                Some(' ' | '\t' | '\r') => {
                    self.bump();
                }
                Some('#') => self.skip_comment(),
                _ => return,
            }
        }
    }

    fn skip_all(&mut self) {
        loop {
            self.skip_inline();
            if self.peek() == Some('\n') {
                self.bump();
            } else {
                return;
            }
        }
    }

    fn end_of_statement(&mut self) -> Result<()> {
        self.skip_inline();
        match self.peek() {
            None => Ok(()),
            Some('\n') => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(err_at(
                self.here(),
                format!("unexpected `{c}` after statement"),
            )),
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_inline();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some('\n') | None => Err(err_at(
                self.here(),
                format!("expected `{want}` before end of line"),
            )),
            Some(c) => Err(err_at(
                self.here(),
                format!("expected `{want}`, found `{c}`"),
            )),
        }
    }

    fn ident(&mut self) -> Result<(Pos, String)> {
        self.skip_inline();
        let start = self.here();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() || !s.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(err_at(start, "expected a name"));
        }
        Ok((start, s))
    }

    /// An optionally signed integer.
    fn integer(&mut self) -> Result<(Pos, BigInt)> {
        self.skip_inline();
        let start = self.here();
        let mut s = String::new();
        if matches!(self.peek(), Some('-' | '+')) {
            s.push(self.bump().unwrap());
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s.parse()
            .map(|v| (start, v))
            .map_err(|_| err_at(start, "expected an integer"))
    }

    fn rest_of_line(&mut self) -> (Pos, String) {
        self.skip_inline();
        let start = self.here();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c == '\n' || c == '#' {
                break;
            }
            s.push(c);
            self.bump();
        }
        (start, s.trim_end().to_string())
    }
}

struct RawFaces {
    faces: Vec<Vec<(Pos, BigInt)>>,
}

struct RawMatrix {
    start: Pos,
    rows: Vec<(Pos, Vec<BigInt>)>,
}

fn parse_faces(c: &mut Cursor) -> Result<RawFaces> {
    let mut faces = Vec::new();
    loop {
        c.skip_inline();
        match c.peek() {
            None | Some('\n') => break,
            Some('{') => {
                c.bump();
                let mut face = Vec::new();
                loop {
                    c.skip_inline();
                    match c.peek() {
                        Some('}') => {
                            c.bump();
                            break;
                        }
                        Some(d) if d.is_ascii_digit() => face.push(c.integer()?),
                        Some('\n') | None => {
                            return Err(err_at(c.here(), "unterminated face: expected `}`"))
                        }
                        Some(other) => {
                            return Err(err_at(
                                c.here(),
                                format!("unexpected `{other}` inside a face"),
                            ))
                        }
                    }
                }
                faces.push(face);
            }
            Some(other) => return Err(err_at(c.here(), format!("expected `{{`, found `{other}`"))),
        }
    }
    Ok(RawFaces { faces })
}

fn parse_matrix(c: &mut Cursor) -> Result<RawMatrix> {
    c.skip_inline();
    let start = c.here();
    c.expect('[')?;
    let mut rows: Vec<(Pos, Vec<BigInt>)> = Vec::new();
    let mut row: Vec<BigInt> = Vec::new();
    let mut row_start = c.here();
    loop {
        c.skip_all();
        match c.peek() {
            Some(']') => {
                c.bump();
                if !row.is_empty() || !rows.is_empty() {
                    rows.push((row_start, std::mem::take(&mut row)));
                }
                break;
            }
            Some(';') => {
                c.bump();
                rows.push((row_start, std::mem::take(&mut row)));
                c.skip_all();
                row_start = c.here();
            }
            Some(d) if d.is_ascii_digit() || d == '-' || d == '+' => {
                if row.is_empty() {
                    row_start = c.here();
                }
                row.push(c.integer()?.1);
            }
            None => return Err(err_at(c.here(), "unterminated matrix: expected `]`")),
            Some(other) => return Err(err_at(c.here(), format!("unexpected `{other}` in matrix"))),
        }
    }
    Ok(RawMatrix { start, rows })
}

/// Parses a `.tcx` document. Options are left at their defaults.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let mut c = Cursor::new(text);
    let mut m: Option<(Pos, usize)> = None;
    let mut faces: Option<(Pos, RawFaces)> = None;
    let mut b: Option<RawMatrix> = None;
    let mut forms: Vec<(Pos, String, Pos, String)> = Vec::new();
    loop {
        c.skip_all();
        if c.peek().is_none() {
            break;
        }
        let (key_pos, key) = c.ident()?;
        let duplicate = |seen: bool| -> Result<()> {
            if seen {
                Err(err_at(key_pos, format!("duplicate key `{key}`")))
            } else {
                Ok(())
            }
        };
        match key.as_str() {
            "m" => {
                duplicate(m.is_some())?;
                c.expect('=')?;
                let (p, v) = c.integer()?;
                let v = usize::try_from(&v)
                    .map_err(|_| err_at(p, "m must be a nonnegative integer"))?;
                m = Some((p, v));
            }
            "faces" => {
                duplicate(faces.is_some())?;
                c.expect('=')?;
                faces = Some((key_pos, parse_faces(&mut c)?));
            }
            "B" => {
                duplicate(b.is_some())?;
                c.expect('=')?;
                b = Some(parse_matrix(&mut c)?);
            }
            "form" => {
                let (name_pos, name) = c.ident()?;
                if forms.iter().any(|f| f.1 == name) {
                    return Err(err_at(name_pos, format!("duplicate form `{name}`")));
                }
                c.expect('=')?;
                let (expr_pos, expr) = c.rest_of_line();
                if expr.is_empty() {
                    return Err(err_at(expr_pos, "expected a linear expression"));
                }
                forms.push((name_pos, name, expr_pos, expr));
            }
            other => return Err(err_at(key_pos, format!("unknown key `{other}`"))),
        }
        c.end_of_statement()?;
    }

    let Some((_, m)) = m else {
        return Err(err_at(c.here(), "missing `m = ...`"));
    };
    let Some((_, raw_faces)) = faces else {
        return Err(err_at(c.here(), "missing `faces = ...`"));
    };
    let mut face_lists = Vec::with_capacity(raw_faces.faces.len());
    for face in &raw_faces.faces {
        let mut vs = Vec::with_capacity(face.len());
        for (p, v) in face {
            let v = usize::try_from(v)
                .ok()
                .filter(|v| (1..=m).contains(v))
                .ok_or_else(|| err_at(*p, format!("vertex {v} out of range 1..={m}")))?;
            vs.push(v);
        }
        face_lists.push(vs);
    }
    let complex = SimplicialComplex::new(m, &face_lists)?;

    let b = match b {
        None => None,
        Some(raw) => {
            for (p, row) in &raw.rows {
                if row.len() != m {
                    return Err(err_at(
                        *p,
                        format!("row has {} entries but m = {m}", row.len()),
                    ));
                }
            }
            let mat = if raw.rows.is_empty() {
                IntMatrix::zeros(0, m)
            } else {
                IntMatrix::from_rows(raw.rows.into_iter().map(|(_, r)| r))?
            };
            Some(SubgroupData::new(mat).map_err(|e| match e {
                Error::InvalidInput(msg) => err_at(raw.start, msg),
                other => other,
            })?)
        }
    };

    let forms = forms
        .into_iter()
        .map(|(_, name, expr_pos, expr)| {
            let poly = parse_polynomial(&expr, m).map_err(|e| match e {
                Error::Parse {
                    column, message, ..
                } => err_at(
                    Pos {
                        line: expr_pos.line,
                        col: expr_pos.col + column - 1,
                    },
                    message,
                ),
                other => other,
            })?;
            let form = LinearForm::from_polynomial(&poly, m).map_err(|e| match e {
                Error::InvalidInput(msg) => err_at(expr_pos, msg),
                other => other,
            })?;
            Ok((name, form))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ProblemSpec {
        complex,
        b,
        forms,
        options: Options::default(),
    })
}
