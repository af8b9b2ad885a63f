//! MiniZinc data files.
//!
//! The emitted dialect is one declaration per line, LF terminated, in the
//! order `mode, m, n, max_l, max_s, C, M`:
//!
//! ```text
//! mode = 2;
//! m = 2;
//! n = 3;
//! max_l = 6;
//! max_s = 6;
//! C = [50, 75];
//! M = [| 10, 0, 5 | 2, 2, 2 |];
//! ```
//!
//! The parser accepts the same declarations in any order, with arbitrary
//! whitespace and `%` line comments. Unknown declarations are skipped. Rows
//! of `M` may also be separated by `;`.

use std::fmt::Write as _;

use misro_core::{Instance, Mode, MAX_LEVEL};

/// Identifiers used for each declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DznNames {
    pub mode: String,
    pub m: String,
    pub n: String,
    pub max_l: String,
    pub max_s: String,
    pub c: String,
    pub matrix: String,
}

impl Default for DznNames {
    fn default() -> Self {
        DznNames {
            mode: "mode".into(),
            m: "m".into(),
            n: "n".into(),
            max_l: "max_l".into(),
            max_s: "max_s".into(),
            c: "C".into(),
            matrix: "M".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DznError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("missing declaration `{0}`")]
    Missing(String),
    #[error("{line}:{col}: `{name}` declared twice")]
    Duplicate { name: String, line: usize, col: usize },
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },
    #[error("{what} = {value} is out of range")]
    Range { what: String, value: i64 },
    #[error("`{name}` = {value} is not supported (only 6 levels)")]
    Unsupported { name: String, value: i64 },
}

impl DznError {
    pub fn kind(&self) -> &'static str {
        match self {
            DznError::Syntax { .. } | DznError::Duplicate { .. } => "syntax",
            DznError::Missing(_) => "missing",
            DznError::DimensionMismatch { .. } => "dimension",
            DznError::Range { .. } => "range",
            DznError::Unsupported { .. } => "unsupported",
        }
    }
}

pub fn emit_dzn(inst: &Instance) -> String {
    emit_dzn_with(inst, &DznNames::default())
}

pub fn emit_dzn_with(inst: &Instance, names: &DznNames) -> String {
    let join = |row: &[u32]| row.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    writeln!(out, "{} = {};", names.mode, inst.mode.code()).unwrap();
    writeln!(out, "{} = {};", names.m, inst.m).unwrap();
    writeln!(out, "{} = {};", names.n, inst.n).unwrap();
    writeln!(out, "{} = {MAX_LEVEL};", names.max_l).unwrap();
    writeln!(out, "{} = {MAX_LEVEL};", names.max_s).unwrap();
    writeln!(out, "{} = [{}];", names.c, join(&inst.c)).unwrap();
    let rows: Vec<String> = inst.matrix.iter().map(|r| join(r)).collect();
    writeln!(out, "{} = [| {} |];", names.matrix, rows.join(" | ")).unwrap();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Eq,
    Semi,
    Comma,
    Bar,
    Open,
    Close,
    OpenBar,
    BarClose,
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> DznError {
    DznError::Syntax { line: pos.line, col: pos.col, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DznError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut width = 1;
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '=' => toks.push((Tok::Eq, pos)),
            ';' => toks.push((Tok::Semi, pos)),
            ',' => toks.push((Tok::Comma, pos)),
            ']' => toks.push((Tok::Close, pos)),
            '[' if chars.get(i + 1) == Some(&'|') => {
                toks.push((Tok::OpenBar, pos));
                width = 2;
            }
            '[' => toks.push((Tok::Open, pos)),
            '|' if chars.get(i + 1) == Some(&']') => {
                toks.push((Tok::BarClose, pos));
                width = 2;
            }
            '|' => toks.push((Tok::Bar, pos)),
            '-' | '0'..='9' => {
                let start = i;
                if c == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let value = lit.parse().map_err(|_| syntax(pos, format!("bad integer `{lit}`")))?;
                toks.push((Tok::Int(value), pos));
                col += i - start;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                col += i - start;
                continue;
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        }
        i += width;
        col += width;
    }
    Ok(toks)
}

#[derive(Debug)]
enum Value {
    Int(i64),
    List(Vec<i64>),
    Rows(Vec<Vec<i64>>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn next(&mut self, what: &str) -> Result<(Tok, Pos), DznError> {
        let tok = self
            .toks
            .get(self.at)
            .cloned()
            .ok_or_else(|| syntax(self.end, format!("expected {what}, found end of input")))?;
        self.at += 1;
        Ok(tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), DznError> {
        let (tok, pos) = self.next(what)?;
        if tok == want {
            Ok(())
        } else {
            Err(syntax(pos, format!("expected {what}")))
        }
    }

    fn int(&mut self) -> Result<i64, DznError> {
        match self.next("integer")? {
            (Tok::Int(v), _) => Ok(v),
            (_, pos) => Err(syntax(pos, "expected integer")),
        }
    }

    fn value(&mut self) -> Result<Value, DznError> {
        let (tok, pos) = self.next("value")?;
        match tok {
            Tok::Int(v) => Ok(Value::Int(v)),
            Tok::Open => {
                let mut items = Vec::new();
                if self.peek() == Some(&Tok::Close) {
                    self.at += 1;
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.int()?);
                    match self.next("`,` or `]`")? {
                        (Tok::Comma, _) if self.peek() == Some(&Tok::Close) => {
                            self.at += 1;
                            break;
                        }
                        (Tok::Comma, _) => {}
                        (Tok::Close, _) => break,
                        (_, pos) => return Err(syntax(pos, "expected `,` or `]`")),
                    }
                }
                Ok(Value::List(items))
            }
            Tok::OpenBar => {
                let mut rows = Vec::new();
                if self.peek() == Some(&Tok::BarClose) {
                    self.at += 1;
                    return Ok(Value::Rows(rows));
                }
                let mut row = Vec::new();
                loop {
                    row.push(self.int()?);
                    let (sep, pos) = self.next("`,`, `|` or `|]`")?;
                    let sep = match sep {
                        Tok::Comma if matches!(self.peek(), Some(Tok::Bar | Tok::Semi | Tok::BarClose)) => {
                            self.next("`|`")?.0
                        }
                        other => other,
                    };
                    match sep {
                        Tok::Comma => {}
                        Tok::Bar | Tok::Semi => rows.push(std::mem::take(&mut row)),
                        Tok::BarClose => {
                            rows.push(row);
                            break;
                        }
                        _ => return Err(syntax(pos, "expected `,`, `|` or `|]`")),
                    }
                }
                Ok(Value::Rows(rows))
            }
            _ => Err(syntax(pos, "expected a value")),
        }
    }
}

fn scalar(decls: &[(String, Value, Pos)], name: &str) -> Result<Option<(i64, Pos)>, DznError> {
    match decls.iter().find(|(n, ..)| n == name) {
        None => Ok(None),
        Some((_, Value::Int(v), pos)) => Ok(Some((*v, *pos))),
        Some((_, _, pos)) => Err(syntax(*pos, format!("`{name}` must be an integer"))),
    }
}

fn count(value: i64, name: &str) -> Result<usize, DznError> {
    usize::try_from(value).ok().filter(|&v| v >= 1).ok_or_else(|| DznError::Range { what: name.to_string(), value })
}

fn entry(value: i64, max: u32, what: impl FnOnce() -> String) -> Result<u32, DznError> {
    u32::try_from(value).ok().filter(|&v| v <= max).ok_or_else(|| DznError::Range { what: what(), value })
}

/// Parses a data file in the [`emit_dzn`] dialect. The instance is named
/// `name`.
pub fn parse_dzn(text: &str, name: &str) -> Result<Instance, DznError> {
    parse_dzn_with(text, name, &DznNames::default())
}

pub fn parse_dzn_with(text: &str, name: &str, names: &DznNames) -> Result<Instance, DznError> {
    let toks = lex(text)?;
    let end = toks.last().map_or(Pos { line: 1, col: 1 }, |(_, p)| Pos { line: p.line, col: p.col + 1 });
    let mut p = Parser { toks, at: 0, end };
    let mut decls: Vec<(String, Value, Pos)> = Vec::new();
    while p.peek().is_some() {
        let pos = p.pos();
        let ident = match p.next("identifier")? {
            (Tok::Ident(s), _) => s,
            (_, pos) => return Err(syntax(pos, "expected identifier")),
        };
        p.expect(Tok::Eq, "`=`")?;
        let value = p.value()?;
        p.expect(Tok::Semi, "`;`")?;
        if decls.iter().any(|(n, ..)| *n == ident) {
            return Err(DznError::Duplicate { name: ident, line: pos.line, col: pos.col });
        }
        decls.push((ident, value, pos));
    }

    let require = |n: &str| -> Result<(i64, Pos), DznError> {
        scalar(&decls, n)?.ok_or_else(|| DznError::Missing(n.to_string()))
    };
    let (code, _) = require(&names.mode)?;
    let mode = u8::try_from(code)
        .ok()
        .and_then(Mode::from_code)
        .ok_or_else(|| DznError::Range { what: names.mode.clone(), value: code })?;
    let m = count(require(&names.m)?.0, &names.m)?;
    let n = count(require(&names.n)?.0, &names.n)?;
    for key in [&names.max_l, &names.max_s] {
        if let Some((v, _)) = scalar(&decls, key)? {
            if v != MAX_LEVEL as i64 {
                return Err(DznError::Unsupported { name: key.clone(), value: v });
            }
        }
    }

    let lookup = |key: &str| decls.iter().find(|(n, ..)| n == key).ok_or_else(|| DznError::Missing(key.to_string()));
    let c = match lookup(&names.c)? {
        (_, Value::List(items), _) => items,
        (_, _, pos) => return Err(syntax(*pos, format!("`{}` must be a 1-D array", names.c))),
    };
    if c.len() != m {
        return Err(DznError::DimensionMismatch {
            what: format!("length of `{}`", names.c),
            expected: m,
            found: c.len(),
        });
    }
    let c = c
        .iter()
        .enumerate()
        .map(|(i, &v)| entry(v, 99, || format!("{}[{}]", names.c, i + 1)))
        .collect::<Result<Vec<_>, _>>()?;

    let rows = match lookup(&names.matrix)? {
        (_, Value::Rows(rows), _) => rows,
        (_, _, pos) => return Err(syntax(*pos, format!("`{}` must be a 2-D array `[| .. |]`", names.matrix))),
    };
    if rows.len() != m {
        return Err(DznError::DimensionMismatch {
            what: format!("rows of `{}`", names.matrix),
            expected: m,
            found: rows.len(),
        });
    }
    let mut matrix = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(DznError::DimensionMismatch {
                what: format!("columns in row {} of `{}`", i + 1, names.matrix),
                expected: n,
                found: row.len(),
            });
        }
        let row = row
            .iter()
            .enumerate()
            .map(|(j, &v)| entry(v, 10, || format!("{}[{},{}]", names.matrix, i + 1, j + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    // Every invariant was checked above, so construction cannot fail.
    Ok(Instance::new(name, mode, matrix, c).expect("validated above"))
}
