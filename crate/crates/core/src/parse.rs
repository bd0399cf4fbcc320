//! Text formats: the fault-tree DSL, trajectory CSV, and the canonical
//! serializer.
//!
//! Grammar (one statement per `basic`/`gate`/`top` keyword, `#` comments to
//! end of line, `|` binds looser than `&`):
//!
//! ```text
//! file  := stmt*
//! stmt  := basic | gate | top
//! basic := "basic" ID ("p=" FLOAT)? ("kind=" ("nonrepairable" | "repairable"))?
//! gate  := "gate" ID "=" expr
//! top   := "top" ID ("," ID)*
//! expr  := term ("|" term)*
//! term  := factor ("&" factor)*
//! factor:= ID | "(" expr ")" | "koon(" INT "," ID ("," ID)* ")"
//! ```
//!
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*`, case-sensitive; `basic`, `gate`,
//! `top` and `koon` are reserved words. Every error carries a line and
//! column.
//!
//! Trajectory files are CSV lines `time,basic_id,value` with nondecreasing
//! times and values in {0,1}; ties keep file order.

use thiserror::Error;

use crate::model::{BasicEventDef, EventKind, Expr, FaultTree, GateDef, ModelError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("line {line}: time {time} decreases below {prev}")]
    NonMonotoneTime { line: u32, time: f64, prev: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: u32, col: u32, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, msg: msg.into() }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    KwBasic,
    KwGate,
    KwTop,
    KwKoon,
    Eq,
    Pipe,
    Amp,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(id) => format!("identifier `{id}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::KwBasic => "`basic`".into(),
            Tok::KwGate => "`gate`".into(),
            Tok::KwTop => "`top`".into(),
            Tok::KwKoon => "`koon`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut toks = Vec::new();
    let mut cur = Cursor { chars: text.chars().collect(), pos: 0, line: 1, col: 1 };

    while let Some(c) = cur.peek() {
        let (tl, tc) = (cur.line, cur.col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                cur.bump();
            }
            '#' => {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            }
            '=' | '|' | '&' | '(' | ')' | ',' => {
                let tok = match cur.bump() {
                    '=' => Tok::Eq,
                    '|' => Tok::Pipe,
                    '&' => Tok::Amp,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                toks.push(Spanned { tok, line: tl, col: tc });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut id = String::new();
                while let Some(c) = cur.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        id.push(cur.bump());
                    } else {
                        break;
                    }
                }
                let tok = match id.as_str() {
                    "basic" => Tok::KwBasic,
                    "gate" => Tok::KwGate,
                    "top" => Tok::KwTop,
                    "koon" => Tok::KwKoon,
                    _ => Tok::Ident(id),
                };
                toks.push(Spanned { tok, line: tl, col: tc });
            }
            c if c.is_ascii_digit() => {
                let mut num = String::new();
                while let Some(c) = cur.peek() {
                    if c.is_ascii_digit() {
                        num.push(cur.bump());
                    } else {
                        break;
                    }
                }
                if cur.peek() == Some('.') {
                    num.push(cur.bump());
                    while let Some(c) = cur.peek() {
                        if c.is_ascii_digit() {
                            num.push(cur.bump());
                        } else {
                            break;
                        }
                    }
                }
                if matches!(cur.peek(), Some('e') | Some('E')) {
                    num.push(cur.bump());
                    if matches!(cur.peek(), Some('+') | Some('-')) {
                        num.push(cur.bump());
                    }
                    let mut digits = false;
                    while let Some(c) = cur.peek() {
                        if c.is_ascii_digit() {
                            num.push(cur.bump());
                            digits = true;
                        } else {
                            break;
                        }
                    }
                    if !digits {
                        return Err(syntax(tl, tc, format!("malformed number `{num}`")));
                    }
                }
                toks.push(Spanned { tok: Tok::Number(num), line: tl, col: tc });
            }
            other => {
                return Err(syntax(tl, tc, format!("unexpected character `{other}`")));
            }
        }
    }
    toks.push(Spanned { tok: Tok::Eof, line: cur.line, col: cur.col });
    Ok(toks)
}

// ---------------------------------------------------------------------------
// DSL parser

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (u32, u32) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let (line, col) = self.here();
        syntax(line, col, format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect_ident(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(_) => match self.advance() {
                Tok::Ident(id) => Ok(id),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        while *self.peek() == Tok::Pipe {
            self.advance();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Or(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Amp {
            self.advance();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::And(factors) })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Ident(_) => Ok(Expr::Ref(self.expect_ident("identifier")?)),
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::KwKoon => {
                self.advance();
                self.expect(Tok::LParen)?;
                let (line, col) = self.here();
                let k = match self.peek() {
                    Tok::Number(n) if n.bytes().all(|b| b.is_ascii_digit()) => {
                        let k: usize = n
                            .parse()
                            .map_err(|_| syntax(line, col, format!("bad threshold `{n}`")))?;
                        self.advance();
                        k
                    }
                    _ => return Err(self.unexpected("integer threshold")),
                };
                let mut inputs = Vec::new();
                self.expect(Tok::Comma)?;
                inputs.push(self.expect_ident("identifier")?);
                while *self.peek() == Tok::Comma {
                    self.advance();
                    inputs.push(self.expect_ident("identifier")?);
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::KooN { k, inputs })
            }
            _ => Err(self.unexpected("identifier, `(` or `koon(`")),
        }
    }

    fn float(&mut self) -> Result<f64, ParseError> {
        let (line, col) = self.here();
        match self.peek() {
            Tok::Number(_) => match self.advance() {
                Tok::Number(n) => n
                    .parse::<f64>()
                    .map_err(|_| syntax(line, col, format!("bad number `{n}`"))),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("number")),
        }
    }
}

/// Parses the DSL and validates the result through [`FaultTree::new`].
pub fn parse_tree(text: &str) -> Result<FaultTree, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut basics: Vec<BasicEventDef> = Vec::new();
    let mut gates: Vec<GateDef> = Vec::new();
    let mut tops: Vec<String> = Vec::new();

    loop {
        match p.peek() {
            Tok::Eof => break,
            Tok::KwBasic => {
                p.advance();
                let id = p.expect_ident("basic event name")?;
                let mut def = BasicEventDef::nonrepairable(id);
                if matches!(p.peek(), Tok::Ident(w) if w == "p") && *p.peek2() == Tok::Eq {
                    p.advance();
                    p.advance();
                    def.prob = Some(p.float()?);
                }
                if matches!(p.peek(), Tok::Ident(w) if w == "kind") && *p.peek2() == Tok::Eq {
                    p.advance();
                    p.advance();
                    let (line, col) = p.here();
                    let kind = p.expect_ident("`nonrepairable` or `repairable`")?;
                    def.kind = match kind.as_str() {
                        "nonrepairable" => EventKind::NonRepairable,
                        "repairable" => EventKind::Repairable,
                        other => {
                            return Err(syntax(line, col, format!("unknown kind `{other}`")));
                        }
                    };
                }
                basics.push(def);
            }
            Tok::KwGate => {
                p.advance();
                let id = p.expect_ident("gate name")?;
                p.expect(Tok::Eq)?;
                let body = p.expr()?;
                gates.push(GateDef::new(id, body));
            }
            Tok::KwTop => {
                p.advance();
                tops.push(p.expect_ident("gate name")?);
                while *p.peek() == Tok::Comma {
                    p.advance();
                    tops.push(p.expect_ident("gate name")?);
                }
            }
            _ => return Err(p.unexpected("`basic`, `gate` or `top`")),
        }
    }

    Ok(FaultTree::new(basics, gates, tops)?)
}

/// Canonical serialization: basics, then gates in declaration order with
/// fully parenthesized bodies, then a single `top` statement. Parsing the
/// output reproduces the tree.
pub fn serialize(tree: &FaultTree) -> String {
    let mut out = String::new();
    for b in tree.basics() {
        out.push_str("basic ");
        out.push_str(&b.id);
        if let Some(p) = b.prob {
            out.push_str(&format!(" p={p}"));
        }
        if b.kind == EventKind::Repairable {
            out.push_str(" kind=repairable");
        }
        out.push('\n');
    }
    for g in tree.gates() {
        out.push_str(&format!("gate {} = {}\n", g.id, g.body));
    }
    out.push_str("top ");
    out.push_str(&tree.tops().join(", "));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Trajectories

/// One timestamped basic-event state change.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEvent {
    pub time: f64,
    pub basic_id: String,
    pub value: bool,
}

/// Time-ordered basic-event state changes; ties keep file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub events: Vec<TrajectoryEvent>,
}

/// Parses CSV lines `time,basic_id,value` with `value` in {0,1}. Blank
/// lines are ignored. Times must be nondecreasing.
pub fn parse_trajectory(text: &str) -> Result<Trajectory, ParseError> {
    let mut events = Vec::new();
    let mut prev_time: Option<f64> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = (i + 1) as u32;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(syntax(lineno, 1, format!("expected `time,basic_id,value`, found `{raw}`")));
        }
        let time: f64 = fields[0]
            .parse()
            .map_err(|_| syntax(lineno, 1, format!("bad time `{}`", fields[0])))?;
        if !time.is_finite() || time < 0.0 {
            return Err(syntax(lineno, 1, format!("time must be a nonnegative real, found `{time}`")));
        }
        if fields[1].is_empty() {
            return Err(syntax(lineno, 1, "empty basic event id".to_string()));
        }
        let value = match fields[2] {
            "0" => false,
            "1" => true,
            other => {
                return Err(syntax(lineno, 1, format!("value must be 0 or 1, found `{other}`")));
            }
        };
        if let Some(prev) = prev_time {
            if time < prev {
                return Err(ParseError::NonMonotoneTime { line: lineno, time, prev });
            }
        }
        prev_time = Some(time);
        events.push(TrajectoryEvent { time, basic_id: fields[1].to_string(), value });
    }
    Ok(Trajectory { events })
}
