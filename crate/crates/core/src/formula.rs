//! Boolean formula syntax.
//!
//! ```text
//! expr   := term (('OR' | 'XOR') term)*
//! term   := factor (('AND' | 'NAND') factor)*
//! factor := IDENT | 'NOT' factor | '(' expr ')'
//! ```
//!
//! Keywords are case-insensitive and binary operators associate to the left.
//! NOT, NAND and XOR are only accepted in dual-rail mode.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Monotone,
    DualRail,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Nand(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_owned())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn nand(a: Formula, b: Formula) -> Formula {
        Formula::Nand(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_monotone() && b.is_monotone(),
            Formula::Not(_) | Formula::Nand(..) | Formula::Xor(..) => false,
        }
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Formula::Not(a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Nand(a, b) | Formula::Xor(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn binary_ops(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(a) => a.binary_ops(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Nand(a, b) | Formula::Xor(a, b) => {
                1 + a.binary_ops() + b.binary_ops()
            }
        }
    }

    /// Direct Boolean evaluation; unassigned variables are an error.
    pub fn eval(&self, assignment: &BTreeMap<String, bool>) -> Result<bool> {
        Ok(match self {
            Formula::Var(v) => *assignment.get(v).ok_or_else(|| Error::MissingVariable(v.clone()))?,
            Formula::And(a, b) => a.eval(assignment)? & b.eval(assignment)?,
            Formula::Or(a, b) => a.eval(assignment)? | b.eval(assignment)?,
            Formula::Not(a) => !a.eval(assignment)?,
            Formula::Nand(a, b) => !(a.eval(assignment)? & b.eval(assignment)?),
            Formula::Xor(a, b) => a.eval(assignment)? ^ b.eval(assignment)?,
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::And(a, b) => write!(f, "({a} AND {b})"),
            Formula::Or(a, b) => write!(f, "({a} OR {b})"),
            Formula::Nand(a, b) => write!(f, "({a} NAND {b})"),
            Formula::Xor(a, b) => write!(f, "({a} XOR {b})"),
            Formula::Not(a) => write!(f, "NOT {a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    And,
    Or,
    Not,
    Nand,
    Xor,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::And => "AND".into(),
            Tok::Or => "OR".into(),
            Tok::Not => "NOT".into(),
            Tok::Nand => "NAND".into(),
            Tok::Xor => "XOR".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = match c {
            '(' => {
                chars.next();
                column += 1;
                Tok::LParen
            }
            ')' => {
                chars.next();
                column += 1;
                Tok::RParen
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        word.push(d);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                match word.to_ascii_uppercase().as_str() {
                    "AND" => Tok::And,
                    "OR" => Tok::Or,
                    "NOT" => Tok::Not,
                    "NAND" => Tok::Nand,
                    "XOR" => Tok::Xor,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(Error::Syntax {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Lexed {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Lexed {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &Lexed {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &Lexed {
        let t = &self.toks[self.pos];
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn check_mode(&self, t: &Lexed) -> Result<()> {
        if self.mode == Mode::Monotone && matches!(t.tok, Tok::Not | Tok::Nand | Tok::Xor) {
            return Err(Error::MonotoneViolation {
                operator: t.tok.describe(),
                line: t.line,
                column: t.column,
            });
        }
        Ok(())
    }

    fn unexpected(&self, what: &str) -> Error {
        let t = self.peek();
        Error::Syntax {
            line: t.line,
            column: t.column,
            message: format!("expected {what}, found {}", t.tok.describe()),
        }
    }

    fn expr(&mut self) -> Result<Formula> {
        let mut left = self.term()?;
        loop {
            let t = self.peek();
            let ctor: fn(Formula, Formula) -> Formula = match t.tok {
                Tok::Or => Formula::or,
                Tok::Xor => Formula::xor,
                _ => return Ok(left),
            };
            self.check_mode(t)?;
            self.bump();
            let right = self.term()?;
            left = ctor(left, right);
        }
    }

    fn term(&mut self) -> Result<Formula> {
        let mut left = self.factor()?;
        loop {
            let t = self.peek();
            let ctor: fn(Formula, Formula) -> Formula = match t.tok {
                Tok::And => Formula::and,
                Tok::Nand => Formula::nand,
                _ => return Ok(left),
            };
            self.check_mode(t)?;
            self.bump();
            let right = self.factor()?;
            left = ctor(left, right);
        }
    }

    fn factor(&mut self) -> Result<Formula> {
        let t = self.peek();
        match &t.tok {
            Tok::Ident(name) => {
                let f = Formula::Var(name.clone());
                self.bump();
                Ok(f)
            }
            Tok::Not => {
                self.check_mode(t)?;
                self.bump();
                Ok(Formula::negate(self.factor()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a variable, NOT or `(`")),
        }
    }
}

pub fn parse_formula(text: &str, mode: Mode) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        mode,
    };
    let f = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(f)
}
