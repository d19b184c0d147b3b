//! A small operator language for momentum-space equations.
//!
//! ```text
//! expr    := term { ("+" | "-") term } ;
//! term    := factor { "*" factor | "/E" } ;
//! factor  := "pslash" | "gamma" "(" digit ")" | "gamma5" | "H" | "I"
//!          | "kappa" | number | "(" expr ")" ;
//! ```
//!
//! `pslash` is γ·p, `H` the helicity operator, `/E` divides by |p|.

use std::fmt;

use crate::clifford::{ComplexMatrix4, GammaRep, C64};
use crate::equations::{helicity_matrix, slash_at};
use crate::error::{Error, Result};
use crate::kinematics::{OnShellPoint, SpatialMomentum, ZERO_MOMENTUM_EPS};

pub const PRESET_EQ3: &str = "pslash + kappa*(I + gamma5)";
pub const PRESET_EQ4: &str = "pslash + kappa*(I + gamma5*H/E)";
pub const PRESET_EQ5: &str = "pslash + kappa*(I + H/E)";

/// Named presets for the three combined equations.
pub fn preset(name: &str) -> Option<&'static str> {
    match name {
        "eq3" => Some(PRESET_EQ3),
        "eq4" => Some(PRESET_EQ4),
        "eq5" => Some(PRESET_EQ5),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorAst {
    /// Signed summands; the first is always `Plus`.
    Sum(Vec<(Sign, OperatorAst)>),
    /// Factors multiplied left to right.
    Product(Vec<OperatorAst>),
    Scalar(f64),
    KappaRef,
    Identity,
    Gamma(u8),
    Gamma5,
    Slash,
    H,
    InvE,
}

impl OperatorAst {
    /// Children that would re-associate without parentheses get them.
    fn write_child(&self, f: &mut fmt::Formatter<'_>, in_product: bool) -> fmt::Result {
        match self {
            OperatorAst::Sum(_) => write!(f, "({self})"),
            OperatorAst::Product(_) if in_product => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }

    /// Does the tree mention the coupling?
    pub fn uses_kappa(&self) -> bool {
        match self {
            OperatorAst::Sum(terms) => terms.iter().any(|(_, t)| t.uses_kappa()),
            OperatorAst::Product(fs) => fs.iter().any(OperatorAst::uses_kappa),
            OperatorAst::KappaRef => true,
            _ => false,
        }
    }
}

impl fmt::Display for OperatorAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorAst::Sum(terms) => {
                for (i, (sign, term)) in terms.iter().enumerate() {
                    match (i, sign) {
                        (0, _) => {}
                        (_, Sign::Plus) => write!(f, " + ")?,
                        (_, Sign::Minus) => write!(f, " - ")?,
                    }
                    term.write_child(f, false)?;
                }
                Ok(())
            }
            OperatorAst::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    match factor {
                        OperatorAst::InvE => write!(f, "/E")?,
                        _ => {
                            if i > 0 {
                                write!(f, "*")?;
                            }
                            factor.write_child(f, true)?;
                        }
                    }
                }
                Ok(())
            }
            OperatorAst::Scalar(x) => write!(f, "{x:?}"),
            OperatorAst::KappaRef => write!(f, "kappa"),
            OperatorAst::Identity => write!(f, "I"),
            OperatorAst::Gamma(i) => write!(f, "gamma({i})"),
            OperatorAst::Gamma5 => write!(f, "gamma5"),
            OperatorAst::Slash => write!(f, "pslash"),
            OperatorAst::H => write!(f, "H"),
            OperatorAst::InvE => write!(f, "1/E"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64, String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(_, s) => format!("number {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let value = lit.parse::<f64>().map_err(|_| Error::Syntax {
                    offset: start,
                    expected: vec!["decimal literal".into()],
                })?;
                out.push((start, Tok::Number(value, lit.to_string())));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    expected: FACTOR_STARTS.iter().map(|s| s.to_string()).collect(),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

const FACTOR_STARTS: [&str; 8] = [
    "'pslash'", "'gamma'", "'gamma5'", "'H'", "'I'", "'kappa'", "number", "'('",
];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn expr(&mut self) -> Result<OperatorAst> {
        let first = self.term()?;
        let mut terms = vec![(Sign::Plus, first)];
        loop {
            let sign = match self.peek() {
                Tok::Plus => Sign::Plus,
                Tok::Minus => Sign::Minus,
                _ => break,
            };
            self.bump();
            terms.push((sign, self.term()?));
        }
        Ok(if terms.len() == 1 {
            terms.pop().map(|(_, t)| t).unwrap_or(OperatorAst::Identity)
        } else {
            OperatorAst::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<OperatorAst> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    factors.push(self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    match self.peek() {
                        Tok::Ident(s) if s == "E" => {
                            self.bump();
                            factors.push(OperatorAst::InvE);
                        }
                        _ => return self.fail(&["'E'"]),
                    }
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.remove(0)
        } else {
            OperatorAst::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<OperatorAst> {
        let (offset, tok) = self.toks[self.pos].clone();
        match tok {
            Tok::Number(x, _) => {
                self.bump();
                Ok(OperatorAst::Scalar(x))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(&["'+'", "'-'", "'*'", "'/E'", "')'"]);
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                let node = match name.as_str() {
                    "pslash" => OperatorAst::Slash,
                    "gamma5" => OperatorAst::Gamma5,
                    "H" => OperatorAst::H,
                    "I" => OperatorAst::Identity,
                    "kappa" => OperatorAst::KappaRef,
                    "gamma" => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let (idx_offset, idx) = self.toks[self.pos].clone();
                        let index = match idx {
                            Tok::Number(x, lit) => {
                                if x.fract() == 0.0 && (0.0..=3.0).contains(&x) && !lit.contains(['.', 'e', 'E']) {
                                    x as u8
                                } else {
                                    return Err(Error::Index {
                                        offset: idx_offset,
                                        index: lit,
                                    });
                                }
                            }
                            _ => return self.fail(&["digit"]),
                        };
                        self.bump();
                        self.expect(Tok::RParen)?;
                        return Ok(OperatorAst::Gamma(index));
                    }
                    _ => {
                        return Err(Error::Syntax {
                            offset,
                            expected: FACTOR_STARTS.iter().map(|s| s.to_string()).collect(),
                        })
                    }
                };
                self.bump();
                Ok(node)
            }
            _ => self.fail(&FACTOR_STARTS),
        }
    }
}

pub fn parse(text: &str) -> Result<OperatorAst> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["'+'", "'-'", "'*'", "'/E'", "end of input"]);
    }
    Ok(ast)
}

/// Evaluate at an on-shell point.
pub fn evaluate(ast: &OperatorAst, rep: &GammaRep, point: &OnShellPoint, kappa: f64) -> Result<ComplexMatrix4> {
    evaluate_at(ast, rep, point.p0(), &point.spatial, kappa)
}

/// Evaluate at an arbitrary (p₀, p); `/E` still means 1/|p|.
pub fn evaluate_at(
    ast: &OperatorAst,
    rep: &GammaRep,
    p0: f64,
    spatial: &SpatialMomentum,
    kappa: f64,
) -> Result<ComplexMatrix4> {
    let real = |x: f64| ComplexMatrix4::scalar(C64::new(x, 0.0));
    Ok(match ast {
        OperatorAst::Sum(terms) => {
            let mut acc = ComplexMatrix4::zero();
            for (sign, term) in terms {
                let m = evaluate_at(term, rep, p0, spatial, kappa)?;
                acc = match sign {
                    Sign::Plus => acc + m,
                    Sign::Minus => acc - m,
                };
            }
            acc
        }
        OperatorAst::Product(factors) => {
            let mut acc = ComplexMatrix4::identity();
            for factor in factors {
                acc = acc * evaluate_at(factor, rep, p0, spatial, kappa)?;
            }
            acc
        }
        OperatorAst::Scalar(x) => real(*x),
        OperatorAst::KappaRef => real(kappa),
        OperatorAst::Identity => ComplexMatrix4::identity(),
        OperatorAst::Gamma(i) => rep.gamma[usize::from(*i)],
        OperatorAst::Gamma5 => rep.gamma5,
        OperatorAst::Slash => slash_at(rep, p0, spatial),
        OperatorAst::H => helicity_matrix(rep, spatial),
        OperatorAst::InvE => {
            let e = spatial.norm();
            if e <= ZERO_MOMENTUM_EPS {
                return Err(Error::ZeroMomentum(spatial.0));
            }
            real(1.0 / e)
        }
    })
}
