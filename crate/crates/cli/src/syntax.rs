//! Line-oriented input language.
//!
//! ```text
//! kind presentation | cw-complex | perturbation-set | automorphism
//! cutoff <int>
//! gen <name> deg <int> [res <int>]
//! bracket [<name>,<name>] = <lie-expr>
//! cell <name> dim <int> attach <lie-expr>
//! diff <name> = <lie-expr>
//! perturbation <name>
//! tau <name> -> <lie-expr>
//! sigma <name> -> <lie-expr>
//! names <name> <name> ...
//! # comment
//!
//! lie-expr := ["-"] term (("+" | "-") term)*
//! term     := [coeff ["*"]] atom | "0"
//! coeff    := int ["/" int] | "(" ["-"] int ["/" int] ")"
//! atom     := name | "[" lie-expr "," lie-expr "]" | "(" lie-expr ")"
//! ```

use std::fmt;

use lie_moduli::lie::{Expr, Term};
use lie_moduli::{Field, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CliError, ParseErrorKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

/// A name with the place it was written. Equality ignores the position.
#[derive(Clone, Debug, Eq)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

impl Name {
    pub fn new(text: impl Into<String>) -> Self {
        Name { text: text.into(), pos: Pos::default() }
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub type SourceExpr = Expr<Name, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Arrow,
    Semi,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Semi => f.write_str("`;`"),
        }
    }
}

fn err(origin: &str, pos: Pos, kind: ParseErrorKind) -> CliError {
    CliError::Parse { origin: origin.to_string(), pos, kind }
}

fn syntax(origin: &str, pos: Pos, msg: impl Into<String>) -> CliError {
    err(origin, pos, ParseErrorKind::Syntax(msg.into()))
}

fn tokenize(origin: &str, line_no: usize, line: &str) -> Result<Vec<(Tok, Pos)>, CliError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line: line_no, col: i + 1 };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') {
                return Err(syntax(origin, Pos { line: line_no, col: i + 1 }, "decimals are not accepted; write p/q"));
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
            continue;
        }
        let tok = match c {
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '-' => Tok::Minus,
            other => return Err(syntax(origin, pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += 1;
    }
    Ok(out)
}

/// Cursor over the tokens of one line.
struct Cursor<'a> {
    origin: &'a str,
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn new(origin: &'a str, line_no: usize, line: &str) -> Result<Self, CliError> {
        let toks = tokenize(origin, line_no, line)?;
        let end = Pos { line: line_no, col: line.chars().count() + 1 };
        Ok(Cursor { origin, toks, at: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn done(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn bump(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn found(&self) -> String {
        self.peek().map(|t| t.to_string()).unwrap_or_else(|| "end of line".into())
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, CliError> {
        if self.peek() == Some(&want) {
            Ok(self.bump().expect("peeked").1)
        } else {
            Err(syntax(self.origin, self.pos(), format!("expected {want}, found {}", self.found())))
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<Name, CliError> {
        match self.bump() {
            Some((Tok::Ident(s), pos)) => Ok(Name { text: s, pos }),
            _ => {
                self.at -= 1;
                Err(syntax(self.origin, self.pos(), format!("expected a name, found {}", self.found())))
            }
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), CliError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == word => {
                self.at += 1;
                Ok(())
            }
            _ => Err(syntax(self.origin, self.pos(), format!("expected `{word}`, found {}", self.found()))),
        }
    }

    fn uint(&mut self) -> Result<u32, CliError> {
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Int(n), _)) => {
                u32::try_from(n).map_err(|_| syntax(self.origin, pos, "integer out of range"))
            }
            _ => {
                self.at -= 1;
                Err(syntax(self.origin, pos, format!("expected an integer, found {}", self.found())))
            }
        }
    }

    fn finish(&self) -> Result<(), CliError> {
        if self.done() {
            Ok(())
        } else {
            Err(syntax(self.origin, self.pos(), format!("unexpected {}", self.found())))
        }
    }

    fn int(&mut self) -> Result<BigInt, CliError> {
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Int(n), _)) => Ok(n),
            _ => {
                self.at -= 1;
                Err(syntax(self.origin, pos, format!("expected an integer, found {}", self.found())))
            }
        }
    }

    fn ratio(&mut self) -> Result<Scalar, CliError> {
        let num = self.int()?;
        if self.eat(&Tok::Slash) {
            let pos = self.pos();
            let den = self.int()?;
            if den.is_zero() {
                return Err(syntax(self.origin, pos, "zero denominator"));
            }
            Ok(Scalar::new(num, den))
        } else {
            Ok(Scalar::from_integer(num))
        }
    }

    /// `( [-] p [/q] )` when the parenthesis opens a coefficient.
    fn paren_coeff_ahead(&self) -> bool {
        let tok = |k: usize| self.toks.get(self.at + k).map(|(t, _)| t);
        if tok(0) != Some(&Tok::LParen) {
            return false;
        }
        let mut k = 1 + usize::from(tok(1) == Some(&Tok::Minus));
        if !matches!(tok(k), Some(Tok::Int(_))) {
            return false;
        }
        k += 1;
        if tok(k) == Some(&Tok::Slash) {
            if !matches!(tok(k + 1), Some(Tok::Int(_))) {
                return false;
            }
            k += 2;
        }
        tok(k) == Some(&Tok::RParen)
    }

    fn coeff(&mut self) -> Result<Option<Scalar>, CliError> {
        if self.paren_coeff_ahead() {
            self.bump();
            let neg = self.eat(&Tok::Minus);
            let c = self.ratio()?;
            self.expect(Tok::RParen)?;
            return Ok(Some(if neg { -c } else { c }));
        }
        if matches!(self.peek(), Some(Tok::Int(_))) {
            return Ok(Some(self.ratio()?));
        }
        Ok(None)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::LBrack | Tok::LParen))
    }

    fn atom(&mut self) -> Result<SourceExpr, CliError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Expr::Leaf(self.name()?)),
            Some(Tok::LBrack) => {
                let open = self.bump().expect("peeked").1;
                let a = self.sum()?;
                if self.done() {
                    return Err(syntax(self.origin, open, "unclosed bracket"));
                }
                self.expect(Tok::Comma)?;
                let b = self.sum()?;
                if self.done() {
                    return Err(syntax(self.origin, open, "unclosed bracket"));
                }
                self.expect(Tok::RBrack)?;
                Ok(Expr::bracket(a, b))
            }
            Some(Tok::LParen) => {
                let open = self.bump().expect("peeked").1;
                let e = self.sum()?;
                if self.done() {
                    return Err(syntax(self.origin, open, "unclosed parenthesis"));
                }
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(syntax(self.origin, self.pos(), format!("expected an expression, found {}", self.found()))),
        }
    }

    /// One signed term; `None` for a literal zero.
    fn term(&mut self, sign: Scalar) -> Result<Option<Term<Name, Scalar>>, CliError> {
        let pos = self.pos();
        let c = self.coeff()?;
        let starred = c.is_some() && self.eat(&Tok::Star);
        if let Some(c) = &c {
            if !starred && !self.starts_atom() {
                if c.is_zero() {
                    return Ok(None);
                }
                return Err(syntax(self.origin, pos, "a coefficient must multiply an expression"));
            }
        }
        let expr = self.atom()?;
        Ok(Some(Term { coeff: sign * c.unwrap_or_else(Scalar::one), expr }))
    }

    fn sum(&mut self) -> Result<SourceExpr, CliError> {
        let mut terms = Vec::new();
        let lead = self.eat(&Tok::Minus);
        let first = if lead { -Scalar::one() } else { Scalar::one() };
        terms.extend(self.term(first)?);
        loop {
            let sign = if self.eat(&Tok::Plus) {
                Scalar::one()
            } else if self.eat(&Tok::Minus) {
                -Scalar::one()
            } else {
                break;
            };
            terms.extend(self.term(sign)?);
        }
        if terms.len() == 1 && terms[0].coeff.is_one() {
            return Ok(terms.pop().expect("one term").expr);
        }
        Ok(Expr::Sum(terms))
    }
}

/// Parses a standalone Lie expression.
pub fn parse_expr(origin: &str, text: &str) -> Result<SourceExpr, CliError> {
    let mut c = Cursor::new(origin, 1, text)?;
    let e = c.sum()?;
    c.finish()?;
    Ok(e)
}

/// A `name -> expr` assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub target: Name,
    pub value: SourceExpr,
}

/// Parses `g -> expr; h -> expr`, as given on the command line.
pub fn parse_assignments(origin: &str, text: &str) -> Result<Vec<Assignment>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut c = Cursor::new(origin, i + 1, line)?;
        while !c.done() {
            let target = c.name()?;
            c.expect(Tok::Arrow)?;
            let value = c.sum()?;
            out.push(Assignment { target, value });
            if !c.eat(&Tok::Semi) {
                c.finish()?;
            }
        }
    }
    Ok(out)
}

/// One statement of a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Kind(Name),
    Cutoff(u32),
    Gen { name: Name, deg: u32, res: Option<u32> },
    Bracket { left: Name, right: Name, value: SourceExpr },
    Cell { name: Name, dim: u32, attach: SourceExpr },
    Diff(Assignment),
    Perturbation(Name),
    Tau(Assignment),
    Sigma(Assignment),
    Names(Vec<Name>),
}

fn statement(c: &mut Cursor<'_>) -> Result<Statement, CliError> {
    let head = c.name()?;
    let st = match head.text.as_str() {
        "kind" => {
            let mut n = c.name()?;
            while c.eat(&Tok::Minus) {
                let rest = c.name()?;
                n.text = format!("{}-{}", n.text, rest.text);
            }
            Statement::Kind(n)
        }
        "cutoff" => Statement::Cutoff(c.uint()?),
        "gen" => {
            let name = c.name()?;
            c.keyword("deg")?;
            let deg = c.uint()?;
            let res = if c.done() {
                None
            } else {
                c.keyword("res")?;
                Some(c.uint()?)
            };
            Statement::Gen { name, deg, res }
        }
        "bracket" => {
            let open = c.expect(Tok::LBrack)?;
            let left = c.name()?;
            if c.done() {
                return Err(syntax(c.origin, open, "unclosed bracket"));
            }
            c.expect(Tok::Comma)?;
            let right = c.name()?;
            if c.done() {
                return Err(syntax(c.origin, open, "unclosed bracket"));
            }
            c.expect(Tok::RBrack)?;
            c.expect(Tok::Eq)?;
            Statement::Bracket { left, right, value: c.sum()? }
        }
        "cell" => {
            let name = c.name()?;
            c.keyword("dim")?;
            let dim = c.uint()?;
            c.keyword("attach")?;
            Statement::Cell { name, dim, attach: c.sum()? }
        }
        "diff" => {
            let target = c.name()?;
            c.expect(Tok::Eq)?;
            Statement::Diff(Assignment { target, value: c.sum()? })
        }
        "perturbation" => Statement::Perturbation(c.name()?),
        "tau" | "sigma" => {
            let target = c.name()?;
            c.expect(Tok::Arrow)?;
            let a = Assignment { target, value: c.sum()? };
            if head.text == "tau" {
                Statement::Tau(a)
            } else {
                Statement::Sigma(a)
            }
        }
        "names" => {
            let mut names = Vec::new();
            while !c.done() {
                names.push(c.name()?);
            }
            Statement::Names(names)
        }
        other => return Err(syntax(c.origin, head.pos, format!("unknown statement `{other}`"))),
    };
    c.finish()?;
    Ok(st)
}

/// Parses every non-blank line into a statement, with its position.
pub fn parse_statements(origin: &str, source: &str) -> Result<Vec<(Statement, Pos)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let mut c = Cursor::new(origin, i + 1, line)?;
        if c.done() {
            continue;
        }
        let pos = c.pos();
        out.push((statement(&mut c)?, pos));
    }
    Ok(out)
}

/// Writes an expression back in the input grammar.
pub fn emit_expr(e: &SourceExpr) -> String {
    match e {
        Expr::Leaf(n) => n.text.clone(),
        Expr::Bracket(a, b) => format!("[{},{}]", emit_expr(a), emit_expr(b)),
        Expr::Sum(ts) if ts.is_empty() => "0".into(),
        Expr::Sum(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let neg = t.coeff.is_negative();
                let abs = if neg { -t.coeff.clone() } else { t.coeff.clone() };
                match (i, neg) {
                    (0, true) => out.push('-'),
                    (0, false) => {}
                    (_, true) => out.push_str(" - "),
                    (_, false) => out.push_str(" + "),
                }
                if !abs.is_one() {
                    if abs.is_integer() {
                        out.push_str(&format!("{abs}*"));
                    } else {
                        out.push_str(&format!("({abs})*"));
                    }
                }
                match &t.expr {
                    Expr::Sum(_) => out.push_str(&format!("({})", emit_expr(&t.expr))),
                    other => out.push_str(&emit_expr(other)),
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn half_bracket() {
        let e = parse_expr("t", "(1/2)*[a,a]").unwrap();
        let Expr::Sum(ts) = &e else { panic!("{e:?}") };
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].coeff, q(1, 2));
        assert_eq!(emit_expr(&e), "(1/2)*[a,a]");
    }

    #[test]
    fn forms_without_star() {
        assert_eq!(parse_expr("t", "2c - (1/2)[a,b]").unwrap(), parse_expr("t", "2*c - (1/2)*[a,b]").unwrap());
        assert_eq!(parse_expr("t", "0").unwrap(), Expr::zero());
        assert_eq!(parse_expr("t", "a + 0").unwrap(), Expr::Leaf(Name::new("a")));
        assert_eq!(parse_expr("t", "(-3/4)*x").unwrap(), parse_expr("t", "-(3/4)*x").unwrap());
    }

    #[test]
    fn unclosed_bracket_points_at_the_opening() {
        let e = parse_expr("t", "[a,b").unwrap_err();
        match e {
            CliError::Parse { pos, kind: ParseErrorKind::Syntax(msg), .. } => {
                assert_eq!(pos, Pos { line: 1, col: 1 });
                assert!(msg.contains("unclosed"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decimals_rejected() {
        assert!(parse_expr("t", "0.5*a").is_err());
    }

    #[test]
    fn statements_and_positions() {
        let src = "kind cw-complex\n\n# two cells\ncell a dim 2 attach 0\ncell b dim 4 attach (1/2)*[a,a]\n";
        let st = parse_statements("f", src).unwrap();
        assert_eq!(st.len(), 3);
        assert_eq!(st[0].0, Statement::Kind(Name::new("cw-complex")));
        assert_eq!(st[2].1, Pos { line: 5, col: 1 });
        let bad = parse_statements("f", "gen a deg").unwrap_err();
        assert!(matches!(bad, CliError::Parse { pos: Pos { line: 1, col: 10 }, .. }));
    }

    #[test]
    fn assignment_lists() {
        let a = parse_assignments("--tau", "c -> -x; y -> [a,b] + 2*e").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[1].target.text, "y");
        assert!(parse_assignments("--tau", "c -> ").is_err());
    }
}
