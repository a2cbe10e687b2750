//! Concrete syntax for terms, cardinals and ordinals, and the printer.
//!
//! ```text
//! expr   := atom ( "x" atom )*
//! atom   := base ( "^" NAT )?
//! base   := "k" | "0" | "l_inf" "(" card "," expr ")" | "c0" "(" card "," expr ")"
//!         | "pi" "{" group ("," group)* "}" | "sigma" "{" group ("," group)* "}"
//!         | "tower" "(" ("pi"|"sigma") "," NAT ("," card)? ")" | "(" expr ")"
//! group  := card ":" member
//! member := expr | "ramp" "(" ("pi"|"sigma") "," card "," expr ")"
//! card   := NAT | "w" | "w1" | "aleph" "(" ordinal ")"
//! ```

use std::fmt;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::ordinal::{Cardinal, Ordinal};
use crate::term::{Group, Kind, Member, Ramp, Term};

/// Byte offsets into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl From<Range<usize>> for SourceSpan {
    fn from(r: Range<usize>) -> Self {
        SourceSpan { start: r.start, end: r.end }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{message} at {}..{}{}", span.start, span.end, fmt_expected(expected))]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

fn fmt_expected(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

impl ParseError {
    pub fn new<I, S>(span: Range<usize>, message: impl Into<String>, expected: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ParseError {
            span: span.into(),
            message: message.into(),
            expected: expected.into_iter().map(Into::into).collect(),
        }
    }
}

/// Finite literals above this are rejected so that cardinal arithmetic on
/// parsed terms stays comfortably inside `u64`.
pub const MAX_NAT: u64 = 1 << 20;
pub const MAX_TOWER: u64 = 512;
const MAX_NESTING: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u64),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Range<usize>)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse::<u64>()
                .ok()
                .filter(|n| *n <= MAX_NAT)
                .ok_or_else(|| ParseError::new(start..i, format!("number exceeds {MAX_NAT}"), ["NAT"]))?;
            out.push((Tok::Nat(n), start..i));
        } else if c.is_ascii_lowercase() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start..i));
        } else if b"(){},:^+*".contains(&c) {
            i += 1;
            out.push((Tok::Sym(c as char), start..i));
        } else {
            let len = src[start..].chars().next().map_or(1, char::len_utf8);
            return Err(ParseError::new(start..start + len, "unexpected character", Vec::<String>::new()));
        }
    }
    out.push((Tok::Eof, src.len()..src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Range<usize> {
        self.toks[self.pos].1.clone()
    }

    fn bump(&mut self) -> (Tok, Range<usize>) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError::new(self.span(), format!("unexpected {}", self.peek()), expected.iter().copied()))
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(i) if i == s)
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&[&format!("`{c}`")])
        }
    }

    fn nat(&mut self) -> PResult<(u64, Range<usize>)> {
        match self.peek() {
            Tok::Nat(n) => {
                let n = *n;
                let span = self.bump().1;
                Ok((n, span))
            }
            _ => self.unexpected(&["NAT"]),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected(&["end of input"])
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ParseError::new(self.span(), format!("nesting deeper than {MAX_NESTING}"), Vec::<String>::new()));
        }
        Ok(())
    }

    fn expr(&mut self) -> PResult<Term> {
        self.enter()?;
        let mut acc = self.atom()?;
        while self.is_ident("x") {
            self.bump();
            let rhs = self.atom()?;
            acc = Term::node_unchecked(
                Kind::Pi,
                vec![Group::closed(Cardinal::Finite(1), acc), Group::closed(Cardinal::Finite(1), rhs)],
            );
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn atom(&mut self) -> PResult<Term> {
        let base = self.base()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        let (n, span) = self.nat()?;
        if n == 0 {
            return Err(ParseError::new(span, "power must be at least 1", ["NAT >= 1"]));
        }
        Ok(Term::node_unchecked(Kind::Pi, vec![Group::closed(Cardinal::Finite(n), base)]))
    }

    fn kind(&mut self) -> PResult<Kind> {
        let kind = match self.peek() {
            Tok::Ident(s) if s == "pi" => Kind::Pi,
            Tok::Ident(s) if s == "sigma" => Kind::Sigma,
            _ => return self.unexpected(&["pi", "sigma"]),
        };
        self.bump();
        Ok(kind)
    }

    fn base(&mut self) -> PResult<Term> {
        const BASES: &[&str] = &["k", "0", "l_inf", "c0", "pi", "sigma", "tower", "("];
        let (tok, span) = (self.peek().clone(), self.span());
        match tok {
            Tok::Nat(0) => {
                self.bump();
                Ok(Term::zero())
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(id) => match id.as_str() {
                "k" => {
                    self.bump();
                    Ok(Term::Scalar)
                }
                "l_inf" | "c0" => {
                    self.bump();
                    self.expect_sym('(')?;
                    let c = self.group_card()?;
                    self.expect_sym(',')?;
                    let e = self.expr()?;
                    self.expect_sym(')')?;
                    let kind = if id == "l_inf" { Kind::Pi } else { Kind::Sigma };
                    Ok(Term::node_unchecked(kind, vec![Group::closed(c, e)]))
                }
                "pi" | "sigma" => {
                    let kind = self.kind()?;
                    self.expect_sym('{')?;
                    let mut groups = vec![self.group()?];
                    while self.is_sym(',') {
                        self.bump();
                        groups.push(self.group()?);
                    }
                    self.expect_sym('}')?;
                    Ok(Term::node_unchecked(kind, groups))
                }
                "tower" => {
                    self.bump();
                    self.expect_sym('(')?;
                    let kind = self.kind()?;
                    self.expect_sym(',')?;
                    let (n, nspan) = self.nat()?;
                    if n > MAX_TOWER {
                        return Err(ParseError::new(nspan, format!("tower height exceeds {MAX_TOWER}"), ["NAT"]));
                    }
                    let card = if self.is_sym(',') {
                        self.bump();
                        self.infinite_card()?
                    } else {
                        Cardinal::aleph0()
                    };
                    self.expect_sym(')')?;
                    Ok(Term::tower(kind, n as usize, card))
                }
                _ => Err(ParseError::new(span, format!("unexpected `{id}`"), BASES.iter().copied())),
            },
            _ => self.unexpected(BASES),
        }
    }

    fn group(&mut self) -> PResult<Group> {
        let c = self.group_card()?;
        self.expect_sym(':')?;
        if self.is_ident("ramp") {
            self.bump();
            self.expect_sym('(')?;
            let first = self.kind()?;
            self.expect_sym(',')?;
            let wrap = self.infinite_card()?;
            self.expect_sym(',')?;
            let base = self.expr()?;
            self.expect_sym(')')?;
            let ramp = Ramp::new(first, wrap, base).expect("wrap checked infinite");
            return Ok(Group::new(c, Member::Ramp(ramp)));
        }
        Ok(Group::closed(c, self.expr()?))
    }

    fn group_card(&mut self) -> PResult<Cardinal> {
        let span = self.span();
        let c = self.card()?;
        if c == Cardinal::Finite(0) {
            return Err(ParseError::new(span, "index cardinality must be at least 1", ["NAT >= 1", "w", "w1", "aleph"]));
        }
        Ok(c)
    }

    fn infinite_card(&mut self) -> PResult<Cardinal> {
        let span = self.span();
        let c = self.card()?;
        if !c.is_infinite() {
            return Err(ParseError::new(span, "cardinality must be infinite", ["w", "w1", "aleph"]));
        }
        Ok(c)
    }

    fn card(&mut self) -> PResult<Cardinal> {
        const CARDS: &[&str] = &["NAT", "w", "w1", "aleph"];
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(Cardinal::Finite(n))
            }
            Tok::Ident(s) if s == "w" => {
                self.bump();
                Ok(Cardinal::aleph0())
            }
            Tok::Ident(s) if s == "w1" => {
                self.bump();
                Ok(Cardinal::aleph1())
            }
            Tok::Ident(s) if s == "aleph" => {
                self.bump();
                self.expect_sym('(')?;
                let o = self.ordinal()?;
                self.expect_sym(')')?;
                Ok(Cardinal::Aleph(o))
            }
            _ => self.unexpected(CARDS),
        }
    }

    fn ordinal(&mut self) -> PResult<Ordinal> {
        self.enter()?;
        let mut acc = self.ord_product()?;
        while self.is_sym('+') {
            self.bump();
            acc = acc.add(&self.ord_product()?);
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn ord_product(&mut self) -> PResult<Ordinal> {
        let (exp, coeff) = match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                (Ordinal::zero(), n)
            }
            Tok::Ident(s) if s == "w" => {
                self.bump();
                let exp = if self.is_sym('^') {
                    self.bump();
                    self.ord_exponent()?
                } else {
                    Ordinal::finite(1)
                };
                (exp, 1)
            }
            _ => return self.unexpected(&["NAT", "w"]),
        };
        let coeff = if self.is_sym('*') {
            self.bump();
            coeff * self.nat()?.0
        } else {
            coeff
        };
        Ok(Ordinal::omega_pow_mul(exp, coeff))
    }

    fn ord_exponent(&mut self) -> PResult<Ordinal> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(Ordinal::finite(n))
            }
            Tok::Ident(s) if s == "w" => {
                self.bump();
                Ok(Ordinal::omega())
            }
            Tok::Sym('(') => {
                self.bump();
                let o = self.ordinal()?;
                self.expect_sym(')')?;
                Ok(o)
            }
            _ => self.unexpected(&["NAT", "w", "("]),
        }
    }
}

/// Parses a term expression.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_cardinal(src: &str) -> Result<Cardinal, ParseError> {
    let mut p = Parser::new(src)?;
    let c = p.card()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_ordinal(src: &str) -> Result<Ordinal, ParseError> {
    let mut p = Parser::new(src)?;
    let o = p.ordinal()?;
    p.finish()?;
    Ok(o)
}

/// Renders a term; `parse(&print(t)) == t`.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Scalar => out.push('k'),
        Term::Node(_) if t.is_zero() => out.push('0'),
        Term::Node(n) => {
            out.push_str(n.kind().keyword());
            out.push('{');
            for (i, g) in n.groups().iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&g.card.to_string());
                out.push_str(": ");
                write_member(&g.member, out);
            }
            out.push('}');
        }
    }
}

fn write_member(m: &Member, out: &mut String) {
    match m {
        Member::Closed(t) => write_term(t, out),
        Member::Ramp(r) => {
            out.push_str(&format!("ramp({}, {}, ", r.first(), r.wrap()));
            write_term(r.base(), out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Cardinal {
        Cardinal::aleph0()
    }

    #[test]
    fn constructors() {
        assert_eq!(parse("l_inf(w, k)").unwrap(), Term::l_inf(w(), Term::Scalar).unwrap());
        let c0 = Term::c0(w(), Term::Scalar).unwrap();
        let prod = Term::node(
            Kind::Pi,
            vec![Group::closed(Cardinal::Finite(1), Term::Scalar), Group::closed(Cardinal::Finite(1), c0)],
        )
        .unwrap();
        assert_eq!(parse("k x c0(w, k)").unwrap(), prod);
        let ramp = Ramp::new(Kind::Sigma, w(), Term::Scalar).unwrap();
        let t = Term::node(Kind::Pi, vec![Group::new(w(), Member::Ramp(ramp))]).unwrap();
        assert_eq!(parse("pi{w: ramp(sigma, w, k)}").unwrap(), t);
    }

    #[test]
    fn printing() {
        assert_eq!(print(&Term::l_inf(w(), Term::Scalar).unwrap()), "pi{w: k}");
        assert_eq!(print(&Term::Scalar), "k");
        assert_eq!(print(&Term::zero()), "0");
        let t = parse("sigma{1: pi{w: k}, w1: k}").unwrap();
        assert_eq!(print(&t), "sigma{w1: k, 1: pi{w: k}}");
    }

    #[test]
    fn sugar() {
        assert_eq!(parse("k^3").unwrap(), parse("pi{3: k}").unwrap());
        assert_eq!(parse("k x k x k").unwrap(), parse("pi{1: pi{1: k, 1: k}, 1: k}").unwrap());
        assert_eq!(parse("k x k^2").unwrap(), parse("pi{1: k, 1: pi{2: k}}").unwrap());
        assert_eq!(parse("tower(sigma, 2)").unwrap(), parse("c0(w, l_inf(w, k))").unwrap());
        assert_eq!(parse("tower(pi, 1, w1)").unwrap(), parse("l_inf(w1, k)").unwrap());
        assert_eq!(parse("(0)").unwrap(), Term::zero());
        assert_eq!(parse("pi{aleph(w+1): k}").unwrap().to_string(), "pi{aleph(w+1): k}");
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse("pi{0: k}").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 3, end: 4 });
        let e = parse("l_inf(w k)").unwrap_err();
        assert_eq!(e.expected, vec!["`,`"]);
        assert_eq!(e.span.start, 8);
        assert!(parse("k^0").is_err());
        assert!(parse("pi{w: ramp(pi, 3, k)}").is_err());
        assert!(parse("tower(pi, 2, 5)").is_err());
        assert!(parse("").is_err());
        assert!(parse("k k").is_err());
        assert!(parse("pi{}").is_err());
        assert!(parse("λ").unwrap_err().span.end <= "λ".len());
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let src = "(".repeat(100_000) + "k" + &")".repeat(100_000);
        assert!(parse(&src).is_err());
    }

    #[test]
    fn ordinals() {
        assert_eq!(parse_ordinal("w^2+w*3+1").unwrap().to_string(), "w^2+w*3+1");
        assert_eq!(parse_ordinal("w^(w+1)").unwrap().to_string(), "w^(w+1)");
        assert!(parse_ordinal("w^").is_err());
    }
}
