//! Parsers for the textual interfaces: generalized-number literals
//! (bit-exact round trip with the canonical formatter), infix
//! expressions over `x1..xn`, series literals, and domain literals.
//! All errors carry a byte offset into the input.

use crate::error::{Error, Result};
use crate::exp::{Exp, Trunc};
use crate::expr::{Builtin, Expr, GenFunc};
use crate::gennum::{Coef, GenNum};
use crate::points::Domain;
use crate::series::PowerSeries;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let offset = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => {
                out.push(Token { tok: Tok::Plus, offset });
                i += 1;
            }
            '-' => {
                out.push(Token { tok: Tok::Minus, offset });
                i += 1;
            }
            '*' => {
                out.push(Token { tok: Tok::Star, offset });
                i += 1;
            }
            '/' => {
                out.push(Token { tok: Tok::Slash, offset });
                i += 1;
            }
            '^' => {
                out.push(Token { tok: Tok::Caret, offset });
                i += 1;
            }
            '(' => {
                out.push(Token { tok: Tok::LParen, offset });
                i += 1;
            }
            ')' => {
                out.push(Token { tok: Tok::RParen, offset });
                i += 1;
            }
            ',' => {
                out.push(Token { tok: Tok::Comma, offset });
                i += 1;
            }
            ';' => {
                out.push(Token { tok: Tok::Semi, offset });
                i += 1;
            }
            '=' => {
                out.push(Token { tok: Tok::Eq, offset });
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
                // Scientific suffix, but not the identifier `eps`.
                if i < bytes.len()
                    && (bytes[i] == b'e' || bytes[i] == b'E')
                    && !input[i..].starts_with("eps")
                {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Num(input[start..i].to_string()),
                    offset: start,
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(input[start..i].to_string()),
                    offset: start,
                });
            }
            _ => return Err(err(offset, format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(tokens: Vec<Token>, end: usize) -> Cursor {
        Cursor {
            tokens,
            pos: 0,
            end,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.offset)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(err(self.offset(), format!("expected {what}")))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Ident(s)) if s == name => Ok(()),
            _ => Err(err(offset, format!("expected {name:?}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(err(self.offset(), "trailing input"))
        }
    }
}

/// Parse an exact rational exponent: `integer [ "/" positive-integer ]`.
fn parse_exp(c: &mut Cursor) -> Result<Exp> {
    let neg = c.eat(&Tok::Minus);
    let offset = c.offset();
    let numer_text = match c.bump() {
        Some(Tok::Num(s)) => s,
        _ => return Err(err(offset, "expected integer exponent")),
    };
    let numer: i64 = numer_text
        .parse()
        .map_err(|_| err(offset, format!("invalid integer {numer_text:?}")))?;
    let numer = if neg { -numer } else { numer };
    if c.eat(&Tok::Slash) {
        let offset = c.offset();
        let denom_text = match c.bump() {
            Some(Tok::Num(s)) => s,
            _ => return Err(err(offset, "expected denominator")),
        };
        let denom: i64 = denom_text
            .parse()
            .map_err(|_| err(offset, format!("invalid integer {denom_text:?}")))?;
        if denom == 0 {
            return Err(err(offset, "zero denominator"));
        }
        Ok(Exp::new(numer, denom))
    } else {
        Ok(Exp::from_int(numer))
    }
}

fn parse_number(c: &mut Cursor) -> Result<f64> {
    let offset = c.offset();
    match c.bump() {
        Some(Tok::Num(s)) => s
            .parse()
            .map_err(|_| err(offset, format!("invalid number {s:?}"))),
        _ => Err(err(offset, "expected number")),
    }
}

/// `( a (+|-) b i )`
fn parse_complex_coef(c: &mut Cursor) -> Result<Coef> {
    c.expect(Tok::LParen, "'('")?;
    let re_neg = c.eat(&Tok::Minus);
    let re = parse_number(c)? * if re_neg { -1.0 } else { 1.0 };
    let im_sign = match c.bump() {
        Some(Tok::Plus) => 1.0,
        Some(Tok::Minus) => -1.0,
        _ => return Err(err(c.offset(), "expected '+' or '-' in complex coefficient")),
    };
    let im = parse_number(c)? * im_sign;
    c.expect_ident("i")?;
    c.expect(Tok::RParen, "')'")?;
    Ok(Coef::new(re, im))
}

/// One literal term: `coef ["*" eps-part] | eps-part | alpha(exp)`.
/// Returns the exponent/coefficient pair.
fn parse_literal_term(c: &mut Cursor, sign: f64) -> Result<(Exp, Coef)> {
    match c.peek() {
        Some(Tok::Ident(name)) if name == "eps" => {
            c.bump();
            let e = if c.eat(&Tok::Caret) {
                parse_exp(c)?
            } else {
                Exp::from_int(1)
            };
            Ok((e, Coef::new(sign, 0.0)))
        }
        Some(Tok::Ident(name)) if name == "alpha" => {
            c.bump();
            c.expect(Tok::LParen, "'('")?;
            let e = parse_exp(c)?;
            c.expect(Tok::RParen, "')'")?;
            Ok((e, Coef::new(sign, 0.0)))
        }
        Some(Tok::LParen) => {
            let coef = parse_complex_coef(c)?;
            let e = parse_optional_eps_factor(c)?;
            Ok((e, coef * sign))
        }
        Some(Tok::Num(_)) => {
            let v = parse_number(c)?;
            let e = parse_optional_eps_factor(c)?;
            Ok((e, Coef::new(sign * v, 0.0)))
        }
        _ => Err(err(c.offset(), "expected a term")),
    }
}

fn parse_optional_eps_factor(c: &mut Cursor) -> Result<Exp> {
    if c.eat(&Tok::Star) {
        let offset = c.offset();
        match c.bump() {
            Some(Tok::Ident(s)) if s == "eps" => {}
            Some(Tok::Ident(s)) if s == "alpha" => {
                c.expect(Tok::LParen, "'('")?;
                let e = parse_exp(c)?;
                c.expect(Tok::RParen, "')'")?;
                return Ok(e);
            }
            _ => return Err(err(offset, "expected eps factor")),
        }
        if c.eat(&Tok::Caret) {
            parse_exp(c)
        } else {
            Ok(Exp::from_int(1))
        }
    } else {
        Ok(Exp::zero())
    }
}

/// Parse a generalized-number literal.
pub fn parse_gennum(input: &str) -> Result<GenNum> {
    let tokens = lex(input)?;
    let mut c = Cursor::new(tokens, input.len());
    let x = parse_gennum_inner(&mut c)?;
    c.finish()?;
    Ok(x)
}

fn parse_gennum_inner(c: &mut Cursor) -> Result<GenNum> {
    let mut terms = Vec::new();
    let mut trunc = Trunc::Infinite;
    let mut sign = if c.eat(&Tok::Minus) { -1.0 } else { 1.0 };
    loop {
        if matches!(c.peek(), Some(Tok::Ident(s)) if s == "O") {
            c.bump();
            c.expect(Tok::LParen, "'('")?;
            c.expect_ident("eps")?;
            c.expect(Tok::Caret, "'^'")?;
            trunc = Trunc::Finite(parse_exp(c)?);
            c.expect(Tok::RParen, "')'")?;
            break;
        }
        terms.push(parse_literal_term(c, sign)?);
        match c.peek() {
            Some(Tok::Plus) => {
                c.bump();
                sign = 1.0;
            }
            Some(Tok::Minus) => {
                c.bump();
                sign = -1.0;
            }
            _ => break,
        }
    }
    GenNum::normalize(terms, trunc)
}

/// Names bound to variable indices while parsing an expression.
struct Scope {
    names: Vec<String>,
    allow_new: bool,
}

impl Scope {
    fn lookup(&mut self, name: &str, offset: usize) -> Result<usize> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.allow_new && is_var_name(name) {
            self.names.push(name.to_string());
            // Keep x1..xn in index order regardless of first use.
            self.names.sort_by_key(|n| var_index(n));
            return Ok(self.names.iter().position(|n| n == name).unwrap());
        }
        Err(err(offset, format!("unknown variable {name:?}")))
    }
}

fn is_var_name(name: &str) -> bool {
    name.strip_prefix('x')
        .map(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        .unwrap_or(false)
}

fn var_index(name: &str) -> usize {
    name[1..].parse().unwrap_or(0)
}

/// Parse an infix expression over variables `x1..xn` into a function.
/// The arity is the highest variable index mentioned (at least one).
pub fn parse_genfunc(input: &str) -> Result<GenFunc> {
    let tokens = lex(input)?;
    let mut c = Cursor::new(tokens, input.len());
    let mut scope = Scope {
        names: Vec::new(),
        allow_new: true,
    };
    let body = parse_sum(&mut c, &mut scope)?;
    c.finish()?;
    let arity = scope
        .names
        .iter()
        .map(|n| var_index(n))
        .max()
        .unwrap_or(1)
        .max(1);
    // Re-index body variables by x-number, not first-use order.
    Ok(GenFunc::new(arity, reindex(&body, &scope.names)))
}

fn reindex(e: &Expr, names: &[String]) -> Expr {
    let subs: Vec<Expr> = names.iter().map(|n| Expr::Var(var_index(n) - 1)).collect();
    e.substitute(&subs)
}

/// Parse a one-variable integrand in the variable `t`.
pub fn parse_integrand(input: &str) -> Result<GenFunc> {
    let tokens = lex(input)?;
    let mut c = Cursor::new(tokens, input.len());
    let mut scope = Scope {
        names: vec!["t".to_string()],
        allow_new: false,
    };
    let body = parse_sum(&mut c, &mut scope)?;
    c.finish()?;
    Ok(GenFunc::new(1, body))
}

/// Parse an expression with no free variables and evaluate it.
pub fn parse_value(input: &str, work: &Trunc) -> Result<GenNum> {
    let tokens = lex(input)?;
    let mut c = Cursor::new(tokens, input.len());
    let mut scope = Scope {
        names: Vec::new(),
        allow_new: false,
    };
    let body = parse_sum(&mut c, &mut scope)?;
    c.finish()?;
    GenFunc::new(0, body).eval(&[], work)
}

fn parse_sum(c: &mut Cursor, scope: &mut Scope) -> Result<Expr> {
    let mut acc = parse_product(c, scope)?;
    loop {
        if c.eat(&Tok::Plus) {
            acc = acc.add(parse_product(c, scope)?);
        } else if c.eat(&Tok::Minus) {
            acc = acc.sub(parse_product(c, scope)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_product(c: &mut Cursor, scope: &mut Scope) -> Result<Expr> {
    let mut acc = parse_unary(c, scope)?;
    loop {
        if c.eat(&Tok::Star) {
            acc = acc.mul(parse_unary(c, scope)?);
        } else if c.eat(&Tok::Slash) {
            acc = acc.div(parse_unary(c, scope)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_unary(c: &mut Cursor, scope: &mut Scope) -> Result<Expr> {
    if c.eat(&Tok::Minus) {
        Ok(parse_unary(c, scope)?.neg())
    } else {
        parse_postfix(c, scope)
    }
}

fn parse_postfix(c: &mut Cursor, scope: &mut Scope) -> Result<Expr> {
    let mut acc = parse_atom(c, scope)?;
    while c.eat(&Tok::Caret) {
        let neg = c.eat(&Tok::Minus);
        let offset = c.offset();
        let k_text = match c.bump() {
            Some(Tok::Num(s)) => s,
            _ => return Err(err(offset, "expected integer power")),
        };
        let k: i32 = k_text
            .parse()
            .map_err(|_| err(offset, format!("invalid power {k_text:?}")))?;
        acc = acc.pow(if neg { -k } else { k });
    }
    Ok(acc)
}

fn parse_atom(c: &mut Cursor, scope: &mut Scope) -> Result<Expr> {
    let offset = c.offset();
    match c.peek().cloned() {
        Some(Tok::Num(_)) => {
            let v = parse_number(c)?;
            // Imaginary literal: a number directly followed by `i`.
            if matches!(c.peek(), Some(Tok::Ident(s)) if s == "i") {
                c.bump();
                return Ok(Expr::constant(GenNum::from_coef(Coef::new(0.0, v))));
            }
            Ok(Expr::real(v))
        }
        Some(Tok::LParen) => {
            c.bump();
            let e = parse_sum(c, scope)?;
            c.expect(Tok::RParen, "')'")?;
            Ok(e)
        }
        Some(Tok::Ident(name)) => {
            c.bump();
            match name.as_str() {
                "eps" => {
                    let e = if c.eat(&Tok::Caret) {
                        parse_exp(c)?
                    } else {
                        Exp::from_int(1)
                    };
                    Ok(Expr::constant(GenNum::alpha(e)?))
                }
                "alpha" => {
                    c.expect(Tok::LParen, "'('")?;
                    let e = parse_exp(c)?;
                    c.expect(Tok::RParen, "')'")?;
                    Ok(Expr::constant(GenNum::alpha(e)?))
                }
                "i" => Ok(Expr::constant(GenNum::from_coef(Coef::new(0.0, 1.0)))),
                "betanormsq" => {
                    c.expect(Tok::LParen, "'('")?;
                    let e = parse_sum(c, scope)?;
                    c.expect(Tok::RParen, "')'")?;
                    Ok(Expr::beta_norm_sq(e))
                }
                "integrate" => {
                    c.expect(Tok::LParen, "'('")?;
                    let mut inner = Scope {
                        names: vec!["t".to_string()],
                        allow_new: false,
                    };
                    let integrand = parse_sum(c, &mut inner)?;
                    c.expect(Tok::Comma, "','")?;
                    c.expect_ident("t")?;
                    c.expect(Tok::Comma, "','")?;
                    let lower = parse_sum(c, scope)?;
                    c.expect(Tok::Comma, "','")?;
                    let upper = parse_sum(c, scope)?;
                    c.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Integral {
                        integrand: Box::new(GenFunc::new(1, integrand)),
                        lower: Box::new(lower),
                        upper: Box::new(upper),
                    })
                }
                _ => {
                    if let Some(b) = Builtin::from_name(&name) {
                        c.expect(Tok::LParen, "'('")?;
                        let e = parse_sum(c, scope)?;
                        c.expect(Tok::RParen, "')'")?;
                        Ok(Expr::call(b, e))
                    } else if name == "t" || is_var_name(&name) {
                        Ok(Expr::Var(scope.lookup(&name, offset)?))
                    } else {
                        Err(err(offset, format!("unknown name {name:?}")))
                    }
                }
            }
        }
        _ => Err(err(offset, "expected an expression")),
    }
}

/// Parse a series literal:
/// `series(center=<gennum>; a0=<gennum>, a1=<gennum>, ...)`.
pub fn parse_series(input: &str) -> Result<PowerSeries> {
    let tokens = lex(input)?;
    let mut c = Cursor::new(tokens, input.len());
    c.expect_ident("series")?;
    c.expect(Tok::LParen, "'('")?;
    c.expect_ident("center")?;
    c.expect(Tok::Eq, "'='")?;
    let center = parse_gennum_inner(&mut c)?;
    c.expect(Tok::Semi, "';'")?;
    let mut coeffs: Vec<(usize, GenNum)> = Vec::new();
    loop {
        let offset = c.offset();
        let key = match c.bump() {
            Some(Tok::Ident(s)) => s,
            _ => return Err(err(offset, "expected coefficient key a<k>")),
        };
        let index: usize = key
            .strip_prefix('a')
            .and_then(|rest| rest.parse().ok())
            .ok_or_else(|| err(offset, format!("expected a<k>, got {key:?}")))?;
        c.expect(Tok::Eq, "'='")?;
        let value = parse_gennum_inner(&mut c)?;
        coeffs.push((index, value));
        if c.eat(&Tok::Comma) {
            continue;
        }
        c.expect(Tok::RParen, "')'")?;
        break;
    }
    c.finish()?;
    let max = coeffs.iter().map(|(i, _)| *i).max().unwrap_or(0);
    let mut list = vec![GenNum::zero(); max + 1];
    for (i, v) in coeffs {
        list[i] = v;
    }
    Ok(PowerSeries::new(center, list))
}

/// Parse a domain literal: `interval(lo,hi)`, `box((lo,hi),...)`, `all`.
pub fn parse_domain(input: &str) -> Result<Domain> {
    let tokens = lex(input)?;
    let mut c = Cursor::new(tokens, input.len());
    let offset = c.offset();
    let name = match c.bump() {
        Some(Tok::Ident(s)) => s,
        _ => return Err(err(offset, "expected a domain")),
    };
    let d = match name.as_str() {
        "all" => Domain::All { dim: 1 },
        "interval" => {
            c.expect(Tok::LParen, "'('")?;
            let lo = parse_signed_number(&mut c)?;
            c.expect(Tok::Comma, "','")?;
            let hi = parse_signed_number(&mut c)?;
            c.expect(Tok::RParen, "')'")?;
            if !(lo < hi) {
                return Err(err(offset, "interval bounds must satisfy lo < hi"));
            }
            Domain::Interval { lo, hi }
        }
        "box" => {
            c.expect(Tok::LParen, "'('")?;
            let mut iv = Vec::new();
            loop {
                c.expect(Tok::LParen, "'('")?;
                let lo = parse_signed_number(&mut c)?;
                c.expect(Tok::Comma, "','")?;
                let hi = parse_signed_number(&mut c)?;
                c.expect(Tok::RParen, "')'")?;
                if !(lo < hi) {
                    return Err(err(offset, "box bounds must satisfy lo < hi"));
                }
                iv.push((lo, hi));
                if c.eat(&Tok::Comma) {
                    continue;
                }
                break;
            }
            c.expect(Tok::RParen, "')'")?;
            Domain::Box(iv)
        }
        _ => return Err(err(offset, format!("unknown domain {name:?}"))),
    };
    c.finish()?;
    Ok(d)
}

fn parse_signed_number(c: &mut Cursor) -> Result<f64> {
    let neg = c.eat(&Tok::Minus);
    let v = parse_number(c)?;
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gennum::DEFAULT_TRUNC;

    fn work() -> Trunc {
        Trunc::finite(DEFAULT_TRUNC)
    }

    #[test]
    fn literal_round_trip() {
        for s in [
            "0",
            "1 + 2*eps",
            "eps + eps^2",
            "-2 + eps",
            "eps^1/2",
            "eps^-1",
            "3.5*eps^-3/2",
            "0 + O(eps^5)",
            "1 - 2*eps + O(eps^3)",
            "(1+2i)*eps",
            "(0.5-1i) + eps^7/3",
        ] {
            let x = parse_gennum(s).unwrap();
            assert_eq!(x.to_string(), s, "round trip of {s:?}");
            let again = parse_gennum(&x.to_string()).unwrap();
            assert_eq!(x, again);
        }
    }

    #[test]
    fn literal_canonicalizes() {
        let x = parse_gennum("2*eps^1 + 1").unwrap();
        assert_eq!(x.to_string(), "1 + 2*eps");
        let y = parse_gennum("alpha(2)").unwrap();
        assert_eq!(y, GenNum::alpha_int(2));
    }

    #[test]
    fn literal_errors_carry_offsets() {
        let e = parse_gennum("eps^1/0").unwrap_err();
        match e {
            Error::Parse { offset, .. } => assert_eq!(offset, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_gennum("1 +$").is_err());
    }

    #[test]
    fn expressions_evaluate() {
        let v = parse_value("alpha(1)*(1+eps)", &work()).unwrap();
        assert_eq!(v.to_string(), "eps + eps^2");
        let v = parse_value("(1+eps)^2 - 1", &work()).unwrap();
        assert_eq!(v.to_string(), "2*eps + eps^2");
        let v = parse_value("integrate(2*t, t, 0, 1+eps)", &work()).unwrap();
        assert_eq!(v.to_string(), "1 + 2*eps + eps^2");
    }

    #[test]
    fn genfunc_variables() {
        let f = parse_genfunc("x1*x2 + x2^2").unwrap();
        assert_eq!(f.arity(), 2);
        let a = GenNum::from_real(2.0);
        let b = GenNum::from_real(3.0);
        let v = f.eval(&[a, b], &work()).unwrap();
        assert_eq!(v, GenNum::from_real(15.0));
    }

    #[test]
    fn genfunc_builtins() {
        let f = parse_genfunc("exp(x1) + betanormsq(x1)").unwrap();
        assert_eq!(f.arity(), 1);
        let v = f.eval(&[GenNum::alpha_int(1)], &work()).unwrap();
        // exp(eps) + alpha(2): coefficient at eps^2 is 1/2 + 1.
        assert!((v.coef_at(&Exp::from_int(2)).re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn series_literal() {
        let s = parse_series("series(center=0; a0=1, a1=2*eps, a3=-1)").unwrap();
        assert_eq!(s.explicit_coeffs().len(), 4);
        assert_eq!(s.explicit_coeffs()[1].to_string(), "2*eps");
        assert!(s.explicit_coeffs()[2].is_exact_zero());
    }

    #[test]
    fn domain_literals() {
        assert_eq!(
            parse_domain("interval(0,2)").unwrap(),
            Domain::Interval { lo: 0.0, hi: 2.0 }
        );
        assert_eq!(
            parse_domain("box((0,1),(-1,1))").unwrap(),
            Domain::Box(vec![(0.0, 1.0), (-1.0, 1.0)])
        );
        assert_eq!(parse_domain("all").unwrap(), Domain::All { dim: 1 });
        assert!(parse_domain("interval(2,0)").is_err());
    }
}
