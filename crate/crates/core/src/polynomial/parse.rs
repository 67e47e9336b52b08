//! Recursive-descent parser for systems of `;`-terminated polynomials.
//!
//! ```text
//! system := header? (expr ';')*
//! header := n [m] [name ...]          (first line only)
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom (('^' | '**') integer)?
//! atom   := number | number('i'|'j') | name | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. The names `i`,
//! `I` and `j` denote the imaginary unit unless the header declares them as
//! variables. `#` starts a comment that runs to the end of the line.

use indexmap::IndexMap;

use super::{accumulate, PolySystem, Polynomial};
use crate::error::{Error, Result};
use crate::numerics::decimal::{parse_decimal, rational_to_qd};
use crate::numerics::{Complex, QuadDouble, StoredComplex};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(String),
    Imaginary(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Semi,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = line_col(text, offset);
    Error::Syntax { offset, line, column, message: message.into() }
}

fn tokenize(text: &str, start: usize) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        let offset = i;
        let simple = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b';' => Some(Tok::Semi),
            b'*' => {
                if bytes.get(i + 1) == Some(&b'*') {
                    i += 2;
                    out.push(Token { tok: Tok::Caret, offset });
                    continue;
                }
                Some(Tok::Star)
            }
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, offset });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || b == b'.' {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'.' {
                j += 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                let mut k = j + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let literal = text[i..j].to_string();
            if literal == "." {
                return Err(syntax(text, offset, "stray '.'"));
            }
            let imaginary = j < bytes.len()
                && matches!(bytes[j], b'i' | b'j')
                && !bytes.get(j + 1).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            if imaginary {
                out.push(Token { tok: Tok::Imaginary(literal), offset });
                i = j + 1;
            } else {
                out.push(Token { tok: Tok::Number(literal), offset });
                i = j;
            }
            continue;
        }
        if b.is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            out.push(Token { tok: Tok::Ident(text[i..j].to_string()), offset });
            i = j;
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(syntax(text, offset, format!("unexpected character '{ch}'")));
    }
    out.push(Token { tok: Tok::Eof, offset: text.len() });
    Ok(out)
}

/// Polynomial under construction. Exponent vectors have their trailing
/// zeros trimmed, since the variable count grows during parsing.
#[derive(Clone, Debug)]
struct Acc(IndexMap<Vec<u32>, StoredComplex>);

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Acc {
    fn constant(c: StoredComplex) -> Self {
        let mut m = IndexMap::new();
        accumulate(&mut m, Vec::new(), c);
        Acc(m)
    }

    fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        let mut m = IndexMap::new();
        m.insert(e, StoredComplex::one());
        Acc(m)
    }

    fn add(mut self, other: Acc, sign: f64) -> Acc {
        for (e, c) in other.0 {
            accumulate(&mut self.0, e, c.scale_f64(sign));
        }
        self
    }

    fn neg(self) -> Acc {
        Acc(self.0.into_iter().map(|(e, c)| (e, -c)).collect())
    }

    fn mul(&self, other: &Acc) -> Acc {
        let mut m = IndexMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let n = ea.len().max(eb.len());
                let e: Vec<u32> = (0..n)
                    .map(|k| ea.get(k).copied().unwrap_or(0) + eb.get(k).copied().unwrap_or(0))
                    .collect();
                accumulate(&mut m, trim(e), *ca * *cb);
            }
        }
        Acc(m)
    }

    fn pow(&self, n: u32) -> Acc {
        let mut acc = Acc::constant(StoredComplex::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn into_polynomial(self, nvars: usize) -> Polynomial {
        let terms = self
            .0
            .into_iter()
            .map(|(mut e, c)| {
                e.resize(nvars, 0);
                (c, e)
            })
            .collect();
        Polynomial::from_terms(nvars, terms)
    }
}

struct Header {
    equations: usize,
    variables: Option<usize>,
    names: Vec<String>,
}

/// Recognizes an optional first line `n [m] [names...]`. Returns the header
/// and the byte offset where the polynomials start.
fn split_header(text: &str) -> Result<(Option<Header>, usize)> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            offset += line.len();
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let is_header = !content.contains(';')
            && words[0].bytes().all(|b| b.is_ascii_digit())
            && words.iter().all(|w| {
                w.bytes().all(|b| b.is_ascii_digit())
                    || (w.as_bytes()[0].is_ascii_alphabetic()
                        && w.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_'))
            });
        if !is_header {
            return Ok((None, 0));
        }
        let counts: Vec<usize> = words
            .iter()
            .take_while(|w| w.bytes().all(|b| b.is_ascii_digit()))
            .map(|w| w.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| syntax(text, offset, "header count out of range"))?;
        let names: Vec<String> = words[counts.len()..].iter().map(|w| w.to_string()).collect();
        if counts.len() > 2 || names.iter().any(|n| n.bytes().all(|b| b.is_ascii_digit())) {
            return Err(syntax(text, offset, "header must be 'n [m] [names...]'"));
        }
        let header = Header { equations: counts[0], variables: counts.get(1).copied(), names };
        return Ok((Some(header), offset + line.len()));
    }
    Ok((None, 0))
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    vars: IndexMap<String, usize>,
    locked: bool,
    max_vars: Option<usize>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.text, self.offset(), message)
    }

    fn system(&mut self) -> Result<Vec<Acc>> {
        let mut polys = Vec::new();
        while *self.peek() != Tok::Eof {
            let p = self.expr()?;
            if *self.peek() != Tok::Semi {
                return Err(self.err("expected ';' after polynomial"));
            }
            self.next();
            polys.push(p);
        }
        Ok(polys)
    }

    fn expr(&mut self) -> Result<Acc> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                _ => return Ok(acc),
            };
            self.next();
            let t = self.term()?;
            acc = acc.add(t, sign);
        }
    }

    fn term(&mut self) -> Result<Acc> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            let f = self.unary()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Acc> {
        match self.peek() {
            Tok::Plus => {
                self.next();
                self.unary()
            }
            Tok::Minus => {
                self.next();
                Ok(self.unary()?.neg())
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Acc> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let at = self.offset();
        match self.next().tok {
            Tok::Number(s) if s.bytes().all(|b| b.is_ascii_digit()) => {
                let n: u32 = s.parse().map_err(|_| syntax(self.text, at, "exponent too large"))?;
                Ok(base.pow(n))
            }
            _ => Err(syntax(self.text, at, "expected a nonnegative integer exponent")),
        }
    }

    fn literal(&self, s: &str, at: usize) -> Result<QuadDouble> {
        parse_decimal(s)
            .map(|r| rational_to_qd(&r))
            .ok_or_else(|| syntax(self.text, at, format!("malformed number '{s}'")))
    }

    fn atom(&mut self) -> Result<Acc> {
        let at = self.offset();
        match self.next().tok {
            Tok::Number(s) => {
                let v = self.literal(&s, at)?;
                Ok(Acc::constant(Complex::new(v, QuadDouble::ZERO)))
            }
            Tok::Imaginary(s) => {
                let v = self.literal(&s, at)?;
                Ok(Acc::constant(Complex::new(QuadDouble::ZERO, v)))
            }
            Tok::Ident(name) => self.ident(name, at),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err("expected ')'"));
                }
                self.next();
                Ok(inner)
            }
            Tok::Eof => Err(syntax(self.text, at, "unexpected end of input")),
            other => Err(syntax(self.text, at, format!("unexpected {}", describe(&other)))),
        }
    }

    fn ident(&mut self, name: String, at: usize) -> Result<Acc> {
        if let Some(&k) = self.vars.get(&name) {
            return Ok(Acc::var(k));
        }
        if matches!(name.as_str(), "i" | "I" | "j") {
            return Ok(Acc::constant(Complex::new(QuadDouble::ZERO, QuadDouble::ONE)));
        }
        let over_count = self.max_vars.is_some_and(|m| self.vars.len() >= m);
        if self.locked || over_count {
            let (line, column) = line_col(self.text, at);
            return Err(Error::UndeclaredVariable { name, line, column });
        }
        let k = self.vars.len();
        self.vars.insert(name, k);
        Ok(Acc::var(k))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Number(s) | Tok::Imaginary(s) | Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Semi => "';'".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a system. Without a header, variables are numbered in order of
/// first appearance.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    let (header, start) = split_header(text)?;
    let mut vars = IndexMap::new();
    let mut locked = false;
    let mut max_vars = None;
    if let Some(h) = &header {
        let declared = h.variables.unwrap_or(h.equations);
        if !h.names.is_empty() {
            if h.names.len() != declared {
                return Err(Error::HeaderMismatch(format!(
                    "header declares {declared} variables but names {}",
                    h.names.len()
                )));
            }
            for n in &h.names {
                if vars.contains_key(n) {
                    return Err(Error::HeaderMismatch(format!("variable '{n}' named twice")));
                }
                let k = vars.len();
                vars.insert(n.clone(), k);
            }
            locked = true;
        }
        max_vars = Some(declared);
    }
    let tokens = tokenize(text, start)?;
    let mut parser = Parser { text, tokens, pos: 0, vars, locked, max_vars };
    let accs = parser.system()?;
    let varnames: Vec<String> = parser.vars.keys().cloned().collect();
    if let Some(h) = &header {
        if accs.len() != h.equations {
            return Err(Error::HeaderMismatch(format!(
                "header declares {} equations, found {}",
                h.equations,
                accs.len()
            )));
        }
        let declared = h.variables.unwrap_or(h.equations);
        if varnames.len() != declared {
            return Err(Error::HeaderMismatch(format!(
                "header declares {declared} variables, found {}",
                varnames.len()
            )));
        }
    }
    let nvars = varnames.len();
    let polys = accs.into_iter().map(|a| a.into_polynomial(nvars)).collect();
    PolySystem::new(polys, varnames)
}
