//! Matrix expressions for cross-section operators.
//!
//! A matrix is written row by row: entries separated by `,`, rows by `;`.
//! Each entry is a sum of products of numbers (`2`, `-0.5`, `1/3`), `pi`,
//! the imaginary unit `i`, powers of `x` and powers of `d = d/dx`. In a
//! product the `d` factors come last, so `x*d` is `x d/dx`.

use std::collections::BTreeMap;

use conebvp::fuchs::{Coeff, CrossOp, XPoly};
use conebvp::scalar::C64;
use conebvp::Mat;

/// Error inside an expression, with the byte offset into it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl ExprError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ExprError { offset, message: message.into() }
    }
}

/// Monomials `coefficient * x^p * d^k`, keyed by `(k, p)`.
pub type Entry = BTreeMap<(usize, usize), C64>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let v = s[start..i].parse::<f64>().map_err(|_| ExprError::new(start, format!("bad number `{}`", &s[start..i])))?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && b[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^,;".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ExprError::new(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    allow_ops: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn exponent(&mut self) -> Result<usize, ExprError> {
        if !self.eat('^') {
            return Ok(1);
        }
        let at = self.offset();
        match self.peek() {
            Some(&Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 => {
                self.pos += 1;
                Ok(v as usize)
            }
            _ => Err(ExprError::new(at, "expected a non-negative integer exponent")),
        }
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        let at = self.offset();
        let Some(&Tok::Num(v)) = self.peek() else {
            return Err(ExprError::new(at, "expected a number"));
        };
        self.pos += 1;
        if self.eat('/') {
            let at = self.offset();
            let den = self.number()?;
            if den == 0.0 {
                return Err(ExprError::new(at, "division by zero"));
            }
            return Ok(v / den);
        }
        Ok(v)
    }

    /// `factor ('*' factor)*`.
    fn product(&mut self, sign: f64) -> Result<((usize, usize), C64), ExprError> {
        let mut coeff = C64::new(sign, 0.0);
        let (mut k, mut p) = (0, 0);
        loop {
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Num(_)) => coeff *= self.number()?,
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    match name.as_str() {
                        "pi" => coeff *= std::f64::consts::PI,
                        "i" => coeff *= C64::new(0.0, 1.0),
                        "x" | "d" if !self.allow_ops => {
                            return Err(ExprError::new(at, format!("`{name}` is not allowed in a constant matrix")))
                        }
                        "x" if k > 0 => return Err(ExprError::new(at, "`x` must precede every `d` factor")),
                        "x" => p += self.exponent()?,
                        "d" => k += self.exponent()?,
                        _ => return Err(ExprError::new(at, format!("unknown name `{name}`"))),
                    }
                }
                _ => return Err(ExprError::new(at, "expected a number, `pi`, `i`, `x` or `d`")),
            }
            if !self.eat('*') {
                return Ok(((k, p), coeff));
            }
        }
    }

    fn entry(&mut self) -> Result<Entry, ExprError> {
        let mut out = Entry::new();
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (key, c) = self.product(sign)?;
            *out.entry(key).or_insert(C64::new(0.0, 0.0)) += c;
            sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                break;
            };
        }
        out.retain(|_, c| *c != C64::new(0.0, 0.0));
        Ok(out)
    }
}

/// Parses a matrix expression into its entries, row major.
pub fn parse_matrix(s: &str, allow_ops: bool) -> Result<Vec<Vec<Entry>>, ExprError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ExprError::new(0, "empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0, end: s.len(), allow_ops };
    let mut rows = vec![vec![p.entry()?]];
    while p.pos < toks.len() {
        if p.eat(',') {
            rows.last_mut().unwrap().push(p.entry()?);
        } else if p.eat(';') {
            rows.push(vec![p.entry()?]);
        } else {
            return Err(ExprError::new(p.offset(), "expected `+`, `-`, `*`, `,` or `;`"));
        }
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(ExprError::new(0, "rows have different lengths"));
    }
    Ok(rows)
}

/// Cross-section operator of shape `rows x cols` from a matrix expression.
pub fn cross_op(s: &str, rows: usize, cols: usize) -> Result<CrossOp<C64>, ExprError> {
    let m = parse_matrix(s, true)?;
    check_shape(&m, rows, cols)?;
    let max_k = m.iter().flatten().flat_map(|e| e.keys().map(|k| k.0)).max().unwrap_or(0);
    let max_p = m.iter().flatten().flat_map(|e| e.keys().map(|k| k.1)).max().unwrap_or(0);
    let terms = (0..=max_k)
        .map(|k| {
            let coeffs = (0..=max_p)
                .map(|p| Mat::from_fn(rows, cols, |r, c| m[r][c].get(&(k, p)).copied().unwrap_or_default()))
                .collect();
            XPoly::from_coeffs(rows, cols, coeffs)
        })
        .collect();
    Ok(CrossOp::from_terms(rows, cols, terms))
}

/// Constant matrix of shape `rows x cols`.
pub fn constant_matrix(s: &str, rows: usize, cols: usize) -> Result<Mat<C64>, ExprError> {
    let m = parse_matrix(s, false)?;
    check_shape(&m, rows, cols)?;
    Ok(Mat::from_fn(rows, cols, |r, c| m[r][c].get(&(0, 0)).copied().unwrap_or_default()))
}

/// A single scalar such as `pi` or `3/2`.
pub fn scalar(s: &str) -> Result<f64, ExprError> {
    let m = constant_matrix(s, 1, 1)?;
    let v = m[(0, 0)];
    if v.im != 0.0 {
        return Err(ExprError::new(0, "expected a real number"));
    }
    Ok(v.re)
}

fn check_shape(m: &[Vec<Entry>], rows: usize, cols: usize) -> Result<(), ExprError> {
    if m.len() != rows || m[0].len() != cols {
        return Err(ExprError::new(0, format!("expected a {rows}x{cols} matrix, found {}x{}", m.len(), m[0].len())));
    }
    Ok(())
}

fn push_real(out: &mut Vec<String>, v: f64, unit: &str, monomial: &str) {
    if v == 0.0 {
        return;
    }
    let mut factors = Vec::new();
    let bare = v.abs() == 1.0 && !(unit.is_empty() && monomial.is_empty());
    if !bare {
        factors.push(format!("{}", v.abs()));
    }
    factors.extend([unit, monomial].into_iter().filter(|f| !f.is_empty()).map(str::to_string));
    let sign = if v < 0.0 { "- " } else { "+ " };
    out.push(format!("{sign}{}", factors.join("*")));
}

/// Inverse of [`parse_matrix`] for one entry.
pub fn format_entry(e: &Entry) -> String {
    let mut parts = Vec::new();
    for (&(k, p), c) in e {
        let mut mono = Vec::new();
        match p {
            0 => {}
            1 => mono.push("x".to_string()),
            _ => mono.push(format!("x^{p}")),
        }
        match k {
            0 => {}
            1 => mono.push("d".to_string()),
            _ => mono.push(format!("d^{k}")),
        }
        let mono = mono.join("*");
        push_real(&mut parts, c.re, "", &mono);
        push_real(&mut parts, c.im, "i", &mono);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let joined = parts.join(" ");
    match joined.strip_prefix("+ ") {
        Some(rest) => rest.to_string(),
        None => format!("-{}", &joined[2..]),
    }
}

/// Expression for a cross-section operator, dropping coefficients below `tol`.
pub fn format_cross_op(op: &CrossOp<C64>, tol: f64) -> String {
    let (rows, cols) = op.shape();
    format_rows(rows, cols, |r, c| {
        let mut e = Entry::new();
        for (k, poly) in op.terms().iter().enumerate() {
            for (p, m) in poly.coeffs().iter().enumerate() {
                let v = m[(r, c)];
                if v.norm() > tol {
                    e.insert((k, p), v);
                }
            }
        }
        e
    })
}

/// Expression for a constant matrix.
pub fn format_matrix(m: &Mat<C64>, tol: f64) -> String {
    format_rows(m.rows(), m.cols(), |r, c| {
        let v = m[(r, c)];
        let mut e = Entry::new();
        if v.norm() > tol {
            e.insert((0, 0), v);
        }
        e
    })
}

fn format_rows(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> Entry) -> String {
    (0..rows)
        .map(|r| (0..cols).map(|c| format_entry(&entry(r, c))).collect::<Vec<_>>().join(", "))
        .collect::<Vec<_>>()
        .join("; ")
}
