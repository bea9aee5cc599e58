use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{falling_factorial, format_rational, parse_rational, Rational};

use super::PolyError;

/// An exponent vector; also used as a derivative multi-index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self − other`, or `None` if some exponent would go
    /// negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Self)
    }

    /// Every `β ≤ self` componentwise together with `Π C(selfᵢ, βᵢ)`.
    pub fn sub_indices(&self) -> Vec<(Monomial, Rational)> {
        let mut out = vec![(Vec::with_capacity(self.0.len()), Rational::one())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for (prefix, c) in &out {
                for b in 0..=a {
                    let mut p = prefix.clone();
                    p.push(b);
                    let binom = Rational::from_integer(crate::rational::binomial(a, b));
                    next.push((p, c * binom));
                }
            }
            out = next;
        }
        out.into_iter().map(|(e, c)| (Monomial(e), c)).collect()
    }
}

/// A multivariate polynomial over ℚ: sparse map from exponent vectors to
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_monomial(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_monomial(Monomial::var(nvars, i), Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    /// `∂/∂xᵢ`.
    pub fn derivative(&self, i: usize) -> Self {
        self.derivative_multi(&Monomial::var(self.nvars, i))
    }

    /// `∂^α` for a multi-index α.
    pub fn derivative_multi(&self, alpha: &Monomial) -> Self {
        if alpha.is_one() {
            return self.clone();
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let Some(rest) = m.checked_sub(alpha) else { continue };
            let factor = m
                .exps()
                .iter()
                .zip(alpha.exps())
                .fold(num_bigint::BigInt::one(), |acc, (&e, &a)| acc * falling_factorial(e, a));
            out.add_term(rest, c * Rational::from_integer(factor));
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable sets");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable sets");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// ℚ[x₁,…,xₙ], optionally modulo monomial nilpotency relations `xᵢ^mᵢ = 0`.
///
/// The algebra object owns the ring operations that depend on the
/// relations (multiplication, parsing, formatting, monomial grids). Every
/// product is reduced immediately, so polynomials are always canonical and
/// equality is an exact zero test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyAlgebra {
    vars: Vec<String>,
    nilpotency: Vec<Option<u32>>,
}

impl PolyAlgebra {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Self, PolyError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(PolyError::NoVariables);
        }
        for (i, v) in vars.iter().enumerate() {
            let valid =
                v.chars().next().is_some_and(char::is_alphabetic) && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(PolyError::InvalidVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        let n = vars.len();
        Ok(Self { vars, nilpotency: vec![None; n] })
    }

    /// Adds the relation `var^order = 0`.
    pub fn with_nilpotent(mut self, var: &str, order: u32) -> Result<Self, PolyError> {
        let i = self.var_index(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        if order < 2 {
            return Err(PolyError::NilpotencyOrder { var: var.to_string(), order });
        }
        self.nilpotency[i] = Some(order);
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn nilpotency(&self, i: usize) -> Option<u32> {
        self.nilpotency[i]
    }

    /// True when some variable is nilpotent. Monomial relations are the only
    /// relations supported, so the algebra is reduced exactly when this is
    /// false.
    pub fn has_nilpotents(&self) -> bool {
        self.nilpotency.iter().any(Option::is_some)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        Polynomial::constant(self.nvars(), c)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.reduce(Polynomial::var(self.nvars(), i))
    }

    pub fn monomial(&self, m: Monomial) -> Polynomial {
        self.reduce(Polynomial::from_monomial(m, Rational::one()))
    }

    pub fn is_killed(&self, m: &Monomial) -> bool {
        m.exps().iter().zip(&self.nilpotency).any(|(e, n)| n.is_some_and(|n| *e >= n))
    }

    /// Drops monomials killed by the nilpotency relations.
    pub fn reduce(&self, mut p: Polynomial) -> Polynomial {
        assert_eq!(p.nvars, self.nvars(), "polynomial over a different variable set");
        if self.has_nilpotents() {
            p.terms.retain(|m, _| !self.is_killed(m));
        }
        p
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        assert_eq!(a.nvars, self.nvars());
        assert_eq!(b.nvars, self.nvars());
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                if !self.is_killed(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Polynomial, k: u32) -> Polynomial {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// All surviving monomials of total degree ≤ `degree`, ordered by degree
    /// and then lexicographically by exponent vector.
    pub fn monomials_up_to(&self, degree: u32) -> Vec<Monomial> {
        let n = self.nvars();
        let mut out = Vec::new();
        for d in 0..=degree {
            let mut level = Vec::new();
            compositions(n, d, &mut Vec::with_capacity(n), &mut level);
            level.sort();
            out.extend(level.into_iter().map(Monomial).filter(|m| !self.is_killed(m)));
        }
        out
    }

    /// The monomial grid as polynomials.
    pub fn grid(&self, degree: u32) -> Vec<Polynomial> {
        self.monomials_up_to(degree).into_iter().map(|m| Polynomial::from_monomial(m, Rational::one())).collect()
    }

    /// Parses sums like `"3/2 x^2 y - y + 1"`; juxtaposition and `*` both
    /// multiply, parentheses group.
    pub fn parse(&self, text: &str) -> Result<Polynomial, PolyError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { alg: self, tokens, pos: 0, text };
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }

    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            if vars.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push(' ');
                }
                out.push_str(&vars.join(" "));
            }
        }
        out
    }
}

impl fmt::Display for PolyAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.join(","))?;
        let rels: Vec<String> = self
            .nilpotency
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.map(|n| format!("{}^{}", self.vars[i], n)))
            .collect();
        if !rels.is_empty() {
            write!(f, "/({})", rels.join(","))?;
        }
        Ok(())
    }
}

fn compositions(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        let mut e = prefix.clone();
        e.push(d);
        out.push(e);
        return;
    }
    for k in 0..=d {
        prefix.push(k);
        compositions(n, d - k, prefix, out);
        prefix.pop();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, PolyError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' | '-' | '*' | '^' | '(' | ')' => {
                out.push((
                    pos,
                    match ch {
                        '+' => Token::Plus,
                        '-' => Token::Minus,
                        '*' => Token::Star,
                        '^' => Token::Caret,
                        '(' => Token::LParen,
                        _ => Token::RParen,
                    },
                ));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '/') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().map(|(_, c)| c).collect();
                let value =
                    parse_rational(&lit).map_err(|_| PolyError::Parse { pos, msg: format!("bad number {lit:?}") })?;
                out.push((pos, Token::Number(value)));
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                out.push((pos, Token::Ident(chars[start..i].iter().map(|(_, c)| c).collect())));
            }
            _ => return Err(PolyError::Parse { pos, msg: format!("unexpected character {ch:?}") }),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a PolyAlgebra,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self, msg: &str) -> PolyError {
        let pos = self.tokens.get(self.pos).map_or(self.text.len(), |(p, _)| *p);
        PolyError::Parse { pos, msg: msg.to_string() }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.signed_term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus | Token::Minus => {
                    let t = self.signed_term()?;
                    acc = &acc + &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn signed_term(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        while let Some(t @ (Token::Plus | Token::Minus)) = self.peek() {
            if *t == Token::Minus {
                negate = !negate;
            }
            self.pos += 1;
        }
        let t = self.term()?;
        Ok(if negate { -&t } else { t })
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.alg.mul(&acc, &f);
                }
                Some(Token::Number(_) | Token::Ident(_) | Token::LParen) => {
                    let f = self.power()?;
                    acc = self.alg.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
                Some(Token::Number(n)) if n.is_integer() && !n.is_negative() => {
                    self.pos += 1;
                    let k: u32 = n.to_integer().try_into().map_err(|_| self.error("exponent too large"))?;
                    return Ok(self.alg.pow(&base, k));
                }
                _ => return Err(self.error("expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Token::Number(n)) => {
                self.pos += 1;
                Ok(self.alg.constant(n))
            }
            Some(Token::Ident(name)) => {
                let i = self.alg.var_index(&name).ok_or_else(|| self.error(&format!("unknown variable {name:?}")))?;
                self.pos += 1;
                Ok(self.alg.var(i))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}
