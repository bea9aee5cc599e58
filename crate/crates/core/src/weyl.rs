//! The first Weyl algebra `A₁(ℚ)`, generated by `P`, `Q` with `PQ − QP = 1`,
//! stored in normal order `Σ c_{ij} QⁱPʲ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{SparseEchelon, SparseRow};
use crate::poly::polynomial::{tokenize, Token};
use crate::poly::{DiffOp, Monomial, PolyAlgebra, PolyError, Polynomial};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct WeylParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeylElement {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl WeylElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Rational::one())
    }

    pub fn q() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn p() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    /// `c QⁱPʲ`.
    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        Self::from_terms([((i, j), c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree in `P` and `Q`; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &other.terms {
                let cd = c * d;
                for (a, b, e) in normal_order(j, k) {
                    out.add_term((i + a, b + l), &cd * e);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Image under `P ↦ d/dt`, `Q ↦ t·` as an operator on `ℚ[t]`.
    pub fn to_diffop(&self) -> DiffOp {
        DiffOp::from_terms(
            1,
            self.terms.iter().map(|(&(i, j), c)| {
                (Monomial::new(vec![j]), Polynomial::from_monomial(Monomial::new(vec![i]), c.clone()))
            }),
        )
    }

    pub fn parse(text: &str) -> Result<Self, WeylParseError> {
        let tokens = tokenize(text).map_err(|e| match e {
            PolyError::Parse { pos, msg } => WeylParseError { pos, msg },
            other => WeylParseError { pos: 0, msg: other.to_string() },
        })?;
        let mut parser = Parser { tokens, pos: 0, len: text.len() };
        let out = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

/// `PʲQᵏ` in normal order, built by iterating `PᵇQ = QPᵇ + bPᵇ⁻¹`.
fn normal_order(j: u32, k: u32) -> Vec<(u32, u32, Rational)> {
    let mut cur: BTreeMap<(u32, u32), Rational> = BTreeMap::from([((0, j), Rational::one())]);
    for _ in 0..k {
        let mut next: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((a, b), c) in cur {
            *next.entry((a + 1, b)).or_insert_with(Rational::zero) += &c;
            if b > 0 {
                *next.entry((a, b - 1)).or_insert_with(Rational::zero) += c * int(i64::from(b));
            }
        }
        cur = next;
    }
    cur.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| (b.0 + b.1).cmp(&(a.0 + a.1)).then_with(|| b.cmp(a)));
        for (idx, (&(i, j), c)) in terms.into_iter().enumerate() {
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            for (name, e) in [("Q", i), ("P", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                f.write_str(&format_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{} ", format_rational(&mag))?;
                }
                f.write_str(&factors.join(" "))?;
            }
        }
        Ok(())
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self, msg: &str) -> WeylParseError {
        let pos = self.tokens.get(self.pos).map_or(self.len, |(p, _)| *p);
        WeylParseError { pos, msg: msg.to_string() }
    }

    fn expr(&mut self) -> Result<WeylElement, WeylParseError> {
        let mut acc = WeylElement::zero();
        loop {
            let mut negate = false;
            while let Some(t @ (Token::Plus | Token::Minus)) = self.peek() {
                if *t == Token::Minus {
                    negate = !negate;
                }
                self.pos += 1;
            }
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            if !matches!(self.peek(), Some(Token::Plus | Token::Minus)) {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement, WeylParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Token::Number(_) | Token::Ident(_) | Token::LParen) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<WeylElement, WeylParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Token::Number(n)) if n.is_integer() && !n.is_negative() => {
                self.pos += 1;
                let k: u32 = n.to_integer().try_into().map_err(|_| self.error("exponent too large"))?;
                Ok(base.pow(k))
            }
            _ => Err(self.error("expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<WeylElement, WeylParseError> {
        match self.peek().cloned() {
            Some(Token::Number(n)) => {
                self.pos += 1;
                Ok(WeylElement::monomial(0, 0, n))
            }
            Some(Token::Ident(name)) => {
                let out = match name.as_str() {
                    "Q" => WeylElement::q(),
                    "P" => WeylElement::p(),
                    _ => return Err(self.error(&format!("unknown generator {name:?}, expected P or Q"))),
                };
                self.pos += 1;
                Ok(out)
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
            _ => Err(self.error("expected a number, P, Q or '('")),
        }
    }
}

/// `[A₁,B₁][A₂,B₂]₀ − [A₁,B₁]₀[A₂,B₂]` for `[·,·]₀ = λ[·,·]`.
pub fn prop1_residual(
    lambda: &Rational,
    a1: &WeylElement,
    b1: &WeylElement,
    a2: &WeylElement,
    b2: &WeylElement,
) -> WeylElement {
    let c1 = a1.commutator(b1);
    let c2 = a2.commutator(b2);
    c1.mul(&c2.scale(lambda)).sub(&c1.scale(lambda).mul(&c2))
}

pub type Quadruple = [WeylElement; 4];

/// Residuals for each quadruple, in input order.
pub fn prop1_spotcheck(lambda: &Rational, quadruples: &[Quadruple]) -> Vec<WeylElement> {
    quadruples.iter().map(|[a1, b1, a2, b2]| prop1_residual(lambda, a1, b1, a2, b2)).collect()
}

/// Residuals of `[a, bc] = [a,b]c + b[a,c]` and `[ab, c] = a[b,c] + [a,c]b`
/// for the commutator.
pub fn commutator_leibniz_residuals(a: &WeylElement, b: &WeylElement, c: &WeylElement) -> (WeylElement, WeylElement) {
    let second = a.commutator(&b.mul(c)).sub(&a.commutator(b).mul(c)).sub(&b.mul(&a.commutator(c)));
    let first = a.mul(b).commutator(c).sub(&a.mul(&b.commutator(c))).sub(&a.commutator(c).mul(b));
    (second, first)
}

/// `ℚ[t]` for the representation `P ↦ d/dt`, `Q ↦ t·`.
pub fn representation_algebra() -> PolyAlgebra {
    PolyAlgebra::new(["t"]).expect("static algebra")
}

/// Outcome of the degree-truncated Leibniz solve on `A₁`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LeibnizProbe {
    pub in_degree: u32,
    pub out_degree: u32,
    pub unknowns: usize,
    pub constraints: usize,
    pub dimension: usize,
    pub contains_commutator: bool,
}

fn basis_up_to(d: u32) -> Vec<(u32, u32)> {
    (0..=d).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect()
}

/// Heuristic probe: brackets on monomials of degree ≤ `in_degree` with
/// values of degree ≤ `out_degree`, constrained by both Leibniz rules
/// whenever the product of the inner arguments stays inside the input
/// range. Truncation leaves boundary brackets unconstrained, so the
/// dimension is an upper-bound curiosity, not a classification.
pub fn truncated_leibniz_probe(in_degree: u32, out_degree: u32) -> LeibnizProbe {
    let inputs = basis_up_to(in_degree);
    let outputs = basis_up_to(out_degree);
    let m = inputs.len();
    let r = outputs.len();
    let in_index: BTreeMap<(u32, u32), usize> = inputs.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let out_index: BTreeMap<(u32, u32), usize> = outputs.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let unknowns = m * m * r;
    let var = |a: usize, b: usize, k: usize| (a * m + b) * r + k;
    let elem = |k: (u32, u32)| WeylElement::monomial(k.0, k.1, Rational::one());

    // Symbolic bracket value: map from output monomial of an arbitrary
    // product to a linear form in the unknowns.
    type Linear = BTreeMap<(u32, u32), BTreeMap<usize, Rational>>;
    let accumulate = |acc: &mut Linear, x: &WeylElement, unknown: usize, sign: &Rational| {
        for (i, j, c) in x.terms() {
            let row = acc.entry((i, j)).or_default();
            let e = row.entry(unknown).or_insert_with(Rational::zero);
            *e += c * sign;
        }
    };
    // [u, v] with u, v monomials of the input basis, multiplied on the left
    // by `left` and on the right by `right`.
    let bracket_term =
        |acc: &mut Linear, left: &WeylElement, u: usize, v: usize, right: &WeylElement, sign: &Rational| {
            for (k, out) in outputs.iter().enumerate() {
                let x = left.mul(&elem(*out)).mul(right);
                accumulate(acc, &x, var(u, v, k), sign);
            }
        };
    // The bracket of a monomial with a normal-ordered element of the input
    // range, expanded linearly.
    let expand =
        |acc: &mut Linear, first: Option<usize>, x: &WeylElement, second: Option<usize>, sign: &Rational| -> bool {
            for (i, j, c) in x.terms() {
                let Some(&idx) = in_index.get(&(i, j)) else { return false };
                let s = sign * c;
                let (u, v) = match (first, second) {
                    (Some(u), None) => (u, idx),
                    (None, Some(v)) => (idx, v),
                    _ => unreachable!(),
                };
                bracket_term(acc, &WeylElement::one(), u, v, &WeylElement::one(), &s);
            }
            true
        };

    let one = Rational::one();
    let minus = -Rational::one();
    let mut echelon = SparseEchelon::new(unknowns);
    let mut constraints = 0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let (ea, eb, ec) = (elem(inputs[a]), elem(inputs[b]), elem(inputs[c]));
                // [a, bc] − [a,b]c − b[a,c]
                let mut lin = Linear::new();
                if expand(&mut lin, Some(a), &eb.mul(&ec), None, &one) {
                    bracket_term(&mut lin, &WeylElement::one(), a, b, &ec, &minus);
                    bracket_term(&mut lin, &eb, a, c, &WeylElement::one(), &minus);
                    constraints += push_rows(&mut echelon, lin);
                }
                // [ab, c] − a[b,c] − [a,c]b
                let mut lin = Linear::new();
                if expand(&mut lin, None, &ea.mul(&eb), Some(c), &one) {
                    bracket_term(&mut lin, &ea, b, c, &WeylElement::one(), &minus);
                    bracket_term(&mut lin, &WeylElement::one(), a, c, &eb, &minus);
                    constraints += push_rows(&mut echelon, lin);
                }
            }
        }
    }
    let dimension = unknowns - echelon.rank();

    let mut commutator = vec![Rational::zero(); unknowns];
    let mut representable = true;
    for a in 0..m {
        for b in 0..m {
            for (i, j, c) in elem(inputs[a]).commutator(&elem(inputs[b])).terms() {
                match out_index.get(&(i, j)) {
                    Some(&k) => commutator[var(a, b, k)] = c.clone(),
                    None => representable = false,
                }
            }
        }
    }
    let contains_commutator = representable && {
        let nullspace = echelon.nullspace();
        let basis = crate::linalg::Subspace::span(unknowns, nullspace);
        basis.contains(&commutator)
    };
    LeibnizProbe { in_degree, out_degree, unknowns, constraints, dimension, contains_commutator }
}

fn push_rows(echelon: &mut SparseEchelon, lin: BTreeMap<(u32, u32), BTreeMap<usize, Rational>>) -> usize {
    let mut n = 0;
    for (_, row) in lin {
        let entries: Vec<(usize, Rational)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if let Some(r) = SparseRow::from_rationals(entries) {
            n += 1;
            echelon.push(r);
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, rat};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn w(s: &str) -> WeylElement {
        WeylElement::parse(s).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(WeylElement::p().mul(&WeylElement::q()), w("Q P + 1"));
        assert_eq!(WeylElement::q().mul(&WeylElement::q()), w("Q^2"));
        assert_eq!(w("P^2").mul(&WeylElement::q()), WeylElement::from_terms([((1, 2), int(1)), ((0, 1), int(2))]));
        let (alg, t3) = (representation_algebra(), Polynomial::from_monomial(Monomial::new(vec![3]), int(1)));
        let lhs = w("P^2").mul(&WeylElement::q()).to_diffop().apply(&alg, &t3);
        let rhs = w("P^2").to_diffop().apply(&alg, &WeylElement::q().to_diffop().apply(&alg, &t3));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, Polynomial::from_monomial(Monomial::new(vec![2]), int(12)));
    }

    #[test]
    fn commutator_examples() {
        let (p, q) = (WeylElement::p(), WeylElement::q());
        assert_eq!(p.commutator(&q), WeylElement::one());
        assert!(q.commutator(&w("Q^2")).is_zero());
        assert_eq!(w("P^2").commutator(&q), w("2 P"));
    }

    #[test]
    fn parse_and_format() {
        // Factors multiply in written order.
        assert_eq!(w("P Q"), w("Q P + 1"));
        assert_eq!(w("3/2 Q^2 P - P + 1").to_string(), "3/2 Q^2 P - P + 1");
        assert_eq!(w("(P + Q)^2"), w("Q^2 + 2 Q P + P^2 + 1"));
        assert_eq!(w("0").to_string(), "0");
        assert!(WeylElement::parse("X").is_err());
        assert!(WeylElement::parse("P +").is_err());
        assert!(WeylElement::parse("P^Q").is_err());
    }

    #[test]
    fn prop1_examples() {
        let (p, q) = (WeylElement::p(), WeylElement::q());
        assert!(prop1_residual(&int(1), &p, &q, &p, &q).is_zero());
        assert!(prop1_residual(&int(3), &w("P^2"), &q, &p, &w("Q^2")).is_zero());
        let quads = vec![[w("Q^3 + P"), w("Q P^2"), w("P^3 - 1/2 Q"), w("Q^2 P")]];
        assert!(prop1_spotcheck(&rat(-1, 2), &quads).iter().all(WeylElement::is_zero));
    }

    #[test]
    fn truncated_probe() {
        let probe = truncated_leibniz_probe(2, 2);
        assert_eq!(probe.unknowns, 6 * 6 * 6);
        assert!(probe.contains_commutator);
        assert!(probe.dimension >= 1);
        let wide = truncated_leibniz_probe(3, 3);
        assert!(!wide.contains_commutator, "[Q³, P³] leaves the output range");
    }

    fn closed_form(j: u32, k: u32) -> WeylElement {
        // PʲQᵏ = Σ_r r! C(j,r) C(k,r) Q^{k−r} P^{j−r}
        WeylElement::from_terms((0..=j.min(k)).map(|r| {
            let fact: BigInt = (1..=r).map(BigInt::from).product();
            ((k - r, j - r), Rational::from_integer(fact * binomial(j, r) * binomial(k, r)))
        }))
    }

    fn arb_weyl() -> impl Strategy<Value = WeylElement> {
        prop::collection::vec(((0u32..=3, 0u32..=3).prop_filter("deg", |(i, j)| i + j <= 3), -4i64..5, 1i64..3), 0..4)
            .prop_map(|t| WeylElement::from_terms(t.into_iter().map(|(k, n, d)| (k, rat(n, d)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn rewriting_matches_closed_form(j in 0u32..6, k in 0u32..6) {
            let got = WeylElement::monomial(0, j, int(1)).mul(&WeylElement::monomial(k, 0, int(1)));
            prop_assert_eq!(got, closed_form(j, k));
        }

        #[test]
        fn associative_and_unital(a in arb_weyl(), b in arb_weyl(), c in arb_weyl()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&WeylElement::one()), a.clone());
            prop_assert_eq!(WeylElement::one().mul(&a), a);
        }

        #[test]
        fn commutator_is_leibniz(a in arb_weyl(), b in arb_weyl(), c in arb_weyl()) {
            let (r1, r2) = commutator_leibniz_residuals(&a, &b, &c);
            prop_assert!(r1.is_zero() && r2.is_zero());
        }

        #[test]
        fn representation_intertwines(a in arb_weyl(), b in arb_weyl()) {
            let alg = representation_algebra();
            let ab = a.mul(&b).to_diffop();
            let (da, db) = (a.to_diffop(), b.to_diffop());
            for f in alg.grid(8) {
                prop_assert_eq!(ab.apply(&alg, &f), da.apply(&alg, &db.apply(&alg, &f)));
            }
        }

        #[test]
        fn display_parse_round_trip(a in arb_weyl()) {
            prop_assert_eq!(WeylElement::parse(&a.to_string()).unwrap(), a);
        }
    }
}
