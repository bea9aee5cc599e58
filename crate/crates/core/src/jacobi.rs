//! First-order brackets on polynomial algebras: derivations, skew
//! biderivations, Jacobi pairs `(Λ, Γ)` with
//! `[f, g] = Λ(f, g) + fΓ(g) − gΓ(f)`, and the residual scans that decide
//! whether a bilinear differential operator is a Loday bracket.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::poly::{BiDiffOp, DiffOp, Monomial, PolyAlgebra, PolyError, Polynomial};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JacobiError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("bracket has bi-order ({first},{second}), expected at most (1,1)")]
    OrderTooHigh { first: u32, second: u32 },
    #[error("bracket is not skew: D(f,g) + D(g,f) ≠ 0 at grid pair ({i},{j})")]
    NotSkew { i: usize, j: usize, residual: Polynomial },
    #[error("not a biderivation: {0}")]
    NotBiderivation(String),
    #[error("not a derivation: {0}")]
    NotDerivation(String),
    #[error("algebra has nilpotent variables")]
    NilpotentAlgebra,
    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
}

/// A derivation `Σ Γᵢ ∂ᵢ`, determined by its values on the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    images: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(images: Vec<Polynomial>) -> Result<Self, JacobiError> {
        let n = images.len();
        if n == 0 {
            return Err(JacobiError::InvalidPair("derivation over zero variables".into()));
        }
        if let Some(p) = images.iter().find(|p| p.nvars() != n) {
            return Err(PolyError::AlgebraMismatch { expected: n, found: p.nvars() }.into());
        }
        Ok(Self { images })
    }

    pub fn zero(nvars: usize) -> Self {
        Self { images: vec![Polynomial::zero(nvars); nvars] }
    }

    /// `∂/∂xᵢ`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut d = Self::zero(nvars);
        d.images[i] = Polynomial::one(nvars);
        d
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Polynomial::is_zero)
    }

    pub fn reduced(&self, alg: &PolyAlgebra) -> Self {
        Self { images: self.images.iter().map(|p| alg.reduce(p.clone())).collect() }
    }

    pub fn apply(&self, alg: &PolyAlgebra, f: &Polynomial) -> Polynomial {
        let mut out = alg.zero();
        for (i, c) in self.images.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &alg.mul(c, &f.derivative(i));
            }
        }
        out
    }

    pub fn to_diffop(&self) -> DiffOp {
        let n = self.nvars();
        DiffOp::from_terms(n, self.images.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }
}

/// A skew biderivation `Λ = Σ_{i<j} Λ^{ij} ∂ᵢ∧∂ⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiDerivation {
    nvars: usize,
    coeffs: BTreeMap<(usize, usize), Polynomial>,
}

impl BiDerivation {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, coeffs: BTreeMap::new() }
    }

    /// `∂ᵢ∧∂ⱼ`.
    pub fn basic(nvars: usize, i: usize, j: usize) -> Self {
        let mut b = Self::zero(nvars);
        b.add(i, j, Polynomial::one(nvars)).expect("distinct indices");
        b
    }

    /// Adds `c·∂ᵢ∧∂ⱼ`; `i > j` is stored as `−c·∂ⱼ∧∂ᵢ`.
    pub fn add(&mut self, i: usize, j: usize, c: Polynomial) -> Result<(), JacobiError> {
        if i == j {
            return Err(JacobiError::InvalidPair(format!("∂{i}∧∂{j} has repeated index")));
        }
        if i >= self.nvars || j >= self.nvars {
            return Err(JacobiError::InvalidPair(format!("index out of range in ({i},{j})")));
        }
        if c.nvars() != self.nvars {
            return Err(PolyError::AlgebraMismatch { expected: self.nvars, found: c.nvars() }.into());
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -&c) };
        let sum = match self.coeffs.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(key, sum);
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Λ^{ij}`, antisymmetric in `(i, j)`.
    pub fn coeff(&self, i: usize, j: usize) -> Polynomial {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
            }
            std::cmp::Ordering::Greater => -&self.coeff(j, i),
            std::cmp::Ordering::Equal => Polynomial::zero(self.nvars),
        }
    }

    /// Nonzero `Λ^{ij}` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn reduced(&self, alg: &PolyAlgebra) -> Self {
        let mut out = Self::zero(self.nvars);
        for (&(i, j), c) in &self.coeffs {
            out.add(i, j, alg.reduce(c.clone())).expect("valid entry");
        }
        out
    }

    pub fn apply(&self, alg: &PolyAlgebra, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = alg.zero();
        for (&(i, j), c) in &self.coeffs {
            let w = &alg.mul(&f.derivative(i), &g.derivative(j)) - &alg.mul(&f.derivative(j), &g.derivative(i));
            out = &out + &alg.mul(c, &w);
        }
        out
    }

    pub fn to_bidiff(&self) -> BiDiffOp {
        let n = self.nvars;
        let mut terms = Vec::new();
        for (&(i, j), c) in &self.coeffs {
            let (ei, ej) = (Monomial::var(n, i), Monomial::var(n, j));
            terms.push(((ei.clone(), ej.clone()), c.clone()));
            terms.push(((ej, ei), -c));
        }
        BiDiffOp::from_terms(n, terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiPair {
    pub lambda: BiDerivation,
    pub gamma: Derivation,
}

impl JacobiPair {
    pub fn new(lambda: BiDerivation, gamma: Derivation) -> Result<Self, JacobiError> {
        if lambda.nvars() != gamma.nvars() {
            return Err(PolyError::AlgebraMismatch { expected: lambda.nvars(), found: gamma.nvars() }.into());
        }
        Ok(Self { lambda, gamma })
    }

    pub fn nvars(&self) -> usize {
        self.lambda.nvars()
    }

    /// `[f, g] = Λ(f, g) + fΓ(g) − gΓ(f)` as a bidifferential operator.
    pub fn reconstruct(&self) -> BiDiffOp {
        let n = self.nvars();
        let one = Monomial::one(n);
        let mut terms = Vec::new();
        for (i, c) in self.gamma.images().iter().enumerate() {
            let ei = Monomial::var(n, i);
            terms.push(((one.clone(), ei.clone()), c.clone()));
            terms.push(((ei, one.clone()), -c));
        }
        self.lambda.to_bidiff().add(&BiDiffOp::from_terms(n, terms))
    }

    pub fn reduced(&self, alg: &PolyAlgebra) -> Self {
        Self { lambda: self.lambda.reduced(alg), gamma: self.gamma.reduced(alg) }
    }

    pub fn from_json_value(alg: &PolyAlgebra, value: Value) -> Result<Self, JacobiError> {
        let wire: PairWire = serde_json::from_value(value).map_err(|e| PolyError::Format(e.to_string()))?;
        let n = alg.nvars();
        let resolve = |v: &VarRef| -> Result<usize, JacobiError> {
            match v {
                VarRef::Index(i) if *i < n => Ok(*i),
                VarRef::Index(i) => Err(JacobiError::InvalidPair(format!("variable index {i} out of range"))),
                VarRef::Name(s) => alg.var_index(s).ok_or_else(|| PolyError::UnknownVariable(s.clone()).into()),
            }
        };
        let mut lambda = BiDerivation::zero(n);
        for t in &wire.lambda {
            lambda.add(resolve(&t.vars[0])?, resolve(&t.vars[1])?, alg.parse(&t.coeff)?)?;
        }
        let mut gamma = Derivation::zero(n);
        for (name, text) in &wire.gamma {
            let i = resolve(&VarRef::Name(name.clone()))?;
            gamma.images[i] = alg.parse(text)?;
        }
        Self::new(lambda, gamma)
    }

    pub fn to_json_value(&self, alg: &PolyAlgebra) -> Value {
        let names = alg.var_names();
        let wire = PairWire {
            lambda: self
                .lambda
                .entries()
                .map(|(i, j, c)| LambdaTermWire {
                    vars: [VarRef::Name(names[i].clone()), VarRef::Name(names[j].clone())],
                    coeff: alg.format(c),
                })
                .collect(),
            gamma: self
                .gamma
                .images()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (names[i].clone(), alg.format(c)))
                .collect(),
        };
        serde_json::to_value(wire).expect("serializable")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum VarRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaTermWire {
    vars: [VarRef; 2],
    coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairWire {
    #[serde(default)]
    lambda: Vec<LambdaTermWire>,
    #[serde(default)]
    gamma: BTreeMap<String, String>,
}

/// A nonzero residual at grid points, identified by their indices in
/// [`PolyAlgebra::grid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridViolation {
    pub check: &'static str,
    pub indices: Vec<usize>,
    pub residual: Polynomial,
}

/// `[f,[g,h]] − [[f,g],h] − [g,[f,h]]`.
pub fn loday_jacobi_residual(
    alg: &PolyAlgebra,
    d: &BiDiffOp,
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
) -> Polynomial {
    let b = |u: &Polynomial, v: &Polynomial| d.apply(alg, u, v);
    &(&b(f, &b(g, h)) - &b(&b(f, g), h)) - &b(g, &b(f, h))
}

fn triple(m: usize, t: usize) -> (usize, usize, usize) {
    (t / (m * m), (t / m) % m, t % m)
}

/// Every nonzero Loday–Jacobi residual over ordered grid triples, in
/// lexicographic index order.
pub fn jacobi_violations(alg: &PolyAlgebra, d: &BiDiffOp, degree: u32) -> Vec<GridViolation> {
    let grid = alg.grid(degree);
    let m = grid.len();
    (0..m * m * m)
        .into_par_iter()
        .filter_map(|t| {
            let (i, j, k) = triple(m, t);
            let r = loday_jacobi_residual(alg, d, &grid[i], &grid[j], &grid[k]);
            (!r.is_zero()).then(|| GridViolation { check: "jacobi", indices: vec![i, j, k], residual: r })
        })
        .collect()
}

/// The lexicographically first nonzero Loday–Jacobi residual.
pub fn first_jacobi_violation(alg: &PolyAlgebra, d: &BiDiffOp, degree: u32) -> Option<GridViolation> {
    let grid = alg.grid(degree);
    let m = grid.len();
    (0..m * m * m).into_par_iter().find_map_first(|t| {
        let (i, j, k) = triple(m, t);
        let r = loday_jacobi_residual(alg, d, &grid[i], &grid[j], &grid[k]);
        (!r.is_zero()).then(|| GridViolation { check: "jacobi", indices: vec![i, j, k], residual: r })
    })
}

fn ensure_first_order(alg: &PolyAlgebra, d: &BiDiffOp) -> Result<(), JacobiError> {
    let (first, second) = d.structural_bi_order(alg);
    if first > 1 || second > 1 {
        return Err(JacobiError::OrderTooHigh { first, second });
    }
    Ok(())
}

/// Residuals of the first-order Leibniz identities
/// `[x,yz] = y[x,z] + [x,y]z − yz[x,1]` and its mirror
/// `[yz,x] = y[z,x] + [y,x]z − yz[1,x]` over ordered grid triples.
pub fn generalized_leibniz_residuals(
    alg: &PolyAlgebra,
    d: &BiDiffOp,
    degree: u32,
) -> Result<Vec<GridViolation>, JacobiError> {
    ensure_first_order(alg, d)?;
    let grid = alg.grid(degree);
    let m = grid.len();
    let one = alg.one();
    let b = |u: &Polynomial, v: &Polynomial| d.apply(alg, u, v);
    let x1: Vec<Polynomial> = grid.iter().map(|x| b(x, &one)).collect();
    let one_x: Vec<Polynomial> = grid.iter().map(|x| b(&one, x)).collect();
    Ok((0..m * m * m)
        .into_par_iter()
        .flat_map_iter(|t| {
            let (i, j, k) = triple(m, t);
            let (x, y, z) = (&grid[i], &grid[j], &grid[k]);
            let yz = alg.mul(y, z);
            let left = &(&b(x, &yz) - &alg.mul(y, &b(x, z))) - &alg.mul(&b(x, y), z);
            let left = &left + &alg.mul(&yz, &x1[i]);
            let right = &(&b(&yz, x) - &alg.mul(y, &b(z, x))) - &alg.mul(&b(y, x), z);
            let right = &right + &alg.mul(&yz, &one_x[i]);
            [("leibniz-second", left), ("leibniz-first", right)]
                .into_iter()
                .filter(|(_, r)| !r.is_zero())
                .map(move |(check, residual)| GridViolation { check, indices: vec![i, j, k], residual })
        })
        .collect())
}

/// `L_x(y) = [x,y] − [x,1]y` and `R_x(y) = [y,x] − [1,x]y`, both checked to
/// be derivations.
pub fn left_right_ops(alg: &PolyAlgebra, d: &BiDiffOp, x: &Polynomial) -> Result<(DiffOp, DiffOp), JacobiError> {
    ensure_first_order(alg, d)?;
    let one = alg.one();
    let l = d.fix_first(alg, x).sub(&DiffOp::multiplication(d.apply(alg, x, &one)));
    let r = d.fix_second(alg, x).sub(&DiffOp::multiplication(d.apply(alg, &one, x)));
    for (name, op) in [("L", &l), ("R", &r)] {
        let (_, scalar) = op
            .first_order_decompose(alg)
            .map_err(|_| JacobiError::NotDerivation(format!("{name}_x has order above 1")))?;
        if !scalar.is_zero() {
            return Err(JacobiError::NotDerivation(format!("{name}_x(1) = {}", alg.format(&scalar))));
        }
    }
    Ok((l.reduced(alg), r.reduced(alg)))
}

/// Recovers `(Λ, Γ)` from a skew first-order bracket:
/// `Γ(f) = D(1, f)` and `Λ(f, g) = D(f, g) − fD(1, g) + gD(1, f)`.
pub fn extract_pair(alg: &PolyAlgebra, d: &BiDiffOp, degree: u32) -> Result<JacobiPair, JacobiError> {
    if alg.has_nilpotents() {
        return Err(JacobiError::NilpotentAlgebra);
    }
    if d.nvars() != alg.nvars() {
        return Err(PolyError::AlgebraMismatch { expected: alg.nvars(), found: d.nvars() }.into());
    }
    ensure_first_order(alg, d)?;
    if let Some((i, j, residual)) = d.skew_residuals(alg, degree).into_iter().next() {
        return Err(JacobiError::NotSkew { i, j, residual });
    }
    let n = alg.nvars();
    let one = alg.one();
    let gens: Vec<Polynomial> = (0..n).map(|i| alg.var(i)).collect();
    let gamma = Derivation::new(gens.iter().map(|x| d.apply(alg, &one, x)).collect())?;
    let mut lambda = BiDerivation::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = &(&d.apply(alg, &gens[i], &gens[j]) - &alg.mul(&gens[i], &gamma.images()[j]))
                + &alg.mul(&gens[j], &gamma.images()[i]);
            lambda.add(i, j, c)?;
        }
    }
    let pair = JacobiPair::new(lambda, gamma)?;
    if pair.reconstruct() != d.reduced(alg) {
        return Err(JacobiError::NotBiderivation(
            "D differs from Λ(f,g) + fΓ(g) − gΓ(f) built from its own values".into(),
        ));
    }
    Ok(pair)
}

/// True iff adding the symmetric first-order perturbation `s` to the bracket
/// of `base` breaks the Loday–Jacobi identity somewhere on the grid.
pub fn skew_emergence_test(
    alg: &PolyAlgebra,
    base: &JacobiPair,
    s: &BiDiffOp,
    degree: u32,
) -> Result<bool, JacobiError> {
    if alg.has_nilpotents() {
        return Err(JacobiError::NilpotentAlgebra);
    }
    let s = s.reduced(alg);
    if s.is_zero() {
        return Err(JacobiError::InvalidPerturbation("perturbation is zero".into()));
    }
    if !s.is_symmetric(alg) {
        return Err(JacobiError::InvalidPerturbation("perturbation is not symmetric".into()));
    }
    ensure_first_order(alg, &s)?;
    let bracket = base.reconstruct().add(&s);
    Ok(first_jacobi_violation(alg, &bracket, degree).is_some())
}

/// `(u, v) ↦ S(u, v) + S(v, u)` scaled by one half.
pub fn symmetrize(d: &BiDiffOp) -> BiDiffOp {
    d.add(&d.transpose()).scale(&(Rational::one() / Rational::from_integer(2.into())))
}
