//! Candidate brackets on an [`AlgebraSpec`] and their residuals.
//!
//! A [`BilinearOp`] is a rank-3 tensor `[eᵢ, eⱼ]₀ = Σₖ bᵢⱼᵏ eₖ`. Because every
//! identity checked here is multilinear, checking it on basis tuples is the
//! same as checking it everywhere; all scans below therefore run over basis
//! indices in lexicographic order and report witnesses in that order.

use num_traits::{One, Zero};
use rayon::prelude::*;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, AlgebraLoadError, AlgebraSpec, AlgebraWire, Element, RationalLiteral, Side};
use crate::linalg::{SparseEchelon, SparseRow};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("tensor index ({i},{j},{k}) out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("bracket violates the Leibniz rule")]
    LeibnizViolated,
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

#[derive(Debug, Clone)]
pub struct BilinearOp<'a> {
    algebra: &'a AlgebraSpec,
    /// `entries[i * dim + j]` is the sparse expansion of `[eᵢ, eⱼ]₀`.
    entries: Vec<Vec<(usize, Rational)>>,
}

impl PartialEq for BilinearOp<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.algebra, other.algebra) && self.entries == other.entries
    }
}

/// Which slot of the bracket is acting as a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeibnizRule {
    /// `[A, B₁B₂]₀ = B₁[A,B₂]₀ + [A,B₁]₀B₂`
    SecondArgument,
    /// `[B₁B₂, A]₀ = B₁[B₂,A]₀ + [B₁,A]₀B₂`
    FirstArgument,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub rule: LeibnizRule,
    /// `(i, j, k)` with `A = eᵢ, B₁ = eⱼ, B₂ = eₖ`.
    pub indices: (usize, usize, usize),
    pub residual: Element,
}

impl<'a> BilinearOp<'a> {
    pub fn zero(algebra: &'a AlgebraSpec) -> Self {
        let d = algebra.dim();
        Self { algebra, entries: vec![Vec::new(); d * d] }
    }

    /// Builds an op from `(i, j, k, bᵢⱼᵏ)`; repeated keys are summed.
    pub fn from_entries(
        algebra: &'a AlgebraSpec,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self, BracketError> {
        let d = algebra.dim();
        let mut dense = vec![Rational::zero(); d * d * d];
        for (i, j, k, c) in entries {
            if i >= d || j >= d || k >= d {
                return Err(BracketError::IndexOutOfRange { i, j, k, dim: d });
            }
            dense[(i * d + j) * d + k] += c;
        }
        Ok(Self::from_flat(algebra, &dense))
    }

    /// From a dense `d³` vector indexed by `(i·d + j)·d + k`.
    pub fn from_flat(algebra: &'a AlgebraSpec, flat: &[Rational]) -> Self {
        let d = algebra.dim();
        assert_eq!(flat.len(), d * d * d);
        let entries = flat
            .chunks(d)
            .map(|chunk| chunk.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect())
            .collect();
        Self { algebra, entries }
    }

    pub fn to_flat(&self) -> Vec<Rational> {
        let d = self.algebra.dim();
        let mut flat = vec![Rational::zero(); d * d * d];
        for (ij, v) in self.entries.iter().enumerate() {
            for (k, c) in v {
                flat[ij * d + k] = c.clone();
            }
        }
        flat
    }

    /// Nonzero tensor entries in `(i, j, k)` order.
    pub fn tensor_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let d = self.algebra.dim();
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(ij, v)| v.iter().map(move |(k, c)| (ij / d, ij % d, *k, c.clone())))
            .collect()
    }

    /// The commutator `ab − ba` as a tensor.
    pub fn commutator(algebra: &'a AlgebraSpec) -> Self {
        Self::from_products(algebra, |a, b| algebra.bracket(a, b))
    }

    /// The symmetric product `ab + ba`.
    pub fn anticommutator(algebra: &'a AlgebraSpec) -> Self {
        Self::from_products(algebra, |a, b| &algebra.product(a, b) + &algebra.product(b, a))
    }

    fn from_products(algebra: &'a AlgebraSpec, f: impl Fn(&Element, &Element) -> Element) -> Self {
        let d = algebra.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let v = f(&algebra.basis(i), &algebra.basis(j));
                entries.push(v.support().map(|(k, c)| (k, c.clone())).collect());
            }
        }
        Self { algebra, entries }
    }

    pub fn algebra(&self) -> &'a AlgebraSpec {
        self.algebra
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let flat: Vec<Rational> = self.to_flat().iter().map(|c| c * s).collect();
        Self::from_flat(self.algebra, &flat)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(std::ptr::eq(self.algebra, other.algebra), "ops on different algebras");
        let flat: Vec<Rational> = self.to_flat().iter().zip(other.to_flat()).map(|(a, b)| a + b).collect();
        Self::from_flat(self.algebra, &flat)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    fn check(&self, a: &Element) -> Result<(), BracketError> {
        if a.dim() == self.algebra.dim() {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch { expected: self.algebra.dim(), got: a.dim() }.into())
        }
    }

    /// `[a, b]₀` by bilinear contraction.
    pub fn eval(&self, a: &Element, b: &Element) -> Result<Element, BracketError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.apply(a, b))
    }

    pub(crate) fn apply(&self, a: &Element, b: &Element) -> Element {
        let d = self.algebra.dim();
        let mut out = vec![Rational::zero(); d];
        for (i, x) in a.support() {
            for (j, y) in b.support() {
                let xy = x * y;
                for (k, c) in &self.entries[i * d + j] {
                    out[*k] += &xy * c;
                }
            }
        }
        Element::new(out)
    }

    fn basis_apply(&self, i: usize, j: usize) -> Element {
        let mut out = self.algebra.zero();
        for (k, c) in &self.entries[i * self.algebra.dim() + j] {
            out = &out + &self.algebra.basis(*k).scale(c);
        }
        out
    }

    /// Both Leibniz residuals on every basis triple. Empty means the rule
    /// holds exactly.
    pub fn leibniz_residuals(&self) -> Vec<LeibnizViolation> {
        let a = self.algebra;
        let d = a.dim();
        (0..d)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut out = Vec::new();
                for j in 0..d {
                    for k in 0..d {
                        let (ei, ej, ek) = (a.basis(i), a.basis(j), a.basis(k));
                        let jk = a.product(&ej, &ek);
                        let r2 = &(&self.apply(&ei, &jk) - &a.product(&ej, &self.apply(&ei, &ek)))
                            - &a.product(&self.apply(&ei, &ej), &ek);
                        if !r2.is_zero() {
                            out.push(LeibnizViolation {
                                rule: LeibnizRule::SecondArgument,
                                indices: (i, j, k),
                                residual: r2,
                            });
                        }
                        let r1 = &(&self.apply(&jk, &ei) - &a.product(&ej, &self.apply(&ek, &ei)))
                            - &a.product(&self.apply(&ej, &ei), &ek);
                        if !r1.is_zero() {
                            out.push(LeibnizViolation {
                                rule: LeibnizRule::FirstArgument,
                                indices: (i, j, k),
                                residual: r1,
                            });
                        }
                    }
                }
                out
            })
            .collect()
    }

    pub fn satisfies_leibniz(&self) -> bool {
        self.leibniz_residuals().is_empty()
    }

    /// `[a₁,b₁]·[a₂,b₂]₀ − [a₁,b₁]₀·[a₂,b₂]`.
    pub fn prop1_residual(
        &self,
        a1: &Element,
        b1: &Element,
        a2: &Element,
        b2: &Element,
    ) -> Result<Element, BracketError> {
        for x in [a1, b1, a2, b2] {
            self.check(x)?;
        }
        let alg = self.algebra;
        let lhs = alg.product(&alg.bracket(a1, b1), &self.apply(a2, b2));
        let rhs = alg.product(&self.apply(a1, b1), &alg.bracket(a2, b2));
        Ok(&lhs - &rhs)
    }

    /// Left Loday form: `[x,[y,z]]₀ − [[x,y]₀,z]₀ − [y,[x,z]₀]₀`.
    pub fn jacobi_residual(&self, x: &Element, y: &Element, z: &Element) -> Result<Element, BracketError> {
        for e in [x, y, z] {
            self.check(e)?;
        }
        Ok(self.jacobi_left(x, y, z))
    }

    /// Right Loday form: `[[x,y]₀,z]₀ − [[x,z]₀,y]₀ − [x,[y,z]₀]₀`.
    pub fn jacobi_residual_right(&self, x: &Element, y: &Element, z: &Element) -> Result<Element, BracketError> {
        for e in [x, y, z] {
            self.check(e)?;
        }
        Ok(self.jacobi_right(x, y, z))
    }

    fn jacobi_left(&self, x: &Element, y: &Element, z: &Element) -> Element {
        let t1 = self.apply(x, &self.apply(y, z));
        let t2 = self.apply(&self.apply(x, y), z);
        let t3 = self.apply(y, &self.apply(x, z));
        &(&t1 - &t2) - &t3
    }

    fn jacobi_right(&self, x: &Element, y: &Element, z: &Element) -> Element {
        let t1 = self.apply(&self.apply(x, y), z);
        let t2 = self.apply(&self.apply(x, z), y);
        let t3 = self.apply(x, &self.apply(y, z));
        &(&t1 - &t2) - &t3
    }

    /// Nonzero `[eᵢ,eⱼ]₀ + [eⱼ,eᵢ]₀` for `i ≤ j`.
    pub fn skew_residual(&self) -> Vec<(usize, usize, Element)> {
        let d = self.algebra.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                let s = &self.basis_apply(i, j) + &self.basis_apply(j, i);
                if !s.is_zero() {
                    out.push((i, j, s));
                }
            }
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        self.skew_residual().is_empty()
    }

    /// All basis triples where the left (`right = false`) or right Loday
    /// identity fails, in lexicographic order.
    pub fn jacobi_violations(&self, right: bool) -> Vec<((usize, usize, usize), Element)> {
        let a = self.algebra;
        let d = a.dim();
        (0..d)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut out = Vec::new();
                for j in 0..d {
                    for k in 0..d {
                        let (x, y, z) = (a.basis(i), a.basis(j), a.basis(k));
                        let r = if right { self.jacobi_right(&x, &y, &z) } else { self.jacobi_left(&x, &y, &z) };
                        if !r.is_zero() {
                            out.push(((i, j, k), r));
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// First basis quadruple (lexicographic) with nonzero product-identity
    /// residual, if any.
    pub fn first_prop1_violation(&self) -> Option<((usize, usize, usize, usize), Element)> {
        let a = self.algebra;
        let d = a.dim();
        let comms: Vec<Element> = (0..d * d).map(|ij| a.bracket(&a.basis(ij / d), &a.basis(ij % d))).collect();
        let ops: Vec<Element> = (0..d * d).map(|ij| self.basis_apply(ij / d, ij % d)).collect();
        (0..d * d).into_par_iter().find_map_first(|p| {
            (0..d * d).find_map(|q| {
                let r = &a.product(&comms[p], &ops[q]) - &a.product(&ops[p], &comms[q]);
                (!r.is_zero()).then(|| ((p / d, p % d, q / d, q % d), r))
            })
        })
    }

    /// `Some(λ)` iff this op equals `λ·commutator` exactly.
    pub fn commutator_multiple(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let comm = BilinearOp::commutator(self.algebra).to_flat();
        let mine = self.to_flat();
        let pos = comm.iter().position(|c| !c.is_zero())?;
        let lambda = &mine[pos] / &comm[pos];
        comm.iter().zip(&mine).all(|(c, m)| &(c * &lambda) == m).then_some(lambda)
    }

    /// The central `C` with `[x,y]₀ = C[x,y]`, assembled from a unit
    /// decomposition of a strongly non-commutative algebra.
    pub fn compute_c(&self) -> Result<Element, BracketError> {
        if !self.satisfies_leibniz() {
            return Err(BracketError::LeibnizViolated);
        }
        let a = self.algebra;
        let terms = a.unit_decomposition()?;
        let c = terms.iter().fold(a.zero(), |acc, t| {
            let v = self.apply(&t.a, &t.b);
            let term = match t.side {
                Side::Left => a.product(&t.c, &v),
                Side::Right => a.product(&v, &t.c),
            };
            &acc + &term
        });
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                let (x, y) = (a.basis(i), a.basis(j));
                if self.apply(&x, &y) != a.product(&c, &a.bracket(&x, &y)) {
                    return Err(BracketError::Postcondition(format!("[e{i},e{j}]₀ differs from C·[e{i},e{j}]")));
                }
            }
            if !a.bracket(&a.basis(i), &c).is_zero() {
                return Err(BracketError::Postcondition(format!("C does not commute with e{i}")));
            }
        }
        Ok(c)
    }
}

/// Index of the unknown `bₚq^r` in the flattened tensor.
fn unknown(d: usize, p: usize, q: usize, r: usize) -> usize {
    (p * d + q) * d + r
}

/// Linear constraints on the `d³` tensor entries imposed by both Leibniz
/// rules on every basis triple, normalized and deduplicated.
pub fn leibniz_constraints(algebra: &AlgebraSpec) -> Vec<SparseRow> {
    let d = algebra.dim();
    let mut rows: Vec<SparseRow> = (0..d)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in 0..d {
                for k in 0..d {
                    // Second-argument rule, one row per output component s.
                    let mut second = vec![Vec::new(); d];
                    for (l, c) in algebra.structure(j, k) {
                        for (s, row) in second.iter_mut().enumerate() {
                            row.push((unknown(d, i, *l, s), c.clone()));
                        }
                    }
                    for r in 0..d {
                        for (s, c) in algebra.structure(j, r) {
                            second[*s].push((unknown(d, i, k, r), -c));
                        }
                        for (s, c) in algebra.structure(r, k) {
                            second[*s].push((unknown(d, i, j, r), -c));
                        }
                    }
                    // First-argument rule.
                    let mut first = vec![Vec::new(); d];
                    for (l, c) in algebra.structure(j, k) {
                        for (s, row) in first.iter_mut().enumerate() {
                            row.push((unknown(d, *l, i, s), c.clone()));
                        }
                    }
                    for r in 0..d {
                        for (s, c) in algebra.structure(j, r) {
                            first[*s].push((unknown(d, k, i, r), -c));
                        }
                        for (s, c) in algebra.structure(r, k) {
                            first[*s].push((unknown(d, j, i, r), -c));
                        }
                    }
                    out.extend(second.into_iter().chain(first).filter_map(merge_row));
                }
            }
            out
        })
        .collect();
    rows.sort_unstable_by(|a, b| a.entries().cmp(b.entries()));
    rows.dedup();
    rows
}

fn merge_row(mut entries: Vec<(usize, Rational)>) -> Option<SparseRow> {
    entries.sort_by_key(|(c, _)| *c);
    let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
    for (c, v) in entries {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => merged.push((c, v)),
        }
    }
    SparseRow::from_rationals(merged)
}

/// Basis of all Leibniz brackets on `algebra`, each normalized so its first
/// nonzero tensor entry is 1. An empty result means only the zero bracket.
pub fn solve_leibniz_space(algebra: &AlgebraSpec) -> Vec<BilinearOp<'_>> {
    let d = algebra.dim();
    let mut echelon = SparseEchelon::new(d * d * d);
    for row in leibniz_constraints(algebra) {
        echelon.push(row);
    }
    echelon
        .nullspace()
        .into_iter()
        .map(|v| {
            let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
            let v: Vec<Rational> = v.iter().map(|c| c / &lead).collect();
            BilinearOp::from_flat(algebra, &v)
        })
        .collect()
}

/// An algebra given by built-in name or inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(AlgebraWire),
}

impl AlgebraRef {
    pub fn resolve(self) -> Result<AlgebraSpec, AlgebraLoadError> {
        match self {
            AlgebraRef::Name(n) => {
                AlgebraSpec::builtin(&n).ok_or_else(|| AlgebraLoadError::Parse(format!("unknown algebra {n:?}")))
            }
            AlgebraRef::Inline(w) => w.into_spec(),
        }
    }
}

/// JSON form of a bracket: optional algebra plus `[i, j, k, "p/q"]` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraRef>,
    pub tensor: Vec<(usize, usize, usize, RationalLiteral)>,
}

impl BilinearWire {
    pub fn from_json(text: &str) -> Result<Self, AlgebraLoadError> {
        serde_json::from_str(text).map_err(|e| AlgebraLoadError::Parse(e.to_string()))
    }

    pub fn entries(&self) -> Result<Vec<(usize, usize, usize, Rational)>, AlgebraLoadError> {
        self.tensor
            .iter()
            .map(|(i, j, k, c)| c.parse().map(|c| (*i, *j, *k, c)))
            .collect::<Result<_, _>>()
            .map_err(AlgebraLoadError::Parse)
    }

    pub fn to_op<'a>(&self, algebra: &'a AlgebraSpec) -> Result<BilinearOp<'a>, AlgebraLoadError> {
        BilinearOp::from_entries(algebra, self.entries()?).map_err(|e| AlgebraLoadError::Parse(e.to_string()))
    }
}

impl From<&BilinearOp<'_>> for BilinearWire {
    fn from(op: &BilinearOp<'_>) -> Self {
        Self {
            algebra: Some(AlgebraRef::Inline(AlgebraWire::from(op.algebra()))),
            tensor: op.tensor_entries().iter().map(|(i, j, k, c)| (*i, *j, *k, c.into())).collect(),
        }
    }
}
