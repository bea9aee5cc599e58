//! Finite-dimensional unital associative algebras given by structure
//! constants over ℚ.
//!
//! An [`AlgebraSpec`] stores `eᵢeⱼ = Σₖ cᵢⱼᵏ eₖ` sparsely. Construction
//! validates associativity on every basis triple and the unit axiom on every
//! basis element, so every spec that exists is a genuine unital associative
//! algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, Subspace};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constant index ({i},{j},{k}) out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("expected {dim} basis labels, got {got}")]
    LabelCount { dim: usize, got: usize },
    #[error("algebra must have positive dimension")]
    EmptyAlgebra,
    #[error("associativity fails on basis triple ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit axiom fails on basis element {0}")]
    NotUnital(usize),
    #[error("algebra is not strongly non-commutative")]
    NotStronglyNoncommutative,
    #[error("invalid algebra description: {0}")]
    Format(String),
}

/// Coefficient vector of an algebra element in the basis of its owning spec.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    coeffs: Vec<Rational>,
}

impl Element {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[i] = Rational::one();
        e
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Nonzero coordinates, in index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Coefficients rendered as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension mismatch");
        Element { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension mismatch");
        Element { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One summand of a unit decomposition: `C·[a,b]` (left) or `[a,b]·C` (right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitTerm {
    pub c: Element,
    pub a: Element,
    pub b: Element,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    name: String,
    labels: Vec<String>,
    /// `products[i * dim + j]` holds the sparse expansion of `eᵢeⱼ`.
    products: Vec<Vec<(usize, Rational)>>,
    unit: Element,
}

impl AlgebraSpec {
    /// Builds and validates a spec from `(i, j, k, cᵢⱼᵏ)` entries.
    /// Repeated entries for the same `(i, j, k)` are summed.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        structure: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        unit: Vec<Rational>,
    ) -> Result<Self, AlgebraError> {
        let dim = unit.len();
        if dim == 0 {
            return Err(AlgebraError::EmptyAlgebra);
        }
        if labels.len() != dim {
            return Err(AlgebraError::LabelCount { dim, got: labels.len() });
        }
        let mut table: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, j, k, c) in structure {
            if i >= dim || j >= dim || k >= dim {
                return Err(AlgebraError::IndexOutOfRange { i, j, k, dim });
            }
            *table.entry((i, j, k)).or_insert_with(Rational::zero) += c;
        }
        let mut products = vec![Vec::new(); dim * dim];
        for ((i, j, k), c) in table {
            if !c.is_zero() {
                products[i * dim + j].push((k, c));
            }
        }
        let spec = Self { name: name.into(), labels, products, unit: Element::new(unit) };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let eij = self.basis_product(i, j);
                for l in 0..d {
                    let left = self.product(&eij, &self.basis(l));
                    let right = self.product(&self.basis(i), &self.basis_product(j, l));
                    if left != right {
                        return Err(AlgebraError::NotAssociative(i, j, l));
                    }
                }
            }
        }
        for i in 0..d {
            let e = self.basis(i);
            if self.product(&self.unit, &e) != e || self.product(&e, &self.unit) != e {
                return Err(AlgebraError::NotUnital(i));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.unit.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.dim())
    }

    /// Sparse expansion of `eᵢeⱼ`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.products[i * self.dim() + j]
    }

    /// All nonzero structure constants in `(i, j, k)` order.
    pub fn structure_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let d = self.dim();
        self.products.iter().enumerate().flat_map(move |(ij, v)| v.iter().map(move |(k, c)| (ij / d, ij % d, *k, c)))
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Element {
        let mut out = self.zero();
        for (k, c) in self.structure(i, j) {
            out.coeffs[*k] += c;
        }
        out
    }

    fn check(&self, a: &Element) -> Result<(), AlgebraError> {
        if a.dim() == self.dim() {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch { expected: self.dim(), got: a.dim() })
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.product(a, b))
    }

    /// `ab − ba`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.bracket(a, b))
    }

    /// Product without the dimension check; callers guarantee matching sizes.
    pub(crate) fn product(&self, a: &Element, b: &Element) -> Element {
        let mut out = self.zero();
        for (i, x) in a.support() {
            for (j, y) in b.support() {
                let xy = x * y;
                for (k, c) in self.structure(i, j) {
                    out.coeffs[*k] += &xy * c;
                }
            }
        }
        out
    }

    pub(crate) fn bracket(&self, a: &Element, b: &Element) -> Element {
        &self.product(a, b) - &self.product(b, a)
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.structure(i, j) == self.structure(j, i)))
    }

    /// Span of all basis commutators `[eᵢ, eⱼ]`.
    pub fn derived_span(&self) -> Subspace {
        let d = self.dim();
        let mut s = Subspace::zero(d);
        for i in 0..d {
            for j in i + 1..d {
                s.insert(self.bracket(&self.basis(i), &self.basis(j)).coeffs());
            }
        }
        s
    }

    /// Smallest two-sided ideal containing `gens`, by saturation under left
    /// and right multiplication with basis elements.
    pub fn two_sided_ideal(&self, gens: &[Element]) -> Result<Subspace, AlgebraError> {
        for g in gens {
            self.check(g)?;
        }
        let d = self.dim();
        let mut ideal = Subspace::zero(d);
        for g in gens {
            ideal.insert(g.coeffs());
        }
        // Each pass either grows the dimension or reaches the fixed point.
        for _ in 0..=d {
            let current: Vec<Element> = ideal.basis().iter().cloned().map(Element::new).collect();
            let mut grew = false;
            for v in &current {
                for i in 0..d {
                    let e = self.basis(i);
                    grew |= ideal.insert(self.product(&e, v).coeffs());
                    grew |= ideal.insert(self.product(v, &e).coeffs());
                }
            }
            if !grew {
                break;
            }
        }
        Ok(ideal)
    }

    pub fn is_strongly_noncommutative(&self) -> bool {
        let gens: Vec<Element> = self.derived_span().basis().iter().cloned().map(Element::new).collect();
        self.two_sided_ideal(&gens).expect("generators built from this algebra").dim() == self.dim()
    }

    /// Solutions `z` of `[eᵢ, z] = 0` for every basis element.
    pub fn center(&self) -> Subspace {
        let d = self.dim();
        let mut rows = Vec::with_capacity(d * d);
        for i in 0..d {
            let cols: Vec<Element> = (0..d).map(|j| self.bracket(&self.basis(i), &self.basis(j))).collect();
            for k in 0..d {
                rows.push(cols.iter().map(|c| c.coeffs[k].clone()).collect());
            }
        }
        Subspace::span(d, linalg::nullspace(rows, d))
    }

    /// Writes the unit as `Σ Cᵢ[aᵢ,bᵢ] + Σ [aⱼ,bⱼ]Cⱼ` with `aᵢ, bᵢ` basis
    /// elements. Any solution of the linear system is returned; the pivot
    /// order of the solver decides which.
    pub fn unit_decomposition(&self) -> Result<Vec<UnitTerm>, AlgebraError> {
        let d = self.dim();
        let mut candidates: Vec<(Vec<Rational>, UnitTerm)> = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let comm = self.bracket(&self.basis(a), &self.basis(b));
                if comm.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let e = self.basis(c);
                    for side in [Side::Left, Side::Right] {
                        let v = match side {
                            Side::Left => self.product(&e, &comm),
                            Side::Right => self.product(&comm, &e),
                        };
                        if v.is_zero() {
                            continue;
                        }
                        let term = UnitTerm { c: e.clone(), a: self.basis(a), b: self.basis(b), side };
                        candidates.push((v.into_coeffs(), term));
                    }
                }
            }
        }
        let columns: Vec<Vec<Rational>> = candidates.iter().map(|(v, _)| v.clone()).collect();
        let t = linalg::solve(&columns, self.unit.coeffs()).ok_or(AlgebraError::NotStronglyNoncommutative)?;
        Ok(candidates
            .into_iter()
            .zip(t)
            .filter(|(_, t)| !t.is_zero())
            .map(|((_, mut term), t)| {
                term.c = term.c.scale(&t);
                term
            })
            .collect())
    }

    /// Re-evaluates a decomposition; equals the unit when it is valid.
    pub fn resum(&self, terms: &[UnitTerm]) -> Element {
        terms.iter().fold(self.zero(), |acc, t| {
            let comm = self.bracket(&t.a, &t.b);
            let v = match t.side {
                Side::Left => self.product(&t.c, &comm),
                Side::Right => self.product(&comm, &t.c),
            };
            &acc + &v
        })
    }

    /// The matrix algebra gl(n, ℚ) with matrix units `E_ab` at index `a·n + b`.
    pub fn gl(n: usize) -> Self {
        assert!(n > 0);
        let label = |a: usize, b: usize| {
            if n < 10 {
                format!("E{}{}", a + 1, b + 1)
            } else {
                format!("E{},{}", a + 1, b + 1)
            }
        };
        let labels = (0..n * n).map(|i| label(i / n, i % n)).collect();
        let mut structure = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // E_ab E_bc = E_ac
                    structure.push((a * n + b, b * n + c, a * n + c, Rational::one()));
                }
            }
        }
        let unit = (0..n * n).map(|i| if i / n == i % n { Rational::one() } else { Rational::zero() }).collect();
        Self::new(format!("gl{n}"), labels, structure, unit).expect("gl(n) is a valid algebra")
    }

    /// Diagonal n×n matrices, i.e. ℚⁿ with componentwise product.
    pub fn diagonal(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("E{}{}", i + 1, i + 1)).collect();
        let structure = (0..n).map(|i| (i, i, i, Rational::one()));
        Self::new(format!("diag{n}"), labels, structure, vec![Rational::one(); n]).expect("diagonal algebra is valid")
    }

    /// Upper-triangular 2×2 matrices with basis `E11, E12, E22`.
    pub fn upper_triangular2() -> Self {
        let one = Rational::one;
        let structure = vec![
            (0, 0, 0, one()), // E11 E11
            (0, 1, 1, one()), // E11 E12
            (1, 2, 1, one()), // E12 E22
            (2, 2, 2, one()), // E22 E22
        ];
        Self::new(
            "upper2",
            vec!["E11".into(), "E12".into(), "E22".into()],
            structure,
            vec![one(), Rational::zero(), one()],
        )
        .expect("upper triangular algebra is valid")
    }

    /// ℚ[ε]/(ε²) with basis `1, ε`.
    pub fn dual_numbers() -> Self {
        let one = Rational::one;
        Self::new(
            "dual",
            vec!["1".into(), "eps".into()],
            vec![(0, 0, 0, one()), (0, 1, 1, one()), (1, 0, 1, one())],
            vec![one(), Rational::zero()],
        )
        .expect("dual numbers are a valid algebra")
    }

    /// Direct product `A ⊕ B` with componentwise multiplication.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let da = a.dim();
        let labels =
            a.labels.iter().map(|l| format!("{l}.0")).chain(b.labels.iter().map(|l| format!("{l}.1"))).collect();
        let structure = a
            .structure_entries()
            .map(|(i, j, k, c)| (i, j, k, c.clone()))
            .chain(b.structure_entries().map(|(i, j, k, c)| (i + da, j + da, k + da, c.clone())))
            .collect::<Vec<_>>();
        let unit = a.unit.coeffs.iter().chain(&b.unit.coeffs).cloned().collect();
        Self::new(format!("{}+{}", a.name, b.name), labels, structure, unit)
            .expect("direct sum of valid algebras is valid")
    }

    /// Resolves built-in names such as `gl3`, `diag2`, `upper2`, `dual`,
    /// `gl2+q`.
    pub fn builtin(name: &str) -> Option<Self> {
        if let Some((l, r)) = name.split_once('+') {
            return Some(Self::direct_sum(&Self::builtin(l)?, &Self::builtin(r)?));
        }
        let sized = |prefix: &str| -> Option<usize> {
            name.strip_prefix(prefix)?.parse().ok().filter(|&n: &usize| (1..=8).contains(&n))
        };
        match name {
            "q" => Some(Self::diagonal(1)),
            "upper2" => Some(Self::upper_triangular2()),
            "dual" => Some(Self::dual_numbers()),
            _ => sized("gl").map(Self::gl).or_else(|| sized("diag").map(Self::diagonal)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraLoadError> {
        let wire: AlgebraWire = serde_json::from_str(text).map_err(|e| AlgebraLoadError::Parse(e.to_string()))?;
        wire.into_spec()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AlgebraWire::from(self)).expect("serializable")
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

/// Failure to load an algebra file. Parse errors and structural violations
/// are kept apart because the CLI reports them with different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraLoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Invalid(#[from] AlgebraError),
}

/// A rational in JSON: a `"p/q"` string or a bare integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalLiteral {
    Text(String),
    Int(i64),
}

impl RationalLiteral {
    pub fn parse(&self) -> Result<Rational, String> {
        match self {
            Self::Text(s) => parse_rational(s).map_err(|e| e.to_string()),
            Self::Int(n) => Ok(crate::rational::int(*n)),
        }
    }
}

impl From<&Rational> for RationalLiteral {
    fn from(r: &Rational) -> Self {
        Self::Text(format_rational(r))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<RationalLiteral>,
    pub structure: Vec<(usize, usize, usize, RationalLiteral)>,
}

impl AlgebraWire {
    pub fn into_spec(self) -> Result<AlgebraSpec, AlgebraLoadError> {
        if self.unit.len() != self.dim {
            return Err(AlgebraLoadError::Parse(format!(
                "unit has {} entries but dim is {}",
                self.unit.len(),
                self.dim
            )));
        }
        let unit = self
            .unit
            .iter()
            .map(RationalLiteral::parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(AlgebraLoadError::Parse)?;
        let structure = self
            .structure
            .iter()
            .map(|(i, j, k, c)| c.parse().map(|c| (*i, *j, *k, c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(AlgebraLoadError::Parse)?;
        let name = self.name.unwrap_or_else(|| "custom".into());
        Ok(AlgebraSpec::new(name, self.basis, structure, unit)?)
    }
}

impl From<&AlgebraSpec> for AlgebraWire {
    fn from(a: &AlgebraSpec) -> Self {
        Self {
            name: Some(a.name.clone()),
            dim: a.dim(),
            basis: a.labels.clone(),
            unit: a.unit.coeffs.iter().map(RationalLiteral::from).collect(),
            structure: a.structure_entries().map(|(i, j, k, c)| (i, j, k, c.into())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn gl2() -> AlgebraSpec {
        AlgebraSpec::gl(2)
    }

    // gl(2) basis order: E11, E12, E21, E22
    const E11: usize = 0;
    const E12: usize = 1;
    const E21: usize = 2;
    const E22: usize = 3;

    #[test]
    fn matrix_unit_products() {
        let a = gl2();
        assert_eq!(a.mul(&a.basis(E11), &a.basis(E12)).unwrap(), a.basis(E12));
        let left = a.mul(&a.mul(&a.basis(E12), &a.basis(E21)).unwrap(), &a.basis(E11)).unwrap();
        let right = a.mul(&a.basis(E12), &a.mul(&a.basis(E21), &a.basis(E11)).unwrap()).unwrap();
        assert_eq!(left, a.basis(E11));
        assert_eq!(right, a.basis(E11));
    }

    #[test]
    fn commutator_examples() {
        let a = gl2();
        assert_eq!(a.commutator(&a.basis(E11), &a.basis(E12)).unwrap(), a.basis(E12));
        assert_eq!(a.commutator(&a.basis(E12), &a.basis(E21)).unwrap(), &a.basis(E11) - &a.basis(E22));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = gl2();
        let err = a.mul(&a.basis(0), &Element::zero(3)).unwrap_err();
        assert_eq!(err, AlgebraError::DimensionMismatch { expected: 4, got: 3 });
        assert!(a.commutator(&Element::zero(9), &a.basis(0)).is_err());
    }

    #[test]
    fn derived_span_dimensions() {
        assert_eq!(gl2().derived_span().dim(), 3);
        assert_eq!(AlgebraSpec::gl(3).derived_span().dim(), 8);
        assert_eq!(AlgebraSpec::diagonal(2).derived_span().dim(), 0);
        // Trace-zero: every vector in the span has a11 + a22 = 0.
        for v in gl2().derived_span().basis() {
            assert_eq!(&v[E11] + &v[E22], int(0));
        }
    }

    #[test]
    fn ideals() {
        let a = gl2();
        let gens: Vec<Element> = a.derived_span().basis().iter().cloned().map(Element::new).collect();
        assert_eq!(a.two_sided_ideal(&gens).unwrap().dim(), 4);
        assert_eq!(a.two_sided_ideal(&[a.zero()]).unwrap().dim(), 0);

        let u = AlgebraSpec::upper_triangular2();
        let ideal = u.two_sided_ideal(&[u.basis(1)]).unwrap();
        assert_eq!(ideal, Subspace::span(3, vec![u.basis(1).into_coeffs()]));
    }

    #[test]
    fn strong_noncommutativity() {
        assert!(gl2().is_strongly_noncommutative());
        assert!(AlgebraSpec::gl(3).is_strongly_noncommutative());
        assert!(!AlgebraSpec::diagonal(2).is_strongly_noncommutative());
        assert!(!AlgebraSpec::dual_numbers().is_strongly_noncommutative());
        let sum = AlgebraSpec::direct_sum(&gl2(), &AlgebraSpec::diagonal(1));
        assert_eq!(sum.dim(), 5);
        assert!(!sum.is_strongly_noncommutative());
        // The ideal generated by the derived algebra is exactly the gl(2) block.
        let gens: Vec<Element> = sum.derived_span().basis().iter().cloned().map(Element::new).collect();
        assert_eq!(sum.two_sided_ideal(&gens).unwrap().dim(), 4);
    }

    #[test]
    fn centers() {
        let a = gl2();
        assert_eq!(a.center(), Subspace::span(4, vec![a.unit().coeffs().to_vec()]));
        let g3 = AlgebraSpec::gl(3);
        assert_eq!(g3.center(), Subspace::span(9, vec![g3.unit().coeffs().to_vec()]));
        assert_eq!(AlgebraSpec::diagonal(3).center(), Subspace::full(3));
        let u = AlgebraSpec::upper_triangular2();
        assert_eq!(u.center(), Subspace::span(3, vec![u.unit().coeffs().to_vec()]));
    }

    #[test]
    fn unit_decompositions_resum_to_one() {
        for n in [2, 3] {
            let a = AlgebraSpec::gl(n);
            let terms = a.unit_decomposition().unwrap();
            assert!(!terms.is_empty());
            assert_eq!(&a.resum(&terms), a.unit());
        }
        assert_eq!(AlgebraSpec::diagonal(2).unit_decomposition().unwrap_err(), AlgebraError::NotStronglyNoncommutative);
    }

    #[test]
    fn invalid_structure_constants_rejected() {
        // e0 e0 = e1, e1 = 0 otherwise, unit missing: fails unit axiom.
        let err = AlgebraSpec::new("bad", vec!["a".into(), "b".into()], vec![(0, 0, 1, int(1))], vec![int(1), int(0)])
            .unwrap_err();
        assert!(matches!(err, AlgebraError::NotUnital(_)));

        // A non-associative table: 1 is a unit but x·x = y, x·y = 1, y·x = 0.
        let one = || int(1);
        let structure = vec![
            (0, 0, 0, one()),
            (0, 1, 1, one()),
            (1, 0, 1, one()),
            (0, 2, 2, one()),
            (2, 0, 2, one()),
            (1, 1, 2, one()),
            (1, 2, 0, one()),
        ];
        let err = AlgebraSpec::new(
            "nonassoc",
            vec!["1".into(), "x".into(), "y".into()],
            structure,
            vec![one(), int(0), int(0)],
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::NotAssociative(..)));
    }

    #[test]
    fn json_round_trip() {
        let a = AlgebraSpec::gl(2);
        let b = AlgebraSpec::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        let text = r#"{"dim":1,"basis":["1"],"unit":["2/2"],"structure":[[0,0,0,1]]}"#;
        let q = AlgebraSpec::from_json(text).unwrap();
        assert_eq!(q.unit().coeffs(), &[rat(1, 1)]);
        assert!(matches!(AlgebraSpec::from_json("{"), Err(AlgebraLoadError::Parse(_))));
    }

    #[test]
    fn builtins() {
        assert_eq!(AlgebraSpec::builtin("gl3").unwrap().dim(), 9);
        assert_eq!(AlgebraSpec::builtin("gl2+q").unwrap().dim(), 5);
        assert!(AlgebraSpec::builtin("gl0").is_none());
        assert!(AlgebraSpec::builtin("nope").is_none());
    }
}
