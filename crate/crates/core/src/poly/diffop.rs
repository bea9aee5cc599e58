use std::collections::BTreeMap;

use num_traits::One;

use crate::rational::Rational;

use super::{check_nvars, Monomial, Order, PolyAlgebra, PolyError, Polynomial};

/// A linear differential operator `f ↦ Σ c_α ∂^α f` in derivative-normal
/// form. Coefficients are kept reduced and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    nvars: usize,
    terms: BTreeMap<Monomial, Polynomial>,
}

impl DiffOp {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    /// Multiplication by `g`.
    pub fn multiplication(g: Polynomial) -> Self {
        let nvars = g.nvars();
        Self::from_terms(nvars, [(Monomial::one(nvars), g)])
    }

    pub fn identity(nvars: usize) -> Self {
        Self::multiplication(Polynomial::one(nvars))
    }

    /// `∂/∂xᵢ`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::var(nvars, i), Polynomial::one(nvars))])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Polynomial)>) -> Self {
        let mut op = Self::zero(nvars);
        for (alpha, c) in terms {
            assert_eq!(alpha.nvars(), nvars);
            op.add_term(alpha, c);
        }
        op
    }

    fn add_term(&mut self, alpha: Monomial, c: Polynomial) {
        assert_eq!(c.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&alpha) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> {
        self.terms.iter()
    }

    /// Coefficients reduced modulo the algebra's relations.
    pub fn reduced(&self, alg: &PolyAlgebra) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(a, c)| (a.clone(), alg.reduce(c.clone()))))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(a, c)| (a.clone(), c.scale(s))))
    }

    pub fn apply(&self, alg: &PolyAlgebra, f: &Polynomial) -> Polynomial {
        let mut out = alg.zero();
        for (alpha, c) in &self.terms {
            let d = f.derivative_multi(alpha);
            out = &out + &alg.mul(c, &d);
        }
        out
    }

    /// `self ∘ other`, expanded back into normal form with the Leibniz rule
    /// `∂^α (d ∂^β) = Σ_{γ≤α} C(α,γ) (∂^γ d) ∂^{α−γ+β}`.
    pub fn compose(&self, alg: &PolyAlgebra, other: &Self) -> Result<Self, PolyError> {
        check_nvars(self.nvars, other.nvars)?;
        check_nvars(alg.nvars(), self.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (alpha, c) in &self.terms {
            for (gamma, binom) in alpha.sub_indices() {
                let rest = alpha.checked_sub(&gamma).expect("γ ≤ α");
                for (beta, d) in &other.terms {
                    let coeff = alg.mul(c, &d.derivative_multi(&gamma)).scale(&binom);
                    out.add_term(rest.mul(beta), coeff);
                }
            }
        }
        Ok(out)
    }

    /// `(δ(x)D)(f) = D(xf) − x D(f)`.
    pub fn delta(&self, alg: &PolyAlgebra, x: &Polynomial) -> Result<Self, PolyError> {
        check_nvars(self.nvars, x.nvars())?;
        check_nvars(alg.nvars(), self.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (alpha, c) in &self.terms {
            for (beta, binom) in alpha.sub_indices() {
                if beta.is_one() {
                    continue;
                }
                let dx = x.derivative_multi(&beta);
                if dx.is_zero() {
                    continue;
                }
                let rest = alpha.checked_sub(&beta).expect("β ≤ α");
                out.add_term(rest, alg.mul(c, &dx).scale(&binom));
            }
        }
        Ok(out)
    }

    /// Maximal total derivative degree among nonzero reduced coefficients;
    /// 0 for the zero operator.
    pub fn structural_order(&self, alg: &PolyAlgebra) -> u32 {
        self.terms
            .iter()
            .filter(|(_, c)| !alg.reduce((*c).clone()).is_zero())
            .map(|(a, _)| a.degree())
            .max()
            .unwrap_or(0)
    }

    /// Smallest `n ≤ cap` such that every `δ(v₁)⋯δ(v_{n+1})D` over
    /// generators vanishes.
    pub fn operator_order(&self, alg: &PolyAlgebra, cap: u32) -> Order {
        let gens: Vec<Polynomial> = (0..alg.nvars()).map(|i| alg.var(i)).collect();
        let measured = delta_order(
            self.reduced(alg),
            cap,
            |op, v| op.delta(alg, &gens[v]).expect("generator lives in the algebra"),
            alg.nvars(),
        );
        if let Order::Finite(n) = measured {
            debug_assert_eq!(n, self.structural_order(alg), "δ-order disagrees with normal form");
        }
        measured
    }

    /// Splits an operator of order ≤ 1 into its derivation part and `D(1)`.
    pub fn first_order_decompose(&self, alg: &PolyAlgebra) -> Result<(DiffOp, Polynomial), PolyError> {
        check_nvars(alg.nvars(), self.nvars)?;
        let order = self.structural_order(alg);
        if order > 1 {
            return Err(PolyError::OrderTooHigh(order));
        }
        let scalar = self.apply(alg, &alg.one());
        let derivation = self.reduced(alg).sub(&DiffOp::multiplication(scalar.clone()));
        Ok((derivation, scalar))
    }
}

/// Breadth-first δ expansion over nondecreasing generator sequences, shared
/// by linear and bilinear operators.
pub(crate) fn delta_order<T, F>(start: T, cap: u32, delta: F, ngens: usize) -> Order
where
    T: Clone + IsZero,
    F: Fn(&T, usize) -> T,
{
    if start.is_zero_op() {
        return Order::Finite(0);
    }
    let mut level = vec![(start, 0usize)];
    for n in 0..=cap {
        let mut next = Vec::new();
        for (op, last) in &level {
            for v in *last..ngens {
                let d = delta(op, v);
                if !d.is_zero_op() {
                    next.push((d, v));
                }
            }
        }
        if next.is_empty() {
            return Order::Finite(n);
        }
        level = next;
    }
    Order::Unbounded { cap }
}

pub(crate) trait IsZero {
    fn is_zero_op(&self) -> bool;
}

impl IsZero for DiffOp {
    fn is_zero_op(&self) -> bool {
        self.is_zero()
    }
}
