use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::rational::Rational;

use super::diffop::{delta_order, IsZero};
use super::{check_nvars, DiffOp, Monomial, Order, PolyAlgebra, PolyError, Polynomial};

/// Which argument of a bilinear operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arg {
    First,
    Second,
}

impl Arg {
    /// 1-based index as used in `δ₁`, `δ₂`.
    pub fn from_index(i: usize) -> Result<Self, PolyError> {
        match i {
            1 => Ok(Arg::First),
            2 => Ok(Arg::Second),
            _ => Err(PolyError::BadArgumentIndex(i)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BiOrder {
    pub first: Order,
    pub second: Order,
}

type Key = (Monomial, Monomial);

/// A bidifferential operator `(f, g) ↦ Σ c_{α,β} ∂^α f ∂^β g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiDiffOp {
    nvars: usize,
    terms: BTreeMap<Key, Polynomial>,
}

impl BiDiffOp {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    /// The associative product `(u, v) ↦ u·v`.
    pub fn product(nvars: usize) -> Self {
        Self::from_terms(nvars, [((Monomial::one(nvars), Monomial::one(nvars)), Polynomial::one(nvars))])
    }

    /// The Poisson bracket of `∂ᵢ ∧ ∂ⱼ`.
    pub fn poisson(nvars: usize, i: usize, j: usize) -> Self {
        let (ei, ej) = (Monomial::var(nvars, i), Monomial::var(nvars, j));
        Self::from_terms(
            nvars,
            [((ei.clone(), ej.clone()), Polynomial::one(nvars)), ((ej, ei), -&Polynomial::one(nvars))],
        )
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Key, Polynomial)>) -> Self {
        let mut op = Self::zero(nvars);
        for (k, c) in terms {
            assert_eq!(k.0.nvars(), nvars);
            assert_eq!(k.1.nvars(), nvars);
            op.add_term(k, c);
        }
        op
    }

    fn add_term(&mut self, key: Key, c: Polynomial) {
        assert_eq!(c.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &Polynomial)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn reduced(&self, alg: &PolyAlgebra) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(k, c)| (k.clone(), alg.reduce(c.clone()))))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(k, c)| (k.clone(), c.scale(s))))
    }

    /// `(f, g) ↦ D(g, f)`.
    pub fn transpose(&self) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|((a, b), c)| ((b.clone(), a.clone()), c.clone())))
    }

    /// Structural symmetry: equal to its transpose in normal form.
    pub fn is_symmetric(&self, alg: &PolyAlgebra) -> bool {
        let r = self.reduced(alg);
        r.transpose() == r
    }

    /// Structural skew-symmetry.
    pub fn is_skew(&self, alg: &PolyAlgebra) -> bool {
        let r = self.reduced(alg);
        r.transpose() == r.scale(&-Rational::one())
    }

    pub fn apply(&self, alg: &PolyAlgebra, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = alg.zero();
        for ((a, b), c) in &self.terms {
            let df = f.derivative_multi(a);
            if df.is_zero() {
                continue;
            }
            let dg = g.derivative_multi(b);
            if dg.is_zero() {
                continue;
            }
            out = &out + &alg.mul(c, &alg.mul(&df, &dg));
        }
        out
    }

    /// `δᵢ(x)D`: `D(…, x·yᵢ, …) − x·D(…)`.
    pub fn delta_i(&self, alg: &PolyAlgebra, arg: Arg, x: &Polynomial) -> Result<Self, PolyError> {
        check_nvars(self.nvars, x.nvars())?;
        check_nvars(alg.nvars(), self.nvars)?;
        let mut out = Self::zero(self.nvars);
        for ((a, b), c) in &self.terms {
            let target = match arg {
                Arg::First => a,
                Arg::Second => b,
            };
            for (beta, binom) in target.sub_indices() {
                if beta.is_one() {
                    continue;
                }
                let dx = x.derivative_multi(&beta);
                if dx.is_zero() {
                    continue;
                }
                let rest = target.checked_sub(&beta).expect("β ≤ α");
                let key = match arg {
                    Arg::First => (rest, b.clone()),
                    Arg::Second => (a.clone(), rest),
                };
                out.add_term(key, alg.mul(c, &dx).scale(&binom));
            }
        }
        Ok(out)
    }

    /// Maximal derivative degree in each argument over nonzero reduced terms.
    pub fn structural_bi_order(&self, alg: &PolyAlgebra) -> (u32, u32) {
        self.reduced(alg).terms.keys().fold((0, 0), |(m1, m2), (a, b)| (m1.max(a.degree()), m2.max(b.degree())))
    }

    /// Per-argument order via vanishing of iterated `δᵢ` over generators.
    pub fn bi_order(&self, alg: &PolyAlgebra, cap: u32) -> BiOrder {
        let gens: Vec<Polynomial> = (0..alg.nvars()).map(|i| alg.var(i)).collect();
        let reduced = self.reduced(alg);
        let measure = |arg: Arg| {
            delta_order(
                reduced.clone(),
                cap,
                |op: &BiDiffOp, v| op.delta_i(alg, arg, &gens[v]).expect("generator lives in the algebra"),
                alg.nvars(),
            )
        };
        let out = BiOrder { first: measure(Arg::First), second: measure(Arg::Second) };
        let (s1, s2) = self.structural_bi_order(alg);
        if let Order::Finite(n) = out.first {
            debug_assert_eq!(n, s1, "δ₁-order disagrees with normal form");
        }
        if let Order::Finite(n) = out.second {
            debug_assert_eq!(n, s2, "δ₂-order disagrees with normal form");
        }
        out
    }

    /// Extremal bi-degrees `(|α|, |β|)` of nonzero terms: the
    /// anti-lexicographic maximum (second argument dominant) and the
    /// lexicographic maximum (first argument dominant). `None` for the zero
    /// operator.
    #[allow(clippy::type_complexity)]
    pub fn bi_symbols(&self, alg: &PolyAlgebra) -> Option<((u32, u32), (u32, u32))> {
        let degrees: Vec<(u32, u32)> = self.reduced(alg).terms.keys().map(|(a, b)| (a.degree(), b.degree())).collect();
        let anti = degrees.iter().copied().max_by_key(|&(k, n)| (n, k))?;
        let lex = degrees.iter().copied().max()?;
        Some((anti, lex))
    }

    /// `g ↦ D(x, g)`.
    pub fn fix_first(&self, alg: &PolyAlgebra, x: &Polynomial) -> DiffOp {
        let mut terms = Vec::new();
        for ((a, b), c) in &self.terms {
            let dx = x.derivative_multi(a);
            if !dx.is_zero() {
                terms.push((b.clone(), alg.mul(c, &dx)));
            }
        }
        DiffOp::from_terms(self.nvars, terms)
    }

    /// `f ↦ D(f, y)`.
    pub fn fix_second(&self, alg: &PolyAlgebra, y: &Polynomial) -> DiffOp {
        let mut terms = Vec::new();
        for ((a, b), c) in &self.terms {
            let dy = y.derivative_multi(b);
            if !dy.is_zero() {
                terms.push((a.clone(), alg.mul(c, &dy)));
            }
        }
        DiffOp::from_terms(self.nvars, terms)
    }

    /// `D(f, g) + D(g, f)` on grid pairs `f ≤ g` (index order), nonzero
    /// values only.
    pub fn skew_residuals(&self, alg: &PolyAlgebra, degree: u32) -> Vec<(usize, usize, Polynomial)> {
        let grid = alg.grid(degree);
        (0..grid.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let grid = &grid;
                (i..grid.len()).filter_map(move |j| {
                    let r = &self.apply(alg, &grid[i], &grid[j]) + &self.apply(alg, &grid[j], &grid[i]);
                    (!r.is_zero()).then_some((i, j, r))
                })
            })
            .collect()
    }
}

impl IsZero for BiDiffOp {
    fn is_zero_op(&self) -> bool {
        self.is_zero()
    }
}

/// `D(u, v) = x·u·∂ⁿv/∂yⁿ` on `ℚ[x,y]/(x²)`: a Loday bracket of order `n`
/// that exists only because `x` is nilpotent.
pub fn remark4_op(n: u32) -> (PolyAlgebra, BiDiffOp) {
    assert!(n >= 1, "remark4_op needs n ≥ 1");
    let alg = PolyAlgebra::new(["x", "y"]).and_then(|a| a.with_nilpotent("x", 2)).expect("static algebra");
    let op = BiDiffOp::from_terms(2, [((Monomial::one(2), Monomial::new(vec![0, n])), alg.var(0))]);
    (alg, op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn xy() -> PolyAlgebra {
        PolyAlgebra::new(["x", "y"]).unwrap()
    }

    fn bi(alg: &PolyAlgebra, terms: &[(&[u32], &[u32], &str)]) -> BiDiffOp {
        BiDiffOp::from_terms(
            alg.nvars(),
            terms
                .iter()
                .map(|(a, b, c)| ((Monomial::new(a.to_vec()), Monomial::new(b.to_vec())), alg.parse(c).unwrap())),
        )
    }

    #[test]
    fn arg_indices() {
        assert_eq!(Arg::from_index(1), Ok(Arg::First));
        assert_eq!(Arg::from_index(2), Ok(Arg::Second));
        assert_eq!(Arg::from_index(3), Err(PolyError::BadArgumentIndex(3)));
        assert_eq!(Arg::from_index(0), Err(PolyError::BadArgumentIndex(0)));
    }

    #[test]
    fn delta_i_examples() {
        let a = xy();
        let x = a.var(0);
        let d = bi(&a, &[(&[0, 0], &[1, 0], "1")]);
        assert_eq!(d.delta_i(&a, Arg::Second, &x).unwrap(), BiDiffOp::product(2));
        assert!(d.delta_i(&a, Arg::First, &x).unwrap().is_zero());
    }

    #[test]
    fn bi_order_examples() {
        let a = xy();
        let first = |o: BiOrder| (o.first, o.second);
        assert_eq!(first(BiDiffOp::product(2).bi_order(&a, 6)), (Order::Finite(0), Order::Finite(0)));
        let d = bi(&a, &[(&[1, 0], &[0, 1], "1")]);
        assert_eq!(first(d.bi_order(&a, 6)), (Order::Finite(1), Order::Finite(1)));
        for n in 1..=3 {
            let (alg, op) = remark4_op(n);
            assert_eq!(first(op.bi_order(&alg, 6)), (Order::Finite(0), Order::Finite(n)));
        }
        let (alg, op) = remark4_op(3);
        assert_eq!(op.bi_order(&alg, 2).second, Order::Unbounded { cap: 2 });
    }

    #[test]
    fn bi_symbol_examples() {
        let a = xy();
        let d = bi(&a, &[(&[1, 0], &[2, 0], "1")]);
        assert_eq!(d.bi_symbols(&a), Some(((1, 2), (1, 2))));
        let d = bi(&a, &[(&[2, 0], &[0, 0], "1"), (&[0, 0], &[1, 0], "1")]);
        assert_eq!(d.bi_symbols(&a), Some(((0, 1), (2, 0))));
        let (alg, op) = remark4_op(2);
        assert_eq!(op.bi_symbols(&alg), Some(((0, 2), (0, 2))));
        assert_eq!(BiDiffOp::zero(2).bi_symbols(&a), None);
    }

    #[test]
    fn remark4_examples() {
        let (alg, op) = remark4_op(1);
        assert!(op.apply(&alg, &alg.var(0), &alg.var(1)).is_zero());
        let (alg, op) = remark4_op(2);
        let y = alg.var(1);
        let y2 = alg.parse("y^2").unwrap();
        assert_eq!(op.apply(&alg, &y, &y2), alg.parse("2 x y").unwrap());
        assert!(!op.skew_residuals(&alg, 2).is_empty());
        assert!(!op.is_skew(&alg));
    }

    #[test]
    fn fixing_arguments() {
        let a = xy();
        let p = BiDiffOp::poisson(2, 0, 1);
        assert_eq!(p.fix_first(&a, &a.var(0)), DiffOp::partial(2, 1));
        assert_eq!(p.fix_second(&a, &a.var(0)), DiffOp::partial(2, 1).scale(&int(-1)));
        assert!(p.is_skew(&a));
        assert!(BiDiffOp::product(2).is_symmetric(&a));
        assert!(p.skew_residuals(&a, 3).is_empty());
    }

    fn arb_coeff() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, 2), -3i64..4), 0..3)
            .prop_map(|t| Polynomial::from_terms(2, t.into_iter().map(|(e, c)| (Monomial::new(e), int(c)))))
    }

    fn arb_bi() -> impl Strategy<Value = BiDiffOp> {
        let idx = (0u32..=2, 0u32..=2).prop_filter("order", |(i, j)| i + j <= 2);
        prop::collection::vec((idx.clone(), idx, arb_coeff()), 0..4).prop_map(|t| {
            BiDiffOp::from_terms(
                2,
                t.into_iter().map(|((a, b), (c, d), p)| ((Monomial::new(vec![a, b]), Monomial::new(vec![c, d])), p)),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn partial_deltas_commute(d in arb_bi(), u in arb_coeff(), w in arb_coeff()) {
            let a = xy();
            let lhs = d.delta_i(&a, Arg::Second, &w).unwrap().delta_i(&a, Arg::First, &u).unwrap();
            let rhs = d.delta_i(&a, Arg::First, &u).unwrap().delta_i(&a, Arg::Second, &w).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_i_matches_definition(d in arb_bi(), x in arb_coeff(), f in arb_coeff(), g in arb_coeff()) {
            let a = xy();
            let l1 = d.delta_i(&a, Arg::First, &x).unwrap().apply(&a, &f, &g);
            let r1 = &d.apply(&a, &a.mul(&x, &f), &g) - &a.mul(&x, &d.apply(&a, &f, &g));
            prop_assert_eq!(l1, r1);
            let l2 = d.delta_i(&a, Arg::Second, &x).unwrap().apply(&a, &f, &g);
            let r2 = &d.apply(&a, &f, &a.mul(&x, &g)) - &a.mul(&x, &d.apply(&a, &f, &g));
            prop_assert_eq!(l2, r2);
        }

        #[test]
        fn measured_bi_order_is_structural(d in arb_bi()) {
            let a = xy();
            let (s1, s2) = d.structural_bi_order(&a);
            let o = d.bi_order(&a, 5);
            prop_assert_eq!((o.first, o.second), (Order::Finite(s1), Order::Finite(s2)));
        }
    }
}
