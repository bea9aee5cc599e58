//! Nijenhuis–Richardson bracket of alternating multilinear maps on a
//! polynomial algebra, and the compatibility conditions of a Jacobi pair.
//!
//! Convention: insertion sums over `(p, q−1)`-shuffles,
//! `(i_P Q)(a…) = Σ sgn(σ) Q(P(a_σ(1),…,a_σ(p)), a_σ(p+1),…)`, and
//! `[P, Q] = i_P Q − (−1)^{(p−1)(q−1)} i_Q P`. With this convention
//! `[Λ, Λ] = 2 i_Λ Λ = −2 Jac_Λ`, and a pair is Jacobi exactly when
//! `[Γ, Λ] = 0` and `[Λ, Λ] + WEDGE_COEFFICIENT · Λ∧Γ = 0`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::jacobi::{GridViolation, JacobiPair};
use crate::poly::{PolyAlgebra, Polynomial};
use crate::rational::{int, Rational};

/// Coefficient of `Λ∧Γ` in the second compatibility residual.
pub const WEDGE_COEFFICIENT: i64 = -2;

type Evaluator = Arc<dyn Fn(&[Polynomial]) -> Polynomial + Send + Sync>;

/// An alternating multilinear map `𝒜^p → 𝒜` given by an evaluator.
#[derive(Clone)]
pub struct SkewMultiMap {
    arity: usize,
    eval: Evaluator,
}

impl fmt::Debug for SkewMultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkewMultiMap").field("arity", &self.arity).finish_non_exhaustive()
    }
}

impl SkewMultiMap {
    /// Wraps an evaluator. Alternation is the caller's responsibility; see
    /// [`SkewMultiMap::alternation_defect`].
    pub fn new(arity: usize, eval: impl Fn(&[Polynomial]) -> Polynomial + Send + Sync + 'static) -> Self {
        assert!(arity >= 1, "arity must be at least 1");
        Self { arity, eval: Arc::new(eval) }
    }

    pub fn from_derivation(alg: &PolyAlgebra, d: &crate::jacobi::Derivation) -> Self {
        let (alg, d) = (alg.clone(), d.clone());
        Self::new(1, move |a| d.apply(&alg, &a[0]))
    }

    pub fn from_biderivation(alg: &PolyAlgebra, l: &crate::jacobi::BiDerivation) -> Self {
        let (alg, l) = (alg.clone(), l.clone());
        Self::new(2, move |a| l.apply(&alg, &a[0], &a[1]))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[Polynomial]) -> Polynomial {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        (self.eval)(args)
    }

    pub fn scale(&self, c: Rational) -> Self {
        let inner = self.clone();
        Self::new(self.arity, move |a| inner.eval(a).scale(&c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let (p, q) = (self.clone(), other.clone());
        Self::new(self.arity, move |a| &p.eval(a) + &q.eval(a))
    }

    /// First transposition `(i, j)` for which `self` fails to change sign.
    pub fn alternation_defect(&self, args: &[Polynomial]) -> Option<(usize, usize)> {
        let base = self.eval(args);
        for i in 0..self.arity {
            for j in i + 1..self.arity {
                let mut swapped = args.to_vec();
                swapped.swap(i, j);
                if !(&self.eval(&swapped) + &base).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// All `(p, n−p)`-shuffles as (first block, second block, sign).
fn shuffles(n: usize, p: usize) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, chosen: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>, bool)>) {
        if chosen.len() == p {
            let rest: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            let inversions: usize = chosen.iter().enumerate().map(|(k, &s)| s - k).sum();
            out.push((chosen.clone(), rest, inversions % 2 == 1));
            return;
        }
        for i in start..n {
            chosen.push(i);
            rec(i + 1, n, p, chosen, out);
            chosen.pop();
        }
    }
    rec(0, n, p, &mut chosen, &mut out);
    out
}

/// `i_P Q`, of arity `p + q − 1`.
pub fn insertion(p: &SkewMultiMap, q: &SkewMultiMap) -> SkewMultiMap {
    let n = p.arity + q.arity - 1;
    let shuffles = shuffles(n, p.arity);
    let (p, q) = (p.clone(), q.clone());
    SkewMultiMap::new(n, move |a| {
        let mut out: Option<Polynomial> = None;
        for (first, rest, negative) in &shuffles {
            let inner_args: Vec<Polynomial> = first.iter().map(|&i| a[i].clone()).collect();
            let mut outer_args = Vec::with_capacity(q.arity);
            outer_args.push(p.eval(&inner_args));
            outer_args.extend(rest.iter().map(|&i| a[i].clone()));
            let v = q.eval(&outer_args);
            let v = if *negative { -&v } else { v };
            out = Some(match out {
                Some(acc) => &acc + &v,
                None => v,
            });
        }
        out.expect("at least one shuffle")
    })
}

/// `[P, Q] = i_P Q − (−1)^{(p−1)(q−1)} i_Q P`.
pub fn nr_bracket(p: &SkewMultiMap, q: &SkewMultiMap) -> SkewMultiMap {
    let sign_even = ((p.arity - 1) * (q.arity - 1)).is_multiple_of(2);
    let second = insertion(q, p);
    let second = if sign_even { second.scale(int(-1)) } else { second };
    insertion(p, q).add(&second)
}

/// `(Λ∧Γ)(x,y,z) = Λ(x,y)Γ(z) − Λ(x,z)Γ(y) + Λ(y,z)Γ(x)`.
pub fn wedge(alg: &PolyAlgebra, l: &SkewMultiMap, g: &SkewMultiMap) -> SkewMultiMap {
    assert_eq!(l.arity, 2, "wedge expects a 2-map");
    assert_eq!(g.arity, 1, "wedge expects a 1-map");
    let (alg, l, g) = (alg.clone(), l.clone(), g.clone());
    SkewMultiMap::new(3, move |a| {
        let (x, y, z) = (&a[0], &a[1], &a[2]);
        let t1 = alg.mul(&l.eval(&[x.clone(), y.clone()]), &g.eval(std::slice::from_ref(z)));
        let t2 = alg.mul(&l.eval(&[x.clone(), z.clone()]), &g.eval(std::slice::from_ref(y)));
        let t3 = alg.mul(&l.eval(&[y.clone(), z.clone()]), &g.eval(std::slice::from_ref(x)));
        &(&t1 - &t2) + &t3
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compatibility {
    /// Nonzero values of `[Γ, Λ]` on grid pairs `i < j`.
    pub r1: Vec<GridViolation>,
    /// Nonzero values of `[Λ, Λ] + WEDGE_COEFFICIENT·Λ∧Γ` on grid triples
    /// `i < j < k`.
    pub r2: Vec<GridViolation>,
}

impl Compatibility {
    pub fn is_zero(&self) -> bool {
        self.r1.is_empty() && self.r2.is_empty()
    }
}

/// The two residual maps of a pair.
pub fn compatibility_maps(alg: &PolyAlgebra, pair: &JacobiPair) -> (SkewMultiMap, SkewMultiMap) {
    let l = SkewMultiMap::from_biderivation(alg, &pair.lambda);
    let g = SkewMultiMap::from_derivation(alg, &pair.gamma);
    let r1 = nr_bracket(&g, &l);
    let r2 = nr_bracket(&l, &l).add(&wedge(alg, &l, &g).scale(int(WEDGE_COEFFICIENT)));
    (r1, r2)
}

/// Both compatibility residuals scanned on the monomial grid. The maps are
/// alternating, so strictly increasing index tuples suffice.
pub fn compatibility_residuals(alg: &PolyAlgebra, pair: &JacobiPair, degree: u32) -> Compatibility {
    let (m1, m2) = compatibility_maps(alg, pair);
    let grid = alg.grid(degree);
    let m = grid.len();
    let r1 = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (grid, m1) = (&grid, &m1);
            (i + 1..m).filter_map(move |j| {
                let r = m1.eval(&[grid[i].clone(), grid[j].clone()]);
                (!r.is_zero()).then(|| GridViolation { check: "nr-gamma-lambda", indices: vec![i, j], residual: r })
            })
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let r2 = pairs
        .into_par_iter()
        .flat_map_iter(|(i, j)| {
            let (grid, m2) = (&grid, &m2);
            (j + 1..m).filter_map(move |k| {
                let r = m2.eval(&[grid[i].clone(), grid[j].clone(), grid[k].clone()]);
                (!r.is_zero()).then(|| GridViolation { check: "nr-lambda-lambda", indices: vec![i, j, k], residual: r })
            })
        })
        .collect();
    Compatibility { r1, r2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{first_jacobi_violation, BiDerivation, Derivation};
    use crate::poly::PolyAlgebra;

    fn xy() -> PolyAlgebra {
        PolyAlgebra::new(["x", "y"]).unwrap()
    }

    fn xyz() -> PolyAlgebra {
        PolyAlgebra::new(["x", "y", "z"]).unwrap()
    }

    fn pair(alg: &PolyAlgebra, lambda: &[(usize, usize, &str)], gamma: &[&str]) -> JacobiPair {
        let mut l = BiDerivation::zero(alg.nvars());
        for (i, j, c) in lambda {
            l.add(*i, *j, alg.parse(c).unwrap()).unwrap();
        }
        let g = Derivation::new(gamma.iter().map(|c| alg.parse(c).unwrap()).collect()).unwrap();
        JacobiPair::new(l, g).unwrap()
    }

    #[test]
    fn shuffle_signs() {
        let s = shuffles(3, 2);
        let got: Vec<(Vec<usize>, bool)> = s.into_iter().map(|(a, _, n)| (a, n)).collect();
        assert_eq!(got, vec![(vec![0, 1], false), (vec![0, 2], true), (vec![1, 2], false)]);
        assert_eq!(shuffles(2, 1).len(), 2);
    }

    #[test]
    fn insertion_examples() {
        let a = xy();
        let g1 = SkewMultiMap::from_derivation(
            &a,
            &Derivation::new(vec![a.parse("y").unwrap(), a.parse("x^2").unwrap()]).unwrap(),
        );
        let g2 = SkewMultiMap::from_derivation(&a, &Derivation::partial(2, 0));
        let f = a.parse("x^3 y").unwrap();
        assert_eq!(insertion(&g1, &g2).eval(std::slice::from_ref(&f)), g2.eval(&[g1.eval(std::slice::from_ref(&f))]));

        let p = pair(&a, &[(0, 1, "x y")], &["y", "1"]);
        let l = SkewMultiMap::from_biderivation(&a, &p.lambda);
        let g = SkewMultiMap::from_derivation(&a, &p.gamma);
        let args = [a.parse("x^2").unwrap(), a.parse("x y").unwrap(), a.parse("y + 1").unwrap()];
        let (x, y, z) = (&args[0], &args[1], &args[2]);
        let lv = |u: &Polynomial, v: &Polynomial| l.eval(&[u.clone(), v.clone()]);
        let expected = &(&lv(&lv(x, y), z) - &lv(&lv(x, z), y)) + &lv(&lv(y, z), x);
        assert_eq!(insertion(&l, &l).eval(&args), expected);
        let gv = |u: &Polynomial| g.eval(std::slice::from_ref(u));
        let expected = &lv(&gv(x), y) - &lv(&gv(y), x);
        assert_eq!(insertion(&g, &l).eval(&[x.clone(), y.clone()]), expected);
    }

    #[test]
    fn bracket_examples() {
        let a = xy();
        let p = pair(&a, &[(0, 1, "x^2 + y")], &["x y", "1"]);
        let l = SkewMultiMap::from_biderivation(&a, &p.lambda);
        let g = SkewMultiMap::from_derivation(&a, &p.gamma);
        let args: Vec<Polynomial> = ["x y", "y^2", "x + 2"].iter().map(|s| a.parse(s).unwrap()).collect();
        assert_eq!(nr_bracket(&l, &l).eval(&args), insertion(&l, &l).eval(&args).scale(&int(2)));
        assert!(nr_bracket(&g, &g).eval(&args[..1]).is_zero());
        let c = SkewMultiMap::from_biderivation(&a, &BiDerivation::basic(2, 0, 1));
        for u in a.grid(2) {
            for v in a.grid(2) {
                for w in a.grid(2) {
                    assert!(nr_bracket(&c, &c).eval(&[u.clone(), v.clone(), w.clone()]).is_zero());
                }
            }
        }
    }

    #[test]
    fn wedge_examples() {
        let a = xyz();
        let l = SkewMultiMap::from_biderivation(&a, &BiDerivation::basic(3, 0, 1));
        let g = SkewMultiMap::from_derivation(&a, &Derivation::partial(3, 2));
        let w = wedge(&a, &l, &g);
        assert_eq!(w.eval(&[a.var(0), a.var(1), a.var(2)]), a.one());
        let zero = SkewMultiMap::from_derivation(&a, &Derivation::zero(3));
        assert!(wedge(&a, &l, &zero).eval(&[a.var(0), a.var(1), a.var(2)]).is_zero());
        let b = xy();
        let p = pair(&b, &[(0, 1, "x y + 1")], &["y^2", "x"]);
        let w =
            wedge(&b, &SkewMultiMap::from_biderivation(&b, &p.lambda), &SkewMultiMap::from_derivation(&b, &p.gamma));
        let grid = b.grid(2);
        for u in &grid {
            for v in &grid {
                for z in &grid {
                    assert!(w.eval(&[u.clone(), v.clone(), z.clone()]).is_zero());
                }
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let a = xy();
        assert!(compatibility_residuals(&a, &pair(&a, &[(0, 1, "1")], &["0", "0"]), 4).is_zero());
        assert!(compatibility_residuals(&a, &pair(&a, &[(0, 1, "1")], &["1", "0"]), 4).is_zero());
        let b = xyz();
        let bad = pair(&b, &[(0, 1, "1")], &["0", "0", "1"]);
        let c = compatibility_residuals(&b, &bad, 3);
        assert!(!c.r2.is_empty());
        assert!(first_jacobi_violation(&b, &bad.reconstruct(), 3).is_some());
    }

    #[test]
    fn wedge_coefficient_calibration() {
        // Λ = ∂x∧(∂y + x∂z), Γ = −∂z is Jacobi while [Λ,Λ] and Λ∧Γ are
        // both nonzero, which pins the constant.
        let a = xyz();
        let p = pair(&a, &[(0, 1, "1"), (0, 2, "x")], &["0", "0", "-1"]);
        assert!(first_jacobi_violation(&a, &p.reconstruct(), 3).is_none());
        let l = SkewMultiMap::from_biderivation(&a, &p.lambda);
        let g = SkewMultiMap::from_derivation(&a, &p.gamma);
        let args = [a.var(0), a.var(1), a.var(2)];
        let ll = nr_bracket(&l, &l).eval(&args);
        let lg = wedge(&a, &l, &g).eval(&args);
        assert!(!ll.is_zero() && !lg.is_zero());
        assert_eq!(ll, lg.scale(&int(-WEDGE_COEFFICIENT)));
        assert!(compatibility_residuals(&a, &p, 3).is_zero());
    }

    #[test]
    fn constructed_maps_alternate() {
        let a = xyz();
        let p = pair(&a, &[(0, 1, "z"), (1, 2, "x^2"), (0, 2, "y")], &["y", "z x", "1"]);
        let (r1, r2) = compatibility_maps(&a, &p);
        let l = SkewMultiMap::from_biderivation(&a, &p.lambda);
        let g = SkewMultiMap::from_derivation(&a, &p.gamma);
        let args: Vec<Polynomial> = ["x y", "z^2 + x", "y - 1"].iter().map(|s| a.parse(s).unwrap()).collect();
        assert_eq!(l.alternation_defect(&args[..2]), None);
        assert_eq!(r1.alternation_defect(&args[..2]), None);
        assert_eq!(r2.alternation_defect(&args), None);
        assert_eq!(insertion(&l, &l).alternation_defect(&args), None);
        assert_eq!(wedge(&a, &l, &g).alternation_defect(&args), None);
        let sym = SkewMultiMap::new(2, {
            let a = a.clone();
            move |v| a.mul(&v[0], &v[1])
        });
        assert_eq!(sym.alternation_defect(&args[..2]), Some((0, 1)));
    }
}
