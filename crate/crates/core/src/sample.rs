//! Seeded pseudo-random generators for property checks. Every generator is
//! driven by a caller-supplied [`ChaCha8Rng`], so a seed fully determines
//! the sample.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraSpec, Element};
use crate::jacobi::{BiDerivation, Derivation, JacobiPair};
use crate::poly::{BiDiffOp, DiffOp, Monomial, PolyAlgebra, Polynomial};
use crate::rational::{rat, Rational};
use crate::weyl::WeylElement;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n/d` with `|n| ≤ 5`, `1 ≤ d ≤ 3`.
pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn element(rng: &mut ChaCha8Rng, algebra: &AlgebraSpec) -> Element {
    Element::new((0..algebra.dim()).map(|_| rational(rng)).collect())
}

fn multi_index(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Monomial {
    let total = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; nvars];
    for _ in 0..total {
        e[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::new(e)
}

/// Up to `max_terms` terms of total degree ≤ `max_degree`, reduced.
pub fn polynomial(rng: &mut ChaCha8Rng, alg: &PolyAlgebra, max_degree: u32, max_terms: usize) -> Polynomial {
    let n = rng.gen_range(0..=max_terms);
    let p =
        Polynomial::from_terms(alg.nvars(), (0..n).map(|_| (multi_index(rng, alg.nvars(), max_degree), rational(rng))));
    alg.reduce(p)
}

pub fn diffop(rng: &mut ChaCha8Rng, alg: &PolyAlgebra, max_order: u32, coeff_degree: u32) -> DiffOp {
    let n = rng.gen_range(1..=3);
    DiffOp::from_terms(
        alg.nvars(),
        (0..n).map(|_| (multi_index(rng, alg.nvars(), max_order), polynomial(rng, alg, coeff_degree, 2))),
    )
}

pub fn bidiffop(rng: &mut ChaCha8Rng, alg: &PolyAlgebra, max_order: u32, coeff_degree: u32) -> BiDiffOp {
    let n = rng.gen_range(1..=3);
    BiDiffOp::from_terms(
        alg.nvars(),
        (0..n).map(|_| {
            let key = (multi_index(rng, alg.nvars(), max_order), multi_index(rng, alg.nvars(), max_order));
            (key, polynomial(rng, alg, coeff_degree, 2))
        }),
    )
}

pub fn pair(rng: &mut ChaCha8Rng, alg: &PolyAlgebra, coeff_degree: u32) -> JacobiPair {
    let n = alg.nvars();
    let mut lambda = BiDerivation::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            lambda.add(i, j, polynomial(rng, alg, coeff_degree, 2)).expect("valid indices");
        }
    }
    let gamma = Derivation::new((0..n).map(|_| polynomial(rng, alg, coeff_degree, 2)).collect()).expect("valid images");
    JacobiPair::new(lambda, gamma).expect("same algebra")
}

/// A nonzero symmetric bidifferential operator of bi-order ≤ (1,1).
pub fn symmetric_perturbation(rng: &mut ChaCha8Rng, alg: &PolyAlgebra, coeff_degree: u32) -> BiDiffOp {
    let n = alg.nvars();
    let one = Monomial::one(n);
    loop {
        let mut terms = Vec::new();
        terms.push(((one.clone(), one.clone()), polynomial(rng, alg, coeff_degree, 1)));
        for i in 0..n {
            let c = polynomial(rng, alg, coeff_degree, 1);
            let ei = Monomial::var(n, i);
            terms.push(((ei.clone(), one.clone()), c.clone()));
            terms.push(((one.clone(), ei), c));
        }
        for i in 0..n {
            for j in i..n {
                let c = polynomial(rng, alg, coeff_degree, 1);
                let (ei, ej) = (Monomial::var(n, i), Monomial::var(n, j));
                if i == j {
                    terms.push(((ei, ej), c));
                } else {
                    terms.push(((ei.clone(), ej.clone()), c.clone()));
                    terms.push(((ej, ei), c));
                }
            }
        }
        let s = BiDiffOp::from_terms(n, terms).reduced(alg);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Up to `max_terms` terms `c QⁱPʲ` with `i + j ≤ max_degree`.
pub fn weyl(rng: &mut ChaCha8Rng, max_degree: u32, max_terms: usize) -> WeylElement {
    let n = rng.gen_range(1..=max_terms);
    WeylElement::from_terms((0..n).map(|_| {
        let d = rng.gen_range(0..=max_degree);
        let i = rng.gen_range(0..=d);
        ((i, d - i), rational(rng))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let alg = PolyAlgebra::new(["x", "y"]).unwrap();
        let a = pair(&mut rng(7), &alg, 2);
        let b = pair(&mut rng(7), &alg, 2);
        assert_eq!(a, b);
        assert_eq!(weyl(&mut rng(3), 3, 4), weyl(&mut rng(3), 3, 4));
    }

    #[test]
    fn perturbations_are_symmetric_first_order() {
        let alg = PolyAlgebra::new(["x", "y", "z"]).unwrap();
        let mut r = rng(0);
        for _ in 0..20 {
            let s = symmetric_perturbation(&mut r, &alg, 1);
            assert!(!s.is_zero());
            assert!(s.is_symmetric(&alg));
            let (a, b) = s.structural_bi_order(&alg);
            assert!(a <= 1 && b <= 1);
        }
    }
}
