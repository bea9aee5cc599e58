use bracketforge::jacobi::{extract_pair, first_jacobi_violation, left_right_ops, skew_emergence_test, JacobiPair};
use bracketforge::nr::compatibility_residuals;
use bracketforge::poly::PolyAlgebra;
use bracketforge::sample;
use bracketforge::{BiDerivation, Derivation};

fn xy() -> PolyAlgebra {
    PolyAlgebra::new(["x", "y"]).unwrap()
}

fn xyz() -> PolyAlgebra {
    PolyAlgebra::new(["x", "y", "z"]).unwrap()
}

#[test]
fn extract_inverts_reconstruct() {
    for alg in [xy(), xyz()] {
        let mut rng = sample::rng(1);
        for _ in 0..40 {
            let p = sample::pair(&mut rng, &alg, 2);
            assert_eq!(extract_pair(&alg, &p.reconstruct(), 3).unwrap(), p);
        }
    }
}

#[test]
fn gamma_and_lambda_vanish_on_one() {
    let alg = xyz();
    let mut rng = sample::rng(2);
    let one = alg.one();
    for _ in 0..20 {
        let p = sample::pair(&mut rng, &alg, 2);
        assert!(p.gamma.apply(&alg, &one).is_zero());
        for f in alg.grid(3) {
            assert!(p.lambda.apply(&alg, &one, &f).is_zero());
        }
    }
}

#[test]
fn skew_first_order_brackets_have_opposite_left_right_ops() {
    let alg = xy();
    let mut rng = sample::rng(3);
    for _ in 0..40 {
        let d = sample::pair(&mut rng, &alg, 2).reconstruct();
        let x = sample::polynomial(&mut rng, &alg, 3, 3);
        let (l, r) = left_right_ops(&alg, &d, &x).unwrap();
        assert!(l.add(&r).is_zero());
    }
}

#[test]
fn two_variable_pairs_reduce_to_the_gamma_lambda_condition() {
    let alg = xy();
    let mut rng = sample::rng(4);
    for _ in 0..30 {
        let p = sample::pair(&mut rng, &alg, 2);
        let c = compatibility_residuals(&alg, &p, 3);
        assert!(c.r2.is_empty());
        let jacobi = first_jacobi_violation(&alg, &p.reconstruct(), 3).is_none();
        assert_eq!(jacobi, c.r1.is_empty());
        let poisson = JacobiPair::new(p.lambda.clone(), Derivation::zero(2)).unwrap();
        assert!(first_jacobi_violation(&alg, &poisson.reconstruct(), 4).is_none());
    }
}

#[test]
fn perturbations_of_three_variable_base_pairs_break_jacobi() {
    let alg = xyz();
    let mut lambda = BiDerivation::zero(3);
    lambda.add(0, 1, alg.one()).unwrap();
    lambda.add(0, 2, alg.var(0)).unwrap();
    let contact = JacobiPair::new(lambda, Derivation::new(vec![alg.zero(), alg.zero(), -&alg.one()]).unwrap()).unwrap();
    assert!(first_jacobi_violation(&alg, &contact.reconstruct(), 3).is_none());
    let mut rng = sample::rng(5);
    for _ in 0..10 {
        let s = sample::symmetric_perturbation(&mut rng, &alg, 1);
        assert!(skew_emergence_test(&alg, &contact, &s, 2).unwrap());
    }
}
