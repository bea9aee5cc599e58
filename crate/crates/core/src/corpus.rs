//! Fixed Jacobi-pair test corpus over ℚ[x,y] and ℚ[x,y,z], coefficient
//! degree ≤ 2, mixing pairs that satisfy the Jacobi identity and pairs that
//! do not.

use crate::jacobi::{BiDerivation, Derivation, JacobiPair};
use crate::poly::PolyAlgebra;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub algebra: PolyAlgebra,
    pub pair: JacobiPair,
}

type Spec = (&'static str, &'static [(usize, usize, &'static str)], &'static [&'static str]);

const TWO: &[Spec] = &[
    ("symplectic", &[(0, 1, "1")], &["0", "0"]),
    ("symplectic+dx", &[(0, 1, "1")], &["1", "0"]),
    ("linear-lambda+dx", &[(0, 1, "x")], &["1", "0"]),
    ("linear-lambda", &[(0, 1, "x")], &["0", "0"]),
    ("quadratic-lambda", &[(0, 1, "x^2 + y^2")], &["0", "0"]),
    ("gamma-only", &[], &["y", "x^2"]),
    ("symplectic+y-dx", &[(0, 1, "1")], &["y", "0"]),
    ("symplectic+x-dx", &[(0, 1, "1")], &["x", "0"]),
    ("y-lambda+dy", &[(0, 1, "y")], &["0", "1"]),
    ("xy-lambda+euler", &[(0, 1, "x y")], &["x", "y"]),
    ("symplectic+euler", &[(0, 1, "1")], &["x", "y"]),
];

const THREE: &[Spec] = &[
    ("symplectic-xy", &[(0, 1, "1")], &["0", "0", "0"]),
    ("symplectic-xy+dz", &[(0, 1, "1")], &["0", "0", "1"]),
    ("contact-like", &[(0, 1, "1"), (0, 2, "x")], &["0", "0", "-1"]),
    ("contact-like-flipped", &[(0, 1, "1"), (0, 2, "x")], &["0", "0", "1"]),
    ("contact", &[(0, 1, "-1"), (1, 2, "y")], &["0", "0", "1"]),
    ("contact-flipped", &[(0, 1, "-1"), (1, 2, "y")], &["0", "0", "-1"]),
    ("so3", &[(1, 2, "x"), (2, 0, "y"), (0, 1, "z")], &["0", "0", "0"]),
    ("single-linear", &[(1, 2, "x")], &["0", "0", "0"]),
    ("z-lambda+dz", &[(0, 1, "z")], &["0", "0", "1"]),
    ("quadratic-xy", &[(0, 1, "x^2")], &["0", "0", "0"]),
    ("gamma-only-3", &[], &["0", "x", "0"]),
    ("two-blocks+y-dx", &[(0, 1, "1"), (1, 2, "1")], &["y", "0", "0"]),
    ("x-dxdz+dy", &[(0, 2, "x")], &["0", "1", "0"]),
    ("mixed-quadratic", &[(0, 2, "y"), (1, 2, "x z")], &["0", "0", "0"]),
];

fn build(alg: &PolyAlgebra, spec: &Spec) -> CorpusEntry {
    let (name, lambda, gamma) = *spec;
    let mut l = BiDerivation::zero(alg.nvars());
    for (i, j, c) in lambda {
        l.add(*i, *j, alg.parse(c).expect("corpus coefficient")).expect("corpus index");
    }
    let g = Derivation::new(gamma.iter().map(|c| alg.parse(c).expect("corpus coefficient")).collect())
        .expect("corpus derivation");
    CorpusEntry { name, algebra: alg.clone(), pair: JacobiPair::new(l, g).expect("corpus pair") }
}

pub fn jacobi_corpus() -> Vec<CorpusEntry> {
    let xy = PolyAlgebra::new(["x", "y"]).expect("static algebra");
    let xyz = PolyAlgebra::new(["x", "y", "z"]).expect("static algebra");
    TWO.iter().map(|s| build(&xy, s)).chain(THREE.iter().map(|s| build(&xyz, s))).collect()
}
