//! Exact-arithmetic verification of bracket identities.
//!
//! The crate covers two settings. On finite-dimensional associative algebras
//! (given by structure constants) it checks the Leibniz rule, Loday/Jacobi
//! identities and skew-symmetry of arbitrary bilinear operations, enumerates
//! every Leibniz bracket by exact nullspace computation, and builds the
//! central element relating a Leibniz bracket to the commutator. On
//! polynomial algebras it provides linear and bilinear differential operators
//! with the `δ(x)` order calculus, first-order Jacobi brackets
//! `Λ(x,y) + xΓ(y) − yΓ(x)`, and the Nijenhuis–Richardson compatibility
//! conditions. The first Weyl algebra gives a small infinite-dimensional
//! playground for the commutator identities.
//!
//! All arithmetic is over ℚ; every check is an exact zero test.

pub mod algebra;
pub mod bilinear;
pub mod corpus;
pub mod jacobi;
pub mod linalg;
pub mod nr;
pub mod poly;
pub mod rational;
pub mod sample;
pub mod weyl;

pub use algebra::{AlgebraError, AlgebraLoadError, AlgebraSpec, Element, Side, UnitTerm};
pub use bilinear::{
    solve_leibniz_space, AlgebraRef, BilinearOp, BilinearWire, BracketError, LeibnizRule, LeibnizViolation,
};
pub use jacobi::{BiDerivation, Derivation, GridViolation, JacobiError, JacobiPair};
pub use linalg::Subspace;
pub use nr::{Compatibility, SkewMultiMap};
pub use poly::{remark4_op, Arg, BiDiffOp, BiOrder, DiffOp, Monomial, Order, PolyAlgebra, PolyError, Polynomial};
pub use rational::Rational;
pub use weyl::WeylElement;
