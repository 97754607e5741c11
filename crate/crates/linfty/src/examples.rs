//! Small algebras used by the corpus, the tests and the benches.

use std::sync::Arc;

use crate::graded::GradedSpace;
use crate::linfty::{dgla_structure, FiniteDgla, LInftyMorphism, LInftyStructure, Representation};
use crate::scalar::q;
use crate::vector::Vector;

pub fn sl2_space() -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new("sl2", [("h", 0), ("e", 0), ("f", 0)]).expect("sl2 basis"))
}

/// `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2_dgla() -> FiniteDgla {
    let mut g = FiniteDgla::new(sl2_space());
    g.set_bracket(0, 1, Vector::term(1, q(2)));
    g.set_bracket(0, 2, Vector::term(2, q(-2)));
    g.set_bracket(1, 2, Vector::term(0, q(1)));
    g
}

pub fn sl2(cap: usize) -> LInftyStructure {
    sl2_dgla().to_linfty(cap).expect("sl2")
}

pub fn aff1_space() -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new("aff1", [("x", 0), ("y", 0)]).expect("aff1 basis"))
}

/// `[x,y] = y`.
pub fn aff1_dgla() -> FiniteDgla {
    let mut g = FiniteDgla::new(aff1_space());
    g.set_bracket(0, 1, Vector::term(1, q(1)));
    g
}

pub fn aff1(cap: usize) -> LInftyStructure {
    aff1_dgla().to_linfty(cap).expect("aff1")
}

pub fn abelian(dim: usize, degree: i64, cap: usize) -> LInftyStructure {
    let space = GradedSpace::new(format!("ab{dim}"), (0..dim).map(|i| (format!("a{i}"), degree))).expect("basis");
    LInftyStructure::abelian(Arc::new(space), cap)
}

/// The adjoint representation of a Lie algebra given as a [`FiniteDgla`] with `d = 0`.
pub fn adjoint(g: &FiniteDgla, cap: usize) -> Representation {
    let l = g.to_linfty(cap).expect("lie algebra");
    let n = g.space.dim();
    let v = Arc::new(g.space.as_ref().clone());
    let mut rho = Vector::zero();
    for x in 0..n {
        for u in 0..n {
            for (&w, c) in g.bracket_basis(x, u).iter() {
                rho.add_term((vec![x], w * n + u), c.clone());
            }
        }
    }
    Representation { g: l, v, rho, differential: Vector::zero() }
}

/// `aff(1) -> gl(2)`, `x ↦ E[0,0]`, `y ↦ E[0,1]`.
pub fn aff1_to_gl2(cap: usize) -> LInftyMorphism {
    let v = GradedSpace::new("k2", [("v0", 0), ("v1", 0)]).expect("basis");
    let target = FiniteDgla::gl(&v).to_linfty(cap).expect("gl2");
    let f = Vector::term((vec![0], 0), q(1)) + Vector::term((vec![1], 1), q(1));
    LInftyMorphism::new(aff1(cap), target, f).expect("degree 0")
}

/// A cochain complex `a -> b` viewed as an abelian dgla.
pub fn two_term_complex(cap: usize) -> LInftyStructure {
    let space = Arc::new(GradedSpace::new("c", [("a", 0), ("b", 1)]).expect("basis"));
    dgla_structure(space, cap, &[(0, Vector::basis(1))], &[]).expect("complex")
}
