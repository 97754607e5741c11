//! Graded Lie algebras on sparse bases.

use std::fmt::Debug;

use crate::exec::Exec;
use crate::graded::GradedSpace;
use crate::linfty::FiniteDgla;
use crate::multibracket::{bracket_terms, key_degree, DKey};
use crate::vector::Vector;

pub trait GradedLie: Sync {
    type Key: Ord + Clone + Send + Sync + Debug;

    fn degree(&self, k: &Self::Key) -> i64;

    fn bracket(&self, a: &Vector<Self::Key>, b: &Vector<Self::Key>) -> Vector<Self::Key>;

    fn label(&self, k: &Self::Key) -> String;
}

impl GradedLie for FiniteDgla {
    type Key = usize;

    fn degree(&self, k: &usize) -> i64 {
        self.space.degree(*k)
    }

    fn bracket(&self, a: &Vector<usize>, b: &Vector<usize>) -> Vector<usize> {
        FiniteDgla::bracket(self, a, b)
    }

    fn label(&self, k: &usize) -> String {
        self.space.symbol(*k).to_string()
    }
}

/// Multibracket families on a shifted space `U` with the Nijenhuis-Richardson bracket,
/// truncated at arity `cap` (the quotient by the ideal of higher arities).
#[derive(Debug, Clone)]
pub struct DerLie {
    pub space: GradedSpace,
    pub cap: usize,
    pub exec: Exec,
}

impl DerLie {
    pub fn new(space: GradedSpace, cap: usize) -> Self {
        Self { space, cap, exec: Exec::default() }
    }

    pub fn degrees(&self) -> &[i64] {
        self.space.degrees()
    }
}

pub fn dkey_label(space: &GradedSpace, k: &DKey) -> String {
    let ins = if k.0.is_empty() { "1".to_string() } else { k.0.iter().map(|&i| space.symbol(i)).collect::<Vec<_>>().join("*") };
    format!("{ins}->{}", space.symbol(k.1))
}

impl GradedLie for DerLie {
    type Key = DKey;

    fn degree(&self, k: &DKey) -> i64 {
        key_degree(self.space.degrees(), k)
    }

    fn bracket(&self, a: &Vector<DKey>, b: &Vector<DKey>) -> Vector<DKey> {
        bracket_terms(self.space.degrees(), a, b, self.cap, self.exec)
    }

    fn label(&self, k: &DKey) -> String {
        dkey_label(&self.space, k)
    }
}
