//! Sparse vectors over an ordered key set with exact coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num::Zero;

use crate::scalar::Q;

/// Finite linear combination of keys. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for Vector<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Vector<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        let mut v = Self::zero();
        v.terms.insert(k, Q::from_integer(1.into()));
        v
    }

    pub fn term(k: K, c: Q) -> Self {
        let mut v = Self::zero();
        v.add_term(k, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&Q> {
        self.terms.get(k)
    }

    pub fn coeff(&self, k: &K) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> BTreeMap<K, Q> {
        self.terms
    }

    pub fn add_term(&mut self, k: K, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Vector<L> {
        let mut out = Vector::zero();
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Linear extension of `f` from keys to vectors.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Vector<L>) -> Vector<L> {
        let mut out = Vector::zero();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    pub fn first(&self) -> Option<(&K, &Q)> {
        self.terms.iter().next()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for Vector<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl<K: Ord + Clone> AddAssign<&Vector<K>> for Vector<K> {
    fn add_assign(&mut self, rhs: &Vector<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Ord + Clone> AddAssign<Vector<K>> for Vector<K> {
    fn add_assign(&mut self, rhs: Vector<K>) {
        for (k, v) in rhs.terms {
            self.add_term(k, v);
        }
    }
}

impl<K: Ord + Clone> SubAssign<&Vector<K>> for Vector<K> {
    fn sub_assign(&mut self, rhs: &Vector<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }
}

impl<K: Ord + Clone> Add for Vector<K> {
    type Output = Vector<K>;
    fn add(mut self, rhs: Vector<K>) -> Vector<K> {
        self += rhs;
        self
    }
}

impl<K: Ord + Clone> Add<&Vector<K>> for &Vector<K> {
    type Output = Vector<K>;
    fn add(self, rhs: &Vector<K>) -> Vector<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for Vector<K> {
    type Output = Vector<K>;
    fn sub(mut self, rhs: Vector<K>) -> Vector<K> {
        self -= &rhs;
        self
    }
}

impl<K: Ord + Clone> Sub<&Vector<K>> for &Vector<K> {
    type Output = Vector<K>;
    fn sub(self, rhs: &Vector<K>) -> Vector<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for Vector<K> {
    type Output = Vector<K>;
    fn neg(self) -> Vector<K> {
        Self { terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect() }
    }
}

impl<K: Ord + Clone> Neg for &Vector<K> {
    type Output = Vector<K>;
    fn neg(self) -> Vector<K> {
        -(self.clone())
    }
}
