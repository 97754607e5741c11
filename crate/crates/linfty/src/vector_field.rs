//! Formal vector fields on a graded space and their dictionary with multibracket families.
//!
//! A field is stored as `Σ X^i ∂_i` with `X^i` a polynomial in the coordinates
//! `x^a` (degree `-|u_a|`) and `∂_i` of degree `|u_i|`.

use crate::graded::{odd, symmetry_factor, Mono};
use crate::multibracket::DKey;
use crate::poly::{left_deriv, mul, poly_degree, Poly};
use crate::scalar::sign_q;
use crate::vector::Vector;

/// Key `(coordinate monomial, i)` for the term `x^mono ∂_i`.
pub type VfKey = (Mono, usize);
pub type VectorField = Vector<VfKey>;

/// Coordinate degrees `-|u_a|` for a space with degrees `|u_a|`.
pub fn coordinate_degrees(degrees: &[i64]) -> Vec<i64> {
    degrees.iter().map(|d| -d).collect()
}

fn term_degree(coord: &[i64], space: &[i64], k: &VfKey) -> i64 {
    poly_degree(coord, &k.0) + space[k.1]
}

/// Component `X^i` as a polynomial.
pub fn component(x: &VectorField, i: usize) -> Poly {
    x.iter().filter(|((_, j), _)| *j == i).map(|((m, _), c)| (m.clone(), c.clone())).collect()
}

/// `X(f) = Σ_j X^j ∂⃗_j f`.
pub fn apply(space: &[i64], x: &VectorField, f: &Poly) -> Poly {
    let coord = coordinate_degrees(space);
    let mut out = Poly::zero();
    for j in 0..space.len() {
        let xj = component(x, j);
        if xj.is_zero() {
            continue;
        }
        let df = left_deriv(&coord, f, j);
        if df.is_zero() {
            continue;
        }
        out += mul(&coord, &xj, &df);
    }
    out
}

fn split(space: &[i64], x: &VectorField) -> Vec<(i64, VectorField)> {
    let coord = coordinate_degrees(space);
    let mut parts: std::collections::BTreeMap<i64, VectorField> = Default::default();
    for (k, c) in x.iter() {
        parts.entry(term_degree(&coord, space, k)).or_default().add_term(k.clone(), c.clone());
    }
    parts.into_iter().collect()
}

/// Graded commutator `[X, Y] = Σ_i (X(Y^i) - (-1)^{|X||Y|} Y(X^i)) ∂_i`.
pub fn commutator(space: &[i64], x: &VectorField, y: &VectorField) -> VectorField {
    let mut out = VectorField::zero();
    for (dx, xp) in split(space, x) {
        for (dy, yp) in split(space, y) {
            let s = sign_q(odd(dx) && odd(dy));
            for i in 0..space.len() {
                let xy = apply(space, &xp, &component(&yp, i));
                let yx = apply(space, &yp, &component(&xp, i));
                for (m, c) in xy.iter() {
                    out.add_term((m.clone(), i), c.clone());
                }
                for (m, c) in yx.iter() {
                    out.add_term((m.clone(), i), -(&s * c));
                }
            }
        }
    }
    out
}

/// Sign attached to the key `(S, i)` when passing between families and fields:
/// `-(-1)^{e(S) + (|u_i|+1)|S|}` with `e(S)` the number of pairs of odd inputs.
fn dictionary_sign(space: &[i64], k: &DKey) -> bool {
    let n_odd = k.0.iter().filter(|&&a| odd(space[a])).count();
    let pairs = (n_odd * n_odd.saturating_sub(1) / 2) % 2 == 1;
    let total: i64 = k.0.iter().map(|&a| space[a]).sum();
    !(pairs ^ (odd(total) && !odd(space[k.1])))
}

/// Field of a multibracket family on a space with degrees `space`.
pub fn to_field(space: &[i64], terms: &Vector<DKey>) -> VectorField {
    let mut out = VectorField::zero();
    for (k, c) in terms.iter() {
        let f = symmetry_factor(&k.0) * sign_q(dictionary_sign(space, k)) * c;
        out.add_term(k.clone(), f);
    }
    out
}

/// Inverse of [`to_field`].
pub fn from_field(space: &[i64], x: &VectorField) -> Vector<DKey> {
    let mut out = Vector::zero();
    for (k, c) in x.iter() {
        let f = sign_q(dictionary_sign(space, k)) * c / symmetry_factor(&k.0);
        out.add_term(k.clone(), f);
    }
    out
}
