//! Graded-commutative polynomials on a finite set of generators.

use num::Zero;

use crate::graded::{odd, Mono};
use crate::scalar::{sign_q, Q};
use crate::vector::Vector;

pub type Poly = Vector<Mono>;

/// Product of two sorted monomials; `None` if an odd generator repeats.
pub fn mono_mul(degrees: &[i64], a: &[usize], b: &[usize]) -> Option<(Mono, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = false;
    let (mut i, mut j) = (0, 0);
    let mut odd_left_in_a = a.iter().filter(|&&x| odd(degrees[x])).count();
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
            if odd(degrees[a[i]]) {
                odd_left_in_a -= 1;
            }
            out.push(a[i]);
            i += 1;
        } else {
            if odd(degrees[b[j]]) && odd_left_in_a % 2 == 1 {
                sign = !sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    if out.windows(2).any(|w| w[0] == w[1] && odd(degrees[w[0]])) {
        return None;
    }
    Some((out, sign))
}

pub fn mul(degrees: &[i64], p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (a, ca) in p.iter() {
        for (b, cb) in q.iter() {
            if let Some((m, s)) = mono_mul(degrees, a, b) {
                out.add_term(m, sign_q(s) * ca * cb);
            }
        }
    }
    out
}

/// Product truncated to monomials of length at most `max_len`.
pub fn mul_truncated(degrees: &[i64], p: &Poly, q: &Poly, max_len: usize) -> Poly {
    let mut out = Poly::zero();
    for (a, ca) in p.iter() {
        for (b, cb) in q.iter() {
            if a.len() + b.len() > max_len {
                continue;
            }
            if let Some((m, s)) = mono_mul(degrees, a, b) {
                out.add_term(m, sign_q(s) * ca * cb);
            }
        }
    }
    out
}

pub fn poly_degree(degrees: &[i64], m: &[usize]) -> i64 {
    m.iter().map(|&i| degrees[i]).sum()
}

/// Left derivative: `x` is moved to the front before being removed.
pub fn left_deriv(degrees: &[i64], p: &Poly, x: usize) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.iter() {
        let mut odd_before = 0usize;
        for (j, &y) in m.iter().enumerate() {
            if y == x {
                let s = odd(degrees[x]) && odd_before % 2 == 1;
                let mut rest = m.clone();
                rest.remove(j);
                out.add_term(rest, sign_q(s) * c);
            }
            if odd(degrees[y]) {
                odd_before += 1;
            }
        }
    }
    out
}

/// Right derivative: `x` is moved to the back before being removed.
pub fn right_deriv(degrees: &[i64], p: &Poly, x: usize) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.iter() {
        let n_odd = m.iter().filter(|&&y| odd(degrees[y])).count();
        let mut odd_upto = 0usize;
        for (j, &y) in m.iter().enumerate() {
            if odd(degrees[y]) {
                odd_upto += 1;
            }
            if y == x {
                let after = n_odd - odd_upto;
                let s = odd(degrees[x]) && after % 2 == 1;
                let mut rest = m.clone();
                rest.remove(j);
                out.add_term(rest, sign_q(s) * c);
            }
        }
    }
    out
}

/// `p^k / k!` truncated to length `max_len`, for `k = 0..=kmax`.
pub fn divided_powers(degrees: &[i64], p: &Poly, kmax: usize, max_len: usize) -> Vec<Poly> {
    let mut out = vec![Poly::basis(Vec::new())];
    for k in 1..=kmax {
        let prev = &out[k - 1];
        let next = mul_truncated(degrees, prev, p, max_len).scaled(&(Q::from_integer(1.into()) / Q::from_integer((k as i64).into())));
        out.push(next);
    }
    out
}

pub fn constant_term(p: &Poly) -> Q {
    p.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn odd_generators_anticommute() {
        let d = [1, 1, 0];
        assert_eq!(mono_mul(&d, &[1], &[0]), Some((vec![0, 1], true)));
        assert_eq!(mono_mul(&d, &[0], &[0]), None);
        assert_eq!(mono_mul(&d, &[2], &[2]), Some((vec![2, 2], false)));
        assert_eq!(mono_mul(&d, &[0, 2], &[1]), Some((vec![0, 1, 2], false)));
    }

    #[test]
    fn derivatives() {
        let d = [1, 1];
        let p = Poly::basis(vec![0, 1]);
        assert_eq!(left_deriv(&d, &p, 1), Poly::term(vec![0], q(-1)));
        assert_eq!(right_deriv(&d, &p, 1), Poly::term(vec![0], q(1)));
        assert_eq!(right_deriv(&d, &p, 0), Poly::term(vec![1], q(-1)));
        let e = [0];
        assert_eq!(left_deriv(&e, &Poly::basis(vec![0, 0, 0]), 0), Poly::term(vec![0, 0], q(3)));
    }

    #[test]
    fn divided_power_of_even_generator() {
        let d = [0];
        let p = Poly::basis(vec![0]);
        let pw = divided_powers(&d, &p, 3, 10);
        assert_eq!(pw[3], Poly::term(vec![0, 0, 0], crate::scalar::frac(1, 6)));
    }
}
