//! Classical formulas, written independently of the library's sign engine.

use linfty::linfty::FiniteDgla;
use linfty::scalar::{q, sign_q, Q};
use linfty::vector::Vector;

/// Sort wedge factors; `None` on a repeat, otherwise the sorted factors and whether the sign is odd.
pub fn wedge(factors: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = factors.to_vec();
    let mut sign = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = !sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// `[a∧b, c∧d]` expanded by the Leibniz rule, summed over `r = Σ x e_a∧e_b` and `s`.
pub fn classical_schouten(g: &FiniteDgla, r: &[(usize, usize, i64)], s: &[(usize, usize, i64)]) -> Vector<Vec<usize>> {
    let mut out = Vector::zero();
    for &(a, b, x) in r {
        for &(c, d, y) in s {
            for (p, q_, rest, sg) in [(a, c, [b, d], 1), (a, d, [b, c], -1), (b, c, [a, d], -1), (b, d, [a, c], 1)] {
                for (&k, ck) in g.bracket_basis(p, q_).iter() {
                    if let Some((m, neg)) = wedge(&[k, rest[0], rest[1]]) {
                        out.add_term(m, ck * q(sg * x * y) * sign_q(neg));
                    }
                }
            }
        }
    }
    out
}

/// Every `r = Σ_{a<b} x_ab e_a∧e_b` with coefficients from `grid`.
pub fn quadratic_grid(dim: usize, grid: &[i64]) -> Vec<Vec<(usize, usize, i64)>> {
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|a| (a + 1..dim).map(move |b| (a, b))).collect();
    (0..grid.len().pow(pairs.len() as u32))
        .map(|idx| {
            let mut k = idx;
            pairs
                .iter()
                .map(|&(a, b)| {
                    let c = grid[k % grid.len()];
                    k /= grid.len();
                    (a, b, c)
                })
                .collect()
        })
        .collect()
}

/// `ξ ↦ −ι_ξ r` with `ι_ξ(e_a∧e_c) = ξ(e_a) e_c − ξ(e_c) e_a`, keyed `([input], output)`.
pub fn contraction(r: &[(usize, usize, i64)]) -> Vector<(Vec<usize>, usize)> {
    let mut t = Vector::zero();
    for &(a, c, x) in r {
        t.add_term((vec![a], c), q(-x));
        t.add_term((vec![c], a), q(x));
    }
    t
}

/// `ad*_x e^j = −Σ_k c^j_{xk} e^k`, keyed `(output, input)`.
pub fn classical_coadjoint(g: &FiniteDgla, x: usize) -> Vector<(usize, usize)> {
    let mut out = Vector::zero();
    for k in 0..g.space.dim() {
        for (&j, c) in g.bracket_basis(x, k).iter() {
            out.add_term((k, j), -c.clone());
        }
    }
    out
}

/// `[Tu,Tv] = T(ρ(Tu)v − ρ(Tv)u)` on all basis pairs; `t[i][j]` is the `e_i` coefficient of
/// `T(v_j)` and `rho(x)` the matrix of `x` keyed `(output, input)`.
pub fn relative_rb_holds(g: &FiniteDgla, rho: &dyn Fn(usize) -> Vector<(usize, usize)>, t: &[Vec<Q>]) -> bool {
    let dim_v = t.first().map_or(0, Vec::len);
    let apply_t = |u: &Vector<usize>| -> Vector<usize> {
        let mut out = Vector::zero();
        for (&j, c) in u.iter() {
            for (i, row) in t.iter().enumerate() {
                out.add_term(i, c * &row[j]);
            }
        }
        out
    };
    let act = |x: &Vector<usize>, v: &Vector<usize>| -> Vector<usize> {
        let mut out = Vector::zero();
        for (&xi, cx) in x.iter() {
            for ((o, i), c) in rho(xi).iter() {
                out.add_term(*o, cx * c * v.coeff(i));
            }
        }
        out
    };
    for u in 0..dim_v {
        for v in 0..dim_v {
            let (bu, bv) = (Vector::basis(u), Vector::basis(v));
            let (tu, tv) = (apply_t(&bu), apply_t(&bv));
            if g.bracket(&tu, &tv) != apply_t(&(act(&tu, &bv) - act(&tv, &bu))) {
                return false;
            }
        }
    }
    true
}

/// The adjoint action as matrices keyed `(output, input)`.
pub fn adjoint_matrix(g: &FiniteDgla, x: usize) -> Vector<(usize, usize)> {
    let mut out = Vector::zero();
    for k in 0..g.space.dim() {
        for (&j, c) in g.bracket_basis(x, k).iter() {
            out.add_term((j, k), c.clone());
        }
    }
    out
}

/// `Σ x v_a v_b` on the generators `v_i = d + i` of the Poisson algebra.
pub fn quadratic_poly(d: usize, r: &[(usize, usize, i64)]) -> linfty::poly::Poly {
    let mut p = linfty::poly::Poly::zero();
    for &(a, b, x) in r {
        p.add_term(vec![d + a, d + b], q(x));
    }
    p
}
