//! Random generators and oracles shared by the integration tests.
#![allow(dead_code)]

pub mod oracles;

use std::sync::Arc;

use linfty::derived::{Differential, FiniteV, VStructure};
use linfty::graded::{odd, GradedSpace};
use linfty::linfty::FiniteDgla;
use linfty::scalar::{q, Q};
use linfty::vector::Vector;
use rand::seq::SliceRandom;
use rand::Rng;

/// Matrix units `E_ij` of a graded `n×n` algebra, with `deg E_ij = deg_i - deg_j`.
pub struct MatrixUnits {
    pub n: usize,
    pub units: Vec<(usize, usize)>,
    pub deg: Vec<i64>,
}

impl MatrixUnits {
    pub fn degree(&self, u: (usize, usize)) -> i64 {
        self.deg[u.0] - self.deg[u.1]
    }

    pub fn index(&self, u: (usize, usize)) -> Option<usize> {
        self.units.iter().position(|&v| v == u)
    }

    /// Graded commutator of matrix units, expressed in the unit basis.
    pub fn dgla(&self) -> FiniteDgla {
        let basis: Vec<(String, i64)> = self.units.iter().map(|&(i, j)| (format!("E{i}{j}"), self.degree((i, j)))).collect();
        let mut g = FiniteDgla::new(Arc::new(GradedSpace::new("L", basis).unwrap()));
        for (a, &(i, j)) in self.units.iter().enumerate() {
            for (b, &(k, l)) in self.units.iter().enumerate().skip(a) {
                let s = odd(self.degree((i, j))) && odd(self.degree((k, l)));
                let mut v = Vector::zero();
                if j == k {
                    v.add_term(self.index((i, l)).unwrap(), q(1));
                }
                if l == i {
                    v.add_term(self.index((k, j)).unwrap(), if s { q(1) } else { q(-1) });
                }
                g.set_bracket(a, b, v);
            }
        }
        g
    }

    /// Matrix of a vector in the unit basis, squared.
    pub fn square(&self, x: &Vector<usize>) -> Vec<Vec<Q>> {
        let mut m = vec![vec![q(0); self.n]; self.n];
        for (&a, ca) in x.iter() {
            for (&b, cb) in x.iter() {
                let (i, j) = self.units[a];
                let (k, l) = self.units[b];
                if j == k {
                    m[i][l] += ca * cb;
                }
            }
        }
        m
    }
}

/// An admissible V-structure on upper triangular matrix units (dim 4..=6): `h` is the
/// block `Hom(B, A)` of a random partition, and `d = [Δ, ·]` with `Δ² = 0` in `ker P`.
pub fn random_matrix_v<R: Rng>(rng: &mut R) -> (VStructure<FiniteV>, MatrixUnits) {
    let n = if rng.gen_bool(0.7) { 3 } else { 4 };
    let mut units: Vec<(usize, usize)> = Vec::new();
    if n == 3 {
        let mut diag: Vec<usize> = (0..3).filter(|_| rng.gen_bool(0.5)).collect();
        if diag.is_empty() {
            diag.push(rng.gen_range(0..3));
        }
        for i in 0..3 {
            for j in i..3 {
                if i < j || diag.contains(&i) {
                    units.push((i, j));
                }
            }
        }
    } else {
        for i in 0..4 {
            for j in i + 1..4 {
                units.push((i, j));
            }
        }
    }
    let deg: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let mut in_a: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    if in_a.iter().all(|&a| a) || in_a.iter().all(|&a| !a) {
        in_a[0] = true;
        in_a[n - 1] = false;
    }
    let mu = MatrixUnits { n, units, deg };
    let level = |i: usize| if in_a[i] { 0 } else { 1 };
    let h: Vec<bool> = mu.units.iter().map(|&(i, j)| in_a[i] && !in_a[j]).collect();
    let weight: Vec<i64> = mu.units.iter().map(|&(i, j)| level(j) - level(i) + 1).collect();
    let dgla = mu.dgla();

    let odd_units: Vec<usize> = (0..mu.units.len()).filter(|&a| !h[a] && mu.degree(mu.units[a]) == 1).collect();
    let mut delta = Vector::zero();
    for _ in 0..8 {
        let mut cand = Vector::zero();
        for &a in &odd_units {
            if rng.gen_bool(0.5) {
                cand.add_term(a, q(rng.gen_range(-2..=2)));
            }
        }
        if mu.square(&cand).iter().flatten().all(|c| *c == q(0)) {
            delta = cand;
            break;
        }
    }
    let alg = FiniteV { dgla, h, weight };
    (VStructure::new(alg, Differential::Inner(delta)), mu)
}

pub fn random_combination<R: Rng>(rng: &mut R, keys: &[usize], density: f64) -> Vector<usize> {
    let mut v = Vector::zero();
    for &k in keys {
        if rng.gen_bool(density) {
            v.add_term(k, q(rng.gen_range(-3..=3)));
        }
    }
    v
}

pub fn pick<'a, T, R: Rng>(rng: &mut R, xs: &'a [T]) -> Option<&'a T> {
    xs.choose(rng)
}

/// Dense structure constants of a dgla: `br[i][j][o]` and `d[i][o]`.
#[derive(Clone, Debug)]
pub struct DglaTables {
    pub deg: Vec<i64>,
    pub br: Vec<Vec<Vec<Q>>>,
    pub d: Vec<Vec<Q>>,
}

impl DglaTables {
    pub fn dim(&self) -> usize {
        self.deg.len()
    }

    /// Set `[i,j]_o = c` together with the graded antisymmetric entry.
    pub fn set(&mut self, i: usize, j: usize, o: usize, c: Q) {
        let s = if odd(self.deg[i]) && odd(self.deg[j]) { q(1) } else { q(-1) };
        self.br[j][i][o] = &s * &c;
        self.br[i][j][o] = c;
    }

    pub fn dgla(&self) -> FiniteDgla {
        let n = self.dim();
        let space = Arc::new(GradedSpace::new("g", (0..n).map(|i| (format!("x{i}"), self.deg[i]))).unwrap());
        let mut g = FiniteDgla::new(space);
        let vec = |row: &[Q]| -> Vector<usize> { row.iter().enumerate().filter(|(_, c)| **c != q(0)).map(|(o, c)| (o, c.clone())).collect() };
        for i in 0..n {
            g.set_d(i, vec(&self.d[i]));
            for j in i..n {
                g.set_bracket(i, j, vec(&self.br[i][j]));
            }
        }
        g
    }

    pub fn from_dgla(g: &FiniteDgla) -> Self {
        let n = g.space.dim();
        let deg = (0..n).map(|i| g.space.degree(i)).collect();
        let mut t = DglaTables { deg, br: vec![vec![vec![q(0); n]; n]; n], d: vec![vec![q(0); n]; n] };
        for i in 0..n {
            for (&o, c) in g.d(&Vector::basis(i)).iter() {
                t.d[i][o] = c.clone();
            }
            for j in 0..n {
                for (&o, c) in g.bracket_basis(i, j).iter() {
                    t.br[i][j][o] = c.clone();
                }
            }
        }
        t
    }
    /// Every table obtained by adding 1 to one degree-compatible constant, labelled by that constant.
    pub fn perturbations(&self) -> Vec<(String, DglaTables)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for o in 0..n {
                if self.deg[o] == self.deg[i] + 1 {
                    let mut t = self.clone();
                    t.d[i][o] += q(1);
                    out.push((format!("d x{i} -> x{o}"), t));
                }
            }
            for j in i..n {
                if i == j && !odd(self.deg[i]) {
                    continue;
                }
                for o in (0..n).filter(|&o| self.deg[o] == self.deg[i] + self.deg[j]) {
                    let mut t = self.clone();
                    t.set(i, j, o, &self.br[i][j][o] + q(1));
                    out.push((format!("[x{i},x{j}] -> x{o}"), t));
                }
            }
        }
        out
    }
    /// The same dgla as a `linfty-doc/1` document.
    pub fn document(&self, arity: usize) -> String {
        let n = self.dim();
        let mut s = format!("linfty-doc/1\n[caps]\narity = {arity}\n[space g]\n");
        for i in 0..n {
            s += &format!("x{i} {}\n", self.deg[i]);
        }
        s += "[dgla g]\n";
        for i in 0..n {
            for o in 0..n {
                if self.d[i][o] != q(0) {
                    s += &format!("x{i} -> x{o} : {}\n", self.d[i][o]);
                }
            }
            for j in i..n {
                for o in 0..n {
                    if self.br[i][j][o] != q(0) {
                        s += &format!("x{i} x{j} -> x{o} : {}\n", self.br[i][j][o]);
                    }
                }
            }
        }
        s
    }

    /// `d² = 0`, Leibniz and graded Jacobi on all basis tuples, by dense summation.
    pub fn brute_force(&self) -> bool {
        let n = self.dim();
        let z = q(0);
        let sgn = |b: bool| if b { q(-1) } else { q(1) };
        let bracket = |a: &[Q], b: &[Q]| -> Vec<Q> {
            let mut out = vec![z.clone(); n];
            for i in 0..n {
                for j in 0..n {
                    if a[i] != z && b[j] != z {
                        for o in 0..n {
                            out[o] += &a[i] * &b[j] * &self.br[i][j][o];
                        }
                    }
                }
            }
            out
        };
        let apply_d = |a: &[Q]| -> Vec<Q> {
            let mut out = vec![z.clone(); n];
            for i in 0..n {
                for o in 0..n {
                    out[o] += &a[i] * &self.d[i][o];
                }
            }
            out
        };
        let e = |i: usize| -> Vec<Q> { (0..n).map(|k| if k == i { q(1) } else { q(0) }).collect() };
        let add = |a: Vec<Q>, b: Vec<Q>, s: Q| -> Vec<Q> { a.into_iter().zip(b).map(|(x, y)| x + &s * y).collect() };
        for x in 0..n {
            if apply_d(&apply_d(&e(x))).iter().any(|c| *c != z) {
                return false;
            }
            for y in 0..n {
                let lhs = apply_d(&self.br[x][y]);
                let rhs = add(bracket(&apply_d(&e(x)), &e(y)), bracket(&e(x), &apply_d(&e(y))), sgn(odd(self.deg[x])));
                if lhs != rhs {
                    return false;
                }
                for w in 0..n {
                    let lhs = bracket(&e(x), &self.br[y][w]);
                    let rhs = add(bracket(&self.br[x][y], &e(w)), bracket(&e(y), &self.br[x][w]), sgn(odd(self.deg[x]) && odd(self.deg[y])));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A random dgla of dimension `2..=4` with sparse constants in `{-1, 1, 2}`; about a
/// third of the draws are genuine dglas.
pub fn random_dgla<R: Rng>(rng: &mut R) -> DglaTables {
    let n = rng.gen_range(2..=4);
    let deg: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    let mut t = DglaTables { deg: deg.clone(), br: vec![vec![vec![q(0); n]; n]; n], d: vec![vec![q(0); n]; n] };
    let density = [0.1, 0.25, 0.5][rng.gen_range(0..3)];
    let coeff = |rng: &mut R| q(*[-1, 1, 2].choose(rng).unwrap());
    for i in 0..n {
        for o in 0..n {
            if deg[o] == deg[i] + 1 && rng.gen_bool(density / 2.0) {
                t.d[i][o] = coeff(rng);
            }
        }
        for j in i..n {
            if i == j && !odd(deg[i]) {
                continue;
            }
            for o in 0..n {
                if deg[o] == deg[i] + deg[j] && rng.gen_bool(density) {
                    let c = coeff(rng);
                    t.set(i, j, o, c);
                }
            }
        }
    }
    t
}
