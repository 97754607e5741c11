//! L∞-structures stored as degree-one families on `g[1]`, their morphisms,
//! Maurer-Cartan elements and scalar extension by nilpotent cdgas.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num::One;

use crate::check::{Check, Checks};
use crate::exec::{map_collect, Exec};
use crate::graded::{koszul_odd, monomials, normalize, odd, render_vector, symmetry_factor, GradedError, GradedSpace, Mono};
use crate::multibracket::{compose, key_degree, DKey, DerivationRep, MultiMap};
use crate::poly::{left_deriv, mono_mul, mul, Poly};
use crate::scalar::{sign_q, Q};
use crate::vector::Vector;

pub const MAX_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LInftyError {
    #[error("component on `{0}` has degree {1}, expected {2}")]
    Degree(String, i64, i64),
    #[error("arity {0} exceeds the cap {1}")]
    Cap(usize, usize),
    #[error("arity cap {0} exceeds the supported maximum {MAX_CAP}")]
    CapTooLarge(usize),
    #[error("constant (arity 0) components are not allowed")]
    Constant,
    #[error("no truncation certificate: products above the cap are not known to vanish")]
    NonTruncating,
    #[error("element is not of degree 0 in `{0}`")]
    NotDegreeZero(String),
    #[error("input is not an MC element")]
    NotMc,
    #[error("invalid coefficient algebra: {0}")]
    Cdga(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// An L∞-structure on `space`, given by the brackets `m̌_k: S^k(g[1]) -> g[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInftyStructure {
    pub space: Arc<GradedSpace>,
    pub shifted: Arc<GradedSpace>,
    pub m: DerivationRep,
    /// All products above the cap vanish.
    pub complete: bool,
}

impl LInftyStructure {
    pub fn new(space: Arc<GradedSpace>, cap: usize, terms: Vector<DKey>) -> Result<Self, LInftyError> {
        if cap > MAX_CAP {
            return Err(LInftyError::CapTooLarge(cap));
        }
        let shifted = Arc::new(space.shifted(1));
        for (k, _) in terms.iter() {
            if k.0.is_empty() {
                return Err(LInftyError::Constant);
            }
            if k.0.len() > cap {
                return Err(LInftyError::Cap(k.0.len(), cap));
            }
            let d = key_degree(shifted.degrees(), k);
            if d != 1 {
                return Err(LInftyError::Degree(shifted.mono_label(&k.0), d, 1));
            }
        }
        let m = DerivationRep { space: shifted.clone(), cap, terms };
        Ok(Self { space, shifted, m, complete: true })
    }

    pub fn abelian(space: Arc<GradedSpace>, cap: usize) -> Self {
        Self::new(space, cap, Vector::zero()).expect("zero structure is valid")
    }

    pub fn from_components(space: Arc<GradedSpace>, cap: usize, comps: &[MultiMap]) -> Result<Self, LInftyError> {
        let mut terms = Vector::zero();
        for c in comps {
            terms += c.to_terms();
        }
        Self::new(space, cap, terms)
    }

    pub fn with_complete(mut self, complete: bool) -> Self {
        self.complete = complete;
        self
    }

    pub fn cap(&self) -> usize {
        self.m.cap
    }

    pub fn degrees(&self) -> &[i64] {
        self.shifted.degrees()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn product(&self, k: usize) -> MultiMap {
        self.m.component(k, 1)
    }

    pub fn render(&self, v: &Vector<usize>) -> String {
        render_vector(v, |&i| self.space.symbol(i).to_string())
    }
}

/// Group a family by input monomial.
pub fn by_monomial(terms: &Vector<DKey>) -> BTreeMap<Mono, Vector<usize>> {
    let mut out: BTreeMap<Mono, Vector<usize>> = BTreeMap::new();
    for ((m, o), c) in terms.iter() {
        out.entry(m.clone()).or_default().add_term(*o, c.clone());
    }
    out
}

/// Residuals of `m∘m = 0` per arity, listed on normalized monomials of `g[1]`.
/// A complete structure is checked in every arity where `m∘m` can be nonzero.
pub fn check_linfty(l: &LInftyStructure) -> Checks {
    check_linfty_with(l, Exec::default())
}

pub fn check_linfty_with(l: &LInftyStructure, exec: Exec) -> Checks {
    let top = if l.complete { 2 * l.cap() - 1 } else { l.cap() };
    let sq = compose(l.degrees(), &l.m.terms, &l.m.terms, top, exec);
    let grouped = by_monomial(&sq);
    let mut out = Checks::new();
    for n in 1..=top {
        let res = grouped
            .iter()
            .filter(|(m, _)| m.len() == n)
            .map(|(m, v)| (l.shifted.mono_label(m), l.render(v)));
        out.push(Check::from_residuals(format!("generalized Jacobi n={n}"), res));
    }
    out
}

/// `f̌_k: S^k(g[1]) -> h[1]` of degree 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInftyMorphism {
    pub source: LInftyStructure,
    pub target: LInftyStructure,
    pub f: Vector<DKey>,
}

impl LInftyMorphism {
    pub fn new(source: LInftyStructure, target: LInftyStructure, f: Vector<DKey>) -> Result<Self, LInftyError> {
        let cap = source.cap().min(target.cap());
        let sd = source.degrees();
        let td = target.degrees();
        for ((m, o), _) in f.iter() {
            if m.is_empty() {
                return Err(LInftyError::Constant);
            }
            if m.len() > cap {
                return Err(LInftyError::Cap(m.len(), cap));
            }
            let d = td[*o] - m.iter().map(|&i| sd[i]).sum::<i64>();
            if d != 0 {
                return Err(LInftyError::Degree(source.shifted.mono_label(m), d, 0));
            }
        }
        Ok(Self { source, target, f })
    }

    pub fn cap(&self) -> usize {
        self.source.cap().min(self.target.cap())
    }

    /// The identity strict morphism of a structure.
    pub fn identity(l: &LInftyStructure) -> Self {
        let f = (0..l.dim()).map(|i| ((vec![i], i), Q::one())).collect();
        Self { source: l.clone(), target: l.clone(), f }
    }

    pub fn is_strict(&self) -> bool {
        self.f.keys().all(|(m, _)| m.len() == 1)
    }
}

/// Set partitions of `0..n` with blocks ordered by their least element.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            go(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Residuals of `f̌∘m = m'∘e^{f̌}` per arity on all source monomials.
pub fn check_morphism(f: &LInftyMorphism) -> Checks {
    check_morphism_with(f, Exec::default())
}

pub fn check_morphism_with(f: &LInftyMorphism, exec: Exec) -> Checks {
    check_morphism_upto(f, f.cap(), exec)
}

/// The morphism relations in arities `1..=max_arity` only.
pub fn check_morphism_upto(f: &LInftyMorphism, max_arity: usize, exec: Exec) -> Checks {
    let cap = f.cap().min(max_arity);
    let sd = f.source.degrees();
    let lhs = by_monomial(&compose(sd, &f.f, &f.source.m.terms, cap, exec));
    let f_by = by_monomial(&f.f);
    let targets: Vec<MultiMap> = (0..=cap).map(|k| f.target.product(k)).collect();
    let parts: Vec<Vec<Vec<Vec<usize>>>> = (0..=cap).map(set_partitions).collect();
    let mut out = Checks::new();
    let preimages = f.is_strict().then(|| {
        let mut g: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (m, o) in f.f.keys() {
            g.entry(*o).or_default().push(m[0]);
        }
        g
    });
    for n in 1..=cap {
        let monos = match &preimages {
            Some(g) => strict_candidates(sd, n, &lhs, g, &f.target.m.terms),
            None => monomials(sd, n),
        };
        let residuals = map_collect(exec, &monos, |x| {
            let xdeg: Vec<i64> = x.iter().map(|&i| sd[i]).collect();
            let mut rhs = Vector::zero();
            'outer: for p in &parts[n] {
                let mut vals = Vec::with_capacity(p.len());
                for block in p {
                    let sub: Mono = block.iter().map(|&i| x[i]).collect();
                    match f_by.get(&sub) {
                        Some(v) => vals.push(v),
                        None => continue 'outer,
                    }
                }
                let perm: Vec<usize> = p.iter().flatten().copied().collect();
                let s = sign_q(koszul_odd(&perm, &xdeg));
                rhs.add_scaled(&targets[p.len()].evaluate_vectors(&vals), &s);
            }
            let l = lhs.get(x).cloned().unwrap_or_default();
            let r = &l - &rhs;
            (!r.is_zero()).then(|| (f.source.shifted.mono_label(x), f.target.render(&r)))
        });
        out.push(Check::from_residuals(format!("morphism relation n={n}"), residuals.into_iter().flatten()));
    }
    out
}

/// Monomials of length `n` where either side of a strict morphism relation can be nonzero.
fn strict_candidates(sd: &[i64], n: usize, lhs: &BTreeMap<Mono, Vector<usize>>, pre: &BTreeMap<usize, Vec<usize>>, target: &Vector<DKey>) -> Vec<Mono> {
    let mut out: std::collections::BTreeSet<Mono> = lhs.keys().filter(|m| m.len() == n).cloned().collect();
    for (y, _) in target.keys().filter(|(y, _)| y.len() == n) {
        let lists: Option<Vec<&Vec<usize>>> = y.iter().map(|i| pre.get(i)).collect();
        let Some(lists) = lists else { continue };
        for choice in lists.into_iter().multi_cartesian_product() {
            if let Some((m, _)) = normalize(&choice.into_iter().copied().collect::<Vec<_>>(), |i| sd[i]) {
                out.insert(m);
            }
        }
    }
    out.into_iter().collect()
}

/// `Σ_k (1/k!) F_k(ξ,…,ξ)` for `ξ` supported on degree-0 (hence even) basis vectors.
pub fn exp_sum(terms: &Vector<DKey>, xi: &Vector<usize>) -> Vector<usize> {
    let mut out = Vector::zero();
    'terms: for ((m, o), c) in terms.iter() {
        let mut coef = symmetry_factor(m) * c;
        for i in m {
            match xi.get(i) {
                Some(x) => coef *= x,
                None => continue 'terms,
            }
        }
        out.add_term(*o, coef);
    }
    out
}

fn require_degree_zero(space: &GradedSpace, xi: &Vector<usize>) -> Result<(), LInftyError> {
    if xi.keys().any(|&i| space.degree(i) != 0) {
        return Err(LInftyError::NotDegreeZero(space.name().to_string()));
    }
    Ok(())
}

/// `Σ_{i≥1} (1/i!) m̌_i(ξ,…,ξ)` for `ξ` of degree 0 in `g[1]`; needs a complete structure.
pub fn mc_residual(l: &LInftyStructure, xi: &Vector<usize>) -> Result<Vector<usize>, LInftyError> {
    if !l.complete {
        return Err(LInftyError::NonTruncating);
    }
    require_degree_zero(&l.shifted, xi)?;
    Ok(exp_sum(&l.m.terms, xi))
}

pub fn is_mc(l: &LInftyStructure, xi: &Vector<usize>) -> Result<bool, LInftyError> {
    Ok(mc_residual(l, xi)?.is_zero())
}

/// A graded commutative cdga `k ⊕ A_{≥1}` with `(A_{≥1})^ν = 0`, stored on a basis of `A_{≥1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentCdga {
    pub space: Arc<GradedSpace>,
    mult: Vec<Vec<Vector<usize>>>,
    d: Vec<Vector<usize>>,
    pub nu: usize,
}

fn power_label(names: &[String], m: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let k = m[i..].iter().take_while(|&&x| x == m[i]).count();
        parts.push(if k == 1 { names[m[i]].clone() } else { format!("{}^{k}", names[m[i]]) });
        i += k;
    }
    parts.join("*")
}

impl NilpotentCdga {
    /// Free graded commutative algebra on `gens` modulo words of length `≥ nu`, with the
    /// differential extending `d` (given on generators as polynomials in the generators).
    pub fn truncated_free(name: &str, gens: &[(&str, i64)], nu: usize, d: &[(usize, Poly)]) -> Result<Self, LInftyError> {
        if nu < 2 {
            return Err(LInftyError::Cdga("nilpotency index must be at least 2".into()));
        }
        let gdeg: Vec<i64> = gens.iter().map(|g| g.1).collect();
        let names: Vec<String> = gens.iter().map(|g| g.0.to_string()).collect();
        let basis: Vec<Mono> = (1..nu).flat_map(|k| monomials(&gdeg, k)).collect();
        let index: BTreeMap<Mono, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let to_vec = |p: &Poly| -> Vector<usize> {
            p.iter().filter(|(m, _)| !m.is_empty() && m.len() < nu).map(|(m, c)| (index[m], c.clone())).collect()
        };
        let space = Arc::new(GradedSpace::new(
            name,
            basis.iter().map(|m| (power_label(&names, m), m.iter().map(|&i| gdeg[i]).sum::<i64>())),
        )?);
        let mut mult = vec![vec![Vector::zero(); basis.len()]; basis.len()];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if a.len() + b.len() < nu {
                    if let Some((m, s)) = mono_mul(&gdeg, a, b) {
                        mult[i][j] = Vector::term(index[&m], sign_q(s));
                    }
                }
            }
        }
        let mut dg = vec![Poly::zero(); gens.len()];
        for (g, p) in d {
            if *g >= gens.len() || p.keys().any(|m| m.is_empty()) {
                return Err(LInftyError::Cdga("differential must map generators into the augmentation ideal".into()));
            }
            dg[*g] = p.clone();
        }
        let dvec = basis
            .iter()
            .map(|m| {
                let p = Poly::basis(m.clone());
                let mut acc = Poly::zero();
                for (g, dp) in dg.iter().enumerate() {
                    if !dp.is_zero() {
                        acc += mul(&gdeg, dp, &left_deriv(&gdeg, &p, g));
                    }
                }
                to_vec(&acc)
            })
            .collect();
        let a = Self { space, mult, d: dvec, nu };
        a.validate()?;
        Ok(a)
    }

    /// `k[ε]/(ε²)` with `ε` in degree 0 and `dε = 0`.
    pub fn dual_numbers() -> Self {
        Self::truncated_free("k[e]", &[("e", 0)], 2, &[]).expect("dual numbers")
    }

    pub fn from_tables(space: Arc<GradedSpace>, mult: Vec<Vec<Vector<usize>>>, d: Vec<Vector<usize>>, nu: usize) -> Result<Self, LInftyError> {
        let n = space.dim();
        if mult.len() != n || mult.iter().any(|r| r.len() != n) || d.len() != n {
            return Err(LInftyError::Cdga("table sizes do not match the basis".into()));
        }
        let a = Self { space, mult, d, nu };
        a.validate()?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Vector<usize> {
        &self.mult[i][j]
    }

    pub fn mul(&self, a: &Vector<usize>, b: &Vector<usize>) -> Vector<usize> {
        let mut out = Vector::zero();
        for (&i, ca) in a.iter() {
            for (&j, cb) in b.iter() {
                out.add_scaled(&self.mult[i][j], &(ca * cb));
            }
        }
        out
    }

    pub fn d(&self, a: &Vector<usize>) -> Vector<usize> {
        a.map_linear(|&i| self.d[i].clone())
    }

    /// Degrees, `d² = 0`, Leibniz, graded commutativity, associativity and `(A_{≥1})^ν = 0`.
    pub fn validate(&self) -> Result<(), LInftyError> {
        let n = self.dim();
        let bad = |s: String| Err(LInftyError::Cdga(s));
        let deg = |v: &Vector<usize>| v.keys().map(|&k| self.degree(k)).collect::<Vec<_>>();
        for i in 0..n {
            if deg(&self.d[i]).iter().any(|&e| e != self.degree(i) + 1) {
                return bad(format!("d({}) has the wrong degree", self.space.symbol(i)));
            }
            if !self.d(&self.d[i]).is_zero() {
                return bad(format!("d² ≠ 0 on {}", self.space.symbol(i)));
            }
            for j in 0..n {
                let (di, dj) = (self.degree(i), self.degree(j));
                let ab = &self.mult[i][j];
                if deg(ab).iter().any(|&e| e != di + dj) {
                    return bad("multiplication is not of degree 0".into());
                }
                if *ab != self.mult[j][i].scaled(&sign_q(odd(di) && odd(dj))) {
                    return bad(format!("not graded commutative on {}, {}", self.space.symbol(i), self.space.symbol(j)));
                }
                let leib = self.mul(&self.d[i], &Vector::basis(j)) + self.mul(&Vector::basis(i), &self.d[j]).scaled(&sign_q(odd(di)));
                if self.d(ab) != leib {
                    return bad("d is not a derivation".into());
                }
                for k in 0..n {
                    let l = self.mul(ab, &Vector::basis(k));
                    let r = self.mul(&Vector::basis(i), &self.mult[j][k]);
                    if l != r {
                        return bad("not associative".into());
                    }
                }
            }
        }
        let mut power: Vec<Vector<usize>> = (0..n).map(Vector::basis).collect();
        for _ in 1..self.nu {
            let mut next = Vec::new();
            for p in &power {
                for j in 0..n {
                    let q = self.mul(p, &Vector::basis(j));
                    if !q.is_zero() {
                        next.push(q);
                    }
                }
            }
            power = next;
        }
        if !power.is_empty() {
            return bad(format!("(A_{{≥1}})^{} ≠ 0", self.nu));
        }
        Ok(())
    }
}

fn tensor_space(a: &GradedSpace, g: &GradedSpace) -> Result<GradedSpace, GradedError> {
    let mut basis = Vec::with_capacity(a.dim() * g.dim());
    for i in 0..a.dim() {
        for j in 0..g.dim() {
            basis.push((format!("{}@{}", a.symbol(i), g.symbol(j)), a.degree(i) + g.degree(j)));
        }
    }
    GradedSpace::new(format!("{}@{}", a.name(), g.name()), basis)
}

/// Visit sorted monomials of `A_{≥1}⊗W` (index `a*dim W + x`) whose coefficient
/// product is nonzero, with the running product and Koszul parity of moving the
/// coefficients to the front (`plus_one` adds the passage through a degree-1 map).
fn visit_tensor_monomials(
    a: &NilpotentCdga,
    wdeg: &[i64],
    max_len: usize,
    plus_one: bool,
    visit: &mut dyn FnMut(&[usize], &[usize], &Vector<usize>, bool),
) {
    let dw = wdeg.len();
    let tdeg: Vec<i64> = (0..a.dim() * dw).map(|t| a.degree(t / dw) + wdeg[t % dw]).collect();
    struct St<'a> {
        mono: Vec<usize>,
        xs: Vec<usize>,
        xsum: i64,
        a: &'a NilpotentCdga,
    }
    fn go(
        st: &mut St,
        start: usize,
        prod: &Vector<usize>,
        sign: bool,
        tdeg: &[i64],
        wdeg: &[i64],
        max_len: usize,
        plus_one: bool,
        visit: &mut dyn FnMut(&[usize], &[usize], &Vector<usize>, bool),
    ) {
        if st.mono.len() == max_len {
            return;
        }
        let dw = wdeg.len();
        for t in start..tdeg.len() {
            if st.mono.last() == Some(&t) && odd(tdeg[t]) {
                continue;
            }
            let (ai, xi) = (t / dw, t % dw);
            let next = if st.mono.is_empty() { Vector::basis(ai) } else { st.a.mul(prod, &Vector::basis(ai)) };
            if next.is_zero() {
                continue;
            }
            let da = st.a.degree(ai);
            let s = sign ^ (odd(da) && odd(st.xsum + i64::from(plus_one)));
            st.mono.push(t);
            st.xs.push(xi);
            st.xsum += wdeg[xi];
            visit(&st.mono, &st.xs, &next, s);
            go(st, t, &next, s, tdeg, wdeg, max_len, plus_one, visit);
            st.xsum -= wdeg[xi];
            st.xs.pop();
            st.mono.pop();
        }
    }
    let mut st = St { mono: Vec::new(), xs: Vec::new(), xsum: 0, a };
    go(&mut st, 0, &Vector::zero(), false, &tdeg, wdeg, max_len, plus_one, visit);
}

/// The structure `m̌^A` on `A_{≥1}⊗g`.
pub fn extend_scalars(l: &LInftyStructure, a: &NilpotentCdga) -> Result<LInftyStructure, LInftyError> {
    let space = Arc::new(tensor_space(&a.space, &l.space)?);
    let dg = l.dim();
    let comps: Vec<MultiMap> = (0..=l.cap()).map(|k| l.product(k)).collect();
    let wdeg = l.degrees().to_vec();
    let mut terms = Vector::zero();
    let max_len = l.cap().min(a.nu - 1);
    visit_tensor_monomials(a, &wdeg, max_len, true, &mut |mono, xs, prod, sign| {
        let val = comps[xs.len()].evaluate_basis(xs);
        let s = sign_q(sign);
        for (&ai, ca) in prod.iter() {
            for (&o, co) in val.iter() {
                terms.add_term((mono.to_vec(), ai * dg + o), &s * ca * co);
            }
        }
        if mono.len() == 1 {
            let (ai, xi) = (mono[0] / dg, mono[0] % dg);
            for (&b, cb) in a.d(&Vector::basis(ai)).iter() {
                terms.add_term((mono.to_vec(), b * dg + xi), cb.clone());
            }
        }
    });
    let complete = l.complete || a.nu - 1 <= l.cap();
    Ok(LInftyStructure::new(space, l.cap(), terms)?.with_complete(complete))
}

/// The components `f̌^A` on `A_{≥1}⊗g -> A_{≥1}⊗h`.
pub fn extend_morphism(f: &LInftyMorphism, a: &NilpotentCdga) -> Result<LInftyMorphism, LInftyError> {
    let source = extend_scalars(&f.source, a)?;
    let target = extend_scalars(&f.target, a)?;
    let dh = f.target.dim();
    let fb = DerivationRep { space: f.source.shifted.clone(), cap: f.cap(), terms: f.f.clone() };
    let comps: Vec<MultiMap> = (0..=f.cap()).map(|k| fb.component(k, 0)).collect();
    let wdeg = f.source.degrees().to_vec();
    let mut terms = Vector::zero();
    visit_tensor_monomials(a, &wdeg, f.cap().min(a.nu - 1), false, &mut |mono, xs, prod, sign| {
        let val = comps[xs.len()].evaluate_basis(xs);
        let s = sign_q(sign);
        for (&ai, ca) in prod.iter() {
            for (&o, co) in val.iter() {
                terms.add_term((mono.to_vec(), ai * dh + o), &s * ca * co);
            }
        }
    });
    LInftyMorphism::new(source, target, terms)
}

/// Image of an MC element of `A_{≥1}⊗g` under `Σ_k (1/k!) f̌_k^A(ξ,…,ξ)`.
pub fn mc_pushforward(f: &LInftyMorphism, a: &NilpotentCdga, xi: &Vector<usize>) -> Result<Vector<usize>, LInftyError> {
    let fa = extend_morphism(f, a)?;
    if !is_mc(&fa.source, xi)? {
        return Err(LInftyError::NotMc);
    }
    Ok(exp_sum(&fa.f, xi))
}

/// A graded Lie algebra with differential on a finite basis, given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDgla {
    pub space: Arc<GradedSpace>,
    bracket: BTreeMap<(usize, usize), Vector<usize>>,
    d: Vec<Vector<usize>>,
}

impl FiniteDgla {
    pub fn new(space: Arc<GradedSpace>) -> Self {
        let n = space.dim();
        Self { space, bracket: BTreeMap::new(), d: vec![Vector::zero(); n] }
    }

    /// Set `[e_i, e_j]`; the opposite order is filled in by graded antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vector<usize>) {
        let s = -sign_q(odd(self.space.degree(i)) && odd(self.space.degree(j)));
        let w = v.scaled(&s);
        if v.is_zero() {
            self.bracket.remove(&(i, j));
            self.bracket.remove(&(j, i));
        } else {
            self.bracket.insert((i, j), v);
            self.bracket.insert((j, i), w);
        }
    }

    pub fn set_d(&mut self, i: usize, v: Vector<usize>) {
        self.d[i] = v;
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector<usize> {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn bracket(&self, a: &Vector<usize>, b: &Vector<usize>) -> Vector<usize> {
        let mut out = Vector::zero();
        for (&i, ca) in a.iter() {
            for (&j, cb) in b.iter() {
                if let Some(v) = self.bracket.get(&(i, j)) {
                    out.add_scaled(v, &(ca * cb));
                }
            }
        }
        out
    }

    pub fn d(&self, a: &Vector<usize>) -> Vector<usize> {
        a.map_linear(|&i| self.d[i].clone())
    }

    pub fn d_basis(&self, i: usize) -> &Vector<usize> {
        &self.d[i]
    }

    /// `gl(V)` with basis the elementary maps `E[w,v]` (index `w*dim V + v`).
    pub fn gl(v: &GradedSpace) -> Self {
        let n = v.dim();
        let mut basis = Vec::with_capacity(n * n);
        for w in 0..n {
            for u in 0..n {
                basis.push((gl_symbol(v, w, u), v.degree(w) - v.degree(u)));
            }
        }
        let space = Arc::new(GradedSpace::new(format!("gl({})", v.name()), basis).expect("distinct symbols"));
        let mut g = Self::new(space);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let (x, y) = (a * n + b, c * n + e);
                        if x > y {
                            continue;
                        }
                        let s = sign_q(odd(g.space.degree(x)) && odd(g.space.degree(y)));
                        let mut v = Vector::zero();
                        if b == c {
                            v.add_term(a * n + e, Q::one());
                        }
                        if e == a {
                            v.add_term(c * n + b, -s);
                        }
                        g.set_bracket(x, y, v);
                    }
                }
            }
        }
        g
    }

    /// Replace the differential by `[Δ, ·]`.
    pub fn with_inner_differential(mut self, delta: &Vector<usize>) -> Self {
        for i in 0..self.space.dim() {
            self.d[i] = self.bracket(delta, &Vector::basis(i));
        }
        self
    }

    /// `m̌_1(a[1]) = -(da)[1]`, `m̌_2(a[1], b[1]) = (-1)^{|a|}[a,b][1]`.
    pub fn to_linfty(&self, cap: usize) -> Result<LInftyStructure, LInftyError> {
        let mut terms = Vector::zero();
        for i in 0..self.space.dim() {
            for (&o, c) in self.d[i].iter() {
                terms.add_term((vec![i], o), -c.clone());
            }
        }
        if cap >= 2 {
            for (&(i, j), v) in &self.bracket {
                if i > j || (i == j && odd(self.space.degree(i) - 1)) {
                    continue;
                }
                let s = sign_q(odd(self.space.degree(i)));
                for (&o, c) in v.iter() {
                    terms.add_term((vec![i, j], o), &s * c);
                }
            }
        }
        LInftyStructure::new(self.space.clone(), cap.max(1), terms)
    }

    /// Inverse décalage for structures with products of arity at most 2.
    pub fn from_linfty(l: &LInftyStructure) -> Option<Self> {
        if l.m.max_arity() > 2 {
            return None;
        }
        let mut g = Self::new(l.space.clone());
        let m1 = l.product(1);
        let m2 = l.product(2);
        for i in 0..l.dim() {
            g.d[i] = -m1.evaluate_basis(&[i]);
            for j in i..l.dim() {
                let s = sign_q(odd(l.space.degree(i)));
                g.set_bracket(i, j, m2.evaluate_basis(&[i, j]).scaled(&s));
            }
        }
        Some(g)
    }
}

pub fn gl_symbol(v: &GradedSpace, w: usize, u: usize) -> String {
    format!("E[{},{}]", v.symbol(w), v.symbol(u))
}

/// A representation of `g` on `V` as components `S^k(g[1]) -> gl(V)[1]`, possibly with
/// a differential on `V` (a degree-1 element of `gl(V)` squaring to zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub g: LInftyStructure,
    pub v: Arc<GradedSpace>,
    pub rho: Vector<DKey>,
    pub differential: Vector<usize>,
}

impl Representation {
    pub fn gl(&self) -> FiniteDgla {
        FiniteDgla::gl(&self.v).with_inner_differential(&self.differential)
    }

    pub fn morphism(&self) -> Result<LInftyMorphism, LInftyError> {
        let target = self.gl().to_linfty(self.g.cap())?;
        LInftyMorphism::new(self.g.clone(), target, self.rho.clone())
    }

    /// `ρ̌_1(x)` as a matrix acting on `V`, for basis `x`.
    pub fn matrix(&self, x: usize) -> Vector<(usize, usize)> {
        let n = self.v.dim();
        self.rho
            .iter()
            .filter(|((m, _), _)| m.len() == 1 && m[0] == x)
            .map(|((_, e), c)| ((e / n, e % n), c.clone()))
            .collect()
    }
}

pub fn representation_check(rep: &Representation) -> Checks {
    let gl = rep.gl();
    let mut out = Checks::new();
    let sq = gl.bracket(&rep.differential, &rep.differential);
    let bad_degree = rep.differential.keys().any(|&i| gl.space.degree(i) != 1);
    out.push(Check::flag(
        "differential on V",
        sq.is_zero() && !bad_degree,
        "[d,d]",
        render_vector(&sq, |&i| gl.space.symbol(i).to_string()),
    ));
    match rep.morphism() {
        Ok(f) => out.extend(check_morphism(&f)),
        Err(e) => out.push(Check::flag("representation components", false, "input", e.to_string())),
    }
    out
}

/// Shifted brackets of a dgla with a fixed cap, usable as a quick constructor.
pub fn dgla_structure(space: Arc<GradedSpace>, cap: usize, d: &[(usize, Vector<usize>)], br: &[(usize, usize, Vector<usize>)]) -> Result<LInftyStructure, LInftyError> {
    let mut g = FiniteDgla::new(space);
    for (i, v) in d {
        g.set_d(*i, v.clone());
    }
    for (i, j, v) in br {
        g.set_bracket(*i, *j, v.clone());
    }
    g.to_linfty(cap)
}
