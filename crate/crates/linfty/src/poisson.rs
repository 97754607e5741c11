//! The weight-truncated `n`-shifted Poisson algebra `Ŝ(g*[-1] ⊕ g[1-n])[n]`, the double
//! `D_n`, higher Schouten algebras, r∞-matrices and triangular L∞-bialgebras.

use std::sync::Arc;

use crate::check::{Check, Checks};
use crate::derived::{derived_brackets_big, derived_brackets_small, Derived, DerivedError, Differential, VAlgebra, VStructure};
use crate::exec::{sum_vectors, Exec};
use crate::graded::{monomials, odd, render_vector, GradedError, GradedSpace, Mono};
use crate::lie::GradedLie;
use crate::linfty::{check_linfty, mc_residual, LInftyError, LInftyStructure, MAX_CAP};
use crate::multibracket::DKey;
use crate::poly::{left_deriv, mul_truncated, poly_degree, right_deriv, Poly};
use crate::scalar::{fmt_q, sign_q};
use crate::vector::Vector;
use crate::vector_field::to_field;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PoissonError {
    #[error("weight cap must be at least 2, got {0}")]
    WeightCap(usize),
    #[error("bracket term {0} exceeds the weight cap")]
    WeightOverflow(String),
    #[error("{0} is not a degree-0 element of Ŝ≥2 g[1-n]")]
    NotRMatrix(String),
    #[error("arity cap {0} needs weight cap at least {1}")]
    Caps(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    LInfty(#[from] LInftyError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Generators `ξ_i = e_i^*` (index `i`, degree `1 - |e_i|`) then `v_i = e_i`
/// (index `dim g + i`, degree `|e_i| + n - 1`). Monomials longer than `w` are dropped.
#[derive(Debug, Clone)]
pub struct PoissonAlgebra {
    pub g: Arc<GradedSpace>,
    pub n: i64,
    pub w: usize,
    pub gens: Arc<GradedSpace>,
    pub exec: Exec,
}

impl PoissonAlgebra {
    pub fn new(g: Arc<GradedSpace>, n: i64, w: usize) -> Result<Self, PoissonError> {
        if w < 2 {
            return Err(PoissonError::WeightCap(w));
        }
        let basis = (0..g.dim())
            .map(|i| (format!("{}*", g.symbol(i)), 1 - g.degree(i)))
            .chain((0..g.dim()).map(|i| (g.symbol(i).to_string(), g.degree(i) + n - 1)));
        let gens = Arc::new(GradedSpace::new(format!("S({0}*[-1]+{0}[{1}])[{2}]", g.name(), 1 - n, n), basis)?);
        Ok(Self { g, n, w, gens, exec: Exec::default() })
    }

    pub fn dim_g(&self) -> usize {
        self.g.dim()
    }

    pub fn degrees(&self) -> &[i64] {
        self.gens.degrees()
    }

    /// Degree in the shifted algebra (polynomial degree minus `n`).
    pub fn lie_degree(&self, m: &[usize]) -> i64 {
        poly_degree(self.degrees(), m) - self.n
    }

    /// `(p, q)`: number of `g*` and of `g` factors.
    pub fn biweight(&self, m: &[usize]) -> (usize, usize) {
        let p = m.iter().filter(|&&i| i < self.dim_g()).count();
        (p, m.len() - p)
    }

    /// `{ξ_i, v_i} = 1`; the opposite order carries `c_i = -(-1)^{(|e_i|-1)(1+n)}`.
    fn pairing_sign(&self, i: usize) -> bool {
        !(odd(self.g.degree(i) - 1) && odd(1 + self.n))
    }

    /// `{f,g} = Σ_i (f ∂⃖_{ξ_i})(∂⃗_{v_i} g) + c_i (f ∂⃖_{v_i})(∂⃗_{ξ_i} g)`, truncated at weight `w`.
    pub fn bracket_truncated(&self, f: &Poly, g: &Poly, max_len: usize) -> Poly {
        let d = self.dim_g();
        let degs = self.degrees();
        let idx: Vec<usize> = (0..d).collect();
        sum_vectors(self.exec, &idx, |&i| {
            let mut out = Poly::zero();
            let a = right_deriv(degs, f, i);
            if !a.is_zero() {
                out += mul_truncated(degs, &a, &left_deriv(degs, g, d + i), max_len);
            }
            let b = right_deriv(degs, f, d + i);
            if !b.is_zero() {
                let t = mul_truncated(degs, &b, &left_deriv(degs, g, i), max_len);
                out.add_scaled(&t, &sign_q(self.pairing_sign(i)));
            }
            out
        })
    }

    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        self.bracket_truncated(f, g, self.w)
    }

    /// The bracket without truncation; terms above the weight cap are an error.
    pub fn bracket_strict(&self, f: &Poly, g: &Poly) -> Result<Poly, PoissonError> {
        let full = self.bracket_truncated(f, g, usize::MAX);
        if let Some(m) = full.keys().find(|m| m.len() > self.w) {
            return Err(PoissonError::WeightOverflow(self.label(m)));
        }
        Ok(full)
    }

    /// `D_n`: the field `f ∂_o` goes to `-(-1)^{(n+1)(|e_o|+1)} f v_o`. The sign makes `D_n` a Lie
    /// map for the pairing `{ξ_i, v_i} = 1` and makes `H∘D_n` the identity on the `g` part.
    pub fn double(&self, terms: &Vector<DKey>) -> Poly {
        let d = self.dim_g();
        let shifted = self.g.shifted(1);
        let field = to_field(shifted.degrees(), terms);
        let mut out = Poly::zero();
        for ((m, o), c) in field.iter() {
            if m.len() + 1 > self.w {
                continue;
            }
            let mut mono = m.clone();
            mono.push(d + o);
            let s = odd(self.n + 1) && odd(self.g.degree(*o) + 1);
            out.add_term(mono, -sign_q(s) * c);
        }
        out
    }

    pub fn label(&self, m: &[usize]) -> String {
        if m.is_empty() {
            "1".into()
        } else {
            self.gens.mono_label(m)
        }
    }

    pub fn render(&self, p: &Poly) -> String {
        render_vector(p, |m| self.label(m))
    }

    /// Monomials of weight `2..=w` in canonical order.
    pub fn basis(&self) -> Vec<Mono> {
        (2..=self.w).flat_map(|k| monomials(self.degrees(), k)).collect()
    }

    fn in_h(&self, m: &[usize]) -> bool {
        let (p, q) = self.biweight(m);
        p == 0 && q >= 2
    }
}

impl GradedLie for PoissonAlgebra {
    type Key = Mono;

    fn degree(&self, k: &Mono) -> i64 {
        self.lie_degree(k)
    }

    fn bracket(&self, a: &Poly, b: &Poly) -> Poly {
        PoissonAlgebra::bracket(self, a, b)
    }

    fn label(&self, k: &Mono) -> String {
        PoissonAlgebra::label(self, k)
    }
}

/// The Poisson algebra (weights `≥ 2`) with `h = Ŝ≥2 g[1-n]` and weight `w - p`.
impl VAlgebra for PoissonAlgebra {
    fn in_h(&self, k: &Mono) -> bool {
        PoissonAlgebra::in_h(self, k)
    }

    fn weight(&self, k: &Mono) -> i64 {
        (self.w - self.biweight(k).0) as i64
    }

    fn basis(&self) -> Vec<Mono> {
        PoissonAlgebra::basis(self)
    }
}

fn require_caps(m: &LInftyStructure, w: usize) -> Result<(), PoissonError> {
    if m.cap() + 1 > w {
        return Err(PoissonError::Caps(m.cap(), m.cap() + 1));
    }
    Ok(())
}

/// `d = {D_n(m), ·}`.
pub fn schouten_vstructure(m: &LInftyStructure, n: i64, w: usize) -> Result<VStructure<PoissonAlgebra>, PoissonError> {
    require_caps(m, w)?;
    let pa = PoissonAlgebra::new(m.space.clone(), n, w)?;
    let dm = pa.double(&m.m.terms);
    Ok(VStructure::new(pa, Differential::Inner(dm)))
}

/// Product cap that makes the derived algebras complete.
pub fn schouten_cap(w: usize) -> usize {
    (w + 1).min(MAX_CAP)
}

/// The higher Schouten algebra on `(Ŝ≥2 g[1-n])[n-1]`.
pub fn schouten_structure(m: &LInftyStructure, n: i64, w: usize) -> Result<Derived<Mono>, PoissonError> {
    let vs = schouten_vstructure(m, n, w)?;
    Ok(derived_brackets_small(&vs, schouten_cap(w))?)
}

fn validate_r(pa: &PoissonAlgebra, r: &Poly) -> Result<(), PoissonError> {
    match r.keys().find(|k| !pa.in_h(k) || pa.lie_degree(k) != 0 || k.len() > pa.w) {
        Some(k) => Err(PoissonError::NotRMatrix(pa.label(k))),
        None => Ok(()),
    }
}

fn group_by_biweight(pa: &PoissonAlgebra, name: &str, v: &Poly, only_h: bool) -> Checks {
    let mut out = Checks::new();
    for total in 2..=pa.w {
        for p in 0..=total {
            if only_h && (p != 0 || total < 2) {
                continue;
            }
            let res: Vec<(String, String)> = v
                .iter()
                .filter(|(m, _)| pa.biweight(m) == (p, total - p))
                .map(|(m, c)| (pa.label(m), fmt_q(c)))
                .collect();
            out.push(Check::from_residuals(format!("{name} ({p},{})", total - p), res));
        }
    }
    out
}

/// Residuals of `P(e^{ad_r} D_n(m))` per bi-weight `(0, q)`.
pub fn check_rmatrix(m: &LInftyStructure, r: &Poly, n: i64, w: usize) -> Result<Checks, PoissonError> {
    let vs = schouten_vstructure(m, n, w)?;
    validate_r(&vs.alg, r)?;
    let Differential::Inner(dm) = &vs.d else { unreachable!() };
    let e = vs.exp_ad(dm, r)?;
    Ok(group_by_biweight(&vs.alg, "r-matrix relation", &vs.p(&e), true))
}

/// `r(m) = e^{ad_r} D_n(m)` with its certificates.
#[derive(Debug, Clone)]
pub struct Bialgebra {
    pub rm: Poly,
    pub checks: Checks,
}

pub fn triangular_bialgebra(m: &LInftyStructure, r: &Poly, n: i64, w: usize) -> Result<Bialgebra, PoissonError> {
    let pre = check_linfty(m);
    if let Some(c) = pre.first_failure() {
        return Err(PoissonError::Precondition(c.name.clone()));
    }
    let rm_checks = check_rmatrix(m, r, n, w)?;
    if let Some(c) = rm_checks.first_failure() {
        return Err(PoissonError::Precondition(c.name.clone()));
    }
    let vs = schouten_vstructure(m, n, w)?;
    let pa = &vs.alg;
    let Differential::Inner(dm) = &vs.d else { unreachable!() };
    let rm = vs.exp_ad(dm, r)?;
    let mut checks = Checks::new();
    let sq = pa.bracket(&rm, &rm);
    checks.extend(group_by_biweight(pa, "{r(m),r(m)} = 0", &sq, false));
    let outside: Vec<(String, String)> = rm
        .iter()
        .filter(|(k, _)| {
            let (p, q) = pa.biweight(k);
            p == 0 || q == 0
        })
        .map(|(k, c)| (pa.label(k), fmt_q(c)))
        .collect();
    checks.push(Check::from_residuals("terms in S'", outside));
    let linear = rm.filter(|k| pa.biweight(k).1 == 1) - dm.clone();
    checks.push(Check::from_residuals(
        "linear part recovers m",
        linear.iter().map(|(k, c)| (pa.label(k), fmt_q(c))).collect::<Vec<_>>(),
    ));
    Ok(Bialgebra { rm, checks })
}

/// The L∞-algebra on `Der̄ Ŝg*[-1] ⊕ (Ŝ≥2 g[1-n])[n-1]`, with `Der̄` realized as the
/// monomials with exactly one `g` factor.
pub fn build_lhm(g: Arc<GradedSpace>, n: i64, w: usize) -> Result<Derived<Mono>, PoissonError> {
    let pa = PoissonAlgebra::new(g, n, w)?;
    let sub: Vec<Mono> = pa.basis().into_iter().filter(|k| pa.biweight(k).1 == 1).collect();
    let vs = VStructure::new(pa, Differential::Zero);
    Ok(derived_brackets_big(&vs, Some(sub), schouten_cap(w))?)
}

/// Both sides of the bialgebra equivalence: `(D_n(m)[1], r)` is MC in the big algebra
/// exactly when `m` is L∞ and `r` is an r∞-matrix.
pub fn lhm_mc_check(lhm: &Derived<Mono>, m: &LInftyStructure, r: &Poly, n: i64, w: usize) -> Result<Checks, PoissonError> {
    let pa = PoissonAlgebra::new(m.space.clone(), n, w)?;
    validate_r(&pa, r)?;
    require_caps(m, w)?;
    let mut direct = check_linfty(m);
    direct.extend(check_rmatrix(m, r, n, w)?);
    let dm = pa.double(&m.m.terms);
    let res = mc_residual(&lhm.structure, &lhm.coords(&dm, r))?;
    let big = Check::flag("pair MC in the governing algebra", res.is_zero(), "residual", lhm.structure.render(&res));
    let agree = direct.pass() == big.pass;
    let mut out = direct.prefixed("direct");
    out.push(big);
    out.push(Check::flag("bialgebra ⇔ MC", agree, "sides", "one-sided outcome"));
    Ok(out)
}
