//! The semidirect graded Lie algebra of a representation, its embedding into multibracket
//! families on `g[1] ⊕ V[1]`, homotopy relative Rota-Baxter operators and the L∞-algebra
//! governing triples `(m, ρ, T)`.

use std::sync::Arc;

use crate::check::{Check, Checks};
use crate::derived::{derived_brackets_big, Derived, DerivedError, Differential, VAlgebra, VStructure};
use crate::exec::{sum_vectors, Exec};
use crate::graded::{multiplicity, odd, render_vector, GradedError, GradedSpace, Mono};
use crate::lie::{dkey_label, DerLie, GradedLie};
use crate::linfty::{check_linfty, gl_symbol, mc_residual, representation_check, LInftyError, Representation, MAX_CAP};
use crate::multibracket::{all_keys, compose, key_degree, DKey};
use crate::poly::mono_mul;
use crate::scalar::sign_q;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RbError {
    #[error("the pair (m, ρ) is not MC: {0}")]
    NotMc(String),
    #[error("operator component {0} is not a map S(V[1]) -> g[1] of degree 0")]
    NotOperator(String),
    #[error("arity cap {0} is out of range")]
    Cap(usize),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    LInfty(#[from] LInftyError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Basis of the semidirect product: `Der(S, o)` is a multibracket on `g[1]`,
/// `Act(S, w, v)` is `x_S ↦ E[w,v]`, a `gl(V)`-valued map on `S(g[1])`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HKey {
    Der(Mono, usize),
    Act(Mono, usize, usize),
}

/// `Der(Ŝ g*[-1]) ⋉ (Ŝ g*[-1] ⊗ gl(V))`, truncated so that its image in families on
/// `g[1] ⊕ V[1]` has arity at most `cap`.
#[derive(Debug, Clone)]
pub struct Hlr {
    pub g: Arc<GradedSpace>,
    pub v: Arc<GradedSpace>,
    /// `g[1] ⊕ V[1]`, `g` first.
    pub u: Arc<GradedSpace>,
    pub cap: usize,
    pub exec: Exec,
    gs: Vec<i64>,
}

impl Hlr {
    pub fn new(g: Arc<GradedSpace>, v: Arc<GradedSpace>, cap: usize) -> Result<Self, RbError> {
        if cap == 0 || cap > MAX_CAP {
            return Err(RbError::Cap(cap));
        }
        let gs = g.shifted(1);
        // V symbols that clash with g symbols are primed
        let vs: Vec<(String, i64)> = (0..v.dim())
            .map(|i| {
                let s = v.symbol(i);
                let s = if g.index_of(s).is_ok() { format!("{s}'") } else { s.to_string() };
                (s, v.degree(i) - 1)
            })
            .collect();
        let vspace = GradedSpace::new(format!("{}[1]", v.name()), vs)?;
        let u = Arc::new(gs.direct_sum(&vspace, format!("{}[1]+{}[1]", g.name(), v.name()))?);
        Ok(Self { gs: gs.degrees().to_vec(), g, v, u, cap, exec: Exec::default() })
    }

    pub fn ng(&self) -> usize {
        self.g.dim()
    }

    fn vdeg(&self, i: usize) -> i64 {
        self.v.degree(i)
    }

    fn gl_index(&self, w: usize, v: usize) -> usize {
        w * self.v.dim() + v
    }

    /// All basis keys in canonical order.
    pub fn basis(&self) -> Vec<HKey> {
        let nv = self.v.dim();
        let mut out: Vec<HKey> = all_keys(&self.gs, self.cap).into_iter().map(|(m, o)| HKey::Der(m, o)).collect();
        for k in 0..self.cap {
            let monos = if k == 0 { vec![Vec::new()] } else { crate::graded::monomials(&self.gs, k) };
            for m in monos {
                for w in 0..nv {
                    for v in 0..nv {
                        out.push(HKey::Act(m.clone(), w, v));
                    }
                }
            }
        }
        out
    }

    /// The composition `a ∘ b` of two basis elements.
    fn compose_keys(&self, a: &HKey, b: &HKey) -> Vector<HKey> {
        let one = crate::scalar::q(1);
        match (a, b) {
            (HKey::Der(t, o), HKey::Der(s, i)) => {
                let r = compose(&self.gs, &Vector::term((t.clone(), *o), one.clone()), &Vector::term((s.clone(), *i), one), self.cap, Exec::Sequential);
                r.map_keys(|(m, o)| HKey::Der(m.clone(), *o))
            }
            (HKey::Act(t, w, v), HKey::Der(s, i)) => {
                let nv = self.v.dim();
                let outer = Vector::term((t.clone(), self.gl_index(*w, *v)), one.clone());
                let r = compose(&self.gs, &outer, &Vector::term((s.clone(), *i), one), self.cap - 1, Exec::Sequential);
                r.map_keys(|(m, e)| HKey::Act(m.clone(), e / nv, e % nv))
            }
            (HKey::Der(..), HKey::Act(..)) => Vector::zero(),
            (HKey::Act(t, w, v), HKey::Act(s, v2, u)) => {
                if v != v2 {
                    return Vector::zero();
                }
                let Some((x, merge)) = mono_mul(&self.gs, s, t) else { return Vector::zero() };
                if x.len() + 1 > self.cap {
                    return Vector::zero();
                }
                let deg_t: i64 = t.iter().map(|&i| self.gs[i]).sum();
                let pass = odd(deg_t) && (odd(self.vdeg(*v) - 1) ^ odd(self.vdeg(*u) - 1));
                let c = sign_q(merge ^ pass) * crate::scalar::q(multiplicity(s, &x) as i64);
                Vector::term(HKey::Act(x, *w, *u), c)
            }
        }
    }

    /// Embedding into multibracket families on `g[1] ⊕ V[1]`: `Act(S, w, v)` becomes the
    /// key `(S ∪ {v}, w)`, linear in `V[1]`.
    pub fn embed(&self, x: &Vector<HKey>) -> Vector<DKey> {
        let ng = self.ng();
        x.map_keys(|k| match k {
            HKey::Der(m, o) => (m.clone(), *o),
            HKey::Act(m, w, v) => {
                let mut mm = m.clone();
                mm.push(ng + v);
                (mm, ng + w)
            }
        })
    }

    /// The element `Φ = m + ρ` of a representation, with the differential of `V` as the
    /// arity-zero part of `ρ`.
    pub fn element(&self, rep: &Representation) -> Vector<HKey> {
        let nv = self.v.dim();
        let mut out: Vector<HKey> = rep.g.m.terms.filter(|(m, _)| m.len() <= self.cap).map_keys(|(m, o)| HKey::Der(m.clone(), *o));
        for ((m, e), c) in rep.rho.iter() {
            if m.len() < self.cap {
                out.add_term(HKey::Act(m.clone(), e / nv, e % nv), c.clone());
            }
        }
        for (&e, c) in rep.differential.iter() {
            out.add_term(HKey::Act(Vec::new(), e / nv, e % nv), c.clone());
        }
        out
    }

    pub fn render(&self, x: &Vector<HKey>) -> String {
        render_vector(x, |k| self.label(k))
    }
}

impl GradedLie for Hlr {
    type Key = HKey;

    fn degree(&self, k: &HKey) -> i64 {
        match k {
            HKey::Der(m, o) => key_degree(&self.gs, &(m.clone(), *o)),
            HKey::Act(m, w, v) => self.vdeg(*w) - self.vdeg(*v) - m.iter().map(|&i| self.gs[i]).sum::<i64>(),
        }
    }

    fn bracket(&self, a: &Vector<HKey>, b: &Vector<HKey>) -> Vector<HKey> {
        let terms: Vec<(&HKey, &crate::scalar::Q)> = a.iter().collect();
        sum_vectors(self.exec, &terms, |&(ka, ca)| {
            let mut acc = Vector::zero();
            for (kb, cb) in b.iter() {
                let c = ca * cb;
                acc.add_scaled(&self.compose_keys(ka, kb), &c);
                let s = sign_q(odd(self.degree(ka)) && odd(self.degree(kb)));
                acc.add_scaled(&self.compose_keys(kb, ka), &-(s * c));
            }
            acc
        })
    }

    fn label(&self, k: &HKey) -> String {
        match k {
            HKey::Der(m, o) => dkey_label(&self.g, &(m.clone(), *o)),
            HKey::Act(m, w, v) => {
                let ins = if m.is_empty() { "1".to_string() } else { m.iter().map(|&i| self.g.symbol(i)).collect::<Vec<_>>().join("*") };
                format!("{ins}->{}", gl_symbol(&self.v, *w, *v))
            }
        }
    }
}

/// `[Φ, Φ]` in the semidirect product; zero exactly when `(m, ρ)` is an HLR pair up to the cap.
pub fn hlr_square(hlr: &Hlr, rep: &Representation) -> Vector<HKey> {
    let phi = hlr.element(rep);
    hlr.bracket(&phi, &phi)
}

/// Multibracket families on `g[1] ⊕ V[1]` with `h` = maps `S^{≥1}(V[1]) -> g[1]`.
///
/// The weight `cap + 1 - #(g inputs) - [output in V]` is raised by every bracket with `h`.
#[derive(Debug, Clone)]
pub struct RbAlgebra {
    pub der: DerLie,
    pub ng: usize,
}

impl RbAlgebra {
    pub fn new(hlr: &Hlr) -> Self {
        Self { der: DerLie::new(hlr.u.as_ref().clone(), hlr.cap), ng: hlr.ng() }
    }
}

impl GradedLie for RbAlgebra {
    type Key = DKey;

    fn degree(&self, k: &DKey) -> i64 {
        self.der.degree(k)
    }

    fn bracket(&self, a: &Vector<DKey>, b: &Vector<DKey>) -> Vector<DKey> {
        self.der.bracket(a, b)
    }

    fn label(&self, k: &DKey) -> String {
        self.der.label(k)
    }
}

impl VAlgebra for RbAlgebra {
    fn in_h(&self, k: &DKey) -> bool {
        !k.0.is_empty() && k.1 < self.ng && k.0.iter().all(|&i| i >= self.ng)
    }

    fn weight(&self, k: &DKey) -> i64 {
        let g_inputs = k.0.iter().filter(|&&i| i < self.ng).count() as i64;
        self.der.cap as i64 + 1 - g_inputs - i64::from(k.1 >= self.ng)
    }

    fn basis(&self) -> Vec<DKey> {
        all_keys(self.der.degrees(), self.der.cap)
    }
}

/// `d = [embed Φ, ·]` on the truncated families.
pub fn rb_vstructure(hlr: &Hlr, rep: &Representation) -> Result<VStructure<RbAlgebra>, RbError> {
    let sq = hlr_square(hlr, rep);
    if !sq.is_zero() {
        return Err(RbError::NotMc(hlr.render(&sq)));
    }
    let phi = hlr.embed(&hlr.element(rep));
    Ok(VStructure::new(RbAlgebra::new(hlr), Differential::Inner(phi)))
}

/// Components `Ť_k: S^k(V[1]) -> g[1]`, keyed by monomials in `V` and outputs in `g`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RbOperator {
    pub terms: Vector<DKey>,
}

impl RbOperator {
    pub fn new(terms: Vector<DKey>) -> Self {
        Self { terms }
    }

    /// The operator as an element of `h`.
    pub fn on_u(&self, ng: usize) -> Vector<DKey> {
        self.terms.map_keys(|(m, o)| (m.iter().map(|&i| ng + i).collect(), *o))
    }

    fn validate(&self, hlr: &Hlr) -> Result<(), RbError> {
        let u = self.on_u(hlr.ng());
        let alg = RbAlgebra::new(hlr);
        for (k, (m, o)) in u.keys().zip(self.terms.keys()) {
            if m.is_empty() || m.iter().any(|&i| i >= hlr.v.dim()) || *o >= hlr.ng() || m.len() > hlr.cap || alg.degree(k) != 0 {
                return Err(RbError::NotOperator(alg.label(k)));
            }
        }
        Ok(())
    }
}

/// Residuals of `P(e^{ad_T} Φ)` grouped by arity, up to the arity cap.
pub fn check_rb_operator(hlr: &Hlr, rep: &Representation, t: &RbOperator) -> Result<Checks, RbError> {
    t.validate(hlr)?;
    let vs = rb_vstructure(hlr, rep)?;
    let phi = hlr.embed(&hlr.element(rep));
    let r = vs.p(&vs.exp_ad(&phi, &t.on_u(hlr.ng()))?);
    let mut out = Checks::new();
    for k in 1..=hlr.cap {
        let res = r.filter(|(m, _)| m.len() == k);
        out.push(Check::from_residuals(
            format!("RB relation arity {k}"),
            res.iter().map(|(key, c)| (vs.alg.label(key), crate::scalar::fmt_q(c))).collect::<Vec<_>>(),
        ));
    }
    Ok(out)
}

/// Smallest product cap for which the big algebra of triples is complete.
pub fn lhrb_cap(hlr: &Hlr) -> usize {
    (hlr.cap + 2).min(MAX_CAP)
}

/// The L∞-algebra on `L_HLR ⊕ h[-1]` whose MC elements are triples `(m, ρ, T)`.
/// `L_HLR` is presented by its image in the families on `g[1] ⊕ V[1]`.
pub fn build_lhrb(hlr: &Hlr) -> Result<Derived<DKey>, RbError> {
    let vs = VStructure::new(RbAlgebra::new(hlr), Differential::Zero);
    let sub: Vec<DKey> = hlr.basis().iter().map(|k| hlr.embed(&Vector::basis(k.clone())).first().unwrap().0.clone()).collect();
    Ok(derived_brackets_big(&vs, Some(sub), lhrb_cap(hlr))?)
}

/// Both sides of the triple equivalence and their agreement. The action of arity `k`
/// becomes a family of arity `k + 1`, so the cap must exceed the cap of `m` by one.
pub fn rb_triple_mc_check(hlr: &Hlr, lhrb: &Derived<DKey>, rep: &Representation, t: &RbOperator) -> Result<Checks, RbError> {
    if hlr.cap < rep.g.cap() + 1 {
        return Err(RbError::Cap(hlr.cap));
    }
    t.validate(hlr)?;
    let mut direct = Checks::new();
    direct.extend(check_linfty(&rep.g));
    direct.extend(representation_check(rep));
    let rb = match check_rb_operator(hlr, rep, t) {
        Ok(c) => c,
        Err(RbError::NotMc(e)) => Checks(vec![Check::flag("RB relation", false, "[Φ,Φ]", e)]),
        Err(e) => return Err(e),
    };
    direct.extend(rb);
    let phi = hlr.embed(&hlr.element(rep));
    let res = mc_residual(&lhrb.structure, &lhrb.coords(&phi, &t.on_u(hlr.ng())))?;
    let big = Check::flag("triple MC in the governing algebra", res.is_zero(), "residual", lhrb.structure.render(&res));
    let agree = direct.pass() == big.pass;
    let mut out = direct.prefixed("direct");
    out.push(big);
    out.push(Check::flag("triple ⇔ MC", agree, "sides", "one-sided outcome"));
    Ok(out)
}
