//! V-structures on dglas, the right gauge action, higher derived brackets and VMC elements.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::check::{Check, Checks};
use crate::exec::{map_collect, Exec};
use crate::graded::{odd, render_vector, GradedError, GradedSpace};
use crate::lie::GradedLie;
use crate::linfty::{mc_residual, LInftyError, LInftyStructure};
use crate::multibracket::DKey;
use crate::scalar::{frac, sign_q};
use crate::vector::Vector;

/// A graded Lie algebra with a finite basis, a coordinate projector onto an abelian
/// block `h` and a weight that certifies nilpotency of `ad_h`.
pub trait VAlgebra: GradedLie {
    fn in_h(&self, k: &Self::Key) -> bool;

    fn weight(&self, k: &Self::Key) -> i64;

    /// Basis of `L` in canonical order.
    fn basis(&self) -> Vec<Self::Key>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Differential<K: Ord> {
    Zero,
    /// `d = [Δ, ·]`.
    Inner(Vector<K>),
    Linear(BTreeMap<K, Vector<K>>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivedError {
    #[error("ad_h is not nilpotent within the weight span {0}")]
    NotNilpotent(i64),
    #[error("sub-dgla is not closed: {0}")]
    NotClosed(String),
    #[error("element has degree {1}, expected {0}")]
    WrongDegree(i64, i64),
    #[error("element does not lie in h")]
    NotInH,
    #[error("input is not certified: {0}")]
    Uncertified(String),
    #[error(transparent)]
    LInfty(#[from] LInftyError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

pub struct VStructure<A: VAlgebra> {
    pub alg: A,
    pub d: Differential<A::Key>,
}

impl<A: VAlgebra> VStructure<A> {
    pub fn new(alg: A, d: Differential<A::Key>) -> Self {
        Self { alg, d }
    }

    pub fn d(&self, x: &Vector<A::Key>) -> Vector<A::Key> {
        match &self.d {
            Differential::Zero => Vector::zero(),
            Differential::Inner(delta) => self.alg.bracket(delta, x),
            Differential::Linear(map) => x.map_linear(|k| map.get(k).cloned().unwrap_or_default()),
        }
    }

    pub fn p(&self, x: &Vector<A::Key>) -> Vector<A::Key> {
        x.filter(|k| self.alg.in_h(k))
    }

    pub fn bracket(&self, a: &Vector<A::Key>, b: &Vector<A::Key>) -> Vector<A::Key> {
        self.alg.bracket(a, b)
    }

    /// Difference between the largest and smallest weight on the basis.
    pub fn weight_span(&self) -> i64 {
        let w: Vec<i64> = self.alg.basis().iter().map(|k| self.alg.weight(k)).collect();
        match (w.iter().min(), w.iter().max()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn render(&self, v: &Vector<A::Key>) -> String {
        render_vector(v, |k| self.alg.label(k))
    }

    /// `e^{ad_h} y = Σ (1/n!) ad_h^n y` with `ad_h y = [y, h]`.
    pub fn exp_ad(&self, y: &Vector<A::Key>, h: &Vector<A::Key>) -> Result<Vector<A::Key>, DerivedError> {
        let span = self.weight_span();
        let mut term = y.clone();
        let mut total = y.clone();
        let mut n = 0i64;
        while !term.is_zero() {
            n += 1;
            if n > span + 1 {
                return Err(DerivedError::NotNilpotent(span));
            }
            term = self.bracket(&term, h).scaled(&frac(1, n));
            total += &term;
        }
        Ok(total)
    }

    /// Right gauge action `x∗h = x + Σ_{n≥1} (1/n!)(ad_h^n x + ad_h^{n-1} dh)`.
    pub fn gauge(&self, x: &Vector<A::Key>, h: &Vector<A::Key>) -> Result<Vector<A::Key>, DerivedError> {
        let span = self.weight_span();
        let mut total = self.exp_ad(x, h)?;
        // c_n = ad_h^{n-1}(dh) / n!
        let mut c = self.d(h);
        let mut n = 1i64;
        while !c.is_zero() {
            if n > span + 2 {
                return Err(DerivedError::NotNilpotent(span));
            }
            total += &c;
            n += 1;
            c = self.bracket(&c, h).scaled(&frac(1, n));
        }
        Ok(total)
    }

    /// `dx + ½[x,x]`.
    pub fn curvature(&self, x: &Vector<A::Key>) -> Vector<A::Key> {
        let mut r = self.d(x);
        r.add_scaled(&self.bracket(x, x), &frac(1, 2));
        r
    }

    fn require_degree(&self, x: &Vector<A::Key>, d: i64) -> Result<(), DerivedError> {
        match x.keys().map(|k| self.alg.degree(k)).find(|&e| e != d) {
            Some(e) => Err(DerivedError::WrongDegree(d, e)),
            None => Ok(()),
        }
    }

    fn require_h(&self, h: &Vector<A::Key>) -> Result<(), DerivedError> {
        self.require_degree(h, 0)?;
        if h.keys().any(|k| !self.alg.in_h(k)) {
            return Err(DerivedError::NotInH);
        }
        Ok(())
    }
}

/// Projector, closure, abelianness and admissibility audits on all basis elements.
pub fn check_vstructure<A: VAlgebra>(vs: &VStructure<A>) -> Checks {
    check_vstructure_with(vs, Exec::default())
}

pub fn check_vstructure_with<A: VAlgebra>(vs: &VStructure<A>, exec: Exec) -> Checks {
    let basis = vs.alg.basis();
    let hs: Vec<A::Key> = basis.iter().filter(|k| vs.alg.in_h(k)).cloned().collect();
    let ker: Vec<A::Key> = basis.iter().filter(|k| !vs.alg.in_h(k)).cloned().collect();
    let label = |k: &A::Key| vs.alg.label(k);
    let mut out = Checks::new();

    let idem = basis.iter().filter_map(|k| {
        let b = Vector::basis(k.clone());
        let p = vs.p(&b);
        (vs.p(&p) != p).then(|| (label(k), vs.render(&p)))
    });
    out.push(Check::from_residuals("P idempotent", idem.collect::<Vec<_>>()));

    let dsq = map_collect(exec, &basis, |k| {
        let b = Vector::basis(k.clone());
        let r = vs.d(&vs.d(&b));
        (!r.is_zero()).then(|| (label(k), vs.render(&r)))
    });
    out.push(Check::from_residuals("d squares to zero", dsq.into_iter().flatten()));

    let dker = map_collect(exec, &ker, |k| {
        let r = vs.p(&vs.d(&Vector::basis(k.clone())));
        (!r.is_zero()).then(|| (label(k), vs.render(&r)))
    });
    out.push(Check::from_residuals("d preserves ker P", dker.into_iter().flatten()));

    let closed = map_collect(exec, &ker, |a| {
        let mut res = Vec::new();
        for b in ker.iter().filter(|b| *b >= a) {
            let r = vs.p(&vs.bracket(&Vector::basis(a.clone()), &Vector::basis(b.clone())));
            if !r.is_zero() {
                res.push((format!("[{}, {}]", label(a), label(b)), vs.render(&r)));
            }
        }
        res
    });
    out.push(Check::from_residuals("ker P closed under the bracket", closed.into_iter().flatten()));

    let abelian = map_collect(exec, &hs, |a| {
        let mut res = Vec::new();
        for b in hs.iter().filter(|b| *b >= a) {
            let r = vs.bracket(&Vector::basis(a.clone()), &Vector::basis(b.clone()));
            if !r.is_zero() {
                res.push((format!("[{}, {}]", label(a), label(b)), vs.render(&r)));
            }
        }
        res
    });
    out.push(Check::from_residuals("h abelian", abelian.into_iter().flatten()));

    let admissible = map_collect(exec, &basis, |a| {
        let wa = vs.alg.weight(a);
        let mut res = Vec::new();
        if wa < 0 {
            res.push((label(a), format!("negative weight {wa}")));
        }
        for t in &hs {
            let r = vs.bracket(&Vector::basis(a.clone()), &Vector::basis(t.clone()));
            for k in r.keys() {
                if vs.alg.weight(k) <= wa {
                    res.push((format!("[{}, {}]", label(a), label(t)), format!("term {} of weight {} ≤ {}", label(k), vs.alg.weight(k), wa)));
                }
            }
        }
        res
    });
    out.push(Check::from_residuals("ad_h raises weight", admissible.into_iter().flatten()));
    out
}

/// An L∞-structure built from keys of a V-structure, with the key of every basis vector.
#[derive(Debug, Clone)]
pub struct Derived<K: Ord> {
    pub structure: LInftyStructure,
    pub keys: Vec<Part<K>>,
    index: BTreeMap<Part<K>, usize>,
}

/// A basis vector of `L'[1] ⊕ h` (or of `h` alone for the small algebra).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Part<K> {
    L(K),
    H(K),
}

impl<K: Ord + Clone> Derived<K> {
    fn new(structure: LInftyStructure, keys: Vec<Part<K>>) -> Self {
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Self { structure, keys, index }
    }

    pub fn index_of(&self, k: &Part<K>) -> Option<usize> {
        self.index.get(k).copied()
    }

    /// Coordinates of `x[1] + h` (unknown keys are dropped; see [`Derived::covers`]).
    pub fn coords(&self, x: &Vector<K>, h: &Vector<K>) -> Vector<usize> {
        let mut out = Vector::zero();
        for (k, c) in x.iter() {
            if let Some(i) = self.index_of(&Part::L(k.clone())) {
                out.add_term(i, c.clone());
            }
        }
        for (k, c) in h.iter() {
            if let Some(i) = self.index_of(&Part::H(k.clone())) {
                out.add_term(i, c.clone());
            }
        }
        out
    }

    pub fn covers(&self, x: &Vector<K>, h: &Vector<K>) -> bool {
        x.keys().all(|k| self.index.contains_key(&Part::L(k.clone()))) && h.keys().all(|k| self.index.contains_key(&Part::H(k.clone())))
    }

    /// Split a coordinate vector into its `L'` and `h` parts.
    pub fn split(&self, v: &Vector<usize>) -> (Vector<K>, Vector<K>) {
        let (mut x, mut h) = (Vector::zero(), Vector::zero());
        for (&i, c) in v.iter() {
            match &self.keys[i] {
                Part::L(k) => x.add_term(k.clone(), c.clone()),
                Part::H(k) => h.add_term(k.clone(), c.clone()),
            }
        }
        (x, h)
    }
}

fn h_basis<A: VAlgebra>(vs: &VStructure<A>) -> Vec<A::Key> {
    vs.alg.basis().into_iter().filter(|k| vs.alg.in_h(k)).collect()
}

/// Visit `[…[v, h_{i_1}]…, h_{i_j}]` for sorted index tuples `i_1 ≤ … ≤ i_j`
/// (odd `h` not repeated) with `j ≤ max`, skipping branches once the value vanishes.
fn nested<A: VAlgebra>(
    vs: &VStructure<A>,
    hs: &[A::Key],
    v: Vector<A::Key>,
    start: usize,
    max: usize,
    path: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], &Vector<A::Key>),
) {
    if path.len() == max {
        return;
    }
    for i in start..hs.len() {
        if path.last() == Some(&i) && odd(vs.alg.degree(&hs[i])) {
            continue;
        }
        let w = vs.bracket(&v, &Vector::basis(hs[i].clone()));
        if w.is_zero() {
            continue;
        }
        path.push(i);
        visit(path, &w);
        nested(vs, hs, w, i, max, path, visit);
        path.pop();
    }
}

fn space_from<K>(name: &str, keys: &[Part<K>], label: impl Fn(&Part<K>) -> (String, i64)) -> Result<Arc<GradedSpace>, GradedError> {
    Ok(Arc::new(GradedSpace::new(name, keys.iter().map(label))?))
}

/// `m̌_k(h_1,…,h_k) = P[…[d h_1, h_2]…, h_k]` on `h[-1]`, arities up to `cap`.
pub fn derived_brackets_small<A: VAlgebra>(vs: &VStructure<A>, cap: usize) -> Result<Derived<A::Key>, DerivedError> {
    let hs = h_basis(vs);
    let keys: Vec<Part<A::Key>> = hs.iter().cloned().map(Part::H).collect();
    let space = space_from("h[-1]", &keys, |k| match k {
        Part::H(k) | Part::L(k) => (vs.alg.label(k), vs.alg.degree(k) + 1),
    })?;
    let index: BTreeMap<A::Key, usize> = hs.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let to_h = |v: &Vector<A::Key>| -> Vector<usize> { v.iter().filter(|(k, _)| vs.alg.in_h(k)).map(|(k, c)| (index[k], c.clone())).collect() };
    let idx: Vec<usize> = (0..hs.len()).collect();
    let parts = map_collect(Exec::default(), &idx, |&i| {
        let mut terms: Vector<DKey> = Vector::zero();
        let dh = vs.d(&Vector::basis(hs[i].clone()));
        if dh.is_zero() {
            return terms;
        }
        for (&o, c) in to_h(&dh).iter() {
            terms.add_term((vec![i], o), c.clone());
        }
        let mut path = vec![i];
        nested(vs, &hs, dh, i, cap, &mut path, &mut |p, w| {
            for (&o, c) in to_h(w).iter() {
                terms.add_term((p.to_vec(), o), c.clone());
            }
        });
        terms
    });
    let mut terms = Vector::zero();
    for p in parts {
        terms += p;
    }
    let complete = cap as i64 > vs.weight_span();
    let structure = LInftyStructure::new(space, cap, terms)?.with_complete(complete);
    Ok(Derived::new(structure, keys))
}

/// The L∞-structure on `L'[1] ⊕ h` (basis: `L'` first, then `h`).
/// `sub` is a basis of a sub-dgla `L'`; `None` means `L' = L`.
pub fn derived_brackets_big<A: VAlgebra>(vs: &VStructure<A>, sub: Option<Vec<A::Key>>, cap: usize) -> Result<Derived<A::Key>, DerivedError> {
    let lb = sub.unwrap_or_else(|| vs.alg.basis());
    let lset: BTreeSet<A::Key> = lb.iter().cloned().collect();
    for (i, a) in lb.iter().enumerate() {
        let da = vs.d(&Vector::basis(a.clone()));
        let escaped = da.keys().find(|k| !lset.contains(*k)).cloned();
        if let Some(k) = escaped {
            return Err(DerivedError::NotClosed(format!("d({}) has term {}", vs.alg.label(a), vs.alg.label(&k))));
        }
        for b in &lb[i..] {
            let r = vs.bracket(&Vector::basis(a.clone()), &Vector::basis(b.clone()));
            let escaped = r.keys().find(|k| !lset.contains(*k)).cloned();
            if let Some(k) = escaped {
                return Err(DerivedError::NotClosed(format!("[{}, {}] has term {}", vs.alg.label(a), vs.alg.label(b), vs.alg.label(&k))));
            }
        }
    }
    let hs = h_basis(vs);
    let nl = lb.len();
    let mut keys: Vec<Part<A::Key>> = lb.iter().cloned().map(Part::L).collect();
    keys.extend(hs.iter().cloned().map(Part::H));
    let space = space_from("L+h[-1]", &keys, |k| match k {
        Part::L(k) => (format!("L:{}", vs.alg.label(k)), vs.alg.degree(k)),
        Part::H(k) => (format!("h:{}", vs.alg.label(k)), vs.alg.degree(k) + 1),
    })?;
    let lindex: BTreeMap<A::Key, usize> = lb.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let hindex: BTreeMap<A::Key, usize> = hs.iter().cloned().enumerate().map(|(i, k)| (k, nl + i)).collect();
    let to_h = |v: &Vector<A::Key>| -> Vector<usize> { v.iter().filter(|(k, _)| vs.alg.in_h(k)).map(|(k, c)| (hindex[k], c.clone())).collect() };
    let to_l = |v: &Vector<A::Key>| -> Vector<usize> { v.iter().map(|(k, c)| (lindex[k], c.clone())).collect() };
    let shift_h = |p: &[usize]| -> Vec<usize> { p.iter().map(|&i| nl + i).collect() };

    let idx: Vec<usize> = (0..nl + hs.len()).collect();
    let parts = map_collect(Exec::default(), &idx, |&i| {
        let mut terms: Vector<DKey> = Vector::zero();
        if i < nl {
            let x = Vector::basis(lb[i].clone());
            let dx = vs.d(&x);
            for (&o, c) in to_l(&dx).iter() {
                terms.add_term((vec![i], o), -c.clone());
            }
            for (&o, c) in to_h(&x).iter() {
                terms.add_term((vec![i], o), c.clone());
            }
            if cap >= 2 {
                let s = sign_q(odd(vs.alg.degree(&lb[i])));
                for j in i..nl {
                    if j == i && odd(vs.alg.degree(&lb[i]) - 1) {
                        continue;
                    }
                    let r = vs.bracket(&x, &Vector::basis(lb[j].clone()));
                    for (&o, c) in to_l(&r).iter() {
                        terms.add_term((vec![i, j], o), &s * c);
                    }
                }
            }
            let mut path = Vec::new();
            nested(vs, &hs, x, 0, cap.saturating_sub(1), &mut path, &mut |p, w| {
                let mut mono = vec![i];
                mono.extend(shift_h(p));
                for (&o, c) in to_h(w).iter() {
                    terms.add_term((mono.clone(), o), c.clone());
                }
            });
        } else {
            let hi = i - nl;
            let dh = vs.d(&Vector::basis(hs[hi].clone()));
            if dh.is_zero() {
                return terms;
            }
            for (&o, c) in to_h(&dh).iter() {
                terms.add_term((vec![i], o), c.clone());
            }
            let mut path = vec![hi];
            nested(vs, &hs, dh, hi, cap, &mut path, &mut |p, w| {
                for (&o, c) in to_h(w).iter() {
                    terms.add_term((shift_h(p), o), c.clone());
                }
            });
        }
        terms
    });
    let mut terms = Vector::zero();
    for p in parts {
        terms += p;
    }
    let complete = cap as i64 > vs.weight_span();
    let structure = LInftyStructure::new(space, cap, terms)?.with_complete(complete);
    Ok(Derived::new(structure, keys))
}

/// VMC audit of `(x, h)`, cross-checked against the MC equation of the big algebra.
pub fn vmc_check<A: VAlgebra>(vs: &VStructure<A>, big: &Derived<A::Key>, x: &Vector<A::Key>, h: &Vector<A::Key>) -> Result<Checks, DerivedError> {
    vs.require_degree(x, 1)?;
    vs.require_h(h)?;
    if !big.covers(x, h) {
        return Err(DerivedError::Uncertified("element outside the big algebra basis".into()));
    }
    let mut out = Checks::new();
    let curv = vs.curvature(x);
    let mc = Check::flag("x is MC in L", curv.is_zero(), "dx + [x,x]/2", vs.render(&curv));
    let pg = vs.p(&vs.gauge(x, h)?);
    let vmc = Check::flag("P(x*h) = 0", pg.is_zero(), "P(x*h)", vs.render(&pg));
    let res = mc_residual(&big.structure, &big.coords(x, h))?;
    let big_mc = Check::flag("big-algebra MC equation", res.is_zero(), "residual", big.structure.render(&res));
    let agree = (mc.pass && vmc.pass) == big_mc.pass;
    out.push(mc);
    out.push(vmc);
    out.push(big_mc);
    out.push(Check::flag("VMC ⇔ big-algebra MC", agree, "sides", "one-sided outcome"));
    Ok(out)
}

/// `j(x, h) = x∗h`, an MC element of `ker P` for a VMC pair.
pub fn map_j<A: VAlgebra>(vs: &VStructure<A>, x: &Vector<A::Key>, h: &Vector<A::Key>) -> Result<Vector<A::Key>, DerivedError> {
    vs.require_degree(x, 1)?;
    vs.require_h(h)?;
    if !vs.curvature(x).is_zero() {
        return Err(DerivedError::Uncertified("x is not MC".into()));
    }
    let g = vs.gauge(x, h)?;
    if !vs.p(&g).is_zero() {
        return Err(DerivedError::Uncertified("P(x*h) ≠ 0".into()));
    }
    Ok(g)
}

/// `i(h) = 0∗h = Σ (1/n!) ad_h^{n-1} dh` for `h` MC in the small derived algebra.
pub fn map_i<A: VAlgebra>(vs: &VStructure<A>, h: &Vector<A::Key>) -> Result<Vector<A::Key>, DerivedError> {
    vs.require_h(h)?;
    let g = vs.gauge(&Vector::zero(), h)?;
    if !vs.p(&g).is_zero() {
        return Err(DerivedError::Uncertified("h is not MC in h[-1]".into()));
    }
    Ok(g)
}

/// A V-structure on a [`crate::linfty::FiniteDgla`] with `h` and weights listed per basis vector.
#[derive(Debug, Clone)]
pub struct FiniteV {
    pub dgla: crate::linfty::FiniteDgla,
    pub h: Vec<bool>,
    pub weight: Vec<i64>,
}

impl GradedLie for FiniteV {
    type Key = usize;

    fn degree(&self, k: &usize) -> i64 {
        self.dgla.space.degree(*k)
    }

    fn bracket(&self, a: &Vector<usize>, b: &Vector<usize>) -> Vector<usize> {
        self.dgla.bracket(a, b)
    }

    fn label(&self, k: &usize) -> String {
        self.dgla.space.symbol(*k).to_string()
    }
}

impl VAlgebra for FiniteV {
    fn in_h(&self, k: &usize) -> bool {
        self.h[*k]
    }

    fn weight(&self, k: &usize) -> i64 {
        self.weight[*k]
    }

    fn basis(&self) -> Vec<usize> {
        (0..self.dgla.space.dim()).collect()
    }
}

impl FiniteV {
    /// The V-structure using the dgla's own differential.
    pub fn into_vstructure(self) -> VStructure<FiniteV> {
        let d = (0..self.dgla.space.dim())
            .map(|i| (i, self.dgla.d_basis(i).clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        VStructure::new(self, Differential::Linear(d))
    }
}
