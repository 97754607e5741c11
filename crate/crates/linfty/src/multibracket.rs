//! Graded symmetric multilinear maps and the bracket of the derivations they represent.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::exec::{sum_vectors, Exec};
use crate::graded::{homogeneous_degree, multiplicity, normalize, odd, Element, GradedSpace, Homogeneity, Mono};
use crate::poly::mono_mul;
use crate::scalar::{sign_q, Q};
use crate::vector::Vector;

/// A component key: sorted input monomial and the output basis index.
pub type DKey = (Mono, usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("argument lives in `{got}`, expected `{expected}`")]
    WrongSpace { expected: String, got: String },
    #[error("entry on `{0}` has degree {1}, expected {2}")]
    DegreeMismatch(String, i64, i64),
    #[error("argument is not homogeneous")]
    Inhomogeneous,
    #[error("arity {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
}

/// `S^k(W) -> W'` of fixed degree, stored on normalized monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    pub arity: usize,
    pub degree: i64,
    entries: BTreeMap<Mono, Vector<usize>>,
}

impl MultiMap {
    pub fn new(source: Arc<GradedSpace>, target: Arc<GradedSpace>, arity: usize, degree: i64) -> Self {
        Self { source, target, arity, degree, entries: BTreeMap::new() }
    }

    /// Add `value` to the map on the (unsorted) argument tuple `args`.
    pub fn add(&mut self, args: &[usize], value: &Vector<usize>) -> Result<(), MapError> {
        if args.len() != self.arity {
            return Err(MapError::ArityMismatch { expected: self.arity, got: args.len() });
        }
        let want = self.source.mono_degree(args) + self.degree;
        for &o in value.keys() {
            let d = self.target.degree(o);
            if d != want {
                return Err(MapError::DegreeMismatch(self.source.mono_label(args), d, want));
            }
        }
        let Some((m, s)) = normalize(args, |i| self.source.degree(i)) else {
            return Ok(());
        };
        let e = self.entries.entry(m.clone()).or_default();
        e.add_scaled(value, &sign_q(s));
        if e.is_zero() {
            self.entries.remove(&m);
        }
        Ok(())
    }

    pub fn entries(&self) -> &BTreeMap<Mono, Vector<usize>> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value on basis arguments in the given order.
    pub fn evaluate_basis(&self, args: &[usize]) -> Vector<usize> {
        if args.len() != self.arity {
            return Vector::zero();
        }
        match normalize(args, |i| self.source.degree(i)) {
            None => Vector::zero(),
            Some((m, s)) => match self.entries.get(&m) {
                None => Vector::zero(),
                Some(v) => v.scaled(&sign_q(s)),
            },
        }
    }

    pub fn evaluate(&self, args: &[Element]) -> Result<Element, MapError> {
        if args.len() != self.arity {
            return Err(MapError::ArityMismatch { expected: self.arity, got: args.len() });
        }
        for a in args {
            if a.space.name() != self.source.name() {
                return Err(MapError::WrongSpace { expected: self.source.name().into(), got: a.space.name().into() });
            }
        }
        let vecs: Vec<&Vector<usize>> = args.iter().map(|a| &a.vec).collect();
        Ok(Element::new(self.target.clone(), self.evaluate_vectors(&vecs)))
    }

    /// Multilinear expansion on arbitrary (possibly inhomogeneous) vectors.
    pub fn evaluate_vectors(&self, args: &[&Vector<usize>]) -> Vector<usize> {
        let mut out = Vector::zero();
        let mut idx = Vec::with_capacity(args.len());
        self.expand(args, &mut idx, Q::from_integer(1.into()), &mut out);
        out
    }

    fn expand(&self, args: &[&Vector<usize>], idx: &mut Vec<usize>, c: Q, out: &mut Vector<usize>) {
        if idx.len() == args.len() {
            out.add_scaled(&self.evaluate_basis(idx), &c);
            return;
        }
        for (&i, ci) in args[idx.len()].iter() {
            idx.push(i);
            self.expand(args, idx, &c * ci, out);
            idx.pop();
        }
    }

    pub fn to_terms(&self) -> Vector<DKey> {
        let mut v = Vector::zero();
        for (m, val) in &self.entries {
            for (&o, c) in val.iter() {
                v.add_term((m.clone(), o), c.clone());
            }
        }
        v
    }
}

/// Arity-indexed family of multibrackets on one space, truncated at arity `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationRep {
    pub space: Arc<GradedSpace>,
    pub cap: usize,
    pub terms: Vector<DKey>,
}

impl DerivationRep {
    pub fn zero(space: Arc<GradedSpace>, cap: usize) -> Self {
        Self { space, cap, terms: Vector::zero() }
    }

    pub fn from_terms(space: Arc<GradedSpace>, cap: usize, terms: Vector<DKey>) -> Self {
        let terms = terms.filter(|(m, _)| m.len() <= cap && !m.is_empty());
        Self { space, cap, terms }
    }

    pub fn from_components(space: Arc<GradedSpace>, cap: usize, comps: &[MultiMap]) -> Result<Self, MapError> {
        let mut terms = Vector::zero();
        for c in comps {
            if c.arity > cap {
                return Err(MapError::CapExceeded(c.arity, cap));
            }
            terms += c.to_terms();
        }
        Ok(Self { space, cap, terms })
    }

    pub fn key_degree(&self, k: &DKey) -> i64 {
        key_degree(self.space.degrees(), k)
    }

    pub fn degree(&self) -> Homogeneity {
        homogeneous_degree(&self.terms, |k| self.key_degree(k))
    }

    /// The arity-`k` component as a multimap of degree `degree`.
    pub fn component(&self, k: usize, degree: i64) -> MultiMap {
        let mut mm = MultiMap::new(self.space.clone(), self.space.clone(), k, degree);
        for ((m, o), c) in self.terms.iter() {
            if m.len() == k {
                mm.entries.entry(m.clone()).or_default().add_term(*o, c.clone());
            }
        }
        mm
    }

    pub fn max_arity(&self) -> usize {
        self.terms.keys().map(|(m, _)| m.len()).max().unwrap_or(0)
    }

    pub fn bracket(&self, other: &DerivationRep) -> DerivationRep {
        derivation_bracket(self, other, self.cap.min(other.cap))
    }
}

pub fn key_degree(degrees: &[i64], k: &DKey) -> i64 {
    degrees[k.1] - k.0.iter().map(|&i| degrees[i]).sum::<i64>()
}

/// `(outer ∘ inner)(x) = Σ_σ ε(σ) outer(inner(x_σ(1..l)), x_σ(l+1..n))`.
///
/// `inner` maps `U -> U`; `outer` has inputs in `U` and arbitrary outputs.
/// `degrees` are the degrees of `U`. Components of arity above `cap` are dropped.
pub fn compose(degrees: &[i64], outer: &Vector<DKey>, inner: &Vector<DKey>, cap: usize, exec: Exec) -> Vector<DKey> {
    let mut by_elem: HashMap<usize, Vec<(&Mono, usize, &Q)>> = HashMap::new();
    for ((m, o), c) in outer.iter() {
        let mut last = None;
        for &x in m {
            if last != Some(x) {
                by_elem.entry(x).or_default().push((m, *o, c));
                last = Some(x);
            }
        }
    }
    let inner_terms: Vec<(&DKey, &Q)> = inner.iter().collect();
    sum_vectors(exec, &inner_terms, |&((s, b), cin)| {
        let mut acc = Vector::zero();
        let Some(list) = by_elem.get(b) else { return acc };
        for &(t, o, cout) in list {
            if s.len() + t.len() - 1 > cap {
                continue;
            }
            let pos = t.iter().position(|y| y == b).unwrap();
            let front = odd(degrees[*b]) && t[..pos].iter().filter(|&&y| odd(degrees[y])).count() % 2 == 1;
            let mut rest = t.clone();
            rest.remove(pos);
            let Some((x, merge)) = mono_mul(degrees, s, &rest) else { continue };
            let mult = multiplicity(s, &x);
            let c = sign_q(front ^ merge) * Q::from_integer((mult as i64).into()) * cin * cout;
            acc.add_term((x, o), c);
        }
        acc
    })
}

fn split_by_degree(degrees: &[i64], v: &Vector<DKey>) -> BTreeMap<i64, Vector<DKey>> {
    let mut out: BTreeMap<i64, Vector<DKey>> = BTreeMap::new();
    for (k, c) in v.iter() {
        out.entry(key_degree(degrees, k)).or_default().add_term(k.clone(), c.clone());
    }
    out
}

/// `[A, B] = A∘B - (-1)^{|A||B|} B∘A`, extended bilinearly to inhomogeneous families.
pub fn bracket_terms(degrees: &[i64], a: &Vector<DKey>, b: &Vector<DKey>, cap: usize, exec: Exec) -> Vector<DKey> {
    let sa = split_by_degree(degrees, a);
    let sb = split_by_degree(degrees, b);
    let mut out = Vector::zero();
    for (&da, va) in &sa {
        for (&db, vb) in &sb {
            out += compose(degrees, va, vb, cap, exec);
            let back = compose(degrees, vb, va, cap, exec);
            out.add_scaled(&back, &-sign_q(odd(da) && odd(db)));
        }
    }
    out
}

pub fn derivation_bracket(d1: &DerivationRep, d2: &DerivationRep, cap: usize) -> DerivationRep {
    derivation_bracket_with(d1, d2, cap, Exec::default())
}

pub fn derivation_bracket_with(d1: &DerivationRep, d2: &DerivationRep, cap: usize, exec: Exec) -> DerivationRep {
    let terms = bracket_terms(d1.space.degrees(), &d1.terms, &d2.terms, cap, exec);
    DerivationRep { space: d1.space.clone(), cap, terms }
}

/// All keys of arity `1..=cap` on a space, in canonical order.
pub fn all_keys(degrees: &[i64], cap: usize) -> Vec<DKey> {
    let mut out = Vec::new();
    for k in 1..=cap {
        for m in crate::graded::monomials(degrees, k) {
            for o in 0..degrees.len() {
                out.push((m.clone(), o));
            }
        }
    }
    out
}
