//! Graded vector spaces, shifts, Koszul signs and normalized symmetric monomials.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::scalar::Q;
use crate::vector::Vector;

/// Sorted list of basis indices: a monomial in a graded symmetric algebra.
pub type Mono = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("duplicate basis symbol `{0}` in space `{1}`")]
    DuplicateSymbol(String, String),
    #[error("unknown symbol `{0}` in space `{1}`")]
    UnknownSymbol(String, String),
    #[error("permutation of length {0} does not match {1} degrees")]
    LengthMismatch(usize, usize),
    #[error("not a bijection: {0:?}")]
    NotBijective(Vec<usize>),
    #[error("element mixes spaces `{0}` and `{1}`")]
    MixedSpaces(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    name: String,
    symbols: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new<S: Into<String>>(name: impl Into<String>, basis: impl IntoIterator<Item = (S, i64)>) -> Result<Self, GradedError> {
        let name = name.into();
        let mut symbols = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (s, d) in basis {
            let s: String = s.into();
            if index.insert(s.clone(), symbols.len()).is_some() {
                return Err(GradedError::DuplicateSymbol(s, name));
            }
            symbols.push(s);
            degrees.push(d);
        }
        Ok(Self { name, symbols, degrees, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, sym: &str) -> Result<usize, GradedError> {
        self.index.get(sym).copied().ok_or_else(|| GradedError::UnknownSymbol(sym.to_string(), self.name.clone()))
    }

    /// `S[n]`: same basis, every degree lowered by `n`.
    pub fn shifted(&self, n: i64) -> GradedSpace {
        let name = if n == 0 { self.name.clone() } else { format!("{}[{}]", self.name, n) };
        GradedSpace {
            name,
            symbols: self.symbols.clone(),
            degrees: self.degrees.iter().map(|d| d - n).collect(),
            index: self.index.clone(),
        }
    }

    /// Direct sum with the basis of `self` first.
    pub fn direct_sum(&self, other: &GradedSpace, name: impl Into<String>) -> Result<GradedSpace, GradedError> {
        GradedSpace::new(
            name,
            self.symbols
                .iter()
                .cloned()
                .zip(self.degrees.iter().copied())
                .chain(other.symbols.iter().cloned().zip(other.degrees.iter().copied())),
        )
    }

    pub fn mono_degree(&self, m: &[usize]) -> i64 {
        m.iter().map(|&i| self.degrees[i]).sum()
    }

    pub fn mono_label(&self, m: &[usize]) -> String {
        m.iter().map(|&i| self.symbols[i].as_str()).join(" ")
    }
}

/// Degree of a vector whose keys have known degrees: `Some(d)` if homogeneous.
pub fn homogeneous_degree<K: Ord + Clone>(v: &Vector<K>, deg: impl Fn(&K) -> i64) -> Homogeneity {
    let mut it = v.keys().map(deg);
    match it.next() {
        None => Homogeneity::Zero,
        Some(d) => {
            if it.all(|e| e == d) {
                Homogeneity::Degree(d)
            } else {
                Homogeneity::Inhomogeneous
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Inhomogeneous,
}

/// Element of a named graded space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub space: Arc<GradedSpace>,
    pub vec: Vector<usize>,
}

impl Element {
    pub fn new(space: Arc<GradedSpace>, vec: Vector<usize>) -> Self {
        Self { space, vec }
    }

    pub fn zero(space: Arc<GradedSpace>) -> Self {
        Self { space, vec: Vector::zero() }
    }

    pub fn basis(space: Arc<GradedSpace>, i: usize) -> Self {
        Self { space, vec: Vector::basis(i) }
    }

    pub fn degree(&self) -> Homogeneity {
        homogeneous_degree(&self.vec, |&i| self.space.degree(i))
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, GradedError> {
        if self.space.name() != other.space.name() {
            return Err(GradedError::MixedSpaces(self.space.name().into(), other.space.name().into()));
        }
        Ok(Element { space: self.space.clone(), vec: &self.vec + &other.vec })
    }

    pub fn render(&self) -> String {
        render_vector(&self.vec, |&i| self.space.symbol(i).to_string())
    }
}

pub fn shift_space(s: &GradedSpace, n: i64) -> GradedSpace {
    s.shifted(n)
}

/// The same coefficients, read in `S[n]`.
pub fn shift_element(x: &Element, n: i64) -> Element {
    Element { space: Arc::new(x.space.shifted(n)), vec: x.vec.clone() }
}

pub fn render_vector<K: Ord + Clone>(v: &Vector<K>, label: impl Fn(&K) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter().map(|(k, c)| format!("{}*{}", crate::scalar::fmt_q(c), label(k))).join(" + ")
}

#[inline]
pub fn odd(d: i64) -> bool {
    d & 1 != 0
}

/// Koszul sign of the reordering `x_1..x_n -> x_{p[0]}..x_{p[n-1]}` (0-based).
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i32, GradedError> {
    if perm.len() != degrees.len() {
        return Err(GradedError::LengthMismatch(perm.len(), degrees.len()));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(GradedError::NotBijective(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(if koszul_odd(perm, degrees) { -1 } else { 1 })
}

/// Parity of the Koszul sign; `perm` must be a bijection.
pub fn koszul_odd(perm: &[usize], degrees: &[i64]) -> bool {
    let mut acc = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && odd(degrees[perm[i]]) && odd(degrees[perm[j]]) {
                acc = !acc;
            }
        }
    }
    acc
}

/// Sort factors into basis order. Returns `None` when an odd factor repeats,
/// otherwise the sorted monomial and whether the Koszul sign is `-1`.
pub fn normalize(factors: &[usize], degree: impl Fn(usize) -> i64) -> Option<(Mono, bool)> {
    let mut m = factors.to_vec();
    let mut sign = false;
    for i in 1..m.len() {
        let mut j = i;
        while j > 0 && m[j - 1] > m[j] {
            if odd(degree(m[j - 1])) && odd(degree(m[j])) {
                sign = !sign;
            }
            m.swap(j - 1, j);
            j -= 1;
        }
    }
    if m.windows(2).any(|w| w[0] == w[1] && odd(degree(w[0]))) {
        return None;
    }
    Some((m, sign))
}

/// Symbol-level normalization: returns the sorted monomial and a sign in {-1, 0, 1}.
pub fn normalize_monomial(space: &GradedSpace, factors: &[&str]) -> Result<(Mono, i32), GradedError> {
    let idx: Vec<usize> = factors.iter().map(|s| space.index_of(s)).collect::<Result<_, _>>()?;
    Ok(match normalize(&idx, |i| space.degree(i)) {
        None => {
            let mut m = idx;
            m.sort_unstable();
            (m, 0)
        }
        Some((m, s)) => (m, if s { -1 } else { 1 }),
    })
}

/// All `(i, n-i)`-unshuffles of `0..n`: the first `i` and last `n-i` entries increase.
pub fn unshuffles(i: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(i).map(move |first| {
        let mut p = first.clone();
        p.extend((0..n).filter(|x| !first.contains(x)));
        p
    })
}

/// Nonzero sorted monomials of length `k` (odd factors not repeated).
pub fn monomials(degrees: &[i64], k: usize) -> Vec<Mono> {
    (0..degrees.len())
        .combinations_with_replacement(k)
        .filter(|m| !m.windows(2).any(|w| w[0] == w[1] && odd(degrees[w[0]])))
        .collect()
}

/// Number of ways to choose the sub-multiset `sub` from `whole` by positions.
pub fn multiplicity(sub: &[usize], whole: &[usize]) -> u64 {
    let mut total = 1u64;
    let mut i = 0;
    while i < sub.len() {
        let c = sub[i];
        let k = sub[i..].iter().take_while(|&&x| x == c).count();
        let n = whole.iter().filter(|&&x| x == c).count();
        total *= binomial(n as u64, k as u64);
        i += k;
    }
    total
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Remove one occurrence of `x` from a sorted monomial.
pub fn remove_one(m: &[usize], x: usize) -> Option<Mono> {
    let pos = m.iter().position(|&y| y == x)?;
    let mut out = m.to_vec();
    out.remove(pos);
    Some(out)
}

/// `1/prod(mult!)` for the repeated factors of a sorted monomial.
pub fn symmetry_factor(m: &[usize]) -> Q {
    let mut f = Q::from_integer(1.into());
    let mut i = 0;
    while i < m.len() {
        let k = m[i..].iter().take_while(|&&x| x == m[i]).count();
        f /= crate::scalar::factorial(k);
        i += k;
    }
    f
}
