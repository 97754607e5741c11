//! The `linfty-doc/1` text format, verifier commands and their reports.
//!
//! ```text
//! linfty-doc/1
//! [caps]
//! arity = 4
//! weight = 6
//! shift = 2
//! [space sl2]
//! h 0
//! e 0
//! f 0
//! [dgla sl2]
//! h e -> e : 2
//! ```
//!
//! Structure sections are `[dgla NAME]` (one input: differential, two inputs: bracket,
//! both on the unshifted space) or `[products NAME]` (the brackets `m̌_k` on the shifted
//! space, any arity). The first structure section is the algebra, a second one the target
//! of `[morphism SRC DST]`. `[module G V]` lines read `x ; u -> w : c` for `ρ(x)u = c w`,
//! with an empty left side for the differential of `V`. `[operator V G]` lines are the
//! components of `T`, and `[rmatrix G]` lines `x y : c` are monomials in `g[1-n]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bridge::{bridge_algebras, check_bridge_diagram, Bridge, BridgeError};
use crate::check::Checks;
use crate::graded::{normalize, odd, GradedError, GradedSpace, Mono};
use crate::linfty::{check_linfty, check_morphism_upto, representation_check, FiniteDgla, LInftyError, LInftyMorphism, LInftyStructure, Representation};
use crate::multibracket::DKey;
use crate::poisson::{check_rmatrix, schouten_structure, triangular_bialgebra, PoissonAlgebra, PoissonError};
use crate::poly::Poly;
use crate::rota_baxter::{check_rb_operator, Hlr, RbError, RbOperator};
use crate::scalar::{fmt_q, parse_q, sign_q, ParseQError, Q};
use crate::vector::Vector;

pub const FORMAT: &str = "linfty-doc/1";
pub const REPORT_FORMAT: &str = "linfty-report/1";

/// Sign and shift conventions every verdict depends on; reports carry its hash.
pub const CONVENTIONS: &str = "\
brackets: graded symmetric m_k on g[1], degree 1, stored on sorted monomials
dgla: m_1(a) = -(da), m_2(a,b) = (-1)^|a| [a,b]
koszul: (-1)^{|a||b|} per transposition of homogeneous factors
representation: rho_k: S^k(g[1]) -> gl(V)[1], E[w,u] u = w
poisson: {xi_i, v_i} = 1, xi_i of degree 1-|e_i|, v_i of degree |e_i|+n-1
double: D_n(f d_o) = -(-1)^{(n+1)(|e_o|+1)} f v_o
gauge: x*h = x + sum 1/n! (ad_h^n x + ad_h^{n-1} dh), ad_h y = [y,h]
rota-baxter weight: cap+1 - #g-inputs - [output in V]
";

pub fn convention_hash() -> String {
    Sha256::digest(CONVENTIONS.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocError {
    #[error("line {line}: unknown symbol `{sym}`")]
    UnknownSymbol { line: usize, sym: String },
    #[error("line {line}: unknown space `{name}`")]
    UnknownSpace { line: usize, name: String },
    #[error("line {line}: {source}")]
    Rational { line: usize, source: ParseQError },
    #[error("line {line}: duplicate basis symbol `{sym}`")]
    DuplicateSymbol { line: usize, sym: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub arity: usize,
    pub weight: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { arity: 4, weight: 6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Dgla,
    Products,
}

/// A structure on a named space, stored as brackets on the shifted space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSection {
    pub space: Arc<GradedSpace>,
    pub kind: Kind,
    pub terms: Vector<DKey>,
}

impl AlgebraSection {
    pub fn structure(&self, cap: usize) -> Result<LInftyStructure, LInftyError> {
        LInftyStructure::new(self.space.clone(), cap, self.terms.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSection {
    pub space: Arc<GradedSpace>,
    pub rho: Vector<DKey>,
    pub differential: Vector<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub caps: Caps,
    pub shift: Option<i64>,
    pub algebra: AlgebraSection,
    pub module: Option<ModuleSection>,
    pub operator: Option<Vector<DKey>>,
    /// Monomials in the basis of `g`, read in `g[1-n]`.
    pub rmatrix: Option<Poly>,
    pub target: Option<AlgebraSection>,
    pub morphism: Option<Vector<DKey>>,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn syntax(line: usize, msg: impl Into<String>) -> DocError {
    DocError::Syntax { line, msg: msg.into() }
}

fn invalid(line: usize, msg: impl Into<String>) -> DocError {
    DocError::Invalid { line, msg: msg.into() }
}

fn valid_symbol(s: &str) -> bool {
    !s.is_empty() && !s.starts_with(['[', '#']) && !s.contains([':', ';']) && s != "->" && !s.chars().any(char::is_whitespace)
}

fn lookup(space: &GradedSpace, line: usize, sym: &str) -> Result<usize, DocError> {
    space.index_of(sym).map_err(|_| DocError::UnknownSymbol { line, sym: sym.to_string() })
}

fn lookup_all(space: &GradedSpace, line: usize, words: &str) -> Result<Vec<usize>, DocError> {
    words.split_whitespace().map(|s| lookup(space, line, s)).collect()
}

/// `lhs -> out : c` (or `lhs : c` when `arrow` is false).
fn split_entry(l: &Line, arrow: bool) -> Result<(String, Option<String>, Q), DocError> {
    let (body, coeff) = l.text.rsplit_once(':').ok_or_else(|| syntax(l.no, "expected `: coefficient`"))?;
    let c = parse_q(coeff).map_err(|source| DocError::Rational { line: l.no, source })?;
    if !arrow {
        if body.contains("->") {
            return Err(syntax(l.no, "unexpected `->`"));
        }
        return Ok((body.trim().to_string(), None, c));
    }
    let (lhs, out) = body.split_once("->").ok_or_else(|| syntax(l.no, "expected `->`"))?;
    let out = out.trim();
    if out.split_whitespace().count() != 1 {
        return Err(syntax(l.no, "expected exactly one output symbol"));
    }
    Ok((lhs.trim().to_string(), Some(out.to_string()), c))
}

/// Sort a monomial in a space with the given degrees; odd repeats are rejected.
fn sorted(line: usize, idx: &[usize], deg: impl Fn(usize) -> i64) -> Result<(Mono, Q), DocError> {
    normalize(idx, deg).map(|(m, s)| (m, sign_q(s))).ok_or_else(|| invalid(line, "monomial repeats an odd factor"))
}

fn check_degree(line: usize, got: i64, want: i64) -> Result<(), DocError> {
    if got != want {
        return Err(invalid(line, format!("entry has degree {got}, expected {want}")));
    }
    Ok(())
}

#[derive(Default)]
struct Raw<'a> {
    caps: Vec<Line<'a>>,
    spaces: Vec<(String, usize, Vec<Line<'a>>)>,
    sections: Vec<(String, Vec<String>, usize, Vec<Line<'a>>)>,
}

enum Open {
    Caps,
    Space(usize),
    Section(usize),
}

fn split_sections(text: &str) -> Result<Raw<'_>, DocError> {
    let mut lines = text.lines().enumerate().map(|(i, t)| Line { no: i + 1, text: t.trim() }).filter(|l| !l.text.is_empty() && !l.text.starts_with('#'));
    match lines.next() {
        Some(l) if l.text == FORMAT => {}
        Some(l) => return Err(syntax(l.no, format!("expected `{FORMAT}`"))),
        None => return Err(syntax(1, format!("expected `{FORMAT}`"))),
    }
    let mut raw = Raw::default();
    let mut seen_caps = false;
    let mut open = None;
    for l in lines {
        let Some(h) = l.text.strip_prefix('[') else {
            match open {
                Some(Open::Caps) => raw.caps.push(l),
                Some(Open::Space(i)) => raw.spaces[i].2.push(l),
                Some(Open::Section(i)) => raw.sections[i].3.push(l),
                None => return Err(syntax(l.no, "entry outside a section")),
            }
            continue;
        };
        let h = h.strip_suffix(']').ok_or_else(|| syntax(l.no, "unterminated section header"))?;
        let mut words = h.split_whitespace();
        let kind = words.next().ok_or_else(|| syntax(l.no, "empty section header"))?.to_string();
        let args: Vec<String> = words.map(str::to_string).collect();
        let want = match kind.as_str() {
            "caps" => 0,
            "space" | "dgla" | "products" | "rmatrix" => 1,
            "module" | "operator" | "morphism" => 2,
            _ => return Err(syntax(l.no, format!("unknown section `{kind}`"))),
        };
        if args.len() != want {
            return Err(syntax(l.no, format!("[{kind}] takes {want} name(s)")));
        }
        open = Some(match kind.as_str() {
            "caps" => {
                if std::mem::replace(&mut seen_caps, true) {
                    return Err(syntax(l.no, "duplicate [caps]"));
                }
                Open::Caps
            }
            "space" => {
                if raw.spaces.iter().any(|(n, _, _)| n == &args[0]) {
                    return Err(syntax(l.no, format!("duplicate space `{}`", args[0])));
                }
                raw.spaces.push((args[0].clone(), l.no, Vec::new()));
                Open::Space(raw.spaces.len() - 1)
            }
            _ => {
                let structure = kind == "dgla" || kind == "products";
                if raw.sections.iter().any(|(k, a, _, _)| if structure { (k == "dgla" || k == "products") && a == &args } else { k == &kind }) {
                    return Err(syntax(l.no, format!("duplicate [{kind}]")));
                }
                raw.sections.push((kind, args, l.no, Vec::new()));
                Open::Section(raw.sections.len() - 1)
            }
        });
    }
    Ok(raw)
}

fn parse_caps(lines: &[Line]) -> Result<(Caps, Option<i64>), DocError> {
    let mut caps = Caps::default();
    let mut shift = None;
    for l in lines.iter().filter(|l| !l.text.is_empty()) {
        let (k, v) = l.text.split_once('=').ok_or_else(|| syntax(l.no, "expected `key = value`"))?;
        let v = v.trim();
        let bad = || invalid(l.no, format!("bad value `{v}`"));
        match k.trim() {
            "arity" => caps.arity = v.parse().ok().filter(|&a| a >= 1).ok_or_else(bad)?,
            "weight" => caps.weight = v.parse().ok().filter(|&w| w >= 2).ok_or_else(bad)?,
            "shift" => shift = Some(v.parse().map_err(|_| bad())?),
            other => return Err(syntax(l.no, format!("unknown cap `{other}`"))),
        }
    }
    Ok((caps, shift))
}

fn parse_space(name: &str, header: usize, lines: &[Line]) -> Result<Arc<GradedSpace>, DocError> {
    let mut basis = Vec::new();
    for l in lines {
        let parts: Vec<&str> = l.text.split_whitespace().collect();
        let [sym, deg] = parts[..] else {
            return Err(syntax(l.no, "expected `symbol degree`"));
        };
        if !valid_symbol(sym) {
            return Err(syntax(l.no, format!("invalid symbol `{sym}`")));
        }
        if basis.iter().any(|(s, _)| s == sym) {
            return Err(DocError::DuplicateSymbol { line: l.no, sym: sym.to_string() });
        }
        let d: i64 = deg.parse().map_err(|_| invalid(l.no, format!("bad degree `{deg}`")))?;
        basis.push((sym.to_string(), d));
    }
    GradedSpace::new(name, basis).map(Arc::new).map_err(|e| match e {
        GradedError::DuplicateSymbol(sym, _) => DocError::DuplicateSymbol { line: header, sym },
        e => invalid(header, e.to_string()),
    })
}

fn parse_dgla(space: &Arc<GradedSpace>, lines: &[Line]) -> Result<Vector<DKey>, DocError> {
    let mut g = FiniteDgla::new(space.clone());
    let mut d: BTreeMap<usize, Vector<usize>> = BTreeMap::new();
    let mut br: BTreeMap<(usize, usize), Vector<usize>> = BTreeMap::new();
    let deg = |i: usize| space.degree(i);
    for l in lines {
        let (lhs, out, c) = split_entry(l, true)?;
        let o = lookup(space, l.no, out.as_deref().unwrap_or_default())?;
        match lookup_all(space, l.no, &lhs)?[..] {
            [x] => {
                check_degree(l.no, deg(o), deg(x) + 1)?;
                d.entry(x).or_default().add_term(o, c);
            }
            [x, y] => {
                check_degree(l.no, deg(o), deg(x) + deg(y))?;
                let (key, s) = if x <= y { ((x, y), Q::from_integer(1.into())) } else { ((y, x), -sign_q(odd(deg(x)) && odd(deg(y)))) };
                if x == y && !odd(deg(x)) {
                    return Err(invalid(l.no, "bracket of an even element with itself must vanish"));
                }
                br.entry(key).or_default().add_term(o, s * c);
            }
            _ => return Err(invalid(l.no, "dgla entries take one or two inputs")),
        }
    }
    for (i, v) in d {
        g.set_d(i, v);
    }
    for ((i, j), v) in br {
        g.set_bracket(i, j, v);
    }
    Ok(g.to_linfty(2).map_err(|e| invalid(0, e.to_string()))?.m.terms)
}

fn parse_family(src: &GradedSpace, dst: &GradedSpace, degree: i64, allow_empty: bool, lines: &[Line]) -> Result<Vector<DKey>, DocError> {
    let mut terms = Vector::zero();
    let sdeg = |i: usize| src.degree(i) - 1;
    for l in lines {
        let (lhs, out, c) = split_entry(l, true)?;
        let o = lookup(dst, l.no, out.as_deref().unwrap_or_default())?;
        let idx = lookup_all(src, l.no, &lhs)?;
        if idx.is_empty() && !allow_empty {
            return Err(invalid(l.no, "constant entries are not allowed"));
        }
        check_degree(l.no, dst.degree(o) - 1, idx.iter().map(|&i| sdeg(i)).sum::<i64>() + degree)?;
        let (m, s) = sorted(l.no, &idx, sdeg)?;
        terms.add_term((m, o), s * c);
    }
    Ok(terms)
}

fn parse_module(g: &GradedSpace, v: &Arc<GradedSpace>, lines: &[Line]) -> Result<ModuleSection, DocError> {
    let nv = v.dim();
    let mut rho = Vector::zero();
    let mut differential = Vector::zero();
    for l in lines {
        let (lhs, out, c) = split_entry(l, true)?;
        let (xs, u) = lhs.split_once(';').ok_or_else(|| syntax(l.no, "expected `inputs ; vector`"))?;
        let u = lookup(v, l.no, u.trim())?;
        let w = lookup(v, l.no, out.as_deref().unwrap_or_default())?;
        let idx = lookup_all(g, l.no, xs)?;
        let e = w * nv + u;
        let gl_deg = v.degree(w) - v.degree(u);
        if idx.is_empty() {
            check_degree(l.no, gl_deg, 1)?;
            differential.add_term(e, c);
        } else {
            let sdeg = |i: usize| g.degree(i) - 1;
            check_degree(l.no, gl_deg - 1, idx.iter().map(|&i| sdeg(i)).sum())?;
            let (m, s) = sorted(l.no, &idx, sdeg)?;
            rho.add_term((m, e), s * c);
        }
    }
    Ok(ModuleSection { space: v.clone(), rho, differential })
}

fn parse_rmatrix(g: &GradedSpace, n: i64, lines: &[Line]) -> Result<Poly, DocError> {
    let mut r = Poly::zero();
    let deg = |i: usize| g.degree(i) + n - 1;
    for l in lines {
        let (lhs, _, c) = split_entry(l, false)?;
        let idx = lookup_all(g, l.no, &lhs)?;
        let (m, s) = sorted(l.no, &idx, deg)?;
        r.add_term(m, s * c);
    }
    Ok(r)
}

pub fn parse(text: &str) -> Result<AlgebraDocument, DocError> {
    let raw = split_sections(text)?;
    let (caps, shift) = parse_caps(&raw.caps)?;
    let mut spaces: BTreeMap<&str, Arc<GradedSpace>> = BTreeMap::new();
    for (name, header, lines) in &raw.spaces {
        spaces.insert(name, parse_space(name, *header, lines)?);
    }
    let first = raw.spaces.first().ok_or_else(|| DocError::MissingSection("space".into()))?;
    let space = |line: usize, name: &str| spaces.get(name).cloned().ok_or_else(|| DocError::UnknownSpace { line, name: name.to_string() });

    let mut structures = Vec::new();
    for (kind, args, header, lines) in raw.sections.iter().filter(|s| s.0 == "dgla" || s.0 == "products") {
        let sp = space(*header, &args[0])?;
        let (kind, terms) = if kind == "dgla" {
            (Kind::Dgla, parse_dgla(&sp, lines)?)
        } else {
            (Kind::Products, parse_family(&sp, &sp, 1, false, lines)?)
        };
        if let Some(((m, _), _)) = terms.iter().find(|((m, _), _)| m.len() > caps.arity) {
            return Err(invalid(*header, format!("arity {} exceeds the arity cap {}", m.len(), caps.arity)));
        }
        structures.push((*header, AlgebraSection { space: sp, kind, terms }));
    }
    if structures.len() > 2 {
        return Err(syntax(structures[2].0, "at most two structure sections"));
    }
    let mut structures = structures.into_iter().map(|(_, s)| s);
    let algebra = structures.next().unwrap_or_else(|| AlgebraSection { space: spaces[first.0.as_str()].clone(), kind: Kind::Products, terms: Vector::zero() });
    let target = structures.next();
    let gname = algebra.space.name().to_string();

    let section = |kind: &str| raw.sections.iter().find(|s| s.0 == kind);
    let expect_g = |line: usize, name: &str| if name == gname { Ok(()) } else { Err(invalid(line, format!("expected the algebra `{gname}`, found `{name}`"))) };

    let module = match section("module") {
        Some((_, args, header, lines)) => {
            expect_g(*header, &args[0])?;
            Some(parse_module(&algebra.space, &space(*header, &args[1])?, lines)?)
        }
        None => None,
    };
    let operator = match section("operator") {
        Some((_, args, header, lines)) => {
            expect_g(*header, &args[1])?;
            let v = module.as_ref().map(|m| m.space.clone()).ok_or_else(|| DocError::MissingSection("module".into()))?;
            if v.name() != args[0] {
                return Err(invalid(*header, format!("operator source must be the module `{}`", v.name())));
            }
            Some(parse_family(&v, &algebra.space, 0, false, lines)?)
        }
        None => None,
    };
    let rmatrix = match section("rmatrix") {
        Some((_, args, header, lines)) => {
            expect_g(*header, &args[0])?;
            let n = shift.ok_or_else(|| invalid(*header, "[rmatrix] needs `shift` in [caps]"))?;
            Some(parse_rmatrix(&algebra.space, n, lines)?)
        }
        None => None,
    };
    let morphism = match section("morphism") {
        Some((_, args, header, lines)) => {
            expect_g(*header, &args[0])?;
            let t = target.as_ref().ok_or_else(|| DocError::MissingSection("dgla or products for the target".into()))?;
            if t.space.name() != args[1] {
                return Err(invalid(*header, format!("morphism target must be `{}`", t.space.name())));
            }
            Some(parse_family(&algebra.space, &t.space, 0, false, lines)?)
        }
        None => None,
    };
    Ok(AlgebraDocument { caps, shift, algebra, module, operator, rmatrix, target, morphism })
}

fn write_space(out: &mut String, s: &GradedSpace) {
    let _ = writeln!(out, "[space {}]", s.name());
    for (sym, d) in s.symbols().iter().zip(s.degrees()) {
        let _ = writeln!(out, "{sym} {d}");
    }
}

fn write_entry(out: &mut String, lhs: &str, rhs: &str, c: &Q) {
    let _ = writeln!(out, "{lhs} -> {rhs} : {}", fmt_q(c));
}

/// Canonical order: by arity, then by basis order of inputs and output.
fn canonical(terms: &Vector<DKey>) -> Vec<(&DKey, &Q)> {
    terms.iter().sorted_by(|a, b| (a.0 .0.len(), a.0).cmp(&(b.0 .0.len(), b.0))).collect()
}

fn write_structure(out: &mut String, a: &AlgebraSection) {
    let s = &a.space;
    let dgla = (a.kind == Kind::Dgla).then(|| LInftyStructure::new(s.clone(), 2, a.terms.clone()).ok().and_then(|l| FiniteDgla::from_linfty(&l))).flatten();
    match dgla {
        Some(g) => {
            let _ = writeln!(out, "[dgla {}]", s.name());
            for i in 0..s.dim() {
                for (&o, c) in g.d_basis(i).iter() {
                    write_entry(out, s.symbol(i), s.symbol(o), c);
                }
            }
            for i in 0..s.dim() {
                for j in i..s.dim() {
                    for (&o, c) in g.bracket_basis(i, j).iter() {
                        write_entry(out, &format!("{} {}", s.symbol(i), s.symbol(j)), s.symbol(o), c);
                    }
                }
            }
        }
        None => {
            let _ = writeln!(out, "[products {}]", s.name());
            for ((m, o), c) in canonical(&a.terms) {
                write_entry(out, &s.mono_label(m), s.symbol(*o), c);
            }
        }
    }
}

pub fn serialize(doc: &AlgebraDocument) -> String {
    let mut out = format!("{FORMAT}\n[caps]\narity = {}\nweight = {}\n", doc.caps.arity, doc.caps.weight);
    if let Some(n) = doc.shift {
        let _ = writeln!(out, "shift = {n}");
    }
    let g = &doc.algebra.space;
    write_space(&mut out, g);
    if let Some(m) = &doc.module {
        write_space(&mut out, &m.space);
    }
    if let Some(t) = &doc.target {
        write_space(&mut out, &t.space);
    }
    write_structure(&mut out, &doc.algebra);
    if let Some(m) = &doc.module {
        let v = &m.space;
        let nv = v.dim();
        let _ = writeln!(out, "[module {} {}]", g.name(), v.name());
        for (&e, c) in m.differential.iter() {
            write_entry(&mut out, &format!("; {}", v.symbol(e % nv)), v.symbol(e / nv), c);
        }
        for ((x, e), c) in canonical(&m.rho) {
            write_entry(&mut out, &format!("{} ; {}", g.mono_label(x), v.symbol(e % nv)), v.symbol(e / nv), c);
        }
        if let Some(t) = &doc.operator {
            let _ = writeln!(out, "[operator {} {}]", v.name(), g.name());
            for ((m, o), c) in canonical(t) {
                write_entry(&mut out, &v.mono_label(m), g.symbol(*o), c);
            }
        }
    }
    if let Some(r) = &doc.rmatrix {
        let _ = writeln!(out, "[rmatrix {}]", g.name());
        for (m, c) in r.iter().sorted_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0))) {
            let _ = writeln!(out, "{} : {}", g.mono_label(m), fmt_q(c));
        }
    }
    if let Some(t) = &doc.target {
        write_structure(&mut out, t);
        if let Some(f) = &doc.morphism {
            let _ = writeln!(out, "[morphism {} {}]", g.name(), t.space.name());
            for ((m, o), c) in canonical(f) {
                write_entry(&mut out, &g.mono_label(m), t.space.symbol(*o), c);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckLinfty,
    CheckMorphism,
    CheckRb,
    CheckRmatrix,
    DeriveSchouten,
    MakeBialgebra,
    RmatrixToRb,
    CheckBridge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckLinfty => "check linfty",
            Command::CheckMorphism => "check morphism",
            Command::CheckRb => "check rb",
            Command::CheckRmatrix => "check rmatrix",
            Command::DeriveSchouten => "derive schouten",
            Command::MakeBialgebra => "make bialgebra",
            Command::RmatrixToRb => "convert rmatrix-to-rb",
            Command::CheckBridge => "check bridge",
        }
    }
}

/// Command-line overrides of the document's caps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub arity: Option<usize>,
    pub weight: Option<usize>,
    pub shift: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub command: &'static str,
    pub verdict: Verdict,
    pub caps: Caps,
    pub shift: Option<i64>,
    pub convention: String,
    pub checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    fn new(command: Command, caps: Caps, shift: Option<i64>) -> Self {
        Self { format: REPORT_FORMAT, command: command.name(), verdict: Verdict::Pass, caps, shift, convention: convention_hash(), checks: Checks::new(), output: None, error: None }
    }

    /// A report for input that never reached a check, e.g. a parse failure.
    pub fn input_error(command: Command, msg: impl Into<String>) -> Self {
        let mut r = Self::new(command, Caps::default(), None);
        r.verdict = Verdict::Error;
        r.error = Some(msg.into());
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {:?}\n", self.command, self.verdict).to_lowercase();
        let _ = write!(out, "caps: arity {} weight {}", self.caps.arity, self.caps.weight);
        if let Some(n) = self.shift {
            let _ = write!(out, " shift {n}");
        }
        let _ = writeln!(out, "\nconventions: {}", &self.convention[..16]);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        for c in self.checks.iter() {
            if c.pass {
                let _ = writeln!(out, "  ok    {}", c.name);
            } else {
                let _ = writeln!(out, "  FAIL  {} ({} nonzero)", c.name, c.nonzero);
                for r in &c.residuals {
                    let _ = writeln!(out, "          at {}: {}", r.at, r.value);
                }
            }
        }
        if let Some(o) = &self.output {
            out.push_str("output:\n");
            out.push_str(o);
            if !o.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error("missing section [{0}]")]
    Missing(&'static str),
    #[error("{0}")]
    Cap(String),
    #[error(transparent)]
    LInfty(#[from] LInftyError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Rb(#[from] RbError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}

fn need<T>(x: &Option<T>, what: &'static str) -> Result<T, RunError>
where
    T: Clone,
{
    x.clone().ok_or(RunError::Missing(what))
}

pub fn run(command: Command, doc: &AlgebraDocument, overrides: Overrides) -> Report {
    let caps = Caps { arity: overrides.arity.unwrap_or(doc.caps.arity), weight: overrides.weight.unwrap_or(doc.caps.weight) };
    let shift = overrides.shift.or(doc.shift);
    let mut report = Report::new(command, caps, shift);
    match dispatch(command, doc, caps, shift) {
        Ok((checks, output)) => {
            report.verdict = if checks.pass() { Verdict::Pass } else { Verdict::Fail };
            report.checks = checks;
            report.output = output;
        }
        Err(e) => {
            report.verdict = Verdict::Error;
            report.error = Some(e.to_string());
        }
    }
    report
}

type Outcome = Result<(Checks, Option<String>), RunError>;

fn dispatch(command: Command, doc: &AlgebraDocument, caps: Caps, shift: Option<i64>) -> Outcome {
    let n = || shift.ok_or(RunError::Missing("caps: shift"));
    match command {
        Command::CheckLinfty => Ok((check_linfty(&doc.algebra.structure(caps.arity)?), None)),
        Command::CheckMorphism => {
            let t = need(&doc.target, "target structure")?;
            let f = need(&doc.morphism, "morphism")?;
            let map = LInftyMorphism::new(doc.algebra.structure(caps.arity)?, t.structure(caps.arity)?, f)?;
            Ok((check_morphism_upto(&map, caps.arity, Default::default()), None))
        }
        Command::CheckRb => check_rb(doc, caps),
        Command::CheckRmatrix => {
            let (m, r) = poisson_inputs(doc, caps)?;
            Ok((check_rmatrix(&m, &r, n()?, caps.weight)?, None))
        }
        Command::DeriveSchouten => {
            let m = doc.algebra.structure(poisson_cap(caps)?)?;
            let s = schouten_structure(&m, n()?, caps.weight)?;
            let checks = check_linfty(&s.structure).prefixed("Schouten algebra");
            Ok((checks, Some(render_products(&s.structure))))
        }
        Command::MakeBialgebra => {
            let (m, r) = poisson_inputs(doc, caps)?;
            let n = n()?;
            let b = triangular_bialgebra(&m, &r, n, caps.weight)?;
            let pa = PoissonAlgebra::new(m.space.clone(), n, caps.weight)?;
            Ok((b.checks, Some(format!("r(m) = {}\n", pa.render(&b.rm)))))
        }
        Command::RmatrixToRb => {
            let (m, r) = poisson_inputs(doc, caps)?;
            let b = Bridge::new(m.space.clone(), n()?, caps.weight)?;
            let (op, cert) = b.rmatrix_to_rb(&m, &r)?;
            let rep = b.coadjoint(&m)?;
            let out = AlgebraDocument {
                caps: Caps { arity: caps.weight - 1, weight: caps.weight },
                shift,
                algebra: doc.algebra.clone(),
                module: Some(ModuleSection { space: rep.v.clone(), rho: rep.rho, differential: rep.differential }),
                operator: Some(op.terms),
                rmatrix: None,
                target: None,
                morphism: None,
            };
            Ok((cert, Some(serialize(&out))))
        }
        Command::CheckBridge => {
            // Actions of arity k sit in arity k + 1 of the operator side, which has cap W - 1.
            let m = doc.algebra.structure(poisson_cap(caps)?.min(caps.weight - 2))?;
            let r = poisson_poly(doc, &m)?;
            let n = n()?;
            let mut checks = check_rmatrix(&m, &r, n, caps.weight)?.prefixed("r-matrix");
            if !checks.pass() {
                return Ok((checks, None));
            }
            let b = Bridge::new(m.space.clone(), n, caps.weight)?;
            let alg = bridge_algebras(&b)?;
            checks.extend(check_bridge_diagram(&b, &alg, &m, &r, caps.arity)?);
            Ok((checks, None))
        }
    }
}

/// Structures fed to the Poisson algebra of weight `W` live in arities below `W`.
fn poisson_cap(caps: Caps) -> Result<usize, RunError> {
    if caps.weight < 3 {
        return Err(RunError::Cap(format!("weight cap {} is below 3", caps.weight)));
    }
    Ok(caps.arity.min(caps.weight - 1))
}

fn poisson_inputs(doc: &AlgebraDocument, caps: Caps) -> Result<(LInftyStructure, Poly), RunError> {
    let m = doc.algebra.structure(poisson_cap(caps)?)?;
    let r = poisson_poly(doc, &m)?;
    Ok((m, r))
}

/// The r-matrix on the Poisson generators, which list `g*[-1]` before `g[1-n]`.
fn poisson_poly(doc: &AlgebraDocument, m: &LInftyStructure) -> Result<Poly, RunError> {
    let d = m.dim();
    Ok(need(&doc.rmatrix, "rmatrix")?.map_keys(|k| k.iter().map(|i| i + d).collect()))
}

fn check_rb(doc: &AlgebraDocument, caps: Caps) -> Outcome {
    let module = need(&doc.module, "module")?;
    let t = RbOperator::new(need(&doc.operator, "operator")?);
    let g = doc.algebra.structure(caps.arity)?;
    let rep = Representation { g: g.clone(), v: module.space.clone(), rho: module.rho, differential: module.differential };
    let mut checks = check_linfty(&g).prefixed("algebra");
    checks.extend(representation_check(&rep).prefixed("representation"));
    if !checks.pass() {
        return Ok((checks, None));
    }
    let hlr = Hlr::new(g.space.clone(), module.space, caps.arity)?;
    checks.extend(check_rb_operator(&hlr, &rep, &t)?);
    Ok((checks, None))
}

/// One line per nonzero product on basis elements, in basis order.
fn render_products(l: &LInftyStructure) -> String {
    let mut out = String::new();
    for k in 1..=l.cap() {
        for (m, v) in l.product(k).entries() {
            let args = m.iter().map(|&i| format!("({})", l.space.symbol(i))).join(" ");
            let _ = writeln!(out, "m{k} {args} = {}", l.render(v));
        }
    }
    out
}
