//! Hamiltonian vector fields of the Poisson double: the coadjoint representation and the
//! passage from r∞-matrices to homotopy relative Rota-Baxter operators.

use std::sync::Arc;

use crate::check::{Check, Checks};
use crate::derived::{Derived, Part};
use crate::exec::{map_collect, Exec};
use crate::graded::{GradedError, GradedSpace, Mono};
use crate::linfty::{check_morphism_upto, LInftyError, LInftyMorphism, LInftyStructure, Representation};
use crate::multibracket::DKey;
use crate::poisson::{build_lhm, check_rmatrix, PoissonAlgebra, PoissonError};
use crate::poly::Poly;
use crate::rota_baxter::{build_lhrb, check_rb_operator, rb_triple_mc_check, Hlr, RbError, RbOperator};
use crate::vector::Vector;
use crate::vector_field::{from_field, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BridgeError {
    #[error("image of the double escapes the semidirect block at {0}")]
    Escapes(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Rb(#[from] RbError),
    #[error(transparent)]
    LInfty(#[from] LInftyError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// `g*[n-2]` with basis `e_i*` of degree `2 - n - |e_i|`.
pub fn dual_module(g: &GradedSpace, n: i64) -> Result<Arc<GradedSpace>, GradedError> {
    let basis = (0..g.dim()).map(|i| (format!("{}*", g.symbol(i)), 2 - n - g.degree(i)));
    Ok(Arc::new(GradedSpace::new(format!("{}*[{}]", g.name(), n - 2), basis)?))
}

/// The Poisson algebra together with the semidirect algebra on `(g, g*[n-2])`.
/// Weight `w` corresponds to arity `w - 1`.
#[derive(Debug, Clone)]
pub struct Bridge {
    pub pa: PoissonAlgebra,
    pub hlr: Hlr,
}

impl Bridge {
    pub fn new(g: Arc<GradedSpace>, n: i64, w: usize) -> Result<Self, BridgeError> {
        let pa = PoissonAlgebra::new(g.clone(), n, w)?;
        let hlr = Hlr::new(g.clone(), dual_module(&g, n)?, w - 1)?;
        Ok(Self { pa, hlr })
    }

    /// `H(p) = {p, ·}` as a multibracket family on `g[1] ⊕ g*[n-1]`; the coordinates
    /// of that space are the Poisson generators.
    pub fn hamiltonian(&self, p: &Poly) -> Vector<DKey> {
        let gens = 2 * self.pa.dim_g();
        let mut field = VectorField::zero();
        for y in 0..gens {
            let c = self.pa.bracket_truncated(p, &Poly::basis(vec![y]), self.pa.w - 1);
            for (m, x) in c.iter() {
                field.add_term((m.clone(), y), x.clone());
            }
        }
        from_field(self.hlr.u.degrees(), &field)
    }

    /// Split a family linear in `g*` inputs into its `g` part and its action part.
    fn split(&self, x: &Vector<DKey>) -> Result<(Vector<DKey>, Vector<DKey>, Vector<usize>), BridgeError> {
        let ng = self.hlr.ng();
        let nv = self.hlr.v.dim();
        let (mut der, mut rho, mut diff) = (Vector::zero(), Vector::zero(), Vector::zero());
        for ((m, o), c) in x.iter() {
            let gin: Mono = m.iter().copied().filter(|&i| i < ng).collect();
            let vin: Vec<usize> = m.iter().filter(|&&i| i >= ng).map(|i| i - ng).collect();
            match (vin.as_slice(), *o < ng) {
                ([], true) => der.add_term((gin, *o), c.clone()),
                ([v], false) if gin.is_empty() => diff.add_term((o - ng) * nv + v, c.clone()),
                ([v], false) => rho.add_term((gin, (o - ng) * nv + v), c.clone()),
                _ => return Err(BridgeError::Escapes(self.hlr.u.mono_label(m))),
            }
        }
        Ok((der, rho, diff))
    }

    /// `H(D_n(m))` read as `(m, ad*)`.
    pub fn coadjoint(&self, m: &LInftyStructure) -> Result<Representation, BridgeError> {
        let h = self.hamiltonian(&self.pa.double(&m.m.terms));
        let (der, rho, differential) = self.split(&h)?;
        if der != m.m.terms {
            return Err(BridgeError::Escapes("g part differs from m".into()));
        }
        Ok(Representation { g: m.clone(), v: self.hlr.v.clone(), rho, differential })
    }

    /// `T = H(r)` for an r∞-matrix `r`.
    pub fn rmatrix_to_rb(&self, m: &LInftyStructure, r: &Poly) -> Result<(RbOperator, Checks), BridgeError> {
        let pre = check_rmatrix(m, r, self.pa.n, self.pa.w)?;
        if let Some(c) = pre.first_failure() {
            return Err(BridgeError::Precondition(c.name.clone()));
        }
        let ng = self.hlr.ng();
        let t = self.hamiltonian(r);
        let mut terms = Vector::zero();
        for ((mono, o), c) in t.iter() {
            if *o >= ng || mono.iter().any(|&i| i < ng) {
                return Err(BridgeError::Escapes(self.hlr.u.mono_label(mono)));
            }
            terms.add_term((mono.iter().map(|i| i - ng).collect(), *o), c.clone());
        }
        let op = RbOperator::new(terms);
        let rep = self.coadjoint(m)?;
        let cert = check_rb_operator(&self.hlr, &rep, &op)?;
        Ok((op, cert))
    }
}

/// The two big algebras and the strict map between them.
pub struct BridgeAlgebras {
    pub lhm: Derived<Mono>,
    pub lhrb: Derived<DKey>,
    pub map: LInftyMorphism,
}

/// `H` on `h`-parts and on `Der̄`-parts, as a strict map `L_LHM -> L_HRB`.
pub fn bridge_algebras(b: &Bridge) -> Result<BridgeAlgebras, BridgeError> {
    let lhm = build_lhm(b.pa.g.clone(), b.pa.n, b.pa.w)?;
    let lhrb = build_lhrb(&b.hlr)?;
    let mut f = Vector::zero();
    for (i, k) in lhm.keys.iter().enumerate() {
        let (mono, wrap): (&Mono, fn(DKey) -> Part<DKey>) = match k {
            Part::L(m) => (m, Part::L),
            Part::H(m) => (m, Part::H),
        };
        for (key, c) in b.hamiltonian(&Poly::basis(mono.clone())).iter() {
            let j = lhrb.index_of(&wrap(key.clone())).ok_or_else(|| BridgeError::Escapes(b.hlr.u.mono_label(&key.0)))?;
            f.add_term((vec![i], j), c.clone());
        }
    }
    let map = LInftyMorphism::new(lhm.structure.clone(), lhrb.structure.clone(), f)?;
    Ok(BridgeAlgebras { lhm, lhrb, map })
}

/// Commutation of the bridge diagram up to arity `max_arity`, plus MC transport of `(m, r)`.
pub fn check_bridge_diagram(b: &Bridge, alg: &BridgeAlgebras, m: &LInftyStructure, r: &Poly, max_arity: usize) -> Result<Checks, BridgeError> {
    let mut out = check_bridge_commutation(b, alg, m, max_arity);
    out.push(check_mc_transport(b, alg, m, r)?);
    Ok(out)
}

/// The parts of the diagram that do not depend on `r`.
pub fn check_bridge_commutation(b: &Bridge, alg: &BridgeAlgebras, m: &LInftyStructure, max_arity: usize) -> Checks {
    let mut out = Checks::new();
    let exec = Exec::default();
    let hs: Vec<Mono> = alg.lhm.keys.iter().filter_map(|k| if let Part::H(m) = k { Some(m.clone()) } else { None }).collect();
    let ng = b.hlr.ng();
    let bad_h = map_collect(exec, &hs, |t| {
        let h = b.hamiltonian(&Poly::basis(t.clone()));
        let escaped = h.keys().any(|(mono, o)| *o >= ng || mono.is_empty() || mono.iter().any(|&i| i < ng));
        escaped.then(|| (b.pa.label(t), "outside h".to_string()))
    });
    out.push(Check::from_residuals("H maps h into the operator block", bad_h.into_iter().flatten()));

    let der_basis = crate::multibracket::all_keys(m.degrees(), b.hlr.cap);
    let bad_d = map_collect(exec, &der_basis, |k| {
        let x = Vector::basis(k.clone());
        let h = b.hamiltonian(&b.pa.double(&x));
        match b.split(&h) {
            Err(e) => Some((crate::lie::dkey_label(&m.space, k), e.to_string())),
            Ok((der, _, _)) => (der != x).then(|| (crate::lie::dkey_label(&m.space, k), "g part differs".to_string())),
        }
    });
    out.push(Check::from_residuals("H∘D_n lands in the semidirect block over the identity", bad_d.into_iter().flatten()));

    out.extend(check_morphism_upto(&alg.map, max_arity, exec).prefixed("strict map"));
    out
}

/// `(D_n m, r)` is MC on the bialgebra side and its image is MC on the Rota-Baxter side.
pub fn check_mc_transport(b: &Bridge, alg: &BridgeAlgebras, m: &LInftyStructure, r: &Poly) -> Result<Check, BridgeError> {
    let ng = b.hlr.ng();
    let rep = b.coadjoint(m)?;
    let t = b.hamiltonian(r);
    let op = RbOperator::new(t.map_keys(|(mono, o)| (mono.iter().map(|i| i - ng).collect(), *o)));
    let dm = b.pa.double(&m.m.terms);
    let src = crate::linfty::mc_residual(&alg.lhm.structure, &alg.lhm.coords(&dm, r))?;
    if !src.is_zero() {
        return Ok(Check::flag("MC transport", false, "source", "(D_n m, r) is not MC"));
    }
    let image = rb_triple_mc_check(&b.hlr, &alg.lhrb, &rep, &op)?;
    Ok(Check::flag("MC transport", image.pass(), "image", format!("{:?}", image.first_failure().map(|c| c.name.clone()))))
}
