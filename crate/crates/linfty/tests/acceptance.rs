//! Acceptance run: one line per criterion, exact arithmetic throughout.
//!
//! Exits non-zero when a criterion fails for any reason other than a failure that the
//! independent oracle confirms is forced by the mathematics.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::oracles::{adjoint_matrix, classical_coadjoint, classical_schouten, contraction, quadratic_grid, quadratic_poly, relative_rb_holds};
use common::DglaTables;
use linfty::bridge::{bridge_algebras, check_bridge_commutation, check_mc_transport, Bridge};
use linfty::derived::{check_vstructure, VAlgebra, derived_brackets_big, derived_brackets_small, vmc_check};
use linfty::examples::{adjoint, aff1, aff1_dgla, sl2, sl2_dgla};
use linfty::graded::GradedSpace;
use linfty::io::{parse, run, serialize, Command, Overrides, Verdict};
use linfty::lie::{DerLie, GradedLie};
use linfty::linfty::{check_linfty, FiniteDgla, LInftyStructure};
use linfty::multibracket::{all_keys, key_degree, DKey};
use linfty::poisson::{check_rmatrix, triangular_bialgebra, PoissonAlgebra};
use linfty::poly::Poly;
use linfty::rota_baxter::{check_rb_operator, Hlr, RbOperator};
use linfty::scalar::{frac, q, Q};
use linfty::vector::Vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    forced: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, forced: false, detail }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn jacobi_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut docs: Vec<(String, DglaTables)> = (0..300).map(|i| (format!("random {i}"), common::random_dgla(&mut rng))).collect();
    let bases = [("sl2", sl2_dgla()), ("aff1", aff1_dgla())];
    let mut perturbed = Vec::new();
    for (name, g) in &bases {
        let t = DglaTables::from_dgla(g);
        docs.push((name.to_string(), t.clone()));
        for (label, p) in t.perturbations() {
            let label = (0..g.space.dim()).rev().fold(label, |l, i| l.replace(&format!("x{i}"), g.space.symbol(i)));
            perturbed.push(docs.len());
            docs.push((format!("{name} {label}"), p));
        }
    }
    let (mut disagree, mut slowest, mut verdicts) = (Vec::new(), Duration::ZERO, Vec::new());
    for (name, t) in &docs {
        let start = Instant::now();
        let pass = match parse(&t.document(3)) {
            Ok(doc) => run(Command::CheckLinfty, &doc, Overrides::default()).verdict == Verdict::Pass,
            Err(e) => panic!("{name}: {e}"),
        };
        slowest = slowest.max(start.elapsed());
        if pass != t.brute_force() {
            disagree.push(name.clone());
        }
        verdicts.push(pass);
    }
    let bases_pass = bases.iter().all(|(name, _)| docs.iter().zip(&verdicts).any(|((n, _), v)| n == name && *v));
    let surviving: Vec<&str> = perturbed.iter().filter(|&&i| verdicts[i]).map(|&i| docs[i].0.as_str()).collect();
    let agree = disagree.is_empty();
    let timely = slowest < Duration::from_secs(1);
    let lie = verdicts.iter().filter(|v| **v).count();
    let mut out = Outcome::new(
        agree && bases_pass && surviving.is_empty() && timely,
        format!(
            "{} documents ({lie} dglas), oracle disagreements {}, sl2/aff1 pass {bases_pass}, perturbations failing {}/{}, slowest {}",
            docs.len(),
            disagree.len(),
            perturbed.len() - surviving.len(),
            perturbed.len(),
            secs(slowest)
        ),
    );
    if !surviving.is_empty() {
        out.detail += &format!("; still Lie per oracle: {}", surviving.join(", "));
        out.forced = agree && bases_pass && timely;
    }
    out
}

fn derived_brackets_are_linfty() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut ok, total, mut max_dim) = (0, 24, 0);
    for _ in 0..total {
        let (vs, _) = common::random_matrix_v(&mut rng);
        max_dim = max_dim.max(vs.alg.basis().len());
        let small = derived_brackets_small(&vs, 4).unwrap();
        let big = derived_brackets_big(&vs, None, 4).unwrap();
        if check_vstructure(&vs).pass() && check_linfty(&small.structure).pass() && check_linfty(&big.structure).pass() {
            ok += 1;
        }
    }
    let t = start.elapsed();
    Outcome::new(ok == total && max_dim <= 6 && t < Duration::from_secs(30), format!("{ok}/{total} V-structures (dim ≤ {max_dim}, cap 4) give L∞ small and big algebras, {}", secs(t)))
}

fn vmc_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut one_sided, mut counts) = (0, [0usize; 2]);
    let structures = 20;
    for _ in 0..structures {
        let (vs, _) = common::random_matrix_v(&mut rng);
        let big = derived_brackets_big(&vs, None, 4).unwrap();
        let basis = vs.alg.basis();
        let h0: Vec<usize> = basis.iter().copied().filter(|k| vs.alg.in_h(k) && vs.alg.degree(k) == 0).collect();
        let ker1: Vec<usize> = basis.iter().copied().filter(|k| !vs.alg.in_h(k) && vs.alg.degree(k) == 1).collect();
        let all1: Vec<usize> = basis.iter().copied().filter(|k| vs.alg.degree(k) == 1).collect();
        for i in 0..50 {
            let mut y = common::random_combination(&mut rng, &ker1, 0.4);
            if !vs.curvature(&y).is_zero() {
                y = Vector::zero();
            }
            let h = common::random_combination(&mut rng, &h0, 0.6);
            let mut x = vs.gauge(&y, &-&h).unwrap();
            if i % 2 == 1 {
                x += common::random_combination(&mut rng, &all1, 0.3);
            }
            let c = vmc_check(&vs, &big, &x, &h).unwrap();
            if !c.iter().last().unwrap().pass {
                one_sided += 1;
            }
            counts[usize::from(c.pass())] += 1;
        }
    }
    let t = start.elapsed();
    Outcome::new(
        one_sided == 0 && t < Duration::from_secs(10),
        format!("{} pairs over {structures} structures ({} VMC, {} not), one-sided {one_sided}, {}", counts[0] + counts[1], counts[1], counts[0], secs(t)),
    )
}

fn classical_rb_reduction() -> Outcome {
    let start = Instant::now();
    let g = aff1_dgla();
    let rep = adjoint(&g, 2);
    let hlr = Hlr::new(rep.g.space.clone(), rep.v.clone(), 2).unwrap();
    let grid: Vec<Q> = vec![q(-2), q(-1), frac(-1, 2), q(0), frac(1, 2), q(1), q(2)];
    let (mut engine, mut oracle) = (Vec::new(), Vec::new());
    for idx in 0..grid.len().pow(4) {
        let e: Vec<Q> = (0..4).map(|k| grid[idx / grid.len().pow(k) % grid.len()].clone()).collect();
        let t = vec![vec![e[0].clone(), e[1].clone()], vec![e[2].clone(), e[3].clone()]];
        let mut terms = Vector::zero();
        for (i, row) in t.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                terms.add_term((vec![j], i), c.clone());
            }
        }
        if check_rb_operator(&hlr, &rep, &RbOperator::new(terms)).unwrap().pass() {
            engine.push(idx);
        }
        if relative_rb_holds(&g, &|x| adjoint_matrix(&g, x), &t) {
            oracle.push(idx);
        }
    }
    let t = start.elapsed();
    Outcome::new(
        engine == oracle && t < Duration::from_secs(5),
        format!("{} operators on a 7-point grid, {} solutions by the engine, {} by exhaustive search, {}", grid.len().pow(4), engine.len(), oracle.len(), secs(t)),
    )
}

fn random_der<R: Rng>(rng: &mut R, degrees: &[i64], d: i64) -> Vector<DKey> {
    let mut v = Vector::zero();
    for k in all_keys(degrees, 2) {
        if key_degree(degrees, &k) == d && rng.gen_bool(0.3) {
            v.add_term(k, q(rng.gen_range(-2..=2)));
        }
    }
    v
}

fn double_is_lie_map() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut bad, mut short, per_n) = (Vec::new(), Vec::new(), 100);
    for n in 0..=3 {
        let (mut nonzero, mut tries) = (0, 0);
        while nonzero < per_n && tries < 50 * per_n {
            tries += 1;
            let dim = rng.gen_range(1..=3);
            let g = Arc::new(GradedSpace::new("g", (0..dim).map(|i| (format!("x{i}"), rng.gen_range(-1..=1)))).unwrap());
            let pa = PoissonAlgebra::new(g.clone(), n, 5).unwrap();
            let der = DerLie::new(g.shifted(1), 4);
            let (dx, dy) = (rng.gen_range(-1..=2), rng.gen_range(-1..=2));
            let x = random_der(&mut rng, der.degrees(), dx);
            let y = random_der(&mut rng, der.degrees(), dy);
            let xy = der.bracket(&x, &y);
            if xy.is_zero() {
                continue;
            }
            nonzero += 1;
            if pa.double(&xy) != pa.bracket(&pa.double(&x), &pa.double(&y)) {
                bad.push(n);
            }
        }
        if nonzero < per_n {
            short.push(n);
        }
    }
    let t = start.elapsed();
    Outcome::new(
        bad.is_empty() && short.is_empty() && t < Duration::from_secs(10),
        format!("{per_n} pairs with nonzero bracket for each n in 0..=3, failures {}, {}", bad.len(), secs(t)),
    )
}

type Verified = Vec<(&'static str, LInftyStructure, FiniteDgla, Vec<(usize, usize, i64)>)>;

fn algebras() -> [(&'static str, LInftyStructure, FiniteDgla); 2] {
    [("sl2", sl2(2), sl2_dgla()), ("aff1", aff1(2), aff1_dgla())]
}

fn cybe_reduction(verified: &mut Verified) -> Outcome {
    let start = Instant::now();
    let (mut total, mut mismatches) = (0, 0);
    for (name, m, g) in algebras() {
        let pa = PoissonAlgebra::new(m.space.clone(), 2, 4).unwrap();
        for r in quadratic_grid(g.space.dim(), &[-1, 0, 1, 2]) {
            let pass = check_rmatrix(&m, &quadratic_poly(pa.dim_g(), &r), 2, 4).unwrap().pass();
            if pass != classical_schouten(&g, &r, &r).is_zero() {
                mismatches += 1;
            }
            if pass {
                verified.push((name, m.clone(), g.clone(), r));
            }
            total += 1;
        }
    }
    let pa = PoissonAlgebra::new(sl2(2).space.clone(), 2, 4).unwrap();
    let h_wedge_e = check_rmatrix(&sl2(2), &quadratic_poly(pa.dim_g(), &[(0, 1, 1)]), 2, 4).unwrap().pass();
    let t = start.elapsed();
    Outcome::new(
        mismatches == 0 && h_wedge_e && t < Duration::from_secs(5),
        format!("{total} quadratic r on sl2 and aff1 at n = 2, {} solutions, mismatches {mismatches}, h∧e passes {h_wedge_e}, {}", verified.len(), secs(t)),
    )
}

fn bialgebra_certificates(verified: &Verified) -> Outcome {
    let mut instances: Vec<(LInftyStructure, Poly, i64)> = verified.iter().map(|(_, m, _, r)| (m.clone(), quadratic_poly(m.space.dim(), r), 2)).collect();
    for n in [0, 1, 3] {
        for (_, m, _) in algebras() {
            instances.push((m, Poly::zero(), n));
        }
    }
    let (mut ok, mut slowest) = (0, Duration::ZERO);
    for (m, r, n) in &instances {
        let start = Instant::now();
        if triangular_bialgebra(m, r, *n, 4).is_ok_and(|b| b.checks.pass()) {
            ok += 1;
        }
        slowest = slowest.max(start.elapsed());
    }
    Outcome::new(
        ok == instances.len() && slowest < Duration::from_secs(5),
        format!("{ok}/{} verified (m, r) give {{r(m),r(m)}} = 0 with all terms in S', slowest {}", instances.len(), secs(slowest)),
    )
}

fn bridge(verified: &Verified) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut at_n2 = Vec::new();
    for n in 1..=3 {
        for (name, m, _) in algebras() {
            let b = Bridge::new(m.space.clone(), n, 4).unwrap();
            let alg = bridge_algebras(&b).unwrap();
            let c = check_bridge_commutation(&b, &alg, &m, 4);
            if let Some(f) = c.first_failure() {
                failures.push(format!("{name} n={n}: {}", f.name));
            }
            if n == 2 {
                at_n2.push((name, b, alg));
            }
        }
    }
    for (name, m, g, r) in verified {
        let (_, b, alg) = at_n2.iter().find(|(n, _, _)| n == name).unwrap();
        let rp = quadratic_poly(b.pa.dim_g(), r);
        let label = format!("{name} {r:?}");
        let (t, cert) = match b.rmatrix_to_rb(m, &rp) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let dim = g.space.dim();
        let mut matrix = vec![vec![q(0); dim]; dim];
        for ((mono, o), c) in t.terms.iter() {
            matrix[*o][mono[0]] = c.clone();
        }
        let classical = relative_rb_holds(g, &|x| classical_coadjoint(g, x), &matrix);
        let transport = check_mc_transport(b, alg, m, &rp).map(|c| c.pass).unwrap_or(false);
        if !(cert.pass() && classical && t.terms == contraction(r) && transport) {
            failures.push(label);
        }
    }
    let t = start.elapsed();
    let mut detail = format!(
        "square commutes for sl2 and aff1 at n = 1..=3 up to arity 4; {} verified r give Rota-Baxter operators on the coadjoint pair with MC transport; failures {}, {}",
        verified.len(),
        failures.len(),
        secs(t)
    );
    if !failures.is_empty() {
        detail += &format!(": {}", failures.join("; "));
    }
    Outcome::new(failures.is_empty() && t < Duration::from_secs(30), detail)
}

fn corpus() -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "ldoc"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn determinism() -> Outcome {
    let commands = [
        Command::CheckLinfty,
        Command::CheckMorphism,
        Command::CheckRb,
        Command::CheckRmatrix,
        Command::DeriveSchouten,
        Command::MakeBialgebra,
        Command::RmatrixToRb,
        Command::CheckBridge,
    ];
    let docs = corpus();
    let (mut reports, mut unstable, mut broken) = (0, Vec::new(), Vec::new());
    for (name, text) in &docs {
        let doc = match parse(text) {
            Ok(d) => d,
            Err(e) => {
                broken.push(format!("{name}: {e}"));
                continue;
            }
        };
        let canon = serialize(&doc);
        if parse(&canon).as_ref() != Ok(&doc) || parse(&canon).map(|d| serialize(&d)).as_deref() != Ok(canon.as_str()) {
            broken.push(name.clone());
        }
        for cmd in commands {
            let a = run(cmd, &doc, Overrides::default());
            let b = run(cmd, &doc, Overrides::default());
            if a.to_json() != b.to_json() || a.to_text() != b.to_text() {
                unstable.push(format!("{name} {}", cmd.name()));
            }
            reports += 1;
        }
    }
    Outcome::new(
        unstable.is_empty() && broken.is_empty() && !docs.is_empty(),
        format!("{reports} reports over {} corpus documents, unstable {}, round-trip failures {}", docs.len(), unstable.len(), broken.len()),
    )
}

fn main() {
    let mut verified = Verified::new();
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut Verified) -> Outcome>)> = vec![
        ("dgla documents: engine agrees with brute force", Box::new(|_| jacobi_equivalence())),
        ("derived brackets of V-structures are L∞", Box::new(|_| derived_brackets_are_linfty())),
        ("VMC pairs match the big-algebra MC equation", Box::new(|_| vmc_equivalence())),
        ("arity-1 Rota-Baxter operators on aff1 match exhaustive search", Box::new(|_| classical_rb_reduction())),
        ("the shifted double preserves brackets", Box::new(|_| double_is_lie_map())),
        ("quadratic r-matrices match the classical Schouten bracket", Box::new(cybe_reduction)),
        ("triangular bialgebra certificates", Box::new(|v| bialgebra_certificates(v))),
        ("r-matrices to Rota-Baxter operators and the bridge square", Box::new(|v| bridge(v))),
        ("deterministic reports and document round trip", Box::new(|_| determinism())),
    ];
    let mut unexpected = 0;
    for (i, (title, f)) in criteria.into_iter().enumerate() {
        let o = f(&mut verified);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict}: {title}: {}", i + 1, o.detail);
        if !o.pass && !o.forced {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
