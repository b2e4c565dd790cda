//! Vector Farkas checks on sampled perturbation problems: the inequality
//! (α), operator certificates (β)/(γ) from a grid or built by separation,
//! and the epigraph representation `epi Φ(.,0)* = M` on probe sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone_order::{leq_cone, PolyhedralCone, Region};
use crate::error::{Error, Result};
use crate::linalg::{dot, sub};
use crate::lp::{Lp, LpStatus, Relation};
use crate::mappings::{epi_membership, is_positive_operator, LinOp};
use crate::perturbation::{check_condition, prune_general, Condition, PerturbationProblem, SamplingPolicy, Verdict};

/// Depth of the K-generator offsets used when materializing `Δ`.
pub const RAY_DEPTH: usize = 2;
const CONVEXITY_DRAWS: usize = 4096;
const CONVEXITY_SEED: u64 = 0x5eed;

#[derive(Debug, Clone)]
pub struct FarkasInstance {
    pub problem: PerturbationProblem,
    pub l: LinOp,
    pub y: Vec<f64>,
}

impl FarkasInstance {
    pub fn new(problem: PerturbationProblem, l: LinOp, y: Vec<f64>) -> Result<Self> {
        check_shapes(&problem, &l, &y)?;
        Ok(FarkasInstance { problem, l, y })
    }
}

fn check_shapes(p: &PerturbationProblem, l: &LinOp, y: &[f64]) -> Result<()> {
    let m = p.cone().dim();
    if l.rows() != m || l.cols() != p.x_dim() {
        return Err(Error::ShapeMismatch(format!("L is {}x{}, need {}x{}", l.rows(), l.cols(), m, p.x_dim())));
    }
    if y.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: y.len() });
    }
    Ok(())
}

/// Which operator class certifies: all of `L_Φ` (β) or the positive ones (γ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    M,
    MPlus,
}

/// `Φ(x,0_Z) - L(x) + y ∉ -int K` for every sampled `x`.
pub fn verify_alpha(inst: &FarkasInstance) -> bool {
    alpha(&inst.problem, &inst.l, &inst.y)
}

fn alpha(p: &PerturbationProblem, l: &LinOp, y: &[f64]) -> bool {
    let k = p.cone();
    let x_dim = p.x_dim();
    p.zero_slice().all(|i| {
        let phi = p.phi().finite_value(i).unwrap();
        let w: Vec<f64> = l.apply(&p.phi().sample(i)[..x_dim]).iter().zip(phi).zip(y).map(|((a, b), c)| a - b - c).collect();
        !k.contains_unchecked(&w, Region::Interior)
    })
}

/// `Φ(x,z) - L(x) - T(z) + y ∉ -int K` for every sampled `(x,z)`.
pub fn certifies(p: &PerturbationProblem, l: &LinOp, t: &LinOp, y: &[f64]) -> Result<bool> {
    epi_membership(p.phi(), &l.hstack(t)?, y)
}

/// First operator of `t_grid` certifying `(L, y)`; in `MPlus` mode only
/// positive operators are tried.
pub fn search_certificate(inst: &FarkasInstance, t_grid: &[LinOp], mode: Mode) -> Result<Option<LinOp>> {
    search(&inst.problem, &inst.l, &inst.y, t_grid, mode)
}

fn search(p: &PerturbationProblem, l: &LinOp, y: &[f64], t_grid: &[LinOp], mode: Mode) -> Result<Option<LinOp>> {
    for t in t_grid {
        if mode == Mode::MPlus && !is_positive_operator(t, p.perturbation_cone(), p.cone())? {
            continue;
        }
        if certifies(p, l, t, y)? {
            return Ok(Some(t.clone()));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct LpDiagnostics {
    pub delta_points: usize,
    pub constraints: usize,
    pub k_bar_attempts: usize,
    pub status: LpStatus,
    pub z_star_l1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub t_bar: LinOp,
    pub z_star: Vec<f64>,
    pub y_star: Vec<f64>,
    pub k0: Vec<f64>,
    /// (β) holds for `t_bar` on the full sample grid.
    pub verified: bool,
    /// The sampled map failed a convexity test, so the construction has no
    /// guarantee behind it.
    pub heuristic: bool,
    /// (C0) held on the grid and its rays were added to the separation.
    pub c0: bool,
    pub positive: bool,
    pub lp: LpDiagnostics,
}

/// `Φ((p+q)/2) ≦_K (Φ(p)+Φ(q))/2` on seeded random pairs of domain samples
/// whose midpoint is a lattice point.
pub fn sampled_convexity(p: &PerturbationProblem) -> bool {
    let phi = p.phi();
    let lat = phi.lattice().expect("perturbation maps live on a lattice");
    let dom: Vec<usize> = phi.dom().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CONVEXITY_SEED);
    for _ in 0..CONVEXITY_DRAWS {
        let (a, b) = (dom[rng.gen_range(0..dom.len())], dom[rng.gen_range(0..dom.len())]);
        let (ma, mb) = (lat.multi_index(a), lat.multi_index(b));
        if ma.iter().zip(&mb).any(|(u, v)| (u + v) % 2 == 1) {
            continue;
        }
        let mid: Vec<usize> = ma.iter().zip(&mb).map(|(u, v)| (u + v) / 2).collect();
        let Some(vm) = phi.finite_value(lat.flat_index(&mid)) else {
            return false;
        };
        let avg: Vec<f64> = phi.finite_value(a).unwrap().iter().zip(phi.finite_value(b).unwrap()).map(|(u, v)| 0.5 * (u + v)).collect();
        if !leq_cone(vm, &avg, p.cone()).unwrap_or(false) {
            return false;
        }
    }
    true
}

/// Candidates for the normalizing interior direction: the sum of the
/// generators, then each generator pulled halfway towards that sum.
fn k_bar_candidates(k: &PolyhedralCone) -> Vec<Vec<f64>> {
    let c = k.interior_point();
    let mut out = vec![c.clone()];
    for g in k.generators() {
        out.push(g.iter().zip(&c).map(|(a, b)| a + 0.5 * b).collect());
    }
    out
}

/// The sampled `Δ_L = {(L(x) - Φ(x,z) - j k, z)}` over `j ∈ {0..RAY_DEPTH}`
/// and K-generators `k`, reduced per `z` to points no other point strictly
/// dominates. Dropped points give implied constraints once `-y* ∈ K+`.
fn sampled_delta(p: &PerturbationProblem, l: &LinOp) -> (Vec<(Vec<f64>, Vec<f64>)>, usize) {
    let k = p.cone();
    let x_dim = p.x_dim();
    let nz = p.z_lattice().len();
    let mut by_z: Vec<Vec<(Vec<f64>, u32)>> = vec![Vec::new(); nz];
    let mut total = 0;
    for i in p.phi().dom() {
        let s = p.phi().sample(i);
        let base = sub(&l.apply(&s[..x_dim]), p.phi().finite_value(i).unwrap());
        by_z[i % nz].push((base.clone(), i as u32));
        total += 1;
        for g in k.generators() {
            for j in 1..=RAY_DEPTH {
                by_z[i % nz].push((base.iter().zip(g).map(|(a, b)| a - j as f64 * b).collect(), i as u32));
                total += 1;
            }
        }
    }
    let mut out = Vec::new();
    for pool in by_z.into_iter().filter(|v| !v.is_empty()) {
        for (y, i) in prune_general(pool, k, true) {
            out.push((y, p.phi().sample(i as usize)[x_dim..].to_vec()));
        }
    }
    (out, total)
}

/// Separate `(y, 0_Z)` from the sampled `Δ_L` and turn the functional into
/// the rank-one operator `T(z) = -<z*, z> k0`.
///
/// The LP has `y* = -Σ λ_i n_i` over the normals of K (so `-y* ∈ K+`),
/// `z* = u - v` and minimizes `|z*|_1` subject to
/// `<y*, d - y> + <z*, z> >= 0` on `Δ` and `<y*, k̄> = -1`. When (C0) holds
/// on the grid, the rays `(0, -s)` of `Δ` add `<z*, s> <= 0` for the
/// generators `s` of S.
pub fn construct_certificate(inst: &FarkasInstance) -> Result<Certificate> {
    construct(&inst.problem, &inst.l, &inst.y)
}

fn construct(p: &PerturbationProblem, l: &LinOp, y: &[f64]) -> Result<Certificate> {
    let k = p.cone();
    let normals = k.normals();
    let (nl, zd) = (normals.len(), p.z_dim());
    let c0 = check_condition(p, Condition::C0, SamplingPolicy::default())? == Verdict::Holds;
    let (delta, delta_points) = sampled_delta(p, l);
    let s_gens = p.perturbation_cone().generators();
    let nv = nl + 2 * zd;
    let mut base = Lp::new(nv);
    let mut obj = vec![0.0; nv];
    obj[nl..].iter_mut().for_each(|c| *c = 1.0);
    base = base.minimize(obj);
    for (d, z) in &delta {
        let dy = sub(d, y);
        let mut row: Vec<f64> = normals.iter().map(|n| -dot(n, &dy)).collect();
        row.extend(z.iter().copied());
        row.extend(z.iter().map(|v| -v));
        base.add(row, Relation::Ge, 0.0);
    }
    if c0 {
        for s in &s_gens {
            let mut row = vec![0.0; nl];
            row.extend(s.iter().copied());
            row.extend(s.iter().map(|v| -v));
            base.add(row, Relation::Le, 0.0);
        }
    }
    let constraints = base.constraints.len() + 1;
    let mut attempts = 0;
    for k_bar in k_bar_candidates(k) {
        attempts += 1;
        let mut lp = base.clone();
        let mut row: Vec<f64> = normals.iter().map(|n| dot(n, &k_bar)).collect();
        row.extend(vec![0.0; 2 * zd]);
        lp.add(row, Relation::Eq, 1.0);
        let res = lp.solve()?;
        if res.status != LpStatus::Optimal {
            continue;
        }
        let x = &res.primal_point;
        let mut y_star = vec![0.0; k.dim()];
        for (lam, n) in x[..nl].iter().zip(normals) {
            for (a, b) in y_star.iter_mut().zip(n) {
                *a -= lam * b;
            }
        }
        let z_star: Vec<f64> = (0..zd).map(|j| x[nl + j] - x[nl + zd + j]).collect();
        let t_bar = LinOp::outer(&k_bar, &z_star).neg();
        let verified = certifies(p, l, &t_bar, y)?;
        let positive = is_positive_operator(&t_bar, p.perturbation_cone(), k)?;
        return Ok(Certificate {
            t_bar,
            z_star,
            y_star,
            k0: k_bar,
            verified,
            heuristic: !sampled_convexity(p),
            c0,
            positive,
            lp: LpDiagnostics { delta_points, constraints, k_bar_attempts: attempts, status: res.status, z_star_l1: res.value },
        });
    }
    Err(Error::NotSeparable)
}

/// How a probe was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Witness {
    Grid,
    Constructed,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeVerdict {
    pub l: LinOp,
    pub y: Vec<f64>,
    pub alpha: bool,
    /// (β) in mode `M`, (γ) in mode `MPlus`.
    pub beta: bool,
    pub witness: Witness,
    pub certificate: Option<Certificate>,
    pub note: Option<String>,
}

/// Settle one probe: (α) exactly, then the operator grid, then a
/// constructed certificate when (α) holds and the grid found nothing.
pub fn evaluate_probe(p: &PerturbationProblem, l: &LinOp, y: &[f64], t_grid: &[LinOp], mode: Mode) -> Result<ProbeVerdict> {
    check_shapes(p, l, y)?;
    let alpha = alpha(p, l, y);
    let mut v = ProbeVerdict { l: l.clone(), y: y.to_vec(), alpha, beta: false, witness: Witness::None, certificate: None, note: None };
    if search(p, l, y, t_grid, mode)?.is_some() {
        v.beta = true;
        v.witness = Witness::Grid;
        return Ok(v);
    }
    if !alpha {
        return Ok(v);
    }
    match construct(p, l, y) {
        Ok(c) => {
            if c.verified && (mode == Mode::M || c.positive) {
                v.beta = true;
                v.witness = Witness::Constructed;
            }
            v.certificate = Some(c);
        }
        Err(Error::NotSeparable) => v.note = Some(Error::NotSeparable.to_string()),
        Err(e) => return Err(e),
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Failure {
    /// A certificate exists but (α) fails; impossible for any instance.
    SupersetViolated,
    /// (α) holds, no grid operator certifies and the constructed one does not
    /// either. Expected for nonconvex or irregular instances.
    GridLimitation,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub probe: usize,
    pub kind: Failure,
}

#[derive(Debug, Clone, Serialize)]
pub struct MReport {
    pub mode: Mode,
    pub holds_on_probes: bool,
    pub superset_ok: bool,
    pub probes: Vec<ProbeVerdict>,
    pub counterexamples: Vec<Counterexample>,
}

/// `epi Φ(.,0)* = M` (or `M+`) on the probes `l_grid × y_probes`, using the
/// problem's operators as the grid.
pub fn verify_m_representation(p: &PerturbationProblem, l_grid: &[LinOp], y_probes: &[Vec<f64>], mode: Mode) -> Result<MReport> {
    let mut probes = Vec::new();
    for l in l_grid {
        for y in y_probes {
            probes.push(evaluate_probe(p, l, y, p.operators(), mode)?);
        }
    }
    Ok(m_report(probes, mode))
}

fn m_report(probes: Vec<ProbeVerdict>, mode: Mode) -> MReport {
    let counterexamples: Vec<Counterexample> = probes
        .iter()
        .enumerate()
        .filter_map(|(i, v)| match (v.alpha, v.beta) {
            (false, true) => Some(Counterexample { probe: i, kind: Failure::SupersetViolated }),
            (true, false) => Some(Counterexample { probe: i, kind: Failure::GridLimitation }),
            _ => None,
        })
        .collect();
    MReport {
        mode,
        holds_on_probes: counterexamples.is_empty(),
        superset_ok: counterexamples.iter().all(|c| c.kind != Failure::SupersetViolated),
        probes,
        counterexamples,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FarkasReport {
    pub mode: Mode,
    pub probes: usize,
    pub agree: usize,
    pub equivalence_rate: f64,
    pub alpha_without_beta: usize,
    pub beta_without_alpha: usize,
    pub via_grid: usize,
    pub via_construction: usize,
    pub verdicts: Vec<ProbeVerdict>,
}

/// Tabulate (α) against (β) or (γ) over `l_grid × y_grid`.
pub fn check_farkas_equivalence(p: &PerturbationProblem, l_grid: &[LinOp], y_grid: &[Vec<f64>], mode: Mode) -> Result<FarkasReport> {
    let r = verify_m_representation(p, l_grid, y_grid, mode)?;
    Ok(farkas_report(r.probes, mode))
}

fn farkas_report(verdicts: Vec<ProbeVerdict>, mode: Mode) -> FarkasReport {
    let n = verdicts.len();
    let count = |f: &dyn Fn(&ProbeVerdict) -> bool| verdicts.iter().filter(|v| f(v)).count();
    let agree = count(&|v| v.alpha == v.beta);
    FarkasReport {
        mode,
        probes: n,
        agree,
        equivalence_rate: if n == 0 { 1.0 } else { agree as f64 / n as f64 },
        alpha_without_beta: count(&|v| v.alpha && !v.beta),
        beta_without_alpha: count(&|v| v.beta && !v.alpha),
        via_grid: count(&|v| v.witness == Witness::Grid),
        via_construction: count(&|v| v.witness == Witness::Constructed),
        verdicts,
    }
}

/// Exact soundness row for one probe: (α), whether some grid operator
/// certifies (β) and whether some positive one does (γ).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Soundness {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl Soundness {
    /// `(γ) ⇒ (β) ⇒ (α)`.
    pub fn consistent(&self) -> bool {
        (!self.gamma || self.beta) && (!self.beta || self.alpha)
    }
}

pub fn soundness(p: &PerturbationProblem, l: &LinOp, y: &[f64]) -> Result<Soundness> {
    check_shapes(p, l, y)?;
    Ok(Soundness {
        alpha: alpha(p, l, y),
        beta: search(p, l, y, p.operators(), Mode::M)?.is_some(),
        gamma: search(p, l, y, p.operators(), Mode::MPlus)?.is_some(),
    })
}

#[cfg(test)]
mod tests;
