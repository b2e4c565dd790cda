//! Perturbation mappings `Φ: X × Z -> Y ∪ {+inf}` tabulated on product
//! lattices: the primal `WInf{Φ(x,0) - L(x)}`, the dual and loose dual over a
//! finite operator grid, weak/strong duality reports and the grid versions of
//! the regularity conditions.

mod ccvp;
mod merge;

use std::str::FromStr;

use serde::Serialize;

pub use ccvp::*;

use crate::cone_order::{leq_cone, ExtendedPoint, PolyhedralCone, Region};
use crate::error::{Error, Result};
use crate::linalg::{add, dot, rank, sub};
use crate::mappings::{conjugate, is_positive_operator, Lattice, LinOp, OrderingCone, SampledMap};
use crate::weak_sets::{precedes, winf, FrontKind, FrontSet, SetRef};
pub(crate) use merge::prune_general;
use merge::{covers_from_below, merge_lower, prune_pareto, sort_run, Dominators, Nearest, Pt};

#[derive(Debug, Clone)]
pub struct PerturbationProblem {
    phi: SampledMap,
    x_dim: usize,
    z_dim: usize,
    s: OrderingCone,
    operators: Vec<LinOp>,
    nz: usize,
    zero_z: usize,
}

impl PerturbationProblem {
    /// `phi` must be tabulated on a lattice whose first `x_dim` axes carry `x`
    /// and whose remaining axes carry `z`; `0_Z` must be a lattice point and
    /// `Φ(., 0_Z)` must be finite somewhere.
    pub fn new(phi: SampledMap, x_dim: usize, s: OrderingCone, operators: Vec<LinOp>) -> Result<Self> {
        let lat = phi.lattice().ok_or_else(|| Error::ShapeMismatch("perturbation map needs a lattice".into()))?;
        if x_dim > lat.dim() {
            return Err(Error::DimensionMismatch { expected: lat.dim(), got: x_dim });
        }
        let z_dim = lat.dim() - x_dim;
        if s.dim() != z_dim {
            return Err(Error::DimensionMismatch { expected: z_dim, got: s.dim() });
        }
        let z_axes = &lat.axes[x_dim..];
        let nz: usize = z_axes.iter().map(|a| a.len()).product();
        let mut zero_z = 0;
        for a in z_axes {
            let i = a.iter().position(|v| v.abs() <= 1e-12).ok_or_else(|| Error::Infeasible("0_Z is not a sample".into()))?;
            zero_z = zero_z * a.len() + i;
        }
        let p = PerturbationProblem { phi, x_dim, z_dim, s, operators: Vec::new(), nz, zero_z };
        if p.zero_slice().next().is_none() {
            return Err(Error::Infeasible("Φ(., 0_Z) is +inf on every sample".into()));
        }
        p.with_operators(operators)
    }

    pub fn with_operators(mut self, operators: Vec<LinOp>) -> Result<Self> {
        let m = self.phi.out_dim();
        for t in &operators {
            if t.rows() != m || t.cols() != self.z_dim {
                return Err(Error::ShapeMismatch(format!("operator is {}x{}, need {}x{}", t.rows(), t.cols(), m, self.z_dim)));
            }
        }
        self.operators = operators;
        Ok(self)
    }

    pub fn phi(&self) -> &SampledMap {
        &self.phi
    }

    pub fn cone(&self) -> &PolyhedralCone {
        self.phi.cone()
    }

    pub fn perturbation_cone(&self) -> &OrderingCone {
        &self.s
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn z_dim(&self) -> usize {
        self.z_dim
    }

    pub fn operators(&self) -> &[LinOp] {
        &self.operators
    }

    fn lattice(&self) -> &Lattice {
        self.phi.lattice().expect("checked in new")
    }

    pub fn x_lattice(&self) -> Lattice {
        Lattice { axes: self.lattice().axes[..self.x_dim].to_vec() }
    }

    pub fn z_lattice(&self) -> Lattice {
        Lattice { axes: self.lattice().axes[self.x_dim..].to_vec() }
    }

    pub fn grid_id(&self) -> String {
        self.lattice().id()
    }

    fn nx(&self) -> usize {
        self.phi.len() / self.nz
    }

    fn x_of(&self, i: usize) -> &[f64] {
        &self.phi.sample(i)[..self.x_dim]
    }

    fn z_of(&self, i: usize) -> &[f64] {
        &self.phi.sample(i)[self.x_dim..]
    }

    /// Sample indices `(x, 0_Z)` in the domain.
    pub fn zero_slice(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nx()).map(move |ix| ix * self.nz + self.zero_z).filter(move |&i| self.phi.is_finite_at(i))
    }

    fn check_l(&self, l: &LinOp) -> Result<()> {
        if l.rows() != self.phi.out_dim() || l.cols() != self.x_dim {
            return Err(Error::ShapeMismatch(format!("L is {}x{}, need {}x{}", l.rows(), l.cols(), self.phi.out_dim(), self.x_dim)));
        }
        Ok(())
    }

    fn check_t(&self, t: &LinOp) -> Result<()> {
        if t.rows() != self.phi.out_dim() || t.cols() != self.z_dim {
            return Err(Error::ShapeMismatch(format!("T is {}x{}, need {}x{}", t.rows(), t.cols(), self.phi.out_dim(), self.z_dim)));
        }
        Ok(())
    }
}

/// `WInf{Φ(x, 0_Z) - L(x)}`.
pub fn primal_value(p: &PerturbationProblem, l: &LinOp) -> Result<FrontSet> {
    p.check_l(l)?;
    let pts: Vec<Vec<f64>> = p.zero_slice().map(|i| sub(p.phi.finite_value(i).unwrap(), &l.apply(p.x_of(i)))).collect();
    winf(&pts, p.cone())
}

/// `Φ*(L, T)` straight from the table.
pub fn perturbation_conjugate(p: &PerturbationProblem, l: &LinOp, t: &LinOp) -> Result<FrontSet> {
    p.check_l(l)?;
    p.check_t(t)?;
    conjugate(&p.phi, &l.hstack(t)?)
}

/// Negated-conjugate generators for one operator, tagged with its index.
pub(crate) enum Gens {
    Planar(Vec<Pt>),
    General(Vec<(Vec<f64>, u32)>),
}

impl Gens {
    fn len(&self) -> usize {
        match self {
            Gens::Planar(v) => v.len(),
            Gens::General(v) => v.len(),
        }
    }

    fn points(&self) -> Vec<Vec<f64>> {
        match self {
            Gens::Planar(v) => v.iter().map(|p| p.y.to_vec()).collect(),
            Gens::General(v) => v.iter().map(|(y, _)| y.clone()).collect(),
        }
    }
}

/// Per-z-slice fronts of `{Φ(x,z) - L(x)}` for a fixed `L`, from which
/// `-Φ*(L,T) = WInf ∪_z (slice_z - T z)` is assembled for many `T`.
struct Slices {
    z: Vec<Vec<f64>>,
    fronts: Vec<Vec<Vec<f64>>>,
    planar: Option<Vec<Vec<Pt>>>,
}

const REF_STRIDE: usize = 64;

impl Slices {
    fn new(p: &PerturbationProblem, l: &LinOp) -> Result<Self> {
        let k = p.cone();
        let mut z = Vec::with_capacity(p.nz);
        let mut fronts = Vec::with_capacity(p.nz);
        for iz in 0..p.nz {
            z.push(p.z_of(iz).to_vec());
            let pts: Vec<Vec<f64>> = (0..p.nx())
                .map(|ix| ix * p.nz + iz)
                .filter(|&i| p.phi.is_finite_at(i))
                .map(|i| sub(p.phi.finite_value(i).unwrap(), &l.apply(p.x_of(i))))
                .collect();
            fronts.push(if pts.is_empty() { Vec::new() } else { winf(&pts, k)?.generators().to_vec() });
        }
        let planar = planar_cone(k).then(|| {
            fronts
                .iter()
                .map(|f| {
                    let mut v: Vec<Pt> = f.iter().map(|y| Pt::new(y, k, 0)).collect();
                    sort_run(&mut v);
                    prune_pareto(&v)
                })
                .collect()
        });
        Ok(Slices { z, fronts, planar })
    }

    fn neg_conjugate(&self, t: &LinOp, k: &PolyhedralCone, src: u32) -> Gens {
        let shifts: Vec<Vec<f64>> = self.z.iter().map(|z| t.apply(z).iter().map(|v| -v).collect()).collect();
        match &self.planar {
            Some(planar) => {
                let n = k.normals();
                let moves: Vec<([f64; 2], [f64; 2])> =
                    shifts.iter().map(|s| ([dot(&n[0], s), dot(&n[1], s)], [s[0], s[1]])).collect();
                // a sparse subset of the pool prunes most points before merging
                let mut refs = Vec::new();
                for (f, (ts, s)) in planar.iter().zip(&moves) {
                    refs.extend(f.iter().step_by(REF_STRIDE).map(|q| q.shifted(*ts, *s, src)));
                    if let Some(q) = f.last() {
                        refs.push(q.shifted(*ts, *s, src));
                    }
                }
                let doms = Dominators::new(refs);
                let mut runs: Vec<Vec<Pt>> = Vec::new();
                for (f, (ts, s)) in planar.iter().zip(&moves) {
                    let mut run = Vec::new();
                    doms.filter_shifted(f, *ts, *s, src, &mut run);
                    if !run.is_empty() {
                        runs.push(run);
                    }
                }
                while runs.len() > 1 {
                    let mut next = Vec::with_capacity(runs.len().div_ceil(2));
                    let mut it = runs.into_iter();
                    while let Some(a) = it.next() {
                        next.push(match it.next() {
                            Some(b) => merge_lower(&a, &b),
                            None => a,
                        });
                    }
                    runs = next;
                }
                Gens::Planar(runs.pop().unwrap_or_default())
            }
            None => {
                let pool: Vec<(Vec<f64>, u32)> = self
                    .fronts
                    .iter()
                    .zip(&shifts)
                    .flat_map(|(f, s)| f.iter().map(move |y| (add(y, s), src)))
                    .collect();
                Gens::General(prune_general(pool, k, false))
            }
        }
    }
}

fn planar_cone(k: &PolyhedralCone) -> bool {
    k.dim() == 2 && k.normals().len() == 2
}

/// What happened to one operator of the grid.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorEval {
    pub operator: LinOp,
    /// `Φ*(L,T) ≠ {+inf}` on the lattice.
    pub in_domain: bool,
    /// `T(S) ⊂ K`.
    pub positive: bool,
    /// `-Φ*(L,T) ≼_K` primal front (vacuous outside the domain).
    pub weak_duality: bool,
    pub generators: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub grid_id: String,
    pub tolerance: f64,
    pub primal_front: FrontSet,
    pub dual_front: FrontSet,
    pub loose_dual_front: FrontSet,
    pub weak_duality_ok: bool,
    /// `loose ≼ dual ≼ primal`.
    pub chain_ok: bool,
    pub strong_duality_gap: f64,
    pub strong_duality: bool,
    pub attaining_operators: Vec<LinOp>,
    pub operators: Vec<OperatorEval>,
}

/// Running weak supremum of tagged points.
pub(crate) enum SupAccumulator {
    /// Kept as a lower front of the negated points.
    Planar(Vec<Pt>),
    General(Vec<(Vec<f64>, u32)>),
}

impl SupAccumulator {
    fn new(planar: bool) -> Self {
        if planar {
            SupAccumulator::Planar(Vec::new())
        } else {
            SupAccumulator::General(Vec::new())
        }
    }

    fn absorb(&mut self, gens: &Gens, k: &PolyhedralCone) {
        match (self, gens) {
            (SupAccumulator::Planar(acc), Gens::Planar(g)) => {
                let up: Vec<Pt> = g.iter().rev().map(Pt::flipped).collect();
                *acc = merge_lower(acc, &up);
            }
            (SupAccumulator::General(acc), Gens::General(g)) => {
                acc.extend(g.iter().cloned());
                if acc.len() > 4096 {
                    *acc = prune_general(std::mem::take(acc), k, true);
                }
            }
            _ => unreachable!("accumulator and generators share the cone"),
        }
    }

    fn finish(self, k: &PolyhedralCone) -> Vec<(Vec<f64>, u32)> {
        match self {
            SupAccumulator::Planar(acc) => acc.iter().map(|p| (vec![-p.y[0], -p.y[1]], p.src)).collect(),
            SupAccumulator::General(acc) => prune_general(acc, k, true),
        }
    }
}

/// Collects per-operator negated conjugates into a dual report.
pub(crate) struct ReportBuilder {
    k: PolyhedralCone,
    primal: FrontSet,
    /// Transformed primal generators sorted by the first coordinate.
    primal_t: Vec<[f64; 2]>,
    dual: SupAccumulator,
    loose: SupAccumulator,
    evals: Vec<OperatorEval>,
    weak_ok: bool,
}

impl ReportBuilder {
    pub(crate) fn new(primal: FrontSet) -> Self {
        let k = primal.cone().clone();
        let planar = planar_cone(&k);
        let mut primal_t: Vec<[f64; 2]> = if planar { primal.generators().iter().map(|y| Pt::new(y, &k, 0).t).collect() } else { Vec::new() };
        primal_t.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        ReportBuilder { k, primal, primal_t, dual: SupAccumulator::new(planar), loose: SupAccumulator::new(planar), evals: Vec::new(), weak_ok: true }
    }

    fn src(&self) -> u32 {
        self.evals.len() as u32
    }

    /// `-Φ*(L,T) ≼_K` primal.
    fn below_primal(&self, gens: &Gens) -> Result<bool> {
        match gens {
            Gens::Planar(v) => Ok(covers_from_below(v, &self.primal_t)),
            Gens::General(_) => {
                let front = FrontSet::from_pruned(FrontKind::Inf, gens.points(), &self.k);
                precedes(SetRef::Front(&front), SetRef::Front(&self.primal), &self.k)
            }
        }
    }

    /// `dual`/`loose` are the negated conjugates that enter each supremum.
    fn push(&mut self, operator: LinOp, in_domain: bool, positive: bool, dual: Option<Gens>, loose: Option<Gens>) -> Result<()> {
        let mut eval = OperatorEval { operator, in_domain, positive, weak_duality: true, generators: 0 };
        for (gens, to_loose) in [(dual, false), (loose, true)] {
            let Some(gens) = gens else { continue };
            eval.weak_duality &= self.below_primal(&gens)?;
            eval.generators = eval.generators.max(gens.len());
            let acc = if to_loose { &mut self.loose } else { &mut self.dual };
            acc.absorb(&gens, &self.k);
        }
        self.weak_ok &= eval.weak_duality;
        self.evals.push(eval);
        Ok(())
    }

    /// One negated conjugate entering the dual, and the loose dual too when
    /// the operator is positive.
    fn push_shared(&mut self, operator: LinOp, positive: bool, gens: Gens) -> Result<()> {
        let weak = self.below_primal(&gens)?;
        let eval = OperatorEval { operator, in_domain: true, positive, weak_duality: weak, generators: gens.len() };
        self.dual.absorb(&gens, &self.k);
        if positive {
            self.loose.absorb(&gens, &self.k);
        }
        self.weak_ok &= weak;
        self.evals.push(eval);
        Ok(())
    }

    /// Inf front with generators tagged by the next operator index.
    pub(crate) fn gens_of(&self, front: &FrontSet) -> Gens {
        let src = self.src();
        if planar_cone(&self.k) {
            let mut v: Vec<Pt> = front.generators().iter().map(|y| Pt::new(y, &self.k, src)).collect();
            sort_run(&mut v);
            Gens::Planar(v)
        } else {
            Gens::General(front.generators().iter().map(|y| (y.clone(), src)).collect())
        }
    }

    pub(crate) fn push_fronts(
        &mut self,
        operator: LinOp,
        in_domain: bool,
        positive: bool,
        dual: Option<&FrontSet>,
        loose: Option<&FrontSet>,
    ) -> Result<()> {
        let d = dual.map(|f| self.gens_of(f));
        let l = loose.map(|f| self.gens_of(f));
        self.push(operator, in_domain, positive, d, l)
    }

    /// Gap and attainment are measured against the loose front when `by_loose`.
    pub(crate) fn finish(self, grid_id: String, tolerance: f64, by_loose: bool) -> Result<DualReport> {
        let k = &self.k;
        let dual_pts = self.dual.finish(k);
        let loose_pts = self.loose.finish(k);
        let to_front = |pts: &[(Vec<f64>, u32)]| {
            if pts.is_empty() {
                FrontSet::minus_infinity(k)
            } else {
                FrontSet::from_pruned(FrontKind::Sup, pts.iter().map(|(y, _)| y.clone()).collect(), k)
            }
        };
        let dual_front = to_front(&dual_pts);
        let loose_front = to_front(&loose_pts);
        let primal = self.primal;
        let chain_ok = precedes(SetRef::Front(&loose_front), SetRef::Front(&dual_front), k)?
            && precedes(SetRef::Front(&dual_front), SetRef::Front(&primal), k)?;
        let pts = if by_loose { &loose_pts } else { &dual_pts };
        let attained: Vec<Vec<f64>> = pts.iter().map(|(y, _)| y.clone()).collect();
        let gap = if primal.is_finite() { hausdorff_one_sided(primal.generators(), &attained) } else { f64::INFINITY };
        let near_primal = Nearest::new(primal.generators());
        let mut attaining: Vec<u32> = pts.iter().filter(|(y, _)| near_primal.distance(y) <= tolerance).map(|(_, src)| *src).collect();
        attaining.sort_unstable();
        attaining.dedup();
        Ok(DualReport {
            grid_id,
            tolerance,
            primal_front: primal,
            dual_front,
            loose_dual_front: loose_front,
            weak_duality_ok: self.weak_ok && chain_ok,
            chain_ok,
            strong_duality_gap: gap,
            strong_duality: gap <= tolerance,
            attaining_operators: attaining.iter().map(|&i| self.evals[i as usize].operator.clone()).collect(),
            operators: self.evals,
        })
    }
}

/// Dual, loose dual, weak duality per operator and the strong-duality gap.
pub fn strong_duality_check(p: &PerturbationProblem, l: &LinOp, tolerance: f64) -> Result<DualReport> {
    let k = p.cone();
    let mut rb = ReportBuilder::new(primal_value(p, l)?);
    let slices = Slices::new(p, l)?;
    for t in &p.operators {
        let in_domain = !p.phi.conjugate_is_plus_infinity(&l.hstack(t)?);
        let positive = is_positive_operator(t, &p.s, k)?;
        if in_domain {
            let gens = slices.neg_conjugate(t, k, rb.src());
            rb.push_shared(t.clone(), positive, gens)?;
        } else {
            rb.push(t.clone(), in_domain, positive, None, None)?;
        }
    }
    rb.finish(p.grid_id(), tolerance, false)
}

/// `WSup{-Φ*(L,T) : T ∈ grid ∩ dom}`; `{-inf}` when no operator survives.
pub fn dual_value(p: &PerturbationProblem, l: &LinOp) -> Result<FrontSet> {
    Ok(strong_duality_check(p, l, 0.0)?.dual_front)
}

/// The same supremum over positive operators only.
pub fn loose_dual_value(p: &PerturbationProblem, l: &LinOp) -> Result<FrontSet> {
    Ok(strong_duality_check(p, l, 0.0)?.loose_dual_front)
}

/// Weak duality for every filtered operator plus `loose ≼ dual ≼ primal`.
pub fn weak_duality_check(p: &PerturbationProblem, l: &LinOp) -> Result<bool> {
    Ok(strong_duality_check(p, l, 0.0)?.weak_duality_ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "C0" => Condition::C0,
            "C1" => Condition::C1,
            "C2" => Condition::C2,
            "C3" => Condition::C3,
            "C4" => Condition::C4,
            "C5" => Condition::C5,
            "C6" => Condition::C6,
            "C7" => Condition::C7,
            _ => return Err(Error::UnknownCondition(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

/// Neighbourhoods of `0_Z` are lattice boxes of `radius` steps per axis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SamplingPolicy {
    pub radius: usize,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy { radius: 1 }
    }
}

struct ZView {
    /// z-lattice points with a finite value somewhere (`π(dom Φ)`).
    in_proj: Vec<bool>,
    basis: Vec<Vec<f64>>,
}

impl ZView {
    fn new(p: &PerturbationProblem) -> Self {
        let mut in_proj = vec![false; p.nz];
        for i in p.phi.dom() {
            in_proj[i % p.nz] = true;
        }
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for (iz, _) in in_proj.iter().enumerate().filter(|(_, b)| **b) {
            let z = p.z_of(iz).to_vec();
            let mut trial = basis.clone();
            trial.push(z.clone());
            if rank(&trial, 1e-9) > basis.len() {
                basis.push(z);
            }
        }
        ZView { in_proj, basis }
    }

    fn in_z0(&self, z: &[f64]) -> bool {
        if z.iter().all(|v| v.abs() <= 1e-12) {
            return true;
        }
        let mut trial = self.basis.clone();
        trial.push(z.to_vec());
        rank(&trial, 1e-9) == self.basis.len()
    }
}

/// z-lattice indices within `radius` steps of `0_Z` on every axis.
fn neighbourhood(p: &PerturbationProblem, radius: usize) -> Vec<usize> {
    let zl = p.z_lattice();
    let centre = zl.multi_index(p.zero_z);
    (0..p.nz)
        .filter(|&iz| zl.multi_index(iz).iter().zip(&centre).all(|(a, b)| a.abs_diff(*b) <= radius))
        .collect()
}

/// The conditions on the sample grid. (C0), the monotonicity part of (C6)
/// and (C7) are finite statements and can fail; the others quantify over
/// neighbourhoods and only ever hold by witness or stay undetermined.
pub fn check_condition(p: &PerturbationProblem, which: Condition, policy: SamplingPolicy) -> Result<Verdict> {
    let k = p.cone();
    let nz = p.nz;
    let val = |ix: usize, iz: usize| p.phi.finite_value(ix * nz + iz);
    let zview = ZView::new(p);
    let nbhd: Vec<usize> = neighbourhood(p, policy.radius).into_iter().filter(|&iz| zview.in_z0(p.z_of(iz))).collect();
    let le = |a: &[f64], b: &[f64]| leq_cone(a, b, k).unwrap_or(false);
    // Φ(x,0) ≦ Φ(x,z) for every domain point with z selected by `sel`
    let monotone = |sel: &dyn Fn(&[f64]) -> bool| {
        p.phi.dom().all(|i| {
            let (ix, iz) = (i / nz, i % nz);
            if !sel(p.z_of(iz)) {
                return true;
            }
            match val(ix, p.zero_z) {
                Some(v0) => le(v0, p.phi.finite_value(i).unwrap()),
                None => false,
            }
        })
    };
    let full_slice = |ix: usize| nbhd.iter().all(|&iz| val(ix, iz).is_some());
    let ri_witness = || {
        let pts: Vec<Vec<f64>> = nbhd.iter().filter(|&&iz| iz != p.zero_z).map(|&iz| p.z_of(iz).to_vec()).collect();
        nbhd.iter().all(|&iz| zview.in_proj[iz]) && rank(&pts, 1e-9) == zview.basis.len()
    };
    Ok(match which {
        Condition::C0 => {
            let neg_s: Vec<usize> = (0..nz)
                .filter(|&iz| p.s.contains(&p.z_of(iz).iter().map(|v| -v).collect::<Vec<_>>(), Region::Closed).unwrap_or(false))
                .collect();
            let ok = (0..p.nx()).any(|ix| match val(ix, p.zero_z) {
                Some(v0) => neg_s.iter().all(|&iz| val(ix, iz).is_some_and(|v| le(v, v0))),
                None => false,
            });
            // every generator needs some sampled -νs, otherwise the check is vacuous
            let reaches = |g: &Vec<f64>| {
                neg_s.iter().any(|&iz| {
                    let z = p.z_of(iz);
                    let nu = -dot(z, g) / dot(g, g);
                    nu > 1e-12 && z.iter().zip(g).all(|(a, b)| (a + nu * b).abs() <= 1e-9)
                })
            };
            if !p.s.generators().iter().all(reaches) {
                Verdict::Undetermined
            } else if ok {
                Verdict::Holds
            } else {
                Verdict::Fails
            }
        }
        Condition::C1 | Condition::C4 | Condition::C5 => {
            if ri_witness() {
                Verdict::Holds
            } else {
                Verdict::Undetermined
            }
        }
        Condition::C2 | Condition::C3 => {
            if (0..p.nx()).any(full_slice) {
                Verdict::Holds
            } else {
                Verdict::Undetermined
            }
        }
        Condition::C6 => {
            if !monotone(&|_| true) {
                Verdict::Fails
            } else {
                let zl = p.z_lattice();
                let shape = zl.shape();
                let interior = (0..nz).any(|iz| {
                    let mi = zl.multi_index(iz);
                    mi.iter().zip(&shape).all(|(i, n)| *i > 0 && i + 1 < *n)
                        && (0..nz).all(|jz| {
                            let mj = zl.multi_index(jz);
                            !mj.iter().zip(&mi).all(|(a, b)| a.abs_diff(*b) <= 1) || zview.in_proj[jz]
                        })
                });
                if interior {
                    Verdict::Holds
                } else {
                    Verdict::Undetermined
                }
            }
        }
        Condition::C7 => {
            if !p.s.has_interior() {
                Verdict::Fails
            } else {
                let slater = (0..nz).any(|iz| zview.in_proj[iz] && p.s.contains(p.z_of(iz), Region::Interior).unwrap_or(false));
                let mono = monotone(&|z| p.s.contains(z, Region::Closed).unwrap_or(false));
                if slater && mono {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                }
            }
        }
    })
}

/// Grid sizes for the worked example.
#[derive(Debug, Clone, Serialize)]
pub struct P1Options {
    pub x: (f64, f64, f64),
    pub z: (f64, f64, f64),
    pub cd: (f64, f64, f64),
}

impl Default for P1Options {
    fn default() -> Self {
        P1Options { x: (-5.0, 3.0, 1e-3), z: (-6.0, 6.0, 0.05), cd: (-3.0, 3.0, 0.1) }
    }
}

/// `Φ(x,z) = (x, x^2 + 2x + z)` when `2x + z <= 0`, with `K = R^2_+`,
/// `S = R_+` and operators `T = (c, d)` over a square grid.
pub fn p1_problem(opts: &P1Options) -> Result<PerturbationProblem> {
    let lattice = Lattice::new(vec![Lattice::axis(opts.x.0, opts.x.1, opts.x.2), Lattice::axis(opts.z.0, opts.z.1, opts.z.2)])?;
    let k = PolyhedralCone::orthant(2);
    let phi = SampledMap::tabulate(lattice, &k, |p| {
        let (x, z) = (p[0], p[1]);
        if 2.0 * x + z <= 1e-12 {
            ExtendedPoint::Finite(vec![x, x * x + 2.0 * x + z])
        } else {
            ExtendedPoint::PlusInf
        }
    })?;
    let axis = Lattice::axis(opts.cd.0, opts.cd.1, opts.cd.2);
    let ops: Vec<LinOp> = axis.iter().flat_map(|&c| axis.iter().map(move |&d| LinOp::column(&[c, d]))).collect();
    PerturbationProblem::new(phi, 1, PolyhedralCone::orthant(1).into(), ops)
}

/// The worked example at `L = 0`.
pub fn example_p1(opts: &P1Options) -> Result<(PerturbationProblem, DualReport)> {
    let p = p1_problem(opts)?;
    let report = strong_duality_check(&p, &LinOp::zeros(2, 1), 1e-2)?;
    Ok((p, report))
}

/// One-sided Hausdorff distance `max_a min_b |a - b|`.
pub fn hausdorff_one_sided(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if b.is_empty() {
        return f64::INFINITY;
    }
    let near = Nearest::new(b);
    a.iter().map(|p| near.distance(p)).fold(0.0, f64::max)
}

pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    hausdorff_one_sided(a, b).max(hausdorff_one_sided(b, a))
}

/// Points along a planar front inside the box `[lo, hi]^2`, spaced at most
/// `spacing` apart: generators, the corners between consecutive generators
/// and the two tails along the cone's generators.
pub fn front_polyline(front: &FrontSet, lo: f64, hi: f64, spacing: f64) -> Result<Vec<Vec<f64>>> {
    let k = front.cone();
    if k.dim() != 2 || !front.is_finite() {
        return Err(Error::InfiniteFront("planar finite front required"));
    }
    let sign = if front.kind() == FrontKind::Sup { -1.0 } else { 1.0 };
    let mut g: Vec<Pt> = front.generators().iter().map(|y| Pt::new(y, k, 0)).collect();
    // walk in the order of the first transformed coordinate, upward for inf fronts
    g.sort_by(|a, b| (sign * a.t[0]).total_cmp(&(sign * b.t[0])));
    let n = k.normals();
    let inv = {
        let d = n[0][0] * n[1][1] - n[0][1] * n[1][0];
        [[n[1][1] / d, -n[0][1] / d], [-n[1][0] / d, n[0][0] / d]]
    };
    let back = |t: [f64; 2]| vec![inv[0][0] * t[0] + inv[0][1] * t[1], inv[1][0] * t[0] + inv[1][1] * t[1]];
    let mut verts: Vec<Vec<f64>> = Vec::new();
    let far = 4.0 * (hi - lo).abs() + g.iter().map(|q| q.t[0].abs().max(q.t[1].abs())).fold(0.0, f64::max);
    let first = g[0].t;
    verts.push(back([first[0], first[1] + sign * far]));
    for w in g.windows(2) {
        verts.push(back(w[0].t));
        verts.push(back([w[1].t[0], w[0].t[1]]));
    }
    let last = g[g.len() - 1].t;
    verts.push(back(last));
    verts.push(back([last[0] + sign * far, last[1]]));
    let inside = |v: &[f64]| v.iter().all(|c| *c >= lo - 1e-12 && *c <= hi + 1e-12);
    let mut out = Vec::new();
    for w in verts.windows(2) {
        let d = sub(&w[1], &w[0]);
        let len = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let steps = (len / spacing).ceil().max(1.0) as usize;
        // clip the parameter range to the box before sampling
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for c in 0..2 {
            if d[c].abs() < 1e-15 {
                if w[0][c] < lo - 1e-12 || w[0][c] > hi + 1e-12 {
                    t1 = -1.0;
                }
            } else {
                let a = (lo - w[0][c]) / d[c];
                let b = (hi - w[0][c]) / d[c];
                t0 = t0.max(a.min(b));
                t1 = t1.min(a.max(b));
            }
        }
        if t1 < t0 {
            continue;
        }
        let i0 = (t0 * steps as f64).ceil() as usize;
        let i1 = (t1 * steps as f64).floor() as usize;
        for i in i0..=i1.min(steps) {
            let s = i as f64 / steps as f64;
            let v: Vec<f64> = w[0].iter().zip(&d).map(|(a, b)| a + s * b).collect();
            if inside(&v) {
                out.push(v);
            }
        }
        for v in [t0, t1] {
            let e: Vec<f64> = w[0].iter().zip(&d).map(|(a, b)| a + v * b).collect();
            if inside(&e) {
                out.push(e);
            }
        }
    }
    Ok(out)
}
