//! The cone-constrained composite problem
//! `WInf{F(x) + κ(H(x)) : x ∈ C, G(x) ∈ -S}`, its four perturbation mappings
//! and the dual problems assembled from conjugates with `⊎`.

use std::collections::HashMap;

use serde::Serialize;

use super::{PerturbationProblem, ReportBuilder};
use crate::cone_order::{ExtendedPoint, PolyhedralCone, Region};
use crate::error::{Error, Result};
use crate::linalg::{add, sub};
use crate::mappings::{
    conjugate, is_positive_operator, is_weakly_positive, ConeBlock, Lattice, LinOp, OrderingCone, SampledMap,
};
use crate::weak_sets::{fronts_equal_on, winf, ws_sum, wsup, FrontKind, FrontSet, ProbeGrid};
use super::DualReport;

/// Default cap on the number of entries of a perturbation table.
pub const MAX_TABLE: usize = 5_000_000;

/// The cap, overridable through `VECDUAL_MAX_TABLE`.
pub fn table_cap() -> usize {
    std::env::var("VECDUAL_MAX_TABLE").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(MAX_TABLE)
}

/// `F`, `H`, `G` share the X lattice. `κ = None` means `κ ≡ 0` on all of W;
/// `h = None` means there is no W at all. `z_box` is the lattice on which
/// `-S` is sampled and must contain `0_Z`.
#[derive(Debug, Clone)]
pub struct CCVPInstance {
    pub f: SampledMap,
    pub kappa: Option<SampledMap>,
    pub h: Option<SampledMap>,
    pub g: SampledMap,
    pub c: Vec<bool>,
    pub z_box: Lattice,
    /// Shift grid for `x'`, `x''`, `x'''` in Φ₂–Φ₄.
    pub x_shift: Option<Lattice>,
}

/// How a shifted argument resolves against a lattice.
enum Lookup {
    At(usize),
    Outside,
}

fn locate(lat: &Lattice, p: &[f64]) -> Result<Lookup> {
    if let Some(i) = lat.locate(p) {
        return Ok(Lookup::At(i));
    }
    let inside = p.iter().zip(&lat.axes).all(|(v, a)| *v >= a[0] - 1e-9 && *v <= a[a.len() - 1] + 1e-9);
    if inside {
        Err(Error::OffGrid(format!("{p:?} in {}", lat.id())))
    } else {
        Ok(Lookup::Outside)
    }
}

fn uniform_step(a: &[f64]) -> Option<f64> {
    if a.len() < 2 {
        return Some(1.0);
    }
    let h = a[1] - a[0];
    a.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0)).then_some(h)
}

/// Shifts `d` with `v + d` running over all of `target` for every `v` in
/// `values`, plus `0`. Values must sit on the target's step.
pub fn covering_shift_grid(values: &[Vec<f64>], target: &Lattice) -> Result<Lattice> {
    let mut axes = Vec::with_capacity(target.dim());
    for (j, a) in target.axes.iter().enumerate() {
        let h = uniform_step(a).ok_or_else(|| Error::ShapeMismatch(format!("axis {j} of {} is not uniform", target.id())))?;
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for v in values {
            let off = (v[j] - a[0]) / h;
            if (off - off.round()).abs() > 1e-6 {
                return Err(Error::OffGrid(format!("{:?} against {}", v, target.id())));
            }
            lo = lo.min(a[0] - v[j]);
            hi = hi.max(a[a.len() - 1] - v[j]);
        }
        axes.push(if a.len() < 2 { vec![0.0] } else { Lattice::axis(lo, hi, h) });
    }
    Lattice::new(axes)
}

fn finite_at(m: &SampledMap, i: usize) -> Option<&[f64]> {
    m.finite_value(i)
}

impl CCVPInstance {
    pub fn x_lattice(&self) -> &Lattice {
        self.f.lattice().expect("validated")
    }

    pub fn k(&self) -> &PolyhedralCone {
        self.f.cone()
    }

    pub fn s(&self) -> &PolyhedralCone {
        self.g.cone()
    }

    pub fn p(&self) -> Option<&PolyhedralCone> {
        self.h.as_ref().map(|h| h.cone())
    }

    pub fn x_dim(&self) -> usize {
        self.x_lattice().dim()
    }

    pub fn w_dim(&self) -> usize {
        self.h.as_ref().map_or(0, |h| h.out_dim())
    }

    pub fn z_dim(&self) -> usize {
        self.g.out_dim()
    }

    /// Checks shapes and `A ∩ dom F ∩ H⁻¹(dom κ) ≠ ∅`.
    pub fn validate(&self) -> Result<()> {
        let lat = self.f.lattice().ok_or_else(|| Error::ShapeMismatch("F needs a lattice".into()))?;
        for (name, m) in [("G", Some(&self.g)), ("H", self.h.as_ref())] {
            if let Some(m) = m {
                if m.lattice() != Some(lat) {
                    return Err(Error::ShapeMismatch(format!("{name} is not sampled on the X lattice")));
                }
            }
        }
        if self.c.len() != lat.len() {
            return Err(Error::ShapeMismatch(format!("C has {} flags for {} samples", self.c.len(), lat.len())));
        }
        if self.kappa.is_some() && self.h.is_none() {
            return Err(Error::ShapeMismatch("κ given without H".into()));
        }
        if let (Some(kappa), Some(h)) = (&self.kappa, &self.h) {
            if kappa.cone() != self.k() {
                return Err(Error::ConeMismatch);
            }
            if kappa.lattice().is_none() || kappa.in_dim() != h.out_dim() {
                return Err(Error::ShapeMismatch("κ must be sampled on a lattice over W".into()));
            }
        }
        if self.z_box.dim() != self.z_dim() || self.z_box.locate(&vec![0.0; self.z_dim()]).is_none() {
            return Err(Error::ShapeMismatch("z_box must be a lattice over Z containing 0".into()));
        }
        let mut feasible = false;
        for i in 0..lat.len() {
            feasible |= self.objective(i)?.is_some();
        }
        if !feasible {
            return Err(Error::Infeasible("A ∩ dom F ∩ H⁻¹(dom κ) is empty on the samples".into()));
        }
        Ok(())
    }

    /// `κ(u)`, `None` for `+inf`.
    fn kappa_at(&self, u: &[f64]) -> Result<Option<Vec<f64>>> {
        match &self.kappa {
            None => Ok(Some(vec![0.0; self.k().dim()])),
            Some(kappa) => match locate(kappa.lattice().unwrap(), u)? {
                Lookup::At(i) => Ok(kappa.finite_value(i).map(|v| v.to_vec())),
                Lookup::Outside => Ok(None),
            },
        }
    }

    fn h_at(&self, i: usize) -> Option<Vec<f64>> {
        match &self.h {
            None => Some(Vec::new()),
            Some(h) => finite_at(h, i).map(|v| v.to_vec()),
        }
    }

    fn in_neg_s(&self, z: &[f64]) -> bool {
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        self.s().contains(&neg, Region::Closed).unwrap_or(false)
    }

    /// `F(x) + κ(H(x))` on `A`, `None` elsewhere.
    pub fn objective(&self, i: usize) -> Result<Option<Vec<f64>>> {
        if !self.c[i] {
            return Ok(None);
        }
        let (Some(f), Some(g), Some(h)) = (finite_at(&self.f, i), finite_at(&self.g, i), self.h_at(i)) else {
            return Ok(None);
        };
        if !self.in_neg_s(g) {
            return Ok(None);
        }
        Ok(self.kappa_at(&h)?.map(|k| add(f, &k)))
    }

    /// `WInf{F(x) + κ(H(x)) - L(x) : x ∈ A}`.
    pub fn primal(&self, l: &LinOp) -> Result<FrontSet> {
        let lat = self.x_lattice();
        let mut pts = Vec::new();
        for i in 0..lat.len() {
            if let Some(v) = self.objective(i)? {
                pts.push(sub(&v, &l.apply(self.f.sample(i))));
            }
        }
        winf(&pts, self.k())
    }

    /// Samples `x ∈ C ∩ dom F ∩ dom G ∩ dom H`.
    fn c_tilde(&self) -> Vec<usize> {
        (0..self.x_lattice().len())
            .filter(|&i| self.c[i] && self.f.is_finite_at(i) && self.g.is_finite_at(i) && self.h_at(i).is_some())
            .collect()
    }

    fn w_grid(&self) -> Result<Lattice> {
        match (&self.kappa, &self.h) {
            (Some(kappa), Some(h)) => {
                let vals: Vec<Vec<f64>> = h.dom().map(|i| h.finite_value(i).unwrap().to_vec()).collect();
                covering_shift_grid(&vals, kappa.lattice().unwrap())
            }
            _ => Lattice::new(vec![vec![0.0]; self.w_dim()]),
        }
    }

    fn z_grid(&self) -> Result<Lattice> {
        let vals: Vec<Vec<f64>> = self.g.dom().map(|i| self.g.finite_value(i).unwrap().to_vec()).collect();
        covering_shift_grid(&vals, &self.z_box)
    }

    fn x_shift_grid(&self, radius: Option<usize>) -> Result<Lattice> {
        if let Some(l) = &self.x_shift {
            if l.dim() != self.x_dim() {
                return Err(Error::DimensionMismatch { expected: self.x_dim(), got: l.dim() });
            }
            return Ok(l.clone());
        }
        let mut axes = Vec::new();
        for (j, a) in self.x_lattice().axes.iter().enumerate() {
            let h = uniform_step(a).ok_or_else(|| Error::ShapeMismatch(format!("X axis {j} is not uniform")))?;
            let n = a.len() as i64 - 1;
            let r = radius.map_or(n, |r| (r as i64).min(n));
            axes.push((-r..=r).map(|i| i as f64 * h).map(|v| if v == 0.0 { 0.0 } else { v }).collect());
        }
        Lattice::new(axes)
    }

    /// Points `s ∈ -S` reached as `G(x) + z` with `x ∈ C̃` and `z` on the
    /// perturbation grid; these sample `I*_{-S}`.
    pub fn neg_s_samples(&self) -> Result<Vec<Vec<f64>>> {
        let zg = self.z_grid()?;
        let mut out: Vec<Vec<f64>> = Vec::new();
        for i in self.c_tilde() {
            let g = self.g.finite_value(i).unwrap();
            for z in zg.points() {
                let s = add(g, &z);
                if self.in_neg_s(&s) {
                    out.push(s.iter().map(|v| (v * 1e9).round() / 1e9).collect());
                }
            }
        }
        out.sort_by(|a, b| crate::linalg::lex_cmp(a, b));
        out.dedup();
        Ok(out)
    }

    /// `(u, κ(u))` over `dom κ`; a single `(0, 0)` when `κ ≡ 0`.
    fn kappa_samples(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        match &self.kappa {
            Some(kappa) => kappa.dom().map(|i| (kappa.sample(i).to_vec(), kappa.finite_value(i).unwrap().to_vec())).collect(),
            None => vec![(vec![0.0; self.w_dim()], vec![0.0; self.k().dim()])],
        }
    }

    fn perturbation_cone(&self, zero_blocks: usize) -> OrderingCone {
        let mut blocks = Vec::new();
        for _ in 0..zero_blocks {
            blocks.push(ConeBlock::Zero(self.x_dim()));
        }
        if let Some(p) = self.p() {
            blocks.push(ConeBlock::Cone(p.clone()));
        }
        blocks.push(ConeBlock::Cone(self.s().clone()));
        OrderingCone::product(blocks)
    }
}

/// Which `Φᵢ` to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhiKind {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl PhiKind {
    fn shifts(self) -> usize {
        match self {
            PhiKind::Phi1 => 0,
            PhiKind::Phi2 => 1,
            PhiKind::Phi3 => 2,
            PhiKind::Phi4 => 3,
        }
    }
}

fn build_phi(inst: &CCVPInstance, kind: PhiKind) -> Result<PerturbationProblem> {
    inst.validate()?;
    let xl = inst.x_lattice().clone();
    let nshift = kind.shifts();
    let vgrid = match kind {
        PhiKind::Phi1 => None,
        PhiKind::Phi2 => Some(inst.x_shift_grid(None)?),
        _ => Some(inst.x_shift_grid(Some(2))?),
    };
    let wg = inst.w_grid()?;
    let zg = inst.z_grid()?;
    let mut lat = xl.clone();
    for _ in 0..nshift {
        lat = lat.product(vgrid.as_ref().unwrap());
    }
    let lat = lat.product(&wg).product(&zg);
    let entries: usize = lat.shape().iter().product();
    let cap = table_cap();
    if entries > cap {
        return Err(Error::GridCap { entries, cap });
    }
    let (nx, wd, zd) = (inst.x_dim(), inst.w_dim(), inst.z_dim());
    let mut values = Vec::with_capacity(entries);
    for idx in 0..entries {
        let p = lat.point(idx);
        let x = &p[..nx];
        let shift = |k: usize| &p[nx * (1 + k)..nx * (2 + k)];
        let w = &p[nx * (1 + nshift)..nx * (1 + nshift) + wd];
        let z = &p[nx * (1 + nshift) + wd..nx * (1 + nshift) + wd + zd];
        values.push(phi_value(inst, kind, &xl, x, &|k| shift(k).to_vec(), w, z)?);
    }
    let phi = SampledMap::on_lattice(lat, values, inst.k())?;
    PerturbationProblem::new(phi, nx, inst.perturbation_cone(nshift), Vec::new())
}

fn x_index(xl: &Lattice, x: &[f64]) -> Result<Option<usize>> {
    Ok(match locate(xl, x)? {
        Lookup::At(i) => Some(i),
        Lookup::Outside => None,
    })
}

#[allow(clippy::too_many_arguments)]
fn phi_value(
    inst: &CCVPInstance,
    kind: PhiKind,
    xl: &Lattice,
    x: &[f64],
    shift: &dyn Fn(usize) -> Vec<f64>,
    w: &[f64],
    z: &[f64],
) -> Result<ExtendedPoint> {
    let ix = xl.locate(x).expect("x is a lattice point");
    let at = |k: usize| -> Result<Option<usize>> { x_index(xl, &add(x, &shift(k))) };
    // x + x' for F, x + x'' for H (Φ₄ only), and the point tested against C
    let (f_at, h_at, c_at) = match kind {
        PhiKind::Phi1 => (Some(ix), Some(ix), Some(ix)),
        PhiKind::Phi2 => (at(0)?, Some(ix), Some(ix)),
        PhiKind::Phi3 => (at(0)?, Some(ix), at(1)?),
        PhiKind::Phi4 => (at(0)?, at(1)?, at(2)?),
    };
    let (Some(fi), Some(hi), Some(ci)) = (f_at, h_at, c_at) else {
        return Ok(ExtendedPoint::PlusInf);
    };
    if !inst.c[ci] {
        return Ok(ExtendedPoint::PlusInf);
    }
    let Some(g) = inst.g.finite_value(ix) else { return Ok(ExtendedPoint::PlusInf) };
    if !inst.in_neg_s(&add(g, z)) {
        return Ok(ExtendedPoint::PlusInf);
    }
    let (Some(f), Some(h)) = (inst.f.finite_value(fi), inst.h_at(hi)) else {
        return Ok(ExtendedPoint::PlusInf);
    };
    Ok(match inst.kappa_at(&add(&h, w))? {
        Some(k) => ExtendedPoint::Finite(add(f, &k)),
        None => ExtendedPoint::PlusInf,
    })
}

/// `Φ₁(x,w,z) = F(x) + κ(H(x)+w)` on `x ∈ C`, `G(x)+z ∈ -S`; cone `P × S`.
pub fn build_phi1(inst: &CCVPInstance) -> Result<PerturbationProblem> {
    build_phi(inst, PhiKind::Phi1)
}

/// `Φ₂(x,v,w,z) = F(x+v) + κ(H(x)+w)`; cone `{0} × P × S`.
pub fn build_phi2(inst: &CCVPInstance) -> Result<PerturbationProblem> {
    build_phi(inst, PhiKind::Phi2)
}

/// `Φ₃(x,x',x'',w,z) = F(x+x') + κ(H(x)+w)` on `x+x'' ∈ C`; cone `{0}² × P × S`.
pub fn build_phi3(inst: &CCVPInstance) -> Result<PerturbationProblem> {
    build_phi(inst, PhiKind::Phi3)
}

/// `Φ₄(x,x',x'',x''',w,z) = F(x+x') + κ(H(x+x'')+w)` on `x+x''' ∈ C`; cone `{0}³ × P × S`.
pub fn build_phi4(inst: &CCVPInstance) -> Result<PerturbationProblem> {
    build_phi(inst, PhiKind::Phi4)
}

/// Sampled conjugate: the weak supremum of the sample points, with no
/// recession test.
fn sampled_wsup(pts: &[Vec<f64>], k: &PolyhedralCone) -> Result<FrontSet> {
    if pts.is_empty() {
        return Ok(FrontSet::minus_infinity(k));
    }
    wsup(pts, k)
}

/// `{L(x) - T₁H(x) - T₂G(x) - F(x) : x ∈ C̃}`.
fn lagrangian_points(inst: &CCVPInstance, l: &LinOp, t1: &LinOp, t2: &LinOp) -> Vec<Vec<f64>> {
    inst.c_tilde()
        .into_iter()
        .map(|i| {
            let x = inst.f.sample(i);
            let mut v = sub(&l.apply(x), inst.f.finite_value(i).unwrap());
            if let Some(h) = inst.h_at(i).filter(|h| !h.is_empty()) {
                v = sub(&v, &t1.apply(&h));
            }
            sub(&v, &t2.apply(inst.g.finite_value(i).unwrap()))
        })
        .collect()
}

/// Both sides of the Φ₁ conjugate decomposition, as sampled weak suprema.
#[derive(Debug, Clone, Serialize)]
pub struct Phi1Sides {
    pub direct: FrontSet,
    pub decomposed: FrontSet,
    /// The decomposition without the `I*_{-S}` term, when `T₂` is positive.
    pub without_indicator: Option<FrontSet>,
}

pub fn phi1_conjugate_sides(inst: &CCVPInstance, l: &LinOp, t1: &LinOp, t2: &LinOp) -> Result<Phi1Sides> {
    let k = inst.k();
    let m = k.dim();
    let check = |t: &LinOp, cols: usize, name: &str| {
        if t.rows() != m || t.cols() != cols {
            Err(Error::ShapeMismatch(format!("{name} is {}x{}, need {m}x{cols}", t.rows(), t.cols())))
        } else {
            Ok(())
        }
    };
    check(l, inst.x_dim(), "L")?;
    check(t1, inst.w_dim(), "T1")?;
    check(t2, inst.z_dim(), "T2")?;
    let phi = build_phi1(inst)?;
    let lt = l.hstack(t1)?.hstack(t2)?;
    let direct = sampled_wsup(&phi.phi().conjugate_points(&lt), k)?;
    let a = sampled_wsup(&lagrangian_points(inst, l, t1, t2), k)?;
    let b_pts: Vec<Vec<f64>> = inst.kappa_samples().iter().map(|(u, ku)| sub(&t1.apply(u), ku)).collect();
    let b = sampled_wsup(&b_pts, k)?;
    let c_pts: Vec<Vec<f64>> = inst.neg_s_samples()?.iter().map(|s| t2.apply(s)).collect();
    let c = sampled_wsup(&c_pts, k)?;
    let ab = ws_sum(&a, &b)?;
    let decomposed = ws_sum(&ab, &c)?;
    let positive = is_positive_operator(t2, &inst.s().clone().into(), k)?;
    Ok(Phi1Sides { direct, decomposed, without_indicator: positive.then_some(ab) })
}

/// Probe equality of the direct `Φ₁*(L,T)` with its `⊎` decomposition, and
/// with the shortened decomposition when `T₂` is positive.
pub fn phi1_conjugate_identity(inst: &CCVPInstance, l: &LinOp, t1: &LinOp, t2: &LinOp) -> Result<bool> {
    let sides = phi1_conjugate_sides(inst, l, t1, t2)?;
    let mut all = sides.direct.generators().to_vec();
    all.extend(sides.decomposed.generators().iter().cloned());
    let probes = ProbeGrid::around(&all, inst.k().dim());
    let mut ok = fronts_equal_on(&sides.direct, &sides.decomposed, &probes);
    if let Some(short) = &sides.without_indicator {
        ok &= fronts_equal_on(&sides.direct, short, &probes);
    }
    Ok(ok)
}

/// Candidate values for each dual variable; unused ones may stay empty.
/// `l` is the fixed primal operator (zero when absent).
#[derive(Debug, Clone, Default)]
pub struct CcvdGrids {
    pub l: Option<LinOp>,
    pub l1: Vec<LinOp>,
    pub l2: Vec<LinOp>,
    pub l3: Vec<LinOp>,
    pub t1: Vec<LinOp>,
    pub t2: Vec<LinOp>,
}

struct Terms<'a> {
    inst: &'a CCVPInstance,
    k: &'a PolyhedralCone,
    cache: HashMap<(u8, usize), FrontSet>,
}

impl<'a> Terms<'a> {
    fn neutral(&self) -> FrontSet {
        FrontSet::neg_boundary(self.k)
    }

    /// Conjugate of `x ↦ value(x)` over the X samples where it is finite,
    /// with the recession test of the X lattice.
    fn conj_over_x(&self, l: &LinOp, value: impl Fn(usize) -> Option<Vec<f64>>) -> Result<FrontSet> {
        let lat = self.inst.x_lattice().clone();
        let vals: Vec<ExtendedPoint> = (0..lat.len())
            .map(|i| value(i).map_or(ExtendedPoint::PlusInf, ExtendedPoint::Finite))
            .collect();
        if vals.iter().all(|v| !v.is_finite()) {
            return Ok(FrontSet::minus_infinity(self.k));
        }
        conjugate(&SampledMap::on_lattice(lat, vals, self.k)?, l)
    }

    fn cached(&mut self, tag: u8, idx: usize, make: impl FnOnce(&Self) -> Result<FrontSet>) -> Result<FrontSet> {
        if let Some(f) = self.cache.get(&(tag, idx)) {
            return Ok(f.clone());
        }
        let f = make(self)?;
        self.cache.insert((tag, idx), f.clone());
        Ok(f)
    }

    fn f_star(&self, l: &LinOp) -> Result<FrontSet> {
        conjugate(&self.inst.f, l)
    }

    fn kappa_star(&self, t1: &LinOp) -> Result<FrontSet> {
        match &self.inst.kappa {
            Some(kappa) => conjugate(kappa, t1),
            None if t1.max_abs() <= 1e-12 => Ok(self.neutral()),
            None => Ok(FrontSet::plus_infinity(self.k)),
        }
    }

    fn indicator_neg_s(&self, t2: &LinOp) -> Result<FrontSet> {
        let pts: Vec<Vec<f64>> = self.inst.neg_s_samples()?.iter().map(|s| t2.apply(s)).collect();
        sampled_wsup(&pts, self.k)
    }

    fn t1h(&self, t1: &LinOp, i: usize) -> Option<Vec<f64>> {
        let h = self.inst.h_at(i)?;
        Some(if h.is_empty() { vec![0.0; self.k.dim()] } else { t1.apply(&h) })
    }

    fn t2g(&self, t2: &LinOp, i: usize) -> Option<Vec<f64>> {
        self.inst.g.finite_value(i).map(|g| t2.apply(g))
    }
}

/// One dual variable assignment of a variant.
#[derive(Clone, Copy)]
struct Choice {
    l1: usize,
    l2: usize,
    l3: usize,
    t1: usize,
    t2: usize,
}

/// The Lagrange (variant 1) and Fenchel–Lagrange (variants 2–4) duals over the
/// operator grids. Both the dual and the loose dual are reported; gap and
/// attainment refer to the loose one when `loose` is set.
pub fn build_ccvd(inst: &CCVPInstance, variant: u8, loose: bool, grids: &CcvdGrids) -> Result<DualReport> {
    inst.validate()?;
    if !(1..=4).contains(&variant) {
        return Err(Error::ShapeMismatch(format!("variant {variant} is not one of 1..4")));
    }
    let k = inst.k();
    let m = k.dim();
    let (nx, wd) = (inst.x_dim(), inst.w_dim());
    let l = grids.l.clone().unwrap_or_else(|| LinOp::zeros(m, nx));
    let zero_t1 = [LinOp::zeros(m, wd)];
    let t1s: &[LinOp] = if wd == 0 && grids.t1.is_empty() { &zero_t1 } else { &grids.t1 };
    let need = |g: &[LinOp], used: bool| -> Result<usize> {
        if !used {
            return Ok(1);
        }
        if g.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(g.len())
    };
    let n1 = need(&grids.l1, variant >= 2)?;
    let n2 = need(&grids.l2, variant >= 3)?;
    let n3 = need(&grids.l3, variant >= 4)?;
    let nt1 = need(t1s, true)?;
    let nt2 = need(&grids.t2, true)?;
    let s_cone: OrderingCone = inst.s().clone().into();
    let p_cone: Option<OrderingCone> = inst.p().map(|p| p.clone().into());
    let zero_x = LinOp::zeros(m, nx);
    let pick = |g: &'_ [LinOp], i: usize, used: bool| if used { g[i].clone() } else { zero_x.clone() };

    let mut terms = Terms { inst, k, cache: HashMap::new() };
    let mut rb = ReportBuilder::new(inst.primal(&l)?);
    let mut choices = Vec::new();
    for a in 0..n1 {
        for b in 0..n2 {
            for c in 0..n3 {
                for d in 0..nt1 {
                    for e in 0..nt2 {
                        choices.push(Choice { l1: a, l2: b, l3: c, t1: d, t2: e });
                    }
                }
            }
        }
    }
    for ch in choices {
        let l1 = pick(&grids.l1, ch.l1, variant >= 2);
        let l2 = pick(&grids.l2, ch.l2, variant >= 3);
        let l3 = pick(&grids.l3, ch.l3, variant >= 4);
        let t1 = &t1s[ch.t1];
        let t2 = &grids.t2[ch.t2];
        let kap = terms.cached(0, ch.t1, |t| t.kappa_star(t1))?;
        let weak_t2 = is_weakly_positive(t2, &s_cone, k)?;
        let pos_t1 = match &p_cone {
            Some(p) => is_positive_operator(t1, p, k)?,
            None => true,
        };
        let pos_t2 = is_positive_operator(t2, &s_cone, k)?;
        let in_domain = kap.kind() != FrontKind::PlusInfinity && weak_t2;
        let positive = kap.kind() != FrontKind::PlusInfinity && pos_t1 && pos_t2;
        let mut parts: Vec<FrontSet> = Vec::new();
        match variant {
            1 => {
                let lag = terms.conj_over_x(&l, |i| {
                    let f = inst.f.finite_value(i)?;
                    inst.c[i].then_some(())?;
                    Some(add(&add(f, &terms.t1h(t1, i)?), &terms.t2g(t2, i)?))
                })?;
                parts.push(lag);
            }
            2 => {
                parts.push(terms.cached(1, ch.l1, |t| t.f_star(&l1))?);
                let rest = l.add(&l1.neg())?;
                parts.push(terms.conj_over_x(&rest, |i| {
                    inst.c[i].then_some(())?;
                    Some(add(&terms.t1h(t1, i)?, &terms.t2g(t2, i)?))
                })?);
            }
            3 => {
                parts.push(terms.cached(1, ch.l1, |t| t.f_star(&l1))?);
                let rest = l.add(&l1.neg())?.add(&l2.neg())?;
                parts.push(terms.conj_over_x(&rest, |i| Some(add(&terms.t1h(t1, i)?, &terms.t2g(t2, i)?)))?);
                parts.push(terms.cached(2, ch.l2, |t| t.conj_over_x(&l2, |i| inst.c[i].then(|| vec![0.0; m])))?);
            }
            _ => {
                parts.push(terms.cached(1, ch.l1, |t| t.f_star(&l1))?);
                parts.push(terms.conj_over_x(&l2, |i| terms.t1h(t1, i))?);
                let rest = l.add(&l1.neg())?.add(&l2.neg())?.add(&l3.neg())?;
                parts.push(terms.conj_over_x(&rest, |i| terms.t2g(t2, i))?);
                parts.push(terms.cached(3, ch.l3, |t| t.conj_over_x(&l3, |i| inst.c[i].then(|| vec![0.0; m])))?);
            }
        }
        parts.push(kap);
        let base = sum_all(&parts, k)?;
        let ind = if in_domain { Some(terms.cached(4, ch.t2, |t| t.indicator_neg_s(t2))?) } else { None };
        let dual_obj = match (&base, &ind) {
            (Some(b), Some(i)) if in_domain => sum_all(&[b.clone(), i.clone()], k)?.map(|f| f.negate()),
            _ => None,
        };
        let loose_obj = if positive { base.as_ref().map(|f| f.negate()) } else { None };
        let finite_dual = dual_obj.as_ref().filter(|f| f.is_finite());
        let finite_loose = loose_obj.as_ref().filter(|f| f.is_finite());
        let op = l1.hstack(&l2)?.hstack(&l3)?.hstack(t1)?.hstack(t2)?;
        rb.push_fronts(op, finite_dual.is_some(), positive && finite_loose.is_some(), finite_dual, finite_loose)?;
    }
    rb.finish(format!("{}|v{}", inst.x_lattice().id(), variant), 1e-6, loose)
}

/// `⊎` of the parts; `None` when some part is `{+inf}` (the objective is
/// then `{-inf}`) or `{-inf}` (empty sample set).
fn sum_all(parts: &[FrontSet], k: &PolyhedralCone) -> Result<Option<FrontSet>> {
    let mut acc = FrontSet::neg_boundary(k);
    for p in parts {
        match p.kind() {
            FrontKind::PlusInfinity | FrontKind::MinusInfinity => return Ok(None),
            _ => acc = ws_sum(&acc, p)?,
        }
    }
    Ok(Some(acc))
}
