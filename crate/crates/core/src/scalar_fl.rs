//! The scalar case `Y = R`, `K = R_+` with piecewise-linear data: classical
//! conjugates by LP, the epigraph-sum identity for `f + i_A`, the Lagrange
//! and Fenchel-Lagrange duals of
//! `inf { f(x) + κ(H(x)) : x ∈ C, G(x) ∈ -S }`, and a cross-check of the
//! sampled vector machinery against the LP values.

use serde::{Deserialize, Serialize};

use crate::cone_order::{ConeSpec, ExtendedPoint, PolyhedralCone};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};
use crate::mappings::{conjugate, epi_membership, Lattice, LinOp, SampledMap};
use crate::weak_sets::winf;

pub use crate::lp::{lp_solve, Constraint, Lp, LpResult, LpStatus, Relation, VarKind};

/// Agreement tolerance for LP values.
pub const VALUE_TOL: f64 = 1e-6;
/// Required slack of a Slater point.
pub const SLATER_EPS: f64 = 1e-6;
const MEMBER_TOL: f64 = 1e-7;

/// `x -> A x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl Affine {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(r, b)| dot(r, x) + b).collect()
    }

    /// `A' v`.
    fn adjoint(&self, v: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (r, w) in self.a.iter().zip(v) {
            for (o, a) in out.iter_mut().zip(r) {
                *o += w * a;
            }
        }
        out
    }
}

/// `max_i (a_i'x + b_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    pub pieces: Vec<(Vec<f64>, f64)>,
}

impl PiecewiseLinear {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.pieces.iter().map(|(a, b)| dot(a, x) + b).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The composite term `κ ∘ H` with `κ: R^p -> R` ordered by `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Composite {
    pub kappa: Vec<(Vec<f64>, f64)>,
    #[serde(rename = "H")]
    pub h: Affine,
    #[serde(rename = "P")]
    pub p: ConeSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarInstance {
    pub pieces: Vec<(Vec<f64>, f64)>,
    #[serde(rename = "C_halfspaces", default)]
    pub c: Vec<(Vec<f64>, f64)>,
    #[serde(rename = "G")]
    pub g: Affine,
    #[serde(rename = "S")]
    pub s: ConeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composite: Option<Composite>,
}

impl ScalarInstance {
    pub fn n(&self) -> usize {
        self.pieces.first().map_or(0, |(a, _)| a.len())
    }

    pub fn s_cone(&self) -> Result<PolyhedralCone> {
        self.s.build()
    }

    /// Shapes, cones and a feasible point.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Empty("piece list"));
        }
        let same = |v: &[f64]| if v.len() == n { Ok(()) } else { Err(Error::DimensionMismatch { expected: n, got: v.len() }) };
        self.pieces.iter().try_for_each(|(a, _)| same(a))?;
        self.c.iter().try_for_each(|(e, _)| same(e))?;
        check_affine(&self.g, n)?;
        let s = self.s_cone()?;
        if s.dim() != self.g.b.len() {
            return Err(Error::DimensionMismatch { expected: self.g.b.len(), got: s.dim() });
        }
        if let Some(k) = &self.composite {
            check_affine(&k.h, n)?;
            let p = k.p.build()?;
            let pd = k.h.b.len();
            if p.dim() != pd {
                return Err(Error::DimensionMismatch { expected: pd, got: p.dim() });
            }
            if k.kappa.is_empty() {
                return Err(Error::Empty("κ piece list"));
            }
            for (c, _) in &k.kappa {
                if c.len() != pd {
                    return Err(Error::DimensionMismatch { expected: pd, got: c.len() });
                }
            }
        }
        match primal(self)?.status {
            LpStatus::Infeasible => Err(Error::Infeasible("C ∩ G^-1(-S) is empty".into())),
            _ => Ok(()),
        }
    }

    /// `f + κ∘H` as a single maximum of affine pieces.
    pub fn objective(&self) -> PiecewiseLinear {
        let n = self.n();
        match &self.composite {
            None => PiecewiseLinear { pieces: self.pieces.clone() },
            Some(k) => {
                let mut pieces = Vec::new();
                for (a, b) in &self.pieces {
                    for (c, d) in &k.kappa {
                        let mc = k.h.adjoint(c, n);
                        pieces.push((a.iter().zip(&mc).map(|(u, v)| u + v).collect(), b + dot(c, &k.h.b) + d));
                    }
                }
                PiecewiseLinear { pieces }
            }
        }
    }

    /// `C` together with `G(x) ∈ -S` written as halfspaces `n'(Ax + b) <= 0`.
    fn a_halfspaces(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        let s = self.s_cone()?;
        let mut out = self.c.clone();
        for nr in s.normals() {
            out.push((self.g.adjoint(nr, self.n()), -dot(nr, &self.g.b)));
        }
        Ok(out)
    }

    /// Whether `x` lies in `A = C ∩ G^-1(-S)` up to `tol`.
    pub fn feasible(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.a_halfspaces()?.iter().all(|(e, r)| dot(e, x) <= r + tol))
    }
}

fn check_affine(g: &Affine, n: usize) -> Result<()> {
    if g.a.len() != g.b.len() {
        return Err(Error::ShapeMismatch(format!("affine map with {} rows and {} offsets", g.a.len(), g.b.len())));
    }
    for r in &g.a {
        if r.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
    }
    Ok(())
}

/// LP value as an extended real: `+inf` for an unbounded maximization and
/// `-inf` for an infeasible one.
fn max_value(r: &LpResult) -> f64 {
    match r.status {
        LpStatus::Optimal => -r.value,
        LpStatus::Unbounded => f64::INFINITY,
        LpStatus::Infeasible => f64::NEG_INFINITY,
    }
}

fn min_value(r: &LpResult) -> f64 {
    match r.status {
        LpStatus::Optimal => r.value,
        LpStatus::Unbounded => f64::NEG_INFINITY,
        LpStatus::Infeasible => f64::INFINITY,
    }
}

/// `sup { <x*, x> - f(x) : e'x <= r for (e, r) in dom }` over `(x, t)`.
fn conjugate_lp(f: &PiecewiseLinear, dom: &[(Vec<f64>, f64)], x_star: &[f64]) -> Result<LpResult> {
    let n = x_star.len();
    let mut obj: Vec<f64> = x_star.iter().map(|v| -v).collect();
    obj.push(1.0);
    let mut lp = Lp::new(n + 1).minimize(obj).all_free();
    for (a, b) in &f.pieces {
        let mut row = a.clone();
        row.push(-1.0);
        lp.add(row, Relation::Le, -b);
    }
    for (e, r) in dom {
        let mut row = e.clone();
        row.push(0.0);
        lp.add(row, Relation::Le, *r);
    }
    lp.solve()
}

/// The classical conjugate `f*(x*)` of `f + i_D`, `D = {e'x <= r}`.
pub fn scalar_conjugate(f: &PiecewiseLinear, dom: &[(Vec<f64>, f64)], x_star: &[f64]) -> Result<f64> {
    Ok(max_value(&conjugate_lp(f, dom, x_star)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimalResult {
    pub status: LpStatus,
    pub value: f64,
    pub x: Vec<f64>,
}

/// `inf { f(x) + κ(H(x)) : x ∈ C, G(x) ∈ -S }`.
pub fn primal(inst: &ScalarInstance) -> Result<PrimalResult> {
    let n = inst.n();
    let obj = inst.objective();
    let dom = inst.a_halfspaces()?;
    let mut c = vec![0.0; n];
    c.push(1.0);
    let mut lp = Lp::new(n + 1).minimize(c).all_free();
    for (a, b) in &obj.pieces {
        let mut row = a.clone();
        row.push(-1.0);
        lp.add(row, Relation::Le, -b);
    }
    for (e, r) in &dom {
        let mut row = e.clone();
        row.push(0.0);
        lp.add(row, Relation::Le, *r);
    }
    let res = lp.solve()?;
    Ok(PrimalResult { status: res.status, value: min_value(&res), x: res.primal_point[..n].to_vec() })
}

#[derive(Debug, Clone, Serialize)]
pub struct SlaterReport {
    pub holds: bool,
    pub slack: f64,
    pub point: Vec<f64>,
}

/// A point of `int C` with `G(x) ∈ -int S`, found by maximizing the common
/// slack (capped at one) of the normalized halfspaces.
pub fn slater(inst: &ScalarInstance) -> Result<SlaterReport> {
    let n = inst.n();
    let s = inst.s_cone()?;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (e, r) in &inst.c {
        let len = norm2(e);
        if len > 0.0 {
            rows.push((e.iter().map(|v| v / len).collect(), r / len));
        }
    }
    for nr in s.normals() {
        rows.push((inst.g.adjoint(nr, n), -dot(nr, &inst.g.b)));
    }
    let mut obj = vec![0.0; n + 1];
    obj[n] = -1.0;
    let mut lp = Lp::new(n + 1).minimize(obj).all_free();
    for (e, r) in rows {
        let mut row = e;
        row.push(1.0);
        lp.add(row, Relation::Le, r);
    }
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    lp.add(cap, Relation::Le, 1.0);
    let res = lp.solve()?;
    let slack = max_value(&res);
    Ok(SlaterReport { holds: slack >= SLATER_EPS, slack, point: res.primal_point[..n].to_vec() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    CCD1,
    CCD1l,
    CCD2,
    CCD2l,
    CCD3,
    CCD3l,
    D2,
    D3,
}

impl Variant {
    pub const ALL: [Variant; 8] =
        [Variant::CCD1, Variant::CCD1l, Variant::CCD2, Variant::CCD2l, Variant::CCD3, Variant::CCD3l, Variant::D2, Variant::D3];

    pub fn loose(self) -> bool {
        matches!(self, Variant::CCD1l | Variant::CCD2l | Variant::CCD3l)
    }

    /// 1 for the Lagrange form, 2 and 3 for the Fenchel-Lagrange forms.
    pub fn form(self) -> u8 {
        match self {
            Variant::CCD1 | Variant::CCD1l => 1,
            Variant::CCD2 | Variant::CCD2l | Variant::D2 => 2,
            _ => 3,
        }
    }

    /// D2 and D3 treat `f + κ∘H` as the objective of a problem without a
    /// composite term.
    fn folded(self) -> bool {
        matches!(self, Variant::D2 | Variant::D3)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarDual {
    pub variant: Variant,
    pub status: LpStatus,
    pub value: f64,
    pub lambda1: Option<Vec<f64>>,
    pub lambda2: Vec<f64>,
    pub x_star: Option<Vec<f64>>,
    pub y_star: Option<Vec<f64>>,
}

/// Column layout of a dual LP.
struct Cols {
    sigma: usize,
    rho: usize,
    mu: usize,
    nu: usize,
    xs: Option<usize>,
    ys: Option<usize>,
    total: usize,
}

/// The dual value as one LP in the multipliers. Every conjugate of a
/// piecewise-linear function is itself an LP over convex weights:
/// `-f*(x*) = max { Σσ_i b_i : Σσ_i a_i = x*, σ in the simplex }`,
/// `-κ*(λ1) = max { Σρ_j d_j : Σρ_j c_j = λ1 }`,
/// `-i_C*(y*) = max { -Σν_k r_k : Σν_k e_k = y*, ν >= 0 }`, and
/// `λ2 = Σμ_s n_s` over the normals of S, which generate `S+`. The loose
/// variants add `<λ1, p> >= 0` for the generators `p` of P.
pub fn build_scalar_dual(inst: &ScalarInstance, variant: Variant) -> Result<ScalarDual> {
    let n = inst.n();
    let s = inst.s_cone()?;
    let s_dual: Vec<Vec<f64>> = s.normals().to_vec();
    let (f, comp) = if variant.folded() { (inst.objective(), None) } else { (PiecewiseLinear { pieces: inst.pieces.clone() }, inst.composite.as_ref()) };
    let nk = comp.map_or(0, |k| k.kappa.len());
    let form = variant.form();
    let mut at = 0;
    let mut take = |m: usize| {
        let s = at;
        at += m;
        s
    };
    let sigma = take(f.pieces.len());
    let rho = take(nk);
    let mu = take(s_dual.len());
    let nu = take(inst.c.len());
    let xs = (form >= 2).then(|| take(n));
    let ys = (form == 3).then(|| take(n));
    let cols = Cols { sigma, rho, mu, nu, xs, ys, total: at };

    let mut obj = vec![0.0; cols.total];
    for (i, (_, b)) in f.pieces.iter().enumerate() {
        obj[cols.sigma + i] = -b;
    }
    if let Some(k) = comp {
        for (j, (c, d)) in k.kappa.iter().enumerate() {
            obj[cols.rho + j] = -(dot(c, &k.h.b) + d);
        }
    }
    for (i, d) in s_dual.iter().enumerate() {
        obj[cols.mu + i] = -dot(d, &inst.g.b);
    }
    for (i, (_, r)) in inst.c.iter().enumerate() {
        obj[cols.nu + i] = *r;
    }
    let mut lp = Lp::new(cols.total).minimize(obj);
    for j in cols.xs.into_iter().chain(cols.ys) {
        (j..j + n).for_each(|c| lp.set_free(c));
    }

    // per-coordinate blocks of the balance equations
    let sigma_block = |row: &mut Vec<f64>, i: usize| {
        for (p, (a, _)) in f.pieces.iter().enumerate() {
            row[cols.sigma + p] += a[i];
        }
    };
    let lagrange_block = |row: &mut Vec<f64>, i: usize| {
        if let Some(k) = comp {
            for (j, (c, _)) in k.kappa.iter().enumerate() {
                row[cols.rho + j] += k.h.adjoint(c, n)[i];
            }
        }
        for (m, d) in s_dual.iter().enumerate() {
            row[cols.mu + m] += inst.g.adjoint(d, n)[i];
        }
    };
    let c_block = |row: &mut Vec<f64>, i: usize| {
        for (k, (e, _)) in inst.c.iter().enumerate() {
            row[cols.nu + k] += e[i];
        }
    };
    for i in 0..n {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        match form {
            1 => {
                let mut r = vec![0.0; cols.total];
                sigma_block(&mut r, i);
                lagrange_block(&mut r, i);
                c_block(&mut r, i);
                rows.push(r);
            }
            2 => {
                let xs = cols.xs.unwrap();
                let mut r = vec![0.0; cols.total];
                sigma_block(&mut r, i);
                r[xs + i] = -1.0;
                rows.push(r);
                let mut r = vec![0.0; cols.total];
                r[xs + i] = 1.0;
                lagrange_block(&mut r, i);
                c_block(&mut r, i);
                rows.push(r);
            }
            _ => {
                let (xs, ys) = (cols.xs.unwrap(), cols.ys.unwrap());
                let mut r = vec![0.0; cols.total];
                sigma_block(&mut r, i);
                r[xs + i] = -1.0;
                rows.push(r);
                let mut r = vec![0.0; cols.total];
                c_block(&mut r, i);
                r[ys + i] = -1.0;
                rows.push(r);
                let mut r = vec![0.0; cols.total];
                r[xs + i] = 1.0;
                r[ys + i] = 1.0;
                lagrange_block(&mut r, i);
                rows.push(r);
            }
        }
        for r in rows {
            lp.add(r, Relation::Eq, 0.0);
        }
    }
    let mut simplex = vec![0.0; cols.total];
    (cols.sigma..cols.sigma + f.pieces.len()).for_each(|j| simplex[j] = 1.0);
    lp.add(simplex, Relation::Eq, 1.0);
    if let Some(k) = comp {
        let mut simplex = vec![0.0; cols.total];
        (cols.rho..cols.rho + nk).for_each(|j| simplex[j] = 1.0);
        lp.add(simplex, Relation::Eq, 1.0);
        if variant.loose() {
            for g in k.p.build()?.generators() {
                let mut r = vec![0.0; cols.total];
                for (j, (c, _)) in k.kappa.iter().enumerate() {
                    r[cols.rho + j] = dot(c, g);
                }
                lp.add(r, Relation::Ge, 0.0);
            }
        }
    }
    let res = lp.solve()?;
    let x = &res.primal_point;
    let combine = |from: usize, vs: &[Vec<f64>], dim: usize| {
        let mut out = vec![0.0; dim];
        for (j, v) in vs.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(v) {
                *o += x[from + j] * a;
            }
        }
        out
    };
    let lambda1 = comp.map(|k| combine(cols.rho, &k.kappa.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(), k.h.b.len()));
    Ok(ScalarDual {
        variant,
        status: res.status,
        value: max_value(&res),
        lambda1,
        lambda2: combine(cols.mu, &s_dual, s.dim()),
        x_star: cols.xs.map(|j| x[j..j + n].to_vec()),
        y_star: cols.ys.map(|j| x[j..j + n].to_vec()),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct A2Probe {
    pub x_star: Vec<f64>,
    pub r: f64,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct A2Report {
    pub slater: bool,
    pub probes: Vec<A2Probe>,
    pub agree: usize,
    /// Every right-hand membership implied the left-hand one.
    pub superset_ok: bool,
    pub all_agree: bool,
}

/// `epi (f + i_A)* = epi f* + epi i_C* + ∪_{z* ∈ S+} epi (z*∘G)*` on probes
/// `(x*, r)`, with `f + κ∘H` in the role of `f`. The right-hand side is the
/// smallest `r1 + r2 + r3` over splits `x* = x1* + x2* + x3*` and
/// `z* = Σμ_s n_s`, found by one LP.
pub fn verify_a2(inst: &ScalarInstance, probes: &[(Vec<f64>, f64)]) -> Result<A2Report> {
    let n = inst.n();
    let f = inst.objective();
    let dom = inst.a_halfspaces()?;
    let s = inst.s_cone()?;
    let s_dual = s.normals();
    let mut out = Vec::new();
    for (x_star, r) in probes {
        if x_star.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x_star.len() });
        }
        let lhs_value = scalar_conjugate(&f, &dom, x_star)?;
        let (np, nc, ns) = (f.pieces.len(), inst.c.len(), s_dual.len());
        let mut obj = Vec::with_capacity(np + nc + ns);
        obj.extend(f.pieces.iter().map(|(_, b)| -b));
        obj.extend(inst.c.iter().map(|(_, r)| *r));
        obj.extend(s_dual.iter().map(|d| -dot(d, &inst.g.b)));
        let mut lp = Lp::new(np + nc + ns).minimize(obj);
        for i in 0..n {
            let mut row: Vec<f64> = f.pieces.iter().map(|(a, _)| a[i]).collect();
            row.extend(inst.c.iter().map(|(e, _)| e[i]));
            row.extend(s_dual.iter().map(|d| inst.g.adjoint(d, n)[i]));
            lp.add(row, Relation::Eq, x_star[i]);
        }
        let mut simplex = vec![0.0; np + nc + ns];
        simplex[..np].iter_mut().for_each(|v| *v = 1.0);
        lp.add(simplex, Relation::Eq, 1.0);
        let rhs_value = min_value(&lp.solve()?);
        let lhs = lhs_value <= r + MEMBER_TOL;
        let rhs = rhs_value <= r + MEMBER_TOL;
        out.push(A2Probe { x_star: x_star.clone(), r: *r, lhs_value, rhs_value, lhs, rhs });
    }
    let agree = out.iter().filter(|p| p.lhs == p.rhs).count();
    Ok(A2Report {
        slater: slater(inst)?.holds,
        superset_ok: out.iter().all(|p| !p.rhs || p.lhs),
        all_agree: agree == out.len(),
        agree,
        probes: out,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub x_star: Vec<f64>,
    pub conjugate_lp: f64,
    pub conjugate_vec: Option<f64>,
    pub primal_lp: f64,
    pub primal_vec: Option<f64>,
    pub epi_ok: bool,
    pub agree: bool,
}

const CROSS_STEP: f64 = 0.25;
/// Cap on the sample box where A is unbounded.
const CROSS_RADIUS: f64 = 8.0;

/// Coordinate bounds of `A`, clipped to `[-CROSS_RADIUS, CROSS_RADIUS]`.
fn bounding_box(dom: &[(Vec<f64>, f64)], n: usize) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut ends = [0.0; 2];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            let mut c = vec![0.0; n];
            c[j] = sign;
            let mut lp = Lp::new(n).minimize(c).all_free();
            for (e, r) in dom {
                lp.add(e.clone(), Relation::Le, *r);
            }
            ends[k] = sign * min_value(&lp.solve()?);
        }
        out.push((ends[0].max(-CROSS_RADIUS), ends[1].min(CROSS_RADIUS)));
    }
    Ok(out)
}

/// `f + κ∘H + i_A` tabulated with `K = R_+` on a lattice of step
/// `CROSS_STEP` through `centre` that covers the bounding box of `A` with one
/// unit to spare, so the finite samples stay clear of the lattice edge.
fn embed(inst: &ScalarInstance, centre: &[f64]) -> Result<SampledMap> {
    let f = inst.objective();
    let dom = inst.a_halfspaces()?;
    let bounds = bounding_box(&dom, centre.len())?;
    let axes = centre
        .iter()
        .zip(&bounds)
        .map(|(c, (lo, hi))| {
            let k0 = ((lo - 1.0 - c) / CROSS_STEP).floor() as i64;
            let k1 = ((hi + 1.0 - c) / CROSS_STEP).ceil() as i64;
            (k0..=k1).map(|k| c + k as f64 * CROSS_STEP).collect()
        })
        .collect();
    let k = PolyhedralCone::orthant(1);
    SampledMap::tabulate(Lattice::new(axes)?, &k, |x| {
        if dom.iter().all(|(e, r)| dot(e, x) <= r + MEMBER_TOL) {
            ExtendedPoint::Finite(vec![f.eval(x)])
        } else {
            ExtendedPoint::PlusInf
        }
    })
}

/// Re-derive the conjugate at `x_star` and the primal value through the
/// sampled vector path with `m = 1`. Each sample box is centred on the LP
/// optimizer, so the sampled supremum and infimum are exact and must match
/// the LP values within [`VALUE_TOL`]. The epigraph test is also checked on
/// both sides of the conjugate value.
pub fn scalar_crosscheck(inst: &ScalarInstance, x_star: &[f64]) -> Result<CrossCheck> {
    let n = inst.n();
    let f = inst.objective();
    let dom = inst.a_halfspaces()?;
    let cres = conjugate_lp(&f, &dom, x_star)?;
    let conjugate_lp_value = max_value(&cres);
    let pres = primal(inst)?;
    let mut out = CrossCheck {
        x_star: x_star.to_vec(),
        conjugate_lp: conjugate_lp_value,
        conjugate_vec: None,
        primal_lp: pres.value,
        primal_vec: None,
        epi_ok: false,
        agree: false,
    };
    if cres.status != LpStatus::Optimal || pres.status != LpStatus::Optimal {
        return Ok(out);
    }
    let map = embed(inst, &cres.primal_point[..n])?;
    let l = LinOp::from_rows(vec![x_star.to_vec()])?;
    let front = conjugate(&map, &l)?;
    out.conjugate_vec = front.generators().first().map(|g| g[0]);
    out.epi_ok = epi_membership(&map, &l, &[conjugate_lp_value + 1e-3])? && !epi_membership(&map, &l, &[conjugate_lp_value - 1e-3])?;
    let pmap = embed(inst, &pres.x)?;
    let vals: Vec<Vec<f64>> = pmap.dom().map(|i| pmap.finite_value(i).unwrap().to_vec()).collect();
    out.primal_vec = winf(&vals, pmap.cone())?.generators().first().map(|g| g[0]);
    let close = |a: Option<f64>, b: f64| a.is_some_and(|a| (a - b).abs() <= VALUE_TOL);
    out.agree = out.epi_ok && close(out.conjugate_vec, conjugate_lp_value) && close(out.primal_vec, pres.value);
    Ok(out)
}

#[cfg(test)]
mod tests;
