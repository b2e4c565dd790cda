//! Weak suprema and infima of finite sets, the set order `≼_K`, the WS-sum,
//! the ⊞-sum of extended-epigraph collections and the flattening map Ψ.
//!
//! A finitely generated front is stored through its generators only. For a
//! finite `M` the closure of `M - int K` is `M - K`, so
//!
//! ```text
//! y ∈ WSup M  <=>  (∃ m: y ∈ m - K) and (∀ m: y ∉ m - int K)
//! ```
//!
//! and every membership question is a finite check against the normals of K.

use serde::{Serialize, Serializer};

use crate::cone_order::{PolyhedralCone, Region, TOL_STRICT};
use crate::error::{Error, Result};
use crate::linalg::{add, dot, lex_cmp, neg, norm_inf, sub};
use crate::mappings::LinOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrontKind {
    #[serde(rename = "sup")]
    Sup,
    #[serde(rename = "inf")]
    Inf,
    #[serde(rename = "+inf")]
    PlusInfinity,
    #[serde(rename = "-inf")]
    MinusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    Below,
    On,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontSet {
    kind: FrontKind,
    generators: Vec<Vec<f64>>,
    cone: PolyhedralCone,
}

impl Serialize for FrontSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FrontSet", 2)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("generators", &self.generators)?;
        st.end()
    }
}

impl FrontSet {
    pub fn plus_infinity(cone: &PolyhedralCone) -> Self {
        FrontSet { kind: FrontKind::PlusInfinity, generators: Vec::new(), cone: cone.clone() }
    }

    pub fn minus_infinity(cone: &PolyhedralCone) -> Self {
        FrontSet { kind: FrontKind::MinusInfinity, generators: Vec::new(), cone: cone.clone() }
    }

    /// `-bd K`, the neutral element of the WS-sum.
    pub fn neg_boundary(cone: &PolyhedralCone) -> Self {
        wsup(&[vec![0.0; cone.dim()]], cone).expect("nonempty")
    }

    pub fn kind(&self) -> FrontKind {
        self.kind
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FrontKind::Sup | FrontKind::Inf)
    }

    /// `-U`: a sup front becomes an inf front over the negated generators.
    pub fn negate(&self) -> Self {
        let kind = match self.kind {
            FrontKind::Sup => FrontKind::Inf,
            FrontKind::Inf => FrontKind::Sup,
            FrontKind::PlusInfinity => FrontKind::MinusInfinity,
            FrontKind::MinusInfinity => FrontKind::PlusInfinity,
        };
        FrontSet { kind, generators: self.generators.iter().map(|g| neg(g)).collect(), cone: self.cone.clone() }
    }

    /// Front from generators already free of strictly dominated points.
    pub(crate) fn from_pruned(kind: FrontKind, mut generators: Vec<Vec<f64>>, cone: &PolyhedralCone) -> Self {
        generators.sort_by(|a, b| lex_cmp(a, b));
        generators.dedup_by(|a, b| norm_inf(&sub(a, b)) <= 1e-12);
        FrontSet { kind, generators, cone: cone.clone() }
    }

    /// `y + U`.
    pub fn translate(&self, y: &[f64]) -> Self {
        FrontSet {
            kind: self.kind,
            generators: self.generators.iter().map(|g| add(g, y)).collect(),
            cone: self.cone.clone(),
        }
    }
}

fn check_points(points: &[Vec<f64>], cone: &PolyhedralCone) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Empty("generator set"));
    }
    for p in points {
        cone.check(p)?;
    }
    Ok(())
}

/// Coordinates `(n_i'p)_i` against the normals of K; K maps onto the
/// nonnegative orthant in these coordinates.
pub(crate) fn transformed(p: &[f64], cone: &PolyhedralCone) -> Vec<f64> {
    cone.normals().iter().map(|n| dot(n, p)).collect()
}

/// Staircase of a 2D point set in transformed coordinates, sorted by the
/// first coordinate descending with a running maximum of the second.
pub(crate) struct Stair {
    a: Vec<f64>,
    best_b: Vec<f64>,
}

impl Stair {
    pub(crate) fn new(pts: &[[f64; 2]]) -> Self {
        let mut v: Vec<[f64; 2]> = pts.to_vec();
        v.sort_by(|p, q| q[0].total_cmp(&p[0]));
        let mut best = f64::NEG_INFINITY;
        let best_b = v
            .iter()
            .map(|p| {
                best = best.max(p[1]);
                best
            })
            .collect();
        Stair { a: v.iter().map(|p| p[0]).collect(), best_b }
    }

    /// Some point `q` with `q >= p - tol` componentwise.
    pub(crate) fn covers(&self, p: [f64; 2], tol: f64) -> bool {
        let n = self.a.partition_point(|&a| a >= p[0] - tol);
        n > 0 && self.best_b[n - 1] >= p[1] - tol
    }

    /// Some point `q` with `q > p + tol` componentwise.
    pub(crate) fn strictly_above(&self, p: [f64; 2], tol: f64) -> bool {
        let n = self.a.partition_point(|&a| a > p[0] + tol);
        n > 0 && self.best_b[n - 1] > p[1] + tol
    }
}

/// Drop points strictly dominated by another point (upward: dominated from
/// above, as for a supremum) and duplicates, then sort lexicographically.
fn canonical(points: &[Vec<f64>], cone: &PolyhedralCone, upward: bool) -> Vec<Vec<f64>> {
    let sign = if upward { 1.0 } else { -1.0 };
    let t: Vec<Vec<f64>> = points.iter().map(|p| transformed(p, cone).iter().map(|v| sign * v).collect()).collect();
    let keep: Vec<bool> = if cone.normals().len() == 2 {
        let tt: Vec<[f64; 2]> = t.iter().map(|v| [v[0], v[1]]).collect();
        let stair = Stair::new(&tt);
        tt.iter().map(|p| !stair.strictly_above(*p, TOL_STRICT)).collect()
    } else {
        // a dominator has a larger coordinate sum, so it is visited first
        let mut order: Vec<usize> = (0..points.len()).collect();
        let sum = |i: usize| t[i].iter().sum::<f64>();
        order.sort_by(|&i, &j| sum(j).total_cmp(&sum(i)));
        let mut kept: Vec<usize> = Vec::new();
        let mut keep = vec![false; points.len()];
        for i in order {
            let dominated = kept.iter().any(|&j| t[j].iter().zip(&t[i]).all(|(q, p)| q - p > TOL_STRICT));
            if !dominated {
                kept.push(i);
                keep[i] = true;
            }
        }
        keep
    };
    let mut out: Vec<Vec<f64>> = points.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p.clone()).collect();
    out.sort_by(|a, b| lex_cmp(a, b));
    out.dedup_by(|a, b| norm_inf(&sub(a, b)) <= 1e-12);
    out
}

/// `WSup M = (M - K) \ (M - int K)`.
pub fn wsup(m: &[Vec<f64>], cone: &PolyhedralCone) -> Result<FrontSet> {
    check_points(m, cone)?;
    Ok(FrontSet { kind: FrontKind::Sup, generators: canonical(m, cone, true), cone: cone.clone() })
}

/// `WInf M = (M + K) \ (M + int K) = -WSup(-M)`.
pub fn winf(m: &[Vec<f64>], cone: &PolyhedralCone) -> Result<FrontSet> {
    check_points(m, cone)?;
    Ok(FrontSet { kind: FrontKind::Inf, generators: canonical(m, cone, false), cone: cone.clone() })
}

/// Members of `M` lying on `WInf M`.
pub fn wmin(m: &[Vec<f64>], cone: &PolyhedralCone) -> Result<Vec<Vec<f64>>> {
    let f = winf(m, cone)?;
    Ok(m.iter().filter(|p| front_contains_unchecked(&f, p)).cloned().collect())
}

/// Members of `M` lying on `WSup M`.
pub fn wmax(m: &[Vec<f64>], cone: &PolyhedralCone) -> Result<Vec<Vec<f64>>> {
    let f = wsup(m, cone)?;
    Ok(m.iter().filter(|p| front_contains_unchecked(&f, p)).cloned().collect())
}

fn in_lower(gens: &[Vec<f64>], y: &[f64], cone: &PolyhedralCone, region: Region) -> bool {
    gens.iter().any(|g| cone.contains_unchecked(&sub(g, y), region))
}

fn in_upper(gens: &[Vec<f64>], y: &[f64], cone: &PolyhedralCone, region: Region) -> bool {
    gens.iter().any(|g| cone.contains_unchecked(&sub(y, g), region))
}

pub fn front_contains(front: &FrontSet, y: &[f64]) -> Result<bool> {
    front.cone.check(y)?;
    Ok(front_contains_unchecked(front, y))
}

pub(crate) fn front_contains_unchecked(front: &FrontSet, y: &[f64]) -> bool {
    let (g, k) = (&front.generators, &front.cone);
    match front.kind {
        FrontKind::Sup => in_lower(g, y, k, Region::Closed) && !in_lower(g, y, k, Region::Interior),
        FrontKind::Inf => in_upper(g, y, k, Region::Closed) && !in_upper(g, y, k, Region::Interior),
        _ => false,
    }
}

/// Parameter `t` with `y - t k0` on `WSup M`, where `k0` is the canonical
/// interior direction. Negative below the front, zero on it, positive above.
fn sup_offset(gens: &[Vec<f64>], y: &[f64], cone: &PolyhedralCone) -> f64 {
    let k0 = cone.interior_point();
    gens.iter()
        .map(|m| {
            let d = sub(y, m);
            cone.normals().iter().map(|n| dot(n, &d) / dot(n, &k0)).fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// The three membership predicates `(y ∈ U - int K, y ∈ U, y ∈ U + int K)`,
/// each evaluated on its own so that the decomposition can be audited.
pub fn labels(front: &FrontSet, y: &[f64]) -> Result<[bool; 3]> {
    front.cone.check(y)?;
    let k = &front.cone;
    match front.kind {
        FrontKind::Sup => {
            let below = in_lower(&front.generators, y, k, Region::Interior);
            let on = front_contains_unchecked(front, y);
            // witness u = y - t k0 on the front with y - u ∈ int K
            let t = sup_offset(&front.generators, y, k);
            let u: Vec<f64> = y.iter().zip(k.interior_point()).map(|(a, b)| a - t * b).collect();
            let above = front_contains_unchecked(front, &u) && k.contains_unchecked(&sub(y, &u), Region::Interior);
            Ok([below, on, above])
        }
        FrontKind::Inf => {
            let mirror = front.negate();
            let [b, o, a] = labels(&mirror, &neg(y))?;
            Ok([a, o, b])
        }
        _ => Err(Error::InfiniteFront("classify")),
    }
}

/// Three-way position of `y` relative to a finite front.
pub fn classify(front: &FrontSet, y: &[f64]) -> Result<Label> {
    front.cone.check(y)?;
    let (g, k) = (&front.generators, &front.cone);
    match front.kind {
        FrontKind::Sup => Ok(if in_lower(g, y, k, Region::Interior) {
            Label::Below
        } else if in_lower(g, y, k, Region::Closed) {
            Label::On
        } else {
            Label::Above
        }),
        FrontKind::Inf => Ok(if in_upper(g, y, k, Region::Interior) {
            Label::Above
        } else if in_upper(g, y, k, Region::Closed) {
            Label::On
        } else {
            Label::Below
        }),
        _ => Err(Error::InfiniteFront("classify")),
    }
}

/// Sets exposing the three regions of the partition test.
pub trait ThreeWay {
    fn dim(&self) -> usize;
    fn regions(&self, y: &[f64]) -> [bool; 3];
}

impl ThreeWay for FrontSet {
    fn dim(&self) -> usize {
        self.cone.dim()
    }

    fn regions(&self, y: &[f64]) -> [bool; 3] {
        labels(self, y).unwrap_or([false; 3])
    }
}

/// `M - K` for finite `M`; not of partition style since `M - K + int K = Y`.
#[derive(Debug, Clone)]
pub struct LowerSet {
    pub generators: Vec<Vec<f64>>,
    pub cone: PolyhedralCone,
}

impl ThreeWay for LowerSet {
    fn dim(&self) -> usize {
        self.cone.dim()
    }

    fn regions(&self, y: &[f64]) -> [bool; 3] {
        let below = in_lower(&self.generators, y, &self.cone, Region::Interior);
        let on = in_lower(&self.generators, y, &self.cone, Region::Closed);
        [below, on, true]
    }
}

/// True iff every probe gets exactly one of the three labels.
pub fn is_partition_style<S: ThreeWay>(set: &S, probes: &ProbeGrid) -> bool {
    probes.points().all(|y| set.regions(&y).iter().filter(|b| **b).count() == 1)
}

/// Operand of [`precedes`]: a front or a plain finite set.
#[derive(Debug, Clone, Copy)]
pub enum SetRef<'a> {
    Front(&'a FrontSet),
    Points(&'a [Vec<f64>]),
}

/// `A ≼_K B`, i.e. no element of `B` lies strictly below an element of `A`.
///
/// For finitely generated fronts the test is exact:
/// `WSup M ≼ WSup N <=> M ⊂ N - K`, `WInf M ≼ WInf N <=> N ⊂ M + K`,
/// `WSup M ≼ WInf N <=> no n <_K m`, and `WInf M ≼ WSup N` fails whenever
/// the dimension exceeds one because sup fronts have tails along `-bd K`.
pub fn precedes(a: SetRef, b: SetRef, cone: &PolyhedralCone) -> Result<bool> {
    use FrontKind::*;
    let kind = |s: &SetRef| match s {
        SetRef::Front(f) => Some(f.kind),
        SetRef::Points(_) => None,
    };
    match (kind(&a), kind(&b)) {
        (Some(PlusInfinity), Some(MinusInfinity)) | (Some(MinusInfinity), Some(PlusInfinity)) => {
            return Err(Error::MixedInfinity)
        }
        (Some(MinusInfinity), _) | (_, Some(PlusInfinity)) => return Ok(true),
        (Some(PlusInfinity), _) | (_, Some(MinusInfinity)) => return Ok(false),
        _ => {}
    }
    for s in [&a, &b] {
        let pts = match s {
            SetRef::Front(f) => {
                if f.cone != *cone {
                    return Err(Error::ConeMismatch);
                }
                &f.generators
            }
            SetRef::Points(p) => *p,
        };
        check_points(pts, cone)?;
    }
    let k = cone;
    let lt = |p: &Vec<f64>, q: &Vec<f64>| k.contains_unchecked(&sub(q, p), Region::Interior);
    Ok(match (a, b) {
        (SetRef::Points(p), SetRef::Points(q)) => q.iter().all(|v| p.iter().all(|u| !lt(v, u))),
        (SetRef::Front(f), SetRef::Points(q)) => match f.kind {
            Sup => q.iter().all(|v| !in_lower(&f.generators, v, k, Region::Interior)),
            _ => q.iter().all(|v| in_upper(&f.generators, v, k, Region::Closed)),
        },
        (SetRef::Points(p), SetRef::Front(f)) => match f.kind {
            Sup => p.iter().all(|u| classify(f, u).map(|l| l != Label::Above).unwrap_or(false)),
            _ => p.iter().all(|u| !in_upper(&f.generators, u, k, Region::Interior)),
        },
        (SetRef::Front(f), SetRef::Front(g)) => match (f.kind, g.kind) {
            (Sup, Sup) => all_covered(&f.generators, &g.generators, k, 1.0),
            (Inf, Inf) => all_covered(&g.generators, &f.generators, k, -1.0),
            (Sup, Inf) => !any_strictly_below(&g.generators, &f.generators, k),
            // in one dimension each front is a single point
            _ => k.dim() == 1 && !lt(&g.generators[0], &f.generators[0]),
        },
    })
}

/// Every `p` has some `q` with `p <=_K q` (`sign = 1`) or `q <=_K p` (`sign = -1`).
fn all_covered(ps: &[Vec<f64>], qs: &[Vec<f64>], cone: &PolyhedralCone, sign: f64) -> bool {
    let tf = |v: &Vec<f64>| -> Vec<f64> { transformed(v, cone).iter().map(|x| sign * x).collect() };
    let tq: Vec<Vec<f64>> = qs.iter().map(tf).collect();
    if cone.normals().len() == 2 {
        let stair = Stair::new(&tq.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>());
        ps.iter().map(tf).all(|p| stair.covers([p[0], p[1]], TOL_STRICT))
    } else {
        ps.iter().map(tf).all(|p| tq.iter().any(|q| q.iter().zip(&p).all(|(a, b)| a - b >= -TOL_STRICT)))
    }
}

/// Some `p` with `p <_K q` for some `q`.
fn any_strictly_below(ps: &[Vec<f64>], qs: &[Vec<f64>], cone: &PolyhedralCone) -> bool {
    let tq: Vec<Vec<f64>> = qs.iter().map(|v| transformed(v, cone)).collect();
    if cone.normals().len() == 2 {
        let stair = Stair::new(&tq.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>());
        ps.iter().any(|p| {
            let t = transformed(p, cone);
            stair.strictly_above([t[0], t[1]], TOL_STRICT)
        })
    } else {
        ps.iter().any(|p| {
            let t = transformed(p, cone);
            tq.iter().any(|q| q.iter().zip(&t).all(|(a, b)| a - b > TOL_STRICT))
        })
    }
}

/// `U ⊎ V = WSup(U + V)`, computed from pairwise generator sums.
pub fn ws_sum(u: &FrontSet, v: &FrontSet) -> Result<FrontSet> {
    if u.cone != v.cone {
        return Err(Error::ConeMismatch);
    }
    match (u.kind, v.kind) {
        (FrontKind::PlusInfinity, _) | (_, FrontKind::PlusInfinity) => Ok(FrontSet::plus_infinity(&u.cone)),
        (FrontKind::Sup, FrontKind::Sup) => {
            let mut sums = Vec::with_capacity(u.generators.len() * v.generators.len());
            for a in &u.generators {
                for b in &v.generators {
                    sums.push(add(a, b));
                }
            }
            wsup(&sums, &u.cone)
        }
        _ => Err(Error::InfiniteFront("ws_sum operand must be a sup front or +inf")),
    }
}

/// Element `(L, U)` of an extended epigraph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtEpiElement {
    pub operator: LinOp,
    pub front: FrontSet,
}

/// `A ⊞ B = {(L1 + L2, U1 ⊎ U2)}`, deduplicated.
pub fn boxplus(a: &[ExtEpiElement], b: &[ExtEpiElement]) -> Result<Vec<ExtEpiElement>> {
    let mut out: Vec<ExtEpiElement> = Vec::new();
    for x in a {
        for y in b {
            let e = ExtEpiElement { operator: x.operator.add(&y.operator)?, front: ws_sum(&x.front, &y.front)? };
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    Ok(out)
}

/// Ψ applied to a collection: `(L, y)` belongs when some element `(L, U)`
/// has `y` on or above `U`.
#[derive(Debug, Clone)]
pub struct Psi<'a> {
    elements: &'a [ExtEpiElement],
}

pub fn psi(elements: &[ExtEpiElement]) -> Psi<'_> {
    Psi { elements }
}

impl Psi<'_> {
    pub fn contains(&self, l: &LinOp, y: &[f64]) -> bool {
        self.elements.iter().any(|e| {
            e.operator == *l
                && e.front.is_finite()
                && matches!(classify(&e.front, y), Ok(Label::On) | Ok(Label::Above))
        })
    }
}

/// Axis-aligned probe lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeGrid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub per_axis: usize,
}

impl ProbeGrid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, per_axis: usize) -> Self {
        assert_eq!(lo.len(), hi.len());
        ProbeGrid { lo, hi, per_axis }
    }

    /// Square window `[lo, hi]^dim` sampled at `step`.
    pub fn window(dim: usize, lo: f64, hi: f64, step: f64) -> Self {
        let n = if hi < lo { 0 } else { ((hi - lo) / step).round() as usize + 1 };
        ProbeGrid::new(vec![lo; dim], vec![hi; dim], n)
    }

    /// Bounding box of the points inflated by 2 units, 101 points per axis in
    /// dimension 1 and 2, 41 in dimension 3 and 15 in dimension 4.
    pub fn around(points: &[Vec<f64>], dim: usize) -> Self {
        let per_axis = match dim {
            1 | 2 => 101,
            3 => 41,
            _ => 15,
        };
        Self::around_with(points, dim, per_axis)
    }

    pub fn around_with(points: &[Vec<f64>], dim: usize, per_axis: usize) -> Self {
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in points {
            for i in 0..dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        if points.is_empty() {
            lo = vec![0.0; dim];
            hi = vec![0.0; dim];
        }
        ProbeGrid::new(lo.iter().map(|v| v - 2.0).collect(), hi.iter().map(|v| v + 2.0).collect(), per_axis)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coord(&self, axis: usize, i: usize) -> f64 {
        if self.per_axis == 1 {
            return self.lo[axis];
        }
        let t = i as f64 / (self.per_axis - 1) as f64;
        let v = self.lo[axis] + t * (self.hi[axis] - self.lo[axis]);
        let r = (v * 1e9).round() / 1e9;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    }

    /// Points in row-major order, last axis fastest.
    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let d = self.dim();
        (0..self.len()).map(move |mut idx| {
            let mut p = vec![0.0; d];
            for axis in (0..d).rev() {
                p[axis] = self.coord(axis, idx % self.per_axis);
                idx /= self.per_axis;
            }
            p
        })
    }

    /// Short identifier embedded in reports.
    pub fn id(&self) -> String {
        let f = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        format!("lattice[{}]..[{}]x{}", f(&self.lo), f(&self.hi), self.per_axis)
    }
}

/// Probe-set equality plus mutual generator membership.
pub fn fronts_equal_on(a: &FrontSet, b: &FrontSet, probes: &ProbeGrid) -> bool {
    if a.kind != b.kind {
        return false;
    }
    if !a.is_finite() {
        return true;
    }
    let gens = a.generators.iter().all(|g| front_contains_unchecked(b, g))
        && b.generators.iter().all(|g| front_contains_unchecked(a, g));
    gens && probes.points().all(|y| front_contains_unchecked(a, &y) == front_contains_unchecked(b, &y))
}

/// Probe points where two fronts disagree, for diagnostics.
pub fn front_mismatches(a: &FrontSet, b: &FrontSet, probes: &ProbeGrid) -> Vec<Vec<f64>> {
    probes.points().filter(|y| front_contains_unchecked(a, y) != front_contains_unchecked(b, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> PolyhedralCone {
        PolyhedralCone::orthant(2)
    }

    /// Independent oracle for `WSup M` membership on R^2_+: coordinatewise
    /// comparisons only, no cone machinery.
    fn orth_sup_member(m: &[Vec<f64>], y: &[f64]) -> bool {
        let le = m.iter().any(|p| y[0] <= p[0] && y[1] <= p[1]);
        let lt = m.iter().any(|p| y[0] < p[0] && y[1] < p[1]);
        le && !lt
    }

    fn grid() -> ProbeGrid {
        ProbeGrid::window(2, -3.0, 3.0, 0.05)
    }

    #[test]
    fn wsup_of_origin_is_negative_boundary() {
        let f = wsup(&[vec![0.0, 0.0]], &k2()).unwrap();
        assert!(front_contains(&f, &[-2.0, 0.0]).unwrap());
        assert!(front_contains(&f, &[0.0, 0.0]).unwrap());
        assert!(!front_contains(&f, &[-1.0, -1.0]).unwrap());
        assert_eq!(classify(&f, &[-1.0, -1.0]).unwrap(), Label::Below);
        assert_eq!(classify(&f, &[0.0, -0.5]).unwrap(), Label::On);
        assert_eq!(classify(&f, &[1.0, 1.0]).unwrap(), Label::Above);
    }

    #[test]
    fn staircase_matches_grid_oracle() {
        let m = vec![vec![0.0, 0.0], vec![1.0, -1.0]];
        let f = wsup(&m, &k2()).unwrap();
        for (y, want) in [
            ([0.0, -0.5], true),
            ([0.5, -1.0], true),
            ([1.0, -2.0], true),
            ([0.5, -0.5], false),
            ([-1.0, 0.0], true),
        ] {
            assert_eq!(front_contains(&f, &y).unwrap(), want, "{y:?}");
        }
        for y in grid().points() {
            assert_eq!(front_contains(&f, &y).unwrap(), orth_sup_member(&m, &y), "{y:?}");
        }
        assert_eq!(classify(&f, &[2.0, 0.0]).unwrap(), Label::Above);
    }

    #[test]
    fn incomparable_generators_survive_pruning() {
        let m = vec![vec![0.0, 0.0], vec![0.5, -0.2]];
        let f = wsup(&m, &k2()).unwrap();
        assert_eq!(f.generators().len(), 2);
        for y in grid().points() {
            assert_eq!(front_contains(&f, &y).unwrap(), orth_sup_member(&m, &y), "{y:?}");
        }
        let dominated = wsup(&[vec![0.0, 0.0], vec![-1.0, -1.0]], &k2()).unwrap();
        assert_eq!(dominated.generators(), &[vec![0.0, 0.0]]);
    }

    #[test]
    fn winf_examples() {
        let f = winf(&[vec![0.0, 0.0]], &k2()).unwrap();
        assert!(front_contains(&f, &[2.0, 0.0]).unwrap());
        assert!(!front_contains(&f, &[1.0, 1.0]).unwrap());
        let m = vec![vec![0.0, 0.0], vec![-1.0, 1.0]];
        let f = winf(&m, &k2()).unwrap();
        let neg_m: Vec<Vec<f64>> = m.iter().map(|p| neg(p)).collect();
        for y in grid().points() {
            assert_eq!(front_contains(&f, &y).unwrap(), orth_sup_member(&neg_m, &neg(&y)), "{y:?}");
        }
    }

    #[test]
    fn weak_min_and_max() {
        let k = k2();
        assert_eq!(wmin(&[vec![0.0, 0.0], vec![1.0, 1.0]], &k).unwrap(), vec![vec![0.0, 0.0]]);
        let m = vec![vec![0.0, 0.0], vec![1.0, -1.0]];
        assert_eq!(wmax(&m, &k).unwrap(), m);
        assert_eq!(wmin(&[vec![0.0, 0.0]], &k).unwrap(), wmax(&[vec![0.0, 0.0]], &k).unwrap());
        assert!(wsup(&[], &k).is_err());
    }

    #[test]
    fn infinite_fronts() {
        let k = k2();
        let p = FrontSet::plus_infinity(&k);
        assert!(!front_contains(&p, &[0.0, 0.0]).unwrap());
        assert!(classify(&p, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn classify_partitions_dense_grid() {
        let m = vec![vec![0.0, 0.0], vec![1.0, -1.0]];
        let f = wsup(&m, &k2()).unwrap();
        let probes = ProbeGrid::window(2, -3.0, 3.0, 0.06);
        assert_eq!(probes.len(), 101 * 101);
        assert!(is_partition_style(&f, &probes));
        assert!(is_partition_style(&winf(&m, &k2()).unwrap(), &probes));
        assert!(is_partition_style(&FrontSet::neg_boundary(&k2()), &probes));
        assert!(!is_partition_style(&LowerSet { generators: m, cone: k2() }, &probes));
    }

    #[test]
    fn precedes_examples() {
        let k = k2();
        let a = FrontSet::neg_boundary(&k);
        assert!(precedes(SetRef::Front(&a), SetRef::Points(&[vec![1.0, 1.0]]), &k).unwrap());
        assert!(!precedes(SetRef::Points(&[vec![0.0, 0.0]]), SetRef::Points(&[vec![-1.0, -1.0]]), &k).unwrap());
        let b = wsup(&[vec![1.0, -1.0]], &k).unwrap();
        assert!(!precedes(SetRef::Front(&a), SetRef::Front(&b), &k).unwrap());
        let c = wsup(&[vec![1.0, 1.0]], &k).unwrap();
        assert!(precedes(SetRef::Front(&a), SetRef::Front(&c), &k).unwrap());
        let p = FrontSet::plus_infinity(&k);
        let n = FrontSet::minus_infinity(&k);
        assert!(precedes(SetRef::Front(&a), SetRef::Front(&p), &k).unwrap());
        assert!(precedes(SetRef::Front(&n), SetRef::Front(&a), &k).unwrap());
        assert_eq!(precedes(SetRef::Front(&p), SetRef::Front(&n), &k), Err(Error::MixedInfinity));
    }

    /// Grid oracle for `A ≼ B`: any probe of B's front inside A - int K
    /// refutes the relation.
    fn refuted_on_grid(a: &FrontSet, b: &FrontSet, probes: &ProbeGrid) -> bool {
        probes.points().any(|y| {
            front_contains_unchecked(b, &y) && matches!(labels(a, &y), Ok([true, false, false]))
        })
    }

    #[test]
    fn precedes_agrees_with_grid_refutation() {
        let k = k2();
        let sets = [
            vec![vec![0.0, 0.0]],
            vec![vec![1.0, 1.0]],
            vec![vec![0.0, 0.0], vec![1.0, -1.0]],
            vec![vec![-1.0, 1.0], vec![0.5, 0.5]],
            vec![vec![2.0, -2.0]],
        ];
        let probes = ProbeGrid::window(2, -6.0, 6.0, 0.05);
        for m in &sets {
            for n in &sets {
                for (fa, fb) in [
                    (wsup(m, &k).unwrap(), wsup(n, &k).unwrap()),
                    (winf(m, &k).unwrap(), winf(n, &k).unwrap()),
                    (wsup(m, &k).unwrap(), winf(n, &k).unwrap()),
                    (winf(m, &k).unwrap(), wsup(n, &k).unwrap()),
                ] {
                    let exact = precedes(SetRef::Front(&fa), SetRef::Front(&fb), &k).unwrap();
                    assert_eq!(exact, !refuted_on_grid(&fa, &fb, &probes), "{m:?} {n:?} {:?}", (fa.kind, fb.kind));
                }
            }
        }
    }

    #[test]
    fn one_dimensional_fronts_are_points() {
        let k = PolyhedralCone::orthant(1);
        let f = wsup(&[vec![1.0], vec![3.0], vec![-2.0]], &k).unwrap();
        assert_eq!(f.generators(), &[vec![3.0]]);
        assert!(front_contains(&f, &[3.0]).unwrap());
        assert!(!front_contains(&f, &[2.0]).unwrap());
        let g = winf(&[vec![1.0], vec![3.0]], &k).unwrap();
        assert!(precedes(SetRef::Front(&g), SetRef::Front(&f), &k).unwrap());
        assert!(!precedes(SetRef::Front(&f), SetRef::Front(&g), &k).unwrap());
    }

    #[test]
    fn ws_sum_examples() {
        let k = k2();
        let u = wsup(&[vec![0.0, 0.0], vec![1.0, -1.0]], &k).unwrap();
        let nb = FrontSet::neg_boundary(&k);
        assert_eq!(ws_sum(&u, &nb).unwrap(), u);
        let a = wsup(&[vec![0.0, 0.0]], &k).unwrap();
        let b = wsup(&[vec![1.0, -1.0]], &k).unwrap();
        assert_eq!(ws_sum(&a, &b).unwrap(), b);
        let v = wsup(&[vec![0.0, 0.0], vec![-1.0, 1.0]], &k).unwrap();
        let s = ws_sum(&u, &v).unwrap();
        let sums = vec![vec![0.0, 0.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![0.0, 0.0]];
        for y in grid().points() {
            assert_eq!(front_contains(&s, &y).unwrap(), orth_sup_member(&sums, &y));
        }
        assert_eq!(ws_sum(&u, &FrontSet::plus_infinity(&k)).unwrap().kind(), FrontKind::PlusInfinity);
        let other = PolyhedralCone::from_generators(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(ws_sum(&u, &FrontSet::neg_boundary(&other)), Err(Error::ConeMismatch));
    }

    #[test]
    fn boxplus_examples() {
        let k = k2();
        let zero = LinOp::zeros(2, 1);
        let l = LinOp::from_rows(vec![vec![1.0], vec![2.0]]).unwrap();
        let neutral = vec![ExtEpiElement { operator: zero.clone(), front: FrontSet::neg_boundary(&k) }];
        let b = vec![
            ExtEpiElement { operator: l.clone(), front: wsup(&[vec![1.0, 0.0]], &k).unwrap() },
            ExtEpiElement { operator: zero.clone(), front: wsup(&[vec![0.0, 2.0], vec![1.0, 1.0]], &k).unwrap() },
            ExtEpiElement { operator: l.clone(), front: wsup(&[vec![3.0, 3.0]], &k).unwrap() },
        ];
        assert_eq!(boxplus(&neutral, &b).unwrap(), b);
        let a = vec![neutral[0].clone(), ExtEpiElement { operator: l.clone(), front: wsup(&[vec![0.0, 1.0]], &k).unwrap() }];
        assert!(boxplus(&a, &b).unwrap().len() <= 6);
    }

    #[test]
    fn boxplus_scalar_is_minkowski_sum() {
        // m = 1: fronts are numbers, ⊎ adds them
        let k = PolyhedralCone::orthant(1);
        let op = |v: f64| LinOp::from_rows(vec![vec![v]]).unwrap();
        let a = vec![ExtEpiElement { operator: op(1.0), front: wsup(&[vec![2.0]], &k).unwrap() }];
        let b = vec![
            ExtEpiElement { operator: op(0.5), front: wsup(&[vec![-1.0]], &k).unwrap() },
            ExtEpiElement { operator: op(2.0), front: wsup(&[vec![4.0]], &k).unwrap() },
        ];
        let c = boxplus(&a, &b).unwrap();
        assert_eq!(c[0].operator, op(1.5));
        assert_eq!(c[0].front.generators(), &[vec![1.0]]);
        assert_eq!(c[1].operator, op(3.0));
        assert_eq!(c[1].front.generators(), &[vec![6.0]]);
    }

    #[test]
    fn psi_membership() {
        let k = k2();
        let l = LinOp::zeros(2, 1);
        let a = vec![ExtEpiElement { operator: l.clone(), front: FrontSet::neg_boundary(&k) }];
        let p = psi(&a);
        assert!(p.contains(&l, &[-1.0, 0.0]));
        assert!(!p.contains(&l, &[-1.0, -1.0]));
        assert!(!p.contains(&LinOp::from_rows(vec![vec![1.0], vec![0.0]]).unwrap(), &[5.0, 5.0]));
    }

    #[test]
    fn grid_layout() {
        let g = ProbeGrid::window(2, -2.0, 2.0, 0.1);
        assert_eq!(g.len(), 41 * 41);
        let pts: Vec<Vec<f64>> = g.points().take(2).collect();
        assert_eq!(pts[0], vec![-2.0, -2.0]);
        assert!((pts[1][1] + 1.9).abs() < 1e-12);
        assert!(ProbeGrid::window(2, 1.0, 0.0, 0.1).is_empty());
        let d = ProbeGrid::around(&[vec![0.0, 1.0, 2.0]], 3);
        assert_eq!(d.per_axis, 41);
        assert_eq!(d.lo, vec![-2.0, -1.0, 0.0]);
    }

    mod props {
        use super::*;
        use crate::fixtures::{random_cone, random_points};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn wsup_and_winf_partition(seed in 0u64..10_000, dim in 2usize..=3, n in 1usize..=5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = random_cone(&mut rng, dim);
                let m = random_points(&mut rng, n, dim, 2);
                let g = ProbeGrid::around_with(&m, dim, 21);
                prop_assert!(is_partition_style(&wsup(&m, &k).unwrap(), &g));
                prop_assert!(is_partition_style(&winf(&m, &k).unwrap(), &g));
            }

            #[test]
            fn wsup_commutes_with_translation(seed in 0u64..10_000, n in 1usize..=5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = random_cone(&mut rng, 2);
                let m = random_points(&mut rng, n, 2, 2);
                let y = random_points(&mut rng, 1, 2, 2).remove(0);
                let moved: Vec<Vec<f64>> = m.iter().map(|p| p.iter().zip(&y).map(|(a, b)| a + b).collect()).collect();
                let g = ProbeGrid::around_with(&moved, 2, 41);
                prop_assert!(fronts_equal_on(&wsup(&moved, &k).unwrap(), &wsup(&m, &k).unwrap().translate(&y), &g));
            }

            #[test]
            fn sum_is_commutative_with_neutral_boundary(seed in 0u64..10_000) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = random_cone(&mut rng, 2);
                let (a, b) = (random_points(&mut rng, 3, 2, 2), random_points(&mut rng, 2, 2, 2));
                let (u, v) = (wsup(&a, &k).unwrap(), wsup(&b, &k).unwrap());
                let uv = ws_sum(&u, &v).unwrap();
                let g = ProbeGrid::around_with(uv.generators(), 2, 41);
                prop_assert!(fronts_equal_on(&uv, &ws_sum(&v, &u).unwrap(), &g));
                prop_assert!(fronts_equal_on(&ws_sum(&u, &FrontSet::neg_boundary(&k)).unwrap(), &u, &g));
            }
        }
    }
}
