//! Sampled vector-valued mappings `F: X -> Y ∪ {+inf}` and their conjugates
//! `F*(L) = WSup{L(x) - F(x)}`, epigraph membership, indicators, composition
//! with operators and the positive / weakly positive operator cones.
//!
//! Every quantifier over `X` ranges over the stored samples. When the samples
//! form a lattice the map also knows its recession directions, which is how a
//! conjugate is recognised as `{+inf}` on a bounded grid.

use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::cone_order::{ExtendedPoint, PolyhedralCone, Region};
use crate::error::{Error, Result};
use crate::linalg::{dot, sub};
use crate::lp::{Lp, LpStatus, Relation};
use crate::weak_sets::{classify, wsup, FrontSet, Label};

/// Dense `rows x cols` matrix acting as a linear operator.
#[derive(Debug, Clone, PartialEq)]
pub struct LinOp {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Serialize for LinOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl LinOp {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinOp { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zeros(n, n);
        for i in 0..n {
            op.data[i * n + i] = 1.0;
        }
        op
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if r == 0 || rows.iter().any(|v| v.len() != c) {
            return Err(Error::ShapeMismatch("ragged or empty matrix".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch("non-finite entry".into()));
        }
        Ok(LinOp { rows: r, cols: c, data })
    }

    /// Single column operator `t -> t v` from R to R^m.
    pub fn column(v: &[f64]) -> Self {
        LinOp { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Rank-one operator `z -> <w, z> v`.
    pub fn outer(v: &[f64], w: &[f64]) -> Self {
        let mut data = Vec::with_capacity(v.len() * w.len());
        for a in v {
            for b in w {
                data.push(a * b);
            }
        }
        LinOp { rows: v.len(), cols: w.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.data.chunks(self.cols.max(1)).map(|row| dot(row, x)).take(self.rows).collect()
    }

    pub fn try_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        Ok(self.apply(x))
    }

    fn same_shape(&self, o: &LinOp) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn add(&self, o: &LinOp) -> Result<LinOp> {
        self.same_shape(o)?;
        Ok(LinOp { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }

    pub fn neg(&self) -> LinOp {
        LinOp { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: f64) -> LinOp {
        LinOp { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp) -> Result<LinOp> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!("cannot compose {}x{} with {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = LinOp::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `[self other]`, the operator `(x, z) -> self x + other z`.
    pub fn hstack(&self, other: &LinOp) -> Result<LinOp> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack needs equal row counts".into()));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        Ok(LinOp { rows: self.rows, cols: self.cols + other.cols, data })
    }

    /// Columns `from..to` as an operator.
    pub fn columns(&self, from: usize, to: usize) -> LinOp {
        let cols = to - from;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols + from..i * self.cols + to]);
        }
        LinOp { rows: self.rows, cols, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Cartesian product of sorted axes; the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lattice {
    pub axes: Vec<Vec<f64>>,
}

impl Lattice {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        for a in &axes {
            if a.is_empty() || a.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::ShapeMismatch("lattice axes must be nonempty and increasing".into()));
            }
        }
        Ok(Lattice { axes })
    }

    /// Axis `lo, lo + step, ..., hi` with the count fixed by rounding.
    pub fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step).round() as i64;
        (0..=n.max(0)).map(|i| lo + i as f64 * step).map(clean).collect()
    }

    pub fn product(&self, other: &Lattice) -> Lattice {
        let mut axes = self.axes.clone();
        axes.extend(other.axes.iter().cloned());
        Lattice { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for d in (0..self.dim()).rev() {
            let n = self.axes[d].len();
            out[d] = idx % n;
            idx /= n;
        }
        out
    }

    pub fn flat_index(&self, mi: &[usize]) -> usize {
        mi.iter().zip(&self.axes).fold(0, |acc, (i, a)| acc * a.len() + i)
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx).iter().zip(&self.axes).map(|(i, a)| a[*i]).collect()
    }

    /// Index of a point lying on the lattice (coordinates within `1e-9`).
    pub fn locate(&self, p: &[f64]) -> Option<usize> {
        if p.len() != self.dim() {
            return None;
        }
        let mut mi = Vec::with_capacity(self.dim());
        for (v, a) in p.iter().zip(&self.axes) {
            let i = a.partition_point(|x| *x < v - 1e-9);
            if i < a.len() && (a[i] - v).abs() <= 1e-9 {
                mi.push(i);
            } else {
                return None;
            }
        }
        Some(self.flat_index(&mi))
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Short identifier embedded in reports.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self
            .axes
            .iter()
            .map(|a| format!("[{}..{}]x{}", a[0], a[a.len() - 1], a.len()))
            .collect();
        parts.join("*")
    }
}

/// Round away representation noise from `lo + i * step`.
fn clean(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A proper mapping tabulated on finitely many samples.
#[derive(Debug)]
pub struct SampledMap {
    in_dim: usize,
    samples: Vec<f64>,
    values: Vec<f64>,
    finite: Vec<bool>,
    cone: PolyhedralCone,
    lattice: Option<Lattice>,
    recession: OnceLock<Recession>,
}

impl Clone for SampledMap {
    fn clone(&self) -> Self {
        SampledMap {
            in_dim: self.in_dim,
            samples: self.samples.clone(),
            values: self.values.clone(),
            finite: self.finite.clone(),
            cone: self.cone.clone(),
            lattice: self.lattice.clone(),
            recession: OnceLock::new(),
        }
    }
}

impl SampledMap {
    pub fn new(samples: Vec<Vec<f64>>, values: Vec<ExtendedPoint>, cone: &PolyhedralCone) -> Result<Self> {
        if samples.len() != values.len() {
            return Err(Error::ShapeMismatch(format!("{} samples but {} values", samples.len(), values.len())));
        }
        let in_dim = samples.first().ok_or(Error::Empty("sample list"))?.len();
        let mut flat = Vec::with_capacity(samples.len() * in_dim);
        for s in &samples {
            if s.len() != in_dim {
                return Err(Error::DimensionMismatch { expected: in_dim, got: s.len() });
            }
            flat.extend_from_slice(s);
        }
        Self::assemble(in_dim, flat, values, cone, None)
    }

    /// Tabulate `f` on every lattice point.
    pub fn tabulate(lattice: Lattice, cone: &PolyhedralCone, f: impl Fn(&[f64]) -> ExtendedPoint) -> Result<Self> {
        let in_dim = lattice.dim();
        let mut flat = Vec::with_capacity(lattice.len() * in_dim);
        let mut values = Vec::with_capacity(lattice.len());
        for p in lattice.points() {
            values.push(f(&p));
            flat.extend(p);
        }
        Self::assemble(in_dim, flat, values, cone, Some(lattice))
    }

    /// Lattice-backed map from precomputed values in lattice order.
    pub fn on_lattice(lattice: Lattice, values: Vec<ExtendedPoint>, cone: &PolyhedralCone) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::ShapeMismatch(format!("{} values for {} lattice points", values.len(), lattice.len())));
        }
        let in_dim = lattice.dim();
        let mut flat = Vec::with_capacity(lattice.len() * in_dim);
        for p in lattice.points() {
            flat.extend(p);
        }
        Self::assemble(in_dim, flat, values, cone, Some(lattice))
    }

    fn assemble(
        in_dim: usize,
        samples: Vec<f64>,
        values: Vec<ExtendedPoint>,
        cone: &PolyhedralCone,
        lattice: Option<Lattice>,
    ) -> Result<Self> {
        let m = cone.dim();
        let mut flat = vec![0.0; values.len() * m];
        let mut finite = vec![false; values.len()];
        for (i, v) in values.iter().enumerate() {
            match v {
                ExtendedPoint::Finite(y) => {
                    cone.check(y)?;
                    if y.iter().any(|t| !t.is_finite()) {
                        return Err(Error::ImproperMap("non-finite coordinate"));
                    }
                    flat[i * m..(i + 1) * m].copy_from_slice(y);
                    finite[i] = true;
                }
                ExtendedPoint::MinusInf => return Err(Error::ImproperMap("takes the value -inf")),
                ExtendedPoint::PlusInf => {}
            }
        }
        if !finite.iter().any(|f| *f) {
            return Err(Error::ImproperMap("empty domain"));
        }
        Ok(SampledMap { in_dim, samples, values: flat, finite, cone: cone.clone(), lattice, recession: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.finite.len()
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty()
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.samples[i * self.in_dim..(i + 1) * self.in_dim]
    }

    pub fn is_finite_at(&self, i: usize) -> bool {
        self.finite[i]
    }

    /// Finite value at sample `i`, `None` for `+inf`.
    pub fn finite_value(&self, i: usize) -> Option<&[f64]> {
        let m = self.out_dim();
        self.finite[i].then(|| &self.values[i * m..(i + 1) * m])
    }

    pub fn value(&self, i: usize) -> ExtendedPoint {
        match self.finite_value(i) {
            Some(v) => ExtendedPoint::Finite(v.to_vec()),
            None => ExtendedPoint::PlusInf,
        }
    }

    /// Indices of the effective domain.
    pub fn dom(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.finite[i])
    }

    /// Value at a point that must coincide with a stored sample.
    pub fn eval_at(&self, x: &[f64]) -> Option<ExtendedPoint> {
        match &self.lattice {
            Some(l) => l.locate(x).map(|i| self.value(i)),
            None => (0..self.len()).find(|&i| self.sample(i).iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-9)).map(|i| self.value(i)),
        }
    }

    /// `F - y0`.
    pub fn shifted(&self, y0: &[f64]) -> SampledMap {
        let mut out = self.clone();
        let m = self.out_dim();
        for i in 0..self.len() {
            if self.finite[i] {
                for (v, s) in out.values[i * m..(i + 1) * m].iter_mut().zip(y0) {
                    *v -= s;
                }
            }
        }
        out
    }

    /// `L(x) - F(x)` over the domain.
    pub fn conjugate_points(&self, l: &LinOp) -> Vec<Vec<f64>> {
        self.dom().map(|i| sub(&l.apply(self.sample(i)), self.finite_value(i).unwrap())).collect()
    }

    fn check_operator(&self, l: &LinOp) -> Result<()> {
        if l.rows() != self.out_dim() || l.cols() != self.in_dim {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, map needs {}x{}",
                l.rows(),
                l.cols(),
                self.out_dim(),
                self.in_dim
            )));
        }
        Ok(())
    }

    /// Lattice step directions `r ∈ {-1,0,1}^n` under which the sampled
    /// domain is closed: every domain sample stays in the domain when moved
    /// along `r` until it leaves the lattice.
    pub fn recession_directions(&self) -> &[Vec<i64>] {
        &self.recession().dirs
    }

    fn recession(&self) -> &Recession {
        self.recession.get_or_init(|| {
            let mut rec = Recession::default();
            let Some(lat) = &self.lattice else { return rec };
            let shape = lat.shape();
            let n = shape.len();
            for code in 0..3usize.pow(n as u32) {
                let mut c = code;
                let r: Vec<i64> = (0..n)
                    .map(|_| {
                        let v = (c % 3) as i64 - 1;
                        c /= 3;
                        v
                    })
                    .collect();
                if r.iter().all(|v| *v == 0) {
                    continue;
                }
                let closed = self.dom().all(|i| match step(&lat.multi_index(i), &r, &shape) {
                    Some(next) => self.finite[lat.flat_index(&next)],
                    None => true,
                });
                if !closed {
                    continue;
                }
                let back: Vec<i64> = r.iter().map(|v| -v).collect();
                for i in self.dom() {
                    let mi = lat.multi_index(i);
                    if step(&mi, &r, &shape).is_some() {
                        continue;
                    }
                    let Some(p1) = step(&mi, &back, &shape) else { continue };
                    let Some(p2) = step(&p1, &back, &shape) else { continue };
                    let (i1, i2) = (lat.flat_index(&p1), lat.flat_index(&p2));
                    if self.finite[i1] && self.finite[i2] {
                        rec.tails.push([i, i1, i2]);
                    }
                }
                rec.dirs.push(r);
            }
            rec
        })
    }

    /// Whether `F*(L)` is `{+inf}` relative to the lattice: along some
    /// recession direction the values `L(x) - F(x)` are affine over the last
    /// two steps before the lattice edge, with an increment in `int K`.
    pub fn conjugate_is_plus_infinity(&self, l: &LinOp) -> bool {
        let m = self.out_dim();
        let n = self.in_dim;
        let mut v = [[0.0f64; 8]; 3];
        for tail in &self.recession().tails {
            let mut scale = 1.0f64;
            for (slot, &i) in v.iter_mut().zip(tail) {
                let x = &self.samples[i * n..(i + 1) * n];
                for r in 0..m {
                    let lx: f64 = (0..n).map(|j| l.data[r * n + j] * x[j]).sum();
                    slot[r] = lx - self.values[i * m + r];
                    scale = scale.max(slot[r].abs() + 1.0);
                }
            }
            let mut d1 = [0.0f64; 8];
            let mut affine = true;
            for r in 0..m {
                d1[r] = v[0][r] - v[1][r];
                let d2 = v[1][r] - v[2][r];
                affine &= (d1[r] - d2).abs() <= 1e-9 * scale;
            }
            if affine && self.cone.contains_unchecked(&d1[..m], Region::Interior) {
                return true;
            }
        }
        false
    }
}

#[derive(Debug, Default)]
struct Recession {
    dirs: Vec<Vec<i64>>,
    /// `[edge, edge - r, edge - 2r]` sample indices for every recession direction `r`.
    tails: Vec<[usize; 3]>,
}

fn step(mi: &[usize], r: &[i64], shape: &[usize]) -> Option<Vec<usize>> {
    mi.iter()
        .zip(r)
        .zip(shape)
        .map(|((i, d), n)| {
            let j = *i as i64 + d;
            (0..*n as i64).contains(&j).then_some(j as usize)
        })
        .collect()
}

/// `F*(L) = WSup{L(x) - F(x) : x ∈ dom F}` on the samples, or `{+inf}` when
/// the lattice recession test says the values are unbounded.
pub fn conjugate(f: &SampledMap, l: &LinOp) -> Result<FrontSet> {
    f.check_operator(l)?;
    if f.conjugate_is_plus_infinity(l) {
        return Ok(FrontSet::plus_infinity(&f.cone));
    }
    wsup(&f.conjugate_points(l), &f.cone)
}

/// `(L, y) ∈ epi F*`, i.e. `F(x) - L(x) + y ∉ -int K` for every sample.
pub fn epi_membership(f: &SampledMap, l: &LinOp, y: &[f64]) -> Result<bool> {
    f.check_operator(l)?;
    f.cone.check(y)?;
    let k = &f.cone;
    Ok(f.dom().all(|i| {
        let w: Vec<f64> = f.finite_value(i).unwrap().iter().zip(l.apply(f.sample(i))).zip(y).map(|((a, b), c)| b - a - c).collect();
        !k.contains_unchecked(&w, Region::Interior)
    }))
}

/// Same test through the front: `y` on or above `F*(L)`.
pub fn epi_membership_via_front(f: &SampledMap, l: &LinOp, y: &[f64]) -> Result<bool> {
    let front = conjugate(f, l)?;
    if !front.is_finite() {
        return Ok(false);
    }
    Ok(matches!(classify(&front, y)?, Label::On | Label::Above))
}

/// Indicator of `D`: zero on `D`, `+inf` elsewhere.
pub fn indicator(lattice: Lattice, cone: &PolyhedralCone, d: impl Fn(&[f64]) -> bool) -> Result<SampledMap> {
    let zero = vec![0.0; cone.dim()];
    SampledMap::tabulate(lattice, cone, |x| if d(x) { ExtendedPoint::Finite(zero.clone()) } else { ExtendedPoint::PlusInf })
        .map_err(|e| match e {
            Error::ImproperMap(_) => Error::Empty("indicator set"),
            e => e,
        })
}

/// `T ∘ G` with `+inf` kept where `G` is `+inf`; the result is ordered by `cone`.
pub fn compose(t: &LinOp, g: &SampledMap, cone: &PolyhedralCone) -> Result<SampledMap> {
    if t.cols() != g.out_dim() || t.rows() != cone.dim() {
        return Err(Error::ShapeMismatch(format!("operator {}x{} after map into R^{}", t.rows(), t.cols(), g.out_dim())));
    }
    let values: Vec<ExtendedPoint> = (0..g.len())
        .map(|i| match g.finite_value(i) {
            Some(v) => ExtendedPoint::Finite(t.apply(v)),
            None => ExtendedPoint::PlusInf,
        })
        .collect();
    let mut out = SampledMap::assemble(g.in_dim, g.samples.clone(), values, cone, g.lattice.clone())?;
    out.recession = OnceLock::new();
    Ok(out)
}

/// A product of polyhedral cones and zero blocks, used for perturbation
/// spaces such as `{0} x P x S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConeBlock {
    Zero(usize),
    Cone(PolyhedralCone),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingCone {
    pub blocks: Vec<ConeBlock>,
}

impl From<PolyhedralCone> for OrderingCone {
    fn from(c: PolyhedralCone) -> Self {
        OrderingCone { blocks: vec![ConeBlock::Cone(c)] }
    }
}

impl OrderingCone {
    pub fn product(parts: Vec<ConeBlock>) -> Self {
        OrderingCone { blocks: parts }
    }

    pub fn dim(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| match b {
                ConeBlock::Zero(n) => *n,
                ConeBlock::Cone(c) => c.dim(),
            })
            .sum()
    }

    /// Extreme rays embedded in the full space.
    pub fn generators(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut off = 0;
        for b in &self.blocks {
            match b {
                ConeBlock::Zero(k) => off += k,
                ConeBlock::Cone(c) => {
                    for g in c.generators() {
                        let mut v = vec![0.0; n];
                        v[off..off + c.dim()].copy_from_slice(g);
                        out.push(v);
                    }
                    off += c.dim();
                }
            }
        }
        out
    }

    pub fn has_interior(&self) -> bool {
        self.blocks.iter().all(|b| matches!(b, ConeBlock::Cone(_)))
    }

    pub fn contains(&self, z: &[f64], region: Region) -> Result<bool> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        let mut off = 0;
        let mut all_boundary_ok = true;
        let mut any_boundary = false;
        for b in &self.blocks {
            match b {
                ConeBlock::Zero(k) => {
                    if z[off..off + k].iter().any(|v| v.abs() > 1e-9) {
                        return Ok(false);
                    }
                    any_boundary |= *k > 0;
                    off += k;
                }
                ConeBlock::Cone(c) => {
                    let part = &z[off..off + c.dim()];
                    if !c.contains_unchecked(part, Region::Closed) {
                        all_boundary_ok = false;
                    }
                    any_boundary |= c.contains_unchecked(part, Region::Boundary);
                    off += c.dim();
                }
            }
        }
        Ok(match region {
            Region::Closed => all_boundary_ok,
            Region::Interior => all_boundary_ok && !any_boundary,
            Region::Boundary => all_boundary_ok && any_boundary,
        })
    }

    /// Generators of the dual cone `S+`, with the whole block space for zero blocks.
    pub fn dual_generators(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut off = 0;
        for b in &self.blocks {
            match b {
                ConeBlock::Zero(k) => {
                    for j in 0..*k {
                        for s in [1.0, -1.0] {
                            let mut v = vec![0.0; n];
                            v[off + j] = s;
                            out.push(v);
                        }
                    }
                    off += k;
                }
                ConeBlock::Cone(c) => {
                    for g in c.normals() {
                        let mut v = vec![0.0; n];
                        v[off..off + c.dim()].copy_from_slice(g);
                        out.push(v);
                    }
                    off += c.dim();
                }
            }
        }
        out
    }
}

/// `T(S) ⊂ K`, checked on the generators of S.
pub fn is_positive_operator(t: &LinOp, s: &OrderingCone, k: &PolyhedralCone) -> Result<bool> {
    if t.cols() != s.dim() || t.rows() != k.dim() {
        return Err(Error::ShapeMismatch(format!("operator {}x{} for S in R^{} and K in R^{}", t.rows(), t.cols(), s.dim(), k.dim())));
    }
    Ok(s.generators().iter().all(|g| k.contains_unchecked(&t.apply(g), Region::Closed)))
}

/// `T(S) ∩ (-int K) = ∅`, decided by the LP
/// `max σ  s.t.  n'T(Σ λ_i s_i) + σ <= 0 for all normals n of K, Σ λ = 1, λ >= 0, σ <= 1`.
pub fn is_weakly_positive(t: &LinOp, s: &OrderingCone, k: &PolyhedralCone) -> Result<bool> {
    if t.cols() != s.dim() || t.rows() != k.dim() {
        return Err(Error::ShapeMismatch(format!("operator {}x{} for S in R^{} and K in R^{}", t.rows(), t.cols(), s.dim(), k.dim())));
    }
    let gens = s.generators();
    if gens.is_empty() {
        return Ok(true);
    }
    let images: Vec<Vec<f64>> = gens.iter().map(|g| t.apply(g)).collect();
    let nv = gens.len() + 1;
    let mut obj = vec![0.0; nv];
    obj[nv - 1] = -1.0;
    let mut lp = Lp::new(nv).minimize(obj);
    lp.set_free(nv - 1);
    for n in k.normals() {
        let mut row: Vec<f64> = images.iter().map(|im| dot(n, im)).collect();
        row.push(1.0);
        lp.add(row, Relation::Le, 0.0);
    }
    let mut simplex = vec![1.0; nv];
    simplex[nv - 1] = 0.0;
    lp.add(simplex, Relation::Eq, 1.0);
    let mut cap = vec![0.0; nv];
    cap[nv - 1] = 1.0;
    lp.add(cap, Relation::Le, 1.0);
    let r = lp.solve()?;
    match r.status {
        LpStatus::Optimal => Ok(r.value > -crate::cone_order::TOL_STRICT),
        LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
        LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
    }
}

/// Cross-check of `dom I*_{-S}` against weak positivity: the sampled
/// conjugate of the indicator of `-S` at `T` is finite exactly when `T` is
/// weakly positive. `radius` and `per_axis` fix the sampling of `-S`.
pub fn dom_indicator_conjugate_check(
    s: &PolyhedralCone,
    k: &PolyhedralCone,
    t: &LinOp,
    radius: f64,
    per_axis: usize,
) -> Result<bool> {
    let p = s.dim();
    let axis: Vec<f64> = (0..per_axis).map(|i| clean(-radius + 2.0 * radius * i as f64 / (per_axis - 1) as f64)).collect();
    let lattice = Lattice::new(vec![axis; p])?;
    let ind = indicator(lattice, k, |z| s.contains_unchecked(&z.iter().map(|v| -v).collect::<Vec<_>>(), Region::Closed))?;
    let finite = !conjugate(&ind, t)?.kind().eq(&crate::weak_sets::FrontKind::PlusInfinity);
    let weak = is_weakly_positive(t, &OrderingCone::from(s.clone()), k)?;
    Ok(finite == weak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weak_sets::{front_contains, FrontKind, ProbeGrid};

    fn k2() -> PolyhedralCone {
        PolyhedralCone::orthant(2)
    }

    fn line(lo: f64, hi: f64, step: f64) -> Lattice {
        Lattice::new(vec![Lattice::axis(lo, hi, step)]).unwrap()
    }

    #[test]
    fn linop_algebra() {
        let a = LinOp::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(a.apply(&[1.0, 1.0]), vec![3.0, 7.0]);
        assert_eq!(a.add(&a.neg()).unwrap(), LinOp::zeros(2, 2));
        assert_eq!(a.compose(&LinOp::identity(2)).unwrap(), a);
        let h = a.hstack(&LinOp::column(&[5.0, 6.0])).unwrap();
        assert_eq!(h.apply(&[1.0, 0.0, 1.0]), vec![6.0, 9.0]);
        assert_eq!(h.columns(2, 3), LinOp::column(&[5.0, 6.0]));
        assert!(a.add(&LinOp::zeros(1, 2)).is_err());
        assert_eq!(LinOp::outer(&[1.0, 2.0], &[3.0]).to_rows(), vec![vec![3.0], vec![6.0]]);
    }

    #[test]
    fn conjugate_of_zero_map_is_negative_boundary() {
        let f = SampledMap::tabulate(line(-1.0, 1.0, 0.5), &k2(), |_| vec![0.0, 0.0].into()).unwrap();
        let c = conjugate(&f, &LinOp::zeros(2, 1)).unwrap();
        assert_eq!(c, FrontSet::neg_boundary(&k2()));
    }

    #[test]
    fn conjugate_cancellation() {
        let f = SampledMap::new(
            vec![vec![-1.0], vec![0.0], vec![1.0]],
            vec![vec![-1.0, -1.0].into(), vec![0.0, 0.0].into(), vec![1.0, 1.0].into()],
            &k2(),
        )
        .unwrap();
        let l = LinOp::column(&[1.0, 1.0]);
        assert_eq!(conjugate(&f, &l).unwrap(), FrontSet::neg_boundary(&k2()));
    }

    #[test]
    fn improper_maps_are_rejected() {
        assert!(SampledMap::new(vec![vec![0.0]], vec![ExtendedPoint::PlusInf], &k2()).is_err());
        assert!(SampledMap::new(vec![vec![0.0]], vec![ExtendedPoint::MinusInf], &k2()).is_err());
        assert!(indicator(line(0.0, 1.0, 0.5), &k2(), |_| false).is_err());
    }

    #[test]
    fn epigraph_examples() {
        let f = SampledMap::tabulate(line(-1.0, 1.0, 0.5), &k2(), |_| vec![0.0, 0.0].into()).unwrap();
        let l = LinOp::zeros(2, 1);
        assert!(epi_membership(&f, &l, &[1.0, 1.0]).unwrap());
        assert!(!epi_membership(&f, &l, &[-1.0, -1.0]).unwrap());
    }

    #[test]
    fn indicator_of_everything_conjugates_to_negative_boundary() {
        let i = indicator(line(-2.0, 2.0, 1.0), &k2(), |_| true).unwrap();
        let c = conjugate(&i, &LinOp::zeros(2, 1)).unwrap();
        assert_eq!(c.generators(), &[vec![0.0, 0.0]]);
    }

    #[test]
    fn indicator_of_box() {
        let i = indicator(line(-2.0, 2.0, 0.5), &k2(), |x| x[0].abs() <= 1.0).unwrap();
        assert_eq!(i.dom().count(), 5);
    }

    #[test]
    fn composition() {
        let s1 = PolyhedralCone::orthant(1);
        let g = SampledMap::tabulate(line(-1.0, 1.0, 1.0), &k2(), |x| {
            if x[0] > 0.5 {
                ExtendedPoint::PlusInf
            } else {
                vec![x[0], 2.0 * x[0]].into()
            }
        })
        .unwrap();
        let id = compose(&LinOp::identity(2), &g, &k2()).unwrap();
        for i in 0..g.len() {
            assert_eq!(id.value(i), g.value(i));
        }
        let zero = compose(&LinOp::zeros(2, 2), &g, &k2()).unwrap();
        assert_eq!(zero.value(0), ExtendedPoint::Finite(vec![0.0, 0.0]));
        assert_eq!(zero.value(2), ExtendedPoint::PlusInf);
        let sum = compose(&LinOp::from_rows(vec![vec![1.0, 1.0]]).unwrap(), &g, &s1).unwrap();
        assert_eq!(sum.value(0), ExtendedPoint::Finite(vec![-3.0]));
    }

    #[test]
    fn positivity_examples() {
        let s: OrderingCone = PolyhedralCone::orthant(1).into();
        let k = k2();
        assert!(is_positive_operator(&LinOp::column(&[1.0, 2.0]), &s, &k).unwrap());
        assert!(!is_positive_operator(&LinOp::column(&[1.0, -1.0]), &s, &k).unwrap());
        let s2: OrderingCone = k2().into();
        assert!(is_positive_operator(&LinOp::identity(2), &s2, &k).unwrap());
        // oracle: the ray {t(1,-1)} never has both coordinates negative
        assert!(is_weakly_positive(&LinOp::column(&[1.0, -1.0]), &s, &k).unwrap());
        assert!(!is_weakly_positive(&LinOp::column(&[-1.0, -1.0]), &s, &k).unwrap());
        let t = LinOp::from_rows(vec![vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        assert!(!is_weakly_positive(&t, &s2, &k).unwrap());
        assert!(is_positive_operator(&t, &s, &k).is_err());
    }

    #[test]
    fn indicator_domain_matches_weak_positivity() {
        let s = PolyhedralCone::orthant(1);
        for col in [[1.0, 2.0], [1.0, -1.0], [-1.0, -1.0], [0.0, -1.0], [-0.5, 0.0]] {
            assert!(dom_indicator_conjugate_check(&s, &k2(), &LinOp::column(&col), 4.0, 9).unwrap(), "{col:?}");
        }
        let t = LinOp::from_rows(vec![vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        assert!(dom_indicator_conjugate_check(&k2(), &k2(), &t, 3.0, 7).unwrap());
    }

    #[test]
    fn recession_directions_of_half_line() {
        // dom = {x <= 0} inside [-2, 2]; only moving left keeps the domain
        let f = SampledMap::tabulate(line(-2.0, 2.0, 0.5), &k2(), |x| {
            if x[0] <= 0.0 {
                vec![x[0], 0.0].into()
            } else {
                ExtendedPoint::PlusInf
            }
        })
        .unwrap();
        assert_eq!(f.recession_directions(), &[vec![-1]]);
        // L(x) - F(x) = (a - 1) x, x -> -inf: unbounded iff a < 1 and b < 0
        let cases = [([0.0, -1.0], true), ([2.0, -1.0], false), ([0.0, 1.0], false), ([0.5, -0.5], true)];
        for (ab, inf) in cases {
            let c = conjugate(&f, &LinOp::column(&ab)).unwrap();
            assert_eq!(c.kind() == FrontKind::PlusInfinity, inf, "{ab:?}");
        }
    }

    #[test]
    fn quadratic_growth_is_not_flagged() {
        // F(x) = (0, x^2) on [-3, 3]: F*(L) finite for every L
        let f = SampledMap::tabulate(line(-3.0, 3.0, 0.01), &k2(), |x| vec![0.0, x[0] * x[0]].into()).unwrap();
        for a in [-2.0, 0.0, 2.0] {
            for b in [-2.0, 0.0, 2.0] {
                assert!(conjugate(&f, &LinOp::column(&[a, b])).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn epigraph_bridge_on_fixture() {
        let f = SampledMap::tabulate(line(-2.0, 2.0, 0.25), &k2(), |x| vec![x[0] * x[0], -x[0]].into()).unwrap();
        let l = LinOp::column(&[0.5, -1.0]);
        let c = conjugate(&f, &l).unwrap();
        for y in ProbeGrid::window(2, -4.0, 4.0, 0.1).points() {
            assert_eq!(epi_membership(&f, &l, &y).unwrap(), epi_membership_via_front(&f, &l, &y).unwrap(), "{y:?}");
            if front_contains(&c, &y).unwrap() {
                assert!(epi_membership(&f, &l, &y).unwrap());
            }
        }
    }

    #[test]
    fn shifted_map_translates_conjugate() {
        let f = SampledMap::tabulate(line(-2.0, 2.0, 0.25), &k2(), |x| vec![x[0] * x[0], x[0]].into()).unwrap();
        let y0 = [0.5, -1.5];
        let l = LinOp::column(&[1.0, 0.0]);
        let a = conjugate(&f.shifted(&y0), &l).unwrap();
        let b = conjugate(&f, &l).unwrap().translate(&y0);
        assert!(crate::weak_sets::fronts_equal_on(&a, &b, &ProbeGrid::window(2, -5.0, 5.0, 0.1)));
    }

    #[test]
    fn lattice_indexing() {
        let l = Lattice::new(vec![Lattice::axis(-1.0, 1.0, 0.5), Lattice::axis(0.0, 0.2, 0.1)]).unwrap();
        assert_eq!(l.len(), 15);
        assert_eq!(l.point(4), vec![-0.5, 0.1]);
        assert_eq!(l.locate(&[-0.5, 0.1]), Some(4));
        assert_eq!(l.locate(&[-0.5, 0.15]), None);
        assert_eq!(Lattice::axis(-5.0, 3.0, 1e-3).len(), 8001);
    }
}
