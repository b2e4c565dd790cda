//! Lower fronts of planar point runs in transformed coordinates. A point
//! survives unless another one is below it by more than `TOL_STRICT` in both
//! coordinates, which is the same rule `winf` applies.

use crate::cone_order::{PolyhedralCone, TOL_STRICT};
use crate::linalg::dot;
use crate::weak_sets::transformed;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Pt {
    pub t: [f64; 2],
    pub y: [f64; 2],
    pub src: u32,
}

impl Pt {
    pub fn new(y: &[f64], k: &PolyhedralCone, src: u32) -> Self {
        let n = k.normals();
        Pt { t: [dot(&n[0], y), dot(&n[1], y)], y: [y[0], y[1]], src }
    }

    pub fn shifted(&self, ts: [f64; 2], s: [f64; 2], src: u32) -> Self {
        Pt { t: [self.t[0] + ts[0], self.t[1] + ts[1]], y: [self.y[0] + s[0], self.y[1] + s[1]], src }
    }

    pub fn flipped(&self) -> Self {
        Pt { t: [-self.t[0], -self.t[1]], y: [-self.y[0], -self.y[1]], src: self.src }
    }
}

fn by_t(a: &Pt, b: &Pt) -> std::cmp::Ordering {
    a.t[0].total_cmp(&b.t[0]).then(a.t[1].total_cmp(&b.t[1]))
}

pub(crate) fn sort_run(v: &mut [Pt]) {
    v.sort_by(by_t);
}

/// Points of a run sorted by `t` that no other point weakly dominates.
/// Dropping a weakly dominated generator leaves the front unchanged.
pub(crate) fn prune_pareto(v: &[Pt]) -> Vec<Pt> {
    let mut out = Vec::with_capacity(v.len() / 2 + 1);
    let mut best = f64::INFINITY;
    for p in v {
        if p.t[1] < best {
            best = p.t[1];
            out.push(*p);
        }
    }
    out
}

/// Pareto front of the union of two sorted runs.
pub(crate) fn merge_lower(a: &[Pt], b: &[Pt]) -> Vec<Pt> {
    if a.is_empty() {
        return prune_pareto(b);
    }
    if b.is_empty() {
        return prune_pareto(a);
    }
    let mut m = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if by_t(&a[i], &b[j]).is_le() {
            m.push(a[i]);
            i += 1;
        } else {
            m.push(b[j]);
            j += 1;
        }
    }
    m.extend_from_slice(&a[i..]);
    m.extend_from_slice(&b[j..]);
    prune_pareto(&m)
}

/// Sorted reference points with a running minimum of `t[1]`, used to drop
/// points that some reference point strictly dominates.
pub(crate) struct Dominators {
    t0: Vec<f64>,
    min_t1: Vec<f64>,
}

impl Dominators {
    pub fn new(mut refs: Vec<Pt>) -> Self {
        sort_run(&mut refs);
        let mut best = f64::INFINITY;
        let min_t1 = refs
            .iter()
            .map(|p| {
                best = best.min(p.t[1]);
                best
            })
            .collect();
        Dominators { t0: refs.iter().map(|p| p.t[0]).collect(), min_t1 }
    }

    /// Keep the points of a Pareto run (sorted by `t[0]`, so `t[1]` falls),
    /// shifted as in [`Pt::shifted`], that no reference point dominates.
    /// Blocks whose best corner is dominated are skipped whole.
    pub fn filter_shifted(&self, run: &[Pt], ts: [f64; 2], s: [f64; 2], src: u32, out: &mut Vec<Pt>) {
        let below = |j: usize, t1: f64| j > 0 && self.min_t1[j - 1] < t1 - TOL_STRICT;
        for block in run.chunks(BLOCK) {
            let first = block[0].t[0] + ts[0];
            let mut j = self.t0.partition_point(|&a| a < first - TOL_STRICT);
            if below(j, block[block.len() - 1].t[1] + ts[1]) {
                continue;
            }
            for q in block {
                let t = [q.t[0] + ts[0], q.t[1] + ts[1]];
                while j < self.t0.len() && self.t0[j] < t[0] - TOL_STRICT {
                    j += 1;
                }
                if !below(j, t[1]) {
                    out.push(q.shifted(ts, s, src));
                }
            }
        }
    }
}

const BLOCK: usize = 64;

/// Every point of `lower` (sorted by `t[0]`) has some point of `run` (sorted
/// by `t[0]`) at or below it up to `TOL_STRICT`.
pub(crate) fn covers_from_below(run: &[Pt], lower: &[[f64; 2]]) -> bool {
    let mut j = 0;
    let mut best = f64::INFINITY;
    lower.iter().all(|q| {
        while j < run.len() && run[j].t[0] <= q[0] + TOL_STRICT {
            best = best.min(run[j].t[1]);
            j += 1;
        }
        best <= q[1] + TOL_STRICT
    })
}

/// Tagged points of arbitrary dimension that survive pruning (downward for an
/// infimum, upward for a supremum).
pub(crate) fn prune_general(pool: Vec<(Vec<f64>, u32)>, k: &PolyhedralCone, upward: bool) -> Vec<(Vec<f64>, u32)> {
    let sign = if upward { 1.0 } else { -1.0 };
    let t: Vec<Vec<f64>> = pool.iter().map(|(y, _)| transformed(y, k).iter().map(|v| sign * v).collect()).collect();
    let sum = |i: usize| t[i].iter().sum::<f64>();
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&i, &j| sum(j).total_cmp(&sum(i)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&j| t[j].iter().zip(&t[i]).all(|(q, p)| q - p > TOL_STRICT)) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    let mut pool: Vec<Option<(Vec<f64>, u32)>> = pool.into_iter().map(Some).collect();
    kept.into_iter().map(|i| pool[i].take().unwrap()).collect()
}

/// Euclidean nearest-neighbour distances against a fixed point set, sorted on
/// the first coordinate so the scan can stop early.
pub(crate) struct Nearest {
    pts: Vec<Vec<f64>>,
}

impl Nearest {
    pub fn new(pts: &[Vec<f64>]) -> Self {
        let mut pts = pts.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        Nearest { pts }
    }

    pub fn distance(&self, p: &[f64]) -> f64 {
        if self.pts.is_empty() {
            return f64::INFINITY;
        }
        let d2 = |q: &Vec<f64>| q.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let start = self.pts.partition_point(|q| q[0] < p[0]);
        let mut best = f64::INFINITY;
        for q in self.pts[start..].iter() {
            if (q[0] - p[0]).powi(2) > best {
                break;
            }
            best = best.min(d2(q));
        }
        for q in self.pts[..start].iter().rev() {
            if (q[0] - p[0]).powi(2) > best {
                break;
            }
            best = best.min(d2(q));
        }
        best.sqrt()
    }
}
