//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Small and exact enough for the certificate, positivity and scalar duality
//! programs used elsewhere in the crate. Problems are stated as
//! `minimize c'x` over a mix of nonnegative and free variables subject to
//! `<=`, `>=` and `=` rows.

use crate::error::{Error, Result};

/// Pivot and reduced-cost tolerance.
pub const PIVOT_TOL: f64 = 1e-9;
const DEFAULT_PIVOT_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNeg,
    Free,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of [`lp_solve`]. `primal_point` and `dual_multipliers` are only
/// meaningful when `status` is `Optimal`.
///
/// Multipliers follow the convention `c = A'u + reduced costs`, so a `<=` row
/// of a minimization carries `u <= 0` and a `>=` row carries `u >= 0`.
#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub primal_point: Vec<f64>,
    pub dual_multipliers: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Lp {
    pub objective: Vec<f64>,
    pub kinds: Vec<VarKind>,
    pub constraints: Vec<Constraint>,
    pub pivot_cap: usize,
}

impl Lp {
    /// A problem over `n` nonnegative variables with zero objective.
    pub fn new(n: usize) -> Self {
        Lp {
            objective: vec![0.0; n],
            kinds: vec![VarKind::NonNeg; n],
            constraints: Vec::new(),
            pivot_cap: DEFAULT_PIVOT_CAP,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn minimize(mut self, c: Vec<f64>) -> Self {
        assert_eq!(c.len(), self.num_vars());
        self.objective = c;
        self
    }

    pub fn set_free(&mut self, j: usize) {
        self.kinds[j] = VarKind::Free;
    }

    pub fn all_free(mut self) -> Self {
        self.kinds.iter_mut().for_each(|k| *k = VarKind::Free);
        self
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn solve(&self) -> Result<LpResult> {
        Tableau::build(self).run(self)
    }
}

/// Solve `minimize objective'x` subject to `constraints`, all variables free
/// unless `kinds` says otherwise.
pub fn lp_solve(objective: &[f64], kinds: &[VarKind], constraints: &[Constraint]) -> Result<LpResult> {
    let lp = Lp {
        objective: objective.to_vec(),
        kinds: kinds.to_vec(),
        constraints: constraints.to_vec(),
        pivot_cap: DEFAULT_PIVOT_CAP,
    };
    lp.solve()
}

#[derive(Clone, Copy, PartialEq)]
enum Col {
    Pos(usize),
    Neg(usize),
    Slack,
    Artificial,
}

struct Tableau {
    rows: usize,
    cols: usize,
    // rows x (cols + 1), last column is the right-hand side
    a: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<Col>,
    // per original row: (marker column, sign of marker entry, row flipped)
    markers: Vec<(usize, f64, bool)>,
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let mut kinds = Vec::new();
        for (j, k) in lp.kinds.iter().enumerate() {
            kinds.push(Col::Pos(j));
            if *k == VarKind::Free {
                kinds.push(Col::Neg(j));
            }
        }
        let nstruct = kinds.len();
        let mut extra = 0;
        for c in &lp.constraints {
            let flip = c.rhs < 0.0;
            let rel = effective_relation(c.relation, flip);
            extra += if rel == Relation::Ge { 2 } else { 1 };
        }
        let rows = lp.constraints.len();
        let cols = nstruct + extra;
        let w = cols + 1;
        let mut a = vec![0.0; rows * w];
        let mut basis = vec![0; rows];
        let mut markers = Vec::with_capacity(rows);
        let mut next = nstruct;
        for (i, c) in lp.constraints.iter().enumerate() {
            let flip = c.rhs < 0.0;
            let s = if flip { -1.0 } else { 1.0 };
            let row = &mut a[i * w..(i + 1) * w];
            for (col, kind) in kinds.iter().enumerate().take(nstruct) {
                row[col] = match kind {
                    Col::Pos(j) => s * c.coeffs[*j],
                    Col::Neg(j) => -s * c.coeffs[*j],
                    _ => unreachable!(),
                };
            }
            row[cols] = s * c.rhs;
            match effective_relation(c.relation, flip) {
                Relation::Le => {
                    row[next] = 1.0;
                    kinds.push(Col::Slack);
                    basis[i] = next;
                    markers.push((next, 1.0, flip));
                    next += 1;
                }
                Relation::Ge => {
                    row[next] = -1.0;
                    row[next + 1] = 1.0;
                    kinds.push(Col::Slack);
                    kinds.push(Col::Artificial);
                    basis[i] = next + 1;
                    markers.push((next, -1.0, flip));
                    next += 2;
                }
                Relation::Eq => {
                    row[next] = 1.0;
                    kinds.push(Col::Artificial);
                    basis[i] = next;
                    markers.push((next, 1.0, flip));
                    next += 1;
                }
            }
        }
        Tableau { rows, cols, a, basis, kinds, markers }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.a[r * w + c];
        for v in &mut self.a[r * w..(r + 1) * w] {
            *v /= p;
        }
        let prow: Vec<f64> = self.a[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.a[i * w + c];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * w..(i + 1) * w];
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            row[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= cb * self.at(i, j);
            }
        }
        d
    }

    /// Bland's rule iterations. Returns false when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool], pivots: &mut usize, cap: usize) -> Result<bool> {
        loop {
            let d = self.reduced_costs(cost);
            let entering = (0..self.cols).find(|&j| allowed[j] && d[j] < -PIVOT_TOL);
            let Some(c) = entering else { return Ok(true) };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.rows {
                let aic = self.at(i, c);
                if aic > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / aic;
                    let cand = (ratio, self.basis[i], i);
                    best = match best {
                        None => Some(cand),
                        Some(b) if ratio < b.0 - PIVOT_TOL => Some(cand),
                        Some(b) if (ratio - b.0).abs() <= PIVOT_TOL && cand.1 < b.1 => Some(cand),
                        keep => keep,
                    };
                }
            }
            let Some((_, _, r)) = best else { return Ok(false) };
            self.pivot(r, c);
            *pivots += 1;
            if *pivots > cap {
                return Err(Error::LpStall(cap));
            }
        }
    }

    fn run(mut self, lp: &Lp) -> Result<LpResult> {
        let mut pivots = 0;
        let art: Vec<bool> = self.kinds.iter().map(|k| *k == Col::Artificial).collect();
        let phase1: Vec<f64> = art.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        let everything = vec![true; self.cols];
        if art.iter().any(|&b| b) {
            self.optimize(&phase1, &everything, &mut pivots, lp.pivot_cap)?;
            let infeas: f64 = (0..self.rows).filter(|&i| art[self.basis[i]]).map(|i| self.rhs(i)).sum();
            let scale = 1.0 + lp.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
            if infeas > 1e-8 * scale {
                return Ok(infeasible(lp));
            }
            // drive zero-level artificials out of the basis where possible
            for i in 0..self.rows {
                if art[self.basis[i]] {
                    if let Some(c) = (0..self.cols).find(|&j| !art[j] && self.at(i, j).abs() > PIVOT_TOL) {
                        self.pivot(i, c);
                    }
                }
            }
        }
        let mut cost = vec![0.0; self.cols];
        for (col, kind) in self.kinds.iter().enumerate() {
            match kind {
                Col::Pos(j) => cost[col] = lp.objective[*j],
                Col::Neg(j) => cost[col] = -lp.objective[*j],
                _ => {}
            }
        }
        let allowed: Vec<bool> = art.iter().map(|b| !b).collect();
        if !self.optimize(&cost, &allowed, &mut pivots, lp.pivot_cap)? {
            return Ok(LpResult {
                status: LpStatus::Unbounded,
                value: f64::NEG_INFINITY,
                primal_point: vec![0.0; lp.num_vars()],
                dual_multipliers: vec![0.0; lp.constraints.len()],
            });
        }
        let mut xcol = vec![0.0; self.cols];
        for i in 0..self.rows {
            xcol[self.basis[i]] = self.rhs(i);
        }
        let mut x = vec![0.0; lp.num_vars()];
        for (col, kind) in self.kinds.iter().enumerate() {
            match kind {
                Col::Pos(j) => x[*j] += xcol[col],
                Col::Neg(j) => x[*j] -= xcol[col],
                _ => {}
            }
        }
        let d = self.reduced_costs(&cost);
        let duals = self
            .markers
            .iter()
            .map(|&(col, sign, flip)| {
                // marker column is sign * e_i with zero cost, so d = -sign * u_i
                let u = -d[col] / sign;
                if flip {
                    -u
                } else {
                    u
                }
            })
            .collect();
        let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpResult { status: LpStatus::Optimal, value, primal_point: x, dual_multipliers: duals })
    }
}

fn effective_relation(r: Relation, flip: bool) -> Relation {
    match (r, flip) {
        (Relation::Le, true) => Relation::Ge,
        (Relation::Ge, true) => Relation::Le,
        (r, _) => r,
    }
}

fn infeasible(lp: &Lp) -> LpResult {
    LpResult {
        status: LpStatus::Infeasible,
        value: f64::INFINITY,
        primal_point: vec![0.0; lp.num_vars()],
        dual_multipliers: vec![0.0; lp.constraints.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residuals(lp: &Lp, r: &LpResult) -> (f64, f64) {
        let mut primal: f64 = 0.0;
        for c in &lp.constraints {
            let ax: f64 = c.coeffs.iter().zip(&r.primal_point).map(|(a, x)| a * x).sum();
            let viol = match c.relation {
                Relation::Le => ax - c.rhs,
                Relation::Ge => c.rhs - ax,
                Relation::Eq => (ax - c.rhs).abs(),
            };
            primal = primal.max(viol);
        }
        for (x, k) in r.primal_point.iter().zip(&lp.kinds) {
            if *k == VarKind::NonNeg {
                primal = primal.max(-x);
            }
        }
        let mut comp: f64 = 0.0;
        for (c, u) in lp.constraints.iter().zip(&r.dual_multipliers) {
            let ax: f64 = c.coeffs.iter().zip(&r.primal_point).map(|(a, x)| a * x).sum();
            comp = comp.max((u * (ax - c.rhs)).abs());
        }
        (primal, comp)
    }

    #[test]
    fn min_x_with_lower_bound() {
        let mut lp = Lp::new(1).minimize(vec![1.0]).all_free();
        lp.add(vec![1.0], Relation::Ge, 1.0);
        let r = lp.solve().unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.dual_multipliers[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = Lp::new(1).all_free();
        lp.add(vec![1.0], Relation::Le, 0.0);
        lp.add(vec![1.0], Relation::Ge, 1.0);
        assert_eq!(lp.solve().unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = Lp::new(1).minimize(vec![-1.0]);
        lp.add(vec![1.0], Relation::Ge, 0.0);
        assert_eq!(lp.solve().unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn textbook_two_variable_program() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = Lp::new(2).minimize(vec![-3.0, -5.0]);
        lp.add(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add(vec![3.0, 2.0], Relation::Le, 18.0);
        let r = lp.solve().unwrap();
        assert!((r.value + 36.0).abs() < 1e-9);
        assert!((r.primal_point[0] - 2.0).abs() < 1e-9);
        assert!((r.primal_point[1] - 6.0).abs() < 1e-9);
        let (p, c) = residuals(&lp, &r);
        assert!(p <= 1e-8 && c <= 1e-8);
        // strong duality through the multipliers
        let dual: f64 = lp.constraints.iter().zip(&r.dual_multipliers).map(|(c, u)| c.rhs * u).sum();
        assert!((dual - r.value).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_and_equalities() {
        // min x + y s.t. x - y = -1, x >= -3 (free vars) -> x = -3, y = -2
        let mut lp = Lp::new(2).minimize(vec![1.0, 1.0]).all_free();
        lp.add(vec![1.0, -1.0], Relation::Eq, -1.0);
        lp.add(vec![1.0, 0.0], Relation::Ge, -3.0);
        let r = lp.solve().unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value + 5.0).abs() < 1e-9);
        let dual: f64 = lp.constraints.iter().zip(&r.dual_multipliers).map(|(c, u)| c.rhs * u).sum();
        assert!((dual - r.value).abs() < 1e-9);
    }

    #[test]
    fn degenerate_redundant_rows() {
        let mut lp = Lp::new(2).minimize(vec![1.0, 2.0]);
        lp.add(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.add(vec![2.0, 2.0], Relation::Eq, 2.0);
        lp.add(vec![1.0, 0.0], Relation::Le, 1.0);
        let r = lp.solve().unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            // bounded box keeps every instance feasible and bounded
            #[test]
            fn optimal_solutions_satisfy_kkt(
                c in prop::collection::vec(-5.0f64..5.0, 3),
                rows in prop::collection::vec((prop::collection::vec(-3.0f64..3.0, 3), -2.0f64..4.0), 0..5),
            ) {
                let mut lp = Lp::new(3).minimize(c).all_free();
                for j in 0..3 {
                    let mut e = vec![0.0; 3];
                    e[j] = 1.0;
                    lp.add(e.clone(), Relation::Le, 10.0);
                    lp.add(e, Relation::Ge, -10.0);
                }
                for (a, b) in rows {
                    lp.add(a, Relation::Le, b.abs() + 0.5);
                }
                let r = lp.solve().unwrap();
                prop_assert_eq!(r.status, LpStatus::Optimal);
                let (p, comp) = residuals(&lp, &r);
                prop_assert!(p <= 1e-8, "primal residual {}", p);
                prop_assert!(comp <= 1e-8, "complementarity {}", comp);
                let dual: f64 = lp.constraints.iter().zip(&r.dual_multipliers).map(|(c, u)| c.rhs * u).sum();
                prop_assert!((dual - r.value).abs() <= 1e-7 * (1.0 + r.value.abs()));
            }
        }
    }
}
