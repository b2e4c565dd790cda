//! Seeded property suites shared by the `properties` task and the acceptance
//! harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use vecdual_core::cone_order::{bound_finite, PolyhedralCone};
use vecdual_core::farkas::{construct_certificate, soundness, verify_alpha, verify_m_representation, FarkasInstance, Mode};
use vecdual_core::fixtures::{
    alpha_on_segments, convex_fixture, probes_near_front, random_ccvp, random_cone, random_l, random_perturbation, random_points,
    random_sampled_map, scalar_fixture,
};
use vecdual_core::mappings::{conjugate, epi_membership, epi_membership_via_front, LinOp};
use vecdual_core::perturbation::{check_condition, phi1_conjugate_identity, Condition, SamplingPolicy, Verdict};
use vecdual_core::scalar_fl::{build_scalar_dual, primal, scalar_crosscheck, slater, verify_a2, Variant};
use vecdual_core::weak_sets::{
    fronts_equal_on, is_partition_style, precedes, winf, ws_sum, wsup, FrontSet, ProbeGrid, SetRef,
};

use crate::scenario::SuiteSizes;

/// Failure messages kept per suite; the count is always exact.
const KEEP_FAILURES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub checks: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            cases: 0,
            checks: 0,
            failure_count: 0,
            failures: Vec::new(),
            skipped: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < KEEP_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Record a core error as a failure of the case.
    fn guard<T>(&mut self, r: vecdual_core::Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", ctx()));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn shift(points: &[Vec<f64>], y: &[f64]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.iter().zip(y).map(|(a, b)| a + b).collect()).collect()
}

/// A point of `int K` with half-integer weights on the generators.
fn interior_offset(rng: &mut ChaCha8Rng, k: &PolyhedralCone) -> Vec<f64> {
    let mut v = vec![0.0; k.dim()];
    for g in k.generators() {
        let a = rng.gen_range(1i32..=4) as f64 * 0.5;
        for (vi, gi) in v.iter_mut().zip(g) {
            *vi += a * gi;
        }
    }
    v
}

fn coarse(points: &[Vec<f64>], dim: usize) -> ProbeGrid {
    ProbeGrid::around_with(points, dim, if dim == 2 { 41 } else { 15 })
}

fn gens(fronts: &[&FrontSet]) -> Vec<Vec<f64>> {
    fronts.iter().flat_map(|f| f.generators().to_vec()).collect()
}

/// Decomposition, translation, absorption, the `⊎` algebra, monotonicity and
/// the `≼` chains on random finite sets.
pub fn weak_sets_suite(seed: u64, n2: usize, n3: usize) -> SuiteResult {
    let mut res = SuiteResult::new("weak_sets");
    for (dim, count) in [(2usize, n2), (3, n3)] {
        let mut rng = rng_for(seed, dim as u64);
        for case in 0..count {
            res.cases += 1;
            let tag = || format!("R^{dim} case {case}");
            let k = random_cone(&mut rng, dim);
            let n = rng.gen_range(1..=6);
            let m = random_points(&mut rng, n, dim, 3);
            let Some(sup) = res.guard(wsup(&m, &k), tag) else { continue };
            let Some(inf) = res.guard(winf(&m, &k), tag) else { continue };

            let dense = ProbeGrid::around(&m, dim);
            res.check(is_partition_style(&sup, &dense), || format!("{}: wsup does not partition {}", tag(), dense.id()));
            res.check(is_partition_style(&inf, &dense), || format!("{}: winf does not partition {}", tag(), dense.id()));

            let y: Vec<f64> = random_points(&mut rng, 1, dim, 2).remove(0);
            let moved = shift(&m, &y);
            if let Some(a) = res.guard(wsup(&moved, &k), tag) {
                let grid = coarse(&moved, dim);
                res.check(fronts_equal_on(&a, &sup.translate(&y), &grid), || format!("{}: translation by {y:?}", tag()));
            }

            let mut with_dominated = m.clone();
            for p in &m {
                let mut q = p.clone();
                for g in k.generators() {
                    let a = rng.gen_range(0i32..=4) as f64 * 0.5;
                    for (qi, gi) in q.iter_mut().zip(g) {
                        *qi -= a * gi;
                    }
                }
                with_dominated.push(q);
            }
            if let Some(a) = res.guard(wsup(&with_dominated, &k), tag) {
                res.check(fronts_equal_on(&a, &sup, &coarse(&with_dominated, dim)), || format!("{}: absorption", tag()));
            }

            let (nv, nw) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let v_pts = random_points(&mut rng, nv, dim, 2);
            let w_pts = random_points(&mut rng, nw, dim, 2);
            let (Some(v), Some(w)) = (res.guard(wsup(&v_pts, &k), tag), res.guard(wsup(&w_pts, &k), tag)) else { continue };
            let zero = FrontSet::neg_boundary(&k);
            let sums = (|| -> vecdual_core::Result<_> {
                let uv = ws_sum(&sup, &v)?;
                let vu = ws_sum(&v, &sup)?;
                let left = ws_sum(&uv, &w)?;
                let right = ws_sum(&sup, &ws_sum(&v, &w)?)?;
                Ok((ws_sum(&sup, &zero)?, uv, vu, left, right))
            })();
            if let Some((neutral, uv, vu, left, right)) = res.guard(sums, tag) {
                let grid = coarse(&gens(&[&uv, &left, &sup]), dim);
                res.check(fronts_equal_on(&neutral, &sup, &grid), || format!("{}: -bd K is not neutral", tag()));
                res.check(fronts_equal_on(&uv, &vu, &grid), || format!("{}: sum not commutative", tag()));
                res.check(fronts_equal_on(&left, &right, &grid), || format!("{}: sum not associative", tag()));
            }

            // U ≼ V for V = WSup(M + k) with k ∈ int K
            let lifted = shift(&m, &interior_offset(&mut rng, &k));
            let mono = (|| -> vecdual_core::Result<_> {
                let upper = wsup(&lifted, &k)?;
                let premise = precedes(SetRef::Front(&sup), SetRef::Front(&upper), &k)?;
                let concl = precedes(SetRef::Front(&ws_sum(&sup, &w)?), SetRef::Front(&ws_sum(&upper, &w)?), &k)?;
                let random_premise = precedes(SetRef::Front(&sup), SetRef::Front(&v), &k)?;
                let random_concl = precedes(SetRef::Front(&ws_sum(&sup, &w)?), SetRef::Front(&ws_sum(&v, &w)?), &k)?;
                Ok((premise, concl, random_premise, random_concl))
            })();
            if let Some((premise, concl, rp, rc)) = res.guard(mono, tag) {
                res.check(premise, || format!("{}: WSup M not below WSup(M + int K)", tag()));
                res.check(concl, || format!("{}: sum not monotone", tag()));
                if rp {
                    res.check(rc, || format!("{}: sum not monotone on a random pair", tag()));
                }
            }

            let chain = (|| -> vecdual_core::Result<_> {
                let a = precedes(SetRef::Front(&inf), SetRef::Points(&m), &k)?;
                let b = precedes(SetRef::Points(&m), SetRef::Front(&sup), &k)?;
                let (_, hi) = bound_finite(&m, &k)?;
                let count = rng.gen_range(1..=4);
                let n_pts = shift(&random_points(&mut rng, count, dim, 1), &hi);
                let n_pts: Vec<Vec<f64>> = n_pts.iter().map(|p| shift(&[p.clone()], &interior_offset(&mut rng, &k)).remove(0)).collect();
                let premise = precedes(SetRef::Points(&m), SetRef::Points(&n_pts), &k)?;
                let concl = precedes(SetRef::Front(&sup), SetRef::Front(&winf(&n_pts, &k)?), &k)?;
                let count = rng.gen_range(1..=4);
                let r_pts = random_points(&mut rng, count, dim, 3);
                let rp = precedes(SetRef::Points(&m), SetRef::Points(&r_pts), &k)?;
                let rc = precedes(SetRef::Front(&sup), SetRef::Front(&winf(&r_pts, &k)?), &k)?;
                Ok((a, b, premise, concl, rp, rc))
            })();
            if let Some((a, b, premise, concl, rp, rc)) = res.guard(chain, tag) {
                res.check(a, || format!("{}: WInf M not below M", tag()));
                res.check(b, || format!("{}: M not below WSup M", tag()));
                res.check(premise, || format!("{}: M not below a set above its bound", tag()));
                res.check(concl, || format!("{}: WSup M not below WInf N", tag()));
                if rp {
                    res.check(rc, || format!("{}: WSup M not below WInf N on a random pair", tag()));
                }
            }
        }
    }
    res
}

/// `epi F*` against its front and its upward closure on random sampled maps.
pub fn epi_bridge_suite(seed: u64, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("epi_bridge");
    let mut rng = rng_for(seed, 11);
    let mut redrawn = 0;
    for case in 0..count {
        res.cases += 1;
        let tag = || format!("map {case}");
        let m = rng.gen_range(2..=3);
        let n = rng.gen_range(1..=2);
        let k = random_cone(&mut rng, m);
        let Some(f) = res.guard(random_sampled_map(&mut rng, n, &k), tag) else { continue };
        let draw = |rng: &mut ChaCha8Rng| {
            let rows = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-2i32..=2) as f64 * 0.5).collect()).collect();
            LinOp::from_rows(rows).expect("rectangular rows")
        };
        // a +inf conjugate has an empty epigraph through the front but not
        // through the sample test, so such operators are redrawn
        let mut l = draw(&mut rng);
        let mut tries = 0;
        while f.conjugate_is_plus_infinity(&l) && tries < 20 {
            l = draw(&mut rng);
            tries += 1;
            redrawn += 1;
        }
        if f.conjugate_is_plus_infinity(&l) {
            res.skipped += 1;
            res.notes.push(format!("{}: every drawn operator gives a +inf conjugate", tag()));
            continue;
        }
        let Some(front) = res.guard(conjugate(&f, &l), tag) else { continue };
        let grid = coarse(front.generators(), m);
        let steps: Vec<Vec<f64>> = k.generators().iter().map(|g| g.iter().map(|v| 0.5 * v).collect()).collect();
        for y in grid.points() {
            let (Some(a), Some(b)) =
                (res.guard(epi_membership(&f, &l, &y), tag), res.guard(epi_membership_via_front(&f, &l, &y), tag))
            else {
                break;
            };
            res.check(a == b, || format!("{}: y = {y:?} sample test {a}, front test {b}", tag()));
            if a {
                for s in &steps {
                    let up: Vec<f64> = y.iter().zip(s).map(|(p, q)| p + q).collect();
                    let ok = epi_membership(&f, &l, &up).unwrap_or(false);
                    res.check(ok, || format!("{}: epigraph not upward closed at {y:?} + {s:?}", tag()));
                }
            }
        }
    }
    if redrawn > 0 {
        res.notes.push(format!("{redrawn} operators redrawn for a +inf conjugate"));
    }
    res
}

/// `(γ) ⇒ (β) ⇒ (α)` and the inclusion `epi ⊇ M ⊇ M+` on random
/// perturbation problems.
pub fn farkas_soundness_suite(seed: u64, instances: usize, probes: usize) -> SuiteResult {
    let mut res = SuiteResult::new("farkas_soundness");
    let mut rng = rng_for(seed, 21);
    for case in 0..instances {
        res.cases += 1;
        let tag = || format!("instance {case}");
        let Some(p) = res.guard(random_perturbation(&mut rng), tag) else { continue };
        let l = random_l(&mut rng, 2);
        let ys = probes_near_front(&mut rng, &p, &l, probes);
        for y in &ys {
            if let Some(s) = res.guard(soundness(&p, &l, y), tag) {
                res.check(s.consistent(), || format!("{}: y = {y:?} gives {s:?}", tag()));
            }
        }
        let ls = [l.clone()];
        let (Some(m), Some(mp)) = (
            res.guard(verify_m_representation(&p, &ls, &ys, Mode::M), tag),
            res.guard(verify_m_representation(&p, &ls, &ys, Mode::MPlus), tag),
        ) else {
            continue;
        };
        res.check(m.superset_ok, || format!("{}: M not inside the epigraph", tag()));
        res.check(mp.superset_ok, || format!("{}: M+ not inside the epigraph", tag()));
        for (a, b) in m.probes.iter().zip(&mp.probes) {
            res.check(!b.beta || a.beta, || format!("{}: y = {:?} in M+ but not in M", tag(), a.y));
        }
    }
    res
}

/// Constructed certificates on K-convex, z-monotone fixtures with
/// `int S ∩ dom ≠ ∅`.
pub fn certificate_suite(seed: u64, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("certificates");
    let mut rng = rng_for(seed, 31);
    for case in 0..count {
        res.cases += 1;
        let tag = || format!("fixture {case}");
        let Some(p) = res.guard(convex_fixture(&mut rng), tag) else { continue };
        let Some(c7) = res.guard(check_condition(&p, Condition::C7, SamplingPolicy::default()), tag) else { continue };
        if c7 == Verdict::Fails {
            res.skipped += 1;
            res.notes.push(format!("{}: sampled Slater part of C7 fails", tag()));
            continue;
        }
        let c0 = res.guard(check_condition(&p, Condition::C0, SamplingPolicy::default()), tag) == Some(Verdict::Holds);
        let l = random_l(&mut rng, 2);
        let ys = probes_near_front(&mut rng, &p, &l, 8);
        let whole: Vec<bool> = ys.iter().map(|y| alpha_on_segments(&p, &l, y)).collect();
        if let Some(r) = res.guard(verify_m_representation(&p, &[l.clone()], &ys, Mode::M), tag) {
            res.check(r.superset_ok, || format!("{}: M not inside the epigraph", tag()));
            for (v, w) in r.probes.iter().zip(&whole) {
                res.check(!w || v.beta, || format!("{}: y = {:?} satisfies (α) without a certificate", tag(), v.y));
            }
        }
        let mut between = 0;
        for (y, w) in ys.into_iter().zip(whole) {
            let Some(inst) = res.guard(FarkasInstance::new(p.clone(), l.clone(), y.clone()), tag) else { continue };
            let sampled = verify_alpha(&inst);
            res.check(!w || sampled, || format!("{}: y = {y:?} passes (α) on segments but not on samples", tag()));
            if !w {
                between += sampled as usize;
                continue;
            }
            let Some(c) = res.guard(construct_certificate(&inst), tag) else { continue };
            res.check(c.verified, || format!("{}: certificate for y = {y:?} not verified", tag()));
            if c0 {
                for s in p.perturbation_cone().generators() {
                    let v: f64 = c.z_star.iter().zip(&s).map(|(a, b)| a * b).sum();
                    res.check(v <= 1e-9, || format!("{}: <z*, s> = {v} for y = {y:?}", tag()));
                }
            }
        }
        if between > 0 {
            res.notes.push(format!("{}: {between} probe(s) pass (α) on samples but cut -int K between them", tag()));
        }
    }
    res
}

/// `Φ₁*(L,T)` against its `⊎` decomposition on small CCVP instances, with a
/// positive `T₂` on odd trials.
pub fn lemma_suite(seed: u64, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("phi1_identity");
    let mut rng = rng_for(seed, 41);
    let entry = |rng: &mut ChaCha8Rng, lo: i32, hi: i32| rng.gen_range(lo..=hi) as f64;
    for trial in 0..count {
        res.cases += 1;
        let tag = || format!("trial {trial}");
        let Some(inst) = res.guard(random_ccvp(&mut rng, trial % 2 == 0), tag) else { continue };
        let l = LinOp::column(&[entry(&mut rng, -1, 1), entry(&mut rng, -1, 1)]);
        let t1 = LinOp::column(&[entry(&mut rng, 0, 1), entry(&mut rng, 0, 1)]);
        let t2 = if trial % 2 == 0 {
            LinOp::column(&[entry(&mut rng, -1, 1), entry(&mut rng, -1, 1)])
        } else {
            LinOp::column(&[entry(&mut rng, 0, 2), entry(&mut rng, 0, 2)])
        };
        if let Some(ok) = res.guard(phi1_conjugate_identity(&inst, &l, &t1, &t2), tag) {
            res.check(ok, || format!("{}: decomposition differs for L = {l:?}, T1 = {t1:?}, T2 = {t2:?}", tag()));
        }
    }
    res
}

fn tight(v: Variant) -> Option<Variant> {
    match v {
        Variant::CCD1l => Some(Variant::CCD1),
        Variant::CCD2l => Some(Variant::CCD2),
        Variant::CCD3l => Some(Variant::CCD3),
        _ => None,
    }
}

/// Exact LP checks on piecewise-linear instances with and without a Slater
/// point.
pub fn scalar_suite(seed: u64, with_slater: usize, without: usize) -> SuiteResult {
    let mut res = SuiteResult::new("scalar");
    let mut rng = rng_for(seed, 51);
    for case in 0..with_slater + without {
        res.cases += 1;
        let want_slater = case < with_slater;
        let tag = || format!("instance {case}");
        let inst = scalar_fixture(&mut rng, want_slater);
        let Some(s) = res.guard(slater(&inst), tag) else { continue };
        res.check(s.holds == want_slater, || format!("{}: Slater point {}", tag(), if s.holds { "found" } else { "missing" }));
        let Some(p) = res.guard(primal(&inst), tag) else { continue };
        let duals: Vec<_> = Variant::ALL.iter().filter_map(|&v| res.guard(build_scalar_dual(&inst, v), tag)).collect();
        for d in &duals {
            res.check(d.value <= p.value + 1e-8, || format!("{}: {:?} dual {} above primal {}", tag(), d.variant, d.value, p.value));
            if want_slater {
                res.check((d.value - p.value).abs() <= 1e-6, || {
                    format!("{}: {:?} dual {} vs primal {}", tag(), d.variant, d.value, p.value)
                });
            }
            if let Some(t) = tight(d.variant) {
                if let Some(td) = duals.iter().find(|e| e.variant == t) {
                    res.check(d.value <= td.value + 1e-8, || format!("{}: {:?} above {:?}", tag(), d.variant, t));
                }
            }
        }
        let n = inst.n();
        let mut pairs = Vec::new();
        for _ in 0..6 {
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-6i32..=6) as f64 * 0.5).collect();
            pairs.push((xs, rng.gen_range(-8i32..=8) as f64 * 0.5));
        }
        if let Some(a2) = res.guard(verify_a2(&inst, &pairs), tag) {
            res.check(a2.superset_ok, || format!("{}: right side of A2 not inside the left", tag()));
            if want_slater {
                res.check(a2.all_agree, || format!("{}: A2 agrees on {}/{} probes", tag(), a2.agree, a2.probes.len()));
            }
        }
        for (xs, _) in pairs.iter().take(3) {
            if let Some(c) = res.guard(scalar_crosscheck(&inst, xs), tag) {
                res.check(c.agree, || format!("{}: crosscheck at {xs:?}: {c:?}", tag()));
            }
        }
    }
    res
}

pub fn all_suites(seed: u64, sizes: &SuiteSizes) -> Vec<SuiteResult> {
    vec![
        weak_sets_suite(seed, sizes.sets_r2, sizes.sets_r3),
        epi_bridge_suite(seed, sizes.maps),
        farkas_soundness_suite(seed, sizes.farkas_instances, sizes.farkas_probes),
        certificate_suite(seed, sizes.convex_fixtures),
        lemma_suite(seed, sizes.ccvp_instances),
        scalar_suite(seed, sizes.scalar_slater, sizes.scalar_violating),
    ]
}
