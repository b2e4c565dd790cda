//! The scenario tasks and the report they produce.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use vecdual_core::cone_order::TOL_STRICT;
use vecdual_core::farkas::{check_farkas_equivalence, soundness, verify_m_representation, Mode};
use vecdual_core::fixtures::probes_near_front;
use vecdual_core::mappings::LinOp;
use vecdual_core::perturbation::{
    build_ccvd, example_p1, front_polyline, hausdorff, p1_problem, primal_value, strong_duality_check, table_cap,
    DualReport, P1Options, PerturbationProblem,
};
use vecdual_core::scalar_fl::{build_scalar_dual, primal, scalar_crosscheck, slater, verify_a2, ScalarInstance, Variant};
use vecdual_core::weak_sets::FrontSet;

use crate::csv_out::{emit_front_csv, probe_grid};
use crate::scenario::{Instance, Scenario, Task, Window};
use crate::suites::all_suites;
use crate::{CliError, RunOptions, EXIT_ASSERTION, EXIT_OK};

pub const SEMANTICS: &str = "sampled relaxation";
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Probe tolerance of the worked example's strong-duality gap.
pub const P1_TOLERANCE: f64 = 1e-2;
/// Largest Hausdorff distance allowed between the computed and the closed-form
/// primal front of the worked example.
pub const P1_HAUSDORFF: f64 = 2e-3;
const P1_WINDOW: Window = Window { lo: -6.0, hi: 16.0, res: 221 };
const RANDOM_PROBES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct Audit {
    pub grid_ids: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub semantics: &'static str,
    pub table_cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub task: Task,
    pub seed: u64,
    pub audit: Audit,
    pub result: Value,
    pub failures: Vec<String>,
    pub status: &'static str,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
    pub written: Vec<PathBuf>,
}

struct Ctx {
    seed: u64,
    audit: Audit,
}

impl Ctx {
    fn grid(&mut self, id: String) {
        if !self.audit.grid_ids.contains(&id) {
            self.audit.grid_ids.push(id);
        }
    }

    fn tol(&mut self, name: &str, v: f64) {
        self.audit.tolerances.insert(name.into(), v);
    }
}

#[derive(Default)]
struct TaskOut {
    result: Value,
    failures: Vec<String>,
    front: Option<FrontSet>,
    window: Option<Window>,
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Build everything a task needs up front so that input errors surface before
/// any work is done.
pub fn prepare(sc: &Scenario) -> Result<Option<Instance>, CliError> {
    if let Some(g) = &sc.l_grid {
        g.build()?;
    }
    if let Some(t) = &sc.t_grids {
        t.ccvd(None)?;
    }
    if let Some(m) = &sc.mode {
        mode(Some(m))?;
    }
    match sc.task {
        Task::Properties => Ok(None),
        Task::ExampleP1 if sc.instance.is_none() => Ok(Some(Instance::ExampleP1(P1Options::default()))),
        _ => sc.instance().map(Some),
    }
}

pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let instance = prepare(sc)?;
    let seed = opts.seed.or(sc.seed).unwrap_or(0);
    let mut ctx = Ctx {
        seed,
        audit: Audit { grid_ids: Vec::new(), tolerances: BTreeMap::new(), semantics: SEMANTICS, table_cap: table_cap() },
    };
    ctx.tol("strict", TOL_STRICT);
    let out = match (sc.task, instance) {
        (Task::Properties, _) => properties(sc, &mut ctx),
        (_, None) => unreachable!("prepare builds an instance for every other task"),
        (Task::Primal, Some(i)) => primal_task(sc, &mut ctx, i)?,
        (Task::Dual, Some(i)) => dual_task(sc, &mut ctx, i)?,
        (Task::Farkas, Some(i)) => farkas_task(sc, &mut ctx, i, false)?,
        (Task::Representation, Some(i)) => farkas_task(sc, &mut ctx, i, true)?,
        (Task::A2, Some(i)) => a2_task(sc, &mut ctx, i)?,
        (Task::ExampleP1, Some(Instance::ExampleP1(o))) => p1_task(&mut ctx, &o)?,
        (Task::ExampleP1, Some(_)) => return Err(CliError::Schema("example_p1 takes an example_p1 instance".into())),
    };

    std::fs::create_dir_all(&opts.out).map_err(|e| CliError::Io(format!("{}: {e}", opts.out.display())))?;
    let mut written = Vec::new();
    let window = sc.probe.window.or(out.window).map(|w| Window { res: opts.probe_res.unwrap_or(w.res), ..w });
    if let (Some(front), Some(w)) = (&out.front, window) {
        if front.is_finite() {
            ctx.grid(format!("probe {}", probe_grid(w, front.dim()).id()));
            let path = opts.out.join(&sc.output.front_csv);
            emit_front_csv(front, w, &path)?;
            written.push(path);
        }
    }
    let status = if out.failures.is_empty() { "pass" } else { "fail" };
    let exit_code = if out.failures.is_empty() { EXIT_OK } else { EXIT_ASSERTION };
    let report = Report {
        scenario: sc.name.clone(),
        task: sc.task,
        seed,
        audit: ctx.audit,
        result: out.result,
        failures: out.failures,
        status,
    };
    let path = opts.out.join(&sc.output.report);
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    written.push(path);
    Ok(RunOutcome { report, exit_code, written })
}

fn mode(m: Option<&String>) -> Result<Mode, CliError> {
    match m.map(String::as_str) {
        None | Some("M") => Ok(Mode::M),
        Some("M+") => Ok(Mode::MPlus),
        Some(other) => Err(CliError::Schema(format!("mode must be \"M\" or \"M+\", got {other:?}"))),
    }
}

/// The L grid of the scenario, the zero operator when absent.
fn l_grid(sc: &Scenario, ctx: &mut Ctx, m: usize, x_dim: usize) -> Result<Vec<LinOp>, CliError> {
    let ls = match &sc.l_grid {
        Some(g) => g.build()?,
        None => vec![LinOp::zeros(m, x_dim)],
    };
    for l in &ls {
        if l.rows() != m || l.cols() != x_dim {
            return Err(CliError::Schema(format!("L is {}x{}, need {m}x{x_dim}", l.rows(), l.cols())));
        }
    }
    ctx.grid(format!("L grid of {} operators", ls.len()));
    Ok(ls)
}

fn perturbation(i: &Instance, ctx: &mut Ctx) -> Result<Option<PerturbationProblem>, CliError> {
    let p = match i {
        Instance::Perturbation(p) => p.clone(),
        Instance::ExampleP1(o) => p1_problem(o)?,
        _ => return Ok(None),
    };
    ctx.grid(format!("phi {}", p.grid_id()));
    ctx.grid(format!("T grid of {} operators", p.operators().len()));
    Ok(Some(p))
}

fn primal_task(sc: &Scenario, ctx: &mut Ctx, i: Instance) -> Result<TaskOut, CliError> {
    if let Instance::Scalar(s) = &i {
        return Ok(TaskOut { result: json(&primal(s)?), ..Default::default() });
    }
    let mut fronts = Vec::new();
    let mut entries = Vec::new();
    if let Some(p) = perturbation(&i, ctx)? {
        for l in l_grid(sc, ctx, p.cone().dim(), p.x_dim())? {
            let f = primal_value(&p, &l)?;
            entries.push(json!({ "L": l, "front": f }));
            fronts.push(f);
        }
    } else if let Instance::Ccvp(inst) = &i {
        ctx.grid(format!("X {}", inst.x_lattice().id()));
        for l in l_grid(sc, ctx, inst.k().dim(), inst.x_dim())? {
            let f = inst.primal(&l)?;
            entries.push(json!({ "L": l, "front": f }));
            fronts.push(f);
        }
    }
    Ok(TaskOut { result: Value::Array(entries), front: fronts.into_iter().next(), ..Default::default() })
}

fn dual_checks(r: &DualReport, what: &str, failures: &mut Vec<String>) {
    if !r.weak_duality_ok {
        let bad = r.operators.iter().filter(|e| !e.weak_duality).count();
        failures.push(format!("{what}: weak duality fails for {bad} operators"));
    }
    if !r.chain_ok {
        failures.push(format!("{what}: loose dual, dual and primal are not ordered"));
    }
}

fn dual_task(sc: &Scenario, ctx: &mut Ctx, i: Instance) -> Result<TaskOut, CliError> {
    let tol = sc.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    ctx.tol("dual", tol);
    let mut out = TaskOut::default();
    let mut entries = Vec::new();
    match &i {
        Instance::Scalar(s) => return scalar_dual(s, tol),
        Instance::Ccvp(inst) => {
            ctx.grid(format!("X {}", inst.x_lattice().id()));
            let variants: Vec<u8> = sc.variant.map_or_else(|| (1..=4).collect(), |v| vec![v]);
            let tg = sc.t_grids.clone().unwrap_or_default();
            for l in l_grid(sc, ctx, inst.k().dim(), inst.x_dim())? {
                let grids = tg.ccvd(Some(l.clone()))?;
                for &v in &variants {
                    let r = build_ccvd(inst, v, sc.loose, &grids)?;
                    dual_checks(&r, &format!("variant {v} at L = {:?}", l.to_rows()), &mut out.failures);
                    out.front.get_or_insert_with(|| r.dual_front.clone());
                    entries.push(json!({ "variant": v, "loose": sc.loose, "L": l, "report": r }));
                }
            }
        }
        _ => {
            let p = perturbation(&i, ctx)?.expect("perturbation-like instance");
            for l in l_grid(sc, ctx, p.cone().dim(), p.x_dim())? {
                let r = strong_duality_check(&p, &l, tol)?;
                dual_checks(&r, &format!("L = {:?}", l.to_rows()), &mut out.failures);
                out.front.get_or_insert_with(|| r.dual_front.clone());
                entries.push(json!({ "L": l, "report": r }));
            }
        }
    }
    out.result = Value::Array(entries);
    Ok(out)
}

fn scalar_dual(s: &ScalarInstance, tol: f64) -> Result<TaskOut, CliError> {
    let p = primal(s)?;
    let sl = slater(s)?;
    let mut failures = Vec::new();
    let mut duals = Vec::new();
    for v in Variant::ALL {
        duals.push(build_scalar_dual(s, v)?);
    }
    for d in &duals {
        if d.value > p.value + tol {
            failures.push(format!("{:?}: dual value {} above primal {}", d.variant, d.value, p.value));
        }
        if sl.holds && (d.value - p.value).abs() > tol {
            failures.push(format!("{:?}: gap {} under a Slater point", d.variant, p.value - d.value));
        }
    }
    for (loose, tight) in [(Variant::CCD1l, Variant::CCD1), (Variant::CCD2l, Variant::CCD2), (Variant::CCD3l, Variant::CCD3)] {
        let val = |v| duals.iter().find(|d| d.variant == v).map_or(f64::NAN, |d| d.value);
        if val(loose) > val(tight) + tol {
            failures.push(format!("{loose:?} above {tight:?}"));
        }
    }
    Ok(TaskOut { result: json!({ "primal": p, "slater": sl, "duals": duals }), failures, ..Default::default() })
}

/// Probe values for one L: listed points, window points, or seeded probes
/// near the zero-slice front.
fn probes(sc: &Scenario, ctx: &mut Ctx, rng: &mut ChaCha8Rng, p: &PerturbationProblem, l: &LinOp) -> Vec<Vec<f64>> {
    if let Some(pts) = &sc.probe.points {
        return pts.clone();
    }
    if let Some(w) = sc.probe.window {
        let g = probe_grid(w, p.cone().dim());
        ctx.grid(format!("probe {}", g.id()));
        return g.points().collect();
    }
    probes_near_front(rng, p, l, sc.probe.random.unwrap_or(RANDOM_PROBES))
}

fn farkas_task(sc: &Scenario, ctx: &mut Ctx, i: Instance, representation: bool) -> Result<TaskOut, CliError> {
    let p = perturbation(&i, ctx)?.ok_or_else(|| CliError::Schema("this task needs a perturbation instance".into()))?;
    let mode = mode(sc.mode.as_ref())?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut out = TaskOut::default();
    let mut entries = Vec::new();
    for l in l_grid(sc, ctx, p.cone().dim(), p.x_dim())? {
        let ys = probes(sc, ctx, &mut rng, &p, &l);
        let at = format!("L = {:?}", l.to_rows());
        let ls = [l.clone()];
        if representation {
            let r = verify_m_representation(&p, &ls, &ys, mode)?;
            if !r.superset_ok {
                out.failures.push(format!("{at}: a probe in M lies outside the epigraph"));
            }
            entries.push(json!({
                "L": l,
                "mode": r.mode,
                "probes": r.probes.len(),
                "holds_on_probes": r.holds_on_probes,
                "superset_ok": r.superset_ok,
                "counterexamples": r.counterexamples,
            }));
        } else {
            let r = check_farkas_equivalence(&p, &ls, &ys, mode)?;
            if r.beta_without_alpha > 0 {
                out.failures.push(format!("{at}: {} probes certified without (α)", r.beta_without_alpha));
            }
            let mut sound = Vec::new();
            for y in &ys {
                let s = soundness(&p, &l, y)?;
                if !s.consistent() {
                    out.failures.push(format!("{at}: y = {y:?} breaks (γ) ⇒ (β) ⇒ (α): {s:?}"));
                }
                sound.push(s);
            }
            let verdicts: Vec<Value> = r
                .verdicts
                .iter()
                .map(|v| json!({ "y": v.y, "alpha": v.alpha, "beta": v.beta, "witness": v.witness, "note": v.note }))
                .collect();
            entries.push(json!({
                "L": l,
                "mode": r.mode,
                "probes": r.probes,
                "agree": r.agree,
                "equivalence_rate": r.equivalence_rate,
                "alpha_without_beta": r.alpha_without_beta,
                "beta_without_alpha": r.beta_without_alpha,
                "via_grid": r.via_grid,
                "via_construction": r.via_construction,
                "verdicts": verdicts,
                "soundness": sound,
            }));
        }
    }
    out.result = Value::Array(entries);
    Ok(out)
}

fn a2_task(sc: &Scenario, ctx: &mut Ctx, i: Instance) -> Result<TaskOut, CliError> {
    let Instance::Scalar(s) = i else {
        return Err(CliError::Schema("a2 needs a scalar instance".into()));
    };
    let tol = sc.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    ctx.tol("crosscheck", tol);
    let pairs = match &sc.probe.pairs {
        Some(p) => p.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            (0..sc.probe.random.unwrap_or(RANDOM_PROBES))
                .map(|_| {
                    let xs = (0..s.n()).map(|_| rng.gen_range(-6i32..=6) as f64 * 0.5).collect();
                    (xs, rng.gen_range(-8i32..=8) as f64 * 0.5)
                })
                .collect()
        }
    };
    let r = verify_a2(&s, &pairs)?;
    let mut failures = Vec::new();
    if !r.superset_ok {
        failures.push("a right-hand membership without the left-hand one".to_string());
    }
    if r.slater && !r.all_agree {
        failures.push(format!("sides agree on {}/{} probes under a Slater point", r.agree, r.probes.len()));
    }
    let mut seen: Vec<&Vec<f64>> = Vec::new();
    let mut cross = Vec::new();
    for (xs, _) in &pairs {
        if seen.contains(&xs) {
            continue;
        }
        seen.push(xs);
        let c = scalar_crosscheck(&s, xs)?;
        if !c.agree {
            failures.push(format!("crosscheck disagrees at x* = {xs:?}"));
        }
        cross.push(c);
    }
    Ok(TaskOut { result: json!({ "a2": r, "crosscheck": cross }), failures, ..Default::default() })
}

fn properties(sc: &Scenario, ctx: &mut Ctx) -> TaskOut {
    let sizes = sc.suites.unwrap_or_default();
    ctx.tol("scalar_gap", 1e-6);
    ctx.tol("certificate_z_star", 1e-9);
    let suites = all_suites(ctx.seed, &sizes);
    let mut failures = Vec::new();
    for s in &suites {
        failures.extend(s.failures.iter().map(|f| format!("{}: {f}", s.name)));
        if s.failure_count > s.failures.len() {
            failures.push(format!("{}: {} more failures", s.name, s.failure_count - s.failures.len()));
        }
    }
    TaskOut { result: json!({ "sizes": sizes, "suites": suites }), failures, ..Default::default() }
}

/// Closed-form primal front of the worked example at `L = 0` on the window
/// `x ∈ [-5, 0]`: the curve `(x, x² + 2x)` for `x ∈ [-5, -1]`, the vertical
/// tail above `(-5, 15)` and the horizontal tail right of `(-1, -1)`.
pub fn p1_closed_form(y_max: f64, spacing: f64) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    let n = ((y_max - 15.0) / spacing).ceil() as usize;
    for i in (1..=n).rev() {
        pts.push(vec![-5.0, 15.0 + (y_max - 15.0) * i as f64 / n as f64]);
    }
    let mut x = -5.0f64;
    while x < -1.0 {
        pts.push(vec![x, x * x + 2.0 * x]);
        x += spacing / (1.0 + (2.0 * x + 2.0).powi(2)).sqrt();
    }
    pts.push(vec![-1.0, -1.0]);
    let n = (1.0 / spacing).ceil() as usize;
    for i in 1..=n {
        pts.push(vec![-1.0 + i as f64 / n as f64, -1.0]);
    }
    pts
}

/// Hausdorff distance between the computed primal front and the closed form
/// on `x ∈ [-5, 0]`, `y ≤ y_max`.
pub fn p1_front_distance(front: &FrontSet, y_max: f64) -> Result<f64, CliError> {
    let spacing = 5e-4;
    let line = front_polyline(front, -6.0, y_max, spacing)?;
    let got: Vec<Vec<f64>> = line.into_iter().filter(|p| (-5.0 - 1e-9..=1e-9).contains(&p[0])).collect();
    Ok(hausdorff(&got, &p1_closed_form(y_max, spacing)))
}

fn p1_task(ctx: &mut Ctx, o: &P1Options) -> Result<TaskOut, CliError> {
    ctx.tol("gap", P1_TOLERANCE);
    ctx.tol("hausdorff", P1_HAUSDORFF);
    let (p, r) = example_p1(o)?;
    ctx.grid(format!("phi {}", p.grid_id()));
    ctx.grid(format!("T grid of {} operators", p.operators().len()));
    let mut failures = Vec::new();
    let mut filter_misses = Vec::new();
    for e in &r.operators {
        let (c, d) = (e.operator.get(0, 0), e.operator.get(1, 0));
        let dom = c >= -1e-9 || d >= 1.0 - 1e-9;
        let pos = c >= -1e-9 && d >= -1e-9;
        if e.in_domain != dom || e.positive != pos {
            filter_misses.push([c, d]);
        }
    }
    if !filter_misses.is_empty() {
        failures.push(format!("{} operators disagree with the domain filters, first {:?}", filter_misses.len(), filter_misses[0]));
    }
    dual_checks(&r, "L = 0", &mut failures);
    let y_max = P1_WINDOW.hi;
    let dist = p1_front_distance(&r.primal_front, y_max)?;
    if !(dist <= P1_HAUSDORFF) {
        failures.push(format!("primal front is {dist} from the closed form"));
    }
    let count = |f: &dyn Fn(&vecdual_core::perturbation::OperatorEval) -> bool| r.operators.iter().filter(|e| f(e)).count();
    let result = json!({
        "options": o,
        "operators": {
            "total": r.operators.len(),
            "in_domain": count(&|e| e.in_domain),
            "positive": count(&|e| e.positive),
            "weak_duality": count(&|e| e.weak_duality),
        },
        "filters_ok": filter_misses.is_empty(),
        "weak_duality_ok": r.weak_duality_ok,
        "chain_ok": r.chain_ok,
        "hausdorff_to_closed_form": dist,
        "strong_duality_gap": r.strong_duality_gap,
        "strong_duality": r.strong_duality,
        "attaining_operators": r.attaining_operators,
        "primal_front": r.primal_front,
        "dual_front": r.dual_front,
        "loose_dual_front": r.loose_dual_front,
    });
    Ok(TaskOut { result, failures, front: Some(r.primal_front), window: Some(P1_WINDOW) })
}

/// The worked example with its default grids, as the `p1` subcommand runs it.
pub fn p1_scenario() -> Scenario {
    Scenario {
        name: "example_p1".into(),
        task: Task::ExampleP1,
        seed: None,
        instance: None,
        instance_file: None,
        variant: None,
        loose: false,
        l_grid: None,
        t_grids: None,
        probe: Default::default(),
        tolerance: None,
        mode: None,
        suites: None,
        output: Default::default(),
    }
}

pub fn run_p1(opts: &RunOptions) -> Result<RunOutcome, CliError> {
    run_scenario(&p1_scenario(), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_is_evenly_spaced_along_the_arc() {
        let pts = p1_closed_form(16.0, 1e-2);
        assert_eq!(pts[0], vec![-5.0, 16.0]);
        assert!(pts.contains(&vec![-5.0, 15.0]));
        assert!(pts.contains(&vec![-1.0, -1.0]));
        assert_eq!(pts.last().unwrap(), &vec![0.0, -1.0]);
        let gap = pts.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).fold(0.0, f64::max);
        assert!(gap <= 1e-2 + 1e-9, "gap {gap}");
    }
}
