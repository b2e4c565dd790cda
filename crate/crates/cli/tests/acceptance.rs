//! One PASS/FAIL line per acceptance criterion.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use vecdual_cli::suites::{
    certificate_suite, epi_bridge_suite, farkas_soundness_suite, lemma_suite, scalar_suite, weak_sets_suite, SuiteResult,
};
use vecdual_cli::tasks::{run_p1, P1_HAUSDORFF};
use vecdual_cli::{run, RunOptions};

const SEED: u64 = 42;

struct Line {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suite_line(name: &'static str, s: &SuiteResult, secs: f64, limit: Option<f64>, extra: bool) -> Line {
    let in_time = limit.is_none_or(|l| secs < l);
    let mut detail = format!("{} cases, {} checks, {} failures, {:.1}s", s.cases, s.checks, s.failure_count, secs);
    if let Some(f) = s.failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    Line { name, ok: s.passed() && in_time && extra, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

/// Operator counts on the `[-3,3]^2` grid at step 0.1, counted directly.
fn p1_counts() -> (usize, usize, usize) {
    let axis: Vec<i32> = (-30..=30).collect();
    let (mut total, mut dom, mut pos) = (0, 0, 0);
    for &c in &axis {
        for &d in &axis {
            total += 1;
            dom += (c >= 0 || d >= 10) as usize;
            pos += (c >= 0 && d >= 0) as usize;
        }
    }
    (total, dom, pos)
}

fn outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut m = BTreeMap::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        m.insert(p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap());
    }
    m
}

fn p1(first: &Path) -> Line {
    let opts = RunOptions { out: first.to_path_buf(), ..Default::default() };
    let (out, secs) = timed(|| run_p1(&opts));
    let o = match out {
        Ok(o) => o,
        Err(e) => return Line { name: "P1 reproduction", ok: false, detail: e.to_string() },
    };
    let r = &o.report.result;
    let (total, dom, pos) = p1_counts();
    let ops = &r["operators"];
    let counts = ops["total"] == total && ops["in_domain"] == dom && ops["positive"] == pos && ops["weak_duality"] == total;
    let dist = r["hausdorff_to_closed_form"].as_f64().unwrap_or(f64::INFINITY);
    let ok = o.report.status == "pass"
        && counts
        && r["filters_ok"] == true
        && r["weak_duality_ok"] == true
        && dist <= P1_HAUSDORFF
        && secs < 60.0;
    let detail = format!(
        "{} operators ({} in domain, {} positive), weak duality at {}, Hausdorff {dist:.2e}, {secs:.1}s",
        ops["total"], ops["in_domain"], ops["positive"], ops["weak_duality"]
    );
    Line { name: "P1 reproduction", ok, detail }
}

fn determinism(p1_first: &Path, root: &Path) -> Line {
    let scenarios = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut files: Vec<PathBuf> = fs::read_dir(&scenarios)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_stem().is_some_and(|s| s != "p1"))
        .collect();
    files.sort();
    let mut differing = Vec::new();
    for f in &files {
        let stem = f.file_stem().unwrap().to_string_lossy().into_owned();
        let dirs = [root.join(format!("{stem}_a")), root.join(format!("{stem}_b"))];
        for d in &dirs {
            if let Err(e) = run(f, &RunOptions { out: d.clone(), ..Default::default() }) {
                return Line { name: "determinism", ok: false, detail: format!("{stem}: {e}") };
            }
        }
        if outputs(&dirs[0]) != outputs(&dirs[1]) {
            differing.push(stem);
        }
    }
    let again = root.join("p1_b");
    let p1_same = run_p1(&RunOptions { out: again.clone(), ..Default::default() }).is_ok() && outputs(p1_first) == outputs(&again);
    if !p1_same {
        differing.push("p1".into());
    }
    let detail = format!("{} scenarios plus p1 run twice, {} differ {differing:?}", files.len(), differing.len());
    Line { name: "determinism", ok: differing.is_empty() && !files.is_empty(), detail }
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temp dir");
    let p1_dir = tmp.path().join("p1_a");
    let mut lines = vec![p1(&p1_dir)];

    let (s, t) = timed(|| weak_sets_suite(SEED, 100, 50));
    lines.push(suite_line("weak-sets suite", &s, t, Some(120.0), s.cases == 150));
    let (s, t) = timed(|| epi_bridge_suite(SEED, 100));
    lines.push(suite_line("epi bridge", &s, t, None, s.cases == 100));
    let (s, t) = timed(|| farkas_soundness_suite(SEED, 50, 20));
    lines.push(suite_line("Farkas soundness", &s, t, None, s.cases == 50));
    let (s, t) = timed(|| certificate_suite(SEED, 20));
    lines.push(suite_line("certificates", &s, t, None, s.cases == 20 && s.skipped == 0));
    let (s, t) = timed(|| lemma_suite(SEED, 20));
    lines.push(suite_line("Φ₁ identity", &s, t, None, s.cases == 20));
    let (s, t) = timed(|| scalar_suite(SEED, 20, 5));
    lines.push(suite_line("scalar suite", &s, t, None, s.cases == 25));

    lines.push(determinism(&p1_dir, tmp.path()));

    let mut all = true;
    for (i, l) in lines.iter().enumerate() {
        all &= l.ok;
        println!("{} {}. {}: {}", if l.ok { "PASS" } else { "FAIL" }, i + 1, l.name, l.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
