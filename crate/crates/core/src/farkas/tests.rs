use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cone_order::ExtendedPoint;
use crate::fixtures::{alpha_on_segments, convex_fixture, nonconvex_fixture, probes_near_front, random_l, random_perturbation};
use crate::linalg::rank;
use crate::mappings::{Lattice, SampledMap};
use crate::perturbation::{p1_problem, P1Options};

fn k2() -> PolyhedralCone {
    PolyhedralCone::orthant(2)
}

fn problem(xs: Vec<f64>, zs: Vec<f64>, ops: Vec<LinOp>, f: impl Fn(f64, f64) -> Option<Vec<f64>>) -> PerturbationProblem {
    let lat = Lattice::new(vec![xs, zs]).unwrap();
    let phi = SampledMap::tabulate(lat, &k2(), |p| f(p[0], p[1]).map_or(ExtendedPoint::PlusInf, ExtendedPoint::Finite)).unwrap();
    PerturbationProblem::new(phi, 1, PolyhedralCone::orthant(1).into(), ops).unwrap()
}

fn z_free() -> PerturbationProblem {
    let ops = vec![LinOp::column(&[0.0, 0.0]), LinOp::column(&[1.0, -1.0])];
    problem(Lattice::axis(-1.0, 1.0, 0.5), Lattice::axis(-1.0, 1.0, 0.5), ops, |x, _| Some(vec![x, x * x]))
}

fn inst(p: &PerturbationProblem, y: &[f64]) -> FarkasInstance {
    FarkasInstance::new(p.clone(), LinOp::zeros(2, 1), y.to_vec()).unwrap()
}

#[test]
fn alpha_on_the_zero_map() {
    let p = problem(vec![0.0, 1.0], vec![0.0], vec![], |_, _| Some(vec![0.0, 0.0]));
    assert!(verify_alpha(&inst(&p, &[0.0, 0.0])));
    assert!(!verify_alpha(&inst(&p, &[-1.0, -1.0])));
}

#[test]
fn alpha_on_the_worked_example_matches_a_curve_scan() {
    let p = p1_problem(&P1Options { x: (-5.0, 3.0, 0.01), z: (-1.0, 1.0, 0.5), cd: (0.0, 0.0, 1.0) }).unwrap();
    for y in [[0.0, 2.0], [0.0, 0.0], [3.0, 0.5], [6.0, 1.5], [4.0, -0.5]] {
        // curve points (x, x^2 + 2x) for x <= 0 against -y - int K
        let oracle = !(0..=500).map(|i| -5.0 + i as f64 * 0.01).any(|x| x + y[0] < -1e-9 && x * x + 2.0 * x + y[1] < -1e-9);
        assert_eq!(verify_alpha(&inst(&p, &y)), oracle, "y = {y:?}");
    }
    assert!(verify_alpha(&inst(&p, &[0.0, 2.0])));
}

#[test]
fn zero_operator_certifies_a_z_free_map() {
    let p = z_free();
    for y in [[0.0, 0.0], [0.5, 0.25], [1.0, -2.0], [-2.0, -2.0]] {
        let i = inst(&p, &y);
        let a = verify_alpha(&i);
        assert_eq!(search_certificate(&i, p.operators(), Mode::M).unwrap().is_some(), a);
        assert_eq!(certifies(&p, &i.l, &LinOp::zeros(2, 1), &y).unwrap(), a);
    }
}

#[test]
fn hostile_grid_misses_a_certificate() {
    let ops = vec![LinOp::column(&[0.0, 0.0]), LinOp::column(&[1.0, 1.0]), LinOp::column(&[0.5, 2.0])];
    let p = problem(vec![0.0], vec![0.0, 1.0], ops, |_, z| Some(if z > 0.5 { vec![-1.0, -1.0] } else { vec![0.0, 0.0] }));
    let i = inst(&p, &[0.0, 0.0]);
    assert!(verify_alpha(&i));
    assert!(search_certificate(&i, p.operators(), Mode::M).unwrap().is_none());
    let c = construct_certificate(&i).unwrap();
    assert!(c.verified);
}

#[test]
fn constructed_certificate_on_a_scalarizable_map() {
    let g = Lattice::axis(-1.0, 1.0, 0.25);
    let p = problem(g.clone(), g, vec![], |x, z| Some(vec![x * x + z, x * x + z]));
    for (y, needs_t) in [([1.0, 1.0], false), ([0.0, 0.0], true)] {
        let i = inst(&p, &y);
        assert!(verify_alpha(&i));
        let c = construct_certificate(&i).unwrap();
        assert!(c.verified && !c.heuristic);
        assert_eq!(c.t_bar.max_abs() > 0.0, needs_t);
    }
}

#[test]
fn z_free_map_gets_the_zero_certificate() {
    let p = z_free();
    let c = construct_certificate(&inst(&p, &[0.5, 0.25])).unwrap();
    assert!(c.z_star.iter().all(|v| *v == 0.0));
    assert_eq!(c.t_bar.max_abs(), 0.0);
    assert!(c.verified);
}

#[test]
fn certificate_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let p = convex_fixture(&mut rng).unwrap();
        let l = random_l(&mut rng, 2);
        for y in probes_near_front(&mut rng, &p, &l, 4) {
            let i = FarkasInstance::new(p.clone(), l.clone(), y).unwrap();
            if !alpha_on_segments(&p, &l, &i.y) {
                continue;
            }
            assert!(verify_alpha(&i));
            let c = construct_certificate(&i).unwrap();
            assert!((dot(&c.y_star, &c.k0) + 1.0).abs() < 1e-9);
            assert!(rank(&c.t_bar.to_rows(), 1e-9) <= 1);
            let want = LinOp::outer(&c.k0, &c.z_star).neg();
            assert!(c.t_bar.add(&want.neg()).unwrap().max_abs() < 1e-12);
        }
    }
}

#[test]
fn c0_fixtures_give_nonpositive_z_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..5 {
        let p = convex_fixture(&mut rng).unwrap();
        assert_eq!(check_condition(&p, Condition::C0, SamplingPolicy::default()).unwrap(), Verdict::Holds);
        assert_eq!(check_condition(&p, Condition::C7, SamplingPolicy::default()).unwrap(), Verdict::Holds);
        let l = random_l(&mut rng, 2);
        for y in probes_near_front(&mut rng, &p, &l, 4) {
            let i = FarkasInstance::new(p.clone(), l.clone(), y).unwrap();
            if !alpha_on_segments(&p, &l, &i.y) {
                continue;
            }
            assert!(verify_alpha(&i));
            let c = construct_certificate(&i).unwrap();
            assert!(c.c0 && c.verified && c.positive);
            for s in p.perturbation_cone().generators() {
                assert!(dot(&c.z_star, &s) <= 1e-9);
            }
        }
    }
}

#[test]
fn nonconvex_fixture_is_flagged() {
    let p = nonconvex_fixture().unwrap();
    let l = LinOp::zeros(1, 1);
    let r = verify_m_representation(&p, &[l.clone()], &[vec![0.0], vec![-1.0], vec![2.0], vec![5.0]], Mode::M).unwrap();
    assert!(!r.holds_on_probes && r.superset_ok);
    let bad: Vec<usize> = r.counterexamples.iter().map(|c| c.probe).collect();
    assert_eq!(bad, vec![0, 2]);
    assert!(r.counterexamples.iter().all(|c| c.kind == Failure::GridLimitation));
    assert!(r.probes[3].beta);
    assert!(!sampled_convexity(&p));
    let f = check_farkas_equivalence(&p, &[l], &[vec![0.0]], Mode::M).unwrap();
    assert_eq!(f.alpha_without_beta, 1);
    assert!(f.equivalence_rate < 1.0);
}

#[test]
fn worked_example_grid_and_construction_agree() {
    let p = p1_problem(&P1Options { x: (-3.0, 1.0, 0.25), z: (-2.0, 2.0, 0.5), cd: (-3.0, 3.0, 0.5) }).unwrap();
    let i = inst(&p, &[0.0, 2.0]);
    let c = construct_certificate(&i).unwrap();
    assert!(c.verified);
    let t = search_certificate(&i, p.operators(), Mode::M).unwrap().expect("grid certificate");
    assert!(certifies(&p, &i.l, &t, &i.y).unwrap());
}

#[test]
fn representation_and_equivalence_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..6 {
        let p = random_perturbation(&mut rng).unwrap();
        let l = vec![LinOp::zeros(2, 1), random_l(&mut rng, 2)];
        let ys = probes_near_front(&mut rng, &p, &l[0], 3);
        for mode in [Mode::M, Mode::MPlus] {
            let m = verify_m_representation(&p, &l, &ys, mode).unwrap();
            let f = check_farkas_equivalence(&p, &l, &ys, mode).unwrap();
            assert!(m.superset_ok);
            assert_eq!(m.holds_on_probes, f.equivalence_rate == 1.0);
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn gamma_beta_alpha_chain(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_perturbation(&mut rng).unwrap();
            let l = random_l(&mut rng, 2);
            for y in probes_near_front(&mut rng, &p, &l, 4) {
                prop_assert!(soundness(&p, &l, &y).unwrap().consistent());
            }
        }
    }
}
