use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures::{monotone_chain_fixture, scalar_fixture};

fn pl(pieces: &[(f64, f64)]) -> PiecewiseLinear {
    PiecewiseLinear { pieces: pieces.iter().map(|&(a, b)| (vec![a], b)).collect() }
}

fn interval(lo: f64, hi: f64) -> Vec<(Vec<f64>, f64)> {
    vec![(vec![1.0], hi), (vec![-1.0], -lo)]
}

fn trivial_g() -> Affine {
    Affine { a: vec![vec![0.0]], b: vec![0.0] }
}

#[test]
fn conjugate_of_abs() {
    let f = pl(&[(1.0, 0.0), (-1.0, 0.0)]);
    assert_eq!(scalar_conjugate(&f, &[], &[0.5]).unwrap(), 0.0);
    assert_eq!(scalar_conjugate(&f, &[], &[-1.0]).unwrap(), 0.0);
    assert_eq!(scalar_conjugate(&f, &[], &[2.0]).unwrap(), f64::INFINITY);
}

#[test]
fn conjugate_of_an_indicator_is_the_support_function() {
    let f = pl(&[(0.0, 0.0)]);
    for x in [-2.0, -0.5, 0.0, 1.0, 3.0] {
        let want = f64::max(2.0 * x, -x);
        assert!((scalar_conjugate(&f, &interval(-1.0, 2.0), &[x]).unwrap() - want).abs() < 1e-12);
    }
    assert_eq!(scalar_conjugate(&f, &interval(1.0, 0.0), &[0.0]).unwrap(), f64::NEG_INFINITY);
}

#[test]
fn a2_with_a_trivial_constraint() {
    let inst = ScalarInstance { pieces: vec![(vec![0.0], 0.0)], c: interval(0.0, 0.5), g: trivial_g(), s: ConeSpec::orthant(1), composite: None };
    let r = verify_a2(&inst, &[(vec![1.0], 0.5), (vec![1.0], 0.4), (vec![-1.0], 0.0)]).unwrap();
    assert!((r.probes[0].lhs_value - 0.5).abs() < 1e-12);
    assert!((r.probes[0].rhs_value - 0.5).abs() < 1e-12);
    assert_eq!(r.probes.iter().map(|p| p.lhs).collect::<Vec<_>>(), vec![true, false, true]);
    assert!(r.all_agree);
    // G = 0 never has G(x) in -int S
    assert!(!r.slater);
}

#[test]
fn slater_detection() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let good = scalar_fixture(&mut rng, true);
        let s = slater(&good).unwrap();
        assert!(s.holds, "{good:?}");
        assert!(good.feasible(&s.point, 0.0).unwrap());
        assert!(!slater(&scalar_fixture(&mut rng, false)).unwrap().holds);
    }
}

#[test]
fn dual_variants_close_the_gap_under_slater() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let inst = scalar_fixture(&mut rng, true);
        inst.validate().unwrap();
        let p = primal(&inst).unwrap().value;
        for v in Variant::ALL {
            let d = build_scalar_dual(&inst, v).unwrap();
            assert!((d.value - p).abs() < VALUE_TOL, "{v:?}: {} vs {p} on {inst:?}", d.value);
        }
    }
}

#[test]
fn weak_duality_without_slater() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..10 {
        let inst = scalar_fixture(&mut rng, false);
        let p = primal(&inst).unwrap().value;
        for v in Variant::ALL {
            assert!(build_scalar_dual(&inst, v).unwrap().value <= p + VALUE_TOL);
        }
    }
}

#[test]
fn dual_multipliers_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let inst = loop {
        let i = scalar_fixture(&mut rng, true);
        if i.composite.is_some() {
            break i;
        }
    };
    let d = build_scalar_dual(&inst, Variant::CCD3).unwrap();
    assert!(d.lambda1.is_some() && d.x_star.is_some() && d.y_star.is_some());
    let s = inst.s_cone().unwrap();
    assert!(s.dual().contains(&d.lambda2, crate::cone_order::Region::Closed).unwrap());
    let d1 = build_scalar_dual(&inst, Variant::D2).unwrap();
    assert!(d1.lambda1.is_none() && d1.y_star.is_none());
}

#[test]
fn loose_duals_fall_short_without_monotonicity() {
    let inst = monotone_chain_fixture();
    assert!(slater(&inst).unwrap().holds);
    assert!(primal(&inst).unwrap().value.abs() < 1e-12);
    for v in Variant::ALL {
        let want = if v.loose() { -1.0 } else { 0.0 };
        assert!((build_scalar_dual(&inst, v).unwrap().value - want).abs() < 1e-9, "{v:?}");
    }
}

#[test]
fn crosscheck_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..6 {
        let ok = rng.gen_bool(0.5);
        let inst = scalar_fixture(&mut rng, ok);
        let xs: Vec<f64> = (0..inst.n()).map(|_| rng.gen_range(-6i32..=6) as f64 * 0.5).collect();
        let c = scalar_crosscheck(&inst, &xs).unwrap();
        assert!(c.agree, "{c:?}");
    }
}

#[test]
fn instance_json_round_trip() {
    let text = r#"{"pieces": [[[1.0], 0.0], [[-1.0], 0.0]],
        "C_halfspaces": [[[1.0], 1.0], [[-1.0], 1.0]],
        "G": {"A": [[1.0]], "b": [-0.5]},
        "S": {"dim": 1}}"#;
    let inst: ScalarInstance = serde_json::from_str(text).unwrap();
    inst.validate().unwrap();
    assert!((primal(&inst).unwrap().value).abs() < 1e-12);
    let back: ScalarInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
    assert_eq!(back, inst);
    assert!(serde_json::from_str::<ScalarInstance>(r#"{"pieces": [], "G": {"A": [], "b": []}, "S": {"dim": 1}, "x": 1}"#).is_err());
}

#[test]
fn validate_rejects_bad_shapes() {
    let mut inst = monotone_chain_fixture();
    inst.g.b.push(0.0);
    assert!(inst.validate().is_err());
    let mut inst = monotone_chain_fixture();
    inst.c.push((vec![0.0], -1.0));
    assert!(matches!(inst.validate(), Err(Error::Infeasible(_))));
}

mod props {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn conjugate_matches_vertex_enumeration(
            slopes in proptest::collection::vec(-6i32..=6, 1..=3),
            icepts in proptest::collection::vec(-6i32..=6, 3),
            lo in -4i32..=0, width in 0i32..=6, xs in -8i32..=8,
        ) {
            let pieces: Vec<(f64, f64)> = slopes.iter().zip(&icepts).map(|(&a, &b)| (a as f64 * 0.5, b as f64 * 0.5)).collect();
            let f = pl(&pieces);
            let (lo, hi) = (lo as f64 * 0.5, (lo + width) as f64 * 0.5);
            let x_star = xs as f64 * 0.5;
            // the supremum of a concave piecewise-linear function on an
            // interval sits at an endpoint or a breakpoint of f
            let mut cands = vec![lo, hi];
            for (i, (a, b)) in pieces.iter().enumerate() {
                for (c, d) in &pieces[i + 1..] {
                    if a != c {
                        let x = (d - b) / (a - c);
                        if (lo..=hi).contains(&x) {
                            cands.push(x);
                        }
                    }
                }
            }
            let oracle = cands.iter().map(|&x| x_star * x - f.eval(&[x])).fold(f64::NEG_INFINITY, f64::max);
            let got = scalar_conjugate(&f, &interval(lo, hi), &[x_star]).unwrap();
            prop_assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
        }

        #[test]
        fn a2_right_side_is_inside_the_left(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ok = rng.gen_bool(0.5);
        let inst = scalar_fixture(&mut rng, ok);
            let probes: Vec<(Vec<f64>, f64)> = (0..4)
                .map(|_| ((0..inst.n()).map(|_| rng.gen_range(-6i32..=6) as f64 * 0.5).collect(), rng.gen_range(-8i32..=8) as f64 * 0.5))
                .collect();
            let r = verify_a2(&inst, &probes).unwrap();
            prop_assert!(r.superset_ok);
            if r.slater {
                prop_assert!(r.all_agree);
            }
        }
    }
}
