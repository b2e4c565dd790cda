//! Seeded random instances shared by the property tests, the acceptance
//! suite and the scenario runner.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cone_order::{ConeSpec, ExtendedPoint, PolyhedralCone};
use crate::error::Result;
use crate::linalg::{dot, norm2, scale, sub};
use crate::mappings::{Lattice, LinOp, SampledMap};
use crate::perturbation::{CCVPInstance, PerturbationProblem};
use crate::scalar_fl::{Affine, Composite, ScalarInstance};

/// A random pointed solid cone in `R^2` or `R^3`.
pub fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> PolyhedralCone {
    match dim {
        2 => {
            let a = rng.gen_range(-PI / 3.0..PI / 4.0);
            let w = rng.gen_range(PI / 5.0..5.0 * PI / 6.0);
            let g = |t: f64| vec![t.cos(), t.sin()];
            PolyhedralCone::from_generators(2, vec![g(a), g(a + w)]).expect("wedge narrower than a half plane")
        }
        3 => {
            let axis = loop {
                let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = norm2(&v);
                if n > 0.2 && n <= 1.0 {
                    break scale(&v, 1.0 / n);
                }
            };
            let seed = if axis[0].abs() < 0.9 { vec![1.0, 0.0, 0.0] } else { vec![0.0, 1.0, 0.0] };
            let u = {
                let v = sub(&seed, &scale(&axis, dot(&seed, &axis)));
                scale(&v, 1.0 / norm2(&v))
            };
            let v = vec![axis[1] * u[2] - axis[2] * u[1], axis[2] * u[0] - axis[0] * u[2], axis[0] * u[1] - axis[1] * u[0]];
            let n = rng.gen_range(3..=4);
            let half = rng.gen_range(PI / 9.0..PI / 3.0);
            let gens = (0..n)
                .map(|i| {
                    let phi = 2.0 * PI * i as f64 / n as f64 + rng.gen_range(-0.3..0.3);
                    (0..3).map(|j| half.cos() * axis[j] + half.sin() * (phi.cos() * u[j] + phi.sin() * v[j])).collect()
                })
                .collect();
            PolyhedralCone::from_generators(3, gens).expect("cone around an axis is proper")
        }
        _ => PolyhedralCone::orthant(dim),
    }
}

/// `n` points with coordinates on the half-integer lattice in `[-r, r]`.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, r: i32) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-2 * r..=2 * r) as f64 * 0.5).collect()).collect()
}

/// A map on a small lattice in `R^in_dim` with random half-integer values and
/// about a fifth of the samples at `+inf`; the first sample stays finite.
pub fn random_sampled_map(rng: &mut ChaCha8Rng, in_dim: usize, cone: &PolyhedralCone) -> Result<SampledMap> {
    let lat = Lattice::new(vec![Lattice::axis(-1.0, 1.0, 0.5); in_dim])?;
    let m = cone.dim();
    let values: Vec<ExtendedPoint> = (0..lat.len())
        .map(|i| {
            if i > 0 && rng.gen_bool(0.2) {
                ExtendedPoint::PlusInf
            } else {
                ExtendedPoint::Finite((0..m).map(|_| rng.gen_range(-4i32..=4) as f64 * 0.5).collect())
            }
        })
        .collect();
    SampledMap::on_lattice(lat, values, cone)
}

/// Operators `R -> R^m` with half-integer entries in `[-r, r]`, in
/// lexicographic order.
pub fn column_grid(m: usize, r: i32) -> Vec<LinOp> {
    let vals: Vec<f64> = (-2 * r..=2 * r).map(|i| i as f64 * 0.5).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out.into_iter().flat_map(|v: Vec<f64>| vals.iter().map(move |&a| [v.clone(), vec![a]].concat())).collect();
    }
    out.iter().map(|v| LinOp::column(v)).collect()
}

/// A random, generally nonconvex perturbation problem with `X = Z = R`
/// sampled on `{-1, -0.5, ..., 1}`, a random cone K in `R^2`, `S = R_+` and
/// the operator grid `column_grid(2, 1)`.
pub fn random_perturbation(rng: &mut ChaCha8Rng) -> Result<PerturbationProblem> {
    let k = random_cone(rng, 2);
    let lat = Lattice::new(vec![Lattice::axis(-1.0, 1.0, 0.5), Lattice::axis(-1.0, 1.0, 0.5)])?;
    let zero = lat.locate(&[0.0, 0.0]).expect("0 is a lattice point");
    let values: Vec<ExtendedPoint> = (0..lat.len())
        .map(|i| {
            if i != zero && rng.gen_bool(0.2) {
                ExtendedPoint::PlusInf
            } else {
                ExtendedPoint::Finite((0..2).map(|_| rng.gen_range(-4i32..=4) as f64 * 0.5).collect())
            }
        })
        .collect();
    let phi = SampledMap::on_lattice(lat, values, &k)?;
    PerturbationProblem::new(phi, 1, PolyhedralCone::orthant(1).into(), column_grid(2, 1))
}

/// A K-convex problem `Φ(x,z) = φ1(x,z) g1 + φ2(x,z) g2` over the generators
/// of a random cone K in `R^2`, with `φi = b_i x + c_i z + e_i z^2 + d_i`,
/// `e_i >= 0` and `c_i >= e_i`, on `dom = {x + z <= 1}` sampled on
/// `[-2,2] x [-1,1]`.
///
/// `Φ(.,0)` is affine on an interval with sampled endpoints, so
/// [`alpha_on_segments`] decides (α) on the whole interval.
///
/// `S = R_+`, so `Φ(x,0) ≦ Φ(x,z)` for `z >= 0` (z-monotone), `int S` meets
/// the domain and `Φ(x,-s) ≦ Φ(x,0)` on the grid, which is (C0) at every
/// `x <= 0`. The operator grid is `column_grid(2, 1)`.
pub fn convex_fixture(rng: &mut ChaCha8Rng) -> Result<PerturbationProblem> {
    let k = random_cone(rng, 2);
    let g = k.generators().to_vec();
    let half = |rng: &mut ChaCha8Rng, lo: i32, hi: i32| rng.gen_range(lo..=hi) as f64 * 0.5;
    let mut coef = Vec::new();
    for _ in 0..2 {
        let b = half(rng, -2, 2);
        let e = half(rng, 0, 1);
        let c = e + half(rng, 0, 2);
        let d = half(rng, -2, 2);
        coef.push([b, c, e, d]);
    }
    let lat = Lattice::new(vec![Lattice::axis(-2.0, 2.0, 0.5), Lattice::axis(-1.0, 1.0, 0.5)])?;
    let phi = SampledMap::tabulate(lat, &k, |p| {
        let (x, z) = (p[0], p[1]);
        if x + z > 1.0 + 1e-12 {
            return ExtendedPoint::PlusInf;
        }
        let s: Vec<f64> = coef.iter().map(|[b, c, e, d]| b * x + c * z + e * z * z + d).collect();
        ExtendedPoint::Finite((0..2).map(|j| s[0] * g[0][j] + s[1] * g[1][j]).collect())
    })?;
    PerturbationProblem::new(phi, 1, PolyhedralCone::orthant(1).into(), column_grid(2, 1))
}

/// A scalar problem `min f(x) s.t. x <= z` with a nonconvex `f` on
/// `{-2,...,2}` and a duality gap: `f = (1, 1, 0, -5, -5)`, `K = S = R_+`.
/// At `L = 0`, `y = 0` the inequality (α) holds while no operator certifies.
pub fn nonconvex_fixture() -> Result<PerturbationProblem> {
    let k = PolyhedralCone::orthant(1);
    let f = [1.0, 1.0, 0.0, -5.0, -5.0];
    let lat = Lattice::new(vec![Lattice::axis(-2.0, 2.0, 1.0), Lattice::axis(-2.0, 2.0, 1.0)])?;
    let phi = SampledMap::tabulate(lat, &k, |p| {
        if p[0] <= p[1] + 1e-12 {
            ExtendedPoint::Finite(vec![f[(p[0] + 2.0).round() as usize]])
        } else {
            ExtendedPoint::PlusInf
        }
    })?;
    let ops = Lattice::axis(-6.0, 6.0, 0.5).iter().map(|&t| LinOp::column(&[t])).collect();
    PerturbationProblem::new(phi, 1, PolyhedralCone::orthant(1).into(), ops)
}

/// Probe values `y` around `L(x) - Φ(x,0)`: each probe picks a zero-slice
/// sample and adds a half-integer offset in `[-1, 1]^m`.
pub fn probes_near_front(rng: &mut ChaCha8Rng, p: &PerturbationProblem, l: &LinOp, n: usize) -> Vec<Vec<f64>> {
    let slice: Vec<usize> = p.zero_slice().collect();
    let x_dim = p.x_dim();
    (0..n)
        .map(|_| {
            let i = slice[rng.gen_range(0..slice.len())];
            let base = sub(&l.apply(&p.phi().sample(i)[..x_dim]), p.phi().finite_value(i).unwrap());
            base.iter().map(|b| b + rng.gen_range(-2i32..=2) as f64 * 0.5).collect()
        })
        .collect()
}

/// (α) along the polygonal path through consecutive zero-slice samples of a
/// problem with `X = R`: no point of a segment between neighbouring samples
/// lies in `-y - int K` after subtracting `L`. For maps affine in `x` this is
/// (α) on the sampled interval, which the samples alone can miss when a
/// segment cuts through the wedge between two of them.
pub fn alpha_on_segments(p: &PerturbationProblem, l: &LinOp, y: &[f64]) -> bool {
    assert_eq!(p.x_dim(), 1, "segments need a one-dimensional X");
    let normals = p.cone().normals();
    let w: Vec<Vec<f64>> = p
        .zero_slice()
        .map(|i| {
            let v = sub(p.phi().finite_value(i).unwrap(), &l.apply(&p.phi().sample(i)[..1]));
            v.iter().zip(y).map(|(a, b)| a + b).collect()
        })
        .collect();
    let tol = crate::cone_order::TOL_STRICT;
    let cuts = |a: &[f64], b: &[f64]| {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for n in normals {
            let c0 = dot(n, a) + tol;
            let c1 = dot(n, &sub(b, a));
            if c1.abs() <= 1e-15 {
                if c0 >= 0.0 {
                    return false;
                }
            } else if c1 > 0.0 {
                hi = hi.min(-c0 / c1);
            } else {
                lo = lo.max(-c0 / c1);
            }
        }
        lo < hi
    };
    let single = w.len() == 1 && cuts(&w[0], &w[0]);
    !single && !w.windows(2).any(|s| cuts(&s[0], &s[1]))
}

/// A random operator `X = R -> R^m` with half-integer entries in `[-1, 1]`.
pub fn random_l(rng: &mut ChaCha8Rng, m: usize) -> LinOp {
    LinOp::column(&(0..m).map(|_| rng.gen_range(-2i32..=2) as f64 * 0.5).collect::<Vec<_>>())
}

fn half(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo..=hi) as f64 * 0.5
}

/// A polyhedral scalar instance on `C = [-2, 2]^n`, `n ∈ {1, 2}`, with three
/// affine pieces, one or two constraint rows and, half of the time, a
/// composite `κ∘H` with `κ` nondecreasing on `P = R_+`.
///
/// With `slater` the constraint is built around an interior point `x0` with
/// `G(x0) ∈ -int S`. Without it, `G(x) = 2 - x_1` pins the feasible set to a
/// face of C, so no Slater point exists.
pub fn scalar_fixture(rng: &mut ChaCha8Rng, slater: bool) -> ScalarInstance {
    let n = rng.gen_range(1..=2);
    let row = |rng: &mut ChaCha8Rng, lo, hi| (0..n).map(|_| half(rng, lo, hi)).collect::<Vec<f64>>();
    let pieces = (0..3).map(|_| (row(rng, -4, 4), half(rng, -2, 2))).collect();
    let mut c = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        c.push((e.clone(), 2.0));
        e[i] = -1.0;
        c.push((e, 2.0));
    }
    let (g, s) = if slater {
        let k = rng.gen_range(1..=2);
        let (cone, spec) = if k == 2 && rng.gen_bool(0.5) {
            let cone = random_cone(rng, 2);
            let spec = ConeSpec::from(&cone);
            (cone, spec)
        } else {
            (PolyhedralCone::orthant(k), ConeSpec::orthant(k))
        };
        let x0 = row(rng, -2, 2);
        let s0: Vec<f64> = (0..k).map(|j| cone.generators().iter().map(|g| 0.5 * g[j]).sum()).collect();
        let a: Vec<Vec<f64>> = (0..k).map(|_| row(rng, -4, 4)).collect();
        let b = a.iter().zip(&s0).map(|(r, s)| -dot(r, &x0) - s).collect();
        (Affine { a, b }, spec)
    } else {
        let mut a = vec![0.0; n];
        a[0] = -1.0;
        (Affine { a: vec![a], b: vec![2.0] }, ConeSpec::orthant(1))
    };
    let composite = rng.gen_bool(0.5).then(|| Composite {
        kappa: (0..2).map(|_| (vec![half(rng, 0, 4)], half(rng, -2, 2))).collect(),
        h: Affine { a: vec![row(rng, -2, 2)], b: vec![half(rng, -2, 2)] },
        p: ConeSpec::orthant(1),
    });
    ScalarInstance { pieces, c, g, s, composite }
}

/// `min x + |x|` over `[-1, 1]` with `κ = |.|`, `H = id` and `P = R_+`.
/// `κ` is not P-nondecreasing: the primal value is 0 while the loose duals
/// stop at -1.
pub fn monotone_chain_fixture() -> ScalarInstance {
    ScalarInstance {
        pieces: vec![(vec![1.0], 0.0)],
        c: vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        g: Affine { a: vec![vec![0.0]], b: vec![-1.0] },
        s: ConeSpec::orthant(1),
        composite: Some(Composite {
            kappa: vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)],
            h: Affine { a: vec![vec![1.0]], b: vec![0.0] },
            p: ConeSpec::orthant(1),
        }),
    }
}

/// A small composite instance on `X = {-1, 0, 1}` with `K = R^2_+`, random
/// integer `F`, `H: X -> R` and `G: X -> R` ordered by `S = R_+`,
/// `κ(w) = (max(w, 0), w/2)` on `W = {-2, ..., 2}` and `C = X`. With
/// `const_g` the constraint is `G ≡ -1`; otherwise `G(-1) = -1` keeps the
/// first sample feasible.
pub fn random_ccvp(rng: &mut ChaCha8Rng, const_g: bool) -> Result<CCVPInstance> {
    let k = PolyhedralCone::orthant(2);
    let r1 = PolyhedralCone::orthant(1);
    let xl = Lattice::new(vec![Lattice::axis(-1.0, 1.0, 1.0)])?;
    let fv = (0..3).map(|_| ExtendedPoint::Finite((0..2).map(|_| rng.gen_range(-2i32..=2) as f64).collect())).collect();
    let f = SampledMap::on_lattice(xl.clone(), fv, &k)?;
    let hv = (0..3).map(|_| ExtendedPoint::Finite(vec![rng.gen_range(-1i32..=1) as f64])).collect();
    let h = SampledMap::on_lattice(xl.clone(), hv, &r1)?;
    let gv = (0..3)
        .map(|i| ExtendedPoint::Finite(vec![if const_g || i == 0 { -1.0 } else { rng.gen_range(-1i32..=1) as f64 }]))
        .collect();
    let g = SampledMap::on_lattice(xl, gv, &r1)?;
    let wl = Lattice::new(vec![Lattice::axis(-2.0, 2.0, 1.0)])?;
    let kappa = SampledMap::tabulate(wl, &k, |w| ExtendedPoint::Finite(vec![w[0].max(0.0), 0.5 * w[0]]))?;
    Ok(CCVPInstance {
        f,
        kappa: Some(kappa),
        h: Some(h),
        g,
        c: vec![true; 3],
        z_box: Lattice::new(vec![Lattice::axis(-2.0, 0.0, 1.0)])?,
        x_shift: None,
    })
}
