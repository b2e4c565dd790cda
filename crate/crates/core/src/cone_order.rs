//! Polyhedral cones in R^m (m <= 4), the weak order `<_K` and the cone
//! order `<=_K`, plus the elementary scaling facts used to bound finite sets.
//!
//! A cone is kept in both forms: extreme rays and unit facet normals, so that
//! `K = cone(generators) = {y : n'y >= 0 for every normal n}`. Converting one
//! form to the other enumerates the (m-1)-subsets of the given vectors, which
//! is cheap at this dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cross, dot, lex_cmp, norm2, norm_inf, rank, scale, sub, subsets};

/// Largest ambient dimension accepted by the constructors.
pub const MAX_DIM: usize = 4;
/// Slack used for strict inequalities against unit normals.
pub const TOL_STRICT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Closed,
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<Vec<f64>>,
    normals: Vec<Vec<f64>>,
}

impl PolyhedralCone {
    pub fn from_generators(dim: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(dim, &generators)?;
        let normals = facets(dim, &generators)?;
        let generators = facets(dim, &normals)?;
        Self::finish(dim, generators, normals)
    }

    pub fn from_normals(dim: usize, normals: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(dim, &normals)?;
        let generators = facets(dim, &normals)?;
        let normals = facets(dim, &generators)?;
        Self::finish(dim, generators, normals)
    }

    /// Accepts both forms and rejects them unless they describe one cone.
    pub fn from_both(dim: usize, generators: Vec<Vec<f64>>, normals: Vec<Vec<f64>>) -> Result<Self> {
        let a = Self::from_generators(dim, generators)?;
        let b = Self::from_normals(dim, normals)?;
        let same = |u: &[Vec<f64>], v: &[Vec<f64>]| {
            u.len() == v.len() && u.iter().zip(v).all(|(p, q)| norm_inf(&sub(p, q)) < 1e-7)
        };
        if !same(&a.normals, &b.normals) || !same(&a.generators, &b.generators) {
            return Err(Error::InvalidCone("generators and normals describe different cones".into()));
        }
        Ok(a)
    }

    /// The nonnegative orthant R^m_+.
    pub fn orthant(dim: usize) -> Self {
        let e: Vec<Vec<f64>> = (0..dim)
            .map(|i| {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                v
            })
            .collect();
        Self::from_generators(dim, e).expect("orthant is a proper cone")
    }

    fn finish(dim: usize, generators: Vec<Vec<f64>>, normals: Vec<Vec<f64>>) -> Result<Self> {
        if rank(&generators, 1e-9) < dim {
            return Err(Error::InvalidCone("empty interior".into()));
        }
        if rank(&normals, 1e-9) < dim {
            return Err(Error::InvalidCone("cone contains a line".into()));
        }
        // rays are reported with unit infinity norm, normals with unit length
        let generators = generators.iter().map(|g| scale(g, 1.0 / norm_inf(g))).collect();
        Ok(PolyhedralCone { dim, generators, normals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    /// The dual cone `K+ = {y* : <y*, k> >= 0 for k in K}`, generated by the normals.
    pub fn dual(&self) -> Self {
        Self::from_generators(self.dim, self.normals.clone()).expect("dual of a proper cone is proper")
    }

    /// A canonical interior direction: the sum of the extreme rays.
    pub fn interior_point(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.dim];
        for g in &self.generators {
            for (a, b) in s.iter_mut().zip(g) {
                *a += b;
            }
        }
        s
    }

    /// Smallest normal slack `min_n n'y`.
    pub fn margin(&self, y: &[f64]) -> f64 {
        self.normals.iter().map(|n| dot(n, y)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, y: &[f64], region: Region) -> Result<bool> {
        self.check(y)?;
        Ok(self.contains_unchecked(y, region))
    }

    pub(crate) fn contains_unchecked(&self, y: &[f64], region: Region) -> bool {
        let m = self.margin(y);
        match region {
            Region::Closed => m >= -TOL_STRICT,
            Region::Interior => m > TOL_STRICT,
            Region::Boundary => (-TOL_STRICT..=TOL_STRICT).contains(&m),
        }
    }

    pub(crate) fn check(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        Ok(())
    }
}

/// Serialized description of a cone: `{"dim": m, "generators": [...],
/// "normals": [...]}` with either list optional. With neither list the cone
/// is the nonnegative orthant of `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<f64>>>,
}

impl ConeSpec {
    pub fn orthant(dim: usize) -> Self {
        ConeSpec { dim, generators: None, normals: None }
    }

    pub fn generators(dim: usize, generators: Vec<Vec<f64>>) -> Self {
        ConeSpec { dim, generators: Some(generators), normals: None }
    }

    pub fn normals(dim: usize, normals: Vec<Vec<f64>>) -> Self {
        ConeSpec { dim, generators: None, normals: Some(normals) }
    }

    pub fn build(&self) -> Result<PolyhedralCone> {
        match (&self.generators, &self.normals) {
            (None, None) => {
                check_dims(self.dim, &[vec![1.0; self.dim]])?;
                Ok(PolyhedralCone::orthant(self.dim))
            }
            (Some(g), None) => PolyhedralCone::from_generators(self.dim, g.clone()),
            (None, Some(n)) => PolyhedralCone::from_normals(self.dim, n.clone()),
            (Some(g), Some(n)) => PolyhedralCone::from_both(self.dim, g.clone(), n.clone()),
        }
    }
}

impl From<&PolyhedralCone> for ConeSpec {
    fn from(k: &PolyhedralCone) -> Self {
        ConeSpec { dim: k.dim(), generators: Some(k.generators().to_vec()), normals: Some(k.normals().to_vec()) }
    }
}

fn check_dims(dim: usize, vs: &[Vec<f64>]) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidCone("zero dimension".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    if vs.is_empty() {
        return Err(Error::Empty("cone description"));
    }
    for v in vs {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCone("non-finite entry".into()));
        }
    }
    Ok(())
}

/// Unit normals of the facets of `cone(vectors)`. Applied to a set of facet
/// normals it yields the extreme rays instead (polarity).
fn facets(dim: usize, vectors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let vs: Vec<Vec<f64>> = vectors.iter().filter(|v| norm_inf(v) > 0.0).map(|v| scale(v, 1.0 / norm2(v))).collect();
    if vs.is_empty() {
        return Err(Error::InvalidCone("only zero vectors".into()));
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    for idx in subsets(vs.len(), dim - 1) {
        let basis: Vec<Vec<f64>> = idx.iter().map(|&i| vs[i].clone()).collect();
        let c = cross(&basis, dim);
        let len = norm2(&c);
        if len < 1e-10 {
            continue;
        }
        let c = scale(&c, 1.0 / len);
        let vals: Vec<f64> = vs.iter().map(|v| dot(&c, v)).collect();
        let eps = 1e-10;
        let cand = if vals.iter().all(|&t| t >= -eps) {
            c
        } else if vals.iter().all(|&t| t <= eps) {
            scale(&c, -1.0)
        } else {
            continue;
        };
        if vals.iter().all(|t| t.abs() <= eps) {
            continue;
        }
        let cand: Vec<f64> = cand.into_iter().map(|x| if x.abs() < 1e-15 { 0.0 } else { x }).collect();
        if !out.iter().any(|o| norm_inf(&sub(o, &cand)) < 1e-9) {
            out.push(cand);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidCone("no facets found; cone is not proper".into()));
    }
    out.sort_by(|a, b| lex_cmp(b, a));
    Ok(out)
}

/// A point of `Y ∪ {+inf, -inf}`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedPoint {
    Finite(Vec<f64>),
    PlusInf,
    MinusInf,
}

impl ExtendedPoint {
    pub fn finite(&self) -> Option<&[f64]> {
        match self {
            ExtendedPoint::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedPoint::Finite(_))
    }

    pub fn neg(&self) -> ExtendedPoint {
        match self {
            ExtendedPoint::Finite(v) => ExtendedPoint::Finite(v.iter().map(|x| -x).collect()),
            ExtendedPoint::PlusInf => ExtendedPoint::MinusInf,
            ExtendedPoint::MinusInf => ExtendedPoint::PlusInf,
        }
    }

    /// Sum with the conventions for attached infinities; `+inf + -inf` is an error.
    pub fn add(&self, other: &ExtendedPoint) -> Result<ExtendedPoint> {
        use ExtendedPoint::*;
        match (self, other) {
            (Finite(a), Finite(b)) => {
                if a.len() != b.len() {
                    return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
                }
                Ok(Finite(crate::linalg::add(a, b)))
            }
            (PlusInf, MinusInf) | (MinusInf, PlusInf) => Err(Error::MixedInfinity),
            (PlusInf, _) | (_, PlusInf) => Ok(PlusInf),
            (MinusInf, _) | (_, MinusInf) => Ok(MinusInf),
        }
    }
}

impl From<Vec<f64>> for ExtendedPoint {
    fn from(v: Vec<f64>) -> Self {
        ExtendedPoint::Finite(v)
    }
}

impl Serialize for ExtendedPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedPoint::Finite(v) => v.serialize(s),
            ExtendedPoint::PlusInf => s.serialize_str("+inf"),
            ExtendedPoint::MinusInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Vec(Vec<f64>),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Vec(v) => Ok(ExtendedPoint::Finite(v)),
            Raw::Tag(t) if t == "+inf" => Ok(ExtendedPoint::PlusInf),
            Raw::Tag(t) if t == "-inf" => Ok(ExtendedPoint::MinusInf),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("expected \"+inf\", \"-inf\" or a vector, got {t:?}"))),
        }
    }
}

/// `y1 <_K y2`, with `-inf <_K y <_K +inf`.
pub fn less_weak(y1: &ExtendedPoint, y2: &ExtendedPoint, cone: &PolyhedralCone) -> Result<bool> {
    use ExtendedPoint::*;
    match (y1, y2) {
        (Finite(a), Finite(b)) => {
            cone.check(a)?;
            cone.check(b)?;
            Ok(cone.contains_unchecked(&sub(b, a), Region::Interior))
        }
        (Finite(a), PlusInf) | (MinusInf, Finite(a)) => cone.check(a).map(|_| true),
        (MinusInf, PlusInf) => Ok(true),
        _ => Ok(false),
    }
}

/// `y1 <=_K y2`, i.e. `y2 - y1 ∈ K`.
pub fn leq_cone(y1: &[f64], y2: &[f64], cone: &PolyhedralCone) -> Result<bool> {
    cone.check(y1)?;
    cone.check(y2)?;
    Ok(cone.contains_unchecked(&sub(y2, y1), Region::Closed))
}

pub(crate) fn less_weak_finite(y1: &[f64], y2: &[f64], cone: &PolyhedralCone) -> bool {
    cone.contains_unchecked(&sub(y2, y1), Region::Interior)
}

/// Some `mu > 0` with `y - mu k0 <_K y_prime`, by doubling from one.
pub fn find_scaling(y: &[f64], y_prime: &[f64], k0: &[f64], cone: &PolyhedralCone) -> Result<f64> {
    cone.check(y)?;
    cone.check(y_prime)?;
    if !cone.contains(k0, Region::Interior)? {
        return Err(Error::NotInterior);
    }
    let mut mu = 1.0f64;
    for _ in 0..2100 {
        let shifted: Vec<f64> = y.iter().zip(k0).map(|(a, k)| a - mu * k).collect();
        if less_weak_finite(&shifted, y_prime, cone) {
            return Ok(mu);
        }
        mu *= 2.0;
    }
    Err(Error::NotInterior)
}

/// A pair `(lower, upper)` with `lower <_K p <_K upper` for every point `p`.
pub fn bound_finite(points: &[Vec<f64>], cone: &PolyhedralCone) -> Result<(Vec<f64>, Vec<f64>)> {
    let first = points.first().ok_or(Error::Empty("point list"))?;
    let k0 = cone.interior_point();
    let mut up = 1.0f64;
    let mut down = 1.0f64;
    for p in points {
        up = up.max(find_scaling(p, first, &k0, cone)?);
        down = down.max(find_scaling(first, p, &k0, cone)?);
    }
    let upper = first.iter().zip(&k0).map(|(a, k)| a + up * k).collect();
    let lower = first.iter().zip(&k0).map(|(a, k)| a - down * k).collect();
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::add;

    fn wedge() -> PolyhedralCone {
        PolyhedralCone::from_generators(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn cone_spec_builds() {
        assert_eq!(ConeSpec::orthant(2).build().unwrap(), PolyhedralCone::orthant(2));
        let w = ConeSpec::generators(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).build().unwrap();
        assert!(w.contains(&[2.0, 1.0], Region::Interior).unwrap());
        assert!(!w.contains(&[0.0, 1.0], Region::Closed).unwrap());
        let h = ConeSpec::normals(2, vec![vec![1.0, 0.0], vec![-1.0, 1.0]]).build().unwrap();
        assert!(h.contains(&[1.0, 3.0], Region::Interior).unwrap());
        assert!(!h.contains(&[2.0, 1.0], Region::Closed).unwrap());
        assert!(ConeSpec::orthant(0).build().is_err());
        assert!(ConeSpec::orthant(5).build().is_err());
        assert!(ConeSpec::generators(3, vec![vec![1.0, 0.0]]).build().is_err());
        assert_eq!(ConeSpec::from(&w).build().unwrap(), w);
    }

    #[test]
    fn orthant_membership() {
        let k = PolyhedralCone::orthant(2);
        assert!(k.contains(&[1.0, 1.0], Region::Interior).unwrap());
        assert!(!k.contains(&[1.0, 0.0], Region::Interior).unwrap());
        assert!(k.contains(&[1.0, 0.0], Region::Boundary).unwrap());
        assert!(k.contains(&[0.0, 0.0], Region::Boundary).unwrap());
        assert!(!k.contains(&[-1.0, 2.0], Region::Closed).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let k = PolyhedralCone::orthant(2);
        assert!(matches!(k.contains(&[1.0], Region::Closed), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn wedge_normals_and_interior() {
        let k = wedge();
        let s = 1.0 / 2f64.sqrt();
        let expect = [vec![0.0, 1.0], vec![s, -s]];
        assert_eq!(k.normals().len(), 2);
        for e in &expect {
            assert!(k.normals().iter().any(|n| norm_inf(&sub(n, e)) < 1e-12), "{:?}", k.normals());
        }
        // oracle: (2,1) = 1*(1,0) + 1*(1,1) with both weights positive
        assert!(k.contains(&[2.0, 1.0], Region::Interior).unwrap());
    }

    #[test]
    fn wedge_interior_matches_ray_sampling() {
        // independent oracle: y is interior iff it is a strictly positive
        // combination a*(1,0) + b*(1,1), i.e. b = y2 > 0 and a = y1 - y2 > 0
        let k = wedge();
        for i in -20..=20 {
            for j in -20..=20 {
                let y = [i as f64 * 0.25, j as f64 * 0.25];
                let (a, b) = (y[0] - y[1], y[1]);
                assert_eq!(k.contains(&y, Region::Interior).unwrap(), a > 0.0 && b > 0.0, "{y:?}");
                assert_eq!(k.contains(&y, Region::Closed).unwrap(), a >= 0.0 && b >= 0.0, "{y:?}");
            }
        }
    }

    #[test]
    fn round_trip_between_forms() {
        let g = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, -0.5]];
        let k = PolyhedralCone::from_generators(3, g).unwrap();
        let k2 = PolyhedralCone::from_normals(3, k.normals().to_vec()).unwrap();
        assert_eq!(k.generators().len(), k2.generators().len());
        let k3 = PolyhedralCone::from_both(3, k.generators().to_vec(), k.normals().to_vec()).unwrap();
        assert_eq!(k3.normals(), k.normals());
    }

    #[test]
    fn redundant_generator_is_dropped() {
        let k = PolyhedralCone::from_generators(2, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(k.generators().len(), 2);
    }

    #[test]
    fn rejects_improper_cones() {
        assert!(PolyhedralCone::from_generators(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(PolyhedralCone::from_generators(2, vec![vec![1.0, 0.0]]).is_err());
        assert!(matches!(
            PolyhedralCone::from_generators(5, vec![vec![1.0; 5]]),
            Err(Error::DimensionTooLarge(5))
        ));
        assert!(PolyhedralCone::from_both(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![1.0, 0.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn one_dimensional_cones() {
        let s = PolyhedralCone::orthant(1);
        assert!(leq_cone(&[-2.0], &[0.0], &s).unwrap());
        let neg = PolyhedralCone::from_generators(1, vec![vec![-3.0]]).unwrap();
        assert!(neg.contains(&[-1.0], Region::Interior).unwrap());
    }

    #[test]
    fn weak_order_examples() {
        let k = PolyhedralCone::orthant(2);
        let p = |a: f64, b: f64| ExtendedPoint::Finite(vec![a, b]);
        assert!(less_weak(&p(0.0, 0.0), &p(1.0, 1.0), &k).unwrap());
        assert!(!less_weak(&p(0.0, 0.0), &p(1.0, 0.0), &k).unwrap());
        assert!(less_weak(&ExtendedPoint::MinusInf, &p(5.0, -3.0), &k).unwrap());
        assert!(less_weak(&p(5.0, -3.0), &ExtendedPoint::PlusInf, &k).unwrap());
        assert!(!less_weak(&ExtendedPoint::PlusInf, &ExtendedPoint::PlusInf, &k).unwrap());
        assert!(!less_weak(&p(1.0, 1.0), &p(1.0, 1.0), &k).unwrap());
    }

    #[test]
    fn cone_order_examples() {
        let k = PolyhedralCone::orthant(2);
        assert!(leq_cone(&[1.0, 0.0], &[1.0, 0.0], &k).unwrap());
        assert!(leq_cone(&[1.0, 2.0], &[1.0, 3.0], &k).unwrap());
        assert!(!leq_cone(&[1.0, 4.0], &[1.0, 3.0], &k).unwrap());
    }

    #[test]
    fn infinity_arithmetic() {
        let y = ExtendedPoint::Finite(vec![1.0, 2.0]);
        assert_eq!(y.add(&ExtendedPoint::PlusInf).unwrap(), ExtendedPoint::PlusInf);
        assert_eq!(ExtendedPoint::MinusInf.add(&y).unwrap(), ExtendedPoint::MinusInf);
        assert_eq!(ExtendedPoint::PlusInf.add(&ExtendedPoint::MinusInf), Err(Error::MixedInfinity));
        assert_eq!(ExtendedPoint::PlusInf.neg(), ExtendedPoint::MinusInf);
    }

    #[test]
    fn scaling_examples() {
        let k = PolyhedralCone::orthant(2);
        let k0 = [1.0, 1.0];
        let mu = find_scaling(&[0.0, 0.0], &[1.0, 1.0], &k0, &k).unwrap();
        assert!(less_weak_finite(&[-mu, -mu], &[1.0, 1.0], &k));
        // oracle: (3,0) - mu(1,1) - (0,0) ∈ -int K  iff  mu > 3
        let mu = find_scaling(&[3.0, 0.0], &[0.0, 0.0], &k0, &k).unwrap();
        assert!(mu > 3.0);
        assert_eq!(find_scaling(&[0.0, 0.0], &[0.0, 0.0], &k0, &k).unwrap(), 1.0);
        assert_eq!(find_scaling(&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0], &k), Err(Error::NotInterior));
    }

    #[test]
    fn bounds_are_strict() {
        let k = PolyhedralCone::orthant(2);
        for pts in [vec![vec![0.0, 0.0]], vec![vec![0.0, 0.0], vec![2.0, -1.0]]] {
            let (lo, hi) = bound_finite(&pts, &k).unwrap();
            for p in &pts {
                assert!(less_weak_finite(&lo, p, &k) && less_weak_finite(p, &hi, &k));
            }
        }
        let w = wedge();
        let pts = vec![vec![5.0, 5.0]];
        let (lo, hi) = bound_finite(&pts, &w).unwrap();
        assert!(less_weak_finite(&lo, &pts[0], &w) && less_weak_finite(&pts[0], &hi, &w));
        assert_eq!(bound_finite(&[], &k), Err(Error::Empty("point list")));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec((-8i32..=8).prop_map(|i| i as f64 * 0.5), 2)
        }

        proptest! {
            #[test]
            fn int_plus_property(y in pt(), yp in pt()) {
                let k = wedge();
                if k.contains(&y, Region::Closed).unwrap() && !k.contains(&add(&y, &yp), Region::Interior).unwrap() {
                    prop_assert!(!k.contains(&yp, Region::Interior).unwrap());
                }
            }

            #[test]
            fn orders_compose(a in pt(), b in pt(), c in pt()) {
                let k = wedge();
                if less_weak_finite(&a, &b, &k) && less_weak_finite(&b, &c, &k) {
                    prop_assert!(less_weak_finite(&a, &c, &k));
                }
                if leq_cone(&a, &b, &k).unwrap() && less_weak_finite(&b, &c, &k) {
                    prop_assert!(less_weak_finite(&a, &c, &k));
                }
            }

            #[test]
            fn regions_partition_closed(y in pt()) {
                let k = wedge();
                let i = k.contains(&y, Region::Interior).unwrap();
                let b = k.contains(&y, Region::Boundary).unwrap();
                let c = k.contains(&y, Region::Closed).unwrap();
                prop_assert!(!i || c);
                prop_assert_eq!(c, i ^ b);
            }

            #[test]
            fn bound_finite_is_strict(pts in prop::collection::vec(pt(), 1..6)) {
                let k = wedge();
                let (lo, hi) = bound_finite(&pts, &k).unwrap();
                for p in &pts {
                    prop_assert!(less_weak_finite(&lo, p, &k));
                    prop_assert!(less_weak_finite(p, &hi, &k));
                }
            }
        }
    }
}
