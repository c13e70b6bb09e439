//! Pre-Schwarzians of conformal maps onto polygons and polygon exteriors,
//! built from two finite Blaschke products, and counting of pole-function
//! preimages.
//!
//! Interior maps: `q = 2(B_k/B_m)/(1 − z B_k/B_m)` and `P_f = B_m/B_k`.
//! Exterior maps (`f(0) = ∞`): `z q = 2/(z² B_k/B_m − 1)` and
//! `P_f = z³ B_k/B_m`.

use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blaschke::{BlaschkeError, BlaschkeProduct};
use crate::jet::C64;
use crate::model::{AnalyticModel, JetSource, LocalData, ModelError, ModelKind, PreSchwarzian};
use crate::moebius::ExtendedPoint;
use crate::poly::{Poly, RootError};

/// Default contour radius for the argument principle.
pub const WINDING_RADIUS: f64 = 0.999;
/// Default number of trapezoid nodes.
pub const WINDING_NODES: usize = 8192;
/// Distance from the unit circle below which a root is ambiguous.
pub const AMBIGUOUS_ROOT_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolygonError {
    #[error("invalid polygon model: {0}")]
    InvalidPolygonModel(String),
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
    #[error("winding integral {value} is not within 0.05 of an integer at any contour radius")]
    NonIntegerWinding { value: C64 },
    #[error("root {0} lies within 1e-8 of the unit circle")]
    AmbiguousRoot(C64),
    #[error("P - c vanishes identically")]
    Constant,
    #[error("c must not lie on the unit circle")]
    UnimodularTarget,
    #[error(transparent)]
    Roots(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolygonVariant {
    Interior,
    Exterior,
}

impl fmt::Display for PolygonVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolygonVariant::Interior => "interior",
            PolygonVariant::Exterior => "exterior",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct PolygonModel {
    variant: PolygonVariant,
    bk: BlaschkeProduct,
    bm: BlaschkeProduct,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    variant: PolygonVariant,
    #[serde(rename = "Bk")]
    bk: BlaschkeProduct,
    #[serde(rename = "Bm")]
    bm: BlaschkeProduct,
}

impl TryFrom<PolygonRepr> for PolygonModel {
    type Error = PolygonError;
    fn try_from(r: PolygonRepr) -> Result<Self, Self::Error> {
        PolygonModel::new(r.variant, r.bk, r.bm)
    }
}

impl From<PolygonModel> for PolygonRepr {
    fn from(p: PolygonModel) -> Self {
        PolygonRepr {
            variant: p.variant,
            bk: p.bk,
            bm: p.bm,
        }
    }
}

/// Zeros closer than this are treated as common.
const COMMON_ZERO_TOL: f64 = 1e-12;

impl PolygonModel {
    pub fn new(
        variant: PolygonVariant,
        bk: BlaschkeProduct,
        bm: BlaschkeProduct,
    ) -> Result<Self, PolygonError> {
        for a in bk.zeros() {
            if let Some(b) = bm
                .zeros()
                .iter()
                .find(|b| (*a - **b).norm() <= COMMON_ZERO_TOL)
            {
                return Err(PolygonError::InvalidPolygonModel(format!(
                    "B_k and B_m share the zero {b}"
                )));
            }
        }
        Ok(Self { variant, bk, bm })
    }

    pub fn from_json(src: &str) -> Result<Self, PolygonError> {
        serde_json::from_str(src).map_err(|e| PolygonError::InvalidPolygonModel(e.to_string()))
    }

    pub fn variant(&self) -> PolygonVariant {
        self.variant
    }

    pub fn bk(&self) -> &BlaschkeProduct {
        &self.bk
    }

    pub fn bm(&self) -> &BlaschkeProduct {
        &self.bm
    }

    pub fn k(&self) -> usize {
        self.bk.degree()
    }

    pub fn m(&self) -> usize {
        self.bm.degree()
    }

    /// Exterior models with `B_m(0) = 0`: `z³B_k/B_m` loses a power of `z`
    /// and the preimage counts no longer follow the degrees.
    pub fn is_degenerate(&self) -> bool {
        self.variant == PolygonVariant::Exterior
            && self.bm.zeros().iter().any(|a| a.norm() <= COMMON_ZERO_TOL)
    }

    /// Expected `#{P_f = c}` in the disk for `|c| > 1` and `|c| < 1`.
    pub fn expected_counts(&self) -> (usize, usize) {
        match self.variant {
            PolygonVariant::Interior => (self.k(), self.m()),
            PolygonVariant::Exterior => (self.m(), self.k() + 3),
        }
    }

    /// Expected count for a target off the unit circle.
    pub fn expected_count(&self, c: ExtendedPoint) -> usize {
        let (outside, inside) = self.expected_counts();
        if c.norm() > 1.0 {
            outside
        } else {
            inside
        }
    }

    /// `q = num/den` as polynomials.
    fn preschwarzian_rational(&self) -> RationalMap {
        let (nk, dk, nm, dm) = (
            self.bk.numerator(),
            self.bk.denominator(),
            self.bm.numerator(),
            self.bm.denominator(),
        );
        let kd = &nk * &dm;
        let md = &nm * &dk;
        let z = Poly::monomial(1);
        match self.variant {
            PolygonVariant::Interior => {
                RationalMap::new(kd.scale(C64::new(2.0, 0.0)), &md - &(&z * &kd))
            }
            PolygonVariant::Exterior => {
                let z2 = Poly::monomial(2);
                RationalMap::new(md.scale(C64::new(2.0, 0.0)), &z * &(&(&z2 * &kd) - &md))
            }
        }
    }

    /// Exact rational pole function, with common powers of `z` cancelled.
    pub fn pole_rational(&self) -> RationalMap {
        let (nk, dk, nm, dm) = (
            self.bk.numerator(),
            self.bk.denominator(),
            self.bm.numerator(),
            self.bm.denominator(),
        );
        match self.variant {
            PolygonVariant::Interior => RationalMap::new(&nm * &dk, &nk * &dm),
            PolygonVariant::Exterior => {
                RationalMap::new(&Poly::monomial(3) * &(&nk * &dm), &nm * &dk)
            }
        }
        .cancel_z_powers()
    }

    /// Pre-Schwarzian-only model of the polygon map.
    pub fn model(&self) -> AnalyticModel {
        let q = self.preschwarzian_rational();
        let dq = q.derivative();
        let label = format!("polygon({}, k={}, m={})", self.variant, self.k(), self.m());
        AnalyticModel::new(label, RationalSource { q, dq })
    }
}

/// [`PolygonModel::model`].
pub fn polygon_preschwarzian(pm: &PolygonModel) -> AnalyticModel {
    pm.model()
}

#[derive(Debug, Clone)]
struct RationalSource {
    q: RationalMap,
    dq: RationalMap,
}

impl JetSource for RationalSource {
    fn kind(&self) -> ModelKind {
        ModelKind::PreSchwarzianOnly
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        match (self.q.eval(z), self.dq.eval(z)) {
            (ExtendedPoint::Finite(q), ExtendedPoint::Finite(dq))
                if q.is_finite() && dq.is_finite() =>
            {
                Ok(LocalData::PreSchwarzian(PreSchwarzian { q, dq }))
            }
            _ => Err(ModelError::Singular(z)),
        }
    }
}

/// Quotient of two polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl RationalMap {
    pub fn new(numerator: Poly, denominator: Poly) -> Self {
        Self {
            numerator,
            denominator,
        }
    }

    /// `(1 + z⁴ + 2z⁸)/(z³ + 3z⁷)`, the pole function of the cross map.
    pub fn cross() -> Self {
        let c = |x: f64| C64::new(x, 0.0);
        let mut num = vec![ZERO; 9];
        (num[0], num[4], num[8]) = (c(1.0), c(1.0), c(2.0));
        let mut den = vec![ZERO; 8];
        (den[3], den[7]) = (c(1.0), c(3.0));
        Self::new(Poly::new(num), Poly::new(den))
    }

    fn cancel_z_powers(self) -> Self {
        let k = self.numerator.valuation().min(self.denominator.valuation());
        Self::new(self.numerator.shift_down(k), self.denominator.shift_down(k))
    }

    pub fn eval(&self, z: C64) -> ExtendedPoint {
        let d = self.denominator.eval(z);
        if d == ZERO {
            ExtendedPoint::Infinity
        } else {
            ExtendedPoint::Finite(self.numerator.eval(z) / d)
        }
    }

    pub fn derivative(&self) -> Self {
        let (n, d) = (&self.numerator, &self.denominator);
        Self::new(&(&n.derivative() * d) - &(n * &d.derivative()), d * d)
    }

    /// Polynomial whose zeros are the solutions of `P = c` (up to common
    /// factors of numerator and denominator).
    pub fn preimage_polynomial(&self, c: ExtendedPoint) -> Poly {
        match c {
            ExtendedPoint::Finite(c) => &self.numerator - &self.denominator.scale(c),
            ExtendedPoint::Infinity => self.denominator.clone(),
        }
    }
}

/// Winding-number count with the radius that was finally used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingCount {
    pub count: usize,
    pub radius: f64,
    /// Pre-rounding value of `(1/2πi)∮ P'/(P−c)`.
    pub winding: C64,
    /// Pre-rounding number of poles inside the contour.
    pub poles: C64,
}

fn near_integer(x: C64) -> bool {
    (x.re - x.re.round()).abs() <= 0.05 && x.im.abs() <= 0.05
}

/// Trapezoid rule for `(1/2πi)∮ h(z) dz` on `|z| = radius`; also returns
/// the largest `|h(z) z|` seen.
fn contour_integral(h: impl Fn(C64) -> C64 + Sync, radius: f64, nodes: usize) -> (C64, f64) {
    let terms: Vec<C64> = (0..nodes)
        .into_par_iter()
        .map(|j| {
            let z = C64::from_polar(radius, TAU * j as f64 / nodes as f64);
            h(z) * z
        })
        .collect();
    let max = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    (terms.iter().sum::<C64>() / nodes as f64, max)
}

/// `#{P = c}` in the disk of radius ~`radius` by the argument principle:
/// `(1/2πi)∮ P'/(P−c) dz` plus the number of poles inside. The radius is
/// nudged by ±1e-3, ±2e-3 (staying below 1) when the quadrature is not
/// close to an integer or the integrand is large.
pub fn count_preimages_winding(
    p: &RationalMap,
    c: ExtendedPoint,
    radius: f64,
    nodes: usize,
) -> Result<WindingCount, PolygonError> {
    if (c.norm() - 1.0).abs() == 0.0 {
        return Err(PolygonError::UnimodularTarget);
    }
    let (n, d) = (&p.numerator, &p.denominator);
    let (dn, dd) = (n.derivative(), d.derivative());
    let mut last = ZERO;
    for step in [0.0, 1e-3, -1e-3, 2e-3, -2e-3] {
        let r = radius + step;
        if r >= 1.0 || r <= 0.0 {
            continue;
        }
        let (poles, pmax) = contour_integral(|z| dd.eval(z) / d.eval(z), r, nodes);
        let (winding, wmax) = match c {
            ExtendedPoint::Infinity => (ZERO, 0.0),
            ExtendedPoint::Finite(c) => contour_integral(
                |z| {
                    let (nv, dv) = (n.eval(z), d.eval(z));
                    (dn.eval(z) * dv - nv * dd.eval(z)) / (dv * (nv - c * dv))
                },
                r,
                nodes,
            ),
        };
        last = winding;
        if !near_integer(poles)
            || !near_integer(winding)
            || pmax.max(wmax) > 1e3
            || !winding.is_finite()
        {
            continue;
        }
        let count = match c {
            ExtendedPoint::Infinity => poles.re.round(),
            ExtendedPoint::Finite(_) => winding.re.round() + poles.re.round(),
        };
        if count < 0.0 {
            continue;
        }
        return Ok(WindingCount {
            count: count as usize,
            radius: r,
            winding,
            poles,
        });
    }
    Err(PolygonError::NonIntegerWinding { value: last })
}

/// `#{P = c}` in the disk from companion-matrix roots of `num − c·den`
/// (or `den` for `c = ∞`).
pub fn count_preimages_roots(p: &RationalMap, c: ExtendedPoint) -> Result<usize, PolygonError> {
    let poly = p.preimage_polynomial(c);
    if poly.is_zero() {
        return Err(PolygonError::Constant);
    }
    let mut count = 0;
    for r in poly.roots()? {
        if (r.norm() - 1.0).abs() <= AMBIGUOUS_ROOT_TOL {
            return Err(PolygonError::AmbiguousRoot(r));
        }
        if r.norm() < 1.0 {
            count += 1;
        }
    }
    Ok(count)
}

/// Both counters on one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreimageCount {
    pub winding: WindingCount,
    pub roots: usize,
}

impl PreimageCount {
    pub fn agree(&self) -> bool {
        self.winding.count == self.roots
    }
}

pub fn count_preimages(p: &RationalMap, c: ExtendedPoint) -> Result<PreimageCount, PolygonError> {
    Ok(PreimageCount {
        winding: count_preimages_winding(p, c, WINDING_RADIUS, WINDING_NODES)?,
        roots: count_preimages_roots(p, c)?,
    })
}

fn random_blaschke(rng: &mut ChaCha8Rng, degree: usize, max_radius: f64) -> BlaschkeProduct {
    let zeros = (0..degree)
        .map(|_| C64::from_polar(max_radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>()))
        .collect();
    BlaschkeProduct::new(zeros, C64::from_polar(1.0, TAU * rng.gen::<f64>()))
        .expect("zeros inside the disk")
}

/// Random model with `k, m ≤ max_degree` and zeros uniform in `|z| ≤ 0.8`.
pub fn random_polygon_model(seed: u64, variant: PolygonVariant, max_degree: usize) -> PolygonModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k = rng.gen_range(0..=max_degree);
        let m = rng.gen_range(0..=max_degree);
        let bk = random_blaschke(&mut rng, k, 0.8);
        let bm = random_blaschke(&mut rng, m, 0.8);
        if let Ok(p) = PolygonModel::new(variant, bk, bm) {
            if !p.is_degenerate() {
                return p;
            }
        }
    }
}

/// Random target with `|c|` uniform in `[lo, hi]`.
pub fn random_target(rng: &mut impl Rng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(rng.gen_range(lo..=hi), TAU * rng.gen::<f64>())
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Poly| {
            p.coeffs()
                .iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "[{}] / [{}]",
            show(&self.numerator),
            show(&self.denominator)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bma::pole;
    use crate::model::{catalog, CatalogEntry};
    use crate::sampling::DiskSampler;

    const ONE: C64 = C64::new(1.0, 0.0);

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn b(zeros: &[C64]) -> BlaschkeProduct {
        BlaschkeProduct::new(zeros.to_vec(), ONE).unwrap()
    }

    #[test]
    fn interior_single_zero() {
        let pm = PolygonModel::new(
            PolygonVariant::Interior,
            b(&[ZERO]),
            BlaschkeProduct::unit(),
        )
        .unwrap();
        let m = pm.model();
        for z in [c(0.3, 0.1), c(-0.5, 0.6)] {
            let q = m.preschwarzian(z).unwrap().q;
            assert!((q - 2.0 * z / (1.0 - z * z)).norm() < 1e-14);
            let p = pm.pole_rational().eval(z).finite().unwrap();
            assert!((p - 1.0 / z).norm() < 1e-13);
        }
    }

    #[test]
    fn exterior_unit_products() {
        let pm = PolygonModel::new(
            PolygonVariant::Exterior,
            BlaschkeProduct::unit(),
            BlaschkeProduct::unit(),
        )
        .unwrap();
        let z = c(0.4, -0.3);
        assert!((pm.pole_rational().eval(z).finite().unwrap() - z * z * z).norm() < 1e-15);
        let pm = PolygonModel::new(
            PolygonVariant::Exterior,
            BlaschkeProduct::unit(),
            b(&[ZERO]),
        )
        .unwrap();
        assert!(pm.is_degenerate());
        let r = pm.pole_rational();
        assert_eq!(r.denominator.degree(), 0);
        assert!((r.eval(z).finite().unwrap() - z * z).norm() < 1e-15);
        assert_eq!(
            count_preimages_roots(&r, ExtendedPoint::Finite(ZERO)).unwrap(),
            2
        );
    }

    #[test]
    fn interior_expansion_and_count() {
        let bm = b(&[c(0.5, 0.0)]);
        let pm = PolygonModel::new(PolygonVariant::Interior, b(&[ZERO]), bm).unwrap();
        let r = pm.pole_rational();
        for z in [c(0.3, 0.2), c(-0.7, 0.1)] {
            let exact = (z - 0.5) / (z * (1.0 - 0.5 * z));
            assert!((r.eval(z).finite().unwrap() - exact).norm() < 1e-13);
        }
        let n = count_preimages(&r, ExtendedPoint::Finite(c(2.0, 0.0))).unwrap();
        assert!(n.agree() && n.roots == 1);
    }

    #[test]
    fn simple_root_count() {
        let r = RationalMap::new(Poly::one(), Poly::monomial(1));
        assert_eq!(
            count_preimages_roots(&r, ExtendedPoint::Finite(c(5.0, 0.0))).unwrap(),
            1
        );
        assert_eq!(
            count_preimages_winding(&r, ExtendedPoint::Infinity, WINDING_RADIUS, 512)
                .unwrap()
                .count,
            1
        );
    }

    #[test]
    fn cross_counts() {
        let r = RationalMap::cross();
        for (target, expected) in [(2.0, 7), (0.0, 8)] {
            let n = count_preimages(&r, ExtendedPoint::Finite(c(target, 0.0))).unwrap();
            assert_eq!((n.winding.count, n.roots), (expected, expected));
        }
        let m = catalog(CatalogEntry::Cross).unwrap();
        for z in DiskSampler::new(100, 9).with_radius_cap(0.9).points() {
            let direct = pole(&m, z).unwrap().finite().unwrap();
            let rational = r.eval(z).finite().unwrap();
            assert!((direct - rational).norm() <= 1e-10 * rational.norm().max(1.0));
        }
    }

    #[test]
    fn rational_pole_matches_the_model() {
        for variant in [PolygonVariant::Interior, PolygonVariant::Exterior] {
            for seed in 0..5 {
                let pm = random_polygon_model(seed, variant, 4);
                let (m, r) = (pm.model(), pm.pole_rational());
                for z in DiskSampler::new(100, seed).with_radius_cap(0.95).points() {
                    let (Ok(direct), ExtendedPoint::Finite(exact)) = (pole(&m, z), r.eval(z))
                    else {
                        continue;
                    };
                    let direct = direct.finite().unwrap();
                    assert!(
                        (direct - exact).norm() <= 1e-10 * exact.norm().max(1.0),
                        "{variant} {seed} {z}"
                    );
                }
            }
        }
    }

    #[test]
    fn random_counts_follow_the_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for variant in [PolygonVariant::Interior, PolygonVariant::Exterior] {
            for seed in 0..6 {
                let pm = random_polygon_model(seed, variant, 4);
                let r = pm.pole_rational();
                for (lo, hi) in [(1.1, 3.0), (0.0, 0.9)] {
                    let t = ExtendedPoint::Finite(random_target(&mut rng, lo, hi));
                    let n = count_preimages(&r, t).unwrap();
                    assert!(n.agree());
                    assert_eq!(n.roots, pm.expected_count(t), "{variant} {seed}");
                }
            }
        }
    }

    #[test]
    fn json_spec() {
        let pm = PolygonModel::from_json(
            r#"{"variant":"interior","Bk":{"zeros":[[0,0]],"unimodular":[1,0]},"Bm":{"zeros":[],"unimodular":[1,0]}}"#,
        )
        .unwrap();
        assert_eq!((pm.k(), pm.m()), (1, 0));
        assert!(PolygonModel::from_json(
            r#"{"variant":"interior","Bk":{"zeros":[[0.1,0]],"unimodular":[1,0]},"Bm":{"zeros":[[0.1,0]],"unimodular":[1,0]}}"#
        )
        .is_err());
    }

    #[test]
    fn blaschke_boundary_modulus() {
        let pm = random_polygon_model(11, PolygonVariant::Interior, 4);
        for bp in [pm.bk(), pm.bm()] {
            let worst = (0..1024)
                .map(|j| {
                    (bp.eval(C64::from_polar(1.0, TAU * j as f64 / 1024.0))
                        .norm()
                        - 1.0)
                        .abs()
                })
                .fold(0.0, f64::max);
            assert!(worst <= 1e-10);
        }
    }
}
