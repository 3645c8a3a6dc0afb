//! Points of the closed unit ball of C^n, the normalized surface measure on
//! the sphere, and nonisotropic windows `S_h(xi) = { z : |1 - <z, xi>| < h }`.
//!
//! Boundary integrals are plain node averages: sigma has total mass one, so
//! `integrate_boundary(1) == 1` exactly. For `n = 1` the default scheme is the
//! uniform-angle rule, which is spectrally accurate on trigonometric
//! polynomials. For `n >= 2` nodes are normalized complex Gaussian vectors,
//! which are sigma-distributed for every dimension, and every integral comes
//! with a standard error.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::ComplexMean;

/// Slack allowed when deciding whether a point lies in the closed ball.
pub const TOL_BOUNDARY: f64 = 1e-12;

/// A point of C^n. Constructed through [`BallPoint::new`] it is checked to lie
/// in the closed unit ball; [`BallPoint::from_coords`] skips that check for
/// images of maps that are validated separately.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let p = Self::from_coords(coords)?;
        if p.norm() > 1.0 + TOL_BOUNDARY {
            return Err(Error::InvalidParameter(format!(
                "point of norm {} is outside the closed unit ball",
                p.norm()
            )));
        }
        Ok(p)
    }

    pub fn from_coords(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(Self { coords })
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![Complex64::new(0.0, 0.0); n.max(1)] }
    }

    /// A point of the unit disk (n = 1).
    pub fn disk(z: Complex64) -> Self {
        Self { coords: vec![z] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_j * conj(other_j)`.
    pub fn inner(&self, other: &BallPoint) -> Complex64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scaled(&self, r: f64) -> BallPoint {
        BallPoint { coords: self.coords.iter().map(|c| c * r).collect() }
    }

    /// Radial projection onto the sphere; `None` at the origin.
    pub fn normalized(&self) -> Option<BallPoint> {
        let r = self.norm();
        (r > 0.0).then(|| self.scaled(1.0 / r))
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }

    pub(crate) fn as_pairs(&self) -> Vec<[f64; 2]> {
        self.coords.iter().map(|c| [c.re, c.im]).collect()
    }
}

impl Serialize for BallPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        let coords = pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        BallPoint::from_coords(coords).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// `e^{2 pi i k / N}`, `k = 0..N`. Disk only.
    DeterministicCircle,
    /// Seeded sigma-uniform nodes on the sphere of C^n.
    MonteCarloSphere,
}

/// Serialized as `{"kind", "samples", "seed"}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadratureScheme {
    pub kind: SchemeKind,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

impl QuadratureScheme {
    pub fn circle(samples: usize) -> Self {
        Self { kind: SchemeKind::DeterministicCircle, samples, seed: 0 }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self { kind: SchemeKind::MonteCarloSphere, samples, seed }
    }

    /// 4096 uniform angles on the circle, 10^5 seeded Monte Carlo nodes otherwise.
    pub fn default_for(n: usize) -> Self {
        if n == 1 {
            Self::circle(4096)
        } else {
            Self::monte_carlo(100_000, 0)
        }
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.kind == SchemeKind::MonteCarloSphere
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidScheme("dimension must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidScheme("sample count must be positive".into()));
        }
        if self.kind == SchemeKind::DeterministicCircle && n != 1 {
            return Err(Error::InvalidScheme(format!(
                "deterministic-circle quadrature requires n = 1, got n = {n}"
            )));
        }
        Ok(())
    }
}

/// Quadrature nodes on the unit sphere of C^n.
pub fn sample_sphere(n: usize, scheme: &QuadratureScheme) -> Result<Vec<BallPoint>> {
    scheme.check(n)?;
    let count = scheme.samples;
    match scheme.kind {
        SchemeKind::DeterministicCircle => Ok((0..count)
            .map(|k| {
                let t = 2.0 * PI * (k as f64) / (count as f64);
                BallPoint::disk(Complex64::from_polar(1.0, t))
            })
            .collect()),
        SchemeKind::MonteCarloSphere => {
            let mut rng = ChaCha8Rng::seed_from_u64(scheme.seed);
            Ok((0..count).map(|_| gaussian_direction(n, &mut rng)).collect())
        }
    }
}

pub(crate) fn gaussian_direction(n: usize, rng: &mut ChaCha8Rng) -> BallPoint {
    loop {
        let coords: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        let p = BallPoint { coords };
        if let Some(u) = p.normalized() {
            return u;
        }
    }
}

/// Mean of a boundary function with its Monte Carlo standard error (zero for
/// the deterministic rule).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: Complex64,
    pub std_error: f64,
    pub samples: usize,
}

pub fn integrate_boundary<F>(n: usize, f: F, scheme: &QuadratureScheme) -> Result<Integral>
where
    F: Fn(&BallPoint) -> Complex64,
{
    let nodes = sample_sphere(n, scheme)?;
    integrate_nodes(&nodes, scheme, f)
}

/// Same as [`integrate_boundary`] on a node set the caller already holds.
pub fn integrate_nodes<F>(nodes: &[BallPoint], scheme: &QuadratureScheme, f: F) -> Result<Integral>
where
    F: Fn(&BallPoint) -> Complex64,
{
    if nodes.is_empty() {
        return Err(Error::Empty("quadrature node set".into()));
    }
    let mut acc = ComplexMean::default();
    for (index, node) in nodes.iter().enumerate() {
        let v = f(node);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::QuadratureDomain { index, node: node.as_pairs() });
        }
        acc.push(v);
    }
    let std_error = if scheme.is_monte_carlo() { acc.std_error() } else { 0.0 };
    Ok(Integral { value: acc.mean(), std_error, samples: nodes.len() })
}

/// Real-valued variant of [`integrate_nodes`], returning `(mean, std_error)`.
pub fn integrate_nodes_real<F>(
    nodes: &[BallPoint],
    scheme: &QuadratureScheme,
    f: F,
) -> Result<(f64, f64)>
where
    F: Fn(&BallPoint) -> f64,
{
    let i = integrate_nodes(nodes, scheme, |z| Complex64::new(f(z), 0.0))?;
    Ok((i.value.re, i.std_error))
}

/// `S_h(xi)`; serialized as `{"center": [[re, im], ...], "h"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonWindow {
    pub center: BallPoint,
    pub h: f64,
}

impl CarlesonWindow {
    pub fn new(center: BallPoint, h: f64) -> Result<Self> {
        if (center.norm() - 1.0).abs() > TOL_BOUNDARY {
            return Err(Error::InvalidParameter(format!(
                "window center must be a unit vector, |xi| = {}",
                center.norm()
            )));
        }
        if !(h > 0.0 && h <= 2.0) {
            return Err(Error::InvalidParameter(format!("aperture h = {h} outside (0, 2]")));
        }
        Ok(Self { center, h })
    }

    pub fn contains(&self, z: &BallPoint) -> bool {
        window_distance(z, &self.center) < self.h
    }
}

/// `|1 - <z, xi>|`, the quasi-distance defining the windows.
pub fn window_distance(z: &BallPoint, xi: &BallPoint) -> f64 {
    (Complex64::new(1.0, 0.0) - z.inner(xi)).norm()
}

pub fn window_contains(w: &CarlesonWindow, z: &BallPoint) -> bool {
    w.contains(z)
}

/// sigma-mass of `S_h(xi)` on the sphere, by node counting.
pub fn sigma_window_mass(xi: &BallPoint, h: f64, scheme: &QuadratureScheme) -> Result<f64> {
    let window = CarlesonWindow::new(xi.clone(), h)?;
    let nodes = sample_sphere(xi.dim(), scheme)?;
    Ok(window_mass_on_nodes(&nodes, &window))
}

pub fn window_mass_on_nodes(nodes: &[BallPoint], window: &CarlesonWindow) -> f64 {
    let inside = nodes.iter().filter(|z| window.contains(z)).count();
    inside as f64 / nodes.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fourth_roots_of_unity() {
        let nodes = sample_sphere(1, &QuadratureScheme::circle(4)).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (p, e) in nodes.iter().zip(expected) {
            assert!((p.coords()[0] - e).norm() < 1e-15);
        }
    }

    #[test]
    fn circle_scheme_rejected_off_the_disk() {
        let err = sample_sphere(2, &QuadratureScheme::circle(8)).unwrap_err();
        assert!(matches!(err, Error::InvalidScheme(_)));
        assert!(sample_sphere(1, &QuadratureScheme::monte_carlo(0, 1)).is_err());
    }

    #[test]
    fn monte_carlo_nodes_are_reproducible_and_on_the_sphere() {
        let s = QuadratureScheme::monte_carlo(1000, 7);
        let a = sample_sphere(2, &s).unwrap();
        let b = sample_sphere(2, &s).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| (p.norm() - 1.0).abs() <= TOL_BOUNDARY));
    }

    #[test]
    fn coordinate_second_moment_is_one_over_n() {
        let s = QuadratureScheme::monte_carlo(100_000, 11);
        let nodes = sample_sphere(2, &s).unwrap();
        let (m, se) = integrate_nodes_real(&nodes, &s, |z| z.coords()[0].norm_sqr()).unwrap();
        assert!((m - 0.5).abs() < 3.0 * se, "{m} +- {se}");
    }

    #[test]
    fn constants_integrate_exactly() {
        let s = QuadratureScheme::monte_carlo(5000, 3);
        let v = c(0.1, -0.7);
        let i = integrate_boundary(3, |_| v, &s).unwrap();
        assert_eq!(i.value, v);
        let one = integrate_boundary(1, |_| c(1.0, 0.0), &QuadratureScheme::circle(17)).unwrap();
        assert_eq!(one.value, c(1.0, 0.0));
    }

    #[test]
    fn roots_of_unity_cancel() {
        let s = QuadratureScheme::circle(64);
        for k in 1..20 {
            let i = integrate_boundary(1, |z| z.coords()[0].powu(k), &s).unwrap();
            assert!(i.value.norm() < 1e-12);
        }
    }

    #[test]
    fn fourth_moment_on_the_two_sphere() {
        // m! (n-1)! / (n-1+m)! at m = 2, n = 2
        let s = QuadratureScheme::monte_carlo(200_000, 5);
        let i = integrate_boundary(2, |z| c(z.coords()[0].norm_sqr().powi(2), 0.0), &s).unwrap();
        assert!((i.value.re - 1.0 / 3.0).abs() < 3.0 * i.std_error);
    }

    #[test]
    fn non_finite_integrand_names_the_node() {
        let s = QuadratureScheme::circle(8);
        let err = integrate_boundary(1, |z| if z.coords()[0].re < -0.9 { c(f64::NAN, 0.0) } else { c(1.0, 0.0) }, &s)
            .unwrap_err();
        match err {
            Error::QuadratureDomain { index, .. } => assert_eq!(index, 4),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn window_membership() {
        let xi = BallPoint::disk(c(1.0, 0.0));
        let full = CarlesonWindow::new(xi.clone(), 2.0).unwrap();
        assert!(full.contains(&BallPoint::disk(c(0.3, -0.9))));
        assert!(!full.contains(&BallPoint::disk(c(-1.0, 0.0))));
        let narrow = CarlesonWindow::new(xi.clone(), 0.1).unwrap();
        assert!(!narrow.contains(&BallPoint::origin(1)));
        for h in [0.01, 0.3, 1.5] {
            let w = CarlesonWindow::new(xi.clone(), h).unwrap();
            assert!(w.contains(&xi.scaled(1.0 - h / 2.0)));
        }
        assert!(CarlesonWindow::new(BallPoint::disk(c(0.5, 0.0)), 1.0).is_err());
        assert!(CarlesonWindow::new(xi, 2.5).is_err());
    }

    #[test]
    fn arc_window_mass() {
        let h: f64 = 0.5;
        // |1 - e^{it}| < h  <=>  |t| < arccos(1 - h^2/2)
        let oracle = (1.0 - h * h / 2.0).acos() / PI;
        let m = sigma_window_mass(&BallPoint::disk(c(1.0, 0.0)), h, &QuadratureScheme::circle(1 << 16)).unwrap();
        assert!((m - oracle).abs() < 1e-4, "{m} vs {oracle}");
        assert!((oracle - 0.16086).abs() < 1e-5);
        let all = sigma_window_mass(&BallPoint::disk(c(1.0, 0.0)), 2.0, &QuadratureScheme::circle(100)).unwrap();
        assert_eq!(all, 0.99);
    }

    #[test]
    fn window_mass_scales_like_h_to_the_n() {
        for (n, scheme) in [(1, QuadratureScheme::circle(1 << 15)), (2, QuadratureScheme::monte_carlo(200_000, 9))] {
            let nodes = sample_sphere(n, &scheme).unwrap();
            let mut xi = vec![c(0.0, 0.0); n];
            xi[0] = c(1.0, 0.0);
            let xi = BallPoint::new(xi).unwrap();
            let hs: Vec<f64> = (0..8).map(|k| 0.05 * 10f64.powf(k as f64 / 7.0)).collect();
            let pts: Vec<(f64, f64)> = hs
                .iter()
                .map(|&h| {
                    let w = CarlesonWindow::new(xi.clone(), h).unwrap();
                    (h.ln(), window_mass_on_nodes(&nodes, &w).ln())
                })
                .collect();
            let slope = crate::numeric::least_squares_slope(&pts);
            assert!((slope - n as f64).abs() < 0.15, "n = {n}: slope {slope}");
        }
    }
}
