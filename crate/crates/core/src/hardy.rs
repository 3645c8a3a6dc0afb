//! Hardy-space norms on the ball.
//!
//! Two routes to the H2 norm are kept separate on purpose: [`h2_norm`] sums
//! `|c(alpha)|^2 ||z^alpha||^2` over stored coefficients, while [`hp_norm`]
//! integrates `|f(r xi)|^p` over boundary nodes. The monomial norms are
//! `||z^alpha||_2^2 = (n-1)! alpha! / (n-1+|alpha|)!`, evaluated through
//! log-Gamma so that large degrees do not overflow.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{integrate_nodes, sample_sphere, BallPoint, QuadratureScheme};
use crate::numeric::ComplexMean;
use crate::symbols::{MultiIndex, PolynomialSymbol};

/// Radii at which [`hp_norm`] integrates; `r = 1` is allowed because every
/// implemented symbol is continuous up to the boundary.
pub const DEFAULT_RADII: [f64; 4] = [0.9, 0.99, 0.999, 1.0];

/// Default degree cutoff for expansions in dimension `n`.
pub fn default_degree(n: usize) -> u32 {
    match n {
        1 => 12,
        2 => 8,
        _ => 5,
    }
}

/// `||z^alpha||_2^2` in H2 of the ball of C^n, `n = alpha.dim()`.
pub fn monomial_h2_norm_sq(alpha: &MultiIndex) -> f64 {
    let n = alpha.dim() as f64;
    let k = alpha.degree() as f64;
    (libm::lgamma(n) + alpha.ln_factorial() - libm::lgamma(n + k)).exp()
}

/// Truncated homogeneous expansion `sum_{|alpha| <= d} c(alpha) z^alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct HardyExpansion {
    n: usize,
    degree: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl HardyExpansion {
    pub fn new<I>(n: usize, degree: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (alpha, c) in coeffs {
            if alpha.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: alpha.dim() });
            }
            if alpha.degree() > degree {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {alpha} exceeds the degree cutoff {degree}"
                )));
            }
            if c != Complex64::new(0.0, 0.0) {
                map.insert(alpha, c);
            }
        }
        Ok(Self { n, degree, coeffs: map })
    }

    pub fn zero(n: usize, degree: u32) -> Self {
        Self { n, degree, coeffs: BTreeMap::new() }
    }

    pub fn from_polynomial(p: &PolynomialSymbol) -> Self {
        Self::new(p.dim(), p.degree(), p.terms().iter().map(|(a, c)| (a.clone(), *c))).expect("polynomial terms")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.coeffs.iter().map(|(a, c)| c * a.monomial(z)).sum()
    }

    /// Parseval: `sum |c(alpha)|^2 ||z^alpha||^2`.
    pub fn h2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|(a, c)| c.norm_sqr() * monomial_h2_norm_sq(a)).sum()
    }

    /// `R_m`: keeps the homogeneous layers of degree `> m`.
    pub fn truncate_tail(&self, m: u32) -> HardyExpansion {
        self.filtered(|a| a.degree() > m)
    }

    /// `Q_m = I - R_m`: keeps the layers of degree `<= m`.
    pub fn truncate_head(&self, m: u32) -> HardyExpansion {
        self.filtered(|a| a.degree() <= m)
    }

    fn filtered(&self, keep: impl Fn(&MultiIndex) -> bool) -> HardyExpansion {
        HardyExpansion {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.iter().filter(|(a, _)| keep(a)).map(|(a, c)| (a.clone(), *c)).collect(),
        }
    }

    pub fn add(&self, other: &HardyExpansion) -> Result<HardyExpansion> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut coeffs = self.coeffs.clone();
        for (a, c) in &other.coeffs {
            *coeffs.entry(a.clone()).or_default() += c;
        }
        Self::new(self.n, self.degree.max(other.degree), coeffs)
    }

    /// H2 mass of the top homogeneous layer, reported as truncation error.
    pub fn top_layer_mass(&self) -> f64 {
        self.filtered(|a| a.degree() == self.degree).h2_norm_sq()
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    alpha: MultiIndex,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    n: usize,
    d: u32,
    coeffs: Vec<CoeffRepr>,
}

impl Serialize for HardyExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionRepr {
            n: self.n,
            d: self.degree,
            coeffs: self.coeffs.iter().map(|(a, c)| CoeffRepr { alpha: a.clone(), re: c.re, im: c.im }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HardyExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ExpansionRepr::deserialize(d)?;
        HardyExpansion::new(r.n, r.d, r.coeffs.into_iter().map(|c| (c.alpha, Complex64::new(c.re, c.im))))
            .map_err(serde::de::Error::custom)
    }
}

pub fn h2_norm(expansion: &HardyExpansion) -> f64 {
    expansion.h2_norm_sq().sqrt()
}

/// One radius of the sup in the H^p norm: `int |f(r xi)|^p dsigma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub r: f64,
    pub integral: f64,
    pub std_error: f64,
}

/// A norm value with its quadrature error estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub std_error: f64,
    pub slices: Vec<Slice>,
    /// Slices nondecreasing in `r` within three standard errors.
    pub monotone: bool,
}

/// `||f||_p = (sup_r int |f(r xi)|^p dsigma)^{1/p}` with the sup taken over
/// `radii`.
pub fn hp_norm<F>(n: usize, f: F, p: f64, scheme: &QuadratureScheme, radii: &[f64]) -> Result<NormEstimate>
where
    F: Fn(&BallPoint) -> Complex64,
{
    let nodes = sample_sphere(n, scheme)?;
    hp_norm_on(&nodes, scheme, f, p, radii)
}

/// [`hp_norm`] on a node set the caller already holds.
pub fn hp_norm_on<F>(nodes: &[BallPoint], scheme: &QuadratureScheme, f: F, p: f64, radii: &[f64]) -> Result<NormEstimate>
where
    F: Fn(&BallPoint) -> Complex64,
{
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be finite and positive")));
    }
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(Error::InvalidParameter("radius schedule must be non-empty and inside (0, 1]".into()));
    }
    let mut slices = Vec::with_capacity(radii.len());
    for &r in radii {
        let i = integrate_nodes(nodes, scheme, |xi| {
            let v = if r == 1.0 { f(xi) } else { f(&xi.scaled(r)) };
            Complex64::new(v.norm().powf(p), 0.0)
        })?;
        slices.push(Slice { r, integral: i.value.re, std_error: i.std_error });
    }
    let monotone = slices.windows(2).all(|w| {
        w[1].integral >= w[0].integral - 3.0 * (w[0].std_error + w[1].std_error) - 1e-12 * w[0].integral
    });
    let best = slices.iter().copied().fold(slices[0], |a, b| if b.integral > a.integral { b } else { a });
    let value = best.integral.powf(1.0 / p);
    let std_error = if best.integral > 0.0 {
        best.std_error * value / (p * best.integral)
    } else {
        0.0
    };
    Ok(NormEstimate { value, std_error, slices, monotone })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: BallPoint,
}

/// Boundary maximum of `|f|`, which is the sup norm by the maximum principle.
pub fn sup_norm<F>(n: usize, f: F, scheme: &QuadratureScheme) -> Result<SupNorm>
where
    F: Fn(&BallPoint) -> Complex64,
{
    let nodes = sample_sphere(n, scheme)?;
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, xi) in nodes.iter().enumerate() {
        let v = f(xi).norm();
        if !v.is_finite() {
            return Err(Error::QuadratureDomain { index: i, node: xi.as_pairs() });
        }
        if v > best.0 {
            best = (v, i);
        }
    }
    Ok(SupNorm { value: best.0, argmax: nodes[best.1].clone() })
}

/// Coefficients of the orthogonal projection onto polynomials of degree
/// `<= d`, with the quadrature standard error of each coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub expansion: HardyExpansion,
    pub std_errors: BTreeMap<MultiIndex, f64>,
    /// `int |f|^2 dsigma` on the same nodes.
    pub l2_norm_sq: f64,
}

impl Projection {
    /// Fraction of the boundary L2 mass not captured below the cutoff.
    pub fn tail_fraction(&self) -> f64 {
        if self.l2_norm_sq <= 0.0 {
            return 0.0;
        }
        ((self.l2_norm_sq - self.expansion.h2_norm_sq()) / self.l2_norm_sq).max(0.0)
    }
}

/// `c(alpha) = <f, z^alpha> / ||z^alpha||^2` for every `|alpha| <= d`.
pub fn expand_boundary_function<F>(n: usize, f: F, d: u32, scheme: &QuadratureScheme) -> Result<Projection>
where
    F: Fn(&BallPoint) -> Complex64,
{
    let nodes = sample_sphere(n, scheme)?;
    expand_on(&nodes, scheme, f, d)
}

pub(crate) fn expand_on<F>(nodes: &[BallPoint], scheme: &QuadratureScheme, f: F, d: u32) -> Result<Projection>
where
    F: Fn(&BallPoint) -> Complex64,
{
    if nodes.is_empty() {
        return Err(Error::Empty("quadrature node set".into()));
    }
    let n = nodes[0].dim();
    let indices = MultiIndex::all_up_to(n, d);
    let mut accs = vec![ComplexMean::default(); indices.len()];
    let mut l2 = ComplexMean::default();
    for (i, xi) in nodes.iter().enumerate() {
        let v = f(xi);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::QuadratureDomain { index: i, node: xi.as_pairs() });
        }
        l2.push(Complex64::new(v.norm_sqr(), 0.0));
        if n == 1 {
            // powers of a single variable by recurrence
            let conj = xi.coords()[0].conj();
            let mut mono = Complex64::new(1.0, 0.0);
            for acc in accs.iter_mut() {
                acc.push(v * mono);
                mono *= conj;
            }
        } else {
            for (acc, alpha) in accs.iter_mut().zip(&indices) {
                acc.push(v * alpha.monomial(xi.coords()).conj());
            }
        }
    }
    let mc = scheme.is_monte_carlo();
    let mut coeffs = Vec::with_capacity(indices.len());
    let mut std_errors = BTreeMap::new();
    for (alpha, acc) in indices.into_iter().zip(accs) {
        let w = monomial_h2_norm_sq(&alpha);
        coeffs.push((alpha.clone(), acc.mean() / w));
        std_errors.insert(alpha, if mc { acc.std_error() / w } else { 0.0 });
    }
    Ok(Projection { expansion: HardyExpansion::new(n, d, coeffs)?, std_errors, l2_norm_sq: l2.mean().re })
}

/// `f_w(z) = (1 - |w|^2)^{n/p} / (1 - <z, w>)^{2n/p}`, a unit vector of H^p.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestKernel {
    center: BallPoint,
    p: f64,
}

impl TestKernel {
    /// `p = f64::INFINITY` gives the constant function 1.
    pub fn new(center: BallPoint, p: f64) -> Result<Self> {
        if center.norm() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "kernel center must be inside the ball, |w| = {}",
                center.norm()
            )));
        }
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("kernel exponent p = {p} must be positive")));
        }
        Ok(Self { center, p })
    }

    pub fn center(&self) -> &BallPoint {
        &self.center
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let n = self.dim() as f64;
        let s = n / self.p;
        let prefactor = (1.0 - self.center.norm_sqr()).powf(s);
        let inner: Complex64 = z.iter().zip(self.center.coords()).map(|(a, b)| a * b.conj()).sum();
        // Re(1 - <z, w>) > 0 on the closed ball, so the principal branch is continuous
        prefactor * (Complex64::new(1.0, 0.0) - inner).powf(-2.0 * s)
    }

    /// `|f_w(z)|^p`, computed without the complex power.
    pub fn modulus_pow(&self, z: &[Complex64], p: f64) -> f64 {
        let n = self.dim() as f64;
        let s = n * p / self.p;
        let inner: Complex64 = z.iter().zip(self.center.coords()).map(|(a, b)| a * b.conj()).sum();
        (1.0 - self.center.norm_sqr()).powf(s) / (Complex64::new(1.0, 0.0) - inner).norm().powf(2.0 * s)
    }
}

pub fn test_kernel_eval(k: &TestKernel, z: &BallPoint) -> Result<Complex64> {
    z.check_dim(k.dim())?;
    Ok(k.eval(z.coords()))
}

/// `||f_w||_p`, which should be 1.
pub fn test_kernel_norm_check(k: &TestKernel, scheme: &QuadratureScheme) -> Result<NormEstimate> {
    if k.p.is_infinite() {
        return Ok(NormEstimate { value: 1.0, std_error: 0.0, slices: Vec::new(), monotone: true });
    }
    hp_norm(k.dim(), |z| k.eval(z.coords()), k.p, scheme, &DEFAULT_RADII)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub worst_ratio: f64,
    pub worst_point: BallPoint,
    pub norm: NormEstimate,
}

/// `max |f(z)| (1 - |z|^2)^{n/p} / ||f||_p` over `points`; bounded by 1.
pub fn growth_bound_check<F>(
    n: usize,
    f: F,
    p: f64,
    points: &[BallPoint],
    scheme: &QuadratureScheme,
) -> Result<GrowthCheck>
where
    F: Fn(&BallPoint) -> Complex64,
{
    if points.is_empty() {
        return Err(Error::Empty("interior point set".into()));
    }
    let norm = hp_norm(n, &f, p, scheme, &DEFAULT_RADII)?;
    let mut worst = (f64::NEG_INFINITY, 0);
    for (i, z) in points.iter().enumerate() {
        z.check_dim(n)?;
        let ratio = f(z).norm() * (1.0 - z.norm_sqr()).powf(n as f64 / p) / norm.value;
        if ratio > worst.0 {
            worst = (ratio, i);
        }
    }
    Ok(GrowthCheck { worst_ratio: worst.0, worst_point: points[worst.1].clone(), norm })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialConvergence {
    pub delta: f64,
    /// `(r, sup_{|z| <= 1 - delta} |f(z) - f(r z)|)`.
    pub rows: Vec<(f64, f64)>,
    pub nonincreasing: bool,
}

/// The sup over the closed ball of radius `1 - delta` is read off its
/// bounding sphere (maximum principle applied to `f - f(r .)`).
pub fn radial_convergence_check<F>(
    n: usize,
    f: F,
    delta: f64,
    radii: &[f64],
    scheme: &QuadratureScheme,
) -> Result<RadialConvergence>
where
    F: Fn(&BallPoint) -> Complex64,
{
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    let shell: Vec<BallPoint> = sample_sphere(n, scheme)?.iter().map(|x| x.scaled(1.0 - delta)).collect();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let sup = shell.iter().map(|z| (f(z) - f(&z.scaled(r))).norm()).fold(0.0, f64::max);
        rows.push((r, sup));
    }
    let nonincreasing = rows.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-15);
    Ok(RadialConvergence { delta, rows, nonincreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::integrate_nodes_real;
    use crate::symbols::Symbol;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_norms() {
        for n in 1..5 {
            assert_eq!(monomial_h2_norm_sq(&MultiIndex::zero(n)), 1.0);
        }
        for k in 0..200 {
            assert!((monomial_h2_norm_sq(&MultiIndex::new(vec![k])) - 1.0).abs() < 1e-9);
        }
        assert!((monomial_h2_norm_sq(&MultiIndex::new(vec![1, 0])) - 0.5).abs() < 1e-14);
        // no overflow far past 170!
        let big = monomial_h2_norm_sq(&MultiIndex::new(vec![150, 150]));
        assert!(big.is_finite() && big > 0.0);
    }

    #[test]
    fn monomial_norm_against_monte_carlo() {
        let s = QuadratureScheme::monte_carlo(200_000, 21);
        let nodes = sample_sphere(2, &s).unwrap();
        let (m, se) = integrate_nodes_real(&nodes, &s, |z| z.coords()[0].norm_sqr()).unwrap();
        assert!((m - monomial_h2_norm_sq(&MultiIndex::unit(2, 0))).abs() < 3.0 * se);
    }

    #[test]
    fn parseval_examples() {
        assert_eq!(h2_norm(&HardyExpansion::from_polynomial(&PolynomialSymbol::constant(2, c(3.0, 0.0)))), 3.0);
        let sum = PolynomialSymbol::coordinate(2, 0).add(&PolynomialSymbol::coordinate(2, 1)).unwrap();
        assert!((h2_norm(&HardyExpansion::from_polynomial(&sum)) - 1.0).abs() < 1e-15);
        let half = HardyExpansion::from_polynomial(&PolynomialSymbol::disk_real(&[0.5, 0.5]));
        let oracle = integrate_nodes_real(
            &sample_sphere(1, &QuadratureScheme::circle(64)).unwrap(),
            &QuadratureScheme::circle(64),
            |z| ((c(1.0, 0.0) + z.coords()[0]) / 2.0).norm_sqr(),
        )
        .unwrap()
        .0
        .sqrt();
        assert!((h2_norm(&half) - oracle).abs() < 1e-14);
        assert!((h2_norm(&half) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn hp_norm_examples() {
        let s = QuadratureScheme::circle(1024);
        for p in [0.5, 1.0, 2.0, 3.7] {
            let k = hp_norm(1, |_| c(-2.0, 0.0), p, &s, &DEFAULT_RADII).unwrap();
            assert!((k.value - 2.0).abs() < 1e-12);
            let mono = hp_norm(1, |z| z.coords()[0].powu(5), p, &s, &DEFAULT_RADII).unwrap();
            assert!((mono.value - 1.0).abs() < 1e-12);
            assert!(mono.monotone);
        }
        let lin = hp_norm(1, |z| c(1.0, 0.0) + z.coords()[0], 2.0, &s, &DEFAULT_RADII).unwrap();
        let parseval = h2_norm(&HardyExpansion::from_polynomial(&PolynomialSymbol::disk_real(&[1.0, 1.0])));
        assert!((lin.value - parseval).abs() < 1e-8);
        assert!((lin.value - 2f64.sqrt()).abs() < 1e-8);
        assert!(hp_norm(1, |_| c(1.0, 0.0), 0.0, &s, &DEFAULT_RADII).is_err());
    }

    #[test]
    fn sup_norms() {
        let s = QuadratureScheme::circle(4096);
        assert!((sup_norm(1, |_| c(0.0, 2.0), &s).unwrap().value - 2.0).abs() < 1e-15);
        let b = Symbol::blaschke(&[0.5, -0.2]).unwrap();
        assert!((sup_norm(1, |z| b.eval(z.coords()), &s).unwrap().value - 1.0).abs() < 1e-10);
        let half = sup_norm(1, |z| (c(1.0, 0.0) + z.coords()[0]) / 2.0, &s).unwrap();
        assert!((half.value - 1.0).abs() < 1e-15);
        assert_eq!(half.argmax.coords()[0], c(1.0, 0.0));
    }

    #[test]
    fn expansions() {
        let s = QuadratureScheme::circle(256);
        let one = expand_boundary_function(1, |_| c(1.0, 0.0), 6, &s).unwrap();
        assert!((one.expansion.coeff(&MultiIndex::zero(1)) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(one.expansion.coeffs().iter().filter(|(a, _)| a.degree() > 0).all(|(_, c)| c.norm() < 1e-14));

        // psi (g o phi) with psi = (1 + z)/2, phi = z^2, g = z is (z^2 + z^3)/2
        let f = |z: &BallPoint| {
            let w = z.coords()[0];
            (c(1.0, 0.0) + w) / 2.0 * w * w
        };
        let proj = expand_boundary_function(1, f, 8, &s).unwrap();
        let oracle = PolynomialSymbol::disk_real(&[0.5, 0.5]).mul(&PolynomialSymbol::disk_real(&[0.0, 0.0, 1.0])).unwrap();
        for k in 0..=8u32 {
            let alpha = MultiIndex::new(vec![k]);
            let want = oracle.terms().get(&alpha).copied().unwrap_or_default();
            assert!((proj.expansion.coeff(&alpha) - want).norm() < 1e-12, "degree {k}");
        }
        assert!(proj.tail_fraction() < 1e-12);

        let mc = QuadratureScheme::monte_carlo(50_000, 4);
        let z1 = expand_boundary_function(2, |z| z.coords()[0], 2, &mc).unwrap();
        for (alpha, coef) in z1.expansion.coeffs() {
            let se = z1.std_errors[alpha];
            if *alpha == MultiIndex::unit(2, 0) {
                assert!((coef - c(1.0, 0.0)).norm() < 5.0 * se + 1e-12);
            } else {
                assert!(coef.norm() < 5.0 * se + 1e-12, "{alpha}: {coef} vs {se}");
            }
        }
    }

    #[test]
    fn truncations_split_orthogonally() {
        let p = PolynomialSymbol::disk_real(&[0.3, -1.0, 0.25, 2.0]);
        let e = HardyExpansion::from_polynomial(&p);
        assert!(HardyExpansion::from_polynomial(&PolynomialSymbol::disk_real(&[4.0])).truncate_tail(0).is_zero());
        assert_eq!(e.truncate_head(e.degree()), e);
        for m in 0..5 {
            let (r, q) = (e.truncate_tail(m), e.truncate_head(m));
            assert_eq!(r.add(&q).unwrap(), e);
            assert!((r.h2_norm_sq() + q.h2_norm_sq() - e.h2_norm_sq()).abs() <= 1e-15 * e.h2_norm_sq());
        }
    }

    #[test]
    fn kernels() {
        let zero = TestKernel::new(BallPoint::origin(2), 3.0).unwrap();
        assert_eq!(zero.eval(&[c(0.3, 0.1), c(-0.2, 0.4)]), c(1.0, 0.0));
        let w = BallPoint::new(vec![c(0.3, 0.2), c(-0.1, 0.5)]).unwrap();
        for p in [1.0, 2.0, 2.5] {
            let k = TestKernel::new(w.clone(), p).unwrap();
            let v = test_kernel_eval(&k, &w).unwrap();
            let want = (1.0 - w.norm_sqr()).powf(-2.0 / p);
            assert!((v - c(want, 0.0)).norm() < 1e-12 * want);
        }
        let disk = TestKernel::new(BallPoint::disk(c(0.7, 0.0)), 2.0).unwrap();
        let nrm = test_kernel_norm_check(&disk, &QuadratureScheme::circle(4096)).unwrap();
        assert!((nrm.value - 1.0).abs() < 1e-6);
        assert!(TestKernel::new(BallPoint::disk(c(1.0, 0.0)), 2.0).is_err());
    }

    #[test]
    fn kernel_normalization_on_the_disk() {
        let s = QuadratureScheme::circle(4096);
        for p in [1.0, 2.0, 4.0] {
            for (r, t) in [(0.0, 0.0), (0.5, 1.0), (0.9, 2.0), (0.95, -0.4)] {
                let k = TestKernel::new(BallPoint::disk(Complex64::from_polar(r, t)), p).unwrap();
                let nrm = test_kernel_norm_check(&k, &s).unwrap();
                assert!((nrm.value - 1.0).abs() < 1e-6, "p = {p}, |w| = {r}: {}", nrm.value);
            }
        }
    }

    #[test]
    fn growth_bound() {
        let s = QuadratureScheme::circle(4096);
        let pts: Vec<BallPoint> = (0..50).map(|k| BallPoint::disk(Complex64::from_polar(k as f64 / 51.0, k as f64))).collect();
        let g = growth_bound_check(1, |_| c(2.0, 0.0), 2.0, &pts, &s).unwrap();
        assert!(g.worst_ratio <= 1.0 + 1e-12);
        let w = BallPoint::disk(c(0.6, 0.3));
        let k = TestKernel::new(w.clone(), 2.0).unwrap();
        let g = growth_bound_check(1, |z| k.eval(z.coords()), 2.0, std::slice::from_ref(&w), &s).unwrap();
        assert!(g.worst_ratio <= 1.0 + 1e-6 && g.worst_ratio > 1.0 - 1e-6);
    }

    #[test]
    fn radial_convergence() {
        let s = QuadratureScheme::circle(512);
        let radii = [0.5, 0.9, 0.99, 0.999];
        let k = radial_convergence_check(1, |_| c(1.0, 1.0), 0.5, &radii, &s).unwrap();
        assert!(k.rows.iter().all(|r| r.1 == 0.0));
        let lin = radial_convergence_check(1, |z| z.coords()[0], 0.5, &radii, &s).unwrap();
        for (r, sup) in &lin.rows {
            assert!((sup - (1.0 - r) / 2.0).abs() < 1e-15);
        }
        let b = Symbol::blaschke(&[0.5]).unwrap();
        let bl = radial_convergence_check(1, |z| b.eval(z.coords()), 0.5, &radii, &s).unwrap();
        assert!(bl.nonincreasing);
        assert!(bl.rows[2].1 < 0.05);
        // grid oracle at r = 0.99
        let mut oracle: f64 = 0.0;
        for i in 0..=100 {
            for j in 0..200 {
                let z = Complex64::from_polar(0.5 * i as f64 / 100.0, 2.0 * PI * j as f64 / 200.0);
                oracle = oracle.max((b.eval(&[z]) - b.eval(&[z * 0.99])).norm());
            }
        }
        assert!((bl.rows[2].1 - oracle).abs() < 1e-3);
    }
}
