//! Holomorphic symbols on the ball: the weight `psi` and the components of a
//! self-map `phi`.
//!
//! Only symbols that extend continuously to the closed ball are modelled
//! (polynomials in n variables and, on the disk, finite Blaschke products), so
//! boundary values are ordinary evaluations.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sample_sphere, BallPoint, QuadratureScheme};

/// Boundary tolerance used when checking `|phi| <= 1` on validation nodes.
pub const SELF_MAP_TOL: f64 = 1e-9;

/// Exponents `(alpha_1, ..., alpha_n)` of the monomial `z^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|alpha|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ln(alpha!)`
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| libm::lgamma(a as f64 + 1.0)).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .filter(|(&a, _)| a > 0)
            .map(|(&a, c)| c.powu(a))
            .product()
    }

    /// Every multi-index of length `n` with `|alpha| = s`, in lexicographic
    /// order (largest first exponent first).
    pub fn of_degree(n: usize, s: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fill_degree(&mut cur, 0, s, &mut out);
        out
    }

    /// Every multi-index with `|alpha| <= d`, grouped by degree.
    pub fn all_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|s| MultiIndex::of_degree(n, s)).collect()
    }
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        cur[pos] = a;
        fill_degree(cur, pos + 1, remaining - a, out);
    }
    cur[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Finite sum of monomials. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSymbol {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl PolynomialSymbol {
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        if n == 0 {
            return Err(Error::InvalidParameter("polynomial dimension must be at least 1".into()));
        }
        let mut map = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: alpha.dim() });
            }
            *map.entry(alpha).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { n, terms: map })
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::new(n, [(MultiIndex::zero(n), c)]).expect("n >= 1")
    }

    pub fn coordinate(n: usize, j: usize) -> Self {
        Self::new(n, [(MultiIndex::unit(n, j), Complex64::new(1.0, 0.0))]).expect("n >= 1")
    }

    /// One-variable polynomial from coefficients `c_0, c_1, ...`.
    pub fn disk(coeffs: &[Complex64]) -> Self {
        Self::new(1, coeffs.iter().enumerate().map(|(k, &c)| (MultiIndex(vec![k as u32]), c)))
            .expect("n = 1")
    }

    /// Same as [`PolynomialSymbol::disk`] with real coefficients.
    pub fn disk_real(coeffs: &[f64]) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::disk(&c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(a, c)| c * a.monomial(z)).sum()
    }

    pub fn add(&self, other: &PolynomialSymbol) -> Result<PolynomialSymbol> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Self::new(self.n, self.terms.iter().chain(&other.terms).map(|(a, c)| (a.clone(), *c)))
    }

    pub fn scale(&self, k: Complex64) -> PolynomialSymbol {
        Self::new(self.n, self.terms.iter().map(|(a, c)| (a.clone(), c * k))).expect("same dimension")
    }

    pub fn mul(&self, other: &PolynomialSymbol) -> Result<PolynomialSymbol> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *out.entry(a.add(b)).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        Self::new(self.n, out)
    }

    pub fn powu(&self, m: u32) -> PolynomialSymbol {
        let mut result = Self::constant(self.n, Complex64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same dimension");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        result
    }
}

/// `e^{i theta} prod_j (z - a_j) / (1 - conj(a_j) z)` on the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeSymbol {
    zeros: Vec<Complex64>,
    theta: f64,
}

impl BlaschkeSymbol {
    pub fn new(zeros: Vec<Complex64>, theta: f64) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidParameter(format!("Blaschke zero {a} is not inside the disk")));
        }
        Ok(Self { zeros, theta })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.zeros
            .iter()
            .map(|a| (z - a) / (one - a.conj() * z))
            .product::<Complex64>()
            * Complex64::from_polar(1.0, self.theta)
    }

    pub fn powu(&self, m: u32) -> BlaschkeSymbol {
        let zeros = self.zeros.iter().flat_map(|&a| std::iter::repeat_n(a, m as usize)).collect();
        BlaschkeSymbol { zeros, theta: self.theta * m as f64 }
    }
}

/// A holomorphic function on the ball, continuous up to the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolRepr", into = "SymbolRepr")]
pub enum Symbol {
    Poly(PolynomialSymbol),
    Blaschke(BlaschkeSymbol),
    /// `factor * inner`, produced by radial scaling of non-polynomial symbols.
    Scaled { factor: f64, inner: Box<Symbol> },
    /// `base^m`, evaluated by powering the value of `base`.
    Power { base: Box<Symbol>, m: u32 },
}

impl Symbol {
    pub fn constant(n: usize, c: f64) -> Symbol {
        Symbol::Poly(PolynomialSymbol::constant(n, Complex64::new(c, 0.0)))
    }

    pub fn coordinate(n: usize, j: usize) -> Symbol {
        Symbol::Poly(PolynomialSymbol::coordinate(n, j))
    }

    pub fn disk_poly(coeffs: &[f64]) -> Symbol {
        Symbol::Poly(PolynomialSymbol::disk_real(coeffs))
    }

    pub fn blaschke(zeros: &[f64]) -> Result<Symbol> {
        let zeros = zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(Symbol::Blaschke(BlaschkeSymbol::new(zeros, 0.0)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Symbol::Poly(p) => p.dim(),
            Symbol::Blaschke(_) => 1,
            Symbol::Scaled { inner, .. } => inner.dim(),
            Symbol::Power { base, .. } => base.dim(),
        }
    }

    /// Evaluation without the dimension check; `z` must have `dim()` entries.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        match self {
            Symbol::Poly(p) => p.eval(z),
            Symbol::Blaschke(b) => b.eval(z[0]),
            Symbol::Scaled { factor, inner } => inner.eval(z) * *factor,
            Symbol::Power { base, m } => base.eval(z).powu(*m),
        }
    }

    pub fn evaluate(&self, z: &BallPoint) -> Result<Complex64> {
        z.check_dim(self.dim())?;
        Ok(self.eval(z.coords()))
    }

    /// `self^m`. Blaschke products stay Blaschke products; everything else
    /// is powered at evaluation time, which avoids the cancellation of an
    /// expanded polynomial power.
    pub fn power(&self, m: u32) -> Symbol {
        match (self, m) {
            (_, 0) => Symbol::constant(self.dim(), 1.0),
            (_, 1) => self.clone(),
            (Symbol::Blaschke(b), _) => Symbol::Blaschke(b.powu(m)),
            (Symbol::Power { base, m: k }, _) => Symbol::Power { base: base.clone(), m: k * m },
            _ => Symbol::Power { base: Box::new(self.clone()), m },
        }
    }

    pub fn scale(&self, r: f64) -> Symbol {
        match self {
            Symbol::Poly(p) => Symbol::Poly(p.scale(Complex64::new(r, 0.0))),
            Symbol::Scaled { factor, inner } => Symbol::Scaled { factor: factor * r, inner: inner.clone() },
            other => Symbol::Scaled { factor: r, inner: Box::new(other.clone()) },
        }
    }

    /// Unimodular on the boundary.
    pub fn is_inner(&self) -> bool {
        match self {
            Symbol::Blaschke(_) => true,
            Symbol::Poly(p) => {
                p.terms().len() == 1
                    && p.dim() == 1
                    && p.terms().values().all(|c| (c.norm() - 1.0).abs() < 1e-15)
                    && p.degree() > 0
            }
            Symbol::Scaled { factor, inner } => *factor == 1.0 && inner.is_inner(),
            Symbol::Power { base, m } => *m > 0 && base.is_inner(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermRepr {
    alpha: Vec<u32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SymbolRepr {
    Poly {
        n: usize,
        terms: Vec<TermRepr>,
    },
    Blaschke {
        #[serde(default = "disk_dim")]
        n: usize,
        zeros: Vec<[f64; 2]>,
        #[serde(default)]
        theta: f64,
    },
    Scaled {
        factor: f64,
        inner: Box<SymbolRepr>,
    },
    Power {
        m: u32,
        base: Box<SymbolRepr>,
    },
}

fn disk_dim() -> usize {
    1
}

impl TryFrom<SymbolRepr> for Symbol {
    type Error = Error;

    fn try_from(r: SymbolRepr) -> Result<Self> {
        match r {
            SymbolRepr::Poly { n, terms } => Ok(Symbol::Poly(PolynomialSymbol::new(
                n,
                terms.into_iter().map(|t| (MultiIndex(t.alpha), Complex64::new(t.re, t.im))),
            )?)),
            SymbolRepr::Blaschke { n, zeros, theta } => {
                if n != 1 {
                    return Err(Error::InvalidParameter("Blaschke symbols live on the disk (n = 1)".into()));
                }
                let zeros = zeros.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                Ok(Symbol::Blaschke(BlaschkeSymbol::new(zeros, theta)?))
            }
            SymbolRepr::Scaled { factor, inner } => {
                Ok(Symbol::Scaled { factor, inner: Box::new(Symbol::try_from(*inner)?) })
            }
            SymbolRepr::Power { m, base } => Ok(Symbol::Power { base: Box::new(Symbol::try_from(*base)?), m }),
        }
    }
}

impl From<Symbol> for SymbolRepr {
    fn from(s: Symbol) -> Self {
        match s {
            Symbol::Poly(p) => SymbolRepr::Poly {
                n: p.n,
                terms: p
                    .terms
                    .into_iter()
                    .map(|(a, c)| TermRepr { alpha: a.0, re: c.re, im: c.im })
                    .collect(),
            },
            Symbol::Blaschke(b) => SymbolRepr::Blaschke {
                n: 1,
                zeros: b.zeros.iter().map(|c| [c.re, c.im]).collect(),
                theta: b.theta,
            },
            Symbol::Scaled { factor, inner } => {
                SymbolRepr::Scaled { factor, inner: Box::new(SymbolRepr::from(*inner)) }
            }
            Symbol::Power { base, m } => SymbolRepr::Power { m, base: Box::new(SymbolRepr::from(*base)) },
        }
    }
}

/// Outcome of checking `|phi| <= 1 + tol` on boundary nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfMapCheck {
    pub ok: bool,
    pub max_modulus: f64,
    pub worst_node: BallPoint,
    pub tol: f64,
    pub scheme: QuadratureScheme,
}

/// `phi = (phi_1, ..., phi_n)`. Serialized as the array of its components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Symbol>", into = "Vec<Symbol>")]
pub struct BallSelfMap {
    components: Vec<Symbol>,
    check: Option<SelfMapCheck>,
}

impl TryFrom<Vec<Symbol>> for BallSelfMap {
    type Error = Error;

    fn try_from(components: Vec<Symbol>) -> Result<Self> {
        BallSelfMap::new(components)
    }
}

impl From<BallSelfMap> for Vec<Symbol> {
    fn from(m: BallSelfMap) -> Self {
        m.components
    }
}

impl BallSelfMap {
    pub fn new(components: Vec<Symbol>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidParameter("a self-map needs at least one component".into()));
        }
        if let Some(bad) = components.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        Ok(Self { components, check: None })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|j| Symbol::coordinate(n, j)).collect()).expect("n >= 1")
    }

    /// Build and validate on the default node set for the dimension.
    pub fn validated(components: Vec<Symbol>) -> Result<Self> {
        let mut map = Self::new(components)?;
        let scheme = validation_scheme(map.dim());
        let check = map.validate(&scheme, SELF_MAP_TOL)?;
        if !check.ok {
            return Err(Error::NotSelfMap { max_modulus: check.max_modulus, tol: check.tol });
        }
        Ok(map)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Symbol] {
        &self.components
    }

    pub fn is_validated(&self) -> bool {
        self.check.as_ref().is_some_and(|c| c.ok)
    }

    pub fn check(&self) -> Option<&SelfMapCheck> {
        self.check.as_ref()
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    pub fn evaluate(&self, z: &BallPoint) -> Result<BallPoint> {
        z.check_dim(self.dim())?;
        BallPoint::from_coords(self.eval(z.coords()))
    }

    /// Runs [`validate_self_map`] and records the result on the map.
    pub fn validate(&mut self, scheme: &QuadratureScheme, tol: f64) -> Result<SelfMapCheck> {
        let check = validate_self_map(self, scheme, tol)?;
        self.check = Some(check.clone());
        Ok(check)
    }

    /// `z -> r phi(z)`, whose image stays in the ball of radius `r`.
    pub fn radial_scale(&self, r: f64) -> Result<BallSelfMap> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!("radial scale r = {r} outside (0, 1)")));
        }
        if !self.is_validated() {
            return Err(Error::NotValidated);
        }
        let check = self.check.as_ref().map(|c| SelfMapCheck {
            ok: c.max_modulus * r <= r * (1.0 + c.tol),
            max_modulus: c.max_modulus * r,
            worst_node: c.worst_node.clone(),
            tol: c.tol,
            scheme: c.scheme,
        });
        Ok(BallSelfMap {
            components: self.components.iter().map(|c| c.scale(r)).collect(),
            check,
        })
    }
}

/// Node set used by [`BallSelfMap::validated`].
pub fn validation_scheme(n: usize) -> QuadratureScheme {
    if n == 1 {
        QuadratureScheme::circle(8192)
    } else {
        QuadratureScheme::monte_carlo(50_000, 0x5e1f)
    }
}

/// Maximum principle: `phi` maps the ball into itself iff `|phi| <= 1` on
/// the sphere, checked here on the nodes of `scheme`.
pub fn validate_self_map(map: &BallSelfMap, scheme: &QuadratureScheme, tol: f64) -> Result<SelfMapCheck> {
    let nodes = sample_sphere(map.dim(), scheme)?;
    let mut worst = (f64::NEG_INFINITY, 0usize);
    for (i, node) in nodes.iter().enumerate() {
        let m = map.eval(node.coords()).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if m > worst.0 {
            worst = (m, i);
        }
    }
    Ok(SelfMapCheck {
        ok: worst.0 <= 1.0 + tol,
        max_modulus: worst.0,
        worst_node: nodes[worst.1].clone(),
        tol,
        scheme: *scheme,
    })
}

/// The weight and self-map of one operator `W_{psi, phi}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolPair {
    pub psi: Symbol,
    pub phi: BallSelfMap,
}

impl SymbolPair {
    pub fn new(psi: Symbol, phi: BallSelfMap) -> Result<Self> {
        if psi.dim() != phi.dim() {
            return Err(Error::DimensionMismatch { expected: phi.dim(), found: psi.dim() });
        }
        Ok(Self { psi, phi })
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    /// Parse a pair file and validate the self-map.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut pair: SymbolPair = serde_json::from_str(text)?;
        if pair.psi.dim() != pair.phi.dim() {
            return Err(Error::DimensionMismatch { expected: pair.phi.dim(), found: pair.psi.dim() });
        }
        let check = pair.phi.validate(&validation_scheme(pair.dim()), SELF_MAP_TOL)?;
        if !check.ok {
            return Err(Error::NotSelfMap { max_modulus: check.max_modulus, tol: check.tol });
        }
        Ok(pair)
    }
}

/// A polynomial of degree `<= degree` with complex Gaussian coefficients
/// damped by `1 / (1 + |alpha|)`, reproducible from `seed`.
pub fn seeded_polynomial(n: usize, degree: u32, seed: u64) -> PolynomialSymbol {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(MultiIndex, Complex64)> = MultiIndex::all_up_to(n, degree)
        .into_iter()
        .map(|alpha| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let damp = 1.0 / (1.0 + alpha.degree() as f64);
            (alpha, Complex64::new(re, im) * damp)
        })
        .collect();
    PolynomialSymbol::new(n, terms).expect("dimension matches")
}

/// Named disk and ball pairs used by the tests, the CLI and the demo page.
pub mod families {
    use super::*;

    fn pair(psi: Symbol, phi: Vec<Symbol>) -> SymbolPair {
        SymbolPair::new(psi, BallSelfMap::validated(phi).expect("built-in self-map")).expect("built-in pair")
    }

    /// `psi = 1`, `phi = id`.
    pub fn identity(n: usize) -> SymbolPair {
        pair(Symbol::constant(n, 1.0), BallSelfMap::identity(n).components().to_vec())
    }

    /// `psi`, `phi(z) = z / 2` on the disk.
    pub fn half_dilation(psi: Symbol) -> SymbolPair {
        pair(psi, vec![Symbol::disk_poly(&[0.0, 0.5])])
    }

    /// `phi(z) = (1 + z) / 2` on the disk: touches the circle only at 1.
    pub fn affine_half(psi: Symbol) -> SymbolPair {
        pair(psi, vec![Symbol::disk_poly(&[0.5, 0.5])])
    }

    /// `phi` the single Blaschke factor with zero `a`.
    pub fn blaschke(psi: Symbol, a: f64) -> SymbolPair {
        pair(psi, vec![Symbol::blaschke(&[a]).expect("|a| < 1")])
    }

    /// `psi = (1 + z) / 2`, `phi(z) = z^2`.
    pub fn weighted_square() -> SymbolPair {
        pair(Symbol::disk_poly(&[0.5, 0.5]), vec![Symbol::disk_poly(&[0.0, 0.0, 1.0])])
    }

    /// `phi(z) = ((1 + z_1) / 2, z_2 / 2)` on the ball of C^2.
    pub fn ball2_affine(psi: Symbol) -> SymbolPair {
        let phi1 = PolynomialSymbol::new(
            2,
            [
                (MultiIndex::zero(2), Complex64::new(0.5, 0.0)),
                (MultiIndex::unit(2, 0), Complex64::new(0.5, 0.0)),
            ],
        )
        .expect("n = 2");
        let phi2 = PolynomialSymbol::coordinate(2, 1).scale(Complex64::new(0.5, 0.0));
        pair(psi, vec![Symbol::Poly(phi1), Symbol::Poly(phi2)])
    }

    /// Look up a pair by name: `identity`, `identity2`, `half`, `affine-half`,
    /// `blaschke-half`, `weighted-square`, `edge`, `cusp`, `ball2-affine`.
    pub fn named(name: &str) -> Option<SymbolPair> {
        let one = Symbol::constant(1, 1.0);
        Some(match name {
            "identity" => identity(1),
            "identity2" => identity(2),
            "half" => half_dilation(one),
            "affine-half" => affine_half(one),
            "blaschke-half" => blaschke(one, 0.5),
            "weighted-square" => weighted_square(),
            "edge" => affine_half(Symbol::disk_poly(&[1.0, -1.0])),
            "cusp" => affine_half(Symbol::disk_poly(&[1.0, -2.0, 1.0])),
            "ball2-affine" => ball2_affine(Symbol::constant(2, 1.0)),
            _ => return None,
        })
    }

    pub const NAMES: [&str; 9] = [
        "identity",
        "identity2",
        "half",
        "affine-half",
        "blaschke-half",
        "weighted-square",
        "edge",
        "cusp",
        "ball2-affine",
    ];
}
