//! The pullback measure `mu_{psi,phi,q}(A) = int_{phi^{-1}(A)} |psi|^q dsigma`
//! realized on boundary nodes, and the extreme set `E = { |phi*| = 1 }`
//! through its thickenings `E_eps = { |phi*| >= 1 - eps }`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{integrate_nodes, sample_sphere, BallPoint, QuadratureScheme, TOL_BOUNDARY};
use crate::numeric::{extrapolate_limit, ComplexMean, Estimate, Limit};
use crate::symbols::{BallSelfMap, Symbol, SymbolPair};

/// Thresholds for the extreme-set profile, largest first.
pub const DEFAULT_EPS: [f64; 6] = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub loc: BallPoint,
    pub w: f64,
}

/// Where a measure came from, so that its integrals can be recomputed on
/// the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub psi: Symbol,
    pub phi: BallSelfMap,
    pub scheme: QuadratureScheme,
}

/// Finite weighted point cloud on the closed ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalPullbackMeasure {
    pub n: usize,
    pub q: f64,
    pub atoms: Vec<Atom>,
    pub total_mass: f64,
    /// Monte Carlo standard error of `total_mass` (zero for deterministic nodes
    /// and synthetic measures).
    pub mass_std_error: f64,
    pub provenance: Option<Provenance>,
}

impl EmpiricalPullbackMeasure {
    /// A synthetic measure, e.g. a point mass, for testing Carleson diagnostics.
    pub fn from_atoms(n: usize, q: f64, atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            a.loc.check_dim(n)?;
            if !(a.w >= 0.0 && a.w.is_finite()) {
                return Err(Error::InvalidParameter(format!("atom {i} has weight {}", a.w)));
            }
            if a.loc.norm() > 1.0 + TOL_BOUNDARY {
                return Err(Error::InvalidParameter(format!("atom {i} lies outside the closed ball")));
            }
        }
        let total_mass = atoms.iter().map(|a| a.w).sum();
        Ok(Self { n, q, atoms, total_mass, mass_std_error: 0.0, provenance: None })
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Atoms `(phi(xi_i), |psi(xi_i)|^q / N)` over the nodes of `scheme`.
pub fn build_pullback(pair: &SymbolPair, q: f64, scheme: &QuadratureScheme) -> Result<EmpiricalPullbackMeasure> {
    if !pair.phi.is_validated() {
        return Err(Error::NotValidated);
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent q = {q} must be finite and positive")));
    }
    let n = pair.dim();
    let nodes = sample_sphere(n, scheme)?;
    let count = nodes.len() as f64;
    let mut atoms = Vec::with_capacity(nodes.len());
    let mut mass = ComplexMean::default();
    for xi in &nodes {
        let weight = pair.psi.eval(xi.coords()).norm().powf(q);
        let loc = BallPoint::from_coords(pair.phi.eval(xi.coords()))?;
        if loc.norm() > 1.0 + pair.phi.check().map_or(TOL_BOUNDARY, |c| c.tol) {
            return Err(Error::NotSelfMap { max_modulus: loc.norm(), tol: TOL_BOUNDARY });
        }
        mass.push(Complex64::new(weight, 0.0));
        atoms.push(Atom { loc, w: weight / count });
    }
    let total_mass = atoms.iter().map(|a| a.w).sum();
    Ok(EmpiricalPullbackMeasure {
        n,
        q,
        atoms,
        total_mass,
        mass_std_error: if scheme.is_monte_carlo() { mass.std_error() } else { 0.0 },
        provenance: Some(Provenance { psi: pair.psi.clone(), phi: pair.phi.clone(), scheme: *scheme }),
    })
}

/// Both sides of the change of variables `int g dmu = int |psi|^q (g o phi) dsigma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackIntegral {
    pub atom_sum: f64,
    pub boundary_form: Option<f64>,
    pub rel_diff: Option<f64>,
}

/// Relative agreement demanded between the two sides.
pub const CHANGE_OF_VARIABLES_TOL: f64 = 1e-10;

pub fn integrate_pullback<G>(mu: &EmpiricalPullbackMeasure, g: G) -> Result<PullbackIntegral>
where
    G: Fn(&BallPoint) -> f64,
{
    let mut atom_sum = 0.0;
    for (index, a) in mu.atoms.iter().enumerate() {
        let value = g(&a.loc);
        if value < 0.0 || value.is_nan() {
            return Err(Error::NegativeIntegrand { index, value });
        }
        atom_sum += a.w * value;
    }
    let Some(prov) = &mu.provenance else {
        return Ok(PullbackIntegral { atom_sum, boundary_form: None, rel_diff: None });
    };
    let nodes = sample_sphere(mu.n, &prov.scheme)?;
    let boundary = integrate_nodes(&nodes, &prov.scheme, |xi| {
        let w = prov.psi.eval(xi.coords()).norm().powf(mu.q);
        let image = BallPoint::from_coords(prov.phi.eval(xi.coords())).expect("dimension >= 1");
        Complex64::new(w * g(&image), 0.0)
    })?
    .value
    .re;
    let scale = atom_sum.abs().max(boundary.abs());
    let rel_diff = if scale > 0.0 { (atom_sum - boundary).abs() / scale } else { 0.0 };
    Ok(PullbackIntegral { atom_sum, boundary_form: Some(boundary), rel_diff: Some(rel_diff) })
}

/// Masses of `E_eps` for a decreasing schedule of `eps`, with limits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeSetProfile {
    pub q: f64,
    pub eps: Vec<f64>,
    /// `sigma(E_eps)`
    pub sigma_mass: Vec<f64>,
    /// `int_{E_eps} |psi|^q dsigma`
    pub mu_mass: Vec<f64>,
    pub sigma_std_error: Vec<f64>,
    pub mu_std_error: Vec<f64>,
    pub sigma_limit: Limit,
    pub mu_limit: Limit,
}

impl ExtremeSetProfile {
    /// Rows `eps, sigma(E_eps), mu(E_eps)` for plotting.
    pub fn rows(&self) -> Vec<[f64; 3]> {
        (0..self.eps.len()).map(|i| [self.eps[i], self.sigma_mass[i], self.mu_mass[i]]).collect()
    }
}

pub(crate) fn check_eps_schedule(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::InvalidParameter("empty threshold schedule".into()));
    }
    if eps.iter().any(|&e| !(e > 0.0 && e < 1.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("threshold schedule must be strictly decreasing inside (0, 1)".into()));
    }
    Ok(())
}

pub fn extreme_profile(
    pair: &SymbolPair,
    q: f64,
    eps: &[f64],
    scheme: &QuadratureScheme,
) -> Result<ExtremeSetProfile> {
    let mu = build_pullback(pair, q, scheme)?;
    profile_from_measure(&mu, eps)
}

/// Profile of a measure built by [`build_pullback`]; each atom stands for one
/// boundary node.
pub fn profile_from_measure(mu: &EmpiricalPullbackMeasure, eps: &[f64]) -> Result<ExtremeSetProfile> {
    check_eps_schedule(eps)?;
    if mu.is_empty() {
        return Err(Error::Empty("pullback measure has no atoms".into()));
    }
    let count = mu.atoms.len() as f64;
    let mc = mu.provenance.as_ref().is_some_and(|p| p.scheme.is_monte_carlo());
    let moduli: Vec<f64> = mu.atoms.iter().map(|a| a.loc.norm()).collect();
    let mut sigma_mass = Vec::with_capacity(eps.len());
    let mut mu_mass = Vec::with_capacity(eps.len());
    let mut sigma_se = Vec::with_capacity(eps.len());
    let mut mu_se = Vec::with_capacity(eps.len());
    for &e in eps {
        let (mut s_acc, mut m_acc) = (ComplexMean::default(), ComplexMean::default());
        for (a, &r) in mu.atoms.iter().zip(&moduli) {
            let inside = r >= 1.0 - e;
            s_acc.push(Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0));
            m_acc.push(Complex64::new(if inside { a.w * count } else { 0.0 }, 0.0));
        }
        sigma_mass.push(s_acc.mean().re);
        mu_mass.push(m_acc.mean().re);
        sigma_se.push(if mc { s_acc.std_error() } else { 0.0 });
        mu_se.push(if mc { m_acc.std_error() } else { 0.0 });
    }
    let last = eps.len() - 1;
    let sigma_limit = extrapolate_limit(eps, &sigma_mass, sigma_se[last]);
    let mu_limit = extrapolate_limit(eps, &mu_mass, mu_se[last]);
    Ok(ExtremeSetProfile {
        q: mu.q,
        eps: eps.to_vec(),
        sigma_mass,
        mu_mass,
        sigma_std_error: sigma_se,
        mu_std_error: mu_se,
        sigma_limit,
        mu_limit,
    })
}

/// `mu_{psi,phi,q}(phi(E))`, read off as the limit of `int_{E_eps} |psi|^q`.
pub fn pullback_extreme_mass(profile: &ExtremeSetProfile) -> Estimate {
    profile.mu_limit.estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::families;
    use std::f64::consts::PI;

    fn one() -> Symbol {
        Symbol::constant(1, 1.0)
    }

    #[test]
    fn identity_pullback_is_sigma() {
        let s = QuadratureScheme::circle(512);
        let mu = build_pullback(&families::identity(1), 2.0, &s).unwrap();
        assert_eq!(mu.atoms.len(), 512);
        assert!(mu.atoms.iter().all(|a| (a.loc.norm() - 1.0).abs() < 1e-15 && a.w == 1.0 / 512.0));
        assert!((mu.total_mass - 1.0).abs() < 1e-14);

        let pair = SymbolPair::new(Symbol::coordinate(1, 0), families::identity(1).phi).unwrap();
        let mu = build_pullback(&pair, 2.0, &s).unwrap();
        assert!((mu.total_mass - 1.0).abs() < 1e-12);

        let mu = build_pullback(&families::half_dilation(one()), 2.0, &s).unwrap();
        assert!(mu.atoms.iter().all(|a| (a.loc.norm() - 0.5).abs() < 1e-15));
        assert!((mu.total_mass - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unvalidated_maps_are_refused() {
        let pair = SymbolPair::new(one(), BallSelfMap::identity(1)).unwrap();
        assert!(matches!(build_pullback(&pair, 2.0, &QuadratureScheme::circle(8)), Err(Error::NotValidated)));
    }

    #[test]
    fn change_of_variables_examples() {
        let s = QuadratureScheme::circle(1024);
        let mu = build_pullback(&families::half_dilation(one()), 2.0, &s).unwrap();
        let i = integrate_pullback(&mu, |_| 1.0).unwrap();
        assert!((i.atom_sum - mu.total_mass).abs() < 1e-15);
        let i = integrate_pullback(&mu, |w| w.norm_sqr()).unwrap();
        assert!((i.atom_sum - 0.25).abs() < 1e-14);
        assert!(i.rel_diff.unwrap() < CHANGE_OF_VARIABLES_TOL);

        let mu = build_pullback(&families::weighted_square(), 2.0, &s).unwrap();
        let i = integrate_pullback(&mu, |_| 1.0).unwrap();
        assert!((i.atom_sum - 0.5).abs() < 1e-14);
        assert!(i.rel_diff.unwrap() < CHANGE_OF_VARIABLES_TOL);

        assert!(matches!(integrate_pullback(&mu, |_| -1.0), Err(Error::NegativeIntegrand { index: 0, .. })));
    }

    #[test]
    fn extreme_profiles() {
        let s = QuadratureScheme::circle(4096);
        let id = extreme_profile(&families::identity(1), 2.0, &DEFAULT_EPS, &s).unwrap();
        assert!(id.sigma_mass.iter().all(|&m| m == 1.0));
        assert_eq!(id.sigma_limit.estimate.value, 1.0);

        let half = extreme_profile(&families::half_dilation(one()), 2.0, &DEFAULT_EPS, &s).unwrap();
        assert!(half.sigma_mass.iter().chain(&half.mu_mass).all(|&m| m == 0.0));
        assert_eq!(pullback_extreme_mass(&half).value, 0.0);

        let affine = extreme_profile(&families::affine_half(one()), 2.0, &DEFAULT_EPS, &s).unwrap();
        for (e, m) in affine.eps.iter().zip(&affine.sigma_mass) {
            // |(1 + e^{it})/2| >= 1 - eps  <=>  |t| <= 2 arccos(1 - eps)
            let oracle = 2.0 * (1.0 - e).acos() / PI;
            assert!((m - oracle).abs() <= 2.0 / 4096.0, "eps {e}: {m} vs {oracle}");
        }
        assert!(affine.sigma_mass.windows(2).all(|w| w[1] <= w[0]));
        assert!(affine.sigma_limit.estimate.is_zero_within(1.0), "{:?}", affine.sigma_limit);
        assert!(pullback_extreme_mass(&affine).is_zero_within(1.0));
    }

    #[test]
    fn extreme_mass_examples() {
        let s = QuadratureScheme::circle(4096);
        let id = extreme_profile(&families::identity(1), 2.0, &DEFAULT_EPS, &s).unwrap();
        assert!((pullback_extreme_mass(&id).value - 1.0).abs() < 1e-12);
        let b = extreme_profile(&families::blaschke(one(), 0.5), 2.0, &DEFAULT_EPS, &s).unwrap();
        assert!((pullback_extreme_mass(&b).value - 1.0).abs() < 1e-12);
        let ws = extreme_profile(&families::weighted_square(), 2.0, &DEFAULT_EPS, &s).unwrap();
        assert!((pullback_extreme_mass(&ws).value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn schedule_validation() {
        let s = QuadratureScheme::circle(64);
        let pair = families::identity(1);
        assert!(extreme_profile(&pair, 2.0, &[0.1, 0.2], &s).is_err());
        assert!(extreme_profile(&pair, 2.0, &[], &s).is_err());
        assert!(extreme_profile(&pair, 2.0, &[1.5, 0.1], &s).is_err());
    }

    #[test]
    fn total_mass_is_the_hq_norm_power() {
        let s = QuadratureScheme::monte_carlo(40_000, 2);
        let pair = families::ball2_affine(Symbol::coordinate(2, 1));
        let mu = build_pullback(&pair, 3.0, &s).unwrap();
        let norm = crate::hardy::hp_norm(2, |z| pair.psi.eval(z.coords()), 3.0, &s, &[1.0]).unwrap();
        let via_norm = norm.value.powi(3);
        assert!((mu.total_mass - via_norm).abs() < 1e-12 * via_norm);
    }
}
