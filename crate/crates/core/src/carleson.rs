//! Carleson-measure diagnostics for pullback measures: box constants over
//! the windows `S_h(xi)`, vanishing profiles, the Berezin-type transform and
//! the equivalence report tying them to boundedness of `H^p -> H^q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::citations as cite;
use crate::error::{Error, Result};
use crate::estimators::{
    exponent, norm_upper_subordination, operator_norm_estimate, CorpusEstimate, Deciding, DecisionRule,
    EstimateReport, Evidence, Setting, TestCorpus, Trace,
};
use crate::geometry::{integrate_nodes_real, sample_sphere, BallPoint, QuadratureScheme};
use crate::numeric::{classify_growth, extrapolate_limit, Estimate, GrowthVerdict, Limit, ZERO_FLOOR};
use crate::pullback::{build_pullback, profile_from_measure, EmpiricalPullbackMeasure, DEFAULT_EPS};
use crate::symbols::SymbolPair;

/// Apertures `2 * 3^{-j}`, `j = 0..4`.
pub const DEFAULT_H_GRID: [f64; 5] = [2.0, 2.0 / 3.0, 2.0 / 9.0, 2.0 / 27.0, 2.0 / 81.0];
pub const DEFAULT_SHELLS: [f64; 5] = [0.0, 0.5, 0.9, 0.99, 0.999];
pub const DEFAULT_TRACE_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];
/// Relative agreement required between the two evaluations of the transform.
pub const BEREZIN_AGREEMENT_TOL: f64 = 1e-10;
/// Heaviest near-boundary atoms whose directions are added as window centers.
const ATOM_CENTERS: usize = 16;

/// Window centers: `count` uniform angles (`n = 1`) or seeded sphere
/// samples, plus the directions of the atoms closest to the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterSample {
    pub count: usize,
    pub seed: u64,
}

impl Default for CenterSample {
    fn default() -> Self {
        Self { count: 256, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxConstant {
    pub beta: f64,
    pub value: f64,
    pub argmax_center: Option<BallPoint>,
    pub argmax_h: Option<f64>,
    /// `(h, sup_xi mu(S_h(xi)) / h^{n beta})`, `h` decreasing.
    pub profile: Vec<[f64; 2]>,
    pub growth: GrowthVerdict,
}

fn check_h_grid(h: &[f64]) -> Result<()> {
    if h.is_empty() {
        return Err(Error::InvalidParameter("empty aperture grid".into()));
    }
    if h.iter().any(|&x| !(x > 0.0 && x <= 2.0)) || h.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("aperture grid must be strictly decreasing inside (0, 2]".into()));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 1.0 && beta.is_finite()) {
        return Err(Error::Precondition(format!("beta = {beta} must be >= 1")));
    }
    Ok(())
}

fn window_centers(mu: &EmpiricalPullbackMeasure, sample: &CenterSample) -> Result<Vec<BallPoint>> {
    let scheme = if mu.n == 1 {
        QuadratureScheme::circle(sample.count.max(1))
    } else {
        QuadratureScheme::monte_carlo(sample.count.max(1), sample.seed)
    };
    let mut centers = sample_sphere(mu.n, &scheme)?;
    let mut by_modulus: Vec<&BallPoint> = mu.atoms.iter().filter(|a| a.w > 0.0).map(|a| &a.loc).collect();
    by_modulus.sort_by(|a, b| b.norm_sqr().total_cmp(&a.norm_sqr()));
    centers.extend(by_modulus.into_iter().take(ATOM_CENTERS).filter_map(|z| z.normalized()));
    Ok(centers)
}

/// `M = max mu(S_h(xi)) / h^{n beta}` over sampled centers and the grid.
pub fn box_constant(
    mu: &EmpiricalPullbackMeasure,
    beta: f64,
    h_grid: &[f64],
    centers: &CenterSample,
) -> Result<BoxConstant> {
    check_beta(beta)?;
    check_h_grid(h_grid)?;
    if mu.is_empty() {
        return Err(Error::Empty("measure has no atoms".into()));
    }
    let exponent = mu.n as f64 * beta;
    let scale: Vec<f64> = h_grid.iter().map(|h| h.powf(exponent)).collect();
    let mut profile: Vec<(f64, Option<BallPoint>)> = vec![(0.0, None); h_grid.len()];
    let mut masses = vec![0.0; h_grid.len()];
    for xi in window_centers(mu, centers)? {
        masses.iter_mut().for_each(|m| *m = 0.0);
        for a in &mu.atoms {
            let d = (Complex64::new(1.0, 0.0) - a.loc.inner(&xi)).norm();
            // the grid is decreasing, so the windows containing the atom form a prefix
            for (m, &h) in masses.iter_mut().zip(h_grid) {
                if d < h {
                    *m += a.w;
                } else {
                    break;
                }
            }
        }
        for (j, slot) in profile.iter_mut().enumerate() {
            let v = masses[j] / scale[j];
            if v > slot.0 {
                *slot = (v, Some(xi.clone()));
            }
        }
    }
    let (mut value, mut argmax_center, mut argmax_h) = (0.0, None, None);
    for (j, (v, c)) in profile.iter().enumerate() {
        if *v > value {
            value = *v;
            argmax_center = c.clone();
            argmax_h = Some(h_grid[j]);
        }
    }
    let values: Vec<f64> = profile.iter().map(|p| p.0).collect();
    Ok(BoxConstant {
        beta,
        value,
        argmax_center,
        argmax_h,
        profile: h_grid.iter().zip(&values).map(|(&h, &v)| [h, v]).collect(),
        growth: classify_growth(&values, 2.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingProfile {
    pub profile: Vec<[f64; 2]>,
    pub box_constant: f64,
    /// Last three entries nonincreasing and the final one below a tenth of `M`.
    pub vanishing: bool,
}

pub fn vanishing_profile(
    mu: &EmpiricalPullbackMeasure,
    beta: f64,
    h_grid: &[f64],
    centers: &CenterSample,
) -> Result<VanishingProfile> {
    let b = box_constant(mu, beta, h_grid, centers)?;
    Ok(vanishing_from_box(&b))
}

fn vanishing_from_box(b: &BoxConstant) -> VanishingProfile {
    let values: Vec<f64> = b.profile.iter().map(|p| p[1]).collect();
    let tail = &values[values.len().saturating_sub(3)..];
    let settling = tail.windows(2).all(|w| w[1] <= w[0]);
    let last = values.last().copied().unwrap_or(0.0);
    let vanishing = settling && (last < 0.1 * b.value || last <= ZERO_FLOOR);
    VanishingProfile { profile: b.profile.clone(), box_constant: b.value, vanishing }
}

/// `(1 - |z|^2)^s / |1 - <w, z>|^{2s}` with `s = nq/p`.
fn berezin_kernel(w: &[Complex64], z: &BallPoint, s: f64) -> f64 {
    let inner: Complex64 = w.iter().zip(z.coords()).map(|(a, b)| a * b.conj()).sum();
    let denom = (Complex64::new(1.0, 0.0) - inner).norm_sqr();
    ((1.0 - z.norm_sqr()) / denom).powf(s)
}

/// Shells and directions at which the transform is sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerezinGrid {
    pub shells: Vec<f64>,
    pub directions: usize,
    pub seed: u64,
}

impl Default for BerezinGrid {
    fn default() -> Self {
        Self { shells: DEFAULT_SHELLS.to_vec(), directions: 24, seed: 0 }
    }
}

fn grid_directions(n: usize, directions: usize, seed: u64) -> Result<Vec<BallPoint>> {
    let scheme = if n == 1 {
        QuadratureScheme::circle(directions.max(1))
    } else {
        QuadratureScheme::monte_carlo(directions.max(1), seed)
    };
    sample_sphere(n, &scheme)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerezinSup {
    pub value: f64,
    pub argmax: BallPoint,
    /// `(shell radius, max over directions)`.
    pub shells: Vec<[f64; 2]>,
    pub growth: GrowthVerdict,
    /// Largest relative gap between the atom sum and the boundary form.
    pub max_rel_diff: f64,
    /// Transform at the origin, equal to the total mass.
    pub at_origin: Option<f64>,
    pub total_mass: f64,
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    for (name, x) in [("p", p), ("q", q)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidParameter(format!("exponent {name} = {x} must be finite and positive")));
        }
    }
    Ok(())
}

fn atom_sum(mu: &EmpiricalPullbackMeasure, z: &BallPoint, s: f64) -> f64 {
    mu.atoms.iter().map(|a| a.w * berezin_kernel(a.loc.coords(), z, s)).sum()
}

/// Supremum of the transform of `mu_{psi,phi,q}` over a shell grid, each
/// value computed as an atom sum and as a boundary integral.
pub fn berezin_sup(
    pair: &SymbolPair,
    p: f64,
    q: f64,
    grid: &BerezinGrid,
    scheme: &QuadratureScheme,
) -> Result<BerezinSup> {
    check_pq(p, q)?;
    let mu = build_pullback(pair, q, scheme)?;
    berezin_sup_on(&mu, p, grid)
}

fn berezin_sup_on(mu: &EmpiricalPullbackMeasure, p: f64, grid: &BerezinGrid) -> Result<BerezinSup> {
    let Some(prov) = &mu.provenance else {
        return Err(Error::MissingPrerequisite("the boundary form needs a measure built from a symbol pair".into()));
    };
    if grid.shells.is_empty() || grid.shells.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(Error::InvalidParameter("shell radii must lie in [0, 1)".into()));
    }
    let n = mu.n;
    let s = n as f64 * mu.q / p;
    let nodes = sample_sphere(n, &prov.scheme)?;
    let directions = grid_directions(n, grid.directions, grid.seed)?;

    let mut best: Option<(f64, BallPoint)> = None;
    let mut shells = Vec::with_capacity(grid.shells.len());
    let mut max_rel_diff = 0.0f64;
    let mut at_origin = None;
    for &radius in &grid.shells {
        let points: Vec<BallPoint> =
            if radius == 0.0 { vec![BallPoint::origin(n)] } else { directions.iter().map(|d| d.scaled(radius)).collect() };
        let mut shell_max = 0.0f64;
        for z in points {
            let atoms = atom_sum(mu, &z, s);
            let (boundary, _) = integrate_nodes_real(&nodes, &prov.scheme, |xi| {
                let w = prov.psi.eval(xi.coords()).norm().powf(mu.q);
                w * berezin_kernel(&prov.phi.eval(xi.coords()), &z, s)
            })?;
            let scale = atoms.abs().max(boundary.abs());
            let rel = if scale > 0.0 { (atoms - boundary).abs() / scale } else { 0.0 };
            if rel > BEREZIN_AGREEMENT_TOL {
                return Err(Error::InternalConsistency(format!(
                    "berezin transform at {:?}: atom sum {atoms:e} vs boundary form {boundary:e}",
                    z.as_pairs()
                )));
            }
            max_rel_diff = max_rel_diff.max(rel);
            if radius == 0.0 {
                at_origin = Some(atoms);
            }
            shell_max = shell_max.max(atoms);
            if best.as_ref().is_none_or(|b| atoms > b.0) {
                best = Some((atoms, z));
            }
        }
        shells.push([radius, shell_max]);
    }
    let (value, argmax) = best.expect("at least one shell");
    let growth = classify_growth(&shells.iter().map(|s| s[1]).collect::<Vec<_>>(), 2.0);
    Ok(BerezinSup { value, argmax, shells, growth, max_rel_diff, at_origin, total_mass: mu.total_mass })
}

/// Supremum over directions of the transform at radii approaching 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerezinTrace {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub limit: Limit,
    /// `limit^{1/q}`, the candidate lower bound for the essential norm.
    pub limit_root: Estimate,
}

impl BerezinTrace {
    pub fn trace(&self) -> Trace {
        let points = self.radii.iter().zip(&self.values).map(|(&r, &v)| [r, v]).collect();
        Trace::new("berezin boundary trace", "r", "sup_|z|=r berezin transform", points)
    }
}

pub fn berezin_boundary_trace(
    pair: &SymbolPair,
    p: f64,
    q: f64,
    radii: &[f64],
    directions: usize,
    scheme: &QuadratureScheme,
) -> Result<BerezinTrace> {
    check_pq(p, q)?;
    let mu = build_pullback(pair, q, scheme)?;
    berezin_trace_on(&mu, p, radii, directions, 0)
}

fn berezin_trace_on(
    mu: &EmpiricalPullbackMeasure,
    p: f64,
    radii: &[f64],
    directions: usize,
    seed: u64,
) -> Result<BerezinTrace> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radii must increase strictly inside (0, 1)".into()));
    }
    let s = mu.n as f64 * mu.q / p;
    let dirs = grid_directions(mu.n, directions, seed)?;
    let values: Vec<f64> = radii
        .iter()
        .map(|&r| dirs.iter().map(|d| atom_sum(mu, &d.scaled(r), s)).fold(0.0, f64::max))
        .collect();
    let gaps: Vec<f64> = radii.iter().map(|r| 1.0 - r).collect();
    let limit = extrapolate_limit(&gaps, &values, mu.mass_std_error);
    let limit_root = limit.estimate.powf(1.0 / mu.q);
    Ok(BerezinTrace { radii: radii.to_vec(), values, limit, limit_root })
}

/// Extrapolated pullback mass of the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMass {
    pub thresholds: Vec<f64>,
    pub masses: Vec<f64>,
    pub limit: Limit,
}

impl BoundaryMass {
    /// Mass at most twice its uncertainty (plus the float floor).
    pub fn vanishes(&self) -> bool {
        self.limit.estimate.value <= 2.0 * self.limit.estimate.uncertainty + ZERO_FLOOR
    }
}

pub fn boundary_mass_check(mu: &EmpiricalPullbackMeasure, thresholds: &[f64]) -> Result<BoundaryMass> {
    let profile = profile_from_measure(mu, thresholds)?;
    Ok(BoundaryMass { thresholds: profile.eps, masses: profile.mu_mass, limit: profile.mu_limit })
}

/// `limit^{1/q}` of the boundary trace against one essential-norm upper bound
/// for the same setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCheck {
    pub lower: Estimate,
    pub upper: Estimate,
    pub source: String,
    pub holds: bool,
}

/// Compares the Berezin lower bound with the upper bound of `report`; `None`
/// when the report is for another setting or carries no upper bound.
pub fn lower_bound_coherence(trace: &BerezinTrace, setting: &Setting, report: &EstimateReport) -> Option<LowerBoundCheck> {
    if report.setting != *setting {
        return None;
    }
    let upper = report.upper.as_ref()?;
    let lower = trace.limit_root;
    let up = Estimate { value: upper.value, uncertainty: report.uncertainty };
    let holds = lower.value - lower.uncertainty <= up.value + up.uncertainty + ZERO_FLOOR;
    Some(LowerBoundCheck { lower, upper: up, source: upper.source.clone(), holds })
}

/// Schedules and node sets for [`equivalence_report`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonConfig {
    /// Nodes for the measure, the box test and the Berezin supremum.
    pub scheme: QuadratureScheme,
    /// Finer nodes for the boundary trace, whose kernels concentrate as `r -> 1`.
    pub trace_scheme: QuadratureScheme,
    pub h_grid: Vec<f64>,
    pub centers: CenterSample,
    pub berezin: BerezinGrid,
    pub radii: Vec<f64>,
    pub corpus: TestCorpus,
    pub eps: Vec<f64>,
}

impl CarlesonConfig {
    pub fn default_for(n: usize) -> Self {
        let (scheme, trace_scheme) = if n == 1 {
            (QuadratureScheme::circle(1 << 15), QuadratureScheme::circle(1 << 18))
        } else {
            (QuadratureScheme::monte_carlo(100_000, 0), QuadratureScheme::monte_carlo(100_000, 0))
        };
        Self {
            scheme,
            trace_scheme,
            h_grid: DEFAULT_H_GRID.to_vec(),
            centers: CenterSample::default(),
            berezin: BerezinGrid::default(),
            radii: DEFAULT_TRACE_RADII.to_vec(),
            corpus: TestCorpus::default(),
            eps: DEFAULT_EPS.to_vec(),
        }
    }
}

/// Finiteness of the three equivalent boundedness indicators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Indicators {
    pub box_finite: bool,
    pub berezin_finite: bool,
    pub corpus_finite: bool,
}

impl Indicators {
    pub fn agree(&self) -> bool {
        self.box_finite == self.berezin_finite && self.berezin_finite == self.corpus_finite
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonReport {
    pub setting: Setting,
    pub beta: f64,
    pub box_constant: BoxConstant,
    pub vanishing: VanishingProfile,
    pub berezin: BerezinSup,
    pub boundary_trace: BerezinTrace,
    /// `max int |f|^q dmu / ||f||_p^q` evidence, stored as norm ratios.
    pub corpus: CorpusEstimate,
    pub indicators: Indicators,
    pub bounded: Option<bool>,
    pub boundary_mass: Option<BoundaryMass>,
    /// Berezin lower bound against the upper bounds available in-setting.
    pub lower_bound_checks: Vec<LowerBoundCheck>,
    pub flags: Vec<String>,
    pub deciding: Vec<Deciding>,
    pub criterion_citations: Vec<String>,
    pub seeds: Vec<u64>,
    #[serde(with = "exponent")]
    pub q: f64,
}

impl CarlesonReport {
    pub fn consistent(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn traces(&self) -> Vec<Trace> {
        vec![
            Trace::new("box profile", "h", "sup_xi mu(S_h(xi))/h^(n beta)", self.box_constant.profile.clone()),
            Trace::new("berezin shells", "r", "sup_|z|=r berezin transform", self.berezin.shells.clone()),
            self.boundary_trace.trace(),
            Trace::new("embedding corpus", "shell radius", "max int |f_w|^q dmu", self.corpus.shell_profile.clone()),
        ]
    }
}

impl Evidence for CarlesonReport {
    fn setting(&self) -> Setting {
        self.setting
    }

    fn deciding(&self) -> &[Deciding] {
        &self.deciding
    }
}

/// Box test, vanishing profile, Berezin supremum and boundary trace, and the
/// embedding corpus for `W: H^p -> H^q`, `p <= q`. Disagreement between the
/// boundedness indicators is flagged, not raised.
pub fn equivalence_report(pair: &SymbolPair, p: f64, q: f64, config: &CarlesonConfig) -> Result<CarlesonReport> {
    check_pq(p, q)?;
    if p > q {
        return Err(Error::Precondition(format!("the Carleson equivalence needs p <= q, got p = {p}, q = {q}")));
    }
    let beta = q / p;
    let n = pair.dim();
    let mu = build_pullback(pair, q, &config.scheme)?;
    let box_c = box_constant(&mu, beta, &config.h_grid, &config.centers)?;
    let vanishing = vanishing_from_box(&box_c);
    let berezin = berezin_sup_on(&mu, p, &config.berezin)?;
    let trace_mu = if config.trace_scheme == config.scheme { mu.clone() } else { build_pullback(pair, q, &config.trace_scheme)? };
    let boundary_trace = berezin_trace_on(&trace_mu, p, &config.radii, config.berezin.directions, config.berezin.seed)?;
    let corpus = operator_norm_estimate(pair, p, q, &config.scheme, &config.corpus)?;

    let indicators = Indicators {
        box_finite: !box_c.growth.diverging,
        berezin_finite: !berezin.growth.diverging,
        corpus_finite: !corpus.growth.diverging,
    };
    let mut flags = Vec::new();
    if !indicators.agree() {
        flags.push(format!(
            "boundedness indicators disagree: box {}, berezin {}, embedding {}",
            indicators.box_finite, indicators.berezin_finite, indicators.corpus_finite
        ));
    }
    let bounded = indicators.agree().then_some(indicators.box_finite);
    let mut citations: Vec<String> =
        [cite::CARLESON_BOX, cite::CARLESON_VANISHING, cite::BEREZIN_BOUNDED, cite::EMBEDDING, cite::BEREZIN_LOWER]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let mut deciding = Vec::new();
    let mut boundary_mass = None;
    if bounded == Some(true) {
        deciding.push(Deciding {
            quantity: "berezin boundary limit".into(),
            estimate: boundary_trace.limit.estimate,
            rule: DecisionRule::Iff,
            criterion: cite::BEREZIN_COMPACT.into(),
        });
        citations.push(cite::BEREZIN_COMPACT.into());
        if p < q {
            let check = boundary_mass_check(&mu, &config.eps)?;
            if !check.vanishes() {
                flags.push(format!(
                    "bounded with p < q but the boundary mass is {:e} +- {:e}",
                    check.limit.estimate.value, check.limit.estimate.uncertainty
                ));
            }
            citations.push(cite::BOUNDARY_MASS.into());
            boundary_mass = Some(check);
        }
    }
    let setting = Setting::new(p, q, n);
    let mut lower_bound_checks = Vec::new();
    if n == 1 && p == q && !config.scheme.is_monte_carlo() {
        let upper = norm_upper_subordination(pair, p, &config.scheme)?;
        if let Some(check) = lower_bound_coherence(&boundary_trace, &setting, &upper) {
            if !check.holds {
                flags.push(format!(
                    "berezin lower bound {:e} exceeds the upper bound {:e} ({})",
                    check.lower.value, check.upper.value, check.source
                ));
            }
            citations.push(cite::NORM_SUBORDINATION.into());
            lower_bound_checks.push(check);
        }
    }
    let mut seeds = Vec::new();
    for s in [&config.scheme, &config.trace_scheme] {
        if s.is_monte_carlo() && !seeds.contains(&s.seed) {
            seeds.push(s.seed);
        }
    }
    if n > 1 {
        for s in [config.centers.seed, config.berezin.seed, config.corpus.seed] {
            if !seeds.contains(&s) {
                seeds.push(s);
            }
        }
    } else if !seeds.contains(&config.corpus.seed) {
        seeds.push(config.corpus.seed);
    }
    Ok(CarlesonReport {
        setting,
        beta,
        box_constant: box_c,
        vanishing,
        berezin,
        boundary_trace,
        corpus,
        indicators,
        bounded,
        boundary_mass,
        lower_bound_checks,
        flags,
        deciding,
        criterion_citations: citations,
        seeds,
        q,
    })
}
