//! Essential-norm formulas and bounds for `W_{psi,phi}` in the regimes
//! `H^inf -> H^q`, `H^p -> H^q` and `H^p -> H^inf`, the boundedness
//! classifier for `H^p -> H^inf`, and the compactness verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::citations as cite;
use crate::error::{Error, Result};
use crate::geometry::{sample_sphere, BallPoint, QuadratureScheme};
use crate::hardy::{expand_on, hp_norm_on, TestKernel};
use crate::numeric::{
    classify_growth, extrapolate_limit, least_squares_slope, Estimate, GrowthVerdict, Limit, ZERO_FLOOR,
};
use crate::pullback::{extreme_profile, pullback_extreme_mass, ExtremeSetProfile};
use crate::search::{staged_sup, SearchBudget, StageRecord};
use crate::symbols::{seeded_polynomial, Symbol, SymbolPair};

/// Serializes an exponent as a number, or `"inf"` for `f64::INFINITY`.
pub mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() && *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => parse(&t).ok_or_else(|| de::Error::custom(format!("bad exponent {t:?}"))),
        }
    }

    /// Accepts decimal numbers and `inf` / `infinity` (any case).
    pub fn parse(text: &str) -> Option<f64> {
        let t = text.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" {
            return Some(f64::INFINITY);
        }
        t.parse::<f64>().ok().filter(|x| x.is_finite())
    }
}

/// Exponents of the source and target Hardy spaces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    #[serde(with = "exponent")]
    pub p: f64,
    #[serde(with = "exponent")]
    pub q: f64,
    pub n: usize,
}

impl Setting {
    pub fn new(p: f64, q: f64, n: usize) -> Self {
        Self { p, q, n }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<BallPoint>,
    pub value: f64,
}

/// A plot-ready sequence of `(x, y)` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub name: String,
    pub x: String,
    pub y: String,
    pub points: Vec<[f64; 2]>,
}

impl Trace {
    pub fn new(name: &str, x: &str, y: &str, points: Vec<[f64; 2]>) -> Self {
        Self { name: name.into(), x: x.into(), y: y.into(), points }
    }
}

/// How a deciding quantity settles compactness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionRule {
    /// Compact iff the quantity vanishes.
    Iff,
    /// A vanishing quantity proves compactness; a positive one says nothing.
    CompactIfZero,
    /// A positive quantity proves non-compactness; zero says nothing.
    NonCompactIfPositive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deciding {
    pub quantity: String,
    pub estimate: Estimate,
    pub rule: DecisionRule,
    pub criterion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub setting: Setting,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    pub exact: Option<f64>,
    pub uncertainty: f64,
    pub witnesses: Vec<Witness>,
    pub criterion_citations: Vec<String>,
    pub deciding: Vec<Deciding>,
    pub traces: Vec<Trace>,
    pub notes: Vec<String>,
    pub seeds: Vec<u64>,
}

impl EstimateReport {
    fn new(setting: Setting) -> Self {
        Self {
            setting,
            lower: None,
            upper: None,
            exact: None,
            uncertainty: 0.0,
            witnesses: Vec::new(),
            criterion_citations: Vec::new(),
            deciding: Vec::new(),
            traces: Vec::new(),
            notes: Vec::new(),
            seeds: Vec::new(),
        }
    }

    fn cite(&mut self, tag: &str) {
        if !self.criterion_citations.iter().any(|c| c == tag) {
            self.criterion_citations.push(tag.to_string());
        }
    }

    /// `lower <= exact <= upper` within the uncertainty, and nothing negative.
    pub fn ordering_ok(&self) -> bool {
        let slack = 2.0 * self.uncertainty + ZERO_FLOOR;
        let values = [self.lower.as_ref().map(|b| b.value), self.exact, self.upper.as_ref().map(|b| b.value)];
        if values.iter().flatten().any(|&v| v < 0.0 || v.is_nan()) {
            return false;
        }
        let present: Vec<f64> = values.iter().flatten().copied().collect();
        present.windows(2).all(|w| w[0] <= w[1] + slack)
    }
}

fn record_seed(seeds: &mut Vec<u64>, scheme: &QuadratureScheme) {
    if scheme.is_monte_carlo() && !seeds.contains(&scheme.seed) {
        seeds.push(scheme.seed);
    }
}

fn profile_traces(profile: &ExtremeSetProfile) -> Vec<Trace> {
    let sigma = profile.eps.iter().zip(&profile.sigma_mass).map(|(&e, &s)| [e, s]).collect();
    let mu = profile.eps.iter().zip(&profile.mu_mass).map(|(&e, &m)| [e, m]).collect();
    vec![
        Trace::new("extreme-set sigma mass", "eps", "sigma(E_eps)", sigma),
        Trace::new("extreme-set mu mass", "eps", "int_(E_eps) |psi|^q dsigma", mu),
    ]
}

fn limit_note(what: &str, limit: &Limit) -> String {
    match limit.exponent {
        Some(g) => format!("{what}: {:?} extrapolation, exponent {g:.3}", limit.method),
        None => format!("{what}: {:?} extrapolation", limit.method),
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent q = {q} must be finite and positive")));
    }
    Ok(())
}

/// `||W||_e` for `H^inf -> H^2`: the square root of the pullback mass of the
/// extreme set.
pub fn essnorm_exact_hinf_h2(pair: &SymbolPair, scheme: &QuadratureScheme, eps: &[f64]) -> Result<EstimateReport> {
    let profile = extreme_profile(pair, 2.0, eps, scheme)?;
    let mu = pullback_extreme_mass(&profile);
    let exact = mu.powf(0.5);
    let mut report = EstimateReport::new(Setting::new(f64::INFINITY, 2.0, pair.dim()));
    report.exact = Some(exact.value);
    report.uncertainty = exact.uncertainty;
    let last = profile.mu_mass.len() - 1;
    // each thickening E_eps contains E, so its mass bounds the limit from above
    report.upper = Some(Bound {
        value: profile.mu_mass[last].max(0.0).sqrt(),
        source: format!("(int_(E_eps) |psi|^2 dsigma)^(1/2) at eps = {}", profile.eps[last]),
    });
    report.cite(cite::HINF_H2_EXACT);
    report.cite(cite::HINF_H2_COMPACT);
    report.deciding.push(Deciding {
        quantity: "sigma(E)".into(),
        estimate: profile.sigma_limit.estimate,
        rule: DecisionRule::Iff,
        criterion: cite::HINF_H2_COMPACT.into(),
    });
    report.deciding.push(Deciding {
        quantity: "mu_2(phi(E))^(1/2)".into(),
        estimate: exact,
        rule: DecisionRule::Iff,
        criterion: cite::HINF_H2_EXACT.into(),
    });
    report.notes.push(limit_note("mu_2(phi(E))", &profile.mu_limit));
    report.traces = profile_traces(&profile);
    record_seed(&mut report.seeds, scheme);
    Ok(report)
}

/// Bracket `[mu^(1/q)/2, 2 mu^(1/q)]` for `H^inf -> H^q`, `q > 1`.
pub fn essnorm_bounds_hinf_hq(
    pair: &SymbolPair,
    q: f64,
    scheme: &QuadratureScheme,
    eps: &[f64],
) -> Result<EstimateReport> {
    check_q(q)?;
    if q <= 1.0 {
        return Err(Error::Precondition(format!("the H^inf -> H^q bracket needs q > 1, got {q}")));
    }
    let profile = extreme_profile(pair, q, eps, scheme)?;
    let root = pullback_extreme_mass(&profile).powf(1.0 / q);
    let mut report = EstimateReport::new(Setting::new(f64::INFINITY, q, pair.dim()));
    report.lower = Some(Bound { value: 0.5 * root.value, source: cite::HINF_HQ_BRACKET.into() });
    report.upper = Some(Bound { value: 2.0 * root.value, source: cite::HINF_HQ_BRACKET.into() });
    report.uncertainty = 2.0 * root.uncertainty;
    report.cite(cite::HINF_HQ_BRACKET);
    if q == 2.0 {
        report.exact = Some(root.value);
        report.cite(cite::HINF_H2_EXACT);
    }
    report.deciding.push(Deciding {
        quantity: format!("mu_{q}(phi(E))^(1/{q})"),
        estimate: root,
        rule: DecisionRule::Iff,
        criterion: cite::HINF_HQ_BRACKET.into(),
    });
    report.notes.push(limit_note("mu_q(phi(E))", &profile.mu_limit));
    report.traces = profile_traces(&profile);
    record_seed(&mut report.seeds, scheme);
    Ok(report)
}

/// Operator-norm bound for `W` on `H^p` of the disk from Littlewood
/// subordination; an upper bound for the essential norm in the same setting.
/// `||psi||_inf` is the maximum over `scheme` nodes, with the gap to a grid of
/// twice the size as its uncertainty.
pub fn norm_upper_subordination(pair: &SymbolPair, p: f64, scheme: &QuadratureScheme) -> Result<EstimateReport> {
    if pair.dim() != 1 {
        return Err(Error::Gated { feature: "subordination bound", n: pair.dim() });
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be finite and positive")));
    }
    if scheme.is_monte_carlo() {
        return Err(Error::InvalidScheme("the subordination bound samples the circle deterministically".into()));
    }
    let sup_on = |s: &QuadratureScheme| -> Result<f64> {
        Ok(sample_sphere(1, s)?.iter().map(|xi| pair.psi.eval(xi.coords()).norm()).fold(0.0, f64::max))
    };
    let coarse = sup_on(scheme)?;
    let fine = sup_on(&QuadratureScheme::circle(2 * scheme.samples))?;
    let a = pair.phi.eval(BallPoint::origin(1).coords())[0].norm();
    let factor = ((1.0 + a) / (1.0 - a)).powf(1.0 / p);
    let mut report = EstimateReport::new(Setting::new(p, p, 1));
    report.upper = Some(Bound { value: fine.max(coarse) * factor, source: cite::NORM_SUBORDINATION.into() });
    report.uncertainty = (fine - coarse).abs() * factor;
    report.cite(cite::NORM_SUBORDINATION);
    report.witnesses.push(Witness { label: "|phi(0)|".into(), point: None, value: a });
    Ok(report)
}

/// Inner function and exponents used to realize the lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerWitness {
    pub g: Symbol,
    pub m: Vec<u32>,
}

impl Default for InnerWitness {
    fn default() -> Self {
        Self { g: Symbol::coordinate(1, 0), m: (1..=16).collect() }
    }
}

/// `||W||_e >= mu_q(phi(E))^(1/q)` for `H^p -> H^q` on the disk, with the
/// norms `||W(g^m)||_q` of a weakly null sequence of inner powers attached.
pub fn essnorm_lower_hp_hq(
    pair: &SymbolPair,
    p: f64,
    q: f64,
    scheme: &QuadratureScheme,
    eps: &[f64],
    witness: &InnerWitness,
) -> Result<EstimateReport> {
    if pair.dim() != 1 {
        return Err(Error::Gated { feature: "inner-function witnesses", n: pair.dim() });
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("the H^p -> H^q lower bound needs 1 < p < inf, got {p}")));
    }
    check_q(q)?;
    if witness.g.dim() != 1 || !witness.g.is_inner() {
        return Err(Error::InvalidParameter("witness g must be a non-constant inner function of the disk".into()));
    }
    let profile = extreme_profile(pair, q, eps, scheme)?;
    let root = pullback_extreme_mass(&profile).powf(1.0 / q);

    let nodes = sample_sphere(1, scheme)?;
    let mut sequence = Vec::with_capacity(witness.m.len());
    for &m in &witness.m {
        let gm = witness.g.power(m);
        let mean = nodes
            .iter()
            .map(|xi| {
                let image = pair.phi.eval(xi.coords());
                (pair.psi.eval(xi.coords()) * gm.eval(&image)).norm().powf(q)
            })
            .sum::<f64>()
            / nodes.len() as f64;
        sequence.push([m as f64, mean.powf(1.0 / q)]);
    }

    let mut report = EstimateReport::new(Setting::new(p, q, 1));
    report.lower = Some(Bound { value: root.value, source: cite::HP_HQ_LOWER.into() });
    report.uncertainty = root.uncertainty;
    report.cite(cite::HP_HQ_LOWER);
    if let Some(min) = sequence.iter().map(|s| s[1]).reduce(f64::min) {
        report.witnesses.push(Witness { label: "min_m ||W(g^m)||_q".into(), point: None, value: min });
    }
    if let Some(last) = sequence.last() {
        report.witnesses.push(Witness { label: format!("||W(g^{})||_q", last[0]), point: None, value: last[1] });
    }
    report.deciding.push(Deciding {
        quantity: format!("mu_{q}(phi(E))^(1/{q})"),
        estimate: root,
        rule: DecisionRule::NonCompactIfPositive,
        criterion: cite::HP_HQ_LOWER.into(),
    });
    report.notes.push("the mass of phi(E) is taken with the target exponent q throughout".into());
    report.notes.push(limit_note("mu_q(phi(E))", &profile.mu_limit));
    report.traces = profile_traces(&profile);
    report.traces.push(Trace::new("inner witness", "m", "||W(g^m)||_q", sequence));
    record_seed(&mut report.seeds, scheme);
    Ok(report)
}

/// Unit-norm test functions used to estimate operator norms from below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestCorpus {
    /// Radii of the kernel centers.
    pub shells: Vec<f64>,
    pub directions: usize,
    pub polynomials: usize,
    pub degree: u32,
    pub seed: u64,
}

impl Default for TestCorpus {
    fn default() -> Self {
        Self { shells: vec![0.0, 0.5, 0.9, 0.99, 0.999], directions: 24, polynomials: 8, degree: 4, seed: 0 }
    }
}

/// `max ||W f||_r / ||f||_p` over a [`TestCorpus`], a lower estimate of
/// `||W||_(H^p -> H^r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEstimate {
    #[serde(with = "exponent")]
    pub p: f64,
    pub r: f64,
    pub max_ratio: f64,
    pub argmax: String,
    /// `(shell radius, max ||W f_w||_r^r)` over the kernels of each shell.
    pub shell_profile: Vec<[f64; 2]>,
    pub polynomial_max: f64,
    /// Growth of the kernel profile over the outermost shells.
    pub growth: GrowthVerdict,
    pub evaluated: usize,
}

fn kernel_centers(n: usize, corpus: &TestCorpus) -> Result<Vec<BallPoint>> {
    let scheme = if n == 1 {
        QuadratureScheme::circle(corpus.directions.max(1))
    } else {
        QuadratureScheme::monte_carlo(corpus.directions.max(1), corpus.seed)
    };
    sample_sphere(n, &scheme)
}

pub fn operator_norm_estimate(
    pair: &SymbolPair,
    p: f64,
    r: f64,
    scheme: &QuadratureScheme,
    corpus: &TestCorpus,
) -> Result<CorpusEstimate> {
    check_q(r)?;
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be positive")));
    }
    let n = pair.dim();
    let nodes = sample_sphere(n, scheme)?;
    let count = nodes.len() as f64;
    let weights: Vec<f64> = nodes.iter().map(|xi| pair.psi.eval(xi.coords()).norm().powf(r)).collect();
    let images: Vec<Vec<Complex64>> = nodes.iter().map(|xi| pair.phi.eval(xi.coords())).collect();
    let mut best = (f64::NEG_INFINITY, String::new());
    let mut evaluated = 0;

    let mut shell_profile = Vec::with_capacity(corpus.shells.len());
    let directions = kernel_centers(n, corpus)?;
    for &radius in &corpus.shells {
        if !(0.0..1.0).contains(&radius) {
            return Err(Error::InvalidParameter(format!("kernel shell radius {radius} outside [0, 1)")));
        }
        let centers: Vec<BallPoint> =
            if radius == 0.0 { vec![BallPoint::origin(n)] } else { directions.iter().map(|d| d.scaled(radius)).collect() };
        let mut shell_max = 0.0f64;
        for center in centers {
            let kernel = TestKernel::new(center.clone(), p)?;
            let mean = weights.iter().zip(&images).map(|(w, z)| w * kernel.modulus_pow(z, r)).sum::<f64>() / count;
            evaluated += 1;
            shell_max = shell_max.max(mean);
            let ratio = mean.powf(1.0 / r);
            if ratio > best.0 {
                best = (ratio, format!("kernel at {:?}", center.as_pairs()));
            }
        }
        shell_profile.push([radius, shell_max]);
    }

    let mut polynomial_max = 0.0f64;
    for k in 0..corpus.polynomials {
        let f = seeded_polynomial(n, corpus.degree, corpus.seed.wrapping_add(k as u64));
        let norm = if p.is_infinite() {
            nodes.iter().map(|xi| f.eval(xi.coords()).norm()).fold(0.0, f64::max)
        } else {
            hp_norm_on(&nodes, scheme, |z| f.eval(z.coords()), p, &[1.0])?.value
        };
        if norm <= 0.0 {
            continue;
        }
        let mean = weights.iter().zip(&images).map(|(w, z)| w * f.eval(z).norm().powf(r)).sum::<f64>() / count;
        let ratio = mean.powf(1.0 / r) / norm;
        evaluated += 1;
        polynomial_max = polynomial_max.max(ratio);
        if ratio > best.0 {
            best = (ratio, format!("random polynomial {k}"));
        }
    }

    let growth = classify_growth(&shell_profile.iter().map(|s| s[1]).collect::<Vec<_>>(), 2.0);
    Ok(CorpusEstimate {
        p,
        r,
        max_ratio: best.0.max(0.0),
        argmax: best.1,
        shell_profile,
        polynomial_max,
        growth,
        evaluated,
    })
}

/// Heuristic upper bound `||P|| ||W||_(p,r) sigma(E)^((r-q)/(qr))` for
/// `H^p -> H^q`, `1 < q < p`. `projection_norm` is required unless `q = 2`.
#[allow(clippy::too_many_arguments)]
pub fn essnorm_upper_interp(
    pair: &SymbolPair,
    p: f64,
    q: f64,
    r: f64,
    projection_norm: Option<f64>,
    scheme: &QuadratureScheme,
    eps: &[f64],
    corpus: &TestCorpus,
) -> Result<EstimateReport> {
    if !(1.0 < q && q < p && p.is_finite()) {
        return Err(Error::Precondition(format!("the interpolation bound needs 1 < q < p < inf, got p = {p}, q = {q}")));
    }
    if !(r > q && r.is_finite()) {
        return Err(Error::Precondition(format!("the interpolation bound needs r > q, got r = {r}")));
    }
    let mut report = EstimateReport::new(Setting::new(p, q, pair.dim()));
    let projection = if q == 2.0 {
        if projection_norm.is_some_and(|x| x != 1.0) {
            report.notes.push("projection norm ignored: the projection is orthogonal at q = 2".into());
        }
        1.0
    } else {
        match projection_norm {
            Some(x) if x >= 1.0 && x.is_finite() => x,
            Some(x) => return Err(Error::InvalidParameter(format!("projection norm {x} must be >= 1"))),
            None => return Err(Error::MissingPrerequisite(format!("projection norm on L^{q} is required for q != 2"))),
        }
    };
    let profile = extreme_profile(pair, q, eps, scheme)?;
    let sigma = profile.sigma_limit.estimate;
    let norm = operator_norm_estimate(pair, p, r, scheme, corpus)?;
    let factor = sigma.powf((r - q) / (q * r));
    let upper = factor.scale(projection * norm.max_ratio);
    report.upper = Some(Bound { value: upper.value, source: format!("{} (heuristic)", cite::HP_HQ_INTERP_UPPER) });
    report.uncertainty = upper.uncertainty;
    report.cite(cite::HP_HQ_INTERP_UPPER);
    report.witnesses.push(Witness { label: format!("||W||_(p,r) corpus estimate: {}", norm.argmax), point: None, value: norm.max_ratio });
    report.witnesses.push(Witness { label: "sigma(E)".into(), point: None, value: sigma.value });
    report.deciding.push(Deciding {
        quantity: "interpolation upper bound".into(),
        estimate: upper,
        rule: DecisionRule::CompactIfZero,
        criterion: cite::HP_HQ_INTERP_UPPER.into(),
    });
    report.notes.push(
        "heuristic: ||W||_(p,r) is a corpus maximum, a lower estimate of the operator norm, so the bound may undershoot"
            .into(),
    );
    report.notes.push("only r > q is required; r is not constrained relative to p".into());
    report.traces = profile_traces(&profile);
    report.traces.push(Trace::new("corpus kernel profile", "shell radius", "max ||W f_w||_r^r", norm.shell_profile));
    record_seed(&mut report.seeds, scheme);
    report.seeds.push(corpus.seed);
    Ok(report)
}

/// Outcome of the `H^p -> H^inf` boundedness classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub setting: Setting,
    pub sup: f64,
    pub maximizer: Option<BallPoint>,
    pub bounded: bool,
    pub growth: GrowthVerdict,
    pub stages: Vec<StageRecord>,
    pub budget: SearchBudget,
    pub criterion_citations: Vec<String>,
    pub seeds: Vec<u64>,
}

impl BoundednessReport {
    pub fn trace(&self) -> Trace {
        let points = self.stages.iter().skip(1).map(|s| [s.gap, s.cumulative]).collect();
        Trace::new("staged supremum", "1 - |z|", "sup |psi|/(1-|phi|^2)^(n/p)", points)
    }
}

fn hinf_ratio(pair: &SymbolPair, p: f64, z: &BallPoint) -> f64 {
    let n = pair.dim() as f64;
    let psi = pair.psi.eval(z.coords()).norm();
    let phi_sq: f64 = pair.phi.eval(z.coords()).iter().map(|c| c.norm_sqr()).sum();
    let gap = 1.0 - phi_sq;
    if gap <= 0.0 {
        return if psi == 0.0 { 0.0 } else { f64::INFINITY };
    }
    psi / gap.powf(n / p)
}

/// Staged search for `sup |psi(z)| / (1 - |phi(z)|^2)^(n/p)`.
pub fn boundedness_hp_hinf(pair: &SymbolPair, p: f64, budget: &SearchBudget) -> Result<BoundednessReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be finite and positive")));
    }
    let trace = staged_sup(pair.dim(), |z| Some(hinf_ratio(pair, p, z)), budget);
    let bounded = trace.best.is_finite() && !trace.growth.diverging;
    Ok(BoundednessReport {
        setting: Setting::new(p, f64::INFINITY, pair.dim()),
        sup: trace.best,
        maximizer: trace.argmax,
        bounded,
        growth: trace.growth,
        stages: trace.stages,
        budget: *budget,
        criterion_citations: vec![cite::HP_HINF_BOUNDED.into()],
        seeds: vec![budget.seed],
    })
}

/// Thresholds `delta` for the boundary regions, largest first.
pub const DEFAULT_DELTAS: [f64; 4] = [0.1, 0.03, 0.01, 0.003];

/// Bracket `[L, 2L]` for `H^p -> H^inf`, with `L(delta)` the supremum of the
/// boundedness ratio over `{ z : 1 - |phi(z)| < delta }`.
pub fn essnorm_bounds_hp_hinf(
    pair: &SymbolPair,
    p: f64,
    deltas: &[f64],
    budget: &SearchBudget,
) -> Result<EstimateReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("the H^p -> H^inf bracket needs 1 < p < inf, got {p}")));
    }
    crate::pullback::check_eps_schedule(deltas)?;
    let bounded = boundedness_hp_hinf(pair, p, budget)?;
    if !bounded.bounded {
        return Err(Error::Precondition(format!(
            "W is not bounded H^{p} -> H^inf (staged supremum {:.4e}, growth factors {:?})",
            bounded.sup, bounded.growth.factors
        )));
    }
    let sup_phi = pair.phi.check().map(|c| c.max_modulus);
    let mut report = EstimateReport::new(Setting::new(p, f64::INFINITY, pair.dim()));
    let mut values = Vec::with_capacity(deltas.len());
    let mut best_point: Option<(f64, BallPoint)> = None;
    for &delta in deltas {
        if sup_phi.is_some_and(|s| s < 1.0 - delta) {
            values.push(0.0);
            report.cite(cite::EMPTY_REGION);
            continue;
        }
        let trace = staged_sup(
            pair.dim(),
            |z| {
                let modulus = pair.phi.eval(z.coords()).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                (1.0 - modulus < delta).then(|| hinf_ratio(pair, p, z))
            },
            budget,
        );
        if trace.admissible() == 0 {
            report.notes.push(format!("no search point fell in the region for delta = {delta}; L set to 0"));
        }
        if let Some(z) = &trace.argmax {
            if best_point.as_ref().is_none_or(|b| trace.best > b.0) {
                best_point = Some((trace.best, z.clone()));
            }
        }
        values.push(trace.best);
    }
    let limit = extrapolate_limit(deltas, &values, 0.0);
    let l = limit.estimate;
    report.lower = Some(Bound { value: l.value, source: cite::HP_HINF_BRACKET.into() });
    report.upper = Some(Bound { value: 2.0 * l.value, source: cite::HP_HINF_BRACKET.into() });
    report.uncertainty = 2.0 * l.uncertainty;
    report.cite(cite::HP_HINF_BOUNDED);
    report.cite(cite::HP_HINF_BRACKET);
    report.cite(cite::HP_HINF_COMPACT);
    report.witnesses.push(Witness { label: "boundedness supremum".into(), point: bounded.maximizer.clone(), value: bounded.sup });
    if let Some((value, point)) = best_point {
        report.witnesses.push(Witness { label: "boundary region maximizer".into(), point: Some(point), value });
    }
    report.deciding.push(Deciding {
        quantity: "L".into(),
        estimate: l,
        rule: DecisionRule::Iff,
        criterion: cite::HP_HINF_COMPACT.into(),
    });
    report.notes.push(limit_note("L", &limit));
    report.traces.push(Trace::new(
        "boundary region supremum",
        "delta",
        "L(delta)",
        deltas.iter().zip(&values).map(|(&d, &v)| [d, v]).collect(),
    ));
    report.traces.push(bounded.trace());
    report.seeds.push(budget.seed);
    Ok(report)
}

/// Norms of the low and high parts of `W(g^m)` for a range of `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationTrace {
    pub k: u32,
    pub d: u32,
    pub m: Vec<u32>,
    /// `||Q_k W(g^m)||_2`
    pub head: Vec<f64>,
    /// `||R_k W(g^m)||_2`, computed as the norm of the degree `k+1..d` part.
    pub tail: Vec<f64>,
    pub tail_fraction: Vec<f64>,
    /// `max |g o phi|` on the circle of radius 1/2.
    pub contraction: f64,
    /// `max |psi|` on the same circle.
    pub weight_bound: f64,
    /// Cauchy-estimate envelope `C s^m` for the head.
    pub envelope: Vec<f64>,
    pub within_envelope: bool,
    /// `exp` of the least-squares slope of `log head` against `m`.
    pub fitted_ratio: Option<f64>,
    pub criterion_citations: Vec<String>,
}

/// Largest tail fraction tolerated before the expansion degree is deemed
/// insufficient.
pub const DEGREE_BUDGET_TAIL: f64 = 0.01;

/// Expands `psi (g o phi)^m` to degree `d` on the circle and splits it at `k`.
pub fn truncated_image_trace(
    pair: &SymbolPair,
    k: u32,
    g: &Symbol,
    ms: &[u32],
    d: u32,
    scheme: &QuadratureScheme,
) -> Result<TruncationTrace> {
    if pair.dim() != 1 {
        return Err(Error::Gated { feature: "inner-function witnesses", n: pair.dim() });
    }
    if g.dim() != 1 || !g.is_inner() {
        return Err(Error::InvalidParameter("g must be a non-constant inner function of the disk".into()));
    }
    if d <= k {
        return Err(Error::InvalidParameter(format!("expansion degree d = {d} must exceed k = {k}")));
    }
    if ms.is_empty() {
        return Err(Error::Empty("m schedule".into()));
    }
    let nodes = sample_sphere(1, scheme)?;
    let mut head = Vec::with_capacity(ms.len());
    let mut tail = Vec::with_capacity(ms.len());
    let mut tail_fraction = Vec::with_capacity(ms.len());
    for &m in ms {
        let gm = g.power(m);
        let projection =
            expand_on(&nodes, scheme, |xi| pair.psi.eval(xi.coords()) * gm.eval(&pair.phi.eval(xi.coords())), d)?;
        let fraction = projection.tail_fraction();
        if fraction > DEGREE_BUDGET_TAIL {
            return Err(Error::DegreeBudget { degree: d, tail_fraction: fraction });
        }
        head.push(projection.expansion.truncate_head(k).h2_norm_sq().sqrt());
        tail.push(projection.expansion.truncate_tail(k).h2_norm_sq().sqrt());
        tail_fraction.push(fraction);
    }

    let circle: Vec<Complex64> =
        sample_sphere(1, &QuadratureScheme::circle(4096))?.iter().map(|x| x.coords()[0] * 0.5).collect();
    let contraction = circle.iter().map(|&z| g.eval(&pair.phi.eval(&[z])).norm()).fold(0.0, f64::max);
    let weight_bound = circle.iter().map(|&z| pair.psi.eval(&[z]).norm()).fold(0.0, f64::max);
    // |c_j| <= 2^j max_{|z|=1/2} |psi (g o phi)^m| and ||z^j||_2 = 1 on the circle
    let cauchy = (0..=k).map(|j| 4f64.powi(j as i32)).sum::<f64>().sqrt();
    let envelope: Vec<f64> = ms.iter().map(|&m| weight_bound * cauchy * contraction.powi(m as i32)).collect();
    let within_envelope = head.iter().zip(&envelope).all(|(h, e)| *h <= e * (1.0 + 1e-9) + 1e-12);

    let logs: Vec<(f64, f64)> =
        ms.iter().zip(&head).filter(|(_, &h)| h > 1e-250).map(|(&m, &h)| (m as f64, h.ln())).collect();
    let fitted_ratio = (logs.len() >= 2).then(|| least_squares_slope(&logs).exp());
    Ok(TruncationTrace {
        k,
        d,
        m: ms.to_vec(),
        head,
        tail,
        tail_fraction,
        contraction,
        weight_bound,
        envelope,
        within_envelope,
        fitted_ratio,
        criterion_citations: vec![cite::TRUNCATION_DECAY.into()],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compactness {
    Compact,
    NonCompact,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub setting: Setting,
    pub verdict: Compactness,
    pub criterion: Option<String>,
    pub quantity: Option<Estimate>,
    /// Criteria that reached opposite definite verdicts.
    pub conflicts: Vec<String>,
}

/// Anything that carries a deciding quantity for one setting.
pub trait Evidence {
    fn setting(&self) -> Setting;
    fn deciding(&self) -> &[Deciding];
}

impl Evidence for EstimateReport {
    fn setting(&self) -> Setting {
        self.setting
    }

    fn deciding(&self) -> &[Deciding] {
        &self.deciding
    }
}

/// Zero when `value <= u`, positive when `value > 2u` (both plus the float
/// floor), undecided in between.
pub fn classify_quantity(e: &Estimate) -> Option<bool> {
    if e.value <= e.uncertainty + ZERO_FLOOR {
        Some(true)
    } else if e.value > 2.0 * e.uncertainty + ZERO_FLOOR {
        Some(false)
    } else {
        None
    }
}

fn apply_rule(d: &Deciding) -> Compactness {
    match (d.rule, classify_quantity(&d.estimate)) {
        (DecisionRule::Iff | DecisionRule::CompactIfZero, Some(true)) => Compactness::Compact,
        (DecisionRule::Iff | DecisionRule::NonCompactIfPositive, Some(false)) => Compactness::NonCompact,
        _ => Compactness::Inconclusive,
    }
}

fn same_exponent(a: f64, b: f64) -> bool {
    a == b || (a.is_infinite() && b.is_infinite())
}

/// Compactness from every deciding quantity reported for `setting`. The
/// first definite outcome is reported; disagreeing definite outcomes are
/// listed as conflicts and make the verdict inconclusive.
pub fn compactness_verdict(setting: &Setting, evidence: &[&dyn Evidence]) -> Result<Verdict> {
    let relevant: Vec<&Deciding> = evidence
        .iter()
        .filter(|e| {
            let s = e.setting();
            same_exponent(s.p, setting.p) && same_exponent(s.q, setting.q) && s.n == setting.n
        })
        .flat_map(|e| e.deciding())
        .collect();
    if relevant.is_empty() {
        return Err(Error::MissingPrerequisite(format!(
            "no report with a deciding quantity for p = {}, q = {}, n = {}",
            setting.p, setting.q, setting.n
        )));
    }
    let outcomes: Vec<(Compactness, &Deciding)> = relevant.iter().map(|d| (apply_rule(d), *d)).collect();
    let definite: Vec<&(Compactness, &Deciding)> =
        outcomes.iter().filter(|(c, _)| *c != Compactness::Inconclusive).collect();
    let Some((first, by)) = definite.first().map(|(c, d)| (*c, *d)) else {
        let d = outcomes[0].1;
        return Ok(Verdict {
            setting: *setting,
            verdict: Compactness::Inconclusive,
            criterion: Some(d.criterion.clone()),
            quantity: Some(d.estimate),
            conflicts: Vec::new(),
        });
    };
    let conflicts: Vec<String> = definite
        .iter()
        .filter(|(c, _)| *c != first)
        .map(|(c, d)| format!("{} gives {:?} ({} = {:e} +- {:e})", d.criterion, c, d.quantity, d.estimate.value, d.estimate.uncertainty))
        .collect();
    Ok(Verdict {
        setting: *setting,
        verdict: if conflicts.is_empty() { first } else { Compactness::Inconclusive },
        criterion: Some(by.criterion.clone()),
        quantity: Some(by.estimate),
        conflicts,
    })
}

/// Implications between verdicts for one pair in different settings:
/// the `H^inf -> H^q` verdicts agree for every `q`, and compactness on a
/// smaller domain or into `H^inf` forces compactness of `H^inf -> H^q`.
pub fn cross_regime_conflicts(verdicts: &[Verdict]) -> Vec<String> {
    let definite: Vec<&Verdict> = verdicts.iter().filter(|v| v.verdict != Compactness::Inconclusive).collect();
    let mut out = Vec::new();
    for a in &definite {
        for b in &definite {
            let (sa, sb) = (a.setting, b.setting);
            if !sb.p.is_infinite() || sb.q.is_infinite() || b.verdict != Compactness::NonCompact {
                continue;
            }
            // b: H^inf -> H^q non-compact
            let forces_compact = a.verdict == Compactness::Compact
                && (sa.p.is_infinite() || sa.q.is_infinite() || same_exponent(sa.q, sb.q));
            if forces_compact {
                out.push(format!(
                    "compact for (p, q) = ({}, {}) but non-compact for (inf, {})",
                    sa.p, sa.q, sb.q
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pullback::DEFAULT_EPS;
    use crate::symbols::families;

    fn circle() -> QuadratureScheme {
        QuadratureScheme::circle(4096)
    }

    fn one() -> Symbol {
        Symbol::constant(1, 1.0)
    }

    #[test]
    fn exact_values_on_the_disk() {
        let id = essnorm_exact_hinf_h2(&families::identity(1), &circle(), &DEFAULT_EPS).unwrap();
        assert!((id.exact.unwrap() - 1.0).abs() < 1e-12);
        let half = essnorm_exact_hinf_h2(&families::half_dilation(one()), &circle(), &DEFAULT_EPS).unwrap();
        assert_eq!(half.exact, Some(0.0));
        let ws = essnorm_exact_hinf_h2(&families::weighted_square(), &circle(), &DEFAULT_EPS).unwrap();
        assert!((ws.exact.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        for r in [&id, &half, &ws] {
            assert!(r.ordering_ok());
        }
    }

    #[test]
    fn bracket_contains_exact_at_q2() {
        let r = essnorm_bounds_hinf_hq(&families::weighted_square(), 2.0, &circle(), &DEFAULT_EPS).unwrap();
        assert!((r.lower.as_ref().unwrap().value - 0.353553).abs() < 1e-5);
        assert!((r.upper.as_ref().unwrap().value - std::f64::consts::SQRT_2).abs() < 1e-5);
        assert!(r.ordering_ok());
        let q4 = essnorm_bounds_hinf_hq(&families::identity(1), 4.0, &circle(), &DEFAULT_EPS).unwrap();
        assert_eq!((q4.lower.unwrap().value, q4.upper.unwrap().value), (0.5, 2.0));
        assert!(matches!(
            essnorm_bounds_hinf_hq(&families::identity(1), 1.0, &circle(), &DEFAULT_EPS),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lower_bound_with_inner_witness() {
        let w = InnerWitness::default();
        let r = essnorm_lower_hp_hq(&families::identity(1), 2.0, 2.0, &circle(), &DEFAULT_EPS, &w).unwrap();
        assert!((r.lower.as_ref().unwrap().value - 1.0).abs() < 1e-12);
        assert!(r.witnesses[0].value >= 1.0 - 1e-6);
        let half = essnorm_lower_hp_hq(&families::half_dilation(one()), 2.0, 2.0, &circle(), &DEFAULT_EPS, &w).unwrap();
        assert_eq!(half.lower.unwrap().value, 0.0);
        assert!(matches!(
            essnorm_lower_hp_hq(&families::identity(2), 2.0, 2.0, &circle(), &DEFAULT_EPS, &w),
            Err(Error::Gated { n: 2, .. })
        ));
    }

    #[test]
    fn interpolation_bound() {
        let corpus = TestCorpus::default();
        let half = essnorm_upper_interp(&families::half_dilation(one()), 4.0, 2.0, 3.0, None, &circle(), &DEFAULT_EPS, &corpus)
            .unwrap();
        assert_eq!(half.upper.unwrap().value, 0.0);
        let b = essnorm_upper_interp(&families::blaschke(one(), 0.5), 4.0, 2.0, 3.0, None, &circle(), &DEFAULT_EPS, &corpus)
            .unwrap();
        let v = b.upper.unwrap().value;
        assert!(v.is_finite() && v > 0.0);
        assert!(matches!(
            essnorm_upper_interp(&families::identity(1), 4.0, 3.0, 3.5, None, &circle(), &DEFAULT_EPS, &corpus),
            Err(Error::MissingPrerequisite(_))
        ));
        assert!(matches!(
            essnorm_upper_interp(&families::identity(1), 2.0, 3.0, 3.5, Some(1.2), &circle(), &DEFAULT_EPS, &corpus),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn identity_kernels_have_unit_image_norm() {
        // ||f_w||_2 = 1 and W = I, so every kernel ratio is 1
        let est = operator_norm_estimate(&families::identity(1), 2.0, 2.0, &QuadratureScheme::circle(32768), &TestCorpus {
            shells: vec![0.0, 0.5, 0.9, 0.99],
            polynomials: 0,
            ..Default::default()
        })
        .unwrap();
        assert!((est.max_ratio - 1.0).abs() < 1e-9, "{}", est.max_ratio);
    }

    #[test]
    fn boundedness_classifier() {
        let budget = SearchBudget::default();
        let half = boundedness_hp_hinf(&families::half_dilation(one()), 2.0, &budget).unwrap();
        assert!(half.bounded);
        assert!((half.sup - (4.0f64 / 3.0).sqrt()).abs() < 1e-5);
        let id = boundedness_hp_hinf(&families::identity(1), 2.0, &budget).unwrap();
        assert!(!id.bounded);
        let edge = boundedness_hp_hinf(&families::named("edge").unwrap(), 2.0, &budget).unwrap();
        assert!(edge.bounded);
        assert!((edge.sup - 2.0).abs() < 1e-2, "{}", edge.sup);
    }

    #[test]
    fn hinf_brackets() {
        let budget = SearchBudget::default();
        let half = essnorm_bounds_hp_hinf(&families::half_dilation(one()), 2.0, &DEFAULT_DELTAS, &budget).unwrap();
        assert_eq!((half.lower.as_ref().unwrap().value, half.upper.as_ref().unwrap().value), (0.0, 0.0));
        assert!(half.criterion_citations.iter().any(|c| c == cite::EMPTY_REGION));
        let cusp = essnorm_bounds_hp_hinf(&families::named("cusp").unwrap(), 2.0, &DEFAULT_DELTAS, &budget).unwrap();
        assert!(cusp.deciding[0].estimate.is_zero_within(1.0), "{:?}", cusp.deciding);
        let edge = essnorm_bounds_hp_hinf(&families::named("edge").unwrap(), 2.0, &DEFAULT_DELTAS, &budget).unwrap();
        assert!((edge.lower.as_ref().unwrap().value - 2.0).abs() < 0.05, "{:?}", edge.lower);
        for r in [&half, &cusp, &edge] {
            assert!(r.ordering_ok());
        }
        assert!(matches!(
            essnorm_bounds_hp_hinf(&families::identity(1), 2.0, &DEFAULT_DELTAS, &budget),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monomial_images_split_exactly() {
        let g = Symbol::coordinate(1, 0);
        let ms: Vec<u32> = (1..=8).collect();
        let t = truncated_image_trace(&families::identity(1), 3, &g, &ms, 16, &circle()).unwrap();
        for (i, &m) in ms.iter().enumerate() {
            let (h, r) = if m > 3 { (0.0, 1.0) } else { (1.0, 0.0) };
            assert!((t.head[i] - h).abs() < 1e-12 && (t.tail[i] - r).abs() < 1e-12);
        }
        let half = truncated_image_trace(&families::half_dilation(one()), 3, &g, &ms, 16, &circle()).unwrap();
        for (i, &m) in ms.iter().enumerate() {
            let norm = (half.head[i].powi(2) + half.tail[i].powi(2)).sqrt();
            assert!((norm - 0.5f64.powi(m as i32)).abs() < 1e-14);
        }
        assert!(half.within_envelope);
    }

    #[test]
    fn tail_norm_is_nonincreasing_in_k() {
        let g = Symbol::coordinate(1, 0);
        let pair = families::blaschke(one(), 0.5);
        let tails: Vec<f64> =
            (0..6).map(|k| truncated_image_trace(&pair, k, &g, &[5], 48, &circle()).unwrap().tail[0]).collect();
        assert!(tails.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{tails:?}");
    }

    #[test]
    fn degree_budget_is_enforced() {
        let g = Symbol::coordinate(1, 0);
        let err = truncated_image_trace(&families::blaschke(one(), 0.5), 2, &g, &[30], 8, &circle()).unwrap_err();
        assert!(matches!(err, Error::DegreeBudget { degree: 8, .. }));
    }

    #[test]
    fn verdicts() {
        let s = Setting::new(f64::INFINITY, 2.0, 1);
        let half = essnorm_exact_hinf_h2(&families::half_dilation(one()), &circle(), &DEFAULT_EPS).unwrap();
        let v = compactness_verdict(&s, &[&half]).unwrap();
        assert_eq!(v.verdict, Compactness::Compact);
        let b = essnorm_exact_hinf_h2(&families::blaschke(one(), 0.5), &circle(), &DEFAULT_EPS).unwrap();
        assert_eq!(compactness_verdict(&s, &[&b]).unwrap().verdict, Compactness::NonCompact);
        assert!(matches!(
            compactness_verdict(&Setting::new(2.0, f64::INFINITY, 1), &[&b]),
            Err(Error::MissingPrerequisite(_))
        ));
        let cusp = essnorm_bounds_hp_hinf(&families::named("cusp").unwrap(), 2.0, &DEFAULT_DELTAS, &SearchBudget::default())
            .unwrap();
        let v = compactness_verdict(&Setting::new(2.0, f64::INFINITY, 1), &[&cusp]).unwrap();
        assert_eq!(v.verdict, Compactness::Compact);
    }

    #[test]
    fn cross_regime_implications() {
        let v = |p: f64, q: f64, c: Compactness| Verdict {
            setting: Setting::new(p, q, 1),
            verdict: c,
            criterion: None,
            quantity: None,
            conflicts: Vec::new(),
        };
        let inf = f64::INFINITY;
        let ok = [v(inf, 2.0, Compactness::NonCompact), v(2.0, inf, Compactness::NonCompact), v(inf, 4.0, Compactness::NonCompact)];
        assert!(cross_regime_conflicts(&ok).is_empty());
        // the edge pair: compact into H^2 from H^inf, non-compact into H^inf
        let edge = [v(inf, 2.0, Compactness::Compact), v(2.0, inf, Compactness::NonCompact)];
        assert!(cross_regime_conflicts(&edge).is_empty());
        let bad = [v(2.0, inf, Compactness::Compact), v(inf, 2.0, Compactness::NonCompact)];
        assert_eq!(cross_regime_conflicts(&bad).len(), 1);
        let bad_q = [v(inf, 4.0, Compactness::Compact), v(inf, 2.0, Compactness::NonCompact)];
        assert_eq!(cross_regime_conflicts(&bad_q).len(), 1);
    }

    #[test]
    fn setting_serializes_infinity_as_text() {
        let s = Setting::new(f64::INFINITY, 2.0, 1);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"p":"inf","q":2.0,"n":1}"#);
        assert_eq!(serde_json::from_str::<Setting>(&text).unwrap(), s);
    }
}
