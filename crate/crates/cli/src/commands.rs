//! The `essnorm`, `carleson`, `bounded` and `report` commands.

use std::fmt;
use std::path::Path;

use hpball::carleson::{equivalence_report, CarlesonConfig, CarlesonReport};
use hpball::estimators::{
    boundedness_hp_hinf, compactness_verdict, cross_regime_conflicts, essnorm_bounds_hinf_hq,
    essnorm_bounds_hp_hinf, essnorm_exact_hinf_h2, essnorm_lower_hp_hq, essnorm_upper_interp, exponent,
    BoundednessReport, Evidence, InnerWitness, Setting, TestCorpus, Trace, Verdict, DEFAULT_DELTAS,
};
use hpball::pullback::DEFAULT_EPS;
use hpball::search::SearchBudget;
use hpball::symbols::families;
use hpball::{EstimateReport, QuadratureScheme, SymbolPair};
use serde::Serialize;

use crate::output::emit;
use crate::JobArgs;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid pair file, unsupported regime.
    Usage(String),
    /// The numbers contradict a proven identity or each other.
    Inconsistent(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Inconsistent(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Inconsistent(m) => write!(f, "inconsistency: {m}"),
        }
    }
}

impl From<hpball::Error> for Failure {
    fn from(e: hpball::Error) -> Self {
        match e {
            hpball::Error::InternalConsistency(m) => Failure::Inconsistent(m),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

/// Everything a command ran with; embedded in every output document.
#[derive(Clone, Debug, Serialize)]
pub struct JobConfig {
    pub command: String,
    pub pair: String,
    #[serde(with = "exponent")]
    pub p: f64,
    #[serde(with = "exponent")]
    pub q: f64,
    pub n: usize,
    pub scheme: QuadratureScheme,
    pub eps: Vec<f64>,
    pub deltas: Vec<f64>,
    pub h_grid: Vec<f64>,
    pub radii: Vec<f64>,
    pub budget: SearchBudget,
    pub seed: u64,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    command: &'a str,
    config: &'a JobConfig,
    result: T,
    criterion_citations: Vec<String>,
    flags: Vec<String>,
}

/// A pair file, or one of the built-in names.
pub fn load_pair(source: &str) -> Result<SymbolPair, Failure> {
    let path = Path::new(source);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {source}: {e}")))?;
        return SymbolPair::from_json(&text).map_err(|e| Failure::Usage(format!("invalid pair file {source}: {e}")));
    }
    families::named(source).ok_or_else(|| {
        Failure::Usage(format!(
            "no pair file {source:?} and no built-in pair of that name (built-ins: {})",
            families::NAMES.join(", ")
        ))
    })
}

fn scheme_for(n: usize, samples: Option<usize>, seed: u64) -> QuadratureScheme {
    match samples {
        Some(s) if n == 1 => QuadratureScheme::circle(s),
        Some(s) => QuadratureScheme::monte_carlo(s, seed),
        None => {
            let mut d = QuadratureScheme::default_for(n);
            d.seed = seed;
            d
        }
    }
}

fn check_schedule(name: &str, values: &[f64], increasing: bool) -> Result<(), Failure> {
    let ordered = values.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
    if values.is_empty() || !ordered || values.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        let dir = if increasing { "increasing" } else { "decreasing" };
        return Err(Failure::Usage(format!("--{name} must be a non-empty, strictly {dir} list of positive numbers")));
    }
    Ok(())
}

fn job_config(command: &str, args: &JobArgs, n: usize) -> Result<JobConfig, Failure> {
    let carleson = CarlesonConfig::default_for(n);
    let config = JobConfig {
        command: command.into(),
        pair: args.pair.clone(),
        p: args.p,
        q: args.q,
        n,
        scheme: scheme_for(n, args.samples, args.seed),
        eps: args.schedule_eps.clone().unwrap_or_else(|| DEFAULT_EPS.to_vec()),
        deltas: args.schedule_delta.clone().unwrap_or_else(|| DEFAULT_DELTAS.to_vec()),
        h_grid: args.schedule_h.clone().unwrap_or(carleson.h_grid),
        radii: args.radii.clone().unwrap_or(carleson.radii),
        budget: SearchBudget { directions: args.directions, stages: args.stages, seed: args.seed, ..Default::default() },
        seed: args.seed,
    };
    check_schedule("schedule-eps", &config.eps, false)?;
    check_schedule("schedule-delta", &config.deltas, false)?;
    check_schedule("schedule-h", &config.h_grid, false)?;
    check_schedule("radii", &config.radii, true)?;
    if config.budget.directions == 0 || config.budget.stages < 3 {
        return Err(Failure::Usage("the boundary search needs at least one direction and three stages".into()));
    }
    Ok(config)
}

fn carleson_config(config: &JobConfig, args: &JobArgs) -> CarlesonConfig {
    let mut c = CarlesonConfig::default_for(config.n);
    if args.samples.is_some() || config.n > 1 {
        c.scheme = config.scheme;
        if config.n > 1 || c.trace_scheme.samples < config.scheme.samples {
            c.trace_scheme = config.scheme;
        }
    }
    c.h_grid = config.h_grid.clone();
    c.radii = config.radii.clone();
    c.eps = config.eps.clone();
    c.centers.seed = config.seed;
    c.berezin.seed = config.seed;
    c.corpus.seed = config.seed;
    c
}

fn merge_citations<'a>(lists: impl IntoIterator<Item = &'a Vec<String>>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for list in lists {
        for c in list {
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
    }
    out
}

fn finish<T: Serialize>(
    args: &JobArgs,
    config: &JobConfig,
    result: T,
    citations: Vec<String>,
    flags: Vec<String>,
    traces: &[Trace],
) -> Result<i32, Failure> {
    let command = config.command.clone();
    let doc = Document { command: &command, config, result, criterion_citations: citations, flags: flags.clone() };
    let written = emit(args.out.as_deref(), &command, &doc, traces)?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    for flag in &flags {
        eprintln!("flag: {flag}");
    }
    Ok(if flags.is_empty() { 0 } else { 1 })
}

/// Estimates for one `(p, q)` regime with the compactness verdict.
#[derive(Serialize)]
pub struct EssnormResult {
    pub reports: Vec<EstimateReport>,
    pub verdict: Option<Verdict>,
}

fn essnorm_reports(pair: &SymbolPair, args: &JobArgs, config: &JobConfig) -> Result<Vec<EstimateReport>, Failure> {
    let (p, q) = (config.p, config.q);
    let scheme = &config.scheme;
    let uncovered = |regime: &str, nearest: &str| {
        Failure::from(hpball::Error::UncoveredRegime { regime: regime.into(), nearest: nearest.into() })
    };
    let mut reports = Vec::new();
    match (p.is_infinite(), q.is_infinite()) {
        (true, true) => return Err(uncovered("H^inf -> H^inf", "hp-hinf bracket (finite p > 1)")),
        (true, false) if q == 2.0 => {
            reports.push(essnorm_exact_hinf_h2(pair, scheme, &config.eps)?);
        }
        (true, false) if q > 1.0 => {
            reports.push(essnorm_bounds_hinf_hq(pair, q, scheme, &config.eps)?);
        }
        (true, false) => return Err(uncovered(&format!("H^inf -> H^{q}"), "hinf-hq bracket (q > 1)")),
        (false, true) => {
            reports.push(essnorm_bounds_hp_hinf(pair, p, &config.deltas, &config.budget)?);
        }
        (false, false) => {
            reports.push(essnorm_lower_hp_hq(pair, p, q, scheme, &config.eps, &InnerWitness::default())?);
            if let Some(r) = args.r {
                let corpus = TestCorpus { seed: config.seed, ..Default::default() };
                reports.push(essnorm_upper_interp(pair, p, q, r, args.projection_norm, scheme, &config.eps, &corpus)?);
            }
        }
    }
    Ok(reports)
}

fn verdict_for(setting: &Setting, evidence: &[&dyn Evidence]) -> Result<Option<Verdict>, Failure> {
    match compactness_verdict(setting, evidence) {
        Ok(v) => Ok(Some(v)),
        Err(hpball::Error::MissingPrerequisite(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn ordering_flags(reports: &[EstimateReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.ordering_ok())
        .map(|r| format!("bound ordering violated for p = {}, q = {}", r.setting.p, r.setting.q))
        .collect()
}

pub fn cmd_essnorm(args: &JobArgs) -> Result<i32, Failure> {
    let pair = load_pair(&args.pair)?;
    let config = job_config("essnorm", args, pair.dim())?;
    let reports = essnorm_reports(&pair, args, &config)?;
    let evidence: Vec<&dyn Evidence> = reports.iter().map(|r| r as &dyn Evidence).collect();
    let verdict = verdict_for(&Setting::new(config.p, config.q, config.n), &evidence)?;
    let mut flags = ordering_flags(&reports);
    if let Some(v) = &verdict {
        flags.extend(v.conflicts.iter().cloned());
    }
    let citations = merge_citations(reports.iter().map(|r| &r.criterion_citations));
    let traces: Vec<Trace> = reports.iter().flat_map(|r| r.traces.clone()).collect();
    finish(args, &config, EssnormResult { reports, verdict }, citations, flags, &traces)
}

#[derive(Serialize)]
pub struct CarlesonResult {
    pub report: CarlesonReport,
    pub verdict: Option<Verdict>,
}

pub fn cmd_carleson(args: &JobArgs) -> Result<i32, Failure> {
    let pair = load_pair(&args.pair)?;
    let config = job_config("carleson", args, pair.dim())?;
    let report = equivalence_report(&pair, config.p, config.q, &carleson_config(&config, args))?;
    let verdict = verdict_for(&report.setting, &[&report])?;
    let mut flags = report.flags.clone();
    if let Some(v) = &verdict {
        flags.extend(v.conflicts.iter().cloned());
    }
    let citations = report.criterion_citations.clone();
    let traces = report.traces();
    finish(args, &config, CarlesonResult { report, verdict }, citations, flags, &traces)
}

pub fn cmd_bounded(args: &JobArgs) -> Result<i32, Failure> {
    let pair = load_pair(&args.pair)?;
    let mut config = job_config("bounded", args, pair.dim())?;
    config.q = f64::INFINITY;
    if config.p.is_infinite() {
        return Err(Failure::Usage("bounded classifies H^p -> H^inf and needs a finite --p".into()));
    }
    let report: BoundednessReport = boundedness_hp_hinf(&pair, config.p, &config.budget)?;
    let citations = report.criterion_citations.clone();
    let traces = vec![report.trace()];
    finish(args, &config, report, citations, Vec::new(), &traces)
}

/// One regime attempted by `report`.
#[derive(Serialize)]
pub struct RegimeEntry {
    #[serde(with = "exponent")]
    pub p: f64,
    #[serde(with = "exponent")]
    pub q: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<EstimateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundedness: Option<BoundednessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carleson: Option<CarlesonReport>,
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl RegimeEntry {
    fn new(p: f64, q: f64) -> Self {
        Self { p, q, reports: Vec::new(), boundedness: None, carleson: None, verdict: None, skipped: None }
    }
}

fn attempt<T>(entry: &mut RegimeEntry, result: hpball::Result<T>) -> Result<Option<T>, Failure> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(hpball::Error::InternalConsistency(m)) => Err(Failure::Inconsistent(m)),
        Err(e) => {
            entry.skipped = Some(e.to_string());
            Ok(None)
        }
    }
}

/// Runs `(inf, 2)`, `(inf, q)`, `(p, inf)` and `(p, q)` where they apply.
pub fn cmd_report(args: &JobArgs) -> Result<i32, Failure> {
    let pair = load_pair(&args.pair)?;
    let config = job_config("report", args, pair.dim())?;
    let (p, q, n) = (config.p, config.q, config.n);
    let scheme = &config.scheme;
    let inf = f64::INFINITY;
    let mut entries = Vec::new();

    let mut e = RegimeEntry::new(inf, 2.0);
    if let Some(r) = attempt(&mut e, essnorm_exact_hinf_h2(&pair, scheme, &config.eps))? {
        e.reports.push(r);
    }
    entries.push(e);

    if q.is_finite() && q > 1.0 && q != 2.0 {
        let mut e = RegimeEntry::new(inf, q);
        if let Some(r) = attempt(&mut e, essnorm_bounds_hinf_hq(&pair, q, scheme, &config.eps))? {
            e.reports.push(r);
        }
        entries.push(e);
    }

    if p.is_finite() {
        let mut e = RegimeEntry::new(p, inf);
        if let Some(b) = attempt(&mut e, boundedness_hp_hinf(&pair, p, &config.budget))? {
            if b.bounded {
                if let Some(r) = attempt(&mut e, essnorm_bounds_hp_hinf(&pair, p, &config.deltas, &config.budget))? {
                    e.reports.push(r);
                }
            } else {
                e.skipped = Some("not bounded into H^inf".into());
            }
            e.boundedness = Some(b);
        }
        entries.push(e);
    }

    if p.is_finite() && q.is_finite() {
        let mut e = RegimeEntry::new(p, q);
        if n == 1 && p > 1.0 {
            let witness = InnerWitness::default();
            if let Some(r) = attempt(&mut e, essnorm_lower_hp_hq(&pair, p, q, scheme, &config.eps, &witness))? {
                e.reports.push(r);
            }
        }
        if p <= q {
            if let Some(c) = attempt(&mut e, equivalence_report(&pair, p, q, &carleson_config(&config, args)))? {
                e.carleson = Some(c);
            }
        }
        entries.push(e);
    }

    let mut flags = Vec::new();
    for e in entries.iter_mut() {
        let mut evidence: Vec<&dyn Evidence> = e.reports.iter().map(|r| r as &dyn Evidence).collect();
        if let Some(c) = &e.carleson {
            evidence.push(c);
            flags.extend(c.flags.iter().cloned());
        }
        flags.extend(ordering_flags(&e.reports));
        e.verdict = verdict_for(&Setting::new(e.p, e.q, n), &evidence)?;
        if let Some(v) = &e.verdict {
            flags.extend(v.conflicts.iter().cloned());
        }
    }
    let verdicts: Vec<Verdict> = entries.iter().filter_map(|e| e.verdict.clone()).collect();
    flags.extend(cross_regime_conflicts(&verdicts));

    let mut lists: Vec<&Vec<String>> = Vec::new();
    let mut traces = Vec::new();
    for e in &entries {
        for r in &e.reports {
            lists.push(&r.criterion_citations);
            traces.extend(r.traces.clone());
        }
        if let Some(b) = &e.boundedness {
            lists.push(&b.criterion_citations);
            traces.push(b.trace());
        }
        if let Some(c) = &e.carleson {
            lists.push(&c.criterion_citations);
            traces.extend(c.traces());
        }
    }
    let citations = merge_citations(lists);
    finish(args, &config, entries, citations, flags, &traces)
}
