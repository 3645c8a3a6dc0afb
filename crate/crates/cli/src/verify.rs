//! Property suites run by `hpball verify`: Parseval, change of variables,
//! the pointwise growth bound, radial convergence, test-kernel
//! normalization and the decay of truncated inner-power images.

use hpball::geometry::sample_sphere;
use hpball::hardy::{growth_bound_check, h2_norm, hp_norm, radial_convergence_check, test_kernel_norm_check, HardyExpansion};
use hpball::pullback::{build_pullback, integrate_pullback, CHANGE_OF_VARIABLES_TOL};
use hpball::symbols::{families, seeded_polynomial};
use hpball::estimators::truncated_image_trace;
use hpball::{BallPoint, QuadratureScheme, Symbol, SymbolPair, TestKernel};
use serde::Serialize;

use crate::commands::Failure;
use crate::output::emit;
use crate::VerifyArgs;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub suite: &'static str,
    pub case: String,
    pub error: f64,
    pub tolerance: f64,
    /// `tolerance - error`; negative on failure.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub dims: Vec<usize>,
    pub seed: u64,
    pub tolerance_override: Option<f64>,
    pub passed: bool,
    pub failures: usize,
    pub cases: Vec<Case>,
}

struct Recorder {
    tol: Option<f64>,
    cases: Vec<Case>,
}

impl Recorder {
    fn check(&mut self, suite: &'static str, case: String, error: f64, default_tol: f64) {
        let tolerance = self.tol.unwrap_or(default_tol);
        let passed = error <= tolerance;
        self.cases.push(Case { suite, case, error, tolerance, margin: tolerance - error, passed });
    }

    /// Checks whose pass criterion is structural and is never overridden.
    fn require(&mut self, suite: &'static str, case: String, error: f64, tolerance: f64) {
        let passed = error <= tolerance;
        self.cases.push(Case { suite, case, error, tolerance, margin: tolerance - error, passed });
    }
}

type Integrand = fn(&BallPoint) -> f64;

fn scheme(n: usize, samples: Option<usize>, seed: u64) -> QuadratureScheme {
    match (n, samples) {
        (1, s) => QuadratureScheme::circle(s.unwrap_or(4096)),
        (_, s) => QuadratureScheme::monte_carlo(s.unwrap_or(20_000), seed),
    }
}

fn pairs_for(n: usize) -> Vec<(&'static str, SymbolPair)> {
    let names: &[&'static str] = match n {
        1 => &["identity", "half", "affine-half", "blaschke-half", "weighted-square", "edge"],
        2 => &["identity2", "ball2-affine"],
        _ => &[],
    };
    let mut out: Vec<(&'static str, SymbolPair)> =
        names.iter().map(|&name| (name, families::named(name).expect("built-in"))).collect();
    if n > 2 {
        out.push(("identity", families::identity(n)));
    }
    out
}

fn parseval(rec: &mut Recorder, n: usize, s: &QuadratureScheme, seed: u64) -> Result<(), Failure> {
    for k in 0..20u64 {
        let poly = seeded_polynomial(n, (k % 6) as u32, seed.wrapping_add(1000 * n as u64 + k));
        let exact = h2_norm(&HardyExpansion::from_polynomial(&poly));
        let numeric = hp_norm(n, |z| poly.eval(z.coords()), 2.0, s, &[1.0])?;
        let error = (exact - numeric.value).abs() / exact;
        let tol = if s.is_monte_carlo() { (3.0 * numeric.std_error / exact).max(1e-12) } else { 1e-8 };
        rec.check("parseval", format!("n={n} polynomial {k}"), error, tol);
    }
    Ok(())
}

fn change_of_variables(rec: &mut Recorder, n: usize, s: &QuadratureScheme) -> Result<(), Failure> {
    for (name, pair) in pairs_for(n) {
        for q in [1.0, 2.0, 3.0] {
            let mu = build_pullback(&pair, q, s)?;
            let tests: [(&str, Integrand); 2] = [
                ("|w|^2", |w| w.norm_sqr()),
                ("1/(2 - Re w_1)", |w| 1.0 / (2.0 - w.coords()[0].re)),
            ];
            for (label, g) in tests {
                let i = integrate_pullback(&mu, g)?;
                rec.check("change-of-variables", format!("{name} q={q} g={label}"), i.rel_diff.unwrap_or(0.0), CHANGE_OF_VARIABLES_TOL);
            }
        }
    }
    Ok(())
}

fn growth_and_kernels(rec: &mut Recorder, n: usize, s: &QuadratureScheme, seed: u64) -> Result<(), Failure> {
    let directions = sample_sphere(n, &scheme(n, Some(16), seed ^ 0x77))?;
    let points: Vec<BallPoint> =
        [0.0, 0.3, 0.6, 0.9].iter().flat_map(|&r| directions.iter().map(move |d| d.scaled(r))).collect();
    for p in [1.0, 2.0, 4.0] {
        for (j, &r) in [0.0, 0.5, 0.9].iter().enumerate() {
            let center = directions[j].scaled(r);
            let kernel = TestKernel::new(center, p)?;
            let norm = test_kernel_norm_check(&kernel, s)?;
            let tol = if s.is_monte_carlo() { (3.0 * norm.std_error).max(1e-12) } else { 1e-8 };
            rec.check("kernel-norm", format!("n={n} p={p} |w|={r}"), (norm.value - 1.0).abs(), tol);
            let g = growth_bound_check(n, |z| kernel.eval(z.coords()), p, &points, s)?;
            let slack = if s.is_monte_carlo() { (3.0 * g.norm.std_error / g.norm.value).max(1e-12) } else { 1e-8 };
            rec.check("growth-bound", format!("n={n} p={p} kernel |w|={r}"), (g.worst_ratio - 1.0).max(0.0), slack);
        }
    }
    Ok(())
}

fn radial(rec: &mut Recorder, n: usize, s: &QuadratureScheme, seed: u64) -> Result<(), Failure> {
    for k in 0..4u64 {
        let poly = seeded_polynomial(n, 4, seed.wrapping_add(7000 + k));
        let check = radial_convergence_check(n, |z| poly.eval(z.coords()), 0.1, &[0.5, 0.9, 0.99, 0.999], s)?;
        let worst_increase = check.rows.windows(2).map(|w| (w[1].1 - w[0].1).max(0.0)).fold(0.0, f64::max);
        let error = if check.nonincreasing { 0.0 } else { worst_increase };
        rec.require("radial-convergence", format!("n={n} polynomial {k}"), error, 0.0);
    }
    Ok(())
}

fn truncation(rec: &mut Recorder) -> Result<(), Failure> {
    let cases = [
        ("blaschke-half", families::blaschke(Symbol::constant(1, 1.0), 0.5), 4),
        ("affine-half", families::affine_half(Symbol::constant(1, 1.0)), 2),
        ("blaschke(-0.3)", families::blaschke(Symbol::constant(1, 1.0), -0.3), 4),
    ];
    let g = Symbol::coordinate(1, 0);
    let ms: Vec<u32> = (1..=10).collect();
    for (name, pair, k) in cases {
        let t = truncated_image_trace(&pair, k, &g, &ms, 64, &QuadratureScheme::circle(4096))?;
        let excess = t.head.iter().zip(&t.envelope).map(|(h, e)| (h - e).max(0.0)).fold(0.0, f64::max);
        let excess = if t.within_envelope { 0.0 } else { excess };
        rec.require("truncation-decay", format!("{name} k={k} envelope"), excess, 0.0);
        let fit = t.fitted_ratio.map_or(f64::INFINITY, |r| (r - t.contraction).abs() / t.contraction);
        rec.require("truncation-decay", format!("{name} k={k} ratio vs contraction {:.4}", t.contraction), fit, 0.2);
    }
    Ok(())
}

/// All suites for the requested dimensions.
pub fn run_suites(args: &VerifyArgs) -> Result<SuiteReport, Failure> {
    if args.dims.is_empty() || args.dims.contains(&0) {
        return Err(Failure::Usage("--dims must list positive dimensions".into()));
    }
    if args.samples == Some(0) {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let mut rec = Recorder { tol: args.tol, cases: Vec::new() };
    for &n in &args.dims {
        let s = scheme(n, args.samples, args.seed);
        parseval(&mut rec, n, &s, args.seed)?;
        change_of_variables(&mut rec, n, &s)?;
        growth_and_kernels(&mut rec, n, &s, args.seed)?;
        radial(&mut rec, n, &s, args.seed)?;
        if n == 1 {
            truncation(&mut rec)?;
        }
    }
    let failures = rec.cases.iter().filter(|c| !c.passed).count();
    Ok(SuiteReport {
        dims: args.dims.clone(),
        seed: args.seed,
        tolerance_override: args.tol,
        passed: failures == 0,
        failures,
        cases: rec.cases,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let report = run_suites(args)?;
    for c in report.cases.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {} {}: error {:e} > tolerance {:e} (margin {:e})", c.suite, c.case, c.error, c.tolerance, c.margin);
    }
    eprintln!("{} cases, {} failed", report.cases.len(), report.failures);
    for path in emit(args.out.as_deref(), "verify", &report, &[])? {
        eprintln!("wrote {}", path.display());
    }
    Ok(if report.passed { 0 } else { 1 })
}

