//! Staged grid search for suprema of functions on the open ball.
//!
//! Stage 0 is a coarse grid of interior shells. Stage `k >= 1` evaluates the
//! shell of radius `1 - 10^{-k}` along every base direction, then zooms
//! around the best directions found so far, shrinking the angular window by
//! 4 per round until it is below `10^{-k}`. Each stage seeds the next, so
//! stages run sequentially.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::geometry::{gaussian_direction, sample_sphere, BallPoint, QuadratureScheme};
use crate::numeric::{classify_growth, GrowthVerdict};

const COARSE_RADII: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.9];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Base directions per shell.
    pub directions: usize,
    /// Refinement stages; the last one sits at radius `1 - 10^{-stages}`.
    pub stages: u32,
    /// Directions refined locally after each stage.
    pub keep: usize,
    /// Local perturbations per kept direction and side.
    pub local: usize,
    /// Per-stage growth factor above which the supremum is called divergent.
    pub growth_threshold: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { directions: 256, stages: 6, keep: 4, local: 8, growth_threshold: 2.0, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: u32,
    /// Distance of the stage shell to the sphere (`1 - radius`).
    pub gap: f64,
    pub stage_best: f64,
    pub cumulative: f64,
    pub point: Option<BallPoint>,
    pub evaluated: usize,
    /// Points at which the objective was defined.
    pub admissible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub stages: Vec<StageRecord>,
    pub best: f64,
    pub argmax: Option<BallPoint>,
    /// Growth of the cumulative supremum over the refinement stages.
    pub growth: GrowthVerdict,
}

impl SearchTrace {
    pub fn admissible(&self) -> usize {
        self.stages.iter().map(|s| s.admissible).sum()
    }
}

/// Supremum of `objective` over the ball. Points where it returns `None`
/// (outside a region of interest, or undefined) are skipped.
pub fn staged_sup<F>(n: usize, objective: F, budget: &SearchBudget) -> SearchTrace
where
    F: Fn(&BallPoint) -> Option<f64>,
{
    let base = base_directions(n, budget);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut best = f64::NEG_INFINITY;
    let mut argmax: Option<BallPoint> = None;
    let mut stages = Vec::with_capacity(budget.stages as usize + 1);

    let evaluate = |points: Vec<BallPoint>, scored: &mut Vec<(f64, BallPoint)>| -> usize {
        let mut admissible = 0;
        for z in points {
            let Some(v) = objective(&z).filter(|v| !v.is_nan()) else { continue };
            admissible += 1;
            scored.push((v, z));
        }
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        admissible
    };
    let mut finish = |stage: u32, gap: f64, evaluated: usize, admissible: usize, scored: &[(f64, BallPoint)]| {
        let (stage_best, stage_point) = match scored.first() {
            Some((v, z)) => (*v, Some(z.clone())),
            None => (f64::NEG_INFINITY, None),
        };
        if stage_best > best {
            best = stage_best;
            argmax = stage_point.clone();
        }
        stages.push(StageRecord {
            stage,
            gap,
            stage_best: stage_best.max(0.0),
            cumulative: best.max(0.0),
            point: stage_point,
            evaluated,
            admissible,
        });
    };
    let leaders_of = |scored: &[(f64, BallPoint)], previous: Vec<BallPoint>| -> Vec<BallPoint> {
        if scored.is_empty() {
            return previous;
        }
        scored.iter().take(budget.keep).filter_map(|(_, z)| z.normalized()).collect()
    };

    let coarse: Vec<BallPoint> = COARSE_RADII
        .iter()
        .flat_map(|&r| base.iter().map(move |d| d.scaled(r)))
        .collect();
    let mut scored = Vec::new();
    let evaluated = coarse.len();
    let admissible = evaluate(coarse, &mut scored);
    finish(0, 1.0 - COARSE_RADII[COARSE_RADII.len() - 1], evaluated, admissible, &scored);
    let mut leaders = leaders_of(&scored, Vec::new());

    let angular = 2.0 * std::f64::consts::PI / budget.directions.max(1) as f64;
    for k in 1..=budget.stages {
        let gap = 10f64.powi(-(k as i32));
        let radius = 1.0 - gap;
        let mut scored = Vec::new();
        let mut evaluated = base.len();
        let mut admissible = evaluate(base.iter().map(|d| d.scaled(radius)).collect(), &mut scored);
        // zoom around the leaders until the angular window is below the gap
        let mut scale = angular;
        let mut centers = leaders.clone();
        loop {
            let points: Vec<BallPoint> = centers
                .iter()
                .flat_map(|dir| perturbations(dir, scale, budget.local, &mut rng))
                .map(|d| d.scaled(radius))
                .collect();
            evaluated += points.len();
            admissible += evaluate(points, &mut scored);
            centers = leaders_of(&scored, centers);
            if scale <= gap || centers.is_empty() {
                break;
            }
            scale /= 4.0;
        }
        finish(k, gap, evaluated, admissible, &scored);
        leaders = leaders_of(&scored, leaders);
    }

    let cumulative: Vec<f64> = stages.iter().skip(1).map(|s| s.cumulative).collect();
    let growth = classify_growth(&cumulative, budget.growth_threshold);
    SearchTrace { stages, best: best.max(0.0), argmax, growth }
}

fn base_directions(n: usize, budget: &SearchBudget) -> Vec<BallPoint> {
    let count = budget.directions.max(1);
    let scheme = if n == 1 {
        QuadratureScheme::circle(count)
    } else {
        QuadratureScheme::monte_carlo(count, budget.seed)
    };
    sample_sphere(n, &scheme).expect("valid base scheme")
}

fn perturbations(dir: &BallPoint, scale: f64, count: usize, rng: &mut ChaCha8Rng) -> Vec<BallPoint> {
    if dir.dim() == 1 {
        let mut out = Vec::with_capacity(2 * count);
        for j in 1..=count {
            for sign in [-1.0, 1.0] {
                let rot = Complex64::from_polar(1.0, sign * scale * j as f64 / count as f64);
                out.push(BallPoint::disk(dir.coords()[0] * rot));
            }
        }
        return out;
    }
    (0..2 * count)
        .map(|j| {
            let step = scale * (1 + j / 2) as f64 / count as f64;
            let noise = gaussian_direction(dir.dim(), rng);
            let coords = dir
                .coords()
                .iter()
                .zip(noise.coords())
                .map(|(a, b)| {
                    let jitter: f64 = StandardNormal.sample(rng);
                    a + b * step * (1.0 + 0.1 * jitter)
                })
                .collect();
            BallPoint::from_coords(coords).expect("n >= 1").normalized().unwrap_or_else(|| dir.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_blowup_is_divergent() {
        let t = staged_sup(1, |z| Some((1.0 - z.norm_sqr()).powf(-0.5)), &SearchBudget::default());
        assert!(t.growth.diverging);
        assert_eq!(t.stages.len(), 7);
        assert!((t.stages[6].gap - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn bounded_plateau() {
        let t = staged_sup(1, |z| Some((1.0 - z.norm_sqr() / 4.0).powf(-0.5)), &SearchBudget::default());
        assert!(!t.growth.diverging);
        assert!((t.best - (4.0f64 / 3.0).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn local_refinement_finds_a_narrow_peak() {
        // peak of width ~1e-3 at angle 0.01, between base directions
        let f = |z: &BallPoint| {
            let w = z.coords()[0];
            let d = (w - Complex64::from_polar(1.0, 0.01)).norm();
            Some(1.0 / (d + 1e-3))
        };
        let t = staged_sup(1, f, &SearchBudget::default());
        assert!(t.best > 100.0, "{}", t.best);
    }

    #[test]
    fn regions_can_be_empty() {
        let t = staged_sup(2, |_| None, &SearchBudget { directions: 32, ..Default::default() });
        assert_eq!(t.admissible(), 0);
        assert_eq!(t.best, 0.0);
        assert!(t.argmax.is_none());
    }
}
