//! Small numerical helpers shared by the estimators: running means,
//! limit extrapolation from a monotone profile, and divergence detection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Welford accumulator over complex samples. The mean of a constant stream is
/// that constant exactly.
#[derive(Clone, Debug, Default)]
pub struct ComplexMean {
    count: usize,
    mean: Complex64,
    m2: f64,
}

impl ComplexMean {
    pub fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = x - self.mean;
        self.m2 += (delta * delta2.conj()).re;
    }

    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Standard error of the mean, `sqrt(var / N)`.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = (self.m2 / (self.count - 1) as f64).max(0.0);
        (var / self.count as f64).sqrt()
    }
}

/// A value with a one-sided-agnostic uncertainty (half-width).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub uncertainty: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, uncertainty: 0.0 }
    }

    /// True when zero lies within `k` uncertainties (plus a float floor).
    pub fn is_zero_within(&self, k: f64) -> bool {
        self.value.abs() <= k * self.uncertainty + ZERO_FLOOR
    }

    /// `value^e` with the uncertainty pushed through as the width of the image
    /// interval, which stays sensible when `value` is near zero.
    pub fn powf(&self, e: f64) -> Self {
        let lo = (self.value - self.uncertainty).max(0.0);
        let hi = self.value + self.uncertainty;
        let v = self.value.max(0.0).powf(e);
        let u = (hi.powf(e) - v).abs().max((v - lo.powf(e)).abs());
        Self { value: v, uncertainty: u }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { value: self.value * k, uncertainty: self.uncertainty * k.abs() }
    }
}

/// Absolute floor below which a quantity is treated as numerically zero.
pub const ZERO_FLOOR: f64 = 1e-9;

/// Ordinary least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// How the limit of a profile was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitMethod {
    /// The last entries coincide.
    Plateau,
    /// Three-point power-law extrapolation `m(t) = L + C t^gamma`.
    PowerLaw,
    /// Mean of the last two entries (profile too noisy or too slow for a fit).
    LastTwoMean,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limit {
    pub estimate: Estimate,
    pub method: LimitMethod,
    pub exponent: Option<f64>,
}

/// Extrapolate `lim_{t -> 0} m(t)` from samples `(t_i, m_i)` with `t`
/// strictly decreasing and `m` nonincreasing.
///
/// The uncertainty is half the spread of the last two entries plus
/// `extra_uncertainty` (typically the Monte Carlo standard error of the last
/// entry). The value is clamped to `[0, m_last]`.
pub fn extrapolate_limit(t: &[f64], m: &[f64], extra_uncertainty: f64) -> Limit {
    assert_eq!(t.len(), m.len());
    let k = m.len();
    assert!(k > 0, "empty profile");
    if k == 1 {
        return Limit {
            estimate: Estimate { value: m[0], uncertainty: extra_uncertainty },
            method: LimitMethod::LastTwoMean,
            exponent: None,
        };
    }
    let (m2, m3) = (m[k - 2], m[k - 1]);
    let half_spread = 0.5 * (m2 - m3).abs();
    let uncertainty = half_spread + extra_uncertainty;
    let scale = m2.abs().max(m3.abs()).max(1.0);
    if (m2 - m3).abs() <= 1e-12 * scale {
        return Limit {
            estimate: Estimate { value: m3, uncertainty },
            method: LimitMethod::Plateau,
            exponent: None,
        };
    }
    let fallback = Limit {
        estimate: Estimate { value: 0.5 * (m2 + m3), uncertainty },
        method: LimitMethod::LastTwoMean,
        exponent: None,
    };
    if k < 3 {
        return fallback;
    }
    let (t1, t2, t3) = (t[k - 3], t[k - 2], t[k - 1]);
    let m1 = m[k - 3];
    let (d12, d23) = (m1 - m2, m2 - m3);
    if !(d12 > 0.0 && d23 > 0.0 && t1 > t2 && t2 > t3 && t3 > 0.0) {
        return fallback;
    }
    let target = d12 / d23;
    let ratio = |g: f64| (t1.powf(g) - t2.powf(g)) / (t2.powf(g) - t3.powf(g));
    let (mut lo, mut hi) = (1e-3, 20.0);
    if !(ratio(lo) < target && target < ratio(hi)) {
        return fallback;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gamma = 0.5 * (lo + hi);
    let c = d23 / (t2.powf(gamma) - t3.powf(gamma));
    let value = (m3 - c * t3.powf(gamma)).clamp(0.0, m3);
    Limit {
        estimate: Estimate { value, uncertainty },
        method: LimitMethod::PowerLaw,
        exponent: Some(gamma),
    }
}

/// Per-stage growth verdict on the cumulative values of a staged search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthVerdict {
    pub diverging: bool,
    /// Growth factors between the last three stages.
    pub factors: [f64; 2],
}

/// Diverging when each of the last two stage-to-stage growth factors
/// exceeds `threshold`. Needs at least three values.
pub fn classify_growth(values: &[f64], threshold: f64) -> GrowthVerdict {
    let k = values.len();
    if k < 3 {
        return GrowthVerdict { diverging: false, factors: [1.0, 1.0] };
    }
    let factor = |a: f64, b: f64| {
        if a > 0.0 {
            b / a
        } else if b > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    };
    let f1 = factor(values[k - 3], values[k - 2]);
    let f2 = factor(values[k - 2], values[k - 1]);
    GrowthVerdict { diverging: f1 > threshold && f2 > threshold, factors: [f1, f2] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<Complex64> = (0..50).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let mut acc = ComplexMean::default();
        xs.iter().for_each(|&x| acc.push(x));
        let mean: Complex64 = xs.iter().sum::<Complex64>() / 50.0;
        let var: f64 = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / 49.0;
        assert!((acc.mean() - mean).norm() < 1e-14);
        assert!((acc.std_error() - (var / 50.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn power_law_profile_extrapolates_to_its_limit() {
        let t = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002];
        let m: Vec<f64> = t.iter().map(|&x: &f64| 0.3 + 0.9 * x.sqrt()).collect();
        let lim = extrapolate_limit(&t, &m, 0.0);
        assert_eq!(lim.method, LimitMethod::PowerLaw);
        assert!((lim.estimate.value - 0.3).abs() < 1e-9);
        assert!((lim.exponent.unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn plateau_and_fallback() {
        let t = [0.1, 0.05, 0.02];
        let flat = extrapolate_limit(&t, &[0.7, 0.7, 0.7], 0.01);
        assert_eq!(flat.method, LimitMethod::Plateau);
        assert_eq!(flat.estimate, Estimate { value: 0.7, uncertainty: 0.01 });
        let noisy = extrapolate_limit(&t, &[0.5, 0.52, 0.4], 0.0);
        assert_eq!(noisy.method, LimitMethod::LastTwoMean);
        assert!((noisy.estimate.value - 0.46).abs() < 1e-12);
    }

    #[test]
    fn growth_classification() {
        assert!(classify_growth(&[1.0, 3.0, 9.0], 2.0).diverging);
        assert!(!classify_growth(&[1.0, 1.1, 1.15], 2.0).diverging);
        assert!(!classify_growth(&[0.0, 0.0, 0.0], 2.0).diverging);
        assert!(!classify_growth(&[1.0, 5.0], 2.0).diverging);
    }

    #[test]
    fn estimate_power_near_zero() {
        let e = Estimate { value: 0.0, uncertainty: 0.04 }.powf(0.5);
        assert_eq!(e.value, 0.0);
        assert!((e.uncertainty - 0.2).abs() < 1e-12);
    }
}
