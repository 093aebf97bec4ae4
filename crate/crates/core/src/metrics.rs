//! Run metrics and the composite performance index.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::failures::FailureBreakdown;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("squashing constant must be positive, got {0}")]
    NonPositiveK(f64),
    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("metric value must be non-negative, got {0}")]
    NegativeValue(f64),
}

/// Counters for one completed run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    /// Decision steps (effort surrogate).
    pub time_t: u64,
    /// Delivered message hops.
    pub msgs_m: u64,
    /// Hops over whitelist shortcut edges.
    pub n_cross: u64,
    pub cross_c: f64,
    pub failures: FailureBreakdown,
    pub switches_s: u64,
}

impl RunMetrics {
    pub fn point(&self) -> MetricPoint {
        MetricPoint {
            time: self.time_t as f64,
            msgs: self.msgs_m as f64,
            cross: self.cross_c,
            failures: self.failures.f_total as f64,
            switches: self.switches_s as f64,
        }
    }
}

/// Real-valued inputs to the index; means over runs are fractional.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricPoint {
    pub time: f64,
    pub msgs: f64,
    pub cross: f64,
    pub failures: f64,
    pub switches: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AmpiConfig {
    /// Time, messages, cross-layer, failures, switches.
    pub weights: [f64; 5],
    pub k_t: f64,
    pub k_m: f64,
    pub k_f: f64,
    pub k_s: f64,
    pub include_crosslayer: bool,
}

impl Default for AmpiConfig {
    fn default() -> Self {
        AmpiConfig {
            weights: [0.4, 0.2, 0.0, 0.25, 0.15],
            k_t: 20.0,
            k_m: 50.0,
            k_f: 3.0,
            k_s: 5.0,
            include_crosslayer: false,
        }
    }
}

impl AmpiConfig {
    pub fn validate(&self) -> Result<(), MetricsError> {
        for (index, &value) in self.weights.iter().enumerate() {
            if value < 0.0 {
                return Err(MetricsError::NegativeWeight { index, value });
            }
        }
        for k in [self.k_t, self.k_m, self.k_f, self.k_s] {
            if k.is_nan() || k <= 0.0 {
                return Err(MetricsError::NonPositiveK(k));
            }
        }
        Ok(())
    }
}

/// `x / (x + K)`.
pub fn squash(x: f64, k: f64) -> Result<f64, MetricsError> {
    if k.is_nan() || k <= 0.0 {
        return Err(MetricsError::NonPositiveK(k));
    }
    if x.is_nan() || x < 0.0 {
        return Err(MetricsError::NegativeValue(x));
    }
    Ok(x / (x + k))
}

/// `Σ wᵢ (1 − x̃ᵢ)`; the cross-layer term only when enabled.
pub fn compute_ampi(m: &MetricPoint, cfg: &AmpiConfig) -> Result<f64, MetricsError> {
    cfg.validate()?;
    let [w_t, w_m, w_c, w_f, w_s] = cfg.weights;
    let mut score = w_t * (1.0 - squash(m.time, cfg.k_t)?)
        + w_m * (1.0 - squash(m.msgs, cfg.k_m)?)
        + w_f * (1.0 - squash(m.failures, cfg.k_f)?)
        + w_s * (1.0 - squash(m.switches, cfg.k_s)?);
    if cfg.include_crosslayer {
        score += w_c * (1.0 - m.cross.clamp(0.0, 1.0));
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(time: f64, msgs: f64, failures: f64, switches: f64) -> MetricPoint {
        MetricPoint { time, msgs, cross: 0.0, failures, switches }
    }

    #[test]
    fn squash_examples() {
        assert_eq!(squash(0.0, 7.0).unwrap(), 0.0);
        assert_eq!(squash(5.0, 5.0).unwrap(), 0.5);
        assert!((squash(191.9, 20.0).unwrap() - 0.905_615).abs() < 1e-5);
        assert_eq!(squash(1.0, 0.0), Err(MetricsError::NonPositiveK(0.0)));
        assert_eq!(squash(1.0, -2.0), Err(MetricsError::NonPositiveK(-2.0)));
    }

    #[test]
    fn printed_rows() {
        let cfg = AmpiConfig::default();
        let a = compute_ampi(&pt(191.9, 42.0, 0.05, 0.9), &cfg).unwrap();
        assert!((a - 0.52).abs() <= 0.005, "{a}");
        let a = compute_ampi(&pt(29.8, 5.0, 0.01, 0.10), &cfg).unwrap();
        assert!((a - 0.74).abs() <= 0.005, "{a}");
        assert!((compute_ampi(&MetricPoint::default(), &cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crosslayer_term_gated() {
        let mut cfg = AmpiConfig { weights: [0.4, 0.2, 0.1, 0.25, 0.15], ..AmpiConfig::default() };
        let m = MetricPoint { cross: 0.5, ..MetricPoint::default() };
        assert!((compute_ampi(&m, &cfg).unwrap() - 1.0).abs() < 1e-12);
        cfg.include_crosslayer = true;
        assert!((compute_ampi(&m, &cfg).unwrap() - 1.05).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(
            t in 0.0f64..500.0, m in 0.0f64..200.0, f in 0.0f64..10.0, s in 0.0f64..10.0,
            c in 0.0f64..1.0, which in 0usize..5, bump in 0.0f64..100.0,
        ) {
            let cfg = AmpiConfig { weights: [0.4, 0.2, 0.1, 0.25, 0.15], include_crosslayer: true, ..AmpiConfig::default() };
            let base = MetricPoint { time: t, msgs: m, cross: c, failures: f, switches: s };
            let mut up = base;
            match which {
                0 => up.time += bump,
                1 => up.msgs += bump,
                2 => up.cross = (up.cross + bump / 100.0).min(1.0),
                3 => up.failures += bump,
                _ => up.switches += bump,
            }
            let a = compute_ampi(&base, &cfg).unwrap();
            let b = compute_ampi(&up, &cfg).unwrap();
            prop_assert!(b <= a + 1e-12);
            let d = compute_ampi(&base, &AmpiConfig::default()).unwrap();
            prop_assert!(d > 0.0 && d <= 1.0);
        }
    }
}
