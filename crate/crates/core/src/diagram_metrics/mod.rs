//! Bottleneck distance between persistence diagrams and the signal-to-noise
//! statistic.

mod matching;

use serde::Serialize;
use thiserror::Error;

use crate::persistence::{Interval, PersistenceDiagram};

pub use matching::bottleneck_intervals;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("need at least {needed} finite intervals, found {found}")]
    InsufficientIntervals { needed: usize, found: usize },
    #[error("signal count must be positive")]
    ZeroSignalCount,
}

/// Partial bijection between two interval lists and its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_first: Vec<usize>,
    pub unmatched_second: Vec<usize>,
    /// Serialized as `null` when infinite.
    pub cost: f64,
}

/// Cost of leaving an interval unmatched: half its length.
pub fn interval_cost(i: &Interval) -> f64 {
    if i.is_infinite() {
        f64::INFINITY
    } else {
        (i.death - i.birth) / 2.0
    }
}

/// `max(|b₁ − b₂|, |d₁ − d₂|)` with `|∞ − ∞| = 0`.
pub fn pair_cost(i: &Interval, j: &Interval) -> f64 {
    let deaths = match (i.is_infinite(), j.is_infinite()) {
        (true, true) => 0.0,
        (false, false) => (i.death - j.death).abs(),
        _ => f64::INFINITY,
    };
    (i.birth - j.birth).abs().max(deaths)
}

/// Bottleneck distance between the degree-`p` parts of two diagrams.
pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram, p: usize) -> (f64, Matching) {
    bottleneck_intervals(a.degree(p), b.degree(p))
}

/// Ratio between the `k`-th and `(k+1)`-th longest finite intervals of
/// degree `p`; infinite when there are exactly `k`.
pub fn signal_to_noise(
    diagram: &PersistenceDiagram,
    p: usize,
    k: usize,
) -> Result<f64, MetricsError> {
    if k == 0 {
        return Err(MetricsError::ZeroSignalCount);
    }
    let mut lengths: Vec<f64> = diagram
        .degree(p)
        .iter()
        .filter(|i| !i.is_infinite())
        .map(Interval::length)
        .collect();
    if lengths.len() < k {
        return Err(MetricsError::InsufficientIntervals {
            needed: k,
            found: lengths.len(),
        });
    }
    lengths.sort_by(|a, b| b.total_cmp(a));
    Ok(match lengths.get(k) {
        Some(noise) => lengths[k - 1] / noise,
        None => f64::INFINITY,
    })
}

/// Formats a ratio, showing infinity as `≫ 10`.
pub fn display_ratio(r: f64) -> String {
    if r.is_infinite() {
        "≫ 10".to_string()
    } else {
        format!("{r:.1}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::DiagramMeta;

    fn h1(lengths: &[f64]) -> PersistenceDiagram {
        PersistenceDiagram::new(
            vec![
                vec![],
                lengths.iter().map(|l| Interval::new(0.0, *l)).collect(),
            ],
            DiagramMeta::default(),
        )
    }

    #[test]
    fn cost_examples() {
        assert_eq!(interval_cost(&Interval::new(0.0, 2.0)), 1.0);
        assert_eq!(interval_cost(&Interval::new(3.0, 3.0)), 0.0);
        assert_eq!(interval_cost(&Interval::infinite(0.0)), f64::INFINITY);
        let i = Interval::new(0.0, 2.0);
        assert_eq!(pair_cost(&i, &i), 0.0);
        assert_eq!(pair_cost(&i, &Interval::new(0.5, 2.5)), 0.5);
        assert_eq!(
            pair_cost(&Interval::infinite(0.0), &Interval::infinite(1.0)),
            1.0
        );
        assert_eq!(pair_cost(&i, &Interval::infinite(0.0)), f64::INFINITY);
    }

    #[test]
    fn snr_examples() {
        assert_eq!(signal_to_noise(&h1(&[5.0, 4.0, 1.0]), 1, 2), Ok(4.0));
        assert_eq!(signal_to_noise(&h1(&[2.0, 2.0]), 1, 1), Ok(1.0));
        assert_eq!(signal_to_noise(&h1(&[3.0, 2.0]), 1, 2), Ok(f64::INFINITY));
        assert_eq!(
            signal_to_noise(&h1(&[3.0]), 1, 2),
            Err(MetricsError::InsufficientIntervals {
                needed: 2,
                found: 1
            })
        );
        assert_eq!(display_ratio(f64::INFINITY), "≫ 10");
        assert_eq!(display_ratio(7.84), "7.8");
    }
}
