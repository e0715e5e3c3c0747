use serde::{Deserialize, Serialize};

use super::AnalyticsError;

pub const DEFAULT_EPSILONS: [f64; 4] = [0.1, 0.075, 0.05, 0.025];
/// Added to every cell before normalising in the divergence.
pub const KL_SMOOTHING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub epsilon: f64,
    /// Replicate count after which the curve stays within `epsilon`;
    /// `None` when the last point of the curve is undefined.
    pub nmin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub metric: String,
    /// Replicate counts at which the curve is evaluated.
    pub sizes: Vec<usize>,
    pub curve: Vec<Option<f64>>,
    pub thresholds: Vec<Threshold>,
    /// Some prefix had zero mean, leaving its CV undefined.
    pub zero_mean: bool,
}

/// Smallest size after which every successive change stays within `eps`.
fn nmin_changes(sizes: &[usize], curve: &[Option<f64>], eps: f64) -> Option<usize> {
    let last = curve.len().checked_sub(1)?;
    curve[last]?;
    let mut k = last;
    while k > 0 {
        match (curve[k - 1], curve[k]) {
            (Some(a), Some(b)) if (b - a).abs() <= eps => k -= 1,
            _ => break,
        }
    }
    Some(sizes[k])
}

/// Smallest size after which the curve itself stays within `eps`.
fn nmin_values(sizes: &[usize], curve: &[Option<f64>], eps: f64) -> Option<usize> {
    let mut k = curve.len();
    while k > 0 && curve[k - 1].is_some_and(|v| v <= eps) {
        k -= 1;
    }
    (k < curve.len()).then(|| sizes[k])
}

/// Coefficient of variation of each prefix `samples[..n]`, `n >= 2`.
pub fn running_cv(samples: &[f64]) -> Vec<Option<f64>> {
    let (mut sum, mut sq) = (0.0, 0.0);
    let mut out = Vec::with_capacity(samples.len().saturating_sub(1));
    for (i, x) in samples.iter().enumerate() {
        sum += x;
        sq += x * x;
        let n = (i + 1) as f64;
        if i == 0 {
            continue;
        }
        let mean = sum / n;
        let var = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
        out.push((mean != 0.0).then(|| {
            let sd = var.sqrt();
            // rounding noise on constant samples
            if sd <= 1e-12 * mean.abs() {
                0.0
            } else {
                sd / mean.abs()
            }
        }));
    }
    out
}

/// Running CV over replicate counts with `nmin` for each threshold.
pub fn convergence_cv(metric: &str, samples: &[f64], epsilons: &[f64]) -> Result<ConvergenceReport, AnalyticsError> {
    if samples.len() < 2 {
        return Err(AnalyticsError::TooFewPoints {
            needed: 2,
            got: samples.len(),
        });
    }
    let curve = running_cv(samples);
    let sizes: Vec<usize> = (2..=samples.len()).collect();
    let zero_mean = curve.iter().any(Option::is_none);
    if zero_mean {
        log::warn!("{metric}: zero mean leaves the coefficient of variation undefined");
    }
    Ok(ConvergenceReport {
        metric: metric.to_string(),
        thresholds: epsilons
            .iter()
            .map(|e| Threshold {
                epsilon: *e,
                nmin: nmin_changes(&sizes, &curve, *e),
            })
            .collect(),
        sizes,
        curve,
        zero_mean,
    })
}

/// `KL(p || q)` in nats after smoothing and renormalising both.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions over different supports");
    let zp: f64 = p.iter().map(|v| v + KL_SMOOTHING).sum();
    let zq: f64 = q.iter().map(|v| v + KL_SMOOTHING).sum();
    p.iter()
        .zip(q)
        .map(|(a, b)| {
            let a = (a + KL_SMOOTHING) / zp;
            let b = (b + KL_SMOOTHING) / zq;
            a * (a / b).ln()
        })
        .sum::<f64>()
        .max(0.0)
}

/// Cumulative normalised occupancy after 1, 2, ... replicates.
pub fn prefix_occupancy(per_replicate: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut acc: Vec<f64> = Vec::new();
    per_replicate
        .iter()
        .map(|g| {
            if acc.is_empty() {
                acc = vec![0.0; g.len()];
            }
            acc.iter_mut().zip(g).for_each(|(a, v)| *a += v);
            let total: f64 = acc.iter().sum();
            acc.iter().map(|v| if total > 0.0 { v / total } else { 0.0 }).collect()
        })
        .collect()
}

/// `KL(P_n || P_{n-1})` over successive prefix distributions; `nmin` is the
/// size after which the divergence stays within each threshold.
pub fn convergence_kl(prefixes: &[Vec<f64>], epsilons: &[f64]) -> Result<ConvergenceReport, AnalyticsError> {
    if prefixes.len() < 2 {
        return Err(AnalyticsError::TooFewPoints {
            needed: 2,
            got: prefixes.len(),
        });
    }
    let curve: Vec<Option<f64>> = prefixes.windows(2).map(|w| Some(kl_divergence(&w[1], &w[0]))).collect();
    let sizes: Vec<usize> = (2..=prefixes.len()).collect();
    Ok(ConvergenceReport {
        metric: "kl".into(),
        thresholds: epsilons
            .iter()
            .map(|e| Threshold {
                epsilon: *e,
                nmin: nmin_values(&sizes, &curve, *e),
            })
            .collect(),
        sizes,
        curve,
        zero_mean: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, LogNormal};

    #[test]
    fn constant_output() {
        let r = convergence_cv("c", &[3.5; 50], &DEFAULT_EPSILONS).unwrap();
        assert!(r.curve.iter().all(|c| *c == Some(0.0)));
        assert!(r.thresholds.iter().all(|t| t.nmin == Some(2)));
    }

    #[test]
    fn lognormal_nmin_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = LogNormal::new(0.0, 0.8).unwrap();
        let xs: Vec<f64> = (0..192).map(|_| d.sample(&mut rng)).collect();
        let r = convergence_cv("x", &xs, &DEFAULT_EPSILONS).unwrap();
        let n: Vec<usize> = r.thresholds.iter().map(|t| t.nmin.unwrap()).collect();
        assert!(n.windows(2).all(|w| w[0] <= w[1]), "{n:?}");
        assert!(n[3] > 2);
    }

    #[test]
    fn zero_mean_flagged() {
        let r = convergence_cv("z", &[1.0, -1.0, 2.0], &[0.1]).unwrap();
        assert!(r.zero_mean);
        assert_eq!(r.curve[0], None);
        let all_zero = convergence_cv("z", &[0.0; 4], &[0.1]).unwrap();
        assert_eq!(all_zero.thresholds[0].nmin, None);
        assert!(convergence_cv("z", &[1.0], &[0.1]).is_err());
    }

    #[test]
    fn kl_examples() {
        let kl = kl_divergence(&[0.9, 0.1], &[0.5, 0.5]);
        assert!((kl - 0.368064).abs() < 1e-6, "{kl}");
        assert_eq!(kl_divergence(&[0.2, 0.3, 0.5], &[0.2, 0.3, 0.5]), 0.0);
        assert!(kl_divergence(&[1.0, 0.0], &[0.0, 1.0]).is_finite());
    }

    #[test]
    fn kl_curve_from_occupancy() {
        let reps = vec![vec![1.0, 0.0]; 10];
        let pre = prefix_occupancy(&reps);
        let r = convergence_kl(&pre, &DEFAULT_EPSILONS).unwrap();
        assert!(r.curve.iter().all(|c| c.unwrap() < 1e-12));
        assert!(r.thresholds.iter().all(|t| t.nmin == Some(2)));
    }

    proptest! {
        #[test]
        fn kl_nonnegative(p in prop::collection::vec(0.0f64..1.0, 1..20), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q: Vec<f64> = p.iter().map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            prop_assert!(kl_divergence(&p, &q) >= 0.0);
        }

        #[test]
        fn nmin_monotone_in_epsilon(xs in prop::collection::vec(0.1f64..10.0, 3..60)) {
            let r = convergence_cv("x", &xs, &DEFAULT_EPSILONS).unwrap();
            let n: Vec<usize> = r.thresholds.iter().map(|t| t.nmin.unwrap()).collect();
            prop_assert!(n.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
