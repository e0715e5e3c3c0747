use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::MovementDistributions;

/// Wraps an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Compass bearing (clockwise from north) from one point to another.
pub fn bearing(from: (f64, f64), to: (f64, f64)) -> f64 {
    (to.0 - from.0).atan2(to.1 - from.1)
}

/// Displacement of a step of `length` along compass `heading`.
pub fn displacement(length: f64, heading: f64) -> (f64, f64) {
    (length * heading.sin(), length * heading.cos())
}

/// Von Mises draw by the Best-Fisher rejection scheme.
#[derive(Debug, Clone, Copy)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    r: f64,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Self {
        let r = if kappa > 1e-8 {
            let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
            let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
            (1.0 + rho * rho) / (2.0 * rho)
        } else {
            f64::INFINITY
        };
        Self { mu, kappa, r }
    }
}

impl Distribution<f64> for VonMises {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if !self.r.is_finite() {
            return wrap_angle(self.mu + rng.random_range(-PI..PI));
        }
        loop {
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            let u3: f64 = rng.random();
            let z = (PI * u1).cos();
            let f = (1.0 + self.r * z) / (self.r + z);
            let c = self.kappa * (self.r - f);
            if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
                let theta = f.clamp(-1.0, 1.0).acos();
                let theta = if u3 > 0.5 { theta } else { -theta };
                return wrap_angle(self.mu + theta);
            }
        }
    }
}

/// Step and heading sampler for both movement regimes, built once from the
/// fitted distributions. Lengths come out in metres.
#[derive(Debug, Clone)]
pub struct StepSampler {
    encamped: Gamma<f64>,
    exploratory: Gamma<f64>,
    turning: VonMises,
    noise: f64,
}

impl StepSampler {
    pub fn new(m: &MovementDistributions) -> Self {
        Self {
            encamped: m.encamped_step(),
            exploratory: m.exploratory_step(),
            turning: VonMises::new(m.encamped_turn_mean, m.encamped_turn_kappa),
            noise: m.heading_noise_deg.to_radians(),
        }
    }

    /// Encamped step: gamma length and a von Mises turn added to the
    /// previous heading. Returns `(length_m, new_heading)`.
    pub fn encamped<R: Rng + ?Sized>(&self, prev_heading: f64, rng: &mut R) -> (f64, f64) {
        let length = self.encamped.sample(rng) * 1000.0;
        let turn = self.turning.sample(rng);
        (length, wrap_angle(prev_heading + turn))
    }

    /// Exploratory step: gamma length and a heading aimed at `target` plus
    /// uniform noise. Returns `(length_m, heading)`.
    pub fn exploratory<R: Rng + ?Sized>(&self, from: (f64, f64), target: (f64, f64), rng: &mut R) -> (f64, f64) {
        let length = self.exploratory.sample(rng) * 1000.0;
        let noise = if self.noise > 0.0 {
            rng.random_range(-self.noise..=self.noise)
        } else {
            0.0
        };
        (length, wrap_angle(bearing(from, target) + noise))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn circular_mean(xs: &[f64]) -> (f64, f64) {
        let (s, c) = xs.iter().fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
        let n = xs.len() as f64;
        (s.atan2(c), (s * s + c * c).sqrt() / n)
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert_eq!(wrap_angle(0.25), 0.25);
    }

    #[test]
    fn bearing_is_compass() {
        assert!((bearing((0.0, 0.0), (0.0, 10.0))).abs() < 1e-12);
        assert!((bearing((0.0, 0.0), (10.0, 0.0)) - PI / 2.0).abs() < 1e-12);
        let (dx, dy) = displacement(5.0, 0.0);
        assert_eq!((dx, dy), (0.0, 5.0));
    }

    #[test]
    fn von_mises_moments() {
        // mean resultant length of a von Mises is I1(k)/I0(k)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (mu, kappa, rbar) in [(-3.0232, 0.3336, 0.16456), (0.5, 2.0, 0.69777), (1.0, 10.0, 0.94860)] {
            let vm = VonMises::new(mu, kappa);
            let xs: Vec<f64> = (0..100_000).map(|_| vm.sample(&mut rng)).collect();
            assert!(xs.iter().all(|x| *x > -PI - 1e-12 && *x <= PI));
            let (m, r) = circular_mean(&xs);
            assert!(wrap_angle(m - mu).abs() < 0.05, "mean {m} vs {mu}");
            assert!((r - rbar).abs() < 0.01, "R {r} vs {rbar}");
        }
    }

    #[test]
    fn encamped_sample_means() {
        let m = MovementDistributions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = StepSampler::new(&m);
        let n = 10_000;
        let mut lens = Vec::with_capacity(n);
        let mut turns = Vec::with_capacity(n);
        for _ in 0..n {
            let (l, h) = s.encamped(0.0, &mut rng);
            lens.push(l / 1000.0);
            turns.push(h);
        }
        let mean = lens.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.0040).abs() < 0.0005, "{mean}");
        let (cm, _) = circular_mean(&turns);
        assert!(wrap_angle(cm + 3.0232).abs() < 0.2, "{cm}");
    }

    #[test]
    fn exploratory_mean_and_geometry() {
        let m = MovementDistributions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = StepSampler::new(&m);
        let n = 10_000;
        let mean = (0..n)
            .map(|_| s.exploratory((0.0, 0.0), (100.0, 100.0), &mut rng).0 / 1000.0)
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.0398).abs() < 0.002, "{mean}");

        let quiet = MovementDistributions {
            heading_noise_deg: 0.0,
            ..Default::default()
        };
        let (len, h) = StepSampler::new(&quiet).exploratory((5.0, 5.0), (5.0, 500.0), &mut rng);
        let (dx, dy) = displacement(len, h);
        assert_eq!(dx, 0.0);
        assert!(dy > 0.0);
    }

    #[test]
    fn noise_stays_within_fifteen_degrees() {
        let m = MovementDistributions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = StepSampler::new(&m);
        for _ in 0..5000 {
            let (_, h) = s.exploratory((0.0, 0.0), (1.0, 1.0), &mut rng);
            assert!(wrap_angle(h - PI / 4.0).abs() <= 15f64.to_radians() + 1e-12);
        }
    }

    #[test]
    fn same_seed_same_steps() {
        let m = MovementDistributions::default();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = StepSampler::new(&m);
            (0..50).map(|_| s.encamped(0.3, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
    }
}
