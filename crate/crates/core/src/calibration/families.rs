use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use super::optim::{log_bisect, nelder_mead};
use super::special::{inverse_bessel_ratio, ln_bessel_i0};
use super::CalibrationError;
use crate::agent::{wrap_angle, VonMises};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepFamily {
    Gamma,
    Exponential,
    Weibull,
}

impl StepFamily {
    pub const ALL: [StepFamily; 3] = [StepFamily::Gamma, StepFamily::Exponential, StepFamily::Weibull];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnFamily {
    VonMises,
    WrappedCauchy,
}

impl TurnFamily {
    pub const ALL: [TurnFamily; 2] = [TurnFamily::VonMises, TurnFamily::WrappedCauchy];
}

/// Step-length distribution (km).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StepDist {
    Gamma { shape: f64, scale: f64 },
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
}

/// Turning-angle distribution (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TurnDist {
    VonMises { mean: f64, kappa: f64 },
    WrappedCauchy { mean: f64, rho: f64 },
}

struct Weighted<'a> {
    xs: &'a [f64],
    ws: &'a [f64],
    total: f64,
}

impl<'a> Weighted<'a> {
    fn new(xs: &'a [f64], ws: &'a [f64]) -> Result<Self, CalibrationError> {
        let total: f64 = ws.iter().sum();
        if xs.len() != ws.len() || !(total > 0.0) {
            return Err(CalibrationError::Degenerate("no weight on any observation".into()));
        }
        Ok(Self { xs, ws, total })
    }

    fn mean_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.xs.iter().zip(self.ws).map(|(x, w)| w * f(*x)).sum::<f64>() / self.total
    }
}

impl StepDist {
    pub fn family(&self) -> StepFamily {
        match self {
            StepDist::Gamma { .. } => StepFamily::Gamma,
            StepDist::Exponential { .. } => StepFamily::Exponential,
            StepDist::Weibull { .. } => StepFamily::Weibull,
        }
    }

    pub fn gamma_from_moments(mean: f64, sd: f64) -> Self {
        StepDist::Gamma {
            shape: (mean / sd).powi(2),
            scale: sd * sd / mean,
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            StepDist::Exponential { .. } => 1,
            _ => 2,
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match *self {
            StepDist::Gamma { shape, scale } => {
                (shape - 1.0) * x.ln() - x / scale - ln_gamma(shape) - shape * scale.ln()
            }
            StepDist::Exponential { rate } => rate.ln() - rate * x,
            StepDist::Weibull { shape, scale } => {
                let z = x / scale;
                shape.ln() - scale.ln() + (shape - 1.0) * z.ln() - z.powf(shape)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            StepDist::Gamma { shape, scale } => shape * scale,
            StepDist::Exponential { rate } => 1.0 / rate,
            StepDist::Weibull { shape, scale } => scale * ln_gamma(1.0 + 1.0 / shape).exp(),
        }
    }

    pub fn sd(&self) -> f64 {
        match *self {
            StepDist::Gamma { shape, scale } => shape.sqrt() * scale,
            StepDist::Exponential { rate } => 1.0 / rate,
            StepDist::Weibull { shape, scale } => {
                let g1 = ln_gamma(1.0 + 1.0 / shape).exp();
                let g2 = ln_gamma(1.0 + 2.0 / shape).exp();
                scale * (g2 - g1 * g1).max(0.0).sqrt()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            StepDist::Gamma { shape, scale } => Gamma::new(shape, scale).expect("valid gamma").sample(rng),
            StepDist::Exponential { rate } => -(1.0 - rng.random::<f64>()).ln() / rate,
            StepDist::Weibull { shape, scale } => scale * (-(1.0 - rng.random::<f64>()).ln()).powf(1.0 / shape),
        }
    }

    /// Weighted maximum-likelihood fit. Observations must be positive.
    pub fn fit_weighted(family: StepFamily, xs: &[f64], ws: &[f64]) -> Result<Self, CalibrationError> {
        let d = Weighted::new(xs, ws)?;
        if xs.iter().any(|x| !(*x > 0.0)) {
            return Err(CalibrationError::Degenerate("step lengths must be positive".into()));
        }
        let mean = d.mean_of(|x| x);
        Ok(match family {
            StepFamily::Exponential => StepDist::Exponential { rate: 1.0 / mean },
            StepFamily::Gamma => {
                let s = mean.ln() - d.mean_of(f64::ln);
                if !(s > 1e-12) {
                    return Err(CalibrationError::Degenerate("all weighted steps are equal".into()));
                }
                let shape = log_bisect(|k| k.ln() - digamma(k) - s, 1e-8, 1e10, false);
                StepDist::Gamma {
                    shape,
                    scale: mean / shape,
                }
            }
            StepFamily::Weibull => {
                let xmax = xs.iter().cloned().fold(0.0, f64::max);
                let mean_ln = d.mean_of(|x| (x / xmax).ln());
                if d.mean_of(|x| ((x / xmax).ln() - mean_ln).powi(2)) < 1e-24 {
                    return Err(CalibrationError::Degenerate("all weighted steps are equal".into()));
                }
                let g = |k: f64| {
                    let a = d.mean_of(|x| (x / xmax).powf(k) * (x / xmax).ln());
                    let b = d.mean_of(|x| (x / xmax).powf(k));
                    a / b - 1.0 / k - mean_ln
                };
                let shape = log_bisect(g, 1e-4, 1e4, true);
                let scale = xmax * d.mean_of(|x| (x / xmax).powf(shape)).powf(1.0 / shape);
                StepDist::Weibull { shape, scale }
            }
        })
    }
}

impl TurnDist {
    pub fn family(&self) -> TurnFamily {
        match self {
            TurnDist::VonMises { .. } => TurnFamily::VonMises,
            TurnDist::WrappedCauchy { .. } => TurnFamily::WrappedCauchy,
        }
    }

    pub fn n_params(&self) -> usize {
        2
    }

    pub fn mean(&self) -> f64 {
        match *self {
            TurnDist::VonMises { mean, .. } | TurnDist::WrappedCauchy { mean, .. } => mean,
        }
    }

    /// Concentration: kappa for von Mises, rho for wrapped Cauchy.
    pub fn concentration(&self) -> f64 {
        match *self {
            TurnDist::VonMises { kappa, .. } => kappa,
            TurnDist::WrappedCauchy { rho, .. } => rho,
        }
    }

    pub fn ln_pdf(&self, theta: f64) -> f64 {
        match *self {
            TurnDist::VonMises { mean, kappa } => kappa * (theta - mean).cos() - TAU.ln() - ln_bessel_i0(kappa),
            TurnDist::WrappedCauchy { mean, rho } => {
                ((1.0 - rho * rho) / (TAU * (1.0 + rho * rho - 2.0 * rho * (theta - mean).cos()))).ln()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            TurnDist::VonMises { mean, kappa } => VonMises::new(mean, kappa).sample(rng),
            TurnDist::WrappedCauchy { mean, rho } => {
                let u: f64 = rng.random();
                wrap_angle(mean + 2.0 * (((1.0 - rho) / (1.0 + rho)) * (PI * (u - 0.5)).tan()).atan())
            }
        }
    }

    fn weighted_ll(&self, d: &Weighted) -> f64 {
        d.mean_of(|t| self.ln_pdf(t))
    }

    /// Weighted maximum-likelihood fit.
    pub fn fit_weighted(family: TurnFamily, xs: &[f64], ws: &[f64]) -> Result<Self, CalibrationError> {
        Self::fit_weighted_from(family, xs, ws, None)
    }

    /// As [`TurnDist::fit_weighted`]; numerical fits start from `start` when given.
    pub fn fit_weighted_from(
        family: TurnFamily,
        xs: &[f64],
        ws: &[f64],
        start: Option<&TurnDist>,
    ) -> Result<Self, CalibrationError> {
        let d = Weighted::new(xs, ws)?;
        let c = d.mean_of(f64::cos);
        let s = d.mean_of(f64::sin);
        let mean = s.atan2(c);
        let r = (c * c + s * s).sqrt().min(1.0 - 1e-12);
        Ok(match family {
            TurnFamily::VonMises => TurnDist::VonMises {
                mean,
                kappa: inverse_bessel_ratio(r),
            },
            TurnFamily::WrappedCauchy => {
                // rho = tanh(v) keeps the search unconstrained
                let at = |v: &[f64]| TurnDist::WrappedCauchy {
                    mean: wrap_angle(v[0]),
                    rho: v[1].tanh().abs().min(1.0 - 1e-12),
                };
                let start = match start {
                    Some(TurnDist::WrappedCauchy { mean, rho }) => [*mean, rho.max(1e-3).atanh()],
                    _ => [mean, r.max(1e-3).atanh()],
                };
                let (best, _) = nelder_mead(|v| -at(v).weighted_ll(&d), &start, 0.1, 1000);
                at(&best)
            }
        })
    }

    /// Refit, keeping `previous` if the new fit does not improve the weighted likelihood.
    pub(crate) fn refit_monotone(previous: &TurnDist, xs: &[f64], ws: &[f64]) -> Result<Self, CalibrationError> {
        let next = Self::fit_weighted_from(previous.family(), xs, ws, Some(previous))?;
        let d = Weighted::new(xs, ws)?;
        Ok(if next.weighted_ll(&d) >= previous.weighted_ll(&d) {
            next
        } else {
            *previous
        })
    }
}
