use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::{StepDist, StepFamily, TurnDist, TurnFamily};
use super::{CalibrationError, StepSeries};

/// Series shorter than this are rejected by [`fit_hmm`].
pub const MIN_OBSERVATIONS: usize = 50;

/// Two-state HMM. State 0 is encamped, state 1 exploratory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HmmParams {
    pub initial: [f64; 2],
    pub transition: [[f64; 2]; 2],
    pub steps: [StepDist; 2],
    pub turns: [TurnDist; 2],
}

impl HmmParams {
    pub fn ln_emission(&self, state: usize, step: f64, turn: Option<f64>) -> f64 {
        self.steps[state].ln_pdf(step) + turn.map_or(0.0, |t| self.turns[state].ln_pdf(t))
    }

    fn ln_emissions(&self, s: &StepSeries) -> Vec<[f64; 2]> {
        s.steps
            .iter()
            .zip(&s.turns)
            .map(|(x, t)| [self.ln_emission(0, *x, *t), self.ln_emission(1, *x, *t)])
            .collect()
    }

    fn swapped(&self) -> Self {
        let t = self.transition;
        Self {
            initial: [self.initial[1], self.initial[0]],
            transition: [[t[1][1], t[1][0]], [t[0][1], t[0][0]]],
            steps: [self.steps[1], self.steps[0]],
            turns: [self.turns[1], self.turns[0]],
        }
    }

    /// Orders states so that state 1 has the larger mean step.
    pub fn labelled(&self) -> Self {
        if self.steps[0].mean() > self.steps[1].mean() {
            self.swapped()
        } else {
            *self
        }
    }

    /// Stationary distribution of the transition matrix.
    pub fn stationary(&self) -> [f64; 2] {
        let a = self.transition[0][1];
        let b = self.transition[1][0];
        if a + b == 0.0 {
            return self.initial;
        }
        [b / (a + b), a / (a + b)]
    }

    pub fn n_params(&self) -> usize {
        1 + 2 + 2 * self.steps[0].n_params() + 2 * self.turns[0].n_params()
    }

    /// Simulates `n` observations and their hidden states.
    pub fn simulate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> (StepSeries, Vec<usize>) {
        let mut states = Vec::with_capacity(n);
        let mut steps = Vec::with_capacity(n);
        let mut turns = Vec::with_capacity(n);
        let mut s = usize::from(rng.random::<f64>() >= self.initial[0]);
        for i in 0..n {
            if i > 0 {
                s = usize::from(rng.random::<f64>() >= self.transition[s][0]);
            }
            states.push(s);
            steps.push(self.steps[s].sample(rng).max(super::MIN_STEP_KM));
            turns.push((i > 0).then(|| self.turns[s].sample(rng)));
        }
        (StepSeries::new(steps, turns), states)
    }
}

struct Forward {
    alpha: Vec<[f64; 2]>,
    /// Emissions rescaled by their per-step maximum.
    p: Vec<[f64; 2]>,
    c: Vec<f64>,
    ll: f64,
}

fn forward(params: &HmmParams, le: &[[f64; 2]]) -> Forward {
    let g = params.transition;
    let mut alpha = Vec::with_capacity(le.len());
    let mut p = Vec::with_capacity(le.len());
    let mut c = Vec::with_capacity(le.len());
    let mut ll = 0.0;
    for (t, e) in le.iter().enumerate() {
        let m = e[0].max(e[1]);
        let pt = [(e[0] - m).exp(), (e[1] - m).exp()];
        let pred = if t == 0 {
            params.initial
        } else {
            let a: &[f64; 2] = &alpha[t - 1];
            [a[0] * g[0][0] + a[1] * g[1][0], a[0] * g[0][1] + a[1] * g[1][1]]
        };
        let a = [pred[0] * pt[0], pred[1] * pt[1]];
        let ct = a[0] + a[1];
        ll += ct.ln() + m;
        alpha.push(if ct > 0.0 { [a[0] / ct, a[1] / ct] } else { [0.5, 0.5] });
        p.push(pt);
        c.push(ct);
    }
    Forward { alpha, p, c, ll }
}

/// Log-likelihood of each series summed, by the scaled forward recursion.
pub fn log_likelihood(params: &HmmParams, series: &[StepSeries]) -> f64 {
    series.iter().map(|s| forward(params, &params.ln_emissions(s)).ll).sum()
}

/// Log-probability of observations and a given state path.
pub fn path_log_likelihood(params: &HmmParams, series: &StepSeries, path: &[usize]) -> f64 {
    let mut ll = 0.0;
    for (t, s) in path.iter().enumerate() {
        ll += if t == 0 {
            params.initial[*s].ln()
        } else {
            params.transition[path[t - 1]][*s].ln()
        };
        ll += params.ln_emission(*s, series.steps[t], series.turns[t]);
    }
    ll
}

/// Most probable state path.
pub fn viterbi(params: &HmmParams, series: &StepSeries) -> Vec<usize> {
    let le = params.ln_emissions(series);
    if le.is_empty() {
        return Vec::new();
    }
    let lg = params.transition.map(|row| row.map(f64::ln));
    let mut delta = [params.initial[0].ln() + le[0][0], params.initial[1].ln() + le[0][1]];
    let mut back: Vec<[usize; 2]> = Vec::with_capacity(le.len());
    back.push([0, 0]);
    for e in &le[1..] {
        let mut next = [0.0; 2];
        let mut from = [0usize; 2];
        for j in 0..2 {
            let (a, b) = (delta[0] + lg[0][j], delta[1] + lg[1][j]);
            (next[j], from[j]) = if b > a { (b, 1) } else { (a, 0) };
            next[j] += e[j];
        }
        back.push(from);
        delta = next;
    }
    let mut s = usize::from(delta[1] > delta[0]);
    let mut path = vec![0; le.len()];
    for t in (0..le.len()).rev() {
        path[t] = s;
        s = back[t][s];
    }
    path
}

struct Posteriors {
    ll: f64,
    gamma: Vec<[f64; 2]>,
    first: [f64; 2],
    xi: [[f64; 2]; 2],
}

fn e_step(params: &HmmParams, series: &[StepSeries]) -> Posteriors {
    let g = params.transition;
    let mut out = Posteriors {
        ll: 0.0,
        gamma: Vec::new(),
        first: [0.0; 2],
        xi: [[0.0; 2]; 2],
    };
    for s in series {
        let f = forward(params, &params.ln_emissions(s));
        out.ll += f.ll;
        let n = f.alpha.len();
        let mut beta = vec![[1.0, 1.0]; n];
        for t in (0..n.saturating_sub(1)).rev() {
            let (p, b, c) = (f.p[t + 1], beta[t + 1], f.c[t + 1].max(f64::MIN_POSITIVE));
            for i in 0..2 {
                beta[t][i] = (g[i][0] * p[0] * b[0] + g[i][1] * p[1] * b[1]) / c;
            }
            let a = f.alpha[t];
            let mut xi = [[0.0; 2]; 2];
            let mut total = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    xi[i][j] = a[i] * g[i][j] * p[j] * b[j];
                    total += xi[i][j];
                }
            }
            if total > 0.0 {
                for i in 0..2 {
                    for j in 0..2 {
                        out.xi[i][j] += xi[i][j] / total;
                    }
                }
            }
        }
        for t in 0..n {
            let raw = [f.alpha[t][0] * beta[t][0], f.alpha[t][1] * beta[t][1]];
            let z = raw[0] + raw[1];
            let gt = if z > 0.0 { [raw[0] / z, raw[1] / z] } else { [0.5, 0.5] };
            if t == 0 {
                out.first[0] += gt[0];
                out.first[1] += gt[1];
            }
            out.gamma.push(gt);
        }
    }
    out
}

fn weighted_step_ll(d: &StepDist, xs: &[f64], ws: &[f64]) -> f64 {
    xs.iter().zip(ws).map(|(x, w)| w * d.ln_pdf(*x)).sum()
}

fn m_step(params: &HmmParams, series: &[StepSeries], post: &Posteriors) -> HmmParams {
    let mut next = *params;
    let k = series.len() as f64;
    next.initial = [post.first[0] / k, post.first[1] / k];
    for i in 0..2 {
        let row = post.xi[i][0] + post.xi[i][1];
        if row > 0.0 {
            next.transition[i] = [post.xi[i][0] / row, post.xi[i][1] / row];
        }
    }
    let steps: Vec<f64> = series.iter().flat_map(|s| s.steps.iter().copied()).collect();
    let turns: Vec<Option<f64>> = series.iter().flat_map(|s| s.turns.iter().copied()).collect();
    for s in 0..2 {
        let ws: Vec<f64> = post.gamma.iter().map(|g| g[s]).collect();
        if let Ok(fit) = StepDist::fit_weighted(params.steps[s].family(), &steps, &ws) {
            if weighted_step_ll(&fit, &steps, &ws) >= weighted_step_ll(&params.steps[s], &steps, &ws) {
                next.steps[s] = fit;
            }
        }
        let (ts, tw): (Vec<f64>, Vec<f64>) = turns.iter().zip(&ws).filter_map(|(t, w)| t.map(|t| (t, *w))).unzip();
        if let Ok(fit) = TurnDist::refit_monotone(&params.turns[s], &ts, &tw) {
            next.turns[s] = fit;
        }
    }
    next
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HmmOptions {
    pub starts: usize,
    pub max_iter: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for HmmOptions {
    fn default() -> Self {
        Self {
            starts: 5,
            max_iter: 500,
            tolerance: 1e-6,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HmmFit {
    pub step_family: StepFamily,
    pub turn_family: TurnFamily,
    pub params: HmmParams,
    pub log_likelihood: f64,
    pub n_params: usize,
    pub aic: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood after each E-step of the winning start.
    pub trace: Vec<f64>,
}

/// Runs EM from `init` until the log-likelihood gain drops below the
/// tolerance or the iteration cap is hit.
pub fn em(init: &HmmParams, series: &[StepSeries], opts: &HmmOptions) -> (HmmParams, Vec<f64>, bool) {
    let mut params = *init;
    let mut trace = Vec::new();
    for _ in 0..opts.max_iter {
        let post = e_step(&params, series);
        if let Some(prev) = trace.last() {
            if (post.ll - prev).abs() < opts.tolerance {
                trace.push(post.ll);
                return (params, trace, true);
            }
        }
        trace.push(post.ll);
        params = m_step(&params, series, &post);
    }
    let ll = log_likelihood(&params, series);
    trace.push(ll);
    (params, trace, false)
}

/// Two-means threshold on log step length.
fn kmeans_threshold(steps: &[f64]) -> f64 {
    let mut logs: Vec<f64> = steps.iter().map(|x| x.ln()).collect();
    logs.sort_by(f64::total_cmp);
    let q = |p: f64| logs[((logs.len() - 1) as f64 * p) as usize];
    let (mut lo, mut hi) = (q(0.25), q(0.75));
    for _ in 0..100 {
        let cut = 0.5 * (lo + hi);
        let split = logs.partition_point(|v| *v <= cut);
        if split == 0 || split == logs.len() {
            break;
        }
        let nl = logs[..split].iter().sum::<f64>() / split as f64;
        let nh = logs[split..].iter().sum::<f64>() / (logs.len() - split) as f64;
        if nl == lo && nh == hi {
            break;
        }
        (lo, hi) = (nl, nh);
    }
    (0.5 * (lo + hi)).exp()
}

fn initial_params(
    series: &[StepSeries],
    sf: StepFamily,
    tf: TurnFamily,
    threshold: f64,
    stay: [f64; 2],
) -> Result<HmmParams, CalibrationError> {
    let steps: Vec<f64> = series.iter().flat_map(|s| s.steps.iter().copied()).collect();
    let turns: Vec<Option<f64>> = series.iter().flat_map(|s| s.turns.iter().copied()).collect();
    let fit_state = |high: bool| -> Result<(StepDist, TurnDist), CalibrationError> {
        let ws: Vec<f64> = steps
            .iter()
            .map(|x| f64::from(u8::from((*x > threshold) == high)))
            .collect();
        let step = StepDist::fit_weighted(sf, &steps, &ws)?;
        let (ts, tw): (Vec<f64>, Vec<f64>) = turns.iter().zip(&ws).filter_map(|(t, w)| t.map(|t| (t, *w))).unzip();
        let turn = TurnDist::fit_weighted(tf, &ts, &tw).unwrap_or(match tf {
            TurnFamily::VonMises => TurnDist::VonMises { mean: 0.0, kappa: 0.5 },
            TurnFamily::WrappedCauchy => TurnDist::WrappedCauchy { mean: 0.0, rho: 0.3 },
        });
        Ok((step, turn))
    };
    let (s0, t0) = fit_state(false)?;
    let (s1, t1) = fit_state(true)?;
    Ok(HmmParams {
        initial: [0.5, 0.5],
        transition: [[stay[0], 1.0 - stay[0]], [1.0 - stay[1], stay[1]]],
        steps: [s0, s1],
        turns: [t0, t1],
    })
}

fn check_series(series: &[StepSeries]) -> Result<(), CalibrationError> {
    let n: usize = series.iter().map(StepSeries::len).sum();
    if n < MIN_OBSERVATIONS {
        return Err(CalibrationError::TooShort(n));
    }
    let steps = series.iter().flat_map(|s| s.steps.iter());
    let (lo, hi) = steps.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(*x), hi.max(*x)));
    if hi <= super::MIN_STEP_KM || hi <= lo {
        return Err(CalibrationError::Degenerate(
            "all step lengths are equal or zero".into(),
        ));
    }
    Ok(())
}

/// Multi-start EM fit of one step/turn family combination.
pub fn fit_hmm(
    series: &[StepSeries],
    step_family: StepFamily,
    turn_family: TurnFamily,
    opts: &HmmOptions,
) -> Result<HmmFit, CalibrationError> {
    check_series(series)?;
    let steps: Vec<f64> = series.iter().flat_map(|s| s.steps.iter().copied()).collect();
    let mut sorted = steps.clone();
    sorted.sort_by(f64::total_cmp);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut inits = Vec::with_capacity(opts.starts.max(1));
    inits.push((kmeans_threshold(&steps), [0.9, 0.9]));
    for _ in 1..opts.starts.max(1) {
        let q = rng.random_range(0.2..0.8);
        let cut = sorted[((sorted.len() - 1) as f64 * q) as usize];
        inits.push((cut, [rng.random_range(0.6..0.97), rng.random_range(0.6..0.97)]));
    }
    let runs: Vec<_> = inits
        .par_iter()
        .filter_map(|(cut, stay)| initial_params(series, step_family, turn_family, *cut, *stay).ok())
        .map(|init| em(&init, series, opts))
        .collect();
    let (params, trace, converged) = runs
        .into_iter()
        .filter(|r| r.1.last().is_some_and(|ll| ll.is_finite()))
        .max_by(|a, b| a.1.last().unwrap().total_cmp(b.1.last().unwrap()))
        .ok_or_else(|| CalibrationError::Degenerate("no start produced a finite likelihood".into()))?;
    if !converged {
        log::warn!(
            "{step_family:?}/{turn_family:?} fit did not converge in {} iterations",
            opts.max_iter
        );
    }
    let params = params.labelled();
    let log_likelihood = *trace.last().unwrap();
    let n_params = params.n_params();
    Ok(HmmFit {
        step_family,
        turn_family,
        params,
        log_likelihood,
        n_params,
        aic: 2.0 * n_params as f64 - 2.0 * log_likelihood,
        iterations: trace.len(),
        converged,
        trace,
    })
}

/// Fits every step/turn family combination, best AIC first.
pub fn fit_all_families(series: &[StepSeries], opts: &HmmOptions) -> Result<Vec<HmmFit>, CalibrationError> {
    check_series(series)?;
    let combos: Vec<_> = StepFamily::ALL
        .iter()
        .flat_map(|s| TurnFamily::ALL.iter().map(move |t| (*s, *t)))
        .collect();
    let mut fits = combos
        .par_iter()
        .map(|(s, t)| fit_hmm(series, *s, *t, opts))
        .collect::<Result<Vec<_>, _>>()?;
    fits.sort_by(|a, b| a.aic.total_cmp(&b.aic));
    Ok(fits)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn table_params() -> HmmParams {
        HmmParams {
            initial: [0.5, 0.5],
            transition: [[0.8775, 0.1225], [0.0904, 0.9096]],
            steps: [
                StepDist::gamma_from_moments(0.0040, 0.0034),
                StepDist::gamma_from_moments(0.0398, 0.0378),
            ],
            turns: [
                TurnDist::VonMises {
                    mean: -3.0232,
                    kappa: 0.3336,
                },
                TurnDist::VonMises {
                    mean: -0.0366,
                    kappa: 1.5202,
                },
            ],
        }
    }

    fn brute_force(params: &HmmParams, s: &StepSeries) -> f64 {
        let n = s.len();
        let mut total = 0.0;
        for code in 0..(1usize << n) {
            let path: Vec<usize> = (0..n).map(|i| (code >> i) & 1).collect();
            total += path_log_likelihood(params, s, &path).exp();
        }
        total.ln()
    }

    #[test]
    fn forward_equals_path_sum() {
        let p = table_params();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=10 {
            let (s, _) = p.simulate(n, &mut rng);
            let f = log_likelihood(&p, std::slice::from_ref(&s));
            let b = brute_force(&p, &s);
            assert!(((f - b) / b).abs() < 1e-10, "n={n}: {f} vs {b}");
        }
    }

    #[test]
    fn viterbi_beats_random_paths() {
        let p = table_params();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (s, _) = p.simulate(200, &mut rng);
        let best = viterbi(&p, &s);
        let lbest = path_log_likelihood(&p, &s, &best);
        for _ in 0..100 {
            let path: Vec<usize> = (0..s.len()).map(|_| rng.random_range(0..2)).collect();
            assert!(path_log_likelihood(&p, &s, &path) <= lbest);
        }
    }

    #[test]
    fn viterbi_is_exact_on_short_series() {
        let p = table_params();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=8 {
            let (s, _) = p.simulate(n, &mut rng);
            let best = path_log_likelihood(&p, &s, &viterbi(&p, &s));
            let max = (0..(1usize << n))
                .map(|c| path_log_likelihood(&p, &s, &(0..n).map(|i| (c >> i) & 1).collect::<Vec<_>>()))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((best - max).abs() < 1e-9);
        }
    }

    #[test]
    fn single_observation_path() {
        let p = table_params();
        let s = StepSeries::new(vec![0.05], vec![None]);
        let expect = usize::from(
            p.initial[1].ln() + p.ln_emission(1, 0.05, None) > p.initial[0].ln() + p.ln_emission(0, 0.05, None),
        );
        assert_eq!(viterbi(&p, &s), vec![expect]);
        assert_eq!(expect, 1);
    }

    #[test]
    fn encamped_only_decodes_encamped() {
        let mut p = table_params();
        p.steps[1] = StepDist::gamma_from_moments(0.4, 0.1);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let steps: Vec<f64> = (0..300).map(|_| p.steps[0].sample(&mut rng)).collect();
        let turns: Vec<Option<f64>> = (0..300).map(|i| (i > 0).then(|| p.turns[0].sample(&mut rng))).collect();
        let path = viterbi(&p, &StepSeries::new(steps, turns));
        assert!(path.iter().all(|s| *s == 0));
    }

    #[test]
    fn block_boundaries_recovered() {
        let p = table_params();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let truth: Vec<usize> = (0..400).map(|i| (i / 100) % 2).collect();
        let steps: Vec<f64> = truth.iter().map(|s| p.steps[*s].sample(&mut rng)).collect();
        let turns: Vec<Option<f64>> = truth
            .iter()
            .enumerate()
            .map(|(i, s)| (i > 0).then(|| p.turns[*s].sample(&mut rng)))
            .collect();
        let path = viterbi(&p, &StepSeries::new(steps, turns));
        for b in [100, 200, 300] {
            let found = (1..path.len())
                .filter(|i| path[*i] != path[i - 1])
                .min_by_key(|i| i.abs_diff(b))
                .unwrap();
            assert!(found.abs_diff(b) <= 2, "boundary {b} found at {found}");
        }
    }

    #[test]
    fn em_is_monotone_and_recovers() {
        let truth = table_params();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (s, _) = truth.simulate(2000, &mut rng);
        let data = [s];
        let fit = fit_hmm(&data, StepFamily::Gamma, TurnFamily::VonMises, &HmmOptions::default()).unwrap();
        for w in fit.trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-7, "{} -> {}", w[0], w[1]);
        }
        assert!((fit.params.transition[0][0] - 0.8775).abs() < 0.06);
        assert!((fit.params.steps[1].mean() - 0.0398).abs() < 0.006);
        assert!((fit.aic - (2.0 * 11.0 - 2.0 * fit.log_likelihood)).abs() < 1e-9);
        let decoded = viterbi(&fit.params, &data[0]);
        let frac = decoded.iter().filter(|s| **s == 1).count() as f64 / decoded.len() as f64;
        assert!((frac - fit.params.stationary()[1]).abs() < 0.1, "{frac}");
    }

    #[test]
    fn richer_family_fits_at_least_as_well() {
        let truth = table_params();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (s, _) = truth.simulate(1000, &mut rng);
        let data = [s];
        let opts = HmmOptions::default();
        let gamma = fit_hmm(&data, StepFamily::Gamma, TurnFamily::VonMises, &opts).unwrap();
        let expo = fit_hmm(&data, StepFamily::Exponential, TurnFamily::VonMises, &opts).unwrap();
        let weib = fit_hmm(&data, StepFamily::Weibull, TurnFamily::VonMises, &opts).unwrap();
        assert!(gamma.log_likelihood >= expo.log_likelihood - 1e-6);
        assert!(weib.log_likelihood >= expo.log_likelihood - 1e-6);
    }

    #[test]
    fn rejects_short_and_degenerate() {
        let short = StepSeries::new(vec![0.1; 10], vec![None; 10]);
        assert!(matches!(
            fit_hmm(
                &[short],
                StepFamily::Gamma,
                TurnFamily::VonMises,
                &HmmOptions::default()
            ),
            Err(CalibrationError::TooShort(10))
        ));
        let flat = StepSeries::new(vec![super::super::MIN_STEP_KM; 80], vec![None; 80]);
        assert!(matches!(
            fit_hmm(&[flat], StepFamily::Gamma, TurnFamily::VonMises, &HmmOptions::default()),
            Err(CalibrationError::Degenerate(_))
        ));
    }
}
