use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CalibrationError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NsgaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub eta_crossover: f64,
    pub eta_mutation: f64,
    /// Per-variable mutation probability; one over the variable count when absent.
    pub mutation_probability: Option<f64>,
    pub seed: u64,
}

impl Default for NsgaConfig {
    fn default() -> Self {
        Self {
            population: 50,
            generations: 100,
            crossover_probability: 0.9,
            eta_crossover: 15.0,
            eta_mutation: 20.0,
            mutation_probability: None,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront {
    pub members: Vec<Individual>,
    pub generations: usize,
    pub evaluations: usize,
}

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Fronts of indices, best first.
pub fn fast_nondominated_sort(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = vec![Vec::new()];
    for p in 0..n {
        for q in 0..n {
            if dominates(&objs[p], &objs[q]) {
                dominated_by[p].push(q);
            } else if dominates(&objs[q], &objs[p]) {
                count[p] += 1;
            }
        }
        if count[p] == 0 {
            fronts[0].push(p);
        }
    }
    let mut i = 0;
    while !fronts[i].is_empty() {
        let mut next = Vec::new();
        for p in &fronts[i] {
            for q in &dominated_by[*p] {
                count[*q] -= 1;
                if count[*q] == 0 {
                    next.push(*q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        i += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of each member of `front`, in the same order.
pub fn crowding_distance(objs: &[Vec<f64>], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n == 0 {
        return dist;
    }
    for m in 0..objs[front[0]].len() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| objs[front[*a]][m].total_cmp(&objs[front[*b]][m]));
        let lo = objs[front[order[0]]][m];
        let hi = objs[front[order[n - 1]]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for k in 1..n.saturating_sub(1) {
                let gap = objs[front[order[k + 1]]][m] - objs[front[order[k - 1]]][m];
                dist[order[k]] += gap / (hi - lo);
            }
        }
    }
    dist
}

fn sbx(p1: f64, p2: f64, lo: f64, hi: f64, eta: f64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    if rng.random::<f64>() > 0.5 || (p1 - p2).abs() <= 1e-14 {
        return (p1, p2);
    }
    let (y1, y2) = (p1.min(p2), p1.max(p2));
    let u: f64 = rng.random();
    let spread = |beta: f64| {
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        if u <= 1.0 / alpha {
            (u * alpha).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
        }
    };
    let b1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
    let b2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
    let c1 = (0.5 * ((y1 + y2) - b1 * (y2 - y1))).clamp(lo, hi);
    let c2 = (0.5 * ((y1 + y2) + b2 * (y2 - y1))).clamp(lo, hi);
    if rng.random::<bool>() {
        (c2, c1)
    } else {
        (c1, c2)
    }
}

fn polynomial_mutation(y: f64, lo: f64, hi: f64, eta: f64, rng: &mut ChaCha8Rng) -> f64 {
    let (d1, d2) = ((y - lo) / (hi - lo), (hi - y) / (hi - lo));
    let u: f64 = rng.random();
    let pow = 1.0 / (eta + 1.0);
    let dq = if u < 0.5 {
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0)).powf(pow) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0)).powf(pow)
    };
    (y + dq * (hi - lo)).clamp(lo, hi)
}

struct Ranked {
    rank: Vec<usize>,
    crowd: Vec<f64>,
}

fn rank(objs: &[Vec<f64>]) -> (Vec<Vec<usize>>, Ranked) {
    let fronts = fast_nondominated_sort(objs);
    let mut r = Ranked {
        rank: vec![0; objs.len()],
        crowd: vec![0.0; objs.len()],
    };
    for (k, f) in fronts.iter().enumerate() {
        for (i, d) in f.iter().zip(crowding_distance(objs, f)) {
            r.rank[*i] = k;
            r.crowd[*i] = d;
        }
    }
    (fronts, r)
}

fn better(r: &Ranked, a: usize, b: usize) -> bool {
    r.rank[a] < r.rank[b] || (r.rank[a] == r.rank[b] && r.crowd[a] > r.crowd[b])
}

fn evaluate_all<F>(xs: &[Vec<f64>], evaluate: &F) -> Result<Vec<Vec<f64>>, CalibrationError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, String> + Sync,
{
    xs.par_iter()
        .map(|x| {
            evaluate(x).map_err(|message| CalibrationError::Evaluation {
                vector: x.clone(),
                message,
            })
        })
        .collect()
}

/// Elitist non-dominated sorting GA minimising every objective. Returns the
/// first front of the final population.
pub fn nsga2<F>(evaluate: F, bounds: &[(f64, f64)], config: &NsgaConfig) -> Result<ParetoFront, CalibrationError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, String> + Sync,
{
    if bounds.is_empty()
        || bounds
            .iter()
            .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
    {
        return Err(CalibrationError::InvalidConfig(
            "bounds must be finite with lower < upper".into(),
        ));
    }
    let n = config.population.max(4).div_ceil(2) * 2;
    let pm = config.mutation_probability.unwrap_or(1.0 / bounds.len() as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pop: Vec<Vec<f64>> = (0..n)
        .map(|_| bounds.iter().map(|(lo, hi)| rng.random_range(*lo..=*hi)).collect())
        .collect();
    let mut objs = evaluate_all(&pop, &evaluate)?;
    if objs.iter().any(|o| o.len() < 2 || o.len() != objs[0].len()) {
        return Err(CalibrationError::InvalidConfig(
            "need at least two objectives of a fixed count".into(),
        ));
    }
    let mut evaluations = n;
    for _ in 0..config.generations {
        let (_, ranked) = rank(&objs);
        let pick = |rng: &mut ChaCha8Rng| {
            let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
            if better(&ranked, b, a) {
                b
            } else {
                a
            }
        };
        let mut children: Vec<Vec<f64>> = Vec::with_capacity(n);
        while children.len() < n {
            let (a, b) = (pick(&mut rng), pick(&mut rng));
            let (mut c1, mut c2) = (pop[a].clone(), pop[b].clone());
            if rng.random::<f64>() < config.crossover_probability {
                for (j, (lo, hi)) in bounds.iter().enumerate() {
                    (c1[j], c2[j]) = sbx(c1[j], c2[j], *lo, *hi, config.eta_crossover, &mut rng);
                }
            }
            for c in [&mut c1, &mut c2] {
                for (j, (lo, hi)) in bounds.iter().enumerate() {
                    if rng.random::<f64>() < pm {
                        c[j] = polynomial_mutation(c[j], *lo, *hi, config.eta_mutation, &mut rng);
                    }
                }
            }
            children.push(c1);
            children.push(c2);
        }
        let child_objs = evaluate_all(&children, &evaluate)?;
        evaluations += children.len();
        pop.extend(children);
        objs.extend(child_objs);

        let (fronts, ranked) = rank(&objs);
        let mut keep: Vec<usize> = Vec::with_capacity(n);
        for f in fronts {
            if keep.len() + f.len() <= n {
                keep.extend(f);
            } else {
                let mut f = f;
                f.sort_by(|a, b| ranked.crowd[*b].total_cmp(&ranked.crowd[*a]).then(a.cmp(b)));
                keep.extend(f.into_iter().take(n - keep.len()));
                break;
            }
        }
        pop = keep.iter().map(|i| pop[*i].clone()).collect();
        objs = keep.iter().map(|i| objs[*i].clone()).collect();
    }
    let fronts = fast_nondominated_sort(&objs);
    let mut members: Vec<Individual> = Vec::new();
    for i in &fronts[0] {
        if !members.iter().any(|m| m.x == pop[*i]) {
            members.push(Individual {
                x: pop[*i].clone(),
                objectives: objs[*i].clone(),
            });
        }
    }
    members.sort_by(|a, b| a.objectives[0].total_cmp(&b.objectives[0]));
    Ok(ParetoFront {
        members,
        generations: config.generations,
        evaluations,
    })
}
