use serde::{Deserialize, Serialize};

type Point = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DailyDisplacement {
    pub day: usize,
    /// Path length within the day (km).
    pub diel_km: f64,
    /// First-to-last fix distance (km).
    pub net_km: f64,
}

/// Diel and net displacement (km) of one day's fixes in metres.
pub fn day_displacement(day: &[Point]) -> (f64, f64) {
    let dist = |a: &Point, b: &Point| (b.0 - a.0).hypot(b.1 - a.1);
    let diel: f64 = day.windows(2).map(|w| dist(&w[0], &w[1])).sum();
    let net = match (day.first(), day.last()) {
        (Some(a), Some(b)) => dist(a, b),
        _ => 0.0,
    };
    (diel / 1000.0, net / 1000.0)
}

/// Per-day displacement of a regularly sampled trajectory. Only complete
/// days are reported.
pub fn displacement_stats(points: &[Point], ticks_per_day: usize) -> Vec<DailyDisplacement> {
    points
        .chunks_exact(ticks_per_day.max(1))
        .enumerate()
        .map(|(day, chunk)| {
            let (diel_km, net_km) = day_displacement(chunk);
            DailyDisplacement { day, diel_km, net_km }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_straight_and_loop() {
        let still = vec![(5.0, 5.0); 288];
        assert_eq!(
            displacement_stats(&still, 288)[0],
            DailyDisplacement {
                day: 0,
                diel_km: 0.0,
                net_km: 0.0
            }
        );

        let line: Vec<Point> = (0..=200).map(|i| (i as f64 * 10.0, 0.0)).collect();
        let d = displacement_stats(&line, 201);
        assert!((d[0].diel_km - 2.0).abs() < 1e-12 && (d[0].net_km - 2.0).abs() < 1e-12);

        let square = [(0.0, 0.0), (1000.0, 0.0), (1000.0, 1000.0), (0.0, 1000.0), (0.0, 0.0)];
        let (diel, net) = day_displacement(&square);
        assert!((diel - 4.0).abs() < 1e-12);
        assert_eq!(net, 0.0);
    }

    #[test]
    fn partial_days_dropped() {
        let pts = vec![(0.0, 0.0); 288 * 2 + 100];
        assert_eq!(displacement_stats(&pts, 288).len(), 2);
        assert!(displacement_stats(&pts[..10], 288).is_empty());
    }
}
