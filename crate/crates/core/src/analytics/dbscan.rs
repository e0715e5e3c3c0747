use std::collections::{HashMap, VecDeque};

type Point = (f64, f64);

fn neighbours(points: &[Point], eps: f64) -> Vec<Vec<usize>> {
    let key = |p: &Point| ((p.0 / eps).floor() as i64, (p.1 / eps).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    points
        .iter()
        .map(|p| {
            let (kx, ky) = key(p);
            let mut out: Vec<usize> = (-1..=1)
                .flat_map(|dx| (-1..=1).map(move |dy| (kx + dx, ky + dy)))
                .filter_map(|k| buckets.get(&k))
                .flatten()
                .copied()
                .filter(|j| {
                    let q = points[*j];
                    (q.0 - p.0).hypot(q.1 - p.1) <= eps
                })
                .collect();
            out.sort_unstable();
            out
        })
        .collect()
}

/// DBSCAN cluster labels (`None` is noise). A point is core when at least
/// `min_pts` points, itself included, lie within `eps`. Clusters are
/// numbered by their lowest-index core point; a border point joins the
/// cluster of its nearest core point.
pub fn dbscan(points: &[Point], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    assert!(eps > 0.0 && min_pts >= 1, "dbscan needs eps > 0 and min_pts >= 1");
    let nb = neighbours(points, eps);
    let core: Vec<bool> = nb.iter().map(|n| n.len() >= min_pts).collect();
    let mut labels: Vec<Option<usize>> = vec![None; points.len()];
    let mut next = 0;
    for seed in 0..points.len() {
        if !core[seed] || labels[seed].is_some() {
            continue;
        }
        labels[seed] = Some(next);
        let mut queue = VecDeque::from([seed]);
        while let Some(i) = queue.pop_front() {
            for j in &nb[i] {
                if core[*j] && labels[*j].is_none() {
                    labels[*j] = Some(next);
                    queue.push_back(*j);
                }
            }
        }
        next += 1;
    }
    for i in (0..points.len()).filter(|i| !core[*i]) {
        let p = points[i];
        labels[i] = nb[i]
            .iter()
            .filter(|j| core[**j])
            .min_by(|a, b| {
                let da = (points[**a].0 - p.0).hypot(points[**a].1 - p.1);
                let db = (points[**b].0 - p.0).hypot(points[**b].1 - p.1);
                da.total_cmp(&db)
            })
            .and_then(|j| labels[*j]);
    }
    labels
}

/// Number of clusters in a labelling.
pub fn cluster_count(labels: &[Option<usize>]) -> usize {
    labels.iter().flatten().max().map_or(0, |m| m + 1)
}
