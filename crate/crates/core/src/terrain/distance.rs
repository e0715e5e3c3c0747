use super::{RasterGrid, TerrainError};

/// Exact Euclidean distance (metres, centre to centre) from every cell to the
/// nearest nonzero cell of `mask`.
///
/// Separable two-pass lower-envelope algorithm of Felzenszwalb and
/// Huttenlocher, run on squared cell distances.
pub fn distance_transform(mask: &RasterGrid) -> Result<RasterGrid, TerrainError> {
    let h = &mask.header;
    if mask.count_set() == 0 {
        return Err(TerrainError::EmptyMask);
    }
    let (nr, nc) = (h.nrows, h.ncols);
    let mut sq: Vec<f64> = mask
        .values
        .iter()
        .map(|v| if *v != 0.0 { 0.0 } else { f64::INFINITY })
        .collect();

    let mut line = vec![0.0; nr.max(nc)];
    let mut out = vec![0.0; nr.max(nc)];
    let mut scratch = Envelope::new(nr.max(nc));

    for c in 0..nc {
        for r in 0..nr {
            line[r] = sq[r * nc + c];
        }
        scratch.transform(&line[..nr], &mut out[..nr]);
        for r in 0..nr {
            sq[r * nc + c] = out[r];
        }
    }
    for r in 0..nr {
        line[..nc].copy_from_slice(&sq[r * nc..(r + 1) * nc]);
        scratch.transform(&line[..nc], &mut out[..nc]);
        sq[r * nc..(r + 1) * nc].copy_from_slice(&out[..nc]);
    }

    let cs = h.cellsize;
    Ok(RasterGrid {
        header: h.clone(),
        values: sq.into_iter().map(|d| d.sqrt() * cs).collect(),
    })
}

struct Envelope {
    v: Vec<usize>,
    z: Vec<f64>,
}

impl Envelope {
    fn new(n: usize) -> Self {
        Self {
            v: vec![0; n],
            z: vec![0.0; n + 1],
        }
    }

    /// 1-D squared distance transform of sampled function `f`.
    fn transform(&mut self, f: &[f64], d: &mut [f64]) {
        let n = f.len();
        // skip leading infinite samples; a column may be entirely infinite
        let Some(first) = f.iter().position(|x| x.is_finite()) else {
            d.iter_mut().for_each(|x| *x = f64::INFINITY);
            return;
        };
        let mut k = 0usize;
        self.v[0] = first;
        self.z[0] = f64::NEG_INFINITY;
        self.z[1] = f64::INFINITY;
        for q in first + 1..n {
            if !f[q].is_finite() {
                continue;
            }
            let qf = q as f64;
            let intersect = |p: usize| {
                let pf = p as f64;
                ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * qf - 2.0 * pf)
            };
            let mut s = intersect(self.v[k]);
            // z[0] is -inf, so this stops at k = 0
            while s <= self.z[k] {
                k -= 1;
                s = intersect(self.v[k]);
            }
            k += 1;
            self.v[k] = q;
            self.z[k] = s;
            self.z[k + 1] = f64::INFINITY;
        }
        let mut k = 0usize;
        for (q, out) in d.iter_mut().enumerate().take(n) {
            let qf = q as f64;
            while self.z[k + 1] < qf {
                k += 1;
            }
            let p = self.v[k];
            let diff = qf - p as f64;
            *out = diff * diff + f[p];
        }
    }
}
