//! Brute-force k-nearest-neighbour blending, used as the oracle the FC
//! network's selection path is checked against.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fc::{membership, Metric};

/// Sorts all distances, takes the k nearest (ties to the lower index), and
/// returns the inverse-distance-weighted blend of their outputs — the same
/// membership the FC module uses, over an independently selected set.
pub fn knn_classify(
    samples: &[(Vec<f64>, Vec<f64>)],
    x: &[f64],
    k: usize,
    metric: Metric,
) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::invalid("need at least one sample"));
    }
    if k == 0 || k > samples.len() {
        return Err(Error::invalid(alloc::format!(
            "k must be in 1..={}, got {k}",
            samples.len()
        )));
    }
    let mut order: Vec<(f64, usize)> = samples
        .iter()
        .enumerate()
        .map(|(i, (input, _))| Ok((metric.distance(x, input)?, i)))
        .collect::<Result<_>>()?;
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let dists: Vec<f64> = order[..k].iter().map(|&(d, _)| d).collect();
    let mu = membership(&dists);
    let out_dim = samples[0].1.len();
    let mut out = alloc::vec![0.0; out_dim];
    for (&(_, i), &w) in order[..k].iter().zip(&mu) {
        for (o, u) in out.iter_mut().zip(&samples[i].1) {
            *o += w * u;
        }
    }
    Ok(out)
}
