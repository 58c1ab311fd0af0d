//! Resampling reference models: sampling nodes, degrees, weights, event rows
//! and locations from the observed data.

use rand::seq::{index, IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{GroupByIndividual, LabeledGraph};

/// Induced subgraph on `k` nodes drawn uniformly without replacement.
pub fn subsample_nodes<R: Rng + ?Sized>(g: &LabeledGraph, k: usize, rng: &mut R) -> Result<LabeledGraph> {
    if k < 1 || k > g.n() {
        return Err(Error::config(format!("cannot subsample {k} of {} nodes", g.n())));
    }
    let mut nodes = index::sample(rng, g.n(), k).into_vec();
    nodes.shuffle(rng);
    Ok(g.induced(&nodes))
}

/// Same-length sample, with replacement, from the observed degrees.
pub fn resample_degree_sequence<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    if degrees.is_empty() {
        return Err(Error::data("empty degree sequence"));
    }
    Ok((0..degrees.len()).map(|_| *degrees.choose(rng).unwrap()).collect())
}

pub fn resample_edge_weights<R: Rng + ?Sized>(
    weights: &[f64],
    m: usize,
    with_replacement: bool,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    if with_replacement {
        if weights.is_empty() {
            return Err(Error::data("cannot resample from an empty weight list"));
        }
        Ok((0..m).map(|_| *weights.choose(rng).unwrap()).collect())
    } else {
        if m > weights.len() {
            return Err(Error::config(format!(
                "cannot draw {m} of {} weights without replacement",
                weights.len()
            )));
        }
        Ok(weights.choose_multiple(rng, m).copied().collect())
    }
}

/// Bootstrap of event rows. Day, group and location metadata travel with
/// their rows.
pub fn bootstrap_gbi_rows<R: Rng + ?Sized>(gbi: &GroupByIndividual, rng: &mut R) -> GroupByIndividual {
    let n = gbi.n_events();
    let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    gbi.select_rows(&idx)
}

/// Bootstrap of coordinate pairs; x and y are never resampled separately.
pub fn bootstrap_locations<R: Rng + ?Sized>(locs: &[(i64, i64)], rng: &mut R) -> Result<Vec<(i64, i64)>> {
    if locs.is_empty() {
        return Err(Error::data("empty location list"));
    }
    Ok((0..locs.len()).map(|_| *locs.choose(rng).unwrap()).collect())
}
