//! Distribution-based reference models: samplers fitted to summaries of the
//! observed network.

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{gen_er, ErMode};
use crate::graph::{weighted_clustering, LabeledGraph, Matrix};

pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

/// Lower bound for truncated normal edge weights.
pub const WEIGHT_EPS: f64 = 1e-6;

/// Poisson MLE (the sample mean).
pub fn fit_degree_poisson(degrees: &[f64]) -> Result<f64> {
    if degrees.is_empty() {
        return Err(Error::data("cannot fit a degree distribution to no nodes"));
    }
    if degrees.iter().any(|&d| !(d >= 0.0)) {
        return Err(Error::data("degrees must be nonnegative"));
    }
    Ok(degrees.iter().sum::<f64>() / degrees.len() as f64)
}

/// Erdős–Gallai test. The sum must be even and, with degrees sorted in
/// decreasing order, for every k
/// `sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)`.
pub fn is_graphical(seq: &[usize]) -> bool {
    let n = seq.len();
    if seq.iter().sum::<usize>() % 2 == 1 || seq.iter().any(|&d| d >= n) {
        return false;
    }
    let mut d = seq.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let mut lhs = 0;
    for k in 1..=n {
        lhs += d[k - 1];
        let rhs = k * (k - 1) + d[k..].iter().map(|&x| x.min(k)).sum::<usize>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

fn check_realizable(seq: &[usize]) -> Result<()> {
    let total: usize = seq.iter().sum();
    if total % 2 == 1 {
        return Err(Error::NotRealizable(format!("degree sum {total} is odd")));
    }
    if !is_graphical(seq) {
        return Err(Error::NotRealizable("degree sequence fails the Erdős–Gallai condition".into()));
    }
    Ok(())
}

/// Simple undirected graph with exactly the given degree sequence.
///
/// Each attempt matches stubs: the node with most unmatched stubs is paired
/// with a partner drawn in proportion to its unmatched stubs, skipping
/// partners that would create a loop or a multi-edge. A dead end restarts
/// from scratch.
pub fn graph_from_degree_sequence<R: Rng + ?Sized>(
    seq: &[usize],
    max_attempts: usize,
    rng: &mut R,
) -> Result<LabeledGraph> {
    if seq.is_empty() {
        return Err(Error::data("empty degree sequence"));
    }
    check_realizable(seq)?;
    if max_attempts == 0 {
        return Err(Error::ConstructionFailed { attempts: 0 });
    }
    for _ in 1..max_attempts {
        if let Some(m) = stub_matching_attempt(seq, rng) {
            return LabeledGraph::from_matrix(m, false);
        }
    }
    // last attempt: sequential construction that cannot dead-end
    match sequential_attempt(seq, rng) {
        Some(m) => LabeledGraph::from_matrix(m, false),
        None => Err(Error::ConstructionFailed { attempts: max_attempts }),
    }
}

/// Blitzstein-Diaconis style construction. Each new edge keeps the residual
/// sequence graphical, so a graphical input always completes.
fn sequential_attempt<R: Rng + ?Sized>(seq: &[usize], rng: &mut R) -> Option<Matrix> {
    let n = seq.len();
    let mut left = seq.to_vec();
    let mut m = Matrix::zeros(n);
    let mut cand = Vec::with_capacity(n);
    while let Some(u) = (0..n).filter(|&i| left[i] > 0).min_by_key(|&i| left[i]) {
        while left[u] > 0 {
            cand.clear();
            let mut total = 0;
            for v in 0..n {
                if v == u || left[v] == 0 || m.get(u, v) != 0.0 {
                    continue;
                }
                left[u] -= 1;
                left[v] -= 1;
                if is_graphical(&left) {
                    cand.push(v);
                    total += left[v] + 1;
                }
                left[u] += 1;
                left[v] += 1;
            }
            if cand.is_empty() {
                return None;
            }
            let mut r = rng.random_range(0..total);
            let mut v = cand[0];
            for &c in &cand {
                if r < left[c] {
                    v = c;
                    break;
                }
                r -= left[c];
            }
            m.set(u, v, 1.0);
            m.set(v, u, 1.0);
            left[u] -= 1;
            left[v] -= 1;
        }
    }
    Some(m)
}

fn stub_matching_attempt<R: Rng + ?Sized>(seq: &[usize], rng: &mut R) -> Option<Matrix> {
    let n = seq.len();
    let mut left = seq.to_vec();
    let mut m = Matrix::zeros(n);
    let mut cand = Vec::with_capacity(n);
    loop {
        let top = *left.iter().max().unwrap();
        if top == 0 {
            return Some(m);
        }
        // random tie-break among the nodes with most stubs
        let ties: Vec<usize> = (0..n).filter(|&i| left[i] == top).collect();
        let u = ties[rng.random_range(0..ties.len())];
        cand.clear();
        let mut total = 0;
        for v in 0..n {
            if v != u && left[v] > 0 && m.get(u, v) == 0.0 {
                cand.push(v);
                total += left[v];
            }
        }
        if cand.is_empty() {
            return None;
        }
        let mut r = rng.random_range(0..total);
        let mut v = cand[0];
        for &c in &cand {
            if r < left[c] {
                v = c;
                break;
            }
            r -= left[c];
        }
        m.set(u, v, 1.0);
        m.set(v, u, 1.0);
        left[u] -= 1;
        left[v] -= 1;
    }
}

/// Draws iid Poisson(λ) degree sequences until one can be realized.
pub fn sample_poisson_degree_graph<R: Rng + ?Sized>(
    n: usize,
    lambda: f64,
    max_retries: usize,
    rng: &mut R,
) -> Result<LabeledGraph> {
    if n < 2 {
        return Err(Error::config("a Poisson degree graph needs at least two nodes"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::config(format!("Poisson rate must be positive, got {lambda}")));
    }
    let pois = Poisson::new(lambda).map_err(|e| Error::config(e.to_string()))?;
    for _ in 0..max_retries.max(1) {
        let seq: Vec<usize> = (0..n).map(|_| pois.sample(rng) as usize).collect();
        match graph_from_degree_sequence(&seq, DEFAULT_MAX_ATTEMPTS, rng) {
            Ok(g) => return Ok(g),
            Err(Error::NotRealizable(_)) | Err(Error::ConstructionFailed { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted { retries: max_retries.max(1) })
}

/// Independent edges with probability `min(1, k_i k_j / sum k)`.
pub fn chung_lu<R: Rng + ?Sized>(degrees: &[f64], rng: &mut R) -> Result<LabeledGraph> {
    if degrees.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
        return Err(Error::data("target degrees must be finite and nonnegative"));
    }
    let n = degrees.len();
    let total: f64 = degrees.iter().sum();
    let mut m = Matrix::zeros(n);
    if total > 0.0 {
        for i in 0..n {
            for j in i + 1..n {
                let p = (degrees[i] * degrees[j] / total).min(1.0);
                if rng.random_bool(p) {
                    m.set(i, j, 1.0);
                    m.set(j, i, 1.0);
                }
            }
        }
    }
    LabeledGraph::from_matrix(m, false)
}

/// Two-process edge weights: `w_low` with probability `p_low`, otherwise a
/// normal draw redrawn until it is at least [`WEIGHT_EPS`].
pub fn mixture_edge_weights<R: Rng + ?Sized>(
    m: usize,
    p_low: f64,
    w_low: f64,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p_low) {
        return Err(Error::config(format!("p_low must be a probability, got {p_low}")));
    }
    let normal = Normal::new(mu, sigma).map_err(|e| Error::config(e.to_string()))?;
    if sigma == 0.0 && mu < WEIGHT_EPS && p_low < 1.0 {
        return Err(Error::config("normal component has no mass above zero"));
    }
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        if rng.random_bool(p_low) {
            out.push(w_low);
            continue;
        }
        let mut tries = 0;
        loop {
            let x = normal.sample(rng);
            if x >= WEIGHT_EPS {
                out.push(x);
                break;
            }
            tries += 1;
            if tries == 100_000 {
                return Err(Error::config("normal component almost never exceeds zero"));
            }
        }
    }
    Ok(out)
}

/// Mean and sample standard deviation of the cells of `weights`. With
/// `include_diagonal` all n² cells are used (zeros on the diagonal
/// included); otherwise only the n² − n off-diagonal cells.
pub fn fit_normal_weights(weights: &Matrix, include_diagonal: bool) -> Result<(f64, f64)> {
    let cells = if include_diagonal { weights.as_slice().to_vec() } else { weights.off_diagonal() };
    if cells.len() < 2 {
        return Err(Error::data("need at least two cells to fit a weight distribution"));
    }
    let mean = cells.iter().sum::<f64>() / cells.len() as f64;
    let var = cells.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (cells.len() - 1) as f64;
    Ok((mean, var.sqrt()))
}

/// Uniform G(n, m) topology with iid Normal(μ, σ) weights. Negative draws
/// are clamped to 0, which removes that edge from the weighted graph.
pub fn naive_weighted_er<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<LabeledGraph> {
    let normal = Normal::new(mu, sigma).map_err(|e| Error::config(e.to_string()))?;
    let topo = gen_er(n, ErMode::Gnm(m), rng)?;
    let mut w = Matrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            if topo.weight(i, j) != 0.0 {
                let x = normal.sample(rng).max(0.0);
                w.set(i, j, x);
                w.set(j, i, x);
            }
        }
    }
    LabeledGraph::from_matrix(w, false)
}

/// Per-node degree, weighted clustering and mean edge weight (row mean over
/// all cells). Samplers that only match the degree distribution lose any
/// covariance between these; compare the observed and reference scatters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeProfile {
    pub degree: usize,
    pub clustering: Option<f64>,
    pub mean_weight: f64,
}

pub fn node_profiles(g: &LabeledGraph) -> Vec<NodeProfile> {
    let n = g.n() as f64;
    let clustering = weighted_clustering(g);
    g.degrees()
        .into_iter()
        .zip(clustering)
        .enumerate()
        .map(|(i, (degree, clustering))| NodeProfile {
            degree,
            clustering,
            mean_weight: g.weights().row(i).iter().sum::<f64>() / n,
        })
        .collect()
}
