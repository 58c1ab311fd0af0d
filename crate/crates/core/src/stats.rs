//! Test statistics. Each one is computed the same way on observed and on
//! reference data.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{strength, LabeledGraph, Matrix, StrengthMode};

/// A test statistic and its parameters, as stored in pipeline configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StatSpec {
    /// Newman's discrete assortativity by a node attribute.
    Assortativity {
        attribute: String,
        #[serde(default = "default_true")]
        weighted: bool,
    },
    /// Coefficient of variation over all off-diagonal cells.
    CvOffdiag,
    /// Coefficient of variation over nonzero cells.
    CvNonzero,
    /// Coefficient of variation of node strength.
    CvStrength {
        #[serde(default = "default_out")]
        mode: StrengthMode,
    },
    /// Difference in mean strength between the two levels of an attribute.
    /// `recode` maps raw attribute values onto levels before grouping.
    GroupCoeff {
        attribute: String,
        #[serde(default = "default_out")]
        mode: StrengthMode,
        #[serde(default)]
        recode: BTreeMap<String, String>,
    },
    /// Pearson correlation with a fixed comparison matrix (off-diagonal).
    MatrixCorr { comparison: Vec<Vec<f64>> },
    /// Summed (signed or absolute) difference to a comparison matrix.
    MatrixDiff {
        comparison: Vec<Vec<f64>>,
        #[serde(default)]
        absolute: bool,
    },
    /// Mean unweighted degree, optionally divided by `n - 1`.
    MeanDegree {
        #[serde(default)]
        normalized: bool,
    },
}

fn default_true() -> bool {
    true
}

fn default_out() -> StrengthMode {
    StrengthMode::Out
}

impl StatSpec {
    /// Short identifier used in result metadata.
    pub fn name(&self) -> &'static str {
        match self {
            StatSpec::Assortativity { .. } => "assortativity",
            StatSpec::CvOffdiag => "cv_offdiag",
            StatSpec::CvNonzero => "cv_nonzero",
            StatSpec::CvStrength { .. } => "cv_strength",
            StatSpec::GroupCoeff { .. } => "group_coeff",
            StatSpec::MatrixCorr { .. } => "matrix_corr",
            StatSpec::MatrixDiff { .. } => "matrix_diff",
            StatSpec::MeanDegree { .. } => "mean_degree",
        }
    }

    /// Checks that the statistic can be computed on graphs shaped like `g`
    /// without touching the weights.
    pub fn check_compatible(&self, g: &LabeledGraph) -> Result<()> {
        let need_attr = |a: &str| {
            g.attr(a)
                .map(|_| ())
                .map_err(|_| Error::Incompatible(format!("statistic needs node attribute '{a}'")))
        };
        match self {
            StatSpec::Assortativity { attribute, .. } => need_attr(attribute),
            StatSpec::GroupCoeff { attribute, .. } => need_attr(attribute),
            StatSpec::MatrixCorr { comparison } | StatSpec::MatrixDiff { comparison, .. } => {
                if comparison.len() != g.n() || comparison.iter().any(|r| r.len() != g.n()) {
                    Err(Error::Incompatible(format!("comparison matrix is not {n}x{n}", n = g.n())))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, g: &LabeledGraph) -> Result<f64> {
        match self {
            StatSpec::Assortativity { attribute, weighted } => {
                assortativity_discrete(g, g.attr(attribute)?, *weighted)
            }
            StatSpec::CvOffdiag => cv_offdiag(g.weights()),
            StatSpec::CvNonzero => cv_nonzero(g.weights()),
            StatSpec::CvStrength { mode } => coefficient_of_variation(&strength(g, *mode)),
            StatSpec::GroupCoeff { attribute, mode, recode } => {
                let labels: Vec<String> = g
                    .attr(attribute)?
                    .iter()
                    .map(|v| recode.get(v).cloned().unwrap_or_else(|| v.clone()))
                    .collect();
                group_coeff(&strength(g, *mode), &labels)
            }
            StatSpec::MatrixCorr { comparison } => {
                let b = Matrix::from_rows(comparison)?;
                pearson_offdiag(g.weights(), &b)
            }
            StatSpec::MatrixDiff { comparison, absolute } => {
                let b = Matrix::from_rows(comparison)?;
                let d = matrix_diffs(g.weights(), &b)?;
                Ok(if *absolute { d.absolute } else { d.signed })
            }
            StatSpec::MeanDegree { normalized } => {
                let n = g.n();
                if n == 0 {
                    return Err(Error::data("mean degree of an empty graph"));
                }
                let mean = g.degrees().iter().sum::<usize>() as f64 / n as f64;
                if *normalized {
                    if n < 2 {
                        return Err(Error::data("normalized degree needs at least two nodes"));
                    }
                    Ok(mean / (n - 1) as f64)
                } else {
                    Ok(mean)
                }
            }
        }
    }
}

/// Newman's categorical assortativity
/// `r = (Σ e_ii − Σ a_i b_i) / (1 − Σ a_i b_i)`, where `e` is the mixing
/// matrix of edge weight between categories (ordered pairs, normalized to sum
/// one) and `a`, `b` are its row and column marginals. With `weighted` unset
/// every nonzero cell counts as 1.
pub fn assortativity_discrete(g: &LabeledGraph, labels: &[String], weighted: bool) -> Result<f64> {
    let n = g.n();
    if labels.len() != n {
        return Err(Error::data(format!("{} labels for {n} nodes", labels.len())));
    }
    let mut cats: Vec<&str> = labels.iter().map(String::as_str).collect();
    cats.sort_unstable();
    cats.dedup();
    let idx: Vec<usize> = labels.iter().map(|l| cats.binary_search(&l.as_str()).unwrap()).collect();
    let k = cats.len();
    let mut e = vec![0.0; k * k];
    let w = g.weights();
    for i in 0..n {
        for j in 0..n {
            let v = w.get(i, j);
            if i == j || v == 0.0 {
                continue;
            }
            e[idx[i] * k + idx[j]] += if weighted { v } else { 1.0 };
        }
    }
    let total: f64 = e.iter().sum();
    if total <= 0.0 {
        return Err(Error::data("assortativity of a graph without edges"));
    }
    let mut trace = 0.0;
    let mut ab = 0.0;
    for c in 0..k {
        trace += e[c * k + c] / total;
        let a: f64 = (0..k).map(|d| e[c * k + d]).sum::<f64>() / total;
        let b: f64 = (0..k).map(|d| e[d * k + c]).sum::<f64>() / total;
        ab += a * b;
    }
    let denom = 1.0 - ab;
    if denom.abs() < 1e-15 {
        return Err(Error::data("assortativity undefined: all edge weight falls in a single category"));
    }
    Ok((trace - ab) / denom)
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n - 1` denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

/// Sample standard deviation over the mean.
pub fn coefficient_of_variation(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::data("coefficient of variation needs at least two values"));
    }
    let m = mean(xs);
    if m == 0.0 {
        return Err(Error::data("coefficient of variation with zero mean"));
    }
    Ok(sample_sd(xs) / m)
}

/// CV over every off-diagonal cell, both triangles, zeros included.
pub fn cv_offdiag(w: &Matrix) -> Result<f64> {
    if w.n() < 2 {
        return Err(Error::data("cv_offdiag needs at least a 2x2 matrix"));
    }
    coefficient_of_variation(&w.off_diagonal())
}

/// CV over nonzero cells only.
pub fn cv_nonzero(w: &Matrix) -> Result<f64> {
    let nz: Vec<f64> = w.as_slice().iter().copied().filter(|&v| v != 0.0).collect();
    if nz.len() < 2 {
        return Err(Error::data(format!("cv_nonzero needs two nonzero cells, found {}", nz.len())));
    }
    coefficient_of_variation(&nz)
}

/// Slope of the one-factor linear model `values ~ labels`: mean at the
/// lexicographically second level minus mean at the first.
pub fn group_coeff(values: &[f64], labels: &[String]) -> Result<f64> {
    if values.len() != labels.len() {
        return Err(Error::data(format!("{} values but {} labels", values.len(), labels.len())));
    }
    let mut groups: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (v, l) in values.iter().zip(labels) {
        let e = groups.entry(l.as_str()).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    if groups.len() != 2 {
        return Err(Error::data(format!(
            "group coefficient needs exactly two levels, found {}",
            groups.len()
        )));
    }
    let mut it = groups.values();
    let (s0, c0) = *it.next().unwrap();
    let (s1, c1) = *it.next().unwrap();
    Ok(s1 / c1 as f64 - s0 / c0 as f64)
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::data("correlation with a constant matrix"));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn pearson_offdiag(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::data(format!("matrices are {} and {} wide", a.n(), b.n())));
    }
    pearson(&a.off_diagonal(), &b.off_diagonal())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixCorrelation {
    pub r: f64,
    pub p: f64,
}

/// Mantel-style matrix correlation. `r` is Pearson's correlation over
/// off-diagonal cells; `p = (1 + #{r_perm ≥ r}) / (n_perm + 1)` where each
/// `r_perm` relabels the nodes of `a` by a uniform random permutation.
pub fn matrix_correlation<R: Rng + ?Sized>(
    a: &Matrix,
    b: &Matrix,
    n_perm: usize,
    rng: &mut R,
) -> Result<MatrixCorrelation> {
    if a.n() < 3 {
        return Err(Error::data("matrix correlation needs at least 3x3 matrices"));
    }
    let r = pearson_offdiag(a, b)?;
    let bv = b.off_diagonal();
    let mut perm: Vec<usize> = (0..a.n()).collect();
    let mut hits = 0usize;
    for _ in 0..n_perm {
        perm.shuffle(rng);
        let rp = pearson(&a.permuted(&perm).off_diagonal(), &bv)?;
        if rp >= r {
            hits += 1;
        }
    }
    Ok(MatrixCorrelation { r, p: (1 + hits) as f64 / (n_perm + 1) as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixDiffs {
    pub signed: f64,
    pub absolute: f64,
}

/// `Σ(a − b)` and `Σ|a − b|` over all cells.
pub fn matrix_diffs(a: &Matrix, b: &Matrix) -> Result<MatrixDiffs> {
    if a.n() != b.n() {
        return Err(Error::data(format!("matrices are {} and {} wide", a.n(), b.n())));
    }
    let mut signed = 0.0;
    let mut absolute = 0.0;
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        signed += x - y;
        absolute += (x - y).abs();
    }
    Ok(MatrixDiffs { signed, absolute })
}
