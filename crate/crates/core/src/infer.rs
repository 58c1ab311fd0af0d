//! Turning an observed statistic and its reference values into p-values,
//! quantile intervals and a verdict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "reject")]
    Reject,
    #[serde(rename = "fail to reject")]
    FailToReject,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Reject => "reject",
            Verdict::FailToReject => "fail to reject",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRun {
    pub observed: f64,
    pub references: Vec<f64>,
    /// Fraction of the pool (references plus observed) strictly above the
    /// observed value.
    pub p_paper: f64,
    /// `(1 + #{references >= observed}) / (N + 1)`; never zero.
    pub p_upper: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub verdict: Verdict,
}

impl ReferenceRun {
    pub fn pool_size(&self) -> usize {
        self.references.len() + 1
    }

    /// Fraction of the pool strictly below the observed value.
    pub fn frac_below(&self) -> f64 {
        let below = self.references.iter().filter(|&&v| v < self.observed).count();
        below as f64 / self.pool_size() as f64
    }
}

/// Linear-interpolation quantile of sorted data (the default "type 7"
/// definition used by R and numpy).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn reference_test(observed: f64, references: &[f64]) -> Result<ReferenceRun> {
    if references.is_empty() {
        return Err(Error::data("reference distribution is empty"));
    }
    if !observed.is_finite() || references.iter().any(|v| !v.is_finite()) {
        return Err(Error::data("non-finite value in observed or reference statistics"));
    }
    let mut pool: Vec<f64> = references.to_vec();
    pool.push(observed);
    let above = pool.iter().filter(|&&v| observed < v).count();
    let at_least = references.iter().filter(|&&v| v >= observed).count();
    pool.sort_by(f64::total_cmp);
    let ci_low = quantile_sorted(&pool, 0.025);
    let ci_high = quantile_sorted(&pool, 0.975);
    let verdict =
        if observed < ci_low || observed > ci_high { Verdict::Reject } else { Verdict::FailToReject };
    Ok(ReferenceRun {
        observed,
        references: references.to_vec(),
        p_paper: above as f64 / pool.len() as f64,
        p_upper: (1 + at_least) as f64 / (references.len() + 1) as f64,
        ci_low,
        ci_high,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    /// `None` for a constant trace.
    pub lag1_autocorr: Option<f64>,
    /// Second-half mean minus first-half mean, in standard errors.
    pub split_z: f64,
}

pub fn chain_diagnostics(trace: &[f64]) -> Result<ChainDiagnostics> {
    let n = trace.len();
    if n < 20 {
        return Err(Error::data(format!("chain diagnostics need at least 20 values, got {n}")));
    }
    let mean = trace.iter().sum::<f64>() / n as f64;
    let ss: f64 = trace.iter().map(|v| (v - mean).powi(2)).sum();
    if ss == 0.0 {
        return Ok(ChainDiagnostics { lag1_autocorr: None, split_z: 0.0 });
    }
    let cross: f64 = trace.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
    let half = n / 2;
    let (a, b) = trace.split_at(half);
    let ma = a.iter().sum::<f64>() / a.len() as f64;
    let mb = b.iter().sum::<f64>() / b.len() as f64;
    let sd = (ss / (n - 1) as f64).sqrt();
    let se = sd * (1.0 / a.len() as f64 + 1.0 / b.len() as f64).sqrt();
    Ok(ChainDiagnostics { lag1_autocorr: Some(cross / ss), split_z: (mb - ma) / se })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Equal-width histogram; the last bin is closed on the right.
pub fn histogram(values: &[f64], bins: usize) -> Histogram {
    let bins = bins.max(1);
    if values.is_empty() {
        return Histogram { edges: vec![0.0, 1.0], counts: vec![0] };
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Histogram { edges: vec![lo, hi], counts: vec![values.len()] };
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| if k == bins { hi } else { lo + k as f64 * width }).collect();
    let mut counts = vec![0; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Histogram { edges, counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_paper_examples() {
        let r = reference_test(5.0, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.p_paper, 0.0);
        assert_eq!(r.p_upper, 0.25);
        assert_eq!(r.verdict, Verdict::Reject);
        let r = reference_test(1.0, &[2.0, 3.0, 4.0]).unwrap();
        assert_eq!(r.p_paper, 0.75);
        assert_eq!(r.p_upper, 1.0);
        let r = reference_test(2.0, &[2.0; 5]).unwrap();
        assert_eq!(r.p_paper, 0.0);
        assert_eq!(r.p_upper, 1.0);
        assert_eq!(r.verdict, Verdict::FailToReject);
        assert!(reference_test(1.0, &[]).is_err());
    }

    #[test]
    fn quantiles_interpolate() {
        let v: Vec<f64> = (1..=5).map(f64::from).collect();
        assert_eq!(quantile_sorted(&v, 0.5), 3.0);
        assert_eq!(quantile_sorted(&v, 0.025), 1.1);
        assert!((quantile_sorted(&v, 0.975) - 4.9).abs() < 1e-12);
    }

    #[test]
    fn diagnostics() {
        let ramp: Vec<f64> = (1..=100).map(f64::from).collect();
        let d = chain_diagnostics(&ramp).unwrap();
        assert!(d.split_z > 3.0);
        assert!(d.lag1_autocorr.unwrap() > 0.9);
        let flat = vec![2.0; 30];
        assert_eq!(chain_diagnostics(&flat).unwrap(), ChainDiagnostics { lag1_autocorr: None, split_z: 0.0 });
        assert!(chain_diagnostics(&ramp[..10]).is_err());
    }

    #[test]
    fn histogram_counts_everything() {
        let h = histogram(&[0.0, 0.5, 1.0, 1.0], 2);
        assert_eq!(h.counts, vec![1, 3]);
        assert_eq!(h.edges, vec![0.0, 0.5, 1.0]);
        assert_eq!(histogram(&[3.0; 4], 10).counts, vec![4]);
    }

    #[test]
    fn verdict_json() {
        assert_eq!(serde_json::to_string(&Verdict::FailToReject).unwrap(), "\"fail to reject\"");
    }
}
