//! Posterior summaries: Bayes estimates under squared-error loss and
//! shortest credible intervals built from sorted draws.

use crate::error::{Error, Result};
use crate::gibbs::Chain;
use crate::model::{BvpaParams, ParamName};

/// Point estimate and shortest `100(1-gamma)%` credible interval for one
/// parameter.
///
/// Only `lo <= hi` is guaranteed; the shortest interval may in principle
/// exclude the posterior mean for a sufficiently odd posterior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub param: ParamName,
    /// Posterior mean.
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub gamma: f64,
}

impl IntervalEstimate {
    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bayes estimate under squared-error loss: the coordinate-wise mean of the
/// stored draws.
pub fn bayes_estimate(chain: &Chain) -> Result<BvpaParams> {
    if chain.is_empty() {
        return Err(Error::Domain("cannot summarize an empty chain".into()));
    }
    let n = chain.len() as f64;
    let mut acc = [0.0f64; 7];
    for d in chain.draws() {
        for (a, v) in acc.iter_mut().zip(d.as_array()) {
            *a += v;
        }
    }
    for a in acc.iter_mut() {
        *a /= n;
    }
    BvpaParams::from_array(acc)
}

/// Shortest credible interval over the order-statistic windows of `draws`.
///
/// With `M` draws sorted ascending and `K = floor(M * gamma)`, the candidate
/// intervals are `(d_(j), d_(j+M-K))` for `j = 1..K`; the narrowest wins and
/// ties go to the smallest `j`.
pub fn credible_interval(draws: &[f64], gamma: f64) -> Result<(f64, f64)> {
    let m = draws.len();
    if m < 2 {
        return Err(Error::Domain(format!(
            "credible interval needs at least two draws (got {m})"
        )));
    }
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie strictly between 0 and 1 (got {gamma})"
        )));
    }
    let k = (m as f64 * gamma).floor() as usize;
    if k < 1 {
        return Err(Error::Domain(format!(
            "M * gamma must be at least 1 after rounding (M={m}, gamma={gamma})"
        )));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("draws must not contain NaN"));
    let span = m - k;
    let mut best = 0usize;
    let mut best_width = sorted[span] - sorted[0];
    for j in 1..k {
        let width = sorted[j + span] - sorted[j];
        if width < best_width {
            best = j;
            best_width = width;
        }
    }
    Ok((sorted[best], sorted[best + span]))
}

/// Point estimates and credible intervals for all seven parameters.
pub fn summarize(chain: &Chain, gamma: f64) -> Result<Vec<IntervalEstimate>> {
    let point = bayes_estimate(chain)?;
    ParamName::ALL
        .iter()
        .map(|&param| {
            let (lo, hi) = credible_interval(&chain.series(param), gamma)?;
            Ok(IntervalEstimate {
                param,
                point: point.get(param),
                lo,
                hi,
                gamma,
            })
        })
        .collect()
}

/// Effective sample size of a possibly autocorrelated series:
/// `N / (1 + 2 * sum_k rho_k)` with the sum truncated at the first
/// non-positive autocorrelation.
pub fn effective_sample_size(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 2 {
        return n as f64;
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    if var <= 0.0 {
        return nf;
    }
    let mut rho_sum = 0.0;
    for lag in 1..n / 2 {
        let cov = (0..n - lag)
            .map(|i| (series[i] - mean) * (series[i + lag] - mean))
            .sum::<f64>()
            / (n - lag) as f64;
        let rho = cov / var;
        if rho <= 0.0 {
            break;
        }
        rho_sum += rho;
    }
    (nf / (1.0 + 2.0 * rho_sum)).min(nf)
}
