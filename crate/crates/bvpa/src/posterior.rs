//! Log conditional posterior evaluators, one per parameter.
//!
//! Each evaluator is a one-dimensional function of its parameter with the
//! other six held fixed, returning an unnormalized log-density or `None`
//! where the posterior is undefined. The undefined set is exactly
//! `{alpha <= 0} ∪ {sigma <= 0} ∪ {mu >= min x} ∪ {candidate puts an
//! observation on the standardized diagonal}`.
//!
//! The index sets `I1`/`I2` depend on the locations and scales, so the
//! bivariate location/scale conditionals recompute the region partition at
//! every candidate value and carry every partition-dependent likelihood term.
//! As a result each bivariate conditional differs from the joint
//! `log-likelihood + log-prior` by a constant in its free parameter, which is
//! what a Gibbs update requires. The shape conditionals see a fixed
//! partition and cache its sufficient sums.
//!
//! `UnivariateMarginal` mode replaces the bivariate likelihood with the sum
//! of log marginal densities of the corresponding coordinate; these
//! conditionals are continuous on their domain.

use crate::model::{BivariateSample, BvpaParams, ParamName};
use crate::priors::PriorSpec;

/// Which likelihood a conditional is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Full bivariate likelihood with candidate-dependent region partition.
    Bivariate,
    /// Product of univariate marginal densities of the relevant coordinate.
    UnivariateMarginal,
}

/// Sufficient statistics of a region partition for likelihood evaluation.
///
/// `s11`/`s12` are the sums of `ln(1+u1)` and `ln(1+u2)` over `I1`;
/// `s21`/`s22` the same sums over `I2`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct PartitionSums {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub s11: f64,
    pub s12: f64,
    pub s21: f64,
    pub s22: f64,
}

pub(crate) fn partition_sums(
    sample: &BivariateSample,
    mu1: f64,
    mu2: f64,
    sigma1: f64,
    sigma2: f64,
) -> PartitionSums {
    let mut sums = PartitionSums::default();
    for &(x1, x2) in sample.pairs() {
        let u1 = (x1 - mu1) / sigma1;
        let u2 = (x2 - mu2) / sigma2;
        if u1 < u2 {
            sums.n1 += 1;
            sums.s11 += u1.ln_1p();
            sums.s12 += u2.ln_1p();
        } else if u1 > u2 {
            sums.n2 += 1;
            sums.s21 += u1.ln_1p();
            sums.s22 += u2.ln_1p();
        } else {
            sums.n0 += 1;
        }
    }
    sums
}

/// All likelihood terms that vary with the locations or scales through the
/// partition, as a function of the shape parameters.
fn bivariate_core(sums: &PartitionSums, a0: f64, a1: f64, a2: f64) -> f64 {
    sums.n1 as f64 * (a1.ln() + (a0 + a2).ln())
        + sums.n2 as f64 * (a2.ln() + (a0 + a1).ln())
        - (a1 + 1.0) * sums.s11
        - (a0 + a2 + 1.0) * sums.s12
        - (a0 + a1 + 1.0) * sums.s21
        - (a2 + 1.0) * sums.s22
}

/// Shape-conditional kernels as printed expressions over cached sums.
/// Split out so their empty-region behaviour can be checked directly.
fn alpha0_expr(sums: &PartitionSums, n: f64, a0: f64, a1: f64, a2: f64, k: f64, theta: f64) -> f64 {
    n * (a0 + a1 + a2).ln() + sums.n1 as f64 * (a0 + a2).ln() - (a0 + a2 + 1.0) * sums.s12
        + sums.n2 as f64 * (a0 + a1).ln()
        - (a0 + a1 + 1.0) * sums.s21
        + (k - 1.0) * a0.ln()
        - a0 / theta
}

fn alpha1_expr(sums: &PartitionSums, n: f64, a0: f64, a1: f64, a2: f64, k: f64, theta: f64) -> f64 {
    n * (a0 + a1 + a2).ln() - n * (a1 + a2).ln() + sums.n1 as f64 * a1.ln()
        - (a1 + 1.0) * sums.s11
        + sums.n2 as f64 * (a0 + a1).ln()
        - (a0 + a1 + 1.0) * sums.s21
        + (k - 1.0) * a1.ln()
        - a1 / theta
}

fn alpha2_expr(sums: &PartitionSums, n: f64, a0: f64, a1: f64, a2: f64, k: f64, theta: f64) -> f64 {
    n * (a0 + a1 + a2).ln() - n * (a1 + a2).ln() + sums.n1 as f64 * (a0 + a2).ln()
        - (a0 + a2 + 1.0) * sums.s12
        + sums.n2 as f64 * a2.ln()
        - (a2 + 1.0) * sums.s22
        + (k - 1.0) * a2.ln()
        - a2 / theta
}

/// A conditional posterior target: one free coordinate, six frozen.
#[derive(Debug, Clone)]
pub struct ConditionalTarget<'a> {
    which: ParamName,
    mode: Mode,
    frozen: BvpaParams,
    data: &'a BivariateSample,
    priors: &'a PriorSpec,
    /// Partition sums at the frozen locations/scales; used by the shape
    /// conditionals, whose free parameter cannot move the partition.
    cached: PartitionSums,
}

impl<'a> ConditionalTarget<'a> {
    pub fn new(
        which: ParamName,
        mode: Mode,
        frozen: &BvpaParams,
        data: &'a BivariateSample,
        priors: &'a PriorSpec,
    ) -> Self {
        if mode == Mode::UnivariateMarginal {
            assert!(
                !matches!(which, ParamName::Alpha0 | ParamName::Alpha1 | ParamName::Alpha2),
                "univariate-marginal conditionals exist only for locations and scales"
            );
        }
        let cached = match which {
            ParamName::Alpha0 | ParamName::Alpha1 | ParamName::Alpha2 => partition_sums(
                data,
                frozen.mu1(),
                frozen.mu2(),
                frozen.sigma1(),
                frozen.sigma2(),
            ),
            _ => PartitionSums::default(),
        };
        Self {
            which,
            mode,
            frozen: *frozen,
            data,
            priors,
            cached,
        }
    }

    pub fn which(&self) -> ParamName {
        self.which
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Unnormalized log conditional posterior at `value`, or `None` where the
    /// posterior is undefined.
    pub fn log_density(&self, value: f64) -> Option<f64> {
        if !value.is_finite() {
            return None;
        }
        let p = &self.frozen;
        let n = self.data.len() as f64;
        match (self.which, self.mode) {
            (ParamName::Alpha0, _) => {
                if value <= 0.0 || self.cached.n0 > 0 {
                    return None;
                }
                Some(alpha0_expr(
                    &self.cached,
                    n,
                    value,
                    p.alpha1(),
                    p.alpha2(),
                    self.priors.k0,
                    self.priors.theta0,
                ))
            }
            (ParamName::Alpha1, _) => {
                if value <= 0.0 || self.cached.n0 > 0 {
                    return None;
                }
                Some(alpha1_expr(
                    &self.cached,
                    n,
                    p.alpha0(),
                    value,
                    p.alpha2(),
                    self.priors.k1,
                    self.priors.theta1,
                ))
            }
            (ParamName::Alpha2, _) => {
                if value <= 0.0 || self.cached.n0 > 0 {
                    return None;
                }
                Some(alpha2_expr(
                    &self.cached,
                    n,
                    p.alpha0(),
                    p.alpha1(),
                    value,
                    self.priors.k2,
                    self.priors.theta2,
                ))
            }
            (ParamName::Mu1, Mode::Bivariate) => {
                let kernel = self.priors.log_prior_mu(1, value, self.data.min_x1())?;
                let sums = partition_sums(self.data, value, p.mu2(), p.sigma1(), p.sigma2());
                if sums.n0 > 0 {
                    return None;
                }
                Some(bivariate_core(&sums, p.alpha0(), p.alpha1(), p.alpha2()) + kernel)
            }
            (ParamName::Mu2, Mode::Bivariate) => {
                let kernel = self.priors.log_prior_mu(2, value, self.data.min_x2())?;
                let sums = partition_sums(self.data, p.mu1(), value, p.sigma1(), p.sigma2());
                if sums.n0 > 0 {
                    return None;
                }
                Some(bivariate_core(&sums, p.alpha0(), p.alpha1(), p.alpha2()) + kernel)
            }
            (ParamName::Sigma1, Mode::Bivariate) => {
                let kernel = self.priors.log_prior_sigma(1, value)?;
                let sums = partition_sums(self.data, p.mu1(), p.mu2(), value, p.sigma2());
                if sums.n0 > 0 {
                    return None;
                }
                Some(
                    bivariate_core(&sums, p.alpha0(), p.alpha1(), p.alpha2()) - n * value.ln()
                        + kernel,
                )
            }
            (ParamName::Sigma2, Mode::Bivariate) => {
                let kernel = self.priors.log_prior_sigma(2, value)?;
                let sums = partition_sums(self.data, p.mu1(), p.mu2(), p.sigma1(), value);
                if sums.n0 > 0 {
                    return None;
                }
                Some(
                    bivariate_core(&sums, p.alpha0(), p.alpha1(), p.alpha2()) - n * value.ln()
                        + kernel,
                )
            }
            (ParamName::Mu1, Mode::UnivariateMarginal) => {
                let kernel = self.priors.log_prior_mu(1, value, self.data.min_x1())?;
                Some(
                    marginal_log_likelihood(
                        self.data.pairs().iter().map(|p| p.0),
                        value,
                        p.sigma1(),
                        p.alpha0(),
                        p.alpha1(),
                        p.alpha2(),
                    ) + kernel,
                )
            }
            (ParamName::Mu2, Mode::UnivariateMarginal) => {
                let kernel = self.priors.log_prior_mu(2, value, self.data.min_x2())?;
                Some(
                    marginal_log_likelihood(
                        self.data.pairs().iter().map(|p| p.1),
                        value,
                        p.sigma2(),
                        p.alpha0(),
                        p.alpha2(),
                        p.alpha1(),
                    ) + kernel,
                )
            }
            (ParamName::Sigma1, Mode::UnivariateMarginal) => {
                let kernel = self.priors.log_prior_sigma(1, value)?;
                if p.mu1() >= self.data.min_x1() {
                    return None;
                }
                Some(
                    marginal_log_likelihood(
                        self.data.pairs().iter().map(|p| p.0),
                        p.mu1(),
                        value,
                        p.alpha0(),
                        p.alpha1(),
                        p.alpha2(),
                    ) + kernel,
                )
            }
            (ParamName::Sigma2, Mode::UnivariateMarginal) => {
                let kernel = self.priors.log_prior_sigma(2, value)?;
                if p.mu2() >= self.data.min_x2() {
                    return None;
                }
                Some(
                    marginal_log_likelihood(
                        self.data.pairs().iter().map(|p| p.1),
                        p.mu2(),
                        value,
                        p.alpha0(),
                        p.alpha2(),
                        p.alpha1(),
                    ) + kernel,
                )
            }
        }
    }
}

/// `sum_i ln f_X(x_i)` for the BB-BVPA marginal, computed directly in log
/// space: each term is
/// `ln(asum/(a+a')) - ln sigma - (a0+a+1) ln(1+u) + ln((a0+a) - a0 (1+u)^{-a'})`.
/// The bracket is at least `a`, so the final log is safe.
fn marginal_log_likelihood(
    xs: impl Iterator<Item = f64>,
    mu: f64,
    sigma: f64,
    a0: f64,
    a: f64,
    a_other: f64,
) -> f64 {
    let asum = a0 + a + a_other;
    let lead = (asum / (a + a_other)).ln() - sigma.ln();
    let mut total = 0.0;
    for x in xs {
        let l1p = ((x - mu) / sigma).ln_1p();
        let bracket = (a0 + a) - a0 * (-a_other * l1p).exp();
        total += lead - (a0 + a + 1.0) * l1p + bracket.ln();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{log_likelihood, marginal_pdf_x1, marginal_pdf_x2, sample_bb};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn setup() -> (BivariateSample, BvpaParams, PriorSpec) {
        let truth = BvpaParams::new(0.3, 0.4, 0.6, 0.7, 1.7, 1.2, 1.4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let sample = sample_bb(&truth, 60, &mut rng).unwrap();
        (sample, truth, PriorSpec::default())
    }

    /// Joint log posterior (likelihood + all prior kernels), the oracle that
    /// every bivariate conditional must match up to a constant.
    fn log_posterior(sample: &BivariateSample, p: &BvpaParams, priors: &PriorSpec) -> Option<f64> {
        let ll = log_likelihood(sample, p)?;
        let lp = priors.log_prior_joint(p, sample.min_x1(), sample.min_x2())?;
        Some(ll + lp)
    }

    #[test]
    fn conditionals_undefined_outside_domain() {
        let (sample, truth, priors) = setup();
        for which in [ParamName::Alpha0, ParamName::Alpha1, ParamName::Alpha2] {
            let t = ConditionalTarget::new(which, Mode::Bivariate, &truth, &sample, &priors);
            assert!(t.log_density(-0.5).is_none());
            assert!(t.log_density(0.0).is_none());
            assert!(t.log_density(1.0).is_some());
        }
        let t = ConditionalTarget::new(ParamName::Mu1, Mode::Bivariate, &truth, &sample, &priors);
        assert!(t.log_density(sample.min_x1()).is_none());
        assert!(t.log_density(sample.min_x1() + 0.001).is_none());
        assert!(t.log_density(sample.min_x1() - 1e-9).is_some());
        let t =
            ConditionalTarget::new(ParamName::Sigma1, Mode::Bivariate, &truth, &sample, &priors);
        assert!(t.log_density(0.0).is_none());
        assert!(t.log_density(-1.0).is_none());
        assert!(t.log_density(0.4).is_some());
        let t = ConditionalTarget::new(
            ParamName::Mu2,
            Mode::UnivariateMarginal,
            &truth,
            &sample,
            &priors,
        );
        assert!(t.log_density(sample.min_x2()).is_none());
        assert!(t.log_density(sample.min_x2() - 0.01).is_some());
    }

    #[test]
    fn bivariate_conditionals_match_joint_posterior_differences() {
        let (sample, truth, priors) = setup();
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let mut uniform = |lo: f64, hi: f64| lo + (hi - lo) * rand::Rng::random::<f64>(&mut rng);
        for which in ParamName::ALL {
            let t = ConditionalTarget::new(which, Mode::Bivariate, &truth, &sample, &priors);
            for _ in 0..40 {
                let (a, b) = match which {
                    ParamName::Mu1 => (
                        uniform(-1.0, sample.min_x1() - 1e-6),
                        uniform(-1.0, sample.min_x1() - 1e-6),
                    ),
                    ParamName::Mu2 => (
                        uniform(-1.0, sample.min_x2() - 1e-6),
                        uniform(-1.0, sample.min_x2() - 1e-6),
                    ),
                    _ => (uniform(0.05, 4.0), uniform(0.05, 4.0)),
                };
                let cond_diff = t.log_density(a).unwrap() - t.log_density(b).unwrap();
                let pa = truth.with_value(which, a).unwrap();
                let pb = truth.with_value(which, b).unwrap();
                let oracle_diff = log_posterior(&sample, &pa, &priors).unwrap()
                    - log_posterior(&sample, &pb, &priors).unwrap();
                assert!(
                    (cond_diff - oracle_diff).abs() < 1e-9,
                    "{which}: {cond_diff} vs {oracle_diff} at ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn univariate_conditionals_match_marginal_sums() {
        let (sample, truth, priors) = setup();
        let cases = [
            (ParamName::Mu1, 0.25),
            (ParamName::Mu2, 0.33),
            (ParamName::Sigma1, 0.55),
            (ParamName::Sigma2, 0.8),
        ];
        for (which, value) in cases {
            let t =
                ConditionalTarget::new(which, Mode::UnivariateMarginal, &truth, &sample, &priors);
            let got = t.log_density(value).unwrap();
            let p = truth.with_value(which, value).unwrap();
            let mut expected = match which {
                ParamName::Mu1 | ParamName::Sigma1 => sample
                    .pairs()
                    .iter()
                    .map(|&(x1, _)| marginal_pdf_x1(&p, x1).unwrap().ln())
                    .sum::<f64>(),
                _ => sample
                    .pairs()
                    .iter()
                    .map(|&(_, x2)| marginal_pdf_x2(&p, x2).unwrap().ln())
                    .sum::<f64>(),
            };
            expected += match which {
                ParamName::Mu1 => priors.log_prior_mu(1, value, sample.min_x1()).unwrap(),
                ParamName::Mu2 => priors.log_prior_mu(2, value, sample.min_x2()).unwrap(),
                ParamName::Sigma1 => priors.log_prior_sigma(1, value).unwrap(),
                ParamName::Sigma2 => priors.log_prior_sigma(2, value).unwrap(),
                _ => unreachable!(),
            };
            assert!(
                (got - expected).abs() < 1e-9,
                "{which}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn shape_conditional_reduces_to_total_shape_term_on_empty_regions() {
        // With both off-diagonal regions empty the printed expression keeps
        // only the n ln(a0+a1+a2) term and the prior kernel.
        let sums = PartitionSums::default();
        let (k, theta) = (2.0, 3.0);
        let (a0, a1, a2) = (1.5, 1.1, 0.9);
        let v = alpha0_expr(&sums, 1.0, a0, a1, a2, k, theta);
        let expected = (a0 + a1 + a2).ln() + (k - 1.0) * a0.ln() - a0 / theta;
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn conditionals_undefined_when_frozen_state_has_diagonal_points() {
        let sample = BivariateSample::new(vec![(1.5, 1.5), (2.0, 3.0)]).unwrap();
        let p = BvpaParams::new(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let priors = PriorSpec::default();
        let t = ConditionalTarget::new(ParamName::Alpha0, Mode::Bivariate, &p, &sample, &priors);
        assert!(t.log_density(1.0).is_none());
        // and a location candidate that creates a tie is rejected too
        let skew = BvpaParams::new(0.5, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let t = ConditionalTarget::new(ParamName::Mu1, Mode::Bivariate, &skew, &sample, &priors);
        assert!(t.log_density(0.0).is_none()); // mu1 = 0 restores the tie
        assert!(t.log_density(0.25).is_some());
    }
}
