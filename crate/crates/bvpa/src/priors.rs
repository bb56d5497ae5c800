//! Prior hyper-parameters and unnormalized log-prior kernels.
//!
//! Shapes and scales get independent gamma priors, locations get normal
//! priors truncated to lie strictly below the corresponding data minimum.
//! Every kernel drops its additive normalizing constant: slice sampling only
//! ever needs unnormalized log-densities, and for the location kernels the
//! truncation normalizer is constant in the parameter anyway.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::BvpaParams;

/// The fourteen prior hyper-parameters.
///
/// `k_i`/`theta_i` are the gamma shape/scale for `alpha_i`, `c_j`/`d_j` the
/// gamma shape/scale for `sigma_j`, and `mu_prime_j`/`sigma_prime_j` the mean
/// and standard deviation of the truncated normal prior on `mu_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriorSpec {
    pub k0: f64,
    pub theta0: f64,
    pub k1: f64,
    pub theta1: f64,
    pub k2: f64,
    pub theta2: f64,
    pub c1: f64,
    pub d1: f64,
    pub c2: f64,
    pub d2: f64,
    pub mu_prime1: f64,
    pub sigma_prime1: f64,
    pub mu_prime2: f64,
    pub sigma_prime2: f64,
}

impl Default for PriorSpec {
    /// The default hyper-parameter set used throughout the simulation studies.
    fn default() -> Self {
        Self {
            k0: 2.0,
            theta0: 3.0,
            k1: 4.0,
            theta1: 3.0,
            k2: 3.0,
            theta2: 2.0,
            c1: 0.1,
            d1: 0.25,
            c2: 3.0,
            d2: 2.0,
            mu_prime1: 0.0,
            sigma_prime1: 1.0,
            mu_prime2: 0.0,
            sigma_prime2: 1.0,
        }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k0", self.k0),
            ("theta0", self.theta0),
            ("k1", self.k1),
            ("theta1", self.theta1),
            ("k2", self.k2),
            ("theta2", self.theta2),
            ("c1", self.c1),
            ("d1", self.d1),
            ("c2", self.c2),
            ("d2", self.d2),
            ("sigma_prime1", self.sigma_prime1),
            ("sigma_prime2", self.sigma_prime2),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "prior hyper-parameter {name} must be finite and positive (got {v})"
                )));
            }
        }
        if !self.mu_prime1.is_finite() || !self.mu_prime2.is_finite() {
            return Err(Error::Config("prior means must be finite".into()));
        }
        Ok(())
    }

    fn alpha_hyper(&self, i: usize) -> (f64, f64) {
        match i {
            0 => (self.k0, self.theta0),
            1 => (self.k1, self.theta1),
            2 => (self.k2, self.theta2),
            _ => panic!("shape prior index must be 0, 1 or 2"),
        }
    }

    fn sigma_hyper(&self, j: usize) -> (f64, f64) {
        match j {
            1 => (self.c1, self.d1),
            2 => (self.c2, self.d2),
            _ => panic!("scale prior index must be 1 or 2"),
        }
    }

    fn mu_hyper(&self, j: usize) -> (f64, f64) {
        match j {
            1 => (self.mu_prime1, self.sigma_prime1),
            2 => (self.mu_prime2, self.sigma_prime2),
            _ => panic!("location prior index must be 1 or 2"),
        }
    }

    /// Gamma log-kernel `(k_i - 1) ln a - a / theta_i` for `alpha_i`, up to an
    /// additive constant; `None` for non-positive `a`.
    pub fn log_prior_alpha(&self, i: usize, alpha: f64) -> Option<f64> {
        let (k, theta) = self.alpha_hyper(i);
        gamma_kernel(alpha, k, theta)
    }

    /// Gamma log-kernel for `sigma_j`, up to an additive constant.
    pub fn log_prior_sigma(&self, j: usize, sigma: f64) -> Option<f64> {
        let (c, d) = self.sigma_hyper(j);
        gamma_kernel(sigma, c, d)
    }

    /// Truncated normal log-kernel for `mu_j`, up to an additive constant.
    ///
    /// Truncation is to the open interval below `data_min`: at `mu = data_min`
    /// the likelihood would contain a log of zero, so the boundary is
    /// excluded.
    pub fn log_prior_mu(&self, j: usize, mu: f64, data_min: f64) -> Option<f64> {
        if mu >= data_min {
            return None;
        }
        let (m, s) = self.mu_hyper(j);
        let z = (mu - m) / s;
        Some(-0.5 * z * z)
    }

    /// Joint log-prior kernel: the sum of the seven independent kernels.
    pub fn log_prior_joint(
        &self,
        p: &BvpaParams,
        data_min1: f64,
        data_min2: f64,
    ) -> Option<f64> {
        Some(
            self.log_prior_alpha(0, p.alpha0())?
                + self.log_prior_alpha(1, p.alpha1())?
                + self.log_prior_alpha(2, p.alpha2())?
                + self.log_prior_sigma(1, p.sigma1())?
                + self.log_prior_sigma(2, p.sigma2())?
                + self.log_prior_mu(1, p.mu1(), data_min1)?
                + self.log_prior_mu(2, p.mu2(), data_min2)?,
        )
    }
}

fn gamma_kernel(x: f64, shape: f64, scale: f64) -> Option<f64> {
    if x <= 0.0 {
        return None;
    }
    Some((shape - 1.0) * x.ln() - x / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Continuous, Gamma, Normal};

    #[test]
    fn defaults_match_study_hyperparameters() {
        let d = PriorSpec::default();
        assert_eq!(
            (d.c1, d.d1, d.c2, d.d2),
            (0.1, 0.25, 3.0, 2.0)
        );
        assert_eq!((d.k0, d.theta0), (2.0, 3.0));
        assert_eq!((d.k1, d.theta1), (4.0, 3.0));
        assert_eq!((d.k2, d.theta2), (3.0, 2.0));
        assert_eq!((d.mu_prime1, d.sigma_prime1), (0.0, 1.0));
        assert_eq!((d.mu_prime2, d.sigma_prime2), (0.0, 1.0));
        d.validate().unwrap();
    }

    #[test]
    fn alpha_kernel_values() {
        let mut spec = PriorSpec::default();
        spec.k0 = 1.0;
        spec.theta0 = 1.0;
        // exponential prior: kernel is -alpha
        assert_eq!(spec.log_prior_alpha(0, 2.0), Some(-2.0));
        spec.k0 = 2.0;
        spec.theta0 = 3.0;
        let v = spec.log_prior_alpha(0, 3.0).unwrap();
        assert!((v - (3f64.ln() - 1.0)).abs() < 1e-15);
        assert_eq!(spec.log_prior_alpha(0, -0.5), None);
        assert_eq!(spec.log_prior_alpha(0, 0.0), None);
    }

    #[test]
    fn sigma_kernel_values() {
        let mut spec = PriorSpec::default();
        spec.c1 = 1.0;
        spec.d1 = 1.0;
        assert_eq!(spec.log_prior_sigma(1, 2.0), Some(-2.0));
        spec.c1 = 2.0;
        spec.d1 = 3.0;
        let v = spec.log_prior_sigma(1, 3.0).unwrap();
        assert!((v - (3f64.ln() - 1.0)).abs() < 1e-15);
        assert_eq!(spec.log_prior_sigma(1, -1.0), None);
    }

    #[test]
    fn mu_kernel_values() {
        let spec = PriorSpec::default();
        // at the prior mode the kernel is zero
        assert_eq!(spec.log_prior_mu(1, 0.0, 3.0), Some(0.0));
        // boundary is excluded
        assert_eq!(spec.log_prior_mu(1, 3.0, 3.0), None);
        assert_eq!(spec.log_prior_mu(2, 2.0, 3.0), Some(-2.0));
    }

    #[test]
    fn kernel_differences_match_normalized_densities() {
        // Dropping constants must leave log-density differences intact.
        let spec = PriorSpec::default();
        let gamma = Gamma::new(spec.k1, 1.0 / spec.theta1).unwrap();
        let pairs = [(0.3, 2.5), (1.0, 4.0), (0.03, 9.0)];
        for (a, b) in pairs {
            let ours =
                spec.log_prior_alpha(1, a).unwrap() - spec.log_prior_alpha(1, b).unwrap();
            let full = gamma.ln_pdf(a) - gamma.ln_pdf(b);
            assert!((ours - full).abs() < 1e-10, "{a} vs {b}: {ours} vs {full}");
        }
        let normal = Normal::new(spec.mu_prime1, spec.sigma_prime1).unwrap();
        for (a, b) in [(-1.0, 0.5), (0.0, 0.9), (-3.0, -2.0)] {
            let ours = spec.log_prior_mu(1, a, 1.0).unwrap()
                - spec.log_prior_mu(1, b, 1.0).unwrap();
            let full = normal.ln_pdf(a) - normal.ln_pdf(b);
            assert!((ours - full).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_prior_is_sum_of_kernels() {
        let spec = PriorSpec::default();
        let p = BvpaParams::new(0.1, -0.2, 0.5, 0.8, 1.5, 1.0, 2.0).unwrap();
        let joint = spec.log_prior_joint(&p, 1.0, 1.0).unwrap();
        let sum = spec.log_prior_alpha(0, 1.5).unwrap()
            + spec.log_prior_alpha(1, 1.0).unwrap()
            + spec.log_prior_alpha(2, 2.0).unwrap()
            + spec.log_prior_sigma(1, 0.5).unwrap()
            + spec.log_prior_sigma(2, 0.8).unwrap()
            + spec.log_prior_mu(1, 0.1, 1.0).unwrap()
            + spec.log_prior_mu(2, -0.2, 1.0).unwrap();
        assert_eq!(joint, sum);
        // any undefined component makes the joint undefined
        assert!(spec.log_prior_joint(&p, 0.05, 1.0).is_none());
    }

    #[test]
    fn validate_rejects_nonpositive_hyperparameters() {
        let mut spec = PriorSpec::default();
        spec.d2 = 0.0;
        assert!(spec.validate().is_err());
    }
}
