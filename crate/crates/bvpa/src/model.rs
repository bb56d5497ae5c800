//! Marshall-Olkin bivariate Pareto (MOBVPA) and its absolutely continuous
//! Block-Basu variant (BB-BVPA): densities, survival functions, likelihood,
//! region partitioning and random-variate generation.
//!
//! With `u_j = (x_j - mu_j) / sigma_j` and `z = max(u_1, u_2)`, the MOBVPA
//! joint survival function is
//!
//! ```text
//! S(x1, x2) = (1 + z)^{-a0} (1 + u1)^{-a1} (1 + u2)^{-a2}
//! ```
//!
//! which splits into a singular component supported on the standardized
//! diagonal `u1 = u2` with weight `1 - p`, and an absolutely continuous
//! component with weight `p = (a1 + a2) / (a0 + a1 + a2)`. BB-BVPA is the
//! absolutely continuous component renormalized by `p`.
//!
//! All density work is done in log space; powers are evaluated as
//! `exp(-a * ln_1p(u))` so that behaviour near the location parameters stays
//! accurate.

use rand::Rng;

use crate::error::{Error, Result};

/// Identifies one coordinate of the seven-dimensional parameter vector.
///
/// The ordering of [`ParamName::ALL`] is the canonical column order used by
/// every serialized artifact and printed table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamName {
    Mu1,
    Mu2,
    Sigma1,
    Sigma2,
    Alpha0,
    Alpha1,
    Alpha2,
}

impl ParamName {
    pub const ALL: [ParamName; 7] = [
        ParamName::Mu1,
        ParamName::Mu2,
        ParamName::Sigma1,
        ParamName::Sigma2,
        ParamName::Alpha0,
        ParamName::Alpha1,
        ParamName::Alpha2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ParamName::Mu1 => "mu1",
            ParamName::Mu2 => "mu2",
            ParamName::Sigma1 => "sigma1",
            ParamName::Sigma2 => "sigma2",
            ParamName::Alpha0 => "alpha0",
            ParamName::Alpha1 => "alpha1",
            ParamName::Alpha2 => "alpha2",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|p| *p == self).unwrap()
    }
}

impl std::fmt::Display for ParamName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The seven-parameter vector `(mu1, mu2, sigma1, sigma2, alpha0, alpha1, alpha2)`.
///
/// Scales and shapes are strictly positive and every entry is finite; these
/// invariants are enforced at construction, so a `BvpaParams` value is always
/// usable. Whether the locations sit below the minima of a particular dataset
/// is a property of the pairing and is checked by [`log_likelihood`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpaParams {
    mu1: f64,
    mu2: f64,
    sigma1: f64,
    sigma2: f64,
    alpha0: f64,
    alpha1: f64,
    alpha2: f64,
}

impl BvpaParams {
    pub fn new(
        mu1: f64,
        mu2: f64,
        sigma1: f64,
        sigma2: f64,
        alpha0: f64,
        alpha1: f64,
        alpha2: f64,
    ) -> Result<Self> {
        let all = [mu1, mu2, sigma1, sigma2, alpha0, alpha1, alpha2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if sigma1 <= 0.0 || sigma2 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "scale parameters must be positive (sigma1={sigma1}, sigma2={sigma2})"
            )));
        }
        if alpha0 <= 0.0 || alpha1 <= 0.0 || alpha2 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "shape parameters must be positive (alpha0={alpha0}, alpha1={alpha1}, alpha2={alpha2})"
            )));
        }
        Ok(Self {
            mu1,
            mu2,
            sigma1,
            sigma2,
            alpha0,
            alpha1,
            alpha2,
        })
    }

    pub fn from_array(values: [f64; 7]) -> Result<Self> {
        let [m1, m2, s1, s2, a0, a1, a2] = values;
        Self::new(m1, m2, s1, s2, a0, a1, a2)
    }

    /// Field values in the canonical [`ParamName::ALL`] order.
    pub fn as_array(&self) -> [f64; 7] {
        [
            self.mu1,
            self.mu2,
            self.sigma1,
            self.sigma2,
            self.alpha0,
            self.alpha1,
            self.alpha2,
        ]
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }
    pub fn mu2(&self) -> f64 {
        self.mu2
    }
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }
    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn get(&self, p: ParamName) -> f64 {
        self.as_array()[p.index()]
    }

    /// Returns a copy with one coordinate replaced, revalidating invariants.
    pub fn with_value(&self, p: ParamName, value: f64) -> Result<Self> {
        let mut a = self.as_array();
        a[p.index()] = value;
        Self::from_array(a)
    }

    /// Sum of the three shape parameters.
    pub fn alpha_sum(&self) -> f64 {
        self.alpha0 + self.alpha1 + self.alpha2
    }

    /// Weight `p = (a1 + a2) / (a0 + a1 + a2)` of the absolutely continuous
    /// component in the MOBVPA mixture.
    pub fn mixture_weight(&self) -> f64 {
        (self.alpha1 + self.alpha2) / self.alpha_sum()
    }

    /// True when both locations lie strictly below the sample minima, which is
    /// required for the likelihood to be defined.
    pub fn located_below(&self, sample: &BivariateSample) -> bool {
        self.mu1 < sample.min_x1() && self.mu2 < sample.min_x2()
    }
}

/// A paired dataset with cached component-wise minima.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSample {
    pairs: Vec<(f64, f64)>,
    min_x1: f64,
    min_x2: f64,
}

impl BivariateSample {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParams("sample must be non-empty".into()));
        }
        if pairs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParams(
                "sample values must all be finite".into(),
            ));
        }
        let min_x1 = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let min_x2 = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        Ok(Self {
            pairs,
            min_x1,
            min_x2,
        })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn min_x1(&self) -> f64 {
        self.min_x1
    }

    pub fn min_x2(&self) -> f64 {
        self.min_x2
    }

    /// Values of the requested marginal.
    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j == 1 || j == 2, "marginal index must be 1 or 2");
        if j == 1 {
            self.pairs.iter().map(|p| p.0).collect()
        } else {
            self.pairs.iter().map(|p| p.1).collect()
        }
    }
}

/// Case selector for the piecewise densities: which side of the standardized
/// diagonal `u1 = u2` an evaluation point falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `u1 < u2` (index set I1).
    Lower,
    /// `u1 > u2` (index set I2).
    Upper,
    /// `u1 = u2` exactly (index set I0).
    Diagonal,
}

/// Index sets of a dataset relative to the standardized diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
}

impl RegionPartition {
    pub fn n0(&self) -> usize {
        self.i0.len()
    }
    pub fn n1(&self) -> usize {
        self.i1.len()
    }
    pub fn n2(&self) -> usize {
        self.i2.len()
    }
}

#[inline]
fn standardized(p: &BvpaParams, x1: f64, x2: f64) -> (f64, f64) {
    ((x1 - p.mu1) / p.sigma1, (x2 - p.mu2) / p.sigma2)
}

#[inline]
fn classify(u1: f64, u2: f64) -> Region {
    if u1 < u2 {
        Region::Lower
    } else if u1 > u2 {
        Region::Upper
    } else {
        Region::Diagonal
    }
}

/// Joint survival function `P(X1 > x1, X2 > x2)` of MOBVPA.
///
/// Coordinates below their locations contribute a survival factor of one,
/// so the function is defined on the whole plane.
pub fn survival_mo(p: &BvpaParams, x1: f64, x2: f64) -> f64 {
    let (u1, u2) = standardized(p, x1, x2);
    let u1 = u1.max(0.0);
    let u2 = u2.max(0.0);
    let z = u1.max(u2);
    (-p.alpha0 * z.ln_1p() - p.alpha1 * u1.ln_1p() - p.alpha2 * u2.ln_1p()).exp()
}

/// Survival function of the singular component: `(1 + z)^{-(a0+a1+a2)}`.
pub fn survival_singular(p: &BvpaParams, x1: f64, x2: f64) -> f64 {
    let (u1, u2) = standardized(p, x1, x2);
    let z = u1.max(u2).max(0.0);
    (-p.alpha_sum() * z.ln_1p()).exp()
}

/// Joint survival function of BB-BVPA (the absolutely continuous component).
///
/// The two off-diagonal branches coincide on the diagonal, so this is
/// continuous everywhere; coordinates below their locations are clamped as in
/// [`survival_mo`].
pub fn survival_bb(p: &BvpaParams, x1: f64, x2: f64) -> f64 {
    let (u1, u2) = standardized(p, x1, x2);
    let u1 = u1.max(0.0);
    let u2 = u2.max(0.0);
    let z = u1.max(u2);
    let asum = p.alpha_sum();
    let lead = asum / (p.alpha1 + p.alpha2);
    let corr = p.alpha0 / (p.alpha1 + p.alpha2);
    let tail = (-asum * z.ln_1p()).exp();
    let main = if u1 <= u2 {
        (-(p.alpha0 + p.alpha2) * u2.ln_1p() - p.alpha1 * u1.ln_1p()).exp()
    } else {
        (-(p.alpha0 + p.alpha1) * u1.ln_1p() - p.alpha2 * u2.ln_1p()).exp()
    };
    lead * main - corr * tail
}

/// Joint density of MOBVPA together with the region that selected the branch.
///
/// On the diagonal the returned value is the density `f0` with respect to the
/// one-dimensional measure along the standardized diagonal.
pub fn pdf_mo(p: &BvpaParams, x1: f64, x2: f64) -> Result<(Region, f64)> {
    let (u1, u2) = standardized(p, x1, x2);
    if u1 <= 0.0 || u2 <= 0.0 {
        return Err(Error::Domain(format!(
            "density requires x1 > mu1 and x2 > mu2 (got x=({x1}, {x2}))"
        )));
    }
    let region = classify(u1, u2);
    let log_f = match region {
        Region::Lower => {
            p.alpha1.ln() + (p.alpha0 + p.alpha2).ln()
                - p.sigma1.ln()
                - p.sigma2.ln()
                - (p.alpha0 + p.alpha2 + 1.0) * u2.ln_1p()
                - (p.alpha1 + 1.0) * u1.ln_1p()
        }
        Region::Upper => {
            p.alpha2.ln() + (p.alpha0 + p.alpha1).ln()
                - p.sigma1.ln()
                - p.sigma2.ln()
                - (p.alpha0 + p.alpha1 + 1.0) * u1.ln_1p()
                - (p.alpha2 + 1.0) * u2.ln_1p()
        }
        Region::Diagonal => {
            p.alpha0.ln() - p.sigma1.ln() - (p.alpha_sum() + 1.0) * u1.ln_1p()
        }
    };
    Ok((region, log_f.exp()))
}

/// Density of BB-BVPA: the corresponding MOBVPA branch divided by the mixture
/// weight `p`. Undefined on the standardized diagonal, where the absolutely
/// continuous part carries no mass.
pub fn pdf_bb(p: &BvpaParams, x1: f64, x2: f64) -> Result<f64> {
    let (region, f) = pdf_mo(p, x1, x2)?;
    if region == Region::Diagonal {
        return Err(Error::Degenerate(
            "BB-BVPA density is undefined on the standardized diagonal".into(),
        ));
    }
    Ok(f / p.mixture_weight())
}

/// Marginal density of `X1` under BB-BVPA.
pub fn marginal_pdf_x1(p: &BvpaParams, x1: f64) -> Result<f64> {
    marginal_pdf(x1, p.mu1, p.sigma1, p.alpha0, p.alpha1, p.alpha2)
}

/// Marginal density of `X2` under BB-BVPA.
pub fn marginal_pdf_x2(p: &BvpaParams, x2: f64) -> Result<f64> {
    marginal_pdf(x2, p.mu2, p.sigma2, p.alpha0, p.alpha2, p.alpha1)
}

/// Shared marginal form; for `X2` the roles of `alpha1` and `alpha2` swap.
///
/// The bracket `(a0 + a)(1+u)^{a_other} - a0` is strictly positive for
/// `u >= 0`, so the marginal is positive on its whole support.
fn marginal_pdf(x: f64, mu: f64, sigma: f64, a0: f64, a: f64, a_other: f64) -> Result<f64> {
    let u = (x - mu) / sigma;
    if u <= 0.0 {
        return Err(Error::Domain(format!(
            "marginal density requires x > mu (got x={x}, mu={mu})"
        )));
    }
    let asum = a0 + a + a_other;
    let lead = asum / (a + a_other);
    let base = (-(a0 + a + 1.0) * u.ln_1p()).exp();
    let bracket = (a0 + a) - a0 * (-a_other * u.ln_1p()).exp();
    Ok(lead / sigma * base * bracket)
}

/// Marginal survival `P(X1 > x)` under BB-BVPA (clamped below the location).
pub fn marginal_survival_x1(p: &BvpaParams, x: f64) -> f64 {
    marginal_survival(x, p.mu1, p.sigma1, p.alpha0, p.alpha1, p.alpha2)
}

/// Marginal survival `P(X2 > x)` under BB-BVPA (clamped below the location).
pub fn marginal_survival_x2(p: &BvpaParams, x: f64) -> f64 {
    marginal_survival(x, p.mu2, p.sigma2, p.alpha0, p.alpha2, p.alpha1)
}

fn marginal_survival(x: f64, mu: f64, sigma: f64, a0: f64, a: f64, a_other: f64) -> f64 {
    let u = ((x - mu) / sigma).max(0.0);
    let asum = a0 + a + a_other;
    let lead = asum / (a + a_other);
    let head = (-(a0 + a) * u.ln_1p()).exp();
    let tail = (-asum * u.ln_1p()).exp();
    lead * (head - (a0 / asum) * tail)
}

/// Classifies every observation relative to the standardized diagonal.
///
/// Membership in `I0` is decided by exact floating-point equality of the two
/// standardized coordinates.
pub fn partition(sample: &BivariateSample, p: &BvpaParams) -> RegionPartition {
    let mut part = RegionPartition {
        i0: Vec::new(),
        i1: Vec::new(),
        i2: Vec::new(),
    };
    for (i, &(x1, x2)) in sample.pairs().iter().enumerate() {
        let (u1, u2) = standardized(p, x1, x2);
        match classify(u1, u2) {
            Region::Lower => part.i1.push(i),
            Region::Upper => part.i2.push(i),
            Region::Diagonal => part.i0.push(i),
        }
    }
    part
}

/// BB-BVPA log-likelihood, or `None` where it is undefined.
///
/// Undefined cases: a location at or above the corresponding data minimum, or
/// any observation falling exactly on the standardized diagonal (the BB
/// likelihood has no singular term). Returning a value rather than an error
/// lets samplers probe out-of-domain points freely.
pub fn log_likelihood(sample: &BivariateSample, p: &BvpaParams) -> Option<f64> {
    if !p.located_below(sample) {
        return None;
    }
    let part = partition(sample, p);
    if part.n0() > 0 {
        return None;
    }
    let n = sample.len() as f64;
    let n1 = part.n1() as f64;
    let n2 = part.n2() as f64;
    let mut ll = n * p.alpha_sum().ln() - n * (p.alpha1 + p.alpha2).ln()
        + n1 * (p.alpha1.ln() + (p.alpha0 + p.alpha2).ln())
        + n2 * (p.alpha2.ln() + (p.alpha0 + p.alpha1).ln())
        - (n1 + n2) * (p.sigma1.ln() + p.sigma2.ln());
    for &i in &part.i1 {
        let (x1, x2) = sample.pairs()[i];
        let (u1, u2) = standardized(p, x1, x2);
        ll -= (p.alpha0 + p.alpha2 + 1.0) * u2.ln_1p() + (p.alpha1 + 1.0) * u1.ln_1p();
    }
    for &i in &part.i2 {
        let (x1, x2) = sample.pairs()[i];
        let (u1, u2) = standardized(p, x1, x2);
        ll -= (p.alpha0 + p.alpha1 + 1.0) * u1.ln_1p() + (p.alpha2 + 1.0) * u2.ln_1p();
    }
    Some(ll)
}

/// Inverse-CDF transform for Pareto(II): `mu + sigma * ((1-u)^{-1/alpha} - 1)`.
#[inline]
pub fn pareto2_inverse_cdf(mu: f64, sigma: f64, alpha: f64, u: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&u));
    mu + sigma * ((-(-u).ln_1p() / alpha).exp_m1())
}

/// Draws one Pareto(II)(mu, sigma, alpha) variate by inverse CDF.
pub fn sample_pareto2<R: Rng + ?Sized>(mu: f64, sigma: f64, alpha: f64, rng: &mut R) -> f64 {
    assert!(sigma > 0.0 && alpha > 0.0);
    pareto2_inverse_cdf(mu, sigma, alpha, rng.random::<f64>())
}

/// One MOBVPA pair plus the bookkeeping needed to recognize the singular
/// component.
#[derive(Debug, Clone, Copy)]
pub struct MoPair {
    pub x1: f64,
    pub x2: f64,
    /// True when the shared-shock branch attained the minimum in both
    /// coordinates. Decided by comparing the two candidates per coordinate,
    /// never by floating-point equality of the standardized coordinates.
    pub singular: bool,
}

/// Draws one pair from the constructive MOBVPA representation
/// `X_j = min(mu_j + sigma_j * U0, U_j)` with `U0 ~ PA(II)(0, 1, a0)` and
/// `U_j ~ PA(II)(mu_j, sigma_j, a_j)` mutually independent.
pub fn sample_mo_pair<R: Rng + ?Sized>(p: &BvpaParams, rng: &mut R) -> MoPair {
    let u0 = sample_pareto2(0.0, 1.0, p.alpha0, rng);
    let u1 = sample_pareto2(p.mu1, p.sigma1, p.alpha1, rng);
    let u2 = sample_pareto2(p.mu2, p.sigma2, p.alpha2, rng);
    let c1 = p.mu1 + p.sigma1 * u0;
    let c2 = p.mu2 + p.sigma2 * u0;
    let shock1 = c1 <= u1;
    let shock2 = c2 <= u2;
    MoPair {
        x1: if shock1 { c1 } else { u1 },
        x2: if shock2 { c2 } else { u2 },
        singular: shock1 && shock2,
    }
}

/// Draws `n` MOBVPA pairs.
pub fn sample_mo<R: Rng + ?Sized>(p: &BvpaParams, n: usize, rng: &mut R) -> Result<BivariateSample> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let pairs = (0..n)
        .map(|_| {
            let pair = sample_mo_pair(p, rng);
            (pair.x1, pair.x2)
        })
        .collect();
    BivariateSample::new(pairs)
}

/// Draws `n` BB-BVPA pairs by rejecting the singular component of MOBVPA,
/// also reporting how many raw MOBVPA draws were consumed.
pub fn sample_bb_with_count<R: Rng + ?Sized>(
    p: &BvpaParams,
    n: usize,
    rng: &mut R,
) -> Result<(BivariateSample, u64)> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let mut pairs = Vec::with_capacity(n);
    let mut raw = 0u64;
    while pairs.len() < n {
        let pair = sample_mo_pair(p, rng);
        raw += 1;
        if !pair.singular {
            pairs.push((pair.x1, pair.x2));
        }
    }
    Ok((BivariateSample::new(pairs)?, raw))
}

/// Draws `n` BB-BVPA pairs.
pub fn sample_bb<R: Rng + ?Sized>(p: &BvpaParams, n: usize, rng: &mut R) -> Result<BivariateSample> {
    sample_bb_with_count(p, n, rng).map(|(s, _)| s)
}
