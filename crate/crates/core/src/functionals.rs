//! Wigner entropy, the k-functionals `μ_k` and `ν_k`, marginal entropies and
//! the `L_k` bounds on the normalized monomial basis `F_ab`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{digamma, gauss_legendre_panels, log_gamma, xlogx, PolarRule, QuadratureSpec};
use crate::wigner::{certify_nonnegative, default_certify_rmax, WignerPolynomial, DEFAULT_NONNEG_TOL};

/// Largest accepted change of the entropy under node doubling.
pub const ENTROPY_DIVERGENCE_TOL: f64 = 1e-6;

/// Densities below this floor contribute nothing to `∫ W^k`.
pub const POWER_FLOOR: f64 = 1e-300;

/// Step of the central difference in `k` used by [`mu_k_slope_at_1`].
pub const SLOPE_STEP: f64 = 1e-4;

/// `1 + ln π`, the vacuum Wigner entropy.
pub fn vacuum_entropy() -> f64 {
    1.0 + PI.ln()
}

/// `ν_k[W0] = 1 / (k π^{k-1})`.
pub fn vacuum_nu_k(k: f64) -> f64 {
    1.0 / (k * PI.powf(k - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalResult {
    pub value: f64,
    /// `|value(spec) - value(refined spec)|`.
    pub estimated_error: f64,
    /// Spec whose nodes produced `value`.
    pub spec_used: QuadratureSpec,
}

/// JSON shape of a single functional in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub name: String,
    pub value: f64,
    pub estimated_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

impl FunctionalReport {
    pub fn new(name: &str, result: &FunctionalResult, k: Option<f64>) -> Self {
        Self { name: name.to_string(), value: result.value, estimated_error: result.estimated_error, k }
    }
}

/// `W` sampled at the nodes of a polar rule, with tiny certified-away
/// negatives clamped to zero.
struct SampledDensity {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl SampledDensity {
    fn new(w: &WignerPolynomial, spec: &QuadratureSpec) -> Result<Self> {
        let rule = PolarRule::new(spec)?;
        let rings = (0..rule.radii().len())
            .into_par_iter()
            .map(|i| {
                let r = rule.radii()[i];
                let gauss = (-r * r).exp() / PI;
                rule.ring_points(i)
                    .map(|(q, p)| {
                        let poly = w.polynomial(q, p);
                        if poly < -DEFAULT_NONNEG_TOL {
                            Err(Error::NotNonNegative { min_value: poly, q, p })
                        } else {
                            Ok(gauss * poly.max(0.0))
                        }
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let mut weights = Vec::with_capacity(rule.len());
        let mut values = Vec::with_capacity(rule.len());
        for (i, ring) in rings.into_iter().enumerate() {
            weights.extend(std::iter::repeat_n(rule.ring_weight(i), ring.len()));
            values.extend(ring);
        }
        Ok(Self { weights, values })
    }

    fn entropy(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (w, v) in self.weights.iter().zip(&self.values) {
            acc -= w * xlogx(*v)?;
        }
        Ok(acc)
    }

    fn power_integral(&self, k: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| **v > POWER_FLOOR)
            .map(|(w, v)| w * (k * v.ln()).exp())
            .sum()
    }
}

fn require_nonnegative(w: &WignerPolynomial) -> Result<()> {
    let report = certify_nonnegative(w, default_certify_rmax(w), DEFAULT_NONNEG_TOL);
    if report.is_nonnegative() {
        Ok(())
    } else {
        Err(Error::NotNonNegative { min_value: report.min_value, q: report.argmin.0, p: report.argmin.1 })
    }
}

fn check_k(k: f64) -> Result<()> {
    if k >= 1.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { function: "k-functional", x: k })
    }
}

/// `S[W] = -∫∫ W ln W`, computed at `spec` and at the doubled spec; the
/// doubled value is returned.
pub fn wigner_entropy(w: &WignerPolynomial, spec: &QuadratureSpec) -> Result<FunctionalResult> {
    require_nonnegative(w)?;
    let coarse = SampledDensity::new(w, spec)?.entropy()?;
    let fine_spec = spec.refined();
    let fine = SampledDensity::new(w, &fine_spec)?.entropy()?;
    let estimated_error = (fine - coarse).abs();
    if estimated_error > ENTROPY_DIVERGENCE_TOL {
        return Err(Error::QuadratureDivergence(estimated_error));
    }
    Ok(FunctionalResult { value: fine, estimated_error, spec_used: fine_spec })
}

/// `ν_k[W] = ∫∫ W^k` for every `k` in `ks`, sharing one set of samples.
pub fn nu_k_grid(w: &WignerPolynomial, ks: &[f64], spec: &QuadratureSpec) -> Result<Vec<FunctionalResult>> {
    for &k in ks {
        check_k(k)?;
    }
    require_nonnegative(w)?;
    let coarse = SampledDensity::new(w, spec)?;
    let fine_spec = spec.refined();
    let fine = SampledDensity::new(w, &fine_spec)?;
    Ok(ks
        .iter()
        .map(|&k| {
            let value = fine.power_integral(k);
            let estimated_error = (value - coarse.power_integral(k)).abs();
            FunctionalResult { value, estimated_error, spec_used: fine_spec }
        })
        .collect())
}

/// `ν_k[W] = ∫∫ W^k`, `k >= 1`.
pub fn nu_k(w: &WignerPolynomial, k: f64, spec: &QuadratureSpec) -> Result<FunctionalResult> {
    Ok(nu_k_grid(w, &[k], spec)?.remove(0))
}

fn nu_to_mu(k: f64, nu: FunctionalResult) -> FunctionalResult {
    let scale = k * PI.powf(k - 1.0);
    FunctionalResult { value: scale * nu.value, estimated_error: scale * nu.estimated_error, ..nu }
}

/// `μ_k[W] = k π^{k-1} ∫∫ W^k`, `k >= 1`.
pub fn mu_k(w: &WignerPolynomial, k: f64, spec: &QuadratureSpec) -> Result<FunctionalResult> {
    Ok(nu_to_mu(k, nu_k(w, k, spec)?))
}

/// `∂μ_k/∂k` at `k = 1` by a central difference with one Richardson step.
/// Equals `1 + ln π - S[W]`.
pub fn mu_k_slope_at_1(w: &WignerPolynomial, spec: &QuadratureSpec) -> Result<f64> {
    require_nonnegative(w)?;
    let sampled = SampledDensity::new(w, spec)?;
    let mu = |k: f64| k * PI.powf(k - 1.0) * sampled.power_integral(k);
    let central = |h: f64| (mu(1.0 + h) - mu(1.0 - h)) / (2.0 * h);
    let (wide, narrow) = (central(SLOPE_STEP), central(0.5 * SLOPE_STEP));
    Ok((4.0 * narrow - wide) / 3.0)
}

/// Marginal entropies and the two entropic inequalities
/// `S_q + S_p >= 1 + ln π` and `S_q + S_p >= S[W]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyChain {
    pub s_q: f64,
    pub s_p: f64,
    pub s_w: f64,
    pub uncertainty_ok: bool,
    pub subadditivity_ok: bool,
}

pub const CHAIN_TOL: f64 = 1e-9;

pub fn marginal_entropy_chain(w: &WignerPolynomial, spec: &QuadratureSpec) -> Result<EntropyChain> {
    let s_w = wigner_entropy(w, spec)?.value;
    let (pq, pp) = w.marginals();
    let nodes = gauss_legendre_panels(-spec.rmax, spec.rmax, 2 * spec.radial_nodes);
    let entropy_1d = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let mut acc = 0.0;
        for &(x, wt) in &nodes {
            acc -= wt * xlogx(f(x))?;
        }
        Ok(acc)
    };
    let s_q = entropy_1d(&|x| pq.evaluate(x))?;
    let s_p = entropy_1d(&|x| pp.evaluate(x))?;
    Ok(EntropyChain {
        s_q,
        s_p,
        s_w,
        uncertainty_ok: s_q + s_p >= vacuum_entropy() - CHAIN_TOL,
        subadditivity_ok: s_q + s_p >= s_w - CHAIN_TOL,
    })
}

fn check_k_unit_interval(k: f64) -> Result<()> {
    if (1.0..=2.0).contains(&k) {
        Ok(())
    } else {
        Err(Error::Domain { function: "F_ab norm", x: k })
    }
}

fn lg(x: f64) -> f64 {
    log_gamma(x).expect("positive argument")
}

/// `‖F_ab‖_k^k = ∫∫ |F_ab|^k` for the normalized monomial
/// `F_ab = W0 π q^a p^b / (Γ((1+a)/2) Γ((1+b)/2))`, in closed form.
pub fn f_ab_norm_pow_k(a: u32, b: u32, k: f64) -> Result<f64> {
    check_k_unit_interval(k)?;
    let (af, bf) = (a as f64, b as f64);
    let log = -k * (lg(0.5 * (1.0 + af)) + lg(0.5 * (1.0 + bf)))
        + lg(0.5 * (1.0 + af * k))
        + lg(0.5 * (1.0 + bf * k))
        - 0.5 * (af * k + bf * k + 2.0) * k.ln();
    Ok(log.exp())
}

/// `f(a, b, k) = ln(‖F_ab‖_k^k / ν_k[W0])`; non-positive on `k ∈ [1, 2]`.
pub fn norm_ratio_log(a: u32, b: u32, k: f64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    (k - 1.0) * PI.ln() - 0.5 * (af + bf) * k * k.ln() + lg(0.5 * (1.0 + af * k)) + lg(0.5 * (1.0 + bf * k))
        - k * lg(0.5 * (1.0 + af))
        - k * lg(0.5 * (1.0 + bf))
}

/// `∂f/∂k` in closed form through the digamma function.
pub fn norm_ratio_log_slope(a: u32, b: u32, k: f64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    let psi = |x: f64| digamma(x).expect("positive argument");
    let mut slope = PI.ln() - 0.5 * (af + bf) * (1.0 + k.ln()) - lg(0.5 * (1.0 + af)) - lg(0.5 * (1.0 + bf));
    if a > 0 {
        slope += 0.5 * af * psi(0.5 * (1.0 + af * k));
    }
    if b > 0 {
        slope += 0.5 * bf * psi(0.5 * (1.0 + bf * k));
    }
    slope
}

/// `g(a, b, k)`: upper bound on `∂f/∂k` from `ψ(x) <= ln x - 1/(2x)`.
pub fn norm_ratio_slope_bound(a: u32, b: u32, k: f64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    PI.ln() - 0.5 * (af + bf) * (1.0 + k.ln()) + 0.5 * af * (0.5 * (1.0 + af * k)).ln()
        - af / (2.0 * (1.0 + af * k))
        + 0.5 * bf * (0.5 * (1.0 + bf * k)).ln()
        - bf / (2.0 * (1.0 + bf * k))
        - lg(0.5 * (1.0 + af))
        - lg(0.5 * (1.0 + bf))
}

/// `h(a, b) = g(a, b, 1)`.
pub fn norm_ratio_slope_bound_at_one(a: u32, b: u32) -> f64 {
    norm_ratio_slope_bound(a, b, 1.0)
}
