//! Gauss-type node tables and the polar phase-space integrator.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes per Gauss–Legendre panel.
const PANEL_NODES: usize = 20;

/// Node counts and cutoffs for 2D phase-space integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub rmax: f64,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { radial_nodes: 200, angular_nodes: 256, rmax: 8.0, abs_tol: 1e-10 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 || self.angular_nodes < 8 {
            return Err(Error::InvalidSpec(format!(
                "node counts must be >= 8 (radial {}, angular {})",
                self.radial_nodes, self.angular_nodes
            )));
        }
        if !(self.rmax > 0.0) || !self.rmax.is_finite() {
            return Err(Error::InvalidSpec(format!("rmax must be positive, got {}", self.rmax)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidSpec(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        Ok(())
    }

    /// Same cutoff with both node counts doubled.
    pub fn refined(&self) -> Self {
        Self { radial_nodes: 2 * self.radial_nodes, angular_nodes: 2 * self.angular_nodes, ..*self }
    }
}

fn nonzero(n: usize) -> NonZeroUsize {
    NonZeroUsize::new(n.max(1)).expect("positive")
}

/// Composite Gauss–Legendre rule on `[a, b]` with `total` nodes split into
/// equal panels of at most 20 nodes.
pub fn gauss_legendre_panels(a: f64, b: f64, total: usize) -> Vec<(f64, f64)> {
    let per_panel = total.clamp(1, PANEL_NODES);
    let panels = total.div_ceil(per_panel).max(1);
    let rule = GaussLegendre::new(nonzero(per_panel));
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * per_panel);
    for k in 0..panels {
        let lo = a + k as f64 * width;
        let mid = lo + 0.5 * width;
        for &(x, w) in rule.as_node_weight_pairs() {
            out.push((mid + 0.5 * width * x, 0.5 * width * w));
        }
    }
    out
}

/// Gauss–Hermite nodes and weights for `∫ e^{-y²} f(y) dy`.
pub fn gauss_hermite(nodes: usize) -> Vec<(f64, f64)> {
    GaussHermite::new(nonzero(nodes)).as_node_weight_pairs().to_vec()
}

/// Tensor rule in polar coordinates: Gauss–Legendre panels in `R` times the
/// periodic trapezoid rule in `θ`. Radial weights already carry the Jacobian `R`.
#[derive(Debug, Clone)]
pub struct PolarRule {
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    angular_weight: f64,
}

impl PolarRule {
    pub fn new(spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let (radii, radial_weights): (Vec<f64>, Vec<f64>) =
            gauss_legendre_panels(0.0, spec.rmax, spec.radial_nodes)
                .into_iter()
                .map(|(r, w)| (r, w * r))
                .unzip();
        let m = spec.angular_nodes;
        let (cos, sin) = (0..m)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / m as f64;
                (theta.cos(), theta.sin())
            })
            .unzip();
        Ok(Self { radii, radial_weights, cos, sin, angular_weight: 2.0 * PI / m as f64 })
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.cos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Full node weight (radial weight, Jacobian and angular step) of ring `i`.
    pub fn ring_weight(&self, i: usize) -> f64 {
        self.radial_weights[i] * self.angular_weight
    }

    /// Cartesian coordinates `(q, p)` of every node on ring `i`.
    pub fn ring_points(&self, i: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let r = self.radii[i];
        self.cos.iter().zip(&self.sin).map(move |(c, s)| (r * c, r * s))
    }

    /// `∫∫ f(q, p) dq dp` over the disk of radius `rmax`.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        self.try_integrate(|q, p| Ok(f(q, p))).expect("infallible integrand")
    }

    /// Like [`integrate`](Self::integrate) for an integrand that can fail.
    /// Rings are summed in a fixed order, so the result is deterministic.
    pub fn try_integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync,
    {
        let rings = (0..self.radii.len())
            .into_par_iter()
            .map(|i| {
                let mut acc = 0.0;
                for (q, p) in self.ring_points(i) {
                    acc += f(q, p)?;
                }
                Ok(acc * self.ring_weight(i))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(rings.iter().sum())
    }
}

/// `∫₀^{2π}∫₀^{rmax} f(R, θ) R dR dθ`.
pub fn polar_integrate<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    spec.validate()?;
    let radial: Vec<(f64, f64)> = gauss_legendre_panels(0.0, spec.rmax, spec.radial_nodes);
    let m = spec.angular_nodes;
    let dtheta = 2.0 * PI / m as f64;
    let rings: Vec<f64> = radial
        .par_iter()
        .map(|&(r, w)| {
            let ring: f64 = (0..m).map(|j| f(r, j as f64 * dtheta)).sum();
            ring * w * r * dtheta
        })
        .collect();
    Ok(rings.iter().sum())
}
