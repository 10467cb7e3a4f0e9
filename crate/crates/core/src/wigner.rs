//! Exact polynomial-times-Gaussian Wigner representation.
//!
//! Every state on a truncated Fock space has a Wigner function of the form
//!
//! ```text
//! W(q, p) = W0(q, p) · Σ_ab c_ab q^a p^b,     W0(q, p) = e^{-q²-p²} / π,
//! ```
//!
//! under the convention `W(q,p) = (1/π) ∫ dy e^{2ipy} ⟨q-y|ρ|q+y⟩` with
//! unit-width Hermite wavefunctions, which makes the vacuum exactly `W0`.
//! The coefficient table of `|n⟩⟨m|` is built from the associated-Laguerre
//! closed form; [`DirectWignerOracle`] evaluates the defining integral
//! independently by Gauss–Hermite quadrature.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::ops::{AddAssign, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_state::{check_square_hermitian, DensityMatrix};
use crate::numerics::{gauss_hermite, log_gamma};

/// Largest tolerated imaginary residue in a Wigner coefficient.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Tolerance on the gamma-weighted normalization sum.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Default tolerance for [`certify_nonnegative`] on the polynomial factor.
pub const DEFAULT_NONNEG_TOL: f64 = 1e-9;

/// Dense coefficient table `c_ab`, `0 <= a, b <= degree`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable<T> {
    degree: usize,
    data: Vec<T>,
}

impl<T: Copy + Default + AddAssign + Mul<Output = T>> CoeffTable<T> {
    pub fn zeros(degree: usize) -> Self {
        let side = degree + 1;
        Self { degree, data: vec![T::default(); side * side] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn index(&self, a: usize, b: usize) -> usize {
        a * (self.degree + 1) + b
    }

    /// `c_ab`, zero outside the table.
    pub fn get(&self, a: usize, b: usize) -> T {
        if a > self.degree || b > self.degree {
            T::default()
        } else {
            self.data[self.index(a, b)]
        }
    }

    pub fn set(&mut self, a: usize, b: usize, value: T) {
        let i = self.index(a, b);
        self.data[i] = value;
    }

    pub fn add(&mut self, a: usize, b: usize, value: T) {
        let i = self.index(a, b);
        self.data[i] += value;
    }

    /// All `(a, b, c_ab)` entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let side = self.degree + 1;
        self.data.iter().enumerate().map(move |(i, &c)| (i / side, i % side, c))
    }

    pub fn map<U, F: Fn(usize, usize, T) -> U>(&self, f: F) -> CoeffTable<U> {
        let side = self.degree + 1;
        CoeffTable {
            degree: self.degree,
            data: self.data.iter().enumerate().map(|(i, &c)| f(i / side, i % side, c)).collect(),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Complex coefficient table of `P_nm = W_{|n⟩⟨m|} / W0`.
///
/// For `m >= n`, `P_nm = (-1)^n √(n!/m!) (√2 z)^{m-n} L_n^{(m-n)}(2|z|²)`
/// with `z = q + ip`; `P_mn = conj(P_nm)`.
pub fn wigner_basis_poly(n: usize, m: usize) -> CoeffTable<Complex64> {
    if n > m {
        return wigner_basis_poly(m, n).map(|_, _, c| c.conj());
    }
    let l = m - n;
    let mut table = CoeffTable::zeros(n + m);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let ratio: f64 = (n + 1..=m).fold(1.0, |acc, k| acc / k as f64);
    let prefactor = sign * ratio.sqrt() * 2f64.powf(0.5 * l as f64);
    let i_pow = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    for j in 0..=n {
        // coefficient of (q² + p²)^j in L_n^{(l)}(2(q² + p²))
        let lambda = if j % 2 == 0 { 1.0 } else { -1.0 } * binomial(m, n - j) * 2f64.powi(j as i32) / factorial(j);
        for s in 0..=j {
            let radial = lambda * binomial(j, s);
            for t in 0..=l {
                let c = i_pow[t % 4] * (prefactor * radial * binomial(l, t));
                table.add(l - t + 2 * s, t + 2 * (j - s), c);
            }
        }
    }
    table
}

/// Real polynomial factor of a Wigner function, `W = W0 · Σ c_ab q^a p^b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerPolynomial {
    coeffs: CoeffTable<f64>,
}

impl WignerPolynomial {
    /// Wraps a coefficient table after checking the normalization.
    pub fn from_coefficients(coeffs: CoeffTable<f64>) -> Result<Self> {
        let w = Self { coeffs };
        let norm = w.normalization();
        if !((norm - 1.0).abs() <= NORMALIZATION_TOL) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(w)
    }

    /// `c_ab = Σ_nm ρ_nm P_nm[a][b]` for any unit-trace Hermitian operator.
    ///
    /// Positivity is not required, so this also covers operators that are
    /// not states (e.g. coefficient families written down by hand).
    pub fn from_operator(op: &DMatrix<Complex64>) -> Result<Self> {
        check_square_hermitian(op)?;
        let dim = op.nrows();
        let degree = 2 * (dim - 1);
        let mut acc: CoeffTable<Complex64> = CoeffTable::zeros(degree);
        for n in 0..dim {
            for m in 0..dim {
                let rho = op[(n, m)];
                if rho == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (a, b, c) in wigner_basis_poly(n, m).iter() {
                    acc.add(a, b, rho * c);
                }
            }
        }
        if let Some((a, b, c)) = acc.iter().find(|(_, _, c)| c.im.abs() > IMAG_RESIDUE_TOL) {
            return Err(Error::NonRealCoefficient { a, b, im: c.im });
        }
        Self::from_coefficients(acc.map(|_, _, c| c.re))
    }

    pub fn from_density_matrix(rho: &DensityMatrix) -> Result<Self> {
        Self::from_operator(rho.entries())
    }

    pub fn vacuum() -> Self {
        let mut coeffs = CoeffTable::zeros(0);
        coeffs.set(0, 0, 1.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &CoeffTable<f64> {
        &self.coeffs
    }

    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        self.coeffs.get(a, b)
    }

    /// Size of the coefficient table (`2(N-1)` for an `N`-dimensional state).
    pub fn degree(&self) -> usize {
        self.coeffs.degree()
    }

    /// Largest `a + b` with a non-zero coefficient.
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().filter(|(_, _, c)| *c != 0.0).map(|(a, b, _)| a + b).max().unwrap_or(0)
    }

    /// `Σ_{a,b even} c_ab Γ((1+a)/2) Γ((1+b)/2) / π`, which equals `∫ W`.
    pub fn normalization(&self) -> f64 {
        self.coeffs
            .iter()
            .filter(|(a, b, c)| a % 2 == 0 && b % 2 == 0 && *c != 0.0)
            .map(|(a, b, c)| c * normalized_moment(a) * normalized_moment(b))
            .sum()
    }

    /// Polynomial factor `P(q, p) = Σ c_ab q^a p^b` (Horner in both variables).
    pub fn polynomial(&self, q: f64, p: f64) -> f64 {
        let d = self.degree();
        let mut acc = 0.0;
        for a in (0..=d).rev() {
            let mut row = 0.0;
            for b in (0..=d).rev() {
                row = row * p + self.coeffs.get(a, b);
            }
            acc = acc * q + row;
        }
        acc
    }

    /// `W(q, p)`.
    pub fn evaluate(&self, q: f64, p: f64) -> f64 {
        (-q * q - p * p).exp() / PI * self.polynomial(q, p)
    }

    /// `P`, its gradient and Hessian `(P, [Pq, Pp], [Pqq, Pqp, Ppp])`.
    fn polynomial_derivatives(&self, q: f64, p: f64) -> (f64, [f64; 2], [f64; 3]) {
        let d = self.degree();
        let powers = |x: f64| {
            let mut v = vec![1.0; d + 1];
            for i in 1..=d {
                v[i] = v[i - 1] * x;
            }
            v
        };
        let (qp, pp) = (powers(q), powers(p));
        let at = |v: &[f64], i: isize| if i < 0 { 0.0 } else { v[i as usize] };
        let (mut f, mut g, mut h) = (0.0, [0.0; 2], [0.0; 3]);
        for (a, b, c) in self.coeffs.iter() {
            if c == 0.0 {
                continue;
            }
            let (ai, bi) = (a as isize, b as isize);
            let (af, bf) = (a as f64, b as f64);
            f += c * qp[a] * pp[b];
            g[0] += c * af * at(&qp, ai - 1) * pp[b];
            g[1] += c * bf * qp[a] * at(&pp, bi - 1);
            h[0] += c * af * (af - 1.0) * at(&qp, ai - 2) * pp[b];
            h[1] += c * af * bf * at(&qp, ai - 1) * at(&pp, bi - 1);
            h[2] += c * bf * (bf - 1.0) * qp[a] * at(&pp, bi - 2);
        }
        (f, g, h)
    }

    /// Position and momentum marginals, integrating the other variable analytically.
    pub fn marginals(&self) -> (GaussianMarginal, GaussianMarginal) {
        let d = self.degree();
        let mut mq = vec![0.0; d + 1];
        let mut mp = vec![0.0; d + 1];
        for (a, b, c) in self.coeffs.iter() {
            if c == 0.0 {
                continue;
            }
            mq[a] += c * normalized_moment(b);
            mp[b] += c * normalized_moment(a);
        }
        (GaussianMarginal { coeffs: mq }, GaussianMarginal { coeffs: mp })
    }
}

/// `∫ x^a e^{-x²} dx / √π`, exactly 1 for `a = 0`.
fn normalized_moment(a: usize) -> f64 {
    if a % 2 == 1 {
        0.0
    } else {
        (log_gamma(0.5 * (1.0 + a as f64)).expect("positive argument") - 0.5 * PI.ln()).exp()
    }
}

/// `W(q, p)` for a coefficient table.
pub fn evaluate(w: &WignerPolynomial, q: f64, p: f64) -> f64 {
    w.evaluate(q, p)
}

/// Wigner polynomial of a validated state.
pub fn to_wigner_polynomial(rho: &DensityMatrix) -> Result<WignerPolynomial> {
    WignerPolynomial::from_density_matrix(rho)
}

/// One-dimensional density `(1/√π) e^{-x²} Σ m_a x^a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMarginal {
    coeffs: Vec<f64>,
}

impl GaussianMarginal {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        (-x * x).exp() / PI.sqrt() * poly
    }

    /// Exact `∫ P(x) dx`.
    pub fn integral(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(a, c)| c * normalized_moment(a)).sum::<f64>()
    }
}

/// Independent evaluation of `(1/π) ∫ dy e^{2ipy} ⟨q-y|ρ|q+y⟩` by
/// Gauss–Hermite quadrature with Hermite-function wavefunctions.
#[derive(Debug, Clone)]
pub struct DirectWignerOracle {
    rho: DMatrix<Complex64>,
    rule: Vec<(f64, f64)>,
}

impl DirectWignerOracle {
    pub fn new(rho: &DensityMatrix) -> Self {
        let nodes = (2 * rho.dim() + 8).max(100);
        Self { rho: rho.entries().clone(), rule: gauss_hermite(nodes) }
    }

    /// Hermite-function polynomial parts `h_n(x) = ψ_n(x) e^{x²/2}`.
    fn hermite_parts(dim: usize, x: f64) -> Vec<f64> {
        let mut h = vec![0.0; dim];
        h[0] = PI.powf(-0.25);
        if dim > 1 {
            h[1] = 2f64.sqrt() * x * h[0];
        }
        for k in 1..dim.saturating_sub(1) {
            let kf = k as f64;
            h[k + 1] = (2.0 / (kf + 1.0)).sqrt() * x * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        }
        h
    }

    pub fn evaluate(&self, q: f64, p: f64) -> f64 {
        let dim = self.rho.nrows();
        let mut total = Complex64::new(0.0, 0.0);
        for &(y, w) in &self.rule {
            let left = Self::hermite_parts(dim, q - y);
            let right = Self::hermite_parts(dim, q + y);
            let mut kernel = Complex64::new(0.0, 0.0);
            for n in 0..dim {
                for m in 0..dim {
                    kernel += self.rho[(n, m)] * (left[n] * right[m]);
                }
            }
            total += Complex64::from_polar(w, 2.0 * p * y) * kernel;
        }
        (-q * q).exp() / PI * total.re
    }
}

/// One-off evaluation through [`DirectWignerOracle`].
pub fn wigner_direct_oracle(rho: &DensityMatrix, q: f64, p: f64) -> f64 {
    DirectWignerOracle::new(rho).evaluate(q, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NonNegative,
    Negative,
}

/// Outcome of [`certify_nonnegative`]. `min_value` is the smallest value of
/// the polynomial factor found; `argmin` is where it was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonNegativityReport {
    pub min_value: f64,
    pub argmin: (f64, f64),
    pub verdict: Verdict,
}

impl NonNegativityReport {
    pub fn is_nonnegative(&self) -> bool {
        self.verdict == Verdict::NonNegative
    }
}

/// Search radius used when none is given: `√degree + 6`.
pub fn default_certify_rmax(w: &WignerPolynomial) -> f64 {
    (w.degree() as f64).sqrt() + 6.0
}

const GRID_RINGS: usize = 48;
const GRID_ANGLES: usize = 96;
const REFINE_STARTS: usize = 12;

/// Minimizes the polynomial factor of `W` (the Gaussian factor is positive)
/// over a polar grid of radius `rmax`, refines the lowest grid points with
/// damped Newton iterations, and also checks the sign of the leading
/// homogeneous part, which decides the behaviour at infinity.
pub fn certify_nonnegative(w: &WignerPolynomial, rmax: f64, tol: f64) -> NonNegativityReport {
    let mut candidates: Vec<(f64, (f64, f64))> = Vec::with_capacity(GRID_RINGS * GRID_ANGLES + 1);
    candidates.push((w.polynomial(0.0, 0.0), (0.0, 0.0)));
    for i in 1..=GRID_RINGS {
        let r = rmax * i as f64 / GRID_RINGS as f64;
        for j in 0..GRID_ANGLES {
            let theta = 2.0 * PI * (j as f64 + 0.5 * (i % 2) as f64) / GRID_ANGLES as f64;
            let (q, p) = (r * theta.cos(), r * theta.sin());
            candidates.push((w.polynomial(q, p), (q, p)));
        }
    }
    if let Some(far) = negative_direction_witness(w, rmax) {
        candidates.push(far);
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut best = candidates[0];
    for &(_, start) in candidates.iter().take(REFINE_STARTS) {
        let local = newton_minimize(w, start);
        if local.0 < best.0 {
            best = local;
        }
    }
    let verdict = if best.0 >= -tol { Verdict::NonNegative } else { Verdict::Negative };
    NonNegativityReport { min_value: best.0, argmin: best.1, verdict }
}

/// A point where `P < 0` far from the origin, if the leading form is negative
/// in some direction.
fn negative_direction_witness(w: &WignerPolynomial, rmax: f64) -> Option<(f64, (f64, f64))> {
    let top = w.effective_degree();
    if top == 0 {
        return None;
    }
    let form = |theta: f64| {
        let (c, s) = (theta.cos(), theta.sin());
        w.coeffs()
            .iter()
            .filter(|(a, b, _)| a + b == top)
            .map(|(a, b, v)| v * c.powi(a as i32) * s.powi(b as i32))
            .sum::<f64>()
    };
    let (theta, value) = (0..720)
        .map(|j| 2.0 * PI * j as f64 / 720.0)
        .map(|t| (t, form(t)))
        .min_by(|x, y| x.1.total_cmp(&y.1))?;
    if value >= 0.0 {
        return None;
    }
    let mut r = rmax;
    for _ in 0..64 {
        let (q, p) = (r * theta.cos(), r * theta.sin());
        let v = w.polynomial(q, p);
        if v < 0.0 {
            return Some((v, (q, p)));
        }
        r *= 2.0;
    }
    None
}

fn newton_minimize(w: &WignerPolynomial, start: (f64, f64)) -> (f64, (f64, f64)) {
    let (mut q, mut p) = start;
    let (mut f, mut g, mut h) = w.polynomial_derivatives(q, p);
    for _ in 0..200 {
        let det = h[0] * h[2] - h[1] * h[1];
        let (dq, dp) = if h[0] > 0.0 && det > 0.0 {
            (-(h[2] * g[0] - h[1] * g[1]) / det, -(h[0] * g[1] - h[1] * g[0]) / det)
        } else {
            let scale = (h[0] * h[0] + 2.0 * h[1] * h[1] + h[2] * h[2]).sqrt().max(1e-12);
            (-g[0] / scale, -g[1] / scale)
        };
        let slope = g[0] * dq + g[1] * dp;
        if !(slope < 0.0) {
            break;
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let (nq, np) = (q + t * dq, p + t * dp);
            let nf = w.polynomial(nq, np);
            if nf <= f + 1e-4 * t * slope {
                let step = t * (dq * dq + dp * dp).sqrt();
                q = nq;
                p = np;
                moved = step > 1e-15 * (1.0 + (q * q + p * p).sqrt());
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
        (f, g, h) = w.polynomial_derivatives(q, p);
    }
    (f, (q, p))
}

/// Square evaluation grid `[-extent, extent]²` with `points` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub extent: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { extent: 4.0, points: 21 }
    }
}

impl GridSpec {
    pub fn axis(&self) -> Vec<f64> {
        let n = self.points.max(1);
        if n == 1 {
            return vec![0.0];
        }
        (0..n).map(|i| -self.extent + 2.0 * self.extent * i as f64 / (n - 1) as f64).collect()
    }
}

/// `(q, p, W)` rows over the grid, `q` varying slowest.
pub fn sample_grid(w: &WignerPolynomial, grid: &GridSpec) -> Vec<(f64, f64, f64)> {
    let axis = grid.axis();
    axis.iter().flat_map(|&q| axis.iter().map(move |&p| (q, p, w.evaluate(q, p)))).collect()
}

/// CSV with header `q,p,W` and 17 significant digits.
pub fn write_grid_csv<W: Write>(rows: &[(f64, f64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "q,p,W")?;
    for (q, p, v) in rows {
        writeln!(out, "{q:.16e},{p:.16e},{v:.16e}")?;
    }
    Ok(())
}
