//! Qubits in the `{|0⟩, |1⟩}` Fock subspace: the Wigner non-negativity
//! region, its boundary family, the closed-form boundary entropy and the
//! disk sweep of the entropy surface.

use std::f64::consts::{PI, SQRT_2};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_state::{BlochVector, DensityMatrix};
use crate::functionals::wigner_entropy;
use crate::numerics::{expint_ei, QuadratureSpec};
use crate::wigner::{to_wigner_polynomial, CoeffTable, WignerPolynomial};

/// Slack on the region inequality.
pub const REGION_TOL: f64 = 1e-12;

/// Above this `r3` the boundary entropy uses its `r3 → 1` limit.
pub const BOUNDARY_LIMIT_BRANCH: f64 = 1.0 - 1e-12;

/// Largest accepted second difference of the entropy along `r1`.
pub const CONCAVITY_TOL: f64 = 1e-6;

/// Accuracy of the spot-checked second derivative of `-W ln W`.
pub const INTEGRAND_IDENTITY_TOL: f64 = 1e-8;

/// `2(r1² + r2²) + (1 - 2 r3)²`; the Wigner function is non-negative iff this is at most 1.
pub fn region_value(b: &BlochVector) -> f64 {
    2.0 * (b.r1 * b.r1 + b.r2 * b.r2) + (1.0 - 2.0 * b.r3).powi(2)
}

pub fn qubit_nonneg_condition(b: &BlochVector) -> bool {
    region_value(b) <= 1.0 + REGION_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Qubit on the boundary of the non-negativity region, `r2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryQubit {
    r3: f64,
    branch: Branch,
}

impl BoundaryQubit {
    /// `r3 ∈ (0, 1]`.
    pub fn new(r3: f64, branch: Branch) -> Result<Self> {
        if !(r3 > 0.0 && r3 <= 1.0) {
            return Err(Error::Domain { function: "BoundaryQubit", x: r3 });
        }
        Ok(Self { r3, branch })
    }

    pub fn r3(&self) -> f64 {
        self.r3
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn r1(&self) -> f64 {
        self.branch.sign() * (2.0 * self.r3 * (1.0 - self.r3)).sqrt()
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector { r1: self.r1(), r2: 0.0, r3: self.r3 }
    }

    pub fn wigner(&self) -> WignerPolynomial {
        boundary_wigner(self)
    }
}

/// `W = W0 [r3 ± 2q √(r3(1-r3)) + (1-r3)(q² + p²)]`.
pub fn boundary_wigner(bq: &BoundaryQubit) -> WignerPolynomial {
    let r3 = bq.r3;
    let mut c = CoeffTable::zeros(2);
    c.set(0, 0, r3);
    c.set(1, 0, bq.branch.sign() * 2.0 * (r3 * (1.0 - r3)).sqrt());
    c.set(2, 0, 1.0 - r3);
    c.set(0, 2, 1.0 - r3);
    WignerPolynomial::from_coefficients(c).expect("boundary family is normalized")
}

/// Closed-form entropy of the boundary family,
/// `e^{-x}(1-r3) + r3 + ln(π/r3) + Ei(-x)` with `x = r3/(1-r3)`.
pub fn boundary_entropy_closed(r3: f64) -> Result<f64> {
    if !(r3 > 0.0 && r3 <= 1.0) {
        return Err(Error::Domain { function: "boundary_entropy_closed", x: r3 });
    }
    if r3 > BOUNDARY_LIMIT_BRANCH {
        return Ok(r3 + (PI / r3).ln());
    }
    let x = r3 / (1.0 - r3);
    Ok((-x).exp() * (1.0 - r3) + r3 + (PI / r3).ln() + expint_ei(-x)?)
}

/// `dS_b/dr3 = ((1-r3)/r3)(e^{-r3/(1-r3)} - 1)`, never positive.
pub fn boundary_entropy_derivative(r3: f64) -> Result<f64> {
    if !(r3 > 0.0 && r3 < 1.0) {
        return Err(Error::Domain { function: "boundary_entropy_derivative", x: r3 });
    }
    Ok((1.0 - r3) / r3 * (-r3 / (1.0 - r3)).exp_m1())
}

fn qubit_wigner(r1: f64, r3: f64) -> Result<WignerPolynomial> {
    to_wigner_polynomial(&DensityMatrix::qubit_from_bloch(BlochVector::new(r1, 0.0, r3)?)?)
}

/// Closed form of `∂²(-W ln W)/∂r1²` for `r2 = 0`: `-2q² e^{-2q²-2p²} / (π² W)`.
pub fn integrand_second_derivative(r1: f64, r3: f64, q: f64, p: f64) -> Result<f64> {
    let w = qubit_wigner(r1, r3)?.evaluate(q, p);
    Ok(-2.0 * q * q * (-2.0 * q * q - 2.0 * p * p).exp() / (PI * PI * w))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub concave: bool,
    pub r1_grid: Vec<f64>,
    pub entropies: Vec<f64>,
    /// Second differences, rescaled on uneven grids to match the even-grid form.
    pub second_differences: Vec<f64>,
    pub identity_max_error: f64,
}

const IDENTITY_POINTS: [(f64, f64); 4] = [(0.3, -0.2), (-0.7, 0.5), (1.1, 0.4), (-0.4, -1.2)];

fn identity_error(r1: f64, r3: f64) -> Result<f64> {
    let neg_wlnw = |r: f64, q: f64, p: f64| -> Result<f64> {
        let w = qubit_wigner(r, r3)?.evaluate(q, p);
        Ok(-w * w.ln())
    };
    let h = 1e-3 * (2.0 * r3 * (1.0 - r3)).sqrt().max(1e-3);
    let mut worst: f64 = 0.0;
    for &(q, p) in &IDENTITY_POINTS {
        let second = |h: f64| -> Result<f64> {
            Ok((neg_wlnw(r1 + h, q, p)? - 2.0 * neg_wlnw(r1, q, p)? + neg_wlnw(r1 - h, q, p)?) / (h * h))
        };
        // the stencil may poke outside the region; skip such points
        let (Ok(wide), Ok(narrow)) = (second(h), second(0.5 * h)) else { continue };
        let fd = (4.0 * narrow - wide) / 3.0;
        let exact = integrand_second_derivative(r1, r3, q, p)?;
        worst = worst.max((fd - exact).abs());
    }
    Ok(worst)
}

/// Entropy along `r1` at fixed `r3` must be concave.
pub fn concavity_check(r3: f64, r1_grid: &[f64], spec: &QuadratureSpec) -> Result<ConcavityReport> {
    let mut grid = r1_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    for &r1 in &grid {
        let value = region_value(&BlochVector { r1, r2: 0.0, r3 });
        if value > 1.0 + REGION_TOL {
            return Err(Error::RegionViolation { r1, r3, value });
        }
    }
    let entropies = grid
        .par_iter()
        .map(|&r1| Ok(wigner_entropy(&qubit_wigner(r1, r3)?, spec)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let second_differences: Vec<f64> = (1..grid.len().saturating_sub(1))
        .map(|i| {
            let (hl, hr) = (grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
            let slope_l = (entropies[i] - entropies[i - 1]) / hl;
            let slope_r = (entropies[i + 1] - entropies[i]) / hr;
            0.5 * (hl + hr) * (slope_r - slope_l)
        })
        .collect();
    let mut identity_max_error: f64 = 0.0;
    for &r1 in &grid {
        identity_max_error = identity_max_error.max(identity_error(r1, r3)?);
    }
    let concave = second_differences.iter().all(|&d| d <= CONCAVITY_TOL) && identity_max_error <= INTEGRAND_IDENTITY_TOL;
    Ok(ConcavityReport { concave, r1_grid: grid, entropies, second_differences, identity_max_error })
}

/// `n` evenly spaced `r1` values spanning the admissible chord at `r3`.
pub fn admissible_r1_grid(r3: f64, n: usize) -> Vec<f64> {
    let half = (2.0 * r3 * (1.0 - r3)).max(0.0).sqrt();
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r1: f64,
    pub r3: f64,
    pub entropy: f64,
    pub on_boundary: bool,
}

/// Sample points of the region `2 r1² + (1 - 2 r3)² <= 1`.
///
/// The region is the image of the unit disk under `r1 = u/√2`,
/// `r3 = (1 - v)/2`. The vacuum `(0, 1)` comes first and the apex `(0, 0)`
/// second, then about `2√n` points on the boundary circle and a sunflower
/// spiral filling the interior.
pub fn sweep_points(n: usize) -> Vec<(f64, f64, bool)> {
    let to_region = |u: f64, v: f64| (u / SQRT_2, 0.5 * (1.0 - v));
    let mut pts = Vec::with_capacity(n);
    if n >= 1 {
        pts.push((0.0, 1.0, true));
    }
    if n >= 2 {
        pts.push((0.0, 0.0, false));
    }
    let rest = n.saturating_sub(2);
    let n_boundary = ((2.0 * (n as f64).sqrt()).round() as usize).min(rest);
    for j in 0..n_boundary {
        // the quarter offset keeps clear of both poles
        let phi = 2.0 * PI * (j as f64 + 0.25) / n_boundary as f64;
        let (r1, r3) = to_region(phi.sin(), phi.cos());
        pts.push((r1, r3, true));
    }
    let n_inner = rest - n_boundary;
    let golden = PI * (3.0 - 5f64.sqrt());
    for i in 0..n_inner {
        let rho = ((i as f64 + 0.5) / n_inner as f64).sqrt();
        let alpha = golden * i as f64;
        let (r1, r3) = to_region(rho * alpha.sin(), rho * alpha.cos());
        pts.push((r1, r3, false));
    }
    pts
}

/// Wigner entropy on `n` quasi-uniform points of the region.
pub fn sweep_disk(n: usize, spec: &QuadratureSpec) -> Result<Vec<SweepRow>> {
    if n == 0 {
        return Err(Error::InvalidSpec("sweep needs at least one point".into()));
    }
    sweep_points(n)
        .into_par_iter()
        .map(|(r1, r3, on_boundary)| {
            let entropy = wigner_entropy(&qubit_wigner(r1, r3)?, spec)?.value;
            Ok(SweepRow { r1, r3, entropy, on_boundary })
        })
        .collect()
}

/// CSV with header `r1,r3,S` and 17 significant digits.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "r1,r3,S")?;
    for row in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", row.r1, row.r3, row.entropy)?;
    }
    Ok(())
}

/// Row with the smallest entropy.
pub fn sweep_minimum(rows: &[SweepRow]) -> Option<&SweepRow> {
    rows.iter().min_by(|a, b| a.entropy.total_cmp(&b.entropy))
}

/// Row with the largest entropy.
pub fn sweep_maximum(rows: &[SweepRow]) -> Option<&SweepRow> {
    rows.iter().max_by(|a, b| a.entropy.total_cmp(&b.entropy))
}

/// Gap between a boundary row and the closed form; `None` off the boundary.
pub fn boundary_row_error(row: &SweepRow) -> Option<f64> {
    row.on_boundary.then(|| (boundary_entropy_closed(row.r3).expect("r3 in (0, 1]") - row.entropy).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::vacuum_entropy;
    use crate::numerics::EULER_GAMMA;
    use proptest::prelude::*;

    const SB_HALF: f64 = 2.302_432_852_599_546_4;
    const SB_QUARTER: f64 = 2.489_534_984_551_046;
    const SB_THREE_QUARTERS: f64 = 2.181_810_344_298_95;

    #[test]
    fn region_examples() {
        let b = |r1, r2, r3| BlochVector { r1, r2, r3 };
        assert!(qubit_nonneg_condition(&b(0.0, 0.0, 1.0)));
        assert!(qubit_nonneg_condition(&b(0.0, 0.0, 0.0)));
        assert!(!qubit_nonneg_condition(&b(0.0, 0.0, -1.0)));
        assert_eq!(region_value(&b(0.0, 0.0, -1.0)), 9.0);
    }

    #[test]
    fn boundary_wigner_examples() {
        let vac = boundary_wigner(&BoundaryQubit::new(1.0, Branch::Plus).unwrap());
        assert_eq!(vac.effective_degree(), 0);
        assert_eq!(vac.coeff(0, 0), 1.0);

        let half = boundary_wigner(&BoundaryQubit::new(0.5, Branch::Plus).unwrap());
        assert_eq!(half.coeff(0, 0), 0.5);
        assert_eq!(half.coeff(1, 0), 1.0);
        assert_eq!(half.coeff(2, 0), 0.5);
        assert_eq!(half.coeff(0, 2), 0.5);
    }

    #[test]
    fn boundary_wigner_matches_bloch_route() {
        for r3 in [0.1, 0.5, 0.9] {
            for branch in [Branch::Plus, Branch::Minus] {
                let bq = BoundaryQubit::new(r3, branch).unwrap();
                let direct = bq.wigner();
                let via = qubit_wigner(bq.r1(), r3).unwrap();
                for (a, b, c) in direct.coeffs().iter() {
                    assert!((c - via.coeff(a, b)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn boundary_rejects_bad_r3() {
        assert!(BoundaryQubit::new(0.0, Branch::Plus).is_err());
        assert!(BoundaryQubit::new(1.5, Branch::Minus).is_err());
        assert!(boundary_entropy_closed(0.0).is_err());
        assert!(boundary_entropy_closed(1.0 + 1e-9).is_err());
        assert!(boundary_entropy_derivative(1.0).is_err());
        assert!(boundary_entropy_derivative(0.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(boundary_entropy_closed(1.0).unwrap(), 1.0 + PI.ln());
        let direct = (-1f64).exp() / 2.0 + 0.5 + (2.0 * PI).ln() + expint_ei(-1.0).unwrap();
        assert!((boundary_entropy_closed(0.5).unwrap() - direct).abs() < 1e-15);
        for (r3, want) in [(0.25, SB_QUARTER), (0.5, SB_HALF), (0.75, SB_THREE_QUARTERS)] {
            assert!((boundary_entropy_closed(r3).unwrap() - want).abs() < 1e-13, "r3 = {r3}");
        }
        let apex = vacuum_entropy() + EULER_GAMMA;
        assert!((boundary_entropy_closed(1e-9).unwrap() - apex).abs() < 1e-7);
        // the limit branch and the generic branch meet
        let gap = boundary_entropy_closed(1.0 - 2e-12).unwrap() - boundary_entropy_closed(1.0 - 5e-13).unwrap();
        assert!(gap.abs() < 1e-11);
    }

    #[test]
    fn derivative_examples() {
        assert!((boundary_entropy_derivative(0.5).unwrap() - ((-1f64).exp() - 1.0)).abs() < 1e-15);
        assert!((boundary_entropy_derivative(1e-8).unwrap() + 1.0).abs() < 1e-7);
        assert!(boundary_entropy_derivative(1.0 - 1e-8).unwrap().abs() < 1e-7);
        for r3 in [0.1, 0.37, 0.5, 0.82] {
            let h = 1e-5;
            let fd = (boundary_entropy_closed(r3 + h).unwrap() - boundary_entropy_closed(r3 - h).unwrap()) / (2.0 * h);
            assert!((fd - boundary_entropy_derivative(r3).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let spec = QuadratureSpec::default();
        for r3 in [0.05, 0.5, 0.95, 1.0] {
            let bq = BoundaryQubit::new(r3, Branch::Plus).unwrap();
            let quad = wigner_entropy(&bq.wigner(), &spec).unwrap().value;
            assert!((quad - boundary_entropy_closed(r3).unwrap()).abs() < 1e-6, "r3 = {r3}");
        }
    }

    #[test]
    fn branches_have_equal_entropy() {
        let spec = QuadratureSpec::default();
        for r3 in [0.2, 0.6] {
            let plus = wigner_entropy(&BoundaryQubit::new(r3, Branch::Plus).unwrap().wigner(), &spec).unwrap();
            let minus = wigner_entropy(&BoundaryQubit::new(r3, Branch::Minus).unwrap().wigner(), &spec).unwrap();
            assert!((plus.value - minus.value).abs() < 1e-10);
        }
    }

    #[test]
    fn concavity_examples() {
        let spec = QuadratureSpec::default();
        let rep = concavity_check(0.5, &admissible_r1_grid(0.5, 7), &spec).unwrap();
        assert!(rep.concave, "{rep:?}");
        let mid = rep.entropies[3];
        assert!(rep.entropies.iter().all(|&s| s <= mid + 1e-12));

        let single = concavity_check(0.5, &[0.1], &spec).unwrap();
        assert!(single.concave && single.second_differences.is_empty());

        assert!(matches!(concavity_check(0.5, &[0.0, 0.8], &spec), Err(Error::RegionViolation { .. })));
    }

    #[test]
    fn integrand_identity_spot_check() {
        assert!(identity_error(0.2, 0.5).unwrap() < INTEGRAND_IDENTITY_TOL);
        assert!(identity_error(-0.4, 0.7).unwrap() < INTEGRAND_IDENTITY_TOL);
    }

    #[test]
    fn sweep_points_layout() {
        assert_eq!(sweep_points(1), vec![(0.0, 1.0, true)]);
        let pts = sweep_points(100);
        assert_eq!(pts.len(), 100);
        assert_eq!(pts[1], (0.0, 0.0, false));
        for &(r1, r3, on_boundary) in &pts {
            let value = region_value(&BlochVector { r1, r2: 0.0, r3 });
            assert!(value <= 1.0 + REGION_TOL);
            if on_boundary {
                assert!((value - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(pts.iter().filter(|p| p.2).count(), 21);
    }

    #[test]
    fn small_sweep() {
        let spec = QuadratureSpec::default();
        let one = sweep_disk(1, &spec).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one[0].entropy - vacuum_entropy()).abs() < 1e-9);

        let rows = sweep_disk(40, &spec).unwrap();
        let min = sweep_minimum(&rows).unwrap();
        assert_eq!((min.r1, min.r3), (0.0, 1.0));
        assert!((rows[1].entropy - vacuum_entropy() - EULER_GAMMA).abs() < 1e-6);
        for row in &rows {
            assert!(row.entropy >= vacuum_entropy() - 1e-6);
            if let Some(err) = boundary_row_error(row) {
                assert!(err < 1e-6, "{row:?}");
            }
        }
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r1,r3,S\n"));
        assert_eq!(text.lines().count(), 41);
    }

    proptest! {
        #[test]
        fn derivative_never_positive(r3 in 1e-6f64..(1.0 - 1e-6)) {
            prop_assert!(boundary_entropy_derivative(r3).unwrap() <= 0.0);
        }

        #[test]
        fn boundary_saturates_region(r3 in 1e-6f64..=1.0, plus in any::<bool>()) {
            let branch = if plus { Branch::Plus } else { Branch::Minus };
            let bq = BoundaryQubit::new(r3, branch).unwrap();
            prop_assert!((region_value(&bq.bloch()) - 1.0).abs() < 1e-12);
            prop_assert!(qubit_nonneg_condition(&bq.bloch()));
        }

        #[test]
        fn closed_form_bounded_by_extremes(r3 in 1e-6f64..=1.0) {
            let s = boundary_entropy_closed(r3).unwrap();
            prop_assert!(s >= vacuum_entropy() - 1e-12);
            prop_assert!(s <= vacuum_entropy() + EULER_GAMMA + 1e-12);
        }
    }
}
