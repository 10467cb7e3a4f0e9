//! Special functions: exponential integral, log-gamma, digamma and the
//! regularized `x ln x` entropy integrand.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Tiny negative densities down to this value are treated as zero by [`xlogx`].
pub const XLOGX_CLAMP_TOL: f64 = 1e-12;

const EPS: f64 = 1e-17;

/// Exponential integral `Ei(x) = ∫_{-∞}^x e^t / t dt` (Cauchy principal value for `x > 0`).
///
/// Power series around the origin, the Lentz continued fraction for
/// `E1(-x)` when `x < -1`, and the asymptotic expansion for `x > 40`.
pub fn expint_ei(x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain { function: "expint_ei", x });
    }
    if x < -1.0 {
        Ok(-e1_continued_fraction(-x))
    } else if x <= 40.0 {
        Ok(ei_series(x))
    } else {
        Ok(ei_asymptotic(x))
    }
}

fn ei_series(x: f64) -> f64 {
    // Σ x^k / (k k!), term_k = x^k / k!
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= x / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() <= EPS * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + x.abs().ln() + sum
}

fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h * (-x).exp()
}

fn ei_asymptotic(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..200 {
        let next = term * k as f64 / x;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    x.exp() / x * sum
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Integer and half-integer arguments up to this bound use exact products.
const LATTICE_MAX: f64 = 100.0;

/// `ln Γ(x)` for `x > 0`.
///
/// Integer and half-integer arguments (the gamma weights of monomial
/// moments) are computed as finite products on top of `Γ(1) = 1` and
/// `Γ(½) = √π`, so `log_gamma(0.5)` is exactly `0.5 * ln π`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { function: "log_gamma", x });
    }
    let twice = 2.0 * x;
    if x <= LATTICE_MAX && twice.fract() == 0.0 {
        let (base, base_log) = if twice as u64 % 2 == 0 {
            (1.0, 0.0)
        } else {
            (0.5, 0.5 * PI.ln())
        };
        let mut prod = 1.0;
        let mut t = base;
        while t < x {
            prod *= t;
            t += 1.0;
        }
        return Ok(base_log + prod.ln());
    }
    if x < 0.5 {
        // reflection
        return Ok(PI.ln() - (PI * x).sin().ln() - lanczos_ln_gamma(1.0 - x));
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { function: "digamma", x });
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail: B_2k / (2k x^2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

/// `∫ x^a e^{-x²} dx` over the real line: `Γ((1+a)/2)` for even `a`, zero for odd `a`.
pub fn gaussian_moment(a: usize) -> f64 {
    if a % 2 == 1 {
        0.0
    } else {
        log_gamma(0.5 * (1.0 + a as f64)).expect("positive argument").exp()
    }
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
///
/// Values in `[-XLOGX_CLAMP_TOL, 0]` are rounding residue and map to zero;
/// anything more negative means the density was not non-negative.
pub fn xlogx(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x * x.ln())
    } else if x >= -XLOGX_CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity(x))
    }
}
