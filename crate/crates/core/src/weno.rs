//! Fifth-order finite-difference WENO flux reconstruction with
//! Lax-Friedrichs splitting.
//!
//! The derivative `f(u)_x` at `x_i` is approximated by the conservative
//! difference `(F_{i+1/2} - F_{i-1/2}) / dx`, where `F = F^+ + F^-` and each
//! part is reconstructed from a five-point upwind-biased stencil as a convex
//! combination of three third-order candidates.

use crate::grid::Boundary;
use crate::{Error, Result};

/// Optimal (linear) weights `d_0, d_1, d_2`.
pub const LINEAR_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Five flux values `(f_{i-2}, ..., f_{i+2})`.
pub type Stencil5 = [f64; 5];

/// How candidate reconstructions are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Data-dependent weights from the smoothness indicators.
    Nonlinear,
    /// The linear weights `d_r`; gives the fifth-order linear upwind scheme.
    Linear,
}

/// Default `epsilon` in the weight denominators.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoParams {
    pub epsilon: f64,
    pub mode: WeightMode,
}

impl Default for WenoParams {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            mode: WeightMode::Nonlinear,
        }
    }
}

impl WenoParams {
    pub fn new(epsilon: f64, mode: WeightMode) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { epsilon, mode })
    }

    pub fn linear() -> Self {
        Self {
            mode: WeightMode::Linear,
            ..Self::default()
        }
    }
}

/// Jiang-Shu smoothness indicators of the three substencils.
#[inline]
pub fn smoothness_indicators(s: &Stencil5) -> [f64; 3] {
    let [a, b, c, d, e] = *s;
    let t0 = a - 2.0 * b + c;
    let q0 = a - 4.0 * b + 3.0 * c;
    let t1 = b - 2.0 * c + d;
    let q1 = b - d;
    let t2 = c - 2.0 * d + e;
    let q2 = 3.0 * c - 4.0 * d + e;
    const K: f64 = 13.0 / 12.0;
    [
        K * t0 * t0 + 0.25 * q0 * q0,
        K * t1 * t1 + 0.25 * q1 * q1,
        K * t2 * t2 + 0.25 * q2 * q2,
    ]
}

/// Third-order candidate fluxes at `x_{i+1/2}`.
#[inline]
pub fn candidate_fluxes(s: &Stencil5) -> [f64; 3] {
    let [a, b, c, d, e] = *s;
    [
        (2.0 * a - 7.0 * b + 11.0 * c) / 6.0,
        (-b + 5.0 * c + 2.0 * d) / 6.0,
        (2.0 * c + 5.0 * d - e) / 6.0,
    ]
}

/// Normalized `alpha_r = linear_r / (eps + beta_r)^2`.
#[inline]
pub fn nonlinear_weights(linear: &[f64; 3], beta: &[f64; 3], epsilon: f64) -> [f64; 3] {
    let a0 = linear[0] / ((epsilon + beta[0]) * (epsilon + beta[0]));
    let a1 = linear[1] / ((epsilon + beta[1]) * (epsilon + beta[1]));
    let a2 = linear[2] / ((epsilon + beta[2]) * (epsilon + beta[2]));
    let sum = a0 + a1 + a2;
    [a0 / sum, a1 / sum, a2 / sum]
}

/// Flux weights for the stencil under `p`.
#[inline]
pub fn flux_weights(s: &Stencil5, p: &WenoParams) -> [f64; 3] {
    match p.mode {
        WeightMode::Linear => LINEAR_WEIGHTS,
        WeightMode::Nonlinear => nonlinear_weights(&LINEAR_WEIGHTS, &smoothness_indicators(s), p.epsilon),
    }
}

/// Positive-wind reconstruction of `F_{i+1/2}` from `(f_{i-2}, ..., f_{i+2})`.
#[inline]
pub fn weno5_flux_positive(s: &Stencil5, p: &WenoParams) -> f64 {
    let q = candidate_fluxes(s);
    let w = flux_weights(s, p);
    w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
}

/// Negative-wind reconstruction of `F_{i+1/2}` from `(f_{i-1}, ..., f_{i+3})`:
/// the positive-wind formula mirrored about `x_{i+1/2}`.
#[inline]
pub fn weno5_flux_negative(s: &Stencil5, p: &WenoParams) -> f64 {
    weno5_flux_positive(&[s[4], s[3], s[2], s[1], s[0]], p)
}

/// `f^± = (f ± alpha u) / 2`.
#[inline]
pub fn lax_friedrichs_split(f: f64, u: f64, alpha: f64) -> (f64, f64) {
    (0.5 * (f + alpha * u), 0.5 * (f - alpha * u))
}

const GHOSTS: usize = 3;

/// Writes `d/dx f(u)` along one grid line into `out`.
///
/// Periodic lines wrap around; zero-boundary lines are extended by three
/// ghost points of value zero on each side. `alpha` is the Lax-Friedrichs
/// splitting speed, normally `max |f'(u)|` over the field.
pub fn weno_derivative_line<F>(
    u: &[f64],
    flux: F,
    alpha: f64,
    dx: f64,
    boundary: Boundary,
    p: &WenoParams,
    out: &mut [f64],
) -> Result<()>
where
    F: Fn(f64) -> f64,
{
    let n = u.len();
    if n < 6 {
        return Err(Error::LineTooShort { len: n });
    }
    debug_assert_eq!(out.len(), n);
    let m = n + 2 * GHOSTS;
    let mut plus = vec![0.0; m];
    let mut minus = vec![0.0; m];
    let ghost = |j: usize| -> Option<f64> {
        let i = j as isize - GHOSTS as isize;
        match boundary {
            Boundary::Periodic => Some(u[i.rem_euclid(n as isize) as usize]),
            Boundary::Zero if i < 0 || i >= n as isize => None,
            Boundary::Zero => Some(u[i as usize]),
        }
    };
    for j in 0..m {
        let uj = ghost(j).unwrap_or(0.0);
        let (fp, fm) = lax_friedrichs_split(flux(uj), uj, alpha);
        plus[j] = fp;
        minus[j] = fm;
    }
    // F_{i+1/2} for i = -1..n-1, stored at position i + 1.
    let mut face = vec![0.0; n + 1];
    for (k, fk) in face.iter_mut().enumerate() {
        let e = k + GHOSTS - 1;
        let sp = [plus[e - 2], plus[e - 1], plus[e], plus[e + 1], plus[e + 2]];
        let sm = [minus[e - 1], minus[e], minus[e + 1], minus[e + 2], minus[e + 3]];
        *fk = weno5_flux_positive(&sp, p) + weno5_flux_negative(&sm, p);
    }
    let inv = 1.0 / dx;
    for (i, o) in out.iter_mut().enumerate() {
        *o = (face[i + 1] - face[i]) * inv;
    }
    Ok(())
}
