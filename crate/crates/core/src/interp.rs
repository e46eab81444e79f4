//! Fifth-order Lagrange and WENO interpolation and dimension-by-dimension
//! prolongation onto the finest grid.
//!
//! For a target `x` in `[x_{i-1/2}, x_{i+1/2})` with offset
//! `xi = (x - x_i) / h`, three quadratics `P_k` interpolate the substencils
//! `{i-2,i-1,i}`, `{i-1,i,i+1}`, `{i,i+1,i+2}`. The location-dependent
//! weights `C_k(xi)` are positive on that interval and recombine the `P_k`
//! into the quartic Lagrange interpolant; the WENO variant replaces them by
//! `C_k / (eps + beta_k)^2`, normalized.

use ndarray::{ArrayD, IxDyn};

use crate::grid::{Boundary, GridField, LevelIndex};
use crate::{Error, Result};

/// Prolongation flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prolongation {
    Lagrange,
    Weno,
}

/// Five point values around `x_i` plus the target offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpStencil {
    pub u: [f64; 5],
    pub h: f64,
    pub xi: f64,
}

impl InterpStencil {
    pub fn new(u: [f64; 5], h: f64, xi: f64) -> Result<Self> {
        check_offset(xi)?;
        if !(h > 0.0) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {h}")));
        }
        Ok(Self { u, h, xi })
    }

    /// Physical location of the target given the centre coordinate `x_i`.
    pub fn target(&self, x_center: f64) -> f64 {
        x_center + self.xi * self.h
    }
}

fn check_offset(xi: f64) -> Result<()> {
    if (-0.5..0.5).contains(&xi) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("offset {xi} outside [-1/2, 1/2)")))
    }
}

/// Location-dependent linear weights `C_0, C_1, C_2` at offset `xi`.
pub fn linear_interp_weights(xi: f64) -> Result<[f64; 3]> {
    check_offset(xi)?;
    Ok(linear_weights_unchecked(xi))
}

#[inline]
fn linear_weights_unchecked(s: f64) -> [f64; 3] {
    [
        (s - 1.0) * (s - 2.0) / 12.0,
        (s + 2.0) * (s - 2.0) / -6.0,
        (s + 2.0) * (s + 1.0) / 12.0,
    ]
}

/// Linear and quadratic coefficients of `P_k(s) = u_i + a_k s + b_k s^2`.
#[inline]
fn substencil_coefficients(u: &[f64; 5]) -> [(f64, f64); 3] {
    let [um2, um1, u0, up1, up2] = *u;
    [
        (0.5 * (um2 - 4.0 * um1 + 3.0 * u0), 0.5 * (um2 - 2.0 * um1 + u0)),
        (0.5 * (up1 - um1), 0.5 * (um1 - 2.0 * u0 + up1)),
        (0.5 * (-3.0 * u0 + 4.0 * up1 - up2), 0.5 * (u0 - 2.0 * up1 + up2)),
    ]
}

/// Values of the three substencil quadratics at offset `xi`.
pub fn substencil_values(u: &[f64; 5], xi: f64) -> [f64; 3] {
    let c = substencil_coefficients(u);
    let u0 = u[2];
    [
        u0 + xi * (c[0].0 + xi * c[0].1),
        u0 + xi * (c[1].0 + xi * c[1].1),
        u0 + xi * (c[2].0 + xi * c[2].1),
    ]
}

/// Smoothness indicators `sum_l h^{2l-1} int (P_k^{(l)})^2` over the centre
/// cell. In the offset variable this integrates to `a_k^2 + 13/3 b_k^2`.
pub fn interp_smoothness(u: &[f64; 5]) -> [f64; 3] {
    let c = substencil_coefficients(u);
    let beta = |(a, b): (f64, f64)| a * a + 13.0 / 3.0 * b * b;
    [beta(c[0]), beta(c[1]), beta(c[2])]
}

/// Quartic Lagrange interpolant through the five points, evaluated at `xi`.
pub fn lagrange_interp5(s: &InterpStencil) -> f64 {
    let c = linear_weights_unchecked(s.xi);
    let p = substencil_values(&s.u, s.xi);
    c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
}

/// Nonlinear weights `w_k(xi)` for the WENO interpolant.
pub fn weno_interp_weights(u: &[f64; 5], xi: f64, epsilon: f64) -> [f64; 3] {
    crate::weno::nonlinear_weights(&linear_weights_unchecked(xi), &interp_smoothness(u), epsilon)
}

/// Fifth-order WENO interpolant at `xi`.
pub fn weno_interp5(s: &InterpStencil, epsilon: f64) -> f64 {
    let w = weno_interp_weights(&s.u, s.xi, epsilon);
    let p = substencil_values(&s.u, s.xi);
    w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
}

/// Precomputed per-offset data for upsampling a line by the factor `ratio`.
struct OffsetTable {
    ratio: usize,
    /// Offsets `m / ratio` for `m = -ratio/2 .. ratio/2`.
    offsets: Vec<f64>,
    linear: Vec<[f64; 3]>,
    lagrange: Vec<[f64; 5]>,
}

impl OffsetTable {
    fn new(ratio: usize) -> Self {
        let half = (ratio / 2) as isize;
        let offsets: Vec<f64> = (-half..(ratio as isize - half)).map(|m| m as f64 / ratio as f64).collect();
        let linear: Vec<[f64; 3]> = offsets.iter().map(|&xi| linear_weights_unchecked(xi)).collect();
        let lagrange = offsets
            .iter()
            .map(|&xi| {
                let mut w = [0.0; 5];
                for (j, wj) in w.iter_mut().enumerate() {
                    let mut e = [0.0; 5];
                    e[j] = 1.0;
                    *wj = lagrange_interp5(&InterpStencil { u: e, h: 1.0, xi });
                }
                w
            })
            .collect();
        Self {
            ratio,
            offsets,
            linear,
            lagrange,
        }
    }

    fn half(&self) -> usize {
        self.ratio / 2
    }
}

/// Upsamples one line by `table.ratio`, writing `out`.
fn upsample_line(src: &[f64], out: &mut [f64], boundary: Boundary, table: &OffsetTable, mode: Prolongation, epsilon: f64) {
    let n = src.len() as isize;
    let fetch = |i: isize| -> f64 {
        match boundary {
            Boundary::Periodic => src[i.rem_euclid(n) as usize],
            Boundary::Zero if i < 0 || i >= n => 0.0,
            Boundary::Zero => src[i as usize],
        }
    };
    let r = table.ratio;
    let half = table.half();
    for (t, o) in out.iter_mut().enumerate() {
        let centre = (t + half) / r;
        let slot = t + half - centre * r;
        if slot == half {
            *o = src[centre];
            continue;
        }
        let c = centre as isize;
        let u = [fetch(c - 2), fetch(c - 1), fetch(c), fetch(c + 1), fetch(c + 2)];
        *o = match mode {
            Prolongation::Lagrange => {
                let w = &table.lagrange[slot];
                w[0] * u[0] + w[1] * u[1] + w[2] * u[2] + w[3] * u[3] + w[4] * u[4]
            }
            Prolongation::Weno => {
                let xi = table.offsets[slot];
                let w = crate::weno::nonlinear_weights(&table.linear[slot], &interp_smoothness(&u), epsilon);
                let p = substencil_values(&u, xi);
                w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
            }
        };
    }
}

/// Interpolates `u` onto the grid of the same family with levels `target`,
/// one direction at a time starting from axis 0. Every target level must be
/// at least the source level; equal levels are copied.
pub fn prolong(u: &GridField, target: &LevelIndex, mode: Prolongation, epsilon: f64) -> Result<GridField> {
    let geom = u.geometry();
    if target.dim() != geom.dim() {
        return Err(Error::InconsistentDomain(format!(
            "target level {target} has dimension {}, field has {}",
            target.dim(),
            geom.dim()
        )));
    }
    let src_levels = geom.level().levels().to_vec();
    if src_levels.iter().zip(target.levels()).any(|(s, t)| s > t) {
        return Err(Error::InvalidArgument(format!(
            "cannot prolong from {} to coarser level {target}",
            geom.level()
        )));
    }
    let mut current = u.values().clone();
    let mut levels = src_levels.clone();
    for k in 0..geom.dim() {
        let lt = target.levels()[k];
        if levels[k] == lt {
            continue;
        }
        let ratio = 1usize << (lt - levels[k]);
        levels[k] = lt;
        let next_geom = geom.with_level(LevelIndex::new(levels.clone()))?;
        let table = OffsetTable::new(ratio);
        let boundary = geom.boundary()[k];
        let mut next = ArrayD::zeros(IxDyn(&next_geom.shape()));
        crate::par::for_each_lane(next.view_mut(), current.view(), k, |_, mut out_lane, in_lane| {
            let src: Vec<f64> = in_lane.iter().copied().collect();
            let mut buf = vec![0.0; out_lane.len()];
            upsample_line(&src, &mut buf, boundary, &table, mode, epsilon);
            for (o, b) in out_lane.iter_mut().zip(buf) {
                *o = b;
            }
        });
        current = next;
    }
    GridField::new(geom.with_level(target.clone())?, current)
}
