//! Scalar conservation laws `u_t + sum_k f_k(u)_{x_k} = 0`.

use crate::grid::{GridField, GridGeometry};
use crate::timestep::Evolve;
use crate::weno::{weno_derivative_line, WenoParams};
use crate::{Error, Result};

use super::check_lines;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Flux {
    /// `f(u) = speed * u`.
    Linear { speed: f64 },
    /// `f(u) = u^2 / 2`.
    Burgers,
}

impl Flux {
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            Flux::Linear { speed } => speed * u,
            Flux::Burgers => 0.5 * u * u,
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match *self {
            Flux::Linear { speed } => speed,
            Flux::Burgers => u,
        }
    }
}

/// One flux per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarConservationLaw {
    fluxes: Vec<Flux>,
}

impl ScalarConservationLaw {
    pub fn new(fluxes: Vec<Flux>) -> Result<Self> {
        if fluxes.is_empty() {
            return Err(Error::InvalidArgument("a conservation law needs at least one direction".into()));
        }
        Ok(Self { fluxes })
    }

    /// `u_t + sum_k u_{x_k} = 0` in `d` dimensions.
    pub fn advection(d: usize) -> Self {
        Self {
            fluxes: vec![Flux::Linear { speed: 1.0 }; d],
        }
    }

    /// `u_t + sum_k (u^2/2)_{x_k} = 0` in `d` dimensions.
    pub fn burgers(d: usize) -> Self {
        Self {
            fluxes: vec![Flux::Burgers; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.fluxes.len()
    }

    pub fn fluxes(&self) -> &[Flux] {
        &self.fluxes
    }

    /// `max |f_k'(u)|` over the field, per direction.
    pub fn wave_speeds(&self, u: &GridField) -> Vec<f64> {
        self.fluxes
            .iter()
            .map(|flux| match *flux {
                Flux::Linear { speed } => speed.abs(),
                Flux::Burgers => u.values().iter().fold(0.0f64, |m, &v| m.max(v.abs())),
            })
            .collect()
    }
}

/// `-sum_k d/dx_k f_k(u)` with WENO5 fluxes and global Lax-Friedrichs
/// splitting per direction.
pub fn conservation_law_rhs(u: &GridField, law: &ScalarConservationLaw, p: &WenoParams) -> Result<GridField> {
    let g = u.geometry();
    if g.dim() != law.dim() {
        return Err(Error::ShapeMismatch {
            expected: vec![law.dim()],
            found: vec![g.dim()],
        });
    }
    check_lines(&g.shape())?;
    let alphas = law.wave_speeds(u);
    let mut out = GridField::zeros(g.clone());
    for (k, flux) in law.fluxes.iter().enumerate() {
        let dx = g.spacing(k);
        let boundary = g.boundary()[k];
        let alpha = alphas[k];
        let flux = *flux;
        crate::par::for_each_lane(out.view_mut(), u.view(), k, |_, mut o, line| {
            let src: Vec<f64> = line.iter().copied().collect();
            let mut d = vec![0.0; src.len()];
            weno_derivative_line(&src, |v| flux.value(v), alpha, dx, boundary, p, &mut d).expect("line length validated");
            for (oi, di) in o.iter_mut().zip(d) {
                *oi -= di;
            }
        });
    }
    Ok(out)
}

/// `u0(x) = mean + amplitude * sin(wavenumber * sum_k x_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineProfile {
    pub mean: f64,
    pub amplitude: f64,
    pub wavenumber: f64,
}

impl SineProfile {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let s: f64 = x.iter().sum();
        self.mean + self.amplitude * (self.wavenumber * s).sin()
    }

    /// Exact solution at time `t` of `law` started from this profile.
    /// Burgers requires the same flux in every direction and a time before
    /// characteristics cross.
    pub fn exact(&self, law: &ScalarConservationLaw, x: &[f64], t: f64) -> Result<f64> {
        if law.fluxes.iter().all(|f| matches!(f, Flux::Burgers)) {
            let xi: f64 = x.iter().sum();
            return burgers_exact(self, xi, law.dim(), t);
        }
        let mut shifted = Vec::with_capacity(x.len());
        for (xk, flux) in x.iter().zip(&law.fluxes) {
            match flux {
                Flux::Linear { speed } => shifted.push(xk - speed * t),
                Flux::Burgers => {
                    return Err(Error::InvalidArgument("mixed linear and Burgers fluxes have no closed form".into()))
                }
            }
        }
        Ok(self.eval(&shifted))
    }

    pub fn restrict(&self, geometry: GridGeometry) -> GridField {
        GridField::restrict(geometry, |x| self.eval(x))
    }

    pub fn exact_field(&self, law: &ScalarConservationLaw, geometry: GridGeometry, t: f64) -> Result<GridField> {
        // Validate once so the pointwise closure cannot fail on flux shape.
        self.exact(law, &vec![0.0; geometry.dim()], t)?;
        let field = GridField::restrict(geometry, |x| self.exact(law, x, t).unwrap_or(f64::NAN));
        if !field.is_finite() {
            return Err(Error::InvalidArgument("exact Burgers solution did not converge".into()));
        }
        Ok(field)
    }
}

/// Solves `u = a + b sin(k (xi - d u t))` for the smooth solution of the
/// `d`-dimensional Burgers equation with equal fluxes, where `xi` is the sum
/// of the coordinates. Newton iteration with a bisection fallback on
/// `[a - |b|, a + |b|]`.
pub fn burgers_exact(profile: &SineProfile, xi: f64, d: usize, t: f64) -> Result<f64> {
    let SineProfile {
        mean: a,
        amplitude: b,
        wavenumber: k,
    } = *profile;
    let dt = d as f64 * t;
    let g = |u: f64| u - a - b * (k * (xi - dt * u)).sin();
    let dg = |u: f64| 1.0 + b * k * dt * (k * (xi - dt * u)).cos();
    let tol = 1e-14;
    let mut u = a + b * (k * xi).sin();
    for _ in 0..100 {
        let r = g(u);
        if r.abs() <= tol {
            return Ok(u);
        }
        let slope = dg(u);
        if slope.abs() < 1e-12 {
            break;
        }
        u -= r / slope;
    }
    // Bisection: g(a - |b|) <= 0 <= g(a + |b|).
    let (mut lo, mut hi) = (a - b.abs(), a + b.abs());
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return Err(Error::InvalidArgument(format!("no bracketed Burgers root at xi = {xi}, t = {t}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = g(mid);
        if r.abs() <= tol {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    if g(mid).abs() <= 1e-13 {
        Ok(mid)
    } else {
        Err(Error::InvalidArgument(format!("Burgers root did not converge at xi = {xi}, t = {t}")))
    }
}

/// A conservation law together with its WENO settings, ready to evolve.
#[derive(Debug, Clone)]
pub struct ConservationProblem {
    pub law: ScalarConservationLaw,
    pub weno: WenoParams,
}

impl Evolve for ConservationProblem {
    type State = GridField;

    fn rhs(&self, state: &GridField) -> Result<GridField> {
        conservation_law_rhs(state, &self.law, &self.weno)
    }

    fn wave_speeds(&self, state: &GridField) -> Vec<f64> {
        self.law.wave_speeds(state)
    }
}
