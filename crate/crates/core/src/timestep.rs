//! Third-order SSP Runge-Kutta and the shared time-step policy.
//!
//! Every grid of a family advances with the same step size, derived from the
//! spacing of the finest grid and the largest wave speed over the family.

use crate::combine::Family;
use crate::grid::{GridField, LevelIndex};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtMode {
    /// `dt = cfl / sum_k (speed_k / dx_k)`.
    Cfl,
    /// `dt = dx_min^{5/3}`, so the third-order integrator does not mask
    /// fifth-order spatial convergence.
    Accuracy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepPolicy {
    pub mode: DtMode,
    pub cfl_number: f64,
    /// Per-direction spacings of the finest grid.
    pub spacings: Vec<f64>,
}

impl StepPolicy {
    pub fn new(mode: DtMode, cfl_number: f64, spacings: Vec<f64>) -> Result<Self> {
        if !(cfl_number > 0.0 && cfl_number <= 1.0) {
            return Err(Error::InvalidArgument(format!("CFL number {cfl_number} outside (0, 1]")));
        }
        if spacings.is_empty() || spacings.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::InvalidArgument("spacings must be positive".into()));
        }
        Ok(Self {
            mode,
            cfl_number,
            spacings,
        })
    }

    /// Smallest finest-grid spacing over all directions.
    pub fn reference_spacing(&self) -> f64 {
        self.spacings.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Step size for the next step, clipped so the last step lands on the final
/// time. Returns [`Error::Stationary`] in CFL mode when every speed is zero.
pub fn compute_dt(policy: &StepPolicy, wave_speeds: &[f64], remaining: f64) -> Result<f64> {
    if !(remaining > 0.0) {
        return Err(Error::InvalidArgument(format!("remaining time {remaining} must be positive")));
    }
    let dt = match policy.mode {
        DtMode::Accuracy => policy.reference_spacing().powf(5.0 / 3.0),
        DtMode::Cfl => {
            if wave_speeds.len() != policy.spacings.len() || wave_speeds.iter().any(|&s| !(s >= 0.0)) {
                return Err(Error::InvalidArgument(format!("bad wave speeds {wave_speeds:?}")));
            }
            let rate: f64 = wave_speeds.iter().zip(&policy.spacings).map(|(s, h)| s / h).sum();
            if rate == 0.0 {
                return Err(Error::Stationary);
            }
            policy.cfl_number / rate
        }
    };
    Ok(dt.min(remaining))
}

/// Vector-space operations the integrator needs.
pub trait OdeState: Clone + Send + Sync {
    /// `self += a * x`.
    fn axpy(&mut self, a: f64, x: &Self);
    fn is_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl OdeState for Vec<f64> {
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl OdeState for GridField {
    fn axpy(&mut self, a: f64, x: &Self) {
        crate::par::zip_apply(self.view_mut(), x.view(), |s, v| s + a * v);
    }

    fn is_finite(&self) -> bool {
        GridField::is_finite(self)
    }
}

/// One SSP-RK3 (Shu-Osher) step:
///
/// ```text
/// u1 = u + dt L(u)
/// u2 = 3/4 u + 1/4 (u1 + dt L(u1))
/// u' = 1/3 u + 2/3 (u2 + dt L(u2))
/// ```
///
/// evaluated in the algebraically identical increment form
/// `u2 = u + dt/4 (k1 + k2)`, `u' = u + dt/6 (k1 + k2 + 4 k3)`, so a zero
/// tendency leaves the state bitwise unchanged.
pub fn ssp_rk3_step<S, F>(u: &S, mut rhs: F, dt: f64) -> Result<S>
where
    S: OdeState,
    F: FnMut(&S) -> Result<S>,
{
    let fail = |stage| Error::IntegratorFailure {
        stage,
        level: None,
        step: None,
    };
    let k1 = rhs(u)?;
    if !k1.is_finite() {
        return Err(fail(1));
    }
    let mut u1 = u.clone();
    u1.axpy(dt, &k1);

    let k2 = rhs(&u1)?;
    if !k2.is_finite() {
        return Err(fail(2));
    }
    drop(u1);
    let mut k12 = k1;
    k12.axpy(1.0, &k2);
    drop(k2);
    let mut u2 = u.clone();
    u2.axpy(0.25 * dt, &k12);

    let k3 = rhs(&u2)?;
    if !k3.is_finite() {
        return Err(fail(3));
    }
    drop(u2);
    k12.axpy(4.0, &k3);
    drop(k3);
    let mut out = u.clone();
    out.axpy(dt / 6.0, &k12);
    if !out.is_finite() {
        return Err(fail(3));
    }
    Ok(out)
}

/// A semi-discrete system that can be advanced on one grid of a family.
pub trait Evolve: Sync {
    type State: OdeState;

    fn rhs(&self, state: &Self::State) -> Result<Self::State>;

    /// Per-direction maxima of the characteristic speeds on this state.
    fn wave_speeds(&self, state: &Self::State) -> Vec<f64>;
}

/// Step sizes taken by [`evolve_family`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvolveLog {
    pub dts: Vec<f64>,
    pub time: f64,
}

/// Advances every member of `family` from `t0` to `t_end` in lockstep.
pub fn evolve_family<P: Evolve>(
    family: &mut Family<P::State>,
    problem: &P,
    policy: &StepPolicy,
    t0: f64,
    t_end: f64,
) -> Result<EvolveLog> {
    let mut log = EvolveLog {
        dts: Vec::new(),
        time: t0,
    };
    if !(t_end >= t0) {
        return Err(Error::InvalidArgument(format!("final time {t_end} before start {t0}")));
    }
    let tol = 1e-12 * t_end.abs().max(1.0);
    while t_end - log.time > tol {
        let remaining = t_end - log.time;
        let per_grid: Vec<Vec<f64>> = family.states().map(|s| problem.wave_speeds(s)).collect();
        let mut speeds = vec![0.0f64; policy.spacings.len()];
        for s in &per_grid {
            for (m, v) in speeds.iter_mut().zip(s) {
                *m = m.max(*v);
            }
        }
        let dt = match compute_dt(policy, &speeds, remaining) {
            Ok(dt) => dt,
            Err(Error::Stationary) => remaining,
            Err(e) => return Err(e),
        };
        let step = log.dts.len();
        let mut members = family.members_mut();
        let results = crate::par::map_mut(&mut members, |(level, state)| -> Result<()> {
            let next = ssp_rk3_step(&**state, |s| problem.rhs(s), dt).map_err(|e| attach(e, level, step))?;
            **state = next;
            Ok(())
        });
        results.into_iter().collect::<Result<Vec<()>>>()?;
        log.dts.push(dt);
        log.time = if dt == remaining { t_end } else { log.time + dt };
    }
    log.time = t_end;
    Ok(log)
}

fn attach(e: Error, level: &LevelIndex, step: usize) -> Error {
    match e {
        Error::IntegratorFailure { stage, .. } => Error::IntegratorFailure {
            stage,
            level: Some(level.clone()),
            step: Some(step),
        },
        other => other,
    }
}
