//! Right-hand sides for the scalar conservation laws and the kinetic models.

pub mod conservation;
pub mod kinetic;
pub mod maxwell;

pub use conservation::{
    burgers_exact, conservation_law_rhs, ConservationProblem, Flux, ScalarConservationLaw, SineProfile,
};
pub use kinetic::{
    maxwellian, moment_density, normalize_initial, stationary_state, vb_rhs, VbProblem, VlasovBoltzmannSpec,
};
pub use maxwell::{currents, vm_rhs, MaxwellFieldState, VlasovMaxwellSpec, VmProblem, VmState};

use ndarray::{ArrayView1, ArrayViewMut1};

use crate::grid::Boundary;
use crate::weno::{weno_derivative_line, WenoParams};
use crate::Result;

/// Subtracts `d/dx (c u)` from `out` along one line with a coefficient `c`
/// that is constant on the line. The splitting speed is `|c|`.
pub(crate) fn transport_line(
    u: ArrayView1<'_, f64>,
    mut out: ArrayViewMut1<'_, f64>,
    c: f64,
    dx: f64,
    boundary: Boundary,
    p: &WenoParams,
) {
    if c == 0.0 {
        return;
    }
    let src: Vec<f64> = u.iter().copied().collect();
    let mut d = vec![0.0; src.len()];
    weno_derivative_line(&src, |v| c * v, c.abs(), dx, boundary, p, &mut d).expect("line length validated");
    for (o, di) in out.iter_mut().zip(d) {
        *o -= di;
    }
}

/// Fails with [`crate::Error::LineTooShort`] when some direction has fewer
/// points than the five-point stencil needs.
pub(crate) fn check_lines(shape: &[usize]) -> Result<()> {
    match shape.iter().find(|&&n| n < 6) {
        Some(&len) => Err(crate::Error::LineTooShort { len }),
        None => Ok(()),
    }
}
