//! Vlasov-Boltzmann transport with a linear relaxation operator,
//!
//! ```text
//! f_t + v . grad_x f + E(x) . grad_v f = (mu(v) rho(x) - f) / tau,
//! ```
//!
//! in a harmonic potential `Phi = |x|^2 / 2`, `E = -x`. Grids are laid out
//! as `(x_1..x_d, v_1..v_d)`.

use ndarray::{ArrayD, IxDyn};

use crate::grid::{integrate_with, Boundary, DomainBox, GridField, GridGeometry};
use crate::timestep::Evolve;
use crate::weno::WenoParams;
use crate::{Error, Result};

use super::{check_lines, transport_line};

#[derive(Debug, Clone, PartialEq)]
pub struct VlasovBoltzmannSpec {
    pub theta: f64,
    pub tau: f64,
    /// Number of space (and velocity) dimensions.
    pub space_dim: usize,
    /// Half-width of the symmetric space box.
    pub x_extent: f64,
    /// Half-width of the symmetric velocity box.
    pub v_extent: f64,
}

impl VlasovBoltzmannSpec {
    pub fn new(theta: f64, tau: f64, space_dim: usize, x_extent: f64, v_extent: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::NonPositive(format!("temperature theta = {theta}")));
        }
        if !(tau > 0.0) {
            return Err(Error::NonPositive(format!("relaxation time tau = {tau}")));
        }
        if space_dim == 0 || !(x_extent > 0.0) || !(v_extent > 0.0) {
            return Err(Error::InvalidArgument("kinetic boxes need d >= 1 and positive extents".into()));
        }
        Ok(Self {
            theta,
            tau,
            space_dim,
            x_extent,
            v_extent,
        })
    }

    /// `theta = tau = 1` on `[-5, 5]^{2d}`.
    pub fn standard(space_dim: usize) -> Self {
        Self::new(1.0, 1.0, space_dim, 5.0, 5.0).expect("standard parameters")
    }

    pub fn phase_dim(&self) -> usize {
        2 * self.space_dim
    }

    pub fn domain(&self) -> DomainBox {
        let d = self.space_dim;
        let mut lo = vec![-self.x_extent; d];
        lo.extend(vec![-self.v_extent; d]);
        let hi = lo.iter().map(|v| -v).collect();
        DomainBox::new(lo, hi).expect("symmetric box")
    }

    pub fn boundaries(&self) -> Vec<Boundary> {
        vec![Boundary::Zero; self.phase_dim()]
    }

    pub fn potential(&self, x: &[f64]) -> f64 {
        0.5 * x.iter().map(|v| v * v).sum::<f64>()
    }

    fn check(&self, g: &GridGeometry) -> Result<()> {
        if g.dim() != self.phase_dim() {
            return Err(Error::ShapeMismatch {
                expected: vec![self.phase_dim()],
                found: vec![g.dim()],
            });
        }
        if g.boundary().iter().any(|&b| b != Boundary::Zero) {
            return Err(Error::InconsistentDomain("kinetic grids need zero boundaries".into()));
        }
        Ok(())
    }
}

/// `e^{-|v|^2 / (2 theta)} / (2 pi theta)^{d/2}`.
pub fn maxwellian(v: &[f64], theta: f64) -> f64 {
    let v2: f64 = v.iter().map(|x| x * x).sum();
    let d = v.len() as f64;
    (-v2 / (2.0 * theta)).exp() / (2.0 * std::f64::consts::PI * theta).powf(0.5 * d)
}

fn velocity_weights(g: &GridGeometry, space_dim: usize) -> Vec<Vec<f64>> {
    (space_dim..g.dim()).map(|k| g.quadrature_weights(k)).collect()
}

fn split_sizes(g: &GridGeometry, space_dim: usize) -> (Vec<usize>, Vec<usize>) {
    let shape = g.shape();
    (shape[..space_dim].to_vec(), shape[space_dim..].to_vec())
}

/// Maxwellian on the velocity grid of `g`, rescaled so its trapezoidal mass
/// is exactly one. Flattened in row-major velocity order.
fn discrete_maxwellian(g: &GridGeometry, spec: &VlasovBoltzmannSpec) -> Vec<f64> {
    let d = spec.space_dim;
    let (_, vshape) = split_sizes(g, d);
    let axes: Vec<Vec<f64>> = (d..2 * d).map(|k| g.axis_coordinates(k)).collect();
    let n: usize = vshape.iter().product();
    let mut mu = Vec::with_capacity(n);
    let mut v = vec![0.0; d];
    for flat in 0..n {
        let mut rem = flat;
        for k in (0..d).rev() {
            v[k] = axes[k][rem % vshape[k]];
            rem /= vshape[k];
        }
        mu.push(maxwellian(&v, spec.theta));
    }
    let arr = ArrayD::from_shape_vec(IxDyn(&vshape), mu).expect("velocity shape");
    let mass = integrate_with(&arr.view(), &velocity_weights(g, d));
    arr.into_raw_vec_and_offset().0.into_iter().map(|m| m / mass).collect()
}

/// `rho(x) = int f dv` by the trapezoidal rule over the velocity directions.
pub fn moment_density(f: &GridField, spec: &VlasovBoltzmannSpec) -> Result<ArrayD<f64>> {
    spec.check(f.geometry())?;
    let d = spec.space_dim;
    let (xshape, vshape) = split_sizes(f.geometry(), d);
    let nv: usize = vshape.iter().product();
    let nx: usize = xshape.iter().product();
    let w = velocity_weights(f.geometry(), d);
    let data = f.as_slice();
    let rho = crate::par::map_range(nx, |i| {
        let block = ArrayD::from_shape_vec(IxDyn(&vshape), data[i * nv..(i + 1) * nv].to_vec()).expect("block");
        integrate_with(&block.view(), &w)
    });
    Ok(ArrayD::from_shape_vec(IxDyn(&xshape), rho).expect("space shape"))
}

/// The stationary state `M(x, v)` normalised with the trapezoidal integral
/// of `e^{-Phi/theta}` over the space grid.
pub fn stationary_state(spec: &VlasovBoltzmannSpec, geometry: GridGeometry) -> Result<GridField> {
    spec.check(&geometry)?;
    let d = spec.space_dim;
    let theta = spec.theta;
    let (xshape, _) = split_sizes(&geometry, d);
    let xaxes: Vec<Vec<f64>> = (0..d).map(|k| geometry.axis_coordinates(k)).collect();
    let nx: usize = xshape.iter().product();
    let mut boltz = Vec::with_capacity(nx);
    let mut x = vec![0.0; d];
    for flat in 0..nx {
        let mut rem = flat;
        for k in (0..d).rev() {
            x[k] = xaxes[k][rem % xshape[k]];
            rem /= xshape[k];
        }
        boltz.push((-spec.potential(&x) / theta).exp());
    }
    let boltz = ArrayD::from_shape_vec(IxDyn(&xshape), boltz).expect("space shape");
    let xw: Vec<Vec<f64>> = (0..d).map(|k| geometry.quadrature_weights(k)).collect();
    let z = integrate_with(&boltz.view(), &xw);
    let norm = (2.0 * std::f64::consts::PI * theta).powf(0.5 * d as f64) * z;
    Ok(GridField::restrict(geometry, |p| {
        let (x, v) = p.split_at(d);
        let v2: f64 = v.iter().map(|a| a * a).sum();
        (-(0.5 * v2 + spec.potential(x)) / theta).exp() / norm
    }))
}

/// Rescales `f0` to unit trapezoidal mass.
pub fn normalize_initial(f0: GridField) -> Result<GridField> {
    let mass = f0.integrate();
    if !(mass > 0.0) {
        return Err(Error::NonPositive(format!("initial mass {mass}")));
    }
    let mut f = f0;
    f.as_slice_mut().iter_mut().for_each(|v| *v /= mass);
    Ok(f)
}

/// Transport by WENO5 along every direction plus relaxation towards the
/// discrete Maxwellian times the local density.
pub fn vb_rhs(f: &GridField, spec: &VlasovBoltzmannSpec, p: &WenoParams) -> Result<GridField> {
    let g = f.geometry();
    spec.check(g)?;
    check_lines(&g.shape())?;
    let d = spec.space_dim;
    let mut out = GridField::zeros(g.clone());
    let axes: Vec<Vec<f64>> = (0..2 * d).map(|k| g.axis_coordinates(k)).collect();
    for k in 0..2 * d {
        let dx = g.spacing(k);
        let axes = &axes;
        crate::par::for_each_lane(out.view_mut(), f.view(), k, |idx, o, line| {
            // Lane indices skip axis k, so axis j > k sits at j - 1.
            let c = if k < d {
                axes[d + k][idx[d + k - 1]]
            } else {
                -axes[k - d][idx[k - d]]
            };
            transport_line(line, o, c, dx, Boundary::Zero, p);
        });
    }
    if spec.tau.is_finite() {
        let rho = moment_density(f, spec)?;
        let mu = discrete_maxwellian(g, spec);
        let nv = mu.len();
        let inv_tau = 1.0 / spec.tau;
        let rho = rho.as_slice().expect("contiguous");
        let src = f.as_slice();
        let dst = out.as_slice_mut();
        let mut chunks: Vec<(usize, &mut [f64])> = dst.chunks_mut(nv).enumerate().collect();
        crate::par::map_mut(&mut chunks, |(i, row)| {
            let base = *i * nv;
            for (j, o) in row.iter_mut().enumerate() {
                *o += (mu[j] * rho[*i] - src[base + j]) * inv_tau;
            }
        });
    }
    Ok(out)
}

/// The Vlasov-Boltzmann model with its WENO settings, ready to evolve.
#[derive(Debug, Clone)]
pub struct VbProblem {
    pub spec: VlasovBoltzmannSpec,
    pub weno: WenoParams,
}

impl Evolve for VbProblem {
    type State = GridField;

    fn rhs(&self, state: &GridField) -> Result<GridField> {
        vb_rhs(state, &self.spec, &self.weno)
    }

    /// `|v_k|` and `|E_k|` peak at the box edges.
    fn wave_speeds(&self, _state: &GridField) -> Vec<f64> {
        let d = self.spec.space_dim;
        let mut s = vec![self.spec.v_extent; d];
        s.extend(vec![self.spec.x_extent; d]);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::LevelIndex;
    use std::f64::consts::PI;

    fn grid(spec: &VlasovBoltzmannSpec, cells: usize) -> GridGeometry {
        GridGeometry::new(
            spec.domain(),
            vec![cells; spec.phase_dim()],
            LevelIndex::uniform(spec.phase_dim(), 0),
            spec.boundaries(),
        )
        .unwrap()
    }

    #[test]
    fn maxwellian_closed_forms() {
        assert!((maxwellian(&[0.0], 1.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
        assert!((maxwellian(&[0.0, 0.0], 1.0) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert_eq!(maxwellian(&[0.7, -1.3], 1.0), maxwellian(&[-0.7, 1.3], 1.0));
    }

    #[test]
    fn density_of_constants_and_odd_functions() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = grid(&spec, 40);
        let rho = moment_density(&GridField::constant(g.clone(), 1.0), &spec).unwrap();
        assert!(rho.iter().all(|r| (r - 10.0).abs() < 1e-13));
        let odd = GridField::restrict(g, |p| p[1] * (-p[0] * p[0]).exp());
        let rho = moment_density(&odd, &spec).unwrap();
        assert!(rho.iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn density_of_a_gaussian_is_one() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = grid(&spec, 320);
        let f = GridField::restrict(g, |p| (-0.5 * p[1] * p[1]).exp() / (2.0 * PI).sqrt());
        let rho = moment_density(&f, &spec).unwrap();
        assert!(rho.iter().all(|r| (r - 1.0).abs() < 1e-6));
    }

    #[test]
    fn stationary_state_has_unit_mass_and_symmetry() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = grid(&spec, 80);
        let m = stationary_state(&spec, g.clone()).unwrap();
        assert!((m.integrate() - 1.0).abs() < 1e-6);
        let n = g.points(0);
        let v = m.values();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(v[[i, j]], v[[n - 1 - i, j]]);
                assert_eq!(v[[i, j]], v[[i, n - 1 - j]]);
                assert!(v[[n / 2, j]] >= v[[i, j]]);
            }
        }
    }

    #[test]
    fn normalisation_rescales_the_mass() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = grid(&spec, 40);
        let m = stationary_state(&spec, g.clone()).unwrap();
        let mass = m.integrate();
        let doubled = GridField::restrict(g.clone(), |p| {
            2.0 * (-(0.5 * p[1] * p[1] + 0.5 * p[0] * p[0])).exp() / (2.0 * PI * 2.0 * PI).sqrt()
        });
        let two = doubled.integrate();
        let h = normalize_initial(doubled.clone()).unwrap();
        for (a, b) in h.values().iter().zip(doubled.values()) {
            assert!((a - b / two).abs() <= 1e-16 * b.abs().max(1e-300) + 1e-300);
        }
        let unit = normalize_initial(GridField::new(g.clone(), m.values() / mass).unwrap()).unwrap();
        for (a, b) in unit.values().iter().zip(m.values()) {
            assert!((a - b / mass).abs() < 1e-15);
        }
        assert!(normalize_initial(GridField::zeros(g)).is_err());
    }

    #[test]
    fn initial_shape_normalises_to_unit_mass() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = grid(&spec, 320);
        let f0 = GridField::restrict(g, |p| (0.5 * p[0] * p[0]).sin().powi(2) * (-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp());
        let f = normalize_initial(f0).unwrap();
        assert!((f.integrate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_state_has_zero_tendency() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let r = vb_rhs(&GridField::zeros(grid(&spec, 20)), &spec, &WenoParams::default()).unwrap();
        assert!(r.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn relaxation_conserves_mass_per_point() {
        // Transport off: with huge speeds removed, the relaxation part alone
        // must integrate to zero over v at every x.
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = grid(&spec, 40);
        let f = GridField::restrict(g.clone(), |p| 1.0 + (3.0 * p[0]).sin() * (p[1] - 0.3).cos().powi(2));
        let rho = moment_density(&f, &spec).unwrap();
        let mu = discrete_maxwellian(&g, &spec);
        let n = g.points(1);
        let w = g.quadrature_weights(1);
        let fmax = f.max();
        for i in 0..g.points(0) {
            let s: f64 = (0..n).map(|j| w[j] * (mu[j] * rho[[i]] - f.values()[[i, j]])).sum();
            assert!(s.abs() < 1e-12 * fmax, "{s}");
        }
    }

    #[test]
    fn infinite_relaxation_time_leaves_pure_transport() {
        let slow = VlasovBoltzmannSpec::new(1.0, 1e12, 1, 5.0, 5.0).unwrap();
        let none = VlasovBoltzmannSpec::new(1.0, f64::INFINITY, 1, 5.0, 5.0).unwrap();
        let g = grid(&slow, 40);
        let f = GridField::restrict(g, |p| (-(p[0] - 0.5).powi(2) - p[1] * p[1]).exp());
        let a = vb_rhs(&f, &slow, &WenoParams::default()).unwrap();
        let b = vb_rhs(&f, &none, &WenoParams::default()).unwrap();
        let scale = b.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn stationary_state_is_an_equilibrium_up_to_discretisation_error() {
        // A wide box keeps the truncated tails below the discretisation error
        // being measured.
        let spec = VlasovBoltzmannSpec::new(1.0, 1.0, 1, 10.0, 10.0).unwrap();
        let err = |cells| {
            let m = stationary_state(&spec, grid(&spec, cells)).unwrap();
            let r = vb_rhs(&m, &spec, &WenoParams::default()).unwrap();
            r.values().iter().fold(0.0f64, |a, v| a.max(v.abs()))
        };
        let (e1, e2) = (err(80), err(160));
        assert!((e1 / e2).log2() >= 4.5, "order {}", (e1 / e2).log2());
    }

    #[test]
    fn non_zero_boundaries_are_rejected() {
        let spec = VlasovBoltzmannSpec::standard(1);
        let g = GridGeometry::uniform(spec.domain(), 10, LevelIndex::uniform(2, 0), Boundary::Periodic).unwrap();
        assert!(vb_rhs(&GridField::zeros(g), &spec, &WenoParams::default()).is_err());
    }
}
