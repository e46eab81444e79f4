//! Reduced Vlasov-Maxwell system in `(x2, xi1, xi2)`:
//!
//! ```text
//! f_t + xi2 f_x2 + (E1 + xi2 B3) f_xi1 + (E2 - xi1 B3) f_xi2 = 0
//! B3_t = E1_x2,   E1_t = B3_x2 - j1,   E2_t = -j2
//! ```
//!
//! `x2` is periodic; the velocity box has zero boundaries. The fields live
//! on the `x2` points of each grid and are advanced together with `f`.

use crate::grid::{Boundary, DomainBox, GridField, GridGeometry};
use crate::timestep::{Evolve, OdeState};
use crate::weno::{weno_derivative_line, WenoParams};
use crate::{Error, Result};

use super::{check_lines, transport_line};

#[derive(Debug, Clone, PartialEq)]
pub struct VlasovMaxwellSpec {
    pub beta: f64,
    pub b: f64,
    pub delta: f64,
    pub v01: f64,
    pub v02: f64,
    pub k0: f64,
    /// Half-width of the square velocity box.
    pub xi_extent: f64,
}

impl Default for VlasovMaxwellSpec {
    fn default() -> Self {
        Self {
            beta: 0.01,
            b: 0.001,
            delta: 0.5,
            v01: 0.3,
            v02: 0.3,
            k0: 0.2,
            xi_extent: 1.2,
        }
    }
}

impl VlasovMaxwellSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) {
            return Err(Error::NonPositive(format!("beta = {}", self.beta)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidArgument(format!("delta = {} outside [0, 1]", self.delta)));
        }
        if !(self.k0 > 0.0) || !(self.xi_extent > 0.0) {
            return Err(Error::NonPositive("k0 and the velocity extent must be positive".into()));
        }
        Ok(())
    }

    pub fn domain(&self) -> DomainBox {
        let a = self.xi_extent;
        DomainBox::new(
            vec![0.0, -a, -a],
            vec![2.0 * std::f64::consts::PI / self.k0, a, a],
        )
        .expect("valid box")
    }

    pub fn boundaries(&self) -> Vec<Boundary> {
        vec![Boundary::Periodic, Boundary::Zero, Boundary::Zero]
    }

    /// Two counter-streaming beams in `xi1`, Gaussian in `xi2`.
    pub fn initial_distribution(&self, p: &[f64]) -> f64 {
        let (xi1, xi2) = (p[1], p[2]);
        let beta = self.beta;
        let beams = self.delta * (-(xi1 - self.v01).powi(2) / beta).exp()
            + (1.0 - self.delta) * (-(xi1 + self.v02).powi(2) / beta).exp();
        (-xi2 * xi2 / beta).exp() * beams / (std::f64::consts::PI * beta)
    }

    pub fn initial_fields(&self, geometry: &GridGeometry) -> MaxwellFieldState {
        let x = geometry.axis_coordinates(0);
        MaxwellFieldState {
            e1: vec![0.0; x.len()],
            e2: vec![0.0; x.len()],
            b3: x.iter().map(|&x2| self.b * (self.k0 * x2).sin()).collect(),
        }
    }

    pub fn initial_state(&self, geometry: GridGeometry) -> VmState {
        let fields = self.initial_fields(&geometry);
        let f = GridField::restrict(geometry, |p| self.initial_distribution(p));
        VmState { f, fields }
    }

    fn check(&self, g: &GridGeometry) -> Result<()> {
        if g.dim() != 3 || g.boundary() != self.boundaries().as_slice() {
            return Err(Error::InconsistentDomain(
                "Vlasov-Maxwell grids are (x2 periodic, xi1 zero, xi2 zero)".into(),
            ));
        }
        Ok(())
    }
}

/// `E1`, `E2`, `B3` at the `x2` points of one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellFieldState {
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub b3: Vec<f64>,
}

impl MaxwellFieldState {
    pub fn zeros(n: usize) -> Self {
        Self {
            e1: vec![0.0; n],
            e2: vec![0.0; n],
            b3: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.e1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e1.is_empty()
    }
}

impl OdeState for MaxwellFieldState {
    fn axpy(&mut self, a: f64, x: &Self) {
        self.e1.axpy(a, &x.e1);
        self.e2.axpy(a, &x.e2);
        self.b3.axpy(a, &x.b3);
    }

    fn is_finite(&self) -> bool {
        self.e1.is_finite() && self.e2.is_finite() && self.b3.is_finite()
    }
}

/// Distribution and fields of one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VmState {
    pub f: GridField,
    pub fields: MaxwellFieldState,
}

impl OdeState for VmState {
    fn axpy(&mut self, a: f64, x: &Self) {
        self.f.axpy(a, &x.f);
        self.fields.axpy(a, &x.fields);
    }

    fn is_finite(&self) -> bool {
        self.f.is_finite() && self.fields.is_finite()
    }
}

/// `j1 = int f xi1`, `j2 = int f xi2` by the trapezoidal rule on each `x2`
/// slice.
pub fn currents(f: &GridField) -> (Vec<f64>, Vec<f64>) {
    let g = f.geometry();
    let (n0, n1, n2) = (g.points(0), g.points(1), g.points(2));
    let w1 = g.quadrature_weights(1);
    let w2 = g.quadrature_weights(2);
    let xi1 = g.axis_coordinates(1);
    let xi2 = g.axis_coordinates(2);
    let data = f.as_slice();
    let pairs = crate::par::map_range(n0, |i| {
        let slab = &data[i * n1 * n2..(i + 1) * n1 * n2];
        let (mut j1, mut j2) = (0.0, 0.0);
        for a in 0..n1 {
            let row = &slab[a * n2..(a + 1) * n2];
            let (mut s1, mut s2) = (0.0, 0.0);
            for b in 0..n2 {
                s1 += w2[b] * row[b];
                s2 += w2[b] * row[b] * xi2[b];
            }
            j1 += w1[a] * xi1[a] * s1;
            j2 += w1[a] * s2;
        }
        (j1, j2)
    });
    pairs.into_iter().unzip()
}

/// Tendencies of `f` and of the fields.
pub fn vm_rhs(state: &VmState, spec: &VlasovMaxwellSpec, p: &WenoParams) -> Result<VmState> {
    let g = state.f.geometry();
    spec.check(g)?;
    check_lines(&g.shape())?;
    let n0 = g.points(0);
    if state.fields.len() != n0 {
        return Err(Error::ShapeMismatch {
            expected: vec![n0],
            found: vec![state.fields.len()],
        });
    }
    let MaxwellFieldState { e1, e2, b3 } = &state.fields;
    let axes: Vec<Vec<f64>> = (0..3).map(|k| g.axis_coordinates(k)).collect();
    let mut df = GridField::zeros(g.clone());
    let boundary = g.boundary().to_vec();
    for (k, &bk) in boundary.iter().enumerate() {
        let dx = g.spacing(k);
        let axes = &axes;
        crate::par::for_each_lane(df.view_mut(), state.f.view(), k, |idx, o, line| {
            let c = match k {
                0 => axes[2][idx[1]],
                1 => e1[idx[0]] + axes[2][idx[1]] * b3[idx[0]],
                _ => e2[idx[0]] - axes[1][idx[1]] * b3[idx[0]],
            };
            transport_line(line, o, c, dx, bk, p);
        });
    }

    let (j1, j2) = currents(&state.f);
    let dx = g.spacing(0);
    let wp: Vec<f64> = e1.iter().zip(b3).map(|(e, b)| e + b).collect();
    let wm: Vec<f64> = e1.iter().zip(b3).map(|(e, b)| e - b).collect();
    // w+ moves left, w- moves right.
    let mut dwp = vec![0.0; n0];
    let mut dwm = vec![0.0; n0];
    weno_derivative_line(&wp, |v| -v, 1.0, dx, Boundary::Periodic, p, &mut dwp)?;
    weno_derivative_line(&wm, |v| v, 1.0, dx, Boundary::Periodic, p, &mut dwm)?;
    let mut fields = MaxwellFieldState::zeros(n0);
    for i in 0..n0 {
        let tp = -dwp[i] - j1[i];
        let tm = -dwm[i] - j1[i];
        fields.e1[i] = 0.5 * (tp + tm);
        fields.b3[i] = 0.5 * (tp - tm);
        fields.e2[i] = -j2[i];
    }
    Ok(VmState { f: df, fields })
}

/// The Vlasov-Maxwell system with its WENO settings, ready to evolve.
#[derive(Debug, Clone)]
pub struct VmProblem {
    pub spec: VlasovMaxwellSpec,
    pub weno: WenoParams,
}

impl Evolve for VmProblem {
    type State = VmState;

    fn rhs(&self, state: &VmState) -> Result<VmState> {
        vm_rhs(state, &self.spec, &self.weno)
    }

    fn wave_speeds(&self, state: &VmState) -> Vec<f64> {
        let a = self.spec.xi_extent;
        let fl = &state.fields;
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        for i in 0..fl.len() {
            s1 = s1.max(fl.e1[i].abs() + a * fl.b3[i].abs());
            s2 = s2.max(fl.e2[i].abs() + a * fl.b3[i].abs());
        }
        // Light speed 1 bounds the field characteristics along x2.
        vec![a.max(1.0), s1, s2]
    }
}
