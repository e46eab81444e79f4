//! Semi-coarsened grid family, point-value fields and restriction.
//!
//! A grid is identified by a [`LevelIndex`] relative to a root grid with
//! `N_r` cells per direction: direction `k` carries `2^{l_k} N_r` cells of
//! width `2^{-l_k} H_k`. Periodic directions store one point per cell (the
//! upper endpoint duplicates the lower one); zero-boundary directions store
//! both endpoints. Values are kept in row-major order with axis 0 slowest.

use std::fmt;

use ndarray::{ArrayD, ArrayViewD, ArrayViewMutD, IxDyn};

use crate::{Error, Result};

/// Boundary treatment of one grid direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    /// Constant-zero extension outside the box; both endpoints are stored.
    Zero,
}

/// Axis-aligned computational box.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl DomainBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() || lower.len() > 4 {
            return Err(Error::InvalidArgument(format!(
                "domain needs 1..=4 matching bounds, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "domain direction {k}: upper {hi} must exceed lower {lo}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn length(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }
}

/// Per-direction refinement levels `(l_1, ..., l_d)` relative to the root grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex(Vec<u32>);

impl LevelIndex {
    pub fn new(levels: Vec<u32>) -> Self {
        Self(levels)
    }

    /// `(l, l, ..., l)`.
    pub fn uniform(dim: usize, level: u32) -> Self {
        Self(vec![level; dim])
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|I| = l_1 + ... + l_d`.
    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// All level indices of the combination technique in `d` dimensions with
/// finest level `finest`: every index with
/// `max(0, finest - d + 1) <= |I| <= finest`, sorted lexicographically.
pub fn enumerate_combination_levels(d: usize, finest: u32) -> Result<Vec<LevelIndex>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if (finest as usize) + 1 < d {
        return Err(Error::InvalidArgument(format!(
            "finest level {finest} is below d - 1 = {}",
            d - 1
        )));
    }
    let low = finest + 1 - d as u32;
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fn recurse(k: usize, remaining: u32, low: u32, cur: &mut Vec<u32>, out: &mut Vec<LevelIndex>) {
        let d = cur.len();
        if k == d {
            let s: u32 = cur.iter().sum();
            if s >= low {
                out.push(LevelIndex(cur.clone()));
            }
            return;
        }
        for l in 0..=remaining {
            cur[k] = l;
            recurse(k + 1, remaining - l, low, cur, out);
        }
        cur[k] = 0;
    }
    recurse(0, finest, low, &mut current, &mut out);
    out.sort();
    Ok(out)
}

/// Geometry of one semi-coarsened grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGeometry {
    domain: DomainBox,
    root_cells: Vec<usize>,
    level: LevelIndex,
    boundary: Vec<Boundary>,
}

impl GridGeometry {
    pub fn new(
        domain: DomainBox,
        root_cells: Vec<usize>,
        level: LevelIndex,
        boundary: Vec<Boundary>,
    ) -> Result<Self> {
        let d = domain.dim();
        if root_cells.len() != d || level.dim() != d || boundary.len() != d {
            return Err(Error::InvalidArgument(format!(
                "geometry components disagree on dimension {d}"
            )));
        }
        if root_cells.contains(&0) {
            return Err(Error::InvalidArgument("root cell count must be positive".into()));
        }
        if level.levels().iter().any(|&l| l > 30) {
            return Err(Error::InvalidArgument("refinement level above 30".into()));
        }
        Ok(Self {
            domain,
            root_cells,
            level,
            boundary,
        })
    }

    /// Root grid with the same cell count `nr` and boundary in every direction.
    pub fn uniform(domain: DomainBox, nr: usize, level: LevelIndex, boundary: Boundary) -> Result<Self> {
        let d = domain.dim();
        Self::new(domain, vec![nr; d], level, vec![boundary; d])
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn root_cells(&self) -> &[usize] {
        &self.root_cells
    }

    pub fn level(&self) -> &LevelIndex {
        &self.level
    }

    pub fn boundary(&self) -> &[Boundary] {
        &self.boundary
    }

    /// Same domain, root grid and boundaries, different level.
    pub fn with_level(&self, level: LevelIndex) -> Result<Self> {
        Self::new(self.domain.clone(), self.root_cells.clone(), level, self.boundary.clone())
    }

    /// True when both grids belong to the same semi-coarsened family.
    pub fn same_family(&self, other: &Self) -> bool {
        self.domain == other.domain && self.root_cells == other.root_cells && self.boundary == other.boundary
    }

    pub fn cells(&self, k: usize) -> usize {
        self.root_cells[k] << self.level.levels()[k]
    }

    /// Root spacing `H_k = (upper - lower) / N_r`.
    pub fn root_spacing(&self, k: usize) -> f64 {
        self.domain.length(k) / self.root_cells[k] as f64
    }

    /// `h_k = 2^{-l_k} H_k`, an exact power-of-two scaling of the root spacing.
    pub fn spacing(&self, k: usize) -> f64 {
        self.root_spacing(k) * 0.5f64.powi(self.level.levels()[k] as i32)
    }

    pub fn spacings(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.spacing(k)).collect()
    }

    pub fn points(&self, k: usize) -> usize {
        match self.boundary[k] {
            Boundary::Periodic => self.cells(k),
            Boundary::Zero => self.cells(k) + 1,
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        (0..self.dim()).map(|k| self.points(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of point `i` along direction `k` (no range check).
    #[inline]
    pub fn coordinate(&self, k: usize, i: usize) -> f64 {
        self.domain.lower[k] + i as f64 * self.spacing(k)
    }

    pub fn axis_coordinates(&self, k: usize) -> Vec<f64> {
        let lo = self.domain.lower[k];
        let h = self.spacing(k);
        (0..self.points(k)).map(|i| lo + i as f64 * h).collect()
    }

    /// Coordinates of the grid point with multi-index `idx`.
    pub fn grid_point_coordinate(&self, idx: &[usize]) -> Result<Vec<f64>> {
        let shape = self.shape();
        if idx.len() != shape.len() || idx.iter().zip(&shape).any(|(i, n)| i >= n) {
            return Err(Error::IndexOutOfRange {
                index: idx.to_vec(),
                extents: shape,
            });
        }
        Ok(idx.iter().enumerate().map(|(k, &i)| self.coordinate(k, i)).collect())
    }

    /// One-dimensional composite trapezoidal weights along direction `k`.
    /// Periodic directions get uniform weights `h`; zero-boundary directions
    /// get `h/2` at both endpoints.
    pub fn quadrature_weights(&self, k: usize) -> Vec<f64> {
        let h = self.spacing(k);
        let n = self.points(k);
        let mut w = vec![h; n];
        if self.boundary[k] == Boundary::Zero {
            w[0] = 0.5 * h;
            w[n - 1] = 0.5 * h;
        }
        w
    }
}

/// Point values on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    geometry: GridGeometry,
    values: ArrayD<f64>,
}

impl GridField {
    pub fn new(geometry: GridGeometry, values: ArrayD<f64>) -> Result<Self> {
        let expected = geometry.shape();
        if values.shape() != expected.as_slice() {
            return Err(Error::ShapeMismatch {
                expected,
                found: values.shape().to_vec(),
            });
        }
        let values = if values.is_standard_layout() {
            values
        } else {
            values.as_standard_layout().into_owned()
        };
        Ok(Self { geometry, values })
    }

    pub fn zeros(geometry: GridGeometry) -> Self {
        let values = ArrayD::zeros(IxDyn(&geometry.shape()));
        Self { geometry, values }
    }

    pub fn constant(geometry: GridGeometry, c: f64) -> Self {
        let values = ArrayD::from_elem(IxDyn(&geometry.shape()), c);
        Self { geometry, values }
    }

    /// Evaluates `f` at every grid point.
    pub fn restrict<F>(geometry: GridGeometry, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let shape = geometry.shape();
        let axes: Vec<Vec<f64>> = (0..geometry.dim()).map(|k| geometry.axis_coordinates(k)).collect();
        let inner: usize = shape[1..].iter().product();
        let rows = crate::par::map_range(shape[0], |i0| {
            let mut row = Vec::with_capacity(inner);
            let mut idx = vec![0usize; shape.len()];
            let mut x = vec![0.0; shape.len()];
            idx[0] = i0;
            x[0] = axes[0][i0];
            for _ in 0..inner {
                for k in 1..shape.len() {
                    x[k] = axes[k][idx[k]];
                }
                row.push(f(&x));
                for k in (1..shape.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < shape[k] {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            row
        });
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        let values = ArrayD::from_shape_vec(IxDyn(&shape), data).expect("restriction shape");
        Self { geometry, values }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    pub fn view(&self) -> ArrayViewD<'_, f64> {
        self.values.view()
    }

    pub fn view_mut(&mut self) -> ArrayViewMutD<'_, f64> {
        self.values.view_mut()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.values.as_slice().expect("grid fields are stored contiguously")
    }

    pub fn as_slice_mut(&mut self) -> &mut [f64] {
        self.values.as_slice_mut().expect("grid fields are stored contiguously")
    }

    pub fn into_values(self) -> ArrayD<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Tensor-product trapezoidal quadrature of the field over the box.
    pub fn integrate(&self) -> f64 {
        let weights: Vec<Vec<f64>> = (0..self.geometry.dim())
            .map(|k| self.geometry.quadrature_weights(k))
            .collect();
        integrate_with(&self.values.view(), &weights)
    }
}

/// Sums `values` against a tensor-product weight set, innermost axis first,
/// in a fixed order.
pub(crate) fn integrate_with(values: &ArrayViewD<'_, f64>, weights: &[Vec<f64>]) -> f64 {
    let shape = values.shape();
    let d = shape.len();
    let inner = shape[d - 1];
    let data = values.as_standard_layout();
    let data = data.as_slice().expect("standard layout");
    let w_last = &weights[d - 1];
    let mut total = 0.0;
    let mut idx = vec![0usize; d.saturating_sub(1)];
    for row in data.chunks_exact(inner) {
        let mut outer_w = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            outer_w *= weights[k][i];
        }
        let s: f64 = row.iter().zip(w_last).map(|(v, w)| v * w).sum();
        total += outer_w * s;
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    total
}
