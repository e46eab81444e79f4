//! Error norms, convergence orders, entropy functionals and oscillation
//! measures.

use crate::grid::GridField;
use crate::{Error, Result};

/// Errors of one refinement level against an exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l1: f64,
    pub linf: f64,
    pub order_l1: Option<f64>,
    pub order_linf: Option<f64>,
}

/// Grid-point mean and maximum of `|numeric - exact|`.
pub fn error_norms(numeric: &GridField, exact: &GridField) -> Result<(f64, f64)> {
    if numeric.geometry() != exact.geometry() {
        return Err(Error::ShapeMismatch {
            expected: exact.geometry().shape(),
            found: numeric.geometry().shape(),
        });
    }
    Ok(difference_norms(numeric.as_slice(), exact.as_slice()))
}

/// Mean and maximum absolute difference of two equally long slices.
pub fn difference_norms(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let e = (x - y).abs();
        sum += e;
        max = max.max(e);
    }
    (sum / a.len().max(1) as f64, max)
}

/// `log2(e[j-1] / e[j])` for each successive pair.
pub fn convergence_order(errors: &[f64]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::InvalidArgument("convergence order needs at least two errors".into()));
    }
    if let Some(&e) = errors.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::NonPositive(format!("error {e}")));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// Attaches successive orders to a list of `(l1, linf)` pairs.
pub fn error_reports(norms: &[(f64, f64)]) -> Vec<ErrorReport> {
    let order = |a: f64, b: f64| if a > 0.0 && b > 0.0 { Some((a / b).log2()) } else { None };
    norms
        .iter()
        .enumerate()
        .map(|(j, &(l1, linf))| ErrorReport {
            l1,
            linf,
            order_l1: if j == 0 { None } else { order(norms[j - 1].0, l1) },
            order_linf: if j == 0 { None } else { order(norms[j - 1].1, linf) },
        })
        .collect()
}

/// `H2 = int H^2 M` and `Hlog = int H log(H) M` with `H = f / M`, by the
/// trapezoidal rule. Points with `f <= 0` add nothing to `Hlog`.
pub fn entropy_functionals(f: &GridField, m: &GridField) -> Result<(f64, f64)> {
    if f.geometry() != m.geometry() {
        return Err(Error::ShapeMismatch {
            expected: m.geometry().shape(),
            found: f.geometry().shape(),
        });
    }
    if let Some(&v) = m.as_slice().iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::NonPositive(format!("stationary state value {v}")));
    }
    let g = f.geometry().clone();
    let mut h2 = Vec::with_capacity(f.len());
    let mut hlog = Vec::with_capacity(f.len());
    for (&fv, &mv) in f.as_slice().iter().zip(m.as_slice()) {
        let h = fv / mv;
        h2.push(h * h * mv);
        hlog.push(if fv > 0.0 { fv * h.ln() } else { 0.0 });
    }
    let a = GridField::new(g.clone(), ndarray::ArrayD::from_shape_vec(g.shape(), h2).expect("shape"))?;
    let b = GridField::new(g.clone(), ndarray::ArrayD::from_shape_vec(g.shape(), hlog).expect("shape"))?;
    Ok((a.integrate(), b.integrate()))
}

/// `(max(0, lo - min u), max(0, max u - hi))`.
pub fn oscillation_metrics(u: &GridField, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(lo <= hi) {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    Ok(((lo - u.min()).max(0.0), (u.max() - hi).max(0.0)))
}
