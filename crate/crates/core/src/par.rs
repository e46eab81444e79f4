//! Data-parallel kernels over grid lanes and elements.
//!
//! With the `parallel` feature (default) every helper dispatches through rayon;
//! without it the same closures run sequentially. All helpers are
//! order-independent in their effect, so results are bitwise identical in
//! both builds and for any thread count.

use ndarray::{ArrayView1, ArrayViewD, ArrayViewMut1, ArrayViewMutD, Axis, Zip};

/// Visits every lane of `out` along `axis` together with the matching lane of
/// `inp`. The lane position is passed as a multi-index over the remaining
/// axes, in their original order.
pub fn for_each_lane<F>(mut out: ArrayViewMutD<'_, f64>, inp: ArrayViewD<'_, f64>, axis: usize, f: F)
where
    F: Fn(&[usize], ArrayViewMut1<'_, f64>, ArrayView1<'_, f64>) + Sync + Send,
{
    let outer: Vec<usize> = out
        .shape()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != axis)
        .map(|(_, &n)| n)
        .collect();
    let pairs: Vec<_> = out.lanes_mut(Axis(axis)).into_iter().zip(inp.lanes(Axis(axis))).collect();
    let run = |(flat, (o, i)): (usize, (ArrayViewMut1<'_, f64>, ArrayView1<'_, f64>))| {
        let mut idx = vec![0usize; outer.len()];
        let mut rem = flat;
        for k in (0..outer.len()).rev() {
            idx[k] = rem % outer[k];
            rem /= outer[k];
        }
        f(&idx, o, i);
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs.into_par_iter().enumerate().for_each(run);
    }
    #[cfg(not(feature = "parallel"))]
    pairs.into_iter().enumerate().for_each(run);
}

/// `a[i] = f(a[i], b[i])` for every element.
pub fn zip_apply<F>(a: ArrayViewMutD<'_, f64>, b: ArrayViewD<'_, f64>, f: F)
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let zip = Zip::from(a).and(b);
    #[cfg(feature = "parallel")]
    zip.par_for_each(|x, &y| *x = f(*x, y));
    #[cfg(not(feature = "parallel"))]
    zip.for_each(|x, &y| *x = f(*x, y));
}

/// Maps `f` over a mutable slice of items, collecting the results in order.
pub fn map_mut<T, R, F>(items: &mut [T], f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(&mut T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter_mut().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().map(f).collect()
    }
}

/// Maps `f` over a slice, collecting the results in order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, collecting the results in order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Configures the global worker pool. A no-op in sequential builds.
pub fn init_threads(threads: usize) -> crate::Result<()> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| crate::Error::InvalidArgument(format!("thread pool: {e}")))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}
