use rayon::prelude::*;

use crate::error::{Error, Result};

/// Central-difference gradient `(f(x + h e_i) − f(x − h e_i)) / 2h`.
/// Coordinates are probed in parallel; the result does not depend on the
/// thread count.
pub fn finite_diff_gradient<F>(f: &F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            let mut probe = x.to_vec();
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            if !(up.is_finite() && down.is_finite()) {
                return Err(Error::NonFiniteProbe { coord: i });
            }
            Ok((up - down) / (2.0 * h))
        })
        .collect()
}
