use crate::{CMat, C64};

pub(crate) fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub(crate) fn one() -> C64 {
    C64::new(1.0, 0.0)
}

pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Numerical rank from singular values, relative to the largest one.
pub(crate) fn rank(m: &CMat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top <= tol {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * top.max(1.0)).count()
}

pub(crate) fn try_inverse(m: &CMat) -> Option<CMat> {
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    m.clone().try_inverse()
}

/// Values below `1e-13` in magnitude are flushed to zero and `-0.0` is
/// normalised, so serialised numbers are stable.
pub fn tidy(z: C64) -> [f64; 2] {
    let clean = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
    [clean(z.re), clean(z.im)]
}
