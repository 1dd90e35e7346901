//! Exp-sinh rule for `[0, inf)`: `x = exp(pi/2 sinh t)` followed by the
//! trapezoid rule in `t`, halving the step until two levels agree.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const T_MAX: f64 = 4.5;
const H0: f64 = 0.5;
const MAX_LEVEL: usize = 12;

pub(crate) struct DoubleExponential {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn node_sum<F>(f: &F, h: f64, start: usize, stride: usize, evaluations: &mut usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = (T_MAX / h).round() as i64;
    let mut sum = 0.0;
    let mut i = -n + start as i64;
    while i <= n {
        let t = i as f64 * h;
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * x;
        if x > 0.0 && x.is_finite() && w.is_finite() {
            let value = f(x)?;
            *evaluations += 1;
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { x, value });
            }
            sum += w * value;
        }
        i += stride as i64;
    }
    Ok(sum)
}

pub(crate) fn exp_sinh<F>(
    f: &F,
    rel_tol: f64,
    abs_tol: f64,
    max_evaluations: usize,
) -> Result<DoubleExponential>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut evaluations = 0;
    let mut h = H0;
    let mut sum = node_sum(f, h, 0, 1, &mut evaluations)?;
    let mut value = h * sum;
    let mut error = f64::INFINITY;
    for _ in 0..MAX_LEVEL {
        if evaluations >= max_evaluations {
            break;
        }
        h *= 0.5;
        // new nodes are the odd multiples of the halved step
        sum += node_sum(f, h, 1, 2, &mut evaluations)?;
        let next = h * sum;
        error = (next - value).abs();
        value = next;
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
    }
    Ok(DoubleExponential {
        value,
        error,
        evaluations,
        converged: error <= abs_tol.max(rel_tol * value.abs()),
    })
}
