//! Adaptive integration over semi-infinite domains and the Lifshitz wedge,
//! plus the loop-resummation and series helpers built on top of it.

mod double_exponential;
mod kronrod;

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// How `[0, inf)` is folded onto a finite interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Transform {
    /// `x = -ln u`; exact for `e^-x` and well suited to exponential decay.
    #[default]
    ExpMap,
    /// `x = (1 - t) / t`, for integrands with algebraic decay.
    Algebraic,
    /// Double-exponential (exp-sinh) rule; tolerant of endpoint singularities.
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            transform: Transform::ExpMap,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize, transform: Transform) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
            transform,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            ..Default::default()
        }
    }

    pub fn with_transform(self, transform: Transform) -> Self {
        QuadratureSpec { transform, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("rel_tol", self.rel_tol)?;
        require_positive("abs_tol", self.abs_tol)?;
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }

    /// Same spec with both tolerances scaled by `factor`.
    pub(crate) fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }

    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Result of a closed-form evaluation.
    pub fn analytic(value: f64) -> Self {
        QuadResult {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of two independent results.
    pub fn combine(self, other: QuadResult) -> Self {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        QuadResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

/// `int_a^b f` by adaptive Gauss-Kronrod; `a` and `b` must be finite.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_interval(|x| Ok(f(x)), a, b, spec)
}

pub fn try_integrate_interval<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval", format!("bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult::analytic(0.0));
    }
    let r = kronrod::adaptive(&f, a, b, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)?;
    Ok(QuadResult {
        value: r.value,
        error_estimate: r.error,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

fn finite_at<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let value = f(x)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteIntegrand { x, value })
    }
}

/// `int_0^inf f(x) dx`. `f` must be finite on `(0, inf)` and decay.
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), spec)
}

pub fn try_integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    match spec.transform {
        Transform::ExpMap => {
            let mapped = |u: f64| {
                let x = -u.ln();
                let v = finite_at(&f, x)?;
                if v == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(v / u)
                }
            };
            try_integrate_interval(mapped, 0.0, 1.0, spec)
        }
        Transform::Algebraic => {
            let mapped = |t: f64| {
                let v = finite_at(&f, (1.0 - t) / t)?;
                if v == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(v / (t * t))
                }
            };
            try_integrate_interval(mapped, 0.0, 1.0, spec)
        }
        Transform::TanhSinh => {
            let r = double_exponential::exp_sinh(
                &f,
                spec.rel_tol,
                spec.abs_tol,
                spec.max_subdivisions.saturating_mul(21),
            )?;
            Ok(QuadResult {
                value: r.value,
                error_estimate: r.error,
                evaluations: r.evaluations,
                converged: r.converged,
            })
        }
    }
}

/// Integral of `g(xi, kappa)` over the wedge `0 <= xi <= kappa < inf`
/// (natural units, `c = 1`).
///
/// The wedge is traversed as `kappa = X / L` (outer, semi-infinite, mapped by
/// `spec.transform`) and `xi = t kappa` with `t` in `[0, 1]` (inner, adaptive
/// Gauss-Kronrod), so
///
/// ```text
/// int dxi int_xi^inf dkappa g = L^-2 int_0^inf dX X int_0^1 dt g(X t / L, X / L)
/// ```
///
/// and the panel layout does not depend on `L`. The inner integrals run at a
/// tenth of the requested tolerance; once they converge, each is within
/// `inner_rel_tol * |inner|` (or the inner absolute tolerance), and that bound,
/// integrated with the outer weights, is added to the outer estimate. The
/// outer integral runs at nine tenths of the tolerance to leave room for it.
/// `spec.abs_tol` applies to the unnormalized `X` integral, so callers should
/// pass an integrand that does not scale with `L`.
pub fn integrate_2d_lifshitz<G>(g: G, separation: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    require_positive("separation", separation)?;
    spec.validate()?;
    let inner_spec = spec.tightened(0.1);
    let inner_evals = Cell::new(0usize);
    let inner_converged = Cell::new(true);
    let outer = |x: f64| -> Result<f64> {
        let kappa = x / separation;
        let inner = try_integrate_interval(|t| g(t * kappa, kappa), 0.0, 1.0, &inner_spec)?;
        inner_evals.set(inner_evals.get() + inner.evaluations);
        if !inner.converged {
            inner_converged.set(false);
        }
        Ok(x * inner.value)
    };
    // leave room for the inner bound added below
    let outer_spec = QuadratureSpec {
        rel_tol: 0.9 * spec.rel_tol,
        ..*spec
    };
    let r = try_integrate_semi_infinite(outer, &outer_spec)?;
    let norm = 1.0 / (separation * separation);
    let error = r.error_estimate + inner_spec.rel_tol * r.value.abs();
    Ok(QuadResult {
        value: r.value * norm,
        error_estimate: error * norm,
        evaluations: inner_evals.get(),
        converged: r.converged && inner_converged.get() && error <= spec.tolerance_for(r.value),
    })
}

/// Largest open-loop value accepted by [`closed_loop`].
pub const LOOP_STABILITY_LIMIT: f64 = 1.0 - 1e-15;

/// Sum over round trips `rho + rho^2 + ... = rho / (1 - rho)`.
pub fn closed_loop(rho: f64) -> Result<f64> {
    if rho.is_nan() || rho >= LOOP_STABILITY_LIMIT {
        return Err(Error::Instability { rho });
    }
    Ok(rho / (1.0 - rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    /// Partial sum plus the tail estimate.
    pub value: f64,
    pub n_used: usize,
    pub tail: f64,
}

/// Upper bound on the number of terms [`sum_until`] will add.
pub const MAX_SERIES_TERMS: usize = 1_000_000;

/// Sums `term(1) + term(2) + ...` up to and including the first term with
/// `|term(n)| < tail_tol`, then adds an estimate of the remaining tail.
///
/// The tail model is chosen from the last three terms: a power law
/// `C n^-p` when the fitted exponent is stable, a geometric series otherwise.
pub fn sum_until<T>(term: T, tail_tol: f64) -> Result<SeriesSum>
where
    T: Fn(usize) -> f64,
{
    require_positive("tail_tol", tail_tol)?;
    let mut partial = 0.0;
    let mut last = [0.0f64; 3];
    for n in 1..=MAX_SERIES_TERMS {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::Divergent { terms: n });
        }
        partial += t;
        last = [last[1], last[2], t];
        if t.abs() < tail_tol {
            let tail = tail_estimate(n, last);
            return Ok(SeriesSum {
                value: partial + tail,
                n_used: n,
                tail,
            });
        }
    }
    Err(Error::Divergent {
        terms: MAX_SERIES_TERMS,
    })
}

fn tail_estimate(n: usize, [t0, t1, t2]: [f64; 3]) -> f64 {
    if n < 3 || t2 == 0.0 || t0 == 0.0 || t1 == 0.0 {
        return 0.0;
    }
    let (a0, a1, a2) = (t0.abs(), t1.abs(), t2.abs());
    if !(a2 < a1 && a1 < a0) {
        return 0.0;
    }
    let nf = n as f64;
    let p = (a1 / a2).ln() / (nf / (nf - 1.0)).ln();
    let p_prev = (a0 / a1).ln() / ((nf - 1.0) / (nf - 2.0)).ln();
    if p > 1.0 && (p - p_prev).abs() <= 0.05 * p {
        // sum_{m > n} C m^-p ~ int_{n + 1/2}^inf C x^-p dx
        let mid = nf + 0.5;
        t2 * (nf / mid).powf(p) * mid / (p - 1.0)
    } else {
        let r = a2 / a1;
        t2 * r / (1.0 - r)
    }
}
