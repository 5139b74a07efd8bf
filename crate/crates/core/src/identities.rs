//! Fractional Hermite–Hadamard gap and the two integral identities that
//! express it through `f'` and `f''`.
//!
//! With `η = η(b, a)`, the gap is
//!
//! ```text
//! (f(a) + f(a+η)) / 2 - Γ(α+1) / (2 η^α) [J_{a+}^α f(a+η) + J_{(a+η)-}^α f(a)]
//! ```
//!
//! and equals
//!
//! ```text
//! η/2 ∫_0^1 [(1-t)^α - t^α] f'(a + (1-t)η) dt
//! η²/(2(α+1)) ∫_0^1 [1 - (1-t)^(α+1) - t^(α+1)] f''(a + (1-t)η) dt
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fracquad::{self, QuadError, QuadResult, QuadratureConfig, WeightKind};
use crate::preinvex::{Instance, PreinvexError};
use crate::specfun::{self, SpecFunError};

/// Residuals below this are accepted regardless of the quadrature estimate.
pub const RESIDUAL_FLOOR: f64 = 1e-8;
/// Multiple of the combined quadrature error a residual may reach.
pub const RESIDUAL_ERROR_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Capability(#[from] PreinvexError),
}

/// A value with a propagated absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub est_abs_error: f64,
    pub converged: bool,
}

impl From<QuadResult> for Estimate {
    fn from(q: QuadResult) -> Self {
        Self {
            value: q.value,
            est_abs_error: q.est_abs_error,
            converged: q.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `||lhs| - |rhs||`
    pub abs_residual: f64,
    pub combined_quadrature_error: f64,
    pub converged: bool,
    pub passed: bool,
}

impl IdentityResidual {
    fn new(lhs: Estimate, rhs: Estimate) -> Self {
        let residual = (lhs.value - rhs.value).abs();
        let err = lhs.est_abs_error + rhs.est_abs_error;
        let converged = lhs.converged && rhs.converged;
        Self {
            lhs: lhs.value,
            rhs: rhs.value,
            residual,
            abs_residual: (lhs.value.abs() - rhs.value.abs()).abs(),
            combined_quadrature_error: err,
            converged,
            passed: residual <= (RESIDUAL_ERROR_FACTOR * err).max(RESIDUAL_FLOOR),
        }
    }
}

/// The Hermite–Hadamard gap (left-hand side of both identities).
pub fn hh_left_side(inst: &Instance, cfg: &QuadratureConfig) -> Result<Estimate, IdentityError> {
    let f = &inst.func.f;
    let a = inst.a;
    let eta = inst.eta();
    let hi = inst.upper();
    let alpha = inst.alpha;

    let left = fracquad::rl_left(|t| f(t), a, hi, alpha, cfg)?;
    let right = fracquad::rl_right(|t| f(t), a, hi, alpha, cfg)?;
    let scale = specfun::gamma(alpha + 1.0)? / (2.0 * eta.powf(alpha));
    let mean = 0.5 * (f(a) + f(hi));
    Ok(Estimate {
        value: mean - scale * (left.value + right.value),
        est_abs_error: scale * (left.est_abs_error + right.est_abs_error),
        converged: left.converged && right.converged,
    })
}

/// `∫_0^1 kernel(t) g(a + (1-t)η) dt`, split at `t = 1/2`.
fn kernel_integral(
    inst: &Instance,
    order: u8,
    kernel: impl Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, IdentityError> {
    let g = inst.func.derivative(order)?;
    let a = inst.a;
    let eta = inst.eta();
    let q = fracquad::integrate_with_breaks(
        |t| kernel(t) * g(a + (1.0 - t) * eta),
        0.0,
        1.0,
        &[0.5],
        WeightKind::None,
        cfg,
    )?;
    Ok(q.into())
}

/// Gap versus its first-derivative representation.
pub fn lemma1_residual(inst: &Instance, cfg: &QuadratureConfig) -> Result<IdentityResidual, IdentityError> {
    let lhs = hh_left_side(inst, cfg)?;
    let alpha = inst.alpha;
    let integral = kernel_integral(inst, 1, |t| (1.0 - t).powf(alpha) - t.powf(alpha), cfg)?;
    let factor = 0.5 * inst.eta();
    let rhs = Estimate {
        value: factor * integral.value,
        est_abs_error: factor * integral.est_abs_error,
        converged: integral.converged,
    };
    Ok(IdentityResidual::new(lhs, rhs))
}

/// Gap versus its second-derivative representation.
pub fn lemma2_residual(inst: &Instance, cfg: &QuadratureConfig) -> Result<IdentityResidual, IdentityError> {
    let lhs = hh_left_side(inst, cfg)?;
    let alpha = inst.alpha;
    let integral = kernel_integral(inst, 2, |t| second_order_kernel(t, alpha), cfg)?;
    let eta = inst.eta();
    let factor = eta * eta / (2.0 * (alpha + 1.0));
    let rhs = Estimate {
        value: factor * integral.value,
        est_abs_error: factor * integral.est_abs_error,
        converged: integral.converged,
    };
    Ok(IdentityResidual::new(lhs, rhs))
}

/// `1 - (1-t)^(α+1) - t^(α+1)`, nonnegative on `[0, 1]`.
pub fn second_order_kernel(t: f64, alpha: f64) -> f64 {
    let e = alpha + 1.0;
    -(e * (-t).ln_1p()).exp_m1() - t.powf(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preinvex::{library_function, library_map};

    fn inst(f: &str, map: &str, a: f64, b: f64, alpha: f64) -> Instance {
        Instance::new(
            library_function(f).unwrap(),
            library_map(map).unwrap(),
            a,
            b,
            alpha,
            0.5,
            2.0,
        )
        .unwrap()
    }

    #[test]
    fn gap_of_square_is_closed_form() {
        // For f = x² the gap is η² α / ((α+1)(α+2)).
        for alpha in [0.25, 0.5, 1.0, 2.0, 3.0] {
            let i = inst("square", "identity", 0.2, 1.1, alpha);
            let eta: f64 = 0.9;
            let exact = eta * eta * alpha / ((alpha + 1.0) * (alpha + 2.0));
            let got = hh_left_side(&i, &QuadratureConfig::default()).unwrap();
            assert!((got.value - exact).abs() < 1e-12, "{alpha}: {} vs {exact}", got.value);
        }
    }

    #[test]
    fn linear_has_zero_gap() {
        let i = inst("linear", "scaled:0.5", 0.0, 1.0, 0.7);
        let g = hh_left_side(&i, &QuadratureConfig::default()).unwrap();
        assert!(g.value.abs() < 1e-13);
    }

    #[test]
    fn identities_hold_for_exp() {
        let i = inst("exp", "scaled:0.7", -0.5, 1.5, 1.5);
        let cfg = QuadratureConfig::default();
        let r1 = lemma1_residual(&i, &cfg).unwrap();
        let r2 = lemma2_residual(&i, &cfg).unwrap();
        assert!(r1.passed && r2.passed, "{r1:?} {r2:?}");
        assert!(r1.residual < 1e-10 && r2.residual < 1e-10, "{r1:?} {r2:?}");
    }

    #[test]
    fn missing_derivative_is_capability_error() {
        let f = crate::preinvex::FunctionSpec::new("bare", crate::preinvex::Interval::new(0.0, 1.0), |x| x);
        let i = Instance::new(f, crate::preinvex::InvexityMap::identity(), 0.0, 1.0, 1.0, 0.5, 2.0).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(hh_left_side(&i, &cfg).is_ok());
        assert!(matches!(lemma1_residual(&i, &cfg), Err(IdentityError::Capability(_))));
        assert!(matches!(lemma2_residual(&i, &cfg), Err(IdentityError::Capability(_))));
    }

    #[test]
    fn second_order_kernel_shape() {
        assert_eq!(second_order_kernel(0.0, 1.0), 0.0);
        assert!((second_order_kernel(0.5, 1.0) - 0.5).abs() < 1e-15);
        assert!(second_order_kernel(1.0, 2.0).abs() < 1e-15);
    }
}
