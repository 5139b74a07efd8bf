//! Function and invexity-map models, verification instances, and grid
//! certification of λ-preinvexity.
//!
//! A function `f ≥ 0` is λ-preinvex with respect to `η` when, for all `u, v`
//! and `t ∈ (0, 1)`,
//!
//! ```text
//! f(u + t η(v, u)) <= sqrt(t) / (2 sqrt(1-t)) f(v) + (1-λ) sqrt(1-t) / (2 λ sqrt(t)) f(u)
//! ```
//!
//! Certification samples this on a finite `(u, v, t)` grid. A passing report
//! is a necessary-condition check only: it is "grid-certified", not proven.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Bifunction = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Default certification tolerance: anything above roundoff is a violation.
pub const CERTIFICATION_TOL: f64 = 1e-12;

pub const GRID_QUALIFIER: &str = "grid-certified";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PreinvexError {
    #[error("unknown function id '{0}'")]
    UnknownFunction(String),
    #[error("unknown map id '{0}'")]
    UnknownMap(String),
    #[error("bad parameter in id '{id}': {detail}")]
    BadParameter { id: String, detail: String },
    #[error("function '{0}' is not declared nonnegative")]
    NotNonnegative(String),
    #[error("function '{id}' is negative at x = {x} (value {value})")]
    NegativeValue { id: String, x: f64, value: f64 },
    #[error("point {point} = u + t*eta(v,u) at (u={u}, v={v}, t={t}) lies outside the domain of '{id}'")]
    OutsideDomain {
        id: String,
        u: f64,
        v: f64,
        t: f64,
        point: f64,
    },
    #[error("function '{id}' has no derivative of order {order}")]
    MissingDerivative { id: String, order: u8 },
    #[error("derivative of order {order} of '{id}' disagrees with finite differences at x = {x}: {analytic} vs {numeric}")]
    DerivativeMismatch {
        id: String,
        order: u8,
        x: f64,
        analytic: f64,
        numeric: f64,
    },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Membership with a few ulps of slack at either end.
    pub fn contains(&self, x: f64) -> bool {
        let slack = 4.0 * f64::EPSILON * self.lo.abs().max(self.hi.abs()).max(1.0);
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A scalar function with optional analytic derivatives.
#[derive(Clone)]
pub struct FunctionSpec {
    pub id: String,
    pub f: Evaluator,
    pub f_prime: Option<Evaluator>,
    pub f_second: Option<Evaluator>,
    pub domain: Interval,
    pub nonneg: bool,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("id", &self.id)
            .field("has_prime", &self.f_prime.is_some())
            .field("has_second", &self.f_second.is_some())
            .field("domain", &self.domain)
            .field("nonneg", &self.nonneg)
            .finish()
    }
}

impl FunctionSpec {
    pub fn new(
        id: impl Into<String>,
        domain: Interval,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            f: Arc::new(f),
            f_prime: None,
            f_second: None,
            domain,
            nonneg: false,
        }
    }

    pub fn with_prime(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f_prime = Some(Arc::new(d));
        self
    }

    pub fn with_second(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f_second = Some(Arc::new(d));
        self
    }

    pub fn with_nonneg(mut self, nonneg: bool) -> Self {
        self.nonneg = nonneg;
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Evaluator for `f`, `f'` or `f''`.
    pub fn derivative(&self, order: u8) -> Result<&Evaluator, PreinvexError> {
        let d = match order {
            0 => Some(&self.f),
            1 => self.f_prime.as_ref(),
            2 => self.f_second.as_ref(),
            _ => None,
        };
        d.ok_or_else(|| PreinvexError::MissingDerivative {
            id: self.id.clone(),
            order,
        })
    }

    /// `|f^(order)|^power` as a nonnegative function on the same domain.
    pub fn derivative_power(&self, order: u8, power: f64) -> Result<FunctionSpec, PreinvexError> {
        let d = Arc::clone(self.derivative(order)?);
        let id = match (order, power == 1.0) {
            (0, true) => format!("|{}|", self.id),
            (0, false) => format!("|{}|^{power}", self.id),
            (k, true) => format!("|{}{}|", self.id, "'".repeat(k as usize)),
            (k, false) => format!("|{}{}|^{power}", self.id, "'".repeat(k as usize)),
        };
        let g: Evaluator = if power == 1.0 {
            Arc::new(move |x| d(x).abs())
        } else {
            Arc::new(move |x| d(x).abs().powf(power))
        };
        Ok(FunctionSpec {
            id,
            f: g,
            f_prime: None,
            f_second: None,
            domain: self.domain,
            nonneg: true,
        })
    }

    /// Compares each provided derivative against central differences of the
    /// next-lower one on 101 interior points of the domain.
    pub fn verify_derivatives(&self) -> Result<(), PreinvexError> {
        let Interval { lo, hi } = self.domain;
        let pairs: [(u8, &Evaluator, Option<&Evaluator>); 2] = [
            (1, &self.f, self.f_prime.as_ref()),
            (2, self.f_prime.as_ref().unwrap_or(&self.f), self.f_second.as_ref()),
        ];
        for (order, lower, upper) in pairs {
            let Some(upper) = upper else { continue };
            if order == 2 && self.f_prime.is_none() {
                continue;
            }
            for i in 0..101 {
                let x = lo + (hi - lo) * (i as f64 + 1.0) / 102.0;
                let room = (x - lo).min(hi - x);
                let h = (1e-5 * x.abs().max(1.0)).min(0.5 * room);
                let numeric = (lower(x + h) - lower(x - h)) / (2.0 * h);
                let analytic = upper(x);
                if (numeric - analytic).abs() > 1e-6f64.max(1e-6 * analytic.abs()) {
                    return Err(PreinvexError::DerivativeMismatch {
                        id: self.id.clone(),
                        order,
                        x,
                        analytic,
                        numeric,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The bifunction `η(v, u)` of an invex structure.
#[derive(Clone)]
pub struct InvexityMap {
    pub id: String,
    pub eta: Bifunction,
}

impl fmt::Debug for InvexityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvexityMap").field("id", &self.id).finish()
    }
}

impl InvexityMap {
    pub fn new(id: impl Into<String>, eta: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            id: id.into(),
            eta: Arc::new(eta),
        }
    }

    /// `η(v, u) = v - u`, which turns λ-preinvexity into λ-MT-convexity.
    pub fn identity() -> Self {
        Self::new("identity", |v, u| v - u)
    }

    /// `η(v, u) = k (v - u)` for `k ∈ (0, 1]`.
    pub fn scaled(k: f64) -> Result<Self, PreinvexError> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(PreinvexError::BadParameter {
                id: format!("scaled:{k}"),
                detail: "k must lie in (0, 1]".into(),
            });
        }
        Ok(Self::new(format!("scaled:{k}"), move |v, u| k * (v - u)))
    }

    pub fn eta(&self, v: f64, u: f64) -> f64 {
        (self.eta)(v, u)
    }
}

fn split_id(id: &str) -> (&str, Option<&str>) {
    match id.split_once(':') {
        Some((name, param)) => (name.trim(), Some(param.trim())),
        None => (id.trim(), None),
    }
}

fn parse_param(id: &str, param: Option<&str>, default: f64) -> Result<f64, PreinvexError> {
    match param {
        None => Ok(default),
        Some(p) => p
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| PreinvexError::BadParameter {
                id: id.to_string(),
                detail: format!("'{p}' is not a finite number"),
            }),
    }
}

/// Names accepted by [`library_function`]; `name:param` sets the parameter.
pub const FUNCTION_IDS: &[&str] = &[
    "const[:c]",
    "linear",
    "square",
    "exp[:k]",
    "shifted_square[:c]",
    "pow1_5",
    "abs[:c]",
];

pub const MAP_IDS: &[&str] = &["identity", "scaled:k"];

/// Built-in function library.
pub fn library_function(id: &str) -> Result<FunctionSpec, PreinvexError> {
    let (name, param) = split_id(id);
    let wide = Interval::new(-1.0, 2.0);
    let spec = match name {
        "const" => {
            let c = parse_param(id, param, 1.0)?;
            if c <= 0.0 {
                return Err(PreinvexError::BadParameter {
                    id: id.into(),
                    detail: "constant must be > 0".into(),
                });
            }
            FunctionSpec::new(id, wide, move |_| c)
                .with_prime(|_| 0.0)
                .with_second(|_| 0.0)
                .with_nonneg(true)
        }
        "linear" => FunctionSpec::new(id, wide, |x| x)
            .with_prime(|_| 1.0)
            .with_second(|_| 0.0),
        "square" => FunctionSpec::new(id, wide, |x| x * x)
            .with_prime(|x| 2.0 * x)
            .with_second(|_| 2.0)
            .with_nonneg(true),
        "exp" => {
            let k = parse_param(id, param, 1.0)?;
            FunctionSpec::new(id, wide, move |x| (k * x).exp())
                .with_prime(move |x| k * (k * x).exp())
                .with_second(move |x| k * k * (k * x).exp())
                .with_nonneg(true)
        }
        "shifted_square" => {
            let c = parse_param(id, param, 0.3)?;
            FunctionSpec::new(id, wide, move |x| (x - c) * (x - c))
                .with_prime(move |x| 2.0 * (x - c))
                .with_second(|_| 2.0)
                .with_nonneg(true)
        }
        "pow1_5" => FunctionSpec::new(id, Interval::new(0.0, 2.0), |x| x * x.sqrt())
            .with_prime(|x| 1.5 * x.sqrt())
            .with_second(|x| 0.75 / x.sqrt())
            .with_nonneg(true),
        // No second derivative: exercises the missing-capability path.
        "abs" => {
            let c = parse_param(id, param, 0.5)?;
            FunctionSpec::new(id, wide, move |x| (x - c).abs())
                .with_prime(move |x| if x == c { 0.0 } else { (x - c).signum() })
                .with_nonneg(true)
        }
        _ => return Err(PreinvexError::UnknownFunction(id.to_string())),
    };
    Ok(spec)
}

/// Built-in invexity maps: `identity` and `scaled:k`.
pub fn library_map(id: &str) -> Result<InvexityMap, PreinvexError> {
    let (name, param) = split_id(id);
    match (name, param) {
        ("identity", None) => Ok(InvexityMap::identity()),
        ("scaled", Some(_)) => {
            let k = parse_param(id, param, 1.0)?;
            let mut m = InvexityMap::scaled(k).map_err(|e| match e {
                PreinvexError::BadParameter { detail, .. } => PreinvexError::BadParameter {
                    id: id.to_string(),
                    detail,
                },
                other => other,
            })?;
            m.id = id.to_string();
            Ok(m)
        }
        _ => Err(PreinvexError::UnknownMap(id.to_string())),
    }
}

/// One verification configuration.
#[derive(Debug, Clone)]
pub struct Instance {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub q: f64,
    pub map: InvexityMap,
    pub func: FunctionSpec,
}

impl Instance {
    pub fn new(
        func: FunctionSpec,
        map: InvexityMap,
        a: f64,
        b: f64,
        alpha: f64,
        lambda: f64,
        q: f64,
    ) -> Result<Self, PreinvexError> {
        let bad = |msg: String| Err(PreinvexError::InvalidInstance(msg));
        if !(a.is_finite() && b.is_finite()) {
            return bad(format!("a = {a}, b = {b} must be finite"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return bad(format!("alpha must be > 0 (got {alpha})"));
        }
        if !(lambda > 0.0 && lambda <= 0.5) {
            return bad(format!("lambda must lie in (0, 1/2] (got {lambda})"));
        }
        if !(q >= 1.0 && q.is_finite()) {
            return bad(format!("q must be >= 1 (got {q})"));
        }
        let eta = map.eta(b, a);
        if !(eta > 0.0 && eta.is_finite()) {
            return bad(format!(
                "need a < a + eta(b, a); eta({b}, {a}) = {eta} under map '{}'",
                map.id
            ));
        }
        let inst = Self {
            a,
            b,
            alpha,
            lambda,
            q,
            map,
            func,
        };
        let working = Interval::new(a, a + eta);
        if !inst.func.domain.contains_interval(&working) || !inst.func.domain.contains(b) {
            return bad(format!(
                "[a, a + eta] = [{}, {}] and b = {b} must lie in the domain [{}, {}] of '{}'",
                working.lo, working.hi, inst.func.domain.lo, inst.func.domain.hi, inst.func.id
            ));
        }
        Ok(inst)
    }

    pub fn eta(&self) -> f64 {
        self.map.eta(self.b, self.a)
    }

    /// Right end `a + η(b, a)` of the working interval.
    pub fn upper(&self) -> f64 {
        self.a + self.eta()
    }

    /// `(1 - λ) / λ`
    pub fn lambda_ratio(&self) -> f64 {
        (1.0 - self.lambda) / self.lambda
    }

    /// Hölder conjugate `p = q / (q - 1)`, `None` for `q = 1`.
    pub fn p(&self) -> Option<f64> {
        (self.q > 1.0).then(|| self.q / (self.q - 1.0))
    }

    /// Interval over which derivative magnitudes are certified: covers the
    /// working interval and the point `b` where the bounds sample `f^(k)`.
    pub fn certification_domain(&self) -> Interval {
        let hi = self.upper().max(self.b);
        Interval::new(self.a, hi)
    }

    pub fn key(&self) -> InstanceKey {
        InstanceKey {
            function: self.func.id.clone(),
            map: self.map.id.clone(),
            a: self.a,
            b: self.b,
            alpha: self.alpha,
            lambda: self.lambda,
            q: self.q,
        }
    }
}

/// Serializable identity of an [`Instance`]; orders lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceKey {
    pub function: String,
    pub map: String,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub q: f64,
}

impl InstanceKey {
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.function
            .cmp(&other.function)
            .then_with(|| self.map.cmp(&other.map))
            .then_with(|| self.a.total_cmp(&other.a))
            .then_with(|| self.b.total_cmp(&other.b))
            .then_with(|| self.alpha.total_cmp(&other.alpha))
            .then_with(|| self.lambda.total_cmp(&other.lambda))
            .then_with(|| self.q.total_cmp(&other.q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSize {
    pub n_u: usize,
    pub n_v: usize,
    pub n_t: usize,
}

impl GridSize {
    pub const fn new(n_u: usize, n_v: usize, n_t: usize) -> Self {
        Self { n_u, n_v, n_t }
    }

    /// Nested refinement: every node of `self` is a node of the result.
    pub fn refine(&self) -> Self {
        Self {
            n_u: 2 * self.n_u - 1,
            n_v: 2 * self.n_v - 1,
            n_t: 2 * self.n_t + 1,
        }
    }

    fn validate(&self) -> Result<(), PreinvexError> {
        if self.n_u < 2 || self.n_v < 2 || self.n_t < 1 {
            return Err(PreinvexError::InvalidArgument(format!(
                "grid needs n_u, n_v >= 2 and n_t >= 1 (got {}x{}x{})",
                self.n_u, self.n_v, self.n_t
            )));
        }
        Ok(())
    }
}

impl Default for GridSize {
    fn default() -> Self {
        Self::new(21, 21, 99)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub u: f64,
    pub v: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub passed: bool,
    pub max_violation: f64,
    pub argmax: GridPoint,
    pub grid_sizes: GridSize,
    pub tolerance: f64,
    /// Always [`GRID_QUALIFIER`]: a sampled check, never a proof.
    pub qualifier: String,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
            }
        })
        .collect()
}

/// Interior `t` nodes `1/(n+1), ..., n/(n+1)`.
fn t_nodes(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
}

/// `√t / (2√(1-t))` and `(1-λ)√(1-t) / (2λ√t)`.
#[inline]
pub fn preinvex_coefficients(t: f64, lambda: f64) -> (f64, f64) {
    let st = t.sqrt();
    let s1t = (1.0 - t).sqrt();
    (st / (2.0 * s1t), (1.0 - lambda) * s1t / (2.0 * lambda * st))
}

/// Grid check of λ-preinvexity of `func` under `map` on `domain`, with the
/// default tolerance [`CERTIFICATION_TOL`].
pub fn certify_lambda_preinvex(
    func: &FunctionSpec,
    map: &InvexityMap,
    lambda: f64,
    domain: Interval,
    grid: GridSize,
) -> Result<CertificationReport, PreinvexError> {
    certify_with_tolerance(func, map, lambda, domain, grid, CERTIFICATION_TOL)
}

pub fn certify_with_tolerance(
    func: &FunctionSpec,
    map: &InvexityMap,
    lambda: f64,
    domain: Interval,
    grid: GridSize,
    tolerance: f64,
) -> Result<CertificationReport, PreinvexError> {
    if !func.nonneg {
        return Err(PreinvexError::NotNonnegative(func.id.clone()));
    }
    if !(lambda > 0.0 && lambda <= 0.5) {
        return Err(PreinvexError::InvalidArgument(format!(
            "lambda must lie in (0, 1/2] (got {lambda})"
        )));
    }
    if !(domain.lo.is_finite() && domain.hi.is_finite() && domain.lo <= domain.hi) {
        return Err(PreinvexError::InvalidArgument(format!(
            "bad certification domain [{}, {}]",
            domain.lo, domain.hi
        )));
    }
    grid.validate()?;

    let us = linspace(domain.lo, domain.hi, grid.n_u);
    let vs = linspace(domain.lo, domain.hi, grid.n_v);
    let ts = t_nodes(grid.n_t);
    let coeffs: Vec<(f64, f64)> = ts.iter().map(|&t| preinvex_coefficients(t, lambda)).collect();

    let fv: Vec<f64> = vs.iter().map(|&v| func.eval(v)).collect();
    for (&v, &val) in vs.iter().zip(&fv) {
        if val < 0.0 {
            return Err(PreinvexError::NegativeValue {
                id: func.id.clone(),
                x: v,
                value: val,
            });
        }
    }

    // Per-u rows are independent; reduce in u order so the argmax tie-break
    // (lexicographically smallest (u, v, t)) does not depend on scheduling.
    let rows: Vec<Result<(f64, GridPoint), PreinvexError>> = us
        .par_iter()
        .map(|&u| {
            let fu = func.eval(u);
            if fu < 0.0 {
                return Err(PreinvexError::NegativeValue {
                    id: func.id.clone(),
                    x: u,
                    value: fu,
                });
            }
            let mut best = f64::NEG_INFINITY;
            let mut at = GridPoint { u, v: vs[0], t: ts[0] };
            for (&v, &f_v) in vs.iter().zip(&fv) {
                let eta = map.eta(v, u);
                for (&t, &(cv, cu)) in ts.iter().zip(&coeffs) {
                    let point = u + t * eta;
                    if !func.domain.contains(point) {
                        return Err(PreinvexError::OutsideDomain {
                            id: func.id.clone(),
                            u,
                            v,
                            t,
                            point,
                        });
                    }
                    let lhs = func.eval(point);
                    let rhs = cv * f_v + cu * fu;
                    let mut viol = lhs - rhs;
                    if viol.is_nan() {
                        viol = f64::INFINITY;
                    }
                    if viol > best {
                        best = viol;
                        at = GridPoint { u, v, t };
                    }
                }
            }
            Ok((best, at))
        })
        .collect();

    let mut best = f64::NEG_INFINITY;
    let mut at = GridPoint {
        u: us[0],
        v: vs[0],
        t: ts[0],
    };
    for row in rows {
        let (val, pt) = row?;
        if val > best {
            best = val;
            at = pt;
        }
    }
    Ok(CertificationReport {
        passed: best <= tolerance,
        max_violation: best,
        argmax: at,
        grid_sizes: grid,
        tolerance,
        qualifier: GRID_QUALIFIER.to_string(),
    })
}

/// MT-class check: λ = 1/2 and `η(v, u) = v - u`.
pub fn certify_mt(
    func: &FunctionSpec,
    domain: Interval,
    grid: GridSize,
) -> Result<CertificationReport, PreinvexError> {
    certify_lambda_preinvex(func, &InvexityMap::identity(), 0.5, domain, grid)
}

// Comparisons below allow a few ulps: both sides are rounded powers.
const ULP_SLACK: f64 = 8.0 * f64::EPSILON;

/// `(A1 - A2)^p <= A1^p - A2^p` for `A1 > A2 >= 0`, `p >= 1`.
pub fn check_power_difference(a1: f64, a2: f64, p: f64) -> Result<bool, PreinvexError> {
    if !(a1.is_finite() && a2.is_finite() && p.is_finite()) || !(a1 > a2 && a2 >= 0.0) || p < 1.0 {
        return Err(PreinvexError::InvalidArgument(format!(
            "need A1 > A2 >= 0 and p >= 1 (got A1 = {a1}, A2 = {a2}, p = {p})"
        )));
    }
    let lhs = (a1 - a2).powf(p);
    let rhs = a1.powf(p) - a2.powf(p);
    Ok(lhs <= rhs + ULP_SLACK * a1.powf(p))
}

/// `(1-t)^m <= 2^(1-m) - t^m` for `m ∈ [0, 1]`, reversed for `m >= 1`.
pub fn check_one_minus_t_bound(t: f64, m: f64) -> Result<bool, PreinvexError> {
    if !(0.0..=1.0).contains(&t) || !(m >= 0.0 && m.is_finite()) {
        return Err(PreinvexError::InvalidArgument(format!(
            "need t in [0, 1] and m >= 0 (got t = {t}, m = {m})"
        )));
    }
    let lhs = (1.0 - t).powf(m);
    let rhs = (1.0 - m).exp2() - t.powf(m);
    let slack = ULP_SLACK * (1.0 - m).exp2().max(1.0);
    let le = lhs <= rhs + slack;
    let ge = lhs + slack >= rhs;
    Ok((m > 1.0 || le) && (m < 1.0 || ge))
}
