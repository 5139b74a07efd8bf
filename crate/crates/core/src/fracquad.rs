//! Quadrature with endpoint-singularity handling, and the Riemann–Liouville
//! fractional integrals built on it.
//!
//! The engine is a globally adaptive Gauss–Legendre panel scheme. Each panel
//! carries the difference between its one-panel value and the sum over its
//! two halves as its error estimate; the worst panel is bisected until the
//! total estimate meets `max(abs_tol, rel_tol * |value|)` or the panel budget
//! runs out.
//!
//! Weights with an integrable endpoint singularity are removed by a change of
//! variables before the panel scheme sees the integrand:
//!
//! * `(hi - t)^(α-1)` and `(t - lo)^(α-1)`: `t = hi - L u^m` (resp.
//!   `lo + L u^m`), with `m = 1/α` for `α < 1` so the kernel cancels exactly.
//! * `sqrt(t / (1 - t))` and `sqrt((1 - t) / t)`: `t = sin^2 θ`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{self, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid interval [{lo}, {hi}]: need finite lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("integrand is not finite at t = {at} (value {value})")]
    NonFinite { at: f64, value: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SingularityPolicy {
    /// Change of variables that removes the endpoint singularity.
    #[default]
    Substitution,
    /// Integrate the raw weighted integrand and rely on bisection alone.
    /// Slow for `α < 1`; meant for smoke tests.
    PanelRefinement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub nodes_per_panel: usize,
    pub singularity_policy: SingularityPolicy,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_panels: 4096,
            nodes_per_panel: 15,
            singularity_policy: SingularityPolicy::Substitution,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadError::InvalidConfig(format!(
                "rel_tol must be > 0 (got {})",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadError::InvalidConfig(format!(
                "abs_tol must be > 0 (got {})",
                self.abs_tol
            )));
        }
        if self.max_panels < 1 {
            return Err(QuadError::InvalidConfig("max_panels must be >= 1".into()));
        }
        if self.nodes_per_panel < 2 {
            return Err(QuadError::InvalidConfig(
                "nodes_per_panel must be >= 2".into(),
            ));
        }
        Ok(())
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Weight multiplying the integrand on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "alpha")]
pub enum WeightKind {
    None,
    /// `(hi - t)^(α-1)`: kernel of the left-sided RL integral evaluated at `hi`.
    LeftPower(f64),
    /// `(t - lo)^(α-1)`: kernel of the right-sided RL integral evaluated at `lo`.
    RightPower(f64),
    /// `sqrt(t) / sqrt(1 - t)`, requires `[lo, hi] ⊆ [0, 1]`.
    SqrtLeft,
    /// `sqrt(1 - t) / sqrt(t)`, requires `[lo, hi] ⊆ [0, 1]`.
    SqrtRight,
}

impl WeightKind {
    fn validate(&self, lo: f64, hi: f64) -> Result<(), QuadError> {
        match *self {
            WeightKind::LeftPower(alpha) | WeightKind::RightPower(alpha) => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(QuadError::InvalidWeight(format!(
                        "power weight needs alpha > 0 (got {alpha})"
                    )));
                }
            }
            WeightKind::SqrtLeft | WeightKind::SqrtRight => {
                if lo < 0.0 || hi > 1.0 {
                    return Err(QuadError::InvalidWeight(format!(
                        "square-root weights live on [0, 1], got [{lo}, {hi}]"
                    )));
                }
            }
            WeightKind::None => {}
        }
        Ok(())
    }

    /// Raw weight value, used by the panel-refinement policy.
    fn eval(&self, lo: f64, hi: f64, t: f64) -> f64 {
        match *self {
            WeightKind::None => 1.0,
            WeightKind::LeftPower(alpha) => (hi - t).powf(alpha - 1.0),
            WeightKind::RightPower(alpha) => (t - lo).powf(alpha - 1.0),
            WeightKind::SqrtLeft => (t / (1.0 - t)).sqrt(),
            WeightKind::SqrtRight => ((1.0 - t) / t).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            est_abs_error: self.est_abs_error * factor.abs(),
            ..self
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Change of variables `s -> (t(s), dt/ds * w(t(s)))`.
#[derive(Debug, Clone, Copy)]
enum Mapping {
    Identity,
    /// weight ≡ 1 after the map is folded into the Jacobian
    Plain { lo: f64, hi: f64, weight: WeightKind },
    /// `t = hi - len * u^m`, Jacobian·weight = `len^α m u^(mα-1)`
    LeftPower { hi: f64, len: f64, alpha: f64, m: f64 },
    /// `t = lo + len * u^m`
    RightPower { lo: f64, len: f64, alpha: f64, m: f64 },
    /// `t = sin^2 θ`
    SinSquared { left: bool },
}

impl Mapping {
    #[inline]
    fn apply(&self, s: f64) -> (f64, f64) {
        match *self {
            Mapping::Identity => (s, 1.0),
            Mapping::Plain { lo, hi, weight } => (s, weight.eval(lo, hi, s)),
            Mapping::LeftPower { hi, len, alpha, m } => {
                let um = s.powf(m);
                (hi - len * um, len.powf(alpha) * m * s.powf(m * alpha - 1.0))
            }
            Mapping::RightPower { lo, len, alpha, m } => {
                let um = s.powf(m);
                (lo + len * um, len.powf(alpha) * m * s.powf(m * alpha - 1.0))
            }
            Mapping::SinSquared { left } => {
                let (sn, cs) = s.sin_cos();
                let t = sn * sn;
                let jac = if left { 2.0 * sn * sn } else { 2.0 * cs * cs };
                (t, jac)
            }
        }
    }
}

fn power_exponent(alpha: f64) -> f64 {
    if alpha < 1.0 {
        1.0 / alpha
    } else if alpha == 1.0 {
        1.0
    } else {
        2.0
    }
}

/// Mapping plus the interval in the new variable; `breaks` are given in `t`.
fn build_mapping(
    lo: f64,
    hi: f64,
    breaks: &[f64],
    weight: WeightKind,
    policy: SingularityPolicy,
) -> (Mapping, Vec<f64>) {
    let mut edges_t: Vec<f64> = std::iter::once(lo)
        .chain(breaks.iter().copied().filter(|&c| c > lo && c < hi))
        .chain(std::iter::once(hi))
        .collect();
    edges_t.dedup();

    if matches!(weight, WeightKind::None) {
        return (Mapping::Identity, edges_t);
    }
    if policy == SingularityPolicy::PanelRefinement {
        return (Mapping::Plain { lo, hi, weight }, edges_t);
    }
    let len = hi - lo;
    match weight {
        WeightKind::None => unreachable!(),
        WeightKind::LeftPower(alpha) => {
            let m = power_exponent(alpha);
            // u = ((hi - t) / len)^(1/m), decreasing in t
            let mut edges: Vec<f64> = edges_t
                .iter()
                .map(|&t| ((hi - t) / len).max(0.0).powf(1.0 / m))
                .collect();
            edges.reverse();
            (Mapping::LeftPower { hi, len, alpha, m }, edges)
        }
        WeightKind::RightPower(alpha) => {
            let m = power_exponent(alpha);
            let edges = edges_t
                .iter()
                .map(|&t| ((t - lo) / len).max(0.0).powf(1.0 / m))
                .collect();
            (Mapping::RightPower { lo, len, alpha, m }, edges)
        }
        WeightKind::SqrtLeft | WeightKind::SqrtRight => {
            let left = matches!(weight, WeightKind::SqrtLeft);
            let edges = edges_t
                .iter()
                .map(|&t| {
                    if t >= 1.0 {
                        FRAC_PI_2
                    } else {
                        t.max(0.0).sqrt().asin()
                    }
                })
                .collect();
            (Mapping::SinSquared { left }, edges)
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    halves: [f64; 2],
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Engine<'a, F> {
    f: &'a F,
    map: Mapping,
    rule: GaussLegendre,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Engine<'_, F> {
    fn rule_on(&mut self, a: f64, b: f64) -> Result<f64, QuadError> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let s = mid + half * x;
            let (t, jw) = self.map.apply(s);
            let fv = (self.f)(t);
            let v = fv * jw;
            if !v.is_finite() {
                return Err(QuadError::NonFinite { at: t, value: fv });
            }
            acc += w * v;
        }
        self.evaluations += self.rule.len();
        Ok(acc * half)
    }

    fn panel(&mut self, a: f64, b: f64, whole: f64) -> Result<Panel, QuadError> {
        let m = 0.5 * (a + b);
        let left = self.rule_on(a, m)?;
        let right = self.rule_on(m, b)?;
        let value = left + right;
        Ok(Panel {
            a,
            b,
            value,
            err: (value - whole).abs(),
            halves: [left, right],
        })
    }
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    map: Mapping,
    edges: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    let mut engine = Engine {
        f,
        map,
        rule: GaussLegendre::new(cfg.nodes_per_panel),
        evaluations: 0,
    };
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let whole = engine.rule_on(a, b)?;
        heap.push(engine.panel(a, b, whole)?);
    }
    let mut leaves = heap.len().max(1);

    loop {
        let total: f64 = heap.iter().chain(&frozen).map(|p| p.value).sum();
        let err: f64 = heap.iter().chain(&frozen).map(|p| p.err).sum();
        if err <= cfg.tolerance_for(total) || leaves >= cfg.max_panels || heap.is_empty() {
            break;
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= 8.0 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let left = engine.panel(worst.a, mid, worst.halves[0])?;
        let right = engine.panel(mid, worst.b, worst.halves[1])?;
        heap.push(left);
        heap.push(right);
        leaves += 1;
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let err: f64 = panels.iter().map(|p| p.err).sum();
    Ok(QuadResult {
        value,
        est_abs_error: err,
        evaluations: engine.evaluations,
        converged: err <= cfg.tolerance_for(value) && value.is_finite(),
    })
}

/// `∫_lo^hi w(t) f(t) dt`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    weight: WeightKind,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    integrate_with_breaks(f, lo, hi, &[], weight, cfg)
}

/// Like [`integrate`], with the panel grid forced to contain `breaks`
/// (interior points where the integrand has a kink).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    weight: WeightKind,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }
    weight.validate(lo, hi)?;
    let (map, edges) = build_mapping(lo, hi, breaks, weight, cfg.singularity_policy);
    adaptive(&f, map, &edges, cfg)
}

/// Left-sided Riemann–Liouville integral
/// `J_{a+}^α f(x) = 1/Γ(α) ∫_a^x (x - t)^(α-1) f(t) dt`.
pub fn rl_left<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    x: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    if !(a.is_finite() && x.is_finite() && a < x) {
        return Err(QuadError::InvalidInterval { lo: a, hi: x });
    }
    let g = specfun::gamma(alpha)?;
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol * g,
        ..*cfg
    };
    Ok(integrate(f, a, x, WeightKind::LeftPower(alpha), &inner)?.scaled(1.0 / g))
}

/// Right-sided Riemann–Liouville integral
/// `J_{b-}^α f(x) = 1/Γ(α) ∫_x^b (t - x)^(α-1) f(t) dt`.
pub fn rl_right<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    b: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    if !(x.is_finite() && b.is_finite() && x < b) {
        return Err(QuadError::InvalidInterval { lo: x, hi: b });
    }
    let g = specfun::gamma(alpha)?;
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol * g,
        ..*cfg
    };
    Ok(integrate(f, x, b, WeightKind::RightPower(alpha), &inner)?.scaled(1.0 / g))
}
