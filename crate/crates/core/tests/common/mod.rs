//! Reference computations shared by the integration tests.
//!
//! Everything here is independent of the library's quadrature: integrals
//! use tanh-sinh rules with exact endpoint distances, so algebraic endpoint
//! singularities are integrated without the library's substitutions.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

const STEP: f64 = 1.0 / 128.0;
const REACH: f64 = 6.0;

/// `∫_lo^hi g(x, x - lo, hi - x) dx` on a single tanh-sinh panel.
///
/// `g` receives the distances to both endpoints computed without
/// cancellation, which keeps weights like `(hi - x)^(α-1)` accurate.
pub fn tanh_sinh(g: impl Fn(f64, f64, f64) -> f64, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let n = (REACH / STEP) as i64;
    let mut sum = 0.0;
    for k in -n..=n {
        let s = k as f64 * STEP;
        let u = FRAC_PI_2 * s.sinh();
        let w = FRAC_PI_2 * s.cosh() / (u.cosh() * u.cosh());
        // 1 - tanh|u| without cancellation.
        let e = (-2.0 * u.abs()).exp();
        let near = 2.0 * e / (1.0 + e);
        let far = 2.0 - near;
        let (dlo, dhi) = if u < 0.0 { (half * near, half * far) } else { (half * far, half * near) };
        if dlo == 0.0 || dhi == 0.0 {
            continue;
        }
        let x = if u < 0.0 { lo + dlo } else { hi - dhi };
        let v = g(x, dlo, dhi);
        assert!(v.is_finite(), "oracle integrand not finite at {x}");
        sum += w * v;
    }
    sum * half * STEP
}

/// Sum of tanh-sinh panels over consecutive `points`.
pub fn panels(g: impl Fn(f64, f64, f64) -> f64, points: &[f64]) -> f64 {
    points.windows(2).map(|w| tanh_sinh(&g, w[0], w[1])).sum()
}

/// `∫_0^1 h(t) dt` split at `1/2`, for kernels with a kink there.
pub fn unit_split(h: impl Fn(f64) -> f64) -> f64 {
    panels(|t, _, _| h(t), &[0.0, 0.5, 1.0])
}

/// Unregularized incomplete beta `∫_0^x t^(a-1) (1-t)^(b-1) dt`, in two
/// panels so each carries at most one singular end.
pub fn incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * x;
    let left = tanh_sinh(|t, dlo, _| dlo.powf(a - 1.0) * (1.0 - t).powf(b - 1.0), 0.0, mid);
    // On the right panel `1 - t = (1 - x) + dhi`, exact when x = 1.
    let right = tanh_sinh(|t, _, dhi| t.powf(a - 1.0) * ((1.0 - x) + dhi).powf(b - 1.0), mid, x);
    left + right
}

/// `∫_a^x (x - t)^(α-1) f(t) dt`, the left RL integral without `1/Γ(α)`.
pub fn left_kernel_integral(f: impl Fn(f64) -> f64, a: f64, x: f64, alpha: f64) -> f64 {
    tanh_sinh(|t, _, dhi| dhi.powf(alpha - 1.0) * f(t), a, x)
}

/// `∫_x^b (t - x)^(α-1) f(t) dt`, the right RL integral without `1/Γ(α)`.
pub fn right_kernel_integral(f: impl Fn(f64) -> f64, x: f64, b: f64, alpha: f64) -> f64 {
    tanh_sinh(|t, dlo, _| dlo.powf(alpha - 1.0) * f(t), x, b)
}

/// Left side of the classical fractional trapezoid identity on `[a, b]`,
/// with `Γ(α+1)/Γ(α) = α` cancelled by hand.
pub fn classical_left_side(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, alpha: f64) -> f64 {
    let mean = 0.5 * (f(a) + f(b));
    let sum = left_kernel_integral(f, a, b, alpha) + right_kernel_integral(f, a, b, alpha);
    mean - alpha / (2.0 * (b - a).powf(alpha)) * sum
}

/// `(b-a)/2 ∫_0^1 [(1-t)^α - t^α] f'(ta + (1-t)b) dt`.
pub fn classical_first_order(fp: impl Fn(f64) -> f64, a: f64, b: f64, alpha: f64) -> f64 {
    let i = unit_split(|t| ((1.0 - t).powf(alpha) - t.powf(alpha)) * fp(t * a + (1.0 - t) * b));
    0.5 * (b - a) * i
}

/// `(b-a)²/2 ∫_0^1 [(1 - (1-t)^(α+1) - t^(α+1)) / (α+1)] f''(ta + (1-t)b) dt`.
pub fn classical_second_order(fpp: impl Fn(f64) -> f64, a: f64, b: f64, alpha: f64) -> f64 {
    let e = alpha + 1.0;
    let i = unit_split(|t| (1.0 - (1.0 - t).powf(e) - t.powf(e)) / e * fpp(t * a + (1.0 - t) * b));
    0.5 * (b - a) * (b - a) * i
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// `Γ(α+1)` and `Γ(α+2)` at the RL test orders, 20 significant digits.
pub const GAMMA_SHIFTED: [(f64, f64, f64); 6] = [
    (0.25, 0.906_402_477_055_477_078_0, 1.133_003_096_319_346_347_5),
    (0.5, 0.886_226_925_452_758_013_6, 1.329_340_388_179_137_020_5),
    (1.0, 1.0, 2.0),
    (1.5, 1.329_340_388_179_137_020_5, 3.323_350_970_447_842_551_2),
    (2.0, 2.0, 6.0),
    (3.0, 6.0, 24.0),
];

/// The identity-suite functions with both derivatives.
pub struct Smooth {
    pub id: &'static str,
    pub f: fn(f64) -> f64,
    pub fp: fn(f64) -> f64,
    pub fpp: fn(f64) -> f64,
}

pub const IDENTITY_FUNCTIONS: [Smooth; 3] = [
    Smooth {
        id: "square",
        f: |x| x * x,
        fp: |x| 2.0 * x,
        fpp: |_| 2.0,
    },
    Smooth {
        id: "exp",
        f: f64::exp,
        fp: f64::exp,
        fpp: f64::exp,
    },
    Smooth {
        id: "shifted_square:0.3",
        f: |x| (x - 0.3) * (x - 0.3),
        fp: |x| 2.0 * (x - 0.3),
        fpp: |_| 2.0,
    },
];

pub const IDENTITY_ALPHAS: [f64; 6] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0];

/// Interval endpoints used by the identity grids.
pub const IDENTITY_INTERVALS: [(f64, f64); 2] = [(0.0, 1.0), (0.2, 0.9)];

/// The 20-case incomplete-beta grid `(x, a, b)`.
pub fn incomplete_beta_grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &x in &[0.1, 0.5, 0.9, 1.0] {
        for &(a, b) in &[(0.5, 0.5), (1.75, 0.5), (2.5, 1.5), (0.25, 3.0), (10.0, 10.0)] {
            out.push((x, a, b));
        }
    }
    out
}
