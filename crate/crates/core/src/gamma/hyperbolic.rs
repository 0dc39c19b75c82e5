//! Hyperbolic gamma function `γ(u; ω1, ω2)`.
//!
//! Two independent routes: the ratio of q-Pochhammer products (valid when
//! `ω1/ω2` is not real) and the exponentiated contour integral along the
//! real axis indented above the origin (valid in the strip
//! `0 < Re u < Re(ω1 + ω2)`).

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use super::{qpoch_inf, GammaValue};
use crate::error::{EvalError, Result};
use crate::params::{cexp2pi, TruncationPolicy, C64, TWO_PI};

/// `(e^{2πiu/ω1} q̃; q̃)_∞ / (e^{2πiu/ω2}; q)_∞` with `q = e^{2πiω1/ω2}` and
/// `q̃ = e^{−2πiω2/ω1}`. When `Im(ω1/ω2) < 0` both nomes lie outside the
/// unit disc and the continued products `(x;q)_∞ = 1/(x/q; 1/q)_∞` are used,
/// which keeps the value symmetric in `ω1, ω2`.
pub fn hyperbolic_gamma_product(u: C64, w1: C64, w2: C64, policy: &TruncationPolicy) -> Result<GammaValue> {
    if w1 == C64::new(0.0, 0.0) || w2 == C64::new(0.0, 0.0) {
        return Err(EvalError::domain("hyperbolic gamma needs nonzero periods"));
    }
    let tau = w1 / w2;
    if tau.im.abs() < 1e-12 * tau.norm() {
        return Err(EvalError::domain_at(
            format!("product form needs Im(ω1/ω2) ≠ 0, got ω1/ω2 = {tau}"),
            tau,
        ));
    }
    let q = cexp2pi(tau);
    let qt = cexp2pi(-tau.inv());
    let num = qpoch_inf(cexp2pi(u / w1) * qt, qt, policy)?;
    let x2 = cexp2pi(u / w2);
    let den = qpoch_inf(x2, q, policy)?;
    if den.value == C64::new(0.0, 0.0) {
        return Err(EvalError::pole(
            format!("γ(u; ω1, ω2) has a pole at u = {u}: (e^(2πiu/ω2); q)_∞ vanishes"),
            u,
        ));
    }
    Ok(num.mul(den.inv()))
}

/// Quadrature controls for the contour-integral route.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicQuadrature {
    /// Target absolute accuracy of the exponent (≈ relative accuracy of γ).
    pub tol: f64,
    /// Radius of the semicircle that passes over the origin.
    pub radius: f64,
    /// Number of panel doublings allowed on each piece.
    pub max_refinements: u32,
}

impl Default for HyperbolicQuadrature {
    fn default() -> Self {
        HyperbolicQuadrature {
            tol: 1e-12,
            radius: 1.0,
            max_refinements: 10,
        }
    }
}

const PANEL_NODES: usize = 64;

fn integrand(x: C64, u: C64, w1: C64, w2: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    if x.re >= 0.0 {
        ((u - w1 - w2) * x).exp() / (((-w1 * x).exp() - one) * ((-w2 * x).exp() - one)) / x
    } else {
        (u * x).exp() / ((one - (w1 * x).exp()) * (one - (w2 * x).exp())) / x
    }
}

fn panels<F: Fn(f64) -> C64>(rule: &GaussLegendre, a: f64, b: f64, count: usize, f: &F) -> C64 {
    let h = (b - a) / count as f64;
    let mut total = C64::new(0.0, 0.0);
    for k in 0..count {
        let lo = a + h * k as f64;
        let (mid, half) = (lo + h / 2.0, h / 2.0);
        let mut s = C64::new(0.0, 0.0);
        for (x, w) in rule.iter() {
            s += f(mid + half * x) * *w;
        }
        total += s * half;
    }
    total
}

fn refine<F: Fn(usize) -> C64>(start: usize, tol: f64, max_ref: u32, what: &str, f: F) -> Result<(C64, f64)> {
    let mut count = start;
    let mut prev = f(count);
    for _ in 0..max_ref {
        count *= 2;
        let next = f(count);
        let err = (next - prev).norm();
        if err < tol {
            return Ok((next, err));
        }
        prev = next;
    }
    Err(EvalError::nonconvergence(format!(
        "hyperbolic gamma {what} quadrature not stable to {tol:e} after {max_ref} doublings"
    )))
}

/// `exp(−∫_{R+i0} e^{ux} / ((1 − e^{ω1 x})(1 − e^{ω2 x})) dx/x)`.
///
/// The contour is `(−L₋, −r] ∪ {r e^{iθ}: θ from π to 0} ∪ [r, L₊)` with
/// the cut-offs `L±` chosen from the exponential decay rates `Re u` and
/// `Re(ω1 + ω2 − u)`.
pub fn hyperbolic_gamma_integral(u: C64, w1: C64, w2: C64, opts: &HyperbolicQuadrature) -> Result<GammaValue> {
    if !(w1.re > 0.0 && w2.re > 0.0) {
        return Err(EvalError::domain(format!(
            "contour integral needs Re ω1, Re ω2 > 0 (ω1 = {w1}, ω2 = {w2})"
        )));
    }
    let upper = (w1 + w2).re;
    if !(u.re > 0.0 && u.re < upper) {
        return Err(EvalError::domain_at(
            format!("contour integral converges only for 0 < Re u < {upper}, got Re u = {}", u.re),
            u,
        ));
    }
    let r = opts.radius;
    for w in [w1, w2] {
        // nearest nonzero integrand poles at ±2πi/ω
        if TWO_PI / w.norm() <= r * 1.05 {
            return Err(EvalError::domain(format!(
                "pole 2πi/ω at distance {} is inside the indentation radius {r}",
                TWO_PI / w.norm()
            )));
        }
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_NODES).expect("nonzero"));
    let tol = opts.tol;
    let cutoff = |rate: f64| -> f64 {
        let mut l = 10.0f64.max(2.0 * r);
        for _ in 0..4 {
            l = ((8.0 / (tol * rate * l)).ln() / rate).max(2.0 * r);
        }
        l
    };
    let l_minus = cutoff(u.re);
    let l_plus = cutoff(upper - u.re);
    let f = |x: C64| integrand(x, u, w1, w2);

    let start_panels = |len: f64| ((len / 4.0).ceil() as usize).max(1);
    let (right, e1) = refine(start_panels(l_plus - r), tol / 4.0, opts.max_refinements, "right half-line", |n| {
        panels(&rule, r, l_plus, n, &|t| f(C64::new(t, 0.0)))
    })?;
    let (left, e2) = refine(start_panels(l_minus - r), tol / 4.0, opts.max_refinements, "left half-line", |n| {
        panels(&rule, -l_minus, -r, n, &|t| f(C64::new(t, 0.0)))
    })?;
    // ∫ over θ from π down to 0 of f(r e^{iθ}) i r e^{iθ} dθ
    let (arc, e3) = refine(1, tol / 4.0, opts.max_refinements, "semicircle", |n| {
        -panels(&rule, 0.0, std::f64::consts::PI, n, &|th| {
            let x = C64::from_polar(r, th);
            f(x) * C64::new(0.0, 1.0) * x
        })
    })?;
    let exponent = right + left + arc;
    let value = (-exponent).exp();
    Ok(GammaValue {
        value,
        est_error: e1 + e2 + e3,
    })
}
