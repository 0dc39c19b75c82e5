//! Gamma-type functions: q-Pochhammer products, the elliptic gamma function
//! `Γ_{p,q}`, its modified three-period form `G(u; ω)`, the hyperbolic gamma
//! function, the Thomae–Jackson q-gamma and the Bernoulli polynomials that
//! appear in their modular laws.

mod bernoulli;
mod hyperbolic;
mod modified;

pub use bernoulli::{bernoulli_b22, bernoulli_b33};
pub use hyperbolic::{hyperbolic_gamma_integral, hyperbolic_gamma_product, HyperbolicQuadrature};
pub use modified::{modified_g_b33, modified_g_product};

use serde::Serialize;

use crate::error::{EvalError, Result};
use crate::params::{BasePair, Regime, TruncationPolicy, C64};
use crate::product::{pochhammer_inf, tail_bound, ScaledProduct, ZERO_SNAP};

/// Relative distance to the pole lattice below which `Γ_{p,q}` refuses to
/// evaluate.
pub const POLE_SNAP: f64 = 1e-12;

/// A gamma-type value with its propagated relative truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaValue {
    pub value: C64,
    pub est_error: f64,
}

impl GammaValue {
    fn exact(value: C64) -> Self {
        GammaValue { value, est_error: 0.0 }
    }

    pub fn inv(self) -> Self {
        GammaValue {
            value: self.value.inv(),
            est_error: self.est_error,
        }
    }

    pub fn mul(self, other: GammaValue) -> Self {
        GammaValue {
            value: self.value * other.value,
            est_error: self.est_error + other.est_error,
        }
    }
}

/// `(x; q)_∞`. For `|q| > 1` the analytic continuation
/// `1 / (x q^{-1}; q^{-1})_∞` is returned.
pub fn qpoch_inf(x: C64, q: C64, policy: &TruncationPolicy) -> Result<GammaValue> {
    let qa = q.norm();
    if q == C64::new(0.0, 0.0) {
        return Ok(GammaValue::exact(C64::new(1.0, 0.0) - x));
    }
    if (qa - 1.0).abs() < 1e-14 {
        return Err(EvalError::domain_at(format!("(x; q)_∞ needs |q| ≠ 1, got |q| = {qa}"), q));
    }
    if qa < 1.0 {
        let t = pochhammer_inf(x, q, policy, ZERO_SNAP)?;
        return Ok(GammaValue {
            value: t.value,
            est_error: t.rel_error(),
        });
    }
    let qi = q.inv();
    let t = pochhammer_inf(x * qi, qi, policy, ZERO_SNAP)?;
    if let Some(j) = t.zero_at {
        return Err(EvalError::pole(
            format!("(x; q)_∞ with |q| > 1 has a pole at x = q^{} (x = {x})", j + 1),
            x,
        ));
    }
    Ok(GammaValue {
        value: t.value.inv(),
        est_error: t.rel_error(),
    })
}

/// Double product `∏_{j,k≥0} (1 − (pq/z) p^j q^k) / (1 − z p^j q^k)` for
/// `|p|, |q| < 1`. With `skip_origin` the `(0,0)` denominator factor is left out.
fn elliptic_double_product(z: C64, p: C64, q: C64, policy: &TruncationPolicy, skip_origin: bool) -> Result<GammaValue> {
    let (pa, qa) = (p.norm(), q.norm());
    let w = p * q / z;
    let mut cutoff = policy.tol * (1.0 - pa) * (1.0 - qa) / 16.0;
    for _attempt in 0..4 {
        let c2 = cutoff * cutoff;
        let mut num = ScaledProduct::one();
        let mut den = ScaledProduct::one();
        let mut has_zero = false;
        let mut bound = 0.0;
        let mut row_z = z;
        let mut row_w = w;
        let mut converged = false;
        for j in 0..policy.max_terms {
            let (rz, rw) = (row_z.norm(), row_w.norm());
            if rz < cutoff && rw < cutoff {
                bound += (rz + rw) / ((1.0 - pa) * (1.0 - qa) * (1.0 - cutoff));
                converged = true;
                break;
            }
            let mut fz = row_z;
            let mut fw = row_w;
            let mut row_done = false;
            for k in 0..policy.max_terms {
                let (az2, aw2) = (fz.norm_sqr(), fw.norm_sqr());
                if az2 < c2 && aw2 < c2 {
                    bound += tail_bound(az2.sqrt(), qa) + tail_bound(aw2.sqrt(), qa);
                    row_done = true;
                    break;
                }
                if !(skip_origin && j == 0 && k == 0) {
                    let d = C64::new(1.0 - fz.re, -fz.im);
                    if d.norm_sqr() < POLE_SNAP * POLE_SNAP {
                        return Err(EvalError::pole(
                            format!("Γ_{{p,q}}(z) at z = {z} lies within {POLE_SNAP:e} of the pole p^-{j} q^-{k} (p = {p}, q = {q})"),
                            z,
                        ));
                    }
                    den.mul(d);
                }
                let n = C64::new(1.0 - fw.re, -fw.im);
                if n.norm_sqr() < ZERO_SNAP * ZERO_SNAP {
                    has_zero = true;
                } else {
                    num.mul(n);
                }
                fz *= q;
                fw *= q;
            }
            if !row_done {
                break;
            }
            row_z *= p;
            row_w *= p;
        }
        if !converged {
            return Err(EvalError::nonconvergence(format!(
                "Γ_{{p,q}}({z}) with p = {p}, q = {q} needs more than {} terms per index",
                policy.max_terms
            )));
        }
        if bound <= policy.tol {
            if has_zero {
                return Ok(GammaValue::exact(C64::new(0.0, 0.0)));
            }
            num.combine(&den, true);
            return Ok(GammaValue {
                value: num.value(),
                est_error: bound.exp_m1(),
            });
        }
        cutoff /= 16.0;
    }
    Err(EvalError::nonconvergence(format!(
        "Γ_{{p,q}}({z}) tail bound stayed above tol {:e}",
        policy.tol
    )))
}

/// The elliptic gamma function `Γ_{p,q}(z)`.
///
/// In the `|q| > 1` regime the value is `Γ_{p,q^{-1}}(q^{-1} z)^{-1}`.
pub fn ell_gamma(z: C64, base: &BasePair, policy: &TruncationPolicy) -> Result<GammaValue> {
    if z == C64::new(0.0, 0.0) || !z.is_finite() {
        return Err(EvalError::domain_at("Γ_{p,q} needs a finite nonzero argument", z));
    }
    match base.regime() {
        Regime::Standard => elliptic_double_product(z, base.p(), base.q(), policy, false),
        Regime::InvertedQ => {
            let qi = base.q().inv();
            let g = elliptic_double_product(z * qi, base.p(), qi, policy, false).map_err(|mut e| {
                if e.kind == crate::ErrorKind::PoleProximity {
                    e.detail = format!("Γ_{{p,q^-1}}(z/q) pole (|q| > 1 regime): {}", e.detail);
                }
                e
            })?;
            if g.value == C64::new(0.0, 0.0) {
                return Err(EvalError::pole(
                    format!("Γ_{{p,q}}(z) with |q| > 1 has a pole at z = {z}"),
                    z,
                ));
            }
            Ok(g.inv())
        }
    }
}

/// `1/Γ_{p,q}(z)` evaluated as `Γ_{p,q}(pq/z)`, which is finite (zero) on
/// the pole lattice of `Γ_{p,q}(z)`.
pub fn ell_gamma_recip(z: C64, base: &BasePair, policy: &TruncationPolicy) -> Result<GammaValue> {
    if z == C64::new(0.0, 0.0) || !z.is_finite() {
        return Err(EvalError::domain_at("Γ_{p,q} needs a finite nonzero argument", z));
    }
    if base.p() == C64::new(0.0, 0.0) {
        // Γ_{0,q}(z)^{-1} = (z; q)_∞
        return qpoch_inf(z, base.q(), policy);
    }
    ell_gamma(base.pq() / z, base, policy)
}

/// `lim_{z→1} (1 − z) Γ_{p,q}(z)`, computed by dropping the vanishing
/// denominator factor at `z = 1`.
pub fn ell_gamma_residue_limit(base: &BasePair, policy: &TruncationPolicy) -> Result<GammaValue> {
    base.require_standard()?;
    elliptic_double_product(C64::new(1.0, 0.0), base.p(), base.q(), policy, true)
}

fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

/// Relative residual of the duplication formula
/// `Γ(z²) = Γ(±z, ±q^{1/2} z, ±p^{1/2} z, ±(pq)^{1/2} z)` with principal roots.
pub fn duplication_residual(z: C64, base: &BasePair, policy: &TruncationPolicy) -> Result<f64> {
    base.require_standard()?;
    let lhs = ell_gamma(z * z, base, policy)?.value;
    let roots = [C64::new(1.0, 0.0), base.q().sqrt(), base.p().sqrt(), base.pq().sqrt()];
    let mut rhs = C64::new(1.0, 0.0);
    for r in roots {
        rhs *= ell_gamma(r * z, base, policy)?.value;
        rhs *= ell_gamma(-r * z, base, policy)?.value;
    }
    Ok(rel(lhs, rhs))
}

/// Thomae–Jackson q-gamma `Γ(u; q) = (1−q)^{1−u} (q;q)_∞ / (q^u; q)_∞`,
/// principal branches of `log q` and `log(1−q)`.
pub fn thomae_jackson_gamma(u: C64, q: C64, policy: &TruncationPolicy) -> Result<GammaValue> {
    let qa = q.norm();
    if !(qa > 0.0 && qa < 1.0) {
        return Err(EvalError::domain_at(format!("Thomae–Jackson gamma needs 0 < |q| < 1, got {qa}"), q));
    }
    let qu = (u * q.ln()).exp();
    let den = pochhammer_inf(qu, q, policy, POLE_SNAP)?;
    if let Some(j) = den.zero_at {
        return Err(EvalError::pole(
            format!("Γ(u; q) has a pole: q^(u+{j}) = 1 at u = {u}"),
            u,
        ));
    }
    let qq = pochhammer_inf(q, q, policy, ZERO_SNAP)?;
    let pref = ((1.0 - u) * (1.0 - q).ln()).exp();
    Ok(GammaValue {
        value: pref * qq.value / den.value,
        est_error: (qq.log_tail + den.log_tail).exp_m1(),
    })
}
