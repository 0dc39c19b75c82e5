//! Modified elliptic gamma function `G(u; ω)` in its two representations.

use super::{bernoulli_b33, ell_gamma, GammaValue};
use crate::error::{EvalError, Result};
use crate::params::{cexp2pi, BasePair, OmegaTriple, TruncationPolicy, C64};

fn require_inside(name: &str, nome: C64) -> Result<()> {
    if nome.norm() < 1.0 {
        Ok(())
    } else {
        Err(EvalError::domain_at(format!("|{name}| = {} violates |{name}| < 1", nome.norm()), nome))
    }
}

/// `Γ_{p,q}(e^{2πiu/ω2}) Γ_{q̃,r}(r e^{−2πiu/ω1})`.
pub fn modified_g_product(u: C64, w: &OmegaTriple, policy: &TruncationPolicy) -> Result<GammaValue> {
    for (name, nome) in [("p", w.p), ("q", w.q), ("q~", w.q_tilde), ("r", w.r)] {
        require_inside(name, nome)?;
    }
    let [w1, w2, _] = w.omega;
    let first = ell_gamma(cexp2pi(u / w2), &BasePair::new(w.p, w.q)?, policy)?;
    let second = ell_gamma(w.r * cexp2pi(-u / w1), &BasePair::new(w.q_tilde, w.r)?, policy)?;
    Ok(first.mul(second))
}

/// `e^{−(πi/3) B_{3,3}(u|ω)} Γ_{r̃,p̃}(e^{−2πiu/ω3})`.
pub fn modified_g_b33(u: C64, w: &OmegaTriple, policy: &TruncationPolicy) -> Result<GammaValue> {
    for (name, nome) in [("p~", w.p_tilde), ("r~", w.r_tilde)] {
        require_inside(name, nome)?;
    }
    let b = bernoulli_b33(u, w.omega)?;
    let pref = (C64::new(0.0, -std::f64::consts::PI / 3.0) * b).exp();
    let g = ell_gamma(cexp2pi(-u / w.omega[2]), &BasePair::new(w.r_tilde, w.p_tilde)?, policy)?;
    Ok(GammaValue {
        value: pref * g.value,
        est_error: g.est_error,
    })
}
