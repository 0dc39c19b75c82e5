use crate::error::{EvalError, Result};
use crate::params::C64;

/// Second multiple Bernoulli polynomial
/// `B_{2,2}(u | μ1, μ2) = (u² − (μ1+μ2)u + (μ1²+μ2²)/6 + μ1μ2/2) / (μ1μ2)`.
pub fn bernoulli_b22(u: C64, m1: C64, m2: C64) -> Result<C64> {
    let prod = m1 * m2;
    if prod == C64::new(0.0, 0.0) {
        return Err(EvalError::domain(format!("B_2,2 needs μ1 μ2 ≠ 0 (μ1 = {m1}, μ2 = {m2})")));
    }
    Ok((u * u - (m1 + m2) * u + (m1 * m1 + m2 * m2) / 6.0 + prod / 2.0) / prod)
}

/// Third multiple Bernoulli polynomial `B_{3,3}(u | μ1, μ2, μ3)`.
pub fn bernoulli_b33(u: C64, m: [C64; 3]) -> Result<C64> {
    let prod = m[0] * m[1] * m[2];
    if prod == C64::new(0.0, 0.0) {
        return Err(EvalError::domain(format!("B_3,3 needs μ1 μ2 μ3 ≠ 0 (μ = {m:?})")));
    }
    let s1 = m[0] + m[1] + m[2];
    let sq = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
    let e2 = m[0] * m[1] + m[0] * m[2] + m[1] * m[2];
    let poly = u * u * u - 1.5 * u * u * s1 + u / 2.0 * (sq + 3.0 * e2) - 0.25 * s1 * e2;
    Ok(poly / prod)
}
