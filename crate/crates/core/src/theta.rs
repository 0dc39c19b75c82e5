//! The theta function `θ_p(x) = (x; p)_∞ (p/x; p)_∞`, elliptic shifted
//! factorials `θ_p(x; q)_n`, and residual checks for their identities.

use crate::error::{EvalError, Result};
use crate::params::{TruncationPolicy, C64};
use crate::product::{pochhammer_inf, ZERO_SNAP};

fn check_theta_args(x: C64, p: C64) -> Result<()> {
    if x == C64::new(0.0, 0.0) || !x.is_finite() {
        return Err(EvalError::domain_at("theta argument must be a finite nonzero complex number", x));
    }
    if p.norm() >= 1.0 {
        return Err(EvalError::domain_at(format!("theta nome |p| = {} violates |p| < 1", p.norm()), p));
    }
    Ok(())
}

/// `θ_p(x)` with its relative truncation bound. Lattice zeros `x = p^k`
/// come back as an exact zero.
pub fn theta_with_error(x: C64, p: C64, policy: &TruncationPolicy) -> Result<(C64, f64)> {
    check_theta_args(x, p)?;
    if p == C64::new(0.0, 0.0) {
        let v = C64::new(1.0, 0.0) - x;
        return Ok((if v.norm() < ZERO_SNAP { C64::new(0.0, 0.0) } else { v }, 0.0));
    }
    let a = pochhammer_inf(x, p, policy, ZERO_SNAP)?;
    let b = pochhammer_inf(p / x, p, policy, ZERO_SNAP)?;
    if a.zero_at.is_some() || b.zero_at.is_some() {
        return Ok((C64::new(0.0, 0.0), 0.0));
    }
    Ok((a.value * b.value, (a.log_tail + b.log_tail).exp_m1()))
}

pub fn theta(x: C64, p: C64, policy: &TruncationPolicy) -> Result<C64> {
    theta_with_error(x, p, policy).map(|(v, _)| v)
}

/// `θ_p(x_1) ⋯ θ_p(x_k)`.
pub fn theta_prod(args: &[C64], p: C64, policy: &TruncationPolicy) -> Result<C64> {
    args.iter().try_fold(C64::new(1.0, 0.0), |acc, &x| Ok(acc * theta(x, p, policy)?))
}

/// `θ_p(x; q)_n`: `∏_{j<n} θ_p(x q^j)` for `n > 0`,
/// `∏_{j=1}^{−n} θ_p(x q^{−j})^{−1}` for `n < 0`, and 1 for `n = 0`.
pub fn theta_pochhammer(x: C64, q: C64, p: C64, n: i64, policy: &TruncationPolicy) -> Result<C64> {
    check_theta_args(x, p)?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if n > 0 {
        let mut acc = C64::new(1.0, 0.0);
        let mut arg = x;
        for _ in 0..n {
            acc *= theta(arg, p, policy)?;
            arg *= q;
        }
        return Ok(acc);
    }
    if q == C64::new(0.0, 0.0) {
        return Err(EvalError::domain("θ_p(x; q)_n with n < 0 needs q ≠ 0"));
    }
    // denominators first: fail before any multiplication
    let qinv = q.inv();
    let mut den = C64::new(1.0, 0.0);
    let mut arg = x * qinv;
    for j in 1..=(-n) {
        let t = theta(arg, p, policy)?;
        if t == C64::new(0.0, 0.0) {
            return Err(EvalError::pole(
                format!("θ_p(x q^-{j}) vanishes in the denominator of θ_p(x; q)_{n} (x = {x}, q = {q}, p = {p})"),
                arg,
            ));
        }
        den *= t;
        arg *= qinv;
    }
    Ok(den.inv())
}

/// Residual of the Jacobi triple product identity with the series cut at
/// `|n| ≤ big_n`.
pub fn triple_product_check(x: C64, p: C64, big_n: i32, policy: &TruncationPolicy) -> Result<f64> {
    check_theta_args(x, p)?;
    let mut series = C64::new(0.0, 0.0);
    for n in -big_n..=big_n {
        let e = n * (n - 1) / 2;
        series += p.powi(e) * (-x).powi(n);
    }
    let pp = if p == C64::new(0.0, 0.0) {
        C64::new(1.0, 0.0)
    } else {
        pochhammer_inf(p, p, policy, ZERO_SNAP)?.value
    };
    Ok((series - pp * theta(x, p, policy)?).norm())
}

/// `|θ_p(xw^{±1}, yz^{±1}) − θ_p(xz^{±1}, yw^{±1}) − (y/w) θ_p(xy^{±1}, wz^{±1})|`.
pub fn addition_law_residual(x: C64, y: C64, w: C64, z: C64, p: C64, policy: &TruncationPolicy) -> Result<f64> {
    for v in [x, y, w, z] {
        check_theta_args(v, p)?;
    }
    let t1 = theta_prod(&[x * w, x / w, y * z, y / z], p, policy)?;
    let t2 = theta_prod(&[x * z, x / z, y * w, y / w], p, policy)?;
    let t3 = y / w * theta_prod(&[x * y, x / y, w * z, w / z], p, policy)?;
    Ok((t1 - t2 - t3).norm())
}

fn rel_diff(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Relative residuals of the three quasiperiodicity relations:
/// `θ_p(p^m x)`, `θ_p(p^m x; q)_k` and `θ_p(x; pq)_k` against their
/// closed forms in terms of `θ_p(x)` and `θ_p(x; q)_k`.
pub fn quasiperiodicity_residuals(x: C64, q: C64, p: C64, m: i32, k: i32, policy: &TruncationPolicy) -> Result<[f64; 3]> {
    check_theta_args(x, p)?;
    if p == C64::new(0.0, 0.0) && m < 0 {
        return Err(EvalError::domain("p^m with m < 0 needs p ≠ 0"));
    }
    let pm = p.powi(m);
    let mx = -x;

    let lhs1 = theta(pm * x, p, policy)?;
    let rhs1 = mx.powi(-m) * p.powi(-(m * (m - 1) / 2)) * theta(x, p, policy)?;

    let k64 = k as i64;
    let fk = theta_pochhammer(x, q, p, k64, policy)?;
    let lhs2 = theta_pochhammer(pm * x, q, p, k64, policy)?;
    let rhs2 = mx.powi(-m * k) * q.powi(-(m * k * (k - 1) / 2)) * p.powi(-(k * m * (m - 1) / 2)) * fk;

    let lhs3 = theta_pochhammer(x, p * q, p, k64, policy)?;
    let rhs3 = mx.powi(-(k * (k - 1) / 2))
        * q.powi(-(k * (k - 1) * (2 * k - 1) / 6))
        * p.powi(-(k * (k - 1) * (k - 2) / 6))
        * fk;

    Ok([rel_diff(lhs1, rhs1), rel_diff(lhs2, rhs2), rel_diff(lhs3, rhs3)])
}
