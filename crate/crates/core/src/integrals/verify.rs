//! Residuals of the transformation formulas, the two recurrence families
//! and the kernel q-difference equation. All residuals are relative to the
//! largest participating term.

use rayon::prelude::*;

use super::{beta_kernel, check_inside, i_a, i_bc, prod, AParams, BcParams, BALANCE_TOL};
use crate::error::{EvalError, Result};
use crate::gamma::ell_gamma;
use crate::params::{BasePair, TruncationPolicy, C64};
use crate::quad::QuadOptions;
use crate::theta::theta;

fn ratio_residual(lhs: C64, rhs: C64) -> f64 {
    (lhs / rhs - 1.0).norm()
}

fn sum_residual(terms: &[C64]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    terms.iter().sum::<C64>().norm() / scale
}

/// `∏_{r<s} Γ(t_r t_s)`.
fn pair_gamma_product(t: &[C64], base: &BasePair, policy: &TruncationPolicy) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for r in 0..t.len() {
        for s in r + 1..t.len() {
            acc *= ell_gamma(t[r] * t[s], base, policy)?.value;
        }
    }
    Ok(acc)
}

/// `|I_n^{(m)}(t) / (∏_{r<s} Γ(t_r t_s) I_m^{(n)}(√(pq)/t)) − 1|`, principal `√(pq)`.
pub fn verify_trafo_bc(
    n: usize,
    m: usize,
    t: &[C64],
    base: &BasePair,
    opts: &QuadOptions,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let lhs_p = BcParams::new(n, m, t.to_vec(), *base)?;
    let rt = base.pq().sqrt();
    let dual: Vec<C64> = t.iter().map(|v| rt / v).collect();
    check_inside("√(pq)/t", &dual)?;
    let rhs_p = BcParams::new(m, n, dual, *base)?;
    let pref = pair_gamma_product(t, base, policy)?;
    let (lhs, rhs) = rayon::join(|| i_bc(&lhs_p, opts, policy), || i_bc(&rhs_p, opts, policy));
    Ok(ratio_residual(lhs?.value, pref * rhs?.value))
}

/// `|I_n^{(m)}(s; t) / (∏_{j,k} Γ(t_j s_k) I_m^{(n)}(S^{1/(m+1)}/s; T^{1/(m+1)}/t)) − 1|`.
pub fn verify_trafo_a(
    n: usize,
    m: usize,
    s: &[C64],
    t: &[C64],
    base: &BasePair,
    opts: &QuadOptions,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let lhs_p = AParams::new(n, m, s.to_vec(), t.to_vec(), *base)?;
    let (sr, tr) = lhs_p.roots();
    let s2: Vec<C64> = s.iter().map(|v| sr / v).collect();
    let t2: Vec<C64> = t.iter().map(|v| tr / v).collect();
    check_inside("S^(1/(m+1))/s", &s2)?;
    check_inside("T^(1/(m+1))/t", &t2)?;
    let rhs_p = AParams::new(m, n, s2, t2, *base)?;
    let mut pref = C64::new(1.0, 0.0);
    for &tj in t {
        for &sk in s {
            pref *= ell_gamma(tj * sk, base, policy)?.value;
        }
    }
    let (lhs, rhs) = rayon::join(|| i_a(&lhs_p, opts, policy), || i_a(&rhs_p, opts, policy));
    Ok(ratio_residual(lhs?.value, pref * rhs?.value))
}

fn check_index_set(set: &[usize], len: usize, total: usize, what: &str) -> Result<()> {
    if set.len() != len {
        return Err(EvalError::domain(format!("{what} needs {len} indices, got {}", set.len())));
    }
    for (a, &i) in set.iter().enumerate() {
        if i >= total {
            return Err(EvalError::domain(format!("index {i} out of range for {total} parameters")));
        }
        if set[..a].contains(&i) {
            return Err(EvalError::domain(format!("index {i} repeated in {what}")));
        }
    }
    Ok(())
}

fn nonzero_theta(x: C64, p: C64, policy: &TruncationPolicy, what: &str) -> Result<C64> {
    let v = theta(x, p, policy)?;
    if v.norm() < 1e-300 {
        return Err(EvalError::domain_at(
            format!("recurrence coefficient has a pole: {what} = θ_p({x}) vanishes"),
            x,
        ));
    }
    Ok(v)
}

fn check_raw_balance(t: &[C64], target: C64, what: &str) -> Result<()> {
    let r = (prod(t) / target - 1.0).norm();
    if r > BALANCE_TOL {
        return Err(EvalError::domain(format!("{what} balancing violated (relative {r:.2e})")));
    }
    Ok(())
}

fn integrate_terms(
    n: usize,
    m: usize,
    sets: Vec<(C64, Vec<C64>)>,
    base: &BasePair,
    opts: &QuadOptions,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let params = sets
        .into_iter()
        .map(|(c, t)| Ok((c, BcParams::new(n, m, t, *base)?)))
        .collect::<Result<Vec<_>>>()?;
    let terms = params
        .par_iter()
        .map(|(c, p)| Ok(c * i_bc(p, opts, policy)?.value))
        .collect::<Result<Vec<C64>>>()?;
    Ok(sum_residual(&terms))
}

/// `Σ_{i∈I} t_i / ∏_{j∈I, j≠i} θ_p(t_i t_j^{±1}) · I_n^{(m)}(…, q t_i, …)` with
/// `∏ t = (pq)^m p` and `|I| = n + 2`.
pub fn verify_recurrence_i(
    n: usize,
    m: usize,
    t: &[C64],
    i_set: &[usize],
    base: &BasePair,
    opts: &QuadOptions,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let total = BcParams::count(n, m);
    if t.len() != total {
        return Err(EvalError::domain(format!("{total} parameters expected, got {}", t.len())));
    }
    check_index_set(i_set, n + 2, total, "recurrence I")?;
    let p = base.p();
    check_raw_balance(t, base.pq().powi(m as i32) * p, "∏ t = (pq)^m p")?;
    let mut sets = Vec::new();
    for &i in i_set {
        let mut den = C64::new(1.0, 0.0);
        for &j in i_set.iter().filter(|&&j| j != i) {
            den *= nonzero_theta(t[i] * t[j], p, policy, "θ_p(t_i t_j)")?;
            den *= nonzero_theta(t[i] / t[j], p, policy, "θ_p(t_i / t_j)")?;
        }
        let mut shifted = t.to_vec();
        shifted[i] *= base.q();
        sets.push((t[i] / den, shifted));
    }
    integrate_terms(n, m, sets, base, opts, policy)
}

/// `Σ_{k∈K} ∏_{i∉K} θ_p(t_i t_k/q) / (t_k ∏_{i∈K, i≠k} θ_p(t_i/t_k)) ·
/// I_n^{(m)}(…, t_k/q, …)` with `∏ t = (pq)^{m+1} q` and `|K| = m + 2`.
pub fn verify_recurrence_ii(
    n: usize,
    m: usize,
    t: &[C64],
    k_set: &[usize],
    base: &BasePair,
    opts: &QuadOptions,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let total = BcParams::count(n, m);
    if t.len() != total {
        return Err(EvalError::domain(format!("{total} parameters expected, got {}", t.len())));
    }
    check_index_set(k_set, m + 2, total, "recurrence II")?;
    let (p, q) = (base.p(), base.q());
    check_raw_balance(t, base.pq().powi(m as i32 + 1) * q, "∏ t = (pq)^(m+1) q")?;
    let mut sets = Vec::new();
    for &k in k_set {
        let mut num = C64::new(1.0, 0.0);
        for i in (0..total).filter(|i| !k_set.contains(i)) {
            num *= theta(t[i] * t[k] / q, p, policy)?;
        }
        let mut den = t[k];
        for &i in k_set.iter().filter(|&&i| i != k) {
            den *= nonzero_theta(t[i] / t[k], p, policy, "θ_p(t_i / t_k)")?;
        }
        let mut shifted = t.to_vec();
        shifted[k] /= q;
        sets.push((num / den, shifted));
    }
    integrate_terms(n, m, sets, base, opts, policy)
}

fn beta_delta(x: C64, t: &[C64; 5], base: &BasePair, policy: &TruncationPolicy) -> Result<C64> {
    beta_kernel(t, base, policy, C64::new(1.0, 0.0))?.eval(&[x])
}

/// `g(x) = ∏_m θ_p(t_m x) / ∏_{m≥2} θ_p(t_1 t_m) · θ_p(t_1 A) / θ_p(x², x A) · t_1/x`.
fn qdiff_g(x: C64, t: &[C64; 5], p: C64, policy: &TruncationPolicy) -> Result<C64> {
    let a = prod(t);
    let mut num = theta(t[0] * a, p, policy)? * t[0] / x;
    for &tm in t {
        num *= theta(tm * x, p, policy)?;
    }
    let mut den = theta(x * x, p, policy)? * theta(x * a, p, policy)?;
    for &tm in &t[1..] {
        den *= theta(t[0] * tm, p, policy)?;
    }
    if den.norm() < 1e-300 {
        return Err(EvalError::pole(format!("g(x) has a pole at x = {x}"), x));
    }
    Ok(num / den)
}

/// Four-term residual of
/// `Δ(x; q t_1, …) − Δ(x; t) = g(x/q) Δ(x/q; t) − g(x) Δ(x; t)`.
pub fn verify_kernel_qdiff(x: C64, t: &[C64; 5], base: &BasePair, policy: &TruncationPolicy) -> Result<f64> {
    let (p, q) = (base.p(), base.q());
    let mut tq = *t;
    tq[0] *= q;
    let a = beta_delta(x, &tq, base, policy)?;
    let b = beta_delta(x, t, base, policy)?;
    let c = qdiff_g(x / q, t, p, policy)? * beta_delta(x / q, t, base, policy)?;
    let d = qdiff_g(x, t, p, policy)? * b;
    Ok(sum_residual(&[a, -b, -c, d]))
}

/// The same identity with the roles of `p` and `q` exchanged.
pub fn verify_kernel_qdiff_partner(x: C64, t: &[C64; 5], base: &BasePair, policy: &TruncationPolicy) -> Result<f64> {
    verify_kernel_qdiff(x, t, &base.swapped()?, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn qdiff_both_orientations() {
        let b = BasePair::real(0.1, 0.15).unwrap();
        let t = [c(0.3, 0.1), c(0.5, 0.0), c(0.4, -0.2), c(0.6, 0.1), c(0.35, 0.0)];
        for k in 0..5 {
            let x = C64::from_polar(1.0, 0.3 + 1.1 * k as f64);
            assert!(verify_kernel_qdiff(x, &t, &b, &pol()).unwrap() < 1e-9);
            assert!(verify_kernel_qdiff_partner(x, &t, &b, &pol()).unwrap() < 1e-9);
        }
    }

    #[test]
    fn recurrence_coefficient_pole() {
        let b = BasePair::real(0.1, 0.15).unwrap();
        let mut t = vec![c(0.5, 0.0), c(0.5, 0.0), c(0.4, 0.1), c(0.3, -0.2), c(0.6, 0.0)];
        t.push(b.p() / prod(&t));
        let e = verify_recurrence_i(1, 0, &t, &[0, 1, 2], &b, &QuadOptions::default(), &pol()).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DomainViolation);
        let e = verify_recurrence_i(1, 0, &t, &[0, 0, 2], &b, &QuadOptions::default(), &pol()).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DomainViolation);
    }
}
