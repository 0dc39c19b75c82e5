//! q-certificates `h = Δ(q^d x)/Δ(x) = ∏_a θ_p((pq)^{σ_a} x^{m_a}; q)_{m_a·d}^{ε_a}`
//! and their numeric ellipticity and modular checks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::diophantine::check_total_ellipticity;
use super::{monomial, TermSpec};
use crate::error::{EvalError, ErrorKind, Result};
use crate::gamma::{ell_gamma, modified_g_product, GammaValue};
use crate::params::{cexp2pi, BasePair, OmegaTriple, TruncationPolicy, C64};
use crate::product::ScaledProduct;
use crate::sample;
use crate::theta::theta_pochhammer;

/// Resampling budget when a random point lands on a lattice zero or pole.
pub const RESAMPLE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFactor {
    pub m: Vec<i64>,
    pub sigma: i64,
    /// Shift length `m · d`.
    pub len: i64,
    pub eps: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Variable whose q-shift defines the certificate.
    pub var: Option<usize>,
    /// Full shift vector `d` (dependent variables compensate).
    pub direction: Vec<i64>,
    /// Factors with `len = 0` are dropped: `θ_p(·; q)_0 = 1`.
    pub factors: Vec<CertificateFactor>,
}

/// `e_i` extended to the dependent variables so that `Σ e_l d_l = target`
/// for every constraint.
fn compensate(t: &TermSpec, mut d: Vec<i64>, targets: &[i64]) -> Vec<i64> {
    for (con, &target) in t.constraints.iter().zip(targets) {
        let v = con.solve_for;
        let rest: i64 = con.exps.iter().zip(&d).enumerate().filter(|(l, _)| *l != v).map(|(_, (e, x))| e * x).sum();
        // e_v = ±1
        d[v] = (target - rest) * con.exps[v];
    }
    d
}

fn check_free(t: &TermSpec, i: usize) -> Result<()> {
    if i >= t.n {
        return Err(EvalError::domain(format!("variable index {i} out of range for n = {}", t.n)));
    }
    if t.is_dependent(i) {
        return Err(EvalError::domain(format!(
            "variable {} is fixed by a constraint; shift a free variable instead",
            t.variable_name(i)
        )));
    }
    Ok(())
}

/// Certificate of the q-shift of free variable `i` (0-based).
pub fn certificate(t: &TermSpec, i: usize) -> Result<Certificate> {
    check_free(t, i)?;
    let mut d = vec![0; t.n];
    d[i] = 1;
    let d = compensate(t, d, &vec![0; t.constraints.len()]);
    let mut c = certificate_along(t, &d)?;
    c.var = Some(i);
    Ok(c)
}

/// Certificate along an arbitrary integer shift `x → q^d x`; `d` must
/// preserve every constraint.
pub fn certificate_along(t: &TermSpec, d: &[i64]) -> Result<Certificate> {
    t.validate()?;
    if d.len() != t.n {
        return Err(EvalError::domain(format!("shift vector has length {}, expected {}", d.len(), t.n)));
    }
    for (c, con) in t.constraints.iter().enumerate() {
        let s: i64 = con.exps.iter().zip(d).map(|(e, x)| e * x).sum();
        if s != 0 {
            return Err(EvalError::domain(format!("shift breaks constraint {c}: Σ e·d = {s} ≠ 0")));
        }
    }
    let factors = t
        .factors
        .iter()
        .filter_map(|f| {
            let len: i64 = f.m.iter().zip(d).map(|(a, b)| a * b).sum();
            (len != 0).then(|| CertificateFactor {
                m: f.m.clone(),
                sigma: f.sigma,
                len,
                eps: f.eps,
            })
        })
        .collect();
    Ok(Certificate {
        var: None,
        direction: d.to_vec(),
        factors,
    })
}

/// Numeric value of `h` at `x`.
pub fn eval_certificate(c: &Certificate, x: &[C64], base: &BasePair, policy: &TruncationPolicy) -> Result<C64> {
    if x.len() != c.direction.len() {
        return Err(EvalError::domain(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            c.direction.len()
        )));
    }
    let (p, q) = (base.p(), base.q());
    let pq = base.pq();
    let mut num = ScaledProduct::one();
    let mut den = ScaledProduct::one();
    for f in &c.factors {
        let y = monomial(x, &f.m, f.sigma, pq);
        let v = theta_pochhammer(y, q, p, f.len, policy)?;
        if f.eps < 0 && v == C64::new(0.0, 0.0) {
            return Err(EvalError::pole(
                format!("θ_p(y; q)_{} vanishes in a denominator of the certificate (y = {y})", f.len),
                y,
            ));
        }
        let side = if f.eps < 0 { &mut den } else { &mut num };
        for _ in 0..f.eps.unsigned_abs() {
            side.mul(v);
        }
    }
    num.combine(&den, true);
    Ok(num.value())
}

/// A p-dilation `x → p^δ x` combined with `q → p^N q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transform {
    pub delta: Vec<i64>,
    pub nome_power: i64,
}

impl Transform {
    /// `x_j → p x_j` with the dependent variables compensating.
    pub fn variable(t: &TermSpec, j: usize) -> Result<Self> {
        check_free(t, j)?;
        let mut d = vec![0; t.n];
        d[j] = 1;
        Ok(Transform {
            delta: compensate(t, d, &vec![0; t.constraints.len()]),
            nome_power: 0,
        })
    }

    /// `q → pq`, dependent variables absorbing the change of `(pq)^P`.
    pub fn nome(t: &TermSpec) -> Self {
        let targets: Vec<i64> = t.constraints.iter().map(|c| c.pq_power).collect();
        Transform {
            delta: compensate(t, vec![0; t.n], &targets),
            nome_power: 1,
        }
    }

    /// One transform per free variable plus the nome transform; together
    /// they generate every admissible transform.
    pub fn basis(t: &TermSpec) -> Vec<(String, Transform)> {
        let mut out: Vec<(String, Transform)> = t
            .free_variables()
            .into_iter()
            .map(|j| {
                let tr = Transform::variable(t, j).expect("free variable");
                (format!("{} -> p {}", t.variable_name(j), t.variable_name(j)), tr)
            })
            .collect();
        out.push(("q -> p q".to_string(), Transform::nome(t)));
        out
    }

    /// Admissible iff `Σ e·δ = N·P` for every constraint.
    pub fn check(&self, t: &TermSpec) -> Result<()> {
        if self.delta.len() != t.n {
            return Err(EvalError::domain(format!(
                "transform has {} exponents, expected {}",
                self.delta.len(),
                t.n
            )));
        }
        for (c, con) in t.constraints.iter().enumerate() {
            let s: i64 = con.exps.iter().zip(&self.delta).map(|(e, x)| e * x).sum();
            if s != self.nome_power * con.pq_power {
                return Err(EvalError::domain(format!(
                    "unbalanced transform: constraint {c} needs Σ e·δ = N·P = {}, got {s}",
                    self.nome_power * con.pq_power
                )));
            }
        }
        Ok(())
    }
}

/// `|h(transformed)/h(x) − 1|` at a given admissible point.
pub fn ellipticity_residual_at(
    c: &Certificate,
    tr: &Transform,
    x: &[C64],
    base: &BasePair,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let p = base.p();
    let h0 = eval_certificate(c, x, base, policy)?;
    if h0 == C64::new(0.0, 0.0) {
        return Err(EvalError::pole("certificate vanishes at the sample point", x[0]));
    }
    let moved = BasePair::new(p, base.q() * p.powi(tr.nome_power as i32))?;
    let xs: Vec<C64> = x.iter().zip(&tr.delta).map(|(v, &d)| v * p.powi(d as i32)).collect();
    let h1 = eval_certificate(c, &xs, &moved, policy)?;
    Ok((h1 / h0 - 1.0).norm())
}

fn with_resampling<F: FnMut(&mut sample::SeedRng) -> Result<f64>>(seed: u64, mut f: F) -> Result<f64> {
    let mut rng = sample::rng(seed);
    let mut last = None;
    for _ in 0..RESAMPLE_LIMIT {
        match f(&mut rng) {
            Err(e) if e.kind == ErrorKind::PoleProximity => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Residual of the certificate of free variable `i` under `tr` at a seeded
/// generic point: moduli in `[0.4, 0.9]`, uniform phases, dependent
/// variables solved from the constraints.
pub fn numeric_ellipticity_check(
    t: &TermSpec,
    i: usize,
    tr: &Transform,
    base: &BasePair,
    policy: &TruncationPolicy,
    seed: u64,
) -> Result<f64> {
    tr.check(t)?;
    let c = certificate(t, i)?;
    with_resampling(seed, |rng| {
        let mut x = sample::polar_vec(rng, t.n, 0.4, 0.9);
        t.complete_point(&mut x, base.pq())?;
        ellipticity_residual_at(&c, tr, &x, base, policy)
    })
}

fn require_unconstrained(t: &TermSpec) -> Result<()> {
    if t.has_sigma() || !t.constraints.is_empty() {
        return Err(EvalError::domain(
            "modular checks need a pure term (σ = 0, no constraints) in additive variables",
        ));
    }
    Ok(())
}

/// `|h_i(x̃; r̃, p̃) / h_i(x; q, p) − 1|` with `x_l = e^{2πiγ_l/ω2}` and
/// `x̃_l = e^{−2πiγ_l/ω3}` at seeded `γ`.
pub fn modular_invariance_check(
    t: &TermSpec,
    i: usize,
    w: &OmegaTriple,
    policy: &TruncationPolicy,
    seed: u64,
) -> Result<f64> {
    require_unconstrained(t)?;
    let c = certificate(t, i)?;
    let base = BasePair::new(w.p, w.q)?;
    let partner = BasePair::new(w.p_tilde, w.r_tilde)?;
    let [_, w2, w3] = w.omega;
    with_resampling(seed, |rng| {
        let gamma: Vec<C64> = (0..t.n)
            .map(|_| w2 * C64::new(rng.gen_range(0.0..1.0), rng.gen_range(-0.05..0.05)))
            .collect();
        let x: Vec<C64> = gamma.iter().map(|g| cexp2pi(g / w2)).collect();
        let xt: Vec<C64> = gamma.iter().map(|g| cexp2pi(-g / w3)).collect();
        let h0 = eval_certificate(&c, &x, &base, policy)?;
        let h1 = eval_certificate(&c, &xt, &partner, policy)?;
        Ok((h1 / h0 - 1.0).norm())
    })
}

fn require_totally_elliptic(t: &TermSpec) -> Result<()> {
    let r = check_total_ellipticity(t)?;
    if !r.passed() {
        return Err(EvalError::domain(format!(
            "term is not totally elliptic ({} violated conditions)",
            r.violations.len()
        )));
    }
    Ok(())
}

/// `(πi/12)(Σω_k)(Σω_k^{−1}) Σ_a ε_a`.
pub fn modular_transform_factor(t: &TermSpec, w: &OmegaTriple) -> Result<C64> {
    require_totally_elliptic(t)?;
    let inv: C64 = w.omega.iter().map(|o| o.inv()).sum();
    Ok(C64::new(0.0, std::f64::consts::PI / 12.0) * w.sum() * inv * t.eps_sum() as f64)
}

/// Relative gap between `∏_a G(Σ_l u_l m_l; ω)^{ε_a}` and
/// `e^{factor} Δ(x̃; r̃, p̃)` with `x̃_j = e^{−2πiu_j/ω3}`.
pub fn verify_modular_transform(t: &TermSpec, w: &OmegaTriple, u: &[C64], policy: &TruncationPolicy) -> Result<f64> {
    let factor = modular_transform_factor(t, w)?;
    if u.len() != t.n {
        return Err(EvalError::domain(format!("{} additive variables given, expected {}", u.len(), t.n)));
    }
    let partner = BasePair::new(w.p_tilde, w.r_tilde)?;
    let w3 = w.omega[2];
    let mut lhs = GammaValue {
        value: C64::new(1.0, 0.0),
        est_error: 0.0,
    };
    let mut rhs = lhs;
    for f in &t.factors {
        let arg: C64 = u.iter().zip(&f.m).map(|(v, &e)| v * e as f64).sum();
        let g = modified_g_product(arg, w, policy)?;
        let gamma = ell_gamma(cexp2pi(-arg / w3), &partner, policy)?;
        for _ in 0..f.eps.unsigned_abs() {
            if f.eps > 0 {
                lhs = lhs.mul(g);
                rhs = rhs.mul(gamma);
            } else {
                lhs = lhs.mul(g.inv());
                rhs = rhs.mul(gamma.inv());
            }
        }
    }
    let r = rhs.value * factor.exp();
    Ok((lhs.value - r).norm() / lhs.value.norm().max(r.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{beta_term_spec, rho_a_term_spec, rho_bc_term_spec, Factor};

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn base() -> BasePair {
        BasePair::real(0.13, 0.21).unwrap()
    }

    #[test]
    fn single_factor_certificate_is_theta() {
        let t = TermSpec::new(1, vec![Factor::new(vec![1], 1)], vec![]).unwrap();
        let c = certificate(&t, 0).unwrap();
        assert_eq!(c.factors.len(), 1);
        assert_eq!(c.factors[0].len, 1);
        let x = [C64::new(0.6, 0.3)];
        let h = eval_certificate(&c, &x, &base(), &pol()).unwrap();
        let th = crate::theta::theta(x[0], base().p(), &pol()).unwrap();
        assert!((h - th).norm() < 1e-15);
        // not elliptic: θ(px)/θ(x) = −1/x
        let r = numeric_ellipticity_check(&t, 0, &Transform::variable(&t, 0).unwrap(), &base(), &pol(), 1).unwrap();
        assert!(r > 0.1);
    }

    #[test]
    fn zero_shift_factors_drop_out() {
        let t = TermSpec::new(2, vec![Factor::new(vec![0, 1], 1), Factor::new(vec![1, 1], -1)], vec![]).unwrap();
        let c = certificate(&t, 0).unwrap();
        assert_eq!(c.factors.len(), 1);
        let empty = TermSpec::new(1, vec![], vec![]).unwrap();
        let c = certificate(&empty, 0).unwrap();
        assert_eq!(eval_certificate(&c, &[C64::new(0.5, 0.0)], &base(), &pol()).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn certificate_is_ratio_of_terms() {
        let t = beta_term_spec();
        let b = base();
        let mut rng = sample::rng(5);
        let x = sample::polar_vec(&mut rng, 6, 0.4, 0.9);
        for i in 0..6 {
            let c = certificate(&t, i).unwrap();
            let mut xs = x.clone();
            xs[i] *= b.q();
            let direct = t.eval(&xs, &b, &pol()).unwrap() / t.eval(&x, &b, &pol()).unwrap();
            let h = eval_certificate(&c, &x, &b, &pol()).unwrap();
            assert!((h / direct - 1.0).norm() < 1e-9, "{i}: {h} {direct}");
        }
    }

    #[test]
    fn beta_term_elliptic_everywhere() {
        let t = beta_term_spec();
        for i in 0..6 {
            for (name, tr) in Transform::basis(&t) {
                let r = numeric_ellipticity_check(&t, i, &tr, &base(), &pol(), 11 + i as u64).unwrap();
                assert!(r < 1e-9, "cert {i}, {name}: {r}");
            }
        }
    }

    #[test]
    fn rho_terms_elliptic() {
        for t in [rho_bc_term_spec(1, 1).unwrap(), rho_a_term_spec(1, 1).unwrap()] {
            for i in t.free_variables() {
                for (name, tr) in Transform::basis(&t) {
                    let r = numeric_ellipticity_check(&t, i, &tr, &base(), &pol(), 3).unwrap();
                    assert!(r < 1e-8, "{} cert {i}, {name}: {r}", t.n);
                }
            }
        }
    }

    #[test]
    fn unbalanced_transform_rejected() {
        let t = rho_bc_term_spec(1, 1).unwrap();
        let tr = Transform {
            delta: vec![0; t.n],
            nome_power: 1,
        };
        let e = numeric_ellipticity_check(&t, 0, &tr, &base(), &pol(), 0).unwrap_err();
        assert_eq!(e.kind, ErrorKind::DomainViolation);
        assert!(certificate(&t, t.n - 1).is_err());
    }

    #[test]
    fn beta_modular() {
        let t = beta_term_spec();
        let w = sample::omega_triple(&mut sample::rng(2), 0.6);
        for i in 0..6 {
            let r = modular_invariance_check(&t, i, &w, &pol(), 9).unwrap();
            assert!(r < 1e-7, "{i}: {r}");
        }
        let u: Vec<C64> = sample::polar_vec(&mut sample::rng(4), 6, 0.1, 0.3);
        let r = verify_modular_transform(&t, &w, &u, &pol()).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn broken_beta_not_modular() {
        let mut t = beta_term_spec();
        t.factors[0].eps = -1;
        let w = sample::omega_triple(&mut sample::rng(2), 0.6);
        let r = modular_invariance_check(&t, 0, &w, &pol(), 9).unwrap();
        assert!(r > 1e-3, "{r}");
        assert!(modular_transform_factor(&t, &w).is_err());
    }
}
