//! Exact integer checks of total ellipticity for the pure ansatz (`σ = 0`).

use serde::{Deserialize, Serialize};

use super::TermSpec;
use crate::error::{EvalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionKind {
    Cubic,
    Quadratic,
    Linear,
}

/// A violated condition: the (0-based) index tuple and its nonzero sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ConditionKind,
    pub indices: Vec<usize>,
    pub sum: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub cubic_ok: bool,
    pub quadratic_ok: bool,
    pub linear_ok: bool,
    pub violations: Vec<Violation>,
}

impl EllipticityReport {
    pub fn passed(&self) -> bool {
        self.cubic_ok && self.quadratic_ok && self.linear_ok
    }
}

fn require_pure(t: &TermSpec) -> Result<()> {
    t.validate()?;
    if t.has_sigma() {
        return Err(EvalError::domain(
            "term has factors with nonzero (pq) powers; the Diophantine system covers σ = 0 only, use the numeric checker",
        ));
    }
    if !t.constraints.is_empty() {
        return Err(EvalError::domain(
            "term carries constraints; eliminate the constrained variables before the Diophantine check",
        ));
    }
    Ok(())
}

fn columns(t: &TermSpec) -> (Vec<i128>, Vec<Vec<i128>>) {
    let eps = t.factors.iter().map(|f| f.eps as i128).collect();
    let m = t.factors.iter().map(|f| f.m.iter().map(|&v| v as i128).collect()).collect();
    (eps, m)
}

/// `Σ ε m_i m_j m_k = 0` (i ≤ j ≤ k), `Σ ε m_i m_j = 0` (i ≤ j), `Σ ε m_i = 0`.
pub fn check_total_ellipticity(t: &TermSpec) -> Result<EllipticityReport> {
    require_pure(t)?;
    let (eps, m) = columns(t);
    let n = t.n;
    let mut violations = Vec::new();
    let sum = |f: &dyn Fn(&[i128]) -> i128| -> i128 { eps.iter().zip(&m).map(|(e, row)| e * f(row)).sum() };
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let s = sum(&|r: &[i128]| r[i] * r[j] * r[k]);
                if s != 0 {
                    violations.push(Violation {
                        kind: ConditionKind::Cubic,
                        indices: vec![i, j, k],
                        sum: s,
                    });
                }
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            let s = sum(&|r: &[i128]| r[i] * r[j]);
            if s != 0 {
                violations.push(Violation {
                    kind: ConditionKind::Quadratic,
                    indices: vec![i, j],
                    sum: s,
                });
            }
        }
    }
    for i in 0..n {
        let s = sum(&|r: &[i128]| r[i]);
        if s != 0 {
            violations.push(Violation {
                kind: ConditionKind::Linear,
                indices: vec![i],
                sum: s,
            });
        }
    }
    let has = |k: ConditionKind| violations.iter().any(|v| v.kind == k);
    Ok(EllipticityReport {
        cubic_ok: !has(ConditionKind::Cubic),
        quadratic_ok: !has(ConditionKind::Quadratic),
        linear_ok: !has(ConditionKind::Linear),
        violations,
    })
}

/// A formal monomial `(−1)^sign ∏ x_l^{x_l} q^{q/den} p^{p/den}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiExponents {
    pub x: Vec<i128>,
    pub sign: i128,
    pub q: i128,
    pub p: i128,
    pub den: i128,
}

impl QuasiExponents {
    pub fn is_trivial(&self) -> bool {
        self.sign == 0 && self.q == 0 && self.p == 0 && self.x.iter().all(|&v| v == 0)
    }
}

/// Multiplier picked up by `h_i` under `x_j → p x_j`:
/// `∏_a ([−x^{m_a}]^{−m_i m_j} q^{−m_j m_i (m_i−1)/2} p^{−m_i m_j (m_j−1)/2})^{ε_a}`.
pub fn p_shift_exponents(t: &TermSpec, i: usize, j: usize) -> Result<QuasiExponents> {
    require_pure(t)?;
    if i >= t.n || j >= t.n {
        return Err(EvalError::domain(format!("variable index out of range for n = {}", t.n)));
    }
    let (eps, m) = columns(t);
    let mut out = QuasiExponents {
        x: vec![0; t.n],
        sign: 0,
        q: 0,
        p: 0,
        den: 2,
    };
    for (e, r) in eps.iter().zip(&m) {
        let w = -e * r[i] * r[j];
        out.sign += w;
        for (l, xl) in out.x.iter_mut().enumerate() {
            *xl += w * r[l];
        }
        out.q -= e * r[j] * r[i] * (r[i] - 1);
        out.p -= e * r[i] * r[j] * (r[j] - 1);
    }
    Ok(out)
}

/// Multiplier picked up by `h_i` under `q → pq`:
/// `∏_a ([−x^{m_a}]^{−m_i(m_i−1)/2} q^{−m_i(m_i−1)(2m_i−1)/6} p^{−m_i(m_i−1)(m_i−2)/6})^{ε_a}`.
pub fn q_shift_exponents(t: &TermSpec, i: usize) -> Result<QuasiExponents> {
    require_pure(t)?;
    if i >= t.n {
        return Err(EvalError::domain(format!("variable index out of range for n = {}", t.n)));
    }
    let (eps, m) = columns(t);
    let mut out = QuasiExponents {
        x: vec![0; t.n],
        sign: 0,
        q: 0,
        p: 0,
        den: 6,
    };
    for (e, r) in eps.iter().zip(&m) {
        let mi = r[i];
        // m(m−1) is even
        let w = -e * mi * (mi - 1) / 2;
        out.sign += w;
        for (l, xl) in out.x.iter_mut().enumerate() {
            *xl += w * r[l];
        }
        out.q -= e * mi * (mi - 1) * (2 * mi - 1);
        out.p -= e * mi * (mi - 1) * (mi - 2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{beta_term_spec, Factor};

    fn single() -> TermSpec {
        TermSpec::new(1, vec![Factor::new(vec![1], 1)], vec![]).unwrap()
    }

    #[test]
    fn single_gamma_fails_linear() {
        let r = check_total_ellipticity(&single()).unwrap();
        assert!(!r.linear_ok);
        assert!(r.violations.contains(&Violation {
            kind: ConditionKind::Linear,
            indices: vec![0],
            sum: 1
        }));
    }

    #[test]
    fn cancelling_pair_passes() {
        let t = TermSpec::new(1, vec![Factor::new(vec![1], 1), Factor::new(vec![1], -1)], vec![]).unwrap();
        let r = check_total_ellipticity(&t).unwrap();
        assert!(r.passed() && r.violations.is_empty());
    }

    #[test]
    fn sigma_is_refused() {
        let t = TermSpec::new(1, vec![Factor::with_sigma(vec![1], 1, 1)], vec![]).unwrap();
        assert_eq!(check_total_ellipticity(&t).unwrap_err().kind, crate::ErrorKind::DomainViolation);
    }

    #[test]
    fn beta_term_exponents_vanish() {
        let t = beta_term_spec();
        for i in 0..t.n {
            assert!(q_shift_exponents(&t, i).unwrap().is_trivial());
            for j in 0..t.n {
                assert!(p_shift_exponents(&t, i, j).unwrap().is_trivial());
            }
        }
    }
}
