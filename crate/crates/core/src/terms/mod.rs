//! Elliptic hypergeometric terms `Δ(x) = ∏_a Γ_{p,q}((pq)^{σ_a} x^{m_a})^{ε_a}`.
//!
//! A [`TermSpec`] is pure integer data: monomial exponents, multiplicities,
//! optional `(pq)` offsets and multiplicative constraints among the
//! variables. The exact Diophantine checker lives in [`diophantine`], the
//! built-in terms in [`builders`], and certificates with their numeric
//! ellipticity and modular checks in [`certificate`].

pub mod builders;
pub mod certificate;
pub mod diophantine;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::gamma::{ell_gamma, ell_gamma_recip};
use crate::params::{BasePair, TruncationPolicy, C64};

pub use builders::{beta_term_spec, rho_a_term_spec, rho_bc_term_spec};
pub use certificate::{
    certificate, certificate_along, eval_certificate, modular_invariance_check, modular_transform_factor,
    numeric_ellipticity_check, verify_modular_transform, Certificate, CertificateFactor, Transform,
};
pub use diophantine::{check_total_ellipticity, p_shift_exponents, q_shift_exponents, EllipticityReport, QuasiExponents};

/// One factor `Γ_{p,q}((pq)^σ x^m)^ε`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub m: Vec<i64>,
    pub eps: i64,
    #[serde(default)]
    pub sigma: i64,
}

impl Factor {
    pub fn new(m: Vec<i64>, eps: i64) -> Self {
        Factor { m, eps, sigma: 0 }
    }

    pub fn with_sigma(m: Vec<i64>, eps: i64, sigma: i64) -> Self {
        Factor { m, eps, sigma }
    }
}

/// `∏_l x_l^{exps_l} = (pq)^{pq_power}`, solved for `x_{solve_for}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub exps: Vec<i64>,
    #[serde(default)]
    pub pq_power: i64,
    pub solve_for: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub n: usize,
    pub factors: Vec<Factor>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub names: Vec<String>,
}

impl TermSpec {
    pub fn new(n: usize, factors: Vec<Factor>, constraints: Vec<Constraint>) -> Result<Self> {
        let t = TermSpec {
            n,
            factors,
            constraints,
            names: Vec::new(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        self.names = names;
        self.validate()?;
        Ok(self)
    }

    /// Parse and validate the JSON form.
    pub fn from_json(s: &str) -> Result<Self> {
        let t: TermSpec =
            serde_json::from_str(s).map_err(|e| EvalError::domain(format!("TermSpec JSON does not parse: {e}")))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("TermSpec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for (a, f) in self.factors.iter().enumerate() {
            if f.m.len() != self.n {
                return Err(EvalError::domain(format!(
                    "factor {a}: exponent vector has length {}, expected n = {}",
                    f.m.len(),
                    self.n
                )));
            }
            if f.eps == 0 {
                return Err(EvalError::domain(format!("factor {a}: multiplicity ε = 0 is not allowed")));
            }
        }
        if !self.names.is_empty() && self.names.len() != self.n {
            return Err(EvalError::domain(format!("{} names given for {} variables", self.names.len(), self.n)));
        }
        let mut solved = vec![false; self.n];
        for (c, con) in self.constraints.iter().enumerate() {
            if con.exps.len() != self.n {
                return Err(EvalError::domain(format!(
                    "constraint {c}: exponent vector has length {}, expected n = {}",
                    con.exps.len(),
                    self.n
                )));
            }
            let v = con.solve_for;
            if v >= self.n {
                return Err(EvalError::domain(format!("constraint {c}: solve_for = {v} is out of range")));
            }
            if con.exps[v].abs() != 1 {
                return Err(EvalError::domain(format!(
                    "constraint {c}: designated variable {v} must enter with exponent ±1"
                )));
            }
            if solved[v] {
                return Err(EvalError::domain(format!("variable {v} is designated by two constraints")));
            }
            solved[v] = true;
            for (d, other) in self.constraints.iter().enumerate() {
                if d != c && other.exps.get(v).copied().unwrap_or(0) != 0 {
                    return Err(EvalError::domain(format!(
                        "designated variable {v} of constraint {c} also appears in constraint {d}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn variable_name(&self, i: usize) -> String {
        self.names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
    }

    pub fn is_dependent(&self, i: usize) -> bool {
        self.constraints.iter().any(|c| c.solve_for == i)
    }

    /// Indices of the variables not fixed by a constraint.
    pub fn free_variables(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.is_dependent(i)).collect()
    }

    pub fn has_sigma(&self) -> bool {
        self.factors.iter().any(|f| f.sigma != 0)
    }

    pub fn eps_sum(&self) -> i64 {
        self.factors.iter().map(|f| f.eps).sum()
    }

    /// Overwrite the dependent coordinates of `x` so every constraint holds.
    pub fn complete_point(&self, x: &mut [C64], pq: C64) -> Result<()> {
        if x.len() != self.n {
            return Err(EvalError::domain(format!("point has {} coordinates, expected {}", x.len(), self.n)));
        }
        for con in &self.constraints {
            let v = con.solve_for;
            let mut rest = C64::new(1.0, 0.0);
            for (l, &e) in con.exps.iter().enumerate() {
                if l != v && e != 0 {
                    rest *= x[l].powi(e as i32);
                }
            }
            let target = pq.powi(con.pq_power as i32) / rest;
            x[v] = if con.exps[v] == 1 { target } else { target.inv() };
        }
        Ok(())
    }

    /// Largest constraint violation `|∏ x^e / (pq)^P − 1|`.
    pub fn constraint_residual(&self, x: &[C64], pq: C64) -> f64 {
        self.constraints
            .iter()
            .map(|con| (monomial(x, &con.exps, 0, pq) / pq.powi(con.pq_power as i32) - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// `Δ(x)` through `Γ_{p,q}`; negative multiplicities use
    /// `Γ(pq/z) = Γ(z)^{-1}` so zeros of `Δ` stay finite.
    pub fn eval(&self, x: &[C64], base: &BasePair, policy: &TruncationPolicy) -> Result<C64> {
        if x.len() != self.n {
            return Err(EvalError::domain(format!("point has {} coordinates, expected {}", x.len(), self.n)));
        }
        let pq = base.pq();
        let mut acc = C64::new(1.0, 0.0);
        for f in &self.factors {
            let z = monomial(x, &f.m, f.sigma, pq);
            let g = if f.eps > 0 {
                ell_gamma(z, base, policy)?.value
            } else {
                ell_gamma_recip(z, base, policy)?.value
            };
            acc *= g.powi(f.eps.unsigned_abs() as i32);
        }
        Ok(acc)
    }
}

/// `(pq)^σ ∏ x_l^{m_l}`.
pub fn monomial(x: &[C64], m: &[i64], sigma: i64, pq: C64) -> C64 {
    let mut v = if sigma == 0 { C64::new(1.0, 0.0) } else { pq.powi(sigma as i32) };
    for (xi, &e) in x.iter().zip(m) {
        if e != 0 {
            v *= xi.powi(e as i32);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_validation() {
        let t = TermSpec::new(
            2,
            vec![Factor::new(vec![1, 0], 1), Factor::with_sigma(vec![1, -1], -1, 1)],
            vec![Constraint {
                exps: vec![1, 1],
                pq_power: 1,
                solve_for: 1,
            }],
        )
        .unwrap();
        let back = TermSpec::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
        let bare = TermSpec::from_json(r#"{"n":1,"factors":[{"m":[1],"eps":1}]}"#).unwrap();
        assert_eq!(bare.factors[0].sigma, 0);
        assert!(TermSpec::from_json(r#"{"n":1,"factors":[{"m":[1],"eps":0}]}"#).is_err());
        assert!(TermSpec::from_json(r#"{"n":2,"factors":[{"m":[1],"eps":1}]}"#).is_err());
        assert!(TermSpec::from_json("not json").is_err());
    }

    #[test]
    fn constraint_solving() {
        let t = TermSpec::new(
            3,
            vec![Factor::new(vec![1, 0, 0], 1)],
            vec![Constraint {
                exps: vec![1, -1, 1],
                pq_power: 2,
                solve_for: 1,
            }],
        )
        .unwrap();
        let pq = C64::new(0.02, 0.01);
        let mut x = vec![C64::new(0.5, 0.2), C64::new(9.0, 9.0), C64::new(-0.3, 0.6)];
        t.complete_point(&mut x, pq).unwrap();
        assert!(t.constraint_residual(&x, pq) < 1e-14);
        assert_eq!(t.free_variables(), vec![0, 2]);
    }

    #[test]
    fn designated_variable_must_be_private() {
        let e = TermSpec::new(
            2,
            vec![],
            vec![
                Constraint {
                    exps: vec![1, 1],
                    pq_power: 0,
                    solve_for: 0,
                },
                Constraint {
                    exps: vec![1, 1],
                    pq_power: 0,
                    solve_for: 1,
                },
            ],
        );
        assert!(e.is_err());
    }
}
