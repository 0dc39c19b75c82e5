//! Parameter types: nome pairs, period triples and the truncation policy.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};

pub type C64 = Complex64;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `e^{2πi x}`.
#[inline]
pub fn cexp2pi(x: C64) -> C64 {
    (C64::new(0.0, TWO_PI) * x).exp()
}

/// Lattice scan bound and tolerance for the incommensurability guard.
pub const LATTICE_SCAN: i32 = 8;
pub const LATTICE_GUARD_TOL: f64 = 1e-10;

/// Which product representation applies to the `q` nome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `|q| < 1`.
    Standard,
    /// `|q| > 1`; elliptic gamma values come from the inverted-nome formula.
    InvertedQ,
}

/// The two nomes `p`, `q` of an elliptic object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasePair {
    p: C64,
    q: C64,
    regime: Regime,
}

impl BasePair {
    /// Validates `0 ≤ |p| < 1`, `q ≠ 0`, `|q| ≠ 1`.
    pub fn new(p: C64, q: C64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(EvalError::domain(format!("non-finite nome (p={p}, q={q})")));
        }
        if p.norm() >= 1.0 {
            return Err(EvalError::domain_at(
                format!("|p| = {} violates |p| < 1", p.norm()),
                p,
            ));
        }
        if q == C64::new(0.0, 0.0) {
            return Err(EvalError::domain_at("q = 0 is not a valid nome", q));
        }
        let qa = q.norm();
        if (qa - 1.0).abs() < 1e-14 {
            return Err(EvalError::domain_at(
                format!("|q| = {qa} lies on the unit circle; no product representation"),
                q,
            ));
        }
        let regime = if qa < 1.0 {
            Regime::Standard
        } else {
            Regime::InvertedQ
        };
        Ok(BasePair { p, q, regime })
    }

    pub fn real(p: f64, q: f64) -> Result<Self> {
        Self::new(C64::new(p, 0.0), C64::new(q, 0.0))
    }

    pub fn p(&self) -> C64 {
        self.p
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn pq(&self) -> C64 {
        self.p * self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The pair with the roles of `p` and `q` exchanged. Requires `|q| < 1`
    /// and `p ≠ 0`.
    pub fn swapped(&self) -> Result<Self> {
        BasePair::new(self.q, self.p)
    }

    /// Both nomes inside the unit disc, as needed by theta kernels built on
    /// either nome.
    pub fn require_standard(&self) -> Result<()> {
        match self.regime {
            Regime::Standard => Ok(()),
            Regime::InvertedQ => Err(EvalError::domain_at(
                format!("|q| = {} violates |q| < 1", self.q.norm()),
                self.q,
            )),
        }
    }
}

/// Quasi-periods `ω1, ω2, ω3` with all derived moduli and nomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaTriple {
    pub omega: [C64; 3],
    /// `ω1/ω2`.
    pub tau1: C64,
    /// `ω3/ω2`.
    pub tau2: C64,
    /// `ω3/ω1`, stored as `tau2 / tau1`.
    pub tau3: C64,
    pub q: C64,
    pub p: C64,
    pub r: C64,
    pub q_tilde: C64,
    pub p_tilde: C64,
    pub r_tilde: C64,
}

impl OmegaTriple {
    pub fn new(w1: C64, w2: C64, w3: C64) -> Result<Self> {
        let zero = C64::new(0.0, 0.0);
        for (k, w) in [w1, w2, w3].iter().enumerate() {
            if *w == zero || !w.is_finite() {
                return Err(EvalError::domain(format!("quasi-period ω{} = {w} must be finite and nonzero", k + 1)));
            }
        }
        let tau1 = w1 / w2;
        let tau2 = w3 / w2;
        let tau3 = tau2 / tau1;
        let triple = OmegaTriple {
            omega: [w1, w2, w3],
            tau1,
            tau2,
            tau3,
            q: cexp2pi(tau1),
            p: cexp2pi(tau2),
            r: cexp2pi(tau3),
            q_tilde: cexp2pi(-tau1.inv()),
            p_tilde: cexp2pi(-tau2.inv()),
            r_tilde: cexp2pi(-tau3.inv()),
        };
        if let Some((n, m, d)) = triple.lattice_coincidence() {
            return Err(EvalError::degenerate(format!(
                "p^{n} = q^{m} to within {d:.3e} (guard {LATTICE_GUARD_TOL:e}); periods are commensurate"
            )));
        }
        Ok(triple)
    }

    /// First `(n, m)` with `|n|,|m| ≤ 8`, not both zero, such that
    /// `|p^n/q^m − 1|` falls below the guard tolerance.
    fn lattice_coincidence(&self) -> Option<(i32, i32, f64)> {
        for n in -LATTICE_SCAN..=LATTICE_SCAN {
            for m in -LATTICE_SCAN..=LATTICE_SCAN {
                if n == 0 && m == 0 {
                    continue;
                }
                // p^n / q^m = e^{2πi (n τ2 − m τ1)}
                let x = self.tau2 * n as f64 - self.tau1 * m as f64;
                let d = (cexp2pi(x) - 1.0).norm();
                if d < LATTICE_GUARD_TOL {
                    return Some((n, m, d));
                }
            }
        }
        None
    }

    pub fn sum(&self) -> C64 {
        self.omega[0] + self.omega[1] + self.omega[2]
    }

    /// `q̃` recomputed from the periods directly, `e^{−2πi ω2/ω1}`.
    pub fn q_tilde_direct(&self) -> C64 {
        cexp2pi(-self.omega[1] / self.omega[0])
    }

    /// The `(p, q)` pair of the triple.
    pub fn base_pq(&self) -> Result<BasePair> {
        BasePair::new(self.p, self.q)
    }
}

/// Accuracy contract for every truncated product and sum.
///
/// `tol` is a relative bound: the omitted tail of a product changes its value
/// by a factor within `1 ± tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub tol: f64,
    pub max_terms: usize,
}

impl TruncationPolicy {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(EvalError::domain(format!("tol = {tol} must be positive")));
        }
        if max_terms < 8 {
            return Err(EvalError::domain(format!("max_terms = {max_terms} must be at least 8")));
        }
        Ok(TruncationPolicy { tol, max_terms })
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tol: 1e-15,
            max_terms: 4000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn base_pair_regimes() {
        let b = BasePair::real(0.1, 0.2).unwrap();
        assert_eq!(b.regime(), Regime::Standard);
        let b = BasePair::real(0.0, 0.5).unwrap();
        assert_eq!(b.p(), c(0.0, 0.0));
        let b = BasePair::real(0.1, 2.0).unwrap();
        assert_eq!(b.regime(), Regime::InvertedQ);
        assert!(b.require_standard().is_err());
    }

    #[test]
    fn base_pair_rejections() {
        let e = BasePair::real(1.2, 0.3).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DomainViolation);
        assert!(e.detail.contains("1.2"));
        assert_eq!(BasePair::real(0.1, 0.0).unwrap_err().kind, crate::ErrorKind::DomainViolation);
        assert!(BasePair::new(c(0.1, 0.0), c(0.0, 1.0)).is_err());
    }

    #[test]
    fn omega_triple_moduli() {
        // (1, 2+i, 3i): ω1/ω2 = (2 − i)/5 gives |q| = e^{2π/5} > 1, and
        // τ2 + 6τ1 = 3 makes p q^6 = 1 exactly, so the lattice is commensurate.
        let e = OmegaTriple::new(c(1.0, 0.0), c(2.0, 1.0), c(0.0, 3.0)).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DegenerateLattice);
        let q = cexp2pi(c(1.0, 0.0) / c(2.0, 1.0));
        assert!((q.norm() - (TWO_PI / 5.0).exp()).abs() < 1e-12);

        let t = OmegaTriple::new(c(0.3, 1.0), c(1.0, 0.0), c(-0.6, 1.1)).unwrap();
        assert!(t.q.norm() < 1.0 && t.p.norm() < 1.0);
        assert!((t.q.norm() - (-TWO_PI).exp()).abs() < 1e-15);
        assert!((t.tau3 - t.tau2 / t.tau1).norm() == 0.0);
        assert!((t.tau3 - t.omega[2] / t.omega[0]).norm() < 1e-14);
    }

    #[test]
    fn omega_triple_degenerate() {
        let e = OmegaTriple::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DegenerateLattice);
        let e = OmegaTriple::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DomainViolation);
        // ω3 = 2 ω1 + ω2 in a (1, 1+i) frame: p = q^2
        let e = OmegaTriple::new(c(0.3, 1.0), c(1.0, 0.0), c(1.6, 2.0)).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::DegenerateLattice);
    }

    #[test]
    fn q_tilde_two_ways() {
        let t = OmegaTriple::new(c(0.3, 1.0), c(1.0, 0.0), c(-0.6, 1.1)).unwrap();
        let rel = (t.q_tilde - t.q_tilde_direct()).norm() / t.q_tilde.norm();
        assert!(rel < 1e-13, "{rel}");
        // log q / 2πi recovers τ1 modulo 1
        let back = t.q.ln() / C64::new(0.0, TWO_PI);
        let d = back - t.tau1;
        assert!((d.re - d.re.round()).abs() < 1e-13 && d.im.abs() < 1e-13);
    }

    #[test]
    fn truncation_policy_bounds() {
        assert!(TruncationPolicy::new(0.0, 100).is_err());
        assert!(TruncationPolicy::new(1e-12, 4).is_err());
        assert!(TruncationPolicy::new(1e-12, 8).is_ok());
    }
}
