//! Products of elliptic gamma functions `∏ Γ(c z^m)^ε` as torus integrands.

use crate::error::{EvalError, Result};
use crate::gamma::{ell_gamma, ell_gamma_recip};
use crate::params::{BasePair, TruncationPolicy, C64};
use crate::quad::{PoleCondition, TorusIntegrand};

#[derive(Debug, Clone)]
pub struct KernelFactor {
    pub label: String,
    pub c: C64,
    pub m: Vec<i64>,
    pub eps: i64,
}

impl KernelFactor {
    pub fn new(label: impl Into<String>, c: C64, m: Vec<i64>, eps: i64) -> Self {
        KernelFactor {
            label: label.into(),
            c,
            m,
            eps,
        }
    }
}

fn eval_factor(c: C64, m: &[i64], eps: i64, z: &[C64], base: &BasePair, policy: &TruncationPolicy) -> Result<C64> {
    let mut arg = c;
    for (zi, &e) in z.iter().zip(m) {
        if e != 0 {
            arg *= zi.powi(e as i32);
        }
    }
    let g = if eps > 0 {
        ell_gamma(arg, base, policy)?.value
    } else {
        ell_gamma_recip(arg, base, policy)?.value
    };
    Ok(g.powi(eps.unsigned_abs() as i32))
}

/// `scale · ∏_a Γ_{p,q}(c_a z^{m_a})^{ε_a}` split into a cached constant,
/// per-axis factors and coupled factors.
#[derive(Debug, Clone)]
pub struct GammaKernel {
    dim: usize,
    base: BasePair,
    policy: TruncationPolicy,
    constant: C64,
    axis: Vec<Vec<KernelFactor>>,
    coupled: Vec<KernelFactor>,
    poles: Vec<PoleCondition>,
}

impl GammaKernel {
    pub fn new(
        dim: usize,
        base: BasePair,
        policy: TruncationPolicy,
        scale: C64,
        factors: Vec<KernelFactor>,
    ) -> Result<Self> {
        let mut constant = scale;
        let mut axis = vec![Vec::new(); dim];
        let mut coupled = Vec::new();
        let mut poles = Vec::new();
        let pq = base.pq();
        for f in factors {
            if f.m.len() != dim {
                return Err(EvalError::domain(format!("kernel factor {} has the wrong dimension", f.label)));
            }
            let support: Vec<usize> = (0..dim).filter(|&j| f.m[j] != 0).collect();
            match support.len() {
                0 => constant *= eval_factor(f.c, &f.m, f.eps, &[], &base, &policy)?,
                n => {
                    let modulus = if f.eps > 0 { f.c.norm() } else { (pq / f.c).norm() };
                    poles.push(PoleCondition {
                        label: f.label.clone(),
                        m: f.m.clone(),
                        modulus,
                    });
                    if n == 1 {
                        axis[support[0]].push(f);
                    } else {
                        coupled.push(f);
                    }
                }
            }
        }
        Ok(GammaKernel {
            dim,
            base,
            policy,
            constant,
            axis,
            coupled,
            poles,
        })
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    /// Full kernel value at `z`.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        let mut v = self.coupled(z)?;
        for (a, &za) in z.iter().enumerate() {
            v *= self.separable(a, za)?;
        }
        Ok(v)
    }
}

impl TorusIntegrand for GammaKernel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn coupled(&self, z: &[C64]) -> Result<C64> {
        let mut v = self.constant;
        for f in &self.coupled {
            v *= eval_factor(f.c, &f.m, f.eps, z, &self.base, &self.policy)?;
        }
        Ok(v)
    }

    fn separable(&self, axis: usize, z: C64) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for f in &self.axis[axis] {
            // single-axis monomial: only the exponent on `axis` is nonzero
            let arg = f.c * z.powi(f.m[axis] as i32);
            let g = if f.eps > 0 {
                ell_gamma(arg, &self.base, &self.policy)?.value
            } else {
                ell_gamma_recip(arg, &self.base, &self.policy)?.value
            };
            v *= g.powi(f.eps.unsigned_abs() as i32);
        }
        Ok(v)
    }

    fn poles(&self) -> Vec<PoleCondition> {
        self.poles.clone()
    }
}
