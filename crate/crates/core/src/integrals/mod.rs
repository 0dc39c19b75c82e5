//! The elliptic beta integral, the V-function and the type-I BC_n and A_n
//! integrals, computed as normalized torus means of their kernels.

pub mod kernel;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::gamma::{ell_gamma, qpoch_inf};
use crate::params::{BasePair, TruncationPolicy, C64};
use crate::quad::{integrate_torus, QuadOptions, QuadratureResult};
pub use kernel::{GammaKernel, KernelFactor};
pub use verify::{
    verify_kernel_qdiff, verify_kernel_qdiff_partner, verify_recurrence_i, verify_recurrence_ii, verify_trafo_a,
    verify_trafo_bc,
};

/// Largest rank accepted by the library; the CLI applies a tighter cap.
pub const MAX_RANK: usize = 3;
/// Relative slack allowed when checking a supplied balancing condition.
pub const BALANCE_TOL: f64 = 1e-10;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn check_inside(name: &str, v: &[C64]) -> Result<()> {
    for (j, t) in v.iter().enumerate() {
        if !(t.norm() < 1.0) || *t == C64::new(0.0, 0.0) {
            return Err(EvalError::domain_at(
                format!("|{name}{}| = {} violates 0 < |{name}| < 1", j + 1, t.norm()),
                *t,
            ));
        }
    }
    Ok(())
}

fn check_balance(what: &str, prod: C64, target: C64) -> Result<()> {
    let r = (prod / target - 1.0).norm();
    if r > BALANCE_TOL {
        return Err(EvalError::domain(format!(
            "{what}: product {prod} differs from the balancing value {target} (relative {r:.2e})"
        )));
    }
    Ok(())
}

fn prod(v: &[C64]) -> C64 {
    v.iter().product()
}

/// `(p;p)_∞ (q;q)_∞`.
pub fn pq_pochhammers(base: &BasePair, policy: &TruncationPolicy) -> Result<C64> {
    base.require_standard()?;
    let pp = qpoch_inf(base.p(), base.p(), policy)?.value;
    let qq = qpoch_inf(base.q(), base.q(), policy)?.value;
    Ok(pp * qq)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub t: [C64; 6],
    pub base: BasePair,
}

impl BetaParams {
    /// `t_6 = pq / (t_1 ⋯ t_5)`.
    pub fn from_free(t: [C64; 5], base: BasePair) -> Result<Self> {
        let t6 = base.pq() / prod(&t);
        let full = [t[0], t[1], t[2], t[3], t[4], t6];
        check_inside("t", &full)?;
        Ok(BetaParams { t: full, base })
    }

    pub fn free(&self) -> [C64; 5] {
        [self.t[0], self.t[1], self.t[2], self.t[3], self.t[4]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VParams {
    pub t: [C64; 8],
    pub base: BasePair,
}

impl VParams {
    pub fn new(t: [C64; 8], base: BasePair) -> Result<Self> {
        check_inside("t", &t)?;
        check_balance("V parameters", prod(&t), base.pq() * base.pq())?;
        Ok(VParams { t, base })
    }

    /// `t_8 = (pq)² / (t_1 ⋯ t_7)`.
    pub fn from_free(t: [C64; 7], base: BasePair) -> Result<Self> {
        let t8 = base.pq() * base.pq() / prod(&t);
        let mut full = [C64::new(0.0, 0.0); 8];
        full[..7].copy_from_slice(&t);
        full[7] = t8;
        VParams::new(full, base)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BcParams {
    pub n: usize,
    pub m: usize,
    pub t: Vec<C64>,
    pub base: BasePair,
}

impl BcParams {
    pub fn count(n: usize, m: usize) -> usize {
        2 * n + 2 * m + 4
    }

    /// Full parameter list with `∏ t = (pq)^{m+1}` checked.
    pub fn new(n: usize, m: usize, t: Vec<C64>, base: BasePair) -> Result<Self> {
        if n > MAX_RANK {
            return Err(EvalError::domain(format!("rank n = {n} exceeds {MAX_RANK}")));
        }
        if t.len() != Self::count(n, m) {
            return Err(EvalError::domain(format!(
                "BC_{n} with m = {m} needs {} parameters, got {}",
                Self::count(n, m),
                t.len()
            )));
        }
        check_inside("t", &t)?;
        check_balance("BC parameters", prod(&t), base.pq().powi(m as i32 + 1))?;
        Ok(BcParams { n, m, t, base })
    }

    /// Last parameter solved from the balancing condition.
    pub fn from_free(n: usize, m: usize, free: &[C64], base: BasePair) -> Result<Self> {
        if free.len() + 1 != Self::count(n, m) {
            return Err(EvalError::domain(format!(
                "BC_{n} with m = {m} needs {} free parameters, got {}",
                Self::count(n, m) - 1,
                free.len()
            )));
        }
        let mut t = free.to_vec();
        t.push(base.pq().powi(m as i32 + 1) / prod(free));
        Self::new(n, m, t, base)
    }

    /// `κ_n (2πi)^n = (p;p)^n (q;q)^n / (2^n n!)`.
    pub fn normalization(&self, policy: &TruncationPolicy) -> Result<C64> {
        let n = self.n as i32;
        Ok(pq_pochhammers(&self.base, policy)?.powi(n) / (2f64.powi(n) * factorial(self.n)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AParams {
    pub n: usize,
    pub m: usize,
    pub s: Vec<C64>,
    pub t: Vec<C64>,
    pub base: BasePair,
}

impl AParams {
    pub fn count(n: usize, m: usize) -> usize {
        n + m + 2
    }

    pub fn new(n: usize, m: usize, s: Vec<C64>, t: Vec<C64>, base: BasePair) -> Result<Self> {
        if n > MAX_RANK {
            return Err(EvalError::domain(format!("rank n = {n} exceeds {MAX_RANK}")));
        }
        let k = Self::count(n, m);
        if s.len() != k || t.len() != k {
            return Err(EvalError::domain(format!(
                "A_{n} with m = {m} needs {k} s and {k} t parameters, got {} and {}",
                s.len(),
                t.len()
            )));
        }
        check_inside("s", &s)?;
        check_inside("t", &t)?;
        check_balance("A parameters", prod(&s) * prod(&t), base.pq().powi(m as i32 + 1))?;
        Ok(AParams { n, m, s, t, base })
    }

    /// `t_{n+m+2}` solved from `S T = (pq)^{m+1}`.
    pub fn from_free(n: usize, m: usize, s: Vec<C64>, t_free: &[C64], base: BasePair) -> Result<Self> {
        let mut t = t_free.to_vec();
        t.push(base.pq().powi(m as i32 + 1) / (prod(&s) * prod(t_free)));
        Self::new(n, m, s, t, base)
    }

    pub fn big_s(&self) -> C64 {
        prod(&self.s)
    }

    pub fn big_t(&self) -> C64 {
        prod(&self.t)
    }

    /// `(S^{1/(m+1)}, T^{1/(m+1)})`: principal root of `T`, and the root of
    /// `S` fixed by `S^{1/(m+1)} T^{1/(m+1)} = pq`.
    pub fn roots(&self) -> (C64, C64) {
        let tr = self.big_t().powf(1.0 / (self.m as f64 + 1.0));
        (self.base.pq() / tr, tr)
    }

    /// `μ_n (2πi)^n = (p;p)^n (q;q)^n / (n+1)!`.
    pub fn normalization(&self, policy: &TruncationPolicy) -> Result<C64> {
        Ok(pq_pochhammers(&self.base, policy)?.powi(self.n as i32) / factorial(self.n + 1))
    }
}

fn unit(dim: usize, j: usize, v: i64) -> Vec<i64> {
    let mut m = vec![0; dim];
    m[j] = v;
    m
}

/// `Δ(x; t_1..t_5)` with `t_6` eliminated, scaled by `scale`.
pub fn beta_kernel(t: &[C64; 5], base: &BasePair, policy: &TruncationPolicy, scale: C64) -> Result<GammaKernel> {
    let a = prod(t);
    let mut f = Vec::with_capacity(29);
    for (j, &tj) in t.iter().enumerate() {
        f.push(KernelFactor::new(format!("t{} x", j + 1), tj, vec![1], 1));
        f.push(KernelFactor::new(format!("t{} / x", j + 1), tj, vec![-1], 1));
        f.push(KernelFactor::new(format!("A / t{}", j + 1), a / tj, vec![0], 1));
    }
    f.push(KernelFactor::new("x^2", one(), vec![2], -1));
    f.push(KernelFactor::new("x^-2", one(), vec![-2], -1));
    f.push(KernelFactor::new("A x", a, vec![1], -1));
    f.push(KernelFactor::new("A / x", a, vec![-1], -1));
    for i in 0..5 {
        for j in i + 1..5 {
            f.push(KernelFactor::new(format!("t{} t{}", i + 1, j + 1), t[i] * t[j], vec![0], -1));
        }
    }
    GammaKernel::new(1, *base, *policy, scale, f)
}

/// `Δ_n(z; t)` of the BC_n integral, scaled by `scale`.
pub fn bc_kernel(n: usize, t: &[C64], base: &BasePair, policy: &TruncationPolicy, scale: C64) -> Result<GammaKernel> {
    let mut f = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for a in [1, -1] {
                for b in [1, -1] {
                    let mut m = unit(n, i, a);
                    m[j] = b;
                    f.push(KernelFactor::new(format!("z{}^{a} z{}^{b}", i + 1, j + 1), one(), m, -1));
                }
            }
        }
    }
    for j in 0..n {
        for (r, &tr) in t.iter().enumerate() {
            f.push(KernelFactor::new(format!("t{} z{}", r + 1, j + 1), tr, unit(n, j, 1), 1));
            f.push(KernelFactor::new(format!("t{} / z{}", r + 1, j + 1), tr, unit(n, j, -1), 1));
        }
        f.push(KernelFactor::new(format!("z{}^2", j + 1), one(), unit(n, j, 2), -1));
        f.push(KernelFactor::new(format!("z{}^-2", j + 1), one(), unit(n, j, -2), -1));
    }
    GammaKernel::new(n, *base, *policy, scale, f)
}

/// `Δ_n(z; s, t)` of the A_n integral with `z_{n+1} = 1/(z_1 ⋯ z_n)`.
pub fn a_kernel(
    n: usize,
    s: &[C64],
    t: &[C64],
    base: &BasePair,
    policy: &TruncationPolicy,
    scale: C64,
) -> Result<GammaKernel> {
    // exponent vectors of z_1..z_{n+1} in the free variables
    let zvec = |j: usize| -> Vec<i64> {
        if j < n {
            unit(n, j, 1)
        } else {
            vec![-1; n]
        }
    };
    let neg = |v: Vec<i64>| -> Vec<i64> { v.into_iter().map(|x| -x).collect() };
    let sub = |a: Vec<i64>, b: Vec<i64>| -> Vec<i64> { a.into_iter().zip(b).map(|(x, y)| x - y).collect() };
    let mut f = Vec::new();
    for j in 0..=n {
        for k in j + 1..=n {
            f.push(KernelFactor::new(format!("z{} / z{}", j + 1, k + 1), one(), sub(zvec(j), zvec(k)), -1));
            f.push(KernelFactor::new(format!("z{} / z{}", k + 1, j + 1), one(), sub(zvec(k), zvec(j)), -1));
        }
    }
    for j in 0..=n {
        for (l, (&sl, &tl)) in s.iter().zip(t).enumerate() {
            f.push(KernelFactor::new(format!("s{} z{}", l + 1, j + 1), sl, zvec(j), 1));
            f.push(KernelFactor::new(format!("t{} / z{}", l + 1, j + 1), tl, neg(zvec(j)), 1));
        }
    }
    GammaKernel::new(n, *base, *policy, scale, f)
}

fn trivial() -> QuadratureResult {
    QuadratureResult {
        value: one(),
        err_est: 0.0,
        n: 0,
        evaluations: 0,
        trace: Vec::new(),
    }
}

/// `κ ∫_T Δ(x; t) dx/x`, equal to 1.
pub fn elliptic_beta(params: &BetaParams, opts: &QuadOptions, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    let scale = pq_pochhammers(&params.base, policy)? / 2.0;
    let k = beta_kernel(&params.free(), &params.base, policy, scale)?;
    integrate_torus(&k, opts)
}

/// `V(t_1, …, t_8)`.
pub fn v_function(params: &VParams, opts: &QuadOptions, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    let scale = pq_pochhammers(&params.base, policy)? / 2.0;
    let k = bc_kernel(1, &params.t, &params.base, policy, scale)?;
    integrate_torus(&k, opts)
}

/// `I_n^{(m)}(t)` of type BC_n; `n = 0` gives 1.
pub fn i_bc(params: &BcParams, opts: &QuadOptions, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    if params.n == 0 {
        return Ok(trivial());
    }
    let k = bc_kernel(params.n, &params.t, &params.base, policy, params.normalization(policy)?)?;
    integrate_torus(&k, opts)
}

/// `I_n^{(m)}(s; t)` of type A_n. For `n = 0` the constraint forces
/// `z_1 = 1`, leaving `∏_l Γ(s_l) Γ(t_l)`.
pub fn i_a(params: &AParams, opts: &QuadOptions, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    if params.n == 0 {
        let mut r = trivial();
        for v in params.s.iter().chain(&params.t) {
            r.value *= ell_gamma(*v, &params.base, policy)?.value;
        }
        return Ok(r);
    }
    let k = a_kernel(params.n, &params.s, &params.t, &params.base, policy, params.normalization(policy)?)?;
    integrate_torus(&k, opts)
}
