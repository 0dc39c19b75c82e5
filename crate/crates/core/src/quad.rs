//! Equal-weight trapezoid quadrature on the torus `T^n`, `n ≤ 3`.
//!
//! The measure is `∏ dz_j/(2πi z_j)`, i.e. the mean over phases. Nodes sit
//! at `φ_k = 2π(k + ½)/N`; the grid doubles until two successive levels
//! agree. Node values are computed in parallel and reduced with a fixed
//! pairwise tree, so serial and parallel runs agree bit for bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::params::{C64, TWO_PI};

/// `c · z^m` must stay away from `|·| = 1` on the torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleCondition {
    pub label: String,
    /// Monomial in the integration variables.
    pub m: Vec<i64>,
    /// Modulus of the coefficient of the first pole family hit as the
    /// coefficient grows (for `Γ(c z^m)` this is `|c|`, for `1/Γ(c z^m)`
    /// it is `|pq/c|`). A pole reaches the torus when it exceeds 1.
    pub modulus: f64,
}

pub const SCREEN_MARGIN: f64 = 0.02;

/// An integrand `f(z) = coupled(z) ∏_j separable(j, z_j)`; the separable
/// part is evaluated once per axis node and grid level.
pub trait TorusIntegrand: Sync {
    fn dim(&self) -> usize;

    fn coupled(&self, z: &[C64]) -> Result<C64>;

    fn separable(&self, _axis: usize, _z: C64) -> Result<C64> {
        Ok(C64::new(1.0, 0.0))
    }

    fn poles(&self) -> Vec<PoleCondition> {
        Vec::new()
    }
}

/// Integrand given by a closure of the full point.
pub struct FnIntegrand<F> {
    dim: usize,
    f: F,
    poles: Vec<PoleCondition>,
}

impl<F: Fn(&[C64]) -> C64 + Sync> FnIntegrand<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnIntegrand {
            dim,
            f,
            poles: Vec::new(),
        }
    }

    pub fn with_poles(mut self, poles: Vec<PoleCondition>) -> Self {
        self.poles = poles;
        self
    }
}

impl<F: Fn(&[C64]) -> C64 + Sync> TorusIntegrand for FnIntegrand<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn coupled(&self, z: &[C64]) -> Result<C64> {
        Ok((self.f)(z))
    }

    fn poles(&self) -> Vec<PoleCondition> {
        self.poles.clone()
    }
}

/// Declared conditions within `margin` of the torus.
pub fn screen_poles(f: &dyn TorusIntegrand, margin: f64) -> Vec<PoleCondition> {
    f.poles().into_iter().filter(|c| c.modulus > 1.0 - margin).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub tol: f64,
    /// Compare `|I_{2N} − I_N|` against `tol · |I_{2N}|` instead of `tol`.
    pub relative: bool,
    pub n0: usize,
    /// `None` picks 4096, 512 or 128 points per axis for n = 1, 2, 3.
    pub nmax: Option<usize>,
    pub parallel: bool,
    pub margin: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-12,
            relative: false,
            n0: 8,
            nmax: None,
            parallel: true,
            margin: SCREEN_MARGIN,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            tol,
            ..Default::default()
        }
    }
}

pub fn default_nmax(dim: usize) -> usize {
    match dim {
        0 | 1 => 4096,
        2 => 512,
        _ => 128,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: C64,
    /// `|I_{2N} − I_N|` at the last comparison.
    pub err_est: f64,
    /// Points per axis of the returned level.
    pub n: usize,
    pub evaluations: u64,
    /// `(N, I_N)` for every level computed.
    pub trace: Vec<(usize, C64)>,
}

impl QuadratureResult {
    /// `|I_{N_k} − I_{N_{k−1}}|` with the finer level `N_k`.
    pub fn differences(&self) -> Vec<(usize, f64)> {
        self.trace.windows(2).map(|w| (w[1].0, (w[1].1 - w[0].1).norm())).collect()
    }

    /// Ratios of successive differences from levels with `N ≥ n_min`,
    /// skipping differences below `floor` (already at rounding level).
    pub fn error_ratios(&self, n_min: usize, floor: f64) -> Vec<(usize, f64)> {
        let d = self.differences();
        d.windows(2)
            .filter(|w| w[0].0 >= n_min && w[0].1 > floor && w[1].1 > floor)
            .map(|w| (w[1].0, w[1].1 / w[0].1))
            .collect()
    }

    /// A rounding floor for [`error_ratios`](Self::error_ratios):
    /// `100 ε |I|`.
    pub fn noise_floor(&self) -> f64 {
        100.0 * f64::EPSILON * self.value.norm().max(1e-300)
    }
}

/// Pairwise sum over a fixed binary split; independent of thread count.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    match v.len() {
        0 => C64::new(0.0, 0.0),
        1 => v[0],
        n if n <= 8 => v.iter().fold(C64::new(0.0, 0.0), |a, b| a + b),
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn nodes(n: usize) -> Vec<C64> {
    (0..n).map(|k| C64::from_polar(1.0, TWO_PI * (k as f64 + 0.5) / n as f64)).collect()
}

fn collect<T: Send, F: Fn(usize) -> Result<T> + Sync + Send>(len: usize, parallel: bool, f: F) -> Result<Vec<T>> {
    if parallel {
        (0..len).into_par_iter().map(&f).collect()
    } else {
        (0..len).map(f).collect()
    }
}

/// Mean of `f` over the `N^dim` grid.
pub fn trapezoid_level(f: &dyn TorusIntegrand, n: usize, parallel: bool) -> Result<C64> {
    let dim = f.dim();
    if dim == 0 {
        return f.coupled(&[]);
    }
    let z = nodes(n);
    let axes: Vec<Vec<C64>> = (0..dim)
        .map(|a| collect(n, parallel, |k| f.separable(a, z[k])))
        .collect::<Result<_>>()?;
    let total = n.pow(dim as u32);
    let values = collect(total, parallel, |flat| {
        let mut idx = flat;
        let mut point = [C64::new(0.0, 0.0); 3];
        let mut sep = C64::new(1.0, 0.0);
        for a in (0..dim).rev() {
            let k = idx % n;
            idx /= n;
            point[a] = z[k];
            sep *= axes[a][k];
        }
        Ok(f.coupled(&point[..dim])? * sep)
    })?;
    Ok(pairwise_sum(&values) / total as f64)
}

/// Doubling trapezoid rule; returns `I_{2N}` once `|I_{2N} − I_N| < tol`.
pub fn integrate_torus(f: &dyn TorusIntegrand, opts: &QuadOptions) -> Result<QuadratureResult> {
    let dim = f.dim();
    if dim > 3 {
        return Err(EvalError::domain(format!("torus dimension {dim} exceeds 3")));
    }
    if !(opts.tol > 0.0) || opts.n0 == 0 {
        return Err(EvalError::domain("quadrature needs tol > 0 and N0 ≥ 1"));
    }
    if let Some(c) = screen_poles(f, opts.margin).first() {
        return Err(EvalError::pole(
            format!(
                "pole family {} comes within {} of the torus (modulus {:.6})",
                c.label, opts.margin, c.modulus
            ),
            C64::new(c.modulus, 0.0),
        ));
    }
    if dim == 0 {
        let v = f.coupled(&[])?;
        return Ok(QuadratureResult {
            value: v,
            err_est: 0.0,
            n: 1,
            evaluations: 1,
            trace: vec![(1, v)],
        });
    }
    let nmax = opts.nmax.unwrap_or_else(|| default_nmax(dim));
    let mut n = opts.n0;
    let mut evaluations = 0u64;
    let mut prev = trapezoid_level(f, n, opts.parallel)?;
    evaluations += n.pow(dim as u32) as u64;
    let mut trace = vec![(n, prev)];
    let mut err = f64::INFINITY;
    while 2 * n <= nmax {
        n *= 2;
        let next = trapezoid_level(f, n, opts.parallel)?;
        evaluations += n.pow(dim as u32) as u64;
        trace.push((n, next));
        err = (next - prev).norm();
        let target = if opts.relative { opts.tol * next.norm() } else { opts.tol };
        if err < target {
            return Ok(QuadratureResult {
                value: next,
                err_est: err,
                n,
                evaluations,
                trace,
            });
        }
        prev = next;
    }
    Err(EvalError::nonconvergence(format!(
        "trapezoid rule not converged at N = {n} per axis: |I_2N − I_N| = {err:.3e}, tol {:e}",
        opts.tol
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_and_characters() {
        let one = FnIntegrand::new(1, |_| c(1.0, 0.0));
        for n in [1, 3, 8, 17] {
            assert_eq!(trapezoid_level(&one, n, false).unwrap(), c(1.0, 0.0));
        }
        assert_eq!(integrate_torus(&one, &QuadOptions::default()).unwrap().value, c(1.0, 0.0));
        let cube = FnIntegrand::new(1, |z| z[0].powi(3));
        let r = integrate_torus(&cube, &QuadOptions::default()).unwrap();
        assert!(r.value.norm() < 1e-15);
    }

    #[test]
    fn cauchy_coefficient() {
        let f = FnIntegrand::new(1, |z| (1.0 - 0.5 * z[0]).inv());
        let v = trapezoid_level(&f, 64, false).unwrap();
        assert!((v - 1.0).norm() < 1e-13);
    }

    #[test]
    fn product_separates() {
        let g = |z: C64| (1.0 - 0.3 * z).inv() * (1.0 - 0.4 / z).inv() * (2.0 + z);
        let h = |z: C64| (z + 0.2 / z).exp();
        let two = FnIntegrand::new(2, |z| g(z[0]) * h(z[1]));
        let a = integrate_torus(&FnIntegrand::new(1, |z| g(z[0])), &QuadOptions::default()).unwrap().value;
        let b = integrate_torus(&FnIntegrand::new(1, |z| h(z[0])), &QuadOptions::default()).unwrap().value;
        let ab = integrate_torus(&two, &QuadOptions::default()).unwrap().value;
        assert!((ab - a * b).norm() < 1e-12);
    }

    #[test]
    fn parallel_matches_serial_bitwise() {
        let f = FnIntegrand::new(2, |z| (1.0 - 0.7 * z[0] * z[1]).inv() * (z[0] / z[1] + 0.1).sqrt());
        let a = trapezoid_level(&f, 64, true).unwrap();
        let b = trapezoid_level(&f, 64, false).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn screening() {
        let mk = |m: f64| PoleCondition {
            label: "t".into(),
            m: vec![1],
            modulus: m,
        };
        let f = FnIntegrand::new(1, |_| c(1.0, 0.0)).with_poles(vec![mk(0.8), mk(0.999)]);
        assert_eq!(screen_poles(&f, SCREEN_MARGIN).len(), 1);
        let e = integrate_torus(&f, &QuadOptions::default()).unwrap_err();
        assert_eq!(e.kind, crate::ErrorKind::PoleProximity);
        assert!(screen_poles(&FnIntegrand::new(1, |_| c(1.0, 0.0)), SCREEN_MARGIN).is_empty());
    }

    #[test]
    fn nonconvergence_reported() {
        let f = FnIntegrand::new(1, |z| (1.0 - 0.999 * z[0]).inv());
        let opts = QuadOptions {
            nmax: Some(64),
            ..QuadOptions::with_tol(1e-14)
        };
        assert_eq!(integrate_torus(&f, &opts).unwrap_err().kind, crate::ErrorKind::NonConvergence);
    }

    #[test]
    fn geometric_decay() {
        let f = FnIntegrand::new(1, |z| (1.0 - 0.8 * z[0]).inv() * (1.0 - 0.8 / z[0]).inv());
        let r = integrate_torus(&f, &QuadOptions::with_tol(1e-14)).unwrap();
        let ratios = r.error_ratios(32, r.noise_floor());
        assert!(!ratios.is_empty());
        assert!(ratios.iter().all(|&(_, q)| q < 0.5), "{ratios:?}");
    }
}
