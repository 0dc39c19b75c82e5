//! Truncated infinite products with rigorous tail control.
//!
//! For `∏_{j≥J} (1 − a_j)` with `|a_j| ≤ a |q|^{j−J}` and `a < 1` the
//! logarithm of the omitted tail is bounded by `a / ((1 − |q|)(1 − a))`.

use crate::error::{EvalError, Result};
use crate::params::{TruncationPolicy, C64};

/// Factors within this distance of zero are treated as exact lattice zeros.
pub const ZERO_SNAP: f64 = 1e-13;

/// A truncated product value together with the bound on `|log(tail)|`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Truncated {
    pub value: C64,
    pub log_tail: f64,
    /// Index of the first factor that snapped to zero, if any.
    pub zero_at: Option<usize>,
}

impl Truncated {
    pub fn rel_error(&self) -> f64 {
        self.log_tail.exp_m1()
    }
}

#[inline]
pub(crate) fn tail_bound(a: f64, ratio: f64) -> f64 {
    a / ((1.0 - ratio) * (1.0 - a))
}

/// `(x; q)_∞` for `|q| < 1`. Snaps factors within `snap` of zero.
pub(crate) fn pochhammer_inf(x: C64, q: C64, policy: &TruncationPolicy, snap: f64) -> Result<Truncated> {
    let qa = q.norm();
    debug_assert!(qa < 1.0);
    let cutoff = policy.tol * (1.0 - qa) / 4.0;
    let mut acc = ScaledProduct::one();
    let mut pow = x;
    let mut zero_at = None;
    for j in 0..policy.max_terms {
        let a = pow.norm();
        if a < cutoff {
            let log_tail = tail_bound(a, qa);
            return Ok(Truncated {
                value: if zero_at.is_some() { C64::new(0.0, 0.0) } else { acc.value() },
                log_tail,
                zero_at,
            });
        }
        let f = C64::new(1.0, 0.0) - pow;
        if f.norm() < snap {
            zero_at.get_or_insert(j);
        } else {
            acc.mul(f);
        }
        pow *= q;
    }
    Err(EvalError::nonconvergence(format!(
        "({x}; {q})_∞ needs more than {} factors for tol {:e}",
        policy.max_terms, policy.tol
    )))
}

/// Running complex product with a separate binary exponent, so long products
/// of large and small factors neither overflow nor underflow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledProduct {
    mant: C64,
    exp2: i32,
}

const RESCALE_HI: f64 = 1e150;
const RESCALE_LO: f64 = 1e-150;

impl ScaledProduct {
    pub fn one() -> Self {
        ScaledProduct {
            mant: C64::new(1.0, 0.0),
            exp2: 0,
        }
    }

    #[inline]
    pub fn mul(&mut self, f: C64) {
        self.mant *= f;
        let n = self.mant.norm_sqr();
        if !(RESCALE_LO..=RESCALE_HI).contains(&n) {
            self.rescale();
        }
    }

    fn rescale(&mut self) {
        let n = self.mant.norm();
        if n == 0.0 || !n.is_finite() {
            return;
        }
        let e = n.log2().round() as i32;
        self.mant *= 2f64.powi(-e);
        self.exp2 += e;
    }

    pub fn combine(&mut self, other: &ScaledProduct, invert: bool) {
        if invert {
            self.mant /= other.mant;
            self.exp2 -= other.exp2;
        } else {
            self.mant *= other.mant;
            self.exp2 += other.exp2;
        }
        self.rescale();
    }

    pub fn value(&self) -> C64 {
        // split the scaling so intermediate powers stay representable
        let half = self.exp2 / 2;
        self.mant * 2f64.powi(half) * 2f64.powi(self.exp2 - half)
    }
}
