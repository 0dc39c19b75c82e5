//! Seeded admissible parameter sets for the integral identities.
//!
//! Every generator keeps parameter moduli (and, where a dual side exists,
//! the dual moduli) at most [`EDGE`], well clear of the default pole
//! screening margin.

use rand::seq::index::sample;
use rand::Rng;

use crate::integrals::{AParams, BcParams, BetaParams, VParams};
use crate::params::{BasePair, C64};
use crate::sample::{balanced, polar, SeedRng};

pub const EDGE: f64 = 0.85;
const TRIES: usize = 4000;

fn base_in(rng: &mut SeedRng, lo: f64, hi: f64) -> BasePair {
    loop {
        if let Ok(b) = BasePair::new(polar(rng, lo, hi), polar(rng, lo, hi)) {
            return b;
        }
    }
}

fn base_split(rng: &mut SeedRng, p: (f64, f64), q: (f64, f64)) -> BasePair {
    loop {
        if let Ok(b) = BasePair::new(polar(rng, p.0, p.1), polar(rng, q.0, q.1)) {
            return b;
        }
    }
}

/// Beta parameters with `|p|, |q| ≤ 0.3` and all six `|t_j| ≤ 0.85`.
pub fn beta_case(rng: &mut SeedRng) -> BetaParams {
    loop {
        let b = base_in(rng, 0.05, 0.3);
        let Some(t) = balanced(rng, 6, b.pq(), 0.2, EDGE, TRIES) else {
            continue;
        };
        if let Ok(params) = BetaParams::from_free([t[0], t[1], t[2], t[3], t[4]], b) {
            if params.t[5].norm() <= EDGE + 1e-12 {
                return params;
            }
        }
    }
}

/// V parameters with `t_7 t_8 = pq`.
pub fn v_reduction_case(rng: &mut SeedRng) -> VParams {
    loop {
        let b = base_in(rng, 0.05, 0.3);
        let Some(t6) = balanced(rng, 6, b.pq(), 0.2, EDGE, TRIES) else {
            continue;
        };
        let t7 = b.pq().sqrt() * polar(rng, 0.8, 1.25);
        let t8 = b.pq() / t7;
        let mut t = [C64::new(0.0, 0.0); 8];
        t[..6].copy_from_slice(&t6);
        t[6] = t7;
        t[7] = t8;
        if t.iter().all(|v| v.norm() <= EDGE) {
            if let Ok(v) = VParams::new(t, b) {
                return v;
            }
        }
    }
}

/// BC parameters whose dual set `√(pq)/t` is admissible as well.
pub fn trafo_bc_case(rng: &mut SeedRng, n: usize, m: usize) -> BcParams {
    loop {
        let b = base_in(rng, 0.08, 0.25);
        let lo = b.pq().norm().sqrt() / EDGE;
        let target = b.pq().powi(m as i32 + 1);
        let Some(t) = balanced(rng, BcParams::count(n, m), target, lo, EDGE, TRIES) else {
            continue;
        };
        if let Ok(p) = BcParams::new(n, m, t, b) {
            return p;
        }
    }
}

/// A_n parameters whose dual sets `S^{1/(m+1)}/s`, `T^{1/(m+1)}/t`
/// (principal roots) are admissible as well.
pub fn trafo_a_case(rng: &mut SeedRng, n: usize, m: usize) -> AParams {
    let k = AParams::count(n, m);
    loop {
        let b = base_in(rng, 0.08, 0.25);
        let sigma = b.pq().sqrt() * C64::from_polar(rng.gen_range(0.85..1.15), rng.gen_range(-0.3..0.3));
        let tau = b.pq() / sigma;
        let big_s = sigma.powi(m as i32 + 1);
        let big_t = tau.powi(m as i32 + 1);
        let Some(s) = balanced(rng, k, big_s, sigma.norm() / EDGE, EDGE, TRIES) else {
            continue;
        };
        let Some(t) = balanced(rng, k, big_t, tau.norm() / EDGE, EDGE, TRIES) else {
            continue;
        };
        let Ok(p) = AParams::new(n, m, s, t, b) else {
            continue;
        };
        let (sr, tr) = p.roots();
        let dual_ok = p.s.iter().all(|v| (sr / v).norm() <= EDGE) && p.t.iter().all(|v| (tr / v).norm() <= EDGE);
        if dual_ok {
            return p;
        }
    }
}

/// Parameters balanced to `(pq)^m p` with an `(n+2)`-subset of indices.
pub fn recurrence_i_case(rng: &mut SeedRng, n: usize, m: usize) -> (BasePair, Vec<C64>, Vec<usize>) {
    let k = BcParams::count(n, m);
    loop {
        let b = base_in(rng, 0.08, 0.25);
        let target = b.pq().powi(m as i32) * b.p();
        let Some(t) = balanced(rng, k, target, 0.15, EDGE, TRIES) else {
            continue;
        };
        let set = sample(rng, k, n + 2).into_vec();
        return (b, t, set);
    }
}

/// Parameters balanced to `(pq)^{m+1} q` with an `(m+2)`-subset `K` of
/// indices whose entries satisfy `|t_k| ≤ 0.85 |q|`, so `t_k/q` stays
/// admissible.
pub fn recurrence_ii_case(rng: &mut SeedRng, n: usize, m: usize) -> (BasePair, Vec<C64>, Vec<usize>) {
    let k = BcParams::count(n, m);
    loop {
        let b = base_split(rng, (0.05, 0.15), (0.25, 0.35));
        let set = sample(rng, k, m + 2).into_vec();
        let small: Vec<C64> = (0..m + 2).map(|_| b.q() * polar(rng, 0.55, EDGE)).collect();
        let target = b.pq().powi(m as i32 + 1) * b.q() / small.iter().product::<C64>();
        let Some(rest) = balanced(rng, k - (m + 2), target, 0.15, EDGE, TRIES) else {
            continue;
        };
        let mut t = vec![C64::new(0.0, 0.0); k];
        let mut rest = rest.into_iter();
        for (j, slot) in t.iter_mut().enumerate() {
            *slot = match set.iter().position(|&i| i == j) {
                Some(a) => small[a],
                None => rest.next().expect("length matches"),
            };
        }
        return (b, t, set);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng;

    #[test]
    fn generators_respect_bounds() {
        let mut g = rng(5);
        let beta = beta_case(&mut g);
        assert!(beta.t.iter().all(|t| t.norm() <= EDGE + 1e-12));
        let a = trafo_a_case(&mut g, 1, 1);
        assert_eq!(a.s.len(), 4);
        let bc = trafo_bc_case(&mut g, 2, 0);
        let rt = bc.base.pq().sqrt();
        assert!(bc.t.iter().all(|t| t.norm() <= EDGE && (rt / t).norm() <= EDGE + 1e-12));
        let (b, t, set) = recurrence_ii_case(&mut g, 1, 1);
        let target = b.pq().powi(2) * b.q();
        assert!((t.iter().product::<C64>() / target - 1.0).norm() < 1e-12);
        assert!(set.iter().all(|&k| (t[k] / b.q()).norm() <= EDGE + 1e-12));
    }
}
