//! Seeded generators for generic evaluation points and admissible parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::params::{OmegaTriple, C64};

pub type SeedRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Modulus uniform in `[lo, hi]`, phase uniform in `[0, 2π)`.
pub fn polar(rng: &mut SeedRng, lo: f64, hi: f64) -> C64 {
    let r = rng.gen_range(lo..=hi);
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, a)
}

pub fn polar_vec(rng: &mut SeedRng, len: usize, lo: f64, hi: f64) -> Vec<C64> {
    (0..len).map(|_| polar(rng, lo, hi)).collect()
}

/// A positive real nome in `[lo, hi]`.
pub fn real_nome(rng: &mut SeedRng, lo: f64, hi: f64) -> C64 {
    C64::new(rng.gen_range(lo..=hi), 0.0)
}

/// `k` values with moduli in `[lo, hi]` and product exactly `target`: the
/// first `k − 1` are drawn with log-moduli near the geometric mean, the
/// last is solved for. Draws whose solved value leaves `[lo, hi]` are
/// rejected; `None` after `tries` rejections.
pub fn balanced(rng: &mut SeedRng, k: usize, target: C64, lo: f64, hi: f64, tries: usize) -> Option<Vec<C64>> {
    assert!(k >= 1 && 0.0 < lo && lo < hi);
    let mean = target.norm().ln() / k as f64;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let width = (lhi - llo) / 2.0;
    let a = (mean - width).max(llo);
    let b = (mean + width).min(lhi);
    if a >= b {
        return None;
    }
    for _ in 0..tries {
        let mut v: Vec<C64> = (0..k - 1)
            .map(|_| C64::from_polar(rng.gen_range(a..=b).exp(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let last = target / v.iter().product::<C64>();
        if (lo..=hi).contains(&last.norm()) {
            v.push(last);
            return Some(v);
        }
    }
    None
}

/// `ω2 = 1`, `ω1 = a e^{iα}`, `ω3 = b e^{iβ}` with `0 < α < β < π`, so all
/// of `Im(ω1/ω2)`, `Im(ω3/ω2)`, `Im(ω3/ω1)` are positive and every nome of
/// the triple lies inside the unit disc. Triples with a nome above
/// `max_nome` are redrawn.
pub fn omega_triple(rng: &mut SeedRng, max_nome: f64) -> OmegaTriple {
    loop {
        let a = rng.gen_range(0.7..1.4);
        let b = rng.gen_range(0.7..1.4);
        let alpha: f64 = rng.gen_range(0.35..1.6);
        let beta = rng.gen_range(alpha + 0.35..(alpha + 1.6).min(2.9));
        if beta <= alpha + 0.35 {
            continue;
        }
        let w1 = C64::from_polar(a, alpha);
        let w3 = C64::from_polar(b, beta);
        let Ok(t) = OmegaTriple::new(w1, C64::new(1.0, 0.0), w3) else {
            continue;
        };
        let nomes = [t.p, t.q, t.r, t.p_tilde, t.q_tilde, t.r_tilde];
        if nomes.iter().all(|x| x.norm() <= max_nome) {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<C64> = polar_vec(&mut rng(7), 5, 0.4, 0.9);
        let b: Vec<C64> = polar_vec(&mut rng(7), 5, 0.4, 0.9);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.norm() >= 0.4 - 1e-15 && z.norm() <= 0.9 + 1e-15));
    }

    #[test]
    fn balanced_product() {
        let mut g = rng(11);
        let target = C64::new(0.01, 0.002);
        for k in [3, 6, 8] {
            let v = balanced(&mut g, k, target, 0.2, 0.9, 1000).unwrap();
            assert_eq!(v.len(), k);
            assert!((v.iter().product::<C64>() / target - 1.0).norm() < 1e-13);
            assert!(v.iter().all(|z| (0.2..=0.9).contains(&z.norm())));
        }
        assert!(balanced(&mut g, 2, target, 0.5, 0.9, 10).is_none());
    }

    #[test]
    fn omega_nomes_inside() {
        let mut g = rng(3);
        for _ in 0..20 {
            let t = omega_triple(&mut g, 0.6);
            assert!(t.q.norm() < 0.6 && t.r.norm() < 0.6 && t.p_tilde.norm() < 0.6);
        }
    }
}
