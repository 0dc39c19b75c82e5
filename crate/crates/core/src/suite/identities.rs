//! Function-identity suites: theta, elliptic and q-gamma identities, the
//! SL(3,Z) law for `G`, and the two hyperbolic gamma representations.

use rand::Rng;

use super::CaseResult;
use crate::error::Result;
use crate::gamma::{
    bernoulli_b22, bernoulli_b33, duplication_residual, ell_gamma, ell_gamma_residue_limit, hyperbolic_gamma_integral,
    hyperbolic_gamma_product, modified_g_b33, modified_g_product, qpoch_inf, thomae_jackson_gamma, HyperbolicQuadrature,
};
use crate::params::{cexp2pi, BasePair, OmegaTriple, TruncationPolicy, C64};
use crate::sample::{omega_triple, polar, SeedRng};
use crate::theta::{addition_law_residual, quasiperiodicity_residuals, theta, theta_pochhammer, triple_product_check};

fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn base(rng: &mut SeedRng, lo: f64, hi: f64) -> BasePair {
    loop {
        if let Ok(b) = BasePair::new(polar(rng, lo, hi), polar(rng, lo, hi)) {
            return b;
        }
    }
}

/// Runs `count` cases named `label[k]`. A sampled point that lands on a
/// pole is redrawn (bounded); any other error fails the case.
fn repeat<F>(out: &mut Vec<CaseResult>, label: &str, count: usize, threshold: f64, rng: &mut SeedRng, mut f: F)
where
    F: FnMut(&mut SeedRng) -> Result<f64>,
{
    for k in 0..count {
        let name = format!("{label}[{k}]");
        let mut r = f(rng);
        for _ in 0..8 {
            match &r {
                Err(e) if e.kind == crate::ErrorKind::PoleProximity => r = f(rng),
                _ => break,
            }
        }
        out.push(CaseResult::from_result(name, r, threshold));
    }
}

pub fn theta_identities(rng: &mut SeedRng, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let pol = TruncationPolicy::default();
    let th = |d: f64| threshold.unwrap_or(d);
    let mut out = Vec::new();
    repeat(&mut out, "inversion", count, th(1e-11), rng, |g| {
        let (x, p) = (polar(g, 0.3, 3.0), polar(g, 0.02, 0.6));
        let t = theta(x, p, &pol)?;
        Ok(rel(theta(x.inv(), p, &pol)?, -t / x))
    });
    repeat(&mut out, "p-shift", count, th(1e-11), rng, |g| {
        let (x, p) = (polar(g, 0.3, 3.0), polar(g, 0.02, 0.6));
        let t = theta(x, p, &pol)?;
        Ok(rel(theta(p * x, p, &pol)?, -t / x))
    });
    repeat(&mut out, "factorial-step", count, th(1e-11), rng, |g| {
        let (x, p, q) = (polar(g, 0.3, 3.0), polar(g, 0.02, 0.6), polar(g, 0.2, 0.6));
        let n = g.gen_range(-4i64..4);
        let l = theta_pochhammer(x, q, p, n + 1, &pol)?;
        let r = theta_pochhammer(x, q, p, n, &pol)? * theta(x * q.powi(n as i32), p, &pol)?;
        Ok(rel(l, r))
    });
    repeat(&mut out, "p-zero", count, th(1e-12), rng, |g| {
        let (x, q) = (polar(g, 0.3, 3.0), polar(g, 0.02, 0.6));
        let n = g.gen_range(-5i64..=5);
        let v = theta_pochhammer(x, q, C64::new(0.0, 0.0), n, &pol)?;
        let mut plain = C64::new(1.0, 0.0);
        if n >= 0 {
            for j in 0..n {
                plain *= 1.0 - x * q.powi(j as i32);
            }
        } else {
            for j in 1..=-n {
                plain /= 1.0 - x * q.powi(-(j as i32));
            }
        }
        Ok((v - plain).norm() / plain.norm().max(1.0))
    });
    repeat(&mut out, "triple-product", count, th(1e-12), rng, |g| {
        let (x, p) = (polar(g, 0.5, 2.0), polar(g, 0.02, 0.5));
        triple_product_check(x, p, 30, &pol)
    });
    repeat(&mut out, "addition-law", count, th(1e-11), rng, |g| {
        let v: Vec<C64> = (0..4).map(|_| polar(g, 0.5, 2.0)).collect();
        let p = polar(g, 0.02, 0.4);
        addition_law_residual(v[0], v[1], v[2], v[3], p, &pol)
    });
    repeat(&mut out, "quasiperiodicity", count, th(1e-12), rng, |g| {
        let (x, p, q) = (polar(g, 0.5, 2.0), polar(g, 0.05, 0.5), polar(g, 0.2, 0.6));
        let m = g.gen_range(-2i32..=2);
        let k = g.gen_range(-2i32..=3);
        let r = quasiperiodicity_residuals(x, q, p, m, k, &pol)?;
        Ok(r.into_iter().fold(0.0, f64::max))
    });
    out
}

pub fn gamma_identities(rng: &mut SeedRng, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let pol = TruncationPolicy::default();
    let th = |d: f64| threshold.unwrap_or(d);
    let mut out = Vec::new();
    repeat(&mut out, "reflection", count, th(1e-11), rng, |g| {
        let (z, b) = (polar(g, 0.3, 3.0), base(g, 0.02, 0.5));
        let v = ell_gamma(z, &b, &pol)?.value * ell_gamma(b.pq() / z, &b, &pol)?.value;
        Ok((v - 1.0).norm())
    });
    repeat(&mut out, "shift-equations", count, th(1e-11), rng, |g| {
        let (z, b) = (polar(g, 0.3, 3.0), base(g, 0.02, 0.5));
        let gz = ell_gamma(z, &b, &pol)?.value;
        let a = rel(ell_gamma(b.q() * z, &b, &pol)?.value, theta(z, b.p(), &pol)? * gz);
        let c = rel(ell_gamma(b.p() * z, &b, &pol)?.value, theta(z, b.q(), &pol)? * gz);
        Ok(a.max(c))
    });
    repeat(&mut out, "factorial-bridge", count, th(1e-10), rng, |g| {
        let (z, b) = (polar(g, 0.3, 3.0), base(g, 0.02, 0.5));
        let n = g.gen_range(-4i64..=4);
        let f = theta_pochhammer(z, b.q(), b.p(), n, &pol)?;
        let r = ell_gamma(z * b.q().powi(n as i32), &b, &pol)?.value / ell_gamma(z, &b, &pol)?.value;
        Ok(rel(f, r))
    });
    repeat(&mut out, "duplication", count, th(1e-11), rng, |g| {
        let (z, b) = (polar(g, 0.5, 1.5), base(g, 0.02, 0.4));
        duplication_residual(z, &b, &pol)
    });
    repeat(&mut out, "residue-limit", count, th(1e-12), rng, |g| {
        let b = base(g, 0.02, 0.5);
        let l = ell_gamma_residue_limit(&b, &pol)?.value;
        let pp = qpoch_inf(b.p(), b.p(), &pol)?.value * qpoch_inf(b.q(), b.q(), &pol)?.value;
        Ok((l * pp - 1.0).norm())
    });
    repeat(&mut out, "thomae-jackson", count, th(1e-12), rng, |g| {
        let q = polar(g, 0.1, 0.7);
        let u = C64::new(g.gen_range(-3.0..3.0), g.gen_range(-1.0..1.0));
        let a = thomae_jackson_gamma(u + 1.0, q, &pol)?.value / thomae_jackson_gamma(u, q, &pol)?.value;
        let qu = (u * q.ln()).exp();
        let one = thomae_jackson_gamma(C64::new(1.0, 0.0), q, &pol)?.value;
        Ok(rel(a, (1.0 - qu) / (1.0 - q)).max((one - 1.0).norm()))
    });
    repeat(&mut out, "bernoulli", count, th(1e-12), rng, |g| {
        let u = polar(g, 0.1, 2.0);
        let m = [polar(g, 0.5, 2.0), polar(g, 0.5, 2.0), polar(g, 0.5, 2.0)];
        let b2 = bernoulli_b22(u, m[0], m[1])?;
        let r2 = rel(bernoulli_b22(m[0] + m[1] - u, m[0], m[1])?, b2).max(rel(bernoulli_b22(u, m[1], m[0])?, b2));
        let s = m[0] + m[1] + m[2];
        let b3 = bernoulli_b33(u, m)?;
        let r3 = rel(bernoulli_b33(s - u, m)?, -b3).max(rel(bernoulli_b33(u, [m[2], m[0], m[1]])?, b3));
        Ok(r2.max(r3))
    });
    out
}

fn generic_u(rng: &mut SeedRng, w: &OmegaTriple) -> C64 {
    let [w1, w2, w3] = w.omega;
    w1 * rng.gen_range(0.05..0.95) + w2 * rng.gen_range(0.05..0.95) + w3 * rng.gen_range(0.05..0.95)
}

/// `|G_product − G_B33| / |G_product|` at `triples × per_triple` points,
/// plus the normalization `G(Σω/2) = 1` at each triple.
pub fn sl3z(rng: &mut SeedRng, triples: usize, per_triple: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let pol = TruncationPolicy::default();
    let th = threshold.unwrap_or(1e-8);
    let mut out = Vec::new();
    for a in 0..triples {
        let w = omega_triple(rng, 0.5);
        let half = w.sum() / 2.0;
        let norm = modified_g_product(half, &w, &pol).map(|g| (g.value - 1.0).norm());
        out.push(CaseResult::from_result(format!("normalization[{a}]"), norm, threshold.unwrap_or(1e-10)));
        for b in 0..per_triple {
            let mut r = Err(crate::EvalError::domain("no point drawn"));
            for _ in 0..8 {
                let u = generic_u(rng, &w);
                r = modified_g_product(u, &w, &pol).and_then(|gp| {
                    let gb = modified_g_b33(u, &w, &pol)?;
                    Ok((gp.value - gb.value).norm() / gp.value.norm())
                });
                if !matches!(&r, Err(e) if e.kind == crate::ErrorKind::PoleProximity) {
                    break;
                }
            }
            out.push(CaseResult::from_result(format!("sl3z[{a}.{b}]"), r, th));
        }
    }
    out
}

/// Product and contour-integral hyperbolic gamma agree, and both satisfy
/// the two shift equations.
pub fn hyp_cross(rng: &mut SeedRng, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let pol = TruncationPolicy::default();
    let quad = HyperbolicQuadrature::default();
    let th = threshold.unwrap_or(1e-6);
    let mut out = Vec::new();
    for k in 0..count {
        let (w1, w2) = loop {
            let w1 = C64::new(rng.gen_range(0.7..1.4), rng.gen_range(-0.6..0.6));
            let w2 = C64::new(rng.gen_range(0.7..1.4), rng.gen_range(-0.6..0.6));
            if (w1 / w2).im.abs() > 0.15 {
                break (w1, w2);
            }
        };
        let lim = w1.re.min(w2.re);
        let u = C64::new(rng.gen_range(0.15..lim - 0.15), rng.gen_range(-0.3..0.3));
        let prod = |v: C64| hyperbolic_gamma_product(v, w1, w2, &pol).map(|g| g.value);
        let int = |v: C64| hyperbolic_gamma_integral(v, w1, w2, &quad).map(|g| g.value);
        let cross = (|| Ok(rel(prod(u)?, int(u)?)))();
        out.push(CaseResult::from_result(format!("product-vs-integral[{k}]"), cross, th));
        type Rep<'a> = &'a dyn Fn(C64) -> Result<C64>;
        for (label, f) in [("product", &prod as Rep), ("integral", &int as Rep)] {
            let shifts = (|| {
                let g = f(u)?;
                let a = rel(f(u + w1)? / g, 1.0 - cexp2pi(u / w2));
                let b = rel(f(u + w2)? / g, 1.0 - cexp2pi(u / w1));
                Ok(a.max(b))
            })();
            out.push(CaseResult::from_result(format!("{label}-shifts[{k}]"), shifts, th));
        }
    }
    out
}
