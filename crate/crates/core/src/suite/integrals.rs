//! Suites over the integrals: evaluations, transformations, recurrences
//! and the kernel q-difference equation.

use super::cases::{
    beta_case, recurrence_i_case, recurrence_ii_case, trafo_a_case, trafo_bc_case, v_reduction_case,
};
use super::CaseResult;
use crate::error::Result;
use crate::gamma::ell_gamma;
use crate::integrals::{
    elliptic_beta, v_function, verify_kernel_qdiff, verify_kernel_qdiff_partner, verify_recurrence_i,
    verify_recurrence_ii, verify_trafo_a, verify_trafo_bc,
};
use crate::params::{BasePair, TruncationPolicy, C64};
use crate::quad::QuadOptions;
use crate::sample::{polar, polar_vec, SeedRng};

/// Relative trapezoid stopping rule used by every suite.
pub fn suite_quad() -> QuadOptions {
    QuadOptions {
        tol: 1e-12,
        relative: true,
        ..Default::default()
    }
}

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn ranked(label: &str, n: usize, m: usize) -> String {
    format!("{label}(n={n},m={m})")
}

pub fn beta(rng: &mut SeedRng, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(1e-8);
    (0..count)
        .map(|k| {
            let params = beta_case(rng);
            let r = elliptic_beta(&params, &suite_quad(), &pol()).map(|r| (r.value - 1.0).norm());
            CaseResult::from_result(format!("beta[{k}]"), r, th)
        })
        .collect()
}

pub fn v_reduction(rng: &mut SeedRng, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(1e-8);
    (0..count)
        .map(|k| {
            let v = v_reduction_case(rng);
            let r = (|| -> Result<f64> {
                let val = v_function(&v, &suite_quad(), &pol())?.value;
                let mut closed = C64::new(1.0, 0.0);
                for i in 0..6 {
                    for j in i + 1..6 {
                        closed *= ell_gamma(v.t[i] * v.t[j], &v.base, &pol())?.value;
                    }
                }
                Ok((val / closed - 1.0).norm())
            })();
            CaseResult::from_result(format!("v-reduction[{k}]"), r, th)
        })
        .collect()
}

fn trafo_threshold(n: usize, m: usize) -> f64 {
    match (n, m) {
        (1, 0) | (0, 1) => 1e-7,
        (1, 1) => 1e-6,
        _ => 1e-5,
    }
}

pub fn trafo_bc(rng: &mut SeedRng, n: usize, m: usize, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(trafo_threshold(n, m));
    (0..count)
        .map(|k| {
            let c = trafo_bc_case(rng, n, m);
            let r = verify_trafo_bc(n, m, &c.t, &c.base, &suite_quad(), &pol());
            CaseResult::from_result(format!("{}[{k}]", ranked("trafo-bc", n, m)), r, th)
        })
        .collect()
}

/// The A_n transformation, then the same parameters rotated by
/// `s → ωs, t → t/ω` with `ω = e^{2πi/(n+1)}`: a change of variables on
/// the left, a branch change of the roots on the right.
pub fn trafo_a(rng: &mut SeedRng, n: usize, m: usize, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(trafo_threshold(n, m));
    let mut out = Vec::new();
    for k in 0..count {
        let c = trafo_a_case(rng, n, m);
        let r = verify_trafo_a(n, m, &c.s, &c.t, &c.base, &suite_quad(), &pol());
        out.push(CaseResult::from_result(format!("{}[{k}]", ranked("trafo-a", n, m)), r, th));
        let w = C64::from_polar(1.0, std::f64::consts::TAU / (n as f64 + 1.0));
        let s: Vec<C64> = c.s.iter().map(|v| v * w).collect();
        let t: Vec<C64> = c.t.iter().map(|v| v / w).collect();
        let r = verify_trafo_a(n, m, &s, &t, &c.base, &suite_quad(), &pol());
        out.push(CaseResult::from_result(format!("{}[{k}]", ranked("trafo-a-rotated", n, m)), r, th));
    }
    out
}

fn rec_i_threshold(n: usize, m: usize) -> f64 {
    if (n, m) == (1, 0) {
        1e-6
    } else {
        1e-5
    }
}

fn rec_ii_threshold(n: usize, m: usize) -> f64 {
    match (n, m) {
        (1, 0) => 1e-7,
        (1, 1) => 1e-6,
        _ => 1e-5,
    }
}

pub fn recurrence_i(rng: &mut SeedRng, n: usize, m: usize, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(rec_i_threshold(n, m));
    (0..count)
        .map(|k| {
            let (b, t, set) = recurrence_i_case(rng, n, m);
            let r = verify_recurrence_i(n, m, &t, &set, &b, &suite_quad(), &pol());
            CaseResult::from_result(format!("{}[{k}] I={set:?}", ranked("rec-1", n, m)), r, th)
        })
        .collect()
}

pub fn recurrence_ii(rng: &mut SeedRng, n: usize, m: usize, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(rec_ii_threshold(n, m));
    (0..count)
        .map(|k| {
            let (b, t, set) = recurrence_ii_case(rng, n, m);
            let r = verify_recurrence_ii(n, m, &t, &set, &b, &suite_quad(), &pol());
            CaseResult::from_result(format!("{}[{k}] K={set:?}", ranked("rec-2", n, m)), r, th)
        })
        .collect()
}

/// Both q-difference identities at random points of the torus with
/// `p = 0.1`, `q = 0.15`.
pub fn kernel_qdiff(rng: &mut SeedRng, count: usize, threshold: Option<f64>) -> Vec<CaseResult> {
    let th = threshold.unwrap_or(1e-9);
    let base = BasePair::real(0.1, 0.15).expect("valid nomes");
    let mut out = Vec::new();
    for k in 0..count {
        let x = polar(rng, 1.0, 1.0);
        let v = polar_vec(rng, 5, 0.3, 0.85);
        let t = [v[0], v[1], v[2], v[3], v[4]];
        out.push(CaseResult::from_result(
            format!("qdiff[{k}]"),
            verify_kernel_qdiff(x, &t, &base, &pol()),
            th,
        ));
        out.push(CaseResult::from_result(
            format!("qdiff-partner[{k}]"),
            verify_kernel_qdiff_partner(x, &t, &base, &pol()),
            th,
        ));
    }
    out
}
