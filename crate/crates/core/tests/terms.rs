use elliptio::terms::*;
use elliptio::{BasePair, ErrorKind, TruncationPolicy, C64};
use proptest::prelude::*;

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

/// The beta term pulled back along `x ↦ x^A` for an integer `6 × n` matrix
/// `A`; con1–con3 are polynomial identities in the exponent vectors, so the
/// pull-back stays totally elliptic whenever no exponent vector collapses.
fn pulled_back(a: &[Vec<i64>]) -> Option<TermSpec> {
    let beta = beta_term_spec();
    let n = a[0].len();
    let mut f = Vec::new();
    for fac in &beta.factors {
        let m: Vec<i64> = (0..n).map(|c| (0..6).map(|r| fac.m[r] * a[r][c]).sum()).collect();
        if m.iter().all(|&v| v == 0) {
            return None;
        }
        f.push(Factor::new(m, fac.eps));
    }
    TermSpec::new(n, f, vec![]).ok()
}

fn concat(a: &TermSpec, b: &TermSpec) -> TermSpec {
    let mut f = a.factors.clone();
    f.extend(b.factors.iter().cloned());
    TermSpec::new(a.n, f, vec![]).unwrap()
}

fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, n), 6)
}

fn arb_elliptic() -> impl Strategy<Value = TermSpec> {
    (2usize..=3)
        .prop_flat_map(|n| (arb_matrix(n), arb_matrix(n), any::<bool>()))
        .prop_filter_map("collapsed exponent", |(a, b, two)| {
            let s = pulled_back(&a)?;
            if two {
                Some(concat(&s, &pulled_back(&b)?))
            } else {
                Some(s)
            }
        })
}

/// An arbitrary small term, typically not elliptic.
fn arb_term() -> impl Strategy<Value = TermSpec> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(
            (prop::collection::vec(-2i64..=2, n), prop::bool::ANY),
            1..6,
        )
        .prop_filter_map("zero exponent", move |fs| {
            let f: Option<Vec<Factor>> = fs
                .into_iter()
                .map(|(m, e)| (!m.iter().all(|&v| v == 0)).then(|| Factor::new(m, if e { 1 } else { -1 })))
                .collect();
            TermSpec::new(n, f?, vec![]).ok()
        })
    })
}

fn base() -> BasePair {
    BasePair::new(C64::new(0.15, 0.05), C64::new(0.2, -0.1)).unwrap()
}

/// Largest residual over every variable and basis transform; pole hits are
/// skipped.
fn worst_residual(t: &TermSpec, b: &BasePair, seed: u64) -> f64 {
    let mut worst = 0.0f64;
    for i in t.free_variables() {
        for (_, tr) in Transform::basis(t) {
            match numeric_ellipticity_check(t, i, &tr, b, &pol(), seed) {
                Ok(r) => worst = worst.max(r),
                Err(e) => assert_eq!(e.kind, ErrorKind::PoleProximity, "{e}"),
            }
        }
    }
    worst
}

fn all_exponents_trivial(t: &TermSpec) -> bool {
    (0..t.n).all(|i| {
        q_shift_exponents(t, i).unwrap().is_trivial()
            && (0..t.n).all(|j| p_shift_exponents(t, i, j).unwrap().is_trivial())
    })
}

/// Flip one ε or move one exponent entry by ±1.
fn mutate(t: &TermSpec, which: usize, entry: usize, up: bool, flip: bool) -> Option<TermSpec> {
    let mut f = t.factors.clone();
    let a = which % f.len();
    if flip {
        f[a].eps = -f[a].eps;
    } else {
        let k = entry % t.n;
        f[a].m[k] += if up { 1 } else { -1 };
        if f[a].m.iter().all(|&v| v == 0) {
            return None;
        }
    }
    TermSpec::new(t.n, f, vec![]).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diophantine_implies_numeric(t in arb_elliptic(), seed in 0u64..1000) {
        prop_assert!(check_total_ellipticity(&t).unwrap().passed());
        prop_assert!(all_exponents_trivial(&t));
        let r = worst_residual(&t, &base(), seed);
        prop_assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn violation_is_visible_numerically(
        t in arb_elliptic(),
        which in 0usize..100,
        entry in 0usize..3,
        up in any::<bool>(),
        flip in any::<bool>(),
        seed in 0u64..1000,
    ) {
        let Some(bad) = mutate(&t, which, entry, up, flip) else { return Ok(()); };
        let report = check_total_ellipticity(&bad).unwrap();
        prop_assume!(!report.passed());
        prop_assert!(!all_exponents_trivial(&bad));
        let r = worst_residual(&bad, &base(), seed);
        prop_assert!(r > 1e-3, "{r} for {:?}", report.violations);
    }

    #[test]
    fn exponents_vanish_iff_checks_pass(t in arb_term()) {
        let passed = check_total_ellipticity(&t).unwrap().passed();
        prop_assert_eq!(passed, all_exponents_trivial(&t));
    }

    #[test]
    fn certificates_commute(t in arb_term(), seed in 0u64..1000) {
        let b = base();
        let mut g = elliptio::sample::rng(seed);
        let x = elliptio::sample::polar_vec(&mut g, t.n, 0.4, 0.9);
        for i in 0..t.n {
            for k in 0..t.n {
                let (ci, ck) = (certificate(&t, i).unwrap(), certificate(&t, k).unwrap());
                let mut xk = x.clone();
                xk[k] *= b.q();
                let mut xi = x.clone();
                xi[i] *= b.q();
                let run = || -> elliptio::Result<(C64, C64)> {
                    let l = eval_certificate(&ci, &xk, &b, &pol())? * eval_certificate(&ck, &x, &b, &pol())?;
                    let r = eval_certificate(&ck, &xi, &b, &pol())? * eval_certificate(&ci, &x, &b, &pol())?;
                    Ok((l, r))
                };
                if let Ok((l, r)) = run() {
                    prop_assert!((l - r).norm() <= 1e-9 * l.norm().max(r.norm()), "{l} {r}");
                }
            }
        }
    }

    #[test]
    fn exponent_formulas_match_shift_ratios(t in arb_term(), seed in 0u64..1000, p in 0.1f64..0.3, q in 0.1f64..0.3) {
        let b = BasePair::real(p, q).unwrap();
        let mut g = elliptio::sample::rng(seed);
        let x = elliptio::sample::polar_vec(&mut g, t.n, 0.5, 0.9);
        let monomial = |e: &QuasiExponents| -> C64 {
            let mut v = C64::new(if e.sign.rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0);
            for (xl, &k) in x.iter().zip(&e.x) {
                v *= xl.powi(k as i32);
            }
            v * q.powf(e.q as f64 / e.den as f64) * p.powf(e.p as f64 / e.den as f64)
        };
        for i in 0..t.n {
            let c = certificate(&t, i).unwrap();
            let Ok(h0) = eval_certificate(&c, &x, &b, &pol()) else { continue };
            if h0 == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..t.n {
                let mut xs = x.clone();
                xs[j] *= p;
                let Ok(h1) = eval_certificate(&c, &xs, &b, &pol()) else { continue };
                let want = monomial(&p_shift_exponents(&t, i, j).unwrap());
                prop_assert!((h1 / h0 - want).norm() <= 1e-8 * want.norm(), "p-shift {i} {j}: {} vs {want}", h1 / h0);
            }
            let moved = BasePair::real(p, p * q).unwrap();
            if let Ok(h1) = eval_certificate(&c, &x, &moved, &pol()) {
                let want = monomial(&q_shift_exponents(&t, i).unwrap());
                prop_assert!((h1 / h0 - want).norm() <= 1e-8 * want.norm(), "q-shift {i}: {} vs {want}", h1 / h0);
            }
        }
    }
}

#[test]
fn every_single_flip_of_beta_is_detected() {
    let beta = beta_term_spec();
    assert!(check_total_ellipticity(&beta).unwrap().passed());
    for a in 0..beta.factors.len() {
        let bad = mutate(&beta, a, 0, true, true).unwrap();
        let report = check_total_ellipticity(&bad).unwrap();
        assert!(!report.violations.is_empty(), "flip {a} undetected");
    }
}

#[test]
fn json_round_trip_of_builtins() {
    for t in [beta_term_spec(), rho_bc_term_spec(1, 1).unwrap(), rho_a_term_spec(1, 1).unwrap()] {
        let back = TermSpec::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
