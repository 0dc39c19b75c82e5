use elliptio::gamma::ell_gamma;
use elliptio::integrals::*;
use elliptio::quad::QuadOptions;
use elliptio::sample::{polar, polar_vec, rng};
use elliptio::suite::cases::*;
use elliptio::suite::integrals::suite_quad;
use elliptio::terms::{rho_a_term_spec, rho_bc_term_spec};
use elliptio::{BasePair, ErrorKind, TruncationPolicy, C64};

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn pair_gammas(t: &[C64], b: &BasePair) -> C64 {
    let mut g = one();
    for r in 0..t.len() {
        for s in r + 1..t.len() {
            g *= ell_gamma(t[r] * t[s], b, &pol()).unwrap().value;
        }
    }
    g
}

#[test]
fn trafo_bc_low_ranks() {
    let mut g = rng(21);
    for (n, m, th) in [(1, 0, 1e-7), (1, 1, 1e-6), (0, 1, 1e-7)] {
        let c = if n == 0 { trafo_bc_case(&mut g, 1, 0) } else { trafo_bc_case(&mut g, n, m) };
        // (0, 1) is the (1, 0) relation read right to left
        let (n, m, t) = if n == 0 {
            let rt = c.base.pq().sqrt();
            (0, 1, c.t.iter().map(|v| rt / v).collect::<Vec<_>>())
        } else {
            (n, m, c.t.clone())
        };
        let r = verify_trafo_bc(n, m, &t, &c.base, &suite_quad(), &pol()).unwrap();
        assert!(r < th, "({n},{m}): {r}");
    }
}

#[test]
fn trafo_bc_rank_two() {
    let c = trafo_bc_case(&mut rng(22), 2, 0);
    let r = verify_trafo_bc(2, 0, &c.t, &c.base, &suite_quad(), &pol()).unwrap();
    assert!(r < 1e-5, "{r}");
}

#[test]
fn trafo_bc_rejects_inadmissible_dual() {
    let b = BasePair::real(0.2, 0.2).unwrap();
    // |√(pq)/t_1| = 0.2/0.15 > 1
    let mut free = vec![C64::new(0.15, 0.0)];
    free.extend(vec![C64::new(0.8, 0.3); 4]);
    let p = BcParams::from_free(1, 0, &free[..5], b).unwrap();
    let e = verify_trafo_bc(1, 0, &p.t, &b, &suite_quad(), &pol()).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainViolation);
}

#[test]
fn trafo_a_low_ranks_and_rotation() {
    let mut g = rng(23);
    for (n, m, th) in [(1, 0, 1e-7), (1, 1, 1e-6)] {
        let c = trafo_a_case(&mut g, n, m);
        let r = verify_trafo_a(n, m, &c.s, &c.t, &c.base, &suite_quad(), &pol()).unwrap();
        assert!(r < th, "({n},{m}): {r}");
        let w = C64::new(-1.0, 0.0);
        let s: Vec<C64> = c.s.iter().map(|v| v * w).collect();
        let t: Vec<C64> = c.t.iter().map(|v| v / w).collect();
        let r = verify_trafo_a(n, m, &s, &t, &c.base, &suite_quad(), &pol()).unwrap();
        assert!(r < 1e-6, "rotated ({n},{m}): {r}");
    }
}

#[test]
fn a_rank_zero_is_kernel_at_one() {
    let b = BasePair::real(0.1, 0.2).unwrap();
    let s = vec![C64::new(0.5, 0.1), C64::new(0.6, -0.2)];
    let t_free = [C64::new(0.4, 0.0)];
    let a = AParams::from_free(0, 0, s, &t_free, b).unwrap();
    let v = i_a(&a, &suite_quad(), &pol()).unwrap().value;
    let mut want = one();
    for x in a.s.iter().chain(&a.t) {
        want *= ell_gamma(*x, &b, &pol()).unwrap().value;
    }
    assert!(rel(v, want) < 1e-15);
}

#[test]
fn recurrences_low_ranks() {
    let mut g = rng(24);
    for (n, m, th1, th2) in [(1, 0, 1e-6, 1e-7), (1, 1, 1e-5, 1e-6)] {
        for _ in 0..3 {
            let (b, t, set) = recurrence_i_case(&mut g, n, m);
            let r = verify_recurrence_i(n, m, &t, &set, &b, &suite_quad(), &pol()).unwrap();
            assert!(r < th1, "I ({n},{m}) {set:?}: {r}");
            let (b, t, set) = recurrence_ii_case(&mut g, n, m);
            let r = verify_recurrence_ii(n, m, &t, &set, &b, &suite_quad(), &pol()).unwrap();
            assert!(r < th2, "II ({n},{m}) {set:?}: {r}");
        }
    }
}

#[test]
fn recurrence_domain_errors() {
    let mut g = rng(25);
    let (b, mut t, set) = recurrence_i_case(&mut g, 1, 0);
    // duplicate a value inside the chosen set, rebalance through an outside index
    let outside = (0..6).find(|i| !set.contains(i)).unwrap();
    let (old, new) = (t[set[1]], t[set[0]]);
    t[set[1]] = new;
    t[outside] *= old / new;
    let e = verify_recurrence_i(1, 0, &t, &set, &b, &suite_quad(), &pol()).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainViolation);

    let (b, mut t, set) = recurrence_ii_case(&mut g, 1, 0);
    let outside = (0..6).find(|i| !set.contains(i)).unwrap();
    let (old, new) = (t[set[1]], t[set[0]]);
    t[set[1]] = new;
    t[outside] *= old / new;
    let e = verify_recurrence_ii(1, 0, &t, &set, &b, &suite_quad(), &pol()).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainViolation);

    // repeated index and wrong set size
    let (b, t, _) = recurrence_i_case(&mut g, 1, 0);
    for set in [vec![0, 0, 1], vec![0, 1]] {
        let e = verify_recurrence_i(1, 0, &t, &set, &b, &suite_quad(), &pol()).unwrap_err();
        assert_eq!(e.kind, ErrorKind::DomainViolation);
    }
}

#[test]
fn permutation_and_pq_symmetry() {
    let mut g = rng(26);
    let q = suite_quad();

    let v = v_reduction_case(&mut g);
    let base_val = v_function(&v, &q, &pol()).unwrap().value;
    let mut t = v.t;
    t.rotate_left(3);
    t.swap(0, 5);
    let perm = v_function(&VParams::new(t, v.base).unwrap(), &q, &pol()).unwrap().value;
    assert!(rel(base_val, perm) < 1e-10);
    let swapped = VParams::new(v.t, v.base.swapped().unwrap()).unwrap();
    assert!(rel(base_val, v_function(&swapped, &q, &pol()).unwrap().value) < 1e-10);

    let c = trafo_bc_case(&mut g, 2, 0);
    let x = i_bc(&c, &q, &pol()).unwrap().value;
    let mut t = c.t.clone();
    t.reverse();
    let y = i_bc(&BcParams::new(2, 0, t, c.base).unwrap(), &q, &pol()).unwrap().value;
    assert!(rel(x, y) < 1e-9);
    let y = i_bc(&BcParams::new(2, 0, c.t.clone(), c.base.swapped().unwrap()).unwrap(), &q, &pol())
        .unwrap()
        .value;
    assert!(rel(x, y) < 1e-9);

    let a = trafo_a_case(&mut g, 1, 1);
    let x = i_a(&a, &q, &pol()).unwrap().value;
    let (mut s, mut t) = (a.s.clone(), a.t.clone());
    s.swap(0, 3);
    t.rotate_right(1);
    let y = i_a(&AParams::new(1, 1, s, t, a.base).unwrap(), &q, &pol()).unwrap().value;
    assert!(rel(x, y) < 1e-9);
    let y = i_a(&AParams::new(1, 1, a.s.clone(), a.t.clone(), a.base.swapped().unwrap()).unwrap(), &q, &pol())
        .unwrap()
        .value;
    assert!(rel(x, y) < 1e-9);
}

#[test]
fn rho_bc_is_ratio_of_kernels() {
    let mut g = rng(27);
    for (n, m) in [(1, 1), (2, 1), (1, 2)] {
        let spec = rho_bc_term_spec(n, m).unwrap();
        let c = trafo_bc_case(&mut g, n, m);
        let b = c.base;
        let rt = b.pq().sqrt();
        let z = polar_vec(&mut g, n, 0.8, 1.2);
        let w = polar_vec(&mut g, m, 0.8, 1.2);
        let mut x: Vec<C64> = z.clone();
        x.extend(w.iter().map(|v| rt * v));
        x.extend(&c.t);
        spec.complete_point(&mut x, b.pq()).unwrap();
        let rho = spec.eval(&x, &b, &pol()).unwrap();
        let dual: Vec<C64> = c.t.iter().map(|v| rt / v).collect();
        let num = bc_kernel(n, &c.t, &b, &pol(), one()).unwrap().eval(&z).unwrap();
        let den = bc_kernel(m, &dual, &b, &pol(), one()).unwrap().eval(&w).unwrap();
        let want = num / (pair_gammas(&c.t, &b) * den);
        assert!(rel(rho, want) < 1e-9, "({n},{m}) {rho} {want}");
    }
}

#[test]
fn rho_a_is_ratio_of_kernels() {
    let mut g = rng(28);
    for (n, m) in [(1, 1), (2, 1), (1, 2)] {
        let spec = rho_a_term_spec(n, m).unwrap();
        let c = trafo_a_case(&mut g, n, m);
        let b = c.base;
        let (sr, tr) = c.roots();
        let z = polar_vec(&mut g, n, 0.8, 1.2);
        let w = polar_vec(&mut g, m, 0.8, 1.2);
        let mut x: Vec<C64> = z.clone();
        x.push(one());
        x.extend(w.iter().map(|v| sr * v));
        x.push(one());
        x.extend(&c.s);
        x.extend(&c.t);
        spec.complete_point(&mut x, b.pq()).unwrap();
        let rho = spec.eval(&x, &b, &pol()).unwrap();
        let s2: Vec<C64> = c.s.iter().map(|v| sr / v).collect();
        let t2: Vec<C64> = c.t.iter().map(|v| tr / v).collect();
        let num = a_kernel(n, &c.s, &c.t, &b, &pol(), one()).unwrap().eval(&z).unwrap();
        let den = a_kernel(m, &s2, &t2, &b, &pol(), one()).unwrap().eval(&w).unwrap();
        let mut st = one();
        for &sk in &c.s {
            for &tr in &c.t {
                st *= ell_gamma(sk * tr, &b, &pol()).unwrap().value;
            }
        }
        let want = num / (st * den);
        assert!(rel(rho, want) < 1e-9, "({n},{m}) {rho} {want}");
    }
}

#[test]
fn halving_tol_stays_within_err_est() {
    let mut g = rng(29);
    let beta = beta_case(&mut g);
    let v = v_reduction_case(&mut g);
    let bc = trafo_bc_case(&mut g, 1, 1);
    let a = trafo_a_case(&mut g, 1, 1);
    type Run<'a> = Box<dyn Fn(&QuadOptions) -> elliptio::quad::QuadratureResult + 'a>;
    let runs: Vec<(&str, Run)> = vec![
        ("beta", Box::new(|o| elliptic_beta(&beta, o, &pol()).unwrap())),
        ("v", Box::new(|o| v_function(&v, o, &pol()).unwrap())),
        ("bc", Box::new(|o| i_bc(&bc, o, &pol()).unwrap())),
        ("a", Box::new(|o| i_a(&a, o, &pol()).unwrap())),
    ];
    for (label, f) in &runs {
        let mut tol = 1e-3;
        while tol > 1e-11 {
            let coarse = f(&QuadOptions::with_tol(tol));
            let fine = f(&QuadOptions::with_tol(tol / 2.0));
            let change = (fine.value - coarse.value).norm();
            assert!(
                change <= coarse.err_est + 4.0 * f64::EPSILON * coarse.value.norm(),
                "{label} tol {tol:e}: change {change:e} > err_est {:e}",
                coarse.err_est
            );
            tol /= 10.0;
        }
    }
}

#[test]
fn screening_reports_pole_family() {
    let b = BasePair::real(0.1, 0.1).unwrap();
    let mut g = rng(30);
    let mut free = polar_vec(&mut g, 7, 0.5, 0.7);
    free[2] = polar(&mut g, 0.99, 0.99);
    let v = VParams::from_free([free[0], free[1], free[2], free[3], free[4], free[5], free[6]], b).unwrap();
    let e = v_function(&v, &suite_quad(), &pol()).unwrap_err();
    assert_eq!(e.kind, ErrorKind::PoleProximity);
    assert!(e.to_string().contains("t3"), "{e}");
}
