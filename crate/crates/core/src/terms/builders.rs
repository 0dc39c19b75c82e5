//! Built-in terms: the elliptic beta-integral kernel and the two ρ ratios
//! of integral kernels.

use super::{Constraint, Factor, TermSpec};
use crate::error::{EvalError, Result};

fn unit(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut m = vec![0; n];
    m[i] = v;
    m
}

fn add(mut a: Vec<i64>, b: &[i64]) -> Vec<i64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|v| -v).collect()
}

/// The beta kernel with `t_6` eliminated, over `(x, t_1, …, t_5)`:
/// `∏_j Γ(t_j x^{±1}, t_j^{−1} ∏t) / (Γ(x^{±2}, ∏t x^{±1}) ∏_{i<j} Γ(t_i t_j))`.
pub fn beta_term_spec() -> TermSpec {
    let n = 6;
    let x = |v| unit(n, 0, v);
    let t = |j: usize| unit(n, j, 1);
    let prod_t: Vec<i64> = (0..n).map(|l| if l == 0 { 0 } else { 1 }).collect();
    let mut f = Vec::with_capacity(29);
    for j in 1..=5 {
        f.push(Factor::new(add(t(j), &x(1)), 1));
        f.push(Factor::new(add(t(j), &x(-1)), 1));
    }
    for j in 1..=5 {
        f.push(Factor::new(add(prod_t.clone(), &neg(&t(j))), 1));
    }
    f.push(Factor::new(x(2), -1));
    f.push(Factor::new(x(-2), -1));
    f.push(Factor::new(add(prod_t.clone(), &x(1)), -1));
    f.push(Factor::new(add(prod_t.clone(), &x(-1)), -1));
    for i in 1..=5 {
        for j in i + 1..=5 {
            f.push(Factor::new(add(t(i), &t(j)), -1));
        }
    }
    let names = ["x", "t1", "t2", "t3", "t4", "t5"].map(String::from).to_vec();
    TermSpec::new(n, f, vec![]).and_then(|s| s.with_names(names)).expect("beta term is well formed")
}

fn check_ranks(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(EvalError::domain(format!("ρ terms need ranks n, m ≥ 1, got ({n}, {m})")));
    }
    Ok(())
}

/// The BC-type ratio of kernels over `(z_1..z_n, y_1..y_m, t_1..t_{2n+2m+4})`
/// with `∏ t = (pq)^{m+1}` solved for the last `t`.
pub fn rho_bc_term_spec(n: usize, m: usize) -> Result<TermSpec> {
    check_ranks(n, m)?;
    let nt = 2 * n + 2 * m + 4;
    let dim = n + m + nt;
    let z = |j: usize, v: i64| unit(dim, j, v);
    let y = |j: usize, v: i64| unit(dim, n + j, v);
    let t = |r: usize, v: i64| unit(dim, n + m + r, v);
    let mut f = Vec::new();
    for r in 0..nt {
        for s in r + 1..nt {
            f.push(Factor::new(add(t(r, 1), &t(s, 1)), -1));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let yy = add(y(i, 1), &y(j, 1));
            f.push(Factor::with_sigma(yy.clone(), 1, -1));
            f.push(Factor::with_sigma(neg(&yy), 1, 1));
            f.push(Factor::new(add(y(i, 1), &y(j, -1)), 1));
            f.push(Factor::new(add(y(i, -1), &y(j, 1)), 1));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in [1, -1] {
                for b in [1, -1] {
                    f.push(Factor::new(add(z(i, a), &z(j, b)), -1));
                }
            }
        }
    }
    for j in 0..m {
        f.push(Factor::with_sigma(y(j, 2), 1, -1));
        f.push(Factor::with_sigma(y(j, -2), 1, 1));
    }
    for j in 0..n {
        f.push(Factor::new(z(j, 2), -1));
        f.push(Factor::new(z(j, -2), -1));
    }
    for r in 0..nt {
        for j in 0..n {
            f.push(Factor::new(add(t(r, 1), &z(j, 1)), 1));
            f.push(Factor::new(add(t(r, 1), &z(j, -1)), 1));
        }
        for j in 0..m {
            f.push(Factor::new(add(y(j, 1), &t(r, -1)), -1));
            f.push(Factor::with_sigma(add(t(r, -1), &y(j, -1)), -1, 1));
        }
    }
    let mut exps = vec![0; dim];
    for r in 0..nt {
        exps[n + m + r] = 1;
    }
    let con = Constraint {
        exps,
        pq_power: (m + 1) as i64,
        solve_for: dim - 1,
    };
    let mut names: Vec<String> = (1..=n).map(|j| format!("z{j}")).collect();
    names.extend((1..=m).map(|j| format!("y{j}")));
    names.extend((1..=nt).map(|r| format!("t{r}")));
    TermSpec::new(dim, f, vec![con])?.with_names(names)
}

/// The A-type ratio of kernels over
/// `(z_1..z_{n+1}, y_1..y_{m+1}, s_1..s_N, t_1..t_N)`, `N = n+m+2`, with
/// `∏ z = 1`, `∏ y = ∏ s` and `∏ s ∏ t = (pq)^{m+1}` solved for `z_{n+1}`,
/// `y_{m+1}` and `t_N`.
pub fn rho_a_term_spec(n: usize, m: usize) -> Result<TermSpec> {
    check_ranks(n, m)?;
    let big = n + m + 2;
    let (nz, ny) = (n + 1, m + 1);
    let dim = nz + ny + 2 * big;
    let z = |j: usize, v: i64| unit(dim, j, v);
    let y = |j: usize, v: i64| unit(dim, nz + j, v);
    let s = |r: usize, v: i64| unit(dim, nz + ny + r, v);
    let t = |r: usize, v: i64| unit(dim, nz + ny + big + r, v);
    let mut f = Vec::new();
    for k in 0..big {
        for r in 0..big {
            f.push(Factor::new(add(s(k, 1), &t(r, 1)), -1));
        }
    }
    for r in 0..big {
        for j in 0..nz {
            f.push(Factor::new(add(s(r, 1), &z(j, 1)), 1));
            f.push(Factor::new(add(t(r, 1), &z(j, -1)), 1));
        }
        for j in 0..ny {
            f.push(Factor::new(add(s(r, -1), &y(j, 1)), -1));
            f.push(Factor::with_sigma(add(t(r, -1), &y(j, -1)), -1, 1));
        }
    }
    for i in 0..ny {
        for j in i + 1..ny {
            f.push(Factor::new(add(y(i, -1), &y(j, 1)), 1));
            f.push(Factor::new(add(y(i, 1), &y(j, -1)), 1));
        }
    }
    for i in 0..nz {
        for j in i + 1..nz {
            f.push(Factor::new(add(z(i, -1), &z(j, 1)), -1));
            f.push(Factor::new(add(z(i, 1), &z(j, -1)), -1));
        }
    }
    let block = |lo: usize, len: usize, v: i64| -> Vec<i64> {
        (0..dim).map(|l| if l >= lo && l < lo + len { v } else { 0 }).collect()
    };
    let cz = Constraint {
        exps: block(0, nz, 1),
        pq_power: 0,
        solve_for: nz - 1,
    };
    let cy = Constraint {
        exps: add(block(nz, ny, 1), &block(nz + ny, big, -1)),
        pq_power: 0,
        solve_for: nz + ny - 1,
    };
    let cst = Constraint {
        exps: block(nz + ny, 2 * big, 1),
        pq_power: (m + 1) as i64,
        solve_for: dim - 1,
    };
    let mut names: Vec<String> = (1..=nz).map(|j| format!("z{j}")).collect();
    names.extend((1..=ny).map(|j| format!("y{j}")));
    names.extend((1..=big).map(|r| format!("s{r}")));
    names.extend((1..=big).map(|r| format!("t{r}")));
    TermSpec::new(dim, f, vec![cz, cy, cst])?.with_names(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::check_total_ellipticity;

    #[test]
    fn beta_shape() {
        let t = beta_term_spec();
        assert_eq!((t.n, t.k()), (6, 29));
        assert!(t.factors.iter().all(|f| f.sigma == 0));
        let pos = t.factors.iter().filter(|f| f.eps == 1).count();
        assert_eq!(pos, 15);
        assert_eq!(t.eps_sum(), 1);
        assert!(check_total_ellipticity(&t).unwrap().passed());
    }

    #[test]
    fn rho_bc_counts() {
        let t = rho_bc_term_spec(1, 1).unwrap();
        // 28 Γ(t_r t_s), 2 Γ(y²/pq, pq/y²), 2 Γ(z^{±2}), 16 Γ(t z^{±}), 16 Γ(y/t, pq/(t y))
        assert_eq!(t.k(), 64);
        assert_eq!(t.n, 10);
        let sig: Vec<i64> = t.factors.iter().filter(|f| f.sigma != 0).map(|f| f.sigma).collect();
        assert_eq!(sig.len(), 2 + 8);
        assert_eq!(t.factors.iter().filter(|f| f.eps < 0).count(), 28 + 2 + 16);
        let t = rho_bc_term_spec(2, 1).unwrap();
        // 10·9/2 + 0 + 4 + 2 + 4 + 40 + 20
        assert_eq!(t.k(), 45 + 4 + 2 + 4 + 40 + 20);
        assert_eq!(rho_bc_term_spec(0, 1).unwrap_err().kind, crate::ErrorKind::DomainViolation);
    }

    #[test]
    fn rho_a_counts() {
        let t = rho_a_term_spec(1, 1).unwrap();
        // 16 Γ(s t), 16 Γ(s z, t/z), 16 Γ(y/s, pq/(t y)), 2 Γ(y^{±}/y^{∓}), 2 Γ(z^{±}/z^{∓})
        assert_eq!(t.k(), 52);
        assert_eq!(t.n, 12);
        assert_eq!(t.constraints.len(), 3);
        assert_eq!(t.free_variables().len(), 9);
        assert!(t.factors.iter().any(|f| f.sigma != 0));
        assert!(rho_a_term_spec(1, 0).is_err());
    }
}
