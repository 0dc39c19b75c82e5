use std::fs;

use clap::ValueEnum;

use elliptio::gamma::{
    bernoulli_b22, bernoulli_b33, ell_gamma, hyperbolic_gamma_integral, hyperbolic_gamma_product, modified_g_b33,
    modified_g_product, qpoch_inf, thomae_jackson_gamma, GammaValue, HyperbolicQuadrature,
};
use elliptio::integrals::{elliptic_beta, i_a, i_bc, v_function, AParams, BcParams, BetaParams, VParams};
use elliptio::quad::{QuadOptions, QuadratureResult};
use elliptio::sample::{omega_triple, polar_vec, rng};
use elliptio::suite::{run, CaseResult, SuiteConfig};
use elliptio::terms::{
    beta_term_spec, check_total_ellipticity, modular_invariance_check, numeric_ellipticity_check, rho_a_term_spec,
    rho_bc_term_spec, verify_modular_transform, TermSpec, Transform,
};
use elliptio::theta::theta_with_error;
use elliptio::{BasePair, EvalError, OmegaTriple, Result, TruncationPolicy, C64};

use crate::complex::{format_c64, format_list};
use crate::report::{Output, Report};
use crate::{Builtin, CheckTermArgs, EvalArgs, Function, IntegrateArgs, Kind, VerifyArgs};

/// Ranks accepted on the command line: `n, m ≤ 2`, `n + m ≤ 3`.
pub const CLI_RANK: usize = 2;

fn check_rank(n: usize, m: usize) -> Result<()> {
    if n > CLI_RANK || m > CLI_RANK || n + m > 3 {
        return Err(EvalError::domain(format!(
            "rank (n, m) = ({n}, {m}) is outside the supported range n, m ≤ 2, n + m ≤ 3"
        )));
    }
    Ok(())
}

fn need(name: &str, v: Option<C64>) -> Result<C64> {
    v.ok_or_else(|| EvalError::domain(format!("missing argument --{name}")))
}

/// Runs `f` and records either its outputs or its error.
fn fill(report: &mut Report, f: impl FnOnce(&mut Report) -> Result<()>) {
    if let Err(e) = f(report) {
        report.fail_with(&e);
    }
}

fn gamma_output(name: &str, g: GammaValue) -> Output {
    Output::value(name, g.value, Some(g.est_error))
}

pub fn eval(line: String, a: &EvalArgs) -> Report {
    let name = a.function.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut report = Report::new(line, name.clone());
    for (k, v) in [("x", a.x), ("z", a.z), ("u", a.u), ("p", a.p), ("q", a.q), ("w1", a.w1), ("w2", a.w2), ("w3", a.w3)] {
        if let Some(v) = v {
            report.input(k, format_c64(v));
        }
    }
    report.input("tol", format!("{:e}", a.tol));
    fill(&mut report, |r| {
        let pol = TruncationPolicy::new(a.tol, TruncationPolicy::default().max_terms)?;
        let triple = || OmegaTriple::new(need("w1", a.w1)?, need("w2", a.w2)?, need("w3", a.w3)?);
        let out = match a.function {
            Function::Theta => {
                let (v, e) = theta_with_error(need("x", a.x)?, need("p", a.p)?, &pol)?;
                Output::value(&name, v, Some(e))
            }
            Function::EllGamma => {
                let base = BasePair::new(need("p", a.p)?, need("q", a.q)?)?;
                gamma_output(&name, ell_gamma(need("z", a.z)?, &base, &pol)?)
            }
            Function::GProduct => gamma_output(&name, modified_g_product(need("u", a.u)?, &triple()?, &pol)?),
            Function::GB33 => gamma_output(&name, modified_g_b33(need("u", a.u)?, &triple()?, &pol)?),
            Function::HypGammaProduct => gamma_output(
                &name,
                hyperbolic_gamma_product(need("u", a.u)?, need("w1", a.w1)?, need("w2", a.w2)?, &pol)?,
            ),
            Function::HypGammaIntegral => {
                let quad = HyperbolicQuadrature {
                    tol: a.tol.max(1e-14),
                    ..Default::default()
                };
                gamma_output(
                    &name,
                    hyperbolic_gamma_integral(need("u", a.u)?, need("w1", a.w1)?, need("w2", a.w2)?, &quad)?,
                )
            }
            Function::TjGamma => gamma_output(&name, thomae_jackson_gamma(need("u", a.u)?, need("q", a.q)?, &pol)?),
            Function::B22 => Output::value(&name, bernoulli_b22(need("u", a.u)?, need("w1", a.w1)?, need("w2", a.w2)?)?, None),
            Function::B33 => Output::value(
                &name,
                bernoulli_b33(need("u", a.u)?, [need("w1", a.w1)?, need("w2", a.w2)?, need("w3", a.w3)?])?,
                None,
            ),
            Function::Qpoch => gamma_output(&name, qpoch_inf(need("x", a.x)?, need("q", a.q)?, &pol)?),
        };
        r.outputs.push(out);
        Ok(())
    });
    report
}

fn load_term(a: &CheckTermArgs) -> Result<(String, TermSpec)> {
    match (a.builtin, &a.path) {
        (Some(Builtin::Beta), _) => Ok(("beta".into(), beta_term_spec())),
        (Some(Builtin::RhoBc), _) => {
            check_rank(a.n, a.m)?;
            Ok((format!("rho-bc(n={},m={})", a.n, a.m), rho_bc_term_spec(a.n, a.m)?))
        }
        (Some(Builtin::RhoA), _) => {
            check_rank(a.n, a.m)?;
            Ok((format!("rho-a(n={},m={})", a.n, a.m), rho_a_term_spec(a.n, a.m)?))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| EvalError::domain(format!("cannot read {}: {e}", path.display())))?;
            Ok((path.display().to_string(), TermSpec::from_json(&text)?))
        }
        (None, None) => Err(EvalError::domain("give a TermSpec path or --builtin")),
    }
}

pub fn check_term(line: String, a: &CheckTermArgs) -> Report {
    let mut report = Report::new(line, "check-term");
    fill(&mut report, |r| {
        let (label, t) = load_term(a)?;
        r.suite = label;
        r.input("n", t.n.to_string());
        r.input("K", t.k().to_string());
        r.input("seed", a.seed.to_string());
        if t.has_sigma() || !t.constraints.is_empty() {
            r.outputs.push(Output::note(
                "diophantine",
                "skipped: the exact system covers pure terms (σ = 0, no constraints); use --numeric",
            ));
        } else {
            let rep = check_total_ellipticity(&t)?;
            let verdict = |ok: bool| if ok { "ok" } else { "violated" };
            r.outputs.push(Output::note(
                "diophantine",
                format!(
                    "cubic {}, quadratic {}, linear {}",
                    verdict(rep.cubic_ok),
                    verdict(rep.quadratic_ok),
                    verdict(rep.linear_ok)
                ),
            ));
            for v in &rep.violations {
                r.outputs.push(Output::note(
                    "violation",
                    format!("{:?} condition at indices {:?}: sum {}", v.kind, v.indices, v.sum).to_lowercase(),
                ));
            }
            r.pass &= rep.passed();
        }
        if a.numeric {
            r.input("p", format_c64(a.p));
            r.input("q", format_c64(a.q));
            let base = BasePair::new(a.p, a.q)?;
            let pol = TruncationPolicy::default();
            for i in t.free_variables() {
                for (name, tr) in Transform::basis(&t) {
                    let res = numeric_ellipticity_check(&t, i, &tr, &base, &pol, a.seed);
                    r.cases.push(CaseResult::from_result(
                        format!("numeric h[{}] under {name}", t.variable_name(i)),
                        res,
                        1e-8,
                    ));
                }
            }
        }
        if a.modular {
            let pol = TruncationPolicy::default();
            let mut g = rng(a.seed);
            let w = omega_triple(&mut g, 0.6);
            r.input("omega", format_list(&w.omega));
            for i in t.free_variables() {
                let res = modular_invariance_check(&t, i, &w, &pol, a.seed);
                r.cases.push(CaseResult::from_result(
                    format!("modular h[{}]", t.variable_name(i)),
                    res,
                    1e-7,
                ));
            }
            let u = polar_vec(&mut g, t.n, 0.1, 0.3);
            let res = verify_modular_transform(&t, &w, &u, &pol);
            r.cases.push(CaseResult::from_result("G-product modular transform", res, 1e-6));
        }
        Ok(())
    });
    report
}

pub fn verify(line: String, a: &VerifyArgs) -> Report {
    let mut report = Report::new(line, a.suite.name());
    report.input("seed", a.seed.to_string());
    if let Some(t) = a.tol {
        report.input("tol", format!("{t:e}"));
    }
    fill(&mut report, |r| {
        if a.suite.ranked() {
            let (n, m) = (a.n.unwrap_or(1), a.m.unwrap_or(if a.suite.name().starts_with("rec") { 0 } else { 1 }));
            check_rank(n, m)?;
            r.input("n", n.to_string());
            r.input("m", m.to_string());
        }
        let cfg = SuiteConfig {
            seed: a.seed,
            count: a.count,
            n: a.n,
            m: a.m,
            threshold: a.tol,
        };
        r.cases = run(a.suite, &cfg)?;
        Ok(())
    });
    report
}

fn quad_output(r: &mut Report, q: &QuadratureResult) {
    r.outputs.push(Output::value("value", q.value, Some(q.err_est)));
    r.outputs.push(Output::note("grid", format!("{} points per axis, {} evaluations", q.n, q.evaluations)));
}

fn fixed<const N: usize>(t: &[C64], what: &str) -> Result<[C64; N]> {
    t.try_into()
        .map_err(|_| EvalError::domain(format!("{what} takes {N} free t parameters, got {}", t.len())))
}

pub fn integrate(line: String, a: &IntegrateArgs) -> Report {
    let kind = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut report = Report::new(line, kind);
    report.input("p", format_c64(a.p));
    report.input("q", format_c64(a.q));
    report.input("t", format_list(&a.t));
    report.input("tol", format!("{:e}", a.tol));
    fill(&mut report, |r| {
        let base = BasePair::new(a.p, a.q)?;
        let pol = TruncationPolicy::default();
        let mut opts = QuadOptions::with_tol(a.tol);
        if let Some(m) = a.margin {
            opts.margin = m;
            r.input("margin", format!("{m}"));
        }
        if let Some(n) = a.nmax {
            opts.nmax = Some(n);
            r.input("nmax", n.to_string());
        }
        match a.kind {
            Kind::Beta => {
                let params = BetaParams::from_free(fixed::<5>(&a.t, "the elliptic beta integral")?, base)?;
                r.outputs.push(Output::value("t6", params.t[5], None));
                let q = elliptic_beta(&params, &opts, &pol)?;
                quad_output(r, &q);
                let th = (100.0 * a.tol).max(1e-8);
                r.cases.push(CaseResult::new("|I - 1|", (q.value - 1.0).norm(), th));
            }
            Kind::V => {
                let params = VParams::from_free(fixed::<7>(&a.t, "the V-function")?, base)?;
                r.outputs.push(Output::value("t8", params.t[7], None));
                let q = v_function(&params, &opts, &pol)?;
                quad_output(r, &q);
                // with t7 t8 = pq the V-function is the beta integral's closed form
                if (params.t[6] * params.t[7] / base.pq() - 1.0).norm() < 1e-10 {
                    let mut closed = C64::new(1.0, 0.0);
                    for i in 0..6 {
                        for j in i + 1..6 {
                            closed *= ell_gamma(params.t[i] * params.t[j], &base, &pol)?.value;
                        }
                    }
                    r.outputs.push(Output::value("closed form", closed, None));
                    let th = (100.0 * a.tol).max(1e-8);
                    r.cases.push(CaseResult::new("|V / closed form - 1|", (q.value / closed - 1.0).norm(), th));
                }
            }
            Kind::Bc => {
                check_rank(a.n, a.m)?;
                r.input("n", a.n.to_string());
                r.input("m", a.m.to_string());
                let params = BcParams::from_free(a.n, a.m, &a.t, base)?;
                r.outputs.push(Output::value("t (balancing)", *params.t.last().expect("nonempty"), None));
                quad_output(r, &i_bc(&params, &opts, &pol)?);
            }
            Kind::A => {
                check_rank(a.n, a.m)?;
                r.input("n", a.n.to_string());
                r.input("m", a.m.to_string());
                r.input("s", format_list(&a.s));
                let k = AParams::count(a.n, a.m);
                if a.s.len() != k || a.t.len() + 1 != k {
                    return Err(EvalError::domain(format!(
                        "A_{} with m = {} takes {k} s and {} free t parameters, got {} and {}",
                        a.n,
                        a.m,
                        k - 1,
                        a.s.len(),
                        a.t.len()
                    )));
                }
                let params = AParams::from_free(a.n, a.m, a.s.clone(), &a.t, base)?;
                r.outputs.push(Output::value("t (balancing)", *params.t.last().expect("nonempty"), None));
                quad_output(r, &i_a(&params, &opts, &pol)?);
            }
        }
        Ok(())
    });
    report
}
