//! Seeded verification suites. Each suite draws admissible parameters from
//! a seeded stream, evaluates one identity per case and compares the
//! residual with a threshold.

pub mod cases;
pub mod identities;
pub mod integrals;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::sample::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    /// `None` when the evaluation itself failed.
    pub residual: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseResult {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        CaseResult {
            name: name.into(),
            residual: Some(residual),
            threshold,
            pass: residual.is_finite() && residual < threshold,
            error: None,
        }
    }

    pub fn from_result(name: impl Into<String>, r: Result<f64>, threshold: f64) -> Self {
        match r {
            Ok(v) => Self::new(name, v, threshold),
            Err(e) => CaseResult {
                name: name.into(),
                residual: None,
                threshold,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Beta,
    VReduction,
    TrafoBc,
    TrafoA,
    #[serde(rename = "rec-1")]
    Rec1,
    #[serde(rename = "rec-2")]
    Rec2,
    KernelQdiff,
    Sl3z,
    GammaIdentities,
    ThetaIdentities,
    HypCross,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Beta,
        Suite::VReduction,
        Suite::TrafoBc,
        Suite::TrafoA,
        Suite::Rec1,
        Suite::Rec2,
        Suite::KernelQdiff,
        Suite::Sl3z,
        Suite::GammaIdentities,
        Suite::ThetaIdentities,
        Suite::HypCross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Beta => "beta",
            Suite::VReduction => "v-reduction",
            Suite::TrafoBc => "trafo-bc",
            Suite::TrafoA => "trafo-a",
            Suite::Rec1 => "rec-1",
            Suite::Rec2 => "rec-2",
            Suite::KernelQdiff => "kernel-qdiff",
            Suite::Sl3z => "sl3z",
            Suite::GammaIdentities => "gamma-identities",
            Suite::ThetaIdentities => "theta-identities",
            Suite::HypCross => "hyp-cross",
        }
    }

    /// Whether the suite takes the rank flags `n`, `m`.
    pub fn ranked(self) -> bool {
        matches!(self, Suite::TrafoBc | Suite::TrafoA | Suite::Rec1 | Suite::Rec2)
    }

    fn default_rank(self) -> (usize, usize) {
        match self {
            Suite::Rec1 | Suite::Rec2 => (1, 0),
            _ => (1, 1),
        }
    }

    fn default_count(self) -> usize {
        match self {
            Suite::Beta => 10,
            Suite::KernelQdiff | Suite::Sl3z => 20,
            Suite::VReduction => 5,
            Suite::TrafoBc | Suite::TrafoA => 1,
            Suite::Rec1 | Suite::Rec2 => 3,
            Suite::GammaIdentities | Suite::ThetaIdentities => 100,
            Suite::HypCross => 10,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| EvalError::domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Cases to draw; each suite has its own default.
    pub count: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    /// Replaces every per-case default threshold.
    pub threshold: Option<f64>,
}

impl SuiteConfig {
    pub fn seeded(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Default::default()
        }
    }
}

/// Runs `suite`; configuration errors (a rank the suite cannot handle)
/// are returned as errors, failed identities as failing cases.
pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let mut g = rng(cfg.seed);
    let count = cfg.count.unwrap_or(suite.default_count());
    let (dn, dm) = suite.default_rank();
    let (n, m) = (cfg.n.unwrap_or(dn), cfg.m.unwrap_or(dm));
    if suite.ranked() && n == 0 {
        return Err(EvalError::domain(format!("suite {suite} needs n ≥ 1")));
    }
    if suite.ranked() && n.max(m) > crate::integrals::MAX_RANK {
        return Err(EvalError::domain(format!(
            "rank (n, m) = ({n}, {m}) exceeds {}",
            crate::integrals::MAX_RANK
        )));
    }
    let th = cfg.threshold;
    Ok(match suite {
        Suite::Beta => integrals::beta(&mut g, count, th),
        Suite::VReduction => integrals::v_reduction(&mut g, count, th),
        Suite::TrafoBc => integrals::trafo_bc(&mut g, n, m, count, th),
        Suite::TrafoA => integrals::trafo_a(&mut g, n, m, count, th),
        Suite::Rec1 => integrals::recurrence_i(&mut g, n, m, count, th),
        Suite::Rec2 => integrals::recurrence_ii(&mut g, n, m, count, th),
        Suite::KernelQdiff => integrals::kernel_qdiff(&mut g, count, th),
        Suite::Sl3z => {
            // four points per triple: 20 points over 5 triples by default
            let triples = count.div_ceil(4);
            identities::sl3z(&mut g, triples, 4, th)
        }
        Suite::GammaIdentities => identities::gamma_identities(&mut g, count, th),
        Suite::ThetaIdentities => identities::theta_identities(&mut g, count, th),
        Suite::HypCross => identities::hyp_cross(&mut g, count, th),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn error_case_fails() {
        let c = CaseResult::from_result("x", Err(EvalError::domain("bad")), 1.0);
        assert!(!c.pass && c.residual.is_none());
        assert!(!CaseResult::new("nan", f64::NAN, 1.0).pass);
    }
}
