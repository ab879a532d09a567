use std::fmt;
use std::str::FromStr;

use altkit_core::alternator::Identity;
use altkit_core::ring::CoeffRing;
use serde::Serialize;

use crate::error::CliError;

/// `q` for ℚ, `fp:<p>` for 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Rationals,
    Prime(u64),
}

impl RingSpec {
    pub fn coeff_ring(&self) -> Result<CoeffRing, CliError> {
        match self {
            RingSpec::Rationals => Ok(CoeffRing::Rationals),
            RingSpec::Prime(p) => CoeffRing::prime_field(*p).map_err(|e| CliError::ConfigInvalid(e.to_string())),
        }
    }
}

impl FromStr for RingSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(RingSpec::Rationals);
        }
        let p = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("Fp:"))
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| CliError::ConfigInvalid(format!("ring must be q or fp:<p>, got {s:?}")))?;
        let spec = RingSpec::Prime(p);
        spec.coeff_ring()?;
        Ok(spec)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rationals => f.write_str("q"),
            RingSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// One named family of seeded checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Identity(Identity),
    Traceexp,
    TraceFormula,
    Basis,
    Pullback,
    PullbackPlus,
    DiagonalProbe,
}

impl Check {
    pub fn all() -> Vec<Check> {
        let mut out: Vec<Check> = Identity::ALL.into_iter().map(Check::Identity).collect();
        out.extend([
            Check::Traceexp,
            Check::TraceFormula,
            Check::Basis,
            Check::Pullback,
            Check::PullbackPlus,
            Check::DiagonalProbe,
        ]);
        out
    }

    pub fn name(&self) -> &'static str {
        match self {
            Check::Identity(id) => id.name(),
            Check::Traceexp => "traceexp",
            Check::TraceFormula => "trace_formula",
            Check::Basis => "basis",
            Check::Pullback => "pullback",
            Check::PullbackPlus => "pullback_plus",
            Check::DiagonalProbe => "diagonal_probe",
        }
    }

    /// Parses a comma-separated list; `all` expands to every check.
    pub fn parse_list(s: &str) -> Result<Vec<Check>, CliError> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                for c in Check::all() {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                continue;
            }
            let c = Check::all()
                .into_iter()
                .find(|c| c.name() == part)
                .ok_or_else(|| CliError::ConfigInvalid(format!("unknown identity {part:?}")))?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        if out.is_empty() {
            return Err(CliError::ConfigInvalid("no identities selected".into()));
        }
        Ok(out)
    }
}

pub const MAX_ARITY: usize = altkit_core::tensor::MAX_ARITY;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub ring: RingSpec,
    pub n: Vec<usize>,
    pub cases: u64,
    pub seed: u64,
    pub max_degree: u32,
    pub max_terms: usize,
    pub checks: Vec<Check>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            ring: RingSpec::Rationals,
            n: vec![2, 3],
            cases: 100,
            seed: 0,
            max_degree: 3,
            max_terms: 4,
            checks: Check::all(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.cases == 0 {
            return Err(CliError::ConfigInvalid("cases must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(CliError::ConfigInvalid("no arity given".into()));
        }
        if let Some(bad) = self.n.iter().find(|&&n| !(2..=MAX_ARITY).contains(&n)) {
            return Err(CliError::ConfigInvalid(format!("arity {bad} outside 2..={MAX_ARITY}")));
        }
        if self.max_terms == 0 {
            return Err(CliError::ConfigInvalid("max_terms must be at least 1".into()));
        }
        if self.checks.is_empty() {
            return Err(CliError::ConfigInvalid("no identities selected".into()));
        }
        self.ring.coeff_ring()?;
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            ring: self.ring.to_string(),
            n: self.n.clone(),
            cases: self.cases,
            seed: self.seed,
            max_degree: self.max_degree,
            max_terms: self.max_terms,
            identities: self.checks.iter().map(|c| c.name().to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub ring: String,
    pub n: Vec<usize>,
    pub cases: u64,
    pub seed: u64,
    pub max_degree: u32,
    pub max_terms: usize,
    pub identities: Vec<String>,
}
