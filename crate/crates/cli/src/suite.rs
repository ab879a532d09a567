use std::time::Instant;

use altkit_core::alternator::{self, AlternatorInstance, CaseBounds};
use altkit_core::blowup::{self, NormMapPlus, ReesAlgebra};
use altkit_core::norm::{self, FamilyInstance, NormMap};
use altkit_core::random::{case_rng, CaseRng, PolyBounds, Sample};
use altkit_core::ring::{AlgebraMap, CoeffRing, FiniteFreeAlgebra, Monomial, MultiPoly, PolyRing, Ring, Scalar};
use altkit_core::span::{Level, Localization};
use altkit_core::tensor::TensorSpace;
use altkit_core::witness::Witness;
use rayon::prelude::*;

use crate::config::{Check, SuiteConfig};
use crate::error::CliError;
use crate::report::{CheckResult, Failure, Report, Timing};

/// Tuples for contexts whose structure algebra gets built stay small; the
/// degree must reach `n − 1` for `α(x) ≠ 0` to be possible.
fn context_bounds(n: usize) -> PolyBounds {
    PolyBounds { max_terms: 2, max_degree: (n as u32 - 1).max(2) }
}

/// Coefficients of the random monic polynomials over `F[s]`.
const FAMILY_BOUNDS: PolyBounds = PolyBounds { max_terms: 2, max_degree: 1 };
const MAX_ATTEMPTS: u64 = 1000;

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, CliError> {
    run(cfg, false)
}

/// As [`run_suite`], with wall-clock times attached to the report.
pub fn run_suite_timed(cfg: &SuiteConfig) -> Result<Report, CliError> {
    run(cfg, true)
}

fn run(cfg: &SuiteConfig, timed: bool) -> Result<Report, CliError> {
    cfg.validate()?;
    let coeffs = cfg.ring.coeff_ring()?;
    let start = Instant::now();
    let mut results = Vec::new();
    let mut checks_ms = Vec::new();
    for &n in &cfg.n {
        for &check in &cfg.checks {
            let t0 = Instant::now();
            let failures = crate::with_thread_cap(|| run_check(cfg, &coeffs, n, check));
            checks_ms.push(t0.elapsed().as_secs_f64() * 1e3);
            results.push(CheckResult {
                name: check.name().to_string(),
                ring: coeffs.label(),
                n,
                cases_run: cfg.cases,
                failures,
            });
        }
    }
    let config = serde_json::to_value(cfg.echo()).expect("config serializes");
    let mut report = Report::new("verify", config, results);
    if timed {
        report.timing = Some(Timing { total_ms: start.elapsed().as_secs_f64() * 1e3, checks_ms });
    }
    Ok(report)
}

/// Failures of one check, sorted by case index.
fn run_check(cfg: &SuiteConfig, coeffs: &CoeffRing, n: usize, check: Check) -> Vec<Failure> {
    let label = format!("{}/{}/n{}", check.name(), coeffs.label(), n);
    (0..cfg.cases)
        .into_par_iter()
        .filter_map(|case| {
            let mut rng = case_rng(cfg.seed, &label, case);
            match run_case(cfg, coeffs, n, check, case, &mut rng) {
                Ok(Witness::Equal) => None,
                Ok(Witness::Counterexample { lhs, rhs }) => Some(Failure::mismatch(case, lhs, rhs)),
                Err(e) => Some(Failure::error(case, e.to_string())),
            }
        })
        .collect()
}

fn bounds(cfg: &SuiteConfig, n: usize) -> CaseBounds {
    let mut elements = PolyBounds { max_terms: cfg.max_terms, max_degree: cfg.max_degree };
    if n >= 4 {
        elements.max_terms = elements.max_terms.min(2);
    }
    let factors = PolyBounds { max_terms: cfg.max_terms.min(2), max_degree: cfg.max_degree.min(2) };
    CaseBounds { elements, factors }
}

fn run_case(
    cfg: &SuiteConfig,
    coeffs: &CoeffRing,
    n: usize,
    check: Check,
    case: u64,
    rng: &mut CaseRng,
) -> altkit_core::Result<Witness> {
    let space = TensorSpace::new(PolyRing::univariate(*coeffs), n)?;
    let b = bounds(cfg, n);
    match check {
        Check::Identity(id) => {
            let c = alternator::random_case(&space, id, rng, b);
            alternator::check_identity(&space, &c)
        }
        Check::Traceexp => {
            let x = alternator::random_tuple(&space, rng, b.elements);
            let y = alternator::random_tuple(&space, rng, b.elements);
            norm::traceexp_check(&space, &x, &y)
        }
        Check::TraceFormula => {
            let loc = random_context(&space, rng)?;
            let alg = loc.structure_algebra()?;
            let z = space.factor().sample(rng, b.elements);
            norm::trace_formula_check(&loc, &alg, &z)
        }
        Check::Basis => basis_case(&space, rng, b),
        Check::Pullback => pullback_case(coeffs, n, rng),
        Check::PullbackPlus => pullback_plus_case(coeffs, n, rng),
        Check::DiagonalProbe => diagonal_case(coeffs, n, case, rng),
    }
}

/// A context `x` with `α(x) ≠ 0`, drawn from `rng`.
fn random_context(space: &TensorSpace<PolyRing>, rng: &mut CaseRng) -> altkit_core::Result<Localization<PolyRing>> {
    for _ in 0..MAX_ATTEMPTS {
        let x = alternator::random_tuple(space, rng, context_bounds(space.arity()));
        let inst = AlternatorInstance::new(space.clone(), x)?;
        if !inst.alpha().is_zero() {
            return Localization::new(inst);
        }
    }
    Err(altkit_core::Error::PreconditionViolated("no tuple with nonzero alternator found".into()))
}

/// Coordinates of a random invariant tensor reconstruct it; for `n ≤ 3` the
/// structure constants also pass validation and have discriminant `α²`.
fn basis_case(space: &TensorSpace<PolyRing>, rng: &mut CaseRng, b: CaseBounds) -> altkit_core::Result<Witness> {
    let loc = random_context(space, rng)?;
    let y = alternator::random_invariant_n11(space, rng, b.factors);
    let coords = loc.coordinates_of_invariant(&y)?;
    let back = loc.reconstruct(&coords);
    let mut w = Witness::compare(&loc, &back, &loc.element(Level::R, y, 0)?);
    if space.arity() <= 3 {
        let alg = loc.structure_algebra()?;
        let a2 = loc.element(Level::A, loc.instance().alpha_sq().clone(), 0)?;
        w = w.and(Witness::compare(&loc, &loc.discriminant(&alg), &a2));
    }
    Ok(w)
}

/// `x = (1, t + a·1, t² + …, …)`: unitriangular in the powers of `t`.
fn unitriangular(r: &PolyRing, n: usize, rng: &mut CaseRng) -> Vec<MultiPoly> {
    let coeffs = r.coeffs();
    (0..n)
        .map(|i| {
            let mut terms = vec![(Monomial::from_exponents(&[i as u32]), Scalar::ONE)];
            for j in 0..i {
                terms.push((Monomial::from_exponents(&[j as u32]), coeffs.sample(rng, PolyBounds::default())));
            }
            r.from_terms(terms)
        })
        .collect()
}

fn monogenic_family<B: Ring + Sample>(
    base: B,
    coeffs: &CoeffRing,
    n: usize,
    rng: &mut CaseRng,
    accept: impl Fn(&FamilyInstance<B>) -> bool,
) -> altkit_core::Result<FamilyInstance<B>> {
    let r = PolyRing::univariate(*coeffs);
    for _ in 0..MAX_ATTEMPTS {
        let lower: Vec<B::Elem> = (0..n).map(|_| base.sample(rng, FAMILY_BOUNDS)).collect();
        let e = FiniteFreeAlgebra::monogenic(base.clone(), lower)?;
        let map = AlgebraMap::new(r.clone(), e.clone(), vec![e.basis(1)])?;
        let inst = FamilyInstance::new(map, unitriangular(&r, n, rng))?;
        if accept(&inst) {
            return Ok(inst);
        }
    }
    Err(altkit_core::Error::PreconditionViolated("no separable polynomial found".into()))
}

/// Étale `E = F[t]/(g)` with random separable `g`: mapped structure
/// constants of `ℛ` equal those of `E` in the basis `f(x)`.
fn pullback_case(coeffs: &CoeffRing, n: usize, rng: &mut CaseRng) -> altkit_core::Result<Witness> {
    let inst = monogenic_family(*coeffs, coeffs, n, rng, |i| i.is_etale())?;
    let nm = NormMap::new(inst)?;
    Ok(nm.verify_pullback()?.witness.and(nm.table_agrees()?))
}

/// Generically étale `E = F[s][t]/(g)`: the structure constants pull back
/// into `B₊`, and `𝔫⁺` is multiplicative on products of generators.
fn pullback_plus_case(coeffs: &CoeffRing, n: usize, rng: &mut CaseRng) -> altkit_core::Result<Witness> {
    let base = PolyRing::new(*coeffs, &["s"]);
    let inst = monogenic_family(base, coeffs, n, rng, |i| i.is_generically_etale())?;
    let source = inst.source().clone();
    let rees = ReesAlgebra::new(inst.source_instance()?);
    let nm = NormMapPlus::new(inst)?;
    let mut w = nm.verify_pullback_plus()?.witness;
    let space = TensorSpace::new(source, n)?;
    let pair = |rng: &mut CaseRng| {
        let y = alternator::random_tuple(&space, rng, context_bounds(n));
        let z = alternator::random_tuple(&space, rng, context_bounds(n));
        rees.generator(y, z)
    };
    let g1 = pair(rng)?;
    let g2 = pair(rng)?;
    let lhs = nm.apply(&rees, &rees.mul(&g1, &g2)?)?;
    let b = nm.instance().base();
    let rhs = b.mul(&nm.apply(&rees, &g1)?, &nm.apply(&rees, &g2)?);
    if !nm.bplus().equal(&lhs, &rhs) {
        w = w.and(Witness::Counterexample { lhs: b.format(&lhs), rhs: b.format(&rhs) });
    }
    Ok(w)
}

/// Distinct points are off the diagonal; repeating one puts them on it.
fn diagonal_case(coeffs: &CoeffRing, n: usize, case: u64, rng: &mut CaseRng) -> altkit_core::Result<Witness> {
    let mut k = 1u32;
    if let CoeffRing::PrimeField(p) = coeffs {
        while p.pow(k) < n as u64 {
            k += 1;
        }
    }
    if n <= 3 && case % 2 == 1 {
        k += 1;
    }
    let vars: Vec<String> = (1..=k).map(|i| format!("u{i}")).collect();
    let ring = PolyRing::new(*coeffs, &vars);
    let mut points: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while points.len() < n {
        let p: Vec<Scalar> = (0..k).map(|_| coeffs.sample(rng, PolyBounds::default())).collect();
        if !points.contains(&p) {
            points.push(p);
        }
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(altkit_core::Error::PreconditionViolated("not enough distinct points".into()));
        }
    }
    let fmt = |v: bool| if v { "on_diagonal".to_string() } else { "off_diagonal".to_string() };
    let distinct = blowup::diagonal_support_probe(&ring, &points, None)?;
    if distinct.on_diagonal {
        return Ok(Witness::Counterexample { lhs: fmt(true), rhs: fmt(false) });
    }
    points[n - 1] = points[0].clone();
    let repeated = blowup::diagonal_support_probe(&ring, &points, None)?;
    if !repeated.on_diagonal {
        return Ok(Witness::Counterexample { lhs: fmt(false), rhs: fmt(true) });
    }
    Ok(Witness::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RingSpec;

    #[test]
    fn small_default_run_passes() {
        let cfg = SuiteConfig { cases: 3, ..SuiteConfig::default() };
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_json());
        assert_eq!(report.results.len(), 2 * cfg.checks.len());
    }

    #[test]
    fn prime_field_run_passes() {
        let cfg = SuiteConfig { ring: RingSpec::Prime(2), n: vec![2, 3], cases: 3, ..SuiteConfig::default() };
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_json());
    }
}
