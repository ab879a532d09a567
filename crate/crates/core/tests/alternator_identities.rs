use std::collections::BTreeMap;

use altkit_core::alternator::{self, check_identity, random_case, CaseBounds, Identity, IdentityCase};
use altkit_core::norm::power_sum_det;
use altkit_core::random::case_rng;
use altkit_core::ring::{CoeffRing, MultiPoly, PolyRing, Ring, Scalar};
use altkit_core::tensor::{Tensor, TensorSpace};
use altkit_core::witness::Witness;
use altkit_core::Error;

type Dense = BTreeMap<Vec<u32>, i64>;

fn space(coeffs: CoeffRing, n: usize) -> TensorSpace<PolyRing> {
    TensorSpace::new(PolyRing::univariate(coeffs), n).unwrap()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // Inserting the largest value at `pos` adds `len − pos` inversions.
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// `Σ_σ sign(σ)·x_{σ(1)} ⊗ … ⊗ x_{σ(n)}` over ℤ, polynomials as dense
/// coefficient lists.
fn oracle_alpha(x: &[Vec<i64>]) -> Dense {
    let mut out = Dense::new();
    for (sigma, sign) in permutations(x.len()) {
        let mut partial: Vec<(Vec<u32>, i64)> = vec![(vec![], sign)];
        for &q in &sigma {
            let mut next = Vec::new();
            for (key, c) in &partial {
                for (e, &a) in x[q].iter().enumerate() {
                    if a != 0 {
                        let mut k = key.clone();
                        k.push(e as u32);
                        next.push((k, c * a));
                    }
                }
            }
            partial = next;
        }
        for (k, c) in partial {
            *out.entry(k).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn oracle_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(p, q)| p + q).collect();
            *out.entry(k).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn dense_of(t: &Tensor<PolyRing>) -> Dense {
    t.terms().map(|(k, c)| (k.iter().map(|m| m.exponents()[0]).collect(), c.as_i64().unwrap())).collect()
}

fn to_poly(r: &PolyRing, p: &[i64]) -> MultiPoly {
    use altkit_core::ring::Monomial;
    r.from_terms(p.iter().enumerate().map(|(e, &c)| (Monomial::from_exponents(&[e as u32]), Scalar::from(c))))
}

#[test]
fn alpha_squared_golden_for_one_and_t() {
    let s = space(CoeffRing::Rationals, 2);
    let r = s.factor().clone();
    let x = [r.one(), r.parse("t").unwrap()];
    let a = alternator::alpha(&s, &x).unwrap();
    let sq = s.mul(&a, &a);
    let golden = "1*[1|t^2] - 2*[t|t] + 1*[t^2|1]";
    assert_eq!(s.format(&sq), golden);
    assert_eq!(s.format(&power_sum_det(&s, &x, &x)), golden);
}

#[test]
fn vandermonde_alternator_matches_brute_force() {
    let s = space(CoeffRing::Rationals, 3);
    let r = s.factor().clone();
    let dense = [vec![1], vec![0, 1], vec![0, 0, 1]];
    let x: Vec<MultiPoly> = dense.iter().map(|p| to_poly(&r, p)).collect();
    let a = alternator::alpha(&s, &x).unwrap();
    let expected = oracle_alpha(&dense);
    assert_eq!(expected.len(), 6);
    assert_eq!(dense_of(&a), expected);
    assert_eq!(dense_of(&s.mul(&a, &a)), oracle_mul(&expected, &expected));
}

#[test]
fn random_alternators_match_brute_force() {
    use rand::Rng as _;
    for n in 2..=4 {
        let s = space(CoeffRing::Rationals, n);
        let r = s.factor().clone();
        for case in 0..30 {
            let mut rng = case_rng(7, "oracle", case);
            let dense: Vec<Vec<i64>> =
                (0..n).map(|_| (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let x: Vec<MultiPoly> = dense.iter().map(|p| to_poly(&r, p)).collect();
            assert_eq!(dense_of(&alternator::alpha(&s, &x).unwrap()), oracle_alpha(&dense), "n = {n}, case {case}");
            assert_eq!(alternator::alpha(&s, &x).unwrap(), alternator::alpha_det(&s, &x).unwrap());
        }
    }
}

#[test]
fn characteristic_two_alternator_is_symmetric() {
    let s = space(CoeffRing::prime_field(2).unwrap(), 2);
    let r = s.factor().clone();
    let a = alternator::alpha(&s, &[r.one(), r.parse("t").unwrap()]).unwrap();
    assert_eq!(s.format(&a), "1*[1|t] + 1*[t|1]");
    assert!(s.is_symmetric(&a));
}

#[test]
fn seeded_suites_hold() {
    let configs = [
        (CoeffRing::Rationals, 2),
        (CoeffRing::prime_field(2).unwrap(), 2),
        (CoeffRing::prime_field(5).unwrap(), 3),
        (CoeffRing::Rationals, 3),
        (CoeffRing::Rationals, 4),
    ];
    for (coeffs, n) in configs {
        let s = space(coeffs.clone(), n);
        for id in Identity::ALL {
            let cases = if n == 4 { 5 } else { 20 };
            for case in 0..cases {
                let mut rng = case_rng(2024, id.name(), case);
                let c = random_case(&s, id, &mut rng, CaseBounds::for_arity(n));
                let w = check_identity(&s, &c).unwrap();
                assert!(w.holds(), "{id} over {} n = {n}, case {case}: {w:?}", coeffs.label());
            }
        }
    }
}

#[test]
fn preconditions_are_enforced() {
    let s = space(CoeffRing::Rationals, 2);
    let r = s.factor().clone();
    let t = r.parse("t").unwrap();
    let not_sym = s.pure(&[r.one(), t.clone()]).unwrap();
    let case = IdentityCase::TsLinearity { t: not_sym.clone(), y: not_sym };
    assert!(matches!(check_identity(&s, &case), Err(Error::PreconditionViolated(_))));
    let case = IdentityCase::Coefficient { x: vec![r.one(), t], a: vec![Scalar::ONE, Scalar::ONE], slot: 3 };
    assert_eq!(check_identity(&s, &case), Err(Error::IndexOutOfRange { index: 3, max: 2 }));
    assert!(matches!(alternator::alpha(&s, &[r.one()]), Err(Error::ArityMismatch { expected: 2, got: 1 })));
}

#[test]
fn counterexamples_carry_both_sides() {
    let s = space(CoeffRing::Rationals, 2);
    let r = s.factor().clone();
    let t = r.parse("t").unwrap();
    let a = alternator::alpha(&s, &[r.one(), t.clone()]).unwrap();
    let b = alternator::alpha(&s, &[t, r.one()]).unwrap();
    match Witness::compare(&s, &a, &b) {
        Witness::Counterexample { lhs, rhs } => {
            assert_eq!(lhs, "1*[1|t] - 1*[t|1]");
            assert_eq!(rhs, "-1*[1|t] + 1*[t|1]");
        }
        Witness::Equal => panic!("alternator should change sign"),
    }
}
