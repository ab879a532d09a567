//! Alternators `α(x) = Σ_σ sign(σ) x_σ(1) ⊗ … ⊗ x_σ(n)` and the identities
//! they satisfy in `T^n_A R`.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::random::{CaseRng, PolyBounds, Sample};
use crate::ring::{linalg, Ring};
use crate::tensor::{Coeff, Key, Permutation, Tensor, TensorFactor, TensorSpace};
use crate::witness::Witness;

/// `Σ_π sign(π) π·t` over the given permutations, skipping terms whose key
/// repeats a label in two permuted slots (their contributions cancel).
fn alternate<F: TensorFactor>(space: &TensorSpace<F>, t: &Tensor<F>, perms: &[Permutation], moved: usize) -> Tensor<F> {
    let base = space.base();
    let signed: Vec<(&Permutation, bool)> = perms.iter().map(|p| (p, p.sign() > 0)).collect();
    let mut acc: FxHashMap<Key<F>, Coeff<F>> = FxHashMap::default();
    for (k, c) in t.terms() {
        let repeated = (0..moved).any(|i| (i + 1..moved).any(|j| k[i] == k[j]));
        if repeated {
            continue;
        }
        let nc = base.neg(c);
        for (p, positive) in &signed {
            let mut key = k.clone();
            for (i, l) in k.iter().enumerate() {
                key[p.apply(i)] = l.clone();
            }
            let coef = if *positive { c.clone() } else { nc.clone() };
            match acc.entry(key) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let v = base.add(e.get(), &coef);
                    *e.get_mut() = v;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(coef);
                }
            }
        }
    }
    space.from_terms(acc)
}

/// The `A`-linear map `x₁ ⊗ … ⊗ x_n ↦ α(x₁, …, x_n)`.
pub fn alpha_map<F: TensorFactor>(space: &TensorSpace<F>, t: &Tensor<F>) -> Tensor<F> {
    let n = space.arity();
    alternate(space, t, &Permutation::all(n), n)
}

/// `α_{n−1} ⊗ id_R`: alternates the first `n−1` slots, fixes the last.
pub fn alpha_n11<F: TensorFactor>(space: &TensorSpace<F>, t: &Tensor<F>) -> Result<Tensor<F>> {
    let n = space.arity();
    if n < 2 {
        return Err(Error::ArityMismatch { expected: 2, got: n });
    }
    Ok(alternate(space, t, &Permutation::all_fixing_last(n), n - 1))
}

pub fn alpha<F: TensorFactor>(space: &TensorSpace<F>, x: &[F::Elem]) -> Result<Tensor<F>> {
    Ok(alpha_map(space, &space.pure(x)?))
}

/// `det(X)` with `X_{p,q} = φ_p(x_q)`, by cofactor expansion in `T^n_A R`.
pub fn alpha_det<F: TensorFactor>(space: &TensorSpace<F>, x: &[F::Elem]) -> Result<Tensor<F>> {
    let n = space.arity();
    if x.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: x.len() });
    }
    let m: Vec<Vec<Tensor<F>>> = (1..=n)
        .map(|p| x.iter().map(|xq| space.coprojection(p, xq)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(linalg::det(space, &m))
}

/// A fixed tuple `x` with `α(x)` and `α²(x)` cached.
#[derive(Clone, Debug)]
pub struct AlternatorInstance<F: TensorFactor> {
    space: TensorSpace<F>,
    x: Vec<F::Elem>,
    alpha: Tensor<F>,
    alpha_sq: Tensor<F>,
}

impl<F: TensorFactor> AlternatorInstance<F> {
    pub fn new(space: TensorSpace<F>, x: Vec<F::Elem>) -> Result<Self> {
        let alpha = alpha(&space, &x)?;
        let alpha_sq = space.mul(&alpha, &alpha);
        Ok(AlternatorInstance { space, x, alpha, alpha_sq })
    }

    pub fn space(&self) -> &TensorSpace<F> {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.space.arity()
    }

    pub fn factor(&self) -> &F {
        self.space.factor()
    }

    pub fn x(&self) -> &[F::Elem] {
        &self.x
    }

    pub fn alpha(&self) -> &Tensor<F> {
        &self.alpha
    }

    pub fn alpha_sq(&self) -> &Tensor<F> {
        &self.alpha_sq
    }

    /// The tuple with `z` in slot `i` (1-based).
    pub fn with_slot(&self, i: usize, z: &F::Elem) -> Vec<F::Elem> {
        let mut xs = self.x.clone();
        xs[i - 1] = z.clone();
        xs
    }

    /// `α(x₁, …, z, …, x_n)` with `z` in slot `i` (1-based).
    pub fn alpha_with_slot(&self, i: usize, z: &F::Elem) -> Tensor<F> {
        alpha(&self.space, &self.with_slot(i, z)).expect("arity preserved")
    }

    /// `x_[i]`: drop the `i`-th factor (1-based) and put `1` in the last slot.
    pub fn x_bracket(&self, i: usize) -> Tensor<F> {
        x_bracket(&self.space, &self.x, i)
    }

    pub fn phi_n(&self, z: &F::Elem) -> Tensor<F> {
        self.space.coprojection(self.arity(), z).expect("last slot exists")
    }
}

pub fn x_bracket<F: TensorFactor>(space: &TensorSpace<F>, x: &[F::Elem], i: usize) -> Tensor<F> {
    let mut xs: Vec<F::Elem> = x.iter().enumerate().filter(|(q, _)| q + 1 != i).map(|(_, v)| v.clone()).collect();
    xs.push(space.factor().one());
    space.pure(&xs).expect("arity preserved")
}

/// The identities between alternators verified by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `α(t·y) = α(t)·y` for symmetric `y`.
    TsLinearity,
    /// `α(t) = Σ_j (−1)^{|τ_{j,n}|} α_{n−1,1}(τ_{j,n} t)`.
    DegreeRelation,
    /// `α_{n−1,1}(t·y) = α_{n−1,1}(t)·y` for `𝔖_{n−1}`-invariant `y`.
    N11Linearity,
    /// `α(x)·y = Σ_i (−1)^{n−i} α(x_[i]·y)·φ_n(x_i)` for `𝔖_{n−1}`-invariant `y`.
    SymmetricSpan,
    /// `α(x₁, …, Σ a_k x_k, …, x_n) = a_i·α(x)` with the sum in slot `i`.
    Coefficient,
    /// `α(x)·φ_n(z) = Σ_i α(x₁, …, z, …, x_n)·φ_n(x_i)`.
    RSpan,
    /// `α(x)` agrees with the cofactor expansion of `det(φ_p(x_q))`.
    Determinant,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::TsLinearity,
        Identity::DegreeRelation,
        Identity::N11Linearity,
        Identity::SymmetricSpan,
        Identity::Coefficient,
        Identity::RSpan,
        Identity::Determinant,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::TsLinearity => "ts_linearity",
            Identity::DegreeRelation => "degree_relation",
            Identity::N11Linearity => "n11_linearity",
            Identity::SymmetricSpan => "symmetric_span",
            Identity::Coefficient => "coefficient",
            Identity::RSpan => "r_span",
            Identity::Determinant => "determinant",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown identity {s:?}")))
    }
}

/// The data one identity quantifies over.
#[derive(Clone, Debug)]
pub enum IdentityCase<F: TensorFactor> {
    TsLinearity { t: Tensor<F>, y: Tensor<F> },
    DegreeRelation { t: Tensor<F> },
    N11Linearity { t: Tensor<F>, y: Tensor<F> },
    SymmetricSpan { x: Vec<F::Elem>, y: Tensor<F> },
    Coefficient { x: Vec<F::Elem>, a: Vec<Coeff<F>>, slot: usize },
    RSpan { x: Vec<F::Elem>, z: F::Elem },
    Determinant { x: Vec<F::Elem> },
}

impl<F: TensorFactor> IdentityCase<F> {
    pub fn identity(&self) -> Identity {
        match self {
            IdentityCase::TsLinearity { .. } => Identity::TsLinearity,
            IdentityCase::DegreeRelation { .. } => Identity::DegreeRelation,
            IdentityCase::N11Linearity { .. } => Identity::N11Linearity,
            IdentityCase::SymmetricSpan { .. } => Identity::SymmetricSpan,
            IdentityCase::Coefficient { .. } => Identity::Coefficient,
            IdentityCase::RSpan { .. } => Identity::RSpan,
            IdentityCase::Determinant { .. } => Identity::Determinant,
        }
    }
}

fn check_tuple<F: TensorFactor>(space: &TensorSpace<F>, x: &[F::Elem]) -> Result<()> {
    if x.len() == space.arity() {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected: space.arity(), got: x.len() })
    }
}

fn check_tensor<F: TensorFactor>(space: &TensorSpace<F>, t: &Tensor<F>) -> Result<()> {
    if t.arity() == space.arity() {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected: space.arity(), got: t.arity() })
    }
}

/// Computes both sides of the identity exactly and compares them.
pub fn check_identity<F: TensorFactor>(space: &TensorSpace<F>, case: &IdentityCase<F>) -> Result<Witness> {
    let n = space.arity();
    match case {
        IdentityCase::TsLinearity { t, y } => {
            check_tensor(space, t)?;
            check_tensor(space, y)?;
            if !space.is_symmetric(y) {
                return Err(Error::PreconditionViolated("y is not symmetric".into()));
            }
            let lhs = alpha_map(space, &space.mul(t, y));
            let rhs = space.mul(&alpha_map(space, t), y);
            Ok(Witness::compare(space, &lhs, &rhs))
        }
        IdentityCase::DegreeRelation { t } => {
            check_tensor(space, t)?;
            if n < 2 {
                return Err(Error::PreconditionViolated("needs n ≥ 2".into()));
            }
            let lhs = alpha_map(space, t);
            let mut rhs = space.zero();
            for j in 0..n {
                let tau = Permutation::transposition(n, j, n - 1);
                let term = alpha_n11(space, &space.permute(t, &tau)?)?;
                rhs = if tau.sign() > 0 { space.add(&rhs, &term) } else { space.sub(&rhs, &term) };
            }
            Ok(Witness::compare(space, &lhs, &rhs))
        }
        IdentityCase::N11Linearity { t, y } => {
            check_tensor(space, t)?;
            check_tensor(space, y)?;
            if n < 2 {
                return Err(Error::PreconditionViolated("needs n ≥ 2".into()));
            }
            if !space.is_sym_n11(y) {
                return Err(Error::PreconditionViolated("y is not invariant under the first n-1 slots".into()));
            }
            let lhs = alpha_n11(space, &space.mul(t, y))?;
            let rhs = space.mul(&alpha_n11(space, t)?, y);
            Ok(Witness::compare(space, &lhs, &rhs))
        }
        IdentityCase::SymmetricSpan { x, y } => {
            check_tuple(space, x)?;
            check_tensor(space, y)?;
            if !space.is_sym_n11(y) {
                return Err(Error::PreconditionViolated("y is not invariant under the first n-1 slots".into()));
            }
            let lhs = space.mul(&alpha(space, x)?, y);
            let mut rhs = space.zero();
            for i in 1..=n {
                let inner = alpha_map(space, &space.mul(&x_bracket(space, x, i), y));
                let term = space.mul(&inner, &space.coprojection(n, &x[i - 1])?);
                rhs = if (n - i) % 2 == 0 { space.add(&rhs, &term) } else { space.sub(&rhs, &term) };
            }
            Ok(Witness::compare(space, &lhs, &rhs))
        }
        IdentityCase::Coefficient { x, a, slot } => {
            check_tuple(space, x)?;
            if a.len() != n {
                return Err(Error::ArityMismatch { expected: n, got: a.len() });
            }
            if *slot == 0 || *slot > n {
                return Err(Error::IndexOutOfRange { index: *slot, max: n });
            }
            let factor = space.factor();
            let lift = |c: &Coeff<F>, v: &F::Elem| -> F::Elem {
                let scaled: Vec<_> =
                    factor.decompose(v).into_iter().map(|(l, d)| (l, space.base().mul(c, &d))).collect();
                factor.compose(scaled)
            };
            let z = x.iter().zip(a).fold(factor.zero(), |acc, (v, c)| factor.add(&acc, &lift(c, v)));
            let mut xs = x.clone();
            xs[slot - 1] = z;
            let lhs = alpha(space, &xs)?;
            let rhs = space.scale(&a[slot - 1], &alpha(space, x)?);
            Ok(Witness::compare(space, &lhs, &rhs))
        }
        IdentityCase::RSpan { x, z } => {
            check_tuple(space, x)?;
            let lhs = space.mul(&alpha(space, x)?, &space.coprojection(n, z)?);
            let mut rhs = space.zero();
            for i in 1..=n {
                let mut xs = x.clone();
                xs[i - 1] = z.clone();
                let term = space.mul(&alpha(space, &xs)?, &space.coprojection(n, &x[i - 1])?);
                rhs = space.add(&rhs, &term);
            }
            Ok(Witness::compare(space, &lhs, &rhs))
        }
        IdentityCase::Determinant { x } => {
            let lhs = alpha(space, x)?;
            let rhs = alpha_det(space, x)?;
            Ok(Witness::compare(space, &lhs, &rhs))
        }
    }
}

/// Reads a tensor of arity one back as an element of `R`.
pub fn tensor1_to_elem<F: TensorFactor>(factor: &F, t: &Tensor<F>) -> F::Elem {
    factor.compose(t.terms().map(|(k, c)| (k[0].clone(), c.clone())).collect())
}

/// Bounds for the random instances of the identity suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseBounds {
    /// Entries of tuples `x` and single elements `z`.
    pub elements: PolyBounds,
    /// Factors of the random pure tensors behind `t` and `y`.
    pub factors: PolyBounds,
}

impl CaseBounds {
    /// Defaults that keep `n = 4` cases in the millisecond range.
    pub fn for_arity(n: usize) -> Self {
        let elements = if n >= 4 { PolyBounds { max_terms: 2, max_degree: 3 } } else { PolyBounds::default() };
        CaseBounds { elements, factors: PolyBounds { max_terms: 2, max_degree: 2 } }
    }
}

pub fn random_tuple<F: TensorFactor + Sample>(space: &TensorSpace<F>, rng: &mut CaseRng, b: PolyBounds) -> Vec<F::Elem> {
    (0..space.arity()).map(|_| space.factor().sample(rng, b)).collect()
}

pub fn random_pure<F: TensorFactor + Sample>(space: &TensorSpace<F>, rng: &mut CaseRng, b: PolyBounds) -> Tensor<F> {
    space.pure(&random_tuple(space, rng, b)).expect("arity matches")
}

/// Sum of one or two random pure tensors.
pub fn random_tensor<F: TensorFactor + Sample>(space: &TensorSpace<F>, rng: &mut CaseRng, b: PolyBounds) -> Tensor<F> {
    use rand::Rng as _;
    let count = rng.gen_range(1..=2);
    let parts: Vec<Tensor<F>> = (0..count).map(|_| random_pure(space, rng, b)).collect();
    space.sum(parts.iter())
}

/// Orbit sum of a random pure tensor under the full symmetric group.
pub fn random_symmetric<F: TensorFactor + Sample>(space: &TensorSpace<F>, rng: &mut CaseRng, b: PolyBounds) -> Tensor<F> {
    space.symmetrize(&random_pure(space, rng, b))
}

/// Orbit sum of a random pure tensor under permutations of the first `n−1` slots.
pub fn random_invariant_n11<F: TensorFactor + Sample>(space: &TensorSpace<F>, rng: &mut CaseRng, b: PolyBounds) -> Tensor<F> {
    space.symmetrize_n11(&random_pure(space, rng, b))
}

/// Draws a random instance of `identity`.
pub fn random_case<F>(space: &TensorSpace<F>, identity: Identity, rng: &mut CaseRng, b: CaseBounds) -> IdentityCase<F>
where
    F: TensorFactor + Sample,
    F::Base: Sample,
{
    match identity {
        Identity::TsLinearity => {
            let t = random_tensor(space, rng, b.factors);
            let y = random_symmetric(space, rng, b.factors);
            IdentityCase::TsLinearity { t, y }
        }
        Identity::DegreeRelation => IdentityCase::DegreeRelation { t: random_tensor(space, rng, b.elements) },
        Identity::N11Linearity => {
            let t = random_tensor(space, rng, b.factors);
            let y = random_invariant_n11(space, rng, b.factors);
            IdentityCase::N11Linearity { t, y }
        }
        Identity::SymmetricSpan => {
            let x = random_tuple(space, rng, b.elements);
            let y = random_invariant_n11(space, rng, b.factors);
            IdentityCase::SymmetricSpan { x, y }
        }
        Identity::Coefficient => {
            use rand::Rng as _;
            let x = random_tuple(space, rng, b.elements);
            let a = (0..space.arity()).map(|_| space.base().sample(rng, b.elements)).collect();
            let slot = rng.gen_range(1..=space.arity());
            IdentityCase::Coefficient { x, a, slot }
        }
        Identity::RSpan => {
            let x = random_tuple(space, rng, b.elements);
            let z = space.factor().sample(rng, b.elements);
            IdentityCase::RSpan { x, z }
        }
        Identity::Determinant => IdentityCase::Determinant { x: random_tuple(space, rng, b.elements) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffRing, PolyRing};

    fn setup(n: usize) -> (PolyRing, TensorSpace<PolyRing>) {
        let r = PolyRing::univariate(CoeffRing::Rationals);
        (r.clone(), TensorSpace::new(r, n).unwrap())
    }

    #[test]
    fn alpha_of_one_t() {
        let (r, s) = setup(2);
        let x = vec![r.one(), r.parse("t").unwrap()];
        let a = alpha(&s, &x).unwrap();
        assert_eq!(s.format(&a), "1*[1|t] - 1*[t|1]");
        assert_eq!(a, alpha_det(&s, &x).unwrap());
        let inst = AlternatorInstance::new(s.clone(), x).unwrap();
        assert_eq!(s.format(inst.alpha_sq()), "1*[1|t^2] - 2*[t|t] + 1*[t^2|1]");
    }

    #[test]
    fn repeated_argument_vanishes() {
        let (r, s) = setup(3);
        let t = r.parse("t + 2").unwrap();
        assert!(alpha(&s, &[t.clone(), r.one(), t]).unwrap().is_zero());
    }

    #[test]
    fn partial_alternator() {
        let (r, s) = setup(3);
        let z = r.parse("t^2 + 1").unwrap();
        let t = r.parse("t").unwrap();
        let input = s.pure(&[r.one(), t.clone(), z.clone()]).unwrap();
        let s2 = s.with_arity(2).unwrap();
        let a2 = alpha(&s2, &[r.one(), t.clone()]).unwrap();
        let expected = s.from_terms(a2.terms().flat_map(|(k, c)| {
            r.decompose(&z).into_iter().map(move |(m, d)| {
                let mut key = k.clone();
                key.push(m);
                (key, c.mul(&d))
            })
        }));
        assert_eq!(alpha_n11(&s, &input).unwrap(), expected);
        let degenerate = s.pure(&[t.clone(), t, z]).unwrap();
        assert!(alpha_n11(&s, &degenerate).unwrap().is_zero());
        let (_, s1) = setup(1);
        assert!(alpha_n11(&s1, &s1.one()).is_err());
    }

    #[test]
    fn r_span_golden() {
        let (r, s) = setup(2);
        let x = vec![r.one(), r.parse("t").unwrap()];
        let z = r.parse("t^2").unwrap();
        let w = check_identity(&s, &IdentityCase::RSpan { x, z }).unwrap();
        assert!(w.holds());
    }

    #[test]
    fn coefficient_with_integer_weights() {
        let (r, s) = setup(2);
        let x = vec![r.parse("t + 1").unwrap(), r.parse("t^2").unwrap()];
        let a = vec![crate::ring::Scalar::from(3), crate::ring::Scalar::ZERO];
        let w = check_identity(&s, &IdentityCase::Coefficient { x, a, slot: 1 }).unwrap();
        assert!(w.holds());
    }

    #[test]
    fn precondition_is_enforced() {
        let (r, s) = setup(3);
        let y = s.pure(&[r.parse("t").unwrap(), r.one(), r.one()]).unwrap();
        let x = vec![r.one(); 3];
        let err = check_identity(&s, &IdentityCase::SymmetricSpan { x, y }).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
    }

    #[test]
    fn identity_names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("nope".parse::<Identity>().is_err());
    }
}
