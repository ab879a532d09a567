//! The localizations `𝒜 = TS^n[α²(x)⁻¹] → ℛ = TS^{n−1,1}[α²(x)⁻¹]`,
//! coordinates in the basis `φ_n(x₁), …, φ_n(x_n)` and the structure
//! constants of `ℛ` over `𝒜`.
//!
//! Fractions are compared by cross-multiplication, which is only the correct
//! equality when `α²(x)` is a nonzerodivisor; contexts therefore insist on an
//! ambient `T^n_A R` that is a domain.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::alternator::{self, AlternatorInstance};
use crate::error::{Error, Result};
use crate::ring::{linalg, CoeffRing, FiniteFreeAlgebra, Ring, Scalar};
use crate::tensor::{Tensor, TensorFactor, TensorSpace};

static NEXT_CONTEXT: AtomicU64 = AtomicU64::new(1);

/// Which localized ring an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// `𝒜`: numerators are symmetric.
    A,
    /// `ℛ`: numerators are invariant under the first `n−1` slots.
    R,
}

/// `numerator / α²(x)^exponent`.
pub struct LocalizedElem<F: TensorFactor> {
    pub level: Level,
    pub numerator: Tensor<F>,
    pub exponent: u32,
    context: u64,
}

impl<F: TensorFactor> LocalizedElem<F> {
    pub fn context_id(&self) -> u64 {
        self.context
    }
}

impl<F: TensorFactor> Clone for LocalizedElem<F> {
    fn clone(&self) -> Self {
        LocalizedElem {
            level: self.level,
            numerator: self.numerator.clone(),
            exponent: self.exponent,
            context: self.context,
        }
    }
}

impl<F: TensorFactor> PartialEq for LocalizedElem<F> {
    /// Representation equality; use [`Ring::equal`] for equality of fractions.
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.exponent == other.exponent
            && self.context == other.context
            && self.numerator == other.numerator
    }
}

impl<F: TensorFactor> fmt::Debug for LocalizedElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalizedElem")
            .field("level", &self.level)
            .field("numerator", &self.numerator)
            .field("exponent", &self.exponent)
            .finish()
    }
}

struct Context<F: TensorFactor> {
    id: u64,
    instance: AlternatorInstance<F>,
    powers: Mutex<Vec<Tensor<F>>>,
}

impl<F: TensorFactor> fmt::Debug for Context<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context").field("id", &self.id).finish()
    }
}

/// The ring `𝒜`, also acting on elements of `ℛ` sharing its context.
pub struct Localization<F: TensorFactor> {
    ctx: Arc<Context<F>>,
}

impl<F: TensorFactor> Clone for Localization<F> {
    fn clone(&self) -> Self {
        Localization { ctx: Arc::clone(&self.ctx) }
    }
}

impl<F: TensorFactor> fmt::Debug for Localization<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Localization").field("context", &self.ctx.id).finish()
    }
}

impl<F: TensorFactor> Localization<F> {
    pub fn new(instance: AlternatorInstance<F>) -> Result<Self> {
        let space = instance.space();
        if !space.is_domain() {
            return Err(Error::UnsupportedAmbient(
                "fraction equality needs T^n_A R to be a domain (polynomial R over Q, Z or F_p)".into(),
            ));
        }
        if instance.alpha().is_zero() {
            return Err(Error::PreconditionViolated("alpha(x) is zero, the localization is the zero ring".into()));
        }
        let id = NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed);
        let one = space.one();
        Ok(Localization { ctx: Arc::new(Context { id, instance, powers: Mutex::new(vec![one]) }) })
    }

    pub fn instance(&self) -> &AlternatorInstance<F> {
        &self.ctx.instance
    }

    pub fn space(&self) -> &TensorSpace<F> {
        self.ctx.instance.space()
    }

    pub fn id(&self) -> u64 {
        self.ctx.id
    }

    /// `α²(x)^m`, cached.
    pub fn alpha_sq_pow(&self, m: u32) -> Tensor<F> {
        let mut cache = self.ctx.powers.lock().expect("power cache poisoned");
        while cache.len() <= m as usize {
            let next = self.space().mul(cache.last().expect("nonempty"), self.instance().alpha_sq());
            cache.push(next);
        }
        cache[m as usize].clone()
    }

    fn raw(&self, level: Level, numerator: Tensor<F>, exponent: u32) -> LocalizedElem<F> {
        LocalizedElem { level, numerator, exponent, context: self.ctx.id }
    }

    /// Builds `numerator / α²(x)^exponent`, checking the level's invariance.
    pub fn element(&self, level: Level, numerator: Tensor<F>, exponent: u32) -> Result<LocalizedElem<F>> {
        let space = self.space();
        if numerator.arity() != space.arity() {
            return Err(Error::ArityMismatch { expected: space.arity(), got: numerator.arity() });
        }
        match level {
            Level::A if !space.is_symmetric(&numerator) => return Err(Error::NotSymmetric),
            Level::R if !space.is_sym_n11(&numerator) => return Err(Error::NotInvariant),
            _ => {}
        }
        Ok(self.normalize(&self.raw(level, numerator, exponent)))
    }

    /// `φ_n(z)` as an element of `ℛ`.
    pub fn r_element(&self, z: &F::Elem) -> LocalizedElem<F> {
        self.raw(Level::R, self.instance().phi_n(z), 0)
    }

    /// Strips factors of `α²(x)` from the numerator while it stays divisible.
    pub fn normalize(&self, e: &LocalizedElem<F>) -> LocalizedElem<F> {
        let space = self.space();
        if e.numerator.is_zero() {
            return self.raw(e.level, space.zero(), 0);
        }
        let mut out = e.clone();
        while out.exponent > 0 {
            match space.div_exact(&out.numerator, self.instance().alpha_sq()) {
                Some(q) => {
                    out.numerator = q;
                    out.exponent -= 1;
                }
                None => break,
            }
        }
        out
    }

    /// The numerator of `e` written over `α²(x)^m`, if `m` is large enough.
    pub fn numerator_at(&self, e: &LocalizedElem<F>, m: u32) -> Option<Tensor<F>> {
        (m >= e.exponent).then(|| self.space().mul(&e.numerator, &self.alpha_sq_pow(m - e.exponent)))
    }

    fn same_context(&self, a: &LocalizedElem<F>) -> Result<()> {
        if a.context == self.ctx.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, a: &LocalizedElem<F>, b: &LocalizedElem<F>) -> Result<LocalizedElem<F>> {
        self.same_context(a)?;
        self.same_context(b)?;
        if a.level != b.level {
            return Err(Error::LevelMismatch);
        }
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: &LocalizedElem<F>, b: &LocalizedElem<F>) -> Result<LocalizedElem<F>> {
        self.same_context(a)?;
        self.same_context(b)?;
        Ok(self.mul(a, b))
    }

    /// Regards an element of `𝒜` as an element of `ℛ`.
    pub fn promote(&self, a: &LocalizedElem<F>) -> LocalizedElem<F> {
        LocalizedElem { level: Level::R, ..a.clone() }
    }

    /// Coordinate `i` of `z` is `α(x₁, …, z, …, x_n)·α(x) / α²(x)`.
    pub fn coordinates(&self, z: &F::Elem) -> Vec<LocalizedElem<F>> {
        let inst = self.instance();
        let space = self.space();
        (1..=inst.arity())
            .map(|i| {
                let num = space.mul(&inst.alpha_with_slot(i, z), inst.alpha());
                self.normalize(&self.raw(Level::A, num, 1))
            })
            .collect()
    }

    /// Coordinate `i` of an invariant `y` is
    /// `(−1)^{n−i} α(x)·α(x_[i]·y) / α²(x)`.
    pub fn coordinates_of_invariant(&self, y: &Tensor<F>) -> Result<Vec<LocalizedElem<F>>> {
        let inst = self.instance();
        let space = self.space();
        let n = inst.arity();
        if y.arity() != n {
            return Err(Error::ArityMismatch { expected: n, got: y.arity() });
        }
        if !space.is_sym_n11(y) {
            return Err(Error::NotInvariant);
        }
        Ok((1..=n)
            .map(|i| {
                let inner = alternator::alpha_map(space, &space.mul(&inst.x_bracket(i), y));
                let mut num = space.mul(inst.alpha(), &inner);
                if (n - i) % 2 == 1 {
                    num = space.neg(&num);
                }
                self.normalize(&self.raw(Level::A, num, 1))
            })
            .collect())
    }

    /// `Σ_i coords_i · φ_n(x_i)` in `ℛ`.
    pub fn reconstruct(&self, coords: &[LocalizedElem<F>]) -> LocalizedElem<F> {
        let inst = self.instance();
        coords.iter().zip(inst.x()).fold(self.raw(Level::R, self.space().zero(), 0), |acc, (c, xi)| {
            self.add(&acc, &self.mul(c, &self.r_element(xi)))
        })
    }

    /// `ℛ` as a free `𝒜`-algebra with basis `φ_n(x_i)`:
    /// `c_ij^k = coordinates(x_i·x_j)_k`, unit `coordinates(1)`. Validated by
    /// the same exhaustive checks as any [`FiniteFreeAlgebra`].
    pub fn structure_algebra(&self) -> Result<FiniteFreeAlgebra<Localization<F>>> {
        let inst = self.instance();
        let factor = inst.factor();
        let n = inst.arity();
        let x = inst.x();
        let structure: Vec<Vec<Vec<LocalizedElem<F>>>> =
            (0..n).map(|i| (0..n).map(|j| self.coordinates(&factor.mul(&x[i], &x[j]))).collect()).collect();
        let unit = self.coordinates(&factor.one());
        FiniteFreeAlgebra::new(self.clone(), n, structure, unit)
    }

    /// Discriminant of `𝒜 → ℛ` in the basis `φ_n(x_i)`.
    pub fn discriminant(&self, algebra: &FiniteFreeAlgebra<Localization<F>>) -> LocalizedElem<F> {
        let n = algebra.rank();
        let form: Vec<Vec<LocalizedElem<F>>> = (0..n)
            .map(|i| (0..n).map(|j| algebra.trace(&algebra.product(&algebra.basis(i), &algebra.basis(j)))).collect())
            .collect();
        linalg::det(self, &form)
    }
}

impl<F: TensorFactor> Ring for Localization<F> {
    type Elem = LocalizedElem<F>;

    fn zero(&self) -> LocalizedElem<F> {
        self.raw(Level::A, self.space().zero(), 0)
    }

    fn one(&self) -> LocalizedElem<F> {
        self.raw(Level::A, self.space().one(), 0)
    }

    /// Common denominator `α²(x)^max(m, l)`; the level of a mixed sum is `R`.
    fn add(&self, a: &LocalizedElem<F>, b: &LocalizedElem<F>) -> LocalizedElem<F> {
        debug_assert!(a.context == self.ctx.id && b.context == self.ctx.id);
        let space = self.space();
        let m = a.exponent.max(b.exponent);
        let left = self.numerator_at(a, m).expect("m is the maximum");
        let right = self.numerator_at(b, m).expect("m is the maximum");
        self.normalize(&self.raw(a.level.max(b.level), space.add(&left, &right), m))
    }

    fn neg(&self, a: &LocalizedElem<F>) -> LocalizedElem<F> {
        LocalizedElem { numerator: self.space().neg(&a.numerator), ..a.clone() }
    }

    fn mul(&self, a: &LocalizedElem<F>, b: &LocalizedElem<F>) -> LocalizedElem<F> {
        debug_assert!(a.context == self.ctx.id && b.context == self.ctx.id);
        if a.numerator.is_zero() || b.numerator.is_zero() {
            return self.raw(a.level.max(b.level), self.space().zero(), 0);
        }
        let num = self.space().mul(&a.numerator, &b.numerator);
        self.normalize(&self.raw(a.level.max(b.level), num, a.exponent + b.exponent))
    }

    fn is_zero(&self, a: &LocalizedElem<F>) -> bool {
        a.numerator.is_zero()
    }

    /// `(a, m) = (b, l)` iff `a·α²(x)^l = b·α²(x)^m`.
    fn equal(&self, a: &LocalizedElem<F>, b: &LocalizedElem<F>) -> bool {
        let m = a.exponent.max(b.exponent);
        match (self.numerator_at(a, m), self.numerator_at(b, m)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    fn scalars(&self) -> CoeffRing {
        self.space().scalars()
    }

    fn from_scalar(&self, s: &Scalar) -> LocalizedElem<F> {
        self.raw(Level::A, self.space().from_scalar(s), 0)
    }

    /// Division by elements of the form `unit·α²(x)^k` and other exact
    /// divisors; tries clearing up to three extra powers of `α²(x)`.
    fn div_exact(&self, a: &LocalizedElem<F>, b: &LocalizedElem<F>) -> Option<LocalizedElem<F>> {
        let space = self.space();
        for extra in 0..=3u32 {
            let lifted = space.mul(&a.numerator, &self.alpha_sq_pow(b.exponent + extra));
            if let Some(q) = space.div_exact(&lifted, &b.numerator) {
                return Some(self.normalize(&self.raw(a.level.max(b.level), q, a.exponent + extra)));
            }
        }
        None
    }

    fn is_domain(&self) -> bool {
        true
    }

    fn format(&self, a: &LocalizedElem<F>) -> String {
        let num = self.space().format(&a.numerator);
        match a.exponent {
            0 => num,
            1 => format!("({num}) / alpha2"),
            m => format!("({num}) / alpha2^{m}"),
        }
    }
}

/// Checks that `Σ a_i·φ_n(x_i) = 0` and then that every `a_i·α²(x)` vanishes,
/// i.e. that the relation dies in `𝒜`. Works over any ambient, including
/// finite algebras with zero divisors.
pub fn verify_independence<F: TensorFactor>(instance: &AlternatorInstance<F>, relation: &[Tensor<F>]) -> Result<bool> {
    let space = instance.space();
    let n = instance.arity();
    if relation.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: relation.len() });
    }
    if let Some(bad) = relation.iter().find(|a| !space.is_symmetric(a)) {
        return Err(Error::PreconditionViolated(format!("coefficient {} is not symmetric", space.format(bad))));
    }
    let mut total = space.zero();
    for (a, xi) in relation.iter().zip(instance.x()) {
        total = space.add(&total, &space.mul(a, &instance.phi_n(xi)));
    }
    if !total.is_zero() {
        return Err(Error::RelationDoesNotHold(space.format(&total)));
    }
    // X·A = 0 gives α(x)·a_i = 0 via the adjugate; one more factor of α(x)
    // covers the symmetric denominator α²(x).
    Ok(relation.iter().all(|a| {
        let once = space.mul(a, instance.alpha());
        once.is_zero() || space.mul(&once, instance.alpha()).is_zero()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn context(xs: &[&str]) -> (PolyRing, Localization<PolyRing>) {
        let r = PolyRing::univariate(CoeffRing::Rationals);
        let space = TensorSpace::new(r.clone(), xs.len()).unwrap();
        let x = xs.iter().map(|s| r.parse(s).unwrap()).collect();
        let inst = AlternatorInstance::new(space, x).unwrap();
        (r, Localization::new(inst).unwrap())
    }

    #[test]
    fn alpha_sq_over_itself_is_one() {
        let (_, loc) = context(&["1", "t"]);
        let e = loc.element(Level::A, loc.instance().alpha_sq().clone(), 1).unwrap();
        assert_eq!(e.exponent, 0);
        assert_eq!(e.numerator, loc.space().one());
    }

    #[test]
    fn basis_vectors_have_unit_coordinates() {
        let (r, loc) = context(&["1", "t", "t^2"]);
        let c = loc.coordinates(&r.parse("t").unwrap());
        assert!(loc.equal(&c[0], &loc.zero()));
        assert!(loc.equal(&c[1], &loc.one()));
        assert!(loc.equal(&c[2], &loc.zero()));
        assert!(loc.coordinates(&r.zero()).iter().all(|c| loc.is_zero(c)));
    }

    #[test]
    fn reconstructs_t_squared() {
        let (r, loc) = context(&["1", "t"]);
        let z = r.parse("t^2").unwrap();
        let back = loc.reconstruct(&loc.coordinates(&z));
        assert!(loc.equal(&back, &loc.r_element(&z)));
    }

    #[test]
    fn other_contexts_are_rejected() {
        let (_, a) = context(&["1", "t"]);
        let (_, b) = context(&["1", "t"]);
        assert_eq!(a.checked_add(&a.one(), &b.one()), Err(Error::ContextMismatch));
        let r_one = a.promote(&a.one());
        assert_eq!(a.checked_add(&a.one(), &r_one), Err(Error::LevelMismatch));
    }

    #[test]
    fn finite_ambient_is_rejected() {
        let q = |v: i64| Scalar::from(v);
        let st = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(1)], vec![q(0), q(0)]]];
        let e = FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, st, vec![q(1), q(0)]).unwrap();
        let space = TensorSpace::new(e.clone(), 2).unwrap();
        let inst = AlternatorInstance::new(space, vec![e.basis(0), e.basis(1)]).unwrap();
        assert!(matches!(Localization::new(inst), Err(Error::UnsupportedAmbient(_))));
    }
}
