//! Traces, discriminants, polarized power sums and the norm map
//! `𝔫_{E/B}: 𝒜 → B` attached to a family `f: R → E` with `f(x)` a basis.

use crate::alternator::{self, AlternatorInstance};
use crate::error::{Error, Result};
use crate::ring::{linalg, AlgebraMap, FiniteFreeAlgebra, MultiPoly, PolyRing, Ring, Scalar};
use crate::span::{Level, LocalizedElem, Localization};
use crate::tensor::{Coeff, Tensor, TensorFactor, TensorSpace};
use crate::witness::Witness;

/// `det(Tr(b_i·b_j))` for a basis `b` of `E` over its base.
pub fn discriminant<B: Ring>(alg: &FiniteFreeAlgebra<B>, basis: &[Vec<B::Elem>]) -> Result<B::Elem> {
    let n = alg.rank();
    if basis.len() != n {
        return Err(Error::NotABasis);
    }
    for b in basis {
        alg.check_coords(b)?;
    }
    let change = linalg::transpose(basis);
    if !alg.base().is_unit(&linalg::det(alg.base(), &change)) {
        return Err(Error::NotABasis);
    }
    Ok(trace_form_det(alg, basis))
}

fn trace_form_det<B: Ring>(alg: &FiniteFreeAlgebra<B>, basis: &[Vec<B::Elem>]) -> B::Elem {
    let form: Vec<Vec<B::Elem>> =
        basis.iter().map(|bi| basis.iter().map(|bj| alg.trace(&alg.product(bi, bj))).collect()).collect();
    linalg::det(alg.base(), &form)
}

/// Trace of multiplication by `φ_n(z)` on `ℛ` against `𝔭(z)`.
pub fn trace_formula_check<F: TensorFactor>(
    loc: &Localization<F>,
    algebra: &FiniteFreeAlgebra<Localization<F>>,
    z: &F::Elem,
) -> Result<Witness> {
    let trace = algebra.trace(&loc.coordinates(z));
    let expected = loc.element(Level::A, loc.space().polarized_power_sum(z), 0)?;
    Ok(Witness::compare(loc, &trace, &expected))
}

/// `α(x)·α(y)` against `det(𝔭(x_i y_j))`, both computed independently.
pub fn traceexp_check<F: TensorFactor>(space: &TensorSpace<F>, x: &[F::Elem], y: &[F::Elem]) -> Result<Witness> {
    let n = space.arity();
    if x.len() != n || y.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: if x.len() != n { x.len() } else { y.len() } });
    }
    let lhs = space.mul(&alternator::alpha(space, x)?, &alternator::alpha(space, y)?);
    let rhs = power_sum_det(space, x, y);
    Ok(Witness::compare(space, &lhs, &rhs))
}

/// `det(𝔭(x_i y_j))`.
pub fn power_sum_det<F: TensorFactor>(space: &TensorSpace<F>, x: &[F::Elem], y: &[F::Elem]) -> Tensor<F> {
    let factor = space.factor();
    let m: Vec<Vec<Tensor<F>>> = x
        .iter()
        .map(|xi| y.iter().map(|yj| space.polarized_power_sum(&factor.mul(xi, yj))).collect())
        .collect();
    linalg::det(space, &m)
}

/// One summand of a power-sum presentation.
#[derive(Clone, Debug)]
pub enum PowerSumTerm<F: TensorFactor> {
    /// `c·𝔭(z)`.
    PowerSum { coeff: Coeff<F>, z: F::Elem },
    /// `c·det(𝔭(u_i w_j))`, which equals `c·α(u)·α(w)`.
    Pair { coeff: Coeff<F>, u: Vec<F::Elem>, w: Vec<F::Elem> },
}

/// A symmetric tensor presented as a polynomial in polarized power sums
/// divided by `α²(x)^exponent`.
#[derive(Clone, Debug)]
pub struct PowerSumExpr<F: TensorFactor> {
    pub terms: Vec<PowerSumTerm<F>>,
    pub exponent: u32,
}

impl<F: TensorFactor> PowerSumExpr<F> {
    pub fn power_sum(space: &TensorSpace<F>, z: F::Elem) -> Self {
        PowerSumExpr { terms: vec![PowerSumTerm::PowerSum { coeff: space.base().one(), z }], exponent: 0 }
    }

    /// `α(u)·α(w) / α²(x)^exponent`.
    pub fn pair(space: &TensorSpace<F>, u: Vec<F::Elem>, w: Vec<F::Elem>, exponent: u32) -> Self {
        PowerSumExpr { terms: vec![PowerSumTerm::Pair { coeff: space.base().one(), u, w }], exponent }
    }

    /// The numerator as a tensor.
    pub fn numerator(&self, space: &TensorSpace<F>) -> Tensor<F> {
        let parts: Vec<Tensor<F>> = self
            .terms
            .iter()
            .map(|t| match t {
                PowerSumTerm::PowerSum { coeff, z } => space.scale(coeff, &space.polarized_power_sum(z)),
                PowerSumTerm::Pair { coeff, u, w } => space.scale(coeff, &power_sum_det(space, u, w)),
            })
            .collect();
        space.sum(parts.iter())
    }

    pub fn evaluate(&self, loc: &Localization<F>) -> Result<LocalizedElem<F>> {
        loc.element(Level::A, self.numerator(loc.space()), self.exponent)
    }
}

/// Writes a symmetric `y` as `α(x)·α(x·y) / α²(x)`, expanding `α(x·y)` over
/// the pure terms `y_γ` of `y` so that each `α(x)·α(x·y_γ)` becomes a
/// determinant of power sums.
pub fn power_sum_presentation<F: TensorFactor>(loc: &Localization<F>, y: &Tensor<F>) -> Result<PowerSumExpr<F>> {
    let space = loc.space();
    if y.arity() != space.arity() {
        return Err(Error::ArityMismatch { expected: space.arity(), got: y.arity() });
    }
    if !space.is_symmetric(y) {
        return Err(Error::NotSymmetric);
    }
    let factor = space.factor();
    let x = loc.instance().x();
    let terms = y
        .terms()
        .map(|(key, c)| {
            let w: Vec<F::Elem> = x.iter().zip(key.iter()).map(|(xi, l)| factor.mul(xi, &factor.element(l))).collect();
            PowerSumTerm::Pair { coeff: c.clone(), u: x.to_vec(), w }
        })
        .collect();
    Ok(PowerSumExpr { terms, exponent: 1 })
}

/// Round trip of [`power_sum_presentation`].
pub fn power_sum_generation_check<F: TensorFactor>(loc: &Localization<F>, y: &Tensor<F>) -> Result<(PowerSumExpr<F>, Witness)> {
    let expr = power_sum_presentation(loc, y)?;
    let back = expr.evaluate(loc)?;
    let original = loc.element(Level::A, y.clone(), 0)?;
    Ok((expr.clone(), Witness::compare(loc, &back, &original)))
}

/// Tuple entries of the structure-constant numerator of `ℛ`:
/// `c_ij^k = α(x with x_i·x_j in slot k)·α(x) / α²(x)`.
pub fn structure_pair<R: Ring>(ring: &R, x: &[R::Elem], i: usize, j: usize, k: usize) -> Vec<R::Elem> {
    let mut u = x.to_vec();
    u[k] = ring.mul(&x[i], &x[j]);
    u
}

/// A family `f: A[v] → E` of free rank-`n` algebras over `B` together with a
/// tuple `x` in `A[v]` such that `f(x)` is a basis of `E`.
#[derive(Clone, Debug)]
pub struct FamilyInstance<B: Ring> {
    map: AlgebraMap<B>,
    x: Vec<MultiPoly>,
    fx: Vec<Vec<B::Elem>>,
    discriminant: B::Elem,
}

impl<B: Ring> FamilyInstance<B> {
    pub fn new(map: AlgebraMap<B>, x: Vec<MultiPoly>) -> Result<Self> {
        let n = map.target().rank();
        if x.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: x.len() });
        }
        let fx: Vec<Vec<B::Elem>> = x.iter().map(|xi| map.apply(xi)).collect();
        let discriminant = discriminant(map.target(), &fx)?;
        Ok(FamilyInstance { map, x, fx, discriminant })
    }

    pub fn algebra(&self) -> &FiniteFreeAlgebra<B> {
        self.map.target()
    }

    pub fn base(&self) -> &B {
        self.map.target().base()
    }

    pub fn map(&self) -> &AlgebraMap<B> {
        &self.map
    }

    pub fn source(&self) -> &PolyRing {
        self.map.source()
    }

    pub fn arity(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[MultiPoly] {
        &self.x
    }

    /// Coordinates of `f(x_i)` in the basis of `E`.
    pub fn fx(&self) -> &[Vec<B::Elem>] {
        &self.fx
    }

    /// `d_E`, the discriminant in the basis `f(x)`.
    pub fn discriminant(&self) -> &B::Elem {
        &self.discriminant
    }

    pub fn is_etale(&self) -> bool {
        self.base().is_unit(&self.discriminant)
    }

    pub fn is_generically_etale(&self) -> bool {
        self.base().is_nonzerodivisor(&self.discriminant)
    }

    /// `Tr_{E/B}(f(z))`, the image of `𝔭(z)`.
    pub fn power_sum_value(&self, z: &MultiPoly) -> B::Elem {
        self.algebra().trace(&self.map.apply(z))
    }

    /// `det(Tr(f(u_i)·f(w_j)))`, the image of `α(u)·α(w)`.
    pub fn pair_value(&self, u: &[MultiPoly], w: &[MultiPoly]) -> B::Elem {
        let e = self.algebra();
        let fu: Vec<Vec<B::Elem>> = u.iter().map(|p| self.map.apply(p)).collect();
        let fw: Vec<Vec<B::Elem>> = w.iter().map(|p| self.map.apply(p)).collect();
        let m: Vec<Vec<B::Elem>> =
            fu.iter().map(|a| fw.iter().map(|b| e.trace(&e.product(a, b))).collect()).collect();
        linalg::det(self.base(), &m)
    }

    pub fn coeff_value(&self, c: &Scalar) -> B::Elem {
        self.base().from_scalar(c)
    }

    /// Structure constants of `E` in the basis `f(x)`: `[i][j][k]`.
    pub fn expected_constants(&self) -> Result<Vec<Vec<Vec<B::Elem>>>> {
        let e = self.algebra();
        let n = self.arity();
        let change = linalg::transpose(&self.fx);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let prod = e.product(&self.fx[i], &self.fx[j]);
                row.push(linalg::cramer_solve(self.base(), &change, &prod).ok_or(Error::NotABasis)?);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// The alternator context of `x` in `T^n_A A[v]`.
    pub fn source_instance(&self) -> Result<AlternatorInstance<PolyRing>> {
        AlternatorInstance::new(TensorSpace::new(self.source().clone(), self.arity())?, self.x.clone())
    }
}

/// Mapped and expected structure constants, `[i][j][k]`.
#[derive(Clone, Debug)]
pub struct PullbackReport<E> {
    pub mapped: Vec<Vec<Vec<E>>>,
    pub expected: Vec<Vec<Vec<E>>>,
    pub witness: Witness,
}

/// `𝔫_{E/B}: 𝒜 → B` for an étale family: `𝔭(z) ↦ Tr(f(z))`,
/// `α(u)α(w) ↦ det(Tr(f(u_i)f(w_j)))`, `α²(x)⁻¹ ↦ d_E⁻¹`.
#[derive(Clone, Debug)]
pub struct NormMap<B: Ring> {
    instance: FamilyInstance<B>,
}

impl<B: Ring> NormMap<B> {
    pub fn new(instance: FamilyInstance<B>) -> Result<Self> {
        if !instance.is_etale() {
            return Err(Error::NotEtale(instance.base().format(instance.discriminant())));
        }
        Ok(NormMap { instance })
    }

    pub fn instance(&self) -> &FamilyInstance<B> {
        &self.instance
    }

    fn divide_by_discriminant(&self, v: &B::Elem, exponent: u32) -> Result<B::Elem> {
        let base = self.instance.base();
        let d = base.pow(self.instance.discriminant(), exponent);
        base.div_exact(v, &d).ok_or_else(|| Error::DivisionFails(base.format(v)))
    }

    /// Image of a presented element of `𝒜`.
    pub fn apply(&self, expr: &PowerSumExpr<PolyRing>) -> Result<B::Elem> {
        let inst = &self.instance;
        let base = inst.base();
        let mut acc = base.zero();
        for t in &expr.terms {
            let v = match t {
                PowerSumTerm::PowerSum { coeff, z } => base.mul(&inst.coeff_value(coeff), &inst.power_sum_value(z)),
                PowerSumTerm::Pair { coeff, u, w } => base.mul(&inst.coeff_value(coeff), &inst.pair_value(u, w)),
            };
            acc = base.add(&acc, &v);
        }
        self.divide_by_discriminant(&acc, expr.exponent)
    }

    /// Image of `α²(x)`; equals `d_E`.
    pub fn alpha_sq_value(&self) -> B::Elem {
        self.instance.pair_value(&self.instance.x, &self.instance.x)
    }

    /// Maps the structure constants of `ℛ` and compares them with those of
    /// `E` in the basis `f(x)`.
    pub fn verify_pullback(&self) -> Result<PullbackReport<B::Elem>> {
        let inst = &self.instance;
        let source = inst.source();
        let n = inst.arity();
        let space = TensorSpace::new(source.clone(), n)?;
        let expected = inst.expected_constants()?;
        let mut mapped = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut cell = Vec::with_capacity(n);
                for k in 0..n {
                    let u = structure_pair(source, &inst.x, i, j, k);
                    cell.push(self.apply(&PowerSumExpr::pair(&space, u, inst.x.clone(), 1))?);
                }
                row.push(cell);
            }
            mapped.push(row);
        }
        let witness = compare_constants(inst.base(), &mapped, &expected);
        Ok(PullbackReport { mapped, expected, witness })
    }

    /// Determinism of the substitution: evaluating the structure-constant
    /// numerators from a table of power-sum values on monomials (extended
    /// linearly) reproduces [`NormMap::verify_pullback`]'s images.
    pub fn table_agrees(&self) -> Result<Witness> {
        let inst = &self.instance;
        let base = inst.base();
        let source = inst.source();
        let n = inst.arity();
        let table = |z: &MultiPoly| -> B::Elem {
            z.terms().fold(base.zero(), |acc, (m, c)| {
                let mono = source.monomial(m.clone(), Scalar::ONE);
                base.add(&acc, &base.mul(&inst.coeff_value(c), &inst.power_sum_value(&mono)))
            })
        };
        let report = self.verify_pullback()?;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let u = structure_pair(source, &inst.x, i, j, k);
                    let m: Vec<Vec<B::Elem>> =
                        u.iter().map(|a| inst.x.iter().map(|b| table(&source.mul(a, b))).collect()).collect();
                    let v = self.divide_by_discriminant(&linalg::det(base, &m), 1)?;
                    let w = Witness::compare(base, &v, &report.mapped[i][j][k]);
                    if !w.holds() {
                        return Ok(w);
                    }
                }
            }
        }
        Ok(Witness::Equal)
    }
}

pub(crate) fn compare_constants<B: Ring>(base: &B, mapped: &[Vec<Vec<B::Elem>>], expected: &[Vec<Vec<B::Elem>>]) -> Witness {
    for (i, (mr, er)) in mapped.iter().zip(expected).enumerate() {
        for (j, (mc, ec)) in mr.iter().zip(er).enumerate() {
            for (k, (m, e)) in mc.iter().zip(ec).enumerate() {
                if !base.equal(m, e) {
                    return Witness::Counterexample {
                        lhs: format!("c[{}][{}][{}] = {}", i + 1, j + 1, k + 1, base.format(m)),
                        rhs: format!("c[{}][{}][{}] = {}", i + 1, j + 1, k + 1, base.format(e)),
                    };
                }
            }
        }
    }
    Witness::Equal
}

/// Two presentations of `𝔭(z)` (directly, and through
/// [`power_sum_presentation`]) have the same image under `𝔫`.
pub fn well_definedness_check(norm: &NormMap<impl Ring>, loc: &Localization<PolyRing>, z: &MultiPoly) -> Result<Witness> {
    let space = loc.space();
    let direct = PowerSumExpr::power_sum(space, z.clone());
    let via = power_sum_presentation(loc, &space.polarized_power_sum(z))?;
    let base = norm.instance().base();
    Ok(Witness::compare(base, &norm.apply(&direct)?, &norm.apply(&via)?))
}

/// Outcome of the checks for `R` free over `A` with basis `x`.
#[derive(Clone, Debug)]
pub struct FreeCaseReport<E> {
    pub discriminant: E,
    pub witness: Witness,
}

/// For `R` free over `A` with basis `x`, inside `T^n_A R`:
/// `α²(x)·(𝔭(z) − Tr(z)) = 0` for sampled `z`, `α²(x)·(α²(x) − d_R) = 0`,
/// and `α(y)α(z) = det(Y)·det(Z)·α²(x)` for sampled tuples with coordinate
/// matrices `Y`, `Z`.
pub fn free_case_check<B>(algebra: &FiniteFreeAlgebra<B>, x: &[Vec<B::Elem>], samples: &[Vec<B::Elem>]) -> Result<FreeCaseReport<B::Elem>>
where
    B: Ring,
{
    let n = algebra.rank();
    let d = discriminant(algebra, x)?;
    let space = TensorSpace::new(algebra.clone(), n)?;
    let inst = AlternatorInstance::new(space.clone(), x.to_vec())?;
    let a2 = inst.alpha_sq();
    let base = algebra.base();
    let scalar = |c: &B::Elem| space.scale(c, &space.one());

    let mut witness = Witness::compare(&space, &space.mul(a2, &space.sub(a2, &scalar(&d))), &space.zero());
    for z in samples {
        let diff = space.sub(&space.polarized_power_sum(z), &scalar(&algebra.trace(z)));
        witness = witness.and(Witness::compare(&space, &space.mul(a2, &diff), &space.zero()));
    }
    // Pairs of consecutive samples as tuples y and z.
    let change = linalg::transpose(x);
    let tuples: Vec<&[Vec<B::Elem>]> = samples.chunks(n).filter(|c| c.len() == n).collect();
    for pair in tuples.windows(2) {
        let (y, z) = (pair[0], pair[1]);
        let coords = |t: &[Vec<B::Elem>]| -> Option<B::Elem> {
            let cols: Option<Vec<Vec<B::Elem>>> = t.iter().map(|v| linalg::cramer_solve(base, &change, v)).collect();
            Some(linalg::det(base, &linalg::transpose(&cols?)))
        };
        let (Some(dy), Some(dz)) = (coords(y), coords(z)) else { return Err(Error::NotABasis) };
        let lhs = space.mul(&alternator::alpha(&space, y)?, &alternator::alpha(&space, z)?);
        let rhs = space.scale(&base.mul(&dy, &dz), a2);
        witness = witness.and(Witness::compare(&space, &lhs, &rhs));
    }
    Ok(FreeCaseReport { discriminant: d, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffRing;

    fn q(v: i64) -> Scalar {
        Scalar::from(v)
    }

    fn sqrt2() -> FiniteFreeAlgebra<CoeffRing> {
        let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(1)], vec![q(2), q(0)]]];
        FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(0)]).unwrap()
    }

    #[test]
    fn discriminants() {
        let e = sqrt2();
        assert_eq!(discriminant(&e, &[e.basis(0), e.basis(1)]).unwrap(), q(8));
        assert_eq!(discriminant(&e, &[e.basis(0), e.basis(0)]), Err(Error::NotABasis));
        let split = FiniteFreeAlgebra::new(
            CoeffRing::Rationals,
            2,
            vec![vec![vec![q(1), q(0)], vec![q(0), q(0)]], vec![vec![q(0), q(0)], vec![q(0), q(1)]]],
            vec![q(1), q(1)],
        )
        .unwrap();
        assert_eq!(discriminant(&split, &[split.basis(0), split.basis(1)]).unwrap(), q(1));
    }

    #[test]
    fn sqrt2_pullback() {
        let e = sqrt2();
        let r = PolyRing::univariate(CoeffRing::Rationals);
        let map = AlgebraMap::new(r.clone(), e.clone(), vec![e.basis(1)]).unwrap();
        let inst = FamilyInstance::new(map, vec![r.one(), r.parse("t").unwrap()]).unwrap();
        let norm = NormMap::new(inst).unwrap();
        assert_eq!(norm.alpha_sq_value(), q(8));
        let report = norm.verify_pullback().unwrap();
        assert!(report.witness.holds());
        assert_eq!(report.mapped[1][1], vec![q(2), q(0)]);
        assert!(norm.table_agrees().unwrap().holds());
    }
}
