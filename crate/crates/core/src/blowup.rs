//! The blow-up chart `𝒜₊` of the canonical ideal, the quotient
//! `B₊ = B / ann(d_E)` and the map `𝔫⁺_{E/B}: 𝒜₊ → B₊` for generically étale
//! families; plus a probe for the vanishing locus of the canonical ideal.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::alternator::{self, AlternatorInstance};
use crate::error::{Error, Result};
use crate::norm::{self, compare_constants, structure_pair, FamilyInstance, PullbackReport};
use crate::ring::{linalg, CoeffRing, FiniteFreeAlgebra, Monomial, MultiPoly, PolyRing, Ring, Scalar};
use crate::span::Localization;
use crate::tensor::{Tensor, TensorFactor, TensorSpace};
use crate::witness::Witness;

static NEXT_REES: AtomicU64 = AtomicU64::new(1);

/// `α(y)·α(z)` for each pair, preceded by `α²(x)`.
pub fn canonical_generators<F: TensorFactor>(
    instance: &AlternatorInstance<F>,
    pairs: &[(Vec<F::Elem>, Vec<F::Elem>)],
) -> Result<Vec<Tensor<F>>> {
    let space = instance.space();
    let mut out = vec![instance.alpha_sq().clone()];
    for (y, z) in pairs {
        let g = space.mul(&alternator::alpha(space, y)?, &alternator::alpha(space, z)?);
        if !space.is_symmetric(&g) {
            return Err(Error::NotSymmetric);
        }
        out.push(g);
    }
    Ok(out)
}

/// A pair of tuples `(y, z)` standing for the generator `α(y)·α(z)`.
pub type Pair<F> = (Vec<<F as Ring>::Elem>, Vec<<F as Ring>::Elem>);

/// `coeff · Π α(y)α(z)` over the listed pairs.
pub struct ReesTerm<F: TensorFactor> {
    pub coeff: Tensor<F>,
    pub pairs: Vec<Pair<F>>,
}

impl<F: TensorFactor> Clone for ReesTerm<F> {
    fn clone(&self) -> Self {
        ReesTerm { coeff: self.coeff.clone(), pairs: self.pairs.clone() }
    }
}

impl<F: TensorFactor> std::fmt::Debug for ReesTerm<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReesTerm").field("coeff", &self.coeff).field("pairs", &self.pairs).finish()
    }
}

/// An element of `𝒜₊`: a numerator in `I^m`, written as a symmetric
/// combination of `m`-fold products of generators, over `α²(x)^m`.
pub struct ReesFraction<F: TensorFactor> {
    context: u64,
    pub exponent: u32,
    pub terms: Vec<ReesTerm<F>>,
}

impl<F: TensorFactor> Clone for ReesFraction<F> {
    fn clone(&self) -> Self {
        ReesFraction { context: self.context, exponent: self.exponent, terms: self.terms.clone() }
    }
}

impl<F: TensorFactor> std::fmt::Debug for ReesFraction<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReesFraction").field("exponent", &self.exponent).field("terms", &self.terms).finish()
    }
}

/// Arithmetic in `𝒜₊` for a fixed tuple `x`.
#[derive(Clone, Debug)]
pub struct ReesAlgebra<F: TensorFactor> {
    id: u64,
    instance: AlternatorInstance<F>,
}

impl<F: TensorFactor> ReesAlgebra<F> {
    pub fn new(instance: AlternatorInstance<F>) -> Self {
        ReesAlgebra { id: NEXT_REES.fetch_add(1, Ordering::Relaxed), instance }
    }

    pub fn instance(&self) -> &AlternatorInstance<F> {
        &self.instance
    }

    fn space(&self) -> &TensorSpace<F> {
        self.instance.space()
    }

    fn check(&self, a: &ReesFraction<F>) -> Result<()> {
        if a.context == self.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// A symmetric tensor in degree zero.
    pub fn constant(&self, c: Tensor<F>) -> Result<ReesFraction<F>> {
        if !self.space().is_symmetric(&c) {
            return Err(Error::NotSymmetric);
        }
        Ok(ReesFraction { context: self.id, exponent: 0, terms: vec![ReesTerm { coeff: c, pairs: vec![] }] })
    }

    pub fn zero(&self) -> ReesFraction<F> {
        ReesFraction { context: self.id, exponent: 0, terms: vec![] }
    }

    pub fn one(&self) -> ReesFraction<F> {
        self.constant(self.space().one()).expect("unit tensor is symmetric")
    }

    /// `α(y)·α(z) / α²(x)`.
    pub fn generator(&self, y: Vec<F::Elem>, z: Vec<F::Elem>) -> Result<ReesFraction<F>> {
        let n = self.space().arity();
        if y.len() != n || z.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: if y.len() != n { y.len() } else { z.len() } });
        }
        Ok(ReesFraction {
            context: self.id,
            exponent: 1,
            terms: vec![ReesTerm { coeff: self.space().one(), pairs: vec![(y, z)] }],
        })
    }

    fn x_pair(&self) -> Pair<F> {
        (self.instance.x().to_vec(), self.instance.x().to_vec())
    }

    /// Raises the exponent to `m` by multiplying through by `α²(x)/α²(x)`.
    fn lift(&self, a: &ReesFraction<F>, m: u32) -> Vec<ReesTerm<F>> {
        let extra = (m - a.exponent) as usize;
        a.terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.pairs.extend(std::iter::repeat(self.x_pair()).take(extra));
                t
            })
            .collect()
    }

    pub fn add(&self, a: &ReesFraction<F>, b: &ReesFraction<F>) -> Result<ReesFraction<F>> {
        self.check(a)?;
        self.check(b)?;
        let m = a.exponent.max(b.exponent);
        let mut terms = self.lift(a, m);
        terms.extend(self.lift(b, m));
        Ok(ReesFraction { context: self.id, exponent: m, terms })
    }

    pub fn neg(&self, a: &ReesFraction<F>) -> ReesFraction<F> {
        let space = self.space();
        let terms =
            a.terms.iter().map(|t| ReesTerm { coeff: space.neg(&t.coeff), pairs: t.pairs.clone() }).collect();
        ReesFraction { context: a.context, exponent: a.exponent, terms }
    }

    pub fn mul(&self, a: &ReesFraction<F>, b: &ReesFraction<F>) -> Result<ReesFraction<F>> {
        self.check(a)?;
        self.check(b)?;
        let space = self.space();
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for s in &a.terms {
            for t in &b.terms {
                let mut pairs = s.pairs.clone();
                pairs.extend(t.pairs.iter().cloned());
                terms.push(ReesTerm { coeff: space.mul(&s.coeff, &t.coeff), pairs });
            }
        }
        Ok(ReesFraction { context: self.id, exponent: a.exponent + b.exponent, terms })
    }

    /// The numerator as a tensor in `I^m ⊂ TS^n`.
    pub fn expand_numerator(&self, a: &ReesFraction<F>) -> Result<Tensor<F>> {
        self.check(a)?;
        let space = self.space();
        let mut acc = space.zero();
        for t in &a.terms {
            let mut prod = t.coeff.clone();
            for (y, z) in &t.pairs {
                let g = space.mul(&alternator::alpha(space, y)?, &alternator::alpha(space, z)?);
                prod = space.mul(&prod, &g);
            }
            acc = space.add(&acc, &prod);
        }
        Ok(acc)
    }

    /// Equality of the images in `𝒜`, by cross-multiplication; needs a
    /// domain ambient.
    pub fn equal_in_a(&self, a: &ReesFraction<F>, b: &ReesFraction<F>) -> Result<bool> {
        let space = self.space();
        if !space.is_domain() {
            return Err(Error::UnsupportedAmbient("equality in the localization needs a domain ambient".into()));
        }
        let na = self.expand_numerator(a)?;
        let nb = self.expand_numerator(b)?;
        let a2 = self.instance.alpha_sq();
        let lhs = space.mul(&na, &space.pow(a2, b.exponent));
        let rhs = space.mul(&nb, &space.pow(a2, a.exponent));
        Ok(lhs == rhs)
    }
}

/// `E` is generically étale over `B` in the given basis: `d_E` is a
/// nonzerodivisor.
pub fn is_generically_etale<B: Ring>(alg: &FiniteFreeAlgebra<B>, basis: &[Vec<B::Elem>]) -> Result<bool> {
    let d = norm::discriminant(alg, basis)?;
    Ok(alg.base().is_nonzerodivisor(&d))
}

/// The kernel of `B → B_d`.
#[derive(Clone, Debug, PartialEq)]
pub enum Annihilator<E> {
    Zero,
    All,
    /// A basis of the kernel, for `B` finite dimensional over a field.
    Span(Vec<E>),
}

/// Base rings whose quotient `B / ker(B → B_d)` can be computed.
pub trait SaturatingBase: Ring {
    fn saturated_annihilator(&self, d: &Self::Elem) -> Result<Annihilator<Self::Elem>>;

    /// Canonical representative modulo the kernel.
    fn reduce(&self, kernel: &Annihilator<Self::Elem>, e: &Self::Elem) -> Self::Elem;

    /// Some `b` with `b·d ≡ v` modulo the kernel.
    fn solve_times(&self, kernel: &Annihilator<Self::Elem>, d: &Self::Elem, v: &Self::Elem) -> Option<Self::Elem>;

    /// Every `b` with `b·d` in the span of `rows` lies in that span.
    fn preimage_in_kernel(&self, _rows: &[Self::Elem], _d: &Self::Elem) -> bool {
        true
    }
}

fn domain_annihilator<R: Ring>(ring: &R, d: &R::Elem) -> Annihilator<R::Elem> {
    if ring.is_zero(d) {
        Annihilator::All
    } else {
        Annihilator::Zero
    }
}

impl SaturatingBase for CoeffRing {
    fn saturated_annihilator(&self, d: &Scalar) -> Result<Annihilator<Scalar>> {
        Ok(domain_annihilator(self, d))
    }

    fn reduce(&self, kernel: &Annihilator<Scalar>, e: &Scalar) -> Scalar {
        if matches!(kernel, Annihilator::All) {
            Scalar::ZERO
        } else {
            e.clone()
        }
    }

    fn solve_times(&self, kernel: &Annihilator<Scalar>, d: &Scalar, v: &Scalar) -> Option<Scalar> {
        match kernel {
            Annihilator::All => Some(Scalar::ZERO),
            _ => self.div_exact(v, d),
        }
    }
}

impl SaturatingBase for PolyRing {
    fn saturated_annihilator(&self, d: &MultiPoly) -> Result<Annihilator<MultiPoly>> {
        Ok(domain_annihilator(self, d))
    }

    fn reduce(&self, kernel: &Annihilator<MultiPoly>, e: &MultiPoly) -> MultiPoly {
        if matches!(kernel, Annihilator::All) {
            self.zero()
        } else {
            e.clone()
        }
    }

    fn solve_times(&self, kernel: &Annihilator<MultiPoly>, d: &MultiPoly, v: &MultiPoly) -> Option<MultiPoly> {
        match kernel {
            Annihilator::All => Some(self.zero()),
            _ => self.div_exact(v, d),
        }
    }
}

impl SaturatingBase for FiniteFreeAlgebra<CoeffRing> {
    /// `ker(M_d^N)` for the first `N` at which the dimension stops growing.
    fn saturated_annihilator(&self, d: &Vec<Scalar>) -> Result<Annihilator<Vec<Scalar>>> {
        let field = self.base();
        if !field.is_field() {
            return Err(Error::UnsupportedBase("finite algebras are supported over fields only".into()));
        }
        let m = self.mult_matrix(d);
        let mut power = m.clone();
        let mut kernel = linalg::nullspace(field, &power);
        for _ in 0..self.rank() {
            power = linalg::matmul(field, &power, &m);
            let next = linalg::nullspace(field, &power);
            if next.len() == kernel.len() {
                break;
            }
            kernel = next;
        }
        Ok(match kernel.len() {
            0 => Annihilator::Zero,
            k if k == self.rank() => Annihilator::All,
            _ => Annihilator::Span(linalg::rref(field, &kernel).0),
        })
    }

    fn reduce(&self, kernel: &Annihilator<Vec<Scalar>>, e: &Vec<Scalar>) -> Vec<Scalar> {
        let field = self.base();
        match kernel {
            Annihilator::Zero => e.clone(),
            Annihilator::All => self.zero(),
            Annihilator::Span(rows) => {
                // `rows` is in reduced echelon form: clear each pivot column.
                let mut out = e.clone();
                for row in rows {
                    let pivot = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
                    let f = out[pivot].clone();
                    if !f.is_zero() {
                        for (o, r) in out.iter_mut().zip(row) {
                            *o = field.sub(o, &field.mul(&f, r));
                        }
                    }
                }
                out
            }
        }
    }

    fn solve_times(&self, kernel: &Annihilator<Vec<Scalar>>, d: &Vec<Scalar>, v: &Vec<Scalar>) -> Option<Vec<Scalar>> {
        let field = self.base();
        let rows = match kernel {
            Annihilator::All => return Some(self.zero()),
            Annihilator::Zero => Vec::new(),
            Annihilator::Span(rows) => rows.clone(),
        };
        let n = self.rank();
        let m = self.mult_matrix(d);
        let system: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = m[r].clone();
                row.extend(rows.iter().map(|k| k[r].clone()));
                row
            })
            .collect();
        let sol = linalg::solve_field(field, &system, v)?;
        Some(self.reduce(kernel, &sol[..n].to_vec()))
    }

    fn preimage_in_kernel(&self, rows: &[Vec<Scalar>], d: &Vec<Scalar>) -> bool {
        let field = self.base();
        let n = self.rank();
        let m = self.mult_matrix(d);
        let system: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = m[r].clone();
                row.extend(rows.iter().map(|k| k[r].clone()));
                row
            })
            .collect();
        let kernel = Annihilator::Span(rows.to_vec());
        linalg::nullspace(field, &system)
            .iter()
            .all(|sol| self.reduce(&kernel, &sol[..n].to_vec()).iter().all(Scalar::is_zero))
    }
}

/// `B₊ = B / ker(B → B_d)` with `d` the discriminant.
#[derive(Clone, Debug)]
pub struct BPlus<B: SaturatingBase> {
    base: B,
    d: B::Elem,
    kernel: Annihilator<B::Elem>,
}

impl<B: SaturatingBase> BPlus<B> {
    pub fn new(base: B, d: B::Elem) -> Result<Self> {
        let kernel = base.saturated_annihilator(&d)?;
        let bp = BPlus { base, d, kernel };
        if !bp.d_is_nonzerodivisor() {
            return Err(Error::PreconditionViolated("kernel iteration did not stabilize".into()));
        }
        Ok(bp)
    }

    pub fn kernel(&self) -> &Annihilator<B::Elem> {
        &self.kernel
    }

    pub fn is_zero_ring(&self) -> bool {
        matches!(self.kernel, Annihilator::All)
    }

    pub fn reduce(&self, e: &B::Elem) -> B::Elem {
        self.base.reduce(&self.kernel, e)
    }

    pub fn equal(&self, a: &B::Elem, b: &B::Elem) -> bool {
        self.base.is_zero(&self.reduce(&self.base.sub(a, b)))
    }

    pub fn d_image(&self) -> B::Elem {
        self.reduce(&self.d)
    }

    /// The unique `b ∈ B₊` with `b·d = v`.
    pub fn divide_by_d(&self, v: &B::Elem) -> Result<B::Elem> {
        self.base
            .solve_times(&self.kernel, &self.d, v)
            .map(|b| self.reduce(&b))
            .ok_or_else(|| Error::DivisionFails(self.base.format(v)))
    }

    /// Post-condition: `b·d ∈ ker` forces `b ∈ ker`; automatic unless the
    /// kernel is a proper nonzero subspace.
    fn d_is_nonzerodivisor(&self) -> bool {
        match &self.kernel {
            Annihilator::Zero | Annihilator::All => true,
            Annihilator::Span(rows) => self.base.preimage_in_kernel(rows, &self.d),
        }
    }
}

/// `𝔫⁺_{E/B}: 𝒜₊ → B₊`, sending `α(y)α(z)/α²(x)` to the unique `b` with
/// `b·d_E = det(Tr(f(y_i)f(z_j)))`.
#[derive(Clone, Debug)]
pub struct NormMapPlus<B: SaturatingBase> {
    instance: FamilyInstance<B>,
    bplus: BPlus<B>,
}

impl<B: SaturatingBase> NormMapPlus<B> {
    pub fn new(instance: FamilyInstance<B>) -> Result<Self> {
        if !instance.is_generically_etale() {
            return Err(Error::NotGenericallyEtale(instance.base().format(instance.discriminant())));
        }
        Self::with_saturation(instance)
    }

    /// Skips the nonzerodivisor check on `d_E` in `B`; `B₊` may then be the
    /// zero ring, in which case every comparison holds vacuously.
    pub fn with_saturation(instance: FamilyInstance<B>) -> Result<Self> {
        let bplus = BPlus::new(instance.base().clone(), instance.discriminant().clone())?;
        Ok(NormMapPlus { instance, bplus })
    }

    pub fn instance(&self) -> &FamilyInstance<B> {
        &self.instance
    }

    pub fn bplus(&self) -> &BPlus<B> {
        &self.bplus
    }

    pub fn is_degenerate(&self) -> bool {
        self.bplus.is_zero_ring()
    }

    pub fn generator_image(&self, y: &[MultiPoly], z: &[MultiPoly]) -> Result<B::Elem> {
        self.bplus.divide_by_d(&self.instance.pair_value(y, z))
    }

    /// `σ_E(c)` for a symmetric coefficient `c`, through `c = α(x)α(x·c)/α²(x)`.
    pub fn coefficient_image(&self, c: &Tensor<PolyRing>) -> Result<B::Elem> {
        let inst = &self.instance;
        let base = inst.base();
        let source = inst.source();
        let mut acc = base.zero();
        for (key, coef) in c.terms() {
            let w: Vec<MultiPoly> = inst
                .x()
                .iter()
                .zip(key.iter())
                .map(|(xi, m)| source.mul(xi, &source.monomial(m.clone(), Scalar::ONE)))
                .collect();
            acc = base.add(&acc, &base.mul(&inst.coeff_value(coef), &inst.pair_value(inst.x(), &w)));
        }
        self.bplus.divide_by_d(&acc)
    }

    pub fn apply(&self, rees: &ReesAlgebra<PolyRing>, a: &ReesFraction<PolyRing>) -> Result<B::Elem> {
        rees.check(a)?;
        let base = self.instance.base();
        let mut acc = base.zero();
        for t in &a.terms {
            let mut v = self.coefficient_image(&t.coeff)?;
            for (y, z) in &t.pairs {
                v = base.mul(&v, &self.generator_image(y, z)?);
            }
            acc = base.add(&acc, &v);
        }
        Ok(self.bplus.reduce(&acc))
    }

    /// Maps the generator fractions that form the structure constants of
    /// `ℛ₊` and compares with those of `E₊ = E ⊗ B₊` in the basis `f(x)`.
    pub fn verify_pullback_plus(&self) -> Result<PullbackReport<B::Elem>> {
        let inst = &self.instance;
        let n = inst.arity();
        let source = inst.source();
        let expected: Vec<Vec<Vec<B::Elem>>> = inst
            .expected_constants()?
            .into_iter()
            .map(|row| row.into_iter().map(|cell| cell.iter().map(|c| self.bplus.reduce(c)).collect()).collect())
            .collect();
        let mut mapped = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut cell = Vec::with_capacity(n);
                for k in 0..n {
                    let u = structure_pair(source, inst.x(), i, j, k);
                    cell.push(self.generator_image(&u, inst.x())?);
                }
                row.push(cell);
            }
            mapped.push(row);
        }
        let witness = if self.is_degenerate() { Witness::Equal } else { compare_constants(&QuotientView(&self.bplus), &mapped, &expected) };
        Ok(PullbackReport { mapped, expected, witness })
    }
}

/// `B₊` seen as a ring for comparisons and formatting.
#[derive(Debug)]
struct QuotientView<'a, B: SaturatingBase>(&'a BPlus<B>);

impl<B: SaturatingBase> Clone for QuotientView<'_, B> {
    fn clone(&self) -> Self {
        QuotientView(self.0)
    }
}

impl<B: SaturatingBase> Ring for QuotientView<'_, B> {
    type Elem = B::Elem;

    fn zero(&self) -> B::Elem {
        self.0.base.zero()
    }

    fn one(&self) -> B::Elem {
        self.0.reduce(&self.0.base.one())
    }

    fn add(&self, a: &B::Elem, b: &B::Elem) -> B::Elem {
        self.0.reduce(&self.0.base.add(a, b))
    }

    fn neg(&self, a: &B::Elem) -> B::Elem {
        self.0.base.neg(a)
    }

    fn mul(&self, a: &B::Elem, b: &B::Elem) -> B::Elem {
        self.0.reduce(&self.0.base.mul(a, b))
    }

    fn is_zero(&self, a: &B::Elem) -> bool {
        self.0.base.is_zero(&self.0.reduce(a))
    }

    fn equal(&self, a: &B::Elem, b: &B::Elem) -> bool {
        self.0.equal(a, b)
    }

    fn scalars(&self) -> CoeffRing {
        self.0.base.scalars()
    }

    fn from_scalar(&self, s: &Scalar) -> B::Elem {
        self.0.reduce(&self.0.base.from_scalar(s))
    }

    fn div_exact(&self, _a: &B::Elem, _b: &B::Elem) -> Option<B::Elem> {
        None
    }

    fn is_domain(&self) -> bool {
        false
    }

    fn format(&self, a: &B::Elem) -> String {
        self.0.base.format(a)
    }
}

/// For `R` free over `A` with basis `x`: the generator `α(y)α(z)/α²(x)` goes
/// to `det(Y)·det(Z)` both through `T^n_A R` (where
/// `α(y)α(z) = det(Y)det(Z)·α²(x)` holds on the nose) and through the trace
/// form (`det(Tr(y_i z_j)) = det(Y)det(Z)·d_R`); `(x, x)` goes to `1`.
pub fn free_case_plus_check<B>(
    algebra: &FiniteFreeAlgebra<B>,
    x: &[Vec<B::Elem>],
    pairs: &[(Vec<Vec<B::Elem>>, Vec<Vec<B::Elem>>)],
) -> Result<Witness>
where
    B: Ring,
{
    let n = algebra.rank();
    let d = norm::discriminant(algebra, x)?;
    let base = algebra.base();
    if !base.is_nonzerodivisor(&d) {
        return Err(Error::NotGenericallyEtale(base.format(&d)));
    }
    let space = TensorSpace::new(algebra.clone(), n)?;
    let inst = AlternatorInstance::new(space.clone(), x.to_vec())?;
    let change = linalg::transpose(x);
    let det_coords = |t: &[Vec<B::Elem>]| -> Result<B::Elem> {
        let cols = t
            .iter()
            .map(|v| linalg::cramer_solve(base, &change, v))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::NotABasis)?;
        Ok(linalg::det(base, &linalg::transpose(&cols)))
    };
    let trace_det = |y: &[Vec<B::Elem>], z: &[Vec<B::Elem>]| -> B::Elem {
        let m: Vec<Vec<B::Elem>> =
            y.iter().map(|a| z.iter().map(|b| algebra.trace(&algebra.product(a, b))).collect()).collect();
        linalg::det(base, &m)
    };
    let image = |y: &[Vec<B::Elem>], z: &[Vec<B::Elem>]| -> Result<B::Elem> {
        base.div_exact(&trace_det(y, z), &d).ok_or_else(|| Error::DivisionFails(base.format(&trace_det(y, z))))
    };
    let mut witness = Witness::compare(base, &image(x, x)?, &base.one());
    for (y, z) in pairs {
        if y.len() != n || z.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: y.len().min(z.len()) });
        }
        let c = base.mul(&det_coords(y)?, &det_coords(z)?);
        let lhs = space.mul(&alternator::alpha(&space, y)?, &alternator::alpha(&space, z)?);
        witness = witness.and(Witness::compare(&space, &lhs, &space.scale(&c, inst.alpha_sq())));
        witness = witness.and(Witness::compare(base, &image(y, z)?, &c));
    }
    Ok(witness)
}

/// Outcome of [`diagonal_support_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    /// Every probed generator vanishes at the point tuple.
    pub on_diagonal: bool,
    /// A tuple `y` with `α(y)` nonzero at the points, so that the generator
    /// `α(y)·α(y)` takes the recorded nonzero value.
    pub witness: Option<(Vec<String>, Scalar)>,
    pub generators_probed: usize,
}

/// Evaluation `T^n_A A[t] → A` at an ordered tuple of points: slot `p` is
/// evaluated at point `p`.
pub fn evaluate_at_points(space: &TensorSpace<PolyRing>, t: &Tensor<PolyRing>, points: &[Vec<Scalar>]) -> Result<Scalar> {
    let ring = space.factor();
    let a = ring.coeffs();
    let mut acc = Scalar::ZERO;
    for (key, c) in t.terms() {
        let mut v = c.clone();
        for (m, p) in key.iter().zip(points) {
            v = a.mul(&v, &ring.evaluate(&ring.monomial(m.clone(), Scalar::ONE), p)?);
        }
        acc = a.add(&acc, &v);
    }
    Ok(acc)
}

/// Decides whether the point tuple lies on a diagonal by evaluating the
/// canonical generators `α(y)α(z)` for all `n`-sets of monomials with every
/// exponent at most `bound` (default `n−1`).
pub fn diagonal_support_probe(ring: &PolyRing, points: &[Vec<Scalar>], bound: Option<u32>) -> Result<ProbeResult> {
    let n = points.len();
    if !ring.coeffs().is_field() {
        return Err(Error::UnsupportedBase("the probe needs a field of coefficients".into()));
    }
    let k = ring.nvars();
    if let Some(bad) = points.iter().find(|p| p.len() != k) {
        return Err(Error::ArityMismatch { expected: k, got: bad.len() });
    }
    let points: Vec<Vec<Scalar>> =
        points.iter().map(|p| p.iter().map(|c| ring.coeffs().coerce(c)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let space = TensorSpace::new(ring.clone(), n)?;
    let bound = bound.unwrap_or(n as u32 - 1);
    let monomials = bounded_monomials(k, bound);
    let mut probed = 0;
    for subset in subsets(monomials.len(), n) {
        let y: Vec<MultiPoly> = subset.iter().map(|&i| ring.monomial(monomials[i].clone(), Scalar::ONE)).collect();
        let value = evaluate_at_points(&space, &alternator::alpha(&space, &y)?, &points)?;
        probed += 1;
        if !value.is_zero() {
            let square = ring.coeffs().mul(&value, &value);
            let names = y.iter().map(|p| ring.format(p)).collect();
            return Ok(ProbeResult { on_diagonal: false, witness: Some((names, square)), generators_probed: probed });
        }
    }
    Ok(ProbeResult { on_diagonal: true, witness: None, generators_probed: probed })
}

fn bounded_monomials(k: usize, bound: u32) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=bound).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    let mut monos: Vec<Monomial> = out.iter().map(|e| Monomial::from_exponents(e)).collect();
    monos.sort();
    monos
}

fn subsets(total: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, total: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..total {
            if total - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, total, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, total, size, &mut Vec::new(), &mut out);
    out
}

/// `𝒜`-image of a Rees fraction, for comparisons with [`Localization`].
pub fn to_localized<F: TensorFactor>(
    rees: &ReesAlgebra<F>,
    loc: &Localization<F>,
    a: &ReesFraction<F>,
) -> Result<crate::span::LocalizedElem<F>> {
    loc.element(crate::span::Level::A, rees.expand_numerator(a)?, a.exponent)
}
