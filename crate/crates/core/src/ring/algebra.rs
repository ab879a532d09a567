//! Finite free algebras given by structure constants, and polynomial maps
//! into them.

use std::sync::Arc;

use super::linalg::{self, Matrix};
use super::{CoeffRing, MultiPoly, PolyRing, Ring, Scalar};
use crate::error::{Error, Result};
use crate::random::{self, Sample};

/// A commutative algebra `E` free of rank `n` over a base ring `B`, with
/// `e_i · e_j = Σ_k c_ij^k e_k`. Elements are coordinate vectors.
#[derive(Clone, Debug)]
pub struct FiniteFreeAlgebra<B: Ring> {
    base: B,
    rank: usize,
    structure: Arc<Vec<Vec<Vec<B::Elem>>>>,
    unit: Arc<Vec<B::Elem>>,
}

impl<B: Ring> PartialEq for FiniteFreeAlgebra<B> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.structure, &other.structure)
            || (self.rank == other.rank && self.structure == other.structure && self.unit == other.unit)
    }
}

impl<B: Ring> FiniteFreeAlgebra<B> {
    /// Validates and builds the algebra. `structure[i][j][k]` is `c_ij^k`.
    pub fn new(base: B, rank: usize, structure: Vec<Vec<Vec<B::Elem>>>, unit: Vec<B::Elem>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::DimensionMismatch("rank must be positive".into()));
        }
        let shape_ok = structure.len() == rank
            && structure.iter().all(|row| row.len() == rank && row.iter().all(|v| v.len() == rank));
        if !shape_ok {
            return Err(Error::DimensionMismatch(format!("structure array is not {rank}x{rank}x{rank}")));
        }
        if unit.len() != rank {
            return Err(Error::DimensionMismatch(format!("unit has {} coordinates, rank is {rank}", unit.len())));
        }
        let alg = FiniteFreeAlgebra { base, rank, structure: Arc::new(structure), unit: Arc::new(unit) };
        alg.validate()?;
        Ok(alg)
    }

    /// `B[t]/(t^n + c_{n−1}·t^{n−1} + … + c_0)` in the basis `1, t, …, t^{n−1}`,
    /// with `lower = [c_0, …, c_{n−1}]`.
    pub fn monogenic(base: B, lower: Vec<B::Elem>) -> Result<Self> {
        let n = lower.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("need a polynomial of positive degree".into()));
        }
        let mut powers: Vec<Vec<B::Elem>> = Vec::with_capacity(2 * n - 1);
        let mut p: Vec<B::Elem> = (0..n).map(|i| if i == 0 { base.one() } else { base.zero() }).collect();
        for _ in 0..2 * n - 1 {
            let top = p[n - 1].clone();
            let next: Vec<B::Elem> = (0..n)
                .map(|i| {
                    let shifted = if i == 0 { base.zero() } else { p[i - 1].clone() };
                    base.sub(&shifted, &base.mul(&lower[i], &top))
                })
                .collect();
            powers.push(std::mem::replace(&mut p, next));
        }
        let structure = (0..n).map(|i| (0..n).map(|j| powers[i + j].clone()).collect()).collect();
        let unit = powers[0].clone();
        Self::new(base, n, structure, unit)
    }

    fn validate(&self) -> Result<()> {
        let b = &self.base;
        let n = self.rank;
        let eq = |u: &[B::Elem], v: &[B::Elem]| u.iter().zip(v).all(|(x, y)| b.equal(x, y));
        for i in 0..n {
            for j in i + 1..n {
                if !eq(&self.structure[i][j], &self.structure[j][i]) {
                    return Err(Error::NonCommutative { i, j });
                }
            }
        }
        for j in 0..n {
            let e = self.basis(j);
            if !eq(&self.product(&self.unit, &e), &e) {
                return Err(Error::BadUnit { j });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &self.structure[i][j];
                for k in 0..n {
                    let left = self.product(ij, &self.basis(k));
                    let right = self.product(&self.basis(i), &self.structure[j][k]);
                    if !eq(&left, &right) {
                        return Err(Error::NonAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn structure(&self) -> &[Vec<Vec<B::Elem>>] {
        &self.structure
    }

    pub fn unit(&self) -> &[B::Elem] {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Vec<B::Elem> {
        (0..self.rank).map(|k| if k == i { self.base.one() } else { self.base.zero() }).collect()
    }

    pub fn check_coords(&self, e: &[B::Elem]) -> Result<()> {
        if e.len() == self.rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("vector of length {} in rank {} algebra", e.len(), self.rank)))
        }
    }

    pub fn scale(&self, c: &B::Elem, e: &[B::Elem]) -> Vec<B::Elem> {
        e.iter().map(|x| self.base.mul(c, x)).collect()
    }

    /// Matrix of `z ↦ e·z`; column `k` holds the coordinates of `e·e_k`.
    pub fn mult_matrix(&self, e: &[B::Elem]) -> Matrix<B::Elem> {
        let cols: Vec<Vec<B::Elem>> = (0..self.rank).map(|k| self.product(e, &self.basis(k))).collect();
        linalg::transpose(&cols)
    }

    pub fn trace(&self, e: &[B::Elem]) -> B::Elem {
        // Tr(e) = Σ_i Σ_j e_j c_ji^i, avoiding the full matrix.
        let b = &self.base;
        let mut acc = b.zero();
        for (j, ej) in e.iter().enumerate() {
            if b.is_zero(ej) {
                continue;
            }
            let t = (0..self.rank).fold(b.zero(), |s, i| b.add(&s, &self.structure[j][i][i]));
            acc = b.add(&acc, &b.mul(ej, &t));
        }
        acc
    }

    pub fn product(&self, a: &[B::Elem], b: &[B::Elem]) -> Vec<B::Elem> {
        let r = &self.base;
        let mut out = vec![r.zero(); self.rank];
        for (i, ai) in a.iter().enumerate() {
            if r.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if r.is_zero(bj) {
                    continue;
                }
                let c = r.mul(ai, bj);
                for (k, slot) in out.iter_mut().enumerate() {
                    let s = &self.structure[i][j][k];
                    if !r.is_zero(s) {
                        *slot = r.add(slot, &r.mul(&c, s));
                    }
                }
            }
        }
        out
    }

    pub fn det_norm(&self, e: &[B::Elem]) -> B::Elem {
        linalg::det(&self.base, &self.mult_matrix(e))
    }
}

impl<B: Ring> Ring for FiniteFreeAlgebra<B> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.rank]
    }

    fn one(&self) -> Self::Elem {
        self.unit.to_vec()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.product(a, b)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a.iter().zip(b).all(|(x, y)| self.base.equal(x, y))
    }

    fn scalars(&self) -> CoeffRing {
        self.base.scalars()
    }

    fn from_scalar(&self, s: &Scalar) -> Self::Elem {
        self.scale(&self.base.from_scalar(s), &self.unit)
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        let m = self.mult_matrix(b);
        let base = &self.base;
        if base.is_field() {
            return linalg::solve_field(base, &m, a);
        }
        if base.is_domain() {
            // Over a domain the solution, if any, is adj(M)·a / det(M).
            let d = linalg::det(base, &m);
            if base.is_zero(&d) {
                return None;
            }
            let q: Option<Vec<B::Elem>> = (0..self.rank)
                .map(|k| {
                    let mk: Matrix<B::Elem> = m
                        .iter()
                        .zip(a)
                        .map(|(row, ai)| {
                            let mut row = row.clone();
                            row[k] = ai.clone();
                            row
                        })
                        .collect();
                    base.div_exact(&linalg::det(base, &mk), &d)
                })
                .collect();
            let q = q?;
            return self.equal(&self.mul(&q, b), a).then_some(q);
        }
        linalg::cramer_solve(base, &m, a)
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.base.is_unit(&self.det_norm(a))
    }

    fn is_domain(&self) -> bool {
        self.rank == 1 && self.base.is_domain()
    }

    fn is_field(&self) -> bool {
        self.rank == 1 && self.base.is_field()
    }

    /// Multiplication by `a` on a finite free module is injective exactly when
    /// its determinant is a nonzerodivisor (McCoy).
    fn is_nonzerodivisor(&self, a: &Self::Elem) -> bool {
        self.base.is_nonzerodivisor(&self.det_norm(a))
    }

    fn format(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.base.format(x)).collect();
        format!("({})", parts.join(", "))
    }
}

/// An `A`-algebra map `f: A[v₁..v_k] → E`, determined by the images of the
/// variables.
#[derive(Clone, Debug)]
pub struct AlgebraMap<B: Ring> {
    source: PolyRing,
    target: FiniteFreeAlgebra<B>,
    images: Vec<Vec<B::Elem>>,
}

impl<B: Ring + Sample> AlgebraMap<B> {
    /// Builds the map and spot-checks multiplicativity on seeded random pairs.
    pub fn new(source: PolyRing, target: FiniteFreeAlgebra<B>, images: Vec<Vec<B::Elem>>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} variables",
                images.len(),
                source.nvars()
            )));
        }
        for img in &images {
            target.check_coords(img)?;
        }
        if source.coeffs() != target.scalars() {
            return Err(Error::RingMismatch);
        }
        let map = AlgebraMap { source, target, images };
        let mut rng = random::case_rng(0, "algebra-map", 0);
        let bounds = random::PolyBounds { max_terms: 3, max_degree: 3 };
        for _ in 0..8 {
            let p = map.source.sample(&mut rng, bounds);
            let q = map.source.sample(&mut rng, bounds);
            let lhs = map.apply(&map.source.mul(&p, &q));
            let rhs = map.target.mul(&map.apply(&p), &map.apply(&q));
            if !map.target.equal(&lhs, &rhs) {
                return Err(Error::NotHomomorphism(format!(
                    "f(({})·({})) differs from f({})·f({})",
                    map.source.format(&p),
                    map.source.format(&q),
                    map.source.format(&p),
                    map.source.format(&q)
                )));
            }
        }
        Ok(map)
    }
}

impl<B: Ring> AlgebraMap<B> {
    pub fn source(&self) -> &PolyRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteFreeAlgebra<B> {
        &self.target
    }

    pub fn images(&self) -> &[Vec<B::Elem>] {
        &self.images
    }

    pub fn apply(&self, p: &MultiPoly) -> Vec<B::Elem> {
        let e = &self.target;
        let mut acc = e.zero();
        for (m, c) in p.terms() {
            let mut term = e.from_scalar(c);
            for (exp, img) in m.exponents().iter().zip(&self.images) {
                if *exp > 0 {
                    term = e.mul(&term, &e.pow(img, *exp));
                }
            }
            acc = e.add(&acc, &term);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from(v)
    }

    /// ℚ[t]/(t² − c) in basis (1, t).
    fn quadratic(c: i64) -> FiniteFreeAlgebra<CoeffRing> {
        let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(1)], vec![q(c), q(0)]]];
        FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(0)]).unwrap()
    }

    #[test]
    fn sqrt2_operators() {
        let e = quadratic(2);
        let t = e.basis(1);
        assert_eq!(e.mult_matrix(&t), vec![vec![q(0), q(2)], vec![q(1), q(0)]]);
        assert_eq!(e.trace(&t), q(0));
        assert_eq!(e.det_norm(&t), q(-2));
        assert_eq!(e.mult_matrix(e.unit()), linalg::identity(&CoeffRing::Rationals, 2));
        assert_eq!(e.trace(e.unit()), q(2));
        assert_eq!(e.det_norm(e.unit()), q(1));
    }

    #[test]
    fn rejects_bad_unit() {
        let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(0)]], vec![vec![q(0), q(0)], vec![q(0), q(1)]]];
        let err = FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(0)]).unwrap_err();
        assert_eq!(err, Error::BadUnit { j: 1 });
    }

    #[test]
    fn rejects_noncommutative_and_bad_shape() {
        let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(2)], vec![q(0), q(0)]]];
        let err = FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(0)]).unwrap_err();
        assert_eq!(err, Error::NonCommutative { i: 0, j: 1 });
        let err = FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, vec![], vec![q(1), q(0)]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn trivial_algebra() {
        let e = FiniteFreeAlgebra::new(CoeffRing::Rationals, 1, vec![vec![vec![q(1)]]], vec![q(1)]).unwrap();
        assert!(e.is_field());
        assert_eq!(e.mul(&vec![q(3)], &vec![q(4)]), vec![q(12)]);
    }

    #[test]
    fn map_into_sqrt2() {
        let e = quadratic(2);
        let r = PolyRing::univariate(CoeffRing::Rationals);
        let f = AlgebraMap::new(r.clone(), e.clone(), vec![e.basis(1)]).unwrap();
        assert_eq!(f.apply(&r.parse("t^2 + t").unwrap()), vec![q(2), q(1)]);
        let bad = AlgebraMap::new(r, e.clone(), vec![]);
        assert!(matches!(bad, Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn division_in_quadratic() {
        let e = quadratic(2);
        let a = vec![q(3), q(1)];
        let b = vec![q(1), q(1)];
        let quot = e.div_exact(&a, &b).unwrap();
        assert_eq!(e.mul(&quot, &b), a);
        assert!(e.is_unit(&b));
    }

    #[test]
    fn monogenic_matches_sqrt2() {
        let q = |v: i64| Scalar::from(v);
        let e = FiniteFreeAlgebra::monogenic(CoeffRing::Rationals, vec![q(-2), q(0)]).unwrap();
        assert_eq!(e.structure()[1][1], vec![q(2), q(0)]);
        // t³ = t + 1 gives t²·t² = t⁴ = t² + t.
        let c = FiniteFreeAlgebra::monogenic(CoeffRing::Rationals, vec![q(-1), q(-1), q(0)]).unwrap();
        assert_eq!(c.structure()[2][2], vec![q(0), q(1), q(1)]);
    }
}
