//! Exact coefficient rings, polynomial rings and finite free algebras.
//!
//! Every ring is a *descriptor* implementing [`Ring`]; elements are plain
//! values manipulated through the descriptor. This lets the same generic code
//! (determinants, linear solves, the algebra validator) run over scalars,
//! polynomials, finite algebras, tensors and localized fractions alike.

pub mod algebra;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod scalar;

use std::fmt;

pub use algebra::{AlgebraMap, FiniteFreeAlgebra};
pub use poly::{Monomial, MultiPoly, PolyRing};
pub use scalar::{CoeffRing, Scalar};

/// A commutative unital ring, given as a descriptor of its elements.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Equality of the represented values. Defaults to structural equality,
    /// which is correct for every canonically represented ring.
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// The coefficient ring this ring is an algebra over.
    fn scalars(&self) -> CoeffRing;

    /// Image of an element of [`Ring::scalars`] under the structure map.
    fn from_scalar(&self, s: &Scalar) -> Self::Elem;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_scalar(&self.scalars().from_i64(n))
    }

    /// Some `q` with `q * b == a`, if one exists and can be found.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.div_exact(&self.one(), a).is_some()
    }

    fn is_domain(&self) -> bool;

    fn is_field(&self) -> bool {
        false
    }

    /// Whether multiplication by `a` is injective.
    fn is_nonzerodivisor(&self, a: &Self::Elem) -> bool {
        if self.is_domain() {
            !self.is_zero(a)
        } else {
            false
        }
    }

    fn format(&self, a: &Self::Elem) -> String;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn scale_i64(&self, n: i64, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_i64(n), a)
    }
}
