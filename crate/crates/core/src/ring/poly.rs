//! Sparse multivariate polynomials over a [`CoeffRing`].
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under the
//! degree-lexicographic order, with no zero coefficients stored, so two
//! polynomials are equal exactly when their term maps are.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use smallvec::SmallVec;

use super::{CoeffRing, Ring, Scalar};
use crate::error::{Error, Result};

/// Exponent vector; its length is the number of variables of the ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Monomial)
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term under degree-lex.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Builds from terms, combining duplicates and dropping zeros.
    pub fn from_terms<I>(ring: &CoeffRing, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            let slot = map.entry(m).or_default();
            *slot = ring.add(slot, &c);
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { terms: map }
    }
}

/// The polynomial ring `A[v₁, …, v_k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    coeffs: CoeffRing,
    vars: Arc<[String]>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(coeffs: CoeffRing, vars: &[S]) -> Self {
        PolyRing { coeffs, vars: vars.iter().map(|v| v.as_ref().to_string()).collect() }
    }

    /// The univariate ring `A[t]`.
    pub fn univariate(coeffs: CoeffRing) -> Self {
        Self::new(coeffs, &["t"])
    }

    pub fn coeffs(&self) -> CoeffRing {
        self.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        self.monomial(Monomial::var(self.nvars(), i), Scalar::ONE)
    }

    pub fn monomial(&self, m: Monomial, c: Scalar) -> MultiPoly {
        MultiPoly::from_terms(&self.coeffs, [(m, c)])
    }

    pub fn constant(&self, c: Scalar) -> MultiPoly {
        self.monomial(Monomial::one(self.nvars()), c)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(&self, terms: I) -> MultiPoly {
        MultiPoly::from_terms(&self.coeffs, terms)
    }

    /// Parses an expression such as `2*s^2 - 3/4*t + 1`.
    pub fn parse(&self, src: &str) -> Result<MultiPoly> {
        super::parse::parse_poly(self, src)
    }

    /// The scalar value of a constant polynomial.
    pub fn as_constant(&self, p: &MultiPoly) -> Option<Scalar> {
        match p.num_terms() {
            0 => Some(Scalar::ZERO),
            1 => {
                let (m, c) = p.leading()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &Scalar, p: &MultiPoly) -> MultiPoly {
        self.from_terms(p.terms().map(|(m, x)| (m.clone(), self.coeffs.mul(c, x))))
    }

    pub fn evaluate(&self, p: &MultiPoly, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars() {
            return Err(Error::VariableMismatch(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let a = &self.coeffs;
        let mut acc = Scalar::ZERO;
        for (m, c) in p.terms() {
            let mut term = c.clone();
            for (e, x) in m.exponents().iter().zip(point) {
                term = a.mul(&term, &a.pow(x, *e));
            }
            acc = a.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Substitutes `v_i ↦ images[i]`, the images living in `target`.
    pub fn substitute(&self, p: &MultiPoly, images: &[MultiPoly], target: &PolyRing) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        let mut acc = target.zero();
        for (m, c) in p.terms() {
            let mut term = target.constant(target.coeffs.coerce(c)?);
            for (e, img) in m.exponents().iter().zip(images) {
                term = target.mul(&term, &target.pow(img, *e));
            }
            acc = target.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Re-expresses `p` from `source` in this ring, matching variables by name.
    pub fn embed(&self, p: &MultiPoly, source: &PolyRing) -> Result<MultiPoly> {
        let map: Vec<usize> = source
            .vars()
            .iter()
            .map(|v| {
                self.var_index(v)
                    .ok_or_else(|| Error::VariableMismatch(format!("variable {v} missing from target ring")))
            })
            .collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let mut exps = vec![0u32; self.nvars()];
            for (i, e) in m.exponents().iter().enumerate() {
                exps[map[i]] += e;
            }
            terms.push((Monomial::from_exponents(&exps), self.coeffs.coerce(c)?));
        }
        Ok(self.from_terms(terms))
    }
}

impl Ring for PolyRing {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::default()
    }

    fn one(&self) -> MultiPoly {
        self.constant(Scalar::ONE)
    }

    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            let slot = terms.entry(m.clone()).or_default();
            *slot = self.coeffs.add(slot, c);
            if slot.is_zero() {
                terms.remove(m);
            }
        }
        MultiPoly { terms }
    }

    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        MultiPoly { terms: a.terms.iter().map(|(m, c)| (m.clone(), self.coeffs.neg(c))).collect() }
    }

    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut acc: rustc_hash::FxHashMap<Monomial, Scalar> = Default::default();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let c = self.coeffs.mul(ca, cb);
                let slot = acc.entry(ma.mul(mb)).or_default();
                *slot = self.coeffs.add(slot, &c);
            }
        }
        MultiPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }

    fn scalars(&self) -> CoeffRing {
        self.coeffs
    }

    fn from_scalar(&self, s: &Scalar) -> MultiPoly {
        self.constant(self.coeffs.from_scalar(s))
    }

    /// Exact division by sparse long division in degree-lex order.
    fn div_exact(&self, a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = b.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = a.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&lm)?;
            let c = self.coeffs.div_exact(rc, &lc)?;
            let step = self.monomial(m.clone(), c.clone());
            rem = self.sub(&rem, &self.mul(&step, b));
            quot.push((m, c));
        }
        Some(self.from_terms(quot))
    }

    fn is_unit(&self, a: &MultiPoly) -> bool {
        self.as_constant(a).is_some_and(|c| self.coeffs.is_unit(&c))
    }

    fn is_domain(&self) -> bool {
        true
    }

    fn is_field(&self) -> bool {
        self.nvars() == 0 && self.coeffs.is_field()
    }

    fn format(&self, p: &MultiPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().rev().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            let body = if m.is_one() {
                abs.to_string()
            } else if abs.is_one() {
                m.format(&self.vars)
            } else {
                format!("{abs}*{}", m.format(&self.vars))
            };
            match (i, negative) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}
