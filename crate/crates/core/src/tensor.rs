//! The `n`-fold tensor algebra `T^n_A R`.
//!
//! A tensor is a sparse `A`-linear combination of `n`-tuples of basis labels
//! of `R`: monomials when `R` is a polynomial ring, basis indices when `R` is
//! a finite free algebra. Keys are ordered slot by slot, each slot under the
//! label order of `R`; for polynomial `R` this is a monomial order on
//! `T^n_A R = A[t⁽¹⁾, …, t⁽ⁿ⁾]`, which is what makes long division work.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, FiniteFreeAlgebra, Monomial, PolyRing, Ring, Scalar};

pub const MAX_ARITY: usize = 5;

/// A ring `R` whose tensor powers can be formed: it exposes an `A`-basis and
/// the multiplication of basis labels.
pub trait TensorFactor: Ring {
    /// The coefficient ring `A` of the tensor product.
    type Base: Ring;
    type Label: Clone + Ord + Hash + fmt::Debug + Send + Sync;

    fn tensor_base(&self) -> Self::Base;

    /// Expansion of an element in the basis; no zero coefficients.
    fn decompose(&self, e: &Self::Elem) -> Vec<(Self::Label, <Self::Base as Ring>::Elem)>;

    fn element(&self, label: &Self::Label) -> Self::Elem;

    /// Inverse of [`TensorFactor::decompose`]; labels may repeat.
    fn compose(&self, terms: Vec<(Self::Label, <Self::Base as Ring>::Elem)>) -> Self::Elem;

    /// Product of two labels when it is again a single label with
    /// coefficient one.
    fn mul_labels_single(&self, a: &Self::Label, b: &Self::Label) -> Option<Self::Label>;

    fn mul_labels(&self, a: &Self::Label, b: &Self::Label) -> Vec<(Self::Label, <Self::Base as Ring>::Elem)>;

    /// `a / b` when the quotient is again a label; only meaningful for
    /// monomial bases.
    fn divide_label(&self, _a: &Self::Label, _b: &Self::Label) -> Option<Self::Label> {
        None
    }

    fn label_valid(&self, label: &Self::Label) -> bool;

    fn format_label(&self, label: &Self::Label) -> String;

    /// Whether `T^n_A R` is an integral domain for every `n`.
    fn tensor_powers_are_domains(&self) -> bool;
}

impl TensorFactor for PolyRing {
    type Base = CoeffRing;
    type Label = Monomial;

    fn tensor_base(&self) -> CoeffRing {
        self.coeffs()
    }

    fn decompose(&self, e: &Self::Elem) -> Vec<(Monomial, Scalar)> {
        e.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    fn element(&self, label: &Monomial) -> Self::Elem {
        self.monomial(label.clone(), Scalar::ONE)
    }

    fn compose(&self, terms: Vec<(Monomial, Scalar)>) -> Self::Elem {
        self.from_terms(terms)
    }

    fn mul_labels_single(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        Some(a.mul(b))
    }

    fn mul_labels(&self, a: &Monomial, b: &Monomial) -> Vec<(Monomial, Scalar)> {
        vec![(a.mul(b), Scalar::ONE)]
    }

    fn divide_label(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        a.div(b)
    }

    fn label_valid(&self, label: &Monomial) -> bool {
        label.exponents().len() == self.nvars()
    }

    fn format_label(&self, label: &Monomial) -> String {
        label.format(self.vars())
    }

    fn tensor_powers_are_domains(&self) -> bool {
        self.coeffs().is_domain()
    }
}

impl<B: Ring> TensorFactor for FiniteFreeAlgebra<B> {
    type Base = B;
    type Label = usize;

    fn tensor_base(&self) -> B {
        self.base().clone()
    }

    fn decompose(&self, e: &Self::Elem) -> Vec<(usize, B::Elem)> {
        e.iter().enumerate().filter(|(_, c)| !self.base().is_zero(c)).map(|(i, c)| (i, c.clone())).collect()
    }

    fn element(&self, label: &usize) -> Self::Elem {
        self.basis(*label)
    }

    fn compose(&self, terms: Vec<(usize, B::Elem)>) -> Self::Elem {
        let base = self.base();
        let mut out = vec![base.zero(); self.rank()];
        for (i, c) in terms {
            out[i] = base.add(&out[i], &c);
        }
        out
    }

    fn mul_labels_single(&self, a: &usize, b: &usize) -> Option<usize> {
        let v = &self.structure()[*a][*b];
        let base = self.base();
        let mut nonzero = v.iter().enumerate().filter(|(_, c)| !base.is_zero(c));
        match (nonzero.next(), nonzero.next()) {
            (Some((k, c)), None) if base.equal(c, &base.one()) => Some(k),
            _ => None,
        }
    }

    fn mul_labels(&self, a: &usize, b: &usize) -> Vec<(usize, B::Elem)> {
        self.decompose(&self.structure()[*a][*b])
    }

    fn label_valid(&self, label: &usize) -> bool {
        *label < self.rank()
    }

    fn format_label(&self, label: &usize) -> String {
        format!("e{}", label + 1)
    }

    fn tensor_powers_are_domains(&self) -> bool {
        false
    }
}

pub type Label<F> = <F as TensorFactor>::Label;
pub type Coeff<F> = <<F as TensorFactor>::Base as Ring>::Elem;
pub type Key<F> = SmallVec<[Label<F>; MAX_ARITY]>;

/// An element of `T^n_A R`.
pub struct Tensor<F: TensorFactor> {
    n: usize,
    terms: BTreeMap<Key<F>, Coeff<F>>,
}

impl<F: TensorFactor> Clone for Tensor<F> {
    fn clone(&self) -> Self {
        Tensor { n: self.n, terms: self.terms.clone() }
    }
}

impl<F: TensorFactor> PartialEq for Tensor<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl<F: TensorFactor> fmt::Debug for Tensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<F: TensorFactor> Tensor<F> {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Key<F>, &Coeff<F>)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &[Label<F>]) -> Option<&Coeff<F>> {
        self.terms.get(key)
    }

    pub fn leading(&self) -> Option<(&Key<F>, &Coeff<F>)> {
        self.terms.iter().next_back()
    }
}

/// A permutation of `{0, …, n−1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: SmallVec<[usize; MAX_ARITY]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Validates that `images` is a bijection of `{0, …, n−1}`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(Error::PreconditionViolated(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images: images.iter().copied().collect() })
    }

    /// Swap of `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i, j);
        p
    }

    /// The cycle `start → start+1 → … → end → start`.
    pub fn cycle(n: usize, start: usize, end: usize) -> Self {
        let mut p = Self::identity(n);
        if start < end {
            for i in start..end {
                p.images[i] = i + 1;
            }
            p.images[end] = start;
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv: SmallVec<[usize; MAX_ARITY]> = SmallVec::from_elem(0, self.arity());
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `+1` or `−1`.
    pub fn sign(&self) -> i64 {
        let n = self.arity();
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| self.images[i] > self.images[j]).count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `{0, …, n−1}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: current.iter().copied().collect() });
            // Next lexicographic permutation.
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else { break };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    /// Permutations of the first `n−1` points fixing the last.
    pub fn all_fixing_last(n: usize) -> Vec<Permutation> {
        Self::all(n.saturating_sub(1))
            .into_iter()
            .map(|p| {
                let mut images = p.images;
                images.push(n - 1);
                Permutation { images }
            })
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// The ring `T^n_A R` for a fixed factor `R` and arity `n ≤ 5`.
#[derive(Clone, Debug)]
pub struct TensorSpace<F: TensorFactor> {
    n: usize,
    factor: F,
    base: F::Base,
}

impl<F: TensorFactor> TensorSpace<F> {
    pub fn new(factor: F, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::PreconditionViolated(format!("arity {n} outside 1..={MAX_ARITY}")));
        }
        let base = factor.tensor_base();
        Ok(TensorSpace { n, factor, base })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> &F {
        &self.factor
    }

    pub fn base(&self) -> &F::Base {
        &self.base
    }

    /// Same factor, different arity.
    pub fn with_arity(&self, n: usize) -> Result<Self> {
        Self::new(self.factor.clone(), n)
    }

    /// Collects terms, combining equal keys and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Key<F>, Coeff<F>)>>(&self, terms: I) -> Tensor<F> {
        let mut acc: FxHashMap<Key<F>, Coeff<F>> = FxHashMap::default();
        for (k, c) in terms {
            self.accumulate(&mut acc, k, c);
        }
        self.finish(acc)
    }

    fn accumulate(&self, acc: &mut FxHashMap<Key<F>, Coeff<F>>, key: Key<F>, c: Coeff<F>) {
        match acc.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = self.base.add(e.get(), &c);
                *e.get_mut() = v;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn finish(&self, acc: FxHashMap<Key<F>, Coeff<F>>) -> Tensor<F> {
        Tensor { n: self.n, terms: acc.into_iter().filter(|(_, c)| !self.base.is_zero(c)).collect() }
    }

    /// `x₁ ⊗ … ⊗ x_n`, expanded multilinearly.
    pub fn pure(&self, xs: &[F::Elem]) -> Result<Tensor<F>> {
        if xs.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: xs.len() });
        }
        let mut partial: Vec<(Key<F>, Coeff<F>)> = vec![(SmallVec::new(), self.base.one())];
        for x in xs {
            let parts = self.factor.decompose(x);
            let mut next = Vec::with_capacity(partial.len() * parts.len());
            for (k, c) in &partial {
                for (l, d) in &parts {
                    let mut k2 = k.clone();
                    k2.push(l.clone());
                    next.push((k2, self.base.mul(c, d)));
                }
            }
            partial = next;
        }
        Ok(self.from_terms(partial))
    }

    /// The tensor with `r` in slot `p` (1-based) and `1` elsewhere.
    pub fn coprojection(&self, p: usize, r: &F::Elem) -> Result<Tensor<F>> {
        if p == 0 || p > self.n {
            return Err(Error::IndexOutOfRange { index: p, max: self.n });
        }
        let one = self.factor.one();
        let xs: Vec<F::Elem> = (1..=self.n).map(|q| if q == p { r.clone() } else { one.clone() }).collect();
        self.pure(&xs)
    }

    /// `φ₁(z) + … + φ_n(z)`.
    pub fn polarized_power_sum(&self, z: &F::Elem) -> Tensor<F> {
        let parts: Vec<Tensor<F>> =
            (1..=self.n).map(|p| self.coprojection(p, z).expect("slot within range")).collect();
        self.sum(parts.iter())
    }

    /// Moves the factor in slot `i` to slot `σ(i)`.
    pub fn permute(&self, t: &Tensor<F>, sigma: &Permutation) -> Result<Tensor<F>> {
        if sigma.arity() != self.n || t.n != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: sigma.arity().min(t.n) });
        }
        Ok(self.permute_unchecked(t, sigma))
    }

    pub(crate) fn permute_unchecked(&self, t: &Tensor<F>, sigma: &Permutation) -> Tensor<F> {
        let terms = t.terms.iter().map(|(k, c)| (permute_key::<F>(k, sigma), c.clone()));
        Tensor { n: self.n, terms: terms.collect() }
    }

    /// Sum over a set of permutations with optional signs.
    pub(crate) fn signed_orbit_sum(&self, t: &Tensor<F>, perms: &[(Permutation, i64)]) -> Tensor<F> {
        let mut acc: FxHashMap<Key<F>, Coeff<F>> = FxHashMap::default();
        acc.reserve(t.terms.len() * perms.len());
        let neg: Vec<Coeff<F>> = t.terms.values().map(|c| self.base.neg(c)).collect();
        for ((k, c), nc) in t.terms.iter().zip(&neg) {
            for (sigma, sign) in perms {
                let c = if *sign > 0 { c.clone() } else { nc.clone() };
                self.accumulate(&mut acc, permute_key::<F>(k, sigma), c);
            }
        }
        self.finish(acc)
    }

    /// `Σ_σ σ·t` over the full symmetric group.
    pub fn symmetrize(&self, t: &Tensor<F>) -> Tensor<F> {
        let perms: Vec<(Permutation, i64)> = Permutation::all(self.n).into_iter().map(|p| (p, 1)).collect();
        self.signed_orbit_sum(t, &perms)
    }

    /// `Σ_σ σ·t` over permutations of the first `n−1` slots.
    pub fn symmetrize_n11(&self, t: &Tensor<F>) -> Tensor<F> {
        let perms: Vec<(Permutation, i64)> =
            Permutation::all_fixing_last(self.n).into_iter().map(|p| (p, 1)).collect();
        self.signed_orbit_sum(t, &perms)
    }

    fn fixed_by_adjacent(&self, t: &Tensor<F>, upto: usize) -> bool {
        (0..upto.saturating_sub(1)).all(|i| {
            let tau = Permutation::transposition(self.n, i, i + 1);
            t.terms.iter().all(|(k, c)| {
                let k2 = permute_key::<F>(k, &tau);
                t.terms.get(&k2).is_some_and(|c2| self.base.equal(c, c2))
            })
        })
    }

    /// Fixed by every permutation of the slots; tested on adjacent
    /// transpositions, which generate the group.
    pub fn is_symmetric(&self, t: &Tensor<F>) -> bool {
        self.fixed_by_adjacent(t, self.n)
    }

    /// Fixed by every permutation of the first `n−1` slots.
    pub fn is_sym_n11(&self, t: &Tensor<F>) -> bool {
        self.fixed_by_adjacent(t, self.n - 1)
    }

    pub fn scale(&self, c: &Coeff<F>, t: &Tensor<F>) -> Tensor<F> {
        if self.base.is_zero(c) {
            return self.zero();
        }
        Tensor {
            n: self.n,
            terms: t
                .terms
                .iter()
                .map(|(k, x)| (k.clone(), self.base.mul(c, x)))
                .filter(|(_, x)| !self.base.is_zero(x))
                .collect(),
        }
    }

    fn check(&self, t: &Tensor<F>) -> Result<()> {
        if t.n != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: t.n });
        }
        if t.terms.keys().any(|k| k.len() != self.n || !k.iter().all(|l| self.factor.label_valid(l))) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, a: &Tensor<F>, b: &Tensor<F>) -> Result<Tensor<F>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: &Tensor<F>, b: &Tensor<F>) -> Result<Tensor<F>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Applies `f` to every slot's label and expands; used for slot-wise
    /// ring maps `R → R'` given on the basis.
    pub fn map_labels<G, M>(&self, target: &TensorSpace<G>, t: &Tensor<F>, mut f: M) -> Tensor<G>
    where
        G: TensorFactor<Base = F::Base>,
        M: FnMut(&Label<F>) -> G::Elem,
    {
        let mut out = target.zero();
        for (k, c) in &t.terms {
            let xs: Vec<G::Elem> = k.iter().map(&mut f).collect();
            let pure = target.pure(&xs).expect("arity preserved");
            out = target.add(&out, &target.scale(c, &pure));
        }
        out
    }

    pub fn format_key(&self, k: &[Label<F>]) -> String {
        let parts: Vec<String> = k.iter().map(|l| self.factor.format_label(l)).collect();
        format!("[{}]", parts.join("|"))
    }
}

fn permute_key<F: TensorFactor>(k: &Key<F>, sigma: &Permutation) -> Key<F> {
    let mut out: Key<F> = k.clone();
    for (i, l) in k.iter().enumerate() {
        out[sigma.apply(i)] = l.clone();
    }
    out
}

impl<F: TensorFactor> Ring for TensorSpace<F> {
    type Elem = Tensor<F>;

    fn zero(&self) -> Tensor<F> {
        Tensor { n: self.n, terms: BTreeMap::new() }
    }

    fn one(&self) -> Tensor<F> {
        let one = self.factor.one();
        self.pure(&vec![one; self.n]).expect("arity matches")
    }

    fn add(&self, a: &Tensor<F>, b: &Tensor<F>) -> Tensor<F> {
        let (big, small) = if a.terms.len() >= b.terms.len() { (a, b) } else { (b, a) };
        let mut terms = big.terms.clone();
        for (k, c) in &small.terms {
            match terms.get_mut(k) {
                Some(slot) => {
                    let v = self.base.add(slot, c);
                    if self.base.is_zero(&v) {
                        terms.remove(k);
                    } else {
                        *slot = v;
                    }
                }
                None => {
                    terms.insert(k.clone(), c.clone());
                }
            }
        }
        Tensor { n: self.n, terms }
    }

    fn neg(&self, a: &Tensor<F>) -> Tensor<F> {
        Tensor { n: self.n, terms: a.terms.iter().map(|(k, c)| (k.clone(), self.base.neg(c))).collect() }
    }

    fn mul(&self, a: &Tensor<F>, b: &Tensor<F>) -> Tensor<F> {
        let mut acc: FxHashMap<Key<F>, Coeff<F>> = FxHashMap::default();
        acc.reserve(a.terms.len() * b.terms.len());
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let c = self.base.mul(ca, cb);
                let single: Option<Key<F>> =
                    ka.iter().zip(kb.iter()).map(|(x, y)| self.factor.mul_labels_single(x, y)).collect();
                match single {
                    Some(k) => self.accumulate(&mut acc, k, c),
                    None => {
                        let mut partial: Vec<(Key<F>, Coeff<F>)> = vec![(SmallVec::new(), c)];
                        for (x, y) in ka.iter().zip(kb.iter()) {
                            let prods = self.factor.mul_labels(x, y);
                            let mut next = Vec::with_capacity(partial.len() * prods.len());
                            for (k, c) in &partial {
                                for (l, d) in &prods {
                                    let mut k2 = k.clone();
                                    k2.push(l.clone());
                                    next.push((k2, self.base.mul(c, d)));
                                }
                            }
                            partial = next;
                        }
                        for (k, c) in partial {
                            self.accumulate(&mut acc, k, c);
                        }
                    }
                }
            }
        }
        self.finish(acc)
    }

    fn is_zero(&self, a: &Tensor<F>) -> bool {
        a.terms.is_empty()
    }

    fn scalars(&self) -> CoeffRing {
        self.factor.scalars()
    }

    fn from_scalar(&self, s: &Scalar) -> Tensor<F> {
        self.scale(&self.base.from_scalar(s), &self.one())
    }

    /// Long division in the slot-wise key order; succeeds only when `a` is an
    /// exact multiple of `b` and the factor has a monomial basis.
    fn div_exact(&self, a: &Tensor<F>, b: &Tensor<F>) -> Option<Tensor<F>> {
        use std::collections::btree_map::Entry;
        let (lk, lc) = b.leading()?;
        let divides = |x: &Key<F>, y: &Key<F>| -> Option<Key<F>> {
            x.iter().zip(y.iter()).map(|(p, q)| self.factor.divide_label(p, q)).collect()
        };
        // Lowest terms multiply as well, which rejects most non-multiples at once.
        if let (Some(ak), Some(bk)) = (a.terms.keys().next(), b.terms.keys().next()) {
            divides(ak, bk)?;
        }
        let mut rem = a.terms.clone();
        let mut quot: Vec<(Key<F>, Coeff<F>)> = Vec::new();
        while let Some((rk, rc)) = rem.iter().next_back() {
            let rk = rk.clone();
            let k = divides(&rk, lk)?;
            let c = self.base.div_exact(rc, lc)?;
            for (bk, bc) in &b.terms {
                let key: Key<F> =
                    k.iter().zip(bk.iter()).map(|(x, y)| self.factor.mul_labels_single(x, y)).collect::<Option<_>>()?;
                let delta = self.base.mul(&c, bc);
                match rem.entry(key) {
                    Entry::Occupied(mut e) => {
                        let v = self.base.sub(e.get(), &delta);
                        if self.base.is_zero(&v) {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(self.base.neg(&delta));
                    }
                }
            }
            if rem.contains_key(&rk) {
                return None;
            }
            quot.push((k, c));
        }
        Some(self.from_terms(quot))
    }

    fn is_domain(&self) -> bool {
        self.factor.tensor_powers_are_domains()
    }

    fn format(&self, t: &Tensor<F>) -> String {
        if t.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in t.terms.iter().enumerate() {
            let text = self.base.format(c);
            let compound = text.contains(" + ") || text.contains(" - ");
            let (negative, body) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ if compound => (false, format!("({text})")),
                _ => (false, text),
            };
            let term = format!("{body}*{}", self.format_key(k));
            match (i, negative) {
                (0, true) => out.push_str(&format!("-{term}")),
                (0, false) => out.push_str(&term),
                (_, true) => out.push_str(&format!(" - {term}")),
                (_, false) => out.push_str(&format!(" + {term}")),
            }
        }
        out
    }
}
