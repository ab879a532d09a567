//! Seeded random instances.
//!
//! Every stream is a ChaCha8 generator whose 64-bit seed is derived from a
//! suite seed, a stream label and a case index, so each case can be
//! regenerated on its own and results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{CoeffRing, FiniteFreeAlgebra, Monomial, MultiPoly, PolyRing, Ring, Scalar};

pub type CaseRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Generator for case `case` of stream `label` under suite seed `seed`.
pub fn case_rng(seed: u64, label: &str, case: u64) -> CaseRng {
    let mixed = splitmix64(splitmix64(seed) ^ fnv1a(label)).wrapping_add(splitmix64(case));
    ChaCha8Rng::seed_from_u64(splitmix64(mixed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyBounds {
    pub max_terms: usize,
    pub max_degree: u32,
}

impl Default for PolyBounds {
    fn default() -> Self {
        PolyBounds { max_terms: 4, max_degree: 3 }
    }
}

/// Rings that can produce random elements of bounded size.
pub trait Sample: Ring {
    fn sample(&self, rng: &mut CaseRng, bounds: PolyBounds) -> Self::Elem;
}

/// A nonzero coefficient: `{−3..3} \ {0}` over ℚ and ℤ, uniform over `𝔽_p^×`.
pub fn nonzero_scalar(rng: &mut CaseRng, ring: &CoeffRing) -> Scalar {
    match ring {
        CoeffRing::PrimeField(p) => Scalar::from(rng.gen_range(1..*p as i64)),
        _ => {
            let v = rng.gen_range(1..=3i64);
            Scalar::from(if rng.gen_bool(0.5) { v } else { -v })
        }
    }
}

impl Sample for CoeffRing {
    fn sample(&self, rng: &mut CaseRng, _bounds: PolyBounds) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => Scalar::from(rng.gen_range(0..*p as i64)),
            _ => Scalar::from(rng.gen_range(-3..=3i64)),
        }
    }
}

pub fn random_monomial(rng: &mut CaseRng, nvars: usize, max_degree: u32) -> Monomial {
    let mut exps = vec![0u32; nvars];
    if nvars > 0 {
        for _ in 0..rng.gen_range(0..=max_degree) {
            exps[rng.gen_range(0..nvars)] += 1;
        }
    }
    Monomial::from_exponents(&exps)
}

impl Sample for PolyRing {
    /// Between one and `max_terms` terms of total degree at most
    /// `max_degree`; colliding monomials may cancel, so zero is possible.
    fn sample(&self, rng: &mut CaseRng, bounds: PolyBounds) -> MultiPoly {
        let count = rng.gen_range(1..=bounds.max_terms.max(1));
        let terms: Vec<(Monomial, Scalar)> = (0..count)
            .map(|_| {
                let m = random_monomial(rng, self.nvars(), bounds.max_degree);
                (m, nonzero_scalar(rng, &self.coeffs()))
            })
            .collect();
        self.from_terms(terms)
    }
}

impl<B: Sample> Sample for FiniteFreeAlgebra<B> {
    fn sample(&self, rng: &mut CaseRng, bounds: PolyBounds) -> Vec<B::Elem> {
        (0..self.rank()).map(|_| self.base().sample(rng, bounds)).collect()
    }
}
