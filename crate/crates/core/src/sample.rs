//! Seeded random test points.
//!
//! Points cycle through every pattern of zero and nonzero coordinates, so a
//! run of `2^{n+1} - 1` or more points hits every chart and every
//! leading-zero configuration. Rational entries are `p/q` with `p` in
//! `[-99, 99] \ {0}` and `q` in `[1, 99]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::projective::{normalize, Field, PrimeField, ProjectivePoint, Rationals};

/// A field that can draw uniformly distributed nonzero elements.
pub trait SampleField: Field {
    fn sample_nonzero<R: Rng>(&self, rng: &mut R) -> Self::Elem;
}

impl SampleField for Rationals {
    fn sample_nonzero<R: Rng>(&self, rng: &mut R) -> Self::Elem {
        let mut num = 0i64;
        while num == 0 {
            num = rng.gen_range(-99..=99);
        }
        let den = rng.gen_range(1..=99i64);
        num_rational::BigRational::new(num.into(), den.into())
    }
}

impl SampleField for PrimeField {
    fn sample_nonzero<R: Rng>(&self, rng: &mut R) -> Self::Elem {
        rng.gen_range(1..self.modulus())
    }
}

/// Deterministic stream of random points of `P^n`.
#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: ChaCha8Rng,
    nvars: usize,
    masks: Vec<u64>,
    next_mask: usize,
}

impl PointSampler {
    /// Cycles through every nonempty support pattern.
    pub fn new(seed: u64, n: usize) -> Self {
        Self::with_masks(seed, n, |_| true)
    }

    /// Only support patterns where coordinate `i` is nonzero.
    pub fn on_chart(seed: u64, n: usize, i: usize) -> Self {
        Self::with_masks(seed, n, |mask| mask >> i & 1 == 1)
    }

    fn with_masks(seed: u64, n: usize, keep: impl Fn(u64) -> bool) -> Self {
        assert!(n < 63, "support patterns are enumerated as 64-bit masks");
        let nvars = n + 1;
        let masks = (1u64..1 << nvars).filter(|&m| keep(m)).collect();
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            nvars,
            masks,
            next_mask: 0,
        }
    }

    /// The next point, unnormalized, with the next support pattern.
    pub fn next_raw<F: SampleField>(&mut self, field: &F) -> Vec<F::Elem> {
        let mask = self.masks[self.next_mask];
        self.next_mask = (self.next_mask + 1) % self.masks.len();
        (0..self.nvars)
            .map(|j| {
                if mask >> j & 1 == 1 {
                    field.sample_nonzero(&mut self.rng)
                } else {
                    field.zero()
                }
            })
            .collect()
    }

    pub fn next_point<F: SampleField>(&mut self, field: &F) -> ProjectivePoint<F::Elem> {
        let raw = self.next_raw(field);
        normalize(field, &raw).expect("support pattern is nonempty")
    }

    pub fn take_points<F: SampleField>(
        &mut self,
        field: &F,
        count: usize,
    ) -> Vec<ProjectivePoint<F::Elem>> {
        (0..count).map(|_| self.next_point(field)).collect()
    }
}
