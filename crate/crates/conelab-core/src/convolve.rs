//! Convolution of atomic measures, convolution powers, and mixed power sums.
//!
//! Convolution of atomic measures is the sparse pairwise sum-of-locations
//! product (the Newton-polytope picture of polynomial multiplication):
//! every atom pair contributes its location sum with the product of weights,
//! and canonicalization merges collisions — in exact mode cancellations are
//! detected exactly.

use alloc::vec::Vec;

use crate::measure::{AtomicMeasure, MeasureError};
use crate::scalar::Scalar;

/// Pairwise convolution. Commutative and associative; the zero measure is
/// absorbing and `δ₀` is the identity.
pub fn convolve<S: Scalar>(
    a: &AtomicMeasure<S>,
    b: &AtomicMeasure<S>,
) -> Result<AtomicMeasure<S>, MeasureError> {
    if a.dim() != b.dim() {
        return Err(MeasureError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let mut raw: Vec<(Vec<S>, S)> = Vec::with_capacity(a.atom_count() * b.atom_count());
    for x in a.atoms() {
        for y in b.atoms() {
            let location: Vec<S> = x
                .location
                .iter()
                .zip(y.location.iter())
                .map(|(u, v)| u.clone() + v.clone())
                .collect();
            raw.push((location, x.weight.clone() * y.weight.clone()));
        }
    }
    AtomicMeasure::new(a.dim(), raw)
}

/// Iteratively computed convolution powers `a^{*k}`, keeping every
/// intermediate power: the region checks quantify over each `k`, so the
/// intermediates are needed anyway.
#[derive(Debug, Clone)]
pub struct PowerCache<S: Scalar> {
    /// `powers[i] = base^{*(i+1)}`; `powers[0]` is the base itself.
    powers: Vec<AtomicMeasure<S>>,
}

impl<S: Scalar> PowerCache<S> {
    pub fn new(base: AtomicMeasure<S>) -> Self {
        PowerCache {
            powers: alloc::vec![base],
        }
    }

    pub fn base(&self) -> &AtomicMeasure<S> {
        &self.powers[0]
    }

    /// `base^{*k}` for `k ≥ 1`, extending the cache by the linear recurrence
    /// `a^{*(k+1)} = a * a^{*k}`.
    pub fn power(&mut self, k: usize) -> Result<&AtomicMeasure<S>, MeasureError> {
        assert!(k >= 1, "convolution powers start at k = 1");
        while self.powers.len() < k {
            let next = convolve(&self.powers[0], self.powers.last().expect("non-empty"))?;
            self.powers.push(next);
        }
        Ok(&self.powers[k - 1])
    }

    pub fn computed_up_to(&self) -> usize {
        self.powers.len()
    }
}

/// The mixed power sum `Σ_{j=0..k} a^{*(k−j)} * b^{*j}`, where the `j = 0`
/// and `j = k` terms mean `a^{*k}` and `b^{*k}` respectively.
pub fn mixed_power_sum<S: Scalar>(
    a: &mut PowerCache<S>,
    b: &mut PowerCache<S>,
    k: usize,
) -> Result<AtomicMeasure<S>, MeasureError> {
    assert!(k >= 1, "mixed power sums start at k = 1");
    let mut acc = a.power(k)?.clone();
    for j in 1..k {
        let term = convolve(a.power(k - j)?, b.power(j)?)?;
        acc = acc.add(&term)?;
    }
    acc.add(b.power(k)?)
}

/// Both sides of the telescoping factorization
/// `a^{*k} − b^{*k} = (a − b) * Σ_{j=0..k−1} a^{*(k−1−j)} * b^{*j}`,
/// which agree exactly in exact mode.
pub fn telescoping_difference<S: Scalar>(
    a: &AtomicMeasure<S>,
    b: &AtomicMeasure<S>,
    k: usize,
) -> Result<(AtomicMeasure<S>, AtomicMeasure<S>), MeasureError> {
    assert!(k >= 2, "telescoping needs k >= 2");
    let mut ca = PowerCache::new(a.clone());
    let mut cb = PowerCache::new(b.clone());
    let lhs = ca.power(k)?.sub(cb.power(k)?)?;
    let sum = mixed_power_sum(&mut ca, &mut cb, k - 1)?;
    let rhs = convolve(&a.sub(b)?, &sum)?;
    Ok((lhs, rhs))
}
