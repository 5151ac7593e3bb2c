//! Finite-field arithmetic, prime selection, CRT recombination and
//! Berlekamp-Welch decoding.

mod bw;
mod linalg;
mod ext;
mod prime;
mod primes;

pub use bw::{berlekamp_welch, berlekamp_welch_decode, interpolate_at};
pub use ext::{ext_decompose, ext_recompose, find_normal_basis, ExtField, ExtFieldCtx};
pub use prime::PrimeField;
pub use primes::{crt_combine, is_prime, primes_above, select_primes, ResidueVector};

use rand::Rng;
use std::fmt::Debug;

/// A commutative semiring with copyable elements.
///
/// The clique polynomial only needs `+` and `*`, so it is evaluated over this
/// trait; fields and the plain integers both implement it.
pub trait Semiring: Send + Sync {
    type Elem: Copy + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    /// Image of the integer `v` under the canonical map from the integers.
    fn from_u64(&self, v: u64) -> Self::Elem;
}

/// A finite field whose elements can be enumerated.
///
/// `element(i)` for `i in 0..order()` is a fixed bijection onto the field with
/// `element(0) = 0` and `element(1) = 1`.
pub trait Field: Semiring {
    fn characteristic(&self) -> u64;
    fn order(&self) -> u64;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: Self::Elem) -> u64;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn pow(&self, mut base: Self::Elem, mut exp: u64) -> Self::Elem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem
    where
        Self: Sized,
    {
        self.element(rng.random_range(0..self.order()))
    }
}

/// Non-negative integers with overflow-checked arithmetic.
///
/// Used to evaluate the clique polynomial on 0/1 inputs, where the value is a
/// clique count bounded by `n^k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Semiring for Integers {
    type Elem = u128;

    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        1
    }
    fn add(&self, a: u128, b: u128) -> u128 {
        a.checked_add(b).expect("integer overflow in clique polynomial")
    }
    fn mul(&self, a: u128, b: u128) -> u128 {
        a.checked_mul(b).expect("integer overflow in clique polynomial")
    }
    fn from_u64(&self, v: u64) -> u128 {
        u128::from(v)
    }
}
