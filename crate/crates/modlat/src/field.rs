//! Arithmetic in the prime field F_q.
//!
//! Elements are stored canonically as machine integers in `[0, q)`; every
//! operation reduces eagerly, so two equal field values always have equal
//! representations.

use crate::error::{Error, Result};
use crate::rng;
use rand::RngCore;

/// A prime modulus, validated at construction.
///
/// Only prime fields are supported: `q` must be a prime with `2 <= q < 2^31`,
/// which keeps every product of two canonical elements inside `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    q: u64,
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 || q >= (1 << 31) || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(FieldSpec { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    /// Multiplicative inverse of a nonzero element.
    ///
    /// Panics on zero; callers only invert pivots, which are nonzero by
    /// construction.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "attempted to invert 0 in F_{}", self.q);
        // Extended Euclid on (a, q).
        let (mut old_r, mut r) = (a as i128, self.q as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let quot = old_r / r;
            (old_r, r) = (r, old_r - quot * r);
            (old_s, s) = (s, old_s - quot * s);
        }
        debug_assert_eq!(old_r, 1, "modulus is prime, gcd must be 1");
        old_s.rem_euclid(self.q as i128) as u64
    }

    /// One uniform field element, drawn by rejection so the output depends
    /// only on the generator's `next_u64` stream.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        rng::uniform(rng, self.q)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
