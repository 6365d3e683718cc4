use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus; residues always fit in a byte.
pub const MAX_PRIME: u32 = 251;

/// An odd prime modulus `p <= 251` together with the scalar arithmetic of GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u8);

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl Prime {
    pub fn new(p: u32) -> Result<Prime> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::PrimeOutOfRange(p));
        }
        Ok(Prime(p as u8))
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.0 as u16 - b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(self, a: u8, b: u8, c: u8) -> u8 {
        ((a as u32 + b as u32 * c as u32) % self.0 as u32) as u8
    }

    pub fn pow(self, mut a: u8, mut e: u64) -> u8 {
        let mut acc = 1u8 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a % self.0 != 0, "inverse of zero in GF({})", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    pub fn is_square(self, a: u8) -> bool {
        a == 0 || self.pow(a, (self.0 as u64 - 1) / 2) == 1
    }

    /// Quadratic nonresidues in increasing order.
    pub fn nonresidues(self) -> Vec<u8> {
        (1..self.0).filter(|&a| !self.is_square(a)).collect()
    }

    pub fn least_nonresidue(self) -> u8 {
        self.nonresidues()[0]
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u8 {
        let order = self.0 as u64 - 1;
        let factors: Vec<u64> = (2..=order).filter(|q| order % q == 0 && is_prime(*q as u32)).collect();
        (1..self.0)
            .find(|&g| factors.iter().all(|q| self.pow(g, order / q) != 1))
            .expect("GF(p)* is cyclic")
    }

    /// Centered representative, e.g. `p - 1` becomes `-1`.
    pub fn signed(self, a: u8) -> i64 {
        if (a as u32) * 2 > self.0 as u32 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Prime> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.value()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
