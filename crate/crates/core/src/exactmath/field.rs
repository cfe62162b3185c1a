use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Default working prime, the Mersenne prime `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// Fixed retry primes for rank certification. Deficiency modulo the first
/// triggers retries with the rest; full rank modulo any one is a proof.
pub const RETRY_PRIMES: [u64; 3] = [DEFAULT_PRIME, 999_999_999_999_999_989, 2_147_483_647];

/// Arithmetic in `Z/p` for a prime `p < 2^63`, elements in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// The modulus is trusted to be prime here; use [`is_prime_u64`] to
    /// validate untrusted input first.
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2 && p < (1 << 63));
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // both < 2^63, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `x` must be nonzero.
    pub fn inv(&self, x: u64) -> u64 {
        debug_assert!(x % self.p != 0);
        self.pow(x, self.p - 2)
    }

    /// Reduces an arbitrary-precision integer into `[0, p)`. The reduction
    /// is limb-based, so doubly exponential coefficients never materialize
    /// on the field path beyond their compact big-integer form.
    pub fn reduce_bigint(&self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        x.mod_floor(&p).to_u64().expect("reduced value fits u64")
    }
}

/// Deterministic Miller-Rabin for u64 (the usual 12-base certificate).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn retry_primes_are_prime() {
        for p in RETRY_PRIMES {
            assert!(is_prime_u64(p), "{p} must be prime");
        }
    }

    #[test]
    fn field_axioms_spot_checks() {
        let f = PrimeField::new(DEFAULT_PRIME);
        let p = f.modulus();
        let xs = [1u64, 2, 17, p - 1, p / 2, 123_456_789_123];
        for &x in &xs {
            assert_eq!(f.mul(f.inv(x), x), 1, "inverse of {x}");
            assert_eq!(f.add(x, f.neg(x)), 0);
            assert_eq!(f.sub(x, x), 0);
        }
        assert_eq!(f.mul(p - 1, p - 1), 1);
    }

    #[test]
    fn bigint_reduction_handles_negatives_and_huge_values() {
        let f = PrimeField::new(97);
        assert_eq!(f.reduce_bigint(&BigInt::from(-1)), 96);
        let huge = BigInt::from(2).pow(2048) + BigInt::from(5);
        let by_parts = {
            let f2 = PrimeField::new(97);
            let two_pow = f2.pow(2, 2048);
            f2.add(two_pow, 5)
        };
        assert_eq!(f.reduce_bigint(&huge), by_parts);
    }

    #[test]
    fn miller_rabin_small_cases() {
        let primes = [2u64, 3, 5, 97, 2_147_483_647];
        let composites = [0u64, 1, 4, 91, 561, 25326001, 3215031751];
        for p in primes {
            assert!(is_prime_u64(p));
        }
        for c in composites {
            assert!(!is_prime_u64(c), "{c}");
        }
    }
}
