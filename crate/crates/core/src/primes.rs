//! Primality, prime search and arithmetic modulo a word-sized prime.

/// Deterministic primality test by trial division.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x < 4 {
        return true;
    }
    if x.is_multiple_of(2) || x.is_multiple_of(3) {
        return false;
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= x {
        if x.is_multiple_of(f) || x.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

/// Least prime `>= x`.
pub fn smallest_prime_geq(x: u64) -> u64 {
    let mut c = x.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= x {
        if x.is_multiple_of(f) {
            out.push(f);
            while x.is_multiple_of(f) {
                x /= f;
            }
        }
        f += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Divisors of `x` in increasing order.
pub fn divisors(x: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut f = 1u64;
    while f * f <= x {
        if x.is_multiple_of(f) {
            small.push(f);
            if f * f != x {
                large.push(x / f);
            }
        }
        f += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A prime modulus below 2^32, so products of residues fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(q: u64) -> Self {
        assert!(q < (1 << 32) && is_prime(q), "modulus must be a prime below 2^32");
        Modulus(q)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let qt = r0 / r1;
            (r0, r1) = (r1, r0 - qt * r1);
            (t0, t1) = (t1, t0 - qt * t1);
        }
        Some(t0.rem_euclid(self.0 as i64) as u64)
    }

    /// Smallest prime `q >= 2^31` with `q ≡ 1 (mod order)`.
    pub fn splitting(order: u64) -> Self {
        let start = (1u64 << 31) / order + 1;
        let mut k = start;
        loop {
            let q = k * order + 1;
            if is_prime(q) {
                return Modulus::new(q);
            }
            k += 1;
        }
    }

    /// A primitive `order`-th root of unity; requires `order | q - 1`.
    pub fn primitive_root_of_unity(&self, order: u64) -> u64 {
        let q = self.0;
        assert_eq!((q - 1) % order, 0);
        let factors = prime_factors(order);
        for g in 2..q {
            let r = self.pow(g, (q - 1) / order);
            if factors.iter().all(|&l| self.pow(r, order / l) != 1) {
                return r;
            }
        }
        unreachable!("a cyclic group of order q-1 contains elements of every order dividing q-1")
    }
}
