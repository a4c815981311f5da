use std::fmt;
use std::sync::Arc;

use crate::error::{GesError, Result};
use crate::primes::{divisors, is_prime, Modulus};

/// The field `Q(ω)` with `ω = exp(2πi/N)`.
///
/// Elements are stored in the power basis `1, ω, …, ω^{φ(N)-1}` and reduced
/// modulo the `N`-th cyclotomic polynomial. For prime `N = p` this is the basis
/// `1, ω, …, ω^{p-2}` with `ω^{p-1} = -(1 + ω + … + ω^{p-2})`.
pub struct CyclotomicField {
    order: u64,
    modulus: Vec<i64>,
    reduced_powers: Vec<Vec<i64>>,
    image: ModularImage,
}

/// A ring homomorphism `Z[ω] → F_q` sending `ω` to a primitive `N`-th root of
/// unity mod `q`. A nonzero image proves the preimage nonzero.
#[derive(Clone, Debug)]
pub struct ModularImage {
    modulus: Modulus,
    root_powers: Vec<u64>,
}

impl ModularImage {
    fn new(order: u64) -> Self {
        let modulus = Modulus::splitting(order);
        let root = modulus.primitive_root_of_unity(order);
        let mut root_powers = Vec::with_capacity(order as usize);
        let mut acc = 1u64;
        for _ in 0..order {
            root_powers.push(acc);
            acc = modulus.mul(acc, root);
        }
        ModularImage { modulus, root_powers }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Image of `ω^e`.
    pub fn root_power(&self, e: u64) -> u64 {
        self.root_powers[(e % self.root_powers.len() as u64) as usize]
    }
}

impl CyclotomicField {
    /// The field of `p`-th roots of unity; rejects composite `p`.
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(GesError::NotPrime(p));
        }
        Ok(Arc::new(Self::build(p)))
    }

    /// Any order `N >= 1`. Used for composite-order controls and for
    /// `Q(ω_p, i) = Q(ω_{lcm(p, 4)})`.
    pub fn with_order(order: u64) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(GesError::InvalidOrder(order));
        }
        Ok(Arc::new(Self::build(order)))
    }

    fn build(order: u64) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut reduced_powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            reduced_powers.push(cur.clone());
            // multiply by x and reduce the overflow coefficient
            let top = cur[degree - 1];
            for t in (1..degree).rev() {
                cur[t] = cur[t - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for t in 0..degree {
                    cur[t] -= top * modulus[t];
                }
            }
        }
        CyclotomicField {
            order,
            modulus,
            reduced_powers,
            image: ModularImage::new(order),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Dimension over `Q`, i.e. Euler's `φ(N)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_prime_order(&self) -> bool {
        is_prime(self.order)
    }

    /// Coefficients of the cyclotomic polynomial, constant term first.
    pub fn minimal_polynomial(&self) -> &[i64] {
        &self.modulus
    }

    /// Power-basis coordinates of `ω^e`.
    pub fn reduced_power(&self, e: u64) -> &[i64] {
        &self.reduced_powers[(e % self.order) as usize]
    }

    pub fn image(&self) -> &ModularImage {
        &self.image
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ω_{})", self.order)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

/// `Φ_n(x)`, constant term first, computed as `(x^n - 1) / Π_{d | n, d < n} Φ_d(x)`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        poly = divide_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for t in (0..quot.len()).rev() {
        let c = rem[t + dn];
        quot[t] = c;
        if c != 0 {
            for (s, &b) in den.iter().enumerate() {
                rem[t + s] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division must be exact");
    quot
}
