use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;

use super::field::CyclotomicField;
use crate::error::{GesError, Result};
use crate::scalar::{real, ExactScalar, Real};

/// An exact element of `Q(ω_N)` in canonical power-basis form.
///
/// Two values are equal iff their coefficient vectors are equal; `is_zero`
/// is a coefficient scan. Arithmetic operators panic on mismatched fields;
/// the `checked_*` methods report the mismatch instead.
#[derive(Clone)]
pub struct CycNum<T> {
    field: Arc<CyclotomicField>,
    coeffs: Vec<T>,
}

impl<T: ExactScalar> CycNum<T> {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycNum {
            field: field.clone(),
            coeffs: vec![T::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_scalar(field, T::one())
    }

    pub fn from_scalar(field: &Arc<CyclotomicField>, value: T) -> Self {
        let mut out = Self::zero(field);
        out.coeffs[0] = value;
        out
    }

    /// `ω^e` for any integer exponent.
    pub fn root_power(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let n = field.order() as i64;
        let e = e.rem_euclid(n) as u64;
        let coeffs = field
            .reduced_power(e)
            .iter()
            .map(|&c| T::from_i64(c).expect("small integer"))
            .collect();
        CycNum {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds from raw power-basis coordinates of any length, reducing
    /// `ω^t` for `t >= φ(N)`.
    pub fn from_power_coeffs(field: &Arc<CyclotomicField>, raw: &[T]) -> Self {
        let mut out = Self::zero(field);
        out.accumulate(raw.iter().cloned().enumerate());
        out
    }

    fn accumulate(&mut self, terms: impl Iterator<Item = (usize, T)>) {
        let deg = self.coeffs.len();
        for (t, c) in terms {
            if c.is_zero() {
                continue;
            }
            if t < deg {
                self.coeffs[t] = self.coeffs[t].clone() + c;
            } else {
                for (s, &r) in self.field.reduced_power(t as u64).iter().enumerate() {
                    if r != 0 {
                        let r = T::from_i64(r).expect("small integer");
                        self.coeffs[s] = self.coeffs[s].clone() + c.clone() * r;
                    }
                }
            }
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.order() != other.field.order() {
            return Err(GesError::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(CycNum {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(CycNum {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let deg = self.coeffs.len();
        let mut prod = vec![T::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = prod[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(Self::from_power_coeffs(&self.field, &prod))
    }

    pub fn scale(&self, s: &T) -> Self {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<T> = self
            .field
            .minimal_polynomial()
            .iter()
            .map(|&c| T::from_i64(c).expect("small integer"))
            .collect();
        // Invariant: s_i * a ≡ r_i (mod Φ).
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<T> = vec![];
        let mut s1: Vec<T> = vec![T::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Φ is irreducible.
        let c = r1[0].clone();
        let inv: Vec<T> = s1.into_iter().map(|x| x / c.clone()).collect();
        Some(Self::from_power_coeffs(&self.field, &inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Option<Self>> {
        self.check_field(other)?;
        Ok(other.inverse().map(|inv| self * &inv))
    }

    /// Complex value under the embedding `ω ↦ exp(2πi/N)`.
    pub fn to_complex<R: Real>(&self) -> Complex<R> {
        let n = self.field.order() as f64;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (t, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            if c == 0.0 {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * t as f64 / n;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        Complex::new(real(re), real(im))
    }

    /// Image under the field's modular homomorphism, `None` when a
    /// coefficient denominator vanishes mod `q`.
    pub fn residue(&self) -> Option<u64> {
        let image = self.field.image();
        let q = image.modulus();
        let mut acc = 0u64;
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = c.residue(q)?;
            acc = q.add(acc, q.mul(r, image.root_power(t as u64)));
        }
        Some(acc)
    }
}

fn trim<T: ExactScalar>(mut p: Vec<T>) -> Vec<T> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(T::zero());
    }
    p
}

fn poly_mul<T: ExactScalar>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_sub<T: ExactScalar>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(T::zero);
        let y = b.get(i).cloned().unwrap_or_else(T::zero);
        out.push(x - y);
    }
    trim(out)
}

/// Polynomial long division; `den` must have a nonzero leading coefficient.
fn poly_divrem<T: ExactScalar>(num: &[T], den: &[T]) -> (Vec<T>, Vec<T>) {
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    let mut rem = num.to_vec();
    if num.len() <= dn {
        return (vec![T::zero()], trim(rem));
    }
    let mut quot = vec![T::zero(); num.len() - dn];
    for t in (0..quot.len()).rev() {
        let c = rem[t + dn].clone() / lead.clone();
        if !c.is_zero() {
            for (s, b) in den.iter().enumerate() {
                rem[t + s] = rem[t + s].clone() - c.clone() * b.clone();
            }
        }
        quot[t] = c;
    }
    rem.truncate(dn.max(1));
    (trim(quot), trim(rem))
}

impl<T: PartialEq> PartialEq for CycNum<T> {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.coeffs == other.coeffs
    }
}

impl<T: ExactScalar + fmt::Display> fmt::Display for CycNum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match t {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ω")?,
                _ => write!(f, "({c})ω^{t}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for CycNum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycNum")
            .field("order", &self.field.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a, T: ExactScalar> $trait<&'a CycNum<T>> for &'a CycNum<T> {
            type Output = CycNum<T>;
            fn $method(self, rhs: &'a CycNum<T>) -> CycNum<T> {
                self.$checked(rhs).expect("cyclotomic operands must share a field")
            }
        }

        impl<T: ExactScalar> $trait for CycNum<T> {
            type Output = CycNum<T>;
            fn $method(self, rhs: CycNum<T>) -> CycNum<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<T: ExactScalar> Neg for &CycNum<T> {
    type Output = CycNum<T>;
    fn neg(self) -> CycNum<T> {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: ExactScalar> Neg for CycNum<T> {
    type Output = CycNum<T>;
    fn neg(self) -> CycNum<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Cyc = CycNum<BigRational>;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn root_powers_p5() {
        let f = CyclotomicField::prime(5).unwrap();
        assert_eq!(Cyc::root_power(&f, 0).coeffs(), ints(&[1, 0, 0, 0]).as_slice());
        assert_eq!(Cyc::root_power(&f, 2).coeffs(), ints(&[0, 0, 1, 0]).as_slice());
        // 1 + ω + ω² + ω³ + ω⁴ = 0
        assert_eq!(Cyc::root_power(&f, 4).coeffs(), ints(&[-1, -1, -1, -1]).as_slice());
        assert_eq!(Cyc::root_power(&f, -1), Cyc::root_power(&f, 4));
    }

    #[test]
    fn exponent_sum_wraps() {
        let f = CyclotomicField::prime(5).unwrap();
        let prod = &Cyc::root_power(&f, 2) * &Cyc::root_power(&f, 3);
        assert!(prod.is_one());
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for p in [2u64, 3, 5, 7, 11] {
            let f = CyclotomicField::prime(p).unwrap();
            let s = (0..p as i64).fold(Cyc::zero(&f), |acc, e| acc + Cyc::root_power(&f, e));
            assert!(s.is_zero(), "p = {p}");
        }
        let f = CyclotomicField::prime(7).unwrap();
        assert!(!Cyc::root_power(&f, 3).is_zero());
    }

    #[test]
    fn additive_inverse() {
        let f = CyclotomicField::prime(7).unwrap();
        let a = Cyc::from_power_coeffs(&f, &ints(&[3, -1, 0, 2, 5, 0, 4, 9]));
        assert!((&a + &(-&a)).is_zero());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverse_of_root_is_conjugate_power() {
        let f = CyclotomicField::prime(11).unwrap();
        let w3 = Cyc::root_power(&f, 3);
        assert_eq!(w3.inverse().unwrap(), Cyc::root_power(&f, 8));
        assert!(Cyc::zero(&f).inverse().is_none());
    }

    #[test]
    fn inverse_of_general_element() {
        let f = CyclotomicField::prime(7).unwrap();
        let a = Cyc::from_power_coeffs(&f, &ints(&[2, -3, 0, 1, 0, 7]));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        let g = CyclotomicField::with_order(12).unwrap();
        let b = Cyc::from_power_coeffs(&g, &ints(&[1, 1, 0, 5]));
        assert!((&b * &b.inverse().unwrap()).is_one());
    }

    #[test]
    fn mismatched_fields_rejected() {
        let f5 = CyclotomicField::prime(5).unwrap();
        let f7 = CyclotomicField::prime(7).unwrap();
        let a = Cyc::one(&f5);
        let b = Cyc::one(&f7);
        assert!(matches!(a.checked_add(&b), Err(GesError::FieldMismatch { left: 5, right: 7 })));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn complex_embedding() {
        let f = CyclotomicField::prime(5).unwrap();
        let z: Complex<f64> = Cyc::root_power(&f, 4).to_complex();
        let angle = 2.0 * std::f64::consts::PI * 4.0 / 5.0;
        assert!((z.re - angle.cos()).abs() < 1e-12);
        assert!((z.im - angle.sin()).abs() < 1e-12);
        let half = Cyc::from_scalar(&f, BigRational::new(1.into(), 2.into()));
        assert!((half.to_complex::<f64>().re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn residue_is_multiplicative() {
        let f = CyclotomicField::prime(13).unwrap();
        let q = *f.image().modulus();
        let a = Cyc::from_power_coeffs(&f, &ints(&[1, 4, 0, -2, 0, 0, 0, 0, 0, 0, 0, 3]));
        let b = Cyc::root_power(&f, 7).scale(&BigRational::new(3.into(), 5.into()));
        let ab = &a * &b;
        assert_eq!(ab.residue().unwrap(), q.mul(a.residue().unwrap(), b.residue().unwrap()));
    }
}
