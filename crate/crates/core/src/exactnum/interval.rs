//! Fixed-point interval arithmetic with outward rounding.
//!
//! An interval at `bits` of precision stores integers `lo <= hi` such that the
//! enclosed real lies in `[lo / 2^bits, hi / 2^bits]`. Every operation rounds
//! the lower endpoint down and the upper endpoint up, so enclosures stay
//! rigorous at any precision; only their width depends on `bits`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub(crate) struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u64,
}

fn floor_shr(x: &BigInt, k: u64) -> BigInt {
    // `>>` on BigInt rounds towards negative infinity.
    x >> k
}

fn ceil_shr(x: &BigInt, k: u64) -> BigInt {
    -((-x) >> k)
}

impl Interval {
    pub(crate) fn zero(bits: u64) -> Self {
        Interval { lo: BigInt::zero(), hi: BigInt::zero(), bits }
    }

    pub(crate) fn from_rational(r: &BigRational, bits: u64) -> Self {
        let scaled_num = r.numer() << bits;
        let den = r.denom();
        Interval {
            lo: scaled_num.div_floor(den),
            hi: Integer::div_ceil(&scaled_num, den),
            bits,
        }
    }

    pub(crate) fn from_integer(n: i64, bits: u64) -> Self {
        let v = BigInt::from(n) << bits;
        Interval { lo: v.clone(), hi: v, bits }
    }

    pub(crate) fn add(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.bits, other.bits);
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, bits: self.bits }
    }

    pub(crate) fn sub(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.bits, other.bits);
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo, bits: self.bits }
    }

    #[cfg(test)]
    pub(crate) fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }

    pub(crate) fn mul(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.bits, other.bits);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval { lo: floor_shr(min, self.bits), hi: ceil_shr(max, self.bits), bits: self.bits }
    }

    /// Multiply by an exact rational.
    pub(crate) fn scale(&self, r: &BigRational) -> Interval {
        let (n, d) = (r.numer(), r.denom());
        let a = &self.lo * n;
        let b = &self.hi * n;
        let (min, max) = if a <= b { (a, b) } else { (b, a) };
        Interval { lo: min.div_floor(d), hi: Integer::div_ceil(&max, d), bits: self.bits }
    }

    /// Enlarge the enclosure by `num / den` on both sides.
    pub(crate) fn widen(&self, num: &BigInt, den: &BigInt) -> Interval {
        let eps = Integer::div_ceil(&(num << self.bits), den);
        Interval { lo: &self.lo - &eps, hi: &self.hi + &eps, bits: self.bits }
    }

    /// Sign of the enclosed value if the enclosure excludes zero.
    pub(crate) fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Width in units of 2^-bits.
    #[cfg(test)]
    pub(crate) fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Midpoint as an f64 (diagnostics only).
    pub(crate) fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid: BigInt = (&self.lo + &self.hi) >> 1u32;
        let shift = self.bits.saturating_sub(60);
        let m = (mid >> shift).to_f64().unwrap_or(f64::NAN);
        m / 2f64.powi((self.bits - shift) as i32)
    }
}

fn atan_inv(k: i64, bits: u64) -> Interval {
    // atan(1/k) = sum (-1)^n / ((2n+1) k^(2n+1)); alternating, decreasing terms.
    let kk = BigInt::from(k);
    let one = BigRational::one();
    let mut acc = Interval::zero(bits);
    let mut power = kk.clone();
    let mut n: i64 = 0;
    let threshold = BigInt::one() << (bits + 2);
    loop {
        let den = &power * BigInt::from(2 * n + 1);
        let term = Interval::from_rational(&(&one / BigRational::from_integer(den.clone())), bits);
        acc = if n % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        if den > threshold {
            let next = &power * &kk * &kk * BigInt::from(2 * n + 3);
            return acc.widen(&BigInt::one(), &next);
        }
        power = &power * &kk * &kk;
        n += 1;
    }
}

/// Enclosure of pi via Machin's formula.
pub(crate) fn pi(bits: u64) -> Interval {
    let a = atan_inv(5, bits).scale(&BigRational::from_integer(16.into()));
    let b = atan_inv(239, bits).scale(&BigRational::from_integer(4.into()));
    a.sub(&b)
}

/// Enclosures of (cos x, sin x) for |x| <= 4.
pub(crate) fn cos_sin(x: &Interval, bits: u64) -> (Interval, Interval) {
    let mut cos = Interval::zero(bits);
    let mut sin = Interval::zero(bits);
    let mut power = Interval::from_integer(1, bits);
    let mut factorial = BigInt::one();
    let mut m: u64 = 0;
    // Lagrange remainder after degree m: 4^(m+1) / (m+1)!
    let four = BigInt::from(4);
    let mut bound_num = four.clone();
    let mut bound_den = BigInt::one();
    loop {
        let term = power.scale(&BigRational::new(BigInt::one(), factorial.clone()));
        match m % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        // bound_num / bound_den = 4^(m+1) / (m+1)!
        if (&bound_num << (bits + 2)) < bound_den {
            return (cos.widen(&bound_num, &bound_den), sin.widen(&bound_num, &bound_den));
        }
        m += 1;
        power = power.mul(x);
        factorial *= BigInt::from(m);
        bound_num *= &four;
        bound_den *= BigInt::from(m + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_encloses_reference() {
        let iv = pi(128);
        assert!((iv.midpoint_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(iv.width_ulps() < BigInt::from(1u64 << 10));
    }

    #[test]
    fn cos_sin_of_one() {
        let x = Interval::from_integer(1, 96);
        let (c, s) = cos_sin(&x, 96);
        assert!((c.midpoint_f64() - 1f64.cos()).abs() < 1e-15);
        assert!((s.midpoint_f64() - 1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn signs_of_enclosures() {
        let pos = Interval::from_rational(&BigRational::new(1.into(), 3.into()), 64);
        assert_eq!(pos.sign(), Some(Ordering::Greater));
        assert_eq!(pos.neg().sign(), Some(Ordering::Less));
        assert_eq!(Interval::zero(64).sign(), None);
    }
}
