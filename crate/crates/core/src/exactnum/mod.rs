//! Exact arithmetic in the cyclotomic field ℚ(ζ_p).
//!
//! Values are stored on the power basis `1, ζ, …, ζ^{p-2}`; the relation
//! `1 + ζ + … + ζ^{p-1} = 0` makes this representation canonical. Positivity
//! and branch decisions use the embedding `ζ ↦ e^{2πi/p}` and certified
//! interval evaluation.

mod interval;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use interval::Interval;

/// Starting working precision for sign decisions.
const START_BITS: u64 = 64;
/// Precision at which a sign decision gives up.
pub const PRECISION_CAP_BITS: u64 = 1 << 14;

/// An element of ℚ(ζ_p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u32,
    coeffs: Vec<BigRational>,
}

fn check_conductor(p: u32) -> Result<()> {
    if p < 3 || !crate::is_prime(p as u64) {
        return Err(Error::NotOddPrime(p as u64));
    }
    Ok(())
}

impl CycNum {
    /// Build from `p` coefficients of `1, ζ, …, ζ^{p-1}` (reduced on the way in).
    fn from_full(p: u32, mut full: Vec<BigRational>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CycNum { p, coeffs: full }
    }

    pub fn zero(p: u32) -> Result<Self> {
        check_conductor(p)?;
        Ok(CycNum { p, coeffs: vec![BigRational::zero(); p as usize - 1] })
    }

    pub fn from_rational(p: u32, r: BigRational) -> Result<Self> {
        let mut out = Self::zero(p)?;
        out.coeffs[0] = r;
        Ok(out)
    }

    pub fn from_integer(p: u32, n: i64) -> Result<Self> {
        Self::from_rational(p, BigRational::from_integer(n.into()))
    }

    pub fn one(p: u32) -> Result<Self> {
        Self::from_integer(p, 1)
    }

    /// ζ_p^k for any integer k.
    pub fn zeta_pow(p: u32, k: i64) -> Result<Self> {
        check_conductor(p)?;
        let mut counts = vec![0i64; p as usize];
        counts[k.rem_euclid(p as i64) as usize] = 1;
        Ok(Self::from_exponent_counts(p, &counts))
    }

    /// Σ_k counts[k]·ζ^k over k in 0..p. `p` must already be validated.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize, "need one count per exponent");
        let top = counts[p as usize - 1];
        let coeffs = counts[..p as usize - 1]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c - top)))
            .collect();
        CycNum { p, coeffs }
    }

    /// Build from power-basis coefficients `c_0..c_{p-2}`.
    pub fn from_coeffs(p: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        check_conductor(p)?;
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Dimension(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycNum { p, coeffs })
    }

    pub fn conductor(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    #[cfg(test)]
    fn full(&self) -> Vec<BigRational> {
        let mut v = self.coeffs.clone();
        v.push(BigRational::zero());
        v
    }

    fn same_conductor(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ConductorMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycNum { p: self.p, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycNum { p: self.p, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Self::from_full(self.p, full))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNum { p: self.p, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// The Galois automorphism ζ ↦ ζ^k (k prime to p).
    pub fn galois(&self, k: i64) -> Self {
        let p = self.p as i64;
        let mut full = vec![BigRational::zero(); p as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i as i64 * k).rem_euclid(p) as usize] += c;
        }
        Self::from_full(self.p, full)
    }

    /// Complex conjugation, ζ ↦ ζ^{p-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycNum::one(self.p).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Field norm to ℚ.
    pub fn norm(&self) -> BigRational {
        let mut prod = self.clone();
        for k in 2..self.p as i64 {
            prod = &prod * &self.galois(k);
        }
        prod.as_rational().expect("norm is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        let mut others = CycNum::one(self.p)?;
        for k in 2..self.p as i64 {
            others = &others * &self.galois(k);
        }
        let n = (self * &others).as_rational().expect("norm is rational");
        Ok(others.scale(&n.recip()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        Ok(self * &other.inv()?)
    }

    /// a·conj(a) as a rational.
    pub fn abs_squared(&self) -> Result<BigRational> {
        (self * &self.conj()).as_rational().ok_or(Error::NonRationalModulus)
    }

    fn re_im(&self, bits: u64) -> (Interval, Interval) {
        let p = self.p as i64;
        let two_pi_over_p = interval::pi(bits).scale(&BigRational::new(2.into(), p.into()));
        let mut re = Interval::zero(bits);
        let mut im = Interval::zero(bits);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = j as i64;
            let k = if 2 * j > p { j - p } else { j };
            let theta = two_pi_over_p.scale(&BigRational::from_integer(k.into()));
            let (cos, sin) = interval::cos_sin(&theta, bits);
            re = re.add(&cos.scale(c));
            im = im.add(&sin.scale(c));
        }
        (re, im)
    }

    fn certified_sign(&self, imaginary: bool) -> Result<Ordering> {
        let mut bits = START_BITS;
        while bits <= PRECISION_CAP_BITS {
            let (re, im) = self.re_im(bits);
            if let Some(s) = (if imaginary { im } else { re }).sign() {
                return Ok(s);
            }
            bits *= 2;
        }
        Err(Error::PrecisionCap(PRECISION_CAP_BITS))
    }

    /// Real part under the fixed embedding as f64 (diagnostics only).
    pub fn approx(&self) -> (f64, f64) {
        let (re, im) = self.re_im(96);
        (re.midpoint_f64(), im.midpoint_f64())
    }

    /// True iff the element is real and strictly positive. Zero gives false.
    pub fn is_positive_real(&self) -> bool {
        if self.is_zero() || *self != self.conj() {
            return false;
        }
        // A nonzero real element has a nonzero real part, so refinement terminates.
        matches!(self.certified_sign(false), Ok(Ordering::Greater))
    }

    /// True iff a/b is a positive real.
    pub fn ray_equiv(a: &Self, b: &Self) -> Result<bool> {
        a.same_conductor(b)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::Zero);
        }
        // a·conj(b) = (a/b)·|b|² has the same argument as a/b.
        Ok((a * &b.conj()).is_positive_real())
    }

    /// The r ∈ {1, i, -1, -i} with a = r·√m.
    pub fn as_fourth_root(&self, expected_modulus_sq: &BigRational) -> Result<FourthRoot> {
        let found = self.abs_squared()?;
        if &found != expected_modulus_sq || !found.is_positive() {
            return Err(Error::ModulusMismatch {
                expected: expected_modulus_sq.to_string(),
                found: found.to_string(),
            });
        }
        let ratio = (self * self).scale(&found.recip()).as_rational();
        let one = BigRational::one();
        match ratio {
            Some(r) if r == one => Ok(match self.certified_sign(false)? {
                Ordering::Greater => FourthRoot::ONE,
                _ => FourthRoot::MINUS_ONE,
            }),
            Some(r) if r == -one => Ok(match self.certified_sign(true)? {
                Ordering::Greater => FourthRoot::I,
                _ => FourthRoot::MINUS_I,
            }),
            _ => Err(Error::NotAFourthRoot),
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).expect("conductor mismatch")
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$checked(&rhs).expect("conductor mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// i^exponent.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourthRoot {
    exponent: u8,
}

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot { exponent: 0 };
    pub const I: FourthRoot = FourthRoot { exponent: 1 };
    pub const MINUS_ONE: FourthRoot = FourthRoot { exponent: 2 };
    pub const MINUS_I: FourthRoot = FourthRoot { exponent: 3 };

    pub fn from_exponent(e: i64) -> Self {
        FourthRoot { exponent: e.rem_euclid(4) as u8 }
    }

    pub fn exponent(self) -> u8 {
        self.exponent
    }

    pub fn inv(self) -> Self {
        Self::from_exponent(-(self.exponent as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        Self::from_exponent(self.exponent as i64 * e)
    }

    /// ±1 as a FourthRoot.
    pub fn from_sign(positive: bool) -> Self {
        if positive {
            Self::ONE
        } else {
            Self::MINUS_ONE
        }
    }

    pub fn is_real(self) -> bool {
        self.exponent.is_multiple_of(2)
    }

    pub fn as_str(self) -> &'static str {
        ["1", "i", "-1", "-i"][self.exponent as usize]
    }

    pub fn parse(s: &str) -> Option<Self> {
        ["1", "i", "-1", "-i"].iter().position(|t| *t == s).map(|e| Self::from_exponent(e as i64))
    }
}

impl Mul for FourthRoot {
    type Output = FourthRoot;
    // i^a · i^b = i^(a+b).
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: FourthRoot) -> FourthRoot {
        Self::from_exponent(self.exponent as i64 + rhs.exponent as i64)
    }
}

impl Neg for FourthRoot {
    type Output = FourthRoot;
    fn neg(self) -> FourthRoot {
        self * FourthRoot::MINUS_ONE
    }
}

impl fmt::Debug for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nonzero cyclotomic number up to positive real scalars.
#[derive(Clone)]
pub struct RayClass {
    rep: CycNum,
}

impl RayClass {
    pub fn new(rep: CycNum) -> Result<Self> {
        if rep.is_zero() {
            return Err(Error::Zero);
        }
        Ok(RayClass { rep })
    }

    /// The ray through r ∈ {1, i, −1, −i}; i is carried by ζ − ζ⁻¹ = 2i·sin(2π/p).
    pub fn from_fourth_root(p: u32, r: FourthRoot) -> Result<Self> {
        let one = CycNum::one(p)?;
        let imag = CycNum::zeta_pow(p, 1)?.try_sub(&CycNum::zeta_pow(p, -1)?)?;
        let rep = match r.exponent() {
            0 => one,
            1 => imag,
            2 => -one,
            _ => -imag,
        };
        RayClass::new(rep)
    }

    pub fn representative(&self) -> &CycNum {
        &self.rep
    }

    /// The fourth root of unity on this ray, if the ray contains one.
    pub fn direction(&self) -> Result<FourthRoot> {
        let c = self.rep.conj();
        let imaginary = if self.rep == c {
            false
        } else if self.rep == -&c {
            true
        } else {
            return Err(Error::NotAFourthRoot);
        };
        let positive = self.rep.certified_sign(imaginary)? == Ordering::Greater;
        Ok(match (imaginary, positive) {
            (false, true) => FourthRoot::ONE,
            (false, false) => FourthRoot::MINUS_ONE,
            (true, true) => FourthRoot::I,
            (true, false) => FourthRoot::MINUS_I,
        })
    }

    pub fn try_mul(&self, other: &RayClass) -> Result<RayClass> {
        RayClass::new(self.rep.try_mul(&other.rep)?)
    }

    pub fn inv(&self) -> RayClass {
        RayClass { rep: self.rep.inv().expect("ray representatives are nonzero") }
    }
}

impl PartialEq for RayClass {
    fn eq(&self, other: &Self) -> bool {
        CycNum::ray_equiv(&self.rep, &other.rep).unwrap_or(false)
    }
}

impl fmt::Debug for RayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RayClass({:?})", self.rep)
    }
}
