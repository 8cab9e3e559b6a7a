//! The residue field 𝔽_q with its quadratic and additive characters.
//!
//! Elements are encoded as integers in `0..q`: the base-p digits are the
//! coefficients of the polynomial representative, constant term first. All
//! field operations are table lookups built once per field.

use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::{CycNum, FourthRoot};

/// Largest field size for which tables are built.
pub const MAX_Q: u32 = 2048;

/// An element of a residue field, meaningful only together with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// ±1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// (-1)^e.
    pub fn minus_one_pow(e: i64) -> Self {
        Self::from_parity(e.rem_euclid(2) == 1)
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, e: i64) -> Self {
        match self {
            Sign::Plus => Sign::Plus,
            Sign::Minus => Self::minus_one_pow(e),
        }
    }

    pub fn as_fourth_root(self) -> FourthRoot {
        FourthRoot::from_sign(self == Sign::Plus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "+1" | "1" | "+" => Some(Sign::Plus),
            "-1" | "-" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity((self == Sign::Minus) != (rhs == Sign::Minus))
    }
}

impl Mul<FourthRoot> for Sign {
    type Output = FourthRoot;
    fn mul(self, rhs: FourthRoot) -> FourthRoot {
        self.as_fourth_root() * rhs
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The finite field 𝔽_q, q = p^f, with precomputed operation tables.
pub struct ResidueField {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    square: Vec<bool>,
}

pub type Field = Arc<ResidueField>;

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

fn digits(x: u32, p: u32, f: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(f as usize);
    let mut x = x;
    for _ in 0..f {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl ResidueField {
    /// The prime field 𝔽_p.
    pub fn prime(p: u32) -> Result<Field> {
        Self::extension(p, &[0, 1])
    }

    /// 𝔽_p[x]/(modulus); `modulus` is monic, coefficients listed constant term first.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field> {
        if p < 3 || !crate::is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() % p != 1 {
            return Err(Error::NotAField("modulus must be monic of degree >= 1".into()));
        }
        let modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        let f = modulus.len() as u32 - 1;
        let q = (p as u64).checked_pow(f).filter(|&q| q <= MAX_Q as u64).ok_or_else(|| {
            Error::InvalidParameter(format!("field size {p}^{f} exceeds {MAX_Q}"))
        })? as u32;
        let qs = q as usize;

        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        let all: Vec<Vec<u32>> = (0..q).map(|x| digits(x, p, f)).collect();
        for x in 0..qs {
            for y in 0..qs {
                let s: Vec<u32> = all[x].iter().zip(&all[y]).map(|(a, b)| (a + b) % p).collect();
                add[x * qs + y] = undigits(&s, p);
                mul[x * qs + y] = undigits(&poly_mulmod(&all[x], &all[y], &modulus, p), p);
            }
        }
        let mut neg = vec![0u32; qs];
        let mut inv = vec![0u32; qs];
        for x in 0..qs {
            neg[x] = (0..q).find(|&y| add[x * qs + y as usize] == 0).unwrap();
            if x != 0 {
                match (1..q).find(|&y| mul[x * qs + y as usize] == 1) {
                    Some(y) => inv[x] = y,
                    None => {
                        return Err(Error::NotAField(format!(
                            "{modulus:?} is reducible over F_{p}"
                        )))
                    }
                }
            }
        }
        let mut square = vec![false; qs];
        for x in 1..qs {
            square[mul[x * qs + x] as usize] = true;
        }
        let mut field = ResidueField { p, f, q, modulus, add, mul, neg, inv, trace: vec![], square };
        field.trace = (0..q)
            .map(|x| {
                // Tr(x) = x + x^p + … + x^{p^{f-1}}, which lies in 𝔽_p.
                let mut acc = Fq::ZERO;
                let mut y = Fq(x);
                for _ in 0..f {
                    acc = field.add(acc, y);
                    y = field.pow(y, p as u64);
                }
                debug_assert!(acc.0 < p);
                acc.0
            })
            .collect();
        Ok(Arc::new(field))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> {
        (1..self.q).map(Fq)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    /// The representative in `(-p/2, p/2)` of a prime-subfield element.
    pub fn to_symmetric_int(&self, x: Fq) -> Option<i64> {
        if x.0 >= self.p {
            return None;
        }
        let v = x.0 as i64;
        Some(if 2 * v > self.p as i64 { v - self.p as i64 } else { v })
    }

    pub fn contains(&self, x: Fq) -> bool {
        x.0 < self.q
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        Fq(self.add[(x.0 * self.q + y.0) as usize])
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        Fq(self.neg[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        Fq(self.mul[(x.0 * self.q + y.0) as usize])
    }

    pub fn inv(&self, x: Fq) -> Result<Fq> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        Ok(Fq(self.inv[x.0 as usize]))
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut base = x;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_square(&self, x: Fq) -> bool {
        x.is_zero() || self.square[x.0 as usize]
    }

    /// The first non-square in the enumeration order of k^×.
    pub fn smallest_nonsquare(&self) -> Fq {
        self.units().find(|&x| !self.is_square(x)).expect("odd q has non-squares")
    }

    /// The quadratic character, x^{(q-1)/2}.
    pub fn delta(&self, x: Fq) -> Result<Sign> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        let e = self.pow(x, (self.q as u64 - 1) / 2);
        Ok(if e == Fq::ONE { Sign::Plus } else { Sign::Minus })
    }

    /// δ(-1) = (-1)^{(q-1)/2}.
    pub fn delta_minus_one(&self) -> Sign {
        Sign::minus_one_pow(((self.q - 1) / 2) as i64)
    }

    /// Signature of the permutation y ↦ x·y of 𝔽_q.
    pub fn zolotarev(&self, x: Fq) -> Result<Sign> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        let mut seen = vec![false; self.q as usize];
        let mut cycles = 0u32;
        for start in 0..self.q {
            if seen[start as usize] {
                continue;
            }
            cycles += 1;
            let mut y = Fq(start);
            while !seen[y.0 as usize] {
                seen[y.0 as usize] = true;
                y = self.mul(x, y);
            }
        }
        Ok(Sign::from_parity((self.q - cycles) % 2 == 1))
    }

    /// Absolute trace to 𝔽_p, as an integer in `0..p`.
    #[inline]
    pub fn trace(&self, x: Fq) -> u32 {
        self.trace[x.0 as usize]
    }

    /// The exponent k with ψ(a·x) = ζ_p^k.
    #[inline]
    pub fn psi_exponent(&self, x: Fq, a: Fq) -> u32 {
        self.trace(self.mul(a, x))
    }

    /// ψ^a(x) = ζ_p^{Tr(a·x)}.
    pub fn psi(&self, x: Fq, a: Fq) -> CycNum {
        CycNum::zeta_pow(self.p, self.psi_exponent(x, a) as i64).expect("p is an odd prime")
    }

    /// An accumulator of Σ n_k ζ_p^k for fast character sums.
    pub fn counts(&self) -> ZetaCounts {
        ZetaCounts { p: self.p, counts: vec![0; self.p as usize] }
    }

    /// G(δ, ψ^a) = Σ_{u ≠ 0} δ(u) ψ(a·u).
    pub fn gauss_sum(&self, a: Fq) -> CycNum {
        let mut acc = self.counts();
        for u in self.units() {
            acc.add(self.psi_exponent(u, a), self.delta(u).unwrap().to_i64());
        }
        acc.into_cyc()
    }

    /// ξ(δ, ψ^a) = G / |G|.
    pub fn xi(&self, a: Fq) -> Result<FourthRoot> {
        self.gauss_sum(a).as_fourth_root(&BigRational::from_integer(self.q.into()))
    }
}

/// Integer multiplicities of the p-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaCounts {
    p: u32,
    counts: Vec<i64>,
}

impl ZetaCounts {
    #[inline]
    pub fn add(&mut self, exponent: u32, weight: i64) {
        self.counts[exponent as usize] += weight;
    }

    pub fn merge(mut self, other: &ZetaCounts) -> ZetaCounts {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    pub fn into_cyc(self) -> CycNum {
        CycNum::from_exponent_counts(self.p, &self.counts)
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (f..2 * f).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (k, &m) in modulus[..f].iter().enumerate() {
            let idx = deg - f + k;
            prod[idx] = (prod[idx] + (p as u64 - m as u64) * c) % p as u64;
        }
    }
    prod[..f].iter().map(|&c| c as u32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Field {
        ResidueField::prime(p).unwrap()
    }

    fn f9() -> Field {
        ResidueField::extension(3, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(f(7).delta(Fq(3)).unwrap(), Sign::Minus);
        assert_eq!(f(5).delta(Fq(4)).unwrap(), Sign::Plus);
        assert_eq!(f(11).delta(Fq::ONE).unwrap(), Sign::Plus);
        assert_eq!(f(5).delta(Fq::ZERO), Err(Error::Zero));
    }

    #[test]
    fn zolotarev_examples() {
        assert_eq!(f(5).zolotarev(Fq(2)).unwrap(), Sign::Minus);
        assert_eq!(f(13).zolotarev(Fq::ONE).unwrap(), Sign::Plus);
        assert_eq!(f(7).zolotarev(Fq(2)).unwrap(), Sign::Plus);
    }

    #[test]
    fn zolotarev_equals_delta() {
        let mut fields: Vec<Field> = [3u32, 5, 7, 11, 13, 17, 19, 23].iter().map(|&p| f(p)).collect();
        fields.push(f9());
        for k in fields {
            for x in k.units() {
                assert_eq!(k.zolotarev(x).unwrap(), k.delta(x).unwrap(), "q={} x={x:?}", k.q());
            }
        }
    }

    #[test]
    fn psi_examples() {
        let k = f(3);
        assert_eq!(k.psi(Fq::ZERO, Fq::ONE), CycNum::one(3).unwrap());
        assert_eq!(k.psi(Fq::ONE, Fq::ONE), CycNum::zeta_pow(3, 1).unwrap());
        let k9 = f9();
        for x in k9.elements() {
            for y in k9.elements() {
                let lhs = k9.psi(k9.add(x, y), Fq::ONE);
                assert_eq!(lhs, &k9.psi(x, Fq::ONE) * &k9.psi(y, Fq::ONE));
            }
        }
    }

    #[test]
    fn extension_field_axioms() {
        let k = f9();
        assert_eq!(k.q(), 9);
        for x in k.elements() {
            assert_eq!(k.pow(x, 9), x);
            if !x.is_zero() {
                assert_eq!(k.mul(x, k.inv(x).unwrap()), Fq::ONE);
            }
        }
        assert!(matches!(ResidueField::extension(3, &[2, 0, 1]), Err(Error::NotAField(_))));
        assert_eq!(ResidueField::prime(9).unwrap_err(), Error::NotOddPrime(9));
    }

    #[test]
    fn gauss_sum_examples() {
        let g3 = f(3).gauss_sum(Fq::ONE);
        let expected = &CycNum::zeta_pow(3, 1).unwrap() - &CycNum::zeta_pow(3, 2).unwrap();
        assert_eq!(g3, expected);
        for p in [3u32, 5, 7, 11] {
            let g = f(p).gauss_sum(Fq::ONE);
            assert_eq!(g.abs_squared().unwrap(), BigRational::from_integer(p.into()));
        }
        for k in [f(7), f(11), f9()] {
            let g1 = k.gauss_sum(Fq::ONE);
            for a in k.units() {
                let scaled = if k.delta(a).unwrap() == Sign::Plus { g1.clone() } else { -&g1 };
                assert_eq!(k.gauss_sum(a), scaled);
            }
        }
    }

    #[test]
    fn xi_examples() {
        assert_eq!(f(3).xi(Fq::ONE).unwrap(), FourthRoot::I);
        assert_eq!(f(5).xi(Fq::ONE).unwrap(), FourthRoot::ONE);
        for p in [3u32, 5, 7, 11, 13] {
            let k = f(p);
            let xi = k.xi(Fq::ONE).unwrap();
            assert_eq!(xi * xi, k.delta_minus_one().as_fourth_root());
        }
    }

    #[test]
    fn orthogonality_and_quadratic_completion() {
        for k in [f(5), f(7), f9()] {
            let g = k.gauss_sum(Fq::ONE);
            for u in k.elements() {
                let mut lin = k.counts();
                let mut quad = k.counts();
                for x in k.elements() {
                    lin.add(k.psi_exponent(k.mul(u, x), Fq::ONE), 1);
                    quad.add(k.psi_exponent(k.mul(u, k.mul(x, x)), Fq::ONE), 1);
                }
                let expected_lin = CycNum::from_integer(k.p(), if u.is_zero() { k.q() as i64 } else { 0 }).unwrap();
                assert_eq!(lin.into_cyc(), expected_lin);
                if !u.is_zero() {
                    let d = k.delta(u).unwrap();
                    let expected = if d == Sign::Plus { g.clone() } else { -&g };
                    assert_eq!(quad.into_cyc(), expected);
                }
            }
        }
    }

    #[test]
    fn sign_rendering() {
        assert_eq!(Sign::Plus.as_str(), "+1");
        assert_eq!(Sign::parse("-1"), Some(Sign::Minus));
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Minus.pow(3), Sign::Minus);
    }

    fn field() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![3u32, 5, 7, 11, 13, 9]).prop_map(|q| if q == 9 { f9() } else { f(q) })
    }

    proptest! {
        #[test]
        fn delta_is_multiplicative(k in field(), x in 1u32..1000, y in 1u32..1000) {
            let x = Fq(1 + x % (k.q() - 1));
            let y = Fq(1 + y % (k.q() - 1));
            prop_assert_eq!(k.delta(k.mul(x, y)).unwrap(), k.delta(x).unwrap() * k.delta(y).unwrap());
        }

        #[test]
        fn field_axioms(k in field(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
            let (a, b, c) = (Fq(a % k.q()), Fq(b % k.q()), Fq(c % k.q()));
            prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
            prop_assert_eq!(k.add(a, k.neg(a)), Fq::ZERO);
        }
    }
}
