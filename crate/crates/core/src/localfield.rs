//! The local field F = 𝔽_q((t)) as truncated Laurent series.
//!
//! A series is known modulo `t^prec`. Exact elements (Laurent polynomials
//! such as the uniformizer or the entries of β) carry `prec == EXACT` and
//! stay exact under ring operations; only division introduces truncation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::residue::{Field, Fq};

/// Precision marker of exactly known elements.
pub const EXACT: i64 = i64::MAX;

/// Relative precision used when inverting an exact non-monomial element.
pub const DEFAULT_REL_PREC: i64 = 64;

fn padd(v: i64, p: i64) -> i64 {
    if v == EXACT || p == EXACT {
        EXACT
    } else {
        v + p
    }
}

#[derive(Clone)]
pub struct LSeries {
    field: Field,
    v: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

impl LSeries {
    /// Σ coeffs[i] t^{v+i} + O(t^prec), normalized.
    pub fn new(field: &Field, v: i64, coeffs: Vec<Fq>, prec: i64) -> Self {
        LSeries { field: field.clone(), v, coeffs, prec }.normalize()
    }

    fn normalize(mut self) -> Self {
        if self.prec != EXACT {
            let room = (self.prec - self.v).max(0) as usize;
            self.coeffs.truncate(room);
        }
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                self.coeffs.clear();
                self.v = self.prec;
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.v += i as i64;
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn zero(field: &Field) -> Self {
        LSeries { field: field.clone(), v: EXACT, coeffs: vec![], prec: EXACT }
    }

    /// Zero known only modulo t^prec.
    pub fn zero_to(field: &Field, prec: i64) -> Self {
        LSeries { field: field.clone(), v: prec, coeffs: vec![], prec }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: &Field, c: Fq) -> Self {
        Self::monomial(field, c, 0)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::constant(field, field.from_int(n))
    }

    /// c·t^k, exact.
    pub fn monomial(field: &Field, c: Fq, k: i64) -> Self {
        Self::new(field, k, vec![c], EXACT)
    }

    /// The uniformizer ϖ = t.
    pub fn uniformizer(field: &Field) -> Self {
        Self::monomial(field, Fq::ONE, 1)
    }

    /// A random series with valuation ≥ v, `terms` coefficients, known to `prec`.
    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R, v: i64, terms: usize, prec: i64) -> Self {
        let coeffs = (0..terms).map(|_| Fq(rng.gen_range(0..field.q()))).collect();
        Self::new(field, v, coeffs, prec)
    }

    /// A random unit u·(1 + …), exact, with `terms` coefficients.
    pub fn random_unit<R: Rng + ?Sized>(field: &Field, rng: &mut R, terms: usize) -> Self {
        let mut coeffs: Vec<Fq> = (0..terms.max(1)).map(|_| Fq(rng.gen_range(0..field.q()))).collect();
        coeffs[0] = Fq(rng.gen_range(1..field.q()));
        Self::new(field, 0, coeffs, EXACT)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// True when no nonzero coefficient is known (exact zero or zero to precision).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == EXACT
    }

    /// Lower bound for the valuation; the valuation itself when nonzero.
    pub fn val_bound(&self) -> i64 {
        self.v
    }

    pub fn val(&self) -> Result<i64> {
        if self.is_exact_zero() {
            Err(Error::Zero)
        } else if self.is_zero() {
            Err(Error::ZeroToPrecision(self.prec))
        } else {
            Ok(self.v)
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.v == 0
    }

    /// Coefficient of t^k.
    pub fn residue_at(&self, k: i64) -> Result<Fq> {
        if k >= self.prec {
            return Err(Error::BeyondPrecision { index: k, prec: self.prec });
        }
        if self.is_zero() || k < self.v {
            return Ok(Fq::ZERO);
        }
        Ok(self.coeffs.get((k - self.v) as usize).copied().unwrap_or(Fq::ZERO))
    }

    pub fn leading_coeff(&self) -> Result<Fq> {
        self.val().map(|_| self.coeffs[0])
    }

    /// Reduce the known precision to `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        let p = prec.min(self.prec);
        Self::new(&self.field, if self.is_zero() { p } else { self.v }, self.coeffs.clone(), p)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.field, &other.field) && *self.field != *other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    fn coeff_unchecked(&self, k: i64) -> Fq {
        if self.is_zero() || k < self.v {
            return Fq::ZERO;
        }
        self.coeffs.get((k - self.v) as usize).copied().unwrap_or(Fq::ZERO)
    }

    fn top(&self) -> i64 {
        self.v + self.coeffs.len() as i64
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_exact_zero() {
            return Ok(other.clone());
        }
        if other.is_exact_zero() {
            return Ok(self.clone());
        }
        let prec = self.prec.min(other.prec);
        let v = self.v.min(other.v).min(prec);
        let end = self.top().max(other.top()).min(prec);
        let k = &self.field;
        let coeffs = (v..end.max(v))
            .map(|i| k.add(self.coeff_unchecked(i), other.coeff_unchecked(i)))
            .collect();
        Ok(Self::new(k, v, coeffs, prec))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = padd(self.v, other.prec).min(padd(other.v, self.prec));
        if self.is_zero() || other.is_zero() {
            return Ok(if prec == EXACT { Self::zero(&self.field) } else { Self::zero_to(&self.field, prec) });
        }
        let v = self.v + other.v;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if prec != EXACT {
            len = len.min((prec - v).max(0) as usize);
        }
        let k = &self.field;
        let mut coeffs = vec![Fq::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = k.add(coeffs[i + j], k.mul(a, b));
            }
        }
        Ok(Self::new(k, v, coeffs, prec))
    }

    pub fn scale(&self, c: Fq) -> Self {
        let k = &self.field;
        let coeffs = self.coeffs.iter().map(|&x| k.mul(x, c)).collect();
        Self::new(k, self.v, coeffs, self.prec)
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        LSeries {
            field: self.field.clone(),
            v: padd(self.v, k),
            coeffs: self.coeffs.clone(),
            prec: padd(self.prec, k),
        }
    }

    /// Inverse; exact non-monomial inputs are expanded to `DEFAULT_REL_PREC` terms.
    pub fn inv(&self) -> Result<Self> {
        self.inv_rel(DEFAULT_REL_PREC)
    }

    /// Inverse, with `rel` terms of relative precision for exact non-monomial inputs.
    pub fn inv_rel(&self, rel: i64) -> Result<Self> {
        let v = self.val()?;
        let k = &self.field;
        let c0inv = k.inv(self.coeffs[0])?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(k, c0inv, -v));
        }
        let rel = if self.is_exact() { rel } else { self.prec - v };
        let n = rel.max(0) as usize;
        let mut out = vec![Fq::ZERO; n];
        for i in 0..n {
            let mut s = if i == 0 { Fq::ONE } else { Fq::ZERO };
            for j in 1..=i.min(self.coeffs.len() - 1) {
                s = k.sub(s, k.mul(self.coeffs[j], out[i - j]));
            }
            out[i] = k.mul(s, c0inv);
        }
        Ok(Self::new(k, -v, out, rel - v))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.field);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Equality of all digits known on both sides.
    pub fn agrees(&self, other: &Self) -> bool {
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl PartialEq for LSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.v == other.v && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

impl fmt::Display for LSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*t^{}", c.0, self.v + i as i64))
            .collect();
        if self.prec != EXACT {
            terms.push(format!("O(t^{})", self.prec));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for LSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LSeries> for &LSeries {
            type Output = LSeries;
            fn $method(self, rhs: &LSeries) -> LSeries {
                self.$checked(rhs).expect("residue field mismatch")
            }
        }
        impl $tr<LSeries> for LSeries {
            type Output = LSeries;
            fn $method(self, rhs: LSeries) -> LSeries {
                (&self).$checked(&rhs).expect("residue field mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &LSeries {
    type Output = LSeries;
    fn neg(self) -> LSeries {
        let k = &self.field;
        LSeries {
            field: k.clone(),
            v: self.v,
            coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(),
            prec: self.prec,
        }
    }
}

impl Neg for LSeries {
    type Output = LSeries;
    fn neg(self) -> LSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::ResidueField;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Field {
        ResidueField::prime(5).unwrap()
    }

    fn ser(k: &Field, v: i64, cs: &[i64], prec: i64) -> LSeries {
        LSeries::new(k, v, cs.iter().map(|&c| k.from_int(c)).collect(), prec)
    }

    #[test]
    fn basic_examples() {
        let k = f5();
        let t = LSeries::uniformizer(&k);
        assert_eq!(&t * &t.inv().unwrap(), LSeries::one(&k));
        let a = ser(&k, 0, &[1, 1], 3);
        let b = ser(&k, 0, &[1, -1], 3);
        assert_eq!(&a * &b, ser(&k, 0, &[1, 0, -1], 3));
        assert_eq!(t.inv().unwrap(), LSeries::monomial(&k, Fq::ONE, -1));
        assert_eq!(t.inv().unwrap().val().unwrap(), -1);
    }

    #[test]
    fn geometric_inverse() {
        let k = f5();
        let a = ser(&k, 0, &[1, 1], 6);
        assert_eq!(a.inv().unwrap(), ser(&k, 0, &[1, -1, 1, -1, 1, -1], 6));
    }

    #[test]
    fn residues_and_units() {
        let k = f5();
        let a = ser(&k, 0, &[2, 3], 4);
        assert_eq!(a.residue_at(0).unwrap(), Fq(2));
        assert_eq!(a.residue_at(-3).unwrap(), Fq::ZERO);
        assert_eq!(a.residue_at(4), Err(Error::BeyondPrecision { index: 4, prec: 4 }));
        assert!(ser(&k, 0, &[1, 1], EXACT).is_unit());
        assert!(!LSeries::uniformizer(&k).is_unit());
    }

    #[test]
    fn zero_to_precision_is_not_exact_zero() {
        let k = f5();
        let z = ser(&k, 0, &[0, 0, 0], 3);
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.val(), Err(Error::ZeroToPrecision(3)));
        assert_eq!(LSeries::zero(&k).val(), Err(Error::Zero));
        assert_eq!(z.inv().unwrap_err(), Error::ZeroToPrecision(3));
        // (t + O(t^3)) · (O(t^2)) = O(t^3)
        let prod = &ser(&k, 1, &[1], 3) * &z.truncate(2);
        assert_eq!(prod.prec(), 3);
    }

    #[test]
    fn precision_rules() {
        let k = f5();
        let a = ser(&k, -1, &[1, 2], 4);
        let b = ser(&k, 2, &[3], 5);
        assert_eq!((&a + &b).prec(), 4);
        assert_eq!((&a * &b).prec(), 4);
        assert_eq!(a.inv().unwrap().prec(), 4 + 2);
    }

    #[test]
    fn field_mismatch() {
        let a = LSeries::one(&f5());
        let b = LSeries::one(&ResidueField::prime(7).unwrap());
        assert_eq!(a.try_add(&b).unwrap_err(), Error::FieldMismatch(5, 7));
    }

    #[test]
    fn rendering() {
        let k = f5();
        assert_eq!(ser(&k, -1, &[1, 0, 4], 3).to_string(), "1*t^-1 + 4*t^1 + O(t^3)");
        assert_eq!(LSeries::zero(&k).to_string(), "0");
    }

    #[test]
    fn precision_soundness_under_refinement() {
        let k = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = LSeries::random_unit(&k, &mut rng, 6);
            let b = LSeries::random(&k, &mut rng, 1, 6, EXACT);
            let lo = (&a.inv_rel(5).unwrap() * &b).try_add(&a).unwrap();
            let hi = (&a.inv_rel(20).unwrap() * &b).try_add(&a).unwrap();
            assert!(lo.agrees(&hi));
            assert_eq!(hi.truncate(lo.prec()), lo);
        }
    }

    fn series(k: Field) -> impl Strategy<Value = LSeries> {
        (-2i64..3, prop::collection::vec(0u32..5, 1..6), 4i64..9).prop_map(move |(v, cs, p)| {
            LSeries::new(&k, v, cs.into_iter().map(Fq).collect(), p)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms_to_precision(a in series(f5()), b in series(f5()), c in series(f5())) {
            prop_assert!((&(&a * &b) * &c).agrees(&(&a * &(&b * &c))));
            prop_assert!((&a * &(&b + &c)).agrees(&(&(&a * &b) + &(&a * &c))));
            prop_assert!((&a + &b).agrees(&(&b + &a)));
        }

        #[test]
        fn valuation_is_additive(a in series(f5()), b in series(f5())) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = &a * &b;
            prop_assume!(!prod.is_zero());
            prop_assert_eq!(prod.val().unwrap(), a.val().unwrap() + b.val().unwrap());
        }

        #[test]
        fn inverse_is_involutive(a in series(f5())) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            prop_assert!(inv.inv().unwrap().agrees(&a));
            prop_assert!((&a * &inv).agrees(&LSeries::one(a.field())));
        }
    }
}
