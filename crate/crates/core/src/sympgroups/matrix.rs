//! Dense matrices over the truncated Laurent series field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::localfield::{LSeries, EXACT};
use crate::residue::{Field, Fq};

#[derive(Clone, PartialEq)]
pub struct MatLS {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<LSeries>,
}

/// Support and scaling of a monomial matrix: column j is `coeff[j]·t^val[j]·e_{sigma[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub sigma: Vec<usize>,
    pub coeff: Vec<Fq>,
    pub val: Vec<i64>,
}

impl MatLS {
    pub fn new(field: &Field, rows: usize, cols: usize, entries: Vec<LSeries>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(MatLS { field: field.clone(), rows, cols, entries })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LSeries) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        MatLS { field: field.clone(), rows, cols, entries }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self::from_fn(field, rows, cols, |_, _| LSeries::zero(field))
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::scalar(field, n, &LSeries::one(field))
    }

    pub fn scalar(field: &Field, n: usize, s: &LSeries) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { s.clone() } else { LSeries::zero(field) })
    }

    /// The diagonal matrix with the given entries.
    pub fn diag(field: &Field, d: &[LSeries]) -> Self {
        let n = d.len();
        Self::from_fn(field, n, n, |i, j| if i == j { d[i].clone() } else { LSeries::zero(field) })
    }

    /// Exact matrix with entries `c·t^k` given as `(c, k)`; `None` is zero.
    pub fn from_monomials(field: &Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Option<(i64, i64)>) -> Self {
        Self::from_fn(field, rows, cols, |i, j| match f(i, j) {
            Some((c, k)) => LSeries::monomial(field, field.from_int(c), k),
            None => LSeries::zero(field),
        })
    }

    /// Block matrix from a grid of blocks with compatible shapes.
    pub fn from_blocks(grid: &[Vec<MatLS>]) -> Result<Self> {
        let field = grid[0][0].field.clone();
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::Dimension("ragged block grid".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::Dimension(format!("block ({bi},{bj}) has the wrong shape")));
                }
            }
        }
        let rows = heights.iter().sum();
        let cols = widths.iter().sum();
        let mut out = Self::zeros(&field, rows, cols);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                out.set_block(r0, c0, b);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LSeries) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[LSeries] {
        &self.entries
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> MatLS {
        Self::from_fn(&self.field, h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &MatLS) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Smallest absolute precision among the entries.
    pub fn prec(&self) -> i64 {
        self.entries.iter().map(LSeries::prec).min().unwrap_or(EXACT)
    }

    pub fn truncate(&self, prec: i64) -> MatLS {
        self.map(|e| e.truncate(prec))
    }

    pub fn map(&self, f: impl Fn(&LSeries) -> LSeries) -> MatLS {
        MatLS { field: self.field.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LSeries::is_zero)
    }

    /// Equality of all digits known on both sides.
    pub fn agrees(&self, other: &MatLS) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.agrees(b))
    }

    /// Minimum valuation of the nonzero entries.
    pub fn min_val(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.val().ok()).min()
    }

    fn same_shape(&self, other: &MatLS) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MatLS) -> Result<MatLS> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(MatLS { field: self.field.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn try_sub(&self, other: &MatLS) -> Result<MatLS> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MatLS) -> Result<MatLS> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LSeries::zero(&self.field);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(MatLS { field: self.field.clone(), rows: self.rows, cols: other.cols, entries })
    }

    pub fn scale(&self, s: &LSeries) -> MatLS {
        self.map(|e| e * s)
    }

    pub fn transpose(&self) -> MatLS {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Transpose with respect to the antidiagonal.
    pub fn anti_transpose(&self) -> MatLS {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(&self.field, c, r, |i, j| self.get(r - 1 - j, c - 1 - i).clone())
    }

    pub fn trace(&self) -> Result<LSeries> {
        if !self.is_square() {
            return Err(Error::Dimension("trace of a non-square matrix".into()));
        }
        (0..self.rows).try_fold(LSeries::zero(&self.field), |acc, i| acc.try_add(self.get(i, i)))
    }

    pub fn pow(&self, e: u32) -> Result<MatLS> {
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Gaussian elimination with minimal-valuation pivots; returns (row-echelon data, det).
    fn eliminate(&self, mut rhs: Option<&mut MatLS>) -> Result<(MatLS, LSeries)> {
        if !self.is_square() {
            return Err(Error::Dimension("elimination needs a square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = LSeries::one(&self.field);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .min_by_key(|&r| a.get(r, col).val_bound())
                .ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    for j in 0..b.cols {
                        b.entries.swap(pivot * b.cols + j, col * b.cols + j);
                    }
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let pinv = p.inv()?;
            for r in 0..n {
                if r == col || a.get(r, col).is_exact_zero() {
                    continue;
                }
                let factor = a.get(r, col) * &pinv;
                for j in col..n {
                    let v = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, v);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    for j in 0..b.cols {
                        let v = b.get(r, j) - &(&factor * b.get(col, j));
                        b.set(r, j, v);
                    }
                }
            }
            for j in col..n {
                let v = a.get(col, j) * &pinv;
                a.set(col, j, v);
            }
            if let Some(b) = rhs.as_deref_mut() {
                for j in 0..b.cols {
                    let v = b.get(col, j) * &pinv;
                    b.set(col, j, v);
                }
            }
        }
        Ok((a, det))
    }

    pub fn inv(&self) -> Result<MatLS> {
        let mut rhs = Self::identity(&self.field, self.rows);
        self.eliminate(Some(&mut rhs))?;
        Ok(rhs)
    }

    pub fn det(&self) -> Result<LSeries> {
        if let Some(m) = self.monomial() {
            // Exact for monomial matrices: product of entries times the permutation sign.
            let mut d = LSeries::one(&self.field);
            for j in 0..self.cols {
                d = &d * self.get(m.sigma[j], j);
            }
            return Ok(if permutation_is_odd(&m.sigma) { -d } else { d });
        }
        match self.eliminate(None) {
            Ok((_, d)) => Ok(d),
            Err(Error::Singular) => Ok(LSeries::zero_to(&self.field, self.prec())),
            Err(e) => Err(e),
        }
    }

    /// Monomial structure, if every column has exactly one nonzero monomial entry.
    pub fn monomial(&self) -> Option<Monomial> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut sigma = vec![0; n];
        let mut coeff = vec![Fq::ZERO; n];
        let mut val = vec![0; n];
        let mut hit = vec![false; n];
        for j in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&i| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            let e = self.get(nz[0], j);
            if !e.is_exact() || e.val().is_err() || e.inv().ok()?.prec() != EXACT || hit[nz[0]] {
                return None;
            }
            hit[nz[0]] = true;
            sigma[j] = nz[0];
            coeff[j] = e.leading_coeff().ok()?;
            val[j] = e.val().ok()?;
        }
        Some(Monomial { sigma, coeff, val })
    }
}

fn permutation_is_odd(sigma: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    let mut transpositions = 0;
    for s in 0..sigma.len() {
        let mut len = 0;
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            j = sigma[j];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

impl fmt::Display for MatLS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MatLS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&MatLS> for &MatLS {
            type Output = MatLS;
            fn $method(self, rhs: &MatLS) -> MatLS {
                self.$checked(rhs).expect("matrix shape mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &MatLS {
    type Output = MatLS;
    fn neg(self) -> MatLS {
        self.map(|e| -e)
    }
}
