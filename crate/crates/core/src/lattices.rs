//! Standard-split lattice sequences and their order filtrations.
//!
//! A sequence Λ in Fⁿ of period e is stored as the table `a(k)`, `k = 0..e`,
//! with `Λ(k) = ⊕ 𝔭^{a_i(k)} e_i` and `a(k + e) = a(k) + 1`. Filtrations
//! 𝔄_r(Λ) become integer matrices of valuation bounds.

use std::fmt;

use crate::error::{Error, Result};
use crate::sympgroups::MatLS;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeSeq {
    n: usize,
    e: i64,
    table: Vec<Vec<i64>>,
}

/// A perfect pairing whose Gram matrix is monomial: `e_i` pairs with `e_{sigma(i)}`
/// through an entry of valuation `g[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub sigma: Vec<usize>,
    pub g: Vec<i64>,
}

impl Pairing {
    /// e_i paired with e_{n-1-i} by a unit; covers h_{2N} and the bold form on W ⊕ V ⊕ W*.
    pub fn antidiagonal(n: usize) -> Self {
        Pairing { sigma: (0..n).map(|i| n - 1 - i).collect(), g: vec![0; n] }
    }

    pub fn from_gram(gram: &MatLS) -> Result<Self> {
        let m = gram.monomial().ok_or(Error::NonMonomialPairing)?;
        let n = gram.rows();
        // Gram entry (i, sigma(i)) lies in column sigma(i), whose image row is i.
        let mut sigma = vec![0; n];
        let mut g = vec![0; n];
        for j in 0..n {
            sigma[m.sigma[j]] = j;
            g[m.sigma[j]] = m.val[j];
        }
        Ok(Pairing { sigma, g })
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

impl LatticeSeq {
    /// Build from the values on one period; checks monotonicity across the period.
    pub fn from_fn(n: usize, e: i64, f: impl Fn(i64) -> Vec<i64>) -> Result<Self> {
        if e < 1 {
            return Err(Error::InvalidParameter(format!("period {e} must be positive")));
        }
        let table: Vec<Vec<i64>> = (0..e).map(&f).collect();
        let seq = LatticeSeq { n, e, table };
        for k in 0..e {
            let (cur, next) = (seq.at(k), seq.at(k + 1));
            if cur.len() != n {
                return Err(Error::Dimension(format!("a({k}) has length {}", cur.len())));
            }
            if cur.iter().zip(&next).any(|(a, b)| b < a) {
                return Err(Error::Constraint(format!("sequence is not decreasing at {k}")));
            }
        }
        // Periodicity must match the closed form where one was supplied.
        for k in [e, -e, 2 * e + 1] {
            if f(k) != seq.at(k) && f(k).len() == n {
                return Err(Error::Constraint(format!("a({k}) breaks periodicity")));
            }
        }
        Ok(seq)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> i64 {
        self.e
    }

    /// Valuation vector a(k).
    pub fn at(&self, k: i64) -> Vec<i64> {
        let q = div_floor(k, self.e);
        let r = k.rem_euclid(self.e) as usize;
        self.table[r].iter().map(|a| a + q).collect()
    }

    pub fn coord(&self, i: usize, k: i64) -> i64 {
        self.table[k.rem_euclid(self.e) as usize][i] + div_floor(k, self.e)
    }

    /// Jumps k ∈ [0, e) with Λ(k) ≠ Λ(k+1).
    pub fn jumps(&self) -> Vec<i64> {
        (0..self.e).filter(|&k| self.at(k) != self.at(k + 1)).collect()
    }

    /// Jumps of the coordinates in `range`.
    pub fn jumps_on(&self, range: std::ops::Range<usize>) -> Vec<i64> {
        (0..self.e)
            .filter(|&k| range.clone().any(|i| self.coord(i, k) != self.coord(i, k + 1)))
            .collect()
    }

    /// The sequence restricted to the coordinates in `range`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> LatticeSeq {
        LatticeSeq {
            n: range.len(),
            e: self.e,
            table: self.table.iter().map(|row| row[range.clone()].to_vec()).collect(),
        }
    }

    /// (e'Λ)(s) = Λ(⌈s/e'⌉).
    pub fn dilate(&self, factor: i64) -> LatticeSeq {
        let e = self.e * factor;
        LatticeSeq { n: self.n, e, table: (0..e).map(|s| self.at(div_ceil(s, factor))).collect() }
    }

    /// (Λ - d)(t) = Λ(t - d).
    pub fn translate(&self, d: i64) -> LatticeSeq {
        LatticeSeq { n: self.n, e: self.e, table: (0..self.e).map(|t| self.at(t - d)).collect() }
    }

    pub fn direct_sum(&self, other: &LatticeSeq) -> Result<LatticeSeq> {
        if self.e != other.e {
            return Err(Error::PeriodMismatch(self.e as usize, other.e as usize));
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| [a.clone(), b.clone()].concat()).collect();
        Ok(LatticeSeq { n: self.n + other.n, e: self.e, table })
    }

    /// Reorder coordinates: new coordinate j is old coordinate `order[j]`.
    pub fn permute(&self, order: &[usize]) -> Result<LatticeSeq> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n || order.iter().any(|&i| i >= self.n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Dimension("not a permutation of the coordinates".into()));
        }
        let table = self.table.iter().map(|row| order.iter().map(|&i| row[i]).collect()).collect();
        Ok(LatticeSeq { n: self.n, e: self.e, table })
    }

    /// Λ(k)^♯ = {x : h(x, Λ(k)) ⊆ 𝔭}.
    pub fn sharp(&self, k: i64, pairing: &Pairing) -> Result<Vec<i64>> {
        if pairing.sigma.len() != self.n {
            return Err(Error::Dimension("pairing dimension".into()));
        }
        let a = self.at(k);
        Ok((0..self.n).map(|i| 1 - pairing.g[i] - a[pairing.sigma[i]]).collect())
    }

    /// The dual sequence k ↦ Λ(-k)^♯.
    pub fn dual(&self, pairing: &Pairing) -> Result<LatticeSeq> {
        let table = (0..self.e).map(|k| self.sharp(-k, pairing)).collect::<Result<_>>()?;
        Ok(LatticeSeq { n: self.n, e: self.e, table })
    }

    /// The d with Λ(k)^♯ = Λ(d - k) for all k, if one exists.
    pub fn duality_invariant(&self, pairing: &Pairing) -> Result<Option<i64>> {
        let dual = self.dual(pairing)?;
        Ok((0..self.e).find(|&d| (0..self.e).all(|k| dual.at(-k) == self.at(d - k))))
    }

    /// Bounds for Hom(src, dst) ∩ 𝔞_r: B_ij = max_k (dst_i(k + r) - src_j(k)).
    pub fn hom_block(src: &LatticeSeq, dst: &LatticeSeq, r: i64) -> Result<ValMatrix> {
        if src.e != dst.e {
            return Err(Error::PeriodMismatch(src.e as usize, dst.e as usize));
        }
        let mut b = vec![i64::MIN; dst.n * src.n];
        for k in 0..src.e {
            let (from, to) = (src.at(k), dst.at(k + r));
            for i in 0..dst.n {
                for j in 0..src.n {
                    b[i * src.n + j] = b[i * src.n + j].max(to[i] - from[j]);
                }
            }
        }
        Ok(ValMatrix { rows: dst.n, cols: src.n, b })
    }

    /// 𝔄_r(Λ) as a matrix of valuation bounds.
    pub fn order_filtration(&self, r: i64) -> ValMatrix {
        Self::hom_block(self, self, r).expect("same period")
    }

    /// Largest s with a_i(s) ≤ c.
    fn last_below(&self, i: usize, c: i64) -> i64 {
        (0..self.e).map(|s0| s0 + self.e * (c - self.table[s0 as usize][i])).max().unwrap()
    }

    /// Largest r with val(m_ij) ≥ B_ij(r), for one nonzero entry of valuation v.
    fn entry_level(&self, i: usize, j: usize, v: i64) -> i64 {
        (0..self.e).map(|k| self.last_below(i, v + self.coord(j, k)) - k).min().unwrap()
    }

    /// val_Λ(M): the largest r with M ∈ 𝔄_r(Λ).
    pub fn val_wrt(&self, m: &MatLS) -> Result<i64> {
        self.check_square(m)?;
        let mut best: Option<i64> = None;
        let mut cap: Option<i64> = None;
        for i in 0..self.n {
            for j in 0..self.n {
                let e = m.get(i, j);
                if e.is_exact_zero() {
                    continue;
                }
                let lvl = self.entry_level(i, j, e.val_bound());
                if e.is_zero() {
                    cap = Some(cap.map_or(lvl, |c: i64| c.min(lvl)));
                } else {
                    best = Some(best.map_or(lvl, |b: i64| b.min(lvl)));
                }
            }
        }
        match (best, cap) {
            (None, _) => Err(Error::Zero),
            (Some(b), Some(c)) if c <= b => Err(Error::InsufficientPrecision { needed: b, available: c }),
            (Some(b), _) => Ok(b),
        }
    }

    /// Whether M ∈ 𝔄_r(Λ); entries known only to a precision below their bound are an error.
    pub fn contains(&self, r: i64, m: &MatLS) -> Result<bool> {
        self.check_square(m)?;
        self.order_filtration(r).admits(m)
    }

    fn check_square(&self, m: &MatLS) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::Dimension(format!("{}x{} matrix vs dimension {}", m.rows(), m.cols(), self.n)));
        }
        Ok(())
    }
}

/// Entrywise valuation bounds `{M : val(M_ij) ≥ B_ij}`; `i64::MAX` forces a zero entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValMatrix {
    rows: usize,
    cols: usize,
    b: Vec<i64>,
}

/// Bound marking an entry that must vanish.
pub const FORBIDDEN: i64 = i64::MAX;

impl ValMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut b = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                b.push(f(i, j));
            }
        }
        ValMatrix { rows, cols, b }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> ValMatrix {
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j))
    }

    /// ϖ^k times the lattice.
    pub fn shift(&self, k: i64) -> ValMatrix {
        ValMatrix {
            rows: self.rows,
            cols: self.cols,
            b: self.b.iter().map(|&x| if x == FORBIDDEN { x } else { x + k }).collect(),
        }
    }

    /// Lattice inclusion self ⊆ other.
    pub fn is_subset_of(&self, other: &ValMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.b.iter().zip(&other.b).all(|(a, b)| a >= b)
    }

    /// Bounds of the product lattice: min_k (B_ik + C_kj).
    pub fn compose(&self, other: &ValMatrix) -> ValMatrix {
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a == FORBIDDEN || b == FORBIDDEN {
                        FORBIDDEN
                    } else {
                        a + b
                    }
                })
                .min()
                .unwrap_or(FORBIDDEN)
        })
    }

    /// Conjugate by a monomial matrix with column j = c·t^{v_j}·e_{sigma(j)}.
    pub fn conjugate_monomial(&self, sigma: &[usize], v: &[i64]) -> ValMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                out.b[sigma[i] * self.cols + sigma[j]] = if x == FORBIDDEN { x } else { x + v[i] - v[j] };
            }
        }
        out
    }

    /// Whether every entry of M meets its bound.
    pub fn admits(&self, m: &MatLS) -> Result<bool> {
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err(Error::Dimension("bound matrix shape".into()));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = m.get(i, j);
                let bound = self.get(i, j);
                if e.is_exact_zero() {
                    continue;
                }
                if e.is_zero() {
                    if bound != FORBIDDEN && e.prec() >= bound {
                        continue;
                    }
                    return Err(Error::InsufficientPrecision { needed: bound, available: e.prec() });
                }
                if e.val_bound() < bound {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for ValMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .b
            .iter()
            .map(|&x| if x == FORBIDDEN { "0".to_string() } else { format!("p^{x}") })
            .collect();
        let w = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:>w$}", cells[i * self.cols + j])).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Λ_{2N}: period 4N, jumps at odd integers, Λ(0) = Λ(1) = 𝔬^N ⊕ 𝔭^N.
pub fn standard_chain_2n(n: usize) -> Result<LatticeSeq> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let two_n = 2 * n as i64;
    LatticeSeq::from_fn(2 * n, 2 * two_n, |k| {
        // t in [-2N, 2N) walks the columns of the standard order from right to left.
        let t = (k + two_n).rem_euclid(2 * two_n) - two_n;
        let shift = div_floor(k + two_n, 2 * two_n);
        let m = div_floor(t + two_n, 2);
        (0..2 * n as i64).map(|i| i64::from(i >= two_n - m) + shift).collect()
    })
}

/// Σ_{2N}: the strict chain of the standard Iwahori order, period 2N.
pub fn sigma_chain_2n(n: usize) -> Result<LatticeSeq> {
    let two_n = 2 * n as i64;
    LatticeSeq::from_fn(2 * n, two_n, |k| {
        let r = k.rem_euclid(two_n);
        (0..two_n).map(|i| i64::from(i >= two_n - r) + div_floor(k, two_n)).collect()
    })
}

/// Λ_2 on W ⊕ W*: built on (𝔬,𝔬), (𝔬,𝔭), period 4N, duality invariant 1.
pub fn lambda_2(n: usize) -> Result<LatticeSeq> {
    let n = n as i64;
    LatticeSeq::from_fn(2, 4 * n, |t| vec![div_floor(t + 3 * n - 1, 4 * n), div_floor(t + 5 * n - 1, 4 * n)])
}

/// 𝔪_1 on W ⊕ W*: multiples of (𝔬, 𝔭).
pub fn m1(n: usize) -> Result<LatticeSeq> {
    let n = n as i64;
    LatticeSeq::from_fn(2, 4 * n, |t| {
        let a = div_floor(t + 2 * n - 1, 4 * n);
        vec![a, a + 1]
    })
}

/// 𝔪_0 on W ⊕ W*: multiples of (𝔬, 𝔬).
pub fn m0(n: usize) -> Result<LatticeSeq> {
    let n = n as i64;
    LatticeSeq::from_fn(2, 4 * n, |t| {
        let a = div_ceil(t, 4 * n);
        vec![a, a]
    })
}

/// Place a W ⊕ W* sequence around Λ_{2N} in the coordinates (x_0, x_1..x_{2N}, x_{2N+1}).
pub fn around_v(outer: &LatticeSeq, n: usize) -> Result<LatticeSeq> {
    let sum = outer.direct_sum(&standard_chain_2n(n)?)?;
    let order: Vec<usize> = std::iter::once(0).chain(2..2 * n + 2).chain(std::iter::once(1)).collect();
    sum.permute(&order)
}

/// 𝔐_0 = 𝔪_0 ⊕ Λ_{2N} in X = F^{2N+2}.
pub fn big_m0(n: usize) -> Result<LatticeSeq> {
    around_v(&m0(n)?, n)
}

/// 𝔐_1 = 𝔪_1 ⊕ Λ_{2N} in X = F^{2N+2}.
pub fn big_m1(n: usize) -> Result<LatticeSeq> {
    around_v(&m1(n)?, n)
}

/// Λ = Λ_2 ⊕ Λ_{2N} in X = F^{2N+2}.
pub fn lambda_gl1(n: usize) -> Result<LatticeSeq> {
    around_v(&lambda_2(n)?, n)
}

/// Λ_X = (3Λ_W − 2) ⊕ 3Λ_V ⊕ (3Λ_{W*} + 2) in X = W ⊕ V ⊕ W*.
pub fn lambda_x(n: usize) -> Result<LatticeSeq> {
    let base = standard_chain_2n(n)?;
    let tripled = base.dilate(3);
    tripled.translate(2).direct_sum(&tripled)?.direct_sum(&tripled.translate(-2))
}
