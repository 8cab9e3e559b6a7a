//! Filtration-level structure: the row/column lattices of the GL(1) parabolic,
//! the Iwahori inclusions for t₀, t₁, and the block shape of 𝔥¹ for Λ_X.

use crate::error::{Error, Result};
use crate::lattices::{self, LatticeSeq, ValMatrix, FORBIDDEN};
use crate::residue::ResidueField;

use super::{beta_matrix, weyl_gl1, MatLS};

/// The lattices R¹(1), R²(2) (rows) and C²(1), C¹(2) (columns) as valuation vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl1Lattices {
    pub r1_1: Vec<i64>,
    pub r2_2: Vec<i64>,
    pub c2_1: Vec<i64>,
    pub c1_2: Vec<i64>,
}

fn shifted(v: &[i64], k: i64) -> Vec<i64> {
    v.iter().map(|x| x + k).collect()
}

/// Inclusion of row/column lattices given by lower bounds.
fn sub(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

impl Gl1Lattices {
    /// ϖR¹(1) ⊆ R²(2) ⊆ R¹(1) ⊆ ϖ⁻¹R²(2).
    pub fn row_chain(&self) -> bool {
        sub(&shifted(&self.r1_1, 1), &self.r2_2) && sub(&self.r2_2, &self.r1_1) && sub(&self.r1_1, &shifted(&self.r2_2, -1))
    }

    /// ϖC²(1) ⊆ C¹(2) ⊆ C²(1) ⊆ ϖ⁻¹C¹(2).
    pub fn col_chain(&self) -> bool {
        sub(&shifted(&self.c2_1, 1), &self.c1_2) && sub(&self.c1_2, &self.c2_1) && sub(&self.c2_1, &shifted(&self.c1_2, -1))
    }
}

pub fn gl1_lattices(n: usize) -> Result<Gl1Lattices> {
    let v = lattices::standard_chain_2n(n)?;
    let w = lattices::lambda_2(n)?;
    let down = |r| LatticeSeq::hom_block(&v, &w, r);
    let up = |r| LatticeSeq::hom_block(&w, &v, r);
    Ok(Gl1Lattices { r1_1: down(1)?.row(0), r2_2: down(2)?.row(1), c2_1: up(1)?.col(1), c1_2: up(2)?.col(0) })
}

/// Row of 𝔞^{12}_r(𝔐_1): maps Λ_{2N} → 𝔪_1 landing in W.
pub fn m1_row(n: usize, r: i64) -> Result<Vec<i64>> {
    Ok(LatticeSeq::hom_block(&lattices::standard_chain_2n(n)?, &lattices::m1(n)?, r)?.row(0))
}

/// Valuation bounds of J_P ∩ U and J_P ∩ U⁻ for Λ = Λ_2 ⊕ Λ_{2N} in F^{2N+2}.
///
/// Off-block entries are FORBIDDEN; the unipotent diagonal is dropped.
pub fn jp_unipotents(n: usize) -> Result<(ValMatrix, ValMatrix)> {
    let l = lattices::lambda_gl1(n)?;
    let (b0, b1, b2) = (l.order_filtration(0), l.order_filtration(1), l.order_filtration(2));
    let last = 2 * n + 1;
    let inner = |i: usize| (1..=2 * n).contains(&i);
    let upper = ValMatrix::from_fn(last + 1, last + 1, |i, j| match (i, j) {
        (0, j) if j == last => b0.get(i, j),
        (0, j) if inner(j) => b1.get(i, j),
        (i, j) if j == last && inner(i) => b1.get(i, j),
        _ => FORBIDDEN,
    });
    let lower = ValMatrix::from_fn(last + 1, last + 1, |i, j| match (i, j) {
        (i, 0) if i == last => b1.get(i, j),
        (i, 0) if inner(i) => b2.get(i, j),
        (i, j) if i == last && inner(j) => b2.get(i, j),
        _ => FORBIDDEN,
    });
    Ok((upper, lower))
}

/// Outcome of the four inclusions around t₀ and t₁.
#[derive(Clone, Debug)]
pub struct IwahoriReport {
    /// t₀(J_P∩U⁻)t₀⁻¹ ⊆ J_P∩U ⊆ t₁(J_P∩U⁻)t₁⁻¹.
    pub upper_chain: bool,
    /// t₁(J_P∩U)t₁⁻¹ ⊆ J_P∩U⁻ ⊆ t₀(J_P∩U)t₀⁻¹.
    pub lower_chain: bool,
    pub upper: ValMatrix,
    pub lower: ValMatrix,
}

pub fn iwahori_inclusions(n: usize) -> Result<IwahoriReport> {
    let (upper, lower) = jp_unipotents(n)?;
    let k = ResidueField::prime(3)?;
    let (t0, t1) = weyl_gl1(&k, n);
    let conj = |t: &MatLS, m: &ValMatrix| -> Result<ValMatrix> {
        let mono = t.monomial().ok_or_else(|| Error::InvalidParameter("Weyl element is not monomial".into()))?;
        Ok(m.conjugate_monomial(&mono.sigma, &mono.val))
    };
    let upper_chain = conj(&t0, &lower)?.is_subset_of(&upper) && upper.is_subset_of(&conj(&t1, &lower)?);
    let lower_chain = conj(&t1, &upper)?.is_subset_of(&lower) && lower.is_subset_of(&conj(&t0, &upper)?);
    Ok(IwahoriReport { upper_chain, lower_chain, upper, lower })
}

/// Block (i, j) of 𝔥¹(β, Λ_X) written as 𝔬_E·β^{-v} + 𝔄_k(Λ_{2N}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockShape {
    /// `Some(v)` when the 𝔬_E-part is not already inside 𝔄_k.
    pub e_part: Option<i64>,
    /// Index k of the 𝔄_3-block, the representative of smallest absolute value.
    pub k: i64,
}

impl BlockShape {
    pub fn label(&self) -> String {
        match self.e_part {
            None => format!("A_{}", self.k),
            Some(0) => format!("o_E + A_{}", self.k),
            Some(1) => format!("p_E + w_E A_{}", self.k - 2),
            Some(v) => format!("p_E^{v} + w_E^{v} A_{}", self.k - 2 * v),
        }
    }
}

/// Search window for filtration indices; every block of Λ_X lands well inside it.
const K_RANGE: std::ops::RangeInclusive<i64> = -12..=12;

/// 𝔥¹ blocks for Λ_X: each is (E ∩ 𝔄_1(Λ_X)_{ij}) + 𝔄_3(Λ_X)_{ij}.
pub fn blocs(n: usize) -> Result<Vec<Vec<BlockShape>>> {
    let lx = lattices::lambda_x(n)?;
    let lv = lattices::standard_chain_2n(n)?;
    let d = 2 * n;
    let a1 = lx.order_filtration(1);
    let a3 = lx.order_filtration(3);
    let k = ResidueField::prime(3)?;
    let beta = beta_matrix(&k, n)?;
    let beta_inv = beta.inv()?;
    let beta_pow = |m: i64| -> Result<MatLS> {
        if m >= 0 {
            beta_inv.pow(m as u32)
        } else {
            beta.pow((-m) as u32)
        }
    };
    let mut out = Vec::with_capacity(3);
    for bi in 0..3 {
        let mut row = Vec::with_capacity(3);
        for bj in 0..3 {
            let big = a1.block(bi * d, bj * d, d, d);
            let small = a3.block(bi * d, bj * d, d, d);
            let ks: Vec<i64> = K_RANGE.filter(|&r| lv.order_filtration(r) == small).collect();
            let k = *ks.iter().min_by_key(|r| r.abs()).ok_or_else(|| Error::InvalidParameter(format!("block ({bi},{bj}) is not a filtration lattice")))?;
            // β^{-m} lies in the block for all large m; find the first.
            let mut v = None;
            for m in K_RANGE {
                if big.admits(&beta_pow(m)?)? {
                    v = Some(m);
                    break;
                }
            }
            let v = v.ok_or_else(|| Error::InvalidParameter("no power of beta fits the block".into()))?;
            let absorbed = small.admits(&beta_pow(v)?)?;
            // The block must really be 𝔬_E β^{-v} + 𝔄_k: β^{-v-1} ∈ 𝔄_k and the bounds agree.
            let pv = beta_pow(v)?;
            let span = ValMatrix::from_fn(d, d, |i, j| {
                let e = pv.get(i, j);
                if e.is_exact_zero() {
                    small.get(i, j)
                } else {
                    small.get(i, j).min(e.val_bound())
                }
            });
            if span != big || !small.admits(&beta_pow(v + 1)?)? {
                return Err(Error::InvalidParameter(format!("block ({bi},{bj}) is not o_E b^-v + A_k")));
            }
            row.push(BlockShape { e_part: if absorbed { None } else { Some(v) }, k });
        }
        out.push(row);
    }
    Ok(out)
}

/// The sequences 𝔐_{0} and 𝔐_{1} on X with 𝔐_i(2k) = β_X^{-k}Λ_X(a), 𝔐_i(2k+1) = β_X^{-k}Λ_X(b).
///
/// Since β_X^{-1}Λ_X(t) = Λ_X(t + 6), (a, b) = (0, 1) for the first and (−2, 3) for the second.
pub fn x_vertex(n: usize, which: u8) -> Result<LatticeSeq> {
    let (a, b) = match which {
        0 => (0, 1),
        1 => (-2, 3),
        _ => return Err(Error::InvalidParameter(format!("vertex {which} is not 0 or 1"))),
    };
    let lx = lattices::lambda_x(n)?;
    LatticeSeq::from_fn(6 * n, 4 * n as i64, |j| {
        let (k, r) = (j.div_euclid(2), j.rem_euclid(2));
        lx.at(if r == 0 { a + 6 * k } else { b + 6 * k })
    })
}

/// Whether g and g⁻¹ stabilize every lattice of the sequence.
pub fn in_parahoric(seq: &LatticeSeq, g: &MatLS) -> Result<bool> {
    Ok(seq.contains(0, g)? && seq.contains(0, &g.inv()?)?)
}
