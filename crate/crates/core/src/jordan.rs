//! The Jordan set of a simple cuspidal of Sp(2N), its ε-factor identity and the
//! consistency checks on the resulting Langlands parameter.

use crate::error::{Error, Result};
use crate::exactnum::FourthRoot;
use crate::hecke;
use crate::residue::{Field, Fq, Sign};
use crate::sympgroups::beta_matrix;

/// π = c-Ind χ ⊗ ψ_β, described by N, the residue field, χ(−1) and the ψ-twist a.
#[derive(Clone, Debug)]
pub struct SimpleCuspidalData {
    pub n: usize,
    pub field: Field,
    pub chi_m1: Sign,
    pub a: Fq,
}

impl SimpleCuspidalData {
    pub fn new(field: &Field, n: usize, chi_m1: Sign) -> Result<Self> {
        Self::with_twist(field, n, chi_m1, Fq::ONE)
    }

    pub fn with_twist(field: &Field, n: usize, chi_m1: Sign, a: Fq) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if a.is_zero() {
            return Err(Error::InvalidParameter("the psi twist must be a unit".into()));
        }
        Ok(SimpleCuspidalData { n, field: field.clone(), chi_m1, a })
    }

    fn q(&self) -> u32 {
        self.field.q()
    }

    fn delta(&self, x: i64) -> Sign {
        self.field.delta(self.field.from_int(x)).expect("small integers are units for odd q")
    }

    fn xi(&self) -> Result<FourthRoot> {
        self.field.xi(self.a)
    }
}

/// ε₁(N_{E/F}(β)) = (−1)^{(N+1)(q−1)/2}.
pub fn epsilon1(data: &SimpleCuspidalData) -> Sign {
    Sign::minus_one_pow(((data.n + 1) as i64) * ((data.q() as i64 - 1) / 2))
}

/// ε₁(N(β)) again, from ε₁(ϖ) = T₀(t₀)T₁(t₁) and N(β) = det β computed from the matrix.
pub fn epsilon1_via_hecke(data: &SimpleCuspidalData) -> Result<Sign> {
    let k = &data.field;
    let pair = hecke::gl1_generator_norms(k, data.a)?;
    let at_pi = hecke::select_selfdual(&pair)?.lambda_a.direction()?;
    let at_pi = match at_pi {
        FourthRoot::ONE => Sign::Plus,
        FourthRoot::MINUS_ONE => Sign::Minus,
        _ => return Err(Error::Constraint("epsilon_1 at the uniformizer is not real".into())),
    };
    let det = beta_matrix(k, data.n)?.det()?;
    let v = det.val()?;
    // ε₁ is δ on units, so ε₁(c·ϖ^v) = δ(c)·ε₁(ϖ)^v.
    Ok(k.delta(det.leading_coeff()?)? * at_pi.pow(v))
}

/// τ(β) = χ(−1)·δ(2)·ξ(δ, ψ).
pub fn tau_beta(data: &SimpleCuspidalData) -> Result<FourthRoot> {
    Ok((data.chi_m1 * data.delta(2)) * data.xi()?)
}

/// τ(−β²) = δ(−1)τ(β)².
pub fn tau_minus_beta_sq(data: &SimpleCuspidalData) -> Result<FourthRoot> {
    Ok(data.delta(-1) * tau_beta(data)?.pow(2))
}

/// τ(−β^{2N}) = δ(−1)τ(β)^{2N}.
pub fn tau_minus_beta_2n(data: &SimpleCuspidalData) -> Result<FourthRoot> {
    Ok(data.delta(-1) * tau_beta(data)?.pow(2 * data.n as i64))
}

/// τ(2β) = δ(2)τ(β).
pub fn tau_two_beta(data: &SimpleCuspidalData) -> Result<FourthRoot> {
    Ok(data.delta(2) * tau_beta(data)?)
}

/// Jord(π) = {(ε₁, 1), (σ, 1)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSet {
    pub n: usize,
    pub q: u32,
    pub chi_m1: Sign,
    /// ε₁ is the ramified quadratic character with this value on N(β).
    pub eps1_on_norms: Sign,
    /// σ has central character δ on units and this value of τ(β).
    pub tau_beta: FourthRoot,
    /// Reducibility points of (ε₁, ·) and (σ, ·); both are 1.
    pub reducibility_points: [i64; 2],
    pub eps_product: Sign,
}

pub fn jordan_set(data: &SimpleCuspidalData) -> Result<JordanSet> {
    let (sa, _) = hecke::reducibility_exponents(1, 1, 1)?;
    if !sa.is_integer() {
        return Err(Error::Constraint("reducibility point is not an integer".into()));
    }
    let s = sa.to_integer().try_into().map_err(|_| Error::Constraint("reducibility point overflow".into()))?;
    Ok(JordanSet {
        n: data.n,
        q: data.q(),
        chi_m1: data.chi_m1,
        eps1_on_norms: epsilon1(data),
        tau_beta: tau_beta(data)?,
        reducibility_points: [s, s],
        eps_product: eps_factor_product(data)?,
    })
}

/// ε(ε₁, ½, ψ)·ε(σ, ½, ψ) = ξ(δ, ψ)·τ(2β)⁻¹, which must be real.
pub fn eps_factor_product(data: &SimpleCuspidalData) -> Result<Sign> {
    let prod = data.xi()? * tau_two_beta(data)?.inv();
    match prod {
        FourthRoot::ONE => Ok(Sign::Plus),
        FourthRoot::MINUS_ONE => Ok(Sign::Minus),
        _ => Err(Error::Constraint(format!("epsilon product {prod} is not real"))),
    }
}

/// The parameter ω ⊕ τ, kept as the data the checks need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanglandsDescriptor {
    pub omega_on_norm_beta: Sign,
    pub omega_minus_one: Sign,
    pub tau_dimension: usize,
    pub a: FourthRoot,
    /// ω(N(β)) = ω(−1)^{N−1}.
    pub norm_check: bool,
    /// a² = ω(−1) with a = τ(2β).
    pub square_check: bool,
}

pub fn langlands_descriptor(data: &SimpleCuspidalData) -> Result<LanglandsDescriptor> {
    let omega_on_norm_beta = epsilon1(data);
    let omega_minus_one = data.delta(-1);
    let a = tau_two_beta(data)?;
    Ok(LanglandsDescriptor {
        omega_on_norm_beta,
        omega_minus_one,
        tau_dimension: 2 * data.n,
        a,
        norm_check: omega_on_norm_beta == omega_minus_one.pow(data.n as i64 - 1),
        square_check: a.pow(2) == omega_minus_one.as_fourth_root(),
    })
}
