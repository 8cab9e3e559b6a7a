//! Symplectic forms, the element β, congruence subgroups, ψ_β, Weyl
//! representatives and the Iwahori-decomposition solvers.

mod matrix;
pub mod structure;

pub use matrix::{MatLS, Monomial};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::lattices::{self, LatticeSeq, Pairing};
use crate::localfield::LSeries;
use crate::residue::{Field, Fq};

/// Which alternating form a descriptor carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// h_{2N}(x, y) = x_1 y_{2N} + … + x_N y_{N+1} − x_{N+1} y_N − … − x_{2N} y_1.
    H2N,
    /// 𝐡 on X = V ⊕ V ⊕ V: h(a, c') + h(b, b') + h(c, a').
    BoldX,
}

#[derive(Clone, Debug)]
pub struct FormDescriptor {
    kind: FormKind,
    dim: usize,
    gram: MatLS,
    gram_inv: MatLS,
}

/// Gram matrix of h_{dim}: +1 at (i, dim-1-i) for i < dim/2, −1 below.
fn h_gram(field: &Field, dim: usize) -> MatLS {
    MatLS::from_monomials(field, dim, dim, |i, j| {
        if i + j == dim - 1 {
            Some((if 2 * i < dim { 1 } else { -1 }, 0))
        } else {
            None
        }
    })
}

impl FormDescriptor {
    pub fn h(field: &Field, dim: usize) -> Result<Self> {
        if dim == 0 || dim % 2 == 1 {
            return Err(Error::Dimension(format!("h_{dim} needs a positive even dimension")));
        }
        Self::from_gram(FormKind::H2N, h_gram(field, dim))
    }

    pub fn bold(field: &Field, n: usize) -> Result<Self> {
        let j = h_gram(field, 2 * n);
        let z = MatLS::zeros(field, 2 * n, 2 * n);
        let gram = MatLS::from_blocks(&[
            vec![z.clone(), z.clone(), j.clone()],
            vec![z.clone(), j.clone(), z.clone()],
            vec![j, z.clone(), z],
        ])?;
        Self::from_gram(FormKind::BoldX, gram)
    }

    fn from_gram(kind: FormKind, gram: MatLS) -> Result<Self> {
        let gram_inv = gram.inv()?;
        Ok(FormDescriptor { kind, dim: gram.rows(), gram, gram_inv })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &MatLS {
        &self.gram
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn pairing(&self) -> Pairing {
        Pairing::from_gram(&self.gram).expect("forms here are monomial")
    }

    fn check(&self, m: &MatLS) -> Result<()> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::Dimension(format!("{}x{} matrix for a form of dimension {}", m.rows(), m.cols(), self.dim)));
        }
        Ok(())
    }

    /// ᵃM = G⁻¹ Mᵗ G, so that h(Mx, y) = h(x, ᵃM y).
    pub fn adjoint(&self, m: &MatLS) -> Result<MatLS> {
        self.check(m)?;
        self.gram_inv.try_mul(&m.transpose())?.try_mul(&self.gram)
    }

    /// Mᵗ G M − G, zero exactly when M preserves the form.
    pub fn defect(&self, m: &MatLS) -> Result<MatLS> {
        self.check(m)?;
        m.transpose().try_mul(&self.gram)?.try_mul(m)?.try_sub(&self.gram)
    }

    /// Whether M preserves the form to at least `min_prec`.
    pub fn preserves(&self, m: &MatLS, min_prec: i64) -> Result<bool> {
        let d = self.defect(m)?;
        if !d.is_zero() {
            return Ok(false);
        }
        if d.prec() < min_prec {
            return Err(Error::InsufficientPrecision { needed: min_prec, available: d.prec() });
        }
        Ok(true)
    }
}

/// Transpose with respect to the antidiagonal.
pub fn adjoint_gl(m: &MatLS) -> MatLS {
    m.anti_transpose()
}

pub fn adjoint_sp(m: &MatLS, form: &FormDescriptor) -> Result<MatLS> {
    form.adjoint(m)
}

/// β: ϖ⁻¹ in the top-right corner, −1 on the first N subdiagonal slots and +1 on the rest.
pub fn beta_matrix(field: &Field, n: usize) -> Result<MatLS> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let dim = 2 * n;
    Ok(MatLS::from_monomials(field, dim, dim, |i, j| {
        if i == 0 && j == dim - 1 {
            Some((1, -1))
        } else if i == j + 1 {
            Some((if j < n { -1 } else { 1 }, 0))
        } else {
            None
        }
    }))
}

/// Minimum precision required of the form defect when testing membership at level r.
fn needed_prec(r: i64) -> i64 {
    r.max(0) + 2
}

/// Whether M preserves `form` and M − I ∈ 𝔄_r(Λ).
pub fn is_in_group(m: &MatLS, form: &FormDescriptor, r: i64, lambda: &LatticeSeq) -> Result<bool> {
    if !form.preserves(m, needed_prec(r))? {
        return Ok(false);
    }
    let one = MatLS::identity(m.field(), m.rows());
    lambda.contains(r, &m.try_sub(&one)?)
}

/// The Cayley transform (1 + X/2)(1 − X/2)⁻¹, mapping Lie(Sp) into Sp.
pub fn cayley(x: &MatLS) -> Result<MatLS> {
    let k = x.field();
    let half = LSeries::constant(k, k.inv(k.from_int(2))?);
    let one = MatLS::identity(k, x.rows());
    let hx = x.scale(&half);
    one.try_add(&hx)?.try_mul(&one.try_sub(&hx)?.inv()?)
}

/// Random Laurent-polynomial matrix with entries meeting `bounds`, known to `prec`.
pub fn random_in<R: Rng + ?Sized>(field: &Field, rng: &mut R, bounds: &lattices::ValMatrix, terms: usize, prec: i64) -> MatLS {
    MatLS::from_fn(field, bounds.rows(), bounds.cols(), |i, j| {
        let b = bounds.get(i, j);
        if b == lattices::FORBIDDEN {
            LSeries::zero(field)
        } else {
            LSeries::random(field, rng, b, terms, prec)
        }
    })
}

/// The simple stratum (Λ_{2N}, 2, 0, β) in Sp(2N) and its character ψ_β.
#[derive(Clone, Debug)]
pub struct SimpleStratum {
    n: usize,
    field: Field,
    beta: MatLS,
    beta_inv: MatLS,
    lambda: LatticeSeq,
    form: FormDescriptor,
}

impl SimpleStratum {
    pub fn new(field: &Field, n: usize) -> Result<Self> {
        let beta = beta_matrix(field, n)?;
        let beta_inv = beta.inv()?;
        Ok(SimpleStratum {
            n,
            field: field.clone(),
            beta,
            beta_inv,
            lambda: lattices::standard_chain_2n(n)?,
            form: FormDescriptor::h(field, 2 * n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn beta(&self) -> &MatLS {
        &self.beta
    }

    pub fn beta_inv(&self) -> &MatLS {
        &self.beta_inv
    }

    pub fn lattice(&self) -> &LatticeSeq {
        &self.lambda
    }

    pub fn form(&self) -> &FormDescriptor {
        &self.form
    }

    /// x ∈ I_{2N}(r) = Sp ∩ (1 + 𝔄_r(Λ_{2N})).
    pub fn in_i(&self, x: &MatLS, r: i64) -> Result<bool> {
        is_in_group(x, &self.form, r, &self.lambda)
    }

    /// x ∈ Ĩ_{2N}(r) = 1 + 𝔄_r(Λ_{2N}) in GL(2N).
    pub fn in_i_tilde(&self, x: &MatLS, r: i64) -> Result<bool> {
        let one = MatLS::identity(&self.field, 2 * self.n);
        self.lambda.contains(r, &x.try_sub(&one)?)
    }

    /// Residue at t⁰ of tr(β(x − 1)), for x ∈ Ĩ(1).
    pub fn trace_residue(&self, x: &MatLS) -> Result<Fq> {
        if !self.in_i_tilde(x, 1)? {
            return Err(Error::NotInGroup("x - 1 is not in A_1(Lambda_2N)".into()));
        }
        let one = MatLS::identity(&self.field, 2 * self.n);
        self.beta.try_mul(&x.try_sub(&one)?)?.trace()?.residue_at(0)
    }

    /// Exponent k with ψ_β(x) = ζ_p^k, for ψ twisted by `a`, on Ĩ(1).
    pub fn psi_beta_tilde_exponent(&self, x: &MatLS, a: Fq) -> Result<u32> {
        Ok(self.field.psi_exponent(self.trace_residue(x)?, a))
    }

    /// ψ_β on I(1); elements outside Sp or outside 1 + 𝔄_1 are rejected.
    pub fn psi_beta(&self, x: &MatLS, a: Fq) -> Result<CycNum> {
        if !self.in_i(x, 1)? {
            return Err(Error::NotInGroup("x is not in I_2N(1)".into()));
        }
        let k = self.psi_beta_tilde_exponent(x, a)?;
        CycNum::zeta_pow(self.field.p(), k as i64)
    }

    /// Exponent of ψ_β on I(1).
    pub fn psi_beta_exponent(&self, x: &MatLS, a: Fq) -> Result<u32> {
        if !self.in_i(x, 1)? {
            return Err(Error::NotInGroup("x is not in I_2N(1)".into()));
        }
        self.psi_beta_tilde_exponent(x, a)
    }

    /// The element of Lie(Sp) supported on affine coordinate `i` (1..=N+1) with residue u.
    ///
    /// Coordinates 1..=N are the superdiagonal entries x_{i,i+1}; N+1 is ϖ⁻¹x_{2N,1}.
    pub fn coordinate_lie(&self, i: usize, u: Fq) -> Result<MatLS> {
        let dim = 2 * self.n;
        let k = &self.field;
        let (row, col, shift) = match i {
            i if (1..=self.n).contains(&i) => (i - 1, i, 0),
            i if i == self.n + 1 => (dim - 1, 0, 1),
            _ => return Err(Error::InvalidParameter(format!("coordinate {i} out of range 1..={}", self.n + 1))),
        };
        let mut y = MatLS::zeros(k, dim, dim);
        y.set(row, col, LSeries::monomial(k, Fq::ONE, shift));
        let x = y.try_sub(&self.form.adjoint(&y)?)?;
        // Y − ᵃY carries 1 or 2 at the chosen slot; rescale so that it carries u.
        let c = x.get(row, col).leading_coeff()?;
        Ok(x.scale(&LSeries::constant(k, k.div(u, c)?)))
    }

    /// Cayley image of `coordinate_lie`.
    pub fn coordinate_element(&self, i: usize, u: Fq) -> Result<MatLS> {
        cayley(&self.coordinate_lie(i, u)?)
    }

    /// A random element of I(1), via the Cayley transform of Lie(Sp) ∩ 𝔄_1.
    pub fn random_i1<R: Rng + ?Sized>(&self, rng: &mut R, prec: i64) -> Result<MatLS> {
        let bounds = self.lambda.order_filtration(1);
        let m = random_in(&self.field, rng, &bounds, 3, prec);
        let k = &self.field;
        let half = LSeries::constant(k, k.inv(k.from_int(2))?);
        let x = m.try_sub(&self.form.adjoint(&m)?)?.scale(&half);
        cayley(&x)
    }
}

/// (t₀, t₁) in Sp(2N+2) with coordinates (x_0, x_1..x_{2N}, x_{2N+1}).
pub fn weyl_gl1(field: &Field, n: usize) -> (MatLS, MatLS) {
    let dim = 2 * n + 2;
    let last = dim - 1;
    let build = |corner_top: (i64, i64), corner_bottom: (i64, i64)| {
        MatLS::from_monomials(field, dim, dim, |i, j| {
            if i == 0 && j == last {
                Some(corner_top)
            } else if i == last && j == 0 {
                Some(corner_bottom)
            } else if i == j && i != 0 && i != last {
                Some((1, 0))
            } else {
                None
            }
        })
    };
    (build((1, 0), (-1, 0)), build((-1, -1), (1, 1)))
}

/// (w₀, w₁) in Sp(X), X = W ⊕ V ⊕ W*.
pub fn weyl_gl2n(field: &Field, n: usize) -> Result<(MatLS, MatLS)> {
    let d = 2 * n;
    let i = MatLS::identity(field, d);
    let z = MatLS::zeros(field, d, d);
    let w0 = MatLS::from_blocks(&[
        vec![z.clone(), z.clone(), i.clone()],
        vec![z.clone(), i.clone(), z.clone()],
        vec![i.clone(), z.clone(), z.clone()],
    ])?;
    let beta = beta_matrix(field, n)?;
    let w1 = MatLS::from_blocks(&[
        vec![z.clone(), z.clone(), beta.clone()],
        vec![z.clone(), i, z.clone()],
        vec![-&beta.inv()?, z.clone(), z],
    ])?;
    Ok((w0, w1))
}

/// β ⊕ β ⊕ β on X.
pub fn beta_x(field: &Field, n: usize) -> Result<MatLS> {
    let b = beta_matrix(field, n)?;
    let z = MatLS::zeros(field, 2 * n, 2 * n);
    MatLS::from_blocks(&[
        vec![b.clone(), z.clone(), z.clone()],
        vec![z.clone(), b.clone(), z.clone()],
        vec![z.clone(), z, b],
    ])
}

/// The blocks of an inf or sup Iwahori factorization.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub m: MatLS,
    pub g: MatLS,
    pub b1: MatLS,
    pub b2: MatLS,
    pub e1: MatLS,
    pub e2: MatLS,
    pub f1: MatLS,
    pub f2: MatLS,
}

/// Z + ᵃZ + ᵃD·D, which vanishes for unipotent elements of Sp(X).
pub fn unipotent_constraint(form_v: &FormDescriptor, d: &MatLS, z: &MatLS) -> Result<MatLS> {
    let ad = form_v.adjoint(d)?;
    z.try_add(&form_v.adjoint(z)?)?.try_add(&ad.try_mul(d)?)
}

fn check_constraint(form_v: &FormDescriptor, d: &MatLS, z: &MatLS) -> Result<()> {
    if !unipotent_constraint(form_v, d, z)?.is_zero() {
        return Err(Error::Constraint("Z + aZ + aD D is not zero".into()));
    }
    Ok(())
}

fn common_blocks(form_v: &FormDescriptor, d: &MatLS, z: &MatLS, m: MatLS) -> Result<Decomposition> {
    check_constraint(form_v, d, z)?;
    let zi = z.inv()?;
    let ad = form_v.adjoint(d)?;
    let b2 = -&zi.try_mul(&ad)?;
    let f1 = d.try_mul(&zi)?;
    let one = MatLS::identity(d.field(), d.rows());
    let g = one.try_add(&f1.try_mul(&ad)?)?;
    let gi = g.inv()?;
    let f2 = -&gi.try_mul(&f1)?;
    let b1 = -&b2.try_mul(&gi)?;
    Ok(Decomposition { m, g, b1, b2, e1: zi.clone(), e2: zi, f1, f2 })
}

/// Inf factorization of the lower-unipotent element with blocks D, Z (and H = −ᵃD).
pub fn solve_inf(form_v: &FormDescriptor, d: &MatLS, z: &MatLS) -> Result<Decomposition> {
    common_blocks(form_v, d, z, z.clone())
}

/// Sup factorization of the upper-unipotent element with blocks H = −ᵃD, Z, D.
pub fn solve_sup(form_v: &FormDescriptor, beta: &MatLS, d: &MatLS, z: &MatLS) -> Result<Decomposition> {
    // ᵃ(m⁻¹) = β⁻¹Z gives m = −β·(ᵃZ)⁻¹.
    let m = -&beta.try_mul(&form_v.adjoint(z)?.inv()?)?;
    common_blocks(form_v, d, z, m)
}

fn blocks3(rows: [[&MatLS; 3]; 3]) -> Result<MatLS> {
    MatLS::from_blocks(&rows.iter().map(|r| r.iter().map(|b| (*b).clone()).collect()).collect::<Vec<_>>())
}

/// Lower-unipotent [[I,0,0],[D,I,0],[Z,H,I]].
pub fn lower_unipotent(d: &MatLS, z: &MatLS, h: &MatLS) -> Result<MatLS> {
    let k = d.field();
    let (i, o) = (MatLS::identity(k, d.rows()), MatLS::zeros(k, d.rows(), d.rows()));
    blocks3([[&i, &o, &o], [d, &i, &o], [z, h, &i]])
}

/// Upper-unipotent [[I,H,Z],[0,I,D],[0,0,I]].
pub fn upper_unipotent(h: &MatLS, z: &MatLS, d: &MatLS) -> Result<MatLS> {
    let k = d.field();
    let (i, o) = (MatLS::identity(k, d.rows()), MatLS::zeros(k, d.rows(), d.rows()));
    blocks3([[&i, h, z], [&o, &i, d], [&o, &o, &i]])
}

fn levi(form_v: &FormDescriptor, s: &Decomposition) -> Result<MatLS> {
    let k = s.m.field();
    let o = MatLS::zeros(k, s.m.rows(), s.m.rows());
    let am_inv = form_v.adjoint(&s.m)?.inv()?;
    blocks3([[&s.m, &o, &o], [&o, &s.g, &o], [&o, &o, &am_inv]])
}

/// Product upper · w0 · levi · upper rebuilt from an inf solution.
pub fn reconstruct_inf(form_v: &FormDescriptor, s: &Decomposition) -> Result<MatLS> {
    let k = s.m.field();
    let (w0, _) = weyl_gl2n(k, s.m.rows() / 2)?;
    let left = upper_unipotent(&s.b1, &s.e1, &s.f1)?;
    let right = upper_unipotent(&s.b2, &s.e2, &s.f2)?;
    left.try_mul(&w0)?.try_mul(&levi(form_v, s)?)?.try_mul(&right)
}

/// Product lower · w1 · levi · lower rebuilt from a sup solution.
pub fn reconstruct_sup(form_v: &FormDescriptor, s: &Decomposition) -> Result<MatLS> {
    let k = s.m.field();
    let (_, w1) = weyl_gl2n(k, s.m.rows() / 2)?;
    let left = lower_unipotent(&s.f1, &s.e1, &s.b1)?;
    let right = lower_unipotent(&s.f2, &s.e2, &s.b2)?;
    left.try_mul(&w1)?.try_mul(&levi(form_v, s)?)?.try_mul(&right)
}

/// A random pair (D, Z) with Z + ᵃZ + ᵃD·D = 0: Z = −ᵃD·D/2 + A with ᵃA = −A.
pub fn random_instance<R: Rng + ?Sized>(form_v: &FormDescriptor, rng: &mut R, prec: i64) -> Result<(MatLS, MatLS)> {
    let k = form_v.field();
    let dim = form_v.dim();
    let half = LSeries::constant(k, k.inv(k.from_int(2))?);
    loop {
        let d = MatLS::from_fn(k, dim, dim, |_, _| LSeries::random(k, rng, 0, 3, prec));
        if rng.gen_bool(0.5) && d.det()?.is_zero() {
            continue;
        }
        let r = MatLS::from_fn(k, dim, dim, |_, _| LSeries::random(k, rng, 0, 3, prec));
        let a = r.try_sub(&form_v.adjoint(&r)?)?.scale(&half);
        let z = a.try_sub(&form_v.adjoint(&d)?.try_mul(&d)?.scale(&half))?;
        if !z.det()?.is_zero() {
            return Ok((d, z));
        }
    }
}

/// C = B^τ: c_i = x_{2N-i+1} for i ≤ N and −x_{2N-i+1} for i > N.
pub fn b_tau(b: &[LSeries]) -> Vec<LSeries> {
    let dim = b.len();
    (0..dim).map(|i| if 2 * i < dim { b[dim - 1 - i].clone() } else { -&b[dim - 1 - i] }).collect()
}

/// The relations C = B^τ and B·C = 0.
pub fn gl1_relations(b: &[LSeries], c: &[LSeries]) -> Result<bool> {
    if b.len() != c.len() || b.is_empty() {
        return Err(Error::Dimension("B and C must have the same positive length".into()));
    }
    let tau = b_tau(b);
    if !tau.iter().zip(c).all(|(x, y)| x.agrees(y)) {
        return Ok(false);
    }
    let bc = b.iter().zip(c).try_fold(LSeries::zero(b[0].field()), |acc, (x, y)| acc.try_add(&x.try_mul(y)?))?;
    Ok(bc.is_zero())
}

/// [[1,B,z],[0,I,C],[0,0,1]] in GL(2N+2).
pub fn gl1_upper(b: &[LSeries], c: &[LSeries], z: &LSeries) -> MatLS {
    let k = z.field();
    let dim = b.len() + 2;
    MatLS::from_fn(k, dim, dim, |i, j| {
        if i == j {
            LSeries::one(k)
        } else if i == 0 && j == dim - 1 {
            z.clone()
        } else if i == 0 && j > 0 {
            b[j - 1].clone()
        } else if j == dim - 1 && i > 0 {
            c[i - 1].clone()
        } else {
            LSeries::zero(k)
        }
    })
}

/// [[1,0,0],[D,I,0],[u,H,1]] in GL(2N+2).
pub fn gl1_lower(d: &[LSeries], h: &[LSeries], u: &LSeries) -> MatLS {
    let k = u.field();
    let dim = d.len() + 2;
    MatLS::from_fn(k, dim, dim, |i, j| {
        if i == j {
            LSeries::one(k)
        } else if i == dim - 1 && j == 0 {
            u.clone()
        } else if j == 0 && i < dim - 1 {
            d[i - 1].clone()
        } else if i == dim - 1 && j < dim - 1 {
            h[j - 1].clone()
        } else {
            LSeries::zero(k)
        }
    })
}

/// The sets Γ (for t₁) and Γ′ (for t₀) of the GL(1) computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaCase {
    Gamma,
    GammaPrime,
}

/// Membership in Γ = {[[1,B,ϖ⁻¹u],[0,I,C],[0,0,1]] ∈ Sp : u unit, B ∈ 𝔬^{2N}}
/// or Γ′ = {[[1,0,0],[D,I,0],[u,H,1]] ∈ Sp : u unit, H ∈ R¹(1)}.
pub fn gamma_membership(case: GammaCase, j: &MatLS) -> Result<bool> {
    let dim = j.rows();
    if dim < 4 || dim % 2 == 1 || !j.is_square() {
        return Err(Error::Dimension("expected a (2N+2)x(2N+2) matrix".into()));
    }
    let n = (dim - 2) / 2;
    let k = j.field();
    let form = FormDescriptor::h(k, dim)?;
    let shape_ok = match case {
        GammaCase::Gamma => (0..dim).all(|r| (0..dim).all(|c| r == c || (r == 0 && c > 0) || (c == dim - 1 && r > 0) || j.get(r, c).is_zero())),
        GammaCase::GammaPrime => (0..dim).all(|r| (0..dim).all(|c| r == c || (c == 0 && r > 0) || (r == dim - 1 && c < dim - 1) || j.get(r, c).is_zero())),
    };
    if !shape_ok || !(0..dim).all(|i| j.get(i, i).agrees(&LSeries::one(k))) {
        return Err(Error::Dimension("matrix does not have the unipotent block shape".into()));
    }
    if !form.preserves(j, 2)? {
        return Ok(false);
    }
    match case {
        GammaCase::Gamma => {
            let z = j.get(0, dim - 1);
            let b_ok = (1..dim - 1).all(|c| j.get(0, c).val_bound() >= 0);
            Ok(z.val().ok() == Some(-1) && b_ok)
        }
        GammaCase::GammaPrime => {
            let u = j.get(dim - 1, 0);
            let r1 = structure::gl1_lattices(n)?.r1_1;
            let h_ok = (1..dim - 1).all(|c| j.get(dim - 1, c).val_bound() >= r1[c - 1]);
            Ok(u.is_unit() && h_ok)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::ResidueField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k(p: u32) -> Field {
        ResidueField::prime(p).unwrap()
    }

    #[test]
    fn beta_examples() {
        let f = k(5);
        let b1 = beta_matrix(&f, 1).unwrap();
        let expected = MatLS::from_monomials(&f, 2, 2, |i, j| match (i, j) {
            (0, 1) => Some((1, -1)),
            (1, 0) => Some((-1, 0)),
            _ => None,
        });
        assert_eq!(b1, expected);
        for n in 1..=3 {
            let b = beta_matrix(&f, n).unwrap();
            let pw = b.pow(2 * n as u32).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let target = MatLS::scalar(&f, 2 * n, &LSeries::monomial(&f, f.from_int(sign), -1));
            assert_eq!(pw, target);
            let form = FormDescriptor::h(&f, 2 * n).unwrap();
            assert_eq!(form.adjoint(&b).unwrap(), -&b);
            assert_eq!(lattices::standard_chain_2n(n).unwrap().val_wrt(&b).unwrap(), -2);
        }
    }

    #[test]
    fn adjoint_is_an_involution_matching_the_form() {
        let f = k(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=2 {
            let form = FormDescriptor::h(&f, 2 * n).unwrap();
            let m = MatLS::from_fn(&f, 2 * n, 2 * n, |_, _| LSeries::random(&f, &mut rng, -1, 3, crate::localfield::EXACT));
            let am = form.adjoint(&m).unwrap();
            assert_eq!(form.adjoint(&am).unwrap(), m);
            // h(Mx, y) = h(x, ᵃM y) on basis vectors: (M e_i)ᵗ G e_j = e_iᵗ G ᵃM e_j.
            let lhs = m.transpose().try_mul(form.gram()).unwrap();
            let rhs = form.gram().try_mul(&am).unwrap();
            assert_eq!(lhs, rhs);
            let one = MatLS::identity(&f, 2 * n);
            assert_eq!(form.adjoint(&one).unwrap(), one);
        }
    }

    #[test]
    fn block_adjoint_rule() {
        let f = k(5);
        let n = 2;
        let form = FormDescriptor::h(&f, 2 * n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = MatLS::from_fn(&f, 2 * n, 2 * n, |_, _| LSeries::random(&f, &mut rng, 0, 2, crate::localfield::EXACT));
        let (a, b) = (m.block(0, 0, n, n), m.block(0, n, n, n));
        let (c, d) = (m.block(n, 0, n, n), m.block(n, n, n, n));
        let expected = MatLS::from_blocks(&[
            vec![d.anti_transpose(), -&b.anti_transpose()],
            vec![-&c.anti_transpose(), a.anti_transpose()],
        ])
        .unwrap();
        assert_eq!(form.adjoint(&m).unwrap(), expected);
    }

    #[test]
    fn bold_adjoint_of_upper_unipotent() {
        let f = k(5);
        let n = 1;
        let v = FormDescriptor::h(&f, 2 * n).unwrap();
        let bold = FormDescriptor::bold(&f, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut r = || MatLS::from_fn(&f, 2, 2, |_, _| LSeries::random(&f, &mut rng, 0, 2, crate::localfield::EXACT));
        let (x, y, z) = (r(), r(), r());
        let u = upper_unipotent(&x, &z, &y).unwrap();
        let expected = upper_unipotent(&v.adjoint(&y).unwrap(), &v.adjoint(&z).unwrap(), &v.adjoint(&x).unwrap()).unwrap();
        assert_eq!(bold.adjoint(&u).unwrap(), expected);
    }

    #[test]
    fn weyl_elements() {
        let f = k(5);
        for n in 1..=2 {
            let (t0, t1) = weyl_gl1(&f, n);
            let h = FormDescriptor::h(&f, 2 * n + 2).unwrap();
            assert!(h.preserves(&t0, 2).unwrap() && h.preserves(&t1, 2).unwrap());
            let t = LSeries::uniformizer(&f);
            let mut diag = vec![LSeries::one(&f); 2 * n + 2];
            diag[0] = t.clone();
            diag[2 * n + 1] = t.inv().unwrap();
            assert_eq!(&t0 * &t1, MatLS::diag(&f, &diag));

            let (w0, w1) = weyl_gl2n(&f, n).unwrap();
            let bold = FormDescriptor::bold(&f, n).unwrap();
            assert!(bold.preserves(&w0, 2).unwrap() && bold.preserves(&w1, 2).unwrap());
            let beta = beta_matrix(&f, n).unwrap();
            let i = MatLS::identity(&f, 2 * n);
            let z = MatLS::zeros(&f, 2 * n, 2 * n);
            let expected = MatLS::from_blocks(&[
                vec![-&beta.inv().unwrap(), z.clone(), z.clone()],
                vec![z.clone(), i, z.clone()],
                vec![z.clone(), z, beta],
            ])
            .unwrap();
            assert_eq!(&w0 * &w1, expected);
        }
    }

    #[test]
    fn identity_is_in_i2_and_beta_is_not_in_the_group_filtration() {
        let f = k(3);
        let s = SimpleStratum::new(&f, 2).unwrap();
        assert!(s.in_i(&MatLS::identity(&f, 4), 2).unwrap());
        assert!(!s.in_i(s.beta(), 0).unwrap());
        let mut x = MatLS::identity(&f, 4);
        x.set(0, 1, LSeries::one(&f));
        assert!(s.in_i_tilde(&x, 1).unwrap());
    }

    #[test]
    fn psi_beta_examples() {
        let f = k(5);
        let s = SimpleStratum::new(&f, 2).unwrap();
        assert_eq!(s.psi_beta(&MatLS::identity(&f, 4), Fq::ONE).unwrap(), CycNum::one(5).unwrap());
        for u in f.units() {
            let x = s.coordinate_element(1, u).unwrap();
            assert_eq!(x.get(0, 1), &LSeries::constant(&f, u));
            let expected = f.psi(f.mul(f.from_int(-2), u), Fq::ONE);
            assert_eq!(s.psi_beta(&x, Fq::ONE).unwrap(), expected);
        }
    }

    #[test]
    fn solver_trivial_case() {
        let f = k(5);
        let v = FormDescriptor::h(&f, 2).unwrap();
        let d = MatLS::zeros(&f, 2, 2);
        let z = MatLS::from_monomials(&f, 2, 2, |i, j| if i == j { Some((if i == 0 { 1 } else { -1 }, 0)) } else { None });
        let s = solve_inf(&v, &d, &z).unwrap();
        assert_eq!(s.m, z);
        assert_eq!(s.g, MatLS::identity(&f, 2));
        assert!(s.b1.is_zero() && s.b2.is_zero() && s.f1.is_zero() && s.f2.is_zero());
        assert_eq!(s.e1, z.inv().unwrap());
        let s = solve_sup(&v, &beta_matrix(&f, 1).unwrap(), &d, &z).unwrap();
        assert_eq!(s.g, MatLS::identity(&f, 2));
        let bad = MatLS::identity(&f, 2);
        assert!(matches!(solve_inf(&v, &d, &bad), Err(Error::Constraint(_))));
    }

    #[test]
    fn solvers_reconstruct_random_instances() {
        let f = k(3);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=2 {
            let v = FormDescriptor::h(&f, 2 * n).unwrap();
            let beta = beta_matrix(&f, n).unwrap();
            for _ in 0..5 {
                let (d, z) = random_instance(&v, &mut rng, 16).unwrap();
                let h = -&v.adjoint(&d).unwrap();
                let s = solve_inf(&v, &d, &z).unwrap();
                assert!(reconstruct_inf(&v, &s).unwrap().agrees(&lower_unipotent(&d, &z, &h).unwrap()));
                assert!(v.preserves(&s.g, 2).unwrap());
                let s = solve_sup(&v, &beta, &d, &z).unwrap();
                assert!(reconstruct_sup(&v, &s).unwrap().agrees(&upper_unipotent(&h, &z, &d).unwrap()));
                assert!(v.preserves(&s.g, 2).unwrap());
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let f = k(3);
        let n = 1;
        let zero = vec![LSeries::zero(&f); 2 * n];
        let z = LSeries::monomial(&f, Fq::ONE, -1);
        let j = gl1_upper(&zero, &zero, &z);
        assert!(gamma_membership(GammaCase::Gamma, &j).unwrap());
        assert!(gl1_relations(&zero, &zero).unwrap());
    }
}
