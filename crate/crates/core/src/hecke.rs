//! Character sums for the Hecke coefficients b₀, b₁ and the bookkeeping that turns
//! them into normalized generators and self-dual reducibility points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{CycNum, FourthRoot, RayClass};
use crate::lattices::{self, ValMatrix, FORBIDDEN};
use crate::localfield::LSeries;
use crate::residue::{Field, Fq, Sign};
use crate::sympgroups::{FormDescriptor, MatLS, SimpleStratum};

/// Default cap on the number of summands in one enumeration.
pub const TERM_BUDGET: u128 = 100_000_000;

/// Which character plays the role of δ in the GL(2N) sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaKind {
    Quadratic,
    Trivial,
}

fn delta_of(k: &Field, kind: DeltaKind, x: Fq) -> i64 {
    match kind {
        DeltaKind::Quadratic => k.delta(x).expect("unit").to_i64(),
        DeltaKind::Trivial => 1,
    }
}

fn int(p: u32, n: i64) -> CycNum {
    CycNum::from_integer(p, n).expect("p is an odd prime")
}

fn check_budget(terms: u128, limit: u128) -> Result<()> {
    if terms > limit {
        return Err(Error::BudgetExceeded { terms, limit });
    }
    Ok(())
}

/// Σ_{u ∈ k^×} δ(−u) Σ_{x ∈ k} ψ^a(s·u⁻¹x²), for s = ±1.
fn gl1_sum(k: &Field, a: Fq, s: i64) -> CycNum {
    let minus = k.from_int(-1);
    let sgn = k.from_int(s);
    let mut acc = k.counts();
    for u in k.units() {
        let w = k.delta(k.mul(minus, u)).expect("unit").to_i64();
        let c = k.mul(sgn, k.inv(u).expect("unit"));
        for x in k.elements() {
            acc.add(k.psi_exponent(k.mul(c, k.mul(x, x)), a), w);
        }
    }
    acc.into_cyc()
}

/// b₁ in the GL(1) case: Σ_u δ(−u) Σ_x ψ(u⁻¹x²).
pub fn b1_gl1(k: &Field, a: Fq) -> CycNum {
    gl1_sum(k, a, 1)
}

/// b₀ in the GL(1) case: Σ_u δ(−u) Σ_x ψ(−u⁻¹x²).
pub fn b0_gl1(k: &Field, a: Fq) -> CycNum {
    gl1_sum(k, a, -1)
}

/// (q − 1)·δ(−1)·G(δ, ψ^a).
pub fn b1_gl1_closed(k: &Field, a: Fq) -> CycNum {
    k.gauss_sum(a).scale(&BigRational::from_integer(BigInt::from((k.q() as i64 - 1) * k.delta_minus_one().to_i64())))
}

/// (q − 1)·G(δ, ψ^a).
pub fn b0_gl1_closed(k: &Field, a: Fq) -> CycNum {
    k.gauss_sum(a).scale(&BigRational::from_integer(BigInt::from(k.q() as i64 - 1)))
}

/// b₀ in the GL(2N) case: Σ over (a, u) ∈ (k^×)² with 2a + u² = 0 of δ(a)·χ(−1).
pub fn b0_gl2n(k: &Field, chi_m1: Sign) -> CycNum {
    let two = k.from_int(2);
    let mut total = 0i64;
    for a in k.units() {
        for u in k.units() {
            if k.add(k.mul(two, a), k.mul(u, u)) == Fq::ZERO {
                total += k.delta(a).expect("unit").to_i64() * chi_m1.to_i64();
            }
        }
    }
    int(k.p(), total)
}

/// (q − 1)·χ(−1)·δ(−2).
pub fn b0_gl2n_closed(k: &Field, chi_m1: Sign) -> CycNum {
    let d = k.delta(k.from_int(-2)).expect("q is odd");
    int(k.p(), (k.q() as i64 - 1) * (chi_m1 * d).to_i64())
}

/// The quadratic form in the exponent of the full b₁ sum:
/// d_{2N}² + d_N² + 2Σ_{j<N} d_j d_{2N−j} − 2Σ_{j≤N} d_j d_{2N+1−j} (1-based indices).
pub fn b1_gl2n_form(k: &Field, d: &[Fq]) -> Fq {
    let m = d.len();
    let n = m / 2;
    let two = k.from_int(2);
    let at = |i: usize| d[i - 1];
    let mut s = k.add(k.mul(at(m), at(m)), k.mul(at(n), at(n)));
    for j in 1..n {
        s = k.add(s, k.mul(two, k.mul(at(j), at(m - j))));
    }
    for j in 1..=n {
        s = k.sub(s, k.mul(two, k.mul(at(j), at(m + 1 - j))));
    }
    s
}

/// Number of summands of the full b₁ sum.
pub fn b1_gl2n_terms(q: u32, n: usize) -> u128 {
    (q as u128).pow(2 * n as u32) * (q as u128 - 1)
}

/// Σ_{d ∈ k^{2N}, z ∈ k^×} δ(z)ψ^a(z⁻¹Q(d)) by direct enumeration, split over z.
pub fn b1_gl2n_full(k: &Field, n: usize, kind: DeltaKind, a: Fq, budget: u128) -> Result<CycNum> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    check_budget(b1_gl2n_terms(k.q(), n), budget)?;
    let elems: Vec<Fq> = k.elements().collect();
    let q = elems.len();
    let len = 2 * n;
    let units: Vec<Fq> = k.units().collect();
    let parts: Vec<_> = units
        .par_iter()
        .map(|&z| {
            let w = delta_of(k, kind, z);
            let zi = k.inv(z).expect("unit");
            let mut acc = k.counts();
            let mut idx = vec![0usize; len];
            let mut d = vec![elems[0]; len];
            loop {
                acc.add(k.psi_exponent(k.mul(zi, b1_gl2n_form(k, &d)), a), w);
                // Odometer over k^{2N}.
                let mut pos = 0;
                loop {
                    if pos == len {
                        return acc;
                    }
                    idx[pos] += 1;
                    if idx[pos] < q {
                        d[pos] = elems[idx[pos]];
                        break;
                    }
                    idx[pos] = 0;
                    d[pos] = elems[0];
                    pos += 1;
                }
            }
        })
        .collect();
    let mut acc = k.counts();
    for p in &parts {
        acc = acc.merge(p);
    }
    Ok(acc.into_cyc())
}

/// The reduced sum Σ_{d ∈ k, z ∈ k^×} δ(z)ψ^a(z⁻¹d²).
pub fn b1_gl2n_reduced(k: &Field, kind: DeltaKind, a: Fq) -> CycNum {
    let mut acc = k.counts();
    for z in k.units() {
        let w = delta_of(k, kind, z);
        let zi = k.inv(z).expect("unit");
        for d in k.elements() {
            acc.add(k.psi_exponent(k.mul(zi, k.mul(d, d)), a), w);
        }
    }
    acc.into_cyc()
}

/// Dimension of the radical of Q on k^{2N}, by Gaussian elimination of its Gram matrix.
pub fn b1_gl2n_radical_dim(k: &Field, n: usize) -> usize {
    let m = 2 * n;
    // Gram matrix via polarization: B(e_i, e_j) = Q(e_i + e_j) − Q(e_i) − Q(e_j).
    let basis = |i: usize| (0..m).map(|j| if i == j { Fq::ONE } else { Fq::ZERO }).collect::<Vec<_>>();
    let q_of = |v: &[Fq]| b1_gl2n_form(k, v);
    let mut g: Vec<Vec<Fq>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let s: Vec<Fq> = basis(i).iter().zip(basis(j)).map(|(x, y)| k.add(*x, y)).collect();
                    if i == j {
                        k.add(q_of(&basis(i)), q_of(&basis(i)))
                    } else {
                        k.sub(k.sub(q_of(&s), q_of(&basis(i))), q_of(&basis(j)))
                    }
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..m).find(|&r| !g[r][col].is_zero()) else { continue };
        g.swap(rank, piv);
        let inv = k.inv(g[rank][col]).expect("nonzero");
        for r in 0..m {
            if r != rank && !g[r][col].is_zero() {
                let f = k.mul(g[r][col], inv);
                let pivot = g[rank].clone();
                for (x, &y) in g[r].iter_mut().zip(&pivot) {
                    *x = k.sub(*x, k.mul(f, y));
                }
            }
        }
        rank += 1;
    }
    m - rank
}

/// The exact constant relating full and reduced sums: the full sum equals q^N times the reduced one.
pub fn b1_gl2n_constant(q: u32, n: usize) -> BigInt {
    BigInt::from(q).pow(n as u32)
}

/// The constant q^{2N−1} stated for the same reduction.
pub fn b1_gl2n_stated_constant(q: u32, n: usize) -> BigInt {
    BigInt::from(q).pow(2 * n as u32 - 1)
}

/// Both sides of the two trace identities for a diagonal D, closed form against matrix arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceIdentities {
    /// 2(d₁d_{2N} + ⋯ + d_N d_{N+1}).
    pub adjoint_closed: Fq,
    /// tr(ᵃD·D) from the matrices.
    pub adjoint_matrix: Fq,
    /// d_{2N}² + d_N² + 2(d₁d_{2N−1} + ⋯ + d_{N−1}d_{N+1}).
    pub shifted_closed: Fq,
    /// tr(ϖ_E⁻¹·D·ϖ_E·ᵃD) with ϖ_E = β⁻¹.
    pub shifted_matrix: Fq,
}

impl TraceIdentities {
    pub fn holds(&self) -> bool {
        self.adjoint_closed == self.adjoint_matrix && self.shifted_closed == self.shifted_matrix
    }
}

pub fn trace_identities(k: &Field, d: &[Fq]) -> Result<TraceIdentities> {
    let m = d.len();
    if m == 0 || m % 2 == 1 {
        return Err(Error::Dimension("D must have even positive size".into()));
    }
    let n = m / 2;
    let two = k.from_int(2);
    let at = |i: usize| d[i - 1];
    let adjoint_closed = (1..=n).fold(Fq::ZERO, |s, j| k.add(s, k.mul(two, k.mul(at(j), at(m + 1 - j)))));
    let shifted_closed = (1..n).fold(k.add(k.mul(at(m), at(m)), k.mul(at(n), at(n))), |s, j| k.add(s, k.mul(two, k.mul(at(j), at(m - j)))));

    let form = FormDescriptor::h(k, m)?;
    let dm = MatLS::diag(k, &d.iter().map(|&x| LSeries::constant(k, x)).collect::<Vec<_>>());
    let ad = form.adjoint(&dm)?;
    let beta = crate::sympgroups::beta_matrix(k, n)?;
    let shifted = beta.try_mul(&dm)?.try_mul(&beta.inv()?)?.try_mul(&ad)?;
    let residue = |x: &MatLS| -> Result<Fq> { x.trace()?.residue_at(0) };
    Ok(TraceIdentities {
        adjoint_closed,
        adjoint_matrix: residue(&ad.try_mul(&dm)?)?,
        shifted_closed,
        shifted_matrix: residue(&shifted)?,
    })
}

/// Quadratic relation T² = bT + c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRelation {
    pub b: BigRational,
    pub c: BigRational,
}

impl QuadRelation {
    /// The normalized form (T + 1)(T − q^r) = 0.
    pub fn normalized(q: u32, r: u32) -> Self {
        let qr = BigRational::from_integer(BigInt::from(q).pow(r));
        QuadRelation { b: &qr - BigRational::one(), c: qr }
    }

    pub fn satisfied_by(&self, t: &BigRational) -> bool {
        t * t == &self.b * t + &self.c
    }

    /// The roots −1 and q^r when the relation is normalized.
    pub fn roots(&self) -> Option<(BigRational, BigRational)> {
        let m1 = -BigRational::one();
        if !self.satisfied_by(&m1) {
            return None;
        }
        // Product of roots is −c.
        Some((m1, self.c.clone()))
    }

    /// The r with root quotient −q^r, if c is a power of q.
    pub fn exponent(&self, q: u32) -> Option<u32> {
        let (_, big) = self.roots()?;
        (0..64).find(|&r| BigRational::from_integer(BigInt::from(q).pow(r)) == big)
    }
}

/// Values of the two generators at their Weyl representatives, up to positive scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorPair {
    pub t0: RayClass,
    pub t1: RayClass,
    pub r0: u32,
    pub r1: u32,
}

impl GeneratorPair {
    pub fn t0_direction(&self) -> Result<FourthRoot> {
        self.t0.direction()
    }

    pub fn t1_direction(&self) -> Result<FourthRoot> {
        self.t1.direction()
    }

    pub fn relations(&self, q: u32) -> (QuadRelation, QuadRelation) {
        (QuadRelation::normalized(q, self.r0), QuadRelation::normalized(q, self.r1))
    }
}

/// GL(1) case: T₁(t₁) = ξ(δ, ψ^a), T₀(t₀) = δ(−1)ξ(δ, ψ^a), both with r = 1.
pub fn gl1_generator_norms(k: &Field, a: Fq) -> Result<GeneratorPair> {
    let xi = k.xi(a)?;
    let p = k.p();
    Ok(GeneratorPair {
        t0: RayClass::from_fourth_root(p, k.delta_minus_one() * xi)?,
        t1: RayClass::from_fourth_root(p, xi)?,
        r0: 1,
        r1: 1,
    })
}

/// GL(2N) case: T₀(w₀) = χ(−1)δ(−2), T₁(w₁) = ξ(δ, ψ^a)⁻¹.
pub fn gl2n_generator_norms(k: &Field, chi_m1: Sign, kind: DeltaKind, a: Fq) -> Result<GeneratorPair> {
    if kind == DeltaKind::Trivial {
        return Err(Error::NoReducibility("b1 vanishes for trivial delta; the roots have quotient -1".into()));
    }
    let p = k.p();
    let d = k.delta(k.from_int(-2))?;
    Ok(GeneratorPair {
        t0: RayClass::from_fourth_root(p, (chi_m1 * d).as_fourth_root())?,
        t1: RayClass::from_fourth_root(p, k.xi(a)?.inv())?,
        r0: 1,
        r1: 1,
    })
}

/// Ray classes of c₀ = |Ω₀|·T₀(w₀)² and c₁ = |Ω₁|·δ(−1)·T₁(w₁)², which must be positive.
pub fn c_signs(k: &Field, pair: &GeneratorPair, gl1: bool) -> Result<(bool, bool)> {
    let dm1 = int(k.p(), k.delta_minus_one().to_i64());
    let sq = |t: &RayClass| t.representative().try_mul(t.representative());
    let (c0, c1) = if gl1 {
        (sq(&pair.t0)?.try_mul(&dm1)?, sq(&pair.t1)?.try_mul(&dm1)?)
    } else {
        (sq(&pair.t0)?, sq(&pair.t1)?.try_mul(&dm1)?)
    };
    Ok((c0.is_positive_real(), c1.is_positive_real()))
}

/// {1, −q^{r0}, −q^{r1}, q^{r0+r1}}: the possible values at Ψ.
pub fn four_values(r0: u32, r1: u32, q: u32) -> Vec<BigRational> {
    let pw = |r: u32| BigRational::from_integer(BigInt::from(q).pow(r));
    vec![BigRational::one(), -pw(r0), -pw(r1), pw(r0 + r1)]
}

/// (s_a, s_b) = ((r0 + r1)/2v, |r0 − r1|/2v).
pub fn reducibility_exponents(r0: u32, r1: u32, v: u32) -> Result<(BigRational, BigRational)> {
    if v == 0 {
        return Err(Error::InvalidParameter("v must be at least 1".into()));
    }
    let den = BigInt::from(2 * v);
    let sa = BigRational::new(BigInt::from(r0 + r1), den.clone());
    let sb = BigRational::new(BigInt::from((r0 as i64 - r1 as i64).abs()), den);
    Ok((sa, sb))
}

/// val(det ϖ_E) for ϖ_E = β⁻¹, by matrix arithmetic.
pub fn det_valuation_of_uniformizer(k: &Field, n: usize) -> Result<i64> {
    let s = SimpleStratum::new(k, n)?;
    s.beta_inv().det()?.val()
}

/// The two self-dual unramified points and whether they are indistinguishable.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfDual {
    pub lambda_a: RayClass,
    pub lambda_b: RayClass,
    pub degenerate: bool,
}

/// λ_a(ϖ_E) = T₀(s₀)T₁(s₁) carries the highest reducibility value; λ_b = −λ_a.
pub fn select_selfdual(pair: &GeneratorPair) -> Result<SelfDual> {
    let lambda_a = pair.t0.try_mul(&pair.t1)?;
    let lambda_b = RayClass::new(-lambda_a.representative())?;
    Ok(SelfDual { lambda_a, lambda_b, degenerate: pair.r0 == 0 || pair.r1 == 0 })
}

/// The value after twisting by an unramified χ: multiply by χ(Π_{J_M})⁻¹.
pub fn twist_value(zeta: &RayClass, chi_at_pi: &CycNum) -> Result<RayClass> {
    if chi_at_pi.is_zero() {
        return Err(Error::Zero);
    }
    RayClass::new(zeta.representative().try_div(chi_at_pi)?)
}

/// Bookkeeping of Ψ(Π_{J_M}) through twists.
#[derive(Clone, Debug)]
pub struct MethodState {
    pub psi_norm: RayClass,
}

impl MethodState {
    pub fn twisted(&self, chi_at_pi: &CycNum) -> Result<MethodState> {
        Ok(MethodState { psi_norm: twist_value(&self.psi_norm, chi_at_pi)? })
    }
}

/// Outcome of the residue-level Γ-sum for b₀ in the GL(2N) case.
#[derive(Clone, Debug)]
pub struct GammaSum {
    /// Σ λ_X(d₀(x)) over all (Z, D) in the model.
    pub total: CycNum,
    /// Number of (Z, D) over each admissible (a, u); `None` if it varies.
    pub fibre: Option<u64>,
    /// Number of admissible (a, u).
    pub base: u64,
}

/// Coefficient slots of 𝔄_0/𝔄_3 for Λ_{2N}: (row, col, exponent).
fn slots(n: usize) -> Result<Vec<(usize, usize, i64)>> {
    let l = lattices::standard_chain_2n(n)?;
    let (lo, hi): (ValMatrix, ValMatrix) = (l.order_filtration(0), l.order_filtration(3));
    let d = 2 * n;
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if lo.get(i, j) != FORBIDDEN {
                for e in lo.get(i, j)..hi.get(i, j) {
                    out.push((i, j, e));
                }
            }
        }
    }
    Ok(out)
}

/// Enumerate Z, D ∈ 𝔄_0/𝔄_3 with Z, D ∈ J̃_W and Z + ᵃZ + ᵃDD ∈ 𝔄_3, and sum
/// δ(a)·ψ_{2β}(a⁻¹Z)·χ(−1)·ψ_β(DZ⁻¹ᵃZD⁻¹), where a is the scalar residue of Z.
pub fn gamma_sum_b0(k: &Field, n: usize, chi_m1: Sign, budget: u128) -> Result<GammaSum> {
    let sl = slots(n)?;
    let per = (k.q() as u128).pow(sl.len() as u32);
    check_budget(per * per, budget)?;
    let d = 2 * n;
    let l = lattices::standard_chain_2n(n)?;
    let a3 = l.order_filtration(3);
    let form = FormDescriptor::h(k, d)?;
    let stratum = SimpleStratum::new(k, n)?;
    let elems: Vec<Fq> = k.elements().collect();
    let q = elems.len() as u128;
    let build = |mut idx: u128| -> MatLS {
        let mut m = MatLS::zeros(k, d, d);
        for &(i, j, e) in &sl {
            let c = elems[(idx % q) as usize];
            idx /= q;
            let cur = m.get(i, j).clone();
            m.set(i, j, cur.try_add(&LSeries::monomial(k, c, e)).expect("same field"));
        }
        m
    };
    // Elements of J̃_W = 𝔬^× + 𝔄_1: residue scalar a ≠ 0 on the diagonal.
    let scalar_unit = |m: &MatLS| -> Option<Fq> {
        let b1 = l.order_filtration(1);
        let a = m.get(0, 0).residue_at(0).ok()?;
        if a.is_zero() {
            return None;
        }
        let shifted = m.try_sub(&MatLS::scalar(k, d, &LSeries::constant(k, a))).ok()?;
        b1.admits(&shifted).ok()?.then_some(a)
    };
    let units: Vec<(MatLS, Fq)> = (0..per).filter_map(|i| {
        let m = build(i);
        scalar_unit(&m).map(|a| (m, a))
    }).collect();
    let in_a3 = |m: &MatLS| a3.admits(m).unwrap_or(false);
    let two = k.from_int(2);
    let results: Vec<_> = units
        .par_iter()
        .map(|(z, a)| -> Result<Vec<(Fq, Fq, u32)>> {
            let mut out = Vec::new();
            let az = form.adjoint(z)?;
            let zi = z.inv()?;
            let ai = LSeries::constant(k, k.inv(*a)?);
            // ψ_{2β}(a⁻¹Z) = ψ(2·res tr(β(a⁻¹Z − 1))).
            let e_w = k.mul(two, stratum.trace_residue(&z.scale(&ai))?);
            for (dm, u) in &units {
                let c = z.try_add(&az)?.try_add(&form.adjoint(dm)?.try_mul(dm)?)?;
                if !in_a3(&c) {
                    continue;
                }
                // g = −DZ⁻¹ᵃZD⁻¹; λ_V(g) = χ(−1)ψ_β(−g).
                let mg = dm.try_mul(&zi)?.try_mul(&az)?.try_mul(&dm.inv()?)?;
                let e_v = stratum.trace_residue(&mg)?;
                out.push((*a, *u, k.psi_exponent(k.add(e_w, e_v), Fq::ONE)));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = k.counts();
    let mut fibres = std::collections::BTreeMap::new();
    for (a, u, e) in results.into_iter().flatten() {
        acc.add(e, k.delta(a)?.to_i64() * chi_m1.to_i64());
        *fibres.entry((a.0, u.0)).or_insert(0u64) += 1;
    }
    let mut sizes: Vec<u64> = fibres.values().copied().collect();
    sizes.dedup();
    let base = fibres.len() as u64;
    let admissible = fibres.keys().all(|&(a, u)| k.add(k.mul(two, Fq(a)), k.mul(Fq(u), Fq(u))).is_zero());
    let fibre = (sizes.len() == 1 && admissible).then(|| sizes[0]);
    Ok(GammaSum { total: acc.into_cyc(), fibre, base })
}

/// Positive rational r with a = r·b, if one exists.
pub fn positive_ratio(a: &CycNum, b: &CycNum) -> Option<BigRational> {
    let r = a.try_div(b).ok()?.as_rational()?;
    r.is_positive().then_some(r)
}

/// Whether `value` is q^N·(q − 1)·G exactly for quadratic δ, or zero for trivial δ.
pub fn b1_gl2n_matches(k: &Field, kind: DeltaKind, a: Fq, value: &CycNum, constant: &BigInt) -> bool {
    match kind {
        DeltaKind::Trivial => value.is_zero(),
        DeltaKind::Quadratic => {
            let expected = k.gauss_sum(a).scale(&BigRational::from_integer(constant * BigInt::from(k.q() as i64 - 1)));
            *value == expected
        }
    }
}
