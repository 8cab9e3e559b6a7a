//! Affine generic characters of I(1)/I(2) ≅ k^{N+1}, the torus action on them,
//! and the orbit count behind the 4(q − 1) simple cuspidals of Sp(2N).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::residue::{Field, Fq, Sign};

/// Residue parameters (ᾱ_1, …, ᾱ_N; ᾱ'_{2N}), with ᾱ'_{2N} the residue of ϖ·α_{2N}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffGenChar {
    alpha: Vec<Fq>,
    alpha_2n: Fq,
}

impl AffGenChar {
    pub fn new(alpha: Vec<Fq>, alpha_2n: Fq) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if alpha.iter().any(|a| a.is_zero()) || alpha_2n.is_zero() {
            return Err(Error::InvalidParameter("affine generic parameters must be units".into()));
        }
        Ok(AffGenChar { alpha, alpha_2n })
    }

    /// The parameters of ψ_β: (−2, …, −2, −1; 1).
    pub fn from_beta(k: &Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        let mut alpha = vec![k.from_int(-2); n];
        alpha[n - 1] = k.from_int(-1);
        Self::new(alpha, Fq::ONE)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Fq] {
        &self.alpha
    }

    pub fn alpha_2n(&self) -> Fq {
        self.alpha_2n
    }

    /// Exponent of ψ at the point with affine coordinates `x` (x_{1,2}, …, x_{N,N+1}, ϖ⁻¹x_{2N,1}).
    pub fn exponent_at(&self, k: &Field, x: &[Fq]) -> Result<u32> {
        if x.len() != self.n() + 1 {
            return Err(Error::Dimension(format!("{} coordinates for N={}", x.len(), self.n())));
        }
        let s = self.alpha.iter().chain(std::iter::once(&self.alpha_2n)).zip(x).fold(Fq::ZERO, |acc, (a, v)| k.add(acc, k.mul(*a, *v)));
        Ok(k.psi_exponent(s, Fq::ONE))
    }

    /// Conjugation by diag(d_1, …, d_N, d_N⁻¹, …, d_1⁻¹).
    pub fn conj_by_torus(&self, k: &Field, d: &[Fq]) -> Result<Self> {
        let n = self.n();
        if d.len() != n || d.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidParameter("torus element needs N units".into()));
        }
        let mut alpha = self.alpha.clone();
        for i in 0..n - 1 {
            alpha[i] = k.mul(alpha[i], k.div(d[i], d[i + 1])?);
        }
        alpha[n - 1] = k.mul(alpha[n - 1], k.mul(d[n - 1], d[n - 1]));
        let alpha_2n = k.div(self.alpha_2n, k.mul(d[0], d[0]))?;
        Ok(AffGenChar { alpha, alpha_2n })
    }

    /// The invariants (i), (ii), (iii): square classes of α_N and ᾱ'_{2N}, and
    /// (α_1⋯α_{N−1})²α_Nᾱ'_{2N}.
    pub fn invariants(&self, k: &Field) -> (Sign, Sign, Fq) {
        let n = self.n();
        let head = self.alpha[..n - 1].iter().fold(Fq::ONE, |acc, a| k.mul(acc, *a));
        let prod = k.mul(k.mul(head, head), k.mul(self.alpha[n - 1], self.alpha_2n));
        (k.delta(self.alpha[n - 1]).expect("unit"), k.delta(self.alpha_2n).expect("unit"), prod)
    }

    /// Multiply α_N by ε and ᾱ'_{2N} by ε⁻¹: conjugation by the similitude d_ε.
    pub fn gsp_twist(&self, k: &Field, eps: Fq) -> Result<Self> {
        let mut out = self.clone();
        let n = self.n();
        out.alpha[n - 1] = k.mul(out.alpha[n - 1], eps);
        out.alpha_2n = k.div(out.alpha_2n, eps)?;
        Ok(out)
    }

    /// The orbit representative with α_i = −1 (i < N) and α_N ∈ {−1, −ε}.
    pub fn canonical(&self, k: &Field) -> Self {
        let n = self.n();
        let (sq, _, prod) = self.invariants(k);
        let eps = k.smallest_nonsquare();
        let minus_one = k.from_int(-1);
        let alpha_n = if sq == k.delta(minus_one).expect("unit") { minus_one } else { k.mul(minus_one, eps) };
        let mut alpha = vec![minus_one; n];
        alpha[n - 1] = alpha_n;
        // (−1)^{2(N−1)} α_N ᾱ' = prod.
        let alpha_2n = k.div(prod, alpha_n).expect("unit");
        AffGenChar { alpha, alpha_2n }
    }
}

/// Orbit equality via the invariants (i), (ii), (iii).
pub fn same_orbit(k: &Field, a: &AffGenChar, b: &AffGenChar) -> bool {
    a.n() == b.n() && a.invariants(k) == b.invariants(k)
}

/// Every affine generic character for (q, N), in a fixed order.
pub fn all_chars(k: &Field, n: usize) -> Vec<AffGenChar> {
    let units: Vec<Fq> = k.units().collect();
    let m = units.len();
    let total = m.pow(n as u32 + 1);
    (0..total)
        .map(|mut idx| {
            let mut v = Vec::with_capacity(n + 1);
            for _ in 0..=n {
                v.push(units[idx % m]);
                idx /= m;
            }
            let last = v.pop().unwrap();
            AffGenChar { alpha: v, alpha_2n: last }
        })
        .collect()
}

fn torus(k: &Field, n: usize) -> Vec<Vec<Fq>> {
    all_chars(k, n - 1).into_iter().map(|c| {
        let mut d = c.alpha.clone();
        d.push(c.alpha_2n);
        d
    }).collect()
}

/// Orbit labels by brute force: orbit id of each character of `all_chars`.
pub fn brute_force_orbits(k: &Field, n: usize) -> Result<Vec<usize>> {
    let chars = all_chars(k, n);
    let index: HashMap<&AffGenChar, usize> = chars.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let t = torus(k, n);
    let mut label = vec![usize::MAX; chars.len()];
    let mut next = 0;
    for start in 0..chars.len() {
        if label[start] != usize::MAX {
            continue;
        }
        for d in &t {
            label[index[&chars[start].conj_by_torus(k, d)?]] = next;
        }
        next += 1;
    }
    Ok(label)
}

/// Number of torus orbits, checked against the invariant criteria; equals 2(q − 1).
pub fn orbit_count(k: &Field, n: usize) -> Result<usize> {
    let chars = all_chars(k, n);
    let labels = brute_force_orbits(k, n)?;
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_inv: HashMap<(Sign, Sign, Fq), usize> = HashMap::new();
    for (c, &l) in chars.iter().zip(&labels) {
        let prev = *by_inv.entry(c.invariants(k)).or_insert(l);
        if prev != l {
            return Err(Error::Constraint(format!("invariants merge two orbits at {c:?}")));
        }
    }
    if by_inv.len() != count {
        return Err(Error::Constraint("invariants split an orbit".into()));
    }
    Ok(count)
}

/// Simple cuspidal representations of Sp(2N): two central characters per orbit.
pub fn cuspidal_count(k: &Field, n: usize) -> Result<usize> {
    Ok(2 * orbit_count(k, n)?)
}

/// One canonical representative per orbit, sorted.
pub fn classify(k: &Field, n: usize) -> Vec<AffGenChar> {
    let mut reps: Vec<AffGenChar> = all_chars(k, n).par_iter().map(|c| c.canonical(k)).collect();
    reps.sort_by_key(|c| (c.alpha.iter().map(|a| a.0).collect::<Vec<_>>(), c.alpha_2n.0));
    reps.dedup();
    reps
}
