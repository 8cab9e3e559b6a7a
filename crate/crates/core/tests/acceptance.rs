//! The nine acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line straight to stdout so the verdicts survive output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use cusplab_core::exactnum::{CycNum, FourthRoot, RayClass};
use cusplab_core::genchars::{self, AffGenChar};
use cusplab_core::hecke::{self, DeltaKind, GeneratorPair};
use cusplab_core::jordan::{self, SimpleCuspidalData};
use cusplab_core::lattices::{self, Pairing};
use cusplab_core::localfield::{LSeries, EXACT};
use cusplab_core::residue::{Field, Fq, ResidueField, Sign};
use cusplab_core::sympgroups::{self, structure, FormDescriptor, MatLS, SimpleStratum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn k(p: u32) -> Field {
    ResidueField::prime(p).unwrap()
}

fn int(p: u32, n: i64) -> CycNum {
    CycNum::from_integer(p, n).unwrap()
}

/// Collects failed checks so the verdict line can say what went wrong.
struct Report {
    id: u8,
    name: &'static str,
    limit: Duration,
    start: Instant,
    failures: Vec<String>,
    checks: usize,
}

impl Report {
    fn new(id: u8, name: &'static str, limit_secs: u64) -> Self {
        Report { id, name, limit: Duration::from_secs(limit_secs), start: Instant::now(), failures: Vec::new(), checks: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.limit {
            self.failures.push(format!("runtime {elapsed:.2?} exceeds {:?}", self.limit));
        }
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {} {}: {verdict} ({} checks, {elapsed:.2?})", self.id, self.name, self.checks);
        if let Some(first) = self.failures.first() {
            line.push_str(&format!("; {} failing, first: {first}", self.failures.len()));
        }
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
        assert!(self.failures.is_empty(), "{line}\n{}", self.failures.join("\n"));
    }
}

#[test]
fn criterion_1_gauss_sums() {
    let mut r = Report::new(1, "gauss", 1);
    for p in [3u32, 5, 7, 11, 13] {
        let f = k(p);
        let sign = Sign::minus_one_pow((p as i64 - 1) / 2);
        for a in f.units() {
            let g = f.gauss_sum(a);
            let gg = g.try_mul(&g.conj()).unwrap();
            r.check(gg == int(p, p as i64), || format!("q={p} a={a:?}: G*conj(G) = {gg:?}"));
            let g2 = g.try_mul(&g).unwrap();
            let expected = int(p, sign.to_i64() * p as i64);
            r.check(g2 == expected, || format!("q={p} a={a:?}: G^2 = {g2:?}"));
            let xi = f.xi(a).unwrap();
            r.check(xi.pow(2) == sign.as_fourth_root(), || format!("q={p} a={a:?}: xi = {xi}"));
        }
    }
    r.finish();
}

#[test]
fn criterion_2_zolotarev() {
    let mut r = Report::new(2, "zolotarev", 1);
    let mut fields: Vec<Field> = [3u32, 5, 7, 11, 13, 17, 19, 23].iter().map(|&p| k(p)).collect();
    fields.push(ResidueField::extension(3, &[1, 0, 1]).unwrap());
    for f in &fields {
        for x in f.units() {
            let z = f.zolotarev(x).unwrap();
            let d = f.delta(x).unwrap();
            r.check(z == d, || format!("q={} x={x:?}: signature {z:?}, delta {d:?}", f.q()));
        }
    }
    r.finish();
}

#[test]
fn criterion_3_lattices() {
    let mut r = Report::new(3, "lattice", 5);
    for n in 1..=3usize {
        let ln = n as i64;
        let std = lattices::standard_chain_2n(n).unwrap();
        let odd: Vec<i64> = (1..4 * ln).step_by(2).collect();
        r.check(std.jumps() == odd, || format!("N={n}: jumps of the standard chain {:?}", std.jumps()));

        let duals = [
            ("Lambda_2N", std.clone(), Pairing::antidiagonal(2 * n)),
            ("Lambda_2", lattices::lambda_2(n).unwrap(), Pairing::antidiagonal(2)),
            ("M_0", lattices::big_m0(n).unwrap(), Pairing::antidiagonal(2 * n + 2)),
            ("M_1", lattices::big_m1(n).unwrap(), Pairing::antidiagonal(2 * n + 2)),
            ("Lambda_X", lattices::lambda_x(n).unwrap(), Pairing::antidiagonal(6 * n)),
        ];
        for (name, seq, pairing) in &duals {
            let inv = seq.duality_invariant(pairing).unwrap();
            r.check(inv == Some(1), || format!("N={n}: duality invariant of {name} is {inv:?}"));
        }

        let lx = lattices::lambda_x(n).unwrap();
        r.check(lx.period() == 12 * ln, || format!("N={n}: Lambda_X period {}", lx.period()));
        for (block, residue) in [(0usize, 5i64), (1, 3), (2, 1)] {
            let jumps = lx.jumps_on(2 * n * block..2 * n * (block + 1));
            let ok = !jumps.is_empty() && jumps.iter().all(|t| t.rem_euclid(6) == residue);
            r.check(ok, || format!("N={n}: block {block} jumps {jumps:?}, expected all = {residue} mod 6"));
        }

        r.check(std.order_filtration(1) == std.order_filtration(2), || format!("N={n}: A_1 != A_2 for the standard chain"));
        for t in 1..=3 {
            r.check(lx.order_filtration(2 * t - 1) == lx.order_filtration(2 * t), || format!("N={n}: A_{} != A_{} for Lambda_X", 2 * t - 1, 2 * t));
        }

        let expected = [["A_1", "o_E + A_1", "A_0"], ["A_1", "A_1", "o_E + A_1"], ["p_E + w_E A_1", "A_1", "A_1"]];
        match structure::blocs(n) {
            Ok(b) => {
                for i in 0..3 {
                    for j in 0..3 {
                        let got = b[i][j].label();
                        r.check(got == expected[i][j], || format!("N={n}: block ({i},{j}) is {got}"));
                    }
                }
            }
            Err(e) => r.check(false, || format!("N={n}: blocs failed: {e}")),
        }

        let l = structure::gl1_lattices(n).unwrap();
        r.check(l.row_chain() && l.col_chain(), || format!("N={n}: R/C chain fails: {l:?}"));
        let iw = structure::iwahori_inclusions(n).unwrap();
        r.check(iw.upper_chain && iw.lower_chain, || format!("N={n}: Iwahori inclusions fail"));
    }
    r.finish();
}

#[test]
fn criterion_4_beta() {
    let mut r = Report::new(4, "beta", 5);
    for p in [3u32, 5, 7] {
        let f = k(p);
        for n in 1..=3usize {
            let s = SimpleStratum::new(&f, n).unwrap();
            let beta = s.beta();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let target = MatLS::scalar(&f, 2 * n, &LSeries::monomial(&f, f.from_int(sign), -1));
            r.check(beta.pow(2 * n as u32).unwrap() == target, || format!("q={p} N={n}: beta^2N"));
            r.check(s.form().adjoint(beta).unwrap() == -beta, || format!("q={p} N={n}: adjoint of beta"));
            let v = s.lattice().val_wrt(beta).unwrap();
            r.check(v == -2, || format!("q={p} N={n}: val(beta) = {v}"));

            let reference = AffGenChar::from_beta(&f, n).unwrap();
            for i in 1..=n + 1 {
                for u in f.units() {
                    let x = s.coordinate_element(i, u).unwrap();
                    let got = s.psi_beta_exponent(&x, Fq::ONE).unwrap();
                    let mut coords = vec![Fq::ZERO; n + 1];
                    coords[i - 1] = u;
                    let want = reference.exponent_at(&f, &coords).unwrap();
                    r.check(got == want, || format!("q={p} N={n} coordinate {i} u={u:?}: exponent {got}, expected {want}"));
                }
            }
        }
    }
    r.finish();
}

/// Outcome of one seeded decomposition instance: a list of failed checks.
fn decomposition_instance(p: u32, n: usize, seed: u64) -> Vec<String> {
    let f = k(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = FormDescriptor::h(&f, 2 * n).unwrap();
    let beta = sympgroups::beta_matrix(&f, n).unwrap();
    // Eight periods of the standard chain, the default working window.
    let (d, z) = sympgroups::random_instance(&v, &mut rng, 8 * 4 * n as i64).unwrap();
    let h = -&v.adjoint(&d).unwrap();
    let tag = format!("q={p} N={n} seed={seed}");
    let mut bad = Vec::new();

    let g_closed = (!d.det().unwrap().is_zero()).then(|| {
        let di = d.inv().unwrap();
        -&d.try_mul(&z.inv().unwrap()).unwrap().try_mul(&v.adjoint(&z).unwrap()).unwrap().try_mul(&di).unwrap()
    });

    for (name, solved) in [("inf", sympgroups::solve_inf(&v, &d, &z)), ("sup", sympgroups::solve_sup(&v, &beta, &d, &z))] {
        let s = match solved {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("{tag} {name}: solver error {e}"));
                continue;
            }
        };
        let (rebuilt, original) = if name == "inf" {
            (sympgroups::reconstruct_inf(&v, &s), sympgroups::lower_unipotent(&d, &z, &h))
        } else {
            (sympgroups::reconstruct_sup(&v, &s), sympgroups::upper_unipotent(&h, &z, &d))
        };
        if !rebuilt.unwrap().agrees(&original.unwrap()) {
            bad.push(format!("{tag} {name}: reconstruction differs"));
        }
        // Two inversions eat into the 16 digits; the defect is certified to ϖ².
        match v.preserves(&s.g, 2) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("{tag} {name}: g is not symplectic")),
            Err(e) => bad.push(format!("{tag} {name}: {e}")),
        }
        if let Some(gc) = &g_closed {
            if !s.g.agrees(gc) {
                bad.push(format!("{tag} {name}: g differs from -D Z^-1 aZ D^-1"));
            }
        }
    }
    bad
}

fn random_mat(f: &Field, rng: &mut ChaCha8Rng, dim: usize) -> MatLS {
    MatLS::from_fn(f, dim, dim, |_, _| LSeries::random(f, rng, 0, 3, EXACT))
}

#[test]
fn criterion_5_decomposition() {
    let mut r = Report::new(5, "decomp", 60);
    let cells: Vec<(u32, usize)> = vec![(3, 1), (3, 2), (5, 1), (5, 2)];
    let per_cell = 250u64;
    let jobs: Vec<(u32, usize, u64)> = cells.iter().enumerate().flat_map(|(c, &(p, n))| (0..per_cell).map(move |i| (p, n, 1000 * c as u64 + i))).collect();
    let failures: Vec<String> = jobs.par_iter().flat_map(|&(p, n, seed)| decomposition_instance(p, n, seed)).collect();
    r.checks += jobs.len() * 2;
    for f in failures {
        r.check(false, || f);
    }

    // Unipotent membership: preserves the form exactly when H = −ᵃD and Z + ᵃZ + ᵃD·D = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut seen = [[0usize; 2]; 2];
    for sample in 0..200 {
        let (p, n) = cells[sample % cells.len()];
        let f = k(p);
        let v = FormDescriptor::h(&f, 2 * n).unwrap();
        let bold = FormDescriptor::bold(&f, n).unwrap();
        let (d, mut z) = sympgroups::random_instance(&v, &mut rng, EXACT).unwrap();
        let mut h = -&v.adjoint(&d).unwrap();
        match rng.gen_range(0..3) {
            0 => {}
            1 => h = h.try_add(&random_mat(&f, &mut rng, 2 * n)).unwrap(),
            _ => z = z.try_add(&random_mat(&f, &mut rng, 2 * n)).unwrap(),
        }
        let predicted = h == -&v.adjoint(&d).unwrap() && sympgroups::unipotent_constraint(&v, &d, &z).unwrap().is_zero();
        let upper = sample < 100;
        let m = if upper { sympgroups::upper_unipotent(&h, &z, &d) } else { sympgroups::lower_unipotent(&d, &z, &h) }.unwrap();
        let actual = bold.preserves(&m, 8).unwrap();
        seen[usize::from(upper)][usize::from(predicted)] += 1;
        r.check(actual == predicted, || format!("q={p} N={n} sample {sample}: membership {actual}, criterion {predicted}"));
    }

    // GL(1) unipotents [[1,B,z],[0,I,C],[0,0,1]] ∈ Sp exactly when C = B^τ and BC = 0.
    let mut gl1_seen = [0usize; 2];
    for sample in 0..100 {
        let (p, n) = cells[sample % cells.len()];
        let f = k(p);
        let h = FormDescriptor::h(&f, 2 * n + 2).unwrap();
        let b: Vec<LSeries> = (0..2 * n).map(|_| LSeries::random(&f, &mut rng, 0, 3, EXACT)).collect();
        let c = if rng.gen_bool(0.5) { sympgroups::b_tau(&b) } else { (0..2 * n).map(|_| LSeries::random(&f, &mut rng, 0, 3, EXACT)).collect() };
        let z = LSeries::random(&f, &mut rng, -1, 3, EXACT);
        let predicted = sympgroups::gl1_relations(&b, &c).unwrap();
        let actual = h.preserves(&sympgroups::gl1_upper(&b, &c, &z), 8).unwrap();
        gl1_seen[usize::from(predicted)] += 1;
        r.check(actual == predicted, || format!("q={p} N={n} GL(1) sample {sample}: membership {actual}, criterion {predicted}"));
    }
    r.check(seen.iter().flatten().all(|&c| c > 0) && gl1_seen.iter().all(|&c| c > 0), || format!("samples do not cover both outcomes: {seen:?} {gl1_seen:?}"));
    r.finish();
}

#[test]
fn criterion_6_hecke() {
    let mut r = Report::new(6, "hecke", 60);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [3u32, 5, 7] {
        let f = k(p);
        let q = p as i64;
        let g = f.gauss_sum(Fq::ONE);
        let d = |x: i64| f.delta(f.from_int(x)).unwrap().to_i64();
        let xi = RayClass::from_fourth_root(p, f.xi(Fq::ONE).unwrap()).unwrap();

        let b1 = hecke::b1_gl1(&f, Fq::ONE);
        let want = g.scale(&BigRational::from_integer(((q - 1) * d(-1)).into()));
        r.check(b1 == want, || format!("q={p}: b1_gl1 = {b1:?}"));
        let dg = RayClass::new(g.scale(&BigRational::from_integer(d(-1).into()))).unwrap();
        r.check(RayClass::new(b1.clone()).unwrap() == dg, || format!("q={p}: b1_gl1 is not on the ray of delta(-1)G"));

        let b0 = hecke::b0_gl1(&f, Fq::ONE);
        let want = g.scale(&BigRational::from_integer((q - 1).into()));
        r.check(b0 == want, || format!("q={p}: b0_gl1 = {b0:?}"));
        r.check(RayClass::new(b0).unwrap() == RayClass::new(g.clone()).unwrap(), || format!("q={p}: b0_gl1 is not on the ray of G"));

        for chi in [Sign::Plus, Sign::Minus] {
            let b = hecke::b0_gl2n(&f, chi);
            let unit = chi.to_i64() * d(-2);
            r.check(b == int(p, (q - 1) * unit), || format!("q={p} chi(-1)={chi:?}: b0_gl2n = {b:?}"));
            r.check(RayClass::new(b).unwrap() == RayClass::new(int(p, unit)).unwrap(), || format!("q={p}: b0_gl2n ray"));
        }

        for n in 1..=3usize {
            let full = hecke::b1_gl2n_full(&f, n, DeltaKind::Quadratic, Fq::ONE, hecke::TERM_BUDGET).unwrap();
            let stated = BigInt::from(p).pow(2 * n as u32 - 1) * (q - 1);
            let want = g.scale(&BigRational::from_integer(stated.clone()));
            r.check(full == want, || {
                let ratio = hecke::positive_ratio(&full, &g).map_or("none".to_string(), |x| x.to_string());
                format!("q={p} N={n}: b1_gl2n_full = {ratio}*G, expected {stated}*G")
            });
            r.check(RayClass::new(full).unwrap() == xi, || format!("q={p} N={n}: b1_gl2n_full is not on the ray of xi"));
            let trivial = hecke::b1_gl2n_full(&f, n, DeltaKind::Trivial, Fq::ONE, hecke::TERM_BUDGET).unwrap();
            r.check(trivial.is_zero(), || format!("q={p} N={n}: trivial-delta sum = {trivial:?}"));

            for _ in 0..200 {
                let dv: Vec<Fq> = (0..2 * n).map(|_| f.from_int(rng.gen_range(0..q))).collect();
                let t = hecke::trace_identities(&f, &dv).unwrap();
                r.check(t.holds(), || format!("q={p} N={n} D={dv:?}: {t:?}"));
            }
        }
    }
    r.finish();
}

#[test]
fn criterion_7_classification() {
    let mut r = Report::new(7, "classify", 10);
    for p in [3u32, 5, 7] {
        let f = k(p);
        for n in 1..=2usize {
            let want = 2 * (p as usize - 1);
            match genchars::orbit_count(&f, n) {
                Ok(c) => r.check(c == want, || format!("q={p} N={n}: {c} orbits")),
                Err(e) => r.check(false, || format!("q={p} N={n}: {e}")),
            }
            let c = genchars::cuspidal_count(&f, n).unwrap();
            r.check(c == 2 * want, || format!("q={p} N={n}: {c} cuspidals"));
        }
    }
    let f = k(3);
    for n in 1..=2usize {
        let chars = genchars::all_chars(&f, n);
        let labels = genchars::brute_force_orbits(&f, n).unwrap();
        for (i, a) in chars.iter().enumerate() {
            let (ia, iia, iiia) = a.invariants(&f);
            for (j, b) in chars.iter().enumerate() {
                let same = genchars::same_orbit(&f, a, b);
                r.check(same == (labels[i] == labels[j]), || format!("N={n}: {a:?} vs {b:?}"));
                let (ib, iib, iiib) = b.invariants(&f);
                if iiia == iiib {
                    r.check((ia == ib) == (iia == iib), || format!("N={n}: (iii) does not tie (i) to (ii) at {a:?}, {b:?}"));
                }
            }
        }
    }
    r.finish();
}

#[test]
fn criterion_8_jordan() {
    let mut r = Report::new(8, "jordan", 1);
    let mut combos = std::collections::HashSet::new();
    for p in [3u32, 5, 7] {
        let f = k(p);
        let half = (p as i64 - 1) / 2;
        for n in 1..=3usize {
            for chi in [Sign::Plus, Sign::Minus] {
                let data = SimpleCuspidalData::new(&f, n, chi).unwrap();
                let formula = Sign::minus_one_pow((n as i64 + 1) * half);
                let direct = jordan::epsilon1(&data);
                let via = jordan::epsilon1_via_hecke(&data).unwrap();
                r.check(direct == formula && via == formula, || format!("q={p} N={n}: eps1 {direct:?} / {via:?}, expected {formula:?}"));
                let t2 = jordan::tau_minus_beta_sq(&data).unwrap();
                r.check(t2 == FourthRoot::ONE, || format!("q={p} N={n}: tau(-beta^2) = {t2}"));
                let t2n = jordan::tau_minus_beta_2n(&data).unwrap();
                let want = Sign::minus_one_pow(half).pow(n as i64 + 1).as_fourth_root();
                r.check(t2n == want, || format!("q={p} N={n}: tau(-beta^2N) = {t2n}"));
                let prod = jordan::eps_factor_product(&data).unwrap();
                r.check(prod == chi, || format!("q={p} N={n} chi={chi:?}: epsilon product {prod:?}"));
                combos.insert((chi, p % 4));
                let l = jordan::langlands_descriptor(&data).unwrap();
                r.check(l.norm_check && l.square_check, || format!("q={p} N={n}: descriptor {l:?}"));
            }
        }
    }
    r.check(combos.len() == 4, || format!("only {} (chi(-1), q mod 4) combinations covered", combos.len()));
    r.finish();
}

#[test]
fn criterion_9_method() {
    let mut r = Report::new(9, "method", 1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [3u32, 5, 7] {
        let f = k(p);
        let q = BigRational::from_integer(p.into());
        for n in 1..=3usize {
            let v = hecke::det_valuation_of_uniformizer(&f, n).unwrap();
            r.check(v == 1, || format!("q={p} N={n}: val det = {v}"));
            let pairs = [("GL(1)", hecke::gl1_generator_norms(&f, Fq::ONE).unwrap()), ("GL(2N)", hecke::gl2n_generator_norms(&f, Sign::Plus, DeltaKind::Quadratic, Fq::ONE).unwrap())];
            for (case, pair) in pairs {
                let vals = hecke::four_values(pair.r0, pair.r1, p);
                let want = vec![BigRational::from_integer(1.into()), -q.clone(), -q.clone(), &q * &q];
                r.check(pair.r0 == 1 && pair.r1 == 1 && vals == want, || format!("q={p} N={n} {case}: r = ({}, {}), values {vals:?}", pair.r0, pair.r1));
                let (sa, sb) = hecke::reducibility_exponents(pair.r0, pair.r1, v as u32).unwrap();
                r.check(sa == BigRational::from_integer(1.into()) && sb == BigRational::from_integer(0.into()), || format!("q={p} N={n} {case}: (s_a, s_b) = ({sa}, {sb})"));

                let base = hecke::select_selfdual(&pair).unwrap();
                for _ in 0..10 {
                    let mut scale = || BigRational::new(rng.gen_range(1..1000i64).into(), rng.gen_range(1..1000i64).into());
                    let scaled = GeneratorPair {
                        t0: RayClass::new(pair.t0.representative().scale(&scale())).unwrap(),
                        t1: RayClass::new(pair.t1.representative().scale(&scale())).unwrap(),
                        ..pair.clone()
                    };
                    let s = hecke::select_selfdual(&scaled).unwrap();
                    r.check(s == base, || format!("q={p} N={n} {case}: rescaling moved the self-dual point"));
                }
            }
        }
    }
    r.finish();
}
