use cusplab_core::lattices::{self, LatticeSeq, Pairing, ValMatrix};
use cusplab_core::localfield::{LSeries, EXACT};
use cusplab_core::residue::{Field, ResidueField};
use cusplab_core::sympgroups::{self, structure, MatLS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn k3() -> Field {
    ResidueField::prime(3).unwrap()
}

/// Every sequence the library builds, with the pairing it is self-dual for.
fn constructed(n: usize) -> Vec<(&'static str, LatticeSeq, Pairing)> {
    vec![
        ("Lambda_2N", lattices::standard_chain_2n(n).unwrap(), Pairing::antidiagonal(2 * n)),
        ("Lambda_2", lattices::lambda_2(n).unwrap(), Pairing::antidiagonal(2)),
        ("m_0", lattices::m0(n).unwrap(), Pairing::antidiagonal(2)),
        ("m_1", lattices::m1(n).unwrap(), Pairing::antidiagonal(2)),
        ("M_0", lattices::big_m0(n).unwrap(), Pairing::antidiagonal(2 * n + 2)),
        ("M_1", lattices::big_m1(n).unwrap(), Pairing::antidiagonal(2 * n + 2)),
        ("Lambda", lattices::lambda_gl1(n).unwrap(), Pairing::antidiagonal(2 * n + 2)),
        ("Lambda_X", lattices::lambda_x(n).unwrap(), Pairing::antidiagonal(6 * n)),
    ]
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

#[test]
fn sequences_are_monotone_and_periodic() {
    for n in 1..=3 {
        for (name, seq, _) in constructed(n) {
            let e = seq.period();
            for t in -2 * e..2 * e {
                let (a, b) = (seq.at(t), seq.at(t + 1));
                assert!(a.iter().zip(&b).all(|(x, y)| x <= y), "{name} N={n} not monotone at {t}");
                let shifted: Vec<i64> = a.iter().map(|x| x + 1).collect();
                assert_eq!(seq.at(t + e), shifted, "{name} N={n} period at {t}");
            }
        }
    }
}

#[test]
fn standard_chain_first_period_n1() {
    let l = lattices::standard_chain_2n(1).unwrap();
    let table: Vec<Vec<i64>> = (0..4).map(|t| l.at(t)).collect();
    assert_eq!(table, vec![vec![0, 1], vec![0, 1], vec![1, 1], vec![1, 1]]);
}

#[test]
fn duality_is_an_involution_with_invariant_one() {
    for n in 1..=3 {
        for (name, seq, pairing) in constructed(n) {
            let dual = seq.dual(&pairing).unwrap();
            assert_eq!(dual.dual(&pairing).unwrap(), seq, "{name} N={n}");
            if name == "m_0" || name == "m_1" {
                continue;
            }
            for t in -seq.period()..seq.period() {
                assert_eq!(seq.sharp(t, &pairing).unwrap(), seq.at(1 - t), "{name} N={n} t={t}");
            }
        }
    }
}

#[test]
fn jump_sets() {
    for n in 1..=3usize {
        let e = 4 * n as i64;
        let l2 = lattices::lambda_2(n).unwrap();
        assert_eq!(l2.jumps(), vec![n as i64, 3 * n as i64], "Lambda_2, N={n}");
        // 𝔪_1 jumps once per period; duality invariant 1 pins the class at 2N.
        let m1 = lattices::m1(n).unwrap();
        assert_eq!(m1.jumps(), vec![2 * n as i64], "m_1, N={n}");
        let std = lattices::standard_chain_2n(n).unwrap();
        assert_eq!(std.jumps(), (1..e).step_by(2).collect::<Vec<_>>());
    }
}

#[test]
fn filtration_of_lambda_is_the_halved_filtration_of_sigma() {
    let n = 2;
    let l = lattices::standard_chain_2n(n).unwrap();
    let s = lattices::sigma_chain_2n(n).unwrap();
    for r in -4..=4 {
        assert_eq!(l.order_filtration(r), s.order_filtration(ceil_div(r, 2)), "r={r}");
    }
}

#[test]
fn filtration_shifts_by_one_per_period() {
    for n in 1..=2 {
        for (name, seq, _) in constructed(n) {
            let e = seq.period();
            for r in -3..=3 {
                let plus: ValMatrix = seq.order_filtration(r).shift(1);
                assert_eq!(seq.order_filtration(r + e), plus, "{name} N={n} r={r}");
            }
        }
    }
}

#[test]
fn order_filtrations_are_multiplicative() {
    for n in 1..=3 {
        for (name, seq, _) in constructed(n) {
            for r in -3..=3 {
                for s in -3..=3 {
                    let prod = seq.order_filtration(r).compose(&seq.order_filtration(s));
                    assert!(prod.is_subset_of(&seq.order_filtration(r + s)), "{name} N={n} r={r} s={s}");
                }
            }
        }
    }
}

#[test]
fn tripled_w_block_reads_the_base_chain_at_the_floor() {
    for n in 1..=3usize {
        let base = lattices::standard_chain_2n(n).unwrap();
        let w = lattices::lambda_x(n).unwrap().restrict(0..2 * n);
        let bound = 12 * n as i64;
        for t in -bound..=bound {
            assert_eq!(w.at(t), base.at(t.div_euclid(3)), "N={n} t={t}");
        }
    }
}

#[test]
fn scalar_valuation_is_the_period() {
    let k = k3();
    for n in 1..=3 {
        for (name, seq, _) in constructed(n) {
            let pi = MatLS::scalar(&k, seq.dim(), &LSeries::uniformizer(&k));
            assert_eq!(seq.val_wrt(&pi).unwrap(), seq.period(), "{name} N={n}");
        }
    }
}

#[test]
fn lambda_valuation_is_twice_sigma_valuation() {
    let k = k3();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 1..=3 {
        let l = lattices::standard_chain_2n(n).unwrap();
        let s = lattices::sigma_chain_2n(n).unwrap();
        let bounds = ValMatrix::from_fn(2 * n, 2 * n, |_, _| -2);
        for _ in 0..20 {
            let m = sympgroups::random_in(&k, &mut rng, &bounds, 4, EXACT);
            if m.is_zero() {
                continue;
            }
            assert_eq!(l.val_wrt(&m).unwrap(), 2 * s.val_wrt(&m).unwrap(), "N={n}");
        }
    }
}

#[test]
fn beta_has_lambda_valuation_minus_two() {
    let k = k3();
    for n in 1..=3 {
        let b = sympgroups::beta_matrix(&k, n).unwrap();
        assert_eq!(lattices::standard_chain_2n(n).unwrap().val_wrt(&b).unwrap(), -2);
    }
}

#[test]
fn m1_row_lattices() {
    for n in 1..=3 {
        assert!(structure::m1_row(n, 1).unwrap().iter().all(|&v| v == 0));
        let second = structure::m1_row(n, 2).unwrap();
        assert_eq!(second[0], 1);
        assert!(second[1..].iter().all(|&v| v == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_land_in_the_sum_filtration(n in 1usize..=2, which in 0usize..8, r in -3i64..=3, s in -3i64..=3, seed in any::<u64>()) {
        let k = k3();
        let (_, seq, _) = constructed(n).swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sympgroups::random_in(&k, &mut rng, &seq.order_filtration(r), 3, EXACT);
        let b = sympgroups::random_in(&k, &mut rng, &seq.order_filtration(s), 3, EXACT);
        prop_assert!(seq.contains(r, &a).unwrap());
        prop_assert!(seq.contains(r + s, &a.try_mul(&b).unwrap()).unwrap());
    }

    #[test]
    fn hom_blocks_compose(n in 1usize..=3, r in -2i64..=2, s in -2i64..=2) {
        // Hom(Λ_2N, 𝔪_1)_r ∘ Hom(𝔪_1, Λ_2N)_s ⊆ 𝔄_{r+s}(𝔪_1).
        let v = lattices::standard_chain_2n(n).unwrap();
        let w = lattices::m1(n).unwrap();
        let down = LatticeSeq::hom_block(&v, &w, r).unwrap();
        let up = LatticeSeq::hom_block(&w, &v, s).unwrap();
        prop_assert!(down.compose(&up).is_subset_of(&w.order_filtration(r + s)));
    }
}
