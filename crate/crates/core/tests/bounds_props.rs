mod common;

use etaq::arithmetic::{phi, psi, rat, rat_int, DivisorLattice, Rational};
use etaq::bounds::{
    aux_inequalities, bound_params, corollary_check, f_m, f_of, g_table, hat_vectors, hat_vectors_closed,
    lemma1_check, lemma1_proof_chain_check, lemma3_check, lemma4_check, random_exponents, random_lemma3_config,
    CorollaryKind, GConfig, GStatus, GVariant, Lemma4Outcome, Relation,
};
use etaq::etaquotient::{is_holomorphic, EtaQuotient};
use etaq::ordermatrix::{sym_order_matrix, DivisorVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::gauss_inverse;

const LEVELS: [u64; 10] = [2, 3, 4, 6, 8, 9, 12, 16, 24, 36];

fn x(n: u64, v: &[i64]) -> DivisorVector<BigInt> {
    DivisorVector::new(DivisorLattice::shared(n).unwrap(), v.iter().map(|&e| BigInt::from(e)).collect()).unwrap()
}

/// F, G_paper and G_proof straight from the factorization.
fn constants_oracle(n: u64) -> (Rational, Rational, Rational) {
    let mut sq_ratio = Rational::one();
    let mut sq_inc = Rational::one();
    for p in 2..=n {
        if (2..p).any(|q| p % q == 0) {
            continue;
        }
        if n.is_multiple_of(p * p) {
            sq_ratio *= rat((p + 1) as i64, (p - 1) as i64);
            sq_inc *= rat((p + 1) as i64, p as i64);
        }
    }
    let (ph, ps) = (rat_int(phi(n)), rat_int(psi(n)));
    let f = &ps / &ph * &sq_ratio;
    let g_paper = (ps.recip() + ph.recip()) * &sq_inc;
    let g_proof = (sq_ratio + sq_inc) / ph;
    (f, g_paper, g_proof)
}

#[test]
fn constants_match_oracle() {
    for n in 1..=400u64 {
        let b = bound_params(n).unwrap();
        assert_eq!((b.f, b.g_paper, b.g_proof), constants_oracle(n), "N={n}");
    }
}

#[test]
fn hat_vectors_against_elimination() {
    for n in 1..=300u64 {
        let closed = hat_vectors(n).unwrap();
        if n <= 80 {
            let a = sym_order_matrix(n).unwrap();
            let d = a.dim();
            let inv = gauss_inverse(a.entries(), d).unwrap();
            let col = |j: usize, abs: bool| -> Rational {
                (0..d).map(|i| if abs { inv[i * d + j].abs() } else { inv[i * d + j].clone() }).sum()
            };
            for j in 0..d {
                assert_eq!(closed.phi_hat.values()[j], col(j, false), "N={n}");
                assert_eq!(closed.beta_hat.values()[j], col(j, true), "N={n}");
            }
        }
        assert_eq!(closed, hat_vectors_closed(n).unwrap());
    }
}

#[test]
fn published_constant_counterexample() {
    let r = lemma1_check(&x(2, &[1, -1]), GVariant::Paper).unwrap();
    assert_eq!((r.lhs.clone(), r.rhs.clone(), r.holds), (rat(2, 1), rat(4, 3), false));
    let r = lemma1_check(&x(2, &[1, -1]), GVariant::Proof).unwrap();
    assert_eq!((r.lhs.clone(), r.rhs.clone(), r.holds), (rat(2, 1), rat(2, 1), true));
    let c = corollary_check(&x(2, &[1, -1]), &CorollaryKind::Nonpositive, GVariant::Paper).unwrap();
    assert!(!c.holds);
    assert!(corollary_check(&x(2, &[1, -1]), &CorollaryKind::Nonpositive, GVariant::Proof).unwrap().holds);
}

#[test]
fn proof_chain_and_lemma1_on_random_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for n in LEVELS {
        for _ in 0..1000 {
            let v = random_exponents(n, 6, &mut rng).unwrap();
            for r in lemma1_proof_chain_check(&v).unwrap() {
                assert!(r.holds, "{r:?}");
            }
            assert!(lemma1_check(&v, GVariant::Proof).unwrap().holds);
        }
    }
}

#[test]
fn corollaries_on_random_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut holo = 0;
    for n in LEVELS {
        for _ in 0..2000 {
            let v = random_exponents(n, 3, &mut rng).unwrap();
            if v.is_zero() {
                continue;
            }
            if is_holomorphic(&EtaQuotient::new(v.clone())).unwrap() {
                holo += 1;
                let r = corollary_check(&v, &CorollaryKind::Holomorphic, GVariant::Paper).unwrap();
                assert!(r.holds && r.relation == Relation::Le);
            } else if !v.sigma().is_positive() {
                assert!(corollary_check(&v, &CorollaryKind::Nonpositive, GVariant::Proof).unwrap().holds);
            }
        }
    }
    assert!(holo > 0);
}

#[test]
fn lemma3_on_random_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let levels = [2u64, 4, 8, 9, 12, 16, 18, 24, 27, 32, 36, 48, 72, 81];
    let mut count = 0;
    for i in 0..1000 {
        let n = levels[i % levels.len()];
        let (v, p, a, b) = random_lemma3_config(n, 6, &mut rng).unwrap().unwrap();
        let r = lemma3_check(&v, p, a, b).unwrap();
        assert!(r.holds, "{r:?}");
        count += 1;
    }
    assert_eq!(count, 1000);
    assert!(random_lemma3_config(1, 6, &mut rng).unwrap().is_none());
}

#[test]
fn lemma4_where_g_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let table = g_table(-60, 0, GConfig::new(GVariant::Proof, 2));
    let mut checked = 0;
    for n in LEVELS {
        for _ in 0..300 {
            let v = random_exponents(n, 4, &mut rng).unwrap();
            if is_holomorphic(&EtaQuotient::new(v.clone())).unwrap() {
                assert!(lemma4_check(&v, &table).is_err());
                continue;
            }
            match lemma4_check(&v, &table).unwrap() {
                Lemma4Outcome::Checked(r) => {
                    checked += 1;
                    assert!(r.holds, "{r:?}");
                }
                Lemma4Outcome::Untestable(msg) => assert!(v.sigma().is_positive(), "{msg}"),
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn g_values_and_monotonicity() {
    let cfg = GConfig::new(GVariant::Paper, 2000);
    let t = g_table(-8, 3, cfg);
    for n in -8..=0 {
        let e = t.get(n).unwrap();
        assert_eq!(e.status, GStatus::Value);
        assert_eq!(e.g, Some(if n < 0 { rat_int(-2 * n) } else { rat_int(2) }));
    }
    let vals: Vec<&Rational> = (-8..=3).filter_map(|n| t.get(n).and_then(|e| e.g.as_ref())).collect();
    assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(t.get(1).unwrap().status, GStatus::CapLimited);
    // M_2 lies beyond the cap once g(1) is small
    for n in 2..=3 {
        assert_ne!(t.get(n).unwrap().status, GStatus::Value);
    }
}

#[test]
fn f_m_nondecreasing() {
    let vals: Vec<Rational> = (1..=12).map(|m| f_m(m).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    for (m, v) in vals.iter().enumerate().take(7) {
        let primes = [2u64, 3, 5, 7, 11, 13, 17];
        let n: u64 = primes[..=m].iter().map(|p| p * p).product();
        assert_eq!(*v, f_of(n));
    }
}

#[test]
fn aux_inequalities_up_to_two_thousand() {
    for n in 1..=2000u64 {
        let r = aux_inequalities(n).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r[0].holds && r[1].holds && r[3].holds, "N={n}");
        let squarefree = etaq::arithmetic::factorize(n).iter().all(|&(_, e)| e == 1);
        if squarefree {
            assert!(r[2].holds, "N={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lemma1_proof_variant_holds(n in 1u64..=120, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_exponents(n, 5, &mut rng).unwrap();
        let r = lemma1_check(&v, GVariant::Proof).unwrap();
        prop_assert!(r.holds, "{:?}", r);
        prop_assert_eq!(r.holds, r.lhs <= r.rhs);
    }

    #[test]
    fn constants_positive(n in 1u64..=5000) {
        let b = bound_params(n).unwrap();
        prop_assert!(b.f > Rational::zero() && b.g_paper > Rational::zero() && b.g_proof > Rational::zero());
        prop_assert!(b.g_proof >= b.g_paper);
    }
}
