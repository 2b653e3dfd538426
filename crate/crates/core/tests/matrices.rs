mod common;

use etaq::arithmetic::{odot, phi, psi, rat_int, DivisorLattice};
use etaq::ordermatrix::{
    block_identity_sides, level_matrices, prime_power_block, prime_power_block_inverse, reshape,
    sym_order_matrix, sym_order_matrix_direct, sym_order_matrix_inverse, DivisorMatrix,
};
use num_bigint::BigInt;
use proptest::prelude::*;

use common::{direct_orders24, gauss_inverse, random_vector};

#[test]
fn inverse_matches_elimination_oracle() {
    for n in 1..=120u64 {
        let sym = sym_order_matrix(n).unwrap();
        let oracle = gauss_inverse(sym.entries(), sym.dim()).expect("Â_N is invertible");
        assert_eq!(sym_order_matrix_inverse(n).unwrap().entries(), &oracle[..], "N={n}");
    }
}

#[test]
fn prime_power_blocks_invert() {
    for p in [2u64, 3, 5, 7, 11] {
        for e in 1..=6u32 {
            let b = prime_power_block(p, e).unwrap();
            let inv = prime_power_block_inverse(p, e).unwrap();
            assert_eq!(b.mul(&inv).unwrap(), DivisorMatrix::identity(b.lattice().clone()));
        }
    }
}

#[test]
fn fricke_symmetry_of_entries() {
    for n in 1..=300u64 {
        let m = level_matrices(n).unwrap();
        let divs = m.lattice.divisors();
        for &t in divs {
            for &d in divs {
                assert_eq!(m.sym.get(odot(n, t), odot(n, d)), m.sym.get(t, d));
            }
        }
    }
}

#[test]
fn column_sums_claimed_bound_fails_at_eight() {
    // 𝟙ᵀÂ_8 = (15, 18, 18, 15) but N²/φ(N) = 16
    let m = level_matrices(8).unwrap();
    let sums: Vec<_> = m.sym.column_sums();
    assert_eq!(sums, [15, 18, 18, 15].map(rat_int).to_vec());
    let mut failing = vec![];
    for n in 1..=30u64 {
        let m = level_matrices(n).unwrap();
        let bound = rat_int(n) * rat_int(n) / rat_int(phi(n));
        if m.sym.column_sums().iter().any(|s| *s > bound) {
            failing.push(n);
        }
    }
    assert_eq!(failing, vec![8, 9, 16, 25, 27]);
}

#[test]
fn column_sums_bounded_by_n_psi_over_phi() {
    for n in 1..=2000u64 {
        let m = level_matrices(n).unwrap();
        let bound = rat_int(n) * rat_int(psi(n)) / rat_int(phi(n));
        assert!(m.sym.column_sums().iter().all(|s| *s <= bound), "N={n}");
        if n > 1 && etaq::arithmetic::factorize(n).iter().all(|&(_, e)| e == 1) {
            let claimed = rat_int(n) * rat_int(n) / rat_int(phi(n));
            assert!(m.sym.column_sums().iter().all(|s| *s <= claimed), "squarefree N={n}");
        }
    }
}

#[test]
fn order_matrix_matches_direct_formula() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    for n in [1u64, 2, 6, 12, 18, 30, 45, 48] {
        let m = level_matrices(n).unwrap();
        for _ in 0..20 {
            let x = random_vector(n, 5, &mut rng);
            let ints = common::exponent_ints(&x);
            let via_matrix = m.order.apply_int(x.values());
            assert_eq!(via_matrix, direct_orders24(&ints, n), "N={n}");
        }
    }
}

fn level_strategy() -> impl Strategy<Value = u64> {
    1u64..=400
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_equals_direct(n in level_strategy()) {
        prop_assert_eq!(sym_order_matrix(n).unwrap(), sym_order_matrix_direct(n).unwrap());
    }

    #[test]
    fn product_is_identity(n in level_strategy()) {
        let m = level_matrices(n).unwrap();
        prop_assert!(m.sym.is_symmetric());
        prop_assert_eq!(m.sym.mul(&m.sym_inv).unwrap(), DivisorMatrix::identity(m.lattice.clone()));
    }

    #[test]
    fn block_identity_holds(
        n in prop::sample::select(vec![6u64, 10, 12, 18, 20, 30, 36, 60, 72, 90]),
        seed in any::<u64>(),
    ) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let x = random_vector(n, 8, &mut rng);
        let lattice = DivisorLattice::new(n).unwrap();
        for &d in lattice.exact_divisors() {
            let (lhs, rhs) = block_identity_sides(&x, d).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reshape_round_trip(n in level_strategy(), seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let x = random_vector(n, 9, &mut rng);
        let lattice = DivisorLattice::shared(n).unwrap();
        for &d in lattice.exact_divisors() {
            let r = reshape(&x, d).unwrap();
            prop_assert_eq!(r.flatten(lattice.clone()).unwrap(), x.clone());
        }
    }

    #[test]
    fn entries_are_positive_integers(n in level_strategy()) {
        let m = level_matrices(n).unwrap();
        prop_assert!(m.sym.entries().iter().all(|e| e.is_integer() && *e.numer() > BigInt::from(0)));
        prop_assert!(m.order.entries().iter().all(|e| e.is_integer()));
    }
}
