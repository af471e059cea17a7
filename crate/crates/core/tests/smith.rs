mod common;

use num_bigint::BigInt;
use num_integer::Integer as _;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wedgelab::homology::{dense_smith_invariants, smith_invariants, SparseIntMatrix};

use common::{invariants_by_diagonalization, invariants_by_minors, random_matrix, to_big};

#[test]
fn oracles_agree_on_tiny_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..150 {
        let r = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=4);
        let m = to_big(&random_matrix(&mut rng, r, c, 5, 70));
        assert_eq!(invariants_by_minors(&m), invariants_by_diagonalization(&m), "{m:?}");
    }
}

#[test]
fn dense_snf_matches_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let r = rng.gen_range(1..=5);
        let c = rng.gen_range(1..=5);
        let m = random_matrix(&mut rng, r, c, 5, 60);
        let sparse = SparseIntMatrix::from_dense(&m);
        assert_eq!(smith_invariants(&sparse), invariants_by_minors(&to_big(&m)), "{m:?}");
    }
}

#[test]
fn dense_snf_matches_diagonalization_up_to_30() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let r = rng.gen_range(1..=30);
        let c = rng.gen_range(1..=30);
        let m = random_matrix(&mut rng, r, c, 5, 35);
        let big = to_big(&m);
        assert_eq!(dense_smith_invariants(&big), invariants_by_diagonalization(&big), "{m:?}");
    }
}

/// Embeds a random small block among a large sparse unit structure so the
/// sparse elimination path (and its leftover hand-off) is exercised.
#[test]
fn sparse_path_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let r = rng.gen_range(1..=12);
        let c = rng.gen_range(1..=12);
        let block = random_matrix(&mut rng, r, c, 5, 50);
        let pad = 80;
        let mut triplets = Vec::new();
        for i in 0..pad {
            triplets.push((i, i, BigInt::from(if rng.gen_range(0..2) == 0 { 1 } else { -1 })));
            if i + 1 < pad {
                triplets.push((i, i + 1, BigInt::from(rng.gen_range(-3..=3))));
            }
            // couple the padding to the block
            triplets.push((i, pad + rng.gen_range(0..c), BigInt::from(rng.gen_range(-2..=2))));
        }
        for (i, row) in block.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                triplets.push((pad + i, pad + j, BigInt::from(v)));
            }
        }
        let m = SparseIntMatrix::from_triplets(pad + r, pad + c, triplets).unwrap();
        let expected = invariants_by_diagonalization(&m.to_dense());
        assert_eq!(smith_invariants(&m), expected);
    }
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, c), r)
    })
}

proptest! {
    #[test]
    fn invariants_form_a_divisibility_chain(m in small_matrix()) {
        let inv = smith_invariants(&SparseIntMatrix::from_dense(&m));
        prop_assert!(inv.iter().all(|d| d > &BigInt::from(0)));
        for w in inv.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn invariants_ignore_transpose_and_permutation(m in small_matrix(), shift in 0usize..7) {
        let rows = m.len();
        let cols = m[0].len();
        let transposed: Vec<Vec<i64>> = (0..cols).map(|j| (0..rows).map(|i| m[i][j]).collect()).collect();
        let mut rotated = m.clone();
        rotated.rotate_left(shift % rows);
        let base = smith_invariants(&SparseIntMatrix::from_dense(&m));
        prop_assert_eq!(&base, &smith_invariants(&SparseIntMatrix::from_dense(&transposed)));
        prop_assert_eq!(&base, &smith_invariants(&SparseIntMatrix::from_dense(&rotated)));
    }
}
