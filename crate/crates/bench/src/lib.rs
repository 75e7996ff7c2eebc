//! Fixtures shared by the benchmarks.

use dessins_core::{CycleType, Dessin, Passport, Permutation};

/// The tetrahedron as a regular dessin on 12 darts.
pub fn tetrahedron() -> Dessin {
    let sigma = Permutation::from_one_based_cycles(12, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9], vec![10, 11, 12]])
        .expect("valid cycles");
    let alpha = Permutation::from_one_based_cycles(
        12,
        &[vec![1, 4], vec![2, 10], vec![3, 7], vec![5, 9], vec![6, 11], vec![8, 12]],
    )
    .expect("valid cycles");
    Dessin::new(sigma, alpha).expect("equal degrees")
}

/// Passport from three lists of cycle lengths.
pub fn passport(black: &[usize], white: &[usize], faces: &[usize]) -> Passport {
    Passport::from_cycle_types(
        CycleType::new(black.to_vec()),
        CycleType::new(white.to_vec()),
        CycleType::new(faces.to_vec()),
    )
    .expect("consistent passport")
}

/// The tree with black degrees 4, 2, 1 and white degrees 2, 2, 1, 1, 1.
pub fn seven_passport() -> Passport {
    passport(&[4, 2, 1], &[2, 2, 1, 1, 1], &[7])
}
