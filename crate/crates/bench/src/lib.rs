//! Shared inputs for the criterion benches.

/// Cases for the genus-zero correlator benches: `(r, insertions)`.
pub fn correlator_cases() -> Vec<(u32, Vec<u32>)> {
    vec![(6, vec![4, 4, 4, 4, 4]), (8, vec![6, 6, 6, 6, 6, 4]), (10, vec![8, 8, 8, 8, 6])]
}

/// Cases for the graph sum benches: `(r, g, insertions, degree)`.
pub fn givental_cases() -> Vec<(u32, u32, Vec<u32>, u32)> {
    vec![(5, 1, vec![1, 1], 1), (6, 2, vec![2], 1), (5, 2, vec![1, 1], 2)]
}
