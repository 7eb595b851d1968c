//! Reference matrices for the four-strand example, in subset order
//! ∅, {σ1}, {σ2}, {σ1,σ2}, {σ3}, {σ1,σ3}, {σ2,σ3}, 𝒜 and partition order
//! [4], [3,1], [2,2], [2,1,1], [1,1,1,1].
#![allow(dead_code)]

use braid_growth::linalg::BigMatrix;

fn m(rows: &[&[i64]]) -> BigMatrix {
    BigMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn t() -> BigMatrix {
    m(&[
        &[24, 21, 19, 13, 21, 13, 13, 1],
        &[0, 1, 1, 2, 1, 2, 2, 3],
        &[0, 1, 2, 3, 1, 3, 3, 5],
        &[0, 0, 0, 1, 0, 1, 1, 3],
        &[0, 1, 1, 2, 1, 2, 2, 3],
        &[0, 0, 1, 2, 0, 2, 2, 5],
        &[0, 0, 0, 1, 0, 1, 1, 3],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ])
}

pub fn n() -> BigMatrix {
    m(&[
        &[0, 0, 0, 0, 1],
        &[0, 0, 0, 1, 4],
        &[0, 0, 1, 2, 6],
        &[0, 1, 2, 5, 12],
        &[1, 4, 6, 12, 24],
    ])
}

pub fn ntilde() -> BigMatrix {
    m(&[
        &[0, 0, 0, 0, 1],
        &[0, 0, 0, 1, 4],
        &[0, 0, 1, 2, 6],
        &[0, 1, 2, 5, 12],
        &[24, 24, 24, 24, 24],
    ])
}

pub fn p() -> BigMatrix {
    m(&[
        &[1, 0, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 1, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ])
}

pub fn q() -> BigMatrix {
    m(&[
        &[1, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1],
    ])
}

pub fn c() -> BigMatrix {
    BigMatrix::from_rows(
        &(0..8)
            .map(|i| (0..8).map(|j| (i + j == 7) as i64).collect())
            .collect::<Vec<_>>(),
    )
}

pub fn s() -> BigMatrix {
    m(&[
        &[1, 1, 1, 1, 1, 1, 1, 1],
        &[0, 1, 0, 1, 0, 1, 0, 1],
        &[0, 0, 1, 1, 0, 0, 1, 1],
        &[0, 0, 0, 1, 0, 0, 0, 1],
        &[0, 0, 0, 0, 1, 1, 1, 1],
        &[0, 0, 0, 0, 0, 1, 0, 1],
        &[0, 0, 0, 0, 0, 0, 1, 1],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ])
}

pub fn s_inv() -> BigMatrix {
    m(&[
        &[1, -1, -1, 1, -1, 1, 1, -1],
        &[0, 1, 0, -1, 0, -1, 0, 1],
        &[0, 0, 1, -1, 0, 0, -1, 1],
        &[0, 0, 0, 1, 0, 0, 0, -1],
        &[0, 0, 0, 0, 1, -1, -1, 1],
        &[0, 0, 0, 0, 0, 1, 0, -1],
        &[0, 0, 0, 0, 0, 0, 1, -1],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ])
}

pub fn ttilde() -> BigMatrix {
    m(&[
        &[24, 21, 19, 13, 1],
        &[0, 2, 2, 4, 6],
        &[0, 1, 2, 3, 5],
        &[0, 0, 1, 4, 11],
        &[0, 0, 0, 0, 1],
    ])
}

pub fn refinement() -> BigMatrix {
    m(&[
        &[1, 2, 1, 3, 1],
        &[0, 1, 0, 2, 1],
        &[0, 0, 1, 2, 1],
        &[0, 0, 0, 1, 1],
        &[0, 0, 0, 0, 1],
    ])
}

pub fn core() -> BigMatrix {
    m(&[
        &[-1, 2, 1, -3, 1],
        &[2, -2, -2, 2, 0],
        &[1, -2, 0, 1, 0],
        &[-3, 2, 1, 0, 0],
        &[1, 0, 0, 0, 0],
    ])
}
