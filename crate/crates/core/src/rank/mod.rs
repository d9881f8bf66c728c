//! Exact rational linear algebra for the robustness certificates: rank and
//! kernel, Halasz-class membership, disjoint-basis packing, minimum rank over
//! (T,U)-perturbations, M_r-class certification, and matrix splitting.

pub mod elim;
pub mod halasz;
pub mod perturb;
pub mod split;

pub use elim::{inverse, rank, rank_and_kernel, rref, solve_right};
pub use halasz::{
    greedy_disjoint_bases, halasz_membership, halasz_membership_oracle, min_row_space_weight,
    verify_halasz_cert, HalaszCert, HalaszWitness, Verdict, DEFAULT_EXACT_BUDGET,
};
pub use perturb::{
    m_membership, min_perturbed_rank, min_perturbed_rank_block, verify_m_cert, MCert,
};
pub use split::{matrix_split, SplitResult};
