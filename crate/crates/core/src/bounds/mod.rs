//! Log-space calculators for every closed-form bound, the recursion and its
//! unrolling, and the final 1/sqrt(s) assembly, all rigorous enough to stand
//! against exact probabilities.

pub mod formulas;
pub mod logspace;
pub mod recursion;

pub use formulas::{
    erdos_lo, erdos_lo_exact, geometric, halasz_fjz, halasz_sub, hamming_ball, low_rank,
    odlyzko, rank_inheritance,
};
pub use logspace::{log2_add, log2_interval, LogBound, RatInterval, DEFAULT_PREC};
pub use recursion::{
    closed_form, main_bound, recursion_base, recursion_step, recursion_unrolled,
    series_constant_log2, sum_identity, MainBound,
};
