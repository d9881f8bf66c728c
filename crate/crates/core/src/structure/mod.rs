//! Nondegeneracy metrics of the main anticoncentration statements and the
//! distribution-representation construction: minimum fixing number,
//! fixing-box robustness, off-diagonal robustness via vertex cover, disjoint
//! term matching, and zeta = alpha + xi * beta.

pub mod fixing;
pub mod offdiag;
pub mod represent;

pub use fixing::{
    fixing_box_robustness, min_fixing_number, verify_fixing_minimality, verify_fixing_witness,
    BoxRobustness, FixingNumber, FixingWitness,
};
pub use offdiag::{
    matching_lower_bound, min_vertex_cover, offdiag_robustness, offdiag_robustness_oracle,
};
pub use represent::{represent_discrete, reproduces_law, ReprOutput};
