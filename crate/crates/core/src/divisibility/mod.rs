//! Divisibility by `m` in a linear numeration system: Hankel analysis
//! modulo `m`, both constructions of the trim minimal automaton of
//! `0*rep_U(mN)`, and the harness that checks the predicted state count.

mod construction;
mod hankel;
mod verify;

pub use construction::{
    build_divisibility_direct, build_divisibility_direct_with, build_divisibility_lsd, divisibility_product,
    equiv_um, lower_bound, lsd_divisibility_automaton, residue_vector, ConstructionStateTag, DivisibilityProduct,
    ResidueWidth,
};
pub use hankel::{
    determinant_profile, hankel_matrix, image_count_at_order, image_count_from_invariants, k_um,
    mod_recurrence_coeffs, s_um, HankelAnalysis, ImageMethod, IntMatrix, BRUTE_FORCE_BUDGET,
};
pub use verify::{verify_theorem, PeriodSummary, VerificationReport};
