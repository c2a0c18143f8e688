//! Generating functions of recursive sequences modulo powers of 3, written as
//! polynomials in the series Psi(z) = prod_j (1 + z^(3^j)).

pub mod digit_rules;
pub mod error;
pub mod h_series;
pub mod laurent;
pub mod par;
pub mod poly;
pub mod psi_core;
pub mod ring3;
pub mod sequences;
pub mod solver;

pub use digit_rules::{
    apery_class, digit_stats, free27_is_one, free_class, psi3_coeff_by_terms, psi_power_coeff,
    AperyKind, DigitStats, TritString,
};
pub use error::{Error, Result};
pub use h_series::{
    h_tilde_series, psi_power_h_expansion, reduce_h, HCombination, HIndex, ReductionRank,
};
pub use laurent::{rewrite_inv_1pz3j, Ctx, LaurentCoeff, TruncSeries};
pub use psi_core::{check_minpoly, psi_series, MinPolyFixture, PsiContext, PsiPoly};
pub use ring3::{min_degree_bound, v3, v3_factorial, Residue, Val};
pub use sequences::{catalog, oracle_terms, stored_fixture, SequenceId};
pub use solver::{
    m_section, solve_mod3k, unique_series_solution, validate_equation, DiffPoly, EqShape,
    FunctionalEq, SolveReport,
};
