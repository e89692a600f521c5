//! Truncated Fock spaces for one or two bosonic modes.
//!
//! Basis ordering: for two modes with per-mode cutoff `N` the index of
//! `|n_a, n_b⟩` is `n_a·(N+1) + n_b` (mode `a` slow, mode `b` fast).
//! Operators are dense complex matrices; [`LadderExpr`] gives a symbolic
//! polynomial in ladder operators that can be materialized densely or applied
//! sparsely to blocks of vectors in large padded spaces.

mod error;
mod ladder;
pub mod linalg;
mod operator;
mod space;
mod state;

pub use error::FockError;
pub use ladder::{expm_action, Ladder, LadderExpr, LadderTerm, SparseAction};
pub use linalg::{cmul, matrix_exp_dense};
pub use operator::{
    compose, inner_block_distance, matrix_exp, mode_operator, FockOperator, OperatorKind,
};
pub use space::{make_space, FockSpace, Mode};
pub use state::{
    basis_state, coherent_amplitudes, coherent_tail_mass, inner, ket_in_trusted_range,
    phase_aligned_residual, single_mode_amplitudes, truncation_leakage, FockState, ModeSpec,
    COHERENT_TAIL_LIMIT,
};

pub use num_complex::Complex64 as C64;
