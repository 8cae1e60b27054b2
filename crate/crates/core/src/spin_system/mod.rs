//! Dense operator algebra for finite spin lattices.

mod davies;
mod liouvillian;
mod operator;

pub use davies::{
    bohr_jumps, davies_generator, davies_rate, gibbs_state, global_operator, BohrJump,
    DaviesOptions, BOHR_TOL,
};
pub use liouvillian::{
    dense_superop, Liouvillian, LocalTerm, Picture, PrimitivityReport, Restriction,
    DENSE_EXPM_LIMIT, FULL_PIVOT_LIMIT,
};
pub use operator::{
    embed_local, is_pauli_label, partial_trace, pauli, pauli_string, DenseOperator, Embedding,
};
