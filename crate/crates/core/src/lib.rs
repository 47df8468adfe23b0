//! Symbolic computation in Leavitt path algebras of finite graphs.

pub mod algebra;
pub mod chen;
pub mod error;
pub mod expr;
pub mod graph;
pub mod poly;
pub mod scalar;
pub mod spectrum;
pub mod structure;
