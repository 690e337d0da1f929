pub mod canon;
pub mod checks;
pub mod classify;
pub mod density;
pub mod digraph;
pub mod embed;
pub mod error;
pub mod families;
pub mod io;
pub mod scalar;
pub mod search;
pub mod suites;
pub mod tournamenton;
