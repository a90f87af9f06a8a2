//! JSON formats, block-spec parsing, the seeded identity suite and the
//! command-line front end for `orthlat-core`.

pub mod cli;
pub mod format;
pub mod suite;

pub use format::Failure;
