//! `cargo test --doc` runs every code block in the book chapters, so the
//! guide can never drift from the library. One module per chapter keeps
//! failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/windows-and-mappings.md")]
pub mod windows_and_mappings {}

#[doc = include_str!("../../../book/src/estimate-dp.md")]
pub mod estimate_dp {}

#[doc = include_str!("../../../book/src/query-algorithm.md")]
pub mod query_algorithm {}

#[doc = include_str!("../../../book/src/parameters.md")]
pub mod parameters {}

#[doc = include_str!("../../../book/src/running.md")]
pub mod running {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
