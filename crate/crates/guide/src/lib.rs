//! The book under `book/`, compiled. Each chapter is attached to an
//! empty module here so its code blocks run as doc-tests; `cargo test`
//! fails if the guide drifts from the crate.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}

#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[doc = include_str!("../../../book/src/file-format.md")]
pub mod file_format {}

#[doc = include_str!("../../../book/src/arborescences.md")]
pub mod arborescences {}

#[doc = include_str!("../../../book/src/voltages.md")]
pub mod voltages {}

#[doc = include_str!("../../../book/src/ratio.md")]
pub mod ratio {}

#[doc = include_str!("../../../book/src/expectation.md")]
pub mod expectation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
