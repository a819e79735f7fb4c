//! Compiles and runs every code snippet in the guide (`book/src/`) as a
//! doc-test, so `cargo test --workspace` fails the moment a chapter
//! drifts out of sync with the library. Each chapter is attached to an
//! empty module; non-Rust fences (` ```sh `, ` ```json `, ` ```text `)
//! are ignored by rustdoc, everything else must compile and pass.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/algorithms.md")]
pub mod algorithms {}

#[doc = include_str!("../../../book/src/adversaries.md")]
pub mod adversaries {}

#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/uniform.md")]
pub mod uniform {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
