//! Keeps the guide in `book/` honest: each chapter is included as a doc
//! comment on an empty module, so every Rust snippet in the book compiles
//! and runs under `cargo test --doc`. One module per chapter, so a failing
//! snippet names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/finite-fields.md")]
pub mod finite_fields {}

#[doc = include_str!("../../../book/src/places.md")]
pub mod places {}

#[doc = include_str!("../../../book/src/divisors.md")]
pub mod divisors {}

#[doc = include_str!("../../../book/src/zeta.md")]
pub mod zeta {}

#[doc = include_str!("../../../book/src/mean-value.md")]
pub mod mean_value {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
