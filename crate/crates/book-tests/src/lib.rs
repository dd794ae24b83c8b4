//! Runs the code listings of the guide in `book/` as doctests, so the book
//! cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/normalization.md")]
pub mod normalization {}

#[doc = include_str!("../../../book/src/shock.md")]
pub mod shock {}

#[doc = include_str!("../../../book/src/inverse.md")]
pub mod inverse {}

#[doc = include_str!("../../../book/src/direct.md")]
pub mod direct {}

#[doc = include_str!("../../../book/src/hypersonic_limit.md")]
pub mod hypersonic_limit {}

#[doc = include_str!("../../../book/src/chaplygin.md")]
pub mod chaplygin {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
