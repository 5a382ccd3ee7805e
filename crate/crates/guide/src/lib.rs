//! Compiles the code listings of the guide in `book/` as doctests.
//!
//! mdbook cannot resolve workspace dependencies when testing a book, so each
//! chapter is pulled in here as the documentation of an empty module.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/exponents.md")]
pub mod exponents {}
#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}
#[doc = include_str!("../../../book/src/sums.md")]
pub mod sums {}
#[doc = include_str!("../../../book/src/extremizers.md")]
pub mod extremizers {}
#[doc = include_str!("../../../book/src/opnorm.md")]
pub mod opnorm {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
