//! Doc-tests for the guide in `book/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}

#[doc = include_str!("../../../book/src/ranges.md")]
pub mod ranges {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/psi.md")]
pub mod psi {}

#[doc = include_str!("../../../book/src/combinat.md")]
pub mod combinat {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
