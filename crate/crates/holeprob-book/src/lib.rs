//! The holeprob guide, compiled so its code blocks run as doc-tests.
//!
//! Each module below includes one chapter of `book/src` verbatim.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/radial.md")]
pub mod radial {}

#[doc = include_str!("../../../book/src/energy.md")]
pub mod energy {}

#[doc = include_str!("../../../book/src/gram.md")]
pub mod gram {}

#[doc = include_str!("../../../book/src/fekete.md")]
pub mod fekete {}

#[doc = include_str!("../../../book/src/fluctuations.md")]
pub mod fluctuations {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
