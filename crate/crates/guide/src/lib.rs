//! The knlab guide, compiled so that every snippet runs as a doc-test.
//!
//! The chapters live in `book/src` and build with `mdbook build book`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/tubes.md")]
pub mod tubes {}

#[doc = include_str!("../../../book/src/cones.md")]
pub mod cones {}

#[doc = include_str!("../../../book/src/deck.md")]
pub mod deck {}

#[doc = include_str!("../../../book/src/windows.md")]
pub mod windows {}

#[doc = include_str!("../../../book/src/nodal.md")]
pub mod nodal {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
