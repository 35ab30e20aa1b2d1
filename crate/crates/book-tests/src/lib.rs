//! The book chapters, one module each, so `cargo test --doc` runs their
//! code blocks against the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/maps.md")]
pub mod maps {}
#[doc = include_str!("../../../book/src/encodings.md")]
pub mod encodings {}
#[doc = include_str!("../../../book/src/cvs.md")]
pub mod cvs {}
#[doc = include_str!("../../../book/src/multipoint.md")]
pub mod multipoint {}
#[doc = include_str!("../../../book/src/schemes.md")]
pub mod schemes {}
#[doc = include_str!("../../../book/src/metric.md")]
pub mod metric {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
