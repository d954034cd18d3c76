//! The code listings of the book, compiled and run as doc-tests.
#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/returns.md")]
pub mod returns {}

#[doc = include_str!("../../../book/src/solution-sets.md")]
pub mod solution_sets {}

#[doc = include_str!("../../../book/src/indicators.md")]
pub mod indicators {}

#[doc = include_str!("../../../book/src/environments.md")]
pub mod environments {}

#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
