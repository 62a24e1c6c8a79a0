//! Workbench for round-complexity bounds of k-set agreement on
//! synchronous message-passing networks with up to t crash failures.
//!
//! The crate is organized bottom-up:
//! * [`graph`] — directed communication graphs and distance quantities.
//! * [`label`] — interned hierarchical views.
//! * [`topology`] — chromatic simplicial complexes and shellability.
//! * [`exec`] — full-information executions and protocol complexes.
//! * [`carrier`] — round-to-round carrier maps and their laws.
//! * [`solve`] — decision-map search and bound reports.
//! * [`petal`] — pruned-union instances and the domination inequality probe.

#![forbid(unsafe_code)]

pub mod error;
pub mod par;

pub mod carrier;
pub mod exec;
pub mod graph;
pub mod label;
pub mod petal;
pub mod solve;
pub mod topology;

pub use error::{Error, Result};
