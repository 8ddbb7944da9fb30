//! Backbone construction for wireless networks modelled as unit disk graphs.
//!
//! The crate builds m-connected k-dominating sets with a five-round greedy
//! scheme ([`bee`]), checks them against an exhaustive search ([`oracle`]),
//! exports the matching integer programs ([`ilp`]) and estimates the
//! dissemination cost of a finished backbone ([`sim`]).
//!
//! Everything here is allocation-only and runs without `std`; file formats,
//! experiment sweeps and the command-line front end live in the companion
//! `backbone` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bee;
mod error;
pub mod graph;
pub mod ilp;
pub mod oracle;
pub mod sim;

pub use error::Error;
pub use graph::{NodeSet, Point, UdgGraph};
