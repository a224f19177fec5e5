#![no_std]
//! Max-min fair curriculum-based course timetabling.
//!
//! - [`fairness`]: leximax order on penalty multisets and its rank isomorphism.
//! - [`assignment`]: exact LSAP and lexicographic bottleneck (GLBOP) solvers.
//! - [`model`]: instances, timetables, hard constraints and soft penalties.
//! - [`room`]: the single-period room assignment subproblem.
//! - [`anneal`]: the simulated annealing master solver.
//!
//! Everything here is pure computation on in-memory values; parsing, files
//! and the command line live in the `mmfctt` crate.

extern crate alloc;

pub mod anneal;
pub mod assignment;
pub mod fairness;
pub mod model;
pub mod room;
pub mod synthetic;
