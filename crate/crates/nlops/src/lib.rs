//! Simulation toolkit for non-local quantum operations.
//!
//! The crate is built around the duality between completely positive maps
//! acting on distributed systems and the entangled states obtained by feeding
//! halves of local maximally entangled pairs through them. On top of that
//! duality it implements, at desk scale and with exact linear algebra:
//!
//! - deterministic and probabilistic gate teleportation for the phase-gate
//!   family, including the doubling cascade that reaches unit success
//!   probability and binary-angle synthesis of arbitrary phases
//!   ([`gate_protocols`]);
//! - the canonical three-axis decomposition of arbitrary two-qubit gates and
//!   their teleportation cost accounting ([`gate_protocols`]);
//! - distillability tests and purification thresholds for depolarised
//!   non-local gates, plus the projection pipeline for unknown noisy local
//!   rotations ([`purify`]);
//! - process tomography of unknown channels from local expectation values
//!   ([`tomography`]);
//! - probabilistic gate implementation under incomplete Bell measurements
//!   ([`photonic`]);
//! - constructions for non-local von Neumann measurements ([`nl_measure`]);
//! - storage and compression rates for ensembles of unitary operations
//!   ([`storage`]) and local compression of entangled-state sequences
//!   ([`compress`]).
//!
//! Start with [`qobjects`] for states, gates and channels, and [`duality`]
//! for the channel↔state correspondence. The `examples/` directory contains
//! one runnable demonstration per capability; the `nlops` binary exposes the
//! same reports as reproducible CSV/JSON.

pub mod compress;
pub mod duality;
pub mod gate_protocols;
pub mod linalg;
pub mod nl_measure;
pub mod photonic;
pub mod purify;
pub mod qobjects;
pub mod report;
pub mod rng;
pub mod storage;
pub mod tomography;

pub use linalg::{ComplexMatrix, SubsystemLayout};
pub use qobjects::{BellIndex, Channel, MultiState};
