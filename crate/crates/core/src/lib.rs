//! Combinatorial Morse–Smale vector fields.
//!
//! A flow is described by its critical elements (rest points and closed
//! orbits) and by how many components each stable/unstable intersection has.
//! From that data this crate builds the GF(2) chain complex that uses two
//! generators per closed orbit, lists the ways a closed orbit can be traded
//! for a pair of rest points, and compares the face posets of the resulting
//! gradient-like flows.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, file IO and the
//! command-line front end live in the `msflow` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod complex;
pub mod flow;
pub mod gf2;
pub mod perturb;
pub mod poset;

#[cfg(test)]
mod testing;

pub use complex::{build_complex, BasisElement, ChainComplexGF2, D2Violation, Flavor};
pub use flow::{CriticalElement, ElementKind, FlowSystem, Violation};
pub use gf2::MatrixGF2;
pub use perturb::{apply_choice, enumerate_choices_2d, resolve_all, ChoiceDescriptor, PerturbationResult};
pub use poset::{face_poset, is_isomorphic, IsoVerdict, LabeledPoset};
