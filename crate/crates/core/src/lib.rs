//! Exact parametric shortest paths: piecewise-linear envelopes, lower-bound
//! graph families and their verifiers.

pub mod affine;
pub mod construction;
pub mod error;
pub mod graph;
pub mod grid;
pub mod io;
pub mod link;
pub mod matching;
pub mod polytope;
pub mod pwl;
pub mod rational;
pub mod words;

pub use affine::AffineForm;
pub use error::{Error, Result};
pub use graph::{Envelope, ParametricGraph, Path};
pub use pwl::{Interval, PwlFunction};
pub use rational::Rational;
