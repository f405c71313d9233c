//! Metric cohomology at desk scale: weighted cochain complexes over finite
//! abelian groups, exact cosystolic and coboundary expansion constants, finite
//! covers with their isometric transfer of cohomology, and sofic-approximation
//! experiments with defect cocycles.

pub mod abelian;
pub mod boolean;
pub mod cochain;
pub mod complex;
pub mod covers;
pub mod error;
pub mod expansion;
pub mod generators;
pub mod linalg;
pub mod perm;
pub mod rational;
pub mod sofic;

pub use abelian::{AElement, FiniteAbelianGroup};
pub use boolean::{AtomMap, MeasuredBoolean, PAElement, PGroup};
pub use complex::{SchemeKind, Simplex, SimplicialComplex, WeightScheme};
pub use error::{Error, Result};
pub use rational::Rational;
