//! Weak Lipschitz structures on finite carriers.
//!
//! A weak pseudo-metric is a symmetric map into `[0, inf]` satisfying the
//! triangle inequality and vanishing at one or more diagonal points. Finite
//! families of them generate structures whose topologies, uniformities and
//! map classes this crate decides with exact rational arithmetic.

pub mod error;
pub mod laws;
pub mod maps;
pub mod metric;
pub mod model;
pub mod points;
pub mod report;
pub mod structure;
pub mod topology;
pub mod uniformity;
pub mod value;

pub use error::{Error, Result};
pub use maps::PointMap;
pub use metric::{PreMetricForm, PseudoMetric, WeakPseudoMetric};
pub use points::{PointSet, Relation};
pub use structure::StructureBase;
pub use topology::FiniteTopology;
pub use uniformity::PrincipalUniformity;
pub use value::{ExtValue, Mode, Rational};
