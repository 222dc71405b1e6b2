//! Filters, prime and maximal spectra, the Zariski topology, and theory
//! pairs.

pub mod filters;
pub mod pairs;
pub mod topology;
pub mod zariski;

pub use filters::{enumerate_filters, generate_filter, FilterKind};
pub use pairs::TheoryPair;
pub use topology::{FiniteTopology, PointSet};
pub use zariski::{zariski_sets, SpectrumSpace, Zariski};
