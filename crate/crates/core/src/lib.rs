//! Persistence descriptors for vertex-colored graphs: PH, RePHINE, SpectRe
//! and LS diagrams, bottleneck-type metrics between them, and harnesses for
//! expressivity and stability checks.

pub mod bench;
pub mod descriptors;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod graph;
pub mod metrics;
pub mod persistence;
pub mod spectral;
pub mod verify;

pub use descriptors::{Diagram, DiagramKind, Rho, Tuple};
pub use error::{Error, Result};
pub use filtration::{ColorFiltrationSpec, FiltrationKind, FiltrationValues};
pub use graph::{ColorId, ColoredGraph, VertexPermutation};
pub use persistence::{ExtendedReal, PersistencePair};
pub use spectral::{Spectrum, SpectrumMode, SpectrumPolicy};
