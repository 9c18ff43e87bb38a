//! Combinatorial patchworking of signed lattice triangulations of dilated
//! simplices, with exact topological verification.

pub mod census;
pub mod error;
pub mod homology;
pub mod io;
pub mod lattice;
pub mod patchwork;
pub mod signs;
pub mod triangulation;

pub use census::{CensusReport, Rational, ZoneStats};
pub use error::{Error, Result};
pub use lattice::{LatticePoint, LatticeSimplex, VertexTable};
pub use homology::{ChainComplex, Z2Matrix};
pub use patchwork::{ExtendedComplex, GammaComplex};
pub use signs::{Datum, Orthant, SignDistribution};
pub use triangulation::{Construction, LiftCertificate, Triangulation, ValidationReport};
