//! Shared fixtures for the benchmarks.

use patchwork_core::homology::betti;
use patchwork_core::patchwork::{extend, gamma_cells};
use patchwork_core::signs::Datum;
use patchwork_core::triangulation::{build_iv3, build_iv4, Iv3Params, Iv4Flavor};

pub fn iv3_datum(m: i64) -> Datum {
    Datum::standard(build_iv3(&Iv3Params::standard(m)).expect("iv3 builds")).expect("standard signs")
}

pub fn iv4_datum(m: i64) -> Datum {
    Datum::standard(build_iv4(m, Iv4Flavor::Odd).expect("iv4 builds")).expect("standard signs")
}

/// Extension, hypersurface cells and Z2 Betti numbers of a datum.
pub fn betti_of(d: &Datum) -> Vec<usize> {
    betti(&gamma_cells(&extend(d)).chain)
}
