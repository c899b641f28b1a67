//! Pseudospectra and Brown measures of degree-two polynomials in
//! independent Ginibre matrices.
//!
//! The numerical core is generic over the complex scalar ([`c32`] or
//! [`c64`]); the `*64` aliases below fix double precision, which is what
//! the command-line front-end uses.

pub mod brown;
pub mod error;
pub mod linearize;
pub mod ncpoly;
pub mod pseudospec;
pub mod rmt;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod walks;

pub use brown::{
    brown_estimate, compare_esd_brown, laplacian_density, log_potential, log_potential_with, stieltjes,
    BrownEstimate, LogPotentialField, PotentialEngine,
};
pub use error::{Error, Result};
pub use linearize::{assemble_lz, build_linearization, verify_schur, BlockShift, Linearization, LzMatrix, SchurCheck};
pub use ncpoly::{free_moment, parse, parse_with_vars, NcPoly, QuadraticData, StarWord, Word};
pub use pseudospec::{
    pseudospectrum_area, smin_map, smin_shifted_tail, tail_estimate, GridField, GridSpec, SminMap, TailEstimate,
};
pub use rmt::{esd, sample_ginibre, sample_polynomial, singular_values, GinibreSample, SingularSpectrum, SpectrumSample};
pub use scalar::{c32, c64, Field};
pub use walks::{
    delta_report, det_tail_experiment, orthocomplement_basis, select_rows, test_projection, walk_matrix, DeltaMode,
    DeltaReport, WalkBasis, WalkMatrix,
};

pub type Linearization64 = Linearization<c64>;
pub type Linearization32 = Linearization<c32>;
pub type LzMatrix64 = LzMatrix<c64>;
pub type GinibreSample64 = GinibreSample<c64>;
pub type GinibreSample32 = GinibreSample<c32>;
pub type SpectrumSample64 = SpectrumSample<c64>;
pub type SingularSpectrum64 = SingularSpectrum<f64>;
pub type WalkBasis64 = WalkBasis<c64>;
pub type WalkMatrix64 = WalkMatrix<c64>;
