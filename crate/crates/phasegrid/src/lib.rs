//! Numerical toolkit for harmonic analysis on finite periodic grids: the
//! unitary Fourier pair, Heisenberg–Weyl displacements, discrete Zak
//! transforms in both phase conventions, Poisson-summation checks, band
//! limiting and sampling-theorem reconstruction, coherent-state lattices with
//! totality / orthonormality / frame diagnostics, and a discrete Wigner
//! distribution on the doubled phase-space grid.
//!
//! Everything is built on one convention: an N = L·M point centered grid with
//! spacing dq, period Q = N·dq and momentum spacing dp = 2π/Q, with samples
//! stored in the √dq embedding so that discrete ℓ² norms equal continuum L²
//! norms. On that grid the toolkit's identities (Zak unitarity, the
//! geometric-phase relation between the two Zak conventions, Poisson
//! summation) are exact up to rounding: periodization is the model, not an
//! approximation.

pub mod error;
pub mod grid;

pub mod fourier;
pub mod signal;

pub mod zak;

pub mod sampling;

pub mod fiducial;
pub mod lattice;

pub mod wigner;

pub mod io;

pub use error::{Error, Result};
pub use fourier::{fourier_forward, fourier_inverse, self_dual_grid};
pub use grid::GridSpec;
pub use num_complex::Complex64;
pub use signal::{
    displace, momentum_boost, random_signal, snap_to_grid, translate, weyl_phase_check,
    MomentumSignal, PhasePoint, Signal,
};
pub use zak::{
    locate_zero, quasiperiodicity_residual, zak_forward, zak_forward_round, zak_inverse_momentum,
    zak_inverse_position, zak_operator_check, Convention, ZakArray, ZeroReport,
};

pub use sampling::{
    bandlimit_project, consistency_residual, dependence_residual, extract_samples,
    poisson_residual, reconstruct_cauchy, reconstruct_sinc, BandSpec, SampleSet,
};

pub use fiducial::FiducialVector;
pub use lattice::{
    build_lattice, gram_analysis, lattice_inner_products, orthonormality_test,
    projected_reconstruct, smoothing_apply, st_equivalence_check, standard_cs, totality_test,
    BandReport, GcsLattice, GramReport, LatticeSpec, ProjectedReconstruction, Smoothing,
};

pub use wigner::{comb_wigner_check, wigner_transform, CombWignerReport, WignerArray};
