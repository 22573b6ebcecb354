//! Schwarz domain-decomposition methods for the 2D time-harmonic Navier
//! (elastic wave) equations: closed-form Fourier analysis of classical and
//! optimized transmission conditions on half planes, and a finite-element
//! stack (P1 triangles, RAS/ORAS preconditioners, GMRES) that reproduces the
//! predicted behavior on bounded domains.
//!
//! The two layers are independent: [`symbols`] and [`scan`] answer "does the
//! iteration contract at wavenumber k, and how fast", while the mesh, FEM,
//! decomposition, and solver modules run the actual iterations the analysis
//! predicts. `examples/` exercises one capability each; the `navier-schwarz`
//! binary drives the full experiment configurations.

pub mod config;
pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod factor;
pub mod fem;
pub mod gmres;
pub mod history;
pub mod medium;
pub mod mesh;
pub mod scan;
pub mod schwarz;
pub mod sparse;
pub mod symbols;

pub use config::{parse_config, Expectation, ExperimentConfig, ExperimentKind, ScanVariant};
pub use decomposition::{
    build_pou, extract_submesh, grow_overlap, partition_elements, Decomposition,
    PartitionStrategy, Submesh,
};
pub use error::{Error, Result};
pub use experiments::{
    max_rho_taylor0, run_delta_star, run_grid_experiment, run_symbol_scan, run_transmission,
    run_two_subdomain, RunManifest,
};
pub use factor::{factorize, SparseFactorization};
pub use fem::{
    absorbing_sigma, assemble_local_oras, assemble_navier, l2_norm, plane_wave,
    plane_wave_abc_data, plane_wave_source, plane_wave_traction, AssembledSystem, BcKind,
    BoundaryConditions, BoundaryField, VectorField, VectorP1Space, PLANE_WAVE_DIRECTION,
};
pub use gmres::{gmres, KrylovConfig};
pub use history::{ConvergenceHistory, HistoryRow, IterationFlag};
pub use medium::{wave_speeds, ElasticMedium};
pub use mesh::{build_rect_mesh, BoundaryEdge, SideTag, TriangleMesh};
pub use scan::{scan_rho, RhoScan, RhoVariant, SkippedPoint};
pub use schwarz::{
    setup_oras, setup_ras, stationary_iterate, PreconditionerKind, SchwarzPreconditioner,
};
pub use sparse::ComplexSparseMatrix;
pub use symbols::{
    delta_star, delta_star_alpha, find_kstar, mode_roots, optimal_symbols, rho_classical,
    rho_general, rho_taylor_closed, taylor_symbols, ModeRoots, RhoResult, TransmissionSymbol,
};
