//! Piecewise D-finite reconstruction from power moments on `[a, b]`.

mod basis;
mod jumps;
mod operator;
mod polish;
mod reconstruct;
mod recurrence;

pub use basis::{chebyshev_nodes, fundamental_basis, IntervalBasis, DEFAULT_NODES, ODE_RTOL, SINGULAR_TOL};
pub use jumps::{default_jump_radius, extract_jumps, extract_shared_jumps, JumpExtraction};
pub use polish::{jump_contrast, polish_jumps, scan_jumps, PolishedJumps, SCAN_POINTS};
pub use operator::{augment_degrees, unknowns, Degrees, DifferentialOperator};
pub use reconstruct::{
    basis_moment_matrix, continuity_intervals, fit_pieces, reconstruct, solve_amplitudes, solve_annihilator,
    solve_annihilator_weighted,
    AmplitudeSolution, AnnihilatorSolution, Diagnostics, PiecewiseDFiniteModel, ReconstructOptions,
    AMPLITUDE_RCOND, EXISTENCE_TOL, SCAN_CONTRAST, SCAN_OFFSET,
};
pub use recurrence::{
    admissible_rows, annihilator_matrix, annihilator_row_scales, boundary_operator, pade_hermite_residual, pi_coefficient,
    recurrence_residual, v_entry, v_entry_magnitude, PadeHermite,
};
