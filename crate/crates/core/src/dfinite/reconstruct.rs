use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, Stage, Warning};
use crate::moments::MomentSequence;
use crate::polyalg::{lstsq, svd_report, DenseMatrix, Polynomial, RANK_TOL};
use crate::quad::{integrate_vec, QuadOptions};
use crate::signals::Evaluate;

use super::basis::{fundamental_basis, IntervalBasis, DEFAULT_NODES};
use super::jumps::{default_jump_radius, extract_shared_jumps, JumpExtraction};
use super::polish::{jump_contrast, newton_refine, polish_jumps, scan_jumps};
use super::operator::{augment_degrees, unknowns, Degrees, DifferentialOperator};
use super::recurrence::{admissible_rows, annihilator_matrix, annihilator_row_scales, recurrence_residual};

/// An annihilator exists when the smallest equilibrated singular value is at most this
/// fraction of the largest; finite differences of order `2N` on the moments lose several
/// digits, so this is looser than the rank tolerance used to count null directions.
pub const EXISTENCE_TOL: f64 = 1e-6;

/// Relative singular-value cutoff in the amplitude solve.
pub const AMPLITUDE_RCOND: f64 = 1e-13;

/// Relative jump offset and objective ratio that a scanned jump must show to count as
/// determined by the data.
pub const SCAN_OFFSET: f64 = 1e-2;
pub const SCAN_CONTRAST: f64 = 1e2;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatorSolution {
    pub operator: DifferentialOperator,
    /// Singular values at or below `rank_tol · σ_max` after equilibration.
    pub nullspace_dimension: usize,
    /// Singular values of the equilibrated matrix, descending.
    pub singular_values: Vec<f64>,
    /// Stacked coefficient vectors spanning the numerical nullspace.
    pub nullspace: Vec<Vec<f64>>,
    pub warnings: Vec<Warning>,
}

impl AnnihilatorSolution {
    pub fn is_ambiguous(&self) -> bool {
        self.nullspace_dimension > 1
    }
}

fn equilibrate(h: &DenseMatrix<f64>, row_scales: Option<&[f64]>) -> (DenseMatrix<f64>, Vec<f64>) {
    let mut scaled = h.clone();
    for r in 0..h.rows() {
        let s = match row_scales {
            Some(w) => w[r],
            None => h.row(r).iter().fold(0.0f64, |m, v| m.max(v.abs())),
        };
        if s > 0.0 {
            for c in 0..h.cols() {
                scaled.set(r, c, h.get(r, c) / s);
            }
        }
    }
    let col_scale: Vec<f64> = (0..h.cols())
        .map(|c| {
            let norm = libm::sqrt((0..h.rows()).map(|r| { let v = scaled.get(r, c); v * v }).sum::<f64>());
            if norm > 0.0 {
                1.0 / norm
            } else {
                1.0
            }
        })
        .collect();
    for r in 0..h.rows() {
        for (c, s) in col_scale.iter().enumerate() {
            scaled.set(r, c, scaled.get(r, c) * s);
        }
    }
    (scaled, col_scale)
}

/// Unit-norm null vector of `H` (rows and columns equilibrated first), reshaped into an
/// operator with coefficient bounds `degs`. With a multi-dimensional nullspace the vector
/// of the smallest singular value is returned and the dimension reported, unless its
/// leading coefficient vanishes; then the nullspace vector with the largest leading
/// part is used.
pub fn solve_annihilator(h: &DenseMatrix<f64>, degs: &[Option<usize>], rank_tol: f64) -> Result<AnnihilatorSolution> {
    solve_annihilator_weighted(h, None, degs, rank_tol)
}

/// As [`solve_annihilator`], with rows divided by `row_scales` instead of their largest
/// entry; passing the rounding scales of each row weights equations by their accuracy.
pub fn solve_annihilator_weighted(
    h: &DenseMatrix<f64>,
    row_scales: Option<&[f64]>,
    degs: &[Option<usize>],
    rank_tol: f64,
) -> Result<AnnihilatorSolution> {
    if row_scales.is_some_and(|w| w.len() != h.rows()) {
        return Err(Error::LengthMismatch {
            needed: h.rows(),
            found: row_scales.map_or(0, <[f64]>::len),
        });
    }
    if h.cols() != unknowns(degs) {
        return Err(Error::LengthMismatch {
            needed: unknowns(degs),
            found: h.cols(),
        });
    }
    let (scaled, col_scale) = equilibrate(h, row_scales);
    let report = svd_report(&scaled)?;
    let smax = report.singular_values.first().copied().unwrap_or(0.0);
    let dim = report
        .singular_values
        .iter()
        .filter(|&&s| s <= rank_tol * smax)
        .count();
    let smin = report.singular_values.last().copied().unwrap_or(0.0);
    if dim == 0 && smin > EXISTENCE_TOL * smax {
        return Err(Error::EmptyNullspace);
    }
    let dim = dim.max(1);
    let unscale = |y: &[f64]| -> Vec<f64> { y.iter().zip(&col_scale).map(|(y, s)| y * s).collect() };
    let n_cols = h.cols();
    let lead_len = degs.last().copied().flatten().map_or(0, |d| d + 1);
    let lead_start = n_cols - lead_len;
    let candidate = unscale(&report.right_vectors[n_cols - 1]);
    let nullspace: Vec<Vec<f64>> = report.right_vectors[n_cols - dim..].iter().map(|v| unscale(v)).collect();
    let mut warnings = Vec::new();
    if dim > 1 {
        warnings.push(Warning::AmbiguousNullspace { dimension: dim });
    }
    let operator = match DifferentialOperator::from_vector(degs.to_vec(), &candidate) {
        Ok(op) => op,
        Err(Error::InvalidOperator(_)) if dim > 1 => {
            // Maximise the leading block over the nullspace.
            let basis = &nullspace;
            let block = DenseMatrix::from_fn(lead_len, dim, |r, c| basis[c][lead_start + r]);
            let w = svd_report(&block)?.right_vectors.swap_remove(0);
            let combined: Vec<f64> = (0..n_cols)
                .map(|r| basis.iter().zip(&w).map(|(v, w)| v[r] * w).sum())
                .collect();
            DifferentialOperator::from_vector(degs.to_vec(), &combined)?
        }
        Err(e) => return Err(e),
    };
    Ok(AnnihilatorSolution {
        operator,
        nullspace_dimension: dim,
        singular_values: report.singular_values,
        nullspace,
        warnings,
    })
}

/// `(k_max+1) × N(p+1)` matrix of `∫_{ξ_n}^{ξ_{n+1}} x^k u_i(x) dx`, all `i` for `n = 0` first.
pub fn basis_moment_matrix(bases: &[IntervalBasis], k_max: usize, opts: QuadOptions) -> Result<DenseMatrix<f64>> {
    let cols: usize = bases.iter().map(IntervalBasis::len).sum();
    let mut c = DenseMatrix::zeros(k_max + 1, cols);
    let mut offset = 0;
    for basis in bases {
        let n = basis.len();
        let (lo, hi) = basis.interval();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let mut u = vec![0.0; n];
        let values = integrate_vec(
            |x, out| {
                basis.eval_all(x, &mut u);
                let mut p = 1.0;
                for k in 0..=k_max {
                    for i in 0..n {
                        out[k * n + i] = p * u[i];
                    }
                    p *= x / scale;
                }
            },
            (k_max + 1) * n,
            lo,
            hi,
            opts,
        )?;
        let mut power = 1.0;
        for k in 0..=k_max {
            for i in 0..n {
                c.set(k, offset + i, power * values[k * n + i]);
            }
            power *= scale;
        }
        offset += n;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSolution {
    pub alpha: Vec<f64>,
    /// `max_k |(C α - m)_k| / max|m|`.
    pub residual: f64,
    /// Euclidean norm of the row-scaled least-squares residual.
    pub scaled_residual: f64,
    pub condition: f64,
}

/// Least-squares solve of `C α = m` with rows scaled to unit maximum.
pub fn solve_amplitudes(c: &DenseMatrix<f64>, m: &MomentSequence) -> Result<AmplitudeSolution> {
    if c.rows() != m.len() {
        return Err(Error::LengthMismatch {
            needed: c.rows(),
            found: m.len(),
        });
    }
    if c.rows() < c.cols() {
        return Err(Error::InsufficientMoments {
            needed: c.cols(),
            available: m.len(),
        });
    }
    let mut scaled = c.clone();
    let mut rhs = m.values().to_vec();
    for r in 0..c.rows() {
        let s = c.row(r).iter().fold(m.values()[r].abs(), |acc, v| acc.max(v.abs()));
        if s > 0.0 {
            for col in 0..c.cols() {
                scaled.set(r, col, c.get(r, col) / s);
            }
            rhs[r] /= s;
        }
    }
    let sol = lstsq(&scaled, &rhs, AMPLITUDE_RCOND)?;
    if sol.rank < c.cols() {
        return Err(Error::RankDeficientBasis {
            condition: sol.condition,
        });
    }
    let scaled_residual = libm::sqrt(
        scaled
            .mul_vec(&sol.x)
            .iter()
            .zip(&rhs)
            .map(|(f, v)| (f - v) * (f - v))
            .sum::<f64>(),
    );
    let fitted = c.mul_vec(&sol.x);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let residual = fitted
        .iter()
        .zip(m.values())
        .fold(0.0f64, |acc, (f, v)| acc.max((f - v).abs()))
        / scale;
    Ok(AmplitudeSolution {
        alpha: sol.x,
        residual,
        scaled_residual,
        condition: sol.condition,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructOptions {
    /// Initial number of recurrence rows; defaults to twice the unknown count.
    pub rows: Option<usize>,
    pub rank_tol: f64,
    /// Jump clustering radius; defaults to [`default_jump_radius`].
    pub jump_radius: Option<f64>,
    pub basis_nodes: usize,
    pub quad: QuadOptions,
    /// Re-solve the reduced operator with the jump factor fixed and refine the jumps.
    pub polish: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            rows: None,
            rank_tol: RANK_TOL,
            jump_radius: None,
            basis_nodes: DEFAULT_NODES,
            quad: QuadOptions::default(),
            polish: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub rows: usize,
    pub nullspace_dimension: usize,
    /// Smallest two singular values of the equilibrated recurrence matrix, ascending.
    pub smallest_singular_values: Vec<f64>,
    pub jump_spreads: Vec<f64>,
    /// Jumps read off the common roots, before polishing.
    pub raw_jumps: Vec<f64>,
    pub moment_residual: f64,
    pub recurrence_residual: f64,
    pub amplitude_condition: f64,
    pub warnings: Vec<Warning>,
}

/// `f(x) = Σ_i α_{i,n} u_i(x)` on `[ξ_n, ξ_{n+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseDFiniteModel {
    pub interval: (f64, f64),
    pub jumps: Vec<f64>,
    /// Operator annihilating every piece.
    pub operator: DifferentialOperator,
    /// `∏ (x - ξ)^N · operator`, the annihilator of the whole signal.
    pub annihilator: DifferentialOperator,
    pub bases: Vec<IntervalBasis>,
    /// `amplitudes[n][i] = α_{i,n}`.
    pub amplitudes: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl PiecewiseDFiniteModel {
    pub fn piece_index(&self, x: f64) -> usize {
        self.jumps.iter().take_while(|&&xi| xi <= x).count()
    }
}

impl Evaluate for PiecewiseDFiniteModel {
    fn evaluate(&self, x: f64) -> f64 {
        let n = self.piece_index(x);
        self.amplitudes[n]
            .iter()
            .enumerate()
            .map(|(i, a)| a * self.bases[n].eval(i, x))
            .sum()
    }
}

/// Continuity intervals `[ξ_n, ξ_{n+1}]` of `[a, b]`.
pub fn continuity_intervals(a: f64, b: f64, jumps: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts = vec![a];
    cuts.extend_from_slice(jumps);
    cuts.push(b);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Steps after the jumps are known: basis per continuity interval, then the amplitudes.
pub fn fit_pieces(
    m: &MomentSequence,
    operator: &DifferentialOperator,
    jumps: &[f64],
    a: f64,
    b: f64,
    opts: &ReconstructOptions,
) -> Result<PiecewiseDFiniteModel> {
    let bases = continuity_intervals(a, b, jumps)
        .into_iter()
        .map(|iv| fundamental_basis(operator, iv, opts.basis_nodes))
        .collect::<Result<Vec<_>>>()
        .map_err(Error::at(Stage::FundamentalBasis))?;
    let c = basis_moment_matrix(&bases, m.len() - 1, opts.quad).map_err(Error::at(Stage::BasisMomentMatrix))?;
    let amps = solve_amplitudes(&c, m).map_err(Error::at(Stage::SolveAmplitudes))?;
    let n = operator.order();
    let amplitudes = amps.alpha.chunks(n).map(<[f64]>::to_vec).collect();
    let annihilator = operator.augmented(jumps)?;
    let recurrence = recurrence_residual(m, &annihilator, a, b).unwrap_or(f64::NAN);
    Ok(PiecewiseDFiniteModel {
        interval: (a, b),
        jumps: jumps.to_vec(),
        operator: operator.clone(),
        annihilator,
        bases,
        amplitudes,
        diagnostics: Diagnostics {
            moment_residual: amps.residual,
            recurrence_residual: recurrence,
            amplitude_condition: amps.condition,
            ..Diagnostics::default()
        },
    })
}

/// Full pipeline: augment degrees by `pN`, build and solve the recurrence system, extract
/// the jumps, integrate a basis on each continuity interval and fit the amplitudes.
pub fn reconstruct(
    m: &MomentSequence,
    order: usize,
    degs: &[Option<usize>],
    p: usize,
    a: f64,
    b: f64,
    opts: &ReconstructOptions,
) -> Result<PiecewiseDFiniteModel> {
    if degs.len() != order + 1 || order == 0 {
        return Err(Error::InvalidInput("degree list must have order + 1 entries"));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.max_abs() == 0.0 {
        return Err(Error::DegenerateMoments);
    }
    let aug: Degrees = augment_degrees(degs, p);
    let cols = unknowns(&aug);
    let available = admissible_rows(m.len(), &aug);
    if available < cols {
        return Err(Error::Stage {
            stage: Stage::AnnihilatorMatrix,
            source: alloc::boxed::Box::new(Error::InsufficientMoments {
                needed: m.len() + cols - available,
                available: m.len(),
            }),
        });
    }
    let mut rows = opts.rows.unwrap_or(2 * cols).clamp(cols, available);
    let mut previous: Option<usize> = None;
    let (solution, h, weights) = loop {
        let h = annihilator_matrix(m, order, &aug, a, b, rows).map_err(Error::at(Stage::AnnihilatorMatrix))?;
        let weights = annihilator_row_scales(m, order, &aug, a, b, rows);
        let sol = solve_annihilator_weighted(&h, Some(&weights), &aug, opts.rank_tol)
            .map_err(Error::at(Stage::SolveAnnihilator))?;
        let stable = previous == Some(sol.nullspace_dimension);
        if stable || rows == available || opts.rows.is_some() {
            break (sol, h, weights);
        }
        previous = Some(sol.nullspace_dimension);
        rows = (rows + rows / 2).min(available);
    };
    let companions: Vec<Polynomial<f64>> = if solution.is_ambiguous() {
        solution.nullspace.iter().flat_map(|v| split_coefficients(&aug, v)).collect()
    } else {
        Vec::new()
    };
    let (extraction, cluster_radius) = match locate_jumps(&solution.operator, &companions, p, a, b, opts.jump_radius) {
        Err(e @ Error::JumpCountMismatch { .. }) => {
            let scanned = scan_jumps(&h, &weights, degs, &aug, p, a, b).ok().filter(|found| {
                found.objective <= EXISTENCE_TOL
                    && jump_contrast(&h, &weights, degs, &aug, &found.jumps, SCAN_OFFSET * (b - a))
                        .is_ok_and(|c| c >= SCAN_CONTRAST)
            });
            match scanned {
                Some(found) => {
                    let extraction = JumpExtraction {
                        spreads: vec![0.0; p],
                        warnings: vec![Warning::JumpsFromScan { objective: found.objective }],
                        jumps: found.jumps,
                        reduced: found.operator,
                    };
                    (extraction, 0.0)
                }
                _ => return Err(Error::at(Stage::ExtractJumps)(e)),
            }
        }
        other => other.map_err(Error::at(Stage::ExtractJumps))?,
    };
    let scanned = extraction.warnings.iter().any(|w| matches!(w, Warning::JumpsFromScan { .. }));
    let (jumps, reduced) = if opts.polish && p > 0 && !scanned {
        let radius: Vec<f64> = extraction
            .spreads
            .iter()
            .map(|s| (4.0 * s).max(cluster_radius).max(1e-4 * (b - a)))
            .collect();
        match polish_jumps(&h, &weights, degs, &aug, &extraction.jumps, &radius, a, b) {
            Ok(polished) => (polished.jumps, polished.operator),
            Err(_) => (extraction.jumps.clone(), extraction.reduced.clone()),
        }
    } else {
        (extraction.jumps.clone(), extraction.reduced.clone())
    };
    let jumps = if opts.polish && p > 0 { refine_by_moments(m, &reduced, jumps, a, b, opts) } else { jumps };
    let mut model = fit_pieces(m, &reduced, &jumps, a, b, opts)?;
    let mut smallest: Vec<f64> = solution.singular_values.iter().rev().take(2).copied().collect();
    smallest.sort_by(f64::total_cmp);
    let d = &mut model.diagnostics;
    d.rows = rows;
    d.nullspace_dimension = solution.nullspace_dimension;
    d.smallest_singular_values = smallest;
    d.jump_spreads = extraction.spreads;
    d.raw_jumps = extraction.jumps;
    d.warnings = solution.warnings;
    d.warnings.extend(extraction.warnings);
    Ok(model)
}

/// Largest jump move, relative to `b - a`, in [`refine_by_moments`].
const MOMENT_REFINE_RADIUS: f64 = 1e-3;

fn amplitude_misfit(m: &MomentSequence, op: &DifferentialOperator, jumps: &[f64], a: f64, b: f64, opts: &ReconstructOptions) -> Result<f64> {
    let bases = continuity_intervals(a, b, jumps)
        .into_iter()
        .map(|iv| fundamental_basis(op, iv, opts.basis_nodes))
        .collect::<Result<Vec<_>>>()?;
    let c = basis_moment_matrix(&bases, m.len() - 1, opts.quad)?;
    Ok(solve_amplitudes(&c, m)?.scaled_residual)
}

/// Moves the jumps to minimise the least-squares moment misfit of the fitted pieces,
/// keeping the operator fixed. Returns the input when nothing improves.
fn refine_by_moments(
    m: &MomentSequence,
    op: &DifferentialOperator,
    jumps: Vec<f64>,
    a: f64,
    b: f64,
    opts: &ReconstructOptions,
) -> Vec<f64> {
    let Ok(start) = amplitude_misfit(m, op, &jumps, a, b, opts) else {
        return jumps;
    };
    let radius = MOMENT_REFINE_RADIUS * (b - a);
    let origin = jumps.clone();
    let f = |x: &[f64]| -> Result<f64> {
        let inside = x.iter().zip(&origin).all(|(x, o)| (x - o).abs() <= radius && *x > a && *x < b)
            && x.windows(2).all(|w| w[0] < w[1]);
        if !inside {
            return Ok(f64::INFINITY);
        }
        Ok(amplitude_misfit(m, op, x, a, b, opts).map_or(f64::INFINITY, |r| r * r))
    };
    match newton_refine(f, jumps.clone(), radius) {
        Ok(refined) if amplitude_misfit(m, op, &refined, a, b, opts).is_ok_and(|r| r < start) => refined,
        _ => jumps,
    }
}

fn split_coefficients(degs: &[Option<usize>], v: &[f64]) -> Vec<Polynomial<f64>> {
    let mut offset = 0;
    degs.iter()
        .flatten()
        .map(|d| {
            let p = Polynomial::new(v[offset..offset + d + 1].to_vec());
            offset += d + 1;
            p
        })
        .collect()
}

/// Common-root extraction, doubling the clustering radius while too few jumps qualify.
/// A fixed `radius` disables the search. Returns the radius that succeeded.
fn locate_jumps(
    op: &DifferentialOperator,
    companions: &[Polynomial<f64>],
    p: usize,
    a: f64,
    b: f64,
    radius: Option<f64>,
) -> Result<(JumpExtraction, f64)> {
    if let Some(r) = radius {
        return extract_shared_jumps(op, companions, p, a, b, r).map(|e| (e, r));
    }
    let cap = (b - a) / (2.0 * (p + 1) as f64);
    let mut r = default_jump_radius(a, b, op.order());
    loop {
        match extract_shared_jumps(op, companions, p, a, b, r) {
            Err(Error::JumpCountMismatch { found, .. }) if found < p && 2.0 * r <= cap => r *= 2.0,
            other => return other.map(|e| (e, r)),
        }
    }
}
