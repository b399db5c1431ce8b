//! The subcommands as plain functions from parsed files to output files.

use clap::ValueEnum;
use momrec_core::convdual::{
    dual_coefficients, fourier_generalized_moments, generalized_poly_moments, DualCoefficients, KernelSpec,
};
use momrec_core::dfinite::{
    basis_moment_matrix, continuity_intervals, fundamental_basis, pade_hermite_residual, reconstruct,
    recurrence_residual, ReconstructOptions,
};
use momrec_core::kernel::Kernel;
use momrec_core::prony::{shift_model_from_moments, solve_fourier_shifts};
use momrec_core::quad::QuadOptions;
use momrec_core::signals::SignalSpec;
use momrec_core::{Error, MomentSequence};

use crate::error::CliError;
use crate::schema::{KernelJson, MeasurementFile, ModelFile, PronyFile, SignalFile, Status, Version, VerifyReport};

pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
pub const DEFAULT_VERIFY_TOL: f64 = 1e-8;
pub const DEFAULT_TRUNCATION: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Poly,
    Fourier,
}

/// Parses `--degs`: comma-separated degree bounds, `-` for an absent coefficient.
pub fn parse_degrees(text: &str) -> Result<Vec<Option<usize>>, String> {
    text.split(',')
        .map(|t| match t.trim() {
            "-" => Ok(None),
            d => d.parse().map(Some).map_err(|e| format!("bad degree {d:?}: {e}")),
        })
        .collect()
}

/// Validates a signal file and returns its canonical form.
pub fn synth(spec: SignalFile) -> Result<SignalFile, CliError> {
    spec.to_spec()?;
    Ok(spec)
}

/// Moments `m_0..m_kmax` or Fourier coefficients `μ_k`, `|k| ≤ kmax`.
///
/// A shift model's power moments are stated on the kernel's effective support; without
/// one the interval spans the shifted origins.
pub fn moments(signal: &SignalFile, kmax: usize, kind: Kind, tol: f64) -> Result<MeasurementFile, CliError> {
    let spec = signal.to_spec()?;
    match kind {
        Kind::Poly => {
            let m = spec.moments(kmax, tol).map_err(CliError::solver)?;
            let interval = match &spec {
                SignalSpec::Piecewise(p) => p.interval(),
                SignalSpec::Shift(s) => s.support().unwrap_or_else(|| {
                    let lo = s.terms().iter().map(|t| -t.shift).fold(f64::INFINITY, f64::min);
                    let hi = s.terms().iter().map(|t| -t.shift).fold(f64::NEG_INFINITY, f64::max);
                    (lo - 1.0, hi + 1.0)
                }),
            };
            Ok(MeasurementFile::from_moments(&m, interval))
        }
        Kind::Fourier => {
            let mu = spec.fourier_coefficients(kmax as u64, tol).map_err(CliError::solver)?;
            Ok(MeasurementFile::from_fourier(&mu))
        }
    }
}

fn stage(name: &'static str) -> impl FnOnce(Error) -> CliError {
    move |e| match e {
        Error::QuadratureFailure { .. } => CliError::Quadrature(format!("stage {name}: {e}")),
        _ => CliError::Solver(format!("stage {name}: {e}")),
    }
}

/// Dual transform of the measurements followed by the matching Prony solve. Without a
/// kernel the values are taken as the generalized moments `M_n` themselves.
pub fn prony(meas: &MeasurementFile, s: usize, r: usize, kernel: Option<&KernelJson>) -> Result<PronyFile, CliError> {
    let spec = KernelSpec::new(kernel.map(KernelJson::to_kernel).transpose()?.unwrap_or(Kernel::Dirac));
    let model = match meas {
        MeasurementFile::Poly(_) => {
            let m = meas.to_moments()?;
            let table = match kernel {
                Some(_) => dual_coefficients(&spec, m.len() - 1).map_err(stage("dual_coefficients"))?,
                None => DualCoefficients::identity(m.len() - 1),
            };
            let big = generalized_poly_moments(&m, &table).map_err(stage("generalized_moments"))?;
            shift_model_from_moments(&big, s, r).map_err(stage("solve_prony"))?
        }
        MeasurementFile::Fourier(_) => {
            if r != 0 {
                return Err(CliError::Schema("derivative orders need polynomial moments".into()));
            }
            let mu = meas.to_fourier()?;
            let present = (0..).take_while(|&k| mu.get(k).is_some()).count();
            if present == 0 {
                return Err(CliError::Schema("Fourier measurements lack frequency 0".into()));
            }
            let big = fourier_generalized_moments(&mu, &spec, present - 1).map_err(stage("generalized_moments"))?;
            solve_fourier_shifts(&big, s).map_err(stage("solve_fourier_shifts"))?
        }
    };
    log::debug!("prony residual {:e}", model.solution.residual());
    let model = if kernel.is_some() { model.with_kernel(spec) } else { model };
    Ok(PronyFile::from_model(&model, s, r))
}

/// Piecewise D-finite reconstruction from power moments.
pub fn dfinite(
    meas: &MeasurementFile,
    order: usize,
    degs: &[Option<usize>],
    jumps: usize,
    opts: &ReconstructOptions,
) -> Result<ModelFile, CliError> {
    if order == 0 || degs.len() != order + 1 {
        return Err(CliError::Schema(format!(
            "--degs has {} entries, order {order} needs {}",
            degs.len(),
            order + 1
        )));
    }
    let m = meas.to_moments()?;
    let (a, b) = meas.interval();
    let model = reconstruct(&m, order, degs, jumps, a, b, opts).map_err(CliError::solver)?;
    log::debug!("reconstruction diagnostics {:?}", model.diagnostics);
    Ok(ModelFile::from_model(&model, opts.basis_nodes))
}

fn report(status: Status, tol: f64, model: &ModelFile, message: Option<String>) -> VerifyReport {
    VerifyReport {
        schema_version: Version,
        status,
        tol,
        jumps: model.jumps.clone(),
        recurrence_residual: None,
        pade_hermite_residual: None,
        truncation: None,
        moment_residual: None,
        message,
    }
}

/// `max_k |Σ_c C_{k,c} α_c - m_k| / max|m|` with the basis integrated afresh from the
/// model's operator.
fn moment_match(model: &ModelFile, m: &MomentSequence) -> Result<f64, CliError> {
    let op = model.operator()?;
    let (a, b) = (model.interval[0], model.interval[1]);
    let bases = continuity_intervals(a, b, &model.jumps)
        .into_iter()
        .map(|iv| fundamental_basis(&op, iv, model.basis_nodes))
        .collect::<Result<Vec<_>, _>>()
        .map_err(stage("fundamental_basis"))?;
    let c = basis_moment_matrix(&bases, m.len() - 1, QuadOptions::default()).map_err(stage("basis_moment_matrix"))?;
    let alpha: Vec<f64> = model.amplitudes.iter().flatten().copied().collect();
    let fitted = c.mul_vec(&alpha);
    let misfit = fitted
        .iter()
        .zip(m.values())
        .fold(0.0f64, |acc, (f, v)| acc.max((f - v).abs()));
    Ok(misfit / m.max_abs())
}

fn check_shape(model: &ModelFile) -> Result<(), CliError> {
    let [a, b] = model.interval;
    if !(a < b) {
        return Err(CliError::Schema("model interval must satisfy a < b".into()));
    }
    let mut prev = a;
    for &xi in &model.jumps {
        if !(xi > prev && xi < b) {
            return Err(CliError::Schema("model jumps must increase strictly inside the interval".into()));
        }
        prev = xi;
    }
    if model.amplitudes.len() != model.jumps.len() + 1 || model.amplitudes.iter().any(|a| a.len() != model.order) {
        return Err(CliError::Schema(format!(
            "amplitudes must be {} rows of {} values",
            model.jumps.len() + 1,
            model.order
        )));
    }
    Ok(())
}

/// Residual checks of a model against measurements. Only malformed files are errors;
/// a failing model is a `FAIL` report.
pub fn verify(model: &ModelFile, meas: &MeasurementFile, tol: f64, truncation: usize) -> Result<VerifyReport, CliError> {
    check_shape(model)?;
    let op = model.operator()?;
    let m = meas.to_moments()?;
    if m.max_abs() == 0.0 {
        return Ok(report(Status::Degenerate, tol, model, Some("moment sequence is identically zero".into())));
    }
    if meas.interval() != (model.interval[0], model.interval[1]) {
        return Ok(report(
            Status::Fail,
            tol,
            model,
            Some("model and measurements are on different intervals".into()),
        ));
    }
    let (a, b) = meas.interval();
    let mut out = report(Status::Fail, tol, model, None);
    let mut problems = Vec::new();
    match op.augmented(&model.jumps) {
        Ok(annihilator) => {
            match recurrence_residual(&m, &annihilator, a, b) {
                Ok(r) => out.recurrence_residual = Some(r),
                Err(e) => problems.push(format!("recurrence residual: {e}")),
            }
            let reach = m.len().saturating_sub(1 + 2 * annihilator.order());
            let t = truncation.min(reach);
            match pade_hermite_residual(&annihilator, &m, t, a, b) {
                Ok(ph) => {
                    out.pade_hermite_residual = Some(ph.residual);
                    out.truncation = Some(t);
                }
                Err(e) => problems.push(format!("Padé-Hermite residual: {e}")),
            }
        }
        Err(e) => problems.push(format!("annihilator: {e}")),
    }
    match moment_match(model, &m) {
        Ok(r) => out.moment_residual = Some(r),
        Err(e) => problems.push(e.to_string()),
    }
    let residuals = [out.recurrence_residual, out.pade_hermite_residual, out.moment_residual];
    let pass = problems.is_empty() && residuals.iter().all(|r| r.is_some_and(|r| r <= tol));
    out.status = if pass { Status::Pass } else { Status::Fail };
    if !problems.is_empty() {
        out.message = Some(problems.join("; "));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("0,-,0"), Ok(vec![Some(0), None, Some(0)]));
        assert_eq!(parse_degrees("-, 2"), Ok(vec![None, Some(2)]));
        assert!(parse_degrees("1,x").is_err());
    }
}
