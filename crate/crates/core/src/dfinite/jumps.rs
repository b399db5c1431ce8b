use alloc::vec::Vec;

use crate::error::{Error, Result, Warning};
use crate::polyalg::{common_roots_with, CommonRootOptions, Polynomial};

use super::operator::DifferentialOperator;

/// Clustering radius for roots of multiplicity `n` on `[a, b]`; perturbed `n`-fold roots
/// spread roughly like `δ^{1/n}`.
pub fn default_jump_radius(a: f64, b: f64, n: usize) -> f64 {
    (b - a) * libm::pow(10.0, -6.0 / n.max(1) as f64).max(1e-6)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpExtraction {
    /// Increasing jump locations strictly inside `(a, b)`.
    pub jumps: Vec<f64>,
    /// The operator with `∏ (x - ξ)^N` divided out of every coefficient.
    pub reduced: DifferentialOperator,
    /// Cluster spread per jump, a proxy for its accuracy.
    pub spreads: Vec<f64>,
    pub warnings: Vec<Warning>,
}

/// Finds the `p` common roots of multiplicity `N` shared by the coefficients of `op`
/// inside `(a, b)` and deflates them; `tol` is the clustering radius.
pub fn extract_jumps(op: &DifferentialOperator, p: usize, a: f64, b: f64, tol: f64) -> Result<JumpExtraction> {
    extract_shared_jumps(op, &[], p, a, b, tol)
}

/// As [`extract_jumps`], but a root only counts when it is also shared by every polynomial
/// in `companions`, e.g. the coefficients of the other null vectors of an ambiguous system.
pub fn extract_shared_jumps(
    op: &DifferentialOperator,
    companions: &[Polynomial<f64>],
    p: usize,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<JumpExtraction> {
    let n = op.order();
    if p == 0 {
        return Ok(JumpExtraction {
            jumps: Vec::new(),
            reduced: op.clone(),
            spreads: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let mut polys = op.coeffs().to_vec();
    let scale = polys.iter().fold(0.0f64, |m, q| m.max(q.max_abs()));
    polys.extend(companions.iter().map(|q| {
        let s = q.max_abs();
        if s > 0.0 { q.scale(scale / s) } else { q.clone() }
    }));
    let common = common_roots_with(
        &polys,
        n,
        CommonRootOptions {
            radius: tol,
            ..CommonRootOptions::default()
        },
    )?;
    let mut warnings: Vec<Warning> = common
        .rejected
        .iter()
        .map(|&root| Warning::RejectedRoot { root })
        .collect();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for (root, spread) in common.roots.iter().zip(&common.spreads) {
        if root.im.abs() <= tol.max(1e-9) && root.re > a && root.re < b {
            found.push((root.re, *spread));
        } else {
            warnings.push(Warning::RejectedRoot { root: *root });
        }
    }
    if found.len() != p {
        return Err(Error::JumpCountMismatch {
            expected: p,
            found: found.len(),
        });
    }
    found.sort_by(|x, y| x.0.total_cmp(&y.0));
    let jumps: Vec<f64> = found.iter().map(|f| f.0).collect();
    let reduced = deflated_operator(op, &jumps, p)?;
    Ok(JumpExtraction {
        jumps,
        reduced,
        spreads: found.iter().map(|f| f.1).collect(),
        warnings,
    })
}

fn deflated_operator(op: &DifferentialOperator, jumps: &[f64], p: usize) -> Result<DifferentialOperator> {
    let n = op.order();
    let scale = op.coeffs().iter().fold(0.0f64, |m, q| m.max(q.max_abs()));
    let coeffs: Vec<Polynomial<f64>> = op
        .coeffs()
        .iter()
        .map(|q| {
            if q.max_abs() <= CommonRootOptions::default().zero_tol * scale {
                return Polynomial::zero();
            }
            let mut out = q.clone();
            for &xi in jumps {
                for _ in 0..n {
                    out = out.deflate(xi).0;
                }
            }
            out
        })
        .collect();
    let degrees = op
        .degrees()
        .iter()
        .zip(&coeffs)
        .map(|(d, q)| match d {
            Some(d) if !q.is_zero() => Some(d.saturating_sub(p * n)),
            _ => None,
        })
        .collect();
    DifferentialOperator::new(degrees, coeffs)
}
