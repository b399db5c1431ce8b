use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::polyalg::{DenseMatrix, Polynomial};
use crate::scalar::falling_factorial;

use super::operator::{unknowns, DifferentialOperator};

/// `(Π^{(i,j)}(k, E) m)_k = c · m_{k+i-j}`: returns `(c, i - j)` with
/// `c = (-1)^j (i+k)!/(i+k-j)!`, zero whenever `i + k < j`.
pub fn pi_coefficient(i: usize, j: usize, k: usize) -> (f64, i64) {
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    (sign * falling_factorial(i + k, j), i as i64 - j as i64)
}

/// `(E - a)^N (E - b)^N` as a polynomial in the forward shift `E`.
pub fn boundary_operator(a: f64, b: f64, n: usize) -> Polynomial<f64> {
    let mut nodes = alloc::vec![a; n];
    nodes.extend(core::iter::repeat_n(b, n));
    Polynomial::from_roots(&nodes)
}

/// `v^{(i,j)}_k = Σ_t L_t c(i, j, k+t) m_{k+t+i-j}`: the shift polynomial `L` acts on the
/// sequence `k ↦ (Π^{(i,j)}(k, E) m)_k`.
pub fn v_entry(m: &[f64], i: usize, j: usize, k: usize, l: &Polynomial<f64>) -> Result<f64> {
    let mut acc = 0.0;
    for (t, lt) in l.coeffs().iter().enumerate() {
        let (c, _) = pi_coefficient(i, j, k + t);
        if c == 0.0 || *lt == 0.0 {
            continue;
        }
        // c ≠ 0 implies i + k + t ≥ j
        let idx = i + k + t - j;
        let mv = m.get(idx).ok_or(Error::InsufficientMoments {
            needed: idx + 1,
            available: m.len(),
        })?;
        acc += lt * c * mv;
    }
    Ok(acc)
}

/// `Σ_t |L_t c(i, j, k+t) m_{k+t+i-j}|`, the magnitude of the terms summed in
/// [`v_entry`]; rounding error in the entry is proportional to it.
pub fn v_entry_magnitude(m: &[f64], i: usize, j: usize, k: usize, l: &Polynomial<f64>) -> f64 {
    l.coeffs()
        .iter()
        .enumerate()
        .map(|(t, lt)| {
            let (c, _) = pi_coefficient(i, j, k + t);
            if c == 0.0 {
                return 0.0;
            }
            m.get(i + k + t - j).map_or(0.0, |mv| (lt * c * mv).abs())
        })
        .sum()
}

/// Per-row rounding scale of [`annihilator_matrix`]: the largest term magnitude in the row.
pub fn annihilator_row_scales(
    m: &MomentSequence,
    order: usize,
    degs: &[Option<usize>],
    a: f64,
    b: f64,
    rows: usize,
) -> Vec<f64> {
    let l = boundary_operator(a, b, order);
    (0..rows)
        .map(|k| {
            degs.iter()
                .enumerate()
                .filter_map(|(j, d)| d.map(|d| (j, d)))
                .flat_map(|(j, d)| (0..=d).map(move |i| (i, j)))
                .map(|(i, j)| v_entry_magnitude(m.values(), i, j, k, &l))
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Number of recurrence rows `k = 0..rows` for which every entry is available.
pub fn admissible_rows(len: usize, degs: &[Option<usize>]) -> usize {
    let n = degs.len().saturating_sub(1);
    let reach = degs
        .iter()
        .enumerate()
        .filter_map(|(j, d)| d.map(|d| d as i64 - j as i64))
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    len.saturating_sub(2 * n + reach)
}

/// The `rows × Σ(d_j+1)` matrix `H` with `H a = 0` for annihilators `a`; columns run
/// over `(i, j)` with `j` outermost.
pub fn annihilator_matrix(
    m: &MomentSequence,
    order: usize,
    degs: &[Option<usize>],
    a: f64,
    b: f64,
    rows: usize,
) -> Result<DenseMatrix<f64>> {
    if degs.len() != order + 1 {
        return Err(Error::LengthMismatch {
            needed: order + 1,
            found: degs.len(),
        });
    }
    if !(a < b) {
        return Err(Error::InvalidInput("interval must satisfy a < b"));
    }
    let cols = unknowns(degs);
    if rows < cols {
        return Err(Error::InvalidInput("need at least as many rows as unknowns"));
    }
    let l = boundary_operator(a, b, order);
    let mut h = DenseMatrix::zeros(rows, cols);
    for k in 0..rows {
        let mut col = 0;
        for (j, d) in degs.iter().enumerate() {
            let Some(d) = d else { continue };
            for i in 0..=*d {
                h.set(k, col, v_entry(m.values(), i, j, k, &l)?);
                col += 1;
            }
        }
    }
    Ok(h)
}

fn recurrence_rows(m: &[f64], op: &DifferentialOperator, a: f64, b: f64, rows: usize) -> Result<Vec<f64>> {
    let l = boundary_operator(a, b, op.order());
    (0..rows)
        .map(|k| {
            let mut acc = 0.0;
            for (j, p) in op.coeffs().iter().enumerate() {
                for (i, c) in p.coeffs().iter().enumerate() {
                    if *c != 0.0 {
                        acc += c * v_entry(m, i, j, k, &l)?;
                    }
                }
            }
            Ok(acc)
        })
        .collect()
}

fn moment_scale(m: &MomentSequence) -> Result<f64> {
    let scale = m.max_abs();
    if scale == 0.0 {
        return Err(Error::DegenerateMoments);
    }
    Ok(scale)
}

/// `max_k |Σ_{i,j} a_{i,j} v^{(i,j)}_k| / max|m|` over every admissible row.
pub fn recurrence_residual(m: &MomentSequence, op: &DifferentialOperator, a: f64, b: f64) -> Result<f64> {
    let degs: Vec<Option<usize>> = op.coeffs().iter().map(|p| p.degree()).collect();
    let rows = admissible_rows(m.len(), &degs);
    if rows == 0 {
        let n = op.order();
        return Err(Error::InsufficientMoments {
            needed: m.len() + 1 + 2 * n,
            available: m.len(),
        });
    }
    let scale = moment_scale(m)?;
    Ok(recurrence_rows(m.values(), op, a, b, rows)?
        .iter()
        .fold(0.0f64, |acc, r| acc.max(r.abs()))
        / scale)
}

/// Polynomial dependence check: with `h_j(z) = Σ_k v^{(0,j)}_k z^k`, the coefficients of
/// `Σ_j h_j(z) z^D p_j(1/z)` vanish from `z^D` up to the truncation `T`, `D = max d_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeHermite {
    /// Largest coefficient magnitude for powers `D..=T`, relative to `max|m_k|` over the
    /// moments `k ≤ T + 2N` that the truncated series reads.
    pub residual: f64,
    /// Coefficients of `z^0..z^{D-1}`, the polynomial part `Q`.
    pub q: Vec<f64>,
}

pub fn pade_hermite_residual(
    op: &DifferentialOperator,
    m: &MomentSequence,
    truncation: usize,
    a: f64,
    b: f64,
) -> Result<PadeHermite> {
    let n = op.order();
    let l = boundary_operator(a, b, n);
    let top = op.coeffs().iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    if truncation < top {
        return Err(Error::InvalidInput("truncation must reach the largest coefficient degree"));
    }
    let used = m.len().min(truncation + 2 * n + 1);
    let scale = moment_scale(&MomentSequence::new(m.values()[..used].to_vec()))?;
    let h: Vec<Vec<f64>> = (0..=n)
        .map(|j| (0..=truncation).map(|k| v_entry(m.values(), 0, j, k, &l)).collect())
        .collect::<Result<_>>()?;
    let coefficient = |power: usize| -> f64 {
        let mut acc = 0.0;
        for (j, p) in op.coeffs().iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                // z^{top} p_j(1/z) contributes c z^{top - i}
                if power + i >= top {
                    acc += c * h[j][power + i - top];
                }
            }
        }
        acc
    };
    let residual = (top..=truncation).map(|p| coefficient(p).abs()).fold(0.0, f64::max) / scale;
    let q = (0..top).map(coefficient).collect();
    Ok(PadeHermite { residual, q })
}
