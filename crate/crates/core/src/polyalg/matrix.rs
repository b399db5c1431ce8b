use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default rank tolerance, relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-10;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Scalar = f64> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::LengthMismatch {
                needed: rows * cols,
                found: entries.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<T> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }
}

/// Singular values (descending) and the full set of right singular vectors.
#[derive(Debug, Clone)]
pub struct SvdReport<T: Scalar> {
    pub singular_values: Vec<f64>,
    /// Right singular vectors, paired with `singular_values`; padded to `cols` entries.
    pub right_vectors: Vec<Vec<T>>,
}

pub fn svd_report<T: Scalar>(a: &DenseMatrix<T>) -> Result<SvdReport<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.cols;
    if n == 0 {
        return Ok(SvdReport {
            singular_values: Vec::new(),
            right_vectors: Vec::new(),
        });
    }
    // Pad with zero rows so the thin SVD still yields all n right singular vectors.
    let m = a.rows.max(n);
    let mut full = DMatrix::<T>::zeros(m, n);
    for i in 0..a.rows {
        for j in 0..n {
            full[(i, j)] = a.get(i, j);
        }
    }
    let svd = full.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::NonFinite)?;
    let mut pairs: Vec<(f64, Vec<T>)> = (0..n)
        .map(|k| {
            let v = (0..n).map(|j| v_t[(k, j)].conjugate()).collect();
            (svd.singular_values[k], v)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (singular_values, right_vectors) = pairs.into_iter().unzip();
    Ok(SvdReport {
        singular_values,
        right_vectors,
    })
}

/// Orthonormal basis of the numerical nullspace: right singular vectors with
/// `sigma <= rank_tol * sigma_max`.
pub fn nullspace<T: Scalar>(a: &DenseMatrix<T>, rank_tol: f64) -> Result<Vec<Vec<T>>> {
    let report = svd_report(a)?;
    let smax = report.singular_values.first().copied().unwrap_or(0.0);
    Ok(report
        .singular_values
        .iter()
        .zip(report.right_vectors)
        .filter(|(s, _)| **s <= rank_tol * smax)
        .map(|(_, v)| v)
        .collect())
}

pub fn numerical_rank<T: Scalar>(a: &DenseMatrix<T>, rank_tol: f64) -> Result<usize> {
    let report = svd_report(a)?;
    let smax = report.singular_values.first().copied().unwrap_or(0.0);
    Ok(report
        .singular_values
        .iter()
        .filter(|s| **s > rank_tol * smax && **s > 0.0)
        .count())
}

#[derive(Debug, Clone)]
pub struct LstsqSolution<T: Scalar> {
    pub x: Vec<T>,
    /// `sigma_max / sigma_min` of the column-equilibrated system.
    pub condition: f64,
    pub rank: usize,
}

/// Minimum-norm least-squares solution via SVD after column equilibration.
/// Singular values below `rcond * sigma_max` are discarded.
pub fn lstsq<T: Scalar>(a: &DenseMatrix<T>, b: &[T], rcond: f64) -> Result<LstsqSolution<T>> {
    if b.len() != a.rows {
        return Err(Error::LengthMismatch {
            needed: a.rows,
            found: b.len(),
        });
    }
    if !a.is_finite() || b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut mat = a.to_nalgebra();
    let scales: Vec<f64> = (0..a.cols)
        .map(|j| {
            let norm = mat.column(j).norm();
            if norm > 0.0 {
                1.0 / norm
            } else {
                1.0
            }
        })
        .collect();
    for (j, &s) in scales.iter().enumerate() {
        mat.column_mut(j).scale_mut(s);
    }
    let svd = mat.svd(true, true);
    let u = svd.u.ok_or(Error::NonFinite)?;
    let v_t = svd.v_t.ok_or(Error::NonFinite)?;
    let sv = &svd.singular_values;
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    let rhs = DVector::from_column_slice(b);
    let utb = u.adjoint() * rhs;
    let mut y = DVector::<T>::zeros(sv.len());
    let mut rank = 0;
    let mut smin = f64::INFINITY;
    for k in 0..sv.len() {
        smin = smin.min(sv[k]);
        if sv[k] > rcond * smax && sv[k] > 0.0 {
            y[k] = utb[k].unscale(sv[k]);
            rank += 1;
        }
    }
    let x = v_t.adjoint() * y;
    let x = (0..a.cols).map(|j| x[j].scale(scales[j])).collect();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    Ok(LstsqSolution { x, condition, rank })
}
