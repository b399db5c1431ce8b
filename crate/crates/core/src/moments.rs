use alloc::vec::Vec;

use num_complex::Complex64;

use crate::scalar::Scalar;

/// Where a moment sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Provenance {
    Analytic,
    Quadrature,
    #[default]
    External,
}

/// Ordered measurements `m_0..m_K`, optionally tied to an interval `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<T: Scalar = f64> {
    values: Vec<T>,
    interval: Option<(f64, f64)>,
    provenance: Provenance,
}

impl<T: Scalar> MomentSequence<T> {
    pub fn new(values: Vec<T>) -> Self {
        MomentSequence {
            values,
            interval: None,
            provenance: Provenance::External,
        }
    }

    pub fn on_interval(values: Vec<T>, a: f64, b: f64, provenance: Provenance) -> Self {
        MomentSequence {
            values,
            interval: Some((a, b)),
            provenance,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        self.interval
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs_val()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> MomentSequence<U> {
        MomentSequence {
            values: self.values.iter().map(|&v| f(v)).collect(),
            interval: self.interval,
            provenance: self.provenance,
        }
    }

    pub fn to_complex(&self) -> MomentSequence<Complex64> {
        self.map(|v| v.to_complex())
    }
}

impl MomentSequence<Complex64> {
    /// Real projection, available when every imaginary part is below
    /// `rel_tol * max|M|`.
    pub fn project_real(&self, rel_tol: f64) -> Option<MomentSequence<f64>> {
        let cutoff = rel_tol * self.max_abs();
        if self.values.iter().all(|v| v.im.abs() <= cutoff) {
            Some(self.map(|v| v.re))
        } else {
            None
        }
    }
}

impl<T: Scalar> From<Vec<T>> for MomentSequence<T> {
    fn from(values: Vec<T>) -> Self {
        MomentSequence::new(values)
    }
}

/// Fourier measurements `μ_k = ∫ F(t) e^{ikt} dt` keyed by integer frequency.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierMeasurements {
    pub coefficients: alloc::collections::BTreeMap<i64, Complex64>,
    pub interval: Option<(f64, f64)>,
    pub provenance: Provenance,
}

impl FourierMeasurements {
    pub fn get(&self, k: i64) -> Option<Complex64> {
        self.coefficients.get(&k).copied()
    }

    pub fn k_range(&self) -> u64 {
        self.coefficients
            .keys()
            .map(|k| k.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}
