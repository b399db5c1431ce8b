use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::scalar::Scalar;

/// Relative tolerance below which trailing coefficients do not count toward the degree.
pub const TRIM_TOL: f64 = 1e-12;

/// Dense univariate polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Scalar = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Exact trailing zeros are dropped; near-zero ones are kept until [`Polynomial::trimmed`].
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| *c == T::zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut coeffs = vec![T::one()];
        for &r in roots {
            let mut next = vec![T::zero(); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs_val()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Drops trailing coefficients with `|c| <= tol * max|c|`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let cutoff = tol * self.max_abs();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs_val() <= cutoff) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Degree under the default trim tolerance; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.degree_with(TRIM_TOL)
    }

    pub fn degree_with(&self, tol: f64) -> Option<usize> {
        let t = self.trimmed(tol);
        t.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c.to_complex())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * T::from_real(i as f64))
            .collect();
        Self::new(coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn to_complex(&self) -> Polynomial<Complex64> {
        Polynomial::new(self.coeffs.iter().map(|c| c.to_complex()).collect())
    }

    /// Divides out `(x - r)` once by synthetic division; returns quotient and remainder.
    pub fn deflate(&self, r: T) -> (Self, T) {
        if self.coeffs.is_empty() {
            return (Self::zero(), T::zero());
        }
        let n = self.coeffs.len() - 1;
        let mut quotient = vec![T::zero(); n];
        let mut acc = T::zero();
        for i in (0..=n).rev() {
            acc = acc * r + self.coeffs[i];
            if i > 0 {
                quotient[i - 1] = acc;
            }
        }
        (Self::new(quotient), acc)
    }
}

impl Polynomial<Complex64> {
    /// Real part of each coefficient.
    pub fn re(&self) -> Polynomial<f64> {
        Polynomial::new(self.coeffs.iter().map(|c| c.re).collect())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(i).copied().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Polynomial::new(coeffs)
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        self + &rhs.scale(-T::one())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}
