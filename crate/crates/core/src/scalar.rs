use nalgebra::ComplexField;
use num_complex::Complex64;

/// Field of coefficients used by the polynomial and linear-algebra kernels:
/// `f64` or `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    fn to_complex(self) -> Complex64 {
        Complex64::new(self.real(), self.imaginary())
    }

    fn abs_val(self) -> f64 {
        self.modulus()
    }
}

impl<T: ComplexField<RealField = f64> + Copy> Scalar for T {}

pub(crate) fn falling_factorial(n: usize, j: usize) -> f64 {
    if j > n {
        return 0.0;
    }
    (0..j).fold(1.0, |acc, t| acc * (n - t) as f64)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

pub(crate) fn factorial(n: usize) -> f64 {
    falling_factorial(n, n)
}

pub(crate) fn powi(x: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}
