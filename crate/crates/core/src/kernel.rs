//! Known shift kernels `f` with closed-form transforms and moments.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::scalar::factorial;

/// A kernel `f` normalised so that `f̂(0) = 1` for the built-ins, with transform
/// convention `f̂(ω) = ∫ f(x) e^{-iωx} dx`.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `exp(-x²/2σ²) / (σ√(2π))`, `f̂(ω) = exp(-σ²ω²/2)`.
    Gaussian { sigma: f64 },
    /// `1/w` on `[-w/2, w/2]`, `f̂(ω) = sin(ωw/2)/(ωw/2)`.
    Box { width: f64 },
    /// `f̂ ≡ 1`.
    Dirac,
    /// Only the Taylor coefficients of `f̂` at the origin are known.
    Taylor(Vec<Complex64>),
}

impl Kernel {
    /// `f̂(ω)`, when a closed form exists.
    pub fn fhat(&self, omega: f64) -> Option<Complex64> {
        let re = match self {
            Kernel::Gaussian { sigma } => libm::exp(-0.5 * sigma * sigma * omega * omega),
            Kernel::Box { width } => {
                let t = 0.5 * omega * width;
                if t == 0.0 {
                    1.0
                } else {
                    libm::sin(t) / t
                }
            }
            Kernel::Dirac => 1.0,
            Kernel::Taylor(_) => return None,
        };
        Some(Complex64::new(re, 0.0))
    }

    /// Taylor coefficients `F_0..F_order` of `f̂` at the origin.
    pub fn fhat_taylor(&self, order: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        match self {
            Kernel::Gaussian { sigma } => {
                let q = -0.5 * sigma * sigma;
                let mut term = 1.0;
                for m in 0..=order / 2 {
                    out[2 * m] = Complex64::new(term, 0.0);
                    term *= q / (m as f64 + 1.0);
                }
            }
            Kernel::Box { width } => {
                let h = 0.5 * width;
                for m in 0..=order / 2 {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    out[2 * m] = Complex64::new(
                        sign * libm::pow(h, 2.0 * m as f64) / factorial(2 * m + 1),
                        0.0,
                    );
                }
            }
            Kernel::Dirac => out[0] = Complex64::new(1.0, 0.0),
            Kernel::Taylor(c) => {
                for (o, v) in out.iter_mut().zip(c) {
                    *o = *v;
                }
            }
        }
        out
    }

    /// Moments `∫ f(u) u^k du` for `k = 0..=order`.
    pub fn moments(&self, order: usize) -> Vec<f64> {
        match self {
            Kernel::Gaussian { sigma } => {
                let mut out = vec![0.0; order + 1];
                let mut even = 1.0;
                for m in 0..=order / 2 {
                    out[2 * m] = even;
                    even *= sigma * sigma * (2 * m + 1) as f64;
                }
                out
            }
            Kernel::Box { width } => {
                let h = 0.5 * width;
                (0..=order)
                    .map(|k| {
                        if k % 2 == 1 {
                            0.0
                        } else {
                            libm::pow(h, k as f64) / (k as f64 + 1.0)
                        }
                    })
                    .collect()
            }
            Kernel::Dirac => {
                let mut out = vec![0.0; order + 1];
                out[0] = 1.0;
                out
            }
            Kernel::Taylor(_) => {
                // F_j = μ_j (-i)^j / j!  =>  μ_j = F_j j! i^j
                let taylor = self.fhat_taylor(order);
                let mut ipow = Complex64::new(1.0, 0.0);
                taylor
                    .iter()
                    .enumerate()
                    .map(|(j, f)| {
                        let v = f * ipow * factorial(j);
                        ipow *= Complex64::new(0.0, 1.0);
                        v.re
                    })
                    .collect()
            }
        }
    }

    /// Kernel known only through its moments `∫ f(u) u^j du`; the transform series is
    /// `F_j = μ_j (-i)^j / j!`.
    pub fn from_moments(moments: &[f64]) -> Kernel {
        let mut ipow = Complex64::new(1.0, 0.0);
        Kernel::Taylor(
            moments
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let v = ipow * (*m / factorial(j));
                    ipow *= Complex64::new(0.0, -1.0);
                    v
                })
                .collect(),
        )
    }

    /// `f^{(l)}(x)` where a pointwise closed form exists (Gaussian for all `l`, box for `l = 0`).
    pub fn eval_derivative(&self, x: f64, l: usize) -> Option<f64> {
        match self {
            Kernel::Gaussian { sigma } => {
                let t = x / sigma;
                let base = libm::exp(-0.5 * t * t) / (sigma * libm::sqrt(2.0 * PI));
                let mut he_prev = 1.0;
                let mut he = t;
                let hermite = match l {
                    0 => 1.0,
                    _ => {
                        for n in 1..l {
                            let next = t * he - n as f64 * he_prev;
                            he_prev = he;
                            he = next;
                        }
                        he
                    }
                };
                let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
                Some(sign * hermite * base / libm::pow(*sigma, l as f64))
            }
            Kernel::Box { width } if l == 0 => {
                if x.abs() <= 0.5 * width {
                    Some(1.0 / width)
                } else {
                    Some(0.0)
                }
            }
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        self.eval_derivative(x, 0)
    }

    /// Interval outside which the kernel is negligible (exactly zero for the box).
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Kernel::Gaussian { sigma } => Some((-12.0 * sigma, 12.0 * sigma)),
            Kernel::Box { width } => Some((-0.5 * width, 0.5 * width)),
            _ => None,
        }
    }

    /// Jump locations of `f` inside its support, used to split quadrature.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Kernel::Box { width } => vec![-0.5 * width, 0.5 * width],
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};

    #[test]
    fn closed_forms_match_quadrature() {
        let opts = QuadOptions::default();
        for kernel in [Kernel::Gaussian { sigma: 0.7 }, Kernel::Box { width: 1.3 }] {
            let (lo, hi) = kernel.support().unwrap();
            let mu = kernel.moments(6);
            for (k, m) in mu.iter().enumerate() {
                let q = integrate(|x| kernel.eval(x).unwrap() * libm::pow(x, k as f64), lo, hi, opts)
                    .unwrap();
                assert!((q - m).abs() < 1e-12, "{kernel:?} k={k}: {q} vs {m}");
            }
            for omega in [0.0, 0.5, 2.0] {
                let re = integrate(|x| kernel.eval(x).unwrap() * libm::cos(omega * x), lo, hi, opts)
                    .unwrap();
                assert!((re - kernel.fhat(omega).unwrap().re).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn taylor_kernel_moments_invert_the_series() {
        let g = Kernel::Gaussian { sigma: 0.8 };
        let t = Kernel::Taylor(g.fhat_taylor(8));
        for (a, b) in g.moments(8).iter().zip(t.moments(8)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_list_round_trip() {
        let b = Kernel::Box { width: 0.9 };
        let custom = Kernel::from_moments(&b.moments(7));
        for (x, y) in b.moments(7).iter().zip(custom.moments(7)) {
            assert!((x - y).abs() < 1e-15);
        }
        for (x, y) in b.fhat_taylor(7).iter().zip(custom.fhat_taylor(7)) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn gaussian_derivative_by_finite_difference() {
        let g = Kernel::Gaussian { sigma: 0.6 };
        let h = 1e-5;
        for l in 1..4 {
            for x in [-0.9, 0.1, 0.4] {
                let fd = (g.eval_derivative(x + h, l - 1).unwrap()
                    - g.eval_derivative(x - h, l - 1).unwrap())
                    / (2.0 * h);
                let exact = g.eval_derivative(x, l).unwrap();
                assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()));
            }
        }
    }
}
