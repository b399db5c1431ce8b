//! Convolution-dual coefficient tables and generalized moments.
//!
//! For a kernel `f` with `f̂(0) ≠ 0`, the polynomials
//! `ψ_n(t) = Σ_{k≤n} C_{n,k} t^k` satisfy `∫ f(t+x) ψ_n(t) dt = x^n`, which turns the
//! raw moments of a shift model `F(x) = Σ_j a_j f(x + x_j)` into the power sums
//! `M_n = Σ_k C_{n,k} m_k = Σ_j a_j x_j^n`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::moments::{FourierMeasurements, MomentSequence};
use crate::scalar::{binomial, factorial, Scalar};

/// Transforms with modulus below this are treated as vanishing.
pub const FHAT_ZERO_TOL: f64 = 1e-14;

/// A kernel plus the scale applied to every dual coefficient. With the transform
/// convention `f̂(ω) = ∫ f e^{-iωx} dx` a scale of 1 yields the exact dual.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub kernel: Kernel,
    pub convention_scale: f64,
}

impl KernelSpec {
    pub fn new(kernel: Kernel) -> Self {
        KernelSpec {
            kernel,
            convention_scale: 1.0,
        }
    }

    pub fn fhat_taylor(&self, order: usize) -> Vec<Complex64> {
        self.kernel.fhat_taylor(order)
    }

    pub fn fhat_eval(&self, k: i64) -> Option<Complex64> {
        self.kernel.fhat(k as f64)
    }
}

/// Lower-triangular table `C_{n,k}`, `0 ≤ k ≤ n ≤ order`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCoefficients {
    order: usize,
    rows: Vec<Vec<Complex64>>,
}

impl DualCoefficients {
    /// Builds a table from explicit rows; row `n` must hold exactly `n + 1` entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("empty coefficient table"));
        }
        for (n, r) in rows.iter().enumerate() {
            if r.len() != n + 1 {
                return Err(Error::LengthMismatch {
                    needed: n + 1,
                    found: r.len(),
                });
            }
        }
        Ok(DualCoefficients {
            order: rows.len() - 1,
            rows,
        })
    }

    pub fn identity(order: usize) -> Self {
        let rows = (0..=order)
            .map(|n| {
                let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
                r[n] = Complex64::new(1.0, 0.0);
                r
            })
            .collect();
        DualCoefficients { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `C_{n,k}`; zero above the diagonal.
    pub fn get(&self, n: usize, k: usize) -> Complex64 {
        if k > n || n > self.order {
            Complex64::new(0.0, 0.0)
        } else {
            self.rows[n][k]
        }
    }

    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.rows[n]
    }

    /// `ψ_n(t)`.
    pub fn psi(&self, n: usize, t: f64) -> Complex64 {
        self.rows[n]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }
}

/// Taylor coefficients `g_0..g_order` of `1/f̂` from those of `f̂`.
pub fn inverse_taylor<T: Scalar>(fhat_taylor: &[T], order: usize) -> Result<Vec<T>> {
    if fhat_taylor.len() < order + 1 {
        return Err(Error::LengthMismatch {
            needed: order + 1,
            found: fhat_taylor.len(),
        });
    }
    let scale = fhat_taylor.iter().fold(0.0f64, |m, c| m.max(c.abs_val()));
    let f0 = fhat_taylor[0];
    if f0.abs_val() <= FHAT_ZERO_TOL * scale || scale == 0.0 {
        return Err(Error::ZeroAtOrigin);
    }
    let inv0 = T::one() / f0;
    let mut g: Vec<T> = Vec::with_capacity(order + 1);
    g.push(inv0);
    for s in 1..=order {
        let acc = (1..=s).fold(T::zero(), |acc, t| acc + fhat_taylor[t] * g[s - t]);
        g.push(-acc * inv0);
    }
    Ok(g)
}

/// `C_{n,k} = scale · binom(n,k) · (-i)^{n+k} · (n-k)! · g_{n-k}`.
pub fn dual_coefficients(spec: &KernelSpec, order: usize) -> Result<DualCoefficients> {
    let g = inverse_taylor(&spec.fhat_taylor(order), order)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let rows = (0..=order)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    let phase = minus_i.powu((n + k) as u32);
                    phase
                        * g[n - k]
                        * (spec.convention_scale * binomial(n, k) * factorial(n - k))
                })
                .collect()
        })
        .collect();
    Ok(DualCoefficients { order, rows })
}

/// `M_n = Σ_{k≤n} C_{n,k} m_k` for `n = 0..=C.order`.
pub fn generalized_poly_moments<T: Scalar>(
    m: &MomentSequence<T>,
    table: &DualCoefficients,
) -> Result<MomentSequence<Complex64>> {
    let needed = table.order + 1;
    if m.len() < needed {
        return Err(Error::LengthMismatch {
            needed,
            found: m.len(),
        });
    }
    let values = m.values();
    let out = (0..needed)
        .map(|n| {
            table.rows[n]
                .iter()
                .zip(values)
                .fold(Complex64::new(0.0, 0.0), |acc, (c, v)| acc + c * v.to_complex())
        })
        .collect();
    let mut seq = MomentSequence::new(out).with_provenance(m.provenance());
    if let Some((a, b)) = m.interval() {
        seq = MomentSequence::on_interval(seq.into_values(), a, b, m.provenance());
    }
    Ok(seq)
}

/// `M_k = μ_k / f̂(-k)` for `k = 0..=k_range`, so that `M_k = Σ_j a_j e^{-ikx_j}` for
/// `F(x) = Σ_j a_j f(x + x_j)` and `μ_k = ∫ F(t) e^{ikt} dt`.
pub fn fourier_generalized_moments(
    mu: &FourierMeasurements,
    spec: &KernelSpec,
    k_range: usize,
) -> Result<MomentSequence<Complex64>> {
    let mut out = Vec::with_capacity(k_range + 1);
    for k in 0..=k_range as i64 {
        let fhat = spec.fhat_eval(-k).ok_or(Error::NoTransformEvaluator)?;
        if fhat.norm() <= FHAT_ZERO_TOL {
            return Err(Error::VanishingFhat { k });
        }
        let value = mu.get(k).ok_or(Error::MissingCoefficient { k })?;
        out.push(value / (fhat * spec.convention_scale));
    }
    Ok(MomentSequence::new(out).with_provenance(mu.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};
    use alloc::collections::BTreeMap;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn reciprocal_series() {
        assert_eq!(inverse_taylor(&[1.0, 0.0, 0.0], 2).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(
            inverse_taylor(&[1.0, 1.0, 0.0, 0.0], 3).unwrap(),
            vec![1.0, -1.0, 1.0, -1.0]
        );
        // 1/exp(-ω²/2) = exp(ω²/2) = 1 + ω²/2 + ω⁴/8 + ω⁶/48
        let g = Kernel::Gaussian { sigma: 1.0 }.fhat_taylor(6);
        let inv = inverse_taylor(&g, 6).unwrap();
        let expected = [1.0, 0.0, 0.5, 0.0, 0.125, 0.0, 1.0 / 48.0];
        for (a, b) in inv.iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(inverse_taylor(&[0.0, 1.0], 1), Err(Error::ZeroAtOrigin));
        assert!(matches!(
            inverse_taylor(&[1.0], 2),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn dirac_table_is_signed_diagonal() {
        let table = dual_coefficients(&KernelSpec::new(Kernel::Dirac), 5).unwrap();
        for n in 0..=5 {
            for k in 0..=n {
                let expected = if k == n {
                    if n % 2 == 0 { 1.0 } else { -1.0 }
                } else {
                    0.0
                };
                assert!((table.get(n, k) - c(expected)).norm() < 1e-15);
            }
            assert_eq!(table.get(n, n + 1), c(0.0));
        }
    }

    #[test]
    fn diagonal_and_gaussian_entries() {
        let spec = KernelSpec {
            kernel: Kernel::Taylor(vec![c(2.0), c(0.3), c(0.1)]),
            convention_scale: 0.5,
        };
        let table = dual_coefficients(&spec, 2).unwrap();
        for n in 0..=2 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((table.get(n, n) - c(0.5 * sign / 2.0)).norm() < 1e-15);
        }
        let spec = KernelSpec {
            kernel: Kernel::Gaussian { sigma: 1.0 },
            convention_scale: 1.7,
        };
        let table = dual_coefficients(&spec, 2).unwrap();
        assert!((table.get(2, 0) - c(-1.7)).norm() < 1e-15);
    }

    #[test]
    fn identity_and_diagonal_tables() {
        let m = MomentSequence::new(vec![0.3, -1.0, 2.5]);
        let out = generalized_poly_moments(&m, &DualCoefficients::identity(2)).unwrap();
        assert_eq!(out.values(), &[c(0.3), c(-1.0), c(2.5)]);

        let table = dual_coefficients(&KernelSpec::new(Kernel::Dirac), 2).unwrap();
        let out = generalized_poly_moments(&MomentSequence::new(vec![1.0, 1.0, 1.0]), &table)
            .unwrap();
        assert_eq!(out.values(), &[c(1.0), c(-1.0), c(1.0)]);
        assert!(matches!(
            generalized_poly_moments(&MomentSequence::new(vec![1.0]), &table),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn gaussian_table_turns_shifted_moments_into_powers() {
        let kernel = Kernel::Gaussian { sigma: 0.4 };
        let shift = 0.35;
        let opts = QuadOptions::default();
        // moments of F(x) = f(x + shift) by quadrature
        let m: Vec<f64> = (0..8)
            .map(|k| {
                integrate(
                    |x| kernel.eval(x + shift).unwrap() * libm::pow(x, k as f64),
                    -shift - 6.0,
                    -shift + 6.0,
                    opts,
                )
                .unwrap()
            })
            .collect();
        let table = dual_coefficients(&KernelSpec::new(kernel), 7).unwrap();
        let out = generalized_poly_moments(&MomentSequence::new(m), &table).unwrap();
        for (n, v) in out.values().iter().enumerate() {
            assert!((v - c(libm::pow(shift, n as f64))).norm() < 1e-11, "n={n}");
        }
    }

    #[test]
    fn defining_property_by_quadrature() {
        let opts = QuadOptions::default();
        for kernel in [Kernel::Gaussian { sigma: 0.5 }, Kernel::Box { width: 0.8 }] {
            let table = dual_coefficients(&KernelSpec::new(kernel.clone()), 6).unwrap();
            let (lo, hi) = kernel.support().unwrap();
            for x in [-0.9, -0.2, 0.0, 0.45, 1.1] {
                for n in 0..=6 {
                    let v = integrate(
                        |t| kernel.eval(t + x).unwrap() * table.psi(n, t).re,
                        lo - x,
                        hi - x,
                        opts,
                    )
                    .unwrap();
                    let target = libm::pow(x, n as f64);
                    assert!((v - target).abs() < 1e-9, "{kernel:?} n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn fourier_examples() {
        let spec = KernelSpec::new(Kernel::Dirac);
        let mut mu = FourierMeasurements::default();
        for k in -4..=4 {
            mu.coefficients.insert(k, c(1.0));
        }
        let out = fourier_generalized_moments(&mu, &spec, 4).unwrap();
        assert!(out.values().iter().all(|v| (v - c(1.0)).norm() < 1e-15));

        // a = 1 at x = π: μ_k = e^{-ikπ}
        let mut mu = FourierMeasurements::default();
        for k in -4i64..=4 {
            mu.coefficients.insert(k, Complex64::from_polar(1.0, -(k as f64) * core::f64::consts::PI));
        }
        let out = fourier_generalized_moments(&mu, &spec, 4).unwrap();
        for (k, v) in out.values().iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v - c(sign)).norm() < 1e-14);
        }
    }

    #[test]
    fn fourier_errors() {
        let mut mu = FourierMeasurements {
            coefficients: BTreeMap::new(),
            ..Default::default()
        };
        mu.coefficients.insert(0, c(1.0));
        let boxed = KernelSpec::new(Kernel::Box {
            width: core::f64::consts::PI,
        });
        mu.coefficients.insert(1, c(1.0));
        mu.coefficients.insert(2, c(1.0));
        assert_eq!(
            fourier_generalized_moments(&mu, &boxed, 2),
            Err(Error::VanishingFhat { k: 2 })
        );
        let dirac = KernelSpec::new(Kernel::Dirac);
        assert_eq!(
            fourier_generalized_moments(&mu, &dirac, 3),
            Err(Error::MissingCoefficient { k: 3 })
        );
        let taylor = KernelSpec::new(Kernel::Taylor(vec![c(1.0)]));
        assert_eq!(
            fourier_generalized_moments(&mu, &taylor, 1),
            Err(Error::NoTransformEvaluator)
        );
    }

    proptest! {
        #[test]
        fn even_real_kernels_give_real_checkerboard(sigma in 0.1f64..2.0, width in 0.1f64..3.0) {
            for kernel in [Kernel::Gaussian { sigma }, Kernel::Box { width }] {
                let table = dual_coefficients(&KernelSpec::new(kernel), 8).unwrap();
                for n in 0..=8 {
                    for k in 0..=n {
                        let v = table.get(n, k);
                        prop_assert!(v.im.abs() <= 1e-12 * (1.0 + v.norm()));
                        if (n + k) % 2 == 1 {
                            prop_assert!(v.norm() == 0.0);
                        }
                    }
                }
            }
        }

        #[test]
        fn reciprocal_is_an_involution(
            head in 0.5f64..2.0,
            tail in proptest::collection::vec(-1.0f64..1.0, 6)
        ) {
            let mut f = vec![head];
            f.extend(tail);
            let g = inverse_taylor(&f, 6).unwrap();
            let back = inverse_taylor(&g, 6).unwrap();
            for (a, b) in f.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
            }
        }
    }
}
