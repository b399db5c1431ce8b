//! Synthetic signals with exact or high-accuracy moments and Fourier coefficients.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::moments::{FourierMeasurements, MomentSequence, Provenance};
use crate::polyalg::{roots, Polynomial};
use crate::quad::{integrate_vec, QuadOptions};
use crate::scalar::{binomial, falling_factorial, powi};

/// Relative tolerance of the quadrature oracles, a few ulps.
pub const ORACLE_REL_TOL: f64 = 1e-14;

/// Default Fourier domain, one period of `e^{ikx}`.
pub const FOURIER_DOMAIN: (f64, f64) = (0.0, core::f64::consts::TAU);

/// Pointwise evaluation; at a breakpoint the right limit is returned.
pub trait Evaluate {
    fn evaluate(&self, x: f64) -> f64;

    fn sample(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&x| self.evaluate(x)).collect()
    }
}

/// Largest pointwise difference between two signals on `grid`.
pub fn sup_norm_diff(f: &impl Evaluate, g: &impl Evaluate, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&x| (f.evaluate(x) - g.evaluate(x)).abs())
        .fold(0.0, f64::max)
}

/// `n` equally spaced points covering `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub type Callable = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Piece {
    Polynomial(Polynomial<f64>),
    /// `amplitude · sin(frequency · x + phase)`.
    Sinusoid { amplitude: f64, frequency: f64, phase: f64 },
    Rational { numerator: Polynomial<f64>, denominator: Polynomial<f64> },
    Callable(Callable),
}

impl Piece {
    pub fn constant(c: f64) -> Piece {
        Piece::Polynomial(Polynomial::constant(c))
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Piece {
        Piece::Polynomial(Polynomial::new(coeffs))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Piece::Polynomial(p) => p.eval(x),
            Piece::Sinusoid { amplitude, frequency, phase } => amplitude * libm::sin(frequency * x + phase),
            Piece::Rational { numerator, denominator } => numerator.eval(x) / denominator.eval(x),
            Piece::Callable(f) => f(x),
        }
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            Piece::Sinusoid { amplitude, frequency, phase } => f
                .debug_struct("Sinusoid")
                .field("amplitude", amplitude)
                .field("frequency", frequency)
                .field("phase", phase)
                .finish(),
            Piece::Rational { numerator, denominator } => f
                .debug_struct("Rational")
                .field("numerator", numerator)
                .field("denominator", denominator)
                .finish(),
            Piece::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Piece::Polynomial(a), Piece::Polynomial(b)) => a == b,
            (
                Piece::Sinusoid { amplitude: a0, frequency: f0, phase: p0 },
                Piece::Sinusoid { amplitude: a1, frequency: f1, phase: p1 },
            ) => a0 == a1 && f0 == f1 && p0 == p1,
            (
                Piece::Rational { numerator: n0, denominator: d0 },
                Piece::Rational { numerator: n1, denominator: d1 },
            ) => n0 == n1 && d0 == d1,
            (Piece::Callable(a), Piece::Callable(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// A function on `[a, b]` given piece by piece between strictly increasing breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSpec {
    interval: (f64, f64),
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

impl PiecewiseSpec {
    pub fn new(interval: (f64, f64), breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput("interval must satisfy a < b"));
        }
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::LengthMismatch {
                needed: breakpoints.len() + 1,
                found: pieces.len(),
            });
        }
        let mut prev = a;
        for &xi in &breakpoints {
            if !(xi > prev && xi < b) {
                return Err(Error::InvalidInput("breakpoints must increase strictly inside (a, b)"));
            }
            prev = xi;
        }
        let spec = PiecewiseSpec { interval, breakpoints, pieces };
        for (n, piece) in spec.pieces.iter().enumerate() {
            if let Piece::Rational { denominator, .. } = piece {
                let (lo, hi) = spec.piece_bounds(n);
                if denominator.is_zero() {
                    return Err(Error::InvalidInput("rational piece has a zero denominator"));
                }
                let pole = roots(denominator)?
                    .iter()
                    .any(|z| z.im.abs() <= 1e-9 && z.re >= lo - 1e-12 && z.re <= hi + 1e-12);
                if pole {
                    return Err(Error::InvalidInput("rational piece has a pole on its interval"));
                }
            }
        }
        Ok(spec)
    }

    /// One piece covering the whole interval.
    pub fn single(interval: (f64, f64), piece: Piece) -> Result<Self> {
        Self::new(interval, Vec::new(), vec![piece])
    }

    /// Piecewise polynomial from ascending coefficient lists.
    pub fn polynomials(interval: (f64, f64), breakpoints: Vec<f64>, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(interval, breakpoints, coeffs.into_iter().map(Piece::polynomial).collect())
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `(ξ_n, ξ_{n+1})` with `ξ_0 = a` and `ξ_{p+1} = b`.
    pub fn piece_bounds(&self, n: usize) -> (f64, f64) {
        let lo = if n == 0 { self.interval.0 } else { self.breakpoints[n - 1] };
        let hi = self.breakpoints.get(n).copied().unwrap_or(self.interval.1);
        (lo, hi)
    }

    /// Index of the piece owning `x`, counting breakpoints `≤ x`.
    pub fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.iter().take_while(|&&xi| xi <= x).count()
    }

    pub fn is_polynomial(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p, Piece::Polynomial(_)))
    }
}

impl Evaluate for PiecewiseSpec {
    fn evaluate(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval(x)
    }
}

/// One term group `Σ_l a_l f^{(l)}(x + shift)` of a shift model.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTerm {
    pub shift: f64,
    /// `amplitudes[l]` multiplies the `l`-th derivative of the kernel.
    pub amplitudes: Vec<f64>,
}

/// `F(x) = Σ_j Σ_l a_{j,l} f^{(l)}(x + x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSpec {
    kernel: Kernel,
    terms: Vec<ShiftTerm>,
}

impl ShiftSpec {
    pub fn new(kernel: Kernel, terms: Vec<ShiftTerm>) -> Result<Self> {
        if terms.is_empty() || terms.iter().any(|t| t.amplitudes.is_empty()) {
            return Err(Error::InvalidInput("every shift needs at least one amplitude"));
        }
        if terms.iter().any(|t| !t.shift.is_finite() || t.amplitudes.iter().any(|a| !a.is_finite())) {
            return Err(Error::NonFinite);
        }
        for (i, s) in terms.iter().enumerate() {
            if terms[..i].iter().any(|t| t.shift == s.shift) {
                return Err(Error::InvalidInput("shifts must be distinct"));
            }
        }
        Ok(ShiftSpec { kernel, terms })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn terms(&self) -> &[ShiftTerm] {
        &self.terms
    }

    /// Largest derivative order present.
    pub fn max_derivative(&self) -> usize {
        self.terms.iter().map(|t| t.amplitudes.len() - 1).max().unwrap_or(0)
    }

    /// Interval outside which `F` is negligible, if the kernel has a known support.
    pub fn support(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self.kernel.support()?;
        let min = self.terms.iter().map(|t| -t.shift).fold(f64::INFINITY, f64::min);
        let max = self.terms.iter().map(|t| -t.shift).fold(f64::NEG_INFINITY, f64::max);
        Some((min + lo, max + hi))
    }

    fn split_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|t| self.kernel.breakpoints().into_iter().map(move |b| b - t.shift))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

impl Evaluate for ShiftSpec {
    /// `NaN` when the kernel has no pointwise form for a requested derivative.
    fn evaluate(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            for (l, a) in t.amplitudes.iter().enumerate() {
                match self.kernel.eval_derivative(x + t.shift, l) {
                    Some(v) => acc += a * v,
                    None => return f64::NAN,
                }
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Piecewise(PiecewiseSpec),
    Shift(ShiftSpec),
}

impl SignalSpec {
    /// Moments `m_0..m_{k_max}`, in closed form where available.
    pub fn moments(&self, k_max: usize, tol: f64) -> Result<MomentSequence> {
        match self {
            SignalSpec::Piecewise(p) if p.is_polynomial() => pp_moments(p, k_max),
            SignalSpec::Piecewise(p) => quad_moments(p, k_max, tol),
            SignalSpec::Shift(s) => Ok(shift_model_moments(s, k_max)),
        }
    }

    pub fn fourier_coefficients(&self, k_range: u64, tol: f64) -> Result<FourierMeasurements> {
        match self {
            SignalSpec::Piecewise(p) => fourier_coefficients(p, k_range, tol),
            SignalSpec::Shift(s) => shift_fourier_coefficients(s, k_range, tol),
        }
    }
}

impl Evaluate for SignalSpec {
    fn evaluate(&self, x: f64) -> f64 {
        match self {
            SignalSpec::Piecewise(p) => p.evaluate(x),
            SignalSpec::Shift(s) => s.evaluate(x),
        }
    }
}

/// Exact moments of a piecewise polynomial from antiderivatives of `x^k p(x)`.
pub fn pp_moments(spec: &PiecewiseSpec, k_max: usize) -> Result<MomentSequence> {
    let mut m = vec![0.0; k_max + 1];
    for (n, piece) in spec.pieces.iter().enumerate() {
        let Piece::Polynomial(p) = piece else {
            return Err(Error::UnsupportedPiece);
        };
        let (lo, hi) = spec.piece_bounds(n);
        for (k, mk) in m.iter_mut().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                let e = k + i + 1;
                *mk += c * (powi(hi, e) - powi(lo, e)) / e as f64;
            }
        }
    }
    let (a, b) = spec.interval;
    Ok(MomentSequence::on_interval(m, a, b, Provenance::Analytic))
}

/// Moments by adaptive Gauss-Legendre quadrature on each piece, absolute tolerance `tol`.
pub fn quad_moments(spec: &PiecewiseSpec, k_max: usize, tol: f64) -> Result<MomentSequence> {
    let (a, b) = spec.interval;
    let mut m = vec![0.0; k_max + 1];
    for (n, piece) in spec.pieces.iter().enumerate() {
        let (lo, hi) = spec.piece_bounds(n);
        let opts = QuadOptions {
            rel_tol: ORACLE_REL_TOL,
            ..QuadOptions::with_abs_tol(tol * (hi - lo) / (b - a))
        };
        let part = integrate_vec(
            |x, out| {
                let mut v = piece.eval(x);
                for o in out.iter_mut() {
                    *o = v;
                    v *= x;
                }
            },
            k_max + 1,
            lo,
            hi,
            opts,
        )?;
        m.iter_mut().zip(part).for_each(|(acc, v)| *acc += v);
    }
    Ok(MomentSequence::on_interval(m, a, b, Provenance::Quadrature))
}

/// Exact moments of a shift model from the kernel moments `μ`:
/// `∫ u^k f^{(l)}(u) du = (-1)^l k!/(k-l)! μ_{k-l}` and a binomial change of variable.
pub fn shift_model_moments(spec: &ShiftSpec, k_max: usize) -> MomentSequence {
    let mu = spec.kernel.moments(k_max);
    let mut m = vec![0.0; k_max + 1];
    for t in &spec.terms {
        for (l, a) in t.amplitudes.iter().enumerate() {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            for (n, mn) in m.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in l..=n {
                    acc += binomial(n, k) * powi(-t.shift, n - k) * falling_factorial(k, l) * mu[k - l];
                }
                *mn += a * sign * acc;
            }
        }
    }
    MomentSequence::new(m).with_provenance(Provenance::Analytic)
}

fn fourier_on(
    f: impl Fn(f64) -> f64,
    segments: &[(f64, f64)],
    k_range: u64,
    tol: f64,
) -> Result<BTreeMap<i64, Complex64>> {
    let kmax = k_range as usize;
    let dim = 2 * (2 * kmax + 1);
    let total: f64 = segments.iter().map(|(lo, hi)| hi - lo).sum();
    let mut acc = vec![0.0; dim];
    for &(lo, hi) in segments {
        let opts = QuadOptions {
            rel_tol: ORACLE_REL_TOL,
            ..QuadOptions::with_abs_tol(tol * (hi - lo) / total)
        };
        let part = integrate_vec(
            |x, out| {
                let v = f(x);
                let step = Complex64::new(libm::cos(x), libm::sin(x));
                let mut up = Complex64::new(v, 0.0);
                let mut down = up;
                for k in 0..=kmax {
                    out[2 * (kmax + k)] = up.re;
                    out[2 * (kmax + k) + 1] = up.im;
                    out[2 * (kmax - k)] = down.re;
                    out[2 * (kmax - k) + 1] = down.im;
                    up *= step;
                    down *= step.conj();
                }
            },
            dim,
            lo,
            hi,
            opts,
        )?;
        acc.iter_mut().zip(part).for_each(|(a, v)| *a += v);
    }
    Ok((0..=2 * kmax)
        .map(|i| (i as i64 - kmax as i64, Complex64::new(acc[2 * i], acc[2 * i + 1])))
        .collect())
}

/// `μ_k = ∫_a^b F(t) e^{ikt} dt` for `|k| ≤ k_range`, split at the breakpoints.
pub fn fourier_coefficients(spec: &PiecewiseSpec, k_range: u64, tol: f64) -> Result<FourierMeasurements> {
    let segments: Vec<(f64, f64)> = (0..spec.pieces.len()).map(|n| spec.piece_bounds(n)).collect();
    let coefficients = fourier_on(|x| spec.evaluate(x), &segments, k_range, tol)?;
    Ok(FourierMeasurements {
        coefficients,
        interval: Some(spec.interval),
        provenance: Provenance::Quadrature,
    })
}

/// `μ_k = ∫ F(t) e^{ikt} dt` over the whole line for a shift model, by quadrature on its
/// effective support.
pub fn shift_fourier_coefficients(spec: &ShiftSpec, k_range: u64, tol: f64) -> Result<FourierMeasurements> {
    let (lo, hi) = spec
        .support()
        .ok_or(Error::InvalidInput("kernel has no pointwise form"))?;
    if spec.evaluate(0.5 * (lo + hi)).is_nan() {
        return Err(Error::InvalidInput("kernel has no pointwise form"));
    }
    let mut cuts = vec![lo];
    cuts.extend(spec.split_points().into_iter().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    let segments: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let coefficients = fourier_on(|x| spec.evaluate(x), &segments, k_range, tol)?;
    Ok(FourierMeasurements {
        coefficients,
        interval: None,
        provenance: Provenance::Quadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, PI, TAU};
    use proptest::prelude::*;

    fn step() -> PiecewiseSpec {
        PiecewiseSpec::new((0.0, 1.0), vec![0.5], vec![Piece::constant(1.0), Piece::constant(2.0)]).unwrap()
    }

    #[test]
    fn constant_moments() {
        let m = pp_moments(&PiecewiseSpec::single((0.0, 1.0), Piece::constant(1.0)).unwrap(), 10).unwrap();
        for (k, v) in m.values().iter().enumerate() {
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-15);
        }
        assert_eq!(m.provenance(), Provenance::Analytic);
        assert_eq!(m.interval(), Some((0.0, 1.0)));
    }

    #[test]
    fn step_moments() {
        let m = pp_moments(&step(), 12).unwrap();
        for (k, v) in m.values().iter().enumerate() {
            let k = k as f64;
            let expected = (2.0 - libm::pow(0.5, k + 1.0)) / (k + 1.0);
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn parabola_moments() {
        let spec = PiecewiseSpec::polynomials((-1.0, 1.0), vec![], vec![vec![0.0, 0.0, 1.0]]).unwrap();
        let m = pp_moments(&spec, 9).unwrap();
        for (k, v) in m.values().iter().enumerate() {
            let expected = (1.0 - libm::pow(-1.0, k as f64 + 3.0)) / (k as f64 + 3.0);
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn non_polynomial_pieces_need_quadrature() {
        let spec = PiecewiseSpec::single(
            (0.0, PI),
            Piece::Sinusoid { amplitude: 1.0, frequency: 1.0, phase: 0.0 },
        )
        .unwrap();
        assert_eq!(pp_moments(&spec, 3), Err(Error::UnsupportedPiece));
        let m = quad_moments(&spec, 1, 1e-12).unwrap();
        assert!((m.values()[0] - 2.0).abs() < 1e-12);
        assert!((m.values()[1] - PI).abs() < 1e-12);
        assert_eq!(m.provenance(), Provenance::Quadrature);
    }

    #[test]
    fn rational_moment() {
        let spec = PiecewiseSpec::single(
            (0.0, 1.0),
            Piece::Rational {
                numerator: Polynomial::constant(1.0),
                denominator: Polynomial::new(vec![1.0, 0.0, 1.0]),
            },
        )
        .unwrap();
        assert!((quad_moments(&spec, 0, 1e-12).unwrap().values()[0] - FRAC_PI_4).abs() < 1e-13);
    }

    #[test]
    fn validation() {
        assert!(PiecewiseSpec::new((0.0, 1.0), vec![1.0], vec![Piece::constant(0.0); 2]).is_err());
        assert!(PiecewiseSpec::new((0.0, 1.0), vec![0.6, 0.4], vec![Piece::constant(0.0); 3]).is_err());
        assert!(PiecewiseSpec::new((0.0, 1.0), vec![0.5], vec![Piece::constant(0.0)]).is_err());
        let pole = Piece::Rational {
            numerator: Polynomial::constant(1.0),
            denominator: Polynomial::new(vec![-0.5, 1.0]),
        };
        assert!(PiecewiseSpec::new((0.0, 1.0), vec![0.25], vec![Piece::constant(0.0), pole.clone()]).is_err());
        assert!(PiecewiseSpec::new((0.0, 1.0), vec![0.75], vec![Piece::constant(0.0), pole]).is_ok());
        let twice = vec![
            ShiftTerm { shift: 0.1, amplitudes: vec![1.0] },
            ShiftTerm { shift: 0.1, amplitudes: vec![2.0] },
        ];
        assert!(ShiftSpec::new(Kernel::Gaussian { sigma: 1.0 }, twice).is_err());
    }

    #[test]
    fn evaluation_uses_right_limits() {
        let s = step();
        assert_eq!(s.sample(&[0.25, 0.75, 0.5, 1.0, 0.0]), vec![1.0, 2.0, 2.0, 2.0, 1.0]);
        let flat = PiecewiseSpec::single((0.0, 1.0), Piece::constant(1.5)).unwrap();
        let grid = uniform_grid(0.0, 1.0, 100);
        assert_eq!(grid.len(), 100);
        assert_eq!(sup_norm_diff(&s, &flat, &grid), 0.5);
    }

    #[test]
    fn single_unit_shift_gives_kernel_moments() {
        for kernel in [Kernel::Gaussian { sigma: 0.7 }, Kernel::Box { width: 1.0 }] {
            let spec = ShiftSpec::new(kernel.clone(), vec![ShiftTerm { shift: 0.0, amplitudes: vec![1.0] }]).unwrap();
            assert_eq!(shift_model_moments(&spec, 8).values(), &kernel.moments(8)[..]);
        }
    }

    fn shift_quad(spec: &ShiftSpec, k_max: usize) -> Vec<f64> {
        let (lo, hi) = spec.support().unwrap();
        let mut cuts = vec![lo];
        cuts.extend(spec.split_points());
        cuts.push(hi);
        let mut m = vec![0.0; k_max + 1];
        for w in cuts.windows(2) {
            let part = integrate_vec(
                |x, out| {
                    let mut v = spec.evaluate(x);
                    for o in out.iter_mut() {
                        *o = v;
                        v *= x;
                    }
                },
                k_max + 1,
                w[0],
                w[1],
                QuadOptions::with_abs_tol(1e-14),
            )
            .unwrap();
            m.iter_mut().zip(part).for_each(|(a, v)| *a += v);
        }
        m
    }

    #[test]
    fn box_shift_model_matches_quadrature() {
        let spec = ShiftSpec::new(
            Kernel::Box { width: 1.0 },
            vec![
                ShiftTerm { shift: 0.3, amplitudes: vec![1.5] },
                ShiftTerm { shift: -0.8, amplitudes: vec![-0.7] },
            ],
        )
        .unwrap();
        let exact = shift_model_moments(&spec, 8);
        for (a, b) in exact.values().iter().zip(shift_quad(&spec, 8)) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn gaussian_shift_model_matches_quadrature() {
        let spec = ShiftSpec::new(
            Kernel::Gaussian { sigma: 0.4 },
            vec![
                ShiftTerm { shift: 0.25, amplitudes: vec![1.0, 0.5] },
                ShiftTerm { shift: 0.7, amplitudes: vec![-2.0, 0.0, 0.3] },
            ],
        )
        .unwrap();
        let exact = shift_model_moments(&spec, 8);
        for (a, b) in exact.values().iter().zip(shift_quad(&spec, 8)) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn fourier_orthogonality() {
        let one = PiecewiseSpec::single(FOURIER_DOMAIN, Piece::constant(1.0)).unwrap();
        let mu = fourier_coefficients(&one, 4, 1e-12).unwrap();
        assert!((mu.get(0).unwrap() - Complex64::new(TAU, 0.0)).norm() < 1e-12);
        for k in 1..=4 {
            assert!(mu.get(k).unwrap().norm() < 1e-12);
            assert!(mu.get(-k).unwrap().norm() < 1e-12);
        }
        // Re and Im parts of e^{ix} as two real signals.
        let cos = PiecewiseSpec::single(FOURIER_DOMAIN, Piece::Sinusoid { amplitude: 1.0, frequency: 1.0, phase: PI / 2.0 }).unwrap();
        let sin = PiecewiseSpec::single(FOURIER_DOMAIN, Piece::Sinusoid { amplitude: 1.0, frequency: 1.0, phase: 0.0 }).unwrap();
        let (c, s) = (fourier_coefficients(&cos, 3, 1e-12).unwrap(), fourier_coefficients(&sin, 3, 1e-12).unwrap());
        for k in -3..=3 {
            let mu = c.get(k).unwrap() + Complex64::new(0.0, 1.0) * s.get(k).unwrap();
            let expected = if k == -1 { TAU } else { 0.0 };
            assert!((mu - Complex64::new(expected, 0.0)).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn shift_fourier_matches_transform() {
        let kernel = Kernel::Gaussian { sigma: 0.25 };
        let spec = ShiftSpec::new(
            kernel.clone(),
            vec![
                ShiftTerm { shift: 1.0, amplitudes: vec![2.0] },
                ShiftTerm { shift: 4.0, amplitudes: vec![-1.0, 0.5] },
            ],
        )
        .unwrap();
        let mu = shift_fourier_coefficients(&spec, 6, 1e-13).unwrap();
        for k in -6i64..=6 {
            // ∫ f^{(l)}(t + x) e^{ikt} dt = (-ik)^l e^{-ikx} f̂(-k)
            let mut exact = Complex64::new(0.0, 0.0);
            for t in spec.terms() {
                let mut d = Complex64::new(1.0, 0.0);
                for a in &t.amplitudes {
                    exact += a * d * Complex64::from_polar(1.0, -(k as f64) * t.shift) * kernel.fhat(-(k as f64)).unwrap();
                    d *= Complex64::new(0.0, -(k as f64));
                }
            }
            assert!((mu.get(k).unwrap() - exact).norm() < 1e-12, "k={k}");
        }
    }

    proptest! {
        #[test]
        fn closed_form_agrees_with_quadrature(
            xi in 0.2f64..0.8,
            c0 in proptest::collection::vec(-3.0f64..3.0, 1..5),
            c1 in proptest::collection::vec(-3.0f64..3.0, 1..5),
        ) {
            let spec = PiecewiseSpec::polynomials((0.0, 1.0), vec![xi], vec![c0, c1]).unwrap();
            let exact = pp_moments(&spec, 15).unwrap();
            let quad = quad_moments(&spec, 15, 1e-13).unwrap();
            for (a, b) in exact.values().iter().zip(quad.values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn real_signals_have_conjugate_symmetric_coefficients(
            xi in 1.0f64..5.0,
            amp in -2.0f64..2.0,
            freq in 0.5f64..3.0,
            c in proptest::collection::vec(-1.0f64..1.0, 1..4),
        ) {
            let spec = PiecewiseSpec::new(
                FOURIER_DOMAIN,
                vec![xi],
                vec![Piece::polynomial(c), Piece::Sinusoid { amplitude: amp, frequency: freq, phase: 0.3 }],
            ).unwrap();
            let mu = fourier_coefficients(&spec, 5, 1e-12).unwrap();
            for k in 1..=5 {
                prop_assert!((mu.get(-k).unwrap() - mu.get(k).unwrap().conj()).norm() <= 1e-12);
            }
        }
    }
}
