//! Seeded test-signal generation. Every random draw goes through one [`ChaCha8Rng`].

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::schema::{KernelJson, PieceJson, PiecewiseJson, ShiftJson, ShiftTermJson, SignalFile, Version};

pub fn generator(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` sorted points in `[lo, hi]` with pairwise gaps of at least `sep`.
pub fn separated_points(rng: &mut impl Rng, count: usize, lo: f64, hi: f64, sep: f64) -> Vec<f64> {
    assert!(sep * count.saturating_sub(1) as f64 <= hi - lo, "points cannot fit");
    loop {
        let mut pts: Vec<f64> = (0..count).map(|_| rng.random_range(lo..=hi)).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] >= sep) {
            return pts;
        }
    }
}

/// Like [`separated_points`] on the circle of circumference `period` starting at 0.
pub fn separated_angles(rng: &mut impl Rng, count: usize, period: f64, sep: f64) -> Vec<f64> {
    loop {
        let pts = separated_points(rng, count, 0.0, period, sep);
        let wraps = count < 2 || pts[0] + period - pts[count - 1] >= sep;
        if wraps && pts.iter().all(|&x| x < period) {
            return pts;
        }
    }
}

/// Uniform on `[-bound, bound]` with `|a| >= floor`.
pub fn amplitude(rng: &mut impl Rng, bound: f64, floor: f64) -> f64 {
    loop {
        let a = rng.random_range(-bound..=bound);
        if a.abs() >= floor {
            return a;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Piecewise polynomial on [0, 1], degree ≤ 4, one or two jumps.
    PiecewisePolynomial,
    /// Two sinusoid pieces on [0, 3] with one jump, frequencies 1 and 2 in random order.
    PiecewiseSinusoid,
    /// Gaussian kernel (σ = 0.25) with up to four shifts in [0, 2π).
    GaussianShifts,
}

pub fn random_signal(family: Family, rng: &mut impl Rng) -> SignalFile {
    match family {
        Family::PiecewisePolynomial => {
            let jumps = rng.random_range(1..=2);
            let degree = rng.random_range(0..=4);
            let breakpoints = separated_points(rng, jumps, 0.2, 0.8, 0.2);
            let pieces = (0..=jumps)
                .map(|_| PieceJson::Polynomial {
                    coefficients: (0..=degree).map(|_| amplitude(rng, 2.0, 0.1)).collect(),
                })
                .collect();
            SignalFile::Piecewise(PiecewiseJson {
                schema_version: Version,
                interval: [0.0, 1.0],
                breakpoints,
                pieces,
            })
        }
        Family::PiecewiseSinusoid => {
            let breakpoints = vec![rng.random_range(1.0..=2.0)];
            let frequencies = if rng.random_bool(0.5) { [1.0, 2.0] } else { [2.0, 1.0] };
            let pieces = frequencies
                .into_iter()
                .map(|frequency| PieceJson::Sinusoid {
                    amplitude: amplitude(rng, 2.0, 0.5),
                    frequency,
                    phase: rng.random_range(0.0..std::f64::consts::TAU),
                })
                .collect();
            SignalFile::Piecewise(PiecewiseJson {
                schema_version: Version,
                interval: [0.0, 3.0],
                breakpoints,
                pieces,
            })
        }
        Family::GaussianShifts => {
            let s = rng.random_range(1..=4);
            let shifts = separated_angles(rng, s, std::f64::consts::TAU, 0.1);
            SignalFile::Shift(ShiftJson {
                schema_version: Version,
                kernel: KernelJson::Gaussian { sigma: 0.25 },
                terms: shifts
                    .into_iter()
                    .map(|shift| ShiftTermJson {
                        shift,
                        amplitudes: vec![amplitude(rng, 5.0, 0.1)],
                    })
                    .collect(),
            })
        }
    }
}
