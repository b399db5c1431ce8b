//! Generalized Prony systems: recover nodes and amplitudes from power sums
//! `M_n = Σ_j Σ_l a_{j,l} · d^l/dx^l (x^n)|_{x = x_j}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::convdual::KernelSpec;
use crate::error::{Error, Result, Warning};
use crate::moments::MomentSequence;
use crate::polyalg::{
    confluent_entry, hankel_recurrence, numerical_rank, roots, vandermonde_solve, DenseMatrix,
    NODE_SEPARATION,
};
use crate::scalar::{binomial, factorial, Scalar};

/// Largest tolerated `||ρ| - 1|` before a Fourier node is rejected.
pub const OFF_CIRCLE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct PronySolution {
    nodes: Vec<Complex64>,
    amplitudes: Vec<Vec<Complex64>>,
    residual: f64,
    warnings: Vec<Warning>,
}

impl PronySolution {
    /// Builds a solution and evaluates its defect against `m`.
    pub fn new(nodes: Vec<Complex64>, amplitudes: Vec<Vec<Complex64>>, m: &[Complex64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("a solution needs at least one node"));
        }
        if nodes.len() != amplitudes.len() {
            return Err(Error::LengthMismatch {
                needed: nodes.len(),
                found: amplitudes.len(),
            });
        }
        let mut sol = PronySolution {
            nodes,
            amplitudes,
            residual: 0.0,
            warnings: Vec::new(),
        };
        sol.residual = sol
            .series(m.len())
            .iter()
            .zip(m)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm()));
        Ok(sol)
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    /// `amplitudes()[j][l]` is `a_{j,l}`, the weight of the `l`-th derivative term at node `j`.
    pub fn amplitudes(&self) -> &[Vec<Complex64>] {
        &self.amplitudes
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// `Σ_j Σ_l a_{j,l} n!/(n-l)! x_j^{n-l}` for `n < terms`: the Taylor coefficients of
    /// `Σ_j Σ_l a_{j,l} l! z^l / (1 - x_j z)^{l+1}`.
    pub fn series(&self, terms: usize) -> Vec<Complex64> {
        (0..terms)
            .map(|n| {
                self.nodes
                    .iter()
                    .zip(&self.amplitudes)
                    .map(|(&x, amps)| {
                        amps.iter()
                            .enumerate()
                            .map(|(l, &a)| a * confluent_entry(x, n, l))
                            .sum::<Complex64>()
                    })
                    .sum()
            })
            .collect()
    }

    /// Weights `b_{j,q}` of the partial fractions `1/(1 - x_j z)^{q+1}` in the moment
    /// generating function: `b_{j,q} = Σ_{l≥q} a_{j,l} l! binom(l,q) (-1)^{q+l} x_j^{-l}`.
    pub fn partial_fraction_weights(&self) -> Result<Vec<Vec<Complex64>>> {
        self.nodes
            .iter()
            .zip(&self.amplitudes)
            .enumerate()
            .map(|(j, (&x, amps))| {
                let r = amps.len();
                if r > 1 && x.norm() < NODE_SEPARATION {
                    return Err(Error::NodeAtZero { index: j });
                }
                Ok((0..r)
                    .map(|q| {
                        (q..r)
                            .map(|l| amps[l] * partial_fraction_factor(x, l, q))
                            .sum()
                    })
                    .collect())
            })
            .collect()
    }

    /// Inverse of [`PronySolution::partial_fraction_weights`]: per node the map is upper
    /// triangular with diagonal `q! x^{-q}`.
    pub fn from_partial_fractions(
        nodes: Vec<Complex64>,
        weights: &[Vec<Complex64>],
        m: &[Complex64],
    ) -> Result<Self> {
        let mut amplitudes = Vec::with_capacity(nodes.len());
        for (j, (&x, b)) in nodes.iter().zip(weights).enumerate() {
            let r = b.len();
            if r > 1 && x.norm() < NODE_SEPARATION {
                return Err(Error::NodeAtZero { index: j });
            }
            let mut a = vec![Complex64::new(0.0, 0.0); r];
            for q in (0..r).rev() {
                let tail: Complex64 = (q + 1..r).map(|l| a[l] * partial_fraction_factor(x, l, q)).sum();
                a[q] = (b[q] - tail) / partial_fraction_factor(x, q, q);
            }
            amplitudes.push(a);
        }
        PronySolution::new(nodes, amplitudes, m)
    }
}

fn partial_fraction_factor(x: Complex64, l: usize, q: usize) -> Complex64 {
    let sign = if (q + l).is_multiple_of(2) { 1.0 } else { -1.0 };
    let inv = x.inv().powu(l as u32);
    inv * (sign * factorial(l) * binomial(l, q))
}

/// Which measurement family a shift model was recovered from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Moments,
    Fourier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftModel {
    pub kernel: Option<KernelSpec>,
    pub solution: PronySolution,
    pub domain: Domain,
    /// Shifts `x_j`; for the Fourier domain `x_j = -arg ρ_j` in `[0, 2π)`.
    pub shifts: Vec<f64>,
}

impl ShiftModel {
    pub fn with_kernel(mut self, kernel: KernelSpec) -> Self {
        self.kernel = Some(kernel);
        self
    }
}

/// Solves `Σ_{j=1}^s a_j x_j^n = M_n`. Recovered nodes closer than the separation
/// tolerance are merged and re-solved as a confluent node.
pub fn solve_prony<T: Scalar>(m: &MomentSequence<T>, s: usize) -> Result<PronySolution> {
    let data: Vec<Complex64> = m.values().iter().map(|v| v.to_complex()).collect();
    let q = hankel_recurrence(&data, s)?;
    let found = roots(&q)?;
    let clusters = cluster_nodes(&found, NODE_SEPARATION);
    let nodes: Vec<Complex64> = clusters.iter().map(|c| centroid(c)).collect();
    let mult: Vec<usize> = clusters.iter().map(Vec::len).collect();
    let sol = vandermonde_solve(&nodes, &data, &mult)?;
    let mut out = PronySolution::new(nodes, sol.weights, &data)?;
    out.warnings = sol.warnings;
    Ok(out)
}

/// Solves the derivative model with `r` derivative orders per node: the recurrence has
/// order `s(r+1)` and its roots cluster in groups of `r+1`.
pub fn solve_prony_confluent<T: Scalar>(m: &MomentSequence<T>, s: usize, r: usize) -> Result<PronySolution> {
    if r == 0 {
        return solve_prony(m, s);
    }
    let data: Vec<Complex64> = m.values().iter().map(|v| v.to_complex()).collect();
    let order = s * (r + 1);
    if data.len() < 2 * order {
        return Err(Error::LengthMismatch {
            needed: 2 * order,
            found: data.len(),
        });
    }
    let q = hankel_recurrence(&data, order)?;
    let found = roots(&q)?;
    let nodes: Vec<Complex64> = group_by_nearest(found, r + 1).iter().map(|c| centroid(c)).collect();
    let sol = vandermonde_solve(&nodes, &data, &vec![r + 1; nodes.len()])?;
    let mut out = PronySolution::new(nodes, sol.weights, &data)?;
    out.warnings = sol.warnings;
    Ok(out)
}

/// Numerical rank of the `s_max × s_max` Hankel matrix of `m`.
pub fn estimate_order<T: Scalar>(m: &MomentSequence<T>, s_max: usize, tol: f64) -> Result<usize> {
    if m.len() < 2 * s_max {
        return Err(Error::LengthMismatch {
            needed: 2 * s_max,
            found: m.len(),
        });
    }
    let v = m.values();
    let h = DenseMatrix::from_fn(s_max, s_max, |i, j| v[i + j]);
    numerical_rank(&h, tol)
}

/// Recovers unit-modulus nodes `ρ_j = e^{-i x_j}` from `M_k = Σ_j a_j ρ_j^k`.
pub fn solve_fourier_shifts(m: &MomentSequence<Complex64>, s: usize) -> Result<ShiftModel> {
    let raw = solve_prony(m, s)?;
    let mut nodes = Vec::with_capacity(raw.nodes.len());
    for rho in raw.nodes() {
        let modulus = rho.norm();
        if (modulus - 1.0).abs() > OFF_CIRCLE_TOL {
            return Err(Error::OffCircleNode { modulus });
        }
        nodes.push(rho / modulus);
    }
    let mult: Vec<usize> = raw.amplitudes.iter().map(Vec::len).collect();
    let sol = vandermonde_solve(&nodes, m.values(), &mult)?;
    let shifts = nodes
        .iter()
        .map(|rho| {
            let t = -rho.arg();
            let x = if t < 0.0 { t + TAU } else { t };
            if x >= TAU { 0.0 } else { x }
        })
        .collect();
    let mut solution = PronySolution::new(nodes, sol.weights, m.values())?;
    solution.warnings = sol.warnings;
    Ok(ShiftModel {
        kernel: None,
        solution,
        domain: Domain::Fourier,
        shifts,
    })
}

/// Shift model from polynomial-moment data: nodes are the shifts themselves.
pub fn shift_model_from_moments<T: Scalar>(m: &MomentSequence<T>, s: usize, r: usize) -> Result<ShiftModel> {
    let solution = solve_prony_confluent(m, s, r)?;
    let shifts = solution.nodes.iter().map(|x| x.re).collect();
    Ok(ShiftModel {
        kernel: None,
        solution,
        domain: Domain::Moments,
        shifts,
    })
}

/// Taylor coefficients of the moment generating function of `sol`.
pub fn generating_series(sol: &PronySolution, terms: usize) -> Vec<Complex64> {
    sol.series(terms)
}

fn centroid(c: &[Complex64]) -> Complex64 {
    c.iter().sum::<Complex64>() / c.len() as f64
}

fn cluster_nodes(nodes: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for &z in nodes {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|w| (w - z).norm() <= tol))
        {
            Some(c) => c.push(z),
            None => clusters.push(vec![z]),
        }
    }
    clusters
}

fn group_by_nearest(mut pool: Vec<Complex64>, size: usize) -> Vec<Vec<Complex64>> {
    let mut groups = Vec::new();
    while !pool.is_empty() {
        let seed = pool.swap_remove(0);
        let mut group = vec![seed];
        while group.len() < size && !pool.is_empty() {
            let (k, _) = pool
                .iter()
                .enumerate()
                .map(|(k, z)| (k, (z - seed).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            group.push(pool.swap_remove(k));
        }
        groups.push(group);
    }
    groups
}
