use alloc::vec;
use alloc::vec::Vec;

use super::matrix::{lstsq, DenseMatrix};
use super::poly::Polynomial;
use crate::error::{Error, Result, Warning};
use crate::scalar::{falling_factorial, Scalar};

/// Relative singular-value cutoff for declaring the Hankel system singular.
pub const HANKEL_RCOND: f64 = 1e-13;
/// Default minimum distance between distinct nodes.
pub const NODE_SEPARATION: f64 = 1e-6;
/// Default condition estimate above which a Vandermonde solve is flagged.
pub const CONDITION_CAP: f64 = 1e12;

/// Monic characteristic polynomial of the order-`s` linear recurrence satisfied by `m`:
/// `sum_{t=0}^{s} c_t m_{k+t} = 0` with `c_s = 1`, least squares over every available row.
pub fn hankel_recurrence<T: Scalar>(m: &[T], s: usize) -> Result<Polynomial<T>> {
    if s == 0 {
        return Err(Error::InvalidInput("recurrence order must be positive"));
    }
    if m.len() < 2 * s {
        return Err(Error::LengthMismatch {
            needed: 2 * s,
            found: m.len(),
        });
    }
    let rows = m.len() - s;
    let h = DenseMatrix::from_fn(rows, s, |k, t| m[k + t]);
    let rhs: Vec<T> = (0..rows).map(|k| -m[k + s]).collect();
    let sol = lstsq(&h, &rhs, HANKEL_RCOND)?;
    if sol.rank < s {
        return Err(Error::SingularHankel {
            size: s,
            ratio: 1.0 / sol.condition,
        });
    }
    let mut coeffs = sol.x;
    coeffs.push(T::one());
    Ok(Polynomial::new(coeffs))
}

/// Solution of a (confluent) Vandermonde system, grouped per node.
#[derive(Debug, Clone)]
pub struct VandermondeSolution<T: Scalar> {
    /// `weights[j][l]` multiplies the column `d^l/dx^l x^k` at node `j`.
    pub weights: Vec<Vec<T>>,
    pub condition: f64,
    pub warnings: Vec<Warning>,
}

impl<T: Scalar> VandermondeSolution<T> {
    pub fn flat(&self) -> Vec<T> {
        self.weights.iter().flatten().copied().collect()
    }
}

/// Least-squares solve of `V w = rhs` where node `j` with multiplicity `m_j` contributes
/// the columns `x^k, k x^{k-1}, k(k-1) x^{k-2}, ...` (the first `m_j` derivatives of `x^k`).
pub fn vandermonde_solve<T: Scalar>(
    nodes: &[T],
    rhs: &[T],
    multiplicity: &[usize],
) -> Result<VandermondeSolution<T>> {
    vandermonde_solve_with(nodes, rhs, multiplicity, NODE_SEPARATION, CONDITION_CAP)
}

pub fn vandermonde_solve_with<T: Scalar>(
    nodes: &[T],
    rhs: &[T],
    multiplicity: &[usize],
    separation: f64,
    condition_cap: f64,
) -> Result<VandermondeSolution<T>> {
    if nodes.len() != multiplicity.len() {
        return Err(Error::LengthMismatch {
            needed: nodes.len(),
            found: multiplicity.len(),
        });
    }
    if multiplicity.contains(&0) {
        return Err(Error::InvalidInput("node multiplicity must be at least one"));
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).abs_val() <= separation {
                return Err(Error::CoincidentNodes { first: i, second: j });
            }
        }
    }
    let cols: usize = multiplicity.iter().sum();
    if rhs.len() < cols {
        return Err(Error::LengthMismatch {
            needed: cols,
            found: rhs.len(),
        });
    }
    let mut layout = Vec::with_capacity(cols);
    for (j, &mult) in multiplicity.iter().enumerate() {
        for l in 0..mult {
            layout.push((j, l));
        }
    }
    let v = DenseMatrix::from_fn(rhs.len(), cols, |k, c| {
        let (j, l) = layout[c];
        confluent_entry(nodes[j], k, l)
    });
    let sol = lstsq(&v, rhs, 1e-15)?;
    let mut weights: Vec<Vec<T>> = multiplicity.iter().map(|&m| vec![T::zero(); m]).collect();
    for (c, &(j, l)) in layout.iter().enumerate() {
        weights[j][l] = sol.x[c];
    }
    let mut warnings = Vec::new();
    if sol.condition > condition_cap {
        warnings.push(Warning::IllConditioned {
            condition: sol.condition,
        });
    }
    Ok(VandermondeSolution {
        weights,
        condition: sol.condition,
        warnings,
    })
}

/// `d^l/dx^l x^k = k!/(k-l)! x^{k-l}`, zero for `l > k`.
pub(crate) fn confluent_entry<T: Scalar>(x: T, k: usize, l: usize) -> T {
    if l > k {
        return T::zero();
    }
    let mut p = T::one();
    for _ in 0..k - l {
        p *= x;
    }
    p * T::from_real(falling_factorial(k, l))
}
