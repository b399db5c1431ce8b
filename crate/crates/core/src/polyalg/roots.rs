use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::{Polynomial, TRIM_TOL};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SCHUR_MAX_ITER: usize = 10_000;

/// All complex roots of `p`, with multiplicity, as eigenvalues of the balanced
/// companion matrix. A nonzero constant has no roots.
pub fn roots<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<Complex64>> {
    roots_with(p, TRIM_TOL)
}

pub fn roots_with<T: Scalar>(p: &Polynomial<T>, trim_tol: f64) -> Result<Vec<Complex64>> {
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let p = p.to_complex().trimmed(trim_tol);
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = p.coeffs();
    let n = c.len() - 1;
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-c[0] / c[1]]),
        _ => {}
    }
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    balance(&mut m);
    let schur = m
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::RootsDidNotConverge { degree: n })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Parlett-Reinsch diagonal similarity scaling by powers of two.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = 1.0;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Pairs each expected root with its nearest unused computed root and returns the
/// largest distance. Used to compare root sets without caring about order.
pub fn max_matching_error(expected: &[Complex64], computed: &[Complex64]) -> f64 {
    let mut used = vec![false; computed.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let mut best = None;
        for (k, c) in computed.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (c - e).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        match best {
            Some((k, d)) => {
                used[k] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}
