//! Adaptive Gauss-Legendre quadrature.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const RULE_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute tolerance for the whole interval, split proportionally across subintervals.
    pub abs_tol: f64,
    /// Relative tolerance; a subinterval is accepted when either criterion holds.
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-14,
            max_intervals: 1 << 14,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            ..Self::default()
        }
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn new() -> Self {
        let (nodes, weights) = gauss_legendre(RULE_POINTS);
        Rule { nodes, weights }
    }

    fn apply(&self, f: &mut impl FnMut(f64, &mut [f64]), a: f64, b: f64, scratch: &mut [f64], out: &mut [f64]) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            f(mid + half * x, scratch);
            for (o, s) in out.iter_mut().zip(scratch.iter()) {
                *o += w * s;
            }
        }
        out.iter_mut().for_each(|o| *o *= half);
    }
}

/// Integrates a scalar function over `[a, b]`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    let v = integrate_vec(|x, out| out[0] = f(x), 1, a, b, opts)?;
    Ok(v[0])
}

/// Integrates a vector-valued function `f(x, out)` of dimension `dim` over `[a, b]`;
/// bisection continues until every component meets the tolerance.
pub fn integrate_vec(
    mut f: impl FnMut(f64, &mut [f64]),
    dim: usize,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut total = vec![0.0; dim];
    if a == b || dim == 0 {
        return Ok(total);
    }
    let rule = Rule::new();
    let width = b - a;
    let mut scratch = vec![0.0; dim];
    let mut whole = vec![0.0; dim];
    rule.apply(&mut f, a, b, &mut scratch, &mut whole);
    let mut stack: Vec<(f64, f64, Vec<f64>)> = vec![(a, b, whole)];
    let mut evaluated = 1usize;
    let mut left = vec![0.0; dim];
    let mut right = vec![0.0; dim];
    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        rule.apply(&mut f, lo, mid, &mut scratch, &mut left);
        rule.apply(&mut f, mid, hi, &mut scratch, &mut right);
        evaluated += 2;
        let budget = opts.abs_tol * (hi - lo).abs() / width.abs();
        let converged = (0..dim).all(|c| {
            let fine = left[c] + right[c];
            let err = (fine - coarse[c]).abs();
            err <= budget || err <= opts.rel_tol * fine.abs()
        });
        if converged {
            for c in 0..dim {
                total[c] += left[c] + right[c];
            }
            continue;
        }
        if evaluated > opts.max_intervals || (hi - lo).abs() <= 1e-13 * width.abs() {
            return Err(Error::QuadratureFailure { a, b });
        }
        stack.push((lo, mid, left.clone()));
        stack.push((mid, hi, right.clone()));
    }
    if total.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(total)
}
