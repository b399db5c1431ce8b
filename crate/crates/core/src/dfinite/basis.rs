use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

use super::operator::DifferentialOperator;

pub const DEFAULT_NODES: usize = 64;
pub const ODE_RTOL: f64 = 1e-10;
const ODE_ATOL: f64 = 1e-13;
const MAX_STEPS: usize = 200_000;
/// `|p_N(x)|` below this fraction of its largest value on the grid counts as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Second-kind Chebyshev points on `[lo, hi]`, increasing.
pub fn chebyshev_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|k| {
            let t = -libm::cos(PI * k as f64 / (n - 1) as f64);
            0.5 * (lo + hi) + 0.5 * (hi - lo) * t
        })
        .collect()
}

fn barycentric_weights(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let w = if k % 2 == 0 { 1.0 } else { -1.0 };
            if k == 0 || k + 1 == n {
                0.5 * w
            } else {
                w
            }
        })
        .collect()
}

/// Solutions `u_1..u_N` of `D u = 0` on one continuity interval, sampled at Chebyshev
/// points together with their first `N-1` derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBasis {
    interval: (f64, f64),
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `samples[i][d][k] = u_i^{(d)}(nodes[k])`.
    samples: Vec<Vec<Vec<f64>>>,
}

impl IntervalBasis {
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `u_i^{(d)}(x)` by barycentric interpolation of the samples, `d < N`.
    pub fn eval_derivative(&self, i: usize, d: usize, x: f64) -> f64 {
        let values = &self.samples[i][d];
        let mut num = 0.0;
        let mut den = 0.0;
        for ((xk, wk), fk) in self.nodes.iter().zip(&self.weights).zip(values) {
            let diff = x - xk;
            if diff == 0.0 {
                return *fk;
            }
            let c = wk / diff;
            num += c * fk;
            den += c;
        }
        num / den
    }

    pub fn eval(&self, i: usize, x: f64) -> f64 {
        self.eval_derivative(i, 0, x)
    }

    /// All `u_i(x)` at once.
    pub fn eval_all(&self, x: f64, out: &mut [f64]) {
        if let Some(k) = self.nodes.iter().position(|&xk| xk == x) {
            for (o, s) in out.iter_mut().zip(&self.samples) {
                *o = s[0][k];
            }
            return;
        }
        let mut den = 0.0;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (k, (xk, wk)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let c = wk / (x - xk);
            den += c;
            for (o, s) in out.iter_mut().zip(&self.samples) {
                *o += c * s[0][k];
            }
        }
        out.iter_mut().for_each(|o| *o /= den);
    }
}

/// Integrates `D u = 0` from the midpoint of `interval` with the `N` unit initial-value
/// vectors, so the Wronskian matrix there is the identity.
pub fn fundamental_basis(op: &DifferentialOperator, interval: (f64, f64), n_nodes: usize) -> Result<IntervalBasis> {
    let (lo, hi) = interval;
    if !(lo < hi) || n_nodes < 2 {
        return Err(Error::InvalidInput("basis needs a nonempty interval and two nodes"));
    }
    let n = op.order();
    let nodes = chebyshev_nodes(lo, hi, n_nodes);
    let lead = op.leading();
    let lead_scale = nodes.iter().fold(0.0f64, |m, &x| m.max(lead.eval(x).abs()));
    for &x in &nodes {
        if lead.eval(x).abs() <= SINGULAR_TOL * lead_scale {
            return Err(Error::SingularLeadingCoefficient { x });
        }
    }
    let mid = 0.5 * (lo + hi);
    // State: N solutions, each as (u, u', …, u^{(N-1)}).
    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
        let pn = lead.eval(x);
        let pj: Vec<f64> = op.coeffs()[..n].iter().map(|p| p.eval(x)).collect();
        for s in 0..n {
            let u = &y[s * n..(s + 1) * n];
            let d = &mut dy[s * n..(s + 1) * n];
            d[..n - 1].copy_from_slice(&u[1..]);
            d[n - 1] = -pj.iter().zip(u).map(|(p, v)| p * v).sum::<f64>() / pn;
        }
    };
    let mut y0 = vec![0.0; n * n];
    for s in 0..n {
        y0[s * n + s] = 1.0;
    }
    let mut states: Vec<Option<Vec<f64>>> = vec![None; n_nodes];
    let split = nodes.partition_point(|&x| x < mid);
    let mut y = y0.clone();
    let mut x = mid;
    for k in split..n_nodes {
        y = integrate(&rhs, x, nodes[k], y)?;
        x = nodes[k];
        states[k] = Some(y.clone());
    }
    let mut y = y0;
    let mut x = mid;
    for k in (0..split).rev() {
        y = integrate(&rhs, x, nodes[k], y)?;
        x = nodes[k];
        states[k] = Some(y.clone());
    }
    let samples = (0..n)
        .map(|s| {
            (0..n)
                .map(|d| states.iter().map(|st| st.as_ref().unwrap()[s * n + d]).collect())
                .collect()
        })
        .collect();
    Ok(IntervalBasis {
        interval,
        weights: barycentric_weights(n_nodes),
        nodes,
        samples,
    })
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Dormand-Prince 5(4) from `x0` to `x1` with step-size control.
fn integrate(f: &impl Fn(f64, &[f64], &mut [f64]), x0: f64, x1: f64, mut y: Vec<f64>) -> Result<Vec<f64>> {
    let dim = y.len();
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y);
    }
    let dir = span.signum();
    let mut h = span.abs().min(1e-2 * (1.0 + x0.abs()).max(span.abs())) * dir;
    let mut x = x0;
    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    f(x, &y, &mut k[0]);
    for _ in 0..MAX_STEPS {
        if (x1 - x) * dir <= 0.0 {
            return Ok(y);
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let stage = |coef: &[(usize, f64)], tmp: &mut [f64], y: &[f64], k: &[Vec<f64>; 7]| {
            for d in 0..dim {
                tmp[d] = y[d] + h * coef.iter().map(|&(s, a)| a * k[s][d]).sum::<f64>();
            }
        };
        stage(&[(0, A21)], &mut tmp, &y, &k);
        f(x + C2 * h, &tmp, &mut k[1]);
        stage(&[(0, A31), (1, A32)], &mut tmp, &y, &k);
        f(x + C3 * h, &tmp, &mut k[2]);
        stage(&[(0, A41), (1, A42), (2, A43)], &mut tmp, &y, &k);
        f(x + C4 * h, &tmp, &mut k[3]);
        stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &mut tmp, &y, &k);
        f(x + C5 * h, &tmp, &mut k[4]);
        stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &mut tmp, &y, &k);
        f(x + h, &tmp, &mut k[5]);
        stage(&[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)], &mut y5, &y, &k);
        f(x + h, &y5, &mut k[6]);
        let mut err = 0.0f64;
        for d in 0..dim {
            let e = h * (E1 * k[0][d] + E3 * k[2][d] + E4 * k[3][d] + E5 * k[4][d] + E6 * k[5][d] + E7 * k[6][d]);
            let sc = ODE_ATOL + ODE_RTOL * y[d].abs().max(y5[d].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            return Err(Error::IntegrationFailure { x });
        }
        if err <= 1.0 {
            x += h;
            core::mem::swap(&mut y, &mut y5);
            let last = core::mem::take(&mut k[6]);
            k[0] = last;
            k[6] = vec![0.0; dim];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() <= 1e-14 * (1.0 + x.abs()) {
            return Err(Error::IntegrationFailure { x });
        }
    }
    Err(Error::IntegrationFailure { x })
}
