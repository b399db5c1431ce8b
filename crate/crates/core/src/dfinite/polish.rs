use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::polyalg::{lstsq, svd_report, DenseMatrix, Polynomial};

use super::operator::{unknowns, DifferentialOperator};

/// Golden-section iterations per coordinate.
const SECTION_STEPS: usize = 80;
/// Coordinate sweeps over the jumps.
const SWEEPS: usize = 3;
/// Newton iterations after the sweeps when several jumps move together.
const NEWTON_STEPS: usize = 30;
/// Halvings of the search radius in the initial scan.
const SCAN_LEVELS: usize = 30;

/// Result of re-solving the reduced operator with the jump factor held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct PolishedJumps {
    pub jumps: Vec<f64>,
    pub operator: DifferentialOperator,
    /// Smallest singular value of the equilibrated system restricted to the jump structure.
    pub objective: f64,
}

/// Maps reduced coefficients to augmented ones: `p'_j = ∏ (x - ξ)^N · p_j`.
fn factor_map(degs: &[Option<usize>], aug: &[Option<usize>], factor: &Polynomial<f64>) -> DenseMatrix<f64> {
    let mut t = DenseMatrix::zeros(unknowns(aug), unknowns(degs));
    let (mut row0, mut col0) = (0, 0);
    for (d, da) in degs.iter().zip(aug) {
        if let (Some(d), Some(da)) = (d, da) {
            for i in 0..=*d {
                for (r, f) in factor.coeffs().iter().enumerate() {
                    t.set(row0 + i + r, col0 + i, *f);
                }
            }
            col0 += d + 1;
            row0 += da + 1;
        }
    }
    t
}

fn jump_factor(jumps: &[f64], order: usize) -> Polynomial<f64> {
    let roots: Vec<f64> = jumps.iter().flat_map(|&x| core::iter::repeat_n(x, order)).collect();
    Polynomial::from_roots(&roots)
}

/// Row-weighted `H` with unit columns, and the column scales applied.
pub(crate) fn weighted_columns(h: &DenseMatrix<f64>, weights: &[f64]) -> (DenseMatrix<f64>, Vec<f64>) {
    let mut g = h.clone();
    for r in 0..h.rows() {
        let w = if weights[r] > 0.0 { weights[r] } else { 1.0 };
        for c in 0..h.cols() {
            g.set(r, c, h.get(r, c) / w);
        }
    }
    let mut col_scale = vec![1.0; h.cols()];
    for (c, s) in col_scale.iter_mut().enumerate() {
        let norm = libm::sqrt((0..g.rows()).map(|r| g.get(r, c) * g.get(r, c)).sum::<f64>());
        if norm > 0.0 {
            *s = 1.0 / norm;
            for r in 0..g.rows() {
                g.set(r, c, g.get(r, c) * *s);
            }
        }
    }
    (g, col_scale)
}

/// Smallest singular value of the equilibrated `H` restricted to the subspace of
/// coefficient vectors `∏ (x - ξ)^N · D†`, with the minimising `D†` as a stacked vector.
pub(crate) fn reduced_system(
    g: &DenseMatrix<f64>,
    col_scale: &[f64],
    degs: &[Option<usize>],
    aug: &[Option<usize>],
    jumps: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let order = degs.len() - 1;
    let t = factor_map(degs, aug, &jump_factor(jumps, order));
    let (n_aug, cols) = (t.rows(), t.cols());
    // Columns of T in equilibrated coordinates, orthonormalised by modified Gram-Schmidt;
    // `r` keeps the triangular factor to map back.
    let mut q: Vec<Vec<f64>> = (0..cols)
        .map(|c| (0..n_aug).map(|k| t.get(k, c) / col_scale[k]).collect())
        .collect();
    let mut r = DenseMatrix::zeros(cols, cols);
    for c in 0..cols {
        for prev in 0..c {
            let dot: f64 = q[prev].iter().zip(&q[c]).map(|(x, y)| x * y).sum();
            r.set(prev, c, dot);
            let (head, tail) = q.split_at_mut(c);
            for (y, x) in tail[0].iter_mut().zip(&head[prev]) {
                *y -= dot * x;
            }
        }
        let norm = libm::sqrt(q[c].iter().map(|x| x * x).sum::<f64>());
        r.set(c, c, norm);
        if norm > 0.0 {
            for y in q[c].iter_mut() {
                *y /= norm;
            }
        }
    }
    let gq: DenseMatrix<f64> = DenseMatrix::from_fn(g.rows(), cols, |row, c| (0..n_aug).map(|k| g.get(row, k) * q[c][k]).sum());
    let report = svd_report(&gq)?;
    let smin = report.singular_values.last().copied().unwrap_or(0.0);
    let z = &report.right_vectors[cols - 1];
    // Back substitution R c = z.
    let mut v = vec![0.0; cols];
    for i in (0..cols).rev() {
        let s: f64 = (i + 1..cols).map(|k| r.get(i, k) * v[k]).sum();
        let d = r.get(i, i);
        v[i] = if d != 0.0 { (z[i] - s) / d } else { 0.0 };
    }
    Ok((smin, v))
}

/// Refines jump estimates by minimising, coordinate by coordinate, the smallest singular
/// value of the recurrence system restricted to `∏ (x - ξ)^N · D†` with `D†`
/// bounded by `degs`. `h` and `weights` are the matrix and row scales for the augmented
/// bounds `aug`; each jump moves at most `radius[i]` and stays inside `(a, b)`.
pub fn polish_jumps(
    h: &DenseMatrix<f64>,
    weights: &[f64],
    degs: &[Option<usize>],
    aug: &[Option<usize>],
    jumps: &[f64],
    radius: &[f64],
    a: f64,
    b: f64,
) -> Result<PolishedJumps> {
    let (g, col_scale) = weighted_columns(h, weights);
    let mut xi = jumps.to_vec();
    let mut best = reduced_system(&g, &col_scale, degs, aug, &xi)?.0;
    let gr = (libm::sqrt(5.0) - 1.0) / 2.0;
    for _ in 0..SWEEPS {
        let before = best;
        for j in 0..xi.len() {
            let lower = if j == 0 { a } else { 0.5 * (xi[j - 1] + xi[j]) };
            let upper = if j + 1 == xi.len() { b } else { 0.5 * (xi[j] + xi[j + 1]) };
            let mut lo = (xi[j] - radius[j]).max(lower + 1e-12 * (b - a));
            let mut hi = (xi[j] + radius[j]).min(upper - 1e-12 * (b - a));
            if !(lo < hi) {
                continue;
            }
            let eval = |x: f64| -> Result<f64> {
                let mut trial = xi.clone();
                trial[j] = x;
                Ok(reduced_system(&g, &col_scale, degs, aug, &trial)?.0)
            };
            // Log-spaced scan around the estimate, then golden section between the
            // neighbours of the best sample.
            let mut grid = vec![xi[j]];
            for i in 0..SCAN_LEVELS {
                let step = radius[j] * libm::pow(0.5, i as f64);
                grid.push(xi[j] - step);
                grid.push(xi[j] + step);
            }
            grid.retain(|&x| x >= lo && x <= hi);
            grid.push(lo);
            grid.push(hi);
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let mut values = Vec::with_capacity(grid.len());
            for &x in &grid {
                values.push(eval(x)?);
            }
            let k = (0..grid.len()).min_by(|&p, &q| values[p].total_cmp(&values[q])).unwrap_or(0);
            lo = grid[k.saturating_sub(1)];
            hi = grid[(k + 1).min(grid.len() - 1)];
            let mut x1 = hi - gr * (hi - lo);
            let mut x2 = lo + gr * (hi - lo);
            let mut f1 = eval(x1)?;
            let mut f2 = eval(x2)?;
            for _ in 0..SECTION_STEPS {
                if hi - lo <= 4.0 * f64::EPSILON * (b - a).max(xi[j].abs()) {
                    break;
                }
                if f1 <= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = eval(x1)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = eval(x2)?;
                }
            }
            let (x, f) = [(x1, f1), (x2, f2), (grid[k], values[k])]
                .into_iter()
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap_or((xi[j], best));
            if f < best {
                best = f;
                xi[j] = x;
            }
        }
        if best >= before {
            break;
        }
    }
    if xi.len() > 1 {
        let lower: Vec<f64> = (0..xi.len()).map(|j| (jumps[j] - radius[j]).max(a)).collect();
        let upper: Vec<f64> = (0..xi.len()).map(|j| (jumps[j] + radius[j]).min(b)).collect();
        let f = |x: &[f64]| -> Result<f64> {
            if x.iter().zip(&lower).zip(&upper).any(|((x, l), u)| !(x > l && x < u))
                || x.windows(2).any(|w| w[0] >= w[1])
            {
                return Ok(f64::INFINITY);
            }
            let s = reduced_system(&g, &col_scale, degs, aug, x)?.0;
            Ok(s * s)
        };
        xi = newton_refine(f, xi, b - a)?;
    }
    let (objective, v) = reduced_system(&g, &col_scale, degs, aug, &xi)?;
    let operator = DifferentialOperator::from_vector(degs.to_vec(), &v)?;
    Ok(PolishedJumps {
        jumps: xi,
        operator,
        objective,
    })
}

/// Grid points per jump in [`scan_jumps`].
pub const SCAN_POINTS: [usize; 2] = [240, 60];
/// Local minima of the scan that are polished.
const SCAN_CANDIDATES: usize = 8;

/// Global search for `p ≤ 2` jumps: evaluates the structured objective of [`polish_jumps`]
/// on a grid over `(a, b)`, then polishes the best local minima and returns the best.
pub fn scan_jumps(
    h: &DenseMatrix<f64>,
    weights: &[f64],
    degs: &[Option<usize>],
    aug: &[Option<usize>],
    p: usize,
    a: f64,
    b: f64,
) -> Result<PolishedJumps> {
    if p == 0 || p > SCAN_POINTS.len() {
        return Err(crate::error::Error::InvalidInput("jump scan supports one or two jumps"));
    }
    let (g, col_scale) = weighted_columns(h, weights);
    let n = SCAN_POINTS[p - 1];
    let spacing = (b - a) / (n + 1) as f64;
    let grid: Vec<f64> = (1..=n).map(|i| a + spacing * i as f64).collect();
    let objective = |x: &[f64]| -> Result<f64> { Ok(reduced_system(&g, &col_scale, degs, aug, x)?.0) };
    let mut candidates: Vec<(Vec<f64>, f64)> = Vec::new();
    if p == 1 {
        let values = grid.iter().map(|&x| objective(&[x])).collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            let left = if i > 0 { values[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < n { values[i + 1] } else { f64::INFINITY };
            if values[i] <= left && values[i] <= right {
                candidates.push((vec![grid[i]], values[i]));
            }
        }
    } else {
        let mut values = vec![f64::INFINITY; n * n];
        for i in 0..n {
            for j in i + 1..n {
                values[i * n + j] = objective(&[grid[i], grid[j]])?;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let v = values[i * n + j];
                let mut is_min = true;
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        let (ii, jj) = (i as i64 + di, j as i64 + dj);
                        if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                            continue;
                        }
                        if values[ii as usize * n + jj as usize] < v {
                            is_min = false;
                        }
                    }
                }
                if is_min {
                    candidates.push((vec![grid[i], grid[j]], v));
                }
            }
        }
    }
    candidates.sort_by(|x, y| x.1.total_cmp(&y.1));
    candidates.truncate(SCAN_CANDIDATES);
    let mut best: Option<PolishedJumps> = None;
    for (start, _) in candidates {
        let radius = vec![2.0 * spacing; p];
        if let Ok(polished) = polish_jumps(h, weights, degs, aug, &start, &radius, a, b) {
            if best.as_ref().is_none_or(|b| polished.objective < b.objective) {
                best = Some(polished);
            }
        }
    }
    best.ok_or(crate::error::Error::InvalidInput("jump scan found no candidate"))
}

/// Smallest ratio, over jumps and both directions, of the structured objective with one
/// jump moved by `offset` to the objective at `jumps`. A ratio near one means that jump is
/// not determined by the data.
pub fn jump_contrast(
    h: &DenseMatrix<f64>,
    weights: &[f64],
    degs: &[Option<usize>],
    aug: &[Option<usize>],
    jumps: &[f64],
    offset: f64,
) -> Result<f64> {
    let (g, col_scale) = weighted_columns(h, weights);
    // Columns have unit norm, so values near machine precision are indistinguishable.
    let base = reduced_system(&g, &col_scale, degs, aug, jumps)?.0.max(16.0 * f64::EPSILON);
    let mut contrast = f64::INFINITY;
    for j in 0..jumps.len() {
        for sign in [-1.0, 1.0] {
            let mut moved = jumps.to_vec();
            moved[j] += sign * offset;
            contrast = contrast.min(reduced_system(&g, &col_scale, degs, aug, &moved)?.0 / base);
        }
    }
    Ok(contrast)
}

/// Newton iterations on a smooth objective with central-difference derivatives and a
/// halving line search; `width` sets the step-size scale.
pub(crate) fn newton_refine(f: impl Fn(&[f64]) -> Result<f64>, mut x: Vec<f64>, width: f64) -> Result<Vec<f64>> {
    let n = x.len();
    let mut fx = f(&x)?;
    let mut h = 1e-4 * width;
    for _ in 0..NEWTON_STEPS {
        let shifted = |x: &[f64], moves: &[(usize, f64)]| -> Result<f64> {
            let mut y = x.to_vec();
            for &(i, d) in moves {
                y[i] += d;
            }
            f(&y)
        };
        let mut grad = vec![0.0; n];
        let mut hess = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let fp = shifted(&x, &[(i, h)])?;
            let fm = shifted(&x, &[(i, -h)])?;
            grad[i] = (fp - fm) / (2.0 * h);
            hess.set(i, i, (fp - 2.0 * fx + fm) / (h * h));
            for j in 0..i {
                let v = (shifted(&x, &[(i, h), (j, h)])? - shifted(&x, &[(i, h), (j, -h)])?
                    - shifted(&x, &[(i, -h), (j, h)])?
                    + shifted(&x, &[(i, -h), (j, -h)])?)
                    / (4.0 * h * h);
                hess.set(i, j, v);
                hess.set(j, i, v);
            }
        }
        if !grad.iter().all(|g| g.is_finite()) || !hess.is_finite() {
            break;
        }
        let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = match lstsq(&hess, &rhs, 1e-14) {
            Ok(sol) => sol.x,
            Err(_) => break,
        };
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-6 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(x, d)| x + t * d).collect();
            let ft = f(&trial)?;
            if ft < fx {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((next, fnext)) = accepted else {
            if h > 1e-9 * width {
                h = (0.01 * h).max(1e-9 * width);
                continue;
            }
            break;
        };
        let moved = next.iter().zip(&x).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        x = next;
        fx = fnext;
        if moved <= 1e-15 * width {
            break;
        }
        h = (0.1 * moved).clamp(1e-9 * width, 1e-3 * width);
    }
    Ok(x)
}
