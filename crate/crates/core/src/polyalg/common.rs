use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::poly::Polynomial;
use super::roots::roots;
use crate::error::{Error, Result};

/// Tuning for [`common_roots_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonRootOptions {
    /// Single-linkage clustering radius.
    pub radius: f64,
    /// Polynomials whose largest coefficient is below `zero_tol` times the largest
    /// coefficient among all inputs are treated as identically zero.
    pub zero_tol: f64,
    /// Gauss-Newton steps polishing each cluster centre as a common root of the
    /// `(mult-1)`-th derivatives.
    pub refine_steps: usize,
}

impl Default for CommonRootOptions {
    fn default() -> Self {
        CommonRootOptions {
            radius: 1e-6,
            zero_tol: 1e-9,
            refine_steps: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommonRoots {
    pub roots: Vec<Complex64>,
    /// Inputs with `prod (x - r)^mult` divided out; numerically zero inputs map to zero.
    pub deflated: Vec<Polynomial<f64>>,
    /// Largest distance from a cluster member to the reported root, per root.
    pub spreads: Vec<f64>,
    /// Roots of the participating polynomials that did not form a qualifying cluster.
    pub rejected: Vec<Complex64>,
}

/// Roots shared by every nonzero input with multiplicity at least `mult`.
pub fn common_roots(polys: &[Polynomial<f64>], mult: usize, tol: f64) -> Result<CommonRoots> {
    common_roots_with(
        polys,
        mult,
        CommonRootOptions {
            radius: tol,
            ..CommonRootOptions::default()
        },
    )
}

pub fn common_roots_with(
    polys: &[Polynomial<f64>],
    mult: usize,
    opts: CommonRootOptions,
) -> Result<CommonRoots> {
    if mult == 0 {
        return Err(Error::InvalidInput("multiplicity must be at least one"));
    }
    let scale = polys.iter().fold(0.0f64, |m, p| m.max(p.max_abs()));
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let active: Vec<bool> = polys
        .iter()
        .map(|p| p.max_abs() > opts.zero_tol * scale)
        .collect();
    let participants: Vec<usize> = (0..polys.len()).filter(|&i| active[i]).collect();

    let mut tagged: Vec<(usize, Complex64)> = Vec::new();
    let mut any_too_short = false;
    for &i in &participants {
        let rs = roots(&polys[i])?;
        if rs.len() < mult {
            any_too_short = true;
        }
        tagged.extend(rs.into_iter().map(|r| (i, r)));
    }
    let mut found = Vec::new();
    let mut spreads = Vec::new();
    let mut rejected = Vec::new();
    if !any_too_short {
        for cluster in single_linkage(&tagged, opts.radius) {
            let qualifies = participants
                .iter()
                .all(|&p| cluster.iter().filter(|&&t| tagged[t].0 == p).count() >= mult);
            if !qualifies {
                rejected.extend(cluster.iter().map(|&t| tagged[t].1));
                continue;
            }
            // Mean over polynomials of each polynomial's cluster centroid.
            let mut centre = Complex64::new(0.0, 0.0);
            for &p in &participants {
                let members: Vec<Complex64> = cluster
                    .iter()
                    .filter(|&&t| tagged[t].0 == p)
                    .map(|&t| tagged[t].1)
                    .collect();
                centre += members.iter().sum::<Complex64>() / members.len() as f64;
            }
            centre /= participants.len() as f64;
            let spread = cluster
                .iter()
                .fold(0.0f64, |m, &t| m.max((tagged[t].1 - centre).norm()));
            let refined = refine(polys, &participants, mult, centre, opts.refine_steps);
            found.push(refined);
            spreads.push(spread);
        }
    } else {
        rejected.extend(tagged.iter().map(|t| t.1));
    }

    let deflated = polys
        .iter()
        .zip(&active)
        .map(|(p, &is_active)| {
            if !is_active {
                return Polynomial::zero();
            }
            let mut q = p.to_complex();
            for &r in &found {
                for _ in 0..mult {
                    q = q.deflate(r).0;
                }
            }
            q.re()
        })
        .collect();
    Ok(CommonRoots {
        roots: found,
        deflated,
        spreads,
        rejected,
    })
}

fn single_linkage(points: &[(usize, Complex64)], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i].1 - points[j].1).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Gauss-Newton on `sum_j |p_j^{(mult-1)}(z)|^2` with each `p_j` scaled to unit max
/// coefficient; a root of multiplicity `mult` is a simple root of that derivative.
fn refine(
    polys: &[Polynomial<f64>],
    participants: &[usize],
    mult: usize,
    start: Complex64,
    steps: usize,
) -> Complex64 {
    let derivs: Vec<(Polynomial<f64>, Polynomial<f64>)> = participants
        .iter()
        .map(|&i| {
            let p = polys[i].scale(1.0 / polys[i].max_abs());
            let g = p.nth_derivative(mult - 1);
            let dg = g.derivative();
            (g, dg)
        })
        .collect();
    let objective = |z: Complex64| -> f64 {
        derivs.iter().map(|(g, _)| g.eval_complex(z).norm_sqr()).sum()
    };
    let mut z = start;
    let mut best = objective(z);
    for _ in 0..steps {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (g, dg) in &derivs {
            let gv = g.eval_complex(z);
            let dv = dg.eval_complex(z);
            num += dv.conj() * gv;
            den += dv.norm_sqr();
        }
        if den == 0.0 {
            break;
        }
        let candidate = z - num / den;
        let value = objective(candidate);
        if value < best {
            z = candidate;
            best = value;
        } else {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Polynomial<f64> {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn explicit_common_factor() {
        let polys = [p(&[-0.5, 1.0]), p(&[0.0, -0.5, 1.0])];
        let out = common_roots(&polys, 1, 1e-6).unwrap();
        assert_eq!(out.roots.len(), 1);
        assert!((out.roots[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let d0 = out.deflated[0].coeffs();
        let d1 = out.deflated[1].coeffs();
        assert!(d0.len() == 1 && (d0[0] - 1.0).abs() < 1e-14);
        assert!(d1.len() == 2 && d1[0].abs() < 1e-14 && (d1[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn double_common_root() {
        let sq = Polynomial::from_roots(&[0.5, 0.5]);
        let a = &sq * &p(&[1.0, 1.0]);
        let b = &sq * &p(&[-2.0, 1.0]);
        let out = common_roots(&[a.clone(), b.clone()], 2, 1e-6).unwrap();
        assert_eq!(out.roots.len(), 1);
        assert!((out.roots[0].re - 0.5).abs() < 1e-12);
        let back = &out.deflated[0] * &sq;
        for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
            assert!((x - y).abs() < 1e-8);
        }
        // multiplicity 3 is not present
        assert!(common_roots(&[a, b], 3, 1e-6).unwrap().roots.is_empty());
    }

    #[test]
    fn constant_has_no_roots() {
        let out = common_roots(&[p(&[1.0]), p(&[0.0, 1.0])], 1, 1e-6).unwrap();
        assert!(out.roots.is_empty());
    }

    #[test]
    fn near_zero_inputs_are_ignored() {
        let out = common_roots(&[p(&[-0.25, 1.0]), p(&[1e-13, 3e-14])], 1, 1e-6).unwrap();
        assert_eq!(out.roots.len(), 1);
        assert!(out.deflated[1].is_zero());
    }

    #[test]
    fn perturbed_quadruple_root_clusters_with_wide_radius() {
        let mut base = Polynomial::from_roots(&[1.5, 1.5, 1.5, 1.5]).into_coeffs();
        base[0] += 1e-12;
        let a = p(&base);
        let b = a.scale(5.0);
        let out = common_roots(&[a, b], 4, 0.05).unwrap();
        assert_eq!(out.roots.len(), 1);
        assert!((out.roots[0].re - 1.5).abs() < 1e-9);
        assert!(common_roots(&[p(&base)], 4, 1e-6).unwrap().roots.is_empty());
    }

    #[test]
    fn all_zero_is_an_error() {
        assert_eq!(
            common_roots(&[Polynomial::zero()], 1, 1e-6),
            Err(Error::ZeroPolynomial)
        );
    }
}
