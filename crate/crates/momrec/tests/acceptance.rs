//! One PASS/FAIL line per acceptance criterion. Reference values come from direct
//! summation, closed-form antiderivatives or quadrature, never from the solvers under test.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use momrec::random::{amplitude, generator, random_signal, separated_angles, separated_points, Family};
use momrec::schema::{MeasurementFile, ModelFile, PieceJson, SignalFile, Status, VerifyReport};
use momrec_core::convdual::{dual_coefficients, fourier_generalized_moments, generalized_poly_moments, KernelSpec};
use momrec_core::dfinite::{
    admissible_rows, boundary_operator, pade_hermite_residual, reconstruct, recurrence_residual, v_entry,
    DifferentialOperator, ReconstructOptions,
};
use momrec_core::kernel::Kernel;
use momrec_core::prony::{solve_fourier_shifts, solve_prony, solve_prony_confluent};
use momrec_core::quad::{integrate, QuadOptions};
use momrec_core::signals::{
    pp_moments, quad_moments, shift_fourier_coefficients, uniform_grid, Evaluate, Piece, PiecewiseSpec, ShiftSpec,
    ShiftTerm,
};
use momrec_core::{Complex64, MomentSequence, Polynomial};
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn tight() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-15,
        ..QuadOptions::default()
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || {
        format!("{what} took {:.2} s, limit {limit} s", elapsed.as_secs_f64())
    })
}

/// Sup-norm difference on a 100-point grid, skipping grid points within `1e-6` of a true
/// jump, where the right-limit convention makes any jump error show up at full height.
fn piece_error(model: &impl Evaluate, spec: &PiecewiseSpec) -> f64 {
    let (a, b) = spec.interval();
    uniform_grid(a, b, 100)
        .into_iter()
        .filter(|x| spec.breakpoints().iter().all(|xi| (x - xi).abs() > 1e-6))
        .map(|x| (model.evaluate(x) - spec.evaluate(x)).abs())
        .fold(0.0, f64::max)
}

fn monomial_operator(order: usize) -> DifferentialOperator {
    let mut coeffs = vec![Polynomial::zero(); order];
    coeffs.push(Polynomial::constant(1.0));
    DifferentialOperator::from_coeffs(coeffs).unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = generator(1);
    let (mut node_err, mut amp_err) = (0.0f64, 0.0f64);
    for trial in 0..50 {
        let s = rng.random_range(1..=5);
        let x = separated_points(&mut rng, s, 0.1, 0.9, 0.05);
        let a: Vec<f64> = (0..s).map(|_| amplitude(&mut rng, 5.0, f64::MIN_POSITIVE)).collect();
        let m: Vec<f64> = (0..2 * s + 4)
            .map(|n| x.iter().zip(&a).map(|(x, a)| a * x.powi(n as i32)).sum())
            .collect();
        let sol = solve_prony(&MomentSequence::new(m), s).map_err(|e| format!("trial {trial}: {e}"))?;
        let mut got: Vec<(Complex64, Complex64)> =
            sol.nodes().iter().zip(sol.amplitudes()).map(|(x, a)| (*x, a[0])).collect();
        ensure(got.len() == s, || format!("trial {trial}: {} nodes for s = {s}", got.len()))?;
        got.sort_by(|p, q| p.0.re.total_cmp(&q.0.re));
        for ((xr, ar), (x, a)) in got.iter().zip(x.iter().zip(&a)) {
            node_err = node_err.max((xr - x).norm());
            amp_err = amp_err.max((ar - a).norm());
        }
    }
    ensure(node_err <= 1e-8 && amp_err <= 1e-7, || {
        format!("node error {node_err:.1e}, amplitude error {amp_err:.1e}")
    })?;
    within(start.elapsed(), 5.0, "50 instances")?;
    Ok(format!(
        "50 instances, node error {node_err:.1e}, amplitude error {amp_err:.1e}, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_2() -> Check {
    let mut worst = 0.0f64;
    for kernel in [Kernel::Gaussian { sigma: 0.3 }, Kernel::Box { width: 1.0 }] {
        let spec = KernelSpec::new(kernel.clone());
        let table = dual_coefficients(&spec, 6).map_err(|e| e.to_string())?;
        let (lo, hi) = kernel.support().unwrap();
        for n in 0..=6 {
            for x in [-0.7, -0.3, 0.0, 0.4, 0.9] {
                // f(t + x) lives on t in [lo - x, hi - x].
                let re = integrate(|t| kernel.eval(t + x).unwrap() * table.psi(n, t).re, lo - x, hi - x, tight());
                let im = integrate(|t| kernel.eval(t + x).unwrap() * table.psi(n, t).im, lo - x, hi - x, tight());
                let value = Complex64::new(re.map_err(|e| e.to_string())?, im.map_err(|e| e.to_string())?);
                let err = (value - x.powi(n as i32)).norm();
                worst = worst.max(err);
                ensure(err <= 1e-6, || format!("{kernel:?}, n = {n}, x = {x}: error {err:.1e}"))?;
            }
        }
    }
    Ok(format!("gaussian and box, n <= 6 at 5 points, max error {worst:.1e}"))
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn criterion_3() -> Check {
    let mut rng = generator(3);
    let sigma = 0.25;
    let (mut shift_err, mut amp_err) = (0.0f64, 0.0f64);
    for trial in 0..20 {
        let s = rng.random_range(1..=4);
        let x = separated_angles(&mut rng, s, TAU, 0.1);
        let a: Vec<f64> = (0..s).map(|_| amplitude(&mut rng, 5.0, f64::MIN_POSITIVE)).collect();
        let terms = x
            .iter()
            .zip(&a)
            .map(|(&shift, &a)| ShiftTerm {
                shift,
                amplitudes: vec![a],
            })
            .collect();
        let signal = ShiftSpec::new(Kernel::Gaussian { sigma }, terms).unwrap();
        let k_range = 12;
        let mu = shift_fourier_coefficients(&signal, k_range, 1e-13).map_err(|e| e.to_string())?;
        let spec = KernelSpec::new(Kernel::Gaussian { sigma });
        let big = fourier_generalized_moments(&mu, &spec, k_range as usize).map_err(|e| e.to_string())?;
        let model = solve_fourier_shifts(&big, s).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(model.shifts.len() == s, || format!("trial {trial}: {} shifts", model.shifts.len()))?;
        for (xt, at) in x.iter().zip(&a) {
            let j = (0..s)
                .min_by(|&p, &q| {
                    circular_distance(model.shifts[p], *xt).total_cmp(&circular_distance(model.shifts[q], *xt))
                })
                .unwrap();
            shift_err = shift_err.max(circular_distance(model.shifts[j], *xt));
            amp_err = amp_err.max((model.solution.amplitudes()[j][0] - at).norm());
        }
    }
    ensure(shift_err <= 1e-6 && amp_err <= 1e-6, || {
        format!("shift error {shift_err:.1e}, amplitude error {amp_err:.1e}")
    })?;
    Ok(format!(
        "20 instances, gaussian sigma = {sigma}, shift error {shift_err:.1e}, amplitude error {amp_err:.1e}"
    ))
}

fn criterion_4() -> Check {
    let sigma = 0.2;
    let truth = [(0.3, [1.5, -0.4]), (0.7, [-0.8, 0.6])];
    let terms = truth
        .iter()
        .map(|(x, a)| ShiftTerm {
            shift: *x,
            amplitudes: a.to_vec(),
        })
        .collect();
    let signal = ShiftSpec::new(Kernel::Gaussian { sigma }, terms).unwrap();
    let support = signal.support().unwrap();
    let f = move |t: f64| signal.evaluate(t);
    let assembled = PiecewiseSpec::single(support, Piece::Callable(std::sync::Arc::new(f))).unwrap();
    let m = quad_moments(&assembled, 11, 1e-14).map_err(|e| e.to_string())?;
    let spec = KernelSpec::new(Kernel::Gaussian { sigma });
    let table = dual_coefficients(&spec, 11).map_err(|e| e.to_string())?;
    let big = generalized_poly_moments(&m, &table).map_err(|e| e.to_string())?;
    let sol = solve_prony_confluent(&big, 2, 1).map_err(|e| e.to_string())?;
    let mut got: Vec<(Complex64, Vec<Complex64>)> =
        sol.nodes().iter().copied().zip(sol.amplitudes().iter().cloned()).collect();
    got.sort_by(|p, q| p.0.re.total_cmp(&q.0.re));
    let (mut node_err, mut amp_err) = (0.0f64, 0.0f64);
    for ((x, a), (xt, at)) in got.iter().zip(&truth) {
        node_err = node_err.max((x - xt).norm());
        for l in 0..2 {
            amp_err = amp_err.max((a[l] - at[l]).norm());
        }
    }
    ensure(node_err <= 1e-6 && amp_err <= 1e-5, || {
        format!("node error {node_err:.1e}, amplitude error {amp_err:.1e}")
    })?;
    Ok(format!("s = 2, r = 1, node error {node_err:.1e}, amplitude error {amp_err:.1e}"))
}

struct Known {
    name: &'static str,
    spec: PiecewiseSpec,
    operator: DifferentialOperator,
}

fn known_annihilators() -> Vec<Known> {
    let poly = |interval, breaks: Vec<f64>, coeffs| PiecewiseSpec::polynomials(interval, breaks, coeffs).unwrap();
    vec![
        Known {
            name: "step",
            spec: poly((0.0, 1.0), vec![0.5], vec![vec![0.0], vec![1.0]]),
            operator: monomial_operator(1),
        },
        Known {
            name: "cubic, 2 jumps",
            spec: poly(
                (0.0, 1.0),
                vec![0.3, 0.7],
                vec![vec![1.0, -2.0, 0.5, 1.0], vec![-0.5, 1.0, 2.0, -1.0], vec![2.0, 0.0, -1.0, 0.3]],
            ),
            operator: monomial_operator(4),
        },
        Known {
            name: "quartic, 2 jumps",
            spec: poly(
                (-1.0, 1.0),
                vec![-0.35, 0.25],
                vec![
                    vec![0.5, -1.0, 2.0, 0.3, -1.2],
                    vec![-1.0, 0.4, 1.5, -2.0, 0.7],
                    vec![1.5, 2.0, -0.5, 1.0, 0.9],
                ],
            ),
            operator: monomial_operator(5),
        },
        Known {
            name: "quartic, 1 jump",
            spec: poly(
                (0.0, 1.0),
                vec![0.45],
                vec![vec![1.0, 0.0, -3.0, 2.0, 1.0], vec![-2.0, 1.0, 0.5, 0.0, -1.5]],
            ),
            operator: monomial_operator(5),
        },
        Known {
            name: "quadratic",
            spec: poly((0.0, 2.0), vec![], vec![vec![1.0, -1.0, 0.5]]),
            operator: monomial_operator(3),
        },
    ]
}

fn criterion_5() -> Check {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for case in known_annihilators() {
        let (a, b) = case.spec.interval();
        let annihilator = case.operator.augmented(case.spec.breakpoints()).unwrap();
        let len = (0..).find(|&len| admissible_rows(len, annihilator.degrees()) >= 20).unwrap();
        let m = pp_moments(&case.spec, len - 1).map_err(|e| e.to_string())?;
        let rows = admissible_rows(m.len(), annihilator.degrees());
        let r = recurrence_residual(&m, &annihilator, a, b).map_err(|e| e.to_string())?;
        if rows < 20 || r > 1e-9 {
            failures.push(format!("{}: residual {r:.1e} over {rows} rows", case.name));
        }
        lines.push(format!("{} {r:.0e}", case.name));
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("20 rows each: {}", lines.join(", ")))
}

type Smooth = (&'static str, (f64, f64), fn(f64, usize) -> f64);

fn criterion_6() -> Check {
    let cases: [Smooth; 3] = [
        ("exp on [0,1]", (0.0, 1.0), |x, _| x.exp()),
        ("sin(2x) + 1/2 on [-1,1]", (-1.0, 1.0), |x, j| match j {
            0 => (2.0 * x).sin() + 0.5,
            1 => 2.0 * (2.0 * x).cos(),
            _ => -4.0 * (2.0 * x).sin(),
        }),
        ("1/(1+x^2) on [0,1]", (0.0, 1.0), |x, j| {
            let q = 1.0 + x * x;
            match j {
                0 => 1.0 / q,
                1 => -2.0 * x / (q * q),
                _ => (6.0 * x * x - 2.0) / (q * q * q),
            }
        }),
    ];
    let n = 2;
    let mut worst = 0.0f64;
    for (name, (a, b), f) in cases {
        let spec = PiecewiseSpec::single((a, b), Piece::Callable(std::sync::Arc::new(move |x| f(x, 0)))).unwrap();
        let m = quad_moments(&spec, 20, 1e-14).map_err(|e| e.to_string())?;
        let l = boundary_operator(a, b, n);
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=8 {
                    let v = v_entry(m.values(), i, j, k, &l).map_err(|e| e.to_string())?;
                    let g = integrate(|x| x.powi((i + k) as i32) * l.eval(x) * f(x, j), a, b, tight())
                        .map_err(|e| e.to_string())?;
                    let err = (v - g).abs();
                    worst = worst.max(err);
                    ensure(err <= 1e-8, || format!("{name}: (i, j, k) = ({i}, {j}, {k}), error {err:.1e}"))?;
                }
            }
        }
    }
    Ok(format!("3 smooth cases, N = 2, i, j <= 2, k <= 8, max error {worst:.1e}"))
}

struct Case {
    name: String,
    spec: PiecewiseSpec,
    moments: MomentSequence,
    order: usize,
    degs: Vec<Option<usize>>,
    jump_tol: f64,
    sup_tol: f64,
}

fn polynomial_case(name: String, spec: PiecewiseSpec, degree: usize, kmax: usize) -> Case {
    let moments = pp_moments(&spec, kmax).unwrap();
    let mut degs = vec![None; degree + 1];
    degs.push(Some(0));
    Case {
        name,
        spec,
        moments,
        order: degree + 1,
        degs,
        jump_tol: 1e-6,
        sup_tol: 1e-6,
    }
}

fn sinusoid_case(name: String, spec: PiecewiseSpec) -> Case {
    let moments = quad_moments(&spec, 44, 1e-14).unwrap();
    Case {
        name,
        spec,
        moments,
        order: 4,
        degs: vec![Some(0), None, Some(0), None, Some(0)],
        jump_tol: 1e-5,
        sup_tol: 1e-5,
    }
}

fn from_file(signal: &SignalFile) -> PiecewiseSpec {
    match signal.to_spec().unwrap() {
        momrec_core::signals::SignalSpec::Piecewise(p) => p,
        _ => unreachable!(),
    }
}

fn reconstruction_cases() -> Vec<Case> {
    let known = known_annihilators();
    let mut cases: Vec<Case> = known
        .into_iter()
        .filter(|k| !k.spec.breakpoints().is_empty() && k.name != "step")
        .map(|k| {
            let degree = k.operator.order() - 1;
            let kmax = if k.spec.interval().0 < 0.0 { 60 } else { 40 };
            polynomial_case(format!("(i) {}", k.name), k.spec, degree, kmax)
        })
        .collect();
    let mut rng = generator(7);
    for i in 0..4 {
        let signal = random_signal(Family::PiecewisePolynomial, &mut rng);
        let SignalFile::Piecewise(p) = &signal else { unreachable!() };
        let degree = p
            .pieces
            .iter()
            .map(|piece| match piece {
                PieceJson::Polynomial { coefficients } => coefficients.len() - 1,
                _ => unreachable!(),
            })
            .max()
            .unwrap();
        let name = format!("(i) random #{i}, degree {degree}, {} jumps", p.breakpoints.len());
        cases.push(polynomial_case(name, from_file(&signal), degree, 40));
    }
    let sinusoid = PiecewiseSpec::new(
        (0.0, 3.0),
        vec![1.5],
        vec![
            Piece::Sinusoid { amplitude: 1.0, frequency: 1.0, phase: 0.0 },
            Piece::Sinusoid { amplitude: 1.0, frequency: 2.0, phase: PI / 2.0 },
        ],
    )
    .unwrap();
    cases.push(sinusoid_case("(ii) sinusoid on [0,3]".into(), sinusoid));
    for i in 0..2 {
        let signal = random_signal(Family::PiecewiseSinusoid, &mut rng);
        cases.push(sinusoid_case(format!("(ii) random sinusoid #{i}"), from_file(&signal)));
    }
    let rational = PiecewiseSpec::single(
        (0.0, 1.0),
        Piece::Rational {
            numerator: Polynomial::constant(1.0),
            denominator: Polynomial::new(vec![1.0, 0.0, 1.0]),
        },
    )
    .unwrap();
    cases.push(Case {
        name: "(iii) 1/(1+x^2)".into(),
        moments: quad_moments(&rational, 24, 1e-14).unwrap(),
        spec: rational,
        order: 1,
        degs: vec![Some(1), Some(2)],
        jump_tol: 0.0,
        sup_tol: 1e-6,
    });
    cases
}

fn criterion_7() -> Check {
    let mut summary = Vec::new();
    let mut failures = Vec::new();
    for case in reconstruction_cases() {
        let start = Instant::now();
        let (a, b) = case.spec.interval();
        let p = case.spec.breakpoints().len();
        let result = reconstruct(&case.moments, case.order, &case.degs, p, a, b, &ReconstructOptions::default());
        let elapsed = start.elapsed();
        let model = match result {
            Ok(model) => model,
            Err(e) => {
                failures.push(format!("{}: {e}", case.name));
                continue;
            }
        };
        let jump_err = model
            .jumps
            .iter()
            .zip(case.spec.breakpoints())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let sup = piece_error(&model, &case.spec);
        if jump_err > case.jump_tol || sup > case.sup_tol || elapsed.as_secs_f64() >= 10.0 {
            failures.push(format!(
                "{}: jump error {jump_err:.1e}, sup error {sup:.1e}, {:.2} s",
                case.name,
                elapsed.as_secs_f64()
            ));
        } else {
            summary.push(format!("{} jump {jump_err:.0e} sup {sup:.0e}", case.name));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(summary.join("; "))
}

/// Negative control: dense random coefficients of the order and top degree of `like`.
fn random_operator(rng: &mut impl Rng, like: &DifferentialOperator) -> DifferentialOperator {
    let top = like.coeffs().iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let coeffs = (0..=like.order())
        .map(|_| Polynomial::new((0..=top).map(|_| amplitude(rng, 1.0, 0.1)).collect()))
        .collect();
    DifferentialOperator::from_coeffs(coeffs).unwrap()
}

fn criterion_8() -> Check {
    let truncation = 30;
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let mut check = |name: &str, spec: &PiecewiseSpec, m: &MomentSequence, good: &DifferentialOperator, bad: &DifferentialOperator| -> Result<(), String> {
        let (a, b) = spec.interval();
        let t = pade_hermite_residual(good, m, truncation, a, b).map_err(|e| e.to_string())?.residual;
        let f = pade_hermite_residual(bad, m, truncation, a, b).map_err(|e| e.to_string())?.residual;
        if t > 1e-9 || f < 1e-3 {
            failures.push(format!("{name}: true {t:.1e}, mismatched {f:.1e}"));
        }
        lines.push(format!("{name} true {t:.0e} mismatched {f:.0e}"));
        Ok(())
    };
    let mut rng = generator(8);
    for case in known_annihilators() {
        let m = pp_moments(&case.spec, 60).map_err(|e| e.to_string())?;
        let good = case.operator.augmented(case.spec.breakpoints()).unwrap();
        let bad = random_operator(&mut rng, &good);
        check(case.name, &case.spec, &m, &good, &bad)?;
    }
    let rational = PiecewiseSpec::single(
        (0.0, 1.0),
        Piece::Rational {
            numerator: Polynomial::constant(1.0),
            denominator: Polynomial::new(vec![1.0, 0.0, 1.0]),
        },
    )
    .unwrap();
    let m = quad_moments(&rational, 40, 1e-14).map_err(|e| e.to_string())?;
    let good = DifferentialOperator::from_coeffs(vec![Polynomial::new(vec![0.0, 2.0]), Polynomial::new(vec![1.0, 0.0, 1.0])]).unwrap();
    let bad = random_operator(&mut rng, &good);
    check("1/(1+x^2)", &rational, &m, &good, &bad)?;
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("T = {truncation}: {}", lines.join(", ")))
}

const STEP: &str = r#"{"signal":"piecewise","schema_version":1,"interval":[0,1],"breakpoints":[0.5],
  "pieces":[{"kind":"polynomial","coefficients":[0]},{"kind":"polynomial","coefficients":[1]}]}"#;

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_momrec"))
        .current_dir(dir)
        .args(args)
        .env_remove("MOMREC_LOG")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn pipeline(dir: &Path) -> Result<(), String> {
    std::fs::write(dir.join("step-spec.json"), STEP).map_err(|e| e.to_string())?;
    run_cli(dir, &["synth", "step-spec.json", "-o", "signal.json"])?;
    run_cli(dir, &["moments", "signal.json", "--kmax", "40", "-o", "moments.json"])?;
    run_cli(dir, &["dfinite", "moments.json", "--order", "1", "--degs", "-,0", "--jumps", "1", "-o", "model.json"])?;
    run_cli(dir, &["verify", "model.json", "moments.json", "-o", "report.json"])
}

const OUTPUTS: [&str; 4] = ["signal.json", "moments.json", "model.json", "report.json"];

fn criterion_9() -> Check {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    pipeline(first.path())?;
    pipeline(second.path())?;
    let read = |dir: &Path, name: &str| std::fs::read(dir.join(name)).map_err(|e| e.to_string());
    let report: VerifyReport = serde_json::from_slice(&read(first.path(), "report.json")?).map_err(|e| e.to_string())?;
    let model: ModelFile = serde_json::from_slice(&read(first.path(), "model.json")?).map_err(|e| e.to_string())?;
    let moments: MeasurementFile =
        serde_json::from_slice(&read(first.path(), "moments.json")?).map_err(|e| e.to_string())?;
    ensure(matches!(moments, MeasurementFile::Poly(_)), || "moments are not poly".into())?;
    ensure(report.status == Status::Pass, || format!("verify status {:?}", report.status))?;
    let jump_err = (model.jumps[0] - 0.5).abs();
    ensure(model.jumps.len() == 1 && jump_err <= 1e-8, || format!("jumps {:?}", model.jumps))?;
    for name in OUTPUTS {
        ensure(read(first.path(), name)? == read(second.path(), name)?, || format!("{name} differs between runs"))?;
    }
    Ok(format!("step fixture PASS, jump error {jump_err:.1e}, re-run byte-identical"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 prony round trip", criterion_1),
        ("2 convolution dual property", criterion_2),
        ("3 fourier shift recovery", criterion_3),
        ("4 derivative model", criterion_4),
        ("5 recurrence residual", criterion_5),
        ("6 v-entry duality", criterion_6),
        ("7 piecewise D-finite reconstruction", criterion_7),
        ("8 Padé-Hermite residual", criterion_8),
        ("9 CLI end-to-end", criterion_9),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (name, run) in criteria {
        let line = match run() {
            Ok(detail) => format!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed.push(name);
                format!("FAIL criterion {name}: {detail}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
