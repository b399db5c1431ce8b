//! File formats. Every file carries `"schema_version": 1` and rejects unknown fields.

use std::sync::Arc;

use momrec_core::convdual::KernelSpec;
use momrec_core::dfinite::{DifferentialOperator, PiecewiseDFiniteModel};
use momrec_core::kernel::Kernel;
use momrec_core::prony::{Domain, ShiftModel};
use momrec_core::signals::{Piece, PiecewiseSpec, ShiftSpec, ShiftTerm, SignalSpec, FOURIER_DOMAIN};
use momrec_core::{Complex64, FourierMeasurements, MomentSequence, Polynomial, Provenance, Warning};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// The `schema_version` field; only version 1 deserializes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Version;

impl Serialize for Version {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(SCHEMA_VERSION)
    }
}

impl<'de> Deserialize<'de> for Version {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u32::deserialize(d)?;
        if v == SCHEMA_VERSION {
            Ok(Version)
        } else {
            Err(D::Error::custom(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")))
        }
    }
}

/// Complex numbers are `[re, im]` pairs.
pub type ComplexJson = [f64; 2];

fn complex_json(z: Complex64) -> ComplexJson {
    [z.re, z.im]
}

fn nan_to_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelJson {
    Gaussian { sigma: f64 },
    Box { width: f64 },
    Dirac,
    /// Taylor coefficients of `f̂` at the origin.
    Taylor { coefficients: Vec<ComplexJson> },
    /// Moments `∫ f(u) u^j du`.
    Moments { moments: Vec<f64> },
}

impl KernelJson {
    pub fn to_kernel(&self) -> Result<Kernel, CliError> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(CliError::Schema(format!("kernel {what} must be positive, got {v}")))
            }
        };
        Ok(match self {
            KernelJson::Gaussian { sigma } => Kernel::Gaussian { sigma: positive(*sigma, "sigma")? },
            KernelJson::Box { width } => Kernel::Box { width: positive(*width, "width")? },
            KernelJson::Dirac => Kernel::Dirac,
            KernelJson::Taylor { coefficients } => {
                if coefficients.is_empty() {
                    return Err(CliError::Schema("taylor kernel needs at least one coefficient".into()));
                }
                Kernel::Taylor(coefficients.iter().map(|c| Complex64::new(c[0], c[1])).collect())
            }
            KernelJson::Moments { moments } => {
                if moments.is_empty() {
                    return Err(CliError::Schema("moment kernel needs at least one moment".into()));
                }
                Kernel::from_moments(moments)
            }
        })
    }

    pub fn from_kernel(kernel: &Kernel) -> Self {
        match kernel {
            Kernel::Gaussian { sigma } => KernelJson::Gaussian { sigma: *sigma },
            Kernel::Box { width } => KernelJson::Box { width: *width },
            Kernel::Dirac => KernelJson::Dirac,
            Kernel::Taylor(c) => KernelJson::Taylor {
                coefficients: c.iter().copied().map(complex_json).collect(),
            },
        }
    }

    /// Parses the command-line form: `gaussian:SIGMA`, `box:WIDTH`, `dirac` or
    /// `moments:m0,m1,...`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let (name, arg) = text.split_once(':').unwrap_or((text, ""));
        let number = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"));
        match name {
            "gaussian" => Ok(KernelJson::Gaussian { sigma: number(arg)? }),
            "box" => Ok(KernelJson::Box { width: number(arg)? }),
            "dirac" if arg.is_empty() => Ok(KernelJson::Dirac),
            "moments" => Ok(KernelJson::Moments {
                moments: arg.split(',').map(number).collect::<Result<_, _>>()?,
            }),
            _ => Err(format!("unknown kernel {text:?}; expected gaussian:S, box:W, dirac or moments:m0,m1,...")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceJson {
    /// Ascending coefficients.
    Polynomial { coefficients: Vec<f64> },
    Sinusoid { amplitude: f64, frequency: f64, phase: f64 },
    Rational { numerator: Vec<f64>, denominator: Vec<f64> },
    /// Samples joined by straight lines, held constant outside `[x_0, x_last]`.
    Sampled { x: Vec<f64>, y: Vec<f64> },
}

impl PieceJson {
    pub fn to_piece(&self) -> Result<Piece, CliError> {
        Ok(match self {
            PieceJson::Polynomial { coefficients } => Piece::polynomial(coefficients.clone()),
            PieceJson::Sinusoid { amplitude, frequency, phase } => Piece::Sinusoid {
                amplitude: *amplitude,
                frequency: *frequency,
                phase: *phase,
            },
            PieceJson::Rational { numerator, denominator } => Piece::Rational {
                numerator: Polynomial::new(numerator.clone()),
                denominator: Polynomial::new(denominator.clone()),
            },
            PieceJson::Sampled { x, y } => {
                if x.len() < 2 || x.len() != y.len() {
                    return Err(CliError::Schema("sampled piece needs matching x and y with two or more points".into()));
                }
                if x.windows(2).any(|w| !(w[0] < w[1])) || y.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Schema("sampled piece needs strictly increasing x and finite y".into()));
                }
                let (x, y) = (x.clone(), y.clone());
                Piece::Callable(Arc::new(move |t| interpolate(&x, &y, t)))
            }
        })
    }
}

fn interpolate(x: &[f64], y: &[f64], t: f64) -> f64 {
    let last = x.len() - 1;
    if t <= x[0] {
        return y[0];
    }
    if t >= x[last] {
        return y[last];
    }
    let i = x.partition_point(|&v| v <= t) - 1;
    let w = (t - x[i]) / (x[i + 1] - x[i]);
    y[i] + w * (y[i + 1] - y[i])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseJson {
    pub schema_version: Version,
    pub interval: [f64; 2],
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<PieceJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftTermJson {
    pub shift: f64,
    /// `amplitudes[l]` multiplies the `l`-th kernel derivative.
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftJson {
    pub schema_version: Version,
    pub kernel: KernelJson,
    pub terms: Vec<ShiftTermJson>,
}

/// Signal description, as written by `synth` and read by `moments`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "signal", rename_all = "snake_case")]
pub enum SignalFile {
    Piecewise(PiecewiseJson),
    Shift(ShiftJson),
}

impl SignalFile {
    pub fn to_spec(&self) -> Result<SignalSpec, CliError> {
        match self {
            SignalFile::Piecewise(p) => {
                let pieces = p.pieces.iter().map(PieceJson::to_piece).collect::<Result<_, _>>()?;
                let spec = PiecewiseSpec::new((p.interval[0], p.interval[1]), p.breakpoints.clone(), pieces)
                    .map_err(CliError::schema)?;
                Ok(SignalSpec::Piecewise(spec))
            }
            SignalFile::Shift(s) => {
                let terms = s
                    .terms
                    .iter()
                    .map(|t| ShiftTerm {
                        shift: t.shift,
                        amplitudes: t.amplitudes.clone(),
                    })
                    .collect();
                let spec = ShiftSpec::new(s.kernel.to_kernel()?, terms).map_err(CliError::schema)?;
                Ok(SignalSpec::Shift(spec))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceJson {
    Analytic,
    Quadrature,
    External,
}

impl From<Provenance> for ProvenanceJson {
    fn from(p: Provenance) -> Self {
        match p {
            Provenance::Analytic => ProvenanceJson::Analytic,
            Provenance::Quadrature => ProvenanceJson::Quadrature,
            Provenance::External => ProvenanceJson::External,
        }
    }
}

impl From<ProvenanceJson> for Provenance {
    fn from(p: ProvenanceJson) -> Self {
        match p {
            ProvenanceJson::Analytic => Provenance::Analytic,
            ProvenanceJson::Quadrature => Provenance::Quadrature,
            ProvenanceJson::External => Provenance::External,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyMeasurements {
    pub schema_version: Version,
    pub interval: [f64; 2],
    /// `m_0..m_K`.
    pub values: Vec<f64>,
    pub provenance: ProvenanceJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierValue {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierJson {
    pub schema_version: Version,
    pub interval: [f64; 2],
    /// `μ_k = ∫ F(t) e^{ikt} dt`.
    pub values: Vec<FourierValue>,
    pub provenance: ProvenanceJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasurementFile {
    Poly(PolyMeasurements),
    Fourier(FourierJson),
}

impl MeasurementFile {
    pub fn from_moments(m: &MomentSequence, interval: (f64, f64)) -> Self {
        MeasurementFile::Poly(PolyMeasurements {
            schema_version: Version,
            interval: [interval.0, interval.1],
            values: m.values().to_vec(),
            provenance: m.provenance().into(),
        })
    }

    pub fn from_fourier(mu: &FourierMeasurements) -> Self {
        let (a, b) = mu.interval.unwrap_or(FOURIER_DOMAIN);
        MeasurementFile::Fourier(FourierJson {
            schema_version: Version,
            interval: [a, b],
            values: mu
                .coefficients
                .iter()
                .map(|(&k, z)| FourierValue { k, re: z.re, im: z.im })
                .collect(),
            provenance: mu.provenance.into(),
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        let [a, b] = match self {
            MeasurementFile::Poly(p) => p.interval,
            MeasurementFile::Fourier(f) => f.interval,
        };
        (a, b)
    }

    /// Power moments on the stated interval.
    pub fn to_moments(&self) -> Result<MomentSequence, CliError> {
        match self {
            MeasurementFile::Poly(p) => {
                let [a, b] = p.interval;
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(CliError::Schema(format!("interval [{a}, {b}] must satisfy a < b")));
                }
                if p.values.is_empty() || p.values.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Schema("moment values must be finite and non-empty".into()));
                }
                Ok(MomentSequence::on_interval(p.values.clone(), a, b, p.provenance.into()))
            }
            MeasurementFile::Fourier(_) => Err(CliError::Schema("expected kind \"poly\" measurements".into())),
        }
    }

    pub fn to_fourier(&self) -> Result<FourierMeasurements, CliError> {
        match self {
            MeasurementFile::Fourier(f) => {
                let mut coefficients = std::collections::BTreeMap::new();
                for v in &f.values {
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(CliError::Schema(format!("coefficient {} is not finite", v.k)));
                    }
                    if coefficients.insert(v.k, Complex64::new(v.re, v.im)).is_some() {
                        return Err(CliError::Schema(format!("frequency {} appears twice", v.k)));
                    }
                }
                Ok(FourierMeasurements {
                    coefficients,
                    interval: Some((f.interval[0], f.interval[1])),
                    provenance: f.provenance.into(),
                })
            }
            MeasurementFile::Poly(_) => Err(CliError::Schema("expected kind \"fourier\" measurements".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WarningJson {
    IllConditioned { condition: f64 },
    AmbiguousNullspace { dimension: usize },
    RejectedRoot { root: ComplexJson },
    JumpsFromScan { objective: f64 },
}

impl From<&Warning> for WarningJson {
    fn from(w: &Warning) -> Self {
        match w {
            Warning::IllConditioned { condition } => WarningJson::IllConditioned { condition: *condition },
            Warning::AmbiguousNullspace { dimension } => WarningJson::AmbiguousNullspace { dimension: *dimension },
            Warning::RejectedRoot { root } => WarningJson::RejectedRoot { root: complex_json(*root) },
            Warning::JumpsFromScan { objective } => WarningJson::JumpsFromScan { objective: *objective },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainJson {
    Moments,
    Fourier,
}

/// Output of `prony`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PronyFile {
    pub schema_version: Version,
    pub domain: DomainJson,
    pub kernel: Option<KernelJson>,
    pub s: usize,
    pub r: usize,
    pub shifts: Vec<f64>,
    pub nodes: Vec<ComplexJson>,
    /// `amplitudes[j][l] = a_{j,l}`.
    pub amplitudes: Vec<Vec<ComplexJson>>,
    /// Relative misfit of the generalized moments.
    pub residual: f64,
    pub warnings: Vec<WarningJson>,
}

impl PronyFile {
    pub fn from_model(model: &ShiftModel, s: usize, r: usize) -> Self {
        let sol = &model.solution;
        PronyFile {
            schema_version: Version,
            domain: match model.domain {
                Domain::Moments => DomainJson::Moments,
                Domain::Fourier => DomainJson::Fourier,
            },
            kernel: model.kernel.as_ref().map(|k: &KernelSpec| KernelJson::from_kernel(&k.kernel)),
            s,
            r,
            shifts: model.shifts.clone(),
            nodes: sol.nodes().iter().copied().map(complex_json).collect(),
            amplitudes: sol
                .amplitudes()
                .iter()
                .map(|a| a.iter().copied().map(complex_json).collect())
                .collect(),
            residual: sol.residual(),
            warnings: sol.warnings().iter().map(WarningJson::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsJson {
    pub rows: usize,
    pub nullspace_dimension: usize,
    pub smallest_singular_values: Vec<f64>,
    pub jump_spreads: Vec<f64>,
    pub raw_jumps: Vec<f64>,
    pub moment_residual: Option<f64>,
    pub recurrence_residual: Option<f64>,
    pub amplitude_condition: Option<f64>,
    pub warnings: Vec<WarningJson>,
}

/// Output of `dfinite`. The basis is not stored; readers integrate it again from the
/// operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: Version,
    pub interval: [f64; 2],
    pub order: usize,
    /// Degree bound per coefficient `p_0..p_N`, `null` for an absent coefficient.
    pub degrees: Vec<Option<usize>>,
    /// Ascending coefficients of `p_0..p_N`.
    pub coefficients: Vec<Vec<f64>>,
    pub jumps: Vec<f64>,
    /// `amplitudes[n][i]` weights basis function `u_i` on continuity interval `n`.
    pub amplitudes: Vec<Vec<f64>>,
    pub basis_nodes: usize,
    pub diagnostics: DiagnosticsJson,
}

impl ModelFile {
    pub fn from_model(model: &PiecewiseDFiniteModel, basis_nodes: usize) -> Self {
        let d = &model.diagnostics;
        ModelFile {
            schema_version: Version,
            interval: [model.interval.0, model.interval.1],
            order: model.operator.order(),
            degrees: model.operator.degrees().to_vec(),
            coefficients: model.operator.coeffs().iter().map(|p| p.coeffs().to_vec()).collect(),
            jumps: model.jumps.clone(),
            amplitudes: model.amplitudes.clone(),
            basis_nodes,
            diagnostics: DiagnosticsJson {
                rows: d.rows,
                nullspace_dimension: d.nullspace_dimension,
                smallest_singular_values: d.smallest_singular_values.clone(),
                jump_spreads: d.jump_spreads.clone(),
                raw_jumps: d.raw_jumps.clone(),
                moment_residual: nan_to_none(d.moment_residual),
                recurrence_residual: nan_to_none(d.recurrence_residual),
                amplitude_condition: nan_to_none(d.amplitude_condition),
                warnings: d.warnings.iter().map(WarningJson::from).collect(),
            },
        }
    }

    pub fn operator(&self) -> Result<DifferentialOperator, CliError> {
        if self.degrees.len() != self.order + 1 {
            return Err(CliError::Schema(format!(
                "degrees has {} entries, order {} needs {}",
                self.degrees.len(),
                self.order,
                self.order + 1
            )));
        }
        let coeffs = self.coefficients.iter().cloned().map(Polynomial::new).collect();
        DifferentialOperator::new(self.degrees.clone(), coeffs).map_err(CliError::schema)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Degenerate,
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub schema_version: Version,
    pub status: Status,
    pub tol: f64,
    pub jumps: Vec<f64>,
    pub recurrence_residual: Option<f64>,
    pub pade_hermite_residual: Option<f64>,
    pub truncation: Option<usize>,
    pub moment_residual: Option<f64>,
    pub message: Option<String>,
}
