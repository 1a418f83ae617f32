//! Simulated 16-setting two-qubit polarization tomography.
//!
//! Counts are drawn from a Poisson distribution with mean `N Tr(Π_i ρ)` for
//! each product analyzer setting. The random stream is ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`), consumed in canonical
//! setting order; bootstrap resample `k` uses seed `seed + k` (wrapping).
//!
//! Reconstruction is linear inversion in the Pauli-product basis followed by
//! an optional projection of the spectrum onto the probability simplex.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{cr, hermitian_eig, pauli, reassemble, tensor, ComplexMatrix, C64};
use crate::measures::{full_report, CorrelationReport};

pub const NUM_SETTINGS: usize = 16;
pub const MIN_BOOTSTRAP_RESAMPLES: usize = 50;

/// Single-photon analyzer state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    H,
    V,
    /// `(H + V)/√2`
    D,
    /// `(H + iV)/√2`
    R,
    /// `(H - iV)/√2`
    L,
}

impl Setting {
    pub fn ket(self) -> [C64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Setting::H => [cr(1.0), cr(0.0)],
            Setting::V => [cr(0.0), cr(1.0)],
            Setting::D => [cr(s), cr(s)],
            Setting::R => [cr(s), C64::new(0.0, s)],
            Setting::L => [cr(s), C64::new(0.0, -s)],
        }
    }

    fn from_char(ch: char) -> Option<Self> {
        Some(match ch {
            'H' => Setting::H,
            'V' => Setting::V,
            'D' => Setting::D,
            'R' => Setting::R,
            'L' => Setting::L,
            _ => return None,
        })
    }

    fn as_char(self) -> char {
        match self {
            Setting::H => 'H',
            Setting::V => 'V',
            Setting::D => 'D',
            Setting::R => 'R',
            Setting::L => 'L',
        }
    }
}

use Setting::{D, H, L, R, V};

/// Analyzer pairs `(A, B)` in the frozen record order.
pub const BASIS_SET: [(Setting, Setting); NUM_SETTINGS] = [
    (H, H),
    (H, V),
    (V, V),
    (V, H),
    (R, H),
    (R, V),
    (D, V),
    (D, H),
    (D, R),
    (D, D),
    (R, D),
    (H, D),
    (V, D),
    (V, L),
    (H, L),
    (R, L),
];

/// Indices of HH, HV, VV, VH; their counts sum to the flux estimate.
const FLUX_INDICES: [usize; 4] = [0, 1, 2, 3];

pub fn setting_label(i: usize) -> String {
    let (a, b) = BASIS_SET[i];
    [a.as_char(), b.as_char()].iter().collect()
}

pub fn parse_setting_label(label: &str) -> Option<(Setting, Setting)> {
    let mut chars = label.chars();
    let a = Setting::from_char(chars.next()?)?;
    let b = Setting::from_char(chars.next()?)?;
    chars.next().is_none().then_some((a, b))
}

/// The 16 product projectors `|s_A><s_A| ⊗ |s_B><s_B|`.
pub fn projectors() -> Vec<ComplexMatrix> {
    BASIS_SET
        .iter()
        .map(|&(a, b)| {
            tensor(
                &ComplexMatrix::projector(&a.ket()),
                &ComplexMatrix::projector(&b.ket()),
            )
        })
        .collect()
}

/// Coincidence count for one analyzer setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub i: usize,
    pub setting: String,
    /// Integer-valued for Poisson data, real-valued for noiseless data.
    #[serde(serialize_with = "ser_count", deserialize_with = "de_count")]
    pub count: f64,
}

fn ser_count<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.fract() == 0.0 && *x >= 0.0 && *x < 9.007_199_254_740_992e15 {
        s.serialize_u64(*x as u64)
    } else {
        s.serialize_f64(*x)
    }
}

fn de_count<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    f64::deserialize(d)
}

/// A complete measurement run: `{ "N": int, "records": [...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSet {
    #[serde(rename = "N")]
    pub n: u64,
    pub records: Vec<CountRecord>,
}

impl fmt::Display for CountSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{:>2} {} {}", r.i, r.setting, r.count)?;
        }
        Ok(())
    }
}

impl CountSet {
    fn from_counts(n: u64, counts: impl IntoIterator<Item = f64>) -> Self {
        CountSet {
            n,
            records: counts
                .into_iter()
                .enumerate()
                .map(|(i, count)| CountRecord {
                    i,
                    setting: setting_label(i),
                    count,
                })
                .collect(),
        }
    }

    /// Checks completeness and plausibility; returns counts in canonical
    /// order.
    pub fn ordered_counts(&self) -> Result<[f64; NUM_SETTINGS]> {
        if self.n == 0 {
            return Err(Error::InvalidRecords("N must be positive".into()));
        }
        let mut counts = [f64::NAN; NUM_SETTINGS];
        for r in &self.records {
            if r.i >= NUM_SETTINGS {
                return Err(Error::InvalidRecords(format!(
                    "basis index {} out of range",
                    r.i
                )));
            }
            if !counts[r.i].is_nan() {
                return Err(Error::InvalidRecords(format!(
                    "duplicate basis index {}",
                    r.i
                )));
            }
            if r.setting != setting_label(r.i) {
                return Err(Error::InvalidRecords(format!(
                    "record {} has setting {:?}, expected {:?}",
                    r.i,
                    r.setting,
                    setting_label(r.i)
                )));
            }
            let ceiling = 10.0 * self.n as f64;
            if !(r.count.is_finite() && r.count >= 0.0 && r.count <= ceiling) {
                return Err(Error::InvalidRecords(format!(
                    "record {} count {} outside [0, 10 N]",
                    r.i, r.count
                )));
            }
            counts[r.i] = r.count;
        }
        let missing: Vec<usize> = (0..NUM_SETTINGS).filter(|&i| counts[i].is_nan()).collect();
        if !missing.is_empty() {
            return Err(Error::MissingRecords { missing });
        }
        Ok(counts)
    }
}

fn probabilities(rho: &ComplexMatrix) -> Result<[f64; NUM_SETTINGS]> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    rho.ensure_density(1e-9, 1e-9)?;
    let mut p = [0.0; NUM_SETTINGS];
    for (k, proj) in projectors().iter().enumerate() {
        p[k] = (proj * rho).trace().re.max(0.0);
    }
    Ok(p)
}

fn poisson_draw(rng: &mut ChaCha8Rng, mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean)
        .expect("positive finite Poisson mean")
        .sample(rng)
}

/// Poisson counts with mean `N Tr(Π_i ρ)`, reproducible for a given seed.
pub fn simulate_counts(rho: &ComplexMatrix, n: u64, seed: u64) -> Result<CountSet> {
    if n == 0 {
        return Err(Error::InvalidRecords("N must be positive".into()));
    }
    let probs = probabilities(rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(CountSet::from_counts(
        n,
        probs.map(|p| poisson_draw(&mut rng, n as f64 * p)),
    ))
}

/// Noiseless counts `N Tr(Π_i ρ)`.
pub fn expected_counts(rho: &ComplexMatrix, n: u64) -> Result<CountSet> {
    if n == 0 {
        return Err(Error::InvalidRecords("N must be positive".into()));
    }
    let probs = probabilities(rho)?;
    Ok(CountSet::from_counts(n, probs.map(|p| n as f64 * p)))
}

/// The 16 Pauli products `σ_i ⊗ σ_j`, index `4i + j`.
fn pauli_products() -> Vec<ComplexMatrix> {
    (0..16)
        .map(|m| tensor(&pauli(m / 4), &pauli(m % 4)))
        .collect()
}

/// `A[k][m] = Tr(Π_k σ_m) / 4`, so that `A r = p` for `ρ = Σ r_m σ_m / 4`.
pub fn design_matrix() -> Vec<Vec<f64>> {
    let paulis = pauli_products();
    projectors()
        .iter()
        .map(|proj| {
            paulis
                .iter()
                .map(|s| 0.25 * (proj * s).trace().re)
                .collect()
        })
        .collect()
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        let pivot = a[pivot_row][col];
        if pivot.abs() < 1e-12 {
            return Err(Error::Singular { pivot });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (t, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *t -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Reconstructs `ρ` from the 16 counts by solving `Tr(Π_i ρ) = n_i / N̂`
/// with `N̂` the summed HH, HV, VH, VV counts. The result is Hermitian with
/// unit trace but not necessarily positive.
pub fn linear_inversion(set: &CountSet) -> Result<ComplexMatrix> {
    let counts = set.ordered_counts()?;
    let flux: f64 = FLUX_INDICES.iter().map(|&i| counts[i]).sum();
    if flux <= 0.0 {
        return Err(Error::InvalidRecords(
            "HH + HV + VH + VV counts are zero; flux cannot be estimated".into(),
        ));
    }
    let rhs: Vec<f64> = counts.iter().map(|c| c / flux).collect();
    let coeffs = solve_linear(design_matrix(), rhs)?;
    let mut rho = ComplexMatrix::zeros(4);
    for (r, s) in coeffs.iter().zip(pauli_products()) {
        rho = &rho + &s.scale(cr(0.25 * r));
    }
    let rho = rho.hermitian_part();
    let tr = rho.trace().re;
    Ok(rho.scale(cr(1.0 / tr)))
}

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut shift = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|&x| (x - shift).max(0.0)).collect()
}

/// Closest density matrix in Frobenius norm: the spectrum is projected onto
/// the probability simplex and reassembled with the same eigenvectors.
/// Inputs that are already positive semidefinite are returned as-is.
pub fn project_physical(rho_raw: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho_raw.ensure_hermitian(1e-10)?;
    let tr = rho_raw.trace().re;
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::TraceNotUnit { trace: tr });
    }
    let spec = hermitian_eig(rho_raw)?;
    if spec.values.iter().all(|&x| x >= 0.0) {
        return Ok(rho_raw.clone());
    }
    let projected = project_simplex(&spec.values);
    Ok(reassemble(&projected, &spec.vectors).hermitian_part())
}

/// Linear inversion followed by physical projection.
pub fn reconstruct(set: &CountSet) -> Result<ComplexMatrix> {
    project_physical(&linear_inversion(set)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureStats {
    pub mean: f64,
    pub std: f64,
}

impl MeasureStats {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        MeasureStats { mean, std }
    }
}

/// Reconstruction of the observed counts plus Poisson-bootstrap statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub point: CorrelationReport,
    pub resamples: usize,
    pub seed: u64,
    #[serde(rename = "I")]
    pub total: MeasureStats,
    #[serde(rename = "C")]
    pub classical: MeasureStats,
    #[serde(rename = "Q")]
    pub quantum: MeasureStats,
    pub eta: MeasureStats,
    #[serde(rename = "Lambda")]
    pub lambda: MeasureStats,
    #[serde(rename = "Upsilon")]
    pub upsilon: MeasureStats,
    #[serde(rename = "En")]
    pub en: MeasureStats,
    /// Present only when every resample is Bell-diagonal.
    #[serde(rename = "Rn")]
    pub rn: Option<MeasureStats>,
    #[serde(rename = "D")]
    pub d: Option<MeasureStats>,
}

fn resample(set: &CountSet, counts: &[f64; NUM_SETTINGS], seed: u64) -> CountSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CountSet::from_counts(set.n, counts.map(|c| poisson_draw(&mut rng, c)))
}

/// Error bars from counting statistics.
///
/// Each resample redraws every count from a Poisson distribution centred on
/// the observed count, reconstructs, and evaluates the full report. With
/// `resamples = 0` the point estimate is returned with zero spread.
pub fn bootstrap_report(set: &CountSet, resamples: usize, seed: u64) -> Result<BootstrapReport> {
    let counts = set.ordered_counts()?;
    if resamples != 0 && resamples < MIN_BOOTSTRAP_RESAMPLES {
        return Err(Error::OutOfRange {
            name: "resamples",
            value: resamples as f64,
            range: "0 or >= 50",
        });
    }
    let point = full_report(&reconstruct(set)?)?;
    let reports: Vec<CorrelationReport> = if resamples == 0 {
        vec![point.clone()]
    } else {
        (0..resamples)
            .into_par_iter()
            .map(|k| {
                let drawn = resample(set, &counts, seed.wrapping_add(k as u64));
                full_report(&reconstruct(&drawn)?)
            })
            .collect::<Result<Vec<_>>>()?
    };

    let stats = |f: &dyn Fn(&CorrelationReport) -> f64| {
        MeasureStats::from_samples(&reports.iter().map(f).collect::<Vec<_>>())
    };
    let optional = |f: &dyn Fn(&CorrelationReport) -> Option<f64>| {
        reports
            .iter()
            .map(f)
            .collect::<Option<Vec<f64>>>()
            .map(|xs| MeasureStats::from_samples(&xs))
    };
    Ok(BootstrapReport {
        total: stats(&|r| r.total),
        classical: stats(&|r| r.classical),
        quantum: stats(&|r| r.quantum),
        eta: stats(&|r| r.eta),
        lambda: stats(&|r| r.lambda),
        upsilon: stats(&|r| r.upsilon),
        en: stats(&|r| r.en),
        rn: optional(&|r| r.rn),
        d: optional(&|r| r.d),
        point,
        resamples,
        seed,
    })
}
