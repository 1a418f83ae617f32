//! Thickness sweeps and the landmarks of the resulting correlation curves.
//!
//! Landmarks of Bell-diagonal inputs are solved in closed form in `|κ|` and
//! mapped to a thickness through the channel calibration. Explicit
//! non-Bell-diagonal inputs fall back to locating the same events on the
//! sampled table.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{evolve, kappa_of_thickness, DephasingModel};
use crate::error::{Error, Result};
use crate::measures::{
    classical_correlation_numeric, full_report, MeasurementDirection, OptimizerSettings,
    BELL_DIAGONAL_TOL,
};
use crate::states::{to_mixture, BellMixture, StateFamilySpec};

pub const DEFAULT_L_MAX: f64 = 350.0;
pub const DEFAULT_STEPS: usize = 141;

/// `Q - C` below this is treated as zero when looking for `Q > C` windows.
const QC_NOISE_FLOOR: f64 = 1e-12;
/// Plateau detection tolerance on the sampled column.
const PLATEAU_TOL: f64 = 1e-6;

/// One sampled thickness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "L_lambda0")]
    pub l: f64,
    pub p: f64,
    pub kappa_abs: f64,
    #[serde(rename = "I")]
    pub total: f64,
    #[serde(rename = "C")]
    pub classical: f64,
    #[serde(rename = "Q")]
    pub quantum: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    #[serde(rename = "En")]
    pub en: f64,
    #[serde(rename = "Rn")]
    pub rn: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: StateFamilySpec,
    pub model: DephasingModel,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn l_range(&self) -> (f64, f64) {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => (a.l, b.l),
            _ => (0.0, 0.0),
        }
    }
}

/// Evaluates the full correlation report on a uniform grid of `steps`
/// thicknesses from 0 to `l_max` inclusive. Rows are computed in parallel
/// and returned in order of `L`.
pub fn sweep(
    spec: &StateFamilySpec,
    model: &DephasingModel,
    l_max: f64,
    steps: usize,
) -> Result<SweepTable> {
    if steps < 2 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: steps as f64,
            range: ">= 2",
        });
    }
    if !(l_max.is_finite() && l_max > 0.0) {
        return Err(Error::OutOfRange {
            name: "l_max",
            value: l_max,
            range: "(0, inf)",
        });
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| l_max * i as f64 / (steps - 1) as f64)
        .collect();
    sweep_grid(spec, model, &grid)
}

/// Sweep over an explicit, strictly increasing list of thicknesses.
pub fn sweep_grid(
    spec: &StateFamilySpec,
    model: &DephasingModel,
    grid: &[f64],
) -> Result<SweepTable> {
    spec.validate()?;
    model.validate()?;
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(
            "thickness grid must be non-empty and strictly increasing".into(),
        ));
    }
    let rows = grid
        .par_iter()
        .map(|&l| row_at(spec, model, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        spec: spec.clone(),
        model: *model,
        rows,
    })
}

fn row_at(spec: &StateFamilySpec, model: &DephasingModel, l: f64) -> Result<SweepRow> {
    let strength = kappa_of_thickness(model, l)?;
    let report = full_report(&evolve(spec, model, l)?)?;
    Ok(SweepRow {
        l,
        p: strength.p,
        kappa_abs: strength.kappa_abs,
        total: report.total,
        classical: report.classical,
        quantum: report.quantum,
        lambda: report.lambda,
        en: report.en,
        rn: report.rn,
        d: report.d,
    })
}

/// `|κ|` at which the κ-dependent branch `|κ| max(|a-b+c-d|, |c-d-a+b|)`
/// meets `|a+b-c-d|`.
pub fn sudden_change_kappa(m: &BellMixture) -> Option<f64> {
    let [tx, ty, tz] = m.correlation_diagonal();
    let moving = tx.abs().max(ty.abs());
    let fixed = tz.abs();
    if moving <= 0.0 || fixed <= 0.0 {
        return None;
    }
    let kappa = fixed / moving;
    (kappa < 1.0).then_some(kappa)
}

/// Thickness of the sudden change in the decay of C and Q, if any.
pub fn sudden_change_point(m: &BellMixture, model: &DephasingModel) -> Option<f64> {
    sudden_change_kappa(m).and_then(|k| model.thickness_for_kappa(k))
}

/// Largest eigenvalue of the dephased Bell-diagonal state at coherence
/// `kappa`: dephasing mixes `Φ+ ↔ Φ-` and `Ψ+ ↔ Ψ-`.
pub fn dephased_lambda_max(m: &BellMixture, kappa: f64) -> f64 {
    let pair = |x: f64, y: f64| 0.5 * (x + y) + 0.5 * kappa * (x - y).abs();
    pair(m.a, m.b).max(pair(m.c, m.d))
}

/// `|κ|` at which the largest eigenvalue falls to 1/2 (concurrence hits 0).
pub fn esd_kappa(m: &BellMixture) -> Option<f64> {
    if dephased_lambda_max(m, 1.0) <= 0.5 || dephased_lambda_max(m, 0.0) > 0.5 {
        return None;
    }
    [(m.a, m.b), (m.c, m.d)]
        .into_iter()
        .filter(|(x, y)| x != y)
        .map(|(x, y)| (1.0 - (x + y)) / (x - y).abs())
        .filter(|k| (0.0..1.0).contains(k))
        .min_by(|a, b| a.total_cmp(b))
}

/// Thickness of entanglement sudden death, if the state is entangled at
/// `L = 0` and loses it at finite thickness.
pub fn esd_point(m: &BellMixture, model: &DephasingModel) -> Option<f64> {
    esd_kappa(m).and_then(|k| model.thickness_for_kappa(k))
}

/// Linear-interpolated zero of `f` between two samples of opposite sign,
/// clamped into the bracket.
fn interpolate_zero(l0: f64, f0: f64, l1: f64, f1: f64) -> f64 {
    if f1 == f0 {
        return 0.5 * (l0 + l1);
    }
    (l0 - f0 * (l1 - l0) / (f1 - f0)).clamp(l0, l1)
}

/// Maximal thickness intervals on which `Q > C`.
pub fn qc_cross_intervals(table: &SweepTable) -> Vec<(f64, f64)> {
    let rows = &table.rows;
    let diff: Vec<f64> = rows.iter().map(|r| r.quantum - r.classical).collect();
    let positive = |i: usize| diff[i] > QC_NOISE_FLOOR;
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..rows.len() {
        match (start, positive(i)) {
            (None, true) => {
                start = Some(if i == 0 {
                    rows[0].l
                } else {
                    interpolate_zero(rows[i - 1].l, diff[i - 1], rows[i].l, diff[i])
                });
            }
            (Some(s), false) => {
                out.push((
                    s,
                    interpolate_zero(rows[i - 1].l, diff[i - 1], rows[i].l, diff[i]),
                ));
                start = None;
            }
            _ => {}
        }
    }
    if let (Some(s), Some(last)) = (start, rows.last()) {
        out.push((s, last.l));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventSource {
    /// Closed form in `|κ|`, inverted through the calibration.
    Analytic,
    /// Located on the sampled table.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventPoint {
    #[serde(rename = "L_lambda0")]
    pub l: f64,
    pub kappa_abs: f64,
    pub source: EventSource,
    /// Set when an analytic marker falls outside the swept range.
    pub extrapolated: bool,
}

/// Thickness interval; `end = None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Plateaus {
    pub frozen_q: Option<Interval>,
    pub frozen_c: Option<Interval>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EventMarkers {
    pub sudden_change: Option<EventPoint>,
    pub esd: Option<EventPoint>,
    pub qc_cross_intervals: Vec<(f64, f64)>,
    pub plateaus: Plateaus,
}

impl EventMarkers {
    pub fn is_empty(&self) -> bool {
        self.sudden_change.is_none()
            && self.esd.is_none()
            && self.qc_cross_intervals.is_empty()
            && self.plateaus == Plateaus::default()
    }
}

fn analytic_point(model: &DephasingModel, kappa: f64, range: (f64, f64)) -> Option<EventPoint> {
    let l = model.thickness_for_kappa(kappa)?;
    Some(EventPoint {
        l,
        kappa_abs: kappa,
        source: EventSource::Analytic,
        extrapolated: l < range.0 || l > range.1,
    })
}

/// Bell weights of the channel input when it is Bell-diagonal.
fn input_mixture(spec: &StateFamilySpec) -> Result<Option<BellMixture>> {
    if let Some(m) = spec.mixture() {
        return Ok(Some(m));
    }
    let (m, residual) = to_mixture(&spec.build()?)?;
    Ok((residual <= BELL_DIAGONAL_TOL).then(|| {
        let w = m.weights().map(|x| x.clamp(0.0, 1.0));
        let s: f64 = w.iter().sum();
        BellMixture {
            a: w[0] / s,
            b: w[1] / s,
            c: w[2] / s,
            d: w[3] / s,
        }
    }))
}

/// Finds every landmark for a completed sweep.
pub fn detect_events(table: &SweepTable) -> Result<EventMarkers> {
    let range = table.l_range();
    let model = &table.model;
    let (sudden_change, esd) = match input_mixture(&table.spec)? {
        Some(m) => (
            sudden_change_kappa(&m).and_then(|k| analytic_point(model, k, range)),
            esd_kappa(&m).and_then(|k| analytic_point(model, k, range)),
        ),
        None => (sweep_sudden_change(table)?, sweep_esd(table)),
    };
    let plateaus = detect_plateaus(table, sudden_change.map(|e| e.l));
    Ok(EventMarkers {
        sudden_change,
        esd,
        qc_cross_intervals: qc_cross_intervals(table),
        plateaus,
    })
}

fn sweep_point(model: &DephasingModel, l: f64) -> Result<EventPoint> {
    Ok(EventPoint {
        l,
        kappa_abs: kappa_of_thickness(model, l)?.kappa_abs,
        source: EventSource::Sweep,
        extrapolated: false,
    })
}

/// First sign change of `Λ` from positive to non-positive.
fn sweep_esd(table: &SweepTable) -> Option<EventPoint> {
    let rows = &table.rows;
    if rows.first()?.lambda <= 0.0 {
        return None;
    }
    let i = rows.iter().position(|r| r.lambda <= 0.0)?;
    let l = interpolate_zero(rows[i - 1].l, rows[i - 1].lambda, rows[i].l, rows[i].lambda);
    sweep_point(&table.model, l).ok()
}

/// Bloch axis of a measurement; `n` and `-n` describe the same measurement.
fn bloch_axis(dir: &MeasurementDirection) -> [f64; 3] {
    let t = 2.0 * dir.theta;
    [t.sin() * dir.phi.cos(), t.sin() * dir.phi.sin(), t.cos()]
}

/// Locates the first jump of the optimal measurement axis between
/// neighbouring rows.
fn sweep_sudden_change(table: &SweepTable) -> Result<Option<EventPoint>> {
    const JUMP_COS: f64 = 0.9; // about 25 degrees
    let settings = OptimizerSettings::default();
    let axes = table
        .rows
        .par_iter()
        .map(|row| {
            let rho = evolve(&table.spec, &table.model, row.l)?;
            let (_, dir) = classical_correlation_numeric(&rho, &settings)?;
            Ok(bloch_axis(&dir))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, w) in axes.windows(2).enumerate() {
        let cos: f64 = (0..3).map(|k| w[0][k] * w[1][k]).sum::<f64>().abs();
        if cos < JUMP_COS {
            let l = 0.5 * (table.rows[i].l + table.rows[i + 1].l);
            return sweep_point(&table.model, l).map(Some);
        }
    }
    Ok(None)
}

fn is_flat<'a>(values: impl Iterator<Item = &'a f64>) -> bool {
    let (mut lo, mut hi, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        n += 1;
    }
    n >= 2 && hi - lo <= PLATEAU_TOL
}

fn detect_plateaus(table: &SweepTable, sudden_change: Option<f64>) -> Plateaus {
    let Some(l_sc) = sudden_change else {
        return Plateaus::default();
    };
    let before: Vec<&SweepRow> = table.rows.iter().filter(|r| r.l < l_sc).collect();
    let after: Vec<&SweepRow> = table.rows.iter().filter(|r| r.l > l_sc).collect();
    Plateaus {
        frozen_q: is_flat(before.iter().map(|r| &r.quantum)).then_some(Interval {
            start: 0.0,
            end: Some(l_sc),
        }),
        frozen_c: is_flat(after.iter().map(|r| &r.classical)).then_some(Interval {
            start: l_sc,
            end: None,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// Guesses the format from a file extension; CSV unless it ends in `.json`.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

pub const CSV_HEADER: &str = "L_lambda0,p,kappa_abs,I,C,Q,Lambda,En,Rn,D";

/// Formats `x` with 9 significant digits; plain decimal for magnitudes in
/// `[1e-4, 1e9)`, scientific otherwise.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, x)
    } else {
        sci
    }
}

fn csv_opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

pub fn to_csv(table: &SweepTable) -> String {
    let mut out = String::with_capacity(64 * (table.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            format_sig(r.l),
            format_sig(r.p),
            format_sig(r.kappa_abs),
            format_sig(r.total),
            format_sig(r.classical),
            format_sig(r.quantum),
            format_sig(r.lambda),
            format_sig(r.en),
            csv_opt(r.rn),
            csv_opt(r.d),
        );
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SweepDocument {
    #[serde(flatten)]
    table: SweepTable,
    markers: EventMarkers,
}

pub fn to_json(table: &SweepTable, markers: &EventMarkers) -> Result<String> {
    let doc = SweepDocument {
        table: table.clone(),
        markers: markers.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Inverse of [`to_json`].
pub fn from_json(text: &str) -> Result<(SweepTable, EventMarkers)> {
    let doc: SweepDocument = serde_json::from_str(text)?;
    Ok((doc.table, doc.markers))
}

/// Writes the table (and, for JSON, the markers) to `out`. CSV output
/// carries the table only.
pub fn emit<W: Write>(
    table: &SweepTable,
    markers: &EventMarkers,
    format: OutputFormat,
    out: &mut W,
) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(table),
        OutputFormat::Json => to_json(table, markers)?,
    };
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn emit_to_path(
    table: &SweepTable,
    markers: &EventMarkers,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let mut buf = Vec::new();
    emit(table, markers, format, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{four_mix_mixture, interference_mixture};
    use approx::assert_abs_diff_eq;

    #[test]
    fn sudden_change_examples() {
        let model = DephasingModel::default();
        let m = interference_mixture(0.75).unwrap();
        assert_abs_diff_eq!(sudden_change_kappa(&m).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            sudden_change_point(&m, &model).unwrap(),
            138.0,
            epsilon = 1e-9
        );

        let m = four_mix_mixture(0.9, 0.9).unwrap();
        assert_abs_diff_eq!(sudden_change_kappa(&m).unwrap(), 0.8, epsilon = 1e-12);
        // 138 * sqrt(log2(1.25))
        assert_abs_diff_eq!(
            sudden_change_point(&m, &model).unwrap(),
            78.29941659447361,
            epsilon = 1e-8
        );

        assert_eq!(
            sudden_change_point(&interference_mixture(1.0).unwrap(), &model),
            None
        );
        assert_eq!(
            sudden_change_point(&interference_mixture(0.5).unwrap(), &model),
            None
        );
    }

    #[test]
    fn esd_examples() {
        let model = DephasingModel::default();
        let m = interference_mixture(0.75).unwrap();
        assert_abs_diff_eq!(esd_kappa(&m).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        // 138 * sqrt(log2 3)
        assert_abs_diff_eq!(
            esd_point(&m, &model).unwrap(),
            173.735505478108,
            epsilon = 1e-8
        );

        let m = four_mix_mixture(0.9, 0.9).unwrap();
        assert_abs_diff_eq!(esd_kappa(&m).unwrap(), 0.225, epsilon = 1e-12);
        assert_abs_diff_eq!(
            esd_point(&m, &model).unwrap(),
            202.44195936506722,
            epsilon = 1e-8
        );

        assert_eq!(esd_point(&interference_mixture(0.5).unwrap(), &model), None);
        // Φ- stays entangled at every finite thickness: λ_max = 1/2 only at κ = 0
        let pure = BellMixture::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(esd_point(&pure, &model), None);
    }

    #[test]
    fn format_sig_examples() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(0.18872187554086717), "0.188721876");
        assert_eq!(format_sig(138.0), "138.000000");
        assert_eq!(format_sig(1.0), "1.00000000");
        assert_eq!(format_sig(-0.5), "-0.500000000");
        assert_eq!(format_sig(9.9999999996), "10.0000000");
        assert_eq!(format_sig(2.220446049250313e-16), "2.22044605e-16");
    }

    #[test]
    fn qc_intervals_interpolate() {
        let spec = StateFamilySpec::Interference { b: 0.75 };
        let mk = |l: f64, q: f64, c: f64| SweepRow {
            l,
            p: 0.0,
            kappa_abs: 1.0,
            total: q + c,
            classical: c,
            quantum: q,
            lambda: 0.0,
            en: 0.0,
            rn: None,
            d: None,
        };
        let table = SweepTable {
            spec,
            model: DephasingModel::default(),
            rows: vec![
                mk(0.0, 0.1, 0.2),
                mk(1.0, 0.3, 0.2),
                mk(2.0, 0.3, 0.2),
                mk(3.0, 0.1, 0.3),
                mk(4.0, 0.5, 0.3),
            ],
        };
        let iv = qc_cross_intervals(&table);
        assert_eq!(iv.len(), 2);
        assert_abs_diff_eq!(iv[0].0, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(iv[0].1, 2.0 + 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(iv[1].0, 3.5, epsilon = 1e-15);
        assert_eq!(iv[1].1, 4.0);
    }

    #[test]
    fn sweep_rejects_bad_arguments() {
        let spec = StateFamilySpec::Interference { b: 0.75 };
        let model = DephasingModel::default();
        assert!(sweep(&spec, &model, 100.0, 1).is_err());
        assert!(sweep(&spec, &model, 0.0, 5).is_err());
        assert!(sweep(&StateFamilySpec::Interference { b: 2.0 }, &model, 10.0, 5).is_err());
    }
}
