//! Correlation quantifiers for two-qubit states.
//!
//! Total correlation is the mutual information. Classical correlation is
//! the largest reduction in the entropy of A obtainable by a rank-one
//! projective measurement on B; discord is the difference. Entanglement is
//! reported through Wootters' concurrence, the entanglement of formation
//! and, for Bell-diagonal states, the relative entropy of entanglement.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::linalg::{
    binary_entropy, cr, eigvals_2x2, entropy_of_spectrum, hermitian_eig, partial_trace, pauli,
    shannon_bits, sqrt_psd, tensor, vn_entropy, ComplexMatrix, Subsystem, C64,
};
use crate::search::golden_section;
use crate::states::{to_mixture, BellMixture};

/// States whose off-Bell residual is below this are treated as Bell-diagonal.
pub const BELL_DIAGONAL_TOL: f64 = 1e-9;
const DENSITY_TOL: f64 = 1e-9;
const PROB_TOL: f64 = 1e-10;

/// Projective measurement on B along `cosθ|0> + sinθ e^{iφ}|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDirection {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI, "[0, pi]")?;
        check_range("phi", phi, 0.0, TAU, "[0, 2pi]")?;
        Ok(MeasurementDirection { theta, phi })
    }

    pub fn from_degrees(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta.to_radians(), phi.to_radians())
    }

    pub fn theta_degrees(&self) -> f64 {
        self.theta.to_degrees()
    }

    pub fn ket(&self) -> [C64; 2] {
        [
            cr(self.theta.cos()),
            C64::from_polar(self.theta.sin(), self.phi),
        ]
    }

    /// `sinθ|0> - cosθ e^{iφ}|1>`, orthogonal to [`ket`](Self::ket).
    pub fn orthogonal_ket(&self) -> [C64; 2] {
        [
            cr(self.theta.sin()),
            -C64::from_polar(self.theta.cos(), self.phi),
        ]
    }

    /// Picks the representative with `θ ≤ π/2` among the two angle pairs
    /// describing the same ray, and wraps `φ` into `[0, 2π)`.
    fn canonical(theta: f64, phi: f64) -> Self {
        let (theta, phi) = if theta > PI / 2.0 + 1e-12 {
            (PI - theta, phi + PI)
        } else {
            (theta, phi)
        };
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        MeasurementDirection {
            theta: theta.clamp(0.0, PI),
            phi,
        }
    }
}

/// How the post-measurement entropy of A is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeMode {
    /// `q S(ρ_A^l) + (1 - q) S(ρ_A^{l⊥})`, the quantity minimized for C.
    #[default]
    Averaged,
    /// `S(ρ_A^l)` for the `|l>` outcome alone.
    Single,
}

/// Unnormalized `Tr_B[(I ⊗ |v><v|) ρ (I ⊗ |v><v|)]`.
fn project_b(rho: &ComplexMatrix, v: &[C64; 2]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for k in 0..2 {
            let mut acc = C64::default();
            for j in 0..2 {
                for m in 0..2 {
                    acc += v[j].conj() * rho[(2 * i + j, 2 * k + m)] * v[m];
                }
            }
            out[(i, k)] = acc;
        }
    }
    out
}

/// Probability and entropy of A for the outcome `|v>` on B.
fn outcome_entropy(rho: &ComplexMatrix, v: &[C64; 2]) -> (f64, f64) {
    let unnorm = project_b(rho, v);
    let q = unnorm.trace().re;
    if q <= PROB_TOL {
        return (q, 0.0);
    }
    let [l0, l1] = eigvals_2x2(&unnorm);
    (q, shannon_bits(&[l0 / q, l1 / q]))
}

fn cond_entropy_unchecked(
    rho: &ComplexMatrix,
    dir: &MeasurementDirection,
    mode: OutcomeMode,
) -> (f64, f64) {
    let (q, s) = outcome_entropy(rho, &dir.ket());
    match mode {
        OutcomeMode::Single => (q, s),
        OutcomeMode::Averaged => {
            let (q_perp, s_perp) = outcome_entropy(rho, &dir.orthogonal_ket());
            (q, q.max(0.0) * s + q_perp.max(0.0) * s_perp)
        }
    }
}

/// Entropy of A after measuring B along `dir`.
///
/// In [`OutcomeMode::Single`] an outcome with vanishing probability has no
/// post-measurement state and scores zero.
pub fn conditional_entropy_after_b(
    rho: &ComplexMatrix,
    dir: &MeasurementDirection,
    mode: OutcomeMode,
) -> Result<f64> {
    ensure_two_qubit_state(rho)?;
    let (q, s) = cond_entropy_unchecked(rho, dir, mode);
    if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&q) {
        return Err(Error::OutOfRange {
            name: "outcome probability",
            value: q,
            range: "[0, 1]",
        });
    }
    Ok(s)
}

fn ensure_two_qubit_state(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    rho.ensure_density(DENSITY_TOL, DENSITY_TOL)
}

/// `S(ρ_A) + S(ρ_B) - S(ρ_AB)`.
pub fn mutual_information(rho: &ComplexMatrix) -> Result<f64> {
    ensure_two_qubit_state(rho)?;
    let s_ab = vn_entropy(rho)?;
    let s_a = vn_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let s_b = vn_entropy(&partial_trace(rho, Subsystem::B)?)?;
    Ok(s_a + s_b - s_ab)
}

/// Grid and refinement budget for the numeric measurement optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizerSettings {
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Golden-section iterations per coordinate line search.
    pub refine_iters: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            grid_theta: 64,
            grid_phi: 32,
            refine_iters: 40,
        }
    }
}

const REFINE_CYCLES: usize = 6;

/// Classical correlation by direct minimization of the averaged conditional
/// entropy over `(θ, φ)`.
///
/// A coarse grid (θ including both ends of `[0, π]`, φ uniform on
/// `[0, 2π)`) seeds alternating golden-section line searches in θ and φ,
/// each over one grid step either side of the current point. Grid ties go
/// to the first point in scan order, so the result is reproducible.
pub fn classical_correlation_numeric(
    rho: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<(f64, MeasurementDirection)> {
    ensure_two_qubit_state(rho)?;
    if settings.grid_theta < 8 || settings.grid_phi < 8 {
        return Err(Error::OutOfRange {
            name: "grid size",
            value: settings.grid_theta.min(settings.grid_phi) as f64,
            range: ">= 8",
        });
    }
    let s_a = vn_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let (min_entropy, dir) = minimize_conditional_entropy(rho, settings);
    Ok(((s_a - min_entropy).max(0.0), dir))
}

fn minimize_conditional_entropy(
    rho: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> (f64, MeasurementDirection) {
    let f = |theta: f64, phi: f64| {
        cond_entropy_unchecked(
            rho,
            &MeasurementDirection { theta, phi },
            OutcomeMode::Averaged,
        )
        .1
    };
    let h_theta = PI / (settings.grid_theta - 1) as f64;
    let h_phi = TAU / settings.grid_phi as f64;

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..settings.grid_theta {
        let theta = i as f64 * h_theta;
        for j in 0..settings.grid_phi {
            let phi = j as f64 * h_phi;
            let v = f(theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }

    let (mut value, mut theta, mut phi) = best;
    for _ in 0..REFINE_CYCLES {
        let start = value;
        let lo = (theta - h_theta).max(0.0);
        let hi = (theta + h_theta).min(PI);
        let (t, v) = golden_section(|t| f(t, phi), lo, hi, settings.refine_iters);
        if v < value {
            theta = t;
            value = v;
        }
        let (p, v) = golden_section(
            |p| f(theta, p),
            phi - h_phi,
            phi + h_phi,
            settings.refine_iters,
        );
        if v < value {
            phi = p;
            value = v;
        }
        if start - value <= 1e-15 {
            break;
        }
    }
    (value, MeasurementDirection::canonical(theta, phi))
}

/// Which term attains `η = max(|α|, |β|, |γ|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaBranch {
    Alpha,
    Beta,
    Gamma,
}

/// Closed-form classical correlation of a dephased Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticClassical {
    pub value: f64,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub branch: EtaBranch,
}

/// `C = 1 - H((1 + η)/2)` with `α = (1-p)(a-b+c-d)`, `β = (1-p)(c-d-a+b)`,
/// `γ = a+b-c-d`. Ties between `γ` and the κ-dependent terms report `γ`.
pub fn classical_correlation_analytic(m: &BellMixture, p: f64) -> Result<AnalyticClassical> {
    m.validate()?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let kappa = 1.0 - p;
    let [tx, ty, tz] = m.correlation_diagonal();
    let (alpha, beta, gamma) = (kappa * tx, kappa * ty, tz);
    let (eta, branch) = if gamma.abs() >= alpha.abs() && gamma.abs() >= beta.abs() {
        (gamma.abs(), EtaBranch::Gamma)
    } else if alpha.abs() >= beta.abs() {
        (alpha.abs(), EtaBranch::Alpha)
    } else {
        (beta.abs(), EtaBranch::Beta)
    };
    let eta = eta.min(1.0);
    Ok(AnalyticClassical {
        value: classical_from_eta(eta),
        eta,
        alpha,
        beta,
        gamma,
        branch,
    })
}

/// `((1-η)/2) log2(1-η) + ((1+η)/2) log2(1+η)`.
pub fn classical_from_eta(eta: f64) -> f64 {
    (1.0 - binary_entropy(0.5 * (1.0 + eta))).max(0.0)
}

/// Discord `I - C`, using the closed form for C on Bell-diagonal states and
/// numeric optimization otherwise.
pub fn quantum_discord(rho: &ComplexMatrix) -> Result<f64> {
    let i = mutual_information(rho)?;
    let (mix, residual) = to_mixture(rho)?;
    let c = if residual <= BELL_DIAGONAL_TOL {
        classical_correlation_analytic(&clamp_mixture(mix), 0.0)?.value
    } else {
        classical_correlation_numeric(rho, &OptimizerSettings::default())?.0
    };
    Ok(i - c)
}

/// Bell weights computed from a numerically Bell-diagonal matrix can sit a
/// few ulps outside `[0, 1]`.
fn clamp_mixture(m: BellMixture) -> BellMixture {
    let w = m.weights().map(|x| x.clamp(0.0, 1.0));
    let s: f64 = w.iter().sum();
    BellMixture {
        a: w[0] / s,
        b: w[1] / s,
        c: w[2] / s,
        d: w[3] / s,
    }
}

/// Wootters' `Λ = √χ1 - √χ2 - √χ3 - √χ4` and `Υ = max(0, Λ)`, where `χ` are
/// the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
///
/// Those coincide with the eigenvalues of the Hermitian matrix
/// `√ρ ρ̃ √ρ`, which is what gets diagonalized.
pub fn concurrence(rho: &ComplexMatrix) -> Result<(f64, f64)> {
    ensure_two_qubit_state(rho)?;
    let yy = tensor(&pauli(2), &pauli(2));
    let flipped = &(&yy * &rho.conj()) * &yy;
    let root = sqrt_psd(rho)?;
    let m = (&(&root * &flipped) * &root).hermitian_part();
    let chi = hermitian_eig(&m)?.values;
    let s: Vec<f64> = chi.iter().map(|x| x.max(0.0).sqrt()).collect();
    let lambda = s[0] - s[1] - s[2] - s[3];
    Ok((lambda, lambda.max(0.0)))
}

/// `H((1 + √(1 - Υ²)) / 2)`.
pub fn entanglement_of_formation(upsilon: f64) -> Result<f64> {
    check_range("Upsilon", upsilon, 0.0, 1.0, "[0, 1]")?;
    if upsilon == 0.0 {
        return Ok(0.0);
    }
    Ok(binary_entropy(
        0.5 * (1.0 + (1.0 - upsilon * upsilon).sqrt()),
    ))
}

/// Relative entropy of entanglement of a Bell-diagonal state from its
/// largest eigenvalue: zero up to 1/2, `1 - H(λ)` beyond.
pub fn ree_bell_diagonal(lambda_max: f64) -> Result<f64> {
    check_range("lambda_max", lambda_max, 0.0, 1.0, "[0, 1]")?;
    if lambda_max <= 0.5 {
        return Ok(0.0);
    }
    Ok(1.0 - binary_entropy(lambda_max))
}

/// `T_ij = Tr(ρ σ_i ⊗ σ_j)` for `i, j ∈ {x, y, z}`.
pub fn correlation_tensor(rho: &ComplexMatrix) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let op = tensor(&pauli(i + 1), &pauli(j + 1));
            *entry = (&op * rho).trace().re;
        }
    }
    t
}

/// Largest singular value of the correlation tensor.
fn correlation_strength(rho: &ComplexMatrix) -> Result<f64> {
    let t = correlation_tensor(rho);
    let mut gram = ComplexMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            gram[(i, j)] = cr((0..3).map(|k| t[k][i] * t[k][j]).sum());
        }
    }
    let top = hermitian_eig(&gram)?.values[0];
    Ok(top.max(0.0).sqrt().min(1.0))
}

/// Every correlation quantifier for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    #[serde(rename = "I")]
    pub total: f64,
    #[serde(rename = "C")]
    pub classical: f64,
    #[serde(rename = "Q")]
    pub quantum: f64,
    pub eta: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    #[serde(rename = "Upsilon")]
    pub upsilon: f64,
    #[serde(rename = "En")]
    pub en: f64,
    /// Relative entropy of entanglement; only available for Bell-diagonal
    /// states.
    #[serde(rename = "Rn")]
    pub rn: Option<f64>,
    /// `Q - Rn`, available together with `Rn`.
    #[serde(rename = "D")]
    pub d: Option<f64>,
    pub lambda_spectrum: [f64; 4],
    pub rn_available: bool,
}

pub fn full_report(rho: &ComplexMatrix) -> Result<CorrelationReport> {
    full_report_with(rho, &OptimizerSettings::default())
}

pub fn full_report_with(
    rho: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<CorrelationReport> {
    ensure_two_qubit_state(rho)?;
    let spec = hermitian_eig(rho)?;
    let s_ab = entropy_of_spectrum(&spec.values)?;
    let s_a = vn_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let s_b = vn_entropy(&partial_trace(rho, Subsystem::B)?)?;
    let total = s_a + s_b - s_ab;
    let lambda_spectrum = [
        spec.values[0],
        spec.values[1],
        spec.values[2],
        spec.values[3],
    ];

    let (mix, residual) = to_mixture(rho)?;
    let (classical, eta, lambda, rn) = if residual <= BELL_DIAGONAL_TOL {
        let mix = clamp_mixture(mix);
        let analytic = classical_correlation_analytic(&mix, 0.0)?;
        let lambda_max = mix.max_weight();
        (
            analytic.value,
            analytic.eta,
            2.0 * lambda_max - 1.0,
            Some(ree_bell_diagonal(lambda_max)?),
        )
    } else {
        let (c, _) = classical_correlation_numeric(rho, settings)?;
        let (lambda, _) = concurrence(rho)?;
        (c, correlation_strength(rho)?, lambda, None)
    };
    let upsilon = lambda.clamp(0.0, 1.0);
    let quantum = total - classical;
    Ok(CorrelationReport {
        total,
        classical,
        quantum,
        eta,
        lambda,
        upsilon,
        en: entanglement_of_formation(upsilon)?,
        rn,
        d: rn.map(|r| quantum - r),
        lambda_spectrum,
        rn_available: rn.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_dephasing_a, ChannelStrength};
    use crate::linalg::c;
    use crate::states::{bell_state, interference_state, BellState};
    use approx::assert_abs_diff_eq;

    fn dephased(b: f64, kappa: f64) -> ComplexMatrix {
        apply_dephasing_a(
            &interference_state(b).unwrap(),
            &ChannelStrength::from_kappa(kappa).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn mutual_information_examples() {
        let phi = bell_state(BellState::PhiMinus);
        assert_abs_diff_eq!(mutual_information(&phi).unwrap(), 2.0, epsilon = 1e-12);
        let mixed = ComplexMatrix::identity(4).scale(cr(0.25));
        assert_abs_diff_eq!(mutual_information(&mixed).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            mutual_information(&dephased(0.75, 0.5)).unwrap(),
            0.3774437510817341,
            epsilon = 1e-10
        );
    }

    #[test]
    fn conditional_entropy_examples() {
        let rho = interference_state(0.75).unwrap();
        for mode in [OutcomeMode::Averaged, OutcomeMode::Single] {
            let d45 = MeasurementDirection::from_degrees(45.0, 0.0).unwrap();
            let d0 = MeasurementDirection::from_degrees(0.0, 0.0).unwrap();
            assert_abs_diff_eq!(
                conditional_entropy_after_b(&rho, &d45, mode).unwrap(),
                0.0,
                epsilon = 1e-7
            );
            assert_abs_diff_eq!(
                conditional_entropy_after_b(&rho, &d0, mode).unwrap(),
                0.8112781244591328,
                epsilon = 1e-12
            );
            let flat = dephased(0.75, 0.0);
            assert_abs_diff_eq!(
                conditional_entropy_after_b(&flat, &d45, mode).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn single_mode_with_impossible_outcome() {
        let hh = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        let v = MeasurementDirection::from_degrees(90.0, 0.0).unwrap();
        assert_eq!(
            conditional_entropy_after_b(&hh, &v, OutcomeMode::Single).unwrap(),
            0.0
        );
    }

    #[test]
    fn numeric_classical_examples() {
        let phi = bell_state(BellState::PhiMinus);
        let (corr, dir) =
            classical_correlation_numeric(&phi, &OptimizerSettings::default()).unwrap();
        assert_abs_diff_eq!(corr, 1.0, epsilon = 1e-9);
        assert_eq!(dir.theta, 0.0);

        let (corr, _) =
            classical_correlation_numeric(&dephased(0.75, 0.5), &OptimizerSettings::default())
                .unwrap();
        assert_abs_diff_eq!(corr, 0.18872187554086717, epsilon = 1e-9);

        let ra =
            ComplexMatrix::from_vec(2, vec![cr(0.7), c(0.1, 0.2), c(0.1, -0.2), cr(0.3)]).unwrap();
        let rb = ComplexMatrix::from_diag(&[0.4, 0.6]);
        let (corr, _) =
            classical_correlation_numeric(&tensor(&ra, &rb), &OptimizerSettings::default())
                .unwrap();
        assert_abs_diff_eq!(corr, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn numeric_rejects_tiny_grids() {
        let s = OptimizerSettings {
            grid_theta: 4,
            ..Default::default()
        };
        assert!(classical_correlation_numeric(&bell_state(BellState::PhiPlus), &s).is_err());
    }

    #[test]
    fn analytic_classical_examples() {
        let m = BellMixture::new(0.0, 0.75, 0.0, 0.25).unwrap();
        let r = classical_correlation_analytic(&m, 0.0).unwrap();
        assert_abs_diff_eq!(r.eta, 1.0);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert_eq!(r.branch, EtaBranch::Alpha);

        let r = classical_correlation_analytic(&m, 0.5).unwrap();
        assert_abs_diff_eq!(r.eta, 0.5);
        assert_abs_diff_eq!(r.value, 0.18872187554086717, epsilon = 1e-12);
        // |alpha| == |gamma| at the switch: labelled gamma
        assert_eq!(r.branch, EtaBranch::Gamma);

        let m = BellMixture::new(0.09, 0.09, 0.81, 0.01).unwrap();
        let r = classical_correlation_analytic(&m, 0.2).unwrap();
        assert_abs_diff_eq!(r.eta, 0.64, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value, 0.31992295427172013, epsilon = 1e-12);
        assert!(classical_correlation_analytic(&m, 1.5).is_err());
    }

    #[test]
    fn discord_examples() {
        assert_abs_diff_eq!(
            quantum_discord(&bell_state(BellState::PhiMinus)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        for kappa in [1.0, 0.7, 0.2, 0.0] {
            assert_abs_diff_eq!(
                quantum_discord(&dephased(0.5, kappa)).unwrap(),
                0.0,
                epsilon = 1e-12
            );
        }
        assert_abs_diff_eq!(
            quantum_discord(&dephased(0.75, 0.5)).unwrap(),
            0.18872187554086695,
            epsilon = 1e-10
        );
    }

    #[test]
    fn concurrence_examples() {
        let (l, u) = concurrence(&bell_state(BellState::PhiPlus)).unwrap();
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(u, 1.0, epsilon = 1e-7);
        let (l, _) = concurrence(&interference_state(0.75).unwrap()).unwrap();
        assert_abs_diff_eq!(l, 0.5, epsilon = 1e-7);
        let (l, u) = concurrence(&interference_state(0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(u, 0.0, epsilon = 1e-7);
        let (l, u) = concurrence(&ComplexMatrix::identity(4).scale(cr(0.25))).unwrap();
        assert_abs_diff_eq!(l, -0.5, epsilon = 1e-12);
        assert_eq!(u, 0.0);
    }

    #[test]
    fn eof_examples() {
        assert_eq!(entanglement_of_formation(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            entanglement_of_formation(1.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            entanglement_of_formation(0.5).unwrap(),
            0.35457890266527003,
            epsilon = 1e-12
        );
        assert!(entanglement_of_formation(1.1).is_err());
        let mut prev = 0.0;
        for i in 1..=100 {
            let e = entanglement_of_formation(i as f64 / 100.0).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn ree_examples() {
        assert_eq!(ree_bell_diagonal(0.5).unwrap(), 0.0);
        assert_eq!(ree_bell_diagonal(0.2).unwrap(), 0.0);
        assert_abs_diff_eq!(ree_bell_diagonal(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            ree_bell_diagonal(0.75).unwrap(),
            0.18872187554086717,
            epsilon = 1e-12
        );
        assert!(ree_bell_diagonal(-0.1).is_err());
    }

    #[test]
    fn report_for_phi_minus() {
        let r = full_report(&bell_state(BellState::PhiMinus)).unwrap();
        assert_abs_diff_eq!(r.total, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.classical, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.quantum, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.upsilon, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.en, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rn.unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.d.unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn report_for_half_dephased_interference() {
        let r = full_report(&dephased(0.75, 0.5)).unwrap();
        assert_abs_diff_eq!(r.total, 0.3774437510817341, epsilon = 1e-10);
        assert_abs_diff_eq!(r.classical, 0.18872187554086717, epsilon = 1e-12);
        assert_abs_diff_eq!(r.quantum, 0.18872187554086695, epsilon = 1e-10);
        assert_abs_diff_eq!(r.lambda, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rn.unwrap(), 0.01130059171150255, epsilon = 1e-12);
        assert_abs_diff_eq!(r.d.unwrap(), 0.1774212838293644, epsilon = 1e-10);
        let expect = [0.5625, 0.1875, 0.1875, 0.0625];
        for (g, e) in r.lambda_spectrum.iter().zip(expect) {
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn report_for_maximally_mixed() {
        let r = full_report(&ComplexMatrix::identity(4).scale(cr(0.25))).unwrap();
        for v in [r.total, r.classical, r.quantum, r.eta, r.upsilon, r.en] {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.rn.unwrap(), 0.0);
        assert_abs_diff_eq!(r.lambda, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn report_for_non_bell_state_flags_rn() {
        // |HH> mixed with a little Φ+
        let hh = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        let rho = &hh.scale(cr(0.6)) + &bell_state(BellState::PhiPlus).scale(cr(0.4));
        let r = full_report(&rho).unwrap();
        assert!(!r.rn_available);
        assert_eq!(r.rn, None);
        assert_eq!(r.d, None);
        assert_abs_diff_eq!(r.total, r.classical + r.quantum, epsilon = 1e-12);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["Rn"].is_null());
        assert_eq!(json["rn_available"], false);
    }
}
