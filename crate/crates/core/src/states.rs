//! Bell basis, Bell-diagonal mixtures and the two prepared input families.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::linalg::{cr, trace_distance, ComplexMatrix, C64};

const WEIGHT_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Order used for [`BellMixture`] weights.
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn ket(self) -> [C64; 4] {
        let s = cr(std::f64::consts::FRAC_1_SQRT_2);
        let z = C64::default();
        match self {
            BellState::PhiPlus => [s, z, z, s],
            BellState::PhiMinus => [s, z, z, -s],
            BellState::PsiPlus => [z, s, s, z],
            BellState::PsiMinus => [z, s, -s, z],
        }
    }
}

/// Rank-one projector onto a Bell state.
pub fn bell_state(kind: BellState) -> ComplexMatrix {
    ComplexMatrix::projector(&kind.ket())
}

/// Weights of `|Φ+>`, `|Φ->`, `|Ψ+>`, `|Ψ->`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellMixture {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl BellMixture {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = BellMixture { a, b, c, d };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            check_range(name, w, 0.0, 1.0, "[0, 1]")?;
        }
        let sum = self.weights().iter().sum::<f64>();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::OutOfRange {
                name: "a+b+c+d",
                value: sum,
                range: "1 within 1e-10",
            });
        }
        Ok(())
    }

    pub fn weights(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights().into_iter().fold(f64::MIN, f64::max)
    }

    /// Diagonal entries of the correlation tensor `T_kk = Tr(ρ σ_k ⊗ σ_k)`
    /// for `k = x, y, z`.
    pub fn correlation_diagonal(&self) -> [f64; 3] {
        let BellMixture { a, b, c, d } = *self;
        [a - b + c - d, -a + b + c - d, a + b - c - d]
    }
}

/// `a P(Φ+) + b P(Φ-) + c P(Ψ+) + d P(Ψ-)`.
pub fn from_mixture(m: &BellMixture) -> Result<ComplexMatrix> {
    m.validate()?;
    let mut rho = ComplexMatrix::zeros(4);
    for (kind, w) in BellState::ALL.into_iter().zip(m.weights()) {
        if w != 0.0 {
            rho = &rho + &bell_state(kind).scale(cr(w));
        }
    }
    Ok(rho)
}

/// The interference family `b P(Φ-) + (1-b) P(Ψ-)`.
pub fn interference_state(b: f64) -> Result<ComplexMatrix> {
    from_mixture(&interference_mixture(b)?)
}

pub fn interference_mixture(b: f64) -> Result<BellMixture> {
    check_range("b", b, 0.0, 1.0, "[0, 1]")?;
    BellMixture::new(0.0, b, 0.0, 1.0 - b)
}

/// The four-Bell family `dR P(Φ+) + b(1-R) P(Φ-) + bR P(Ψ+) + d(1-R) P(Ψ-)`
/// with `d = 1 - b`.
pub fn four_mix_state(b: f64, r: f64) -> Result<ComplexMatrix> {
    from_mixture(&four_mix_mixture(b, r)?)
}

pub fn four_mix_mixture(b: f64, r: f64) -> Result<BellMixture> {
    check_range("b", b, 0.0, 1.0, "[0, 1]")?;
    check_range("R", r, 0.0, 1.0, "[0, 1]")?;
    let d = 1.0 - b;
    BellMixture::new(d * r, b * (1.0 - r), b * r, d * (1.0 - r))
}

/// Bell-basis weights `<B_k|ρ|B_k>` of an arbitrary state, plus the trace
/// distance between `ρ` and its Bell-diagonal truncation.
pub fn to_mixture(rho: &ComplexMatrix) -> Result<(BellMixture, f64)> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let mut w = [0.0; 4];
    for (k, kind) in BellState::ALL.into_iter().enumerate() {
        let v = kind.ket();
        let mut acc = C64::default();
        for i in 0..4 {
            for j in 0..4 {
                acc += v[i].conj() * rho[(i, j)] * v[j];
            }
        }
        w[k] = acc.re;
    }
    let mix = BellMixture {
        a: w[0],
        b: w[1],
        c: w[2],
        d: w[3],
    };
    let mut truncated = ComplexMatrix::zeros(4);
    for (kind, wk) in BellState::ALL.into_iter().zip(w) {
        truncated = &truncated + &bell_state(kind).scale(cr(wk));
    }
    let residual = trace_distance(rho, &truncated)?;
    Ok((mix, residual))
}

/// Which input state to prepare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFamilyJson", into = "StateFamilyJson")]
pub enum StateFamilySpec {
    Interference { b: f64 },
    FourMix { b: f64, r: f64 },
    Explicit(ComplexMatrix),
}

#[derive(Serialize, Deserialize)]
struct StateFamilyJson {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<ComplexMatrix>,
}

impl TryFrom<StateFamilyJson> for StateFamilySpec {
    type Error = Error;

    fn try_from(j: StateFamilyJson) -> Result<Self> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidSpec(format!("family {} requires \"{name}\"", j.family)))
        };
        let spec =
            match j.family.as_str() {
                "interference" => StateFamilySpec::Interference { b: need(j.b, "b")? },
                "four-mix" => StateFamilySpec::FourMix {
                    b: need(j.b, "b")?,
                    r: need(j.r, "R")?,
                },
                "explicit" => StateFamilySpec::Explicit(j.matrix.clone().ok_or_else(|| {
                    Error::InvalidSpec("family explicit requires \"matrix\"".into())
                })?),
                other => return Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
            };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<StateFamilySpec> for StateFamilyJson {
    fn from(s: StateFamilySpec) -> Self {
        match s {
            StateFamilySpec::Interference { b } => StateFamilyJson {
                family: "interference".into(),
                b: Some(b),
                r: None,
                matrix: None,
            },
            StateFamilySpec::FourMix { b, r } => StateFamilyJson {
                family: "four-mix".into(),
                b: Some(b),
                r: Some(r),
                matrix: None,
            },
            StateFamilySpec::Explicit(m) => StateFamilyJson {
                family: "explicit".into(),
                b: None,
                r: None,
                matrix: Some(m),
            },
        }
    }
}

impl StateFamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            StateFamilySpec::Interference { b } => interference_mixture(*b).map(drop),
            StateFamilySpec::FourMix { b, r } => four_mix_mixture(*b, *r).map(drop),
            StateFamilySpec::Explicit(m) => {
                if m.dim() != 4 {
                    return Err(Error::DimensionMismatch {
                        expected: 4,
                        got: m.dim(),
                    });
                }
                m.ensure_density(1e-10, 1e-10)
            }
        }
    }

    /// Bell weights for the parametric families; `None` for explicit matrices.
    pub fn mixture(&self) -> Option<BellMixture> {
        match self {
            StateFamilySpec::Interference { b } => interference_mixture(*b).ok(),
            StateFamilySpec::FourMix { b, r } => four_mix_mixture(*b, *r).ok(),
            StateFamilySpec::Explicit(_) => None,
        }
    }

    pub fn build(&self) -> Result<ComplexMatrix> {
        match self {
            StateFamilySpec::Interference { b } => interference_state(*b),
            StateFamilySpec::FourMix { b, r } => four_mix_state(*b, *r),
            StateFamilySpec::Explicit(m) => {
                self.validate()?;
                Ok(m.clone())
            }
        }
    }
}
