//! One-sided phase damping on qubit A and the quartz-thickness calibration.
//!
//! A Gaussian photon spectrum gives a coherence factor that decays as a
//! Gaussian in the delay, and the delay is proportional to the plate
//! thickness. With the thickness measured in units of the central wavelength
//! and calibrated by the thickness `L_half` at which `|κ| = 1/2`:
//!
//! ```text
//! |κ(L)| = 2^(-(L / L_half)^2),    p = 1 - |κ|
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::linalg::{cr, ComplexMatrix};
use crate::states::StateFamilySpec;

pub const DEFAULT_L_HALF: f64 = 138.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralProfile {
    Gaussian,
}

/// Thickness-to-coherence calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingModel {
    pub profile: SpectralProfile,
    #[serde(rename = "l_half_lambda0")]
    pub l_half: f64,
}

impl Default for DephasingModel {
    fn default() -> Self {
        DephasingModel {
            profile: SpectralProfile::Gaussian,
            l_half: DEFAULT_L_HALF,
        }
    }
}

impl DephasingModel {
    pub fn gaussian(l_half: f64) -> Result<Self> {
        let m = DephasingModel {
            profile: SpectralProfile::Gaussian,
            l_half,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l_half.is_finite() && self.l_half > 0.0) {
            return Err(Error::OutOfRange {
                name: "l_half",
                value: self.l_half,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    /// Inverse of the calibration: the thickness at which `|κ|` reaches
    /// `kappa_abs`. `None` for `|κ| = 0`, which is only reached as `L → ∞`.
    pub fn thickness_for_kappa(&self, kappa_abs: f64) -> Option<f64> {
        if !(kappa_abs > 0.0 && kappa_abs <= 1.0) {
            return None;
        }
        match self.profile {
            SpectralProfile::Gaussian => Some(self.l_half * (-kappa_abs.log2()).max(0.0).sqrt()),
        }
    }
}

/// Damping probability `p` and coherence factor `|κ| = 1 - p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStrength {
    pub p: f64,
    pub kappa_abs: f64,
}

impl ChannelStrength {
    pub fn from_kappa(kappa_abs: f64) -> Result<Self> {
        check_range("|kappa|", kappa_abs, 0.0, 1.0, "[0, 1]")?;
        Ok(ChannelStrength {
            p: 1.0 - kappa_abs,
            kappa_abs,
        })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        check_range("p", p, 0.0, 1.0, "[0, 1]")?;
        Ok(ChannelStrength {
            p,
            kappa_abs: 1.0 - p,
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_range("p", self.p, 0.0, 1.0, "[0, 1]")?;
        check_range("|kappa|", self.kappa_abs, 0.0, 1.0, "[0, 1]")?;
        if (self.p + self.kappa_abs - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange {
                name: "p + |kappa|",
                value: self.p + self.kappa_abs,
                range: "1 within 1e-12",
            });
        }
        Ok(())
    }
}

pub fn kappa_of_thickness(model: &DephasingModel, l: f64) -> Result<ChannelStrength> {
    model.validate()?;
    if !(l.is_finite() && l >= 0.0) {
        return Err(Error::OutOfRange {
            name: "L",
            value: l,
            range: "[0, inf)",
        });
    }
    let kappa = match model.profile {
        SpectralProfile::Gaussian => {
            let x = l / model.l_half;
            (-x * x).exp2()
        }
    };
    ChannelStrength::from_kappa(kappa)
}

/// Kraus operators on qubit A: `√(1-p) I`, `√p |0><0|`, `√p |1><1|`.
pub fn kraus_operators_a(s: &ChannelStrength) -> [ComplexMatrix; 3] {
    let keep = (1.0 - s.p).sqrt();
    let flip = s.p.sqrt();
    [
        ComplexMatrix::from_diag(&[keep, keep]),
        ComplexMatrix::from_diag(&[flip, 0.0]),
        ComplexMatrix::from_diag(&[0.0, flip]),
    ]
}

/// `(E ⊗ id)(ρ)`: every element `<ij|ρ|kl>` with `i ≠ k` is multiplied by
/// `|κ|`; populations and B-coherences are untouched.
pub fn apply_dephasing_a(rho: &ComplexMatrix, s: &ChannelStrength) -> Result<ComplexMatrix> {
    s.validate()?;
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let mut out = rho.clone();
    let factor = cr(s.kappa_abs);
    for row in 0..4 {
        for col in 0..4 {
            if row / 2 != col / 2 {
                out[(row, col)] *= factor;
            }
        }
    }
    Ok(out)
}

/// Builds the input state and sends qubit A through the calibrated channel.
pub fn evolve(spec: &StateFamilySpec, model: &DephasingModel, l: f64) -> Result<ComplexMatrix> {
    let strength = kappa_of_thickness(model, l)?;
    apply_dephasing_a(&spec.build()?, &strength)
}
